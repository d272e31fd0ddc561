use pregelkit::algorithms::{write_results, HashMin, PageRank, ShiloachVishkin};
use pregelkit::generate::{power_law, random_graph};
use pregelkit::{run, Config, Context, Edge, Graph, MirrorThreshold, Result, VertexProgram};

/// Records `(superstep received, superstep sent)` for every message, plus
/// whatever the previous superstep's request returned.
struct Stamp;

impl VertexProgram for Stamp {
    type Id = u64;
    type Value = Vec<(u64, u64, Option<u64>)>;
    type Message = u64;
    type Response = u64;

    fn init(&self, _: u64, _: &[Edge<u64>]) -> Self::Value {
        Vec::new()
    }

    fn compute(&self, log: &mut Self::Value, msgs: &[u64], ctx: &mut Context<'_, Self>) -> Result<()> {
        let s = ctx.superstep();
        for m in msgs {
            let resp = ctx.edges().first().and_then(|e| ctx.get_resp(&e.target).ok().copied());
            log.push((s, *m, resp));
        }
        if s <= 3 {
            for e in ctx.edges() {
                ctx.send_msg(e.target, s);
                ctx.request(e.target);
            }
        } else {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn respond(&self, id: u64, _: &Self::Value) -> Option<u64> {
        Some(id * 2)
    }
}

#[test]
fn messages_and_responses_arrive_next_superstep() {
    let g = Graph::from_edges(true, false, [(1u64, 2u64, None), (2, 1, None), (3, 1, None)]);
    for workers in [1, 2, 3] {
        let out = run(&g, &Stamp, &Config::with_workers(workers)).unwrap();
        for log in out.values.values() {
            for (received, sent, _) in log {
                assert_eq!(*received, sent + 1);
            }
        }
        // 2 sends to 1 and 1 requested 2 in the same superstep
        assert!(out.values[&1].iter().any(|(_, _, r)| *r == Some(4)));
    }
}

#[test]
fn barrier_advances_without_traffic() {
    struct Idle;
    impl VertexProgram for Idle {
        type Id = u64;
        type Value = u64;
        type Message = ();
        type Response = ();
        fn init(&self, _: u64, _: &[Edge<u64>]) -> u64 {
            0
        }
        fn compute(&self, v: &mut u64, _: &[()], ctx: &mut Context<'_, Self>) -> Result<()> {
            *v = ctx.superstep();
            if ctx.superstep() == 4 {
                ctx.vote_to_halt();
            }
            Ok(())
        }
    }
    let g = Graph::from_edges(true, false, [(1u64, 2u64, None)]);
    let out = run(&g, &Idle, &Config::default()).unwrap();
    assert_eq!(out.report.supersteps, 4);
    assert_eq!(out.report.wire_total(), 0);
    assert!(out.values.values().all(|v| *v == 4));
    let numbers: Vec<u64> = out.report.steps.iter().map(|s| s.superstep).collect();
    assert_eq!(numbers, vec![1, 2, 3, 4]);
}

fn results_bytes(values: &std::collections::BTreeMap<u64, u64>) -> Vec<u8> {
    let mut buf = Vec::new();
    write_results(values.iter(), |v| v.to_string(), &mut buf).unwrap();
    buf
}

#[test]
fn runs_are_deterministic() {
    let g = power_law(4000, 6.0, 2.1, 3).unwrap();
    let cfg = Config {
        workers: 8,
        mirror: MirrorThreshold::Fixed(30.0),
        shuffle_seed: Some(5),
        ..Config::default()
    };
    let a = run(&g, &HashMin::new(), &cfg).unwrap();
    let b = run(&g, &HashMin::new(), &cfg).unwrap();
    assert_eq!(results_bytes(&a.values), results_bytes(&b.values));
    assert_eq!(a.report.to_json().unwrap(), b.report.to_json().unwrap());

    let sv = ShiloachVishkin::new(true);
    let a = run(&g, &sv, &cfg).unwrap();
    let b = run(&g, &sv, &cfg).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.report, b.report);
}

#[test]
fn combiner_is_transparent() {
    let g = random_graph(500, 6.0, false, false, 12).unwrap();
    for workers in [1, 3, 8] {
        let on = run(&g, &HashMin::new(), &Config::with_workers(workers)).unwrap();
        let off = run(
            &g,
            &HashMin::new(),
            &Config {
                workers,
                combiner: false,
                ..Config::default()
            },
        )
        .unwrap();
        assert_eq!(on.values, off.values);
        assert!(off.report.totals().msg_sent >= on.report.wire_total());
        assert!(on.report.combiner && !off.report.combiner);
    }
}

#[test]
fn report_json_schema() {
    let g = random_graph(50, 3.0, true, false, 1).unwrap();
    let cfg = Config {
        workers: 2,
        mirror: MirrorThreshold::CostModel,
        ..Config::default()
    };
    let out = run(&g, &PageRank::new(0.01), &cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out.report.to_json().unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["mirror"]["threshold"].as_f64().unwrap() > 2.0);
    let w = &v["steps"][0]["workers"][0];
    for key in ["msg_sent", "mir_sent", "req_sent", "resp_sent", "combined_away"] {
        assert!(w[key].is_u64(), "{key}");
    }
    assert_eq!(v["steps"][0]["superstep"], 1);
}

#[test]
fn compute_runs_in_ascending_id_order_within_a_worker() {
    use std::sync::Mutex;
    struct Order(Mutex<Vec<(usize, u64)>>);
    impl VertexProgram for Order {
        type Id = u64;
        type Value = ();
        type Message = ();
        type Response = ();
        fn init(&self, _: u64, _: &[Edge<u64>]) {}
        fn compute(&self, _: &mut (), _: &[()], ctx: &mut Context<'_, Self>) -> Result<()> {
            self.0.lock().unwrap().push((ctx.worker(), ctx.id()));
            ctx.vote_to_halt();
            Ok(())
        }
    }
    let g = random_graph(200, 2.0, true, false, 6).unwrap();
    let p = Order(Mutex::new(Vec::new()));
    run(&g, &p, &Config::with_workers(4)).unwrap();
    let seen = p.0.into_inner().unwrap();
    for w in 0..4 {
        let ids: Vec<u64> = seen.iter().filter(|(x, _)| *x == w).map(|(_, id)| *id).collect();
        assert!(ids.windows(2).all(|p| p[0] < p[1]));
        assert!(ids.iter().all(|id| (*id % 4) as usize == w));
    }
}
