//! Shiloach-Vishkin connected components over parent pointers `D`.
//!
//! A round is seven logical steps:
//!
//! | step | work |
//! |------|------|
//! | L0 | shortcut `D = D[D]` (from round 2 on); broadcast `D`; ask for `D[D]` |
//! | L1 | tree hooking: if `D` is a root and a neighbor has a smaller `D`, propose it to the root |
//! | L2 | roots take the smallest proposal; ask for `D[D]` |
//! | L3 | star check: `D[D] != D` clears this vertex and its grandparent |
//! | L4 | apply clears; ask for `(D[D], star[D])`; broadcast `D` |
//! | L5 | `star &= star[D]`; star hooking toward a smaller neighbor `D` |
//! | L6 | stop if every vertex is in a star and nothing hooked; else roots apply hooks and ask for `D[D]` |
//!
//! Hooks only go toward smaller pointers, so the final `D` of every vertex is
//! the smallest id of its component.
//!
//! With request-respond enabled the reads of `D[D]` use the request channel.
//! Without it the program asks through plain messages and every read costs
//! an extra superstep in which parents answer their children, giving an
//! 11-superstep round.

use std::marker::PhantomData;

use crate::channel::Combiner;
use crate::engine::{AggregateOp, AggregateValue, Aggregator, Context, VertexProgram};
use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};

const ALL_STAR: &str = "all_star";
const HOOKED: &str = "hooked";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    L0,
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    /// Parents answer pointer requests (manual mode only).
    Answer,
}

const ROUND_REQ: [Step; 7] = [Step::L0, Step::L1, Step::L2, Step::L3, Step::L4, Step::L5, Step::L6];
const ROUND_MANUAL: [Step; 11] = [
    Step::L0,
    Step::Answer,
    Step::L1,
    Step::L2,
    Step::Answer,
    Step::L3,
    Step::L4,
    Step::Answer,
    Step::L5,
    Step::L6,
    Step::Answer,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SvMessage<I> {
    /// A pointer value: a broadcast `D`, a hook proposal or a star clear.
    Val(I),
    /// Pointer request from a child.
    Req(I),
    /// Answer to `Req`: the parent's `(D, star)`.
    Resp(I, bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvState<I> {
    pub d: I,
    pub star: bool,
    /// Smallest `Val` seen in an answer step (manual mode).
    stash: Option<I>,
    /// Last `Resp` received (manual mode).
    resp: Option<(I, bool)>,
}

#[derive(Clone, Copy, Debug)]
pub struct ShiloachVishkin<I> {
    pub reqresp: bool,
    _id: PhantomData<fn() -> I>,
}

impl<I> ShiloachVishkin<I> {
    pub fn new(reqresp: bool) -> Self {
        ShiloachVishkin {
            reqresp,
            _id: PhantomData,
        }
    }

    /// Supersteps per round.
    pub fn cycle(&self) -> u64 {
        if self.reqresp {
            ROUND_REQ.len() as u64
        } else {
            ROUND_MANUAL.len() as u64
        }
    }

    pub fn rounds(&self, supersteps: u64) -> u64 {
        super::rounds(supersteps, self.cycle())
    }
}

fn min_val<I: VertexId>(a: &SvMessage<I>, b: &SvMessage<I>) -> SvMessage<I> {
    match (a, b) {
        (SvMessage::Val(x), SvMessage::Val(y)) => SvMessage::Val(*x.min(y)),
        _ => *a,
    }
}

fn min_opt<I: Ord>(a: Option<I>, b: Option<I>) -> Option<I> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<I: VertexId> ShiloachVishkin<I> {
    /// Asks `D` for its `(D, star)`.
    fn ask(&self, st: &SvState<I>, ctx: &mut Context<'_, Self>) {
        if self.reqresp {
            ctx.request(st.d);
        } else {
            ctx.send_msg(st.d, SvMessage::Req(ctx.id()));
        }
    }

    /// The answer to the previous [`ask`](Self::ask).
    fn parent(&self, st: &mut SvState<I>, ctx: &Context<'_, Self>) -> Result<(I, bool)> {
        if self.reqresp {
            Ok(*ctx.get_resp(&st.d)?)
        } else {
            st.resp
                .take()
                .ok_or_else(|| Error::MissingResponse(st.d.to_string()))
        }
    }
}

impl<I: VertexId> VertexProgram for ShiloachVishkin<I> {
    type Id = I;
    type Value = SvState<I>;
    type Message = SvMessage<I>;
    type Response = (I, bool);

    fn init(&self, id: I, _: &[Edge<I>]) -> SvState<I> {
        SvState {
            d: id,
            star: true,
            stash: None,
            resp: None,
        }
    }

    fn compute(
        &self,
        st: &mut SvState<I>,
        msgs: &[SvMessage<I>],
        ctx: &mut Context<'_, Self>,
    ) -> Result<()> {
        let s = ctx.superstep();
        let step = if self.reqresp {
            ROUND_REQ[((s - 1) % 7) as usize]
        } else {
            ROUND_MANUAL[((s - 1) % 11) as usize]
        };

        let mut vals: Option<I> = None;
        let mut requesters = Vec::new();
        for m in msgs {
            match *m {
                SvMessage::Val(x) => vals = min_opt(vals, Some(x)),
                SvMessage::Req(r) => requesters.push(r),
                SvMessage::Resp(d, star) => st.resp = Some((d, star)),
            }
        }
        let id = ctx.id();

        match step {
            Step::Answer => {
                for r in requesters {
                    ctx.send_msg(r, SvMessage::Resp(st.d, st.star));
                }
                st.stash = min_opt(st.stash, vals);
            }
            Step::L0 => {
                if s > 1 {
                    st.d = self.parent(st, ctx)?.0;
                }
                ctx.broadcast(SvMessage::Val(st.d));
                self.ask(st, ctx);
            }
            Step::L1 => {
                let min_n = min_opt(st.stash.take(), vals);
                let (gp, _) = self.parent(st, ctx)?;
                if let Some(m) = min_n {
                    if gp == st.d && m < st.d {
                        ctx.send_msg(st.d, SvMessage::Val(m));
                    }
                }
            }
            Step::L2 => {
                if st.d == id {
                    st.d = min_opt(Some(st.d), vals).unwrap_or(st.d);
                }
                self.ask(st, ctx);
            }
            Step::L3 => {
                let (gp, _) = self.parent(st, ctx)?;
                st.star = gp == st.d;
                if !st.star {
                    ctx.send_msg(gp, SvMessage::Val(id));
                }
            }
            Step::L4 => {
                if vals.is_some() {
                    st.star = false;
                }
                self.ask(st, ctx);
                ctx.broadcast(SvMessage::Val(st.d));
            }
            Step::L5 => {
                st.star &= self.parent(st, ctx)?.1;
                let min_n = min_opt(st.stash.take(), vals);
                let hook = st.star && min_n.is_some_and(|m| m < st.d);
                if hook {
                    ctx.send_msg(st.d, SvMessage::Val(min_n.unwrap_or(st.d)));
                }
                ctx.aggregate(ALL_STAR, AggregateValue::Bool(st.star))?;
                ctx.aggregate(HOOKED, AggregateValue::Bool(hook))?;
            }
            Step::L6 => {
                if ctx.aggregated_bool(ALL_STAR)? && !ctx.aggregated_bool(HOOKED)? {
                    ctx.vote_to_halt();
                } else {
                    if st.d == id {
                        st.d = min_opt(Some(st.d), vals).unwrap_or(st.d);
                    }
                    self.ask(st, ctx);
                }
            }
        }
        Ok(())
    }

    fn combiner(&self) -> Option<Combiner<SvMessage<I>>> {
        // manual mode mixes requests with values
        self.reqresp.then_some(min_val::<I> as Combiner<SvMessage<I>>)
    }

    fn respond(&self, _: I, st: &SvState<I>) -> Option<(I, bool)> {
        Some((st.d, st.star))
    }

    fn aggregators(&self) -> Vec<Aggregator> {
        vec![
            Aggregator::new(ALL_STAR, AggregateOp::And),
            Aggregator::new(HOOKED, AggregateOp::Or),
        ]
    }
}
