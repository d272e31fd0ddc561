//! Attribute broadcast: decorate every out-edge `(v, u)` with `a(u)`.
//!
//! Three equivalent programs:
//! * [`AttributeMsg`] asks and answers through plain messages (3 supersteps);
//! * [`AttributeReq`] uses `request` / `get_resp` (2 supersteps);
//! * [`AttributePush`] pushes values to neighbors with explicit responses,
//!   valid when every neighbor is also a requester (undirected graphs).

use std::collections::HashMap;
use std::marker::PhantomData;

use crate::engine::{Context, VertexProgram};
use crate::error::Result;
use crate::graph::{mix64, Edge, VertexId};

/// The attribute of `v`: its id hashed to 32 bits.
pub fn attribute_of<I: VertexId>(v: &I) -> u32 {
    (mix64(v.worker_hash()) >> 32) as u32
}

/// Decorated adjacency in adjacency order.
pub type Decorated<I> = Vec<(I, u32)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttrMessage<I> {
    Ask(I),
    Tell(I, u32),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AttributeMsg<I>(PhantomData<fn() -> I>);

impl<I> AttributeMsg<I> {
    pub fn new() -> Self {
        AttributeMsg(PhantomData)
    }
}

impl<I: VertexId> VertexProgram for AttributeMsg<I> {
    type Id = I;
    type Value = Decorated<I>;
    type Message = AttrMessage<I>;
    type Response = ();

    fn init(&self, _: I, _: &[Edge<I>]) -> Decorated<I> {
        Vec::new()
    }

    fn compute(
        &self,
        out: &mut Decorated<I>,
        msgs: &[AttrMessage<I>],
        ctx: &mut Context<'_, Self>,
    ) -> Result<()> {
        match ctx.superstep() {
            1 => {
                for e in ctx.edges() {
                    ctx.send_msg(e.target, AttrMessage::Ask(ctx.id()));
                }
            }
            2 => {
                let a = attribute_of(&ctx.id());
                for m in msgs {
                    if let AttrMessage::Ask(v) = m {
                        ctx.send_msg(*v, AttrMessage::Tell(ctx.id(), a));
                    }
                }
            }
            _ => {
                let told: HashMap<I, u32> = msgs
                    .iter()
                    .filter_map(|m| match m {
                        AttrMessage::Tell(u, a) => Some((*u, *a)),
                        AttrMessage::Ask(_) => None,
                    })
                    .collect();
                *out = ctx.edges().iter().map(|e| (e.target, told[&e.target])).collect();
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AttributeReq<I>(PhantomData<fn() -> I>);

impl<I> AttributeReq<I> {
    pub fn new() -> Self {
        AttributeReq(PhantomData)
    }
}

fn collect<P: VertexProgram<Response = u32>>(ctx: &Context<'_, P>) -> Result<Decorated<P::Id>> {
    ctx.edges()
        .iter()
        .map(|e| Ok((e.target, *ctx.get_resp(&e.target)?)))
        .collect()
}

impl<I: VertexId> VertexProgram for AttributeReq<I> {
    type Id = I;
    type Value = Decorated<I>;
    type Message = ();
    type Response = u32;

    fn init(&self, _: I, _: &[Edge<I>]) -> Decorated<I> {
        Vec::new()
    }

    fn compute(&self, out: &mut Decorated<I>, _: &[()], ctx: &mut Context<'_, Self>) -> Result<()> {
        if ctx.superstep() == 1 {
            for e in ctx.edges() {
                ctx.request(e.target);
            }
        } else {
            *out = collect(ctx)?;
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn respond(&self, id: I, _: &Decorated<I>) -> Option<u32> {
        Some(attribute_of(&id))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AttributePush<I>(PhantomData<fn() -> I>);

impl<I> AttributePush<I> {
    pub fn new() -> Self {
        AttributePush(PhantomData)
    }
}

impl<I: VertexId> VertexProgram for AttributePush<I> {
    type Id = I;
    type Value = Decorated<I>;
    type Message = ();
    type Response = u32;

    fn init(&self, _: I, _: &[Edge<I>]) -> Decorated<I> {
        Vec::new()
    }

    fn compute(&self, out: &mut Decorated<I>, _: &[()], ctx: &mut Context<'_, Self>) -> Result<()> {
        if ctx.superstep() == 1 {
            for e in ctx.edges() {
                ctx.respond_to(e.target);
            }
        } else {
            *out = collect(ctx)?;
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn respond(&self, id: I, _: &Decorated<I>) -> Option<u32> {
        Some(attribute_of(&id))
    }
}
