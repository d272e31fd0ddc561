//! The vertex-to-vertex message channel.
//!
//! A worker appends every outgoing message to the buffer of the worker that
//! owns the target. At the barrier each buffer is flushed: with a combiner the
//! entries are sorted by target and every group is folded into one message,
//! otherwise the buffer is shipped verbatim. The receiving worker resolves
//! each target through a static lookup table and appends the payload to that
//! vertex's incoming buffer.

use std::collections::HashMap;

use crate::graph::{Partitioner, VertexId};

/// Sender-side merge of two messages bound for the same vertex. Must be
/// commutative and associative.
pub type Combiner<M> = fn(&M, &M) -> M;

/// One outgoing buffer per destination worker.
#[derive(Clone, Debug)]
pub struct OutgoingBuffers<I, M> {
    buffers: Vec<Vec<(I, M)>>,
}

impl<I: VertexId, M> OutgoingBuffers<I, M> {
    pub fn new(workers: usize) -> Self {
        OutgoingBuffers {
            buffers: (0..workers).map(|_| Vec::new()).collect(),
        }
    }

    /// Appends `(target, msg)` to the buffer of `partitioner.worker_of(target)`
    /// and returns that worker index.
    #[inline]
    pub fn push(&mut self, partitioner: &Partitioner, target: I, msg: M) -> usize {
        let dest = partitioner.worker_of(&target);
        self.buffers[dest].push((target, msg));
        dest
    }

    pub fn buffer(&self, dest: usize) -> &[(I, M)] {
        &self.buffers[dest]
    }

    pub fn len(&self) -> usize {
        self.buffers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buffers.iter().all(Vec::is_empty)
    }

    /// Flushes every buffer, leaving them empty. Returns one wire batch per
    /// destination worker and the number of messages merged away.
    pub fn flush(&mut self, combiner: Option<Combiner<M>>) -> (Vec<Vec<(I, M)>>, u64) {
        let mut combined_away = 0;
        let batches = self
            .buffers
            .iter_mut()
            .map(|buf| {
                let (batch, merged) = flush_with_combiner(std::mem::take(buf), combiner);
                combined_away += merged;
                batch
            })
            .collect();
        (batches, combined_away)
    }
}

/// Turns one outgoing buffer into a wire batch.
///
/// With a combiner the result holds exactly one entry per distinct target, in
/// ascending target order; messages of a group are folded in arrival order.
/// Without one the buffer is returned unchanged. The second value is the
/// number of messages merged away.
pub fn flush_with_combiner<I: Ord + Copy, M>(
    mut buffer: Vec<(I, M)>,
    combiner: Option<Combiner<M>>,
) -> (Vec<(I, M)>, u64) {
    let Some(combine) = combiner else {
        return (buffer, 0);
    };
    let before = buffer.len() as u64;
    // stable: keeps arrival order inside each group
    buffer.sort_by_key(|e| e.0);
    let mut out: Vec<(I, M)> = Vec::with_capacity(buffer.len());
    for (target, msg) in buffer {
        match out.last_mut() {
            Some((t, acc)) if *t == target => *acc = combine(acc, &msg),
            _ => out.push((target, msg)),
        }
    }
    let merged = before - out.len() as u64;
    (out, merged)
}

/// Per-vertex incoming buffers of one worker plus the static id lookup.
#[derive(Clone, Debug)]
pub struct IncomingBufferTable<I, M> {
    index: HashMap<I, usize>,
    buffers: Vec<Vec<M>>,
}

impl<I: VertexId, M> IncomingBufferTable<I, M> {
    /// `ids` are the worker's resident vertices; slot `k` belongs to `ids[k]`.
    pub fn new(ids: &[I]) -> Self {
        IncomingBufferTable {
            index: ids.iter().enumerate().map(|(k, id)| (*id, k)).collect(),
            buffers: ids.iter().map(|_| Vec::new()).collect(),
        }
    }

    #[inline]
    pub fn slot(&self, id: &I) -> Option<usize> {
        self.index.get(id).copied()
    }

    #[inline]
    pub fn push_slot(&mut self, slot: usize, msg: M) {
        self.buffers[slot].push(msg);
    }

    /// Appends every payload of `batch` to its target's buffer. Stops at the
    /// first target that is not resident here and returns it.
    pub fn deliver(&mut self, batch: Vec<(I, M)>) -> Result<u64, I> {
        let mut delivered = 0;
        for (target, msg) in batch {
            let slot = self.slot(&target).ok_or(target)?;
            self.buffers[slot].push(msg);
            delivered += 1;
        }
        Ok(delivered)
    }

    /// Like [`deliver`](Self::deliver) but drops messages for unknown
    /// targets. Returns `(delivered, dropped)`.
    pub fn deliver_lossy(&mut self, batch: Vec<(I, M)>) -> (u64, u64) {
        let (mut delivered, mut dropped) = (0, 0);
        for (target, msg) in batch {
            match self.slot(&target) {
                Some(slot) => {
                    self.buffers[slot].push(msg);
                    delivered += 1;
                }
                None => {
                    log::warn!("dropping message for unknown vertex {target}");
                    dropped += 1;
                }
            }
        }
        (delivered, dropped)
    }

    pub fn messages(&self, slot: usize) -> &[M] {
        &self.buffers[slot]
    }

    pub fn messages_mut(&mut self, slot: usize) -> &mut Vec<M> {
        &mut self.buffers[slot]
    }

    pub fn take(&mut self, slot: usize) -> Vec<M> {
        std::mem::take(&mut self.buffers[slot])
    }

    pub fn has_pending(&self) -> bool {
        self.buffers.iter().any(|b| !b.is_empty())
    }

    pub fn len(&self) -> usize {
        self.buffers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffers.is_empty()
    }
}
