//! Request-respond channel.
//!
//! During compute a vertex calls `request(u)`; the id lands in the requesting
//! worker's set for `u`'s owner, so any number of local requesters produce a
//! single request. At the barrier each worker answers the sets it received by
//! evaluating `respond()` once per requested vertex, ships the answers back,
//! and the requesters' worker turns them into a response table that lives for
//! exactly one superstep.
//!
//! A vertex that already knows who needs its value can skip the request
//! round trip and push the value directly (explicit responding).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Partitioner, VertexId};

/// `S_to_k` for every destination worker `k`.
#[derive(Clone, Debug)]
pub struct RequestSets<I> {
    sets: Vec<BTreeSet<I>>,
}

impl<I: VertexId> RequestSets<I> {
    pub fn new(workers: usize) -> Self {
        RequestSets {
            sets: (0..workers).map(|_| BTreeSet::new()).collect(),
        }
    }

    /// Records a request for `u`. Returns false when `u` was already
    /// requested from this worker in the current superstep.
    pub fn insert(&mut self, partitioner: &Partitioner, u: I) -> bool {
        self.sets[partitioner.worker_of(&u)].insert(u)
    }

    pub fn set(&self, dest: usize) -> &BTreeSet<I> {
        &self.sets[dest]
    }

    pub fn take(&mut self) -> Vec<BTreeSet<I>> {
        self.sets.iter_mut().map(std::mem::take).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(BTreeSet::is_empty)
    }
}

/// `R_to_k` for every destination worker `k`; one entry per vertex.
#[derive(Clone, Debug)]
pub struct ResponseSets<I, R> {
    sets: Vec<BTreeMap<I, R>>,
}

impl<I: VertexId, R> ResponseSets<I, R> {
    pub fn new(workers: usize) -> Self {
        ResponseSets {
            sets: (0..workers).map(|_| BTreeMap::new()).collect(),
        }
    }

    /// Adds `(u, value)` for worker `dest`; a later insert for the same `u`
    /// replaces the earlier one.
    pub fn insert(&mut self, dest: usize, u: I, value: R) {
        self.sets[dest].insert(u, value);
    }

    pub fn set(&self, dest: usize) -> &BTreeMap<I, R> {
        &self.sets[dest]
    }

    pub fn into_sets(self) -> Vec<BTreeMap<I, R>> {
        self.sets
    }
}

/// Responses readable by one worker during a single superstep.
#[derive(Clone, Debug)]
pub struct ResponseTable<I, R> {
    map: HashMap<I, R>,
}

impl<I: VertexId, R> Default for ResponseTable<I, R> {
    fn default() -> Self {
        ResponseTable {
            map: HashMap::new(),
        }
    }
}

impl<I: VertexId, R> ResponseTable<I, R> {
    pub fn clear(&mut self) {
        self.map.clear();
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = (I, R)>) {
        self.map.extend(entries);
    }

    pub fn get(&self, u: &I) -> Result<&R> {
        self.map
            .get(u)
            .ok_or_else(|| Error::MissingResponse(u.to_string()))
    }

    pub fn contains(&self, u: &I) -> bool {
        self.map.contains_key(u)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Checks `requests_received + responses_sent <= 2 * min(M, requesters)` for
/// one requested vertex in one superstep.
pub fn message_bound_check(
    requests_received: u64,
    responses_sent: u64,
    requesters: u64,
    workers: usize,
) -> bool {
    requests_received + responses_sent <= 2 * requesters.min(workers as u64)
}
