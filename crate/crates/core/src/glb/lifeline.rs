use std::collections::VecDeque;

use super::GlbError;

/// Static steal topology: worker ids written in base `l` with `z` digits,
/// each worker linked to the workers obtained by incrementing one digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LifelineGraph {
    outgoing: Vec<Vec<usize>>,
}

impl LifelineGraph {
    /// Builds the graph for `workers` nodes.
    ///
    /// An increment landing on a nonexistent worker (id >= `workers`) is
    /// repeated on the same digit until it lands on an existing one; if the
    /// digit cycles back to the node itself the edge is dropped.
    pub fn new(workers: usize, side: usize, dims: u32) -> Result<Self, GlbError> {
        if workers == 0 {
            return Err(GlbError::NoWorkers);
        }
        if side < 2 {
            return Err(GlbError::LifelineSide(side));
        }
        if dims < 1 {
            return Err(GlbError::LifelineDims(dims));
        }
        if !capacity_reaches(side, dims, workers) {
            return Err(GlbError::LifelineCapacity { side, dims, workers });
        }
        let mut outgoing = Vec::with_capacity(workers);
        for u in 0..workers {
            let mut targets = Vec::with_capacity(dims as usize);
            let mut place = 1usize;
            for d in 0..dims {
                if d > 0 {
                    match place.checked_mul(side) {
                        Some(p) => place = p,
                        None => break,
                    }
                }
                if place >= workers && d > 0 {
                    // Digit d is zero in every id < workers and its increments
                    // all land out of range.
                    break;
                }
                let mut v = u;
                loop {
                    let digit = (v / place) % side;
                    v = v - digit * place + ((digit + 1) % side) * place;
                    if v == u {
                        break;
                    }
                    if v < workers {
                        targets.push(v);
                        break;
                    }
                }
            }
            outgoing.push(targets);
        }
        Ok(LifelineGraph { outgoing })
    }

    pub fn workers(&self) -> usize {
        self.outgoing.len()
    }

    /// Workers that `u` may request work from along its lifelines.
    pub fn lifelines(&self, u: usize) -> &[usize] {
        &self.outgoing[u]
    }

    /// Hop distances from `from` (`None` for unreachable nodes).
    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.workers()];
        let mut queue = VecDeque::new();
        dist[from] = Some(0);
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.outgoing[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest hop distance from `from`, or `None` if some node is unreachable.
    pub fn eccentricity(&self, from: usize) -> Option<usize> {
        self.distances(from).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn is_strongly_connected(&self) -> bool {
        (0..self.workers()).all(|u| self.eccentricity(u).is_some())
    }
}

/// Whether `side^dims >= workers`, without overflow.
pub(crate) fn capacity_reaches(side: usize, dims: u32, workers: usize) -> bool {
    let mut cap = 1usize;
    for _ in 0..dims {
        match cap.checked_mul(side) {
            Some(c) => cap = c,
            None => return true,
        }
        if cap >= workers {
            return true;
        }
    }
    cap >= workers
}

/// Smallest `z >= 1` with `side^z >= workers`.
pub fn min_dims(side: usize, workers: usize) -> u32 {
    let mut z = 1;
    while !capacity_reaches(side, z, workers) {
        z += 1;
    }
    z
}
