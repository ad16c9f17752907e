//! Breadth-first branch and prune, packaged as a queue of work items that
//! can be processed in slices, split between workers and merged back.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::contractor::{prune, Certificate};
use crate::expr::Problem;
use crate::interval::IntervalBox;

/// A box waiting to be pruned, with the number of bisections from the root.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkItem {
    pub boxed: IntervalBox,
    pub depth: u32,
}

impl WorkItem {
    pub fn root(boxed: IntervalBox) -> Self {
        WorkItem { boxed, depth: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxKind {
    /// Undecided but narrower than the requested precision.
    Precise,
    /// Verified to lie inside the solution set.
    Inner,
    /// Verified to hold exactly one solution.
    Unique,
}

impl BoxKind {
    /// Tag used in the paving file: inner and unique boxes are both `I`.
    pub fn tag(self) -> char {
        match self {
            BoxKind::Precise => 'P',
            BoxKind::Inner | BoxKind::Unique => 'I',
        }
    }
}

/// The output set of boxes of a (partial) search.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Paving {
    boxes: Vec<(BoxKind, IntervalBox)>,
}

/// Bit-exact identity of a stored box, for multiset comparisons.
pub type BoxKey = (BoxKind, Vec<(u64, u64)>);

impl Paving {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, kind: BoxKind, boxed: IntervalBox) {
        debug_assert!(!boxed.is_empty());
        self.boxes.push((kind, boxed));
    }

    pub fn extend(&mut self, other: Paving) {
        self.boxes.extend(other.boxes);
    }

    pub fn boxes(&self) -> &[(BoxKind, IntervalBox)] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn precise(&self) -> impl Iterator<Item = &IntervalBox> {
        self.of_kind(|k| k == BoxKind::Precise)
    }

    /// Inner and uniquely-certified boxes.
    pub fn inner(&self) -> impl Iterator<Item = &IntervalBox> {
        self.of_kind(|k| k != BoxKind::Precise)
    }

    pub fn unique(&self) -> impl Iterator<Item = &IntervalBox> {
        self.of_kind(|k| k == BoxKind::Unique)
    }

    fn of_kind(&self, pred: impl Fn(BoxKind) -> bool) -> impl Iterator<Item = &IntervalBox> {
        self.boxes.iter().filter(move |(k, _)| pred(*k)).map(|(_, b)| b)
    }

    pub fn precise_count(&self) -> usize {
        self.precise().count()
    }

    pub fn inner_count(&self) -> usize {
        self.inner().count()
    }

    pub fn unique_count(&self) -> usize {
        self.unique().count()
    }

    pub fn covers(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|(_, b)| b.contains_point(x))
    }

    /// Sorted bit-level keys of all boxes; equal iff the pavings are equal as multisets.
    pub fn canonical(&self) -> Vec<BoxKey> {
        let mut keys: Vec<BoxKey> = self
            .boxes
            .iter()
            .map(|(k, b)| {
                let bits = b.components().iter().map(|c| (c.lo().to_bits(), c.hi().to_bits())).collect();
                (*k, bits)
            })
            .collect();
        keys.sort_unstable();
        keys
    }

    /// Writes one box per line: a `P`/`I` tag followed by tab-separated `[lo,hi]` fields.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (kind, b) in &self.boxes {
            writeln!(w, "{}\t{}", kind.tag(), b)?;
        }
        Ok(())
    }
}

impl fmt::Display for Paving {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (kind, b) in &self.boxes {
            writeln!(f, "{}\t{}", kind.tag(), b)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    /// Number of bisections, each producing two children.
    pub branch_count: u64,
    pub prune_calls: u64,
    pub prune_time: Duration,
    /// Nodes pruned at each depth.
    pub per_depth: BTreeMap<u32, u64>,
    pub active_time: Duration,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.branch_count += other.branch_count;
        self.prune_calls += other.prune_calls;
        self.prune_time += other.prune_time;
        self.active_time += other.active_time;
        for (&d, &c) in &other.per_depth {
            *self.per_depth.entry(d).or_insert(0) += c;
        }
    }

    pub fn nodes(&self) -> u64 {
        self.per_depth.values().sum()
    }
}

/// One worker's share of a branch-and-prune search: the queue of undecided
/// boxes plus the locally found part of the paving.
#[derive(Clone, Debug)]
pub struct TaskQueue<'p> {
    problem: &'p Problem,
    eps: f64,
    queue: VecDeque<WorkItem>,
    paving: Paving,
    stats: SearchStats,
}

impl<'p> TaskQueue<'p> {
    /// An empty queue; work arrives via [`TaskQueue::merge`].
    pub fn new(problem: &'p Problem, eps: f64) -> Self {
        assert!(eps > 0.0, "precision must be positive");
        TaskQueue {
            problem,
            eps,
            queue: VecDeque::new(),
            paving: Paving::new(),
            stats: SearchStats::default(),
        }
    }

    /// A queue holding the problem's initial domain.
    pub fn with_root(problem: &'p Problem, eps: f64) -> Self {
        let mut q = Self::new(problem, eps);
        q.queue.push_back(WorkItem::root(problem.domain().clone()));
        q
    }

    pub fn problem(&self) -> &'p Problem {
        self.problem
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn items(&self) -> impl Iterator<Item = &WorkItem> {
        self.queue.iter()
    }

    pub fn paving(&self) -> &Paving {
        &self.paving
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn into_parts(self) -> (Paving, SearchStats) {
        (self.paving, self.stats)
    }

    /// Local `(precise, inner)` counts; inner includes uniquely certified boxes.
    pub fn get_result(&self) -> (usize, usize) {
        (self.paving.precise_count(), self.paving.inner_count())
    }

    /// Runs branch-and-prune iterations until at least `min_duration` has
    /// elapsed or the queue empties. Returns whether work remains.
    pub fn process_slice(&mut self, min_duration: Duration) -> bool {
        let start = Instant::now();
        while !self.queue.is_empty() {
            self.step();
            if start.elapsed() >= min_duration {
                break;
            }
        }
        self.stats.active_time += start.elapsed();
        !self.queue.is_empty()
    }

    /// Runs at most `max_nodes` iterations. Returns whether work remains.
    pub fn process_nodes(&mut self, max_nodes: u64) -> bool {
        let start = Instant::now();
        let mut done = 0;
        while done < max_nodes && !self.queue.is_empty() {
            self.step();
            done += 1;
        }
        self.stats.active_time += start.elapsed();
        !self.queue.is_empty()
    }

    /// Runs until the queue is empty.
    pub fn run_to_completion(&mut self) {
        self.process_nodes(u64::MAX);
    }

    /// One iteration: extract the front box, prune it, then store, drop or bisect it.
    fn step(&mut self) {
        let Some(item) = self.queue.pop_front() else {
            return;
        };
        *self.stats.per_depth.entry(item.depth).or_insert(0) += 1;
        self.stats.prune_calls += 1;
        let t = Instant::now();
        let outcome = prune(self.problem, &item.boxed);
        self.stats.prune_time += t.elapsed();

        match outcome.certificate {
            Certificate::EmptyProof => {}
            Certificate::UniqueSolution => self.paving.push(BoxKind::Unique, outcome.boxed),
            Certificate::InnerVerified => self.paving.push(BoxKind::Inner, outcome.boxed),
            Certificate::Undecided => {
                let b = outcome.boxed;
                let width = b.width().unwrap_or(0.0);
                match (width > self.eps).then(|| self.branch_variable(&b, item.depth)).flatten() {
                    None => self.paving.push(BoxKind::Precise, b),
                    Some(var) => {
                        let (left, right) = b.bisect(var).expect("branch variable is bisectable");
                        self.stats.branch_count += 1;
                        let depth = item.depth + 1;
                        self.queue.push_back(WorkItem { boxed: left, depth });
                        self.queue.push_back(WorkItem { boxed: right, depth });
                    }
                }
            }
        }
    }

    /// Round-robin choice starting at `depth mod n`, skipping components that
    /// are already within precision or cannot be split.
    fn branch_variable(&self, b: &IntervalBox, depth: u32) -> Option<usize> {
        let n = b.dim();
        (0..n)
            .map(|k| (depth as usize + k) % n)
            .find(|&i| b.get(i).width().is_some_and(|w| w > self.eps) && b.is_bisectable(i))
    }

    /// Removes every second queued item (half, rounded down) and returns them.
    pub fn split(&mut self) -> Vec<WorkItem> {
        if self.queue.len() < 2 {
            return Vec::new();
        }
        let mut keep = VecDeque::with_capacity(self.queue.len() - self.queue.len() / 2);
        let mut give = Vec::with_capacity(self.queue.len() / 2);
        for (i, item) in self.queue.drain(..).enumerate() {
            if i % 2 == 1 {
                give.push(item);
            } else {
                keep.push_back(item);
            }
        }
        self.queue = keep;
        give
    }

    /// Appends `loot` to the back of the queue.
    pub fn merge(&mut self, loot: Vec<WorkItem>) {
        self.queue.extend(loot);
    }
}

/// Runs branch and prune to completion on one worker.
pub fn solve_sequential(p: &Problem, eps: f64) -> (Paving, SearchStats) {
    let mut q = TaskQueue::with_root(p, eps);
    q.run_to_completion();
    q.into_parts()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Constraint, Expr};

    fn line_problem() -> Problem {
        // x - y = 0 on [0,1]^2
        Problem::with_default_names(
            IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]),
            vec![Constraint::eq_zero(Expr::var(0) - Expr::var(1))],
        )
        .unwrap()
    }

    fn item(tag: f64) -> WorkItem {
        WorkItem::root(IntervalBox::from_bounds(&[(tag, tag)]))
    }

    #[test]
    fn refuted_root_empties_queue() {
        let p = Problem::with_default_names(
            IntervalBox::from_bounds(&[(0.0, 1.0)]),
            vec![Constraint::eq_zero(Expr::var(0) + 5.0)],
        )
        .unwrap();
        let mut q = TaskQueue::with_root(&p, 0.1);
        assert!(!q.process_slice(Duration::from_millis(1)));
        assert_eq!(q.get_result(), (0, 0));
        assert_eq!(q.stats().prune_calls, 1);
    }

    #[test]
    fn narrow_root_is_stored_as_precise() {
        let p = Problem::with_default_names(
            IntervalBox::from_bounds(&[(0.0, 0.05), (0.0, 0.05)]),
            vec![Constraint::eq_zero(Expr::var(0) - Expr::var(1))],
        )
        .unwrap();
        let mut q = TaskQueue::with_root(&p, 0.1);
        assert!(!q.process_slice(Duration::from_millis(1)));
        assert_eq!(q.get_result(), (1, 0));

        // without constraints every box is inside the solution set
        let free = Problem::with_default_names(IntervalBox::from_bounds(&[(0.0, 0.05)]), vec![]).unwrap();
        let mut q = TaskQueue::with_root(&free, 0.1);
        q.run_to_completion();
        assert_eq!(q.get_result(), (0, 1));
    }

    #[test]
    fn split_takes_every_second_item() {
        let p = line_problem();
        let mut q = TaskQueue::new(&p, 0.1);
        q.merge((0..5).map(|i| item(i as f64)).collect());
        let loot = q.split();
        assert_eq!(loot, vec![item(1.0), item(3.0)]);
        let kept: Vec<_> = q.items().cloned().collect();
        assert_eq!(kept, vec![item(0.0), item(2.0), item(4.0)]);

        let mut q = TaskQueue::new(&p, 0.1);
        q.merge(vec![item(0.0)]);
        assert!(q.split().is_empty());
        assert_eq!(q.len(), 1);
        let mut q = TaskQueue::new(&p, 0.1);
        assert!(q.split().is_empty());
    }

    #[test]
    fn merge_appends() {
        let p = line_problem();
        let mut q = TaskQueue::new(&p, 0.1);
        q.merge(vec![]);
        assert!(q.is_empty());
        q.merge(vec![item(7.0)]);
        q.merge(vec![item(8.0)]);
        let items: Vec<_> = q.items().cloned().collect();
        assert_eq!(items, vec![item(7.0), item(8.0)]);
    }

    #[test]
    fn empty_initial_domain() {
        let p = Problem::with_default_names(IntervalBox::empty(2), vec![]).unwrap();
        let (paving, stats) = solve_sequential(&p, 0.1);
        assert!(paving.is_empty());
        assert_eq!(stats.branch_count, 0);
    }

    #[test]
    fn diagonal_paving_covers_line() {
        let p = line_problem();
        let (paving, stats) = solve_sequential(&p, 0.01);
        assert!(paving.len() > 50);
        assert_eq!(stats.prune_calls, 1 + 2 * stats.branch_count);
        assert_eq!(stats.nodes(), stats.prune_calls);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            assert!(paving.covers(&[t, t]), "point ({t},{t}) not covered");
        }
        for b in paving.boxes() {
            assert!(b.1.width().unwrap() <= 0.01 || b.0 != BoxKind::Precise);
        }
    }

    #[test]
    fn results_are_monotone_across_slices() {
        let p = line_problem();
        let mut q = TaskQueue::with_root(&p, 0.001);
        let mut last = (0, 0);
        while q.process_nodes(7) {
            let now = q.get_result();
            assert!(now.0 >= last.0 && now.1 >= last.1);
            last = now;
        }
    }

    #[test]
    fn tiny_eps_terminates_on_unsplittable_boxes() {
        let x = 1.0f64;
        let p = Problem::with_default_names(
            IntervalBox::from_bounds(&[(x, x.next_up().next_up().next_up())]),
            vec![],
        )
        .unwrap();
        let (paving, _) = solve_sequential(&p, 1e-300);
        assert!(!paving.is_empty());
        assert!(paving.len() <= 4);
    }

    #[test]
    fn paving_file_format() {
        let mut paving = Paving::new();
        paving.push(BoxKind::Precise, IntervalBox::from_bounds(&[(0.0, 0.5), (1.0, 1.5)]));
        paving.push(BoxKind::Unique, IntervalBox::from_bounds(&[(2.0, 2.0), (-1.0, 1.0)]));
        let mut out = Vec::new();
        paving.write_to(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "P\t[0,0.5]\t[1,1.5]\nI\t[2,2]\t[-1,1]\n");
    }
}
