//! Exact counting of proper 3-colorings.
//!
//! Vertices are assigned depth-first in breadth-first order. Only the colors
//! of already-assigned vertices that still have unassigned neighbours (the
//! frontier) influence the rest of the search, so subtree counts are cached
//! per level under the frontier's colors. The top of the tree is cut at a
//! fixed depth and the resulting subtrees are counted independently, which
//! makes the work done (and the reported budget) independent of the number of
//! worker threads.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use super::{Color, Coloring};
use crate::plane_graph::{Adjacency, Vertex};

/// Default cap on search nodes.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Depth at which the search tree is split into independent subtrees.
const SPLIT_DEPTH: usize = 2;

/// Frontiers wider than this are searched without caching.
const MAX_KEY_WIDTH: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub threads: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { budget: DEFAULT_BUDGET, threads: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: u128,
    /// Search nodes expanded.
    pub budget_used: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("node budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("coloring count overflows 128 bits")]
    Overflow,
    #[error("invalid precoloring: vertex {vertex} color {color}")]
    InvalidPrecoloring { vertex: Vertex, color: Color },
}

/// Search order and the static data derived from it.
pub(crate) struct Plan {
    n: usize,
    fixed: Vec<Option<Color>>,
    order: Vec<Vertex>,
    /// Earlier free positions adjacent to each position.
    back: Vec<Vec<usize>>,
    /// Colors ruled out by precolored neighbours (bit `c - 1`).
    forbid: Vec<u8>,
    /// Assigned positions that still matter before assigning position `i`.
    frontier: Vec<Vec<usize>>,
}

impl Plan {
    /// `None` when the precoloring itself is improper.
    pub(crate) fn new<G: Adjacency + ?Sized>(g: &G, pre: &[(Vertex, Color)]) -> Result<Option<Plan>, CountError> {
        let n = g.vertex_count();
        let mut fixed: Vec<Option<Color>> = vec![None; n];
        for &(v, c) in pre {
            if v >= n || !(1..=3).contains(&c) || fixed[v].is_some_and(|d| d != c) {
                return Err(CountError::InvalidPrecoloring { vertex: v, color: c });
            }
            fixed[v] = Some(c);
        }
        for &(v, c) in pre {
            if g.neighbors(v).iter().any(|&w| fixed[w] == Some(c)) {
                return Ok(None);
            }
        }

        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        for &(v, _) in pre {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        let mut next_root = 0;
        loop {
            while let Some(v) = queue.pop_front() {
                if fixed[v].is_none() {
                    order.push(v);
                }
                let mut nbrs = g.neighbors(v).to_vec();
                nbrs.sort_unstable();
                for w in nbrs {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            while next_root < n && seen[next_root] {
                next_root += 1;
            }
            if next_root == n {
                break;
            }
            seen[next_root] = true;
            queue.push_back(next_root);
        }

        let m = order.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut back = vec![Vec::new(); m];
        let mut forbid = vec![0u8; m];
        let mut last_use: Vec<usize> = (0..m).collect();
        for (i, &v) in order.iter().enumerate() {
            for &w in g.neighbors(v) {
                match fixed[w] {
                    Some(c) => forbid[i] |= 1 << (c - 1),
                    None => {
                        let j = pos[w];
                        if j < i {
                            back[i].push(j);
                        }
                        last_use[i] = last_use[i].max(j);
                    }
                }
            }
            back[i].sort_unstable();
        }
        let frontier = (0..=m).map(|i| (0..i).filter(|&j| last_use[j] >= i).collect()).collect();
        Ok(Some(Plan { n, fixed, order, back, forbid, frontier }))
    }

    fn free(&self) -> usize {
        self.order.len()
    }

    fn allowed(&self, i: usize, colors: &[Color]) -> u8 {
        let mut mask = 0b111 & !self.forbid[i];
        for &j in &self.back[i] {
            mask &= !(1 << (colors[j] - 1));
        }
        mask
    }

    fn coloring(&self, colors: &[Color]) -> Coloring {
        let mut out: Vec<Color> = self.fixed.iter().map(|c| c.unwrap_or(0)).collect();
        debug_assert_eq!(out.len(), self.n);
        for (i, &v) in self.order.iter().enumerate() {
            out[v] = colors[i];
        }
        Coloring::new(out)
    }
}

struct Budget<'a> {
    limit: u64,
    used: &'a AtomicU64,
}

impl Budget<'_> {
    fn spend(&self) -> Result<(), CountError> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(CountError::BudgetExceeded { budget: self.limit });
        }
        Ok(())
    }
}

fn count_from(
    plan: &Plan,
    i: usize,
    colors: &mut [Color],
    memo: &mut [FxHashMap<u128, u128>],
    budget: &Budget,
) -> Result<u128, CountError> {
    if i == plan.free() {
        return Ok(1);
    }
    let front = &plan.frontier[i];
    let key = (front.len() <= MAX_KEY_WIDTH).then(|| front.iter().fold(0u128, |k, &j| (k << 2) | colors[j] as u128));
    if let Some(hit) = key.and_then(|k| memo[i].get(&k)) {
        return Ok(*hit);
    }
    budget.spend()?;
    let mut mask = plan.allowed(i, colors);
    let mut total: u128 = 0;
    while mask != 0 {
        let c = mask.trailing_zeros() as Color + 1;
        mask &= mask - 1;
        colors[i] = c;
        total = total.checked_add(count_from(plan, i + 1, colors, memo, budget)?).ok_or(CountError::Overflow)?;
    }
    if let Some(k) = key {
        memo[i].insert(k, total);
    }
    Ok(total)
}

/// Proper assignments of the first `depth` free positions.
fn prefixes(plan: &Plan, depth: usize, budget: &Budget) -> Result<Vec<Vec<Color>>, CountError> {
    let mut out = Vec::new();
    let mut colors = vec![0; plan.free()];
    fn rec(
        plan: &Plan,
        i: usize,
        depth: usize,
        colors: &mut Vec<Color>,
        out: &mut Vec<Vec<Color>>,
        budget: &Budget,
    ) -> Result<(), CountError> {
        if i == depth {
            out.push(colors[..depth].to_vec());
            return Ok(());
        }
        budget.spend()?;
        let mut mask = plan.allowed(i, colors);
        while mask != 0 {
            colors[i] = mask.trailing_zeros() as Color + 1;
            mask &= mask - 1;
            rec(plan, i + 1, depth, colors, out, budget)?;
        }
        Ok(())
    }
    rec(plan, 0, depth, &mut colors, &mut out, budget)?;
    Ok(out)
}

/// Number of proper 3-colorings of `g` extending the given precoloring.
pub fn count_extensions<G: Adjacency + ?Sized + Sync>(
    g: &G,
    pre: &[(Vertex, Color)],
    opts: CountOptions,
) -> Result<CountResult, CountError> {
    let Some(plan) = Plan::new(g, pre)? else {
        return Ok(CountResult { count: 0, budget_used: 0 });
    };
    let used = AtomicU64::new(0);
    let budget = Budget { limit: opts.budget, used: &used };
    let depth = SPLIT_DEPTH.min(plan.free());
    let tasks = prefixes(&plan, depth, &budget)?;

    let run = |prefix: &[Color]| -> Result<u128, CountError> {
        let mut colors = vec![0; plan.free()];
        colors[..depth].copy_from_slice(prefix);
        let mut memo = vec![FxHashMap::default(); plan.free()];
        count_from(&plan, depth, &mut colors, &mut memo, &budget)
    };

    let threads = opts.threads.max(1).min(tasks.len().max(1));
    let results: Vec<Result<u128, CountError>> = if threads == 1 {
        tasks.iter().map(|t| run(t)).collect()
    } else {
        let slots: Vec<Mutex<Option<Result<u128, CountError>>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= tasks.len() {
                        break;
                    }
                    let r = run(&tasks[k]);
                    *slots[k].lock().expect("slot") = Some(r);
                });
            }
        });
        slots.into_iter().map(|m| m.into_inner().expect("slot").expect("task ran")).collect()
    };

    let mut count: u128 = 0;
    for r in results {
        count = count.checked_add(r?).ok_or(CountError::Overflow)?;
    }
    Ok(CountResult { count, budget_used: used.load(Ordering::Relaxed) })
}

/// Number of proper 3-colorings of `g`, with colors labelled.
pub fn count_3_colorings<G: Adjacency + ?Sized + Sync>(g: &G, opts: CountOptions) -> Result<CountResult, CountError> {
    count_extensions(g, &[], opts)
}

/// Some proper 3-coloring extending `pre`, found by depth-first search with
/// forward checking.
pub fn find_extension<G: Adjacency + ?Sized>(
    g: &G,
    pre: &[(Vertex, Color)],
    budget: u64,
) -> Result<Option<Coloring>, CountError> {
    let Some(plan) = Plan::new(g, pre)? else {
        return Ok(None);
    };
    let m = plan.free();
    let mut pos = vec![usize::MAX; plan.n];
    for (i, &v) in plan.order.iter().enumerate() {
        pos[v] = i;
    }
    // Later free neighbours of each position, for forward checking.
    let mut ahead = vec![Vec::new(); m];
    for (i, list) in plan.back.iter().enumerate() {
        for &j in list {
            ahead[j].push(i);
        }
    }
    let mut domain: Vec<u8> = plan.forbid.iter().map(|f| 0b111 & !f).collect();
    if domain.contains(&0) {
        return Ok(None);
    }
    let mut colors = vec![0; m];
    let used = AtomicU64::new(0);
    let budget = Budget { limit: budget, used: &used };

    fn dfs(
        i: usize,
        ahead: &[Vec<usize>],
        domain: &mut [u8],
        colors: &mut [Color],
        budget: &Budget,
    ) -> Result<bool, CountError> {
        if i == colors.len() {
            return Ok(true);
        }
        budget.spend()?;
        let mut mask = domain[i];
        while mask != 0 {
            let bit = mask & mask.wrapping_neg();
            mask &= mask - 1;
            colors[i] = bit.trailing_zeros() as Color + 1;
            let mut trimmed = Vec::new();
            let mut wiped = false;
            for &k in &ahead[i] {
                if domain[k] & bit != 0 {
                    domain[k] &= !bit;
                    trimmed.push(k);
                    if domain[k] == 0 {
                        wiped = true;
                        break;
                    }
                }
            }
            if !wiped && dfs(i + 1, ahead, domain, colors, budget)? {
                return Ok(true);
            }
            for k in trimmed {
                domain[k] |= bit;
            }
        }
        Ok(false)
    }

    if dfs(0, &ahead, &mut domain, &mut colors, &budget)? {
        Ok(Some(plan.coloring(&colors)))
    } else {
        Ok(None)
    }
}

/// Streams every proper 3-coloring exactly once.
pub struct Colorings {
    plan: Option<Plan>,
    colors: Vec<Color>,
    choices: Vec<u8>,
    level: usize,
    started: bool,
    done: bool,
    budget: u64,
    used: u64,
}

impl Colorings {
    pub fn budget_used(&self) -> u64 {
        self.used
    }
}

impl Iterator for Colorings {
    type Item = Result<Coloring, CountError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let Some(plan) = self.plan.as_ref() else {
            self.done = true;
            return None;
        };
        let m = plan.free();
        if !self.started {
            self.started = true;
            if m == 0 {
                self.done = true;
                return Some(Ok(plan.coloring(&[])));
            }
            self.level = 0;
            self.choices[0] = plan.allowed(0, &self.colors);
        }
        loop {
            let i = self.level;
            if self.choices[i] == 0 {
                if i == 0 {
                    self.done = true;
                    return None;
                }
                self.level -= 1;
                continue;
            }
            if self.used >= self.budget {
                self.done = true;
                return Some(Err(CountError::BudgetExceeded { budget: self.budget }));
            }
            self.used += 1;
            let mask = self.choices[i];
            self.choices[i] = mask & (mask - 1);
            self.colors[i] = mask.trailing_zeros() as Color + 1;
            if i + 1 == m {
                return Some(Ok(plan.coloring(&self.colors)));
            }
            self.level = i + 1;
            self.choices[i + 1] = plan.allowed(i + 1, &self.colors);
        }
    }
}

/// Lazily enumerates the proper 3-colorings of `g` extending `pre`.
pub fn enumerate_extensions<G: Adjacency + ?Sized>(
    g: &G,
    pre: &[(Vertex, Color)],
    budget: u64,
) -> Result<Colorings, CountError> {
    let plan = Plan::new(g, pre)?;
    let m = plan.as_ref().map_or(0, Plan::free);
    Ok(Colorings {
        plan,
        colors: vec![0; m],
        choices: vec![0; m.max(1)],
        level: 0,
        started: false,
        done: false,
        budget,
        used: 0,
    })
}

/// Lazily enumerates every proper 3-coloring of `g`.
pub fn enumerate_3_colorings<G: Adjacency + ?Sized>(g: &G, budget: u64) -> Colorings {
    enumerate_extensions(g, &[], budget).expect("empty precoloring is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::AbstractGraph;

    fn graph(n: usize, edges: &[(usize, usize)]) -> AbstractGraph {
        AbstractGraph::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    #[test]
    fn small_counts() {
        let opts = CountOptions::default();
        assert_eq!(count_3_colorings(&graph(1, &[]), opts).unwrap().count, 3);
        assert_eq!(count_3_colorings(&graph(2, &[(0, 1)]), opts).unwrap().count, 6);
        assert_eq!(count_3_colorings(&graph(3, &[(0, 1), (1, 2), (2, 0)]), opts).unwrap().count, 6);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(count_3_colorings(&k4, opts).unwrap().count, 0);
    }

    #[test]
    fn disconnected_graphs_multiply() {
        let g = graph(4, &[(0, 1)]);
        assert_eq!(count_3_colorings(&g, CountOptions::default()).unwrap().count, 6 * 9);
    }

    #[test]
    fn improper_precoloring_counts_zero() {
        let g = graph(2, &[(0, 1)]);
        let r = count_extensions(&g, &[(0, 1), (1, 1)], CountOptions::default()).unwrap();
        assert_eq!(r.count, 0);
        assert!(matches!(
            count_extensions(&g, &[(0, 4)], CountOptions::default()),
            Err(CountError::InvalidPrecoloring { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let edges: Vec<_> = (0..11).map(|i| (i, i + 1)).collect();
        let g = graph(12, &edges);
        let err = count_3_colorings(&g, CountOptions { budget: 3, threads: 1 }).unwrap_err();
        assert_eq!(err, CountError::BudgetExceeded { budget: 3 });
        let mut it = enumerate_3_colorings(&g, 5);
        assert!(it.any(|r| r.is_err()));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let edges: Vec<_> = (0..9).map(|i| (i, (i + 1) % 9)).chain([(0, 4), (2, 7)]).collect();
        let g = graph(9, &edges);
        let one = count_3_colorings(&g, CountOptions { threads: 1, ..Default::default() }).unwrap();
        let four = count_3_colorings(&g, CountOptions { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn find_extension_respects_precoloring() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let c = find_extension(&g, &[(0, 1), (2, 1)], 1000).unwrap().unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(c.color(0), 1);
        assert_eq!(c.color(2), 1);
        assert!(find_extension(&g, &[(0, 1), (1, 2), (2, 1), (3, 2)], 1000).unwrap().is_some());
        assert!(find_extension(&graph(3, &[(0, 1), (1, 2), (2, 0)]), &[(0, 1), (1, 2)], 1000).unwrap().is_some());
        assert!(find_extension(&graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), &[], 1000)
            .unwrap()
            .is_none());
    }
}
