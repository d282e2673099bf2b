//! Exact minimum identifying open codes.
//!
//! An identifying open code is exactly a hitting set of the family
//! `{N(v)} ∪ {N(u) Δ N(v) : u < v}`: hitting `N(v)` totally dominates `v`,
//! and hitting `N(u) Δ N(v)` separates `u` from `v`. The branch-and-bound
//! works on that family with fixed-width word masks; the oracle ignores it
//! and enumerates subsets by cardinality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::verify;

/// Default order cap for [`solve_oracle`].
pub const ORACLE_CAP: usize = 24;
/// Largest order accepted by the branch-and-bound.
pub const SOLVER_CAP: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    BranchAndBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub gamma: usize,
    pub code: VertexSet,
    pub nodes_explored: u64,
    pub method: Method,
}

fn require_code(g: &Graph) -> Result<()> {
    match verify::no_code_reason(g) {
        Some(reason) => Err(Error::NoCode(reason)),
        None => Ok(()),
    }
}

/// Brute force with the default cap of [`ORACLE_CAP`] vertices.
pub fn solve_oracle(g: &Graph) -> Result<SolveResult> {
    solve_oracle_capped(g, ORACLE_CAP)
}

/// Enumerates subsets in order of increasing size and returns the first
/// identifying open code found; exact by exhaustion. `cap` may not exceed 63.
pub fn solve_oracle_capped(g: &Graph, cap: usize) -> Result<SolveResult> {
    let n = g.order();
    let cap = cap.min(63);
    if n > cap {
        return Err(Error::TooLarge { order: n, cap });
    }
    require_code(g)?;
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let mut sigs = vec![0u64; n];
    let mut visited = 0u64;
    for size in 0..=n {
        let mut subset: u64 = (1u64 << size) - 1;
        let limit = 1u64 << n;
        while subset < limit {
            visited += 1;
            let mut dominated = true;
            for (sig, &a) in sigs.iter_mut().zip(&adj) {
                *sig = a & subset;
                if *sig == 0 {
                    dominated = false;
                    break;
                }
            }
            if dominated {
                sigs.sort_unstable();
                if sigs.windows(2).all(|w| w[0] != w[1]) {
                    let code = VertexSet::from_vertices(n, (0..n).filter(|&v| subset >> v & 1 == 1))?;
                    return Ok(SolveResult {
                        gamma: size,
                        code,
                        nodes_explored: visited,
                        method: Method::Oracle,
                    });
                }
            }
            if size == 0 {
                break;
            }
            // Gosper's hack: next subset with the same popcount.
            let low = subset & subset.wrapping_neg();
            let ripple = subset + low;
            subset = (((ripple ^ subset) >> 2) / low) | ripple;
        }
    }
    unreachable!("the full vertex set of a twin-free isolate-free graph is a code")
}

/// Exact minimum via branch-and-bound.
pub fn solve(g: &Graph) -> Result<SolveResult> {
    require_code(g)?;
    let n = g.order();
    let (code, nodes) = dispatch(g, None)?;
    let code = code.expect("unbounded search always finds a code");
    debug_assert_eq!(code.universe(), n);
    Ok(SolveResult {
        gamma: code.len(),
        code,
        nodes_explored: nodes,
        method: Method::BranchAndBound,
    })
}

/// Exact decision: some identifying open code with at most `max_size`
/// vertices, or `None` if there is none.
pub fn solve_with_budget(g: &Graph, max_size: usize) -> Result<Option<VertexSet>> {
    require_code(g)?;
    Ok(dispatch(g, Some(max_size))?.0)
}

fn dispatch(g: &Graph, budget: Option<usize>) -> Result<(Option<VertexSet>, u64)> {
    let n = g.order();
    match n.div_ceil(64) {
        0 | 1 => Ok(Search::<1>::run(g, budget)),
        2 => Ok(Search::<2>::run(g, budget)),
        3 | 4 => Ok(Search::<4>::run(g, budget)),
        5..=8 => Ok(Search::<8>::run(g, budget)),
        _ => Err(Error::TooLarge {
            order: n,
            cap: SOLVER_CAP,
        }),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Mask<const W: usize>([u64; W]);

impl<const W: usize> Mask<W> {
    const ZERO: Self = Mask([0; W]);

    fn from_set(s: &VertexSet) -> Self {
        let mut m = [0; W];
        m[..s.words().len()].copy_from_slice(s.words());
        Mask(m)
    }

    fn bit(v: usize) -> Self {
        let mut m = [0; W];
        m[v / 64] = 1 << (v % 64);
        Mask(m)
    }

    fn or(self, o: Self) -> Self {
        Mask(std::array::from_fn(|i| self.0[i] | o.0[i]))
    }

    fn and_not(self, o: Self) -> Self {
        Mask(std::array::from_fn(|i| self.0[i] & !o.0[i]))
    }

    fn xor(self, o: Self) -> Self {
        Mask(std::array::from_fn(|i| self.0[i] ^ o.0[i]))
    }

    fn is_zero(self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn intersects(self, o: Self) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }

    fn count(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains(self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn lowest(self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn iter(self) -> impl Iterator<Item = usize> {
        (0..W).flat_map(move |i| {
            let mut w = self.0[i];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    fn is_subset(self, o: Self) -> bool {
        self.and_not(o).is_zero()
    }
}

struct Search<const W: usize> {
    n: usize,
    nodes: u64,
}

impl<const W: usize> Search<W> {
    fn run(g: &Graph, budget: Option<usize>) -> (Option<VertexSet>, u64) {
        let n = g.order();
        let reqs = requirements::<W>(g);
        let mut search = Search { n, nodes: 0 };
        let incumbent = greedy(&reqs, Mask::ZERO);
        let greedy_size = incumbent.count() as usize;
        let limit = match budget {
            Some(b) if greedy_size <= b => return (Some(search.to_set(incumbent)), 0),
            Some(b) => b + 1,
            None => greedy_size,
        };
        let found = search.min_hitting(reqs, Mask::ZERO, limit);
        let best = match (found, budget) {
            (Some(m), _) => Some(m),
            (None, None) => Some(incumbent),
            (None, Some(_)) => None,
        };
        (best.map(|m| search.to_set(m)), search.nodes)
    }

    fn to_set(&self, m: Mask<W>) -> VertexSet {
        VertexSet::from_vertices(self.n, m.iter()).expect("mask within order")
    }

    /// Minimum set avoiding `banned` that hits every requirement in `active`,
    /// provided its size is below `limit`; `None` otherwise.
    fn min_hitting(&mut self, mut active: Vec<Mask<W>>, banned: Mask<W>, limit: usize) -> Option<Mask<W>> {
        self.nodes += 1;
        // Unit propagation: a requirement with one candidate left forces it.
        let mut forced = Mask::ZERO;
        loop {
            let mut unit = None;
            for &r in &active {
                let cand = r.and_not(banned);
                match cand.count() {
                    0 => return None,
                    1 => {
                        unit = Some(cand);
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(u) => {
                    forced = forced.or(u);
                    active.retain(|r| !r.intersects(u));
                }
                None => break,
            }
        }
        let base = forced.count() as usize;
        if base >= limit {
            return None;
        }
        if active.is_empty() {
            return Some(forced);
        }
        let cands: Vec<Mask<W>> = active.iter().map(|r| r.and_not(banned)).collect();
        if base + packing_bound(&cands) >= limit {
            return None;
        }
        let parts = split_components(&active, &cands);
        if parts.len() > 1 {
            // Independent subproblems: solve each against the room left by the others' bounds.
            let bounds: Vec<usize> = parts
                .iter()
                .map(|p| packing_bound(&p.iter().map(|r| r.and_not(banned)).collect::<Vec<_>>()))
                .collect();
            let mut committed = base;
            let mut pending: usize = bounds.iter().sum();
            let mut total = forced;
            for (part, lb) in parts.into_iter().zip(bounds) {
                pending -= lb;
                let room = limit.checked_sub(committed + pending)?;
                let sub = self.min_hitting(part, banned, room)?;
                committed += sub.count() as usize;
                total = total.or(sub);
            }
            return Some(total);
        }
        // Branch on the vertex of the tightest requirement that hits the most requirements.
        let tight = *cands.iter().min_by_key(|c| c.count()).expect("active is non-empty");
        let v = tight
            .iter()
            .max_by_key(|&v| (active.iter().filter(|r| r.contains(v)).count(), std::cmp::Reverse(v)))
            .expect("tight requirement has candidates");
        let bit = Mask::bit(v);
        let mut best: Option<Mask<W>> = None;
        let mut room = limit - base;
        let with: Vec<Mask<W>> = active.iter().copied().filter(|r| !r.contains(v)).collect();
        if let Some(sub) = self.min_hitting(with, banned, room - 1) {
            let s = sub.or(bit);
            room = s.count() as usize;
            best = Some(s);
        }
        if let Some(sub) = self.min_hitting(active, banned.or(bit), room) {
            best = Some(sub);
        }
        best.map(|b| b.or(forced))
    }
}

/// Number of requirements with pairwise disjoint candidate sets, greedily
/// packed smallest first; each needs its own vertex.
fn packing_bound<const W: usize>(cands: &[Mask<W>]) -> usize {
    let mut order: Vec<&Mask<W>> = cands.iter().collect();
    order.sort_by_key(|c| c.count());
    let mut used = Mask::ZERO;
    let mut packed = 0;
    for &c in order {
        if !c.intersects(used) {
            used = used.or(c);
            packed += 1;
        }
    }
    packed
}

/// Groups requirements whose candidate sets are linked through shared vertices.
fn split_components<const W: usize>(active: &[Mask<W>], cands: &[Mask<W>]) -> Vec<Vec<Mask<W>>> {
    let mut groups: Vec<(Mask<W>, Vec<Mask<W>>)> = Vec::new();
    for (&r, &c) in active.iter().zip(cands) {
        let mut merged = (c, vec![r]);
        let mut i = 0;
        while i < groups.len() {
            if groups[i].0.intersects(merged.0) {
                let (m, rs) = groups.swap_remove(i);
                merged.0 = merged.0.or(m);
                merged.1.extend(rs);
            } else {
                i += 1;
            }
        }
        groups.push(merged);
    }
    groups.sort_by_key(|(m, _)| m.lowest());
    groups.into_iter().map(|(_, rs)| rs).collect()
}

/// Deduplicated, inclusion-minimal requirement sets.
fn requirements<const W: usize>(g: &Graph) -> Vec<Mask<W>> {
    let n = g.order();
    let nb: Vec<Mask<W>> = (0..n).map(|v| Mask::from_set(g.neighbor_set(v))).collect();
    let mut reqs: Vec<Mask<W>> = nb.clone();
    for u in 0..n {
        for v in u + 1..n {
            reqs.push(nb[u].xor(nb[v]));
        }
    }
    reqs.sort_by_key(|r| (r.count(), r.0));
    reqs.dedup();
    let mut minimal: Vec<Mask<W>> = Vec::with_capacity(reqs.len());
    for r in reqs {
        if !minimal.iter().any(|m| m.is_subset(r)) {
            minimal.push(r);
        }
    }
    minimal
}

/// Greedy hitting set from `start`, then drops redundant vertices in index order.
fn greedy<const W: usize>(reqs: &[Mask<W>], start: Mask<W>) -> Mask<W> {
    let mut chosen = start;
    let mut active: Vec<Mask<W>> = reqs.iter().copied().filter(|r| !r.intersects(chosen)).collect();
    while !active.is_empty() {
        let union = active.iter().fold(Mask::ZERO, |a, &r| a.or(r));
        let v = union
            .iter()
            .max_by_key(|&v| (active.iter().filter(|r| r.contains(v)).count(), std::cmp::Reverse(v)))
            .expect("active requirements are non-empty");
        chosen = chosen.or(Mask::bit(v));
        active.retain(|r| !r.contains(v));
    }
    for v in chosen.iter().collect::<Vec<_>>() {
        let without = chosen.and_not(Mask::bit(v));
        if reqs.iter().all(|r| r.intersects(without)) {
            chosen = without;
        }
    }
    chosen
}
