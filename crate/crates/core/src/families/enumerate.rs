//! Exhaustive instance streams (free trees, small labeled graphs) and seeded
//! random instances.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest tree order accepted by [`enumerate_trees`].
pub const TREE_ENUM_CAP: usize = 18;
/// Largest order accepted by [`enumerate_small_graphs`].
pub const SMALL_GRAPH_CAP: usize = 7;

/// All free trees of one order, one per isomorphism class, generated from
/// canonical level sequences by constant-amortized-time successor steps.
pub struct FreeTrees {
    n: usize,
    layout: Option<Vec<usize>>,
    small_done: bool,
}

pub fn enumerate_trees(n: usize) -> Result<FreeTrees> {
    if n == 0 || n > TREE_ENUM_CAP {
        return Err(Error::BadParam(format!(
            "tree order must be in 1..={TREE_ENUM_CAP}, got {n}"
        )));
    }
    let layout = (n >= 3).then(|| (0..=n / 2).chain(1..n.div_ceil(2)).collect());
    Ok(FreeTrees {
        n,
        layout,
        small_done: false,
    })
}

fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut out = pred.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

/// Splits a level sequence into the first subtree of the root (levels shifted
/// down by one) and the rest of the tree.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|l| l - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

/// The first valid (centrally rooted, canonical) sequence at or after `candidate`.
fn next_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let lh = left.iter().copied().max().unwrap_or(0);
    let rh = rest.iter().copied().max().unwrap_or(0);
    let mut valid = rh >= lh;
    if valid && rh == lh && (left.len() > rest.len() || (left.len() == rest.len() && left > rest)) {
        valid = false;
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let h = new_left.iter().copied().max().unwrap_or(0);
        let len = next.len();
        for (slot, level) in next[len - (h + 1)..].iter_mut().zip(1..) {
            *slot = level;
        }
    }
    Some(next)
}

fn layout_to_graph(layout: &[usize]) -> Graph {
    let mut edges = Vec::with_capacity(layout.len().saturating_sub(1));
    let mut stack: Vec<usize> = Vec::new();
    for (i, &level) in layout.iter().enumerate() {
        while let Some(&j) = stack.last() {
            if layout[j] >= level {
                stack.pop();
            } else {
                edges.push((j, i));
                break;
            }
        }
        stack.push(i);
    }
    Graph::from_edges(layout.len(), edges).expect("level sequence yields a tree")
}

impl Iterator for FreeTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.n < 3 {
            if self.small_done {
                return None;
            }
            self.small_done = true;
            return Some(Graph::path(self.n));
        }
        let current = next_tree(self.layout.take()?)?;
        let g = layout_to_graph(&current);
        self.layout = next_rooted_tree(&current, None);
        Some(g)
    }
}

/// Structural predicates applied to enumerated graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphFilter {
    pub connected: bool,
    pub twin_free: bool,
    pub c4_free: bool,
    pub max_degree: Option<usize>,
}

impl GraphFilter {
    /// Connected, open twin-free and 4-cycle-free.
    pub fn audit_class() -> Self {
        GraphFilter {
            connected: true,
            twin_free: true,
            c4_free: true,
            max_degree: None,
        }
    }

    fn accepts(&self, adj: &[u8]) -> bool {
        let n = adj.len();
        if let Some(d) = self.max_degree {
            if adj.iter().any(|a| a.count_ones() as usize > d) {
                return false;
            }
        }
        if self.twin_free {
            for u in 0..n {
                if adj[u + 1..].contains(&adj[u]) {
                    return false;
                }
            }
        }
        if self.c4_free {
            for u in 0..n {
                for v in u + 1..n {
                    if (adj[u] & adj[v]).count_ones() >= 2 {
                        return false;
                    }
                }
            }
        }
        if self.connected && n > 0 {
            let full = if n == 8 { u8::MAX } else { (1u8 << n) - 1 };
            let mut seen = 1u8;
            let mut frontier = 1u8;
            while frontier != 0 {
                let mut next = 0u8;
                for v in 0..n {
                    if frontier >> v & 1 == 1 {
                        next |= adj[v];
                    }
                }
                frontier = next & !seen;
                seen |= next;
            }
            if seen != full {
                return false;
            }
        }
        true
    }
}

/// Every labeled graph on `n` vertices, by edge subset in increasing bitmask
/// order (bit `i` is the `i`-th pair in graph6 column order), filtered.
pub struct SmallGraphs {
    n: usize,
    pairs: Vec<(usize, usize)>,
    mask: u64,
    end: u64,
    filter: GraphFilter,
}

impl SmallGraphs {
    /// Number of labeled graphs before filtering.
    pub fn labeled_total(&self) -> u64 {
        self.end
    }
}

pub fn enumerate_small_graphs(n: usize, filter: GraphFilter) -> Result<SmallGraphs> {
    if n > SMALL_GRAPH_CAP {
        return Err(Error::BadParam(format!(
            "exhaustive graph enumeration supports n <= {SMALL_GRAPH_CAP}, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    Ok(SmallGraphs {
        n,
        end: 1u64 << pairs.len(),
        pairs,
        mask: 0,
        filter,
    })
}

impl Iterator for SmallGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        let mut adj = [0u8; SMALL_GRAPH_CAP];
        while self.mask < self.end {
            let mask = self.mask;
            self.mask += 1;
            adj[..self.n].fill(0);
            for (b, &(i, j)) in self.pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
            if self.filter.accepts(&adj[..self.n]) {
                let edges = self
                    .pairs
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &e)| e);
                return Some(Graph::from_edges(self.n, edges).expect("pairs are in range"));
            }
        }
        None
    }
}

/// A uniform random labeled tree via a random Prüfer sequence.
pub fn random_prufer_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n <= 2 {
        return Graph::path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

pub(crate) fn prufer_decode(n: usize, seq: &[usize]) -> Graph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    for &s in seq {
        let std::cmp::Reverse(leaf) = heap.pop().expect("a leaf always exists");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            heap.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = heap.pop().expect("two vertices remain");
    let std::cmp::Reverse(b) = heap.pop().expect("two vertices remain");
    edges.push((a, b));
    Graph::from_edges(n, edges).expect("Prüfer decoding yields a tree")
}

/// `G(n, p)`: each pair is an edge independently with probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).expect("pairs are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{canonical_graph6, tree_canonical_string};
    use std::collections::HashSet;

    const FREE_TREES: [usize; 18] = [
        1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320, 48629, 123867,
    ];

    #[test]
    fn tree_counts_small() {
        for n in 1..=12 {
            let trees: Vec<Graph> = enumerate_trees(n).unwrap().collect();
            assert_eq!(trees.len(), FREE_TREES[n - 1], "n={n}");
            assert!(trees.iter().all(|t| t.is_tree() && t.order() == n));
            let distinct: HashSet<String> = trees.iter().map(tree_canonical_string).collect();
            assert_eq!(distinct.len(), trees.len(), "duplicates at n={n}");
        }
        assert!(enumerate_trees(0).is_err());
        assert!(enumerate_trees(TREE_ENUM_CAP + 1).is_err());
    }

    #[test]
    fn small_graph_counts() {
        assert_eq!(enumerate_small_graphs(4, GraphFilter::default()).unwrap().count(), 64);
        let connected = GraphFilter {
            connected: true,
            ..GraphFilter::default()
        };
        let classes: HashSet<String> = enumerate_small_graphs(3, connected)
            .unwrap()
            .map(|g| canonical_graph6(&g))
            .collect();
        assert_eq!(classes.len(), 2);
        // Connected graphs up to isomorphism on 4 and 5 vertices: 6 and 21.
        for (n, want) in [(4, 6), (5, 21)] {
            let classes: HashSet<String> = enumerate_small_graphs(n, connected)
                .unwrap()
                .map(|g| canonical_graph6(&g))
                .collect();
            assert_eq!(classes.len(), want);
        }
        let c5 = canonical_graph6(&Graph::cycle(5));
        assert!(enumerate_small_graphs(5, GraphFilter::audit_class())
            .unwrap()
            .any(|g| canonical_graph6(&g) == c5));
        assert!(enumerate_small_graphs(8, GraphFilter::default()).is_err());
    }

    #[test]
    fn filter_agrees_with_graph_predicates() {
        let f = GraphFilter::audit_class();
        let all: Vec<Graph> = enumerate_small_graphs(5, GraphFilter::default()).unwrap().collect();
        let kept = all
            .iter()
            .filter(|g| g.is_connected() && g.is_open_twin_free() && !g.has_four_cycle())
            .count();
        assert_eq!(kept, enumerate_small_graphs(5, f).unwrap().count());
    }

    #[test]
    fn prufer_decodes_trees() {
        let g = prufer_decode(6, &[3, 3, 3, 4]);
        assert!(g.is_tree());
        assert_eq!(g.degree(3), 4);
    }
}
