//! Canonical forms: AHU encodings for trees, permutation minimization for small graphs.

use crate::format::write_graph6;
use crate::graph::Graph;

/// Largest order accepted by [`small_graph_canonical`].
pub const SMALL_CANON_CAP: usize = 10;

/// Tree centers (one or two vertices), found by peeling leaves.
pub fn tree_centers(t: &Graph) -> Vec<usize> {
    let n = t.order();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg = t.degrees();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in t.neighbors(leaf) {
                if deg[w] > 0 {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[leaf] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Parenthesized AHU encoding of the subtree at `v` hanging away from `parent`.
pub fn rooted_encoding(t: &Graph, v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_encoding(t, w, Some(v)))
        .collect();
    kids.sort_unstable();
    let mut s = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
    s.push('(');
    for k in kids {
        s.push_str(&k);
    }
    s.push(')');
    s
}

/// Isomorphism-invariant string for a tree: the smaller of the encodings rooted at its centers.
pub fn tree_canonical_string(t: &Graph) -> String {
    tree_centers(t)
        .into_iter()
        .map(|c| rooted_encoding(t, c, None))
        .min()
        .unwrap_or_default()
}

pub fn trees_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && a.size() == b.size() && tree_canonical_string(a) == tree_canonical_string(b)
}

/// Relabels a tree canonically: root at the minimizing center, then number
/// vertices in preorder with children visited in encoding order.
pub fn tree_canonical_relabel(t: &Graph) -> Graph {
    let Some(root) = tree_centers(t).into_iter().min_by_key(|&c| rooted_encoding(t, c, None)) else {
        return t.clone();
    };
    let mut label = vec![usize::MAX; t.order()];
    let mut next = 0;
    fn visit(t: &Graph, v: usize, parent: Option<usize>, label: &mut [usize], next: &mut usize) {
        label[v] = *next;
        *next += 1;
        let mut kids: Vec<(String, usize)> = t
            .neighbors(v)
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| (rooted_encoding(t, w, Some(v)), w))
            .collect();
        kids.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        for (_, w) in kids {
            visit(t, w, Some(v), label, next);
        }
    }
    visit(t, root, None, &mut label, &mut next);
    Graph::from_edges(t.order(), t.edges().map(|(u, v)| (label[u], label[v]))).expect("relabeling is a bijection")
}

/// Canonical relabeling of a small graph: among relabelings that list
/// vertices by nondecreasing degree, the one whose upper-triangle adjacency
/// bit string (column order, as in graph6) is lexicographically smallest.
/// Returns `None` above [`SMALL_CANON_CAP`] vertices.
pub fn small_graph_canonical(g: &Graph) -> Option<Graph> {
    let n = g.order();
    if n > SMALL_CANON_CAP {
        return None;
    }
    let deg = g.degrees();
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&v| deg[v]);
    // Vertices grouped by degree; slot i may take any vertex with degree deg[slots[i]].
    let slot_degree: Vec<usize> = slots.iter().map(|&v| deg[v]).collect();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();

    struct State<'a> {
        n: usize,
        adj: &'a [u32],
        deg: &'a [usize],
        slot_degree: &'a [usize],
        placed: Vec<usize>,
        used: u32,
        best: Option<Vec<bool>>,
        bits: Vec<bool>,
    }

    fn extend(st: &mut State<'_>) {
        let j = st.placed.len();
        if j == st.n {
            if st.best.as_ref().is_none_or(|b| st.bits < *b) {
                st.best = Some(st.bits.clone());
            }
            return;
        }
        for v in 0..st.n {
            if st.used >> v & 1 == 1 || st.deg[v] != st.slot_degree[j] {
                continue;
            }
            let start = st.bits.len();
            for i in 0..j {
                st.bits.push(st.adj[st.placed[i]] >> v & 1 == 1);
            }
            // Prune when this prefix already exceeds the best string's prefix.
            let worse = st
                .best
                .as_ref()
                .is_some_and(|b| st.bits.as_slice() > &b[..st.bits.len()]);
            if !worse {
                st.placed.push(v);
                st.used |= 1 << v;
                extend(st);
                st.used &= !(1 << v);
                st.placed.pop();
            }
            st.bits.truncate(start);
        }
    }

    let mut st = State {
        n,
        adj: &adj,
        deg: &deg,
        slot_degree: &slot_degree,
        placed: Vec::with_capacity(n),
        used: 0,
        best: None,
        bits: Vec::with_capacity(n * n / 2),
    };
    extend(&mut st);
    let bits = st.best.unwrap_or_default();
    let mut edges = Vec::new();
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[idx] {
                edges.push((i, j));
            }
            idx += 1;
        }
    }
    Some(Graph::from_edges(n, edges).expect("canonical edges are valid"))
}

/// Graph6 of a canonical relabeling: trees use the AHU labeling, small graphs
/// the permutation minimum. Larger non-tree graphs fall back to their own
/// labeling, which is not canonical.
pub fn canonical_graph6(g: &Graph) -> String {
    if g.is_tree() {
        write_graph6(&tree_canonical_relabel(g))
    } else if let Some(c) = small_graph_canonical(g) {
        write_graph6(&c)
    } else {
        write_graph6(g)
    }
}
