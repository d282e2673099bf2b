//! Immutable simple undirected graphs over dense vertex indices.
//!
//! Every vertex keeps both a sorted neighbor list (for traversals) and a packed
//! [`VertexSet`] (for word-parallel intersections). All "mutations" return a
//! fresh graph.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::set::VertexSet;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    nbrs: Vec<Vec<usize>>,
    adj: Vec<VertexSet>,
    m: usize,
}

/// A graph carved out of a parent graph, with index translation both ways.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    /// `to_parent[i]` is the parent index of local vertex `i`.
    pub to_parent: Vec<usize>,
    /// `from_parent[v]` is the local index of parent vertex `v`, if kept.
    pub from_parent: Vec<Option<usize>>,
}

impl Subgraph {
    /// Lifts a set over the subgraph's vertices back to the parent graph.
    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.from_parent.len());
        for v in set {
            out.insert(self.to_parent[v]);
        }
        out
    }
}

/// Structural role of a vertex; several flags may hold at once (both ends of `P_2`
/// are leaves and supports).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct VertexClass {
    pub leaf: bool,
    pub support: bool,
    pub strong_support: bool,
    /// Neither a leaf nor a support vertex.
    pub internal: bool,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, order: n });
                }
            }
            if u == v {
                return Err(Error::BadParam(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<VertexSet>) -> Graph {
        let n = adj.len();
        let nbrs: Vec<Vec<usize>> = adj.iter().map(|s| s.to_vec()).collect();
        let degree_sum: usize = nbrs.iter().map(Vec::len).sum();
        debug_assert!(degree_sum.is_multiple_of(2));
        Graph {
            n,
            nbrs,
            adj,
            m: degree_sum / 2,
        }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_adjacency(vec![VertexSet::new(n); n])
    }

    pub fn path(n: usize) -> Graph {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
    }

    /// The star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    /// Triangle 0-1-2 with pendant vertex 3 on vertex 0.
    pub fn paw() -> Graph {
        Self::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).expect("valid paw")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    /// Sorted neighbor list. Panics on an out-of-range vertex.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    /// Packed neighborhood. Panics on an out-of-range vertex.
    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                order: self.n,
            })
        }
    }

    /// `N(v)`.
    pub fn open_neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.adj[v].clone())
    }

    /// `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        let mut s = self.open_neighborhood(v)?;
        s.insert(v);
        Ok(s)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nbrs
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.nbrs.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> Result<usize> {
        self.nbrs.iter().map(Vec::len).max().ok_or(Error::EmptyGraph)
    }

    pub fn min_degree(&self) -> Result<usize> {
        self.nbrs.iter().map(Vec::len).min().ok_or(Error::EmptyGraph)
    }

    pub fn is_isolate_free(&self) -> bool {
        self.nbrs.iter().all(|ns| !ns.is_empty())
    }

    /// All unordered pairs `{u, v}` with `N(u) = N(v)`, as `(u, v)` with `u < v`,
    /// sorted lexicographically.
    pub fn find_open_twins(&self) -> Vec<(usize, usize)> {
        let mut classes: HashMap<&VertexSet, Vec<usize>> = HashMap::new();
        for (v, s) in self.adj.iter().enumerate() {
            classes.entry(s).or_default().push(v);
        }
        let mut pairs = Vec::new();
        for members in classes.values() {
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    pairs.push((u, v));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    pub fn is_open_twin_free(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.n);
        self.adj.iter().all(|s| seen.insert(s))
    }

    /// True iff the graph has a 4-cycle as a subgraph, i.e. two distinct
    /// vertices with at least two common neighbors.
    pub fn has_four_cycle(&self) -> bool {
        (0..self.n).any(|u| (u + 1..self.n).any(|v| self.adj[u].intersection_len(&self.adj[v]) >= 2))
    }

    /// True iff every vertex has degree at most `bound`.
    pub fn degree_at_most(&self, bound: usize) -> bool {
        self.nbrs.iter().all(|ns| ns.len() <= bound)
    }

    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices are reached");
            for &w in &self.nbrs[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        Ok(self.bfs(source))
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    pub fn is_acyclic(&self) -> bool {
        self.m + self.components_labels().1 == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.is_connected() && self.m + 1 == self.n
    }

    /// Component label per vertex (numbered by lowest member) and the component count.
    fn components_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.nbrs[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Connected components in order of their lowest vertex.
    pub fn components(&self) -> Vec<Subgraph> {
        let (label, count) = self.components_labels();
        (0..count)
            .map(|c| {
                let members: Vec<usize> = (0..self.n).filter(|&v| label[v] == c).collect();
                self.induced_subgraph(&members)
            })
            .collect()
    }

    /// The subgraph induced by `vertices`, relabeled in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Subgraph {
        let mut from_parent = vec![None; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            assert!(from_parent[v].is_none(), "duplicate vertex {v} in induced subgraph");
            from_parent[v] = Some(i);
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let fp = &from_parent;
            self.nbrs[v]
                .iter()
                .filter_map(move |&w| fp[w].filter(|&j| j > i).map(|j| (i, j)))
        });
        let graph = Graph::from_edges(vertices.len(), edges).expect("induced edges are valid");
        Subgraph {
            graph,
            to_parent: vertices.to_vec(),
            from_parent,
        }
    }

    /// Per-vertex leaf/support classification.
    pub fn classify_vertices(&self) -> Vec<VertexClass> {
        (0..self.n)
            .map(|v| {
                let leaf_nbrs = self.nbrs[v].iter().filter(|&&w| self.degree(w) == 1).count();
                let leaf = self.degree(v) == 1;
                let support = leaf_nbrs >= 1;
                VertexClass {
                    leaf,
                    support,
                    strong_support: leaf_nbrs >= 2,
                    internal: !leaf && !support,
                }
            })
            .collect()
    }

    /// Vertices with at least one leaf neighbor.
    pub fn support_vertices(&self) -> VertexSet {
        let mut s = VertexSet::new(self.n);
        for v in 0..self.n {
            if self.degree(v) == 1 {
                s.insert(self.nbrs[v][0]);
            }
        }
        s
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs(s) {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// A longest path of a tree, found by two farthest-vertex sweeps starting
    /// at vertex 0. Ties go to the lowest index.
    pub fn longest_path_in_tree(&self) -> Result<Vec<usize>> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.m + 1 != self.n {
            return Err(Error::NotATree);
        }
        let farthest = |dist: &[Option<usize>]| {
            let mut best = 0;
            for (v, d) in dist.iter().enumerate() {
                if d.unwrap() > dist[best].unwrap() {
                    best = v;
                }
            }
            best
        };
        let a = farthest(&self.bfs(0));
        let dist_a = self.bfs(a);
        let b = farthest(&dist_a);
        // Walk back from b toward a along strictly decreasing distance.
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let d = dist_a[cur].unwrap();
            cur = *self.nbrs[cur]
                .iter()
                .find(|&&w| dist_a[w] == Some(d - 1))
                .expect("tree path continues");
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// `G - uv`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::NotPresent(format!("edge {u}-{v}")));
        }
        let mut adj = self.adj.clone();
        adj[u].remove(v);
        adj[v].remove(u);
        Ok(Self::from_adjacency(adj))
    }

    /// `G + uv`.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::BadParam(format!("self-loop at vertex {u}")));
        }
        let mut adj = self.adj.clone();
        adj[u].insert(v);
        adj[v].insert(u);
        Ok(Self::from_adjacency(adj))
    }

    /// `G - v`, with the remaining vertices re-densified in increasing order.
    pub fn delete_vertex(&self, v: usize) -> Result<Subgraph> {
        if v >= self.n {
            return Err(Error::NotPresent(format!("vertex {v}")));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&x| x != v).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Some chordless cycle, or `None` for a forest: the shortest cycle through
    /// the lowest-index vertex that lies on any cycle. The returned sequence
    /// starts at that vertex.
    pub fn find_induced_cycle(&self) -> Option<Vec<usize>> {
        (0..self.n).find_map(|v| self.shortest_cycle_through(v))
    }

    /// Shortest cycle through `root`, via BFS with first-hop branch labels.
    fn shortest_cycle_through(&self, root: usize) -> Option<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut branch = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut queue = VecDeque::new();
        for &w in &self.nbrs[root] {
            dist[w] = 1;
            parent[w] = root;
            branch[w] = w;
            queue.push_back(w);
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.nbrs[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    branch[w] = branch[u];
                    queue.push_back(w);
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for (x, y) in self.edges() {
            if x == root || y == root || dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            if branch[x] != branch[y] {
                let len = dist[x] + dist[y] + 1;
                if best.is_none_or(|(l, _, _)| len < l) {
                    best = Some((len, x, y));
                }
            }
        }
        let (_, x, y) = best?;
        let climb = |mut v: usize| {
            let mut p = Vec::new();
            while v != root {
                p.push(v);
                v = parent[v];
            }
            p
        };
        let mut cycle = vec![root];
        let mut to_x = climb(x);
        to_x.reverse();
        cycle.extend(to_x);
        cycle.extend(climb(y));
        Some(cycle)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_edges() -> Graph {
        Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn neighborhoods() {
        let p3 = Graph::path(3);
        assert_eq!(p3.open_neighborhood(1).unwrap().to_vec(), vec![0, 2]);
        assert_eq!(Graph::complete(3).open_neighborhood(0).unwrap().to_vec(), vec![1, 2]);
        assert!(matches!(p3.open_neighborhood(3), Err(Error::InvalidVertex { .. })));
        assert_eq!(p3.closed_neighborhood(0).unwrap().to_vec(), vec![0, 1]);
    }

    #[test]
    fn degrees() {
        let c5 = Graph::cycle(5);
        assert_eq!((c5.max_degree().unwrap(), c5.min_degree().unwrap()), (2, 2));
        let paw = Graph::paw();
        assert_eq!((paw.max_degree().unwrap(), paw.min_degree().unwrap()), (3, 1));
        assert_eq!(Graph::empty(0).max_degree(), Err(Error::EmptyGraph));
    }

    #[test]
    fn twins() {
        assert_eq!(Graph::path(3).find_open_twins(), vec![(0, 2)]);
        assert_eq!(Graph::cycle(4).find_open_twins(), vec![(0, 2), (1, 3)]);
        assert!(Graph::path(5).find_open_twins().is_empty());
        assert!(!Graph::cycle(4).is_open_twin_free());
    }

    #[test]
    fn four_cycles() {
        assert!(Graph::cycle(4).has_four_cycle());
        assert!(!Graph::path(7).has_four_cycle());
        assert!(!Graph::cycle(5).has_four_cycle());
        assert!(Graph::complete(4).has_four_cycle());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::path(5).is_connected());
        let g = two_edges();
        assert!(!g.is_connected());
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].to_parent, vec![2, 3]);
        assert_eq!(comps[1].from_parent[3], Some(1));
        let split = Graph::path(6).delete_edge(2, 3).unwrap();
        assert_eq!(split.components().len(), 2);
    }

    #[test]
    fn classification() {
        let c = Graph::path(5).classify_vertices();
        let leaves: Vec<_> = (0..5).filter(|&v| c[v].leaf).collect();
        let supports: Vec<_> = (0..5).filter(|&v| c[v].support).collect();
        assert_eq!(leaves, vec![0, 4]);
        assert_eq!(supports, vec![1, 3]);
        assert!(c[2].internal);
        assert!(Graph::star(3).classify_vertices()[0].strong_support);
        let p2 = Graph::path(2).classify_vertices();
        assert!(p2[0].leaf && p2[0].support);
    }

    #[test]
    fn diameters_and_paths() {
        for n in 1..8 {
            let p = Graph::path(n);
            assert_eq!(p.diameter().unwrap(), n - 1);
            assert_eq!(p.longest_path_in_tree().unwrap().len(), n);
        }
        assert_eq!(two_edges().diameter(), Err(Error::Disconnected));
        assert_eq!(Graph::cycle(5).longest_path_in_tree(), Err(Error::NotATree));
    }

    #[test]
    fn deletions() {
        let c5 = Graph::cycle(5);
        let p = c5.delete_edge(4, 0).unwrap();
        assert_eq!(p, Graph::path(5));
        assert!(matches!(c5.delete_edge(0, 2), Err(Error::NotPresent(_))));
        let k3 = Graph::paw().delete_vertex(3).unwrap();
        assert_eq!(k3.graph, Graph::complete(3));
        assert_eq!(k3.from_parent, vec![Some(0), Some(1), Some(2), None]);
        assert!(matches!(Graph::paw().delete_vertex(9), Err(Error::NotPresent(_))));
    }

    #[test]
    fn induced_cycles() {
        assert_eq!(Graph::path(6).find_induced_cycle(), None);
        let c = Graph::cycle(5).find_induced_cycle().unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c[0], 0);
        // 0-1-2-3-4-0 plus chord 1-3: shortest cycle through 0 has length 4.
        let g = Graph::cycle(5).add_edge(1, 3).unwrap();
        let c = g.find_induced_cycle().unwrap();
        assert_eq!(c.len(), 4);
        for w in 0..c.len() {
            for x in w + 2..c.len() {
                if !(w == 0 && x == c.len() - 1) {
                    assert!(!g.has_edge(c[w], c[x]), "chord in {c:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        assert_eq!(Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap().size(), 1);
    }
}
