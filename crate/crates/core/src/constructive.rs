//! Inductive code constructions for twin-free trees and 4-cycle-free graphs,
//! with a replayable trace of the case taken at every step.
//!
//! Each step builds a candidate for its sub-instance, then checks it with
//! [`is_io_code`] and the degree bound before accepting it. A candidate that
//! fails either check hands over to the next applicable case; the last resort
//! is the exact solver, which the trace records as a fallback.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{match_family_at, AttachmentVector};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::solver::solve;
use crate::verify::{admits_io_code, is_io_code, no_code_reason};

/// Outcome of comparing a code size with the degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// `2Δ·size ≤ (2Δ-1)·n`.
    WithinBound,
    /// Over the bound but exactly `2Δ/(2Δ+1)·n`, the value on `T_Δ`.
    ExceptionalStar,
    Violation,
}

/// Integer comparison against `(2Δ-1)/(2Δ)·n`. Reports `ExceptionalStar`
/// whenever the size equals `2Δ/(2Δ+1)·n`; the caller decides whether the
/// graph really is `T_Δ` (see [`check_bound_for`]).
pub fn check_bound(n: usize, size: usize, delta: usize) -> BoundStatus {
    if 2 * delta * size <= (2 * delta - 1) * n {
        BoundStatus::WithinBound
    } else if size * (2 * delta + 1) == 2 * delta * n {
        BoundStatus::ExceptionalStar
    } else {
        BoundStatus::Violation
    }
}

/// [`check_bound`], with `ExceptionalStar` only when `g ≅ T_Δ`.
pub fn check_bound_for(g: &Graph, size: usize, delta: usize) -> BoundStatus {
    match check_bound(g.order(), size, delta) {
        BoundStatus::ExceptionalStar if !is_subdivided_star(g, delta) => BoundStatus::Violation,
        s => s,
    }
}

/// Whether `g` is isomorphic to `T_Δ`.
pub fn is_subdivided_star(g: &Graph, delta: usize) -> bool {
    g.order() == 2 * delta + 1
        && g.is_tree()
        && (0..g.order())
            .filter(|&v| g.degree(v) == delta)
            .any(|v| match_family_at(g, v).is_some_and(|m| m.vector.counts() == [0, delta, 0, 0, 0, 0]))
}

/// A tree hung from a root.
#[derive(Clone, Debug)]
pub struct RootedTreeView<'a> {
    pub tree: &'a Graph,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
}

impl<'a> RootedTreeView<'a> {
    pub fn new(tree: &'a Graph, root: usize) -> Result<Self> {
        if !tree.is_tree() {
            return Err(Error::NotATree);
        }
        if root >= tree.order() {
            return Err(Error::InvalidVertex {
                vertex: root,
                order: tree.order(),
            });
        }
        let n = tree.order();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut stack = vec![root];
        let mut seen = VertexSet::new(n);
        seen.insert(root);
        while let Some(v) = stack.pop() {
            for &w in tree.neighbors(v) {
                if seen.insert(w) {
                    parent[w] = Some(v);
                    depth[w] = depth[v] + 1;
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        Ok(RootedTreeView {
            tree,
            root,
            parent,
            children,
            depth,
        })
    }

    /// `D[v]`: `v` and all its descendants, in increasing index order.
    pub fn closed_descendants(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children[out[i]].iter().copied());
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

/// Which argument produced a step's code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Case {
    /// The instance is a family tree; its canonical set is used.
    FamilyMember {
        root: usize,
        k: AttachmentVector,
        exceptional: bool,
    },
    /// Diameter 4: a subdivided star or a reduced one.
    DiameterFour { exceptional: bool },
    /// An edge `v1 v2` splits off `T_k` centered at `v1`, `2 ≤ k ≤ Δ-1`.
    StarSplit {
        v1: usize,
        v2: usize,
        k: usize,
        branch: StarSplitBranch,
    },
    /// A subtree `T_x` hanging below `x` is a family tree; the rest recurses.
    PendantSplit {
        x: usize,
        reason: PendantReason,
        twin_repair: bool,
    },
    /// Stored code for a small base graph.
    BaseGraph { name: String },
    /// `G - e` is `T_k` and the added edge follows a fixed pattern.
    StarPlusEdge { u: usize, v: usize, pattern: String },
    /// `G - e` is twin-free; its code is reused unchanged.
    CycleEdgeDeletion { u: usize, v: usize },
    /// Every cycle edge creates twins; a degree-2 cycle vertex is deleted.
    CycleVertexDeletion { v: usize },
    /// No argument applied; the exact solver was used.
    SolverFallback { note: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StarSplitBranch {
    /// The far side is twin-free and recursed on.
    Recurse,
    /// The far side is `T_Δ`; fixed code.
    FarSideStar,
    /// The far side has twins; one twin removed, then recursed on.
    TwinRepair,
    /// After removing the twin the rest is `T_Δ`; fixed code.
    TwinRepairStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PendantReason {
    /// Second vertex of a longest path has degree at least 4.
    HighDegreeV2,
    /// Third vertex of a longest path has degree at least 3.
    BranchingV3,
    /// Fourth vertex of a longest path has degree at least 3.
    BranchingV4,
    /// The subtree at the fourth vertex is `P_5` or `T_3*`.
    Terminal,
    /// Found by scanning all vertices after the longest-path cases failed.
    Scan,
}

/// One step: the case, the sub-instance order, the orders of instances it
/// recursed on, and the vertices it added to the code (original labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    #[serde(flatten)]
    pub case: Case,
    pub order: usize,
    pub sub_orders: Vec<usize>,
    pub contributed: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
    /// The whole input is `T_Δ`.
    pub exceptional: bool,
    /// Cases that did not go as the argument predicts.
    pub warnings: Vec<String>,
}

impl ConstructionTrace {
    /// Union of all contributed vertices.
    pub fn replay(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for step in &self.steps {
            for &v in &step.contributed {
                s.insert(v);
            }
        }
        s
    }

    pub fn fallbacks(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.case, Case::SolverFallback { .. }))
            .count()
    }
}

struct Ctx {
    delta: usize,
    trace: ConstructionTrace,
    depth: usize,
    max_depth: usize,
}

/// A code for one sub-instance, in local labels, plus the steps it produced.
struct Built {
    code: VertexSet,
    steps: Vec<TraceStep>,
}

impl Ctx {
    fn step(&self, case: Case, order: usize, sub_orders: Vec<usize>, contributed: Vec<usize>) -> TraceStep {
        TraceStep {
            depth: self.depth,
            case,
            order,
            sub_orders,
            contributed,
        }
    }

    fn acceptable(&self, g: &Graph, code: &VertexSet) -> bool {
        is_io_code(g, code).is_ok_and(|v| v.ok) && check_bound_for(g, code.len(), self.delta) != BoundStatus::Violation
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > self.max_depth {
            return Err(Error::Internal(format!("recursion deeper than {}", self.max_depth)));
        }
        Ok(())
    }

    /// Exact solve as a last resort; the result is always a valid code.
    fn fallback(&mut self, g: &Graph, map: &[usize], note: &str) -> Result<Built> {
        let res = solve(g)?;
        self.trace.warnings.push(format!(
            "solver fallback at depth {} on order {}: {note}",
            self.depth,
            g.order()
        ));
        let contributed = lift(&res.code, map);
        Ok(Built {
            steps: vec![self.step(
                Case::SolverFallback { note: note.into() },
                g.order(),
                Vec::new(),
                contributed,
            )],
            code: res.code,
        })
    }

    // ---- trees ----

    fn tree(&mut self, t: &Graph, map: &[usize]) -> Result<Built> {
        self.enter()?;
        let out = self.tree_inner(t, map);
        self.depth -= 1;
        out
    }

    fn tree_inner(&mut self, t: &Graph, map: &[usize]) -> Result<Built> {
        let n = t.order();
        if n < 5 || !t.is_open_twin_free() {
            return self.fallback(t, map, "sub-instance outside the induction hypothesis");
        }
        if let Some(b) = self.family_member(t, map) {
            return Ok(b);
        }
        if let Some(b) = self.star_split(t, map)? {
            return Ok(b);
        }
        if let Some(b) = self.longest_path_cases(t, map)? {
            return Ok(b);
        }
        self.fallback(t, map, "no case applied")
    }

    /// Smallest canonical set over all roots at which `t` is a family tree.
    fn family_member(&mut self, t: &Graph, map: &[usize]) -> Option<Built> {
        let best = (0..t.order())
            .filter_map(|r| match_family_at(t, r))
            .map(|m| (m.canonical_set(t.order()), m))
            .min_by_key(|(c, m)| (c.len(), m.root))?;
        let (code, m) = best;
        let exceptional = is_subdivided_star(t, self.delta);
        if !self.acceptable(t, &code) {
            return None;
        }
        let case = if t.diameter().ok() == Some(4) {
            Case::DiameterFour { exceptional }
        } else {
            Case::FamilyMember {
                root: map[m.root],
                k: m.vector,
                exceptional,
            }
        };
        Some(Built {
            steps: vec![self.step(case, t.order(), Vec::new(), lift(&code, map))],
            code,
        })
    }

    /// Edges `v1 v2` whose `v1` side is `T_k` centered at `v1`, `2 ≤ k ≤ Δ-1`,
    /// ordered by that side's order, then edge position.
    fn star_split_candidates(&self, t: &Graph) -> Vec<(usize, usize, usize, Vec<usize>)> {
        let mut found = Vec::new();
        for (idx, (a, b)) in t.edges().enumerate() {
            for (v1, v2) in [(a, b), (b, a)] {
                let k = t.degree(v1) - 1;
                if k < 2 || k + 1 > self.delta {
                    continue;
                }
                let side = side_of(t, v1, v2);
                if side.len() != 2 * k + 1 {
                    continue;
                }
                let sub = t.induced_subgraph(&side);
                let local = sub.from_parent[v1].expect("v1 is on its side");
                if match_family_at(&sub.graph, local).is_some_and(|m| m.vector.counts() == [0, k, 0, 0, 0, 0]) {
                    found.push((side.len(), idx, v1, v2, side));
                }
            }
        }
        found.sort_by_key(|c| (c.0, c.1));
        found
            .into_iter()
            .map(|(_, _, v1, v2, side)| (v1, v2, side.len() / 2, side))
            .collect()
    }

    fn star_split(&mut self, t: &Graph, map: &[usize]) -> Result<Option<Built>> {
        for (v1, v2, k, side1) in self.star_split_candidates(t) {
            if let Some(b) = self.star_split_at(t, map, v1, v2, k, &side1)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn star_split_at(
        &mut self,
        t: &Graph,
        map: &[usize],
        v1: usize,
        v2: usize,
        k: usize,
        side1: &[usize],
    ) -> Result<Option<Built>> {
        let n = t.order();
        let side2 = side_of(t, v2, v1);
        if side2.len() <= 4 {
            return Ok(None);
        }
        let f1 = t.induced_subgraph(side1);
        let m1 = match_family_at(&f1.graph, f1.from_parent[v1].unwrap()).expect("checked by the scan");
        let s1 = f1.lift(&m1.canonical_set(f1.graph.order()));
        let f2 = t.induced_subgraph(&side2);
        let f2_map = compose(map, &f2.to_parent);
        let lv2 = f2.from_parent[v2].unwrap();
        let mut code = s1.clone();
        let mut steps = Vec::new();
        let mut contributed = s1.to_vec();
        let (branch, sub_orders);
        if f2.graph.is_open_twin_free() {
            if is_subdivided_star(&f2.graph, self.delta) {
                branch = StarSplitBranch::FarSideStar;
                sub_orders = Vec::new();
                let g2 = &f2.graph;
                let mut dropped = Vec::new();
                if g2.degree(lv2) == 1 {
                    dropped.extend(g2.leaves().into_iter().find(|&l| l != lv2));
                } else {
                    let own = *g2.neighbors(lv2).iter().find(|&&w| g2.degree(w) == 1).expect("support");
                    dropped.push(own);
                    dropped.extend(g2.leaves().into_iter().find(|&l| l != own));
                }
                let s2: Vec<usize> = (0..g2.order())
                    .filter(|v| !dropped.contains(v))
                    .map(|v| f2.to_parent[v])
                    .collect();
                for &v in &s2 {
                    code.insert(v);
                }
                contributed.extend(s2);
            } else {
                branch = StarSplitBranch::Recurse;
                sub_orders = vec![f2.graph.order()];
                let b = self.tree(&f2.graph, &f2_map)?;
                code = code.union(&f2.lift(&b.code));
                steps = b.steps;
            }
        } else {
            // v2 is a leaf of F2 with a twin; drop it.
            if f2.graph.degree(lv2) != 1 {
                return Ok(None);
            }
            let keep: Vec<usize> = (0..f2.graph.order()).filter(|&v| v != lv2).collect();
            let tp = f2.graph.induced_subgraph(&keep);
            if tp.graph.order() <= 4 || !tp.graph.is_open_twin_free() {
                return Ok(None);
            }
            let tp_parent: Vec<usize> = tp.to_parent.iter().map(|&v| f2.to_parent[v]).collect();
            if is_subdivided_star(&tp.graph, self.delta) {
                branch = StarSplitBranch::TwinRepairStar;
                sub_orders = Vec::new();
                // Drop the leaf that was v2's twin.
                let support = f2.graph.neighbors(lv2)[0];
                let twin = f2
                    .graph
                    .neighbors(support)
                    .iter()
                    .copied()
                    .find(|&w| w != lv2 && f2.graph.degree(w) == 1)
                    .expect("twin leaf");
                let s2: Vec<usize> = keep.iter().filter(|&&v| v != twin).map(|&v| f2.to_parent[v]).collect();
                for &v in &s2 {
                    code.insert(v);
                }
                contributed.extend(s2);
            } else {
                branch = StarSplitBranch::TwinRepair;
                sub_orders = vec![tp.graph.order()];
                let b = self.tree(&tp.graph, &compose(map, &tp_parent))?;
                for v in &b.code {
                    code.insert(tp_parent[v]);
                }
                steps = b.steps;
            }
        }
        if !self.acceptable(t, &code) {
            self.trace
                .warnings
                .push(format!("star split at {}-{} rejected on order {n}", map[v1], map[v2]));
            return Ok(None);
        }
        let head = self.step(
            Case::StarSplit {
                v1: map[v1],
                v2: map[v2],
                k,
                branch,
            },
            n,
            sub_orders,
            contributed.iter().map(|&v| map[v]).collect(),
        );
        steps.insert(0, head);
        Ok(Some(Built { code, steps }))
    }

    fn longest_path_cases(&mut self, t: &Graph, map: &[usize]) -> Result<Option<Built>> {
        let path = t.longest_path_in_tree()?;
        let d = path.len() - 1;
        if d < 5 {
            return Ok(None);
        }
        let view = RootedTreeView::new(t, path[d])?;
        let (x, reason) = if t.degree(path[2]) >= 4 {
            (path[2], PendantReason::HighDegreeV2)
        } else if t.degree(path[3]) >= 3 {
            (path[3], PendantReason::BranchingV3)
        } else if t.degree(path[4]) >= 3 {
            (path[4], PendantReason::BranchingV4)
        } else {
            (path[4], PendantReason::Terminal)
        };
        if let Some(b) = self.pendant_split(t, map, &view, x, reason)? {
            return Ok(Some(b));
        }
        // Any other hanging family subtree, deepest first.
        let mut order: Vec<usize> = (0..t.order()).filter(|&v| v != view.root && v != x).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(view.depth[v]), v));
        for v in order {
            if let Some(b) = self.pendant_split(t, map, &view, v, PendantReason::Scan)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    /// Splits off `T_x` (a family tree rooted at `x`) and recurses on the rest,
    /// dropping the parent of `x` first if it has become a twin leaf.
    fn pendant_split(
        &mut self,
        t: &Graph,
        map: &[usize],
        view: &RootedTreeView<'_>,
        x: usize,
        reason: PendantReason,
    ) -> Result<Option<Built>> {
        let Some(p) = view.parent[x] else { return Ok(None) };
        let below = view.closed_descendants(x);
        let sub = t.induced_subgraph(&below);
        let Some(m) = match_family_at(&sub.graph, sub.from_parent[x].unwrap()) else {
            return Ok(None);
        };
        let c = sub.lift(&m.canonical_set(sub.graph.order()));
        let mut rest: Vec<usize> = (0..t.order()).filter(|&v| !below.contains(&v)).collect();
        if rest.len() <= 4 {
            return Ok(None);
        }
        let mut twin_repair = false;
        let mut tp = t.induced_subgraph(&rest);
        if !tp.graph.is_open_twin_free() {
            if tp.graph.degree(tp.from_parent[p].unwrap()) != 1 {
                return Ok(None);
            }
            twin_repair = true;
            rest.retain(|&v| v != p);
            if rest.len() <= 4 {
                return Ok(None);
            }
            tp = t.induced_subgraph(&rest);
            if !tp.graph.is_open_twin_free() {
                return Ok(None);
            }
        }
        // Recursing on T_Δ would return its exceptional code.
        if is_subdivided_star(&tp.graph, self.delta) {
            return Ok(None);
        }
        let projected = c.len() * 2 * self.delta;
        let allowance = (2 * self.delta - 1) * (below.len() + usize::from(twin_repair));
        if projected > allowance {
            return Ok(None);
        }
        let b = self.tree(&tp.graph, &compose(map, &tp.to_parent))?;
        let code = c.union(&tp.lift(&b.code));
        if !self.acceptable(t, &code) {
            self.trace
                .warnings
                .push(format!("pendant split at {} rejected on order {}", map[x], t.order()));
            return Ok(None);
        }
        let mut steps = vec![self.step(
            Case::PendantSplit {
                x: map[x],
                reason,
                twin_repair,
            },
            t.order(),
            vec![tp.graph.order()],
            c.iter().map(|v| map[v]).collect(),
        )];
        steps.extend(b.steps);
        Ok(Some(Built { code, steps }))
    }

    // ---- graphs ----

    fn graph(&mut self, g: &Graph, map: &[usize]) -> Result<Built> {
        self.enter()?;
        let out = self.graph_inner(g, map);
        self.depth -= 1;
        out
    }

    fn graph_inner(&mut self, g: &Graph, map: &[usize]) -> Result<Built> {
        if g.is_tree() {
            return self.tree_inner(g, map);
        }
        if let Some(b) = self.base_graph(g, map) {
            return Ok(b);
        }
        let Some(cycle) = g.find_induced_cycle() else {
            return self.fallback(g, map, "no cycle in a non-tree");
        };
        let p = cycle.len();
        let cycle_edges: Vec<(usize, usize)> = (0..p).map(|i| (cycle[i], cycle[(i + 1) % p])).collect();
        for &(u, v) in &cycle_edges {
            let h = g.delete_edge(u, v)?;
            if h.is_tree() {
                if let Some(b) = self.star_plus_edge(g, map, &h, u, v) {
                    return Ok(b);
                }
            }
            if h.is_open_twin_free() && !is_subdivided_star(&h, self.delta) {
                let b = self.graph(&h, map)?;
                if self.acceptable(g, &b.code) {
                    let mut steps = vec![self.step(
                        Case::CycleEdgeDeletion { u: map[u], v: map[v] },
                        g.order(),
                        vec![h.order()],
                        Vec::new(),
                    )];
                    steps.extend(b.steps);
                    return Ok(Built { code: b.code, steps });
                }
                self.trace
                    .warnings
                    .push(format!("edge deletion {}-{} rejected", map[u], map[v]));
            }
        }
        // Every cycle edge creates twins: delete a degree-2 cycle vertex
        // between two supports.
        let supports = g.support_vertices();
        for i in 0..p {
            let (prev, v, next) = (cycle[(i + p - 1) % p], cycle[i], cycle[(i + 1) % p]);
            if g.degree(v) != 2 || !supports.contains(prev) || !supports.contains(next) {
                continue;
            }
            let sub = g.delete_vertex(v)?;
            if !sub.graph.is_connected() || !sub.graph.is_open_twin_free() || sub.graph.order() < 5 {
                continue;
            }
            let b = self.graph(&sub.graph, &compose(map, &sub.to_parent))?;
            let code = sub.lift(&b.code);
            if self.acceptable(g, &code) {
                let mut steps = vec![self.step(
                    Case::CycleVertexDeletion { v: map[v] },
                    g.order(),
                    vec![sub.graph.order()],
                    Vec::new(),
                )];
                steps.extend(b.steps);
                return Ok(Built { code, steps });
            }
        }
        self.fallback(g, map, "no cycle edge or vertex deletion applied")
    }

    /// The paw (4 vertices, 4 edges) and the 5-vertex unicyclic graphs.
    fn base_graph(&mut self, g: &Graph, map: &[usize]) -> Option<Built> {
        if g.order() == 4 && g.size() == 4 && !g.has_four_cycle() {
            // Paw: all but the pendant vertex.
            let pendant = g.leaves()[0];
            let code = VertexSet::from_vertices(4, (0..4).filter(|&v| v != pendant)).ok()?;
            return self.accept_base(g, map, code, "paw");
        }
        None
    }

    fn accept_base(&mut self, g: &Graph, map: &[usize], code: VertexSet, name: &str) -> Option<Built> {
        if !self.acceptable(g, &code) {
            return None;
        }
        Some(Built {
            steps: vec![self.step(
                Case::BaseGraph { name: name.into() },
                g.order(),
                Vec::new(),
                lift(&code, map),
            )],
            code,
        })
    }

    /// `g = h + uv` with `h ≅ T_k`: fixed codes for the three ways the edge can sit.
    fn star_plus_edge(&mut self, g: &Graph, map: &[usize], h: &Graph, u: usize, v: usize) -> Option<Built> {
        let n = h.order();
        if n.is_multiple_of(2) || n < 5 {
            return None;
        }
        let k = n / 2;
        if !is_subdivided_star(h, k) {
            return None;
        }
        let center =
            (0..n).find(|&c| h.degree(c) == k && (k > 2 || h.neighbors(c).iter().all(|&w| h.degree(w) == 2)))?;
        let leaf_of = |s: usize| h.neighbors(s).iter().copied().find(|&w| w != center).unwrap();
        let support_of = |l: usize| h.neighbors(l)[0];
        let is_support = |x: usize| h.has_edge(center, x);
        let (pattern, dropped): (&str, Vec<usize>) = if is_support(u) && is_support(v) {
            ("supports", vec![leaf_of(u), leaf_of(v)])
        } else if u == center || v == center {
            let other = if u == center { v } else { u };
            // Any leaf other than the joined one.
            let leaf = (0..n).find(|&l| h.degree(l) == 1 && l != other)?;
            ("center_leaf", vec![leaf])
        } else if h.degree(u) == 1 && h.degree(v) == 1 {
            if k == 2 {
                ("cycle", vec![u.min(v)])
            } else {
                let l = u.min(v);
                ("leaves", vec![l, support_of(l)])
            }
        } else {
            return None;
        };
        let code = VertexSet::from_vertices(n, (0..n).filter(|x| !dropped.contains(x))).ok()?;
        if !self.acceptable(g, &code) {
            return None;
        }
        Some(Built {
            steps: vec![self.step(
                Case::StarPlusEdge {
                    u: map[u],
                    v: map[v],
                    pattern: pattern.into(),
                },
                n,
                Vec::new(),
                lift(&code, map),
            )],
            code,
        })
    }
}

/// Vertices reachable from `start` without crossing to `away`, sorted.
fn side_of(t: &Graph, start: usize, away: usize) -> Vec<usize> {
    let mut seen = VertexSet::new(t.order());
    seen.insert(start);
    seen.insert(away);
    let mut stack = vec![start];
    let mut out = vec![start];
    while let Some(v) = stack.pop() {
        for &w in t.neighbors(v) {
            if seen.insert(w) {
                out.push(w);
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

fn compose(map: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&v| map[v]).collect()
}

fn lift(code: &VertexSet, map: &[usize]) -> Vec<usize> {
    code.iter().map(|v| map[v]).collect()
}

fn check_common(g: &Graph, delta: usize) -> Result<()> {
    if delta < 3 {
        return Err(Error::BadParam(format!("delta must be at least 3, got {delta}")));
    }
    if let Some(reason) = no_code_reason(g) {
        return Err(Error::NoCode(reason));
    }
    let actual = g.max_degree()?;
    if actual > delta {
        return Err(Error::DegreeExceeded { actual, bound: delta });
    }
    Ok(())
}

fn finish(g: &Graph, mut ctx: Ctx, built: Built) -> Result<(VertexSet, ConstructionTrace)> {
    ctx.trace.steps = built.steps;
    ctx.trace.exceptional = is_subdivided_star(g, ctx.delta);
    let verdict = is_io_code(g, &built.code)?;
    if !verdict.ok {
        return Err(Error::Internal(format!(
            "constructed set fails ({:?}); trace: {:?}",
            verdict.violation, ctx.trace
        )));
    }
    debug_assert_eq!(ctx.trace.replay(g.order()), built.code, "trace does not replay");
    Ok((built.code, ctx.trace))
}

fn new_ctx(g: &Graph, delta: usize) -> Ctx {
    Ctx {
        delta,
        trace: ConstructionTrace::default(),
        depth: 0,
        max_depth: g.order() + g.size() + 1,
    }
}

/// A code for an open twin-free tree with `n ≥ 5` and maximum degree at most
/// `delta`, within `(2Δ-1)/(2Δ)·n` unless the tree is `T_Δ`.
pub fn construct_tree_code(t: &Graph, delta: usize) -> Result<(VertexSet, ConstructionTrace)> {
    if !t.is_tree() {
        return Err(if t.is_connected() {
            Error::NotATree
        } else {
            Error::Disconnected
        });
    }
    if t.order() < 5 {
        return Err(Error::TooSmall(t.order()));
    }
    check_common(t, delta)?;
    let mut ctx = new_ctx(t, delta);
    let map: Vec<usize> = (0..t.order()).collect();
    let built = ctx.tree(t, &map)?;
    finish(t, ctx, built)
}

/// A code for a connected open twin-free graph without 4-cycles, `n ≥ 5`
/// (or the paw), maximum degree at most `delta`.
pub fn construct_graph_code(g: &Graph, delta: usize) -> Result<(VertexSet, ConstructionTrace)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let paw = g.order() == 4 && g.size() == 4;
    if g.order() < 5 && !paw {
        return Err(Error::TooSmall(g.order()));
    }
    if g.has_four_cycle() {
        return Err(Error::FourCyclePresent);
    }
    check_common(g, delta)?;
    debug_assert!(admits_io_code(g));
    let mut ctx = new_ctx(g, delta);
    let map: Vec<usize> = (0..g.order()).collect();
    let built = ctx.graph(g, &map)?;
    finish(g, ctx, built)
}
