//! Generators for the named constructions, each returned with a descriptor
//! carrying labeled vertices and, where one is known, a reference code.

mod enumerate;
mod family_t;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

pub use enumerate::{
    enumerate_small_graphs, enumerate_trees, random_graph, random_prufer_tree, FreeTrees, GraphFilter, SmallGraphs,
    SMALL_GRAPH_CAP, TREE_ENUM_CAP,
};
pub use family_t::{
    match_family, match_family_at, recognize_family, Attachment, AttachmentVector, FamilyMatch, ATTACHMENT_SIZE,
};

/// Which edge is added to a subdivided star.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StarEdge {
    /// Between the first two support vertices.
    G1,
    /// Between the first two leaves.
    G2,
    /// From the center to the last leaf.
    G3,
}

impl std::str::FromStr for StarEdge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G1" => Ok(StarEdge::G1),
            "G2" => Ok(StarEdge::G2),
            "G3" => Ok(StarEdge::G3),
            _ => Err(Error::BadParam(format!("unknown star-plus-edge variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    SubdividedStar { delta: usize },
    ReducedSubdividedStar { delta: usize },
    FamilyT { k: AttachmentVector },
    TightTreePair { delta: usize },
    SubcubicGp { p: usize },
    StarPlusEdge { variant: StarEdge, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub order: usize,
    /// Named vertices, e.g. `"r"`, `"v"`, `"u_1"`, `"z_3"`.
    pub distinguished: BTreeMap<String, usize>,
    /// Attachments around vertex 0, for trees laid out as family members.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attachments: Vec<Attachment>,
    /// The code shaded in the construction's drawing, if there is one.
    pub reference_code: Option<VertexSet>,
}

impl FamilySpec {
    /// Index of a named vertex.
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.distinguished.get(name).copied()
    }
}

fn without(n: usize, dropped: &[usize]) -> VertexSet {
    let mut s = VertexSet::full(n);
    for &v in dropped {
        s.remove(v);
    }
    s
}

fn star_labels(delta: usize, first: usize) -> BTreeMap<String, usize> {
    // Branch i (1-based) occupies first + 2(i-1) (support) and the next index (leaf).
    let mut d = BTreeMap::from([("v".to_string(), 0)]);
    for i in 1..=delta {
        d.insert(format!("v_{i}"), first + 2 * (i - 1));
        d.insert(format!("u_{i}"), first + 2 * (i - 1) + 1);
    }
    d
}

/// `T_Δ`: the star `K_{1,Δ}` with every edge subdivided. Center 0, branch `i`
/// is support `2i-1` and leaf `2i`.
pub fn gen_subdivided_star(delta: usize) -> Result<(Graph, FamilySpec)> {
    if delta < 2 {
        return Err(Error::BadParam(format!(
            "subdivided star needs delta >= 2, got {delta}"
        )));
    }
    let k = [0, delta, 0, 0, 0, 0];
    let (g, attachments) = family_t::assemble(k);
    let reference_code = Some(family_t::canonical_from_parts(g.order(), k, &attachments));
    let spec = FamilySpec {
        kind: FamilyKind::SubdividedStar { delta },
        order: g.order(),
        distinguished: star_labels(delta, 1),
        attachments,
        reference_code,
    };
    Ok((g, spec))
}

/// `T_Δ*`: `T_Δ` with one leaf removed. Center 0, its leaf neighbor 1, then
/// the `Δ-1` subdivided branches.
pub fn gen_reduced_subdivided_star(delta: usize) -> Result<(Graph, FamilySpec)> {
    if delta < 2 {
        return Err(Error::BadParam(format!(
            "reduced subdivided star needs delta >= 2, got {delta}"
        )));
    }
    let k = [1, delta - 1, 0, 0, 0, 0];
    let (g, attachments) = family_t::assemble(k);
    let mut distinguished = star_labels(delta - 1, 2);
    distinguished.insert("u".into(), 1);
    // For delta = 2 the tree is P_4, whose only code is everything.
    let reference_code = Some(if AttachmentVector::is_member(k) {
        family_t::canonical_from_parts(g.order(), k, &attachments)
    } else {
        VertexSet::full(g.order())
    });
    let spec = FamilySpec {
        kind: FamilyKind::ReducedSubdividedStar { delta },
        order: g.order(),
        distinguished,
        attachments,
        reference_code,
    };
    Ok((g, spec))
}

/// `T(r;k)` with the root at 0 and attachments in type order.
pub fn build_family_tree(k: AttachmentVector) -> (Graph, FamilySpec) {
    let (g, attachments) = family_t::assemble(k.counts());
    let reference_code = Some(family_t::canonical_from_parts(g.order(), k.counts(), &attachments));
    let spec = FamilySpec {
        kind: FamilyKind::FamilyT { k },
        order: g.order(),
        distinguished: BTreeMap::from([("r".to_string(), 0)]),
        attachments,
        reference_code,
    };
    (g, spec)
}

/// The canonical code of a tree laid out around vertex 0 by attachments.
pub fn canonical_set(spec: &FamilySpec) -> Result<VertexSet> {
    let mut k = [0usize; 6];
    for a in &spec.attachments {
        k[usize::from(a.kind) - 1] += 1;
    }
    AttachmentVector::new(k)?;
    Ok(family_t::canonical_from_parts(spec.order, k, &spec.attachments))
}

/// Two copies of `T_Δ*` joined by an edge between the centers' leaf neighbors.
/// Copy 1 uses indices `0..2Δ` (center 0, leaf neighbor 1), copy 2 the next `2Δ`.
pub fn gen_tight_tree_pair(delta: usize) -> Result<(Graph, FamilySpec)> {
    if delta < 3 {
        return Err(Error::BadParam(format!(
            "tight tree pair needs delta >= 3, got {delta}"
        )));
    }
    let (half, _) = gen_reduced_subdivided_star(delta)?;
    let off = half.order();
    let edges = half
        .edges()
        .chain(half.edges().map(|(a, b)| (a + off, b + off)))
        .chain([(1, off + 1)]);
    let g = Graph::from_edges(2 * off, edges)?;
    let mut distinguished = BTreeMap::new();
    for (copy, base) in [(1, 0), (2, off)] {
        distinguished.insert(format!("v_{copy}"), base);
        distinguished.insert(format!("u_{copy}"), base + 1);
    }
    // All but one distance-2 leaf per copy.
    let reference_code = Some(without(2 * off, &[3, off + 3]));
    let spec = FamilySpec {
        kind: FamilyKind::TightTreePair { delta },
        order: g.order(),
        distinguished,
        attachments: Vec::new(),
        reference_code,
    };
    Ok((g, spec))
}

/// A `p`-cycle `u_1..u_p` where each `u_i` starts a path `u v w x y` with a
/// pendant `z` on `w`. Gadget `i` (1-based) occupies `6(i-1)..6i` in the
/// order `u v w x y z`.
pub fn gen_subcubic_gp(p: usize) -> Result<(Graph, FamilySpec)> {
    if p < 3 || p == 4 {
        return Err(Error::BadParam(format!(
            "subcubic family needs p >= 3 and p != 4, got {p}"
        )));
    }
    let mut edges = Vec::with_capacity(6 * p);
    let mut distinguished = BTreeMap::new();
    for i in 0..p {
        let b = 6 * i;
        edges.extend([
            (b, b + 1),
            (b + 1, b + 2),
            (b + 2, b + 3),
            (b + 3, b + 4),
            (b + 2, b + 5),
        ]);
        edges.push((b, 6 * ((i + 1) % p)));
        for (j, name) in ["u", "v", "w", "x", "y", "z"].iter().enumerate() {
            distinguished.insert(format!("{name}_{}", i + 1), b + j);
        }
    }
    let g = Graph::from_edges(6 * p, edges)?;
    let zs: Vec<usize> = (0..p).map(|i| 6 * i + 5).collect();
    let spec = FamilySpec {
        kind: FamilyKind::SubcubicGp { p },
        order: g.order(),
        distinguished,
        attachments: Vec::new(),
        reference_code: Some(without(6 * p, &zs)),
    };
    Ok((g, spec))
}

/// `T_k` plus one edge. Reference codes follow the drawn shadings: `G1` omits
/// the first two leaves, `G2` the first support and its leaf, `G3` the first leaf.
pub fn gen_star_plus_edge(variant: StarEdge, k: usize) -> Result<(Graph, FamilySpec)> {
    if k < 2 {
        return Err(Error::BadParam(format!("star plus edge needs k >= 2, got {k}")));
    }
    let (star, base) = gen_subdivided_star(k)?;
    let (extra, dropped): ((usize, usize), &[usize]) = match variant {
        StarEdge::G1 => ((1, 3), &[2, 4]),
        StarEdge::G2 => ((2, 4), &[1, 2]),
        StarEdge::G3 => ((0, 2 * k), &[2]),
    };
    let g = star.add_edge(extra.0, extra.1)?;
    let spec = FamilySpec {
        kind: FamilyKind::StarPlusEdge { variant, k },
        order: g.order(),
        distinguished: base.distinguished,
        attachments: Vec::new(),
        reference_code: Some(without(g.order(), dropped)),
    };
    Ok((g, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::trees_isomorphic;
    use crate::verify::is_io_code;

    #[test]
    fn stars() {
        let (t4, spec) = gen_subdivided_star(4).unwrap();
        assert_eq!((t4.order(), t4.max_degree().unwrap()), (9, 4));
        assert_eq!(spec.vertex("u_2"), Some(4));
        assert!(trees_isomorphic(&gen_subdivided_star(2).unwrap().0, &Graph::path(5)));
        let (r4, _) = gen_reduced_subdivided_star(4).unwrap();
        assert_eq!(r4.order(), 8);
        assert_eq!(gen_reduced_subdivided_star(2).unwrap().0.order(), 4);
        assert!(trees_isomorphic(
            &gen_reduced_subdivided_star(2).unwrap().0,
            &Graph::path(4)
        ));
        assert!(gen_subdivided_star(1).is_err());
    }

    #[test]
    fn canonical_set_of_star_drops_one_leaf() {
        for delta in 2..=6 {
            let (g, spec) = gen_subdivided_star(delta).unwrap();
            let c = canonical_set(&spec).unwrap();
            assert_eq!(c.len(), 2 * delta);
            assert!(is_io_code(&g, &c).unwrap().ok);
        }
        let (_, p4) = gen_reduced_subdivided_star(2).unwrap();
        assert!(matches!(canonical_set(&p4), Err(Error::NotInFamily(_))));
    }

    #[test]
    fn tight_pair_shape() {
        let (g, spec) = gen_tight_tree_pair(3).unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_tree());
        assert_eq!(g.diameter().unwrap(), 7);
        assert!(g.is_open_twin_free() && !g.has_four_cycle());
        let code = spec.reference_code.unwrap();
        assert_eq!(code.len(), 10);
        assert!(is_io_code(&g, &code).unwrap().ok);
    }

    #[test]
    fn gp_shape() {
        assert!(gen_subcubic_gp(4).is_err());
        assert!(gen_subcubic_gp(2).is_err());
        for p in [3, 5, 6, 7] {
            let (g, spec) = gen_subcubic_gp(p).unwrap();
            assert_eq!(g.order(), 6 * p);
            assert_eq!(g.max_degree().unwrap(), 3);
            assert!(g.is_open_twin_free() && !g.has_four_cycle() && g.is_connected());
            let code = spec.reference_code.unwrap();
            assert_eq!(code.len(), 5 * p);
            assert!(is_io_code(&g, &code).unwrap().ok);
        }
    }

    #[test]
    fn star_plus_edge_shapes() {
        let (c5, _) = gen_star_plus_edge(StarEdge::G2, 2).unwrap();
        assert_eq!(c5.degrees(), vec![2; 5]);
        assert!(c5.is_connected());
        for k in 2..=5 {
            let (g3, _) = gen_star_plus_edge(StarEdge::G3, k).unwrap();
            assert_eq!(g3.degree(0), k + 1);
            assert_eq!(g3.order(), 2 * k + 1);
            let (g1, spec) = gen_star_plus_edge(StarEdge::G1, k).unwrap();
            assert_eq!(spec.reference_code.as_ref().unwrap().len(), 2 * k - 1);
            assert!(is_io_code(&g1, spec.reference_code.as_ref().unwrap()).unwrap().ok);
        }
        assert!("g4".parse::<StarEdge>().is_err());
    }

    #[test]
    fn fig_2a_tree() {
        let k = AttachmentVector::new([1, 3, 2, 3, 2, 2]).unwrap();
        let (g, spec) = build_family_tree(k);
        assert_eq!(g.degree(0), 13);
        let c = canonical_set(&spec).unwrap();
        assert!(is_io_code(&g, &c).unwrap().ok);
        // Dropped: the type-1 vertex and one leaf per type-3..6 attachment.
        assert_eq!(c.len(), g.order() - 1 - 2 - 3 - 2 - 2);
    }
}
