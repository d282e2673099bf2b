//! The attachment family: trees grown from a root by six attachment shapes,
//! their canonical codes, and recognition of arbitrary trees as members.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Counts `k1..k6` of attachments of each type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 6]", into = "[usize; 6]")]
pub struct AttachmentVector([usize; 6]);

const EXCLUDED: [[usize; 6]; 4] = [
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 0, 0],
];

/// Number of vertices each attachment type contributes.
pub const ATTACHMENT_SIZE: [usize; 6] = [1, 2, 3, 4, 4, 5];

/// Edges of each attachment shape in local indices; local 0 is the link vertex
/// joined to the root.
const SHAPE: [&[(usize, usize)]; 6] = [
    &[],
    &[(0, 1)],
    &[(0, 1), (1, 2)],
    &[(0, 1), (1, 2), (2, 3)],
    // link l, leaf x, support s, leaf y: l-x, l-s, s-y
    &[(0, 1), (0, 2), (2, 3)],
    // link l, center c, leaf a, support s, leaf t: l-c, c-a, c-s, s-t
    &[(0, 1), (1, 2), (1, 3), (3, 4)],
];

/// Local index of the leaf a canonical set leaves out (types 2..6).
const DROPPED_LEAF: [usize; 6] = [0, 1, 2, 3, 1, 2];

impl AttachmentVector {
    pub fn new(k: [usize; 6]) -> Result<Self> {
        if Self::is_member(k) {
            Ok(AttachmentVector(k))
        } else {
            Err(Error::NotInFamily(k))
        }
    }

    /// `k1 ≤ 1`, at least one attachment, and not one of the four excluded small vectors.
    pub fn is_member(k: [usize; 6]) -> bool {
        k[0] <= 1 && k.iter().sum::<usize>() >= 1 && !EXCLUDED.contains(&k)
    }

    pub fn counts(&self) -> [usize; 6] {
        self.0
    }

    /// Degree of the root.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn order(&self) -> usize {
        1 + self.0.iter().zip(ATTACHMENT_SIZE).map(|(k, s)| k * s).sum::<usize>()
    }
}

impl TryFrom<[usize; 6]> for AttachmentVector {
    type Error = Error;
    fn try_from(k: [usize; 6]) -> Result<Self> {
        AttachmentVector::new(k)
    }
}

impl From<AttachmentVector> for [usize; 6] {
    fn from(k: AttachmentVector) -> Self {
        k.0
    }
}

/// One attachment: its type (1..=6) and its vertices in shape order, link first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub kind: u8,
    pub vertices: Vec<usize>,
}

impl Attachment {
    pub fn link(&self) -> usize {
        self.vertices[0]
    }
}

/// Builds the tree for any count vector, member or not. Vertex 0 is the root;
/// attachments follow in type order.
pub(crate) fn assemble(k: [usize; 6]) -> (Graph, Vec<Attachment>) {
    let mut edges = Vec::new();
    let mut attachments = Vec::new();
    let mut next = 1;
    for (t, &count) in k.iter().enumerate() {
        for _ in 0..count {
            let vertices: Vec<usize> = (next..next + ATTACHMENT_SIZE[t]).collect();
            edges.push((0, next));
            edges.extend(SHAPE[t].iter().map(|&(a, b)| (next + a, next + b)));
            next += ATTACHMENT_SIZE[t];
            attachments.push(Attachment {
                kind: t as u8 + 1,
                vertices,
            });
        }
    }
    let g = Graph::from_edges(next, edges).expect("attachment layout is valid");
    (g, attachments)
}

/// A tree matched as a family member at a particular root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMatch {
    pub root: usize,
    pub vector: AttachmentVector,
    /// Sorted by type, then by link vertex.
    pub attachments: Vec<Attachment>,
}

impl FamilyMatch {
    /// The canonical set on a graph of order `n` (the matched tree's order).
    pub fn canonical_set(&self, n: usize) -> VertexSet {
        canonical_from_parts(n, self.vector.counts(), &self.attachments)
    }
}

pub(crate) fn canonical_from_parts(n: usize, k: [usize; 6], attachments: &[Attachment]) -> VertexSet {
    let mut c = VertexSet::full(n);
    let of_type = |t: u8| attachments.iter().filter(move |a| a.kind == t);
    if k == [1, 0, 1, 0, 0, 0] {
        // P_5: drop the leaf at distance 3 from the root.
        let a = of_type(3).next().expect("one type-3 attachment");
        c.remove(a.vertices[2]);
        return c;
    }
    if k == [1, 0, 0, 0, 1, 0] {
        // Drop the leaf at distance 2 from the root.
        let a = of_type(5).next().expect("one type-5 attachment");
        c.remove(a.vertices[1]);
        return c;
    }
    for a in of_type(1) {
        c.remove(a.vertices[0]);
    }
    if k[0] == 0 {
        if let Some(a) = of_type(2).next() {
            c.remove(a.vertices[1]);
        }
    }
    for t in 3..=6u8 {
        for a in of_type(t) {
            c.remove(a.vertices[DROPPED_LEAF[usize::from(t) - 1]]);
        }
    }
    c
}

/// Classifies the branch hanging from `root` through `link`.
fn classify_branch(t: &Graph, root: usize, link: usize) -> Option<Attachment> {
    // Children lists within the branch, gathered by DFS; bail out past 5 vertices.
    let mut order = vec![link];
    let mut parent = vec![(link, root)];
    let mut i = 0;
    while i < order.len() {
        let (v, p) = parent[i];
        for &w in t.neighbors(v) {
            if w != p {
                if order.len() == 5 {
                    return None;
                }
                order.push(w);
                parent.push((w, v));
            }
        }
        i += 1;
    }
    let children = |v: usize| -> Vec<usize> {
        t.neighbors(v)
            .iter()
            .copied()
            .filter(|&w| parent.iter().any(|&(x, p)| x == w && p == v))
            .collect()
    };
    let only = |v: usize| -> Option<usize> {
        match children(v).as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    };
    let leaf_and_stem = |v: usize| -> Option<(usize, usize, usize)> {
        // Exactly two children: a leaf and a support with one leaf child.
        let cs = children(v);
        let [a, b] = cs.as_slice() else { return None };
        let (leaf, s) = if children(*a).is_empty() { (*a, *b) } else { (*b, *a) };
        if !children(leaf).is_empty() {
            return None;
        }
        let y = only(s)?;
        children(y).is_empty().then_some((leaf, s, y))
    };
    let (kind, vertices) = match order.len() {
        1 => (1, vec![link]),
        2 => (2, vec![link, only(link)?]),
        3 => {
            let a = only(link)?;
            (3, vec![link, a, only(a)?])
        }
        4 => {
            if let Some(a) = only(link) {
                let b = only(a)?;
                (4, vec![link, a, b, only(b)?])
            } else {
                let (x, s, y) = leaf_and_stem(link)?;
                (5, vec![link, x, s, y])
            }
        }
        5 => {
            let c = only(link)?;
            let (a, s, y) = leaf_and_stem(c)?;
            (6, vec![link, c, a, s, y])
        }
        _ => return None,
    };
    Some(Attachment { kind, vertices })
}

/// Matches a tree as a family member rooted at `root`.
pub fn match_family_at(t: &Graph, root: usize) -> Option<FamilyMatch> {
    if root >= t.order() || !t.is_tree() {
        return None;
    }
    match_tree_at(t, root)
}

fn match_tree_at(t: &Graph, root: usize) -> Option<FamilyMatch> {
    let mut attachments = Vec::with_capacity(t.degree(root));
    let mut k = [0usize; 6];
    for &link in t.neighbors(root) {
        let a = classify_branch(t, root, link)?;
        k[usize::from(a.kind) - 1] += 1;
        attachments.push(a);
    }
    let vector = AttachmentVector::new(k).ok()?;
    attachments.sort_by_key(|a| (a.kind, a.link()));
    Some(FamilyMatch {
        root,
        vector,
        attachments,
    })
}

/// Lowest-index root at which the tree is a family member.
pub fn match_family(t: &Graph) -> Option<FamilyMatch> {
    if !t.is_tree() {
        return None;
    }
    (0..t.order()).find_map(|r| match_tree_at(t, r))
}

/// `(root, k)` for the lowest-index root that works, if any.
pub fn recognize_family(t: &Graph) -> Option<(usize, AttachmentVector)> {
    match_family(t).map(|m| (m.root, m.vector))
}
