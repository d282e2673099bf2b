//! The defining predicates of identifying open codes.

use serde::Serialize;

use crate::error::{Error, NoCodeReason, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// A concrete reason a candidate set fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `v` has no neighbor in the set.
    NotTotallyDominated { vertex: usize },
    /// `N(u) ∩ S = N(v) ∩ S` with `u < v`.
    NotSeparated { u: usize, v: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub violation: Option<Violation>,
}

impl Verdict {
    fn pass() -> Verdict {
        Verdict {
            ok: true,
            violation: None,
        }
    }

    fn fail(v: Violation) -> Verdict {
        Verdict {
            ok: false,
            violation: Some(v),
        }
    }
}

fn check_universe(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.universe() == g.order() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            set: s.universe(),
            graph: g.order(),
        })
    }
}

/// `N(v) ∩ S` for every vertex.
pub fn signatures(g: &Graph, s: &VertexSet) -> Result<Vec<VertexSet>> {
    check_universe(g, s)?;
    Ok((0..g.order()).map(|v| g.neighbor_set(v).intersection(s)).collect())
}

/// Every vertex has a neighbor in `s`. The witness is the lowest undominated vertex.
pub fn is_total_dominating(g: &Graph, s: &VertexSet) -> Result<Verdict> {
    check_universe(g, s)?;
    Ok(match (0..g.order()).find(|&v| !g.neighbor_set(v).intersects(s)) {
        Some(vertex) => Verdict::fail(Violation::NotTotallyDominated { vertex }),
        None => Verdict::pass(),
    })
}

/// All signatures `N(v) ∩ S` are pairwise distinct. The witness is the
/// lexicographically smallest colliding pair.
pub fn is_separating_open_code(g: &Graph, s: &VertexSet) -> Result<Verdict> {
    let sigs = signatures(g, s)?;
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]).then(a.cmp(&b)));
    let mut witness: Option<(usize, usize)> = None;
    for run in order.chunk_by(|&a, &b| sigs[a] == sigs[b]) {
        // Runs are sorted by index, so the first two members form the smallest pair in the run.
        if let [u, v, ..] = *run {
            if witness.is_none_or(|w| (u, v) < w) {
                witness = Some((u, v));
            }
        }
    }
    Ok(match witness {
        Some((u, v)) => Verdict::fail(Violation::NotSeparated { u, v }),
        None => Verdict::pass(),
    })
}

/// Total domination and separation; total domination is reported first.
pub fn is_io_code(g: &Graph, s: &VertexSet) -> Result<Verdict> {
    let td = is_total_dominating(g, s)?;
    if !td.ok {
        return Ok(td);
    }
    is_separating_open_code(g, s)
}

/// Whether some identifying open code exists: isolate-free and open twin-free.
pub fn admits_io_code(g: &Graph) -> bool {
    no_code_reason(g).is_none()
}

/// The obstruction to having an identifying open code, if any.
pub fn no_code_reason(g: &Graph) -> Option<NoCodeReason> {
    if let Some(v) = (0..g.order()).find(|&v| g.degree(v) == 0) {
        return Some(NoCodeReason::Isolated(v));
    }
    g.find_open_twins().first().map(|&(u, v)| NoCodeReason::OpenTwins(u, v))
}
