use std::collections::BTreeSet;
use std::sync::Arc;

use super::certificate::{subset_names, Certificate, Evidence, Method};
use super::table::WordSet;
use super::verify::{recheck, verify_no_reverse_decomposition, verify_words, RowOptions};
use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};
use crate::group::CoxeterGroup;

/// A noncommutativity witness to carry over to a diagram with larger bonds.
#[derive(Clone, Debug)]
pub enum LiftSource {
    /// A table row (or any word set with a pattern).
    Row(WordSet),
    /// An explicit factorization `w = u z v` for the decomposition search.
    Factorization { group: Arc<CoxeterGroup>, subset: BTreeSet<Node>, u: Vec<Node>, z: Vec<Node>, v: Vec<Node> },
}

impl LiftSource {
    fn group(&self) -> &Arc<CoxeterGroup> {
        match self {
            LiftSource::Row(ws) => &ws.group,
            LiftSource::Factorization { group, .. } => group,
        }
    }
}

/// Maps every node of `source` to the target node of the same name and checks
/// `m'_{st} >= m_{st}` for all pairs.
fn node_map(source: &CoxeterDiagram, target: &CoxeterDiagram) -> Result<Vec<Node>> {
    if source.rank() != target.rank() {
        return Err(Error::DominanceViolated(format!("rank {} against {}", source.rank(), target.rank())));
    }
    let map: Vec<Node> = source.all_nodes().iter().map(|&s| target.node(source.name(s))).collect::<Result<_>>()?;
    for s in source.all_nodes() {
        for t in source.all_nodes().into_iter().filter(|&t| t > s) {
            let (a, b) = (source.bond(s, t), target.bond(map[s as usize], map[t as usize]));
            if b < a {
                return Err(Error::DominanceViolated(format!("{}-{}: {} below {}", source.name(s), source.name(t), b, a)));
            }
        }
    }
    Ok(map)
}

fn carry(map: &[Node], word: &[Node]) -> Vec<Node> {
    word.iter().map(|&s| map[s as usize]).collect()
}

/// Re-reads a witness in `target`, whose bonds dominate the source's node for
/// node, and re-runs its verifier there.
pub fn lift_witness(source: &LiftSource, target: &CoxeterDiagram, options: RowOptions) -> Result<Certificate> {
    let src = source.group().diagram();
    let map = node_map(src, target)?;
    let group = CoxeterGroup::new(target.clone())?;
    let inner = match source {
        LiftSource::Row(ws) => {
            let subset: BTreeSet<Node> = ws.subset.iter().map(|&s| map[s as usize]).collect();
            if !target.is_spherical(&subset) {
                return Err(Error::NonSpherical);
            }
            let lifted = WordSet {
                case: format!("{} in {}", ws.case, target.to_spec()),
                group: group.clone(),
                subset,
                u: carry(&map, &ws.u),
                w_i: carry(&map, &ws.w_i),
                i: map[ws.i as usize],
                k: map[ws.k as usize],
                pattern: ws.pattern,
            };
            verify_words(&lifted, options)?
        }
        LiftSource::Factorization { subset, u, z, v, .. } => {
            let subset: BTreeSet<Node> = subset.iter().map(|&s| map[s as usize]).collect();
            if !target.is_spherical(&subset) {
                return Err(Error::NonSpherical);
            }
            verify_no_reverse_decomposition(&group, &subset, &carry(&map, u), &carry(&map, z), &carry(&map, v), options.guard)?
        }
    };
    Ok(Certificate {
        case: inner.case.clone(),
        diagram: target.to_spec(),
        subset: inner.subset.clone(),
        method: Method::Lift,
        verdict: inner.verdict,
        evidence: Evidence::Lift { source_diagram: src.to_spec(), inner: Box::new(inner) },
    })
}

pub(crate) fn recheck_lift(cert: &Certificate) -> Result<bool> {
    let Evidence::Lift { source_diagram, inner } = &cert.evidence else { return Ok(false) };
    let source = CoxeterDiagram::parse(source_diagram)?;
    let (target, subset) = cert.diagram_and_subset()?;
    node_map(&source, &target)?;
    let same_place = inner.diagram == cert.diagram && inner.subset == subset_names(&target, &subset);
    Ok(same_place && recheck(inner)? && inner.verdict == cert.verdict)
}
