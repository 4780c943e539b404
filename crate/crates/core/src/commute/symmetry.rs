use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::certificate::{subset_names, Certificate, Evidence, Method, Verdict};
use super::verify::case_name;
use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};
use crate::group::{Bound, CoxeterGroup, GroupElement};
use crate::hecke::HeckeAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionRow {
    pub representative: String,
    pub length: usize,
    /// Stabilizer subset `K` with `W_I ∩ w W_I w^{-1} = W_K`.
    pub stabilizer: Vec<String>,
    pub left_quotient_size: u128,
    pub coset_size: u128,
    pub involution: bool,
    /// Index of the row whose double coset is `w_0` times this one.
    pub complement: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionReport {
    pub diagram: String,
    pub removed: String,
    /// Sorted by length, then by representative.
    pub rows: Vec<InvolutionRow>,
    pub all_involutions: bool,
    /// Sum of the left quotient sizes, `|W| / |W_I|`.
    pub total_left_cosets: u128,
}

/// Double cosets of `W_I` with `I = S \ {i}` in a finite group, their sizes
/// and whether each minimal representative is an involution.
pub fn involution_report(group: &Arc<CoxeterGroup>, i: Node) -> Result<InvolutionReport> {
    let d = group.diagram();
    let all: BTreeSet<Node> = d.all_nodes().into_iter().collect();
    if !d.is_spherical(&all) {
        return Err(Error::InfiniteGroup);
    }
    let subset = d.complement_of(i);
    let mut records = group.double_cosets(&subset, Bound::All)?;
    records.sort_by(|a, b| (a.min_rep.length(), &a.min_rep).cmp(&(b.min_rep.length(), &b.min_rep)));
    let (w0, _) = group.longest_element(&all)?;
    let mut rows = Vec::with_capacity(records.len());
    for r in &records {
        let (target, _) = group.strip_to_min_rep(&w0.mul(&r.min_rep)?, &subset);
        let complement = records.iter().position(|x| x.min_rep == target).expect("complement is a listed coset");
        rows.push(InvolutionRow {
            representative: r.min_rep.format(),
            length: r.min_rep.length(),
            stabilizer: subset_names(d, &r.stabilizer_subset),
            left_quotient_size: r.left_quotient_size,
            coset_size: r.coset_size,
            involution: r.involution,
            complement,
        });
    }
    Ok(InvolutionReport {
        diagram: d.to_spec(),
        removed: d.name(i).to_string(),
        all_involutions: rows.iter().all(|r| r.involution),
        total_left_cosets: rows.iter().map(|r| r.left_quotient_size).sum(),
        rows,
    })
}

fn apply(pi: &[Node], word: &[Node]) -> Vec<Node> {
    word.iter().map(|&s| pi[s as usize]).collect()
}

/// `pi` preserves bonds, maps `I` onto itself and keeps each generator in its
/// parameter class.
fn admissible(d: &CoxeterDiagram, class_of: &[usize], subset: &BTreeSet<Node>, pi: &[Node]) -> bool {
    let n = d.rank();
    if pi.len() != n || pi.iter().copied().collect::<BTreeSet<_>>().len() != n {
        return false;
    }
    let bonds = d.all_nodes().iter().all(|&s| {
        d.all_nodes().iter().all(|&t| s == t || d.bond(s, t) == d.bond(pi[s as usize], pi[t as usize]))
    });
    bonds
        && subset.iter().all(|s| subset.contains(&pi[*s as usize]))
        && (0..n).all(|s| class_of[s] == class_of[pi[s] as usize])
}

/// First representative with `pi(w) != w^{-1}`.
fn first_failure(group: &Arc<CoxeterGroup>, pi: &[Node], reps: &[GroupElement]) -> Result<Option<GroupElement>> {
    for w in reps {
        if group.element(&apply(pi, w.word()))? != w.inverse() {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

fn bound_of(group: &CoxeterGroup, bound: Option<usize>) -> Result<Bound> {
    let d = group.diagram();
    match bound {
        Some(b) => Ok(Bound::Length(b)),
        None if d.is_spherical(&d.all_nodes().into_iter().collect()) => Ok(Bound::All),
        None => Err(Error::InfiniteGroup),
    }
}

/// Searches for a diagram automorphism `pi` fixing `I` and the parameter
/// classes with `pi(w) = w^{-1}` for every minimal double coset
/// representative up to the bound. Such a `pi` induces an anti-automorphism
/// of `H^I` fixing the basis, so `H^I` is commutative. The identity is
/// tried first.
pub fn opposition_commutativity(group: &Arc<CoxeterGroup>, subset: &BTreeSet<Node>, bound: Option<usize>) -> Result<Certificate> {
    let d = group.diagram();
    if !d.is_spherical(subset) {
        return Err(Error::NonSpherical);
    }
    let b = bound_of(group, bound)?;
    let reps: Vec<GroupElement> = group.double_cosets(subset, b)?.into_iter().map(|r| r.min_rep).collect();
    let algebra = HeckeAlgebra::new(group.clone());
    let identity = d.all_nodes();
    let mut candidates = vec![identity.clone()];
    candidates.extend(d.automorphisms(Some(subset)).into_iter().filter(|p| *p != identity));
    let mut failure = None;
    let mut chosen = None;
    for pi in candidates {
        if !admissible(d, algebra.class_of(), subset, &pi) {
            continue;
        }
        match first_failure(group, &pi, &reps)? {
            None => {
                chosen = Some(pi);
                break;
            }
            Some(w) => {
                failure.get_or_insert_with(|| format!("pi(w) != w^-1 at w = {}", w.format()));
            }
        }
    }
    let verdict = match (&chosen, b) {
        (Some(_), Bound::All) => Verdict::Commutative,
        (Some(_), Bound::Length(_)) => Verdict::CommutativeUpToBound,
        (None, _) => Verdict::Inconclusive,
    };
    let permutation =
        chosen.map(|pi| d.all_nodes().iter().map(|&s| (d.name(s).to_string(), d.name(pi[s as usize]).to_string())).collect());
    Ok(Certificate {
        case: case_name(group, subset),
        diagram: d.to_spec(),
        subset: subset_names(d, subset),
        method: Method::Automorphism,
        verdict,
        evidence: Evidence::Automorphism {
            failure: if permutation.is_some() { None } else { failure.or(Some("no admissible automorphism".into())) },
            permutation,
            representatives: reps.len(),
            bound,
        },
    })
}

pub(crate) fn recheck_automorphism(cert: &Certificate) -> Result<bool> {
    let Evidence::Automorphism { permutation, representatives, bound, .. } = &cert.evidence else { return Ok(false) };
    let (d, subset) = cert.diagram_and_subset()?;
    let group = CoxeterGroup::new(d)?;
    let d = group.diagram();
    let Some(perm) = permutation else {
        let again = opposition_commutativity(&group, &subset, *bound)?;
        return Ok(again.verdict == cert.verdict);
    };
    let mut pi = d.all_nodes();
    for (s, t) in perm {
        pi[d.node(s)? as usize] = d.node(t)?;
    }
    let algebra = HeckeAlgebra::new(group.clone());
    if !admissible(d, algebra.class_of(), &subset, &pi) {
        return Ok(false);
    }
    let b = bound_of(&group, *bound)?;
    let reps: Vec<GroupElement> = group.double_cosets(&subset, b)?.into_iter().map(|r| r.min_rep).collect();
    let expected = if b == Bound::All { Verdict::Commutative } else { Verdict::CommutativeUpToBound };
    Ok(reps.len() == *representatives && first_failure(&group, &pi, &reps)?.is_none() && cert.verdict == expected)
}
