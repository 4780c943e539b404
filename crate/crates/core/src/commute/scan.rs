use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::certificate::{subset_names, Certificate, Evidence, Method, Verdict};
use super::verify::{case_name, recheck, verify_no_reverse_decomposition};
use super::DEFAULT_GUARD;
use crate::diagram::Node;
use crate::error::{Error, Result};
use crate::group::{Bound, CoxeterGroup, GroupElement};
use crate::hecke::{HeckeAlgebra, ParabolicEngine, ParamPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest length of the representatives `u`, `v`; `None` scans all of a
    /// finite group.
    pub bound: Option<usize>,
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { bound: None, threads: 1 }
    }
}

impl ScanOptions {
    pub fn bounded(bound: usize) -> ScanOptions {
        ScanOptions { bound: Some(bound), threads: 1 }
    }
}

struct Mismatch {
    w: GroupElement,
    c_uv: ParamPolynomial,
    c_vu: ParamPolynomial,
}

fn psi(p: &ParamPolynomial) -> BigRational {
    p.eval_uniform(2)
}

/// Picks the differing coefficient to report: the first `w` whose values at
/// `q = 2` differ, or else the first `w` that differs at all.
fn first_mismatch(
    a: &BTreeMap<GroupElement, ParamPolynomial>,
    b: &BTreeMap<GroupElement, ParamPolynomial>,
    vars: usize,
) -> Option<Mismatch> {
    let keys: BTreeSet<&GroupElement> = a.keys().chain(b.keys()).collect();
    let zero = ParamPolynomial::zero(vars);
    let mut fallback = None;
    for w in keys {
        let x = a.get(w).unwrap_or(&zero);
        let y = b.get(w).unwrap_or(&zero);
        if x == y {
            continue;
        }
        let m = Mismatch { w: w.clone(), c_uv: x.clone(), c_vu: y.clone() };
        if psi(x) != psi(y) {
            return Some(m);
        }
        fallback.get_or_insert(m);
    }
    fallback
}

fn compare_pair(engine: &mut ParabolicEngine, u: &GroupElement, v: &GroupElement) -> Result<Option<Mismatch>> {
    let vars = engine.algebra().classes();
    let uv = engine.structure_constants(u, v)?;
    let vu = engine.structure_constants(v, u)?;
    Ok(first_mismatch(&uv, &vu, vars))
}

/// Compares `c^I_{u,v;w}` with `c^I_{v,u;w}` for all pairs of minimal
/// double coset representatives up to the bound, in order of total length.
/// Parallel runs split the pairs among workers and report the same first
/// mismatch as a sequential run.
pub fn direct_commutativity_scan(
    group: &Arc<CoxeterGroup>,
    subset: &BTreeSet<Node>,
    options: ScanOptions,
) -> Result<Certificate> {
    let d = group.diagram();
    if !d.is_spherical(subset) {
        return Err(Error::NonSpherical);
    }
    let bound = options.bound.map_or(Bound::All, Bound::Length);
    let reps: Vec<GroupElement> = group
        .double_cosets(subset, bound)?
        .into_iter()
        .map(|r| r.min_rep)
        .filter(|r| !r.is_identity())
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|a| (a + 1..reps.len()).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| (reps[a].length() + reps[b].length(), a, b));

    let algebra = HeckeAlgebra::new(group.clone());
    let threads = options.threads.max(1).min(pairs.len().max(1));
    let best = AtomicUsize::new(usize::MAX);
    let worker = |t: usize| -> Result<Option<(usize, Mismatch)>> {
        let mut engine = ParabolicEngine::new(algebra.clone(), subset)?;
        for idx in (t..pairs.len()).step_by(threads) {
            if idx > best.load(Ordering::Relaxed) {
                break;
            }
            let (a, b) = pairs[idx];
            if let Some(m) = compare_pair(&mut engine, &reps[a], &reps[b])? {
                best.fetch_min(idx, Ordering::Relaxed);
                return Ok(Some((idx, m)));
            }
        }
        Ok(None)
    };
    let results: Vec<Result<Option<(usize, Mismatch)>>> = if threads == 1 {
        vec![worker(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads).map(|t| scope.spawn(move || worker(t))).collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        })
    };
    let mut found: Option<(usize, Mismatch)> = None;
    for r in results {
        if let Some((idx, m)) = r? {
            if found.as_ref().is_none_or(|(j, _)| idx < *j) {
                found = Some((idx, m));
            }
        }
    }

    let pairs_checked = match &found {
        Some((idx, _)) => idx + 1,
        None => pairs.len(),
    };
    let names = |p: &ParamPolynomial| algebra.format_poly(p);
    let (verdict, evidence) = match found {
        Some((idx, m)) => {
            let (a, b) = pairs[idx];
            (
                Verdict::Noncommutative,
                Evidence::Commutator {
                    u: Some(reps[a].format()),
                    v: Some(reps[b].format()),
                    w: Some(m.w.format()),
                    c_uv: Some(names(&m.c_uv)),
                    c_vu: Some(names(&m.c_vu)),
                    psi_uv: Some(psi(&m.c_uv).to_string()),
                    psi_vu: Some(psi(&m.c_vu).to_string()),
                    representatives: reps.len() + 1,
                    pairs_checked,
                    bound: options.bound,
                },
            )
        }
        None => (
            if options.bound.is_none() { Verdict::Commutative } else { Verdict::CommutativeUpToBound },
            Evidence::Commutator {
                u: None,
                v: None,
                w: None,
                c_uv: None,
                c_vu: None,
                psi_uv: None,
                psi_vu: None,
                representatives: reps.len() + 1,
                pairs_checked,
                bound: options.bound,
            },
        ),
    };
    Ok(Certificate {
        case: case_name(group, subset),
        diagram: d.to_spec(),
        subset: subset_names(d, subset),
        method: Method::DirectCommutator,
        verdict,
        evidence,
    })
}

/// A witness pair is rechecked by recomputing its two coefficients; a scan
/// without a witness can only be rechecked by scanning again.
pub(crate) fn recheck_commutator(cert: &Certificate) -> Result<bool> {
    let Evidence::Commutator { u, v, w, c_uv, c_vu, psi_uv, psi_vu, bound, .. } = &cert.evidence else {
        return Ok(false);
    };
    let (d, subset) = cert.diagram_and_subset()?;
    let group = CoxeterGroup::new(d)?;
    match (u, v, w) {
        (Some(u), Some(v), Some(w)) => {
            let (u, v, w) = (group.parse_element(u)?, group.parse_element(v)?, group.parse_element(w)?);
            let algebra = HeckeAlgebra::new(group.clone());
            let mut engine = ParabolicEngine::new(algebra.clone(), &subset)?;
            let zero = ParamPolynomial::zero(algebra.classes());
            let x = engine.structure_constants(&u, &v)?.remove(&w).unwrap_or_else(|| zero.clone());
            let y = engine.structure_constants(&v, &u)?.remove(&w).unwrap_or(zero);
            let same = c_uv.as_deref() == Some(&algebra.format_poly(&x))
                && c_vu.as_deref() == Some(&algebra.format_poly(&y))
                && psi_uv.as_deref() == Some(&psi(&x).to_string())
                && psi_vu.as_deref() == Some(&psi(&y).to_string());
            let nonneg = !psi(&x).lt(&BigRational::zero()) && !psi(&y).lt(&BigRational::zero());
            Ok(same && nonneg && x != y && cert.verdict == Verdict::Noncommutative)
        }
        _ => {
            let again = direct_commutativity_scan(&group, &subset, ScanOptions { bound: *bound, threads: 1 })?;
            Ok(again.verdict == cert.verdict)
        }
    }
}

/// Shortest path `s, s_1, ..., s_n, t` with `s != t` outside `I` and the
/// interior inside `I`, preferring the lexicographically least endpoints.
fn shortest_outside_path(group: &CoxeterGroup, subset: &BTreeSet<Node>) -> Result<Vec<Node>> {
    let d = group.diagram();
    if !d.is_connected() {
        return Err(Error::Disconnected);
    }
    let outside: Vec<Node> = d.all_nodes().into_iter().filter(|s| !subset.contains(s)).collect();
    if outside.len() < 2 {
        return Err(Error::InvalidSubset("at least two nodes must lie outside I".into()));
    }
    let mut best: Option<Vec<Node>> = None;
    for &s in &outside {
        let mut parent: BTreeMap<Node, Node> = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        let mut seen = BTreeSet::from([s]);
        'bfs: while let Some(x) = queue.pop_front() {
            for y in d.neighbours(x) {
                if !seen.insert(y) {
                    continue;
                }
                parent.insert(y, x);
                if subset.contains(&y) {
                    queue.push_back(y);
                } else {
                    let mut path = vec![y];
                    while let Some(&p) = parent.get(path.last().unwrap()) {
                        path.push(p);
                    }
                    path.reverse();
                    if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                        best = Some(path);
                    }
                    break 'bfs;
                }
            }
        }
    }
    best.ok_or(Error::Disconnected)
}

/// Noncommutativity when two or more nodes lie outside `I`: for a shortest
/// path `s ... t` through `I`, `w = s s_1 ... s_n t` has no reversed
/// factorization.
pub fn path_witness(group: &Arc<CoxeterGroup>, subset: &BTreeSet<Node>) -> Result<Certificate> {
    let d = group.diagram();
    if !d.is_spherical(subset) {
        return Err(Error::NonSpherical);
    }
    let path = shortest_outside_path(group, subset)?;
    let n = path.len();
    let inner = verify_no_reverse_decomposition(group, subset, &path[..1], &path[1..n - 1], &path[n - 1..], DEFAULT_GUARD)?;
    Ok(Certificate {
        case: case_name(group, subset),
        diagram: d.to_spec(),
        subset: subset_names(d, subset),
        method: Method::PathWitness,
        verdict: inner.verdict,
        evidence: Evidence::Path { path: path.iter().map(|&s| d.name(s).to_string()).collect(), inner: Box::new(inner) },
    })
}

pub(crate) fn recheck_path(cert: &Certificate) -> Result<bool> {
    let Evidence::Path { path, inner } = &cert.evidence else { return Ok(false) };
    let (d, subset) = cert.diagram_and_subset()?;
    let group = CoxeterGroup::new(d)?;
    let d = group.diagram();
    let nodes: Vec<Node> = path.iter().map(|s| d.node(s)).collect::<Result<_>>()?;
    let n = nodes.len();
    let shape = n >= 2
        && !subset.contains(&nodes[0])
        && !subset.contains(&nodes[n - 1])
        && nodes[0] != nodes[n - 1]
        && nodes[1..n - 1].iter().all(|s| subset.contains(s))
        && nodes.windows(2).all(|p| !d.bond(p[0], p[1]).commutes());
    let shortest = shortest_outside_path(&group, &subset)?.len() == n;
    let Evidence::Decomposition { u, z, v, .. } = &inner.evidence else { return Ok(false) };
    let matches = *u == d.format_word(&nodes[..1]) && *z == d.format_word(&nodes[1..n - 1]) && *v == d.format_word(&nodes[n - 1..]);
    Ok(shape && shortest && matches && recheck(inner)? && inner.verdict == cert.verdict)
}
