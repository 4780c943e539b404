use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::certificate::{subset_names, Certificate, Evidence, Method, Verdict};
use super::table::{StarPattern, TableRow, WordSet};
use super::DEFAULT_GUARD;
use crate::diagram::Node;
use crate::error::{Error, Result};
use crate::group::{mask_of, CoxeterGroup, ElementCache, GroupElement, NodeMask};
use crate::heaps::{between_counts, braid_closure_partial, is_braid_closed, CommutationClass, Limits, Pair};

/// Options for verifying table rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowOptions {
    pub limits: Limits,
    /// State guard for the Bruhat decomposition search.
    pub guard: usize,
    /// Largest rank instantiated for parametrized rows.
    pub max_n: usize,
    /// Run the decomposition search on every row, not only where the heap
    /// argument needs support.
    pub always_second: bool,
}

impl Default for RowOptions {
    fn default() -> Self {
        RowOptions { limits: Limits::default(), guard: DEFAULT_GUARD, max_n: 8, always_second: false }
    }
}

pub(crate) fn case_name(group: &CoxeterGroup, subset: &BTreeSet<Node>) -> String {
    let d = group.diagram();
    format!("{} I={{{}}}", d.to_spec(), subset_names(d, subset).join(","))
}

fn in_mask(word: &[Node], mask: NodeMask) -> bool {
    word.iter().all(|&s| mask >> s & 1 == 1)
}

/// Checks that `w = u z v` is reduced with `z` in `W_I` and `u`, `v`
/// minimal double coset representatives; returns `w` and whether it is
/// minimal too.
fn factorization(group: &Arc<CoxeterGroup>, subset: &BTreeSet<Node>, u: &[Node], z: &[Node], v: &[Node]) -> Result<(Vec<Node>, bool)> {
    let d = group.diagram();
    let mask = mask_of(subset);
    let w: Vec<Node> = u.iter().chain(z).chain(v).copied().collect();
    if !group.is_reduced(&w)? {
        return Err(Error::NotReduced(d.format_word(&w)));
    }
    if !in_mask(z, mask) {
        return Err(Error::MalformedWitness(format!("{} is not in W_I", d.format_word(z))));
    }
    for word in [u, v] {
        if !group.element(word)?.is_i_reduced(mask) {
            return Err(Error::NotIReduced(d.format_word(word)));
        }
    }
    let minimal = group.element(&w)?.is_i_reduced(mask);
    Ok((w, minimal))
}

/// As [`factorization`], additionally requiring `w` to be minimal.
fn check_factorization(group: &Arc<CoxeterGroup>, subset: &BTreeSet<Node>, u: &[Node], z: &[Node], v: &[Node]) -> Result<Vec<Node>> {
    let (w, minimal) = factorization(group, subset, u, z, v)?;
    if !minimal {
        return Err(Error::NotIReduced(group.diagram().format_word(&w)));
    }
    Ok(w)
}

/// Searches for a factorization `w = v'z'u'` with `v' <= v`, `z'` in `W_I`,
/// `u' <= u` and lengths adding up, where `w = u z v`. When none exists,
/// `c^I_{u,v;w}` is nonzero while `c^I_{v,u;w}` vanishes.
///
/// The search walks suffixes `u'` of `w` one letter at a time, abandoning a
/// branch as soon as `u' <= u` fails (longer suffixes lie above it), and
/// tests the remaining prefix against the lower set of `v`. A `w` that is
/// not a minimal double coset representative is searched but never yields
/// a noncommutative verdict.
pub fn verify_no_reverse_decomposition(
    group: &Arc<CoxeterGroup>,
    subset: &BTreeSet<Node>,
    u: &[Node],
    z: &[Node],
    v: &[Node],
    guard: usize,
) -> Result<Certificate> {
    let d = group.diagram();
    let (w, minimal) = factorization(group, subset, u, z, v)?;
    let mask = mask_of(subset);
    let u_el = group.element(u)?;
    let lower_v = group.element(v)?.bruhat_lower_set(guard)?;

    let mut cache = ElementCache::new(group.clone());
    let lower: Vec<(u32, u32, usize)> = lower_v
        .iter()
        .map(|x| {
            let id = cache.intern_nf(x.word().to_vec());
            (id, cache.inverse(id), x.length())
        })
        .collect();
    let w_id = cache.intern(&w);
    let mut seen = HashSet::from([w_id]);
    let mut stack = vec![(w_id, cache.identity())];
    let mut states = 0usize;
    let mut found = None;
    let mut exhausted = false;
    'search: while let Some((y, up)) = stack.pop() {
        states += 1;
        if states > guard {
            exhausted = true;
            break;
        }
        let ly = cache.length(y);
        for &(vp, vinv, lv) in &lower {
            if lv > ly {
                continue;
            }
            let zp = cache.mul(vinv, y);
            if cache.length(zp) + lv == ly && in_mask(cache.word(zp), mask) {
                found = Some((vp, zp, up));
                break 'search;
            }
        }
        let desc = cache.right_descents(y);
        for t in (0..d.rank() as Node).filter(|&t| desc >> t & 1 == 1) {
            let y2 = cache.right_mul(y, t);
            if !seen.insert(y2) {
                continue;
            }
            let u2 = cache.left_mul(up, t);
            let u2_el = GroupElement::from_normal_form(group, cache.word(u2).to_vec());
            if u2_el.bruhat_leq(&u_el)? {
                stack.push((y2, u2));
            }
        }
    }
    let verdict = if found.is_some() || exhausted || !minimal { Verdict::Inconclusive } else { Verdict::Noncommutative };
    let found = found.map(|(a, b, c)| [a, b, c].map(|id| d.format_word(cache.word(id))));
    Ok(Certificate {
        case: case_name(group, subset),
        diagram: d.to_spec(),
        subset: subset_names(d, subset),
        method: Method::BruhatDecomposition,
        verdict,
        evidence: Evidence::Decomposition {
            u: d.format_word(u),
            z: d.format_word(z),
            v: d.format_word(v),
            w: d.format_word(&w),
            states: states.min(guard),
            guard,
            found,
        },
    })
}

/// Evaluates the row predicate on a complete set of commutation classes of
/// `w = u w_I i`. Returns the check lines and whether all of them hold.
fn evaluate(ws: &WordSet, classes: &[CommutationClass]) -> Result<(Vec<String>, bool)> {
    let d = ws.diagram();
    let (i, k) = (ws.i, ws.k);
    let (iname, kname) = (d.name(i), d.name(k));
    let mut checks = Vec::new();
    let mut ok = true;
    let mut record = |text: String, pass: bool| {
        checks.push(format!("{text}: {}", if pass { "holds" } else { "fails" }));
        ok &= pass;
    };
    let w = ws.word();
    let given = w.iter().filter(|&&s| s == i).count();
    let counts: Vec<usize> = classes.iter().map(|c| c.count(i)).collect();
    let min = counts.iter().copied().min().unwrap_or(0);
    match ws.pattern {
        StarPattern::FirstTwo | StarPattern::FirstTwoMulti => {
            record(format!("{kname} occurs in w_I"), ws.w_i.contains(&k));
            record(format!("{kname} does not occur in u"), !ws.u.contains(&k));
            record(
                format!("w has {given} letters {iname}, the minimum over {} classes", classes.len()),
                given == min && min >= 2,
            );
            if min >= 2 {
                let minimal: Vec<&CommutationClass> = classes.iter().filter(|c| c.count(i) == min).collect();
                let mut bad = 0;
                for c in &minimal {
                    if between_counts(c, i, Pair::FirstTwo, k)?.possible > 0 {
                        bad += 1;
                    }
                }
                record(
                    format!(
                        "no {kname} can stand between the first two {iname} in the {} classes with {min} letters {iname}",
                        minimal.len()
                    ),
                    bad == 0,
                );
            }
        }
        StarPattern::LastTwoAtLeast(n) => {
            let c = counts.first().copied().unwrap_or(0);
            record(
                format!("all {} classes have {c} letters {iname}", classes.len()),
                counts.iter().all(|&x| x == c),
            );
            let pos: Vec<usize> = (0..ws.u.len()).filter(|&p| ws.u[p] == i).collect();
            record(format!("u has {} letters {iname}, one fewer than w and at least two", pos.len()), pos.len() + 1 == c && pos.len() >= 2);
            if pos.len() >= 2 && c >= 2 {
                let (a, b) = (pos[pos.len() - 2], pos[pos.len() - 1]);
                let m = ws.u[a..b].iter().filter(|&&s| s == k).count();
                let mut forced = usize::MAX;
                for cl in classes {
                    forced = forced.min(between_counts(cl, i, Pair::LastTwo, k)?.forced);
                }
                record(format!("every expression has at least {forced} letters {kname} between its last two {iname}, need {n}"), forced >= n);
                record(format!("u has {m} letters {kname} between its last two {iname}, below {n}"), m < n);
            }
        }
    }
    Ok((checks, ok))
}

fn heap_certificate(ws: &WordSet, limits: Limits) -> Result<Certificate> {
    let d = ws.diagram();
    let w = ws.word();
    let closure = braid_closure_partial(&ws.group, &w, limits)?;
    let (mut checks, ok) = evaluate(ws, &closure.classes)?;
    if !closure.complete {
        checks.push(format!("braid closure stopped after {} classes", closure.classes.len()));
    }
    let verdict = if ok && closure.complete { Verdict::Noncommutative } else { Verdict::Inconclusive };
    let method = if ws.pattern.is_star() { Method::StarPattern } else { Method::HeapExclusion };
    Ok(Certificate {
        case: ws.case.clone(),
        diagram: d.to_spec(),
        subset: subset_names(d, &ws.subset),
        method,
        verdict,
        evidence: Evidence::Heap {
            w: d.format_word(&w),
            u: d.format_word(&ws.u),
            w_i: d.format_word(&ws.w_i),
            i: d.name(ws.i).to_string(),
            k: d.name(ws.k).to_string(),
            classes: closure.classes.iter().map(|c| d.format_word(&c.canonical_word)).collect(),
            checks,
            pattern: ws.pattern.is_star().then(|| ws.pattern.to_string()),
            second: None,
        },
    })
}

/// Heap exclusion for `w = u w_I i` with `I = S \ {i}`: `k` occurs in `w_I`
/// but not in `u`, `w` has the fewest possible letters `i`, and in no
/// expression with that many can a `k` stand between the first two `i`.
/// Right descents of `u` inside `I` are first moved into `w_I`.
pub fn verify_heap_exclusion(
    group: &Arc<CoxeterGroup>,
    u: &[Node],
    w_i: &[Node],
    i: Node,
    k: Node,
    limits: Limits,
) -> Result<Certificate> {
    let subset = group.diagram().complement_of(i);
    let ws = WordSet {
        case: case_name(group, &subset),
        group: group.clone(),
        subset,
        u: u.to_vec(),
        w_i: w_i.to_vec(),
        i,
        k,
        pattern: StarPattern::FirstTwo,
    }
    .with_reduced_u()?;
    check_factorization(group, &ws.subset, &ws.u, &ws.w_i, &[i])?;
    heap_certificate(&ws, limits)
}

/// Row predicate for a word set with its own pattern.
pub fn verify_star_pattern(ws: &WordSet, limits: Limits) -> Result<Certificate> {
    check_factorization(&ws.group, &ws.subset, &ws.u, &ws.w_i, &[ws.i])?;
    heap_certificate(ws, limits)
}

/// Heap or star pattern, backed by the decomposition search for star rows,
/// rows whose heap checks fail, or always when requested. The row is
/// noncommutative when either argument succeeds.
pub fn verify_words(ws: &WordSet, options: RowOptions) -> Result<Certificate> {
    let mut cert = verify_star_pattern(ws, options.limits)?;
    let need = options.always_second || ws.pattern.is_star() || cert.verdict != Verdict::Noncommutative;
    if need {
        let mut second = verify_no_reverse_decomposition(&ws.group, &ws.subset, &ws.u, &ws.w_i, &[ws.i], options.guard)?;
        second.case = ws.case.clone();
        if second.is_noncommutative() {
            cert.verdict = Verdict::Noncommutative;
        }
        if let Evidence::Heap { second: slot, .. } = &mut cert.evidence {
            *slot = Some(Box::new(second));
        }
    }
    Ok(cert)
}

/// Instantiates and verifies a table row.
pub fn verify_table_row(row: &TableRow, params: Option<(usize, usize)>, options: RowOptions) -> Result<Certificate> {
    let ws = row.instantiate(params)?;
    if let Err(reason) = ws.check() {
        return Err(Error::MalformedRow { row: ws.case, reason });
    }
    verify_words(&ws, options)
}

fn parse_heap_words(cert: &Certificate) -> Result<Option<WordSet>> {
    let Evidence::Heap { u, w_i, i, k, pattern, .. } = &cert.evidence else { return Ok(None) };
    let (d, subset) = cert.diagram_and_subset()?;
    let group = CoxeterGroup::new(d)?;
    let d = group.diagram();
    let pattern = match pattern {
        None => StarPattern::FirstTwo,
        Some(p) => StarPattern::parse(p).ok_or_else(|| Error::MalformedWitness(format!("pattern {p}")))?,
    };
    let ws = WordSet {
        case: cert.case.clone(),
        subset,
        u: d.parse_word(u)?,
        w_i: d.parse_word(w_i)?,
        i: d.node(i)?,
        k: d.node(k)?,
        pattern,
        group: group.clone(),
    };
    Ok(Some(ws))
}

/// Recomputes a certificate's verdict from its evidence.
///
/// Heap certificates are checked from the recorded classes alone: they must
/// be expressions of `w`, contain the class of `w`, and be closed under braid
/// moves, after which the row predicate is re-evaluated on them.
pub(crate) fn recheck(cert: &Certificate) -> Result<bool> {
    match &cert.evidence {
        Evidence::Heap { classes, checks, second, w, .. } => {
            let ws = parse_heap_words(cert)?.expect("heap evidence");
            let d = ws.diagram();
            if d.format_word(&ws.word()) != *w {
                return Ok(false);
            }
            let words: Vec<Vec<Node>> = classes.iter().map(|c| d.parse_word(c)).collect::<Result<_>>()?;
            let mut all = words.clone();
            all.push(ws.word());
            let complete = is_braid_closed(&ws.group, &all)?;
            let own = CommutationClass::from_reduced(d, &ws.word());
            let contains_w = words.iter().any(|x| CommutationClass::from_reduced(d, x).canonical_word == own.canonical_word);
            let parsed: Vec<CommutationClass> = words.iter().map(|x| CommutationClass::from_reduced(d, x)).collect();
            let (recomputed, ok) = evaluate(&ws, &parsed)?;
            let heap_ok = ok && complete && contains_w;
            if heap_ok && !checks.starts_with(&recomputed) {
                return Ok(false);
            }
            let second_ok = match second {
                Some(s) => {
                    if !recheck(s)? {
                        return Ok(false);
                    }
                    s.is_noncommutative()
                }
                None => false,
            };
            let verdict = if heap_ok || second_ok { Verdict::Noncommutative } else { Verdict::Inconclusive };
            Ok(verdict == cert.verdict)
        }
        Evidence::Decomposition { u, z, v, guard, found, .. } => {
            let (d, subset) = cert.diagram_and_subset()?;
            let group = CoxeterGroup::new(d)?;
            let d = group.diagram();
            let again = verify_no_reverse_decomposition(&group, &subset, &d.parse_word(u)?, &d.parse_word(z)?, &d.parse_word(v)?, *guard)?;
            let Evidence::Decomposition { found: found2, .. } = &again.evidence else { unreachable!() };
            Ok(again.verdict == cert.verdict && found2 == found)
        }
        Evidence::Commutator { .. } => super::scan::recheck_commutator(cert),
        Evidence::Path { .. } => super::scan::recheck_path(cert),
        Evidence::Automorphism { .. } => super::symmetry::recheck_automorphism(cert),
        Evidence::Lift { .. } => super::lift::recheck_lift(cert),
    }
}
