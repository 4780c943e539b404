//! Shared test oracles, independent of the library's exact arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;

use parahecke::group::{Bound, CoxeterGroup};
use parahecke::{Bond, CoxeterDiagram, Node};

/// Finite diagrams of order at most 2000 used across the suites.
pub const SMALL_FINITE: &[&str] = &[
    "A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4", "D5", "F4", "G2", "H3", "I2(5)", "I2(7)", "I2(8)", "A2 x A1",
    "A1 x A1 x A1", "B2 x A2",
];

/// A finite Coxeter group realized by its action on a generic vector of the
/// reflection representation in floating point, enumerated by BFS over the
/// Cayley graph. Elements are indices; `left[s][g]` is the index of `s g`.
pub struct CayleyModel {
    pub left: Vec<Vec<usize>>,
    /// A word for each element, `g = word[0] word[1] ...`.
    pub words: Vec<Vec<Node>>,
}

fn key(v: &[f64]) -> Vec<i64> {
    v.iter().map(|x| (x * 1e6).round() as i64).collect()
}

impl CayleyModel {
    pub fn new(d: &CoxeterDiagram, max_order: usize) -> CayleyModel {
        let n = d.rank();
        let gram: Vec<Vec<f64>> = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        if s == t {
                            return 1.0;
                        }
                        match d.bond(s as Node, t as Node) {
                            Bond::Finite(m) => -(PI / m as f64).cos(),
                            Bond::Infinite => -1.0,
                        }
                    })
                    .collect()
            })
            .collect();
        let reflect = |s: usize, v: &[f64]| -> Vec<f64> {
            let b: f64 = (0..n).map(|t| gram[s][t] * v[t]).sum();
            let mut out = v.to_vec();
            out[s] -= 2.0 * b;
            out
        };
        let start: Vec<f64> = (0..n).map(|k| 1.0 + 0.618_033_988_7 * (k as f64 + 1.0).sqrt()).collect();
        let mut points = vec![start.clone()];
        let mut words: Vec<Vec<Node>> = vec![vec![]];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(key(&start), 0)]);
        let mut left: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut i = 0;
        while i < points.len() {
            for s in 0..n {
                let p = reflect(s, &points[i]);
                let k = key(&p);
                let j = match index.get(&k) {
                    Some(&j) => j,
                    None => {
                        let j = points.len();
                        assert!(j < max_order, "model exceeds {max_order} elements");
                        index.insert(k, j);
                        points.push(p);
                        let mut w = vec![s as Node];
                        w.extend_from_slice(&words[i]);
                        words.push(w);
                        j
                    }
                };
                left[s].push(j);
            }
            i += 1;
        }
        CayleyModel { left, words }
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    /// The element spelled by `word`.
    pub fn eval(&self, word: &[Node]) -> usize {
        word.iter().rev().fold(0, |g, &s| self.left[s as usize][g])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[a].iter().rev().fold(b, |g, &s| self.left[s as usize][g])
    }
}

/// Full multiplication table of the normal-form arithmetic against the
/// Cayley model.
pub fn check_word_problem(spec: &str) -> Result<(), String> {
    let g = CoxeterGroup::from_spec(spec).map_err(|e| e.to_string())?;
    let model = CayleyModel::new(g.diagram(), 2000);
    let all: BTreeSet<Node> = g.diagram().all_nodes().into_iter().collect();
    let elems = g.enumerate(&all, Bound::All).map_err(|e| e.to_string())?;
    if elems.len() != model.order() {
        return Err(format!("{spec}: order {} against {}", elems.len(), model.order()));
    }
    let to_model: Vec<usize> = elems.iter().map(|e| model.eval(e.word())).collect();
    if to_model.iter().collect::<BTreeSet<_>>().len() != elems.len() {
        return Err(format!("{spec}: normal forms collide in the model"));
    }
    let index: HashMap<&[Node], usize> = elems.iter().enumerate().map(|(i, e)| (e.word(), i)).collect();
    for (a, x) in elems.iter().enumerate() {
        for (b, y) in elems.iter().enumerate() {
            let p = x.mul(y).map_err(|e| e.to_string())?;
            if to_model[index[p.word()]] != model.mul(to_model[a], to_model[b]) {
                return Err(format!("{spec}: {} * {}", x.format(), y.format()));
            }
        }
    }
    Ok(())
}

/// Random diagram of rank 2..=5 with bonds in {2, 3, 4, 5}, drawn from `seed`.
pub fn random_group(seed: &[u8]) -> std::sync::Arc<CoxeterGroup> {
    let n = 2 + seed[0] as usize % 4;
    let mut bonds = Vec::new();
    let mut k = 1;
    for a in 1..=n as u8 {
        for b in a + 1..=n as u8 {
            let m = 2 + seed[k % seed.len()] as u32 % 4;
            k += 1;
            if m > 2 {
                bonds.push((a, b, Bond::Finite(m)));
            }
        }
    }
    CoxeterGroup::new(CoxeterDiagram::from_bonds(n, &bonds).unwrap()).unwrap()
}

/// Extends the empty word by the given letters, skipping any that would
/// make it non-reduced, up to `max_len` letters.
pub fn random_reduced_word(g: &CoxeterGroup, letters: &[u8], max_len: usize) -> Vec<Node> {
    let n = g.rank() as u8;
    let mut w: Vec<Node> = Vec::new();
    for &x in letters {
        if w.len() == max_len {
            break;
        }
        let s = x % n;
        if g.right_descent_mask(&w) >> s & 1 == 0 {
            w.push(s);
        }
    }
    w
}

/// Braid closure against brute-force word closure, and between counts
/// against the extremes over the linear extensions of each class.
pub fn check_heap_case(g: &CoxeterGroup, word: &[Node]) -> Result<(), String> {
    use parahecke::heaps::{between_counts, braid_closure, closure_oracle, commutation_oracle, Limits, Pair};
    let limits = Limits::default();
    let err = |e: parahecke::Error| e.to_string();
    let d = g.diagram();
    let classes = braid_closure(g, word, limits).map_err(err)?;
    let words = closure_oracle(g, word, limits).map_err(err)?;
    let mut union = BTreeSet::new();
    for c in &classes {
        let ext = commutation_oracle(d, &c.canonical_word, limits).map_err(err)?;
        if !ext.contains(&c.canonical_word) || ext.iter().any(|w| union.contains(w)) {
            return Err(format!("{}: classes overlap", d.format_word(word)));
        }
        union.extend(ext.iter().cloned());
        for anchor in d.all_nodes() {
            if c.count(anchor) < 2 {
                continue;
            }
            for pair in [Pair::FirstTwo, Pair::LastTwo] {
                for k in d.all_nodes().into_iter().filter(|&k| k != anchor) {
                    let b = between_counts(c, anchor, pair, k).map_err(err)?;
                    let seen: Vec<usize> = ext.iter().map(|w| between_in_word(w, anchor, pair, k)).collect();
                    let (lo, hi) = (*seen.iter().min().unwrap(), *seen.iter().max().unwrap());
                    if (lo, hi) != (b.forced, b.possible) {
                        return Err(format!(
                            "{}: anchor {anchor} {pair:?} k {k}: counts {:?} against {lo}..{hi}",
                            d.format_word(&c.canonical_word),
                            b
                        ));
                    }
                }
            }
        }
    }
    if union != words {
        return Err(format!("{}: {} words by classes, {} by brute force", d.format_word(word), union.len(), words.len()));
    }
    Ok(())
}

fn between_in_word(w: &[Node], anchor: Node, pair: parahecke::heaps::Pair, k: Node) -> usize {
    let occ: Vec<usize> = (0..w.len()).filter(|&p| w[p] == anchor).collect();
    let (a, b) = match pair {
        parahecke::heaps::Pair::FirstTwo => (occ[0], occ[1]),
        parahecke::heaps::Pair::LastTwo => (occ[occ.len() - 2], occ[occ.len() - 1]),
    };
    w[a + 1..b].iter().filter(|&&x| x == k).count()
}

/// Counts of what an identity sweep covered.
#[derive(Debug, Default)]
pub struct IdentityStats {
    pub subsets: usize,
    pub representatives: usize,
    pub pairs: usize,
    pub double_sums: usize,
}

/// Pairs used for the structure-constant identities: all of them when
/// there are at most `cap`, otherwise an evenly spaced selection.
fn pair_sample(n: usize, cap: usize) -> Vec<(usize, usize)> {
    let total = n * n;
    let step = total.div_ceil(cap).max(1);
    (0..total).step_by(step).map(|k| (k / n, k % n)).collect()
}

/// The Hecke identities on every spherical subset of a diagram, over the
/// minimal double coset representatives up to `bound` (all of them when
/// `None`):
/// absorption of generators by `1_I` and `1_I^2 = W_I(q) 1_I`; exact
/// divisibility by the stabilizer Poincaré polynomial; the sandwich and sum
/// formulas for the parabolic basis; `1_I T_z 1_I = q_x q_y 1_I T_w 1_I`
/// when `|W_I| <= 200`;
/// shifted nonnegativity and inversion symmetry of the structure constants,
/// and their agreement with the coset double sum at every `z`.
pub fn check_identities(spec: &str, bound: Option<usize>, pair_cap: usize, sum_cap: usize) -> Result<IdentityStats, String> {
    use parahecke::hecke::{structure_constants_by_double_sum, HeckeAlgebra, ParabolicEngine, ParamPolynomial};
    let err = |e: parahecke::Error| format!("{spec}: {e}");
    let algebra = HeckeAlgebra::from_spec(spec).map_err(err)?;
    let g = algebra.group().clone();
    let d = g.diagram().clone();
    let b = bound.map_or(Bound::All, Bound::Length);
    let mut stats = IdentityStats::default();
    for mask in 0u32..1 << d.rank() {
        let subset: BTreeSet<Node> = d.all_nodes().into_iter().filter(|s| mask >> s & 1 == 1).collect();
        if !d.is_spherical(&subset) {
            continue;
        }
        stats.subsets += 1;
        let case = format!("{spec} I={:?}", subset.iter().map(|&s| d.name(s)).collect::<Vec<_>>());
        let wi = algebra.poincare_polynomial(&subset).map_err(err)?;
        let one = algebra.one_i(&subset).map_err(err)?;
        for &s in &subset {
            let ts = algebra.basis(&g.generator(s).map_err(err)?);
            let expect = one.scale(&algebra.q(s));
            if one.product(&ts).map_err(err)? != expect || ts.product(&one).map_err(err)? != expect {
                return Err(format!("{case}: 1_I does not absorb T_{s}"));
            }
        }
        let square = if one.len() <= 200 { one.product(&one) } else { one.mul_one_i_right(&subset) };
        if square.map_err(err)? != one.scale(&wi) {
            return Err(format!("{case}: 1_I^2 != W_I(q) 1_I"));
        }

        let records = g.double_cosets(&subset, b).map_err(err)?;
        let mut engine = ParabolicEngine::new(algebra.clone(), &subset).map_err(err)?;
        let mut cosets = Vec::new();
        for r in &records {
            let w = &r.min_rep;
            let wk = algebra.poincare_polynomial(&r.stabilizer_subset).map_err(err)?;
            let ratio = wi.div_exact(&wk).map_err(|_| format!("{case}: W_K does not divide W_I at {}", w.format()))?;
            if &ratio * &wk != wi || engine.stabilizer_poincare_of(w).map_err(err)? != wk {
                return Err(format!("{case}: stabilizer polynomial at {}", w.format()));
            }
            let sandwich = algebra.parabolic_basis_element(&subset, w).map_err(err)?;
            if sandwich != algebra.parabolic_basis_element_by_sum(&subset, w).map_err(err)? {
                return Err(format!("{case}: two formulas for T_w^I differ at {}", w.format()));
            }
            let coset = g.double_coset_elements(w, &subset).map_err(err)?;
            if one.len() <= 200 {
                let tw = algebra.basis(w).mul_one_i_left(&subset).map_err(err)?.mul_one_i_right(&subset).map_err(err)?;
                // z = x w y with x, y in W_I: the longest element of the coset and one from the middle
                for z in [coset.last(), coset.get(coset.len() / 2)].into_iter().flatten() {
                    let (_, stripped) = g.strip_to_min_rep(z, &subset);
                    let factor =
                        stripped.iter().fold(ParamPolynomial::one(algebra.classes()), |p, &s| &p * &algebra.q(s));
                    let tz = algebra.basis(z).mul_one_i_left(&subset).map_err(err)?.mul_one_i_right(&subset).map_err(err)?;
                    if tz != tw.scale(&factor) {
                        return Err(format!("{case}: 1_I T_z 1_I at z = {}", z.format()));
                    }
                }
            }
            cosets.push(coset);
        }
        stats.representatives += records.len();

        let reps: Vec<_> = records.iter().map(|r| r.min_rep.clone()).collect();
        let pairs = pair_sample(reps.len(), pair_cap);
        let sum_step = pairs.len().div_ceil(sum_cap.max(1)).max(1);
        for (n, &(a, bb)) in pairs.iter().enumerate() {
            let (u, v) = (&reps[a], &reps[bb]);
            let c = engine.structure_constants(u, v).map_err(err)?;
            for (w, p) in &c {
                if !p.shifted().has_nonnegative_coefficients() {
                    return Err(format!("{case}: c({}, {}; {}) = {p} is not nonnegative in q - 1", u.format(), v.format(), w.format()));
                }
            }
            let swapped = engine.structure_constants(&v.inverse(), &u.inverse()).map_err(err)?;
            let inverted: std::collections::BTreeMap<_, _> = c.iter().map(|(w, p)| (w.inverse(), p.clone())).collect();
            if swapped != inverted {
                return Err(format!("{case}: inversion symmetry fails at ({}, {})", u.format(), v.format()));
            }
            stats.pairs += 1;
            if n % sum_step != 0 || cosets[a].len() * cosets[bb].len() > 256 {
                continue;
            }
            let du = algebra.sum_of(&cosets[a]);
            let dv = algebra.sum_of(&cosets[bb]);
            let full = du.product(&dv).map_err(err)?.scale(&wi);
            let mut covered = 0;
            for (w, p) in &c {
                for z in g.double_coset_elements(w, &subset).map_err(err)? {
                    covered += 1;
                    if &full.coefficient(&z) != p {
                        return Err(format!("{case}: double sum differs at z = {} for ({}, {})", z.format(), u.format(), v.format()));
                    }
                }
            }
            if let Some((w, p)) = c.iter().next() {
                if &structure_constants_by_double_sum(&algebra, &subset, u, v, w).map_err(err)? != p {
                    return Err(format!("{case}: double-sum oracle at w = {}", w.format()));
                }
            }
            if covered != full.len() {
                return Err(format!("{case}: product support leaves the listed cosets for ({}, {})", u.format(), v.format()));
            }
            stats.double_sums += 1;
        }
    }
    Ok(stats)
}
