//! Structure constants of `H^I = 1_I H 1_I` in the basis `T_w^I`.
//!
//! The product is computed inside the module `H 1_I`, which has basis
//! `e_x = T_x 1_I` for `x` in `W^I` (no right descent in `I`). With
//! `Y = sum e_x` over the `x in W^I` lying in `W_I v W_I` we have
//! `T_u^I T_v^I = W_I^3 / W_{J_u} * 1_I T_u Y`, and `T_s` acts on `e_x` by
//!
//! ```text
//! sx > x, sx in W^I:      e_{sx}
//! sx > x, sx not in W^I:  q_s e_x
//! sx < x:                 q_s e_{sx} + (q_s - 1) e_x
//! ```
//!
//! Writing `T_u Y = sum a_x e_x` and `x = a w` with `w` the minimal double
//! coset representative, the coefficient of `T_w^I` is
//! `W_I^2 W_{J_w} / W_{J_u} * sum a_x q_a`, where `J_w = I ∩ wIw^-1`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::{HeckeAlgebra, ParamPolynomial};
use crate::diagram::Node;
use crate::error::{Error, Result};
use crate::group::{mask_of, nodes_of, ElementCache, GroupElement, NodeMask};

/// Reusable state for repeated structure-constant computations with a fixed
/// `I`. Not shared between threads; build one per worker.
pub struct ParabolicEngine {
    algebra: Arc<HeckeAlgebra>,
    subset: BTreeSet<Node>,
    mask: NodeMask,
    wi: ParamPolynomial,
    cache: ElementCache,
    strip_memo: HashMap<u32, (u32, Vec<u32>)>,
    stab_poincare: HashMap<u32, ParamPolynomial>,
    poincare_by_mask: HashMap<NodeMask, ParamPolynomial>,
}

impl ParabolicEngine {
    pub fn new(algebra: Arc<HeckeAlgebra>, subset: &BTreeSet<Node>) -> Result<ParabolicEngine> {
        let wi = algebra.poincare_polynomial(subset)?;
        let cache = ElementCache::new(algebra.group().clone());
        let mask = mask_of(subset);
        Ok(ParabolicEngine {
            algebra,
            subset: subset.clone(),
            mask,
            wi: wi.clone(),
            cache,
            strip_memo: HashMap::new(),
            stab_poincare: HashMap::new(),
            poincare_by_mask: HashMap::from([(mask, wi)]),
        })
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.algebra
    }

    pub fn subset(&self) -> &BTreeSet<Node> {
        &self.subset
    }

    /// `W_I(q)`.
    pub fn subset_poincare(&self) -> &ParamPolynomial {
        &self.wi
    }

    fn poincare_of(&mut self, mask: NodeMask) -> ParamPolynomial {
        if let Some(p) = self.poincare_by_mask.get(&mask) {
            return p.clone();
        }
        let p = self.algebra.poincare_polynomial(&nodes_of(mask)).expect("subset of a spherical set");
        self.poincare_by_mask.insert(mask, p.clone());
        p
    }

    fn intern(&mut self, w: &GroupElement) -> Result<u32> {
        if !w.is_i_reduced(self.mask) {
            return Err(Error::NotIReduced(w.format()));
        }
        Ok(self.cache.intern_nf(w.word().to_vec()))
    }

    /// `W_{I ∩ wIw^-1}(q)` for an `I`-reduced `w`.
    fn stabilizer_poincare(&mut self, w: u32) -> ParamPolynomial {
        if let Some(p) = self.stab_poincare.get(&w) {
            return p.clone();
        }
        let winv = self.cache.inverse(w);
        let mut k: NodeMask = 0;
        for s in self.subset.clone() {
            let c = self.cache.left_mul(w, s);
            let c = self.cache.mul(winv, c);
            let word = self.cache.word(c);
            if word.len() == 1 && self.mask >> word[0] & 1 == 1 {
                k |= 1 << s;
            }
        }
        let p = self.poincare_of(k);
        self.stab_poincare.insert(w, p.clone());
        p
    }

    /// Public form of the stabilizer Poincaré polynomial.
    pub fn stabilizer_poincare_of(&mut self, w: &GroupElement) -> Result<ParamPolynomial> {
        let id = self.intern(w)?;
        Ok(self.stabilizer_poincare(id))
    }

    /// `{x in W^I : x in W_I v W_I}` by BFS under left multiplication by `I`.
    fn left_orbit(&mut self, v: u32) -> Vec<u32> {
        let mut out = vec![v];
        let mut seen: HashSet<u32> = HashSet::from([v]);
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for s in self.subset.clone() {
                let y = self.cache.left_mul(x, s);
                if self.cache.right_descents(y) & self.mask == 0 && seen.insert(y) {
                    out.push(y);
                }
            }
        }
        out
    }

    /// Minimal double coset representative of `x in W^I`, with the exponent
    /// vector of `q_x / q_w`.
    fn strip(&mut self, x: u32) -> (u32, Vec<u32>) {
        if let Some(r) = self.strip_memo.get(&x) {
            return r.clone();
        }
        let class_of = self.algebra.class_of().to_vec();
        let mut exps = vec![0u32; self.algebra.classes()];
        let mut cur = x;
        loop {
            let l = self.cache.left_descents(cur) & self.mask;
            if l == 0 {
                break;
            }
            let s = l.trailing_zeros() as Node;
            exps[class_of[s as usize]] += 1;
            cur = self.cache.left_mul(cur, s);
        }
        let r = (cur, exps);
        self.strip_memo.insert(x, r.clone());
        r
    }

    /// The coefficients `c^I_{u,v;w}` of `T_u^I T_v^I`, keyed by `w`.
    pub fn structure_constants(
        &mut self,
        u: &GroupElement,
        v: &GroupElement,
    ) -> Result<BTreeMap<GroupElement, ParamPolynomial>> {
        let uid = self.intern(u)?;
        let vid = self.intern(v)?;
        let vars = self.algebra.classes();
        let class_of = self.algebra.class_of().to_vec();
        let one = ParamPolynomial::one(vars);
        let mut z: HashMap<u32, ParamPolynomial> = self.left_orbit(vid).into_iter().map(|x| (x, one.clone())).collect();
        for &s in u.word().iter().rev() {
            let c = class_of[s as usize];
            let mut next: HashMap<u32, ParamPolynomial> = HashMap::with_capacity(z.len());
            for (x, a) in z {
                let sx = self.cache.left_mul(x, s);
                if self.cache.length(sx) > self.cache.length(x) {
                    if self.cache.right_descents(sx) & self.mask == 0 {
                        accumulate(&mut next, sx, a);
                    } else {
                        accumulate(&mut next, x, a.times_var(c));
                    }
                } else {
                    let qa = a.times_var(c);
                    accumulate(&mut next, x, &qa - &a);
                    accumulate(&mut next, sx, qa);
                }
            }
            z = next;
        }
        let mut grouped: HashMap<u32, ParamPolynomial> = HashMap::new();
        for (x, a) in z {
            let (w, e) = self.strip(x);
            accumulate(&mut grouped, w, a.shift(&e));
        }
        let ju = self.stabilizer_poincare(uid);
        let prefactor = &self.wi * &self.wi.div_exact(&ju)?;
        let mut out = BTreeMap::new();
        for (w, p) in grouped {
            if p.is_zero() {
                continue;
            }
            let jw = self.stabilizer_poincare(w);
            let c = &(&prefactor * &jw) * &p;
            let elem = GroupElement::from_normal_form(self.algebra.group(), self.cache.word(w).to_vec());
            out.insert(elem, c);
        }
        Ok(out)
    }
}

fn accumulate(map: &mut HashMap<u32, ParamPolynomial>, key: u32, p: ParamPolynomial) {
    if p.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(p);
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(&p);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// `c^I_{u,v;w} = W_I(q) sum_{x in W_I u W_I, y in W_I v W_I} c_{x,y;z}` for a
/// chosen `z` in `W_I w W_I`. Used as an oracle; quadratic in the coset sizes.
pub fn structure_constants_by_double_sum(
    algebra: &Arc<HeckeAlgebra>,
    subset: &BTreeSet<Node>,
    u: &GroupElement,
    v: &GroupElement,
    z: &GroupElement,
) -> Result<ParamPolynomial> {
    let mask = mask_of(subset);
    for x in [u, v] {
        if !x.is_i_reduced(mask) {
            return Err(Error::NotIReduced(x.format()));
        }
    }
    let g = algebra.group();
    let du = algebra.sum_of(&g.double_coset_elements(u, subset)?);
    let dv = algebra.sum_of(&g.double_coset_elements(v, subset)?);
    let prod = du.product(&dv)?;
    Ok(&algebra.poincare_polynomial(subset)? * &prod.coefficient(z))
}

/// One-shot form of [`ParabolicEngine::structure_constants`].
pub fn parabolic_structure_constants(
    algebra: &Arc<HeckeAlgebra>,
    subset: &BTreeSet<Node>,
    u: &GroupElement,
    v: &GroupElement,
) -> Result<BTreeMap<GroupElement, ParamPolynomial>> {
    ParabolicEngine::new(algebra.clone(), subset)?.structure_constants(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Bound;

    fn check_against_oracle(spec: &str, subset: &str) {
        let a = HeckeAlgebra::from_spec(spec).unwrap();
        let g = a.group().clone();
        let i = a.diagram().parse_subset(subset).unwrap();
        let reps: Vec<GroupElement> =
            g.double_cosets(&i, Bound::All).unwrap().into_iter().map(|r| r.min_rep).collect();
        let mut engine = ParabolicEngine::new(a.clone(), &i).unwrap();
        for u in &reps {
            for v in &reps {
                let fast = engine.structure_constants(u, v).unwrap();
                for w in &reps {
                    let slow = structure_constants_by_double_sum(&a, &i, u, v, w).unwrap();
                    let got = fast.get(w).cloned().unwrap_or_else(|| ParamPolynomial::zero(a.classes()));
                    assert_eq!(got, slow, "{spec} I={subset} u={u} v={v} w={w}");
                }
            }
        }
    }

    #[test]
    fn engine_matches_double_sum() {
        check_against_oracle("A2", "2");
        check_against_oracle("A3", "1,3");
        check_against_oracle("B3", "2,3");
        check_against_oracle("B3", "1");
        check_against_oracle("I2(5)", "1");
    }

    #[test]
    fn identity_scales_by_square() {
        let a = HeckeAlgebra::from_spec("A2").unwrap();
        let g = a.group();
        let i = a.diagram().parse_subset("2").unwrap();
        let v = g.parse_element("1").unwrap();
        let c = parabolic_structure_constants(&a, &i, &g.identity(), &v).unwrap();
        let wi = a.poincare_polynomial(&i).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&v], &wi * &wi);
    }

    #[test]
    fn a2_product_of_nontrivial_rep() {
        // At q = 1 the sum over W \ W_I squares to 4 W_I + 2 (W \ W_I) in S_3.
        let a = HeckeAlgebra::from_spec("A2").unwrap();
        let g = a.group();
        let i = a.diagram().parse_subset("2").unwrap();
        let v = g.parse_element("1").unwrap();
        let c = parabolic_structure_constants(&a, &i, &v, &v).unwrap();
        let q = a.q(0);
        let wi = &ParamPolynomial::one(1) + &q;
        assert_eq!(c[&g.identity()], &(&(&wi * &wi) * &wi) * &q);
        assert_eq!(c[&g.identity()].eval_uniform(1), num_rational::BigRational::from_integer(8.into()));
        assert_eq!(c[&v].eval_uniform(1), num_rational::BigRational::from_integer(4.into()));
    }

    #[test]
    fn rejects_non_reduced_inputs() {
        let a = HeckeAlgebra::from_spec("A2").unwrap();
        let g = a.group();
        let i = a.diagram().parse_subset("2").unwrap();
        let bad = g.parse_element("12").unwrap();
        assert!(matches!(
            parabolic_structure_constants(&a, &i, &bad, &g.identity()),
            Err(Error::NotIReduced(_))
        ));
    }
}
