//! Generic multi-parameter Hecke algebras over `Z[q_c]`, one variable per
//! conjugacy class of generators.
//!
//! Elements are finite sums `sum p_w T_w`. Products peel the right factor
//! letter by letter with
//!
//! ```text
//! T_w T_s = T_{ws}                       if l(ws) > l(w)
//!         = q_s T_{ws} + (q_s - 1) T_w   otherwise
//! ```
//!
//! The parabolic structure constants are computed by [`ParabolicEngine`].

mod parabolic;
mod poly;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

pub use parabolic::{parabolic_structure_constants, structure_constants_by_double_sum, ParabolicEngine};
pub use poly::{class_names, ParamPolynomial};

use crate::diagram::{CoxeterDiagram, Node};
use crate::error::{Error, Result};
use crate::group::{mask_of, poincare_coefficients, Bound, CoxeterGroup, GroupElement};

/// The generic Hecke algebra of a Coxeter group.
#[derive(Debug)]
pub struct HeckeAlgebra {
    group: Arc<CoxeterGroup>,
    class_of: Vec<usize>,
    classes: usize,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<CoxeterGroup>) -> Arc<HeckeAlgebra> {
        let parts = group.diagram().conjugacy_classes();
        let mut class_of = vec![0; group.rank()];
        for (c, part) in parts.iter().enumerate() {
            for &s in part {
                class_of[s as usize] = c;
            }
        }
        Arc::new(HeckeAlgebra { group, class_of, classes: parts.len() })
    }

    pub fn from_spec(spec: &str) -> Result<Arc<HeckeAlgebra>> {
        Ok(Self::new(CoxeterGroup::from_spec(spec)?))
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        self.group.diagram()
    }

    /// Class index of each generator.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn q(&self, s: Node) -> ParamPolynomial {
        ParamPolynomial::var(self.classes, self.class_of[s as usize])
    }

    /// Exponent vector of `q_w` for a reduced word.
    pub fn q_exponents(&self, word: &[Node]) -> Vec<u32> {
        let mut e = vec![0; self.classes];
        for &s in word {
            e[self.class_of[s as usize]] += 1;
        }
        e
    }

    pub fn q_of(&self, w: &GroupElement) -> ParamPolynomial {
        ParamPolynomial::monomial(self.q_exponents(w.word()), 1)
    }

    /// `W_J(q) = sum_{w in W_J} q_w`.
    pub fn poincare_polynomial(&self, subset: &BTreeSet<Node>) -> Result<ParamPolynomial> {
        let coeffs = poincare_coefficients(&self.group, subset, &self.class_of, self.classes)?;
        Ok(ParamPolynomial::from_terms(self.classes, coeffs.into_iter().map(|(e, c)| (e, c.into()))))
    }

    pub fn zero(self: &Arc<Self>) -> HeckeElement {
        HeckeElement { algebra: self.clone(), terms: BTreeMap::new() }
    }

    /// The basis element `T_w`.
    pub fn basis(self: &Arc<Self>, w: &GroupElement) -> HeckeElement {
        let mut x = self.zero();
        x.terms.insert(w.clone(), ParamPolynomial::one(self.classes));
        x
    }

    /// `sum_{z in X} T_z` for a set of distinct elements.
    pub fn sum_of(self: &Arc<Self>, elements: &[GroupElement]) -> HeckeElement {
        let one = ParamPolynomial::one(self.classes);
        HeckeElement { algebra: self.clone(), terms: elements.iter().map(|w| (w.clone(), one.clone())).collect() }
    }

    /// `1_I = sum_{w in W_I} T_w`.
    pub fn one_i(self: &Arc<Self>, subset: &BTreeSet<Node>) -> Result<HeckeElement> {
        Ok(self.sum_of(&self.group.enumerate(subset, Bound::All)?))
    }

    fn check_i_reduced(&self, w: &GroupElement, subset: &BTreeSet<Node>) -> Result<()> {
        if !w.is_i_reduced(mask_of(subset)) {
            return Err(Error::NotIReduced(w.format()));
        }
        Ok(())
    }

    /// `T_w^I = W_I(q) / W_{I ∩ wIw^-1}(q) * 1_I T_w 1_I`, by exact division.
    pub fn parabolic_basis_element(self: &Arc<Self>, subset: &BTreeSet<Node>, w: &GroupElement) -> Result<HeckeElement> {
        self.check_i_reduced(w, subset)?;
        let wi = self.poincare_polynomial(subset)?;
        let k = self.group.stabilizer_subset(w, subset);
        let wk = self.poincare_polynomial(&k)?;
        let factor = wi.div_exact(&wk)?;
        let sandwich = self.basis(w).mul_one_i_left(subset)?.mul_one_i_right(subset)?;
        Ok(sandwich.scale(&factor))
    }

    /// `W_I(q) * sum_{z in W_I w W_I} T_z`.
    pub fn parabolic_basis_element_by_sum(
        self: &Arc<Self>,
        subset: &BTreeSet<Node>,
        w: &GroupElement,
    ) -> Result<HeckeElement> {
        self.check_i_reduced(w, subset)?;
        let wi = self.poincare_polynomial(subset)?;
        let coset = self.group.double_coset_elements(w, subset)?;
        Ok(self.sum_of(&coset).scale(&wi))
    }

    pub fn format_poly(&self, p: &ParamPolynomial) -> String {
        p.to_string()
    }
}

/// Free-standing form of [`HeckeAlgebra::poincare_polynomial`].
pub fn poincare_polynomial(d: &CoxeterDiagram, subset: &BTreeSet<Node>) -> Result<ParamPolynomial> {
    HeckeAlgebra::new(CoxeterGroup::new(d.clone())?).poincare_polynomial(subset)
}

/// A finite sum `sum p_w T_w` with no zero coefficient stored.
#[derive(Clone)]
pub struct HeckeElement {
    algebra: Arc<HeckeAlgebra>,
    terms: BTreeMap<GroupElement, ParamPolynomial>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for HeckeElement {}

impl HeckeElement {
    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, ParamPolynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &GroupElement) -> ParamPolynomial {
        self.terms.get(w).cloned().unwrap_or_else(|| ParamPolynomial::zero(self.algebra.classes))
    }

    fn add_term(&mut self, w: GroupElement, p: &ParamPolynomial) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(p.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(p);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &HeckeElement) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.diagram() == other.algebra.diagram() {
            Ok(())
        } else {
            Err(Error::DiagramMismatch)
        }
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(w.clone(), p);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ParamPolynomial) -> HeckeElement {
        let mut out = self.algebra.zero();
        for (w, p) in &self.terms {
            let v = p * c;
            if !v.is_zero() {
                out.terms.insert(w.clone(), v);
            }
        }
        out
    }

    /// `self * T_s`.
    pub fn mul_gen_right(&self, s: Node) -> HeckeElement {
        let q = self.algebra.q(s);
        let mut out = self.algebra.zero();
        for (w, p) in &self.terms {
            let ws = w.mul_gen_right(s);
            if ws.length() > w.length() {
                out.add_term(ws, p);
            } else {
                let qp = p * &q;
                out.add_term(ws, &qp);
                out.add_term(w.clone(), &(&qp - p));
            }
        }
        out
    }

    /// `T_s * self`.
    pub fn mul_gen_left(&self, s: Node) -> HeckeElement {
        let q = self.algebra.q(s);
        let mut out = self.algebra.zero();
        for (w, p) in &self.terms {
            let sw = w.mul_gen_left(s);
            if sw.length() > w.length() {
                out.add_term(sw, p);
            } else {
                let qp = p * &q;
                out.add_term(sw, &qp);
                out.add_term(w.clone(), &(&qp - p));
            }
        }
        out
    }

    pub fn mul_basis_right(&self, w: &GroupElement) -> HeckeElement {
        w.word().iter().fold(self.clone(), |acc, &s| acc.mul_gen_right(s))
    }

    /// Bilinear product, peeling each right-hand basis element letter by letter.
    pub fn product(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.check_same(other)?;
        let mut out = self.algebra.zero();
        for (v, r) in &other.terms {
            for (w, p) in &self.mul_basis_right(v).terms {
                out.add_term(w.clone(), &(p * r));
            }
        }
        Ok(out)
    }

    /// `self * 1_I`, sharing work along normal-form prefixes of `W_I`.
    pub fn mul_one_i_right(&self, subset: &BTreeSet<Node>) -> Result<HeckeElement> {
        let elems = self.algebra.group.enumerate(subset, Bound::All)?;
        let mut partial: HashMap<Vec<Node>, HeckeElement> = HashMap::new();
        let mut out = self.algebra.zero();
        for y in &elems {
            let word = y.word();
            let cur = match word.split_last() {
                None => self.clone(),
                Some((&s, prefix)) => partial[prefix].mul_gen_right(s),
            };
            for (w, p) in &cur.terms {
                out.add_term(w.clone(), p);
            }
            partial.insert(word.to_vec(), cur);
        }
        Ok(out)
    }

    /// `1_I * self`.
    pub fn mul_one_i_left(&self, subset: &BTreeSet<Node>) -> Result<HeckeElement> {
        let elems = self.algebra.group.enumerate(subset, Bound::All)?;
        let mut partial: HashMap<Vec<Node>, HeckeElement> = HashMap::new();
        let mut out = self.algebra.zero();
        for y in &elems {
            let word = y.word();
            let cur = match word.split_first() {
                None => self.clone(),
                Some((&s, rest)) => partial[rest].mul_gen_left(s),
            };
            for (w, p) in &cur.terms {
                out.add_term(w.clone(), p);
            }
            partial.insert(word.to_vec(), cur);
        }
        Ok(out)
    }

    /// Exact evaluation at the given class values.
    pub fn specialize(&self, values: &[BigRational]) -> BTreeMap<GroupElement, BigRational> {
        self.terms
            .iter()
            .map(|(w, p)| (w.clone(), p.eval(values)))
            .filter(|(_, v)| *v != BigRational::from_integer(0.into()))
            .collect()
    }
}

/// Free-standing product `x * y`.
pub fn hecke_product(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    x.product(y)
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, p)| format!("({p})*T[{w}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(spec: &str) -> Arc<HeckeAlgebra> {
        HeckeAlgebra::from_spec(spec).unwrap()
    }

    fn subset(a: &HeckeAlgebra, text: &str) -> BTreeSet<Node> {
        a.diagram().parse_subset(text).unwrap()
    }

    #[test]
    fn poincare_polynomials() {
        for (spec, want) in [
            ("A1", "1 + q"),
            ("A2", "1 + 2*q + 2*q^2 + q^3"),
            ("B2", "1 + q + q' + 2*q*q' + q^2*q' + q*q'^2 + q^2*q'^2"),
        ] {
            let a = alg(spec);
            let all = a.diagram().all_nodes().into_iter().collect();
            assert_eq!(a.poincare_polynomial(&all).unwrap().to_string(), want, "{spec}");
        }
        let a = alg("~A2");
        let all = a.diagram().all_nodes().into_iter().collect();
        assert_eq!(a.poincare_polynomial(&all), Err(Error::NonSpherical));
    }

    #[test]
    fn quadratic_and_braid_cases() {
        let a = alg("A2");
        let g = a.group();
        let s = g.parse_element("1").unwrap();
        let t = g.parse_element("2").unwrap();
        let ss = a.basis(&s).product(&a.basis(&s)).unwrap();
        let q = a.q(0);
        assert_eq!(ss.coefficient(&g.identity()), q);
        assert_eq!(ss.coefficient(&s), &q - &ParamPolynomial::one(1));
        let st = a.basis(&s).product(&a.basis(&t)).unwrap();
        assert_eq!(st, a.basis(&g.parse_element("12").unwrap()));
    }

    #[test]
    fn one_i_absorbs() {
        let a = alg("B3");
        let i = subset(&a, "1,2");
        let one = a.one_i(&i).unwrap();
        let wi = a.poincare_polynomial(&i).unwrap();
        for s in [0, 1] {
            let ts = a.basis(&a.group().generator(s).unwrap());
            assert_eq!(one.product(&ts).unwrap(), one.scale(&a.q(s)));
            assert_eq!(ts.product(&one).unwrap(), one.scale(&a.q(s)));
        }
        assert_eq!(one.product(&one).unwrap(), one.scale(&wi));
        assert_eq!(one.mul_one_i_right(&i).unwrap(), one.scale(&wi));
        assert_eq!(one.mul_one_i_left(&i).unwrap(), one.scale(&wi));
    }

    #[test]
    fn parabolic_basis_small() {
        let a = alg("A2");
        let g = a.group();
        let i = subset(&a, "2");
        let w = g.parse_element("1").unwrap();
        let t = a.parabolic_basis_element(&i, &w).unwrap();
        let words: Vec<String> = t.terms().keys().map(|z| z.to_string()).collect();
        assert_eq!(words, ["1", "12", "21", "121"]);
        let one_plus_q = &ParamPolynomial::one(1) + &a.q(0);
        assert!(t.terms().values().all(|p| *p == one_plus_q));
        assert_eq!(t, a.parabolic_basis_element_by_sum(&i, &w).unwrap());
        let e = a.parabolic_basis_element(&i, &g.identity()).unwrap();
        assert_eq!(e, a.one_i(&i).unwrap().scale(&one_plus_q));
        assert!(matches!(a.parabolic_basis_element(&i, &g.parse_element("12").unwrap()), Err(Error::NotIReduced(_))));
    }

    #[test]
    fn group_algebra_at_one() {
        let a = alg("A2");
        let s = a.group().parse_element("1").unwrap();
        let ss = a.basis(&s).product(&a.basis(&s)).unwrap();
        let one = vec![BigRational::from_integer(1.into())];
        let spec = ss.specialize(&one);
        assert_eq!(spec.len(), 1);
        assert_eq!(spec[&a.group().identity()], BigRational::from_integer(1.into()));
    }
}
