use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse polynomial over `Z` in one variable per generator class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPolynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ParamPolynomial {
    pub fn zero(vars: usize) -> Self {
        ParamPolynomial { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    /// The variable of class `c`.
    pub fn var(vars: usize, c: usize) -> Self {
        let mut e = vec![0; vars];
        e[c] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * other` for a monomial `m`.
    pub fn add_scaled(&mut self, other: &ParamPolynomial, c: &BigInt, m: &[u32]) {
        debug_assert_eq!(self.vars, other.vars);
        for (e, v) in &other.terms {
            let e2: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
            self.add_term(e2, v * c);
        }
    }

    pub fn add_assign_ref(&mut self, other: &ParamPolynomial) {
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v.clone());
        }
    }

    /// Multiplication by a monomial.
    pub fn shift(&self, m: &[u32]) -> ParamPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        ParamPolynomial { vars: self.vars, terms }
    }

    /// Multiplication by the variable of class `c`.
    pub fn times_var(&self, c: usize) -> ParamPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| {
                let mut e = e.clone();
                e[c] += 1;
                (e, v.clone())
            })
            .collect();
        ParamPolynomial { vars: self.vars, terms }
    }

    pub fn scale(&self, c: &BigInt) -> ParamPolynomial {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        ParamPolynomial { vars: self.vars, terms }
    }

    /// Leading term in graded lex order.
    fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().max_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| a.0.cmp(b.0))
        })
    }

    /// Exact quotient `self / divisor`; fails if a remainder is left.
    pub fn div_exact(&self, divisor: &ParamPolynomial) -> Result<ParamPolynomial> {
        let (lm, lc) = match divisor.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::InexactDivision),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars);
        let neg_div = -divisor.clone();
        while let Some((m, c)) = rem.leading() {
            if m.iter().zip(&lm).any(|(a, b)| a < b) {
                return Err(Error::InexactDivision);
            }
            let (q, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            let e: Vec<u32> = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            rem.add_scaled(&neg_div, &q, &e);
            quot.add_term(e, q);
        }
        Ok(quot)
    }

    /// Exact rational evaluation at `values[c]` for each class `c`.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        assert_eq!(values.len(), self.vars, "one value per class");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, &k) in values.iter().zip(e) {
                t *= num_traits::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Evaluation with every class set to the same integer.
    pub fn eval_uniform(&self, tau: i64) -> BigRational {
        self.eval(&vec![BigRational::from_integer(tau.into()); self.vars])
    }

    /// Rewrites the polynomial in the variables `q_c - 1`.
    pub fn shifted(&self) -> ParamPolynomial {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            // prod_c (1 + y_c)^{e_c}
            let mut part = Self::constant(self.vars, c.clone());
            for (k, &n) in e.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let mut binom = Self::zero(self.vars);
                let mut b = BigInt::one();
                for j in 0..=n {
                    let mut m = vec![0; self.vars];
                    m[k] = j;
                    binom.add_term(m, b.clone());
                    b = b * BigInt::from(n - j) / BigInt::from(j + 1);
                }
                part = &part * &binom;
            }
            out.add_assign_ref(&part);
        }
        out
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.vars])
    }

    /// Terms in display order: ascending total degree, then descending
    /// exponent vectors.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (k, &n) in e.iter().enumerate() {
                match n {
                    0 => {}
                    1 => factors.push(names[k].clone()),
                    _ => factors.push(format!("{}^{}", names[k], n)),
                }
            }
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// `q`, `q'`, `q''`, ... for the classes in order.
pub fn class_names(classes: usize) -> Vec<String> {
    (0..classes).map(|c| format!("q{}", "'".repeat(c))).collect()
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&class_names(self.vars)))
    }
}

impl fmt::Debug for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), -v);
        }
        out
    }
}

impl Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = ParamPolynomial::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_scaled(rhs, c, e);
        }
        out
    }
}

impl Neg for ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(mut self) -> ParamPolynomial {
        for v in self.terms.values_mut() {
            *v = -std::mem::take(v);
        }
        self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ParamPolynomial {
            type Output = ParamPolynomial;
            fn $m(self, rhs: ParamPolynomial) -> ParamPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);
