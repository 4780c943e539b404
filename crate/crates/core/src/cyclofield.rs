//! Exact arithmetic in `Q(λ_L)`, `λ_L = 2cos(π/L)`.
//!
//! Elements are rational polynomials in `λ_L` reduced modulo its minimal
//! polynomial. Signs are decided by rational interval arithmetic on an
//! isolating interval. The group code works with integral elements through
//! [`IntMulMatrix`] and [`FieldContext::int_sign`], which use a fixed-point
//! enclosure first and fall back to the exact path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diagram::Bond;
use crate::error::{Error, Result};

type Q = BigRational;

/// Fractional bits of the fixed-point power enclosures.
const FIXED_BITS: u32 = 48;
/// Width exponent of the stored refined enclosure: `hi - lo <= 2^-REFINE_BITS`.
const REFINE_BITS: u32 = 160;

/// The field `Q(λ_L)` shared by all numbers of one diagram.
#[derive(Debug)]
pub struct FieldContext {
    level: u32,
    /// Monic, low degree first.
    min_poly: Vec<BigInt>,
    interval: (Q, Q),
    refined: (Q, Q),
    /// `[lo, hi]` with `lo <= λ^k * 2^FIXED_BITS <= hi`, for `k < degree`.
    powers: Vec<(i128, i128)>,
    /// Same enclosures at `2^REFINE_BITS`.
    wide_powers: Vec<(BigInt, BigInt)>,
}

pub type Field = Arc<FieldContext>;

/// Builds the field for a diagram whose finite bonds (all `>= 3`) are `bonds`.
pub fn make_field<I: IntoIterator<Item = u32>>(bonds: I) -> Result<Field> {
    let mut level = 1u32;
    for m in bonds {
        if m < 3 {
            return Err(Error::BondTooSmall(m));
        }
        level = level.lcm(&m);
    }
    Ok(Arc::new(FieldContext::for_level(level)))
}

impl FieldContext {
    pub fn for_level(level: u32) -> FieldContext {
        assert!(level >= 1);
        let min_poly = if level == 1 {
            vec![BigInt::from(2), BigInt::one()]
        } else {
            fold_palindromic(&cyclotomic(2 * level))
        };
        let (interval, refined) = if min_poly.len() == 2 {
            let root = Q::from_integer(-min_poly[0].clone());
            ((root.clone(), root.clone()), (root.clone(), root))
        } else {
            let approx = 2.0 * (std::f64::consts::PI / level as f64).cos();
            let lo = Q::from_float(approx).unwrap() - Q::new(BigInt::one(), BigInt::one() << 30u32);
            let hi = Q::from_integer(BigInt::from(2));
            let iv = (lo, hi);
            debug_assert!(sign_change(&min_poly, &iv));
            let refined = bisect(&min_poly, iv.clone(), REFINE_BITS);
            (iv, refined)
        };
        let degree = min_poly.len() - 1;
        let scale = Q::from_integer(BigInt::one() << FIXED_BITS);
        let wide_scale = Q::from_integer(BigInt::one() << REFINE_BITS);
        let mut powers = Vec::with_capacity(degree);
        let mut wide_powers = Vec::with_capacity(degree);
        let (mut plo, mut phi) = (Q::one(), Q::one());
        for k in 0..degree {
            if k > 0 {
                plo *= &refined.0;
                phi *= &refined.1;
                if plo > phi {
                    std::mem::swap(&mut plo, &mut phi);
                }
            }
            wide_powers.push((
                (&plo * &wide_scale).floor().to_integer(),
                (&phi * &wide_scale).ceil().to_integer(),
            ));
            let lo = (&plo * &scale).floor().to_integer().to_i128();
            let hi = (&phi * &scale).ceil().to_integer().to_i128();
            if let (Some(lo), Some(hi), true) = (lo, hi, powers.len() == k) {
                powers.push((lo, hi));
            }
        }
        FieldContext { level, min_poly, interval, refined, powers, wide_powers }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    /// Minimal polynomial of `λ_L`, constant term first.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn isolating_interval(&self) -> &(Q, Q) {
        &self.interval
    }

    /// Square-free check of the minimal polynomial (`gcd(p, p') = 1`).
    pub fn is_square_free(&self) -> bool {
        let p: Vec<Q> = self.min_poly.iter().cloned().map(Q::from_integer).collect();
        let dp: Vec<Q> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
            .collect();
        poly_gcd(p, dp).len() == 1
    }

    pub fn lambda_f64(&self) -> f64 {
        if self.degree() == 1 {
            return self.interval.0.to_f64().unwrap();
        }
        2.0 * (std::f64::consts::PI / self.level as f64).cos()
    }

    /// Reduces an integer polynomial in `λ` modulo the minimal polynomial.
    fn reduce_int(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        while p.len() > d {
            let lead = p.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let off = p.len() - d;
            for (i, c) in self.min_poly[..d].iter().enumerate() {
                p[off + i] -= &lead * c;
            }
        }
        p.resize(d, BigInt::zero());
        p
    }

    fn reduce(&self, mut p: Vec<Q>) -> Vec<Q> {
        let d = self.degree();
        while p.len() > d {
            let lead = p.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let off = p.len() - d;
            for (i, c) in self.min_poly[..d].iter().enumerate() {
                p[off + i] -= &lead * Q::from_integer(c.clone());
            }
        }
        p.resize(d, Q::zero());
        p
    }

    /// Sign of the integral element `Σ v[k] λ^k`.
    pub fn int_sign(&self, v: &[i64]) -> Ordering {
        if let Some(s) = self.fast_sign(v) {
            return s;
        }
        let coeffs: Vec<Q> = v.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect();
        sign_of(self, &coeffs)
    }

    fn fast_sign(&self, v: &[i64]) -> Option<Ordering> {
        if v.iter().all(|&c| c == 0) {
            return Some(Ordering::Equal);
        }
        if self.powers.len() < v.len() {
            return None;
        }
        let (mut lo, mut hi) = (0i128, 0i128);
        for (&c, &(pl, ph)) in v.iter().zip(&self.powers) {
            let c = c as i128;
            let (a, b) = if c >= 0 { (c.checked_mul(pl)?, c.checked_mul(ph)?) } else { (c.checked_mul(ph)?, c.checked_mul(pl)?) };
            lo = lo.checked_add(a)?;
            hi = hi.checked_add(b)?;
        }
        if lo > 0 {
            Some(Ordering::Greater)
        } else if hi < 0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// An element of `Q(λ_L)`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    ctx: Field,
    coeffs: Vec<Q>,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.level == other.ctx.level && self.coeffs == other.coeffs
    }
}
impl Eq for CycloNumber {}

impl CycloNumber {
    pub fn from_coeffs(ctx: &Field, coeffs: Vec<Q>) -> CycloNumber {
        CycloNumber { ctx: ctx.clone(), coeffs: ctx.reduce(coeffs) }
    }

    pub fn from_ints(ctx: &Field, coeffs: &[i64]) -> CycloNumber {
        Self::from_coeffs(ctx, coeffs.iter().map(|&c| Q::from_integer(BigInt::from(c))).collect())
    }

    pub fn rational(ctx: &Field, q: Q) -> CycloNumber {
        Self::from_coeffs(ctx, vec![q])
    }

    pub fn zero(ctx: &Field) -> CycloNumber {
        Self::from_coeffs(ctx, Vec::new())
    }

    pub fn one(ctx: &Field) -> CycloNumber {
        Self::rational(ctx, Q::one())
    }

    /// The generator `λ_L`.
    pub fn lambda(ctx: &Field) -> CycloNumber {
        Self::from_coeffs(ctx, vec![Q::zero(), Q::one()])
    }

    pub fn context(&self) -> &Field {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Integer coefficients, if all are integers that fit in `i64`.
    pub fn to_int_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn inv(&self) -> Result<CycloNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p: Vec<Q> = self.ctx.min_poly.iter().cloned().map(Q::from_integer).collect();
        let s = mod_inverse(trim(self.coeffs.clone()), p);
        Ok(CycloNumber::from_coeffs(&self.ctx, s))
    }

    /// Exact sign of the real number `a(λ_L)`.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.ctx, &self.coeffs)
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.ctx.lambda_f64();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap())
    }

    fn check(&self, other: &CycloNumber) {
        assert_eq!(self.ctx.level, other.ctx.level, "numbers from different fields");
    }
}

/// `2cos(π/m)` in the field: `D_{L/m}(λ_L)` for finite `m`, `2` for `∞`, `0` for `m = 2`.
pub fn embed_lambda(ctx: &Field, m: Bond) -> Result<CycloNumber> {
    match m {
        Bond::Infinite => Ok(CycloNumber::rational(ctx, Q::from_integer(BigInt::from(2)))),
        Bond::Finite(2) => Ok(CycloNumber::zero(ctx)),
        Bond::Finite(m) if m < 2 => Err(Error::BondTooSmall(m)),
        Bond::Finite(m) => {
            if !ctx.level.is_multiple_of(m) {
                return Err(Error::BondNotInField { m, level: ctx.level });
            }
            let d = dickson(ctx.level / m);
            Ok(CycloNumber::from_coeffs(ctx, d.into_iter().map(Q::from_integer).collect()))
        }
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})λ"),
                _ => format!("({c})λ^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloNumber { ctx: self.ctx.clone(), coeffs }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycloNumber { ctx: self.ctx.clone(), coeffs }
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        let d = self.coeffs.len();
        let mut prod = vec![Q::zero(); (2 * d).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        CycloNumber { ctx: self.ctx.clone(), coeffs: self.ctx.reduce(prod) }
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

/// Multiplication by a fixed integral element as an integer matrix on
/// coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMulMatrix {
    degree: usize,
    /// Row-major `degree x degree`.
    entries: Vec<i64>,
}

impl IntMulMatrix {
    /// `None` when `c` is not integral or the matrix does not fit in `i64`.
    pub fn new(c: &CycloNumber) -> Option<IntMulMatrix> {
        let ctx = &c.ctx;
        let d = ctx.degree();
        let base: Vec<BigInt> = c
            .coeffs
            .iter()
            .map(|q| if q.is_integer() { Some(q.to_integer()) } else { None })
            .collect::<Option<_>>()?;
        let mut entries = vec![0i64; d * d];
        for j in 0..d {
            let mut shifted = vec![BigInt::zero(); j];
            shifted.extend(base.iter().cloned());
            let col = ctx.reduce_int(shifted);
            for (i, v) in col.iter().enumerate() {
                entries[i * d + j] = v.to_i64()?;
            }
        }
        Some(IntMulMatrix { degree: d, entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `dst += M * src`, `None` on overflow.
    pub fn mul_add(&self, src: &[i64], dst: &mut [i64]) -> Option<()> {
        let d = self.degree;
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let mut acc = dst[i];
            for (&m, &s) in row.iter().zip(src) {
                if m != 0 && s != 0 {
                    acc = acc.checked_add(m.checked_mul(s)?)?;
                }
            }
            dst[i] = acc;
        }
        Some(())
    }
}

/// `D_k` with `2cos(kθ) = D_k(2cosθ)`, low degree first.
pub fn dickson(k: u32) -> Vec<BigInt> {
    let mut prev = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `Φ_n` by exact division of `z^n - 1` by the `Φ_d`, `d | n`, `d < n`.
pub fn cyclotomic(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = div_monic(&p, &cyclotomic(d));
    }
    p
}

fn div_monic(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut r = p.to_vec();
    let dq = q.len() - 1;
    let mut quot = vec![BigInt::zero(); p.len() - dq];
    for k in (0..quot.len()).rev() {
        let c = r[k + dq].clone();
        if c.is_zero() {
            continue;
        }
        for (i, qi) in q.iter().enumerate() {
            r[k + i] -= &c * qi;
        }
        quot[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    quot
}

/// For palindromic `Φ` of degree `2m`: `z^{-m}Φ(z) = a_m + Σ_j a_{m+j} D_j(z + 1/z)`.
fn fold_palindromic(phi: &[BigInt]) -> Vec<BigInt> {
    let m = (phi.len() - 1) / 2;
    let mut out = vec![phi[m].clone()];
    for j in 1..=m {
        let d = dickson(j as u32);
        if out.len() < d.len() {
            out.resize(d.len(), BigInt::zero());
        }
        for (i, c) in d.iter().enumerate() {
            out[i] += &phi[m + j] * c;
        }
    }
    out
}

fn eval_int(p: &[BigInt], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + Q::from_integer(c.clone()))
}

fn sign_change(p: &[BigInt], iv: &(Q, Q)) -> bool {
    let a = eval_int(p, &iv.0);
    let b = eval_int(p, &iv.1);
    a.signum() * b.signum() < Q::zero()
}

fn bisect(p: &[BigInt], (mut lo, mut hi): (Q, Q), bits: u32) -> (Q, Q) {
    let width = Q::new(BigInt::one(), BigInt::one() << bits);
    let lo_sign = eval_int(p, &lo).signum();
    let two = Q::from_integer(BigInt::from(2));
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let s = eval_int(p, &mid).signum();
        if s.is_zero() {
            return (mid.clone(), mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Encloses `Σ c_k x^k` for `x ∈ [lo, hi]`, `lo >= 0`.
fn interval_eval(coeffs: &[Q], lo: &Q, hi: &Q) -> (Q, Q) {
    let mut acc = (Q::zero(), Q::zero());
    for c in coeffs.iter().rev() {
        let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

fn sign_of(ctx: &FieldContext, coeffs: &[Q]) -> Ordering {
    if coeffs.iter().all(Zero::is_zero) {
        return Ordering::Equal;
    }
    let to_ord = |q: &Q| q.cmp(&Q::zero());
    if ctx.degree() == 1 {
        return to_ord(&(Q::zero() + &coeffs[0]));
    }
    // Dyadic enclosure first; bisection only for numbers very close to zero.
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let (mut elo, mut ehi) = (BigInt::zero(), BigInt::zero());
    for (c, (pl, ph)) in coeffs.iter().zip(&ctx.wide_powers) {
        let n = (c * Q::from_integer(den.clone())).to_integer();
        if n.is_negative() {
            elo += &n * ph;
            ehi += &n * pl;
        } else {
            elo += &n * pl;
            ehi += &n * ph;
        }
    }
    if elo.is_positive() {
        return Ordering::Greater;
    }
    if ehi.is_negative() {
        return Ordering::Less;
    }
    let (mut lo, mut hi) = ctx.refined.clone();
    let lo_sign = eval_int(&ctx.min_poly, &lo).signum();
    let two = Q::from_integer(BigInt::from(2));
    loop {
        let (a, b) = interval_eval(coeffs, &lo, &hi);
        if a > Q::zero() || b < Q::zero() {
            return to_ord(&a);
        }
        let mid = (&lo + &hi) / &two;
        let s = eval_int(&ctx.min_poly, &mid).signum();
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `(quotient, remainder)` over `Q`.
fn poly_divmod(mut a: Vec<Q>, b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    if a.len() <= db {
        return (Vec::new(), a);
    }
    let mut q = vec![Q::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = &a[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            a[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    a.truncate(db);
    (q, trim(a))
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let z = Q::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn poly_gcd(a: Vec<Q>, b: Vec<Q>) -> Vec<Q> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let (_, r) = poly_divmod(a, &b);
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo the irreducible `p` by the extended Euclidean algorithm.
fn mod_inverse(a: Vec<Q>, p: Vec<Q>) -> Vec<Q> {
    let (mut r0, mut r1) = (trim(p), a);
    let (mut s0, mut s1): (Vec<Q>, Vec<Q>) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / &c).collect()
}
