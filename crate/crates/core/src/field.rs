//! Exact arithmetic over ℚ and the cyclotomic fields ℚ(ζ_n).
//!
//! An element of ℚ(ζ_n) is stored as a polynomial in ζ of degree < φ(n) with
//! rational coefficients, reduced modulo the n-th cyclotomic polynomial. An
//! element whose value is rational is always stored with index 1, so the
//! index of an element is the smallest field (among ℚ and ℚ(ζ_n)) it lives in.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(n));
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn compute_cyclotomic(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic index must be positive");
    // x^n - 1 divided by Φ_d for every proper divisor d of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = compute_cyclotomic(d);
            num = exact_monic_division(&num, &div);
        }
    }
    num
}

fn exact_monic_division(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (dd..num.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k - dd + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// An element of ℚ or of a cyclotomic field ℚ(ζ_n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    index: u32,
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement {
            index: 1,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let coeffs = if r.is_zero() { Vec::new() } else { vec![r] };
        FieldElement { index: 1, coeffs }
    }

    /// The primitive n-th root of unity ζ_n = exp(2πi/n).
    pub fn zeta(n: u32) -> Self {
        Self::from_power_basis(n, vec![BigRational::zero(), BigRational::one()])
    }

    /// Builds Σ coeffs[k] ζ_n^k, reducing modulo Φ_n.
    pub fn from_power_basis(n: u32, coeffs: Vec<BigRational>) -> Self {
        let mut e = FieldElement {
            index: n.max(1),
            coeffs,
        };
        e.reduce();
        e
    }

    /// Smallest cyclotomic index of a field containing this element.
    pub fn index(&self) -> u32 {
        self.index
    }

    /// Coefficients in the power basis 1, ζ, ζ², … (trailing zeros trimmed).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn reduce(&mut self) {
        if self.index > 2 && self.coeffs.len() > 1 {
            let phi = cyclotomic_polynomial(self.index);
            let deg = phi.len() - 1;
            for k in (deg..self.coeffs.len()).rev() {
                let c = std::mem::take(&mut self.coeffs[k]);
                if c.is_zero() {
                    continue;
                }
                for (j, pj) in phi.iter().enumerate().take(deg) {
                    if !pj.is_zero() {
                        self.coeffs[k - deg + j] -= &c * BigRational::from_integer(pj.clone());
                    }
                }
            }
        } else if self.index <= 2 && self.coeffs.len() > 1 {
            // ζ_1 = 1, ζ_2 = -1
            let z = if self.index == 2 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let mut acc = BigRational::zero();
            let mut pow = BigRational::one();
            for c in &self.coeffs {
                acc += c * &pow;
                pow *= &z;
            }
            self.coeffs = vec![acc];
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.index = 1;
        }
    }

    /// Index of the field both operands live in, or an error when they
    /// live in different proper cyclotomic extensions.
    pub fn common_index(&self, other: &Self) -> Result<u32, Error> {
        match (self.index, other.index) {
            (1, b) => Ok(b),
            (a, 1) => Ok(a),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::MixedCyclotomic(a, b)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        let n = self.common_index(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.coeffs.get(k);
            let b = other.coeffs.get(k);
            coeffs.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        let mut e = FieldElement { index: n, coeffs };
        e.trim();
        Ok(e)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        let n = self.common_index(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() == 1 {
            let s = &self.coeffs[0];
            let coeffs = other.coeffs.iter().map(|c| c * s).collect();
            return Ok(FieldElement {
                index: other.index,
                coeffs,
            });
        }
        if other.coeffs.len() == 1 {
            let s = &other.coeffs[0];
            let coeffs = self.coeffs.iter().map(|c| c * s).collect();
            return Ok(FieldElement {
                index: self.index,
                coeffs,
            });
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut e = FieldElement { index: n, coeffs };
        e.reduce();
        Ok(e)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.index = 1;
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coeffs.len() == 1 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        // Extended Euclid in ℚ[x] against the (irreducible) cyclotomic polynomial.
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.index)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let (g, s, _) = poly_xgcd(self.coeffs.clone(), phi);
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &scale).collect();
        Some(Self::from_power_basis(self.index, coeffs))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex value, used only for diagnostics.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let theta = 2.0 * std::f64::consts::PI / self.index as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * (theta * k as f64).cos();
            im += v * (theta * k as f64).sin();
        }
        (re, im)
    }
}

fn poly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_sub_mul(a: &[BigRational], b: &[BigRational], q: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    let len = (b.len() + q.len()).saturating_sub(1).max(a.len());
    out.resize(len, BigRational::zero());
    for (i, bi) in b.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            out[i + j] -= bi * qj;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b[db].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = &rem[k] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k - db + j] -= &c * bj;
        }
        quot[k - db] = c;
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

/// Returns (g, s, t) with s·a + t·b = g.
fn poly_xgcd(
    a: Vec<BigRational>,
    b: Vec<BigRational>,
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (a, b);
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub_mul(&s0, &s1, &q);
        let t2 = poly_sub_mul(&t0, &t1, &q);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElement {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for FieldElement {
    fn from(v: BigRational) -> Self {
        Self::from_rational(v)
    }
}

// Operator impls panic on mixed cyclotomic indices; callers that combine
// values from different sources use `try_add` / `try_mul`.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field arithmetic")
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field arithmetic")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            index: self.index,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        if rhs.is_zero() {
            return;
        }
        if self.coeffs.len() <= 1 && rhs.coeffs.len() == 1 && self.index == 1 {
            match self.coeffs.first_mut() {
                Some(c) => *c += &rhs.coeffs[0],
                None => self.coeffs.push(rhs.coeffs[0].clone()),
            }
            self.trim();
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        if rhs.is_zero() {
            return;
        }
        if self.coeffs.len() <= 1 && rhs.coeffs.len() == 1 && self.index == 1 {
            match self.coeffs.first_mut() {
                Some(c) => *c -= &rhs.coeffs[0],
                None => self.coeffs.push(-&rhs.coeffs[0]),
            }
            self.trim();
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElement {
    /// Canonical text: rationals as `p/q`, cyclotomic elements as a sum of
    /// `c*zeta^k` terms in descending powers of `zeta`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let zeta = match k {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{k}"),
            };
            if zeta.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{zeta}")?;
            } else {
                write!(f, "{}*{zeta}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 1 {
            write!(f, "{self}")
        } else {
            write!(f, "{self} [Q(zeta_{})]", self.index)
        }
    }
}
