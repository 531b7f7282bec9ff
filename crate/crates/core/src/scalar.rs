//! Exact arithmetic in the coefficient field `Q(s)` with `q = s^2`.
//!
//! Every structure constant of the engine lives in the field of rational
//! functions in one central parameter `s`. Working with `s` rather than `q`
//! keeps the half-integer powers `q^{1/2} = s` produced by the Hopf action
//! inside one field. A [`Scalar`] is a reduced fraction of Laurent
//! polynomials in `s`, kept in a canonical form so that equality is plain
//! structural equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Exact rational number.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("evaluation at a pole (denominator vanishes at s0)")]
    Pole,
    #[error("evaluation at s0 = 0 is outside the Laurent domain")]
    EvalAtZero,
}

/// Laurent polynomial in `s` with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero; the zero polynomial is the
/// empty map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, Rat::one())
    }

    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn insert_add(&mut self, exp: i64, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.insert_add(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Dense coefficient vector of `self / s^min_exp`, lowest degree first.
    fn to_dense(&self) -> Vec<Rat> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![Rat::zero(); (hi - lo + 1) as usize];
                for (e, c) in &self.coeffs {
                    v[(e - lo) as usize] = c.clone();
                }
                v
            }
            _ => Vec::new(),
        }
    }

    fn from_dense(v: &[Rat]) -> Self {
        let mut out = LaurentPoly::zero();
        for (i, c) in v.iter().enumerate() {
            out.insert_add(i as i64, c.clone());
        }
        out
    }

    pub fn eval(&self, s0: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            let mut p = Rat::one();
            let n = e.unsigned_abs();
            for _ in 0..n {
                p *= s0;
            }
            if *e < 0 {
                p = p.recip();
            }
            acc += c * p;
        }
        acc
    }
}

/// Monic gcd of two ordinary (non-Laurent) dense polynomials over Q.
fn dense_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn rem(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
        let mut r = num.to_vec();
        let dl = den.len();
        let lead = den.last().unwrap().clone();
        while r.len() >= dl {
            let k = r.last().unwrap() / &lead;
            let off = r.len() - dl;
            for i in 0..dl {
                let t = &den[i] * &k;
                r[off + i] -= t;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        return x;
    }
    let lead = x.last().unwrap().clone();
    x.iter().map(|c| c / &lead).collect()
}

fn dense_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    if num.is_empty() {
        return Vec::new();
    }
    let mut r = num.to_vec();
    let mut quot = vec![Rat::zero(); num.len() - den.len() + 1];
    let dl = den.len();
    let lead = den.last().unwrap().clone();
    while r.len() >= dl {
        let k = r.last().unwrap() / &lead;
        let off = r.len() - dl;
        quot[off] = k.clone();
        for i in 0..dl {
            let t = &den[i] * &k;
            r[off + i] -= t;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    quot
}

/// Element of the field Q(s), held in canonical form.
///
/// Canonical form: `den` is nonzero, `gcd(num, den) = 1` after clearing
/// common powers of `s`, the denominator has no negative powers of `s`,
/// and its lowest-degree term is exactly `1`. With this normalization two
/// scalars are equal as field elements iff they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "scalar with zero denominator");
        if num.is_zero() {
            return Scalar {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            };
        }
        // Clear s-powers: write num = s^a N, den = s^b D with N(0), D(0) != 0.
        let a = num.min_exp().unwrap();
        let b = den.min_exp().unwrap();
        let n_dense = num.shift(-a).to_dense();
        let d_dense = den.shift(-b).to_dense();
        let g = dense_gcd(&n_dense, &d_dense);
        let (n_red, d_red) = if g.len() > 1 {
            (dense_div_exact(&n_dense, &g), dense_div_exact(&d_dense, &g))
        } else {
            (n_dense, d_dense)
        };
        // Normalize the denominator's lowest term to 1, exponent 0.
        let mut d_poly = LaurentPoly::from_dense(&d_red);
        let mut n_poly = LaurentPoly::from_dense(&n_red).shift(a - b);
        let low = d_poly.min_exp().unwrap();
        let c = d_poly.coeffs[&low].clone();
        d_poly = d_poly.shift(-low).scale(&c.recip());
        n_poly = n_poly.shift(-low).scale(&c.recip());
        Scalar {
            num: n_poly,
            den: d_poly,
        }
    }

    pub fn zero() -> Self {
        Scalar {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar {
            num: LaurentPoly::monomial(0, r),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from(BigInt::from(n)))
    }

    /// `s^k`, i.e. `q^{k/2}`.
    pub fn s_pow(k: i64) -> Self {
        Scalar {
            num: LaurentPoly::monomial(k, Rat::one()),
            den: LaurentPoly::one(),
        }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        Scalar::canonical(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Scalar::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::canonical(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Scalar::one().div(self)
    }

    /// The q-integer `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
    pub fn qint(n: i64) -> Self {
        // Expanded form: [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}, [-n] = -[n].
        if n == 0 {
            return Scalar::zero();
        }
        let m = n.abs();
        let mut acc = Scalar::zero();
        for j in 0..m {
            acc = acc.add(&Scalar::q_pow(m - 1 - 2 * j));
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Exact value at `s = s0` (note: the argument is s0, not q0).
    pub fn evaluate_at(&self, s0: &Rat) -> Result<Rat, ScalarError> {
        if s0.is_zero() {
            return Err(ScalarError::EvalAtZero);
        }
        let d = self.den.eval(s0);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(self.num.eval(s0) / d)
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Prints one Laurent term `c * s^e` in q-notation (`q^{e/2}`).
fn fmt_term(e: i64, c: &Rat, first: bool, out: &mut String) {
    let mag = c.abs();
    let sign = c.is_negative();
    if first {
        if sign {
            out.push('-');
        }
    } else if sign {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let coeff_part = if mag.is_one() && e != 0 {
        None
    } else {
        Some(fmt_rat(&mag))
    };
    let q_part = match e {
        0 => None,
        2 => Some("q".to_string()),
        e if e % 2 == 0 => Some(format!("q^{}", e / 2)),
        e => Some(format!("q^{{{}/2}}", e)),
    };
    match (coeff_part, q_part) {
        (None, Some(q)) => out.push_str(&q),
        (Some(c), None) => out.push_str(&c),
        (Some(c), Some(q)) => {
            out.push_str(&c);
            out.push(' ');
            out.push_str(&q);
        }
        (None, None) => unreachable!(),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        // Highest power first.
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            fmt_term(*e, c, i == 0, &mut out);
        }
        write!(f, "{out}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one() {
            if self.num.coeffs.len() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
