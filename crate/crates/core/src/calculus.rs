//! The truncated bigraded calculus in a collapsed computational model.
//!
//! Forms carry algebra coefficients on the basis `{1, w-, w+, w-^w+}` with
//! every `w` symbol pushed to the right of every coefficient. The
//! commutation rule is `w_± f = (K^2 f) w_±`, i.e. `q^{weight(f)} f w_±` on
//! weight-homogeneous `f`. The differentials act by
//!
//! ```text
//! d f        = (X_- f) w-  +  (X_+ f) w+
//! d (g w-)   = -q^2 (X_+ g) w-^w+
//! d (h w+)   =      (X_- h) w-^w+
//! ```
//!
//! with `w+ ^ w- = -q^2 w- ^ w+` the unique constant making `d^2 = 0`, and
//! `d w_± = 0`. Bidegrees `(p, q)` with `p > 1` or `q > 1` have no slots.
//!
//! Tensor products over the base never materialize: `Omega^{0,1} (x) L_n`
//! is the weight-`(n-2)` subspace times the `w-` symbol, and so on. The
//! [`Tagged`] type records which abstract tensor space a collapsed value
//! represents, so that maps like the wedge isomorphism `mu` stay faithful.

use crate::ncalg::Poly;
use crate::scalar::Scalar;
use crate::su2::{self, Su2Action};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("bidegree overflow: product lands in a vanishing Omega^{{p,q}}")]
    BidegreeOverflow,
    #[error("tensor tag mismatch: expected {expected}, got {got}")]
    TagMismatch { expected: TensorTag, got: TensorTag },
    #[error("value has terms of weight other than {expected}")]
    WeightMismatch { expected: i64 },
}

/// Element of the truncated exterior algebra with algebra coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Form {
    /// bidegree (0,0)
    pub c0: Poly,
    /// coefficient of w-, bidegree (0,1)
    pub cm: Poly,
    /// coefficient of w+, bidegree (1,0)
    pub cp: Poly,
    /// coefficient of w-^w+, bidegree (1,1)
    pub cmp: Poly,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn scalar(p: Poly) -> Self {
        Form { c0: p, ..Form::default() }
    }

    pub fn wminus(p: Poly) -> Self {
        Form { cm: p, ..Form::default() }
    }

    pub fn wplus(p: Poly) -> Self {
        Form { cp: p, ..Form::default() }
    }

    pub fn top(p: Poly) -> Self {
        Form { cmp: p, ..Form::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.cm.is_zero() && self.cp.is_zero() && self.cmp.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Form {
            c0: self.c0.add(&other.c0),
            cm: self.cm.add(&other.cm),
            cp: self.cp.add(&other.cp),
            cmp: self.cmp.add(&other.cmp),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            c0: self.c0.neg(),
            cm: self.cm.neg(),
            cp: self.cp.neg(),
            cmp: self.cmp.neg(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Form {
            c0: self.c0.scale(k),
            cm: self.cm.scale(k),
            cp: self.cp.scale(k),
            cmp: self.cmp.scale(k),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.c0.is_zero() {
            parts.push(format!("{}", self.c0));
        }
        for (p, sym) in [(&self.cm, "w-"), (&self.cp, "w+"), (&self.cmp, "w-^w+")] {
            if !p.is_zero() {
                if p.num_terms() == 1 {
                    parts.push(format!("{p} {sym}"));
                } else {
                    parts.push(format!("({p}) {sym}"));
                }
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// One factor of an expression with interleaved `w` symbols.
#[derive(Debug, Clone)]
pub enum MixedFactor {
    Coeff(Poly),
    WMinus,
    WPlus,
}

/// The fixed 2D calculus: differentials, wedge, commutation.
#[derive(Debug, Clone)]
pub struct Calculus {
    pub su2: Su2Action,
}

impl Calculus {
    pub fn new() -> Self {
        Calculus { su2: Su2Action::new() }
    }

    fn nf(&self, p: &Poly) -> Poly {
        self.su2.presentation.normal_form(p)
    }

    fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        self.su2.presentation.mul_nf(x, y)
    }

    /// `K^{2k}` twist: `q^{k * weight}` termwise.
    fn twist(&self, p: &Poly, k: i64) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in p.terms() {
            out.add_term(w.clone(), c.mul(&Scalar::s_pow(2 * k * su2::weight_word(w))));
        }
        out
    }

    /// Right-multiplies a canonical form by a coefficient, pushing the
    /// symbols across: `(.. w) p = .. (K^2 p) w`.
    pub fn form_mul_poly(&self, x: &Form, p: &Poly) -> Form {
        Form {
            c0: self.mul(&x.c0, p),
            cm: self.mul(&x.cm, &self.twist(p, 1)),
            cp: self.mul(&x.cp, &self.twist(p, 1)),
            cmp: self.mul(&x.cmp, &self.twist(p, 2)),
        }
    }

    /// Left-multiplies by a coefficient (no pushing needed).
    pub fn poly_mul_form(&self, p: &Poly, x: &Form) -> Form {
        Form {
            c0: self.mul(p, &x.c0),
            cm: self.mul(p, &x.cm),
            cp: self.mul(p, &x.cp),
            cmp: self.mul(p, &x.cmp),
        }
    }

    fn form_mul_wminus(&self, x: &Form) -> Form {
        // w+ ^ w- = -q^2 w- ^ w+; w- ^ w- = 0.
        Form {
            c0: Poly::zero(),
            cm: x.c0.clone(),
            cp: Poly::zero(),
            cmp: x.cp.scale(&Scalar::q_pow(2).neg()),
        }
    }

    fn form_mul_wplus(&self, x: &Form) -> Form {
        Form {
            c0: Poly::zero(),
            cm: Poly::zero(),
            cp: x.c0.clone(),
            cmp: x.cm.clone(),
        }
    }

    /// Normalizes an expression with interleaved `w` symbols to a canonical
    /// form with all symbols on the right.
    pub fn push_right(&self, factors: &[MixedFactor]) -> Form {
        let mut acc = Form::scalar(Poly::one());
        for f in factors {
            acc = match f {
                MixedFactor::Coeff(p) => self.form_mul_poly(&acc, p),
                MixedFactor::WMinus => self.form_mul_wminus(&acc),
                MixedFactor::WPlus => self.form_mul_wplus(&acc),
            };
        }
        acc
    }

    /// Wedge product of canonical forms.
    pub fn wedge(&self, x: &Form, y: &Form) -> Result<Form, FormError> {
        // Degree bookkeeping: a (1,1) slot wedged against anything of
        // positive degree overflows the truncation.
        let y_positive = !y.cm.is_zero() || !y.cp.is_zero() || !y.cmp.is_zero();
        let x_positive = !x.cm.is_zero() || !x.cp.is_zero() || !x.cmp.is_zero();
        if (!x.cmp.is_zero() && y_positive) || (!y.cmp.is_zero() && x_positive) {
            return Err(FormError::BidegreeOverflow);
        }
        let mut out = self.poly_mul_form(&x.c0, y);
        // (g w-) ^ y
        if !x.cm.is_zero() {
            out.cm = out.cm.add(&self.mul(&x.cm, &self.twist(&y.c0, 1)));
            // w- ^ w- = 0; w- ^ (h w+) = (K^2 h) w-^w+
            out.cmp = out.cmp.add(&self.mul(&x.cm, &self.twist(&y.cp, 1)));
        }
        // (h w+) ^ y
        if !x.cp.is_zero() {
            out.cp = out.cp.add(&self.mul(&x.cp, &self.twist(&y.c0, 1)));
            // w+ ^ (g w-) = -q^2 (K^2 g) w-^w+
            out.cmp = out.cmp.add(
                &self
                    .mul(&x.cp, &self.twist(&y.cm, 1))
                    .scale(&Scalar::q_pow(2).neg()),
            );
        }
        // (k w-^w+) ^ (scalar part of y) was already handled by poly_mul_form
        // only for x.c0; add the k-slot against y.c0.
        if !x.cmp.is_zero() {
            out.cmp = out.cmp.add(&self.mul(&x.cmp, &self.twist(&y.c0, 2)));
        }
        Ok(Form {
            c0: self.nf(&out.c0),
            cm: self.nf(&out.cm),
            cp: self.nf(&out.cp),
            cmp: self.nf(&out.cmp),
        })
    }

    /// `(1,0)` part of the differential.
    pub fn del(&self, x: &Form) -> Form {
        Form {
            c0: Poly::zero(),
            cm: Poly::zero(),
            cp: self.su2.xplus(&x.c0),
            // del(g w-) = (X_+ g) w+ ^ w- = -q^2 (X_+ g) w- ^ w+
            cmp: self.su2.xplus(&x.cm).scale(&Scalar::q_pow(2).neg()),
        }
    }

    /// `(0,1)` part of the differential.
    pub fn delbar(&self, x: &Form) -> Form {
        Form {
            c0: Poly::zero(),
            cm: self.su2.xminus(&x.c0),
            cp: Poly::zero(),
            cmp: self.su2.xminus(&x.cp),
        }
    }

    /// Full differential `d = del + delbar`.
    pub fn d(&self, x: &Form) -> Form {
        self.del(x).add(&self.delbar(x))
    }

    /// `X_-` on a bare coefficient (the collapsed `delbar` on functions).
    pub fn xminus(&self, p: &Poly) -> Poly {
        self.su2.xminus(p)
    }

    pub fn xplus(&self, p: &Poly) -> Poly {
        self.su2.xplus(p)
    }
}

impl Default for Calculus {
    fn default() -> Self {
        Self::new()
    }
}

/// Which abstract tensor space a collapsed value represents.
///
/// The collapsed value of each space is a single weight-homogeneous
/// coefficient with all symbols pushed right; the tag preserves the
/// identity of the space so maps such as `mu` and the twisted flip stay
/// distinct from the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorTag {
    /// Omega^{0,1} (x) E
    W01E,
    /// Omega^{1,0} (x) E
    W10E,
    /// Omega^{0,1} (x) Omega^{1,0} (x) E
    W01W10E,
    /// Omega^{1,0} (x) Omega^{0,1} (x) E
    W10W01E,
    /// Omega^{1,1} (x) E
    W11E,
    /// E (x) Omega^{0,1}
    EW01,
    /// E (x) Omega^{1,0}
    EW10,
    /// (Omega^{1,0} (x) E) (x) Omega^{0,1}
    W10EW01,
    /// (Omega^{0,1} (x) E) (x) Omega^{1,0}
    W01EW10,
    /// Omega^{0,1} (x) Omega^{1,0} (over the base, no module leg)
    W01W10,
    /// Omega^{1,0} (x) Omega^{0,1}
    W10W01,
}

impl TensorTag {
    /// Weight of the collapsed value for the bundle label `n`.
    pub fn expected_weight(&self, n: i64) -> i64 {
        match self {
            TensorTag::W01E | TensorTag::EW01 => n - 2,
            TensorTag::W10E | TensorTag::EW10 => n + 2,
            TensorTag::W01W10E
            | TensorTag::W10W01E
            | TensorTag::W11E
            | TensorTag::W10EW01
            | TensorTag::W01EW10 => n,
            TensorTag::W01W10 | TensorTag::W10W01 => 0,
        }
    }
}

impl fmt::Display for TensorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TensorTag::W01E => "O01*E",
            TensorTag::W10E => "O10*E",
            TensorTag::W01W10E => "O01*O10*E",
            TensorTag::W10W01E => "O10*O01*E",
            TensorTag::W11E => "O11*E",
            TensorTag::EW01 => "E*O01",
            TensorTag::EW10 => "E*O10",
            TensorTag::W10EW01 => "(O10*E)*O01",
            TensorTag::W01EW10 => "(O01*E)*O10",
            TensorTag::W01W10 => "O01*O10",
            TensorTag::W10W01 => "O10*O01",
        };
        write!(f, "{s}")
    }
}

/// Collapsed value of an abstract tensor space element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tagged {
    pub tag: TensorTag,
    pub n: i64,
    pub value: Poly,
}

impl Tagged {
    pub fn new(tag: TensorTag, n: i64, value: Poly) -> Result<Self, FormError> {
        let w = tag.expected_weight(n);
        if !su2::is_weight_homogeneous(&value, w) {
            return Err(FormError::WeightMismatch { expected: w });
        }
        Ok(Tagged { tag, n, value })
    }

    pub fn zero(tag: TensorTag, n: i64) -> Self {
        Tagged { tag, n, value: Poly::zero() }
    }
}

/// The wedge isomorphism `Omega^{0,1} (x) Omega^{1,0} (x) E -> Omega^{1,1}
/// (x) E`. On fully collapsed values this is a retag; inverses compose to
/// the identity exactly.
pub fn mu(x: &Tagged) -> Result<Tagged, FormError> {
    match x.tag {
        TensorTag::W01W10E => Ok(Tagged { tag: TensorTag::W11E, ..x.clone() }),
        got => Err(FormError::TagMismatch { expected: TensorTag::W01W10E, got }),
    }
}

pub fn mu_inv(x: &Tagged) -> Result<Tagged, FormError> {
    match x.tag {
        TensorTag::W11E => Ok(Tagged { tag: TensorTag::W01W10E, ..x.clone() }),
        got => Err(FormError::TagMismatch { expected: TensorTag::W11E, got }),
    }
}
