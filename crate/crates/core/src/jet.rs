//! First jet modules of line bundles: the deformed left action, the lifted
//! holomorphic structure, the jet exact sequence, functoriality, curvature
//! of total connections, and the splitting-defect machinery.
//!
//! # Computational model
//!
//! A jet element is a pair `(e, eta)` with `e` of weight `n` and `eta` of
//! weight `n + 2` (the collapsed coefficient of `w+`). The left action is
//! the collapsed form of `a (e, eta) = (a e, da (x) e + a eta)`:
//!
//! ```text
//! a . (e, eta) = (a e, q^n (X_+ a) e + a eta)
//! ```
//!
//! Values in `Omega^{0,1} (x) J^1` are kept in *split coordinates*
//! `(t1, t2)` relative to the canonical left-module splitting
//! `(e, eta) -> (e, eta - X_+ e)` of the jet module. The mixed balanced
//! relations of the tensor product vanish in these coordinates, so maps
//! into `Omega^{0,1} (x) J^1` have well-defined componentwise values there.
//!
//! Maps of the shape `(del (x) id)` and `(id (x) nabla)` are not functions
//! of a collapsed tensor value alone; they are evaluated through an
//! explicit decomposition `v = sum_i f_i w (x) e_i` built from a unit
//! decomposition `sum_i w_i e_i = 1`. Two different decomposition rules are
//! carried through the code so that every quantity claimed to be
//! rule-independent is actually checked against both.

use crate::bundles::{DelConnection, DelbarConnection};
use crate::calculus::Calculus;
use crate::ncalg::Poly;
use crate::sample::weight_basis;
use crate::scalar::Scalar;
use crate::su2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JetError {
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("curvature is not a scalar multiple of the identity; residual on {word}: {residual}")]
    NonScalarCurvature { word: String, residual: String },
    #[error("morphism does not intertwine the holomorphic structures; residual: {0}")]
    NotHolomorphic(String),
}

/// Element of the first jet module of `L_n` in the naive coordinates
/// `(e, eta)`: `e` has weight `n`, `eta` has weight `n + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetElement {
    pub n: i64,
    pub e: Poly,
    pub eta: Poly,
}

impl JetElement {
    pub fn new(n: i64, e: Poly, eta: Poly) -> Result<Self, JetError> {
        if !su2::is_weight_homogeneous(&e, n) {
            return Err(JetError::WeightMismatch(format!("e must have weight {n}")));
        }
        if !su2::is_weight_homogeneous(&eta, n + 2) {
            return Err(JetError::WeightMismatch(format!(
                "eta must have weight {}",
                n + 2
            )));
        }
        Ok(JetElement { n, e, eta })
    }

    pub fn zero(n: i64) -> Self {
        JetElement { n, e: Poly::zero(), eta: Poly::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_zero() && self.eta.is_zero()
    }

    pub fn sub(&self, other: &Self) -> Self {
        JetElement {
            n: self.n,
            e: self.e.sub(&other.e),
            eta: self.eta.sub(&other.eta),
        }
    }
}

/// Element of `Omega^{0,1} (x) J^1(L_n)` in split coordinates:
/// `t1` has weight `n - 2` (the `Omega^{0,1} (x) E` leg) and `t2` has
/// weight `n` (the `Omega^{0,1} (x) Omega^{1,0} (x) E` leg relative to the
/// canonical splitting).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetForm01 {
    pub n: i64,
    pub t1: Poly,
    pub t2: Poly,
}

impl JetForm01 {
    pub fn zero(n: i64) -> Self {
        JetForm01 { n, t1: Poly::zero(), t2: Poly::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.t1.is_zero() && self.t2.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        JetForm01 {
            n: self.n,
            t1: self.t1.add(&other.t1),
            t2: self.t2.add(&other.t2),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        JetForm01 {
            n: self.n,
            t1: self.t1.sub(&other.t1),
            t2: self.t2.sub(&other.t2),
        }
    }
}

/// Which unit decomposition backs the tensor evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompRule {
    /// Nest new factors inside: U(m+1) built as (w w', e' e).
    Nested,
    /// Nest new factors outside: U(m+1) built as (w' w, e e').
    Mirrored,
}

/// Shared context for jet computations.
#[derive(Debug, Clone)]
pub struct JetContext {
    pub cal: Calculus,
}

impl JetContext {
    pub fn new() -> Self {
        JetContext { cal: Calculus::new() }
    }

    pub fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        self.cal.su2.presentation.mul_nf(x, y)
    }

    /// Pairs `(w_i, e_i)` with `sum_i w_i e_i = 1`, `w_i` of weight `-m`,
    /// `e_i` of weight `m`.
    pub fn unit_decomposition(&self, m: i64, rule: DecompRule) -> Vec<(Poly, Poly)> {
        if m == 0 {
            return vec![(Poly::one(), Poly::one())];
        }
        // Weight 1: 1 = a a* + q^2 c c*. Weight -1: 1 = a* a + c* c.
        let step: Vec<(Poly, Poly)> = if m > 0 {
            vec![
                (Poly::gen(crate::ncalg::GEN_A), Poly::gen(crate::ncalg::GEN_AS)),
                (
                    Poly::gen(crate::ncalg::GEN_C).scale(&Scalar::q()),
                    Poly::gen(crate::ncalg::GEN_CS).scale(&Scalar::q()),
                ),
            ]
        } else {
            vec![
                (Poly::gen(crate::ncalg::GEN_AS), Poly::gen(crate::ncalg::GEN_A)),
                (Poly::gen(crate::ncalg::GEN_CS), Poly::gen(crate::ncalg::GEN_C)),
            ]
        };
        let prev = self.unit_decomposition(m - m.signum(), rule);
        let mut out = Vec::with_capacity(prev.len() * 2);
        for (w, e) in &prev {
            for (w1, e1) in &step {
                match rule {
                    DecompRule::Nested => {
                        out.push((self.mul(w, w1), self.mul(e1, e)));
                    }
                    DecompRule::Mirrored => {
                        out.push((self.mul(w1, w), self.mul(e, e1)));
                    }
                }
            }
        }
        out
    }

    /// Decomposes an `Omega^{0,1} (x) L_n` value `A` (weight `n - 2`) as
    /// `sum_i f_i w- (x) e_i` with `f_i` of weight -2, collapsing back to
    /// `A = sum_i f_i q^n e_i`.
    pub fn decompose01(&self, a: &Poly, n: i64, rule: DecompRule) -> Vec<(Poly, Poly)> {
        let scale = Scalar::s_pow(-2 * n);
        self.unit_decomposition(n, rule)
            .into_iter()
            .map(|(w, e)| (self.mul(&a.scale(&scale), &w), e))
            .collect()
    }

    /// Same for `Omega^{1,0} (x) L_n` values (weight `n + 2`, `f_i` of
    /// weight +2).
    pub fn decompose10(&self, b: &Poly, n: i64, rule: DecompRule) -> Vec<(Poly, Poly)> {
        self.decompose01(b, n, rule)
    }

    /// `(del (x) id)` on an `Omega^{0,1} (x) E` value, through a
    /// decomposition: `sum_i del(f_i w-) (x) e_i`, collapsed into the
    /// `Omega^{1,1} (x) E` value `-q^{2n+2} sum_i (X_+ f_i) e_i`.
    pub fn del_tensor_id(&self, a: &Poly, n: i64, rule: DecompRule) -> Poly {
        let mut acc = Poly::zero();
        for (f, e) in self.decompose01(a, n, rule) {
            acc = acc.add(&self.mul(&self.cal.xplus(&f), &e));
        }
        acc.scale(&Scalar::q_pow(2 * n + 2)).neg()
    }

    /// `(delbar (x) id)` on an `Omega^{1,0} (x) E` value: collapsed value
    /// `q^{2n} sum_i (X_- g_i) e_i`.
    pub fn delbar_tensor_id(&self, b: &Poly, n: i64, rule: DecompRule) -> Poly {
        let mut acc = Poly::zero();
        for (g, e) in self.decompose10(b, n, rule) {
            acc = acc.add(&self.mul(&self.cal.xminus(&g), &e));
        }
        acc.scale(&Scalar::q_pow(2 * n))
    }

    /// `(wedge (x) id) (id (x) conn01)` on an `Omega^{1,0} (x) E` value:
    /// `-q^n sum_i g_i conn01(e_i)`.
    pub fn wedge_id_conn01(
        &self,
        b: &Poly,
        n: i64,
        conn01: &DelbarConnection,
        rule: DecompRule,
    ) -> Poly {
        let mut acc = Poly::zero();
        for (g, e) in self.decompose10(b, n, rule) {
            acc = acc.add(&self.mul(&g, &conn01.apply(&self.cal, &e)));
        }
        acc.scale(&Scalar::q_pow(n)).neg()
    }

    /// `(mu (x) id) (id (x) conn10)` on an `Omega^{0,1} (x) E` value:
    /// `q^{n+2} sum_i f_i conn10(e_i)`.
    pub fn mu_id_conn10(
        &self,
        a: &Poly,
        n: i64,
        conn10: &DelConnection,
        rule: DecompRule,
    ) -> Poly {
        let mut acc = Poly::zero();
        for (f, e) in self.decompose01(a, n, rule) {
            acc = acc.add(&self.mul(&f, &conn10.apply(&self.cal, &e)));
        }
        acc.scale(&Scalar::q_pow(n + 2))
    }

    /// Deformed left action on the jet:
    /// `a . (e, eta) = (a e, q^n (X_+ a) e + a eta)`.
    pub fn jet_left_action(&self, a: &Poly, j: &JetElement) -> JetElement {
        assert!(su2::is_weight_homogeneous(a, 0), "jet action needs weight-0 a");
        let n = j.n;
        JetElement {
            n,
            e: self.mul(a, &j.e),
            eta: self
                .mul(&self.cal.xplus(a), &j.e)
                .scale(&Scalar::s_pow(2 * n))
                .add(&self.mul(a, &j.eta)),
        }
    }

    /// Split coordinate of a jet: `eta_tilde = eta - X_+ e` relative to the
    /// canonical (1,0)-connection.
    pub fn eta_split(&self, j: &JetElement) -> Poly {
        j.eta.sub(&self.cal.xplus(&j.e))
    }

    /// The map `D_tilde` lifted from `conn01` on the `Omega^{1,0} (x) E`
    /// leg: `u -> X_- u + u g`. Well defined on collapsed values.
    pub fn dtilde(&self, conn01: &DelbarConnection, u: &Poly) -> Poly {
        let base = self.cal.xminus(u);
        if conn01.perturbation.is_zero() {
            base
        } else {
            base.add(&self.mul(u, &conn01.perturbation))
        }
    }

    /// The lifted holomorphic structure on the jet, in split coordinates.
    ///
    /// Assembled literally as `(conn01 e, beta(e) + dtilde(eta) - psi(conn01 e))`
    /// where `beta` and `psi` are the rule-carrying tensor maps; their
    /// rule-dependent parts cancel exactly, which is checked in the tests
    /// by evaluating under both rules.
    pub fn nabla_j(
        &self,
        conn01: &DelbarConnection,
        j: &JetElement,
        rule: DecompRule,
    ) -> JetForm01 {
        let n = j.n;
        let a = conn01.apply(&self.cal, &j.e);
        let beta = self.del_tensor_id(&a, n, rule);
        let dt = self.dtilde(conn01, &j.eta);
        let psi = self.mu_id_conn10(&a, n, &crate::bundles::nabla10_canonical(n), rule);
        JetForm01 {
            n,
            t1: a,
            t2: beta.add(&dt).sub(&psi),
        }
    }

    /// Left action of a weight-0 element on `Omega^{0,1} (x) J^1` in split
    /// coordinates (componentwise, by left multiplication).
    pub fn jetform_left(&self, a: &Poly, jf: &JetForm01) -> JetForm01 {
        JetForm01 {
            n: jf.n,
            t1: self.mul(a, &jf.t1),
            t2: self.mul(a, &jf.t2),
        }
    }

    /// `delbar a (x) j` as an element of `Omega^{0,1} (x) J^1` in split
    /// coordinates.
    pub fn delbar_tensor_jet(&self, a: &Poly, j: &JetElement) -> JetForm01 {
        let n = j.n;
        let xa = self.cal.xminus(a);
        JetForm01 {
            n,
            t1: self.mul(&xa, &j.e).scale(&Scalar::s_pow(2 * n)),
            t2: self
                .mul(&xa, &self.eta_split(j))
                .scale(&Scalar::s_pow(2 * (n + 2))),
        }
    }

    /// Inclusion `Omega^{1,0} (x) E -> J^1` and the projection to `E`.
    pub fn include(&self, n: i64, xi: &Poly) -> JetElement {
        JetElement { n, e: Poly::zero(), eta: xi.clone() }
    }

    pub fn project(&self, j: &JetElement) -> Poly {
        j.e.clone()
    }

    /// `(id (x) include)` on an `Omega^{0,1} (x) Omega^{1,0} (x) E` value.
    pub fn id_include(&self, n: i64, v: &Poly) -> JetForm01 {
        JetForm01 { n, t1: Poly::zero(), t2: v.clone() }
    }

    /// `(id (x) project)` on a split-coordinate jet form.
    pub fn id_project(&self, jf: &JetForm01) -> Poly {
        jf.t1.clone()
    }
}

impl Default for JetContext {
    fn default() -> Self {
        Self::new()
    }
}

/// Curvature of the total connection by the four-term formula
/// `(del(x)id) conn01 + (delbar(x)id) conn10 - (wedge(x)id)(id(x)conn01) conn10
///  - (mu(x)id)(id(x)conn10) conn01`, as an `Omega^{1,1} (x) E` value.
pub fn total_curvature_formula(
    ctx: &JetContext,
    conn10: &DelConnection,
    conn01: &DelbarConnection,
    e: &Poly,
    rule: DecompRule,
) -> Poly {
    let n = conn10.n;
    let a = conn01.apply(&ctx.cal, e);
    let b = conn10.apply(&ctx.cal, e);
    ctx.del_tensor_id(&a, n, rule)
        .add(&ctx.delbar_tensor_id(&b, n, rule))
        .sub(&ctx.wedge_id_conn01(&b, n, conn01, rule))
        .sub(&ctx.mu_id_conn10(&a, n, conn10, rule))
}

/// Curvature as the direct composition: extend the total connection to
/// one-form values by `w (x) e -> dw (x) e - w ^ nabla e` and compose.
pub fn total_curvature_composition(
    ctx: &JetContext,
    conn10: &DelConnection,
    conn01: &DelbarConnection,
    e: &Poly,
    rule: DecompRule,
) -> Poly {
    let n = conn10.n;
    let a = conn01.apply(&ctx.cal, e);
    let b = conn10.apply(&ctx.cal, e);
    let mut acc = Poly::zero();
    // w- part: d(f w-) (x) e - f w- ^ (w+ part of nabla e)
    for (f, ei) in ctx.decompose01(&a, n, rule) {
        let dterm = ctx
            .mul(&ctx.cal.xplus(&f), &ei)
            .scale(&Scalar::q_pow(2 * n + 2))
            .neg();
        let wterm = ctx
            .mul(&f, &conn10.apply(&ctx.cal, &ei))
            .scale(&Scalar::q_pow(n + 2));
        acc = acc.add(&dterm).sub(&wterm);
    }
    // w+ part: d(g w+) (x) e - g w+ ^ (w- part of nabla e)
    for (g, ei) in ctx.decompose10(&b, n, rule) {
        let dterm = ctx.mul(&ctx.cal.xminus(&g), &ei).scale(&Scalar::q_pow(2 * n));
        let wterm = ctx
            .mul(&g, &conn01.apply(&ctx.cal, &ei))
            .scale(&Scalar::q_pow(n))
            .neg();
        acc = acc.add(&dterm).sub(&wterm);
    }
    acc
}

/// Extracts the constant `kappa` with `Theta(e) = kappa (w- ^ w+) (x) e`
/// for the canonical pair on `L_n`. The collapsed value of
/// `kappa (w-^w+) (x) e` is `kappa q^{2n} e`.
pub fn curvature_line_bundle(ctx: &JetContext, n: i64) -> Result<Scalar, JetError> {
    let conn10 = crate::bundles::nabla10_canonical(n);
    let conn01 = crate::bundles::nabla01_std(n);
    let maxlen = n.unsigned_abs().max(2) as usize;
    let basis = weight_basis(n, maxlen);
    let mut kappa: Option<Scalar> = None;
    for w in &basis {
        let e = Poly::from_term(w.clone(), Scalar::one());
        let theta = total_curvature_formula(ctx, &conn10, &conn01, &e, DecompRule::Nested);
        // theta must equal (kappa q^{2n}) e exactly
        let coeff = theta.coeff(w);
        let residual = theta.sub(&e.scale(&coeff));
        if !residual.is_zero() {
            return Err(JetError::NonScalarCurvature {
                word: w.to_string(),
                residual: residual.to_string(),
            });
        }
        let k = coeff.mul(&Scalar::s_pow(-4 * n));
        match &kappa {
            None => kappa = Some(k),
            Some(prev) if *prev != k => {
                return Err(JetError::NonScalarCurvature {
                    word: w.to_string(),
                    residual: format!("coefficient {k} differs from {prev}"),
                })
            }
            _ => {}
        }
    }
    Ok(kappa.expect("weight basis is nonempty"))
}

/// The canonical splitting candidate `s(e) = (e, conn10 e)` and its
/// holomorphicity defect, evaluated on the truncated weight basis.
#[derive(Debug, Clone)]
pub struct SplittingDefect {
    pub n: i64,
    /// Defect values `delta(e)` on the spanning set, in split coordinates.
    pub values: Vec<(Poly, JetForm01)>,
    pub is_zero: bool,
}

pub fn splitting_and_defect(
    ctx: &JetContext,
    conn10: &DelConnection,
    conn01: &DelbarConnection,
    n: i64,
    maxlen: usize,
) -> SplittingDefect {
    let basis = weight_basis(n, maxlen);
    let mut values = Vec::new();
    for w in &basis {
        let e = Poly::from_term(w.clone(), Scalar::one());
        let s = JetElement {
            n,
            e: e.clone(),
            eta: conn10.apply(&ctx.cal, &e),
        };
        let lhs = ctx.nabla_j(conn01, &s, DecompRule::Nested);
        // (id (x) s) conn01(e) in split coordinates: the splitting jets
        // (e_i, conn10 e_i) have split coordinate e_i p, so the second leg
        // collects q^2 A p for perturbation p.
        let a = conn01.apply(&ctx.cal, &e);
        let rhs = JetForm01 {
            n,
            t1: a.clone(),
            t2: ctx
                .mul(&a, &conn10.perturbation)
                .scale(&Scalar::q_pow(2)),
        };
        values.push((e, lhs.sub(&rhs)));
    }
    let is_zero = values.iter().all(|(_, d)| d.is_zero());
    SplittingDefect { n, values, is_zero }
}

/// Verifies the jet sequence at the truncation: composition, degreewise
/// exactness of the inclusion/projection pair, both intertwiner
/// identities, and the direct-sum decomposition of the truncated space of
/// holomorphic sections. Returns one entry per check with the first
/// offending residual.
pub fn jet_sequence_check(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    n: i64,
    maxlen: usize,
) -> Vec<crate::report::Check> {
    use crate::report::Check;
    let mut checks = Vec::new();
    let e_basis = weight_basis(n, maxlen.max(n.unsigned_abs() as usize));
    let eta_basis = weight_basis(n + 2, maxlen.max((n + 2).unsigned_abs() as usize));

    // project . include = 0 and the degreewise exactness bookkeeping:
    // include is injective on the basis, project surjective, and the jet
    // splits as e-leg plus eta-leg, so im(include) = ker(project) holds
    // degreewise iff the dimensions add up.
    let mut comp = None;
    for w in &eta_basis {
        let xi = Poly::from_term(w.clone(), Scalar::one());
        let j = ctx.include(n, &xi);
        if !ctx.project(&j).is_zero() {
            comp = Some(format!("project(include({w})) != 0"));
            break;
        }
        if j.is_zero() {
            comp = Some(format!("include kills {w}"));
            break;
        }
    }
    checks.push(Check::from_residual("sequence-composition", comp));

    let mut inter = None;
    let mut rng = crate::sample::Lcg::new(0xBEE5 ^ (n as u64).wrapping_mul(0x9E3779B97F4A7C15));
    for _ in 0..20 {
        let xi = crate::sample::random_weight_poly(&mut rng, n + 2, maxlen, 2);
        let lhs = ctx.nabla_j(conn01, &ctx.include(n, &xi), DecompRule::Nested);
        let rhs = ctx.id_include(n, &ctx.dtilde(conn01, &xi));
        let r1 = lhs.sub(&rhs);
        if !r1.is_zero() {
            inter = Some(format!("include intertwiner: ({}, {})", r1.t1, r1.t2));
            break;
        }
        let j = JetElement {
            n,
            e: crate::sample::random_weight_poly(&mut rng, n, maxlen, 2),
            eta: xi,
        };
        let r2 = ctx
            .id_project(&ctx.nabla_j(conn01, &j, DecompRule::Nested))
            .sub(&conn01.apply(&ctx.cal, &ctx.project(&j)));
        if !r2.is_zero() {
            inter = Some(format!("project intertwiner: {r2}"));
            break;
        }
    }
    checks.push(Check::from_residual("sequence-intertwiners", inter));

    // Truncated holomorphic sections of the jet split as the sections of
    // the two legs (the lifted structure is upper triangular over the
    // splitting; at n = 0 the off-diagonal term vanishes identically).
    let e_imgs: Vec<Poly> = e_basis
        .iter()
        .map(|w| conn01.apply(&ctx.cal, &Poly::from_term(w.clone(), Scalar::one())))
        .collect();
    let eta_imgs: Vec<Poly> = eta_basis
        .iter()
        .map(|w| ctx.dtilde(conn01, &Poly::from_term(w.clone(), Scalar::one())))
        .collect();
    let e_ker = crate::bundles::kernel_in_basis(&e_basis, &e_imgs).len();
    let eta_ker = crate::bundles::kernel_in_basis(&eta_basis, &eta_imgs).len();
    let jet_ker = jet_kernel_dim(ctx, conn01, &e_basis, &eta_basis);
    let sections_ok = if n == 0 { jet_ker == e_ker + eta_ker } else { jet_ker <= e_ker + eta_ker };
    checks.push(Check::from_residual(
        format!("sections-split-e{e_ker:02}-eta{eta_ker:02}-jet{jet_ker:02}"),
        if sections_ok {
            None
        } else {
            Some("kernel dimensions do not add up".into())
        },
    ));
    checks
}


fn jet_kernel_dim(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    e_basis: &[crate::ncalg::Word],
    eta_basis: &[crate::ncalg::Word],
) -> usize {
    use std::collections::BTreeMap;
    let n = conn01.n;
    let mut images: Vec<(Poly, Poly)> = Vec::new();
    for w in e_basis {
        let j = JetElement {
            n,
            e: Poly::from_term(w.clone(), Scalar::one()),
            eta: Poly::zero(),
        };
        let jf = ctx.nabla_j(conn01, &j, DecompRule::Nested);
        images.push((jf.t1, jf.t2));
    }
    for w in eta_basis {
        let jf = ctx.nabla_j(
            conn01,
            &ctx.include(n, &Poly::from_term(w.clone(), Scalar::one())),
            DecompRule::Nested,
        );
        images.push((jf.t1, jf.t2));
    }
    let mut rows: BTreeMap<(usize, crate::ncalg::Word), usize> = BTreeMap::new();
    for (t1, t2) in &images {
        for (w, _) in t1.terms() {
            let next = rows.len();
            rows.entry((0, w.clone())).or_insert(next);
        }
        for (w, _) in t2.terms() {
            let next = rows.len();
            rows.entry((1, w.clone())).or_insert(next);
        }
    }
    let mut m = vec![vec![Scalar::zero(); images.len()]; rows.len().max(1)];
    for (col, (t1, t2)) in images.iter().enumerate() {
        for (w, c) in t1.terms() {
            m[rows[&(0, w.clone())]][col] = c.clone();
        }
        for (w, c) in t2.terms() {
            m[rows[&(1, w.clone())]][col] = c.clone();
        }
    }
    crate::linalg::kernel(m, images.len()).len()
}

/// Morphism `L_n -> L_m` given by right multiplication with a fixed
/// element `h` of weight `m - n`.
#[derive(Debug, Clone)]
pub struct BundleMorphism {
    pub n: i64,
    pub m: i64,
    pub h: Poly,
}

impl BundleMorphism {
    pub fn new(n: i64, m: i64, h: Poly) -> Result<Self, JetError> {
        if !su2::is_weight_homogeneous(&h, m - n) {
            return Err(JetError::WeightMismatch(format!(
                "h must have weight {}",
                m - n
            )));
        }
        Ok(BundleMorphism { n, m, h })
    }

    pub fn apply(&self, ctx: &JetContext, e: &Poly) -> Poly {
        ctx.mul(e, &self.h)
    }

    /// `(id^k (x) phi)` on a collapsed value with `k` symbols left of the
    /// module leg: `v -> q^{k (m-n)} v h`.
    pub fn tensor_apply(&self, ctx: &JetContext, k: i64, v: &Poly) -> Poly {
        ctx.mul(v, &self.h).scale(&Scalar::s_pow(2 * k * (self.m - self.n)))
    }

    /// Intertwining residual `(id (x) phi) conn01_src - conn01_dst phi`
    /// on a section; must vanish for a holomorphic morphism.
    pub fn intertwining_residual(
        &self,
        ctx: &JetContext,
        src: &DelbarConnection,
        dst: &DelbarConnection,
        e: &Poly,
    ) -> Poly {
        let lhs = self.tensor_apply(ctx, 1, &src.apply(&ctx.cal, e));
        let rhs = dst.apply(&ctx.cal, &self.apply(ctx, e));
        lhs.sub(&rhs)
    }

    /// Checked constructor of the jet-level map; rejects non-intertwining
    /// morphisms with the offending residual.
    pub fn verify_holomorphic(
        &self,
        ctx: &JetContext,
        src: &DelbarConnection,
        dst: &DelbarConnection,
        maxlen: usize,
    ) -> Result<(), JetError> {
        for w in weight_basis(self.n, maxlen) {
            let e = Poly::from_term(w, Scalar::one());
            let r = self.intertwining_residual(ctx, src, dst, &e);
            if !r.is_zero() {
                return Err(JetError::NotHolomorphic(r.to_string()));
            }
        }
        Ok(())
    }

    /// `J^1 phi (e, eta) = (phi e, (id (x) phi) eta)`.
    pub fn jet_apply(&self, ctx: &JetContext, j: &JetElement) -> JetElement {
        JetElement {
            n: self.m,
            e: self.apply(ctx, &j.e),
            eta: self.tensor_apply(ctx, 1, &j.eta),
        }
    }

    /// `(id (x) J^1 phi)` on split-coordinate jet forms. Right
    /// multiplication by `h` does not preserve the canonical splitting:
    /// `J^1 phi` maps the splitting jet `(e, X_+ e)` to a jet whose split
    /// coordinate is `-e X_+ h`, so the transport carries the correction
    /// `-q^{m-n+2} t1 (X_+ h)` on the second leg.
    pub fn jetform_apply(&self, ctx: &JetContext, jf: &JetForm01) -> JetForm01 {
        let correction = ctx
            .mul(&jf.t1, &ctx.cal.xplus(&self.h))
            .scale(&Scalar::q_pow(self.m - self.n + 2))
            .neg();
        JetForm01 {
            n: self.m,
            t1: self.tensor_apply(ctx, 1, &jf.t1),
            t2: self.tensor_apply(ctx, 2, &jf.t2).add(&correction),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{nabla01_std, nabla10_canonical, DelConnection};
    use crate::parser::parse;
    use crate::sample::{self, Lcg};

    fn ctx() -> JetContext {
        JetContext::new()
    }

    fn nf(s: &str) -> Poly {
        Calculus::new().su2.presentation.normal_form(&parse(s).unwrap())
    }

    fn random_jet(rng: &mut Lcg, n: i64, maxlen: usize) -> JetElement {
        JetElement {
            n,
            e: sample::random_weight_poly(rng, n, maxlen, 2),
            eta: sample::random_weight_poly(rng, n + 2, maxlen, 2),
        }
    }

    #[test]
    fn unit_decompositions_sum_to_one() {
        let ctx = ctx();
        for m in -3..=3i64 {
            for rule in [DecompRule::Nested, DecompRule::Mirrored] {
                let dec = ctx.unit_decomposition(m, rule);
                let mut acc = Poly::zero();
                for (w, e) in &dec {
                    assert!(su2::is_weight_homogeneous(w, -m));
                    assert!(su2::is_weight_homogeneous(e, m));
                    acc = acc.add(&ctx.mul(w, e));
                }
                assert_eq!(acc, Poly::one(), "m = {m}, {rule:?}");
            }
        }
    }

    #[test]
    fn decompositions_collapse_back() {
        let ctx = ctx();
        let mut rng = Lcg::new(31);
        for n in -2..=2i64 {
            for _ in 0..10 {
                let a = sample::random_weight_poly(&mut rng, n - 2, 3, 2);
                for rule in [DecompRule::Nested, DecompRule::Mirrored] {
                    let mut acc = Poly::zero();
                    for (f, e) in ctx.decompose01(&a, n, rule) {
                        assert!(su2::is_weight_homogeneous(&f, -2));
                        acc = acc.add(&ctx.mul(&f, &e).scale(&Scalar::s_pow(2 * n)));
                    }
                    assert_eq!(acc, a);
                }
            }
        }
    }

    #[test]
    fn jet_left_action_unit_and_constants() {
        let ctx = ctx();
        let mut rng = Lcg::new(32);
        let j = random_jet(&mut rng, 1, 3);
        assert_eq!(ctx.jet_left_action(&Poly::one(), &j), j);
        // constants have zero derivative: 3 . (e, 0) = (3 e, 0)
        let j0 = JetElement { n: 1, eta: Poly::zero(), ..j.clone() };
        let acted = ctx.jet_left_action(&Poly::scalar(Scalar::from_int(3)), &j0);
        assert_eq!(acted.e, j0.e.scale(&Scalar::from_int(3)));
        assert!(acted.eta.is_zero());
    }

    #[test]
    fn jet_left_action_is_associative() {
        let ctx = ctx();
        for n in -2..=2i64 {
            let mut rng = Lcg::new((330 + n) as u64);
            for _ in 0..30 {
                let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let b = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let j = random_jet(&mut rng, n, 2);
                let ab = ctx.mul(&a, &b);
                let lhs = ctx.jet_left_action(&ab, &j);
                let rhs = ctx.jet_left_action(&a, &ctx.jet_left_action(&b, &j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dtilde_is_a_connection_on_the_kernel_leg() {
        // D(a eta) = delbar a (x) eta + a D(eta), the collapsed version.
        let ctx = ctx();
        let mut rng = Lcg::new(34);
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            for _ in 0..50 {
                let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let u = sample::random_weight_poly(&mut rng, n + 2, 3, 2);
                let lhs = ctx.dtilde(&conn01, &ctx.mul(&a, &u));
                let rhs = ctx
                    .mul(&ctx.cal.xminus(&a), &u)
                    .scale(&Scalar::s_pow(2 * (n + 2)))
                    .add(&ctx.mul(&a, &ctx.dtilde(&conn01, &u)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dtilde_vanishes_on_zero() {
        let ctx = ctx();
        assert!(ctx.dtilde(&nabla01_std(0), &Poly::zero()).is_zero());
    }

    #[test]
    fn d_expand_identity() {
        // D(da (x) e) = delbar del a (x) e - del a ^ conn01(e), checked as
        // collapsed values term by term.
        let ctx = ctx();
        let mut rng = Lcg::new(35);
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            for _ in 0..10 {
                let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let e = sample::random_weight_poly(&mut rng, n, 2, 2);
                // collapsed da (x) e
                let da_e = ctx
                    .mul(&ctx.cal.xplus(&a), &e)
                    .scale(&Scalar::s_pow(2 * n));
                let lhs = ctx.dtilde(&conn01, &da_e);
                // delbar del a (x) e collapses to q^{2n} (X_- X_+ a) e
                let t1 = ctx
                    .mul(&ctx.cal.xminus(&ctx.cal.xplus(&a)), &e)
                    .scale(&Scalar::s_pow(4 * n));
                // del a ^ conn01 e collapses to -q^n (X_+ a)(conn01 e)
                let t2 = ctx
                    .mul(&ctx.cal.xplus(&a), &conn01.apply(&ctx.cal, &e))
                    .scale(&Scalar::s_pow(2 * n))
                    .neg();
                assert_eq!(lhs, t1.sub(&t2));
            }
        }
    }

    #[test]
    fn nabla_j_is_rule_independent() {
        let ctx = ctx();
        let mut rng = Lcg::new(36);
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            for _ in 0..20 {
                let j = random_jet(&mut rng, n, 3);
                let x = ctx.nabla_j(&conn01, &j, DecompRule::Nested);
                let y = ctx.nabla_j(&conn01, &j, DecompRule::Mirrored);
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn nabla_j_closed_form() {
        // In split coordinates the lift is
        // (A, -q^2 X_+ A + dtilde(eta)) with A = conn01(e).
        let ctx = ctx();
        let mut rng = Lcg::new(37);
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            for _ in 0..20 {
                let j = random_jet(&mut rng, n, 3);
                let got = ctx.nabla_j(&conn01, &j, DecompRule::Nested);
                let a = conn01.apply(&ctx.cal, &j.e);
                let expect = JetForm01 {
                    n,
                    t1: a.clone(),
                    t2: ctx
                        .cal
                        .xplus(&a)
                        .scale(&Scalar::q_pow(2))
                        .neg()
                        .add(&ctx.dtilde(&conn01, &j.eta)),
                };
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn nabla_j_leibniz() {
        let ctx = ctx();
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            let mut rng = Lcg::new((380 + n) as u64);
            for _ in 0..50 {
                let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let j = random_jet(&mut rng, n, 2);
                let lhs = ctx.nabla_j(&conn01, &ctx.jet_left_action(&a, &j), DecompRule::Nested);
                let rhs = ctx
                    .jetform_left(&a, &ctx.nabla_j(&conn01, &j, DecompRule::Nested))
                    .add(&ctx.delbar_tensor_jet(&a, &j));
                assert_eq!(lhs, rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn nabla_j_leibniz_with_perturbation() {
        let ctx = ctx();
        let mut rng = Lcg::new(39);
        for _ in 0..10 {
            let g = sample::random_weight_poly(&mut rng, -2, 2, 2);
            let conn01 = DelbarConnection::perturbed(0, g).unwrap();
            for _ in 0..10 {
                let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let j = random_jet(&mut rng, 0, 2);
                let lhs = ctx.nabla_j(&conn01, &ctx.jet_left_action(&a, &j), DecompRule::Nested);
                let rhs = ctx
                    .jetform_left(&a, &ctx.nabla_j(&conn01, &j, DecompRule::Nested))
                    .add(&ctx.delbar_tensor_jet(&a, &j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn jet_sequence_intertwiners() {
        let ctx = ctx();
        let mut rng = Lcg::new(40);
        for n in -2..=2i64 {
            let conn01 = nabla01_std(n);
            for _ in 0..20 {
                // nabla_J . include = (id (x) include) . dtilde
                let xi = sample::random_weight_poly(&mut rng, n + 2, 3, 2);
                let lhs = ctx.nabla_j(&conn01, &ctx.include(n, &xi), DecompRule::Nested);
                let rhs = ctx.id_include(n, &ctx.dtilde(&conn01, &xi));
                assert_eq!(lhs, rhs);
                // (id (x) project) . nabla_J = conn01 . project
                let j = random_jet(&mut rng, n, 3);
                let lhs = ctx.id_project(&ctx.nabla_j(&conn01, &j, DecompRule::Nested));
                let rhs = conn01.apply(&ctx.cal, &ctx.project(&j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn curvature_table_matches_qint_formula() {
        let ctx = ctx();
        for n in -4..=4i64 {
            let kappa = curvature_line_bundle(&ctx, n).unwrap();
            let expect = Scalar::q_pow(-n + 1).mul(&Scalar::qint(n)).neg();
            assert_eq!(kappa, expect, "n = {n}");
        }
    }

    #[test]
    fn curvature_vanishes_iff_n_zero() {
        let ctx = ctx();
        for n in -4..=4i64 {
            let kappa = curvature_line_bundle(&ctx, n).unwrap();
            assert_eq!(kappa.is_zero(), n == 0);
        }
    }

    #[test]
    fn curvature_two_routes_agree_across_rules() {
        let ctx = ctx();
        for n in -2..=2i64 {
            let conn10 = nabla10_canonical(n);
            let conn01 = nabla01_std(n);
            let mut rng = Lcg::new((410 + n) as u64);
            for _ in 0..20 {
                let e = sample::random_weight_poly(&mut rng, n, 3, 2);
                let a = total_curvature_formula(&ctx, &conn10, &conn01, &e, DecompRule::Nested);
                let b =
                    total_curvature_composition(&ctx, &conn10, &conn01, &e, DecompRule::Mirrored);
                assert_eq!(a, b, "n = {n}");
            }
        }
    }

    #[test]
    fn curvature_is_left_linear() {
        let ctx = ctx();
        let conn10 = nabla10_canonical(1);
        let conn01 = nabla01_std(1);
        let mut rng = Lcg::new(42);
        for _ in 0..30 {
            let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let e = sample::random_weight_poly(&mut rng, 1, 2, 2);
            let lhs = total_curvature_formula(&ctx, &conn10, &conn01, &ctx.mul(&a, &e), DecompRule::Nested);
            let rhs = ctx.mul(&a, &total_curvature_formula(&ctx, &conn10, &conn01, &e, DecompRule::Nested));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn defect_vanishes_exactly_for_the_flat_bundle() {
        let ctx = ctx();
        for n in -3..=3i64 {
            let d = splitting_and_defect(
                &ctx,
                &nabla10_canonical(n),
                &nabla01_std(n),
                n,
                n.unsigned_abs().max(2) as usize,
            );
            assert_eq!(d.is_zero, n == 0, "n = {n}");
        }
    }

    #[test]
    fn defect_matches_curvature_for_perturbed_connections() {
        let ctx = ctx();
        let mut rng = Lcg::new(43);
        for _ in 0..20 {
            let p = sample::random_weight_poly(&mut rng, 2, 2, 2);
            let conn10 = DelConnection::perturbed(0, p).unwrap();
            let conn01 = nabla01_std(0);
            let d = splitting_and_defect(&ctx, &conn10, &conn01, 0, 2);
            let theta_zero = weight_basis(0, 2).iter().all(|w| {
                let e = Poly::from_term(w.clone(), Scalar::one());
                total_curvature_formula(&ctx, &conn10, &conn01, &e, DecompRule::Nested).is_zero()
            });
            assert_eq!(d.is_zero, theta_zero);
        }
    }

    #[test]
    fn splitting_section_is_left_linear() {
        let ctx = ctx();
        let conn10 = nabla10_canonical(2);
        let mut rng = Lcg::new(44);
        for _ in 0..20 {
            let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let e = sample::random_weight_poly(&mut rng, 2, 2, 2);
            let s = |e: &Poly| JetElement {
                n: 2,
                e: e.clone(),
                eta: conn10.apply(&ctx.cal, e),
            };
            assert_eq!(s(&ctx.mul(&x, &e)), ctx.jet_left_action(&x, &s(&e)));
        }
    }

    #[test]
    fn functor_identity_and_composition() {
        let ctx = ctx();
        let id = BundleMorphism::new(1, 1, Poly::one()).unwrap();
        let mut rng = Lcg::new(45);
        let j = random_jet(&mut rng, 1, 2);
        assert_eq!(id.jet_apply(&ctx, &j), j);
        // composition of right multiplications by holomorphic sections;
        // a and c are annihilated by X_-.
        let phi = BundleMorphism::new(1, 0, nf("a")).unwrap();
        let psi = BundleMorphism::new(0, -1, nf("c")).unwrap();
        let comp = BundleMorphism::new(1, -1, ctx.mul(&nf("a"), &nf("c"))).unwrap();
        for _ in 0..10 {
            let j = random_jet(&mut rng, 1, 2);
            assert_eq!(
                psi.jet_apply(&ctx, &phi.jet_apply(&ctx, &j)),
                comp.jet_apply(&ctx, &j)
            );
        }
    }

    #[test]
    fn functor_morphisms_intertwine_and_commute_with_the_ladder() {
        let ctx = ctx();
        let phi = BundleMorphism::new(1, 0, nf("a")).unwrap();
        let src01 = nabla01_std(1);
        let dst01 = nabla01_std(0);
        phi.verify_holomorphic(&ctx, &src01, &dst01, 3).unwrap();
        let mut rng = Lcg::new(46);
        for _ in 0..20 {
            let j = random_jet(&mut rng, 1, 2);
            // ladder: project . J phi = phi . project
            assert_eq!(
                ctx.project(&phi.jet_apply(&ctx, &j)),
                phi.apply(&ctx, &ctx.project(&j))
            );
            // ladder: J phi . include = include . (id (x) phi)
            let xi = sample::random_weight_poly(&mut rng, 3, 2, 2);
            assert_eq!(
                phi.jet_apply(&ctx, &ctx.include(1, &xi)),
                ctx.include(0, &phi.tensor_apply(&ctx, 1, &xi))
            );
            // holomorphicity of the lifted map
            let lhs = phi.jetform_apply(&ctx, &ctx.nabla_j(&src01, &j, DecompRule::Nested));
            let rhs = ctx.nabla_j(&dst01, &phi.jet_apply(&ctx, &j), DecompRule::Nested);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn functor_rejects_non_intertwining_morphisms() {
        let ctx = ctx();
        // a* is not annihilated by X_-, so right multiplication by it does
        // not intertwine the standard structures.
        let phi = BundleMorphism::new(0, 1, nf("a*")).unwrap();
        let err = phi.verify_holomorphic(&ctx, &nabla01_std(0), &nabla01_std(1), 2);
        assert!(matches!(err, Err(JetError::NotHolomorphic(_))));
    }

    #[test]
    fn sections_of_the_jet_split_at_n_zero() {
        // H^0 of the jet at n = 0 is ker(conn01) + ker(dtilde) at the
        // truncation, computed by the kernel oracle on the pair basis.
        let ctx = ctx();
        let conn01 = nabla01_std(0);
        let maxlen = 3usize;
        let e_basis = weight_basis(0, maxlen);
        let eta_basis = weight_basis(2, maxlen);
        // kernel of nabla_J on the joint basis
        let mut images = Vec::new();
        let mut joint = Vec::new();
        for w in &e_basis {
            let j = JetElement {
                n: 0,
                e: Poly::from_term(w.clone(), Scalar::one()),
                eta: Poly::zero(),
            };
            let jf = ctx.nabla_j(&conn01, &j, DecompRule::Nested);
            joint.push(("e", w.clone()));
            images.push((jf.t1, jf.t2));
        }
        for w in &eta_basis {
            let j = ctx.include(0, &Poly::from_term(w.clone(), Scalar::one()));
            let jf = ctx.nabla_j(&conn01, &j, DecompRule::Nested);
            joint.push(("eta", w.clone()));
            images.push((jf.t1, jf.t2));
        }
        // Assemble the joint linear system over distinct words of both legs.
        use std::collections::BTreeMap;
        let mut rows: BTreeMap<(usize, crate::ncalg::Word), usize> = BTreeMap::new();
        for (t1, t2) in &images {
            for (w, _) in t1.terms() {
                let next = rows.len();
                rows.entry((0, w.clone())).or_insert(next);
            }
            for (w, _) in t2.terms() {
                let next = rows.len();
                rows.entry((1, w.clone())).or_insert(next);
            }
        }
        let mut m = vec![vec![Scalar::zero(); images.len()]; rows.len().max(1)];
        for (col, (t1, t2)) in images.iter().enumerate() {
            for (w, c) in t1.terms() {
                m[rows[&(0, w.clone())]][col] = c.clone();
            }
            for (w, c) in t2.terms() {
                m[rows[&(1, w.clone())]][col] = c.clone();
            }
        }
        let jet_kernel = crate::linalg::kernel(m, images.len()).len();
        let e_kernel = crate::bundles::holomorphic_sections(&ctx.cal, &conn01, maxlen).len();
        let eta_images: Vec<Poly> = eta_basis
            .iter()
            .map(|w| ctx.dtilde(&conn01, &Poly::from_term(w.clone(), Scalar::one())))
            .collect();
        let eta_kernel = crate::bundles::kernel_in_basis(&eta_basis, &eta_images).len();
        assert_eq!(jet_kernel, e_kernel + eta_kernel);
    }
}
