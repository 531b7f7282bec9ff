//! The bimodule layer: braidings extracted from bimodule connections, the
//! right jet action, the compatibility condition between the two
//! braidings, the bimodule lift of the jet holomorphic structure, the
//! kernel-part extension, and the twisted-flip maps on the (0,1) leg.
//!
//! On a line bundle every bimodule map between the collapsed tensor spaces
//! commutes with both multiplications by weight-0 elements, hence is a
//! scalar multiple of the retagging identity. A [`SigmaMap`] therefore
//! stores one scalar twist; extraction from a connection solves for the
//! twist on a spanning set and rejects candidates that are not scalar
//! (those connections are not bimodule connections).
//!
//! One structural fact shows up throughout this module: the two mixed
//! second-derivative pairings `(X_+ a)(X_- b)` and `q^2 (X_- a)(X_+ b)` are
//! distinct bilinear maps (already classically, `del a ^ delbar b` is not
//! `-delbar a ^ del b`). The compatibility condition between the two
//! canonical braidings reduces to their equality, so the condition fails
//! for the extracted twists and holds exactly for the zero braiding on the
//! (1,0) leg. The suites expose both sides of every equivalence rather
//! than assuming the condition.

use crate::bundles::{nabla10_canonical, DelConnection, DelbarConnection};
use crate::calculus::TensorTag;
use crate::jet::{DecompRule, JetContext, JetElement, JetForm01};
use crate::linalg;
use crate::ncalg::Poly;
use crate::sample::weight_basis;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("not a bimodule connection; linearity residual: {0}")]
    NotBimodule(String),
    #[error("not a right sigma-connection; residual: {0}")]
    NotSigmaConnection(String),
    #[error("delbar is not surjective onto the truncated (0,1)-forms")]
    NotSurjective,
    #[error("no delbar-preimage found at the working truncation")]
    NoPreimage,
}

/// A bimodule map between collapsed tensor spaces of a line bundle: a
/// scalar twist together with the retagging data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMap {
    pub src: TensorTag,
    pub dst: TensorTag,
    pub n: i64,
    pub twist: Scalar,
}

impl SigmaMap {
    pub fn apply(&self, v: &Poly) -> Poly {
        v.scale(&self.twist)
    }

    /// The smallest grading-preserving perturbation: multiply the twist by
    /// q. Used to build the negative sides of the iff-statements.
    pub fn broken(&self) -> SigmaMap {
        SigmaMap { twist: self.twist.mul(&Scalar::q()), ..self.clone() }
    }

    /// The zero braiding (the unique scalar braiding on the (1,0) leg for
    /// which the compatibility condition holds).
    pub fn zero(src: TensorTag, dst: TensorTag, n: i64) -> SigmaMap {
        SigmaMap { src, dst, n, twist: Scalar::zero() }
    }
}

fn spanning_pairs(_ctx: &JetContext, n: i64, maxlen: usize) -> Vec<(Poly, Poly)> {
    let mut out = Vec::new();
    for we in weight_basis(n, maxlen) {
        for wx in weight_basis(0, 2) {
            if wx.is_empty() {
                continue; // derivatives kill the unit
            }
            out.push((
                Poly::from_term(we.clone(), Scalar::one()),
                Poly::from_term(wx, Scalar::one()),
            ));
        }
    }
    out
}

/// Factors `candidate = t * reference` over a spanning set, failing with
/// the first non-scalar residual.
fn solve_twist(
    pairs: &[(Poly, Poly)], // (reference, candidate)
) -> Result<Scalar, BimoduleError> {
    let mut twist: Option<Scalar> = None;
    for (reference, candidate) in pairs {
        if reference.is_zero() {
            if candidate.is_zero() {
                continue;
            }
            return Err(BimoduleError::NotBimodule(candidate.to_string()));
        }
        let t = match &twist {
            Some(t) => t.clone(),
            None => {
                let (w, c) = reference.terms().next().expect("nonzero reference");
                let t = candidate.coeff(w).div(c).map_err(|_| {
                    BimoduleError::NotBimodule(candidate.to_string())
                })?;
                twist = Some(t.clone());
                t
            }
        };
        let residual = candidate.sub(&reference.scale(&t));
        if !residual.is_zero() {
            return Err(BimoduleError::NotBimodule(residual.to_string()));
        }
    }
    Ok(twist.unwrap_or_else(Scalar::one))
}

/// Extracts the braiding of a (0,1) bimodule connection from its defining
/// relation `conn(e a) = conn(e) a + sigma(e (x) delbar a)`, and verifies
/// scalar bimodule-linearity on the spanning set.
pub fn sigma_bar_from_connection(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    maxlen: usize,
) -> Result<SigmaMap, BimoduleError> {
    let n = conn01.n;
    let mut pairs = Vec::new();
    for (e, x) in spanning_pairs(ctx, n, maxlen) {
        let reference = ctx.mul(&e, &ctx.cal.xminus(&x));
        let ea = ctx.mul(&e, &x);
        let candidate = conn01
            .apply(&ctx.cal, &ea)
            .sub(&ctx.mul(&conn01.apply(&ctx.cal, &e), &x));
        pairs.push((reference, candidate));
    }
    let twist = solve_twist(&pairs)?;
    Ok(SigmaMap { src: TensorTag::EW01, dst: TensorTag::W01E, n, twist })
}

/// The (1,0) analogue, from `conn(e a) = conn(e) a + sigma(e (x) del a)`.
pub fn sigma_from_connection(
    ctx: &JetContext,
    conn10: &DelConnection,
    maxlen: usize,
) -> Result<SigmaMap, BimoduleError> {
    let n = conn10.n;
    let mut pairs = Vec::new();
    for (e, x) in spanning_pairs(ctx, n, maxlen) {
        let reference = ctx.mul(&e, &ctx.cal.xplus(&x));
        let ea = ctx.mul(&e, &x);
        let candidate = conn10
            .apply(&ctx.cal, &ea)
            .sub(&ctx.mul(&conn10.apply(&ctx.cal, &e), &x));
        pairs.push((reference, candidate));
    }
    let twist = solve_twist(&pairs)?;
    Ok(SigmaMap { src: TensorTag::EW10, dst: TensorTag::W10E, n, twist })
}

/// Right action on the jet induced by a (1,0) braiding:
/// `(e, eta) . a = (e a, eta a + sigma(e (x) del a))`.
pub fn right_jet_action(
    ctx: &JetContext,
    sigma_e: &SigmaMap,
    j: &JetElement,
    a: &Poly,
) -> JetElement {
    JetElement {
        n: j.n,
        e: ctx.mul(&j.e, a),
        eta: ctx
            .mul(&j.eta, a)
            .add(&sigma_e.apply(&ctx.mul(&j.e, &ctx.cal.xplus(a)))),
    }
}

/// Right action on `Omega^{0,1} (x) J^1` in split coordinates. The
/// canonical splitting jets absorb the canonical braiding, leaving the
/// correction `(t - 1) q^2 t1 (X_+ a)` on the second leg.
pub fn jetform_right(
    ctx: &JetContext,
    sigma_e: &SigmaMap,
    jf: &JetForm01,
    a: &Poly,
) -> JetForm01 {
    let correction = ctx
        .mul(&jf.t1, &ctx.cal.xplus(a))
        .scale(&sigma_e.twist.sub(&Scalar::one()).mul(&Scalar::q_pow(2)));
    JetForm01 {
        n: jf.n,
        t1: ctx.mul(&jf.t1, a),
        t2: ctx.mul(&jf.t2, a).add(&correction),
    }
}

/// The canonical bimodule map on the kernel part,
/// `psi0 = -(mu^{-1} (x) id) (wedge (x) id) (id (x) sigma_bar)`. On
/// collapsed values it is the twist `q^2 * twist(sigma_bar)`.
pub fn psi0(sigma_bar: &SigmaMap) -> SigmaMap {
    SigmaMap {
        src: TensorTag::W10EW01,
        dst: TensorTag::W01W10E,
        n: sigma_bar.n,
        twist: sigma_bar.twist.mul(&Scalar::q_pow(2)),
    }
}

/// Collapsed value of `(Omega^{1,0} (x) E value u) (x) (h w-)`: the `w+`
/// inside `u` crosses `h` (weight -2), giving `q^{-2} u h`.
pub fn collapse_10e_with_01(ctx: &JetContext, u: &Poly, h: &Poly) -> Poly {
    ctx.mul(u, h).scale(&Scalar::q_pow(-2))
}

/// Collapsed value of `(Omega^{0,1} (x) E value A) (x) (k w+)`: `q^2 A k`.
pub fn collapse_01e_with_10(ctx: &JetContext, a: &Poly, k: &Poly) -> Poly {
    ctx.mul(a, k).scale(&Scalar::q_pow(2))
}

/// Residual of the compatibility condition between the two braidings on a
/// single triple `(e, a, b)`:
/// `psi0(sigma_e(e (x) del a) (x) delbar b) -
///  (id (x) sigma_e)(sigma_bar(e (x) delbar a) (x) del b)`.
pub fn compat_residual(
    ctx: &JetContext,
    sigma_e: &SigmaMap,
    sigma_bar: &SigmaMap,
    e: &Poly,
    a: &Poly,
    b: &Poly,
) -> Poly {
    let p0 = psi0(sigma_bar);
    let lhs_inner = collapse_10e_with_01(
        ctx,
        &sigma_e.apply(&ctx.mul(e, &ctx.cal.xplus(a))),
        &ctx.cal.xminus(b),
    );
    let lhs = p0.apply(&lhs_inner);
    let rhs_inner = collapse_01e_with_10(
        ctx,
        &sigma_bar.apply(&ctx.mul(e, &ctx.cal.xminus(a))),
        &ctx.cal.xplus(b),
    );
    let rhs = sigma_e.apply(&rhs_inner);
    lhs.sub(&rhs)
}

/// Truncated surjectivity of `delbar : L_0 -> L_{-2} w-`: every weight -2
/// basis word up to `maxlen` lies in the image of the weight-0 words up to
/// `maxlen + 2`.
pub fn delbar_surjective(ctx: &JetContext, maxlen: usize) -> bool {
    let source = weight_basis(0, maxlen + 2);
    let target = weight_basis(-2, maxlen);
    let images: Vec<Poly> = source
        .iter()
        .map(|w| ctx.cal.xminus(&Poly::from_term(w.clone(), Scalar::one())))
        .collect();
    // rank of images == rank of images plus the target basis
    let mut rows = std::collections::BTreeMap::new();
    let mut all: Vec<&Poly> = images.iter().collect();
    let targets: Vec<Poly> = target
        .iter()
        .map(|w| Poly::from_term(w.clone(), Scalar::one()))
        .collect();
    all.extend(targets.iter());
    for p in &all {
        for (w, _) in p.terms() {
            let next = rows.len();
            rows.entry(w.clone()).or_insert(next);
        }
    }
    let to_matrix = |polys: &[&Poly]| -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![Scalar::zero(); polys.len()]; rows.len().max(1)];
        for (col, p) in polys.iter().enumerate() {
            for (w, c) in p.terms() {
                m[rows[w]][col] = c.clone();
            }
        }
        m
    };
    let img_refs: Vec<&Poly> = images.iter().collect();
    linalg::rank(to_matrix(&img_refs)) == linalg::rank(to_matrix(&all))
}

/// Solves `X_- x = h` for weight-0 `x` at the truncation; unique up to a
/// constant, which every consumer kills.
pub fn delbar_preimage(ctx: &JetContext, h: &Poly, maxlen: usize) -> Result<Poly, BimoduleError> {
    let basis = weight_basis(0, maxlen + 2);
    let images: Vec<Poly> = basis
        .iter()
        .map(|w| ctx.cal.xminus(&Poly::from_term(w.clone(), Scalar::one())))
        .collect();
    // Assemble [M | h] and row-reduce.
    let mut rows = std::collections::BTreeMap::new();
    for p in images.iter().chain(std::iter::once(h)) {
        for (w, _) in p.terms() {
            let next = rows.len();
            rows.entry(w.clone()).or_insert(next);
        }
    }
    let cols = basis.len();
    let mut m = vec![vec![Scalar::zero(); cols + 1]; rows.len().max(1)];
    for (col, p) in images.iter().enumerate() {
        for (w, c) in p.terms() {
            m[rows[w]][col] = c.clone();
        }
    }
    for (w, c) in h.terms() {
        m[rows[w]][cols] = c.clone();
    }
    let pivots = linalg::rref(&mut m);
    if pivots.contains(&cols) {
        return Err(BimoduleError::NoPreimage);
    }
    let mut x = Poly::zero();
    for (ri, &pc) in pivots.iter().enumerate() {
        x.add_term(basis[pc].clone(), m[ri][cols].clone());
    }
    Ok(x)
}

/// The three-term map `sigma` on `E (x) Omega^{0,1}`, evaluated on
/// `e (x) delbar a`:
///
/// ```text
/// (mu^{-1} del (x) id) sigma_bar(e (x) delbar a)
///   + dtilde(sigma_e(e (x) del a))
///   - (id (x) sigma_e)(conn01 e (x) del a)
/// ```
///
/// The first summand is evaluated through the given decomposition rule;
/// only the combination assembled by [`sigma_j`] (which subtracts the
/// matching splitting conversion) is rule-independent. Shifting `a` by a
/// constant leaves the value fixed, so the map is well defined on
/// `delbar a`.
pub fn sigma_small(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    sigma_bar: &SigmaMap,
    sigma_e: &SigmaMap,
    e: &Poly,
    a: &Poly,
    rule: DecompRule,
) -> Poly {
    let n = conn01.n;
    let t1 = sigma_bar.apply(&ctx.mul(e, &ctx.cal.xminus(a)));
    let term1 = ctx.del_tensor_id(&t1, n, rule);
    let term2 = ctx.dtilde(conn01, &sigma_e.apply(&ctx.mul(e, &ctx.cal.xplus(a))));
    let term3 = sigma_e.apply(&collapse_01e_with_10(
        ctx,
        &conn01.apply(&ctx.cal, e),
        &ctx.cal.xplus(a),
    ));
    term1.add(&term2).sub(&term3)
}

/// Input of the jet braiding: the element `e (x) delbar a (+) xi` of
/// `J^1 (x) Omega^{0,1}`, with `xi` the collapsed value of the
/// `(Omega^{1,0} (x) E) (x) Omega^{0,1}` leg (weight `n`).
#[derive(Debug, Clone)]
pub struct SigmaJInput {
    pub e: Poly,
    pub a: Poly,
    pub xi: Poly,
}

/// The braiding candidate on the jet, in split coordinates:
/// `(sigma_bar(e (x) delbar a), psi0(xi) + sigma(e (x) delbar a))` where
/// `sigma` is the three-term map built from the braidings and the lifted
/// derivative. The rule-carrying pieces cancel against the splitting
/// conversion exactly.
pub fn sigma_j(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    conn10: &DelConnection,
    sigma_bar: &SigmaMap,
    sigma_e: &SigmaMap,
    input: &SigmaJInput,
    rule: DecompRule,
) -> JetForm01 {
    let n = conn01.n;
    let t1 = sigma_bar.apply(&ctx.mul(&input.e, &ctx.cal.xminus(&input.a)));
    let sigma = sigma_small(ctx, conn01, sigma_bar, sigma_e, &input.e, &input.a, rule);
    // split-coordinate conversion against the canonical reference
    let psi_ref = ctx.mu_id_conn10(&t1, n, &nabla10_canonical(n), rule);
    let _ = conn10; // the braidings carry the (1,0) data; kept for symmetry
    JetForm01 {
        n,
        t1,
        t2: psi0(sigma_bar).apply(&input.xi).add(&sigma).sub(&psi_ref),
    }
}

/// Left action of a weight-0 element on a `SigmaJInput`.
pub fn sigma_j_input_left(ctx: &JetContext, x: &Poly, input: &SigmaJInput, n: i64) -> SigmaJInput {
    let mixed = ctx
        .mul(&ctx.mul(&ctx.cal.xplus(x), &input.e), &ctx.cal.xminus(&input.a))
        .scale(&Scalar::q_pow(n - 2));
    SigmaJInput {
        e: ctx.mul(x, &input.e),
        a: input.a.clone(),
        xi: ctx.mul(x, &input.xi).add(&mixed),
    }
}

/// Right action: `(e (x) delbar a (+) xi) . b`; the (0,1) leg becomes
/// `(delbar a) b`, re-expressed through a delbar-preimage.
pub fn sigma_j_input_right(
    ctx: &JetContext,
    input: &SigmaJInput,
    b: &Poly,
    maxlen: usize,
) -> Result<SigmaJInput, BimoduleError> {
    let h = ctx.mul(&ctx.cal.xminus(&input.a), b);
    let c = delbar_preimage(ctx, &h, maxlen)?;
    Ok(SigmaJInput {
        e: input.e.clone(),
        a: c,
        xi: ctx.mul(&input.xi, b),
    })
}

/// Residual of the right-Leibniz property of the lifted structure with
/// respect to the jet braiding:
/// `nabla_J((e,eta) . b) - nabla_J(e,eta) . b - sigma_J((e,eta) (x) delbar b)`.
#[allow(clippy::too_many_arguments)]
pub fn lift_residual(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    conn10: &DelConnection,
    sigma_bar: &SigmaMap,
    sigma_e: &SigmaMap,
    j: &JetElement,
    b: &Poly,
    rule: DecompRule,
) -> JetForm01 {
    let jb = right_jet_action(ctx, sigma_e, j, b);
    let lhs = ctx.nabla_j(conn01, &jb, rule);
    let input = SigmaJInput {
        e: j.e.clone(),
        a: b.clone(),
        xi: collapse_10e_with_01(ctx, &j.eta, &ctx.cal.xminus(b)),
    };
    let rhs = jetform_right(ctx, sigma_e, &ctx.nabla_j(conn01, j, rule), b)
        .add(&sigma_j(ctx, conn01, conn10, sigma_bar, sigma_e, &input, rule));
    lhs.sub(&rhs)
}

/// Extension of a kernel-part bimodule map to the whole jet bimodule,
/// through a bimodule (1,0)-connection:
/// `psi~(e (x) w (+) xi) = sigma_bar(e (x) w) (+) psi(xi)
///  + ((id (x) conn10) sigma_bar - psi (conn10 (x) id))(e (x) w)`,
/// returned in split coordinates. `w = h w-`.
#[allow(clippy::too_many_arguments)]
pub fn extend_psi(
    ctx: &JetContext,
    psi: &SigmaMap,
    sigma_bar: &SigmaMap,
    conn10: &DelConnection,
    e: &Poly,
    h: &Poly,
    xi: &Poly,
    rule: DecompRule,
) -> JetForm01 {
    let n = conn10.n;
    let t1 = sigma_bar.apply(&ctx.mul(e, h));
    let id_conn10 = ctx.mu_id_conn10(&t1, n, conn10, rule);
    let psi_nabla_part = psi.apply(&collapse_10e_with_01(
        ctx,
        &conn10.apply(&ctx.cal, e),
        h,
    ));
    let psi_ref = ctx.mu_id_conn10(&t1, n, &nabla10_canonical(n), rule);
    JetForm01 {
        n,
        t1,
        t2: psi.apply(xi).add(&id_conn10).sub(&psi_nabla_part).sub(&psi_ref),
    }
}

/// Left action on the extension input `(e (x) h w- (+) xi)`.
pub fn extend_input_left(
    ctx: &JetContext,
    x: &Poly,
    e: &Poly,
    h: &Poly,
    xi: &Poly,
    n: i64,
) -> (Poly, Poly, Poly) {
    let mixed = ctx
        .mul(&ctx.mul(&ctx.cal.xplus(x), e), h)
        .scale(&Scalar::q_pow(n - 2));
    (ctx.mul(x, e), h.clone(), ctx.mul(x, xi).add(&mixed))
}

/// Verifies that a (1,0)-connection is a right sigma-connection; the
/// braiding is the hypothesis of the twisted-flip constructions.
pub fn verify_sigma_connection(
    ctx: &JetContext,
    conn10: &DelConnection,
    sigma_e: &SigmaMap,
    maxlen: usize,
) -> Result<(), BimoduleError> {
    for (e, x) in spanning_pairs(ctx, conn10.n, maxlen) {
        let lhs = conn10.apply(&ctx.cal, &ctx.mul(&e, &x));
        let rhs = ctx
            .mul(&conn10.apply(&ctx.cal, &e), &x)
            .add(&sigma_e.apply(&ctx.mul(&e, &ctx.cal.xplus(&x))));
        let r = lhs.sub(&rhs);
        if !r.is_zero() {
            return Err(BimoduleError::NotSigmaConnection(r.to_string()));
        }
    }
    Ok(())
}

/// The twisted flip on the base forms, `Omega^{0,1} (x) Omega^{1,0} ->
/// Omega^{1,0} (x) Omega^{0,1}`. Any scalar twist is a bimodule
/// isomorphism in the collapsed model; the normalization is fixed to 1.
pub fn phi2() -> SigmaMap {
    SigmaMap {
        src: TensorTag::W01W10,
        dst: TensorTag::W10W01,
        n: 0,
        twist: Scalar::one(),
    }
}

/// `D^{1,0} = -del (x) id + (mu (x) id)(id (x) conn10)` on an
/// `Omega^{0,1} (x) E` value: the well-defined map `A -> q^2 conn10(A)`
/// (the rule-carrying parts of the two summands cancel).
pub fn d10_map(ctx: &JetContext, conn10: &DelConnection, a: &Poly) -> Poly {
    let m = conn10.n - 2; // A lives at the (n-2) level, where conn10 lifts
    let shifted = DelConnection { n: m, perturbation: conn10.perturbation.clone() };
    shifted.apply(&ctx.cal, a).scale(&Scalar::q_pow(2))
}

/// `Psi = (phi2 . mu^{-1} (x) id) . D^{1,0}`, valued in
/// `Omega^{1,0} (x) Omega^{0,1} (x) E`.
pub fn psi_nabla(ctx: &JetContext, conn10: &DelConnection, a: &Poly) -> Poly {
    phi2().apply(&d10_map(ctx, conn10, a))
}

/// Residual of the right twisted-Leibniz rule of `Psi` with twist
/// `(phi2 (x) id)(id (x) sigma_e)`.
pub fn psi_nabla_leibniz_residual(
    ctx: &JetContext,
    conn10: &DelConnection,
    sigma_e: &SigmaMap,
    a: &Poly,
    b: &Poly,
) -> Poly {
    let lhs = psi_nabla(ctx, conn10, &ctx.mul(a, b));
    let twist_term = phi2().apply(&sigma_e.apply(&collapse_01e_with_10(
        ctx,
        a,
        &ctx.cal.xplus(b),
    )));
    let rhs = ctx.mul(&psi_nabla(ctx, conn10, a), b).add(&twist_term);
    lhs.sub(&rhs)
}

/// Residual of the square `Psi . sigma_bar . (id (x) delbar) =
/// (phi2 (x) id) . dtilde . sigma_e . (id (x) del)` on a pair `(e, a)`.
pub fn flip_square_residual(
    ctx: &JetContext,
    conn01: &DelbarConnection,
    conn10: &DelConnection,
    sigma_bar: &SigmaMap,
    sigma_e: &SigmaMap,
    e: &Poly,
    a: &Poly,
) -> Poly {
    let lhs = psi_nabla(
        ctx,
        conn10,
        &sigma_bar.apply(&ctx.mul(e, &ctx.cal.xminus(a))),
    );
    let rhs = phi2().apply(&ctx.dtilde(
        conn01,
        &sigma_e.apply(&ctx.mul(e, &ctx.cal.xplus(a))),
    ));
    lhs.sub(&rhs)
}

/// Both sides of the equivalence "the (1,0) part is a right
/// sigma-connection iff the total connection is a right sigma-connection",
/// evaluated on one pair.
pub fn total_connection_residuals(
    ctx: &JetContext,
    conn10: &DelConnection,
    conn01: &DelbarConnection,
    sigma_e: &SigmaMap,
    sigma_bar: &SigmaMap,
    e: &Poly,
    a: &Poly,
) -> (Poly, (Poly, Poly)) {
    let ea = ctx.mul(e, a);
    let resid10 = conn10.apply(&ctx.cal, &ea).sub(
        &ctx.mul(&conn10.apply(&ctx.cal, e), a)
            .add(&sigma_e.apply(&ctx.mul(e, &ctx.cal.xplus(a)))),
    );
    let residbar = conn01.apply(&ctx.cal, &ea).sub(
        &ctx.mul(&conn01.apply(&ctx.cal, e), a)
            .add(&sigma_bar.apply(&ctx.mul(e, &ctx.cal.xminus(a)))),
    );
    // Total residual, componentwise on the (0,1) and (1,0) legs.
    (resid10.clone(), (residbar, resid10))
}
