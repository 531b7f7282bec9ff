//! Line bundles as weight modules, their canonical (0,1)- and
//! (1,0)-connections, perturbations, and truncated holomorphic-section
//! computation.
//!
//! `L_n` is the weight-`n` subspace of the ambient algebra, with module
//! actions by ambient multiplication. In the collapsed model the standard
//! holomorphic structure on `L_n` is `e -> (X_- e) w-` and the canonical
//! (1,0)-connection is `e -> (X_+ e) w+`: the weight-dependent prefactors
//! of the uncollapsed maps cancel against the push-right twist. A
//! perturbation adds the left-module map `e -> (e g) w_±`.

use crate::calculus::Calculus;
use crate::linalg;
use crate::ncalg::{Poly, Word};
use crate::sample::weight_basis;
use crate::scalar::Scalar;
use crate::su2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BundleError {
    #[error("value is not weight-homogeneous of weight {expected}")]
    WeightMismatch { expected: i64 },
    #[error("component index {index} out of range ({len} components)")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Weight-homogeneous element of the line bundle `L_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleElement {
    pub n: i64,
    pub value: Poly,
}

impl BundleElement {
    pub fn new(n: i64, value: Poly) -> Result<Self, BundleError> {
        if !su2::is_weight_homogeneous(&value, n) {
            return Err(BundleError::WeightMismatch { expected: n });
        }
        Ok(BundleElement { n, value })
    }
}

/// `e -> (X_- e + e g) w-` on `L_n`; `g` has weight -2 (possibly zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelbarConnection {
    pub n: i64,
    pub perturbation: Poly,
}

/// `e -> (X_+ e + e p) w+` on `L_n`; `p` has weight +2 (possibly zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelConnection {
    pub n: i64,
    pub perturbation: Poly,
}

/// The standard holomorphic structure on `L_n`.
pub fn nabla01_std(n: i64) -> DelbarConnection {
    DelbarConnection { n, perturbation: Poly::zero() }
}

/// The canonical (1,0)-connection on `L_n`.
pub fn nabla10_canonical(n: i64) -> DelConnection {
    DelConnection { n, perturbation: Poly::zero() }
}

impl DelbarConnection {
    pub fn perturbed(n: i64, g: Poly) -> Result<Self, BundleError> {
        if !su2::is_weight_homogeneous(&g, -2) {
            return Err(BundleError::WeightMismatch { expected: -2 });
        }
        Ok(DelbarConnection { n, perturbation: g })
    }

    /// Collapsed coefficient of `w-` in the image; weight `n - 2`.
    pub fn apply(&self, cal: &Calculus, e: &Poly) -> Poly {
        let base = cal.xminus(e);
        if self.perturbation.is_zero() {
            base
        } else {
            base.add(&cal.su2.presentation.mul_nf(e, &self.perturbation))
        }
    }
}

impl DelConnection {
    pub fn perturbed(n: i64, p: Poly) -> Result<Self, BundleError> {
        if !su2::is_weight_homogeneous(&p, 2) {
            return Err(BundleError::WeightMismatch { expected: 2 });
        }
        Ok(DelConnection { n, perturbation: p })
    }

    /// Collapsed coefficient of `w+` in the image; weight `n + 2`.
    pub fn apply(&self, cal: &Calculus, e: &Poly) -> Poly {
        let base = cal.xplus(e);
        if self.perturbation.is_zero() {
            base
        } else {
            base.add(&cal.su2.presentation.mul_nf(e, &self.perturbation))
        }
    }
}

/// Kernel of a linear map given by its images on a word basis.
/// Returns the kernel vectors expressed as polynomials in the basis.
pub fn kernel_in_basis(basis: &[Word], images: &[Poly]) -> Vec<Poly> {
    use std::collections::BTreeMap;
    let mut row_of: BTreeMap<Word, usize> = BTreeMap::new();
    for img in images {
        for (w, _) in img.terms() {
            let next = row_of.len();
            row_of.entry(w.clone()).or_insert(next);
        }
    }
    let rows = row_of.len().max(1);
    let mut m = vec![vec![Scalar::zero(); basis.len()]; rows];
    for (col, img) in images.iter().enumerate() {
        for (w, c) in img.terms() {
            m[row_of[w]][col] = c.clone();
        }
    }
    linalg::kernel(m, basis.len())
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero();
            for (i, c) in v.into_iter().enumerate() {
                p.add_term(basis[i].clone(), c);
            }
            p
        })
        .collect()
}

/// Basis of the truncated kernel of the holomorphic structure: solves
/// `(X_- e + e g) = 0` on the span of weight-`n` PBW words of length
/// `<= maxlen`.
pub fn holomorphic_sections(
    cal: &Calculus,
    conn: &DelbarConnection,
    maxlen: usize,
) -> Vec<Poly> {
    let basis = weight_basis(conn.n, maxlen);
    let images: Vec<Poly> = basis
        .iter()
        .map(|w| conn.apply(cal, &Poly::from_term(w.clone(), Scalar::one())))
        .collect();
    kernel_in_basis(&basis, &images)
}

/// Finite direct sum of line bundles with a componentwise connection.
#[derive(Debug, Clone)]
pub struct DirectSum10 {
    pub components: Vec<DelConnection>,
}

impl DirectSum10 {
    pub fn new(components: Vec<DelConnection>) -> Self {
        DirectSum10 { components }
    }

    /// Componentwise application to a tuple of sections.
    pub fn apply(&self, cal: &Calculus, e: &[Poly]) -> Vec<Poly> {
        assert_eq!(e.len(), self.components.len());
        self.components
            .iter()
            .zip(e)
            .map(|(c, ei)| c.apply(cal, ei))
            .collect()
    }

    /// The project-then-include construction: includes a section into slot
    /// `i`, applies the sum connection, and projects back to slot `i`.
    pub fn restrict(
        &self,
        cal: &Calculus,
        i: usize,
        e: &Poly,
    ) -> Result<Poly, BundleError> {
        if i >= self.components.len() {
            return Err(BundleError::IndexOutOfRange { index: i, len: self.components.len() });
        }
        let mut tuple = vec![Poly::zero(); self.components.len()];
        tuple[i] = e.clone();
        Ok(self.apply(cal, &tuple).swap_remove(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Form;
    use crate::ncalg::{GEN_A, GEN_AS};
    use crate::parser::parse;
    use crate::sample::{self, Lcg};

    fn cal() -> Calculus {
        Calculus::new()
    }

    fn nf(s: &str) -> Poly {
        Calculus::new().su2.presentation.normal_form(&parse(s).unwrap())
    }

    #[test]
    fn std_structure_on_generators() {
        let cal = cal();
        // a sits in L_{-1} and is annihilated: a is a holomorphic section.
        assert!(nabla01_std(-1).apply(&cal, &Poly::gen(GEN_A)).is_zero());
        // a* sits in L_{+1}: image c.
        assert_eq!(nabla01_std(1).apply(&cal, &Poly::gen(GEN_AS)), nf("c"));
        // the trivial bundle: the structure is delbar itself.
        assert!(nabla01_std(0).apply(&cal, &Poly::one()).is_zero());
        let f = nf("a c*");
        assert_eq!(
            Form::wminus(nabla01_std(0).apply(&cal, &f)),
            cal.delbar(&Form::scalar(f))
        );
    }

    #[test]
    fn canonical_del_connection_on_generators() {
        let cal = cal();
        assert_eq!(
            nabla10_canonical(-1).apply(&cal, &Poly::gen(GEN_A)),
            nf("-q c*")
        );
        assert!(nabla10_canonical(1).apply(&cal, &Poly::gen(GEN_AS)).is_zero());
        assert!(nabla10_canonical(0).apply(&cal, &Poly::one()).is_zero());
    }

    #[test]
    fn left_leibniz_for_both_connections() {
        let cal = cal();
        let pr = &cal.su2.presentation;
        for n in -3..=3i64 {
            let mut rng = Lcg::new((4000 + n) as u64);
            let conn01 = nabla01_std(n);
            let conn10 = nabla10_canonical(n);
            for _ in 0..50 {
                let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
                let e = sample::random_weight_poly(&mut rng, n, 3, 2);
                let xe = pr.mul_nf(&x, &e);
                // delbar-Leibniz: (X_-(xe)) = x (X_- e) + q^n (X_- x) e
                let lhs = conn01.apply(&cal, &xe);
                let rhs = pr.mul_nf(&x, &conn01.apply(&cal, &e)).add(
                    &pr.mul_nf(&cal.xminus(&x), &e).scale(&Scalar::q_pow(n)),
                );
                assert_eq!(lhs, pr.normal_form(&rhs), "delbar n={n}");
                // del-Leibniz with the same collapsed twist
                let lhs = conn10.apply(&cal, &xe);
                let rhs = pr.mul_nf(&x, &conn10.apply(&cal, &e)).add(
                    &pr.mul_nf(&cal.xplus(&x), &e).scale(&Scalar::q_pow(n)),
                );
                assert_eq!(lhs, pr.normal_form(&rhs), "del n={n}");
            }
        }
    }

    #[test]
    fn perturbed_connection_still_satisfies_leibniz() {
        let cal = cal();
        let pr = &cal.su2.presentation;
        let n = 1i64;
        let mut rng = Lcg::new(77);
        for _ in 0..20 {
            let g = sample::random_weight_poly(&mut rng, -2, 2, 2);
            let conn = DelbarConnection::perturbed(n, g).unwrap();
            let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let e = sample::random_weight_poly(&mut rng, n, 2, 2);
            let xe = pr.mul_nf(&x, &e);
            let lhs = conn.apply(&cal, &xe);
            let rhs = pr.mul_nf(&x, &conn.apply(&cal, &e)).add(
                &pr.mul_nf(&cal.xminus(&x), &e).scale(&Scalar::s_pow(2 * n)),
            );
            assert_eq!(lhs, pr.normal_form(&rhs));
        }
    }

    #[test]
    fn trivial_bundle_sections_are_constants() {
        let cal = cal();
        let ker = holomorphic_sections(&cal, &nabla01_std(0), 4);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], Poly::one());
    }

    #[test]
    fn zero_map_kernel_is_whole_space() {
        let basis = weight_basis(0, 2);
        let images = vec![Poly::zero(); basis.len()];
        assert_eq!(kernel_in_basis(&basis, &images).len(), basis.len());
    }

    #[test]
    fn kernel_is_stable_under_truncation_growth() {
        let cal = cal();
        for n in [-2i64, -1, 1, 2] {
            let k3 = holomorphic_sections(&cal, &nabla01_std(n), 3);
            let k4 = holomorphic_sections(&cal, &nabla01_std(n), 4);
            // kernel vectors persist: every maxlen-3 kernel vector stays in
            // the maxlen-4 kernel
            for v in &k3 {
                assert!(nabla01_std(n).apply(&cal, v).is_zero());
            }
            assert!(k4.len() >= k3.len());
        }
    }

    #[test]
    fn direct_sum_acts_componentwise_and_restricts() {
        let cal = cal();
        let sum = DirectSum10::new(vec![nabla10_canonical(-1), nabla10_canonical(1)]);
        let e = vec![Poly::gen(GEN_A), Poly::gen(GEN_AS)];
        let img = sum.apply(&cal, &e);
        assert_eq!(img[0], nf("-q c*"));
        assert!(img[1].is_zero());
        let mut rng = Lcg::new(5);
        for _ in 0..10 {
            let e0 = sample::random_weight_poly(&mut rng, -1, 2, 2);
            assert_eq!(
                sum.restrict(&cal, 0, &e0).unwrap(),
                nabla10_canonical(-1).apply(&cal, &e0)
            );
        }
        assert!(sum.restrict(&cal, 2, &Poly::one()).is_err());
    }
}
