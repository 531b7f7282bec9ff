//! The Hopf-algebra layer: the generator matrix, the dual pairing, the
//! operators `E, F, K, K^{-1}` acting as twisted derivations, the
//! derivations `X_±` of the 2D calculus, and the integer weight grading.
//!
//! Conventions (fixed once, verified by the downstream Leibniz, `d^2 = 0`
//! and curvature suites):
//!
//! * `weight(a) = weight(c) = -1`, `weight(a*) = weight(c*) = +1`; the line
//!   bundle `L_n` is the weight-`n` subspace.
//! * `K` acts on weight-homogeneous elements by `q^{weight/2}`.
//! * `E` raises weight by 2, `F` lowers it by 2; both extend to products by
//!   the twisted Leibniz rule `h(fg) = h(f) (K g) + (K^{-1} f) h(g)`.
//! * `X_+ = q^{1/2} E K` and `X_- = q^{-1/2} F K` satisfy
//!   `X_±(fg) = X_±(f) (K^2 g) + f X_±(g)`, the derivation shape that makes
//!   the push-right form calculus close up.
//!
//! The action table is derived from the pairing matrices, never written by
//! hand: `h u_{ij} = sum_k u_{ik} <h, u_{kj}>` on the generator matrix
//! `u = [[a, -q c*], [c, a*]]`.

use crate::ncalg::{Poly, Presentation, Word, GEN_A, GEN_AS, GEN_C, GEN_CS};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    E,
    F,
    K,
    Kinv,
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::E => "E",
            Op::F => "F",
            Op::K => "K",
            Op::Kinv => "Kinv",
        }
    }
}

/// Weight of a single generator.
pub fn weight_gen(g: u8) -> i64 {
    match g {
        GEN_A | GEN_C => -1,
        _ => 1,
    }
}

/// Weight of a word: (#a* + #c*) - (#a + #c).
pub fn weight_word(w: &Word) -> i64 {
    w.0.iter().map(|&g| weight_gen(g)).sum()
}

/// Weight of a homogeneous polynomial; `None` if mixed or zero.
pub fn weight_poly(p: &Poly) -> Option<i64> {
    let mut it = p.terms();
    let first = weight_word(it.next()?.0);
    for (w, _) in it {
        if weight_word(w) != first {
            return None;
        }
    }
    Some(first)
}

pub fn is_weight_homogeneous(p: &Poly, n: i64) -> bool {
    p.terms().all(|(w, _)| weight_word(w) == n)
}

/// Sum of the terms of exactly the given weight.
pub fn project_weight(p: &Poly, n: i64) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in p.terms() {
        if weight_word(w) == n {
            out.add_term(w.clone(), c.clone());
        }
    }
    out
}

/// Action values of `E`, `F`, `K`, `K^{-1}` on the four generators.
#[derive(Debug, Clone)]
pub struct ActionTable {
    pub e: [Poly; 4],
    pub f: [Poly; 4],
    pub k: [Poly; 4],
    pub kinv: [Poly; 4],
}

/// 2x2 matrix of generator polynomials.
type GenMatrix = [[Poly; 2]; 2];

fn generator_matrix() -> GenMatrix {
    [
        [Poly::gen(GEN_A), Poly::gen(GEN_CS).scale(&Scalar::q().neg())],
        [Poly::gen(GEN_C), Poly::gen(GEN_AS)],
    ]
}

/// Evaluates `h |> u_{ij} = sum_k u_{ik} <h, u_{kj}>` for a pairing matrix,
/// then reads off the action on `a, c, c*, a*` (using `u_{12} = -q c*`).
fn derive_for(pairing: [[Scalar; 2]; 2]) -> [Poly; 4] {
    let u = generator_matrix();
    let mut acted = [[Poly::zero(), Poly::zero()], [Poly::zero(), Poly::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Poly::zero();
            for (k, row) in pairing.iter().enumerate() {
                acc = acc.add(&u[i][k].scale(&row[j]));
            }
            acted[i][j] = acc;
        }
    }
    let on_cs = acted[0][1].scale(&Scalar::q_pow(-1).neg()); // u_{12} = -q c*
    let mut out = [Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero()];
    out[GEN_A as usize] = acted[0][0].clone();
    out[GEN_C as usize] = acted[1][0].clone();
    out[GEN_CS as usize] = on_cs;
    out[GEN_AS as usize] = acted[1][1].clone();
    out
}

/// Builds the action table from the dual pairing on the generator matrix.
pub fn derive_action_table() -> ActionTable {
    let zero = Scalar::zero;
    let one = Scalar::one;
    // <E, u>, <F, u> are the weight-raising/lowering matrix units, <K, u> is
    // diagonal with K acting by q^{weight/2} on each column.
    let e_pair = [[zero(), zero()], [one(), zero()]];
    let f_pair = [[zero(), one()], [zero(), zero()]];
    let k_pair = [
        [Scalar::s_pow(-1), zero()],
        [zero(), Scalar::s_pow(1)],
    ];
    let kinv_pair = [
        [Scalar::s_pow(1), zero()],
        [zero(), Scalar::s_pow(-1)],
    ];
    ActionTable {
        e: derive_for(e_pair),
        f: derive_for(f_pair),
        k: derive_for(k_pair),
        kinv: derive_for(kinv_pair),
    }
}

/// The Hopf action with a fixed presentation for normalization.
#[derive(Debug, Clone)]
pub struct Su2Action {
    pub presentation: Presentation,
    pub table: ActionTable,
}

impl Su2Action {
    pub fn new() -> Self {
        Su2Action {
            presentation: Presentation::quantum_su2(),
            table: derive_action_table(),
        }
    }

    /// `q^{k * weight/2}` scaling, the action of `K^k` on a word.
    fn k_scale(w: &Word, k: i64) -> Scalar {
        Scalar::s_pow(k * weight_word(w))
    }

    fn act_word(&self, op: Op, w: &Word) -> Poly {
        match op {
            Op::K => Poly::from_term(w.clone(), Self::k_scale(w, 1)),
            Op::Kinv => Poly::from_term(w.clone(), Self::k_scale(w, -1)),
            Op::E | Op::F => {
                if w.is_empty() {
                    return Poly::zero(); // counit of E, F
                }
                let table = match op {
                    Op::E => &self.table.e,
                    _ => &self.table.f,
                };
                // h(l . rest) = h(l) (K rest) + (K^{-1} l) h(rest)
                let l = w.0[0];
                let rest = Word(w.0[1..].to_vec());
                let mut acc = table[l as usize]
                    .mul_free(&Poly::from_term(rest.clone(), Self::k_scale(&rest, 1)));
                let tail = self.act_word(op, &rest);
                if !tail.is_zero() {
                    let head =
                        Poly::from_term(Word::single(l), Scalar::s_pow(-weight_gen(l)));
                    acc = acc.add(&head.mul_free(&tail));
                }
                acc
            }
        }
    }

    /// Action on a normalized polynomial; output is normalized.
    pub fn act(&self, op: Op, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (w, c) in p.terms() {
            acc = acc.add(&self.act_word(op, w).scale(c));
        }
        self.presentation.normal_form(&acc)
    }

    /// `X_+ = q^{1/2} E K`; raises weight by 2.
    pub fn xplus(&self, p: &Poly) -> Poly {
        self.act(Op::E, &self.act(Op::K, p)).scale(&Scalar::s_pow(1))
    }

    /// `X_- = q^{-1/2} F K`; lowers weight by 2.
    pub fn xminus(&self, p: &Poly) -> Poly {
        self.act(Op::F, &self.act(Op::K, p)).scale(&Scalar::s_pow(-1))
    }

    /// `K^2` action: `q^{weight}` on homogeneous terms.
    pub fn ksq(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in p.terms() {
            out.add_term(w.clone(), c.mul(&Scalar::s_pow(2 * weight_word(w))));
        }
        out
    }
}

impl Default for Su2Action {
    fn default() -> Self {
        Self::new()
    }
}
