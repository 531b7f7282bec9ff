//! Deterministic sampling for the verification suites.
//!
//! A fixed linear congruential generator over the word alphabet keeps every
//! report reproducible from its seed; no platform randomness is involved.

use crate::ncalg::{pbw_words_of_length, Poly, Presentation, Word};
use crate::scalar::Scalar;
use crate::su2;

/// 64-bit LCG (Knuth's MMIX constants).
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg {
            state: seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() >> 16) % n as u64) as usize
    }
}

fn coeff_pool() -> Vec<Scalar> {
    vec![
        Scalar::one(),
        Scalar::one().neg(),
        Scalar::from_int(2),
        Scalar::q(),
        Scalar::q_pow(-1),
        Scalar::s_pow(1),
        Scalar::one().sub(&Scalar::q()),
    ]
}

/// Random element of the free algebra: up to `max_terms` words of length
/// `<= maxlen` over the raw alphabet (not necessarily irreducible).
pub fn random_word_poly(rng: &mut Lcg, maxlen: usize, max_terms: usize) -> Poly {
    let pool = coeff_pool();
    let nterms = 1 + rng.below(max_terms);
    let mut p = Poly::zero();
    for _ in 0..nterms {
        let len = rng.below(maxlen + 1);
        let w: Vec<u8> = (0..len).map(|_| rng.below(4) as u8).collect();
        p.add_term(Word(w), pool[rng.below(pool.len())].clone());
    }
    p
}

/// Random normalized polynomial with up to `max_terms` PBW words of length
/// `<= maxlen`.
pub fn random_poly(rng: &mut Lcg, pr: &Presentation, maxlen: usize, max_terms: usize) -> Poly {
    pr.normal_form(&random_word_poly(rng, maxlen, max_terms))
}

/// Random nonzero weight-homogeneous polynomial of the given weight, drawn
/// from the PBW basis words of length `<= max(maxlen, |weight|)` (a word
/// of weight w needs at least |w| letters).
pub fn random_weight_poly(
    rng: &mut Lcg,
    weight: i64,
    maxlen: usize,
    max_terms: usize,
) -> Poly {
    let basis = weight_basis(weight, maxlen.max(weight.unsigned_abs() as usize));
    assert!(
        !basis.is_empty(),
        "no PBW words of weight {weight} up to length {maxlen}"
    );
    let pool = coeff_pool();
    let mut p = Poly::zero();
    let nterms = 1 + rng.below(max_terms);
    for _ in 0..nterms {
        let w = basis[rng.below(basis.len())].clone();
        p.add_term(w, pool[rng.below(pool.len())].clone());
    }
    if p.is_zero() {
        p.add_term(basis[0].clone(), Scalar::one());
    }
    p
}

/// All PBW basis words of the given weight and length `<= maxlen`.
pub fn weight_basis(weight: i64, maxlen: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 0..=maxlen {
        for w in pbw_words_of_length(len) {
            if su2::weight_word(&w) == weight {
                out.push(w);
            }
        }
    }
    out
}
