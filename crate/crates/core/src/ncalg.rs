//! Free *-algebra over [`Scalar`] on the ordered generators
//! `a < a* < c < c*` with a two-letter rewrite system and PBW normal
//! forms.
//!
//! The shipped presentation encodes the quantum SU(2) coordinate relations
//! `ac = qca`, `ac* = qc*a`, `cc* = c*c`, `a*a + c*c = 1`,
//! `aa* + q^2 cc* = 1`, oriented so that every rule strictly decreases a
//! weighted graded-lexicographic term order. Both unit relations are
//! oriented as rewrites, and `a, a*` are adjacent in the generator order
//! so that any word containing both acquires an `a a*` or `a* a` factor
//! after sorting; the irreducible words are exactly
//! `a^k (a*)^p c^l (c*)^m` with `min(k, p) = 0`.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const GEN_A: u8 = 0;
pub const GEN_AS: u8 = 1;
pub const GEN_C: u8 = 2;
pub const GEN_CS: u8 = 3;

pub const GEN_NAMES: [&str; 4] = ["a", "a*", "c", "c*"];

/// Star involution on generator indices: a <-> a*, c <-> c*.
pub const STAR_TABLE: [u8; 4] = [GEN_AS, GEN_A, GEN_CS, GEN_C];

/// Word in the free monoid on the generators. The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

/// Term-order weight of a letter. Chosen so that the unit rules
/// `a*a -> 1 - cc*` and `aa* -> 1 - q^2 cc*` are strictly decreasing:
/// plain graded-lex cannot orient `aa*` above `cc*`.
fn letter_weight(g: u8) -> u64 {
    match g {
        GEN_A | GEN_AS => 2,
        _ => 1,
    }
}

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: u8) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    fn order_weight(&self) -> u64 {
        self.0.iter().map(|&g| letter_weight(g)).sum()
    }
}

/// Weighted graded-lexicographic term order (weight, then length, then lex).
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_weight()
            .cmp(&other.order_weight())
            .then(self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            let count = j - i;
            if count == 1 {
                parts.push(GEN_NAMES[g as usize].to_string());
            } else {
                parts.push(format!("{}^{}", GEN_NAMES[g as usize], count));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Noncommutative polynomial: a finite Scalar-combination of words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_term(Word::unit(), Scalar::one())
    }

    pub fn gen(g: u8) -> Self {
        Poly::from_term(Word::single(g), Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Poly::from_term(Word::unit(), c)
    }

    pub fn from_term(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul(k));
        }
        out
    }

    /// Free (unreduced) product.
    pub fn mul_free(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        // Highest term first for readability.
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.to_string().starts_with('-') {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let cs = mag.to_string();
            if w.is_empty() {
                out.push_str(&cs);
            } else if mag.is_one() {
                out.push_str(&w.to_string());
            } else {
                out.push_str(&cs);
                out.push(' ');
                out.push_str(&w.to_string());
            }
        }
        write!(f, "{out}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("rewrite rule does not decrease the term order: {0}")]
    NonDecreasingRule(String),
}

/// A two-letter rewrite rule `l0 l1 -> rhs`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub lhs: (u8, u8),
    pub rhs: Poly,
}

/// Generators with star pairing plus an oriented rewrite system.
#[derive(Debug, Clone)]
pub struct Presentation {
    rules: Vec<Rule>,
    /// rule_index[x][y] = index into `rules` for the pair (x, y).
    rule_index: [[Option<usize>; 4]; 4],
}

impl Presentation {
    pub fn new(rules: Vec<Rule>) -> Result<Self, PresentationError> {
        let mut rule_index = [[None; 4]; 4];
        for (i, r) in rules.iter().enumerate() {
            let lhs_word = Word(vec![r.lhs.0, r.lhs.1]);
            for (w, _) in r.rhs.terms() {
                if *w >= lhs_word {
                    return Err(PresentationError::NonDecreasingRule(format!(
                        "{} -> {}",
                        lhs_word, r.rhs
                    )));
                }
            }
            rule_index[r.lhs.0 as usize][r.lhs.1 as usize] = Some(i);
        }
        Ok(Presentation { rules, rule_index })
    }

    /// The quantum SU(2) presentation used by the whole engine. Encodes
    /// `ac = qca`, `ac* = qc*a`, `cc* = c*c`, `ca* = qa*c`, `c*a* = qa*c*`
    /// (the adjoints of the first two), and the two unit relations.
    pub fn quantum_su2() -> Self {
        let q = Scalar::q();
        let qinv = Scalar::q_pow(-1);
        let mono2 = |x: u8, y: u8, k: &Scalar| Poly::from_term(Word(vec![x, y]), k.clone());
        let rules = vec![
            // c a -> q^-1 a c
            Rule { lhs: (GEN_C, GEN_A), rhs: mono2(GEN_A, GEN_C, &qinv) },
            // c* a -> q^-1 a c*
            Rule { lhs: (GEN_CS, GEN_A), rhs: mono2(GEN_A, GEN_CS, &qinv) },
            // c* c -> c c*
            Rule { lhs: (GEN_CS, GEN_C), rhs: mono2(GEN_C, GEN_CS, &Scalar::one()) },
            // c a* -> q a* c
            Rule { lhs: (GEN_C, GEN_AS), rhs: mono2(GEN_AS, GEN_C, &q) },
            // c* a* -> q a* c*
            Rule { lhs: (GEN_CS, GEN_AS), rhs: mono2(GEN_AS, GEN_CS, &q) },
            // a* a -> 1 - c c*
            Rule {
                lhs: (GEN_AS, GEN_A),
                rhs: Poly::one().sub(&mono2(GEN_C, GEN_CS, &Scalar::one())),
            },
            // a a* -> 1 - q^2 c c*
            Rule {
                lhs: (GEN_A, GEN_AS),
                rhs: Poly::one().sub(&mono2(GEN_C, GEN_CS, &q.mul(&q))),
            },
        ];
        Presentation::new(rules).expect("built-in presentation is order-decreasing")
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn rule_for(&self, x: u8, y: u8) -> Option<&Rule> {
        self.rule_index[x as usize][y as usize].map(|i| &self.rules[i])
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| self.rule_for(p[0], p[1]).is_none())
    }

    /// Rewrites to the unique irreducible representative (leftmost-first).
    pub fn normal_form(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut pending: Vec<(Word, Scalar)> =
            p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = pending.pop() {
            if c.is_zero() {
                continue;
            }
            let mut site = None;
            for i in 0..w.len().saturating_sub(1) {
                if let Some(rule) = self.rule_for(w.0[i], w.0[i + 1]) {
                    site = Some((i, rule));
                    break;
                }
            }
            match site {
                None => out.add_term(w, c),
                Some((i, rule)) => {
                    let prefix = &w.0[..i];
                    let suffix = &w.0[i + 2..];
                    for (rw, rc) in rule.rhs.terms() {
                        let mut nw = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
                        nw.extend_from_slice(prefix);
                        nw.extend_from_slice(&rw.0);
                        nw.extend_from_slice(suffix);
                        pending.push((Word(nw), c.mul(rc)));
                    }
                }
            }
        }
        out
    }

    /// Product followed by reduction to normal form.
    pub fn mul_nf(&self, x: &Poly, y: &Poly) -> Poly {
        self.normal_form(&x.mul_free(y))
    }

    /// Antimultiplicative involution; coefficients are fixed (s is real).
    pub fn star(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in p.terms() {
            let sw: Vec<u8> = w.0.iter().rev().map(|&g| STAR_TABLE[g as usize]).collect();
            out.add_term(Word(sw), c.clone());
        }
        self.normal_form(&out)
    }

    /// Diamond-lemma check: resolves every length-3 overlap ambiguity.
    pub fn check_confluence(&self) -> OverlapReport {
        let mut overlaps = Vec::new();
        for r1 in &self.rules {
            for r2 in &self.rules {
                if r1.lhs.1 != r2.lhs.0 {
                    continue;
                }
                let (x, y, z) = (r1.lhs.0, r1.lhs.1, r2.lhs.1);
                let word = Word(vec![x, y, z]);
                // Reduce (r1 applied at 0) z and x (r2 applied at 1).
                let left = self.normal_form(&r1.rhs.mul_free(&Poly::gen(z)));
                let right = self.normal_form(&Poly::gen(x).mul_free(&r2.rhs));
                overlaps.push(Overlap {
                    word,
                    resolved: left == right,
                });
            }
        }
        OverlapReport { overlaps }
    }
}

#[derive(Debug, Clone)]
pub struct Overlap {
    pub word: Word,
    pub resolved: bool,
}

#[derive(Debug, Clone)]
pub struct OverlapReport {
    pub overlaps: Vec<Overlap>,
}

impl OverlapReport {
    pub fn all_resolved(&self) -> bool {
        self.overlaps.iter().all(|o| o.resolved)
    }

    pub fn unresolved(&self) -> Vec<&Overlap> {
        self.overlaps.iter().filter(|o| !o.resolved).collect()
    }
}

/// Enumerates the PBW-irreducible words `a^k (a*)^p c^l (c*)^m`,
/// `min(k, p) = 0`, of exact length `len`.
pub fn pbw_words_of_length(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for k in 0..=len {
        for p in 0..=(len - k) {
            if k.min(p) != 0 {
                continue;
            }
            for l in 0..=(len - k - p) {
                let m = len - k - p - l;
                let mut w = Vec::with_capacity(len);
                w.extend(std::iter::repeat_n(GEN_A, k));
                w.extend(std::iter::repeat_n(GEN_AS, p));
                w.extend(std::iter::repeat_n(GEN_C, l));
                w.extend(std::iter::repeat_n(GEN_CS, m));
                out.push(Word(w));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr() -> Presentation {
        Presentation::quantum_su2()
    }

    fn parse(s: &str) -> Poly {
        crate::parser::parse(s).unwrap()
    }

    #[test]
    fn single_rule_application() {
        let pr = pr();
        let ca = Poly::gen(GEN_C).mul_free(&Poly::gen(GEN_A));
        let expect = Poly::from_term(Word(vec![GEN_A, GEN_C]), Scalar::q_pow(-1));
        assert_eq!(pr.normal_form(&ca), expect);
    }

    #[test]
    fn unit_relation_cancellation() {
        let pr = pr();
        // a* a + c c* = (1 - c c*) + c c* = 1
        let p = parse("a* a + c c*");
        assert_eq!(pr.normal_form(&p), Poly::one());
    }

    #[test]
    fn unit_is_irreducible() {
        let pr = pr();
        assert_eq!(pr.normal_form(&Poly::one()), Poly::one());
    }

    #[test]
    fn all_defining_relations_reduce_to_zero() {
        let pr = pr();
        for rel in [
            "a c - q c a",
            "a c* - q c* a",
            "c c* - c* c",
            "a* a + c* c - 1",
            "a a* + q^2 c c* - 1",
        ] {
            assert!(pr.normal_form(&parse(rel)).is_zero(), "relation {rel}");
        }
    }

    #[test]
    fn confluence_of_builtin_presentation() {
        let report = pr().check_confluence();
        assert!(report.all_resolved(), "unresolved: {:?}", report.unresolved());
        assert!(!report.overlaps.is_empty());
    }

    #[test]
    fn confluence_of_commuting_presentation() {
        // {ba -> ab, cb -> bc, ca -> ac} on three letters has exactly one
        // overlap (cba) and it resolves. Mapped here onto a, c, c*.
        let one = Scalar::one();
        let rules = vec![
            Rule { lhs: (GEN_C, GEN_A), rhs: Poly::from_term(Word(vec![GEN_A, GEN_C]), one.clone()) },
            Rule { lhs: (GEN_CS, GEN_C), rhs: Poly::from_term(Word(vec![GEN_C, GEN_CS]), one.clone()) },
            Rule { lhs: (GEN_CS, GEN_A), rhs: Poly::from_term(Word(vec![GEN_A, GEN_CS]), one) },
        ];
        let pr = Presentation::new(rules).unwrap();
        let report = pr.check_confluence();
        assert_eq!(report.overlaps.len(), 1);
        assert!(report.all_resolved());
        assert_eq!(report.overlaps[0].word, Word(vec![GEN_CS, GEN_C, GEN_A]));
    }

    #[test]
    fn free_presentation_has_no_overlaps() {
        let pr = Presentation::new(Vec::new()).unwrap();
        let report = pr.check_confluence();
        assert!(report.overlaps.is_empty());
        assert!(report.all_resolved());
    }

    #[test]
    fn star_is_involutive_and_antimultiplicative() {
        let pr = pr();
        let p = parse("a c c*");
        assert_eq!(pr.star(&pr.star(&p)), pr.normal_form(&p));
        let x = parse("a + q c*");
        let y = parse("c a* - 2");
        let lhs = pr.star(&pr.mul_nf(&x, &y));
        let rhs = pr.mul_nf(&pr.star(&y), &pr.star(&x));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_of_generator() {
        let pr = pr();
        assert_eq!(pr.star(&Poly::gen(GEN_A)), Poly::gen(GEN_AS));
        // star(q a c) = q c* a*, whose normal form is q^2 a* c*.
        let p = parse("q a c");
        assert_eq!(pr.star(&p), parse("q^2 a* c*"));
        assert_eq!(pr.star(&p), pr.normal_form(&parse("q c* a*")));
    }

    #[test]
    fn pbw_count_matches_direct_enumeration() {
        let pr = pr();
        for len in 0..=4usize {
            // Direct enumeration: all words of this length that are irreducible.
            let mut count = 0usize;
            let total = 4usize.pow(len as u32);
            for code in 0..total {
                let mut w = Vec::with_capacity(len);
                let mut c = code;
                for _ in 0..len {
                    w.push((c % 4) as u8);
                    c /= 4;
                }
                if pr.is_irreducible(&Word(w)) {
                    count += 1;
                }
            }
            assert_eq!(pbw_words_of_length(len).len(), count, "length {len}");
            for w in pbw_words_of_length(len) {
                assert!(pr.is_irreducible(&w));
            }
        }
    }

    #[test]
    fn ring_axioms_on_normal_forms() {
        let pr = pr();
        let mut rng = crate::sample::Lcg::new(7);
        for _ in 0..100 {
            let x = crate::sample::random_poly(&mut rng, &pr, 3, 2);
            let y = crate::sample::random_poly(&mut rng, &pr, 3, 2);
            let z = crate::sample::random_poly(&mut rng, &pr, 3, 2);
            let ab_c = pr.mul_nf(&pr.mul_nf(&x, &y), &z);
            let a_bc = pr.mul_nf(&x, &pr.mul_nf(&y, &z));
            assert_eq!(ab_c, a_bc);
            let dist = pr.mul_nf(&x, &y.add(&z));
            assert_eq!(dist, pr.mul_nf(&x, &y).add(&pr.mul_nf(&x, &z)));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Poly> {
            proptest::collection::vec(
                (proptest::collection::vec(0u8..4, 0..4), -3i64..=3),
                0..3,
            )
            .prop_map(|terms| {
                let mut p = Poly::zero();
                for (letters, k) in terms {
                    p.add_term(Word(letters), Scalar::s_pow(k));
                }
                p
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn star_is_an_involution(p in arb_poly()) {
                let pr = Presentation::quantum_su2();
                prop_assert_eq!(pr.star(&pr.star(&p)), pr.normal_form(&p));
            }

            #[test]
            fn normal_form_is_idempotent_and_linear(p in arb_poly(), q in arb_poly()) {
                let pr = Presentation::quantum_su2();
                let nf = pr.normal_form(&p);
                prop_assert_eq!(pr.normal_form(&nf), nf.clone());
                prop_assert_eq!(
                    pr.normal_form(&p.add(&q)),
                    nf.add(&pr.normal_form(&q))
                );
            }
        }
    }

    #[test]
    fn confluence_on_random_polys_two_strategies() {
        // Reduce with a rightmost-first strategy and compare against the
        // engine's leftmost-first strategy.
        let pr = pr();
        fn reduce_rightmost(pr: &Presentation, p: &Poly) -> Poly {
            let mut out = Poly::zero();
            let mut pending: Vec<(Word, Scalar)> =
                p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
            while let Some((w, c)) = pending.pop() {
                let mut site = None;
                for i in (0..w.len().saturating_sub(1)).rev() {
                    if let Some(j) = pr.rule_index[w.0[i] as usize][w.0[i + 1] as usize] {
                        site = Some((i, &pr.rules[j]));
                        break;
                    }
                }
                match site {
                    None => out.add_term(w, c),
                    Some((i, rule)) => {
                        for (rw, rc) in rule.rhs.terms() {
                            let mut nw = w.0[..i].to_vec();
                            nw.extend_from_slice(&rw.0);
                            nw.extend_from_slice(&w.0[i + 2..]);
                            pending.push((Word(nw), c.mul(rc)));
                        }
                    }
                }
            }
            out
        }
        let mut rng = crate::sample::Lcg::new(20240801);
        for _ in 0..200 {
            let p = crate::sample::random_word_poly(&mut rng, 5, 2);
            assert_eq!(pr.normal_form(&p), reduce_rightmost(&pr, &p));
        }
    }
}
