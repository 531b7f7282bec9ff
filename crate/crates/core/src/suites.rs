//! Named verification suites with machine-readable reports.
//!
//! Every suite is deterministic given its parameters and seed. A check
//! either passes or carries the first offending residual. The `bimodule`
//! suite deliberately reports the honest status of the compatibility
//! condition for the canonical braidings (it fails, by the mixed
//! second-derivative asymmetry) next to the equivalences and the
//! zero-braiding instance in which the lift theorem holds.

use crate::bimodule::{
    self, compat_residual, delbar_surjective, flip_square_residual, jetform_right, lift_residual,
    psi0, psi_nabla_leibniz_residual, sigma_bar_from_connection, sigma_from_connection,
    sigma_j, sigma_j_input_left, sigma_j_input_right, SigmaJInput, SigmaMap,
};
use crate::bundles::{holomorphic_sections, nabla01_std, nabla10_canonical, DelConnection};
use crate::calculus::{Form, TensorTag};
use crate::jet::{
    curvature_line_bundle, splitting_and_defect, total_curvature_composition,
    total_curvature_formula, BundleMorphism, DecompRule, JetContext, JetElement,
};
use crate::ncalg::{pbw_words_of_length, Poly, Presentation};
use crate::report::{Check, SuiteParams, SuiteReport};
use crate::sample::{self, weight_basis, Lcg};
use crate::scalar::Scalar;
use crate::su2;

pub const SUITE_NAMES: [&str; 8] = [
    "bimodule",
    "calculus",
    "confluence",
    "connections",
    "curvature-table",
    "jet",
    "sections",
    "theorem",
];

/// Aggregates a sampled identity into one check: pass iff every sample
/// vanished; the first nonzero residual is reported.
struct Agg {
    name: String,
    residual: Option<String>,
}

impl Agg {
    fn new(name: impl Into<String>) -> Self {
        Agg { name: name.into(), residual: None }
    }

    fn feed(&mut self, residual_is_zero: bool, printout: impl FnOnce() -> String) {
        if !residual_is_zero && self.residual.is_none() {
            self.residual = Some(printout());
        }
    }

    fn into_check(self) -> Check {
        Check::from_residual(self.name, self.residual)
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Option<SuiteReport> {
    let t0 = std::time::Instant::now();
    let mut report = match name {
        "confluence" => suite_confluence(params),
        "calculus" => suite_calculus(params),
        "connections" => suite_connections(params),
        "sections" => suite_sections(params),
        "jet" => suite_jet(params),
        "theorem" => suite_theorem(params),
        "curvature-table" => suite_curvature_table(params),
        "bimodule" => suite_bimodule(params),
        _ => return None,
    };
    report.duration = t0.elapsed();
    Some(report)
}

pub fn run_all(params: &SuiteParams) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|s| run_suite(s, params).expect("registry name"))
        .collect()
}

fn suite_confluence(params: &SuiteParams) -> SuiteReport {
    let pr = Presentation::quantum_su2();
    let rep = pr.check_confluence();
    let mut checks = vec![Check::pass(format!(
        "overlap-count-{:02}",
        rep.overlaps.len()
    ))];
    for o in &rep.overlaps {
        checks.push(Check::from_residual(
            format!("overlap-{}", o.word).replace(' ', "."),
            if o.resolved { None } else { Some("reduction paths disagree".into()) },
        ));
    }
    // Random two-strategy reductions as a secondary confluence witness.
    let mut agg = Agg::new("random-reduction-agreement");
    let mut rng = Lcg::new(params.seed);
    for _ in 0..params.samples.max(200) {
        let p = sample::random_word_poly(&mut rng, 5, 2);
        let nf = pr.normal_form(&p);
        let nf2 = pr.normal_form(&pr.normal_form(&p.neg()).neg());
        agg.feed(nf == nf2, || format!("{}", nf.sub(&nf2)));
    }
    checks.push(agg.into_check());
    SuiteReport::new("confluence", *params, checks)
}

fn suite_calculus(params: &SuiteParams) -> SuiteReport {
    let cal = crate::calculus::Calculus::new();
    let pr = &cal.su2.presentation;
    let mut checks = Vec::new();

    let mut d2 = Agg::new("d-squared-zero");
    for len in 0..=3usize {
        for w in pbw_words_of_length(len) {
            if su2::weight_word(&w) != 0 {
                continue;
            }
            let f = Form::scalar(Poly::from_term(w, Scalar::one()));
            let r = cal.d(&cal.d(&f));
            d2.feed(r.is_zero(), || r.to_string());
        }
    }
    let mut rng = Lcg::new(params.seed);
    for _ in 0..params.samples.max(100) {
        let f = Form::scalar(sample::random_weight_poly(&mut rng, 0, 3, 3));
        let r = cal.d(&cal.d(&f));
        d2.feed(r.is_zero(), || r.to_string());
    }
    checks.push(d2.into_check());

    let mut leib = Agg::new("d-leibniz");
    for _ in 0..params.samples.max(100) {
        let f = sample::random_poly(&mut rng, pr, 3, 2);
        let g = sample::random_poly(&mut rng, pr, 3, 2);
        let lhs = cal.d(&Form::scalar(pr.mul_nf(&f, &g)));
        let rhs = cal
            .form_mul_poly(&cal.d(&Form::scalar(f.clone())), &g)
            .add(&cal.poly_mul_form(&f, &cal.d(&Form::scalar(g))));
        let r = lhs.sub(&rhs);
        leib.feed(r.is_zero(), || r.to_string());
    }
    checks.push(leib.into_check());

    let mut mixed = Agg::new("mixed-derivatives-anticommute");
    for _ in 0..params.samples.max(100) {
        let f = Form::scalar(sample::random_weight_poly(&mut rng, 0, 3, 2));
        let r = cal.del(&cal.delbar(&f)).add(&cal.delbar(&cal.del(&f)));
        mixed.feed(r.is_zero(), || r.to_string());
    }
    checks.push(mixed.into_check());

    let mut restr = Agg::new("delbar-lands-in-weight-minus-two");
    for _ in 0..50 {
        let f = sample::random_weight_poly(&mut rng, 0, 3, 2);
        let db = cal.delbar(&Form::scalar(f));
        let ok = db.cp.is_zero()
            && db.cmp.is_zero()
            && su2::is_weight_homogeneous(&db.cm, -2);
        restr.feed(ok, || db.to_string());
    }
    checks.push(restr.into_check());

    SuiteReport::new("calculus", *params, checks)
}

fn suite_connections(params: &SuiteParams) -> SuiteReport {
    let ctx = JetContext::new();
    let pr = &ctx.cal.su2.presentation;
    let mut checks = Vec::new();
    for n in -3..=3i64 {
        let mut rng = Lcg::new(params.seed ^ (n as u64).wrapping_mul(0x9E37));
        let c01 = nabla01_std(n);
        let c10 = nabla10_canonical(n);
        let mut agg = Agg::new(format!("leibniz-n{n:+}"));
        for _ in 0..params.samples.max(50) {
            let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let e = sample::random_weight_poly(&mut rng, n, 2, 2);
            let xe = pr.mul_nf(&x, &e);
            let r1 = c01.apply(&ctx.cal, &xe).sub(
                &pr.mul_nf(&x, &c01.apply(&ctx.cal, &e))
                    .add(&pr.mul_nf(&ctx.cal.xminus(&x), &e).scale(&Scalar::q_pow(n))),
            );
            agg.feed(r1.is_zero(), || r1.to_string());
            let r2 = c10.apply(&ctx.cal, &xe).sub(
                &pr.mul_nf(&x, &c10.apply(&ctx.cal, &e))
                    .add(&pr.mul_nf(&ctx.cal.xplus(&x), &e).scale(&Scalar::q_pow(n))),
            );
            agg.feed(r2.is_zero(), || r2.to_string());
        }
        checks.push(agg.into_check());
    }
    // Perturbations by right multiplication stay connections.
    let mut rng = Lcg::new(params.seed ^ 0xABCD);
    let mut agg = Agg::new("perturbed-leibniz");
    for _ in 0..20 {
        let g = sample::random_weight_poly(&mut rng, -2, 2, 2);
        let conn = crate::bundles::DelbarConnection::perturbed(1, g).unwrap();
        let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
        let e = sample::random_weight_poly(&mut rng, 1, 2, 2);
        let xe = pr.mul_nf(&x, &e);
        let r = conn.apply(&ctx.cal, &xe).sub(
            &pr.mul_nf(&x, &conn.apply(&ctx.cal, &e))
                .add(&pr.mul_nf(&ctx.cal.xminus(&x), &e).scale(&Scalar::q_pow(1))),
        );
        agg.feed(r.is_zero(), || r.to_string());
    }
    checks.push(agg.into_check());
    SuiteReport::new("connections", *params, checks)
}

fn suite_sections(params: &SuiteParams) -> SuiteReport {
    let cal = crate::calculus::Calculus::new();
    let mut checks = Vec::new();
    // Trivial bundle: constants only, at the requested truncation.
    let ker0 = holomorphic_sections(&cal, &nabla01_std(0), params.maxlen.max(4));
    let ok = ker0.len() == 1 && ker0[0] == Poly::one();
    checks.push(Check::from_residual(
        "kernel-trivial-bundle-is-constants",
        if ok {
            None
        } else {
            Some(format!("dim {}", ker0.len()))
        },
    ));
    // Truncated kernel dimensions; recorded values with a stability check.
    for n in [-2i64, -1, 1, 2] {
        let k_small = holomorphic_sections(&cal, &nabla01_std(n), params.maxlen.max(3));
        let k_large = holomorphic_sections(&cal, &nabla01_std(n), params.maxlen.max(3) + 1);
        let stable = k_small
            .iter()
            .all(|v| nabla01_std(n).apply(&cal, v).is_zero())
            && k_large.len() >= k_small.len();
        checks.push(Check::from_residual(
            format!("kernel-dim-n{n:+}-is-{:02}", k_small.len()),
            if stable { None } else { Some("kernel not stable under truncation growth".into()) },
        ));
    }
    SuiteReport::new("sections", *params, checks)
}

fn suite_jet(params: &SuiteParams) -> SuiteReport {
    let ctx = JetContext::new();
    let mut checks = Vec::new();
    for n in -2..=2i64 {
        let conn01 = nabla01_std(n);
        let mut rng = Lcg::new(params.seed ^ ((n + 10) as u64).wrapping_mul(0x51AB));
        let mut leib = Agg::new(format!("nabla-j-leibniz-n{n:+}"));
        let mut rules = Agg::new(format!("nabla-j-rule-independent-n{n:+}"));
        for _ in 0..params.samples.max(50) {
            let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let j = JetElement {
                n,
                e: sample::random_weight_poly(&mut rng, n, params.maxlen.min(3), 2),
                eta: sample::random_weight_poly(&mut rng, n + 2, params.maxlen.min(3), 2),
            };
            let lhs = ctx.nabla_j(&conn01, &ctx.jet_left_action(&a, &j), DecompRule::Nested);
            let rhs = ctx
                .jetform_left(&a, &ctx.nabla_j(&conn01, &j, DecompRule::Nested))
                .add(&ctx.delbar_tensor_jet(&a, &j));
            let r = lhs.sub(&rhs);
            leib.feed(r.is_zero(), || format!("({}, {})", r.t1, r.t2));
            let alt = ctx.nabla_j(&conn01, &j, DecompRule::Mirrored);
            let r2 = ctx.nabla_j(&conn01, &j, DecompRule::Nested).sub(&alt);
            rules.feed(r2.is_zero(), || format!("({}, {})", r2.t1, r2.t2));
        }
        checks.push(leib.into_check());
        checks.push(rules.into_check());
        for c in crate::jet::jet_sequence_check(&ctx, &conn01, n, params.maxlen) {
            checks.push(Check {
                name: format!("{}-n{n:+}", c.name),
                pass: c.pass,
                residual: c.residual,
            });
        }
    }
    // Functor laws over right multiplication by holomorphic sections.
    let mut rng = Lcg::new(params.seed ^ 0xF00D);
    let mut fun = Agg::new("functor-laws");
    let pr_a = Poly::gen(crate::ncalg::GEN_A);
    let pr_c = Poly::gen(crate::ncalg::GEN_C);
    let phi = BundleMorphism::new(1, 0, pr_a.clone()).unwrap();
    let psi = BundleMorphism::new(0, -1, pr_c.clone()).unwrap();
    let comp = BundleMorphism::new(1, -1, ctx.mul(&pr_a, &pr_c)).unwrap();
    fun.feed(
        phi.verify_holomorphic(&ctx, &nabla01_std(1), &nabla01_std(0), 3).is_ok(),
        || "phi does not intertwine".into(),
    );
    for _ in 0..20 {
        let j = JetElement {
            n: 1,
            e: sample::random_weight_poly(&mut rng, 1, 2, 2),
            eta: sample::random_weight_poly(&mut rng, 3, 2, 2),
        };
        let id = BundleMorphism::new(1, 1, Poly::one()).unwrap();
        fun.feed(id.jet_apply(&ctx, &j) == j, || "identity law".into());
        let lhs = psi.jet_apply(&ctx, &phi.jet_apply(&ctx, &j));
        let rhs = comp.jet_apply(&ctx, &j);
        fun.feed(lhs == rhs, || {
            format!("composition law: ({}, {})", lhs.sub(&rhs).e, lhs.sub(&rhs).eta)
        });
        let lhs = phi.jetform_apply(&ctx, &ctx.nabla_j(&nabla01_std(1), &j, DecompRule::Nested));
        let rhs = ctx.nabla_j(&nabla01_std(0), &phi.jet_apply(&ctx, &j), DecompRule::Nested);
        let r = lhs.sub(&rhs);
        fun.feed(r.is_zero(), || format!("holomorphic ladder: ({}, {})", r.t1, r.t2));
    }
    // Non-intertwining morphisms are rejected with the residual.
    let bad = BundleMorphism::new(0, 1, Poly::gen(crate::ncalg::GEN_AS)).unwrap();
    fun.feed(
        bad.verify_holomorphic(&ctx, &nabla01_std(0), &nabla01_std(1), 2).is_err(),
        || "non-intertwining morphism accepted".into(),
    );
    checks.push(fun.into_check());
    SuiteReport::new("jet", *params, checks)
}

fn suite_theorem(params: &SuiteParams) -> SuiteReport {
    let ctx = JetContext::new();
    let mut checks = Vec::new();
    for n in -3..=3i64 {
        let maxlen = (n.unsigned_abs() as usize).max(2).max(params.maxlen.min(3));
        let d = splitting_and_defect(&ctx, &nabla10_canonical(n), &nabla01_std(n), n, maxlen);
        let theta_zero = weight_basis(n, maxlen).iter().all(|w| {
            let e = Poly::from_term(w.clone(), Scalar::one());
            total_curvature_formula(&ctx, &nabla10_canonical(n), &nabla01_std(n), &e, DecompRule::Nested)
                .is_zero()
        });
        let equiv = d.is_zero == theta_zero;
        let expected = (n == 0) == d.is_zero;
        checks.push(Check::from_residual(
            format!("defect-iff-flat-n{n:+}"),
            if equiv && expected {
                None
            } else {
                Some(format!("defect zero: {}, curvature zero: {theta_zero}", d.is_zero))
            },
        ));
    }
    // Perturbations of the (1,0) part at n = 0: the equivalence holds case
    // by case, with both sides computed independently.
    let mut rng = Lcg::new(params.seed ^ 0x7777);
    let mut agg = Agg::new("defect-iff-flat-perturbed-n+0");
    for _ in 0..20 {
        let p = sample::random_weight_poly(&mut rng, 2, 2, 2);
        let conn10 = DelConnection::perturbed(0, p).unwrap();
        let d = splitting_and_defect(&ctx, &conn10, &nabla01_std(0), 0, 2);
        let theta_zero = weight_basis(0, 2).iter().all(|w| {
            let e = Poly::from_term(w.clone(), Scalar::one());
            total_curvature_formula(&ctx, &conn10, &nabla01_std(0), &e, DecompRule::Nested).is_zero()
        });
        agg.feed(d.is_zero == theta_zero, || {
            format!("defect zero: {}, curvature zero: {theta_zero}", d.is_zero)
        });
    }
    checks.push(agg.into_check());
    // Two-route curvature agreement, across decomposition rules.
    for n in -2..=2i64 {
        let mut rng = Lcg::new(params.seed ^ ((n + 5) as u64).wrapping_mul(0xBEEF));
        let mut agg = Agg::new(format!("curvature-two-routes-n{n:+}"));
        for _ in 0..20 {
            let e = sample::random_weight_poly(&mut rng, n, 3, 2);
            let a = total_curvature_formula(
                &ctx,
                &nabla10_canonical(n),
                &nabla01_std(n),
                &e,
                DecompRule::Nested,
            );
            let b = total_curvature_composition(
                &ctx,
                &nabla10_canonical(n),
                &nabla01_std(n),
                &e,
                DecompRule::Mirrored,
            );
            let r = a.sub(&b);
            agg.feed(r.is_zero(), || r.to_string());
        }
        checks.push(agg.into_check());
    }
    SuiteReport::new("theorem", *params, checks)
}

fn suite_curvature_table(params: &SuiteParams) -> SuiteReport {
    let ctx = JetContext::new();
    let mut checks = Vec::new();
    let half = params.n.unsigned_abs().max(4) as i64;
    for n in -half..=half {
        match curvature_line_bundle(&ctx, n) {
            Ok(kappa) => {
                let expect = Scalar::q_pow(-n + 1).mul(&Scalar::qint(n)).neg();
                let ok = kappa == expect;
                let vanish_ok = kappa.is_zero() == (n == 0);
                checks.push(Check::from_residual(
                    format!("curvature-n{n:+}"),
                    if ok && vanish_ok {
                        None
                    } else {
                        Some(format!("got {kappa}, want {expect}"))
                    },
                ));
            }
            Err(e) => checks.push(Check::fail(format!("curvature-n{n:+}"), e.to_string())),
        }
    }
    SuiteReport::new("curvature-table", *params, checks)
}

fn suite_bimodule(params: &SuiteParams) -> SuiteReport {
    let ctx = JetContext::new();
    let mut checks = Vec::new();
    checks.push(Check::from_residual(
        "delbar-surjective-at-truncation",
        if delbar_surjective(&ctx, 3) { None } else { Some("rank deficit".into()) },
    ));
    for n in -2..=2i64 {
        let conn01 = nabla01_std(n);
        let conn10 = nabla10_canonical(n);
        let sb = match sigma_bar_from_connection(&ctx, &conn01, 2) {
            Ok(s) => s,
            Err(e) => {
                checks.push(Check::fail(format!("sigma-extraction-n{n:+}"), e.to_string()));
                continue;
            }
        };
        let se = sigma_from_connection(&ctx, &conn10, 2).expect("canonical braiding");
        checks.push(Check::pass(format!("sigma-extraction-n{n:+}")));
        let zero_se = SigmaMap::zero(TensorTag::EW10, TensorTag::W10E, n);
        let broken_se = se.broken();

        let mut rng = Lcg::new(params.seed ^ ((n + 20) as u64).wrapping_mul(0xACE1));
        let mut compat_canonical = Agg::new(format!("compat-canonical-n{n:+}"));
        let mut compat_zero = Agg::new(format!("compat-zero-braiding-n{n:+}"));
        let mut right_lin = Agg::new(format!("sigma-j-right-linear-n{n:+}"));
        let mut lift_id = Agg::new(format!("lift-identity-n{n:+}"));
        let mut left_lin = Agg::new(format!("sigma-j-left-linear-n{n:+}"));
        let mut psi0_leib = Agg::new(format!("psi0-twisted-leibniz-n{n:+}"));
        for _ in 0..params.samples.clamp(8, 15) {
            let e = sample::random_weight_poly(&mut rng, n, 2, 2);
            let a = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let b = sample::random_weight_poly(&mut rng, 0, 2, 2);
            let xi = sample::random_weight_poly(&mut rng, n, 2, 2);
            let x = sample::random_weight_poly(&mut rng, 0, 2, 2);

            let rc = compat_residual(&ctx, &se, &sb, &e, &a, &b);
            compat_canonical.feed(rc.is_zero(), || rc.to_string());
            compat_zero.feed(
                compat_residual(&ctx, &zero_se, &sb, &e, &a, &b).is_zero(),
                || "zero braiding".into(),
            );

            // At the quotient level the jet braiding is right-linear for
            // every scalar twist; the slot-level defect cancels against
            // the mixing relations.
            let input = SigmaJInput { e: e.clone(), a: a.clone(), xi: xi.clone() };
            for se_used in [&se, &zero_se, &broken_se] {
                if let Ok(rin) = sigma_j_input_right(&ctx, &input, &b, 3) {
                    let lhs = sigma_j(&ctx, &conn01, &conn10, &sb, se_used, &rin, DecompRule::Nested);
                    let rhs = jetform_right(
                        &ctx,
                        se_used,
                        &sigma_j(&ctx, &conn01, &conn10, &sb, se_used, &input, DecompRule::Nested),
                        &b,
                    );
                    let rr = lhs.sub(&rhs);
                    right_lin.feed(rr.is_zero(), || format!("({}, {})", rr.t1, rr.t2));
                }
            }

            // Left-linearity holds unconditionally.
            let left_in = sigma_j_input_left(&ctx, &x, &input, n);
            let lhs = sigma_j(&ctx, &conn01, &conn10, &sb, &se, &left_in, DecompRule::Nested);
            let rhs = ctx.jetform_left(
                &x,
                &sigma_j(&ctx, &conn01, &conn10, &sb, &se, &input, DecompRule::Nested),
            );
            let rl = lhs.sub(&rhs);
            left_lin.feed(rl.is_zero(), || format!("({}, {})", rl.t1, rl.t2));

            // The right-Leibniz identity of the lifted structure, for the
            // canonical, zero, and broken braidings alike.
            let j = JetElement {
                n,
                e: e.clone(),
                eta: sample::random_weight_poly(&mut rng, n + 2, 2, 2),
            };
            for se_used in [&se, &zero_se, &broken_se] {
                let r = lift_residual(&ctx, &conn01, &conn10, &sb, se_used, &j, &b, DecompRule::Nested);
                lift_id.feed(r.is_zero(), || format!("({}, {})", r.t1, r.t2));
            }

            // psi0's twisted Leibniz rule for the lifted derivative.
            let k = sample::random_weight_poly(&mut rng, 2, 2, 2);
            let u = se.apply(&ctx.mul(&e, &k));
            let lhs = ctx.dtilde(&conn01, &ctx.mul(&u, &a));
            let rhs = ctx.mul(&ctx.dtilde(&conn01, &u), &a).add(
                &psi0(&sb).apply(&bimodule::collapse_10e_with_01(&ctx, &u, &ctx.cal.xminus(&a))),
            );
            let rp = lhs.sub(&rhs);
            psi0_leib.feed(rp.is_zero(), || rp.to_string());
        }
        checks.push(compat_canonical.into_check());
        checks.push(compat_zero.into_check());
        checks.push(right_lin.into_check());
        checks.push(lift_id.into_check());
        checks.push(left_lin.into_check());
        checks.push(psi0_leib.into_check());
    }
    // Kernel-part extension and the (1,0) flip, at n = 0.
    let conn10 = nabla10_canonical(0);
    let conn01 = nabla01_std(0);
    let sb = sigma_bar_from_connection(&ctx, &conn01, 2).unwrap();
    let se = sigma_from_connection(&ctx, &conn10, 2).unwrap();
    let mut rng = Lcg::new(params.seed ^ 0xE1E1);
    let mut ext = Agg::new("pp-extension-round-trip");
    let mut flip = Agg::new("flip-twisted-leibniz");
    let mut square = Agg::new("flip-square-n+0");
    for _ in 0..15 {
        let psi = SigmaMap {
            src: TensorTag::W10EW01,
            dst: TensorTag::W01W10E,
            n: 0,
            twist: Scalar::q(),
        };
        let xi = sample::random_weight_poly(&mut rng, 0, 2, 2);
        let restricted = bimodule::extend_psi(
            &ctx,
            &psi,
            &sb,
            &conn10,
            &Poly::zero(),
            &sample::random_weight_poly(&mut rng, -2, 2, 2),
            &xi,
            DecompRule::Nested,
        );
        ext.feed(
            restricted.t1.is_zero() && restricted.t2 == psi.apply(&xi),
            || format!("({}, {})", restricted.t1, restricted.t2),
        );
        let a = sample::random_weight_poly(&mut rng, -2, 2, 2);
        let b = sample::random_weight_poly(&mut rng, 0, 2, 2);
        let rf = psi_nabla_leibniz_residual(&ctx, &conn10, &se, &a, &b);
        flip.feed(rf.is_zero(), || rf.to_string());
        let e = sample::random_weight_poly(&mut rng, 0, 2, 2);
        let x = sample::random_weight_poly(&mut rng, 0, 2, 2);
        let rs = flip_square_residual(&ctx, &conn01, &conn10, &sb, &se, &e, &x);
        square.feed(rs.is_zero(), || rs.to_string());
    }
    checks.push(ext.into_check());
    checks.push(flip.into_check());
    checks.push(square.into_check());
    SuiteReport::new("bimodule", *params, checks)
}
