mod common;

use std::sync::Arc;

use common::*;
use proxcert::certify::{worst_contraction_ratio, CheckStatus, Grade};
use proxcert::prox::{zero_oracle, L1Norm};
use proxcert::{
    certify_trace, random_suite, rho, run_pg, tightness_measurement, worst_case_instance,
    CertifyOptions, CheckName, CompositeProblem, Error, GKind,
};

#[test]
fn seeded_suites_certify() {
    for kind in [GKind::Zero, GKind::L1, GKind::Box, GKind::ElasticNet] {
        for inst in random_suite(11, 15, 8, 1.0, 10.0, kind).unwrap() {
            let (mu, lip) = (inst.problem.smooth().mu(), inst.problem.smooth().lip());
            for t in [0.1 / lip, 1.0 / lip, 2.0 / (lip + mu)] {
                let tr = run_pg(&inst.problem, &inst.x0, t, 120, 0.0).unwrap();
                let rep =
                    certify_trace(&inst.problem, &tr, &CertifyOptions::with_id(&inst.id)).unwrap();
                let failed: Vec<_> = rep.checks.iter().filter(|c| !c.passed).collect();
                assert!(rep.passed(), "{} t={t}: {failed:?}", inst.id);
            }
        }
    }
}

#[test]
fn tightness_matches_rho_across_steps() {
    for (mu, lip) in [(1.0, 10.0), (0.5, 4.0), (2.0, 2.0)] {
        for frac in [0.05, 0.1, 0.5, 1.0, 1.5, 2.0] {
            let t = frac / lip;
            let (p, x0) = worst_case_instance(mu, lip, t).unwrap();
            let measured = tightness_measurement(&p, &x0, t, 5).unwrap();
            let expected = rho(t, mu, lip).unwrap();
            assert!(
                (measured - expected).abs() < 1e-12,
                "({mu},{lip}) t={t}: {measured} vs {expected}"
            );
        }
    }
}

#[test]
fn random_quadratics_respect_rho() {
    let t = 0.1;
    let suite = random_suite(3, 30, 10, 1.0, 10.0, GKind::Zero).unwrap();
    for inst in suite {
        let tr = run_pg(&inst.problem, &inst.x0, t, 50, 0.0).unwrap();
        let worst = worst_contraction_ratio(&tr).unwrap();
        assert!(worst <= 0.9 + 1e-12, "{}: {worst}", inst.id);
    }
}

#[test]
fn descent_check_sees_the_forward_term() {
    // With g ≡ 0 the refined inequality is an equality for (L/2)x² at t = 1/L.
    let lip = 4.0;
    let p = CompositeProblem::new(quadratic(&[lip], None), Arc::new(zero_oracle())).unwrap();
    let t = 0.5 / lip;
    let tr = run_pg(&p, &[1.0], t, 5, 0.0).unwrap();
    let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
    let add22 = rep.check(CheckName::DescentAdd22).unwrap();
    assert_eq!(add22.status, CheckStatus::Evaluated);
    assert!(add22.passed);
    // the classic inequality leaves room that the refined one consumes
    let (a, b) = (&tr.records[0], &tr.records[1]);
    let classic = a.phi - b.phi - t / 2.0 * a.prox_grad_norm.powi(2);
    let extra = t / (2.0 * (1.0 - lip * t)) * b.prox_grad_norm.powi(2);
    assert!(classic >= extra - 1e-14);
}

#[test]
fn descent_checks_skip_long_steps() {
    let p = CompositeProblem::new(
        quadratic(&[1.0, 10.0], None),
        Arc::new(L1Norm::new(0.5).unwrap()),
    )
    .unwrap();
    let tr = run_pg(&p, &[3.0, -2.0], 0.15, 30, 0.0).unwrap();
    let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
    for name in [CheckName::DescentAdd20, CheckName::DescentAdd21] {
        assert_eq!(rep.check(name).unwrap().status, CheckStatus::NotApplicable);
    }
    assert!(rep.check(CheckName::Thm1Chain).unwrap().passed);
}

#[test]
fn empirical_eta_is_graded_separately() {
    let p = CompositeProblem::new(
        quadratic(&[1.0, 10.0], Some(&[-2.0, 5.0])),
        Arc::new(L1Norm::new(1.0).unwrap()),
    )
    .unwrap();
    let tr = run_pg(&p, &[4.0, 4.0], 0.1, 60, 0.0).unwrap();
    let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
    let c = rep.check(CheckName::PlGeneralized).unwrap();
    assert_eq!(c.grade, Grade::EmpiricalEta);
    assert!(c.passed, "{c:?}");
}

#[test]
fn tampered_trace_is_rejected() {
    let p = CompositeProblem::new(quadratic(&[1.0, 10.0], None), Arc::new(zero_oracle())).unwrap();
    let mut tr = run_pg(&p, &[1.0, 1.0], 0.1, 10, 0.0).unwrap();
    tr.records[0].phi += 1.0;
    assert!(matches!(
        certify_trace(&p, &tr, &CertifyOptions::default()),
        Err(Error::Consistency(_))
    ));
}

#[test]
fn inflated_gradient_norm_fails_the_chain() {
    let p = CompositeProblem::new(quadratic(&[1.0, 10.0], None), Arc::new(zero_oracle())).unwrap();
    let mut tr = run_pg(&p, &[1.0, 1.0], 0.1, 10, 0.0).unwrap();
    tr.records[5].prox_grad_norm *= 2.0;
    let rep = certify_trace(&p, &tr, &CertifyOptions::default()).unwrap();
    assert!(!rep.passed());
    assert!(!rep.check(CheckName::Thm1Chain).unwrap().passed);
}

#[test]
fn check_subset_is_honoured() {
    let p = CompositeProblem::new(quadratic(&[1.0, 10.0], None), Arc::new(zero_oracle())).unwrap();
    let tr = run_pg(&p, &[1.0, 1.0], 0.1, 10, 0.0).unwrap();
    let opts = CertifyOptions {
        checks: Some(vec![CheckName::Tightness]),
        ..CertifyOptions::default()
    };
    let rep = certify_trace(&p, &tr, &opts).unwrap();
    assert_eq!(rep.checks.len(), 1);
    assert_eq!(rep.checks[0].name, CheckName::Tightness);
}
