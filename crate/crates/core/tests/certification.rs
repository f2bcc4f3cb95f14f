mod common;

use common::{Oracle, ORACLES};
use primal_dual::analysis::{
    certify_saddle, kkt_residual, lie_derivative, lyapunov_value, sample_domain_points,
    SamplingConfig,
};
use primal_dual::dynamics::{field_primal_dual, field_with_gains, verify_projection_identity};
use primal_dual::linalg::norm;
use primal_dual::problem::{
    central_difference, check_curvature, check_gradients, grad_lambda_lagrangian,
    grad_x_lagrangian, lagrangian, relative_error,
};
use primal_dual::{Gains64, Point64};

fn samples(oracle: &Oracle, count: usize, seed: u64) -> Vec<Point64> {
    sample_domain_points(
        &oracle.saddle(),
        &SamplingConfig {
            count,
            seed,
            ..Default::default()
        },
    )
    .unwrap()
}

#[test]
fn oracle_optimizers_certify() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        let p = oracle.saddle().as_point();
        let report = kkt_residual(&prog, &p).unwrap();
        assert!(report.total <= 1e-9, "{}: {report:?}", oracle.name);
        assert!(certify_saddle(&prog, &p, 1e-9).is_ok());
        // the file annotation agrees with the hand derivation
        assert_eq!(
            oracle.spec().saddle.unwrap(),
            oracle.saddle(),
            "{}",
            oracle.name
        );
    }
}

#[test]
fn lagrangian_gradients_match_finite_differences() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        for p in samples(oracle, 100, 3) {
            let n = p.n();
            let stacked = p.stacked();
            let lag = |z: &[f64]| lagrangian(&prog, &Point64::from_stacked(n, z)).unwrap();
            let gx = grad_x_lagrangian(&prog, &p).unwrap();
            let gl = grad_lambda_lagrangian(&prog, &p).unwrap();
            for (j, &analytic) in gx.iter().chain(&gl).enumerate() {
                let fd = central_difference(lag, &stacked, j);
                assert!(
                    relative_error(analytic, fd) <= 1e-5,
                    "{} at {p}: component {j} analytic {analytic} fd {fd}",
                    oracle.name
                );
            }
        }
    }
}

#[test]
fn programs_pass_sampled_curvature_and_gradient_audits() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        assert!(
            check_curvature(&prog, 500, 10.0, 1).passed(),
            "{}",
            oracle.name
        );
        assert!(
            check_gradients(&prog, 100, 10.0, 1).passed(1e-5),
            "{}",
            oracle.name
        );
    }
}

#[test]
fn projection_identity_holds_on_mixed_samples() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        let pts = samples(oracle, 10_000, 5);
        let boundary = pts.iter().filter(|p| p.lambda.contains(&0.0)).count();
        assert!(boundary * 10 >= pts.len() * 3);
        let g_signs = pts
            .iter()
            .map(|p| primal_dual::ConcaveProgram::constraints(&prog, &p.x)[0] < 0.0)
            .collect::<Vec<_>>();
        assert!(g_signs.iter().any(|&s| s) && g_signs.iter().any(|&s| !s));
        assert!(
            pts.iter().all(|p| verify_projection_identity(&prog, p)),
            "{}",
            oracle.name
        );
    }
}

#[test]
fn lie_derivative_is_nonpositive() {
    let gains = Gains64::new(vec![0.5], vec![3.0]).unwrap();
    for oracle in &ORACLES {
        let prog = oracle.program();
        let saddle = oracle.saddle();
        let worst = samples(oracle, 10_000, 9)
            .iter()
            .map(|p| lie_derivative(&prog, &saddle, p, None).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 1e-12, "{}: {worst}", oracle.name);
    }
    let oracle = &ORACLES[0];
    let worst = samples(oracle, 2_000, 10)
        .iter()
        .map(|p| lie_derivative(&oracle.program(), &oracle.saddle(), p, Some(&gains)).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-12);
}

#[test]
fn equilibria_coincide_with_kkt_points() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        let saddle = oracle.saddle();
        let (field, _) = field_primal_dual(&prog, &saddle.as_point()).unwrap();
        assert!(norm(&field) <= 1e-9);
        for p in samples(oracle, 1_000, 13) {
            let kkt = kkt_residual(&prog, &p).unwrap().total <= 1e-9;
            let (field, _) = field_primal_dual(&prog, &p).unwrap();
            assert_eq!(kkt, norm(&field) <= 1e-9, "{} at {p}", oracle.name);
        }
    }
}

#[test]
fn gains_preserve_the_zero_set() {
    let oracle = &ORACLES[2];
    let prog = oracle.program();
    let gains = Gains64::new(vec![0.6, 2.7], vec![1.3, 0.9]).unwrap();
    let mut pts = samples(oracle, 500, 17);
    pts.push(oracle.saddle().as_point());
    for p in pts {
        let (plain, _) = field_primal_dual(&prog, &p).unwrap();
        let (scaled, _) = field_with_gains(&prog, &gains, &p).unwrap();
        for (a, b) in plain.iter().zip(&scaled) {
            assert_eq!(*a == 0.0, *b == 0.0);
        }
    }
}

#[test]
fn saddle_inequalities_hold() {
    for oracle in &ORACLES {
        let prog = oracle.program();
        let saddle = oracle.saddle();
        let center = lagrangian(&prog, &saddle.as_point()).unwrap();
        for p in samples(oracle, 2_000, 21) {
            let vary_x = Point64::raw(p.x.clone(), saddle.lambda_star.clone());
            let vary_lambda = Point64::raw(saddle.x_star.clone(), p.lambda.clone());
            assert!(lagrangian(&prog, &vary_x).unwrap() <= center + 1e-9);
            assert!(lagrangian(&prog, &vary_lambda).unwrap() >= center - 1e-9);
        }
    }
}

#[test]
fn lyapunov_is_positive_away_from_saddle() {
    let oracle = &ORACLES[1];
    let saddle = oracle.saddle();
    for p in samples(oracle, 500, 23) {
        let v = lyapunov_value(&saddle, &p).unwrap();
        assert!(v >= 0.0);
        assert_eq!(v == 0.0, p == saddle.as_point());
    }
}
