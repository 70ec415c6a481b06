use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robols::dgp::noise::{arfima_coeffs, gen_garch, Garch11, NoiseSpec};
use robols::dgp::{catalog, gen_model};
use robols::diagnostics::robust_corr_test;
use robols::empirical::SP500_GARCH;
use robols::stats::mean;

fn rejection_rates(series: impl Fn(u64) -> Vec<f64>, reps: u64, lag: usize) -> (f64, f64) {
    let (mut std, mut rob) = (0, 0);
    for r in 0..reps {
        let t = robust_corr_test(&series(r), lag).unwrap();
        std += t.std_reject as usize;
        rob += t.robust_reject as usize;
    }
    (100.0 * std as f64 / reps as f64, 100.0 * rob as f64 / reps as f64)
}

#[test]
fn corr_tests_have_nominal_size_on_iid_data() {
    let iid = |r: u64| NoiseSpec::iid_normal().generate(1000, &mut ChaCha8Rng::seed_from_u64(1000 + r)).unwrap();
    for lag in [1, 5] {
        let (std, rob) = rejection_rates(iid, 2000, lag);
        assert!((3.5..=6.5).contains(&std), "lag {lag}: standard {std}%");
        assert!((3.5..=6.5).contains(&rob), "lag {lag}: robust {rob}%");
    }
}

#[test]
fn robust_corr_test_holds_size_under_garch() {
    let g = Garch11 { omega: 0.05, alpha: 0.3, beta: 0.6 };
    let (std, rob) = rejection_rates(|r| gen_garch(&g, 2000, 500 + r).unwrap(), 1000, 1);
    assert!((3.0..=8.0).contains(&rob), "robust {rob}%");
    assert!(std > rob + 3.0, "standard {std}% vs robust {rob}%");
}

#[test]
fn ar2_sample_mean() {
    let g = gen_model(&catalog("ar2").unwrap(), 200_000, 5).unwrap();
    let m = mean(g.sample.y().as_slice());
    assert!((m - 5.0 / 3.0).abs() < 0.03, "mean {m}");
}

#[test]
fn sp500_garch_variance() {
    let x = gen_garch(&SP500_GARCH, 400_000, 3).unwrap();
    let v = x.iter().map(|e| e * e).sum::<f64>() / x.len() as f64;
    let target = SP500_GARCH.unconditional_variance();
    assert!((v / target - 1.0).abs() < 0.1, "variance {v} vs {target}");
}

#[test]
fn arfima_weights() {
    let d = 0.4;
    let a = arfima_coeffs(d, 10_001);
    assert_eq!(a[0], 1.0);
    assert!((a[1] - d).abs() < 1e-15);
    assert!((a[2] - d * (1.0 + d) / 2.0).abs() < 1e-15);
    // a_j ~ j^{d-1} / Gamma(d)
    let gamma_d = statrs::function::gamma::gamma(d);
    let j = 10_000.0f64;
    assert!((a[10_000] * gamma_d / j.powf(d - 1.0) - 1.0).abs() < 1e-3);
}
