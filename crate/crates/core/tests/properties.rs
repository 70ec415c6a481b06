use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use robols::missing::{effective_kernel_mass, fit_ols_missing};
use robols::{fit_ols, fit_tv, fit_tv_with, KernelKind, KernelSpec, MissingForm, MissingMask, RegressionSample};

/// Intercept plus `p - 1` bounded regressors, `n` rows, well conditioned.
fn design(max_n: usize, max_p: usize) -> impl Strategy<Value = RegressionSample> {
    (1..=max_p)
        .prop_flat_map(move |p| (Just(p), (p + 2)..=max_n))
        .prop_flat_map(|(p, n)| {
            (
                prop::collection::vec(-5.0..5.0f64, n),
                prop::collection::vec(-3.0..3.0f64, n * (p - 1)),
                Just((n, p)),
            )
        })
        .prop_filter_map("ill-conditioned design", |(y, x, (n, p))| {
            let z = DMatrix::from_fn(n, p, |t, k| if k == 0 { 1.0 } else { x[t * (p - 1) + k - 1] });
            let sv = z.clone().svd(false, false).singular_values;
            let (lo, hi) = (sv.min(), sv.max());
            (lo > 1e-3 * hi).then(|| RegressionSample::new(DVector::from_vec(y), z).unwrap())
        })
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Normal equations with an explicit inverse.
fn oracle(s: &RegressionSample) -> (DVector<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (z, y) = (s.z(), s.y());
    let inv = (z.transpose() * z).try_inverse().unwrap();
    let beta = &inv * z.transpose() * y;
    let u = y - z * &beta;
    let mut meat = DMatrix::zeros(s.p(), s.p());
    for t in 0..s.n() {
        let zt = z.row(t).transpose();
        meat += &zt * zt.transpose() * (u[t] * u[t]);
    }
    let sigma2 = u.norm_squared() / s.n() as f64;
    (beta, &inv * meat * &inv, inv * sigma2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_explicit_inverse(s in design(8, 3)) {
        let fit = fit_ols(&s).unwrap();
        let (beta, robust, standard) = oracle(&s);
        let scale = 1.0 + beta.amax();
        prop_assert!((&fit.beta_hat - &beta).amax() < 1e-9 * scale);
        prop_assert!((&fit.cov_robust - &robust).amax() < 1e-9 * (1.0 + max_abs(&robust)));
        prop_assert!((&fit.cov_standard - &standard).amax() < 1e-9 * (1.0 + max_abs(&standard)));
    }

    #[test]
    fn sandwich_is_symmetric_psd(s in design(40, 4)) {
        let fit = fit_ols(&s).unwrap();
        let c = &fit.cov_robust;
        let top = max_abs(c);
        prop_assert!((c - c.transpose()).amax() <= 1e-14 * top);
        let eig = c.clone().symmetric_eigen().eigenvalues;
        prop_assert!(eig.min() >= -1e-12 * top);
        prop_assert!(fit.se_robust.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn affine_equivariance(s in design(30, 3), a in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64], c in prop::collection::vec(-2.0..2.0f64, 3)) {
        let p = s.p();
        let shift = DVector::from_column_slice(&c[..p]);
        let y2 = s.y() * a + s.z() * &shift;
        let moved = RegressionSample::new(y2, s.z().clone()).unwrap();
        let f1 = fit_ols(&s).unwrap();
        let f2 = fit_ols(&moved).unwrap();
        let expect = &f1.beta_hat * a + shift;
        prop_assert!((&f2.beta_hat - &expect).amax() < 1e-9 * (1.0 + expect.amax()));
        for k in 0..p {
            let want = a.abs() * f1.se_robust[k];
            prop_assert!((f2.se_robust[k] - want).abs() <= 1e-7 * want + 1e-12);
        }
    }

    #[test]
    fn zero_rows_are_inert(s in design(20, 3), extra in 1..5usize) {
        let (n, p) = (s.n(), s.p());
        let y = DVector::from_fn(n + extra, |t, _| if t < n { s.y()[t] } else { 0.0 });
        let z = DMatrix::from_fn(n + extra, p, |t, k| if t < n { s.z()[(t, k)] } else { 0.0 });
        let padded = fit_ols(&RegressionSample::new(y, z).unwrap()).unwrap();
        let plain = fit_ols(&s).unwrap();
        prop_assert!((&padded.beta_hat - &plain.beta_hat).amax() < 1e-10 * (1.0 + plain.beta_hat.amax()));
        prop_assert!((&padded.cov_robust - &plain.cov_robust).amax() < 1e-10 * (1.0 + max_abs(&plain.cov_robust)));
    }

    #[test]
    fn mask_forms_agree(s in design(30, 3), drop in prop::collection::vec(any::<bool>(), 30)) {
        let n = s.n();
        let mut tau: Vec<bool> = (0..n).map(|t| !drop[t]).collect();
        // keep enough rows for a well-posed fit
        for t in tau.iter_mut().take(s.p() + 2) {
            *t = true;
        }
        let mask = MissingMask::new(tau).unwrap();
        let kept = s.select_rows(&mask.observed_indices()).unwrap();
        let sv = kept.z().clone().svd(false, false).singular_values;
        prop_assume!(sv.min() > 1e-3 * sv.max());
        let a = fit_ols_missing(&s, &mask, MissingForm::Zerofill).unwrap();
        let b = fit_ols_missing(&s, &mask, MissingForm::Subsample).unwrap();
        prop_assert!((&a.beta_hat - &b.beta_hat).amax() < 1e-10 * (1.0 + b.beta_hat.amax()));
        prop_assert!((&a.cov_robust - &b.cov_robust).amax() < 1e-10 * (1.0 + max_abs(&b.cov_robust)));
        prop_assert!((a.sigma2 - b.sigma2).abs() < 1e-10 * (1.0 + b.sigma2));
    }

    #[test]
    fn tv_weight_scaling(s in design(25, 2), c in 1e-3..1e3f64, h in 2.0..8.0f64) {
        let k = KernelSpec::gaussian(h).unwrap();
        let base = fit_tv(&s, &k).unwrap();
        let scaled = fit_tv_with(&s, &k, |t, j| c * robols::tv::kernel_weight(&k, t, j)).unwrap();
        for t in 0..s.n() {
            if base.failed[t] {
                prop_assert!(scaled.failed[t]);
                continue;
            }
            for j in 0..s.p() {
                let (b0, b1) = (base.beta_path[(t, j)], scaled.beta_path[(t, j)]);
                prop_assert!((b0 - b1).abs() <= 1e-8 * (1.0 + b0.abs()));
                let (s0, s1) = (base.se_robust_path[(t, j)], scaled.se_robust_path[(t, j)]);
                prop_assert!((s0 - s1).abs() <= 1e-7 * s0 + 1e-12);
            }
        }
    }

    #[test]
    fn kernel_mass_grows_with_observed_set(
        n in 10..80usize,
        h in 1.0..20.0f64,
        seed in prop::collection::vec(any::<bool>(), 80),
        extra in prop::collection::vec(any::<bool>(), 80),
        gaussian in any::<bool>(),
    ) {
        let kind = if gaussian { KernelKind::Gaussian } else { KernelKind::Indicator };
        let k = KernelSpec::new(kind, h).unwrap();
        let mut small: Vec<bool> = seed[..n].to_vec();
        small[0] = true;
        let big: Vec<bool> = (0..n).map(|t| small[t] || extra[t]).collect();
        let small = MissingMask::new(small).unwrap();
        let big = MissingMask::new(big).unwrap();
        let full = MissingMask::all_observed(n);
        for t in 0..n {
            let (a, b, c) = (
                effective_kernel_mass(&small, &k, t),
                effective_kernel_mass(&big, &k, t),
                effective_kernel_mass(&full, &k, t),
            );
            prop_assert!(a <= b + 1e-12 && b <= c + 1e-12);
        }
    }
}
