//! Property tests over random admissible parameters.

use hereditary::kernels::{
    chgf_kernel_r, chgf_relaxation_s, hn_relaxation_function, p_nu_response, PNuVariant,
};
use hereditary::quadrature_oracle::{eh_conv_unity, i_alpha, integrate, q_conv_unity};
use hereditary::resolvent::{hilbert_identity_residual, modulus_compliance_transform};
use hereditary::specfun::{eh_alpha, eh_alpha_series, gamma, gauss_2f1_11};
use hereditary::spectra::{
    hn_modulus, hn_normalized, rabotnov_modulus, rabotnov_spectrum_h, rabotnov_spectrum_l,
};
use hereditary::{FractionalOrder, HNParams, QuadratureSpec, ResolventSpec, SeriesControl};
use proptest::prelude::*;

fn fo(x: f64) -> FractionalOrder {
    FractionalOrder::new(x).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn any_spec() -> impl Strategy<Value = ResolventSpec> {
    (
        0.05f64..0.95,
        0.1f64..10.0,
        0.0f64..3.0,
        0.0f64..5.0,
        1.0f64..10.0,
        0usize..3,
    )
        .prop_map(|(a, tau, n_sigma, extra, ratio, v)| match v {
            0 => ResolventSpec::eh(fo(a), tau, tau * ratio).unwrap(),
            1 => ResolventSpec::q(fo(a), tau, n_sigma + extra, n_sigma).unwrap(),
            _ => ResolventSpec::p(fo(a), tau, n_sigma + extra, n_sigma).unwrap(),
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_reflection(x in 0.001f64..0.999) {
        let v = gamma(x).unwrap() * gamma(1.0 - x).unwrap() * (std::f64::consts::PI * x).sin() / std::f64::consts::PI;
        prop_assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_log_identity(x in 1e-6f64..1.0) {
        prop_assert!(rel(gauss_2f1_11(2.0, -x).unwrap() * x, x.ln_1p()) < 1e-10);
    }

    #[test]
    fn eh_continuous_at_unit_order(theta in 0.1f64..5.0) {
        let ctl = SeriesControl::default();
        let near = eh_alpha(fo(1.0 - 1e-6), 1.0, theta, &ctl).unwrap();
        let at = eh_alpha(FractionalOrder::ONE, 1.0, theta, &ctl).unwrap();
        prop_assert!((near - at).abs() < 1e-4);
    }

    #[test]
    fn chgf_kernel_is_minus_derivative(a in 0.05f64..1.0, theta in 0.01f64..8.0) {
        let ctl = SeriesControl::default();
        let h = 1e-5;
        let up = chgf_relaxation_s(fo(a), 1.0, theta + h, &ctl).unwrap();
        let down = chgf_relaxation_s(fo(a), 1.0, theta - h, &ctl).unwrap();
        let r = chgf_kernel_r(fo(a), 1.0, theta, &ctl).unwrap();
        prop_assert!((r + (up - down) / (2.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn relaxation_functions_are_monotone(a in 0.05f64..1.0, b in 0.05f64..1.0) {
        let ctl = SeriesControl::default();
        let p = HNParams::shape(a, b, 1.0).unwrap();
        let grid = log_grid(0.01, 20.0, 25);
        let s: Vec<f64> = grid.iter().map(|&t| chgf_relaxation_s(fo(a), 1.0, t, &ctl).unwrap()).collect();
        let f: Vec<f64> = grid.iter().map(|&t| hn_relaxation_function(&p, t, &ctl).unwrap()).collect();
        for w in s.windows(2) {
            prop_assert!(w[1] < w[0]);
        }
        for w in f.windows(2) {
            prop_assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn p_nu_variant_swap(m in 0.05f64..0.95, a in 0.1f64..1.0, t in 0.0f64..5.0) {
        let ctl = SeriesControl::default();
        let three = p_nu_response(fo(a), m, 1.0, PNuVariant::Three, t, &ctl);
        let four = p_nu_response(fo(a), 1.0 / m, 1.0, PNuVariant::Four, t, &ctl);
        match (three, four) {
            (Ok(x), Ok(y)) => prop_assert!(rel(x, y) < 1e-8),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "branches disagree on success: {other:?}"),
        }
    }

    #[test]
    fn resolvent_relations_hold(spec in any_spec()) {
        prop_assert!(spec.relation_defect() <= 1e-12);
    }

    #[test]
    fn splitting_identity(spec in any_spec(), l1 in 0.01f64..20.0, l2 in 0.01f64..20.0) {
        prop_assume!((l1 - l2).abs() > 1e-3);
        let omegas = log_grid(1e-3, 1e3, 100);
        prop_assert!(hilbert_identity_residual(&spec, l1, l2, &omegas).unwrap() <= 1e-12);
    }

    #[test]
    fn modulus_and_compliance_are_inverse(spec in any_spec(), w in 1e-3f64..1e3, m_inf in 0.5f64..5.0) {
        let (m, j) = modulus_compliance_transform(&spec, m_inf, w).unwrap();
        prop_assert!((m * j - 1.0).norm() < 1e-10);
        prop_assert!((j - 1.0 / m).norm() <= 1e-10 * j.norm());
    }

    #[test]
    fn spectrum_log_symmetry_and_shift(a in 0.05f64..0.95, u in -20.0f64..20.0, ratio in 1.0f64..50.0) {
        let h = |x: f64| rabotnov_spectrum_h(fo(a), 1.0, x).unwrap();
        prop_assert!(rel(h(u.exp()), h((-u).exp())) <= 1e-15);
        let tau_sigma = ratio;
        let tau = u.exp();
        let l = rabotnov_spectrum_l(fo(a), tau_sigma, tau).unwrap();
        prop_assert!(rel(l, h(tau / tau_sigma)) <= 1e-15);
    }

    #[test]
    fn loss_is_non_negative(a in 0.01f64..=1.0, b in 0.01f64..=1.0, w in 1e-6f64..1e6) {
        let p = HNParams::shape(a, b, 1.0).unwrap();
        prop_assert!(hn_normalized(&p, w).unwrap().im <= 0.0);
    }

    #[test]
    fn cole_cole_modulus_is_rabotnov(a in 0.05f64..1.0, w in 1e-4f64..1e4) {
        let p = HNParams::new(a, 1.0, 0.7, 3.0, 1.0).unwrap();
        let hn = hn_modulus(&p, w).unwrap();
        let rab = rabotnov_modulus(3.0, 2.0, fo(a), 0.7, w).unwrap();
        prop_assert!((hn - rab).norm() <= 1e-14 * rab.norm());
    }

    #[test]
    fn i_alpha_complements_the_eh_convolution(a in 0.1f64..0.9, theta in 0.05f64..5.0) {
        let ctl = SeriesControl::default();
        let quad = QuadratureSpec::default();
        let conv = integrate(
            |s| eh_alpha_series(fo(a), 1.0, s, &ctl).unwrap(),
            0.0,
            theta,
            &quad.with_singularity(a - 1.0),
        )
        .unwrap();
        prop_assert!((i_alpha(a, theta, &quad).unwrap() + conv.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn node_doubling_is_stable(a in 0.1f64..0.9, n in 0.0f64..3.0, theta in 0.05f64..20.0) {
        let quad = QuadratureSpec::default();
        let fine = quad.refined();
        prop_assert!((i_alpha(a, theta, &quad).unwrap() - i_alpha(a, theta, &fine).unwrap()).abs() <= 1e-10);
        let q0 = q_conv_unity(a, n, theta, &quad).unwrap();
        prop_assert!((q0 - q_conv_unity(a, n, theta, &fine).unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn relaxation_and_creep_functions_start_right() {
    let quad = QuadratureSpec::default();
    for a in [0.1, 0.5, 0.9] {
        assert!((i_alpha(a, 0.0, &quad).unwrap() - 1.0).abs() < 1e-8);
        assert!(eh_conv_unity(a, 0.0, &quad).unwrap().abs() < 1e-8);
    }
}

#[test]
fn debye_modulus() {
    let p = HNParams::new(1.0, 1.0, 2.0, 3.0, 1.0).unwrap();
    for w in log_grid(1e-3, 1e3, 20) {
        let debye = 3.0 - 2.0 / hereditary::Complex64::new(1.0, 2.0 * w);
        assert!((hn_modulus(&p, w).unwrap() - debye).norm() <= 1e-14 * debye.norm());
    }
}
