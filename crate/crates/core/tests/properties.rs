//! Property tests over randomized inputs and parameters.

use bosonic_minent::bounds::{
    figure_data, h_fun, lower_bound_1, lower_bound_3_at, lower_bound_4, min_renyi_coherent, DEFAULT_K_MAX,
};
use bosonic_minent::channels::{
    apply_classical_noise, apply_thermal_noise, converged_dim, propagate_gaussian, ChannelSpec, ClassicalNoiseSpec,
    GaussianState, ThermalNoiseSpec,
};
use bosonic_minent::entropies::{husimi, renyi_entropy, renyi_wehrl, wehrl, HusimiRule};
use bosonic_minent::fock::{
    coherent_dim, coherent_state, displacement_block, thermal_dim, thermal_state, CMatrix, DensityOperator,
    FockOperator, PureState, C64,
};
use bosonic_minent::minimizer::{gaussian_output_entropy, minimize_output_renyi, SearchConfig};
use bosonic_minent::quadrature::QuadratureRule;
use bosonic_minent::theta_multimode::{croma_bound, k_purity_direct};
use nalgebra::DVector;
use proptest::prelude::*;

fn amplitudes(support: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), support)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
}

fn pure(amps: &[(f64, f64)], dim: usize) -> PureState {
    let v = DVector::from_fn(dim, |i, _| {
        amps.get(i).map_or(C64::new(0.0, 0.0), |(a, b)| C64::new(*a, *b))
    });
    PureState::normalized(v).unwrap()
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r)
        .prop_map(|(a, b)| C64::new(a, b))
        .prop_filter("in disc", move |c| c.norm() <= r)
}

fn classical_output(amps: &[(f64, f64)], n: f64) -> DensityOperator {
    let dim = converged_dim(amps.len(), n);
    apply_classical_noise(
        &pure(amps, dim).to_density(),
        ClassicalNoiseSpec::new(n).unwrap(),
        &QuadratureRule::default(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn displacement_composition(mu in complex(2.0), nu in complex(2.0)) {
        // Low block of D(mu) D(nu) against e^{i Im(mu nu*)} D(mu + nu); inner sum kept long.
        let inner = 160;
        let lhs = displacement_block(mu, 12, inner) * displacement_block(nu, inner, 12);
        let phase = C64::new(0.0, (mu * nu.conj()).im).exp();
        let rhs = displacement_block(mu + nu, 12, 12) * phase;
        let dev = (lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-8, "{}", dev);
    }

    #[test]
    fn coherent_overlap(a in complex(3.0), b in complex(3.0)) {
        let dim = coherent_dim(a).max(coherent_dim(b));
        let ov = coherent_state(a, dim).unwrap().inner(&coherent_state(b, dim).unwrap()).unwrap();
        prop_assert!((ov.norm_sqr() - (-(a - b).norm_sqr()).exp()).abs() < 1e-8);
    }

    #[test]
    fn classical_outputs_are_states(amps in amplitudes(4), n in 0.05f64..3.0) {
        let out = classical_output(&amps, n);
        prop_assert!(out.validate().is_ok());
        prop_assert!(out.tail_mass() < 1e-8, "tail {}", out.tail_mass());
        prop_assert!((out.trace().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn thermal_outputs_are_states(amps in amplitudes(3), eta in 0.0f64..=1.0, n_env in 0.0f64..2.0) {
        let spec = ThermalNoiseSpec::new(eta, n_env).unwrap();
        let dim = converged_dim(3, spec.effective_noise());
        let out = apply_thermal_noise(&pure(&amps, dim).to_density(), spec, thermal_dim(n_env)).unwrap();
        prop_assert!(out.validate().is_ok());
        prop_assert!(out.tail_mass() < 1e-8, "tail {}", out.tail_mass());
    }

    #[test]
    fn gaussian_moments_match(alpha in complex(1.0), nbar in 0.0f64..1.0, n in 0.0f64..1.5,
                              eta in 0.1f64..=1.0, n_env in 0.0f64..1.5, thermal_channel: bool, use_thermal_input: bool) {
        let channel = if thermal_channel { ChannelSpec::thermal(eta, n_env).unwrap() } else { ChannelSpec::classical(n).unwrap() };
        let noise = channel.effective_noise();
        // States are built on their own cutoff and zero-padded, so the support stays small.
        let (rho, g) = if use_thermal_input {
            let s = thermal_dim(nbar);
            (thermal_state(nbar, s).unwrap().padded(converged_dim(s, noise)).unwrap(), GaussianState::thermal(nbar).unwrap())
        } else {
            let s = coherent_dim(alpha);
            (coherent_state(alpha, s).unwrap().to_density().padded(converged_dim(s, noise)).unwrap(), GaussianState::coherent(alpha))
        };
        let out = match channel {
            ChannelSpec::Classical(c) => apply_classical_noise(&rho, c, &QuadratureRule::default()).unwrap(),
            ChannelSpec::Thermal(t) => apply_thermal_noise(&rho, t, thermal_dim(t.n_env)).unwrap(),
        };
        let fock = GaussianState::from_density(&out).unwrap();
        let expected = propagate_gaussian(&g, &channel);
        prop_assert!((fock.mean - expected.mean).norm() < 1e-6);
        prop_assert!((fock.cov - expected.cov).abs().max() < 1e-6);
    }

    #[test]
    fn renyi_monotone_in_order(amps in amplitudes(4), n in 0.1f64..2.0) {
        let out = classical_output(&amps, n);
        let grid = [0.5, 1.5, 2.0, 3.0, 5.0, 10.0];
        let s: Vec<f64> = grid.iter().map(|z| renyi_entropy(&out, *z).unwrap()).collect();
        for i in 1..grid.len() {
            prop_assert!(s[i] <= s[i - 1] + 1e-12);
            let scaled = |j: usize| (grid[j] - 1.0) / grid[j] * s[j];
            prop_assert!(scaled(i) >= scaled(i - 1) - 1e-12);
        }
    }

    #[test]
    fn renyi_unitary_invariance(amps in amplitudes(5), entries in prop::collection::vec(-1.0f64..1.0, 50), z in 0.3f64..6.0) {
        let dim = 5;
        let m = CMatrix::from_fn(dim, dim, |i, j| C64::new(entries[2 * (i * dim + j)], entries[2 * (i * dim + j) + 1]));
        let q = m.qr().q();
        let mixed = DensityOperator::new({
            let psi = pure(&amps, dim).to_density();
            psi.matrix() * C64::from(0.6) + CMatrix::identity(dim, dim) * C64::from(0.4 / dim as f64)
        }).unwrap();
        let rotated = mixed.conjugated(&FockOperator::new(q).unwrap()).unwrap();
        prop_assert!((renyi_entropy(&mixed, z).unwrap() - renyi_entropy(&rotated, z).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn max_output_eigenvalue(amps in amplitudes(4), n in 0.1f64..2.0) {
        let out = classical_output(&amps, n);
        let lmax = out.spectrum().unwrap().into_iter().fold(0.0, f64::max);
        prop_assert!(lmax <= 1.0 / (n + 1.0) + 1e-6);
    }

    #[test]
    fn bound_ordering(n in 0.05f64..5.0, z in 0.2f64..12.0) {
        let c = figure_data(n, &[z], None, DEFAULT_K_MAX).unwrap();
        for lb in [c.lb1[0], c.lb2[0], c.lb3[0], c.lb4[0]] {
            prop_assert!(lb <= c.upper[0] + 1e-9);
        }
    }

    #[test]
    fn integer_orders_are_exact(n in 0.05f64..5.0, k in 2usize..10) {
        let exact = min_renyi_coherent(n, k as f64);
        prop_assert!((lower_bound_1(n, k as f64, None) - exact).abs() < 1e-10);
        let lb3 = lower_bound_3_at(n, k as f64, k).unwrap().unwrap();
        prop_assert!((lb3 - exact).abs() < 1e-10);
    }

    #[test]
    fn h_monotone(z in prop_oneof![0.1f64..0.95, 1.05f64..8.0]) {
        let mut prev = h_fun(1e-3, z).unwrap();
        for i in 2..=1000 {
            let cur = h_fun(i as f64 * 1e-3, z).unwrap();
            if z > 1.0 { prop_assert!(cur >= prev - 1e-14); } else { prop_assert!(cur <= prev + 1e-14); }
            prev = cur;
        }
    }

    #[test]
    fn lb4_at_order_one(n in 0.05f64..10.0) {
        prop_assert!((lower_bound_4(n, 1.0) - (1.0 + n.ln())).abs() < 1e-14);
        prop_assert!(lower_bound_4(n, 1.0 + 1e-4) <= min_renyi_coherent(n, 1.0 + 1e-4));
    }

    #[test]
    fn gaussian_argmin_unique(n in 0.05f64..3.0, z in 0.3f64..6.0, eta in 0.05f64..1.0, n_env in 0.1f64..3.0, thermal: bool) {
        let channel = if thermal { ChannelSpec::thermal(eta, n_env).unwrap() } else { ChannelSpec::classical(n).unwrap() };
        let at_one = gaussian_output_entropy(&channel, z, 1.0).unwrap();
        let mut up = at_one;
        let mut down = at_one;
        for d in [1.05f64, 1.3, 2.0, 5.0] {
            let a = gaussian_output_entropy(&channel, z, d).unwrap();
            let b = gaussian_output_entropy(&channel, z, 1.0 / d).unwrap();
            prop_assert!(a > up && b > down);
            up = a;
            down = b;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn wehrl_properties(amps in amplitudes(3), n in 0.0f64..1.5) {
        let out = classical_output(&amps, n.max(1e-3));
        let field = husimi(&out, HusimiRule::auto(&out).doubled()).unwrap();
        let w = wehrl(&field);
        prop_assert!(w >= 1.0 - 1e-6);
        prop_assert!((renyi_wehrl(&field, 1.0 + 1e-3).unwrap() - w).abs() < 1e-2);
    }

    #[test]
    fn coherent_inputs_saturate(beta in complex(1.5), n in 0.2f64..1.5, k in 2u32..4) {
        let psi = coherent_state(beta, coherent_dim(beta)).unwrap();
        let p = k_purity_direct(&psi, n, k, &QuadratureRule::default()).unwrap();
        prop_assert!((p - croma_bound(k as usize, n).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn coherent_start_sanity(n in 0.2f64..2.0, z in 0.5f64..4.0, eta in 0.2f64..0.9, n_env in 0.2f64..2.0, thermal: bool) {
        let channel = if thermal { ChannelSpec::thermal(eta, n_env).unwrap() } else { ChannelSpec::classical(n).unwrap() };
        let r = minimize_output_renyi(channel, z, &SearchConfig::new(2, 0, 0).with_coherent_start(true)).unwrap();
        prop_assert!(r.best_value <= r.coherent_value + 1e-8, "{} vs {}", r.best_value, r.coherent_value);
        prop_assert!(r.truncation_error < 1e-5);
        prop_assert!(!r.violation);
    }
}

#[test]
fn unital_away_from_cutoff() {
    let d0 = 40;
    for n in [0.1, 0.5, 1.0] {
        let dim = converged_dim(d0, n);
        let mixed = DensityOperator::new(CMatrix::from_fn(dim, dim, |i, j| {
            if i == j && i < d0 {
                C64::from(1.0 / d0 as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap();
        let out =
            apply_classical_noise(&mixed, ClassicalNoiseSpec::new(n).unwrap(), &QuadratureRule::default()).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let expected = if i == j { 1.0 / d0 as f64 } else { 0.0 };
                assert!((out.matrix()[(i, j)] - expected).norm() < 1e-6, "n={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn quadrature_doubling_converged() {
    let amps = [(0.5, 0.1), (-0.3, 0.4), (0.2, -0.6), (0.1, 0.2)];
    for n in [0.3, 1.0, 3.0] {
        let dim = converged_dim(4, n).min(80);
        let rho = pure(&amps, dim).to_density();
        let spec = ClassicalNoiseSpec::new(n).unwrap();
        let quad = QuadratureRule::default();
        let a = apply_classical_noise(&rho, spec, &quad).unwrap();
        let b = apply_classical_noise(&rho, spec, &quad.doubled().unwrap()).unwrap();
        let dev = a.max_abs_diff(&b).unwrap();
        assert!(dev < 1e-8, "n={n}: {dev}");
    }
}

#[test]
fn asymptotic_tightness() {
    let c = figure_data(1.0, &[50.0], None, DEFAULT_K_MAX).unwrap();
    assert!(c.upper[0] - c.lb_max(0) < 0.02);
}

#[test]
fn bound_ordering_on_dense_grids() {
    let grid = bosonic_minent::bounds::linear_grid(0.2, 12.0, 200);
    for n in [0.1, 1.0, 5.0] {
        let c = figure_data(n, &grid, None, DEFAULT_K_MAX).unwrap();
        assert!((0..grid.len()).all(|i| c.lb_max(i) <= c.upper[i] + 1e-9));
    }
}
