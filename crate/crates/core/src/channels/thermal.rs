use nalgebra::DMatrix;

use super::{check_headroom, ClassicalNoiseSpec, ThermalNoiseSpec};
use crate::channels::classical::apply_classical_noise;
use crate::error::{invalid, Error, Result};
use crate::fock::{thermal_dim, thermal_state, CMatrix, DensityOperator};
use crate::quadrature::QuadratureRule;

/// `E_eta^N` on a fixed signal cutoff and environment cutoff.
///
/// The beam splitter `exp(theta (a^dagger b - a b^dagger))`, `cos^2 theta = eta`,
/// conserves the total photon number, so it is exponentiated block by block on
/// the complete `(m, K - m)` subspaces. Blocks are never cut by the signal
/// cutoff; signal levels above it only contribute to the recorded tail mass.
#[derive(Debug, Clone)]
pub struct ThermalNoiseChannel {
    spec: ThermalNoiseSpec,
    dim: usize,
    env_probs: Vec<f64>,
    env_tail: f64,
    /// `blocks[K][(m, k)] = <m, K-m| U |k, K-k>`.
    blocks: Vec<DMatrix<f64>>,
}

/// Generator block `theta (a^dagger b - a b^dagger)` on `|m, total - m>`.
pub(crate) fn beam_splitter_generator(total: usize, theta: f64) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(total + 1, total + 1);
    for m in 0..total {
        // a^dagger b |m, total - m> = sqrt((m+1)(total-m)) |m+1, total-m-1>
        let amp = theta * (((m + 1) * (total - m)) as f64).sqrt();
        g[(m + 1, m)] = amp;
        g[(m, m + 1)] = -amp;
    }
    g
}

impl ThermalNoiseChannel {
    pub fn new(spec: ThermalNoiseSpec, dim: usize, env_dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("signal cutoff must be >= 1"));
        }
        let env = thermal_state(spec.n_env, env_dim)?;
        let env_probs: Vec<f64> = (0..env_dim).map(|l| env.matrix()[(l, l)].re).collect();
        let theta = spec.eta.sqrt().clamp(0.0, 1.0).acos();
        let max_total = dim + env_dim - 2;
        let blocks = (0..=max_total)
            .map(|total| beam_splitter_generator(total, theta).exp())
            .collect();
        Ok(Self {
            spec,
            dim,
            env_probs,
            env_tail: env.tail_mass(),
            blocks,
        })
    }

    pub fn spec(&self) -> ThermalNoiseSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_probs.len()
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let support = rho.support_dim();
        check_headroom(support, self.spec.effective_noise(), self.dim)?;
        let out = self.apply_raw(rho.matrix(), support);
        DensityOperator::from_truncated(out, rho.tail_mass() + self.env_tail)
    }

    /// Sum over Kraus-like terms `K_{l,j}`: environment `l -> j` photons moves
    /// signal level `k` to `k + l - j` with amplitude `<k+l-j, j|U|k, l>`.
    pub(crate) fn apply_raw(&self, input: &CMatrix, support: usize) -> CMatrix {
        let d = self.dim;
        let s = support;
        let mut out = CMatrix::zeros(d, d);
        let mut amps = vec![0.0; s];
        for (l, &p) in self.env_probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for j in 0..(s + l) {
                let shift = l as i64 - j as i64;
                let mut any = false;
                for (k, amp) in amps.iter_mut().enumerate() {
                    let total = k + l;
                    let m = k as i64 + shift;
                    *amp = if j <= total && m >= 0 && (m as usize) < d {
                        any = true;
                        self.blocks[total][(m as usize, k)]
                    } else {
                        0.0
                    };
                }
                if !any {
                    continue;
                }
                for k in 0..s {
                    if amps[k] == 0.0 {
                        continue;
                    }
                    let m = (k as i64 + shift) as usize;
                    let ck = p * amps[k];
                    for kp in 0..s {
                        if amps[kp] == 0.0 {
                            continue;
                        }
                        let mp = (kp as i64 + shift) as usize;
                        out[(m, mp)] += input[(k, kp)] * (ck * amps[kp]);
                    }
                }
            }
        }
        out
    }
}

/// `E_eta^N(rho)` with an environment cut at `env_dim` levels.
pub fn apply_thermal_noise(rho: &DensityOperator, spec: ThermalNoiseSpec, env_dim: usize) -> Result<DensityOperator> {
    ThermalNoiseChannel::new(spec, rho.dim(), env_dim)?.apply(rho)
}

/// Largest elementwise deviation between `E_eta^N(rho)` and
/// `N_{(1-eta)N}(E_eta^0(rho))`.
pub fn verify_composition(rho: &DensityOperator, spec: ThermalNoiseSpec) -> Result<f64> {
    let direct = apply_thermal_noise(rho, spec, thermal_dim(spec.n_env))?;
    let lossy = apply_thermal_noise(rho, spec.pure_loss(), 1)?;
    let composed = apply_classical_noise(
        &lossy,
        ClassicalNoiseSpec::new(spec.effective_noise())?,
        &QuadratureRule::default(),
    )?;
    direct.max_abs_diff(&composed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, fock_state, partial_trace, tensor, Mode, C64};

    fn th(eta: f64, n: f64) -> ThermalNoiseSpec {
        ThermalNoiseSpec::new(eta, n).unwrap()
    }

    /// Literal route: rho (x) tau, dense unitary on the truncated two-mode
    /// space, partial trace over the environment.
    fn dense_reference(rho: &DensityOperator, spec: ThermalNoiseSpec, env_dim: usize) -> DensityOperator {
        let d = rho.dim();
        let tau = thermal_state(spec.n_env, env_dim).unwrap();
        let joint = tensor(rho, &tau).unwrap();
        let theta = spec.eta.sqrt().acos();
        let idx = |m: usize, l: usize| m * env_dim + l;
        let mut g = DMatrix::<f64>::zeros(d * env_dim, d * env_dim);
        for m in 0..d {
            for l in 0..env_dim {
                if m + 1 < d && l >= 1 {
                    let amp = theta * (((m + 1) * l) as f64).sqrt();
                    g[(idx(m + 1, l - 1), idx(m, l))] += amp;
                    g[(idx(m, l), idx(m + 1, l - 1))] -= amp;
                }
            }
        }
        let u = g.exp().map(C64::from);
        let evolved = &u * joint.matrix() * u.adjoint();
        let evolved = DensityOperator::from_raw(evolved, 0.0);
        partial_trace(&evolved, Mode::First, (d, env_dim)).unwrap()
    }

    #[test]
    fn block_route_matches_dense_route() {
        let spec = th(0.6, 0.4);
        let env_dim = thermal_dim(0.4);
        let psi = coherent_state(C64::new(0.3, 0.2), 32).unwrap();
        let rho = psi.to_density();
        let block = apply_thermal_noise(&rho, spec, env_dim).unwrap();
        let dense = dense_reference(&rho, spec, env_dim);
        let dev = block.max_abs_diff(&dense).unwrap();
        assert!(dev < 1e-7, "{dev}");
    }

    #[test]
    fn single_photon_splits() {
        // |1,0> -> sqrt(eta)|1,0> + sqrt(1-eta)|0,1>: output diag(1-eta, eta).
        let eta = 0.3;
        let rho = fock_state(1, 12).unwrap().to_density();
        let out = apply_thermal_noise(&rho, th(eta, 0.0), 1).unwrap();
        assert!((out.matrix()[(0, 0)].re - (1.0 - eta)).abs() < 1e-14);
        assert!((out.matrix()[(1, 1)].re - eta).abs() < 1e-14);
    }

    #[test]
    fn vacuum_becomes_thermal() {
        let rho = thermal_state(0.0, 60).unwrap();
        for (eta, n) in [(0.5, 2.0), (0.2, 1.0), (0.9, 3.0)] {
            let out = apply_thermal_noise(&rho, th(eta, n), thermal_dim(n)).unwrap();
            let reference = thermal_state((1.0 - eta) * n, 60).unwrap();
            assert!(out.max_abs_diff(&reference).unwrap() < 1e-8);
        }
    }

    #[test]
    fn unit_transmissivity_is_identity() {
        let rho = coherent_state(C64::new(0.3, -0.7), 40).unwrap().to_density();
        let out = apply_thermal_noise(&rho, th(1.0, 2.0), thermal_dim(2.0)).unwrap();
        let dev = out.max_abs_diff(&rho).unwrap();
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn zero_transmissivity_swaps_in_environment() {
        let rho = coherent_state(C64::new(0.3, -0.7), 70).unwrap().to_density();
        let out = apply_thermal_noise(&rho, th(0.0, 2.0), thermal_dim(2.0)).unwrap();
        let reference = thermal_state(2.0, 70).unwrap();
        assert!(out.max_abs_diff(&reference).unwrap() < 1e-8);
    }

    #[test]
    fn environment_cutoff_too_small() {
        let rho = thermal_state(0.0, 40).unwrap();
        assert!(matches!(
            apply_thermal_noise(&rho, th(0.5, 2.0), 5),
            Err(Error::TailMass { .. })
        ));
    }

    #[test]
    fn composition_examples() {
        let vac = thermal_state(0.0, 60).unwrap();
        assert!(verify_composition(&vac, th(0.4, 1.5)).unwrap() < 1e-7);
        let coh = coherent_state(C64::new(1.0, 0.0), 60).unwrap().to_density();
        assert!(verify_composition(&coh, th(0.7, 0.5)).unwrap() < 1e-6);
        assert!(verify_composition(&coh, th(1.0, 0.8)).unwrap() < 1e-12);
    }
}
