use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::ChannelSpec;
use crate::error::{invalid, Result};
use crate::fock::{DensityOperator, C64};

/// First and second moments of a single-mode Gaussian state.
///
/// `cov` is in the `(x, p)` quadrature basis with `a = (x + i p)/sqrt(2)`, so
/// the vacuum has `cov = I/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean: C64,
    pub cov: Matrix2<f64>,
}

const UNCERTAINTY_SLACK: f64 = 1e-12;

impl GaussianState {
    pub fn new(mean: C64, cov: Matrix2<f64>) -> Result<Self> {
        if (cov[(0, 1)] - cov[(1, 0)]).abs() > 1e-12 {
            return Err(invalid("covariance matrix must be symmetric"));
        }
        let det = cov.determinant();
        if !(cov[(0, 0)] > 0.0) || det < 0.25 - UNCERTAINTY_SLACK {
            return Err(invalid(format!(
                "covariance violates the uncertainty principle (det {det:.6e} < 1/4)"
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn coherent(alpha: C64) -> Self {
        Self {
            mean: alpha,
            cov: Matrix2::identity() * 0.5,
        }
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(invalid(format!("thermal photon number must be >= 0, got {nbar}")));
        }
        Ok(Self {
            mean: C64::new(0.0, 0.0),
            cov: Matrix2::identity() * (nbar + 0.5),
        })
    }

    /// Pure squeezed vacuum `diag(s/2, 1/(2s))`.
    pub fn squeezed(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(invalid(format!("squeeze parameter must be > 0, got {s}")));
        }
        Ok(Self {
            mean: C64::new(0.0, 0.0),
            cov: Matrix2::new(s / 2.0, 0.0, 0.0, 0.5 / s),
        })
    }

    /// Moments read off a density matrix. Exact for Gaussian states up to truncation.
    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        let mean = rho.mean_amplitude();
        let da2 = rho.mean_amplitude_squared() - mean * mean;
        let dn = rho.mean_photon_number() - mean.norm_sqr();
        let cov = Matrix2::new(da2.re + dn + 0.5, da2.im, da2.im, -da2.re + dn + 0.5);
        Self::new(mean, cov)
    }

    pub fn det(&self) -> f64 {
        self.cov.determinant()
    }
}

/// Exact action of either channel on a Gaussian state.
pub fn propagate_gaussian(g: &GaussianState, channel: &ChannelSpec) -> GaussianState {
    match channel {
        ChannelSpec::Classical(c) => GaussianState {
            mean: g.mean,
            cov: g.cov + Matrix2::identity() * c.n,
        },
        ChannelSpec::Thermal(t) => GaussianState {
            mean: g.mean * t.eta.sqrt(),
            cov: g.cov * t.eta + Matrix2::identity() * ((1.0 - t.eta) * (t.n_env + 0.5)),
        },
    }
}

/// `sqrt(det cov) - 1/2`: photon number of the thermal state with equal entropy.
pub fn effective_thermal_photon(g: &GaussianState) -> Result<f64> {
    let det = g.det();
    if det < 0.25 - UNCERTAINTY_SLACK {
        return Err(invalid(format!("det {det:.6e} below 1/4")));
    }
    Ok((det.max(0.25).sqrt() - 0.5).max(0.0))
}
