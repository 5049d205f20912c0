//! The classical-noise map `N_n` and the thermal-noise map `E_eta^N`.

mod classical;
mod gaussian;
mod thermal;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use classical::{apply_classical_noise, apply_classical_noise_converged, ClassicalNoiseChannel};
pub use gaussian::{effective_thermal_photon, propagate_gaussian, GaussianState};
pub use thermal::{apply_thermal_noise, verify_composition, ThermalNoiseChannel};

/// Random Gaussian displacement with `n` mean photons of added noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalNoiseSpec {
    pub n: f64,
}

impl ClassicalNoiseSpec {
    pub fn new(n: f64) -> Result<Self> {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(invalid(format!("noise n must be >= 0, got {n}")));
        }
        Ok(Self { n })
    }
}

/// Beam-splitter coupling (transmissivity `eta`) to a thermal mode with
/// `n_env` mean photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalNoiseSpec {
    pub eta: f64,
    #[serde(rename = "N")]
    pub n_env: f64,
}

impl ThermalNoiseSpec {
    pub fn new(eta: f64, n_env: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(invalid(format!("eta must lie in [0, 1], got {eta}")));
        }
        if !(n_env >= 0.0) || !n_env.is_finite() {
            return Err(invalid(format!("environment photon number must be >= 0, got {n_env}")));
        }
        Ok(Self { eta, n_env })
    }

    /// The classical-noise strength `(1 - eta) N` of the composition rule.
    pub fn effective_noise(&self) -> f64 {
        (1.0 - self.eta) * self.n_env
    }

    /// The pure-loss channel with the same transmissivity.
    pub fn pure_loss(&self) -> ThermalNoiseSpec {
        ThermalNoiseSpec {
            eta: self.eta,
            n_env: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Classical(ClassicalNoiseSpec),
    Thermal(ThermalNoiseSpec),
}

impl ChannelSpec {
    pub fn classical(n: f64) -> Result<Self> {
        Ok(Self::Classical(ClassicalNoiseSpec::new(n)?))
    }

    pub fn thermal(eta: f64, n_env: f64) -> Result<Self> {
        Ok(Self::Thermal(ThermalNoiseSpec::new(eta, n_env)?))
    }

    /// Noise of the classical-noise channel whose minimum output entropies
    /// coincide with this channel's.
    pub fn effective_noise(&self) -> f64 {
        match self {
            Self::Classical(c) => c.n,
            Self::Thermal(t) => t.effective_noise(),
        }
    }
}

/// Working cutoff needed for an input supported below `support` under noise `noise`.
pub fn required_dim(support: usize, noise: f64) -> usize {
    support + (10.0 * (noise + 1.0)).ceil() as usize
}

/// A cutoff at which the output of a thermal-like spread of `noise` photons
/// loses less than about `1e-14` of its weight; never below [`required_dim`].
pub fn converged_dim(support: usize, noise: f64) -> usize {
    let spread = if noise > 0.0 {
        (1e-14f64.ln() / (noise / (noise + 1.0)).ln()).ceil() as usize
    } else {
        0
    };
    required_dim(support, noise).max(support + spread + 8)
}

pub(crate) fn check_headroom(support: usize, noise: f64, dim: usize) -> Result<()> {
    let required = required_dim(support, noise);
    if dim < required {
        return Err(Error::Headroom {
            support,
            noise,
            required,
            dim,
        });
    }
    Ok(())
}
