//! Entropy functionals of density operators and of Husimi Q functions.
//!
//! Spectral quantities go through a Hermitian eigendecomposition; eigenvalues
//! in `[-1e-9, 0)` are treated as zero, anything more negative is an error.
//! Husimi quantities are sums over a polar Gauss–Laguerre grid centred on the
//! state's mean amplitude and scaled to its width.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::fock::{coherent_amplitudes, DensityOperator, C64};
use crate::quadrature::GaussLaguerre;

/// Orders this close to 1 use the `z -> 1` limit.
pub const ORDER_ONE_WINDOW: f64 = 1e-6;
/// Eigenvalues at or below this are treated as exact zeros (rounding noise).
pub const SPECTRAL_ZERO: f64 = 1e-15;
/// Allowed deviation of `int Q d^2mu` from 1 on a Husimi grid.
pub const HUSIMI_NORM_TOLERANCE: f64 = 1e-6;

fn check_order(z: f64) -> Result<()> {
    if !(z > 0.0) || z.is_nan() {
        return Err(invalid(format!("Renyi order must be > 0, got {z}")));
    }
    Ok(())
}

fn nonzero(spectrum: &[f64]) -> impl Iterator<Item = f64> + '_ {
    spectrum.iter().copied().filter(|&l| l > SPECTRAL_ZERO)
}

/// `ln sum_i lambda_i^z`, stable for large `z`.
pub fn ln_z_purity_from_spectrum(spectrum: &[f64], z: f64) -> f64 {
    let lmax = nonzero(spectrum).fold(0.0, f64::max);
    if lmax == 0.0 {
        return f64::NEG_INFINITY;
    }
    let rest: f64 = nonzero(spectrum).map(|l| (l / lmax).powf(z)).sum();
    z * lmax.ln() + rest.ln()
}

pub fn von_neumann_from_spectrum(spectrum: &[f64]) -> f64 {
    -nonzero(spectrum).map(|l| l * l.ln()).sum::<f64>()
}

pub fn renyi_from_spectrum(spectrum: &[f64], z: f64) -> f64 {
    if (z - 1.0).abs() < ORDER_ONE_WINDOW {
        return von_neumann_from_spectrum(spectrum);
    }
    if z.is_infinite() {
        return -nonzero(spectrum).fold(0.0, f64::max).ln();
    }
    -ln_z_purity_from_spectrum(spectrum, z) / (z - 1.0)
}

/// `Tr rho^z` from the spectrum.
pub fn z_purity(rho: &DensityOperator, z: f64) -> Result<f64> {
    check_order(z)?;
    Ok(ln_z_purity_from_spectrum(&rho.spectrum()?, z).exp())
}

/// `Re Tr rho^k` by repeated multiplication. Cross-check for [`z_purity`].
pub fn z_purity_integer(rho: &DensityOperator, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(invalid("integer order must be >= 1"));
    }
    let m = rho.matrix();
    let half = (1..k / 2).fold(m.clone(), |acc, _| &acc * m);
    if k == 1 {
        return Ok(rho.trace().re);
    }
    // Tr(A B) = sum_ij A_ij B_ji avoids the last product.
    let other = if k.is_multiple_of(2) { half.clone() } else { &half * m };
    Ok(half.component_mul(&other.transpose()).iter().map(|c| c.re).sum())
}

pub fn renyi_entropy(rho: &DensityOperator, z: f64) -> Result<f64> {
    check_order(z)?;
    Ok(renyi_from_spectrum(&rho.spectrum()?, z))
}

pub fn von_neumann(rho: &DensityOperator) -> Result<f64> {
    Ok(von_neumann_from_spectrum(&rho.spectrum()?))
}

/// Polar grid `mu = center + sqrt(scale * x) e^{i phi}` with Gauss–Laguerre `x`.
///
/// Exact for integrands of the form `e^{-|mu - center|^2/scale}` times a
/// low-degree polynomial in `|mu - center|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HusimiRule {
    pub radial_order: usize,
    pub angular_count: usize,
    pub center: C64,
    pub scale: f64,
}

pub const DEFAULT_HUSIMI_RADIAL: usize = 80;
pub const DEFAULT_HUSIMI_ANGULAR: usize = 128;

impl HusimiRule {
    pub fn new(radial_order: usize, angular_count: usize, center: C64, scale: f64) -> Result<Self> {
        if radial_order == 0 || angular_count == 0 {
            return Err(invalid("Husimi grid orders must be >= 1"));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(invalid(format!("Husimi grid scale must be > 0, got {scale}")));
        }
        Ok(Self {
            radial_order,
            angular_count,
            center,
            scale,
        })
    }

    pub fn centered(center: C64, scale: f64) -> Result<Self> {
        Self::new(DEFAULT_HUSIMI_RADIAL, DEFAULT_HUSIMI_ANGULAR, center, scale)
    }

    /// Centre `<a>`, scale `<Delta a^dagger Delta a> + 1`, the width of the Q function
    /// of a Gaussian state with those moments.
    pub fn auto(rho: &DensityOperator) -> Self {
        let mean = rho.mean_amplitude();
        let spread = (rho.mean_photon_number() - mean.norm_sqr()).max(0.0) + 1.0;
        Self {
            radial_order: DEFAULT_HUSIMI_RADIAL,
            angular_count: DEFAULT_HUSIMI_ANGULAR,
            center: mean,
            scale: spread,
        }
    }

    pub fn doubled(&self) -> Self {
        Self {
            radial_order: 2 * self.radial_order,
            angular_count: 2 * self.angular_count,
            ..*self
        }
    }

    /// Nodes and weights for `int d^2mu f(mu)`.
    pub fn nodes(&self) -> Result<Vec<(C64, f64)>> {
        let gl = GaussLaguerre::new(self.radial_order)?;
        let m = self.angular_count;
        let mut out = Vec::with_capacity(self.radial_order * m);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let r = (self.scale * x).sqrt();
            let weight = PI * self.scale * (w.ln() + x).exp() / m as f64;
            for j in 0..m {
                let phi = 2.0 * PI * j as f64 / m as f64;
                out.push((self.center + C64::from_polar(r, phi), weight));
            }
        }
        Ok(out)
    }
}

/// Values of a phase-space density on the nodes of a [`HusimiRule`].
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiField {
    rule: HusimiRule,
    nodes: Vec<(C64, f64)>,
    values: Vec<f64>,
}

impl HusimiField {
    /// Samples an arbitrary density `q` on the grid; used for reference kernels.
    pub fn sample(rule: HusimiRule, q: impl Fn(C64) -> f64 + Sync) -> Result<Self> {
        let nodes = rule.nodes()?;
        let values = nodes.par_iter().map(|(mu, _)| q(*mu)).collect();
        Self { rule, nodes, values }.checked()
    }

    fn checked(self) -> Result<Self> {
        let norm = self.normalization();
        if (norm - 1.0).abs() > HUSIMI_NORM_TOLERANCE {
            return Err(Error::Convergence(format!(
                "Husimi grid captures {norm:.9} of the probability (grid too small or too coarse)"
            )));
        }
        Ok(self)
    }

    pub fn rule(&self) -> &HusimiRule {
        &self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodes(&self) -> &[(C64, f64)] {
        &self.nodes
    }

    /// `int Q d^2mu` on the grid.
    pub fn normalization(&self) -> f64 {
        self.nodes.iter().zip(&self.values).map(|((_, w), q)| w * q).sum()
    }

    /// `max_mu pi Q(mu)` over the grid nodes.
    pub fn max_pi_q(&self) -> f64 {
        PI * self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// `Q(mu) = <mu|rho|mu>/pi` on `rule`.
pub fn husimi(rho: &DensityOperator, rule: HusimiRule) -> Result<HusimiField> {
    let nodes = rule.nodes()?;
    let d = rho.dim();
    let m = rho.matrix();
    let values = nodes
        .par_iter()
        .map(|(mu, _)| {
            let c = coherent_amplitudes(*mu, d);
            // Truncated rho: <mu|rho|mu> = c^dagger rho c with exact amplitudes.
            let rc = m * &c;
            let v: C64 = c.iter().zip(rc.iter()).map(|(a, b)| a.conj() * b).sum();
            v.re.max(0.0) / PI
        })
        .collect();
    HusimiField { rule, nodes, values }.checked()
}

/// `-int Q ln(pi Q) d^2mu`.
pub fn wehrl(field: &HusimiField) -> f64 {
    -field
        .nodes
        .iter()
        .zip(&field.values)
        .filter(|(_, &q)| q > 0.0)
        .map(|((_, w), &q)| w * q * (PI * q).ln())
        .sum::<f64>()
}

/// `m_z = int (pi Q)^z d^2mu / pi`.
pub fn renyi_wehrl_moment(field: &HusimiField, z: f64) -> f64 {
    field
        .nodes
        .iter()
        .zip(&field.values)
        .map(|((_, w), &q)| w * (PI * q).powf(z))
        .sum::<f64>()
        / PI
}

/// `-ln m_z / (z - 1)`, Wehrl entropy in the `z -> 1` limit.
pub fn renyi_wehrl(field: &HusimiField, z: f64) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(invalid(format!("Renyi-Wehrl order must be >= 1, got {z}")));
    }
    if z - 1.0 < ORDER_ONE_WINDOW {
        return Ok(wehrl(field));
    }
    Ok(-renyi_wehrl_moment(field, z).ln() / (z - 1.0))
}

/// A grid value with the change observed when the grid is doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridEstimate {
    pub value: f64,
    pub grid_error: f64,
}

fn with_doubling(
    rho: &DensityOperator,
    rule: HusimiRule,
    f: impl Fn(&HusimiField) -> Result<f64>,
) -> Result<GridEstimate> {
    let coarse = f(&husimi(rho, rule)?)?;
    let fine = f(&husimi(rho, rule.doubled())?)?;
    Ok(GridEstimate {
        value: fine,
        grid_error: (fine - coarse).abs(),
    })
}

/// Wehrl entropy of `rho` on `rule` and on its doubling.
pub fn wehrl_estimate(rho: &DensityOperator, rule: HusimiRule) -> Result<GridEstimate> {
    with_doubling(rho, rule, |f| Ok(wehrl(f)))
}

pub fn renyi_wehrl_estimate(rho: &DensityOperator, z: f64, rule: HusimiRule) -> Result<GridEstimate> {
    with_doubling(rho, rule, |f| renyi_wehrl(f, z))
}
