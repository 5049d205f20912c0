use rayon::prelude::*;

use super::{check_headroom, ClassicalNoiseSpec};
use crate::error::{Error, Result};
use crate::fock::{displacement_block, CMatrix, DensityOperator, C64};
use crate::quadrature::QuadratureRule;

/// `N_n` discretized on a [`QuadratureRule`] and a fixed cutoff.
///
/// The displacement matrices depend only on the radial node (a rotation
/// `e^{i phi a^dagger a}` carries `D(r)` to `D(r e^{i phi})`), so they are
/// built once per channel. The uniform angular sum then reduces to a
/// selection rule on matrix-element offsets: the output element `(m, m')`
/// collects the input element `(k, k')` iff `(m - m') - (k - k')` is a
/// multiple of the angular count. This evaluates exactly the same sum as
/// looping over every angular node.
#[derive(Debug, Clone)]
pub struct ClassicalNoiseChannel {
    spec: ClassicalNoiseSpec,
    dim: usize,
    angular_count: usize,
    weights: Vec<f64>,
    /// Row-major `dim x dim` real matrices `<m|D(r)|k>`.
    displacements: Vec<Vec<f64>>,
}

impl ClassicalNoiseChannel {
    pub fn new(spec: ClassicalNoiseSpec, rule: &QuadratureRule, dim: usize) -> Self {
        let (weights, displacements) = if spec.n == 0.0 {
            (Vec::new(), Vec::new())
        } else {
            rule.radial_nodes(spec.n)
                .par_iter()
                .map(|node| {
                    let block = displacement_block(C64::from(node.radius), dim, dim);
                    let mut rows = vec![0.0; dim * dim];
                    for m in 0..dim {
                        for k in 0..dim {
                            rows[m * dim + k] = block[(m, k)].re;
                        }
                    }
                    (node.weight, rows)
                })
                .unzip()
        };
        Self {
            spec,
            dim,
            angular_count: rule.angular_count(),
            weights,
            displacements,
        }
    }

    pub fn spec(&self) -> ClassicalNoiseSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        if self.spec.n == 0.0 {
            return Ok(rho.clone());
        }
        let support = rho.support_dim();
        check_headroom(support, self.spec.n, self.dim)?;
        let out = self.apply_raw(rho.matrix(), support);
        DensityOperator::from_truncated(out, rho.tail_mass())
    }

    /// Channel action on the top-left `support x support` block of `input`.
    pub(crate) fn apply_raw(&self, input: &CMatrix, support: usize) -> CMatrix {
        let d = self.dim;
        let s = support;
        let m_ang = self.angular_count as i64;
        // Output diagonal q' = m - m' >= 0; lower triangle only.
        let diagonals: Vec<Vec<C64>> = (0..d)
            .into_par_iter()
            .map(|qo| {
                let mut diag = vec![C64::new(0.0, 0.0); d - qo];
                // Input offsets q = k - k' congruent to q' modulo the angular count.
                let qs: Vec<i64> = (-(s as i64 - 1)..=(s as i64 - 1))
                    .filter(|&q| (qo as i64 - q).rem_euclid(m_ang) == 0)
                    .collect();
                if qs.is_empty() {
                    return diag;
                }
                for (w, dmat) in self.weights.iter().zip(&self.displacements) {
                    for &q in &qs {
                        let k_lo = q.max(0) as usize;
                        let k_hi = (s as i64).min(s as i64 + q) as usize;
                        for (idx, slot) in diag.iter_mut().enumerate() {
                            let m = idx + qo;
                            let mp = idx;
                            let row_m = &dmat[m * d..m * d + d];
                            let row_mp = &dmat[mp * d..mp * d + d];
                            let mut acc = C64::new(0.0, 0.0);
                            for k in k_lo..k_hi {
                                let kp = (k as i64 - q) as usize;
                                acc += input[(k, kp)] * (row_m[k] * row_mp[kp]);
                            }
                            *slot += acc * *w;
                        }
                    }
                }
                diag
            })
            .collect();
        let mut out = CMatrix::zeros(d, d);
        for (qo, diag) in diagonals.iter().enumerate() {
            for (idx, v) in diag.iter().enumerate() {
                out[(idx + qo, idx)] = *v;
                out[(idx, idx + qo)] = v.conj();
            }
        }
        out
    }
}

/// `N_n(rho)` at the input's cutoff.
pub fn apply_classical_noise(
    rho: &DensityOperator,
    spec: ClassicalNoiseSpec,
    quad: &QuadratureRule,
) -> Result<DensityOperator> {
    ClassicalNoiseChannel::new(spec, quad, rho.dim()).apply(rho)
}

/// As [`apply_classical_noise`], but also evaluates the doubled rule and
/// fails if any matrix element moves by more than `tol`.
pub fn apply_classical_noise_converged(
    rho: &DensityOperator,
    spec: ClassicalNoiseSpec,
    quad: &QuadratureRule,
    tol: f64,
) -> Result<DensityOperator> {
    let coarse = apply_classical_noise(rho, spec, quad)?;
    let fine = apply_classical_noise(rho, spec, &quad.doubled()?)?;
    let change = coarse.max_abs_diff(&fine)?;
    if change > tol {
        return Err(Error::Convergence(format!(
            "classical-noise quadrature changed by {change:.3e} (> {tol:.1e}) when doubled"
        )));
    }
    Ok(fine)
}
