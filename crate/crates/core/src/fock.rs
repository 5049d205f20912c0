//! Truncated Fock-space linear algebra.
//!
//! A single bosonic mode is represented on the levels `0..dim`. States carry
//! the probability mass that fell outside the cutoff (`tail_mass`) so callers
//! can tell a converged truncation from a silently renormalized one.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Largest tail mass allowed when constructing a state.
pub const STATE_TAIL_TOLERANCE: f64 = 1e-8;
/// Largest tail mass an operation may lose before it refuses to renormalize.
pub const OPERATION_TAIL_LIMIT: f64 = 1e-4;
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Default cap on the dimension of a two-mode product space.
pub const DEFAULT_MAX_TENSOR_DIM: usize = 6400;
/// Populations below this are ignored when measuring the support of a state.
/// Coherences with such a level are then below `1e-13` in magnitude.
pub const SUPPORT_EPSILON: f64 = 1e-26;

/// `ln(k!)` for `k = 0..=upto`.
pub fn ln_factorials(upto: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=upto {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Associated Laguerre polynomials `L_0^{(alpha)}(x) ..= L_{nmax}^{(alpha)}(x)`
/// by the three-term upward recurrence.
pub fn assoc_laguerre_table(x: f64, alpha: f64, nmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..nmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// A normalized pure state on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    tail_mass: f64,
}

impl PureState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("pure state needs dim >= 1"));
        }
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self {
            amplitudes,
            tail_mass: 0.0,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            amplitudes: amplitudes / C64::from(norm),
            tail_mass: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Embeds the state into a larger cutoff by zero padding.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(invalid(format!("cannot pad dim {} down to {dim}", self.dim())));
        }
        let mut amps = DVector::zeros(dim);
        amps.rows_mut(0, self.dim()).copy_from(&self.amplitudes);
        Ok(Self {
            amplitudes: amps,
            tail_mass: self.tail_mass,
        })
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn to_density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator {
            matrix: m,
            tail_mass: self.tail_mass,
        }
    }
}

/// Unnormalized coherent amplitudes `e^{-|a|^2/2} a^m / sqrt(m!)` for `m < dim`.
pub(crate) fn coherent_amplitudes(alpha: C64, dim: usize) -> DVector<C64> {
    let mut amps = DVector::zeros(dim);
    let mut c = C64::from((-0.5 * alpha.norm_sqr()).exp());
    for m in 0..dim {
        amps[m] = c;
        c = c * alpha / ((m + 1) as f64).sqrt();
    }
    amps
}

/// Coherent state `|alpha>` with the default tail tolerance.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<PureState> {
    coherent_state_with_tolerance(alpha, dim, STATE_TAIL_TOLERANCE)
}

pub fn coherent_state_with_tolerance(alpha: C64, dim: usize, tolerance: f64) -> Result<PureState> {
    if dim == 0 {
        return Err(invalid("coherent state needs dim >= 1"));
    }
    let amps = coherent_amplitudes(alpha, dim);
    let kept = amps.norm_squared();
    let tail = (1.0 - kept).max(0.0);
    if tail > tolerance {
        return Err(Error::TailMass { tail, limit: tolerance });
    }
    let mut state = PureState::normalized(amps)?;
    state.tail_mass = tail;
    Ok(state)
}

/// Smallest cutoff at which `|alpha>` loses less than a tenth of the state
/// tolerance, so overlaps of two such states are good to `1e-8`.
pub fn coherent_dim(alpha: C64) -> usize {
    let x = alpha.norm_sqr();
    let mut p = (-x).exp();
    let mut kept = 0.0;
    let mut m = 0usize;
    loop {
        kept += p;
        m += 1;
        if 1.0 - kept < STATE_TAIL_TOLERANCE * 0.1 || m > 100_000 {
            return m;
        }
        p *= x / m as f64;
    }
}

/// Fock state `|m>`.
pub fn fock_state(m: usize, dim: usize) -> Result<PureState> {
    if m >= dim {
        return Err(invalid(format!("Fock level {m} needs dim > {m}, got {dim}")));
    }
    let mut amps = DVector::zeros(dim);
    amps[m] = C64::from(1.0);
    PureState::new(amps)
}

/// A density operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    tail_mass: f64,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self { matrix, tail_mass: 0.0 };
        rho.validate()?;
        Ok(rho)
    }

    /// Hermitizes and renormalizes an operator produced by a trace-decreasing
    /// truncation, recording the lost mass.
    pub(crate) fn from_truncated(mut matrix: CMatrix, prior_tail: f64) -> Result<Self> {
        hermitize(&mut matrix);
        let tr = trace_re(&matrix);
        let tail = (1.0 - tr).max(0.0);
        if tail > OPERATION_TAIL_LIMIT || !tr.is_finite() || tr <= 0.0 {
            return Err(Error::TailMass {
                tail,
                limit: OPERATION_TAIL_LIMIT,
            });
        }
        matrix /= C64::from(tr);
        Ok(Self {
            matrix,
            tail_mass: prior_tail + tail,
        })
    }

    #[cfg(test)]
    pub(crate) fn from_raw(matrix: CMatrix, tail_mass: f64) -> Self {
        Self { matrix, tail_mass }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Checks the density-operator invariants at the crate tolerances.
    pub fn validate(&self) -> Result<()> {
        let n = self.matrix.nrows();
        if n == 0 || self.matrix.ncols() != n {
            return Err(invalid("density operator must be a non-empty square matrix"));
        }
        let dev = hermiticity_deviation(&self.matrix);
        if dev > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = self.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    /// Raw eigenvalues (ascending order not guaranteed).
    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .collect()
    }

    /// Eigenvalues with truncation noise above `-POSITIVITY_TOLERANCE` clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut eigs = self.eigenvalues();
        for e in eigs.iter_mut() {
            if *e < -POSITIVITY_TOLERANCE {
                return Err(Error::NotPositive(*e));
            }
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        Ok(eigs)
    }

    /// `1 + ` the largest level whose population exceeds [`SUPPORT_EPSILON`].
    pub fn support_dim(&self) -> usize {
        (0..self.dim())
            .rev()
            .find(|&m| self.matrix[(m, m)].re > SUPPORT_EPSILON)
            .map_or(1, |m| m + 1)
    }

    /// Largest elementwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// `<a>`.
    pub fn mean_amplitude(&self) -> C64 {
        let d = self.dim();
        (1..d).map(|m| self.matrix[(m, m - 1)] * (m as f64).sqrt()).sum()
    }

    /// `<a^2>`.
    pub fn mean_amplitude_squared(&self) -> C64 {
        let d = self.dim();
        (2..d)
            .map(|m| self.matrix[(m, m - 2)] * ((m * (m - 1)) as f64).sqrt())
            .sum()
    }

    /// `<a^dagger a>`.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|m| m as f64 * self.matrix[(m, m)].re).sum()
    }

    /// `U rho U^dagger` for a unitary on the same truncated space.
    pub fn conjugated(&self, unitary: &FockOperator) -> Result<DensityOperator> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: unitary.dim(),
            });
        }
        let m = &unitary.matrix * &self.matrix * unitary.matrix.adjoint();
        DensityOperator::from_truncated(m, self.tail_mass)
    }

    /// Embeds into a larger cutoff by zero padding.
    pub fn padded(&self, dim: usize) -> Result<DensityOperator> {
        if dim < self.dim() {
            return Err(invalid(format!("cannot pad dim {} down to {dim}", self.dim())));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.matrix);
        Ok(DensityOperator {
            matrix: m,
            tail_mass: self.tail_mass,
        })
    }
}

pub(crate) fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

pub(crate) fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

pub(crate) fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Thermal state with mean photon number `nbar`.
pub fn thermal_state(nbar: f64, dim: usize) -> Result<DensityOperator> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(invalid(format!("thermal photon number must be >= 0, got {nbar}")));
    }
    if dim == 0 {
        return Err(invalid("thermal state needs dim >= 1"));
    }
    let ratio = nbar / (nbar + 1.0);
    let mut m = CMatrix::zeros(dim, dim);
    let mut p = 1.0 / (nbar + 1.0);
    let mut kept = 0.0;
    for k in 0..dim {
        m[(k, k)] = C64::from(p);
        kept += p;
        p *= ratio;
    }
    let tail = (1.0 - kept).max(0.0);
    if tail > STATE_TAIL_TOLERANCE {
        return Err(Error::TailMass {
            tail,
            limit: STATE_TAIL_TOLERANCE,
        });
    }
    m /= C64::from(kept);
    Ok(DensityOperator {
        matrix: m,
        tail_mass: tail,
    })
}

/// Smallest cutoff at which the thermal state loses less than the state tolerance.
pub fn thermal_dim(nbar: f64) -> usize {
    if nbar <= 0.0 {
        return 1;
    }
    let ratio = nbar / (nbar + 1.0);
    // tail = ratio^dim
    ((STATE_TAIL_TOLERANCE * 0.5).ln() / ratio.ln()).ceil().max(1.0) as usize
}

/// A general operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: CMatrix,
}

impl FockOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(invalid("operator must be a non-empty square matrix"));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(FockOperator {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn apply(&self, psi: &PureState) -> Result<DVector<C64>> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        Ok(&self.matrix * psi.amplitudes())
    }
}

/// Annihilation operator truncated to `dim` levels.
pub fn annihilation(dim: usize) -> FockOperator {
    let mut m = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        m[(k - 1, k)] = C64::from((k as f64).sqrt());
    }
    FockOperator { matrix: m }
}

/// Displacement matrix elements `<m|D(mu)|n>` for `m < rows`, `n < cols`.
///
/// Uses `sqrt(n!/m!) mu^{m-n} e^{-|mu|^2/2} L_n^{(m-n)}(|mu|^2)` for `m >= n`
/// and `sqrt(m!/n!) (-mu*)^{n-m} e^{-|mu|^2/2} L_m^{(n-m)}(|mu|^2)` otherwise.
/// Every element is exact; truncation only drops rows and columns.
pub fn displacement_block(mu: C64, rows: usize, cols: usize) -> CMatrix {
    let mut out = CMatrix::zeros(rows, cols);
    let x = mu.norm_sqr();
    if x == 0.0 {
        for k in 0..rows.min(cols) {
            out[(k, k)] = C64::from(1.0);
        }
        return out;
    }
    let lnf = ln_factorials(rows.max(cols));
    let ln_r = 0.5 * x.ln();
    let phase = mu / mu.norm();
    let neg_conj_phase = -phase.conj();
    // m >= n: offset a = m - n, run over n.
    for a in 0..rows {
        let nmax = (rows - a).min(cols);
        if nmax == 0 {
            break;
        }
        let lag = assoc_laguerre_table(x, a as f64, nmax - 1);
        let ph = phase.powu(a as u32);
        for n in 0..nmax {
            let m = n + a;
            let mag = (0.5 * (lnf[n] - lnf[m]) + a as f64 * ln_r - 0.5 * x).exp();
            out[(m, n)] = ph * (mag * lag[n]);
        }
    }
    // m < n: offset a = n - m, run over m.
    for a in 1..cols {
        let mmax = (cols - a).min(rows);
        if mmax == 0 {
            break;
        }
        let lag = assoc_laguerre_table(x, a as f64, mmax - 1);
        let ph = neg_conj_phase.powu(a as u32);
        for m in 0..mmax {
            let n = m + a;
            let mag = (0.5 * (lnf[m] - lnf[n]) + a as f64 * ln_r - 0.5 * x).exp();
            out[(m, n)] = ph * (mag * lag[m]);
        }
    }
    out
}

/// Displacement operator `D(mu) = exp(mu a^dagger - mu* a)` truncated to `dim` levels.
pub fn displacement_matrix(mu: C64, dim: usize) -> Result<FockOperator> {
    if dim == 0 {
        return Err(invalid("displacement matrix needs dim >= 1"));
    }
    Ok(FockOperator {
        matrix: displacement_block(mu, dim, dim),
    })
}

/// Kronecker product with the default dimension cap.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    tensor_with_limit(a, b, DEFAULT_MAX_TENSOR_DIM)
}

pub fn tensor_with_limit(a: &DensityOperator, b: &DensityOperator, limit: usize) -> Result<DensityOperator> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::DimensionOverflow { dim: usize::MAX, limit })?;
    if dim > limit {
        return Err(Error::DimensionOverflow { dim, limit });
    }
    Ok(DensityOperator {
        matrix: a.matrix.kronecker(&b.matrix),
        tail_mass: a.tail_mass + b.tail_mass,
    })
}

/// Which factor of a two-mode operator survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

/// Partial trace of an operator on `dims.0 * dims.1` levels (first factor is
/// the slow index of the Kronecker product).
pub fn partial_trace(ab: &DensityOperator, keep: Mode, dims: (usize, usize)) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != ab.dim() {
        return Err(Error::DimensionMismatch {
            expected: ab.dim(),
            got: da * db,
        });
    }
    let m = &ab.matrix;
    let out = match keep {
        Mode::First => CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Mode::Second => CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    Ok(DensityOperator {
        matrix: out,
        tail_mass: ab.tail_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_coherent_state() {
        let psi = coherent_state(c(0.0, 0.0), 5).unwrap();
        assert_eq!(psi.amplitudes()[0], C64::from(1.0));
        assert!(psi.amplitudes().iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_ground_amplitude() {
        let psi = coherent_state(c(1.0, 0.0), 30).unwrap();
        assert_abs_diff_eq!(psi.amplitudes()[0].re, (-0.5f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amplitudes()[0].re, 0.60653, epsilon = 1e-5);
        assert!(psi.tail_mass() < 1e-8);
    }

    #[test]
    fn coherent_rejects_small_cutoff() {
        match coherent_state(c(1.0, 0.0), 2) {
            Err(Error::TailMass { tail, .. }) => {
                let expected = 1.0 - (-1.0f64).exp() * 2.0;
                assert_abs_diff_eq!(tail, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(tail, 0.264, epsilon = 1e-3);
            }
            other => panic!("expected tail-mass error, got {other:?}"),
        }
        assert!(coherent_state(c(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn coherent_dim_meets_tolerance() {
        for &a in &[0.0, 0.5, 1.0, 2.0, 3.5] {
            let d = coherent_dim(c(a, 0.0));
            assert!(coherent_state(c(a, 0.0), d).is_ok(), "alpha {a} dim {d}");
        }
    }

    #[test]
    fn thermal_state_examples() {
        let vac = thermal_state(0.0, 4).unwrap();
        assert_eq!(vac.matrix()[(0, 0)], C64::from(1.0));
        assert_abs_diff_eq!(vac.purity(), 1.0, epsilon = 1e-15);

        let th = thermal_state(1.0, 60).unwrap();
        assert_abs_diff_eq!(th.purity(), 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(th.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        th.validate().unwrap();
        assert!(thermal_state(-0.1, 10).is_err());
        assert!(thermal_state(1.0, 10).is_err());
    }

    #[test]
    fn displacement_at_zero_is_identity() {
        for d in [1, 3, 17] {
            let dm = displacement_matrix(C64::from(0.0), d).unwrap();
            assert_eq!(dm.matrix(), &CMatrix::identity(d, d));
        }
    }

    #[test]
    fn displacement_column_zero_is_coherent() {
        let dm = displacement_matrix(c(1.0, 0.0), 30).unwrap();
        let psi = coherent_state(c(1.0, 0.0), 30).unwrap();
        for m in 0..30 {
            assert_abs_diff_eq!((dm.matrix()[(m, 0)] - psi.amplitudes()[m]).norm(), 0.0, epsilon = 1e-12);
        }
        // complex displacement, first column
        let mu = c(-0.4, 0.9);
        let dm = displacement_matrix(mu, 30).unwrap();
        let amps = coherent_amplitudes(mu, 30);
        for m in 0..30 {
            assert_abs_diff_eq!((dm.matrix()[(m, 0)] - amps[m]).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn displacement_inverse() {
        let mu = c(0.3, 0.4);
        // The 40x40 blocks are exact; the inner index runs over 120 levels so
        // the product does not pick up the cutoff of the intermediate sum.
        let d = displacement_block(mu, 40, 120);
        let dinv = displacement_block(-mu, 120, 40);
        let id = CMatrix::identity(40, 40);
        let diff = (d * dinv - id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn displacement_adjoint_is_inverse_displacement() {
        let mu = c(0.7, -1.1);
        let d = displacement_matrix(mu, 25).unwrap();
        let dm = displacement_matrix(-mu, 25).unwrap();
        let diff = (d.adjoint().matrix() - dm.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13, "{diff}");
    }

    #[test]
    fn tensor_examples() {
        let v = thermal_state(0.0, 3).unwrap();
        let vv = tensor(&v, &v).unwrap();
        assert_eq!(vv.dim(), 9);
        assert_eq!(vv.matrix()[(0, 0)], C64::from(1.0));
        assert_abs_diff_eq!(vv.purity(), 1.0, epsilon = 1e-15);

        let t1 = thermal_state(1.0, 40).unwrap();
        let t2 = thermal_state(2.0, 60).unwrap();
        let t12 = tensor(&t1, &t2).unwrap();
        assert_abs_diff_eq!(t12.trace().re, t1.trace().re * t2.trace().re, epsilon = 1e-12);
        assert_abs_diff_eq!(t12.purity(), (1.0 / 3.0) * (1.0 / 5.0), epsilon = 1e-8);

        assert!(matches!(
            tensor_with_limit(&t1, &t2, 100),
            Err(Error::DimensionOverflow { dim: 2400, limit: 100 })
        ));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = thermal_state(0.3, 30).unwrap();
        let b = coherent_state(c(0.2, 0.1), 12).unwrap().to_density();
        let ab = tensor(&a, &b).unwrap();
        let ra = partial_trace(&ab, Mode::First, (30, 12)).unwrap();
        let rb = partial_trace(&ab, Mode::Second, (30, 12)).unwrap();
        assert!(ra.max_abs_diff(&a).unwrap() < 1e-14);
        assert!(rb.max_abs_diff(&b).unwrap() < 1e-14);
        assert!(partial_trace(&ab, Mode::First, (12, 12)).is_err());
    }

    #[test]
    fn partial_trace_of_correlated_state() {
        // (|00> + |11>)/sqrt(2) mixed with a little |01><01|.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = DVector::zeros(4);
        psi[0] = C64::from(s);
        psi[3] = C64::from(s);
        let bell = &psi * psi.adjoint();
        let mut mix = CMatrix::zeros(4, 4);
        mix[(1, 1)] = C64::from(1.0);
        let m = bell * C64::from(0.9) + mix * C64::from(0.1);
        let ab = DensityOperator::new(m).unwrap();
        let ra = partial_trace(&ab, Mode::First, (2, 2)).unwrap();
        let rb = partial_trace(&ab, Mode::Second, (2, 2)).unwrap();
        assert_abs_diff_eq!(ra.trace().re, 1.0, epsilon = 1e-14);
        // reduced purities: diag(0.55, 0.45) and diag(0.45, 0.55)
        assert_abs_diff_eq!(ra.purity(), 0.55f64.powi(2) + 0.45f64.powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(rb.purity(), ra.purity(), epsilon = 1e-14);
        assert!(ra.purity() < 1.0);

        // symmetric state: both reductions coincide
        let sym = DensityOperator::new(&psi * psi.adjoint()).unwrap();
        let sa = partial_trace(&sym, Mode::First, (2, 2)).unwrap();
        let sb = partial_trace(&sym, Mode::Second, (2, 2)).unwrap();
        assert!(sa.max_abs_diff(&sb).unwrap() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_operators() {
        let mut m = CMatrix::identity(2, 2) * C64::from(0.5);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityOperator::new(m.clone()), Err(Error::NotHermitian(_))));
        let m2 = CMatrix::identity(2, 2);
        assert!(matches!(DensityOperator::new(m2), Err(Error::InvalidTrace(_))));
        let mut m3 = CMatrix::zeros(2, 2);
        m3[(0, 0)] = C64::from(1.5);
        m3[(1, 1)] = C64::from(-0.5);
        assert!(matches!(DensityOperator::new(m3), Err(Error::NotPositive(_))));
    }

    #[test]
    fn laguerre_recurrence_matches_explicit_low_orders() {
        let x = 1.7;
        let a = 2.0;
        let t = assoc_laguerre_table(x, a, 3);
        assert_abs_diff_eq!(t[1], -x + a + 1.0, epsilon = 1e-14);
        let l2 = x * x / 2.0 - (a + 2.0) * x + (a + 2.0) * (a + 1.0) / 2.0;
        assert_abs_diff_eq!(t[2], l2, epsilon = 1e-13);
        let l3 = -x.powi(3) / 6.0 + (a + 3.0) * x * x / 2.0 - (a + 2.0) * (a + 3.0) * x / 2.0
            + (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0;
        assert_abs_diff_eq!(t[3], l3, epsilon = 1e-12);
    }
}
