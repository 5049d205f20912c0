//! Circulant eigen-data behind the integer-order purity bound, the
//! thermal-like factors built from it, and two independent evaluations of
//! `Tr[(N_n rho)^k]`.
//!
//! Eigenvalues are stored in discrete-Fourier index order `j = 0..k`, with
//! `a_j = -2i sin(2 pi j/k)`, `e_j = e^{2 pi i j/k} - 1`, `d_j = 1/n + a_j/2`.
//! Conjugating by `Y_{jm} = e^{2 pi i jm/k}/sqrt(k)` puts `a_{-j}` and `e_{-j}`
//! on the diagonal, so the pairing of `d_j` with `e_j` is the one realised
//! by a single unitary.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::channels::{apply_classical_noise, converged_dim, ClassicalNoiseSpec};
use crate::entropies::z_purity_integer;
use crate::error::{invalid, Error, Result};
use crate::fock::{displacement_block, CMatrix, PureState, C64};
use crate::quadrature::{GaussHermite, QuadratureRule};

/// Tolerance for dense-vs-closed-form eigenvalue agreement and for `Y`.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Relative tolerance of the determinant identity.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;
/// Target truncation error of the Laguerre series.
pub const SERIES_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirculantSystem {
    pub k: usize,
    pub n: f64,
    pub a_eigs: Vec<C64>,
    pub g_eigs: Vec<C64>,
    pub c_eigs: Vec<C64>,
    #[serde(skip)]
    pub dft: CMatrix,
    /// Largest deviation seen while checking the eigen-data.
    pub eigen_residual: f64,
}

/// `A`: `-1` on the cyclic superdiagonal, `+1` on the cyclic subdiagonal.
pub fn matrix_a(k: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(k, k);
    for j in 0..k {
        a[(j, (j + 1) % k)] -= 1.0;
        a[(j, (j + k - 1) % k)] += 1.0;
    }
    a
}

/// `G`: `-1` on the diagonal, `+1` on the cyclic superdiagonal.
pub fn matrix_g(k: usize) -> DMatrix<f64> {
    let mut g = -DMatrix::identity(k, k);
    for j in 0..k {
        g[(j, (j + 1) % k)] += 1.0;
    }
    g
}

pub fn dft_unitary(k: usize) -> CMatrix {
    let s = 1.0 / (k as f64).sqrt();
    CMatrix::from_fn(k, k, |j, m| {
        C64::from_polar(s, 2.0 * PI * (j * m % k) as f64 / k as f64)
    })
}

/// Greedy matching distance between two multisets of complex numbers.
fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, dist) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[idx] = true;
        worst = worst.max(dist);
    }
    worst
}

pub fn build_circulant_system(k: usize, n: f64) -> Result<CirculantSystem> {
    if k < 2 {
        return Err(invalid(format!("k must be >= 2, got {k}")));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(invalid(format!("n must be > 0, got {n}")));
    }
    let theta = |j: usize| 2.0 * PI * j as f64 / k as f64;
    let a_eigs: Vec<C64> = (0..k).map(|j| C64::new(0.0, -2.0 * theta(j).sin())).collect();
    let g_eigs: Vec<C64> = (0..k).map(|j| C64::from_polar(1.0, theta(j)) - 1.0).collect();
    let c_eigs: Vec<C64> = a_eigs.iter().map(|a| a / 2.0 + 1.0 / n).collect();

    let a = matrix_a(k);
    let g = matrix_g(k);
    let dense_a: Vec<C64> = a.complex_eigenvalues().iter().copied().collect();
    let dense_g: Vec<C64> = g.complex_eigenvalues().iter().copied().collect();
    let mut residual = multiset_distance(&dense_a, &a_eigs).max(multiset_distance(&dense_g, &g_eigs));

    let y = dft_unitary(k);
    let yd = y.adjoint();
    residual = residual.max(
        (&yd * &y - CMatrix::identity(k, k))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max),
    );
    for (mat, eigs) in [(&a, &a_eigs), (&g, &g_eigs)] {
        let conj = &y * mat.map(C64::from) * &yd;
        for r in 0..k {
            for c in 0..k {
                let expected = if r == c { eigs[(k - r) % k] } else { C64::new(0.0, 0.0) };
                residual = residual.max((conj[(r, c)] - expected).norm());
            }
        }
    }
    if residual > EIGEN_TOLERANCE {
        return Err(Error::IdentityViolation {
            what: format!("circulant eigen-data (k = {k})"),
            residual,
            tolerance: EIGEN_TOLERANCE,
        });
    }
    Ok(CirculantSystem {
        k,
        n,
        a_eigs,
        g_eigs,
        c_eigs,
        dft: y,
        eigen_residual: residual,
    })
}

impl CirculantSystem {
    /// `prod_j n (2 d_j + |e_j|^2) / 2`.
    pub fn determinant_product(&self) -> C64 {
        self.c_eigs
            .iter()
            .zip(&self.g_eigs)
            .map(|(d, e)| (d * 2.0 + e.norm_sqr()) * (self.n / 2.0))
            .product()
    }

    /// `n^k det(C + G^T G / 2)` by dense LU; an independent route to the same product.
    pub fn determinant_dense(&self) -> f64 {
        let k = self.k;
        let g = matrix_g(k);
        let c = DMatrix::identity(k, k) / self.n + matrix_a(k) / 2.0;
        (c + g.transpose() * g / 2.0).determinant() * self.n.powi(k as i32)
    }
}

/// `prefactor * ratio^{b^dagger b}`; `identity` when `e_j = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaFactor {
    pub prefactor: C64,
    pub ratio: C64,
    pub identity: bool,
}

pub fn theta_factor(sys: &CirculantSystem, j: usize) -> Result<ThetaFactor> {
    if j >= sys.k {
        return Err(invalid(format!("factor index {j} out of range for k = {}", sys.k)));
    }
    let e2 = sys.g_eigs[j].norm_sqr();
    if e2 < EIGEN_TOLERANCE {
        return Ok(ThetaFactor {
            prefactor: C64::new(1.0, 0.0),
            ratio: C64::new(1.0, 0.0),
            identity: true,
        });
    }
    let d2 = sys.c_eigs[j] * 2.0;
    let den = d2 + e2;
    Ok(ThetaFactor {
        prefactor: (2.0 / sys.n) / den,
        ratio: (d2 - e2) / den,
        identity: false,
    })
}

/// `exp(-d_j |nu|^2 / |e_j|^2) / (n |e_j|^2)`.
pub fn theta_char_closed(sys: &CirculantSystem, j: usize, nu: C64) -> Result<C64> {
    let e2 = sys
        .g_eigs
        .get(j)
        .ok_or_else(|| invalid("factor index out of range"))?
        .norm_sqr();
    if e2 < EIGEN_TOLERANCE {
        return Err(invalid(
            "characteristic function of the identity factor is not normalisable",
        ));
    }
    Ok((-sys.c_eigs[j] * nu.norm_sqr() / e2).exp() / (sys.n * e2))
}

/// Terms needed so that `|prefactor| |r|^T / (1 - |r|) < SERIES_TOLERANCE`,
/// using `|e^{-x/2} L_m(x)| <= 1`.
pub fn series_terms(factor: &ThetaFactor) -> Result<usize> {
    let r = factor.ratio.norm();
    if r >= 1.0 - 1e-9 {
        return Err(Error::Convergence(format!(
            "Laguerre series ratio |r| = {r} too close to 1"
        )));
    }
    if r == 0.0 {
        return Ok(1);
    }
    let t = ((SERIES_TOLERANCE * (1.0 - r) / factor.prefactor.norm()).ln() / r.ln()).ceil();
    Ok(t.max(1.0) as usize)
}

/// `prefactor sum_{m < terms} ratio^m e^{-|nu|^2/2} L_m(|nu|^2)`.
pub fn theta_char_laguerre(factor: &ThetaFactor, nu: C64, terms: usize) -> Result<C64> {
    if factor.ratio.norm() >= 1.0 {
        return Err(Error::Convergence(
            "Laguerre series does not converge for |ratio| >= 1".into(),
        ));
    }
    let x = nu.norm_sqr();
    let damp = (-x / 2.0).exp();
    let mut l_prev = 0.0;
    let mut l_cur = 1.0;
    let mut rpow = C64::new(1.0, 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..terms {
        acc += rpow * (l_cur * damp);
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 - x) * l_cur - mf * l_prev) / (mf + 1.0);
        l_prev = l_cur;
        l_cur = next;
        rpow *= factor.ratio;
    }
    Ok(factor.prefactor * acc)
}

/// `1/((n+1)^k - n^k)`, after checking the determinant identity on the eigen-data
/// and on the dense matrices.
pub fn croma_bound(k: usize, n: f64) -> Result<f64> {
    let sys = build_circulant_system(k, n)?;
    let target = (n + 1.0).powi(k as i32) - n.powi(k as i32);
    let residual =
        ((sys.determinant_product() - target).norm() / target).max((sys.determinant_dense() - target).abs() / target);
    if residual > DETERMINANT_TOLERANCE {
        return Err(Error::IdentityViolation {
            what: format!("determinant identity (k = {k}, n = {n})"),
            residual,
            tolerance: DETERMINANT_TOLERANCE,
        });
    }
    Ok(1.0 / target)
}

/// `Tr[(N_n |psi><psi|)^k]` by applying the channel and multiplying matrices.
pub fn k_purity_direct(psi: &PureState, n: f64, k: u32, quad: &QuadratureRule) -> Result<f64> {
    let dim = converged_dim(psi.to_density().support_dim(), n).max(psi.dim());
    let out = apply_classical_noise(&psi.padded(dim)?.to_density(), ClassicalNoiseSpec::new(n)?, quad)?;
    z_purity_integer(&out, k)
}

/// Default Gauss–Hermite order per axis for [`k_purity_via_expectation`].
pub const DEFAULT_EXPECTATION_ORDER: usize = 24;
const EXPECTATION_TOLERANCE: f64 = 1e-6;

/// `Tr[(N_n |psi><psi|)^k]` as the `k`-fold Gaussian average of
/// `prod_j <psi|D(mu_j)^dagger D(mu_{j+1})|psi>`.
///
/// Each `mu` runs over a Cartesian Gauss–Hermite product grid. With node
/// weights `W` and the Hermitian matrix `F_{il} = <psi|D(mu_i)^dagger D(mu_l)|psi>`
/// the cyclic sum is `Tr[(W F)^k]`. The grid is refined by 8 nodes per axis
/// and the result rejected if it moves by more than `1e-6`.
pub fn k_purity_via_expectation(psi: &PureState, n: f64, k: u32, order: usize) -> Result<f64> {
    if k < 2 {
        return Err(invalid("k must be >= 2"));
    }
    if !(n > 0.0) {
        return Err(invalid(format!("n must be > 0, got {n}")));
    }
    let coarse = expectation_sum(psi, n, k, order)?;
    let fine = expectation_sum(psi, n, k, order + 8)?;
    if (fine - coarse).abs() > EXPECTATION_TOLERANCE {
        return Err(Error::Convergence(format!(
            "k-purity expectation changed by {:.3e} between orders {order} and {}",
            (fine - coarse).abs(),
            order + 8
        )));
    }
    Ok(fine)
}

fn expectation_sum(psi: &PureState, n: f64, k: u32, order: usize) -> Result<f64> {
    let gh = GaussHermite::new(order)?;
    let scale = n.sqrt();
    let mut nodes = Vec::with_capacity(order * order);
    for (ta, wa) in gh.nodes.iter().zip(&gh.weights) {
        for (tb, wb) in gh.nodes.iter().zip(&gh.weights) {
            nodes.push((C64::new(scale * ta, scale * tb), wa * wb / PI));
        }
    }
    let s = psi.to_density().support_dim();
    let amps: DVector<C64> = psi.amplitudes().rows(0, s).into_owned();
    let expect = |beta: C64| -> C64 {
        let d = displacement_block(beta, s, s);
        amps.dotc(&(d * &amps))
    };
    let size = nodes.len();
    // H = W^{1/2} F W^{1/2} is Hermitian with Tr H^k = Tr (W F)^k; fill the
    // upper triangle and mirror.
    let rows: Vec<Vec<C64>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let (mu, wi) = nodes[i];
            (i..size)
                .map(|l| {
                    let (nu, wl) = nodes[l];
                    // D(mu)^dagger D(nu) = e^{-i Im(mu nu^*)} D(nu - mu)
                    let phase = C64::from_polar(1.0, -(mu * nu.conj()).im);
                    phase * expect(nu - mu) * (wi * wl).sqrt()
                })
                .collect()
        })
        .collect();
    let h = CMatrix::from_fn(
        size,
        size,
        |i, l| if l >= i { rows[i][l - i] } else { rows[l][i - l].conj() },
    );
    Ok(trace_power(&h, k))
}

/// `Re Tr H^k` for Hermitian `H`, using `Tr(A B) = sum_ij A_ij B_ji`.
fn trace_power(h: &CMatrix, k: u32) -> f64 {
    let half = (1..k / 2).fold(h.clone(), |acc, _| &acc * h);
    let other = if k.is_multiple_of(2) { half.clone() } else { &half * h };
    half.component_mul(&other.transpose()).iter().map(|c| c.re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, fock_state};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn k2_eigen_data() {
        let sys = build_circulant_system(2, 1.0).unwrap();
        assert!(sys.a_eigs.iter().all(|a| a.norm() < 1e-15));
        let mags: Vec<f64> = sys.g_eigs.iter().map(|e| e.norm()).collect();
        close(mags[0], 0.0, 1e-15);
        close(mags[1], 2.0, 1e-15);
    }

    #[test]
    fn k3_eigen_data() {
        let sys = build_circulant_system(3, 0.7).unwrap();
        let mut xi: Vec<f64> = sys.c_eigs.iter().map(|d| d.im).collect();
        xi.sort_by(f64::total_cmp);
        let r = 3f64.sqrt() / 2.0;
        close(xi[0], -r, 1e-14);
        close(xi[1], 0.0, 1e-14);
        close(xi[2], r, 1e-14);
        assert!(sys.c_eigs.iter().all(|d| (d.re - 1.0 / 0.7).abs() < 1e-14));
        let mut mags: Vec<f64> = sys.g_eigs.iter().map(|e| e.norm()).collect();
        mags.sort_by(f64::total_cmp);
        close(mags[0], 0.0, 1e-15);
        close(mags[1], 3f64.sqrt(), 1e-14);
        close(mags[2], 3f64.sqrt(), 1e-14);
    }

    #[test]
    fn larger_k_passes_checks() {
        for k in 2..=12 {
            let sys = build_circulant_system(k, 0.3).unwrap();
            assert!(sys.eigen_residual < 1e-10);
            assert!(theta_factor(&sys, 0).unwrap().identity);
            for j in 1..k {
                assert!(theta_factor(&sys, j).unwrap().ratio.norm() < 1.0);
            }
        }
    }

    #[test]
    fn k2_factor_closed_form() {
        for n in [0.2, 1.0, 4.0] {
            let sys = build_circulant_system(2, n).unwrap();
            let f = theta_factor(&sys, 1).unwrap();
            assert!((f.prefactor - C64::from(1.0 / (1.0 + 2.0 * n))).norm() < 1e-15);
            assert!((f.ratio - C64::from((1.0 - 2.0 * n) / (1.0 + 2.0 * n))).norm() < 1e-15);
        }
    }

    #[test]
    fn characteristic_function_examples() {
        let sys = build_circulant_system(2, 1.0).unwrap();
        let v = theta_char_closed(&sys, 1, C64::new(1.0, 0.0)).unwrap();
        assert!((v - C64::from((-0.25f64).exp() / 4.0)).norm() < 1e-15);
        let f = theta_factor(&sys, 1).unwrap();
        let series = theta_char_laguerre(&f, C64::new(1.0, 0.0), 200).unwrap();
        assert!((series - v).norm() < 1e-8);
        let at_zero = theta_char_laguerre(&f, C64::new(0.0, 0.0), series_terms(&f).unwrap()).unwrap();
        assert!((at_zero - f.prefactor / (1.0 - f.ratio)).norm() < 1e-13);

        let sys3 = build_circulant_system(3, 0.5).unwrap();
        for j in 1..3 {
            let f = theta_factor(&sys3, j).unwrap();
            let nu = C64::new(0.7, 0.2);
            let a = theta_char_laguerre(&f, nu, series_terms(&f).unwrap()).unwrap();
            let b = theta_char_closed(&sys3, j, nu).unwrap();
            assert!((a - b).norm() < 1e-12, "{a} {b}");
        }
        assert!(theta_char_closed(&sys3, 0, C64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn determinant_identity() {
        close(croma_bound(2, 1.0).unwrap(), 1.0 / 3.0, 1e-15);
        close(croma_bound(3, 1.0).unwrap(), 1.0 / 7.0, 1e-15);
        for n in [0.1, 2.5] {
            close(croma_bound(2, n).unwrap(), 1.0 / (2.0 * n + 1.0), 1e-14);
        }
        let sys = build_circulant_system(2, 1.0).unwrap();
        assert!((sys.determinant_product() - C64::from(3.0)).norm() < 1e-14);
    }

    #[test]
    fn coherent_inputs_saturate() {
        let quad = QuadratureRule::default();
        let psi = coherent_state(C64::new(0.8, -0.4), 30).unwrap();
        for k in [2u32, 3, 4] {
            let v = k_purity_direct(&psi, 0.6, k, &quad).unwrap();
            close(v, croma_bound(k as usize, 0.6).unwrap(), 1e-8);
        }
    }

    #[test]
    fn fock_one_is_strictly_below() {
        // Tr[(N_n |1><1|)^2] = int P_{2n}(b) |<1|D(b)|1>|^2 = (1/c - 2/c^2 + 2/c^3)/(2n),
        // c = 1 + 1/(2n); 5/27 at n = 1.
        let psi = fock_state(1, 4).unwrap();
        let direct = k_purity_direct(&psi, 1.0, 2, &QuadratureRule::default()).unwrap();
        close(direct, 5.0 / 27.0, 1e-9);
        let via = k_purity_via_expectation(&psi, 1.0, 2, DEFAULT_EXPECTATION_ORDER).unwrap();
        close(via, direct, 1e-6);
    }

    #[test]
    fn expectation_route_examples() {
        let vac = fock_state(0, 1).unwrap();
        close(
            k_purity_via_expectation(&vac, 1.0, 2, DEFAULT_EXPECTATION_ORDER).unwrap(),
            1.0 / 3.0,
            1e-8,
        );
        let coh = coherent_state(C64::new(0.5, 0.0), 20).unwrap();
        let expected = croma_bound(3, 0.3).unwrap();
        close(
            k_purity_via_expectation(&coh, 0.3, 3, DEFAULT_EXPECTATION_ORDER).unwrap(),
            expected,
            1e-5,
        );
    }
}
