//! Gaussian quadrature rules on the half line and the complex plane.
//!
//! The Laguerre weights are evaluated from the closed-form weight formula
//! after Newton refinement of the nodes, so the far-tail weights keep full
//! relative precision. Rules that fold a Gaussian factor into the weight
//! multiply those tiny weights by large exponentials, which a plain
//! eigenvector-based Golub–Welsch weight could not survive.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};

/// `(nodes, weights)` for `int_0^inf e^{-x} f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("Gauss-Laguerre order must be >= 1"));
        }
        let jacobi = DMatrix::from_fn(order, order, |i, j| {
            if i == j {
                (2 * i + 1) as f64
            } else if i + 1 == j || j + 1 == i {
                (i.max(j)) as f64
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().cloned().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut weights = Vec::with_capacity(order);
        for x in nodes.iter_mut() {
            for _ in 0..8 {
                let (ln, lnm1, _) = laguerre_scaled(order, *x);
                // L_n'(x) = n (L_n - L_{n-1}) / x
                let deriv = order as f64 * (ln - lnm1) / *x;
                let step = ln / deriv;
                *x -= step;
                if step.abs() <= 1e-15 * x.abs() {
                    break;
                }
            }
            let (_, _, ln_abs_next) = laguerre_scaled(order + 1, *x);
            // w = x / ((n+1)^2 L_{n+1}(x)^2)
            let lw = x.ln() - 2.0 * ((order + 1) as f64).ln() - 2.0 * ln_abs_next;
            weights.push(lw.exp());
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Returns `(L_n, L_{n-1})` rescaled by a common positive factor, and
/// `ln|L_n|` unscaled.
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut log_scale = 0.0;
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e100 {
            cur /= mag;
            prev /= mag;
            log_scale += mag.ln();
        }
    }
    (cur, prev, cur.abs().ln() + log_scale)
}

/// `(nodes, weights)` for `int_{-inf}^{inf} e^{-t^2} f(t) dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("Gauss-Hermite order must be >= 1"));
        }
        let jacobi = DMatrix::from_fn(order, order, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jacobi);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| (eig.eigenvalues[i], sqrt_pi * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }
}

/// Polar quadrature for integrals against the isotropic Gaussian kernel
/// `P_n(mu) = e^{-|mu|^2/n} / (pi n)`.
///
/// The radial rule is Gauss–Laguerre in `|mu|^2` against the combined weight
/// `e^{-|mu|^2 (1/n + 1)}`: displacement matrix elements carry a factor
/// `e^{-|mu|^2/2}` each, so channel integrands are that Gaussian times a
/// polynomial in `|mu|^2` and the radial sum is exact up to the rule's degree.
/// The angular rule is uniform on `[0, 2 pi)` starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    radial_order: usize,
    angular_count: usize,
    laguerre: GaussLaguerre,
}

pub const DEFAULT_RADIAL_ORDER: usize = 40;
pub const DEFAULT_ANGULAR_COUNT: usize = 64;

/// A radial node of a [`QuadratureRule`] for a given noise strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNode {
    /// `|mu|`.
    pub radius: f64,
    /// Weight applied to the full integrand `P_n(mu) f(mu)` after angular averaging.
    pub weight: f64,
}

impl QuadratureRule {
    pub fn new(radial_order: usize, angular_count: usize) -> Result<Self> {
        if angular_count == 0 {
            return Err(invalid("angular count must be >= 1"));
        }
        Ok(Self {
            radial_order,
            angular_count,
            laguerre: GaussLaguerre::new(radial_order)?,
        })
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// The same rule with both orders doubled.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(2 * self.radial_order, 2 * self.angular_count)
    }

    /// Radial nodes for noise `n > 0`; angular averaging is left to the caller.
    pub fn radial_nodes(&self, n: f64) -> Vec<RadialNode> {
        let scale = n / (1.0 + n);
        self.laguerre
            .nodes
            .iter()
            .zip(&self.laguerre.weights)
            .map(|(&x, &w)| {
                let s = scale * x;
                RadialNode {
                    radius: s.sqrt(),
                    weight: w * s.exp() / (1.0 + n),
                }
            })
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = self.angular_count as f64;
        (0..self.angular_count)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / m)
            .collect()
    }

    /// All `(mu, weight)` nodes of the two-dimensional rule.
    pub fn nodes(&self, n: f64) -> Vec<(num_complex::Complex64, f64)> {
        let angles = self.angles();
        let m = self.angular_count as f64;
        self.radial_nodes(n)
            .into_iter()
            .flat_map(|node| {
                angles
                    .iter()
                    .map(move |&phi| (num_complex::Complex64::from_polar(node.radius, phi), node.weight / m))
            })
            .collect()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(DEFAULT_RADIAL_ORDER, DEFAULT_ANGULAR_COUNT).expect("default rule")
    }
}
