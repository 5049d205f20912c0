//! Closed-form minima and lower bounds on the minimum output Rényi entropy
//! of `N_n`, Wehrl-type minima, and their transfer to `E_eta^N`.
//!
//! Bounds that do not apply at a given order evaluate to `0`, which is
//! itself a valid (trivial) lower bound on any entropy.

use serde::{Deserialize, Serialize};

use crate::channels::ThermalNoiseSpec;
use crate::entropies::ORDER_ONE_WINDOW;
use crate::error::{invalid, Error, Result};

/// Default largest integer order used by the staircase-type bounds.
pub const DEFAULT_K_MAX: usize = 12;
/// Slack in the ordering check of a [`BoundCurve`].
pub const ORDERING_TOLERANCE: f64 = 1e-9;

const BISECTION_LO: f64 = 1e-15;
const BISECTION_ITERATIONS: usize = 200;

fn x_ln_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `ln((n+1)^z - n^z)`, accurate for large `z`.
fn ln_coherent_purity_inverse(n: f64, z: f64) -> f64 {
    let r = n / (n + 1.0);
    z * (n + 1.0).ln() + (-r.powf(z)).ln_1p()
}

/// `ln[(n+1)^z - n^z]/(z-1)`: output Rényi entropy of a coherent input.
///
/// The `z -> 1` limit `(n+1) ln(n+1) - n ln n` is used near `z = 1`, and
/// `ln(n+1)` at `z = inf`.
pub fn min_renyi_coherent(n: f64, z: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    if z.is_infinite() {
        return (n + 1.0).ln();
    }
    if (z - 1.0).abs() < ORDER_ONE_WINDOW {
        return x_ln_x(n + 1.0) - x_ln_x(n);
    }
    ln_coherent_purity_inverse(n, z) / (z - 1.0)
}

/// Staircase bound from monotonicity in the order.
///
/// For `z > 1` this is the integer minimum at `k = max(2, ceil z)`. For
/// `z <= 1` it is `vn_bound` when supplied, else the `k = 2` value.
pub fn lower_bound_1(n: f64, z: f64, vn_bound: Option<f64>) -> f64 {
    if z > 1.0 {
        let k = z.ceil().max(2.0);
        min_renyi_coherent(n, k)
    } else {
        vn_bound.unwrap_or_else(|| min_renyi_coherent(n, 2.0))
    }
}

/// `max_{2 <= k <= floor z} z/(z-1) ln((n+1)^k - n^k)/k`; `0` for `z < 2`.
pub fn lower_bound_2(n: f64, z: f64) -> f64 {
    if !(z >= 2.0) || n == 0.0 {
        return 0.0;
    }
    let kz = z.floor() as u64;
    let pref = z / (z - 1.0);
    (2..=kz)
        .map(|k| pref * ln_coherent_purity_inverse(n, k as f64) / k as f64)
        .fold(0.0, f64::max)
}

/// `h_z(x) = (1 - q x)^z + q x^z`, `q = floor(1/x)`.
pub fn h_fun(x: f64, z: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(invalid(format!("h_z needs x in (0, 1], got {x}")));
    }
    let q = (1.0 / x).floor();
    let rest = (1.0 - q * x).max(0.0);
    Ok(rest.powf(z) + q * x.powf(z))
}

/// `v(x) = -(1 - q x) ln(1 - q x) - q x ln x`, `q = floor(1/x)`.
pub fn v_fun(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(invalid(format!("v needs x in (0, 1], got {x}")));
    }
    let q = (1.0 / x).floor();
    let rest = (1.0 - q * x).max(0.0);
    Ok(-x_ln_x(rest) - q * x_ln_x(x))
}

/// Solves `f(x) = target` on `[1e-15, 1]` for monotone `f` by bisection.
fn bisect(f: impl Fn(f64) -> f64, target: f64) -> Result<f64> {
    let (flo, fhi) = (f(BISECTION_LO), f(1.0));
    let (lo_v, hi_v) = (flo.min(fhi), flo.max(fhi));
    if !(target >= lo_v && target <= hi_v) {
        return Err(Error::OutOfRange {
            value: target,
            lo: lo_v,
            hi: hi_v,
        });
    }
    let increasing = fhi >= flo;
    let (mut lo, mut hi) = (BISECTION_LO, 1.0);
    for _ in 0..BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of `h_z` (increasing for `z > 1`, decreasing for `z < 1`).
pub fn h_inv(c: f64, z: f64) -> Result<f64> {
    if (z - 1.0).abs() < ORDER_ONE_WINDOW || !(z > 0.0) {
        return Err(invalid(format!("h_z is not invertible at z = {z}")));
    }
    bisect(|x| h_fun(x, z).expect("bracket inside (0, 1]"), c)
}

/// Inverse of the decreasing function `v`.
pub fn v_inv(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(invalid(format!("v^-1 needs y >= 0, got {y}")));
    }
    bisect(|x| v_fun(x).expect("bracket inside (0, 1]"), y)
}

/// `-ln h_z(x) / (z - 1)`, with `v(x)` at `z = 1`.
fn entropy_of_h(x: f64, z: f64) -> Result<f64> {
    if (z - 1.0).abs() < ORDER_ONE_WINDOW {
        return v_fun(x);
    }
    Ok(-h_fun(x, z)?.ln() / (z - 1.0))
}

/// The `h`-path of bound 3 for a single integer `k >= z`; `None` if `z > k`.
pub fn lower_bound_3_at(n: f64, z: f64, k: usize) -> Result<Option<f64>> {
    if k < 2 {
        return Err(invalid("k must be >= 2"));
    }
    if z > k as f64 || n == 0.0 {
        return Ok(None);
    }
    let purity = (-ln_coherent_purity_inverse(n, k as f64)).exp();
    let x = h_inv(purity, k as f64)?;
    entropy_of_h(x, z).map(Some)
}

/// Bound 3: the larger of the `h`-path maximised over `k <= k_max` and, for
/// `z <= 1` with a supplied von Neumann bound, the `v`-path. `0` if none applies.
pub fn lower_bound_3(n: f64, z: f64, k_max: usize, vn_bound: Option<f64>) -> Result<f64> {
    let mut best = 0.0f64;
    for k in 2..=k_max.max(2) {
        if let Some(v) = lower_bound_3_at(n, z, k)? {
            best = best.max(v);
        }
    }
    if let (true, Some(s)) = (z <= 1.0, vn_bound) {
        best = best.max(entropy_of_h(v_inv(s)?, z)?);
    }
    Ok(best)
}

/// `ln z/(z-1) + ln n`; `1 + ln n` near `z = 1`, `-inf` at `n = 0`.
pub fn lower_bound_4(n: f64, z: f64) -> f64 {
    if n == 0.0 {
        return f64::NEG_INFINITY;
    }
    if (z - 1.0).abs() < ORDER_ONE_WINDOW {
        return 1.0 + n.ln();
    }
    z.ln() / (z - 1.0) + n.ln()
}

pub fn wehrl_min(n: f64) -> f64 {
    1.0 + n.ln_1p()
}

/// `ln z/(z-1) + ln(n+1)`, the Rényi–Wehrl entropy of a noisy coherent state.
pub fn renyi_wehrl_min(n: f64, z: f64) -> f64 {
    if (z - 1.0).abs() < ORDER_ONE_WINDOW {
        return wehrl_min(n);
    }
    z.ln() / (z - 1.0) + n.ln_1p()
}

/// `1/(z (n+1)^{z-1})`: the largest `m_z` an output of `N_n` can have.
pub fn renyi_wehrl_purity_cap(n: f64, z: f64) -> f64 {
    1.0 / (z * (n + 1.0).powf(z - 1.0))
}

/// Sharp Young constant `(x^{1/x} / x'^{1/x'})^{1/2}`, `1/x + 1/x' = 1`.
pub fn young_constant(x: f64) -> f64 {
    if x == 1.0 {
        return 1.0;
    }
    let xp = x / (x - 1.0);
    (x.powf(1.0 / x) / xp.powf(1.0 / xp)).sqrt()
}

/// The Young-inequality estimate of `m_z` with exponents
/// `p = (n+1) z/(n z + 1)` and `q = (n+1) z/(z + n)`, which satisfy
/// `1/p + 1/q = 1 + 1/z`. Equals [`renyi_wehrl_purity_cap`].
pub fn young_chain(n: f64, z: f64) -> f64 {
    if n == 0.0 {
        return 1.0 / z;
    }
    let p = (n + 1.0) * z / (n * z + 1.0);
    let q = (n + 1.0) * z / (z + n);
    let c = young_constant(p) * young_constant(q) / young_constant(z);
    c.powf(2.0 * z) * (1.0 / p).powf(z / p) * (n / (q * n.powf(q))).powf(z / q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// Coherent-input Rényi entropy (upper bound, exact at integers).
    Upper,
    Lb1,
    Lb2,
    Lb3,
    Lb4,
    Wehrl,
    RenyiWehrl,
}

/// Evaluates a classical-noise formula at `n = (1 - eta) N`.
pub fn thermal_transfer(spec: ThermalNoiseSpec, which: BoundId, z: f64, vn_bound: Option<f64>) -> Result<f64> {
    let n = spec.effective_noise();
    Ok(match which {
        BoundId::Upper => min_renyi_coherent(n, z),
        BoundId::Lb1 => lower_bound_1(n, z, vn_bound),
        BoundId::Lb2 => lower_bound_2(n, z),
        BoundId::Lb3 => lower_bound_3(n, z, DEFAULT_K_MAX, vn_bound)?,
        BoundId::Lb4 => lower_bound_4(n, z),
        BoundId::Wehrl => wehrl_min(n),
        BoundId::RenyiWehrl => renyi_wehrl_min(n, z),
    })
}

/// Upper bound and lower bounds 1-4 tabulated over `z_grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub n: f64,
    pub z_grid: Vec<f64>,
    pub upper: Vec<f64>,
    pub lb1: Vec<f64>,
    pub lb2: Vec<f64>,
    pub lb3: Vec<f64>,
    pub lb4: Vec<f64>,
    pub vn_bound_used: Option<f64>,
    pub k_max: usize,
    /// `ln(n+1)`, the large-order limit.
    pub s_inf: f64,
}

impl BoundCurve {
    pub fn lb_max(&self, i: usize) -> f64 {
        [self.lb1[i], self.lb2[i], self.lb3[i], self.lb4[i]]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

pub fn figure_data(n: f64, z_grid: &[f64], vn_bound: Option<f64>, k_max: usize) -> Result<BoundCurve> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(invalid(format!("n must be > 0, got {n}")));
    }
    if let Some(z) = z_grid.iter().find(|z| !(**z > 0.0) || !z.is_finite()) {
        return Err(invalid(format!("orders must be finite and > 0, got {z}")));
    }
    if let Some(s) = vn_bound {
        if !(s >= 0.0) {
            return Err(invalid(format!("von Neumann bound must be >= 0, got {s}")));
        }
    }
    let mut curve = BoundCurve {
        n,
        z_grid: z_grid.to_vec(),
        upper: Vec::new(),
        lb1: Vec::new(),
        lb2: Vec::new(),
        lb3: Vec::new(),
        lb4: Vec::new(),
        vn_bound_used: vn_bound,
        k_max,
        s_inf: n.ln_1p(),
    };
    for &z in z_grid {
        curve.upper.push(min_renyi_coherent(n, z));
        curve.lb1.push(lower_bound_1(n, z, vn_bound));
        curve.lb2.push(lower_bound_2(n, z));
        curve.lb3.push(lower_bound_3(n, z, k_max, vn_bound)?);
        curve.lb4.push(lower_bound_4(n, z));
    }
    for (i, &z) in z_grid.iter().enumerate() {
        let excess = curve.lb_max(i) - curve.upper[i];
        if excess > ORDERING_TOLERANCE {
            return Err(Error::IdentityViolation {
                what: format!("bound ordering at z = {z}"),
                residual: excess,
                tolerance: ORDERING_TOLERANCE,
            });
        }
    }
    Ok(curve)
}
