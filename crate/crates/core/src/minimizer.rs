//! Multi-start searches for the pure input that minimises an output entropy,
//! and the closed-form minimum over pure Gaussian inputs.
//!
//! Inputs are unit vectors on Fock levels `0..support_dim`, parameterised by
//! `2 support_dim` reals and normalised inside the objective. The channel is
//! linear, so its images of a Hermitian operator basis on the input support
//! are computed once and every objective call is a real linear combination
//! of them followed by a spectral or Husimi-grid evaluation.

use argmin::core::{CostFunction, Executor, State, TerminationReason};
use argmin::solver::neldermead::NelderMead;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bounds::{min_renyi_coherent, wehrl_min};
use crate::channels::{
    converged_dim, effective_thermal_photon, propagate_gaussian, ChannelSpec, ClassicalNoiseChannel, GaussianState,
    ThermalNoiseChannel,
};
use crate::entropies::{renyi_entropy, renyi_from_spectrum, wehrl_estimate, HusimiRule};
use crate::error::{invalid, Error, Result};
use crate::fock::{coherent_amplitudes, thermal_dim, CMatrix, DensityOperator, PureState, C64};
use crate::quadrature::QuadratureRule;

pub const MAX_SUPPORT_DIM: usize = 8;
pub const DEFAULT_MAX_ITERS: u64 = 2000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// A negative gap smaller than this is optimizer noise.
pub const OPTIMIZER_TOLERANCE: f64 = 1e-5;
/// Search-time Husimi grid for the Wehrl objective.
pub const WEHRL_SEARCH_RADIAL: usize = 40;
pub const WEHRL_SEARCH_ANGULAR: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Renyi,
    Wehrl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub support_dim: usize,
    pub starts: usize,
    pub seed: u64,
    pub max_iters: u64,
    pub tolerance: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Adds the vacuum (the coherent state exactly representable on any
    /// support) as an extra start.
    pub coherent_start: bool,
    pub radial_order: usize,
    pub angular_count: usize,
}

impl SearchConfig {
    pub fn new(support_dim: usize, starts: usize, seed: u64) -> Self {
        Self {
            support_dim,
            starts,
            seed,
            max_iters: DEFAULT_MAX_ITERS,
            tolerance: DEFAULT_TOLERANCE,
            initial_step: 0.1,
            coherent_start: false,
            radial_order: crate::quadrature::DEFAULT_RADIAL_ORDER,
            angular_count: crate::quadrature::DEFAULT_ANGULAR_COUNT,
        }
    }

    pub fn with_coherent_start(mut self, on: bool) -> Self {
        self.coherent_start = on;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.support_dim == 0 || self.support_dim > MAX_SUPPORT_DIM {
            return Err(invalid(format!(
                "support_dim must lie in 1..={MAX_SUPPORT_DIM}, got {}",
                self.support_dim
            )));
        }
        if self.starts == 0 && !self.coherent_start {
            return Err(invalid("at least one start is required"));
        }
        if !(self.tolerance > 0.0) || !(self.initial_step > 0.0) {
            return Err(invalid("tolerance and initial step must be > 0"));
        }
        Ok(())
    }
}

/// Outcome of a search. `violation` is set only when the gap is below both
/// `-1e-5` and `-10` times the truncation-error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub channel: ChannelSpec,
    pub objective: Objective,
    pub z: Option<f64>,
    pub best_value: f64,
    pub coherent_value: f64,
    pub gap: f64,
    pub best_state: Vec<C64>,
    pub best_start: usize,
    pub starts: usize,
    pub seed: u64,
    pub converged: bool,
    pub truncation_error: f64,
    pub violation: bool,
    pub start_values: Vec<f64>,
    pub config: SearchConfig,
}

impl SearchReport {
    pub fn best_state(&self) -> Result<PureState> {
        PureState::normalized(nalgebra::DVector::from_vec(self.best_state.clone()))
    }
}

enum RawChannel {
    Classical(ClassicalNoiseChannel),
    Thermal(ThermalNoiseChannel),
}

impl RawChannel {
    fn new(channel: &ChannelSpec, quad: &QuadratureRule, dim: usize) -> Result<Self> {
        Ok(match channel {
            ChannelSpec::Classical(c) => Self::Classical(ClassicalNoiseChannel::new(*c, quad, dim)),
            ChannelSpec::Thermal(t) => Self::Thermal(ThermalNoiseChannel::new(*t, dim, thermal_dim(t.n_env))?),
        })
    }

    fn apply_raw(&self, input: &CMatrix, support: usize) -> CMatrix {
        match self {
            Self::Classical(c) if c.spec().n == 0.0 => input.clone(),
            Self::Classical(c) => c.apply_raw(input, support),
            Self::Thermal(t) => t.apply_raw(input, support),
        }
    }
}

/// Channel images of the Hermitian basis `|k><k|`, `|k><l| + |l><k|`,
/// `i(|k><l| - |l><k|)` on the input support.
struct OutputMap {
    dim: usize,
    support: usize,
    images: Vec<CMatrix>,
}

impl OutputMap {
    fn new(channel: &ChannelSpec, quad: &QuadratureRule, support: usize, dim: usize) -> Result<Self> {
        let raw = RawChannel::new(channel, quad, dim)?;
        let mut images = Vec::with_capacity(support * support);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        for k in 0..support {
            for l in k..support {
                let mut bases = Vec::new();
                if k == l {
                    let mut b = CMatrix::zeros(dim, dim);
                    b[(k, k)] = one;
                    bases.push(b);
                } else {
                    let mut x = CMatrix::zeros(dim, dim);
                    x[(k, l)] = one;
                    x[(l, k)] = one;
                    let mut y = CMatrix::zeros(dim, dim);
                    y[(k, l)] = i;
                    y[(l, k)] = -i;
                    bases.push(x);
                    bases.push(y);
                }
                for b in bases {
                    images.push(raw.apply_raw(&b, support));
                }
            }
        }
        Ok(Self { dim, support, images })
    }

    /// Real coefficients of `|c><c|` in the basis, in the order of `images`.
    fn coefficients(&self, c: &[C64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.images.len());
        for k in 0..self.support {
            for l in k..self.support {
                let p = c[k] * c[l].conj();
                if k == l {
                    out.push(p.re);
                } else {
                    out.push(p.re);
                    out.push(p.im);
                }
            }
        }
        out
    }

    fn output(&self, c: &[C64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (w, img) in self.coefficients(c).iter().zip(&self.images) {
            if *w != 0.0 {
                m += img * C64::from(*w);
            }
        }
        m
    }
}

fn amplitudes(x: &[f64]) -> Option<Vec<C64>> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 1e-12) {
        return None;
    }
    Some(x.chunks(2).map(|p| C64::new(p[0], p[1]) / norm).collect())
}

const DEGENERATE_PENALTY: f64 = 1e6;

struct RenyiProblem<'a> {
    map: &'a OutputMap,
    z: f64,
}

impl CostFunction for RenyiProblem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let Some(c) = amplitudes(x) else {
            return Ok(DEGENERATE_PENALTY);
        };
        let out = self.map.output(&c);
        let eig: Vec<f64> = out.symmetric_eigenvalues().iter().map(|l| l.max(0.0)).collect();
        let total: f64 = eig.iter().sum();
        let eig: Vec<f64> = eig.iter().map(|l| l / total).collect();
        Ok(renyi_from_spectrum(&eig, self.z))
    }
}

/// Husimi values of the basis images on a fixed grid, so `Q` of any output
/// is a linear combination.
struct WehrlProblem {
    weights: Vec<f64>,
    /// `node_values[b][i] = <mu_i| image_b |mu_i> / pi`.
    node_values: Vec<Vec<f64>>,
    map_coeffs: OutputMapShape,
}

struct OutputMapShape {
    support: usize,
}

impl OutputMapShape {
    fn coefficients(&self, c: &[C64]) -> Vec<f64> {
        OutputMap {
            dim: 0,
            support: self.support,
            images: Vec::new(),
        }
        .coefficients(c)
    }
}

impl WehrlProblem {
    fn new(map: &OutputMap, rule: HusimiRule) -> Result<Self> {
        let nodes = rule.nodes()?;
        let weights = nodes.iter().map(|(_, w)| *w).collect();
        let node_values = map
            .images
            .par_iter()
            .map(|img| {
                nodes
                    .iter()
                    .map(|(mu, _)| {
                        let c = coherent_amplitudes(*mu, map.dim);
                        let v: C64 = c.dotc(&(img * &c));
                        v.re / PI
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            weights,
            node_values,
            map_coeffs: OutputMapShape { support: map.support },
        })
    }
}

impl CostFunction for WehrlProblem {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let Some(c) = amplitudes(x) else {
            return Ok(DEGENERATE_PENALTY);
        };
        let coeffs = self.map_coeffs.coefficients(&c);
        let mut q = vec![0.0; self.weights.len()];
        for (w, vals) in coeffs.iter().zip(&self.node_values) {
            if *w != 0.0 {
                for (qi, v) in q.iter_mut().zip(vals) {
                    *qi += w * v;
                }
            }
        }
        let norm: f64 = q.iter().zip(&self.weights).map(|(qi, w)| qi * w).sum();
        let w: f64 = q
            .iter()
            .zip(&self.weights)
            .filter(|(qi, _)| **qi > 0.0)
            .map(|(qi, wt)| {
                let qn = qi / norm;
                -wt * qn * (PI * qn).ln()
            })
            .sum();
        Ok(w)
    }
}

struct StartResult {
    index: usize,
    value: f64,
    params: Vec<f64>,
    converged: bool,
}

fn start_points(config: &SearchConfig) -> Vec<Vec<f64>> {
    let dim = 2 * config.support_dim;
    let mut points: Vec<Vec<f64>> = (0..config.starts)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|a: &f64| a * a).sum::<f64>().sqrt();
            v.iter().map(|a| a / norm).collect()
        })
        .collect();
    if config.coherent_start {
        let mut vac = vec![0.0; dim];
        vac[0] = 1.0;
        points.push(vac);
    }
    points
}

fn run_starts<P>(problem: &P, config: &SearchConfig) -> Result<Vec<StartResult>>
where
    P: CostFunction<Param = Vec<f64>, Output = f64> + Sync,
{
    let points = start_points(config);
    points
        .into_par_iter()
        .enumerate()
        .map(|(index, x0)| {
            let mut simplex = vec![x0.clone()];
            for i in 0..x0.len() {
                let mut v = x0.clone();
                v[i] += config.initial_step;
                simplex.push(v);
            }
            let solver = NelderMead::new(simplex)
                .with_sd_tolerance(config.tolerance)
                .map_err(|e| Error::Convergence(e.to_string()))?;
            let res = Executor::new(ProblemRef(problem), solver)
                .configure(|s| s.max_iters(config.max_iters))
                .run()
                .map_err(|e| Error::Convergence(e.to_string()))?;
            let state = res.state();
            let params = state.get_best_param().cloned().unwrap_or(x0);
            let converged = !matches!(state.get_termination_reason(), Some(TerminationReason::MaxItersReached));
            Ok(StartResult {
                index,
                value: state.get_best_cost(),
                params,
                converged,
            })
        })
        .collect()
}

/// Lets a borrowed problem be handed to the executor.
struct ProblemRef<'a, P>(&'a P);

impl<P: CostFunction> CostFunction for ProblemRef<'_, P> {
    type Param = P::Param;
    type Output = P::Output;

    fn cost(&self, x: &Self::Param) -> std::result::Result<Self::Output, argmin::core::Error> {
        self.0.cost(x)
    }
}

fn best_of(results: &[StartResult]) -> &StartResult {
    results
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)))
        .expect("at least one start")
}

fn working_dim(channel: &ChannelSpec, support: usize) -> usize {
    converged_dim(support, channel.effective_noise())
}

fn output_density(map: &OutputMap, c: &[C64]) -> Result<DensityOperator> {
    DensityOperator::new({
        let mut m = map.output(c);
        let tr: f64 = (0..m.nrows()).map(|i| m[(i, i)].re).sum();
        m /= C64::from(tr);
        m
    })
}

struct Scores {
    best_value: f64,
    coherent_value: f64,
    truncation_error: f64,
}

fn finish(
    channel: ChannelSpec,
    objective: Objective,
    z: Option<f64>,
    config: &SearchConfig,
    results: Vec<StartResult>,
    scores: Scores,
) -> SearchReport {
    let Scores {
        best_value,
        coherent_value,
        truncation_error,
    } = scores;
    let best = best_of(&results);
    let gap = best_value - coherent_value;
    let violation = gap < -OPTIMIZER_TOLERANCE && gap < -10.0 * truncation_error;
    let mut ordered: Vec<&StartResult> = results.iter().collect();
    ordered.sort_by_key(|r| r.index);
    SearchReport {
        channel,
        objective,
        z,
        best_value,
        coherent_value,
        gap,
        best_state: amplitudes(&best.params).expect("non-degenerate optimum"),
        best_start: best.index,
        starts: results.len(),
        seed: config.seed,
        converged: best.converged,
        truncation_error,
        violation,
        start_values: ordered.iter().map(|r| r.value).collect(),
        config: config.clone(),
    }
}

/// Minimises `S_z` of the channel output over pure inputs on `support_dim` levels.
pub fn minimize_output_renyi(channel: ChannelSpec, z: f64, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid(format!("z must be finite and > 0, got {z}")));
    }
    let s = config.support_dim;
    let quad = QuadratureRule::new(config.radial_order, config.angular_count)?;
    let dim = working_dim(&channel, s);
    let map = OutputMap::new(&channel, &quad, s, dim)?;
    let results = run_starts(&RenyiProblem { map: &map, z }, config)?;
    let best = best_of(&results);
    let c = amplitudes(&best.params).expect("non-degenerate optimum");
    let value = renyi_entropy(&output_density(&map, &c)?, z)?;

    let fine_map = OutputMap::new(&channel, &quad.doubled()?, s, dim + 16)?;
    let fine = renyi_entropy(&output_density(&fine_map, &c)?, z)?;
    let coherent = min_renyi_coherent(channel.effective_noise(), z);
    let scores = Scores {
        best_value: value,
        coherent_value: coherent,
        truncation_error: (fine - value).abs(),
    };
    Ok(finish(channel, Objective::Renyi, Some(z), config, results, scores))
}

/// Minimises the Wehrl entropy of the channel output over pure inputs.
///
/// The search uses a fixed coarse grid centred at the origin; the best state
/// is re-evaluated on its own default grid and on the doubled grid.
pub fn minimize_output_wehrl(channel: ChannelSpec, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let s = config.support_dim;
    let quad = QuadratureRule::new(config.radial_order, config.angular_count)?;
    let dim = working_dim(&channel, s);
    let map = OutputMap::new(&channel, &quad, s, dim)?;
    let width = channel.effective_noise() + 1.0;
    let rule = HusimiRule::new(WEHRL_SEARCH_RADIAL, WEHRL_SEARCH_ANGULAR, C64::new(0.0, 0.0), width)?;
    let results = run_starts(&WehrlProblem::new(&map, rule)?, config)?;
    let best = best_of(&results);
    let c = amplitudes(&best.params).expect("non-degenerate optimum");
    let out = output_density(&map, &c)?;
    let est = wehrl_estimate(&out, HusimiRule::auto(&out))?;
    let scores = Scores {
        best_value: est.value,
        coherent_value: wehrl_min(channel.effective_noise()),
        truncation_error: est.grid_error,
    };
    Ok(finish(channel, Objective::Wehrl, None, config, results, scores))
}

/// Minimum over pure Gaussian inputs `cov = diag(s/2, 1/(2s))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianMinimum {
    pub s: f64,
    pub n_prime: f64,
    pub value: f64,
    pub output: GaussianState,
}

/// Output thermal-equivalent photon number for squeeze `s`.
pub fn gaussian_output_photon(channel: &ChannelSpec, s: f64) -> Result<f64> {
    effective_thermal_photon(&propagate_gaussian(&GaussianState::squeezed(s)?, channel))
}

/// `S_z` of the output for the squeezed input with parameter `s`.
pub fn gaussian_output_entropy(channel: &ChannelSpec, z: f64, s: f64) -> Result<f64> {
    Ok(min_renyi_coherent(gaussian_output_photon(channel, s)?, z))
}

/// The output determinant is affine in `s + 1/s` with a non-negative
/// coefficient and every `S_z` increases with `n'`, so `s = 1` is optimal.
pub fn minimize_gaussian(channel: &ChannelSpec, z: f64) -> Result<GaussianMinimum> {
    if !(z > 0.0) {
        return Err(invalid(format!("z must be > 0, got {z}")));
    }
    let s = 1.0;
    let output = propagate_gaussian(&GaussianState::squeezed(s)?, channel);
    let n_prime = effective_thermal_photon(&output)?;
    Ok(GaussianMinimum {
        s,
        n_prime,
        value: min_renyi_coherent(n_prime, z),
        output,
    })
}
