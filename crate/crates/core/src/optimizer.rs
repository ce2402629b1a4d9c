//! Classical outer loop: Adam over the 2p angles using central finite
//! differences of the exact expectation, and extraction of a feasible
//! schedule from measurement samples.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::mwis::{is_independent, schedule_weight, LinkSchedule, OptResult};
use crate::simulator::{expectation, prepare_qaoa_state, Counts, EnergyTable, QaoaParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub p: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            p: 10,
            epochs: 200,
            learning_rate: 0.05,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            fd_step: 1e-3,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.p < 1 {
            return bad("p must be at least 1".into());
        }
        if !(self.learning_rate > 0.0) {
            return bad(format!("learning_rate must be positive, got {}", self.learning_rate));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&b) {
                return bad(format!("{name} must lie in [0, 1), got {b}"));
            }
        }
        if !(self.adam_eps > 0.0) {
            return bad(format!("adam_eps must be positive, got {}", self.adam_eps));
        }
        if !(self.fd_step > 0.0) {
            return bad(format!("fd_step must be positive, got {}", self.fd_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub params_best: QaoaParams,
    pub energy_best: f64,
    pub energy_initial: f64,
    /// Expectation after each epoch's update.
    pub trace: Vec<f64>,
}

/// Central differences `(f(x + h e_i) - f(x - h e_i)) / 2h`.
pub fn finite_diff_gradient<F>(mut objective: F, theta: &[f64], fd_step: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut probe = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            probe[i] = theta[i] + fd_step;
            let plus = objective(&probe);
            probe[i] = theta[i] - fd_step;
            let minus = objective(&probe);
            probe[i] = theta[i];
            (plus - minus) / (2.0 * fd_step)
        })
        .collect()
}

/// `<H_P>` at the flat parameter vector `[gamma.., beta..]`.
pub fn qaoa_objective(table: &EnergyTable, theta: &[f64]) -> Result<f64> {
    let params = QaoaParams::from_flat(theta)?;
    expectation(&prepare_qaoa_state(table, &params)?, table)
}

/// Seeded start: `gamma_l ~ U[0, pi)`, `beta_l ~ U[0, pi/2)`.
pub fn initial_params(p: usize, seed: u64) -> QaoaParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = (0..p).map(|_| rng.random_range(0.0..PI)).collect();
    let beta = (0..p).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect();
    QaoaParams::new(gamma, beta).expect("equal lengths")
}

/// Minimises `<H_P>` with Adam and returns the best parameters seen.
pub fn adam_optimize(table: &EnergyTable, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let mut theta = initial_params(cfg.p, cfg.seed).to_flat();
    let objective = |t: &[f64]| qaoa_objective(table, t).expect("parameter layout is fixed");

    let energy_initial = objective(&theta);
    let mut best = (energy_initial, theta.clone());
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];

    for epoch in 1..=cfg.epochs {
        let grad = finite_diff_gradient(objective, &theta, cfg.fd_step);
        let t = epoch as i32;
        let bias1 = 1.0 - cfg.adam_beta1.powi(t);
        let bias2 = 1.0 - cfg.adam_beta2.powi(t);
        for i in 0..theta.len() {
            m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
            v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
            theta[i] -= cfg.learning_rate * (m[i] / bias1) / ((v[i] / bias2).sqrt() + cfg.adam_eps);
        }
        let energy = objective(&theta);
        trace.push(energy);
        if energy < best.0 {
            best = (energy, theta.clone());
        }
    }

    Ok(OptimizationResult {
        params_best: QaoaParams::from_flat(&best.1)?,
        energy_best: best.0,
        energy_initial,
        trace,
    })
}

/// Fraction of shots that landed on an independent set.
pub fn feasible_fraction(counts: &Counts, g: &ConflictGraph) -> Result<f64> {
    let total: usize = counts.values().sum();
    if total == 0 {
        return Err(Error::Domain("no measurement samples".into()));
    }
    let mut feasible = 0;
    for (&idx, &c) in counts {
        if is_independent(g, &LinkSchedule::from_index(idx, g.n()))? {
            feasible += c;
        }
    }
    Ok(feasible as f64 / total as f64)
}

/// Picks the heaviest independent sample (lexicographically smallest on
/// ties). With no independent sample, repairs the most frequent one by
/// unscheduling the lighter endpoint of each violated edge (higher index on
/// ties).
pub fn extract_schedule(counts: &Counts, g: &ConflictGraph) -> Result<OptResult> {
    if counts.values().all(|&c| c == 0) {
        return Err(Error::Domain("no measurement samples".into()));
    }
    let mut best: Option<OptResult> = None;
    for (&idx, &c) in counts {
        if c == 0 {
            continue;
        }
        let s = LinkSchedule::from_index(idx, g.n());
        if !is_independent(g, &s)? {
            continue;
        }
        let weight = schedule_weight(g, &s)?;
        let better = match &best {
            None => true,
            Some(b) => weight > b.weight || (weight == b.weight && s < b.schedule),
        };
        if better {
            best = Some(OptResult { schedule: s, weight });
        }
    }
    if let Some(b) = best {
        return Ok(b);
    }

    let modal = counts
        .iter()
        .map(|(&idx, &c)| (c, LinkSchedule::from_index(idx, g.n())))
        .max_by(|(ca, sa), (cb, sb)| ca.cmp(cb).then_with(|| sb.cmp(sa)))
        .map(|(_, s)| s)
        .expect("counts are non-empty");
    OptResult::new(g, repair(g, modal))
}

fn repair(g: &ConflictGraph, mut s: LinkSchedule) -> LinkSchedule {
    let w = g.weights();
    // Unscheduling never creates a new violation, so one ordered pass suffices.
    for &(i, j) in g.edges() {
        if s.is_scheduled(i) && s.is_scheduled(j) {
            let drop = if w[i] < w[j] { i } else { j };
            s.set(drop, false);
        }
    }
    s
}
