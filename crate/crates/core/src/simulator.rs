//! Dense state-vector simulation of the layered QAOA circuit.
//!
//! Basis index convention: bit `k` of an amplitude's index is the value of
//! qubit `k` (little-endian), the same convention [`LinkSchedule`] uses.
//!
//! [`LinkSchedule`]: crate::mwis::LinkSchedule

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Hard cap on simulated register size.
pub const MAX_QUBITS: usize = 20;

/// Precomputed diagonal of the problem Hamiltonian.
///
/// Distinct energy levels are kept separately so a phase layer needs one
/// `exp` per level instead of one per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    n: usize,
    values: Vec<f64>,
    levels: Vec<f64>,
    level_of: Vec<u32>,
}

impl EnergyTable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let dim = values.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Domain(format!("energy table length {dim} is not 2^n with n >= 1")));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Capacity { what: "simulator", n, cap: MAX_QUBITS });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("energy table contains non-finite value {v}")));
        }
        let mut levels = values.clone();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let level_of = values
            .iter()
            .map(|v| levels.binary_search_by(|l| l.total_cmp(v)).unwrap() as u32)
            .collect();
        Ok(Self { n, values, levels, level_of })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.levels[0]
    }

    pub fn max(&self) -> f64 {
        *self.levels.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        if index >= 1 << n {
            return Err(Error::IndexOutOfRange { index, n: 1 << n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalisation.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Domain(format!("amplitude count {dim} is not 2^n with n >= 1")));
        }
        let n = dim.trailing_zeros() as usize;
        check_qubits(n)?;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain("register needs at least one qubit".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::Capacity { what: "simulator", n, cap: MAX_QUBITS });
    }
    Ok(())
}

fn check_sizes(s: &StateVector, table: &EnergyTable) -> Result<()> {
    if table.n != s.n {
        return Err(Error::LengthMismatch { expected: s.amps.len(), actual: table.values.len() });
    }
    Ok(())
}

/// The 2p variational angles, `gamma[l]` and `beta[l]` for layer `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::LengthMismatch { expected: gamma.len(), actual: beta.len() });
        }
        Ok(Self { gamma, beta })
    }

    /// Splits `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn from_flat(theta: &[f64]) -> Result<Self> {
        if theta.len() % 2 != 0 {
            return Err(Error::Domain(format!("flat parameter vector has odd length {}", theta.len())));
        }
        let (g, b) = theta.split_at(theta.len() / 2);
        Self::new(g.to_vec(), b.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

/// Uniform superposition, as produced by a Hadamard on every qubit.
pub fn init_uniform(n: usize) -> Result<StateVector> {
    check_qubits(n)?;
    let a = (0.5f64).powf(n as f64 / 2.0);
    Ok(StateVector { n, amps: vec![Complex64::new(a, 0.0); 1 << n] })
}

/// `amps[x] *= exp(-i gamma E(x))`.
pub fn apply_problem_layer(s: &mut StateVector, table: &EnergyTable, gamma: f64) -> Result<()> {
    check_sizes(s, table)?;
    let phases: Vec<Complex64> = table.levels.iter().map(|&e| Complex64::cis(-gamma * e)).collect();
    for (a, &lvl) in s.amps.iter_mut().zip(&table.level_of) {
        *a *= phases[lvl as usize];
    }
    Ok(())
}

/// `exp(-i beta sum_k X_k)`, applied as one `Rx(2 beta)` per qubit.
pub fn apply_mixing_layer(s: &mut StateVector, beta: f64) {
    let (sin, cos) = beta.sin_cos();
    for k in 0..s.n {
        let stride = 1usize << k;
        for block in s.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a0, b0) = (*a, *b);
                // -i sin * (re + i im) = sin*im - i sin*re
                *a = Complex64::new(cos * a0.re + sin * b0.im, cos * a0.im - sin * b0.re);
                *b = Complex64::new(cos * b0.re + sin * a0.im, cos * b0.im - sin * a0.re);
            }
        }
    }
}

/// Uniform superposition followed by `p` blocks of phase then mixing layer.
pub fn prepare_qaoa_state(table: &EnergyTable, params: &QaoaParams) -> Result<StateVector> {
    let mut s = init_uniform(table.n)?;
    for (&gamma, &beta) in params.gamma.iter().zip(&params.beta) {
        apply_problem_layer(&mut s, table, gamma)?;
        apply_mixing_layer(&mut s, beta);
    }
    Ok(s)
}

/// `sum_x |amps[x]|^2 E(x)`.
pub fn expectation(s: &StateVector, table: &EnergyTable) -> Result<f64> {
    check_sizes(s, table)?;
    Ok(s.amps.iter().zip(&table.values).map(|(a, e)| a.norm_sqr() * e).sum())
}

/// Measurement outcome counts keyed by little-endian basis index.
pub type Counts = BTreeMap<usize, usize>;

/// Draws `shots` computational-basis measurements.
pub fn sample_measurements(s: &StateVector, shots: usize, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(s.amps.len());
    let mut acc = 0.0;
    for a in &s.amps {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let last_nonzero = s.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Counts::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}
