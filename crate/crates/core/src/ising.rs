//! Compilation of an MWIS instance into a diagonal problem Hamiltonian.
//!
//! A [`DiagonalHamiltonian`] is a polynomial in Pauli-Z operators of degree
//! at most two. On a basis state `x` each `Z_k` takes the value
//! `z_k = 1 - 2 x_k`, so `|0>` maps to `+1` and `|1>` to `-1`.
//!
//! The objective term `H_O = sum_k (w_k / 2) Z_k` is minimised by scheduling
//! heavy links. The constraint term adds, for every conflict edge with
//! `W = w_i + w_j`, the operator `-(W / 4)(Z_i + Z_j - Z_i Z_j)`, which
//! costs `W` more when both endpoints are scheduled than otherwise. Identity
//! parts of both expansions are dropped, so energies are offset from the
//! schedule weight by a graph-dependent constant.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::mwis::LinkSchedule;
use crate::simulator::MAX_QUBITS;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    constant: f64,
    linear: Vec<f64>,
    quad: BTreeMap<(usize, usize), f64>,
}

impl DiagonalHamiltonian {
    pub fn zero(n: usize) -> Self {
        Self { n, constant: 0.0, linear: vec![0.0; n], quad: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Coefficient of `Z_k`, indexed by `k`.
    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// Coefficients of `Z_i Z_j` keyed by `(i, j)` with `i < j`.
    pub fn quad(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quad
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, k: usize, c: f64) -> Result<()> {
        let n = self.n;
        *self.linear.get_mut(k).ok_or(Error::IndexOutOfRange { index: k, n })? += c;
        Ok(())
    }

    /// Adds `c Z_i Z_j`; the pair is stored as `(min, max)`.
    pub fn add_quad(&mut self, i: usize, j: usize, c: f64) -> Result<()> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange { index: idx, n: self.n });
            }
        }
        if i == j {
            return Err(Error::Domain(format!("Z_{i} Z_{i} is not a two-body term")));
        }
        *self.quad.entry((i.min(j), i.max(j))).or_insert(0.0) += c;
        Ok(())
    }

    /// Coefficient-wise `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: other.n });
        }
        let mut out = self.clone();
        out.constant += factor * other.constant;
        for (a, b) in out.linear.iter_mut().zip(&other.linear) {
            *a += factor * b;
        }
        for (&key, &c) in &other.quad {
            *out.quad.entry(key).or_insert(0.0) += factor * c;
        }
        Ok(out)
    }

    /// Energy of the basis state encoded by the little-endian `index`.
    fn energy_at(&self, index: usize) -> f64 {
        let z = |k: usize| if index >> k & 1 == 1 { -1.0 } else { 1.0 };
        let lin: f64 = self.linear.iter().enumerate().map(|(k, c)| c * z(k)).sum();
        let quad: f64 = self.quad.iter().map(|(&(i, j), c)| c * z(i) * z(j)).sum();
        self.constant + lin + quad
    }
}

impl fmt::Display for DiagonalHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "constant {}", self.constant)?;
        for (k, c) in self.linear.iter().enumerate() {
            if *c != 0.0 {
                writeln!(f, "Z{k} {c}")?;
            }
        }
        for (&(i, j), c) in &self.quad {
            writeln!(f, "Z{i} Z{j} {c}")?;
        }
        Ok(())
    }
}

/// `(I - Z_k) / 2`, which evaluates to `x_k`.
pub fn boolean_var_term(n: usize, k: usize) -> Result<DiagonalHamiltonian> {
    let mut h = DiagonalHamiltonian::zero(n);
    h.add_linear(k, -0.5)?;
    h.add_constant(0.5);
    Ok(h)
}

/// `(I - Z_i - Z_j + Z_i Z_j) / 4`, which evaluates to `x_i AND x_j`.
pub fn boolean_and_term(n: usize, i: usize, j: usize) -> Result<DiagonalHamiltonian> {
    if i >= j {
        return Err(Error::Domain(format!("AND term needs i < j, got ({i}, {j})")));
    }
    let mut h = DiagonalHamiltonian::zero(n);
    h.add_linear(i, -0.25)?;
    h.add_linear(j, -0.25)?;
    h.add_quad(i, j, 0.25)?;
    h.add_constant(0.25);
    Ok(h)
}

/// Objective Hamiltonian `sum_k (w_k / 2) Z_k`.
pub fn compile_objective(g: &ConflictGraph) -> DiagonalHamiltonian {
    let mut h = DiagonalHamiltonian::zero(g.n());
    for (k, &w) in g.weights().iter().enumerate() {
        h.linear[k] = w as f64 / 2.0;
    }
    h
}

/// Constraint Hamiltonian: `-(W / 4)(Z_i + Z_j - Z_i Z_j)` per edge.
pub fn compile_constraint(g: &ConflictGraph) -> DiagonalHamiltonian {
    let mut h = DiagonalHamiltonian::zero(g.n());
    let w = g.weights();
    for &(i, j) in g.edges() {
        let quarter = (w[i] + w[j]) as f64 / 4.0;
        h.linear[i] -= quarter;
        h.linear[j] -= quarter;
        *h.quad.entry((i, j)).or_insert(0.0) += quarter;
    }
    h
}

/// Problem Hamiltonian `H_O + rho * H_C`.
pub fn compile_problem(g: &ConflictGraph, rho: f64) -> Result<DiagonalHamiltonian> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("penalty rate must be a positive real, got {rho}")));
    }
    compile_objective(g).add_scaled(&compile_constraint(g), rho)
}

/// Energy of a single bitstring.
pub fn evaluate_diagonal(h: &DiagonalHamiltonian, x: &LinkSchedule) -> Result<f64> {
    if x.len() != h.n {
        return Err(Error::LengthMismatch { expected: h.n, actual: x.len() });
    }
    Ok(h.energy_at(x.to_index()))
}

/// Energies of all `2^n` basis states, indexed little-endian.
pub fn diagonal_table(h: &DiagonalHamiltonian) -> Result<Vec<f64>> {
    if h.n > MAX_QUBITS {
        return Err(Error::Capacity { what: "simulator", n: h.n, cap: MAX_QUBITS });
    }
    let dim = 1usize << h.n;
    let mut table = vec![h.constant; dim];
    // Accumulate term by term; each term contributes +-c depending on parity.
    for (k, &c) in h.linear.iter().enumerate() {
        if c != 0.0 {
            for (x, e) in table.iter_mut().enumerate() {
                *e += if x >> k & 1 == 1 { -c } else { c };
            }
        }
    }
    for (&(i, j), &c) in &h.quad {
        for (x, e) in table.iter_mut().enumerate() {
            *e += if (x >> i ^ x >> j) & 1 == 1 { -c } else { c };
        }
    }
    Ok(table)
}
