//! Finite-state TASEP master equation solved by matrix exponential.
//!
//! Three state spaces are supported: labelled particles on the line, labelled
//! particles on the lifted ring (`x_1 < ... < x_N < x_1 + L`, so windings are
//! kept), and unlabelled ring configurations. On the first two the number of
//! jumps per particle is capped; any jump past the cap moves the chain into a
//! single absorbing overflow state. Jump counts never decrease, so the law of
//! every explicit state is exact despite the truncation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CTMC_MAX_STATES, EXPM_TAYLOR_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CtmcModel {
    Line,
    RingLifted { period: i64 },
    Ring { period: i64 },
}

/// Generator of the (truncated) chain started from one configuration.
#[derive(Debug, Clone)]
pub struct CtmcOracle {
    pub model: CtmcModel,
    pub start: Vec<i64>,
    pub states: Vec<Vec<i64>>,
    /// index of the overflow state, if the model is truncated
    pub overflow: Option<usize>,
    generator: Vec<f64>,
    index: HashMap<Vec<i64>, usize>,
}

/// Transient law from the start configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CtmcDistribution {
    pub states: Vec<Vec<i64>>,
    pub probabilities: Vec<f64>,
    /// mass that left the truncated state space
    pub overflow: f64,
}

impl CtmcDistribution {
    pub fn probability(&self, state: &[i64]) -> f64 {
        self.states.iter().position(|s| s == state).map_or(0.0, |k| self.probabilities[k])
    }
}

fn validate(model: CtmcModel, start: &[i64]) -> Result<()> {
    if start.is_empty() {
        return Err(Error::invalid("at least one particle is required"));
    }
    if !start.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Unordered(start.to_vec()));
    }
    match model {
        CtmcModel::Line => Ok(()),
        CtmcModel::RingLifted { period } => {
            if start[start.len() - 1] >= start[0] + period || start.len() as i64 >= period {
                return Err(Error::invalid(format!("{start:?} is not a lifted ring state of period {period}")));
            }
            Ok(())
        }
        CtmcModel::Ring { period } => {
            if start[0] < 0 || start[start.len() - 1] >= period {
                return Err(Error::invalid(format!("ring sites must lie in 0..{period}")));
            }
            Ok(())
        }
    }
}

/// Successor configurations of one state (one per mobile particle).
fn moves(model: CtmcModel, x: &[i64]) -> Vec<Vec<i64>> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    match model {
        CtmcModel::Line | CtmcModel::RingLifted { .. } => {
            for i in 0..n {
                let blocker = if i + 1 < n {
                    Some(x[i + 1])
                } else if let CtmcModel::RingLifted { period } = model {
                    Some(x[0] + period)
                } else {
                    None
                };
                if blocker != Some(x[i] + 1) {
                    let mut y = x.to_vec();
                    y[i] += 1;
                    out.push(y);
                }
            }
        }
        CtmcModel::Ring { period } => {
            for i in 0..n {
                let target = (x[i] + 1) % period;
                if !x.contains(&target) {
                    let mut y = x.to_vec();
                    y[i] = target;
                    y.sort_unstable();
                    out.push(y);
                }
            }
        }
    }
    out
}

impl CtmcOracle {
    /// Explore the states reachable from `start`, with each particle allowed
    /// at most `jump_cap` jumps (ignored for unlabelled ring configurations).
    pub fn build(model: CtmcModel, start: &[i64], jump_cap: u32) -> Result<Self> {
        validate(model, start)?;
        let truncated = !matches!(model, CtmcModel::Ring { .. });
        let mut states = vec![start.to_vec()];
        let mut index = HashMap::from([(start.to_vec(), 0usize)]);
        let mut edges: Vec<(usize, Option<usize>)> = Vec::new();
        let mut k = 0;
        while k < states.len() {
            let cur = states[k].clone();
            for next in moves(model, &cur) {
                let over = truncated && next.iter().zip(start).any(|(a, b)| a - b > jump_cap as i64);
                if over {
                    edges.push((k, None));
                    continue;
                }
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        states.push(next.clone());
                        index.insert(next, states.len() - 1);
                        if states.len() + 1 > CTMC_MAX_STATES {
                            return Err(Error::StateSpaceTooLarge { states: states.len(), limit: CTMC_MAX_STATES });
                        }
                        states.len() - 1
                    }
                };
                edges.push((k, Some(j)));
            }
            k += 1;
        }
        let overflow = edges.iter().any(|e| e.1.is_none()).then_some(states.len());
        let n = states.len() + usize::from(overflow.is_some());
        let mut generator = vec![0.0; n * n];
        for (from, to) in edges {
            let to = to.or(overflow).expect("overflow state exists");
            generator[from * n + to] += 1.0;
            generator[from * n + from] -= 1.0;
        }
        Ok(Self { model, start: start.to_vec(), states, overflow, generator, index })
    }

    /// Dimension of the generator, including the overflow state.
    pub fn dim(&self) -> usize {
        self.states.len() + usize::from(self.overflow.is_some())
    }

    pub fn generator(&self) -> &[f64] {
        &self.generator
    }

    pub fn index_of(&self, state: &[i64]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Full transition matrix `exp(t Q)`, row-major.
    pub fn transition_matrix(&self, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
        }
        let n = self.dim();
        let a: Vec<f64> = self.generator.iter().map(|q| q * t).collect();
        Ok(expm(&a, n))
    }

    /// Law at time `t` of the chain started from `start`.
    pub fn distribution(&self, t: f64) -> Result<CtmcDistribution> {
        let p = self.transition_matrix(t)?;
        let n = self.dim();
        let row = &p[..n];
        Ok(CtmcDistribution {
            states: self.states.clone(),
            probabilities: row[..self.states.len()].to_vec(),
            overflow: self.overflow.map_or(0.0, |k| row[k]),
        })
    }
}

/// Transient law of the TASEP started from `start` at time `t`.
pub fn ctmc_oracle(model: CtmcModel, start: &[i64], t: f64, jump_cap: u32) -> Result<CtmcDistribution> {
    CtmcOracle::build(model, start, jump_cap)?.distribution(t)
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let (row_c, row_b) = (&mut c[i * n..(i + 1) * n], &b[k * n..(k + 1) * n]);
            for (cj, bj) in row_c.iter_mut().zip(row_b) {
                *cj += aik * bj;
            }
        }
    }
    c
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &[f64], n: usize) -> Vec<f64> {
    let norm = (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 0.5f64.powi(squarings as i32);
    let b: Vec<f64> = a.iter().map(|v| v * scale).collect();
    let mut result = vec![0.0; n * n];
    let mut term = vec![0.0; n * n];
    for i in 0..n {
        result[i * n + i] = 1.0;
        term[i * n + i] = 1.0;
    }
    for k in 1..60 {
        term = matmul(&term, &b, n);
        let inv = 1.0 / k as f64;
        term.iter_mut().for_each(|v| *v *= inv);
        let mut size = 0.0f64;
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
            size = size.max(t.abs());
        }
        if size < EXPM_TAYLOR_TOL {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, n);
    }
    result
}
