use std::collections::HashSet;
use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numlin::DenseMatrix;

/// Row sums may deviate from 1 by this much before a chain is rejected.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `s1, s2, …, sN`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A validated row-stochastic matrix over a labelled state space.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    space: StateSpace,
    p: DenseMatrix,
}

/// Builds a chain from labels and rows with the default row-sum tolerance.
pub fn build_chain<R: AsRef<[f64]>>(labels: &[&str], rows: &[R]) -> Result<TransitionMatrix> {
    let space = StateSpace::new(labels.iter().map(|s| s.to_string()).collect())?;
    TransitionMatrix::new(space, DenseMatrix::from_rows(rows)?)
}

impl TransitionMatrix {
    pub fn new(space: StateSpace, p: DenseMatrix) -> Result<Self> {
        Self::with_tolerance(space, p, ROW_SUM_TOL)
    }

    /// Rows within `tol` of summing to one are renormalised; others are
    /// rejected.
    pub fn with_tolerance(space: StateSpace, mut p: DenseMatrix, tol: f64) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if p.rows() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: p.rows(),
            });
        }
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                if p[(i, j)] < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: p[(i, j)],
                    });
                }
            }
            let sum: f64 = p.row(i).iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::RowSumViolation { row: i, sum });
            }
            if sum != 1.0 {
                p.row_mut(i).iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(Self { space, p })
    }

    /// Chain with labels `s1…sN`.
    pub fn from_matrix(p: DenseMatrix) -> Result<Self> {
        let space = StateSpace::numbered("s", p.rows())?;
        Self::new(space, p)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_matrix(DenseMatrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn p(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn labels(&self) -> &[String] {
        self.space.labels()
    }

    /// Same labels, different matrix.
    pub fn relabel_matrix(&self, p: DenseMatrix) -> Result<Self> {
        Self::new(self.space.clone(), p)
    }

    /// Principal sub-chain on `states`; the rows must already be closed
    /// under the restriction.
    pub fn restrict(&self, states: &[usize]) -> Result<Self> {
        let labels = states.iter().map(|&i| self.labels()[i].clone()).collect();
        Self::new(StateSpace::new(labels)?, self.p.submatrix(states, states))
    }

    /// `μ(t+k)ᵀ = μ(t)ᵀ Pᵏ`, one vector-matrix product per step.
    pub fn evolve(&self, mu: &Distribution, k: usize) -> Result<Distribution> {
        self.check_len(mu.len())?;
        let mut v = mu.0.clone();
        for _ in 0..k {
            v = self.p.vecmat(&v)?;
        }
        Ok(Distribution(v))
    }

    /// `Pᵏ x`: entry `i` is the expected value of `x` after `k` steps from
    /// state `i`.
    pub fn conditional_expectation(&self, x: &[f64], k: usize) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let mut v = x.to_vec();
        for _ in 0..k {
            v = self.p.matvec(&v)?;
        }
        Ok(v)
    }

    /// One trajectory of `length` states beginning at `start`.
    pub fn sample(&self, start: usize, length: usize, seed: u64) -> Result<Trajectory> {
        self.check_state(start)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut states = Vec::with_capacity(length);
        if length > 0 {
            states.push(start);
        }
        let mut cur = start;
        for _ in 1..length {
            cur = self.step(cur, &mut rng);
            states.push(cur);
        }
        Ok(Trajectory { seed, states })
    }

    /// `freq[t][j]`: fraction of `n_trajectories` runs in state `j` at time
    /// `t`, for `t = 0..=horizon`. Run `m` uses seed `seed + m`.
    pub fn occupancy(
        &self,
        start: usize,
        horizon: usize,
        n_trajectories: usize,
        seed: u64,
    ) -> Result<DenseMatrix> {
        self.check_state(start)?;
        if n_trajectories == 0 {
            return Err(Error::InvalidArgument("n_trajectories must be at least 1".into()));
        }
        let n = self.n();
        let mut counts = vec![vec![0usize; n]; horizon + 1];
        for m in 0..n_trajectories {
            let traj = self.sample(start, horizon + 1, seed.wrapping_add(m as u64))?;
            for (t, &s) in traj.states.iter().enumerate() {
                counts[t][s] += 1;
            }
        }
        let total = n_trajectories as f64;
        Ok(DenseMatrix::from_fn(horizon + 1, n, |t, j| counts[t][j] as f64 / total))
    }

    fn step(&self, from: usize, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.gen();
        let row = self.p.row(from);
        let mut acc = 0.0;
        let mut last_positive = from;
        for (j, &pij) in row.iter().enumerate() {
            if pij <= 0.0 {
                continue;
            }
            acc += pij;
            last_positive = j;
            if u < acc {
                return j;
            }
        }
        last_positive
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: len,
            });
        }
        Ok(())
    }

    fn check_state(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::StateOutOfRange { index: i, n: self.n() });
        }
        Ok(())
    }
}

/// Probability row vector over the states.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Entries down to `-1e-12` are clamped to zero; the sum must be 1
    /// within `1e-9`.
    pub fn new(mut mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        for (i, v) in mu.iter_mut().enumerate() {
            if !v.is_finite() || *v < -1e-12 {
                return Err(Error::InvalidDistribution(format!("entry {i} is {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self(mu))
    }

    pub fn point(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::StateOutOfRange { index: i, n });
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Ok(Self(v))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyStateSpace);
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Distribution {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub seed: u64,
    pub states: Vec<usize>,
}
