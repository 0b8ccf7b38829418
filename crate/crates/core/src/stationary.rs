use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::numlin::{solve_linear, DenseMatrix};
use crate::structure::ClassStructure;

/// Largest `‖πᵀP − πᵀ‖∞` accepted for a caller-supplied π.
pub const INPUT_STATIONARY_TOL: f64 = 1e-8;
/// Largest residual tolerated on distributions computed here.
pub const OUTPUT_STATIONARY_TOL: f64 = 1e-10;

/// One stationary distribution per recurrent class, each supported on its
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryBasis {
    pub per_class: Vec<(usize, Vec<f64>)>,
}

impl StationaryBasis {
    pub fn len(&self) -> usize {
        self.per_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_class.is_empty()
    }

    pub fn distributions(&self) -> impl Iterator<Item = &[f64]> {
        self.per_class.iter().map(|(_, pi)| pi.as_slice())
    }

    /// Equal-weight combination; strictly positive on every recurrent state.
    pub fn canonical(&self) -> Vec<f64> {
        let k = self.per_class.len();
        combine(self, &vec![1.0 / k as f64; k]).expect("equal weights are valid")
    }
}

pub fn stationary_basis(chain: &TransitionMatrix, structure: &ClassStructure) -> Result<StationaryBasis> {
    let n = chain.n();
    let p = chain.p();
    let mut per_class = Vec::new();
    for c in structure.recurrent_classes() {
        let states = &structure.classes()[c];
        let m = states.len();
        // (P_cᵀ − I) π = 0 with the last equation replaced by Σπ = 1
        let mut a = DenseMatrix::from_fn(m, m, |i, j| {
            p[(states[j], states[i])] - if i == j { 1.0 } else { 0.0 }
        });
        a.row_mut(m - 1).iter_mut().for_each(|v| *v = 1.0);
        let mut b = vec![0.0; m];
        b[m - 1] = 1.0;
        let local = solve_linear(&a, &b).map_err(|_| Error::SingularSystem { class: c })?;

        let mut pi = vec![0.0; n];
        for (&s, &v) in states.iter().zip(&local) {
            pi[s] = v.max(0.0);
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= total);
        if stationary_residual(chain, &pi)? > OUTPUT_STATIONARY_TOL {
            return Err(Error::SingularSystem { class: c });
        }
        per_class.push((c, pi));
    }
    Ok(StationaryBasis { per_class })
}

/// `Σ α_k π_k` for non-negative weights summing to one.
pub fn combine(basis: &StationaryBasis, alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.len() != basis.len() {
        return Err(Error::BadWeights(format!(
            "expected {} weights, got {}",
            basis.len(),
            alphas.len()
        )));
    }
    if alphas.iter().any(|&a| !(a >= 0.0)) {
        return Err(Error::BadWeights("weights must be non-negative".into()));
    }
    let sum: f64 = alphas.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::BadWeights(format!("weights sum to {sum}")));
    }
    let n = basis.per_class.first().map_or(0, |(_, pi)| pi.len());
    let mut out = vec![0.0; n];
    for ((_, pi), &a) in basis.per_class.iter().zip(alphas) {
        for (o, v) in out.iter_mut().zip(pi) {
            *o += a * v;
        }
    }
    Ok(out)
}

/// `‖πᵀP − πᵀ‖∞`.
pub fn stationary_residual(chain: &TransitionMatrix, pi: &[f64]) -> Result<f64> {
    let moved = chain.p().vecmat(pi)?;
    Ok(moved.iter().zip(pi).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// The unique stationary distribution when the chain is ergodic; the
/// limit of every evolution in that case.
pub fn limiting_distribution(chain: &TransitionMatrix, structure: &ClassStructure) -> Result<Option<Vec<f64>>> {
    if !structure.flags.ergodic {
        return Ok(None);
    }
    Ok(Some(stationary_basis(chain, structure)?.canonical()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix {
    pub f: DenseMatrix,
    pub pi_used: Vec<f64>,
}

/// `F = Π·P` for a stationary `pi`.
pub fn flow_matrix(chain: &TransitionMatrix, pi: &[f64]) -> Result<FlowMatrix> {
    let residual = stationary_residual(chain, pi)?;
    if residual > INPUT_STATIONARY_TOL {
        return Err(Error::NotStationary { residual });
    }
    Ok(FlowMatrix {
        f: chain.p().scale_rows(pi),
        pi_used: pi.to_vec(),
    })
}
