use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::numlin::DenseMatrix;

pub const PAGERANK_TOL: f64 = 1e-12;
pub const PAGERANK_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SurferConfig {
    /// Damping factor: probability of following the chain rather than
    /// teleporting.
    pub alpha: f64,
    pub teleport: Vec<f64>,
}

impl SurferConfig {
    pub fn new(alpha: f64, teleport: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::BadAlpha(alpha));
        }
        let sum: f64 = teleport.iter().sum();
        if teleport.iter().any(|&v| !(v >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution("teleport must be a distribution".into()));
        }
        Ok(Self { alpha, teleport })
    }

    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        Self::new(alpha, vec![1.0 / n as f64; n])
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.teleport.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.teleport.len(),
            });
        }
        Ok(())
    }
}

/// `P' = αP + (1−α)·1·tᵀ`.
pub fn google_matrix(chain: &TransitionMatrix, config: &SurferConfig) -> Result<TransitionMatrix> {
    config.check(chain.n())?;
    if config.alpha == 1.0 {
        return Ok(chain.clone());
    }
    let (a, t) = (config.alpha, &config.teleport);
    let p = chain.p();
    let g = DenseMatrix::from_fn(chain.n(), chain.n(), |i, j| a * p[(i, j)] + (1.0 - a) * t[j]);
    chain.relabel_matrix(g)
}

/// Power iteration `μ ← αμP + (1−α)(Σμ)t` from the uniform distribution,
/// without forming `P'`.
pub fn pagerank(chain: &TransitionMatrix, config: &SurferConfig, tol: f64, max_iters: usize) -> Result<Vec<f64>> {
    config.check(chain.n())?;
    let n = chain.n();
    let (a, t) = (config.alpha, &config.teleport);
    let mut mu = vec![1.0 / n as f64; n];
    for _ in 0..max_iters {
        let moved = chain.p().vecmat(&mu)?;
        let mass: f64 = mu.iter().sum();
        let next: Vec<f64> = moved.iter().zip(t).map(|(m, ti)| a * m + (1.0 - a) * mass * ti).collect();
        let change: f64 = next.iter().zip(&mu).map(|(x, y)| (x - y).abs()).sum();
        mu = next;
        if change <= tol {
            let total: f64 = mu.iter().sum();
            mu.iter_mut().for_each(|v| *v /= total);
            return Ok(mu);
        }
    }
    Err(Error::NoConvergence { iterations: max_iters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::stationary_basis;
    use crate::structure::classify;

    fn surfing_chain() -> TransitionMatrix {
        TransitionMatrix::from_rows(&[
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.4, 0.0, 0.0, 0.0, 0.0, 0.6, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.8, 0.2, 0.0, 0.0],
            [0.6, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn damping_extremes() {
        let c = surfing_chain();
        let zero = google_matrix(&c, &SurferConfig::uniform(8, 0.0).unwrap()).unwrap();
        assert!(zero.p().as_slice().iter().all(|&v| (v - 0.125).abs() < 1e-15));
        let one = google_matrix(&c, &SurferConfig::uniform(8, 1.0).unwrap()).unwrap();
        assert_eq!(one.p(), c.p());
        assert!(matches!(SurferConfig::uniform(8, 1.5), Err(Error::BadAlpha(_))));
        let pr = pagerank(&c, &SurferConfig::uniform(8, 0.0).unwrap(), PAGERANK_TOL, 10).unwrap();
        assert!(pr.iter().all(|&v| (v - 0.125).abs() < 1e-15));
    }

    #[test]
    fn google_matrix_is_ergodic_and_pagerank_matches_solve() {
        let c = surfing_chain();
        let cfg = SurferConfig::uniform(8, 0.85).unwrap();
        let g = google_matrix(&c, &cfg).unwrap();
        assert!((g.p()[(0, 1)] - 0.86875).abs() < 1e-12);
        assert!((g.p()[(0, 0)] - 0.01875).abs() < 1e-12);
        let s = classify(&g);
        assert!(s.flags.ergodic);
        let direct = stationary_basis(&g, &s).unwrap().canonical();
        let pr = pagerank(&c, &cfg, PAGERANK_TOL, PAGERANK_MAX_ITERS).unwrap();
        assert!(pr.iter().zip(&direct).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn complete_graph_is_uniform() {
        let n = 5;
        let p = DenseMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 0.25 });
        let c = TransitionMatrix::from_matrix(p).unwrap();
        let pr = pagerank(&c, &SurferConfig::uniform(n, 0.6).unwrap(), PAGERANK_TOL, 1000).unwrap();
        assert!(pr.iter().all(|&v| (v - 0.2).abs() < 1e-12));
    }
}
