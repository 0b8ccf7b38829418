use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{StateSpace, TransitionMatrix};
use crate::error::{Error, Result};
use crate::numlin::DenseMatrix;

/// Birth–death chain on a line of `n` states.
///
/// State `i` steps right with probability `r_i` and left with `1 − r_i`;
/// the end states keep the move that would leave the line as a self-loop.
/// Without perturbation `r_i = p_right`; otherwise `r_i = p_right + ξ_i`
/// with `ξ_i` uniform on `[−perturb, perturb]`, clamped to `[0, 1]`.
pub fn line_chain(n: usize, p_right: f64, perturb: f64, seed: u64) -> Result<TransitionMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument("a line chain needs at least 2 states".into()));
    }
    if !(0.0..=1.0).contains(&p_right) {
        return Err(Error::InvalidArgument(format!("p_right = {p_right} is not a probability")));
    }
    if !(perturb >= 0.0) {
        return Err(Error::InvalidArgument(format!("perturb = {perturb} must be non-negative")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let right: Vec<f64> = (0..n)
        .map(|_| {
            let xi = if perturb > 0.0 { rng.gen_range(-perturb..=perturb) } else { 0.0 };
            (p_right + xi).clamp(0.0, 1.0)
        })
        .collect();
    let mut p = DenseMatrix::zeros(n, n);
    for (i, &r) in right.iter().enumerate() {
        let l = 1.0 - r;
        if i == 0 {
            p[(0, 0)] += l;
        } else {
            p[(i, i - 1)] += l;
        }
        if i == n - 1 {
            p[(i, i)] += r;
        } else {
            p[(i, i + 1)] += r;
        }
    }
    TransitionMatrix::new(StateSpace::numbered("s", n)?, p)
}
