use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::numlin::DenseMatrix;
use crate::stationary::StationaryBasis;
use crate::structure::{classify, ClassStructure, EDGE_TOL};

/// Detailed-balance tolerance on `|π_i P_ij − π_j P_ji|`.
pub const DETAILED_BALANCE_TOL: f64 = 1e-9;
/// Relative tolerance on forward versus reverse cycle products.
pub const CYCLE_PRODUCT_TOL: f64 = 1e-9;
/// Simple-cycle enumeration is refused above this many states.
pub const MAX_CYCLE_STATES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReversibilityMode {
    DetailedBalance,
    Kolmogorov,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `(i, j)` with `π_i P_ij ≠ π_j P_ji`, or with `P_ij > 0 = P_ji`.
    Pair(usize, usize),
    /// States `c₀ → c₁ → … → c₀` whose forward product exceeds the
    /// reverse one.
    Cycle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReversibilityReport {
    pub recurrent: bool,
    pub reversible: bool,
    pub semi_reversible: bool,
    pub db_residual: f64,
    pub witness: Option<Witness>,
}

fn require_recurrent(structure: &ClassStructure) -> Result<()> {
    if structure.flags.recurrent {
        Ok(())
    } else {
        Err(Error::NotRecurrent)
    }
}

/// `P_rev = Π⁻¹PᵀΠ` with π the equal-weight combination of the basis.
pub fn time_reverse(chain: &TransitionMatrix, structure: &ClassStructure, basis: &StationaryBasis) -> Result<TransitionMatrix> {
    require_recurrent(structure)?;
    reverse_with(chain, &basis.canonical())
}

/// Time reversal with respect to a caller-chosen strictly positive π.
pub fn reverse_with(chain: &TransitionMatrix, pi: &[f64]) -> Result<TransitionMatrix> {
    if let Some(i) = pi.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NotPositiveStationary { state: i });
    }
    let p = chain.p();
    let rev = DenseMatrix::from_fn(chain.n(), chain.n(), |i, j| pi[j] * p[(j, i)] / pi[i]);
    chain.relabel_matrix(rev)
}

/// max over pairs of `|π_i P_ij − π_j P_ji|` and the worst pair.
pub fn detailed_balance_residual(p: &DenseMatrix, pi: &[f64]) -> (f64, (usize, usize)) {
    let n = p.rows();
    let mut worst = (0.0, (0, 0));
    for i in 0..n {
        for j in i + 1..n {
            let d = (pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs();
            if d > worst.0 {
                let pair = if pi[i] * p[(i, j)] >= pi[j] * p[(j, i)] { (i, j) } else { (j, i) };
                worst = (d, pair);
            }
        }
    }
    worst
}

pub fn reversibility(
    chain: &TransitionMatrix,
    structure: &ClassStructure,
    basis: &StationaryBasis,
    mode: ReversibilityMode,
) -> Result<ReversibilityReport> {
    let pi = basis.canonical();
    let (db_residual, worst) = detailed_balance_residual(chain.p(), &pi);
    if structure.flags.recurrent {
        let (reversible, witness) = match mode {
            ReversibilityMode::DetailedBalance => {
                let ok = db_residual <= DETAILED_BALANCE_TOL;
                (ok, (!ok).then_some(Witness::Pair(worst.0, worst.1)))
            }
            ReversibilityMode::Kolmogorov => match kolmogorov_witness(chain.p())? {
                None => (true, None),
                Some(w) => (false, Some(w)),
            },
        };
        return Ok(ReversibilityReport {
            recurrent: true,
            reversible,
            semi_reversible: false,
            db_residual,
            witness,
        });
    }

    let core = chain.restrict(&structure.recurrent_states())?;
    let semi_reversible = match mode {
        ReversibilityMode::DetailedBalance => db_residual <= DETAILED_BALANCE_TOL,
        ReversibilityMode::Kolmogorov => kolmogorov_witness(core.p())?.is_none(),
    };
    Ok(ReversibilityReport {
        recurrent: false,
        reversible: false,
        semi_reversible,
        db_residual,
        witness: None,
    })
}

/// Convenience wrapper classifying the chain first.
pub fn is_reversible(chain: &TransitionMatrix) -> Result<bool> {
    let s = classify(chain);
    let b = crate::stationary::stationary_basis(chain, &s)?;
    Ok(reversibility(chain, &s, &b, ReversibilityMode::DetailedBalance)?.reversible)
}

/// First violation of Kolmogorov's criterion: an asymmetric zero pattern,
/// or a simple cycle of length ≥ 3 whose forward and reverse products
/// differ.
pub fn kolmogorov_witness(p: &DenseMatrix) -> Result<Option<Witness>> {
    let n = p.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && (p[(i, j)] > EDGE_TOL) != (p[(j, i)] > EDGE_TOL) {
                let pair = if p[(i, j)] > EDGE_TOL { (i, j) } else { (j, i) };
                return Ok(Some(Witness::Pair(pair.0, pair.1)));
            }
        }
    }
    if n > MAX_CYCLE_STATES {
        return Err(Error::TooManyStates {
            n,
            limit: MAX_CYCLE_STATES,
        });
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && p[(i, j)] > EDGE_TOL).collect())
        .collect();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        let found = search_cycles(p, &adj, start, &mut path, &mut on_path);
        path.pop();
        on_path[start] = false;
        if let Some(cycle) = found {
            return Ok(Some(Witness::Cycle(cycle)));
        }
    }
    Ok(None)
}

/// Depth-first search over simple cycles through `start` whose other
/// vertices all exceed `start`, so each cycle is rooted at its minimum.
fn search_cycles(
    p: &DenseMatrix,
    adj: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> Option<Vec<usize>> {
    let last = *path.last().expect("path holds start");
    for &next in &adj[last] {
        if next == start && path.len() >= 3 {
            if let Some(c) = check_cycle(p, path) {
                return Some(c);
            }
        } else if next > start && !on_path[next] {
            path.push(next);
            on_path[next] = true;
            let found = search_cycles(p, adj, start, path, on_path);
            path.pop();
            on_path[next] = false;
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

fn check_cycle(p: &DenseMatrix, cycle: &[usize]) -> Option<Vec<usize>> {
    let m = cycle.len();
    let mut forward = 1.0;
    let mut reverse = 1.0;
    for k in 0..m {
        let (a, b) = (cycle[k], cycle[(k + 1) % m]);
        forward *= p[(a, b)];
        reverse *= p[(b, a)];
    }
    if (forward - reverse).abs() <= CYCLE_PRODUCT_TOL * forward.max(reverse) {
        return None;
    }
    if forward > reverse {
        Some(cycle.to_vec())
    } else {
        let mut rev = vec![cycle[0]];
        rev.extend(cycle[1..].iter().rev());
        Some(rev)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReversibilizeMode {
    Additive,
    Multiplicative,
}

/// `(P + P_rev)/2` or `P·P_rev`.
pub fn reversibilize(
    chain: &TransitionMatrix,
    structure: &ClassStructure,
    basis: &StationaryBasis,
    mode: ReversibilizeMode,
) -> Result<TransitionMatrix> {
    let rev = time_reverse(chain, structure, basis)?;
    let m = match mode {
        ReversibilizeMode::Additive => chain.p().add(rev.p())?.scale(0.5),
        ReversibilizeMode::Multiplicative => chain.p().matmul(rev.p())?,
    };
    chain.relabel_matrix(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedKernel {
    pub k: DenseMatrix,
}

impl SymmetrizedKernel {
    pub fn asymmetry(&self) -> f64 {
        self.k.asymmetry()
    }
}

/// `K = Π^{1/2} P Π^{−1/2}`.
pub fn k_matrix(chain: &TransitionMatrix, structure: &ClassStructure, basis: &StationaryBasis) -> Result<SymmetrizedKernel> {
    require_recurrent(structure)?;
    let root: Vec<f64> = basis.canonical().iter().map(|v| v.sqrt()).collect();
    let p = chain.p();
    Ok(SymmetrizedKernel {
        k: DenseMatrix::from_fn(chain.n(), chain.n(), |i, j| root[i] * p[(i, j)] / root[j]),
    })
}

/// `⟨x, y⟩_Π = Σ π_i x_i y_i`.
pub fn pi_inner(x: &[f64], y: &[f64], pi: &[f64]) -> f64 {
    x.iter().zip(y).zip(pi).map(|((a, b), w)| a * b * w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::{flow_matrix, stationary_basis};

    fn setup(rows: &[&[f64]]) -> (TransitionMatrix, ClassStructure, StationaryBasis) {
        let c = TransitionMatrix::from_rows(rows).unwrap();
        let s = classify(&c);
        let b = stationary_basis(&c, &s).unwrap();
        (c, s, b)
    }

    const P2: [&[f64]; 4] = [
        &[0.0, 0.3, 0.3, 0.4],
        &[0.75, 0.0, 0.0, 0.25],
        &[0.5, 0.0, 0.0, 0.5],
        &[0.75, 0.125, 0.125, 0.0],
    ];

    #[test]
    fn three_cycle_reverses_to_transpose() {
        let (c, s, b) = setup(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let r = time_reverse(&c, &s, &b).unwrap();
        assert!(r.p().max_abs_diff(&c.p().transpose()) < 1e-15);
        let add = reversibilize(&c, &s, &b, ReversibilizeMode::Additive).unwrap();
        assert_eq!(add.p().to_rows(), vec![vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.5, 0.0]]);
        let mul = reversibilize(&c, &s, &b, ReversibilizeMode::Multiplicative).unwrap();
        assert!(mul.p().max_abs_diff(&DenseMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn non_reversible_chain_and_its_reversal() {
        let (c, s, b) = setup(&P2);
        let r = time_reverse(&c, &s, &b).unwrap();
        assert!(r.p().max_abs_diff(c.p()) > 1e-3);
        let pi = b.canonical();
        let moved = r.p().vecmat(&pi).unwrap();
        assert!(moved.iter().zip(&pi).all(|(a, b)| (a - b).abs() < 1e-12));

        let rep = reversibility(&c, &s, &b, ReversibilityMode::Kolmogorov).unwrap();
        assert!(!rep.reversible);
        assert_eq!(rep.witness, Some(Witness::Cycle(vec![0, 1, 3])));
        let k = k_matrix(&c, &s, &b).unwrap();
        assert!(k.asymmetry() > 1e-6);
        let f = flow_matrix(&c, &pi).unwrap();
        assert!((f.f[(0, 1)] - 0.122).abs() < 5e-4 && (f.f[(1, 0)] - 0.118).abs() < 5e-4);
    }

    #[test]
    fn semi_reversible_chain() {
        let (c, s, b) = setup(&[
            &[0.0, 0.75, 0.0, 0.25],
            &[0.25, 0.0, 0.0, 0.75],
            &[0.6, 0.0, 0.0, 0.4],
            &[0.1, 0.9, 0.0, 0.0],
        ]);
        for mode in [ReversibilityMode::DetailedBalance, ReversibilityMode::Kolmogorov] {
            let rep = reversibility(&c, &s, &b, mode).unwrap();
            assert!(!rep.recurrent && !rep.reversible && rep.semi_reversible);
            assert_eq!(rep.witness, None);
        }
        assert!(matches!(time_reverse(&c, &s, &b), Err(Error::NotRecurrent)));
    }

    #[test]
    fn swap_kernel() {
        let (c, s, b) = setup(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let k = k_matrix(&c, &s, &b).unwrap();
        assert!(k.k.max_abs_diff(c.p()) < 1e-15);
        assert_eq!(time_reverse(&c, &s, &b).unwrap().p(), c.p());
    }

    #[test]
    fn asymmetric_pattern_is_a_pair_witness() {
        let p = DenseMatrix::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(kolmogorov_witness(&p).unwrap(), Some(Witness::Pair(0, 1)));
    }
}
