use crate::chain::{StateSpace, TransitionMatrix};
use crate::error::{Error, Result};
use crate::numlin::DenseMatrix;
use crate::reversal::DETAILED_BALANCE_TOL;
use crate::stationary::StationaryBasis;
use crate::structure::ClassStructure;

/// Relative tolerance for row ratios in [`same_rw_set`].
pub const SCALING_TOL: f64 = 1e-10;

/// Non-negative weight matrix; `w[(i, j)]` is the weight of `i → j`.
/// Self-loops count once in both degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    space: StateSpace,
    w: DenseMatrix,
}

impl WeightedDigraph {
    pub fn new(space: StateSpace, w: DenseMatrix) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::NotSquare {
                rows: w.rows(),
                cols: w.cols(),
            });
        }
        if w.rows() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: w.rows(),
            });
        }
        for i in 0..w.rows() {
            for j in 0..w.cols() {
                if w[(i, j)] < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: w[(i, j)],
                    });
                }
            }
        }
        Ok(Self { space, w })
    }

    /// Vertices labelled `v1…vN`.
    pub fn from_matrix(w: DenseMatrix) -> Result<Self> {
        Self::new(StateSpace::numbered("v", w.rows())?, w)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_matrix(DenseMatrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }

    pub fn w(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn labels(&self) -> &[String] {
        self.space.labels()
    }

    pub fn out_degrees(&self) -> Vec<f64> {
        self.w.row_sums()
    }

    pub fn in_degrees(&self) -> Vec<f64> {
        self.w.col_sums()
    }

    pub fn volume(&self) -> f64 {
        self.out_degrees().iter().sum()
    }

    pub fn is_undirected(&self) -> bool {
        self.w.asymmetry() <= 1e-12 * self.w.max_abs().max(1.0)
    }

    pub fn is_balanced(&self) -> bool {
        let (out, inn) = (self.out_degrees(), self.in_degrees());
        let scale = out.iter().fold(1.0f64, |m, v| m.max(*v));
        out.iter().zip(&inn).all(|(a, b)| (a - b).abs() <= 1e-10 * scale)
    }

    /// Number of weakly connected components.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in 0..n {
                if self.w[(i, j)] > 0.0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// `P = D⁻¹W`.
pub fn random_walk(g: &WeightedDigraph) -> Result<TransitionMatrix> {
    let d = g.out_degrees();
    if let Some(v) = d.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::ZeroOutDegree { vertex: v });
    }
    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
    TransitionMatrix::new(g.space.clone(), g.w.scale_rows(&inv))
}

/// Diagonal of a strictly positive scaling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveScaling {
    pub diag: Vec<f64>,
}

/// `A` with `W₁ = A·W₂`, when both graphs share a random walk.
pub fn same_rw_set(w1: &WeightedDigraph, w2: &WeightedDigraph) -> Option<PositiveScaling> {
    let n = w1.n();
    if w2.n() != n {
        return None;
    }
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let (r1, r2) = (w1.w.row(i), w2.w.row(i));
        if r1.iter().zip(r2).any(|(a, b)| (*a > 0.0) != (*b > 0.0)) {
            return None;
        }
        let ratio = match r1.iter().zip(r2).find(|(_, b)| **b > 0.0) {
            Some((a, b)) => a / b,
            None => 1.0,
        };
        let consistent = r1
            .iter()
            .zip(r2)
            .filter(|(_, b)| **b > 0.0)
            .all(|(a, b)| (a / b - ratio).abs() <= SCALING_TOL * ratio);
        if !consistent {
            return None;
        }
        diag.push(ratio);
    }
    Some(PositiveScaling { diag })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentativeKind {
    Balanced,
    Undirected,
}

/// The flow matrix `Π·P` as a member of the chain's random walk set.
/// The undirected representative is returned only for reversible chains,
/// with its weights symmetrised exactly.
pub fn rw_set_representative(
    chain: &TransitionMatrix,
    structure: &ClassStructure,
    basis: &StationaryBasis,
    kind: RepresentativeKind,
) -> Option<WeightedDigraph> {
    if !structure.flags.recurrent {
        return None;
    }
    let flow = chain.p().scale_rows(&basis.canonical());
    let w = match kind {
        RepresentativeKind::Balanced => flow,
        RepresentativeKind::Undirected => {
            if flow.asymmetry() > DETAILED_BALANCE_TOL {
                return None;
            }
            flow.add(&flow.transpose()).ok()?.scale(0.5)
        }
    };
    WeightedDigraph::new(chain.space().clone(), w).ok()
}
