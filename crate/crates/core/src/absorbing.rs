use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::numlin::{solve_linear, DenseMatrix};
use crate::structure::ClassStructure;

/// `P` reordered to `[[Q, R], [0, I]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingDecomposition {
    /// Original indices in canonical order: transient states, then
    /// absorbing ones, each in their original order.
    pub permutation: Vec<usize>,
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

impl AbsorbingDecomposition {
    pub fn t(&self) -> usize {
        self.q.rows()
    }

    pub fn a(&self) -> usize {
        self.r.cols()
    }

    pub fn transient(&self) -> &[usize] {
        &self.permutation[..self.t()]
    }

    pub fn absorbing(&self) -> &[usize] {
        &self.permutation[self.t()..]
    }
}

pub fn canonical_form(chain: &TransitionMatrix, structure: &ClassStructure) -> Result<AbsorbingDecomposition> {
    if !structure.flags.absorbing {
        return Err(Error::NotAbsorbing);
    }
    let absorbing = &structure.flags.absorbing_states;
    let transient: Vec<usize> = (0..chain.n()).filter(|i| !absorbing.contains(i)).collect();
    let p = chain.p();
    let q = p.submatrix(&transient, &transient);
    let r = p.submatrix(&transient, absorbing);
    let mut permutation = transient;
    permutation.extend_from_slice(absorbing);
    Ok(AbsorbingDecomposition { permutation, q, r })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalMatrix {
    /// `N = (I − Q)⁻¹`; `N_ij` is the expected number of visits to
    /// transient state `j` from transient state `i`.
    pub n: DenseMatrix,
    /// `N·1`: expected steps before absorption.
    pub expected_steps: Vec<f64>,
}

pub fn fundamental_matrix(decomp: &AbsorbingDecomposition) -> Result<FundamentalMatrix> {
    let t = decomp.t();
    let i_minus_q = DenseMatrix::identity(t).sub(&decomp.q)?;
    let mut n = DenseMatrix::zeros(t, t);
    let mut e = vec![0.0; t];
    for j in 0..t {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = solve_linear(&i_minus_q, &e).map_err(|_| Error::SingularSystem { class: j })?;
        n.set_column(j, &col);
    }
    let expected_steps = n.row_sums();
    Ok(FundamentalMatrix { n, expected_steps })
}

/// `Σ_{k=0}^{terms−1} Qᵏ`.
pub fn neumann_series(q: &DenseMatrix, terms: usize) -> Result<DenseMatrix> {
    let t = q.rows();
    let mut sum = DenseMatrix::zeros(t, t);
    let mut power = DenseMatrix::identity(t);
    for _ in 0..terms {
        sum = sum.add(&power)?;
        power = power.matmul(q)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::classify;

    fn decompose(rows: &[&[f64]]) -> Result<AbsorbingDecomposition> {
        let c = TransitionMatrix::from_rows(rows).unwrap();
        canonical_form(&c, &classify(&c))
    }

    #[test]
    fn four_state_absorbing_chain() {
        let d = decompose(&[
            &[0.2, 0.4, 0.4, 0.0],
            &[0.3, 0.0, 0.5, 0.2],
            &[0.3, 0.5, 0.0, 0.2],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(d.q.to_rows(), vec![vec![0.2, 0.4, 0.4], vec![0.3, 0.0, 0.5], vec![0.3, 0.5, 0.0]]);
        assert_eq!(d.r.column(0), vec![0.0, 0.2, 0.2]);
        let f = fundamental_matrix(&d).unwrap();
        let id = f.n.matmul(&DenseMatrix::identity(3).sub(&d.q).unwrap()).unwrap();
        assert!(id.max_abs_diff(&DenseMatrix::identity(3)) < 1e-10);
        let series = neumann_series(&d.q, 10_000).unwrap();
        assert!(f.n.max_abs_diff(&series) < 1e-8);
        for i in 0..3 {
            assert!(f.n[(i, i)] >= 1.0);
        }
    }

    #[test]
    fn small_cases() {
        let d = decompose(&[&[0.5, 0.5], &[0.0, 1.0]]).unwrap();
        assert_eq!((d.q[(0, 0)], d.r[(0, 0)]), (0.5, 0.5));
        let f = fundamental_matrix(&d).unwrap();
        assert!((f.n[(0, 0)] - 2.0).abs() < 1e-14);
        assert!((f.expected_steps[0] - 2.0).abs() < 1e-14);

        let id = decompose(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert_eq!((id.t(), id.a()), (0, 3));

        let immediate = decompose(&[&[0.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(fundamental_matrix(&immediate).unwrap().n, DenseMatrix::identity(1));

        assert!(matches!(decompose(&[&[0.0, 1.0], &[1.0, 0.0]]), Err(Error::NotAbsorbing)));
    }
}
