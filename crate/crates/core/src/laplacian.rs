use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::numlin::{sym_eigen, DenseMatrix};
use crate::stationary::StationaryBasis;
use crate::structure::ClassStructure;

/// Relative agreement demanded of the two quadratic-form evaluations.
pub const QUADRATIC_FORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianVariant {
    Normalized,
    Unnormalized,
    Directed,
}

/// A symmetric Laplacian together with the symmetric weights and degrees
/// it was built from. For the directed variant the weights are
/// `(ΠP + PᵀΠ)/2` and the degrees are π.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub variant: LaplacianVariant,
    pub m: DenseMatrix,
    pub weights: DenseMatrix,
    pub degrees: Vec<f64>,
    pub pi_used: Option<Vec<f64>>,
}

pub fn build_laplacian(g: &WeightedDigraph, variant: LaplacianVariant) -> Result<LaplacianMatrix> {
    if !g.is_undirected() {
        return Err(Error::NotUndirected);
    }
    let w = g.w().add(&g.w().transpose())?.scale(0.5);
    let d = w.row_sums();
    let n = g.n();
    let m = match variant {
        LaplacianVariant::Unnormalized => DenseMatrix::from_diagonal(&d).sub(&w)?,
        LaplacianVariant::Normalized => normalized(&w, &d)?,
        LaplacianVariant::Directed => {
            return Err(Error::InvalidArgument(
                "the directed Laplacian is built from a chain".into(),
            ))
        }
    };
    debug_assert_eq!(m.rows(), n);
    Ok(LaplacianMatrix {
        variant,
        m,
        weights: w,
        degrees: d,
        pi_used: None,
    })
}

/// `I − D^{−1/2} W D^{−1/2}`.
fn normalized(w: &DenseMatrix, d: &[f64]) -> Result<DenseMatrix> {
    if let Some(v) = d.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::ZeroDegree { vertex: v });
    }
    let s: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
    let n = d.len();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        (if i == j { 1.0 } else { 0.0 }) - s[i] * w[(i, j)] * s[j]
    }))
}

/// `I − (Π^{1/2}PΠ^{−1/2} + Π^{−1/2}PᵀΠ^{1/2})/2`.
pub fn directed_laplacian(
    chain: &TransitionMatrix,
    structure: &ClassStructure,
    basis: &StationaryBasis,
) -> Result<LaplacianMatrix> {
    let pi = if structure.flags.recurrent {
        basis.canonical()
    } else {
        let state = structure.transient_states()[0];
        return Err(Error::NotPositiveStationary { state });
    };
    if let Some(state) = pi.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NotPositiveStationary { state });
    }
    let flow = chain.p().scale_rows(&pi);
    let weights = flow.add(&flow.transpose())?.scale(0.5);
    let m = normalized(&weights, &pi)?;
    Ok(LaplacianMatrix {
        variant: LaplacianVariant::Directed,
        m,
        weights,
        degrees: pi.clone(),
        pi_used: Some(pi),
    })
}

/// `xᵀℒx`, evaluated as a matrix product and as an edge sum.
pub fn quadratic_form(lap: &LaplacianMatrix, x: &[f64]) -> Result<f64> {
    let n = lap.m.rows();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let mx = lap.m.matvec(x)?;
    let matrix: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();

    let scaled: Vec<f64> = match lap.variant {
        LaplacianVariant::Unnormalized => x.to_vec(),
        _ => x.iter().zip(&lap.degrees).map(|(v, d)| v / d.sqrt()).collect(),
    };
    let mut edge = 0.0;
    for i in 0..n {
        for j in 0..n {
            let wij = lap.weights[(i, j)];
            if wij != 0.0 {
                let diff = scaled[i] - scaled[j];
                edge += wij * diff * diff;
            }
        }
    }
    edge *= 0.5;
    if (matrix - edge).abs() > QUADRATIC_FORM_TOL * matrix.abs().max(1.0) {
        return Err(Error::FormulaMismatch { matrix, edge_sum: edge });
    }
    Ok(matrix)
}

/// The `k` smoothest eigenpairs with their coordinate transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianSpectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// `N×k`, orthonormal columns `y_ω`.
    pub vectors: DenseMatrix,
    /// Columns `D^{1/2} y_ω`.
    pub left_transformed: DenseMatrix,
    /// Columns `D^{−1/2} y_ω`.
    pub right_transformed: DenseMatrix,
}

impl LaplacianSpectrum {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// `(1 − λ_ω, D^{1/2}y_ω, D^{−1/2}y_ω)`: an eigenvalue of the random
    /// walk with its left and right eigenvectors.
    pub fn walk_eigenpair(&self, w: usize) -> (f64, Vec<f64>, Vec<f64>) {
        (
            1.0 - self.values[w],
            self.left_transformed.column(w),
            self.right_transformed.column(w),
        )
    }
}

pub fn smooth_spectrum(lap: &LaplacianMatrix, k: usize) -> Result<LaplacianSpectrum> {
    let n = lap.m.rows();
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds N = {n}")));
    }
    let e = sym_eigen(&lap.m)?;
    let cols: Vec<usize> = (0..k).collect();
    let rows: Vec<usize> = (0..n).collect();
    let vectors = e.vectors.submatrix(&rows, &cols);
    let sq: Vec<f64> = lap.degrees.iter().map(|d| d.sqrt()).collect();
    let inv: Vec<f64> = sq.iter().map(|s| if *s > 0.0 { 1.0 / s } else { 0.0 }).collect();
    Ok(LaplacianSpectrum {
        values: e.values[..k].to_vec(),
        left_transformed: vectors.scale_rows(&sq),
        right_transformed: vectors.scale_rows(&inv),
        vectors,
    })
}

/// Coefficients `⟨y_ω, x⟩` in the full eigenbasis.
pub fn gft(spectrum: &LaplacianSpectrum, x: &[f64]) -> Result<Vec<f64>> {
    let n = spectrum.vectors.rows();
    if spectrum.k() < n {
        return Err(Error::IncompleteBasis { k: spectrum.k(), n });
    }
    spectrum.vectors.vecmat(x)
}

pub fn inverse_gft(spectrum: &LaplacianSpectrum, coefficients: &[f64]) -> Result<Vec<f64>> {
    spectrum.vectors.matvec(coefficients)
}
