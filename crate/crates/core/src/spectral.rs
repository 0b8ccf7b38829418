use std::fmt;

use num_complex::Complex64;

use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::numlin::{self, solve_linear, ComplexEigenpairs, DenseMatrix, Entry};
use crate::stationary::stationary_basis;
use crate::structure::{classify, ClassStructure};

type C = Complex64;

/// Default half-width of the band around the unit circle and the real axis.
pub const TAXONOMY_EPS: f64 = 1e-8;
/// Computed eigenvalues this close to 1 are treated as λ = 1.
const UNIT_MATCH: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Sorted by descending modulus, then descending real part.
    pub pairs: ComplexEigenpairs,
    pub unit_multiplicity: usize,
    pub spectral_radius: f64,
}

impl SpectralDecomposition {
    pub fn values(&self) -> &[C] {
        &self.pairs.values
    }

    pub fn diagonalizable(&self) -> bool {
        self.pairs.diagonalizable
    }

    /// `Σᵢ lᵢ` for every left eigenvector.
    pub fn left_sums(&self) -> Vec<C> {
        (0..self.pairs.len()).map(|k| self.pairs.left(k).iter().sum()).collect()
    }
}

/// Eigendecomposition of `P`.
///
/// For λ = 1 the left vectors are the class stationary distributions and
/// the right vectors are the matching absorption probabilities, so an
/// irreducible chain gets `(π, 1)`. Recurrent chains with several classes
/// are decomposed class by class, which keeps every eigenvector supported
/// on a single class.
pub fn decompose(chain: &TransitionMatrix) -> Result<SpectralDecomposition> {
    let structure = classify(chain);
    decompose_with(chain, &structure)
}

pub fn decompose_with(chain: &TransitionMatrix, structure: &ClassStructure) -> Result<SpectralDecomposition> {
    let n = chain.n();
    let p = chain.p();
    let classes = structure.classes();

    let (mut entries, diagonalizable) = if structure.flags.recurrent && classes.len() > 1 {
        let mut all = Vec::with_capacity(n);
        let mut diag = true;
        for states in classes {
            let block = p.submatrix(states, states);
            let e = numlin::eigen(&block)?;
            diag &= e.diagonalizable;
            for mut entry in entries_of(&e) {
                entry.right = embed(&entry.right, states, n);
                entry.left = embed(&entry.left, states, n);
                all.push(entry);
            }
        }
        (all, diag)
    } else {
        let e = numlin::eigen(p)?;
        let diag = e.diagonalizable;
        (entries_of(&e), diag)
    };

    let unit_multiplicity = fix_unit_eigenvectors(chain, structure, &mut entries)?;
    let pairs = numlin::encode(p, entries, diagonalizable);
    let spectral_radius = pairs.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    debug_assert!(spectral_radius <= 1.0 + 1e-8);
    Ok(SpectralDecomposition {
        pairs,
        unit_multiplicity,
        spectral_radius,
    })
}

fn entries_of(e: &ComplexEigenpairs) -> Vec<Entry> {
    (0..e.len())
        .filter(|&k| !e.is_conjugate_slot(k))
        .map(|k| Entry {
            value: e.values[k],
            right: e.right(k),
            left: e.left(k),
        })
        .collect()
}

fn embed(v: &[C], states: &[usize], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n];
    for (&s, &x) in states.iter().zip(v) {
        out[s] = x;
    }
    out
}

/// Replaces the λ = 1 eigenvectors by `(π_k, h_k)` where `h_k(i)` is the
/// probability of ending in recurrent class `k` from state `i`.
fn fix_unit_eigenvectors(chain: &TransitionMatrix, structure: &ClassStructure, entries: &mut [Entry]) -> Result<usize> {
    let basis = stationary_basis(chain, structure)?;
    let mut unit: Vec<usize> = (0..entries.len())
        .filter(|&k| (entries[k].value - C::new(1.0, 0.0)).norm() < UNIT_MATCH)
        .collect();
    if unit.len() != basis.len() {
        return Ok(unit.len());
    }
    // class-by-class decompositions list the unit eigenvalues in class order
    unit.sort_by_key(|&k| {
        entries[k]
            .left
            .iter()
            .position(|v| v.norm() > 1e-9)
            .unwrap_or(usize::MAX)
    });
    let absorption = absorption_probabilities(chain, structure)?;
    for ((slot, (_, pi)), h) in unit.iter().zip(&basis.per_class).zip(absorption) {
        let e = &mut entries[*slot];
        e.value = C::new(1.0, 0.0);
        e.left = pi.iter().map(|&v| C::new(v, 0.0)).collect();
        e.right = h.into_iter().map(|v| C::new(v, 0.0)).collect();
    }
    Ok(unit.len())
}

/// One vector per recurrent class: entry `i` is the probability that a
/// chain started in `i` is eventually trapped in that class.
pub fn absorption_probabilities(chain: &TransitionMatrix, structure: &ClassStructure) -> Result<Vec<Vec<f64>>> {
    let n = chain.n();
    let p = chain.p();
    let transient = structure.transient_states();
    let mut out = Vec::new();
    for c in structure.recurrent_classes() {
        let mut h = vec![0.0; n];
        for &s in &structure.classes()[c] {
            h[s] = 1.0;
        }
        if !transient.is_empty() {
            let t = transient.len();
            let i_minus_q = DenseMatrix::from_fn(t, t, |a, b| {
                (if a == b { 1.0 } else { 0.0 }) - p[(transient[a], transient[b])]
            });
            let rhs: Vec<f64> = transient
                .iter()
                .map(|&i| structure.classes()[c].iter().map(|&j| p[(i, j)]).sum())
                .collect();
            let ht = solve_linear(&i_minus_q, &rhs)?;
            for (&i, v) in transient.iter().zip(ht) {
                h[i] = v;
            }
        }
        out.push(h);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaxonomyLabel {
    PersistentStructure,
    PersistentOscillation,
    PersistentCycle,
    TransientStructure,
    TransientOscillation,
    TransientCycle,
}

impl TaxonomyLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PersistentStructure => "persistent_structure",
            Self::PersistentOscillation => "persistent_oscillation",
            Self::PersistentCycle => "persistent_cycle",
            Self::TransientStructure => "transient_structure",
            Self::TransientOscillation => "transient_oscillation",
            Self::TransientCycle => "transient_cycle",
        }
    }

    pub fn is_persistent(self) -> bool {
        matches!(
            self,
            Self::PersistentStructure | Self::PersistentOscillation | Self::PersistentCycle
        )
    }
}

impl fmt::Display for TaxonomyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values within `eps` of a boundary land on the persistent side.
pub fn label_eigenvalue(lambda: C, eps: f64) -> TaxonomyLabel {
    use TaxonomyLabel::*;
    if (lambda - 1.0).norm() < eps {
        PersistentStructure
    } else if (lambda + 1.0).norm() < eps {
        PersistentOscillation
    } else if (lambda.norm() - 1.0).abs() < eps {
        if lambda.im.abs() < eps {
            if lambda.re > 0.0 {
                PersistentStructure
            } else {
                PersistentOscillation
            }
        } else {
            PersistentCycle
        }
    } else if lambda.im.abs() < eps {
        if lambda.re >= 0.0 {
            TransientStructure
        } else {
            TransientOscillation
        }
    } else {
        TransientCycle
    }
}

pub fn taxonomy(decomp: &SpectralDecomposition, eps: f64) -> Vec<TaxonomyLabel> {
    decomp.values().iter().map(|&v| label_eigenvalue(v, eps)).collect()
}

#[derive(Debug, Clone)]
pub struct EigenEvolution {
    /// `c_ω = μᵀ r_ω`.
    pub coordinates: Vec<C>,
    pub evolved: Vec<f64>,
    pub persistent_part: Vec<f64>,
    pub transient_part: Vec<f64>,
}

/// `μᵀPᵏ = Σ_ω c_ω λ_ωᵏ l_ωᵀ`, split by whether `|λ_ω|` is within
/// `TAXONOMY_EPS` of one.
pub fn spectral_evolve(decomp: &SpectralDecomposition, mu: &[f64], k: u32) -> Result<EigenEvolution> {
    if !decomp.diagonalizable() {
        return Err(Error::NotDiagonalizable);
    }
    let pairs = &decomp.pairs;
    let n = pairs.right_vectors.rows();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: mu.len(),
        });
    }
    let mut coordinates = Vec::with_capacity(n);
    let mut persistent = vec![0.0; n];
    let mut transient = vec![0.0; n];
    for w in 0..pairs.len() {
        let r = pairs.right(w);
        let c: C = r.iter().zip(mu).map(|(ri, &m)| ri * m).sum();
        coordinates.push(c);
        let lambda = pairs.values[w];
        let weight = c * lambda.powu(k);
        let target = if (lambda.norm() - 1.0).abs() < TAXONOMY_EPS {
            &mut persistent
        } else {
            &mut transient
        };
        for (t, l) in target.iter_mut().zip(pairs.left(w)) {
            *t += (weight * l).re;
        }
    }
    let evolved = persistent.iter().zip(&transient).map(|(a, b)| a + b).collect();
    Ok(EigenEvolution {
        coordinates,
        evolved,
        persistent_part: persistent,
        transient_part: transient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dec(rows: &[&[f64]]) -> SpectralDecomposition {
        decompose(&TransitionMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn swap_chain() {
        let d = dec(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!((d.values()[0] - 1.0).norm() < 1e-12);
        assert!((d.values()[1] + 1.0).norm() < 1e-12);
        let even = spectral_evolve(&d, &[1.0, 0.0], 4).unwrap().evolved;
        let odd = spectral_evolve(&d, &[1.0, 0.0], 5).unwrap().evolved;
        assert!((even[0] - 1.0).abs() < 1e-12 && even[1].abs() < 1e-12);
        assert!(odd[0].abs() < 1e-12 && (odd[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_cycle_roots_of_unity() {
        let d = dec(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        for k in 0..3 {
            let w = C::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(d.values().iter().any(|v| (v - w).norm() < 1e-10));
        }
    }

    #[test]
    fn two_swap_blocks_have_double_unit_eigenvalue() {
        let d = dec(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(d.unit_multiplicity, 2);
        assert!(d.diagonalizable());
        // class-localised
        let r0 = d.pairs.right(0);
        assert!(r0[2].norm() == 0.0 && r0[3].norm() == 0.0);
    }

    #[test]
    fn irreducible_unit_pair_is_pi_and_ones() {
        let d = dec(&[
            &[0.5, 0.1, 0.2, 0.2],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.5, 0.5],
            &[1.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(d.unit_multiplicity, 1);
        assert!(d.pairs.right(0).iter().all(|v| (v - 1.0).norm() < 1e-12));
        let s: C = d.pairs.left(0).iter().sum();
        assert!((s - 1.0).norm() < 1e-12);
        let mu = [0.1, 0.2, 0.3, 0.4];
        let e = spectral_evolve(&d, &mu, 256).unwrap();
        let pi: Vec<f64> = d.pairs.left(0).iter().map(|v| v.re).collect();
        for (a, b) in e.evolved.iter().zip(&pi) {
            assert!((a - b).abs() < 1e-8);
        }
        for (a, b) in e.persistent_part.iter().zip(&pi) {
            assert!((a - b).abs() < 1e-10);
        }
        for s in &d.left_sums()[1..] {
            assert!(s.norm() < 1e-8);
        }
    }

    #[test]
    fn labels() {
        use TaxonomyLabel::*;
        let eps = TAXONOMY_EPS;
        assert_eq!(label_eigenvalue(C::new(1.0, 0.0), eps), PersistentStructure);
        assert_eq!(label_eigenvalue(C::new(-1.0, 0.0), eps), PersistentOscillation);
        assert_eq!(label_eigenvalue(C::new(0.0, 1.0), eps), PersistentCycle);
        assert_eq!(label_eigenvalue(C::new(0.3, 0.0), eps), TransientStructure);
        assert_eq!(label_eigenvalue(C::new(0.0, 0.0), eps), TransientStructure);
        assert_eq!(label_eigenvalue(C::new(-0.3, 0.0), eps), TransientOscillation);
        assert_eq!(label_eigenvalue(C::from_polar(0.5, PI / 3.0), eps), TransientCycle);
        assert_eq!(label_eigenvalue(C::new(1.0 - 0.5 * eps, 0.0), eps), PersistentStructure);
    }

    #[test]
    fn defective_chain_refuses_spectral_evolution() {
        let d = dec(&[&[0.25, 0.625, 0.125], &[0.125, 0.25, 0.625], &[0.125, 0.125, 0.75]]);
        assert!(!d.diagonalizable());
        assert!(matches!(
            spectral_evolve(&d, &[1.0, 0.0, 0.0], 3),
            Err(Error::NotDiagonalizable)
        ));
    }
}
