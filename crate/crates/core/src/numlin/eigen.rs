use num_complex::Complex64;

use super::schur::block_pair;
use super::{DenseMatrix, SchurForm};
use crate::error::{Error, Result};

type C = Complex64;

/// Relative threshold for rank decisions on `a - λI`.
pub const RANK_TOL: f64 = 1e-8;
/// Relative distance under which computed eigenvalues are treated as one
/// repeated eigenvalue. Defective eigenvalues of index two split by about
/// `sqrt(eps)`, well inside this band.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Eigenvalues with right and left eigenvectors in real pair encoding.
///
/// A real eigenvalue owns one real column. A conjugate pair occupies two
/// adjacent slots, positive imaginary part first; its two columns hold the
/// real and imaginary parts of the vector belonging to the first slot, and
/// the second slot's vector is the conjugate.
#[derive(Debug, Clone)]
pub struct ComplexEigenpairs {
    pub values: Vec<C>,
    pub right_vectors: DenseMatrix,
    pub left_vectors: DenseMatrix,
    pub diagonalizable: bool,
    /// max over pairs of `‖a r - λ r‖ / ‖r‖`.
    pub residual: f64,
}

impl ComplexEigenpairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn right(&self, k: usize) -> Vec<C> {
        decode(&self.right_vectors, &self.values, k)
    }

    pub fn left(&self, k: usize) -> Vec<C> {
        decode(&self.left_vectors, &self.values, k)
    }

    /// True when slot `k` holds the second member of a conjugate pair.
    pub fn is_conjugate_slot(&self, k: usize) -> bool {
        self.values[k].im < 0.0
    }
}

fn decode(m: &DenseMatrix, values: &[C], k: usize) -> Vec<C> {
    let n = m.rows();
    let im = values[k].im;
    if im == 0.0 {
        (0..n).map(|i| C::new(m[(i, k)], 0.0)).collect()
    } else if im > 0.0 {
        (0..n).map(|i| C::new(m[(i, k)], m[(i, k + 1)])).collect()
    } else {
        (0..n).map(|i| C::new(m[(i, k - 1)], -m[(i, k)])).collect()
    }
}

/// One stored eigenpair before encoding: a real eigenvalue or the
/// positive-imaginary member of a conjugate pair.
#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub value: C,
    pub right: Vec<C>,
    pub left: Vec<C>,
}

/// Eigenvalues and eigenvectors of `a` from its real Schur form.
pub fn eigen_from_schur(a: &DenseMatrix, s: &SchurForm) -> Result<ComplexEigenpairs> {
    let n = a.rows();
    if s.t.rows() != n || s.q.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.t.rows(),
        });
    }
    let norm = a.frobenius_norm();
    let tnorm = s.t.frobenius_norm();
    let small = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE * 1e10);

    // every eigenvalue, with the representative index it belongs to
    let blocks = s.blocks();
    let mut reps: Vec<Entry> = Vec::new();
    let mut all: Vec<(C, usize)> = Vec::with_capacity(n);
    for &(start, size) in &blocks {
        let lambda = if size == 1 {
            C::new(s.t[(start, start)], 0.0)
        } else {
            let (re, im) = block_pair(&s.t, start);
            C::new(re, im.max(f64::EPSILON * tnorm))
        };
        let x = right_in_schur(&s.t, &blocks, start, size, lambda, small);
        let y = left_in_schur(&s.t, &blocks, start, size, lambda, small);
        let rep = reps.len();
        reps.push(Entry {
            value: lambda,
            right: rotate(&s.q, &x),
            left: rotate(&s.q, &y),
        });
        all.push((lambda, rep));
        if size == 2 {
            all.push((lambda.conj(), rep));
        }
    }

    let ctol = CLUSTER_TOL * norm.max(1.0);
    let rank_tol = RANK_TOL * norm;
    let clusters = cluster(&all.iter().map(|e| e.0).collect::<Vec<_>>(), ctol);

    let mut diagonalizable = true;
    let mut simple: Vec<Entry> = Vec::new();
    let mut grouped: Vec<Vec<Entry>> = Vec::new();
    let mut consumed = vec![false; reps.len()];
    for members in &clusters {
        if members.len() == 1 {
            continue;
        }
        let mean = members.iter().map(|&k| all[k].0).sum::<C>() / members.len() as f64;
        if mean.im < -ctol {
            // handled through the conjugate cluster
            for &k in members {
                consumed[all[k].1] = true;
            }
            continue;
        }
        let mu = if mean.im.abs() <= ctol { C::new(mean.re, 0.0) } else { mean };
        let shifted = shifted_matrix(a, mu, false);
        let right_basis = null_space(shifted, rank_tol);
        let geometric = right_basis.len();
        if geometric == 0 {
            // members are numerically distinct after all
            continue;
        }
        if geometric < members.len() {
            diagonalizable = false;
            continue;
        }
        let left_basis = null_space(shifted_matrix(a, mu, true), rank_tol);
        if left_basis.len() != geometric {
            diagonalizable = false;
            continue;
        }
        for &k in members {
            consumed[all[k].1] = true;
        }
        let mut rights: Vec<Vec<C>> = right_basis;
        for r in rights.iter_mut() {
            normalize_right(r);
        }
        let lefts = biorthogonalize(&rights, &left_basis);
        let count = if mu.im == 0.0 {
            members.len()
        } else {
            members.len() / 2
        };
        grouped.push(
            rights
                .into_iter()
                .zip(lefts)
                .take(count)
                .map(|(right, left)| Entry {
                    value: mu,
                    right: if mu.im == 0.0 { real_part(&right) } else { right },
                    left: if mu.im == 0.0 { real_part(&left) } else { left },
                })
                .collect(),
        );
    }

    for (k, mut e) in reps.into_iter().enumerate() {
        if consumed[k] {
            continue;
        }
        normalize_right(&mut e.right);
        if diagonalizable {
            let d = dot(&e.left, &e.right);
            if d.norm() > 0.0 {
                e.left.iter_mut().for_each(|v| *v /= d);
            }
        } else {
            normalize_left(&mut e.left);
        }
        simple.push(e);
    }
    if !diagonalizable {
        // grouped entries keep their basis but lose the dual scaling
        for g in grouped.iter_mut() {
            for e in g.iter_mut() {
                normalize_left(&mut e.left);
            }
        }
    }

    let mut entries: Vec<Entry> = simple;
    entries.extend(grouped.into_iter().flatten());
    Ok(encode(a, entries, diagonalizable))
}

/// Sorts entries by persistence and writes the pair encoding.
pub(crate) fn encode(a: &DenseMatrix, mut entries: Vec<Entry>, diagonalizable: bool) -> ComplexEigenpairs {
    let n = a.rows();
    sort_entries(&mut entries);
    let mut values = Vec::with_capacity(n);
    let mut right_vectors = DenseMatrix::zeros(n, n);
    let mut left_vectors = DenseMatrix::zeros(n, n);
    let mut residual: f64 = 0.0;
    let mut col = 0;
    for e in &entries {
        residual = residual.max(pair_residual(a, e.value, &e.right));
        if e.value.im == 0.0 {
            values.push(C::new(e.value.re, 0.0));
            for i in 0..n {
                right_vectors[(i, col)] = e.right[i].re;
                left_vectors[(i, col)] = e.left[i].re;
            }
            col += 1;
        } else {
            values.push(e.value);
            values.push(e.value.conj());
            for i in 0..n {
                right_vectors[(i, col)] = e.right[i].re;
                right_vectors[(i, col + 1)] = e.right[i].im;
                left_vectors[(i, col)] = e.left[i].re;
                left_vectors[(i, col + 1)] = e.left[i].im;
            }
            col += 2;
        }
    }
    ComplexEigenpairs {
        values,
        right_vectors,
        left_vectors,
        diagonalizable,
        residual,
    }
}

/// Descending modulus, then descending real part. Keys are quantised so the
/// order is total even with rounding noise.
pub(crate) fn sort_entries(entries: &mut [Entry]) {
    let key = |z: C| -> (i64, i64) {
        (
            -(z.norm() * 1e9).round() as i64,
            -(z.re * 1e9).round() as i64,
        )
    };
    entries.sort_by_key(|e| key(e.value));
}

fn pair_residual(a: &DenseMatrix, lambda: C, r: &[C]) -> f64 {
    let n = a.rows();
    let rn = norm2(r);
    if rn == 0.0 {
        return f64::INFINITY;
    }
    let mut s = 0.0;
    for i in 0..n {
        let mut acc = C::new(0.0, 0.0);
        for j in 0..n {
            acc += r[j] * a[(i, j)];
        }
        acc -= lambda * r[i];
        s += acc.norm_sqr();
    }
    s.sqrt() / rn
}

fn rotate(q: &DenseMatrix, x: &[C]) -> Vec<C> {
    let n = q.rows();
    (0..n)
        .map(|i| (0..n).map(|j| x[j] * q[(i, j)]).sum())
        .collect()
}

pub(crate) fn dot(x: &[C], y: &[C]) -> C {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn real_part(x: &[C]) -> Vec<C> {
    x.iter().map(|v| C::new(v.re, 0.0)).collect()
}

/// Unit Euclidean norm, largest-magnitude entry real and positive.
pub(crate) fn normalize_right(x: &mut [C]) {
    let nrm = norm2(x);
    if nrm == 0.0 {
        return;
    }
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.norm() > x[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let phase = x[best] / x[best].norm();
    let scale = phase.conj() / nrm;
    x.iter_mut().for_each(|v| *v *= scale);
}

fn normalize_left(x: &mut [C]) {
    normalize_right(x);
}

/// Rescales `lefts` so that `leftᵢᵀ rightⱼ = δᵢⱼ` inside one eigenspace.
fn biorthogonalize(rights: &[Vec<C>], lefts: &[Vec<C>]) -> Vec<Vec<C>> {
    let m = rights.len();
    // M = Lᵀ R; want L' = L X with Xᵀ M = I
    let mt: Vec<Vec<C>> = (0..m)
        .map(|j| (0..m).map(|i| dot(&lefts[i], &rights[j])).collect())
        .collect();
    // solve Mᵀ X = I column by column: (Mᵀ)_{ji} = M_{ij} = mt[j][i]
    let x = complex_inverse(&mt);
    (0..m)
        .map(|j| {
            let n = lefts[0].len();
            (0..n)
                .map(|row| (0..m).map(|i| lefts[i][row] * x[i][j]).sum())
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse of a small complex matrix (partial pivoting).
fn complex_inverse(m: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut inv: Vec<Vec<C>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap_or(k);
        a.swap(k, p);
        inv.swap(k, p);
        let d = a[k][k];
        if d.norm() == 0.0 {
            continue;
        }
        for j in 0..n {
            a[k][j] /= d;
            inv[k][j] /= d;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k];
                for j in 0..n {
                    let akj = a[k][j];
                    let ikj = inv[k][j];
                    a[i][j] -= f * akj;
                    inv[i][j] -= f * ikj;
                }
            }
        }
    }
    inv
}

fn shifted_matrix(a: &DenseMatrix, mu: C, transpose: bool) -> Vec<Vec<C>> {
    let n = a.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = if transpose { a[(j, i)] } else { a[(i, j)] };
                    let v = C::new(v, 0.0);
                    if i == j {
                        v - mu
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

/// Number of pivots above `threshold` under complete pivoting.
pub fn numerical_rank(m: &DenseMatrix, threshold: f64) -> usize {
    let c: Vec<Vec<C>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| C::new(v, 0.0)).collect())
        .collect();
    let cols = m.cols();
    cols - null_space(c, threshold).len()
}

/// Basis of the numerical null space by complete-pivoting elimination;
/// pivots below `threshold` count as zero.
pub(crate) fn null_space(mut m: Vec<Vec<C>>, threshold: f64) -> Vec<Vec<C>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best = (k, k, -1.0);
        for i in k..rows {
            for j in k..cols {
                let v = m[i][j].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= threshold {
            break;
        }
        m.swap(k, best.0);
        if best.1 != k {
            for row in m.iter_mut() {
                row.swap(k, best.1);
            }
            col_perm.swap(k, best.1);
        }
        let d = m[k][k];
        for i in k + 1..rows {
            let f = m[i][k] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..cols {
                let mkj = m[k][j];
                m[i][j] -= f * mkj;
            }
        }
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in rank..cols {
        let mut x = vec![C::new(0.0, 0.0); cols];
        x[free] = C::new(1.0, 0.0);
        for i in (0..rank).rev() {
            let mut s = C::new(0.0, 0.0);
            for j in i + 1..cols {
                s += m[i][j] * x[j];
            }
            x[i] = -s / m[i][i];
        }
        let mut v = vec![C::new(0.0, 0.0); cols];
        for (pos, &orig) in col_perm.iter().enumerate() {
            v[orig] = x[pos];
        }
        basis.push(v);
    }
    orthonormalize(&mut basis);
    basis
}

/// Modified Gram-Schmidt with the Hermitian inner product.
fn orthonormalize(basis: &mut [Vec<C>]) {
    for k in 0..basis.len() {
        for j in 0..k {
            let (head, tail) = basis.split_at_mut(k);
            let proj: C = head[j].iter().zip(tail[0].iter()).map(|(u, v)| u.conj() * v).sum();
            for (v, u) in tail[0].iter_mut().zip(&head[j]) {
                *v -= proj * u;
            }
        }
        let nrm = norm2(&basis[k]);
        if nrm > 0.0 {
            basis[k].iter_mut().for_each(|v| *v /= nrm);
        }
    }
}

/// Union-find clustering of values closer than `tol`.
fn cluster(values: &[C], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}

/// Guarded solve of `(B - λI) x = rhs` for a 1×1 or 2×2 block `B`.
fn solve_block(b: &[[f64; 2]; 2], size: usize, lambda: C, rhs: [C; 2], small: f64) -> [C; 2] {
    let guard = |z: C| if z.norm() < small { C::new(small, 0.0) } else { z };
    if size == 1 {
        let d = guard(C::new(b[0][0], 0.0) - lambda);
        [rhs[0] / d, C::new(0.0, 0.0)]
    } else {
        let a11 = C::new(b[0][0], 0.0) - lambda;
        let a12 = C::new(b[0][1], 0.0);
        let a21 = C::new(b[1][0], 0.0);
        let a22 = C::new(b[1][1], 0.0) - lambda;
        let det = guard(a11 * a22 - a12 * a21);
        [
            (rhs[0] * a22 - a12 * rhs[1]) / det,
            (a11 * rhs[1] - a21 * rhs[0]) / det,
        ]
    }
}

fn block_of(t: &DenseMatrix, start: usize, size: usize, transpose: bool) -> [[f64; 2]; 2] {
    let mut b = [[0.0; 2]; 2];
    for i in 0..size {
        for j in 0..size {
            b[i][j] = if transpose {
                t[(start + j, start + i)]
            } else {
                t[(start + i, start + j)]
            };
        }
    }
    b
}

/// Null vector of a 2×2 block minus `λ`, or `[1]` for a 1×1 block.
fn block_null_vector(b: &[[f64; 2]; 2], size: usize, lambda: C) -> [C; 2] {
    if size == 1 {
        return [C::new(1.0, 0.0), C::new(0.0, 0.0)];
    }
    let u1 = [C::new(b[0][1], 0.0), lambda - b[0][0]];
    let u2 = [lambda - b[1][1], C::new(b[1][0], 0.0)];
    let n1 = u1[0].norm_sqr() + u1[1].norm_sqr();
    let n2 = u2[0].norm_sqr() + u2[1].norm_sqr();
    if n1 == 0.0 && n2 == 0.0 {
        [C::new(1.0, 0.0), C::new(0.0, 0.0)]
    } else if n1 >= n2 {
        u1
    } else {
        u2
    }
}

fn rescale_if_large(x: &mut [C]) {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if m > 1e100 {
        x.iter_mut().for_each(|v| *v /= m);
    }
}

/// Back substitution for `t x = λ x` on the quasi-triangular factor.
fn right_in_schur(t: &DenseMatrix, blocks: &[(usize, usize)], start: usize, size: usize, lambda: C, small: f64) -> Vec<C> {
    let n = t.rows();
    let mut x = vec![C::new(0.0, 0.0); n];
    let own = block_null_vector(&block_of(t, start, size, false), size, lambda);
    x[start..start + size].copy_from_slice(&own[..size]);
    let end = start + size;
    for &(bs, bsize) in blocks.iter().rev().filter(|b| b.0 < start) {
        let mut rhs = [C::new(0.0, 0.0); 2];
        for (r, slot) in rhs.iter_mut().enumerate().take(bsize) {
            let row = bs + r;
            let mut s = C::new(0.0, 0.0);
            for col in bs + bsize..end {
                s += x[col] * t[(row, col)];
            }
            *slot = -s;
        }
        let sol = solve_block(&block_of(t, bs, bsize, false), bsize, lambda, rhs, small);
        x[bs..bs + bsize].copy_from_slice(&sol[..bsize]);
        rescale_if_large(&mut x);
    }
    x
}

/// Forward substitution for `tᵀ y = λ y`.
fn left_in_schur(t: &DenseMatrix, blocks: &[(usize, usize)], start: usize, size: usize, lambda: C, small: f64) -> Vec<C> {
    let n = t.rows();
    let mut y = vec![C::new(0.0, 0.0); n];
    let own = block_null_vector(&block_of(t, start, size, true), size, lambda);
    y[start..start + size].copy_from_slice(&own[..size]);
    for &(bs, bsize) in blocks.iter().filter(|b| b.0 > start) {
        let mut rhs = [C::new(0.0, 0.0); 2];
        for (r, slot) in rhs.iter_mut().enumerate().take(bsize) {
            let row = bs + r;
            let mut s = C::new(0.0, 0.0);
            for col in start..bs {
                s += y[col] * t[(col, row)];
            }
            *slot = -s;
        }
        let sol = solve_block(&block_of(t, bs, bsize, true), bsize, lambda, rhs, small);
        y[bs..bs + bsize].copy_from_slice(&sol[..bsize]);
        rescale_if_large(&mut y);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::real_schur;

    fn eig(rows: &[&[f64]]) -> ComplexEigenpairs {
        let a = DenseMatrix::from_rows(rows).unwrap();
        let s = real_schur(&a, 30 * a.rows()).unwrap();
        eigen_from_schur(&a, &s).unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let e = eig(&[&[0.5, 0.0], &[0.0, 0.25]]);
        assert!(e.diagonalizable);
        assert!((e.values[0].re - 0.5).abs() < 1e-15);
        assert!((e.values[1].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn jordan_block_is_defective() {
        let e = eig(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(!e.diagonalizable);
    }

    #[test]
    fn identity_is_diagonalizable_with_full_basis() {
        let e = eig(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!(e.diagonalizable);
        for i in 0..3 {
            for j in 0..3 {
                let d = dot(&e.left(i), &e.right(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - C::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_pair_encoding() {
        let e = eig(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(e.values[0].im > 0.0 && e.values[1].im < 0.0);
        assert!(e.is_conjugate_slot(1));
        let r0 = e.right(0);
        let r1 = e.right(1);
        for (a, b) in r0.iter().zip(&r1) {
            assert_eq!(*a, b.conj());
        }
        assert!(e.residual < 1e-14);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(numerical_rank(&m, 1e-12), 1);
    }

    #[test]
    fn defective_and_diagonalizable_chains() {
        // characteristic polynomials checked symbolically
        let a = eig(&[
            &[0.0, 0.4, 0.6, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.8, 0.0, 0.2],
            &[0.25, 0.0, 0.0, 0.75, 0.0],
        ]);
        assert!(!a.diagonalizable);
        assert!(a.values.iter().any(|v| v.im.abs() > 0.1));
        let b = eig(&[&[0.1, 0.3, 0.6], &[0.7, 0.0, 0.3], &[0.5, 0.5, 0.0]]);
        assert!(b.diagonalizable);
        assert!(b.values.iter().any(|v| v.im.abs() > 0.1));
        let c = eig(&[&[0.25, 0.625, 0.125], &[0.125, 0.25, 0.625], &[0.125, 0.125, 0.75]]);
        assert!(!c.diagonalizable);
        assert!(c.values.iter().all(|v| v.im == 0.0));
        let d = eig(&[
            &[0.6, 0.0, 0.4, 0.0],
            &[0.25, 0.5, 0.0, 0.25],
            &[0.25, 0.0, 0.5, 0.25],
            &[0.0, 0.5, 0.0, 0.5],
        ]);
        assert!(d.diagonalizable);
        assert!(d.values.iter().all(|v| v.im == 0.0));
        assert!((d.values[0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_matrices_have_small_residual_and_dual_basis() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let a = DenseMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
            let s = real_schur(&a, 180).unwrap();
            let e = eigen_from_schur(&a, &s).unwrap();
            assert!(e.residual <= 1e-7 * a.frobenius_norm(), "{}", e.residual);
            assert_eq!(e.len(), 6);
            if e.diagonalizable {
                for i in 0..6 {
                    for j in 0..6 {
                        let d = dot(&e.left(i), &e.right(j));
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((d - C::new(want, 0.0)).norm() < 1e-6, "{i} {j} {d}");
                    }
                }
            }
            for w in e.values.windows(2) {
                assert!(w[0].norm() >= w[1].norm() - 1e-8);
            }
        }
    }

    #[test]
    fn repeated_eigenvalue_with_full_eigenspace() {
        // permutation-similar to diag(0.5, 0.5, 0.2)
        let e = eig(&[&[0.5, 0.0, 0.3], &[0.0, 0.5, 0.1], &[0.0, 0.0, 0.2]]);
        assert!(e.diagonalizable);
        assert_eq!(e.values[0], e.values[1]);
        for i in 0..3 {
            for j in 0..3 {
                let d = dot(&e.left(i), &e.right(j));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - C::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }
}
