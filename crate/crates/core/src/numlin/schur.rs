use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::{Error, Result};

const DEFLATION_TOL: f64 = 1e-12;

/// Real Schur form `a = q·t·qᵀ` with `t` quasi-upper-triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: DenseMatrix,
    pub t: DenseMatrix,
    /// Sizes of the diagonal blocks of `t`, top to bottom; each is 1 or 2.
    pub block_sizes: Vec<usize>,
}

impl SchurForm {
    /// `(start, size)` of every diagonal block.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.block_sizes
            .iter()
            .map(|&s| {
                let b = (start, s);
                start += s;
                b
            })
            .collect()
    }

    /// Eigenvalues in block order; a 2×2 block yields its pair with the
    /// positive imaginary part first.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.t.rows());
        for (s, size) in self.blocks() {
            if size == 1 {
                out.push(Complex64::new(self.t[(s, s)], 0.0));
            } else {
                let (re, im) = block_pair(&self.t, s);
                out.push(Complex64::new(re, im));
                out.push(Complex64::new(re, -im));
            }
        }
        out
    }

    /// `‖q·t·qᵀ - a‖_F`.
    pub fn reconstruction_error(&self, a: &DenseMatrix) -> f64 {
        let qt = self.q.matmul(&self.t).expect("square");
        let back = qt.matmul(&self.q.transpose()).expect("square");
        back.sub(a).expect("same shape").frobenius_norm()
    }
}

/// Real part and (positive) imaginary part of the complex pair of a
/// standardised 2×2 block starting at `s`.
pub(crate) fn block_pair(t: &DenseMatrix, s: usize) -> (f64, f64) {
    let (a, b, c, d) = (t[(s, s)], t[(s, s + 1)], t[(s + 1, s)], t[(s + 1, s + 1)]);
    let half = 0.5 * (a - d);
    let disc = half * half + b * c;
    (0.5 * (a + d), (-disc).max(0.0).sqrt())
}

/// Hessenberg reduction followed by Francis double-shift QR.
///
/// `max_iters` bounds the number of QR sweeps spent on any single
/// deflation; blocks are returned in the order they deflate.
pub fn real_schur(a: &DenseMatrix, max_iters: usize) -> Result<SchurForm> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let (mut t, mut q) = hessenberg(a);
    let norm = t.frobenius_norm();

    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let h = hi as usize;
        let mut l = h;
        while l > 0 {
            let mut s = t[(l - 1, l - 1)].abs() + t[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if t[(l, l - 1)].abs() < DEFLATION_TOL * s {
                t[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        if l == h {
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == h {
            hi -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iters {
            return Err(Error::NoConvergence { iterations: iter });
        }
        francis_step(&mut t, &mut q, l, h, iter);
    }

    // standardise 2×2 blocks: split those with real eigenvalues
    let mut block_sizes = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            if split_real_block(&mut t, &mut q, i) {
                block_sizes.push(1);
                block_sizes.push(1);
            } else {
                block_sizes.push(2);
            }
            i += 2;
        } else {
            block_sizes.push(1);
            i += 1;
        }
    }
    for j in 0..n {
        for i in j + 2..n {
            t[(i, j)] = 0.0;
        }
    }
    Ok(SchurForm { q, t, block_sizes })
}

fn hessenberg(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let Some((v, beta)) = householder(&x) else {
            continue;
        };
        // h <- P h, rows k+1..n
        for j in 0..n {
            let dot: f64 = (0..v.len()).map(|r| v[r] * h[(k + 1 + r, j)]).sum();
            let f = beta * dot;
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= f * v[r];
            }
        }
        // h <- h P, q <- q P, columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let dot: f64 = (0..v.len()).map(|r| m[(i, k + 1 + r)] * v[r]).sum();
                let f = beta * dot;
                for r in 0..v.len() {
                    m[(i, k + 1 + r)] -= f * v[r];
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Householder vector `v` and `beta = 2/vᵀv` with `(I - beta v vᵀ) x = ±‖x‖ e₁`.
fn householder(x: &[f64]) -> Option<(Vec<f64>, f64)> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let alpha = if x[0] >= 0.0 { -norm } else { norm };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vtv: f64 = v.iter().map(|e| e * e).sum();
    if vtv == 0.0 {
        return None;
    }
    Some((v, 2.0 / vtv))
}

fn apply_reflector(t: &mut DenseMatrix, q: &mut DenseMatrix, v: &[f64], beta: f64, k: usize, col_start: usize, row_end: usize) {
    let n = t.rows();
    let m = v.len();
    for j in col_start..n {
        let dot: f64 = (0..m).map(|r| v[r] * t[(k + r, j)]).sum();
        let f = beta * dot;
        for r in 0..m {
            t[(k + r, j)] -= f * v[r];
        }
    }
    for i in 0..=row_end {
        let dot: f64 = (0..m).map(|r| t[(i, k + r)] * v[r]).sum();
        let f = beta * dot;
        for r in 0..m {
            t[(i, k + r)] -= f * v[r];
        }
    }
    for i in 0..n {
        let dot: f64 = (0..m).map(|r| q[(i, k + r)] * v[r]).sum();
        let f = beta * dot;
        for r in 0..m {
            q[(i, k + r)] -= f * v[r];
        }
    }
}

fn francis_step(t: &mut DenseMatrix, q: &mut DenseMatrix, l: usize, h: usize, iter: usize) {
    let (trace, det) = if iter.is_multiple_of(10) {
        // exceptional shift to break cycling on unit-modulus spectra
        let w = t[(h, h - 1)].abs() + t[(h - 1, h - 2)].abs();
        let a = 0.75 * w + t[(h, h)];
        (2.0 * a, a * a + 0.4375 * w * w)
    } else {
        let (a, b, c, d) = (t[(h - 1, h - 1)], t[(h - 1, h)], t[(h, h - 1)], t[(h, h)]);
        (a + d, a * d - b * c)
    };

    let mut x = t[(l, l)] * t[(l, l)] + t[(l, l + 1)] * t[(l + 1, l)] - trace * t[(l, l)] + det;
    let mut y = t[(l + 1, l)] * (t[(l, l)] + t[(l + 1, l + 1)] - trace);
    let mut z = t[(l + 1, l)] * t[(l + 2, l + 1)];

    for k in l..=h - 2 {
        if let Some((v, beta)) = householder(&[x, y, z]) {
            let col_start = if k > l { k - 1 } else { l };
            let row_end = (k + 3).min(h);
            apply_reflector(t, q, &v, beta, k, col_start, row_end);
            if k > l {
                t[(k + 1, k - 1)] = 0.0;
                t[(k + 2, k - 1)] = 0.0;
            }
        }
        x = t[(k + 1, k)];
        y = t[(k + 2, k)];
        if k + 3 <= h {
            z = t[(k + 3, k)];
        }
    }
    if let Some((v, beta)) = householder(&[x, y]) {
        apply_reflector(t, q, &v, beta, h - 1, h - 2, h);
        t[(h, h - 2)] = 0.0;
    }
}

/// Rotates a 2×2 diagonal block with real eigenvalues into upper
/// triangular form. Returns false (and leaves `t` untouched) for a
/// complex-conjugate block.
fn split_real_block(t: &mut DenseMatrix, q: &mut DenseMatrix, p: usize) -> bool {
    let (a, b, c, d) = (t[(p, p)], t[(p, p + 1)], t[(p + 1, p)], t[(p + 1, p + 1)]);
    let half = 0.5 * (a - d);
    let disc = half * half + b * c;
    if disc < 0.0 {
        return false;
    }
    let root = disc.sqrt();
    let mean = 0.5 * (a + d);
    let lambda = if half >= 0.0 { mean + root } else { mean - root };
    let u1 = (b, lambda - a);
    let u2 = (lambda - d, c);
    let (vx, vy) = if u1.0.hypot(u1.1) >= u2.0.hypot(u2.1) { u1 } else { u2 };
    let r = vx.hypot(vy);
    if r == 0.0 {
        // already triangular up to a zero subdiagonal
        t[(p + 1, p)] = 0.0;
        return true;
    }
    let (cs, sn) = (vx / r, vy / r);
    let n = t.rows();
    // t <- Gᵀ t (rows p, p+1)
    for j in p..n {
        let x0 = t[(p, j)];
        let x1 = t[(p + 1, j)];
        t[(p, j)] = cs * x0 + sn * x1;
        t[(p + 1, j)] = -sn * x0 + cs * x1;
    }
    // t <- t G (rows 0..=p+1), q <- q G (all rows)
    for i in 0..p + 2 {
        let x0 = t[(i, p)];
        let x1 = t[(i, p + 1)];
        t[(i, p)] = cs * x0 + sn * x1;
        t[(i, p + 1)] = -sn * x0 + cs * x1;
    }
    for i in 0..n {
        let x0 = q[(i, p)];
        let x1 = q[(i, p + 1)];
        q[(i, p)] = cs * x0 + sn * x1;
        q[(i, p + 1)] = -sn * x0 + cs * x1;
    }
    t[(p + 1, p)] = 0.0;
    true
}
