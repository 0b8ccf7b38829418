#![allow(dead_code)]

use chains_core::graph::WeightedDigraph;
use chains_core::{DenseMatrix, TransitionMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn chain(rows: &[&[f64]]) -> TransitionMatrix {
    TransitionMatrix::from_rows(rows).expect("valid chain")
}

pub fn four_state() -> TransitionMatrix {
    chains_core::build_chain(
        &["S", "P", "F", "C"],
        &[
            [0.5, 0.1, 0.2, 0.2],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.5],
            [1.0, 0.0, 0.0, 0.0],
        ],
    )
    .expect("valid chain")
}

pub const P1: [&[f64]; 4] = [
    &[0.0, 0.3, 0.1, 0.6],
    &[0.75, 0.0, 0.0, 0.25],
    &[0.5, 0.0, 0.0, 0.5],
    &[0.75, 0.125, 0.125, 0.0],
];
pub const P2: [&[f64]; 4] = [
    &[0.0, 0.3, 0.3, 0.4],
    &[0.75, 0.0, 0.0, 0.25],
    &[0.5, 0.0, 0.0, 0.5],
    &[0.75, 0.125, 0.125, 0.0],
];
pub const P3: [&[f64]; 4] = [
    &[0.0, 0.75, 0.0, 0.25],
    &[0.25, 0.0, 0.0, 0.75],
    &[0.6, 0.0, 0.0, 0.4],
    &[0.1, 0.9, 0.0, 0.0],
];
pub const P4: [&[f64]; 4] = [
    &[0.0, 0.75, 0.0, 0.25],
    &[0.25, 0.0, 0.0, 0.75],
    &[0.6, 0.0, 0.0, 0.4],
    &[0.5, 0.5, 0.0, 0.0],
];

/// Directed `d`-cycle `i → i+1 mod d`.
pub fn cycle(d: usize) -> TransitionMatrix {
    TransitionMatrix::from_matrix(DenseMatrix::from_fn(d, d, |i, j| {
        if j == (i + 1) % d {
            1.0
        } else {
            0.0
        }
    }))
    .expect("valid chain")
}

fn normalize_rows(w: DenseMatrix) -> TransitionMatrix {
    let inv: Vec<f64> = w.row_sums().iter().map(|s| 1.0 / s).collect();
    TransitionMatrix::from_matrix(w.scale_rows(&inv)).expect("valid chain")
}

/// Irreducible weights: a random Hamiltonian cycle plus random extra edges.
fn irreducible_weights(n: usize, rng: &mut ChaCha8Rng, density: f64, symmetric: bool) -> DenseMatrix {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut w = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let (a, b) = (order[k], order[(k + 1) % n]);
        if n > 1 {
            w[(a, b)] = rng.gen_range(0.1..1.0);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                w[(i, j)] += rng.gen_range(0.05..1.0);
            }
        }
    }
    if n == 1 {
        w[(0, 0)] = 1.0;
    }
    if symmetric {
        w = w.add(&w.transpose()).expect("square");
    }
    w
}

/// Random walk on a connected bipartite graph: irreducible with period 2.
fn bipartite(n: usize, rng: &mut ChaCha8Rng) -> TransitionMatrix {
    let n = n.max(2);
    let split = rng.gen_range(1..n);
    let mut w = DenseMatrix::zeros(n, n);
    for i in 0..split {
        for j in split..n {
            if i == 0 || j == split || rng.gen_bool(0.5) {
                let x = rng.gen_range(0.1..1.0);
                if rng.gen_bool(0.5) {
                    w[(i, j)] = x;
                    w[(j, i)] = x;
                } else {
                    w[(i, j)] = x;
                    w[(j, i)] = rng.gen_range(0.1..1.0);
                }
            }
        }
    }
    normalize_rows(w)
}

/// Cyclic class structure `C₀ → C₁ → … → C_{d−1} → C₀`: period `d`.
fn cyclic_classes(n: usize, rng: &mut ChaCha8Rng) -> TransitionMatrix {
    let d = rng.gen_range(2..=n.clamp(2, 4));
    // a multiple of d, so that i → i+1 mod n is a Hamiltonian cycle through the classes
    let n = n.max(2) / d * d;
    let mut w = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if j % d == (i + 1) % d && (j == (i + 1) % n || rng.gen_bool(0.5)) {
                w[(i, j)] = rng.gen_range(0.1..1.0);
            }
        }
    }
    normalize_rows(w)
}

fn permute(p: &DenseMatrix, perm: &[usize]) -> DenseMatrix {
    // state perm[i] of the new chain is state i of the old one
    let n = p.rows();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(perm[i], perm[j])] = p[(i, j)];
        }
    }
    out
}

/// A seeded recurrent chain on at most `max_n` states, drawn from a mix of
/// reversible, non-reversible, periodic and reducible families.
pub fn random_recurrent(rng: &mut ChaCha8Rng, max_n: usize) -> TransitionMatrix {
    let n = rng.gen_range(2..=max_n);
    match rng.gen_range(0..6) {
        0 => normalize_rows(irreducible_weights(n, rng, 0.3, true)),
        1 => normalize_rows(irreducible_weights(n, rng, 0.5, false)),
        2 => normalize_rows(irreducible_weights(n, rng, 0.1, false)),
        3 => bipartite(n, rng),
        4 => cyclic_classes(n, rng),
        _ => {
            let n = n.max(3);
            let a = rng.gen_range(1..n);
            let blocks = [a, n - a];
            let mut p = DenseMatrix::zeros(n, n);
            let mut offset = 0;
            for &m in &blocks {
                let sym = rng.gen_bool(0.5);
                let block = normalize_rows(irreducible_weights(m, rng, 0.4, sym));
                for i in 0..m {
                    for j in 0..m {
                        p[(offset + i, offset + j)] = block.p()[(i, j)];
                    }
                }
                offset += m;
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            TransitionMatrix::from_matrix(permute(&p, &perm)).expect("valid chain")
        }
    }
}

/// Random undirected weighted graph on `n` vertices made of `components`
/// connected pieces, none of them isolated single vertices.
pub fn random_undirected(rng: &mut ChaCha8Rng, n: usize, components: usize) -> WeightedDigraph {
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(rng);
    let size = n / components;
    let mut w = DenseMatrix::zeros(n, n);
    for c in 0..components {
        let end = if c + 1 == components { n } else { (c + 1) * size };
        let part = &vertices[c * size..end];
        for k in 1..part.len() {
            // spanning tree, then extra edges
            let parent = part[rng.gen_range(0..k)];
            let x = rng.gen_range(0.1..2.0);
            w[(part[k], parent)] = x;
            w[(parent, part[k])] = x;
        }
        for &a in part {
            for &b in part {
                if a < b && rng.gen_bool(0.15) {
                    let x = rng.gen_range(0.1..2.0);
                    w[(a, b)] += x;
                    w[(b, a)] += x;
                }
            }
            if rng.gen_bool(0.05) {
                w[(a, a)] += rng.gen_range(0.1..1.0);
            }
        }
    }
    WeightedDigraph::from_matrix(w).expect("valid graph")
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// gcd of return times `k ≤ 2N²` to state `i`, from boolean matrix powers.
pub fn brute_force_period(p: &DenseMatrix, i: usize) -> u64 {
    let n = p.rows();
    let b: Vec<Vec<bool>> = (0..n).map(|r| (0..n).map(|c| p[(r, c)] > 1e-12).collect()).collect();
    let mut reach = b.clone();
    let mut g = 0u64;
    for k in 1..=(2 * n * n) as u64 {
        if reach[i][i] {
            g = gcd(g, k);
        }
        let mut next = vec![vec![false; n]; n];
        for r in 0..n {
            for m in 0..n {
                if reach[r][m] {
                    for c in 0..n {
                        if b[m][c] {
                            next[r][c] = true;
                        }
                    }
                }
            }
        }
        reach = next;
    }
    g
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
