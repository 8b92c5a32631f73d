//! Reference computations that share no code with the library.

#![allow(dead_code)]

use qlnet::{Edge, Matrix, NetworkGame};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sign = if theta < 0.0 { -1.0 } else { 1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Largest singular value from the eigenvalues of `MᵀM`.
pub fn dense_two_norm(m: &Matrix) -> f64 {
    let (r, c) = m.shape();
    let at = |i: usize, j: usize| m.as_slice()[i * c + j];
    let gram = (0..c)
        .map(|i| (0..c).map(|j| (0..r).map(|k| at(k, i) * at(k, j)).sum()).collect())
        .collect();
    jacobi_eigenvalues(gram).first().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Every pure profile of the game, in lexicographic order.
pub fn pure_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in counts {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Reward of action `i` for agent `k` at a pure profile, straight from the
/// edge matrices.
pub fn pure_reward(game: &NetworkGame, k: usize, i: usize, profile: &[usize]) -> f64 {
    let mut r = 0.0;
    for e in game.edges() {
        if e.k == k {
            r += e.a_kl.row(i)[profile[e.l]];
        } else if e.l == k {
            r += e.a_lk.row(i)[profile[e.k]];
        }
    }
    r
}

/// Influence bound by enumerating every pure profile and every single
/// neighbour deviation.
pub fn brute_force_influence(game: &NetworkGame, k: usize) -> f64 {
    let counts = game.action_counts();
    let neighbours: Vec<usize> = game
        .edges()
        .iter()
        .filter_map(|e| match (e.k == k, e.l == k) {
            (true, _) => Some(e.l),
            (_, true) => Some(e.k),
            _ => None,
        })
        .collect();
    let mut worst: f64 = 0.0;
    for p in pure_profiles(counts) {
        for &l in &neighbours {
            for b in 0..counts[l] {
                let mut q = p.clone();
                q[l] = b;
                for i in 0..counts[k] {
                    worst = worst.max((pure_reward(game, k, i, &p) - pure_reward(game, k, i, &q)).abs());
                }
            }
        }
    }
    worst
}

/// Solves `w e^w = z` on the principal branch by bisection.
pub fn bisect_lambert_w(z: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0, 1.0f64.max(z.ln_1p() + 1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn surprisal(x: &[f64]) -> f64 {
    let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max).ln();
    let neg_h: f64 = x.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum();
    top - neg_h
}

/// Grid search for the largest surprisal gap along `c e_0 + (1 − c) U`.
pub fn grid_gap_max(n: usize, step: f64) -> f64 {
    let u = 1.0 / n as f64;
    let steps = (1.0 / step).round() as usize;
    let mut x = vec![0.0; n];
    (0..steps)
        .map(|s| {
            let c = s as f64 * step;
            x.iter_mut().for_each(|v| *v = (1.0 - c) * u);
            x[0] += c;
            surprisal(&x)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random polymatrix game from a flat list of draws in `[0, 1)`.
pub fn game_from_draws(counts: &[usize], edges: &[(usize, usize)], draws: &[f64], scale: f64) -> NetworkGame {
    let mut it = draws.iter().cycle().map(|d| scale * (2.0 * d - 1.0));
    let edges = edges
        .iter()
        .map(|&(k, l)| {
            let (nk, nl) = (counts[k], counts[l]);
            let a = Matrix::new(nk, nl, it.by_ref().take(nk * nl).collect()).unwrap();
            let b = Matrix::new(nl, nk, it.by_ref().take(nk * nl).collect()).unwrap();
            Edge::new(k, l, a, b)
        })
        .collect();
    NetworkGame::new(counts.to_vec(), edges).unwrap()
}

/// Edges of a connected random graph on `n` nodes: a spanning path plus the
/// pairs picked by `mask`.
pub fn graph_edges(n: usize, mask: &[bool]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|l| (l - 1, l)).collect();
    let mut m = mask.iter().cycle();
    for k in 0..n {
        for l in k + 2..n {
            if *m.next().unwrap() {
                edges.push((k, l));
            }
        }
    }
    edges
}
