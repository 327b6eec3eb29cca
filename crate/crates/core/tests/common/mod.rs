#![allow(dead_code)]

use epistab::covid::CovidParams;
use epistab::Matrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.gen_range(lo..hi))
}

/// Weakly row-dominant with non-negative diagonal: `a_ii >= sum_{j != i} |a_ij|`.
pub fn random_dominant(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut a = random_matrix(rng, n, -1.0, 1.0);
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = off + rng.gen_range(0.0..1.0);
    }
    a
}

/// Largest distance after greedily pairing the closest remaining elements.
pub fn multiset_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pairs: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, x)| b.iter().enumerate().map(move |(j, y)| ((x - y).norm(), i, j)))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Random rates: `B` in [0.1, 2], `mu` in [0.005, 0.2], every other rate in [0, 1].
pub fn random_covid_params(rng: &mut ChaCha8Rng) -> CovidParams {
    let mut p = CovidParams::table(0.0);
    p.b = rng.gen_range(0.1..2.0);
    p.mu = rng.gen_range(0.005..0.2);
    for name in &epistab::covid::PARAM_NAMES[2..] {
        p = p.with(name, rng.gen_range(0.0..1.0)).unwrap();
    }
    p
}
