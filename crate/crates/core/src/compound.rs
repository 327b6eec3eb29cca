//! Multiplicative and additive compound matrices.
//!
//! Rows and columns of a k-th compound are indexed by strictly increasing
//! k-tuples of `1..=n` in lexicographic order. Tuple values are 1-based;
//! ranks are 0-based positions in that order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{determinant, Matrix};

/// A strictly increasing tuple of 1-based indices together with its
/// lexicographic rank among all tuples of the same length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexTuple {
    pub indices: Vec<usize>,
    pub rank: usize,
}

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn check_order(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::Argument(format!(
            "compound order k = {} must satisfy 1 <= k <= n = {}",
            k, n
        )))
    } else {
        Ok(())
    }
}

/// All k-tuples of `1..=n` in lexicographic order.
pub fn lex_tuples(n: usize, k: usize) -> Result<Vec<IndexTuple>> {
    check_order(n, k)?;
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexTuple {
            indices: cur.clone(),
            rank: out.len(),
        });
        // advance the rightmost index that still has room
        let mut pos = k;
        while pos > 0 && cur[pos - 1] == n - k + pos {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        cur[pos - 1] += 1;
        for q in pos..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
    Ok(out)
}

/// Lexicographic rank of a strictly increasing 1-based tuple.
pub fn rank_of(indices: &[usize], n: usize) -> Result<usize> {
    let k = indices.len();
    check_order(n, k)?;
    let mut prev = 0;
    let mut rank = 0;
    for (pos, &v) in indices.iter().enumerate() {
        if v <= prev || v > n {
            return Err(Error::Argument(format!(
                "{:?} is not a strictly increasing tuple in 1..={}",
                indices, n
            )));
        }
        // tuples that agree up to pos and place a smaller value here
        for smaller in prev + 1..v {
            rank += binomial(n - smaller, k - pos - 1);
        }
        prev = v;
    }
    Ok(rank)
}

/// Inverse of [`rank_of`].
pub fn unrank(rank: usize, n: usize, k: usize) -> Result<IndexTuple> {
    check_order(n, k)?;
    if rank >= binomial(n, k) {
        return Err(Error::Argument(format!(
            "rank {} out of range for C({}, {})",
            rank, n, k
        )));
    }
    let mut rest = rank;
    let mut indices = Vec::with_capacity(k);
    let mut v = 0;
    for pos in 0..k {
        v += 1;
        loop {
            let block = binomial(n - v, k - pos - 1);
            if rest < block {
                break;
            }
            rest -= block;
            v += 1;
        }
        indices.push(v);
    }
    Ok(IndexTuple { indices, rank })
}

/// k-th multiplicative compound: entry `(rank(alpha), rank(beta))` is the
/// minor of `a` on rows `alpha` and columns `beta`.
pub fn mult_compound(a: &Matrix, k: usize) -> Result<Matrix> {
    let n = a.order()?;
    let tuples = zero_based(&lex_tuples(n, k)?);
    let m = tuples.len();
    let mut out = Matrix::zeros(m, m);
    for (r, rows) in tuples.iter().enumerate() {
        for (c, cols) in tuples.iter().enumerate() {
            out[(r, c)] = determinant(&a.submatrix(rows, cols))?;
        }
    }
    Ok(out)
}

fn zero_based(tuples: &[IndexTuple]) -> Vec<Vec<usize>> {
    tuples
        .iter()
        .map(|t| t.indices.iter().map(|i| i - 1).collect())
        .collect()
}

/// k-th additive compound.
///
/// Diagonal entries are `a[i1,i1] + ... + a[ik,ik]`. When the row tuple `i`
/// and column tuple `j` differ in exactly one index, with `i_s` the index of
/// `i` missing from `j` and `j_r` the index of `j` missing from `i`, the entry
/// is `(-1)^(r+s) a[i_s, j_r]` with `r`, `s` 1-based positions. All other
/// entries vanish.
pub fn add_compound(a: &Matrix, k: usize) -> Result<Matrix> {
    let n = a.order()?;
    let tuples = lex_tuples(n, k)?;
    let m = tuples.len();
    let mut out = Matrix::zeros(m, m);
    for ti in &tuples {
        let i = &ti.indices;
        for tj in &tuples {
            let j = &tj.indices;
            let value = if ti.rank == tj.rank {
                i.iter().fold(0.0, |acc, &p| acc + a[(p - 1, p - 1)])
            } else {
                match single_difference(i, j) {
                    Some((s, r)) => {
                        let v = a[(i[s] - 1, j[r] - 1)];
                        if (r + s) % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    }
                    None => 0.0,
                }
            };
            out[(ti.rank, tj.rank)] = value;
        }
    }
    Ok(out)
}

/// Positions `(s, r)` (0-based) of the single index of `i` absent from `j`
/// and of `j` absent from `i`, if the tuples differ in exactly one index.
fn single_difference(i: &[usize], j: &[usize]) -> Option<(usize, usize)> {
    let only_i: Vec<usize> = (0..i.len()).filter(|&p| !j.contains(&i[p])).collect();
    let only_j: Vec<usize> = (0..j.len()).filter(|&p| !i.contains(&j[p])).collect();
    if only_i.len() == 1 && only_j.len() == 1 {
        Some((only_i[0], only_j[0]))
    } else {
        None
    }
}

/// Second additive compound from hard-coded templates for n = 2..=5.
/// Agrees bit for bit with `add_compound(a, 2)`.
pub fn add_compound2_closed(a: &Matrix) -> Result<Matrix> {
    let n = a.order()?;
    let e = |i: usize, j: usize| a[(i - 1, j - 1)];
    let d = |i: usize, j: usize| e(i, i) + e(j, j);
    let rows: Vec<Vec<f64>> = match n {
        2 => vec![vec![d(1, 2)]],
        3 => vec![
            vec![d(1, 2), e(2, 3), -e(1, 3)],
            vec![e(3, 2), d(1, 3), e(1, 2)],
            vec![-e(3, 1), e(2, 1), d(2, 3)],
        ],
        4 => vec![
            vec![d(1, 2), e(2, 3), e(2, 4), -e(1, 3), -e(1, 4), 0.0],
            vec![e(3, 2), d(1, 3), e(3, 4), e(1, 2), 0.0, -e(1, 4)],
            vec![e(4, 2), e(4, 3), d(1, 4), 0.0, e(1, 2), e(1, 3)],
            vec![-e(3, 1), e(2, 1), 0.0, d(2, 3), e(3, 4), -e(2, 4)],
            vec![-e(4, 1), 0.0, e(2, 1), e(4, 3), d(2, 4), e(2, 3)],
            vec![0.0, -e(4, 1), e(3, 1), -e(4, 2), e(3, 2), d(3, 4)],
        ],
        5 => vec![
            vec![
                d(1, 2),
                e(2, 3),
                e(2, 4),
                e(2, 5),
                -e(1, 3),
                -e(1, 4),
                -e(1, 5),
                0.0,
                0.0,
                0.0,
            ],
            vec![
                e(3, 2),
                d(1, 3),
                e(3, 4),
                e(3, 5),
                e(1, 2),
                0.0,
                0.0,
                -e(1, 4),
                -e(1, 5),
                0.0,
            ],
            vec![
                e(4, 2),
                e(4, 3),
                d(1, 4),
                e(4, 5),
                0.0,
                e(1, 2),
                0.0,
                e(1, 3),
                0.0,
                -e(1, 5),
            ],
            vec![
                e(5, 2),
                e(5, 3),
                e(5, 4),
                d(1, 5),
                0.0,
                0.0,
                e(1, 2),
                0.0,
                e(1, 3),
                e(1, 4),
            ],
            vec![
                -e(3, 1),
                e(2, 1),
                0.0,
                0.0,
                d(2, 3),
                e(3, 4),
                e(3, 5),
                -e(2, 4),
                -e(2, 5),
                0.0,
            ],
            vec![
                -e(4, 1),
                0.0,
                e(2, 1),
                0.0,
                e(4, 3),
                d(2, 4),
                e(4, 5),
                e(2, 3),
                0.0,
                -e(2, 5),
            ],
            vec![
                -e(5, 1),
                0.0,
                0.0,
                e(2, 1),
                e(5, 3),
                e(5, 4),
                d(2, 5),
                0.0,
                e(2, 3),
                e(2, 4),
            ],
            vec![
                0.0,
                -e(4, 1),
                e(3, 1),
                0.0,
                -e(4, 2),
                e(3, 2),
                0.0,
                d(3, 4),
                e(4, 5),
                -e(3, 5),
            ],
            vec![
                0.0,
                -e(5, 1),
                0.0,
                e(3, 1),
                -e(5, 2),
                0.0,
                e(3, 2),
                e(5, 4),
                d(3, 5),
                e(3, 4),
            ],
            vec![
                0.0,
                0.0,
                -e(5, 1),
                e(4, 1),
                0.0,
                -e(5, 2),
                e(4, 2),
                -e(5, 3),
                e(4, 3),
                d(4, 5),
            ],
        ],
        _ => {
            return Err(Error::Argument(format!(
                "no closed-form second additive compound for n = {}",
                n
            )));
        }
    };
    Matrix::from_rows(&rows)
}
