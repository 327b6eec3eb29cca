//! Dense real matrices and the small set of kernels the stability tests need:
//! pivoted determinants and inverses, eigenvalues by Hessenberg reduction and
//! Francis double-shift QR, cyclic Jacobi for symmetric spectra, and the
//! characteristic polynomial.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest dimension the eigenvalue routines accept.
pub const MAX_DIM: usize = 16;

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_REL: f64 = 1e-13;

/// Iterations allowed per eigenvalue in the QR sweep.
const QR_MAX_ITS: usize = 60;

/// Sweeps allowed for cyclic Jacobi.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; every row must have the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix, or a dimension error.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Copy of the entries at the given row and column indices (0-based).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Largest absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Entrywise maximum absolute difference; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Parses the comma-separated text format: one row per line, no header.
    /// Blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        Error::Argument(format!(
                            "line {}: cannot parse {:?} as a number",
                            lineno + 1,
                            tok.trim()
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Argument("matrix text is empty".into()));
        }
        Matrix::from_rows(&rows)
    }

    /// Renders the comma-separated text format accepted by [`Matrix::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format_number(*x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} does not match {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Shortest decimal that round-trips the value rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{}", x);
    }
    let rounded: f64 = format!("{:.11e}", x).parse().unwrap_or(x);
    let s = format!("{}", rounded);
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Pivot threshold used to declare singularity: a fraction of the largest row norm.
fn singular_threshold(a: &Matrix) -> f64 {
    SINGULAR_REL * a.norm_inf()
}

/// LU factorization with partial pivoting, returning the packed factors,
/// the permutation, and the permutation sign.
fn lu(a: &Matrix) -> (Matrix, Vec<usize>, f64) {
    let n = a.rows;
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| m[(x, k)].abs().total_cmp(&m[(y, k)].abs()))
            .unwrap_or(k);
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = m[(k, k)];
        if pivot == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = m[(i, k)] / pivot;
            m[(i, k)] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    let v = m[(k, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
    }
    (m, perm, sign)
}

/// Determinant by partial-pivot elimination.
pub fn determinant(a: &Matrix) -> Result<f64> {
    let n = a.order()?;
    if n == 0 {
        return Ok(1.0);
    }
    let (m, _, sign) = lu(a);
    Ok((0..n).fold(sign, |acc, i| acc * m[(i, i)]))
}

/// Solves `A x = b`, reporting singularity through the scale-aware pivot test.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.order()?;
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            n
        )));
    }
    let (m, perm, _) = lu(a);
    check_pivots(&m, singular_threshold(a))?;
    Ok(lu_solve(&m, &perm, b))
}

/// Matrix inverse; fails on a pivot below `1e-13 * ||A||_inf`.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.order()?;
    let (m, perm, _) = lu(a);
    check_pivots(&m, singular_threshold(a))?;
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        let col = lu_solve(&m, &perm, &e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

fn check_pivots(m: &Matrix, threshold: f64) -> Result<()> {
    for i in 0..m.rows {
        let p = m[(i, i)].abs();
        if p <= threshold || !p.is_finite() {
            return Err(Error::Singular { pivot: p, threshold });
        }
    }
    Ok(())
}

fn lu_solve(m: &Matrix, perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = m.rows;
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        let mut s = x[i];
        for j in 0..i {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    x
}

/// Determinant of a 4x4 matrix by Laplace expansion along the first two rows:
/// six products of complementary 2x2 minors.
pub fn det4_block(a: &Matrix) -> Result<f64> {
    if a.rows != 4 || a.cols != 4 {
        return Err(Error::Dimension(format!(
            "det4_block needs a 4x4 matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let minor = |r: [usize; 2], c: [usize; 2]| a[(r[0], c[0])] * a[(r[1], c[1])] - a[(r[0], c[1])] * a[(r[1], c[0])];
    let mut det = 0.0;
    for j1 in 0..4 {
        for j2 in j1 + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&j| j != j1 && j != j2).collect();
            // rows {0,1} and columns {j1,j2}: sign (-1)^(0+1+j1+j2) in 0-based indexing
            let sign = if (1 + j1 + j2) % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * minor([0, 1], [j1, j2]) * minor([2, 3], [rest[0], rest[1]]);
        }
    }
    Ok(det)
}

/// Eigenvalues of a real square matrix, conjugate pairs kept together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
}

impl Spectrum {
    /// Largest real part.
    pub fn abscissa(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest modulus.
    pub fn radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Values sorted by real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All eigenvalues of `a`, via balancing, Hessenberg reduction by stabilized
/// elimination, and Francis double-shift QR on the Hessenberg form.
pub fn eigenvalues(a: &Matrix) -> Result<Spectrum> {
    let n = a.order()?;
    if n > MAX_DIM {
        return Err(Error::Dimension(format!(
            "eigenvalues supports n <= {}, got {}",
            MAX_DIM, n
        )));
    }
    if !a.is_finite() {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Spectrum { values: Vec::new() });
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let values = hqr(&mut h)?;
    Ok(Spectrum { values })
}

pub fn spectral_abscissa(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.abscissa())
}

pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.radius())
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable. Leaves the spectrum unchanged.
fn balance(a: &mut Matrix) {
    const RADIX: f64 = 2.0;
    let n = a.rows;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let ginv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= ginv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place reduction to upper Hessenberg form by elimination with pivoting.
fn hessenberg(a: &mut Matrix) {
    let n = a.rows;
    for m in 1..n.saturating_sub(1) {
        let mut x: f64 = 0.0;
        let mut piv = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                piv = j;
            }
        }
        if piv != m {
            for j in m - 1..n {
                a.data.swap(piv * n + j, m * n + j);
            }
            for j in 0..n {
                a.data.swap(j * n + piv, j * n + m);
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = 0.0;
                    for j in m..n {
                        let v = a[(m, j)];
                        a[(i, j)] -= y * v;
                    }
                    for j in 0..n {
                        let v = a[(j, i)];
                        a[(j, m)] += y * v;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a[(i, j)] = 0.0;
        }
    }
}

fn sign_of(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the Francis double-shift QR
/// iteration with exceptional shifts. The matrix is destroyed.
fn hqr(a: &mut Matrix) -> Result<Vec<Complex64>> {
    let n = a.rows;
    let eps = f64::EPSILON;
    let mut wr = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                wr[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                let mut y = a[(nu - 1, nu - 1)];
                let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
                if l == nu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign_of(z, p);
                        wr[nu - 1] = Complex64::new(x + z, 0.0);
                        wr[nu] = Complex64::new(if z != 0.0 { x - w / z } else { x + z }, 0.0);
                    } else {
                        wr[nu] = Complex64::new(x + p, -z);
                        wr[nu - 1] = wr[nu].conj();
                    }
                    nn -= 2;
                } else {
                    if its == QR_MAX_ITS {
                        return Err(Error::Convergence { iterations: its });
                    }
                    if its > 0 && its.is_multiple_of(10) {
                        t += x;
                        for i in 0..=nu {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r, mut z);
                    let mut m = nu - 2;
                    loop {
                        z = a[(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - r - s;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nu - 1 {
                        a[(i + 2, i)] = 0.0;
                        if i != m {
                            a[(i + 2, i - 1)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nu {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = if k + 1 != nu { a[(k + 2, k - 1)] } else { 0.0 };
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign_of((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nu {
                                let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                                if k + 1 != nu {
                                    pp += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= pp * z;
                                }
                                a[(k + 1, j)] -= pp * y;
                                a[(k, j)] -= pp * x;
                            }
                            let mmin = if nu < k + 3 { nu } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k + 1 != nu {
                                    pp += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= pp * r;
                                }
                                a[(i, k + 1)] -= pp * q;
                                a[(i, k)] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 0 || l + 1 >= nn as usize {
                break;
            }
        }
    }
    Ok(wr)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Iterates until the off-diagonal Frobenius norm drops below
/// `1e-12 * max(1, ||A||_F)`.
pub fn symmetric_eigenvalues(a: &Matrix) -> Result<Vec<f64>> {
    let n = a.order()?;
    let scale = a.norm_frobenius().max(1.0);
    if a.max_abs_diff(&a.transpose()) > 1e-12 * scale {
        return Err(Error::Argument("matrix is not symmetric".into()));
    }
    let mut m = a.clone();
    let off = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let tol = 1e-12 * scale;
    let mut sweeps = 0;
    while off(&m) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence { iterations: sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = sign_of(1.0, theta) / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Coefficients `[1, c1, ..., cn]` of `det(lambda I - A)` by the
/// Faddeev-LeVerrier recurrence.
pub fn char_poly(a: &Matrix) -> Result<Vec<f64>> {
    let n = a.order()?;
    let mut coeffs = vec![1.0];
    let mut m = Matrix::zeros(n, n);
    let id = Matrix::identity(n);
    for k in 1..=n {
        let ck_prev = coeffs[k - 1];
        let prod = a.matmul(&m)?;
        m = prod.add(&id.scale(ck_prev))?;
        let am = a.matmul(&m)?;
        let trace: f64 = (0..n).map(|i| am[(i, i)]).sum();
        coeffs.push(-trace / k as f64);
    }
    Ok(coeffs)
}
