//! Stability criteria for real matrices and cubic characteristic polynomials.

use num_complex::Complex64;
use serde::Serialize;

use crate::compound::{add_compound, mult_compound};
use crate::error::{Error, Result};
use crate::lozinskii::{measure, MeasureKind};
use crate::matrix::{determinant, inverse, solve, spectral_abscissa, spectral_radius, Matrix};

/// Dead band for strict inequalities. Values inside it are treated as marginal.
pub const MARGIN: f64 = 1e-9;

/// Largest dimension accepted by the Li-Wang tests.
pub const LI_WANG_MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Stable,
    Unstable,
    Inconclusive,
}

/// What a verdict was based on. Unused fields stay `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub criterion: String,
    /// `(-1)^n det(A)`; positive is necessary for stability.
    pub det_sign: Option<f64>,
    pub measure_kind: Option<MeasureKind>,
    pub measure_value: Option<f64>,
    /// Spectral abscissa of the matrix the criterion inspects (for the
    /// Li-Wang tests this is the second additive compound).
    pub abscissa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubic: Option<CubicEvidence>,
}

impl Evidence {
    fn named(criterion: &str) -> Self {
        Evidence {
            criterion: criterion.to_string(),
            det_sign: None,
            measure_kind: None,
            measure_value: None,
            abscissa: None,
            cubic: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(flatten)]
    pub evidence: Evidence,
}

impl Verdict {
    pub fn is_stable(&self) -> bool {
        self.outcome == Outcome::Stable
    }
}

fn classify(value: f64) -> Outcome {
    if value < -MARGIN {
        Outcome::Stable
    } else if value > MARGIN {
        Outcome::Unstable
    } else {
        Outcome::Inconclusive
    }
}

/// Stable iff every eigenvalue has real part below `-MARGIN`.
pub fn hurwitz_exact(a: &Matrix) -> Result<Verdict> {
    let s = spectral_abscissa(a)?;
    let mut evidence = Evidence::named("hurwitz_exact");
    evidence.abscissa = Some(s);
    Ok(Verdict {
        outcome: classify(s),
        evidence,
    })
}

/// `(-1)^n det(A)` and the dead band its sign is judged against. The band is
/// relative to Hadamard's bound on `|det A|`.
fn signed_det(a: &Matrix) -> Result<(f64, f64)> {
    let n = a.order()?;
    let det = determinant(a)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let hadamard: f64 = (0..n)
        .map(|i| a.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .product();
    Ok((sign * det, MARGIN * hadamard.max(1.0)))
}

fn check_li_wang_dim(a: &Matrix) -> Result<usize> {
    let n = a.order()?;
    if n == 0 || n > LI_WANG_MAX_DIM {
        return Err(Error::Dimension(format!(
            "Li-Wang tests need 1 <= n <= {}, got {}",
            LI_WANG_MAX_DIM, n
        )));
    }
    Ok(n)
}

/// Exact Li-Wang test: `A` is stable iff `s(A^[2]) < 0` and `(-1)^n det A > 0`.
pub fn li_wang_exact(a: &Matrix) -> Result<Verdict> {
    let n = check_li_wang_dim(a)?;
    let (sd, band) = signed_det(a)?;
    // a 1x1 matrix has no pairs of eigenvalues; its second compound is empty
    let s2 = if n == 1 {
        f64::NEG_INFINITY
    } else {
        spectral_abscissa(&add_compound(a, 2)?)?
    };
    let mut evidence = Evidence::named("li_wang_exact");
    evidence.det_sign = Some(sd);
    evidence.abscissa = if n == 1 { None } else { Some(s2) };
    let outcome = if s2 > MARGIN || sd < -band {
        Outcome::Unstable
    } else if s2 < -MARGIN && sd > band {
        Outcome::Stable
    } else {
        Outcome::Inconclusive
    };
    Ok(Verdict { outcome, evidence })
}

/// Sufficient Li-Wang test with a fixed Lozinskii measure on `A^[2]`.
/// A non-negative measure proves nothing, so that case is inconclusive.
pub fn li_wang_sufficient(a: &Matrix, kind: MeasureKind) -> Result<Verdict> {
    let n = check_li_wang_dim(a)?;
    let (sd, band) = signed_det(a)?;
    let mu = if n == 1 {
        f64::NEG_INFINITY
    } else {
        measure(&add_compound(a, 2)?, kind)?
    };
    let mut evidence = Evidence::named("li_wang_sufficient");
    evidence.det_sign = Some(sd);
    evidence.measure_kind = Some(kind);
    evidence.measure_value = if n == 1 { None } else { Some(mu) };
    let outcome = if sd < -band {
        Outcome::Unstable
    } else if sd > band && mu < -MARGIN {
        Outcome::Stable
    } else {
        Outcome::Inconclusive
    };
    Ok(Verdict { outcome, evidence })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Rows,
    Cols,
}

/// Strict diagonal dominance on every row or every column.
pub fn dominance(a: &Matrix, axis: Axis) -> bool {
    if !a.is_square() {
        return false;
    }
    let n = a.rows();
    (0..n).all(|i| {
        let off: f64 = (0..n)
            .filter(|&k| k != i)
            .map(|k| match axis {
                Axis::Rows => a[(i, k)].abs(),
                Axis::Cols => a[(k, i)].abs(),
            })
            .sum();
        a[(i, i)].abs() > off
    })
}

/// Row Gershgorin discs as `(center, radius)`.
pub fn gershgorin_discs(a: &Matrix) -> Vec<(f64, f64)> {
    let n = a.rows().min(a.cols());
    (0..n)
        .map(|i| {
            (
                a[(i, i)],
                (0..a.cols()).filter(|&k| k != i).map(|k| a[(i, k)].abs()).sum(),
            )
        })
        .collect()
}

/// True when `z` lies in the union of the row Gershgorin discs (with slack `tol`).
pub fn in_gershgorin_union(a: &Matrix, z: Complex64, tol: f64) -> bool {
    gershgorin_discs(a).iter().any(|&(c, r)| (z - c).norm() <= r + tol)
}

/// Upper off-diagonal row sums `r_i = sum_{j > i} |a_ij|`.
fn upper_sums(a: &Matrix) -> Vec<f64> {
    let n = a.rows();
    (0..n).map(|i| (i + 1..n).map(|j| a[(i, j)].abs()).sum()).collect()
}

fn check_weak_dominance(a: &Matrix) -> Result<usize> {
    let n = a.order()?;
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        if a[(i, i)] < 0.0 || a[(i, i)] < off {
            return Err(Error::Precondition(format!(
                "row {} is not weakly diagonally dominant with non-negative diagonal (a_ii = {}, off-diagonal sum = {})",
                i + 1,
                a[(i, i)],
                off
            )));
        }
    }
    Ok(n)
}

/// Price's bounds `prod(a_ii - r_i) <= det A <= prod(a_ii + r_i)` for a
/// weakly row-dominant matrix with non-negative diagonal.
pub fn price_bounds(a: &Matrix) -> Result<(f64, f64)> {
    let n = check_weak_dominance(a)?;
    let r = upper_sums(a);
    let lower = (0..n).map(|i| a[(i, i)] - r[i]).product();
    let upper = (0..n).map(|i| a[(i, i)] + r[i]).product();
    Ok((lower, upper))
}

/// Determinant bracket from a split `a_ii = l_i + r_i` with
/// `l_i >= sum_{j<i} |a_ij|` and `r_i >= sum_{j>i} |a_ij|`:
///
/// lower = sum_k l_1..l_k r_{k+1}..r_n,
/// upper = sum_k (l_1 + 2 r_1)..(l_{k-1} + 2 r_{k-1}) l_k r_{k+1}..r_n,
///
/// where the `k = 0` term of each sum is `r_1..r_n`.
/// Without an explicit split, `r_i = sum_{j>i} |a_ij|` and `l_i = a_ii - r_i`.
pub fn det_bounds(a: &Matrix, split: Option<&[(f64, f64)]>) -> Result<(f64, f64)> {
    let n = check_weak_dominance(a)?;
    let (l, r): (Vec<f64>, Vec<f64>) = match split {
        None => {
            let r = upper_sums(a);
            ((0..n).map(|i| a[(i, i)] - r[i]).collect(), r)
        }
        Some(s) => {
            if s.len() != n {
                return Err(Error::Argument(format!(
                    "split has {} entries for a {}x{} matrix",
                    s.len(),
                    n,
                    n
                )));
            }
            for (i, &(li, ri)) in s.iter().enumerate() {
                let tol = 1e-12 * (1.0 + a[(i, i)].abs());
                let below: f64 = (0..i).map(|j| a[(i, j)].abs()).sum();
                let above: f64 = (i + 1..n).map(|j| a[(i, j)].abs()).sum();
                if (li + ri - a[(i, i)]).abs() > tol || li < below - tol || ri < above - tol {
                    return Err(Error::Argument(format!(
                        "split ({}, {}) for row {} violates l + r = a_ii, l >= {}, r >= {}",
                        li,
                        ri,
                        i + 1,
                        below,
                        above
                    )));
                }
            }
            s.iter().copied().unzip()
        }
    };
    let mut lower = 0.0;
    let mut upper = 0.0;
    for k in 0..=n {
        let tail: f64 = r[k..].iter().product();
        lower += l[..k].iter().product::<f64>() * tail;
        upper += if k == 0 {
            tail
        } else {
            (0..k - 1).map(|i| l[i] + 2.0 * r[i]).product::<f64>() * l[k - 1] * tail
        };
    }
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CubicClass {
    ThreeReal,
    RepeatedRoot,
    OneRealTwoComplex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    /// Discriminant of the monic normalization `x^3 + (b/a)x^2 + (c/a)x + d/a`.
    pub discriminant: f64,
    pub klass: CubicClass,
}

/// Discriminant of `x^3 + a1 x^2 + a2 x + a3`.
pub fn cubic_discriminant(a1: f64, a2: f64, a3: f64) -> f64 {
    a1 * a1 * a2 * a2 + 18.0 * a1 * a2 * a3 - 27.0 * a3 * a3 - 4.0 * a2 * a2 * a2 - 4.0 * a1 * a1 * a1 * a3
}

/// Magnitude scale of the monic cubic's roots, used for the discriminant zero band.
fn root_scale(a1: f64, a2: f64, a3: f64) -> f64 {
    1.0 + a1.abs().max(a2.abs().sqrt()).max(a3.abs().cbrt())
}

fn class_of(a1: f64, a2: f64, a3: f64) -> (f64, CubicClass) {
    let disc = cubic_discriminant(a1, a2, a3);
    let band = 1e-10 * root_scale(a1, a2, a3).powi(6);
    let klass = if disc.abs() <= band {
        CubicClass::RepeatedRoot
    } else if disc > 0.0 {
        CubicClass::ThreeReal
    } else {
        CubicClass::OneRealTwoComplex
    };
    (disc, klass)
}

/// Roots of `ax^3 + bx^2 + cx + d` by Cardano's formulas.
///
/// With `Q = (3c - b^2)/(9a^2)` and `R = (9abc - 27a^2 d - 2b^3)/(54a^3)`, the
/// cube roots `S` and `T` are paired so that `ST = -Q`; the roots are
/// `S + T - b/3a` and `-(S+T)/2 - b/3a +- (i sqrt3 / 2)(S - T)`. Each root
/// then gets a few Newton corrections.
pub fn cardano(a: f64, b: f64, c: f64, d: f64) -> Result<CubicRoots> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Argument(
            "leading coefficient must be non-zero: not a cubic".into(),
        ));
    }
    if ![b, c, d].iter().all(|x| x.is_finite()) {
        return Err(Error::Argument("cubic coefficients must be finite".into()));
    }
    let q = (3.0 * a * c - b * b) / (9.0 * a * a);
    let r = (9.0 * a * b * c - 27.0 * a * a * d - 2.0 * b * b * b) / (54.0 * a * a * a);
    let disc = q * q * q + r * r;
    let (s, t) = if disc >= 0.0 {
        // real radicand: take the larger-magnitude branch for S, then T = -Q/S
        let big = r + sign_or_one(r) * disc.sqrt();
        let s = big.cbrt();
        let t = if s != 0.0 { -q / s } else { 0.0 };
        (Complex64::new(s, 0.0), Complex64::new(t, 0.0))
    } else {
        let s = Complex64::new(r, (-disc).sqrt()).cbrt();
        (s, s.conj())
    };
    let shift = Complex64::new(-b / (3.0 * a), 0.0);
    let half_sqrt3_i = Complex64::new(0.0, 3f64.sqrt() / 2.0);
    let mut roots = [
        s + t + shift,
        -(s + t) / 2.0 + shift + half_sqrt3_i * (s - t),
        -(s + t) / 2.0 + shift - half_sqrt3_i * (s - t),
    ];
    let poly = |x: Complex64| ((x * a + b) * x + c) * x + d;
    let dpoly = |x: Complex64| (x * (3.0 * a) + 2.0 * b) * x + c;
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let f = poly(*root);
            let df = dpoly(*root);
            if df.norm() == 0.0 {
                break;
            }
            let next = *root - f / df;
            if poly(next).norm() < f.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    let (discriminant, klass) = class_of(b / a, c / a, d / a);
    if klass != CubicClass::OneRealTwoComplex {
        for root in roots.iter_mut() {
            root.im = 0.0;
        }
    }
    Ok(CubicRoots {
        roots,
        discriminant,
        klass,
    })
}

fn sign_or_one(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// One of the discriminant-based statements about monic cubics, evaluated on
/// concrete coefficients. `holds` is `None` when the hypothesis does not apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BulletCheck {
    pub id: u8,
    pub statement: &'static str,
    pub applies: bool,
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicEvidence {
    pub discriminant: f64,
    pub klass: CubicClass,
    /// Hurwitz determinants `a1`, `a1 a2 - a3`, `a3 (a1 a2 - a3)`.
    pub hurwitz_minors: [f64; 3],
    pub max_root_real_part: f64,
    pub bullets: Vec<BulletCheck>,
}

fn evaluate_bullets(a1: f64, a2: f64, a3: f64, roots: &CubicRoots) -> Vec<BulletCheck> {
    let klass = roots.klass;
    let tol = 1e-7 * root_scale(a1, a2, a3);
    let real_count = roots.roots.iter().filter(|z| z.im.abs() <= tol).count();
    let max_re = roots.roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let las = max_re < -MARGIN;
    let rh = a1 > MARGIN && a3 > MARGIN && a1 * a2 - a3 > MARGIN;
    let pos = klass == CubicClass::ThreeReal;
    let neg = klass == CubicClass::OneRealTwoComplex;
    let zero = klass == CubicClass::RepeatedRoot;
    let d2_zero = (a1 * a2 - a3).abs() <= MARGIN * root_scale(a1, a2, a3).powi(3);
    let bullet = |id, statement, applies: bool, holds: bool| BulletCheck {
        id,
        statement,
        applies,
        holds: if applies { Some(holds) } else { None },
    };
    vec![
        bullet(
            1,
            "discriminant > 0 gives three distinct real roots",
            pos,
            real_count == 3,
        ),
        bullet(2, "discriminant = 0 gives a repeated root", zero, {
            let r = &roots.roots;
            let gap = (r[0] - r[1]).norm().min((r[0] - r[2]).norm()).min((r[1] - r[2]).norm());
            gap <= 1e-3 * root_scale(a1, a2, a3)
        }),
        bullet(
            3,
            "discriminant < 0 gives one real root and a complex pair",
            neg,
            real_count == 1,
        ),
        bullet(
            4,
            "discriminant > 0: stable iff a1 > 0, a3 > 0, a1 a2 - a3 > 0",
            pos,
            las == rh,
        ),
        bullet(
            5,
            "discriminant < 0, a1 < 0, a2 < 0: every root has |arg| < pi/2",
            neg && a1 < 0.0 && a2 < 0.0,
            roots.roots.iter().all(|z| z.re > 0.0),
        ),
        bullet(
            6,
            "discriminant > 0, a1 > 0, a2 > 0, a1 a2 - a3 = 0: stable",
            pos && a1 > 0.0 && a2 > 0.0 && d2_zero,
            las,
        ),
        bullet(7, "stability requires a3 > 0", las, a3 > 0.0),
        bullet(
            8,
            "discriminant < 0, a1 > 0, a2 > 0, a1 a2 - a3 = 0: not stable",
            neg && a1 > 0.0 && a2 > 0.0 && d2_zero,
            !las,
        ),
    ]
}

/// Routh-Hurwitz test for `x^3 + a1 x^2 + a2 x + a3`: stable iff `a1 > 0`,
/// `a3 > 0` and `a1 a2 - a3 > 0` (each beyond the dead band). Anything else,
/// including a root on the imaginary axis, is reported unstable.
pub fn cubic_stability(a1: f64, a2: f64, a3: f64) -> Verdict {
    let mut evidence = Evidence::named("routh_hurwitz_cubic");
    let d2 = a1 * a2 - a3;
    let stable = a1 > MARGIN && a3 > MARGIN && d2 > MARGIN;
    if let Ok(roots) = cardano(1.0, a1, a2, a3) {
        let max_re = roots.roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        evidence.abscissa = Some(max_re);
        evidence.cubic = Some(CubicEvidence {
            discriminant: roots.discriminant,
            klass: roots.klass,
            hurwitz_minors: [a1, d2, a3 * d2],
            max_root_real_part: max_re,
            bullets: evaluate_bullets(a1, a2, a3, &roots),
        });
    }
    let outcome = if stable { Outcome::Stable } else { Outcome::Unstable };
    Verdict { outcome, evidence }
}

/// Schur stability through the second multiplicative compound:
/// `rho(A) < 1` iff `rho(C_2(A)) < 1` and `det(I - A^2) > 0`.
pub fn schur_sufficient(a: &Matrix) -> Result<bool> {
    let n = a.order()?;
    if n < 2 {
        return Err(Error::Dimension("the compound Schur test needs n >= 2".into()));
    }
    let rho2 = spectral_radius(&mult_compound(a, 2)?)?;
    let a2 = a.matmul(a)?;
    let det = determinant(&Matrix::identity(n).sub(&a2)?)?;
    Ok(rho2 < 1.0 && det > 0.0)
}

/// Off-diagonal entries all non-negative.
pub fn is_metzler(a: &Matrix) -> bool {
    a.is_square() && (0..a.rows()).all(|i| (0..a.cols()).all(|j| i == j || a[(i, j)] >= 0.0))
}

/// Independent M-matrix condition flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MMatrixReport {
    /// All off-diagonal entries are `<= 0`.
    pub z_pattern: bool,
    pub leading_minors_positive: bool,
    /// Inverse exists and is entrywise `>= -1e-10`.
    pub inverse_nonnegative: bool,
    /// With `x` solving `Ax = e`, `x > 0` and `A diag(x)` has a positive,
    /// strictly row-dominant diagonal.
    pub dominant_after_scaling: bool,
    pub is_nonsingular_m: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn m_matrix(a: &Matrix) -> Result<MMatrixReport> {
    let n = a.order()?;
    let mut notes = Vec::new();
    let z_pattern = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] <= 0.0));
    let mut leading_minors_positive = true;
    for k in 1..=n {
        let idx: Vec<usize> = (0..k).collect();
        if determinant(&a.submatrix(&idx, &idx))? <= 0.0 {
            leading_minors_positive = false;
            break;
        }
    }
    let inverse_nonnegative = match inverse(a) {
        Ok(inv) => inv.as_slice().iter().all(|&x| x >= -1e-10),
        Err(Error::Singular { .. }) => {
            notes.push("matrix is singular; inverse condition reported false".into());
            false
        }
        Err(e) => return Err(e),
    };
    let dominant_after_scaling = match solve(a, &vec![1.0; n]) {
        Ok(x) if x.iter().all(|&v| v > 0.0) => {
            let w = a.matmul(&Matrix::diag(&x))?;
            (0..n).all(|i| w[(i, i)] > 0.0) && dominance(&w, Axis::Rows)
        }
        Ok(_) => false,
        Err(Error::Singular { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(MMatrixReport {
        z_pattern,
        leading_minors_positive,
        inverse_nonnegative,
        dominant_after_scaling,
        is_nonsingular_m: z_pattern && leading_minors_positive,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn hurwitz_examples() {
        assert_eq!(
            hurwitz_exact(&Matrix::diag(&[-1.0, -2.0])).unwrap().outcome,
            Outcome::Stable
        );
        assert_eq!(
            hurwitz_exact(&Matrix::diag(&[1.0, -2.0])).unwrap().outcome,
            Outcome::Unstable
        );
        let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert_eq!(hurwitz_exact(&rot).unwrap().outcome, Outcome::Inconclusive);
    }

    #[test]
    fn li_wang_examples() {
        let stable = Matrix::diag(&[-1.0, -2.0, -3.0, -4.0, -5.0]);
        let v = li_wang_exact(&stable).unwrap();
        assert_eq!(v.outcome, Outcome::Stable);
        assert_eq!(v.evidence.det_sign, Some(120.0));
        assert!((v.evidence.abscissa.unwrap() + 3.0).abs() < 1e-12);
        assert_eq!(
            li_wang_sufficient(&stable, MeasureKind::One).unwrap().outcome,
            Outcome::Stable
        );
        let unstable = Matrix::diag(&[1.0, -2.0, -3.0]);
        assert_eq!(li_wang_exact(&unstable).unwrap().outcome, Outcome::Unstable);
        for kind in MeasureKind::ALL {
            let v = li_wang_sufficient(&unstable, kind).unwrap();
            assert_eq!(v.outcome, Outcome::Unstable);
            assert_eq!(v.evidence.det_sign, Some(-6.0));
        }
        assert!(li_wang_exact(&Matrix::identity(7)).is_err());
    }

    #[test]
    fn dominance_examples() {
        let id = Matrix::identity(2);
        assert!(dominance(&id, Axis::Rows) && dominance(&id, Axis::Cols));
        let up = m(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(!dominance(&up, Axis::Rows) && !dominance(&up, Axis::Cols));
        let both = m(&[&[-3.0, 1.0], &[2.0, -4.0]]);
        assert!(dominance(&both, Axis::Rows) && dominance(&both, Axis::Cols));
    }

    #[test]
    fn determinant_bounds_examples() {
        assert_eq!(det_bounds(&Matrix::identity(3), None).unwrap(), (1.0, 1.0));
        let a = m(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let (lo, hi) = det_bounds(&a, None).unwrap();
        assert_eq!(lo, 2.0);
        assert!(hi >= 3.0);
        let (plo, phi) = price_bounds(&a).unwrap();
        assert!(plo <= 3.0 && 3.0 <= phi);
        let bad = m(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(det_bounds(&bad, None), Err(Error::Precondition(_))));
        assert!(matches!(
            det_bounds(&a, Some(&[(0.5, 0.5), (2.0, 0.0)])),
            Err(Error::Argument(_))
        ));
        assert!(det_bounds(&a, Some(&[(0.0, 2.0), (2.0, 0.0)])).is_ok());
    }

    #[test]
    fn cardano_examples() {
        let triple = cardano(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(triple.klass, CubicClass::RepeatedRoot);
        assert!(triple.roots.iter().all(|z| z.norm() < 1e-15));

        let three = cardano(1.0, -6.0, 11.0, -6.0).unwrap();
        assert_eq!(three.klass, CubicClass::ThreeReal);
        let mut re: Vec<f64> = three.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        let pair = cardano(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(pair.klass, CubicClass::OneRealTwoComplex);
        let mut im: Vec<f64> = pair.roots.iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-14 && im[1].abs() < 1e-14 && (im[2] - 1.0).abs() < 1e-14);

        assert!(cardano(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cubic_stability_examples() {
        assert_eq!(cubic_stability(6.0, 11.0, 6.0).outcome, Outcome::Stable);
        assert_eq!(cubic_stability(-6.0, 11.0, -6.0).outcome, Outcome::Unstable);
        let marginal = cubic_stability(0.0, 1.0, 0.0);
        assert_eq!(marginal.outcome, Outcome::Unstable);
        let ev = marginal.evidence.cubic.unwrap();
        assert_eq!(ev.klass, CubicClass::OneRealTwoComplex);
        assert_eq!(ev.hurwitz_minors[0], 0.0);
    }

    #[test]
    fn schur_examples() {
        assert!(schur_sufficient(&Matrix::identity(2).scale(0.5)).unwrap());
        assert!(!schur_sufficient(&Matrix::identity(2).scale(2.0)).unwrap());
        assert!(schur_sufficient(&Matrix::identity(1)).is_err());
    }

    #[test]
    fn m_matrix_examples() {
        let good = m_matrix(&m(&[&[2.0, -1.0], &[-1.0, 2.0]])).unwrap();
        assert!(good.z_pattern && good.leading_minors_positive && good.inverse_nonnegative);
        assert!(good.dominant_after_scaling && good.is_nonsingular_m);

        let bad = m_matrix(&m(&[&[1.0, -3.0], &[-3.0, 1.0]])).unwrap();
        assert!(bad.z_pattern && !bad.leading_minors_positive && !bad.is_nonsingular_m);

        let id = m_matrix(&Matrix::identity(3)).unwrap();
        assert!(id.z_pattern && id.leading_minors_positive && id.inverse_nonnegative && id.dominant_after_scaling);

        let singular = m_matrix(&m(&[&[1.0, -1.0], &[-1.0, 1.0]])).unwrap();
        assert!(!singular.inverse_nonnegative);
        assert!(!singular.notes.is_empty());
    }

    #[test]
    fn metzler_pattern() {
        assert!(is_metzler(&m(&[&[-1.0, 2.0], &[0.0, -3.0]])));
        assert!(!is_metzler(&m(&[&[-1.0, -2.0], &[0.0, -3.0]])));
    }

    #[test]
    fn verdict_serializes_flat() {
        let v = hurwitz_exact(&Matrix::diag(&[-1.0, -2.0])).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["outcome"], "Stable");
        assert_eq!(json["criterion"], "hurwitz_exact");
        assert_eq!(json["abscissa"], -1.0);
        assert!(json.get("det_sign").is_some());
    }
}
