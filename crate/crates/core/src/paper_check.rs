//! Side-by-side comparison of printed closed forms with numeric oracles.
//!
//! Each entry evaluates one printed formula or display at concrete
//! parameters and compares it with a value computed independently from the
//! model right-hand sides. Entries whose gap exceeds the tolerance are
//! `Flagged`; they document the formula, not a defect in this crate.

use num_complex::Complex64;
use serde::Serialize;

use crate::compound::add_compound;
use crate::covid::{self, CovidParams};
use crate::error::Result;
use crate::matrix::{det4_block, determinant, inverse, solve, Matrix};
use crate::seir::{self, SeirParams};
use crate::stability::cardano;

/// Relative tolerance for a `Match`.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Scalar(f64),
    Matrix(Matrix),
}

impl ClaimValue {
    fn entries(&self) -> Vec<f64> {
        match self {
            ClaimValue::Scalar(x) => vec![*x],
            ClaimValue::Matrix(m) => m.as_slice().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimVerdict {
    Match,
    Flagged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimEntry {
    pub claim_id: String,
    pub paper_value: ClaimValue,
    pub oracle_value: ClaimValue,
    /// Largest entrywise gap. A printed value that cannot be evaluated (a
    /// negative discriminant under a square root, say) is NaN, and the gap
    /// is then the largest magnitude among the oracle entries.
    pub max_abs_diff: f64,
    pub verdict: ClaimVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperCheckReport {
    pub entries: Vec<ClaimEntry>,
}

impl PaperCheckReport {
    pub fn get(&self, id: &str) -> Option<&ClaimEntry> {
        self.entries.iter().find(|e| e.claim_id == id)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &ClaimEntry> {
        self.entries.iter().filter(|e| e.verdict == ClaimVerdict::Flagged)
    }
}

fn entry(id: &str, paper: ClaimValue, oracle: ClaimValue) -> ClaimEntry {
    let (p, o) = (paper.entries(), oracle.entries());
    let scale = o.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let max_abs_diff = if p.len() != o.len() {
        f64::INFINITY
    } else if p.iter().any(|v| v.is_nan()) {
        o.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        p.iter().zip(&o).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let ok = p.len() == o.len() && p.iter().all(|v| v.is_finite()) && max_abs_diff <= MATCH_TOL * scale;
    ClaimEntry {
        claim_id: id.to_string(),
        paper_value: paper,
        oracle_value: oracle,
        max_abs_diff,
        verdict: if ok { ClaimVerdict::Match } else { ClaimVerdict::Flagged },
    }
}

fn scalar(id: &str, paper: f64, oracle: f64) -> ClaimEntry {
    entry(id, ClaimValue::Scalar(paper), ClaimValue::Scalar(oracle))
}

fn matrix(id: &str, paper: Matrix, oracle: Matrix) -> ClaimEntry {
    entry(id, ClaimValue::Matrix(paper), ClaimValue::Matrix(oracle))
}

/// A claimed inequality `value <= 0`: the printed side is the bound 0 and
/// the gap is the amount by which the oracle exceeds it.
fn nonpositive(id: &str, value: f64) -> ClaimEntry {
    let gap = value.max(0.0);
    ClaimEntry {
        claim_id: id.to_string(),
        paper_value: ClaimValue::Scalar(0.0),
        oracle_value: ClaimValue::Scalar(value),
        max_abs_diff: gap,
        verdict: if gap > 0.0 {
            ClaimVerdict::Flagged
        } else {
            ClaimVerdict::Match
        },
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn row(values: &[f64]) -> Matrix {
    Matrix::from_rows(&[values]).expect("one row")
}

/// Second additive compound of a 3x3 matrix as printed.
fn template_n3(a: &Matrix) -> Matrix {
    let g = |i: usize, j: usize| a[(i - 1, j - 1)];
    Matrix::from_rows(&[
        [g(1, 1) + g(2, 2), g(2, 3), -g(1, 3)],
        [g(3, 2), g(1, 1) + g(3, 3), g(1, 2)],
        [-g(3, 1), g(2, 1), g(2, 2) + g(3, 3)],
    ])
    .expect("3x3")
}

/// Second additive compound of a 4x4 matrix as printed, including `-a13` at (4,1).
fn template_n4(a: &Matrix) -> Matrix {
    let g = |i: usize, j: usize| a[(i - 1, j - 1)];
    Matrix::from_rows(&[
        [g(1, 1) + g(2, 2), g(2, 3), g(2, 4), -g(1, 3), -g(1, 4), 0.0],
        [g(3, 2), g(1, 1) + g(3, 3), g(3, 4), g(1, 2), 0.0, -g(1, 4)],
        [g(4, 2), g(4, 3), g(1, 1) + g(4, 4), 0.0, g(1, 2), g(1, 3)],
        [-g(1, 3), g(2, 1), 0.0, g(2, 2) + g(3, 3), g(3, 4), -g(2, 4)],
        [-g(4, 1), 0.0, g(2, 1), g(4, 3), g(2, 2) + g(4, 4), g(2, 3)],
        [0.0, -g(4, 1), g(3, 1), -g(4, 2), g(3, 2), g(3, 3) + g(4, 4)],
    ])
    .expect("6x6")
}

/// The printed 10x10 second compound of the linearisation at the endemic
/// point, with the structural zeros it assumes.
fn display_jp_star(a: &Matrix) -> Matrix {
    let g = |i: usize, j: usize| a[(i - 1, j - 1)];
    let z = 0.0;
    Matrix::from_rows(&[
        [g(1, 1) + g(2, 2), z, z, z, z, -g(1, 4), -g(1, 5), z, z, z],
        [
            g(3, 2),
            g(1, 1) + g(3, 3),
            g(3, 4),
            g(3, 5),
            g(1, 2),
            z,
            z,
            -g(1, 4),
            -g(1, 5),
            z,
        ],
        [
            g(4, 2),
            g(4, 3),
            g(1, 1) + g(4, 4),
            g(4, 5),
            z,
            g(1, 2),
            z,
            z,
            z,
            -g(1, 5),
        ],
        [g(5, 2), g(5, 3), z, g(1, 1) + g(5, 5), z, z, g(1, 2), z, z, g(1, 4)],
        [z, g(2, 1), z, z, g(2, 2) + g(3, 3), g(3, 4), g(3, 5), z, -g(2, 5), z],
        [z, z, g(2, 1), z, g(4, 3), g(2, 2) + g(4, 4), z, z, z, z],
        [-g(5, 1), z, z, g(2, 1), g(5, 3), z, g(2, 2) + g(5, 5), z, z, z],
        [z, -g(4, 1), z, z, -g(4, 2), g(3, 2), z, g(3, 3) + g(4, 4), z, z],
        [
            z,
            -g(5, 1),
            z,
            z,
            -g(5, 2),
            z,
            g(3, 2),
            g(5, 4),
            g(3, 3) + g(5, 5),
            g(3, 4),
        ],
        [
            z,
            z,
            -g(5, 1),
            z,
            z,
            -g(5, 2),
            g(4, 2),
            -g(5, 3),
            -g(4, 3),
            g(4, 4) + g(5, 5),
        ],
    ])
    .expect("10x10")
}

/// The printed sparse four-term determinant, applied to any 4x4 matrix.
fn det4_sparse_printed(a: &Matrix) -> f64 {
    let g = |i: usize, j: usize| a[(i - 1, j - 1)];
    g(1, 1) * g(2, 2) * g(3, 3) * g(4, 4) + g(2, 1) * g(4, 2) * g(1, 4) * g(3, 3)
        - (g(2, 1) * g(1, 2) * g(3, 3) * g(4, 4) + g(2, 1) * g(3, 2) * g(1, 4) * g(4, 3))
}

/// Roots of `x^3 + b x^2 + c x + d` from the printed Cardano formulas,
/// whose complex pair carries `i sqrt(3) (S - T)`. `T` is paired with `S`
/// through `S T = -Q`.
pub fn cardano_printed(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let q = (3.0 * c - b * b) / 9.0;
    let r = (9.0 * b * c - 27.0 * d - 2.0 * b * b * b) / 54.0;
    let root = Complex64::new(r * r + q * q * q, 0.0).sqrt();
    let mut s = (Complex64::new(r, 0.0) + root).cbrt();
    if s.norm() < 1e-300 {
        s = (Complex64::new(r, 0.0) - root).cbrt();
    }
    let t = if s.norm() < 1e-300 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(-q, 0.0) / s
    };
    let shift = Complex64::new(b / 3.0, 0.0);
    let i3 = Complex64::new(0.0, 3f64.sqrt());
    [
        s + t - shift,
        -(s + t) / 2.0 - shift + i3 * (s - t),
        -(s + t) / 2.0 - shift - i3 * (s - t),
    ]
}

/// Newton's method on the three-compartment equilibrium equations.
fn seir_newton(p: &SeirParams, mut x: [f64; 3]) -> Result<[f64; 3]> {
    for _ in 0..50 {
        let f = seir::rhs3(p, &x);
        let step = solve(&seir::jacobian3(p, &x), &f)?;
        for k in 0..3 {
            x[k] -= step[k];
        }
        if step.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-15 * (1.0 + x[0].abs()) {
            break;
        }
    }
    Ok(x)
}

/// `(I, C, H, D)` from the four equations that are linear once `E` is fixed.
fn covid_linear_oracle(p: &CovidParams, e: f64) -> Result<[f64; 4]> {
    let a = p.beta1 - p.beta10;
    let m = Matrix::from_rows(&[
        [-a * e, 0.0, p.beta9, p.beta7 * e],
        [p.beta2, -(p.beta3 + p.beta5 + p.mu), p.beta4, 0.0],
        [p.beta8, p.beta3, -(p.beta4 + p.beta9 + p.mu), 0.0],
        [p.beta6, p.beta5, 0.0, -p.beta7 * e],
    ])?;
    let x = solve(&m, &[p.mu * e - p.b, 0.0, 0.0, 0.0])?;
    Ok([x[0], x[1], x[2], x[3]])
}

/// A fixed dense matrix with no structural zeros or symmetries.
fn generic(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        ((i * n + j) as f64 * 0.37 + 0.11).sin() * (1.0 + i as f64) - 0.2 * j as f64
    })
}

/// Evaluate every claim at the given parameters.
pub fn paper_check(p: &CovidParams, s: &SeirParams) -> Result<PaperCheckReport> {
    p.validate()?;
    s.validate()?;
    let mut out = Vec::new();

    let ones = [1.0; 5];
    out.push(scalar(
        "sum_rate_identity",
        covid::sum_rate_printed(p, &ones),
        covid::sum_rate(p, &ones),
    ));

    let dfe = covid::dfe(p)?;
    let x0 = dfe.state.to_array();
    let eq = covid::endemic(p)?;
    let xs = eq.state.to_array();
    let jp = covid::jacobian_printed(p, &xs);
    let jfd = covid::jacobian_fd(p, &xs, covid::FD_STEP)?;
    out.push(scalar("jacobian_a21", jp[(1, 0)], jfd[(1, 0)]));
    out.push(scalar("jacobian_a33", jp[(2, 2)], jfd[(2, 2)]));
    out.push(scalar("jacobian_a44", jp[(3, 3)], jfd[(3, 3)]));
    out.push(matrix("jacobian_endemic", jp, covid::jacobian_closed(p, &xs)));
    let jp0 = covid::jp0_printed(p)?;
    out.push(matrix("jacobian_dfe", jp0.clone(), covid::jacobian_closed(p, &x0)));

    let ratios = covid::endemic_ratios(p)?;
    let lin = covid_linear_oracle(p, ratios.e_star)?;
    let a = p.beta1 - p.beta10;
    out.push(scalar("e_star", (p.mu + p.beta2 + p.beta6 + p.beta8) / a, xs[0]));
    out.push(scalar("alpha_hat", covid::alpha_hat_printed(p), lin[0] / lin[2]));
    out.push(scalar("beta_hat", ratios.beta_hat, lin[1] / lin[2]));
    out.push(scalar("gamma_hat", ratios.gamma_hat, lin[3] / lin[2]));
    let h_printed =
        (p.b - p.mu * ratios.e_star) / ((a * ratios.alpha_hat - p.beta7 * ratios.gamma_hat) * ratios.e_star - p.beta9);
    out.push(scalar("h_star", h_printed, lin[2]));

    out.push(scalar(
        "r0_reduced",
        covid::r0_reduced(p)?,
        covid::r0_reduced_numeric(p)?,
    ));
    out.push(scalar(
        "r0_full_dfe",
        covid::r0_reduced(p)?,
        covid::ngm_full(p, &x0)?.r0,
    ));
    let ngm = covid::ngm_full(p, &xs)?;
    out.push(scalar("det_v", ngm.det_v_closed, ngm.det_v));
    let mc = ngm.minors_closed;
    let mn = ngm.minors;
    out.push(matrix(
        "ngm_minors",
        Matrix::from_rows(&[[mc[0], mc[1]], [mc[2], mc[3]]])?,
        Matrix::from_rows(&[[mn[0], mn[1]], [mn[2], mn[3]]])?,
    ));
    let bc = ngm.block_closed;
    let bn = ngm.block;
    out.push(matrix(
        "ngm_block",
        Matrix::from_rows(&[[bc[0], bc[1]], [bc[2], bc[3]]])?,
        Matrix::from_rows(&[[bn[0], bn[1]], [bn[2], bn[3]]])?,
    ));
    out.push(scalar("r0_closed", ngm.r0_closed, ngm.r0));

    let det = covid::det_jp0(p)?;
    out.push(scalar("det_jp0_expansion", det.closed, det.numeric_printed));
    out.push(scalar("det_jp0_rederived", det.closed, det.numeric));
    let premise = det.beta10_below_beta1 && det.sign_condition;
    let oracle_sign = sign(det.numeric);
    out.push(scalar(
        "det_jp0_sign",
        if premise { -1.0 } else { oracle_sign },
        oracle_sign,
    ));
    let block4 = jp0.submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3]);
    out.push(scalar(
        "det4_sparse",
        det4_sparse_printed(&block4),
        det4_block(&block4)?,
    ));

    let chi = covid::chi_cubic(p)?;
    out.push(matrix("splitting", chi.m.sub(&chi.e)?, jp0));
    out.push(matrix("e_inverse", covid::e_inv_printed(p)?, inverse(&chi.e)?));
    out.push(matrix("m_e_inverse", covid::m_e_inv_printed(p)?, chi.m_e_inv.clone()));
    out.push(matrix(
        "chi_coefficients",
        row(&[chi.a1, chi.a2, chi.a3, 0.0, 0.0]),
        row(&chi.char_poly),
    ));
    out.push(nonpositive("chi_a1_nonpositive", chi.a1));
    let printed_roots = cardano_printed(chi.a1, chi.a2, chi.a3);
    let true_roots = cardano(1.0, chi.a1, chi.a2, chi.a3)?.roots;
    let miss = |set: &[Complex64; 3], z: &Complex64| set.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
    let cardano_gap = printed_roots.iter().map(|z| miss(&true_roots, z)).fold(0.0, f64::max);
    out.push(ClaimEntry {
        claim_id: "cardano_roots".into(),
        paper_value: ClaimValue::Matrix(row(&printed_roots
            .iter()
            .flat_map(|z| [z.re, z.im])
            .collect::<Vec<_>>())),
        oracle_value: ClaimValue::Matrix(row(&true_roots.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())),
        max_abs_diff: cardano_gap,
        verdict: if cardano_gap <= MATCH_TOL * (1.0 + chi.a1.abs() + chi.a2.abs() + chi.a3.abs()) {
            ClaimVerdict::Match
        } else {
            ClaimVerdict::Flagged
        },
    });

    let g3 = generic(3);
    out.push(matrix("compound_template_n3", template_n3(&g3), add_compound(&g3, 2)?));
    let g4 = generic(4);
    out.push(matrix("compound_template_n4", template_n4(&g4), add_compound(&g4, 2)?));
    let jc = covid::jacobian_closed(p, &xs);
    out.push(matrix(
        "compound_display_jp_star",
        display_jp_star(&jc),
        add_compound(&jc, 2)?,
    ));

    // three-compartment example
    let s_dfe = seir::dfe3(s)?.state.to_array();
    let s_eq = seir::endemic3(s)?;
    let sx = s_eq.state.to_array();
    out.push(matrix(
        "seir_jacobian",
        seir::jacobian3(s, &sx),
        seir::jacobian3_fd(s, &sx, covid::FD_STEP)?,
    ));
    out.push(matrix(
        "seir_jacobian_dfe",
        seir::jacobian3(s, &s_dfe),
        seir::jacobian3_fd(s, &s_dfe, covid::FD_STEP)?,
    ));
    let (_, v) = seir::ngm3(s)?;
    out.push(matrix("seir_v_inverse", seir::v_inv_printed(s), inverse(&v)?));
    out.push(scalar("seir_r0", seir::r0_seir(s)?, seir::r0_seir_numeric(s)?));
    out.push(matrix(
        "seir_compound_dfe",
        seir::compound_dfe_printed(s),
        add_compound(&seir::jacobian3(s, &s_dfe), 2)?,
    ));
    out.push(matrix(
        "seir_compound_endemic",
        seir::compound_printed(s, &sx),
        add_compound(&seir::jacobian3(s, &sx), 2)?,
    ));
    let newton = seir_newton(s, [sx[0] * 1.1, sx[1] * 0.9, sx[2] * 1.1])?;
    out.push(scalar("seir_s_star", sx[0], newton[0]));
    out.push(scalar("seir_i1_star", seir::i1_star_printed(s), newton[1]));
    let stab = seir::seir_stability(s)?;
    out.push(matrix(
        "seir_transformed",
        seir::transformed_printed(s, &sx),
        stab.transformed.clone(),
    ));
    let dsign = sign(determinant(&stab.jacobian)?);
    out.push(scalar(
        "seir_det_sign",
        if stab.conditions.cond3 { -1.0 } else { dsign },
        dsign,
    ));

    Ok(PaperCheckReport { entries: out })
}

/// [`paper_check`] at the tabulated rates with `beta10 = 0.1` and the
/// figure parameters of the three-compartment example at `mu = 0.1`.
pub fn paper_check_default() -> Result<PaperCheckReport> {
    paper_check(&CovidParams::table(0.1), &SeirParams::figure(0.1))
}
