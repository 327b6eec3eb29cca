//! The five-compartment COVID-19 model: exposed `E`, infected `I`, cured `C`,
//! hospitalised `H` and deceased `D`.
//!
//! Everything here is derived from the right-hand side in [`rhs`]. The
//! closed forms that accompany the model in print are reproduced separately
//! (the `*_printed` functions and the fields ending in `_closed`) so they can
//! be compared against the derived values rather than trusted.

use serde::{Deserialize, Serialize};

use crate::compound::add_compound;
use crate::error::{Error, Result};
use crate::lozinskii::{measure, MeasureKind};
use crate::matrix::{char_poly, determinant, eigenvalues, inverse, spectral_radius, Matrix};
use crate::stability::{cardano, dominance, li_wang_exact, li_wang_sufficient, Axis, CubicRoots, Verdict};

/// Relative residual accepted for a returned equilibrium.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Default finite-difference step for [`jacobian_fd`].
pub const FD_STEP: f64 = 1e-6;

/// Parameter names in the order used by configuration files and sweeps.
pub const PARAM_NAMES: [&str; 12] = [
    "B", "mu", "beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta7", "beta8", "beta9", "beta10",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovidParams {
    #[serde(rename = "B")]
    pub b: f64,
    pub mu: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
    pub beta5: f64,
    pub beta6: f64,
    pub beta7: f64,
    pub beta8: f64,
    pub beta9: f64,
    pub beta10: f64,
}

impl CovidParams {
    /// The tabulated rates. `beta10` is not tabulated and must be supplied.
    pub fn table(beta10: f64) -> Self {
        CovidParams {
            b: 0.80,
            mu: 0.01,
            beta1: 0.55,
            beta2: 0.40,
            beta3: 0.60,
            beta4: 0.80,
            beta5: 0.34,
            beta6: 0.30,
            beta7: 0.35,
            beta8: 0.30,
            beta9: 0.35,
            beta10,
        }
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.b,
            self.mu,
            self.beta1,
            self.beta2,
            self.beta3,
            self.beta4,
            self.beta5,
            self.beta6,
            self.beta7,
            self.beta8,
            self.beta9,
            self.beta10,
        ]
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "B" => &mut self.b,
            "mu" => &mut self.mu,
            "beta1" => &mut self.beta1,
            "beta2" => &mut self.beta2,
            "beta3" => &mut self.beta3,
            "beta4" => &mut self.beta4,
            "beta5" => &mut self.beta5,
            "beta6" => &mut self.beta6,
            "beta7" => &mut self.beta7,
            "beta8" => &mut self.beta8,
            "beta9" => &mut self.beta9,
            "beta10" => &mut self.beta10,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v).ok_or_else(|| unknown_param(name))
    }

    /// Copy with one named parameter replaced.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let mut copy = *self;
        *copy.slot(name).ok_or_else(|| unknown_param(name))? = value;
        Ok(copy)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in PARAM_NAMES.iter().zip(self.values()) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Argument(format!(
                    "parameter {} = {} must be finite and non-negative",
                    name, v
                )));
            }
        }
        Ok(())
    }

    /// Parse a JSON object holding all twelve keys.
    pub fn from_json(text: &str) -> Result<Self> {
        let p: CovidParams =
            serde_json::from_str(text).map_err(|e| Error::Argument(format!("bad parameter file: {}", e)))?;
        p.validate()?;
        Ok(p)
    }

    fn require_mu(&self) -> Result<()> {
        if self.mu > 0.0 {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "mu must be positive for equilibrium work, got {}",
                self.mu
            )))
        }
    }

    /// `B / mu`, the exposed population at the disease-free equilibrium.
    pub fn e0(&self) -> f64 {
        self.b / self.mu
    }
}

fn unknown_param(name: &str) -> Error {
    Error::Argument(format!(
        "unknown parameter {:?}; expected one of {}",
        name,
        PARAM_NAMES.join(", ")
    ))
}

/// Parameter combinations that recur in the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// `beta1 - beta10`
    pub a: f64,
    /// `beta2 + beta6 + beta8 + mu`, the total outflow rate from `I`
    pub alpha: f64,
    /// `beta3 + beta5 + mu`, the outflow rate from `C`
    pub beta_c: f64,
    /// `beta4 + beta9 + mu`, the outflow rate from `H`
    pub gamma_c: f64,
    /// `beta2 + beta5 + mu`, the combination written in the (3,3) slot of the
    /// printed linearisation and reused in the determinant and splitting formulas
    pub beta_alt: f64,
    /// `I* / H*`; NaN when `beta2 beta3 + beta8 beta_c = 0`
    pub alpha_hat: f64,
    /// `C* / H*`; NaN under the same condition
    pub beta_hat: f64,
    /// `D* / H*`; NaN unless `beta7 E* > 0`
    pub gamma_hat: f64,
}

impl DerivedParams {
    pub fn new(p: &CovidParams) -> Self {
        let a = p.beta1 - p.beta10;
        let alpha = p.beta2 + p.beta6 + p.beta8 + p.mu;
        let beta_c = p.beta3 + p.beta5 + p.mu;
        let gamma_c = p.beta4 + p.beta9 + p.mu;
        let den = p.beta2 * p.beta3 + p.beta8 * beta_c;
        let (alpha_hat, beta_hat) = if den > 0.0 {
            (
                (gamma_c * beta_c - p.beta3 * p.beta4) / den,
                (p.beta8 * p.beta4 + p.beta2 * gamma_c) / den,
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        let e_star = alpha / a;
        let be = p.beta7 * e_star;
        let gamma_hat = if a > 0.0 && be > 0.0 {
            (p.beta6 * alpha_hat + p.beta5 * beta_hat) / be
        } else {
            f64::NAN
        };
        DerivedParams {
            a,
            alpha,
            beta_c,
            gamma_c,
            beta_alt: p.beta2 + p.beta5 + p.mu,
            alpha_hat,
            beta_hat,
            gamma_hat,
        }
    }
}

/// A point of the non-negative cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovidState {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

impl CovidState {
    pub fn new(x: [f64; 5]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Argument(format!(
                "state {:?} must be finite and non-negative",
                x
            )));
        }
        Ok(Self::from_array(x))
    }

    /// Unchecked conversion; used for equilibria that may leave the cone.
    pub fn from_array(x: [f64; 5]) -> Self {
        CovidState {
            e: x[0],
            i: x[1],
            c: x[2],
            h: x[3],
            d: x[4],
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.e, self.i, self.c, self.h, self.d]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    #[serde(rename = "DFE")]
    Dfe,
    Endemic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub state: CovidState,
    /// Every component strictly positive.
    pub feasible: bool,
    /// `||rhs(state)||_inf`
    pub residual: f64,
}

/// The five right-hand sides.
pub fn rhs(p: &CovidParams, x: &[f64; 5]) -> [f64; 5] {
    let [e, i, c, h, d] = *x;
    [
        p.b - p.beta1 * e * i + p.beta7 * e * d + p.beta9 * h + p.beta10 * e * i - p.mu * e,
        p.beta1 * e * i - p.beta2 * i - p.beta6 * i - p.beta8 * i - p.beta10 * e * i - p.mu * i,
        p.beta2 * i - p.beta5 * c - p.beta3 * c + p.beta4 * h - p.mu * c,
        p.beta3 * c - p.beta4 * h + p.beta8 * i - p.beta9 * h - p.mu * h,
        p.beta5 * c + p.beta6 * i - p.beta7 * d * e,
    ]
}

/// Total rate of change, the sum of the five right-hand sides.
///
/// Every transfer term cancels in the sum, leaving `B - mu (E + I + C + H)`
/// (see [`sum_rate_identity`]). `D` carries no natural death term, so the
/// often-quoted `B - mu (E + I + C + H + D)` ([`sum_rate_printed`]) is off by
/// `mu D`.
pub fn sum_rate(p: &CovidParams, x: &[f64; 5]) -> f64 {
    rhs(p, x).iter().sum()
}

pub fn sum_rate_identity(p: &CovidParams, x: &[f64; 5]) -> f64 {
    p.b - p.mu * (x[0] + x[1] + x[2] + x[3])
}

pub fn sum_rate_printed(p: &CovidParams, x: &[f64; 5]) -> f64 {
    p.b - p.mu * x.iter().sum::<f64>()
}

/// Central-difference Jacobian of [`rhs`] with step `h` in `[1e-8, 1e-4]`.
pub fn jacobian_fd(p: &CovidParams, x: &[f64; 5], h: f64) -> Result<Matrix> {
    if !(1e-8..=1e-4).contains(&h) {
        return Err(Error::Argument(format!(
            "finite-difference step {} outside [1e-8, 1e-4]",
            h
        )));
    }
    let mut jac = Matrix::zeros(5, 5);
    for j in 0..5 {
        let (mut up, mut down) = (*x, *x);
        up[j] += h;
        down[j] -= h;
        let (fu, fd) = (rhs(p, &up), rhs(p, &down));
        for i in 0..5 {
            jac[(i, j)] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Analytic Jacobian of [`rhs`].
pub fn jacobian_closed(p: &CovidParams, x: &[f64; 5]) -> Matrix {
    let [e, i, _, _, d] = *x;
    let dp = DerivedParams::new(p);
    let a = dp.a;
    let rows = [
        [-a * i + p.beta7 * d - p.mu, -a * e, 0.0, p.beta9, p.beta7 * e],
        [a * i, a * e - dp.alpha, 0.0, 0.0, 0.0],
        [0.0, p.beta2, -dp.beta_c, p.beta4, 0.0],
        [0.0, p.beta8, p.beta3, -dp.gamma_c, 0.0],
        [-p.beta7 * d, p.beta6, p.beta5, 0.0, -p.beta7 * e],
    ];
    Matrix::from_rows(&rows).expect("5x5")
}

/// The linearisation as it appears in print, entry for entry, including the
/// entries that disagree with [`jacobian_closed`]: (2,1), (3,3) and (4,4).
pub fn jacobian_printed(p: &CovidParams, x: &[f64; 5]) -> Matrix {
    let [e, i, _, _, d] = *x;
    let dp = DerivedParams::new(p);
    let a = dp.a;
    let rows = [
        [-a * i + p.beta7 * d - p.mu, -a * e, 0.0, p.beta9, p.beta7 * e],
        [a * i + p.beta7 * d - p.mu, a * e - dp.alpha, 0.0, 0.0, 0.0],
        [0.0, p.beta2, -dp.beta_alt, p.beta4, 0.0],
        [0.0, p.beta8, p.beta3, p.beta8 - dp.gamma_c, 0.0],
        [-p.beta7 * d, p.beta6, p.beta5, 0.0, -p.beta7 * e],
    ];
    Matrix::from_rows(&rows).expect("5x5")
}

/// The printed linearisation at the disease-free point (with `E* = B/mu`).
/// Besides the slips of [`jacobian_printed`] its last row drops `beta6` and `beta5`.
pub fn jp0_printed(p: &CovidParams) -> Result<Matrix> {
    p.require_mu()?;
    let mut m = jacobian_printed(p, &[p.e0(), 0.0, 0.0, 0.0, 0.0]);
    m[(4, 1)] = 0.0;
    m[(4, 2)] = 0.0;
    Ok(m)
}

fn residual_of(p: &CovidParams, x: &[f64; 5]) -> f64 {
    rhs(p, x).iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn finish(p: &CovidParams, kind: EquilibriumKind, x: [f64; 5]) -> Result<Equilibrium> {
    let residual = residual_of(p, &x);
    let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(residual <= RESIDUAL_TOL * scale) {
        return Err(Error::Residual(format!(
            "{:?} equilibrium residual {:.3e} exceeds {:.1e} x {:.3}",
            kind, residual, RESIDUAL_TOL, scale
        )));
    }
    Ok(Equilibrium {
        kind,
        state: CovidState::from_array(x),
        feasible: x.iter().all(|v| *v > 0.0),
        residual,
    })
}

/// The disease-free equilibrium `(B/mu, 0, 0, 0, 0)`.
pub fn dfe(p: &CovidParams) -> Result<Equilibrium> {
    p.require_mu()?;
    finish(p, EquilibriumKind::Dfe, [p.e0(), 0.0, 0.0, 0.0, 0.0])
}

/// `E*` and the ratios `I*/H*`, `C*/H*`, `D*/H*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndemicRatios {
    pub e_star: f64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub gamma_hat: f64,
    /// `H*` denominator `[(beta1 - beta10) alpha_hat - beta7 gamma_hat] E* - beta9`
    pub h_denominator: f64,
}

pub fn endemic_ratios(p: &CovidParams) -> Result<EndemicRatios> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    if !(dp.a > 0.0) {
        return Err(Error::Infeasible(format!(
            "beta1 - beta10 = {} is not positive, so no endemic equilibrium exists",
            dp.a
        )));
    }
    let den = p.beta2 * p.beta3 + p.beta8 * dp.beta_c;
    if !(den > 0.0) {
        return Err(Error::Infeasible(
            "beta2 beta3 + beta8 (beta3 + beta5 + mu) vanishes".into(),
        ));
    }
    let e_star = dp.alpha / dp.a;
    if !(p.beta7 * e_star > 0.0) {
        return Err(Error::Infeasible("beta7 E* vanishes".into()));
    }
    let h_denominator = (dp.a * dp.alpha_hat - p.beta7 * dp.gamma_hat) * e_star - p.beta9;
    if h_denominator == 0.0 {
        return Err(Error::Infeasible("the H* denominator vanishes".into()));
    }
    Ok(EndemicRatios {
        e_star,
        alpha_hat: dp.alpha_hat,
        beta_hat: dp.beta_hat,
        gamma_hat: dp.gamma_hat,
        h_denominator,
    })
}

/// The endemic equilibrium `(E*, alpha_hat H*, beta_hat H*, H*, gamma_hat H*)`.
///
/// `E*` comes from the `I` equation. The `C` and `H` equations are linear in
/// `(I, C)` once divided by `H`, and their solution gives `alpha_hat` and
/// `beta_hat`; the `D` equation gives `gamma_hat`, and the `E` equation fixes `H*`.
pub fn endemic(p: &CovidParams) -> Result<Equilibrium> {
    let r = endemic_ratios(p)?;
    let h = (p.b - p.mu * r.e_star) / r.h_denominator;
    finish(
        p,
        EquilibriumKind::Endemic,
        [r.e_star, r.alpha_hat * h, r.beta_hat * h, h, r.gamma_hat * h],
    )
}

/// The printed numerator of `alpha_hat`, `beta3 beta4 + (beta4 + beta3 + mu)(beta5 + beta3 + mu)`,
/// over the same denominator.
pub fn alpha_hat_printed(p: &CovidParams) -> f64 {
    let bc = p.beta3 + p.beta5 + p.mu;
    (p.beta3 * p.beta4 + (p.beta4 + p.beta3 + p.mu) * bc) / (p.beta2 * p.beta3 + p.beta8 * bc)
}

/// Basic reproduction number `beta1 B / (alpha mu + beta10 B)`.
pub fn r0_reduced(p: &CovidParams) -> Result<f64> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    Ok(p.beta1 * p.b / (dp.alpha * p.mu + p.beta10 * p.b))
}

/// The 2x2 transmission and transition matrices on `(E, I)` at the disease-free point.
pub fn ngm_reduced(p: &CovidParams) -> Result<(Matrix, Matrix)> {
    p.require_mu()?;
    let e0 = p.e0();
    let alpha = DerivedParams::new(p).alpha;
    let f = Matrix::from_rows(&[[0.0, p.beta10 * e0], [0.0, p.beta1 * e0]])?;
    let v = Matrix::from_rows(&[[p.mu, p.beta1 * e0], [0.0, alpha + p.beta10 * e0]])?;
    Ok((f, v))
}

/// Spectral radius of the reduced next-generation matrix.
pub fn r0_reduced_numeric(p: &CovidParams) -> Result<f64> {
    let (f, v) = ngm_reduced(p)?;
    spectral_radius(&f.matmul(&inverse(&v)?)?)
}

/// Full next-generation decomposition at a state, with the printed closed
/// forms evaluated next to their numeric counterparts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NgmParts {
    pub f: Matrix,
    pub v: Matrix,
    pub det_v: f64,
    pub det_v_closed: f64,
    /// Printed `M11, M12, M21, M22`.
    pub minors_closed: [f64; 4],
    /// The same minors of `V`, computed by elimination.
    pub minors: [f64; 4],
    /// Printed `a, b, c, d`.
    pub block_closed: [f64; 4],
    /// Upper-left 2x2 block of `F V^-1`, row-major.
    pub block: [f64; 4],
    /// `(a + d)^2 - 4 (ad - bc)` from the printed block.
    pub delta: f64,
    /// `(a + d + sqrt(delta)) / 2`; NaN when `delta < 0`.
    pub r0_closed: f64,
    /// Spectral radius of `F V^-1`.
    pub r0: f64,
}

/// Transmission matrix `F` on all five compartments.
pub fn ngm_f(p: &CovidParams, x: &[f64; 5]) -> Matrix {
    let [e, i, _, _, d] = *x;
    let mut f = Matrix::zeros(5, 5);
    f[(0, 0)] = p.beta7 * d + p.beta10 * i;
    f[(0, 1)] = p.beta10 * e;
    f[(0, 4)] = p.beta7 * e;
    f[(1, 0)] = p.beta1 * i;
    f[(1, 1)] = p.beta1 * e;
    f
}

/// Transition matrix `V` on all five compartments.
pub fn ngm_v(p: &CovidParams, x: &[f64; 5]) -> Matrix {
    let [e, i, _, _, d] = *x;
    let rows = [
        [p.beta1 * i + p.mu, p.beta1 * e, 0.0, -p.beta9, 0.0],
        [
            p.beta10 * i,
            p.beta10 * e + p.beta8 + p.beta6 + p.beta2 + p.mu,
            0.0,
            0.0,
            0.0,
        ],
        [0.0, -p.beta2, p.beta3 + p.beta5 + p.mu, -p.beta4, 0.0],
        [0.0, -p.beta8, -p.beta3, p.beta9 + p.beta4 + p.mu, 0.0],
        [p.beta7 * d, -p.beta6, -p.beta5, 0.0, p.beta7 * e],
    ];
    Matrix::from_rows(&rows).expect("5x5")
}

fn minor(m: &Matrix, i: usize, j: usize) -> Result<f64> {
    let keep = |skip: usize| (0..m.rows()).filter(move |&k| k != skip).collect::<Vec<_>>();
    determinant(&m.submatrix(&keep(i), &keep(j)))
}

pub fn ngm_full(p: &CovidParams, x: &[f64; 5]) -> Result<NgmParts> {
    let [e, i, _, _, d] = *x;
    let f = ngm_f(p, x);
    let v = ngm_v(p, x);
    let v_inv = inverse(&v)?;
    let fv = f.matmul(&v_inv)?;
    let det_v = determinant(&v)?;

    let alpha_v = p.beta10 * e + p.beta8 + p.beta6 + p.beta2 + p.mu;
    let beta = p.beta3 + p.beta5 + p.mu;
    let gamma = p.beta9 + p.beta4 + p.mu;
    let core = beta * gamma - p.beta3 * p.beta4;
    let side = p.beta2 * p.beta3 + beta * p.beta8;
    let det_v_closed = p.beta7
        * e
        * ((p.beta1 * i + p.mu) * alpha_v * core - p.beta10 * i * p.beta1 * e * core + p.beta10 * i * p.beta9 * side);

    let m11 = alpha_v * p.beta7 * e * core;
    let m12 = p.beta1 * e * core - p.beta9 * side;
    let m21 = m12;
    let m22 = p.beta7 * e * (p.beta1 + p.mu) * core;
    let lead = p.beta7 * d + p.beta10 * i;
    let a = (lead * m11 + p.beta10 * e * m12) / det_v;
    let b = -(lead * m21 + p.beta10 * e * m22) / det_v;
    let c = -(p.beta1 * i * m11 + p.beta1 * e * m12) / det_v;
    let dd = (p.beta1 * i * m21 + p.beta1 * e * m22) / det_v;
    let delta = (a + dd).powi(2) - 4.0 * (a * dd - b * c);
    let r0_closed = if delta >= 0.0 {
        (a + dd + delta.sqrt()) / 2.0
    } else {
        f64::NAN
    };

    Ok(NgmParts {
        minors: [minor(&v, 0, 0)?, minor(&v, 0, 1)?, minor(&v, 1, 0)?, minor(&v, 1, 1)?],
        minors_closed: [m11, m12, m21, m22],
        block: [fv[(0, 0)], fv[(0, 1)], fv[(1, 0)], fv[(1, 1)]],
        block_closed: [a, b, c, dd],
        r0: spectral_radius(&fv)?,
        f,
        v,
        det_v,
        det_v_closed,
        delta,
        r0_closed,
    })
}

/// Determinant of the linearisation at the disease-free point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetJp0 {
    /// `-mu beta7 beta E* (2 beta8 a E* + alpha gamma + beta8 beta9 - beta8 alpha)`
    /// with `beta = beta2 + beta5 + mu`.
    pub closed: f64,
    /// `det` of [`jacobian_closed`] at `(B/mu, 0, 0, 0, 0)`.
    pub numeric: f64,
    /// `det` of [`jp0_printed`].
    pub numeric_printed: f64,
    /// `beta10 < beta1`
    pub beta10_below_beta1: bool,
    /// `2 beta8 a E* + alpha gamma + beta8 beta9 > beta8 alpha`
    pub sign_condition: bool,
}

pub fn det_jp0(p: &CovidParams) -> Result<DetJp0> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    let e = p.e0();
    let lhs = 2.0 * p.beta8 * dp.a * e + dp.alpha * dp.gamma_c + p.beta8 * p.beta9;
    let closed = -p.mu * p.beta7 * dp.beta_alt * e * (lhs - p.beta8 * dp.alpha);
    Ok(DetJp0 {
        closed,
        numeric: determinant(&jacobian_closed(p, &[e, 0.0, 0.0, 0.0, 0.0]))?,
        numeric_printed: determinant(&jp0_printed(p)?)?,
        beta10_below_beta1: p.beta10 < p.beta1,
        sign_condition: lhs > p.beta8 * dp.alpha,
    })
}

/// The splitting `J_p0 = M - E` of the printed disease-free linearisation and
/// the cubic factor of the characteristic polynomial of `M E^-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiCubic {
    pub u: f64,
    pub v: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub roots: CubicRoots,
    pub m: Matrix,
    pub e: Matrix,
    pub e_inv: Matrix,
    pub m_e_inv: Matrix,
    /// Coefficients 1..=5 of `det(lambda I - M E^-1)`.
    pub char_poly: Vec<f64>,
    /// `max |a_k - c_k|` over k = 1, 2, 3 and `|c_4|, |c_5|`.
    pub coefficient_gap: f64,
    /// Eigenvalues of `M E^-1` within `1e-8 (1 + ||M E^-1||)` of zero.
    pub zero_eigenvalues: usize,
}

pub fn chi_cubic(p: &CovidParams) -> Result<ChiCubic> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    let e0 = p.e0();
    let big_a = dp.a * e0;
    let (beta, gamma) = (dp.beta_alt, dp.gamma_c);
    if (dp.alpha - big_a).abs() <= 1e-12 * dp.alpha.abs().max(big_a.abs()).max(1.0) {
        return Err(Error::Precondition(format!(
            "alpha = (beta1 - beta10) B/mu = {} makes the splitting degenerate",
            big_a
        )));
    }
    let u = -1.0 / (dp.alpha - big_a);
    let v = 1.0 / (dp.alpha - big_a);
    let av = big_a * v;
    let a1 = p.beta9 * p.beta8 / gamma * u * (av + 1.0) - av - p.beta8 / gamma;
    let a2 = p.beta8 / gamma * av - p.beta3 * p.beta4 / (beta * gamma);
    let a3 = p.beta3 * p.beta4 / (beta * gamma) * av;

    let m = Matrix::from_rows(&[
        [0.0, 0.0, 0.0, p.beta9, p.beta7 * e0],
        [0.0, big_a, 0.0, 0.0, 0.0],
        [0.0, p.beta2, 0.0, p.beta4, 0.0],
        [0.0, p.beta8, p.beta3, p.beta8, 0.0],
        [0.0; 5],
    ])?;
    let e = Matrix::from_rows(&[
        [p.mu, big_a, 0.0, 0.0, 0.0],
        [p.mu, dp.alpha, 0.0, 0.0, 0.0],
        [0.0, 0.0, beta, 0.0, 0.0],
        [0.0, 0.0, 0.0, gamma, 0.0],
        [0.0, 0.0, 0.0, 0.0, p.beta7 * e0],
    ])?;
    let e_inv = inverse(&e)?;
    let m_e_inv = m.matmul(&e_inv)?;
    let cp = char_poly(&m_e_inv)?;
    let coefficient_gap = [
        (a1 - cp[1]).abs(),
        (a2 - cp[2]).abs(),
        (a3 - cp[3]).abs(),
        cp[4].abs(),
        cp[5].abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let zero_tol = 1e-8 * (1.0 + m_e_inv.norm_inf());
    let zero_eigenvalues = eigenvalues(&m_e_inv)?
        .values
        .iter()
        .filter(|z| z.norm() <= zero_tol)
        .count();

    Ok(ChiCubic {
        u,
        v,
        a1,
        a2,
        a3,
        roots: cardano(1.0, a1, a2, a3)?,
        m,
        e,
        e_inv,
        m_e_inv,
        char_poly: cp[1..].to_vec(),
        coefficient_gap,
        zero_eigenvalues,
    })
}

/// The printed closed form of `E^-1`.
pub fn e_inv_printed(p: &CovidParams) -> Result<Matrix> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    let e0 = p.e0();
    let big_a = dp.a * e0;
    let den = dp.alpha - big_a;
    let mut m = Matrix::zeros(5, 5);
    m[(0, 0)] = dp.alpha / (p.mu * den);
    m[(0, 1)] = -big_a / (p.mu * den);
    m[(1, 0)] = -1.0 / den;
    m[(1, 1)] = 1.0 / den;
    m[(2, 2)] = 1.0 / dp.beta_alt;
    m[(3, 3)] = 1.0 / dp.gamma_c;
    m[(4, 4)] = 1.0 / (p.beta7 * e0);
    Ok(m)
}

/// The printed closed form of `M E^-1`.
pub fn m_e_inv_printed(p: &CovidParams) -> Result<Matrix> {
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    let big_a = dp.a * p.e0();
    let (u, v) = (-1.0 / (dp.alpha - big_a), 1.0 / (dp.alpha - big_a));
    let (beta, gamma) = (dp.beta_alt, dp.gamma_c);
    Matrix::from_rows(&[
        [0.0, 0.0, 0.0, p.beta9 / gamma, 1.0],
        [big_a * u, big_a * v, 0.0, 0.0, 0.0],
        [p.beta2 * u, p.beta2 * v, 0.0, p.beta4 / gamma, 0.0],
        [p.beta8 * u, p.beta8 * v, p.beta3 / beta, p.beta8 / gamma, 0.0],
        [0.0; 5],
    ])
}

/// Li-Wang verdicts for one equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumStability {
    pub equilibrium: Equilibrium,
    pub exact: Verdict,
    pub sufficient: Vec<Verdict>,
}

fn assess(p: &CovidParams, eq: Equilibrium) -> Result<EquilibriumStability> {
    let j = jacobian_closed(p, &eq.state.to_array());
    let exact = li_wang_exact(&j)?;
    let sufficient = MeasureKind::ALL
        .iter()
        .map(|&k| li_wang_sufficient(&j, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquilibriumStability {
        equilibrium: eq,
        exact,
        sufficient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVerdict {
    DfeStable,
    DfeUnstable,
    Threshold,
}

/// The extinction conditions: either one guarantees that the disease-free
/// point is the only equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniquenessConditions {
    /// `beta1 < beta10`
    pub cond_i: bool,
    /// `(beta2 + beta6 + beta8 + mu) alpha_hat < beta5 beta_hat + beta9`; `None`
    /// when the ratios are undefined.
    pub cond_ii: Option<bool>,
}

/// The column-dominance theorem for the second compound at the disease-free
/// point, checked as stated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompoundDominance {
    pub det: DetJp0,
    /// `beta10 < beta1` together with the sign condition.
    pub premise_i: bool,
    /// `beta3 < beta2 + beta5 + mu`
    pub cond_a: bool,
    /// `2 (beta1 - beta10) B/mu < beta6 + mu`
    pub cond_b: bool,
    /// `beta9 < beta7 B/mu`
    pub cond_c: bool,
    /// `beta8 + beta7 B/mu < mu`
    pub cond_d: bool,
    pub hypotheses_hold: bool,
    /// Strict column dominance of the compound of [`jacobian_closed`].
    pub columns_dominant: bool,
    /// Lozinskii 1-measure of that compound; negative is what stability needs.
    pub mu1: f64,
    /// The same two checks on the compound of [`jp0_printed`].
    pub columns_dominant_printed: bool,
    pub mu1_printed: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub params: CovidParams,
    pub derived: DerivedParams,
    pub r0_reduced: f64,
    pub r0_full: f64,
    pub threshold: ThresholdVerdict,
    pub uniqueness: UniquenessConditions,
    pub compound_dominance: CompoundDominance,
    pub dfe: EquilibriumStability,
    pub endemic: Option<EquilibriumStability>,
    /// Why `endemic` is absent, when it is.
    pub endemic_note: Option<String>,
}

pub fn stability_report(p: &CovidParams) -> Result<StabilityReport> {
    p.validate()?;
    p.require_mu()?;
    let dp = DerivedParams::new(p);
    let r0 = r0_reduced(p)?;
    let d0 = dfe(p)?;
    let r0_full = ngm_full(p, &d0.state.to_array())?.r0;
    let threshold = if r0 < 1.0 {
        ThresholdVerdict::DfeStable
    } else if r0 > 1.0 {
        ThresholdVerdict::DfeUnstable
    } else {
        ThresholdVerdict::Threshold
    };

    let cond_ii = if dp.alpha_hat.is_finite() && dp.beta_hat.is_finite() {
        Some(dp.alpha * dp.alpha_hat < p.beta5 * dp.beta_hat + p.beta9)
    } else {
        None
    };
    let uniqueness = UniquenessConditions {
        cond_i: p.beta1 < p.beta10,
        cond_ii,
    };

    let det = det_jp0(p)?;
    let e0 = p.e0();
    let cond_a = p.beta3 < dp.beta_alt;
    let cond_b = 2.0 * dp.a * e0 < p.beta6 + p.mu;
    let cond_c = p.beta9 < p.beta7 * e0;
    let cond_d = p.beta8 + p.beta7 * e0 < p.mu;
    let hypotheses_hold = cond_a && cond_b && cond_c && cond_d;
    let j2 = add_compound(&jacobian_closed(p, &d0.state.to_array()), 2)?;
    let j2p = add_compound(&jp0_printed(p)?, 2)?;
    let failed: Vec<&str> = [("a", cond_a), ("b", cond_b), ("c", cond_c), ("d", cond_d)]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    let note = if hypotheses_hold {
        "all four hypotheses hold".to_string()
    } else if !cond_d && p.beta7 * e0 >= p.mu {
        format!(
            "hypotheses ({}) fail; (d) cannot hold here because beta8 + beta7 B/mu = {} >= mu = {}",
            failed.join(", "),
            p.beta8 + p.beta7 * e0,
            p.mu
        )
    } else {
        format!("hypotheses ({}) fail", failed.join(", "))
    };
    let compound_dominance = CompoundDominance {
        premise_i: det.beta10_below_beta1 && det.sign_condition,
        det,
        cond_a,
        cond_b,
        cond_c,
        cond_d,
        hypotheses_hold,
        columns_dominant: dominance(&j2, Axis::Cols),
        mu1: measure(&j2, MeasureKind::One)?,
        columns_dominant_printed: dominance(&j2p, Axis::Cols),
        mu1_printed: measure(&j2p, MeasureKind::One)?,
        note,
    };

    let dfe_stab = assess(p, d0)?;
    let (endemic_stab, endemic_note) = match endemic(p) {
        Ok(eq) => (Some(assess(p, eq)?), None),
        Err(e @ Error::Infeasible(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };

    Ok(StabilityReport {
        params: *p,
        derived: dp,
        r0_reduced: r0,
        r0_full,
        threshold,
        uniqueness,
        compound_dominance,
        dfe: dfe_stab,
        endemic: endemic_stab,
        endemic_note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::Outcome;

    fn table() -> CovidParams {
        CovidParams::table(0.1)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rhs_at_ones() {
        let f = rhs(&table(), &[1.0; 5]);
        let want = [1.04, -0.56, 0.25, -0.26, 0.29];
        for k in 0..5 {
            assert!(close(f[k], want[k], 1e-14), "{} {}", k, f[k]);
        }
    }

    #[test]
    fn rhs_decoupled_when_rates_vanish() {
        let mut p = CovidParams::table(0.0);
        for name in &PARAM_NAMES[2..] {
            p = p.with(name, 0.0).unwrap();
        }
        let f = rhs(&p, &[2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(f, [0.8 - 0.02, -0.03, -0.04, -0.05, 0.0]);
    }

    #[test]
    fn sum_identity() {
        let p = table();
        assert_eq!(sum_rate(&p, &[0.0; 5]), p.b);
        assert!(close(sum_rate(&p, &[0.0, 0.0, 0.0, 0.0, 7.0]), p.b, 1e-15));
        assert!(close(sum_rate(&p, &[1.0; 5]), 0.76, 1e-14));
        assert!(close(sum_rate_printed(&p, &[1.0; 5]), 0.75, 1e-14));
    }

    #[test]
    fn dfe_values() {
        let eq = dfe(&table()).unwrap();
        assert_eq!(eq.state.to_array(), [80.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(eq.residual < 1e-12);
        assert!(!eq.feasible);
        assert!(dfe(&table().with("mu", 0.0).unwrap()).is_err());
    }

    #[test]
    fn endemic_values() {
        let eq = endemic(&table()).unwrap();
        let want = [
            2.244444444444444,
            26.128555135362344,
            29.573155651599834,
            22.053844768593624,
            22.77807003668654,
        ];
        for (g, w) in eq.state.to_array().iter().zip(want) {
            assert!(close(*g, w, 1e-10), "{} vs {}", g, w);
        }
        assert!(eq.feasible);
        assert!(eq.residual < 1e-10);
        let r = endemic_ratios(&table()).unwrap();
        assert!(close(r.alpha_hat, 1.1847619047619045, 1e-13));
        assert!(close(r.beta_hat, 1.3409523809523811, 1e-13));
        assert!(close(r.gamma_hat, 1.0328389573651242, 1e-13));
    }

    #[test]
    fn endemic_requires_beta1_above_beta10() {
        let p = table().with("beta10", 0.6).unwrap();
        assert!(matches!(endemic(&p), Err(Error::Infeasible(_))));
    }

    #[test]
    fn jacobian_fd_matches_closed_at_dfe() {
        let p = table();
        let x = [80.0, 0.0, 0.0, 0.0, 0.0];
        let fd = jacobian_fd(&p, &x, FD_STEP).unwrap();
        assert!(close(fd[(0, 1)], -36.0, 1e-6));
        assert!(fd.max_abs_diff(&jacobian_closed(&p, &x)) < 1e-6);
        assert!(jacobian_fd(&p, &x, 1e-2).is_err());
    }

    #[test]
    fn r0_reduced_value() {
        let p = table();
        let r = r0_reduced(&p).unwrap();
        assert!(close(r, 0.44 / 0.0901, 1e-12));
        assert!(close(r, r0_reduced_numeric(&p).unwrap(), 1e-10));
        assert_eq!(r0_reduced(&p.with("beta1", 0.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn full_ngm_at_dfe_reduces() {
        let p = table();
        let parts = ngm_full(&p, &[80.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(parts.r0, r0_reduced(&p).unwrap(), 1e-10));
        let dp = DerivedParams::new(&p);
        let alpha_v = dp.alpha + p.beta10 * 80.0;
        let want = p.beta7 * 80.0 * p.mu * alpha_v * (dp.beta_c * dp.gamma_c - p.beta3 * p.beta4);
        assert!(close(parts.det_v, want, 1e-9 * want.abs()));
    }

    #[test]
    fn det_jp0_beta8_zero_collapses() {
        let p = table().with("beta8", 0.0).unwrap();
        let d = det_jp0(&p).unwrap();
        let dp = DerivedParams::new(&p);
        let want = -p.mu * p.beta7 * dp.beta_alt * p.e0() * dp.alpha * dp.gamma_c;
        assert!(close(d.closed, want, 1e-12 * want.abs()));
    }

    #[test]
    fn chi_cubic_structure() {
        let c = chi_cubic(&table()).unwrap();
        assert!(close(c.v, -0.028579599, 1e-8));
        assert!(close(36.0 * c.v, -1.0288654, 1e-6));
        assert!(c.zero_eigenvalues >= 2);
        assert!(c.e_inv.max_abs_diff(&e_inv_printed(&table()).unwrap()) < 1e-12);
        assert!(c.m_e_inv.max_abs_diff(&m_e_inv_printed(&table()).unwrap()) < 1e-12);
    }

    #[test]
    fn chi_cubic_without_beta8_beta9() {
        let p = table().with("beta8", 0.0).unwrap().with("beta9", 0.0).unwrap();
        let c = chi_cubic(&p).unwrap();
        let dp = DerivedParams::new(&p);
        let av = dp.a * p.e0() * c.v;
        let k = p.beta3 * p.beta4 / (dp.beta_alt * dp.gamma_c);
        assert!(close(c.a1, -av, 1e-14));
        assert!(close(c.a2, -k, 1e-14));
        assert!(close(c.a3, k * av, 1e-14));
    }

    #[test]
    fn report_at_table_values() {
        let r = stability_report(&table()).unwrap();
        assert_eq!(r.threshold, ThresholdVerdict::DfeUnstable);
        assert_eq!(r.dfe.exact.outcome, Outcome::Unstable);
        assert!(!r.compound_dominance.cond_d);
        assert!(!r.compound_dominance.hypotheses_hold);
        assert!(r.endemic.is_some());
    }

    #[test]
    fn report_below_threshold() {
        let p = table().with("beta1", 0.01).unwrap().with("beta10", 0.005).unwrap();
        let r = stability_report(&p).unwrap();
        assert_eq!(r.threshold, ThresholdVerdict::DfeStable);
        assert_eq!(r.dfe.exact.outcome, Outcome::Stable);
    }

    #[test]
    fn params_json_round_trip() {
        let text = serde_json::to_string(&table()).unwrap();
        assert!(text.contains("\"B\""));
        assert_eq!(CovidParams::from_json(&text).unwrap(), table());
        assert!(CovidParams::from_json("{\"B\": 1}").is_err());
        let extra = text.replace('}', ",\"beta11\":1}");
        assert!(CovidParams::from_json(&extra).is_err());
    }
}
