//! Three-compartment example: susceptible `S` and two infective stages `I1`, `I2`.

use serde::{Deserialize, Serialize};

use crate::compound::add_compound;
use crate::covid::EquilibriumKind;
use crate::error::{Error, Result};
use crate::lozinskii::{measure, MeasureKind};
use crate::matrix::{determinant, eigenvalues, inverse, spectral_radius, Matrix};
use crate::stability::{dominance, li_wang_exact, Axis, Verdict};

pub const PARAM_NAMES: [&str; 6] = ["Lambda", "beta1", "beta2", "mu", "gamma", "d"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeirParams {
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub mu: f64,
    pub gamma: f64,
    pub d: f64,
}

impl SeirParams {
    /// Parameters used for the R0-versus-mu figure, at the given `mu`.
    pub fn figure(mu: f64) -> Self {
        SeirParams {
            lambda: 0.7,
            beta1: 0.3,
            beta2: 0.8,
            mu,
            gamma: 0.1,
            d: 0.04,
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.lambda, self.beta1, self.beta2, self.mu, self.gamma, self.d]
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        let i = index_of(name)?;
        Ok(self.values()[i])
    }

    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let mut c = *self;
        match index_of(name)? {
            0 => c.lambda = value,
            1 => c.beta1 = value,
            2 => c.beta2 = value,
            3 => c.mu = value,
            4 => c.gamma = value,
            _ => c.d = value,
        }
        Ok(c)
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

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SeirParams =
            serde_json::from_str(text).map_err(|e| Error::Argument(format!("bad parameter file: {}", e)))?;
        p.validate()?;
        Ok(p)
    }

    fn require_rates(&self) -> Result<()> {
        if self.mu > 0.0 && self.mu + self.d > 0.0 {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "mu = {} must be positive for equilibrium work",
                self.mu
            )))
        }
    }

    /// `gamma / (mu + d)`, the ratio `I2 / I1` at any equilibrium with `I1 != 0`.
    pub fn delta(&self) -> f64 {
        self.gamma / (self.mu + self.d)
    }
}

fn index_of(name: &str) -> Result<usize> {
    PARAM_NAMES.iter().position(|n| *n == name).ok_or_else(|| {
        Error::Argument(format!(
            "unknown parameter {:?}; expected one of {}",
            name,
            PARAM_NAMES.join(", ")
        ))
    })
}

pub fn rhs3(p: &SeirParams, x: &[f64; 3]) -> [f64; 3] {
    let [s, i1, i2] = *x;
    let force = p.beta1 * i1 + p.beta2 * i2;
    [
        p.lambda - force * s - p.mu * s,
        force * s - (p.mu + p.gamma) * i1,
        p.gamma * i1 - (p.mu + p.d) * i2,
    ]
}

/// Analytic Jacobian; the printed one agrees with it entry for entry.
pub fn jacobian3(p: &SeirParams, x: &[f64; 3]) -> Matrix {
    let [s, i1, i2] = *x;
    let force = p.beta1 * i1 + p.beta2 * i2;
    Matrix::from_rows(&[
        [-(force + p.mu), -p.beta1 * s, -p.beta2 * s],
        [force, p.beta1 * s - p.mu - p.gamma, p.beta2 * s],
        [0.0, p.gamma, -p.mu - p.d],
    ])
    .expect("3x3")
}

pub fn jacobian3_fd(p: &SeirParams, x: &[f64; 3], h: f64) -> Result<Matrix> {
    if !(1e-8..=1e-4).contains(&h) {
        return Err(Error::Argument(format!(
            "finite-difference step {} outside [1e-8, 1e-4]",
            h
        )));
    }
    let mut jac = Matrix::zeros(3, 3);
    for j in 0..3 {
        let (mut up, mut down) = (*x, *x);
        up[j] += h;
        down[j] -= h;
        let (fu, fd) = (rhs3(p, &up), rhs3(p, &down));
        for i in 0..3 {
            jac[(i, j)] = (fu[i] - fd[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeirState {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
}

impl SeirState {
    pub fn to_array(&self) -> [f64; 3] {
        [self.s, self.i1, self.i2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeirEquilibrium {
    pub kind: EquilibriumKind,
    pub state: SeirState,
    pub feasible: bool,
    pub residual: f64,
}

fn finish3(p: &SeirParams, kind: EquilibriumKind, x: [f64; 3]) -> Result<SeirEquilibrium> {
    let residual = rhs3(p, &x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(residual <= crate::covid::RESIDUAL_TOL * scale) {
        return Err(Error::Residual(format!(
            "{:?} equilibrium residual {:.3e}",
            kind, residual
        )));
    }
    Ok(SeirEquilibrium {
        kind,
        state: SeirState {
            s: x[0],
            i1: x[1],
            i2: x[2],
        },
        feasible: x.iter().all(|v| *v > 0.0),
        residual,
    })
}

pub fn dfe3(p: &SeirParams) -> Result<SeirEquilibrium> {
    p.require_rates()?;
    finish3(p, EquilibriumKind::Dfe, [p.lambda / p.mu, 0.0, 0.0])
}

/// Endemic point `S* = (mu + gamma)/(beta1 + beta2 delta)`,
/// `I1* = (Lambda - mu S*)/(mu + gamma)`, `I2* = delta I1*`.
///
/// `I1*` comes from adding the `S` and `I1` equations, which leaves
/// `Lambda - mu S - (mu + gamma) I1 = 0`. Feasible exactly when
/// `Lambda (beta1 + beta2 delta) > mu (mu + gamma)`.
pub fn endemic3(p: &SeirParams) -> Result<SeirEquilibrium> {
    p.require_rates()?;
    let delta = p.delta();
    let den = p.beta1 + p.beta2 * delta;
    if !(den > 0.0) {
        return Err(Error::Infeasible(
            "beta1 + beta2 delta vanishes, so S* is undefined".into(),
        ));
    }
    let s = (p.mu + p.gamma) / den;
    let i1 = (p.lambda - p.mu * s) / (p.mu + p.gamma);
    finish3(p, EquilibriumKind::Endemic, [s, i1, delta * i1])
}

/// The printed `I1*`, with `mu + d` in the denominator.
pub fn i1_star_printed(p: &SeirParams) -> f64 {
    let delta = p.delta();
    let s = (p.mu + p.gamma) / (p.beta1 + p.beta2 * delta);
    (p.lambda - p.mu * s) / (p.mu + p.d)
}

/// `Lambda (beta1 (mu + d) + beta2 gamma) / (mu (mu + d)(mu + gamma))`.
pub fn r0_seir(p: &SeirParams) -> Result<f64> {
    p.require_rates()?;
    Ok(p.lambda * (p.beta1 * (p.mu + p.d) + p.beta2 * p.gamma) / (p.mu * (p.mu + p.d) * (p.mu + p.gamma)))
}

/// `F` and `V` on `(I1, I2)` at the disease-free point, with the sign
/// convention under which R0 is the spectral radius of `-F V^-1`.
pub fn ngm3(p: &SeirParams) -> Result<(Matrix, Matrix)> {
    p.require_rates()?;
    let s0 = p.lambda / p.mu;
    let f = Matrix::from_rows(&[[p.beta1 * s0, p.beta2 * s0], [0.0, 0.0]])?;
    let v = Matrix::from_rows(&[[-p.mu - p.gamma, 0.0], [p.gamma, -p.mu - p.d]])?;
    Ok((f, v))
}

pub fn r0_seir_numeric(p: &SeirParams) -> Result<f64> {
    let (f, v) = ngm3(p)?;
    spectral_radius(&f.matmul(&inverse(&v)?)?.scale(-1.0))
}

/// The printed inverse of `V`.
pub fn v_inv_printed(p: &SeirParams) -> Matrix {
    let (a, b) = (p.mu + p.gamma, p.mu + p.d);
    Matrix::from_rows(&[[-1.0 / a, 0.0], [-p.gamma / (b * a), -1.0 / b]]).expect("2x2")
}

/// The printed second compound of the Jacobian at the disease-free point.
/// Its (3,3) entry lacks the `beta1 Lambda / mu` term.
pub fn compound_dfe_printed(p: &SeirParams) -> Matrix {
    let k1 = p.beta1 * p.lambda / p.mu;
    let k2 = p.beta2 * p.lambda / p.mu;
    Matrix::from_rows(&[
        [k1 - 2.0 * p.mu - p.gamma, k2, k2],
        [p.gamma, -2.0 * p.mu - p.d, -k1],
        [0.0, 0.0, -2.0 * p.mu - p.gamma - p.d],
    ])
    .expect("3x3")
}

/// The printed second compound at an arbitrary point `(S, I1, I2)`.
pub fn compound_printed(p: &SeirParams, x: &[f64; 3]) -> Matrix {
    let [s, i1, i2] = *x;
    let force = p.beta1 * i1 + p.beta2 * i2;
    Matrix::from_rows(&[
        [-force + p.beta1 * s - p.gamma - 2.0 * p.mu, p.beta2 * s, p.beta2 * s],
        [p.gamma, -force - 2.0 * p.mu - p.d, -p.beta1 * s],
        [0.0, force, p.beta1 * s - p.d - p.gamma - 2.0 * p.mu],
    ])
    .expect("3x3")
}

/// The printed transformed compound `P J^[2] P^-1` with `P = diag(I2*, I1*, S*)`.
pub fn transformed_printed(p: &SeirParams, x: &[f64; 3]) -> Matrix {
    let [s, i1, i2] = *x;
    let force = p.beta1 * i1 + p.beta2 * i2;
    Matrix::from_rows(&[
        [
            -force + p.beta1 * s - p.gamma - 2.0 * p.mu,
            p.beta2 * s * i2 / i1,
            p.beta2 * s * i2 / s,
        ],
        [p.gamma * i1 / i2, -force - 2.0 * p.mu - p.d, -p.beta1 * s * i1 / s],
        [0.0, force * s / i1, p.beta1 * s - p.d - p.gamma - 2.0 * p.mu],
    ])
    .expect("3x3")
}

/// The three sufficient conditions for stability of the endemic point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeirConditions {
    /// `beta2 < gamma / delta^2`
    pub cond1: bool,
    /// left-hand side of the second condition, evaluated as printed
    pub cond2_lhs: f64,
    /// `d + gamma + 2 mu`
    pub cond2_rhs: f64,
    pub cond2: bool,
    /// `beta2 delta Lambda + mu (gamma + mu) < beta1 Lambda`
    pub cond3: bool,
}

impl SeirConditions {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

pub fn seir_conditions(p: &SeirParams) -> SeirConditions {
    let delta = p.delta();
    let k = p.beta1 + p.beta2 * delta;
    let cond2_lhs =
        (p.mu + p.gamma) * (p.mu + p.d) * k / (p.lambda * k - p.mu * (p.mu + p.gamma)) + p.beta1 * (p.mu + p.gamma) / k;
    let cond2_rhs = p.d + p.gamma + 2.0 * p.mu;
    SeirConditions {
        cond1: p.beta2 < p.gamma / (delta * delta),
        cond2_lhs,
        cond2_rhs,
        cond2: cond2_lhs < cond2_rhs,
        cond3: p.beta2 * delta * p.lambda + p.mu * (p.gamma + p.mu) < p.beta1 * p.lambda,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeirStability {
    pub params: SeirParams,
    pub delta: f64,
    pub r0: f64,
    pub endemic: SeirEquilibrium,
    pub jacobian: Matrix,
    /// `max |J - J_fd|` at the endemic point.
    pub jacobian_fd_gap: f64,
    pub compound: Matrix,
    /// `max |printed J^[2] - add_compound(J, 2)|` at the endemic point.
    pub compound_printed_gap: f64,
    /// `P J^[2] P^-1` with `P = diag(I2*, I1*, S*)`.
    pub transformed: Matrix,
    /// Largest gap between the sorted spectra of `J^[2]` and the transformed matrix.
    pub similarity_gap: f64,
    pub conditions: SeirConditions,
    /// `a_ii + sum_{j != i} |a_ij|` for each row of the transformed matrix.
    pub row_margins: [f64; 3],
    /// Negative diagonal and every row margin negative.
    pub row_dominant: bool,
    /// Strict row dominance in absolute value, without the sign requirement.
    pub row_dominant_abs: bool,
    pub mu_inf: f64,
    pub det: f64,
    /// `det J < 0`, which the third condition is said to imply.
    pub det_negative: bool,
    /// False when the third condition holds but the determinant is not negative.
    pub det_claim_consistent: bool,
    pub exact: Verdict,
    pub dfe_exact: Verdict,
}

pub fn seir_stability(p: &SeirParams) -> Result<SeirStability> {
    p.validate()?;
    let eq = endemic3(p)?;
    if !eq.feasible {
        return Err(Error::Infeasible(format!(
            "the endemic point {:?} has a non-positive component (R0 <= 1)",
            eq.state.to_array()
        )));
    }
    let x = eq.state.to_array();
    let j = jacobian3(p, &x);
    let jacobian_fd_gap = j.max_abs_diff(&jacobian3_fd(p, &x, crate::covid::FD_STEP)?);
    let compound = add_compound(&j, 2)?;
    let compound_printed_gap = compound.max_abs_diff(&compound_printed(p, &x));
    let pdiag = [x[2], x[1], x[0]];
    let transformed = Matrix::from_fn(3, 3, |r, c| pdiag[r] * compound[(r, c)] / pdiag[c]);

    let s1 = eigenvalues(&compound)?.sorted();
    let s2 = eigenvalues(&transformed)?.sorted();
    let similarity_gap = s1.iter().zip(&s2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);

    let row_margins: [f64; 3] = std::array::from_fn(|r| {
        transformed[(r, r)]
            + (0..3)
                .filter(|&c| c != r)
                .map(|c| transformed[(r, c)].abs())
                .sum::<f64>()
    });
    let row_dominant = (0..3).all(|r| transformed[(r, r)] < 0.0) && row_margins.iter().all(|m| *m < 0.0);
    let conditions = seir_conditions(p);
    let det = determinant(&j)?;
    let dfe = dfe3(p)?;
    Ok(SeirStability {
        params: *p,
        delta: p.delta(),
        r0: r0_seir(p)?,
        jacobian_fd_gap,
        compound_printed_gap,
        similarity_gap,
        row_margins,
        row_dominant,
        row_dominant_abs: dominance(&transformed, Axis::Rows),
        mu_inf: measure(&transformed, MeasureKind::Inf)?,
        det,
        det_negative: det < 0.0,
        det_claim_consistent: !conditions.cond3 || det < 0.0,
        exact: li_wang_exact(&j)?,
        dfe_exact: li_wang_exact(&jacobian3(p, &dfe.state.to_array()))?,
        conditions,
        compound,
        transformed,
        jacobian: j,
        endemic: eq,
    })
}
