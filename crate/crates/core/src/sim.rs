//! Fixed-step RK4 integration and trajectory audits.

use serde::Serialize;

use crate::covid::{rhs, sum_rate_identity, CovidParams};
use crate::error::{Error, Result};
use crate::matrix::format_number;

/// Largest accepted step, in days.
pub const MAX_DT: f64 = 0.1;

/// Components below this count as a positivity violation.
pub const POSITIVITY_TOL: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Compartment names, used as CSV column headers after `t`.
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.states.last().map(|s| s.as_slice())
    }

    /// Header `t,<labels>` followed by one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            out.push_str(&format_number(*t));
            for v in x {
                out.push(',');
                out.push_str(&format_number(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Trajectory> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Argument("empty trajectory CSV".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t") || cols.len() < 2 {
            return Err(Error::Argument(format!(
                "trajectory header must start with t, got {:?}",
                header
            )));
        }
        let labels: Vec<String> = cols[1..].iter().map(|s| s.to_string()).collect();
        let (mut times, mut states) = (Vec::new(), Vec::new());
        for (k, line) in lines.enumerate() {
            let vals = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Argument(format!("row {}: {}", k + 1, e)))?;
            if vals.len() != cols.len() {
                return Err(Error::Dimension(format!(
                    "row {} has {} fields, expected {}",
                    k + 1,
                    vals.len(),
                    cols.len()
                )));
            }
            times.push(vals[0]);
            states.push(vals[1..].to_vec());
        }
        Ok(Trajectory { labels, times, states })
    }
}

fn axpy<const N: usize>(x: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| x[i] + a * k[i])
}

/// One classical RK4 step.
pub fn rk4_step<const N: usize>(f: &impl Fn(&[f64; N]) -> [f64; N], x: &[f64; N], dt: f64) -> [f64; N] {
    let k1 = f(x);
    let k2 = f(&axpy(x, dt / 2.0, &k1));
    let k3 = f(&axpy(x, dt / 2.0, &k2));
    let k4 = f(&axpy(x, dt, &k3));
    std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrate `x' = f(x)` from `x0` with fixed step `dt` in `(0, 0.1]`.
///
/// Samples are taken at `t_k = k dt` for `k = 0..=n` with
/// `n = ceil(t_end / dt)`, so the final time is the first grid point at or
/// beyond `t_end`.
pub fn integrate<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    labels: &[&str],
    x0: [f64; N],
    dt: f64,
    t_end: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::Argument(format!("step dt = {} must lie in (0, {}]", dt, MAX_DT)));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Argument(format!("horizon t_end = {} must be positive", t_end)));
    }
    if labels.len() != N {
        return Err(Error::Dimension(format!(
            "{} labels for a {}-dimensional state",
            labels.len(),
            N
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument(format!("initial state {:?} is not finite", x0)));
    }
    // the small slack keeps t_end = 10, dt = 0.01 at 1000 steps
    let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0;
    times.push(0.0);
    states.push(x.to_vec());
    for k in 1..=steps {
        x = rk4_step(&f, &x, dt);
        let t = k as f64 * dt;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        times.push(t);
        states.push(x.to_vec());
    }
    Ok(Trajectory {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        times,
        states,
    })
}

pub const COVID_LABELS: [&str; 5] = ["E", "I", "C", "H", "D"];
pub const SEIR_LABELS: [&str; 3] = ["S", "I1", "I2"];

pub fn simulate_covid(p: &CovidParams, x0: [f64; 5], dt: f64, t_end: f64) -> Result<Trajectory> {
    integrate(|x| rhs(p, x), &COVID_LABELS, x0, dt, t_end)
}

pub fn simulate_seir(p: &crate::seir::SeirParams, x0: [f64; 3], dt: f64, t_end: f64) -> Result<Trajectory> {
    integrate(|x| crate::seir::rhs3(p, x), &SEIR_LABELS, x0, dt, t_end)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityViolation {
    pub t: f64,
    pub compartment: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceAudit {
    pub min_component: f64,
    pub min_compartment: String,
    pub first_violation: Option<PositivityViolation>,
    /// `B / mu`
    pub region_bound: f64,
    pub starts_inside: bool,
    /// Some sample after a sample outside the region lies inside it.
    pub entered_region: bool,
    /// Some sample after a sample inside the region lies outside it.
    pub exited_region: bool,
    pub first_exit_time: Option<f64>,
    pub max_total: f64,
    /// `max |sum_i rhs_i(x) - (B - mu (E + I + C + H))|` over the samples.
    pub max_sum_residual: f64,
}

/// Positivity and invariant-region audit of a trajectory of the five-compartment model.
pub fn invariance_audit(traj: &Trajectory, p: &CovidParams) -> Result<InvarianceAudit> {
    if traj.labels.len() != 5 || traj.states.iter().any(|s| s.len() != 5) {
        return Err(Error::Dimension(
            "the invariance audit needs a five-compartment trajectory".into(),
        ));
    }
    if traj.is_empty() {
        return Err(Error::Argument("empty trajectory".into()));
    }
    let bound = p.b / p.mu;
    let inside = |x: &[f64]| x.iter().sum::<f64>() <= bound * (1.0 + 1e-12);
    let mut audit = InvarianceAudit {
        min_component: f64::INFINITY,
        min_compartment: String::new(),
        first_violation: None,
        region_bound: bound,
        starts_inside: inside(&traj.states[0]),
        entered_region: false,
        exited_region: false,
        first_exit_time: None,
        max_total: f64::NEG_INFINITY,
        max_sum_residual: 0.0,
    };
    let mut was_inside = audit.starts_inside;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        for (k, v) in x.iter().enumerate() {
            if *v < audit.min_component {
                audit.min_component = *v;
                audit.min_compartment = traj.labels[k].clone();
            }
            if *v < POSITIVITY_TOL && audit.first_violation.is_none() {
                audit.first_violation = Some(PositivityViolation {
                    t: *t,
                    compartment: traj.labels[k].clone(),
                    value: *v,
                });
            }
        }
        let arr: [f64; 5] = std::array::from_fn(|i| x[i]);
        let gap = (rhs(p, &arr).iter().sum::<f64>() - sum_rate_identity(p, &arr)).abs();
        audit.max_sum_residual = audit.max_sum_residual.max(gap);
        audit.max_total = audit.max_total.max(x.iter().sum());
        let now = inside(x);
        if now && !was_inside {
            audit.entered_region = true;
        }
        if !now && was_inside {
            audit.exited_region = true;
            audit.first_exit_time.get_or_insert(*t);
        }
        was_inside = now;
    }
    Ok(audit)
}
