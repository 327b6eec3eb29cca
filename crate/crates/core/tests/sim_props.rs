mod common;

use common::{random_covid_params, rng};
use epistab::covid::{dfe, endemic, CovidParams};
use epistab::seir::{endemic3, SeirParams};
use epistab::sim::{integrate, invariance_audit, simulate_covid, simulate_seir, Trajectory, COVID_LABELS};
use epistab::Error;
use rand::Rng;

fn max_state_gap(tr: &Trajectory, x: &[f64]) -> f64 {
    tr.states
        .iter()
        .flat_map(|s| s.iter().zip(x).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn rk4_is_fourth_order_on_a_rotation() {
    let f = |x: &[f64; 2]| [-x[1], x[0]];
    let err = |dt: f64| {
        let tr = integrate(f, &["x", "y"], [1.0, 0.0], dt, 10.0).unwrap();
        let t = *tr.times.last().unwrap();
        let x = tr.last().unwrap();
        (x[0] - t.cos()).abs().max((x[1] - t.sin()).abs())
    };
    let ratio = err(0.1) / err(0.05);
    assert!((12.0..=20.0).contains(&ratio), "ratio {}", ratio);
    assert!(err(0.01) < 1e-8);
}

#[test]
fn runs_are_deterministic() {
    let p = CovidParams::table(0.1);
    let a = simulate_covid(&p, [10.0, 5.0, 1.0, 1.0, 0.0], 0.01, 20.0).unwrap();
    let b = simulate_covid(&p, [10.0, 5.0, 1.0, 1.0, 0.0], 0.01, 20.0).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 2001);
}

#[test]
fn equilibria_are_stationary() {
    let p = CovidParams::table(0.1);
    for eq in [dfe(&p).unwrap(), endemic(&p).unwrap()] {
        let x = eq.state.to_array();
        let tr = simulate_covid(&p, x, 0.01, 10.0).unwrap();
        assert!(max_state_gap(&tr, &x) < 1e-8, "{:?}", eq.kind);
    }
    let s = SeirParams::figure(0.1);
    let x = endemic3(&s).unwrap().state.to_array();
    assert!(max_state_gap(&simulate_seir(&s, x, 0.01, 10.0).unwrap(), &x) < 1e-8);
}

#[test]
fn table_trajectory_approaches_the_endemic_point() {
    let p = CovidParams::table(0.1);
    let star = endemic(&p).unwrap().state.to_array();
    let tr = simulate_covid(&p, [40.0, 1.0, 0.0, 0.0, 0.0], 0.1, 3000.0).unwrap();
    let end = tr.last().unwrap();
    for (a, b) in end.iter().zip(star) {
        assert!((a - b).abs() < 1e-3 * b.max(1.0), "{:?} vs {:?}", end, star);
    }
}

#[test]
fn audits_on_random_parameters() {
    let mut r = rng(600);
    let (mut inside, mut exits) = (0, 0);
    for _ in 0..30 {
        let p = random_covid_params(&mut r);
        let x0: [f64; 5] = std::array::from_fn(|_| r.gen_range(0.0..5.0));
        let tr = simulate_covid(&p, x0, 0.01, 20.0).unwrap();
        let a = invariance_audit(&tr, &p).unwrap();
        assert!(a.first_violation.is_none(), "{:?}", a.first_violation);
        assert!(a.max_sum_residual < 1e-9);
        if a.starts_inside {
            inside += 1;
            if a.exited_region {
                exits += 1;
            }
        }
    }
    println!(
        "{} of {} starts inside E + I + C + H + D <= B/mu later leave it",
        exits, inside
    );
}

// D has no outflow at rate mu, so the total grows at B - mu (E + I + C + H),
// which is positive on the boundary of the region whenever D > 0.
#[test]
fn total_population_region_is_not_forward_invariant() {
    let p = CovidParams::table(0.1);
    let bound = p.b / p.mu;
    let x0 = [0.0, 0.0, 0.0, 0.0, bound];
    let tr = simulate_covid(&p, x0, 0.01, 1.0).unwrap();
    let a = invariance_audit(&tr, &p).unwrap();
    assert!(a.starts_inside && a.exited_region);
    assert!(a.max_total > bound);
}

#[test]
fn audit_reports_constructed_violations() {
    let p = CovidParams::table(0.1);
    let tr = Trajectory {
        labels: COVID_LABELS.iter().map(|s| s.to_string()).collect(),
        times: vec![0.0, 1.0, 2.0],
        states: vec![
            vec![1.0; 5],
            vec![1.0, -0.5, 1.0, 1.0, 1.0],
            vec![100.0, 0.0, 0.0, 0.0, 0.0],
        ],
    };
    let a = invariance_audit(&tr, &p).unwrap();
    let v = a.first_violation.unwrap();
    assert_eq!((v.t, v.compartment.as_str(), v.value), (1.0, "I", -0.5));
    assert!(a.starts_inside && a.exited_region);
    assert_eq!(a.first_exit_time, Some(2.0));
    let short = Trajectory {
        labels: vec!["x".into()],
        times: vec![0.0],
        states: vec![vec![1.0]],
    };
    assert!(matches!(invariance_audit(&short, &p), Err(Error::Dimension(_))));
}

#[test]
fn csv_round_trip_and_errors() {
    let s = SeirParams::figure(0.1);
    let tr = simulate_seir(&s, [7.0, 0.1, 0.0], 0.1, 5.0).unwrap();
    let text = tr.to_csv();
    assert!(text.starts_with("t,S,I1,I2\n"));
    let back = Trajectory::from_csv(&text).unwrap();
    assert_eq!(back.labels, tr.labels);
    assert_eq!(back.len(), tr.len());
    assert!(Trajectory::from_csv("").is_err());
    assert!(Trajectory::from_csv("x,y\n1,2\n").is_err());
    assert!(Trajectory::from_csv("t,y\n1,2,3\n").is_err());
    assert!(Trajectory::from_csv("t,y\n1,abc\n").is_err());
}

#[test]
fn horizon_lands_on_the_grid() {
    let tr = integrate(|x: &[f64; 1]| [-x[0]], &["x"], [1.0], 0.03, 1.0).unwrap();
    assert_eq!(tr.len(), 35);
    assert!(*tr.times.last().unwrap() >= 1.0);
    assert!(integrate(|x: &[f64; 1]| [-x[0]], &["x", "y"], [1.0], 0.01, 1.0).is_err());
    assert!(integrate(|x: &[f64; 1]| [-x[0]], &["x"], [f64::NAN], 0.01, 1.0).is_err());
}
