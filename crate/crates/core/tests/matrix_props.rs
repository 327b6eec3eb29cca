mod common;

use common::{multiset_gap, random_matrix, rng};
use epistab::matrix::{det4_block, determinant, eigenvalues, inverse, spectral_abscissa, spectral_radius, Matrix};
use epistab::Error;
use proptest::prelude::*;

fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

#[test]
fn determinant_examples() {
    assert_eq!(determinant(&Matrix::identity(3)).unwrap(), 1.0);
    assert!((determinant(&Matrix::diag(&[-1.0, -2.0, -3.0, -4.0, -5.0])).unwrap() + 120.0).abs() < 1e-12);
    assert!((determinant(&m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap() - 3.0).abs() < 1e-14);
    assert!(matches!(determinant(&Matrix::zeros(2, 3)), Err(Error::Dimension(_))));
}

#[test]
fn inverse_examples() {
    assert_eq!(inverse(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
    assert_eq!(inverse(&Matrix::diag(&[2.0, 4.0])).unwrap(), Matrix::diag(&[0.5, 0.25]));
    let inv = inverse(&m(&[&[2.0, -1.0], &[-1.0, 2.0]])).unwrap();
    let want = m(&[&[2.0, 1.0], &[1.0, 2.0]]).scale(1.0 / 3.0);
    assert!(inv.max_abs_diff(&want) < 1e-15);
    assert!(matches!(
        inverse(&m(&[&[1.0, 2.0], &[2.0, 4.0]])),
        Err(Error::Singular { .. })
    ));
}

#[test]
fn spectra_examples() {
    let s = eigenvalues(&Matrix::diag(&[1.0, 2.0, 3.0])).unwrap().sorted();
    for (z, w) in s.iter().zip([1.0, 2.0, 3.0]) {
        assert!((z.re - w).abs() < 1e-12 && z.im == 0.0);
    }
    let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
    assert!(spectral_abscissa(&rot).unwrap().abs() < 1e-12);
    assert!((spectral_radius(&rot).unwrap() - 1.0).abs() < 1e-12);
    assert!((spectral_abscissa(&m(&[&[-2.0, 1.0], &[0.0, -3.0]])).unwrap() + 2.0).abs() < 1e-12);
}

#[test]
fn det4_block_examples() {
    assert_eq!(det4_block(&Matrix::identity(4)).unwrap(), 1.0);
    assert_eq!(det4_block(&Matrix::diag(&[1.0, 2.0, 3.0, 4.0])).unwrap(), 24.0);
    let sparse = m(&[
        &[1.0, 2.0, 0.0, 3.0],
        &[4.0, 5.0, 0.0, 0.0],
        &[0.0, 6.0, 7.0, 0.0],
        &[0.0, 8.0, 9.0, 10.0],
    ]);
    assert!((det4_block(&sparse).unwrap() - determinant(&sparse).unwrap()).abs() < 1e-9);
    assert!(matches!(det4_block(&Matrix::identity(3)), Err(Error::Dimension(_))));
}

#[test]
fn det4_block_agrees_with_elimination() {
    let mut r = rng(41);
    for _ in 0..1000 {
        let a = random_matrix(&mut r, 4, -2.0, 2.0);
        let (x, y) = (det4_block(&a).unwrap(), determinant(&a).unwrap());
        assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
    }
}

#[test]
fn determinant_is_multiplicative() {
    let mut r = rng(42);
    for _ in 0..200 {
        let a = random_matrix(&mut r, 5, -1.0, 1.0);
        let b = random_matrix(&mut r, 5, -1.0, 1.0);
        let lhs = determinant(&a.matmul(&b).unwrap()).unwrap();
        let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
    }
}

#[test]
fn inverse_round_trip() {
    let mut r = rng(43);
    for _ in 0..200 {
        let a = random_matrix(&mut r, 5, -1.0, 1.0);
        if let Ok(inv) = inverse(&a) {
            if inv.norm_inf() < 1e4 {
                assert!(a.matmul(&inv).unwrap().max_abs_diff(&Matrix::identity(5)) < 1e-9);
            }
        }
    }
}

#[test]
fn transpose_has_same_spectrum() {
    let mut r = rng(44);
    for n in 2..=8 {
        for _ in 0..20 {
            let a = random_matrix(&mut r, n, -1.0, 1.0);
            let gap = multiset_gap(
                &eigenvalues(&a).unwrap().values,
                &eigenvalues(&a.transpose()).unwrap().values,
            );
            assert!(gap < 1e-8, "n = {} gap = {}", n, gap);
        }
    }
}

#[test]
fn spectra_are_conjugate_closed_and_sized() {
    let mut r = rng(45);
    for n in 1..=16 {
        let a = random_matrix(&mut r, n, -1.0, 1.0);
        let s = eigenvalues(&a).unwrap();
        assert_eq!(s.len(), n);
        let conj: Vec<_> = s.values.iter().map(|z| z.conj()).collect();
        assert!(multiset_gap(&s.values, &conj) < 1e-9);
    }
}

#[test]
fn eigenvalues_reject_large_or_rectangular() {
    assert!(eigenvalues(&Matrix::identity(17)).is_err());
    assert!(eigenvalues(&Matrix::zeros(2, 3)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abscissa_shift(entries in prop::collection::vec(-1.0f64..1.0, 16), c in -3.0f64..3.0) {
        let a = Matrix::from_fn(4, 4, |i, j| entries[i * 4 + j]);
        let shifted = a.add(&Matrix::identity(4).scale(c)).unwrap();
        let gap = spectral_abscissa(&shifted).unwrap() - spectral_abscissa(&a).unwrap() - c;
        prop_assert!(gap.abs() < 1e-9);
    }

    #[test]
    fn text_round_trip(entries in prop::collection::vec(-1e3f64..1e3, 9)) {
        let a = Matrix::from_fn(3, 3, |i, j| entries[i * 3 + j]);
        let back = Matrix::parse_text(&a.to_text()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-9 * a.max_abs().max(1.0));
    }
}
