//! Both sides of every ordered-algebra identity pushed through the truncated
//! Fock-space oracle in double-double precision.

use fockorder_core::fock::{eval_coherent, eval_exp, series_ratio, ORACLE_CUTOFF};
use fockorder_core::ordered::projector_laguerre;
use fockorder_core::scalar::{lift, lower};
use fockorder_core::{
    basis_projector, coherent_projector, coherent_vector, exp_reorder, ladder, matrix_distance, projector,
    sandwich, Cdd, Error, FockMatrix, OrderParameter, OrderedExp, TwoFloat,
};
use num_complex::Complex64 as C;

type M = FockMatrix<TwoFloat>;

fn op(s: f64) -> OrderParameter {
    OrderParameter::new(s)
}

fn dd(re: f64, im: f64) -> Cdd {
    lift(C::new(re, im))
}

fn pure(lambda: f64, s: f64) -> OrderedExp<TwoFloat> {
    OrderedExp::pure(dd(1.0, 0.0), dd(lambda, 0.0), op(s))
}

fn projector_error(n: u32, m: u32, t: f64, dim: usize, cutoff: u32, margin: usize) -> f64 {
    let p = projector::<TwoFloat>(n, m, op(t)).unwrap();
    let got = eval_exp(&p, dim, cutoff).unwrap();
    let want = basis_projector::<TwoFloat>(n as usize, m as usize, dim).unwrap();
    matrix_distance(&got, &want, margin).unwrap()
}

#[test]
fn reorder_example_at_default_cutoff() {
    let e = pure(0.3, 0.0);
    let r = exp_reorder(&e, op(0.8)).unwrap();
    let d = matrix_distance(&eval_exp(&e, 30, 40).unwrap(), &eval_exp(&r, 30, 40).unwrap(), 5).unwrap();
    assert!(d < 1e-8, "{d}");
}

#[test]
fn reorder_agrees_wherever_both_series_converge() {
    let mut checked = 0;
    for &lam in &[-1.0, -0.5, 0.3] {
        for &s in &[-0.5, 0.0, 0.5, 1.0] {
            for &t in &[-0.5, 0.0, 0.5, 1.0] {
                let e = pure(lam, s);
                let r = exp_reorder(&e, op(t)).unwrap();
                if series_ratio(&e) > 0.5 || series_ratio(&r) > 0.5 {
                    continue;
                }
                let lhs = eval_exp(&e, 30, ORACLE_CUTOFF).unwrap();
                let rhs = eval_exp(&r, 30, ORACLE_CUTOFF).unwrap();
                let d = matrix_distance(&lhs, &rhs, 5).unwrap();
                assert!(d < 1e-8, "lambda={lam} s={s} t={t}: {d}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 30, "{checked}");
}

#[test]
fn oracle_series_diverges_past_unit_ratio() {
    // {e^{-a†a}}_{1} reordered to t = -0.5 has ratio 3 on the right-hand side
    let e = pure(-1.0, 1.0);
    let r = exp_reorder(&e, op(-0.5)).unwrap();
    assert!(series_ratio(&r) >= 1.0);
    let exact = eval_exp(&e, 30, 40).unwrap();
    let d: Vec<f64> = [20u32, 40, 80]
        .iter()
        .map(|&n| matrix_distance(&exact, &eval_exp(&r, 30, n).unwrap(), 5).unwrap())
        .collect();
    assert!(d[0] < d[1] && d[1] < d[2] && d[2] > 1e10, "{d:?}");
}

#[test]
fn reorder_pole_is_reported() {
    // lambda (t - s) = 2
    let e = pure(-2.0, 0.5);
    assert!(matches!(exp_reorder(&e, op(-0.5)), Err(Error::OrderingPole { .. })));
}

#[test]
fn sandwich_matches_ladder_products() {
    let d = 30;
    let (a, ad) = ladder::<TwoFloat>(d).unwrap();
    for &s in &[0.0, 0.5, 1.0] {
        for &lam in &[-1.0, -0.4] {
            let e = pure(lam, s);
            let inner = eval_exp(&e, d, ORACLE_CUTOFF).unwrap();
            for n in 0..=4u32 {
                for m in 0..=4u32 {
                    let sw = sandwich(&e, n, m).unwrap();
                    let got = eval_exp(&sw, d, ORACLE_CUTOFF).unwrap();
                    let want = &(&ad.pow(n) * &inner) * &a.pow(m);
                    let dist = matrix_distance(&got, &want, 5).unwrap();
                    assert!(dist < 1e-8, "s={s} lambda={lam} n={n} m={m}: {dist}");
                }
            }
        }
    }
}

#[test]
fn sandwich_worked_example() {
    let d = 30;
    let (a, ad) = ladder::<TwoFloat>(d).unwrap();
    let e = pure(-0.5, 0.0);
    let inner = eval_exp(&e, d, ORACLE_CUTOFF).unwrap();
    let got = eval_exp(&sandwich(&e, 2, 1).unwrap(), d, ORACLE_CUTOFF).unwrap();
    let want = &(&ad.pow(2) * &inner) * &a;
    assert!(matrix_distance(&got, &want, 5).unwrap() < 1e-8);
}

#[test]
fn projectors_reconstruct_basis_matrices() {
    for &t in &[0.5, 1.0] {
        for n in 0..=5 {
            for m in 0..=5 {
                let err = projector_error(n, m, t, 40, ORACLE_CUTOFF, 5);
                assert!(err < 1e-8, "n={n} m={m} t={t}: {err}");
            }
        }
    }
}

#[test]
fn projector_examples_at_default_cutoff() {
    // at t = 1 the series terminates on every level below the cutoff
    assert!(projector_error(3, 1, 1.0, 30, 40, 5) < 1e-20);
    // at t = 0.5 forty terms settle only the lowest few levels; the cutoff
    // needed grows with the level
    for (n, m) in [(2, 1), (1, 1)] {
        assert!(projector_error(n, m, 0.5, 30, 40, 5) > 1.0);
        assert!(projector_error(n, m, 0.5, 30, 40, 25) < 1e-8);
        assert!(projector_error(n, m, 0.5, 30, ORACLE_CUTOFF, 5) < 1e-18);
    }
}

#[test]
fn projector_completeness() {
    let (d, n0) = (30, 12u32);
    let mut sum = M::zeros(d);
    for n in 0..=n0 {
        let p = projector::<TwoFloat>(n, n, op(0.5)).unwrap();
        sum = &sum + &eval_exp(&p, d, ORACLE_CUTOFF).unwrap();
    }
    let dist = matrix_distance(&sum, &M::identity(d), d - (n0 as usize - 5)).unwrap();
    assert!(dist < 1e-6, "{dist}");
}

#[test]
fn projector_images_are_hermitian_pairs() {
    let d = 30;
    for &t in &[0.5, 1.0] {
        for n in 0..=4 {
            for m in 0..=4 {
                let x = eval_exp(&projector::<TwoFloat>(n, m, op(t)).unwrap(), d, ORACLE_CUTOFF).unwrap();
                let y = eval_exp(&projector::<TwoFloat>(m, n, op(t)).unwrap(), d, ORACLE_CUTOFF).unwrap();
                assert!(matrix_distance(&x, &y.adjoint(), 0).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn growing_dimension_never_worsens_a_fixed_block() {
    // block of 20 levels: D = 25 with margin 5, D = 40 with margin 20
    for &t in &[0.5, 1.0] {
        for n in 0..=5 {
            for m in 0..=5 {
                let small = projector_error(n, m, t, 25, ORACLE_CUTOFF, 5);
                let large = projector_error(n, m, t, 40, ORACLE_CUTOFF, 20);
                assert!(large <= small + 1e-12, "n={n} m={m} t={t}: {large} > {small}");
            }
        }
    }
}

#[test]
fn projector_series_diverges_for_nonpositive_t() {
    for &t in &[0.0, -0.5] {
        let p = projector::<TwoFloat>(0, 0, op(t)).unwrap();
        assert!(series_ratio(&p) >= 1.0);
        let a = projector_error(0, 0, t, 30, 40, 5);
        let b = projector_error(0, 0, t, 30, 80, 5);
        assert!(b > a && a > 1.0, "t={t}: {a} {b}");
    }
}

#[test]
fn laguerre_and_hermite_forms_share_an_oracle_image() {
    let d = 30;
    for n in 0..=5 {
        let lag = projector_laguerre::<TwoFloat>(n, op(0.5)).unwrap().to_ordered_exp();
        let her = projector::<TwoFloat>(n, n, op(0.5)).unwrap();
        let x = eval_exp(&lag, d, ORACLE_CUTOFF).unwrap();
        let y = eval_exp(&her, d, ORACLE_CUTOFF).unwrap();
        assert!(matrix_distance(&x, &y, 5).unwrap() < 1e-12);
    }
}

#[test]
fn coherent_projector_matches_outer_product() {
    let d = 30;
    let beta = C::new(0.7, 0.2);
    let v = coherent_vector::<TwoFloat>(lift(beta), d).unwrap();
    let want = M::outer(&v, &v);
    for &t in &[-0.5, -1.0 + 1e-9] {
        let form = coherent_projector::<TwoFloat>(lift(beta), op(t)).unwrap();
        // the displaced expansion is cubic in the cutoff; 150 terms already
        // reach rounding at t = -0.5
        let got = eval_coherent(&form, d, 150).unwrap();
        let dist = matrix_distance(&got, &want, 5).unwrap();
        assert!(dist < 1e-7, "t={t}: {dist}");
    }
    // the expansion ratio (1 + t)/(1 - t) reaches 1 at t = 0
    let form = coherent_projector::<TwoFloat>(lift(beta), op(0.0)).unwrap();
    let coarse = matrix_distance(&eval_coherent(&form, d, 40).unwrap(), &want, 5).unwrap();
    assert!(coarse > 1e-7, "{coarse}");
    assert_eq!(lower(form.center), beta);
}
