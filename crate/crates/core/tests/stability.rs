// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use psl_core::harness::{sample_stratum, trial_rng};
use psl_core::atlas::stratum_by_id;
use psl_core::linalg::Matrix;
use psl_core::sheaf::{act, random_automorphism, w42};
use psl_core::stability::{
    g_semistable, gred_semistable, kronecker_moduli_dim, kronecker_semistable, minors_criterion_23,
    reducibility_44, stability_5c, verify_kronecker_witness, verify_polarized_witness, GMode, KroneckerModule,
    Polarization, Status, Witness,
};
use psl_core::{Field, Form, PrimeField, PslError, SheafMorphism};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const BUDGET: u128 = 1_000_000;

fn linear_matrix(k: PrimeField, rows: &[&[&str]]) -> SheafMorphism<PrimeField> {
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|s| Form::parse(k, s, Some(1)).unwrap()).collect())
        .collect();
    SheafMorphism::new(k, vec![-1; rows[0].len()], vec![0; rows.len()], entries).unwrap()
}

/// Every subspace of F_p^m as the set of its vectors.
fn all_subspaces(m: usize, p: i64) -> Vec<BTreeSet<Vec<i64>>> {
    let vectors: Vec<Vec<i64>> = (0..p.pow(m as u32))
        .map(|mut n| {
            (0..m)
                .map(|_| {
                    let d = n % p;
                    n /= p;
                    d
                })
                .collect()
        })
        .collect();
    let span = |gens: &[Vec<i64>]| -> BTreeSet<Vec<i64>> {
        let mut set: BTreeSet<Vec<i64>> = [vec![0; m]].into_iter().collect();
        for g in gens {
            let current: Vec<Vec<i64>> = set.iter().cloned().collect();
            for v in current {
                for a in 0..p {
                    set.insert(v.iter().zip(g).map(|(x, y)| (x + a * y).rem_euclid(p)).collect());
                }
            }
        }
        set
    };
    let mut found: BTreeSet<BTreeSet<Vec<i64>>> = BTreeSet::new();
    let mut frontier = vec![span(&[])];
    while let Some(s) = frontier.pop() {
        if !found.insert(s.clone()) {
            continue;
        }
        for v in &vectors {
            if !s.contains(v) {
                let mut gens: Vec<Vec<i64>> = s.iter().cloned().collect();
                gens.push(v.clone());
                frontier.push(span(&gens));
            }
        }
    }
    found.into_iter().collect()
}

/// Kronecker status from explicit subspace lists, ranks by plain elimination.
fn kronecker_oracle(phi: &SheafMorphism<PrimeField>, p: i64, subspaces: &[BTreeSet<Vec<i64>>]) -> Status {
    let (n, m) = (phi.rows(), phi.cols());
    let mut equality = false;
    for h in subspaces {
        let dim_h = (h.len() as f64).log(p as f64).round() as usize;
        if dim_h == 0 {
            continue;
        }
        let images: Vec<Vec<i64>> = h
            .iter()
            .flat_map(|v| {
                (0..3).map(move |c| (0..n).map(|i| (0..m).map(|j| slice_entry(phi, c, i, j) * v[j]).sum()).collect())
            })
            .collect();
        let dim_k = rank_mod_p(&images, p);
        if m * dim_k < n * dim_h {
            return Status::Unstable;
        }
        if m * dim_k == n * dim_h && !(dim_h == m && dim_k == n) {
            equality = true;
        }
    }
    if equality {
        Status::StrictlySemistable
    } else {
        Status::Stable
    }
}

#[test]
fn kronecker_examples() {
    let k = f(7);
    let col = linear_matrix(k, &[&["x0"], &["x1"]]);
    let tau = KroneckerModule::from_linear(&col).unwrap();
    assert_eq!(kronecker_semistable(&tau, BUDGET).unwrap().status, Status::Stable);

    let doubled = linear_matrix(k, &[&["x0"], &["x0"]]);
    let v = kronecker_semistable(&KroneckerModule::from_linear(&doubled).unwrap(), BUDGET).unwrap();
    assert_eq!(v.status, Status::Unstable);
    let Some(Witness::Kronecker { h, k: kk }) = v.witness else { panic!("missing witness") };
    assert_eq!((h.dim(), kk.dim()), (1, 1));

    let triangular = linear_matrix(k, &[&["x0", "x1"], &["0", "x2"]]);
    let v = kronecker_semistable(&KroneckerModule::from_linear(&triangular).unwrap(), BUDGET).unwrap();
    assert_ne!(v.status, Status::Stable);
}

#[test]
fn kronecker_needs_a_finite_field_and_budget() {
    let q = psl_core::Rationals;
    let phi = SheafMorphism::from_fn(q, vec![-1], vec![0, 0], |i, _, _| Form::var(q, i)).unwrap();
    let tau = KroneckerModule::from_linear(&phi).unwrap();
    assert_eq!(kronecker_semistable(&tau, BUDGET).unwrap_err(), PslError::NotPrimeField);
    let big = random_linear(f(97), 4, 4, &mut trial_rng(0, 0));
    let tau = KroneckerModule::from_linear(&big).unwrap();
    assert!(matches!(kronecker_semistable(&tau, 1000), Err(PslError::BudgetExceeded { .. })));
}

#[test]
fn minors_criterion_examples() {
    let k = f(3);
    let generic = linear_matrix(k, &[&["x0", "0"], &["x1", "x0"], &["0", "x1"]]);
    assert!(minors_criterion_23(&generic).unwrap());
    // the minors x1^2, x0 x1, x0^2 are independent; a repeated column is not
    let repeated = linear_matrix(k, &[&["x0", "x0"], &["x1", "x1"], &["x2", "x2"]]);
    assert!(!minors_criterion_23(&repeated).unwrap());
    let wrong = linear_matrix(k, &[&["x0", "x1"], &["x1", "x2"]]);
    assert!(matches!(minors_criterion_23(&wrong), Err(PslError::ShapeMismatch(_))));
}

#[test]
fn minors_criterion_agrees_with_subspace_oracle_over_f3() {
    let k = f(3);
    let subspaces = all_subspaces(2, 3);
    assert_eq!(subspaces.len(), 6);
    let mut stable = 0;
    for t in 0..600 {
        let phi = random_linear(k, 3, 2, &mut trial_rng(23, t));
        let tau = KroneckerModule::from_linear(&phi).unwrap();
        let exact = kronecker_semistable(&tau, BUDGET).unwrap();
        assert_eq!(exact.status, kronecker_oracle(&phi, 3, &subspaces), "trial {t}");
        assert_eq!(minors_criterion_23(&phi).unwrap(), exact.is_stable(), "trial {t}");
        stable += usize::from(exact.is_stable());
    }
    // both outcomes occur
    assert!(stable > 50 && stable < 600, "{stable}");
}

#[test]
fn reducibility_agrees_with_bitmask_oracle_over_f2() {
    let k = f(2);
    let mut counts = [0usize; 3];
    for t in 0..600 {
        let phi = random_linear(k, 4, 4, &mut trial_rng(44, t));
        let v = reducibility_44(&phi, BUDGET).unwrap();
        assert_eq!(v.status, bitmask_oracle_44(&phi), "trial {t}");
        counts[match v.status {
            Status::Stable => 0,
            Status::StrictlySemistable => 1,
            _ => 2,
        }] += 1;
    }
    assert!(counts[0] > 0 && counts[2] > 0, "{counts:?}");
}

#[test]
fn planted_reducible_instances_are_detected() {
    for p in [2, 3] {
        let k = f(p);
        for t in 0..100 {
            let phi = planted_reducible(k, &mut trial_rng(p as u64, t));
            let v = reducibility_44(&phi, BUDGET).unwrap();
            assert!(!v.is_stable(), "p={p} trial {t}");
            if p == 2 {
                assert_eq!(v.status, bitmask_oracle_44(&phi));
            }
        }
    }
}

#[test]
fn kronecker_witnesses_verify_and_status_is_invariant() {
    for p in [2u32, 3] {
        let k = f(p);
        for t in 0..200 {
            let rng = &mut trial_rng(100 + p as u64, t);
            let phi = random_linear(k, 4, 4, rng);
            let tau = KroneckerModule::from_linear(&phi).unwrap();
            let v = kronecker_semistable(&tau, BUDGET).unwrap();
            if let Some(Witness::Kronecker { h, k: kk }) = &v.witness {
                assert!(verify_kronecker_witness(&tau, h, kk, v.status));
            }
            let c = k.random_nonzero(rng);
            assert_eq!(kronecker_semistable(&tau.scaled(&c), BUDGET).unwrap().status, v.status);
            let g1 = Matrix::random_invertible(k, 4, rng);
            let g2 = Matrix::random_invertible(k, 4, rng);
            assert_eq!(kronecker_semistable(&tau.transformed(&g1, &g2), BUDGET).unwrap().status, v.status);
        }
    }
}

#[test]
fn kronecker_moduli_dimensions() {
    assert_eq!(kronecker_moduli_dim(6, 2, 2), Some(17));
    assert_eq!(kronecker_moduli_dim(3, 4, 4), Some(17));
    assert_eq!(kronecker_moduli_dim(3, 1, 2), Some(2));
    assert_eq!(kronecker_moduli_dim(3, 2, 3), Some(6));
    assert_eq!(kronecker_moduli_dim(3, 1, 1), Some(2));
    assert_eq!(kronecker_moduli_dim(2, 1, 1), None);
    assert_eq!(kronecker_moduli_dim(3, 1, 3), None);
}

fn morphism_5c(k: PrimeField, phi11: &str, phi12: &str, phi21: &str, phi22: &str) -> SheafMorphism<PrimeField> {
    let p = |s: &str, d| Form::parse(k, s, Some(d)).unwrap();
    SheafMorphism::new(
        k,
        vec![-2, -1],
        vec![0, 1],
        vec![vec![p(phi11, 2), p(phi12, 1)], vec![p(phi21, 3), p(phi22, 2)]],
    )
    .unwrap()
}

#[test]
fn divisibility_criterion_examples() {
    let k = f(7);
    let v = stability_5c(&morphism_5c(k, "x0*x1", "x0", "x1^3", "x2^2")).unwrap();
    assert_eq!(v.status, Status::StrictlySemistable);
    let Some(Witness::Divisor { entry, quotient }) = v.witness else { panic!("missing witness") };
    assert_eq!((entry.as_str(), quotient.to_string().as_str()), ("phi11", "x1"));

    let v = stability_5c(&morphism_5c(k, "x1*x2+x2^2", "x0", "x1^3", "x1^2")).unwrap();
    assert_eq!(v.status, Status::Stable);

    let v = stability_5c(&morphism_5c(k, "x1^2", "x0", "x2^3", "x0*x2")).unwrap();
    assert_eq!(v.status, Status::StrictlySemistable);

    let err = stability_5c(&morphism_5c(k, "x1^2", "0", "x2^3", "x0*x2")).unwrap_err();
    assert!(matches!(err, PslError::OutOfStratum(_)));
}

fn eval_mod(poly: &Poly, pt: [i64; 3], p: i64) -> i64 {
    poly.iter().fold(0, |acc, (m, c)| {
        (acc + c * (0..3).map(|i| pow_mod(pt[i], m[i] as i64, p)).product::<i64>()).rem_euclid(p)
    })
}

/// `l` divides `g` iff `g` vanishes on every F_p-point of the line `l = 0`
/// (deg g <= 2 < p + 1 points).
fn divides_oracle(l: &Poly, g: &Poly, p: i64) -> bool {
    let mut points = Vec::new();
    for a in 0..p {
        for b in 0..p {
            points.push([1, a, b]);
        }
        points.push([0, 1, a]);
    }
    points.push([0, 0, 1]);
    points
        .into_iter()
        .filter(|&pt| eval_mod(l, pt, p) == 0)
        .all(|pt| eval_mod(g, pt, p) == 0)
}

#[test]
fn divisibility_criterion_matches_point_oracle() {
    let k = f(7);
    let mut strict = 0;
    for t in 0..400 {
        let rng = &mut trial_rng(55, t);
        let phi12 = loop {
            let l = Form::random(k, 1, rng);
            if !l.is_zero() {
                break l;
            }
        };
        let plant = |rng: &mut ChaCha8Rng| {
            if rng.random_bool(0.3) {
                phi12.mul(&Form::random(k, 1, rng))
            } else {
                Form::random(k, 2, rng)
            }
        };
        let phi11 = plant(rng);
        let phi22 = plant(rng);
        let phi = SheafMorphism::new(
            k,
            vec![-2, -1],
            vec![0, 1],
            vec![vec![phi11.clone(), phi12.clone()], vec![Form::random(k, 3, rng), phi22.clone()]],
        )
        .unwrap();
        let l = to_poly(&phi12);
        let expected = divides_oracle(&l, &to_poly(&phi11), 7) || divides_oracle(&l, &to_poly(&phi22), 7);
        let v = stability_5c(&phi).unwrap();
        assert_eq!(v.status == Status::StrictlySemistable, expected, "trial {t}");
        if let Some(Witness::Divisor { entry, quotient }) = &v.witness {
            let g = if entry == "phi11" { &phi11 } else { &phi22 };
            assert_eq!(&phi12.mul(quotient), g);
        }
        strict += usize::from(expected);
    }
    assert!(strict > 50 && strict < 400, "{strict}");
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn polarization_parsing() {
    let p = Polarization::parse("3/10, 2/5, 2/5, 3/10", 2).unwrap();
    assert_eq!(p, Polarization::default_42());
    assert_eq!(p.lambdas, vec![q(3, 10), q(2, 5)]);
    assert!(matches!(Polarization::parse("1/0,1", 1), Err(PslError::MalformedPolarization(_))));
    assert!(matches!(Polarization::parse("a,b", 1), Err(PslError::MalformedPolarization(_))));
    // weights must normalize against the group sizes
    assert!(Polarization::parse("1/2,1/2", 1).unwrap().check(&[1], &[1]).is_err());
    assert!(Polarization::parse("1,1", 1).unwrap().check(&[1], &[1]).is_ok());
}

fn w(k: PrimeField, x: [&str; 2], alpha: i64, qs: [&str; 4], y: [&str; 2]) -> SheafMorphism<PrimeField> {
    let p = |s: &str, d| Form::parse(k, s, Some(d)).unwrap();
    let (x0, x1) = (p(x[0], 1), p(x[1], 1));
    let qq: Vec<Form<PrimeField>> = qs.iter().map(|s| p(s, 2)).collect();
    let (y0, y1) = (p(y[0], 1), p(y[1], 1));
    w42([&x0, &x1], k.from_i64(alpha), [[&qq[0], &qq[1]], [&qq[2], &qq[3]]], [&y0, &y1]).unwrap()
}

#[test]
fn exact_list_examples() {
    let k = f(7);
    let sigma = Polarization::default_42();
    let generic = w(k, ["x0", "x1"], 0, ["x2^2", "x0*x1", "x1^2", "x0^2+x2^2"], ["x1", "x2"]);
    let v = g_semistable(&generic, &sigma, GMode::ExactList, BUDGET).unwrap();
    assert!(v.status.is_semistable());
    assert_ne!(gred_semistable(&generic, &sigma, BUDGET).unwrap().status, Status::Unstable);
    let mc = g_semistable(&generic, &sigma, GMode::MonteCarlo { samples: 200, seed: 1 }, BUDGET).unwrap();
    assert_eq!(mc.status, Status::Semistable);
    assert!(mc.witness.is_none());

    let zero = SheafMorphism::zero(k, vec![-2, -2, -1], vec![-1, 0, 0]).unwrap();
    assert_eq!(gred_semistable(&zero, &sigma, BUDGET).unwrap().status, Status::Unstable);
    assert_eq!(
        g_semistable(&zero, &sigma, GMode::ExactList, BUDGET).unwrap_err(),
        PslError::NotInjective
    );
    // normal form with X1 = X2 = 0: everything lands in 2O
    let no_x = w(k, ["0", "0"], 0, ["x2^2", "x0*x1", "x1^2", "x0^2+x2^2"], ["x1", "x2"]);
    let v = gred_semistable(&no_x, &sigma, BUDGET).unwrap();
    assert_eq!(v.status, Status::Unstable);
    let Some(Witness::Polarized { m, n, .. }) = &v.witness else { panic!("missing witness") };
    assert!(verify_polarized_witness(&no_x, &sigma, m, n, Status::Unstable));

    // column 2 spans a single line of the 2O part
    let line = w(k, ["x0", "x1"], 0, ["x2^2", "x0*x1", "x1^2", "x0^2+x2^2"], ["x1", "2*x1"]);
    assert!(line.is_injective());
    let v = g_semistable(&line, &sigma, GMode::ExactList, BUDGET).unwrap();
    assert_eq!(v.status, Status::Unstable);
    let Some(Witness::Polarized { m, n, configuration, .. }) = &v.witness else { panic!("missing witness") };
    assert_eq!(configuration.as_deref(), Some("(0,1)->(0,1)"));
    assert!(verify_polarized_witness(&line, &sigma, m, n, Status::Unstable));

    // dependent X: a line of the 2O(-2) part and O(-1) avoid O(-1)
    let x_dep = w(k, ["x0", "3*x0"], 0, ["x2^2", "x0*x1", "x1^2", "x0^2+x2^2"], ["x1", "x2"]);
    assert!(x_dep.is_injective());
    let v = g_semistable(&x_dep, &sigma, GMode::ExactList, BUDGET).unwrap();
    let Some(Witness::Polarized { configuration, .. }) = &v.witness else { panic!("missing witness") };
    assert_eq!(configuration.as_deref(), Some("(1,1)->(0,2)"));

    // (1,1)->(1,0) needs Y = 0, so it is only realized by non-injective maps
    let split = w(k, ["x0", "x1"], 1, ["0", "x0*x1", "0", "x2^2"], ["0", "0"]);
    assert!(!split.is_injective());
    let v = gred_semistable(&split, &sigma, BUDGET).unwrap();
    assert_eq!(v.status, Status::Unstable);
    assert_eq!(g_semistable(&split, &sigma, GMode::ExactList, BUDGET).unwrap_err(), PslError::NotInjective);

    for mu in [q(1, 3), q(1, 2), q(3, 5)] {
        let err = g_semistable(&generic, &Polarization::for_42(mu), GMode::ExactList, BUDGET).unwrap_err();
        assert!(matches!(err, PslError::ModeUnavailable(_)));
    }
    let other = random_linear(k, 2, 2, &mut trial_rng(0, 1));
    assert!(matches!(
        g_semistable(&other, &sigma, GMode::ExactList, BUDGET),
        Err(PslError::ModeUnavailable(_))
    ));
}

fn sparse_w42(k: PrimeField, rng: &mut ChaCha8Rng) -> SheafMorphism<PrimeField> {
    SheafMorphism::from_fn(k, vec![-2, -2, -1], vec![-1, 0, 0], |_, _, d| {
        if rng.random_bool(0.35) {
            Form::zero(k, d)
        } else {
            Form::random(k, d, rng)
        }
    })
    .unwrap()
}

#[test]
fn polarized_verdicts_are_consistent() {
    let k = f(3);
    let sigma = Polarization::default_42();
    let (mut unstable, mut injective) = (0, 0);
    for t in 0..300 {
        let rng = &mut trial_rng(420, t);
        let phi = sparse_w42(k, rng);
        let mc = g_semistable(&phi, &sigma, GMode::MonteCarlo { samples: 24, seed: t }, BUDGET).unwrap();
        if !phi.is_injective() {
            let err = g_semistable(&phi, &sigma, GMode::ExactList, BUDGET).unwrap_err();
            assert_eq!(err, PslError::NotInjective);
            continue;
        }
        injective += 1;
        let exact = g_semistable(&phi, &sigma, GMode::ExactList, BUDGET).unwrap();
        if let Some(Witness::Polarized { m, n, .. }) = &exact.witness {
            assert!(verify_polarized_witness(&phi, &sigma, m, n, Status::Unstable), "trial {t}");
        }
        let direct = gred_semistable(&phi, &sigma, BUDGET).unwrap();
        if direct.status == Status::Unstable {
            assert_eq!(exact.status, Status::Unstable, "trial {t}");
        }
        if mc.status == Status::Unstable {
            let Some(Witness::Polarized { m, n, translate, .. }) = &mc.witness else { panic!("missing witness") };
            let translate = translate.as_ref().unwrap();
            assert!(verify_polarized_witness(translate, &sigma, m, n, Status::Unstable), "trial {t}");
            assert_eq!(exact.status, Status::Unstable, "trial {t}");
        }
        assert_eq!(mc.status.is_semistable(), exact.status.is_semistable(), "trial {t}");
        unstable += usize::from(exact.status == Status::Unstable);
    }
    assert!(unstable > 10 && injective > 50, "{unstable} {injective}");
}

#[test]
fn exact_list_is_invariant_under_the_group() {
    let k = f(5);
    let sigma = Polarization::default_42();
    for t in 0..400 {
        let rng = &mut trial_rng(77, t);
        let phi = if t % 2 == 0 {
            sparse_w42(k, rng)
        } else {
            SheafMorphism::from_fn(k, vec![-2, -2, -1], vec![-1, 0, 0], |_, _, d| Form::random(k, d, rng)).unwrap()
        };
        if !phi.is_injective() {
            continue;
        }
        let base = g_semistable(&phi, &sigma, GMode::ExactList, BUDGET).unwrap().status;
        let moved = act(
            &random_automorphism(k, &[-1, 0, 0], rng),
            &phi,
            &random_automorphism(k, &[-2, -2, -1], rng),
        )
        .unwrap();
        assert_eq!(g_semistable(&moved, &sigma, GMode::ExactList, BUDGET).unwrap().status, base, "trial {t}");
    }
}

#[test]
fn sampled_stratum_members_pass_their_criteria() {
    let k = f(7);
    for t in 0..50 {
        let phi = sample_stratum(stratum_by_id("X1(4,2)").unwrap(), k, &mut trial_rng(9, t)).unwrap();
        let v = g_semistable(phi.phi(), &Polarization::default_42(), GMode::ExactList, BUDGET).unwrap();
        assert!(v.status.is_semistable(), "trial {t}");
        let phi = sample_stratum(stratum_by_id("X1(4,4)").unwrap(), k, &mut trial_rng(9, t)).unwrap();
        let ordered = if phi.phi().source() == [-2, -1] { phi.phi().clone() } else { continue };
        assert!(stability_5c(&ordered).is_ok());
    }
    let k = f(3);
    for t in 0..50 {
        let phi = sample_stratum(stratum_by_id("X0(4,4)").unwrap(), k, &mut trial_rng(10, t)).unwrap();
        assert!(reducibility_44(phi.phi(), BUDGET).unwrap().status.is_semistable(), "trial {t}");
    }
}
