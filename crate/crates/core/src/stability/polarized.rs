// SPDX-License-Identifier: Apache-2.0
//! Polarized stability of `phi: sum E_i (x) C^{m_i} -> sum F_j (x) C^{n_j}`
//! with `E_i`, `F_j` the distinct line bundles of the source and target.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Certainty, StabilityVerdict, Status, Witness};
use crate::error::{PslError, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::sheaf::{act, random_unipotent, SheafMorphism};
use crate::subspace::{enumerate_all, Subspace};

/// Subspaces of the source groups and of the target groups.
type Tuple<F> = (Vec<Subspace<F>>, Vec<Subspace<F>>);

/// Weights `lambda_i` on source groups and `mu_j` on target groups with
/// `sum lambda_i m_i = sum mu_j n_j = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub lambdas: Vec<BigRational>,
    pub mus: Vec<BigRational>,
}

impl Polarization {
    pub fn new(lambdas: Vec<BigRational>, mus: Vec<BigRational>) -> Self {
        Self { lambdas, mus }
    }

    /// `((1 - mu)/2, mu, mu, (1 - mu)/2)` for `2O(-2) + O(-1) -> O(-1) + 2O`.
    pub fn for_42(mu: BigRational) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let side = (BigRational::one() - &mu) / two;
        Self {
            lambdas: vec![side.clone(), mu.clone()],
            mus: vec![mu, side],
        }
    }

    /// Default `mu = 2/5`.
    pub fn default_42() -> Self {
        Self::for_42(BigRational::new(BigInt::from(2), BigInt::from(5)))
    }

    /// Parses `a/b,c/d,...`: the first `source_groups` values are the
    /// lambdas, the rest the mus.
    pub fn parse(s: &str, source_groups: usize) -> Result<Self> {
        let vals: Vec<BigRational> = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                let bad = || PslError::MalformedPolarization(format!("bad weight '{t}'"));
                match t.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                        if b.is_zero() {
                            return Err(bad());
                        }
                        Ok(BigRational::new(a, b))
                    }
                    None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
                }
            })
            .collect::<Result<_>>()?;
        if vals.len() <= source_groups {
            return Err(PslError::MalformedPolarization(format!(
                "{} weights for {source_groups} source groups",
                vals.len()
            )));
        }
        let mus = vals[source_groups..].to_vec();
        Ok(Self {
            lambdas: vals[..source_groups].to_vec(),
            mus,
        })
    }

    pub fn check(&self, source_groups: &[usize], target_groups: &[usize]) -> Result<()> {
        if self.lambdas.len() != source_groups.len() || self.mus.len() != target_groups.len() {
            return Err(PslError::MalformedPolarization(format!(
                "{} + {} weights for {} + {} groups",
                self.lambdas.len(),
                self.mus.len(),
                source_groups.len(),
                target_groups.len()
            )));
        }
        if self.lambdas.iter().chain(&self.mus).any(|w| !w.is_positive()) {
            return Err(PslError::MalformedPolarization("weights must be positive".into()));
        }
        let sl: BigRational = weighted(&self.lambdas, source_groups);
        let sm: BigRational = weighted(&self.mus, target_groups);
        if !sl.is_one() || !sm.is_one() {
            return Err(PslError::MalformedPolarization(format!(
                "normalizations are {sl} and {sm}, both must be 1"
            )));
        }
        Ok(())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.lambdas.iter().chain(&self.mus).map(|w| w.to_string()).collect()
    }
}

fn weighted(w: &[BigRational], dims: &[usize]) -> BigRational {
    w.iter()
        .zip(dims)
        .map(|(a, &d)| a * BigRational::from_integer(BigInt::from(d)))
        .fold(BigRational::zero(), |x, y| x + y)
}

fn offsets(groups: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(groups.len());
    let mut acc = 0;
    for g in groups {
        out.push(acc);
        acc += g;
    }
    out
}

/// Smallest `(N_j)` with `phi(sum E_i (x) M_i)` inside `sum F_j (x) N_j`:
/// `N_j` is spanned by the coefficient vectors of the group-`j` rows of the
/// columns `phi v`, `v` running over the bases of the `M_i`.
pub fn minimal_targets<F: Field>(phi: &SheafMorphism<F>, m: &[Subspace<F>]) -> Vec<Subspace<F>> {
    let field = phi.field();
    let sg = phi.source_groups();
    let tg = phi.target_groups();
    let so = offsets(&sg);
    let to = offsets(&tg);
    tg.iter()
        .enumerate()
        .map(|(j, &nj)| {
            let mut vecs: Vec<Vec<F::Elem>> = Vec::new();
            for (i, mi) in m.iter().enumerate() {
                let deg = phi.target()[to[j]] - phi.source()[so[i]];
                if deg < 0 {
                    continue;
                }
                for v in mi.basis() {
                    // column phi v restricted to the rows of group j
                    let col: Vec<_> = (0..nj)
                        .map(|r| {
                            let mut acc = crate::form::Form::zero(field, deg);
                            for (k, c) in v.iter().enumerate() {
                                if !field.is_zero(c) {
                                    acc = acc.add(&phi.entry(to[j] + r, so[i] + k).scale(c));
                                }
                            }
                            acc
                        })
                        .collect();
                    let nmon = col[0].coeffs().len();
                    for mono in 0..nmon {
                        let w: Vec<F::Elem> = col.iter().map(|f| f.coeffs()[mono].clone()).collect();
                        if w.iter().any(|x| !field.is_zero(x)) {
                            vecs.push(w);
                        }
                    }
                }
            }
            Subspace::span(field, nj, vecs)
        })
        .collect()
}

fn slope_sides(sigma: &Polarization, m: &[Subspace<impl Field>], n: &[Subspace<impl Field>]) -> (BigRational, BigRational) {
    let dm: Vec<usize> = m.iter().map(|s| s.dim()).collect();
    let dn: Vec<usize> = n.iter().map(|s| s.dim()).collect();
    (weighted(&sigma.lambdas, &dm), weighted(&sigma.mus, &dn))
}

/// Exhaustive polarized test over all tuples `(M_i)` of subspaces of
/// F_q^{m_i}, against the minimal `(N_j)`. A tuple counts only when some
/// `N_j` is proper; it destabilizes when `sum lambda_i dim M_i >
/// sum mu_j dim N_j`.
pub fn gred_semistable<F: Field>(
    phi: &SheafMorphism<F>,
    sigma: &Polarization,
    budget: u128,
) -> Result<StabilityVerdict<F>> {
    let field = phi.field();
    let sg = phi.source_groups();
    let tg = phi.target_groups();
    sigma.check(&sg, &tg)?;
    let per_group: Vec<Vec<Subspace<F>>> = sg
        .iter()
        .map(|&mi| enumerate_all(mi, 0..=mi, field, budget))
        .collect::<Result<_>>()?;
    let total = per_group
        .iter()
        .fold(1u128, |a, g| a.saturating_mul(g.len() as u128));
    if total > budget {
        return Err(PslError::BudgetExceeded { count: total, budget });
    }
    let mut idx = vec![0usize; sg.len()];
    let mut equality: Option<Tuple<F>> = None;
    loop {
        let m: Vec<Subspace<F>> = idx.iter().zip(&per_group).map(|(&k, g)| g[k].clone()).collect();
        if m.iter().any(|s| s.dim() > 0) {
            let n = minimal_targets(phi, &m);
            if n.iter().any(|s| !s.is_full()) {
                let (lhs, rhs) = slope_sides(sigma, &m, &n);
                if lhs > rhs {
                    return Ok(StabilityVerdict {
                        status: Status::Unstable,
                        certainty: Certainty::Exact,
                        field: field.spec(),
                        witness: Some(Witness::Polarized {
                            m,
                            n,
                            configuration: None,
                            translate: None,
                        }),
                    });
                }
                if lhs == rhs && equality.is_none() {
                    equality = Some((m, n));
                }
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(match equality {
                    Some((m, n)) => StabilityVerdict {
                        status: Status::StrictlySemistable,
                        certainty: Certainty::Exact,
                        field: field.spec(),
                        witness: Some(Witness::Polarized {
                            m,
                            n,
                            configuration: None,
                            translate: None,
                        }),
                    },
                    None => StabilityVerdict {
                        status: Status::Stable,
                        certainty: Certainty::Exact,
                        field: field.spec(),
                        witness: None,
                    },
                });
            }
            idx[k] += 1;
            if idx[k] < per_group[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Re-checks a polarized witness: inclusion into `(N_j)` and the claimed
/// slope relation.
pub fn verify_polarized_witness<F: Field>(
    phi: &SheafMorphism<F>,
    sigma: &Polarization,
    m: &[Subspace<F>],
    n: &[Subspace<F>],
    status: Status,
) -> bool {
    let minimal = minimal_targets(phi, m);
    if minimal.len() != n.len() || !minimal.iter().zip(n).all(|(a, b)| b.contains_subspace(a)) {
        return false;
    }
    if m.iter().all(|s| s.dim() == 0) || n.iter().all(|s| s.is_full()) {
        return false;
    }
    let (lhs, rhs) = slope_sides(sigma, m, n);
    match status {
        Status::Unstable => lhs > rhs,
        Status::StrictlySemistable => lhs == rhs,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GMode {
    /// Checks exactly the forbidden configurations of the
    /// `2O(-2) + O(-1) -> O(-1) + 2O` case.
    ExactList,
    /// Runs the polarized test on `samples` random unipotent translates.
    MonteCarlo { samples: usize, seed: u64 },
}

const SOURCE_42: [i32; 3] = [-2, -2, -1];
const TARGET_42: [i32; 3] = [-1, 0, 0];

pub fn g_semistable<F: Field>(
    phi: &SheafMorphism<F>,
    sigma: &Polarization,
    mode: GMode,
    budget: u128,
) -> Result<StabilityVerdict<F>> {
    match mode {
        GMode::ExactList => exact_list_42(phi, sigma),
        GMode::MonteCarlo { samples, seed } => {
            let field = phi.field();
            if field.order().is_none() {
                return Err(PslError::NotPrimeField);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for s in 0..=samples {
                let translate = if s == 0 {
                    phi.clone()
                } else {
                    let ut = random_unipotent(field, phi.target(), &mut rng);
                    let us = random_unipotent(field, phi.source(), &mut rng);
                    act(&ut, phi, &us)?
                };
                let v = gred_semistable(&translate, sigma, budget)?;
                if v.status == Status::Unstable {
                    let Some(Witness::Polarized { m, n, .. }) = v.witness else {
                        unreachable!("polarized verdicts carry polarized witnesses");
                    };
                    return Ok(StabilityVerdict {
                        status: Status::Unstable,
                        certainty: Certainty::Exact,
                        field: field.spec(),
                        witness: Some(Witness::Polarized {
                            m,
                            n,
                            configuration: Some(format!("translate {s}")),
                            translate: Some(translate),
                        }),
                    });
                }
            }
            Ok(StabilityVerdict {
                status: Status::Semistable,
                certainty: Certainty::OneSided,
                field: field.spec(),
                witness: None,
            })
        }
    }
}

fn exact_list_42<F: Field>(phi: &SheafMorphism<F>, sigma: &Polarization) -> Result<StabilityVerdict<F>> {
    if phi.source() != SOURCE_42 || phi.target() != TARGET_42 {
        return Err(PslError::ModeUnavailable(format!(
            "exact-list needs {SOURCE_42:?} -> {TARGET_42:?}, got {:?} -> {:?}",
            phi.source(),
            phi.target()
        )));
    }
    // the forbidden list characterizes semistability of injective maps only
    if !phi.is_injective() {
        return Err(PslError::NotInjective);
    }
    sigma.check(&[2, 1], &[1, 2])?;
    let mu = sigma.lambdas[1].clone();
    let expected = Polarization::for_42(mu.clone());
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if *sigma != expected || mu <= third || mu >= half {
        return Err(PslError::ModeUnavailable(
            "exact-list needs ((1-mu)/2, mu, mu, (1-mu)/2) with 1/3 < mu < 1/2".into(),
        ));
    }
    let field = phi.field();
    // For injective maps every configuration on the list is visible on `phi`
    // itself: a unipotent translate can only realize one by sending the
    // rank-3 source into a rank-2 summand.
    let verdict = match forbidden_configuration(phi) {
        Some((name, (m, n))) => StabilityVerdict {
            status: Status::Unstable,
            certainty: Certainty::Exact,
            field: field.spec(),
            witness: Some(Witness::Polarized {
                m,
                n,
                configuration: Some(name.to_string()),
                translate: None,
            }),
        },
        None => StabilityVerdict {
            status: Status::Semistable,
            certainty: Certainty::Exact,
            field: field.spec(),
            witness: None,
        },
    };
    Ok(verdict)
}

/// First configuration from the forbidden list realized by `w`.
fn forbidden_configuration<F: Field>(w: &SheafMorphism<F>) -> Option<(&'static str, Tuple<F>)> {
    let field = w.field();
    let zero1 = Subspace::zero(field, 1);
    let full1 = Subspace::full(field, 1);
    let zero2 = Subspace::zero(field, 2);
    let full2 = Subspace::full(field, 2);
    let line = |v: Vec<F::Elem>| Subspace::span(field, 2, vec![v]);

    // Columns 0, 1 as coefficient matrices: rows indexed by (row, monomial).
    let coeff_rows = |rows: &[usize]| -> Matrix<F> {
        let mut out: Vec<Vec<F::Elem>> = Vec::new();
        for &r in rows {
            let n = w.entry(r, 0).coeffs().len();
            for mono in 0..n {
                out.push(vec![
                    w.entry(r, 0).coeffs()[mono].clone(),
                    w.entry(r, 1).coeffs()[mono].clone(),
                ]);
            }
        }
        Matrix::from_rows(field, out).expect("rectangular")
    };
    let kernel_line = |rows: &[usize]| -> Option<Vec<F::Elem>> {
        coeff_rows(rows).kernel_basis().basis().first().cloned()
    };

    let mut candidates = vec![
        ("(2,0)->(1,0)", vec![full2.clone(), zero1.clone()], [1, 0]),
        ("(2,0)->(0,1)", vec![full2.clone(), zero1.clone()], [0, 1]),
        ("(0,1)->(0,1)", vec![zero2.clone(), full1.clone()], [0, 1]),
        ("(0,1)->(0,0)", vec![zero2, full1.clone()], [0, 0]),
    ];
    if let Some(v) = kernel_line(&[0]) {
        candidates.push(("(1,1)->(0,2)", vec![line(v), full1.clone()], [0, 2]));
    }
    if let Some(v) = kernel_line(&[1, 2]) {
        candidates.push(("(1,1)->(1,0)", vec![line(v), full1], [1, 0]));
    }
    if let Some(v) = kernel_line(&[0, 1, 2]) {
        candidates.push(("(1,0)->(0,0)", vec![line(v), zero1], [0, 0]));
    }
    candidates.into_iter().find_map(|(name, m, bound)| {
        let n = minimal_targets(w, &m);
        (n[0].dim() <= bound[0] && n[1].dim() <= bound[1]).then_some((name, (m, n)))
    })
}
