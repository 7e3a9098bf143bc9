// SPDX-License-Identifier: Apache-2.0
//! Reference computations and instance generators shared by the
//! integration tests. The oracles never call into the library's linear
//! algebra.
#![allow(dead_code)]

use std::collections::BTreeMap;

use psl_core::sheaf::{act, random_automorphism};
use psl_core::stability::Status;
use psl_core::{Form, PrimeField, SheafMorphism};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of an integer matrix reduced mod p, plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let factor = a[r][c] * inv % p;
                for k in 0..ncols {
                    a[r][k] = (a[r][k] - factor * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Leibniz expansion mod p.
pub fn det_mod_p(m: &[Vec<i64>], p: i64) -> i64 {
    let n = m.len();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |perm| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = if inversions % 2 == 0 { 1 } else { p - 1 };
        for (i, &j) in perm.iter().enumerate() {
            term = term * m[i][j].rem_euclid(p) % p;
        }
        total = (total + term) % p;
    });
    total
}

fn permutations(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Sparse polynomial over F_p keyed by exponent triple.
pub type Poly = BTreeMap<[u32; 3], i64>;

pub fn to_poly(form: &Form<PrimeField>) -> Poly {
    form.terms().map(|(m, c)| (m, *c as i64)).collect()
}

pub fn poly_mul(a: &Poly, b: &Poly, p: i64) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            *out.entry(m).or_insert(0) += ca * cb;
        }
    }
    out.into_iter()
        .map(|(m, c)| (m, c.rem_euclid(p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// Exponent triples of degree d, listed by brute force.
pub fn triples(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Coefficient vectors of forms of a degree, as integer rows in the order
/// of `triples`.
pub fn coefficient_rows(forms: &[Form<PrimeField>], d: u32) -> Vec<Vec<i64>> {
    let basis = triples(d);
    forms
        .iter()
        .map(|f| {
            let p = to_poly(f);
            basis.iter().map(|m| *p.get(m).unwrap_or(&0)).collect()
        })
        .collect()
}

/// `[m choose k]_q` from the product formula.
pub fn gaussian_binomial_product(m: u32, k: u32, q: u128) -> u128 {
    if k > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(m - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

pub fn random_linear(k: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> SheafMorphism<PrimeField> {
    SheafMorphism::from_fn(k, vec![-1; cols], vec![0; rows], |_, _, d| Form::random(k, d, rng)).unwrap()
}

/// Coefficient of `x_c` in entry `(i, j)`, as an integer.
pub fn slice_entry(phi: &SheafMorphism<PrimeField>, c: usize, i: usize, j: usize) -> i64 {
    phi.entry(i, j).coeffs()[c] as i64
}

/// F_2 version with vectors as 4-bit masks and subspaces as 16-bit masks.
pub fn bitmask_oracle_44(phi: &SheafMorphism<PrimeField>) -> Status {
    let apply = |c: usize, v: u8| -> u8 {
        (0..4).fold(0u8, |acc, i| {
            let bit = (0..4).filter(|&j| v >> j & 1 == 1).map(|j| slice_entry(phi, c, i, j)).sum::<i64>() & 1;
            acc | ((bit as u8) << i)
        })
    };
    let closure = |gens: &[u8]| -> u16 {
        let mut set: u16 = 1;
        for &g in gens {
            for v in 0..16u8 {
                if set >> v & 1 == 1 {
                    set |= 1 << (v ^ g);
                }
            }
        }
        set
    };
    let subspaces: Vec<u16> = (1..=u16::MAX)
        .filter(|s| s & 1 == 1)
        .filter(|s| (0..16).all(|a| s >> a & 1 == 0 || (0..16).all(|b| s >> b & 1 == 0 || s >> (a ^ b) & 1 == 1)))
        .collect();
    assert_eq!(subspaces.len(), 67);
    let dim = |s: u16| s.count_ones().trailing_zeros() as usize;
    let mut equality = false;
    for h in subspaces {
        let dh = dim(h);
        if dh == 0 {
            continue;
        }
        let images: Vec<u8> = (0..16u8)
            .filter(|v| h >> v & 1 == 1)
            .flat_map(|v| (0..3).map(move |c| (c, v)))
            .map(|(c, v)| apply(c, v))
            .collect();
        let dk = dim(closure(&images));
        if dk < dh {
            return Status::Unstable;
        }
        if dk == dh && dh < 4 {
            equality = true;
        }
    }
    if equality {
        Status::StrictlySemistable
    } else {
        Status::Stable
    }
}

/// Block form with a zero `(4 - m) x m` corner, hidden by random changes of basis.
pub fn planted_reducible(k: PrimeField, rng: &mut ChaCha8Rng) -> SheafMorphism<PrimeField> {
    let m = rng.random_range(1..4);
    let block = SheafMorphism::from_fn(k, vec![-1; 4], vec![0; 4], |i, j, d| {
        if i >= m && j < m {
            Form::zero(k, d)
        } else {
            Form::random(k, d, rng)
        }
    })
    .unwrap();
    let left = random_automorphism(k, &[0; 4], rng);
    let right = random_automorphism(k, &[-1; 4], rng);
    act(&left, &block, &right).unwrap()
}
