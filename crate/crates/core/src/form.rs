// SPDX-License-Identifier: Apache-2.0
//! Homogeneous forms in x0, x1, x2, stored densely in degree-lex order
//! (x0 > x1 > x2).

use std::fmt;

use rand::Rng;

use crate::error::{PslError, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Exponent triple (i, j, k) for x0^i x1^j x2^k.
pub type Monomial = [u32; 3];

/// Number of monomials of degree `d`; zero for negative degrees.
pub fn monomial_count(d: i32) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

pub fn monomial_basis(d: i32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(monomial_count(d));
    if d < 0 {
        return out;
    }
    let d = d as u32;
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Position of `m` inside `monomial_basis(deg m)`.
pub fn monomial_index(m: Monomial) -> usize {
    let d = m[0] + m[1] + m[2];
    let s = (d - m[0]) as usize;
    s * (s + 1) / 2 + (s - m[1] as usize)
}

/// A homogeneous form. Negative degrees are allowed and always denote zero,
/// which keeps block matrices of forms uniform.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<F: Field> {
    field: F,
    degree: i32,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}

impl<F: Field> Form<F> {
    pub fn zero(field: F, degree: i32) -> Self {
        Self {
            field,
            degree,
            coeffs: vec![field.zero(); monomial_count(degree)],
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self {
            field,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The variable x_i.
    pub fn var(field: F, i: usize) -> Self {
        let mut m = [0u32; 3];
        m[i] = 1;
        Self::monomial(field, m, field.one())
    }

    pub fn monomial(field: F, m: Monomial, c: F::Elem) -> Self {
        let degree = (m[0] + m[1] + m[2]) as i32;
        let mut f = Self::zero(field, degree);
        f.coeffs[monomial_index(m)] = c;
        f
    }

    /// Linear form c0*x0 + c1*x1 + c2*x2.
    pub fn linear(field: F, c: [F::Elem; 3]) -> Self {
        Self {
            field,
            degree: 1,
            coeffs: c.to_vec(),
        }
    }

    pub fn from_coeffs(field: F, degree: i32, coeffs: Vec<F::Elem>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(PslError::ShapeMismatch(format!(
                "{} coefficients for a degree-{degree} form",
                coeffs.len()
            )));
        }
        Ok(Self {
            field,
            degree,
            coeffs,
        })
    }

    pub fn random<R: Rng + ?Sized>(field: F, degree: i32, rng: &mut R) -> Self {
        let coeffs = (0..monomial_count(degree))
            .map(|_| field.random(rng))
            .collect();
        Self {
            field,
            degree,
            coeffs,
        }
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Coefficients in `monomial_basis(degree)` order.
    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, m: Monomial) -> F::Elem {
        if (m[0] + m[1] + m[2]) as i32 != self.degree {
            return self.field.zero();
        }
        self.coeffs[monomial_index(m)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &F::Elem)> + '_ {
        monomial_basis(self.degree)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !self.field.is_zero(c))
    }

    /// Same form with a different degree tag; only legal for zero forms or a
    /// no-op.
    pub fn retagged(&self, degree: i32) -> Option<Self> {
        if degree == self.degree {
            Some(self.clone())
        } else if self.is_zero() {
            Some(Self::zero(self.field, degree))
        } else {
            None
        }
    }

    /// Sum of two forms. A zero summand of a different degree is ignored.
    ///
    /// # Panics
    /// If both forms are nonzero of different degrees.
    pub fn add(&self, other: &Self) -> Self {
        if self.degree != other.degree {
            if other.is_zero() {
                return self.clone();
            }
            if self.is_zero() {
                return other.clone();
            }
            panic!(
                "adding forms of degrees {} and {}",
                self.degree, other.degree
            );
        }
        let f = self.field;
        Self {
            field: f,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self {
            field: f,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Self {
            field: f,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(f, degree);
        if self.degree < 0 || other.degree < 0 {
            return out;
        }
        let rhs: Vec<(Monomial, F::Elem)> =
            other.terms().map(|(m, c)| (m, c.clone())).collect();
        for (m1, c1) in self.terms() {
            for (m2, c2) in &rhs {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
                let idx = monomial_index(m);
                out.coeffs[idx] = f.add(&out.coeffs[idx], &f.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem; 3]) -> F::Elem {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (v, e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = f.mul(&t, v);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Exact quotient `self / g` when `g` divides `self`.
    pub fn divide_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() {
            return None;
        }
        let d = self.degree - g.degree;
        if self.is_zero() {
            return Some(Self::zero(self.field, d.max(0)));
        }
        if d < 0 {
            return None;
        }
        let m = multiplication_map(g, d);
        let x = m.solve(&self.coeffs).ok()?;
        Some(Self {
            field: self.field,
            degree: d,
            coeffs: x,
        })
    }

    /// Parses the canonical syntax, e.g. `3*x0^2*x1 - x2^3` or `1/2*x0`.
    /// `degree` is required for a zero form and checked otherwise.
    pub fn parse(field: F, s: &str, degree: Option<i32>) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(PslError::Parse("empty form".into()));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        let bytes = text.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'+' || b == b'-' {
                if i > start {
                    terms.push((negative, &text[start..i]));
                } else if i > 0 {
                    return Err(PslError::Parse(format!("dangling sign in '{s}'")));
                }
                negative = b == b'-';
                start = i + 1;
            }
        }
        if start >= text.len() {
            return Err(PslError::Parse(format!("trailing sign in '{s}'")));
        }
        terms.push((negative, &text[start..]));

        let mut parsed: Vec<(Monomial, F::Elem)> = Vec::new();
        for (neg, term) in terms {
            let mut coeff = field.one();
            let mut mono = [0u32; 3];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(PslError::Parse(format!("empty factor in '{s}'")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (
                            v,
                            e.parse::<u32>()
                                .map_err(|_| PslError::Parse(format!("bad exponent in '{factor}'")))?,
                        ),
                        None => (rest, 1),
                    };
                    let idx = match var {
                        "0" => 0,
                        "1" => 1,
                        "2" => 2,
                        _ => return Err(PslError::Parse(format!("unknown variable 'x{var}'"))),
                    };
                    mono[idx] += exp;
                } else {
                    coeff = field.mul(&coeff, &field.parse_scalar(factor)?);
                }
            }
            if neg {
                coeff = field.neg(&coeff);
            }
            parsed.push((mono, coeff));
        }

        let nonzero: Vec<&(Monomial, F::Elem)> =
            parsed.iter().filter(|(_, c)| !field.is_zero(c)).collect();
        let deg = match (degree, nonzero.first()) {
            (Some(d), _) => d,
            (None, Some((m, _))) => (m[0] + m[1] + m[2]) as i32,
            (None, None) => {
                return Err(PslError::Parse(format!(
                    "cannot infer the degree of zero form '{s}'"
                )))
            }
        };
        let mut out = Self::zero(field, deg);
        for (m, c) in nonzero {
            let md = (m[0] + m[1] + m[2]) as i32;
            if md != deg {
                return Err(PslError::Parse(format!(
                    "term of degree {md} in a degree-{deg} form '{s}'"
                )));
            }
            let idx = monomial_index(*m);
            out.coeffs[idx] = field.add(&out.coeffs[idx], c);
        }
        Ok(out)
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field;
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = f.is_negative(c);
            let abs = if neg { f.neg(c) } else { c.clone() };
            if first {
                if neg {
                    write!(out, "-")?;
                }
            } else {
                write!(out, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let constant = m == [0, 0, 0];
            let mut parts: Vec<String> = Vec::new();
            if constant || !f.is_one(&abs) {
                parts.push(f.format(&abs));
            }
            for (i, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("x{i}")),
                    _ => parts.push(format!("x{i}^{e}")),
                }
            }
            write!(out, "{}", parts.join("*"))?;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

/// Matrix of multiplication by `f` from degree-`d` to degree-`(d + deg f)`
/// coordinates.
pub fn multiplication_map<F: Field>(f: &Form<F>, d: i32) -> Matrix<F> {
    let field = f.field();
    let e = f.degree();
    let rows = monomial_count(d + e);
    let cols = monomial_count(d);
    let mut m = Matrix::zeros(field, rows, cols);
    if e < 0 || d < 0 {
        return m;
    }
    let terms: Vec<(Monomial, F::Elem)> = f.terms().map(|(m, c)| (m, c.clone())).collect();
    for (col, src) in monomial_basis(d).into_iter().enumerate() {
        for (tm, c) in &terms {
            let row = monomial_index([src[0] + tm[0], src[1] + tm[1], src[2] + tm[2]]);
            m.set(row, col, c.clone());
        }
    }
    m
}
