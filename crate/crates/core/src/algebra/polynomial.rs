//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration (and therefore printing) is
//! deterministic. Zero coefficients are never stored.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{denominator_lcm, integer_gcd, Rational};
use crate::error::{Error, Result};

pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Exponent vector ordered by total degree, then lexicographically with the
/// first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_terms(vars, [(Monomial::one(vars.len()), c)])
    }

    /// The `index`-th variable as a polynomial.
    pub fn variable(vars: &Vars, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Self::from_terms(vars, [(Monomial(exps), Rational::one())])
    }

    pub fn named(vars: &Vars, name: &str) -> Result<Self> {
        let index = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::invalid(format!("unknown variable {name}")))?;
        Ok(Self::variable(vars, index))
    }

    /// `constant + Σ coeffs[i]·vars[i]`.
    pub fn linear(vars: &Vars, constant: Rational, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let mut terms = vec![(Monomial::one(vars.len()), constant)];
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; vars.len()];
            exps[i] = 1;
            terms.push((Monomial(exps), c.clone()));
        }
        Self::from_terms(vars, terms)
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length mismatch");
            add_term(&mut map, m, c);
        }
        Polynomial {
            vars: vars.clone(),
            terms: map,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, index: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.0[index];
            (e > 0).then(|| {
                let mut exps = m.0.clone();
                exps[index] -= 1;
                (Monomial(exps), c * Rational::from_integer(BigInt::from(e)))
            })
        });
        Self::from_terms(&self.vars, terms)
    }

    /// Evaluates by mapping every coefficient through `coeff`.
    pub fn eval_with<T, F>(&self, values: &[T], coeff: F) -> T
    where
        T: Clone + Zero + One + Mul<Output = T> + Add<Output = T>,
        F: Fn(&Rational) -> T,
    {
        assert_eq!(values.len(), self.vars.len(), "wrong number of values");
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut term = coeff(c);
            for (v, &e) in values.iter().zip(&m.0) {
                for _ in 0..e {
                    term = term * v.clone();
                }
            }
            total = total + term;
        }
        total
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.eval_with(values, Rational::clone)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.eval_with(values, super::rational::to_f64)
    }

    pub fn eval_complex(&self, values: &[num_complex::Complex64]) -> num_complex::Complex64 {
        self.eval_with(values, |c| {
            num_complex::Complex64::new(super::rational::to_f64(c), 0.0)
        })
    }

    /// Replaces variable `i` by `images[i]`; all images share one variable list.
    pub fn substitute(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut total = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            total = &total + &term;
        }
        total
    }

    /// Re-expresses the polynomial over a variable list containing all of its
    /// variables (matched by name).
    pub fn with_vars(&self, target: &Vars) -> Result<Self> {
        if *target == self.vars {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .ok_or_else(|| Error::invalid(format!("variable {v} missing from target")))
            })
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] = e;
            }
            (Monomial(exps), c.clone())
        });
        Ok(Self::from_terms(target, terms))
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let lcm = denominator_lcm(self.terms.values());
        let nums: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        Rational::new(integer_gcd(&nums), lcm)
    }

    /// Integer-coefficient primitive polynomial with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (a, b) = aligned(self, divisor);
        let (a, b) = (a.as_ref(), b.as_ref());
        let (lead_m, lead_c) = b.leading_term()?;
        let mut rem = a.terms.clone();
        let mut quotient = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(lead_m)?;
            let qc = c / lead_c;
            for (bm, bc) in &b.terms {
                add_term(&mut rem, qm.mul(bm), -(&qc * bc));
            }
            add_term(&mut quotient, qm, qc);
        }
        Some(Polynomial {
            vars: a.vars.clone(),
            terms: quotient,
        })
    }

    /// Homogenizes to total degree `degree` with a new leading variable.
    pub fn homogenize(&self, name: &str, degree: u32) -> Result<Self> {
        if self.degree().is_some_and(|d| d > degree) {
            return Err(Error::invalid(
                "homogenizing degree below polynomial degree",
            ));
        }
        let mut names = vec![name.to_string()];
        names.extend(self.vars.iter().cloned());
        let target: Vars = names.into();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![degree - m.degree()];
            exps.extend(&m.0);
            (Monomial(exps), c.clone())
        });
        Ok(Self::from_terms(&target, terms))
    }

    fn raw_add(&self, other: &Polynomial, sign: bool) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), if sign { c.clone() } else { -c });
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    fn raw_mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }
}

fn add_term(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Name-sorted union of two variable lists.
pub fn union_vars(a: &Vars, b: &Vars) -> Vars {
    let mut names: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    names.sort();
    names.dedup();
    names.into()
}

/// Brings both operands onto a common variable list; identical lists are left alone.
pub fn aligned<'a>(
    a: &'a Polynomial,
    b: &'a Polynomial,
) -> (Cow<'a, Polynomial>, Cow<'a, Polynomial>) {
    if a.vars == b.vars {
        return (Cow::Borrowed(a), Cow::Borrowed(b));
    }
    let target = union_vars(&a.vars, &b.vars);
    (
        Cow::Owned(a.with_vars(&target).expect("union contains all variables")),
        Cow::Owned(b.with_vars(&target).expect("union contains all variables")),
    )
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = aligned(self, rhs);
        a.raw_add(&b, true)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = aligned(self, rhs);
        a.raw_add(&b, false)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = aligned(self, rhs);
        a.raw_mul(&b)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            self.vars[i].clone()
                        } else {
                            format!("{}^{}", self.vars[i], e)
                        }
                    })
                    .collect();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", magnitude, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn xy() -> (Polynomial, Polynomial) {
        let v = vars(&["x", "y"]);
        (Polynomial::variable(&v, 0), Polynomial::variable(&v, 1))
    }

    #[test]
    fn graded_lex_printing() {
        let (x, y) = xy();
        let one = Polynomial::one(x.vars());
        let p = &(&(&x * &x) - (&y.scale(&rat(1, 2)))) + &(&(&x * &y).scale(&int(3)) - &one);
        assert_eq!(p.to_string(), "x^2 + 3*x*y - 1/2*y - 1");
        assert_eq!(Polynomial::zero(x.vars()).to_string(), "0");
        assert_eq!((-&x).to_string(), "-x");
    }

    #[test]
    fn cancellation_removes_terms() {
        let (x, y) = xy();
        let p = &(&x + &y) - &x;
        assert_eq!(p, y);
        assert_eq!(p.num_terms(), 1);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn alignment_by_name() {
        let a = Polynomial::variable(&vars(&["y"]), 0);
        let b = Polynomial::variable(&vars(&["x"]), 0);
        let s = &a + &b;
        assert_eq!(&**s.vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(s.to_string(), "x + y");
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        let one = Polynomial::one(x.vars());
        let f = &(&x + &y) * &(&x - &one);
        assert_eq!(f.div_exact(&(&x - &one)).unwrap(), &x + &y);
        assert!(f.div_exact(&(&x + &one)).is_none());
        assert!(f.div_exact(&Polynomial::zero(x.vars())).is_none());
    }

    #[test]
    fn substitution_and_derivative() {
        let (x, y) = xy();
        let p = &(&x * &x) + &y;
        let q = p.substitute(&[&x + &y, x.clone()]);
        assert_eq!(
            q,
            &(&(&x * &x) + (&(&x * &y).scale(&int(2)))) + &(&(&y * &y) + &x)
        );
        assert_eq!(p.derivative(0), x.scale(&int(2)));
        assert_eq!(p.eval(&[int(3), int(-1)]), int(8));
    }

    #[test]
    fn content_and_primitive() {
        let (x, y) = xy();
        let p = &x.scale(&rat(-2, 3)) + &y.scale(&rat(4, 9));
        assert_eq!(p.content(), rat(2, 9));
        assert_eq!(p.primitive_part().to_string(), "3*x - 2*y");
    }

    #[test]
    fn homogenization() {
        let (x, _) = xy();
        let p = &x + &Polynomial::one(x.vars());
        let h = p.homogenize("x0", 2).unwrap();
        assert_eq!(h.to_string(), "x0^2 + x0*x");
    }
}
