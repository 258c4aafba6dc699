//! Exact multivariate rational functions.
//!
//! Canonical form removes rational content (numerator and denominator get
//! coprime integer coefficients) and makes the denominator's leading
//! coefficient positive. A full multivariate gcd is not computed; instead
//! the cheap reductions below are applied, and equality is decided by
//! cross-multiplication so it never depends on how far a value was reduced.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::polynomial::{aligned, Monomial, Polynomial, Vars};
use super::rational::{denominator_lcm, integer_gcd, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = aligned(&num, &den);
        Ok(Self::canonical(num.into_owned(), den.into_owned()))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        Self::canonical(p, den)
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(vars, c))
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_polynomial(Polynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_polynomial(Polynomial::one(vars))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn with_vars(&self, target: &Vars) -> Result<Self> {
        Ok(RationalFunction {
            num: self.num.with_vars(target)?,
            den: self.den.with_vars(target)?,
        })
    }

    pub fn arith(&self, other: &Self, op: RfOp) -> Result<Self> {
        let (a, b) = self.aligned_with(other);
        match op {
            RfOp::Add => Ok(a.sum(&b, false)),
            RfOp::Sub => Ok(a.sum(&b, true)),
            RfOp::Mul => Ok(a.product(&b)),
            RfOp::Div => {
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(a.product(&b.recip()?))
            }
        }
    }

    /// `a − b ≡ 0`, decided by expanding `a.num·b.den − b.num·a.den`.
    pub fn equals(&self, other: &Self) -> bool {
        let (a, b) = self.aligned_with(other);
        (&a.num * &b.den) == (&b.num * &a.den)
    }

    /// Exact evaluation; errors when the denominator vanishes.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        let den = self.den.eval(values);
        if den.is_zero() {
            return Err(Error::Pole(format!("denominator {}", self.den)));
        }
        Ok(self.num.eval(values) / den)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    pub fn eval_complex(&self, values: &[num_complex::Complex64]) -> num_complex::Complex64 {
        self.num.eval_complex(values) / self.den.eval_complex(values)
    }

    /// Substitutes polynomials for the variables (see [`Polynomial::substitute`]).
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self> {
        Self::new(self.num.substitute(images), self.den.substitute(images))
    }

    /// Substitutes rational functions for the variables.
    pub fn compose(&self, images: &[RationalFunction]) -> Result<Self> {
        let eval = |p: &Polynomial| -> Result<RationalFunction> {
            let first = images
                .first()
                .map(|r| r.vars().clone())
                .unwrap_or_else(|| p.vars().clone());
            let mut total = RationalFunction::zero(&first);
            for (m, c) in p.terms() {
                let mut term = RationalFunction::constant(&first, c.clone());
                for (i, &e) in m.exponents().iter().enumerate() {
                    for _ in 0..e {
                        term = term.arith(&images[i], RfOp::Mul)?;
                    }
                }
                total = total.arith(&term, RfOp::Add)?;
            }
            Ok(total)
        };
        eval(&self.num)?.arith(&eval(&self.den)?, RfOp::Div)
    }

    fn aligned_with(&self, other: &Self) -> (RationalFunction, RationalFunction) {
        if self.vars() == other.vars() {
            return (self.clone(), other.clone());
        }
        let target = super::polynomial::union_vars(self.vars(), other.vars());
        (
            self.with_vars(&target)
                .expect("union contains all variables"),
            other
                .with_vars(&target)
                .expect("union contains all variables"),
        )
    }

    fn sum(&self, other: &Self, subtract: bool) -> Self {
        let rhs_num = if subtract {
            -&other.num
        } else {
            other.num.clone()
        };
        if self.den == other.den {
            return Self::canonical(&self.num + &rhs_num, self.den.clone());
        }
        if let Some(q) = self.den.div_exact(&other.den) {
            return Self::canonical(&self.num + &(&rhs_num * &q), self.den.clone());
        }
        if let Some(q) = other.den.div_exact(&self.den) {
            return Self::canonical(&(&self.num * &q) + &rhs_num, other.den.clone());
        }
        Self::canonical(
            &(&self.num * &other.den) + &(&rhs_num * &self.den),
            &self.den * &other.den,
        )
    }

    fn product(&self, other: &Self) -> Self {
        // Cross-cancel exact factors before multiplying out.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        if !d2.is_constant() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Polynomial::one(d2.vars());
            }
        }
        if !d1.is_constant() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Polynomial::one(d1.vars());
            }
        }
        Self::canonical(&n1 * &n2, &d1 * &d2)
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            let one = Polynomial::one(num.vars());
            return RationalFunction { num, den: one };
        }
        let (mut num, mut den) = (num, den);
        if let Some(q) = num.div_exact(&den) {
            num = q;
            den = Polynomial::one(num.vars());
        }
        let (num, den) = cancel_monomial(num, den);

        let lcm = denominator_lcm(num.terms().chain(den.terms()).map(|(_, c)| c));
        let scale = Rational::from_integer(lcm);
        let ints: Vec<BigInt> = num
            .terms()
            .chain(den.terms())
            .map(|(_, c)| (c * &scale).to_integer())
            .collect();
        let g = Rational::from_integer(integer_gcd(&ints));
        let mut factor = scale / g;
        if den.leading_coefficient().is_negative() {
            factor = -factor;
        }
        RationalFunction {
            num: num.scale(&factor),
            den: den.scale(&factor),
        }
    }
}

/// Divides out the largest monomial dividing both numerator and denominator.
fn cancel_monomial(num: Polynomial, den: Polynomial) -> (Polynomial, Polynomial) {
    let nvars = num.nvars();
    let mut common = vec![u32::MAX; nvars];
    for (m, _) in num.terms().chain(den.terms()) {
        for (c, &e) in common.iter_mut().zip(m.exponents()) {
            *c = (*c).min(e);
        }
    }
    if common.iter().all(|&e| e == 0 || e == u32::MAX) {
        return (num, den);
    }
    let shift = |p: &Polynomial| {
        Polynomial::from_terms(
            p.vars(),
            p.terms().map(|(m, c)| {
                (
                    Monomial(
                        m.exponents()
                            .iter()
                            .zip(&common)
                            .map(|(e, c)| e - c)
                            .collect(),
                    ),
                    c.clone(),
                )
            }),
        )
    };
    (shift(&num), shift(&den))
}

/// Value equality in the sense of [`RationalFunction::equals`].
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

pub fn rf_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    a.equals(b)
}

pub fn rf_arith(a: &RationalFunction, b: &RationalFunction, op: RfOp) -> Result<RationalFunction> {
    a.arith(b, op)
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.arith(rhs, RfOp::Add).expect("addition cannot fail")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.arith(rhs, RfOp::Sub).expect("subtraction cannot fail")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.arith(rhs, RfOp::Mul)
            .expect("multiplication cannot fail")
    }
}

/// Panics on division by zero; use [`RationalFunction::arith`] to handle it.
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.arith(rhs, RfOp::Div)
            .expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polynomial::vars;
    use crate::algebra::rational::int;

    fn xy() -> (RationalFunction, RationalFunction, Vars) {
        let v = vars(&["x", "y"]);
        (
            Polynomial::variable(&v, 0).into(),
            Polynomial::variable(&v, 1).into(),
            v,
        )
    }

    #[test]
    fn common_denominator() {
        let (x, y, v) = xy();
        let one = RationalFunction::one(&v);
        let sum = &(&one / &x) + &(&one / &y);
        assert_eq!(sum.to_string(), "(x + y)/(x*y)");
        let expected = &(&x + &y) / &(&x * &y);
        assert!(rf_equal(&sum, &expected));
    }

    #[test]
    fn identity_and_cancellation() {
        let (x, y, v) = xy();
        let one = RationalFunction::one(&v);
        let f = &(&x + &one) / &(&y * &y);
        assert!(rf_equal(&(&f * &one), &f));
        assert!(rf_equal(&(&x / &x), &one));
        assert!(!rf_equal(&(&one / &x), &(&one / &y)));
        assert_eq!((&x / &x).to_string(), "1");
    }

    #[test]
    fn division_by_zero() {
        let (x, _, v) = xy();
        let zero = RationalFunction::zero(&v);
        assert_eq!(
            x.arith(&zero, RfOp::Div).unwrap_err(),
            Error::DivisionByZero
        );
        assert!(RationalFunction::new(Polynomial::one(&v), Polynomial::zero(&v)).is_err());
    }

    #[test]
    fn content_and_sign_normalized() {
        let v = vars(&["x"]);
        let x = Polynomial::variable(&v, 0);
        let f = RationalFunction::new(
            x.scale(&int(-4)),
            (&x + &Polynomial::one(&v)).scale(&int(-6)),
        )
        .unwrap();
        assert_eq!(f.to_string(), "(2*x)/(3*x + 3)");
    }

    #[test]
    fn pole_evaluation() {
        let (x, _, v) = xy();
        let f = &RationalFunction::one(&v) / &x;
        assert!(matches!(f.eval(&[int(0), int(1)]), Err(Error::Pole(_))));
        assert_eq!(
            f.eval(&[int(4), int(1)]).unwrap(),
            crate::algebra::rational::rat(1, 4)
        );
    }
}
