//! Sums of fractions whose denominators are products of known factors.
//!
//! Canonical forms and tree amplitudes are sums of terms `num / ∏ fᵢ^eᵢ`
//! where the `fᵢ` are linear forms. Keeping the factors separate lets the
//! sum use the least common multiple of the denominators instead of their
//! product, and afterwards each factor is cancelled against the numerator
//! by exact division wherever possible (spurious poles drop out).

use num_traits::{One, Signed};

use super::polynomial::{Polynomial, Vars};
use super::rational::Rational;
use super::rational_function::RationalFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FactoredFraction {
    num: Polynomial,
    /// Primitive factors with positive leading coefficient, pairwise distinct.
    factors: Vec<(Polynomial, u32)>,
}

impl FactoredFraction {
    pub fn zero(vars: &Vars) -> Self {
        FactoredFraction {
            num: Polynomial::zero(vars),
            factors: Vec::new(),
        }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        FactoredFraction {
            num: p,
            factors: Vec::new(),
        }
    }

    /// `num / ∏ den_factors`; repeated factors are allowed.
    pub fn new(num: Polynomial, den_factors: &[Polynomial]) -> Result<Self> {
        let mut out = Self::polynomial(num);
        for f in den_factors {
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let c = primitive_scale(f);
            out.num = out.num.scale(&c);
            let p = f.scale(&c);
            match out.factors.iter_mut().find(|(g, _)| *g == p) {
                Some((_, e)) => *e += 1,
                None => out.factors.push((p, 1)),
            }
        }
        Ok(out)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (g, e) in &other.factors {
            match factors.iter_mut().find(|(f, _)| f == g) {
                Some((_, fe)) => *fe = (*fe).max(*e),
                None => factors.push((g.clone(), *e)),
            }
        }
        let lift = |part: &Self| {
            let mut num = part.num.clone();
            for (f, e) in &factors {
                let have = part
                    .factors
                    .iter()
                    .find(|(g, _)| g == f)
                    .map_or(0, |(_, ge)| *ge);
                if *e > have {
                    num = &num * &f.pow(e - have);
                }
            }
            num
        };
        FactoredFraction {
            num: &lift(self) + &lift(other),
            factors,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (g, e) in &other.factors {
            match factors.iter_mut().find(|(f, _)| f == g) {
                Some((_, fe)) => *fe += e,
                None => factors.push((g.clone(), *e)),
            }
        }
        FactoredFraction {
            num: &self.num * &other.num,
            factors,
        }
    }

    /// Cancels every factor that divides the numerator exactly.
    pub fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.factors.clear();
            return self;
        }
        for (f, e) in self.factors.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|(_, e)| *e > 0);
        self
    }

    /// Numerator over the given denominator factors, which must include every
    /// remaining factor of `self` (after [`reduce`](Self::reduce)).
    pub fn numerator_over(&self, den_factors: &[Polynomial]) -> Result<Polynomial> {
        let reduced = self.clone().reduce();
        let mut num = reduced.num.clone();
        let mut remaining = reduced.factors.clone();
        for f in den_factors {
            let c = primitive_scale(f);
            let p = f.scale(&c);
            // f = p / c
            num = num.scale(&c.recip());
            match remaining.iter_mut().find(|(g, e)| *g == p && *e > 0) {
                Some((_, e)) => *e -= 1,
                None => num = &num * &p,
            }
        }
        if remaining.iter().any(|(_, e)| *e > 0) {
            return Err(Error::invalid(
                "denominator factors do not cover the reduced denominator",
            ));
        }
        Ok(num)
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let reduced = self.clone().reduce();
        let mut den = Polynomial::one(reduced.num.vars());
        for (f, e) in &reduced.factors {
            den = &den * &f.pow(*e);
        }
        RationalFunction::new(reduced.num, den).expect("factors are nonzero")
    }
}

/// Scalar `c` making `c·f` primitive with positive leading coefficient.
fn primitive_scale(f: &Polynomial) -> Rational {
    let mut c = f.content().recip();
    if f.leading_coefficient().is_negative() {
        c = -c;
    }
    if c.is_one() {
        Rational::one()
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polynomial::vars;
    use crate::algebra::rational::int;
    use crate::algebra::rational_function::rf_equal;

    #[test]
    fn lcm_denominators_and_cancellation() {
        let v = vars(&["x", "y"]);
        let x = Polynomial::variable(&v, 0);
        let y = Polynomial::variable(&v, 1);
        let one = Polynomial::one(&v);
        // 1/(x(x+y)) + 1/(y(x+y)) = 1/(xy)
        let a = FactoredFraction::new(one.clone(), &[x.clone(), &x + &y]).unwrap();
        let b =
            FactoredFraction::new(one.clone(), &[y.clone(), (&x + &y).scale(&int(-2))]).unwrap();
        let b = b.mul(&FactoredFraction::polynomial(one.scale(&int(-2))));
        let s = a.add(&b).reduce();
        assert_eq!(s.factors().len(), 2);
        let expected = RationalFunction::new(one.clone(), &x * &y).unwrap();
        assert!(rf_equal(&s.to_rational_function(), &expected));
        let over = s.numerator_over(&[x.clone(), y.clone(), &x + &y]).unwrap();
        assert_eq!(over, &x + &y);
    }
}
