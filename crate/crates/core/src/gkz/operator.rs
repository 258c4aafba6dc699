use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed};

use super::quadrature::QuadConfig;
use super::{evaluate_euler, EulerIntegrand};
use crate::algebra::{Polynomial, Vars};
use crate::error::{Error, Result};

/// `coefficient(c, params) · ∂^derivative`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTerm {
    pub coefficient: Polynomial,
    pub derivative: Vec<u32>,
}

/// A linear differential operator in `∂_{c_i}` with polynomial coefficients,
/// coefficients written to the left. Terms are merged and sorted by
/// derivative exponent, highest lexicographic first.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialOperator {
    vars: Vars,
    terms: Vec<OperatorTerm>,
}

impl DifferentialOperator {
    pub fn new(vars: &Vars, terms: Vec<(Polynomial, Vec<u32>)>) -> Self {
        let mut merged: Vec<OperatorTerm> = Vec::new();
        let mut sorted = terms;
        sorted.sort_by(|a, b| b.1.cmp(&a.1));
        for (c, d) in sorted {
            match merged.last_mut() {
                Some(last) if last.derivative == d => last.coefficient = &last.coefficient + &c,
                _ => merged.push(OperatorTerm {
                    coefficient: c,
                    derivative: d,
                }),
            }
        }
        merged.retain(|t| !t.coefficient.is_zero());
        DifferentialOperator {
            vars: vars.clone(),
            terms: merged,
        }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::new(vars, Vec::new())
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.derivative.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

fn write_derivative(f: &mut fmt::Formatter<'_>, d: &[u32]) -> fmt::Result {
    for (i, &e) in d.iter().enumerate() {
        match e {
            0 => {}
            1 => write!(f, "∂{}", i + 1)?,
            _ => write!(f, "∂{}^{}", i + 1, e)?,
        }
    }
    Ok(())
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let single = t.coefficient.num_terms() == 1;
            let negative = single && t.coefficient.terms().all(|(_, c)| c.is_negative());
            let coefficient = if negative {
                -&t.coefficient
            } else {
                t.coefficient.clone()
            };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let bare = t.derivative.iter().all(|&e| e == 0);
            let unit = coefficient.constant_value().is_some_and(|c| c.is_one());
            if bare || !unit {
                if single {
                    write!(f, "{coefficient}")?;
                } else {
                    write!(f, "({coefficient})")?;
                }
            }
            write_derivative(f, &t.derivative)?;
        }
        Ok(())
    }
}

/// Central difference stencil for `∂^e` on a grid of spacing `step`,
/// offsets in grid units.
fn stencil(derivative: &[u32], spread: i64, step: f64) -> Result<Vec<(Vec<i64>, f64)>> {
    let mut points = vec![(vec![0i64; derivative.len()], 1.0)];
    for (i, &e) in derivative.iter().enumerate() {
        let one_dim: Vec<(i64, f64)> = match e {
            0 => continue,
            1 => vec![(spread, 0.5 / step), (-spread, -0.5 / step)],
            2 => vec![
                (spread, 1.0 / (step * step)),
                (0, -2.0 / (step * step)),
                (-spread, 1.0 / (step * step)),
            ],
            _ => {
                return Err(Error::invalid(
                    "finite differences support derivatives up to order 2 per variable",
                ))
            }
        };
        points = points
            .into_iter()
            .flat_map(|(p, w)| {
                one_dim.iter().map(move |&(o, v)| {
                    let mut q = p.clone();
                    q[i] += o;
                    (q, w * v)
                })
            })
            .collect();
    }
    Ok(points)
}

/// `|P φ| / Σ_k |term_k φ|` at `c`, derivatives by central differences with
/// step `h` and one Richardson step (`h` and `h/2`).
///
/// The stencil reaches `c_i ± h`; every coefficient must stay at least `2h`
/// away from zero. A zero operator has residual 0.
pub fn annihilation_residual(
    op: &DifferentialOperator,
    f: &EulerIntegrand,
    c: &[f64],
    params: &[f64],
    h: f64,
    quad: &QuadConfig,
) -> Result<f64> {
    if op.is_zero() {
        return Ok(0.0);
    }
    if c.len() != f.coefficients() {
        return Err(Error::invalid(format!(
            "expected {} coefficients, got {}",
            f.coefficients(),
            c.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::invalid("step h must be positive"));
    }
    if let Some(i) = c.iter().position(|&x| x < 2.0 * h) {
        return Err(Error::InsufficientMargin(format!(
            "c{} = {} is within 2h = {} of the boundary",
            i + 1,
            c[i],
            2.0 * h
        )));
    }
    f.decay_rate(params)?;
    let half = 0.5 * h;
    let mut cache: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut phi = |offset: &[i64]| -> Result<f64> {
        if let Some(&v) = cache.get(offset) {
            return Ok(v);
        }
        let point: Vec<f64> = c
            .iter()
            .zip(offset)
            .map(|(x, &o)| x + o as f64 * half)
            .collect();
        let v = evaluate_euler(f, &point, params, quad)?;
        cache.insert(offset.to_vec(), v);
        Ok(v)
    };
    let mut values: Vec<f64> = c.to_vec();
    values.extend_from_slice(params);
    let mut total = 0.0;
    let mut scale = 0.0;
    for t in op.terms() {
        let mut derivative = |spread: i64, step: f64| -> Result<f64> {
            let mut acc = 0.0;
            for (offset, w) in stencil(&t.derivative, spread, step)? {
                acc += w * phi(&offset)?;
            }
            Ok(acc)
        };
        let d = if t.derivative.iter().all(|&e| e == 0) {
            derivative(0, 1.0)?
        } else {
            let coarse = derivative(2, h)?;
            let fine = derivative(1, half)?;
            (4.0 * fine - coarse) / 3.0
        };
        let contribution = t.coefficient.eval_f64(&values) * d;
        total += contribution;
        scale += contribution.abs();
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(total.abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::super::gkz_operators;
    use super::*;

    fn quad() -> QuadConfig {
        QuadConfig {
            rel_tol: 1e-11,
            max_intervals: 2000,
        }
    }

    #[test]
    fn two_site_chain_is_annihilated() {
        let f = EulerIntegrand::two_site_chain();
        let c = [1.0, 1.2, 0.8, 1.5, 0.9, 1.1, 1.3];
        for op in gkz_operators(&f).unwrap().all() {
            let r = annihilation_residual(op, &f, &c, &[0.25], 1e-2, &quad()).unwrap();
            assert!(r < 1e-6, "{op}: {r}");
        }
    }

    #[test]
    fn wrong_operator_is_not_annihilating() {
        let f = EulerIntegrand::two_site_chain();
        let ov = f.operator_vars();
        let mut d = vec![0u32; 7];
        d[0] = 1;
        d[4] = 1;
        let mut e = vec![0u32; 7];
        e[1] = 1;
        e[3] = 1;
        let one = Polynomial::one(&ov);
        let op = DifferentialOperator::new(&ov, vec![(one.clone(), d), (-one, e)]);
        let r = annihilation_residual(&op, &f, &[1.0; 7], &[0.25], 1e-2, &quad()).unwrap();
        assert!(r > 1e-2, "{r}");
    }

    #[test]
    fn zero_operator_and_margin() {
        let f = EulerIntegrand::two_site_chain();
        let zero = DifferentialOperator::zero(&f.operator_vars());
        assert_eq!(
            annihilation_residual(&zero, &f, &[1.0; 7], &[0.25], 1e-2, &quad()).unwrap(),
            0.0
        );
        let op = &gkz_operators(&f).unwrap().toric[0];
        let mut c = [1.0; 7];
        c[2] = 0.015;
        assert!(matches!(
            annihilation_residual(op, &f, &c, &[0.25], 1e-2, &quad()),
            Err(Error::InsufficientMargin(_))
        ));
    }

    #[test]
    fn merging_and_ordering() {
        let v = crate::algebra::vars(&["c1", "c2"]);
        let c1 = Polynomial::variable(&v, 0);
        let op = DifferentialOperator::new(
            &v,
            vec![
                (Polynomial::one(&v), vec![0, 0]),
                (c1.clone(), vec![1, 0]),
                (-&c1, vec![1, 0]),
                (c1, vec![0, 2]),
            ],
        );
        assert_eq!(op.to_string(), "c1∂2^2 + 1");
        assert_eq!(op.order(), 2);
    }
}
