//! Euler integrals `∫_{ℝ^m_+} ∏_j f_j(α)^{s_j} α^ν dα/α` over linear forms
//! `f_j = Σ c_i α^{a_i}`, their GKZ operators and numerical evaluation.
//!
//! Every coefficient symbol `c_i` belongs to exactly one form. Exponents
//! `s_j` and `ν_k` are affine in named parameters such as `eps`.

mod operator;
pub mod quadrature;
mod string;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::algebra::rational::{int, parse_rational, to_f64};
use crate::algebra::{vars, Polynomial, Rational, Vars};
use crate::error::{Error, Result};

pub use operator::{annihilation_residual, DifferentialOperator, OperatorTerm};
pub use quadrature::QuadConfig;
pub use string::{koba_nielsen, string_limit, StringLimit, DEFAULT_EPSILONS};

/// One monomial `c_i α^a` of a linear form; `coefficient` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct FormTerm {
    #[serde(rename = "c")]
    pub coefficient: usize,
    pub alpha: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactor {
    pub terms: Vec<FormTerm>,
    /// Affine in the integrand's parameters.
    pub exponent: Polynomial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerIntegrand {
    alphas: usize,
    coefficients: usize,
    params: Vars,
    forms: Vec<LinearFactor>,
    nu: Vec<Polynomial>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    terms: Vec<FormTerm>,
    exponent: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrandJson {
    alphas: usize,
    #[serde(default)]
    params: Vec<String>,
    forms: Vec<FactorJson>,
    nu: Vec<String>,
}

/// Parses an affine expression such as `"eps + 1"`, `"-1/2"` or `"2*s - 3"`.
pub fn parse_affine(text: &str, params: &Vars) -> Result<Polynomial> {
    let bad = || Error::invalid(format!("not an affine expression: {text:?}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if i > start && (ch == '+' || ch == '-') && !compact[..i].ends_with(['*', '/']) {
            pieces.push(&compact[start..i]);
            start = i;
        }
    }
    pieces.push(&compact[start..]);
    let mut total = Polynomial::zero(params);
    for piece in pieces {
        let (sign, body) = match piece.as_bytes().first() {
            Some(b'-') => (-1, &piece[1..]),
            Some(b'+') => (1, &piece[1..]),
            _ => (1, piece),
        };
        let mut coeff = int(sign);
        let mut var: Option<usize> = None;
        for factor in body.split('*') {
            if let Some(i) = params.iter().position(|p| p == factor) {
                if var.replace(i).is_some() {
                    return Err(bad());
                }
            } else {
                coeff *= parse_rational(factor).map_err(|_| bad())?;
            }
        }
        let term = match var {
            Some(i) => Polynomial::variable(params, i).scale(&coeff),
            None => Polynomial::constant(params, coeff),
        };
        total = &total + &term;
    }
    Ok(total)
}

fn bind(p: &Polynomial, values: &[f64]) -> f64 {
    p.eval_f64(values)
}

impl EulerIntegrand {
    pub fn new(
        alphas: usize,
        params: Vars,
        forms: Vec<LinearFactor>,
        nu: Vec<Polynomial>,
    ) -> Result<Self> {
        if nu.len() != alphas {
            return Err(Error::invalid(format!(
                "{} exponents ν for {alphas} variables",
                nu.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for form in &forms {
            if form.terms.is_empty() {
                return Err(Error::invalid("empty linear form"));
            }
            for t in &form.terms {
                if t.alpha.len() != alphas {
                    return Err(Error::invalid(format!(
                        "α-exponent of c{} has length {}, expected {alphas}",
                        t.coefficient,
                        t.alpha.len()
                    )));
                }
                if t.coefficient == 0 || !seen.insert(t.coefficient) {
                    return Err(Error::invalid(format!(
                        "coefficient c{} is repeated or zero",
                        t.coefficient
                    )));
                }
            }
            if form.exponent.vars() != &params {
                return Err(Error::invalid(
                    "form exponent is not over the parameter list",
                ));
            }
        }
        let coefficients = seen.len();
        if seen.iter().next_back() != Some(&coefficients) && coefficients > 0 {
            return Err(Error::invalid(
                "coefficients must be numbered c1..cN without gaps",
            ));
        }
        if nu
            .iter()
            .any(|p| p.vars() != &params || p.degree().unwrap_or(0) > 1)
            || forms.iter().any(|f| f.exponent.degree().unwrap_or(0) > 1)
        {
            return Err(Error::invalid("exponents must be affine in the parameters"));
        }
        Ok(EulerIntegrand {
            alphas,
            coefficients,
            params,
            forms,
            nu,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: IntegrandJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        let params = vars(&raw.params);
        let forms = raw
            .forms
            .into_iter()
            .map(|f| {
                Ok(LinearFactor {
                    terms: f.terms,
                    exponent: parse_affine(&f.exponent, &params)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let nu = raw
            .nu
            .iter()
            .map(|t| parse_affine(t, &params))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.alphas, params, forms, nu)
    }

    /// `(c1α1 + c2α2 + c3)^{-1} (c4α1 + c5)^{-1} (c6α2 + c7)^{-1} (α1α2)^{ε+1}`.
    pub fn two_site_chain() -> Self {
        let params = vars(&["eps"]);
        let t = |c, a: [u32; 2]| FormTerm {
            coefficient: c,
            alpha: a.to_vec(),
        };
        let minus_one = Polynomial::constant(&params, int(-1));
        let forms = vec![
            LinearFactor {
                terms: vec![t(1, [1, 0]), t(2, [0, 1]), t(3, [0, 0])],
                exponent: minus_one.clone(),
            },
            LinearFactor {
                terms: vec![t(4, [1, 0]), t(5, [0, 0])],
                exponent: minus_one.clone(),
            },
            LinearFactor {
                terms: vec![t(6, [0, 1]), t(7, [0, 0])],
                exponent: minus_one,
            },
        ];
        let nu_k = parse_affine("eps + 1", &params).expect("literal");
        Self::new(2, params, forms, vec![nu_k.clone(), nu_k]).expect("well formed")
    }

    /// `(α1 + α2 + u1)^{s1} (α1 + u2)^{s2} (α2 + u3)^{s3} α1^{ν1} α2^{ν2}`
    /// with the coefficient layout of [`Self::two_site_chain`]; see
    /// [`restricted_coefficients`].
    pub fn restricted_chain() -> Self {
        let params = vars(&["s1", "s2", "s3", "nu1", "nu2"]);
        let base = Self::two_site_chain();
        let forms = base
            .forms
            .into_iter()
            .enumerate()
            .map(|(j, f)| LinearFactor {
                terms: f.terms,
                exponent: Polynomial::variable(&params, j),
            })
            .collect();
        let nu = vec![
            Polynomial::variable(&params, 3),
            Polynomial::variable(&params, 4),
        ];
        Self::new(2, params, forms, nu).expect("well formed")
    }

    pub fn alphas(&self) -> usize {
        self.alphas
    }

    /// Number of coefficient symbols `N`.
    pub fn coefficients(&self) -> usize {
        self.coefficients
    }

    pub fn params(&self) -> &Vars {
        &self.params
    }

    pub fn forms(&self) -> &[LinearFactor] {
        &self.forms
    }

    pub fn nu(&self) -> &[Polynomial] {
        &self.nu
    }

    /// Variables of operator coefficients: `c1..cN` then the parameters.
    pub fn operator_vars(&self) -> Vars {
        let mut names: Vec<String> = (1..=self.coefficients).map(|i| format!("c{i}")).collect();
        names.extend(self.params.iter().cloned());
        vars(&names)
    }

    /// The same integral with the α-variables permuted: new variable `k` is
    /// old variable `order[k]`.
    pub fn permute_alphas(&self, order: &[usize]) -> Result<Self> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.alphas).collect::<Vec<_>>() {
            return Err(Error::invalid("not a permutation of the α-variables"));
        }
        let forms = self
            .forms
            .iter()
            .map(|f| LinearFactor {
                terms: f
                    .terms
                    .iter()
                    .map(|t| FormTerm {
                        coefficient: t.coefficient,
                        alpha: order.iter().map(|&k| t.alpha[k]).collect(),
                    })
                    .collect(),
                exponent: f.exponent.clone(),
            })
            .collect();
        let nu = order.iter().map(|&k| self.nu[k].clone()).collect();
        Self::new(self.alphas, self.params.clone(), forms, nu)
    }

    /// The A-matrix: one column per coefficient, rows are form membership
    /// followed by α-degrees.
    pub fn a_matrix(&self) -> Vec<Vec<Rational>> {
        let rows = self.forms.len() + self.alphas;
        let mut a = vec![vec![Rational::zero(); self.coefficients]; rows];
        for (j, form) in self.forms.iter().enumerate() {
            for t in &form.terms {
                let col = t.coefficient - 1;
                a[j][col] = int(1);
                for (k, &d) in t.alpha.iter().enumerate() {
                    a[self.forms.len() + k][col] = int(d as i64);
                }
            }
        }
        a
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::invalid(format!(
                "expected {} parameter values ({}), got {}",
                self.params.len(),
                self.params.join(", "),
                params.len()
            )));
        }
        Ok(())
    }

    /// Leading exponent of the integrand along `u = t·w`, `t → ∞`, in
    /// logarithmic coordinates `u = log α`.
    fn ray_exponent(&self, w: &[f64], s: &[f64], nu: &[f64]) -> f64 {
        let mut total: f64 = nu.iter().zip(w).map(|(a, b)| a * b).sum();
        for (form, &sj) in self.forms.iter().zip(s) {
            let top = form
                .terms
                .iter()
                .map(|t| {
                    t.alpha
                        .iter()
                        .zip(w)
                        .map(|(&a, b)| a as f64 * b)
                        .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
            total += sj * top;
        }
        total
    }

    /// Directions tested for convergence: coordinate axes, all `{−1,0,1}`
    /// sign patterns, and in two variables every edge normal of every
    /// Newton polytope (which suffices there).
    fn test_directions(&self) -> Vec<Vec<f64>> {
        let m = self.alphas;
        let mut dirs = Vec::new();
        let patterns = 3usize.pow(m as u32);
        for code in 1..patterns {
            let mut c = code;
            let w: Vec<f64> = (0..m)
                .map(|_| {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    d
                })
                .collect();
            if w.iter().any(|&d| d != 0.0) {
                dirs.push(w);
            }
        }
        if m == 2 {
            for form in &self.forms {
                for a in &form.terms {
                    for b in &form.terms {
                        let dx = a.alpha[0] as f64 - b.alpha[0] as f64;
                        let dy = a.alpha[1] as f64 - b.alpha[1] as f64;
                        if dx != 0.0 || dy != 0.0 {
                            dirs.push(vec![-dy, dx]);
                        }
                    }
                }
            }
        }
        dirs
    }

    /// Slowest exponential decay rate of the integrand in log coordinates;
    /// an error if some direction does not decay.
    pub fn decay_rate(&self, params: &[f64]) -> Result<f64> {
        self.check_params(params)?;
        let s: Vec<f64> = self
            .forms
            .iter()
            .map(|f| bind(&f.exponent, params))
            .collect();
        let nu: Vec<f64> = self.nu.iter().map(|p| bind(p, params)).collect();
        let mut rate = f64::INFINITY;
        for w in self.test_directions() {
            let e = self.ray_exponent(&w, &s, &nu);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(e < 0.0) {
                return Err(Error::Divergent(format!(
                    "integrand grows like exp({e:.4}·t) along log α = t·{w:?}"
                )));
            }
            rate = rate.min(-e / norm);
        }
        Ok(rate)
    }

    /// The integrand `∏ f_j^{s_j} α^ν` at `α = exp(u)`, computed in log space.
    pub fn log_integrand(&self, u: &[f64], c: &[f64], s: &[f64], nu: &[f64]) -> f64 {
        let mut total: f64 = nu.iter().zip(u).map(|(a, b)| a * b).sum();
        for (form, &sj) in self.forms.iter().zip(s) {
            let logs: Vec<f64> = form
                .terms
                .iter()
                .map(|t| {
                    c[t.coefficient - 1].ln()
                        + t.alpha
                            .iter()
                            .zip(u)
                            .map(|(&a, b)| a as f64 * b)
                            .sum::<f64>()
                })
                .collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
            total += sj * lse;
        }
        total
    }
}

/// Coefficients `(1, 1, u1, 1, u2, 1, u3)` for [`EulerIntegrand::restricted_chain`].
pub fn restricted_coefficients(u: [f64; 3]) -> Vec<f64> {
    vec![1.0, 1.0, u[0], 1.0, u[1], 1.0, u[2]]
}

/// Euler operators (one per form, then one per α-variable) followed by the
/// toric binomials of the A-matrix kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct GkzSystem {
    pub euler: Vec<DifferentialOperator>,
    pub toric: Vec<DifferentialOperator>,
}

impl GkzSystem {
    pub fn all(&self) -> impl Iterator<Item = &DifferentialOperator> {
        self.euler.iter().chain(&self.toric)
    }
}

pub fn gkz_operators(f: &EulerIntegrand) -> Result<GkzSystem> {
    let ov = f.operator_vars();
    let n = f.coefficients;
    let np = f.params.len();
    let lift = |p: &Polynomial| -> Polynomial {
        let images: Vec<Polynomial> = (0..np).map(|k| Polynomial::variable(&ov, n + k)).collect();
        p.substitute(&images)
    };
    let first_order = |i: usize| {
        let mut d = vec![0u32; n];
        d[i - 1] = 1;
        d
    };
    let mut euler = Vec::new();
    for form in &f.forms {
        let mut terms: Vec<(Polynomial, Vec<u32>)> = form
            .terms
            .iter()
            .map(|t| {
                (
                    Polynomial::variable(&ov, t.coefficient - 1),
                    first_order(t.coefficient),
                )
            })
            .collect();
        terms.push((-lift(&form.exponent), vec![0; n]));
        euler.push(DifferentialOperator::new(&ov, terms));
    }
    for k in 0..f.alphas {
        let mut terms: Vec<(Polynomial, Vec<u32>)> = Vec::new();
        for form in &f.forms {
            for t in &form.terms {
                if t.alpha[k] > 0 {
                    let c =
                        Polynomial::variable(&ov, t.coefficient - 1).scale(&int(t.alpha[k] as i64));
                    terms.push((c, first_order(t.coefficient)));
                }
            }
        }
        terms.push((lift(&f.nu[k]), vec![0; n]));
        euler.push(DifferentialOperator::new(&ov, terms));
    }
    let a = f.a_matrix();
    let mut toric = Vec::new();
    for w in crate::algebra::linear::kernel_basis(&a, n) {
        let plus: Vec<u32> = w.iter().map(|x| exponent_part(x, true)).collect();
        let minus: Vec<u32> = w.iter().map(|x| exponent_part(x, false)).collect();
        let image = |e: &[u32]| -> Vec<Rational> {
            a.iter()
                .map(|row| row.iter().zip(e).map(|(r, &k)| r * int(k as i64)).sum())
                .collect()
        };
        if image(&plus) != image(&minus) {
            return Err(Error::invalid(
                "kernel vector does not balance the A-matrix",
            ));
        }
        let one = Polynomial::one(&ov);
        toric.push(DifferentialOperator::new(
            &ov,
            vec![(one.clone(), plus), (-one, minus)],
        ));
    }
    Ok(GkzSystem { euler, toric })
}

fn exponent_part(x: &BigInt, positive: bool) -> u32 {
    let take = if positive {
        x.is_positive()
    } else {
        x.is_negative()
    };
    if take {
        u32::try_from(x.abs()).expect("small kernel entries")
    } else {
        0
    }
}

/// `∫_{ℝ^m_+} ∏ f_j^{s_j} α^ν dα/α` at coefficients `c` (all positive) and
/// parameter values `params`.
///
/// Works in `u = log α / κ` where `κ` is the slowest decay rate, so every
/// tail decays at least like `exp(−|u|)`; fails with `Divergent` before any
/// quadrature if some direction does not decay.
pub fn evaluate_euler(
    f: &EulerIntegrand,
    c: &[f64],
    params: &[f64],
    quad: &QuadConfig,
) -> Result<f64> {
    if c.len() != f.coefficients {
        return Err(Error::invalid(format!(
            "expected {} coefficients, got {}",
            f.coefficients,
            c.len()
        )));
    }
    if let Some(i) = c.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::invalid(format!(
            "coefficient c{} = {} is not positive",
            i + 1,
            c[i]
        )));
    }
    let kappa = f.decay_rate(params)?;
    let s: Vec<f64> = f.forms.iter().map(|p| bind(&p.exponent, params)).collect();
    let nu: Vec<f64> = f.nu.iter().map(|p| bind(p, params)).collect();
    let m = f.alphas;
    let integrand = |w: &[f64]| {
        let u: Vec<f64> = w.iter().map(|x| x / kappa).collect();
        f.log_integrand(&u, c, &s, &nu).exp()
    };
    let value = quadrature::integrate_nested(&integrand, m, quad)?;
    Ok(value / kappa.powi(m as i32))
}

/// Bound exponents `(s_j)` and `(ν_k)` as floats.
pub fn bound_exponents(f: &EulerIntegrand, params: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (
        f.forms.iter().map(|p| bind(&p.exponent, params)).collect(),
        f.nu.iter().map(|p| bind(p, params)).collect(),
    )
}

pub(crate) fn rational_f64(r: &Rational) -> f64 {
    to_f64(r)
}
