//! Cross-ratios and dihedral coordinates `u_ij = [i,i+1 | j+1,j]` on the
//! moduli space of `n` points, the u-equations, and the matrix form of the
//! five-point scattering equations.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::rational::to_f64;
use crate::algebra::{solve_linear, LinearSolution, Rational, RationalFunction, Vars};
use crate::chy::{CriticalPoint, ModuliParametrization};
use crate::error::{Error, Result};
use crate::kinematics::{diagonals, wrap, KinematicData};

/// `[ij|kl] = p_ik p_jl / (p_il p_jk)`.
pub fn cross_ratio(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    p: &ModuliParametrization,
) -> Result<RationalFunction> {
    let n = p.n();
    if [i, j, k, l].iter().any(|&a| a == 0 || a > n) {
        return Err(Error::invalid(format!("labels must lie in 1..={n}")));
    }
    if i == j || k == l || i == k || i == l || j == k || j == l {
        return Err(Error::IndexClash(i, j, k, l));
    }
    RationalFunction::new(
        &p.minor(i, k) * &p.minor(j, l),
        &p.minor(i, l) * &p.minor(j, k),
    )
}

/// Whether diagonals `(i, j)` and `(k, l)` of the n-gon cross in their interiors.
pub fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let ((i, j), (k, l)) = (a, b);
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

#[derive(Clone, Debug)]
pub struct DihedralChart {
    n: usize,
    u: BTreeMap<(usize, usize), RationalFunction>,
    vars: Vars,
}

impl DihedralChart {
    pub fn new(n: usize) -> Result<Self> {
        let p = ModuliParametrization::new(n)?;
        let mut u = BTreeMap::new();
        for (i, j) in diagonals(n) {
            let f = cross_ratio(i, wrap(i + 1, n), wrap(j + 1, n), j, &p)?;
            u.insert((i, j), f);
        }
        Ok(DihedralChart {
            n,
            u,
            vars: p.vars().clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn u(&self, i: usize, j: usize) -> Option<&RationalFunction> {
        self.u.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &RationalFunction)> {
        self.u.iter()
    }

    /// `u` at a point of the chart, in diagonal order; a vanishing
    /// denominator is a pole.
    pub fn eval_complex(&self, x: &[Complex64]) -> Result<BTreeMap<(usize, usize), Complex64>> {
        self.u
            .iter()
            .map(|(&d, f)| {
                let den = f.denominator().eval_complex(x);
                if den.norm() == 0.0 {
                    return Err(Error::Pole(format!("u{}{}", d.0, d.1)));
                }
                Ok((d, f.numerator().eval_complex(x) / den))
            })
            .collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<BTreeMap<(usize, usize), f64>> {
        let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(self
            .eval_complex(&z)?
            .into_iter()
            .map(|(d, v)| (d, v.re))
            .collect())
    }

    /// `u_ij + ∏_{(kl) crossing (ij)} u_kl`.
    pub fn u_equation(&self, d: (usize, usize)) -> Result<RationalFunction> {
        let mut product = RationalFunction::one(&self.vars);
        for (&other, f) in &self.u {
            if crosses(d, other) {
                product = &product * f;
            }
        }
        let u = self
            .u
            .get(&d)
            .ok_or_else(|| Error::invalid(format!("({}, {}) is not a diagonal", d.0, d.1)))?;
        Ok(u + &product)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub diagonal: (usize, usize),
    /// `u13 + u24*u25 = 1` style text.
    pub identity: String,
    pub passed: bool,
    /// Largest `|lhs − 1|` over the sample points; absent for exact checks.
    pub max_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UEquationReport {
    pub n: usize,
    pub exact: bool,
    pub experimental: bool,
    pub checks: Vec<IdentityCheck>,
}

impl UEquationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn identity_text(chart: &DihedralChart, d: (usize, usize)) -> String {
    let crossing: Vec<String> = chart
        .u
        .keys()
        .filter(|&&o| crosses(d, o))
        .map(|o| format!("u{}{}", o.0, o.1))
        .collect();
    format!("u{}{} + {} = 1", d.0, d.1, crossing.join("*"))
}

/// Sample points of the n = 6 check.
pub const U_EQUATION_SAMPLES: usize = 100;

/// `u_ij + ∏_{crossing} u_kl = 1` for every diagonal: exactly at n = 5,
/// numerically at [`U_EQUATION_SAMPLES`] seeded complex points at n = 6.
pub fn verify_u_equations(n: usize, seed: u64) -> Result<UEquationReport> {
    let chart = DihedralChart::new(n)?;
    let diags: Vec<(usize, usize)> = chart.u.keys().copied().collect();
    match n {
        5 => {
            let one = RationalFunction::one(chart.vars());
            let checks = diags
                .iter()
                .map(|&d| {
                    Ok(IdentityCheck {
                        diagonal: d,
                        identity: identity_text(&chart, d),
                        passed: chart.u_equation(d)?.equals(&one),
                        max_error: None,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(UEquationReport {
                n,
                exact: true,
                experimental: false,
                checks,
            })
        }
        6 => {
            let equations: Vec<RationalFunction> = diags
                .iter()
                .map(|&d| chart.u_equation(d))
                .collect::<Result<_>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst = vec![0.0f64; diags.len()];
            for _ in 0..U_EQUATION_SAMPLES {
                let x: Vec<Complex64> = (0..n - 3)
                    .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                    .collect();
                for (w, f) in worst.iter_mut().zip(&equations) {
                    let err = (f.eval_complex(&x) - 1.0).norm();
                    *w = if err.is_finite() {
                        w.max(err)
                    } else {
                        f64::INFINITY
                    };
                }
            }
            let checks = diags
                .iter()
                .zip(worst)
                .map(|(&d, w)| IdentityCheck {
                    diagonal: d,
                    identity: identity_text(&chart, d),
                    passed: w < 1e-9,
                    max_error: Some(w),
                })
                .collect();
            Ok(UEquationReport {
                n,
                exact: false,
                experimental: true,
                checks,
            })
        }
        _ => Err(Error::invalid(
            "u-equations are checked for n = 5 and n = 6",
        )),
    }
}

/// Exponents `a_ij` with `L = Σ s_ab log p_ab = Σ a_ij log u_ij` up to an
/// additive constant, found by matching the coefficient of each `log p_ab`.
pub fn potential_exponents(k: &KinematicData) -> Result<BTreeMap<(usize, usize), Rational>> {
    let n = k.n();
    let diags = diagonals(n);
    // Unordered pairs whose minor is a non-constant linear form.
    let mut pairs = Vec::new();
    for a in 1..n {
        for b in (a + 1)..n {
            if (a, b) != (1, 2) {
                pairs.push((a, b));
            }
        }
    }
    let row_of = |a: usize, b: usize| -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == key)
    };
    let mut matrix = vec![vec![Rational::from_integer(0.into()); diags.len()]; pairs.len()];
    for (c, &(i, j)) in diags.iter().enumerate() {
        let (i1, j1) = (wrap(i + 1, n), wrap(j + 1, n));
        // [i,i+1 | j+1,j] = p_{i,j+1} p_{i+1,j} / (p_{i,j} p_{i+1,j+1})
        for (a, b, sign) in [(i, j1, 1), (i1, j, 1), (i, j, -1), (i1, j1, -1)] {
            if let Some(r) = row_of(a, b) {
                matrix[r][c] += Rational::from_integer(sign.into());
            }
        }
    }
    let rhs: Vec<Rational> = pairs.iter().map(|&(a, b)| k.s(a, b).clone()).collect();
    match solve_linear(&matrix, &rhs) {
        LinearSolution::Unique(a) => Ok(diags.into_iter().zip(a).collect()),
        _ => Err(Error::NonGeneric(
            "log-coefficient system is not uniquely solvable".into(),
        )),
    }
}

/// `L(x) − Σ a_ij log u_ij(x)` at a point of the positive region `x > 0`,
/// where every minor and every `u` is positive.
pub fn potential_offset(
    k: &KinematicData,
    exponents: &BTreeMap<(usize, usize), Rational>,
    x: &[f64],
) -> Result<f64> {
    let n = k.n();
    if x.len() != n - 3 || x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("point must have n − 3 positive coordinates"));
    }
    let p = ModuliParametrization::new(n)?;
    let mut l = 0.0;
    for a in 1..n {
        for b in (a + 1)..n {
            l += to_f64(k.s(a, b)) * p.minor(a, b).eval_f64(x).ln();
        }
    }
    let chart = DihedralChart::new(n)?;
    let u = chart.eval_f64(x)?;
    let dihedral: f64 = exponents.iter().map(|(d, a)| to_f64(a) * u[d].ln()).sum();
    Ok(l - dihedral)
}

/// Row order of the five-point matrix: `(13, 24, 35, 14, 25)`.
pub const FIVE_POINT_ORDER: [(usize, usize); 5] = [(1, 3), (2, 4), (3, 5), (1, 4), (2, 5)];

/// The 5×5 matrix `M(u)` whose left kernel holds the exponent vector at
/// critical points, rows and columns in [`FIVE_POINT_ORDER`].
pub fn scattering_matrix(u: &BTreeMap<(usize, usize), Complex64>) -> [[Complex64; 5]; 5] {
    let (u13, u24, u35, u14, u25) = (u[&(1, 3)], u[&(2, 4)], u[&(3, 5)], u[&(1, 4)], u[&(2, 5)]);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [
        [zero, one - u14 - u25, one - u13, u13 - one, u24 + u35 - one],
        [u14 + u35 - one, zero, one - u13 - u25, one - u24, u24 - one],
        [u35 - one, u14 + u25 - one, zero, one - u13 - u24, one - u35],
        [one - u14, u14 - one, u13 + u25 - one, zero, one - u24 - u35],
        [one - u14 - u35, one - u25, u25 - one, u13 + u24 - one, zero],
    ]
}

/// `‖Xᵀ M(u)‖_∞` for an exponent vector indexed by diagonal.
pub fn matrix_residual(
    exponents: &BTreeMap<(usize, usize), Rational>,
    u: &BTreeMap<(usize, usize), Complex64>,
) -> f64 {
    let m = scattering_matrix(u);
    let x: Vec<f64> = FIVE_POINT_ORDER
        .iter()
        .map(|d| to_f64(&exponents[d]))
        .collect();
    (0..5)
        .map(|c| (0..5).map(|r| m[r][c] * x[r]).sum::<Complex64>().norm())
        .fold(0.0, f64::max)
}

/// Residual of the matrix scattering equations at a five-point critical
/// point, with the exponents of [`potential_exponents`].
pub fn dihedral_scattering_residual(k: &KinematicData, pt: &CriticalPoint) -> Result<f64> {
    if k.n() != 5 {
        return Err(Error::invalid("the matrix form is stated for n = 5"));
    }
    let u = DihedralChart::new(5)?.eval_complex(&pt.coords)?;
    Ok(matrix_residual(&potential_exponents(k)?, &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::chy::solve_scattering;
    use crate::kinematics::{
        sample_kinematics, sample_kinematics_with, KinematicData, SamplingMode,
    };
    use num_traits::Zero;

    fn five() -> (ModuliParametrization, Vars) {
        let p = ModuliParametrization::new(5).unwrap();
        let v = p.vars().clone();
        (p, v)
    }

    /// `(1, x, y)` in the five-point chart.
    fn basics(v: &Vars) -> (Polynomial, Polynomial, Polynomial) {
        (
            Polynomial::one(v),
            Polynomial::variable(v, 0),
            Polynomial::variable(v, 1),
        )
    }

    #[test]
    fn five_point_chart_examples() {
        let (p, v) = five();
        let (one, x, y) = basics(&v);
        let u13 = cross_ratio(1, 2, 4, 3, &p).unwrap();
        // x(1 + x + y) / ((1 + x)(x + y))
        let num = &x * &(&(&one + &x) + &y);
        let den = &(&one + &x) * &(&x + &y);
        assert!(u13.equals(&RationalFunction::new(num, den).unwrap()));
        let u25 = cross_ratio(2, 3, 1, 5, &p).unwrap();
        let expected = RationalFunction::new(one.clone(), &one + &x).unwrap();
        assert!(u25.equals(&expected));
        let chart = DihedralChart::new(5).unwrap();
        assert!(chart.u(1, 3).unwrap().equals(&u13));
        assert!(chart.u(2, 5).unwrap().equals(&expected));
    }

    #[test]
    fn swap_symmetry_and_clash() {
        let (p, v) = five();
        let a = cross_ratio(1, 3, 2, 5, &p).unwrap();
        let b = cross_ratio(1, 3, 5, 2, &p).unwrap();
        assert!((&a * &b).equals(&RationalFunction::one(&v)));
        assert_eq!(
            cross_ratio(1, 2, 2, 4, &p),
            Err(Error::IndexClash(1, 2, 2, 4))
        );
    }

    #[test]
    fn chart_sizes() {
        for n in 4..=8 {
            assert_eq!(
                DihedralChart::new(n).unwrap().iter().count(),
                n * (n - 3) / 2
            );
        }
    }

    #[test]
    fn five_point_u_equations_are_exact() {
        let r = verify_u_equations(5, 0).unwrap();
        assert!(r.exact && r.all_passed());
        let text: Vec<&str> = r.checks.iter().map(|c| c.identity.as_str()).collect();
        assert_eq!(
            text,
            [
                "u13 + u24*u25 = 1",
                "u14 + u25*u35 = 1",
                "u24 + u13*u35 = 1",
                "u25 + u13*u14 = 1",
                "u35 + u14*u24 = 1"
            ]
        );
    }

    #[test]
    fn first_identity_expanded() {
        let (p, v) = five();
        let (one, x, y) = basics(&v);
        let u13 = cross_ratio(1, 2, 4, 3, &p).unwrap();
        // y / ((x + y)(1 + x))
        let rest = RationalFunction::new(y.clone(), &(&x + &y) * &(&one + &x)).unwrap();
        assert!((&u13 + &rest).equals(&RationalFunction::one(&v)));
    }

    #[test]
    fn binary_limit() {
        // u24 = y/(x + y) → 0 as y → 0, and u13 + u24 u25 = 1 forces u13 → 1.
        let chart = DihedralChart::new(5).unwrap();
        let u = chart.eval_f64(&[1.0, 1e-12]).unwrap();
        assert!(u[&(2, 4)] < 1e-11);
        assert!((u[&(1, 3)] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn six_point_u_equations_numerically() {
        let r = verify_u_equations(6, 11).unwrap();
        assert!(r.experimental && r.all_passed());
        assert_eq!(r.checks.len(), 9);
        assert!(verify_u_equations(7, 0).is_err());
    }

    #[test]
    fn chart_map_is_injective() {
        let chart = DihedralChart::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<[f64; 2]> = (0..100)
            .map(|_| [rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0)])
            .collect();
        let images: Vec<Vec<f64>> = pts
            .iter()
            .map(|x| chart.eval_f64(x).unwrap().into_values().collect())
            .collect();
        for a in 0..100 {
            for b in (a + 1)..100 {
                let d = images[a]
                    .iter()
                    .zip(&images[b])
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max);
                assert!(d > 1e-12);
            }
        }
    }

    #[test]
    fn potential_exponents_are_shifted_planar_variables() {
        for seed in 0..5 {
            let k = sample_kinematics(5, seed).unwrap();
            let a = potential_exponents(&k).unwrap();
            let x = k.planar();
            for (&(i, j), v) in &a {
                assert_eq!(v, &x.get(wrap(i + 1, 5), wrap(j + 1, 5)), "u{i}{j}");
            }
        }
    }

    #[test]
    fn literal_formula_differs_from_potential_exponents() {
        let k = sample_kinematics(5, 1).unwrap();
        let literal = crate::kinematics::dihedral_exponents(&k);
        assert_ne!(literal.values, potential_exponents(&k).unwrap());
        // Formula instance X13 = s14 + s23 − s13 − s24.
        assert_eq!(
            literal.values[&(1, 3)],
            k.s(1, 4) + k.s(2, 3) - k.s(1, 3) - k.s(2, 4)
        );
    }

    #[test]
    fn offset_is_constant_zero() {
        for n in [5, 6] {
            let k = sample_kinematics(n, 8).unwrap();
            let a = potential_exponents(&k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..20 {
                let x: Vec<f64> = (0..n - 3).map(|_| rng.gen_range(0.05..4.0)).collect();
                let c = potential_offset(&k, &a, &x).unwrap();
                assert!(c.abs() < 1e-9, "offset {c}");
            }
        }
    }

    #[test]
    fn matrix_residual_vanishes_at_critical_points() {
        for seed in 0..20 {
            let k = sample_kinematics(5, seed).unwrap();
            for pt in solve_scattering(&k, 1e-10, seed).unwrap() {
                assert!(
                    dihedral_scattering_residual(&k, &pt).unwrap() < 1e-9,
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn matrix_residual_away_from_critical_points() {
        let k = sample_kinematics_with(5, 2, SamplingMode::Positive).unwrap();
        let u = DihedralChart::new(5)
            .unwrap()
            .eval_complex(&[Complex64::new(0.7, 0.0), Complex64::new(1.3, 0.0)])
            .unwrap();
        assert!(matrix_residual(&potential_exponents(&k).unwrap(), &u) > 1e-3);
        // Zero kinematics give exactly zero.
        let zero = KinematicData::zero(5);
        let x = potential_exponents(&zero).unwrap();
        assert!(x.values().all(Zero::is_zero));
        assert_eq!(matrix_residual(&x, &u), 0.0);
    }

    #[test]
    fn matrix_entry_structure() {
        let mut u: BTreeMap<(usize, usize), Complex64> = FIVE_POINT_ORDER
            .iter()
            .map(|&d| (d, Complex64::new(0.3, 0.1)))
            .collect();
        u.insert((3, 5), Complex64::new(1.0, 0.0));
        let m = scattering_matrix(&u);
        assert_eq!(m[2][0], Complex64::new(0.0, 0.0));
        for r in 0..5 {
            assert_eq!(m[r][r], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn pole_is_reported() {
        let chart = DihedralChart::new(5).unwrap();
        // x = −1 makes p13 vanish.
        let r = chart.eval_complex(&[Complex64::new(-1.0, 0.0), Complex64::new(0.5, 0.0)]);
        assert!(matches!(r, Err(Error::Pole(_))));
    }
}
