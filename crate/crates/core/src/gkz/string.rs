use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::quadrature::QuadConfig;
use super::{evaluate_euler, rational_f64, EulerIntegrand, FormTerm, LinearFactor};
use crate::algebra::{vars, Polynomial};
use crate::error::{Error, Result};
use crate::kinematics::KinematicData;
use crate::tree::tree_amplitude_value;

pub const DEFAULT_EPSILONS: [f64; 3] = [0.2, 0.1, 0.05];

/// The five-point Koba–Nielsen integrand `exp(ε Σ s_ij log p_ij)` on the
/// chart `σ = (0, 1, 1 + x, 1 + x + y, ∞)`, all coefficients 1, parameter
/// `eps`.
pub fn koba_nielsen(k: &KinematicData) -> Result<EulerIntegrand> {
    if k.n() != 5 {
        return Err(Error::invalid(format!(
            "string integrand is implemented for n = 5, got {}",
            k.n()
        )));
    }
    let params = vars(&["eps"]);
    let eps = Polynomial::variable(&params, 0);
    let weight = |i, j| eps.scale(k.s(i, j));
    let mut next = 0;
    let mut form = |alphas: &[[u32; 2]], exponent: Polynomial| {
        let terms = alphas
            .iter()
            .map(|a| {
                next += 1;
                FormTerm {
                    coefficient: next,
                    alpha: a.to_vec(),
                }
            })
            .collect();
        LinearFactor { terms, exponent }
    };
    let forms = vec![
        form(&[[0, 0], [1, 0]], weight(1, 3)),
        form(&[[1, 0], [0, 1]], weight(2, 4)),
        form(&[[0, 0], [1, 0], [0, 1]], weight(1, 4)),
    ];
    EulerIntegrand::new(2, params, forms, vec![weight(2, 3), weight(3, 4)])
}

#[derive(Clone, Debug, Serialize)]
pub struct StringLimit {
    pub epsilons: Vec<f64>,
    /// `ε² ∫ exp(εL) dx/x dy/y` at each ε.
    pub values: Vec<f64>,
    pub extrapolated: f64,
    pub tree: f64,
    pub relative_error: f64,
}

/// Value at `ε = 0` of the interpolant `a0 + a2 ε² + a3 ε³ + …` through
/// the points; `φ_ε` has no term linear in ε.
pub fn extrapolate_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    let n = eps.len();
    let powers: Vec<i32> = std::iter::once(0).chain(2..=n as i32).take(n).collect();
    let m = DMatrix::from_fn(n, n, |i, j| eps[i].powi(powers[j]));
    let rhs = DVector::from_column_slice(values);
    m.lu().solve(&rhs).map_or(f64::NAN, |a| a[0])
}

/// `lim_{ε→0} ε² ∫_{ℝ²_+} exp(εL) dx/x dy/y`, compared with the tree
/// amplitude. Requires every planar variable positive.
pub fn string_limit(k: &KinematicData, epsilons: &[f64], quad: &QuadConfig) -> Result<StringLimit> {
    if k.n() != 5 {
        return Err(Error::invalid(format!(
            "string limit is implemented for n = 5, got {}",
            k.n()
        )));
    }
    if let Some(((i, j), x)) = k
        .planar()
        .iter()
        .find(|(_, x)| !num_traits::Signed::is_positive(*x))
    {
        return Err(Error::invalid(format!(
            "planar variable X{i}{j} = {x} is not positive; the integral is outside its convergence region"
        )));
    }
    if epsilons.is_empty() || epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::invalid("ε values must be positive"));
    }
    let f = koba_nielsen(k)?;
    let ones = vec![1.0; f.coefficients()];
    let values = epsilons
        .iter()
        .map(|&e| Ok(e * e * evaluate_euler(&f, &ones, &[e], quad)?))
        .collect::<Result<Vec<f64>>>()?;
    let extrapolated = extrapolate_to_zero(epsilons, &values);
    let tree = rational_f64(&tree_amplitude_value(k)?);
    Ok(StringLimit {
        epsilons: epsilons.to_vec(),
        values,
        extrapolated,
        tree,
        relative_error: (extrapolated - tree).abs() / tree.abs(),
    })
}
