//! Five-point amplitude along three routes: the sum over triangulations, the
//! canonical function of the ABHY pentagon, and the CHY sum over critical
//! points of the scattering potential.

use num_traits::Signed;
use serde::Serialize;

use crate::algebra::rational::{serde_text, to_f64};
use crate::algebra::{int, Rational};
use crate::chy::{chy_amplitude, chy_sign, solve_scattering};
use crate::error::{Error, Result};
use crate::kinematics::{mesh_constants, KinematicData};
use crate::polytope::{abhy_constants, abhy_family, abhy_pentagon, abhy_point, canonical_value};
use crate::tree::tree_amplitude_value;

/// How the ABHY value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbhyRoute {
    /// Canonical function of the concrete pentagon (all mesh constants positive).
    Pentagon,
    /// The family's symbolic canonical function, continued to non-positive
    /// mesh constants.
    Symbolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    #[serde(with = "serde_text")]
    pub tree: Rational,
    #[serde(with = "serde_text")]
    pub abhy: Rational,
    pub abhy_route: AbhyRoute,
    pub chy: f64,
    pub chy_imaginary: f64,
    pub critical_points: usize,
    pub tree_equals_abhy: bool,
    pub chy_relative_deviation: f64,
    pub passed: bool,
}

/// Tolerance on the CHY deviation for `passed`.
pub const CHY_AGREEMENT: f64 = 1e-9;

pub fn crosscheck(k: &KinematicData, tol: f64, seed: u64) -> Result<CrosscheckReport> {
    if k.n() != 5 {
        return Err(Error::invalid(format!(
            "the three-way comparison needs n = 5, got {}",
            k.n()
        )));
    }
    let tree = tree_amplitude_value(k)?;
    if let Some(((i, j), x)) = k.planar().iter().find(|(_, x)| x.is_negative()) {
        return Err(Error::invalid(format!(
            "planar variable X{i}{j} = {x} is negative"
        )));
    }
    let point = abhy_point(k);
    let positive_mesh = mesh_constants(k).values().all(Signed::is_positive);
    let (abhy, abhy_route) = if positive_mesh {
        let [c13, c14, c24] = abhy_constants(k)?;
        let p = abhy_pentagon(&c13, &c14, &c24)?;
        (canonical_value(&p, &point)?, AbhyRoute::Pentagon)
    } else {
        let family = abhy_family();
        let f = family.canonical_function(&[int(1), int(1), int(1)])?;
        let [c13, c14, c24] = abhy_constants(k)?;
        let values = [point[0].clone(), point[1].clone(), c13, c14, c24];
        (f.eval(&values)?, AbhyRoute::Symbolic)
    };
    let points = solve_scattering(k, tol, seed)?;
    let chy = chy_amplitude(&points)? * chy_sign(5);
    let a = to_f64(&tree);
    let chy_relative_deviation = (chy.re - a).abs() / a.abs();
    let tree_equals_abhy = tree == abhy;
    Ok(CrosscheckReport {
        passed: tree_equals_abhy && chy_relative_deviation < CHY_AGREEMENT,
        tree,
        abhy,
        abhy_route,
        chy: chy.re,
        chy_imaginary: chy.im,
        critical_points: points.len(),
        tree_equals_abhy,
        chy_relative_deviation,
    })
}
