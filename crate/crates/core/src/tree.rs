//! Triangulations of the n-gon and the planar tree amplitude
//! `A_n = Σ_T ∏_{(ij) ∈ T} 1 / X_ij`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{FactoredFraction, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::kinematics::{
    diagonals, planar_name, planar_polynomial, planar_vars, KinematicData, PlanarVariables,
};

/// `n − 3` pairwise non-crossing diagonals, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangulation {
    pub n: usize,
    pub diagonals: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn is_valid(&self) -> bool {
        let all = diagonals(self.n);
        self.diagonals.len() + 3 == self.n
            && self.diagonals.iter().all(|d| all.contains(d))
            && self
                .diagonals
                .iter()
                .enumerate()
                .all(|(a, d)| self.diagonals[a + 1..].iter().all(|e| !crosses(*d, *e)))
    }
}

/// Two diagonals cross when their endpoints strictly interleave.
pub fn crosses((i, j): (usize, usize), (k, l): (usize, usize)) -> bool {
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

pub fn catalan(m: usize) -> u64 {
    let mut c = 1u64;
    for k in 0..m as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// All triangulations, ordered by the apex of the triangle on edge `(1, n)`
/// and then recursively.
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    assert!(n >= 3, "polygon needs at least three vertices");
    let labels: Vec<usize> = (1..=n).collect();
    polygon_triangulations(&labels)
        .into_iter()
        .map(|mut diagonals| {
            diagonals.sort_unstable();
            Triangulation { n, diagonals }
        })
        .collect()
}

fn polygon_triangulations(labels: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let m = labels.len();
    if m < 3 {
        return vec![Vec::new()];
    }
    let (first, last) = (labels[0], labels[m - 1]);
    let mut out = Vec::new();
    for k in 1..m - 1 {
        let left = polygon_triangulations(&labels[..=k]);
        let right = polygon_triangulations(&labels[k..]);
        for l in &left {
            for r in &right {
                let mut t = l.clone();
                t.extend_from_slice(r);
                if k > 1 {
                    t.push((first, labels[k]));
                }
                if k < m - 2 {
                    t.push((labels[k], last));
                }
                out.push(t);
            }
        }
    }
    out
}

fn sum_over_triangulations(
    n: usize,
    propagator: impl Fn(usize, usize) -> Polynomial,
) -> RationalFunction {
    let props: Vec<((usize, usize), Polynomial)> = diagonals(n)
        .into_iter()
        .map(|(i, j)| ((i, j), propagator(i, j)))
        .collect();
    let lookup = |d: &(usize, usize)| &props.iter().find(|(e, _)| e == d).expect("diagonal").1;
    let vars = props[0].1.vars().clone();
    let mut total = FactoredFraction::zero(&vars);
    for t in enumerate_triangulations(n) {
        let factors: Vec<Polynomial> = t.diagonals.iter().map(|d| lookup(d).clone()).collect();
        let term =
            FactoredFraction::new(Polynomial::one(&vars), &factors).expect("nonzero propagator");
        total = total.add(&term);
    }
    total.to_rational_function()
}

/// `A_n` as a rational function of the planar variables `X_ij`.
pub fn planar_amplitude(n: usize) -> RationalFunction {
    assert!(n >= 4, "amplitudes need n >= 4");
    let xv = planar_vars(n);
    sum_over_triangulations(n, |i, j| {
        Polynomial::named(&xv, &planar_name(i, j)).expect("planar name")
    })
}

/// `A_n` as a rational function of the independent Mandelstam variables
/// (see [`mandelstam_basis`](crate::kinematics::mandelstam_basis)).
pub fn tree_amplitude(n: usize) -> RationalFunction {
    assert!(n >= 4, "amplitudes need n >= 4");
    sum_over_triangulations(n, |i, j| planar_polynomial(n, i, j))
}

/// Exact value of `A_n` at given planar variables.
pub fn tree_amplitude_planar_value(x: &PlanarVariables) -> Result<Rational> {
    let n = x.n();
    for (&(i, j), v) in x.iter() {
        if v.is_zero() {
            return Err(Error::Pole(planar_name(i, j)));
        }
    }
    let mut total = Rational::zero();
    for t in enumerate_triangulations(n) {
        let mut den = Rational::from_integer(1.into());
        for &(i, j) in &t.diagonals {
            den *= x.get(i, j);
        }
        total += den.recip();
    }
    Ok(total)
}

/// Exact value of `A_n` at given kinematics.
pub fn tree_amplitude_value(k: &KinematicData) -> Result<Rational> {
    tree_amplitude_planar_value(&k.planar())
}
