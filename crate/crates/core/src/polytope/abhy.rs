//! The ABHY pentagon: the associahedron for five particles, realized in the
//! plane `(a, b) = (X24, X35)` with facets cut out by the mesh constants
//! `c13, c14, c24`.

use num_traits::Signed;

use super::{Facet, ParametricPolytope, Polytope};
use crate::algebra::rational::int;
use crate::algebra::{vars, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::kinematics::{mesh_constants, KinematicData};

/// Planar variable carried by each facet, in facet order.
pub const ABHY_LABELS: [(usize, usize); 5] = [(2, 4), (3, 5), (2, 5), (1, 4), (1, 3)];

fn normals() -> Vec<Vec<Rational>> {
    [[-1, 0], [0, -1], [-1, -1], [0, 1], [1, 1]]
        .iter()
        .map(|r| r.iter().map(|&v| int(v)).collect())
        .collect()
}

/// Facets `a ≥ 0`, `b ≥ 0`, `a + b ≥ c24`, `b ≤ c14 + c24`,
/// `a + b ≤ c13 + c14 + c24`, whose slacks are `X24, X35, X25, X14, X13`.
pub fn abhy_pentagon(c13: &Rational, c14: &Rational, c24: &Rational) -> Result<Polytope> {
    if !(c13.is_positive() && c14.is_positive() && c24.is_positive()) {
        return Err(Error::invalid("ABHY mesh constants must be positive"));
    }
    abhy_family().instantiate(&[c13.clone(), c14.clone(), c24.clone()])
}

/// The pentagon with symbolic mesh constants `c13, c14, c24`.
pub fn abhy_family() -> ParametricPolytope {
    let params = vars(&["c13", "c14", "c24"]);
    let c = |k| Polynomial::variable(&params, k);
    let zero = Polynomial::zero(&params);
    let offsets = vec![
        zero.clone(),
        zero,
        -c(2),
        &c(1) + &c(2),
        &(&c(0) + &c(1)) + &c(2),
    ];
    ParametricPolytope::new(vars(&["a", "b"]), params, normals(), offsets)
        .expect("well-formed family")
}

/// Mesh constants `(c13, c14, c24) = (−s13, −s14, −s24)` of five-point kinematics.
pub fn abhy_constants(k: &KinematicData) -> Result<[Rational; 3]> {
    if k.n() != 5 {
        return Err(Error::invalid("the ABHY pentagon needs n = 5"));
    }
    let m = mesh_constants(k);
    Ok([m[&(1, 3)].clone(), m[&(1, 4)].clone(), m[&(2, 4)].clone()])
}

/// The point `(a, b) = (s23, s34)` at which the pentagon's facet slacks
/// equal the planar variables.
pub fn abhy_point(k: &KinematicData) -> [Rational; 2] {
    [k.s(2, 3).clone(), k.s(3, 4).clone()]
}

/// The pentagon's facets as a plain inequality list.
pub fn abhy_facets(c13: &Rational, c14: &Rational, c24: &Rational) -> Vec<Facet> {
    let b = [int(0), int(0), -c24.clone(), c14 + c24, c13 + c14 + c24];
    normals()
        .into_iter()
        .zip(b)
        .map(|(a, b)| Facet::new(a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{determinant, RationalFunction};
    use crate::kinematics::{sample_kinematics_with, SamplingMode};
    use crate::polytope::{canonical_function, canonical_value};
    use crate::tree::tree_amplitude_value;

    #[test]
    fn unit_constants_vertices() {
        let p = abhy_pentagon(&int(1), &int(1), &int(1)).unwrap();
        let mut v: Vec<Vec<Rational>> = p.vertices().to_vec();
        v.sort();
        let expected: Vec<Vec<Rational>> = [[0, 1], [0, 2], [1, 0], [1, 2], [3, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        assert_eq!(v, expected);
        assert_eq!(
            p.facets(),
            abhy_facets(&int(1), &int(1), &int(1)).as_slice()
        );
    }

    #[test]
    fn adjacent_normals_are_unimodular() {
        let p = abhy_pentagon(&int(2), &int(3), &int(5)).unwrap();
        for v in 0..5 {
            let at = p.facets_at(v);
            let m: Vec<Vec<Rational>> = at.iter().map(|&f| p.facets()[f].a.clone()).collect();
            assert_eq!(determinant(&m).abs(), int(1));
        }
    }

    #[test]
    fn rejects_non_positive_constants() {
        assert!(abhy_pentagon(&int(0), &int(1), &int(1)).is_err());
    }

    #[test]
    fn symbolic_identity_with_planar_sum() {
        let fam = abhy_family();
        let sample = [int(1), int(1), int(1)];
        let tri = fam.canonical_function(&sample).unwrap();
        let vs = fam.vertex_sum(&sample).unwrap();
        let forms = fam.facet_forms();
        let x = |label: (usize, usize)| {
            let i = ABHY_LABELS.iter().position(|&l| l == label).unwrap();
            RationalFunction::from_polynomial(forms[i].clone())
        };
        let pairs = [
            ((1, 3), (1, 4)),
            ((2, 4), (2, 5)),
            ((1, 3), (3, 5)),
            ((2, 4), (1, 4)),
            ((2, 5), (3, 5)),
        ];
        let mut planar = RationalFunction::zero(fam.vars());
        for (p, q) in pairs {
            planar = &planar + &(&x(p) * &x(q)).recip().unwrap();
        }
        assert!(tri.equals(&planar));
        assert!(vs.equals(&planar));
    }

    #[test]
    fn evaluates_to_tree_amplitude() {
        for seed in 0..10 {
            let k = sample_kinematics_with(5, seed, SamplingMode::Abhy).unwrap();
            let [c13, c14, c24] = abhy_constants(&k).unwrap();
            let p = abhy_pentagon(&c13, &c14, &c24).unwrap();
            let pt = abhy_point(&k);
            let value = canonical_value(&p, &pt).unwrap();
            assert_eq!(value, tree_amplitude_value(&k).unwrap());
            assert_eq!(canonical_function(&p).unwrap().eval(&pt).unwrap(), value);
        }
    }
}
