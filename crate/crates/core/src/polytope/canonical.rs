use num_traits::{One, Signed, Zero};

use super::Polytope;
use crate::algebra::{determinant, FactoredFraction, Polynomial, Rational, RationalFunction, Vars};
use crate::error::{Error, Result};

/// Rows `(1, v)` of the homogenized vertex matrix.
fn lifted(vertices: &[&[Rational]]) -> Vec<Vec<Rational>> {
    vertices
        .iter()
        .map(|v| {
            std::iter::once(Rational::one())
                .chain(v.iter().cloned())
                .collect()
        })
        .collect()
}

/// Determinant of `rows` with row `i` replaced by `(1, x)`, as a linear
/// polynomial in `coords` (cofactor expansion along row `i`).
fn replaced_row_form(rows: &[Vec<Rational>], i: usize, coords: &Vars) -> Polynomial {
    let n = rows.len();
    let cofactor = |k: usize| -> Rational {
        let minor: Vec<Vec<Rational>> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != k)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let d = determinant(&minor);
        if (i + k).is_multiple_of(2) {
            d
        } else {
            -d
        }
    };
    let coeffs: Vec<Rational> = (1..n).map(cofactor).collect();
    Polynomial::linear(coords, cofactor(0), &coeffs)
}

fn simplex_fraction(vertices: &[&[Rational]], coords: &Vars) -> Result<FactoredFraction> {
    let n = coords.len();
    if vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
        return Err(Error::invalid(format!(
            "an {n}-simplex needs {} vertices in R^{n}",
            n + 1
        )));
    }
    let rows = lifted(vertices);
    let d = determinant(&rows);
    if d.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let forms: Vec<Polynomial> = (0..=n)
        .map(|i| replaced_row_form(&rows, i, coords))
        .collect();
    let mut num = num_traits::pow(d.clone(), n);
    if d.is_negative() {
        num = -num;
    }
    FactoredFraction::new(Polynomial::constant(coords, num), &forms)
}

/// Canonical function `1 / (n!·vol(S)·∏ λ_i(x))` of a simplex, with `λ_i`
/// the barycentric coordinates of `x`.
pub fn simplex_canonical(vertices: &[Vec<Rational>], coords: &Vars) -> Result<RationalFunction> {
    let refs: Vec<&[Rational]> = vertices.iter().map(Vec::as_slice).collect();
    Ok(simplex_fraction(&refs, coords)?.to_rational_function())
}

fn triangulation_sum(p: &Polytope, apex: usize) -> Result<FactoredFraction> {
    if apex >= p.vertices().len() {
        return Err(Error::invalid(format!("apex {apex} is not a vertex index")));
    }
    let mut total = FactoredFraction::zero(p.coords());
    for simplex in p.pulling_triangulation(apex) {
        let verts: Vec<&[Rational]> = simplex
            .iter()
            .map(|&v| p.vertices()[v].as_slice())
            .collect();
        total = total.add(&simplex_fraction(&verts, p.coords())?);
    }
    Ok(total.reduce())
}

/// `n!·vol((P − x)°)`, summed over a pulling triangulation from the first vertex.
pub fn canonical_function(p: &Polytope) -> Result<RationalFunction> {
    canonical_function_with_apex(p, 0)
}

pub fn canonical_function_with_apex(p: &Polytope, apex: usize) -> Result<RationalFunction> {
    Ok(triangulation_sum(p, apex)?.to_rational_function())
}

/// Canonical function of a simple polytope as a sum over vertices of
/// `|det(a_F)| / ∏ (b_F − a_F·x)` over the facets at the vertex.
pub fn vertex_sum(p: &Polytope) -> Result<RationalFunction> {
    let forms = p.facet_forms();
    let mut total = FactoredFraction::zero(p.coords());
    for v in 0..p.vertices().len() {
        let at = p.facets_at(v);
        if at.len() != p.dim() {
            return Err(Error::NotSimple(v));
        }
        let normals: Vec<Vec<Rational>> = at.iter().map(|&f| p.facets()[f].a.clone()).collect();
        let weight = determinant(&normals).abs();
        let dens: Vec<Polynomial> = at.iter().map(|&f| forms[f].clone()).collect();
        total = total.add(&FactoredFraction::new(
            Polynomial::constant(p.coords(), weight),
            &dens,
        )?);
    }
    Ok(total.to_rational_function())
}

/// Exact value of the canonical function at `x`; a point on a facet is a pole.
pub fn canonical_value(p: &Polytope, x: &[Rational]) -> Result<Rational> {
    if x.len() != p.dim() {
        return Err(Error::invalid(
            "point dimension does not match the polytope",
        ));
    }
    if let Some(f) = p.facets().iter().position(|f| f.slack(x).is_zero()) {
        return Err(Error::Pole(format!("facet {f}")));
    }
    let n = p.dim();
    let mut total = Rational::zero();
    for simplex in p.pulling_triangulation(0) {
        let verts: Vec<&[Rational]> = simplex
            .iter()
            .map(|&v| p.vertices()[v].as_slice())
            .collect();
        let mut rows = lifted(&verts);
        let d = determinant(&rows);
        let mut den = Rational::one();
        for i in 0..=n {
            let saved = std::mem::replace(
                &mut rows[i],
                std::iter::once(Rational::one())
                    .chain(x.iter().cloned())
                    .collect(),
            );
            den *= determinant(&rows);
            rows[i] = saved;
        }
        if den.is_zero() {
            // x lies on an internal wall of the triangulation; the spurious
            // poles cancel only in the symbolic sum.
            return canonical_function(p)?.eval(x);
        }
        let mut term = num_traits::pow(d.clone(), n) / den;
        if d.is_negative() {
            term = -term;
        }
        total += term;
    }
    Ok(total)
}

/// Numerator of the canonical function over `∏_F (b_F − a_F·x)`, made primitive.
pub fn adjoint(p: &Polytope) -> Result<Polynomial> {
    let sum = triangulation_sum(p, 0)?;
    Ok(sum.numerator_over(&p.facet_forms())?.primitive_part())
}

/// The adjoint homogenized with `x0` to degree `#facets − dim − 1`.
pub fn homogenized_adjoint(p: &Polytope) -> Result<Polynomial> {
    let degree = p.facets().len() - p.dim() - 1;
    adjoint(p)?.homogenize("x0", degree as u32)
}
