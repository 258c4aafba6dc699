use num_traits::{One, Signed, Zero};

use super::{Facet, Polytope};
use crate::algebra::polynomial::union_vars;
use crate::algebra::{
    determinant, solve_linear, FactoredFraction, LinearSolution, Polynomial, Rational,
    RationalFunction, Vars,
};
use crate::error::{Error, Result};

/// A family of polytopes `{x : a_F·x ≤ b_F(c)}` with fixed normals and
/// offsets polynomial in parameters `c`.
///
/// The combinatorial type is read off at a sample parameter point and the
/// canonical function is then assembled symbolically in `(x, c)`; the result
/// is valid on the whole chamber of parameters sharing that type.
#[derive(Clone, Debug)]
pub struct ParametricPolytope {
    dim: usize,
    coords: Vars,
    params: Vars,
    all: Vars,
    normals: Vec<Vec<Rational>>,
    offsets: Vec<Polynomial>,
}

fn poly_det(m: &[Vec<Polynomial>], vars: &Vars) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(vars),
        1 => m[0][0].clone(),
        n => {
            let mut total = Polynomial::zero(vars);
            for k in 0..n {
                if m[0][k].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != k)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][k] * &poly_det(&minor, vars);
                total = if k % 2 == 0 {
                    &total + &term
                } else {
                    &total - &term
                };
            }
            total
        }
    }
}

impl ParametricPolytope {
    /// `offsets` are polynomials in `params` only.
    pub fn new(
        coords: Vars,
        params: Vars,
        normals: Vec<Vec<Rational>>,
        offsets: Vec<Polynomial>,
    ) -> Result<Self> {
        let dim = coords.len();
        if normals.len() != offsets.len() || normals.iter().any(|a| a.len() != dim) {
            return Err(Error::invalid(
                "one offset per facet and one normal entry per coordinate",
            ));
        }
        let all = union_vars(&coords, &params);
        let offsets = offsets
            .iter()
            .map(|b| b.with_vars(&params))
            .collect::<Result<Vec<_>>>()?;
        Ok(ParametricPolytope {
            dim,
            coords,
            params,
            all,
            normals,
            offsets,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.all
    }

    pub fn params(&self) -> &Vars {
        &self.params
    }

    pub fn coords(&self) -> &Vars {
        &self.coords
    }

    /// `b_F(c) − a_F·x` on the joint variable list.
    pub fn facet_forms(&self) -> Vec<Polynomial> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| {
                let mut form = b.with_vars(&self.all).expect("params in union");
                for (k, ak) in a.iter().enumerate() {
                    let x = self.coordinate(k);
                    form = &form - &x.scale(ak);
                }
                form
            })
            .collect()
    }

    fn coordinate(&self, k: usize) -> Polynomial {
        Polynomial::named(&self.all, &self.coords[k]).expect("coordinate in union")
    }

    /// The member at parameter values `c` (in `params` order). Every facet
    /// must be irredundant there.
    pub fn instantiate(&self, c: &[Rational]) -> Result<Polytope> {
        if c.len() != self.params.len() {
            return Err(Error::invalid("one value per parameter"));
        }
        let facets: Vec<Facet> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| Facet::new(a.clone(), b.eval(c)))
            .collect();
        let p = Polytope::from_inequalities(self.dim, &facets)?.with_coords(self.coords.clone())?;
        if p.facets().len() != facets.len() {
            return Err(Error::NonGeneric(
                "a facet is redundant at the sample parameters".into(),
            ));
        }
        Ok(p)
    }

    fn symbolic_vertex(&self, p: &Polytope, v: usize) -> Result<Vec<Polynomial>> {
        let tight = p.facets_at(v);
        let chosen: Vec<usize> = tight.into_iter().take(self.dim).collect();
        let a: Vec<Vec<Rational>> = chosen.iter().map(|&f| self.normals[f].clone()).collect();
        let mut inverse_cols = Vec::new();
        for j in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[j] = Rational::one();
            match solve_linear(&a, &e) {
                LinearSolution::Unique(col) => inverse_cols.push(col),
                _ => return Err(Error::NotSimple(v)),
            }
        }
        let offsets: Vec<Polynomial> = chosen
            .iter()
            .map(|&f| {
                self.offsets[f]
                    .with_vars(&self.all)
                    .expect("params in union")
            })
            .collect();
        Ok((0..self.dim)
            .map(|k| {
                (0..self.dim).fold(Polynomial::zero(&self.all), |acc, j| {
                    &acc + &offsets[j].scale(&inverse_cols[j][k])
                })
            })
            .collect())
    }

    /// Canonical function in `(x, c)` by the pulling triangulation of the
    /// member at `sample`.
    pub fn canonical_function(&self, sample: &[Rational]) -> Result<RationalFunction> {
        let p = self.instantiate(sample)?;
        let verts: Vec<Vec<Polynomial>> = (0..p.vertices().len())
            .map(|v| self.symbolic_vertex(&p, v))
            .collect::<Result<_>>()?;
        let one = Polynomial::one(&self.all);
        let n = self.dim;
        let mut total = FactoredFraction::zero(&self.all);
        for simplex in p.pulling_triangulation(0) {
            let rows: Vec<Vec<Polynomial>> = simplex
                .iter()
                .map(|&v| {
                    std::iter::once(one.clone())
                        .chain(verts[v].iter().cloned())
                        .collect()
                })
                .collect();
            let numeric: Vec<Vec<Rational>> = simplex
                .iter()
                .map(|&v| {
                    std::iter::once(Rational::one())
                        .chain(p.vertices()[v].iter().cloned())
                        .collect()
                })
                .collect();
            let d = poly_det(&rows, &self.all);
            let sign = determinant(&numeric);
            if sign.is_zero() {
                return Err(Error::DegenerateSimplex);
            }
            let mut num = d.pow(n as u32);
            if sign.is_negative() {
                num = -num;
            }
            let x_row: Vec<Polynomial> = std::iter::once(one.clone())
                .chain((0..n).map(|k| self.coordinate(k)))
                .collect();
            let forms: Vec<Polynomial> = (0..=n)
                .map(|i| {
                    let mut m = rows.clone();
                    m[i] = x_row.clone();
                    poly_det(&m, &self.all)
                })
                .collect();
            total = total.add(&FactoredFraction::new(num, &forms)?);
        }
        Ok(total.to_rational_function())
    }

    /// Vertex-sum formula in `(x, c)`; requires the member at `sample` to be simple.
    pub fn vertex_sum(&self, sample: &[Rational]) -> Result<RationalFunction> {
        let p = self.instantiate(sample)?;
        let forms = self.facet_forms();
        let mut total = FactoredFraction::zero(&self.all);
        for v in 0..p.vertices().len() {
            let at = p.facets_at(v);
            if at.len() != self.dim {
                return Err(Error::NotSimple(v));
            }
            let a: Vec<Vec<Rational>> = at.iter().map(|&f| self.normals[f].clone()).collect();
            let weight = determinant(&a).abs();
            let dens: Vec<Polynomial> = at.iter().map(|&f| forms[f].clone()).collect();
            total = total.add(&FactoredFraction::new(
                Polynomial::constant(&self.all, weight),
                &dens,
            )?);
        }
        Ok(total.to_rational_function())
    }
}
