//! Bounded full-dimensional polytopes with exact H- and V-representations,
//! their canonical functions and adjoints.
//!
//! Conversion between representations is brute force over `dim`-subsets,
//! which is fine for the small polytopes this crate deals with.

mod abhy;
mod canonical;
mod parametric;

pub use abhy::{abhy_constants, abhy_facets, abhy_family, abhy_pentagon, abhy_point, ABHY_LABELS};
pub use canonical::{
    adjoint, canonical_function, canonical_function_with_apex, canonical_value,
    homogenized_adjoint, simplex_canonical, vertex_sum,
};
pub use parametric::ParametricPolytope;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{primitive_integer_vector, serde_text};
use crate::algebra::{rank, solve_linear, vars, LinearSolution, Polynomial, Rational, Vars};
use crate::error::{Error, Result};

/// The inequality `a·x ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    #[serde(with = "serde_text::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "serde_text")]
    pub b: Rational,
}

impl Facet {
    pub fn new(a: Vec<Rational>, b: Rational) -> Self {
        Facet { a, b }
    }

    /// `b − a·x`, non-negative on the polytope.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        let dot: Rational = self.a.iter().zip(x).map(|(a, x)| a * x).sum();
        &self.b - dot
    }

    /// `b − a·x` as a polynomial in the given coordinates.
    pub fn form(&self, coords: &Vars) -> Polynomial {
        let neg: Vec<Rational> = self.a.iter().map(|v| -v).collect();
        Polynomial::linear(coords, self.b.clone(), &neg)
    }

    /// Positive rescaling to coprime integers, so equal half-spaces compare equal.
    fn normalized(&self) -> Facet {
        let mut all = self.a.clone();
        all.push(self.b.clone());
        let mut ints = primitive_integer_vector(&all);
        // primitive_integer_vector may flip the sign; undo that to keep the half-space.
        let first = all
            .iter()
            .position(|v| !v.is_zero())
            .expect("nonzero facet");
        if all[first].is_negative() {
            ints.iter_mut().for_each(|v| *v = -v.clone());
        }
        let b = Rational::from_integer(ints.pop().expect("offset"));
        Facet {
            a: ints.into_iter().map(Rational::from_integer).collect(),
            b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    coords: Vars,
    facets: Vec<Facet>,
    vertices: Vec<Vec<Rational>>,
    /// Vertex indices on each facet.
    incidence: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeJson {
    dim: usize,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Facet>>,
    #[serde(
        rename = "V",
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_matrix"
    )]
    v: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<String>>,
}

mod opt_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Vec<Rational>>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(rows) => serde_text::matrix::serialize(rows, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Vec<Rational>>>, D::Error> {
        serde_text::matrix::deserialize(d).map(Some)
    }
}

/// `x1, …, xn`.
pub fn default_coords(dim: usize) -> Vars {
    let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    vars(&names)
}

/// Dimension of the affine hull of the given points (−1 as `None` for no points).
pub fn affine_dimension(points: &[&[Rational]]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(if diffs.is_empty() { 0 } else { rank(&diffs) })
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

fn check_dims(dim: usize, rows: &[Vec<Rational>]) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("polytope dimension must be positive"));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::invalid(format!(
            "expected vectors of length {dim}, got {}",
            bad.len()
        )));
    }
    Ok(())
}

impl Polytope {
    /// Convex hull of a point set; non-vertex points are discarded.
    pub fn from_vertices(points: &[Vec<Rational>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        check_dims(dim, points)?;
        let refs: Vec<&[Rational]> = points.iter().map(Vec::as_slice).collect();
        let found = affine_dimension(&refs).unwrap_or(0);
        if found != dim {
            return Err(Error::NotFullDimensional {
                expected: dim,
                found,
            });
        }
        let mut facets: Vec<Facet> = Vec::new();
        for subset in combinations(points.len(), dim) {
            let rows: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| {
                    let mut r = points[i].clone();
                    r.push(Rational::one());
                    r
                })
                .collect();
            let kernel = match solve_linear(&rows, &vec![Rational::zero(); dim]) {
                LinearSolution::Family { kernel, .. } if kernel.len() == 1 => {
                    kernel.into_iter().next().unwrap()
                }
                _ => continue,
            };
            let a: Vec<Rational> = kernel[..dim]
                .iter()
                .cloned()
                .map(Rational::from_integer)
                .collect();
            let b = -Rational::from_integer(kernel[dim].clone());
            let mut facet = Facet::new(a, b);
            let slacks: Vec<Rational> = points.iter().map(|p| facet.slack(p)).collect();
            let below = slacks.iter().any(Signed::is_negative);
            let above = slacks.iter().any(Signed::is_positive);
            match (below, above) {
                (false, _) => {}
                (true, false) => facet = Facet::new(facet.a.iter().map(|v| -v).collect(), -facet.b),
                (true, true) => continue,
            }
            let facet = facet.normalized();
            if !facets.contains(&facet) {
                facets.push(facet);
            }
        }
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        for p in points {
            let tight: Vec<Vec<Rational>> = facets
                .iter()
                .filter(|f| f.slack(p).is_zero())
                .map(|f| f.a.clone())
                .collect();
            if !tight.is_empty() && rank(&tight) == dim && !vertices.contains(p) {
                vertices.push(p.clone());
            }
        }
        Ok(Self::assemble(dim, facets, vertices))
    }

    /// Polytope `{x : a·x ≤ b for every facet}`; redundant inequalities are
    /// dropped, the rest keep their input order.
    pub fn from_inequalities(dim: usize, inequalities: &[Facet]) -> Result<Self> {
        let normals: Vec<Vec<Rational>> = inequalities.iter().map(|f| f.a.clone()).collect();
        check_dims(dim, &normals)?;
        if inequalities.iter().any(|f| f.a.iter().all(Zero::is_zero)) {
            return Err(Error::invalid("facet with zero normal"));
        }
        let mut facets: Vec<Facet> = Vec::new();
        for f in inequalities {
            let f = f.normalized();
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
        let normals: Vec<Vec<Rational>> = facets.iter().map(|f| f.a.clone()).collect();
        if rank(&normals) < dim {
            return Err(Error::Unbounded);
        }
        // A pointed recession cone is bounded iff it has no extreme ray.
        for subset in combinations(facets.len(), dim - 1) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| facets[i].a.clone()).collect();
            let ray = if rows.is_empty() {
                vec![Rational::one()]
                    .into_iter()
                    .chain(std::iter::repeat_n(Rational::zero(), dim - 1))
                    .collect::<Vec<_>>()
            } else {
                match solve_linear(&rows, &vec![Rational::zero(); rows.len()]) {
                    LinearSolution::Family { kernel, .. } if kernel.len() == 1 => kernel[0]
                        .iter()
                        .cloned()
                        .map(Rational::from_integer)
                        .collect(),
                    _ => continue,
                }
            };
            for sign in [Rational::one(), -Rational::one()] {
                let d: Vec<Rational> = ray.iter().map(|v| v * &sign).collect();
                let recedes = facets.iter().all(|f| {
                    let dot: Rational = f.a.iter().zip(&d).map(|(a, x)| a * x).sum();
                    !dot.is_positive()
                });
                if recedes {
                    return Err(Error::Unbounded);
                }
            }
        }
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        for subset in combinations(facets.len(), dim) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| facets[i].a.clone()).collect();
            let rhs: Vec<Rational> = subset.iter().map(|&i| facets[i].b.clone()).collect();
            let LinearSolution::Unique(x) = solve_linear(&rows, &rhs) else {
                continue;
            };
            if facets.iter().all(|f| !f.slack(&x).is_negative()) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
        if vertices.is_empty() {
            return Err(Error::invalid("inequalities have no common solution"));
        }
        let refs: Vec<&[Rational]> = vertices.iter().map(Vec::as_slice).collect();
        let found = affine_dimension(&refs).unwrap_or(0);
        if found != dim {
            return Err(Error::NotFullDimensional {
                expected: dim,
                found,
            });
        }
        let facets: Vec<Facet> = facets
            .into_iter()
            .filter(|f| {
                let on: Vec<&[Rational]> = vertices
                    .iter()
                    .filter(|v| f.slack(v).is_zero())
                    .map(Vec::as_slice)
                    .collect();
                affine_dimension(&on) == Some(dim - 1)
            })
            .collect();
        Ok(Self::assemble(dim, facets, vertices))
    }

    fn assemble(dim: usize, facets: Vec<Facet>, vertices: Vec<Vec<Rational>>) -> Self {
        let incidence = facets
            .iter()
            .map(|f| {
                (0..vertices.len())
                    .filter(|&v| f.slack(&vertices[v]).is_zero())
                    .collect()
            })
            .collect();
        Polytope {
            dim,
            coords: default_coords(dim),
            facets,
            vertices,
            incidence,
        }
    }

    /// Renames the ambient coordinates.
    pub fn with_coords(mut self, coords: Vars) -> Result<Self> {
        if coords.len() != self.dim {
            return Err(Error::invalid("one coordinate name per dimension"));
        }
        self.coords = coords;
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolytopeJson =
            serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        let p = match (&raw.h, &raw.v) {
            (Some(h), _) => Self::from_inequalities(raw.dim, h)?,
            (None, Some(v)) => {
                check_dims(raw.dim, v)?;
                Self::from_vertices(v)?
            }
            (None, None) => return Err(Error::invalid("polytope needs \"H\" or \"V\"")),
        };
        if let (Some(_), Some(v)) = (&raw.h, &raw.v) {
            let same = v.len() == p.vertices.len() && v.iter().all(|x| p.vertices.contains(x));
            if !same {
                return Err(Error::invalid(
                    "\"H\" and \"V\" describe different polytopes",
                ));
            }
        }
        match raw.coords {
            Some(names) => p.with_coords(vars(&names)),
            None => Ok(p),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = PolytopeJson {
            dim: self.dim,
            h: Some(self.facets.clone()),
            v: Some(self.vertices.clone()),
            coords: (self.coords != default_coords(self.dim)).then(|| self.coords.to_vec()),
        };
        serde_json::to_value(raw).expect("polytope serialize")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &Vars {
        &self.coords
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Facets through a vertex.
    pub fn facets_at(&self, vertex: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.incidence[f].contains(&vertex))
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.facets_at(v).len() == self.dim)
    }

    pub fn contains_strictly(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// Facet forms `b_F − a_F·x`.
    pub fn facet_forms(&self) -> Vec<Polynomial> {
        self.facets.iter().map(|f| f.form(&self.coords)).collect()
    }

    fn face_dimension(&self, face: &[usize]) -> usize {
        let pts: Vec<&[Rational]> = face.iter().map(|&v| self.vertices[v].as_slice()).collect();
        affine_dimension(&pts).unwrap_or(0)
    }

    /// Pulling triangulation: cone from `apex` over the triangulated facets
    /// not containing it, recursively (lowest index as apex below the top).
    /// Returns simplices as vertex index lists.
    pub fn pulling_triangulation(&self, apex: usize) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate_face(&all, self.dim, Some(apex))
    }

    fn triangulate_face(&self, face: &[usize], dim: usize, apex: Option<usize>) -> Vec<Vec<usize>> {
        if face.len() == dim + 1 {
            return vec![face.to_vec()];
        }
        let v = apex.filter(|a| face.contains(a)).unwrap_or(face[0]);
        let mut subfaces: Vec<Vec<usize>> = Vec::new();
        for inc in &self.incidence {
            let g: Vec<usize> = face.iter().copied().filter(|x| inc.contains(x)).collect();
            if !g.contains(&v)
                && !subfaces.contains(&g)
                && self.face_dimension(&g) + 1 == dim
                && !g.is_empty()
            {
                subfaces.push(g);
            }
        }
        let mut out = Vec::new();
        for g in subfaces {
            for mut s in self.triangulate_face(&g, dim - 1, None) {
                s.insert(0, v);
                out.push(s);
            }
        }
        out
    }
}
