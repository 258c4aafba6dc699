//! Lines in projective 3-space against a positive 5×4 (or n×4) matrix `Z`:
//! brackets `⟨AB ij⟩`, the sign-flip test for the `k = m = 2`
//! amplituhedron, stabbing of the cyclic polytope `Conv(Z)`, and the
//! adjoint recovered by interpolation through five special lines.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{int, rat, serde_text};
use crate::algebra::{determinant, kernel_basis, rank, Rational};
use crate::error::{Error, Result};

/// Pairs `(i, j)` of coordinates, 1-based, in the order `p12, p13, p14, p23, p24, p34`.
pub const PLUECKER_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZJson", into = "ZJson")]
pub struct ZMatrix {
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct ZJson {
    #[serde(rename = "Z", with = "serde_text::matrix")]
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<ZJson> for ZMatrix {
    type Error = Error;
    fn try_from(raw: ZJson) -> Result<Self> {
        ZMatrix::new(raw.rows)
    }
}

impl From<ZMatrix> for ZJson {
    fn from(z: ZMatrix) -> Self {
        ZJson { rows: z.rows }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl ZMatrix {
    /// Rows of length 4 with every ordered 4×4 minor positive.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.len() < 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(Error::invalid("Z needs at least four rows of length 4"));
        }
        for idx in combinations(rows.len(), 4) {
            let m: Vec<Vec<Rational>> = idx.iter().map(|&i| rows[i].clone()).collect();
            if !determinant(&m).is_positive() {
                let labels: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                return Err(Error::invalid(format!(
                    "minor on rows {} is not positive",
                    labels.join(",")
                )));
            }
        }
        Ok(ZMatrix { rows })
    }

    /// Rows `(1, t, t², t³)` at strictly increasing nodes.
    pub fn twisted_cubic(nodes: &[Rational]) -> Result<Self> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("nodes must be strictly increasing"));
        }
        let rows = nodes
            .iter()
            .map(|t| vec![Rational::one(), t.clone(), t * t, t * t * t])
            .collect();
        ZMatrix::new(rows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Determinant of rows `idx` (1-based).
    pub fn minor(&self, idx: [usize; 4]) -> Rational {
        determinant(
            &idx.iter()
                .map(|&i| self.row(i).to_vec())
                .collect::<Vec<_>>(),
        )
    }
}

/// `(1, i, i², i³)` for `i = 1..=5`.
pub fn twisted_cubic_z() -> ZMatrix {
    ZMatrix::twisted_cubic(&(1..=5).map(int).collect::<Vec<_>>()).expect("increasing nodes")
}

/// Plücker coordinates `(p12, p13, p14, p23, p24, p34)` of a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlueckerJson", into = "PlueckerJson")]
pub struct PlueckerLine {
    p: [Rational; 6],
}

#[derive(Serialize, Deserialize)]
struct PlueckerJson {
    #[serde(with = "serde_text::vec")]
    p: Vec<Rational>,
}

impl TryFrom<PlueckerJson> for PlueckerLine {
    type Error = Error;
    fn try_from(raw: PlueckerJson) -> Result<Self> {
        let p: [Rational; 6] = raw
            .p
            .try_into()
            .map_err(|_| Error::invalid("a Plücker vector has six entries"))?;
        PlueckerLine::new(p)
    }
}

impl From<PlueckerLine> for PlueckerJson {
    fn from(l: PlueckerLine) -> Self {
        PlueckerJson { p: l.p.to_vec() }
    }
}

fn wedge(a: &[Rational], b: &[Rational]) -> [Rational; 6] {
    PLUECKER_PAIRS.map(|(i, j)| &a[i - 1] * &b[j - 1] - &a[j - 1] * &b[i - 1])
}

/// `det(A, B, C, D)` from `p = A∧B` and `q = C∧D`.
fn pairing(p: &[Rational; 6], q: &[Rational; 6]) -> Rational {
    &p[0] * &q[5] - &p[1] * &q[4] + &p[2] * &q[3] + &p[3] * &q[2] - &p[4] * &q[1] + &p[5] * &q[0]
}

impl PlueckerLine {
    pub fn new(p: [Rational; 6]) -> Result<Self> {
        if p.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateLine);
        }
        let line = PlueckerLine { p };
        if !line.relation().is_zero() {
            return Err(Error::invalid("vector violates the Plücker relation"));
        }
        Ok(line)
    }

    pub fn from_points(a: &[Rational], b: &[Rational]) -> Result<Self> {
        if a.len() != 4 || b.len() != 4 {
            return Err(Error::invalid(
                "points in projective 3-space have four coordinates",
            ));
        }
        PlueckerLine::new(wedge(a, b))
    }

    /// `p12 p34 − p13 p24 + p14 p23`.
    pub fn relation(&self) -> Rational {
        let p = &self.p;
        &p[0] * &p[5] - &p[1] * &p[4] + &p[2] * &p[3]
    }

    pub fn coords(&self) -> &[Rational; 6] {
        &self.p
    }

    /// `⟨AB C D⟩` for the line `AB`.
    pub fn bracket(&self, c: &[Rational], d: &[Rational]) -> Rational {
        pairing(&self.p, &wedge(c, d))
    }
}

/// A line given by two spanning points, or by its Plücker vector alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LineJson", into = "LineJson")]
pub struct Line {
    points: Option<(Vec<Rational>, Vec<Rational>)>,
    pluecker: PlueckerLine,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LineJson {
    Points {
        #[serde(rename = "A", with = "serde_text::vec")]
        a: Vec<Rational>,
        #[serde(rename = "B", with = "serde_text::vec")]
        b: Vec<Rational>,
    },
    Pluecker(PlueckerLine),
}

impl TryFrom<LineJson> for Line {
    type Error = Error;
    fn try_from(raw: LineJson) -> Result<Self> {
        match raw {
            LineJson::Points { a, b } => Line::through(a, b),
            LineJson::Pluecker(p) => Ok(Line::from_pluecker(p)),
        }
    }
}

impl From<Line> for LineJson {
    fn from(l: Line) -> Self {
        match l.points {
            Some((a, b)) => LineJson::Points { a, b },
            None => LineJson::Pluecker(l.pluecker),
        }
    }
}

impl Line {
    pub fn through(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        let pluecker = PlueckerLine::from_points(&a, &b)?;
        Ok(Line {
            points: Some((a, b)),
            pluecker,
        })
    }

    pub fn from_pluecker(p: PlueckerLine) -> Self {
        Line {
            points: None,
            pluecker: p,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn pluecker(&self) -> &PlueckerLine {
        &self.pluecker
    }

    pub fn points(&self) -> Option<(&[Rational], &[Rational])> {
        self.points
            .as_ref()
            .map(|(a, b)| (a.as_slice(), b.as_slice()))
    }

    /// `⟨AB Z_i Z_j⟩`, as a determinant when spanning points are known.
    pub fn bracket(&self, z: &ZMatrix, i: usize, j: usize) -> Rational {
        match &self.points {
            Some((a, b)) => {
                determinant(&[a.clone(), b.clone(), z.row(i).to_vec(), z.row(j).to_vec()])
            }
            None => self.pluecker.bracket(z.row(i), z.row(j)),
        }
    }
}

fn sign(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign changes along a sequence, skipping zeros.
pub fn sign_flips(values: &[Rational]) -> usize {
    let signs: Vec<i8> = values.iter().map(sign).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Signs of `⟨AB i,i+1⟩` for `i < n`, then `⟨AB 1n⟩`.
    pub chain_signs: Vec<i8>,
    /// Signs of `⟨AB 1j⟩` for `j = 2..=n`.
    pub flip_signs: Vec<i8>,
    pub flip_count: usize,
    /// Set when `n ≠ 5`, where the test is used beyond its stated range.
    pub extended: bool,
}

/// Amplituhedron membership for `k = m = 2`: the chain `⟨AB12⟩, ⟨AB23⟩, …,
/// ⟨AB1n⟩` shares one sign (zeros ignored) and `⟨AB12⟩, …, ⟨AB1n⟩` has
/// exactly two sign flips. `n ≠ 5` requires `extended`.
pub fn membership(line: &Line, z: &ZMatrix, extended: bool) -> Result<MembershipVerdict> {
    let n = z.n();
    if n != 5 && !extended {
        return Err(Error::invalid(
            "membership is stated for n = 5; pass the extended flag for other n",
        ));
    }
    let mut chain: Vec<Rational> = (1..n).map(|i| line.bracket(z, i, i + 1)).collect();
    chain.push(line.bracket(z, 1, n));
    let flips: Vec<Rational> = (2..=n).map(|j| line.bracket(z, 1, j)).collect();
    let chain_signs: Vec<i8> = chain.iter().map(sign).collect();
    let nonzero: Vec<i8> = chain_signs.iter().copied().filter(|&s| s != 0).collect();
    let same = nonzero.windows(2).all(|w| w[0] == w[1]);
    let flip_count = sign_flips(&flips);
    Ok(MembershipVerdict {
        member: same && flip_count == 2,
        chain_signs,
        flip_signs: flips.iter().map(sign).collect(),
        flip_count,
        extended: n != 5,
    })
}

/// Facets of the cone over `Z` as linear forms `det(Z_i, Z_j, Z_k, ·)`,
/// oriented positive on the remaining rows.
pub fn facet_forms(z: &ZMatrix) -> Result<Vec<[Rational; 4]>> {
    if rank(z.rows()) != 4 {
        return Err(Error::invalid("Conv(Z) is not full-dimensional"));
    }
    let n = z.n();
    let mut out = Vec::new();
    for t in combinations(n, 3) {
        // Cofactors of the last row give the form's coefficients.
        let form: [Rational; 4] = std::array::from_fn(|c| {
            let minor: Vec<Vec<Rational>> = t
                .iter()
                .map(|&r| {
                    (0..4)
                        .filter(|&k| k != c)
                        .map(|k| z.rows()[r][k].clone())
                        .collect()
                })
                .collect();
            let d = determinant(&minor);
            if (3 + c) % 2 == 0 {
                d
            } else {
                -d
            }
        });
        if form.iter().all(Zero::is_zero) {
            continue;
        }
        let values: Vec<Rational> = (0..n)
            .filter(|r| !t.contains(r))
            .map(|r| dot(&form, &z.rows()[r]))
            .collect();
        let form = if values.iter().all(|v| !v.is_negative()) {
            form
        } else if values.iter().all(|v| !v.is_positive()) {
            form.map(|v| -v)
        } else {
            continue;
        };
        if !out.contains(&form) {
            out.push(form);
        }
    }
    Ok(out)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether the line meets the interior of the cyclic polytope `Conv(Z)`:
/// some `λA + μB` lies strictly inside every facet (up to overall sign).
pub fn stabs(line: &Line, z: &ZMatrix) -> Result<bool> {
    let (a, b) = match line.points() {
        Some((a, b)) => (a.to_vec(), b.to_vec()),
        None => spanning_points(line.pluecker()),
    };
    let normals: Vec<[Rational; 2]> = facet_forms(z)?
        .iter()
        .map(|f| [dot(f, &a), dot(f, &b)])
        .collect();
    if normals.iter().any(|n| n.iter().all(Zero::is_zero)) {
        return Ok(false);
    }
    // The feasible (λ, μ) form an open cone; if nonempty it contains either a
    // normal or the sum of two boundary rays perpendicular to normals.
    let mut candidates: Vec<[Rational; 2]> = normals.clone();
    let rays: Vec<[Rational; 2]> = normals
        .iter()
        .flat_map(|[x, y]| [[-y.clone(), x.clone()], [y.clone(), -x.clone()]])
        .collect();
    for (i, r) in rays.iter().enumerate() {
        for s in &rays[i + 1..] {
            candidates.push([&r[0] + &s[0], &r[1] + &s[1]]);
        }
    }
    Ok(candidates.iter().any(|w| {
        normals
            .iter()
            .all(|nv| (&nv[0] * &w[0] + &nv[1] * &w[1]).is_positive())
    }))
}

/// Two points spanning the line with Plücker vector `p`.
fn spanning_points(p: &PlueckerLine) -> (Vec<Rational>, Vec<Rational>) {
    // Rows of the 4×4 matrix P_ij = p_ij (antisymmetric) are points on the line.
    let c = p.coords();
    let get = |i: usize, j: usize| -> Rational {
        if i == j {
            return Rational::zero();
        }
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let k = PLUECKER_PAIRS
            .iter()
            .position(|&q| q == (a, b))
            .expect("pair");
        if s == 1 {
            c[k].clone()
        } else {
            -c[k].clone()
        }
    };
    let rows: Vec<Vec<Rational>> = (1..=4)
        .map(|i| (1..=4).map(|j| get(i, j)).collect())
        .collect();
    let nonzero: Vec<&Vec<Rational>> = rows
        .iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let first = nonzero[0].clone();
    let second = nonzero
        .iter()
        .map(|r| (*r).clone())
        .find(|r| rank(&[first.clone(), r.clone()]) == 2)
        .expect("a line has rank-two Plücker matrix");
    (first, second)
}

/// Line through `Z_i` meeting lines `Z_{i+1}Z_{i+2}` and `Z_{i+3}Z_{i+4}`
/// (indices mod 5, 1-based).
pub fn special_line(z: &ZMatrix, i: usize) -> Result<Line> {
    let r = |k: usize| z.row((i + k - 1) % 5 + 1).to_vec();
    let plane = [r(0), r(1), r(2)];
    let side = |p: &[Rational]| {
        determinant(&[
            plane[0].clone(),
            plane[1].clone(),
            plane[2].clone(),
            p.to_vec(),
        ])
    };
    // Where line Z_{i+3}Z_{i+4} crosses span(Z_i, Z_{i+1}, Z_{i+2}).
    let (u, v) = (r(3), r(4));
    let (su, sv) = (side(&u), side(&v));
    let q: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| &sv * a - &su * b).collect();
    Line::through(r(0), q)
}

/// Primitive integer form `Σ c_ij p_ij` vanishing on the five special lines,
/// in the order of [`PLUECKER_PAIRS`], with `c34 > 0`.
pub fn adjoint_interpolation(z: &ZMatrix) -> Result<Vec<BigInt>> {
    if z.n() != 5 {
        return Err(Error::invalid("adjoint interpolation needs five rows"));
    }
    let rows: Vec<Vec<Rational>> = (1..=5)
        .map(|i| Ok(special_line(z, i)?.pluecker().coords().to_vec()))
        .collect::<Result<_>>()?;
    let kernel = kernel_basis(&rows, 6);
    if kernel.len() != 1 {
        return Err(Error::NonGeneric(format!(
            "interpolation kernel has dimension {}",
            kernel.len()
        )));
    }
    let mut c = kernel.into_iter().next().expect("one vector");
    let pivot = if !c[5].is_zero() {
        5
    } else {
        c.iter().rposition(|v| !v.is_zero()).expect("nonzero")
    };
    if c[pivot].is_negative() {
        c.iter_mut().for_each(|v| *v = -v.clone());
    }
    Ok(c)
}

pub fn centroid(points: &[&[Rational]]) -> Vec<Rational> {
    let k = int(points.len() as i64);
    (0..points[0].len())
        .map(|c| points.iter().map(|p| p[c].clone()).sum::<Rational>() / &k)
        .collect()
}

/// Line through the centroids of triangles `Z1Z2Z3` and `Z1Z3Z4`.
pub fn centroid_line(z: &ZMatrix) -> Result<Line> {
    let a = centroid(&[z.row(1), z.row(2), z.row(3)]);
    let b = centroid(&[z.row(1), z.row(3), z.row(4)]);
    Line::through(a, b)
}

/// A random `2×n` matrix with all 2×2 minors positive: columns `(1, t_j)` at
/// increasing nodes, scaled by positive factors, then a positive row operation.
pub fn random_positive_matrix(rng: &mut ChaCha8Rng, n: usize) -> [Vec<Rational>; 2] {
    let mut t = int(0);
    let mut top = Vec::with_capacity(n);
    let mut bottom = Vec::with_capacity(n);
    for _ in 0..n {
        t += rat(rng.gen_range(1..=12), rng.gen_range(1..=4));
        let scale = rat(rng.gen_range(1..=9), rng.gen_range(1..=3));
        top.push(scale.clone());
        bottom.push(scale * &t);
    }
    let c = rat(rng.gen_range(0..=6), rng.gen_range(1..=3));
    let top: Vec<Rational> = top.iter().zip(&bottom).map(|(a, b)| a + &c * b).collect();
    [top, bottom]
}

/// The line spanned by the rows of `C·Z`.
pub fn image_line(c: &[Vec<Rational>; 2], z: &ZMatrix) -> Result<Line> {
    let point = |row: &[Rational]| -> Vec<Rational> {
        (0..4)
            .map(|k| {
                row.iter()
                    .enumerate()
                    .map(|(j, cj)| cj * &z.row(j + 1)[k])
                    .sum()
            })
            .collect()
    };
    Line::through(point(&c[0]), point(&c[1]))
}

/// Seeded members of the amplituhedron, images of random positive matrices.
pub fn sample_members(z: &ZMatrix, count: usize, seed: u64) -> Result<Vec<Line>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| image_line(&random_positive_matrix(&mut rng, z.n()), z))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn twisted_cubic_minors() {
        let z = twisted_cubic_z();
        assert_eq!(z.row(3), ints(&[1, 3, 9, 27]).as_slice());
        assert_eq!(z.minor([1, 2, 3, 4]), int(12));
        assert!(ZMatrix::twisted_cubic(&ints(&[0, 1, 2, 3, 4])).is_ok());
        assert!(ZMatrix::twisted_cubic(&ints(&[0, 2, 1, 3, 4])).is_err());
    }

    #[test]
    fn sign_flip_counter() {
        assert_eq!(sign_flips(&ints(&[1, 0, -1, 1])), 2);
        assert_eq!(sign_flips(&ints(&[0, 0])), 0);
        assert_eq!(sign_flips(&ints(&[-2, -1, 3])), 1);
    }

    #[test]
    fn pluecker_relation_and_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let pts: Vec<Vec<Rational>> = (0..4)
                .map(|_| (0..4).map(|_| int(rng.gen_range(-9..=9))).collect())
                .collect();
            let Ok(l) = PlueckerLine::from_points(&pts[0], &pts[1]) else {
                continue;
            };
            assert!(l.relation().is_zero());
            assert_eq!(l.bracket(&pts[2], &pts[3]), determinant(&pts));
        }
        assert_eq!(
            PlueckerLine::from_points(&ints(&[1, 2, 3, 4]), &ints(&[2, 4, 6, 8])),
            Err(Error::DegenerateLine)
        );
    }

    #[test]
    fn images_are_members() {
        let z = twisted_cubic_z();
        for line in sample_members(&z, 200, 3).unwrap() {
            let v = membership(&line, &z, false).unwrap();
            assert!(v.member, "{v:?}");
            assert!(stabs(&line, &z).unwrap());
        }
    }

    #[test]
    fn random_matrices_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let c = random_positive_matrix(&mut rng, 5);
            for i in 0..5 {
                for j in (i + 1)..5 {
                    assert!((&c[0][i] * &c[1][j] - &c[0][j] * &c[1][i]).is_positive());
                }
            }
        }
    }

    #[test]
    fn centroid_line_stabs_but_is_not_a_member() {
        let z = twisted_cubic_z();
        let line = centroid_line(&z).unwrap();
        let chain: Vec<Rational> = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
            .iter()
            .map(|&(i, j)| line.bracket(&z, i, j))
            .collect();
        assert_eq!(
            chain,
            vec![rat(4, 3), rat(4, 3), rat(-4, 3), rat(-20, 3), rat(56, 3)]
        );
        let v = membership(&line, &z, false).unwrap();
        assert!(!v.member);
        assert_eq!(v.chain_signs[0], -v.chain_signs[2]);
        assert!(stabs(&line, &z).unwrap());
    }

    #[test]
    fn far_line_does_not_stab() {
        let z = twisted_cubic_z();
        let line = Line::through(ints(&[1, 0, 0, 100]), ints(&[0, 1, 0, 100])).unwrap();
        assert!(!stabs(&line, &z).unwrap());
    }

    #[test]
    fn membership_is_invariant_under_respanning() {
        let z = twisted_cubic_z();
        let lines = sample_members(&z, 20, 5).unwrap();
        for line in lines
            .iter()
            .chain(std::iter::once(&centroid_line(&z).unwrap()))
        {
            let (a, b) = line.points().unwrap();
            let a2: Vec<Rational> = a
                .iter()
                .zip(b)
                .map(|(x, y)| x * int(3) + y * int(2))
                .collect();
            let b2: Vec<Rational> = a.iter().zip(b).map(|(x, y)| -x + y * rat(1, 2)).collect();
            let other = Line::through(a2, b2).unwrap();
            let pl = Line::from_pluecker(line.pluecker().clone());
            let m = membership(line, &z, false).unwrap().member;
            assert_eq!(m, membership(&other, &z, false).unwrap().member);
            assert_eq!(m, membership(&pl, &z, false).unwrap().member);
            assert_eq!(stabs(line, &z).unwrap(), stabs(&pl, &z).unwrap());
        }
    }

    #[test]
    fn cyclic_polytope_facets() {
        // Gale evenness: Conv of five points on the moment curve in R³ has six facets.
        assert_eq!(facet_forms(&twisted_cubic_z()).unwrap().len(), 6);
    }

    #[test]
    fn special_lines_meet_their_targets() {
        let z = twisted_cubic_z();
        for i in 1..=5 {
            let l = special_line(&z, i).unwrap();
            assert!(l.pluecker().relation().is_zero());
            let r = |k: usize| z.row((i + k - 1) % 5 + 1).to_vec();
            // Meeting a line means the 4×4 bracket with it vanishes.
            assert!(l.pluecker().bracket(&r(1), &r(2)).is_zero());
            assert!(l.pluecker().bracket(&r(3), &r(4)).is_zero());
            assert!(l.pluecker().coords() != &[int(0), int(0), int(0), int(0), int(0), int(0)]);
        }
    }

    #[test]
    fn adjoint_of_the_twisted_cubic() {
        let c = adjoint_interpolation(&twisted_cubic_z()).unwrap();
        let expected: Vec<BigInt> = [593, -330, 49, 143, -30, 5]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(c, expected);
    }

    #[test]
    fn printed_labelling_misses_a_special_line() {
        // 593 p12 − 330 p13 + 143 p14 + 49 p23 − 30 p24 + 5 p34
        let printed = ints(&[593, -330, 143, 49, -30, 5]);
        let z = twisted_cubic_z();
        let l = special_line(&z, 1).unwrap();
        assert!(!dot(&printed, l.pluecker().coords()).is_zero());
    }

    #[test]
    fn adjoint_is_scale_invariant() {
        let z = ZMatrix::twisted_cubic(&ints(&[0, 1, 2, 3, 4])).unwrap();
        let c = adjoint_interpolation(&z).unwrap();
        let scaled: Vec<Vec<Rational>> = z
            .rows()
            .iter()
            .zip([2, 3, 5, 7, 11])
            .map(|(r, s)| r.iter().map(|v| v * int(s)).collect())
            .collect();
        assert_eq!(
            adjoint_interpolation(&ZMatrix::new(scaled).unwrap()).unwrap(),
            c
        );
        assert!(c[5].is_positive());
    }

    #[test]
    fn json_round_trip() {
        let z = twisted_cubic_z();
        let text = serde_json::to_string(&z).unwrap();
        assert_eq!(ZMatrix::from_json(&text).unwrap(), z);
        let l = centroid_line(&z).unwrap();
        let back = Line::from_json(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
        let p = Line::from_pluecker(l.pluecker().clone());
        assert_eq!(
            Line::from_json(&serde_json::to_string(&p).unwrap()).unwrap(),
            p
        );
    }
}
