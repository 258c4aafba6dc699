//! Truncated signatures of piecewise-linear paths in exact arithmetic.
//!
//! A segment with increment `v` has signature `exp(v) = Σ_k v^{⊗k}/k!`;
//! concatenation multiplies signatures in the truncated tensor algebra.
//! Words index signature entries with letters `1..=d`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{int, serde_text};
use crate::algebra::{DenseTensor, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathJson", into = "PathJson")]
pub struct PiecewiseLinearPath {
    dim: usize,
    points: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathJson {
    #[serde(with = "serde_text::matrix")]
    points: Vec<Vec<Rational>>,
}

impl TryFrom<PathJson> for PiecewiseLinearPath {
    type Error = Error;
    fn try_from(raw: PathJson) -> Result<Self> {
        PiecewiseLinearPath::new(raw.points)
    }
}

impl From<PiecewiseLinearPath> for PathJson {
    fn from(p: PiecewiseLinearPath) -> Self {
        PathJson { points: p.points }
    }
}

impl PiecewiseLinearPath {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a path needs at least 2 points"));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::invalid(
                "all points must have the same positive dimension",
            ));
        }
        Ok(PiecewiseLinearPath { dim, points })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn increments(&self) -> impl Iterator<Item = Vec<Rational>> + '_ {
        self.points
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
    }

    /// This path followed by `other` translated to start at this path's end.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::invalid("dimension mismatch"));
        }
        let mut points = self.points.clone();
        let mut at = points.last().cloned().expect("nonempty");
        for v in other.increments() {
            at = at.iter().zip(&v).map(|(a, b)| a + b).collect();
            points.push(at.clone());
        }
        Self::new(points)
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        PiecewiseLinearPath {
            dim: self.dim,
            points,
        }
    }

    /// Inserts the midpoint of segment `segment` (0-based).
    pub fn refined(&self, segment: usize) -> Result<Self> {
        if segment + 1 >= self.points.len() {
            return Err(Error::invalid(format!("path has no segment {segment}")));
        }
        let half = Rational::new(1.into(), 2.into());
        let (a, b) = (&self.points[segment], &self.points[segment + 1]);
        let mid = a.iter().zip(b).map(|(x, y)| (x + y) * &half).collect();
        let mut points = self.points.clone();
        points.insert(segment + 1, mid);
        Self::new(points)
    }
}

/// Path through `(t, t², …, t^d)` at each node.
pub fn cyclic_path(nodes: &[Rational], d: usize) -> Result<PiecewiseLinearPath> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("nodes must be strictly increasing"));
    }
    let points = nodes
        .iter()
        .map(|t| {
            let mut p = Vec::with_capacity(d);
            let mut power = t.clone();
            for _ in 0..d {
                p.push(power.clone());
                power *= t;
            }
            p
        })
        .collect();
    PiecewiseLinearPath::new(points)
}

/// Levels `0..=K` of a truncated tensor series; level 0 is a scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureTensorStack {
    levels: Vec<DenseTensor<Rational>>,
}

impl SignatureTensorStack {
    /// The unit `1 + 0 + 0 + …`.
    pub fn identity(dim: usize, level: usize) -> Self {
        let mut levels = vec![DenseTensor::scalar(dim, Rational::one())];
        levels.extend((1..=level).map(|k| DenseTensor::zeros(dim, k)));
        SignatureTensorStack { levels }
    }

    /// `exp(v)` truncated at `level`.
    pub fn exponential(v: &[Rational], level: usize) -> Self {
        let dim = v.len();
        let letter = DenseTensor::from_entries(dim, 1, v.to_vec()).expect("vector shape");
        let mut levels = vec![DenseTensor::scalar(dim, Rational::one())];
        for k in 1..=level {
            let next = levels[k - 1].outer(&letter);
            let inv = Rational::one() / int(k as i64);
            let scaled = next.entries().iter().map(|x| x * &inv).collect();
            levels.push(DenseTensor::from_entries(dim, k, scaled).expect("shape"));
        }
        SignatureTensorStack { levels }
    }

    pub fn dim(&self) -> usize {
        self.levels[0].dim()
    }

    /// Truncation level `K`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &DenseTensor<Rational> {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[DenseTensor<Rational>] {
        &self.levels
    }

    /// Entry for a word with letters in `1..=d`; the empty word gives 1.
    pub fn word(&self, word: &[usize]) -> Result<&Rational> {
        if word.len() > self.depth() {
            return Err(Error::LevelOverflow {
                requested: word.len(),
                level: self.depth(),
            });
        }
        if word.iter().any(|&l| l == 0 || l > self.dim()) {
            return Err(Error::invalid(format!(
                "letters must lie in 1..={}",
                self.dim()
            )));
        }
        let index: Vec<usize> = word.iter().map(|l| l - 1).collect();
        Ok(self.levels[word.len()].get(&index))
    }

    /// Product in the truncated tensor algebra (Chen concatenation).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() || self.depth() != other.depth() {
            return Err(Error::invalid(
                "signature stacks differ in dimension or level",
            ));
        }
        let dim = self.dim();
        let levels = (0..=self.depth())
            .map(|k| {
                let mut acc = DenseTensor::zeros(dim, k);
                for i in 0..=k {
                    acc.add_assign(&self.levels[i].outer(&other.levels[k - i]));
                }
                acc
            })
            .collect();
        Ok(SignatureTensorStack { levels })
    }

    pub fn is_identity(&self) -> bool {
        self.levels[0].entries()[0].is_one()
            && self.levels[1..]
                .iter()
                .all(|t| t.entries().iter().all(Zero::is_zero))
    }

    /// Levels as nested arrays of `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.levels
                .iter()
                .map(|t| t.to_nested(|x| x.to_string()))
                .collect(),
        )
    }
}

pub fn signature(path: &PiecewiseLinearPath, level: usize) -> SignatureTensorStack {
    path.increments()
        .fold(SignatureTensorStack::identity(path.dim, level), |acc, v| {
            acc.mul(&SignatureTensorStack::exponential(&v, level))
                .expect("matching shapes")
        })
}

/// All interleavings of `a` and `b`, with multiplicity.
pub fn shuffles(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    match (a.split_first(), b.split_first()) {
        (None, _) => vec![b.to_vec()],
        (_, None) => vec![a.to_vec()],
        (Some((&x, ra)), Some((&y, rb))) => {
            let mut out = Vec::new();
            for mut w in shuffles(ra, b) {
                w.insert(0, x);
                out.push(w);
            }
            for mut w in shuffles(a, rb) {
                w.insert(0, y);
                out.push(w);
            }
            out
        }
    }
}

/// `σ_a σ_b = Σ_{w ∈ a ⧢ b} σ_w`, checked exactly.
pub fn shuffle_check(stack: &SignatureTensorStack, a: &[usize], b: &[usize]) -> Result<bool> {
    if a.len() + b.len() > stack.depth() {
        return Err(Error::LevelOverflow {
            requested: a.len() + b.len(),
            level: stack.depth(),
        });
    }
    let lhs = stack.word(a)? * stack.word(b)?;
    let mut rhs = Rational::zero();
    for w in shuffles(a, b) {
        rhs += stack.word(&w)?;
    }
    Ok(lhs == rhs)
}

/// Every word over `1..=d` of length `len`.
pub fn words(d: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (1..=d).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn path(points: &[&[i64]]) -> PiecewiseLinearPath {
        PiecewiseLinearPath::new(
            points
                .iter()
                .map(|p| p.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn l_shaped_path() {
        let s = signature(&path(&[&[0, 0], &[1, 0], &[1, 1]]), 2);
        assert_eq!(s.word(&[1, 1]).unwrap(), &rat(1, 2));
        assert_eq!(s.word(&[1, 2]).unwrap(), &int(1));
        assert_eq!(s.word(&[2, 1]).unwrap(), &int(0));
        assert_eq!(s.word(&[2, 2]).unwrap(), &rat(1, 2));
        assert!(shuffle_check(&s, &[1], &[2]).unwrap());
        assert!(shuffle_check(&s, &[1], &[1]).unwrap());
        assert!(matches!(
            shuffle_check(&s, &[1, 2], &[1]),
            Err(Error::LevelOverflow { .. })
        ));
    }

    #[test]
    fn single_segment_is_exponential() {
        let v = [int(3), int(-2)];
        let s = signature(&path(&[&[1, 1], &[4, -1]]), 3);
        for (i, a) in v.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                assert_eq!(s.word(&[i + 1, j + 1]).unwrap(), &(a * b / int(2)));
            }
        }
        assert_eq!(s.word(&[1, 1, 1]).unwrap(), &rat(27, 6));
    }

    #[test]
    fn zero_segments_are_neutral() {
        let a = signature(&path(&[&[0, 0], &[1, 2], &[1, 2], &[3, 1]]), 3);
        let b = signature(&path(&[&[0, 0], &[1, 2], &[3, 1]]), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn cyclic_path_breakpoints() {
        let p = cyclic_path(&[int(1), int(2)], 3).unwrap();
        assert_eq!(
            p.points(),
            &[vec![int(1), int(1), int(1)], vec![int(2), int(4), int(8)]]
        );
        let nodes: Vec<Rational> = (1..=5).map(int).collect();
        let p = cyclic_path(&nodes, 3).unwrap();
        let z = crate::grassmann::twisted_cubic_z();
        for (i, pt) in p.points().iter().enumerate() {
            assert_eq!(&z.row(i + 1)[1..], pt.as_slice());
        }
        let s = signature(&p, 1);
        assert_eq!(s.level(1).entries(), &[int(4), int(24), int(124)]);
        assert!(cyclic_path(&[int(2), int(1)], 3).is_err());
        assert!(cyclic_path(&[int(1), int(1)], 3).is_err());
    }

    #[test]
    fn reversal_is_inverse() {
        let p = cyclic_path(&[rat(-1, 2), int(0), rat(2, 3), int(2)], 3).unwrap();
        let s = signature(&p, 4);
        let r = signature(&p.reversed(), 4);
        assert!(s.mul(&r).unwrap().is_identity());
        assert!(r.mul(&s).unwrap().is_identity());
    }

    #[test]
    fn json_round_trip() {
        let p =
            PiecewiseLinearPath::from_json(r#"{"points": [["0", "1/2"], ["1", "-3"]]}"#).unwrap();
        assert_eq!(p.points()[0][1], rat(1, 2));
        let back = PiecewiseLinearPath::from_json(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(PiecewiseLinearPath::from_json(r#"{"points": [["0"]]}"#).is_err());
        let s = signature(&p, 2);
        assert_eq!(s.to_json()[1].to_string(), r#"["1","-7/2"]"#);
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(&[1, 2], &[3, 4]).len(), 6);
        assert_eq!(shuffles(&[1], &[1]), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(words(2, 3).len(), 8);
    }
}
