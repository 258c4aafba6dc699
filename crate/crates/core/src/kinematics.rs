//! Mandelstam data for `n` massless particles, planar variables and the
//! dihedral exponents built from them.
//!
//! Particle labels are 1-based throughout the public API and are read
//! cyclically, so `s(n + 1, 3)` is `s(1, 3)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{int, rat, serde_text};
use crate::algebra::{vars, Polynomial, Rational, Vars};
use crate::error::{Error, Result};

/// Diagonals `(i, j)` of the n-gon, `1 ≤ i < j ≤ n`, `j − i ≥ 2`, `(i, j) ≠ (1, n)`,
/// in lexicographic order.
pub fn diagonals(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 2)..=n {
            if !(i == 1 && j == n) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Reduces a cyclic label to `1..=n`.
pub fn wrap(i: usize, n: usize) -> usize {
    (i - 1) % n + 1
}

/// Orders a cyclic pair and returns it if it is a diagonal of the n-gon.
pub fn as_diagonal(i: usize, j: usize, n: usize) -> Option<(usize, usize)> {
    let (a, b) = {
        let (a, b) = (wrap(i, n), wrap(j, n));
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    (b >= a + 2 && !(a == 1 && b == n)).then_some((a, b))
}

pub fn planar_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("X{i}{j}")
    } else {
        format!("X{i}_{j}")
    }
}

pub fn mandelstam_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("s{i}{j}")
    } else {
        format!("s{i}_{j}")
    }
}

/// Symmetric Mandelstam matrix with zero diagonal and zero row sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KinematicsJson", into = "KinematicsJson")]
pub struct KinematicData {
    n: usize,
    s: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KinematicsJson {
    n: usize,
    #[serde(with = "serde_text::matrix")]
    s: Vec<Vec<Rational>>,
}

impl TryFrom<KinematicsJson> for KinematicData {
    type Error = Error;
    fn try_from(raw: KinematicsJson) -> Result<Self> {
        KinematicData::new(raw.n, raw.s)
    }
}

impl From<KinematicData> for KinematicsJson {
    fn from(k: KinematicData) -> Self {
        KinematicsJson { n: k.n, s: k.s }
    }
}

impl KinematicData {
    /// Validates shape, symmetry, zero diagonal and momentum conservation.
    pub fn new(n: usize, s: Vec<Vec<Rational>>) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid(format!("need n >= 4 particles, got {n}")));
        }
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(Error::invalid(format!("Mandelstam matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if !s[i][i].is_zero() {
                return Err(Error::invalid(format!("s{0}{0} must vanish", i + 1)));
            }
            for j in (i + 1)..n {
                if s[i][j] != s[j][i] {
                    return Err(Error::invalid(format!(
                        "Mandelstam matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
            let row: Rational = s[i].iter().sum();
            if !row.is_zero() {
                return Err(Error::invalid(format!(
                    "momentum conservation fails in row {}: sum is {row}",
                    i + 1
                )));
            }
        }
        Ok(KinematicData { n, s })
    }

    pub fn zero(n: usize) -> Self {
        KinematicData {
            n,
            s: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("kinematics serialize")
    }

    /// Builds the Mandelstam matrix from planar variables:
    /// `s_{i,i+1} = X_{i,i+2}` and
    /// `s_ij = X_{i,j+1} + X_{i+1,j} − X_ij − X_{i+1,j+1}` otherwise.
    pub fn from_planar(x: &PlanarVariables) -> Self {
        let n = x.n;
        let mut s = vec![vec![Rational::zero(); n]; n];
        for i in 1..=n {
            for j in (i + 1)..=n {
                let v = if j == i + 1 || (i == 1 && j == n) {
                    let (a, b) = if j == i + 1 { (i, j) } else { (n, 1) };
                    x.get(a, b + 1)
                } else {
                    x.get(i, j + 1) + x.get(i + 1, j) - x.get(i, j) - x.get(i + 1, j + 1)
                };
                s[i - 1][j - 1] = v.clone();
                s[j - 1][i - 1] = v;
            }
        }
        KinematicData { n, s }
    }

    /// Every invariant multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let s = self
            .s
            .iter()
            .map(|row| row.iter().map(|v| v * factor).collect())
            .collect();
        KinematicData { n: self.n, s }
    }

    /// Rescaled so the largest planar variable magnitude is 1.
    pub fn unit_scaled(&self) -> Self {
        let max = self.planar().values().into_iter().map(|v| v.abs()).max();
        match max {
            Some(m) if !m.is_zero() => self.scaled(&(Rational::one() / m)),
            _ => self.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `s_ij` with cyclic 1-based labels.
    pub fn s(&self, i: usize, j: usize) -> &Rational {
        &self.s[wrap(i, self.n) - 1][wrap(j, self.n) - 1]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.s
    }

    /// Planar variables `X_ij = Σ_{i ≤ a < b ≤ j−1} s_ab`.
    pub fn planar(&self) -> PlanarVariables {
        let values = diagonals(self.n)
            .into_iter()
            .map(|(i, j)| {
                let mut x = Rational::zero();
                for a in i..j {
                    for b in (a + 1)..j {
                        x += self.s(a, b);
                    }
                }
                ((i, j), x)
            })
            .collect();
        PlanarVariables { n: self.n, values }
    }

    /// A subset `I` (labels below `n`, `2 ≤ |I| ≤ n − 2`) with
    /// `s_I = Σ_{a<b ∈ I} s_ab = 0`, if any. Such kinematics sit on a
    /// factorization boundary where scattering solutions degenerate.
    pub fn vanishing_invariant(&self) -> Option<Vec<usize>> {
        let n = self.n;
        for mask in 1u64..(1u64 << (n - 1)) {
            let size = mask.count_ones() as usize;
            if size < 2 || size > n - 2 {
                continue;
            }
            let members: Vec<usize> = (1..n).filter(|a| mask >> (a - 1) & 1 == 1).collect();
            let mut total = Rational::zero();
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    total += self.s(a, b);
                }
            }
            if total.is_zero() {
                return Some(members);
            }
        }
        None
    }

    /// Relabels particle `i` as `i + shift` (mod n).
    pub fn rotate(&self, shift: usize) -> Self {
        let n = self.n;
        let mut s = vec![vec![Rational::zero(); n]; n];
        for i in 1..=n {
            for j in 1..=n {
                s[wrap(i + shift, n) - 1][wrap(j + shift, n) - 1] = self.s(i, j).clone();
            }
        }
        KinematicData { n, s }
    }
}

/// Values of the planar variables on the diagonals of the n-gon.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarVariables {
    n: usize,
    values: BTreeMap<(usize, usize), Rational>,
}

impl PlanarVariables {
    /// Requires a value for every diagonal, in the order of [`diagonals`].
    pub fn new(n: usize, values: &[Rational]) -> Result<Self> {
        let diags = diagonals(n);
        if n < 4 || values.len() != diags.len() {
            return Err(Error::invalid(format!(
                "expected {} planar values for n = {n}, got {}",
                diags.len(),
                values.len()
            )));
        }
        Ok(PlanarVariables {
            n,
            values: diags.into_iter().zip(values.iter().cloned()).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `X_ij`, zero when `(i, j)` is not a diagonal (an edge or a repeated label).
    pub fn get(&self, i: usize, j: usize) -> Rational {
        as_diagonal(i, j, self.n)
            .and_then(|d| self.values.get(&d).cloned())
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.values.iter()
    }

    pub fn values(&self) -> Vec<Rational> {
        self.values.values().cloned().collect()
    }
}

/// `X_ij = s_{i,j+1} + s_{i+1,j} − s_ij − s_{i+1,j+1}` on each diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralExponents {
    pub n: usize,
    pub values: BTreeMap<(usize, usize), Rational>,
}

pub fn dihedral_exponents(k: &KinematicData) -> DihedralExponents {
    let values = diagonals(k.n)
        .into_iter()
        .map(|(i, j)| {
            let x = k.s(i, j + 1) + k.s(i + 1, j) - k.s(i, j) - k.s(i + 1, j + 1);
            ((i, j), x)
        })
        .collect();
    DihedralExponents { n: k.n, values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// Nonzero planar values of either sign.
    #[default]
    Generic,
    /// Every planar value positive.
    Positive,
    /// Positive planar values and positive mesh constants `−s_ij` for
    /// non-adjacent `i < j < n`; the region where the ABHY realization is a
    /// bounded polytope.
    Abhy,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(SamplingMode::Generic),
            "positive" => Ok(SamplingMode::Positive),
            "abhy" => Ok(SamplingMode::Abhy),
            _ => Err(Error::invalid(format!("unknown sampling mode {s:?}"))),
        }
    }
}

/// Random kinematics in the default (generic) mode.
pub fn sample_kinematics(n: usize, seed: u64) -> Result<KinematicData> {
    sample_kinematics_with(n, seed, SamplingMode::Generic)
}

pub fn sample_kinematics_with(n: usize, seed: u64, mode: SamplingMode) -> Result<KinematicData> {
    let x = sample_planar(n, seed, mode)?;
    Ok(KinematicData::from_planar(&x))
}

/// Free planar values on the grid `{p/q : 1 ≤ |p| ≤ 24, 1 ≤ q ≤ 4}`.
pub fn sample_planar(n: usize, seed: u64, mode: SamplingMode) -> Result<PlanarVariables> {
    if n < 4 {
        return Err(Error::invalid(format!("need n >= 4 particles, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = diagonals(n).len();
    let mut draw = |positive: bool| -> Vec<Rational> {
        (0..count)
            .map(|_| {
                let p: i64 = rng.gen_range(1..=24);
                let q: i64 = rng.gen_range(1..=4);
                let sign = if positive || rng.gen_bool(0.5) { 1 } else { -1 };
                rat(sign * p, q)
            })
            .collect()
    };
    for _ in 0..100_000 {
        let x = PlanarVariables::new(n, &draw(mode != SamplingMode::Generic))?;
        let k = KinematicData::from_planar(&x);
        if k.vanishing_invariant().is_some() {
            continue;
        }
        if mode == SamplingMode::Abhy && !mesh_constants(&k).values().all(Signed::is_positive) {
            continue;
        }
        return Ok(x);
    }
    Err(Error::NonGeneric(format!(
        "no {mode:?} kinematics found for n = {n} within the sampling budget"
    )))
}

/// Mesh constants `c_ij = −s_ij` for non-adjacent `1 ≤ i < j ≤ n − 1`.
pub fn mesh_constants(k: &KinematicData) -> BTreeMap<(usize, usize), Rational> {
    let n = k.n;
    let mut out = BTreeMap::new();
    for i in 1..n {
        for j in (i + 2)..n {
            out.insert((i, j), -k.s(i, j));
        }
    }
    out
}

/// Independent Mandelstam variables: `s_ij` with `1 ≤ i < j ≤ n − 1`, minus
/// `s_{n−2,n−1}`. Particle `n` and the last pair are eliminated by momentum
/// conservation.
pub fn mandelstam_basis(n: usize) -> Vars {
    let mut names = Vec::new();
    for i in 1..n {
        for j in (i + 1)..n {
            if !(i == n - 2 && j == n - 1) {
                names.push(mandelstam_name(i, j));
            }
        }
    }
    vars(&names)
}

/// `s_ij` as a linear polynomial in [`mandelstam_basis`].
pub fn mandelstam_polynomial(n: usize, i: usize, j: usize) -> Polynomial {
    let basis = mandelstam_basis(n);
    let (i, j) = {
        let (a, b) = (wrap(i, n), wrap(j, n));
        (a.min(b), a.max(b))
    };
    let var =
        |a: usize, b: usize| Polynomial::named(&basis, &mandelstam_name(a, b)).expect("basis name");
    if i == j {
        return Polynomial::zero(&basis);
    }
    if j < n {
        if (i, j) == (n - 2, n - 1) {
            // All pairs avoiding particle n sum to zero.
            let mut total = Polynomial::zero(&basis);
            for a in 1..n {
                for b in (a + 1)..n {
                    if (a, b) != (n - 2, n - 1) {
                        total = &total - &var(a, b);
                    }
                }
            }
            return total;
        }
        return var(i, j);
    }
    // j = n: s_in = −Σ_{k ≠ i, n} s_ik.
    let mut total = Polynomial::zero(&basis);
    for k in 1..n {
        if k != i {
            total = &total - &mandelstam_polynomial(n, i, k);
        }
    }
    total
}

/// Planar variable `X_ij` as a polynomial in [`mandelstam_basis`].
pub fn planar_polynomial(n: usize, i: usize, j: usize) -> Polynomial {
    let basis = mandelstam_basis(n);
    let Some((i, j)) = as_diagonal(i, j, n) else {
        return Polynomial::zero(&basis);
    };
    let mut x = Polynomial::zero(&basis);
    for a in i..j {
        for b in (a + 1)..j {
            x = &x + &mandelstam_polynomial(n, a, b);
        }
    }
    x
}

/// Planar variable names in diagonal order.
pub fn planar_vars(n: usize) -> Vars {
    let names: Vec<String> = diagonals(n)
        .into_iter()
        .map(|(i, j)| planar_name(i, j))
        .collect();
    vars(&names)
}

/// Values of the basis variables for concrete kinematics.
pub fn basis_values(k: &KinematicData) -> Vec<Rational> {
    let n = k.n;
    let mut out = Vec::new();
    for i in 1..n {
        for j in (i + 1)..n {
            if !(i == n - 2 && j == n - 1) {
                out.push(k.s(i, j).clone());
            }
        }
    }
    out
}

/// Planar variables from integer values in diagonal order.
pub fn planar_from_integers(n: usize, values: &[i64]) -> Result<PlanarVariables> {
    PlanarVariables::new(n, &values.iter().map(|&v| int(v)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_sums_vanish(k: &KinematicData) -> bool {
        k.matrix()
            .iter()
            .all(|row| row.iter().sum::<Rational>().is_zero())
    }

    #[test]
    fn conservation_for_many_seeds() {
        for n in 4..=7 {
            for seed in 0..100 {
                let k = sample_kinematics(n, seed).unwrap();
                assert!(row_sums_vanish(&k), "n = {n}, seed = {seed}");
                assert!(KinematicData::new(n, k.matrix().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn zero_planar_gives_zero_matrix() {
        let x = planar_from_integers(4, &[0, 0]).unwrap();
        assert_eq!(KinematicData::from_planar(&x), KinematicData::zero(4));
    }

    #[test]
    fn single_planar_variable() {
        let x = planar_from_integers(5, &[1, 0, 0, 0, 0]).unwrap();
        let k = KinematicData::from_planar(&x);
        assert_eq!(k.s(1, 2), &int(1));
        assert_eq!(k.s(1, 3), &int(-1));
        assert!(row_sums_vanish(&k));
    }

    #[test]
    fn planar_round_trip() {
        for n in 4..=8 {
            for seed in 0..10 {
                let x = sample_planar(n, seed, SamplingMode::Generic).unwrap();
                let k = KinematicData::from_planar(&x);
                assert_eq!(k.planar(), x);
                for i in 1..=n {
                    assert_eq!(k.s(i, i + 1), &x.get(i, i + 2));
                }
            }
        }
    }

    #[test]
    fn five_point_dictionary() {
        let k = sample_kinematics(5, 3).unwrap();
        let x = k.planar();
        assert_eq!(x.get(1, 3), k.s(1, 2).clone());
        assert_eq!(x.get(2, 4), k.s(2, 3).clone());
        assert_eq!(x.get(3, 5), k.s(3, 4).clone());
        assert_eq!(x.get(1, 4), k.s(4, 5).clone());
        assert_eq!(x.get(2, 5), k.s(1, 5).clone());
    }

    #[test]
    fn dihedral_formula_instance() {
        let k = sample_kinematics(5, 42).unwrap();
        let d = dihedral_exponents(&k);
        let expected = k.s(1, 4) + k.s(2, 3) - k.s(1, 3) - k.s(2, 4);
        assert_eq!(d.values[&(1, 3)], expected);
        assert!(dihedral_exponents(&KinematicData::zero(5))
            .values
            .values()
            .all(Zero::is_zero));
    }

    #[test]
    fn symbolic_maps_agree_with_values() {
        for n in 4..=7 {
            let k = sample_kinematics(n, 11).unwrap();
            let b = basis_values(&k);
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(&mandelstam_polynomial(n, i, j).eval(&b), k.s(i, j));
                }
            }
            let x = k.planar();
            for (i, j) in diagonals(n) {
                assert_eq!(planar_polynomial(n, i, j).eval(&b), x.get(i, j));
            }
        }
    }

    #[test]
    fn abhy_mode_has_positive_mesh() {
        for seed in 0..10 {
            let k = sample_kinematics_with(5, seed, SamplingMode::Abhy).unwrap();
            assert!(k.planar().iter().all(|(_, v)| v.is_positive()));
            assert!(mesh_constants(&k).values().all(Signed::is_positive));
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let k = sample_kinematics(5, 1).unwrap();
        let text = k.to_json().to_string();
        assert_eq!(KinematicData::from_json(&text).unwrap(), k);
        let bad = r#"{"n": 4, "s": [["0","1","0","0"],["1","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}"#;
        assert!(KinematicData::from_json(bad).is_err());
    }

    #[test]
    fn rotation_preserves_conservation() {
        let k = sample_kinematics(6, 5).unwrap();
        let r = k.rotate(1);
        assert!(row_sums_vanish(&r));
        assert_eq!(r.s(2, 3), k.s(1, 2));
    }
}
