//! Scattering equations on the moduli space of `n` points and the CHY sum.
//!
//! Punctures sit at `σ = (0, 1, 1 + x1, 1 + x1 + x2, …, ∞)`, so every minor
//! `p_ij = σ_j − σ_i` is linear in `x` and `p_in = 1`. The potential is
//! `L = Σ_{i<j} s_ij log p_ij`; its critical points are found in closed form
//! for `n ≤ 5` and by a soft-limit homotopy beyond.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::to_f64;
use crate::algebra::{vars, Polynomial, Vars};
use crate::error::{Error, Result};
use crate::kinematics::KinematicData;

/// Names `x1, …, x_{n−3}`; for five points `x, y` to match the usual chart.
pub fn moduli_vars(n: usize) -> Vars {
    if n == 5 {
        return vars(&["x", "y"]);
    }
    let names: Vec<String> = (1..=n - 3).map(|i| format!("x{i}")).collect();
    vars(&names)
}

/// Puncture positions and their pairwise differences.
#[derive(Clone, Debug)]
pub struct ModuliParametrization {
    n: usize,
    vars: Vars,
    /// `σ_1 … σ_{n−1}`; `σ_n = ∞`.
    sigma: Vec<Polynomial>,
}

impl ModuliParametrization {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid(format!("need n >= 4 points, got {n}")));
        }
        let v = moduli_vars(n);
        let mut sigma = vec![Polynomial::zero(&v), Polynomial::one(&v)];
        for k in 0..n - 3 {
            let next = &sigma[k + 1] + &Polynomial::variable(&v, k);
            sigma.push(next);
        }
        Ok(ModuliParametrization { n, vars: v, sigma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `p_ij` for any labels in `1..=n`; antisymmetric, and `p_in = −p_ni = 1`.
    pub fn minor(&self, i: usize, j: usize) -> Polynomial {
        let n = self.n;
        match (i == n, j == n) {
            (true, true) => Polynomial::zero(&self.vars),
            (false, true) => Polynomial::one(&self.vars),
            (true, false) => -Polynomial::one(&self.vars),
            (false, false) => &self.sigma[j - 1] - &self.sigma[i - 1],
        }
    }
}

/// `p_ij` for `1 ≤ i < j ≤ n` in lexicographic order.
pub fn minors(n: usize) -> Result<Vec<((usize, usize), Polynomial)>> {
    let m = ModuliParametrization::new(n)?;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push(((i, j), m.minor(i, j)));
        }
    }
    Ok(out)
}

/// A linear form `c0 + Σ c_a x_a`.
#[derive(Clone, Debug)]
struct LinearForm {
    constant: f64,
    coeffs: Vec<f64>,
}

impl LinearForm {
    fn from_polynomial(p: &Polynomial) -> Self {
        let m = p.nvars();
        let mut coeffs = vec![0.0; m];
        let mut constant = 0.0;
        for (mono, c) in p.terms() {
            let e = mono.exponents();
            match e.iter().position(|&d| d > 0) {
                None => constant = to_f64(c),
                Some(a) => coeffs[a] = to_f64(c),
            }
        }
        LinearForm { constant, coeffs }
    }

    fn eval<T>(&self, x: &[T]) -> T
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + From<f64>,
    {
        self.coeffs
            .iter()
            .zip(x)
            .fold(T::from(self.constant), |acc, (&c, &v)| acc + v * c)
    }
}

/// Pairs `i < j < n` whose minor depends on `x`, in lexicographic order.
fn visible_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in (i + 1)..n {
            if (i, j) != (1, 2) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `L = Σ s_ij log p_ij` over the pairs whose minor is not constant.
///
/// Coefficients may be complex; the root finder deforms them along a
/// complex path.
#[derive(Clone, Debug)]
pub struct ScatteringPotential {
    n: usize,
    pairs: Vec<(usize, usize)>,
    coefficients: Vec<Complex64>,
    forms: Vec<LinearForm>,
    scale: f64,
}

impl ScatteringPotential {
    pub fn new(k: &KinematicData) -> Self {
        let n = k.n();
        let c = visible_pairs(n)
            .iter()
            .map(|&(i, j)| Complex64::new(to_f64(k.s(i, j)), 0.0))
            .collect();
        let mut p = Self::from_coefficients(n, c);
        p.scale = k
            .matrix()
            .iter()
            .flatten()
            .map(|v| to_f64(v).abs())
            .fold(0.0, f64::max);
        p
    }

    /// Coefficients in the order of [`ScatteringPotential::pairs`].
    fn from_coefficients(n: usize, coefficients: Vec<Complex64>) -> Self {
        let m = ModuliParametrization::new(n).expect("n >= 4");
        let pairs = visible_pairs(n);
        let forms = pairs
            .iter()
            .map(|&(i, j)| LinearForm::from_polynomial(&m.minor(i, j)))
            .collect();
        let scale = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        ScatteringPotential {
            n,
            pairs,
            coefficients,
            forms,
            scale,
        }
    }

    fn with_coefficients(&self, coefficients: Vec<Complex64>) -> Self {
        let scale = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        ScatteringPotential {
            coefficients,
            scale,
            ..self.clone()
        }
    }

    fn coefficient(&self, i: usize, j: usize) -> Complex64 {
        self.pairs
            .iter()
            .position(|&p| p == (i, j))
            .map_or(Complex64::new(0.0, 0.0), |k| self.coefficients[k])
    }

    pub fn dimension(&self) -> usize {
        self.n - 3
    }

    /// `L(x)` on the positive region, where every minor is positive.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(&self.forms)
            .map(|(s, p)| s.re * p.eval(x).ln())
            .sum()
    }

    pub fn gradient(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.dimension()];
        for (s, p) in self.coefficients.iter().zip(&self.forms) {
            let w = s / p.eval(x);
            for (ga, &c) in g.iter_mut().zip(&p.coeffs) {
                if c != 0.0 {
                    *ga += w * c;
                }
            }
        }
        g
    }

    /// `∂_a ∂_b L = −Σ s_ij ∂_a p ∂_b p / p²`.
    pub fn hessian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let m = self.dimension();
        let mut h = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
        for (s, p) in self.coefficients.iter().zip(&self.forms) {
            let v = p.eval(x);
            let w = -s / (v * v);
            for a in 0..m {
                for b in 0..m {
                    let c = p.coeffs[a] * p.coeffs[b];
                    if c != 0.0 {
                        h[(a, b)] += w * c;
                    }
                }
            }
        }
        h
    }

    /// `θ_a L = x_a ∂_a L`.
    pub fn theta_gradient(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.gradient(x).iter().zip(x).map(|(g, x)| g * x).collect()
    }

    /// `H_ab = θ_a θ_b L` with `θ_a = x_a ∂/∂x_a`.
    pub fn theta_hessian(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let g = self.gradient(x);
        let mut h = self.hessian(x);
        for a in 0..self.dimension() {
            for b in 0..self.dimension() {
                h[(a, b)] *= x[a] * x[b];
            }
            h[(a, a)] += x[a] * g[a];
        }
        h
    }

    /// `max_a |x_a ∂_a L| / max |s_ij|`, invariant under rescaling `s`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        let r = self
            .theta_gradient(x)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if self.scale > 0.0 {
            r / self.scale
        } else {
            r
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub coords: Vec<Complex64>,
    pub residual: f64,
    pub hessian: DMatrix<Complex64>,
}

impl CriticalPoint {
    fn new(potential: &ScatteringPotential, coords: Vec<Complex64>) -> Self {
        CriticalPoint {
            residual: potential.residual(&coords),
            hessian: potential.theta_hessian(&coords),
            coords,
        }
    }

    pub fn hessian_determinant(&self) -> Complex64 {
        self.hessian.determinant()
    }
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Solver knobs; the defaults are what [`solve_scattering`] uses.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Independent homotopies tried before giving up.
    pub attempts: usize,
    /// Smallest path step before a path counts as failed.
    pub min_step: f64,
    /// Roots closer than this are the same root.
    pub merge_distance: f64,
    /// Distinct roots closer than this signal near-degenerate kinematics.
    pub separation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            attempts: 4,
            min_step: 1e-8,
            merge_distance: 1e-9,
            separation: 1e-6,
        }
    }
}

pub fn solve_scattering(k: &KinematicData, tol: f64, seed: u64) -> Result<Vec<CriticalPoint>> {
    solve_scattering_with(k, tol, seed, &SolverConfig::default())
}

pub fn solve_scattering_with(
    k: &KinematicData,
    tol: f64,
    seed: u64,
    config: &SolverConfig,
) -> Result<Vec<CriticalPoint>> {
    if let Some(set) = k.vanishing_invariant() {
        let label: Vec<String> = set.iter().map(usize::to_string).collect();
        return Err(Error::NonGeneric(format!(
            "s_{{{}}} vanishes; critical points escape to the boundary",
            label.join(",")
        )));
    }
    let potential = ScatteringPotential::new(k);
    let expected = factorial(k.n() - 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..config.attempts.max(1) {
        match attempt(&potential, expected, tol, config, &mut rng) {
            Ok(points) => return Ok(points),
            Err(e @ Error::WrongCount { .. }) if k.n() > 5 => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn attempt(
    potential: &ScatteringPotential,
    expected: usize,
    tol: f64,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CriticalPoint>> {
    let roots = critical_points(potential, config, rng)?;
    let mut points: Vec<CriticalPoint> = roots
        .into_iter()
        .map(|x| CriticalPoint::new(potential, x))
        .collect();
    if let Some(bad) = points.iter().find(|p| !(p.residual < tol)) {
        return Err(Error::WrongCount {
            expected,
            found: points.iter().filter(|p| p.residual < tol).count(),
            detail: format!(
                "a root failed verification with residual {:.3e}",
                bad.residual
            ),
        });
    }
    let (distinct, closest) = dedup(&points, config.merge_distance);
    if distinct != expected || points.len() != expected {
        return Err(Error::WrongCount {
            expected,
            found: distinct,
            detail: "paths merged or failed".into(),
        });
    }
    if closest < config.separation {
        return Err(Error::WrongCount {
            expected,
            found: distinct,
            detail: format!(
                "two critical points within {closest:.2e} (kinematics near the discriminant)"
            ),
        });
    }
    points.sort_by(|a, b| compare_points(&a.coords, &b.coords));
    Ok(points)
}

fn compare_points(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Number of distinct points and the smallest distance between them.
fn dedup(points: &[CriticalPoint], merge: f64) -> (usize, f64) {
    let mut kept: Vec<&[Complex64]> = Vec::new();
    let mut closest = f64::INFINITY;
    for p in points {
        let nearest = kept
            .iter()
            .map(|q| distance(q, &p.coords))
            .fold(f64::INFINITY, f64::min);
        if nearest > merge {
            closest = closest.min(nearest);
            kept.push(&p.coords);
        }
    }
    (kept.len(), closest)
}

fn critical_points(
    potential: &ScatteringPotential,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Complex64>>> {
    match potential.n {
        4 => four_point_root(potential),
        5 => five_point_roots(potential),
        _ => soft_homotopy(potential, config, rng),
    }
}

fn four_point_root(potential: &ScatteringPotential) -> Result<Vec<Vec<Complex64>>> {
    // s13/(1 + x) + s23/x = 0
    let (s13, s23) = (potential.coefficient(1, 3), potential.coefficient(2, 3));
    if (s13 + s23).norm() == 0.0 {
        return Err(Error::NonGeneric("s13 + s23 vanishes".into()));
    }
    Ok(vec![vec![-s23 / (s13 + s23)]])
}

/// Eliminating `y` leaves a quadratic in `a = 1 + x`.
fn five_point_roots(potential: &ScatteringPotential) -> Result<Vec<Vec<Complex64>>> {
    let s = |i, j| potential.coefficient(i, j);
    let (s13, s14, s23, s24, s34) = (s(1, 3), s(1, 4), s(2, 3), s(2, 4), s(3, 4));
    let big = s13 + s23 + s34;
    let t = s13 + s34;
    let qa = big * (big + s14 + s24);
    let qb = -s14 * (big + s13) - s24 * t - big * (t + s13);
    let qc = s13 * (s14 + t);
    if qa.norm() == 0.0 {
        return Err(Error::NonGeneric(
            "leading coefficient of the eliminant vanishes".into(),
        ));
    }
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    // Pick the sign that avoids cancellation.
    let q = if (qb.conj() * disc).re >= 0.0 {
        -0.5 * (qb + disc)
    } else {
        -0.5 * (qb - disc)
    };
    let mut out = Vec::new();
    for a in [q / qa, qc / q] {
        let den = (s13 + s23) * a - s13;
        let x = a - 1.0;
        let y = s34 * a * x / den;
        out.push(polish(potential, vec![x, y], 3));
    }
    Ok(out)
}

/// Newton step for `θ_a L = 0` in `log x`, returned as an additive step in
/// `x` and capped at unit length in `log x`.
fn newton_step(potential: &ScatteringPotential, x: &[Complex64]) -> Option<Vec<Complex64>> {
    let f = potential.theta_gradient(x);
    let h = potential.theta_hessian(x);
    let rhs = DMatrix::from_iterator(f.len(), 1, f.iter().map(|v| -v));
    let mut step = h.lu().solve(&rhs)?;
    if !step.iter().all(|d| d.is_finite()) {
        return None;
    }
    let size = step.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if size > 1.0 {
        step /= Complex64::new(size, 0.0);
    }
    Some(
        x.iter()
            .zip(step.iter())
            .map(|(x, d)| x * (d.exp() - 1.0))
            .collect(),
    )
}

fn polish(potential: &ScatteringPotential, mut x: Vec<Complex64>, steps: usize) -> Vec<Complex64> {
    for _ in 0..steps {
        match newton_step(potential, &x) {
            Some(d) if d.iter().all(|v| v.is_finite()) => {
                for (xi, di) in x.iter_mut().zip(d) {
                    *xi += di;
                }
            }
            _ => break,
        }
    }
    x
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

/// Size of the soft coefficients at the start of the homotopy.
const SOFT: f64 = 1e-4;

/// Starts from random complex coefficients in which particle `n − 1` is
/// soft, where the roots are the `(n − 1)`-point roots times the roots of a
/// single rational equation in `σ_{n−1}`, then deforms the coefficients
/// linearly to the target.
fn soft_homotopy(
    target: &ScatteringPotential,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<Complex64>>> {
    let n = target.n;
    let hard = ScatteringPotential::from_coefficients(
        n - 1,
        visible_pairs(n - 1)
            .iter()
            .map(|_| random_complex(rng))
            .collect(),
    );
    let soft: Vec<Complex64> = (1..n - 1).map(|_| random_complex(rng)).collect();
    let start = target.with_coefficients(
        target
            .pairs
            .iter()
            .map(|&(i, j)| {
                if j == n - 1 {
                    soft[i - 1] * SOFT
                } else {
                    hard.coefficient(i, j)
                }
            })
            .collect(),
    );
    let mut starts = Vec::new();
    for x in critical_points(&hard, config, rng)? {
        let mut sigma = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        for xa in &x {
            let last = sigma[sigma.len() - 1];
            sigma.push(last + xa);
        }
        for z in soft_roots(&sigma, &soft)? {
            let mut y = x.clone();
            y.push(z - sigma[n - 3]);
            starts.push(polish(&start, y, 4));
        }
    }
    let mut roots = Vec::new();
    for x in starts {
        if let Some(r) = track(&start, target, x, config) {
            roots.push(r);
        }
    }
    Ok(roots)
}

/// Roots `z` of `Σ_i w_i / (z − σ_i) = 0`, via the eigenvalues of the
/// companion matrix of the cleared numerator.
fn soft_roots(sigma: &[Complex64], w: &[Complex64]) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // Coefficients in increasing degree.
    let mut num = vec![zero; sigma.len()];
    for (i, wi) in w.iter().enumerate() {
        let mut prod = vec![one];
        for (k, sk) in sigma.iter().enumerate() {
            if k != i {
                let mut next = vec![zero; prod.len() + 1];
                for (d, c) in prod.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * sk;
                }
                prod = next;
            }
        }
        for (d, c) in prod.iter().enumerate() {
            num[d] += wi * c;
        }
    }
    let deg = num.len() - 1;
    let lead = num[deg];
    if lead.norm() == 0.0 {
        return Err(Error::NonGeneric("soft equation drops degree".into()));
    }
    let mut companion = DMatrix::from_element(deg, deg, zero);
    for r in 1..deg {
        companion[(r, r - 1)] = one;
    }
    for r in 0..deg {
        companion[(r, deg - 1)] = -num[r] / lead;
    }
    let eig = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::NonGeneric("companion matrix eigenvalues did not converge".into()))?;
    Ok(eig.iter().copied().collect())
}

/// Follows one root of `(1 − t)·θL_start + t·θL_target` from `t = 0` to
/// `t = 1` in `log x` with a fourth-order predictor and Newton corrector.
fn track(
    start: &ScatteringPotential,
    target: &ScatteringPotential,
    mut x: Vec<Complex64>,
    config: &SolverConfig,
) -> Option<Vec<Complex64>> {
    let mix = |t: f64| {
        start.with_coefficients(
            start
                .coefficients
                .iter()
                .zip(&target.coefficients)
                .map(|(a, b)| a * (1.0 - t) + b * t)
                .collect(),
        )
    };
    let velocity = |x: &[Complex64], t: f64| -> Option<DMatrix<Complex64>> {
        let h = mix(t).theta_hessian(x);
        let fs = start.theta_gradient(x);
        let ft = target.theta_gradient(x);
        let rhs = DMatrix::from_iterator(x.len(), 1, fs.iter().zip(&ft).map(|(a, b)| a - b));
        h.lu().solve(&rhs)
    };
    let shift = |x: &[Complex64], d: &DMatrix<Complex64>, h: f64| -> Vec<Complex64> {
        x.iter()
            .zip(d.iter())
            .map(|(x, d)| x * (d * h).exp())
            .collect()
    };
    let mut t = 0.0;
    let mut dt: f64 = 0.02;
    while t < 1.0 {
        dt = dt.min(1.0 - t);
        let predicted = (|| {
            let k1 = velocity(&x, t)?;
            let k2 = velocity(&shift(&x, &k1, dt / 2.0), t + dt / 2.0)?;
            let k3 = velocity(&shift(&x, &k2, dt / 2.0), t + dt / 2.0)?;
            let k4 = velocity(&shift(&x, &k3, dt), t + dt)?;
            let two = Complex64::new(2.0, 0.0);
            let d = (k1 + k2 * two + k3 * two + k4) / Complex64::new(6.0, 0.0);
            Some(shift(&x, &d, dt))
        })();
        let corrected = predicted.and_then(|y| correct(&mix(t + dt), y));
        match corrected {
            Some(y) => {
                x = y;
                t += dt;
                dt = (dt * 1.5).min(0.1);
            }
            None => {
                dt /= 2.0;
                if dt < config.min_step {
                    return None;
                }
            }
        }
    }
    Some(polish(target, x, 3))
}

/// Up to three Newton steps that must contract quickly.
fn correct(potential: &ScatteringPotential, mut x: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let mut previous = f64::INFINITY;
    for _ in 0..3 {
        let d = newton_step(potential, &x)?;
        if !d.iter().chain(&x).all(|v| v.is_finite()) {
            return None;
        }
        let size = x
            .iter()
            .zip(&d)
            .map(|(x, d)| (d / x).norm())
            .fold(0.0, f64::max);
        if size > 0.1 || size > previous / 4.0 {
            return None;
        }
        for (xi, di) in x.iter_mut().zip(d) {
            *xi += di;
        }
        if size < 1e-10 {
            return Some(x);
        }
        previous = size;
    }
    (previous < 1e-6).then_some(x)
}

/// Σ over critical points of `1 / det(θ_a θ_b L)`.
pub fn chy_amplitude(points: &[CriticalPoint]) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for p in points {
        let sv = p.hessian.clone().singular_values();
        let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        if !(lo > 1e-13 * hi) {
            return Err(Error::SingularHessian);
        }
        let d = p.hessian_determinant();
        total += d.inv();
    }
    Ok(total)
}

/// Sign relating the CHY sum to the tree amplitude: `chy = (−1)^{n−3}·tree`.
pub fn chy_sign(n: usize) -> f64 {
    if (n - 3).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
