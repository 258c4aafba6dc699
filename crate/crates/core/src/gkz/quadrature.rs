//! Adaptive Gauss–Kronrod (7/15) quadrature on intervals and on the real
//! line, nested for integrals over `ℝ^m`.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Target relative error of the outermost integral.
    pub rel_tol: f64,
    /// Subinterval budget per one-dimensional integral.
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-8,
            max_intervals: 500,
        }
    }
}

impl QuadConfig {
    /// A stricter configuration: tolerance down by 100, budget doubled.
    pub fn refined(&self) -> Self {
        QuadConfig {
            rel_tol: self.rel_tol * 1e-2,
            max_intervals: self.max_intervals * 2,
        }
    }

    fn inner(&self) -> Self {
        QuadConfig {
            rel_tol: (self.rel_tol * 1e-2).max(1e-13),
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let pairs: Vec<(f64, f64)> = XGK[..7]
        .iter()
        .map(|&x| (f(c - h * x), f(c + h * x)))
        .collect();
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for (i, &(l, r)) in pairs.iter().enumerate() {
        k += WGK[i] * (l + r);
        if i % 2 == 1 {
            g += WG[i / 2] * (l + r);
        }
    }
    // Error scaling and roundoff floor as in QUADPACK's qk15.
    let mean = 0.5 * k;
    let mut asc = WGK[7] * (fc - mean).abs();
    let mut abs = WGK[7] * fc.abs();
    for (i, &(l, r)) in pairs.iter().enumerate() {
        asc += WGK[i] * ((l - mean).abs() + (r - mean).abs());
        abs += WGK[i] * (l.abs() + r.abs());
    }
    let (asc, abs) = (asc * h.abs(), abs * h.abs());
    let mut error = ((k - g) * h).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs);
    }
    Estimate {
        value: k * h,
        error,
    }
}

/// `∫_a^b f`, bisecting the interval with the largest error estimate.
pub fn integrate(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    pieces: usize,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let step = (b - a) / pieces as f64;
    let mut parts: Vec<(f64, f64, Estimate)> = (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + step * i as f64, a + step * (i + 1) as f64);
            (lo, hi, kronrod(f, lo, hi))
        })
        .collect();
    loop {
        let value: f64 = parts.iter().map(|p| p.2.value).sum();
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureNonConvergence(
                "integrand is not finite".into(),
            ));
        }
        if error <= cfg.rel_tol * value.abs() || error == 0.0 {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= cfg.max_intervals {
            return Err(Error::QuadratureNonConvergence(format!(
                "error {error:.3e} on value {value:.6e} after {} subintervals",
                parts.len()
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, kronrod(f, lo, mid)));
        parts.push((mid, hi, kronrod(f, mid, hi)));
    }
}

/// `∫_ℝ f` via `w = t/(1 − t²)` on `(−1, 1)`.
pub fn integrate_real_line(f: &mut dyn FnMut(f64) -> f64, cfg: &QuadConfig) -> Result<Estimate> {
    let mut g = |t: f64| {
        let d = 1.0 - t * t;
        let v = f(t / d);
        if v == 0.0 {
            0.0
        } else {
            v * (1.0 + t * t) / (d * d)
        }
    };
    integrate(&mut g, -1.0, 1.0, 8, cfg)
}

/// `∫_{ℝ^m} f` as nested one-dimensional integrals; inner integrals run at a
/// tighter tolerance.
pub fn integrate_nested(f: &dyn Fn(&[f64]) -> f64, m: usize, cfg: &QuadConfig) -> Result<f64> {
    let mut point = Vec::with_capacity(m);
    nested(f, m, &mut point, cfg)
}

fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    m: usize,
    point: &mut Vec<f64>,
    cfg: &QuadConfig,
) -> Result<f64> {
    if point.len() == m {
        return Ok(f(point));
    }
    let inner = cfg.inner();
    let mut failure = None;
    let est = integrate_real_line(
        &mut |w| {
            point.push(w);
            let v = nested(f, m, point, &inner);
            point.pop();
            match v {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(
            &mut |x| x.powi(5) - 2.0 * x,
            0.0,
            2.0,
            1,
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((e.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_on_the_line() {
        let e = integrate_real_line(&mut |x| (-x * x).exp(), &QuadConfig::default()).unwrap();
        assert!((e.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn two_dimensional_kink() {
        // ∫∫ exp(−|u| − 2|v|) = 2 · 1
        let v = integrate_nested(
            &|p| (-p[0].abs() - 2.0 * p[1].abs()).exp(),
            2,
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((v - 2.0).abs() < 1e-7, "{v}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig {
            rel_tol: 1e-15,
            max_intervals: 3,
        };
        let r = integrate(&mut |x: f64| x.abs().sqrt(), -1.0, 1.0, 1, &cfg);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence(_))));
    }
}
