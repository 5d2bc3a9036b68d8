//! Test signals with known smoothness and, where available, closed-form
//! Fourier transforms.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::kernels::Kernel;
use crate::special::sinc;

/// One-dimensional factor of a tensor-product signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `e^{-pi x^2}`.
    Gaussian,
    /// `sinc(x / s)`.
    Sinc { scale: f64 },
    /// `sinc^2(x / s)`.
    SincSquared { scale: f64 },
    /// `chi_{[lo, hi]}`.
    Indicator { lo: f64, hi: f64 },
    /// `(1 - |x|)_+^exponent`.
    Cusp { exponent: f64 },
    /// `slope * x + intercept`.
    Affine { slope: f64, intercept: f64 },
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Gaussian => (-PI * x * x).exp(),
            Profile::Sinc { scale } => sinc(x / scale),
            Profile::SincSquared { scale } => sinc(x / scale).powi(2),
            Profile::Indicator { lo, hi } => {
                if lo <= x && x <= hi {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Cusp { exponent } => (1.0 - x.abs()).max(0.0).powf(exponent),
            Profile::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    /// Closed-form transform.
    pub fn fourier(&self, xi: f64) -> Option<Complex64> {
        let real = |v: f64| Some(Complex64::new(v, 0.0));
        match *self {
            Profile::Gaussian => real((-PI * xi * xi).exp()),
            Profile::Sinc { scale } => real(if (scale * xi).abs() <= 0.5 { scale } else { 0.0 }),
            Profile::SincSquared { scale } => real(scale * (1.0 - scale * xi.abs()).max(0.0)),
            Profile::Indicator { lo, hi } => Some(Complex64::from_polar(
                (hi - lo) * sinc((hi - lo) * xi),
                -PI * (lo + hi) * xi,
            )),
            Profile::Cusp { .. } | Profile::Affine { .. } => None,
        }
    }

    /// Points where the profile or one of its low derivatives jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Profile::Indicator { lo, hi } => vec![lo, hi],
            Profile::Cusp { .. } => vec![-1.0, 0.0, 1.0],
            _ => Vec::new(),
        }
    }

    /// Points where the transform has a kink or cutoff.
    pub fn fourier_breakpoints(&self) -> Vec<f64> {
        match *self {
            Profile::Sinc { scale } => vec![-0.5 / scale, 0.5 / scale],
            Profile::SincSquared { scale } => vec![-1.0 / scale, 0.0, 1.0 / scale],
            _ => Vec::new(),
        }
    }

    pub fn band_limit(&self) -> Option<f64> {
        match *self {
            Profile::Sinc { scale } => Some(0.5 / scale),
            Profile::SincSquared { scale } => Some(1.0 / scale),
            _ => None,
        }
    }
}

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type FourierFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Shape {
    /// `amplitude * prod_v factors[v](x_v)`.
    Tensor {
        amplitude: f64,
        factors: Vec<Profile>,
    },
    /// `(1 - |x|^2)_+^exponent` in the plane.
    RadialBump {
        exponent: f64,
    },
    Custom {
        eval: EvalFn,
        fourier: Option<FourierFn>,
    },
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Tensor { amplitude, factors } => f
                .debug_struct("Tensor")
                .field("amplitude", amplitude)
                .field("factors", factors)
                .finish(),
            Shape::RadialBump { exponent } => f.debug_struct("RadialBump").field("exponent", exponent).finish(),
            Shape::Custom { fourier, .. } => f
                .debug_struct("Custom")
                .field("has_fourier", &fourier.is_some())
                .finish_non_exhaustive(),
        }
    }
}

/// A point-evaluable signal.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub id: String,
    pub dim: usize,
    pub shape: Shape,
    pub band_limit: Option<f64>,
    pub smoothness: String,
    pub decay: String,
}

impl TestFunction {
    pub fn tensor(id: &str, amplitude: f64, factors: Vec<Profile>, smoothness: &str, decay: &str) -> Self {
        let band_limit = if amplitude == 0.0 {
            Some(0.0)
        } else {
            factors
                .iter()
                .map(|p| p.band_limit())
                .collect::<Option<Vec<f64>>>()
                .map(|v| v.into_iter().fold(0.0, |acc, b| acc + b * b).sqrt())
        };
        Self {
            id: id.to_string(),
            dim: factors.len(),
            shape: Shape::Tensor { amplitude, factors },
            band_limit,
            smoothness: smoothness.to_string(),
            decay: decay.to_string(),
        }
    }

    pub fn custom<F>(id: &str, dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            id: id.to_string(),
            dim,
            shape: Shape::Custom {
                eval: Arc::new(eval),
                fourier: None,
            },
            band_limit: None,
            smoothness: "unspecified".into(),
            decay: "unspecified".into(),
        }
    }

    pub fn with_fourier<G>(mut self, fourier: G) -> Self
    where
        G: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        if let Shape::Custom { fourier: slot, .. } = &mut self.shape {
            *slot = Some(Arc::new(fourier));
        }
        self
    }

    pub fn gaussian(dim: usize) -> Self {
        let id = if dim == 1 { "gaussian" } else { "gaussian_2d" };
        Self::tensor(
            id,
            1.0,
            vec![Profile::Gaussian; dim],
            "smooth: every order",
            "exp(-pi |x|^2)",
        )
    }

    pub fn sinc_squared(dim: usize, scale: f64) -> Self {
        let id = if dim == 1 { "sinc2" } else { "sinc2_2d" };
        Self::tensor(
            id,
            1.0,
            vec![Profile::SincSquared { scale }; dim],
            "band-limited, entire",
            "|x|^-2 per axis",
        )
    }

    /// `prod_v sinc(x_v / s)`, band-limited to `[-1/(2s), 1/(2s)]^d`.
    pub fn sinc(dim: usize, scale: f64) -> Self {
        let id = if dim == 1 { "sinc" } else { "sinc_2d" };
        Self::tensor(
            id,
            1.0,
            vec![Profile::Sinc { scale }; dim],
            "band-limited, entire",
            "|x|^-1 per axis",
        )
    }

    pub fn indicator() -> Self {
        Self::tensor(
            "indicator",
            1.0,
            vec![Profile::Indicator { lo: 0.0, hi: 1.0 }],
            "jump discontinuity",
            "compact support",
        )
    }

    pub fn cusp() -> Self {
        Self::tensor(
            "cusp",
            1.0,
            vec![Profile::Cusp { exponent: 1.5 }],
            "Lipschitz 1 with a corner at 0; order 3/2 at the support edges",
            "compact support",
        )
    }

    pub fn radial_bump() -> Self {
        Self {
            id: "radial_bump".into(),
            dim: 2,
            shape: Shape::RadialBump { exponent: 3.0 },
            band_limit: None,
            smoothness: "C^2, order 3 radial edge".into(),
            decay: "compact support".into(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        let id = if dim == 1 { "zero" } else { "zero_2d" };
        Self::tensor(
            id,
            0.0,
            vec![Profile::Gaussian; dim],
            "smooth: every order",
            "identically zero",
        )
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        Self::tensor(
            "affine",
            1.0,
            vec![Profile::Affine { slope, intercept }],
            "polynomial of degree 1",
            "none",
        )
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self::tensor(
            "constant",
            value,
            vec![
                Profile::Affine {
                    slope: 0.0,
                    intercept: 1.0
                };
                dim
            ],
            "polynomial of degree 0",
            "none",
        )
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.shape {
            Shape::Tensor { amplitude, factors } => {
                if *amplitude == 0.0 {
                    return 0.0;
                }
                amplitude * factors.iter().zip(x).map(|(p, &v)| p.eval(v)).product::<f64>()
            }
            Shape::RadialBump { exponent } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (1.0 - r2).max(0.0).powf(*exponent)
            }
            Shape::Custom { eval, .. } => eval(x),
        }
    }

    pub fn has_fourier(&self) -> bool {
        match &self.shape {
            Shape::Tensor { amplitude, factors } => {
                *amplitude == 0.0 || factors.iter().all(|p| p.fourier(0.0).is_some())
            }
            Shape::RadialBump { .. } => true,
            Shape::Custom { fourier, .. } => fourier.is_some(),
        }
    }

    /// Closed-form transform, if known.
    pub fn fourier(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.shape {
            Shape::Tensor { amplitude, factors } => {
                if *amplitude == 0.0 {
                    return Some(Complex64::new(0.0, 0.0));
                }
                let mut acc = Complex64::new(*amplitude, 0.0);
                for (p, &v) in factors.iter().zip(xi) {
                    acc *= p.fourier(v)?;
                }
                Some(acc)
            }
            Shape::RadialBump { exponent } => {
                // the transform of (1 - |x|^2)_+^delta is the Bochner-Riesz kernel of index delta
                let k = Kernel::bochner_riesz(2, *exponent).expect("positive exponent");
                Some(Complex64::new(k.eval(xi), 0.0))
            }
            Shape::Custom { fourier, .. } => fourier.as_ref().map(|g| g(xi)),
        }
    }

    /// Tensor factors, when the signal is separable.
    pub fn factors(&self) -> Option<(f64, &[Profile])> {
        match &self.shape {
            Shape::Tensor { amplitude, factors } => Some((*amplitude, factors)),
            _ => None,
        }
    }

    /// Coordinates per axis where `f` is not smooth (tensor signals only).
    pub fn breakpoints(&self, axis: usize) -> Vec<f64> {
        match &self.shape {
            Shape::Tensor { factors, .. } => factors[axis].breakpoints(),
            _ => Vec::new(),
        }
    }

    /// Coordinates per axis where `f^` is not smooth (tensor signals only).
    pub fn fourier_breakpoints(&self, axis: usize) -> Vec<f64> {
        match &self.shape {
            Shape::Tensor { factors, .. } => factors[axis].fourier_breakpoints(),
            _ => Vec::new(),
        }
    }

    /// Pointwise linear combination `a f + b g`.
    pub fn combine(a: f64, f: &TestFunction, b: f64, g: &TestFunction) -> TestFunction {
        assert_eq!(f.dim, g.dim, "combined signals must share a dimension");
        let (f1, g1) = (f.clone(), g.clone());
        let mut out = TestFunction::custom(&format!("{a}*{}+{b}*{}", f.id, g.id), f.dim, move |x| {
            a * f1.eval(x) + b * g1.eval(x)
        });
        if f.has_fourier() && g.has_fourier() {
            let (f2, g2) = (f.clone(), g.clone());
            out = out.with_fourier(move |xi| {
                f2.fourier(xi).unwrap_or_default() * a + g2.fourier(xi).unwrap_or_default() * b
            });
        }
        out
    }

    /// `x -> f(x - shift)`.
    pub fn shifted(&self, shift: &[f64]) -> TestFunction {
        let base = self.clone();
        let s = shift.to_vec();
        let mut out = TestFunction::custom(&format!("{}_shifted", self.id), self.dim, move |x| {
            let y: Vec<f64> = x.iter().zip(&s).map(|(a, b)| a - b).collect();
            base.eval(&y)
        });
        if self.has_fourier() {
            let base = self.clone();
            let s = shift.to_vec();
            out = out.with_fourier(move |xi| {
                let phase: f64 = xi.iter().zip(&s).map(|(a, b)| a * b).sum();
                base.fourier(xi).unwrap_or_default() * Complex64::from_polar(1.0, -2.0 * PI * phase)
            });
        }
        out.band_limit = self.band_limit;
        out
    }
}

/// The standard corpus.
pub fn corpus() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian(1),
        TestFunction::sinc_squared(1, 4.0),
        TestFunction::indicator(),
        TestFunction::cusp(),
        TestFunction::gaussian(2),
        TestFunction::radial_bump(),
        TestFunction::sinc_squared(2, 4.0),
        TestFunction::zero(1),
        TestFunction::zero(2),
    ]
}

/// Corpus entry by id.
pub fn by_id(id: &str) -> Option<TestFunction> {
    corpus().into_iter().find(|f| f.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussRule;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalizations() {
        let g = TestFunction::gaussian(1);
        assert_eq!(g.eval(&[0.0]), 1.0);
        assert_eq!(g.fourier(&[0.0]).unwrap(), Complex64::new(1.0, 0.0));
        let s = TestFunction::sinc_squared(1, 4.0);
        assert_eq!(s.fourier(&[0.3]).unwrap().norm(), 0.0);
        assert_relative_eq!(s.fourier(&[0.1]).unwrap().re, 4.0 * 0.6, epsilon = 1e-15);
        assert_eq!(s.band_limit, Some(0.25));
        assert_eq!(TestFunction::indicator().eval(&[1.0]), 1.0);
        assert_eq!(TestFunction::indicator().eval(&[1.0 + 1e-12]), 0.0);
        assert_relative_eq!(TestFunction::cusp().eval(&[0.75]), 0.125, epsilon = 1e-15);
        assert_relative_eq!(TestFunction::radial_bump().eval(&[0.5, 0.5]), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn ids_are_unique_and_addressable() {
        let all = corpus();
        for f in &all {
            assert_eq!(all.iter().filter(|g| g.id == f.id).count(), 1);
            assert!(by_id(&f.id).is_some());
        }
        assert!(by_id("nope").is_none());
    }

    /// `int f(x) e^{-2 pi i x xi} dx` over `[a, b]` with breakpoint splitting.
    fn forward_1d(f: &TestFunction, a: f64, b: f64, xi: f64) -> Complex64 {
        let rule = GaussRule::new(40);
        let mut cuts = vec![a, b];
        cuts.extend(f.breakpoints(0).into_iter().filter(|&c| a < c && c < b));
        cuts.sort_by(f64::total_cmp);
        let mut acc = Complex64::new(0.0, 0.0);
        for w in cuts.windows(2) {
            let panels = 64;
            let h = (w[1] - w[0]) / panels as f64;
            for i in 0..panels {
                let lo = w[0] + i as f64 * h;
                let (nodes, weights) = rule.mapped(lo, lo + h);
                for (x, wt) in nodes.iter().zip(weights) {
                    acc += Complex64::from_polar(f.eval(&[*x]) * wt, -2.0 * PI * x * xi);
                }
            }
        }
        acc
    }

    /// `int f^(xi) e^{2 pi i x xi} dxi` over `[-c, c]` with kink splitting.
    fn inverse_1d(f: &TestFunction, c: f64, x: f64) -> f64 {
        let rule = GaussRule::new(40);
        let mut cuts = vec![-c, c];
        cuts.extend(f.fourier_breakpoints(0).into_iter().filter(|&v| -c < v && v < c));
        cuts.sort_by(f64::total_cmp);
        let mut acc = Complex64::new(0.0, 0.0);
        for w in cuts.windows(2) {
            let panels = 64;
            let h = (w[1] - w[0]) / panels as f64;
            for i in 0..panels {
                let lo = w[0] + i as f64 * h;
                let (nodes, weights) = rule.mapped(lo, lo + h);
                for (xi, wt) in nodes.iter().zip(weights) {
                    acc += f.fourier(&[*xi]).unwrap() * Complex64::from_polar(wt, 2.0 * PI * x * xi);
                }
            }
        }
        acc.re
    }

    #[test]
    fn fourier_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<f64> = (0..10).map(|_| rng.random_range(-2.0..2.0)).collect();
        // integrable transforms: invert
        for (f, c) in [
            (TestFunction::gaussian(1), 8.0),
            (TestFunction::sinc_squared(1, 4.0), 0.25),
        ] {
            for &x in &points {
                assert!((inverse_1d(&f, c, x) - f.eval(&[x])).abs() < 1e-7, "{} at {x}", f.id);
            }
        }
        // compactly supported signals: transform forward
        let ind = TestFunction::indicator();
        for &xi in &points {
            let got = forward_1d(&ind, -0.5, 1.5, xi);
            assert!((got - ind.fourier(&[xi]).unwrap()).norm() < 1e-7);
        }
    }

    #[test]
    fn radial_bump_transform() {
        // int (1 - r^2)^3 over the unit disc is pi / 4
        let f = TestFunction::radial_bump();
        assert_relative_eq!(f.fourier(&[0.0, 0.0]).unwrap().re, PI / 4.0, epsilon = 1e-12);
        // forward quadrature in polar coordinates at a few frequencies
        let rule = GaussRule::new(40);
        let (r_nodes, r_weights) = rule.mapped(0.0, 1.0);
        for xi in [[0.3, 0.0], [0.4, -0.7], [1.1, 0.2]] {
            let mut acc = 0.0;
            let angles = 128;
            for (r, wr) in r_nodes.iter().zip(&r_weights) {
                for t in 0..angles {
                    let th = 2.0 * PI * t as f64 / angles as f64;
                    let x = [r * th.cos(), r * th.sin()];
                    let phase = -2.0 * PI * (x[0] * xi[0] + x[1] * xi[1]);
                    acc += f.eval(&x) * phase.cos() * r * wr * 2.0 * PI / angles as f64;
                }
            }
            assert!((acc - f.fourier(&xi).unwrap().re).abs() < 1e-10);
        }
    }

    #[test]
    fn band_limits_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in corpus().into_iter().filter(|f| f.band_limit.is_some()) {
            let b = f.band_limit.unwrap();
            for _ in 0..200 {
                let xi: Vec<f64> = (0..f.dim).map(|_| rng.random_range(-3.0..3.0)).collect();
                let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                let outside = if f.dim == 1 {
                    r > b
                } else {
                    xi.iter().any(|v| v.abs() > 0.25)
                };
                if outside {
                    assert!(f.fourier(&xi).unwrap().norm() < 1e-12, "{}", f.id);
                }
            }
        }
    }

    #[test]
    fn combinations_and_shifts() {
        let g = TestFunction::gaussian(1);
        let s = TestFunction::sinc_squared(1, 4.0);
        let c = TestFunction::combine(2.0, &g, -0.5, &s);
        assert_relative_eq!(
            c.eval(&[0.3]),
            2.0 * g.eval(&[0.3]) - 0.5 * s.eval(&[0.3]),
            epsilon = 1e-15
        );
        assert!(c.has_fourier());
        let sh = g.shifted(&[0.25]);
        assert_relative_eq!(sh.eval(&[0.25]), 1.0);
        let want = g.fourier(&[0.5]).unwrap() * Complex64::from_polar(1.0, -2.0 * PI * 0.125);
        assert!((sh.fourier(&[0.5]).unwrap() - want).norm() < 1e-15);
        assert!(!TestFunction::cusp().has_fourier());
        assert!(TestFunction::zero(2).has_fourier());
        assert_eq!(TestFunction::zero(2).eval(&[1.0, 2.0]), 0.0);
    }
}
