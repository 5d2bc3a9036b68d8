//! Reconstruction kernels `phi` and averaging functions `phi~`.
//!
//! Fourier convention: `f^(xi) = int f(x) e^{-2 pi i (x, xi)} dx`, so the
//! tensor sinc has symbol `chi_{[-1/2,1/2]^d}` and `sinc(x + l)` has symbol
//! `e^{2 pi i (l, xi)} chi`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{bessel_j_scaled, gamma, sinc, sinc_nd};
use crate::synthesis::MomentTable;
use crate::trig::{binomial, factorial, multi_binomial, total_degree, TrigPolynomial};

/// Imaginary parts above this are reported as a non-real kernel.
pub const REAL_TOL: f64 = 1e-10;

/// A function with a frequency-side symbol.
pub trait Symbol: Send + Sync {
    fn dim(&self) -> usize;

    /// Fourier transform at `xi`.
    fn symbol(&self, xi: &[f64]) -> Complex64;

    /// Whether the symbol is smooth in a neighborhood of the origin.
    fn smooth_at_origin(&self) -> bool {
        true
    }

    /// Derivatives `D^alpha` at the origin for `[alpha] < n` from closed-form
    /// Taylor series, when the type has them.
    fn taylor_table(&self, _n: usize) -> Option<MomentTable> {
        None
    }
}

/// Whether a kernel's lattice sums converge absolutely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    /// Decays like `|x|^{-1}` per axis; lattice sums are only conditionally convergent.
    L2Only,
    /// Decays like `|x|^{-d-eps}`.
    Summable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    /// `sum_l a_l sinc(x + l)`, symbol `T(xi) chi_{[-1/2,1/2]^d}(xi)`.
    SincCombo { symbol: TrigPolynomial },
    /// `prod_v s^{-1} sinc^2(x_v / s)`, symbol `prod_v (1 - s|xi_v|)_+`.
    SincSquared { scale: f64 },
    /// Radial kernel with symbol `(1 - |xi|^2)_+^delta`.
    BochnerRiesz { delta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "KernelDoc", try_from = "KernelDoc")]
pub struct Kernel {
    dim: usize,
    kind: KernelKind,
}

impl Kernel {
    /// Plain tensor sinc.
    pub fn sinc(dim: usize) -> Self {
        Self::sinc_combo(TrigPolynomial::constant(dim, Complex64::new(1.0, 0.0)))
    }

    pub fn sinc_combo(symbol: TrigPolynomial) -> Self {
        Self {
            dim: symbol.dim(),
            kind: KernelKind::SincCombo { symbol },
        }
    }

    pub fn sinc_squared(dim: usize, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sinc^2 scale must be positive, got {scale}"
            )));
        }
        Ok(Self {
            dim,
            kind: KernelKind::SincSquared { scale },
        })
    }

    /// `1/2 sinc^2(x/2)` per axis: symbol `(1 - 2|xi|)_+` supported in the unit box.
    pub fn fejer(dim: usize) -> Self {
        Self::sinc_squared(dim, 2.0).expect("positive scale")
    }

    pub fn bochner_riesz(dim: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Bochner-Riesz order must be positive, got {delta}"
            )));
        }
        if dim != 2 {
            return Err(Error::Unsupported(
                "Bochner-Riesz kernels are implemented for d = 2".into(),
            ));
        }
        Ok(Self {
            dim,
            kind: KernelKind::BochnerRiesz { delta },
        })
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Trigonometric factor of a sinc combination.
    pub fn trig_symbol(&self) -> Option<&TrigPolynomial> {
        match &self.kind {
            KernelKind::SincCombo { symbol } => Some(symbol),
            _ => None,
        }
    }

    /// Whether the kernel is symmetric about the origin.
    pub fn is_origin_symmetric(&self) -> bool {
        match &self.kind {
            KernelKind::SincCombo { symbol } => symbol.is_even(),
            KernelKind::SincSquared { .. } | KernelKind::BochnerRiesz { .. } => true,
        }
    }

    pub fn decay_class(&self) -> DecayClass {
        match self.kind {
            KernelKind::SincCombo { .. } => DecayClass::L2Only,
            KernelKind::SincSquared { .. } => DecayClass::Summable,
            KernelKind::BochnerRiesz { delta } => {
                // |R_delta(x)| ~ |x|^{-(d+1)/2 - delta}
                if delta > (self.dim as f64 - 1.0) / 2.0 {
                    DecayClass::Summable
                } else {
                    DecayClass::L2Only
                }
            }
        }
    }

    /// Radius outside which the symbol vanishes.
    pub fn freq_support_radius(&self) -> f64 {
        let d = self.dim as f64;
        match self.kind {
            KernelKind::SincCombo { .. } => d.sqrt() / 2.0,
            KernelKind::SincSquared { scale } => d.sqrt() / scale,
            KernelKind::BochnerRiesz { .. } => 1.0,
        }
    }

    /// Upper bound for `sup |phi|`.
    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            KernelKind::SincCombo { symbol } => symbol.abs_sum(),
            KernelKind::SincSquared { scale } => scale.powi(-(self.dim as i32)),
            // the symbol is non-negative, so the maximum is at the origin
            KernelKind::BochnerRiesz { .. } => self.eval(&vec![0.0; self.dim]),
        }
    }

    /// Point value of the kernel. Complex coefficients are allowed internally;
    /// the imaginary part of a real kernel stays below `REAL_TOL`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let v = self.eval_complex(x);
        debug_assert!(
            v.im.abs() < REAL_TOL * (1.0 + v.re.abs()),
            "kernel value is not real: {v}"
        );
        v.re
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            KernelKind::SincCombo { symbol } => {
                if symbol.len() == 1 {
                    if let Some((l, a)) = symbol.terms().next() {
                        if l.iter().all(|&v| v == 0) {
                            return a * sinc_nd(x);
                        }
                    }
                }
                symbol
                    .terms()
                    .map(|(l, a)| {
                        let s: f64 = x.iter().zip(l).map(|(&xv, &lv)| sinc(xv + lv as f64)).product();
                        a * s
                    })
                    .sum()
            }
            KernelKind::SincSquared { scale } => {
                let v: f64 = x.iter().map(|&t| sinc(t / scale).powi(2) / scale).product();
                Complex64::new(v, 0.0)
            }
            KernelKind::BochnerRiesz { delta } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                Complex64::new(bochner_riesz_value(self.dim, *delta, r), 0.0)
            }
        }
    }

    /// Closed-form symbol `phi^(xi)`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        match &self.kind {
            KernelKind::SincCombo { symbol } => {
                if xi.iter().all(|v| v.abs() < 0.5) {
                    symbol.eval(xi)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            KernelKind::SincSquared { scale } => {
                let v: f64 = xi.iter().map(|v| (1.0 - scale * v.abs()).max(0.0)).product();
                Complex64::new(v, 0.0)
            }
            KernelKind::BochnerRiesz { delta } => {
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                if r2 >= 1.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((1.0 - r2).powf(*delta), 0.0)
                }
            }
        }
    }
}

/// `Gamma(1+delta) pi^{-delta} J_{d/2+delta}(2 pi r) / r^{d/2+delta}`.
fn bochner_riesz_value(dim: usize, delta: f64, r: f64) -> f64 {
    let nu = dim as f64 / 2.0 + delta;
    let z = 2.0 * PI * r;
    gamma(1.0 + delta) * PI.powf(-delta) * (2.0 * PI).powf(nu) * bessel_j_scaled(nu, z)
}

impl Symbol for Kernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn symbol(&self, xi: &[f64]) -> Complex64 {
        self.fourier(xi)
    }

    fn smooth_at_origin(&self) -> bool {
        !matches!(self.kind, KernelKind::SincSquared { .. })
    }

    fn taylor_table(&self, n: usize) -> Option<MomentTable> {
        match &self.kind {
            KernelKind::SincCombo { symbol } => Some(MomentTable::from_fn(self.dim, n, |alpha| {
                symbol.derivative_at_zero(alpha)
            })),
            KernelKind::SincSquared { .. } => None,
            KernelKind::BochnerRiesz { delta } => {
                // (1 - rho^2)^delta = sum_m binom(delta, m) (-1)^m rho^{2m}
                let coeffs: Vec<f64> = (0..n)
                    .map(|m| {
                        let b = (0..m).fold(1.0, |acc, i| acc * (delta - i as f64) / (i + 1) as f64);
                        if m % 2 == 0 {
                            b
                        } else {
                            -b
                        }
                    })
                    .collect();
                Some(radial_table(self.dim, n, &coeffs))
            }
        }
    }
}

/// Derivative table at 0 of `sum_m c_m |xi|^{2m}`.
pub(crate) fn radial_table(dim: usize, n: usize, coeffs: &[f64]) -> MomentTable {
    MomentTable::from_fn(dim, n, |alpha| {
        if alpha.iter().any(|a| a % 2 == 1) {
            return Complex64::new(0.0, 0.0);
        }
        let halves: Vec<u32> = alpha.iter().map(|a| a / 2).collect();
        let m = total_degree(&halves) as usize;
        let c = coeffs.get(m).copied().unwrap_or(0.0);
        // coefficient of xi^alpha in (sum xi_v^2)^m is m! / prod p_v!, times alpha!
        let multinomial = factorial(m as u32) / halves.iter().map(|&p| factorial(p)).product::<f64>();
        let alpha_fact: f64 = alpha.iter().map(|&a| factorial(a)).product();
        Complex64::new(c * multinomial * alpha_fact, 0.0)
    })
}

/// How a sinc averager pairs with the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum SincPairing {
    /// Integrate `f^` against the box symbol (needs a closed-form transform).
    Fourier,
    /// Integrate `f` against the sinc in space. The domain covers
    /// `[-half_width, half_width]^d` around the sinc peak and the image of the
    /// signal window `[-half_width, half_width]^d`.
    Spatial { half_width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AveragerKind {
    /// Normalized indicator of `prod [lo_v, hi_v]`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Normalized indicator of the centered ball of the given radius (d = 2).
    Ball { radius: f64 },
    /// `sum_l b_l base(x + l)`.
    ShiftedCombo {
        base: Box<Averager>,
        coeffs: TrigPolynomial,
    },
    /// The tensor sinc used as an analysis function.
    Sinc { pairing: SincPairing },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "AveragerDoc", try_from = "AveragerDoc")]
pub struct Averager {
    dim: usize,
    kind: AveragerKind,
}

impl Averager {
    pub fn unit_box(dim: usize) -> Self {
        Self::boxed(vec![-0.5; dim], vec![0.5; dim]).expect("valid box")
    }

    /// Normalized indicator of `[0, 1]^d`.
    pub fn unit_box_shifted(dim: usize) -> Self {
        Self::boxed(vec![0.0; dim], vec![1.0; dim]).expect("valid box")
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter(
                "box corners must have equal, positive length".into(),
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidParameter("box must have lo < hi on every axis".into()));
        }
        Ok(Self {
            dim: lo.len(),
            kind: AveragerKind::Box { lo, hi },
        })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim != 2 {
            return Err(Error::Unsupported("ball averagers are implemented for d = 2".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            dim,
            kind: AveragerKind::Ball { radius },
        })
    }

    pub fn shifted_combo(base: Averager, coeffs: TrigPolynomial) -> Result<Self> {
        if coeffs.dim() != base.dim {
            return Err(Error::DimensionMismatch {
                expected: base.dim,
                got: coeffs.dim(),
            });
        }
        if matches!(base.kind, AveragerKind::Sinc { .. }) {
            return Err(Error::Unsupported("shifted combinations of sinc averagers".into()));
        }
        Ok(Self {
            dim: base.dim,
            kind: AveragerKind::ShiftedCombo {
                base: Box::new(base),
                coeffs,
            },
        })
    }

    pub fn sinc(dim: usize, pairing: SincPairing) -> Self {
        Self {
            dim,
            kind: AveragerKind::Sinc { pairing },
        }
    }

    pub fn kind(&self) -> &AveragerKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lebesgue measure of the underlying set `U`.
    pub fn measure(&self) -> Option<f64> {
        match &self.kind {
            AveragerKind::Box { lo, hi } => Some(lo.iter().zip(hi).map(|(a, b)| b - a).product()),
            AveragerKind::Ball { radius } => Some(PI * radius * radius),
            AveragerKind::ShiftedCombo { base, .. } => base.measure(),
            AveragerKind::Sinc { .. } => None,
        }
    }

    /// Radius of a centered ball containing the support.
    pub fn support_radius(&self) -> f64 {
        match &self.kind {
            AveragerKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| a.abs().max(b.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            AveragerKind::Ball { radius } => *radius,
            AveragerKind::ShiftedCombo { base, coeffs } => {
                let shift = coeffs
                    .terms()
                    .map(|(l, _)| l.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt())
                    .fold(0.0, f64::max);
                base.support_radius() + shift
            }
            AveragerKind::Sinc { .. } => f64::INFINITY,
        }
    }

    /// Whether the averager is symmetric about the origin.
    pub fn is_origin_symmetric(&self) -> bool {
        match &self.kind {
            AveragerKind::Box { lo, hi } => lo.iter().zip(hi).all(|(a, b)| (a + b).abs() < 1e-15),
            AveragerKind::Ball { .. } | AveragerKind::Sinc { .. } => true,
            AveragerKind::ShiftedCombo { base, coeffs } => base.is_origin_symmetric() && coeffs.is_even(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_complex(x).re
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        let real = |v: f64| Complex64::new(v, 0.0);
        match &self.kind {
            AveragerKind::Box { lo, hi } => {
                let inside = x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *a <= *v && *v <= *b);
                real(if inside { 1.0 / self.measure().unwrap() } else { 0.0 })
            }
            AveragerKind::Ball { radius } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                real(if r2 <= radius * radius {
                    1.0 / self.measure().unwrap()
                } else {
                    0.0
                })
            }
            AveragerKind::ShiftedCombo { base, coeffs } => coeffs
                .terms()
                .map(|(l, b)| {
                    let y: Vec<f64> = x.iter().zip(l).map(|(v, &lv)| v + lv as f64).collect();
                    b * base.eval_complex(&y)
                })
                .sum(),
            AveragerKind::Sinc { .. } => real(sinc_nd(x)),
        }
    }

    /// Closed-form symbol `phi~^(xi)`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        match &self.kind {
            AveragerKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .zip(xi)
                .map(|((a, b), &v)| Complex64::from_polar(sinc((b - a) * v), -PI * (a + b) * v))
                .product(),
            AveragerKind::Ball { radius } => {
                let rho = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                Complex64::new(ball_symbol(self.dim, *radius, rho), 0.0)
            }
            AveragerKind::ShiftedCombo { base, coeffs } => coeffs.eval(xi) * base.fourier(xi),
            AveragerKind::Sinc { .. } => {
                let inside = xi.iter().all(|v| v.abs() <= 0.5);
                Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
            }
        }
    }
}

/// `Gamma(1+d/2) J_{d/2}(2 pi r rho) / (pi r rho)^{d/2}`.
fn ball_symbol(dim: usize, radius: f64, rho: f64) -> f64 {
    let nu = dim as f64 / 2.0;
    let z = 2.0 * PI * radius * rho;
    gamma(1.0 + nu) * 2f64.powf(nu) * bessel_j_scaled(nu, z)
}

impl Symbol for Averager {
    fn dim(&self) -> usize {
        self.dim
    }

    fn symbol(&self, xi: &[f64]) -> Complex64 {
        self.fourier(xi)
    }

    fn taylor_table(&self, n: usize) -> Option<MomentTable> {
        match &self.kind {
            AveragerKind::Box { lo, hi } => {
                // per axis: e^{-pi i (a+b) t} sinc((b-a) t), Leibniz over the two series
                let axis_derivs: Vec<Vec<Complex64>> = lo
                    .iter()
                    .zip(hi)
                    .map(|(&a, &b)| {
                        let w = b - a;
                        let phase = Complex64::new(0.0, -PI * (a + b));
                        let sinc_d = |k: u32| -> f64 {
                            if k % 2 == 1 {
                                0.0
                            } else {
                                let m = k / 2;
                                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                                sign * (PI * w).powi(k as i32) / (k + 1) as f64
                            }
                        };
                        (0..n as u32)
                            .map(|k| (0..=k).map(|i| phase.powu(i) * binomial(k, i) * sinc_d(k - i)).sum())
                            .collect()
                    })
                    .collect();
                Some(MomentTable::from_fn(self.dim, n, |alpha| {
                    alpha
                        .iter()
                        .enumerate()
                        .map(|(axis, &k)| axis_derivs[axis][k as usize])
                        .product()
                }))
            }
            AveragerKind::Ball { radius } => {
                // Gamma(1+d/2) sum_m (-1)^m (pi r rho)^{2m} / (m! Gamma(m + d/2 + 1))
                let nu = self.dim as f64 / 2.0;
                let coeffs: Vec<f64> = (0..n)
                    .map(|m| {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        sign * gamma(1.0 + nu) * (PI * radius).powi(2 * m as i32)
                            / (factorial(m as u32) * gamma(m as f64 + nu + 1.0))
                    })
                    .collect();
                Some(radial_table(self.dim, n, &coeffs))
            }
            AveragerKind::ShiftedCombo { base, coeffs } => {
                let base_table = base.taylor_table(n)?;
                let trig = MomentTable::from_fn(self.dim, n, |alpha| coeffs.derivative_at_zero(alpha));
                Some(trig.product(&base_table))
            }
            AveragerKind::Sinc { .. } => Some(MomentTable::from_fn(self.dim, n, |alpha| {
                let v = if total_degree(alpha) == 0 { 1.0 } else { 0.0 };
                Complex64::new(v, 0.0)
            })),
        }
    }
}

// JSON documents ---------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum KernelDoc {
    SincCombo {
        dim: usize,
        /// Rows `[l_1, .., l_d, re, im]`.
        coefficients: Vec<Vec<f64>>,
    },
    SincSquared {
        dim: usize,
        scale: f64,
    },
    BochnerRiesz {
        dim: usize,
        delta: f64,
    },
}

impl From<Kernel> for KernelDoc {
    fn from(k: Kernel) -> Self {
        match k.kind {
            KernelKind::SincCombo { symbol } => KernelDoc::SincCombo {
                dim: k.dim,
                coefficients: symbol.to_rows(),
            },
            KernelKind::SincSquared { scale } => KernelDoc::SincSquared { dim: k.dim, scale },
            KernelKind::BochnerRiesz { delta } => KernelDoc::BochnerRiesz { dim: k.dim, delta },
        }
    }
}

impl TryFrom<KernelDoc> for Kernel {
    type Error = Error;

    fn try_from(doc: KernelDoc) -> Result<Self> {
        match doc {
            KernelDoc::SincCombo { dim, coefficients } => {
                Ok(Kernel::sinc_combo(TrigPolynomial::from_rows(dim, &coefficients)?))
            }
            KernelDoc::SincSquared { dim, scale } => Kernel::sinc_squared(dim, scale),
            KernelDoc::BochnerRiesz { dim, delta } => Kernel::bochner_riesz(dim, delta),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum AveragerDoc {
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        dim: usize,
        radius: f64,
    },
    ShiftedCombo {
        base: Box<AveragerDoc>,
        coefficients: Vec<Vec<f64>>,
    },
    Sinc {
        dim: usize,
        pairing: SincPairing,
    },
}

impl From<Averager> for AveragerDoc {
    fn from(a: Averager) -> Self {
        match a.kind {
            AveragerKind::Box { lo, hi } => AveragerDoc::Box { lo, hi },
            AveragerKind::Ball { radius } => AveragerDoc::Ball { dim: a.dim, radius },
            AveragerKind::ShiftedCombo { base, coeffs } => AveragerDoc::ShiftedCombo {
                base: Box::new((*base).into()),
                coefficients: coeffs.to_rows(),
            },
            AveragerKind::Sinc { pairing } => AveragerDoc::Sinc { dim: a.dim, pairing },
        }
    }
}

impl TryFrom<AveragerDoc> for Averager {
    type Error = Error;

    fn try_from(doc: AveragerDoc) -> Result<Self> {
        match doc {
            AveragerDoc::Box { lo, hi } => Averager::boxed(lo, hi),
            AveragerDoc::Ball { dim, radius } => Averager::ball(dim, radius),
            AveragerDoc::ShiftedCombo { base, coefficients } => {
                let base = Averager::try_from(*base)?;
                let coeffs = TrigPolynomial::from_rows(base.dim, &coefficients)?;
                Averager::shifted_combo(base, coeffs)
            }
            AveragerDoc::Sinc { dim, pairing } => Ok(Averager::sinc(dim, pairing)),
        }
    }
}

/// Derivative table of a product symbol by the Leibniz rule.
pub(crate) fn leibniz(a: &MomentTable, b: &MomentTable, beta: &[u32]) -> Complex64 {
    a.indices()
        .filter(|alpha| crate::trig::index_leq(alpha, beta))
        .map(|alpha| {
            let rest: Vec<u32> = beta.iter().zip(alpha.iter()).map(|(x, y)| x - y).collect();
            a.get(alpha) * b.get(&rest) * multi_binomial(beta, alpha)
        })
        .sum()
}
