//! Analysis coefficients `c_jk(f) = m^j int f(u) conj(phi~(M^j u + k)) du`.
//!
//! Substituting `v = M^j u + k` turns every coefficient into an average of
//! `f(M^{-j}(v - k))` against `phi~` over the support of `phi~`, so indicator
//! averagers are integrated over exactly their support and the integrand stays
//! smooth.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Profile, TestFunction};
use crate::dilation::{mat_vec, DilationMatrix};
use crate::error::{Error, Result};
use crate::kernels::{Averager, AveragerKind, SincPairing};
use crate::special::{sinc, sinc_nd};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        thread_local! {
            static RULES: RefCell<HashMap<usize, GaussRule>> = RefCell::new(HashMap::new());
        }
        let n = n.max(1);
        RULES.with(|rules| {
            rules
                .borrow_mut()
                .entry(n)
                .or_insert_with(|| {
                    let rule = gauss_quad::legendre::GaussLegendre::new(NonZeroUsize::new(n).expect("positive"));
                    let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
                    Self { nodes, weights }
                })
                .clone()
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights for `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            self.nodes.iter().map(|t| mid + half * t).collect(),
            self.weights.iter().map(|w| w * half).collect(),
        )
    }

    /// Nodes and weights for `[a, b]` split into `panels` equal pieces.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * self.len());
        let mut weights = Vec::with_capacity(panels * self.len());
        for i in 0..panels {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == panels { b } else { lo + h };
            let (n, w) = self.mapped(lo, hi);
            nodes.extend(n);
            weights.extend(w);
        }
        (nodes, weights)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (n, w) = self.mapped(a, b);
        n.iter().zip(&w).map(|(x, wt)| f(*x) * wt).sum()
    }
}

/// Which tensor rule a coefficient uses; chosen from the averager's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    TensorGaussLegendre,
    /// Gauss-Legendre in `r^2` times the trapezoid rule in angle.
    TensorPolar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
    pub subdivisions: usize,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Largest node count allowed for a single coefficient.
    pub node_budget: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_axis: 24,
            subdivisions: 2,
            radial_nodes: 32,
            angular_nodes: 64,
            node_budget: 4_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 || self.radial_nodes < 2 || self.angular_nodes < 2 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least 2 nodes per axis".into(),
            ));
        }
        if self.subdivisions == 0 || self.node_budget == 0 {
            return Err(Error::InvalidParameter(
                "subdivisions and node budget must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The same settings with every node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            nodes_per_axis: 2 * self.nodes_per_axis,
            radial_nodes: 2 * self.radial_nodes,
            angular_nodes: 2 * self.angular_nodes,
            ..*self
        }
    }

    pub fn rule_for(averager: &Averager) -> QuadratureRule {
        match averager.kind() {
            AveragerKind::Ball { .. } => QuadratureRule::TensorPolar,
            AveragerKind::ShiftedCombo { base, .. } => Self::rule_for(base),
            _ => QuadratureRule::TensorGaussLegendre,
        }
    }

    fn check_budget(&self, required: usize) -> Result<()> {
        if required > self.node_budget {
            Err(Error::BudgetExceeded {
                required,
                budget: self.node_budget,
            })
        } else {
            Ok(())
        }
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationFailed(format!("{what} returned {v}")))
    }
}

/// `c_jk(f)` for one lattice point.
pub fn coefficient(
    f: &TestFunction,
    a: &Averager,
    m: &DilationMatrix,
    j: i32,
    k: &[i64],
    q: &QuadratureSpec,
) -> Result<Complex64> {
    Ok(coefficients(f, a, m, j, &[k.to_vec()], q)?[0])
}

/// `c_jk(f)` for a list of lattice points, computed in parallel. The output
/// order matches `ks` and does not depend on the thread count.
pub fn coefficients(
    f: &TestFunction,
    a: &Averager,
    m: &DilationMatrix,
    j: i32,
    ks: &[Vec<i64>],
    q: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    q.validate()?;
    let d = m.dim();
    for got in [f.dim, a.dim()] {
        if got != d {
            return Err(Error::DimensionMismatch { expected: d, got });
        }
    }
    if let Some(k) = ks.iter().find(|k| k.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: k.len(),
        });
    }
    if let Some((amplitude, _)) = f.factors() {
        if amplitude == 0.0 {
            return Ok(vec![Complex64::new(0.0, 0.0); ks.len()]);
        }
    }

    if let AveragerKind::ShiftedCombo { base, coeffs } = a.kind() {
        let terms: Vec<(Vec<i64>, Complex64)> = coeffs.terms().map(|(l, b)| (l.clone(), *b)).collect();
        let shifted = |k: &[i64], l: &[i64]| -> Vec<i64> { k.iter().zip(l).map(|(a, b)| a + b).collect() };
        let needed: BTreeSet<Vec<i64>> = ks
            .iter()
            .flat_map(|k| terms.iter().map(move |(l, _)| shifted(k, l)))
            .collect();
        let needed: Vec<Vec<i64>> = needed.into_iter().collect();
        let values = coefficients(f, base, m, j, &needed, q)?;
        let table: BTreeMap<&Vec<i64>, Complex64> = needed.iter().zip(values).collect();
        return Ok(ks
            .iter()
            .map(|k| terms.iter().map(|(l, b)| b.conj() * table[&shifted(k, l)]).sum())
            .collect());
    }

    if let Some(out) = separable(f, a, m, j, ks, q)? {
        return Ok(out);
    }

    let mj = m.power(j);
    let minv = m.power(-j);
    let det = m.det_abs().powi(j);
    ks.par_iter().map(|k| single(f, a, &mj, &minv, det, k, q)).collect()
}

/// Per-axis evaluation when `f` is a tensor product and `M` is diagonal.
fn separable(
    f: &TestFunction,
    a: &Averager,
    m: &DilationMatrix,
    j: i32,
    ks: &[Vec<i64>],
    q: &QuadratureSpec,
) -> Result<Option<Vec<Complex64>>> {
    let Some((amplitude, factors)) = f.factors() else {
        return Ok(None);
    };
    if !m.is_diagonal() {
        return Ok(None);
    }
    let mj = m.power(j);
    let d = m.dim();
    let axis_fn: Box<dyn Fn(usize, i64) -> Result<Complex64> + Sync> = match a.kind() {
        AveragerKind::Box { lo, hi } => {
            let (lo, hi) = (lo.clone(), hi.clone());
            Box::new(move |axis, k| {
                box_mean_1d(&factors[axis], mj[(axis, axis)], k, lo[axis], hi[axis], q).map(|v| Complex64::new(v, 0.0))
            })
        }
        AveragerKind::Sinc {
            pairing: SincPairing::Fourier,
        } => {
            if factors.iter().any(|p| p.fourier(0.0).is_none()) {
                return Err(Error::Unsupported(format!(
                    "the Fourier pairing needs a closed-form transform of '{}'",
                    f.id
                )));
            }
            Box::new(move |axis, k| fourier_1d(&factors[axis], mj[(axis, axis)], k, q))
        }
        AveragerKind::Sinc {
            pairing: SincPairing::Spatial { half_width },
        } => {
            let w = *half_width;
            Box::new(move |axis, k| {
                sinc_spatial_1d(&factors[axis], mj[(axis, axis)], k, w, q).map(|v| Complex64::new(v, 0.0))
            })
        }
        _ => return Ok(None),
    };

    let mut per_axis: Vec<BTreeMap<i64, Complex64>> = Vec::with_capacity(d);
    for axis in 0..d {
        let distinct: BTreeSet<i64> = ks.iter().map(|k| k[axis]).collect();
        let distinct: Vec<i64> = distinct.into_iter().collect();
        let values: Vec<Complex64> = distinct.par_iter().map(|&k| axis_fn(axis, k)).collect::<Result<_>>()?;
        per_axis.push(distinct.into_iter().zip(values).collect());
    }
    Ok(Some(
        ks.iter()
            .map(|k| {
                k.iter()
                    .enumerate()
                    .fold(Complex64::new(amplitude, 0.0), |acc, (axis, kv)| {
                        acc * per_axis[axis][kv]
                    })
            })
            .collect(),
    ))
}

/// Sorted cut points of `[a, b]` including the ends.
fn cuts(a: f64, b: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let mut out = vec![a, b];
    out.extend(interior.into_iter().filter(|&c| a < c && c < b));
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Mean of `p` over `{(v - k) / s : v in [lo, hi]}`.
fn box_mean_1d(p: &Profile, s: f64, k: i64, lo: f64, hi: f64, q: &QuadratureSpec) -> Result<f64> {
    let a = (lo - k as f64) / s;
    let b = (hi - k as f64) / s;
    let pieces = cuts(a, b, p.breakpoints());
    let rule = GaussRule::new(q.nodes_per_axis);
    q.check_budget(q.nodes_per_axis * q.subdivisions * (pieces.len() - 1))?;
    let mut total = 0.0;
    for w in pieces.windows(2) {
        let (nodes, weights) = rule.composite(w[0], w[1], q.subdivisions);
        for (x, wt) in nodes.iter().zip(&weights) {
            total += finite(p.eval(*x), "signal")? * wt;
        }
    }
    Ok(total / (b - a).abs())
}

/// `|s| int_{-1/2}^{1/2} p^(s eta) e^{-2 pi i k eta} d eta`, integrated in
/// `zeta = s eta`.
fn fourier_1d(p: &Profile, s: f64, k: i64, q: &QuadratureSpec) -> Result<Complex64> {
    let half = 0.5 * s.abs();
    let pieces = cuts(-half, half, p.fourier_breakpoints());
    let rule = GaussRule::new(q.nodes_per_axis);
    let freq = k as f64 / s;
    let mut total = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for w in pieces.windows(2) {
        let len = w[1] - w[0];
        let panels = q
            .subdivisions
            .max((2.0 * len).ceil() as usize)
            .max((len * freq.abs() / 2.0).ceil() as usize);
        used += panels * q.nodes_per_axis;
        q.check_budget(used)?;
        let (nodes, weights) = rule.composite(w[0], w[1], panels);
        for (z, wt) in nodes.iter().zip(&weights) {
            let v = p.fourier(*z).expect("checked by caller");
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::EvaluationFailed(format!("transform returned {v}")));
            }
            total += v * Complex64::from_polar(*wt, -2.0 * PI * freq * z);
        }
    }
    Ok(total)
}

/// `int p((v - k) / s) sinc(v) dv` over the hull of `[-W, W]` and `k + s [-W, W]`.
fn sinc_spatial_1d(p: &Profile, s: f64, k: i64, half_width: f64, q: &QuadratureSpec) -> Result<f64> {
    let kf = k as f64;
    let a = (-half_width).min(kf - s.abs() * half_width);
    let b = half_width.max(kf + s.abs() * half_width);
    let breaks = p.breakpoints().into_iter().map(|c| s * c + kf);
    let pieces = cuts(a, b, breaks);
    let rule = GaussRule::new(q.nodes_per_axis);
    let mut total = 0.0;
    let mut used = 0;
    for w in pieces.windows(2) {
        let panels = q.subdivisions.max((w[1] - w[0]).ceil() as usize);
        used += panels * q.nodes_per_axis;
        q.check_budget(used)?;
        let (nodes, weights) = rule.composite(w[0], w[1], panels);
        for (v, wt) in nodes.iter().zip(&weights) {
            total += finite(p.eval((v - kf) / s), "signal")? * sinc(*v) * wt;
        }
    }
    Ok(total)
}

/// Tensor-product nodes over `prod [lo_v, hi_v]`, each axis a composite rule.
fn tensor_nodes(lo: &[f64], hi: &[f64], rule: &GaussRule, panels: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let axes: Vec<(Vec<f64>, Vec<f64>)> = lo
        .iter()
        .zip(hi)
        .zip(panels)
        .map(|((a, b), &p)| rule.composite(*a, *b, p))
        .collect();
    let mut points = vec![Vec::new()];
    let mut weights = vec![1.0];
    for (nodes, ws) in &axes {
        let mut np = Vec::with_capacity(points.len() * nodes.len());
        let mut nw = Vec::with_capacity(points.len() * nodes.len());
        for (p, w) in points.iter().zip(&weights) {
            for (x, wx) in nodes.iter().zip(ws) {
                let mut q = p.clone();
                q.push(*x);
                np.push(q);
                nw.push(w * wx);
            }
        }
        points = np;
        weights = nw;
    }
    (points, weights)
}

fn single(
    f: &TestFunction,
    a: &Averager,
    mj: &DMatrix<f64>,
    minv: &DMatrix<f64>,
    det: f64,
    k: &[i64],
    q: &QuadratureSpec,
) -> Result<Complex64> {
    let d = k.len();
    let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
    let pull = |v: &[f64]| -> Vec<f64> {
        let shifted: Vec<f64> = v.iter().zip(&kf).map(|(a, b)| a - b).collect();
        mat_vec(minv, &shifted)
    };
    match a.kind() {
        AveragerKind::Box { lo, hi } => {
            let rule = GaussRule::new(q.nodes_per_axis);
            q.check_budget((q.nodes_per_axis * q.subdivisions).pow(d as u32))?;
            let (points, weights) = tensor_nodes(lo, hi, &rule, &vec![q.subdivisions; d]);
            let measure: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
            let mut total = 0.0;
            for (v, w) in points.iter().zip(&weights) {
                total += finite(f.eval(&pull(v)), "signal")? * w;
            }
            Ok(Complex64::new(total / measure, 0.0))
        }
        AveragerKind::Ball { radius } => {
            q.check_budget(q.radial_nodes * q.angular_nodes)?;
            let rule = GaussRule::new(q.radial_nodes);
            let (s_nodes, s_weights) = rule.mapped(0.0, radius * radius);
            let n_ang = q.angular_nodes;
            let mut total = 0.0;
            for (s, ws) in s_nodes.iter().zip(&s_weights) {
                let r = s.sqrt();
                for t in 0..n_ang {
                    let th = 2.0 * PI * t as f64 / n_ang as f64;
                    let v = [r * th.cos(), r * th.sin()];
                    total += finite(f.eval(&pull(&v)), "signal")? * ws * 0.5;
                }
            }
            let area = PI * radius * radius;
            Ok(Complex64::new(total * (2.0 * PI / n_ang as f64) / area, 0.0))
        }
        AveragerKind::Sinc {
            pairing: SincPairing::Fourier,
        } => {
            if !f.has_fourier() {
                return Err(Error::Unsupported(format!(
                    "the Fourier pairing needs a closed-form transform of '{}'",
                    f.id
                )));
            }
            fourier_nd(&|xi: &[f64]| f.fourier(xi).unwrap_or_default(), mj, det, k, q)
        }
        AveragerKind::Sinc {
            pairing: SincPairing::Spatial { half_width },
        } => {
            let reach: Vec<f64> = (0..kf.len())
                .map(|r| half_width * (0..kf.len()).map(|c| mj[(r, c)].abs()).sum::<f64>())
                .collect();
            let lo: Vec<f64> = kf.iter().zip(&reach).map(|(&v, r)| (-half_width).min(v - r)).collect();
            let hi: Vec<f64> = kf.iter().zip(&reach).map(|(&v, r)| half_width.max(v + r)).collect();
            let panels: Vec<usize> = lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| q.subdivisions.max((b - a).ceil() as usize))
                .collect();
            q.check_budget(panels.iter().map(|p| p * q.nodes_per_axis).product())?;
            let rule = GaussRule::new(q.nodes_per_axis);
            let (points, weights) = tensor_nodes(&lo, &hi, &rule, &panels);
            let mut total = 0.0;
            for (v, w) in points.iter().zip(&weights) {
                total += finite(f.eval(&pull(v)), "signal")? * sinc_nd(v) * w;
            }
            Ok(Complex64::new(total, 0.0))
        }
        AveragerKind::ShiftedCombo { .. } => unreachable!("combinations are expanded by the caller"),
    }
}

fn fourier_nd(
    fhat: &(dyn Fn(&[f64]) -> Complex64 + Sync),
    mj: &DMatrix<f64>,
    det: f64,
    k: &[i64],
    q: &QuadratureSpec,
) -> Result<Complex64> {
    let d = k.len();
    let mt = mj.transpose();
    let stretch = crate::dilation::spectral_norm(mj);
    let panels: Vec<usize> = k
        .iter()
        .map(|&kv| {
            q.subdivisions
                .max((2.0 * stretch).ceil() as usize)
                .max(((kv as f64).abs() / 2.0).ceil() as usize)
        })
        .collect();
    q.check_budget(panels.iter().map(|p| p * q.nodes_per_axis).product())?;
    let rule = GaussRule::new(q.nodes_per_axis);
    let (points, weights) = tensor_nodes(&vec![-0.5; d], &vec![0.5; d], &rule, &panels);
    let mut total = Complex64::new(0.0, 0.0);
    for (eta, w) in points.iter().zip(&weights) {
        let v = fhat(&mat_vec(&mt, eta));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::EvaluationFailed(format!("transform returned {v}")));
        }
        let phase: f64 = eta.iter().zip(k).map(|(e, &kv)| e * kv as f64).sum();
        total += v * Complex64::from_polar(*w, -2.0 * PI * phase);
    }
    Ok(total * det)
}

/// `m^j int_{[-1/2,1/2]^d} f^(M*^j eta) e^{-2 pi i (k, eta)} d eta`, which equals
/// `F^{-1}(chi_{M*^j [-1/2,1/2]^d} f^)(-M^{-j} k)`.
pub fn fourier_coefficient(
    fhat: &(dyn Fn(&[f64]) -> Complex64 + Sync),
    m: &DilationMatrix,
    j: i32,
    k: &[i64],
    q: &QuadratureSpec,
) -> Result<Complex64> {
    q.validate()?;
    if k.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: k.len(),
        });
    }
    fourier_nd(fhat, &m.power(j), m.det_abs().powi(j), k, q)
}

/// Fourier coefficients of a test function, using its tensor structure when
/// `M` is diagonal.
pub fn fourier_coefficients(
    f: &TestFunction,
    m: &DilationMatrix,
    j: i32,
    ks: &[Vec<i64>],
    q: &QuadratureSpec,
) -> Result<Vec<Complex64>> {
    coefficients(f, &Averager::sinc(m.dim(), SincPairing::Fourier), m, j, ks, q)
}
