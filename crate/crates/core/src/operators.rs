//! Sampling-type operators evaluated on grids.
//!
//! * [`quasi_projection`]: `Q_j f(x) = sum_k c_jk(f) phi(M^j x + k)`.
//! * [`kantorovich_1d`]: `K_w f(x) = sum_k (w int_{k/w}^{(k+1)/w} f) phi(w x - k)`.
//! * [`generalized_sampling`]: `S_w f(x) = sum_k f(k / w) phi(w x - k)`.
//! * [`fourier_side_projection`]: `Q_j` with `phi = phi~ = sinc`, coefficients
//!   read off the Fourier transform of `f`.
//!
//! Lattice sums are truncated to the `k` whose cell centre `-M^{-j} k` lies in
//! the evaluation window widened by `R ||M^{-j}||`. The same set is used for
//! every grid point, so an output is a fixed finite sum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::TestFunction;
use crate::dilation::{mat_vec, DilationMatrix};
use crate::error::{Error, Result};
use crate::kernels::{Averager, DecayClass, Kernel, SincPairing};
use crate::quadrature::{coefficients, GaussRule, QuadratureSpec};

/// Cell-centred tensor grid on an axis-aligned window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    lo: Vec<f64>,
    hi: Vec<f64>,
    points_per_axis: usize,
}

impl EvalGrid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, points_per_axis: usize) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidParameter(
                "window corners must have equal, positive length".into(),
            ));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidParameter(
                "window must satisfy lo < hi on every axis".into(),
            ));
        }
        if points_per_axis == 0 {
            return Err(Error::InvalidParameter("grid needs at least one point per axis".into()));
        }
        Ok(Self {
            lo,
            hi,
            points_per_axis,
        })
    }

    pub fn interval(a: f64, b: f64, points: usize) -> Result<Self> {
        Self::new(vec![a], vec![b], points)
    }

    pub fn cube(dim: usize, a: f64, b: f64, points_per_axis: usize) -> Result<Self> {
        Self::new(vec![a; dim], vec![b; dim], points_per_axis)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.points_per_axis as f64
    }

    pub fn cell_measure(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis_points(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing(axis);
        (0..self.points_per_axis)
            .map(|i| self.lo[axis] + (i as f64 + 0.5) * h)
            .collect()
    }

    /// Point `index` in row-major order (the last axis varies fastest).
    pub fn point(&self, index: usize) -> Vec<f64> {
        let d = self.dim();
        let n = self.points_per_axis;
        let mut out = vec![0.0; d];
        let mut rest = index;
        for axis in (0..d).rev() {
            let i = rest % n;
            rest /= n;
            out[axis] = self.lo[axis] + (i as f64 + 0.5) * self.spacing(axis);
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Real values on an [`EvalGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: EvalGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: EvalGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GeometryMismatch(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at the grid points.
    pub fn sample(grid: &EvalGrid, f: &TestFunction) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f.eval(&grid.point(i)))
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &EvalGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TruncationMode {
    /// Keep cells within `radius` cell widths of the window.
    Radius { radius: f64 },
    /// Grow the radius until the tail estimate drops below `tolerance`.
    TailTol { tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    /// Largest lattice set allowed.
    pub cap: usize,
    /// Coefficients below this modulus are dropped; their mass is added to the tail.
    pub coefficient_floor: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            mode: TruncationMode::Radius { radius: 64.0 },
            cap: 4_000_000,
            coefficient_floor: 0.0,
        }
    }
}

impl TruncationPolicy {
    pub fn radius(radius: f64) -> Self {
        Self {
            mode: TruncationMode::Radius { radius },
            ..Self::default()
        }
    }

    pub fn tail_tol(tolerance: f64) -> Self {
        Self {
            mode: TruncationMode::TailTol { tolerance },
            ..Self::default()
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.coefficient_floor = floor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.mode {
            TruncationMode::Radius { radius } => radius > 0.0 && radius.is_finite(),
            TruncationMode::TailTol { tolerance } => tolerance > 0.0 && tolerance.is_finite(),
        };
        if !ok || self.cap == 0 || !(self.coefficient_floor >= 0.0) {
            return Err(Error::InvalidParameter(format!("invalid truncation policy {self:?}")));
        }
        Ok(())
    }
}

/// Error estimates attached to an operator output.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Largest coefficient change under node doubling (a strided sample on large lattice sets),
    /// times a bound on `sum_k |phi(y + k)|`.
    pub quadrature: f64,
    /// Estimated contribution of the omitted lattice terms.
    pub truncation: f64,
    /// Largest imaginary part discarded when returning real values.
    pub max_imag: f64,
    pub lattice_points: usize,
    pub radius: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.quadrature + self.truncation
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorOutput {
    pub values: GridFunction,
    pub budget: ErrorBudget,
}

/// Lattice points `k` with `-M^{-j} k` in the window widened by
/// `radius ||M^{-j}||`, in lexicographic order.
pub fn lattice_set(m: &DilationMatrix, j: i32, grid: &EvalGrid, radius: f64, cap: usize) -> Result<Vec<Vec<i64>>> {
    let d = m.dim();
    if grid.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: grid.dim(),
        });
    }
    let pad = radius * crate::dilation::spectral_norm(&m.power(-j));
    let lo: Vec<f64> = grid.lo().iter().map(|v| v - pad).collect();
    let hi: Vec<f64> = grid.hi().iter().map(|v| v + pad).collect();
    let mj = m.power(j);
    // bounding box of -M^j applied to the widened window
    let mut kmin = vec![f64::INFINITY; d];
    let mut kmax = vec![f64::NEG_INFINITY; d];
    for corner in 0..(1usize << d) {
        let c: Vec<f64> = (0..d)
            .map(|a| if corner >> a & 1 == 1 { hi[a] } else { lo[a] })
            .collect();
        let image = mat_vec(&mj, &c);
        for a in 0..d {
            kmin[a] = kmin[a].min(-image[a]);
            kmax[a] = kmax[a].max(-image[a]);
        }
    }
    let ranges: Vec<(i64, i64)> = kmin
        .iter()
        .zip(&kmax)
        .map(|(a, b)| (a.floor() as i64, b.ceil() as i64))
        .collect();
    let boxed: f64 = ranges.iter().map(|(a, b)| (b - a + 1) as f64).product();
    if boxed > (cap as f64) * 4.0 {
        return Err(Error::TruncationCapExceeded {
            required: boxed as usize,
            cap,
        });
    }
    let minv = m.power(-j);
    let mut out = Vec::new();
    let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let kf: Vec<f64> = k.iter().map(|&v| -(v as f64)).collect();
        let centre = mat_vec(&minv, &kf);
        if centre
            .iter()
            .zip(lo.iter().zip(&hi))
            .all(|(c, (a, b))| *a <= *c && *c <= *b)
        {
            out.push(k.clone());
            if out.len() > cap {
                return Err(Error::TruncationCapExceeded {
                    required: out.len(),
                    cap,
                });
            }
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            k[axis] += 1;
            if k[axis] <= ranges[axis].1 {
                break;
            }
            k[axis] = ranges[axis].0;
        }
    }
}

/// Rough bound on `sum_k |phi(y + k)|` over a lattice set of the given radius.
fn lebesgue_factor(kernel: &Kernel, radius: f64) -> f64 {
    let d = kernel.dim() as i32;
    match kernel.decay_class() {
        DecayClass::L2Only => kernel.sup_bound() * (1.0 + 2.0 * (1.0 + radius).ln()).powi(d),
        DecayClass::Summable => kernel.sup_bound() * 3f64.powi(d),
    }
}

/// How many cell widths the centre lies outside the window (0 inside).
fn outside_distance(centre: &[f64], grid: &EvalGrid, cell: f64) -> f64 {
    centre
        .iter()
        .zip(grid.lo().iter().zip(grid.hi()))
        .map(|(c, (a, b))| ((a - c).max(c - b)).max(0.0) / cell)
        .fold(0.0, f64::max)
}

/// Sums `sum_k c_k phi(M^j x + k)` at every grid point, in a fixed order.
/// Terms flagged `outer` are also accumulated separately; the largest modulus
/// of that partial sum is returned with the largest discarded imaginary part.
fn evaluate_series(
    grid: &EvalGrid,
    mj: &nalgebra::DMatrix<f64>,
    ks: &[Vec<i64>],
    cs: &[Complex64],
    outer: &[bool],
    kernel: &Kernel,
) -> (Vec<f64>, f64, f64) {
    let terms: Vec<(Vec<f64>, Complex64, bool)> = ks
        .iter()
        .zip(cs)
        .zip(outer)
        .map(|((k, c), o)| (k.iter().map(|&v| v as f64).collect(), *c, *o))
        .collect();
    let results: Vec<(Complex64, Complex64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let y = mat_vec(mj, &grid.point(i));
            let mut arg = vec![0.0; y.len()];
            let mut acc = Complex64::new(0.0, 0.0);
            let mut shell = Complex64::new(0.0, 0.0);
            for (k, c, o) in &terms {
                for a in 0..y.len() {
                    arg[a] = y[a] + k[a];
                }
                let t = c * kernel.eval_complex(&arg);
                acc += t;
                if *o {
                    shell += t;
                }
            }
            (acc, shell)
        })
        .collect();
    let max_imag = results.iter().fold(0.0, |m: f64, v| m.max(v.0.im.abs()));
    let shell = results.iter().fold(0.0, |m: f64, v| m.max(v.1.norm()));
    (results.into_iter().map(|v| v.0.re).collect(), max_imag, shell)
}

/// Largest coefficient change when the quadrature is refined, on a fixed
/// sample of the lattice set.
/// Lattice sets up to this size have every coefficient recomputed for the drift.
const FULL_DRIFT_LIMIT: usize = 20_000;
const DRIFT_SAMPLES: usize = 4096;

fn quadrature_drift<F>(ks: &[Vec<i64>], cs: &[Complex64], mut recompute: F) -> Result<f64>
where
    F: FnMut(&[Vec<i64>]) -> Result<Vec<Complex64>>,
{
    if ks.is_empty() {
        return Ok(0.0);
    }
    let picks: Vec<usize> = if ks.len() <= FULL_DRIFT_LIMIT {
        (0..ks.len()).collect()
    } else {
        let largest = cs
            .iter()
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, c)| if c.norm() > best.1 { (i, c.norm()) } else { best },
            )
            .0;
        let mut picks: Vec<usize> = (0..DRIFT_SAMPLES)
            .map(|i| i * (ks.len() - 1) / (DRIFT_SAMPLES - 1))
            .collect();
        picks.push(largest);
        picks.sort_unstable();
        picks.dedup();
        picks
    };
    let sample: Vec<Vec<i64>> = picks.iter().map(|&i| ks[i].clone()).collect();
    let refined = recompute(&sample)?;
    Ok(picks
        .iter()
        .zip(&refined)
        .map(|(&i, r)| (cs[i] - r).norm())
        .fold(0.0, f64::max))
}

fn drop_small(ks: Vec<Vec<i64>>, cs: Vec<Complex64>, floor: f64) -> (Vec<Vec<i64>>, Vec<Complex64>, f64) {
    if floor <= 0.0 {
        return (ks, cs, 0.0);
    }
    let mut dropped = 0.0;
    let (ks, cs) = ks
        .into_iter()
        .zip(cs)
        .filter(|(_, c)| {
            let keep = c.norm() > floor;
            if !keep {
                dropped += c.norm();
            }
            keep
        })
        .unzip();
    (ks, cs, dropped)
}

/// Builds and evaluates the truncated series, growing the radius in
/// tail-tolerance mode.
///
/// The truncation estimate is the largest value on the grid of the partial
/// sum over cells lying more than `R/2` cell widths outside the window, that
/// is, the change between the radius-`R/2` and radius-`R` truncations.
#[allow(clippy::too_many_arguments)]
fn run_series<F, G>(
    m: &DilationMatrix,
    j: i32,
    grid: &EvalGrid,
    kernel: &Kernel,
    trunc: &TruncationPolicy,
    compute: F,
    refined: G,
) -> Result<OperatorOutput>
where
    F: Fn(&[Vec<i64>]) -> Result<Vec<Complex64>>,
    G: Fn(&[Vec<i64>]) -> Result<Vec<Complex64>>,
{
    trunc.validate()?;
    let (mut radius, target) = match trunc.mode {
        TruncationMode::Radius { radius } => (radius, None),
        TruncationMode::TailTol { tolerance } => (8.0, Some(tolerance)),
    };
    let minv = m.power(-j);
    let cell = crate::dilation::spectral_norm(&minv);
    let mj = m.power(j);
    loop {
        let ks = lattice_set(m, j, grid, radius, trunc.cap)?;
        let cs = compute(&ks)?;
        let (ks, cs, dropped) = drop_small(ks, cs, trunc.coefficient_floor);
        let outer: Vec<bool> = ks
            .iter()
            .map(|k| {
                let kf: Vec<f64> = k.iter().map(|&v| -(v as f64)).collect();
                outside_distance(&mat_vec(&minv, &kf), grid, cell) > radius / 2.0
            })
            .collect();
        let (values, max_imag, shell) = evaluate_series(grid, &mj, &ks, &cs, &outer, kernel);
        let truncation = shell + dropped * kernel.sup_bound();
        if let Some(tol) = target {
            if truncation > tol {
                radius *= 2.0;
                continue;
            }
        }
        let drift = quadrature_drift(&ks, &cs, &refined)?;
        return Ok(OperatorOutput {
            values: GridFunction::new(grid.clone(), values)?,
            budget: ErrorBudget {
                quadrature: drift * lebesgue_factor(kernel, radius),
                truncation,
                max_imag,
                lattice_points: ks.len(),
                radius,
            },
        });
    }
}

fn check_dims(expected: usize, dims: &[usize]) -> Result<()> {
    for &got in dims {
        if got != expected {
            return Err(Error::DimensionMismatch { expected, got });
        }
    }
    Ok(())
}

/// `Q_j f` on the grid.
#[allow(clippy::too_many_arguments)]
pub fn quasi_projection(
    f: &TestFunction,
    kernel: &Kernel,
    averager: &Averager,
    m: &DilationMatrix,
    j: u32,
    grid: &EvalGrid,
    trunc: &TruncationPolicy,
    q: &QuadratureSpec,
) -> Result<OperatorOutput> {
    check_dims(m.dim(), &[f.dim, kernel.dim(), averager.dim(), grid.dim()])?;
    let j = j as i32;
    let refined = q.refined();
    run_series(
        m,
        j,
        grid,
        kernel,
        trunc,
        |ks: &[Vec<i64>]| coefficients(f, averager, m, j, ks, q),
        |ks: &[Vec<i64>]| coefficients(f, averager, m, j, ks, &refined),
    )
}

/// `Q_j f` with `phi = phi~ = sinc`, coefficients from `f^`.
pub fn fourier_side_projection(
    f: &TestFunction,
    m: &DilationMatrix,
    j: u32,
    grid: &EvalGrid,
    trunc: &TruncationPolicy,
    q: &QuadratureSpec,
) -> Result<OperatorOutput> {
    if !f.has_fourier() {
        return Err(Error::Unsupported(format!("{} has no closed-form transform", f.id)));
    }
    let d = m.dim();
    quasi_projection(
        f,
        &Kernel::sinc(d),
        &Averager::sinc(d, SincPairing::Fourier),
        m,
        j,
        grid,
        trunc,
        q,
    )
}

/// Per-sample offsets for jitter experiments.
pub type Jitter<'a> = &'a (dyn Fn(i64) -> f64 + Sync);

/// Integer range `k` with `(k + 1/2) / w` in the window widened by `R / w`.
fn lattice_1d(w: f64, grid: &EvalGrid, radius: f64, cap: usize) -> Result<Vec<i64>> {
    let lo = (w * grid.lo()[0] - radius - 0.5).floor() as i64;
    let hi = (w * grid.hi()[0] + radius - 0.5).ceil() as i64;
    let count = (hi - lo + 1).max(0) as usize;
    if count > cap {
        return Err(Error::TruncationCapExceeded { required: count, cap });
    }
    Ok((lo..=hi).collect())
}

fn one_dim_series<F>(
    w: f64,
    kernel: &Kernel,
    grid: &EvalGrid,
    trunc: &TruncationPolicy,
    coefficient: F,
) -> Result<OperatorOutput>
where
    F: Fn(i64) -> Result<f64> + Sync,
{
    if grid.dim() != 1 || kernel.dim() != 1 {
        return Err(Error::Unsupported("one-dimensional operator".into()));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidParameter(format!("rate must be positive, got {w}")));
    }
    trunc.validate()?;
    let (mut radius, target) = match trunc.mode {
        TruncationMode::Radius { radius } => (radius, None),
        TruncationMode::TailTol { tolerance } => (8.0, Some(tolerance)),
    };
    loop {
        let ks = lattice_1d(w, grid, radius, trunc.cap)?;
        let cs: Vec<f64> = ks.par_iter().map(|&k| coefficient(k)).collect::<Result<_>>()?;
        let mut dropped = 0.0;
        let terms: Vec<(f64, f64, bool)> = ks
            .iter()
            .zip(&cs)
            .filter(|(_, c)| {
                let keep = trunc.coefficient_floor == 0.0 || c.abs() > trunc.coefficient_floor;
                if !keep {
                    dropped += c.abs();
                }
                keep
            })
            .map(|(&k, &c)| {
                let centre = (k as f64 + 0.5) / w;
                let out = (grid.lo()[0] - centre).max(centre - grid.hi()[0]).max(0.0) * w;
                (k as f64, c, out > radius / 2.0)
            })
            .collect();
        let sums: Vec<(f64, f64)> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.point(i)[0];
                let mut acc = 0.0;
                let mut shell = 0.0;
                for (k, c, o) in &terms {
                    let t = c * kernel.eval(&[w * x - k]);
                    acc += t;
                    if *o {
                        shell += t;
                    }
                }
                (acc, shell)
            })
            .collect();
        let truncation = sums.iter().fold(0.0, |m: f64, v| m.max(v.1.abs())) + dropped * kernel.sup_bound();
        if let Some(tol) = target {
            if truncation > tol {
                radius *= 2.0;
                continue;
            }
        }
        return Ok(OperatorOutput {
            values: GridFunction::new(grid.clone(), sums.into_iter().map(|v| v.0).collect())?,
            budget: ErrorBudget {
                quadrature: 0.0,
                truncation,
                max_imag: 0.0,
                lattice_points: terms.len(),
                radius,
            },
        });
    }
}

/// Mean of `f` over `[a, b]`, split at the breakpoints of `f`.
fn cell_mean(f: &TestFunction, a: f64, b: f64, q: &QuadratureSpec) -> Result<f64> {
    let rule = GaussRule::new(q.nodes_per_axis);
    let mut cuts = vec![a, b];
    cuts.extend(f.breakpoints(0).into_iter().filter(|&c| a < c && c < b));
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (nodes, weights) = rule.composite(seg[0], seg[1], q.subdivisions);
        for (x, wt) in nodes.iter().zip(&weights) {
            let v = f.eval(&[*x]);
            if !v.is_finite() {
                return Err(Error::EvaluationFailed(format!("signal returned {v} at {x}")));
            }
            total += v * wt;
        }
    }
    Ok(total / (b - a))
}

/// `K_w f` with cell averages over `[k/w, (k+1)/w]`, each cell optionally
/// displaced by `jitter(k)`.
pub fn kantorovich_1d(
    f: &TestFunction,
    w: f64,
    kernel: &Kernel,
    grid: &EvalGrid,
    trunc: &TruncationPolicy,
    q: &QuadratureSpec,
    jitter: Option<Jitter<'_>>,
) -> Result<OperatorOutput> {
    check_dims(1, &[f.dim])?;
    q.validate()?;
    let mut out = one_dim_series(w, kernel, grid, trunc, |k| {
        let e = jitter.map_or(0.0, |j| j(k));
        cell_mean(f, k as f64 / w + e, (k + 1) as f64 / w + e, q)
    })?;
    if let Some((amplitude, _)) = f.factors() {
        if amplitude == 0.0 {
            out.budget.truncation = 0.0;
        }
    }
    Ok(out)
}

/// `S_w f` with samples `f(k / w + jitter(k))`.
pub fn generalized_sampling(
    f: &TestFunction,
    w: f64,
    kernel: &Kernel,
    grid: &EvalGrid,
    trunc: &TruncationPolicy,
    jitter: Option<Jitter<'_>>,
) -> Result<OperatorOutput> {
    check_dims(1, &[f.dim])?;
    one_dim_series(w, kernel, grid, trunc, |k| {
        let e = jitter.map_or(0.0, |j| j(k));
        let x = k as f64 / w + e;
        let v = f.eval(&[x]);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::EvaluationFailed(format!("signal returned {v} at {x}")))
        }
    })
}

/// Alternating offsets `(-1)^{k+1} amplitude`.
pub fn alternating_jitter(amplitude: f64) -> impl Fn(i64) -> f64 + Sync {
    move |k| if k.rem_euclid(2) == 0 { -amplitude } else { amplitude }
}

/// Samples of `f` on the grid.
pub fn reference(grid: &EvalGrid, f: &TestFunction) -> GridFunction {
    GridFunction::sample(grid, f)
}

/// Largest pointwise difference between an output and `f`.
pub fn max_error(out: &OperatorOutput, f: &TestFunction) -> f64 {
    let grid = out.values.grid();
    out.values
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (v - f.eval(&grid.point(i))).abs())
        .fold(0.0, f64::max)
}
