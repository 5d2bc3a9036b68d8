//! Error norms, moduli of smoothness and convergence-order fits.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::TestFunction;
use crate::error::{Error, Result};
use crate::operators::{EvalGrid, GridFunction};
use crate::trig::binomial;

/// Riemann-sum `L_p` norm on the grid; `p = inf` gives the max norm.
pub fn lp_norm(g: &GridFunction, p: f64) -> f64 {
    norm_of(g.values().iter().copied(), g.grid().cell_measure(), p)
}

fn norm_of(values: impl Iterator<Item = f64>, cell: f64, p: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, |m, v| m.max(v.abs()))
    } else {
        (cell * values.map(|v| v.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need p in [1, inf], got {p}")))
    }
}

/// `||g1 - g2||_p` on a shared grid.
pub fn lp_distance(g1: &GridFunction, g2: &GridFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    if g1.grid() != g2.grid() {
        return Err(Error::GeometryMismatch("grids differ".into()));
    }
    Ok(norm_of(
        g1.values().iter().zip(g2.values()).map(|(a, b)| a - b),
        g1.grid().cell_measure(),
        p,
    ))
}

/// Finite set of steps `delta` over which the modulus supremum is sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSet {
    steps: Vec<Vec<f64>>,
}

impl DeltaSet {
    pub fn new(steps: Vec<Vec<f64>>) -> Self {
        Self { steps }
    }

    /// `radii` radii `h i / radii`, `i = 1..=radii`, along `directions` unit
    /// vectors (only the positive direction in one dimension).
    pub fn radial(dim: usize, h: f64, radii: usize, directions: usize) -> Self {
        let mut steps = Vec::new();
        for i in 1..=radii {
            let r = h * i as f64 / radii as f64;
            if dim == 1 {
                steps.push(vec![r]);
            } else {
                for t in 0..directions {
                    let th = 2.0 * PI * t as f64 / directions as f64;
                    let mut v = vec![0.0; dim];
                    v[0] = r * th.cos();
                    v[1] = r * th.sin();
                    steps.push(v);
                }
            }
        }
        Self { steps }
    }

    /// 16 radii, and 8 directions when `dim >= 2`.
    pub fn standard(dim: usize, h: f64) -> Self {
        Self::radial(dim, h, 16, 8)
    }

    pub fn steps(&self) -> &[Vec<f64>] {
        &self.steps
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .map(|s| s.iter().map(|v| v * lambda).collect())
                .collect(),
        }
    }

    /// Union of two sets.
    pub fn union(&self, other: &Self) -> Self {
        let mut steps = self.steps.clone();
        for s in &other.steps {
            if !steps.contains(s) {
                steps.push(s.clone());
            }
        }
        Self { steps }
    }
}

/// `Delta_delta^n f` sampled on the grid.
pub fn finite_difference(f: &TestFunction, n: u32, delta: &[f64], grid: &EvalGrid) -> Vec<f64> {
    let weights: Vec<f64> = (0..=n)
        .map(|nu| {
            let sign = if (n - nu).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(n, nu)
        })
        .collect();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            let mut y = x.clone();
            let mut acc = 0.0;
            for (nu, w) in weights.iter().enumerate() {
                for a in 0..x.len() {
                    y[a] = x[a] + nu as f64 * delta[a];
                }
                acc += w * f.eval(&y);
            }
            acc
        })
        .collect()
}

/// `max_{delta in set} ||Delta_delta^n f||_p` on the grid.
pub fn modulus_on_set(f: &TestFunction, n: u32, p: f64, grid: &EvalGrid, set: &DeltaSet) -> f64 {
    set.steps()
        .iter()
        .map(|d| norm_of(finite_difference(f, n, d, grid).into_iter(), grid.cell_measure(), p))
        .fold(0.0, f64::max)
}

/// Estimate of `omega_n(f, h)_p` on the grid's window using
/// [`DeltaSet::standard`].
pub fn modulus_of_smoothness(f: &TestFunction, n: u32, h: f64, p: f64, grid: &EvalGrid) -> Result<f64> {
    check_p(p)?;
    if n == 0 || !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and h > 0, got n = {n}, h = {h}"
        )));
    }
    if f.dim != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: f.dim,
        });
    }
    Ok(modulus_on_set(f, n, p, grid, &DeltaSet::standard(f.dim, h)))
}

/// Least-squares slope of `log2 error` against `log2 scale`, skipping rows
/// whose error is at or below `floor`.
pub fn fit_order(rows: &[(f64, f64)], floor: f64) -> Result<f64> {
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(s, e)| *s > 0.0 && *e > floor && *e > 0.0 && s.is_finite() && e.is_finite())
        .map(|(s, e)| (s.log2(), e.log2()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData { usable: usable.len() });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|r| r.0).sum::<f64>() / n;
    let my = usable.iter().map(|r| r.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|r| (r.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|r| (r.0 - mx) * (r.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { usable: 1 });
    }
    Ok(sxy / sxx)
}

/// Outcome of the modulus property checks on a shared step set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusReport {
    pub omega_f: f64,
    pub omega_g: f64,
    pub omega_sum: f64,
    /// `2^n max_{delta, nu} ||f(. + nu delta)||_p`.
    pub norm_bound: f64,
    pub omega_scaled: f64,
    pub lambda: f64,
    pub subadditive: bool,
    pub bounded: bool,
    pub dilation_ok: bool,
}

impl ModulusReport {
    pub fn passed(&self) -> bool {
        self.subadditive && self.bounded && self.dilation_ok
    }

    /// `omega_n(f, lambda h) / omega_n(f, h)`.
    pub fn dilation_ratio(&self) -> f64 {
        self.omega_scaled / self.omega_f
    }
}

/// Relative slack for comparisons that hold exactly in exact arithmetic.
const ROUNDING: f64 = 1e-12;

/// Checks subadditivity, the `2^n ||f||` bound and
/// `omega_n(f, lambda h) <= (1 + lambda)^n omega_n(f, h)`.
///
/// The scaled modulus is sampled on the base set widened by `lambda` merged
/// with the base set itself, so `lambda = 1` compares a set with itself.
pub fn modulus_properties_check(
    f: &TestFunction,
    g: &TestFunction,
    n: u32,
    h: f64,
    lambda: f64,
    p: f64,
    grid: &EvalGrid,
) -> Result<ModulusReport> {
    check_p(p)?;
    if !(lambda >= 1.0) {
        return Err(Error::InvalidParameter(format!("need lambda >= 1, got {lambda}")));
    }
    let set = DeltaSet::standard(f.dim, h);
    let sum = TestFunction::combine(1.0, f, 1.0, g);
    let omega_f = modulus_on_set(f, n, p, grid, &set);
    let omega_g = modulus_on_set(g, n, p, grid, &set);
    let omega_sum = modulus_on_set(&sum, n, p, grid, &set);

    let cell = grid.cell_measure();
    let mut shifted_max: f64 = 0.0;
    for delta in set.steps() {
        for nu in 0..=n {
            let values = (0..grid.len()).map(|i| {
                let x: Vec<f64> = grid
                    .point(i)
                    .iter()
                    .zip(delta)
                    .map(|(a, d)| a + nu as f64 * d)
                    .collect();
                f.eval(&x)
            });
            shifted_max = shifted_max.max(norm_of(values, cell, p));
        }
    }
    let norm_bound = 2f64.powi(n as i32) * shifted_max;

    let scaled_set = set.union(&set.scaled(lambda));
    let omega_scaled = modulus_on_set(f, n, p, grid, &scaled_set);
    let slack = (1.0 + lambda).powi(n as i32);

    Ok(ModulusReport {
        omega_f,
        omega_g,
        omega_sum,
        norm_bound,
        omega_scaled,
        lambda,
        subadditive: omega_sum <= (omega_f + omega_g) * (1.0 + ROUNDING) + f64::MIN_POSITIVE,
        bounded: omega_f <= norm_bound * (1.0 + ROUNDING) + f64::MIN_POSITIVE,
        dilation_ok: omega_scaled <= slack * omega_f * (1.0 + ROUNDING) + f64::MIN_POSITIVE,
    })
}

/// One level of a convergence run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub j: u32,
    /// `||M^{-j}||`.
    pub scale: f64,
    pub error: f64,
    /// `error_{j-1} / error_j`.
    pub ratio: Option<f64>,
    /// `omega_n(f, ||M^{-j}||)_p` estimate.
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: f64,
    /// `max_j error_j / modulus_j`.
    pub constant_c: f64,
    /// `min_j error_j / modulus_j`.
    pub constant_min: f64,
    /// Rows with error at or below this were excluded from the fit.
    pub budget: f64,
}

impl ConvergenceReport {
    /// Fills in ratios, fits the order and measures the rate constant.
    /// `levels` holds `(j, scale, error, modulus)` in increasing `j`.
    pub fn from_levels(levels: &[(u32, f64, f64, f64)], budget: f64) -> Result<Self> {
        if levels.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter(
                "levels must be strictly increasing in j".into(),
            ));
        }
        if levels.iter().any(|l| !(l.2 >= 0.0)) {
            return Err(Error::InvalidParameter("errors must be non-negative".into()));
        }
        let rows: Vec<ConvergenceRow> = levels
            .iter()
            .enumerate()
            .map(|(i, &(j, scale, error, modulus))| ConvergenceRow {
                j,
                scale,
                error,
                ratio: if i == 0 { None } else { Some(levels[i - 1].2 / error) },
                modulus,
            })
            .collect();
        let fit_rows: Vec<(f64, f64)> = rows.iter().map(|r| (r.scale, r.error)).collect();
        let fitted_order = fit_order(&fit_rows, budget)?;
        let ratios: Vec<f64> = rows
            .iter()
            .filter(|r| r.modulus > 0.0 && r.error > budget)
            .map(|r| r.error / r.modulus)
            .collect();
        let constant_c = ratios.iter().copied().fold(0.0, f64::max);
        let constant_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            rows,
            fitted_order,
            constant_c,
            constant_min,
            budget,
        })
    }

    /// `max C / min C` across levels; a single constant fits every level when
    /// this stays bounded.
    pub fn constant_spread(&self) -> f64 {
        self.constant_c / self.constant_min
    }

    pub const CSV_COLUMNS: &'static str = "j,scale,error,ratio,modulus";

    /// CSV with a `#` comment block, a header row and one line per level.
    /// Numbers use the shortest representation that round-trips.
    pub fn to_csv(&self, header: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{}", Self::CSV_COLUMNS);
        for r in &self.rows {
            let ratio = r.ratio.map(|v| format!("{v}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.j, r.scale, r.error, ratio, r.modulus);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn constant_grid(a: f64, b: f64, n: usize, v: f64) -> GridFunction {
        let g = EvalGrid::interval(a, b, n).unwrap();
        GridFunction::new(g, vec![v; n]).unwrap()
    }

    #[test]
    fn lp_examples() {
        let one = constant_grid(0.0, 1.0, 100, 1.0);
        let zero = constant_grid(0.0, 1.0, 100, 0.0);
        assert_eq!(lp_distance(&one, &one, 2.0).unwrap(), 0.0);
        assert_relative_eq!(lp_distance(&one, &zero, 2.0).unwrap(), 1.0, epsilon = 1e-14);
        let one2 = constant_grid(0.0, 2.0, 100, 1.0);
        let zero2 = constant_grid(0.0, 2.0, 100, 0.0);
        assert_relative_eq!(lp_distance(&one2, &zero2, 1.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(lp_distance(&one2, &zero2, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_distance(&one, &zero2, 2.0).is_err());
        assert!(lp_distance(&one, &zero, 0.5).is_err());
    }

    #[test]
    fn affine_second_difference_vanishes() {
        let f = TestFunction::affine(2.0, -1.0);
        let grid = EvalGrid::interval(0.0, 1.0, 50).unwrap();
        let w = modulus_of_smoothness(&f, 2, 0.1, 2.0, &grid).unwrap();
        assert!(w < 1e-13);
    }

    #[test]
    fn indicator_first_modulus() {
        let f = TestFunction::indicator();
        let grid = EvalGrid::interval(-1.0, 2.0, 3 * 4096).unwrap();
        let h = 1.0 / 16.0;
        let w = modulus_of_smoothness(&f, 1, h, 2.0, &grid).unwrap();
        assert!((w - (2.0 * h).sqrt()).abs() < 0.01, "{w}");
    }

    #[test]
    fn fit_order_examples() {
        let exact: Vec<(f64, f64)> = (1..8).map(|j| (2f64.powi(-j), 2f64.powi(-4 * j))).collect();
        assert!((fit_order(&exact, 0.0).unwrap() - 4.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (1..8).map(|j| (2f64.powi(-j), 3.0)).collect();
        assert!(fit_order(&flat, 0.0).unwrap().abs() < 1e-12);
        assert!(matches!(
            fit_order(&exact[..2], 0.0),
            Err(Error::InsufficientData { usable: 2 })
        ));
        // rows below the floor are dropped
        let mut noisy = exact.clone();
        noisy.push((2f64.powi(-9), 1e-20));
        assert!((fit_order(&noisy, 1e-15).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_properties_hold() {
        let grid = EvalGrid::interval(-3.0, 3.0, 600).unwrap();
        let g = TestFunction::gaussian(1);
        let r = modulus_properties_check(&g, &g, 2, 0.1, 1.0, 2.0, &grid).unwrap();
        assert!(r.passed());
        assert_relative_eq!(r.omega_scaled, r.omega_f);
        let ind = TestFunction::indicator();
        let fine = EvalGrid::interval(-1.0, 2.0, 3 * 2048).unwrap();
        let r = modulus_properties_check(&ind, &g, 1, 1.0 / 32.0, 2.0, 2.0, &fine).unwrap();
        assert!(r.passed());
        assert!(r.dilation_ratio() <= 3.0);
        assert!((r.dilation_ratio() - 2f64.sqrt()).abs() < 0.05);
    }

    #[test]
    fn gaussian_modulus_saturates() {
        let f = TestFunction::gaussian(1);
        let grid = EvalGrid::interval(-4.0, 4.0, 800).unwrap();
        for n in [1u32, 2, 4] {
            let ratios: Vec<f64> = (3..=7)
                .map(|j| {
                    let h = 2f64.powi(-j);
                    modulus_of_smoothness(&f, n, h, 2.0, &grid).unwrap() / h.powi(n as i32)
                })
                .collect();
            let (lo, hi) = ratios
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
            assert!(lo > 0.0 && hi / lo < 1.5, "n = {n}: {ratios:?}");
        }
    }

    #[test]
    fn report_csv_layout() {
        let levels = [
            (3u32, 0.125, 1e-2, 0.1),
            (4, 0.0625, 2.5e-3, 0.05),
            (5, 0.03125, 6.25e-4, 0.025),
        ];
        let r = ConvergenceReport::from_levels(&levels, 0.0).unwrap();
        assert!((r.fitted_order - 2.0).abs() < 1e-12);
        assert_eq!(r.rows[1].ratio, Some(4.0));
        let csv = r.to_csv(&[("function".into(), "gaussian".into())]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# function = gaussian");
        assert_eq!(lines[1], ConvergenceReport::CSV_COLUMNS);
        assert_eq!(lines[2], "3,0.125,0.01,,0.1");
        assert_eq!(lines[3], "4,0.0625,0.0025,4,0.05");
        assert!(ConvergenceReport::from_levels(&[levels[1], levels[0], levels[2]], 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn power_laws_are_recovered(order in -1.0f64..6.0, c in 0.01f64..100.0, base in 1.5f64..4.0) {
            let rows: Vec<(f64, f64)> = (1..7).map(|j| {
                let s = base.powi(-j);
                (s, c * s.powf(order))
            }).collect();
            prop_assert!((fit_order(&rows, 0.0).unwrap() - order).abs() < 1e-12);
        }

        #[test]
        fn modulus_monotone_on_refinement_chain(h in 0.02f64..0.3) {
            let f = TestFunction::cusp();
            let grid = EvalGrid::interval(-2.0, 2.0, 400).unwrap();
            let small = DeltaSet::standard(1, h);
            let large = small.union(&DeltaSet::standard(1, 2.0 * h));
            for n in [1u32, 2] {
                prop_assert!(modulus_on_set(&f, n, 2.0, &grid, &small) <= modulus_on_set(&f, n, 2.0, &grid, &large));
            }
        }
    }
}
