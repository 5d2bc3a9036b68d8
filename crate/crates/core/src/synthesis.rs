//! Synthesis of kernels and averagers of prescribed approximation order.
//!
//! A pair `(phi, phi~)` has approximation order `n` when every derivative
//! `D^beta (1 - phi^ conj(phi~^))(0)` with `[beta] < n` vanishes. Given an
//! averager, [`synthesize_kernel`] builds a sinc combination
//! `phi(x) = sum_l a_l sinc(x + l)` whose symbol `T(xi)` fixes the low-order
//! Taylor coefficients; [`solve_q`] does the dual construction, correcting the
//! averager with a shifted combination for a given kernel.
//!
//! Two derivative routes exist on purpose. Synthesis reads closed-form Taylor
//! series of the symbols ([`Symbol::taylor_table`]); the defect certificate
//! [`moment_defect`] reads moment integrals computed by quadrature (averagers)
//! or finite differences (radial kernels), so a mistake in one route is not
//! reproduced by the other.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernels::{leibniz, Averager, AveragerKind, Kernel, KernelKind, Symbol};
use crate::quadrature::GaussRule;
use crate::trig::{index_leq, multi_binomial, multi_indices, total_degree, two_pi_i_pow, MultiIndex, TrigPolynomial};

/// Orders above this are rejected by [`make_g`].
pub const MAX_ORDER: usize = 8;

/// A synthesized pair must have moment defect below this.
pub const DEFECT_TOL: f64 = 1e-8;

/// Residual bound for the Vandermonde solve in [`make_g`].
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Coefficients `c_alpha` indexed by multi-index.
pub type CoeffMap = BTreeMap<MultiIndex, Complex64>;

/// Derivatives `D^alpha S(0)` of a symbol for all `[alpha] < order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    dim: usize,
    order: usize,
    entries: BTreeMap<MultiIndex, Complex64>,
}

impl MomentTable {
    pub fn from_fn<F>(dim: usize, order: usize, mut f: F) -> Self
    where
        F: FnMut(&[u32]) -> Complex64,
    {
        let entries = multi_indices(dim, order)
            .into_iter()
            .map(|alpha| {
                let v = f(&alpha);
                (alpha, v)
            })
            .collect();
        Self { dim, order, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at `alpha`; zero outside the table.
    pub fn get(&self, alpha: &[u32]) -> Complex64 {
        self.entries.get(alpha).copied().unwrap_or_default()
    }

    pub fn indices(&self) -> impl Iterator<Item = &MultiIndex> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.entries.iter()
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.conj())).collect(),
        }
    }

    /// Table of the product of the two symbols (Leibniz rule).
    pub fn product(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Self::from_fn(self.dim, order, |beta| leibniz(self, other, beta))
    }

    /// Truncates to a lower order.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            dim: self.dim,
            order,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| (total_degree(k) as usize) < order)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Largest modulus among odd-order entries.
    pub fn max_odd(&self) -> f64 {
        self.entries
            .iter()
            .filter(|(k, _)| total_degree(k) % 2 == 1)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

// g_k --------------------------------------------------------------------

/// The univariate trigonometric polynomial `g_k` with exponents
/// `{0, .., n-1}` and `g_k^{(m)}(0) = delta_{km}` for `m < n`.
///
/// Writing `g_k(t) = sum_l a_l e^{2 pi i l t}`, the conditions read
/// `sum_l a_l l^m = delta_{km} / (2 pi i)^k`: an integer Vandermonde system,
/// solved exactly over the rationals.
pub fn make_g(k: usize, n: usize) -> Result<TrigPolynomial> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "order must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!("need k < n, got k = {k}, n = {n}")));
    }
    let rational = solve_vandermonde_exact(n, k);
    let scale = Complex64::new(0.0, 2.0 * std::f64::consts::PI).powi(-(k as i32));
    let coeffs: Vec<Complex64> = rational.iter().map(|r| scale * ratio_to_f64(r)).collect();

    let mut worst: f64 = 0.0;
    for m in 0..n as u32 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (l, a) in coeffs.iter().enumerate() {
            let term = a * two_pi_i_pow(l as f64, m);
            magnitude += term.norm();
            sum += term;
        }
        let target = if m as usize == k { 1.0 } else { 0.0 };
        worst = worst.max((sum - target).norm() / magnitude.max(1.0));
    }
    if worst > SOLVE_RESIDUAL_TOL {
        return Err(Error::IllConditioned {
            residual: worst,
            tolerance: SOLVE_RESIDUAL_TOL,
        });
    }

    TrigPolynomial::from_terms(
        1,
        coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(l, a)| (vec![l as i64], a)),
    )
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Solves `sum_l x_l l^m = delta_{km}`, `m, l < n`, by exact elimination.
fn solve_vandermonde_exact(n: usize, k: usize) -> Vec<BigRational> {
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|m| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|l| BigRational::from_integer(BigInt::from(l).pow(m as u32)))
                .collect();
            row.push(if m == k {
                BigRational::one()
            } else {
                BigRational::zero()
            });
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Vandermonde matrix with distinct nodes is invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v = &*v - &factor * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

// moment tables --------------------------------------------------------

/// Finite-difference settings for [`fd_moment_table`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    /// Coarsest step for orders up to 4; each level halves it. Higher orders
    /// double it once per extra order, kept below `1 / [alpha]`.
    pub coarse_step: f64,
    /// Number of halvings (Richardson levels).
    pub levels: usize,
    /// Allowed disagreement between the last two extrapolants, relative to
    /// `max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            coarse_step: 1.0 / 8.0,
            levels: 3,
            tolerance: 1e-5,
        }
    }
}

/// Derivatives at the origin by nested central differences with Richardson
/// extrapolation.
pub fn fd_moment_table(symbol: &dyn Symbol, n: usize) -> Result<MomentTable> {
    fd_moment_table_with(symbol, n, FdConfig::default())
}

pub fn fd_moment_table_with(symbol: &dyn Symbol, n: usize, cfg: FdConfig) -> Result<MomentTable> {
    if !symbol.smooth_at_origin() {
        return Err(Error::NonSmoothSymbol(
            "finite differences need a symbol smooth near the origin".into(),
        ));
    }
    let dim = symbol.dim();
    let mut entries = BTreeMap::new();
    for alpha in multi_indices(dim, n) {
        let v = richardson_derivative(symbol, &alpha, cfg)?;
        entries.insert(alpha, v);
    }
    Ok(MomentTable { dim, order: n, entries })
}

fn central_difference(symbol: &dyn Symbol, alpha: &[u32], h: f64) -> Complex64 {
    let dim = alpha.len();
    if total_degree(alpha) == 0 {
        return symbol.symbol(&vec![0.0; dim]);
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut counters = vec![0u32; dim];
    let mut point = vec![0.0; dim];
    loop {
        let mut weight = 1.0;
        for v in 0..dim {
            let k = alpha[v];
            let i = counters[v];
            weight *= crate::trig::binomial(k, i) * if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            point[v] = (k as f64 / 2.0 - i as f64) * h;
        }
        total += symbol.symbol(&point) * weight;

        let mut axis = 0;
        loop {
            if axis == dim {
                return total / h.powi(total_degree(alpha) as i32);
            }
            counters[axis] += 1;
            if counters[axis] <= alpha[axis] {
                break;
            }
            counters[axis] = 0;
            axis += 1;
        }
    }
}

fn richardson_derivative(symbol: &dyn Symbol, alpha: &[u32], cfg: FdConfig) -> Result<Complex64> {
    if total_degree(alpha) == 0 {
        return Ok(symbol.symbol(&vec![0.0; alpha.len()]));
    }
    let levels = cfg.levels.max(1);
    let order = total_degree(alpha) as i32;
    let coarse = (cfg.coarse_step * 2f64.powi((order - 4).max(0))).min(1.0 / order as f64);
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels + 1);
    for i in 0..=levels {
        let h = coarse / 2f64.powi(i as i32);
        let mut row = vec![central_difference(symbol, alpha, h)];
        for k in 1..=i {
            let factor = 4f64.powi(k as i32) - 1.0;
            let improved = row[k - 1] + (row[k - 1] - table[i - 1][k - 1]) / factor;
            row.push(improved);
        }
        table.push(row);
    }
    let best = table[levels][levels];
    let previous = table[levels][levels - 1];
    let disagreement = (best - previous).norm();
    if disagreement > cfg.tolerance * best.norm().max(1.0) {
        return Err(Error::NonConvergence { disagreement });
    }
    Ok(best)
}

/// Closed-form table when the symbol has one, finite differences otherwise.
pub fn moment_table(symbol: &dyn Symbol, n: usize) -> Result<MomentTable> {
    match symbol.taylor_table(n) {
        Some(t) => Ok(t),
        None => fd_moment_table(symbol, n),
    }
}

// oracle route -----------------------------------------------------------

/// Derivative table of an averager symbol from its moment integrals
/// `D^alpha phi~^(0) = int (-2 pi i x)^alpha phi~(x) dx`, evaluated by
/// Gauss quadrature over the support.
pub fn averager_moments_by_quadrature(a: &Averager, n: usize) -> Result<MomentTable> {
    let dim = a.dim();
    match a.kind() {
        AveragerKind::Box { lo, hi } => {
            let rule = GaussRule::new(n.max(2) + 4);
            let axis_moments: Vec<Vec<Complex64>> = lo
                .iter()
                .zip(hi)
                .map(|(&l, &h)| {
                    let (nodes, weights) = rule.mapped(l, h);
                    (0..n as u32)
                        .map(|k| {
                            let s: Complex64 = nodes
                                .iter()
                                .zip(&weights)
                                .map(|(&x, &w)| Complex64::new(0.0, -2.0 * std::f64::consts::PI * x).powu(k) * w)
                                .sum();
                            s / (h - l)
                        })
                        .collect()
                })
                .collect();
            Ok(MomentTable::from_fn(dim, n, |alpha| {
                alpha
                    .iter()
                    .enumerate()
                    .map(|(axis, &k)| axis_moments[axis][k as usize])
                    .product()
            }))
        }
        AveragerKind::Ball { radius } => {
            // polar grid, Gauss-Legendre in s = r^2 (r dr = ds / 2), trapezoid in angle
            let rule = GaussRule::new(n.max(2) + 4);
            let (s_nodes, s_weights) = rule.mapped(0.0, radius * radius);
            let angles = 4 * n + 16;
            let area = std::f64::consts::PI * radius * radius;
            Ok(MomentTable::from_fn(dim, n, |alpha| {
                let mut sum = Complex64::new(0.0, 0.0);
                for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
                    let r = s.sqrt();
                    for t in 0..angles {
                        let theta = 2.0 * std::f64::consts::PI * t as f64 / angles as f64;
                        let x = [r * theta.cos(), r * theta.sin()];
                        let mono = alpha.iter().zip(&x).fold(Complex64::new(1.0, 0.0), |acc, (&k, &xv)| {
                            acc * Complex64::new(0.0, -2.0 * std::f64::consts::PI * xv).powu(k)
                        });
                        sum += mono * (ws / 2.0) * (2.0 * std::f64::consts::PI / angles as f64);
                    }
                }
                sum / area
            }))
        }
        AveragerKind::ShiftedCombo { base, coeffs } => {
            let base_table = averager_moments_by_quadrature(base, n)?;
            let trig = MomentTable::from_fn(dim, n, |alpha| coeffs.derivative_at_zero(alpha));
            Ok(trig.product(&base_table))
        }
        AveragerKind::Sinc { .. } => fd_moment_table(a, n),
    }
}

/// Derivative table of a kernel symbol along the oracle route: direct sums
/// over the final sinc coefficients, finite differences for radial kernels.
pub fn kernel_moments_oracle(k: &Kernel, n: usize) -> Result<MomentTable> {
    match k.kind() {
        KernelKind::SincCombo { symbol } => Ok(MomentTable::from_fn(k.dim(), n, |alpha| {
            symbol.derivative_at_zero(alpha)
        })),
        KernelKind::SincSquared { .. } => Err(Error::NonSmoothSymbol(
            "the sinc^2 symbol has a kink at the origin".into(),
        )),
        KernelKind::BochnerRiesz { .. } => fd_moment_table(k, n),
    }
}

/// `max_{[beta] < n} |D^beta (1 - phi^ conj(phi~^))(0)|`.
pub fn moment_defect(kernel: &Kernel, averager: &Averager, n: usize) -> Result<f64> {
    if kernel.dim() != averager.dim() {
        return Err(Error::DimensionMismatch {
            expected: kernel.dim(),
            got: averager.dim(),
        });
    }
    let phi = kernel_moments_oracle(kernel, n)?;
    let avg = averager_moments_by_quadrature(averager, n)?.conj();
    Ok(defect_from_tables(&phi, &avg))
}

/// Defect of a product symbol given the tables of both factors (second one
/// already conjugated).
pub fn defect_from_tables(a: &MomentTable, b_conj: &MomentTable) -> f64 {
    let product = a.product(b_conj);
    product
        .iter()
        .map(|(beta, v)| {
            let target = if total_degree(beta) == 0 { 1.0 } else { 0.0 };
            (Complex64::new(target, 0.0) - v).norm()
        })
        .fold(0.0, f64::max)
}

// T and Q ---------------------------------------------------------------

/// Solves `sum_{alpha <= beta} binom(beta, alpha) m_{beta - alpha} c_alpha = rhs_beta`
/// in graded order, where `m` is the given table.
fn solve_triangular<F>(table: &MomentTable, n: usize, mut rhs: F) -> Result<CoeffMap>
where
    F: FnMut(&[u32]) -> Complex64,
{
    let dim = table.dim();
    if table.order() < n {
        return Err(Error::InvalidParameter(format!(
            "moment table of order {} cannot determine order {n}",
            table.order()
        )));
    }
    let zero = vec![0u32; dim];
    let lead = table.get(&zero);
    if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "symbol must equal 1 at the origin, got {lead}"
        )));
    }
    let mut c = CoeffMap::new();
    for beta in multi_indices(dim, n) {
        let mut acc = rhs(&beta);
        for (alpha, value) in &c {
            if index_leq(alpha, &beta) {
                let rest: Vec<u32> = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
                acc -= table.get(&rest) * value * multi_binomial(&beta, alpha);
            }
        }
        c.insert(beta, acc / lead);
    }
    Ok(c)
}

/// Coefficients `c_alpha`, `[alpha] < n`, with `c_0 = 1` and
/// `sum_{alpha <= beta} binom(beta, alpha) conj(D^{beta-alpha} phi~^(0)) c_alpha = 0`
/// for `0 < [beta] < n`.
pub fn solve_t(averager_table: &MomentTable, n: usize) -> Result<CoeffMap> {
    let conj = averager_table.conj();
    solve_triangular(&conj, n, unit_at_zero)
}

fn unit_at_zero(beta: &[u32]) -> Complex64 {
    Complex64::new(if total_degree(beta) == 0 { 1.0 } else { 0.0 }, 0.0)
}

/// `T(xi) = sum_{[alpha] < n} c_alpha prod_v g_{alpha_v}(xi_v)`, with every `g`
/// built for order `n`. Verifies `D^alpha T(0) = c_alpha`.
pub fn assemble_t(c: &CoeffMap, n: usize, dim: usize) -> Result<TrigPolynomial> {
    let gs: Vec<TrigPolynomial> = (0..n).map(|k| make_g(k, n)).collect::<Result<_>>()?;
    let mut t = TrigPolynomial::zero(dim);
    for (alpha, &coef) in c {
        if alpha.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: alpha.len(),
            });
        }
        if total_degree(alpha) as usize >= n {
            return Err(Error::InvalidParameter(format!(
                "multi-index {alpha:?} exceeds order {n}"
            )));
        }
        if coef.norm() == 0.0 {
            continue;
        }
        let term = alpha
            .iter()
            .enumerate()
            .fold(TrigPolynomial::constant(dim, coef), |acc, (axis, &k)| {
                acc.mul(&gs[k as usize].embed(axis, dim))
            });
        t = t.add(&term);
    }
    let t = t.pruned(0.0);

    for alpha in multi_indices(dim, n) {
        let want = c.get(&alpha).copied().unwrap_or_default();
        let got = t.derivative_at_zero(&alpha);
        let scale = t.abs_sum() * (2.0 * std::f64::consts::PI * n as f64).powi(total_degree(&alpha) as i32);
        if (want - got).norm() > 1e-12 * scale.max(1.0) {
            return Err(Error::IllConditioned {
                residual: (want - got).norm(),
                tolerance: 1e-12 * scale.max(1.0),
            });
        }
    }
    Ok(t)
}

/// Sinc combination of order `n` for the averager.
pub fn synthesize_kernel(averager: &Averager, n: usize) -> Result<Kernel> {
    let table = moment_table(averager, n)?;
    let c = solve_t(&table, n)?;
    let t = assemble_t(&c, n, averager.dim())?;
    let kernel = Kernel::sinc_combo(t);
    let defect = moment_defect(&kernel, averager, n)?;
    if defect > DEFECT_TOL {
        return Err(Error::DefectCheckFailed {
            defect,
            tolerance: DEFECT_TOL,
            order: n,
        });
    }
    Ok(kernel)
}

/// The correcting polynomial `Q` for a kernel/averager pair.
///
/// First `c'` with `c'_0 = 1` and
/// `sum binom(beta, alpha) conj(D^{beta-alpha} phi^(0)) c'_alpha = 0`, then `c`
/// with `c_0 = 1` and `sum binom(beta, alpha) D^{beta-alpha} phi~^(0) c_alpha = c'_beta`.
/// The result satisfies `conj(phi^) Q phi~^ = 1 + O(|xi|^n)`, i.e. the
/// averager `sum_l b_l phi~(x + l)` has order `n` with `phi`.
pub fn solve_q(kernel_table: &MomentTable, averager_table: &MomentTable, n: usize) -> Result<TrigPolynomial> {
    if kernel_table.dim() != averager_table.dim() {
        return Err(Error::DimensionMismatch {
            expected: kernel_table.dim(),
            got: averager_table.dim(),
        });
    }
    let c_prime = solve_triangular(&kernel_table.conj(), n, unit_at_zero)?;
    let c = solve_triangular(averager_table, n, |beta| c_prime.get(beta).copied().unwrap_or_default())?;
    // c_0 = c'_0 = 1 by construction
    assemble_t(&c, n, kernel_table.dim())
}

/// Shifted-combination averager of order `n` for `kernel`.
pub fn synthesize_averager(kernel: &Kernel, averager: &Averager, n: usize) -> Result<Averager> {
    let kt = moment_table(kernel, n)?;
    let at = moment_table(averager, n)?;
    let q = solve_q(&kt, &at, n)?;
    let combo = Averager::shifted_combo(averager.clone(), q)?;
    let defect = moment_defect(kernel, &combo, n)?;
    if defect > DEFECT_TOL {
        return Err(Error::DefectCheckFailed {
            defect,
            tolerance: DEFECT_TOL,
            order: n,
        });
    }
    Ok(combo)
}

// strict compatibility ---------------------------------------------------

/// Points per axis for the compatibility grids.
pub const COMPAT_GRID: usize = 64;
pub const COMPAT_TOL: f64 = 1e-10;

/// Checks `conj(phi^) phi~^ = 1` on `{|xi| < delta}` and `phi^ = 0` on
/// `{|xi - l| < delta}` for the `3^d - 1` nearest nonzero lattice points.
pub fn check_strict_compatibility(kernel: &Kernel, other: &dyn Symbol, delta: f64) -> Result<bool> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("need 0 < delta < 1/2, got {delta}")));
    }
    let dim = kernel.dim();
    if other.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: other.dim(),
        });
    }
    let offsets = ball_grid(dim, delta);
    let unit = offsets.iter().all(|eta| {
        let v = kernel.fourier(eta).conj() * other.symbol(eta);
        (v - Complex64::new(1.0, 0.0)).norm() <= COMPAT_TOL
    });
    if !unit {
        return Ok(false);
    }
    for l in neighbour_lattice(dim) {
        for eta in &offsets {
            let xi: Vec<f64> = l.iter().zip(eta).map(|(&lv, e)| lv as f64 + e).collect();
            if kernel.fourier(&xi).norm() > COMPAT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ball_grid(dim: usize, delta: f64) -> Vec<Vec<f64>> {
    let step = 2.0 * delta / COMPAT_GRID as f64;
    let axis: Vec<f64> = (0..COMPAT_GRID).map(|i| -delta + (i as f64 + 0.5) * step).collect();
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.iter().map(|v| v * v).sum::<f64>() < delta * delta);
    out
}

fn neighbour_lattice(dim: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                [-1i64, 0, 1].into_iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| p.iter().any(|&v| v != 0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::SincPairing;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn real(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn g_constant() {
        let g = make_g(0, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.coefficient(&[0]), real(1.0));
    }

    #[test]
    fn g_two_of_four_matches_table() {
        let g = make_g(2, 4).unwrap();
        let s = -1.0 / (8.0 * PI * PI);
        for (l, v) in [(0, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)] {
            let a = g.coefficient(&[l]);
            assert_relative_eq!(a.re, s * v, epsilon = 1e-16);
            assert!(a.im.abs() < 1e-18);
        }
    }

    #[test]
    fn g_one_of_two() {
        // g(0) = 0, g'(0) = 1: a0 + a1 = 0, 2 pi i a1 = 1
        let g = make_g(1, 2).unwrap();
        let expected = Complex64::new(0.0, 2.0 * PI).inv();
        assert!((g.coefficient(&[0]) + expected).norm() < 1e-16);
        assert!((g.coefficient(&[1]) - expected).norm() < 1e-16);
    }

    #[test]
    fn g_rejects_bad_orders() {
        assert!(make_g(0, 9).is_err());
        assert!(make_g(3, 3).is_err());
        assert!(make_g(7, 8).is_ok());
    }

    #[test]
    fn g_round_trip_through_finite_differences() {
        // derivative table of g_k by finite differences is delta_{k.}
        struct G(TrigPolynomial);
        impl Symbol for G {
            fn dim(&self) -> usize {
                1
            }
            fn symbol(&self, xi: &[f64]) -> Complex64 {
                self.0.eval(xi)
            }
        }
        for n in 1..=6 {
            for k in 0..n {
                let g = make_g(k, n).unwrap();
                // direct derivative sums
                for m in 0..n as u32 {
                    let want = if m as usize == k { 1.0 } else { 0.0 };
                    assert!((g.derivative_at_zero(&[m]) - real(want)).norm() < 1e-9);
                }
                if n <= 3 {
                    let table = fd_moment_table_with(
                        &G(g),
                        n,
                        FdConfig {
                            coarse_step: 1.0 / 64.0,
                            levels: 2,
                            tolerance: 1e-4,
                        },
                    )
                    .unwrap();
                    for m in 0..n as u32 {
                        let want = if m as usize == k { 1.0 } else { 0.0 };
                        assert!((table.get(&[m]) - real(want)).norm() < 1e-6, "n={n} k={k} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn box_moments_by_finite_differences() {
        let table = fd_moment_table(&Averager::unit_box(1), 4).unwrap();
        assert_relative_eq!(table.get(&[0]).re, 1.0, epsilon = 1e-14);
        assert!(table.get(&[1]).norm() < 1e-12);
        assert_relative_eq!(table.get(&[2]).re, -PI * PI / 3.0, epsilon = 1e-8);
        assert!(table.get(&[3]).norm() < 1e-9);
    }

    #[test]
    fn ball_moments_three_routes_agree() {
        let ball = Averager::ball(2, 1.0).unwrap();
        let fd = fd_moment_table(&ball, 4).unwrap();
        let series = ball.taylor_table(4).unwrap();
        let quad = averager_moments_by_quadrature(&ball, 4).unwrap();
        for alpha in multi_indices(2, 4) {
            let s = series.get(&alpha);
            assert!((fd.get(&alpha) - s).norm() < 1e-7, "{alpha:?}");
            assert!((quad.get(&alpha) - s).norm() < 1e-11, "{alpha:?}");
        }
        assert_relative_eq!(series.get(&[2, 0]).re, -PI * PI, epsilon = 1e-12);
        assert_relative_eq!(series.get(&[0, 2]).re, -PI * PI, epsilon = 1e-12);
        assert!(series.max_odd() < 1e-9);
        assert!(fd.max_odd() < 1e-9);
    }

    #[test]
    fn constant_symbol_table() {
        let sinc = Averager::sinc(2, SincPairing::Fourier);
        let t = fd_moment_table(&sinc, 5).unwrap();
        for (alpha, v) in t.iter() {
            let want = if total_degree(alpha) == 0 { 1.0 } else { 0.0 };
            assert!((v - real(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn sinc_squared_has_no_table() {
        assert!(matches!(
            fd_moment_table(&Kernel::fejer(1), 2),
            Err(Error::NonSmoothSymbol(_))
        ));
    }

    #[test]
    fn solve_t_box_and_ball() {
        let box_table = Averager::unit_box(1).taylor_table(4).unwrap();
        let c = solve_t(&box_table, 4).unwrap();
        assert_eq!(c[&vec![0]], real(1.0));
        assert!(c[&vec![1]].norm() < 1e-15);
        assert_relative_eq!(c[&vec![2]].re, PI * PI / 3.0, epsilon = 1e-13);
        assert!(c[&vec![3]].norm() < 1e-15);

        let c1 = solve_t(&box_table, 1).unwrap();
        assert_eq!(c1.len(), 1);

        let ball_table = Averager::ball(2, 1.0).unwrap().taylor_table(4).unwrap();
        let c = solve_t(&ball_table, 4).unwrap();
        for (alpha, v) in &c {
            let want = match alpha.as_slice() {
                [0, 0] => 1.0,
                [2, 0] | [0, 2] => PI * PI,
                _ => 0.0,
            };
            assert!((v - real(want)).norm() < 1e-12, "{alpha:?}: {v}");
        }
    }

    #[test]
    fn symmetric_averager_has_no_first_order_correction() {
        for a in [
            Averager::unit_box(2),
            Averager::ball(2, 0.7).unwrap(),
            Averager::unit_box(1),
        ] {
            let c = solve_t(&a.taylor_table(2).unwrap(), 2).unwrap();
            for (alpha, v) in &c {
                if total_degree(alpha) == 1 {
                    assert!(v.norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn assemble_example_tables() {
        let c = solve_t(&Averager::unit_box(1).taylor_table(4).unwrap(), 4).unwrap();
        let t = assemble_t(&c, 4, 1).unwrap();
        for (l, v) in [(0, 11.0 / 12.0), (1, 5.0 / 24.0), (2, -1.0 / 6.0), (3, 1.0 / 24.0)] {
            assert_relative_eq!(t.coefficient(&[l]).re, v, epsilon = 1e-12);
        }
        let c2 = solve_t(&Averager::unit_box(2).taylor_table(4).unwrap(), 4).unwrap();
        let t2 = assemble_t(&c2, 4, 2).unwrap();
        assert_relative_eq!(t2.coefficient(&[0, 0]).re, 5.0 / 6.0, epsilon = 1e-12);
        assert_relative_eq!(t2.coefficient(&[1, 0]).re, 5.0 / 24.0, epsilon = 1e-12);
        assert_relative_eq!(t2.coefficient(&[0, 3]).re, 1.0 / 24.0, epsilon = 1e-12);
        assert_eq!(t2.coefficient(&[1, 1]), Complex64::default());

        let mut unit = CoeffMap::new();
        unit.insert(vec![0], real(1.0));
        let t1 = assemble_t(&unit, 1, 1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1.coefficient(&[0]), real(1.0));
    }

    #[test]
    fn ball_kernel_derived_coefficients() {
        let k = synthesize_kernel(&Averager::ball(2, 1.0).unwrap(), 4).unwrap();
        let t = k.trig_symbol().unwrap();
        assert_relative_eq!(t.coefficient(&[0, 0]).re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(t.coefficient(&[1, 0]).re, 5.0 / 8.0, epsilon = 1e-12);
        assert_relative_eq!(t.coefficient(&[2, 0]).re, -0.5, epsilon = 1e-12);
        assert_relative_eq!(t.coefficient(&[0, 3]).re, 1.0 / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn synthesized_kernels_are_sharp() {
        for (a, n) in [
            (Averager::unit_box(1), 4),
            (Averager::unit_box(1), 3),
            (Averager::unit_box(2), 4),
            (Averager::ball(2, 1.0).unwrap(), 4),
            (Averager::unit_box_shifted(1), 2),
        ] {
            let k = synthesize_kernel(&a, n).unwrap();
            assert!(moment_defect(&k, &a, n).unwrap() < DEFECT_TOL);
            assert!(moment_defect(&k, &a, n + 1).unwrap() > 1e-4, "{a:?} n={n}");
        }
    }

    #[test]
    fn shifted_box_kernel_is_real() {
        let k = synthesize_kernel(&Averager::unit_box_shifted(1), 2).unwrap();
        let t = k.trig_symbol().unwrap();
        assert!(t.max_imag() < 1e-14);
        assert_relative_eq!(t.coefficient(&[0]).re, 1.5, epsilon = 1e-14);
        assert_relative_eq!(t.coefficient(&[1]).re, -0.5, epsilon = 1e-14);
    }

    #[test]
    fn defect_examples() {
        let sinc = Kernel::sinc(1);
        assert!(moment_defect(&sinc, &Averager::unit_box(1), 2).unwrap() < 1e-8);
        let d = moment_defect(&sinc, &Averager::unit_box_shifted(1), 2).unwrap();
        assert_relative_eq!(d, PI, epsilon = 1e-10);
    }

    #[test]
    fn q_for_sinc_equals_t() {
        let sinc = Kernel::sinc(1);
        let avg = Averager::unit_box(1);
        let q = solve_q(&sinc.taylor_table(4).unwrap(), &avg.taylor_table(4).unwrap(), 4).unwrap();
        let t = assemble_t(&solve_t(&avg.taylor_table(4).unwrap(), 4).unwrap(), 4, 1).unwrap();
        for l in 0..4 {
            assert!((q.coefficient(&[l]) - t.coefficient(&[l])).norm() < 1e-14);
        }
        let q1 = solve_q(&sinc.taylor_table(1).unwrap(), &avg.taylor_table(1).unwrap(), 1).unwrap();
        assert_eq!(q1.len(), 1);
        assert_eq!(q1.coefficient(&[0]), real(1.0));
    }

    #[test]
    fn q_for_bochner_riesz_and_ball() {
        for delta in [0.5, 1.0] {
            let br = Kernel::bochner_riesz(2, delta).unwrap();
            let ball = Averager::ball(2, 1.0).unwrap();
            let combo = synthesize_averager(&br, &ball, 4).unwrap();
            let AveragerKind::ShiftedCombo { coeffs, .. } = combo.kind() else {
                panic!("expected a combination")
            };
            // Q = 1 + (2 delta + pi^2)(g_2(xi_1) + g_2(xi_2))
            let c = 2.0 * delta + PI * PI;
            assert_relative_eq!(
                coeffs.coefficient(&[0, 0]).re,
                1.0 - c / (2.0 * PI * PI),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                coeffs.coefficient(&[1, 0]).re,
                5.0 * c / (8.0 * PI * PI),
                epsilon = 1e-12
            );
            assert_relative_eq!(coeffs.coefficient(&[0, 2]).re, -c / (2.0 * PI * PI), epsilon = 1e-12);
            assert_relative_eq!(coeffs.coefficient(&[3, 0]).re, c / (8.0 * PI * PI), epsilon = 1e-12);
            assert_eq!(coeffs.coefficient(&[1, 1]), Complex64::default());
            assert!(moment_defect(&br, &combo, 5).unwrap() > 1e-4);
        }
    }

    #[test]
    fn q_for_asymmetric_averager() {
        let br = Kernel::bochner_riesz(2, 1.0).unwrap();
        let shifted = Averager::unit_box_shifted(2);
        let combo = synthesize_averager(&br, &shifted, 3).unwrap();
        assert!(moment_defect(&br, &combo, 3).unwrap() < DEFECT_TOL);
    }

    #[test]
    fn strict_compatibility_examples() {
        let sinc = Kernel::sinc(1);
        assert!(check_strict_compatibility(&sinc, &sinc, 0.3).unwrap());
        assert!(!check_strict_compatibility(&sinc, &Averager::unit_box(1), 0.3).unwrap());
        let ex1 = synthesize_kernel(&Averager::unit_box(1), 4).unwrap();
        assert!(!check_strict_compatibility(&ex1, &Averager::unit_box(1), 0.3).unwrap());
        let sinc2 = Kernel::sinc(2);
        assert!(check_strict_compatibility(&sinc2, &Averager::sinc(2, SincPairing::Fourier), 0.3).unwrap());
        assert!(check_strict_compatibility(&sinc, &sinc, 0.5).is_err());
    }

    #[test]
    fn strict_compatibility_gives_every_order() {
        let sinc = Kernel::sinc(1);
        let avg = Averager::sinc(1, SincPairing::Fourier);
        for n in 1..=6 {
            assert!(moment_defect(&sinc, &avg, n).unwrap() < 1e-12);
        }
    }
}
