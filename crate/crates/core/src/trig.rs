//! Multi-indices and trigonometric polynomials `sum_l a_l e^{2 pi i (l, xi)}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type MultiIndex = Vec<u32>;

/// All multi-indices in `d` variables with total degree `< n`, graded
/// (by total degree, then lexicographically).
pub fn multi_indices(d: usize, n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for total in 0..n as u32 {
        let mut current = vec![0u32; d];
        push_with_total(&mut out, &mut current, 0, total);
    }
    out
}

fn push_with_total(out: &mut Vec<MultiIndex>, current: &mut MultiIndex, axis: usize, left: u32) {
    let d = current.len();
    if d == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if axis == d - 1 {
        current[axis] = left;
        out.push(current.clone());
        return;
    }
    for v in (0..=left).rev() {
        current[axis] = v;
        push_with_total(out, current, axis + 1, left - v);
    }
    current[axis] = 0;
}

pub fn total_degree(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// Componentwise `alpha <= beta`.
pub fn index_leq(alpha: &[u32], beta: &[u32]) -> bool {
    alpha.iter().zip(beta).all(|(a, b)| a <= b)
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Multi-index binomial `prod_v binom(beta_v, alpha_v)`.
pub fn multi_binomial(beta: &[u32], alpha: &[u32]) -> f64 {
    beta.iter().zip(alpha).map(|(&b, &a)| binomial(b, a)).product()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `(2 pi i t)^m`.
pub(crate) fn two_pi_i_pow(t: f64, m: u32) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * t).powu(m)
}

/// Finite trigonometric polynomial over `Z^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl TrigPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut p = Self::zero(dim);
        for (l, c) in terms {
            if l.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: l.len(),
                });
            }
            p.add_term(l, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, l: Vec<i64>, c: Complex64) {
        debug_assert_eq!(l.len(), self.dim);
        *self.coeffs.entry(l).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn coefficient(&self, l: &[i64]) -> Complex64 {
        self.coeffs.get(l).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_l = a_{-l}` for every shift, up to rounding.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().all(|(l, c)| {
            let neg: Vec<i64> = l.iter().map(|v| -v).collect();
            (self.coefficient(&neg) - c).norm() <= 1e-14 * c.norm().max(1.0)
        })
    }

    /// `sum_l a_l e^{2 pi i (l, xi)}`.
    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(l, a)| {
                let phase: f64 = l.iter().zip(xi).map(|(&li, &x)| li as f64 * x).sum();
                a * Complex64::from_polar(1.0, 2.0 * PI * phase)
            })
            .sum()
    }

    /// `D^alpha` of the polynomial at the origin: `sum_l a_l prod (2 pi i l_v)^{alpha_v}`.
    pub fn derivative_at_zero(&self, alpha: &[u32]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(l, a)| {
                l.iter()
                    .zip(alpha)
                    .fold(*a, |acc, (&li, &m)| acc * two_pi_i_pow(li as f64, m))
            })
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let mut out = Self::zero(self.dim);
        for (l1, a1) in &self.coeffs {
            for (l2, a2) in &other.coeffs {
                let l: Vec<i64> = l1.iter().zip(l2).map(|(x, y)| x + y).collect();
                out.add_term(l, a1 * a2);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sum");
        let mut out = self.clone();
        for (l, a) in &other.coeffs {
            out.add_term(l.clone(), *a);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(l, a)| (l.clone(), a * c)).collect(),
        }
    }

    /// Lifts a one-dimensional polynomial onto `axis` of a `dim`-dimensional one.
    pub fn embed(&self, axis: usize, dim: usize) -> Self {
        assert_eq!(self.dim, 1, "only univariate polynomials can be embedded");
        assert!(axis < dim);
        let mut out = Self::zero(dim);
        for (l, a) in &self.coeffs {
            let mut e = vec![0; dim];
            e[axis] = l[0];
            out.add_term(e, *a);
        }
        out
    }

    /// Drops coefficients with modulus at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, a)| a.norm() > tol)
                .map(|(l, a)| (l.clone(), *a))
                .collect(),
        }
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm()).sum()
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.values().map(|a| a.im.abs()).fold(0.0, f64::max)
    }

    /// Rows `[l_1, .., l_d, re, im]` in lattice order.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|(l, a)| {
                let mut row: Vec<f64> = l.iter().map(|&v| v as f64).collect();
                row.push(a.re);
                row.push(a.im);
                row
            })
            .collect()
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut p = Self::zero(dim);
        for row in rows {
            if row.len() != dim + 2 {
                return Err(Error::DimensionMismatch {
                    expected: dim + 2,
                    got: row.len(),
                });
            }
            let l = row[..dim]
                .iter()
                .map(|&v| {
                    if v.fract() == 0.0 && v.is_finite() {
                        Ok(v as i64)
                    } else {
                        Err(Error::InvalidParameter(format!("non-integer lattice index {v}")))
                    }
                })
                .collect::<Result<Vec<i64>>>()?;
            p.add_term(l, Complex64::new(row[dim], row[dim + 1]));
        }
        Ok(p)
    }
}
