//! Expansive dilation matrices and their powers.
//!
//! A dilation matrix `M` is a real `d x d` matrix whose eigenvalues all lie
//! strictly outside the unit circle. Level `j` of every operator lives on the
//! lattice `M^{-j} Z^d`, so the convergence scale is `||M^{-j}||` (spectral
//! norm).

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues with modulus at or below `1 + EXPANSIVE_TOL` are rejected.
pub const EXPANSIVE_TOL: f64 = 1e-9;

/// Default number of cached powers.
pub const DEFAULT_CACHE: usize = 16;

#[derive(Debug, Clone)]
pub struct DilationMatrix {
    entries: DMatrix<f64>,
    det_abs: f64,
    eigen_moduli: Vec<f64>,
    powers: Vec<DMatrix<f64>>,
    inv_powers: Vec<DMatrix<f64>>,
}

impl PartialEq for DilationMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl DilationMatrix {
    /// Builds a dilation matrix from row-major entries.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        Self::with_cache(rows, DEFAULT_CACHE)
    }

    pub fn with_cache(rows: &[Vec<f64>], j_max: usize) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a {d}x{d} matrix",
                bad.len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let entries = DMatrix::from_fn(d, d, |r, c| rows[r][c]);
        Self::from_matrix(entries, j_max)
    }

    pub fn from_matrix(entries: DMatrix<f64>, j_max: usize) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidMatrix("matrix must be square".into()));
        }
        let eigen_moduli = eigenvalue_moduli(&entries);
        if let Some(&m) = eigen_moduli.iter().find(|&&m| m <= 1.0 + EXPANSIVE_TOL) {
            return Err(Error::NonExpansive {
                modulus: m,
                tolerance: EXPANSIVE_TOL,
            });
        }
        let det_abs = entries.determinant().abs();
        let inverse = entries
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidMatrix("singular matrix".into()))?;

        let d = entries.nrows();
        let mut powers = vec![DMatrix::identity(d, d)];
        let mut inv_powers = vec![DMatrix::identity(d, d)];
        for j in 1..=j_max {
            powers.push(&powers[j - 1] * &entries);
            inv_powers.push(&inv_powers[j - 1] * &inverse);
        }
        Ok(Self {
            entries,
            det_abs,
            eigen_moduli,
            powers,
            inv_powers,
        })
    }

    /// Scalar dilation `[w]` in one dimension.
    pub fn scalar(w: f64) -> Result<Self> {
        Self::new(&[vec![w]])
    }

    /// Dyadic dilation `2 I_d`.
    pub fn dyadic(d: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::identity(d, d) * 2.0, DEFAULT_CACHE)
    }

    /// The quincunx matrix `[[1, -1], [1, 1]]`.
    pub fn quincunx() -> Self {
        Self::new(&[vec![1.0, -1.0], vec![1.0, 1.0]]).expect("quincunx is expansive")
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `m = |det M|`.
    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|r| self.entries.row(r).iter().copied().collect())
            .collect()
    }

    /// Moduli of the eigenvalues, ascending.
    pub fn eigenvalue_moduli(&self) -> &[f64] {
        &self.eigen_moduli
    }

    /// Smallest eigenvalue modulus; `||M^{-j}|| <= C theta^{-j}` for any
    /// `theta` below this value.
    pub fn min_eigen_modulus(&self) -> f64 {
        self.eigen_moduli[0]
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.entries[(r, c)] == 0.0))
    }

    /// `M^j` for any integer `j`; negative powers use the inverse.
    pub fn power(&self, j: i32) -> DMatrix<f64> {
        let n = j.unsigned_abs() as usize;
        let cache = if j >= 0 { &self.powers } else { &self.inv_powers };
        if n < cache.len() {
            return cache[n].clone();
        }
        let last = cache.len() - 1;
        let step = &cache[1];
        let mut acc = cache[last].clone();
        for _ in last..n {
            acc = &acc * step;
        }
        acc
    }

    /// `(M^*)^j = (M^T)^j`.
    pub fn transpose_power(&self, j: i32) -> DMatrix<f64> {
        self.power(j).transpose()
    }

    /// Exact action of `M^j` on `x`.
    pub fn apply_power(&self, j: i32, x: &[f64]) -> Vec<f64> {
        let p = self.power(j);
        mat_vec(&p, x)
    }

    /// Spectral norm `||M^{-j}||`.
    pub fn inv_power_norm(&self, j: u32) -> f64 {
        if j == 0 {
            return 1.0;
        }
        spectral_norm(&self.power(-(j as i32)))
    }
}

pub(crate) fn mat_vec(a: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let d = a.nrows();
    assert_eq!(x.len(), a.ncols(), "vector length must match matrix");
    (0..d).map(|r| (0..x.len()).map(|c| a[(r, c)] * x[c]).sum()).collect()
}

/// Largest singular value. Closed forms for `d <= 2`, iterative SVD beyond.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    match a.nrows() {
        1 => a[(0, 0)].abs(),
        2 => {
            let s = a.iter().map(|v| v * v).sum::<f64>();
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let disc = (s * s - 4.0 * det * det).max(0.0);
            ((s + disc.sqrt()) / 2.0).sqrt()
        }
        _ => a
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max),
    }
}

fn eigenvalue_moduli(a: &DMatrix<f64>) -> Vec<f64> {
    let mut moduli = match a.nrows() {
        1 => vec![a[(0, 0)].abs()],
        2 => {
            let tr = a[(0, 0)] + a[(1, 1)];
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let disc = tr * tr - 4.0 * det;
            if disc >= 0.0 {
                let r = disc.sqrt();
                vec![((tr - r) / 2.0).abs(), ((tr + r) / 2.0).abs()]
            } else {
                // complex pair, |lambda|^2 = det
                vec![det.abs().sqrt(); 2]
            }
        }
        _ => a.clone().complex_eigenvalues().iter().map(|z| z.norm()).collect(),
    };
    moduli.sort_by(f64::total_cmp);
    moduli
}
