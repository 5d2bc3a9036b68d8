//! Shared fixtures for the benchmarks.

use kksampling::{DilationMatrix, EvalGrid, QuadratureSpec, TruncationPolicy};

/// Dyadic scaling in one dimension with the usual window.
pub fn dyadic_1d(points: usize) -> (DilationMatrix, EvalGrid) {
    (
        DilationMatrix::scalar(2.0).expect("expansive"),
        EvalGrid::interval(-4.0, 4.0, points).expect("grid"),
    )
}

/// Quincunx scaling on a square window.
pub fn quincunx_2d(points_per_axis: usize) -> (DilationMatrix, EvalGrid) {
    (
        DilationMatrix::quincunx(),
        EvalGrid::cube(2, -2.0, 2.0, points_per_axis).expect("grid"),
    )
}

pub fn settings() -> (TruncationPolicy, QuadratureSpec) {
    (
        TruncationPolicy::radius(32.0).with_floor(1e-14),
        QuadratureSpec::default(),
    )
}
