//! Multivariate Kantorovich-type sampling operators with band-limited kernels.
//!
//! The crate evaluates quasi-projection operators
//! `Q_j f(x) = sum_k c_jk(f) phi(M^j x + k)`, where the coefficients are local
//! averages `c_jk(f) = m^j int f(u) conj(phi~(M^j u + k)) du` and `M` is an
//! expansive dilation matrix with `m = |det M|`. It synthesizes kernels of a
//! prescribed approximation order for a given averager, certifies the order by
//! an independent moment computation, and measures convergence rates against
//! moduli of smoothness.
//!
//! ```
//! use kksampling::{synthesis, Averager};
//!
//! let kernel = synthesis::synthesize_kernel(&Averager::unit_box(1), 4).unwrap();
//! let t = kernel.trig_symbol().unwrap();
//! assert!((t.coefficient(&[0]).re - 11.0 / 12.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod corpus;
pub mod dilation;
pub mod error;
pub mod kernels;
pub mod operators;
pub mod quadrature;
pub mod special;
pub mod synthesis;
pub mod trig;

pub use analysis::{fit_order, lp_distance, modulus_of_smoothness, ConvergenceReport, ConvergenceRow, DeltaSet};
pub use corpus::{corpus, Profile, TestFunction};
pub use dilation::DilationMatrix;
pub use error::{Error, Result};
pub use kernels::{Averager, AveragerKind, DecayClass, Kernel, KernelKind, SincPairing, Symbol};
pub use num_complex::Complex64;
pub use operators::{ErrorBudget, EvalGrid, GridFunction, OperatorOutput, TruncationMode, TruncationPolicy};
pub use quadrature::{GaussRule, QuadratureSpec};
pub use synthesis::{CoeffMap, MomentTable};
pub use trig::{MultiIndex, TrigPolynomial};
