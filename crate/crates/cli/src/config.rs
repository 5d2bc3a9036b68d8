//! Experiment configuration files.
//!
//! A configuration is a TOML document with the sections below. Every key has
//! a default, so an empty file is a valid (Gaussian, sinc, symmetric box,
//! `M = [2]`, `j = 3..7`) run.
//!
//! ```toml
//! [run]
//! function = "gaussian"       # corpus id
//! p = 2.0                     # 1 <= p, `inf` for the sup norm
//! j_min = 3
//! j_max = 7
//! matrix = [[2.0]]            # row-major dilation matrix
//! window = [[-4.0, 4.0]]      # one [lo, hi] pair per axis
//! points_per_axis = 256
//!
//! [kernel]
//! variant = "sinc"            # sinc | sinc_squared | fejer | bochner_riesz | synthesized
//! scale = 2.0                 # sinc_squared
//! delta = 1.0                 # bochner_riesz
//! order = 4                   # synthesized: order n against [averager]
//!
//! [averager]
//! variant = "box"             # box | ball | sinc | combo
//! lo = [-0.5]                 # box corners, default [-1/2, 1/2]^d
//! hi = [0.5]
//! radius = 1.0                # ball
//! pairing = "fourier"         # sinc: fourier | spatial
//! half_width = 8.0            # sinc, spatial pairing
//! base = "box"                # combo: box | ball, using lo/hi/radius
//! order = 4                   # combo: order corrected against [kernel]
//!
//! [quadrature]
//! nodes_per_axis = 24
//! subdivisions = 2
//! radial_nodes = 32
//! angular_nodes = 64
//! node_budget = 4000000
//!
//! [truncation]
//! mode = "radius"             # radius | tail_tol
//! radius = 64.0
//! tolerance = 1e-8
//! cap = 4000000
//! coefficient_floor = 0.0
//!
//! [modulus]
//! order = 1                   # n in omega_n used for the constant C
//!
//! [compare]
//! rates = [4.0, 8.0, 16.0, 32.0, 64.0]
//! jitter = 1e-3               # samples moved by (-1)^(k+1) jitter / w
//!
//! [acceptance]
//! expected_order = 2.0        # converge: fitted slope target
//! tolerance = 0.3
//! max_spread = 4.0            # converge: max C / min C
//! max_error = 1e-6            # reproduce
//! min_jitter_ratio = 10.0     # compare
//! order_match = 0.3           # compare: |order(K_w) - order(S_w)|
//!
//! [output]
//! name = "run"                # file stem inside --out
//! ```

use std::fmt;
use std::path::Path;

use kksampling::operators::{TruncationMode, TruncationPolicy};
use kksampling::{
    corpus, synthesis, Averager, DilationMatrix, EvalGrid, Kernel, QuadratureSpec, SincPairing, TestFunction,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] toml::de::Error),
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub kernel: KernelSection,
    pub averager: AveragerSection,
    pub quadrature: QuadratureSpec,
    pub truncation: TruncationSection,
    pub modulus: ModulusSection,
    pub compare: CompareSection,
    pub acceptance: AcceptanceSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub function: String,
    pub p: f64,
    pub j_min: u32,
    pub j_max: u32,
    pub matrix: Vec<Vec<f64>>,
    pub window: Vec<[f64; 2]>,
    pub points_per_axis: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            function: "gaussian".into(),
            p: 2.0,
            j_min: 3,
            j_max: 7,
            matrix: vec![vec![2.0]],
            window: vec![[-4.0, 4.0]],
            points_per_axis: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelVariant {
    Sinc,
    SincSquared,
    Fejer,
    BochnerRiesz,
    Synthesized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    pub variant: KernelVariant,
    pub scale: f64,
    pub delta: f64,
    pub order: usize,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self {
            variant: KernelVariant::Sinc,
            scale: 2.0,
            delta: 1.0,
            order: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragerVariant {
    Box,
    Ball,
    Sinc,
    Combo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseVariant {
    Box,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingVariant {
    Fourier,
    Spatial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AveragerSection {
    pub variant: AveragerVariant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<Vec<f64>>,
    pub radius: f64,
    pub pairing: PairingVariant,
    pub half_width: f64,
    pub base: BaseVariant,
    pub order: usize,
}

impl Default for AveragerSection {
    fn default() -> Self {
        Self {
            variant: AveragerVariant::Box,
            lo: None,
            hi: None,
            radius: 1.0,
            pairing: PairingVariant::Fourier,
            half_width: 8.0,
            base: BaseVariant::Box,
            order: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationVariant {
    Radius,
    TailTol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationSection {
    pub mode: TruncationVariant,
    pub radius: f64,
    pub tolerance: f64,
    pub cap: usize,
    pub coefficient_floor: f64,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            mode: TruncationVariant::Radius,
            radius: 64.0,
            tolerance: 1e-8,
            cap: 4_000_000,
            coefficient_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModulusSection {
    pub order: u32,
}

impl Default for ModulusSection {
    fn default() -> Self {
        Self { order: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSection {
    pub rates: Vec<f64>,
    pub jitter: f64,
}

impl Default for CompareSection {
    fn default() -> Self {
        Self {
            rates: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            jitter: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcceptanceSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_spread: Option<f64>,
    pub max_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_jitter_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_match: Option<f64>,
}

impl Default for AcceptanceSection {
    fn default() -> Self {
        Self {
            expected_order: None,
            tolerance: 0.3,
            max_spread: None,
            max_error: 1e-6,
            min_jitter_ratio: None,
            order_match: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub name: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { name: "run".into() }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// The fully resolved configuration as `section.key = value` pairs in a
    /// fixed order.
    pub fn flattened(&self) -> Vec<(String, String)> {
        let value = toml::Value::try_from(self).expect("configuration serializes");
        let mut out = Vec::new();
        flatten("", &value, &mut out);
        out
    }

    /// Checks every key and builds the objects a command needs.
    pub fn plan(&self) -> Result<Plan, ConfigError> {
        let run = &self.run;
        let matrix = DilationMatrix::new(&run.matrix).map_err(|e| invalid("run.matrix", e))?;
        let dim = matrix.dim();
        let function = corpus::by_id(&run.function).ok_or_else(|| {
            let ids: Vec<String> = corpus::corpus().into_iter().map(|f| f.id).collect();
            invalid(
                "run.function",
                format!("unknown id '{}', expected one of {}", run.function, ids.join(", ")),
            )
        })?;
        if function.dim != dim {
            return Err(invalid(
                "run.function",
                format!(
                    "'{}' is {}-dimensional but run.matrix is {dim} x {dim}",
                    function.id, function.dim
                ),
            ));
        }
        if !(run.p >= 1.0) {
            return Err(invalid("run.p", format!("must be at least 1, got {}", run.p)));
        }
        if run.j_min > run.j_max {
            return Err(invalid(
                "run.j_min",
                format!("{} exceeds run.j_max = {}", run.j_min, run.j_max),
            ));
        }
        if run.j_max > 40 {
            return Err(invalid(
                "run.j_max",
                format!("{} is beyond any useful level", run.j_max),
            ));
        }
        if run.window.len() != dim {
            return Err(invalid(
                "run.window",
                format!("needs {dim} [lo, hi] pairs, got {}", run.window.len()),
            ));
        }
        let lo: Vec<f64> = run.window.iter().map(|w| w[0]).collect();
        let hi: Vec<f64> = run.window.iter().map(|w| w[1]).collect();
        let grid = EvalGrid::new(lo, hi, run.points_per_axis).map_err(|e| {
            let key = if run.points_per_axis == 0 {
                "run.points_per_axis"
            } else {
                "run.window"
            };
            invalid(key, e)
        })?;

        self.quadrature.validate().map_err(|e| invalid("quadrature", e))?;
        let truncation = self.truncation_policy()?;
        if self.modulus.order == 0 {
            return Err(invalid("modulus.order", "must be at least 1"));
        }

        let base = self.base_averager(dim)?;
        let kernel = self.kernel(dim, &base)?;
        let averager = match self.averager.variant {
            AveragerVariant::Combo => {
                check_order("averager.order", self.averager.order)?;
                synthesis::synthesize_averager(&kernel, &base, self.averager.order)
                    .map_err(|e| invalid("averager", format!("correction failed: {e}")))?
            }
            _ => base.clone(),
        };

        Ok(Plan {
            function,
            matrix,
            grid,
            kernel,
            averager,
            base_averager: base,
            p: run.p,
            levels: (run.j_min..=run.j_max).collect(),
            quadrature: self.quadrature,
            truncation,
            modulus_order: self.modulus.order,
        })
    }

    fn truncation_policy(&self) -> Result<TruncationPolicy, ConfigError> {
        let t = &self.truncation;
        let mode = match t.mode {
            TruncationVariant::Radius => {
                if !(t.radius > 0.0 && t.radius.is_finite()) {
                    return Err(invalid(
                        "truncation.radius",
                        format!("must be positive, got {}", t.radius),
                    ));
                }
                TruncationMode::Radius { radius: t.radius }
            }
            TruncationVariant::TailTol => {
                if !(t.tolerance > 0.0 && t.tolerance.is_finite()) {
                    return Err(invalid(
                        "truncation.tolerance",
                        format!("must be positive, got {}", t.tolerance),
                    ));
                }
                TruncationMode::TailTol { tolerance: t.tolerance }
            }
        };
        if t.cap == 0 {
            return Err(invalid("truncation.cap", "must be positive"));
        }
        if !(t.coefficient_floor >= 0.0) {
            return Err(invalid("truncation.coefficient_floor", "must be non-negative"));
        }
        Ok(TruncationPolicy {
            mode,
            cap: t.cap,
            coefficient_floor: t.coefficient_floor,
        })
    }

    /// The averager named by `[averager]`, before any combination is formed.
    fn base_averager(&self, dim: usize) -> Result<Averager, ConfigError> {
        let a = &self.averager;
        let kind = match a.variant {
            AveragerVariant::Combo => match a.base {
                BaseVariant::Box => AveragerVariant::Box,
                BaseVariant::Ball => AveragerVariant::Ball,
            },
            other => other,
        };
        match kind {
            AveragerVariant::Box => {
                let lo = a.lo.clone().unwrap_or_else(|| vec![-0.5; dim]);
                let hi = a.hi.clone().unwrap_or_else(|| vec![0.5; dim]);
                if lo.len() != dim {
                    return Err(invalid("averager.lo", format!("needs {dim} entries, got {}", lo.len())));
                }
                if hi.len() != dim {
                    return Err(invalid("averager.hi", format!("needs {dim} entries, got {}", hi.len())));
                }
                Averager::boxed(lo, hi).map_err(|e| invalid("averager.lo", e))
            }
            AveragerVariant::Ball => Averager::ball(dim, a.radius).map_err(|e| invalid("averager.radius", e)),
            AveragerVariant::Sinc => {
                let pairing = match a.pairing {
                    PairingVariant::Fourier => SincPairing::Fourier,
                    PairingVariant::Spatial => {
                        if !(a.half_width > 0.0 && a.half_width.is_finite()) {
                            return Err(invalid(
                                "averager.half_width",
                                format!("must be positive, got {}", a.half_width),
                            ));
                        }
                        SincPairing::Spatial {
                            half_width: a.half_width,
                        }
                    }
                };
                Ok(Averager::sinc(dim, pairing))
            }
            AveragerVariant::Combo => unreachable!("resolved to the base above"),
        }
    }

    fn kernel(&self, dim: usize, base: &Averager) -> Result<Kernel, ConfigError> {
        let k = &self.kernel;
        match k.variant {
            KernelVariant::Sinc => Ok(Kernel::sinc(dim)),
            KernelVariant::SincSquared => Kernel::sinc_squared(dim, k.scale).map_err(|e| invalid("kernel.scale", e)),
            KernelVariant::Fejer => Ok(Kernel::fejer(dim)),
            KernelVariant::BochnerRiesz => Kernel::bochner_riesz(dim, k.delta).map_err(|e| invalid("kernel.delta", e)),
            KernelVariant::Synthesized => {
                check_order("kernel.order", k.order)?;
                if self.averager.variant == AveragerVariant::Combo {
                    return Err(invalid(
                        "kernel.variant",
                        "a synthesized kernel needs a plain averager, not a combo",
                    ));
                }
                synthesis::synthesize_kernel(base, k.order)
                    .map_err(|e| invalid("kernel", format!("synthesis failed: {e}")))
            }
        }
    }
}

fn check_order(key: &str, n: usize) -> Result<(), ConfigError> {
    if n == 0 || n > synthesis::MAX_ORDER {
        return Err(invalid(
            key,
            format!("must lie in 1..={}, got {n}", synthesis::MAX_ORDER),
        ));
    }
    Ok(())
}

fn flatten(prefix: &str, value: &toml::Value, out: &mut Vec<(String, String)>) {
    match value {
        toml::Value::Table(table) => {
            for (k, v) in table {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct Plan {
    pub function: TestFunction,
    pub matrix: DilationMatrix,
    pub grid: EvalGrid,
    pub kernel: Kernel,
    /// The averager used by the operators, after any correction.
    pub averager: Averager,
    /// The averager named in the file.
    pub base_averager: Averager,
    pub p: f64,
    pub levels: Vec<u32>,
    pub quadrature: QuadratureSpec,
    pub truncation: TruncationPolicy,
    pub modulus_order: u32,
}
