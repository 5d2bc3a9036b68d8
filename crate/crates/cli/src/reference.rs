//! Reference coefficient tables for the standard order-4 syntheses, shown
//! side by side with the synthesized values.
//!
//! The disc and Bochner–Riesz reference tables carry the opposite sign on the
//! `pi^2` term from the synthesized ones. The moment defect of the synthesized
//! pair is what certifies the order.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use kksampling::{AveragerKind, KernelKind, TrigPolynomial};
use serde::Serialize;

use crate::config::{AveragerVariant, BaseVariant, ExperimentConfig, KernelVariant, Plan};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub shift: Vec<i64>,
    pub printed: f64,
    pub derived: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: &'static str,
    pub rows: Vec<ComparisonRow>,
    pub max_difference: f64,
}

/// Shift coefficients `(l, value)` with the shift written in full dimension.
type Table = Vec<(Vec<i64>, f64)>;

fn axis_table(constant: f64, per_axis: [f64; 3]) -> Table {
    let mut t = vec![(vec![0, 0], constant)];
    for (i, v) in per_axis.iter().enumerate() {
        let l = i as i64 + 1;
        t.push((vec![l, 0], *v));
        t.push((vec![0, l], *v));
    }
    t
}

/// Box `[-1/2, 1/2]`, order 4, one dimension.
pub fn box_1d() -> Table {
    vec![
        (vec![0], 11.0 / 12.0),
        (vec![1], 5.0 / 24.0),
        (vec![2], -1.0 / 6.0),
        (vec![3], 1.0 / 24.0),
    ]
}

/// Box `[-1/2, 1/2]^2`, order 4.
pub fn box_2d() -> Table {
    axis_table(5.0 / 6.0, [5.0 / 24.0, -4.0 / 24.0, 1.0 / 24.0])
}

/// Unit disc, order 4, reference values.
pub fn ball_reference() -> Table {
    axis_table(1.5, [-5.0 / 8.0, 4.0 / 8.0, -1.0 / 8.0])
}

/// Bochner–Riesz kernel against the unit disc, order 4, reference values.
pub fn bochner_riesz_reference(delta: f64) -> Table {
    let c = 2.0 * delta - PI * PI;
    let mut t = axis_table(
        1.0 - c / (2.0 * PI * PI),
        [5.0 * c / (8.0 * PI * PI), -c / (2.0 * PI * PI), c / (8.0 * PI * PI)],
    );
    for l in [vec![1, 1], vec![1, 2], vec![2, 1]] {
        t.push((l, 0.0));
    }
    t
}

fn is_unit_box(plan: &Plan) -> bool {
    match plan.base_averager.kind() {
        AveragerKind::Box { lo, hi } => lo.iter().all(|v| *v == -0.5) && hi.iter().all(|v| *v == 0.5),
        _ => false,
    }
}

fn is_unit_ball(plan: &Plan) -> bool {
    matches!(plan.base_averager.kind(), AveragerKind::Ball { radius } if *radius == 1.0)
}

/// The reference table matching the configuration, if any.
pub fn printed_table(cfg: &ExperimentConfig, plan: &Plan) -> Option<(&'static str, Table)> {
    let dim = plan.matrix.dim();
    if cfg.kernel.variant == KernelVariant::Synthesized && cfg.kernel.order == 4 {
        return match cfg.averager.variant {
            AveragerVariant::Box if is_unit_box(plan) && dim == 1 => Some(("box, d = 1", box_1d())),
            AveragerVariant::Box if is_unit_box(plan) && dim == 2 => Some(("box, d = 2", box_2d())),
            AveragerVariant::Ball if is_unit_ball(plan) => Some(("unit disc (reference table)", ball_reference())),
            _ => None,
        };
    }
    if cfg.averager.variant == AveragerVariant::Combo
        && cfg.averager.base == BaseVariant::Ball
        && cfg.averager.order == 4
        && is_unit_ball(plan)
    {
        if let KernelKind::BochnerRiesz { delta } = plan.kernel.kind() {
            return Some((
                "Bochner-Riesz with unit disc (reference table)",
                bochner_riesz_reference(*delta),
            ));
        }
    }
    None
}

/// Side-by-side table over the union of reference and synthesized shifts.
pub fn compare(cfg: &ExperimentConfig, plan: &Plan, derived: &TrigPolynomial) -> Option<Comparison> {
    let (name, printed) = printed_table(cfg, plan)?;
    let mut shifts: BTreeMap<Vec<i64>, f64> = printed.into_iter().collect();
    for (l, _) in derived.terms() {
        shifts.entry(l.clone()).or_insert(0.0);
    }
    let rows: Vec<ComparisonRow> = shifts
        .into_iter()
        .map(|(shift, printed)| {
            let derived = derived.coefficient(&shift).re;
            ComparisonRow {
                difference: (derived - printed).abs(),
                shift,
                printed,
                derived,
            }
        })
        .collect();
    let max_difference = rows.iter().map(|r| r.difference).fold(0.0, f64::max);
    Some(Comparison {
        name,
        rows,
        max_difference,
    })
}
