//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit on
//! any failure.

use std::process::ExitCode;
use std::time::Instant;

use kksampling::analysis::modulus_properties_check;
use kksampling::operators::{fourier_side_projection, quasi_projection, TruncationPolicy};
use kksampling::synthesis::{moment_defect, synthesize_averager, synthesize_kernel, DEFECT_TOL};
use kksampling::{
    corpus, Averager, DilationMatrix, EvalGrid, Kernel, QuadratureSpec, SincPairing, TestFunction, TrigPolynomial,
};
use kksampling_cli::commands;
use kksampling_cli::ExperimentConfig;

/// Coefficient agreement for the closed-form syntheses.
const COEFF_TOL: f64 = 1e-12;
/// A defect above this at order `n + 1` shows the order is sharp.
const SHARP_FLOOR: f64 = 1e-4;
/// Reproduction of band-limited data.
const REPRO_TOL: f64 = 1e-6;
/// Fourier route against the spatial route.
const ROUTE_TOL: f64 = 1e-7;
/// Largest `max C / min C` accepted as "a single constant across levels".
const SPREAD_TOL: f64 = 2.0;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap_or_else(|e| panic!("bad acceptance config: {e}\n{text}"))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= COEFF_TOL
}

/// Exactly the listed coefficients, each to [`COEFF_TOL`].
fn matches_table(t: &TrigPolynomial, table: &[(Vec<i64>, f64)]) -> bool {
    let listed = table
        .iter()
        .all(|(l, v)| close(t.coefficient(l).re, *v) && t.coefficient(l).im.abs() <= COEFF_TOL);
    let extra = t
        .terms()
        .all(|(l, c)| table.iter().any(|(m, _)| m == l) || c.norm() <= COEFF_TOL);
    listed && extra
}

fn criterion_1() -> Outcome {
    let k1 = synthesize_kernel(&Averager::unit_box(1), 4).expect("d = 1 synthesis");
    let t1 = k1.trig_symbol().expect("symbol");
    let want1 = vec![
        (vec![0], 11.0 / 12.0),
        (vec![1], 5.0 / 24.0),
        (vec![2], -1.0 / 6.0),
        (vec![3], 1.0 / 24.0),
    ];
    let ok1 = matches_table(t1, &want1);

    let k2 = synthesize_kernel(&Averager::unit_box(2), 4).expect("d = 2 synthesis");
    let t2 = k2.trig_symbol().expect("symbol");
    let mut want2 = vec![(vec![0, 0], 5.0 / 6.0)];
    for (l, v) in [(1, 5.0 / 24.0), (2, -4.0 / 24.0), (3, 1.0 / 24.0)] {
        want2.push((vec![l, 0], v));
        want2.push((vec![0, l], v));
    }
    let ok2 = matches_table(t2, &want2);

    let report =
        commands::synthesize(&config("[kernel]\nvariant = \"synthesized\"\norder = 4\n")).expect("cli synthesize");
    let cli_diff = report.json["reference"]["max_difference"]
        .as_f64()
        .unwrap_or(f64::INFINITY);
    outcome(
        ok1 && ok2 && cli_diff <= COEFF_TOL,
        format!(
            "d=1 T = ({:.15}, {:.15}, {:.15}, {:.15}); d=2 constant {:.15}, axis structure {}; cli reference diff {cli_diff:e}",
            t1.coefficient(&[0]).re,
            t1.coefficient(&[1]).re,
            t1.coefficient(&[2]).re,
            t1.coefficient(&[3]).re,
            t2.coefficient(&[0, 0]).re,
            if ok2 { "matches" } else { "differs" }
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(String, Kernel, Averager, usize)> = Vec::new();
    let bases = [
        ("box d=1", Averager::unit_box(1)),
        ("box d=2", Averager::unit_box(2)),
        ("ball d=2", Averager::ball(2, 1.0).expect("ball")),
    ];
    for n in 1..=4 {
        for (name, a) in &bases {
            let k = synthesize_kernel(a, n).expect("kernel synthesis");
            cases.push((format!("{name} n={n}"), k, a.clone(), n));
        }
        for delta in [0.5, 1.0] {
            let br = Kernel::bochner_riesz(2, delta).expect("kernel");
            let combo = synthesize_averager(&br, &Averager::unit_box(2), n).expect("averager synthesis");
            cases.push((format!("BR delta={delta} n={n}"), br, combo, n));
        }
    }
    let mut worst_at_n: f64 = 0.0;
    let mut weakest_next = f64::INFINITY;
    let mut promoted = Vec::new();
    let mut failures = Vec::new();
    for (name, k, a, n) in &cases {
        let at_n = moment_defect(k, a, *n).expect("defect");
        let next = moment_defect(k, a, n + 1).expect("defect");
        worst_at_n = worst_at_n.max(at_n);
        let ok_n = at_n < DEFECT_TOL;
        // odd derivatives of an origin-symmetric pair vanish, so order one
        // already gives order two; sharpness is then checked one order up
        let symmetric_one = *n == 1 && a.is_origin_symmetric() && k.is_origin_symmetric();
        let ok_next = if symmetric_one {
            let third = moment_defect(k, a, 3).expect("defect");
            promoted.push(format!("{name} (order 2 {next:e}, order 3 {third:e})"));
            weakest_next = weakest_next.min(third);
            next <= 1e-12 && third > SHARP_FLOOR
        } else {
            weakest_next = weakest_next.min(next);
            next > SHARP_FLOOR
        };
        if !(ok_n && ok_next) {
            failures.push(format!("{name}: order n {at_n:e}, order n+1 {next:e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} pairs; max defect at n {worst_at_n:e} (< {DEFECT_TOL:e}); min defect one order past the attained order {weakest_next:e} (> {SHARP_FLOOR:e}); \
             symmetric n=1 pairs attain order 2: [{}]{}",
            cases.len(),
            promoted.join(", "),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

fn criterion_3() -> Outcome {
    let d1 = config(
        "[run]\nfunction = \"sinc2\"\nj_min = 1\nj_max = 1\nwindow = [[-4.0, 4.0]]\npoints_per_axis = 129\n\
         [kernel]\nvariant = \"sinc\"\n[averager]\nvariant = \"sinc\"\n[quadrature]\nnodes_per_axis = 24\n[truncation]\nradius = 64.0\n",
    );
    let d2 = config(
        "[run]\nfunction = \"sinc2_2d\"\nj_min = 1\nj_max = 1\nmatrix = [[2.0, 0.0], [0.0, 2.0]]\n\
         window = [[-4.0, 4.0], [-4.0, 4.0]]\npoints_per_axis = 33\n\
         [kernel]\nvariant = \"sinc\"\n[averager]\nvariant = \"sinc\"\n[quadrature]\nnodes_per_axis = 24\n[truncation]\nradius = 64.0\n",
    );
    let r1 = commands::reproduce(&d1).expect("d = 1 reproduce");
    let r2 = commands::reproduce(&d2).expect("d = 2 reproduce");
    let e1 = r1.json["levels"][0]["max_error"].as_f64().unwrap_or(f64::INFINITY);
    let e2 = r2.json["levels"][0]["max_error"].as_f64().unwrap_or(f64::INFINITY);
    let in1 = r1.json["levels"][0]["in_hypothesis"].as_bool() == Some(true);
    let in2 = r2.json["levels"][0]["in_hypothesis"].as_bool() == Some(true);
    outcome(
        in1 && in2 && e1 < REPRO_TOL && e2 < REPRO_TOL,
        format!("max grid error d=1 {e1:e}, d=2 {e2:e} (< {REPRO_TOL:e})"),
    )
}

fn converge(text: &str) -> (f64, f64, bool) {
    let report = commands::converge(&config(text)).expect("converge");
    (
        report.json["fitted_order"].as_f64().unwrap_or(f64::NAN),
        report.json["constant_spread"].as_f64().unwrap_or(f64::NAN),
        report.passed,
    )
}

const D1_GAUSSIAN: &str =
    "[run]\nfunction = \"gaussian\"\np = 2.0\nj_min = 3\nj_max = 7\nwindow = [[-4.0, 4.0]]\npoints_per_axis = 400\n";

fn criterion_4() -> Outcome {
    let a = format!(
        "{D1_GAUSSIAN}[averager]\nlo = [0.0]\nhi = [1.0]\n[modulus]\norder = 1\n[acceptance]\nexpected_order = 1.0\ntolerance = 0.25\nmax_spread = {SPREAD_TOL}\n"
    );
    let b = format!("{D1_GAUSSIAN}[modulus]\norder = 2\n[acceptance]\nexpected_order = 2.0\ntolerance = 0.3\nmax_spread = {SPREAD_TOL}\n");
    let c = format!(
        "{D1_GAUSSIAN}[kernel]\nvariant = \"synthesized\"\norder = 4\n[modulus]\norder = 4\n[acceptance]\nexpected_order = 4.0\ntolerance = 0.5\nmax_spread = {SPREAD_TOL}\n"
    );
    let d = format!(
        "[run]\nfunction = \"gaussian_2d\"\np = 2.0\nj_min = 3\nj_max = 7\nmatrix = [[1.0, -1.0], [1.0, 1.0]]\n\
             window = [[-3.0, 3.0], [-3.0, 3.0]]\npoints_per_axis = 81\n\
             [truncation]\nradius = 16.0\ncoefficient_floor = 1e-14\n[modulus]\norder = 2\n\
             [acceptance]\nexpected_order = 2.0\ntolerance = 0.4\nmax_spread = {SPREAD_TOL}\n"
    );
    let ra = converge(&a);
    let rb = converge(&b);
    let rc = converge(&c);
    let rd = converge(&d);
    outcome(
        ra.2 && rb.2 && rc.2 && rd.2,
        format!(
            "slopes a {:.3} (1.0 +- 0.25), b {:.3} (2.0 +- 0.3), c {:.3} (4.0 +- 0.5), d {:.3} (2.0 +- 0.4); \
             error / omega_n spreads {:.3}, {:.3}, {:.3}, {:.3} (<= {SPREAD_TOL})",
            ra.0, rb.0, rc.0, rd.0, ra.1, rb.1, rc.1, rd.1
        ),
    )
}

fn criterion_5() -> Outcome {
    let text = format!(
        "[run]\nfunction = \"indicator\"\np = 2.0\nj_min = 3\nj_max = 8\nwindow = [[-1.0, 2.0]]\npoints_per_axis = 2400\n\
         [modulus]\norder = 1\n[acceptance]\nexpected_order = 0.5\ntolerance = 0.15\nmax_spread = {SPREAD_TOL}\n"
    );
    let (slope, spread, passed) = converge(&text);
    outcome(
        passed,
        format!("slope {slope:.3} (0.5 +- 0.15); error / omega_1 spread {spread:.3} (<= {SPREAD_TOL})"),
    )
}

fn criterion_6() -> Outcome {
    let base = "[run]\nfunction = \"cusp\"\nj_min = 3\nj_max = 8\nwindow = [[-2.0, 2.0]]\npoints_per_axis = 800\n\
                [kernel]\nvariant = \"fejer\"\n[modulus]\norder = 1\n[acceptance]\nexpected_order = 1.0\ntolerance = 0.3\n";
    let one = converge(&base.replace("j_min = 3", "p = 1.0\nj_min = 3"));
    let inf = converge(&base.replace("j_min = 3", "p = inf\nj_min = 3"));
    outcome(
        one.2 && inf.2,
        format!("slope p=1 {:.3}, p=inf {:.3} (1.0 +- 0.3)", one.0, inf.0),
    )
}

fn criterion_7() -> Outcome {
    let pairs = [
        ("gaussian", "indicator", EvalGrid::interval(-3.0, 3.0, 600)),
        ("sinc2", "cusp", EvalGrid::interval(-6.0, 6.0, 600)),
        ("indicator", "cusp", EvalGrid::interval(-1.0, 2.0, 600)),
        ("cusp", "gaussian", EvalGrid::interval(-2.0, 2.0, 600)),
        ("gaussian_2d", "radial_bump", EvalGrid::cube(2, -2.0, 2.0, 60)),
    ];
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut worst_bound: f64 = 0.0;
    for (fid, gid, grid) in pairs {
        let f = corpus::by_id(fid).expect("corpus entry");
        let g = corpus::by_id(gid).expect("corpus entry");
        let grid = grid.expect("grid");
        for n in [1, 2, 4] {
            for p in [1.0, 2.0, f64::INFINITY] {
                for (h, lambda) in [(0.05, 2.0), (0.2, 1.5)] {
                    let r = modulus_properties_check(&f, &g, n, h, lambda, p, &grid).expect("modulus check");
                    checks += 1;
                    if r.norm_bound > 0.0 {
                        worst_bound = worst_bound.max(r.omega_f / r.norm_bound);
                    }
                    if !r.passed() {
                        failures.push(format!("{fid}+{gid} n={n} p={p} h={h}: {r:?}"));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checks} checks on 5 functions, n in {{1,2,4}}; max omega_n / (2^n ||f||) = {worst_bound:.3}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {}", failures.join("; "))
            }
        ),
    )
}

fn criterion_8() -> Outcome {
    let m = DilationMatrix::scalar(2.0).expect("matrix");
    let grid = EvalGrid::interval(-4.0, 4.0, 200).expect("grid");
    let f = TestFunction::gaussian(1);
    let q = QuadratureSpec::default();
    let trunc = TruncationPolicy::radius(64.0);
    let sinc = Kernel::sinc(1);
    let mut worst: f64 = 0.0;
    let mut worst_same: f64 = 0.0;
    let mut budget: f64 = 0.0;
    for j in [2, 3] {
        let fourier = fourier_side_projection(&f, &m, j, &grid, &trunc, &q).expect("fourier route");
        let paired = quasi_projection(
            &f,
            &sinc,
            &Averager::sinc(1, SincPairing::Fourier),
            &m,
            j,
            &grid,
            &trunc,
            &q,
        )
        .expect("fourier pairing");
        let spatial = quasi_projection(
            &f,
            &sinc,
            &Averager::sinc(1, SincPairing::Spatial { half_width: 8.0 }),
            &m,
            j,
            &grid,
            &trunc,
            &q,
        )
        .expect("spatial pairing");
        let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst = worst.max(diff(fourier.values.values(), spatial.values.values()));
        worst_same = worst_same.max(diff(fourier.values.values(), paired.values.values()));
        budget = budget.max(fourier.budget.total() + spatial.budget.total());
    }
    outcome(
        worst < ROUTE_TOL && worst_same < ROUTE_TOL,
        format!(
            "j=2,3: Fourier vs spatial pairing {worst:e}, vs Fourier pairing {worst_same:e} (< {ROUTE_TOL:e}); combined budget {budget:e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let text = format!("{D1_GAUSSIAN}[kernel]\nvariant = \"synthesized\"\norder = 4\n");
    let cfg = config(&text);
    let first = commands::converge(&cfg).expect("first run").csv.expect("csv");
    let second = commands::converge(&cfg).expect("second run").csv.expect("csv");
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    let serial = pool
        .install(|| commands::converge(&cfg))
        .expect("serial run")
        .csv
        .expect("csv");
    outcome(
        first == second && first == serial,
        format!(
            "{} bytes; repeat identical: {}; single-thread identical: {}",
            first.len(),
            first == second,
            first == serial
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; the suite always runs in full
    let criteria: [Criterion; 9] = [
        ("kernel synthesis exactness", criterion_1),
        ("moment-defect oracle", criterion_2),
        ("exact reproduction of band-limited data", criterion_3),
        ("convergence orders", criterion_4),
        ("discontinuous target", criterion_5),
        ("Fejer kernel, p = 1 and p = inf", criterion_6),
        ("modulus-estimator properties", criterion_7),
        ("Fourier-side route equivalence", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("[{tag}] {} {name}: {} ({:.1?})", i + 1, o.detail, start.elapsed());
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
