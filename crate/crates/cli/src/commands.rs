//! One builder per subcommand. Parameters are validated here so that bad
//! ranges become usage errors instead of panics deeper down.

use serde_json::{Map, Value};
use w1simplex::bourn_recurrence::build_grid;
use w1simplex::exact_math::{int, to_f64, Rational};
use w1simplex::moment_engine::{
    build_f, build_g, density_diagnostics, first_moment, moment_report, printed_density,
    second_moment, volume_poly,
};
use w1simplex::simplex_mc::estimate_moments;
use w1simplex::verify::{verify, Fault, Level};
use w1simplex::{BivarPoly, McConfig};

use crate::output::{Cell, Report, Table};
use crate::{CliError, Command, FaultArg, LevelArg, Outcome, Show, Which};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn params(digits: usize, pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    let mut map: Map<String, Value> = pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    map.insert("digits".into(), Value::from(digits));
    map
}

fn ok(command: &str, parameters: Map<String, Value>, tables: Vec<Table>) -> Outcome {
    Outcome {
        report: Report {
            command: command.to_string(),
            parameters,
            tables,
        },
        failure: None,
    }
}

pub fn run(command: &Command, digits: usize) -> Result<Outcome, CliError> {
    match *command {
        Command::Moments { n_min, n_max } => moments(n_min, n_max, digits),
        Command::Poly { n, which } => poly(n, which, digits),
        Command::Recurrence { p_max, q_max, show } => recurrence(p_max, q_max, show, digits),
        Command::Mc {
            n,
            samples,
            seed,
            bins,
            threads,
        } => mc(
            McConfig {
                n,
                samples,
                seed,
                bins,
                threads,
            },
            digits,
        ),
        Command::Density {
            n,
            points,
            mc_samples,
            seed,
            bins,
        } => density(n, points, mc_samples, seed, bins, digits),
        Command::Verify {
            level,
            inject_fault,
        } => verify_cmd(level, inject_fault, digits),
    }
}

pub fn moments(n_min: u32, n_max: u32, digits: usize) -> Result<Outcome, CliError> {
    if n_min < 2 || n_min > n_max {
        return Err(usage(format!(
            "need 2 <= n-min <= n-max, got n-min = {n_min}, n-max = {n_max}"
        )));
    }
    let mut table = Table::new(
        "moments",
        &[
            "n",
            "first",
            "second",
            "variance",
            "normalized_first",
            "normalized_second",
            "normalized_variance",
            "first_exact",
            "second_exact",
            "variance_exact",
            "normalized_first_exact",
            "normalized_second_exact",
            "normalized_variance_exact",
            "asymptotic_first",
            "asymptotic_variance",
        ],
    );
    for n in n_min..=n_max {
        let r = moment_report(n);
        table.push(vec![
            Cell::int(n),
            Cell::Float(r.float_first),
            Cell::Float(r.float_second),
            Cell::Float(r.float_variance),
            Cell::Float(r.float_normalized_first),
            Cell::Float(r.float_normalized_second),
            Cell::Float(r.float_normalized_variance),
            Cell::Exact(r.first_moment),
            Cell::Exact(r.second_moment),
            Cell::Exact(r.variance),
            Cell::Exact(r.normalized_first),
            Cell::Exact(r.normalized_second),
            Cell::Exact(r.normalized_variance),
            Cell::Float(r.asymptotic_first),
            Cell::Float(r.asymptotic_variance),
        ]);
    }
    let p = params(
        digits,
        vec![("n_min", Value::from(n_min)), ("n_max", Value::from(n_max))],
    );
    Ok(ok("moments", p, vec![table]))
}

pub fn poly(n: u32, which: Which, digits: usize) -> Result<Outcome, CliError> {
    if n < 1 {
        return Err(usage("need n >= 1"));
    }
    let (name, poly): (&str, BivarPoly) = match which {
        Which::F => ("F", build_f(n)),
        Which::G => ("G", build_g(n)),
        Which::V => ("V", volume_poly(n)),
    };
    let mut summary = Table::new("polynomial", &["which", "n", "terms", "expression"]);
    summary.push(vec![
        Cell::text(name),
        Cell::int(n),
        Cell::int(poly.len() as u64),
        Cell::text(poly.to_string()),
    ]);
    let mut terms = Table::new("terms", &["s_degree", "t_degree", "coefficient"]);
    for (&(ds, dt), c) in poly.terms_descending_s() {
        terms.push(vec![Cell::int(ds), Cell::int(dt), Cell::Exact(c.clone())]);
    }
    let p = params(
        digits,
        vec![("n", Value::from(n)), ("which", Value::from(name))],
    );
    Ok(ok("poly", p, vec![summary, terms]))
}

pub fn recurrence(p_max: u32, q_max: u32, show: Show, digits: usize) -> Result<Outcome, CliError> {
    if p_max < 1 || q_max < 1 {
        return Err(usage("need p-max >= 1 and q-max >= 1"));
    }
    let grid = build_grid(p_max, q_max);
    let name = match show {
        Show::M => "M",
        Show::L => "L",
    };
    let mut columns = vec!["p".to_string()];
    columns.extend((0..=q_max).map(|q| format!("q{q}")));
    let mut table = Table::with_columns(name, columns);
    for p in 0..=p_max {
        let mut row = vec![Cell::int(p)];
        row.extend((0..=q_max).map(|q| match show {
            Show::M => Cell::Exact(grid.m(p, q).clone()),
            Show::L => Cell::Int(grid.l(p, q).clone()),
        }));
        table.push(row);
    }
    let p = params(
        digits,
        vec![
            ("p_max", Value::from(p_max)),
            ("q_max", Value::from(q_max)),
            ("show", Value::from(name)),
        ],
    );
    Ok(ok("recurrence", p, vec![table]))
}

fn histogram_table(est: &w1simplex::McEstimate) -> Table {
    let mut t = Table::new(
        "histogram",
        &["left", "right", "count", "frequency", "density"],
    );
    let total = est.samples as f64;
    for bin in &est.histogram {
        let freq = bin.count as f64 / total;
        t.push(vec![
            Cell::Float(bin.left),
            Cell::Float(bin.right),
            Cell::int(bin.count),
            Cell::Float(freq),
            Cell::Float(freq / (bin.right - bin.left)),
        ]);
    }
    t
}

pub fn mc(cfg: McConfig, digits: usize) -> Result<Outcome, CliError> {
    if cfg.n < 2 || cfg.samples < 1 || cfg.bins < 1 {
        return Err(usage("need n >= 2, samples >= 1 and bins >= 1"));
    }
    if cfg.threads == Some(0) {
        return Err(usage("need threads >= 1"));
    }
    let n = u32::try_from(cfg.n).map_err(|_| usage("n too large"))?;
    let est = estimate_moments(&cfg)?;
    let exact_first = first_moment(n);
    let exact_second = second_moment(n);
    // Undefined for a single sample, where the standard error is zero.
    let z = |est: f64, exact: &Rational, se: f64| {
        if se > 0.0 {
            Cell::Float((est - to_f64(exact)) / se)
        } else {
            Cell::text("")
        }
    };
    let mut summary = Table::new(
        "estimate",
        &[
            "n",
            "samples",
            "seed",
            "mean_w1",
            "std_error_mean",
            "mean_w1_sq",
            "std_error_sq",
            "exact_first",
            "exact_second",
            "exact_first_float",
            "exact_second_float",
            "z_first",
            "z_second",
        ],
    );
    summary.push(vec![
        Cell::int(n),
        Cell::int(est.samples),
        Cell::int(est.seed),
        Cell::Float(est.mean_w1),
        Cell::Float(est.std_error_mean),
        Cell::Float(est.mean_w1_sq),
        Cell::Float(est.std_error_sq),
        Cell::Exact(exact_first.clone()),
        Cell::Exact(exact_second.clone()),
        Cell::Float(to_f64(&exact_first)),
        Cell::Float(to_f64(&exact_second)),
        z(est.mean_w1, &exact_first, est.std_error_mean),
        z(est.mean_w1_sq, &exact_second, est.std_error_sq),
    ]);
    let p = params(
        digits,
        vec![
            ("n", Value::from(cfg.n)),
            ("samples", Value::from(cfg.samples)),
            ("seed", Value::from(cfg.seed)),
            ("bins", Value::from(cfg.bins)),
            ("threads", cfg.threads.map_or(Value::Null, Value::from)),
        ],
    );
    Ok(ok("mc", p, vec![summary, histogram_table(&est)]))
}

pub fn density(
    n: u32,
    points: usize,
    mc_samples: u64,
    seed: u64,
    bins: usize,
    digits: usize,
) -> Result<Outcome, CliError> {
    if points < 2 {
        return Err(usage("need points >= 2"));
    }
    let d = printed_density(n)?;
    let diag = density_diagnostics(n)?;
    let upper = int(n - 1);
    let steps = int(points as u64 - 1);

    let mut curve = Table::new("curve", &["t", "p", "t_exact", "p_exact"]);
    for i in 0..points {
        let t = &upper * int(i as u64) / &steps;
        let value = d
            .piece_at(&t)
            .map(|piece| piece.eval(&t))
            .unwrap_or_else(|| int(0));
        curve.push(vec![
            Cell::Float(to_f64(&t)),
            Cell::Float(to_f64(&value)),
            Cell::Exact(t),
            Cell::Exact(value),
        ]);
    }

    let gap = diag
        .continuity_gap_at_1
        .clone()
        .map_or(Cell::text(""), Cell::Exact);
    let gap_f = diag
        .continuity_gap_at_1
        .as_ref()
        .map_or(Cell::text(""), |g| Cell::Float(to_f64(g)));
    let mut diagnostics = Table::new(
        "diagnostics",
        &[
            "n",
            "mass",
            "mean",
            "second_moment",
            "continuity_gap_at_1",
            "expected_mean",
            "expected_second_moment",
            "mass_float",
            "mean_float",
            "second_moment_float",
            "continuity_gap_at_1_float",
        ],
    );
    let expected_mean = first_moment(n);
    let expected_second = second_moment(n);
    diagnostics.push(vec![
        Cell::int(n),
        Cell::Exact(diag.mass.clone()),
        Cell::Exact(diag.mean.clone()),
        Cell::Exact(diag.second_moment.clone()),
        gap,
        Cell::Exact(expected_mean),
        Cell::Exact(expected_second),
        Cell::Float(to_f64(&diag.mass)),
        Cell::Float(to_f64(&diag.mean)),
        Cell::Float(to_f64(&diag.second_moment)),
        gap_f,
    ]);

    let mut tables = vec![curve, diagnostics];
    if mc_samples > 0 {
        if bins < 1 {
            return Err(usage("need bins >= 1"));
        }
        let est = estimate_moments(&McConfig {
            n: n as usize,
            samples: mc_samples,
            seed,
            bins,
            threads: None,
        })?;
        let mut cmp = Table::new(
            "mc_comparison",
            &["left", "right", "histogram_density", "printed_density_mid"],
        );
        let total = est.samples as f64;
        for bin in &est.histogram {
            let width = bin.right - bin.left;
            cmp.push(vec![
                Cell::Float(bin.left),
                Cell::Float(bin.right),
                Cell::Float(bin.count as f64 / (total * width)),
                Cell::Float(d.eval_f64(0.5 * (bin.left + bin.right))),
            ]);
        }
        let mut summary = Table::new("mc_summary", &["samples", "seed", "bins", "l1_distance"]);
        summary.push(vec![
            Cell::int(mc_samples),
            Cell::int(seed),
            Cell::int(bins as u64),
            Cell::Float(est.density_l1_distance(|t| d.eval_f64(t))),
        ]);
        tables.push(cmp);
        tables.push(summary);
    }

    let mut pairs = vec![("n", Value::from(n)), ("points", Value::from(points))];
    if mc_samples > 0 {
        pairs.extend([
            ("mc_samples", Value::from(mc_samples)),
            ("seed", Value::from(seed)),
            ("bins", Value::from(bins)),
        ]);
    }
    Ok(ok("density", params(digits, pairs), tables))
}

pub fn verify_cmd(
    level: LevelArg,
    fault: Option<FaultArg>,
    digits: usize,
) -> Result<Outcome, CliError> {
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let fault = fault.map(|f| match f {
        FaultArg::FlipF1Sign => Fault::FlipF1Sign,
    });
    let report = verify(level, fault);
    let mut table = Table::new("suites", &["suite", "passed", "checks", "detail"]);
    for s in &report.suites {
        table.push(vec![
            Cell::text(s.name.clone()),
            Cell::Bool(s.passed),
            Cell::int(s.checks as u64),
            Cell::text(s.detail.clone()),
        ]);
    }
    let mut pairs = vec![(
        "level",
        Value::from(match level {
            Level::Fast => "fast",
            Level::Full => "full",
        }),
    )];
    if let Some(f) = fault {
        pairs.push(("inject_fault", serde_json::to_value(f).expect("plain enum")));
    }
    let mut outcome = ok("verify", params(digits, pairs), vec![table]);
    outcome.failure = report
        .first_failure()
        .map(|s| format!("{}: {}", s.name, s.detail));
    Ok(outcome)
}
