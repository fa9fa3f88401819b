use stratmean::datasets::{self, ORCHARDS_ID, SUGARCANE_ID};
use stratmean::montecarlo::{combination_count, Method};
use stratmean::mse::{evaluate, resolve, standard_specs};
use stratmean::{
    enumerate_exhaustive, replicate, synthesize_population, EstimatorKind, EstimatorSpec,
    FinitePopulation, MseResult, ResolvedConstants, SampleStats, ShapeParams,
};

use crate::args::{Command, InputArgs, SelectArgs};
use crate::error::{CliError, CliResult};
use crate::ingest::{self, Input};
use crate::render::{Cell, Precision, Report};

/// A rendered report plus an optional failure to report after it is
/// written (used by `--strict`).
pub struct Outcome {
    pub output: String,
    pub failure: Option<CliError>,
}

const CONSTANT_COLUMNS: [&str; 6] = ["w", "p", "a", "b", "k1", "k2"];

pub fn run(command: &Command) -> CliResult<Outcome> {
    let (input, name) = match command {
        Command::Moments(input) => (input, "moments"),
        Command::Estimate { input, .. } => (input, "estimate"),
        Command::Mse { input, .. } => (input, "mse"),
        Command::Optimize { input, .. } => (input, "optimize"),
        Command::Table { input, .. } => (input, "table"),
        Command::Simulate { input, .. } => (input, "simulate"),
    };
    let precision = if input.full_precision {
        Precision::Full
    } else {
        Precision::Short
    };
    let (report, failure) = build(command, input).map_err(|e| e.context(name))?;
    Ok(Outcome {
        output: report.render(input.output_format, precision)?,
        failure,
    })
}

fn build(command: &Command, input: &InputArgs) -> CliResult<(Report, Option<CliError>)> {
    if let Command::Table {
        paper_layout: true,
        estimators,
        ..
    } = command
    {
        return Ok((paper_layout(estimators.as_deref())?, None));
    }
    let data = load(input)?;
    let report = match command {
        Command::Moments(_) => moments(&data)?,
        Command::Estimate {
            select, ybar, xbar, ..
        } => estimate(&data, select, *ybar, *xbar)?,
        Command::Mse { select, .. } => mse_report(&data, &specs(select, &ALL_ROWS, false)?)?,
        Command::Optimize { select, .. } => {
            let dual_and_shape = [
                EstimatorKind::T1,
                EstimatorKind::T2,
                EstimatorKind::T3,
                EstimatorKind::T4,
                EstimatorKind::T5,
                EstimatorKind::T6,
            ];
            mse_report(&data, &specs(select, &dual_and_shape, true)?)?
        }
        Command::Table { estimators, .. } => {
            let mut rows = standard_specs();
            if let Some(list) = estimators {
                let keep = parse_kinds(list)?;
                rows.retain(|spec| keep.contains(&spec.kind));
            }
            mse_report(&data, &rows)?
        }
        Command::Simulate {
            select,
            reps,
            seed,
            exhaustive,
            strict,
            ..
        } => {
            let rows = if select.estimators.is_some() {
                specs(select, &ALL_ROWS, false)?
            } else {
                standard_specs()
            };
            let (report, agree) = simulate(&data, &rows, *reps, *seed, *exhaustive)?;
            let failure = (*strict && !agree)
                .then(|| CliError::strict("an empirical value disagrees with first-order theory"));
            return Ok((report, failure));
        }
    };
    Ok((report, None))
}

const ALL_ROWS: [EstimatorKind; 9] = EstimatorKind::ALL;

fn load(input: &InputArgs) -> CliResult<Input> {
    let data = input
        .data
        .as_deref()
        .ok_or_else(|| CliError::usage("usage", "--data is required"))?;
    ingest::load(data, input.format, input.sample_sizes.as_deref())
}

fn parse_kinds(list: &str) -> CliResult<Vec<EstimatorKind>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.parse().map_err(|_| {
                CliError::usage(
                    "unknown_estimator",
                    format!("unknown estimator `{}`", s.trim()),
                )
            })
        })
        .collect()
}

/// Turns the constant flags into one spec per selected estimator.
///
/// Constants that are not given must be covered by `--optimal` (implied by
/// `optimize`); baselines take no constants.
pub fn specs(
    select: &SelectArgs,
    default: &[EstimatorKind],
    optimal: bool,
) -> CliResult<Vec<EstimatorSpec>> {
    let optimal = optimal || select.optimal;
    let kinds = match &select.estimators {
        Some(list) => parse_kinds(list)?,
        None => default.to_vec(),
    };
    if kinds.is_empty() {
        return Err(CliError::usage("usage", "no estimators selected"));
    }
    let missing = |kind: EstimatorKind, what: &str| {
        CliError::usage(
            "missing_parameter",
            format!("{kind} needs {what}, or pass --optimal"),
        )
    };
    kinds
        .into_iter()
        .map(|kind| {
            let mut spec = EstimatorSpec::new(kind);
            match kind {
                EstimatorKind::T1 | EstimatorKind::T3 | EstimatorKind::T5 => match select.w {
                    Some(w) => spec = spec.with_shape(ShapeParams::power(w)),
                    None if optimal => spec = spec.with_optimal_shape(),
                    None => return Err(missing(kind, "--w")),
                },
                EstimatorKind::T2 | EstimatorKind::T4 | EstimatorKind::T6 => {
                    match (select.p, select.a, select.b) {
                        (Some(p), Some(a), Some(b)) => {
                            spec = spec.with_shape(ShapeParams::transform(p, a, b))
                        }
                        (None, None, None) if optimal => spec = spec.with_optimal_shape(),
                        _ => return Err(missing(kind, "--p, --a and --b")),
                    }
                }
                _ => {}
            }
            if kind.has_duals() {
                match (select.k1, select.k2) {
                    (Some(k1), Some(k2)) => spec = spec.with_duals(k1, k2),
                    (None, None) if optimal => spec = spec.with_optimal_duals(),
                    _ => return Err(missing(kind, "--k1 and --k2")),
                }
            }
            Ok(spec)
        })
        .collect()
}

fn constant_cells(c: &ResolvedConstants) -> Vec<Cell> {
    [c.w, c.p, c.a, c.b, c.k1, c.k2]
        .into_iter()
        .map(Cell::Num)
        .collect()
}

fn moments(data: &Input) -> CliResult<Report> {
    let m = data.design.moments()?;
    let mut report = Report::new(&[
        "mean_y",
        "mean_x",
        "ratio",
        "var_ybar",
        "var_xbar",
        "cov_xybar",
    ])
    .meta("label", Cell::Text(data.design.label.clone()))
    .meta("strata", Cell::Int(data.design.strata.len() as u64))
    .meta("population_size", Cell::Int(data.design.population_size()))
    .meta("sample_size", Cell::Int(data.design.sample_size()));
    report.push(
        [
            m.mean_y,
            m.mean_x,
            m.ratio,
            m.var_ybar,
            m.var_xbar,
            m.cov_xybar,
        ]
        .into_iter()
        .map(Cell::num)
        .collect(),
    );
    Ok(report)
}

fn estimate(data: &Input, select: &SelectArgs, ybar: f64, xbar: f64) -> CliResult<Report> {
    let m = data.design.moments()?;
    let stats = SampleStats::new(ybar, xbar);
    let mut columns = vec!["estimator", "estimate"];
    columns.extend(CONSTANT_COLUMNS);
    let mut report = Report::new(&columns)
        .meta("label", Cell::Text(data.design.label.clone()))
        .meta("known_mean_x", Cell::num(m.mean_x));
    for spec in specs(select, &ALL_ROWS, false)? {
        let (estimator, _) = resolve(&spec, &m)?;
        let value = estimator.estimate(&stats, m.mean_x)?;
        let mut row = vec![Cell::Text(spec.kind.name().to_string()), Cell::num(value)];
        row.extend(constant_cells(&ResolvedConstants::of(&estimator)));
        report.push(row);
    }
    Ok(report)
}

fn result_row(r: &MseResult) -> Vec<Cell> {
    let mut row = vec![
        Cell::Text(r.estimator.kind.name().to_string()),
        Cell::num(r.mse),
        Cell::num(r.pre),
        Cell::num(r.bias),
    ];
    row.extend(constant_cells(&r.constants));
    row
}

fn mse_report(data: &Input, specs: &[EstimatorSpec]) -> CliResult<Report> {
    let m = data.design.moments()?;
    let mut columns = vec!["estimator", "mse", "pre", "bias"];
    columns.extend(CONSTANT_COLUMNS);
    let mut report = Report::new(&columns).meta("label", Cell::Text(data.design.label.clone()));
    for spec in specs {
        let result = evaluate(spec, &m)?;
        if result.degenerate {
            report.notes.push(format!(
                "{}: optimum not identified, boundary constants used",
                spec.kind.name()
            ));
        }
        report.push(result_row(&result));
    }
    Ok(report)
}

fn simulate(
    data: &Input,
    specs: &[EstimatorSpec],
    reps: u64,
    seed: u64,
    exhaustive: bool,
) -> CliResult<(Report, bool)> {
    let sizes = data.design.sample_sizes();
    let population = match &data.microdata {
        Some(units) => FinitePopulation::from_microdata(&data.design.label, units),
        None => synthesize_population(&data.design, seed)?,
    };
    let result = if exhaustive {
        enumerate_exhaustive(&population, &sizes, specs)?
    } else {
        replicate(&population, &sizes, specs, reps, seed)?
    };
    let sizes_text = sizes
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let mut columns = vec!["estimator"];
    columns.extend(CONSTANT_COLUMNS);
    columns.extend([
        "samples",
        "failures",
        "bias",
        "bias_se",
        "theory_bias",
        "mse",
        "mse_se",
        "theory_mse",
        "bias_agrees",
        "mse_agrees",
    ]);
    let agree = result.all_agree();
    let mut report = Report::new(&columns)
        .meta("label", Cell::Text(result.label.clone()))
        .meta(
            "method",
            Cell::Text(
                match result.method {
                    Method::Replication => "replication",
                    Method::Exhaustive => "exhaustive",
                }
                .to_string(),
            ),
        )
        .meta("samples", Cell::Int(result.samples))
        .meta(
            "seed",
            result.seed.map_or(Cell::Text("-".to_string()), Cell::Int),
        )
        .meta("sample_sizes", Cell::Text(sizes_text))
        .meta(
            "population",
            Cell::Text(population.provenance.generator.clone()),
        )
        .meta("all_agree", Cell::Flag(Some(agree)));
    if exhaustive {
        report = report.meta(
            "combinations",
            Cell::Int(combination_count(&population, &sizes) as u64),
        );
    }
    for row in &result.rows {
        let mut cells = vec![Cell::Text(row.estimator.kind.name().to_string())];
        cells.extend(constant_cells(&row.constants));
        cells.extend([
            Cell::Int(row.replications),
            Cell::Int(row.failures),
            Cell::num(row.empirical_bias),
            Cell::num(row.bias_se),
            Cell::num(row.theoretical_bias),
            Cell::num(row.empirical_mse),
            Cell::num(row.mse_se),
            Cell::num(row.theoretical_mse),
            Cell::Flag(row.bias_agrees),
            Cell::Flag(row.mse_agrees),
        ]);
        report.push(cells);
    }
    if result.method == Method::Replication && result.samples < result.policy.min_replications {
        report.notes.push(format!(
            "fewer than {} samples: no agreement verdicts",
            result.policy.min_replications
        ));
    }
    Ok((report, agree))
}

/// Both bundled datasets side by side under the printed column headers,
/// computed next to published values.
fn paper_layout(estimators: Option<&str>) -> CliResult<Report> {
    let keep = estimators.map(parse_kinds).transpose()?;
    // Printed order: Data-1 first.
    let ids = [ORCHARDS_ID, SUGARCANE_ID];
    let mut columns = vec!["estimator".to_string()];
    for id in ids {
        let header = datasets::published_header(id).expect("bundled dataset");
        for field in ["mse", "pre", "printed_mse", "printed_pre"] {
            columns.push(format!("{header}_{field}"));
        }
    }
    let mut report = Report {
        columns,
        ..Report::default()
    };
    let mut computed = Vec::new();
    for id in ids {
        let design = datasets::lookup(id).expect("bundled dataset").validate()?;
        let m = design.moments()?;
        let rows = standard_specs()
            .iter()
            .map(|spec| evaluate(spec, &m))
            .collect::<stratmean::Result<Vec<_>>>()?;
        computed.push((rows, datasets::published(id).expect("bundled dataset")));
    }
    for (i, spec) in standard_specs().iter().enumerate() {
        if keep.as_ref().is_some_and(|k| !k.contains(&spec.kind)) {
            continue;
        }
        let mut row = vec![Cell::Text(spec.kind.name().to_string())];
        for (rows, printed) in &computed {
            row.extend([
                Cell::num(rows[i].mse),
                Cell::num(rows[i].pre),
                Cell::num(printed[i].mse),
                Cell::num(printed[i].pre),
            ]);
        }
        report.push(row);
    }
    for id in ids {
        report.notes.push(format!(
            "{} holds dataset {id}",
            datasets::published_header(id).expect("bundled dataset")
        ));
    }
    Ok(report)
}
