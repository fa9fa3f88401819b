//! Loading designs from bundled ids, summary JSON or unit-level CSV.
//!
//! Summary JSON:
//!
//! ```json
//! {"label": "farms", "known_mean_x": 12.5,
//!  "strata": [{"N": 40, "n": 5, "mean_y": 3.1, "mean_x": 12.0,
//!              "var_y": 1.2, "var_x": 4.0, "rho": 0.7}]}
//! ```
//!
//! Each stratum carries exactly one of `cov_xy` or `rho`.
//!
//! Microdata CSV has header `stratum,y,x`, one row per population unit.
//! Sample sizes come from a sidecar CSV with header `stratum,n`. Strata are
//! numbered in order of first appearance.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use stratmean::datasets;
use stratmean::{DesignSummary, Microdata, StratumSummary, StratumUnits, ValidatedDesign};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    SummaryJson,
    MicrodataCsv,
}

/// A loaded design, with the unit-level population when it was supplied.
#[derive(Debug, Clone)]
pub struct Input {
    pub design: ValidatedDesign,
    pub microdata: Option<Microdata>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryFile {
    label: Option<String>,
    known_mean_x: Option<f64>,
    strata: Vec<SummaryStratum>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryStratum {
    #[serde(rename = "N")]
    population: u64,
    n: u64,
    mean_y: f64,
    mean_x: f64,
    var_y: f64,
    var_x: f64,
    cov_xy: Option<f64>,
    rho: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct UnitRow {
    stratum: String,
    y: f64,
    x: f64,
}

#[derive(Debug, Deserialize)]
struct SizeRow {
    stratum: String,
    n: u64,
}

/// Resolves `--data`: a bundled id or a file path.
pub fn load(
    data: &str,
    format: Option<InputFormat>,
    sample_sizes: Option<&Path>,
) -> CliResult<Input> {
    if let Some(summary) = datasets::lookup(data) {
        return Ok(Input {
            design: summary.validate()?,
            microdata: None,
        });
    }
    let path = Path::new(data);
    if !path.exists() {
        return Err(CliError::data(
            "unknown_dataset",
            format!("`{data}` is neither a bundled dataset nor a readable file"),
        ));
    }
    let format = format.unwrap_or_else(|| infer_format(path));
    match format {
        InputFormat::SummaryJson => {
            let text = fs::read_to_string(path)?;
            Ok(Input {
                design: parse_summary_json(&text, &file_label(path))?.validate()?,
                microdata: None,
            })
        }
        InputFormat::MicrodataCsv => {
            let text = fs::read_to_string(path)?;
            let data = parse_microdata_csv(&text)?;
            let sidecar = sample_sizes
                .map(Path::to_path_buf)
                .unwrap_or_else(|| default_sidecar(path));
            if !sidecar.exists() {
                return Err(CliError::data(
                    "schema_error",
                    format!(
                        "microdata needs per-stratum sample sizes; pass --sample-sizes or create {}",
                        sidecar.display()
                    ),
                ));
            }
            let sizes = parse_sample_sizes(&fs::read_to_string(&sidecar)?, &data.labels)?;
            let design = data.summarize(&file_label(path), &sizes)?.validate()?;
            Ok(Input {
                design,
                microdata: Some(data),
            })
        }
    }
}

fn infer_format(path: &Path) -> InputFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::MicrodataCsv,
        _ => InputFormat::SummaryJson,
    }
}

fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_string())
}

/// `units.csv` pairs with `units.sizes.csv`.
pub fn default_sidecar(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.sizes.csv"))
}

pub fn parse_summary_json(text: &str, default_label: &str) -> CliResult<DesignSummary> {
    let file: SummaryFile = serde_json::from_str(text).map_err(|e| {
        CliError::data(
            "parse_error",
            format!("line {} column {}: {e}", e.line(), e.column()),
        )
    })?;
    let strata = file
        .strata
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let index = i + 1;
            match (s.cov_xy, s.rho) {
                (Some(cov_xy), None) => Ok(StratumSummary {
                    index,
                    population_size: s.population,
                    sample_size: s.n,
                    mean_y: s.mean_y,
                    mean_x: s.mean_x,
                    var_y: s.var_y,
                    var_x: s.var_x,
                    cov_xy,
                }),
                (None, Some(rho)) => Ok(StratumSummary::with_correlation(
                    index,
                    s.population,
                    s.n,
                    s.mean_y,
                    s.mean_x,
                    s.var_y,
                    s.var_x,
                    rho,
                )),
                _ => Err(CliError::data(
                    "schema_error",
                    format!("stratum {index}: give exactly one of cov_xy or rho"),
                )),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut design = DesignSummary::new(
        file.label.unwrap_or_else(|| default_label.to_string()),
        strata,
    );
    design.known_mean_x = file.known_mean_x;
    Ok(design)
}

fn csv_error(err: csv::Error) -> CliError {
    let line = err
        .position()
        .map(|p| format!("line {}: ", p.line()))
        .unwrap_or_default();
    CliError::data("parse_error", format!("{line}{err}"))
}

fn check_header(reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> CliResult<()> {
    let header = reader.headers().map_err(csv_error)?;
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != expected {
        return Err(CliError::data(
            "schema_error",
            format!("line 1: expected header `{}`", expected.join(",")),
        ));
    }
    Ok(())
}

pub fn parse_microdata_csv(text: &str) -> CliResult<Microdata> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    check_header(&mut reader, &["stratum", "y", "x"])?;
    let mut data = Microdata::default();
    let mut slots: HashMap<String, usize> = HashMap::new();
    for record in reader.deserialize::<UnitRow>() {
        let row = record.map_err(csv_error)?;
        if !row.y.is_finite() || !row.x.is_finite() {
            return Err(CliError::data(
                "parse_error",
                format!("stratum {}: non-finite value", row.stratum),
            ));
        }
        let slot = *slots.entry(row.stratum.clone()).or_insert_with(|| {
            data.labels.push(row.stratum.clone());
            data.strata.push(StratumUnits::default());
            data.strata.len() - 1
        });
        data.strata[slot].push(row.y, row.x);
    }
    if data.strata.is_empty() {
        return Err(CliError::data("schema_error", "microdata has no rows"));
    }
    Ok(data)
}

/// Sample sizes in the order of `labels`.
pub fn parse_sample_sizes(text: &str, labels: &[String]) -> CliResult<Vec<u64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    check_header(&mut reader, &["stratum", "n"])?;
    let mut sizes = HashMap::new();
    for record in reader.deserialize::<SizeRow>() {
        let row = record.map_err(csv_error)?;
        sizes.insert(row.stratum, row.n);
    }
    labels
        .iter()
        .map(|label| {
            sizes.get(label).copied().ok_or_else(|| {
                CliError::data(
                    "schema_error",
                    format!("no sample size for stratum `{label}`"),
                )
            })
        })
        .collect()
}
