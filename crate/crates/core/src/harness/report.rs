//! CSV and provenance output.
//!
//! Reals are written in Rust's shortest round-trip form (`{:?}`), so parsing
//! a field back yields the identical `f64`. Absent optional values are empty
//! fields.

use std::fs;
use std::path::Path;

use super::{ExperimentReport, SPEC_FORMAT_VERSION};
use crate::{Error, Result};

pub const SUMMARY_HEADER: [&str; 9] = [
    "algorithm",
    "problem",
    "D",
    "N",
    "mean",
    "std",
    "success_ratio",
    "expected_fes",
    "n_trials",
];

pub const TRIALS_HEADER: [&str; 7] = [
    "algorithm",
    "problem",
    "trial",
    "seed",
    "final_value",
    "fe_at_acceptance",
    "wall_time",
];

pub const TTESTS_HEADER: [&str; 7] = [
    "algorithm",
    "reference",
    "problem",
    "t_value",
    "p_value",
    "dof",
    "significant_at_0.05",
];

pub const TRACE_HEADER: [&str; 5] = ["iteration", "fe_count", "best_value", "f", "mu"];

fn real(v: f64) -> String {
    format!("{v:?}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row of `summary.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub problem: String,
    pub dimension: usize,
    pub population: usize,
    pub mean: f64,
    pub std: f64,
    pub success_ratio: f64,
    pub expected_fes: Option<f64>,
    pub n_trials: usize,
}

/// One row of `trials.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub algorithm: String,
    pub problem: String,
    pub trial: usize,
    pub seed: u64,
    pub final_value: f64,
    pub fe_at_acceptance: Option<u64>,
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.cells
            .iter()
            .map(|c| SummaryRow {
                algorithm: c.algorithm.clone(),
                problem: c.problem.clone(),
                dimension: c.dimension,
                population: c.population,
                mean: c.stats.mean,
                std: c.stats.std,
                success_ratio: c.stats.success_ratio,
                expected_fes: c.stats.expected_fes,
                n_trials: c.stats.n_trials,
            })
            .collect()
    }

    pub fn trial_rows(&self) -> Vec<TrialRow> {
        self.cells
            .iter()
            .flat_map(|c| {
                c.trials.iter().map(move |t| TrialRow {
                    algorithm: c.algorithm.clone(),
                    problem: c.problem.clone(),
                    trial: t.trial,
                    seed: t.seed,
                    final_value: t.final_value,
                    fe_at_acceptance: t.fe_at_acceptance,
                    wall_time: t.wall_time_seconds,
                })
            })
            .collect()
    }

    /// Text of `provenance.txt`.
    pub fn provenance(&self) -> String {
        let spec = &self.spec;
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!(
            "tool = {} {}",
            env!("CARGO_PKG_NAME"),
            env!("CARGO_PKG_VERSION")
        ));
        line(format!("spec_format = {SPEC_FORMAT_VERSION}"));
        line(format!("spec_sha256 = {}", spec.digest()));
        line(format!("experiment = {}", spec.name));
        line(format!("master_seed = {}", spec.master_seed));
        line(format!("n_trials = {}", spec.n_trials));
        line("rng = ChaCha8; key = 4 x LE splitmix64(seed + i * 0x9E3779B97F4A7C15), i = 1..4; uniform = (next_u64 >> 11) * 2^-53".into());
        line("mix_seed(a, b) = splitmix64(a ^ splitmix64(b + 0x9E3779B97F4A7C15))".into());
        line("cell_seed = mix_seed(mix_seed(master_seed, algorithm_index), problem_index)".into());
        line("trial_seed = mix_seed(cell_seed, trial_index)".into());
        line("fe_count convention = N initial evaluations + N per iteration".into());
        line(String::new());
        line("[cells]".into());
        line(
            "algorithm_index,algorithm,problem_index,problem,D,N,max_iters,cell_seed,rotation_seed"
                .into(),
        );
        let n_problems = spec.problems.len();
        for (i, c) in self.cells.iter().enumerate() {
            line(format!(
                "{},{},{},{},{},{},{},{},{}",
                i / n_problems,
                c.algorithm,
                i % n_problems,
                c.problem,
                c.dimension,
                c.population,
                c.max_iters,
                c.cell_seed,
                opt(c.rotation_seed)
            ));
        }
        line(String::new());
        line("[spec]".into());
        out.push_str(&spec.to_toml());
        out
    }
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let kind = match e.kind() {
        csv::ErrorKind::Io(io) => io.kind(),
        _ => std::io::ErrorKind::InvalidData,
    };
    Error::io(path, std::io::Error::new(kind, e.to_string()))
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `summary.csv`, `trials.csv`, `ttests.csv`, `provenance.txt` and
/// `traces/<algorithm>_<problem>_<trial>.csv` under `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces).map_err(|e| Error::io(&traces, e))?;

    write_rows(
        &dir.join("summary.csv"),
        &SUMMARY_HEADER,
        report.summary_rows().into_iter().map(|r| {
            vec![
                r.algorithm,
                r.problem,
                r.dimension.to_string(),
                r.population.to_string(),
                real(r.mean),
                real(r.std),
                real(r.success_ratio),
                opt(r.expected_fes.map(real)),
                r.n_trials.to_string(),
            ]
        }),
    )?;

    write_rows(
        &dir.join("trials.csv"),
        &TRIALS_HEADER,
        report.trial_rows().into_iter().map(|r| {
            vec![
                r.algorithm,
                r.problem,
                r.trial.to_string(),
                r.seed.to_string(),
                real(r.final_value),
                opt(r.fe_at_acceptance),
                real(r.wall_time),
            ]
        }),
    )?;

    write_rows(
        &dir.join("ttests.csv"),
        &TTESTS_HEADER,
        report.ttests.iter().map(|t| {
            vec![
                t.algorithm.clone(),
                t.reference.clone(),
                t.problem.clone(),
                real(t.result.t_value),
                real(t.result.p_value),
                real(t.result.dof),
                t.result.significant_at_005.to_string(),
            ]
        }),
    )?;

    for cell in &report.cells {
        for trial in &cell.trials {
            let path = traces.join(format!(
                "{}_{}_{}.csv",
                cell.algorithm, cell.problem, trial.trial
            ));
            write_rows(
                &path,
                &TRACE_HEADER,
                trial.trace.iter().map(|p| {
                    vec![
                        p.iteration.to_string(),
                        p.fe_count.to_string(),
                        real(p.best_value),
                        real(p.f),
                        real(p.mu),
                    ]
                }),
            )?;
        }
    }

    let path = dir.join("provenance.txt");
    fs::write(&path, report.provenance()).map_err(|e| Error::io(&path, e))
}

fn read_records(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let found = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            found
        )));
    }
    r.records()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| csv_err(path, e))
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Config(format!("{}: bad field {i} in {:?}", path.display(), rec)))
}

fn opt_field<T: std::str::FromStr>(
    path: &Path,
    rec: &csv::StringRecord,
    i: usize,
) -> Result<Option<T>> {
    match rec.get(i) {
        Some("") => Ok(None),
        _ => field(path, rec, i).map(Some),
    }
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    read_records(path, &SUMMARY_HEADER)?
        .iter()
        .map(|r| {
            Ok(SummaryRow {
                algorithm: field(path, r, 0)?,
                problem: field(path, r, 1)?,
                dimension: field(path, r, 2)?,
                population: field(path, r, 3)?,
                mean: field(path, r, 4)?,
                std: field(path, r, 5)?,
                success_ratio: field(path, r, 6)?,
                expected_fes: opt_field(path, r, 7)?,
                n_trials: field(path, r, 8)?,
            })
        })
        .collect()
}

pub fn read_trials(path: &Path) -> Result<Vec<TrialRow>> {
    read_records(path, &TRIALS_HEADER)?
        .iter()
        .map(|r| {
            Ok(TrialRow {
                algorithm: field(path, r, 0)?,
                problem: field(path, r, 1)?,
                trial: field(path, r, 2)?,
                seed: field(path, r, 3)?,
                final_value: field(path, r, 4)?,
                fe_at_acceptance: opt_field(path, r, 5)?,
                wall_time: field(path, r, 6)?,
            })
        })
        .collect()
}
