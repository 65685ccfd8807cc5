use std::fs;

use pso_savl::harness::report::{read_summary, read_trials, TRACE_HEADER};
use pso_savl::harness::{
    execute, rerun_trial, run_experiment, AlgorithmSpec, ExecOptions, ExperimentSpec, ProblemSpec,
};
use pso_savl::{BenchmarkFunction, LimitHandling, RunConfig, VlStrategyConfig};

fn small_spec(dir: &std::path::Path) -> ExperimentSpec {
    let algorithm = |label: &str, vl| AlgorithmSpec {
        label: label.into(),
        config: RunConfig::pso_ldiw(0, 8, 150, vl),
    };
    ExperimentSpec {
        name: "small".into(),
        n_trials: 4,
        master_seed: 9,
        output_dir: dir.to_path_buf(),
        reference: Some("savl".into()),
        trace_points: 40,
        problems: vec![
            ProblemSpec::new(BenchmarkFunction::Sphere, 5),
            ProblemSpec::new(BenchmarkFunction::RotatedRastrigin, 4),
        ],
        algorithms: vec![
            algorithm("savl", VlStrategyConfig::state_based(0.4, 0.7)),
            algorithm("fixed", VlStrategyConfig::fixed(0.5)),
        ],
    }
}

#[test]
fn csv_files_read_back_to_the_in_memory_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = small_spec(tmp.path());
    let report = run_experiment(&spec, ExecOptions::default()).unwrap();

    assert_eq!(
        read_summary(&tmp.path().join("summary.csv")).unwrap(),
        report.summary_rows()
    );
    assert_eq!(
        read_trials(&tmp.path().join("trials.csv")).unwrap(),
        report.trial_rows()
    );

    let ttests = fs::read_to_string(tmp.path().join("ttests.csv")).unwrap();
    assert_eq!(ttests.lines().count(), 1 + 2);

    for cell in &report.cells {
        for trial in &cell.trials {
            let path = tmp.path().join("traces").join(format!(
                "{}_{}_{}.csv",
                cell.algorithm, cell.problem, trial.trial
            ));
            let text = fs::read_to_string(&path).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next().unwrap(), TRACE_HEADER.join(","));
            assert_eq!(lines.count(), trial.trace.len());
            assert!(trial.trace.len() <= 40);
            assert_eq!(trial.trace.last().unwrap().iteration, 149);
        }
    }
}

#[test]
fn provenance_names_the_spec_and_every_cell() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = small_spec(tmp.path());
    run_experiment(&spec, ExecOptions::default()).unwrap();
    let text = fs::read_to_string(tmp.path().join("provenance.txt")).unwrap();
    assert!(text.contains(&spec.digest()));
    for ai in 0..2 {
        for pi in 0..2 {
            assert!(text.contains(&spec.cell_seed(ai, pi).to_string()));
        }
    }
    let embedded = text.split_once("[spec]").unwrap().1;
    assert!(embedded.contains("name = \"small\""));
}

#[test]
fn rerunning_one_trial_reproduces_it() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = small_spec(tmp.path());
    let report = execute(&spec, ExecOptions::default()).unwrap();
    let cell = &report.cells[3];
    let replay = rerun_trial(&spec, 1, 1, 2).unwrap();
    assert_eq!(replay.final_value, cell.trials[2].final_value);
    assert_eq!(replay.seed, cell.trials[2].seed);
}

#[test]
fn thread_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = small_spec(tmp.path());
    let one = execute(&spec, ExecOptions { threads: Some(1) }).unwrap();
    let three = execute(&spec, ExecOptions { threads: Some(3) }).unwrap();
    let strip = |rows: Vec<pso_savl::harness::TrialRow>| {
        rows.into_iter()
            .map(|mut r| {
                r.wall_time = 0.0;
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(one.trial_rows()), strip(three.trial_rows()));
    assert_eq!(one.summary_rows(), three.summary_rows());
}

#[test]
fn spec_files_round_trip_with_limit_handling() {
    let tmp = tempfile::tempdir().unwrap();
    let mut spec = small_spec(tmp.path());
    spec.algorithms[1].config.limit_handling = LimitHandling::Clamp;
    let path = tmp.path().join("spec.toml");
    fs::write(&path, spec.to_toml()).unwrap();
    assert_eq!(ExperimentSpec::load(&path).unwrap(), spec);
}

#[test]
fn missing_spec_file_is_an_io_error() {
    let err = ExperimentSpec::load(std::path::Path::new("/nonexistent/spec.toml")).unwrap_err();
    assert!(matches!(err, pso_savl::Error::Io { .. }));
}
