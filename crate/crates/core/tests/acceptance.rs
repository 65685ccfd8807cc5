//! Acceptance suite. Every criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use pso_savl::engine::contained;
use pso_savl::ese::evolutionary_factor_counted;
use pso_savl::harness::presets::sensitivity_with_grid;
use pso_savl::harness::write_report;
use pso_savl::harness::{
    execute, preset_ablation, preset_main_comparison, ExecOptions, ExperimentReport,
    ExperimentSpec, SensitivityParam,
};
use pso_savl::stats::student_t_cdf;
use pso_savl::velocity_limit::sigmoid;
use pso_savl::{
    derive_alpha_beta, derive_trial_stream, evolutionary_factor, welch_t_test, Engine, RngStream,
    UniformSource,
};
use serde::Deserialize;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const ABLATION_PROBLEMS: [&str; 4] = ["f2", "f3", "f5", "f6"];

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform_in(rng: &mut RngStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

fn criterion_1() -> Outcome {
    let mut rng = RngStream::from_seed(0xA1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let a = uniform_in(&mut rng, 0.05, 0.95);
        let b = uniform_in(&mut rng, 0.05, 0.95);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (alpha, beta) = derive_alpha_beta(lo, hi).map_err(|e| e.to_string())?;
        let e0 = (sigmoid(alpha, beta, 0.0) - lo).abs();
        let e1 = (sigmoid(alpha, beta, 1.0) - hi).abs();
        worst = worst.max(e0).max(e1);
    }
    check(worst <= 1e-12, || format!("max endpoint error {worst:e}"))?;
    Ok(format!("max endpoint error {worst:e}"))
}

fn naive_f(p: &[Vec<f64>], g: usize) -> f64 {
    let n = p.len();
    let d: Vec<f64> = (0..n)
        .map(|i| {
            let mut total = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let sq: f64 = p[i].iter().zip(&p[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                total += sq.sqrt();
            }
            total / (n - 1) as f64
        })
        .collect();
    let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        0.0
    } else {
        (d[g] - lo) / (hi - lo)
    }
}

fn criterion_2() -> Outcome {
    let line = |xs: &[f64]| xs.iter().map(|&x| vec![x]).collect::<Vec<_>>();
    let f_of = |p: &[Vec<f64>], g| {
        evolutionary_factor(p, g)
            .map(|e| e.f)
            .map_err(|e| e.to_string())
    };
    check(f_of(&line(&[0.0, 1.0, 2.0]), 1)? == 0.0, || {
        "[0,1,2] g=1 is not 0".into()
    })?;
    check(f_of(&line(&[0.0, 1.0, 2.0]), 0)? == 1.0, || {
        "[0,1,2] g=0 is not 1".into()
    })?;
    let same = vec![vec![2.5, -1.0]; 5];
    check(f_of(&same, 3)? == 0.0, || {
        "coincident swarm is not 0".into()
    })?;

    let mut rng = RngStream::from_seed(0xA2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = 2 + (rng.uniform() * 7.0) as usize;
        let d = 1 + (rng.uniform() * 5.0) as usize;
        let p: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| uniform_in(&mut rng, -10.0, 10.0)).collect())
            .collect();
        let g = (rng.uniform() * n as f64) as usize;
        worst = worst.max((f_of(&p, g)? - naive_f(&p, g)).abs());
    }
    check(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("hand examples exact, max deviation {worst:e}"))
}

fn criterion_3() -> Outcome {
    let mut spec = preset_ablation();
    spec.scale_budget(0.1).map_err(|e| e.to_string())?;
    let mut steps = 0u64;
    for pi in 0..spec.problems.len() {
        let problem = spec.problems[pi].build().map_err(|e| e.to_string())?;
        for ai in 0..spec.algorithms.len() {
            let config = spec.cell_config(ai, pi).map_err(|e| e.to_string())?;
            let engine = Engine::new(&config, &problem).map_err(|e| e.to_string())?;
            for trial in 0..spec.n_trials as u64 {
                let mut rng = derive_trial_stream(config.seed, trial);
                let mut state = engine.initialize(&mut rng).map_err(|e| e.to_string())?;
                while state.iteration < config.max_iters {
                    let out = engine
                        .step(&mut state, &mut rng)
                        .map_err(|e| e.to_string())?;
                    steps += 1;
                    check(contained(&state, &out.velocity_limit, &problem), || {
                        format!(
                            "{} on {} trial {trial} left its limits at iteration {}",
                            spec.algorithms[ai].label, spec.problems[pi].function, state.iteration
                        )
                    })?;
                }
            }
        }
    }
    let report = execute(&spec, ExecOptions::default()).map_err(|e| e.to_string())?;
    let recorded: u64 = report
        .cells
        .iter()
        .flat_map(|c| &c.trials)
        .map(|t| t.containment_violations)
        .sum();
    check(recorded == 0, || {
        format!("{recorded} violations recorded by the harness")
    })?;
    Ok(format!("{steps} checked iterations, 0 violations"))
}

fn ablation_report() -> &'static Result<ExperimentReport, String> {
    static REPORT: OnceLock<Result<ExperimentReport, String>> = OnceLock::new();
    REPORT.get_or_init(|| {
        execute(&preset_ablation(), ExecOptions::default()).map_err(|e| e.to_string())
    })
}

fn criterion_4() -> Outcome {
    let report = ablation_report().as_ref().map_err(Clone::clone)?;
    let stats = |alg: &str, p: &str| {
        report
            .cell(alg, p)
            .map(|c| c.stats.clone())
            .ok_or_else(|| format!("missing cell {alg}/{p}"))
    };
    let mut sb_le_il = 0;
    let mut il_le_fx = 0;
    let mut fes_ok = 0;
    let mut table = Vec::new();
    for p in ABLATION_PROBLEMS {
        let (fx, il, sb) = (
            stats("fixed", p)?,
            stats("iteration-linear", p)?,
            stats("state-based", p)?,
        );
        sb_le_il += usize::from(sb.mean <= il.mean);
        il_le_fx += usize::from(il.mean <= fx.mean);
        let fes = match (sb.expected_fes, fx.expected_fes) {
            (Some(s), Some(f)) => s <= f,
            (Some(_), None) => true,
            _ => false,
        };
        fes_ok += usize::from(fes);
        table.push(format!(
            "{p}: fixed {:.4e} linear {:.4e} state {:.4e}",
            fx.mean, il.mean, sb.mean
        ));
    }
    let detail = format!(
        "state<=linear {sb_le_il}/4, linear<=fixed {il_le_fx}/4, state FEs<=fixed {fes_ok}/4 [{}]",
        table.join("; ")
    );
    check(sb_le_il >= 3 && il_le_fx >= 3 && fes_ok >= 3, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let mut spec = preset_main_comparison();
    spec.problems
        .retain(|p| p.function == "f1" || p.function == "f7");
    let report = execute(&spec, ExecOptions::default()).map_err(|e| e.to_string())?;
    let cell = |alg: &str, p: &str| {
        report
            .cell(alg, p)
            .ok_or_else(|| format!("missing cell {alg}/{p}"))
    };
    let f1 = &cell("PSO-SAVL", "f1")?.stats;
    let savl7 = cell("PSO-SAVL", "f7")?.stats.mean;
    let ldiw7 = cell("PSO-LDIW", "f7")?.stats.mean;
    let detail = format!(
        "f1 success {:.1}% mean {:.3e}; f7 SAVL {savl7:.4} vs LDIW {ldiw7:.4}",
        100.0 * f1.success_ratio,
        f1.mean
    );
    check(
        f1.success_ratio >= 0.9 && f1.mean < 1e-20 && savl7 < ldiw7,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn criterion_6() -> Outcome {
    let mut spec = sensitivity_with_grid(SensitivityParam::MuMin, &[0.1, 0.4]);
    spec.problems.retain(|p| p.function == "f2");
    spec.n_trials = 10;
    let report = execute(&spec, ExecOptions::default()).map_err(|e| e.to_string())?;
    let mean = |alg: &str| {
        report
            .cell(alg, "f2")
            .map(|c| c.stats.mean)
            .ok_or_else(|| format!("missing cell {alg}/f2"))
    };
    let (low, base) = (mean("mu-min-0.1")?, mean("mu-min-0.4")?);
    let detail = format!(
        "f2 mean mu_min=0.1 {low:.4e} vs mu_min=0.4 {base:.4e} (ratio {:.1})",
        low / base
    );
    check(low >= 10.0 * base, || detail.clone())?;
    Ok(detail)
}

fn criterion_7() -> Outcome {
    use pso_savl::{BenchmarkFunction, BenchmarkProblem, RunConfig, VlStrategyConfig};
    let mut cases = 0;
    for (n, iters) in [(2, 1), (3, 7), (10, 50), (17, 13), (20, 100)] {
        let problem =
            BenchmarkProblem::new(BenchmarkFunction::Sphere, 3).map_err(|e| e.to_string())?;
        let config = RunConfig::pso_ldiw(3, n, iters, VlStrategyConfig::state_based(0.4, 0.7));
        let record = pso_savl::run_trial(&config, &problem, 0).map_err(|e| e.to_string())?;
        let expected = (iters * n * (n - 1) / 2) as u64;
        check(record.pair_distance_count == expected, || {
            format!(
                "N={n} iters={iters}: {} pairs, expected {expected}",
                record.pair_distance_count
            )
        })?;

        let mut counter = 0u64;
        let mut rng = RngStream::from_seed(n as u64);
        let swarm: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.uniform(), rng.uniform()]).collect();
        evolutionary_factor_counted(&swarm, 0, &mut counter).map_err(|e| e.to_string())?;
        check(counter == (n * (n - 1) / 2) as u64, || {
            format!("N={n}: one ESE call counted {counter}")
        })?;
        cases += 1;
    }
    Ok(format!("{cases} (N, max_iters) cases exact"))
}

#[derive(Deserialize)]
struct WelchCase {
    a: Vec<f64>,
    b: Vec<f64>,
    t: f64,
    p: f64,
    dof: f64,
}

fn data(name: &str) -> Result<String, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
}

fn criterion_8() -> Outcome {
    let cases: Vec<WelchCase> =
        serde_json::from_str(&data("welch_oracle.json")?).map_err(|e| e.to_string())?;
    let mut worst_p: f64 = 0.0;
    for (i, c) in cases.iter().enumerate() {
        let r = welch_t_test(&c.a, &c.b).map_err(|e| e.to_string())?;
        worst_p = worst_p.max((r.p_value - c.p).abs());
        check((r.t_value - c.t).abs() <= 1e-9 * c.t.abs().max(1.0), || {
            format!("case {i}: t {} vs {}", r.t_value, c.t)
        })?;
        check((r.dof - c.dof).abs() <= 1e-8 * c.dof, || {
            format!("case {i}: dof {} vs {}", r.dof, c.dof)
        })?;
    }
    check(worst_p <= 1e-8, || format!("max p-value error {worst_p:e}"))?;

    let mut worst_cdf: f64 = 0.0;
    let table = data("t_cdf_oracle.csv")?;
    let mut reader = csv::Reader::from_reader(table.as_bytes());
    for row in reader.deserialize::<(f64, f64, f64)>() {
        let (t, dof, cdf) = row.map_err(|e| e.to_string())?;
        let got = student_t_cdf(t, dof).map_err(|e| e.to_string())?;
        worst_cdf = worst_cdf.max((got - cdf).abs());
    }
    check(worst_cdf <= 1e-8, || {
        format!("max t-CDF error {worst_cdf:e}")
    })?;

    let mut rng = RngStream::from_seed(0xA8);
    for i in 0..1000 {
        let na = 2 + (rng.uniform() * 20.0) as usize;
        let nb = 2 + (rng.uniform() * 20.0) as usize;
        let a: Vec<f64> = (0..na).map(|_| uniform_in(&mut rng, -5.0, 5.0)).collect();
        let b: Vec<f64> = (0..nb).map(|_| uniform_in(&mut rng, -3.0, 8.0)).collect();
        let shift = uniform_in(&mut rng, -100.0, 100.0);
        let ab = welch_t_test(&a, &b).map_err(|e| e.to_string())?;
        let ba = welch_t_test(&b, &a).map_err(|e| e.to_string())?;
        check(
            ab.t_value == -ba.t_value && ab.p_value == ba.p_value && ab.dof == ba.dof,
            || format!("pair {i}: swapping samples changed the result"),
        )?;
        let sa: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let sb: Vec<f64> = b.iter().map(|x| x + shift).collect();
        let shifted = welch_t_test(&sa, &sb).map_err(|e| e.to_string())?;
        check((shifted.p_value - ab.p_value).abs() <= 1e-9, || {
            format!(
                "pair {i}: shift moved p from {} to {}",
                ab.p_value, shifted.p_value
            )
        })?;
    }
    Ok(format!(
        "{} Welch cases, max p error {worst_p:e}; max t-CDF error {worst_cdf:e}; 1000 invariance pairs",
        cases.len()
    ))
}

/// `trials.csv` with its trailing wall_time column removed.
fn trials_without_wall_time(dir: &Path) -> Result<String, String> {
    let text = fs::read_to_string(dir.join("trials.csv")).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn criterion_9() -> Outcome {
    let reference = ablation_report().as_ref().map_err(Clone::clone)?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let base = tmp.path().join("default");
    write_report(reference, &base).map_err(|e| e.to_string())?;
    let summary = fs::read(base.join("summary.csv")).map_err(|e| e.to_string())?;
    let trials = trials_without_wall_time(&base)?;

    let spec: ExperimentSpec = preset_ablation();
    for threads in [1, 4] {
        let report = execute(
            &spec,
            ExecOptions {
                threads: Some(threads),
            },
        )
        .map_err(|e| e.to_string())?;
        let dir = tmp.path().join(format!("threads-{threads}"));
        write_report(&report, &dir).map_err(|e| e.to_string())?;
        let other = fs::read(dir.join("summary.csv")).map_err(|e| e.to_string())?;
        check(other == summary, || {
            format!("summary.csv differs with {threads} threads")
        })?;
        check(trials_without_wall_time(&dir)? == trials, || {
            format!("trials.csv differs with {threads} threads")
        })?;
    }
    Ok("summary.csv and trials.csv identical for default, 1 and 4 threads".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 sigmoid endpoints", criterion_1),
        ("2 evolutionary factor oracle", criterion_2),
        ("3 containment", criterion_3),
        ("4 ablation ordering", criterion_4),
        ("5 main comparison sanity", criterion_5),
        ("6 mu_min sensitivity", criterion_6),
        ("7 pair-distance count", criterion_7),
        ("8 Welch t-test", criterion_8),
        ("9 determinism across threads", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
