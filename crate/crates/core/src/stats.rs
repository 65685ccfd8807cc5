//! Aggregate metrics over trials and Welch's two-sample t-test.

use serde::{Deserialize, Serialize};
use statrs::function::beta::checked_beta_reg;

use crate::engine::TrialRecord;
use crate::{Error, Result};

/// Summary of the final values of a set of trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for a single trial.
    pub std: f64,
    pub success_ratio: f64,
    /// Mean evaluations-to-acceptance over successful trials only.
    pub expected_fes: Option<f64>,
    pub n_trials: usize,
    pub n_success: usize,
}

/// Per-trial inputs to [`aggregate`].
pub trait TrialOutcome {
    fn final_value(&self) -> f64;
    fn fe_at_acceptance(&self) -> Option<u64>;
}

impl TrialOutcome for TrialRecord {
    fn final_value(&self) -> f64 {
        self.final_value
    }

    fn fe_at_acceptance(&self) -> Option<u64> {
        self.fe_at_acceptance
    }
}

impl TrialOutcome for (f64, Option<u64>) {
    fn final_value(&self) -> f64 {
        self.0
    }

    fn fe_at_acceptance(&self) -> Option<u64> {
        self.1
    }
}

/// A trial succeeds when its final value is at most `acceptance`.
pub fn aggregate<T: TrialOutcome>(records: &[T], acceptance: f64) -> Result<AggregateStats> {
    if records.is_empty() {
        return Err(Error::Domain("cannot aggregate zero trials".into()));
    }
    let values: Vec<f64> = records.iter().map(TrialOutcome::final_value).collect();
    let (mean, variance) = mean_and_variance(&values);
    let successes: Vec<&T> = records
        .iter()
        .filter(|r| r.final_value() <= acceptance)
        .collect();
    let fes: Vec<f64> = successes
        .iter()
        .filter_map(|r| r.fe_at_acceptance())
        .map(|fe| fe as f64)
        .collect();
    let expected_fes = (!fes.is_empty()).then(|| fes.iter().sum::<f64>() / fes.len() as f64);
    Ok(AggregateStats {
        mean,
        std: variance.sqrt(),
        success_ratio: successes.len() as f64 / records.len() as f64,
        expected_fes,
        n_trials: records.len(),
        n_success: successes.len(),
    })
}

/// Mean and sample variance (`n - 1`), variance 0 when `n == 1`.
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_value: f64,
    /// Two-tailed.
    pub p_value: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub dof: f64,
    pub significant_at_005: bool,
}

/// CDF of Student's t distribution with `dof` degrees of freedom.
pub fn student_t_cdf(t: f64, dof: f64) -> Result<f64> {
    if !(dof > 0.0) {
        return Err(Error::Domain(format!(
            "degrees of freedom must be positive, got {dof}"
        )));
    }
    if t.is_nan() {
        return Err(Error::Domain("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 1.0 } else { 0.0 });
    }
    let lower_tail = 0.5 * two_tailed_p(t, dof)?;
    Ok(if t > 0.0 {
        1.0 - lower_tail
    } else {
        lower_tail
    })
}

/// `P(|T| >= |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2)`.
fn two_tailed_p(t: f64, dof: f64) -> Result<f64> {
    if t.is_infinite() {
        return Ok(0.0);
    }
    let x = dof / (dof + t * t);
    checked_beta_reg(0.5 * dof, 0.5, x)
        .map_err(|e| Error::Domain(format!("incomplete beta failed for t={t}, dof={dof}: {e}")))
}

/// Welch's unequal-variance two-sample t-test, two-tailed.
///
/// Two constant samples with equal means give `t = 0, p = 1`; with different
/// means `t = ±inf, p = 0`. In both cases `dof = n_a + n_b - 2`.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Domain(format!(
            "t-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mean_a, var_a) = mean_and_variance(a);
    let (mean_b, var_b) = mean_and_variance(b);
    let (se_a, se_b) = (var_a / na, var_b / nb);
    let se2 = se_a + se_b;
    let diff = mean_a - mean_b;

    let (t_value, dof) = if se2 == 0.0 {
        let t = if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        (t, na + nb - 2.0)
    } else {
        let dof = se2 * se2 / (se_a * se_a / (na - 1.0) + se_b * se_b / (nb - 1.0));
        (diff / se2.sqrt(), dof)
    };
    let p_value = two_tailed_p(t_value, dof)?.clamp(0.0, 1.0);
    Ok(TTestResult {
        t_value,
        p_value,
        dof,
        significant_at_005: p_value < 0.05,
    })
}
