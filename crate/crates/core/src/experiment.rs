//! Monte Carlo experiment runner: scenario presets, per-trial scoring,
//! parameter sweeps and record output.
//!
//! Trial `i` uses seed `base_seed + i` for both the graph and the algorithm;
//! the two draw from different derived streams.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cluster::{
    check_eps_perfect_representation, is_eps_correct, match_partitions, Partition, PointSet,
};
use crate::error::{Error, Result};
use crate::model::{build_model, presets, sample_graph, Graph, PlantedModel};
use crate::svdpart::{
    check_conditions, correct_bipartition, extend_by_density, full_partition_by_repetition,
    make_split, sigma_sweep, svd1_run, svd2_essential_with, svd2_run, ConditionReport,
};

/// Largest accepted `n` (dense matrices are `O(n²)`).
pub const MAX_N: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", content = "scenario_params", rename_all = "snake_case")]
pub enum Scenario {
    /// A clique of size `s` planted in `G(n, p)`.
    Clique { n: usize, p: f64, s: usize },
    /// `k` equal independent classes, edge probability `p` across classes.
    Coloring { n: usize, k: usize, p: f64 },
    /// Two equal halves, `p` inside and `q` across.
    Bipartition { n: usize, p: f64, q: f64 },
    General { sizes: Vec<usize>, block_probs: Vec<Vec<f64>> },
}

impl Scenario {
    pub fn build(&self) -> Result<PlantedModel> {
        let model = match self {
            Scenario::Clique { n, p, s } => presets::clique(*n, *p, *s),
            Scenario::Coloring { n, k, p } => presets::coloring(*n, *k, *p),
            Scenario::Bipartition { n, p, q } => presets::bipartition(*n, *p, *q),
            Scenario::General { sizes, block_probs } => build_model(sizes, block_probs),
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        if model.n() > MAX_N {
            return Err(Error::Config(format!("n = {} exceeds the limit of {MAX_N}", model.n())));
        }
        Ok(model)
    }

    /// Copy with one numeric parameter replaced.
    pub fn with_param(&self, axis: &str, value: f64) -> Result<Self> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Config(e.to_string()))?;
        let params = v
            .get_mut("scenario_params")
            .and_then(|p| p.as_object_mut())
            .ok_or_else(|| Error::Config("scenario has no parameters".into()))?;
        let slot = params
            .get_mut(axis)
            .filter(|x| x.is_number())
            .ok_or_else(|| Error::Config(format!("`{axis}` is not a numeric parameter of this scenario")))?;
        *slot = if slot.is_u64() {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(Error::Config(format!("`{axis}` needs a non-negative integer, got {value}")));
            }
            serde_json::json!(value as u64)
        } else {
            serde_json::json!(value)
        };
        serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Svd2,
    Svd1,
    Svd2Essential,
    SigmaSweep,
    Svd2PlusCorrection,
    FullRepetition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessMetric {
    Exact,
    EpsCorrect(f64),
    EpsPerfect(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub scenario: Scenario,
    pub algorithm: Algorithm,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_metric")]
    pub success_metric: SuccessMetric,
    /// Noise level given to `svd2_essential`; the model's σ when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default = "default_c3")]
    pub c3: f64,
    /// Repetition count for `full_repetition`; `⌈3 ln n⌉` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    /// Constant used in the condition report.
    #[serde(default = "default_condition_c")]
    pub condition_c: f64,
    /// `run` fails (exit 1) when the success rate is below this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_success_rate: Option<f64>,
}

fn default_metric() -> SuccessMetric {
    SuccessMetric::Exact
}

fn default_c3() -> f64 {
    crate::svdpart::DEFAULT_C3
}

fn default_condition_c() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario, algorithm: Algorithm, trials: usize, base_seed: u64) -> Self {
        ExperimentConfig {
            scenario,
            algorithm,
            trials,
            base_seed,
            success_metric: SuccessMetric::Exact,
            sigma: None,
            c3: default_c3(),
            repetitions: None,
            condition_c: default_condition_c(),
            min_success_rate: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<PlantedModel> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let model = self.scenario.build()?;
        match self.success_metric {
            SuccessMetric::Exact => {}
            SuccessMetric::EpsCorrect(eps) | SuccessMetric::EpsPerfect(eps) => {
                if !(0.0..1.0).contains(&eps) {
                    return Err(Error::Config(format!("eps must lie in [0, 1), got {eps}")));
                }
            }
        }
        if matches!(self.success_metric, SuccessMetric::EpsPerfect(_))
            && !matches!(self.algorithm, Algorithm::Svd2 | Algorithm::Svd2Essential)
        {
            return Err(Error::Config("eps_perfect needs an algorithm that returns projected points".into()));
        }
        if self.algorithm == Algorithm::Svd2PlusCorrection && model.k() != 2 {
            return Err(Error::Config("svd2_plus_correction needs a two-cluster scenario".into()));
        }
        if let Some(sigma) = self.sigma {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
            }
        }
        if !(self.c3 > 0.0 && self.condition_c > 0.0) {
            return Err(Error::Config("c3 and condition_c must be positive".into()));
        }
        if self.repetitions == Some(0) {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub success: bool,
    /// Misclassified vertices on the scored domain; absent when the
    /// algorithm failed.
    pub misclassified: Option<usize>,
    pub wall_time_ms: f64,
    pub degenerate_gap: bool,
    pub condition_report: ConditionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean over trials whose algorithm returned a partition.
    pub mean_misclassified: Option<f64>,
    pub mean_time_ms: f64,
    pub errors: usize,
}

impl Summary {
    pub fn of(records: &[TrialRecord]) -> Self {
        let trials = records.len();
        let successes = records.iter().filter(|r| r.success).count();
        let scored: Vec<usize> = records.iter().filter_map(|r| r.misclassified).collect();
        Summary {
            trials,
            successes,
            success_rate: successes as f64 / trials.max(1) as f64,
            mean_misclassified: (!scored.is_empty())
                .then(|| scored.iter().sum::<usize>() as f64 / scored.len() as f64),
            mean_time_ms: records.iter().map(|r| r.wall_time_ms).sum::<f64>() / trials.max(1) as f64,
            errors: records.iter().filter(|r| r.error.is_some()).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

impl Experiment {
    pub fn passes(&self, config: &ExperimentConfig) -> bool {
        config.min_success_rate.is_none_or(|m| self.summary.success_rate >= m)
    }
}

/// What an algorithm produced for one graph.
struct Outcome {
    partition: Partition,
    points: Option<PointSet<f64>>,
    degenerate_gap: bool,
}

fn run_algorithm(config: &ExperimentConfig, model: &PlantedModel, graph: &Graph, seed: u64) -> Result<Outcome> {
    let k = model.k();
    let plain = |partition| Outcome { partition, points: None, degenerate_gap: false };
    Ok(match config.algorithm {
        Algorithm::Svd2 => {
            let r = svd2_run::<f64>(graph, k, seed)?;
            Outcome { partition: r.partition, points: Some(r.points), degenerate_gap: r.degenerate_gap }
        }
        Algorithm::Svd2Essential => {
            let sigma = config.sigma.unwrap_or_else(|| model.stats().sigma);
            let r = svd2_essential_with::<f64>(graph, sigma, config.c3, &make_split(graph.n(), seed)?)?;
            Outcome { partition: r.partition, points: Some(r.points), degenerate_gap: r.degenerate_gap }
        }
        Algorithm::SigmaSweep => plain(sigma_sweep::<f64>(graph, seed)?.partition),
        Algorithm::Svd1 => plain(svd1_run::<f64>(graph, k)?),
        Algorithm::FullRepetition => plain(full_partition_by_repetition::<f64>(graph, k, config.repetitions, seed)?),
        Algorithm::Svd2PlusCorrection => {
            let r = svd2_run::<f64>(graph, k, seed)?;
            let full = extend_by_density(graph, &r.partition)?;
            let corrected = if full.num_clusters() == 2 { correct_bipartition(graph, &full)? } else { full };
            Outcome { partition: corrected, points: None, degenerate_gap: r.degenerate_gap }
        }
    })
}

fn score(metric: SuccessMetric, outcome: &Outcome, truth: &Partition) -> Result<(bool, usize)> {
    let truth = truth.restrict(outcome.partition.domain());
    let report = match_partitions(&outcome.partition, &truth)?;
    let success = match metric {
        SuccessMetric::Exact => report.exact,
        SuccessMetric::EpsCorrect(eps) => is_eps_correct(&outcome.partition, &truth, eps)?,
        SuccessMetric::EpsPerfect(eps) => {
            let points = outcome
                .points
                .as_ref()
                .ok_or_else(|| Error::Config("eps_perfect needs projected points".into()))?;
            check_eps_perfect_representation(points, &truth, eps)?
        }
    };
    Ok((success, report.misclassified_count))
}

/// Runs every trial of `config`. Algorithm failures are recorded, not
/// raised; only configuration errors abort.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    let model = config.validate()?;
    let truth = Partition::from_membership(model.membership());
    let conditions = check_conditions(&model.stats(), model.n(), model.k(), config.condition_c);
    let records: Vec<TrialRecord> = (0..config.trials)
        .map(|i| {
            let seed = config.base_seed.wrapping_add(i as u64);
            let start = Instant::now();
            let graph = sample_graph(&model, seed);
            let result = run_algorithm(config, &model, &graph, seed)
                .and_then(|o| score(config.success_metric, &o, &truth).map(|s| (s, o.degenerate_gap)));
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let (success, misclassified, degenerate_gap, error) = match result {
                Ok(((success, mis), gap)) => (success, Some(mis), gap, None),
                Err(e) => (false, None, false, Some(e.to_string())),
            };
            TrialRecord {
                trial_index: i,
                seed,
                success,
                misclassified,
                wall_time_ms,
                degenerate_gap,
                condition_report: conditions.clone(),
                error,
            }
        })
        .collect();
    let summary = Summary::of(&records);
    Ok(Experiment { records, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub success_rate: f64,
    pub summary: Summary,
}

/// One experiment per value of a numeric scenario parameter.
pub fn run_sweep(config: &ExperimentConfig, axis: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    let configs = values
        .iter()
        .map(|&v| Ok(ExperimentConfig { scenario: config.scenario.with_param(axis, v)?, ..config.clone() }))
        .collect::<Result<Vec<_>>>()?;
    for c in &configs {
        c.validate()?;
    }
    values
        .iter()
        .zip(&configs)
        .map(|(&value, c)| {
            let summary = run_experiment(c)?.summary;
            Ok(SweepRow { axis: axis.to_string(), value, success_rate: summary.success_rate, summary })
        })
        .collect()
}

/// One JSON object per record followed by `{"summary": ...}`.
pub fn to_json_lines(experiment: &Experiment) -> String {
    let mut out = String::new();
    for r in &experiment.records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    let summary = serde_json::json!({ "summary": experiment.summary });
    out.push_str(&summary.to_string());
    out.push('\n');
    out
}

pub const CSV_HEADER: &str = "trial,seed,success,misclassified,time_ms,degenerate_gap";

pub fn to_csv(experiment: &Experiment) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in &experiment.records {
        let mis = r.misclassified.map(|m| m.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{:.3},{}", r.trial_index, r.seed, r.success, mis, r.wall_time_ms, r.degenerate_gap)
            .expect("writing to a String cannot fail");
    }
    out
}

pub fn sweep_to_json_lines(rows: &[SweepRow]) -> String {
    rows.iter().map(|r| serde_json::to_string(r).expect("rows serialize") + "\n").collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis,value,success_rate,mean_misclassified,trials\n");
    for r in rows {
        let mis = r.summary.mean_misclassified.map(|m| format!("{m:.3}")).unwrap_or_default();
        writeln!(out, "{},{},{},{},{}", r.axis, r.value, r.success_rate, mis, r.summary.trials)
            .expect("writing to a String cannot fail");
    }
    out
}
