use serde::{Deserialize, Serialize};

use crate::model::ModelStats;

/// Literal evaluation of the separation conditions for a model, with a
/// single constant `c` in place of every unspecified constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Δ.
    pub cond1_lhs: f64,
    /// `c·(σ·sqrt(n/s) + sqrt(ln n))`.
    pub cond1_rhs: f64,
    /// Δ.
    pub cond2_lhs: f64,
    /// `c·(σ·sqrt(n/s) + σ·sqrt(k·ln n) + σ·sqrt(n·k)/λ_k)`; `+∞` when λ_k = 0.
    pub cond2_rhs: f64,
    /// `σ² ≥ c·ln(n)/n`.
    pub sigma_floor_ok: bool,
    /// `s ≥ c·ln n`.
    pub s_floor_ok: bool,
    /// `k ≤ sqrt(n/ln n)`.
    pub k_ok: bool,
}

impl ConditionReport {
    pub fn cond1_holds(&self) -> bool {
        self.cond1_lhs >= self.cond1_rhs
    }

    pub fn cond2_holds(&self) -> bool {
        self.cond2_lhs >= self.cond2_rhs
    }
}

pub fn check_conditions(stats: &ModelStats, n: usize, k: usize, c: f64) -> ConditionReport {
    let nf = n as f64;
    let kf = k as f64;
    let ln = nf.ln();
    let s = stats.s_min as f64;
    let sigma = stats.sigma;
    let lambda = stats.lambda(k);
    let base = sigma * (nf / s).sqrt();
    let cond2_rhs = if lambda > 0.0 {
        c * (base + sigma * (kf * ln).sqrt() + sigma * (nf * kf).sqrt() / lambda)
    } else {
        f64::INFINITY
    };
    ConditionReport {
        cond1_lhs: stats.delta,
        cond1_rhs: c * (base + ln.sqrt()),
        cond2_lhs: stats.delta,
        cond2_rhs,
        sigma_floor_ok: sigma * sigma >= c * ln / nf,
        s_floor_ok: s >= c * ln,
        k_ok: kf <= (nf / ln).sqrt(),
    }
}
