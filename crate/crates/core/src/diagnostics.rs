//! Monte Carlo checks of the concentration and perturbation bounds the
//! recovery guarantees rest on.
//!
//! Every tail check counts how often a statistic strictly exceeds its
//! threshold and passes when the empirical rate is at most
//! `bound + 3·sqrt(bound/samples) + 10/samples`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{build_model, presets, sample_noise_matrix, PlantedModel};
use crate::scalar::Scalar;
use crate::seed::{self, stream};
use crate::spectra::{
    sin_max_principal_angle, spectral_norm, svd_values, top_k_left_basis, Basis, DenseMatrix,
};
use crate::svdpart::make_split;

/// Working values for the unspecified constants of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Noise norm: `‖E‖ ≤ c0·σ·sqrt(n)`.
    pub c0: f64,
    /// Projection onto a random subspace: `σ·sqrt(d) + c1·sqrt(ln n)`.
    pub c1: f64,
    /// Projection onto a flat basis: `c2·sqrt(k)·(σ + α·ln n)`.
    pub c2: f64,
    /// Essential rank: `σ_l ≥ c3·σ·sqrt(n)`.
    pub c3: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c0: 3.0, c1: 4.0, c2: 4.0, c3: crate::svdpart::DEFAULT_C3 }
    }
}

/// Names accepted by [`run_diagnostics`].
pub const CHECKS: [&str; 6] = [
    "projection_tail",
    "flat_basis_projection",
    "noise_norm",
    "davis_kahan",
    "singular_value_transfer",
    "weighted_sum_tail",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub check: String,
    pub n: usize,
    pub params: serde_json::Value,
    pub samples: usize,
    pub threshold: f64,
    pub exceed_count: usize,
    pub empirical_rate: f64,
    pub bound_rate: f64,
    pub pass: bool,
    /// Summary statistics of the sampled quantity.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observed: BTreeMap<String, f64>,
}

impl TailReport {
    fn new(check: &str, n: usize, params: serde_json::Value, samples: usize, threshold: f64, exceed: usize, bound: f64) -> Self {
        let empirical_rate = exceed as f64 / samples as f64;
        TailReport {
            check: check.to_string(),
            n,
            params,
            samples,
            threshold,
            exceed_count: exceed,
            empirical_rate,
            bound_rate: bound,
            pass: empirical_rate <= tail_allowance(bound, samples),
            observed: BTreeMap::new(),
        }
    }
}

/// Largest empirical rate compatible with a claimed tail probability.
pub fn tail_allowance(bound: f64, samples: usize) -> f64 {
    let s = samples as f64;
    bound + 3.0 * (bound / s).sqrt() + 10.0 / s
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    Ok(())
}

/// Centered Bernoulli with variance `sigma²`: `1 − p` with probability `p`,
/// otherwise `−p`, where `p = 1/2 − sqrt(1/4 − sigma²)`.
struct CenteredBernoulli {
    p: f64,
}

impl CenteredBernoulli {
    fn new(sigma: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&sigma) {
            return Err(Error::InvalidArgument(format!(
                "Bernoulli noise needs 0 ≤ sigma ≤ 1/2, got {sigma}"
            )));
        }
        Ok(CenteredBernoulli { p: 0.5 - (0.25 - sigma * sigma).max(0.0).sqrt() })
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        if rng.random::<f64>() < self.p {
            1.0 - self.p
        } else {
            -self.p
        }
    }
}

fn projection_lengths(basis: &Basis<f64>, sigma: f64, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let noise = CenteredBernoulli::new(sigma)?;
    let n = basis.dim_ambient();
    Ok((0..samples as u64)
        .map(|i| {
            let mut rng = seed::rng(seed::derive(seed, stream::SAMPLE, i));
            let x: Vec<f64> = (0..n).map(|_| noise.draw(&mut rng)).collect();
            basis.projection_length(&x)
        })
        .collect())
}

fn count_above(values: &[f64], threshold: f64) -> usize {
    values.iter().filter(|&&v| v > threshold).count()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Projection length of centered Bernoulli vectors onto a uniformly random
/// `d`-dimensional subspace against `sigma·sqrt(d) + c1·sqrt(ln n)`, with
/// claimed tail `n⁻³`.
pub fn projection_tail_check(n: usize, d: usize, sigma: f64, samples: usize, c1: f64, seed: u64) -> Result<TailReport> {
    check_samples(samples)?;
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    let mut rng = seed::rng(seed::derive(seed, stream::SUBSPACE, 0));
    let gaussian: Vec<Vec<f64>> =
        (0..d).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
    let basis = Basis::orthonormalize(n, gaussian)?;
    let lengths = projection_lengths(&basis, sigma, samples, seed)?;
    let nf = n as f64;
    let threshold = sigma * (d as f64).sqrt() + c1 * nf.ln().sqrt();
    let mut report = TailReport::new(
        "projection_tail",
        n,
        json!({ "d": d, "sigma": sigma, "c1": c1, "seed": seed }),
        samples,
        threshold,
        count_above(&lengths, threshold),
        nf.powi(-3),
    );
    report.observed.insert("mean_length".into(), mean(&lengths));
    report.observed.insert("max_length".into(), max_of(&lengths));
    Ok(report)
}

/// Projection onto `k` disjoint normalized indicators of support `s`
/// (coordinates at random) against `c2·sqrt(k)·(sigma + α·ln n)` with
/// `α = 2/sqrt(s)`; claimed tail `n⁻³`.
pub fn flat_basis_projection_check(
    n: usize,
    s: usize,
    k: usize,
    sigma: f64,
    samples: usize,
    c2: f64,
    seed: u64,
) -> Result<TailReport> {
    check_samples(samples)?;
    if s == 0 || k == 0 || k * s > n {
        return Err(Error::InvalidArgument(format!("need k·s ≤ n with k, s ≥ 1, got k = {k}, s = {s}, n = {n}")));
    }
    let mut rng = seed::rng(seed::derive(seed, stream::SUBSPACE, 0));
    let mut coords: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(coords.as_mut_slice(), &mut rng);
    let height = 1.0 / (s as f64).sqrt();
    let vectors: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut v = vec![0.0; n];
            for &c in &coords[j * s..(j + 1) * s] {
                v[c] = height;
            }
            v
        })
        .collect();
    let basis = Basis::new(n, vectors)?;
    let lengths = projection_lengths(&basis, sigma, samples, seed)?;
    let nf = n as f64;
    let alpha = 2.0 / (s as f64).sqrt();
    let threshold = c2 * (k as f64).sqrt() * (sigma + alpha * nf.ln());
    let mut report = TailReport::new(
        "flat_basis_projection",
        n,
        json!({ "s": s, "k": k, "sigma": sigma, "alpha": alpha, "c2": c2, "seed": seed }),
        samples,
        threshold,
        count_above(&lengths, threshold),
        nf.powi(-3),
    );
    report.observed.insert("mean_length".into(), mean(&lengths));
    report.observed.insert("max_length".into(), max_of(&lengths));
    Ok(report)
}

/// Spectral norm of the noise matrix `E = A − P` against `c0·σ·sqrt(n)`,
/// claimed tail `n⁻³`. Records the mean and max of `‖E‖/(σ·sqrt(n))`.
/// Models with `0 < σ² < ln(n)/n` are refused.
pub fn noise_norm_check(model: &PlantedModel, samples: usize, c0: f64, seed: u64) -> Result<TailReport> {
    check_samples(samples)?;
    let n = model.n();
    let nf = n as f64;
    let sigma = model.stats().sigma;
    if sigma > 0.0 && sigma * sigma < nf.ln() / nf {
        return Err(Error::RegimeViolation(format!(
            "σ² = {:.3e} is below ln(n)/n = {:.3e}",
            sigma * sigma,
            nf.ln() / nf
        )));
    }
    let scale = sigma * nf.sqrt();
    let norms: Vec<f64> = (0..samples as u64)
        .map(|i| spectral_norm(&sample_noise_matrix(model, seed::derive(seed, stream::SAMPLE, i))))
        .collect::<Result<_>>()?;
    let threshold = c0 * scale;
    let exceed = if scale > 0.0 { count_above(&norms, threshold) } else { 0 };
    let mut report = TailReport::new(
        "noise_norm",
        n,
        json!({ "sizes": model.sizes(), "block_probs": model.block_probs(), "sigma": sigma, "c0": c0, "seed": seed }),
        samples,
        threshold,
        exceed,
        nf.powi(-3),
    );
    let ratios: Vec<f64> = norms.iter().map(|&x| if scale > 0.0 { x / scale } else { 0.0 }).collect();
    report.observed.insert("mean_ratio".into(), mean(&ratios));
    report.observed.insert("max_ratio".into(), max_of(&ratios));
    report.observed.insert("max_norm".into(), max_of(&norms));
    Ok(report)
}

/// Outcome of one subspace perturbation comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DavisKahanReport {
    /// Sine of the largest principal angle between the top-k left
    /// subspaces of `M` and `M + N`.
    pub lhs: f64,
    /// `‖N‖ / (σ_k(M) − σ_{k+1}(M))`.
    pub rhs: f64,
    pub holds: bool,
}

pub fn davis_kahan_check<T: Scalar>(m: &DenseMatrix<T>, noise: &DenseMatrix<T>, k: usize) -> Result<DavisKahanReport> {
    let values = svd_values(m)?;
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange { k, max: values.len() });
    }
    let next = values.get(k).copied().unwrap_or(T::zero());
    let gap = (values[k - 1] - next).as_f64();
    if gap <= 1e-12 {
        return Err(Error::DegenerateGap { k, gap });
    }
    let perturbed = m.add(noise)?;
    let lhs = sin_max_principal_angle(&top_k_left_basis(m, k)?, &top_k_left_basis(&perturbed, k)?)?.as_f64();
    let rhs = spectral_norm(noise)?.as_f64() / gap;
    Ok(DavisKahanReport { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-6) })
}

/// [`davis_kahan_check`] on `pairs` random Gaussian `(M, N)` pairs of size
/// `rows × cols`, with `k` cycling through `1..=5` and the noise scale
/// through `{0.01, 0.1, 0.3, 1, 3}`. Violations are counted as exceedances
/// of the ratio threshold 1.
pub fn davis_kahan_sweep(pairs: usize, rows: usize, cols: usize, seed: u64) -> Result<TailReport> {
    check_samples(pairs)?;
    const SCALES: [f64; 5] = [0.01, 0.1, 0.3, 1.0, 3.0];
    let kmax = rows.min(cols).saturating_sub(1).clamp(1, 5);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempt = 0u64;
    while done < pairs {
        let mut rng = seed::rng(seed::derive(seed, stream::SAMPLE, attempt));
        attempt += 1;
        let k = 1 + done % kmax;
        let scale = SCALES[done % SCALES.len()];
        let m = DenseMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal));
        let noise = DenseMatrix::from_fn(rows, cols, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
        let report = match davis_kahan_check(&m, &noise, k) {
            Ok(r) => r,
            Err(Error::DegenerateGap { .. }) => continue,
            Err(e) => return Err(e),
        };
        if !report.holds {
            violations += 1;
        }
        if report.rhs > 0.0 {
            worst = worst.max(report.lhs / report.rhs);
        }
        done += 1;
    }
    let mut report = TailReport::new(
        "davis_kahan",
        rows.max(cols),
        json!({ "rows": rows, "cols": cols, "pairs": pairs, "seed": seed }),
        pairs,
        1.0,
        violations,
        0.0,
    );
    report.pass = violations == 0;
    report.observed.insert("worst_ratio".into(), worst);
    Ok(report)
}

/// Ratio `σ_k(A)/σ_k(P)` where `A` is the `Z × Y1` block of `P` for a random
/// split. Exceedances are splits with ratio below `1/(4·sqrt 2)`; the check
/// passes when they are at most 5% of the samples. For `k = 1` the ratio is
/// only recorded.
pub fn singular_value_transfer_check(model: &PlantedModel, samples: usize, seed: u64) -> Result<TailReport> {
    check_samples(samples)?;
    let stats = model.stats();
    let k = model.k();
    let lambda = stats.lambda_k;
    if lambda <= 0.0 {
        return Err(Error::InvalidArgument("λ_k(P) is zero".into()));
    }
    let n = model.n();
    let threshold = 1.0 / (4.0 * 2f64.sqrt());
    let ratios: Vec<f64> = (0..samples as u64)
        .map(|i| {
            let split = make_split(n, seed::derive(seed, stream::SAMPLE, i))?;
            let a = DenseMatrix::from_fn(split.z.len(), split.y1.len(), |r, c| model.prob(split.z[r], split.y1[c]));
            let values = svd_values(&a)?;
            Ok(values.get(k - 1).copied().unwrap_or(0.0) / lambda)
        })
        .collect::<Result<_>>()?;
    let below = ratios.iter().filter(|&&r| r < threshold).count();
    let mut report = TailReport::new(
        "singular_value_transfer",
        n,
        json!({ "sizes": model.sizes(), "block_probs": model.block_probs(), "k": k, "seed": seed }),
        samples,
        threshold,
        below,
        0.05,
    );
    report.pass = k == 1 || below as f64 <= 0.05 * samples as f64;
    report.observed.insert("mean_ratio".into(), mean(&ratios));
    report.observed.insert("min_ratio".into(), ratios.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(report)
}

/// The flattest unit vector with sup-norm `alpha`: `⌊1/α²⌋` coordinates
/// equal to `α` and one remainder coordinate.
pub fn flat_coefficients(n: usize, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) || alpha * alpha * (n as f64) < 1.0 - 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "no unit vector in dimension {n} has sup-norm {alpha}"
        )));
    }
    let m = ((1.0 / (alpha * alpha)) + 1e-12).floor() as usize;
    let m = m.min(n);
    let mut a = vec![alpha; m];
    let rest = 1.0 - m as f64 * alpha * alpha;
    if rest > 1e-12 && m < n {
        a.push(rest.sqrt());
    }
    let len = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    a.iter_mut().for_each(|x| *x /= len);
    Ok(a)
}

/// `|Σ a_i ξ_i|` for the flattest admissible `a` against
/// `4·(sigma·sqrt(ln n) + α·ln n)`, claimed tail `2n⁻³`.
pub fn weighted_sum_tail_check(n: usize, alpha: f64, sigma: f64, samples: usize, seed: u64) -> Result<TailReport> {
    check_samples(samples)?;
    let a = flat_coefficients(n, alpha)?;
    let noise = CenteredBernoulli::new(sigma)?;
    let sums: Vec<f64> = (0..samples as u64)
        .map(|i| {
            let mut rng = seed::rng(seed::derive(seed, stream::SAMPLE, i));
            a.iter().map(|&w| w * noise.draw(&mut rng)).sum::<f64>().abs()
        })
        .collect();
    let nf = n as f64;
    let threshold = 4.0 * (sigma * nf.ln().sqrt() + alpha * nf.ln());
    let mut report = TailReport::new(
        "weighted_sum_tail",
        n,
        json!({ "alpha": alpha, "sigma": sigma, "support": a.len(), "seed": seed }),
        samples,
        threshold,
        count_above(&sums, threshold),
        2.0 * nf.powi(-3),
    );
    report.observed.insert("max_abs_sum".into(), max_of(&sums));
    Ok(report)
}

/// Runs each named check at its default desk-scale parameters.
pub fn run_diagnostics(suite: &[String], seed: u64, constants: &Constants) -> Result<Vec<TailReport>> {
    suite.iter().map(|name| run_check(name, seed, constants)).collect()
}

fn run_check(name: &str, seed: u64, c: &Constants) -> Result<TailReport> {
    match name {
        "projection_tail" => projection_tail_check(1000, 20, 0.5, 10_000, c.c1, seed),
        "flat_basis_projection" => flat_basis_projection_check(1000, 200, 5, 0.5, 10_000, c.c2, seed),
        "noise_norm" => noise_norm_check(&build_model(&[1000], &[vec![0.5]])?, 50, c.c0, seed),
        "davis_kahan" => davis_kahan_sweep(200, 50, 30, seed),
        "singular_value_transfer" => {
            singular_value_transfer_check(&presets::bipartition(1000, 0.5, 0.2)?, 100, seed)
        }
        "weighted_sum_tail" => weighted_sum_tail_check(1000, 0.05, 0.5, 100_000, seed),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

/// Whether every report passed.
pub fn all_pass(reports: &[TailReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
