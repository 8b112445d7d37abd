//! Detection power `P_D = P(ℓ₁ > t(α))` under the approximating law, null
//! thresholds by seeded Monte Carlo, power tables and sample-size search.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::montecarlo::{empirical_quantile, simulate_l1, simulate_roy_pillai, SimConfig};
use crate::royapprox::{build_law, LawEvaluator, Scenario};
use crate::{Error, Result};

/// Null replicates and seed used when none are given.
pub const DEFAULT_NULL_REPLICATES: u64 = 1_000_000;
pub const DEFAULT_NULL_SEED: u64 = 20_140_301;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSource {
    UserSupplied,
    MonteCarloNull,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub scenario: Scenario,
    pub alpha: f64,
    pub threshold: Option<f64>,
    pub threshold_source: ThresholdSource,
    /// Null simulation used when the source is [`ThresholdSource::MonteCarloNull`].
    pub null_sim: SimConfig,
}

impl PowerSpec {
    pub fn monte_carlo(scenario: Scenario, alpha: f64, null_sim: SimConfig) -> Result<Self> {
        let request = PowerSpec {
            scenario,
            alpha,
            threshold: None,
            threshold_source: ThresholdSource::MonteCarloNull,
            null_sim,
        };
        request.validate()?;
        Ok(request)
    }

    pub fn with_threshold(scenario: Scenario, alpha: f64, threshold: f64) -> Result<Self> {
        let request = PowerSpec {
            scenario,
            alpha,
            threshold: Some(threshold),
            threshold_source: ThresholdSource::UserSupplied,
            null_sim: SimConfig::new(DEFAULT_NULL_REPLICATES, DEFAULT_NULL_SEED)?,
        };
        request.validate()?;
        Ok(request)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        check_alpha(self.alpha)?;
        match (self.threshold_source, self.threshold) {
            (ThresholdSource::UserSupplied, None) => Err(Error::InvalidConfig(
                "user-supplied threshold source needs a threshold".into(),
            )),
            (ThresholdSource::UserSupplied, Some(t)) if !(t > 0.0) => {
                Err(Error::InvalidConfig(format!("threshold must be > 0, got {t}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    pub power: f64,
    pub threshold_used: f64,
    pub threshold_se: f64,
    pub threshold_source: ThresholdSource,
    pub metadata: Vec<String>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_replicates(alpha: f64, cfg: &SimConfig) -> Result<()> {
    let needed = (100.0 / alpha).ceil() as u64;
    if cfg.replicates < needed {
        return Err(Error::InvalidConfig(format!(
            "alpha = {alpha} needs at least {needed} null replicates, got {}",
            cfg.replicates
        )));
    }
    Ok(())
}

/// A scenario whose ℓ₁ has the same null law as `s`, in the cheapest form to
/// simulate. Cases 3 and 5 reduce to case 4 (CCA with `m = p`, `n_H = q`,
/// `n_E = n − q`), case 1 to case 2.
pub fn null_equivalent(s: &Scenario) -> Scenario {
    match *s {
        Scenario::SignalKnownCov { m, n_h, sigma, .. } | Scenario::ManovaKnownCov { m, n_h, sigma, .. } => {
            Scenario::ManovaKnownCov {
                m,
                n_h,
                omega: 0.0,
                sigma,
            }
        }
        Scenario::SignalEstCov { m, n_h, n_e, .. } | Scenario::ManovaEstCov { m, n_h, n_e, .. } => {
            Scenario::ManovaEstCov {
                m,
                n_h,
                n_e,
                omega: 0.0,
            }
        }
        Scenario::Cca { p, q, n, .. } => Scenario::ManovaEstCov {
            m: p,
            n_h: q,
            n_e: n - q,
            omega: 0.0,
        },
    }
}

/// Empirical `(1 − α)` quantile of ℓ₁ under the null and its binomial SE.
pub fn null_threshold(s: &Scenario, alpha: f64, cfg: &SimConfig) -> Result<(f64, f64)> {
    s.validate()?;
    check_alpha(alpha)?;
    check_replicates(alpha, cfg)?;
    let sim = simulate_l1(&null_equivalent(s), cfg)?;
    let q = empirical_quantile(&sim.values, 1.0 - alpha)?;
    Ok((q.value, q.se))
}

/// `P(ℓ₁ > t)` under the approximating law.
pub fn power_at(s: &Scenario, t: f64) -> Result<f64> {
    if t == f64::INFINITY {
        return Ok(0.0);
    }
    let law = build_law(s)?;
    Ok((1.0 - LawEvaluator::new(&law).cdf(t)?).clamp(0.0, 1.0))
}

fn power_with(request: &PowerSpec, threshold: (f64, f64)) -> Result<PowerResult> {
    let law = build_law(&request.scenario)?;
    let ev = LawEvaluator::new(&law);
    let (t, se) = threshold;
    let power = if t == f64::INFINITY {
        0.0
    } else {
        (1.0 - ev.cdf(t)?).clamp(0.0, 1.0)
    };
    let mut metadata = vec![format!("evaluation: {:?}", ev.mode()).to_lowercase()];
    if request.threshold_source == ThresholdSource::MonteCarloNull {
        metadata.push(format!(
            "null threshold: {} replicates, seed {}",
            request.null_sim.replicates, request.null_sim.master_seed
        ));
    }
    metadata.extend(law.notes);
    Ok(PowerResult {
        power,
        threshold_used: t,
        threshold_se: se,
        threshold_source: request.threshold_source,
        metadata,
    })
}

pub fn power(request: &PowerSpec) -> Result<PowerResult> {
    request.validate()?;
    let threshold = match (request.threshold_source, request.threshold) {
        (ThresholdSource::UserSupplied, Some(t)) => (t, 0.0),
        _ => null_threshold(&request.scenario, request.alpha, &request.null_sim)?,
    };
    power_with(request, threshold)
}

/// One row of a power table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub power: PowerSpec,
    /// Alternative simulation for the empirical power column.
    pub simulate: Option<SimConfig>,
    /// Also report Pillai's trace (cases 3-5): its null threshold and, when
    /// simulating, its empirical power.
    #[serde(default)]
    pub pillai: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub scenario: Scenario,
    pub alpha: f64,
    pub threshold: Option<f64>,
    pub threshold_se: Option<f64>,
    pub theory: Option<f64>,
    pub simulated: Option<f64>,
    pub simulated_se: Option<f64>,
    /// `simulated − theory`.
    pub gap: Option<f64>,
    pub pillai_threshold: Option<f64>,
    pub pillai_simulated: Option<f64>,
    pub pillai_simulated_se: Option<f64>,
    /// Replicates redrawn for numerical conditioning (CCA simulations).
    pub resampled: u64,
    pub error: Option<String>,
    pub metadata: Vec<String>,
}

impl TableRow {
    fn failed(request: &TableSpec, err: &Error) -> Self {
        TableRow {
            scenario: request.power.scenario,
            alpha: request.power.alpha,
            threshold: None,
            threshold_se: None,
            theory: None,
            simulated: None,
            simulated_se: None,
            gap: None,
            pillai_threshold: None,
            pillai_simulated: None,
            pillai_simulated_se: None,
            resampled: 0,
            error: Some(err.to_string()),
            metadata: Vec::new(),
        }
    }
}

/// Evaluates each row independently; a failing row carries its error string
/// and does not stop the table. Rows with the same null law and null
/// simulation settings share one null sample.
pub fn power_table(rows: &[TableSpec]) -> Vec<TableRow> {
    let mut nulls = NullCache::default();
    rows.iter()
        .map(|row| table_row(row, &mut nulls).unwrap_or_else(|e| TableRow::failed(row, &e)))
        .collect()
}

#[derive(Default)]
struct NullCache {
    roy: HashMap<String, Vec<f64>>,
    pillai: HashMap<String, Vec<f64>>,
}

impl NullCache {
    fn key(request: &PowerSpec) -> String {
        serde_json::to_string(&(null_equivalent(&request.scenario), request.null_sim)).expect("serializable key")
    }

    fn roy(&mut self, request: &PowerSpec) -> Result<&[f64]> {
        let key = Self::key(request);
        if !self.roy.contains_key(&key) {
            let values = simulate_l1(&null_equivalent(&request.scenario), &request.null_sim)?.values;
            self.roy.insert(key.clone(), values);
        }
        Ok(&self.roy[&key])
    }

    fn pillai(&mut self, request: &PowerSpec) -> Result<&[f64]> {
        let key = Self::key(request);
        if !self.pillai.contains_key(&key) {
            let null = null_equivalent(&request.scenario);
            if null.case() != crate::Case::ManovaEstCov {
                return Err(Error::InvalidScenario(
                    "Pillai's trace needs an error matrix (cases 3-5)".into(),
                ));
            }
            let run = simulate_roy_pillai(&null, &request.null_sim)?;
            self.pillai.insert(key.clone(), run.pillai);
            self.roy.entry(key.clone()).or_insert(run.roy);
        }
        Ok(&self.pillai[&key])
    }
}

fn exceedance(values: &[f64], t: f64) -> (f64, f64) {
    let n = values.len() as f64;
    let p = values.iter().filter(|&&v| v > t).count() as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn table_row(row: &TableSpec, nulls: &mut NullCache) -> Result<TableRow> {
    let request = &row.power;
    request.validate()?;
    let pillai_threshold = if row.pillai {
        check_replicates(request.alpha, &request.null_sim)?;
        Some(empirical_quantile(nulls.pillai(request)?, 1.0 - request.alpha)?.value)
    } else {
        None
    };
    let threshold = match (request.threshold_source, request.threshold) {
        (ThresholdSource::UserSupplied, Some(t)) => (t, 0.0),
        _ => {
            check_replicates(request.alpha, &request.null_sim)?;
            let q = empirical_quantile(nulls.roy(request)?, 1.0 - request.alpha)?;
            (q.value, q.se)
        }
    };
    let result = power_with(request, threshold)?;
    let mut out = TableRow {
        scenario: request.scenario,
        alpha: request.alpha,
        threshold: Some(threshold.0),
        threshold_se: Some(threshold.1),
        theory: Some(result.power),
        simulated: None,
        simulated_se: None,
        gap: None,
        pillai_threshold,
        pillai_simulated: None,
        pillai_simulated_se: None,
        resampled: 0,
        error: None,
        metadata: result.metadata,
    };
    if let Some(cfg) = &row.simulate {
        let (roy, pillai, resampled) = match pillai_threshold {
            Some(_) => {
                let run = simulate_roy_pillai(&request.scenario, cfg)?;
                (run.roy, Some(run.pillai), run.resampled)
            }
            None => {
                let run = simulate_l1(&request.scenario, cfg)?;
                (run.values, None, run.resampled)
            }
        };
        let (p, se) = exceedance(&roy, threshold.0);
        out.simulated = Some(p);
        out.simulated_se = Some(se);
        out.gap = Some(p - result.power);
        out.resampled = resampled;
        if let (Some(values), Some(t)) = (pillai, pillai_threshold) {
            let (p, se) = exceedance(&values, t);
            out.pillai_simulated = Some(p);
            out.pillai_simulated_se = Some(se);
        }
    }
    Ok(out)
}

/// Integer parameter varied by [`sample_size_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "parameter")]
pub enum Vary {
    /// `n_E` of cases 3–4, signal fixed.
    NE,
    /// `n_H` of cases 1–4, signal fixed.
    NH,
    /// Sample size `n` of case 5.
    N,
    /// Per-group size `n_k` of a balanced one-way MANOVA with `groups`
    /// groups: `n_E = groups·(n_k − 1)` and the template's signal, taken
    /// at `n_k = reference`, scales in proportion to `n_k`.
    GroupSize { groups: u32, reference: u32 },
}

impl Vary {
    pub fn apply(&self, template: &Scenario, v: u32) -> Result<Scenario> {
        let mut s = *template;
        match (self, &mut s) {
            (Vary::NE, Scenario::SignalEstCov { n_e, .. } | Scenario::ManovaEstCov { n_e, .. }) => *n_e = v,
            (
                Vary::NH,
                Scenario::SignalKnownCov { n_h, .. }
                | Scenario::ManovaKnownCov { n_h, .. }
                | Scenario::SignalEstCov { n_h, .. }
                | Scenario::ManovaEstCov { n_h, .. },
            ) => *n_h = v,
            (Vary::N, Scenario::Cca { n, .. }) => *n = v,
            (&Vary::GroupSize { groups, reference }, _) if template.case() != crate::Case::Cca => {
                if groups < 2 || reference == 0 {
                    return Err(Error::InvalidConfig(
                        "group-size search needs groups >= 2 and reference >= 1".into(),
                    ));
                }
                let signal = template.signal() * v as f64 / reference as f64;
                s = s.with_signal(signal)?;
                match &mut s {
                    Scenario::SignalEstCov { n_e, .. } | Scenario::ManovaEstCov { n_e, .. } => {
                        *n_e = groups * v.saturating_sub(1)
                    }
                    _ => {}
                }
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "{self:?} cannot be varied in case {}",
                    template.case().number()
                )))
            }
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSize {
    pub value: u32,
    pub power: f64,
    /// Largest failing value and its power, when the range minimum fails.
    pub below: Option<(u32, f64)>,
    pub warnings: Vec<String>,
}

/// Smallest `v` in `range` whose power reaches `target`, by bisection with
/// Monte Carlo null thresholds from `null_sim` at every probed value.
pub fn sample_size_search(
    template: &Scenario,
    alpha: f64,
    target: f64,
    vary: Vary,
    range: (u32, u32),
    null_sim: &SimConfig,
) -> Result<SampleSize> {
    check_alpha(alpha)?;
    let (lo, hi) = range;
    if lo > hi {
        return Err(Error::InvalidConfig(format!("empty range {lo}..={hi}")));
    }
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidConfig(format!(
            "target power must lie in [0, 1], got {target}"
        )));
    }
    let eval = |v: u32| -> Result<f64> {
        let s = vary.apply(template, v)?;
        let (t, _) = null_threshold(&s, alpha, null_sim)?;
        power_at(&s, t)
    };
    if target <= 0.0 {
        return Ok(SampleSize {
            value: lo,
            power: eval(lo)?,
            below: None,
            warnings: Vec::new(),
        });
    }
    let p_lo = eval(lo)?;
    let p_hi = eval(hi)?;
    let mut warnings = Vec::new();
    if p_hi < p_lo {
        warnings.push(format!(
            "power not monotone over range: {p_lo:.4} at {lo}, {p_hi:.4} at {hi}"
        ));
    }
    if target >= 1.0 || p_hi < target {
        return Err(Error::Unattainable {
            target,
            lo: lo as u64,
            hi: hi as u64,
            power_at_hi: p_hi,
        });
    }
    if p_lo >= target {
        return Ok(SampleSize {
            value: lo,
            power: p_lo,
            below: None,
            warnings,
        });
    }
    let (mut a, mut pa, mut b, mut pb) = (lo, p_lo, hi, p_hi);
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        let pm = eval(mid)?;
        if pm >= target {
            b = mid;
            pb = pm;
        } else {
            a = mid;
            pa = pm;
        }
    }
    Ok(SampleSize {
        value: b,
        power: pb,
        below: Some((a, pa)),
        warnings,
    })
}
