use std::fs::File;
use std::io::BufWriter;

use serde::Deserialize;
use serde_json::{json, Value};

use royroot::montecarlo::{empirical_summary, manova_noncentrality, regression_noncentrality, simulate_l1, write_dump};
use royroot::power::{power, power_table, PowerSpec, TableRow, TableSpec, ThresholdSource};
use royroot::royapprox::{build_law, law_density, moments, LawEvaluator};
use royroot::{Scenario, SimConfig};

use crate::args::{GridArgs, PowerArgs, Precision, ScenarioArgs, SimulateArgs, TableArgs};
use crate::error::CliError;
use crate::render::{num, opt_num, Report, Table};
use crate::scenario::{from_noncentrality, GroupsFile, RegressionFile, Resolved};

fn warn(notes: &[String]) {
    for n in notes {
        eprintln!("warning: {n}");
    }
}

fn scenario_config(r: &Resolved) -> Value {
    let mut v = serde_json::to_value(r.scenario).expect("scenario serializes");
    if let Some(nc) = &r.builder {
        v["builder"] = json!({
            "omega": nc.omega,
            "rank_one": nc.rank_one,
            "direction": nc.direction,
            "spectrum": nc.spectrum,
        });
    }
    v
}

pub fn cmd_power(a: &PowerArgs, prec: Precision) -> Result<Report, CliError> {
    let r = a.scenario.resolve()?;
    warn(&r.warnings);
    let request = match a.threshold {
        Some(t) => PowerSpec::with_threshold(r.scenario, a.alpha, t)?,
        None => PowerSpec::monte_carlo(r.scenario, a.alpha, SimConfig::new(a.replicates, a.seed)?)?,
    };
    let res = power(&request)?;
    let mut table = Table::new(&["power", "threshold", "threshold_se", "threshold_source"]);
    let source = match res.threshold_source {
        ThresholdSource::UserSupplied => "user_supplied",
        ThresholdSource::MonteCarloNull => "monte_carlo_null",
    };
    table.push(vec![
        num(res.power, prec),
        num(res.threshold_used, prec),
        num(res.threshold_se, prec),
        json!(source),
    ]);
    let mut notes = r.warnings.clone();
    notes.extend(res.metadata);
    Ok(Report {
        command: "power",
        config: json!({
            "scenario": scenario_config(&r),
            "alpha": a.alpha,
            "threshold": a.threshold.map(|t| num(t, Precision::Full)),
            "null_replicates": a.replicates,
            "seed": a.seed,
        }),
        table,
        single: true,
        notes,
        failure: None,
    })
}

/// One grid row as written in a grid file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRow {
    label: Option<String>,
    case: Option<u8>,
    m: Option<u32>,
    nh: Option<u32>,
    ne: Option<u32>,
    omega: Option<f64>,
    lambda: Option<f64>,
    sigma: Option<f64>,
    p: Option<u32>,
    q: Option<u32>,
    n: Option<u32>,
    rho: Option<f64>,
    groups: Option<GroupsFile>,
    regression: Option<RegressionFile>,
    #[serde(default)]
    known_covariance: bool,
    alpha: f64,
    threshold: Option<f64>,
    #[serde(default)]
    simulate: bool,
    replicates: Option<u64>,
    #[serde(default)]
    pillai: bool,
}

impl GridRow {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let inline = self.groups.is_some() as u8 + self.regression.is_some() as u8 + self.case.is_some() as u8;
        if inline != 1 {
            return Err(CliError::Validation(
                "give exactly one of case, groups, regression".into(),
            ));
        }
        if let Some(g) = &self.groups {
            return from_noncentrality(manova_noncentrality(&g.design()?)?, self.known_covariance);
        }
        if let Some(rg) = &self.regression {
            return from_noncentrality(regression_noncentrality(&rg.design()?)?, self.known_covariance);
        }
        ScenarioArgs {
            case: self.case,
            m: self.m,
            nh: self.nh,
            ne: self.ne,
            omega: self.omega,
            lambda: self.lambda,
            sigma: self.sigma,
            p: self.p,
            q: self.q,
            n: self.n,
            rho: self.rho,
            ..Default::default()
        }
        .resolve()
    }

    fn request(&self, a: &TableArgs, index: usize) -> Result<(TableSpec, Resolved), CliError> {
        let r = self.resolve()?;
        let null = SimConfig::new(a.null_replicates, a.seed)?;
        let power = match self.threshold {
            Some(t) => {
                let mut s = PowerSpec::with_threshold(r.scenario, self.alpha, t)?;
                s.null_sim = null;
                s
            }
            None => PowerSpec::monte_carlo(r.scenario, self.alpha, null)?,
        };
        let simulate = if self.simulate && !a.no_simulate {
            let n = self.replicates.unwrap_or(a.replicates);
            Some(SimConfig::new(n, a.seed.wrapping_add(1 + index as u64))?)
        } else {
            None
        };
        Ok((
            TableSpec {
                power,
                simulate,
                pillai: self.pillai,
            },
            r,
        ))
    }
}

const TABLE_COLUMNS: [&str; 25] = [
    "label",
    "case",
    "m",
    "nh",
    "ne",
    "omega",
    "lambda",
    "sigma",
    "p",
    "q",
    "n",
    "rho",
    "alpha",
    "threshold",
    "threshold_se",
    "theory",
    "simulated",
    "simulated_se",
    "gap",
    "pillai_threshold",
    "pillai_simulated",
    "pillai_simulated_se",
    "resampled",
    "notes",
    "error",
];

fn scenario_cells(s: Option<&Scenario>, prec: Precision) -> Vec<Value> {
    let mut cells = vec![Value::Null; 11];
    let Some(s) = s else { return cells };
    cells[0] = json!(s.case().number());
    let u = |x: u32| json!(x);
    match *s {
        Scenario::SignalKnownCov {
            m,
            n_h,
            lambda_h,
            sigma,
        } => (cells[1], cells[2], cells[5], cells[6]) = (u(m), u(n_h), num(lambda_h, prec), num(sigma, prec)),
        Scenario::ManovaKnownCov { m, n_h, omega, sigma } => {
            (cells[1], cells[2], cells[4], cells[6]) = (u(m), u(n_h), num(omega, prec), num(sigma, prec))
        }
        Scenario::SignalEstCov { m, n_h, n_e, lambda_h } => {
            (cells[1], cells[2], cells[3], cells[5]) = (u(m), u(n_h), u(n_e), num(lambda_h, prec))
        }
        Scenario::ManovaEstCov { m, n_h, n_e, omega } => {
            (cells[1], cells[2], cells[3], cells[4]) = (u(m), u(n_h), u(n_e), num(omega, prec))
        }
        Scenario::Cca { p, q, n, rho } => {
            (cells[7], cells[8], cells[9], cells[10]) = (u(p), u(q), u(n), num(rho, prec))
        }
    }
    cells
}

fn table_cells(
    label: Option<&str>,
    row: Option<&TableRow>,
    alpha: f64,
    notes: &[String],
    prec: Precision,
) -> Vec<Value> {
    let mut cells = vec![label.map_or(Value::Null, |l| json!(l))];
    cells.extend(scenario_cells(row.map(|r| &r.scenario), prec));
    cells.push(num(alpha, prec));
    let o = |x: Option<f64>| opt_num(x, prec);
    match row {
        Some(r) => cells.extend([
            o(r.threshold),
            o(r.threshold_se),
            o(r.theory),
            o(r.simulated),
            o(r.simulated_se),
            o(r.gap),
            o(r.pillai_threshold),
            o(r.pillai_simulated),
            o(r.pillai_simulated_se),
            json!(r.resampled),
        ]),
        None => cells.extend(std::iter::repeat_n(Value::Null, 10)),
    }
    let mut all_notes: Vec<String> = notes.to_vec();
    if let Some(r) = row {
        all_notes.extend(
            r.metadata
                .iter()
                .filter(|m| !m.starts_with("evaluation") && !m.starts_with("null threshold"))
                .cloned(),
        );
    }
    cells.push(if all_notes.is_empty() {
        Value::Null
    } else {
        json!(all_notes.join("; "))
    });
    cells.push(row.and_then(|r| r.error.clone()).map_or(Value::Null, Value::String));
    cells
}

pub fn cmd_table(a: &TableArgs, prec: Precision) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&a.grid)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", a.grid.display())))?;
    let raw: Vec<Value> = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: expected a JSON array of rows: {e}", a.grid.display())))?;
    SimConfig::new(a.null_replicates, a.seed)?;

    let mut table = Table::new(&TABLE_COLUMNS);
    let mut failed = 0;
    // Evaluate the valid rows in one power_table call so null samples are shared.
    let mut parsed = Vec::with_capacity(raw.len());
    for (i, v) in raw.iter().enumerate() {
        let row = serde_json::from_value::<GridRow>(v.clone())
            .map_err(|e| CliError::Validation(format!("row {i}: {e}")))
            .and_then(|g| g.request(a, i).map(|(request, r)| (g, request, r)));
        parsed.push(row);
    }
    let specs: Vec<TableSpec> = parsed
        .iter()
        .filter_map(|p| p.as_ref().ok().map(|(_, s, _)| s.clone()))
        .collect();
    let mut results = power_table(&specs).into_iter();
    for (i, p) in parsed.iter().enumerate() {
        match p {
            Ok((g, request, r)) => {
                let row = results.next().expect("one result per valid row");
                if row.error.is_some() {
                    failed += 1;
                }
                warn(&r.warnings);
                table.push(table_cells(
                    g.label.as_deref(),
                    Some(&row),
                    request.power.alpha,
                    &r.warnings,
                    prec,
                ));
            }
            Err(e) => {
                failed += 1;
                let label = raw[i].get("label").and_then(Value::as_str);
                let alpha = raw[i].get("alpha").and_then(Value::as_f64).unwrap_or(f64::NAN);
                let mut cells = table_cells(label, None, alpha, &[], prec);
                *cells.last_mut().unwrap() = json!(e.to_string());
                table.push(cells);
            }
        }
    }
    let failure =
        (!raw.is_empty() && failed == raw.len()).then(|| CliError::Numerical(format!("all {failed} rows failed")));
    Ok(Report {
        command: "table",
        config: json!({
            "grid": a.grid.display().to_string(),
            "null_replicates": a.null_replicates,
            "replicates": a.replicates,
            "seed": a.seed,
            "simulate": !a.no_simulate,
        }),
        table,
        single: false,
        notes: Vec::new(),
        failure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Density,
    Cdf,
    Quantile,
}

fn parse_range(s: &str) -> Result<Option<(f64, f64)>, CliError> {
    if s == "auto" {
        return Ok(None);
    }
    let bad = || CliError::Validation(format!("--range must be 'auto' or 'lo:hi', got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(CliError::Validation(format!("--range needs lo < hi, got {lo}:{hi}")));
    }
    Ok(Some((lo, hi)))
}

pub fn cmd_grid(kind: GridKind, a: &GridArgs, prec: Precision) -> Result<Report, CliError> {
    if a.points < 2 {
        return Err(CliError::Validation("--points must be at least 2".into()));
    }
    let range = parse_range(&a.range)?;
    if kind == GridKind::Quantile {
        if let Some((lo, hi)) = range {
            if !(lo > 0.0 && hi < 1.0) {
                return Err(CliError::Validation("quantile --range must lie inside (0, 1)".into()));
            }
        }
    }
    let r = a.scenario.resolve()?;
    warn(&r.warnings);
    let law = build_law(&r.scenario)?;
    let ev = LawEvaluator::new(&law);
    let (mu, sd) = if a.standardized {
        let mo = moments(&r.scenario)?;
        (mo.mean, mo.variance.sqrt())
    } else {
        (0.0, 1.0)
    };
    let hint = if law.mean().is_finite() { law.mean() } else { 1.0 };
    let (lo, hi) = match (kind, range) {
        (GridKind::Quantile, None) => (0.01, 0.99),
        (_, Some(r)) => r,
        (_, None) => (
            (ev.quantile(0.001, hint)? - mu) / sd,
            (ev.quantile(0.999, hint)? - mu) / sd,
        ),
    };
    let step = (hi - lo) / (a.points - 1) as f64;
    let xcol = if kind == GridKind::Quantile {
        "p"
    } else if a.standardized {
        "z"
    } else {
        "x"
    };
    let ycol = match (kind, a.standardized) {
        (GridKind::Density, _) => "density",
        (GridKind::Cdf, _) => "cdf",
        (GridKind::Quantile, false) => "quantile",
        (GridKind::Quantile, true) => "z",
    };
    let mut table = Table::new(&[xcol, ycol]);
    for i in 0..a.points {
        let x = if i + 1 == a.points { hi } else { lo + step * i as f64 };
        let y = match kind {
            GridKind::Cdf => ev.cdf(mu + sd * x)?,
            GridKind::Density => sd * law_density(&law, mu + sd * x)?,
            GridKind::Quantile => (ev.quantile(x, hint)? - mu) / sd,
        };
        table.push(vec![num(x, prec), num(y, prec)]);
    }
    let mut notes = r.warnings.clone();
    notes.extend(law.notes.iter().cloned());
    if a.standardized {
        notes.push(format!(
            "standardized by mean {mu} and sd {sd} from the moment formulas"
        ));
    }
    Ok(Report {
        command: match kind {
            GridKind::Density => "density",
            GridKind::Cdf => "cdf",
            GridKind::Quantile => "quantile",
        },
        config: json!({
            "scenario": scenario_config(&r),
            "points": a.points,
            "range": [lo, hi],
            "standardized": a.standardized,
        }),
        table,
        single: false,
        notes,
        failure: None,
    })
}

pub fn cmd_simulate(a: &SimulateArgs, prec: Precision) -> Result<Report, CliError> {
    let cfg = SimConfig::new(a.replicates, a.seed)?;
    if let Some(p) = a.quantiles.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Validation(format!(
            "--quantiles entries must lie in [0, 1], got {p}"
        )));
    }
    let r = a.scenario.resolve()?;
    warn(&r.warnings);
    let sim = simulate_l1(&r.scenario, &cfg)?;
    let s = empirical_summary(&sim.values, &a.quantiles, &a.thresholds)?;
    if let Some(path) = &a.dump {
        let f =
            File::create(path).map_err(|e| CliError::Validation(format!("cannot create {}: {e}", path.display())))?;
        write_dump(BufWriter::new(f), &r.scenario, &sim.values)?;
    }
    let mut table = Table::new(&["statistic", "value", "se"]);
    table.push(vec![json!("replicates"), json!(s.n), Value::Null]);
    table.push(vec![json!("mean"), num(s.mean, prec), num(s.mean_se, prec)]);
    table.push(vec![json!("variance"), num(s.variance, prec), num(s.variance_se, prec)]);
    for q in &s.quantiles {
        table.push(vec![
            json!(format!("quantile_{}", q.prob)),
            num(q.value, prec),
            num(q.se, prec),
        ]);
    }
    for e in &s.exceedances {
        table.push(vec![
            json!(format!("exceed_{}", e.threshold)),
            num(e.prob, prec),
            num(e.se, prec),
        ]);
    }
    table.push(vec![json!("resampled"), json!(sim.resampled), Value::Null]);
    if let Ok(mo) = moments(&r.scenario) {
        table.push(vec![json!("formula_mean"), num(mo.mean, prec), Value::Null]);
        table.push(vec![json!("formula_variance"), num(mo.variance, prec), Value::Null]);
    }
    Ok(Report {
        command: "simulate",
        config: json!({
            "scenario": scenario_config(&r),
            "replicates": a.replicates,
            "seed": a.seed,
            "quantiles": a.quantiles,
            "thresholds": a.thresholds,
            "dump": a.dump.as_ref().map(|p| p.display().to_string()),
        }),
        table,
        single: false,
        notes: r.warnings.clone(),
        failure: None,
    })
}
