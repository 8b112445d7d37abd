use super::law::{ApproxLaw, EvalMode};
use crate::distributions::{invert_cdf, Component, Prepared};
use crate::quadrature::{integrate_breaks, QuadOptions};
use crate::{Error, Result};

/// Absolute error target of [`law_cdf`].
pub const CDF_TOL: f64 = 1e-9;
/// Target `|law_cdf(q) - p|` of [`law_quantile`].
pub const QUANTILE_TOL: f64 = 1e-8;

/// Mass beyond a component's integration cut.
const TAIL: f64 = 1e-13;

struct Part {
    law: Prepared,
    /// Integrate over `s` with `x = s²` (density unbounded at the origin).
    squared: bool,
    cut: f64,
    /// Interior points worth splitting at: mode region and shoulders.
    marks: Vec<f64>,
}

impl Part {
    fn new(c: &Component) -> Self {
        let mean = c.mean();
        let sd = c.variance().sqrt();
        let marks = if mean.is_finite() && sd.is_finite() {
            [-3.0, -1.5, 0.0, 1.5, 3.0, 6.0]
                .iter()
                .map(|k| mean + k * sd)
                .filter(|x| *x > 0.0)
                .collect()
        } else {
            [0.01, 0.25, 0.5, 0.75, 0.99]
                .iter()
                .filter_map(|&p| c.quantile(p).ok())
                .collect()
        };
        Part {
            law: c.prepare(),
            squared: c.leading_dof() < 2.0,
            cut: c.upper_cut(TAIL),
            marks,
        }
    }

    /// `∫_0^upper pdf(x) g(x) dx`, with breaks at this part's marks and
    /// at `extra`.
    fn integrate<G: FnMut(f64) -> f64>(&self, upper: f64, extra: &[f64], mut g: G, tol: f64) -> Result<f64> {
        let upper = upper.min(self.cut);
        if upper <= 0.0 {
            return Ok(0.0);
        }
        let mut pts: Vec<f64> = vec![0.0, upper];
        pts.extend(
            self.marks
                .iter()
                .chain(extra)
                .copied()
                .filter(|&x| x > 0.0 && x < upper),
        );
        let opts = QuadOptions {
            abs_tol: tol,
            rel_tol: 0.0,
            max_intervals: 4000,
        };
        let r = if self.squared {
            let breaks: Vec<f64> = pts.iter().map(|x| x.sqrt()).collect();
            integrate_breaks(
                |s| {
                    let x = s * s;
                    let d = self.law.pdf(x);
                    if d == 0.0 || s == 0.0 {
                        0.0
                    } else {
                        2.0 * s * d * g(x)
                    }
                },
                &breaks,
                &opts,
            )?
        } else {
            integrate_breaks(
                |x| {
                    let d = self.law.pdf(x);
                    if d == 0.0 || !d.is_finite() {
                        0.0
                    } else {
                        d * g(x)
                    }
                },
                &pts,
                &opts,
            )?
        };
        Ok(r.value)
    }
}

/// Prepared evaluator for one law; reusable across many `t`.
pub struct LawEvaluator {
    w1: f64,
    c2: f64,
    c3: f64,
    first: Part,
    second: Option<Part>,
    coupling: Option<(f64, Part)>,
    mode: EvalMode,
    tol: f64,
}

impl LawEvaluator {
    pub fn new(law: &ApproxLaw) -> Self {
        Self::with_tol(law, CDF_TOL)
    }

    pub fn with_tol(law: &ApproxLaw, tol: f64) -> Self {
        let second = law.comp2.filter(|_| law.c2 > 0.0).map(|c| Part::new(&c));
        LawEvaluator {
            w1: law.w1(),
            c2: law.c2,
            c3: law.c3,
            first: Part::new(&law.comp1),
            coupling: law
                .coupling
                .filter(|_| second.is_some())
                .map(|cp| (cp.scale, Part::new(&Component::Chi(cp.k)))),
            second,
            mode: law.eval_mode(),
            tol,
        }
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::domain("law_cdf", "t is NaN"));
        }
        let u = t - self.c3;
        if u <= 0.0 {
            return Ok(0.0);
        }
        if u == f64::INFINITY {
            return Ok(1.0);
        }
        let x_max = u / self.w1;
        let Some(second) = &self.second else {
            return Ok(self.first.law.cdf(x_max));
        };
        // Points where the second factor's CDF changes fastest.
        let shoulders: Vec<f64> = second.marks.iter().map(|y| (u - self.c2 * y) / self.w1).collect();
        let v = match &self.coupling {
            None => self.first.integrate(
                x_max,
                &shoulders,
                |x| second.law.cdf((u - self.w1 * x) / self.c2),
                self.tol,
            )?,
            Some((scale, k_part)) => {
                let inner_tol = 0.01 * self.tol;
                let mut failure = None;
                let v = self.first.integrate(
                    x_max,
                    &shoulders,
                    |x| {
                        let a = self.w1 * x;
                        let room = u - a;
                        if room <= 0.0 || a <= 0.0 {
                            return 0.0;
                        }
                        let r = k_part.integrate(
                            f64::INFINITY,
                            &[],
                            |k| second.law.cdf(room / (self.c2 * (1.0 + scale * k / a))),
                            inner_tol,
                        );
                        match r {
                            Ok(v) => v,
                            Err(e) => {
                                failure.get_or_insert(e);
                                f64::NAN
                            }
                        }
                    },
                    self.tol,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                v?
            }
        };
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn quantile(&self, p: f64, hint: f64) -> Result<f64> {
        invert_cdf(
            |t| self.cdf(t).unwrap_or(f64::NAN),
            None::<fn(f64) -> f64>,
            p,
            self.c3,
            hint.max(self.c3 + 1e-9),
            QUANTILE_TOL,
        )
    }
}

/// `P(ℓ₁ <= t)` under the approximating law.
pub fn law_cdf(law: &ApproxLaw, t: f64) -> Result<f64> {
    LawEvaluator::new(law).cdf(t)
}

/// `q` with `law_cdf(q) = prob` to within [`QUANTILE_TOL`].
pub fn law_quantile(law: &ApproxLaw, prob: f64) -> Result<f64> {
    let hint = law.mean();
    LawEvaluator::new(law).quantile(prob, if hint.is_finite() { hint } else { 1.0 })
}

/// Density by centred differencing of a tightly converged CDF.
pub fn law_density(law: &ApproxLaw, t: f64) -> Result<f64> {
    let sd = law.variance().sqrt();
    let scale = if sd.is_finite() && sd > 0.0 {
        sd
    } else {
        law.mean().abs().max(1.0)
    };
    let h = 1e-3 * scale;
    let ev = LawEvaluator::with_tol(law, 1e-13);
    if t - h <= law.c3 {
        // One-sided near the left end of the support.
        let lo = t.max(law.c3);
        return Ok(((ev.cdf(lo + h)? - ev.cdf(lo)?) / h).max(0.0));
    }
    Ok(((ev.cdf(t + h)? - ev.cdf(t - h)?) / (2.0 * h)).max(0.0))
}
