use rand::Rng;
use serde::Serialize;

use super::scenario::Scenario;
use crate::distributions::{ChiSq, Component, FChiParams, FDist};
use crate::{Error, Result};

/// Shape of the approximating law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    /// Chi-square terms with a coupled third term (known covariance).
    ChiCombo,
    /// Two independent F terms plus a shift (estimated covariance).
    TwoF,
    /// F^χ term, an F term and a shift (CCA).
    FChiCombo,
}

/// How [`law_cdf`](super::law_cdf) evaluates the law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// A single component CDF.
    Direct,
    /// One-dimensional convolution integral.
    Convolution,
    /// Two-dimensional adaptive quadrature over the coupled variates.
    NestedQuadrature,
}

/// Third term of the known-covariance laws,
/// `scale · (c2 X2) · K / (c1 X1)` with `K` independent of `X1, X2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coupling {
    pub scale: f64,
    pub k: ChiSq,
}

/// `c1·scale1·X1 + c2·X2 + c3` plus an optional coupled term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxLaw {
    pub kind: LawKind,
    pub c1: f64,
    /// Extra factor on the first term: `λ_H + 1` in case 3, else 1.
    pub scale1: f64,
    pub c2: f64,
    pub c3: f64,
    pub comp1: Component,
    pub comp2: Option<Component>,
    pub coupling: Option<Coupling>,
    pub notes: Vec<String>,
}

impl ApproxLaw {
    /// Multiplier of `X1`.
    pub fn w1(&self) -> f64 {
        self.c1 * self.scale1
    }

    pub fn eval_mode(&self) -> EvalMode {
        if self.coupling.is_some() {
            EvalMode::NestedQuadrature
        } else if self.comp2.is_some() && self.c2 > 0.0 {
            EvalMode::Convolution
        } else {
            EvalMode::Direct
        }
    }

    /// The law with the coupled third term removed.
    pub fn leading_terms(&self) -> ApproxLaw {
        let mut l = self.clone();
        l.coupling = None;
        l
    }

    /// Mean of the independent terms; the coupled term is not included.
    pub fn mean(&self) -> f64 {
        let m2 = self.comp2.map_or(0.0, |c| self.c2 * c.mean());
        self.w1() * self.comp1.mean() + m2 + self.c3
    }

    /// Variance of the independent terms; the coupled term is not included.
    pub fn variance(&self) -> f64 {
        let v2 = self.comp2.map_or(0.0, |c| self.c2 * self.c2 * c.variance());
        self.w1().powi(2) * self.comp1.variance() + v2
    }

    /// One draw from the law, coupled term included.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.w1() * self.comp1.sample(rng);
        let b = self.comp2.map_or(0.0, |c| self.c2 * c.sample(rng));
        let coupled = match &self.coupling {
            Some(cp) if a > 0.0 => cp.scale * b * cp.k.sample(rng) / a,
            _ => 0.0,
        };
        a + b + self.c3 + coupled
    }
}

/// Maps a scenario to its approximate law for `ℓ₁`.
pub fn build_law(s: &Scenario) -> Result<ApproxLaw> {
    s.validate()?;
    let mut notes = Vec::new();
    let law = match *s {
        Scenario::SignalKnownCov {
            m,
            n_h,
            lambda_h,
            sigma,
        } => {
            let s2 = sigma * sigma;
            chi_combo(m, n_h, lambda_h + s2, ChiSq::central(n_h as f64)?, s2, &mut notes)?
        }
        Scenario::ManovaKnownCov { m, n_h, omega, sigma } => {
            let s2 = sigma * sigma;
            chi_combo(m, n_h, s2, ChiSq::new(n_h as f64, omega / s2)?, s2, &mut notes)?
        }
        Scenario::SignalEstCov { m, n_h, n_e, lambda_h } => {
            let nu = n_e as f64 - m as f64;
            let first = Component::F(FDist::central(n_h as f64, nu + 1.0)?);
            two_f(m, n_h as f64, nu, first, lambda_h + 1.0, LawKind::TwoF, &mut notes)?
        }
        Scenario::ManovaEstCov { m, n_h, n_e, omega } => {
            let nu = n_e as f64 - m as f64;
            let first = Component::F(FDist::new(n_h as f64, nu + 1.0, omega)?);
            two_f(m, n_h as f64, nu, first, 1.0, LawKind::TwoF, &mut notes)?
        }
        Scenario::Cca { p, q, n, rho } => {
            let nu = n as f64 - p as f64 - q as f64;
            let first = Component::FChi(FChiParams::from_correlation(q as f64, nu + 1.0, rho, n as f64)?);
            two_f(p, q as f64, nu, first, 1.0, LawKind::FChiCombo, &mut notes)?
        }
    };
    Ok(law)
}

fn chi_combo(m: u32, n_h: u32, c1: f64, first: ChiSq, s2: f64, notes: &mut Vec<String>) -> Result<ApproxLaw> {
    let comp2 = if m > 1 {
        Some(Component::Chi(ChiSq::central(m as f64 - 1.0)?))
    } else {
        None
    };
    let coupling = if m > 1 && n_h > 1 {
        Some(Coupling {
            scale: s2,
            k: ChiSq::central(n_h as f64 - 1.0)?,
        })
    } else {
        None
    };
    notes.push("small-noise expansion; remainder o_p(sigma^4) is not modelled".into());
    if coupling.is_some() {
        notes.push("cdf by nested adaptive quadrature over the coupled variates".into());
    }
    Ok(ApproxLaw {
        kind: LawKind::ChiCombo,
        c1,
        scale1: 1.0,
        c2: if m > 1 { s2 } else { 0.0 },
        c3: 0.0,
        comp1: Component::Chi(first),
        comp2,
        coupling,
        notes: std::mem::take(notes),
    })
}

/// Shared layout of cases 3, 4 and 5 with `dim` = `m` (or `p`) and
/// `a1` = `n_H` (or `q`).
fn two_f(
    dim: u32,
    a1: f64,
    nu: f64,
    first: Component,
    scale1: f64,
    kind: LawKind,
    notes: &mut Vec<String>,
) -> Result<ApproxLaw> {
    let a2 = dim as f64 - 1.0;
    let (comp2, c2, c3) = if dim > 1 {
        (
            Some(Component::F(FDist::central(a2, nu + 2.0)?)),
            a2 / (nu + 2.0),
            a2 / (nu * (nu - 1.0)),
        )
    } else {
        (None, 0.0, 0.0)
    };
    if dim == 1 {
        notes.push("single-term law; exact in this dimension".into());
    } else {
        notes.push("large-signal approximation; terms O_p(signal^-1/2) are neglected, no remainder correction".into());
        if kind == LawKind::TwoF && a1 < 4.0 {
            notes.push("n_h < 4: variance remainders of the approximation are untested".into());
        }
    }
    Ok(ApproxLaw {
        kind,
        c1: a1 / (nu + 1.0),
        scale1,
        c2,
        c3,
        comp1: first,
        comp2,
        coupling: None,
        notes: std::mem::take(notes),
    })
}

/// Case-5 law with the F^χ term replaced by its two-moment scaled-F match.
pub fn satterthwaite_law(s: &Scenario) -> Result<ApproxLaw> {
    if !matches!(s, Scenario::Cca { .. }) {
        return Err(Error::InvalidScenario(
            "the Satterthwaite law applies to case 5 only".into(),
        ));
    }
    let mut law = build_law(s)?;
    let Component::FChi(fchi) = law.comp1 else {
        unreachable!("case 5 leads with an F^chi term")
    };
    let sat = fchi.satterthwaite();
    law.scale1 = sat.scale;
    law.comp1 = Component::F(sat.law);
    law.notes.push(format!(
        "F^chi term replaced by {:.6} * F({:.6}, {})",
        sat.scale,
        sat.f,
        fchi.b()
    ));
    Ok(law)
}

/// Closed-form approximate moments of `ℓ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Approximate mean and variance of `ℓ₁`.
///
/// Cases 1 and 2 use the small-noise expansions (the variance keeps `σ`
/// general). Cases 3 to 5 give the mean in closed form and the variance of
/// the approximating law itself:
/// `2[(a + ω)² + (ν-1)(a + 2ω)] / p₃(ν-1) + 2(d-1)(ν+d-1) / p₃(ν)` with
/// `p₃(x) = x²(x-2)`, `a = n_H` or `q`, `d = m` or `p`; in case 3 the first
/// part is `(λ_H+1)² · 2 n_H (n_H + ν - 1) / p₃(ν-1)` and in case 5 it is
/// the F^χ variance.
pub fn moments(s: &Scenario) -> Result<Moments> {
    s.validate()?;
    let dom = |msg: &str| Err(Error::domain("moments", msg.to_string()));
    match *s {
        Scenario::SignalKnownCov {
            m,
            n_h,
            lambda_h,
            sigma,
        }
        | Scenario::ManovaKnownCov {
            m,
            n_h,
            omega: lambda_h,
            sigma,
        } => {
            let (m, nh, s2) = (m as f64, n_h as f64, sigma * sigma);
            let signal_case1 = matches!(s, Scenario::SignalKnownCov { .. });
            let num = (m - 1.0) * (nh - 1.0) * s2 * s2;
            let (lead, denom, var_signal) = if signal_case1 {
                (
                    nh * lambda_h,
                    (lambda_h + s2) * (nh - 2.0),
                    2.0 * nh * lambda_h * lambda_h + 4.0 * nh * lambda_h * s2,
                )
            } else {
                (lambda_h, lambda_h + s2 * (nh - 2.0), 4.0 * lambda_h * s2)
            };
            let third = if num == 0.0 {
                0.0
            } else if denom > 0.0 {
                num / denom
            } else {
                return dom("third mean term needs a positive denominator (n_h > 2 in case 1)");
            };
            Ok(Moments {
                mean: lead + (m - 1.0 + nh) * s2 + third,
                variance: var_signal + 2.0 * (m - 1.0 + nh) * s2 * s2,
            })
        }
        Scenario::SignalEstCov { m, n_h, lambda_h, .. }
        | Scenario::ManovaEstCov {
            m,
            n_h,
            omega: lambda_h,
            ..
        } => {
            let nu = s.nu().expect("estimated-covariance case");
            if nu <= 3.0 {
                return dom("variance needs nu = n_e - m > 3");
            }
            let (m, nh) = (m as f64, n_h as f64);
            let signal_case3 = matches!(s, Scenario::SignalEstCov { .. });
            let omega = if signal_case3 { lambda_h * nh } else { lambda_h };
            let first_var = if signal_case3 {
                (lambda_h + 1.0).powi(2) * 2.0 * nh * (nh + nu - 1.0) / p3(nu - 1.0)
            } else {
                2.0 * ((nh + omega).powi(2) + (nu - 1.0) * (nh + 2.0 * omega)) / p3(nu - 1.0)
            };
            Ok(Moments {
                mean: (omega + nh) / (nu - 1.0) + (m - 1.0) / nu,
                variance: first_var + 2.0 * (m - 1.0) * (nu + m - 1.0) / p3(nu),
            })
        }
        Scenario::Cca { p, q, n, rho } => {
            let nu = s.nu().expect("cca");
            if nu <= 3.0 {
                return dom("variance needs nu = n - p - q > 3");
            }
            let (p, q, n) = (p as f64, q as f64, n as f64);
            let c = rho * rho / (1.0 - rho * rho);
            // c1 F^χ_{q,ν+1}(c,n) = χ²_q(Z) / χ²_{ν+1} with Z = c χ²_n
            let en = q + c * n;
            let vn = 2.0 * q + 4.0 * c * n + 2.0 * c * c * n;
            let first_var = 2.0 * en * en / p3(nu - 1.0) + vn / ((nu - 1.0) * (nu - 3.0));
            Ok(Moments {
                mean: n / (nu - 1.0) * c + (p + q - 1.0) / (nu - 1.0),
                variance: first_var + 2.0 * (p - 1.0) * (nu + p - 1.0) / p3(nu),
            })
        }
    }
}

fn p3(x: f64) -> f64 {
    x * x * (x - 2.0)
}
