use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The five classical eigenvalue problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Signal detection, known covariance.
    SignalKnownCov,
    /// MANOVA, known covariance.
    ManovaKnownCov,
    /// Signal detection, covariance estimated by `E`.
    SignalEstCov,
    /// MANOVA / multivariate regression, covariance estimated by `E`.
    ManovaEstCov,
    /// Canonical correlation analysis.
    Cca,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::SignalKnownCov => 1,
            Case::ManovaKnownCov => 2,
            Case::SignalEstCov => 3,
            Case::ManovaEstCov => 4,
            Case::Cca => 5,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        Ok(match k {
            1 => Case::SignalKnownCov,
            2 => Case::ManovaKnownCov,
            3 => Case::SignalEstCov,
            4 => Case::ManovaEstCov,
            5 => Case::Cca,
            _ => return Err(Error::InvalidScenario(format!("case must be 1..=5, got {k}"))),
        })
    }
}

/// One concrete testing problem under a rank-one alternative.
///
/// `m` is the dimension, `n_h` / `n_e` the hypothesis and error degrees of
/// freedom. The signal is `lambda_h` (covariance spike, per observation) or
/// `omega` (mean shift noncentrality), or `rho` for CCA with `p <= q` the two
/// group sizes and `n` the degrees of freedom of the sample covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Scenario {
    SignalKnownCov {
        m: u32,
        n_h: u32,
        lambda_h: f64,
        sigma: f64,
    },
    ManovaKnownCov {
        m: u32,
        n_h: u32,
        omega: f64,
        sigma: f64,
    },
    SignalEstCov {
        m: u32,
        n_h: u32,
        n_e: u32,
        lambda_h: f64,
    },
    ManovaEstCov {
        m: u32,
        n_h: u32,
        n_e: u32,
        omega: f64,
    },
    Cca {
        p: u32,
        q: u32,
        n: u32,
        rho: f64,
    },
}

impl Scenario {
    pub fn case1(m: u32, n_h: u32, lambda_h: f64, sigma: f64) -> Result<Self> {
        Scenario::SignalKnownCov {
            m,
            n_h,
            lambda_h,
            sigma,
        }
        .validated()
    }

    pub fn case2(m: u32, n_h: u32, omega: f64, sigma: f64) -> Result<Self> {
        Scenario::ManovaKnownCov { m, n_h, omega, sigma }.validated()
    }

    pub fn case3(m: u32, n_h: u32, n_e: u32, lambda_h: f64) -> Result<Self> {
        Scenario::SignalEstCov { m, n_h, n_e, lambda_h }.validated()
    }

    pub fn case4(m: u32, n_h: u32, n_e: u32, omega: f64) -> Result<Self> {
        Scenario::ManovaEstCov { m, n_h, n_e, omega }.validated()
    }

    pub fn case5(p: u32, q: u32, n: u32, rho: f64) -> Result<Self> {
        Scenario::Cca { p, q, n, rho }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn case(&self) -> Case {
        match self {
            Scenario::SignalKnownCov { .. } => Case::SignalKnownCov,
            Scenario::ManovaKnownCov { .. } => Case::ManovaKnownCov,
            Scenario::SignalEstCov { .. } => Case::SignalEstCov,
            Scenario::ManovaEstCov { .. } => Case::ManovaEstCov,
            Scenario::Cca { .. } => Case::Cca,
        }
    }

    /// Checks the preconditions of the case; the error names the first one
    /// that fails.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScenario(msg));
        let nonneg = |name: &str, v: f64| -> Result<()> {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidScenario(format!(
                    "{name} must be finite and >= 0, got {v}"
                )))
            }
        };
        let positive_int = |name: &str, v: u32| -> Result<()> {
            if v >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidScenario(format!("{name} must be >= 1")))
            }
        };
        match *self {
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
                positive_int("m", m)?;
                positive_int("n_h", n_h)?;
                nonneg(
                    if self.case() == Case::SignalKnownCov {
                        "lambda_h"
                    } else {
                        "omega"
                    },
                    lambda_h,
                )?;
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return fail(format!("sigma must be positive, got {sigma}"));
                }
            }
            Scenario::SignalEstCov { m, n_h, n_e, lambda_h }
            | Scenario::ManovaEstCov {
                m,
                n_h,
                n_e,
                omega: lambda_h,
            } => {
                positive_int("m", m)?;
                positive_int("n_h", n_h)?;
                nonneg(
                    if self.case() == Case::SignalEstCov {
                        "lambda_h"
                    } else {
                        "omega"
                    },
                    lambda_h,
                )?;
                if n_e as i64 - m as i64 <= 1 {
                    return fail(format!("nu = n_e - m must be > 1 (n_e = {n_e}, m = {m})"));
                }
            }
            Scenario::Cca { p, q, n, rho } => {
                positive_int("p", p)?;
                if q < p {
                    return fail(format!("p <= q required (p = {p}, q = {q})"));
                }
                if n as i64 - p as i64 - q as i64 <= 1 {
                    return fail(format!("nu = n - p - q must be > 1 (n = {n}, p = {p}, q = {q})"));
                }
                if !(0.0..1.0).contains(&rho) {
                    return fail(format!("rho must lie in [0, 1), got {rho}"));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the largest-root problem (`p` for CCA).
    pub fn dim(&self) -> u32 {
        match *self {
            Scenario::SignalKnownCov { m, .. }
            | Scenario::ManovaKnownCov { m, .. }
            | Scenario::SignalEstCov { m, .. }
            | Scenario::ManovaEstCov { m, .. } => m,
            Scenario::Cca { p, .. } => p,
        }
    }

    /// `ν = n_E - m` (cases 3, 4) or `n - p - q` (case 5).
    pub fn nu(&self) -> Option<f64> {
        match *self {
            Scenario::SignalEstCov { m, n_e, .. } | Scenario::ManovaEstCov { m, n_e, .. } => {
                Some(n_e as f64 - m as f64)
            }
            Scenario::Cca { p, q, n, .. } => Some(n as f64 - p as f64 - q as f64),
            _ => None,
        }
    }

    /// Signal strength: `lambda_h`, `omega` or `rho`.
    pub fn signal(&self) -> f64 {
        match *self {
            Scenario::SignalKnownCov { lambda_h, .. } | Scenario::SignalEstCov { lambda_h, .. } => lambda_h,
            Scenario::ManovaKnownCov { omega, .. } | Scenario::ManovaEstCov { omega, .. } => omega,
            Scenario::Cca { rho, .. } => rho,
        }
    }

    pub fn signal_name(&self) -> &'static str {
        match self.case() {
            Case::SignalKnownCov | Case::SignalEstCov => "lambda_h",
            Case::ManovaKnownCov | Case::ManovaEstCov => "omega",
            Case::Cca => "rho",
        }
    }

    pub fn with_signal(&self, value: f64) -> Result<Self> {
        let mut s = *self;
        match &mut s {
            Scenario::SignalKnownCov { lambda_h, .. } | Scenario::SignalEstCov { lambda_h, .. } => *lambda_h = value,
            Scenario::ManovaKnownCov { omega, .. } | Scenario::ManovaEstCov { omega, .. } => *omega = value,
            Scenario::Cca { rho, .. } => *rho = value,
        }
        s.validated()
    }

    /// The same problem with the signal removed.
    pub fn null(&self) -> Self {
        self.with_signal(0.0).unwrap_or(*self)
    }

    pub fn is_null(&self) -> bool {
        self.signal() == 0.0
    }
}
