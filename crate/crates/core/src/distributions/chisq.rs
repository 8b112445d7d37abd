use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Poisson, StandardNormal};
use serde::Serialize;

use super::{invert_cdf, poisson_weights, MixtureWeights, QUANTILE_TOL};
use crate::specialfns::{gamma_ladder_sum, gamma_ladder_upper_sum, gamma_p, gamma_q, ln_gamma_pos};
use crate::{Error, Result};

/// Chi-square law with `dof` degrees of freedom and noncentrality `δ`
/// (`δ = 0` is the central law).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSq {
    dof: f64,
    noncentrality: f64,
}

impl ChiSq {
    pub fn new(dof: f64, noncentrality: f64) -> Result<Self> {
        if !(dof > 0.0 && dof.is_finite()) {
            return Err(Error::domain(
                "ChiSq",
                format!("degrees of freedom must be positive, got {dof}"),
            ));
        }
        if !(noncentrality >= 0.0 && noncentrality.is_finite()) {
            return Err(Error::domain(
                "ChiSq",
                format!("noncentrality must be >= 0, got {noncentrality}"),
            ));
        }
        Ok(ChiSq { dof, noncentrality })
    }

    pub fn central(dof: f64) -> Result<Self> {
        Self::new(dof, 0.0)
    }

    pub fn dof(&self) -> f64 {
        self.dof
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::domain("chisq_cdf", "x is NaN"));
        }
        if x < 0.0 {
            return Err(Error::domain("chisq_cdf", format!("x must be >= 0, got {x}")));
        }
        Ok(self.cdf_unchecked(x))
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("chisq_sf", format!("x must be >= 0, got {x}")));
        }
        Ok(self.sf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        if self.noncentrality == 0.0 {
            return gamma_p(0.5 * self.dof, 0.5 * x);
        }
        gamma_mixture_cdf(self.dof, x, &self.weights())
    }

    pub(crate) fn weights(&self) -> MixtureWeights {
        poisson_weights(0.5 * self.noncentrality)
    }

    pub(crate) fn sf_unchecked(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x == f64::INFINITY {
            return 0.0;
        }
        if self.noncentrality == 0.0 {
            return gamma_q(0.5 * self.dof, 0.5 * x);
        }
        gamma_mixture_sf(self.dof, x, &self.weights())
    }

    /// Density; zero for `x < 0` and `+∞` at the origin when `dof < 2`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_nan() {
            return 0.0;
        }
        if self.noncentrality == 0.0 {
            return central_pdf(self.dof, x);
        }
        gamma_mixture_pdf(self.dof, x, &self.weights())
    }

    pub fn mean(&self) -> f64 {
        self.dof + self.noncentrality
    }

    pub fn variance(&self) -> f64 {
        2.0 * (self.dof + 2.0 * self.noncentrality)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        invert_cdf(
            |x| self.cdf_unchecked(x),
            Some(|x| self.pdf(x)),
            p,
            0.0,
            self.mean().max(1.0),
            QUANTILE_TOL,
        )
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.noncentrality == 0.0 {
            return sample_central(self.dof, rng);
        }
        if self.dof >= 1.0 {
            let z: f64 = rng.sample(StandardNormal);
            let shifted = z + self.noncentrality.sqrt();
            let rest = if self.dof > 1.0 {
                sample_central(self.dof - 1.0, rng)
            } else {
                0.0
            };
            shifted * shifted + rest
        } else {
            let k: f64 = Poisson::new(0.5 * self.noncentrality)
                .expect("positive Poisson mean")
                .sample(rng);
            sample_central(self.dof + 2.0 * k, rng)
        }
    }
}

/// CDF at `x` of `χ²_{dof + 2K}` with `K` distributed by `w`.
pub(crate) fn gamma_mixture_cdf(dof: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    gamma_ladder_sum(0.5 * dof, 0.5 * x, w.k0, &w.w).clamp(0.0, 1.0)
}

pub(crate) fn gamma_mixture_sf(dof: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    gamma_ladder_upper_sum(0.5 * dof, 0.5 * x, w.k0, &w.w).clamp(0.0, 1.0)
}

pub(crate) fn gamma_mixture_pdf(dof: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x < 0.0 || x.is_nan() {
        return 0.0;
    }
    if x == 0.0 {
        return if w.k0 == 0 { w.w[0] * central_pdf(dof, 0.0) } else { 0.0 };
    }
    let mut dof = dof + 2.0 * w.k0 as f64;
    let mut ln_f = central_ln_pdf(dof, x);
    let mut acc = 0.0;
    for wi in &w.w {
        acc += wi * ln_f.exp();
        ln_f += x.ln() - dof.ln();
        dof += 2.0;
    }
    acc
}

pub(crate) fn sample_central<R: Rng + ?Sized>(dof: f64, rng: &mut R) -> f64 {
    ChiSquared::new(dof).expect("positive degrees of freedom").sample(rng)
}

fn central_ln_pdf(dof: f64, x: f64) -> f64 {
    let h = 0.5 * dof;
    (h - 1.0) * x.ln() - 0.5 * x - h * std::f64::consts::LN_2 - ln_gamma_pos(h)
}

fn central_pdf(dof: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if dof < 2.0 {
            f64::INFINITY
        } else if dof == 2.0 {
            0.5
        } else {
            0.0
        };
    }
    central_ln_pdf(dof, x).exp()
}
