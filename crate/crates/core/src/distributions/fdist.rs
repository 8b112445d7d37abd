use rand::Rng;
use serde::Serialize;

use super::chisq::sample_central;
use super::{invert_cdf, poisson_weights, ChiSq, MixtureWeights, QUANTILE_TOL};
use crate::specialfns::{beta_ladder_sum, beta_ladder_upper_sum, inc_beta, inc_beta_upper, ln_beta};
use crate::{Error, Result};

/// F law with `dof1` numerator and `dof2` denominator degrees of freedom
/// and numerator noncentrality `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDist {
    dof1: f64,
    dof2: f64,
    noncentrality: f64,
}

impl FDist {
    pub fn new(dof1: f64, dof2: f64, noncentrality: f64) -> Result<Self> {
        for (name, v) in [("dof1", dof1), ("dof2", dof2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("FDist", format!("{name} must be positive, got {v}")));
            }
        }
        if !(noncentrality >= 0.0 && noncentrality.is_finite()) {
            return Err(Error::domain(
                "FDist",
                format!("noncentrality must be >= 0, got {noncentrality}"),
            ));
        }
        Ok(FDist {
            dof1,
            dof2,
            noncentrality,
        })
    }

    pub fn central(dof1: f64, dof2: f64) -> Result<Self> {
        Self::new(dof1, dof2, 0.0)
    }

    pub fn dof1(&self) -> f64 {
        self.dof1
    }

    pub fn dof2(&self) -> f64 {
        self.dof2
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("f_cdf", format!("x must be >= 0, got {x}")));
        }
        Ok(self.cdf_unchecked(x))
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("f_sf", format!("x must be >= 0, got {x}")));
        }
        Ok(self.sf_unchecked(x))
    }

    pub(crate) fn weights(&self) -> MixtureWeights {
        poisson_weights(0.5 * self.noncentrality)
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        beta_mixture_cdf(self.dof1, self.dof2, x, &self.weights())
    }

    pub(crate) fn sf_unchecked(&self, x: f64) -> f64 {
        beta_mixture_sf(self.dof1, self.dof2, x, &self.weights())
    }

    /// Density; zero for `x < 0`.
    pub fn pdf(&self, x: f64) -> f64 {
        beta_mixture_pdf(self.dof1, self.dof2, x, &self.weights())
    }

    /// Infinite when `dof2 <= 2`.
    pub fn mean(&self) -> f64 {
        let (a, b) = (self.dof1, self.dof2);
        if b <= 2.0 {
            return f64::INFINITY;
        }
        b * (a + self.noncentrality) / (a * (b - 2.0))
    }

    /// Infinite when `dof2 <= 4`.
    pub fn variance(&self) -> f64 {
        let (a, b, w) = (self.dof1, self.dof2, self.noncentrality);
        if b <= 4.0 {
            return f64::INFINITY;
        }
        let num_m1 = (a + w) / a;
        let num_m2 = (2.0 * (a + 2.0 * w) + (a + w) * (a + w)) / (a * a);
        let inv_m1 = b / (b - 2.0);
        let inv_m2 = b * b / ((b - 2.0) * (b - 4.0));
        num_m2 * inv_m2 - (num_m1 * inv_m1).powi(2)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        let hint = if self.dof2 > 2.0 {
            self.mean()
        } else {
            1.0 + self.noncentrality / self.dof1
        };
        invert_cdf(
            |x| self.cdf_unchecked(x),
            Some(|x| self.pdf(x)),
            p,
            0.0,
            hint,
            QUANTILE_TOL,
        )
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let num = ChiSq::new(self.dof1, self.noncentrality)
            .expect("validated")
            .sample(rng);
        let den = sample_central(self.dof2, rng);
        (num / self.dof1) / (den / self.dof2)
    }
}

/// `a·x / (a·x + b)` and its complement, computed without cancellation.
fn to_beta(a: f64, b: f64, x: f64) -> (f64, f64) {
    let ax = a * x;
    (ax / (ax + b), b / (ax + b))
}

/// `Σ_k w_k I_y(a/2 + k, b/2)` with `y = a·x/(a·x + b)`: the CDF at `x` of
/// `(χ²_{a+2K}/a) / (χ²_b/b)` with `K` distributed by `w`.
pub(crate) fn beta_mixture_cdf(a: f64, b: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let (y, y_c) = to_beta(a, b, x);
    if w.w.len() == 1 && w.k0 == 0 {
        return if y < 0.5 {
            inc_beta(0.5 * a, 0.5 * b, y)
        } else {
            inc_beta_upper(0.5 * b, 0.5 * a, y_c)
        };
    }
    beta_ladder_sum(0.5 * a, 0.5 * b, y, w.k0, &w.w).clamp(0.0, 1.0)
}

pub(crate) fn beta_mixture_sf(a: f64, b: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    let (y, y_c) = to_beta(a, b, x);
    if w.w.len() == 1 && w.k0 == 0 {
        return if y < 0.5 {
            inc_beta_upper(0.5 * a, 0.5 * b, y)
        } else {
            inc_beta(0.5 * b, 0.5 * a, y_c)
        };
    }
    beta_ladder_upper_sum(0.5 * a, 0.5 * b, y, w.k0, &w.w).clamp(0.0, 1.0)
}

pub(crate) fn beta_mixture_pdf(a: f64, b: f64, x: f64, w: &MixtureWeights) -> f64 {
    if x < 0.0 || x.is_nan() {
        return 0.0;
    }
    let hb = 0.5 * b;
    if x == 0.0 {
        return if w.k0 != 0 || a > 2.0 {
            0.0
        } else if a < 2.0 {
            f64::INFINITY
        } else {
            w.w[0]
        };
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    let (y, y_c) = to_beta(a, b, x);
    let jac = a * b / ((a * x + b) * (a * x + b));
    let ln_y = y.ln();
    let ln_yc = y_c.ln();
    let mut s = 0.5 * a + w.k0 as f64;
    let mut ln_f = (s - 1.0) * ln_y + (hb - 1.0) * ln_yc - ln_beta(s, hb);
    let mut acc = 0.0;
    for wi in &w.w {
        acc += wi * ln_f.exp();
        // betapdf(y; s+1, β) / betapdf(y; s, β) = y (s + β) / s
        ln_f += ln_y + (s + hb).ln() - s.ln();
        s += 1.0;
    }
    acc * jac
}
