//! Univariate laws: central and noncentral chi-square and F, the
//! chi-square-weighted noncentral F, and their Poisson / negative-binomial
//! mixing weights.

mod chisq;
mod fchi;
mod fdist;
mod mixture;

pub use chisq::ChiSq;
pub use fchi::{FChiMethod, FChiParams, Satterthwaite};
pub use fdist::FDist;
pub use mixture::negbin_weight;
pub(crate) use mixture::{negbin_weights, poisson_weights, MixtureWeights};

use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Tail mass left out when truncating Poisson or negative-binomial mixtures.
/// Component CDFs are bounded by one, so this bounds the truncation error.
pub const MIXTURE_TAIL: f64 = 1e-14;

/// Target `|CDF(q) - p|` for distribution quantiles.
pub const QUANTILE_TOL: f64 = 1e-10;

pub fn chisq_cdf(d: &ChiSq, x: f64) -> Result<f64> {
    d.cdf(x)
}

pub fn f_cdf(d: &FDist, x: f64) -> Result<f64> {
    d.cdf(x)
}

pub fn fchi_cdf(p: &FChiParams, u: f64, method: FChiMethod) -> Result<f64> {
    p.cdf_with(u, method)
}

/// One building block of an approximate law: a nonnegative univariate
/// variate with CDF, density and an exact sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Component {
    Chi(ChiSq),
    F(FDist),
    FChi(FChiParams),
}

impl Component {
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            Component::Chi(d) => d.cdf_unchecked(x),
            Component::F(d) => d.cdf_unchecked(x),
            Component::FChi(d) => d.mixture_cdf(x),
        }
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match self {
            Component::Chi(d) => d.sf_unchecked(x),
            Component::F(d) => d.sf_unchecked(x),
            Component::FChi(d) => d.mixture_sf(x),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Component::Chi(d) => d.pdf(x),
            Component::F(d) => d.pdf(x),
            Component::FChi(d) => d.pdf(x),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Component::Chi(d) => d.mean(),
            Component::F(d) => d.mean(),
            Component::FChi(d) => d.mean(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Component::Chi(d) => d.variance(),
            Component::F(d) => d.variance(),
            Component::FChi(d) => d.variance(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Component::Chi(d) => d.sample(rng),
            Component::F(d) => d.sample(rng),
            Component::FChi(d) => d.sample(rng),
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        match self {
            Component::Chi(d) => d.quantile(p),
            Component::F(d) => d.quantile(p),
            Component::FChi(d) => d.quantile(p),
        }
    }

    /// Same law with mixing weights computed once, for repeated evaluation
    /// inside integrands.
    pub(crate) fn prepare(&self) -> Prepared {
        match self {
            Component::Chi(d) => Prepared::Gamma {
                dof: d.dof(),
                w: d.weights(),
            },
            Component::F(d) => Prepared::Beta {
                a: d.dof1(),
                b: d.dof2(),
                w: d.weights(),
            },
            Component::FChi(d) => Prepared::Beta {
                a: d.a(),
                b: d.b(),
                w: d.weights(),
            },
        }
    }

    /// Numerator degrees of freedom; below 2 the density is unbounded at 0.
    pub(crate) fn leading_dof(&self) -> f64 {
        match self {
            Component::Chi(d) => d.dof(),
            Component::F(d) => d.dof1(),
            Component::FChi(d) => d.a(),
        }
    }

    /// A point beyond which the remaining mass is below `tail`.
    pub(crate) fn upper_cut(&self, tail: f64) -> f64 {
        let mean = self.mean();
        let sd = self.variance().sqrt();
        let mut x = if mean.is_finite() && sd.is_finite() {
            mean + 8.0 * sd + 1.0
        } else {
            self.quantile(0.999).unwrap_or(100.0) * 4.0
        };
        for _ in 0..200 {
            if self.sf(x) < tail {
                return x;
            }
            x *= 1.5;
        }
        x
    }
}

/// Chi-square or F-ratio mixture with precomputed weights.
#[derive(Debug, Clone)]
pub(crate) enum Prepared {
    Gamma { dof: f64, w: MixtureWeights },
    Beta { a: f64, b: f64, w: MixtureWeights },
}

impl Prepared {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Prepared::Gamma { dof, w } => chisq::gamma_mixture_cdf(*dof, x, w),
            Prepared::Beta { a, b, w } => fdist::beta_mixture_cdf(*a, *b, x, w),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Prepared::Gamma { dof, w } => chisq::gamma_mixture_pdf(*dof, x, w),
            Prepared::Beta { a, b, w } => fdist::beta_mixture_pdf(*a, *b, x, w),
        }
    }
}

/// Inverts a continuous nondecreasing CDF on `[lower, ∞)`.
///
/// The bracket grows geometrically from `hint` until it straddles `p`.
/// Inside it, Newton steps are taken when a density is supplied and land
/// inside the bracket; otherwise Illinois-modified false position, with
/// bisection whenever the interpolated point hugs an end of the bracket.
pub(crate) fn invert_cdf<C, D>(cdf: C, pdf: Option<D>, p: f64, lower: f64, hint: f64, tol: f64) -> Result<f64>
where
    C: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("quantile", format!("probability {p} outside (0, 1)")));
    }
    let mut lo = lower;
    let mut g_lo = cdf(lo) - p;
    let mut hi = hint.max(lower + 1e-12);
    let mut g_hi = cdf(hi) - p;
    let mut grow = 0;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi = lower + 2.0 * (hi - lower) + 1e-12;
        g_hi = cdf(hi) - p;
        grow += 1;
        if grow > 300 || !hi.is_finite() {
            return Err(Error::Bracketing(format!("no upper bracket for p = {p}")));
        }
    }
    if g_hi.abs() <= tol {
        return Ok(hi);
    }
    let mut x = match &pdf {
        Some(_) => 0.5 * (lo + hi),
        None => false_position(lo, g_lo, hi, g_hi),
    };
    // +1 when the last update moved `lo`, -1 for `hi`.
    let mut last_side = 0i8;
    for _ in 0..400 {
        let g = cdf(x) - p;
        if g.abs() <= tol {
            return Ok(x);
        }
        if g < 0.0 {
            lo = x;
            g_lo = g;
            if last_side == 1 {
                g_hi *= 0.5;
            }
            last_side = 1;
        } else {
            hi = x;
            g_hi = g;
            if last_side == -1 {
                g_lo *= 0.5;
            }
            last_side = -1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1e-300) {
            return Ok(0.5 * (lo + hi));
        }
        let step = match &pdf {
            Some(d) => {
                let dens = d(x);
                (dens > 0.0 && dens.is_finite()).then(|| x - g / dens)
            }
            None => Some(false_position(lo, g_lo, hi, g_hi)),
        };
        let width = hi - lo;
        x = match step {
            Some(next) if next > lo + 1e-3 * width && next < hi - 1e-3 * width => next,
            _ => 0.5 * (lo + hi),
        };
    }
    Err(Error::convergence("quantile", format!("p = {p}, bracket [{lo}, {hi}]")))
}

fn false_position(lo: f64, g_lo: f64, hi: f64, g_hi: f64) -> f64 {
    let denom = g_hi - g_lo;
    if denom > 0.0 && denom.is_finite() {
        lo - g_lo * (hi - lo) / denom
    } else {
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_without_density() {
        // Exponential CDF, false position only.
        let cdf = |x: f64| 1.0 - (-x).exp();
        for &p in &[1e-6, 0.3, 0.999_999] {
            let q = invert_cdf(cdf, None::<fn(f64) -> f64>, p, 0.0, 1.0, 1e-13).unwrap();
            assert!((cdf(q) - p).abs() <= 1e-13, "{p}: {q}");
        }
        assert!(invert_cdf(cdf, None::<fn(f64) -> f64>, 1.0, 0.0, 1.0, 1e-9).is_err());
        assert!(invert_cdf(|_| 0.0, None::<fn(f64) -> f64>, 0.5, 0.0, 1.0, 1e-9).is_err());
    }
}
