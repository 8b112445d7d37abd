use rand::Rng;
use serde::Serialize;

use super::chisq::sample_central;
use super::fdist::{beta_mixture_cdf, beta_mixture_pdf, beta_mixture_sf};
use super::{invert_cdf, negbin_weights, ChiSq, FDist, MixtureWeights, QUANTILE_TOL};
use crate::quadrature::{integrate_breaks, QuadOptions};
use crate::specialfns::{gamma_q, ln_gamma_pos};
use crate::{Error, Result};

/// How to evaluate the F^χ CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FChiMethod {
    /// Quadrature of the noncentral F CDF against the chi-square density of
    /// the random noncentrality.
    Integral,
    /// Negative-binomial mixture of regularized incomplete betas.
    #[default]
    Mixture,
}

/// `F^χ_{a,b}(c, n)`: a noncentral `F_{a,b}` whose noncentrality is itself
/// `c·χ²_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FChiParams {
    a: f64,
    b: f64,
    c: f64,
    n: f64,
}

/// Matching scaled F: `U ≈ scale · F_{f, b}` with
/// `g = (c n (c+2) + a) / (c n + a)` and `f = (c n + a) / g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Satterthwaite {
    pub g: f64,
    pub f: f64,
    pub scale: f64,
    pub law: FDist,
}

impl FChiParams {
    pub fn new(a: f64, b: f64, c: f64, n: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("n", n)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("FChiParams", format!("{name} must be positive, got {v}")));
            }
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::domain("FChiParams", format!("c must be >= 0, got {c}")));
        }
        Ok(FChiParams { a, b, c, n })
    }

    /// `c = ρ² / (1 - ρ²)`.
    pub fn from_correlation(a: f64, b: f64, rho: f64, n: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho.abs()) {
            return Err(Error::domain("FChiParams", format!("|rho| must be < 1, got {rho}")));
        }
        let r2 = rho * rho;
        Self::new(a, b, r2 / (1.0 - r2), n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn cdf(&self, u: f64) -> Result<f64> {
        self.cdf_with(u, FChiMethod::Mixture)
    }

    pub fn cdf_with(&self, u: f64, method: FChiMethod) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::domain("fchi_cdf", format!("u must be >= 0, got {u}")));
        }
        match method {
            FChiMethod::Mixture => Ok(self.mixture_cdf(u)),
            FChiMethod::Integral => self.integral_cdf(u),
        }
    }

    pub fn sf(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::domain("fchi_sf", format!("u must be >= 0, got {u}")));
        }
        Ok(self.mixture_sf(u))
    }

    pub(crate) fn weights(&self) -> MixtureWeights {
        negbin_weights(0.5 * self.n, self.c)
    }

    pub(crate) fn mixture_cdf(&self, u: f64) -> f64 {
        beta_mixture_cdf(self.a, self.b, u, &self.weights())
    }

    pub(crate) fn mixture_sf(&self, u: f64) -> f64 {
        beta_mixture_sf(self.a, self.b, u, &self.weights())
    }

    fn integral_cdf(&self, u: f64) -> Result<f64> {
        if self.c == 0.0 {
            return Ok(FDist::central(self.a, self.b)?.cdf_unchecked(u));
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let n = self.n;
        let lg = ln_gamma_pos(0.5 * n);
        let ln_chi_pdf = move |t: f64| (0.5 * n - 1.0) * t.ln() - 0.5 * t - 0.5 * n * std::f64::consts::LN_2 - lg;
        // Integrate over s with t = s², which keeps the integrand bounded
        // at the origin for any n.
        let mut t_max = n + 10.0 * (2.0 * n).sqrt() + 50.0;
        while gamma_q(0.5 * n, 0.5 * t_max) > 1e-15 {
            t_max *= 1.5;
        }
        let s_max = t_max.sqrt();
        let centre = n.sqrt();
        // sd of √χ²_n is close to 1/√2
        let sd_s = std::f64::consts::FRAC_1_SQRT_2;
        let mut breaks = vec![0.0, s_max];
        for k in [-4.0, -2.0, 0.0, 2.0, 4.0] {
            let s = centre + k * sd_s;
            if s > 0.0 && s < s_max {
                breaks.push(s);
            }
        }
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let (a, b, c) = (self.a, self.b, self.c);
        let integrand = |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let t = s * s;
            let dens = 2.0 * s * ln_chi_pdf(t).exp();
            if dens == 0.0 {
                return 0.0;
            }
            let f = FDist::new(a, b, c * t).expect("validated");
            dens * f.cdf_unchecked(u)
        };
        let r = integrate_breaks(integrand, &breaks, &QuadOptions::abs(1e-11))?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// Density; zero for `u < 0`.
    pub fn pdf(&self, u: f64) -> f64 {
        beta_mixture_pdf(self.a, self.b, u, &self.weights())
    }

    /// Infinite when `b <= 2`.
    pub fn mean(&self) -> f64 {
        if self.b <= 2.0 {
            return f64::INFINITY;
        }
        (self.a + self.c * self.n) / self.a * self.b / (self.b - 2.0)
    }

    /// Infinite when `b <= 4`.
    pub fn variance(&self) -> f64 {
        let (a, b, c, n) = (self.a, self.b, self.c, self.n);
        if b <= 4.0 {
            return f64::INFINITY;
        }
        // Numerator χ²_a(Z) with Z = c χ²_n: mean a + cn,
        // variance 2a + 4cn + 2c²n.
        let m1 = a + c * n;
        let m2 = 2.0 * a + 4.0 * c * n + 2.0 * c * c * n + m1 * m1;
        let inv_m1 = b / (b - 2.0);
        let inv_m2 = b * b / ((b - 2.0) * (b - 4.0));
        (m2 * inv_m2 - (m1 * inv_m1).powi(2)) / (a * a)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        let w = self.weights();
        let hint = if self.b > 2.0 {
            self.mean()
        } else {
            1.0 + self.c * self.n / self.a
        };
        invert_cdf(
            |x| beta_mixture_cdf(self.a, self.b, x, &w),
            Some(|x| beta_mixture_pdf(self.a, self.b, x, &w)),
            p,
            0.0,
            hint,
            QUANTILE_TOL,
        )
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z = self.c * sample_central(self.n, rng);
        let num = ChiSq::new(self.a, z).expect("validated").sample(rng);
        let den = sample_central(self.b, rng);
        (num / self.a) / (den / self.b)
    }

    pub fn satterthwaite(&self) -> Satterthwaite {
        let (a, c, n) = (self.a, self.c, self.n);
        let cn = c * n;
        let g = (cn * (c + 2.0) + a) / (cn + a);
        let f = (cn + a) / g;
        Satterthwaite {
            g,
            f,
            scale: g * f / a,
            law: FDist::central(f, self.b).expect("positive degrees of freedom"),
        }
    }
}

impl Satterthwaite {
    pub fn cdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        self.law.cdf_unchecked(u / self.scale)
    }

    pub fn sf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 1.0;
        }
        self.law.sf_unchecked(u / self.scale)
    }

    pub fn pdf(&self, u: f64) -> f64 {
        self.law.pdf(u / self.scale) / self.scale
    }
}
