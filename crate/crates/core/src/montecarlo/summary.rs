use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileEstimate {
    pub prob: f64,
    pub value: f64,
    pub se: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exceedance {
    pub threshold: f64,
    pub prob: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    /// Large-sample SE of the variance, `√((μ₄ − σ⁴)/N)`.
    pub variance_se: f64,
    pub quantiles: Vec<QuantileEstimate>,
    pub exceedances: Vec<Exceedance>,
}

/// Running central moments up to order four.
#[derive(Debug, Default, Clone, Copy)]
struct Moments4 {
    n: f64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments4 {
    fn push(&mut self, x: f64) {
        let n1 = self.n;
        self.n += 1.0;
        let n = self.n;
        let delta = x - self.mean;
        let dn = delta / n;
        let dn2 = dn * dn;
        let term1 = delta * dn * n1;
        self.mean += dn;
        self.m4 += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3;
        self.m3 += term1 * dn * (n - 2.0) - 3.0 * dn * self.m2;
        self.m2 += term1;
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Half the spread between the order statistics one binomial SD either side
/// of `Np`.
fn binomial_se(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len() as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    let last = sorted.len() - 1;
    let lo = ((n * p - sd).floor().max(0.0) as usize).min(last);
    let hi = ((n * p + sd).ceil().max(0.0) as usize).min(last);
    0.5 * (sorted[hi] - sorted[lo])
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(
            "empirical_summary",
            format!("probability {p} outside [0, 1]"),
        ))
    }
}

/// Type-7 sample quantile and its binomial standard error.
pub fn empirical_quantile(values: &[f64], p: f64) -> Result<QuantileEstimate> {
    if values.is_empty() {
        return Err(Error::domain("empirical_quantile", "empty sample"));
    }
    check_prob(p)?;
    let s = sorted(values);
    Ok(QuantileEstimate {
        prob: p,
        value: type7(&s, p),
        se: binomial_se(&s, p),
    })
}

pub fn empirical_summary(values: &[f64], probs: &[f64], thresholds: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::domain("empirical_summary", "empty sample"));
    }
    let mut acc = Moments4::default();
    values.iter().for_each(|&x| acc.push(x));
    let n = acc.n;
    let variance = if n > 1.0 { acc.m2 / (n - 1.0) } else { 0.0 };
    let mu2 = acc.m2 / n;
    let mu4 = acc.m4 / n;
    let s = sorted(values);
    let quantiles = probs
        .iter()
        .map(|&p| {
            check_prob(p)?;
            Ok(QuantileEstimate {
                prob: p,
                value: type7(&s, p),
                se: binomial_se(&s, p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let exceedances = thresholds
        .iter()
        .map(|&t| {
            let count = s.len() - s.partition_point(|&x| x <= t);
            let prob = count as f64 / n;
            Exceedance {
                threshold: t,
                prob,
                se: (prob * (1.0 - prob) / n).sqrt(),
            }
        })
        .collect();
    Ok(Summary {
        n: values.len() as u64,
        mean: acc.mean,
        variance,
        mean_se: (variance / n).sqrt(),
        variance_se: ((mu4 - mu2 * mu2).max(0.0) / n).sqrt(),
        quantiles,
        exceedances,
    })
}

/// One-sample Kolmogorov–Smirnov distance `sup |F_N − F|`.
pub fn ks_distance<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> f64 {
    let s = sorted(values);
    let n = s.len() as f64;
    s.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stream() {
        let s = empirical_summary(&[2.5; 100], &[0.1, 0.5], &[2.0, 2.5]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.quantiles[1].value, 2.5);
        assert_eq!(s.exceedances[0].prob, 1.0);
        assert_eq!(s.exceedances[1].prob, 0.0);
    }

    #[test]
    fn moments_match_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sqrt() + 1e3).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let mu2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let mu4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let s = empirical_summary(&xs, &[], &[]).unwrap();
        assert!((s.mean - mean).abs() < 1e-10);
        assert!((s.variance - mu2 * n / (n - 1.0)).abs() < 1e-10);
        assert!((s.variance_se - ((mu4 - mu2 * mu2) / n).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn type7_quantiles() {
        let xs = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(empirical_quantile(&xs, 0.0).unwrap().value, 1.0);
        assert_eq!(empirical_quantile(&xs, 1.0).unwrap().value, 5.0);
        assert_eq!(empirical_quantile(&xs, 0.5).unwrap().value, 3.0);
        assert!((empirical_quantile(&xs, 0.3).unwrap().value - 2.2).abs() < 1e-15);
        assert!(empirical_quantile(&[], 0.5).is_err());
        assert!(empirical_quantile(&xs, 1.5).is_err());
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_distance(&xs, |x| x) - 0.005).abs() < 1e-12);
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        let ints: Vec<f64> = (0..100).map(f64::from).collect();
        let shifted: Vec<f64> = ints.iter().map(|x| x + 10.0).collect();
        assert!((ks_two_sample(&ints, &shifted) - 0.1).abs() < 1e-12);
    }
}
