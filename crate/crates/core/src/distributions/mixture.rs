use crate::specialfns::{ln_beta, ln_gamma_prefactor};

use super::MIXTURE_TAIL;

/// Truncated mixing distribution on the integers `k0 .. k0 + w.len()`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MixtureWeights {
    pub k0: usize,
    pub w: Vec<f64>,
}

impl MixtureWeights {
    fn point_mass() -> Self {
        MixtureWeights { k0: 0, w: vec![1.0] }
    }

    #[cfg(test)]
    pub fn mass(&self) -> f64 {
        self.w.iter().sum()
    }
}

/// Grows a window outward from `mode`, always taking the heavier neighbour,
/// until the captured mass reaches `1 - tail`. `step_up(k)` is
/// `p(k+1)/p(k)` and `step_down(k)` is `p(k-1)/p(k)`.
fn expand<U, D>(mode: usize, p_mode: f64, step_up: U, step_down: D, tail: f64) -> MixtureWeights
where
    U: Fn(usize) -> f64,
    D: Fn(usize) -> f64,
{
    let mut left: Vec<f64> = Vec::new();
    let mut right: Vec<f64> = vec![p_mode];
    let mut total = p_mode;
    let mut lo = mode;
    let mut hi = mode;
    let mut p_lo = p_mode;
    let mut p_hi = p_mode;
    while total < 1.0 - tail {
        let next_lo = if lo > 0 { p_lo * step_down(lo) } else { 0.0 };
        let next_hi = p_hi * step_up(hi);
        if next_lo <= 0.0 && next_hi <= 0.0 {
            break;
        }
        if next_lo >= next_hi {
            lo -= 1;
            p_lo = next_lo;
            left.push(next_lo);
            total += next_lo;
        } else {
            hi += 1;
            p_hi = next_hi;
            right.push(next_hi);
            total += next_hi;
        }
        if right.len() + left.len() > 50_000_000 {
            break;
        }
    }
    left.reverse();
    left.extend(right);
    MixtureWeights { k0: lo, w: left }
}

/// Poisson(`mean`) weights.
pub(crate) fn poisson_weights(mean: f64) -> MixtureWeights {
    if mean <= 0.0 {
        return MixtureWeights::point_mass();
    }
    let mode = mean.floor() as usize;
    let p_mode = ln_gamma_prefactor(mode as f64, mean).exp();
    expand(
        mode,
        p_mode,
        |k| mean / (k as f64 + 1.0),
        |k| k as f64 / mean,
        MIXTURE_TAIL,
    )
}

/// Negative-binomial weights with shape `r` and success probability
/// `1/(1+c)`: the Poisson–Gamma compound obtained when a Poisson mean is
/// itself `c/2` times a chi-square with `2r` degrees of freedom.
pub(crate) fn negbin_weights(r: f64, c: f64) -> MixtureWeights {
    if c <= 0.0 {
        return MixtureWeights::point_mass();
    }
    let theta = c / (1.0 + c);
    let mode = if r > 1.0 { ((r - 1.0) * c).floor() as usize } else { 0 };
    let p_mode = negbin_ln_pmf(mode, r, c).exp();
    expand(
        mode,
        p_mode,
        |k| (r + k as f64) / (k as f64 + 1.0) * theta,
        |k| k as f64 / ((r + k as f64 - 1.0) * theta),
        MIXTURE_TAIL,
    )
}

fn negbin_ln_pmf(k: usize, r: f64, c: f64) -> f64 {
    // Γ(r+k) / (Γ(r) k!) = 1 / ((r+k) B(r, k+1))
    let k = k as f64;
    -(r + k).ln() - ln_beta(r, k + 1.0) + k * (c / (1.0 + c)).ln() - r * c.ln_1p()
}

/// `Γ(r+k) / (Γ(r) k!) · (c/(1+c))^k · (1/(1+c))^r`.
pub fn negbin_weight(k: u64, r: f64, c: f64) -> f64 {
    if c <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    negbin_ln_pmf(k as usize, r, c).exp()
}
