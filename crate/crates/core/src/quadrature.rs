//! Globally adaptive Gauss–Kronrod (7/15) integration on finite intervals.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn abs(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol: 0.0,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Integral> {
    integrate_breaks(f, &[a, b], opts)
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, starting from the
/// partition given by the (sorted) break points. Useful for placing a split
/// at a density mode or a known kink.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], opts: &QuadOptions) -> Result<Integral> {
    if breaks.len() < 2 {
        return Err(Error::domain("integrate", "need at least two break points"));
    }
    if breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("integrate", "break points must be finite"));
    }
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let mut segs: Vec<Segment> = pts.windows(2).map(|w| kronrod(&mut f, w[0], w[1])).collect();
    let mut evaluations = 15 * segs.len();
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if !value.is_finite() {
            return Err(Error::convergence("integrate", "integrand produced a non-finite value"));
        }
        if error <= tol {
            return Ok(Integral {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let (idx, worst) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, s)| (i, *s))
            .unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if segs.len() >= opts.max_intervals || mid <= worst.a || mid >= worst.b {
            return Err(Error::convergence(
                "integrate",
                format!(
                    "estimated error {error:e} above tolerance {tol:e} after {} intervals",
                    segs.len()
                ),
            ));
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        segs[idx] = left;
        segs.push(right);
    }
}
