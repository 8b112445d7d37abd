use crate::linalg::{sym_eigen, Matrix};
use crate::{Error, Result};

/// Exact top eigenvalue of `H(ε)` against its three-term expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub exact_l1: f64,
    pub series_l1: f64,
    pub remainder: f64,
    /// Gap between the two largest eigenvalues of `H(ε)`.
    pub gap: f64,
}

/// `H(ε) = Σ xᵢxᵢᵀ` with `xᵢ = (uᵢ, ε ξᵢ)`, where `ξᵢ` is column `i` of the
/// `(m−1)×n` matrix `xi`. The expansion is
/// `z + bᵀb ε² + z⁻¹ bᵀ(Z − bbᵀ)b ε⁴` with `z = Σuᵢ²`,
/// `b = z^{−1/2} Σ uᵢξᵢ` and `Z = Σ ξᵢξᵢᵀ`.
pub fn perturbation_check(u: &[f64], xi: &Matrix<f64>, eps: f64) -> Result<Perturbation> {
    let n = u.len();
    if xi.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "u has {n} entries, xi has {} columns",
            xi.cols()
        )));
    }
    let z: f64 = u.iter().map(|v| v * v).sum();
    if !(z > 0.0) {
        return Err(Error::domain("perturbation_check", "z = sum u_i^2 must be positive"));
    }
    let k = xi.rows();
    let m = k + 1;
    let x = Matrix::from_fn(n, m, |i, j| if j == 0 { u[i] } else { eps * xi[(j - 1, i)] });
    let values = sym_eigen(&x.cross())?.values;
    let gap = if m > 1 { values[0] - values[1] } else { f64::INFINITY };
    let limit = 10.0 * eps.powi(4);
    if gap < limit {
        return Err(Error::EigenCrossing { gap, limit });
    }

    let root_z = z.sqrt();
    let b: Vec<f64> = (0..k)
        .map(|r| (0..n).map(|i| u[i] * xi[(r, i)]).sum::<f64>() / root_z)
        .collect();
    let btb: f64 = b.iter().map(|v| v * v).sum();
    let zb: Vec<f64> = (0..k)
        .map(|r| {
            (0..n)
                .map(|i| xi[(r, i)] * (0..k).map(|s| xi[(s, i)] * b[s]).sum::<f64>())
                .sum()
        })
        .collect();
    let bzb: f64 = b.iter().zip(&zb).map(|(a, c)| a * c).sum();
    let e2 = eps * eps;
    let series_l1 = z + btb * e2 + (bzb - btb * btb) / z * e2 * e2;
    Ok(Perturbation {
        exact_l1: values[0],
        series_l1,
        remainder: values[0] - series_l1,
        gap,
    })
}
