use crate::linalg::{cholesky, inv_sqrt, solve_lower, sym_eigen, Matrix, SymMatrix};
use crate::royapprox::Scenario;
use crate::{Error, Result};

/// Relative size of the second eigenvalue below which Ω counts as rank one.
pub const RANK_ONE_TOL: f64 = 1e-8;

/// One-way MANOVA: `n_k` observations `y = μ_k + ξ`, `ξ ~ N(0, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDesign {
    group_sizes: Vec<u32>,
    group_means: Vec<Vec<f64>>,
    covariance: SymMatrix<f64>,
}

impl GroupDesign {
    pub fn new(group_sizes: Vec<u32>, group_means: Vec<Vec<f64>>, covariance: SymMatrix<f64>) -> Result<Self> {
        if group_sizes.len() < 2 {
            return Err(Error::InvalidScenario("need at least two groups".into()));
        }
        if group_sizes.len() != group_means.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} group sizes but {} mean vectors",
                group_sizes.len(),
                group_means.len()
            )));
        }
        if group_sizes.contains(&0) {
            return Err(Error::InvalidScenario("every group needs n_k >= 1".into()));
        }
        let m = covariance.dim();
        if let Some(bad) = group_means.iter().find(|mu| mu.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "mean of length {} vs covariance {m}x{m}",
                bad.len()
            )));
        }
        cholesky(&covariance)?;
        Ok(GroupDesign {
            group_sizes,
            group_means,
            covariance,
        })
    }

    pub fn dim(&self) -> usize {
        self.covariance.dim()
    }

    pub fn group_sizes(&self) -> &[u32] {
        &self.group_sizes
    }

    pub fn group_means(&self) -> &[Vec<f64>] {
        &self.group_means
    }

    pub fn covariance(&self) -> &SymMatrix<f64> {
        &self.covariance
    }

    /// Σ n_k (μ_k − μ̄)(μ_k − μ̄)ᵀ with the size-weighted grand mean μ̄.
    pub fn between_groups(&self) -> SymMatrix<f64> {
        let m = self.dim();
        let total: f64 = self.group_sizes.iter().map(|&n| n as f64).sum();
        let grand: Vec<f64> = (0..m)
            .map(|j| {
                self.group_means
                    .iter()
                    .zip(&self.group_sizes)
                    .map(|(mu, &n)| n as f64 * mu[j])
                    .sum::<f64>()
                    / total
            })
            .collect();
        self.group_means
            .iter()
            .zip(&self.group_sizes)
            .fold(SymMatrix::zeros(m), |acc, (mu, &n)| {
                let dev: Vec<f64> = mu.iter().zip(&grand).map(|(a, g)| a - g).collect();
                acc.add(&SymMatrix::outer(&dev).scale(n as f64)).unwrap()
            })
    }
}

/// Multivariate regression `Y = XB + Z` with hypothesis `CB = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDesign {
    pub design: Matrix<f64>,
    pub contrast: Matrix<f64>,
    pub coefficients: Matrix<f64>,
    pub covariance: SymMatrix<f64>,
}

/// Symmetric noncentrality summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Noncentrality {
    pub omega: f64,
    pub rank_one: bool,
    pub direction: Vec<f64>,
    /// Eigenvalues of the symmetric noncentrality matrix, descending.
    pub spectrum: Vec<f64>,
    pub n_h: u32,
    pub n_e: u32,
}

impl Noncentrality {
    /// Case 4 scenario with this ω and these degrees of freedom.
    pub fn to_scenario(&self) -> Scenario {
        Scenario::ManovaEstCov {
            m: self.direction.len() as u32,
            n_h: self.n_h,
            n_e: self.n_e,
            omega: self.omega,
        }
    }
}

fn summarize(omega_sym: &SymMatrix<f64>, n_h: u32, n_e: u32) -> Result<Noncentrality> {
    let eig = sym_eigen(omega_sym)?;
    let omega = eig.values[0].max(0.0);
    let second = eig.values.get(1).copied().unwrap_or(0.0);
    Ok(Noncentrality {
        omega,
        rank_one: second <= RANK_ONE_TOL * omega,
        direction: eig.vector(0),
        spectrum: eig.values,
        n_h,
        n_e,
    })
}

/// Σ^{−1/2} (Σ n_k (μ_k − μ̄)(μ_k − μ̄)ᵀ) Σ^{−1/2}, reduced to its top
/// eigenpair.
pub fn manova_noncentrality(d: &GroupDesign) -> Result<Noncentrality> {
    let s = inv_sqrt(&d.covariance)?;
    let omega = d.between_groups().congruence(&s.to_matrix())?;
    let total: u32 = d.group_sizes.iter().sum();
    let k = d.group_sizes.len() as u32;
    summarize(&omega, k - 1, total - k)
}

/// Σ^{−1/2} (CB)ᵀ [C(XᵀX)⁻¹Cᵀ]⁻¹ (CB) Σ^{−1/2} with `n_H = rows(C)` and
/// `n_E = n − p`.
pub fn regression_noncentrality(d: &RegressionDesign) -> Result<Noncentrality> {
    let (n, p) = (d.design.rows(), d.design.cols());
    let n_h = d.contrast.rows();
    let m = d.covariance.dim();
    if d.contrast.cols() != p || d.coefficients.rows() != p || d.coefficients.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "X is {n}x{p}, C is {n_h}x{}, B is {}x{}, Sigma is {m}x{m}",
            d.contrast.cols(),
            d.coefficients.rows(),
            d.coefficients.cols()
        )));
    }
    if n <= p {
        return Err(Error::RankDeficient(format!("X has {n} rows for {p} columns")));
    }
    if n_h == 0 || n_h > p {
        return Err(Error::RankDeficient(format!("C has {n_h} rows, need 1..={p}")));
    }
    let lx = cholesky(&d.design.cross()).map_err(|_| Error::RankDeficient("X is not of full column rank".into()))?;
    // G = C L⁻ᵀ, so C (XᵀX)⁻¹ Cᵀ = G Gᵀ.
    let mut g = Matrix::zeros(n_h, p);
    for i in 0..n_h {
        g.row_mut(i).copy_from_slice(&solve_lower(&lx, d.contrast.row(i)));
    }
    let lm = cholesky(&g.gram()).map_err(|_| Error::RankDeficient("C is not of full row rank".into()))?;
    let cb = d.contrast.matmul(&d.coefficients)?;
    // W = K⁻¹ CB, so (CB)ᵀ M⁻¹ (CB) = WᵀW.
    let mut w = Matrix::zeros(n_h, m);
    for j in 0..m {
        let col = solve_lower(&lm, &cb.column(j));
        for i in 0..n_h {
            w[(i, j)] = col[i];
        }
    }
    let s = inv_sqrt(&d.covariance)?;
    let omega = w.cross().congruence(&s.to_matrix())?;
    summarize(&omega, n_h as u32, (n - p) as u32)
}
