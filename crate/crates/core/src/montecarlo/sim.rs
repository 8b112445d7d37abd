use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::designs::GroupDesign;
use super::SimConfig;
use crate::linalg::{cholesky, generalized_eigenvalues, solve_lower, sym_eigen, whiten, Matrix, SymMatrix};
use crate::royapprox::Scenario;
use crate::{Error, Result};

/// S₂₂ condition estimate above which a CCA replicate is redrawn.
pub const CCA_CONDITION_LIMIT: f64 = 1e12;

/// Simulated `ℓ₁` values and the number of redrawn replicates (CCA only).
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub values: Vec<f64>,
    pub resampled: u64,
}

/// Roy's largest root and Pillai's trace, replicate by replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct RoyPillai {
    pub roy: Vec<f64>,
    pub pillai: Vec<f64>,
    pub resampled: u64,
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Bartlett factor: lower-triangular `T` with `T Tᵀ ~ W_m(dof, I)`.
pub fn sample_bartlett_factor<R: Rng + ?Sized>(rng: &mut R, m: usize, dof: usize) -> Result<Matrix<f64>> {
    if dof < m {
        return Err(Error::domain(
            "sample_bartlett_factor",
            format!("dof {dof} < dimension {m}"),
        ));
    }
    let chis: Vec<ChiSquared<f64>> = (0..m)
        .map(|i| ChiSquared::new((dof - i) as f64).expect("positive dof"))
        .collect();
    Ok(bartlett(rng, &chis))
}

fn bartlett<R: Rng + ?Sized>(rng: &mut R, chis: &[ChiSquared<f64>]) -> Matrix<f64> {
    let m = chis.len();
    let mut t = Matrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = chis[i].sample(rng).sqrt();
        for j in 0..i {
            t[(i, j)] = normal(rng);
        }
    }
    t
}

/// `Σ xᵢxᵢᵀ` over `dof` rows `xᵢ = μᵢ + L zᵢ`, with `L` the Cholesky factor of
/// Σ and `μᵢ` the rows of `mean` (zero when absent).
pub fn sample_wishart<R: Rng + ?Sized>(
    rng: &mut R,
    dof: usize,
    sigma_chol: &Matrix<f64>,
    mean: Option<&Matrix<f64>>,
) -> Result<SymMatrix<f64>> {
    let m = sigma_chol.rows();
    if let Some(mu) = mean {
        if mu.rows() != dof || mu.cols() != m {
            return Err(Error::DimensionMismatch(format!(
                "mean is {}x{}, expected {dof}x{m}",
                mu.rows(),
                mu.cols()
            )));
        }
    }
    let mut x = Matrix::zeros(dof, m);
    let mut z = vec![0.0; m];
    for i in 0..dof {
        z.iter_mut().for_each(|v| *v = normal(rng));
        let lz = sigma_chol.mul_vec(&z)?;
        for j in 0..m {
            x[(i, j)] = lz[j] + mean.map_or(0.0, |mu| mu[(i, j)]);
        }
    }
    Ok(x.cross())
}

/// `tr H(H+E)⁻¹`.
pub fn pillai_trace(h: &SymMatrix<f64>, e: &SymMatrix<f64>) -> Result<f64> {
    let l = cholesky(&h.add(e)?)?;
    Ok(whiten(h, &l)?.trace())
}

/// Largest root of `det(H − ℓE) = 0`.
pub fn roy_largest_root(h: &SymMatrix<f64>, e: &SymMatrix<f64>) -> Result<f64> {
    crate::linalg::largest_generalized_eig(h, e)
}

fn pillai_from_roots(roots: &[f64]) -> f64 {
    roots.iter().map(|&l| l.max(0.0) / (1.0 + l.max(0.0))).sum()
}

/// Cases 1–4 in the canonical frame Σ = I with the signal along e₁.
struct Canonical {
    m: usize,
    n_h: usize,
    first_sd: f64,
    noise_sd: f64,
    shift: f64,
    chis: Option<Vec<ChiSquared<f64>>>,
}

impl Canonical {
    fn new(s: &Scenario) -> Result<Self> {
        s.validate()?;
        let chis = |m: u32, n_e: u32| -> Option<Vec<ChiSquared<f64>>> {
            Some((0..m).map(|i| ChiSquared::new((n_e - i) as f64).unwrap()).collect())
        };
        let (m, n_h, first_sd, noise_sd, shift, chis) = match *s {
            Scenario::SignalKnownCov {
                m,
                n_h,
                lambda_h,
                sigma,
            } => (m, n_h, (sigma * sigma + lambda_h).sqrt(), sigma, 0.0, None),
            Scenario::ManovaKnownCov { m, n_h, omega, sigma } => (m, n_h, sigma, sigma, omega.sqrt(), None),
            Scenario::SignalEstCov { m, n_h, n_e, lambda_h } => {
                (m, n_h, (1.0 + lambda_h).sqrt(), 1.0, 0.0, chis(m, n_e))
            }
            Scenario::ManovaEstCov { m, n_h, n_e, omega } => (m, n_h, 1.0, 1.0, omega.sqrt(), chis(m, n_e)),
            Scenario::Cca { .. } => {
                return Err(Error::InvalidScenario(
                    "canonical Wishart sampler does not cover case 5".into(),
                ))
            }
        };
        Ok(Canonical {
            m: m as usize,
            n_h: n_h as usize,
            first_sd,
            noise_sd,
            shift,
            chis,
        })
    }

    /// Nonzero roots of `E⁻¹H` (or of `H` when E is absent), descending.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let (m, n_h) = (self.m, self.n_h);
        let t = self.chis.as_ref().map(|c| bartlett(rng, c));
        let mut x = Matrix::zeros(n_h, m);
        for i in 0..n_h {
            for j in 0..m {
                let sd = if j == 0 { self.first_sd } else { self.noise_sd };
                x[(i, j)] = sd * normal(rng);
            }
        }
        x[(0, 0)] += self.shift;
        if let Some(t) = &t {
            for i in 0..n_h {
                let y = solve_lower(t, x.row(i));
                x.row_mut(i).copy_from_slice(&y);
            }
        }
        let g = if n_h <= m { x.gram() } else { x.cross() };
        sym_eigen(&g).expect("Gram matrix is finite").values
    }
}

/// CCA canonical form: Σ₁₁ = I_p, Σ₂₂ = I_q, Σ₁₂ = diag(ρ, 0, …).
struct CcaModel {
    p: usize,
    q: usize,
    n: usize,
    rho: f64,
}

impl CcaModel {
    fn new(p: u32, q: u32, n: u32, rho: f64) -> Result<Self> {
        Scenario::Cca { p, q, n, rho }.validate()?;
        Ok(CcaModel {
            p: p as usize,
            q: q as usize,
            n: n as usize,
            rho,
        })
    }

    /// Roots of `(S₁₂S₂₂⁻¹S₂₁, S₁₁ − S₁₂S₂₂⁻¹S₂₁)` and the number of redraws.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, u64) {
        let mut redraws = 0;
        loop {
            if let Some(roots) = self.attempt(rng) {
                return (roots, redraws);
            }
            redraws += 1;
        }
    }

    fn attempt<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<f64>> {
        let (p, q) = (self.p, self.q);
        let d = p + q;
        let rows = self.n + 1;
        let resid = (1.0 - self.rho * self.rho).sqrt();
        let mut x = Matrix::zeros(rows, d);
        for i in 0..rows {
            for j in 0..q {
                x[(i, p + j)] = normal(rng);
            }
            for j in 0..p {
                x[(i, j)] = normal(rng);
            }
            x[(i, 0)] = self.rho * x[(i, p)] + resid * x[(i, 0)];
        }
        for j in 0..d {
            let mean = (0..rows).map(|i| x[(i, j)]).sum::<f64>() / rows as f64;
            (0..rows).for_each(|i| x[(i, j)] -= mean);
        }
        let s = x.cross();
        let s22 = SymMatrix::from_fn(q, |i, j| s[(p + i, p + j)]);
        let k = cholesky(&s22).ok()?;
        let pivots = (0..q).map(|i| k[(i, i)]);
        let (lo, hi) = pivots.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if (hi / lo).powi(2) > CCA_CONDITION_LIMIT {
            return None;
        }
        // W = K⁻¹S₂₁, so S₁₂S₂₂⁻¹S₂₁ = WᵀW.
        let mut w = Matrix::zeros(q, p);
        for j in 0..p {
            let col = solve_lower(&k, &(0..q).map(|i| s[(p + i, j)]).collect::<Vec<_>>());
            for i in 0..q {
                w[(i, j)] = col[i];
            }
        }
        let h = w.cross();
        let e = SymMatrix::from_fn(p, |i, j| s[(i, j)] - h[(i, j)]);
        generalized_eigenvalues(&h, &e).ok()
    }
}

/// `ℓ₁` replicates from the exact model of the scenario. Cases 1–4 sample
/// Gaussian data in the canonical frame (E by its Bartlett factor); case 5
/// delegates to [`simulate_cca`].
pub fn simulate_l1(s: &Scenario, cfg: &SimConfig) -> Result<SimResult> {
    if let Scenario::Cca { p, q, n, rho } = *s {
        return simulate_cca(p, q, n, rho, cfg);
    }
    let model = Canonical::new(s)?;
    Ok(SimResult {
        values: cfg.run(|rng| model.draw(rng)[0]),
        resampled: 0,
    })
}

/// Roy and Pillai statistics for cases 3–5.
pub fn simulate_roy_pillai(s: &Scenario, cfg: &SimConfig) -> Result<RoyPillai> {
    let draws: Vec<(Vec<f64>, u64)> = match *s {
        Scenario::Cca { p, q, n, rho } => {
            let model = CcaModel::new(p, q, n, rho)?;
            cfg.run(|rng| model.draw(rng))
        }
        Scenario::SignalEstCov { .. } | Scenario::ManovaEstCov { .. } => {
            let model = Canonical::new(s)?;
            cfg.run(|rng| (model.draw(rng), 0))
        }
        _ => {
            return Err(Error::InvalidScenario(
                "Pillai's trace needs an error matrix (cases 3-5)".into(),
            ))
        }
    };
    Ok(collect(draws))
}

fn collect(draws: Vec<(Vec<f64>, u64)>) -> RoyPillai {
    let mut out = RoyPillai {
        roy: Vec::with_capacity(draws.len()),
        pillai: Vec::with_capacity(draws.len()),
        resampled: 0,
    };
    for (roots, redraws) in draws {
        out.roy.push(roots[0]);
        out.pillai.push(pillai_from_roots(&roots));
        out.resampled += redraws;
    }
    out
}

/// `ℓ₁ = r₁²/(1 − r₁²)` from `n + 1` samples of the canonical CCA model.
pub fn simulate_cca(p: u32, q: u32, n: u32, rho: f64, cfg: &SimConfig) -> Result<SimResult> {
    let model = CcaModel::new(p, q, n, rho)?;
    let draws = cfg.run(|rng| {
        let (roots, redraws) = model.draw(rng);
        (roots[0], redraws)
    });
    Ok(SimResult {
        resampled: draws.iter().map(|d| d.1).sum(),
        values: draws.into_iter().map(|d| d.0).collect(),
    })
}

/// One-way MANOVA on literal group data with the design's Σ; returns Roy and
/// Pillai statistics of `(H, E)`.
pub fn simulate_groups(d: &GroupDesign, cfg: &SimConfig) -> Result<RoyPillai> {
    let m = d.dim();
    let total: usize = d.group_sizes().iter().map(|&n| n as usize).sum();
    let k = d.group_sizes().len();
    if total < k + m {
        return Err(Error::InvalidScenario(format!(
            "error dof {} below dimension {m}",
            total - k
        )));
    }
    let l = cholesky(d.covariance())?;
    let draws = cfg.run(|rng| {
        let mut h = SymMatrix::zeros(m);
        let mut e = SymMatrix::zeros(m);
        let mut means = Vec::with_capacity(k);
        let mut z = vec![0.0; m];
        for (g, &n_k) in d.group_sizes().iter().enumerate() {
            let mu = &d.group_means()[g];
            let mut y = Matrix::zeros(n_k as usize, m);
            for i in 0..n_k as usize {
                z.iter_mut().for_each(|v| *v = normal(rng));
                let lz = l.mul_vec(&z).expect("dimension checked");
                for j in 0..m {
                    y[(i, j)] = mu[j] + lz[j];
                }
            }
            let ybar: Vec<f64> = (0..m).map(|j| y.column(j).iter().sum::<f64>() / n_k as f64).collect();
            for i in 0..n_k as usize {
                y.row_mut(i).iter_mut().zip(&ybar).for_each(|(v, b)| *v -= b);
            }
            e = e.add(&y.cross()).expect("dimension checked");
            means.push(ybar);
        }
        let grand: Vec<f64> = (0..m)
            .map(|j| {
                means
                    .iter()
                    .zip(d.group_sizes())
                    .map(|(b, &n)| n as f64 * b[j])
                    .sum::<f64>()
                    / total as f64
            })
            .collect();
        for (b, &n_k) in means.iter().zip(d.group_sizes()) {
            let dev: Vec<f64> = b.iter().zip(&grand).map(|(x, g)| x - g).collect();
            h = h
                .add(&SymMatrix::outer(&dev).scale(n_k as f64))
                .expect("dimension checked");
        }
        (
            generalized_eigenvalues(&h, &e).expect("E is positive definite almost surely"),
            0,
        )
    });
    Ok(collect(draws))
}
