use std::fs;
use std::path::Path;

use serde::Deserialize;

use royroot::linalg::{Matrix, SymMatrix};
use royroot::montecarlo::{
    manova_noncentrality, regression_noncentrality, GroupDesign, Noncentrality, RegressionDesign,
};
use royroot::Scenario;

use crate::args::ScenarioArgs;
use crate::error::CliError;

/// A scenario plus anything worth telling the user about how it was built.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
    pub builder: Option<Noncentrality>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupsFile {
    pub group_sizes: Vec<u32>,
    pub group_means: Vec<Vec<f64>>,
    pub covariance: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressionFile {
    pub design: Vec<Vec<f64>>,
    pub contrast: Vec<Vec<f64>>,
    pub coefficients: Vec<Vec<f64>>,
    pub covariance: Vec<Vec<f64>>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

impl GroupsFile {
    pub fn design(&self) -> Result<GroupDesign, CliError> {
        let cov = SymMatrix::from_rows(&self.covariance)?;
        Ok(GroupDesign::new(
            self.group_sizes.clone(),
            self.group_means.clone(),
            cov,
        )?)
    }
}

impl RegressionFile {
    pub fn design(&self) -> Result<RegressionDesign, CliError> {
        Ok(RegressionDesign {
            design: Matrix::from_rows(&self.design)?,
            contrast: Matrix::from_rows(&self.contrast)?,
            coefficients: Matrix::from_rows(&self.coefficients)?,
            covariance: SymMatrix::from_rows(&self.covariance)?,
        })
    }
}

/// Scenario from a builder's noncentrality, warning when Ω is not rank one.
pub fn from_noncentrality(nc: Noncentrality, known_covariance: bool) -> Result<Resolved, CliError> {
    let mut warnings = Vec::new();
    if !nc.rank_one {
        warnings.push(format!(
            "noncentrality is not rank one (eigenvalues {:?}); the approximation assumes rank one and uses the largest",
            nc.spectrum
        ));
    }
    let scenario = if known_covariance {
        Scenario::case2(nc.direction.len() as u32, nc.n_h, nc.omega, 1.0)?
    } else {
        nc.to_scenario()
    };
    scenario.validate()?;
    Ok(Resolved {
        scenario,
        warnings,
        builder: Some(nc),
    })
}

impl ScenarioArgs {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        if let Some(path) = &self.from_groups {
            self.only_builder_flags("--from-groups")?;
            let nc = manova_noncentrality(&read_json::<GroupsFile>(path)?.design()?)?;
            return from_noncentrality(nc, self.known_covariance);
        }
        if let Some(path) = &self.from_regression {
            self.only_builder_flags("--from-regression")?;
            let nc = regression_noncentrality(&read_json::<RegressionFile>(path)?.design()?)?;
            return from_noncentrality(nc, self.known_covariance);
        }
        if self.known_covariance {
            return Err(CliError::Validation(
                "--known-covariance applies only with --from-groups or --from-regression".into(),
            ));
        }
        let case = self
            .case
            .ok_or_else(|| CliError::Validation("--case is required (or --from-groups / --from-regression)".into()))?;
        let (required, optional): (&[&str], &[&str]) = match case {
            1 => (&["m", "nh", "lambda"], &["sigma"]),
            2 => (&["m", "nh", "omega"], &["sigma"]),
            3 => (&["m", "nh", "ne", "lambda"], &[]),
            4 => (&["m", "nh", "ne", "omega"], &[]),
            5 => (&["p", "q", "n", "rho"], &[]),
            _ => return Err(CliError::Validation(format!("--case must be 1-5, got {case}"))),
        };
        for (name, given) in self.given() {
            if given && !required.contains(&name) && !optional.contains(&name) {
                return Err(CliError::Validation(format!("--{name} is not used by case {case}")));
            }
            if !given && required.contains(&name) {
                return Err(CliError::Validation(format!("--{name} is required for case {case}")));
            }
        }
        let u = |v: Option<u32>| v.unwrap_or_default();
        let f = |v: Option<f64>| v.unwrap_or_default();
        let sigma = self.sigma.unwrap_or(1.0);
        let scenario = match case {
            1 => Scenario::case1(u(self.m), u(self.nh), f(self.lambda), sigma),
            2 => Scenario::case2(u(self.m), u(self.nh), f(self.omega), sigma),
            3 => Scenario::case3(u(self.m), u(self.nh), u(self.ne), f(self.lambda)),
            4 => Scenario::case4(u(self.m), u(self.nh), u(self.ne), f(self.omega)),
            _ => Scenario::case5(u(self.p), u(self.q), u(self.n), f(self.rho)),
        }?;
        Ok(Resolved {
            scenario,
            warnings: Vec::new(),
            builder: None,
        })
    }

    fn given(&self) -> [(&'static str, bool); 10] {
        [
            ("m", self.m.is_some()),
            ("nh", self.nh.is_some()),
            ("ne", self.ne.is_some()),
            ("omega", self.omega.is_some()),
            ("lambda", self.lambda.is_some()),
            ("sigma", self.sigma.is_some()),
            ("p", self.p.is_some()),
            ("q", self.q.is_some()),
            ("n", self.n.is_some()),
            ("rho", self.rho.is_some()),
        ]
    }

    fn only_builder_flags(&self, builder: &str) -> Result<(), CliError> {
        match self.given().iter().find(|(_, g)| *g) {
            Some((name, _)) => Err(CliError::Validation(format!(
                "--{name} cannot be combined with {builder}"
            ))),
            None => Ok(()),
        }
    }
}
