//! Approximate laws of the largest root under rank-one alternatives.
//!
//! | case | setting | law |
//! |---|---|---|
//! | 1 | signal detection, known Σ | `(λ+σ²)χ²_{n_H} + σ²χ²_{m-1} + σ⁴χ²_{m-1}χ²_{n_H-1} / ((λ+σ²)χ²_{n_H})` |
//! | 2 | MANOVA, known Σ | as case 1 with `σ²χ²_{n_H}(ω/σ²)` leading |
//! | 3 | signal detection, `E` | `c₁(λ+1)F_{n_H,ν+1} + c₂F_{m-1,ν+2} + c₃` |
//! | 4 | MANOVA, `E` | `c₁F_{n_H,ν+1}(ω) + c₂F_{m-1,ν+2} + c₃` |
//! | 5 | CCA | `c₁F^χ_{q,ν+1}(c,n) + c₂F_{p-1,ν+2} + c₃` |

mod eval;
mod law;
mod scenario;

pub use eval::{law_cdf, law_density, law_quantile, LawEvaluator, CDF_TOL, QUANTILE_TOL};
pub use law::{build_law, moments, satterthwaite_law, ApproxLaw, Coupling, EvalMode, LawKind, Moments};
pub use scenario::{Case, Scenario};
