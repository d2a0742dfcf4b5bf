//! Exact information design for a decision maker who knows the prior only up
//! to an identified set and acts to maximize worst-case expected utility.
//!
//! All arithmetic is over arbitrary-precision rationals, so kernel equalities
//! and best-response ties are decided exactly.
//!
//! | module | contents |
//! |---|---|
//! | [`numerics`] | rationals, matrices, canonical subspaces |
//! | [`lp`] | two-phase simplex with verifiable certificates |
//! | [`model`] | decision problems, prior polytopes, experiments, identified sets |
//! | [`solver`] | worst cases, maxmin saddle points, supporting priors |
//! | [`design`] | experiments from kernels, implementation, informativeness |
//! | [`causal`] | treatment-effects problems and marginal disclosure |
//! | [`document`] | TOML problem and structure files |
//! | [`cli`] | the `infodesign` binary |
//!
//! Start with the examples:
//!
//! ```text
//! cargo run --example motivating_example      # disclosure reverses the policy
//! cargo run --example exact_lp                # optimal, infeasible, unbounded
//! cargo run --example kernel_construction     # experiment with a given kernel
//! cargo run --example implement_action        # implement or refute an action
//! cargo run --example maximal_informativeness # kernel order and maximality
//! cargo run --example treatment_effects       # every treatment is implementable
//! cargo run --example researcher_problem      # the researcher's best action
//! ```
//!
//! ```
//! use infodesign::causal::{build_treatment_problem, marginal_structure, motivating_example, MarginalSpec};
//! use infodesign::numerics::ratio;
//! use infodesign::solver::maxmin;
//!
//! let m = motivating_example();
//! let p = build_treatment_problem(&m).unwrap();
//! let e = marginal_structure(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).unwrap()).unwrap();
//! let sol = maxmin(&p, &e).unwrap();
//! assert_eq!(sol.alpha_star.as_pure(), Some(1));
//! assert_eq!(sol.value, ratio(1, 8));
//! ```

pub mod causal;
pub mod cli;
pub mod design;
pub mod document;
pub mod error;
pub mod lp;
pub mod model;
pub mod numerics;
pub mod solver;

pub use error::{Error, Result};
