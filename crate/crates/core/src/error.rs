use thiserror::Error;

use crate::lp::DualCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("invalid number {input:?}: {reason}")]
    ParseNumber { input: String, reason: String },

    #[error("not a probability vector: {0}")]
    NotProbability(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("prior polytope is empty")]
    EmptyPolytope(Box<DualCertificate>),

    #[error("true state distribution is not in the prior polytope: {0}")]
    PriorNotAdmissible(String),

    #[error("kernel direction {index} has coordinate sum {sum}, expected 0")]
    ZeroSumViolation { index: usize, sum: String },

    #[error("no payoff-equivalent reallocation keeps the prior admissible: {0}")]
    AssumptionViolation(String),

    #[error("action is not implementable: no supporting prior exists")]
    NotImplementable(Box<DualCertificate>),

    #[error(
        "structure does not implement the action: worst case {worst_case} < optimum {optimum}"
    )]
    NotImplementing { worst_case: String, optimum: String },

    #[error("no pure action is implementable")]
    NoImplementableAction,

    #[error("assignment probability P(T={treatment}|X={covariates}) = {value} is not interior")]
    InteriorSupportViolation {
        treatment: String,
        covariates: String,
        value: String,
    },

    #[error("observed distribution disagrees with the assignment mechanism: {0}")]
    AssignmentMismatch(String),

    #[error("assignment depends on every covariate; add an irrelevant signal covariate")]
    NoIrrelevantCovariate,

    #[error("marginal variable set must be a nonempty strict subset: {0}")]
    EmptyOrFullVariableSet(String),

    #[error("invalid treatment model: {0}")]
    InvalidModel(String),

    #[error("payoff target {target} for treatment {treatment} lies outside the outcome range")]
    TargetOutOfRange { treatment: String, target: String },

    #[error("{source_name}:{line}: {message}")]
    Document {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
