//! Treatment effects as a decision problem.
//!
//! States are observed triples `(y, x, t)` ordered lexicographically by
//! `(Y, X₁, …, X_ℓ, T)`, actions are treatments, and the inverse propensity
//! weighted utility `u(a, (y, x, t)) = y·1{a = t} / P(t | x)` makes expected
//! utility equal the counterfactual mean `𝔼[Y_a]`.

use num_traits::{One, Signed, Zero};

use crate::design::{implement_with_prior, Implementation};
use crate::error::{Error, Result};
use crate::model::{payoff, DecisionProblem, InformationStructure, MixedAction, PriorPolytope};
use crate::numerics::{check_probability_vector, format_scalar, ratio, sum, Matrix, Scalar};

/// A finite covariate with named values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covariate {
    pub name: String,
    pub values: Vec<String>,
}

impl Covariate {
    pub fn new<S: Into<String>>(name: &str, values: impl IntoIterator<Item = S>) -> Self {
        Covariate {
            name: name.to_string(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }
}

/// Outcomes, covariates, treatments, a known assignment mechanism and the
/// observed distribution over `Ω = 𝒴 × 𝒳 × 𝒯`.
///
/// `assignment[x][t] = P(T = t | X = x)` with covariate cells `x` in
/// lexicographic order (last covariate fastest). `mu` is indexed like
/// [`TreatmentModel::state_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentModel {
    pub outcomes: Vec<Scalar>,
    pub covariates: Vec<Covariate>,
    pub treatments: Vec<String>,
    pub assignment: Vec<Vec<Scalar>>,
    pub mu: Vec<Scalar>,
}

/// One observable variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    Outcome,
    Covariate(usize),
    Treatment,
}

impl TreatmentModel {
    /// Builds and validates a model (everything except the irrelevant-covariate
    /// condition, which only [`build_treatment_problem`] enforces).
    pub fn new(
        outcomes: Vec<Scalar>,
        covariates: Vec<Covariate>,
        treatments: Vec<String>,
        assignment: Vec<Vec<Scalar>>,
        mu: Vec<Scalar>,
    ) -> Result<Self> {
        let m = TreatmentModel {
            outcomes,
            covariates,
            treatments,
            assignment,
            mu,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn num_cells(&self) -> usize {
        self.covariates.iter().map(|c| c.values.len()).product()
    }

    pub fn num_states(&self) -> usize {
        self.outcomes.len() * self.num_cells() * self.treatments.len()
    }

    pub fn state_index(&self, y: usize, x: usize, t: usize) -> usize {
        (y * self.num_cells() + x) * self.treatments.len() + t
    }

    /// `(y, x, t)` of a state index.
    pub fn decompose(&self, state: usize) -> (usize, usize, usize) {
        let nt = self.treatments.len();
        let nx = self.num_cells();
        (state / (nx * nt), (state / nt) % nx, state % nt)
    }

    /// Per-covariate value indices of cell `x`.
    pub fn cell_values(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![0; self.covariates.len()];
        for (j, c) in self.covariates.iter().enumerate().rev() {
            out[j] = x % c.values.len();
            x /= c.values.len();
        }
        out
    }

    pub fn outcome_label(&self, y: usize) -> String {
        format_scalar(&self.outcomes[y])
    }

    pub fn cell_label(&self, x: usize) -> String {
        self.covariates
            .iter()
            .zip(self.cell_values(x))
            .map(|(c, v)| format!("{}={}", c.name, c.values[v]))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn state_label(&self, state: usize) -> String {
        let (y, x, t) = self.decompose(state);
        format!(
            "Y={},{},T={}",
            self.outcome_label(y),
            self.cell_label(x),
            self.treatments[t]
        )
    }

    pub fn state_labels(&self) -> Vec<String> {
        (0..self.num_states())
            .map(|s| self.state_label(s))
            .collect()
    }

    /// All observable variables in canonical order.
    pub fn variables(&self) -> Vec<Variable> {
        std::iter::once(Variable::Outcome)
            .chain((0..self.covariates.len()).map(Variable::Covariate))
            .chain(std::iter::once(Variable::Treatment))
            .collect()
    }

    pub fn variable_name(&self, v: Variable) -> &str {
        match v {
            Variable::Outcome => "Y",
            Variable::Covariate(j) => &self.covariates[j].name,
            Variable::Treatment => "T",
        }
    }

    /// Looks a variable up by name: `Y`, `T`, or a covariate name.
    pub fn variable(&self, name: &str) -> Option<Variable> {
        self.variables()
            .into_iter()
            .find(|&v| self.variable_name(v) == name)
    }

    pub fn domain_size(&self, v: Variable) -> usize {
        match v {
            Variable::Outcome => self.outcomes.len(),
            Variable::Covariate(j) => self.covariates[j].values.len(),
            Variable::Treatment => self.treatments.len(),
        }
    }

    fn value_label(&self, v: Variable, i: usize) -> String {
        match v {
            Variable::Outcome => self.outcome_label(i),
            Variable::Covariate(j) => self.covariates[j].values[i].clone(),
            Variable::Treatment => self.treatments[i].clone(),
        }
    }

    /// Value index of variable `v` at a state.
    pub fn value_at(&self, state: usize, v: Variable) -> usize {
        let (y, x, t) = self.decompose(state);
        match v {
            Variable::Outcome => y,
            Variable::Covariate(j) => self.cell_values(x)[j],
            Variable::Treatment => t,
        }
    }

    /// `μ(x)` for every covariate cell.
    pub fn covariate_marginal(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.num_cells()];
        for (s, m) in self.mu.iter().enumerate() {
            out[self.decompose(s).1] += m;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.treatments.len() < 2 {
            return bad("at least two treatments are required".into());
        }
        if self.covariates.is_empty() {
            return bad("at least one covariate is required".into());
        }
        if self.outcomes.len() < 2 {
            return bad("at least two outcome values are required".into());
        }
        for (i, y) in self.outcomes.iter().enumerate() {
            if self.outcomes[..i].contains(y) {
                return bad(format!("duplicate outcome value {y}"));
            }
        }
        for c in &self.covariates {
            if c.values.len() < 2 {
                return bad(format!("covariate {} needs at least two values", c.name));
            }
        }
        let names: Vec<&str> = self
            .variables()
            .into_iter()
            .map(|v| self.variable_name(v))
            .collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return bad(format!("duplicate variable name {n}"));
            }
        }
        if self.assignment.len() != self.num_cells() {
            return Err(Error::DimensionMismatch(format!(
                "assignment has {} covariate cells, expected {}",
                self.assignment.len(),
                self.num_cells()
            )));
        }
        for (x, row) in self.assignment.iter().enumerate() {
            if row.len() != self.treatments.len() {
                return Err(Error::DimensionMismatch(format!(
                    "assignment for {} has {} entries, expected {}",
                    self.cell_label(x),
                    row.len(),
                    self.treatments.len()
                )));
            }
            for (t, p) in row.iter().enumerate() {
                if !p.is_positive() || p >= &Scalar::one() {
                    return Err(Error::InteriorSupportViolation {
                        treatment: self.treatments[t].clone(),
                        covariates: self.cell_label(x),
                        value: p.to_string(),
                    });
                }
            }
            if !sum(row).is_one() {
                return bad(format!(
                    "assignment probabilities for {} sum to {}",
                    self.cell_label(x),
                    sum(row)
                ));
            }
        }
        check_probability_vector(&self.mu, self.num_states(), "mu")?;
        let mx = self.covariate_marginal();
        #[allow(clippy::needless_range_loop)]
        for x in 0..self.num_cells() {
            for t in 0..self.treatments.len() {
                let joint = (0..self.outcomes.len())
                    .map(|y| &self.mu[self.state_index(y, x, t)])
                    .fold(Scalar::zero(), |a, b| a + b);
                if joint != &self.assignment[x][t] * &mx[x] {
                    return Err(Error::AssignmentMismatch(format!(
                        "mu(T={}, {}) = {joint}, expected P(t|x)·mu(x) = {}",
                        self.treatments[t],
                        self.cell_label(x),
                        &self.assignment[x][t] * &mx[x]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Covariates the assignment mechanism does not depend on.
    pub fn irrelevant_covariates(&self) -> Vec<usize> {
        (0..self.covariates.len())
            .filter(|&j| {
                (0..self.num_cells()).all(|x| {
                    let mut values = self.cell_values(x);
                    values[j] = 0;
                    self.assignment[x] == self.assignment[self.cell_index(&values)]
                })
            })
            .collect()
    }

    fn cell_index(&self, values: &[usize]) -> usize {
        self.covariates
            .iter()
            .zip(values)
            .fold(0, |acc, (c, &v)| acc * c.values.len() + v)
    }

    /// The homogeneous rows `Σ_y ν(y,x,t) − P(t|x)·Σ_{y,τ} ν(y,x,τ) = 0`, one per `(x, t)`.
    pub fn assignment_constraints(&self) -> Matrix {
        let n = self.num_states();
        let mut m = Matrix::zeros(0, n);
        for x in 0..self.num_cells() {
            for t in 0..self.treatments.len() {
                let mut row = vec![Scalar::zero(); n];
                for y in 0..self.outcomes.len() {
                    for tau in 0..self.treatments.len() {
                        row[self.state_index(y, x, tau)] -= &self.assignment[x][t];
                    }
                    row[self.state_index(y, x, t)] += Scalar::one();
                }
                m.push_row(row).expect("row width matches");
            }
        }
        m
    }

    /// Exact test of `ν(t|x) = P(t|x)` wherever `ν(x) > 0`.
    pub fn admits(&self, nu: &[Scalar]) -> bool {
        nu.len() == self.num_states()
            && crate::numerics::is_probability_vector(nu)
            && self
                .assignment_constraints()
                .mul_vec(nu)
                .map(|r| r.iter().all(Zero::is_zero))
                .unwrap_or(false)
    }

    pub fn min_outcome(&self) -> &Scalar {
        self.outcomes
            .iter()
            .min()
            .expect("validated: outcomes nonempty")
    }

    pub fn max_outcome(&self) -> &Scalar {
        self.outcomes
            .iter()
            .max()
            .expect("validated: outcomes nonempty")
    }
}

/// The decision problem of a treatment-effects model. Requires some covariate
/// the assignment ignores, which makes every payoff class at least a pair.
pub fn build_treatment_problem(m: &TreatmentModel) -> Result<DecisionProblem> {
    m.validate()?;
    if m.irrelevant_covariates().is_empty() {
        return Err(Error::NoIrrelevantCovariate);
    }
    build_observational_problem(m)
}

/// As [`build_treatment_problem`] without the irrelevant-covariate requirement.
/// Solving and disclosure work on such problems; the constructive
/// implementation results may not.
pub fn build_observational_problem(m: &TreatmentModel) -> Result<DecisionProblem> {
    m.validate()?;
    let n = m.num_states();
    let mut utility = Matrix::zeros(m.treatments.len(), n);
    for s in 0..n {
        let (y, x, t) = m.decompose(s);
        utility[(t, s)] = &m.outcomes[y] / &m.assignment[x][t];
    }
    let constraints = m.assignment_constraints();
    let rhs = vec![Scalar::zero(); constraints.rows()];
    let priors = PriorPolytope::new(n, constraints, rhs, Matrix::zeros(0, n), Vec::new())?;
    DecisionProblem::new(
        m.state_labels(),
        m.treatments.clone(),
        utility,
        m.mu.clone(),
        priors,
    )
}

/// Appends an independent uniform binary covariate `S` (before `T`), splitting
/// each state's mass evenly and leaving the assignment unchanged.
pub fn add_irrelevant_signal(m: &TreatmentModel) -> Result<TreatmentModel> {
    m.validate()?;
    let mut name = String::from("S");
    while m.variable(&name).is_some() {
        name.push('\'');
    }
    let mut covariates = m.covariates.clone();
    covariates.push(Covariate::new(&name, ["0", "1"]));
    let assignment = m
        .assignment
        .iter()
        .flat_map(|row| [row.clone(), row.clone()])
        .collect();
    let mu = lift_to_signal(m, &m.mu)?;
    TreatmentModel::new(
        m.outcomes.clone(),
        covariates,
        m.treatments.clone(),
        assignment,
        mu,
    )
}

/// Maps a distribution over `m`'s states to the model extended by
/// [`add_irrelevant_signal`], with the signal independent and uniform.
pub fn lift_to_signal(m: &TreatmentModel, nu: &[Scalar]) -> Result<Vec<Scalar>> {
    if nu.len() != m.num_states() {
        return Err(Error::DimensionMismatch(format!(
            "distribution over {} states, model has {}",
            nu.len(),
            m.num_states()
        )));
    }
    let nt = m.treatments.len();
    let half = ratio(1, 2);
    let mut out = vec![Scalar::zero(); 2 * nu.len()];
    for (s, v) in nu.iter().enumerate() {
        let (y, x, t) = m.decompose(s);
        let base = (y * m.num_cells() + x) * 2 * nt + t;
        out[base] = v * &half;
        out[base + nt] = v * &half;
    }
    Ok(out)
}

/// `𝔼_ν[Y_a]`, the expected utility of treatment `a` under `ν`.
pub fn counterfactual_mean(p: &DecisionProblem, a: usize, nu: &[Scalar]) -> Result<Scalar> {
    if a >= p.num_actions() {
        return Err(Error::DimensionMismatch(format!(
            "treatment {a} out of range for {} treatments",
            p.num_actions()
        )));
    }
    payoff(&p.pure(a), nu, p)
}

/// `ν_π` and its payoff map `U_π(t) = Σ_y y·π(y|t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPrior {
    pub nu: Vec<Scalar>,
    pub payoffs: Vec<Scalar>,
}

/// `ν_π(y,x,t) = π(y|t)·P(t|x)·μ(x)`; `marginals[t]` is `π(·|t)` over outcomes.
pub fn prior_from_marginals(
    m: &TreatmentModel,
    marginals: &[Vec<Scalar>],
) -> Result<MarginalPrior> {
    if marginals.len() != m.treatments.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outcome marginals for {} treatments",
            marginals.len(),
            m.treatments.len()
        )));
    }
    for (t, pi) in marginals.iter().enumerate() {
        check_probability_vector(
            pi,
            m.outcomes.len(),
            &format!("outcome law for T={}", m.treatments[t]),
        )?;
    }
    let mx = m.covariate_marginal();
    let nu: Vec<Scalar> = (0..m.num_states())
        .map(|s| {
            let (y, x, t) = m.decompose(s);
            &marginals[t][y] * &m.assignment[x][t] * &mx[x]
        })
        .collect();
    if !m.admits(&nu) {
        return Err(Error::Internal(
            "outcome-marginal prior violates the assignment".into(),
        ));
    }
    let payoffs = marginals
        .iter()
        .map(|pi| crate::numerics::dot(&m.outcomes, pi))
        .collect();
    Ok(MarginalPrior { nu, payoffs })
}

/// Outcome laws `π(·|t)` on `{min 𝒴, max 𝒴}` whose means are `target[t]`.
pub fn marginals_for_target(m: &TreatmentModel, target: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    if target.len() != m.treatments.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} targets for {} treatments",
            target.len(),
            m.treatments.len()
        )));
    }
    let lo = m.min_outcome();
    let hi = m.max_outcome();
    let i_lo = m
        .outcomes
        .iter()
        .position(|y| y == lo)
        .expect("min is an outcome");
    let i_hi = m
        .outcomes
        .iter()
        .position(|y| y == hi)
        .expect("max is an outcome");
    target
        .iter()
        .enumerate()
        .map(|(t, u)| {
            if u < lo || u > hi {
                return Err(Error::TargetOutOfRange {
                    treatment: m.treatments[t].clone(),
                    target: u.to_string(),
                });
            }
            let mut pi = vec![Scalar::zero(); m.outcomes.len()];
            if lo == hi {
                pi[i_lo] = Scalar::one();
            } else {
                let w = (u - lo) / (hi - lo);
                pi[i_lo] = Scalar::one() - &w;
                pi[i_hi] = w;
            }
            Ok(pi)
        })
        .collect()
}

/// Everything built on the way to implementing an action in a treatment model.
#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentImplementation {
    /// `u* = min_{t ∈ supp α} 𝔼_μ[Y_t]`.
    pub floor: Scalar,
    /// `U*`: `u*` on the support of `α`, `min 𝒴` elsewhere.
    pub target: Vec<Scalar>,
    pub marginals: Vec<Vec<Scalar>>,
    pub prior: MarginalPrior,
    pub implementation: Implementation,
}

/// Implements any action of a treatment-effects model with an almost fully
/// informative structure.
pub fn implement_treatment(
    m: &TreatmentModel,
    alpha: &MixedAction,
) -> Result<TreatmentImplementation> {
    let p = build_treatment_problem(m)?;
    if alpha.len() != p.num_actions() {
        return Err(Error::DimensionMismatch(format!(
            "action over {} treatments, model has {}",
            alpha.len(),
            p.num_actions()
        )));
    }
    let support = alpha.support();
    let means = p.action_payoffs(&m.mu)?;
    let floor = support
        .iter()
        .map(|&t| &means[t])
        .min()
        .expect("mixed actions have nonempty support")
        .clone();
    let target: Vec<Scalar> = (0..p.num_actions())
        .map(|t| {
            if support.contains(&t) {
                floor.clone()
            } else {
                m.min_outcome().clone()
            }
        })
        .collect();
    let marginals = marginals_for_target(m, &target)?;
    let prior = prior_from_marginals(m, &marginals)?;
    let implementation = implement_with_prior(&p, alpha, &prior.nu)?;
    Ok(TreatmentImplementation {
        floor,
        target,
        marginals,
        prior,
        implementation,
    })
}

/// A nonempty strict subset of the observable variables, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalSpec {
    variables: Vec<Variable>,
}

impl MarginalSpec {
    pub fn new(m: &TreatmentModel, variables: &[Variable]) -> Result<Self> {
        let all = m.variables();
        let mut vs: Vec<Variable> = Vec::new();
        for v in variables {
            if !all.contains(v) {
                return Err(Error::EmptyOrFullVariableSet(format!(
                    "unknown variable {v:?}"
                )));
            }
            if !vs.contains(v) {
                vs.push(*v);
            }
        }
        vs.sort();
        if vs.is_empty() {
            return Err(Error::EmptyOrFullVariableSet("no variables".into()));
        }
        if vs.len() == all.len() {
            return Err(Error::EmptyOrFullVariableSet(
                "every variable is disclosed".into(),
            ));
        }
        Ok(MarginalSpec { variables: vs })
    }

    /// Parses names such as `["Y", "T"]`.
    pub fn from_names<S: AsRef<str>>(m: &TreatmentModel, names: &[S]) -> Result<Self> {
        let vars = names
            .iter()
            .map(|n| {
                m.variable(n.as_ref()).ok_or_else(|| {
                    Error::EmptyOrFullVariableSet(format!("unknown variable {:?}", n.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MarginalSpec::new(m, &vars)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }
}

/// The deterministic experiment revealing `ω_V`; messages are the values of
/// `V` in lexicographic order.
pub fn marginal_structure(m: &TreatmentModel, spec: &MarginalSpec) -> Result<InformationStructure> {
    let vars = spec.variables();
    let sizes: Vec<usize> = vars.iter().map(|&v| m.domain_size(v)).collect();
    let num_messages: usize = sizes.iter().product();
    let labels = (0..num_messages)
        .map(|mut k| {
            let mut parts = vec![String::new(); vars.len()];
            for i in (0..vars.len()).rev() {
                parts[i] = format!(
                    "{}={}",
                    m.variable_name(vars[i]),
                    m.value_label(vars[i], k % sizes[i])
                );
                k /= sizes[i];
            }
            parts.join(",")
        })
        .collect();
    let n = m.num_states();
    let mut e = Matrix::zeros(num_messages, n);
    for s in 0..n {
        let k = vars
            .iter()
            .zip(&sizes)
            .fold(0, |acc, (&v, &size)| acc * size + m.value_at(s, v));
        e[(k, s)] = Scalar::one();
    }
    InformationStructure::new(labels, e)
}

/// Why a marginal structure is never maximally informative.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalReport {
    pub kernel_dim: usize,
    /// `max_v ((k_v − 1)/k_v)·|Ω|` over undisclosed variables `v`.
    pub bound: Scalar,
    /// `kernel_dim > 1`: the structure is not almost fully informative and so
    /// not maximal for any action.
    pub not_maximal: bool,
}

pub fn check_marginal_not_maximal(
    m: &TreatmentModel,
    spec: &MarginalSpec,
) -> Result<MarginalReport> {
    let e = marginal_structure(m, spec)?;
    let kernel_dim = e.kernel().dim();
    let n = m.num_states() as i64;
    let bound = m
        .variables()
        .into_iter()
        .filter(|v| !spec.variables().contains(v))
        .map(|v| {
            let k = m.domain_size(v) as i64;
            ratio((k - 1) * n, k)
        })
        .max()
        .expect("spec is a strict subset");
    if Scalar::from_integer(kernel_dim.into()) < bound {
        return Err(Error::Internal(format!(
            "kernel dimension {kernel_dim} below the bound {bound}"
        )));
    }
    Ok(MarginalReport {
        kernel_dim,
        bound,
        not_maximal: kernel_dim > 1,
    })
}

fn decimals(xs: &[&str]) -> Vec<Scalar> {
    xs.iter()
        .map(|s| crate::numerics::parse_scalar(s).expect("fixture literals parse"))
        .collect()
}

/// The binary example with one covariate `X` that drives assignment:
/// `P(T=1|X=0) = 0.2`, `P(T=1|X=1) = 0.8`. It violates the irrelevant-covariate
/// condition; see [`motivating_example`].
pub fn motivating_example_base() -> TreatmentModel {
    TreatmentModel::new(
        decimals(&["0", "1"]),
        vec![Covariate::new("X", ["0", "1"])],
        vec!["0".into(), "1".into()],
        vec![decimals(&["0.8", "0.2"]), decimals(&["0.2", "0.8"])],
        observed_distribution(),
    )
    .expect("fixture is valid")
}

/// [`motivating_example_base`] with an independent binary signal `S`.
pub fn motivating_example() -> TreatmentModel {
    add_irrelevant_signal(&motivating_example_base()).expect("fixture is valid")
}

/// Observed `μ(Y, X, T)` in state order `(y, x, t)`.
pub fn observed_distribution() -> Vec<Scalar> {
    decimals(&["0.40", "0.10", "0.05", "0.30", "0", "0", "0.05", "0.10"])
}

/// A prior consistent with the disclosed `(Y, T)` marginal that is worst case
/// for both treatments, in state order `(y, x, t)`.
pub fn worst_case_distribution() -> Vec<Scalar> {
    decimals(&["0.35", "0.10", "0.10", "0.30", "0.05", "0", "0", "0.10"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{kernel_of, payoff_equivalence_classes, push_forward};
    use crate::numerics::int;
    use crate::solver::{maxmin, worst_case};

    #[test]
    fn state_order_is_lexicographic() {
        let m = motivating_example_base();
        assert_eq!(m.state_label(0), "Y=0,X=0,T=0");
        assert_eq!(m.state_label(1), "Y=0,X=0,T=1");
        assert_eq!(m.state_label(6), "Y=1,X=1,T=0");
        let ext = motivating_example();
        assert_eq!(ext.state_label(3), "Y=0,X=0,S=1,T=1");
        assert_eq!(ext.num_states(), 16);
        for s in 0..ext.num_states() {
            let (y, x, t) = ext.decompose(s);
            assert_eq!(ext.state_index(y, x, t), s);
        }
    }

    #[test]
    fn inverse_propensity_utility() {
        let m = motivating_example();
        let p = build_treatment_problem(&m).unwrap();
        let s = p.state_index("Y=1,X=1,S=0,T=0").unwrap();
        assert_eq!(p.utility()[(0, s)], int(5));
        assert_eq!(p.utility()[(1, s)], int(0));
        assert!(payoff_equivalence_classes(&p).all_paired);
    }

    #[test]
    fn base_example_lacks_an_irrelevant_covariate() {
        let m = motivating_example_base();
        assert!(m.irrelevant_covariates().is_empty());
        assert_eq!(
            build_treatment_problem(&m),
            Err(Error::NoIrrelevantCovariate)
        );
        assert!(build_observational_problem(&m).is_ok());
        assert_eq!(motivating_example().irrelevant_covariates(), vec![1]);
    }

    #[test]
    fn invalid_models_are_rejected() {
        let mut m = motivating_example_base();
        m.assignment[0] = decimals(&["1", "0"]);
        assert!(matches!(
            m.validate(),
            Err(Error::InteriorSupportViolation { .. })
        ));

        let mut m = motivating_example_base();
        m.mu = decimals(&["0.40", "0.10", "0.05", "0.30", "0", "0", "0.10", "0.05"]);
        assert!(matches!(m.validate(), Err(Error::AssignmentMismatch(_))));
    }

    #[test]
    fn counterfactual_means_and_worst_cases() {
        let base = motivating_example_base();
        let p = build_observational_problem(&base).unwrap();
        assert_eq!(counterfactual_mean(&p, 0, p.mu()).unwrap(), ratio(1, 4));
        assert_eq!(counterfactual_mean(&p, 1, p.mu()).unwrap(), ratio(1, 8));
        let star = worst_case_distribution();
        assert_eq!(counterfactual_mean(&p, 0, &star).unwrap(), ratio(1, 16));
        assert_eq!(counterfactual_mean(&p, 1, &star).unwrap(), ratio(1, 8));

        let spec = MarginalSpec::from_names(&base, &["Y", "T"]).unwrap();
        let e = marginal_structure(&base, &spec).unwrap();
        assert!(crate::model::identified_set(&p, &e)
            .unwrap()
            .contains(&star));
        assert_eq!(worst_case(&p, &e, &p.pure(0)).unwrap().value, ratio(1, 16));
        assert_eq!(worst_case(&p, &e, &p.pure(1)).unwrap().value, ratio(1, 8));
    }

    #[test]
    fn marginal_messages_and_kernels() {
        let base = motivating_example_base();
        let spec = MarginalSpec::from_names(&base, &["T", "Y"]).unwrap();
        let e = marginal_structure(&base, &spec).unwrap();
        assert_eq!(e.messages(), ["Y=0,T=0", "Y=0,T=1", "Y=1,T=0", "Y=1,T=1"]);
        assert_eq!(
            push_forward(&e, &base.mu).unwrap(),
            decimals(&["0.45", "0.40", "0.05", "0.10"])
        );
        assert_eq!(kernel_of(&e).subspace.dim(), 4);

        let t_only = MarginalSpec::from_names(&base, &["T"]).unwrap();
        let r = check_marginal_not_maximal(&base, &t_only).unwrap();
        assert_eq!(r.kernel_dim, 6);
        assert!(r.not_maximal);
        assert_eq!(r.bound, int(4));

        assert!(MarginalSpec::from_names(&base, &[] as &[&str]).is_err());
        assert!(MarginalSpec::from_names(&base, &["Y", "X", "T"]).is_err());
        assert!(MarginalSpec::from_names(&base, &["Z"]).is_err());
    }

    #[test]
    fn policy_reversal() {
        let m = motivating_example();
        let p = build_treatment_problem(&m).unwrap();
        let spec = MarginalSpec::from_names(&m, &["Y", "T"]).unwrap();
        let marginal = maxmin(&p, &marginal_structure(&m, &spec).unwrap()).unwrap();
        assert_eq!(marginal.alpha_star.as_pure(), Some(1));
        assert_eq!(marginal.value, ratio(1, 8));
        let full = maxmin(&p, &InformationStructure::identity(p.num_states())).unwrap();
        assert_eq!(full.alpha_star.as_pure(), Some(0));
        assert_eq!(full.value, ratio(1, 4));
    }

    #[test]
    fn two_point_marginals_hit_targets() {
        let m = motivating_example();
        let target = vec![ratio(1, 3), int(1)];
        let pis = marginals_for_target(&m, &target).unwrap();
        let prior = prior_from_marginals(&m, &pis).unwrap();
        assert_eq!(prior.payoffs, target);
        let p = build_treatment_problem(&m).unwrap();
        assert_eq!(p.action_payoffs(&prior.nu).unwrap(), target);
        assert!(matches!(
            marginals_for_target(&m, &[int(2), int(0)]),
            Err(Error::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn every_action_is_implemented() {
        let m = motivating_example();
        let p = build_treatment_problem(&m).unwrap();
        for alpha in [p.pure(0), p.pure(1), MixedAction::uniform(2)] {
            let r = implement_treatment(&m, &alpha).unwrap();
            let e = &r.implementation.structure;
            assert!(kernel_of(e).almost_fully_informative);
            r.implementation.certificate.validate(&p, e).unwrap();
            let wc = worst_case(&p, e, &alpha).unwrap().value;
            assert_eq!(wc, maxmin(&p, e).unwrap().value);
        }
        let r = implement_treatment(&m, &p.pure(1)).unwrap();
        assert_eq!(r.floor, ratio(1, 8));
        let mixed = implement_treatment(&m, &MixedAction::uniform(2)).unwrap();
        assert_eq!(mixed.floor, ratio(1, 8));
        assert_eq!(
            crate::solver::best_responses(&p, &mixed.prior.nu).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn lifted_worst_case_stays_admissible() {
        let base = motivating_example_base();
        let ext = motivating_example();
        let star = lift_to_signal(&base, &worst_case_distribution()).unwrap();
        assert!(ext.admits(&star));
        assert_eq!(sum(&star), int(1));
        assert_eq!(lift_to_signal(&base, &base.mu).unwrap(), ext.mu);
    }
}
