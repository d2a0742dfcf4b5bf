//! Decision problems, prior polytopes, information structures and identified sets.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{feasible_point, LinearProgram, LpOutcome, Sense};
use crate::numerics::{check_probability_vector, dot, sum, Matrix, Scalar, Subspace};

/// Priors in H-representation: the probability simplex over `dimension` states
/// intersected with `A_eq ν = b_eq` and `A_le ν ≤ b_le`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorPolytope {
    dimension: usize,
    eq_matrix: Matrix,
    eq_rhs: Vec<Scalar>,
    le_matrix: Matrix,
    le_rhs: Vec<Scalar>,
}

impl PriorPolytope {
    /// The whole simplex `Δ(Ω)`.
    pub fn simplex(dimension: usize) -> Self {
        PriorPolytope {
            dimension,
            eq_matrix: Matrix::zeros(0, dimension),
            eq_rhs: Vec::new(),
            le_matrix: Matrix::zeros(0, dimension),
            le_rhs: Vec::new(),
        }
    }

    /// Validates dimensions and nonemptiness (by LP).
    pub fn new(
        dimension: usize,
        eq_matrix: Matrix,
        eq_rhs: Vec<Scalar>,
        le_matrix: Matrix,
        le_rhs: Vec<Scalar>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::DimensionMismatch(
                "prior polytope over zero states".into(),
            ));
        }
        if eq_matrix.cols() != dimension || le_matrix.cols() != dimension {
            return Err(Error::DimensionMismatch(format!(
                "constraint matrices must have {dimension} columns"
            )));
        }
        if eq_rhs.len() != eq_matrix.rows() || le_rhs.len() != le_matrix.rows() {
            return Err(Error::DimensionMismatch(
                "constraint right-hand sides do not match the row count".into(),
            ));
        }
        let polytope = PriorPolytope {
            dimension,
            eq_matrix,
            eq_rhs,
            le_matrix,
            le_rhs,
        };
        let lp = polytope.feasibility_program();
        if let LpOutcome::Infeasible(cert) = feasible_point(&lp)? {
            return Err(Error::EmptyPolytope(Box::new(cert)));
        }
        Ok(polytope)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn eq_matrix(&self) -> &Matrix {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &[Scalar] {
        &self.eq_rhs
    }

    pub fn le_matrix(&self) -> &Matrix {
        &self.le_matrix
    }

    pub fn le_rhs(&self) -> &[Scalar] {
        &self.le_rhs
    }

    /// Adds equality rows without re-checking nonemptiness.
    pub(crate) fn with_equalities(&self, rows: &Matrix, rhs: &[Scalar]) -> PriorPolytope {
        let mut out = self.clone();
        for (row, b) in rows.row_iter().zip(rhs) {
            out.eq_matrix
                .push_row(row.to_vec())
                .expect("row width matches dimension");
            out.eq_rhs.push(b.clone());
        }
        out
    }

    /// `opt objective·ν` over the polytope, simplex constraints included.
    pub fn program(&self, sense: Sense, objective: Vec<Scalar>) -> LinearProgram {
        assert_eq!(objective.len(), self.dimension);
        let mut lp = LinearProgram::new(sense, objective);
        lp.add_eq(vec![Scalar::one(); self.dimension], Scalar::one())
            .expect("width matches");
        lp.eq_matrix = {
            let mut m = lp.eq_matrix;
            for row in self.eq_matrix.row_iter() {
                m.push_row(row.to_vec()).expect("width matches");
            }
            m
        };
        lp.eq_rhs.extend(self.eq_rhs.iter().cloned());
        for (row, b) in self.le_matrix.row_iter().zip(&self.le_rhs) {
            lp.add_le(row.to_vec(), b.clone()).expect("width matches");
        }
        lp
    }

    pub fn feasibility_program(&self) -> LinearProgram {
        self.program(Sense::Minimize, vec![Scalar::zero(); self.dimension])
    }

    /// Exact membership test.
    pub fn contains(&self, nu: &[Scalar]) -> bool {
        nu.len() == self.dimension
            && nu.iter().all(|x| !x.is_negative())
            && sum(nu).is_one()
            && self
                .eq_matrix
                .row_iter()
                .zip(&self.eq_rhs)
                .all(|(row, b)| &dot(row, nu) == b)
            && self
                .le_matrix
                .row_iter()
                .zip(&self.le_rhs)
                .all(|(row, b)| &dot(row, nu) <= b)
    }

    /// Membership decided by an LP over the singleton `{ν}`; an independent
    /// route to [`PriorPolytope::contains`].
    pub fn contains_via_lp(&self, nu: &[Scalar]) -> Result<bool> {
        if nu.len() != self.dimension {
            return Err(Error::DimensionMismatch(format!(
                "prior of length {} for {} states",
                nu.len(),
                self.dimension
            )));
        }
        let mut lp = self.feasibility_program();
        for (i, x) in nu.iter().enumerate() {
            let mut row = vec![Scalar::zero(); self.dimension];
            row[i] = Scalar::one();
            lp.add_eq(row, x.clone())?;
        }
        let outcome = feasible_point(&lp)?;
        Ok(outcome.optimal().is_some())
    }
}

/// Probability vector over actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedAction {
    weights: Vec<Scalar>,
}

impl MixedAction {
    pub fn new(weights: Vec<Scalar>) -> Result<Self> {
        let n = weights.len();
        check_probability_vector(&weights, n, "mixed action")?;
        Ok(MixedAction { weights })
    }

    pub fn pure(num_actions: usize, action: usize) -> Self {
        assert!(action < num_actions, "action {action} out of {num_actions}");
        let mut weights = vec![Scalar::zero(); num_actions];
        weights[action] = Scalar::one();
        MixedAction { weights }
    }

    pub fn uniform(num_actions: usize) -> Self {
        assert!(num_actions > 0);
        let w = Scalar::new(1.into(), (num_actions as i64).into());
        MixedAction {
            weights: vec![w; num_actions],
        }
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&i| self.weights[i].is_positive())
            .collect()
    }

    /// The action index if this is a point mass.
    pub fn as_pure(&self) -> Option<usize> {
        match self.support().as_slice() {
            [a] => Some(*a),
            _ => None,
        }
    }
}

/// A finite decision problem `(Ω, A, u, μ, 𝒫)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    states: Vec<String>,
    actions: Vec<String>,
    /// `|A| × |Ω|`, row `a` holds `u(a, ·)`.
    utility: Matrix,
    mu: Vec<Scalar>,
    priors: PriorPolytope,
}

impl DecisionProblem {
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        utility: Matrix,
        mu: Vec<Scalar>,
        priors: PriorPolytope,
    ) -> Result<Self> {
        if states.is_empty() || actions.is_empty() {
            return Err(Error::DimensionMismatch(
                "a decision problem needs at least one state and one action".into(),
            ));
        }
        if utility.rows() != actions.len() || utility.cols() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "utility is {}x{}, expected {}x{} (actions x states)",
                utility.rows(),
                utility.cols(),
                actions.len(),
                states.len()
            )));
        }
        if priors.dimension() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "prior polytope over {} states, problem has {}",
                priors.dimension(),
                states.len()
            )));
        }
        check_probability_vector(&mu, states.len(), "mu")?;
        if !priors.contains(&mu) {
            return Err(Error::PriorNotAdmissible(
                "mu violates a prior constraint".into(),
            ));
        }
        Ok(DecisionProblem {
            states,
            actions,
            utility,
            mu,
            priors,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn utility(&self) -> &Matrix {
        &self.utility
    }

    pub fn mu(&self) -> &[Scalar] {
        &self.mu
    }

    pub fn priors(&self) -> &PriorPolytope {
        &self.priors
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == label)
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn pure(&self, action: usize) -> MixedAction {
        MixedAction::pure(self.num_actions(), action)
    }

    /// `(⟨a, ν⟩)_a` for every pure action.
    pub fn action_payoffs(&self, nu: &[Scalar]) -> Result<Vec<Scalar>> {
        self.utility.mul_vec(nu)
    }

    /// `Σ_a α(a) u(a, ·)`: the state-wise utility of a mixed action.
    pub fn mixed_utility(&self, alpha: &MixedAction) -> Result<Vec<Scalar>> {
        if alpha.len() != self.num_actions() {
            return Err(Error::DimensionMismatch(format!(
                "mixed action over {} actions, problem has {}",
                alpha.len(),
                self.num_actions()
            )));
        }
        self.utility.vec_mul(alpha.weights())
    }

    pub(crate) fn check_prior_len(&self, nu: &[Scalar]) -> Result<()> {
        if nu.len() != self.num_states() {
            return Err(Error::DimensionMismatch(format!(
                "prior of length {} for {} states",
                nu.len(),
                self.num_states()
            )));
        }
        Ok(())
    }
}

/// `⟨α, ν⟩ = Σ_a Σ_ω α(a) u(a, ω) ν(ω)`.
pub fn payoff(alpha: &MixedAction, nu: &[Scalar], p: &DecisionProblem) -> Result<Scalar> {
    p.check_prior_len(nu)?;
    Ok(dot(&p.mixed_utility(alpha)?, nu))
}

/// An information structure `(Σ, E)`; column `ω` of `E` is the message law
/// `E(· | ω)`.
#[derive(Debug, Clone)]
pub struct InformationStructure {
    messages: Vec<String>,
    experiment: Matrix,
    kernel: OnceLock<Subspace>,
}

impl PartialEq for InformationStructure {
    fn eq(&self, other: &Self) -> bool {
        self.messages == other.messages && self.experiment == other.experiment
    }
}

impl InformationStructure {
    pub fn new(messages: Vec<String>, experiment: Matrix) -> Result<Self> {
        if messages.len() != experiment.rows() {
            return Err(Error::InvalidExperiment(format!(
                "{} messages for {} experiment rows",
                messages.len(),
                experiment.rows()
            )));
        }
        if experiment.cols() == 0 {
            return Err(Error::InvalidExperiment("experiment has no states".into()));
        }
        let mut totals = vec![Scalar::zero(); experiment.cols()];
        for (i, row) in experiment.row_iter().enumerate() {
            for (j, (x, total)) in row.iter().zip(totals.iter_mut()).enumerate() {
                if x.is_negative() {
                    return Err(Error::InvalidExperiment(format!(
                        "E({} | state {j}) = {x} is negative",
                        messages[i]
                    )));
                }
                if !x.is_zero() {
                    *total += x;
                }
            }
        }
        if let Some(j) = totals.iter().position(|t| !t.is_one()) {
            return Err(Error::InvalidExperiment(format!(
                "column for state {j} sums to {}",
                totals[j]
            )));
        }
        Ok(InformationStructure {
            messages,
            experiment,
            kernel: OnceLock::new(),
        })
    }

    /// A structure whose stochasticity and kernel the caller has proved.
    pub(crate) fn from_construction(
        messages: Vec<String>,
        experiment: Matrix,
        kernel: Subspace,
    ) -> Self {
        debug_assert_eq!(messages.len(), experiment.rows());
        InformationStructure {
            messages,
            experiment,
            kernel: OnceLock::from(kernel),
        }
    }

    /// Reveals the state: messages `m0..m{n-1}`.
    pub fn identity(num_states: usize) -> Self {
        InformationStructure {
            messages: message_labels(num_states),
            experiment: Matrix::identity(num_states),
            kernel: OnceLock::from(Subspace::zero(num_states)),
        }
    }

    /// Reveals nothing.
    pub fn single_message(num_states: usize) -> Self {
        InformationStructure {
            messages: message_labels(1),
            experiment: Matrix::from_rows(vec![vec![Scalar::one(); num_states]], num_states)
                .expect("one row of the right width"),
            kernel: OnceLock::from(Subspace::zero_sum_hyperplane(num_states)),
        }
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn experiment(&self) -> &Matrix {
        &self.experiment
    }

    pub fn num_states(&self) -> usize {
        self.experiment.cols()
    }

    /// Computed once and cached.
    pub fn kernel(&self) -> Subspace {
        self.kernel
            .get_or_init(|| self.experiment.nullspace())
            .clone()
    }
}

/// `m0, m1, …`: the labels of every constructed structure.
pub fn message_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("m{i}")).collect()
}

/// `(Eν)(σ) = Σ_ω E(σ|ω) ν(ω)`.
pub fn push_forward(e: &InformationStructure, nu: &[Scalar]) -> Result<Vec<Scalar>> {
    e.experiment.mul_vec(nu)
}

/// Kernel of an experiment together with its informativeness flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub subspace: Subspace,
    /// `ker E = {0}`.
    pub fully_informative: bool,
    /// `dim ker E ≤ 1`.
    pub almost_fully_informative: bool,
}

pub fn kernel_of(e: &InformationStructure) -> Kernel {
    let subspace = e.kernel();
    let dim = subspace.dim();
    Kernel {
        subspace,
        fully_informative: dim == 0,
        almost_fully_informative: dim <= 1,
    }
}

/// `{ν ∈ 𝒫 : Eν = Eμ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentifiedSet {
    pub base: PriorPolytope,
    pub structure: InformationStructure,
    /// `μ`, the point every member differs from by a kernel vector.
    pub anchor: Vec<Scalar>,
    pub kernel: Subspace,
}

impl IdentifiedSet {
    /// `Eμ`, the observed message distribution.
    pub fn pinned_pushforward(&self) -> Vec<Scalar> {
        push_forward(&self.structure, &self.anchor).expect("anchor has one entry per state")
    }

    /// The set as a single H-representation.
    pub fn polytope(&self) -> PriorPolytope {
        self.base
            .with_equalities(self.structure.experiment(), &self.pinned_pushforward())
    }

    /// `ν ∈ 𝒫` and `ν − μ ∈ ker E`.
    pub fn contains(&self, nu: &[Scalar]) -> bool {
        if nu.len() != self.anchor.len() || !self.base.contains(nu) {
            return false;
        }
        let diff: Vec<Scalar> = nu.iter().zip(&self.anchor).map(|(a, b)| a - b).collect();
        self.kernel.contains_vector(&diff).unwrap_or(false)
    }

    /// The set in kernel coordinates, `ν = μ + Kz`.
    pub fn chart(&self) -> Chart {
        let basis = self.kernel.basis().to_vec();
        let k = basis.len();
        let anchor = &self.anchor;
        let pull = |row: &[Scalar]| -> Vec<Scalar> { basis.iter().map(|b| dot(row, b)).collect() };
        let mut le = Matrix::zeros(0, k);
        let mut le_rhs = Vec::new();
        let mut eq = Matrix::zeros(0, k);
        let mut eq_rhs = Vec::new();
        for (w, m) in anchor.iter().enumerate() {
            let row: Vec<Scalar> = basis.iter().map(|b| -b[w].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                le.push_row(row).expect("width k");
                le_rhs.push(m.clone());
            }
        }
        for (row, b) in self.base.le_matrix.row_iter().zip(&self.base.le_rhs) {
            let pulled = pull(row);
            if pulled.iter().any(|x| !x.is_zero()) {
                le.push_row(pulled).expect("width k");
                le_rhs.push(b - dot(row, anchor));
            }
        }
        for (row, b) in self.base.eq_matrix.row_iter().zip(&self.base.eq_rhs) {
            let pulled = pull(row);
            if pulled.iter().any(|x| !x.is_zero()) {
                eq.push_row(pulled).expect("width k");
                eq_rhs.push(b - dot(row, anchor));
            }
        }
        Chart {
            anchor: anchor.clone(),
            basis,
            le,
            le_rhs,
            eq,
            eq_rhs,
        }
    }
}

/// An identified set as `{μ + Kz : Gz ≤ h, Fz = f}` with `z` free, where the
/// rows of `basis` are the columns of `K`. Nonnegativity of `ν` sits in `G`;
/// the unit sum holds automatically because kernel vectors sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub anchor: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
    pub le: Matrix,
    pub le_rhs: Vec<Scalar>,
    pub eq: Matrix,
    pub eq_rhs: Vec<Scalar>,
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `μ + Kz`.
    pub fn point(&self, z: &[Scalar]) -> Vec<Scalar> {
        let mut nu = self.anchor.clone();
        for (zi, b) in z.iter().zip(&self.basis) {
            if zi.is_zero() {
                continue;
            }
            for (v, bi) in nu.iter_mut().zip(b) {
                *v += zi * bi;
            }
        }
        nu
    }

    /// `Kᵀc`, the coefficients of `c·ν` in `z`.
    pub fn pull(&self, c: &[Scalar]) -> Vec<Scalar> {
        self.basis.iter().map(|b| dot(c, b)).collect()
    }

    /// `opt c·ν` over the set as an LP in `z`; add `c·μ` to its value.
    pub fn program(&self, sense: Sense, c: &[Scalar]) -> LinearProgram {
        let mut lp = LinearProgram::new(sense, self.pull(c));
        for j in 0..self.dim() {
            lp.set_free(j);
        }
        for (row, b) in self.le.row_iter().zip(&self.le_rhs) {
            lp.add_le(row.to_vec(), b.clone()).expect("width k");
        }
        for (row, b) in self.eq.row_iter().zip(&self.eq_rhs) {
            lp.add_eq(row.to_vec(), b.clone()).expect("width k");
        }
        lp
    }
}

pub fn identified_set(p: &DecisionProblem, e: &InformationStructure) -> Result<IdentifiedSet> {
    if e.num_states() != p.num_states() {
        return Err(Error::DimensionMismatch(format!(
            "structure over {} states, problem has {}",
            e.num_states(),
            p.num_states()
        )));
    }
    Ok(IdentifiedSet {
        base: p.priors().clone(),
        structure: e.clone(),
        anchor: p.mu().to_vec(),
        kernel: e.kernel(),
    })
}

/// Partition of states by identical utility columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffClasses {
    /// Classes in order of their first member; members ascending.
    pub classes: Vec<Vec<usize>>,
    /// Every class has at least two members.
    pub all_paired: bool,
}

impl PayoffClasses {
    /// Other members of `state`'s class, ascending.
    pub fn partners(&self, state: usize) -> Vec<usize> {
        self.classes
            .iter()
            .find(|c| c.contains(&state))
            .map(|c| c.iter().copied().filter(|&s| s != state).collect())
            .unwrap_or_default()
    }
}

pub fn payoff_equivalence_classes(p: &DecisionProblem) -> PayoffClasses {
    let u = p.utility();
    let columns: Vec<Vec<Scalar>> = (0..u.cols()).map(|j| u.column(j)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        match classes.iter_mut().find(|c| &columns[c[0]] == col) {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    let all_paired = classes.iter().all(|c| c.len() >= 2);
    PayoffClasses {
        classes,
        all_paired,
    }
}
