//! Constructive information design.
//!
//! Any subspace `D` of zero-sum directions is the kernel of some experiment;
//! [`kernel_to_experiment`] builds one. A supporting prior `ν` for an action,
//! pushed to the boundary of the prior set as seen from `μ`, yields a structure
//! with `ker E = span{ν − μ}` under which the action is worst-case optimal.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{feasible_point, solve_lp, LinearProgram, LpOutcome, Sense};
use crate::model::{
    kernel_of, message_labels, payoff, payoff_equivalence_classes, DecisionProblem,
    InformationStructure, MixedAction,
};
use crate::numerics::{dot, sum, Matrix, Scalar, Subspace};
use crate::solver::{
    is_best_response, maxmin, supporting_prior, worst_case, SaddleCertificate, Support,
};

/// A subspace of zero-sum directions, the admissible kernels of experiments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSpec {
    subspace: Subspace,
}

impl KernelSpec {
    pub fn new(subspace: Subspace) -> Result<Self> {
        for (index, v) in subspace.basis().iter().enumerate() {
            let s = sum(v);
            if !s.is_zero() {
                return Err(Error::ZeroSumViolation {
                    index,
                    sum: s.to_string(),
                });
            }
        }
        Ok(KernelSpec { subspace })
    }

    /// Span of the given directions; each must sum to zero.
    pub fn span(num_states: usize, directions: Vec<Vec<Scalar>>) -> Result<Self> {
        for (index, v) in directions.iter().enumerate() {
            let s = sum(v);
            if !s.is_zero() {
                return Err(Error::ZeroSumViolation {
                    index,
                    sum: s.to_string(),
                });
            }
        }
        KernelSpec::new(Subspace::span(num_states, directions)?)
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    /// `D = {0}`: the identity experiment.
    Identity,
    /// `D` is the whole zero-sum hyperplane: one message.
    SingleMessage,
    /// Two rows per complement basis vector.
    Generic,
}

/// Intermediate quantities of the generic construction. For the degenerate
/// kinds the vectors are empty and `matrix` is the returned experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionTrace {
    pub kind: ConstructionKind,
    /// Canonical basis `w¹..wˡ` of the orthogonal complement of `D`.
    pub complement_basis: Vec<Vec<Scalar>>,
    /// `xⁱ = 1 − min(wⁱ)`.
    pub shifts_x: Vec<Scalar>,
    /// `yⁱ = 1 + max(wⁱ)`.
    pub shifts_y: Vec<Scalar>,
    /// `λ = 1 / Σᵢ (xⁱ + yⁱ)`.
    pub normalizer: Scalar,
    pub matrix: Matrix,
}

/// Builds an experiment whose kernel is exactly `spec`.
///
/// Rows `λ(xⁱ𝟙 + wⁱ)` and `λ(yⁱ𝟙 − wⁱ)` lie in the complement of `D` (which
/// contains `𝟙`) and span it since `(xⁱ + yⁱ) wⁱ = yⁱ pⁱ − xⁱ qⁱ`. Their entries
/// are positive and each pair sums to `λ(xⁱ + yⁱ)𝟙`, so every column sums to 1.
pub fn kernel_to_experiment(
    spec: &KernelSpec,
) -> Result<(InformationStructure, ConstructionTrace)> {
    let d = spec.subspace();
    let n = d.ambient_dim();
    if n == 0 {
        return Err(Error::DimensionMismatch("kernel over zero states".into()));
    }
    let degenerate = |kind, e: InformationStructure| {
        let trace = ConstructionTrace {
            kind,
            complement_basis: Vec::new(),
            shifts_x: Vec::new(),
            shifts_y: Vec::new(),
            normalizer: Scalar::one(),
            matrix: e.experiment().clone(),
        };
        Ok((e, trace))
    };
    if d.dim() == 0 {
        return degenerate(
            ConstructionKind::Identity,
            InformationStructure::identity(n),
        );
    }
    if d.dim() == n - 1 {
        return degenerate(
            ConstructionKind::SingleMessage,
            InformationStructure::single_message(n),
        );
    }

    let complement = d.orthogonal_complement();
    let w = complement.basis().to_vec();
    let shifts_x: Vec<Scalar> = w
        .iter()
        .map(|v| Scalar::one() - v.iter().min().expect("nonempty"))
        .collect();
    let shifts_y: Vec<Scalar> = w
        .iter()
        .map(|v| Scalar::one() + v.iter().max().expect("nonempty"))
        .collect();
    let total = shifts_x
        .iter()
        .chain(&shifts_y)
        .fold(Scalar::zero(), |a, b| a + b);
    let normalizer = total.recip();

    let mut rows = Vec::with_capacity(2 * w.len());
    // Complement bases are often sparse; zero entries share one value per row.
    let shifted_row = |wi: &[Scalar], c: &Scalar, sign: bool| -> Vec<Scalar> {
        let flat = &normalizer * c;
        wi.iter()
            .map(|v| match (v.is_zero(), sign) {
                (true, _) => flat.clone(),
                (false, true) => &normalizer * (c + v),
                (false, false) => &normalizer * (c - v),
            })
            .collect()
    };
    for (wi, xi) in w.iter().zip(&shifts_x) {
        rows.push(shifted_row(wi, xi, true));
    }
    for (wi, yi) in w.iter().zip(&shifts_y) {
        rows.push(shifted_row(wi, yi, false));
    }
    let matrix = Matrix::from_rows(rows, n)?;

    // Entries are λ(xⁱ + wⁱ) ≥ λ and λ(yⁱ − wⁱ) ≥ λ, each pair of rows sums to
    // λ(xⁱ + yⁱ)𝟙, and Σᵢ λ(xⁱ + yⁱ) = 1, so columns are probability vectors.
    // Rows lie in span{𝟙, wⁱ} ⊆ D⊥, and (xⁱ + yⁱ)wⁱ = yⁱpⁱ − xⁱqⁱ puts every wⁱ
    // in the row space, so ker E = D. Only the inputs to that argument are
    // re-checked; eliminating on E itself costs far more.
    for wi in &w {
        if d.basis().iter().any(|v| !dot(wi, v).is_zero()) {
            return Err(Error::Internal(
                "complement basis is not orthogonal to the kernel".into(),
            ));
        }
    }
    let e = InformationStructure::from_construction(
        message_labels(matrix.rows()),
        matrix.clone(),
        d.clone(),
    );
    let trace = ConstructionTrace {
        kind: ConstructionKind::Generic,
        complement_basis: w,
        shifts_x,
        shifts_y,
        normalizer,
        matrix,
    };
    Ok((e, trace))
}

/// `max {λ : μ + λ(ν − μ) ∈ 𝒫}`, or `None` when unbounded (only if `ν = μ`).
pub fn extremality_bound(p: &DecisionProblem, nu: &[Scalar]) -> Result<Option<Scalar>> {
    p.check_prior_len(nu)?;
    let mu = p.mu();
    let dir: Vec<Scalar> = nu.iter().zip(mu).map(|(a, b)| a - b).collect();
    let priors = p.priors();
    let mut lp = LinearProgram::new(Sense::Maximize, vec![Scalar::one()]);
    lp.set_free(0);
    for (m, d) in mu.iter().zip(&dir) {
        // μ(ω) + λ d(ω) ≥ 0
        lp.add_le(vec![-d.clone()], m.clone())?;
    }
    lp.add_eq(vec![sum(&dir)], Scalar::zero())?;
    for (row, b) in priors.eq_matrix().row_iter().zip(priors.eq_rhs()) {
        lp.add_eq(vec![dot(row, &dir)], b - dot(row, mu))?;
    }
    for (row, b) in priors.le_matrix().row_iter().zip(priors.le_rhs()) {
        lp.add_le(vec![dot(row, &dir)], b - dot(row, mu))?;
    }
    match solve_lp(&lp)? {
        LpOutcome::Optimal(sol) => Ok(Some(sol.value)),
        LpOutcome::Unbounded { .. } => Ok(None),
        LpOutcome::Infeasible(_) => Err(Error::Internal("λ = 0 is always feasible".into())),
    }
}

/// Returns `ν′ ∈ 𝒫` with the same payoff for every action as `ν` and
/// `max {λ : μ + λ(ν′ − μ) ∈ 𝒫} ≤ 1`.
///
/// Tries, in order: `ν` itself when some `μ`-positive state already has no
/// mass or the ray is already extremal; moving the mass of each `μ`-positive
/// state (canonical order) onto a payoff-equivalent partner; and finally an LP
/// search for a payoff-equivalent prior that empties a `μ`-positive state.
pub fn boundary_adjust(p: &DecisionProblem, nu: &[Scalar]) -> Result<Vec<Scalar>> {
    p.check_prior_len(nu)?;
    if !p.priors().contains(nu) {
        return Err(Error::PriorNotAdmissible(
            "boundary_adjust needs ν ∈ 𝒫".into(),
        ));
    }
    let mu = p.mu();
    let positive: Vec<usize> = (0..mu.len()).filter(|&w| mu[w].is_positive()).collect();
    if positive.iter().any(|&w| nu[w].is_zero()) {
        return Ok(nu.to_vec());
    }
    if matches!(extremality_bound(p, nu)?, Some(bound) if bound <= Scalar::one()) {
        return Ok(nu.to_vec());
    }

    let classes = payoff_equivalence_classes(p);
    for &w in &positive {
        for partner in classes.partners(w) {
            let mut moved = nu.to_vec();
            let mass = std::mem::take(&mut moved[w]);
            moved[partner] += mass;
            if p.priors().contains(&moved) {
                return Ok(moved);
            }
        }
    }

    // Payoff-preserving rearrangements beyond single pairs.
    let payoffs = p.action_payoffs(nu)?;
    for &w in &positive {
        let mut lp = p.priors().feasibility_program();
        for (row, v) in p.utility().row_iter().zip(&payoffs) {
            lp.add_eq(row.to_vec(), v.clone())?;
        }
        let mut zero_w = vec![Scalar::zero(); mu.len()];
        zero_w[w] = Scalar::one();
        lp.add_eq(zero_w, Scalar::zero())?;
        if let LpOutcome::Optimal(sol) = feasible_point(&lp)? {
            return Ok(sol.point);
        }
    }
    Err(Error::AssumptionViolation(
        "no μ-positive state can be emptied without changing payoffs".into(),
    ))
}

/// A structure implementing an action, with the saddle point that proves it.
#[derive(Debug, Clone, PartialEq)]
pub struct Implementation {
    pub structure: InformationStructure,
    /// `None` when the structure is the identity chosen because `μ` supports the action.
    pub trace: Option<ConstructionTrace>,
    pub certificate: SaddleCertificate,
    /// The (boundary-adjusted) supporting prior `ν′`; `ker E = span{ν′ − μ}`.
    pub supporting_prior: Vec<Scalar>,
}

/// An almost fully informative structure under which `α` is worst-case optimal.
///
/// When `α` is already optimal at `μ` the identity structure is returned;
/// otherwise the supporting prior is boundary-adjusted and compiled into an
/// experiment with a one-dimensional kernel.
pub fn implementing_structure(p: &DecisionProblem, alpha: &MixedAction) -> Result<Implementation> {
    if is_best_response(p, alpha, p.mu())? {
        return full_information(p, alpha);
    }
    match supporting_prior(p, alpha)? {
        Support::Unsupported(cert) => Err(Error::NotImplementable(Box::new(cert))),
        Support::Supported(s) => implement_with_prior(p, alpha, &s.nu),
    }
}

fn full_information(p: &DecisionProblem, alpha: &MixedAction) -> Result<Implementation> {
    let structure = InformationStructure::identity(p.num_states());
    let certificate = SaddleCertificate {
        alpha_star: alpha.clone(),
        nu_star: p.mu().to_vec(),
        value: payoff(alpha, p.mu(), p)?,
    };
    certificate.validate(p, &structure)?;
    Ok(Implementation {
        structure,
        trace: None,
        certificate,
        supporting_prior: p.mu().to_vec(),
    })
}

/// Compiles a known supporting prior `ν` of `α` into an implementing structure.
pub fn implement_with_prior(
    p: &DecisionProblem,
    alpha: &MixedAction,
    nu: &[Scalar],
) -> Result<Implementation> {
    if !is_best_response(p, alpha, nu)? || payoff(alpha, nu, p)? > payoff(alpha, p.mu(), p)? {
        return Err(Error::Internal("prior does not support the action".into()));
    }
    let adjusted = boundary_adjust(p, nu)?;
    if adjusted == p.mu() {
        return full_information(p, alpha);
    }
    let direction: Vec<Scalar> = adjusted.iter().zip(p.mu()).map(|(a, b)| a - b).collect();
    let spec = KernelSpec::span(p.num_states(), vec![direction])?;
    let (structure, trace) = kernel_to_experiment(&spec)?;
    let certificate = SaddleCertificate {
        alpha_star: alpha.clone(),
        value: payoff(alpha, &adjusted, p)?,
        nu_star: adjusted.clone(),
    };
    certificate.validate(p, &structure)?;
    Ok(Implementation {
        structure,
        trace: Some(trace),
        certificate,
        supporting_prior: adjusted,
    })
}

/// Position of one structure relative to another in the kernel-inclusion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Informativeness {
    More,
    Less,
    Equal,
    Incomparable,
}

/// Compares `e1` against `e2`: `More` when `ker E1 ⊊ ker E2`.
pub fn robustly_more_informative(
    e1: &InformationStructure,
    e2: &InformationStructure,
) -> Result<Informativeness> {
    if e1.num_states() != e2.num_states() {
        return Err(Error::DimensionMismatch(format!(
            "structures over {} and {} states",
            e1.num_states(),
            e2.num_states()
        )));
    }
    let k1 = e1.kernel();
    let k2 = e2.kernel();
    Ok(match (k2.contains(&k1)?, k1.contains(&k2)?) {
        (true, true) => Informativeness::Equal,
        (true, false) => Informativeness::More,
        (false, true) => Informativeness::Less,
        (false, false) => Informativeness::Incomparable,
    })
}

/// Closed interval with optional infinite ends, for one-parameter feasibility.
#[derive(Debug, Clone)]
struct Interval {
    lo: Option<Scalar>,
    hi: Option<Scalar>,
    empty: bool,
}

impl Interval {
    fn everything() -> Self {
        Interval {
            lo: None,
            hi: None,
            empty: false,
        }
    }

    /// Intersects with `{λ : a + λc ≥ 0}`.
    fn at_least_zero(&mut self, a: &Scalar, c: &Scalar) {
        match c.cmp(&Scalar::zero()) {
            Ordering::Equal => {
                if a.is_negative() {
                    self.empty = true;
                }
            }
            Ordering::Greater => {
                let b = -(a / c);
                if self.lo.as_ref().is_none_or(|lo| &b > lo) {
                    self.lo = Some(b);
                }
            }
            Ordering::Less => {
                let b = -(a / c);
                if self.hi.as_ref().is_none_or(|hi| &b < hi) {
                    self.hi = Some(b);
                }
            }
        }
    }

    /// Intersects with `{λ : a + λc = 0}`.
    fn equal_zero(&mut self, a: &Scalar, c: &Scalar) {
        self.at_least_zero(a, c);
        self.at_least_zero(&-a, &-c);
    }

    fn has_nonzero_point(&self) -> bool {
        if self.empty {
            return false;
        }
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => lo <= hi && !(lo.is_zero() && hi.is_zero()),
            _ => true,
        }
    }
}

/// Whether `e` is maximal in the kernel order among structures implementing `α`.
///
/// Errors with `NotImplementing` unless `e` implements `α`.
pub fn is_maximally_informative(
    p: &DecisionProblem,
    e: &InformationStructure,
    alpha: &MixedAction,
) -> Result<bool> {
    let optimum = maxmin(p, e)?.value;
    let wc = worst_case(p, e, alpha)?.value;
    if wc != optimum {
        return Err(Error::NotImplementing {
            worst_case: wc.to_string(),
            optimum: optimum.to_string(),
        });
    }
    let kernel = kernel_of(e).subspace;
    if is_best_response(p, alpha, p.mu())? {
        return Ok(kernel.dim() == 0);
    }
    if kernel.dim() != 1 {
        return Ok(false);
    }
    let d = &kernel.basis()[0];
    let mu = p.mu();
    let mut feasible = Interval::everything();
    for (m, dw) in mu.iter().zip(d) {
        feasible.at_least_zero(m, dw);
    }
    feasible.equal_zero(&(sum(mu) - Scalar::one()), &sum(d));
    let priors = p.priors();
    for (row, b) in priors.eq_matrix().row_iter().zip(priors.eq_rhs()) {
        feasible.equal_zero(&(dot(row, mu) - b), &dot(row, d));
    }
    for (row, b) in priors.le_matrix().row_iter().zip(priors.le_rhs()) {
        feasible.at_least_zero(&(b - dot(row, mu)), &-dot(row, d));
    }
    let ua = p.mixed_utility(alpha)?;
    for row in p.utility().row_iter() {
        let diff: Vec<Scalar> = ua.iter().zip(row).map(|(x, y)| x - y).collect();
        feasible.at_least_zero(&dot(&diff, mu), &dot(&diff, d));
    }
    // ⟨α, μ⟩ − ⟨α, μ + λd⟩ = −λ⟨α, d⟩ ≥ 0
    feasible.at_least_zero(&Scalar::zero(), &-dot(&ua, d));
    Ok(feasible.has_nonzero_point())
}
