//! The decision maker's maxmin problem and the implementability test.
//!
//! Identified sets are handled in kernel coordinates `ν = μ + Kz`, so the LPs
//! shrink with the kernel. `maxmin` dualizes the inner minimization so the
//! whole problem is one LP in `(α, y, w)`. The worst-case prior comes from a
//! second LP, `min_ν max_a ⟨a, ν⟩`, whose minimizers always pair with any
//! maxmin action to form a saddle point.

use num_traits::{One, Signed, Zero};

use crate::design::{implementing_structure, Implementation};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, DualCertificate, LinearProgram, LpOutcome, Sense};
use crate::model::{
    identified_set, payoff, Chart, DecisionProblem, InformationStructure, MixedAction,
};
use crate::numerics::{dot, Scalar};

/// Value of `min_{ν ∈ 𝒫(Σ,E)} ⟨α, ν⟩` and a minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub value: Scalar,
    pub nu: Vec<Scalar>,
}

pub fn worst_case(
    p: &DecisionProblem,
    e: &InformationStructure,
    alpha: &MixedAction,
) -> Result<WorstCase> {
    let chart = identified_set(p, e)?.chart();
    let c = p.mixed_utility(alpha)?;
    let lp = chart.program(Sense::Minimize, &c);
    let sol = solve_lp(&lp)?
        .into_optimal()
        .ok_or_else(|| Error::Internal("identified set LP is not optimal".into()))?;
    Ok(WorstCase {
        value: dot(&c, &chart.anchor) + sol.value,
        nu: chart.point(&sol.point),
    })
}

/// `(α*, ν*)` with `⟨α*, ν⟩ ≥ value = ⟨α*, ν*⟩ ≥ ⟨β, ν*⟩` over the identified set.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleCertificate {
    pub alpha_star: MixedAction,
    pub nu_star: Vec<Scalar>,
    pub value: Scalar,
}

impl SaddleCertificate {
    /// Re-checks every saddle inequality exactly; the minimization side is
    /// checked with one LP over the identified set.
    pub fn validate(&self, p: &DecisionProblem, e: &InformationStructure) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(format!("saddle certificate: {msg}")));
        let set = identified_set(p, e)?;
        if !set.contains(&self.nu_star) {
            return fail("nu* is outside the identified set".into());
        }
        let at_saddle = payoff(&self.alpha_star, &self.nu_star, p)?;
        if at_saddle != self.value {
            return fail(format!("<alpha*, nu*> = {at_saddle} != {}", self.value));
        }
        for (a, v) in p.action_payoffs(&self.nu_star)?.iter().enumerate() {
            if v > &self.value {
                return fail(format!(
                    "action {} earns {v} > {} at nu*",
                    p.actions()[a],
                    self.value
                ));
            }
        }
        let worst = worst_case(p, e, &self.alpha_star)?;
        if worst.value != self.value {
            return fail(format!(
                "min over identified set is {} != {}",
                worst.value, self.value
            ));
        }
        Ok(())
    }
}

pub fn maxmin(p: &DecisionProblem, e: &InformationStructure) -> Result<SaddleCertificate> {
    let chart = identified_set(p, e)?.chart();
    let (alpha_star, value) = maxmin_action(p, &chart)?;
    let (minmax, nu_star) = minmax_prior(p, &chart)?;
    if minmax != value {
        return Err(Error::Internal(format!(
            "maxmin {value} != minmax {minmax}"
        )));
    }
    Ok(SaddleCertificate {
        alpha_star,
        nu_star,
        value,
    })
}

/// `max_α min_{ν ∈ set} ⟨α, ν⟩` as one LP. With the set written as
/// `ν = μ + Kz`, `Gz ≤ h`, `Fz = f`, the inner minimum is
/// `⟨α, Uμ⟩ + max {f·y − h·w : Fᵀy − Gᵀw = KᵀUᵀα, w ≥ 0}`.
fn maxmin_action(p: &DecisionProblem, chart: &Chart) -> Result<(MixedAction, Scalar)> {
    let n_actions = p.num_actions();
    let n_eq = chart.eq_rhs.len();
    let n_le = chart.le_rhs.len();
    let n_vars = n_actions + n_eq + n_le;
    let at_anchor = p.action_payoffs(&chart.anchor)?;

    let mut objective = at_anchor;
    objective.extend(chart.eq_rhs.iter().cloned());
    objective.extend(chart.le_rhs.iter().map(|h| -h.clone()));
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for i in 0..n_eq {
        lp.set_free(n_actions + i);
    }
    let pulled: Vec<Vec<Scalar>> = p.utility().row_iter().map(|row| chart.pull(row)).collect();
    for j in 0..chart.dim() {
        let mut row = vec![Scalar::zero(); n_vars];
        for (a, u) in pulled.iter().enumerate() {
            row[a] = -u[j].clone();
        }
        for i in 0..n_eq {
            row[n_actions + i] = chart.eq[(i, j)].clone();
        }
        for k in 0..n_le {
            row[n_actions + n_eq + k] = -chart.le[(k, j)].clone();
        }
        lp.add_eq(row, Scalar::zero())?;
    }
    let mut simplex_row = vec![Scalar::zero(); n_vars];
    simplex_row[..n_actions].fill(Scalar::one());
    lp.add_eq(simplex_row, Scalar::one())?;

    let sol = solve_lp(&lp)?
        .into_optimal()
        .ok_or_else(|| Error::Internal("maxmin LP is not optimal".into()))?;
    let alpha = MixedAction::new(sol.point[..n_actions].to_vec())?;
    Ok((alpha, sol.value))
}

/// `min_{ν ∈ set} max_a ⟨a, ν⟩` and a minimizer.
fn minmax_prior(p: &DecisionProblem, chart: &Chart) -> Result<(Scalar, Vec<Scalar>)> {
    let k = chart.dim();
    // Variables: z (k, free) then t (free).
    let mut objective = vec![Scalar::zero(); k + 1];
    objective[k] = Scalar::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for j in 0..=k {
        lp.set_free(j);
    }
    let widen = |row: Vec<Scalar>, t: Scalar| {
        let mut r = row;
        r.push(t);
        r
    };
    for (row, b) in chart.le.row_iter().zip(&chart.le_rhs) {
        lp.add_le(widen(row.to_vec(), Scalar::zero()), b.clone())?;
    }
    for (row, b) in chart.eq.row_iter().zip(&chart.eq_rhs) {
        lp.add_eq(widen(row.to_vec(), Scalar::zero()), b.clone())?;
    }
    for row in p.utility().row_iter() {
        // ⟨u_a, μ⟩ + (Kᵀu_a)·z ≤ t
        lp.add_le(
            widen(chart.pull(row), -Scalar::one()),
            -dot(row, &chart.anchor),
        )?;
    }
    let sol = solve_lp(&lp)?
        .into_optimal()
        .ok_or_else(|| Error::Internal("minmax LP is not optimal".into()))?;
    let nu = chart.point(&sol.point[..k]);
    Ok((sol.value, nu))
}

/// `min_{ν ∈ 𝒫(Σ,E)} max_a ⟨a, ν⟩`, solved independently of [`maxmin`].
pub fn minmax_value(p: &DecisionProblem, e: &InformationStructure) -> Result<Scalar> {
    let chart = identified_set(p, e)?.chart();
    Ok(minmax_prior(p, &chart)?.0)
}

/// The pure actions maximizing `⟨a, ν⟩`, ascending.
pub fn best_responses(p: &DecisionProblem, nu: &[Scalar]) -> Result<Vec<usize>> {
    p.check_prior_len(nu)?;
    let payoffs = p.action_payoffs(nu)?;
    let best = payoffs.iter().max().expect("at least one action").clone();
    Ok((0..payoffs.len()).filter(|&a| payoffs[a] == best).collect())
}

/// True iff `α` attains `max_b ⟨b, ν⟩`, i.e. `α ∈ α*(ν)`.
pub fn is_best_response(p: &DecisionProblem, alpha: &MixedAction, nu: &[Scalar]) -> Result<bool> {
    let payoffs = p.action_payoffs(nu)?;
    let best = payoffs.iter().max().expect("at least one action");
    Ok(&payoff(alpha, nu, p)? == best)
}

/// A prior `ν ∈ 𝒫` under which `α` is a best response and `⟨α, ν⟩ ≤ ⟨α, μ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportingPrior {
    pub nu: Vec<Scalar>,
    /// `⟨α, μ⟩ − ⟨α, ν⟩ ≥ 0`.
    pub slack: Scalar,
}

impl SupportingPrior {
    pub fn validate(&self, p: &DecisionProblem, alpha: &MixedAction) -> Result<()> {
        if !p.priors().contains(&self.nu) {
            return Err(Error::Internal(
                "supporting prior is outside the prior set".into(),
            ));
        }
        if !is_best_response(p, alpha, &self.nu)? {
            return Err(Error::Internal(
                "action is not a best response at the supporting prior".into(),
            ));
        }
        let slack = payoff(alpha, p.mu(), p)? - payoff(alpha, &self.nu, p)?;
        if slack != self.slack || slack.is_negative() {
            return Err(Error::Internal(format!("bad supporting slack {slack}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Supported(SupportingPrior),
    /// Farkas certificate for [`supporting_program`].
    Unsupported(DualCertificate),
}

impl Support {
    pub fn witness(&self) -> Option<&SupportingPrior> {
        match self {
            Support::Supported(s) => Some(s),
            Support::Unsupported(_) => None,
        }
    }
}

/// The LP behind [`supporting_prior`]: maximize `⟨α, ν⟩` over `ν ∈ 𝒫` subject to
/// `⟨α − b, ν⟩ ≥ 0` for every pure `b` and `⟨α, ν⟩ ≤ ⟨α, μ⟩`.
pub fn supporting_program(p: &DecisionProblem, alpha: &MixedAction) -> Result<LinearProgram> {
    let ua = p.mixed_utility(alpha)?;
    let mut lp = p.priors().program(Sense::Maximize, ua.clone());
    for row in p.utility().row_iter() {
        let diff: Vec<Scalar> = ua.iter().zip(row).map(|(x, y)| x - y).collect();
        if diff.iter().all(Zero::is_zero) {
            continue;
        }
        lp.add_ge(diff, Scalar::zero())?;
    }
    let at_mu = dot(&ua, p.mu());
    lp.add_le(ua, at_mu)?;
    Ok(lp)
}

/// Among supporting priors, returns one maximizing `⟨α, ν⟩` (the decision
/// maker's payoff at the saddle), or a Farkas certificate that none exists.
pub fn supporting_prior(p: &DecisionProblem, alpha: &MixedAction) -> Result<Support> {
    let lp = supporting_program(p, alpha)?;
    match solve_lp(&lp)? {
        LpOutcome::Optimal(sol) => {
            let slack = payoff(alpha, p.mu(), p)? - &sol.value;
            Ok(Support::Supported(SupportingPrior {
                nu: sol.point,
                slack,
            }))
        }
        LpOutcome::Infeasible(cert) => Ok(Support::Unsupported(cert)),
        LpOutcome::Unbounded { .. } => Err(Error::Internal(
            "supporting LP over a simplex is unbounded".into(),
        )),
    }
}

pub fn is_implementable(p: &DecisionProblem, alpha: &MixedAction) -> Result<bool> {
    Ok(supporting_prior(p, alpha)?.witness().is_some())
}

/// Solution of the researcher's problem restricted to pure actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ResearcherOptimum {
    pub action: usize,
    pub supporting_prior: SupportingPrior,
    pub implementation: Implementation,
}

/// Best pure implementable action for researcher payoffs `v`, ties going to
/// the earlier action, with the structure that implements it.
pub fn researcher_optimum(p: &DecisionProblem, v: &[Scalar]) -> Result<ResearcherOptimum> {
    if v.len() != p.num_actions() {
        return Err(Error::DimensionMismatch(format!(
            "researcher payoffs over {} actions, problem has {}",
            v.len(),
            p.num_actions()
        )));
    }
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].cmp(&v[a]).then(a.cmp(&b)));
    for a in order {
        let alpha = p.pure(a);
        if let Support::Supported(supporting_prior) = supporting_prior(p, &alpha)? {
            let implementation = implementing_structure(p, &alpha)?;
            return Ok(ResearcherOptimum {
                action: a,
                supporting_prior,
                implementation,
            });
        }
    }
    Err(Error::NoImplementableAction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PriorPolytope;
    use crate::numerics::{int, ratio, Matrix};

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn simplex_problem(utility: Vec<Vec<Scalar>>, mu: Vec<Scalar>) -> DecisionProblem {
        let n = mu.len();
        let a = utility.len();
        DecisionProblem::new(
            labels("w", n),
            labels("a", a),
            Matrix::from_rows(utility, n).unwrap(),
            mu,
            PriorPolytope::simplex(n),
        )
        .unwrap()
    }

    #[test]
    fn constant_utility_maxmin() {
        let c = ratio(-5, 2);
        let p = simplex_problem(vec![vec![c.clone(); 3]; 3], vec![ratio(1, 3); 3]);
        let e = InformationStructure::single_message(3);
        let cert = maxmin(&p, &e).unwrap();
        assert_eq!(cert.value, c);
        cert.validate(&p, &e).unwrap();
        assert_eq!(best_responses(&p, p.mu()).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn full_information_worst_case_is_mu_payoff() {
        let p = simplex_problem(
            vec![vec![int(3), int(-1), int(0)], vec![int(0), int(2), int(1)]],
            vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)],
        );
        let e = InformationStructure::identity(3);
        for alpha in [p.pure(0), p.pure(1), MixedAction::uniform(2)] {
            let wc = worst_case(&p, &e, &alpha).unwrap();
            assert_eq!(wc.value, payoff(&alpha, p.mu(), &p).unwrap());
            assert_eq!(wc.nu, p.mu());
        }
    }

    #[test]
    fn matching_pennies_without_information() {
        // Two states, no information, simplex priors: the decision maker hedges.
        let p = simplex_problem(
            vec![vec![int(1), int(-1)], vec![int(-1), int(1)]],
            vec![ratio(1, 2), ratio(1, 2)],
        );
        let e = InformationStructure::single_message(2);
        let cert = maxmin(&p, &e).unwrap();
        assert_eq!(cert.value, int(0));
        assert_eq!(cert.alpha_star, MixedAction::uniform(2));
        cert.validate(&p, &e).unwrap();
        assert_eq!(minmax_value(&p, &e).unwrap(), int(0));
    }

    #[test]
    fn dominated_action_is_not_implementable() {
        let p = simplex_problem(
            vec![vec![int(2), int(0), int(1)], vec![int(1), int(-1), int(0)]],
            vec![ratio(1, 3); 3],
        );
        match supporting_prior(&p, &p.pure(1)).unwrap() {
            Support::Unsupported(cert) => {
                let lp = supporting_program(&p, &p.pure(1)).unwrap();
                LpOutcome::Infeasible(cert).verify(&lp).unwrap();
            }
            Support::Supported(s) => panic!("dominated action supported by {s:?}"),
        }
        assert!(!is_implementable(&p, &p.pure(1)).unwrap());
        assert!(is_implementable(&p, &p.pure(0)).unwrap());
    }

    #[test]
    fn best_response_at_mu_is_supported_by_mu_value() {
        let p = simplex_problem(
            vec![vec![int(3), int(-1)], vec![int(0), int(1)]],
            vec![ratio(1, 2), ratio(1, 2)],
        );
        let br = best_responses(&p, p.mu()).unwrap();
        assert_eq!(br, vec![0]);
        let s = supporting_prior(&p, &p.pure(0)).unwrap();
        let w = s.witness().unwrap();
        w.validate(&p, &p.pure(0)).unwrap();
        // μ itself qualifies, so the payoff-maximizing witness has zero slack.
        assert_eq!(w.slack, int(0));
    }

    #[test]
    fn researcher_constant_v_takes_first_implementable() {
        let p = simplex_problem(
            vec![
                vec![int(1), int(0), int(0)],
                vec![int(0), int(-1), int(-1)],
                vec![int(0), int(1), int(0)],
            ],
            vec![ratio(1, 3); 3],
        );
        // a1 is dominated by a0; a0 is implementable.
        let opt = researcher_optimum(&p, &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(opt.action, 0);
        let opt = researcher_optimum(&p, &[int(0), int(5), int(1)]).unwrap();
        assert_eq!(opt.action, 2);
        assert!(researcher_optimum(&p, &[int(1)]).is_err());
    }
}
