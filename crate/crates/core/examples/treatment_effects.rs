//! Treatment choice from an observational study: every treatment, and every
//! randomization over treatments, can be implemented by disclosing outcome
//! marginals, while disclosing a coarse marginal is never maximal.

use infodesign::causal::{
    check_marginal_not_maximal, implement_treatment, Covariate, MarginalSpec, TreatmentModel,
};
use infodesign::model::MixedAction;
use infodesign::numerics::{format_vector, int, ratio, Scalar};

fn model() -> TreatmentModel {
    // Outcomes {0, 1, 2}; covariates age (young/old) and a coin the
    // assignment ignores; treatments drug/placebo assigned by age.
    let age_law = [ratio(3, 4), ratio(1, 4)];
    let assignment_by_age = [[ratio(1, 3), ratio(2, 3)], [ratio(2, 3), ratio(1, 3)]];
    let outcome_law = [
        [ratio(1, 2), ratio(1, 4), ratio(1, 4)],
        [ratio(1, 4), ratio(1, 2), ratio(1, 4)],
    ];
    let mut mu = Vec::new();
    let mut assignment = Vec::new();
    for law in &assignment_by_age {
        for _coin in 0..2 {
            assignment.push(law.to_vec());
        }
    }
    for y in 0..3 {
        for (p_age, law) in age_law.iter().zip(&assignment_by_age) {
            for _coin in 0..2 {
                for (p_t, outcomes) in law.iter().zip(&outcome_law) {
                    let mass: Scalar = p_age * ratio(1, 2) * p_t * &outcomes[y];
                    mu.push(mass);
                }
            }
        }
    }
    TreatmentModel::new(
        vec![int(0), int(1), int(2)],
        vec![
            Covariate::new("Age", ["young", "old"]),
            Covariate::new("Coin", ["heads", "tails"]),
        ],
        vec!["drug".into(), "placebo".into()],
        assignment,
        mu,
    )
    .unwrap()
}

pub fn run() {
    let m = model();
    println!(
        "{} states; irrelevant covariates {:?}",
        m.num_states(),
        m.irrelevant_covariates()
    );

    let mixtures = [
        MixedAction::pure(2, 0),
        MixedAction::pure(2, 1),
        MixedAction::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap(),
    ];
    for alpha in &mixtures {
        let out = implement_treatment(&m, alpha).unwrap();
        println!(
            "{:?}: floor {}, target {:?}, kernel dimension {}",
            format_vector(alpha.weights()),
            out.floor,
            format_vector(&out.target),
            out.implementation.structure.kernel().dim()
        );
        assert!(out.implementation.structure.kernel().dim() <= 1);
    }

    for names in [vec!["Y", "T"], vec!["Age"], vec!["Y", "Age", "T"]] {
        let spec = MarginalSpec::from_names(&m, &names).unwrap();
        let report = check_marginal_not_maximal(&m, &spec).unwrap();
        println!(
            "disclose {names:?}: kernel dimension {} (bound {}), never maximal: {}",
            report.kernel_dim, report.bound, report.not_maximal
        );
        assert!(report.not_maximal);
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
