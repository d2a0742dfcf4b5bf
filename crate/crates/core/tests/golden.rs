//! Exact values of the binary treatment example.

use infodesign::causal::{
    build_observational_problem, build_treatment_problem, check_marginal_not_maximal,
    implement_treatment, marginal_structure, motivating_example, motivating_example_base,
    observed_distribution, MarginalSpec,
};
use infodesign::design::{implementing_structure, is_maximally_informative};
use infodesign::model::{
    payoff_equivalence_classes, push_forward, InformationStructure, MixedAction,
};
use infodesign::numerics::{parse_vector, ratio};
use infodesign::solver::{best_responses, maxmin, worst_case};

#[test]
fn observed_table_matches_fixture() {
    let m = motivating_example_base();
    let expected =
        parse_vector(&["0.40", "0.10", "0.05", "0.30", "0", "0", "0.05", "0.10"]).unwrap();
    assert_eq!(observed_distribution(), expected);
    assert_eq!(m.mu[0], ratio(2, 5));
    // The signal splits every cell evenly.
    let ext = motivating_example();
    for s in 0..ext.num_states() {
        let (y, x, t) = ext.decompose(s);
        assert_eq!(ext.mu[s], &m.mu[m.state_index(y, x / 2, t)] / ratio(2, 1));
    }
}

#[test]
fn yt_marginal_on_the_base_model() {
    let m = motivating_example_base();
    let e = marginal_structure(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).unwrap()).unwrap();
    assert_eq!(e.experiment().rank(), 4);
    assert_eq!(e.experiment().nullspace().dim(), 4);
    let disclosed = push_forward(&e, &m.mu).unwrap();
    let by_label: Vec<(&str, String)> = e
        .messages()
        .iter()
        .map(String::as_str)
        .zip(disclosed.iter().map(|x| x.to_string()))
        .collect();
    assert_eq!(
        by_label,
        [
            ("Y=0,T=0", "9/20".to_string()),
            ("Y=0,T=1", "2/5".into()),
            ("Y=1,T=0", "1/20".into()),
            ("Y=1,T=1", "1/10".into())
        ]
    );
    let report =
        check_marginal_not_maximal(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).unwrap())
            .unwrap();
    assert_eq!(report.kernel_dim, 4);
    assert!(report.not_maximal);
    let t_only =
        check_marginal_not_maximal(&m, &MarginalSpec::from_names(&m, &["T"]).unwrap()).unwrap();
    assert_eq!(t_only.kernel_dim, 6);
}

#[test]
fn values_agree_with_and_without_the_signal() {
    let base = motivating_example_base();
    let ext = motivating_example();
    let bp = build_observational_problem(&base).unwrap();
    let ep = build_treatment_problem(&ext).unwrap();
    let yt = |m| marginal_structure(m, &MarginalSpec::from_names(m, &["Y", "T"]).unwrap()).unwrap();
    let (be, ee) = (yt(&base), yt(&ext));
    for a in 0..2 {
        assert_eq!(
            worst_case(&bp, &be, &bp.pure(a)).unwrap().value,
            worst_case(&ep, &ee, &ep.pure(a)).unwrap().value
        );
    }
    assert_eq!(maxmin(&bp, &be).unwrap().value, ratio(1, 8));
    assert_eq!(
        maxmin(&bp, &InformationStructure::identity(8))
            .unwrap()
            .value,
        ratio(1, 4)
    );
    assert!(payoff_equivalence_classes(&ep).all_paired);
}

#[test]
fn implementing_treatment_in_the_example() {
    let m = motivating_example();
    let p = build_treatment_problem(&m).unwrap();
    assert_eq!(best_responses(&p, &m.mu).unwrap(), vec![0]);

    let treat = implementing_structure(&p, &p.pure(1)).unwrap();
    assert_eq!(treat.structure.kernel().dim(), 1);
    let value = maxmin(&p, &treat.structure).unwrap().value;
    assert_eq!(
        worst_case(&p, &treat.structure, &p.pure(1)).unwrap().value,
        value
    );
    assert!(worst_case(&p, &treat.structure, &p.pure(0)).unwrap().value <= value);
    assert_eq!(
        is_maximally_informative(&p, &treat.structure, &p.pure(1)),
        Ok(true)
    );

    let out = implement_treatment(&m, &p.pure(1)).unwrap();
    assert_eq!(out.floor, ratio(1, 8));
    let out = implement_treatment(&m, &p.pure(0)).unwrap();
    assert_eq!(out.floor, ratio(1, 4));

    let uniform = MixedAction::uniform(2);
    let out = implement_treatment(&m, &uniform).unwrap();
    assert_eq!(out.floor, ratio(1, 8));
    assert_eq!(best_responses(&p, &out.prior.nu).unwrap(), vec![0, 1]);
}
