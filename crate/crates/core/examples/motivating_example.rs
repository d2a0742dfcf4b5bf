//! The binary treatment example: a decision maker who sees only the joint
//! distribution of outcome and treatment declines the policy that full
//! information would recommend.

use infodesign::causal::{
    build_treatment_problem, counterfactual_mean, marginal_structure, motivating_example,
    MarginalSpec,
};
use infodesign::model::InformationStructure;
use infodesign::numerics::{format_vector, ratio};
use infodesign::solver::{maxmin, worst_case};

pub fn run() {
    let m = motivating_example();
    let p = build_treatment_problem(&m).expect("the fixture satisfies every model condition");

    for a in 0..p.num_actions() {
        let mean = counterfactual_mean(&p, a, &m.mu).unwrap();
        println!("E[Y{a}] under full information: {mean}");
    }

    let spec = MarginalSpec::from_names(&m, &["Y", "T"]).unwrap();
    let marginal = marginal_structure(&m, &spec).unwrap();
    let full = InformationStructure::identity(p.num_states());

    for a in 0..p.num_actions() {
        let w = worst_case(&p, &marginal, &p.pure(a)).unwrap();
        println!(
            "worst case of E[Y{a}] given the (Y,T) marginal: {}",
            w.value
        );
    }

    let informed = maxmin(&p, &full).unwrap();
    let coarse = maxmin(&p, &marginal).unwrap();
    println!(
        "full information: choose {:?}, value {}",
        format_vector(informed.alpha_star.weights()),
        informed.value
    );
    println!(
        "(Y,T) disclosure: choose {:?}, value {}",
        format_vector(coarse.alpha_star.weights()),
        coarse.value
    );

    assert_eq!(informed.alpha_star.as_pure(), Some(0));
    assert_eq!(informed.value, ratio(1, 4));
    assert_eq!(coarse.alpha_star.as_pure(), Some(1));
    assert_eq!(coarse.value, ratio(1, 8));
}

#[allow(dead_code)]
fn main() {
    run();
}
