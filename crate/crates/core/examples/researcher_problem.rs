//! A researcher with their own preferences over the decision maker's actions
//! picks the best implementable one and the structure that implements it.

use infodesign::causal::{build_treatment_problem, motivating_example};
use infodesign::numerics::{format_vector, int};
use infodesign::solver::{maxmin, researcher_optimum};

pub fn run() {
    let m = motivating_example();
    let p = build_treatment_problem(&m).unwrap();

    // A researcher who prefers the treatment to be adopted.
    let v = vec![int(0), int(1)];
    let best = researcher_optimum(&p, &v).unwrap();
    let structure = &best.implementation.structure;
    println!("implemented action: {}", p.actions()[best.action]);
    println!(
        "supporting prior: {:?}",
        format_vector(&best.supporting_prior.nu)
    );
    println!(
        "structure: {} messages, kernel dimension {}",
        structure.messages().len(),
        structure.kernel().dim()
    );
    let sol = maxmin(&p, structure).unwrap();
    println!("decision maker's maxmin value: {}", sol.value);
    assert_eq!(best.action, 1);

    // A researcher who prefers the status quo gets it with full information.
    let best = researcher_optimum(&p, &[int(1), int(0)]).unwrap();
    assert_eq!(best.action, 0);
    assert_eq!(best.implementation.structure.kernel().dim(), 0);
}

#[allow(dead_code)]
fn main() {
    run();
}
