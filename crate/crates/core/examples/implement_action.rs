//! Implementing an action that is not optimal under the true distribution,
//! and detecting one that no experiment can implement.

use infodesign::design::implementing_structure;
use infodesign::model::{DecisionProblem, PriorPolytope};
use infodesign::numerics::{format_vector, int, ratio, Matrix};
use infodesign::solver::{maxmin, supporting_prior, worst_case, Support};
use infodesign::Error;

fn problem() -> DecisionProblem {
    // States come in payoff-equivalent pairs. Action "safe" pays 1 everywhere,
    // "bold" pays 3 in the first pair and 0 in the second, and "bad" is
    // strictly dominated by "safe".
    let utility = Matrix::from_rows(
        vec![
            vec![int(1), int(1), int(1), int(1)],
            vec![int(3), int(3), int(0), int(0)],
            vec![int(0), int(0), int(0), int(0)],
        ],
        4,
    )
    .unwrap();
    DecisionProblem::new(
        ["w0", "w1", "w2", "w3"].map(String::from).to_vec(),
        ["safe", "bold", "bad"].map(String::from).to_vec(),
        utility,
        vec![ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)],
        PriorPolytope::simplex(4),
    )
    .unwrap()
}

pub fn run() {
    let p = problem();
    let safe = p.pure(0);
    let bold = p.pure(1);

    // Under μ "bold" earns 3/2 > 1, so the researcher wants to implement "safe".
    let support = supporting_prior(&p, &safe).unwrap();
    let witness = support.witness().expect("safe is supported");
    println!(
        "supporting prior for safe: {:?}",
        format_vector(&witness.nu)
    );

    let imp = implementing_structure(&p, &safe).unwrap();
    println!("kernel dimension: {}", imp.structure.kernel().dim());
    println!("messages: {:?}", imp.structure.messages());
    let value = maxmin(&p, &imp.structure).unwrap().value;
    let safe_worst = worst_case(&p, &imp.structure, &safe).unwrap().value;
    let bold_worst = worst_case(&p, &imp.structure, &bold).unwrap().value;
    println!("maxmin {value}; worst case safe {safe_worst}, bold {bold_worst}");
    assert_eq!(value, safe_worst);
    assert!(bold_worst <= safe_worst);

    // "bad" is never a best response, so a Farkas certificate rules it out.
    match supporting_prior(&p, &p.pure(2)).unwrap() {
        Support::Unsupported(cert) => println!(
            "bad is not implementable; Farkas multipliers {:?} {:?}",
            format_vector(&cert.equalities),
            format_vector(&cert.inequalities)
        ),
        Support::Supported(_) => panic!("a dominated action has no supporting prior"),
    }
    assert!(matches!(
        implementing_structure(&p, &p.pure(2)),
        Err(Error::NotImplementable(_))
    ));
}

#[allow(dead_code)]
fn main() {
    run();
}
