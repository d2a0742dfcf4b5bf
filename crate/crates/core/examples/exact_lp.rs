//! Solving small linear programs exactly, with certificates for each outcome.

use infodesign::lp::{dual_value, solve_lp, LinearProgram, LpOutcome, Sense};
use infodesign::numerics::{format_vector, int, ratio};

pub fn run() {
    // max x + 2y  s.t.  x + y ≤ 4,  x + 3y ≤ 6,  x, y ≥ 0
    let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(2)]);
    lp.add_le(vec![int(1), int(1)], int(4)).unwrap();
    lp.add_le(vec![int(1), int(3)], int(6)).unwrap();
    let outcome = solve_lp(&lp).unwrap();
    outcome.verify(&lp).expect("certificates always re-check");
    let sol = outcome.optimal().unwrap();
    println!("optimum {} at {:?}", sol.value, format_vector(&sol.point));
    println!(
        "dual multipliers {:?}",
        format_vector(&sol.dual.inequalities)
    );
    assert_eq!(sol.value, int(5));
    assert_eq!(dual_value(&lp, &sol.dual), sol.value);

    // x + y = 1 and x + y ≥ 3 cannot both hold.
    let mut infeasible = LinearProgram::feasibility(2);
    infeasible.add_eq(vec![int(1), int(1)], int(1)).unwrap();
    infeasible.add_ge(vec![int(1), int(1)], int(3)).unwrap();
    let outcome = solve_lp(&infeasible).unwrap();
    outcome.verify(&infeasible).unwrap();
    match &outcome {
        LpOutcome::Infeasible(cert) => println!(
            "infeasible; Farkas multipliers {:?} {:?}",
            format_vector(&cert.equalities),
            format_vector(&cert.inequalities)
        ),
        other => panic!("expected infeasibility, got {other:?}"),
    }

    // max x − y with x − 2y ≤ 1/2 grows without bound along (2, 1).
    let mut unbounded = LinearProgram::new(Sense::Maximize, vec![int(1), int(-1)]);
    unbounded
        .add_le(vec![int(1), int(-2)], ratio(1, 2))
        .unwrap();
    let outcome = solve_lp(&unbounded).unwrap();
    outcome.verify(&unbounded).unwrap();
    match &outcome {
        LpOutcome::Unbounded { point, ray } => println!(
            "unbounded from {:?} along {:?}",
            format_vector(point),
            format_vector(ray)
        ),
        other => panic!("expected unboundedness, got {other:?}"),
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
