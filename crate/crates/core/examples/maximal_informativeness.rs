//! Comparing structures by their kernels and testing whether a structure is
//! as informative as possible while still implementing an action.

use infodesign::causal::{
    build_treatment_problem, marginal_structure, motivating_example, MarginalSpec,
};
use infodesign::design::{
    implementing_structure, is_maximally_informative, robustly_more_informative, Informativeness,
};
use infodesign::model::{kernel_of, InformationStructure};

pub fn run() {
    let m = motivating_example();
    let p = build_treatment_problem(&m).unwrap();
    let treat = p.pure(1);

    let marginal =
        marginal_structure(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).unwrap()).unwrap();
    let implemented = implementing_structure(&p, &treat).unwrap().structure;
    let nothing = InformationStructure::single_message(p.num_states());

    for (name, e) in [
        ("(Y,T) marginal", &marginal),
        ("constructed", &implemented),
        ("no information", &nothing),
    ] {
        let k = kernel_of(e);
        let maximal = is_maximally_informative(&p, e, &treat);
        println!(
            "{name}: kernel dimension {}, maximal for treating: {maximal:?}",
            k.subspace.dim()
        );
    }

    // The marginal implements treatment but throws away more than necessary.
    assert_eq!(is_maximally_informative(&p, &marginal, &treat), Ok(false));
    assert_eq!(is_maximally_informative(&p, &implemented, &treat), Ok(true));

    let order = robustly_more_informative(&implemented, &nothing).unwrap();
    println!("constructed vs no information: {order:?}");
    assert_eq!(order, Informativeness::More);
}

#[allow(dead_code)]
fn main() {
    run();
}
