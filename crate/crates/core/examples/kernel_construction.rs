//! Building an experiment whose kernel is a prescribed subspace of zero-sum
//! directions, then recovering that subspace from the matrix.

use infodesign::design::{kernel_to_experiment, KernelSpec};
use infodesign::numerics::{format_vector, int, sum};

pub fn run() {
    // Over four states, pool states 0, 1 and 2 while keeping state 3 apart.
    let spec = KernelSpec::span(
        4,
        vec![
            vec![int(1), int(-1), int(0), int(0)],
            vec![int(1), int(0), int(-1), int(0)],
        ],
    )
    .unwrap();
    let (structure, trace) = kernel_to_experiment(&spec).unwrap();

    println!("construction: {:?}", trace.kind);
    for w in &trace.complement_basis {
        println!("complement basis vector: {:?}", format_vector(w));
    }
    println!("normalizer: {}", trace.normalizer);
    for (label, row) in structure
        .messages()
        .iter()
        .zip(structure.experiment().row_iter())
    {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("{label}: {}", cells.join("  "));
    }

    for j in 0..structure.num_states() {
        assert_eq!(sum(&structure.experiment().column(j)), int(1));
    }
    // A fresh elimination, not the cached kernel.
    let recovered = structure.experiment().nullspace();
    assert_eq!(&recovered, spec.subspace());
    println!("kernel recovered exactly: dimension {}", recovered.dim());
}

#[allow(dead_code)]
fn main() {
    run();
}
