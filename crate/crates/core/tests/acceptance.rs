//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the report is always printed; exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{
    random_distribution, random_mixed_action, random_paired_problem, random_treatment_model, rng,
};
use infodesign::causal::{
    build_observational_problem, build_treatment_problem, check_marginal_not_maximal,
    counterfactual_mean, implement_treatment, marginal_structure, motivating_example,
    motivating_example_base, prior_from_marginals, worst_case_distribution, MarginalSpec, Variable,
};
use infodesign::design::{
    boundary_adjust, extremality_bound, implementing_structure, kernel_to_experiment, KernelSpec,
};
use infodesign::lp::{dual_value, solve_lp, LinearProgram, LpOutcome, Sense};
use infodesign::model::{
    identified_set, payoff, DecisionProblem, InformationStructure, MixedAction,
};
use infodesign::numerics::{int, ratio, sum, Scalar, Subspace};
use infodesign::solver::{maxmin, supporting_prior, worst_case, Support};
use infodesign::Error;
use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: Error) -> String {
    e.to_string()
}

fn full_information_means() -> Outcome {
    let m = motivating_example();
    let p = build_treatment_problem(&m).map_err(err)?;
    let e0 = counterfactual_mean(&p, 0, &m.mu).map_err(err)?;
    let e1 = counterfactual_mean(&p, 1, &m.mu).map_err(err)?;
    ensure!(e0 == ratio(1, 4), "E[Y0] = {e0}, expected 1/4");
    ensure!(e1 == ratio(1, 8), "E[Y1] = {e1}, expected 1/8");
    Ok(format!("E[Y0] = {e0}, E[Y1] = {e1}"))
}

fn marginal_worst_cases() -> Outcome {
    let m = motivating_example();
    let p = build_treatment_problem(&m).map_err(err)?;
    let e = marginal_structure(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).map_err(err)?)
        .map_err(err)?;
    let w0 = worst_case(&p, &e, &p.pure(0)).map_err(err)?.value;
    let w1 = worst_case(&p, &e, &p.pure(1)).map_err(err)?.value;
    ensure!(w0 == ratio(1, 16), "worst case a=0 is {w0}, expected 1/16");
    ensure!(w1 == ratio(1, 8), "worst case a=1 is {w1}, expected 1/8");

    // The tabulated worst-case prior, on the model without the signal.
    let base = motivating_example_base();
    let bp = build_observational_problem(&base).map_err(err)?;
    let be = marginal_structure(
        &base,
        &MarginalSpec::from_names(&base, &["Y", "T"]).map_err(err)?,
    )
    .map_err(err)?;
    let star = worst_case_distribution();
    ensure!(
        identified_set(&bp, &be).map_err(err)?.contains(&star),
        "tabulated worst-case prior is outside the identified set"
    );
    let at_star = payoff(&bp.pure(0), &star, &bp).map_err(err)?;
    let min0 = worst_case(&bp, &be, &bp.pure(0)).map_err(err)?.value;
    ensure!(
        at_star == min0 && min0 == ratio(1, 16),
        "tabulated prior gives {at_star}, minimum is {min0}"
    );
    Ok(format!(
        "worst cases {w0} and {w1}; tabulated prior feasible and attains {at_star}"
    ))
}

fn policy_reversal() -> Outcome {
    let m = motivating_example();
    let p = build_treatment_problem(&m).map_err(err)?;
    let e = marginal_structure(&m, &MarginalSpec::from_names(&m, &["Y", "T"]).map_err(err)?)
        .map_err(err)?;
    let coarse = maxmin(&p, &e).map_err(err)?;
    let full = maxmin(&p, &InformationStructure::identity(p.num_states())).map_err(err)?;
    coarse.validate(&p, &e).map_err(err)?;
    ensure!(
        coarse.alpha_star.as_pure() == Some(1),
        "marginal maxmin picks {:?}",
        coarse.alpha_star
    );
    ensure!(
        full.alpha_star.as_pure() == Some(0),
        "full-information maxmin picks {:?}",
        full.alpha_star
    );
    Ok(format!(
        "a=1 (value {}) under (Y,T), a=0 (value {}) under full information",
        coarse.value, full.value
    ))
}

fn supported_iff_implemented() -> Outcome {
    let mut rng = rng(4);
    let (mut problems, mut implemented, mut refused) = (0, 0, 0);
    while problems < 200 {
        let p = random_paired_problem(&mut rng, 8, 4);
        problems += 1;
        for _ in 0..3 {
            let alpha = random_mixed_action(&mut rng, p.num_actions());
            let supported = supporting_prior(&p, &alpha)
                .map_err(err)?
                .witness()
                .is_some();
            match implementing_structure(&p, &alpha) {
                Ok(imp) => {
                    ensure!(supported, "implemented an unsupported action");
                    let value = maxmin(&p, &imp.structure).map_err(err)?.value;
                    let wc = worst_case(&p, &imp.structure, &alpha).map_err(err)?.value;
                    ensure!(value == wc, "maxmin {value} differs from worst case {wc}");
                    imp.certificate.validate(&p, &imp.structure).map_err(err)?;
                    implemented += 1;
                }
                Err(Error::NotImplementable(_)) => {
                    ensure!(!supported, "supported action reported not implementable");
                    refused += 1;
                }
                Err(e) => return Err(format!("unexpected error: {e}")),
            }
        }
    }
    ensure!(
        implemented > 0 && refused > 0,
        "degenerate sample: {implemented} implemented, {refused} refused"
    );
    Ok(format!(
        "{problems} problems: {implemented} implemented, {refused} not implementable"
    ))
}

fn random_zero_sum_subspace(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Subspace {
    let vectors = (0..dim)
        .map(|_| {
            let mut v: Vec<Scalar> = (0..n - 1).map(|_| int(rng.gen_range(-3..=3))).collect();
            let s = sum(&v);
            v.push(-s);
            v
        })
        .collect();
    Subspace::span(n, vectors).expect("vectors have the ambient length")
}

fn kernel_round_trip() -> Outcome {
    let mut rng = rng(5);
    let mut dims = std::collections::BTreeSet::new();
    for i in 0..240 {
        let n = rng.gen_range(1..=10);
        // Cycle through the extremes as well as random dimensions.
        let dim = match i % 4 {
            0 => 0,
            1 => n - 1,
            _ => rng.gen_range(0..n),
        };
        let d = random_zero_sum_subspace(&mut rng, n, dim);
        let (e, _) =
            kernel_to_experiment(&KernelSpec::new(d.clone()).map_err(err)?).map_err(err)?;
        let matrix = e.experiment();
        for j in 0..n {
            let column = matrix.column(j);
            ensure!(
                column.iter().all(|x| !x.is_negative()),
                "negative entry in column {j}"
            );
            ensure!(sum(&column).is_one(), "column {j} sums to {}", sum(&column));
        }
        ensure!(
            matrix.nullspace() == d,
            "kernel differs from the requested subspace (n = {n})"
        );
        dims.insert((n, d.dim()));
    }
    Ok(format!(
        "240 subspaces, {} distinct (|Ω|, dim) pairs",
        dims.len()
    ))
}

fn boundary_contract() -> Outcome {
    let mut rng = rng(6);
    let mut checked = 0;
    for _ in 0..150 {
        let p = random_paired_problem(&mut rng, 8, 4);
        let mut candidates = Vec::new();
        for a in 0..p.num_actions() {
            if let Support::Supported(s) = supporting_prior(&p, &p.pure(a)).map_err(err)? {
                candidates.push(s.nu);
            }
        }
        // Midpoint of μ and a random vertex of 𝒫: typically interior.
        let c: Vec<Scalar> = (0..p.num_states())
            .map(|_| int(rng.gen_range(-3..=3)))
            .collect();
        if let LpOutcome::Optimal(sol) =
            solve_lp(&p.priors().program(Sense::Maximize, c)).map_err(err)?
        {
            candidates.push(
                sol.point
                    .iter()
                    .zip(p.mu())
                    .map(|(v, m)| (v + m) / int(2))
                    .collect(),
            );
        }
        for nu in candidates {
            let adjusted = boundary_adjust(&p, &nu).map_err(err)?;
            ensure!(p.priors().contains(&adjusted), "adjusted prior left 𝒫");
            for a in 0..p.num_actions() {
                let before = payoff(&p.pure(a), &nu, &p).map_err(err)?;
                let after = payoff(&p.pure(a), &adjusted, &p).map_err(err)?;
                ensure!(
                    before == after,
                    "payoff of action {a} moved from {before} to {after}"
                );
            }
            match extremality_bound(&p, &adjusted).map_err(err)? {
                Some(bound) => ensure!(bound <= Scalar::one(), "extremality bound {bound} > 1"),
                None => ensure!(adjusted == p.mu(), "unbounded ray away from μ"),
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} priors adjusted on 150 paired problems"))
}

fn random_marginals(rng: &mut ChaCha8Rng, ny: usize, nt: usize) -> Vec<Vec<Scalar>> {
    (0..nt).map(|_| random_distribution(rng, ny, 4)).collect()
}

fn universality() -> Outcome {
    let mut rng = rng(7);
    let mut implemented = 0;
    for _ in 0..100 {
        let m = random_treatment_model(&mut rng);
        let p = build_treatment_problem(&m).map_err(err)?;
        let k = p.num_actions();
        let mut actions: Vec<MixedAction> = (0..k).map(|a| p.pure(a)).collect();
        actions.extend((0..10).map(|_| {
            MixedAction::new(random_distribution(&mut rng, k, 4)).expect("valid weights")
        }));
        for alpha in &actions {
            let out = implement_treatment(&m, alpha)
                .map_err(|e| format!("{:?}: {e}", alpha.weights()))?;
            let imp = &out.implementation;
            ensure!(
                imp.structure.kernel().dim() <= 1,
                "kernel dimension {}",
                imp.structure.kernel().dim()
            );
            imp.certificate.validate(&p, &imp.structure).map_err(err)?;
            ensure!(
                imp.certificate.alpha_star == *alpha,
                "certificate is for a different action"
            );
            implemented += 1;
        }
    }
    Ok(format!(
        "{implemented} actions implemented across 100 models"
    ))
}

fn marginal_priors() -> Outcome {
    let mut rng = rng(8);
    let mut checked = 0;
    for _ in 0..100 {
        let m = random_treatment_model(&mut rng);
        let p = build_treatment_problem(&m).map_err(err)?;
        for _ in 0..10 {
            let pis = random_marginals(&mut rng, m.outcomes.len(), m.treatments.len());
            let prior = prior_from_marginals(&m, &pis).map_err(err)?;
            ensure!(
                p.priors().contains_via_lp(&prior.nu).map_err(err)?,
                "ν_π is outside 𝒫"
            );
            for (a, pi) in pis.iter().enumerate() {
                let expected: Scalar = m.outcomes.iter().zip(pi).map(|(y, q)| y * q).sum();
                let got = payoff(&p.pure(a), &prior.nu, &p).map_err(err)?;
                ensure!(
                    got == expected && prior.payoffs[a] == expected,
                    "payoff {got} for action {a}, expected {expected}"
                );
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} outcome-marginal priors on 100 models"))
}

fn nonempty_strict_subsets(vars: &[Variable]) -> Vec<Vec<Variable>> {
    (1..(1usize << vars.len()) - 1)
        .map(|mask| {
            (0..vars.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vars[i])
                .collect()
        })
        .collect()
}

fn marginal_kernels() -> Outcome {
    let mut rng = rng(9);
    let mut checked = 0;
    for _ in 0..100 {
        let m = random_treatment_model(&mut rng);
        let n = m.num_states();
        for subset in nonempty_strict_subsets(&m.variables()) {
            let spec = MarginalSpec::new(&m, &subset).map_err(err)?;
            let e = marginal_structure(&m, &spec).map_err(err)?;
            let dim = e.experiment().nullspace().dim();
            ensure!(2 * dim >= n && dim >= 4, "dim ker {dim} on {n} states");
            let report = check_marginal_not_maximal(&m, &spec).map_err(err)?;
            ensure!(
                report.kernel_dim == dim && report.not_maximal,
                "report disagrees: {report:?}"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} marginal structures, all with dim ker ≥ |Ω|/2 ≥ 4"
    ))
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=4);
    let sense = if rng.gen_bool(0.5) {
        Sense::Maximize
    } else {
        Sense::Minimize
    };
    let mut lp = LinearProgram::new(sense, (0..n).map(|_| int(rng.gen_range(-3..=3))).collect());
    for j in 0..n {
        if rng.gen_bool(0.2) {
            lp.set_free(j);
        }
    }
    for _ in 0..rng.gen_range(0..=4) {
        let row: Vec<Scalar> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        let rhs = ratio(rng.gen_range(-4..=6), rng.gen_range(1..=3));
        match rng.gen_range(0..3) {
            0 => lp.add_le(row, rhs),
            1 => lp.add_ge(row, rhs),
            _ => lp.add_eq(row, rhs),
        }
        .expect("row has the right length");
    }
    lp
}

fn lp_core() -> Outcome {
    let mut rng = rng(10);
    let (mut optimal, mut infeasible, mut unbounded) = (0, 0, 0);
    for _ in 0..600 {
        let lp = random_lp(&mut rng);
        let outcome = solve_lp(&lp).map_err(err)?;
        outcome.verify(&lp)?;
        ensure!(
            solve_lp(&lp).map_err(err)? == outcome,
            "repeated solve differs"
        );
        match &outcome {
            LpOutcome::Optimal(sol) => {
                ensure!(
                    lp.objective_value(&sol.point) == sol.value,
                    "reported value is not the objective at the point"
                );
                let dual = dual_value(&lp, &sol.dual);
                ensure!(dual == sol.value, "primal {} vs dual {dual}", sol.value);
                optimal += 1;
            }
            LpOutcome::Infeasible(_) => infeasible += 1,
            LpOutcome::Unbounded { .. } => unbounded += 1,
        }
    }
    ensure!(
        optimal > 0 && infeasible > 0 && unbounded > 0,
        "sample misses a status"
    );
    Ok(format!(
        "600 programs: {optimal} optimal, {infeasible} infeasible, {unbounded} unbounded"
    ))
}

fn nested_structures(
    rng: &mut ChaCha8Rng,
    p: &DecisionProblem,
) -> Result<Vec<InformationStructure>, String> {
    let n = p.num_states();
    let dim = rng.gen_range(0..n);
    let big = random_zero_sum_subspace(rng, n, dim);
    // Sub-subspaces: spans of prefixes of the canonical basis.
    let mut out = Vec::new();
    for k in 0..=big.dim() {
        let d = Subspace::span(n, big.basis()[..k].to_vec()).map_err(err)?;
        out.push(
            kernel_to_experiment(&KernelSpec::new(d).map_err(err)?)
                .map_err(err)?
                .0,
        );
    }
    Ok(out)
}

fn monotonicity() -> Outcome {
    let mut rng = rng(11);
    let mut pairs = 0;
    for _ in 0..100 {
        let p = random_paired_problem(&mut rng, 8, 4);
        let chain = nested_structures(&mut rng, &p)?;
        let values: Vec<Scalar> = chain
            .iter()
            .map(|e| maxmin(&p, e).map(|s| s.value))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        for w in values.windows(2) {
            ensure!(
                w[0] >= w[1],
                "value rose from {} to {} as the kernel grew",
                w[0],
                w[1]
            );
            pairs += 1;
        }
        let full = maxmin(&p, &InformationStructure::identity(p.num_states()))
            .map_err(err)?
            .value;
        let none = maxmin(&p, &InformationStructure::single_message(p.num_states()))
            .map_err(err)?
            .value;
        ensure!(
            full >= values[0] && values[values.len() - 1] >= none,
            "extremes out of order"
        );
    }
    Ok(format!("{pairs} nested pairs on 100 problems"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("full-information means", full_information_means),
        ("worst cases under (Y,T) disclosure", marginal_worst_cases),
        ("policy reversal", policy_reversal),
        ("supported iff implementable", supported_iff_implemented),
        ("kernel construction round trip", kernel_round_trip),
        ("boundary adjustment contract", boundary_contract),
        ("every treatment action implementable", universality),
        ("outcome-marginal priors", marginal_priors),
        ("marginal disclosure never maximal", marginal_kernels),
        ("exact LP core", lp_core),
        ("informativeness monotonicity", monotonicity),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(f))
                        .unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread"))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (result, secs))) in criteria.iter().zip(results).enumerate() {
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
