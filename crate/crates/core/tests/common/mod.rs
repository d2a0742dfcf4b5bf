//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use infodesign::causal::{Covariate, TreatmentModel};
use infodesign::model::{DecisionProblem, MixedAction, PriorPolytope};
use infodesign::numerics::{int, ratio, Matrix, Scalar};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Nonnegative integer weights normalized to a probability vector, with at
/// least one positive entry.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize, max_weight: i64) -> Vec<Scalar> {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_weight)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| ratio(x, total)).collect();
        }
    }
}

pub fn random_positive_distribution(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_weight: i64,
) -> Vec<Scalar> {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

pub fn random_mixed_action(rng: &mut ChaCha8Rng, n: usize) -> MixedAction {
    if rng.gen_bool(0.4) {
        MixedAction::pure(n, rng.gen_range(0..n))
    } else {
        MixedAction::new(random_distribution(rng, n, 4)).unwrap()
    }
}

/// A decision problem whose states come in payoff-equivalent pairs with
/// identical prior-constraint coefficients, so mass can move freely within a
/// pair. `μ` is drawn first and the `≤` constraints are made to hold at `μ`.
pub fn random_paired_problem(
    rng: &mut ChaCha8Rng,
    max_states: usize,
    max_actions: usize,
) -> DecisionProblem {
    let half = rng.gen_range(1..=max_states / 2);
    let n = 2 * half;
    let k = rng.gen_range(2..=max_actions);
    let base: Vec<Vec<i64>> = (0..k)
        .map(|_| (0..half).map(|_| rng.gen_range(-3..=4)).collect())
        .collect();
    let utility: Vec<Vec<Scalar>> = base
        .iter()
        .map(|row| row.iter().flat_map(|&v| [int(v), int(v)]).collect())
        .collect();
    let mu = random_distribution(rng, n, 4);
    let num_le = rng.gen_range(0..=2);
    let mut le = Matrix::zeros(0, n);
    let mut le_rhs = Vec::new();
    for _ in 0..num_le {
        let coeffs: Vec<i64> = (0..half).map(|_| rng.gen_range(-2..=3)).collect();
        let row: Vec<Scalar> = coeffs.iter().flat_map(|&v| [int(v), int(v)]).collect();
        let at_mu: Scalar = row.iter().zip(&mu).map(|(a, b)| a * b).sum();
        le_rhs.push(at_mu + ratio(rng.gen_range(0..=2), 4));
        le.push_row(row).unwrap();
    }
    let num_eq = rng.gen_range(0..=1);
    let mut eq = Matrix::zeros(0, n);
    let mut eq_rhs = Vec::new();
    for _ in 0..num_eq {
        let coeffs: Vec<i64> = (0..half).map(|_| rng.gen_range(-1..=2)).collect();
        let row: Vec<Scalar> = coeffs.iter().flat_map(|&v| [int(v), int(v)]).collect();
        let at_mu: Scalar = row.iter().zip(&mu).map(|(a, b)| a * b).sum();
        eq_rhs.push(at_mu);
        eq.push_row(row).unwrap();
    }
    let priors = PriorPolytope::new(n, eq, eq_rhs, le, le_rhs).unwrap();
    DecisionProblem::new(
        labels("w", n),
        labels("a", k),
        Matrix::from_rows(utility, n).unwrap(),
        mu,
        priors,
    )
    .unwrap()
}

/// A random treatment-effects model: `|𝒴|, |𝒳_j|, |𝒯| ∈ {2, 3}`, one or two
/// covariates, and an assignment ignoring one randomly chosen covariate.
pub fn random_treatment_model(rng: &mut ChaCha8Rng) -> TreatmentModel {
    let ny = rng.gen_range(2..=3);
    let nt = rng.gen_range(2..=3);
    let l = rng.gen_range(1..=2);
    let sizes: Vec<usize> = (0..l).map(|_| rng.gen_range(2..=3)).collect();
    let irrelevant = rng.gen_range(0..l);

    let mut pool: Vec<i64> = (-2..=5).collect();
    pool.shuffle(rng);
    let mut outcomes: Vec<i64> = pool[..ny].to_vec();
    outcomes.sort();

    let covariates: Vec<Covariate> = sizes
        .iter()
        .enumerate()
        .map(|(j, &s)| Covariate::new(&format!("X{}", j + 1), (0..s).map(|v| v.to_string())))
        .collect();
    let nx: usize = sizes.iter().product();
    let cell_values = |mut x: usize| {
        let mut out = vec![0; l];
        for j in (0..l).rev() {
            out[j] = x % sizes[j];
            x /= sizes[j];
        }
        out
    };
    // One assignment law per value of the relevant covariates.
    let mut laws: std::collections::HashMap<Vec<usize>, Vec<Scalar>> = Default::default();
    let assignment: Vec<Vec<Scalar>> = (0..nx)
        .map(|x| {
            let mut key = cell_values(x);
            key[irrelevant] = 0;
            laws.entry(key)
                .or_insert_with(|| random_positive_distribution(rng, nt, 4))
                .clone()
        })
        .collect();

    let px = random_distribution(rng, nx, 3);
    let mut mu = vec![Scalar::zero(); ny * nx * nt];
    for x in 0..nx {
        for t in 0..nt {
            let outcome_law = random_distribution(rng, ny, 3);
            for y in 0..ny {
                mu[(y * nx + x) * nt + t] = &px[x] * &assignment[x][t] * &outcome_law[y];
            }
        }
    }
    TreatmentModel::new(
        outcomes.into_iter().map(int).collect(),
        covariates,
        labels("t", nt),
        assignment,
        mu,
    )
    .unwrap()
}
