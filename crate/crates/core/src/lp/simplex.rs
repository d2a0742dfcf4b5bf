//! Dense two-phase tableau simplex over exact rationals.
//!
//! The program is brought to `min c̃ᵀx̃ s.t. Ãx̃ = b̃ ≥ 0, x̃ ≥ 0` by shifting
//! bounded variables, splitting free ones, adding one slack per `≤` row and
//! negating rows with a negative right-hand side. Every row gets an artificial
//! column; those columns start as the identity, so the objective row entries
//! under them are the negated simplex multipliers at every step.

use num_traits::{One, Signed, Zero};

use super::{DualCertificate, LinearProgram, LpOutcome, OptimalSolution, Sense};
use crate::numerics::Scalar;

#[derive(Debug, Clone, Copy)]
enum Column {
    /// `x_j - l_j`.
    Shifted(usize),
    Plus(usize),
    Minus(usize),
    Slack,
}

struct StandardForm {
    columns: Vec<Column>,
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    /// Whether each original row was negated.
    row_sign: Vec<bool>,
    /// Minimization costs per standard column.
    cost: Vec<Scalar>,
    num_eq: usize,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let num_eq = lp.eq_matrix.rows();
        let num_le = lp.le_matrix.rows();
        let flip = lp.sense == Sense::Maximize;

        let mut columns = Vec::new();
        for (j, l) in lp.lower_bounds.iter().enumerate() {
            match l {
                Some(_) => columns.push(Column::Shifted(j)),
                None => {
                    columns.push(Column::Plus(j));
                    columns.push(Column::Minus(j));
                }
            }
        }
        let structural = columns.len();
        columns.extend(std::iter::repeat_n(Column::Slack, num_le));

        let original_rows = lp
            .eq_matrix
            .row_iter()
            .zip(&lp.eq_rhs)
            .chain(lp.le_matrix.row_iter().zip(&lp.le_rhs));
        let mut rows = Vec::with_capacity(num_eq + num_le);
        let mut rhs = Vec::with_capacity(num_eq + num_le);
        let mut row_sign = Vec::with_capacity(num_eq + num_le);
        for (i, (row, b)) in original_rows.enumerate() {
            let mut std_row = Vec::with_capacity(columns.len());
            let mut b = b.clone();
            for (j, l) in lp.lower_bounds.iter().enumerate() {
                match l {
                    Some(l) => {
                        if !l.is_zero() {
                            b -= &row[j] * l;
                        }
                        std_row.push(row[j].clone());
                    }
                    None => {
                        std_row.push(row[j].clone());
                        std_row.push(-row[j].clone());
                    }
                }
            }
            for k in 0..num_le {
                std_row.push(if i >= num_eq && k == i - num_eq {
                    Scalar::one()
                } else {
                    Scalar::zero()
                });
            }
            let negate = b.is_negative();
            if negate {
                std_row.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
            }
            rows.push(std_row);
            rhs.push(b);
            row_sign.push(negate);
        }
        debug_assert!(rows.iter().all(|r| r.len() == structural + num_le));

        let cost = columns
            .iter()
            .map(|c| {
                let raw = match *c {
                    Column::Shifted(j) | Column::Plus(j) => lp.objective[j].clone(),
                    Column::Minus(j) => -lp.objective[j].clone(),
                    Column::Slack => Scalar::zero(),
                };
                if flip {
                    -raw
                } else {
                    raw
                }
            })
            .collect();
        StandardForm {
            columns,
            rows,
            rhs,
            row_sign,
            cost,
            num_eq,
        }
    }

    /// Maps a standard-form vector back to original variables. With `shift`, adds
    /// the lower bounds (points); without, returns a direction.
    fn to_original(&self, lp: &LinearProgram, x: &[Scalar], shift: bool) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = lp
            .lower_bounds
            .iter()
            .map(|l| match (l, shift) {
                (Some(l), true) => l.clone(),
                _ => Scalar::zero(),
            })
            .collect();
        for (c, v) in self.columns.iter().zip(x) {
            match *c {
                Column::Shifted(j) | Column::Plus(j) => out[j] += v,
                Column::Minus(j) => out[j] -= v,
                Column::Slack => {}
            }
        }
        out
    }

    /// Splits standard-row multipliers into original equality / inequality
    /// multipliers, undoing row negation.
    fn to_certificate(&self, y: Vec<Scalar>, negate_all: bool) -> DualCertificate {
        let mut signed: Vec<Scalar> = y
            .into_iter()
            .zip(&self.row_sign)
            .map(|(v, &neg)| if neg != negate_all { -v } else { v })
            .collect();
        let inequalities = signed.split_off(self.num_eq);
        DualCertificate {
            equalities: signed,
            inequalities,
        }
    }
}

struct Tableau {
    /// Constraint rows, each `width + 1` long (last entry is the right-hand side).
    t: Vec<Vec<Scalar>>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<Scalar>,
    basis: Vec<usize>,
    structural: usize,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let structural = sf.columns.len();
        let width = structural + m;
        let t = sf
            .rows
            .iter()
            .zip(&sf.rhs)
            .enumerate()
            .map(|(i, (row, b))| {
                let mut r = Vec::with_capacity(width + 1);
                r.extend(row.iter().cloned());
                r.extend((0..m).map(|k| {
                    if k == i {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                }));
                r.push(b.clone());
                r
            })
            .collect();
        Tableau {
            t,
            obj: vec![Scalar::zero(); width + 1],
            basis: (structural..width).collect(),
            structural,
        }
    }

    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    /// Sets the objective row to `c - c_B B⁻¹ A` for the given column costs.
    fn price(&mut self, cost: &[Scalar]) {
        let width = self.width();
        let mut obj: Vec<Scalar> = cost.to_vec();
        obj.push(Scalar::zero());
        for (row, &b) in self.t.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=width {
                if !row[j].is_zero() {
                    obj[j] -= cb * &row[j];
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        if !inv.is_one() {
            for x in self.t[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.t[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<Scalar>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nonzero {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.t[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column enters; among minimum-ratio
    /// rows the one whose basic variable has the lowest index leaves.
    fn run(&mut self, allowed: usize) -> Phase {
        let rhs = self.width();
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Scalar)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Phase::Unbounded(c),
            }
        }
    }

    fn basic_solution(&self) -> Vec<Scalar> {
        let rhs = self.width();
        let mut x = vec![Scalar::zero(); self.structural];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if b < self.structural {
                x[b] = row[rhs].clone();
            }
        }
        x
    }

    /// Simplex multipliers `c_B B⁻¹` recovered from the artificial columns.
    fn multipliers(&self, artificial_cost: &Scalar) -> Vec<Scalar> {
        (0..self.t.len())
            .map(|i| artificial_cost - &self.obj[self.structural + i])
            .collect()
    }

    /// Pivots basic artificials out on any nonzero structural entry; rows with
    /// no such entry are redundant and keep their artificial at level zero.
    fn expel_artificials(&mut self) {
        for r in 0..self.t.len() {
            if self.basis[r] < self.structural {
                continue;
            }
            if let Some(c) = (0..self.structural).find(|&j| !self.t[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> LpOutcome {
    let sf = StandardForm::build(lp);
    let m = sf.rows.len();
    let structural = sf.columns.len();
    let mut tab = Tableau::new(&sf);

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![Scalar::zero(); structural];
    phase1_cost.extend(std::iter::repeat_n(Scalar::one(), m));
    tab.price(&phase1_cost);
    match tab.run(structural + m) {
        Phase::Optimal => {}
        Phase::Unbounded(_) => unreachable!("phase 1 objective is bounded below by zero"),
    }
    let infeasibility = -tab.obj[tab.width()].clone();
    if infeasibility.is_positive() {
        let y = tab.multipliers(&Scalar::one());
        return LpOutcome::Infeasible(sf.to_certificate(y, false));
    }

    // Phase 2 on the original costs; artificials may no longer enter.
    tab.expel_artificials();
    let mut cost = sf.cost.clone();
    cost.extend(std::iter::repeat_n(Scalar::zero(), m));
    tab.price(&cost);
    let flip = lp.sense == Sense::Maximize;
    match tab.run(structural) {
        Phase::Optimal => {
            let x = tab.basic_solution();
            let point = sf.to_original(lp, &x, true);
            let value = lp.objective_value(&point);
            let y = tab.multipliers(&Scalar::zero());
            LpOutcome::Optimal(OptimalSolution {
                point,
                value,
                dual: sf.to_certificate(y, flip),
            })
        }
        Phase::Unbounded(c) => {
            let x = tab.basic_solution();
            let point = sf.to_original(lp, &x, true);
            let mut d = vec![Scalar::zero(); structural];
            d[c] = Scalar::one();
            for (row, &b) in tab.t.iter().zip(&tab.basis) {
                if b < structural {
                    d[b] = -row[c].clone();
                }
            }
            let ray = sf.to_original(lp, &d, false);
            LpOutcome::Unbounded { point, ray }
        }
    }
}
