//! Exact linear programming over H-representation polytopes.
//!
//! Every outcome carries a certificate that can be re-checked against the raw
//! program with exact arithmetic: a dual vector for optimal solutions, a Farkas
//! vector for infeasible programs, and an improving ray for unbounded ones.

mod simplex;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{dot, Matrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `opt cᵀx  s.t.  A_eq x = b_eq,  A_le x ≤ b_le,  x_j ≥ l_j` (or `x_j` free).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Scalar>,
    pub eq_matrix: Matrix,
    pub eq_rhs: Vec<Scalar>,
    pub le_matrix: Matrix,
    pub le_rhs: Vec<Scalar>,
    /// `None` marks a free variable.
    pub lower_bounds: Vec<Option<Scalar>>,
}

impl LinearProgram {
    /// A program over `objective.len()` nonnegative variables with no constraints.
    pub fn new(sense: Sense, objective: Vec<Scalar>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            eq_matrix: Matrix::zeros(0, n),
            eq_rhs: Vec::new(),
            le_matrix: Matrix::zeros(0, n),
            le_rhs: Vec::new(),
            lower_bounds: vec![Some(Scalar::zero()); n],
        }
    }

    /// Zero objective; used for pure feasibility questions.
    pub fn feasibility(num_vars: usize) -> Self {
        LinearProgram::new(Sense::Minimize, vec![Scalar::zero(); num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_eq(&mut self, row: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        self.eq_matrix.push_row(row)?;
        self.eq_rhs.push(rhs);
        Ok(())
    }

    pub fn add_le(&mut self, row: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        self.le_matrix.push_row(row)?;
        self.le_rhs.push(rhs);
        Ok(())
    }

    /// `row · x ≥ rhs`, stored as `-row · x ≤ -rhs`.
    pub fn add_ge(&mut self, row: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        self.add_le(row.into_iter().map(|x| -x).collect(), -rhs)
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<Scalar>) {
        self.lower_bounds[var] = bound;
    }

    pub fn set_free(&mut self, var: usize) {
        self.set_lower_bound(var, None);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let bad = |msg: String| Err(Error::MalformedProgram(msg));
        if self.eq_matrix.cols() != n {
            return bad(format!(
                "equality matrix has {} columns, expected {n}",
                self.eq_matrix.cols()
            ));
        }
        if self.le_matrix.cols() != n {
            return bad(format!(
                "inequality matrix has {} columns, expected {n}",
                self.le_matrix.cols()
            ));
        }
        if self.eq_rhs.len() != self.eq_matrix.rows() {
            return bad(format!(
                "{} equality rows but {} right-hand sides",
                self.eq_matrix.rows(),
                self.eq_rhs.len()
            ));
        }
        if self.le_rhs.len() != self.le_matrix.rows() {
            return bad(format!(
                "{} inequality rows but {} right-hand sides",
                self.le_matrix.rows(),
                self.le_rhs.len()
            ));
        }
        if self.lower_bounds.len() != n {
            return bad(format!(
                "{} lower bounds for {n} variables",
                self.lower_bounds.len()
            ));
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Scalar]) -> Scalar {
        dot(&self.objective, x)
    }

    /// Exact feasibility check of a point; returns the first violated constraint.
    pub fn check_point(&self, x: &[Scalar]) -> std::result::Result<(), String> {
        if x.len() != self.num_vars() {
            return Err(format!(
                "point has length {}, expected {}",
                x.len(),
                self.num_vars()
            ));
        }
        for (i, (row, b)) in self.eq_matrix.row_iter().zip(&self.eq_rhs).enumerate() {
            let lhs = dot(row, x);
            if &lhs != b {
                return Err(format!("equality {i}: {lhs} != {b}"));
            }
        }
        for (i, (row, b)) in self.le_matrix.row_iter().zip(&self.le_rhs).enumerate() {
            let lhs = dot(row, x);
            if &lhs > b {
                return Err(format!("inequality {i}: {lhs} > {b}"));
            }
        }
        for (j, (xj, l)) in x.iter().zip(&self.lower_bounds).enumerate() {
            if let Some(l) = l {
                if xj < l {
                    return Err(format!("variable {j}: {xj} < lower bound {l}"));
                }
            }
        }
        Ok(())
    }

    /// `A_eqᵀ y + A_leᵀ z`.
    fn combine_rows(&self, cert: &DualCertificate) -> Vec<Scalar> {
        let mut g = self
            .eq_matrix
            .vec_mul(&cert.equalities)
            .expect("certificate length checked");
        let h = self
            .le_matrix
            .vec_mul(&cert.inequalities)
            .expect("certificate length checked");
        for (a, b) in g.iter_mut().zip(h) {
            *a += b;
        }
        g
    }

    fn check_certificate_shape(&self, cert: &DualCertificate) -> std::result::Result<(), String> {
        if cert.equalities.len() != self.eq_rhs.len()
            || cert.inequalities.len() != self.le_rhs.len()
        {
            return Err("certificate has the wrong number of multipliers".into());
        }
        Ok(())
    }
}

/// Multipliers for the equality rows and the `≤` rows of a program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualCertificate {
    pub equalities: Vec<Scalar>,
    pub inequalities: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSolution {
    pub point: Vec<Scalar>,
    pub value: Scalar,
    pub dual: DualCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(OptimalSolution),
    /// Farkas multipliers proving the constraint system has no solution.
    Infeasible(DualCertificate),
    /// A feasible point and a feasible direction along which the objective improves forever.
    Unbounded {
        point: Vec<Scalar>,
        ray: Vec<Scalar>,
    },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible(_) => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn optimal(&self) -> Option<&OptimalSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn into_optimal(self) -> Option<OptimalSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    /// Re-checks the outcome's certificate against `lp` with exact arithmetic.
    pub fn verify(&self, lp: &LinearProgram) -> std::result::Result<(), String> {
        match self {
            LpOutcome::Optimal(sol) => verify_optimal(lp, sol),
            LpOutcome::Infeasible(cert) => verify_farkas(lp, cert),
            LpOutcome::Unbounded { point, ray } => verify_ray(lp, point, ray),
        }
    }
}

/// Dual objective of a dual-feasible certificate:
/// `b_eq·y + b_le·z + Σ_{bounded j} l_j (c − A_eqᵀy − A_leᵀz)_j`.
pub fn dual_value(lp: &LinearProgram, cert: &DualCertificate) -> Scalar {
    let g = lp.combine_rows(cert);
    let mut value = dot(&lp.eq_rhs, &cert.equalities) + dot(&lp.le_rhs, &cert.inequalities);
    for ((c, gj), l) in lp.objective.iter().zip(&g).zip(&lp.lower_bounds) {
        if let Some(l) = l {
            value += l * (c - gj);
        }
    }
    value
}

fn verify_optimal(lp: &LinearProgram, sol: &OptimalSolution) -> std::result::Result<(), String> {
    lp.check_point(&sol.point)?;
    let primal = lp.objective_value(&sol.point);
    if primal != sol.value {
        return Err(format!("reported value {} but cᵀx = {primal}", sol.value));
    }
    lp.check_certificate_shape(&sol.dual)?;
    let sign_ok = |x: &Scalar| match lp.sense {
        Sense::Minimize => !x.is_positive(),
        Sense::Maximize => !x.is_negative(),
    };
    if let Some(i) = sol.dual.inequalities.iter().position(|z| !sign_ok(z)) {
        return Err(format!("inequality multiplier {i} has the wrong sign"));
    }
    let g = lp.combine_rows(&sol.dual);
    for (j, ((c, gj), l)) in lp
        .objective
        .iter()
        .zip(&g)
        .zip(&lp.lower_bounds)
        .enumerate()
    {
        let reduced = c - gj;
        let ok = match (l, lp.sense) {
            (None, _) => reduced.is_zero(),
            (Some(_), Sense::Minimize) => !reduced.is_negative(),
            (Some(_), Sense::Maximize) => !reduced.is_positive(),
        };
        if !ok {
            return Err(format!(
                "reduced cost {reduced} of variable {j} is not dual feasible"
            ));
        }
    }
    let dual = dual_value(lp, &sol.dual);
    if dual != primal {
        return Err(format!("duality gap: primal {primal}, dual {dual}"));
    }
    Ok(())
}

fn verify_farkas(lp: &LinearProgram, cert: &DualCertificate) -> std::result::Result<(), String> {
    lp.check_certificate_shape(cert)?;
    if cert.inequalities.iter().any(Signed::is_positive) {
        return Err("Farkas multiplier on a ≤ row must be nonpositive".into());
    }
    let g = lp.combine_rows(cert);
    let mut bound = Scalar::zero();
    for (j, (gj, l)) in g.iter().zip(&lp.lower_bounds).enumerate() {
        match l {
            None if !gj.is_zero() => {
                return Err(format!("free variable {j} has nonzero combination"))
            }
            Some(_) if gj.is_positive() => {
                return Err(format!("bounded variable {j} has positive combination"))
            }
            Some(l) => bound += gj * l,
            None => {}
        }
    }
    let rhs = dot(&lp.eq_rhs, &cert.equalities) + dot(&lp.le_rhs, &cert.inequalities);
    if rhs <= bound {
        return Err(format!("Farkas inequality not strict: {rhs} <= {bound}"));
    }
    Ok(())
}

fn verify_ray(
    lp: &LinearProgram,
    point: &[Scalar],
    ray: &[Scalar],
) -> std::result::Result<(), String> {
    lp.check_point(point)?;
    if ray.len() != lp.num_vars() {
        return Err("ray has the wrong length".into());
    }
    if lp
        .eq_matrix
        .mul_vec(ray)
        .expect("length checked")
        .iter()
        .any(|x| !x.is_zero())
    {
        return Err("ray leaves the equality constraints".into());
    }
    if lp
        .le_matrix
        .mul_vec(ray)
        .expect("length checked")
        .iter()
        .any(Signed::is_positive)
    {
        return Err("ray violates an inequality".into());
    }
    for (j, (d, l)) in ray.iter().zip(&lp.lower_bounds).enumerate() {
        if l.is_some() && d.is_negative() {
            return Err(format!("ray decreases bounded variable {j}"));
        }
    }
    let slope = lp.objective_value(ray);
    let improving = match lp.sense {
        Sense::Minimize => slope.is_negative(),
        Sense::Maximize => slope.is_positive(),
    };
    if !improving {
        return Err(format!("ray has non-improving objective slope {slope}"));
    }
    Ok(())
}

/// Solves `p` with the two-phase simplex method under Bland's rule.
pub fn solve_lp(p: &LinearProgram) -> Result<LpOutcome> {
    p.validate()?;
    Ok(simplex::solve(p))
}

/// Any feasible point of `p` (its objective is ignored), or a Farkas certificate.
pub fn feasible_point(p: &LinearProgram) -> Result<LpOutcome> {
    p.validate()?;
    let mut q = p.clone();
    q.objective = vec![Scalar::zero(); p.num_vars()];
    q.sense = Sense::Minimize;
    Ok(simplex::solve(&q))
}
