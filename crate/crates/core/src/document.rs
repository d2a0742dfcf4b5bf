//! TOML documents for problems and information structures.
//!
//! Every number is a string holding an integer, a fraction `p/q` or a finite
//! decimal, so values survive a round trip exactly. Errors carry the line of
//! the offending field.
//!
//! A problem document holds either the generic fields
//!
//! ```toml
//! schema_version = "1"
//! states = ["w0", "w1"]
//! actions = ["a0", "a1"]
//! utility = [["1", "0"], ["0", "1"]]   # one row per action
//! mu = ["1/2", "1/2"]
//!
//! [prior_constraints]
//! inequalities = [{ coefficients = ["1", "0"], rhs = "3/4" }]
//! ```
//!
//! or a `[treatment]` table with `outcomes`, `covariates` (`{ name, values }`),
//! `treatments`, `assignment` (one row `P(·|x)` per covariate cell, last
//! covariate fastest), `mu` over `(y, x, t)` in lexicographic order, and an
//! optional `add_irrelevant_signal = true`.
//!
//! A structure document holds exactly one of `messages` + `matrix` (one row
//! per message), `[kernel] basis = [...]`, or `[marginal] variables = [...]`.
//! Emitted structures also carry `[declared_kernel]`, which is checked against
//! the matrix when read back.

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::causal::{
    add_irrelevant_signal, build_treatment_problem, marginal_structure, Covariate, MarginalSpec,
    TreatmentModel,
};
use crate::design::{kernel_to_experiment, KernelSpec};
use crate::error::{Error, Result};
use crate::model::{message_labels, DecisionProblem, InformationStructure, PriorPolytope};
use crate::numerics::{
    check_probability_vector, dot, format_vector, parse_scalar, Matrix, Scalar, Subspace,
};

pub const SCHEMA_VERSION: &str = "1";

/// A parsed problem document.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Generic(DecisionProblem),
    Treatment {
        model: TreatmentModel,
        problem: DecisionProblem,
    },
}

impl ProblemSource {
    pub fn problem(&self) -> &DecisionProblem {
        match self {
            ProblemSource::Generic(p) => p,
            ProblemSource::Treatment { problem, .. } => problem,
        }
    }

    pub fn treatment(&self) -> Option<&TreatmentModel> {
        match self {
            ProblemSource::Generic(_) => None,
            ProblemSource::Treatment { model, .. } => Some(model),
        }
    }
}

type Num = Spanned<String>;
type Row = Spanned<Vec<Num>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    schema_version: Spanned<String>,
    states: Option<Spanned<Vec<String>>>,
    actions: Option<Spanned<Vec<String>>>,
    utility: Option<Spanned<Vec<Row>>>,
    mu: Option<Row>,
    prior_constraints: Option<Spanned<RawConstraints>>,
    treatment: Option<Spanned<RawTreatment>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraints {
    #[serde(default)]
    equalities: Vec<Spanned<RawConstraint>>,
    #[serde(default)]
    inequalities: Vec<Spanned<RawConstraint>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    coefficients: Vec<Num>,
    rhs: Num,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTreatment {
    outcomes: Row,
    covariates: Vec<Spanned<RawCovariate>>,
    treatments: Spanned<Vec<String>>,
    assignment: Spanned<Vec<Row>>,
    mu: Row,
    #[serde(default)]
    add_irrelevant_signal: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCovariate {
    name: String,
    values: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    schema_version: Spanned<String>,
    messages: Option<Spanned<Vec<String>>>,
    matrix: Option<Spanned<Vec<Row>>>,
    kernel: Option<Spanned<RawKernel>>,
    marginal: Option<Spanned<RawMarginal>>,
    declared_kernel: Option<Spanned<RawKernel>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    basis: Vec<Row>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarginal {
    variables: Vec<String>,
}

/// Source text and name, for turning byte offsets into line numbers.
struct Context<'a> {
    text: &'a str,
    source_name: &'a str,
}

impl Context<'_> {
    fn line(&self, offset: usize) -> usize {
        let end = offset.min(self.text.len());
        self.text[..end].matches('\n').count() + 1
    }

    fn error(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Error {
        Error::Document {
            source_name: self.source_name.to_string(),
            line: self.line(span.start),
            message: message.into(),
        }
    }

    /// Re-anchors a core error at a document location.
    fn at<T>(&self, span: std::ops::Range<usize>, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Document { .. } => e,
            other => self.error(span, other.to_string()),
        })
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        toml::from_str(self.text).map_err(|e| {
            let line = e.span().map_or(1, |s| self.line(s.start));
            Error::Document {
                source_name: self.source_name.to_string(),
                line,
                message: e.message().to_string(),
            }
        })
    }

    fn number(&self, n: &Num) -> Result<Scalar> {
        self.at(n.span(), parse_scalar(n.get_ref()))
    }

    fn vector(&self, row: &Row, len: Option<usize>, what: &str) -> Result<Vec<Scalar>> {
        if let Some(len) = len {
            if row.get_ref().len() != len {
                return Err(self.error(
                    row.span(),
                    format!("{what} has {} entries, expected {len}", row.get_ref().len()),
                ));
            }
        }
        row.get_ref().iter().map(|n| self.number(n)).collect()
    }

    fn schema(&self, v: &Spanned<String>) -> Result<()> {
        if v.get_ref() != SCHEMA_VERSION {
            return Err(self.error(
                v.span(),
                format!(
                    "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                    v.get_ref()
                ),
            ));
        }
        Ok(())
    }

    fn labels(&self, v: &Spanned<Vec<String>>, what: &str) -> Result<Vec<String>> {
        let labels = v.get_ref();
        if labels.is_empty() {
            return Err(self.error(v.span(), format!("{what} must not be empty")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(self.error(v.span(), format!("duplicate {what} label {l:?}")));
            }
        }
        Ok(labels.clone())
    }
}

pub fn parse_problem(text: &str, source_name: &str) -> Result<ProblemSource> {
    let cx = Context { text, source_name };
    let raw: RawProblem = cx.parse()?;
    cx.schema(&raw.schema_version)?;
    let generic = [
        raw.states.as_ref().map(Spanned::span),
        raw.actions.as_ref().map(Spanned::span),
        raw.utility.as_ref().map(Spanned::span),
        raw.mu.as_ref().map(Spanned::span),
        raw.prior_constraints.as_ref().map(Spanned::span),
    ];
    match (&raw.treatment, generic.iter().flatten().next()) {
        (Some(t), Some(span)) => Err(cx.error(
            span.start.max(t.span().start)..span.end,
            "a problem has either generic fields or a [treatment] table, not both",
        )),
        (Some(t), None) => parse_treatment(&cx, t),
        (None, _) => parse_generic(&cx, &raw),
    }
}

fn parse_generic(cx: &Context, raw: &RawProblem) -> Result<ProblemSource> {
    let whole = 0..cx.text.len();
    let missing = |field: &str| cx.error(whole.clone(), format!("missing field `{field}`"));
    let states_raw = raw.states.as_ref().ok_or_else(|| missing("states"))?;
    let actions_raw = raw.actions.as_ref().ok_or_else(|| missing("actions"))?;
    let utility_raw = raw.utility.as_ref().ok_or_else(|| missing("utility"))?;
    let mu_raw = raw.mu.as_ref().ok_or_else(|| missing("mu"))?;

    let states = cx.labels(states_raw, "state")?;
    let actions = cx.labels(actions_raw, "action")?;
    let n = states.len();
    if utility_raw.get_ref().len() != actions.len() {
        return Err(cx.error(
            utility_raw.span(),
            format!(
                "utility has {} rows, expected one per action ({})",
                utility_raw.get_ref().len(),
                actions.len()
            ),
        ));
    }
    let rows = utility_raw
        .get_ref()
        .iter()
        .enumerate()
        .map(|(a, row)| cx.vector(row, Some(n), &format!("utility row for {}", actions[a])))
        .collect::<Result<Vec<_>>>()?;
    let utility = Matrix::from_rows(rows, n)?;
    let mu = cx.vector(mu_raw, Some(n), "mu")?;
    cx.at(mu_raw.span(), check_probability_vector(&mu, n, "mu"))?;

    let (priors, constraints_span) = match &raw.prior_constraints {
        None => (PriorPolytope::simplex(n), 0..cx.text.len()),
        Some(c) => {
            let mut eq = Matrix::zeros(0, n);
            let mut eq_rhs = Vec::new();
            let mut le = Matrix::zeros(0, n);
            let mut le_rhs = Vec::new();
            for (list, m, rhs, is_eq) in [
                (&c.get_ref().equalities, &mut eq, &mut eq_rhs, true),
                (&c.get_ref().inequalities, &mut le, &mut le_rhs, false),
            ] {
                for row in list {
                    let r = row.get_ref();
                    if r.coefficients.len() != n {
                        return Err(cx.error(
                            row.span(),
                            format!(
                                "constraint has {} coefficients, expected {n}",
                                r.coefficients.len()
                            ),
                        ));
                    }
                    let coeffs = r
                        .coefficients
                        .iter()
                        .map(|x| cx.number(x))
                        .collect::<Result<Vec<_>>>()?;
                    let b = cx.number(&r.rhs)?;
                    let at_mu = dot(&coeffs, &mu);
                    let holds = if is_eq { at_mu == b } else { at_mu <= b };
                    if !holds {
                        return Err(cx.error(
                            row.span(),
                            format!("mu violates this constraint: lhs is {at_mu}, rhs is {b}"),
                        ));
                    }
                    m.push_row(coeffs)?;
                    rhs.push(b);
                }
            }
            let polytope = cx.at(c.span(), PriorPolytope::new(n, eq, eq_rhs, le, le_rhs))?;
            (polytope, c.span())
        }
    };
    let problem =
        DecisionProblem::new(states, actions, utility, mu, priors).map_err(|e| match e {
            Error::PriorNotAdmissible(_) => cx.error(constraints_span.clone(), e.to_string()),
            other => cx.error(mu_raw.span(), other.to_string()),
        })?;
    Ok(ProblemSource::Generic(problem))
}

fn parse_treatment(cx: &Context, t: &Spanned<RawTreatment>) -> Result<ProblemSource> {
    let raw = t.get_ref();
    let outcomes = cx.vector(&raw.outcomes, None, "outcomes")?;
    let covariates: Vec<Covariate> = raw
        .covariates
        .iter()
        .map(|c| Covariate::new(&c.get_ref().name, c.get_ref().values.iter().cloned()))
        .collect();
    let treatments = cx.labels(&raw.treatments, "treatment")?;
    let assignment = raw
        .assignment
        .get_ref()
        .iter()
        .map(|row| cx.vector(row, Some(treatments.len()), "assignment row"))
        .collect::<Result<Vec<_>>>()?;
    let mu = cx.vector(&raw.mu, None, "mu")?;
    let model =
        TreatmentModel::new(outcomes, covariates, treatments, assignment, mu).map_err(|e| {
            let span = match &e {
                Error::InteriorSupportViolation { .. } => raw.assignment.span(),
                Error::AssignmentMismatch(_) | Error::NotProbability(_) => raw.mu.span(),
                Error::DimensionMismatch(msg) if msg.starts_with("mu") => raw.mu.span(),
                Error::DimensionMismatch(_) => raw.assignment.span(),
                _ => t.span(),
            };
            cx.error(span, e.to_string())
        })?;
    let model = if raw.add_irrelevant_signal {
        cx.at(t.span(), add_irrelevant_signal(&model))?
    } else {
        model
    };
    let problem = build_treatment_problem(&model).map_err(|e| match e {
        Error::NoIrrelevantCovariate => cx.error(
            t.span(),
            format!("{e} (set `add_irrelevant_signal = true` to append one)"),
        ),
        other => cx.error(t.span(), other.to_string()),
    })?;
    Ok(ProblemSource::Treatment { model, problem })
}

pub fn parse_structure(
    text: &str,
    source_name: &str,
    problem: &ProblemSource,
) -> Result<InformationStructure> {
    let cx = Context { text, source_name };
    let raw: RawStructure = cx.parse()?;
    cx.schema(&raw.schema_version)?;
    let n = problem.problem().num_states();
    let given: Vec<std::ops::Range<usize>> = [
        raw.matrix.as_ref().map(Spanned::span),
        raw.kernel.as_ref().map(Spanned::span),
        raw.marginal.as_ref().map(Spanned::span),
    ]
    .into_iter()
    .flatten()
    .collect();
    match given.as_slice() {
        [] => return Err(cx.error(0..0, "expected one of `matrix`, [kernel] or [marginal]")),
        [_] => {}
        [_, second, ..] => {
            return Err(cx.error(
                second.clone(),
                "a structure has exactly one of `matrix`, [kernel] or [marginal]",
            ))
        }
    }
    if raw.matrix.is_none() {
        if let Some(m) = &raw.messages {
            return Err(cx.error(m.span(), "`messages` only accompany `matrix`"));
        }
        if let Some(d) = &raw.declared_kernel {
            return Err(cx.error(d.span(), "[declared_kernel] only accompanies `matrix`"));
        }
    }

    if let Some(matrix_raw) = &raw.matrix {
        let rows = matrix_raw
            .get_ref()
            .iter()
            .enumerate()
            .map(|(i, row)| cx.vector(row, Some(n), &format!("matrix row {i}")))
            .collect::<Result<Vec<_>>>()?;
        let messages = match &raw.messages {
            Some(m) => cx.labels(m, "message")?,
            None => message_labels(rows.len()),
        };
        let matrix = cx.at(matrix_raw.span(), Matrix::from_rows(rows, n))?;
        let e = cx.at(
            matrix_raw.span(),
            InformationStructure::new(messages, matrix),
        )?;
        if let Some(declared) = &raw.declared_kernel {
            let basis = kernel_basis(&cx, declared.get_ref(), n)?;
            let declared_space = cx.at(declared.span(), Subspace::span(n, basis))?;
            if declared_space != e.kernel() {
                return Err(cx.error(
                    declared.span(),
                    format!(
                        "declared kernel (dimension {}) differs from the kernel of the matrix (dimension {})",
                        declared_space.dim(),
                        e.kernel().dim()
                    ),
                ));
            }
        }
        return Ok(e);
    }
    if let Some(k) = &raw.kernel {
        let basis = kernel_basis(&cx, k.get_ref(), n)?;
        let spec = cx.at(k.span(), KernelSpec::span(n, basis))?;
        return Ok(cx.at(k.span(), kernel_to_experiment(&spec))?.0);
    }
    let marginal = raw.marginal.as_ref().expect("exactly one representation");
    let model = problem.treatment().ok_or_else(|| {
        cx.error(
            marginal.span(),
            "[marginal] structures need a treatment problem",
        )
    })?;
    let spec = cx.at(
        marginal.span(),
        MarginalSpec::from_names(model, &marginal.get_ref().variables),
    )?;
    cx.at(marginal.span(), marginal_structure(model, &spec))
}

fn kernel_basis(cx: &Context, k: &RawKernel, n: usize) -> Result<Vec<Vec<Scalar>>> {
    k.basis
        .iter()
        .enumerate()
        .map(|(i, row)| cx.vector(row, Some(n), &format!("kernel vector {i}")))
        .collect()
}

#[derive(Serialize)]
struct StructureOut {
    schema_version: String,
    messages: Vec<String>,
    matrix: Vec<Vec<String>>,
    declared_kernel: KernelOut,
}

#[derive(Serialize)]
struct KernelOut {
    basis: Vec<Vec<String>>,
}

/// Serializes `e` with its matrix and its canonical kernel basis.
pub fn structure_document(e: &InformationStructure) -> String {
    let out = StructureOut {
        schema_version: SCHEMA_VERSION.into(),
        messages: e.messages().to_vec(),
        matrix: e.experiment().row_iter().map(format_vector).collect(),
        declared_kernel: KernelOut {
            basis: e
                .kernel()
                .basis()
                .iter()
                .map(|v| format_vector(v))
                .collect(),
        },
    };
    toml::to_string(&out).expect("structure documents serialize")
}

#[derive(Serialize)]
struct ProblemOut {
    schema_version: String,
    states: Vec<String>,
    actions: Vec<String>,
    utility: Vec<Vec<String>>,
    mu: Vec<String>,
    prior_constraints: ConstraintsOut,
}

#[derive(Serialize)]
struct ConstraintsOut {
    equalities: Vec<ConstraintOut>,
    inequalities: Vec<ConstraintOut>,
}

#[derive(Serialize)]
struct ConstraintOut {
    coefficients: Vec<String>,
    rhs: String,
}

/// Serializes a decision problem in the generic form.
pub fn problem_document(p: &DecisionProblem) -> String {
    let rows = |m: &Matrix, rhs: &[Scalar]| -> Vec<ConstraintOut> {
        m.row_iter()
            .zip(rhs)
            .map(|(row, b)| ConstraintOut {
                coefficients: format_vector(row),
                rhs: b.to_string(),
            })
            .collect()
    };
    let priors = p.priors();
    let out = ProblemOut {
        schema_version: SCHEMA_VERSION.into(),
        states: p.states().to_vec(),
        actions: p.actions().to_vec(),
        utility: p.utility().row_iter().map(format_vector).collect(),
        mu: format_vector(p.mu()),
        prior_constraints: ConstraintsOut {
            equalities: rows(priors.eq_matrix(), priors.eq_rhs()),
            inequalities: rows(priors.le_matrix(), priors.le_rhs()),
        },
    };
    toml::to_string(&out).expect("problem documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    const GENERIC: &str = r#"
schema_version = "1"
states = ["w0", "w1"]
actions = ["a0", "a1"]
utility = [
  ["1", "0"],
  ["0", "1"],
]
mu = ["0.25", "3/4"]

[prior_constraints]
inequalities = [{ coefficients = ["1", "0"], rhs = "1/2" }]
"#;

    #[test]
    fn generic_problem_parses_exactly() {
        let src = parse_problem(GENERIC, "p.toml").unwrap();
        let p = src.problem();
        assert_eq!(p.mu(), &[ratio(1, 4), ratio(3, 4)]);
        assert_eq!(p.priors().le_rhs(), &[ratio(1, 2)]);
        let again = parse_problem(&problem_document(p), "q.toml").unwrap();
        assert_eq!(again.problem(), p);
    }

    #[test]
    fn errors_point_at_the_offending_line() {
        let bad = GENERIC.replace(r#"["0", "1"],"#, r#"["0", "1", "2"],"#);
        match parse_problem(&bad, "p.toml") {
            Err(Error::Document { line, message, .. }) => {
                assert_eq!(line, 7, "{message}");
                assert!(message.contains("expected 2"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = GENERIC.replace("0.25", "0.3");
        assert!(matches!(
            parse_problem(&bad, "p.toml"),
            Err(Error::Document { line: 9, .. })
        ));
        let bad = GENERIC.replace("3/4", "1e-3");
        assert!(matches!(
            parse_problem(&bad, "p.toml"),
            Err(Error::Document { line: 9, .. })
        ));
        let bad = GENERIC.replace("rhs = \"1/2\"", "rhs = \"1/8\"");
        let err = parse_problem(&bad, "p.toml");
        assert!(
            matches!(err, Err(Error::Document { line: 12, .. })),
            "{err:?}"
        );
    }

    #[test]
    fn structures_round_trip_with_declared_kernel() {
        let src = parse_problem(GENERIC, "p.toml").unwrap();
        let text = "schema_version = \"1\"\n[kernel]\nbasis = [[\"1\", \"-1\"]]\n";
        let e = parse_structure(text, "s.toml", &src).unwrap();
        assert_eq!(e.kernel().dim(), 1);
        let emitted = structure_document(&e);
        let back = parse_structure(&emitted, "t.toml", &src).unwrap();
        assert_eq!(back.kernel(), e.kernel());
        assert_eq!(back.experiment(), e.experiment());

        let wrong = emitted.replace("\"-1\"", "\"-2\"");
        assert!(parse_structure(&wrong, "t.toml", &src).is_err());
        let both = format!("{emitted}\n[marginal]\nvariables = [\"Y\"]\n");
        assert!(parse_structure(&both, "t.toml", &src).is_err());
    }
}
