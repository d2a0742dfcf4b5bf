//! The `infodesign` command line.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 parse or validation
//! error, 3 the action is not implementable, 4 the structure does not
//! implement the action.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::causal::{
    build_observational_problem, check_marginal_not_maximal, counterfactual_mean,
    implement_treatment, marginal_structure, motivating_example_base, worst_case_distribution,
    MarginalSpec, TreatmentModel,
};
use crate::design::{
    implementing_structure, is_maximally_informative, robustly_more_informative, ConstructionKind,
    Implementation, Informativeness,
};
use crate::document::{
    parse_problem, parse_structure, problem_document, structure_document, ProblemSource,
};
use crate::error::Error;
use crate::model::{
    kernel_of, payoff_equivalence_classes, push_forward, DecisionProblem, InformationStructure,
    MixedAction,
};
use crate::numerics::{parse_scalar, Scalar};
use crate::solver::{maxmin, worst_case, SaddleCertificate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_IMPLEMENTABLE: i32 = 3;
pub const EXIT_NOT_IMPLEMENTING: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "infodesign",
    version,
    about = "Exact information design for maxmin decision makers"
)]
pub struct Cli {
    /// Human-readable tables or TOML for scripts.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the decision maker's maxmin problem under a structure.
    Solve {
        problem: PathBuf,
        structure: PathBuf,
    },
    /// Construct an almost fully informative structure implementing an action.
    Implement {
        problem: PathBuf,
        /// An action label, or weights such as `a0=1/2,a1=1/2`.
        #[arg(long)]
        action: String,
        /// Where to write the structure document.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Report a structure's kernel, maximality for an action, or its order
    /// relative to another structure.
    Check {
        problem: PathBuf,
        structure: PathBuf,
        #[arg(long)]
        action: Option<String>,
        /// A second structure to compare against.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Walk through the binary treatment example.
    Example,
    /// Treatment-effects problems.
    #[command(subcommand)]
    Treatment(TreatmentCommand),
}

#[derive(Subcommand, Debug)]
pub enum TreatmentCommand {
    /// Build the decision problem of a treatment model.
    Build {
        problem: PathBuf,
        /// Write the problem in generic form.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Implement a treatment (or mixture) through outcome marginals.
    Implement {
        problem: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Disclose the joint distribution of a subset of variables.
    Marginal {
        problem: PathBuf,
        /// Comma-separated variable names, e.g. `Y,T`.
        #[arg(long, value_delimiter = ',', required = true)]
        variables: Vec<String>,
        #[arg(long)]
        action: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, std::io::Error),
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(..) => EXIT_FAILURE,
            Failure::Usage(_) => EXIT_INVALID,
            Failure::Core(e) => exit_code(e),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotImplementable(_) | Error::NoImplementableAction => EXIT_NOT_IMPLEMENTABLE,
        Error::NotImplementing { .. } => EXIT_NOT_IMPLEMENTING,
        Error::Internal(_) => EXIT_FAILURE,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let text = match cli.format {
                Format::Table => report.to_table(),
                Format::Machine => report.to_toml(),
            };
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILURE;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

type Outcome = Result<(Report, i32), Failure>;

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve { problem, structure } => cmd_solve(problem, structure),
        Command::Implement {
            problem,
            action,
            output,
        } => cmd_implement(problem, action, output.as_deref()),
        Command::Check {
            problem,
            structure,
            action,
            against,
        } => cmd_check(problem, structure, action.as_deref(), against.as_deref()),
        Command::Example => cmd_example(),
        Command::Treatment(TreatmentCommand::Build { problem, output }) => {
            cmd_treatment_build(problem, output.as_deref())
        }
        Command::Treatment(TreatmentCommand::Implement {
            problem,
            action,
            output,
        }) => cmd_treatment_implement(problem, action, output.as_deref()),
        Command::Treatment(TreatmentCommand::Marginal {
            problem,
            variables,
            action,
            output,
        }) => cmd_treatment_marginal(problem, variables, action.as_deref(), output.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_problem(path: &Path) -> Result<ProblemSource, Failure> {
    Ok(parse_problem(&read(path)?, &path.display().to_string())?)
}

fn load_structure(path: &Path, src: &ProblemSource) -> Result<InformationStructure, Failure> {
    Ok(parse_structure(
        &read(path)?,
        &path.display().to_string(),
        src,
    )?)
}

fn load_treatment(path: &Path) -> Result<(TreatmentModel, DecisionProblem), Failure> {
    match load_problem(path)? {
        ProblemSource::Treatment { model, problem } => Ok((model, problem)),
        ProblemSource::Generic(_) => Err(Failure::Usage(format!(
            "{}: expected a [treatment] problem",
            path.display()
        ))),
    }
}

/// An action label, or `label=weight` pairs with omitted labels at zero.
pub fn parse_action(spec: &str, p: &DecisionProblem) -> Result<MixedAction, String> {
    if !spec.contains('=') {
        return p
            .action_index(spec.trim())
            .map(|a| p.pure(a))
            .ok_or_else(|| format!("unknown action {spec:?}; actions are {:?}", p.actions()));
    }
    let mut weights = vec![Scalar::default(); p.num_actions()];
    for part in spec.split(',') {
        let (label, w) = part
            .split_once('=')
            .ok_or_else(|| format!("expected label=weight, got {part:?}"))?;
        let a = p
            .action_index(label.trim())
            .ok_or_else(|| format!("unknown action {label:?}; actions are {:?}", p.actions()))?;
        weights[a] = parse_scalar(w.trim()).map_err(|e| e.to_string())?;
    }
    MixedAction::new(weights).map_err(|e| e.to_string())
}

fn action_arg(spec: &str, p: &DecisionProblem) -> Result<MixedAction, Failure> {
    parse_action(spec, p).map_err(Failure::Usage)
}

fn labeled(labels: &[String], values: &[Scalar]) -> Value {
    Value::Labeled(
        labels
            .iter()
            .zip(values)
            .map(|(l, v)| (l.clone(), v.to_string()))
            .collect(),
    )
}

fn saddle_entries(r: &mut Report, p: &DecisionProblem, cert: &SaddleCertificate) {
    r.put("value", cert.value.to_string());
    r.put(
        "alpha_star",
        labeled(p.actions(), cert.alpha_star.weights()),
    );
    if let Some(a) = cert.alpha_star.as_pure() {
        r.put("best_action", p.actions()[a].clone());
    }
    r.put("nu_star", labeled(p.states(), &cert.nu_star));
}

fn cmd_solve(problem: &Path, structure: &Path) -> Outcome {
    let src = load_problem(problem)?;
    let p = src.problem();
    let e = load_structure(structure, &src)?;
    let cert = maxmin(p, &e)?;
    cert.validate(p, &e)?;
    let worst: Vec<Scalar> = (0..p.num_actions())
        .map(|a| worst_case(p, &e, &p.pure(a)).map(|w| w.value))
        .collect::<Result<_, _>>()?;
    let mut r = Report::new("solve");
    saddle_entries(&mut r, p, &cert);
    r.put("worst_case", labeled(p.actions(), &worst));
    r.put("kernel_dimension", Value::Int(e.kernel().dim() as i64));
    Ok((r, EXIT_OK))
}

fn construction_name(imp: &Implementation) -> &'static str {
    match imp.trace.as_ref().map(|t| t.kind) {
        None | Some(ConstructionKind::Identity) => "identity",
        Some(ConstructionKind::SingleMessage) => "single-message",
        Some(ConstructionKind::Generic) => "generic",
    }
}

fn implementation_entries(
    r: &mut Report,
    p: &DecisionProblem,
    imp: &Implementation,
    output: Option<&Path>,
) -> Result<(), Failure> {
    r.put("status", "implemented");
    r.put("construction", construction_name(imp));
    r.put(
        "kernel_dimension",
        Value::Int(imp.structure.kernel().dim() as i64),
    );
    r.put(
        "supporting_prior",
        labeled(p.states(), &imp.supporting_prior),
    );
    let mut saddle = Report::default();
    saddle.put("value", imp.certificate.value.to_string());
    saddle.put(
        "alpha_star",
        labeled(p.actions(), imp.certificate.alpha_star.weights()),
    );
    saddle.put("nu_star", labeled(p.states(), &imp.certificate.nu_star));
    r.put("saddle", Value::Section(saddle));
    let doc = structure_document(&imp.structure);
    match output {
        Some(path) => {
            write(path, &doc)?;
            r.put("structure_file", path.display().to_string());
        }
        None => {
            let parsed: toml::Table = doc.parse().expect("emitted documents parse");
            r.put("structure", Value::Toml(parsed));
        }
    }
    Ok(())
}

fn cmd_implement(problem: &Path, action: &str, output: Option<&Path>) -> Outcome {
    let src = load_problem(problem)?;
    let p = src.problem();
    let alpha = action_arg(action, p)?;
    let mut r = Report::new("implement");
    r.put("action", labeled(p.actions(), alpha.weights()));
    match implementing_structure(p, &alpha) {
        Ok(imp) => {
            implementation_entries(&mut r, p, &imp, output)?;
            Ok((r, EXIT_OK))
        }
        Err(Error::NotImplementable(cert)) => {
            r.put("status", "not-implementable");
            let mut farkas = Report::default();
            farkas.put(
                "equalities",
                Value::List(cert.equalities.iter().map(|x| x.to_string()).collect()),
            );
            farkas.put(
                "inequalities",
                Value::List(cert.inequalities.iter().map(|x| x.to_string()).collect()),
            );
            r.put("farkas_certificate", Value::Section(farkas));
            Ok((r, EXIT_NOT_IMPLEMENTABLE))
        }
        Err(e) => Err(e.into()),
    }
}

fn maximality_entries(
    r: &mut Report,
    p: &DecisionProblem,
    e: &InformationStructure,
    action: &str,
) -> Result<i32, Failure> {
    let alpha = action_arg(action, p)?;
    r.put("action", labeled(p.actions(), alpha.weights()));
    match is_maximally_informative(p, e, &alpha) {
        Ok(true) => {
            r.put("verdict", "maximal");
            Ok(EXIT_OK)
        }
        Ok(false) => {
            r.put("verdict", "not maximal");
            Ok(EXIT_OK)
        }
        Err(Error::NotImplementing {
            worst_case,
            optimum,
        }) => {
            r.put("verdict", "not implementing");
            r.put("worst_case", worst_case);
            r.put("optimum", optimum);
            Ok(EXIT_NOT_IMPLEMENTING)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_check(
    problem: &Path,
    structure: &Path,
    action: Option<&str>,
    against: Option<&Path>,
) -> Outcome {
    let src = load_problem(problem)?;
    let p = src.problem();
    let e = load_structure(structure, &src)?;
    let k = kernel_of(&e);
    let mut r = Report::new("check");
    r.put("kernel_dimension", Value::Int(k.subspace.dim() as i64));
    r.put("fully_informative", Value::Bool(k.fully_informative));
    r.put(
        "almost_fully_informative",
        Value::Bool(k.almost_fully_informative),
    );
    let mut code = EXIT_OK;
    if let Some(action) = action {
        code = maximality_entries(&mut r, p, &e, action)?;
    }
    if let Some(other) = against {
        let e2 = load_structure(other, &src)?;
        let order = match robustly_more_informative(&e, &e2)? {
            Informativeness::More => "more informative",
            Informativeness::Less => "less informative",
            Informativeness::Equal => "equally informative",
            Informativeness::Incomparable => "incomparable",
        };
        r.put("ordering", order);
    }
    Ok((r, code))
}

/// `Y × (X, T)` grid in the layout `(X=0,T=0), (X=1,T=0), (X=0,T=1), (X=1,T=1)`.
fn grid(m: &TreatmentModel, nu: &[Scalar]) -> Value {
    let mut rows = Vec::new();
    let mut header = vec![String::new()];
    for t in 0..m.treatments.len() {
        for x in 0..m.num_cells() {
            header.push(format!("({},T={})", m.cell_label(x), m.treatments[t]));
        }
    }
    rows.push(header);
    for y in 0..m.outcomes.len() {
        let mut row = vec![format!("Y={}", m.outcome_label(y))];
        for t in 0..m.treatments.len() {
            for x in 0..m.num_cells() {
                row.push(nu[m.state_index(y, x, t)].to_string());
            }
        }
        rows.push(row);
    }
    Value::Grid(rows)
}

fn cmd_example() -> Outcome {
    let m = motivating_example_base();
    let p = build_observational_problem(&m)?;
    let yt = MarginalSpec::from_names(&m, &["Y", "T"])?;
    let e = marginal_structure(&m, &yt)?;
    let star = worst_case_distribution();
    let full = InformationStructure::identity(p.num_states());

    let mut r = Report::new("example");
    r.put("observed_distribution", grid(&m, &m.mu));
    r.put(
        "disclosed_marginal",
        labeled(e.messages(), &push_forward(&e, &m.mu)?),
    );
    r.put("worst_case_distribution", grid(&m, &star));

    let means: Vec<Scalar> = (0..2)
        .map(|a| counterfactual_mean(&p, a, &m.mu))
        .collect::<Result<_, _>>()?;
    r.put(
        "full_information_means",
        labeled(&["E[Y0]".into(), "E[Y1]".into()], &means),
    );
    let worst: Vec<Scalar> = (0..2)
        .map(|a| worst_case(&p, &e, &p.pure(a)).map(|w| w.value))
        .collect::<Result<_, _>>()?;
    r.put(
        "marginal_worst_cases",
        labeled(&["E[Y0]".into(), "E[Y1]".into()], &worst),
    );
    let at_star: Vec<Scalar> = (0..2)
        .map(|a| counterfactual_mean(&p, a, &star))
        .collect::<Result<_, _>>()?;
    r.put(
        "worst_case_distribution_means",
        labeled(&["E[Y0]".into(), "E[Y1]".into()], &at_star),
    );

    let full_sol = maxmin(&p, &full)?;
    let marginal_sol = maxmin(&p, &e)?;
    for (name, sol) in [
        ("full_information", &full_sol),
        ("marginal_disclosure", &marginal_sol),
    ] {
        let mut s = Report::default();
        s.put("value", sol.value.to_string());
        s.put("alpha_star", labeled(p.actions(), sol.alpha_star.weights()));
        r.put(name, Value::Section(s));
    }
    let pick = |s: &SaddleCertificate| s.alpha_star.as_pure().map(|a| p.actions()[a].clone());
    let reversal = match (pick(&full_sol), pick(&marginal_sol)) {
        (Some(a), Some(b)) if a != b => format!(
            "partial disclosure reverses the full-information policy: a={a} under full information, a={b} under (Y,T) disclosure"
        ),
        _ => "no policy reversal".to_string(),
    };
    r.put("reversal", reversal);
    Ok((r, EXIT_OK))
}

fn cmd_treatment_build(problem: &Path, output: Option<&Path>) -> Outcome {
    let (m, p) = load_treatment(problem)?;
    let mut r = Report::new("treatment build");
    r.put("num_states", Value::Int(p.num_states() as i64));
    r.put("treatments", Value::List(m.treatments.clone()));
    let irrelevant = m
        .irrelevant_covariates()
        .iter()
        .map(|&j| m.covariates[j].name.clone())
        .collect();
    r.put("irrelevant_covariates", Value::List(irrelevant));
    let classes = payoff_equivalence_classes(&p);
    r.put("payoff_classes", Value::Int(classes.classes.len() as i64));
    r.put("all_classes_paired", Value::Bool(classes.all_paired));
    r.put(
        "assignment_constraints",
        Value::Int(p.priors().eq_matrix().rows() as i64),
    );
    if let Some(path) = output {
        write(path, &problem_document(&p))?;
        r.put("problem_file", path.display().to_string());
    }
    Ok((r, EXIT_OK))
}

fn cmd_treatment_implement(problem: &Path, action: &str, output: Option<&Path>) -> Outcome {
    let (m, p) = load_treatment(problem)?;
    let alpha = action_arg(action, &p)?;
    let out = implement_treatment(&m, &alpha)?;
    let mut r = Report::new("treatment implement");
    r.put("action", labeled(p.actions(), alpha.weights()));
    r.put("floor", out.floor.to_string());
    r.put("target", labeled(p.actions(), &out.target));
    let outcome_labels: Vec<String> = (0..m.outcomes.len()).map(|y| m.outcome_label(y)).collect();
    let mut marginals = Report::default();
    for (t, pi) in out.marginals.iter().enumerate() {
        marginals.put(&m.treatments[t], labeled(&outcome_labels, pi));
    }
    r.put("outcome_marginals", Value::Section(marginals));
    implementation_entries(&mut r, &p, &out.implementation, output)?;
    Ok((r, EXIT_OK))
}

fn cmd_treatment_marginal(
    problem: &Path,
    variables: &[String],
    action: Option<&str>,
    output: Option<&Path>,
) -> Outcome {
    let (m, p) = load_treatment(problem)?;
    let spec = MarginalSpec::from_names(&m, variables)?;
    let e = marginal_structure(&m, &spec)?;
    let report = check_marginal_not_maximal(&m, &spec)?;
    let mut r = Report::new("treatment marginal");
    r.put(
        "variables",
        Value::List(
            spec.variables()
                .iter()
                .map(|&v| m.variable_name(v).to_string())
                .collect(),
        ),
    );
    r.put(
        "disclosed",
        labeled(e.messages(), &push_forward(&e, &m.mu)?),
    );
    r.put("kernel_dimension", Value::Int(report.kernel_dim as i64));
    r.put("kernel_bound", report.bound.to_string());
    r.put("maximal_for_any_action", Value::Bool(!report.not_maximal));
    let mut code = EXIT_OK;
    if let Some(action) = action {
        code = maximality_entries(&mut r, &p, &e, action)?;
    }
    if let Some(path) = output {
        write(path, &structure_document(&e))?;
        r.put("structure_file", path.display().to_string());
    }
    Ok((r, code))
}

/// An ordered report rendered either as aligned text or as TOML.
#[derive(Debug, Default)]
struct Report {
    entries: Vec<(String, Value)>,
}

#[derive(Debug)]
enum Value {
    Str(String),
    Int(i64),
    Bool(bool),
    List(Vec<String>),
    /// Label–value pairs; a table keyed by label in TOML.
    Labeled(Vec<(String, String)>),
    /// Header row first; rows keyed by their first cell in TOML.
    Grid(Vec<Vec<String>>),
    Section(Report),
    Toml(toml::Table),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.put("command", command);
        r
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    fn to_toml(&self) -> String {
        toml::to_string(&self.table()).expect("reports serialize")
    }

    fn table(&self) -> toml::Table {
        let mut t = toml::Table::new();
        for (k, v) in &self.entries {
            let value = match v {
                Value::Str(s) => toml::Value::String(s.clone()),
                Value::Int(i) => toml::Value::Integer(*i),
                Value::Bool(b) => toml::Value::Boolean(*b),
                Value::List(xs) => {
                    toml::Value::Array(xs.iter().cloned().map(toml::Value::String).collect())
                }
                Value::Labeled(pairs) => toml::Value::Table(
                    pairs
                        .iter()
                        .map(|(l, v)| (l.clone(), toml::Value::String(v.clone())))
                        .collect(),
                ),
                Value::Grid(rows) => {
                    let header = &rows[0];
                    toml::Value::Table(
                        rows[1..]
                            .iter()
                            .map(|row| {
                                let cells = header[1..]
                                    .iter()
                                    .zip(&row[1..])
                                    .map(|(h, c)| (h.clone(), toml::Value::String(c.clone())))
                                    .collect();
                                (row[0].clone(), toml::Value::Table(cells))
                            })
                            .collect(),
                    )
                }
                Value::Section(r) => toml::Value::Table(r.table()),
                Value::Toml(t) => toml::Value::Table(t.clone()),
            };
            t.insert(k.clone(), value);
        }
        t
    }

    fn to_table(&self) -> String {
        let mut out = String::new();
        self.render(&mut out, "");
        out
    }

    fn render(&self, out: &mut String, indent: &str) {
        let width = self
            .entries
            .iter()
            .filter(|(_, v)| {
                matches!(
                    v,
                    Value::Str(_) | Value::Int(_) | Value::Bool(_) | Value::List(_)
                )
            })
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0);
        let deeper = format!("{indent}  ");
        for (k, v) in &self.entries {
            match v {
                Value::Str(s) => out.push_str(&format!("{indent}{k:width$}  {s}\n")),
                Value::Int(i) => out.push_str(&format!("{indent}{k:width$}  {i}\n")),
                Value::Bool(b) => out.push_str(&format!(
                    "{indent}{k:width$}  {}\n",
                    if *b { "yes" } else { "no" }
                )),
                Value::List(xs) => {
                    out.push_str(&format!("{indent}{k:width$}  {}\n", xs.join(", ")))
                }
                Value::Labeled(pairs) => {
                    out.push_str(&format!("{indent}{k}:\n"));
                    let w = pairs.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
                    for (l, v) in pairs {
                        out.push_str(&format!("{deeper}{l:w$}  {v}\n"));
                    }
                }
                Value::Grid(rows) => {
                    out.push_str(&format!("{indent}{k}:\n"));
                    let cols = rows[0].len();
                    let widths: Vec<usize> = (0..cols)
                        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
                        .collect();
                    for row in rows {
                        let cells: Vec<String> = row
                            .iter()
                            .zip(&widths)
                            .map(|(cell, &w)| format!("{cell:>w$}"))
                            .collect();
                        out.push_str(&format!("{deeper}{}\n", cells.join("  ")));
                    }
                }
                Value::Section(r) => {
                    out.push_str(&format!("{indent}{k}:\n"));
                    r.render(out, &deeper);
                }
                Value::Toml(t) => {
                    out.push_str(&format!("{indent}{k}:\n"));
                    let text = toml::to_string(t).expect("tables serialize");
                    for line in text.lines() {
                        out.push_str(&format!("{deeper}{line}\n"));
                    }
                }
            }
        }
    }
}
