//! The subcommands. Each produces a [`Report`] holding both renderings and
//! the exit code; errors map to fixed exit codes.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use belief_core::algebras::{designated_pair, PairValue};
use belief_core::bd_core::{self, entails_bd_capped, BdError, Universe, Verdict};
use belief_core::formulas::{
    neg_translate, nnf, parse_lower, parse_upper, Dialect, LowerFormula, ParseError, UpperExpr, UpperFormula,
};
use belief_core::luk_decide::{
    grid_falsify, grid_falsify_lukneg, lp_export, luk_consequence, lukneg_consequence, Countermodel, DecideConfig,
    DecideError, LukVerdict,
};
use belief_core::rational::{self, Rational};
use belief_core::report::CheckReport;
use belief_core::sources::AggregatedAssignment;
use belief_core::two_layer::{check_modal_axioms, dialect_for, AxiomSet, TwoLayerError};

use crate::scenario::{ScenarioError, ScenarioFile};
use crate::{AxiomChoice, Cli, Command, DialectChoice, Format};

pub const DEFAULT_MAX_UNIVERSE: usize = 256;

/// Deeper universes are not generated at all; their syntactic growth is
/// quadratic per level before deduplication.
const MAX_UNIVERSE_DEPTH: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse {what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("oracle disagreement: {0}")]
    Disagreement(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap(_) => 3,
            CliError::Disagreement(_) => 4,
            _ => 2,
        }
    }
}

impl From<BdError> for CliError {
    fn from(e: BdError) -> Self {
        match e {
            BdError::AtomBudget { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::AtomBudget { .. } | DecideError::GridBudget { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TwoLayerError> for CliError {
    fn from(e: TwoLayerError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// A rendered command result.
#[derive(Clone, Debug)]
pub struct Report {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::BdEntail { premises, conc, atom_cap } => bd_entail(premises, conc, *atom_cap),
        Command::Belief { scenario, formula } => belief(scenario, formula),
        Command::Check { scenario, axioms, universe, max_universe, witnesses } => {
            check(scenario, *axioms, *universe, *max_universe, *witnesses)
        }
        Command::Luk { dialect, premises, conc, oracle_denominator, atom_cap, grid_budget, emit_lp } => luk(
            *dialect,
            premises,
            conc,
            LukOptions {
                oracle_denominator: *oracle_denominator,
                atom_cap: *atom_cap,
                grid_budget: *grid_budget,
                emit_lp: *emit_lp,
            },
        ),
        Command::Nnf { formula } => nnf_cmd(formula),
        Command::Normalize { scenario, output } => normalize(scenario, output.as_deref()),
    }
}

fn non_empty(premises: &[String]) -> impl Iterator<Item = (usize, &String)> {
    premises.iter().enumerate().filter(|(_, p)| !p.trim().is_empty()).map(|(i, p)| (i + 1, p))
}

fn lower(what: String, text: &str) -> Result<LowerFormula, CliError> {
    parse_lower(text).map_err(|source| CliError::Parse { what, source })
}

fn upper(what: String, text: &str, dialect: Dialect) -> Result<UpperFormula, CliError> {
    parse_upper(text, dialect).map_err(|source| CliError::Parse { what, source })
}

pub fn bd_entail(premises: &[String], conc: &str, atom_cap: usize) -> Result<Report, CliError> {
    let gamma = non_empty(premises)
        .map(|(i, p)| lower(format!("premise {i}"), p))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = lower("conclusion".into(), conc)?;
    match entails_bd_capped(&gamma, &phi, atom_cap)? {
        Verdict::Holds => Ok(Report { code: 0, text: "HOLDS\n".into(), json: json!({ "verdict": "holds" }) }),
        Verdict::Fails(v) => {
            let width = v.0.keys().map(String::len).max().unwrap_or(0).max("atom".len());
            let mut text = format!("FAILS\n{:<width$}  value\n", "atom");
            let mut cm = Map::new();
            for (atom, value) in &v.0 {
                writeln!(text, "{atom:<width$}  {value}").unwrap();
                cm.insert(atom.clone(), Value::String(value.to_string()));
            }
            Ok(Report { code: 1, text, json: json!({ "verdict": "fails", "countermodel": cm }) })
        }
    }
}

/// Where a pair lies in the unit square: on the classical diagonal, below
/// it (too little information) or above it (conflicting information).
pub fn region(v: &PairValue) -> &'static str {
    let sum = v.pos() + v.neg();
    match sum.cmp(&rational::one()) {
        std::cmp::Ordering::Equal => "classical",
        std::cmp::Ordering::Less => "incomplete",
        std::cmp::Ordering::Greater => "conflicted",
    }
}

fn pair_json(v: &PairValue) -> Value {
    json!([v.pos().to_string(), v.neg().to_string()])
}

pub fn belief(path: &Path, formula: &str) -> Result<Report, CliError> {
    let file = ScenarioFile::load(path)?;
    let model = file.model()?;
    let dialect = dialect_for(model.upper()).expect("scenario upper algebras interpret belief formulas");
    let alpha = upper("formula".into(), formula, dialect)?;
    let v = model.eval_upper_in_model(&alpha)?;
    let designated = designated_pair(model.upper(), &v);
    let approx = (rational::to_f64(v.pos()), rational::to_f64(v.neg()));
    let text = format!(
        "formula: {alpha}\nalgebra: {}\nvalue: {v}\napprox: ({:.6}, {:.6})\nregion: {}\ndesignated: {}\n",
        model.upper(),
        approx.0,
        approx.1,
        region(&v),
        if designated { "yes" } else { "no" },
    );
    let json = json!({
        "formula": alpha.to_string(),
        "algebra": model.upper().to_string(),
        "value": pair_json(&v),
        "approx": [approx.0, approx.1],
        "region": region(&v),
        "designated": designated,
    });
    Ok(Report { code: 0, text, json })
}

fn universe_for(file: &ScenarioFile, depth: usize, max: usize) -> Result<Universe, CliError> {
    if depth > MAX_UNIVERSE_DEPTH {
        return Err(CliError::Cap(format!("universe depth {depth} exceeds the limit of {MAX_UNIVERSE_DEPTH}")));
    }
    let mut atoms = file.atoms.clone();
    atoms.sort();
    let formulas = bd_core::universe(&atoms, depth, true);
    if formulas.len() > max {
        return Err(CliError::Cap(format!("universe of {} formulas exceeds the limit of {max}", formulas.len())));
    }
    Ok(Universe::new(formulas)?)
}

fn axiom_name(a: AxiomChoice) -> &'static str {
    match a {
        AxiomChoice::Additive => "additive",
        AxiomChoice::Monotone => "monotone",
        AxiomChoice::Prob => "prob",
    }
}

pub fn check(
    path: &Path,
    axioms: AxiomChoice,
    depth: usize,
    max_universe: usize,
    witnesses: usize,
) -> Result<Report, CliError> {
    let file = ScenarioFile::load(path)?;
    let model = file.model()?;
    let universe = universe_for(&file, depth, max_universe)?;
    let report: CheckReport = match axioms {
        AxiomChoice::Additive => check_modal_axioms(&model, &universe, AxiomSet::Additive)?,
        AxiomChoice::Monotone => check_modal_axioms(&model, &universe, AxiomSet::Monotone)?,
        AxiomChoice::Prob => {
            let pa = AggregatedAssignment { strategy: model.strategy(), sources: model.sources(), model: model.base() };
            belief_core::sources::check_axioms(&pa, &universe).map_err(|e| CliError::Input(e.to_string()))?
        }
    };

    let mut text = format!(
        "axioms: {}\nstrategy: {}\nuniverse: {} formulas (depth {depth})\n",
        axiom_name(axioms),
        model.strategy(),
        universe.len()
    );
    let mut items = Vec::new();
    for item in &report.items {
        let shown = &item.violations[..item.violations.len().min(witnesses)];
        if item.passed() {
            writeln!(text, "PASS {} ({} instances)", item.name, item.instances).unwrap();
        } else {
            writeln!(text, "FAIL {} ({} of {} instances)", item.name, item.violations.len(), item.instances).unwrap();
            for w in shown {
                writeln!(text, "  {w}").unwrap();
            }
            if item.violations.len() > shown.len() {
                writeln!(text, "  ({} more)", item.violations.len() - shown.len()).unwrap();
            }
        }
        items.push(json!({
            "name": item.name,
            "passed": item.passed(),
            "instances": item.instances,
            "violations": item.violations.len(),
            "witnesses": shown,
        }));
    }
    let passed = report.passed();
    writeln!(text, "RESULT: {}", if passed { "PASS" } else { "FAIL" }).unwrap();
    let json = json!({
        "axioms": axiom_name(axioms),
        "strategy": model.strategy().to_string(),
        "universe": { "depth": depth, "formulas": universe.len() },
        "items": items,
        "passed": passed,
    });
    Ok(Report { code: if passed { 0 } else { 1 }, text, json })
}

pub struct LukOptions {
    pub oracle_denominator: Option<i64>,
    pub atom_cap: usize,
    pub grid_budget: u128,
    pub emit_lp: bool,
}

fn countermodel_json(c: &Countermodel) -> Value {
    match c {
        Countermodel::Point { point, value } => {
            let values: Map<String, Value> = point
                .0
                .iter()
                .map(|(k, v)| (k.display(Dialect::LukNeg).to_string(), Value::String(v.to_string())))
                .collect();
            json!({ "values": values, "conclusion": value.to_string() })
        }
        Countermodel::Pairs { assignment, value } => {
            let values: Map<String, Value> = assignment.iter().map(|(a, v)| (a.to_string(), pair_json(v))).collect();
            json!({ "values": values, "conclusion": pair_json(value) })
        }
    }
}

/// Whether every coordinate of `c` is a fraction with denominator at most `d`.
fn on_grid(c: &Countermodel, d: i64) -> bool {
    let fits = |r: &Rational| (1..=d).any(|k| (r * rational::int(k)).is_integer());
    match c {
        Countermodel::Point { point, .. } => point.0.values().all(fits),
        Countermodel::Pairs { assignment, .. } => assignment.values().all(|v| fits(v.pos()) && fits(v.neg())),
    }
}

pub fn luk(dialect: DialectChoice, premises: &[String], conc: &str, opts: LukOptions) -> Result<Report, CliError> {
    let gamma = non_empty(premises)
        .map(|(i, p)| upper(format!("premise {i}"), p, Dialect::LukNeg))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = upper("conclusion".into(), conc, Dialect::LukNeg)?;
    let exprs: Vec<UpperExpr> = gamma.iter().map(|g| g.expr().clone()).collect();
    let cfg = DecideConfig { atom_cap: opts.atom_cap };

    if opts.emit_lp {
        if dialect != DialectChoice::Luk {
            return Err(CliError::Input("--emit-lp needs --dialect luk".into()));
        }
        let lp = lp_export(&exprs, alpha.expr())?;
        return Ok(Report { code: 0, json: json!({ "lp": lp }), text: lp });
    }

    let verdict = match dialect {
        DialectChoice::Luk => luk_consequence(&exprs, alpha.expr(), &cfg)?,
        DialectChoice::Lukneg => lukneg_consequence(&gamma, &alpha, &cfg)?,
    };
    let mut text = match &verdict {
        LukVerdict::Valid => "VALID\n".to_string(),
        LukVerdict::Invalid(c) => format!("INVALID\ncountermodel: {c}\n"),
    };
    let mut json = match &verdict {
        LukVerdict::Valid => json!({ "verdict": "valid" }),
        LukVerdict::Invalid(c) => json!({ "verdict": "invalid", "countermodel": countermodel_json(c) }),
    };

    if let Some(d) = opts.oracle_denominator {
        let grid = match dialect {
            DialectChoice::Luk => grid_falsify(&exprs, alpha.expr(), d, opts.grid_budget)?,
            DialectChoice::Lukneg => grid_falsify_lukneg(&exprs, alpha.expr(), d, opts.grid_budget)?,
        };
        let line = match (&verdict, &grid) {
            (LukVerdict::Valid, Some(g)) => {
                return Err(CliError::Disagreement(format!("decided VALID but the grid falsifies it at {g}")));
            }
            (LukVerdict::Invalid(c), None) if on_grid(c, d) => {
                return Err(CliError::Disagreement(format!(
                    "countermodel {c} has denominators <= {d} but the grid found none"
                )));
            }
            (LukVerdict::Valid, None) => format!("oracle: no countermodel with denominators <= {d}"),
            (LukVerdict::Invalid(_), None) => {
                format!("oracle: no countermodel with denominators <= {d}; the decided one lies off the grid")
            }
            (LukVerdict::Invalid(_), Some(g)) => format!("oracle: countermodel {g}"),
        };
        writeln!(text, "{line}").unwrap();
        json["oracle"] = json!({
            "max_denominator": d,
            "agrees": true,
            "countermodel": grid.as_ref().map(countermodel_json),
        });
    }
    let code = if verdict.is_valid() { 0 } else { 1 };
    Ok(Report { code, text, json })
}

pub fn nnf_cmd(formula: &str) -> Result<Report, CliError> {
    let alpha = upper("formula".into(), formula, Dialect::LukNeg)?;
    let n = nnf(&alpha);
    let t = neg_translate(&alpha);
    Ok(Report {
        code: 0,
        text: format!("nnf: {n}\nnegation: {t}\n"),
        json: json!({ "nnf": n.to_string(), "negation": t.to_string() }),
    })
}

pub fn normalize(path: &Path, output: Option<&Path>) -> Result<Report, CliError> {
    let file = ScenarioFile::load(path)?.normalized();
    let text = file.to_json();
    let json = serde_json::to_value(&file).expect("scenario serializes");
    match output {
        Some(out) => {
            std::fs::write(out, &text).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
            Ok(Report { code: 0, text: String::new(), json: json!({ "written": out.display().to_string() }) })
        }
        None => Ok(Report { code: 0, text, json }),
    }
}
