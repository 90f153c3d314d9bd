//! Scenario files: a BD model of events, weighted sources and the choice of
//! aggregation strategy and upper algebra, as JSON with exact rationals
//! written as `"n/d"` strings.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use belief_core::algebras::AlgebraId;
use belief_core::bd_core::BDModel;
use belief_core::formulas::is_valid_atom_name;
use belief_core::rational::{self, format_rational, parse_rational, Rational};
use belief_core::sources::{AggStrategy, MassFunction, Source};
use belief_core::two_layer::TwoLayerModel;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// A schema violation, located by a JSON path such as `sources[1].mass`.
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

impl ScenarioError {
    fn schema(path: impl Into<String>, message: impl ToString) -> Self {
        ScenarioError::Schema { path: path.into(), message: message.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperChoice {
    MvProd,
    ResBilat,
    KleeneBilat,
}

impl From<UpperChoice> for AlgebraId {
    fn from(u: UpperChoice) -> Self {
        match u {
            UpperChoice::MvProd => AlgebraId::MvProd,
            UpperChoice::ResBilat => AlgebraId::ResBilat,
            UpperChoice::KleeneBilat => AlgebraId::KleeneBilat,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub id: String,
    #[serde(default)]
    pub pos: Vec<String>,
    #[serde(default)]
    pub neg: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub label: String,
    pub weight: String,
    pub mass: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub atoms: Vec<String>,
    pub states: Vec<StateSpec>,
    pub sources: Vec<SourceSpec>,
    pub strategy: AggStrategy,
    pub upper: UpperChoice,
}

fn rational_at(path: String, text: &str) -> Result<Rational, ScenarioError> {
    parse_rational(text).map_err(|e| ScenarioError::schema(path, e))
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ScenarioError::schema(path, e.into_inner())
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    /// Checks declarations, rationals and mass sums.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut atoms = BTreeSet::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if !is_valid_atom_name(a) {
                return Err(ScenarioError::schema(format!("atoms[{i}]"), format!("`{a}` is not a valid atom name")));
            }
            if !atoms.insert(a.as_str()) {
                return Err(ScenarioError::schema(format!("atoms[{i}]"), format!("duplicate atom `{a}`")));
            }
        }
        let mut states = BTreeSet::new();
        for (i, s) in self.states.iter().enumerate() {
            if !states.insert(s.id.as_str()) {
                return Err(ScenarioError::schema(format!("states[{i}].id"), format!("duplicate state `{}`", s.id)));
            }
            for (field, list) in [("pos", &s.pos), ("neg", &s.neg)] {
                for (j, a) in list.iter().enumerate() {
                    if !atoms.contains(a.as_str()) {
                        return Err(ScenarioError::schema(
                            format!("states[{i}].{field}[{j}]"),
                            format!("atom `{a}` is not declared"),
                        ));
                    }
                }
            }
        }
        if self.sources.is_empty() {
            return Err(ScenarioError::schema("sources", "at least one source is required"));
        }
        for (i, src) in self.sources.iter().enumerate() {
            let w = rational_at(format!("sources[{i}].weight"), &src.weight)?;
            if w <= rational::zero() {
                return Err(ScenarioError::schema(format!("sources[{i}].weight"), "weight must be positive"));
            }
            let mut total = rational::zero();
            for (state, m) in &src.mass {
                let path = format!("sources[{i}].mass.{state}");
                if !states.contains(state.as_str()) {
                    return Err(ScenarioError::schema(path, format!("state `{state}` is not declared")));
                }
                let m = rational_at(path.clone(), m)?;
                if m < rational::zero() {
                    return Err(ScenarioError::schema(path, "mass must be non-negative"));
                }
                total += m;
            }
            if total != rational::one() {
                return Err(ScenarioError::schema(
                    format!("sources[{i}].mass"),
                    format!("masses sum to {}, not 1", format_rational(&total)),
                ));
            }
        }
        Ok(())
    }

    /// Canonical form: sorted atom lists without repeats and reduced
    /// rationals. State and source order is kept.
    pub fn normalized(&self) -> Self {
        let canon = |t: &str| parse_rational(t).map(|r| format_rational(&r)).unwrap_or_else(|_| t.to_string());
        let sorted = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>();
        ScenarioFile {
            atoms: sorted(&self.atoms),
            states: self
                .states
                .iter()
                .map(|s| StateSpec { id: s.id.clone(), pos: sorted(&s.pos), neg: sorted(&s.neg) })
                .collect(),
            sources: self
                .sources
                .iter()
                .map(|s| SourceSpec {
                    label: s.label.clone(),
                    weight: canon(&s.weight),
                    mass: s.mass.iter().map(|(k, v)| (k.clone(), canon(v))).collect(),
                })
                .collect(),
            strategy: self.strategy,
            upper: self.upper,
        }
    }

    pub fn bd_model(&self) -> Result<BDModel, ScenarioError> {
        let mut m = BDModel::new(self.states.iter().map(|s| s.id.clone()), self.atoms.iter().cloned())
            .map_err(|e| ScenarioError::schema("states", e))?;
        for (i, s) in self.states.iter().enumerate() {
            for a in &s.pos {
                m.support_pos(&s.id, a).map_err(|e| ScenarioError::schema(format!("states[{i}].pos"), e))?;
            }
            for a in &s.neg {
                m.support_neg(&s.id, a).map_err(|e| ScenarioError::schema(format!("states[{i}].neg"), e))?;
            }
        }
        Ok(m)
    }

    pub fn sources(&self) -> Result<Vec<Source>, ScenarioError> {
        self.sources
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let path = format!("sources[{i}]");
                let weight = rational_at(format!("{path}.weight"), &s.weight)?;
                let entries = s
                    .mass
                    .iter()
                    .map(|(st, m)| rational_at(format!("{path}.mass.{st}"), m).map(|r| (st.clone(), r)))
                    .collect::<Result<Vec<_>, _>>()?;
                let mass = MassFunction::new(entries).map_err(|e| ScenarioError::schema(format!("{path}.mass"), e))?;
                Source::new(s.label.clone(), weight, mass).map_err(|e| ScenarioError::schema(path, e))
            })
            .collect()
    }

    pub fn model(&self) -> Result<TwoLayerModel, ScenarioError> {
        TwoLayerModel::new(self.bd_model()?, self.sources()?, self.strategy, self.upper.into())
            .map_err(|e| ScenarioError::schema("", e))
    }
}
