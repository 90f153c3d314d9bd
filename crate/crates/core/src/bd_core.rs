//! Belnap-Dunn models, four-valued evaluation and brute-force consequence.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::algebras::FourValue;
use crate::formulas::{is_valid_atom_name, LowerFormula};

/// Default bound on the number of atoms `entails_bd` will enumerate over.
pub const DEFAULT_ATOM_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BdError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("atom `{0}` is not declared")]
    UnknownAtom(String),
    #[error("valuation assigns no value to atom `{0}`")]
    MissingAtom(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("`{0}` is not a valid atom name")]
    InvalidAtom(String),
    #[error("{atoms} atoms exceed the enumeration cap of {cap}")]
    AtomBudget { atoms: usize, cap: usize },
}

/// A double-valuation model: finitely many states, each giving every
/// declared atom independent positive and negative support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BDModel {
    states: Vec<String>,
    // atom -> per-state value, indexed like `states`
    values: BTreeMap<String, Vec<FourValue>>,
}

impl BDModel {
    /// A model in which nothing is supported.
    pub fn new<S, A>(states: S, atoms: A) -> Result<Self, BdError>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(BdError::DuplicateState(s.clone()));
            }
        }
        let mut values = BTreeMap::new();
        for atom in atoms {
            let atom = atom.into();
            if !is_valid_atom_name(&atom) {
                return Err(BdError::InvalidAtom(atom));
            }
            values.insert(atom, vec![FourValue::N; states.len()]);
        }
        Ok(BDModel { states, values })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn state_index(&self, state: &str) -> Result<usize, BdError> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| BdError::UnknownState(state.to_string()))
    }

    fn slot(&mut self, state: &str, atom: &str) -> Result<&mut FourValue, BdError> {
        let idx = self.state_index(state)?;
        let row = self.values.get_mut(atom).ok_or_else(|| BdError::UnknownAtom(atom.to_string()))?;
        Ok(&mut row[idx])
    }

    /// Records `state ⊩⁺ atom`.
    pub fn support_pos(&mut self, state: &str, atom: &str) -> Result<(), BdError> {
        let slot = self.slot(state, atom)?;
        *slot = FourValue::from_bits(true, slot.bits().1);
        Ok(())
    }

    /// Records `state ⊩⁻ atom`.
    pub fn support_neg(&mut self, state: &str, atom: &str) -> Result<(), BdError> {
        let slot = self.slot(state, atom)?;
        *slot = FourValue::from_bits(slot.bits().0, true);
        Ok(())
    }

    pub fn set_value(&mut self, state: &str, atom: &str, value: FourValue) -> Result<(), BdError> {
        *self.slot(state, atom)? = value;
        Ok(())
    }

    pub fn atom_value(&self, state: &str, atom: &str) -> Result<FourValue, BdError> {
        let idx = self.state_index(state)?;
        let row = self.values.get(atom).ok_or_else(|| BdError::UnknownAtom(atom.to_string()))?;
        Ok(row[idx])
    }

    /// Checks that every atom of `phi` is declared.
    pub fn check_atoms(&self, phi: &LowerFormula) -> Result<(), BdError> {
        match phi.atoms().into_iter().find(|a| !self.values.contains_key(a)) {
            Some(a) => Err(BdError::UnknownAtom(a)),
            None => Ok(()),
        }
    }

    /// Values of `phi` in every state, in state order.
    pub fn eval_all(&self, phi: &LowerFormula) -> Result<Vec<FourValue>, BdError> {
        Ok(match phi {
            LowerFormula::Atom(a) => {
                self.values.get(a).cloned().ok_or_else(|| BdError::UnknownAtom(a.clone()))?
            }
            LowerFormula::Neg(inner) => self.eval_all(inner)?.into_iter().map(FourValue::neg).collect(),
            LowerFormula::And(l, r) => {
                let (l, r) = (self.eval_all(l)?, self.eval_all(r)?);
                l.into_iter().zip(r).map(|(a, b)| a.meet_t(b)).collect()
            }
            LowerFormula::Or(l, r) => {
                let (l, r) = (self.eval_all(l)?, self.eval_all(r)?);
                l.into_iter().zip(r).map(|(a, b)| a.join_t(b)).collect()
            }
        })
    }
}

fn support(m: &BDModel, idx: usize, phi: &LowerFormula, positive: bool) -> Result<bool, BdError> {
    Ok(match phi {
        LowerFormula::Atom(a) => {
            let row = m.values.get(a).ok_or_else(|| BdError::UnknownAtom(a.clone()))?;
            let (p, n) = row[idx].bits();
            if positive {
                p
            } else {
                n
            }
        }
        LowerFormula::Neg(inner) => support(m, idx, inner, !positive)?,
        LowerFormula::And(l, r) if positive => support(m, idx, l, true)? && support(m, idx, r, true)?,
        LowerFormula::And(l, r) => support(m, idx, l, false)? || support(m, idx, r, false)?,
        LowerFormula::Or(l, r) if positive => support(m, idx, l, true)? || support(m, idx, r, true)?,
        LowerFormula::Or(l, r) => support(m, idx, l, false)? && support(m, idx, r, false)?,
    })
}

/// Value of `phi` at `state`, obtained from the positive and negative
/// support clauses.
pub fn eval_state(m: &BDModel, state: &str, phi: &LowerFormula) -> Result<FourValue, BdError> {
    let idx = m.state_index(state)?;
    m.check_atoms(phi)?;
    Ok(FourValue::from_bits(support(m, idx, phi, true)?, support(m, idx, phi, false)?))
}

/// Positive and negative extensions of `phi`.
pub fn extensions(m: &BDModel, phi: &LowerFormula) -> Result<(BTreeSet<String>, BTreeSet<String>), BdError> {
    let values = m.eval_all(phi)?;
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for (state, v) in m.states.iter().zip(values) {
        let (p, n) = v.bits();
        if p {
            pos.insert(state.clone());
        }
        if n {
            neg.insert(state.clone());
        }
    }
    Ok((pos, neg))
}

/// A single-state valuation of atoms into the Belnap-Dunn square.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation4(pub BTreeMap<String, FourValue>);

impl Valuation4 {
    pub fn get(&self, atom: &str) -> Option<FourValue> {
        self.0.get(atom).copied()
    }
}

impl FromIterator<(String, FourValue)> for Valuation4 {
    fn from_iter<I: IntoIterator<Item = (String, FourValue)>>(iter: I) -> Self {
        Valuation4(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (atom, v) in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{atom}={v}")?;
        }
        Ok(())
    }
}

/// Folds `phi` through the operations of the square.
pub fn eval_val(v: &Valuation4, phi: &LowerFormula) -> Result<FourValue, BdError> {
    Ok(match phi {
        LowerFormula::Atom(a) => v.get(a).ok_or_else(|| BdError::MissingAtom(a.clone()))?,
        LowerFormula::Neg(inner) => eval_val(v, inner)?.neg(),
        LowerFormula::And(l, r) => eval_val(v, l)?.meet_t(eval_val(v, r)?),
        LowerFormula::Or(l, r) => eval_val(v, l)?.join_t(eval_val(v, r)?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The first countermodel in enumeration order.
    Fails(Valuation4),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

// Formula with atoms resolved to positions in the valuation vector.
enum Compiled {
    Atom(usize),
    Neg(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(phi: &LowerFormula, atoms: &[String]) -> Self {
        match phi {
            LowerFormula::Atom(a) => Compiled::Atom(atoms.binary_search(a).expect("atom collected")),
            LowerFormula::Neg(i) => Compiled::Neg(Box::new(Self::new(i, atoms))),
            LowerFormula::And(l, r) => Compiled::And(Box::new(Self::new(l, atoms)), Box::new(Self::new(r, atoms))),
            LowerFormula::Or(l, r) => Compiled::Or(Box::new(Self::new(l, atoms)), Box::new(Self::new(r, atoms))),
        }
    }

    fn eval(&self, v: &[FourValue]) -> FourValue {
        match self {
            Compiled::Atom(i) => v[*i],
            Compiled::Neg(i) => i.eval(v).neg(),
            Compiled::And(l, r) => l.eval(v).meet_t(r.eval(v)),
            Compiled::Or(l, r) => l.eval(v).join_t(r.eval(v)),
        }
    }
}

/// `gamma ⊨ phi` in the four-valued matrix with designated `{t, b}`, with
/// the default atom cap.
pub fn entails_bd(gamma: &[LowerFormula], phi: &LowerFormula) -> Result<Verdict, BdError> {
    entails_bd_capped(gamma, phi, DEFAULT_ATOM_CAP)
}

/// Exhaustive check over all `4^n` valuations. Valuations are enumerated
/// with atoms in name order, the first atom varying slowest and values in
/// the order `t, f, b, n`; the first countermodel found is returned.
pub fn entails_bd_capped(gamma: &[LowerFormula], phi: &LowerFormula, cap: usize) -> Result<Verdict, BdError> {
    let mut set = BTreeSet::new();
    for g in gamma {
        g.collect_atoms(&mut set);
    }
    phi.collect_atoms(&mut set);
    let atoms: Vec<String> = set.into_iter().collect();
    if atoms.len() > cap {
        return Err(BdError::AtomBudget { atoms: atoms.len(), cap });
    }
    let premises: Vec<Compiled> = gamma.iter().map(|g| Compiled::new(g, &atoms)).collect();
    let conclusion = Compiled::new(phi, &atoms);

    let n = atoms.len();
    let mut digits = vec![0usize; n];
    let mut vals = vec![FourValue::ALL[0]; n];
    loop {
        for (v, d) in vals.iter_mut().zip(&digits) {
            *v = FourValue::ALL[*d];
        }
        if premises.iter().all(|p| p.eval(&vals).is_designated()) && !conclusion.eval(&vals).is_designated() {
            return Ok(Verdict::Fails(atoms.iter().cloned().zip(vals.iter().copied()).collect()));
        }
        // odometer, last atom fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(Verdict::Holds);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 4 {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// The value table of `phi` over all valuations of `atoms` (enumeration
/// order as in [`entails_bd_capped`]). Two formulas over `atoms` are
/// BD-equivalent exactly when their signatures coincide.
pub fn signature(phi: &LowerFormula, atoms: &[String]) -> Vec<FourValue> {
    let mut sorted = atoms.to_vec();
    sorted.sort();
    sorted.dedup();
    let compiled = Compiled::new(phi, &sorted);
    let n = sorted.len();
    let total = 4usize.pow(n as u32);
    let mut vals = vec![FourValue::T; n];
    (0..total)
        .map(|mut code| {
            for slot in vals.iter_mut().rev() {
                *slot = FourValue::ALL[code % 4];
                code /= 4;
            }
            compiled.eval(&vals)
        })
        .collect()
}

/// All formulas over `atoms` with connective depth at most `depth`, in
/// generation order. With `dedup`, only the first representative of each
/// BD-equivalence class is kept.
pub fn universe(atoms: &[String], depth: usize, dedup: bool) -> Vec<LowerFormula> {
    let mut seen: HashSet<Vec<FourValue>> = HashSet::new();
    let mut keep = |f: &LowerFormula| !dedup || seen.insert(signature(f, atoms));
    let mut all: Vec<LowerFormula> = Vec::new();
    for a in atoms {
        let f = LowerFormula::atom(a.clone());
        if keep(&f) {
            all.push(f);
        }
    }
    let mut seen_syntax: HashSet<LowerFormula> = all.iter().cloned().collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut fresh = Vec::new();
        let mut push = |f: LowerFormula, fresh: &mut Vec<LowerFormula>| {
            if seen_syntax.insert(f.clone()) && keep(&f) {
                fresh.push(f);
            }
        };
        for f in &prev {
            push(LowerFormula::neg(f.clone()), &mut fresh);
        }
        for l in &prev {
            for r in &prev {
                push(LowerFormula::and(l.clone(), r.clone()), &mut fresh);
                push(LowerFormula::or(l.clone(), r.clone()), &mut fresh);
            }
        }
        all.extend(fresh);
    }
    all
}

/// A finite set of event formulas together with the BD entailments that
/// hold between distinct members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    formulas: Vec<LowerFormula>,
    entailments: Vec<(usize, usize)>,
}

impl Universe {
    pub fn new(formulas: Vec<LowerFormula>) -> Result<Self, BdError> {
        let mut entailments = Vec::new();
        for (i, a) in formulas.iter().enumerate() {
            for (j, b) in formulas.iter().enumerate() {
                if i != j && entails_bd(std::slice::from_ref(a), b)?.holds() {
                    entailments.push((i, j));
                }
            }
        }
        Ok(Universe { formulas, entailments })
    }

    pub fn formulas(&self) -> &[LowerFormula] {
        &self.formulas
    }

    /// Index pairs `(i, j)`, `i != j`, with `formulas[i] ⊨ formulas[j]`.
    pub fn entailments(&self) -> &[(usize, usize)] {
        &self.entailments
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

/// A single-conclusion sequent `premises ⊢ conclusion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<LowerFormula>,
    pub conclusion: LowerFormula,
}

impl Sequent {
    pub fn new(premises: Vec<LowerFormula>, conclusion: LowerFormula) -> Self {
        Sequent { premises, conclusion }
    }

    pub fn holds(&self) -> Result<bool, BdError> {
        Ok(entails_bd(&self.premises, &self.conclusion)?.holds())
    }
}

/// An instance of an inference rule over sequents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

impl RuleInstance {
    /// Semantic soundness of this instance: valid premises give a valid
    /// conclusion.
    pub fn sound(&self) -> Result<bool, BdError> {
        for p in &self.premises {
            if !p.holds()? {
                return Ok(true);
            }
        }
        self.conclusion.holds()
    }
}

fn seq(premise: &LowerFormula, conclusion: LowerFormula) -> Sequent {
    Sequent::new(vec![premise.clone()], conclusion)
}

/// The seven axiom schemas of BD instantiated at `a`, `b`, `c`.
pub fn bd_axioms(a: &LowerFormula, b: &LowerFormula, c: &LowerFormula) -> Vec<(&'static str, Sequent)> {
    use LowerFormula as L;
    let ab = L::and(a.clone(), b.clone());
    vec![
        ("and-elim-left", seq(&ab, a.clone())),
        ("and-elim-right", seq(&ab, b.clone())),
        ("or-intro-left", seq(a, L::or(b.clone(), a.clone()))),
        ("or-intro-right", seq(a, L::or(a.clone(), b.clone()))),
        ("double-negation-intro", seq(a, L::neg(L::neg(a.clone())))),
        ("double-negation-elim", seq(&L::neg(L::neg(a.clone())), a.clone())),
        (
            "distribution",
            seq(
                &L::and(a.clone(), L::or(b.clone(), c.clone())),
                L::or(ab.clone(), L::and(a.clone(), c.clone())),
            ),
        ),
    ]
}

/// The four rules of BD instantiated at `a`, `b`, `c`.
pub fn bd_rules(a: &LowerFormula, b: &LowerFormula, c: &LowerFormula) -> Vec<(&'static str, RuleInstance)> {
    use LowerFormula as L;
    let rule = |premises: Vec<Sequent>, conclusion: Sequent| RuleInstance { premises, conclusion };
    vec![
        ("cut", rule(vec![seq(a, b.clone()), seq(b, c.clone())], seq(a, c.clone()))),
        ("and-intro", rule(vec![seq(a, b.clone()), seq(a, c.clone())], seq(a, L::and(b.clone(), c.clone())))),
        (
            "or-elim",
            rule(vec![seq(a, c.clone()), seq(b, c.clone())], seq(&L::or(a.clone(), b.clone()), c.clone())),
        ),
        ("contraposition", rule(vec![seq(a, b.clone())], seq(&L::neg(b.clone()), L::neg(a.clone())))),
    ]
}
