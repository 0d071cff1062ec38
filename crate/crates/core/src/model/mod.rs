//! Finitely-presented partial DEFiMs and their completions.
//!
//! A [`Model`] holds the atom tables of a presentation. Elements of the
//! completion are [`TypeExpr`]s compared with [`Model::leq`]. The model keeps
//! an internal subtyping cache behind a `RefCell`, so a model value is a
//! single-threaded session; clone it to hand a private session to another
//! thread.

mod cursor;
mod dsl;
mod order;
mod strat;
mod types;
mod universe;
mod validate;

#[cfg(test)]
mod tests;

pub(crate) use cursor::{is_type_ident, is_var_ident, Cursor};
pub use dsl::parse_type_in;
pub(crate) use dsl::parse_type as dsl_parse_type;
pub use strat::{sp_search, sp_verify, StratWitness, DEFAULT_SP_ATOM_BOUND};
pub use types::{AtomName, Factor, TypeExpr};
pub use universe::type_universe;
pub use validate::{check_model, Report, Violation, ViolationKind};

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::error::ModelError;

/// Default number of fresh arrow comparisons one `leq` query may perform.
pub const DEFAULT_LEQ_BUDGET: usize = 200_000;

/// An atom position: `None` is ω.
pub type Slot = Option<usize>;

/// A set of arrow pairs `(source, target)`.
pub type ExtSet = BTreeSet<(TypeExpr, TypeExpr)>;

#[derive(Debug)]
pub struct Model {
    name: String,
    omega_name: AtomName,
    atoms: Vec<AtomName>,
    index: HashMap<AtomName, usize>,
    meet_entries: Vec<(Slot, Slot, Slot)>,
    meets: HashMap<(usize, usize), usize>,
    arrow_entries: Vec<(Slot, Slot, Slot)>,
    arrows: HashMap<(Slot, Slot), Slot>,
    ext: Vec<Vec<(TypeExpr, TypeExpr)>>,
    // ext with both sides normalised and ω targets dropped
    ext_norm: Vec<Vec<(TypeExpr, TypeExpr)>>,
    leq_budget: usize,
    cache: RefCell<order::LeqCache>,
}

impl Clone for Model {
    fn clone(&self) -> Self {
        Model {
            name: self.name.clone(),
            omega_name: self.omega_name.clone(),
            atoms: self.atoms.clone(),
            index: self.index.clone(),
            meet_entries: self.meet_entries.clone(),
            meets: self.meets.clone(),
            arrow_entries: self.arrow_entries.clone(),
            arrows: self.arrows.clone(),
            ext: self.ext.clone(),
            ext_norm: self.ext_norm.clone(),
            leq_budget: self.leq_budget,
            cache: RefCell::new(order::LeqCache::default()),
        }
    }
}

/// Incremental construction of a [`Model`]; the DSL parser goes through it.
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    name: String,
    omega_name: AtomName,
    atoms: Vec<AtomName>,
    meets: Vec<(AtomName, AtomName, AtomName)>,
    arrows: Vec<(AtomName, AtomName, AtomName)>,
    ext: Vec<(AtomName, Vec<(TypeExpr, TypeExpr)>)>,
}

impl ModelBuilder {
    pub fn new(name: &str, omega_name: &str) -> Self {
        ModelBuilder {
            name: name.to_string(),
            omega_name: omega_name.into(),
            atoms: Vec::new(),
            meets: Vec::new(),
            arrows: Vec::new(),
            ext: Vec::new(),
        }
    }

    pub fn atom(mut self, name: &str) -> Self {
        self.atoms.push(name.into());
        self
    }

    pub fn meet(mut self, a: &str, b: &str, c: &str) -> Self {
        self.meets.push((a.into(), b.into(), c.into()));
        self
    }

    pub fn arrow(mut self, a: &str, b: &str, c: &str) -> Self {
        self.arrows.push((a.into(), b.into(), c.into()));
        self
    }

    pub fn ext(mut self, a: &str, pairs: Vec<(TypeExpr, TypeExpr)>) -> Self {
        self.ext.retain(|(n, _)| &**n != a);
        self.ext.push((a.into(), pairs));
        self
    }

    pub fn build(self) -> Result<Model, ModelError> {
        let mut index = HashMap::new();
        let mut atoms = Vec::new();
        for a in &self.atoms {
            if a.is_empty() || *a == self.omega_name || &**a == "w" || index.contains_key(a) {
                return Err(ModelError::Parse {
                    line: 0,
                    msg: format!("duplicate or reserved atom name `{a}`"),
                });
            }
            index.insert(a.clone(), atoms.len());
            atoms.push(a.clone());
        }
        let slot = |n: &AtomName| -> Result<Slot, ModelError> {
            if *n == self.omega_name || &**n == "w" {
                Ok(None)
            } else {
                index
                    .get(n)
                    .copied()
                    .map(Some)
                    .ok_or_else(|| ModelError::UnknownAtom(n.to_string()))
            }
        };
        let mut meet_entries = Vec::new();
        let mut meets = HashMap::new();
        for (a, b, c) in &self.meets {
            let (a, b, c) = (slot(a)?, slot(b)?, slot(c)?);
            meet_entries.push((a, b, c));
            if let (Some(a), Some(b), Some(c)) = (a, b, c) {
                meets.entry((a, b)).or_insert(c);
                meets.entry((b, a)).or_insert(c);
            }
        }
        let mut arrow_entries = Vec::new();
        let mut arrows = HashMap::new();
        for (a, b, c) in &self.arrows {
            let (a, b, c) = (slot(a)?, slot(b)?, slot(c)?);
            arrow_entries.push((a, b, c));
            arrows.entry((a, b)).or_insert(c);
        }
        let mut ext = vec![Vec::new(); atoms.len()];
        let mut seen = vec![false; atoms.len()];
        for (a, pairs) in self.ext {
            match slot(&a)? {
                Some(i) => {
                    ext[i] = pairs;
                    seen[i] = true;
                }
                None => {
                    return Err(ModelError::Parse {
                        line: 0,
                        msg: "ext of ω is fixed to the empty set".into(),
                    })
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(ModelError::Parse {
                line: 0,
                msg: format!("missing ext entry for atom `{}`", atoms[i]),
            });
        }
        let mut model = Model {
            name: self.name,
            omega_name: self.omega_name,
            atoms,
            index,
            meet_entries,
            meets,
            arrow_entries,
            arrows,
            ext,
            ext_norm: Vec::new(),
            leq_budget: DEFAULT_LEQ_BUDGET,
            cache: RefCell::new(order::LeqCache::default()),
        };
        for pairs in &model.ext {
            for (s, t) in pairs {
                model.check_known(s)?;
                model.check_known(t)?;
            }
        }
        model.normalize_ext()?;
        Ok(model)
    }
}

impl Model {
    /// Parses the line-oriented model DSL.
    pub fn parse(src: &str) -> Result<Model, ModelError> {
        dsl::parse_model(src)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn omega_name(&self) -> &str {
        &self.omega_name
    }

    /// Non-ω atoms in declaration order.
    pub fn atoms(&self) -> &[AtomName] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The element named by a slot, ω for `None`.
    pub fn slot_type(&self, s: Slot) -> TypeExpr {
        match s {
            None => TypeExpr::omega(),
            Some(i) => TypeExpr::atom(self.atoms[i].clone()),
        }
    }

    pub fn slot_name(&self, s: Slot) -> &str {
        match s {
            None => &self.omega_name,
            Some(i) => &self.atoms[i],
        }
    }

    pub fn meet_entries(&self) -> &[(Slot, Slot, Slot)] {
        &self.meet_entries
    }

    pub fn arrow_entries(&self) -> &[(Slot, Slot, Slot)] {
        &self.arrow_entries
    }

    /// Table meet of two atoms; `None` when the meet is not a named atom.
    pub fn atom_meet(&self, a: Slot, b: Slot) -> Option<Slot> {
        match (a, b) {
            (None, x) | (x, None) => Some(x),
            (Some(a), Some(b)) if a == b => Some(Some(a)),
            (Some(a), Some(b)) => self.meets.get(&(a, b)).map(|&c| Some(c)),
        }
    }

    /// Atom order read off the meet table.
    pub fn atom_leq(&self, a: Slot, b: Slot) -> bool {
        match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a == b || self.meets.get(&(a, b)) == Some(&a),
        }
    }

    pub fn arrow_entry(&self, a: Slot, b: Slot) -> Option<Slot> {
        self.arrows.get(&(a, b)).copied()
    }

    /// The ext table entry of an atom.
    pub fn ext_atom(&self, i: usize) -> &[(TypeExpr, TypeExpr)] {
        &self.ext[i]
    }

    pub fn set_leq_budget(&mut self, budget: usize) {
        self.leq_budget = budget;
    }

    /// A copy of this model with one ext entry replaced.
    pub fn with_ext(&self, atom: &str, pairs: Vec<(TypeExpr, TypeExpr)>) -> Result<Model, ModelError> {
        let i = self
            .atom_index(atom)
            .ok_or_else(|| ModelError::UnknownAtom(atom.to_string()))?;
        let mut m = self.clone();
        m.ext[i] = pairs;
        for (s, t) in &m.ext[i] {
            m.check_known(s)?;
            m.check_known(t)?;
        }
        m.normalize_ext()?;
        m.clear_cache();
        Ok(m)
    }

    fn normalize_ext(&mut self) -> Result<(), ModelError> {
        let mut out = Vec::with_capacity(self.ext.len());
        for pairs in &self.ext {
            let mut v = Vec::new();
            for (s, g) in pairs {
                let g = self.normalize(g)?;
                if !g.is_omega() {
                    v.push((self.normalize(s)?, g));
                }
            }
            out.push(v);
        }
        self.ext_norm = out;
        Ok(())
    }

    /// The ext entry of an atom in normal form, ω targets dropped.
    pub(crate) fn ext_norm(&self, i: usize) -> &[(TypeExpr, TypeExpr)] {
        &self.ext_norm[i]
    }

    fn check_known(&self, t: &TypeExpr) -> Result<(), ModelError> {
        for a in t.atoms() {
            if !self.index.contains_key(&a) {
                return Err(ModelError::UnknownAtom(a.to_string()));
            }
        }
        Ok(())
    }

    pub(crate) fn idx(&self, a: &AtomName) -> Result<usize, ModelError> {
        self.index
            .get(a)
            .copied()
            .ok_or_else(|| ModelError::UnknownAtom(a.to_string()))
    }

    /// Closes a set of atoms under table meets and drops atoms above others.
    pub(crate) fn reduce_atoms(&self, set: &mut BTreeSet<usize>) {
        loop {
            let v: Vec<usize> = set.iter().copied().collect();
            let mut changed = false;
            'outer: for (i, &a) in v.iter().enumerate() {
                for &b in &v[i + 1..] {
                    if let Some(&c) = self.meets.get(&(a, b)) {
                        set.remove(&a);
                        set.remove(&b);
                        set.insert(c);
                        changed = true;
                        break 'outer;
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Model-aware canonical form: components normalised, arrow-table entries
    /// folded into atoms, atoms closed under the meet table.
    pub fn normalize(&self, t: &TypeExpr) -> Result<TypeExpr, ModelError> {
        let mut atoms = BTreeSet::new();
        let mut arrows = Vec::new();
        for f in t.factors() {
            match f {
                Factor::Atom(a) => {
                    atoms.insert(self.idx(a)?);
                }
                Factor::Arrow(s, g) => {
                    let s = self.normalize(s)?;
                    let g = self.normalize(g)?;
                    if g.is_omega() {
                        continue;
                    }
                    match (self.as_slot(&s)?, self.as_slot(&g)?) {
                        (Some(ss), Some(gs)) => match self.arrow_entry(ss, gs) {
                            Some(Some(c)) => {
                                atoms.insert(c);
                            }
                            Some(None) => {}
                            None => arrows.push(Factor::Arrow(Box::new(s), Box::new(g))),
                        },
                        _ => arrows.push(Factor::Arrow(Box::new(s), Box::new(g))),
                    }
                }
            }
        }
        self.reduce_atoms(&mut atoms);
        Ok(TypeExpr::from_factors(
            atoms
                .into_iter()
                .map(|i| Factor::Atom(self.atoms[i].clone()))
                .chain(arrows),
        ))
    }

    /// `Some(slot)` when `t` is ω or a single atom.
    fn as_slot(&self, t: &TypeExpr) -> Result<Option<Slot>, ModelError> {
        if t.is_omega() {
            return Ok(Some(None));
        }
        match t.as_atom() {
            Some(a) => Ok(Some(Some(self.idx(a)?))),
            None => Ok(None),
        }
    }

    /// The arrow decomposition of an element: union over its factors, with
    /// atoms read from the ext table and ω decomposing to nothing.
    pub fn ext_of(&self, t: &TypeExpr) -> Result<ExtSet, ModelError> {
        let mut out = ExtSet::new();
        for f in t.factors() {
            match f {
                Factor::Atom(a) => {
                    let i = self.idx(a)?;
                    out.extend(self.ext_norm[i].iter().cloned());
                }
                Factor::Arrow(s, g) => {
                    let g = self.normalize(g)?;
                    if !g.is_omega() {
                        out.insert((self.normalize(s)?, g));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Greatest lower bound, in canonical form.
    pub fn meet(&self, a: &TypeExpr, b: &TypeExpr) -> Result<TypeExpr, ModelError> {
        self.normalize(&a.meet(b))
    }

    pub fn eq(&self, a: &TypeExpr, b: &TypeExpr) -> Result<bool, ModelError> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    /// Whether `t` denotes ω in the completion.
    pub fn is_omega(&self, t: &TypeExpr) -> Result<bool, ModelError> {
        Ok(self.normalize(t)?.is_omega())
    }

    /// Parses a type written in the DSL type syntax against this model.
    pub fn parse_type(&self, src: &str) -> Result<TypeExpr, ModelError> {
        dsl::parse_type_in(self, src)
    }

    /// Prints a model back in the DSL.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("model {}\natoms {}", self.name, self.omega_name);
        for a in &self.atoms {
            out.push(' ');
            out.push_str(a);
        }
        out.push('\n');
        for &(a, b, c) in &self.meet_entries {
            out += &format!("meet {} {} = {}\n", self.slot_name(a), self.slot_name(b), self.slot_name(c));
        }
        for &(a, b, c) in &self.arrow_entries {
            out += &format!("arrow {} {} = {}\n", self.slot_name(a), self.slot_name(b), self.slot_name(c));
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let pairs: Vec<String> = self.ext[i]
                .iter()
                .map(|(s, t)| format!("({s} -> {t})"))
                .collect();
            out += &format!("ext {a} = {}\n", pairs.join(", "));
        }
        out
    }
}

/// Models shipped with the crate, by file stem.
pub mod builtin {
    use super::Model;

    pub const SOURCES: &[(&str, &str)] = &[
        ("dinf", include_str!("../../models/dinf.dm")),
        ("pinf", include_str!("../../models/pinf.dm")),
        ("norm", include_str!("../../models/norm.dm")),
        ("z1", include_str!("../../models/z1.dm")),
        ("z2", include_str!("../../models/z2.dm")),
        ("z3", include_str!("../../models/z3.dm")),
        ("z4", include_str!("../../models/z4.dm")),
        ("z5", include_str!("../../models/z5.dm")),
        ("u1", include_str!("../../models/u1.dm")),
        ("u2", include_str!("../../models/u2.dm")),
        ("u3", include_str!("../../models/u3.dm")),
        ("kerth", include_str!("../../models/kerth.dm")),
    ];

    /// Names of the shipped models.
    pub fn names() -> impl Iterator<Item = &'static str> {
        SOURCES.iter().map(|(n, _)| *n)
    }

    pub fn source(name: &str) -> Option<&'static str> {
        SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    /// Loads a shipped model; panics only if a shipped file is malformed.
    pub fn load(name: &str) -> Option<Model> {
        source(name).map(|s| Model::parse(s).expect("shipped model parses"))
    }
}
