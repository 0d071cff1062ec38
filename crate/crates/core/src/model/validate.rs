//! Axiom checks for finite presentations.

use std::fmt;

use super::{ExtSet, Model, Slot, TypeExpr};
use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Idempotence,
    Commutativity,
    Associativity,
    OmegaNeutrality,
    ArrowAxiom,
    ExtReconstruction,
    OrderCoherence,
    Distributivity,
    Budget,
    SpOmegaRank,
    SpRank,
    SpTargetPolarity,
    SpSourcePolarity,
    SpMeet,
    SpCoherence,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Idempotence => "idempotence",
            ViolationKind::Commutativity => "commutativity",
            ViolationKind::Associativity => "associativity",
            ViolationKind::OmegaNeutrality => "omega-neutrality",
            ViolationKind::ArrowAxiom => "arrow-axiom",
            ViolationKind::ExtReconstruction => "ext-reconstruction",
            ViolationKind::OrderCoherence => "order-coherence",
            ViolationKind::Distributivity => "distributivity",
            ViolationKind::Budget => "budget",
            ViolationKind::SpOmegaRank => "sp-omega-rank",
            ViolationKind::SpRank => "sp-rank",
            ViolationKind::SpTargetPolarity => "sp-target-polarity",
            ViolationKind::SpSourcePolarity => "sp-source-polarity",
            ViolationKind::SpMeet => "sp-meet",
            ViolationKind::SpCoherence => "sp-coherence",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Violations found by a check; empty means the check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub(crate) fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "VALID");
        }
        writeln!(f, "INVALID ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks the semilattice laws, the arrow axiom, ext reconstruction, the
/// coherence of the table order with ext, and distributivity on atoms.
pub fn check_model(m: &Model) -> Report {
    let mut r = Report::default();
    semilattice(m, &mut r);
    arrow_axiom(m, &mut r);
    if let Err(e) = ext_checks(m, &mut r) {
        r.push(ViolationKind::Budget, e.to_string());
    }
    if let Err(e) = distributivity(m, &mut r) {
        r.push(ViolationKind::Budget, e.to_string());
    }
    r
}

fn slots(m: &Model) -> Vec<Slot> {
    std::iter::once(None)
        .chain((0..m.atoms().len()).map(Some))
        .collect()
}

fn semilattice(m: &Model, r: &mut Report) {
    let entries = m.meet_entries();
    for (i, &(a, b, c)) in entries.iter().enumerate() {
        if a == b && c != a {
            r.push(
                ViolationKind::Idempotence,
                format!("{0} ∧ {0} = {1}", m.slot_name(a), m.slot_name(c)),
            );
        }
        for (x, y) in [(a, b), (b, a)] {
            if x.is_none() && c != y {
                r.push(
                    ViolationKind::OmegaNeutrality,
                    format!("{} ∧ {} = {}", m.slot_name(a), m.slot_name(b), m.slot_name(c)),
                );
                break;
            }
        }
        for &(a2, b2, c2) in &entries[i + 1..] {
            let same = (a2, b2) == (a, b) || (a2, b2) == (b, a);
            if same && c2 != c {
                r.push(
                    ViolationKind::Commutativity,
                    format!(
                        "{} ∧ {} = {} but {} ∧ {} = {}",
                        m.slot_name(a),
                        m.slot_name(b),
                        m.slot_name(c),
                        m.slot_name(a2),
                        m.slot_name(b2),
                        m.slot_name(c2)
                    ),
                );
            }
        }
    }
    let all = slots(m);
    for &a in &all {
        for &b in &all {
            for &c in &all {
                let left = m.atom_meet(a, b).and_then(|ab| m.atom_meet(ab, c));
                let right = m.atom_meet(b, c).and_then(|bc| m.atom_meet(a, bc));
                if let (Some(l), Some(rt)) = (left, right) {
                    if l != rt {
                        r.push(
                            ViolationKind::Associativity,
                            format!(
                                "({a} ∧ {b}) ∧ {c} = {l} but {a} ∧ ({b} ∧ {c}) = {rt}",
                                a = m.slot_name(a),
                                b = m.slot_name(b),
                                c = m.slot_name(c),
                                l = m.slot_name(l),
                                rt = m.slot_name(rt)
                            ),
                        );
                    }
                }
            }
        }
    }
}

fn arrow_axiom(m: &Model, r: &mut Report) {
    let entries = m.arrow_entries();
    for (i, &(s, t, c)) in entries.iter().enumerate() {
        if t.is_none() && c.is_some() {
            r.push(
                ViolationKind::ArrowAxiom,
                format!("{} -> ω = {} is not ω", m.slot_name(s), m.slot_name(c)),
            );
        }
        for &(s2, t2, c2) in &entries[i + 1..] {
            if s2 != s {
                continue;
            }
            if t2 == t && c2 != c {
                r.push(
                    ViolationKind::ArrowAxiom,
                    format!("{} -> {} has two values", m.slot_name(s), m.slot_name(t)),
                );
                continue;
            }
            let Some(tm) = m.atom_meet(t, t2) else { continue };
            match m.arrow_entry(s, tm) {
                None => r.push(
                    ViolationKind::ArrowAxiom,
                    format!(
                        "{s} -> {t} and {s} -> {t2} are defined but {s} -> {tm} is not",
                        s = m.slot_name(s),
                        t = m.slot_name(t),
                        t2 = m.slot_name(t2),
                        tm = m.slot_name(tm)
                    ),
                ),
                Some(v) => {
                    if let Some(cm) = m.atom_meet(c, c2) {
                        if cm != v {
                            r.push(
                                ViolationKind::ArrowAxiom,
                                format!(
                                    "{s} -> {tm} = {v} differs from {c} ∧ {c2} = {cm}",
                                    s = m.slot_name(s),
                                    tm = m.slot_name(tm),
                                    v = m.slot_name(v),
                                    c = m.slot_name(c),
                                    c2 = m.slot_name(c2),
                                    cm = m.slot_name(cm)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn ext_of_slot(m: &Model, s: Slot) -> Result<ExtSet, ModelError> {
    m.ext_of(&m.slot_type(s))
}

fn ext_eq(m: &Model, a: &ExtSet, b: &ExtSet) -> Result<bool, ModelError> {
    Ok(m.ext_set_leq(a, b)? && m.ext_set_leq(b, a)?)
}

fn show(e: &ExtSet) -> String {
    let v: Vec<String> = e.iter().map(|(s, t)| format!("({s} -> {t})")).collect();
    format!("{{{}}}", v.join(", "))
}

fn ext_checks(m: &Model, r: &mut Report) -> Result<(), ModelError> {
    for &(s, t, c) in m.arrow_entries() {
        let ext_c = ext_of_slot(m, c)?;
        let mut pair = ExtSet::new();
        if t.is_some() {
            pair.insert((m.slot_type(s), m.slot_type(t)));
        }
        if !ext_eq(m, &ext_c, &pair)? {
            r.push(
                ViolationKind::ExtReconstruction,
                format!(
                    "{} -> {} = {} but ext({}) = {}",
                    m.slot_name(s),
                    m.slot_name(t),
                    m.slot_name(c),
                    m.slot_name(c),
                    show(&ext_c)
                ),
            );
        }
    }
    for &(a, b, c) in m.meet_entries() {
        let ext_c = ext_of_slot(m, c)?;
        let mut union = ext_of_slot(m, a)?;
        union.extend(ext_of_slot(m, b)?);
        if !ext_eq(m, &ext_c, &union)? {
            r.push(
                ViolationKind::ExtReconstruction,
                format!(
                    "{} ∧ {} = {} but ext({}) = {} is not ext({}) ∪ ext({})",
                    m.slot_name(a),
                    m.slot_name(b),
                    m.slot_name(c),
                    m.slot_name(c),
                    show(&ext_c),
                    m.slot_name(a),
                    m.slot_name(b)
                ),
            );
        }
    }
    for (i, name) in m.atoms().iter().enumerate() {
        if ext_of_slot(m, Some(i))?.is_empty() {
            r.push(
                ViolationKind::ExtReconstruction,
                format!("ext({name}) is empty, so {name} would equal ω"),
            );
        }
    }
    let n = m.atoms().len();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let table = m.atom_leq(Some(x), Some(y));
            let unfolded = m.ext_set_leq(&ext_of_slot(m, Some(x))?, &ext_of_slot(m, Some(y))?)?;
            if table != unfolded {
                r.push(
                    ViolationKind::OrderCoherence,
                    format!(
                        "table says {} ≤ {} is {table}, ext unfolding says {unfolded}",
                        m.atoms()[x],
                        m.atoms()[y]
                    ),
                );
            }
        }
    }
    Ok(())
}

fn distributivity(m: &Model, r: &mut Report) -> Result<(), ModelError> {
    let all = slots(m);
    let ty: Vec<TypeExpr> = all.iter().map(|&s| m.slot_type(s)).collect();
    for (ia, a) in ty.iter().enumerate() {
        for (ib, b) in ty.iter().enumerate() {
            for (ic, c) in ty.iter().enumerate().skip(ib + 1) {
                if m.leq(b, a)? || m.leq(c, a)? {
                    continue;
                }
                if !m.leq(&m.meet(b, c)?, a)? {
                    continue;
                }
                let mut found = false;
                'search: for b2 in &ty {
                    if !m.leq(b, b2)? {
                        continue;
                    }
                    for c2 in &ty {
                        if m.leq(c, c2)? && m.eq(&m.meet(b2, c2)?, a)? {
                            found = true;
                            break 'search;
                        }
                    }
                }
                if !found {
                    r.push(
                        ViolationKind::Distributivity,
                        format!(
                            "{} ≥ {} ∧ {} has no decomposition",
                            m.slot_name(all[ia]),
                            m.slot_name(all[ib]),
                            m.slot_name(all[ic])
                        ),
                    );
                }
            }
        }
    }
    Ok(())
}
