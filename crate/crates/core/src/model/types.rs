//! Compact elements of a completed filter model, kept as syntactic
//! intersections of atoms and arrows.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Name of a non-ω atom.
pub type AtomName = Arc<str>;

/// One conjunct of a [`TypeExpr`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Atom(AtomName),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
}

/// A finite intersection of factors. The empty intersection is ω.
///
/// Construction through [`TypeExpr::atom`], [`TypeExpr::arrow`] and
/// [`TypeExpr::meet`] keeps the syntactic canonical form: no duplicates and
/// no arrow with an ω target. Model-aware normalisation (meet table, arrow
/// table) lives in [`crate::model::Model::normalize`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeExpr {
    factors: BTreeSet<Factor>,
}

impl TypeExpr {
    pub fn omega() -> Self {
        TypeExpr::default()
    }

    pub fn atom(name: impl Into<AtomName>) -> Self {
        let mut factors = BTreeSet::new();
        factors.insert(Factor::Atom(name.into()));
        TypeExpr { factors }
    }

    pub fn arrow(source: TypeExpr, target: TypeExpr) -> Self {
        if target.is_omega() {
            return TypeExpr::omega();
        }
        let mut factors = BTreeSet::new();
        factors.insert(Factor::Arrow(Box::new(source), Box::new(target)));
        TypeExpr { factors }
    }

    pub fn from_factors(it: impl IntoIterator<Item = Factor>) -> Self {
        let mut t = TypeExpr::omega();
        for f in it {
            t.push(f);
        }
        t
    }

    fn push(&mut self, f: Factor) {
        match f {
            Factor::Arrow(_, ref tgt) if tgt.is_omega() => {}
            f => {
                self.factors.insert(f);
            }
        }
    }

    pub fn meet(&self, other: &TypeExpr) -> TypeExpr {
        let mut t = self.clone();
        for f in &other.factors {
            t.push(f.clone());
        }
        t
    }

    pub fn meet_all<'a>(it: impl IntoIterator<Item = &'a TypeExpr>) -> TypeExpr {
        let mut t = TypeExpr::omega();
        for x in it {
            for f in &x.factors {
                t.push(f.clone());
            }
        }
        t
    }

    /// Syntactically ω (no factors). Semantic ω-equivalence needs a model.
    pub fn is_omega(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The single factor, if there is exactly one.
    pub fn as_single(&self) -> Option<&Factor> {
        if self.factors.len() == 1 {
            self.factors.iter().next()
        } else {
            None
        }
    }

    pub fn as_atom(&self) -> Option<&AtomName> {
        match self.as_single() {
            Some(Factor::Atom(a)) => Some(a),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Atom(_)))
    }

    /// Every atom occurring anywhere in the expression.
    pub fn atoms(&self) -> BTreeSet<AtomName> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<AtomName>) {
        for f in &self.factors {
            match f {
                Factor::Atom(a) => {
                    out.insert(a.clone());
                }
                Factor::Arrow(s, t) => {
                    s.collect_atoms(out);
                    t.collect_atoms(out);
                }
            }
        }
    }

    /// Arrow nesting depth; atoms and ω have depth 0.
    pub fn depth(&self) -> usize {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Atom(_) => 0,
                Factor::Arrow(s, t) => 1 + s.depth().max(t.depth()),
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of atom leaves, counting ω leaves of arrows as one.
    pub fn leaves(&self) -> usize {
        if self.factors.is_empty() {
            return 1;
        }
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Atom(_) => 1,
                Factor::Arrow(s, t) => s.leaves() + t.leaves(),
            })
            .sum()
    }
}

impl From<Factor> for TypeExpr {
    fn from(f: Factor) -> Self {
        TypeExpr::from_factors([f])
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, f, false)
    }
}

// `nested` is set on the source side of an arrow, where arrows and
// intersections need parentheses.
fn fmt_type(t: &TypeExpr, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
    if t.factors.is_empty() {
        return write!(f, "w");
    }
    let paren = nested && (t.factors.len() > 1 || matches!(t.as_single(), Some(Factor::Arrow(..))));
    if paren {
        write!(f, "(")?;
    }
    for (i, fac) in t.factors.iter().enumerate() {
        if i > 0 {
            write!(f, " /\\ ")?;
        }
        match fac {
            Factor::Atom(a) => write!(f, "{a}")?,
            Factor::Arrow(s, tg) => {
                let wrap = t.factors.len() > 1;
                if wrap {
                    write!(f, "(")?;
                }
                fmt_type(s, f, true)?;
                write!(f, " -> ")?;
                // right-associative; an intersection target needs parens
                fmt_type(tg, f, tg.factors.len() > 1)?;
                if wrap {
                    write!(f, ")")?;
                }
            }
        }
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_target_collapses() {
        let t = TypeExpr::arrow(TypeExpr::atom("a"), TypeExpr::omega());
        assert!(t.is_omega());
    }

    #[test]
    fn meet_is_idempotent_and_commutative() {
        let a = TypeExpr::atom("a");
        let b = TypeExpr::arrow(TypeExpr::atom("a"), TypeExpr::atom("b"));
        assert_eq!(a.meet(&a), a);
        assert_eq!(a.meet(&b), b.meet(&a));
        assert_eq!(a.meet(&TypeExpr::omega()), a);
    }

    #[test]
    fn display_right_assoc() {
        let a = TypeExpr::atom("a");
        let t = TypeExpr::arrow(
            TypeExpr::arrow(a.clone(), a.clone()),
            TypeExpr::arrow(a.clone(), a.clone()),
        );
        assert_eq!(t.to_string(), "(a -> a) -> a -> a");
        assert_eq!(a.meet(&TypeExpr::atom("b")).to_string(), "a /\\ b");
    }
}
