//! A bounded-unfolding subtyping oracle, independent of [`Model::leq`].
//!
//! Atoms on either side are unfolded into their ext pairs at most `k` times
//! along any path; a comparison that would need a further unfolding is
//! unknown. Side conditions that are unknown are handled by bracketing: the
//! definitely-selected pairs give a lower bound on the selected targets, the
//! possibly-selected pairs an upper bound.

use crate::error::ModelError;
use crate::model::{Factor, Model, TypeExpr};

/// `Some(b)` when the comparison is decided within `k` unfoldings.
pub fn leq_bounded(m: &Model, a: &TypeExpr, b: &TypeExpr, k: usize) -> Result<Option<bool>, ModelError> {
    let a = m.normalize(a)?;
    let b = m.normalize(b)?;
    leq(m, &a, &b, k)
}

fn and3(x: Option<bool>, y: Option<bool>) -> Option<bool> {
    match (x, y) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn leq(m: &Model, a: &TypeExpr, b: &TypeExpr, k: usize) -> Result<Option<bool>, ModelError> {
    let mut acc = Some(true);
    for f in b.factors() {
        let r = match f {
            Factor::Atom(x) => leq_atom(m, a, x, k)?,
            Factor::Arrow(s, g) => leq_arrow(m, a, s, g, k)?,
        };
        acc = and3(acc, r);
        if acc == Some(false) {
            break;
        }
    }
    Ok(acc)
}

fn leq_atom(m: &Model, a: &TypeExpr, x: &str, k: usize) -> Result<Option<bool>, ModelError> {
    let xi = m.atom_index(x).ok_or_else(|| ModelError::UnknownAtom(x.to_string()))?;
    let mut atoms = std::collections::BTreeSet::new();
    for f in a.factors() {
        if let Factor::Atom(y) = f {
            atoms.insert(m.atom_index(y).ok_or_else(|| ModelError::UnknownAtom(y.to_string()))?);
        }
    }
    if atoms.iter().any(|&y| m.atom_leq(Some(y), Some(xi))) {
        return Ok(Some(true));
    }
    if a.is_atomic() {
        // the meet of the atoms may still be below x
        let folded = m.normalize(a)?;
        if let Some(c) = folded.as_atom() {
            let ci = m.atom_index(c).expect("normalised atom");
            return Ok(Some(m.atom_leq(Some(ci), Some(xi))));
        }
        return Ok(Some(false));
    }
    if k == 0 {
        return Ok(None);
    }
    let mut acc = Some(true);
    for (s, g) in m.ext_atom(xi) {
        let s = m.normalize(s)?;
        let g = m.normalize(g)?;
        acc = and3(acc, leq_arrow(m, a, &s, &g, k - 1)?);
        if acc == Some(false) {
            break;
        }
    }
    Ok(acc)
}

fn leq_arrow(m: &Model, a: &TypeExpr, src: &TypeExpr, tgt: &TypeExpr, k: usize) -> Result<Option<bool>, ModelError> {
    if tgt.is_omega() {
        return Ok(Some(true));
    }
    if a.is_omega() {
        return Ok(Some(false));
    }
    let mut pairs = Vec::new();
    let mut complete = true;
    for f in a.factors() {
        match f {
            Factor::Arrow(s, g) => pairs.push(((**s).clone(), (**g).clone(), k)),
            Factor::Atom(x) => {
                if k == 0 {
                    complete = false;
                    continue;
                }
                let i = m.atom_index(x).ok_or_else(|| ModelError::UnknownAtom(x.to_string()))?;
                for (s, g) in m.ext_atom(i) {
                    pairs.push((m.normalize(s)?, m.normalize(g)?, k - 1));
                }
            }
        }
    }
    let mut sure = Vec::new();
    let mut maybe = Vec::new();
    for (s, g, kk) in pairs {
        match leq(m, src, &s, kk.min(k))? {
            Some(true) => {
                sure.push(g.clone());
                maybe.push(g);
            }
            None => maybe.push(g),
            Some(false) => {}
        }
    }
    let low = m.normalize(&TypeExpr::meet_all(sure.iter()))?;
    if leq(m, &low, tgt, k)? == Some(true) {
        return Ok(Some(true));
    }
    if !complete {
        return Ok(None);
    }
    let high = m.normalize(&TypeExpr::meet_all(maybe.iter()))?;
    if leq(m, &high, tgt, k)? == Some(false) {
        return Ok(Some(false));
    }
    Ok(None)
}
