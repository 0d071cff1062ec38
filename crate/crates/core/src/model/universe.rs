use std::collections::BTreeSet;

use super::{Model, TypeExpr};
use crate::error::ModelError;

/// Every element built from ω and the atoms with at most `depth` atom
/// leaves, in canonical form and without syntactic duplicates. Depth 1 is
/// ω plus the atoms; depth 2 adds arrows and meets of two atoms.
pub fn type_universe(m: &Model, depth: usize) -> Result<Vec<TypeExpr>, ModelError> {
    let mut by_size: Vec<Vec<TypeExpr>> = vec![Vec::new(); depth + 1];
    let mut seen = BTreeSet::new();
    if depth == 0 {
        return Ok(Vec::new());
    }
    for t in std::iter::once(TypeExpr::omega())
        .chain(m.atoms().iter().map(|a| TypeExpr::atom(a.clone())))
    {
        if seen.insert(t.clone()) {
            by_size[1].push(t);
        }
    }
    for size in 2..=depth {
        let mut fresh = Vec::new();
        for left in 1..size {
            let right = size - left;
            for s in &by_size[left] {
                for t in &by_size[right] {
                    fresh.push(m.normalize(&TypeExpr::arrow(s.clone(), t.clone()))?);
                    if left <= right && !s.is_omega() && !t.is_omega() && s != t {
                        fresh.push(m.normalize(&s.meet(t))?);
                    }
                }
            }
        }
        for t in fresh {
            if seen.insert(t.clone()) {
                by_size[size].push(t);
            }
        }
    }
    Ok(by_size.into_iter().flatten().collect())
}
