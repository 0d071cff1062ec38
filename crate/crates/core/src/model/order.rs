//! Subtyping in the completion.
//!
//! Comparisons against an atom with an arrow-bearing left side unfold the
//! atom into its ext pairs. Arrow comparisons use the filter-model rule: the
//! meet of the targets whose sources lie above the probe source must lie
//! below the probe target. Cycles through the same arrow comparison are
//! resolved coinductively; results that depended on an assumption still on
//! the stack are not cached.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap as HashMap;

use super::{Factor, Model, TypeExpr};
use crate::error::ModelError;

type Key = (TypeExpr, TypeExpr, TypeExpr);

#[derive(Debug, Default)]
pub(crate) struct LeqCache {
    memo: HashMap<Key, bool>,
}

const NO_ASSUMPTION: usize = usize::MAX;

// Entries kept before the memo table is flushed.
const CACHE_CAP: usize = 1 << 16;

struct Search {
    stack: HashMap<Key, usize>,
    depth: usize,
    visited: usize,
    budget: usize,
}

impl Model {
    /// `a ≤ b` in the completion.
    pub fn leq(&self, a: &TypeExpr, b: &TypeExpr) -> Result<bool, ModelError> {
        let a = self.normalize(a)?;
        let b = self.normalize(b)?;
        let mut s = Search {
            stack: HashMap::default(),
            depth: 0,
            visited: 0,
            budget: self.leq_budget,
        };
        Ok(self.leq_n(&a, &b, &mut s)?.0)
    }

    /// Drops the subtyping cache.
    pub fn clear_cache(&self) {
        self.cache.borrow_mut().memo.clear();
    }

    fn leq_n(&self, a: &TypeExpr, b: &TypeExpr, s: &mut Search) -> Result<(bool, usize), ModelError> {
        let mut low = NO_ASSUMPTION;
        for f in b.factors() {
            let (ok, l) = match f {
                Factor::Atom(x) => self.leq_atom(a, self.idx(x)?, s)?,
                Factor::Arrow(src, tgt) => self.leq_arrow(a, src, tgt, s)?,
            };
            low = low.min(l);
            if !ok {
                return Ok((false, low));
            }
        }
        Ok((true, low))
    }

    fn atomic_part(&self, a: &TypeExpr) -> Result<BTreeSet<usize>, ModelError> {
        let mut set = BTreeSet::new();
        for f in a.factors() {
            if let Factor::Atom(x) = f {
                set.insert(self.idx(x)?);
            }
        }
        self.reduce_atoms(&mut set);
        Ok(set)
    }

    fn leq_atom(&self, a: &TypeExpr, x: usize, s: &mut Search) -> Result<(bool, usize), ModelError> {
        let atoms = self.atomic_part(a)?;
        if atoms.iter().any(|&y| self.atom_leq(Some(y), Some(x))) {
            return Ok((true, NO_ASSUMPTION));
        }
        if a.is_atomic() {
            return Ok((false, NO_ASSUMPTION));
        }
        let mut low = NO_ASSUMPTION;
        for (src, tgt) in self.ext_norm(x) {
            let (ok, l) = self.leq_arrow(a, src, tgt, s)?;
            low = low.min(l);
            if !ok {
                return Ok((false, low));
            }
        }
        Ok((true, low))
    }

    fn leq_arrow(
        &self,
        a: &TypeExpr,
        src: &TypeExpr,
        tgt: &TypeExpr,
        s: &mut Search,
    ) -> Result<(bool, usize), ModelError> {
        if tgt.is_omega() {
            return Ok((true, NO_ASSUMPTION));
        }
        if a.is_omega() {
            return Ok((false, NO_ASSUMPTION));
        }
        let key = (a.clone(), src.clone(), tgt.clone());
        if let Some(&v) = self.cache.borrow().memo.get(&key) {
            return Ok((v, NO_ASSUMPTION));
        }
        if let Some(&d) = s.stack.get(&key) {
            return Ok((true, d));
        }
        s.visited += 1;
        if s.visited > s.budget {
            return Err(ModelError::Budget(s.budget));
        }
        let own = s.depth;
        s.stack.insert(key.clone(), own);
        s.depth += 1;
        let res = self.leq_arrow_body(a, src, tgt, s);
        s.depth -= 1;
        s.stack.remove(&key);
        let (ok, low) = res?;
        if low >= own {
            let mut cache = self.cache.borrow_mut();
            if cache.memo.len() >= CACHE_CAP {
                cache.memo.clear();
            }
            cache.memo.insert(key, ok);
            Ok((ok, NO_ASSUMPTION))
        } else {
            Ok((ok, low))
        }
    }

    fn leq_arrow_body(
        &self,
        a: &TypeExpr,
        src: &TypeExpr,
        tgt: &TypeExpr,
        s: &mut Search,
    ) -> Result<(bool, usize), ModelError> {
        let mut low = NO_ASSUMPTION;
        let mut chosen = Vec::new();
        for (si, ti) in self.ext_of(a)? {
            let (ok, l) = self.leq_n(src, &si, s)?;
            low = low.min(l);
            if ok {
                chosen.push(ti);
            }
        }
        let meet = self.normalize(&TypeExpr::meet_all(chosen.iter()))?;
        let (ok, l) = self.leq_n(&meet, tgt, s)?;
        Ok((ok, low.min(l)))
    }

    /// The raw arrow rule on explicit ext sets, without unfolding atoms
    /// at the top: every pair of `right` is covered by the pairs of `left`.
    pub(crate) fn ext_set_leq(
        &self,
        left: &super::ExtSet,
        right: &super::ExtSet,
    ) -> Result<bool, ModelError> {
        for (src, tgt) in right {
            let chosen: Vec<TypeExpr> = left
                .iter()
                .filter_map(|(si, ti)| match self.leq(src, si) {
                    Ok(true) => Some(Ok(ti.clone())),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<_, _>>()?;
            if !self.leq(&TypeExpr::meet_all(chosen.iter()), tgt)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
