//! Stratified-positivity witnesses: verification and exhaustive search.

use std::fmt;

use super::validate::{Report, ViolationKind};
use super::{Factor, Model, TypeExpr};
use crate::error::ModelError;

/// Default bound on the number of atoms (ω included) for [`sp_search`].
pub const DEFAULT_SP_ATOM_BOUND: usize = 8;

/// Rank and polarity of every non-ω atom, indexed like [`Model::atoms`].
/// ω has rank 0 and no polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratWitness {
    pub rank: Vec<u32>,
    pub polarity: Vec<bool>,
}

impl StratWitness {
    /// Reads `<atom> <rank> <true|false>` lines.
    pub fn parse(m: &Model, src: &str) -> Result<StratWitness, ModelError> {
        let n = m.atoms().len();
        let mut rank = vec![None; n];
        let mut polarity = vec![false; n];
        for (no, raw) in src.lines().enumerate() {
            let err = |msg: String| ModelError::Parse { line: no + 1, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [atom, r, v] = parts[..] else {
                return Err(err("expected `<atom> <rank> <true|false>`".into()));
            };
            let i = m
                .atom_index(atom)
                .ok_or_else(|| ModelError::UnknownAtom(atom.to_string()))?;
            rank[i] = Some(r.parse::<u32>().map_err(|e| err(e.to_string()))?);
            polarity[i] = match v {
                "true" => true,
                "false" => false,
                _ => return Err(err(format!("bad polarity `{v}`"))),
            };
        }
        let rank = rank
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| ModelError::Parse {
                    line: 0,
                    msg: format!("no rank for atom `{}`", m.atoms()[i]),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(StratWitness { rank, polarity })
    }

    pub fn display<'a>(&'a self, m: &'a Model) -> WitnessDisplay<'a> {
        WitnessDisplay { w: self, m }
    }
}

pub struct WitnessDisplay<'a> {
    w: &'a StratWitness,
    m: &'a Model,
}

impl fmt::Display for WitnessDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranks: Vec<String> = self
            .m
            .atoms()
            .iter()
            .zip(&self.w.rank)
            .map(|(a, r)| format!("{a}={r}"))
            .collect();
        let pols: Vec<String> = self
            .m
            .atoms()
            .iter()
            .zip(&self.w.polarity)
            .map(|(a, v)| format!("V({a})={v}"))
            .collect();
        write!(f, "rank {}, {}", ranks.join(", "), pols.join(", "))
    }
}

struct Ctx<'a> {
    m: &'a Model,
    w: &'a StratWitness,
}

impl Ctx<'_> {
    fn rank(&self, t: &TypeExpr) -> Result<u32, ModelError> {
        let mut r = 0;
        for f in t.factors() {
            r = r.max(match f {
                Factor::Atom(a) => self.w.rank[self.m.idx(a)?],
                Factor::Arrow(s, g) => self.rank(s)?.max(self.rank(g)?),
            });
        }
        Ok(r)
    }

    /// Polarity of a non-ω element; `Err(detail)` when the homomorphic
    /// extension is contradictory.
    fn polarity(&self, t: &TypeExpr) -> Result<Result<bool, String>, ModelError> {
        let r = self.rank(t)?;
        let mut out = None;
        for f in t.factors() {
            let v = match f {
                Factor::Atom(a) => {
                    let i = self.m.idx(a)?;
                    if self.w.rank[i] != r {
                        continue;
                    }
                    self.w.polarity[i]
                }
                Factor::Arrow(s, g) => {
                    let (rs, rg) = (self.rank(s)?, self.rank(g)?);
                    if rs.max(rg) != r {
                        continue;
                    }
                    let vt = if rg == r { Some(self.polarity(g)?) } else { None };
                    let vs = if rs == r && !s.is_omega() {
                        Some(self.polarity(s)?)
                    } else {
                        None
                    };
                    match (vs, vt) {
                        (Some(Err(e)), _) | (_, Some(Err(e))) => return Ok(Err(e)),
                        (Some(Ok(a)), Some(Ok(b))) if a == b => {
                            return Ok(Err(format!(
                                "{s} -> {g}: source and target share rank and polarity"
                            )))
                        }
                        (_, Some(Ok(b))) => b,
                        (Some(Ok(a)), None) => !a,
                        (None, None) => continue,
                    }
                }
            };
            // meet of polarities, read with true below false
            out = Some(out.map_or(v, |o: bool| o || v));
        }
        Ok(out.ok_or_else(|| format!("{t} has no factor of its own rank")))
    }
}

/// Checks every clause of stratified positivity for `w` on `m`.
pub fn sp_verify(m: &Model, w: &StratWitness) -> Result<Report, ModelError> {
    let mut r = Report::default();
    let n = m.atoms().len();
    if w.rank.len() != n || w.polarity.len() != n {
        r.push(ViolationKind::SpRank, "witness does not cover the atoms".into());
        return Ok(r);
    }
    let cx = Ctx { m, w };
    for (i, a) in m.atoms().iter().enumerate() {
        if w.rank[i] == 0 {
            r.push(ViolationKind::SpOmegaRank, format!("{a} shares ω's bottom rank"));
        }
    }
    for (i, name) in m.atoms().iter().enumerate() {
        let rg = w.rank[i];
        let vg = w.polarity[i];
        for (src, tgt) in m.ext_atom(i) {
            let src = m.normalize(src)?;
            let tgt = m.normalize(tgt)?;
            let pair = format!("({src} -> {tgt}) in ext({name})");
            let rt = cx.rank(&tgt)?;
            let rs = cx.rank(&src)?;
            if rt > rg {
                r.push(ViolationKind::SpRank, format!("{pair}: target ranks above {name}"));
            } else if rt == rg && !tgt.is_omega() {
                match cx.polarity(&tgt)? {
                    Err(e) => r.push(ViolationKind::SpTargetPolarity, format!("{pair}: {e}")),
                    Ok(v) if v != vg => r.push(
                        ViolationKind::SpTargetPolarity,
                        format!("{pair}: target polarity differs from V({name})"),
                    ),
                    Ok(_) => {}
                }
            }
            if rs > rg {
                r.push(ViolationKind::SpRank, format!("{pair}: source ranks above {name}"));
            } else if rs == rg && !src.is_omega() {
                match cx.polarity(&src)? {
                    Err(e) => r.push(ViolationKind::SpSourcePolarity, format!("{pair}: {e}")),
                    Ok(v) if v == vg => r.push(
                        ViolationKind::SpSourcePolarity,
                        format!("{pair}: source polarity equals V({name})"),
                    ),
                    Ok(_) => {}
                }
            }
        }
    }
    for &(a, b, c) in m.meet_entries() {
        let (Some(a), Some(b), Some(c)) = (a, b, c) else { continue };
        if a == b {
            continue;
        }
        let (ra, rb, rc) = (w.rank[a], w.rank[b], w.rank[c]);
        let label = format!("{} ∧ {} = {}", m.atoms()[a], m.atoms()[b], m.atoms()[c]);
        if rc > ra.min(rb) {
            r.push(ViolationKind::SpMeet, format!("{label}: meet ranks above both sides"));
        }
        if rc < ra && c != b {
            r.push(ViolationKind::SpMeet, format!("{label}: meet strictly below {} but not {}", m.atoms()[a], m.atoms()[b]));
        }
        if rc < rb && c != a {
            r.push(ViolationKind::SpMeet, format!("{label}: meet strictly below {} but not {}", m.atoms()[b], m.atoms()[a]));
        }
        if ra == rb && w.polarity[c] != (w.polarity[a] || w.polarity[b]) {
            r.push(ViolationKind::SpCoherence, format!("{label}: polarity not the meet of polarities"));
        }
    }
    Ok(r)
}

fn rank_only_ok(m: &Model, rank: &[u32], ext: &[Vec<(TypeExpr, TypeExpr)>]) -> Result<bool, ModelError> {
    let w = StratWitness { rank: rank.to_vec(), polarity: vec![false; rank.len()] };
    let cx = Ctx { m, w: &w };
    for (i, pairs) in ext.iter().enumerate() {
        for (s, t) in pairs {
            if cx.rank(s)? > rank[i] || cx.rank(t)? > rank[i] {
                return Ok(false);
            }
        }
    }
    for &(a, b, c) in m.meet_entries() {
        let (Some(a), Some(b), Some(c)) = (a, b, c) else { continue };
        if a == b {
            continue;
        }
        let (ra, rb, rc) = (rank[a], rank[b], rank[c]);
        if rc > ra.min(rb) || (rc < ra && c != b) || (rc < rb && c != a) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Calls `f` on every surjection of `n` atoms onto levels 1..=levels.
fn for_each_ordering(
    n: usize,
    levels: u32,
    f: &mut dyn FnMut(&[u32]) -> Result<bool, ModelError>,
) -> Result<bool, ModelError> {
    let mut rank = vec![1u32; n];
    loop {
        let mut used = vec![false; levels as usize];
        for &r in &rank {
            used[(r - 1) as usize] = true;
        }
        if used.iter().all(|&u| u) && f(&rank)? {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            if rank[i] < levels {
                rank[i] += 1;
                break;
            }
            rank[i] = 1;
            i += 1;
        }
    }
}

/// Searches ordered partitions of the atoms by increasing number of levels,
/// polarities false-first, returning the first witness that verifies.
pub fn sp_search(m: &Model, atom_bound: usize) -> Result<Option<StratWitness>, ModelError> {
    let n = m.atoms().len();
    if n + 1 > atom_bound {
        return Err(ModelError::TooManyAtoms { atoms: n + 1, bound: atom_bound });
    }
    if n == 0 {
        return Ok(Some(StratWitness { rank: vec![], polarity: vec![] }));
    }
    let ext: Vec<Vec<(TypeExpr, TypeExpr)>> = (0..n)
        .map(|i| {
            m.ext_atom(i)
                .iter()
                .map(|(s, t)| Ok((m.normalize(s)?, m.normalize(t)?)))
                .collect::<Result<_, ModelError>>()
        })
        .collect::<Result<_, _>>()?;
    let mut found = None;
    for levels in 1..=n as u32 {
        let hit = for_each_ordering(n, levels, &mut |rank| {
            if !rank_only_ok(m, rank, &ext)? {
                return Ok(false);
            }
            for bits in 0u32..(1 << n) {
                let w = StratWitness {
                    rank: rank.to_vec(),
                    polarity: (0..n).map(|i| bits & (1 << i) != 0).collect(),
                };
                if sp_verify(m, &w)?.is_valid() {
                    found = Some(w);
                    return Ok(true);
                }
            }
            Ok(false)
        })?;
        if hit {
            break;
        }
    }
    Ok(found)
}
