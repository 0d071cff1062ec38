//! The line-oriented model format and the type syntax.
//!
//! ```text
//! model dinf
//! atoms w *
//! arrow w * = *
//! ext * = (w -> *)
//! ```

use std::collections::HashSet;

use super::{is_type_ident, Cursor, Model, ModelBuilder, TypeExpr};
use crate::error::ModelError;

/// Parses a type at the cursor. `omega` is the model's name for ω; `w` is
/// always accepted as well.
pub(crate) fn parse_type(
    cur: &mut Cursor<'_>,
    omega: &str,
    known: &dyn Fn(&str) -> bool,
) -> Result<TypeExpr, String> {
    let left = parse_inter(cur, omega, known)?;
    if cur.eat("->") {
        let right = parse_type(cur, omega, known)?;
        Ok(TypeExpr::arrow(left, right))
    } else {
        Ok(left)
    }
}

fn parse_inter(
    cur: &mut Cursor<'_>,
    omega: &str,
    known: &dyn Fn(&str) -> bool,
) -> Result<TypeExpr, String> {
    let mut t = parse_prim(cur, omega, known)?;
    while cur.eat("/\\") {
        t = t.meet(&parse_prim(cur, omega, known)?);
    }
    Ok(t)
}

fn parse_prim(
    cur: &mut Cursor<'_>,
    omega: &str,
    known: &dyn Fn(&str) -> bool,
) -> Result<TypeExpr, String> {
    if cur.eat("(") {
        let t = parse_type(cur, omega, known)?;
        if !cur.eat(")") {
            return Err(format!("expected `)` at offset {}", cur.pos));
        }
        return Ok(t);
    }
    let pos = cur.pos;
    match cur.ident(is_type_ident) {
        Some(id) if id == "w" || id == omega => Ok(TypeExpr::omega()),
        Some(id) if known(id) => Ok(TypeExpr::atom(id)),
        Some(id) => Err(format!("unknown atom `{id}` at offset {pos}")),
        None => Err(format!("expected a type at offset {}", cur.pos)),
    }
}

/// Parses a complete type string against a model.
pub fn parse_type_in(m: &Model, src: &str) -> Result<TypeExpr, ModelError> {
    let mut cur = Cursor::new(src);
    let t = parse_type(&mut cur, m.omega_name(), &|a| m.atom_index(a).is_some())
        .map_err(|msg| ModelError::Parse { line: 1, msg })?;
    if !cur.at_end() {
        return Err(ModelError::Parse {
            line: 1,
            msg: format!("trailing input at offset {}", cur.pos),
        });
    }
    Ok(t)
}

pub(crate) fn parse_model(src: &str) -> Result<Model, ModelError> {
    let mut name = None;
    let mut builder: Option<ModelBuilder> = None;
    let mut known: HashSet<String> = HashSet::new();
    let mut omega = String::new();
    for (no, raw) in src.lines().enumerate() {
        let line_no = no + 1;
        let err = |msg: String| ModelError::Parse { line: line_no, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match kw {
            "model" => name = Some(rest.to_string()),
            "atoms" => {
                if builder.is_some() {
                    return Err(err("duplicate `atoms` line".into()));
                }
                let mut ids = rest.split_whitespace();
                omega = ids
                    .next()
                    .ok_or_else(|| err("`atoms` needs at least ω".into()))?
                    .to_string();
                let mut b = ModelBuilder::new(name.as_deref().unwrap_or("unnamed"), &omega);
                for id in ids {
                    if !id.chars().all(is_type_ident) {
                        return Err(err(format!("bad atom name `{id}`")));
                    }
                    known.insert(id.to_string());
                    b = b.atom(id);
                }
                builder = Some(b);
            }
            "meet" | "arrow" => {
                let b = builder.take().ok_or_else(|| err("`atoms` must come first".into()))?;
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected `{kw} <a> <b> = <c>`")))?;
                let args: Vec<&str> = lhs.split_whitespace().collect();
                let res: Vec<&str> = rhs.split_whitespace().collect();
                if args.len() != 2 || res.len() != 1 {
                    return Err(err(format!("expected `{kw} <a> <b> = <c>`")));
                }
                for id in args.iter().chain(res.iter()) {
                    if *id != "w" && *id != omega && !known.contains(*id) {
                        return Err(err(format!("unknown atom `{id}`")));
                    }
                }
                builder = Some(if kw == "meet" {
                    b.meet(args[0], args[1], res[0])
                } else {
                    b.arrow(args[0], args[1], res[0])
                });
            }
            "ext" => {
                let b = builder.take().ok_or_else(|| err("`atoms` must come first".into()))?;
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `ext <a> = ...`".into()))?;
                let atom = lhs.trim();
                if !known.contains(atom) {
                    return Err(err(format!("ext of unknown or ω atom `{atom}`")));
                }
                let mut cur = Cursor::new(rhs);
                let mut pairs = Vec::new();
                let is_known = |a: &str| known.contains(a);
                if !cur.at_end() {
                    loop {
                        if !cur.eat("(") {
                            return Err(err(format!("expected `(` at offset {}", cur.pos)));
                        }
                        let s = parse_inter_or_arrow_source(&mut cur, &omega, &is_known).map_err(&err)?;
                        if !cur.eat("->") {
                            return Err(err(format!("expected `->` at offset {}", cur.pos)));
                        }
                        let t = parse_type(&mut cur, &omega, &is_known).map_err(&err)?;
                        if !cur.eat(")") {
                            return Err(err(format!("expected `)` at offset {}", cur.pos)));
                        }
                        pairs.push((s, t));
                        if !cur.eat(",") {
                            break;
                        }
                    }
                }
                if !cur.at_end() {
                    return Err(err(format!("trailing input at offset {}", cur.pos)));
                }
                builder = Some(b.ext(atom, pairs));
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let mut b = builder.ok_or(ModelError::Parse {
        line: 0,
        msg: "missing `atoms` line".into(),
    })?;
    if let Some(n) = name {
        b.name = n;
    }
    b.build()
}

// The source of an ext pair: an intersection, or a parenthesised type.
fn parse_inter_or_arrow_source(
    cur: &mut Cursor<'_>,
    omega: &str,
    known: &dyn Fn(&str) -> bool,
) -> Result<TypeExpr, String> {
    parse_inter(cur, omega, known)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dinf() {
        let m = parse_model("model dinf\natoms w *\narrow w * = *\next * = (w -> *)\n").unwrap();
        assert_eq!(m.atoms().len(), 1);
        let e = m.ext_atom(0);
        assert_eq!(e[0], (TypeExpr::omega(), TypeExpr::atom("*")));
    }

    #[test]
    fn arrow_types_are_right_associative() {
        let m = parse_model("atoms w a\next a = (a -> a)\n").unwrap();
        let t = m.parse_type("a -> a -> a").unwrap();
        let a = TypeExpr::atom("a");
        assert_eq!(t, TypeExpr::arrow(a.clone(), TypeExpr::arrow(a.clone(), a)));
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_model("atoms w a\n\nmeet a b = a\n").unwrap_err();
        assert!(matches!(e, ModelError::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn missing_ext_is_an_error() {
        assert!(parse_model("atoms w a b\next a = (w -> a)\n").is_err());
    }
}
