//! Concrete syntax.
//!
//! ```text
//! term  ::= '\' var+ '.' term | app ('+' app)*
//! app   ::= atom+
//! atom  ::= var | 'Omega' | '0t' | 'ebar[' type ']' | 'bar[' type '](' test ')' | '(' term ')'
//! test  ::= prod ('+' prod)*
//! prod  ::= tatom ('*' tatom)*
//! tatom ::= 'eps' | '0' | 'tau[' type '](' term ')' | '(' test ')'
//! ```

use super::{Expr, Term, Test};
use crate::error::ParseError;
use crate::model::{is_var_ident, Cursor, Model, TypeExpr};

const KEYWORDS: &[&str] = &["Omega", "eps", "tau", "bar", "ebar", "0t"];

struct P<'a, 'm> {
    cur: Cursor<'a>,
    m: &'m Model,
}

pub fn parse_term(m: &Model, src: &str) -> Result<Term, ParseError> {
    let mut p = P { cur: Cursor::new(src), m };
    let t = p.term()?;
    p.finish()?;
    Ok(t.canonicalize())
}

pub fn parse_test(m: &Model, src: &str) -> Result<Test, ParseError> {
    let mut p = P { cur: Cursor::new(src), m };
    let q = p.test()?;
    p.finish()?;
    Ok(q.canonicalize())
}

/// A test if the text parses as one, otherwise a term.
pub fn parse_expr(m: &Model, src: &str) -> Result<Expr, ParseError> {
    match parse_test(m, src) {
        Ok(q) => Ok(Expr::Test(q)),
        Err(e @ ParseError::OmegaLabel { .. }) | Err(e @ ParseError::Model(_)) => Err(e),
        Err(test_err) => match parse_term(m, src) {
            Ok(t) => Ok(Expr::Term(t)),
            Err(term_err) => Err(further(test_err, term_err)),
        },
    }
}

fn pos_of(e: &ParseError) -> usize {
    match e {
        ParseError::Syntax { pos, .. } | ParseError::OmegaLabel { pos } => *pos,
        ParseError::Model(_) => 0,
    }
}

// The error that got further into the input.
fn further(a: ParseError, b: ParseError) -> ParseError {
    if pos_of(&a) > pos_of(&b) {
        a
    } else {
        b
    }
}

impl P<'_, '_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.cur.pos, msg: msg.into() })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.cur.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.cur.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    // A keyword followed by a non-identifier character.
    fn keyword(&mut self, kw: &str) -> bool {
        self.cur.skip_ws();
        let r = self.cur.rest();
        if r.starts_with(kw) && !r[kw.len()..].starts_with(is_var_ident) {
            self.cur.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn label(&mut self) -> Result<TypeExpr, ParseError> {
        self.expect("[")?;
        let pos = self.cur.pos;
        let omega = self.m.omega_name().to_string();
        let m = self.m;
        let t = crate::model::dsl_parse_type(&mut self.cur, &omega, &|a| m.atom_index(a).is_some())
            .map_err(|msg| ParseError::Syntax { pos, msg })?;
        self.expect("]")?;
        let t = self.m.normalize(&t)?;
        if t.is_omega() {
            return Err(ParseError::OmegaLabel { pos });
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.cur.eat("\\") {
            let mut vars = Vec::new();
            while let Some(x) = self.var()? {
                vars.push(x);
            }
            if vars.is_empty() {
                return self.err("expected a binder");
            }
            self.expect(".")?;
            let body = self.term()?;
            return Ok(vars.iter().rev().fold(body, |b, x| Term::lam(x, b)));
        }
        let first_pos = self.cur.pos;
        let first = self.app()?;
        if self.cur.peek() != Some('+') {
            return Ok(first);
        }
        let mut entries = match first {
            Term::BarSum(es) => es,
            _ => {
                self.cur.pos = first_pos;
                return self.err("only τ̄ sums can be added at the term level");
            }
        };
        while self.cur.eat("+") {
            let pos = self.cur.pos;
            match self.app()? {
                Term::BarSum(es) => entries.extend(es),
                _ => {
                    self.cur.pos = pos;
                    return self.err("only τ̄ sums can be added at the term level");
                }
            }
        }
        Ok(Term::BarSum(entries))
    }

    fn var(&mut self) -> Result<Option<String>, ParseError> {
        self.cur.skip_ws();
        let save = self.cur.pos;
        match self.cur.ident(is_var_ident) {
            Some(x) if KEYWORDS.contains(&x) || x.starts_with(|c: char| c.is_ascii_digit()) => {
                self.cur.pos = save;
                Ok(None)
            }
            Some(x) => Ok(Some(x.to_string())),
            None => Ok(None),
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = match self.atom()? {
            Some(t) => t,
            None => return self.err("expected a term"),
        };
        loop {
            if self.cur.peek() == Some('\\') {
                let arg = self.term()?;
                return Ok(Term::app(t, arg));
            }
            match self.atom()? {
                Some(a) => t = Term::app(t, a),
                None => return Ok(t),
            }
        }
    }

    fn atom(&mut self) -> Result<Option<Term>, ParseError> {
        if self.keyword("Omega") {
            return Ok(Some(Term::Omega));
        }
        if self.keyword("0t") {
            return Ok(Some(Term::zero()));
        }
        if self.keyword("ebar") {
            let l = self.label()?;
            return Ok(Some(Term::ebar(l)));
        }
        if self.keyword("bar") {
            let l = self.label()?;
            self.expect("(")?;
            let q = self.test()?;
            self.expect(")")?;
            return Ok(Some(Term::bar(l, q)));
        }
        if self.cur.peek() == Some('(') {
            self.cur.eat("(");
            let t = self.term()?;
            self.expect(")")?;
            return Ok(Some(t));
        }
        Ok(self.var()?.map(|x| Term::var(&x)))
    }

    fn test(&mut self) -> Result<Test, ParseError> {
        let mut v = vec![self.prod()?];
        while self.cur.eat("+") {
            v.push(self.prod()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Test::Sum(v) })
    }

    fn prod(&mut self) -> Result<Test, ParseError> {
        let mut v = vec![self.tatom()?];
        while self.cur.eat("*") {
            v.push(self.tatom()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Test::Prod(v) })
    }

    fn tatom(&mut self) -> Result<Test, ParseError> {
        if self.keyword("eps") {
            return Ok(Test::eps());
        }
        if self.keyword("tau") {
            let l = self.label()?;
            self.expect("(")?;
            let t = self.term()?;
            self.expect(")")?;
            return Ok(Test::tau(l, t));
        }
        if self.keyword("0") {
            return Ok(Test::zero());
        }
        if self.cur.eat("(") {
            let q = self.test()?;
            self.expect(")")?;
            return Ok(q);
        }
        self.err("expected a test")
    }
}
