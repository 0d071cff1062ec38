use std::fmt;

use super::{Term, Test};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Omega => write!(f, "Omega"),
            Term::Lam(..) => {
                let mut t = self;
                write!(f, "\\")?;
                let mut first = true;
                while let Term::Lam(x, b) = t {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                    first = false;
                    t = b;
                }
                write!(f, ". {t}")
            }
            Term::App(fun, arg) => {
                match **fun {
                    Term::Lam(..) => write!(f, "({fun})")?,
                    Term::BarSum(ref es) if es.len() > 1 => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                write!(f, " ")?;
                match **arg {
                    Term::App(..) | Term::Lam(..) => write!(f, "({arg})"),
                    Term::BarSum(ref es) if es.len() > 1 => write!(f, "({arg})"),
                    _ => write!(f, "{arg}"),
                }
            }
            Term::BarSum(es) => {
                if es.is_empty() {
                    return write!(f, "0t");
                }
                for (i, (l, q)) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if q.is_eps() {
                        write!(f, "ebar[{l}]")?;
                    } else {
                        write!(f, "bar[{l}]({q})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Test::Tau(l, m) => write!(f, "tau[{l}]({m})"),
            Test::Sum(v) if v.is_empty() => write!(f, "0"),
            Test::Prod(v) if v.is_empty() => write!(f, "eps"),
            Test::Sum(v) => {
                for (i, q) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{q}")?;
                }
                Ok(())
            }
            Test::Prod(v) => {
                for (i, q) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    match q {
                        Test::Sum(inner) if inner.len() > 1 => write!(f, "({q})")?,
                        Test::Prod(inner) if !inner.is_empty() => write!(f, "({q})")?,
                        _ => write!(f, "{q}")?,
                    }
                }
                Ok(())
            }
        }
    }
}
