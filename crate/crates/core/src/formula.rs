//! Navigability formulas: atoms `A |> B` closed under `!` and `->`.
//!
//! ```text
//! formula := imp
//! imp     := unary ('->' imp)?
//! unary   := '!' unary | '(' formula ')' | atom
//! atom    := set '|>' set
//! set     := '{' name (',' name)* '}'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::system::{is_identifier, ViewSet};

/// An atom `A ▷ B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NavStatement {
    pub lhs: ViewSet,
    pub rhs: ViewSet,
}

impl NavStatement {
    pub fn new(lhs: ViewSet, rhs: ViewSet) -> Self {
        NavStatement { lhs, rhs }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        p.skip_ws();
        let atom = p.atom()?;
        p.expect_end()?;
        Ok(atom)
    }
}

impl fmt::Display for NavStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(NavStatement),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(lhs: ViewSet, rhs: ViewSet) -> Self {
        Formula::Atom(NavStatement::new(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// All atoms, left to right.
    pub fn atoms(&self) -> Vec<&NavStatement> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a NavStatement>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) => f.collect_atoms(out),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Classical evaluation given a truth assignment for atoms.
    pub fn eval_with<E>(&self, atom: &mut impl FnMut(&NavStatement) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            Formula::Atom(a) => atom(a)?,
            Formula::Not(f) => !f.eval_with(atom)?,
            Formula::Implies(a, b) => !a.eval_with(atom)? || b.eval_with(atom)?,
        })
    }

    fn fmt_unary(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Implies(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Not(_) => write!(f, "!{inner}"),
                _ => write!(f, "!({inner})"),
            },
            Formula::Implies(a, b) => {
                a.fmt_unary(f)?;
                write!(f, " -> {b}")
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.fail(&format!("`{tok}`"))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.skip_ws();
        if self.rest().starts_with('{') {
            return Ok(Formula::Atom(self.atom()?));
        }
        self.fail("`!`, `(` or `{`")
    }

    fn atom(&mut self) -> Result<NavStatement> {
        let lhs = self.set()?;
        self.expect("|>")?;
        let rhs = self.set()?;
        Ok(NavStatement::new(lhs, rhs))
    }

    fn set(&mut self) -> Result<ViewSet> {
        self.skip_ws();
        let open = self.pos;
        self.expect("{")?;
        if self.eat("}") {
            return Err(Error::EmptySet(open));
        }
        let mut names = vec![self.name()?];
        while self.eat(",") {
            names.push(self.name()?);
        }
        self.expect("}")?;
        ViewSet::new(names)
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let len = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !is_identifier(c.encode_utf8(&mut [0; 4])))
            .map_or(self.rest().len(), |(k, _)| k);
        if len == 0 {
            return self.fail("a view name");
        }
        let name = self.rest()[..len].to_string();
        self.pos += len;
        Ok(name)
    }
}
