//! The `.sys` declaration language.
//!
//! ```text
//! system pendulum(l1, l2, g) {
//!   indep t;
//!   dep x, theta1, theta2;
//!   eq e1: d[1,1](x) + l1*d[1,1](theta1) + g*theta1;
//!   eq e2: d[1,1](x) + l2*d[1,1](theta2) + g*theta2;
//! }
//! ```
//!
//! Equations are linear in the unknowns with rational-function coefficients
//! over the independent variables and parameters. `d[i,j](u)` differentiates
//! `u` by the `i`-th and `j`-th independent variables (1-based); `d(u)` is
//! shorthand when there is a single one. [`print`] emits the canonical form
//! that [`parse`] reads back to an equal declaration.

mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use dualcheck::field::Var;
use dualcheck::{OpMatrix, OreOperator};

pub use parser::{parse, parse_value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Undeclared,
    Arity,
    Duplicate,
    NotLinear,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            kind,
            message: message.into(),
        }
    }

    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(pos, ErrorKind::Syntax, message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    /// One operator per unknown.
    pub row: Vec<OreOperator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDecl {
    pub name: String,
    pub params: Vec<String>,
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    pub equations: Vec<Equation>,
}

impl SystemDecl {
    pub fn n(&self) -> usize {
        self.indep.len()
    }

    pub fn operator(&self) -> OpMatrix {
        OpMatrix::from_rows(
            self.n(),
            self.dep.len(),
            self.equations.iter().map(|e| e.row.clone()).collect(),
        )
    }

    /// Wrap an operator, naming coordinates `x1, x2, …` and equations
    /// `e1, e2, …`. Parameters are collected from the coefficients.
    pub fn from_operator(name: &str, a: &OpMatrix, dep: &[String]) -> Self {
        let mut params = BTreeSet::new();
        for row in a.rows() {
            for p in row {
                for (_, c) in p.terms() {
                    params.extend(c.vars().into_iter().filter_map(|v| match v {
                        Var::P(s) => Some(s.to_string()),
                        Var::X(_) => None,
                    }));
                }
            }
        }
        SystemDecl {
            name: name.to_string(),
            params: params.into_iter().collect(),
            indep: (1..=a.n()).map(|i| format!("x{i}")).collect(),
            dep: dep.to_vec(),
            equations: a
                .rows()
                .iter()
                .enumerate()
                .map(|(i, r)| Equation {
                    name: format!("e{}", i + 1),
                    row: r.clone(),
                })
                .collect(),
        }
    }

    /// The same system with a new operator, equations renamed `e1, e2, …`.
    pub fn with_operator(&self, a: &OpMatrix) -> Self {
        let mut out = SystemDecl::from_operator(&self.name, a, &self.dep);
        out.indep = self.indep.clone();
        out.params = self.params.clone();
        out
    }

    /// Coefficient variable names as written in the source.
    pub fn namer(&self) -> impl Fn(&Var) -> String + '_ {
        move |v: &Var| match v {
            Var::X(i) => self
                .indep
                .get(*i as usize)
                .cloned()
                .unwrap_or_else(|| v.to_string()),
            Var::P(p) => p.to_string(),
        }
    }

    /// Canonical text of one operator matrix in this system's names.
    pub fn format_rows(&self, a: &OpMatrix, unknowns: &[String]) -> Vec<String> {
        let name = self.namer();
        (0..a.nrows())
            .map(|i| a.fmt_row(i, unknowns, &name))
            .collect()
    }
}

/// Canonical source text.
pub fn print(decl: &SystemDecl) -> String {
    let mut s = format!("system {}({}) {{\n", decl.name, decl.params.join(", "));
    s += &format!("  indep {};\n", decl.indep.join(", "));
    s += &format!("  dep {};\n", decl.dep.join(", "));
    let rows = decl.format_rows(&decl.operator(), &decl.dep);
    for (eq, text) in decl.equations.iter().zip(rows) {
        s += &format!("  eq {}: {};\n", eq.name, text);
    }
    s += "}\n";
    s
}

impl fmt::Display for SystemDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}
