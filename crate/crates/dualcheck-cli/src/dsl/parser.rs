use std::collections::HashMap;

use dualcheck::field::MultiIndex;
use dualcheck::{OreOperator, RatFunc, Q};

use super::lexer::{lex, Tok, Token};
use super::{Equation, ErrorKind, ParseError, Pos, SystemDecl};

/// A parsed sub-expression: a coefficient, or a linear combination of
/// derivatives of the unknowns.
#[derive(Clone, Debug)]
enum Val {
    Coef(RatFunc),
    Row(Vec<OreOperator>),
}

#[derive(Clone, Copy)]
enum Sym {
    Indep(usize),
    Param,
    Dep(usize),
    Equation,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    symbols: HashMap<String, Sym>,
    n: usize,
    m: usize,
}

/// Parse one `system` declaration.
pub fn parse(src: &str) -> Result<SystemDecl, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        symbols: HashMap::new(),
        n: 0,
        m: 0,
    };
    let decl = p.decl()?;
    p.expect_eof()?;
    Ok(decl)
}

/// Parse a coefficient expression over the parameters and independent
/// variables of `decl`, as used by `--subst`.
pub fn parse_value(src: &str, decl: &SystemDecl) -> Result<RatFunc, ParseError> {
    let mut symbols = HashMap::new();
    for p in &decl.params {
        symbols.insert(p.clone(), Sym::Param);
    }
    for (i, v) in decl.indep.iter().enumerate() {
        symbols.insert(v.clone(), Sym::Indep(i));
    }
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        symbols,
        n: decl.n(),
        m: 0,
    };
    let pos = p.pos();
    let v = p.expr()?;
    p.expect_eof()?;
    match v {
        Val::Coef(c) => Ok(c),
        Val::Row(_) => Err(ParseError::new(
            pos,
            ErrorKind::NotLinear,
            "a value cannot contain unknowns",
        )),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.pos(),
                format!("expected `{c}`, found {}", describe(self.peek())),
            ))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(ParseError::syntax(
                self.pos(),
                format!("trailing input: {}", describe(t)),
            )),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => Err(ParseError::syntax(
                self.pos(),
                format!("expected `{kw}`, found {}", describe(t)),
            )),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, pos))
            }
            t => Err(ParseError::syntax(
                pos,
                format!("expected an identifier, found {}", describe(&t)),
            )),
        }
    }

    fn declare(&mut self, name: &str, pos: Pos, sym: Sym) -> Result<(), ParseError> {
        if name == "d" || ["system", "indep", "dep", "eq"].contains(&name) {
            return Err(ParseError::syntax(pos, format!("`{name}` is reserved")));
        }
        if self.symbols.insert(name.to_string(), sym).is_some() {
            return Err(ParseError::new(
                pos,
                ErrorKind::Duplicate,
                format!("`{name}` is declared twice"),
            ));
        }
        Ok(())
    }

    /// `a, b, c` or `a b c`, up to the closing token.
    fn ident_list(&mut self, close: char) -> Result<Vec<(String, Pos)>, ParseError> {
        let mut out = Vec::new();
        while !self.is_punct(close) {
            out.push(self.ident()?);
            if !self.eat(',') && !matches!(self.peek(), Tok::Ident(_)) {
                break;
            }
        }
        self.expect(close)?;
        Ok(out)
    }

    fn decl(&mut self) -> Result<SystemDecl, ParseError> {
        self.keyword("system")?;
        let (name, _) = self.ident()?;
        self.expect('(')?;
        let params = self.ident_list(')')?;
        for (p, pos) in &params {
            self.declare(p, *pos, Sym::Param)?;
        }
        self.expect('{')?;
        self.keyword("indep")?;
        let indep = self.ident_list(';')?;
        if indep.is_empty() {
            return Err(ParseError::new(
                self.pos(),
                ErrorKind::Arity,
                "at least one independent variable is needed",
            ));
        }
        for (i, (v, pos)) in indep.iter().enumerate() {
            self.declare(v, *pos, Sym::Indep(i))?;
        }
        self.keyword("dep")?;
        let dep = self.ident_list(';')?;
        if dep.is_empty() {
            return Err(ParseError::new(
                self.pos(),
                ErrorKind::Arity,
                "at least one unknown is needed",
            ));
        }
        for (j, (u, pos)) in dep.iter().enumerate() {
            self.declare(u, *pos, Sym::Dep(j))?;
        }
        self.n = indep.len();
        self.m = dep.len();
        let mut equations = Vec::new();
        while !self.is_punct('}') {
            self.keyword("eq")?;
            let (ename, epos) = self.ident()?;
            self.declare(&ename, epos, Sym::Equation)?;
            self.expect(':')?;
            let start = self.pos();
            let row = match self.expr()? {
                Val::Row(r) => r,
                Val::Coef(c) if c.is_zero() => self.zero_row(),
                Val::Coef(_) => {
                    return Err(ParseError::new(
                        start,
                        ErrorKind::NotLinear,
                        format!("equation `{ename}` has no unknowns"),
                    ))
                }
            };
            self.expect(';')?;
            equations.push(Equation { name: ename, row });
        }
        self.expect('}')?;
        let names = |v: Vec<(String, Pos)>| v.into_iter().map(|(s, _)| s).collect();
        Ok(SystemDecl {
            name,
            params: names(params),
            indep: names(indep),
            dep: names(dep),
            equations,
        })
    }

    fn zero_row(&self) -> Vec<OreOperator> {
        vec![OreOperator::zero(self.n); self.m]
    }

    fn unit_row(&self, j: usize, mu: MultiIndex) -> Vec<OreOperator> {
        let mut row = self.zero_row();
        row[j] = OreOperator::monomial(self.n, mu, RatFunc::one());
        row
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let pos = self.pos();
        let mut acc = if self.eat('-') {
            negate(self.term()?)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            let sign = if self.is_punct('+') {
                1
            } else if self.is_punct('-') {
                -1
            } else {
                return Ok(acc);
            };
            self.bump();
            let rhs = self.term()?;
            acc = add(acc, if sign < 0 { negate(rhs) } else { rhs }, pos)?;
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Int(_)) || self.is_punct('(')
    }

    /// Products and quotients; juxtaposition multiplies.
    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.power()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.power()?;
                acc = mul(acc, rhs, pos)?;
            } else if self.eat('/') {
                let rhs = self.power()?;
                acc = div(acc, rhs, pos)?;
            } else if self.starts_factor() {
                let rhs = self.power()?;
                acc = mul(acc, rhs, pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.unary()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.bump().tok {
            Tok::Int(k) => {
                u32::try_from(k).map_err(|_| ParseError::syntax(pos, "exponent too large"))?
            }
            t => {
                return Err(ParseError::syntax(
                    pos,
                    format!("expected an integer exponent, found {}", describe(&t)),
                ))
            }
        };
        match base {
            Val::Coef(c) if neg => {
                c.pow(e).inv().map(Val::Coef).map_err(|_| {
                    ParseError::new(pos, ErrorKind::NotLinear, "negative power of zero")
                })
            }
            Val::Coef(c) => Ok(Val::Coef(c.pow(e))),
            Val::Row(r) if e == 1 && !neg => Ok(Val::Row(r)),
            Val::Row(_) => Err(ParseError::new(
                pos,
                ErrorKind::NotLinear,
                "powers of unknowns are not linear",
            )),
        }
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        if self.eat('-') {
            return Ok(negate(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Val, ParseError> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Int(k) => Ok(Val::Coef(RatFunc::constant(Q::from_integer(k)))),
            Tok::Punct('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(s) if s == "d" => self.derivative(pos),
            Tok::Ident(s) => match self.symbols.get(&s) {
                Some(Sym::Indep(i)) => Ok(Val::Coef(RatFunc::x(*i))),
                Some(Sym::Param) => Ok(Val::Coef(RatFunc::param(&s))),
                Some(Sym::Dep(j)) => Ok(Val::Row(self.unit_row(*j, MultiIndex::zero(self.n)))),
                Some(Sym::Equation) => Err(ParseError::new(
                    pos,
                    ErrorKind::Undeclared,
                    format!("`{s}` names an equation, not a quantity"),
                )),
                None => Err(ParseError::new(
                    pos,
                    ErrorKind::Undeclared,
                    format!("undeclared identifier `{s}`"),
                )),
            },
            t => Err(ParseError::syntax(
                pos,
                format!("unexpected {}", describe(&t)),
            )),
        }
    }

    /// After `d`: `[i, j, …](u)` or `(u)`.
    fn derivative(&mut self, pos: Pos) -> Result<Val, ParseError> {
        let mut idx = Vec::new();
        if self.eat('[') {
            loop {
                let ipos = self.pos();
                match self.bump().tok {
                    Tok::Int(k) => {
                        let i = usize::try_from(k)
                            .ok()
                            .filter(|i| (1..=self.n).contains(i))
                            .ok_or_else(|| {
                                ParseError::new(
                                    ipos,
                                    ErrorKind::Arity,
                                    format!("derivative index out of range 1..={}", self.n),
                                )
                            })?;
                        idx.push(i - 1);
                    }
                    t => {
                        return Err(ParseError::syntax(
                            ipos,
                            format!("expected an index, found {}", describe(&t)),
                        ))
                    }
                }
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        } else if self.n == 1 {
            idx.push(0);
        } else {
            return Err(ParseError::new(
                pos,
                ErrorKind::Arity,
                "`d(u)` needs exactly one independent variable; use d[i](u)",
            ));
        }
        self.expect('(')?;
        let (u, upos) = self.ident()?;
        self.expect(')')?;
        match self.symbols.get(&u) {
            Some(Sym::Dep(j)) => Ok(Val::Row(
                self.unit_row(*j, MultiIndex::from_indices(self.n, &idx)),
            )),
            Some(_) => Err(ParseError::new(
                upos,
                ErrorKind::NotLinear,
                format!("`{u}` is not an unknown"),
            )),
            None => Err(ParseError::new(
                upos,
                ErrorKind::Undeclared,
                format!("undeclared identifier `{u}`"),
            )),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(k) => format!("`{k}`"),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Eof => "end of input".to_string(),
    }
}

fn negate(v: Val) -> Val {
    match v {
        Val::Coef(c) => Val::Coef(c.neg()),
        Val::Row(r) => Val::Row(r.iter().map(OreOperator::neg).collect()),
    }
}

fn scale(r: Vec<OreOperator>, c: &RatFunc) -> Val {
    Val::Row(r.iter().map(|p| p.scale_left(c)).collect())
}

fn add(a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
    match (a, b) {
        (Val::Coef(x), Val::Coef(y)) => Ok(Val::Coef(x.add(&y))),
        (Val::Row(x), Val::Row(y)) => {
            Ok(Val::Row(x.iter().zip(&y).map(|(p, q)| p.add(q)).collect()))
        }
        (Val::Row(r), Val::Coef(c)) | (Val::Coef(c), Val::Row(r)) if c.is_zero() => Ok(Val::Row(r)),
        _ => Err(ParseError::new(
            pos,
            ErrorKind::NotLinear,
            "terms without unknowns make the equation inhomogeneous",
        )),
    }
}

fn mul(a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
    match (a, b) {
        (Val::Coef(x), Val::Coef(y)) => Ok(Val::Coef(x.mul(&y))),
        (Val::Coef(c), Val::Row(r)) | (Val::Row(r), Val::Coef(c)) => Ok(scale(r, &c)),
        (Val::Row(_), Val::Row(_)) => Err(ParseError::new(
            pos,
            ErrorKind::NotLinear,
            "product of two unknowns",
        )),
    }
}

fn div(a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
    let zero = || ParseError::new(pos, ErrorKind::NotLinear, "division by zero");
    match (a, b) {
        (Val::Coef(x), Val::Coef(y)) => x.div(&y).map(Val::Coef).map_err(|_| zero()),
        (Val::Row(r), Val::Coef(c)) => Ok(scale(r, &c.inv().map_err(|_| zero())?)),
        (_, Val::Row(_)) => Err(ParseError::new(
            pos,
            ErrorKind::NotLinear,
            "division by an unknown",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivative() {
        let d = parse("system p(){ indep x; dep y; eq e: d[1,1](y); }").unwrap();
        assert_eq!(d.equations[0].row[0], OreOperator::dd(1, &[0, 0]));
        let d = parse("system p(){ indep x; dep y; eq e: d(y) - 2 x^2 y; }").unwrap();
        let mut want = OreOperator::d(1, 0);
        want.add_term(
            MultiIndex::zero(1),
            RatFunc::x(0).pow(2).mul(&RatFunc::int(-2)),
        );
        assert_eq!(d.equations[0].row[0], want);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("system p(){ indep x;\n dep y; eq e: z; }").unwrap_err();
        assert_eq!(
            (e.kind, e.pos),
            (ErrorKind::Undeclared, Pos { line: 2, col: 15 })
        );
        let e = parse("system p(){ indep x, t; dep y; eq e: d(y); }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Arity);
        let e = parse("system p(){ indep x; dep y; eq e: d[2](y); }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Arity);
        let e = parse("system p(a){ indep a; dep y; eq e: y; }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Duplicate);
        let e = parse("system p(){ indep x; dep y; eq e: y*y; }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::NotLinear);
        let e = parse("system p(){ indep x; dep y; eq e: y + 1; }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::NotLinear);
        let e = parse("system p(){ indep x; dep y; eq e: y; ").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
    }
}
