//! Univariate analytic expressions for surface profiles.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' exponent)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents are numeric literals (integer or half-integer), optionally
//! signed and optionally parenthesised, e.g. `exp(v)^(-2)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::jets::{Analytic, Jet2, JetError};

/// Parameter names accepted by [`parse`].
pub const DEFAULT_PARAMETERS: [&str; 6] = ["a", "b", "c", "h", "k", "m"];

pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("parameter `{0}` is not bound")]
    Unbound(String),
    #[error("exponent {0} is not an integer or half-integer")]
    BadExponent(f64),
    #[error("domain error: {0}")]
    Domain(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn analytic(self) -> Analytic {
        match self {
            Func::Sin => Analytic::Sin,
            Func::Cos => Analytic::Cos,
            Func::Sinh => Analytic::Sinh,
            Func::Cosh => Analytic::Cosh,
            Func::Exp => Analytic::Exp,
            Func::Ln => Analytic::Ln,
            Func::Sqrt => Analytic::Sqrt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The coordinate a profile depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coord {
    U,
    V,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Num(f64),
    Coord(Coord),
    Param(String),
    Neg(Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, f64),
    Call(Func, Box<ExprAst>),
}

impl ExprAst {
    /// Coordinates the expression mentions.
    pub fn coords(&self) -> BTreeSet<Coord> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ExprAst::Coord(c) = e {
                out.insert(*c);
            }
        });
        out
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let ExprAst::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn is_constant(&self) -> bool {
        self.coords().is_empty()
    }

    fn visit(&self, f: &mut impl FnMut(&ExprAst)) {
        f(self);
        match self {
            ExprAst::Neg(a) | ExprAst::Pow(a, _) | ExprAst::Call(_, a) => a.visit(f),
            ExprAst::Binary(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Evaluate at a real value of the coordinate.
    pub fn eval(&self, x: f64, bindings: &Bindings) -> Result<f64, ExprError> {
        let j = Jet2::constant((x, 0.0), 0, x);
        Ok(eval_jet(self, &j, bindings)?.value().re)
    }

    pub fn eval_complex(&self, x: f64, bindings: &Bindings) -> Result<Complex64, ExprError> {
        let j = Jet2::constant((x, 0.0), 0, x);
        Ok(eval_jet(self, &j, bindings)?.value())
    }
}

/// Evaluate over jets: every coordinate occurrence is replaced by `var`.
pub fn eval_jet(ast: &ExprAst, var: &Jet2, bindings: &Bindings) -> Result<Jet2, ExprError> {
    Ok(match ast {
        ExprAst::Num(x) => var.constant_like(*x),
        ExprAst::Coord(_) => var.clone(),
        ExprAst::Param(p) => {
            let x = bindings.get(p).ok_or_else(|| ExprError::Unbound(p.clone()))?;
            var.constant_like(*x)
        }
        ExprAst::Neg(a) => -eval_jet(a, var, bindings)?,
        ExprAst::Binary(op, a, b) => {
            let a = eval_jet(a, var, bindings)?;
            let b = eval_jet(b, var, bindings)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.div(&b)?,
            }
        }
        ExprAst::Pow(a, p) => eval_jet(a, var, bindings)?.compose(Analytic::Pow(*p))?,
        ExprAst::Call(f, a) => eval_jet(a, var, bindings)?.compose(f.analytic())?,
    })
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Num(x) => {
                if *x < 0.0 {
                    write!(f, "({x:?})")
                } else {
                    write!(f, "{x:?}")
                }
            }
            ExprAst::Coord(Coord::U) => write!(f, "u"),
            ExprAst::Coord(Coord::V) => write!(f, "v"),
            ExprAst::Param(p) => write!(f, "{p}"),
            ExprAst::Neg(a) => write!(f, "(-{a})"),
            ExprAst::Binary(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            ExprAst::Pow(a, p) => write!(f, "({a})^({p:?})"),
            ExprAst::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Parse with the default parameter names.
pub fn parse(text: &str) -> Result<ExprAst, ExprError> {
    parse_with(text, &DEFAULT_PARAMETERS)
}

/// Parse, accepting `params` as parameter identifiers.
pub fn parse_with(text: &str, params: &[&str]) -> Result<ExprAst, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, params, end: text.len() };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ExprError::Syntax {
            pos: t.pos,
            msg: format!("unexpected {:?}", t.kind),
        });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s = &text[start..i];
            let x = s.parse::<f64>().map_err(|_| ExprError::Syntax {
                pos: start,
                msg: format!("malformed number `{s}`"),
            })?;
            out.push(Token { kind: Tok::Num(x), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: Tok::Ident(text[start..i].to_string()),
                pos: start,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token { kind: Tok::Sym(c), pos: i });
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    params: &'a [&'a str],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(ExprError::Syntax {
                pos: self.here(),
                msg: format!("expected `{c}`"),
            })
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.factor()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ExprError> {
        if self.eat_sym('-') {
            return Ok(ExprAst::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let paren = self.eat_sym('(');
        let neg = self.eat_sym('-');
        let pos = self.here();
        let p = match self.peek() {
            Some(Token { kind: Tok::Num(x), .. }) => *x,
            _ => {
                return Err(ExprError::Syntax {
                    pos,
                    msg: "exponent must be a numeric literal".into(),
                })
            }
        };
        self.pos += 1;
        if paren {
            self.expect_sym(')')?;
        }
        let p = if neg { -p } else { p };
        if (2.0 * p).fract() != 0.0 {
            return Err(ExprError::BadExponent(p));
        }
        Ok(ExprAst::Pow(Box::new(base), p))
    }

    fn atom(&mut self) -> Result<ExprAst, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(ExprError::Syntax {
                pos: self.end,
                msg: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok.kind {
            Tok::Num(x) => Ok(ExprAst::Num(x)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    return Ok(ExprAst::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "u" => Ok(ExprAst::Coord(Coord::U)),
                    "v" => Ok(ExprAst::Coord(Coord::V)),
                    _ if self.params.contains(&name.as_str()) => Ok(ExprAst::Param(name)),
                    _ => Err(ExprError::UnknownIdentifier { name, pos: tok.pos }),
                }
            }
            Tok::Sym(c) => Err(ExprError::Syntax {
                pos: tok.pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Var;

    fn bind(pairs: &[(&str, f64)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn torus_profile() {
        let e = parse("k - cos(v)").unwrap();
        assert_eq!(e.eval(0.0, &bind(&[("k", 2.0)])).unwrap(), 1.0);
    }

    #[test]
    fn zero_literal() {
        assert_eq!(parse("0").unwrap(), ExprAst::Num(0.0));
    }

    #[test]
    fn precedence() {
        let e = parse("1 + 2*3^2 - -4/2").unwrap();
        assert_eq!(e.eval(0.0, &Bindings::new()).unwrap(), 1.0 + 18.0 + 2.0);
        // unary minus binds looser than ^
        let e = parse("-2^2").unwrap();
        assert_eq!(e.eval(0.0, &Bindings::new()).unwrap(), -4.0);
        // left associativity
        let e = parse("8/4/2").unwrap();
        assert_eq!(e.eval(0.0, &Bindings::new()).unwrap(), 1.0);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("1 + * 2"), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse("q + 1"), Err(ExprError::UnknownIdentifier { pos: 0, .. })));
        assert!(matches!(parse("sin(u"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("u^v"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("u^0.3"), Err(ExprError::BadExponent(_))));
    }

    #[test]
    fn unbound_parameter() {
        let e = parse("a*u").unwrap();
        assert_eq!(e.eval(1.0, &Bindings::new()), Err(ExprError::Unbound("a".into())));
    }

    #[test]
    fn sinh_jet() {
        let e = parse("sinh(v)").unwrap();
        let x = Jet2::variable((0.0, 1.0), 2, Var::V);
        let j = eval_jet(&e, &x, &Bindings::new()).unwrap();
        assert!((j.value().re - 1f64.sinh()).abs() < 1e-15);
        assert!((j.coeff(0, 1).re - 1f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_at_zero_is_domain_error() {
        let e = parse("1/(u)").unwrap();
        let x = Jet2::variable((0.0, 0.0), 2, Var::U);
        assert!(matches!(eval_jet(&e, &x, &Bindings::new()), Err(ExprError::Domain(_))));
    }

    #[test]
    fn exponents_with_sign_and_scientific_numbers() {
        let e = parse("exp(v)^(-2) + 1.5e-1*v^-1").unwrap();
        let x = 0.7;
        let expect = (-2.0_f64 * x).exp() + 0.15 / x;
        assert!((e.eval(x, &Bindings::new()).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn coordinates_reported() {
        let e = parse("a*u^2 + 1").unwrap();
        assert_eq!(e.coords().into_iter().collect::<Vec<_>>(), vec![Coord::U]);
        assert!(parse("k - 1").unwrap().is_constant());
    }
}
