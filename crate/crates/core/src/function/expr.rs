//! Expression DSL for user-supplied integrands.
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := ("-")? power ;
//! power  := atom ("^" factor)? ;
//! atom   := NUMBER | "x" | "pi" | "e" | IDENT "(" expr ")" | "(" expr ")" ;
//! IDENT  := "ln" | "exp" | "sqrt" | "abs" | "sin" | "cos" ;
//! ```
//!
//! The integration variable is written `x`. Whitespace is insignificant.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::EvalError;

/// Maximum accepted source length in bytes.
pub const MAX_EXPR_LEN: usize = 64 * 1024;
const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Ln,
    Exp,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

impl UnaryOp {
    fn from_ident(name: &str) -> Option<Self> {
        Some(match name {
            "ln" => Self::Ln,
            "exp" => Self::Exp,
            "sqrt" => Self::Sqrt,
            "abs" => Self::Abs,
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Neg => "-",
            Self::Ln => "ln",
            Self::Exp => "exp",
            Self::Sqrt => "sqrt",
            Self::Abs => "abs",
            Self::Sin => "sin",
            Self::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            Self::Add => '+',
            Self::Sub => '-',
            Self::Mul => '*',
            Self::Div => '/',
            Self::Pow => '^',
        }
    }
}

/// Parsed expression tree over the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Self {
        Self::Const(value)
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Self {
        Self::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Self::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// True if the tree never references `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Self::Const(_) => true,
            Self::Var => false,
            Self::Unary(_, a) => a.is_constant(),
            Self::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Self::Const(_) | Self::Var => 1,
            Self::Unary(_, a) => 1 + a.depth(),
            Self::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Evaluates at `tau`. Domain faults are reported instead of yielding
    /// NaN or infinity.
    pub fn eval(&self, tau: f64) -> Result<f64, EvalError> {
        let value = match self {
            Self::Const(c) => return Ok(*c),
            Self::Var => return Ok(tau),
            Self::Unary(op, arg) => {
                let a = arg.eval(tau)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Ln if a <= 0.0 => {
                        return Err(self.fault(tau, "logarithm of a nonpositive value"))
                    }
                    UnaryOp::Ln => a.ln(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Sqrt if a < 0.0 => {
                        return Err(self.fault(tau, "square root of a negative value"))
                    }
                    UnaryOp::Sqrt => a.sqrt(),
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                }
            }
            Self::Binary(op, lhs, rhs) => {
                let a = lhs.eval(tau)?;
                let b = rhs.eval(tau)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div if b == 0.0 => return Err(self.fault(tau, "division by zero")),
                    BinaryOp::Div => a / b,
                    BinaryOp::Pow if a == 0.0 && b < 0.0 => {
                        return Err(self.fault(tau, "zero raised to a negative power"))
                    }
                    BinaryOp::Pow if a < 0.0 && b.fract() != 0.0 => {
                        return Err(self.fault(tau, "negative base with a non-integer exponent"))
                    }
                    BinaryOp::Pow => a.powf(b),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(self.fault(tau, "non-finite result"))
        }
    }

    fn fault(&self, tau: f64, reason: &'static str) -> EvalError {
        EvalError::Domain {
            expr: self.to_string(),
            tau,
            reason,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) if c.to_bits() == PI.to_bits() => f.write_str("pi"),
            Self::Const(c) if c.to_bits() == E.to_bits() => f.write_str("e"),
            Self::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Self::Const(c) => write!(f, "{c}"),
            Self::Var => f.write_str("x"),
            Self::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            // the call parentheses already delimit the argument
            Self::Unary(op, a) => match a.as_ref() {
                Self::Binary(bop, l, r) => write!(f, "{}({l} {} {r})", op.name(), bop.symbol()),
                _ => write!(f, "{}({a})", op.name()),
            },
            Self::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("expression is {0} bytes, limit is {MAX_EXPR_LEN}")]
    TooLong(usize),
    #[error("syntax error at byte {offset}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdent { name: String, offset: usize },
    #[error("function `{name}` at byte {offset} takes 1 argument, got {got}")]
    Arity {
        name: String,
        offset: usize,
        got: usize,
    },
    #[error("nesting deeper than {MAX_DEPTH} levels at byte {offset}")]
    TooDeep { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            Self::Empty | Self::TooLong(_) => None,
            Self::Syntax { offset, .. }
            | Self::UnknownIdent { offset, .. }
            | Self::Arity { offset, .. }
            | Self::TooDeep { offset } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i);
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    found: format!("malformed number `{text}`"),
                    expected: vec!["number"],
                })?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    found: format!("character {ch:?}"),
                    expected: vec!["number", "x", "identifier", "operator", "`(`", "`)`"],
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    // Only treat `e` as an exponent marker when digits follow, so `2e` and
    // `2exp(x)` still lex as a number followed by an identifier.
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
    i
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

const ATOM_START: &[&str] = &["number", "x", "pi", "e", "function name", "`(`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().describe(),
            expected: expected.to_vec(),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep {
                offset: self.offset(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let e = if *self.peek() == Tok::Minus {
            self.bump();
            Expr::unary(UnaryOp::Neg, self.power()?)
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let (_, offset) = self.bump();
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(PI)),
                    "e" => Ok(Expr::Const(E)),
                    _ => {
                        let op = UnaryOp::from_ident(&name).ok_or(ParseError::UnknownIdent {
                            name: name.clone(),
                            offset,
                        })?;
                        self.call(op, name, offset)
                    }
                }
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }

    fn call(&mut self, op: UnaryOp, name: String, offset: usize) -> Result<Expr, ParseError> {
        if *self.peek() != Tok::LParen {
            return Err(self.unexpected(&["`(`"]));
        }
        self.bump();
        if *self.peek() == Tok::RParen {
            return Err(ParseError::Arity {
                name,
                offset,
                got: 0,
            });
        }
        let arg = self.expr()?;
        if *self.peek() == Tok::Comma {
            let mut got = 1;
            while *self.peek() == Tok::Comma {
                self.bump();
                self.expr()?;
                got += 1;
            }
            return Err(ParseError::Arity { name, offset, got });
        }
        self.expect_rparen()?;
        Ok(Expr::unary(op, arg))
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["`)`", "operator"]))
        }
    }
}

/// Parses the expression grammar described in the module docs.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    if text.len() > MAX_EXPR_LEN {
        return Err(ParseError::TooLong(text.len()));
    }
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(parse_expr("1").unwrap(), c(1.0));
        assert_eq!(
            parse_expr("ln(x)^2 / 2").unwrap(),
            Expr::binary(
                BinaryOp::Div,
                Expr::binary(BinaryOp::Pow, Expr::unary(UnaryOp::Ln, Expr::Var), c(2.0)),
                c(2.0)
            )
        );
        assert_eq!(
            parse_expr("1 + 0.5*ln(x)").unwrap(),
            Expr::binary(
                BinaryOp::Add,
                c(1.0),
                Expr::binary(BinaryOp::Mul, c(0.5), Expr::unary(UnaryOp::Ln, Expr::Var))
            )
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds looser than ^
        assert_eq!(
            parse_expr("-x^2").unwrap(),
            Expr::unary(UnaryOp::Neg, Expr::binary(BinaryOp::Pow, Expr::Var, c(2.0)))
        );
        // ^ is right-associative
        assert_eq!(
            parse_expr("2^3^2").unwrap(),
            Expr::binary(
                BinaryOp::Pow,
                c(2.0),
                Expr::binary(BinaryOp::Pow, c(3.0), c(2.0))
            )
        );
        assert_eq!(parse_expr("2^-1").unwrap().eval(1.0).unwrap(), 0.5);
        // - and / are left-associative
        assert_eq!(parse_expr("8 - 2 - 1").unwrap().eval(1.0).unwrap(), 5.0);
        assert_eq!(parse_expr("8 / 2 / 2").unwrap().eval(1.0).unwrap(), 2.0);
        assert_eq!(parse_expr("2 * -3").unwrap().eval(1.0).unwrap(), -6.0);
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(parse_expr("1.5e2").unwrap(), c(150.0));
        assert_eq!(parse_expr(".25").unwrap(), c(0.25));
        assert_eq!(parse_expr("2E-1").unwrap(), c(0.2));
        assert_eq!(parse_expr("pi").unwrap(), c(PI));
        assert_eq!(parse_expr("e").unwrap(), c(E));
        assert_eq!(
            parse_expr("2*exp(x)").unwrap(),
            Expr::binary(BinaryOp::Mul, c(2.0), Expr::unary(UnaryOp::Exp, Expr::Var))
        );
    }

    #[test]
    fn eval_examples() {
        assert!((parse_expr("ln(x)").unwrap().eval(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(parse_expr("x^0.5").unwrap().eval(4.0).unwrap(), 2.0);
        let err = parse_expr("1/(x-1)").unwrap().eval(1.0).unwrap_err();
        match err {
            EvalError::Domain { expr, tau, reason } => {
                assert_eq!(expr, "(1 / (x - 1))");
                assert_eq!(tau, 1.0);
                assert_eq!(reason, "division by zero");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_domain_faults() {
        for src in [
            "ln(x - 1)",
            "sqrt(0.5 - x)",
            "(x - 1)^-1",
            "(-x)^0.5",
            "exp(1000*x)",
        ] {
            assert!(
                parse_expr(src).unwrap().eval(1.0).is_err(),
                "{src} should fault"
            );
        }
        assert_eq!(parse_expr("(-x)^3").unwrap().eval(2.0).unwrap(), -8.0);
    }

    #[test]
    fn syntax_errors_carry_offset_and_expectation() {
        let err = parse_expr("1 + ").unwrap_err();
        assert_eq!(err.offset(), Some(4));
        match err {
            ParseError::Syntax { expected, .. } => assert!(expected.contains(&"number")),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_expr("(x").unwrap_err().offset(), Some(2));
        assert_eq!(parse_expr("x x").unwrap_err().offset(), Some(2));
        assert!(matches!(
            parse_expr("foo(x)"),
            Err(ParseError::UnknownIdent { offset: 0, .. })
        ));
        assert!(matches!(
            parse_expr("y"),
            Err(ParseError::UnknownIdent { .. })
        ));
        assert!(matches!(
            parse_expr("ln(x, 2)"),
            Err(ParseError::Arity { got: 2, .. })
        ));
        assert!(matches!(
            parse_expr("sin()"),
            Err(ParseError::Arity { got: 0, .. })
        ));
        assert!(matches!(parse_expr("   "), Err(ParseError::Empty)));
        assert!(matches!(
            parse_expr("--x"),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_expr("x ≤ 1"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
    }

    #[test]
    fn limits() {
        let long = "1+".repeat(MAX_EXPR_LEN / 2) + "1";
        assert!(matches!(parse_expr(&long), Err(ParseError::TooLong(_))));
        let deep = "(".repeat(1000) + "x" + &")".repeat(1000);
        assert!(matches!(parse_expr(&deep), Err(ParseError::TooDeep { .. })));
        let ok = "(".repeat(100) + "x" + &")".repeat(100);
        assert_eq!(parse_expr(&ok).unwrap(), Expr::Var);
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in [
            "-x^2",
            "2^3^2",
            "ln(x)^2 / 2",
            "pi*e",
            "1e-300 + 1.7976931348623157e308",
        ] {
            let ast = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }
}
