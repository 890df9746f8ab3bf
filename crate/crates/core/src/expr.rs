//! Arithmetic expressions over named complex variables.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, numeric literals, the
//! constant `pi`, and identifiers. Multiplication must be written out, and
//! exponents are nonnegative integer literals. `^` binds tighter than unary
//! minus, so `-x^2` is `-(x^2)`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected token {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("malformed number '{0}'")]
    BadNumber(String),
    #[error("exponent must be a nonnegative integer literal")]
    BadExponent,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("'pi' is reserved and cannot name a variable")]
    ReservedName,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} variable values, got {got}")]
    Arity { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Pi,
    /// Index into the variable list the expression was parsed against.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// A parsed expression bound to its variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub names: Vec<String>,
    pub root: Expr,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(_, text) => write!(f, "'{text}'"),
            Token::Ident(name) => write!(f, "'{name}'"),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::Caret => f.write_str("'^'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, start));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Scientific suffix: e, E with optional sign.
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
            let lexeme = &text[start..i];
            let value: f64 = lexeme.parse().map_err(|_| ParseError {
                kind: ParseErrorKind::BadNumber(lexeme.to_string()),
                position: start,
            })?;
            out.push((Token::Number(value, lexeme.to_string()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let ch = text[start..].chars().next().unwrap_or(c);
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedChar(ch),
                position: start,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.offset(),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = match self.peek() {
                Some(Token::Number(v, text))
                    if text.bytes().all(|b| b.is_ascii_digit()) && *v <= u32::MAX as f64 =>
                {
                    *v as u32
                }
                None => return Err(self.error(ParseErrorKind::UnexpectedEnd)),
                _ => return Err(self.error(ParseErrorKind::BadExponent)),
            };
            self.pos += 1;
            base = Expr::Pow(Box::new(base), exponent);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(token) = self.peek().cloned() else {
            return Err(self.error(ParseErrorKind::UnexpectedEnd));
        };
        match token {
            Token::Number(v, _) => {
                self.pos += 1;
                Ok(Expr::Number(v))
            }
            Token::Ident(name) => {
                if name == "pi" {
                    self.pos += 1;
                    return Ok(Expr::Pi);
                }
                match self.names.iter().position(|n| *n == name) {
                    Some(index) => {
                        self.pos += 1;
                        Ok(Expr::Var(index))
                    }
                    None => Err(self.error(ParseErrorKind::UnknownVariable(name))),
                }
            }
            Token::LParen => {
                let open = self.offset();
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(&Token::RParen) {
                    if self.peek().is_none() {
                        return Err(ParseError {
                            kind: ParseErrorKind::Unbalanced,
                            position: open,
                        });
                    }
                    let found = self.peek().unwrap().to_string();
                    return Err(self.error(ParseErrorKind::UnexpectedToken(found)));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(self.error(ParseErrorKind::UnexpectedToken(other.to_string()))),
        }
    }
}

/// Parses `text` against the ordered variable list `names`.
pub fn parse(text: &str, names: &[String]) -> Result<Expression, ParseError> {
    if names.iter().any(|n| n == "pi") {
        return Err(ParseError {
            kind: ParseErrorKind::ReservedName,
            position: 0,
        });
    }
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        names,
    };
    let root = parser.sum()?;
    if let Some(token) = parser.peek() {
        let kind = if *token == Token::RParen {
            ParseErrorKind::Unbalanced
        } else {
            ParseErrorKind::UnexpectedToken(token.to_string())
        };
        return Err(parser.error(kind));
    }
    Ok(Expression {
        names: names.to_vec(),
        root,
    })
}

impl Expr {
    fn eval(&self, values: &[Complex64]) -> Result<Complex64, EvalError> {
        Ok(match self {
            Expr::Number(v) => Complex64::new(*v, 0.0),
            Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Expr::Var(i) => values[*i],
            Expr::Neg(e) => -e.eval(values)?,
            Expr::Add(a, b) => a.eval(values)? + b.eval(values)?,
            Expr::Sub(a, b) => a.eval(values)? - b.eval(values)?,
            Expr::Mul(a, b) => a.eval(values)? * b.eval(values)?,
            Expr::Div(a, b) => {
                let den = b.eval(values)?;
                if den == Complex64::new(0.0, 0.0) {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(values)? / den
            }
            Expr::Pow(base, k) => base.eval(values)?.powu(*k),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Number(_) | Expr::Pi | Expr::Var(_) => 5,
        }
    }
}

impl Expression {
    /// Evaluates at `values`, given in the order of `names`.
    pub fn evaluate(&self, values: &[Complex64]) -> Result<Complex64, EvalError> {
        if values.len() != self.names.len() {
            return Err(EvalError::Arity {
                expected: self.names.len(),
                got: values.len(),
            });
        }
        self.root.eval(values)
    }
}

struct Printer<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl Printer<'_> {
    fn child<'b>(&'b self, expr: &'b Expr) -> Printer<'b> {
        Printer {
            expr,
            names: self.names,
        }
    }

    fn wrapped(&self, f: &mut fmt::Formatter<'_>, expr: &Expr, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self.child(expr))
        } else {
            write!(f, "{}", self.child(expr))
        }
    }

    fn binary(&self, f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr) -> fmt::Result {
        let own = self.expr.precedence();
        self.wrapped(f, a, a.precedence() < own)?;
        f.write_str(op)?;
        // Operators are left-associative, so an equal-precedence right operand needs parentheses.
        self.wrapped(f, b, b.precedence() <= own)
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var(i) => f.write_str(&self.names[*i]),
            Expr::Neg(e) => {
                f.write_str("-")?;
                self.wrapped(f, e, e.precedence() < 3)
            }
            Expr::Add(a, b) => self.binary(f, a, " + ", b),
            Expr::Sub(a, b) => self.binary(f, a, " - ", b),
            Expr::Mul(a, b) => self.binary(f, a, "*", b),
            Expr::Div(a, b) => self.binary(f, a, "/", b),
            Expr::Pow(base, k) => {
                self.wrapped(f, base, base.precedence() < 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// Canonical text form: minimal parentheses, re-parses to the same tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            expr: &self.root,
            names: &self.names,
        }
        .fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn eval_real(text: &str, vars: &[&str], values: &[f64]) -> Complex64 {
        let e = parse(text, &names(vars)).unwrap();
        let v: Vec<_> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        e.evaluate(&v).unwrap()
    }

    #[test]
    fn one_variable_example_values() {
        let v = eval_real("(s^2+4)/(s+1)", &["s"], &[1.0]);
        assert_eq!(v, Complex64::new(2.5, 0.0));
    }

    #[test]
    fn three_variable_example_values() {
        let v = eval_real("(s+p*t)/(p^2+s+t)", &["s", "t", "p"], &[2.0, 1.0, 5.0]);
        assert!((v.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(eval_real("-x^2", &["x"], &[3.0]).re, -9.0);
        assert_eq!(eval_real("(-x)^2", &["x"], &[3.0]).re, 9.0);
        assert_eq!(eval_real("2*-x", &["x"], &[3.0]).re, -6.0);
    }

    #[test]
    fn left_associativity() {
        assert_eq!(eval_real("8-3-2", &[], &[]).re, 3.0);
        assert_eq!(eval_real("8/4/2", &[], &[]).re, 1.0);
        assert_eq!(eval_real("2^3^2", &[], &[]).re, 64.0);
    }

    #[test]
    fn pi_constant() {
        assert_eq!(eval_real("pi", &[], &[]).re, std::f64::consts::PI);
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let err = parse("2x", &names(&["x"])).unwrap_err();
        assert_eq!(err.position, 1);
    }

    #[test]
    fn unknown_identifier_reports_position() {
        let err = parse("s + q", &names(&["s"])).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownVariable("q".into()));
        assert_eq!(err.position, 4);
    }

    #[test]
    fn exponent_rules() {
        let n = names(&["x"]);
        assert_eq!(
            parse("x^-1", &n).unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert_eq!(
            parse("x^1.5", &n).unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert_eq!(
            parse("x^y", &n).unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert_eq!(eval_real("x^0", &["x"], &[0.0]).re, 1.0);
    }

    #[test]
    fn unbalanced_parentheses() {
        let n = names(&["x"]);
        assert_eq!(
            parse("(x+1", &n).unwrap_err().kind,
            ParseErrorKind::Unbalanced
        );
        assert_eq!(
            parse("x+1)", &n).unwrap_err().kind,
            ParseErrorKind::Unbalanced
        );
    }

    #[test]
    fn division_by_exact_zero() {
        let e = parse("1/(x-1)", &names(&["x"])).unwrap();
        let err = e.evaluate(&[Complex64::new(1.0, 0.0)]).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero);
    }

    #[test]
    fn arity_is_checked() {
        let e = parse("x", &names(&["x"])).unwrap();
        assert!(matches!(e.evaluate(&[]), Err(EvalError::Arity { .. })));
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let n = names(&["s", "t"]);
        let e = parse("((s^2)*t)/((s-t)+1)", &n).unwrap();
        assert_eq!(e.to_string(), "s^2*t/(s - t + 1)");
        let e = parse("s-(t-1)", &n).unwrap();
        assert_eq!(e.to_string(), "s - (t - 1)");
        let e = parse("(-s)^2", &n).unwrap();
        assert_eq!(e.to_string(), "(-s)^2");
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(eval_real("1.5e2+2E-1", &[], &[]).re, 150.2);
    }
}
