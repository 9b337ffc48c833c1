//! A small expression grammar for function specs on the command line:
//! variables `z`, `w`, complex literals (`2`, `0.5i`, `1+2i` via addition),
//! the four arithmetic operators, integer powers `^`, `exp(...)`, and basis
//! elements `f[p,q]`. Deliberately tiny: reproducible specs without
//! arbitrary code execution.
//!
//! Grammar:
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' integer)?
//! primary := number | 'i' | 'z' | 'w' | 'exp' '(' expr ')'
//!          | 'f' '[' integer ',' integer ']' | '(' expr ')'
//! ```

use std::fmt;

use num_complex::Complex64;
use omega_core::calculus::{BivariateFunction, Domain};
use omega_core::riemann::ExtComplex;
use omega_core::schauder::basis_function;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Imaginary(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '[' => {
                tokens.push((Token::LBracket, i));
                i += 1;
            }
            ']' => {
                tokens.push((Token::RBracket, i));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    message: format!("malformed number {text:?}"),
                    position: start,
                })?;
                // a trailing 'i' marks an imaginary literal, e.g. 0.5i
                if i < bytes.len()
                    && bytes[i] as char == 'i'
                    && !(i + 1 < bytes.len() && (bytes[i + 1] as char).is_alphanumeric())
                {
                    i += 1;
                    tokens.push((Token::Imaginary(value), start));
                } else {
                    tokens.push((Token::Number(value), start));
                }
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_alphanumeric() {
                    i += 1;
                }
                tokens.push((Token::Ident(src[start..i].to_string()), start));
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character {other:?}"),
                    position: i,
                })
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug, Clone)]
pub enum Expr {
    Const(Complex64),
    Z,
    W,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Basis(usize, usize),
}

impl Expr {
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Z => z,
            Expr::W => w,
            Expr::Add(a, b) => a.eval(z, w) + b.eval(z, w),
            Expr::Sub(a, b) => a.eval(z, w) - b.eval(z, w),
            Expr::Mul(a, b) => a.eval(z, w) * b.eval(z, w),
            Expr::Div(a, b) => a.eval(z, w) / b.eval(z, w),
            Expr::Neg(a) => -a.eval(z, w),
            Expr::Pow(a, k) => a.eval(z, w).powu(*k),
            Expr::Exp(a) => a.eval(z, w).exp(),
            Expr::Basis(p, q) => omega_core::schauder::basis_eval(
                *p,
                *q,
                ExtComplex::Finite(z),
                ExtComplex::Finite(w),
            )
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    pub fn uses_variables(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Z | Expr::W | Expr::Basis(..) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_variables() || b.uses_variables()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => a.uses_variables(),
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(_, p)| *p)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            message,
            position: self.position(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    node = Expr::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    node = Expr::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut node = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    node = Expr::Mul(Box::new(node), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    node = Expr::Div(Box::new(node), Box::new(self.factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    // unary minus binds looser than the power operator: -z^2 = -(z^2)
    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = self.nonneg_integer("power exponent")?;
            Ok(Expr::Pow(Box::new(base), exponent as u32))
        } else {
            Ok(base)
        }
    }

    fn nonneg_integer(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.advance() {
            Some(Token::Number(v)) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                Ok(v as usize)
            }
            _ => Err(self.error(format!("{what} must be a nonnegative integer"))),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.advance() {
            Some(Token::Number(v)) => Ok(Expr::Const(Complex64::new(v, 0.0))),
            Some(Token::Imaginary(v)) => Ok(Expr::Const(Complex64::new(0.0, v))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "z" => Ok(Expr::Z),
                "w" => Ok(Expr::W),
                "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                "inf" => Err(self.error("\"inf\" is a point literal, not a function term".into())),
                "exp" => {
                    self.expect(Token::LParen)?;
                    let inner = self.expr()?;
                    self.expect(Token::RParen)?;
                    Ok(Expr::Exp(Box::new(inner)))
                }
                "f" => {
                    self.expect(Token::LBracket)?;
                    let p = self.nonneg_integer("basis index p")?;
                    self.expect(Token::Comma)?;
                    let q = self.nonneg_integer("basis index q")?;
                    self.expect(Token::RBracket)?;
                    Ok(Expr::Basis(p, q))
                }
                other => Err(self.error(format!("unknown identifier {other:?}"))),
            },
            Some(other) => Err(self.error(format!("unexpected token {other:?}"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let tokens = lex(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        len: src.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input after expression".into()));
    }
    Ok(expr)
}

/// Parses a function spec into an evaluable function with the given domain
/// tag. A bare basis token keeps its exact evaluation on the lines at
/// infinity; general expressions evaluate at finite points only.
pub fn parse_fn_spec(src: &str, domain: Domain) -> Result<BivariateFunction, ParseError> {
    let expr = parse_expr(src)?;
    if let Expr::Basis(p, q) = expr {
        if domain == Domain::Omega {
            return Ok(basis_function(p, q));
        }
    }
    Ok(BivariateFunction::from_finite_fn(src.trim(), domain, move |z, w| expr.eval(z, w)))
}

/// Parses a point coordinate: `inf` for the point at infinity, otherwise a
/// constant expression such as `0.5`, `-2i`, or `0.3+0.4i`.
pub fn parse_point_literal(src: &str) -> Result<ExtComplex, ParseError> {
    if src.trim() == "inf" {
        return Ok(ExtComplex::Infinity);
    }
    let expr = parse_expr(src)?;
    if expr.uses_variables() {
        return Err(ParseError {
            message: "point literal must not reference z, w, or basis functions".into(),
            position: 0,
        });
    }
    let value = expr.eval(Complex64::default(), Complex64::default());
    ExtComplex::finite(value).map_err(|e| ParseError {
        message: e.to_string(),
        position: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eval(src: &str, z: Complex64, w: Complex64) -> Complex64 {
        parse_expr(src).unwrap().eval(z, w)
    }

    #[test]
    fn arithmetic_and_precedence() {
        let z = c(2.0, 0.0);
        let w = c(3.0, 0.0);
        assert_eq!(eval("z + w * 2", z, w), c(8.0, 0.0));
        assert_eq!(eval("(z + w) * 2", z, w), c(10.0, 0.0));
        assert_eq!(eval("z^2 - w", z, w), c(1.0, 0.0));
        assert_eq!(eval("-z^2", z, w), c(-4.0, 0.0));
        assert_eq!(eval("1/(1-z*w)", z, w), c(-0.2, 0.0));
    }

    #[test]
    fn complex_literals() {
        let zero = Complex64::default();
        assert_eq!(eval("i", zero, zero), c(0.0, 1.0));
        assert_eq!(eval("2i", zero, zero), c(0.0, 2.0));
        assert_eq!(eval("0.5 - 0.25i", zero, zero), c(0.5, -0.25));
        assert_eq!(eval("3 * i", zero, zero), c(0.0, 3.0));
    }

    #[test]
    fn exp_and_basis_tokens() {
        let v = eval("exp(z*w/(1-z*w))", c(0.5, 0.0), c(0.5, 0.0));
        let arg = 0.25 / 0.75;
        assert!((v - c(arg, 0.0).exp()).norm() < 1e-15);
        let v = eval("f[2,1]", c(0.5, 0.0), c(0.5, 0.0));
        assert!((v - c(2.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_expr("z +").is_err());
        assert!(parse_expr("q").is_err());
        assert!(parse_expr("f[1]").is_err());
        assert!(parse_expr("z ^ w").is_err());
        assert!(parse_expr("z ^ -1").is_err());
        assert!(parse_expr("(z").is_err());
        assert!(parse_expr("z 2").is_err());
    }

    #[test]
    fn basis_spec_keeps_infinity_support() {
        let f = parse_fn_spec("f[1,1]", Domain::Omega).unwrap();
        let v = f.eval(ExtComplex::Infinity, ExtComplex::Infinity);
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn point_literals() {
        assert_eq!(parse_point_literal("inf").unwrap(), ExtComplex::Infinity);
        let v = parse_point_literal("0.3+0.4i").unwrap();
        assert!(v.approx_eq(ExtComplex::new(0.3, 0.4).unwrap(), 1e-15));
        assert!(parse_point_literal("z").is_err());
    }
}
