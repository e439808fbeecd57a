//! Recursive-descent parser for metric component expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | constant | variable | function '(' sum ')' | '(' sum ')'
//! ```
//!
//! so `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function `{name}` at byte {offset} takes 1 argument, got {given}")]
    Arity {
        offset: usize,
        name: String,
        given: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    fn apply(self, x: f64) -> Result<f64, String> {
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log if x <= 0.0 => return Err(format!("log of non-positive value {x}")),
            Func::Log => x.ln(),
            Func::Sqrt if x < 0.0 => return Err(format!("sqrt of negative value {x}")),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Abs => x.abs(),
        };
        Ok(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Index into the coordinate list the expression was parsed against.
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, point: &[f64]) -> Result<f64, String> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Var(i) => *point
                .get(*i)
                .ok_or_else(|| format!("coordinate {i} missing from point of length {}", point.len()))?,
            Expr::Neg(e) => -e.eval(point)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(point)?, b.eval(point)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err("division by zero".into()),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(point)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value from `{}`", self.render_opaque()))
        }
    }

    /// Fully parenthesized text that re-parses to the same tree.
    pub fn render(&self, names: &[String]) -> String {
        match self {
            // `{:?}` prints the shortest round-tripping decimal.
            Expr::Num(x) => format!("{x:?}"),
            Expr::Var(i) => names[*i].clone(),
            Expr::Neg(e) => format!("(-{})", e.render(names)),
            Expr::Binary(op, a, b) => format!("({} {} {})", a.render(names), op.symbol(), b.render(names)),
            Expr::Call(f, e) => format!("{}({})", f.name(), e.render(names)),
        }
    }

    fn render_opaque(&self) -> String {
        let names: Vec<String> = (0..self.max_var().map_or(0, |m| m + 1)).map(|i| format!("x{}", i + 1)).collect();
        self.render(&names)
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(e) | Expr::Call(_, e) => e.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn parse_expression<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        vars: variables.iter().map(|s| s.as_ref()).collect(),
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.rest().chars().next().unwrap())));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => Err(self.syntax(format!("expected `{c}`, found `{x}`"))),
            None => Err(self.syntax(format!("expected `{c}`, found end of input"))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input".into())),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut e = end + 1;
            if e < bytes.len() && (bytes[e] == b'+' || bytes[e] == b'-') {
                e += 1;
            }
            if e < bytes.len() && bytes[e].is_ascii_digit() {
                while e < bytes.len() && bytes[e].is_ascii_digit() {
                    e += 1;
                }
                end = e;
            }
        }
        let text = &self.src[start..end];
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        self.pos = end;
        Ok(Expr::Num(value))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
            .map_or(self.rest().len(), |(i, _)| i);
        let name = &self.src[start..start + len];
        self.pos += len;
        if let Some(f) = Func::from_name(name) {
            self.expect('(')?;
            let arg = self.sum()?;
            let mut given = 1;
            while self.peek() == Some(',') {
                self.pos += 1;
                self.sum()?;
                given += 1;
            }
            if given != 1 {
                return Err(ParseError::Arity {
                    offset: start,
                    name: name.to_string(),
                    given,
                });
            }
            self.expect(')')?;
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        if let Some(i) = self.vars.iter().position(|v| *v == name) {
            return Ok(Expr::Var(i));
        }
        match name {
            "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            "e" => Ok(Expr::Num(std::f64::consts::E)),
            _ => Err(ParseError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            }),
        }
    }
}
