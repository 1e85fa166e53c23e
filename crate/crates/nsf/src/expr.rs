//! Arithmetic expressions over the variables x and t for initial data,
//! boundary traces and body forces in configuration files. Recursive
//! descent over numbers, pi, + - * / ^ (right associative), unary minus,
//! parentheses and the functions sin, cos, exp.

use std::fmt;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    X,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fun {
    Sin,
    Cos,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Fun(Fun, Box<Node>),
}

/// Parsed expression tree. Evaluation is total: out-of-domain arithmetic
/// follows IEEE semantics and surfaces as non-finite samples, which the
/// scenario validators reject with positions attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr(Node);

impl Expr {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        eval_node(&self.0, x, t)
    }

    /// True when the expression never reads t (usable as pure space data).
    pub fn is_time_free(&self) -> bool {
        free_of(&self.0, Var::T)
    }

    /// True when the expression never reads x (usable as a boundary trace).
    pub fn is_space_free(&self) -> bool {
        free_of(&self.0, Var::X)
    }
}

fn eval_node(node: &Node, x: f64, t: f64) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(Var::X) => x,
        Node::Var(Var::T) => t,
        Node::Neg(e) => -eval_node(e, x, t),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval_node(a, x, t), eval_node(b, x, t));
            match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div => a / b,
                Op::Pow => a.powf(b),
            }
        }
        Node::Fun(f, e) => {
            let v = eval_node(e, x, t);
            match f {
                Fun::Sin => v.sin(),
                Fun::Cos => v.cos(),
                Fun::Exp => v.exp(),
            }
        }
    }
}

fn free_of(node: &Node, var: Var) -> bool {
    match node {
        Node::Num(_) => true,
        Node::Var(v) => *v != var,
        Node::Neg(e) | Node::Fun(_, e) => free_of(e, var),
        Node::Bin(_, a, b) => free_of(a, var) && free_of(b, var),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(&self.0, f)
    }
}

fn fmt_node(node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Node::Num(v) => write!(f, "{v}"),
        Node::Var(Var::X) => write!(f, "x"),
        Node::Var(Var::T) => write!(f, "t"),
        Node::Neg(e) => {
            write!(f, "(-")?;
            fmt_node(e, f)?;
            write!(f, ")")
        }
        Node::Bin(op, a, b) => {
            let sym = match op {
                Op::Add => "+",
                Op::Sub => "-",
                Op::Mul => "*",
                Op::Div => "/",
                Op::Pow => "^",
            };
            write!(f, "(")?;
            fmt_node(a, f)?;
            write!(f, " {sym} ")?;
            fmt_node(b, f)?;
            write!(f, ")")
        }
        Node::Fun(fun, e) => {
            let name = match fun {
                Fun::Sin => "sin",
                Fun::Cos => "cos",
                Fun::Exp => "exp",
            };
            write!(f, "{name}(")?;
            fmt_node(e, f)?;
            write!(f, ")")
        }
    }
}

/// Parses `src` into an expression tree; errors carry byte positions.
pub fn parse(src: &str) -> Result<Expr, Error> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::Config(vec![format!(
            "unexpected trailing input at byte {} of {src:?}",
            p.pos
        )]));
    }
    Ok(Expr(e))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
    }

    fn fail(&self, what: &str) -> Error {
        Error::Config(vec![format!(
            "{what} at byte {} of {:?}",
            self.pos, self.src
        )])
    }

    fn expr(&mut self) -> Result<Node, Error> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.bump(c);
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, Error> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.bump(c);
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, Error> {
        if let Some('-') = self.peek() {
            self.bump('-');
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, Error> {
        let base = self.atom()?;
        if let Some('^') = self.peek() {
            self.bump('^');
            // Right associative, and the exponent may start with a minus:
            // 2^-1 parses as 2^(-1).
            let exponent = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, Error> {
        match self.peek() {
            Some('(') => {
                self.bump('(');
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail("expected a closing parenthesis"));
                }
                self.bump(')');
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.fail("expected a number, name or parenthesis")),
            None => Err(self.fail("expression ended early")),
        }
    }

    fn number(&mut self) -> Result<Node, Error> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if self.pos < bytes.len() && (bytes[self.pos] | 0x20) == b'e' {
            let mut probe = self.pos + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Node::Num)
            .map_err(|_| {
                Error::Config(vec![format!(
                    "malformed number {:?} at byte {start} of {:?}",
                    &self.src[start..self.pos], self.src
                )])
            })
    }

    fn identifier(&mut self) -> Result<Node, Error> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match name {
            "x" => Ok(Node::Var(Var::X)),
            "t" => Ok(Node::Var(Var::T)),
            "pi" => Ok(Node::Num(std::f64::consts::PI)),
            "sin" | "cos" | "exp" => {
                let fun = match name {
                    "sin" => Fun::Sin,
                    "cos" => Fun::Cos,
                    _ => Fun::Exp,
                };
                if self.peek() != Some('(') {
                    return Err(self.fail("a function needs a parenthesized argument"));
                }
                self.bump('(');
                let arg = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail("expected a closing parenthesis"));
                }
                self.bump(')');
                Ok(Node::Fun(fun, Box::new(arg)))
            }
            _ => Err(Error::Config(vec![format!(
                "unknown name {name:?} at byte {start} of {:?} (known: x, t, pi, sin, cos, exp)",
                self.src
            )])),
        }
    }
}
