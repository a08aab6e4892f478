//! Recursive-descent parsers for potentials and states.

use chiral_core::brst::Potential;
use chiral_core::conformal::{AlgebraContext, Generator, Kind, VAElement};
use chiral_core::polynomial::Polynomial;
use chiral_core::rational::parse_q;
use chiral_core::Q;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

type PResult<T> = std::result::Result<T, ParseError>;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn uint(&mut self) -> PResult<u32> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| ParseError { pos: start, msg: format!("number {d} too large") })
    }

    /// `p` or `p/q`.
    fn rational(&mut self) -> PResult<Q> {
        let start = self.pos;
        let num = self.digits()?;
        let save = self.pos;
        if self.eat(b'/') {
            if let Some(c) = self.peek() {
                if c.is_ascii_digit() {
                    let den = self.digits()?;
                    return parse_q(&format!("{num}/{den}"))
                        .ok_or(ParseError { pos: start, msg: "zero denominator".into() });
                }
            }
            self.pos = save;
        }
        Ok(parse_q(num).expect("digits"))
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn done(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a polynomial in x1..xD. `dim` of `None` infers D from the largest index.
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> PResult<Polynomial> {
    let mut c = Cursor::new(text);
    let mut vars = Vec::new();
    let tree = expr(&mut c, &mut vars)?;
    if !c.done() {
        let ch = c.peek().map(char::from).unwrap_or(' ');
        return c.err(format!("unexpected '{ch}'"));
    }
    let max = vars.iter().map(|(_, i)| *i).max().unwrap_or(1);
    let dim = dim.unwrap_or(max);
    if let Some((pos, i)) = vars.iter().find(|(_, i)| *i > dim) {
        return Err(ParseError { pos: *pos, msg: format!("variable x{i} exceeds dimension {dim}") });
    }
    Ok(tree.eval(dim))
}

enum Node {
    Num(Q),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

impl Node {
    fn eval(&self, dim: usize) -> Polynomial {
        match self {
            Node::Num(q) => Polynomial::constant(dim, q.clone()),
            Node::Var(i) => Polynomial::var(dim, *i),
            Node::Add(a, b) => a.eval(dim).add(&b.eval(dim)),
            Node::Sub(a, b) => a.eval(dim).sub(&b.eval(dim)),
            Node::Mul(a, b) => a.eval(dim).mul(&b.eval(dim)),
            Node::Neg(a) => a.eval(dim).scale(&-Q::one()),
            Node::Pow(a, k) => a.eval(dim).pow(*k),
        }
    }
}

fn expr(c: &mut Cursor, vars: &mut Vec<(usize, usize)>) -> PResult<Node> {
    let mut lhs = term(c, vars)?;
    loop {
        if c.eat(b'+') {
            lhs = Node::Add(Box::new(lhs), Box::new(term(c, vars)?));
        } else if c.eat(b'-') {
            lhs = Node::Sub(Box::new(lhs), Box::new(term(c, vars)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(c: &mut Cursor, vars: &mut Vec<(usize, usize)>) -> PResult<Node> {
    let mut lhs = unary(c, vars)?;
    while c.eat(b'*') {
        lhs = Node::Mul(Box::new(lhs), Box::new(unary(c, vars)?));
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor, vars: &mut Vec<(usize, usize)>) -> PResult<Node> {
    if c.eat(b'-') {
        return Ok(Node::Neg(Box::new(unary(c, vars)?)));
    }
    let base = atom(c, vars)?;
    if c.eat(b'^') {
        return Ok(Node::Pow(Box::new(base), c.uint()?));
    }
    Ok(base)
}

fn atom(c: &mut Cursor, vars: &mut Vec<(usize, usize)>) -> PResult<Node> {
    match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let inner = expr(c, vars)?;
            if !c.eat(b')') {
                return c.err("expected ')'");
            }
            Ok(inner)
        }
        Some(b'x') => {
            let pos = c.pos;
            c.pos += 1;
            let i = c.uint()? as usize;
            if i == 0 {
                return Err(ParseError { pos, msg: "variables are numbered from x1".into() });
            }
            vars.push((pos, i));
            Ok(Node::Var(i))
        }
        Some(d) if d.is_ascii_digit() => Ok(Node::Num(c.rational()?)),
        Some(other) => c.err(format!("unexpected '{}'", char::from(other))),
        None => c.err("unexpected end of input"),
    }
}

/// Input errors of the front end.
#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Engine(#[from] chiral_core::Error),
    #[error("{0}")]
    Invalid(String),
}

/// Parses f and attaches weights (all 1 by default), inferring a.
pub fn parse_potential(text: &str, dim: Option<usize>, weights: Option<&[i64]>) -> Result<Potential, InputError> {
    let dim = dim.or(weights.map(<[i64]>::len));
    let f = parse_polynomial(text, dim)?;
    if f.is_zero() {
        return Err(InputError::Invalid("potential is zero".into()));
    }
    let weights = weights.map(<[i64]>::to_vec).unwrap_or_else(|| vec![1; f.dim()]);
    Ok(Potential::new(f, weights)?)
}

/// Parses `c :d^k g_i …: + …` into a normal form, with warnings for terms
/// that vanish identically.
pub fn parse_state(text: &str, ctx: AlgebraContext) -> PResult<(VAElement, Vec<String>)> {
    let mut c = Cursor::new(text);
    let mut out = VAElement::zero(ctx);
    let mut warnings = Vec::new();
    let mut first = true;
    while !c.done() || first {
        let mut sign = Q::one();
        if c.eat(b'-') {
            sign = -sign;
        } else if !first && !c.eat(b'+') {
            return c.err("expected '+' or '-'");
        }
        first = false;
        let start = c.pos;
        let mut coeff = sign;
        if matches!(c.peek(), Some(d) if d.is_ascii_digit()) {
            coeff *= c.rational()?;
            c.eat(b'*');
        }
        let factors = if c.eat(b':') {
            let mut fs = Vec::new();
            while !c.eat(b':') {
                if c.done() {
                    return c.err("unterminated ':'");
                }
                fs.push(generator(&mut c, ctx)?);
            }
            fs
        } else if matches!(c.peek(), Some(b'x' | b'y' | b'p' | b'd')) {
            vec![generator(&mut c, ctx)?]
        } else if c.pos > start {
            Vec::new()
        } else {
            return c.err("expected a coefficient or a state");
        };
        let term = VAElement::monomial(ctx, coeff, factors)
            .map_err(|e| ParseError { pos: start, msg: e.to_string() })?;
        if term.is_zero() {
            warnings.push(format!("term at position {start} vanishes (repeated odd generator)"));
        }
        out = out.add(&term).expect("same context");
    }
    Ok((out, warnings))
}

fn generator(c: &mut Cursor, ctx: AlgebraContext) -> PResult<Generator> {
    let mut deriv = 0;
    c.skip_ws();
    let start = c.pos;
    if c.src.get(c.pos) == Some(&b'd') {
        c.pos += 1;
        deriv = if c.src.get(c.pos) == Some(&b'^') {
            c.pos += 1;
            c.uint()?
        } else {
            1
        };
    }
    let name_pos = {
        c.skip_ws();
        c.pos
    };
    let kind = match c.word() {
        "x" => Kind::X,
        "y" => Kind::Y,
        "phi" => Kind::Phi,
        "psi" => Kind::Psi,
        "" => return c.err("expected a generator"),
        w => return Err(ParseError { pos: name_pos, msg: format!("unknown generator '{w}'") }),
    };
    let index = c.uint()?;
    if index == 0 || index as usize > ctx.dim() {
        return Err(ParseError { pos: start, msg: format!("index {index} out of range 1..={}", ctx.dim()) });
    }
    Ok(Generator::new(kind, index, deriv))
}

/// Parses `NAME=EXPR` overrides.
pub fn split_override(text: &str) -> Result<(String, String), InputError> {
    let (name, expr) = text
        .split_once('=')
        .ok_or_else(|| InputError::Invalid(format!("override '{text}' is not NAME=EXPR")))?;
    let name = name.trim().to_string();
    if !["L", "J", "Q", "G"].contains(&name.as_str()) {
        return Err(InputError::Invalid(format!("unknown current '{name}' (expected L, J, Q or G)")));
    }
    Ok((name, expr.trim().to_string()))
}

/// Parses a comma list of integers.
pub fn parse_weights(text: &str) -> Result<Vec<i64>, InputError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| InputError::Invalid(format!("bad weight '{s}'"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chiral_core::conformal::Profile;

    #[test]
    fn potentials() {
        let p = parse_potential("x1^3", None, None).unwrap();
        assert_eq!(p.a(), 3);
        let p = parse_potential("x1^4 + x2^2", None, Some(&[1, 2])).unwrap();
        assert_eq!(p.a(), 4);
        assert!(matches!(
            parse_potential("x1^2 + x1", None, None),
            Err(InputError::Engine(chiral_core::Error::Inhomogeneous { .. }))
        ));
        let p = parse_potential("1/2*(x1 + x2)^2 - x1*x2", None, None).unwrap();
        assert_eq!(p.f(), &parse_polynomial("1/2*x1^2 + 1/2*x2^2", None).unwrap());
    }

    #[test]
    fn syntax_positions() {
        let e = parse_polynomial("x1 + * x2", None).unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_polynomial("(x1 + x2", None).unwrap_err();
        assert_eq!(e.pos, 8);
        assert!(parse_polynomial("x3", Some(2)).is_err());
    }

    #[test]
    fn states() {
        let ctx = AlgebraContext::new(1, Profile::Polyvector).unwrap();
        let (s, w) = parse_state(":d x1 y1:", ctx).unwrap();
        assert_eq!(s.render(), ":y1 dx1:");
        assert!(w.is_empty());
        let (s, _) = parse_state("2 :x1 psi1:", ctx).unwrap();
        assert_eq!(s.render(), "2 :psi1 x1:");
        let (s, w) = parse_state(":psi1 psi1:", ctx).unwrap();
        assert!(s.is_zero());
        assert_eq!(w.len(), 1);
        let (s, _) = parse_state("1 - 3/2 :y1 dx1: + d^2x1", ctx).unwrap();
        assert_eq!(parse_state(&s.render(), ctx).unwrap().0, s);
        assert_eq!(s.len(), 3);
        assert!(parse_state(":x2:", ctx).is_err());
        assert!(parse_state(":x1", ctx).is_err());
    }
}
