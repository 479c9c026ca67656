//! Text syntax for polynomials, forms and coordinate lists.
//!
//! ```text
//! sum    := prod (('+' | '-') prod)*
//! prod   := unary (('*' | '/\' | '/' | <juxtaposition>) unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'p' | generator | variable | 'd' variable | '(' sum ')'
//! ```
//!
//! Exponents are integer expressions in literals, `p`, `+ - *` and parentheses.
//! Division is only by invertible constants.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::Ring;
use crate::forms::DiffForm;
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Wedge,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tl, col: tc });
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Int(s.parse().unwrap()));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '/' if chars.get(i + 1) == Some(&'\\') => {
                i += 1;
                col += 1;
                Tok::Wedge
            }
            '/' => Tok::Slash,
            _ => return Err(Error::Parse { line, col, msg: format!("unexpected character `{c}`") }),
        };
        push(&mut out, tok);
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

/// Parsing context: the coefficient ring and the ordered variable names.
#[derive(Clone, Debug)]
pub struct Syntax<R: Ring> {
    pub ring: R,
    pub names: Vec<String>,
}

struct Parser<'a, R: Ring> {
    syn: &'a Syntax<R>,
    toks: Vec<Token>,
    pos: usize,
}

impl<R: Ring> Syntax<R> {
    pub fn new(ring: &R, names: &[String]) -> Self {
        Syntax { ring: ring.clone(), names: names.to_vec() }
    }

    /// Parses a form of any degree; `(line, col)` locate the text in its source.
    pub fn form_at(&self, text: &str, line: usize, col: usize) -> Result<DiffForm<R>> {
        let mut p = Parser { syn: self, toks: tokenize(text, line, col)?, pos: 0 };
        let v = p.sum()?;
        p.expect_end()?;
        Ok(v)
    }
    pub fn form(&self, text: &str) -> Result<DiffForm<R>> {
        self.form_at(text, 1, 1)
    }
    pub fn poly_at(&self, text: &str, line: usize, col: usize) -> Result<MultiPoly<R>> {
        let w = self.form_at(text, line, col)?;
        if w.degree() != 0 {
            return Err(Error::Parse { line, col, msg: format!("expected a function, found a {}-form", w.degree()) });
        }
        Ok(w.scalar())
    }
    pub fn poly(&self, text: &str) -> Result<MultiPoly<R>> {
        self.poly_at(text, 1, 1)
    }
    /// `[f1, f2, ...]`.
    pub fn list_at(&self, text: &str, line: usize, col: usize) -> Result<Vec<MultiPoly<R>>> {
        let mut p = Parser { syn: self, toks: tokenize(text, line, col)?, pos: 0 };
        p.eat(Tok::LBracket)?;
        let mut out = Vec::new();
        if p.peek().tok != Tok::RBracket {
            loop {
                let at = p.peek().clone();
                let w = p.sum()?;
                if w.degree() != 0 {
                    return Err(p.err_at(&at, "list entries must be functions"));
                }
                out.push(w.scalar());
                if p.peek().tok == Tok::Comma {
                    p.pos += 1;
                } else {
                    break;
                }
            }
        }
        p.eat(Tok::RBracket)?;
        p.expect_end()?;
        Ok(out)
    }
    pub fn list(&self, text: &str) -> Result<Vec<MultiPoly<R>>> {
        self.list_at(text, 1, 1)
    }
}

impl<'a, R: Ring> Parser<'a, R> {
    fn ring(&self) -> &R {
        &self.syn.ring
    }
    fn n(&self) -> usize {
        self.syn.names.len()
    }
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }
    fn err_at(&self, t: &Token, msg: impl Into<String>) -> Error {
        Error::Parse { line: t.line, col: t.col, msg: msg.into() }
    }
    fn eat(&mut self, want: Tok) -> Result<()> {
        let t = self.peek().clone();
        if t.tok != want {
            return Err(self.err_at(&t, format!("expected {want:?}, found {:?}", t.tok)));
        }
        self.pos += 1;
        Ok(())
    }
    fn expect_end(&self) -> Result<()> {
        let t = self.peek();
        if t.tok != Tok::End {
            return Err(self.err_at(t, format!("unexpected {:?}", t.tok)));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<DiffForm<R>> {
        let mut acc = self.prod()?;
        loop {
            let t = self.peek().clone();
            let neg = match t.tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.prod()?;
            if rhs.degree() != acc.degree() && !rhs.is_zero() && !acc.is_zero() {
                return Err(self.err_at(&t, format!("cannot add a {}-form and a {}-form", acc.degree(), rhs.degree())));
            }
            let rhs = if neg { rhs.neg() } else { rhs };
            acc = if acc.is_zero() && acc.degree() != rhs.degree() {
                rhs
            } else if rhs.is_zero() && acc.degree() != rhs.degree() {
                acc
            } else {
                acc.add(&rhs)
            };
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn prod(&mut self) -> Result<DiffForm<R>> {
        let mut acc = self.unary()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.times(&t, &acc, &rhs)?;
                }
                Tok::Wedge => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.try_wedge(&rhs).map_err(|e| self.err_at(&t, e.to_string()))?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.divide(&t, &acc, &rhs)?;
                }
                _ if self.starts_atom() => {
                    let rhs = self.unary()?;
                    acc = self.times(&t, &acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn times(&self, at: &Token, a: &DiffForm<R>, b: &DiffForm<R>) -> Result<DiffForm<R>> {
        if a.degree() == 0 {
            Ok(b.scale(&a.scalar()))
        } else if b.degree() == 0 {
            Ok(a.scale(&b.scalar()))
        } else {
            Err(self.err_at(at, "product of two forms; use /\\ for the wedge product"))
        }
    }

    fn divide(&self, at: &Token, a: &DiffForm<R>, b: &DiffForm<R>) -> Result<DiffForm<R>> {
        let r = self.ring();
        let s = b.scalar();
        if b.degree() != 0 || !s.is_constant() || s.is_zero() {
            return Err(self.err_at(at, "division only by nonzero constants"));
        }
        let c = s.constant_term();
        let failed = std::cell::Cell::new(false);
        let out = a.map_coeffs(|f| {
            let mut g = MultiPoly::zero(r, f.nvars());
            for (m, x) in f.terms() {
                match r.exact_div(x, &c) {
                    Some(q) => g = g.add(&MultiPoly::monomial(r, m.clone(), q)),
                    None => failed.set(true),
                }
            }
            g
        });
        if failed.get() {
            return Err(self.err_at(at, format!("{} is not invertible here", r.format_elem(&c))));
        }
        Ok(out)
    }

    fn unary(&mut self) -> Result<DiffForm<R>> {
        if self.peek().tok == Tok::Minus {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffForm<R>> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let t = self.peek().clone();
        self.pos += 1;
        let e = self.exponent_atom()?;
        if base.degree() != 0 {
            return Err(self.err_at(&t, "powers of forms are not defined"));
        }
        let e = e.to_u64().ok_or_else(|| self.err_at(&t, format!("exponent {e} must be a nonnegative integer")))?;
        Ok(DiffForm::function(base.scalar().pow(e)))
    }

    fn p_value(&self, at: &Token) -> Result<u64> {
        match self.ring().characteristic() {
            0 => Err(self.err_at(at, "token `p` in characteristic zero")),
            p => Ok(p),
        }
    }

    fn exponent_atom(&mut self) -> Result<BigInt> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(v.clone())
            }
            Tok::Ident(s) if s == "p" => {
                self.pos += 1;
                Ok(BigInt::from(self.p_value(&t)?))
            }
            Tok::LParen => {
                self.pos += 1;
                let v = self.int_sum()?;
                self.eat(Tok::RParen)?;
                Ok(v)
            }
            _ => Err(self.err_at(&t, "expected an exponent")),
        }
    }

    fn int_sum(&mut self) -> Result<BigInt> {
        let mut acc = self.int_prod()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc += self.int_prod()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc -= self.int_prod()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn int_prod(&mut self) -> Result<BigInt> {
        let mut acc = self.int_unary()?;
        while self.peek().tok == Tok::Star {
            self.pos += 1;
            acc *= self.int_unary()?;
        }
        Ok(acc)
    }

    fn int_unary(&mut self) -> Result<BigInt> {
        if self.peek().tok == Tok::Minus {
            self.pos += 1;
            return Ok(-self.int_unary()?);
        }
        self.exponent_atom()
    }

    fn atom(&mut self) -> Result<DiffForm<R>> {
        let t = self.peek().clone();
        let r = self.ring().clone();
        let n = self.n();
        match &t.tok {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(DiffForm::function(MultiPoly::constant(&r, n, r.from_bigint(v))))
            }
            Tok::LParen => {
                self.pos += 1;
                let v = self.sum()?;
                self.eat(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(s) => {
                self.pos += 1;
                if let Some(i) = self.syn.names.iter().position(|v| v == s) {
                    return Ok(DiffForm::function(MultiPoly::var(&r, n, i)));
                }
                if let Some((g, val)) = r.generator() {
                    if g == s {
                        return Ok(DiffForm::function(MultiPoly::constant(&r, n, val)));
                    }
                }
                if s == "p" {
                    let p = self.p_value(&t)?;
                    return Ok(DiffForm::function(MultiPoly::from_int(&r, n, p as i64)));
                }
                if let Some(rest) = s.strip_prefix('d') {
                    if let Some(i) = self.syn.names.iter().position(|v| v == rest) {
                        return Ok(DiffForm::dx(&r, n, i));
                    }
                    if !rest.is_empty() {
                        return Err(Error::UnknownVariable { name: rest.to_string(), line: t.line, col: t.col + 1 });
                    }
                }
                Err(Error::UnknownVariable { name: s.clone(), line: t.line, col: t.col })
            }
            other => Err(self.err_at(&t, format!("unexpected {other:?}"))),
        }
    }
}
