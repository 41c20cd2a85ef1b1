//! Text form of quasi-periodic continued fractions.
//!
//! ```text
//! cf     := '[' list? ( ';' period '@' 'k' '=' integer '..' )? ']'
//! list   := integer (',' integer)*
//! period := expr (',' expr)*
//! expr   := prod (('+'|'-') prod)*
//! prod   := pow (('*'|'/') pow)*
//! pow    := atom ('^' atom)?
//! atom   := integer | 'k' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Integer literals may carry a leading `-`.
//!
//! ```
//! let e = lftcf::cf::dsl::parse_cf("[2; 1, 2*k, 1 @ k=1..]").unwrap();
//! assert_eq!(lftcf::cf::dsl::format_cf(&e), "[2; 1, 2*k, 1 @ k=1..]");
//! ```

use num_bigint::BigInt;

use super::expr::Expr;
use super::qp::QuasiPeriodicCF;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    K,
    Sym(&'static str),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::K => "'k'".into(),
            Tok::Sym(s) => format!("'{s}'"),
        }
    }
}

const SYMBOLS: [&str; 13] = ["..", "[", "]", ";", ",", "@", "=", "+", "-", "*", "/", "^", "("];

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = text[s..i].parse().expect("digits parse");
            out.push((s, Tok::Int(v)));
        } else if c == b'k' {
            out.push((i, Tok::K));
            i += 1;
        } else if c == b')' {
            out.push((i, Tok::Sym(")")));
            i += 1;
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[i..].starts_with(**s)) {
            out.push((i, Tok::Sym(sym)));
            i += sym.len();
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(Error::Parse {
                position: i,
                expected: format!("a token, found {ch:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let found = self.peek().map_or("end of input".to_string(), Tok::describe);
        Err(Error::Parse {
            position: self.at(),
            expected: format!("{expected}, found {found}"),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(&format!("'{sym}'"))
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym)
    }

    /// Optional `-` directly followed by digits.
    fn integer(&mut self) -> Result<BigInt> {
        let neg = self.is_sym("-");
        let save = self.pos;
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos = save + usize::from(neg);
                self.fail("an integer")
            }
        }
    }

    fn cf(&mut self) -> Result<QuasiPeriodicCF> {
        self.expect("[")?;
        let mut prefix = Vec::new();
        if !self.is_sym(";") && !self.is_sym("]") {
            prefix.push(self.integer()?);
            while self.eat(",") {
                prefix.push(self.integer()?);
            }
        }
        let mut period = Vec::new();
        let mut start = BigInt::from(1);
        if self.eat(";") {
            period.push(self.expr()?);
            while self.eat(",") {
                period.push(self.expr()?);
            }
            self.expect("@")?;
            if self.peek() != Some(&Tok::K) {
                return self.fail("'k'");
            }
            self.pos += 1;
            self.expect("=")?;
            start = self.integer()?;
            self.expect("..")?;
        } else if !self.is_sym("]") {
            return self.fail(if prefix.is_empty() {
                "an integer, ';' or ']'"
            } else {
                "',', ';' or ']'"
            });
        }
        self.expect("]")?;
        if self.pos != self.toks.len() {
            return self.fail("end of input");
        }
        Ok(QuasiPeriodicCF { prefix, period, start })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.prod()?;
        loop {
            if self.eat("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.prod()?));
            } else if self.eat("-") {
                acc = Expr::Sub(Box::new(acc), Box::new(self.prod()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut acc = self.pow()?;
        loop {
            if self.eat("*") {
                acc = Expr::Mul(Box::new(acc), Box::new(self.pow()?));
            } else if self.eat("/") {
                acc = Expr::Div(Box::new(acc), Box::new(self.pow()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn pow(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat("^") {
            let exp = self.atom()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::K) => {
                self.pos += 1;
                Ok(Expr::K)
            }
            Some(Tok::Int(_)) => Ok(Expr::Int(self.integer()?)),
            Some(Tok::Sym("-")) if matches!(self.toks.get(self.pos + 1), Some((_, Tok::Int(_)))) => {
                Ok(Expr::Int(self.integer()?))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => self.fail("an integer, 'k' or '('"),
        }
    }
}

/// Parse the DSL form of a quasi-periodic continued fraction.
pub fn parse_cf(text: &str) -> Result<QuasiPeriodicCF> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    p.cf()
}

/// Parse a single coefficient expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

pub fn format_cf(qp: &QuasiPeriodicCF) -> String {
    let prefix: Vec<String> = qp.prefix.iter().map(|v| v.to_string()).collect();
    let mut s = format!("[{}", prefix.join(", "));
    if !qp.period.is_empty() {
        let period: Vec<String> = qp.period.iter().map(|e| e.to_string()).collect();
        s.push_str("; ");
        s.push_str(&period.join(", "));
        s.push_str(&format!(" @ k={}..", qp.start));
    }
    s.push(']');
    s
}
