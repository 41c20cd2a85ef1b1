//! Coefficient expressions in the variable `k`.

use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Expression over `k` built from integer literals, `+ - * ^` and exact division.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigInt),
    K,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Exact division; evaluation fails on a nonzero remainder.
    Div(Box<Expr>, Box<Expr>),
    /// Power with a nonnegative exponent.
    Pow(Box<Expr>, Box<Expr>),
}

/// Result of the conservative monotonicity analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mono {
    nondecreasing: bool,
    nonnegative: bool,
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(BigInt::from(v))
    }

    pub fn k() -> Expr {
        Expr::K
    }

    pub fn pow(self, exp: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(exp))
    }

    /// Evaluate at `k`.
    pub fn eval(&self, k: &BigInt) -> Result<BigInt> {
        Ok(match self {
            Expr::Int(v) => v.clone(),
            Expr::K => k.clone(),
            Expr::Add(a, b) => a.eval(k)? + b.eval(k)?,
            Expr::Sub(a, b) => a.eval(k)? - b.eval(k)?,
            Expr::Mul(a, b) => a.eval(k)? * b.eval(k)?,
            Expr::Div(a, b) => {
                let (x, y) = (a.eval(k)?, b.eval(k)?);
                if y.is_zero() {
                    return Err(Error::NonIntegerCoefficient {
                        k: k.to_string(),
                        detail: format!("division by zero in {self}"),
                    });
                }
                let (q, rem) = x.div_rem(&y);
                if !rem.is_zero() {
                    return Err(Error::NonIntegerCoefficient {
                        k: k.to_string(),
                        detail: format!("{x} is not divisible by {y} in {self}"),
                    });
                }
                q
            }
            Expr::Pow(a, b) => {
                let base = a.eval(k)?;
                let e = b.eval(k)?;
                let e = e.to_u32().ok_or_else(|| Error::NonIntegerCoefficient {
                    k: k.to_string(),
                    detail: format!("exponent {e} is negative or too large in {self}"),
                })?;
                num_traits::pow(base, e as usize)
            }
        })
    }

    pub fn eval_i64(&self, k: i64) -> Result<BigInt> {
        self.eval(&BigInt::from(k))
    }

    /// Replace every occurrence of `k` by `repl`.
    pub fn substitute(&self, repl: &Expr) -> Expr {
        let go = |e: &Expr| Box::new(e.substitute(repl));
        match self {
            Expr::Int(_) => self.clone(),
            Expr::K => repl.clone(),
            Expr::Add(a, b) => Expr::Add(go(a), go(b)),
            Expr::Sub(a, b) => Expr::Sub(go(a), go(b)),
            Expr::Mul(a, b) => Expr::Mul(go(a), go(b)),
            Expr::Div(a, b) => Expr::Div(go(a), go(b)),
            Expr::Pow(a, b) => Expr::Pow(go(a), go(b)),
        }
    }

    pub fn constant(&self) -> Option<&BigInt> {
        match self {
            Expr::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Fold constant subtrees and drop neutral elements. Divisions whose
    /// constant operands do not divide evenly are kept as written.
    pub fn simplify(&self) -> Expr {
        use Expr::*;
        match self {
            Int(_) | K => self.clone(),
            Add(a, b) => match (a.simplify(), b.simplify()) {
                (Int(x), Int(y)) => Int(x + y),
                (Int(x), e) | (e, Int(x)) if x.is_zero() => e,
                (x, y) => Add(Box::new(x), Box::new(y)),
            },
            Sub(a, b) => match (a.simplify(), b.simplify()) {
                (Int(x), Int(y)) => Int(x - y),
                (e, Int(y)) if y.is_zero() => e,
                (x, y) => Sub(Box::new(x), Box::new(y)),
            },
            Mul(a, b) => match (a.simplify(), b.simplify()) {
                (Int(x), Int(y)) => Int(x * y),
                (Int(x), _) | (_, Int(x)) if x.is_zero() => Int(BigInt::zero()),
                (Int(x), e) | (e, Int(x)) if x.is_one() => e,
                (x, y) => Mul(Box::new(x), Box::new(y)),
            },
            Div(a, b) => match (a.simplify(), b.simplify()) {
                (Int(x), Int(y)) if !y.is_zero() && (&x % &y).is_zero() => Int(x / y),
                (e, Int(y)) if y.is_one() => e,
                (x, y) => Div(Box::new(x), Box::new(y)),
            },
            Pow(a, b) => match (a.simplify(), b.simplify()) {
                (Int(x), Int(y)) if !y.is_negative() && y.to_u32().is_some_and(|e| e < 4096) => {
                    Int(num_traits::pow(x, y.to_usize().unwrap()))
                }
                (_, Int(y)) if y.is_zero() => Int(BigInt::one()),
                (e, Int(y)) if y.is_one() => e,
                (x, y) => Pow(Box::new(x), Box::new(y)),
            },
        }
    }

    /// Parity of the value for every integer `k >= k_min` of the given parity
    /// (`Some(true)` = odd), when it can be decided from the expression alone.
    pub fn parity(&self, k_odd: bool, k_min: &BigInt) -> Option<bool> {
        match self {
            Expr::Int(v) => Some(v.is_odd()),
            Expr::K => Some(k_odd),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.parity(k_odd, k_min)? ^ b.parity(k_odd, k_min)?),
            Expr::Mul(a, b) => match (a.parity(k_odd, k_min), b.parity(k_odd, k_min)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            // an exact quotient by an odd constant keeps the parity of the dividend
            Expr::Div(a, b) => match b.constant() {
                Some(c) if c.is_odd() => a.parity(k_odd, k_min),
                _ => None,
            },
            Expr::Pow(a, b) => {
                if let Some(e) = b.constant() {
                    if e.is_zero() {
                        return Some(true);
                    }
                }
                let lo = b.lower_bound(k_min)?;
                if lo >= BigInt::one() {
                    a.parity(k_odd, k_min)
                } else {
                    None
                }
            }
        }
    }

    /// A lower bound on the value for `k >= k_min`, when one is evident.
    fn lower_bound(&self, k_min: &BigInt) -> Option<BigInt> {
        let m = self.mono(k_min)?;
        if m.nondecreasing {
            self.eval(k_min).ok()
        } else {
            None
        }
    }

    fn mono(&self, k_min: &BigInt) -> Option<Mono> {
        let konst = |v: &BigInt| Mono {
            nondecreasing: true,
            nonnegative: !v.is_negative(),
        };
        match self {
            Expr::Int(v) => Some(konst(v)),
            Expr::K => Some(Mono {
                nondecreasing: true,
                nonnegative: !k_min.is_negative(),
            }),
            Expr::Add(a, b) => {
                let (x, y) = (a.mono(k_min)?, b.mono(k_min)?);
                Some(Mono {
                    nondecreasing: x.nondecreasing && y.nondecreasing,
                    nonnegative: x.nonnegative && y.nonnegative,
                })
            }
            Expr::Sub(a, b) => {
                b.constant()?;
                let x = a.mono(k_min)?;
                Some(Mono {
                    nondecreasing: x.nondecreasing,
                    nonnegative: false,
                })
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.mono(k_min)?, b.mono(k_min)?);
                match (a.constant(), b.constant()) {
                    (Some(c), Some(d)) => Some(konst(&(c * d))),
                    (Some(c), None) | (None, Some(c)) => {
                        let other = if a.constant().is_some() { y } else { x };
                        if c.is_negative() {
                            None
                        } else {
                            Some(other)
                        }
                    }
                    (None, None) => {
                        let ok = x.nondecreasing && y.nondecreasing && x.nonnegative && y.nonnegative;
                        ok.then_some(Mono {
                            nondecreasing: true,
                            nonnegative: true,
                        })
                    }
                }
            }
            Expr::Div(a, b) => {
                let c = b.constant()?;
                if !c.is_positive() {
                    return None;
                }
                a.mono(k_min)
            }
            Expr::Pow(a, b) => {
                let (x, y) = (a.mono(k_min)?, b.mono(k_min)?);
                match (a.constant(), b.constant()) {
                    (Some(base), _) if base >= &BigInt::one() && y.nondecreasing && y.nonnegative => Some(Mono {
                        nondecreasing: true,
                        nonnegative: true,
                    }),
                    (_, Some(e)) if !e.is_negative() && x.nondecreasing && x.nonnegative => Some(Mono {
                        nondecreasing: true,
                        nonnegative: true,
                    }),
                    _ => None,
                }
            }
        }
    }

    /// Whether the expression is provably nondecreasing in `k` for `k >= k_min`.
    pub fn is_nondecreasing(&self, k_min: &BigInt) -> bool {
        self.mono(k_min).is_some_and(|m| m.nondecreasing)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Int(_) | Expr::K => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        let (a, b, op) = match self {
            Expr::Int(v) => return write!(f, "{v}"),
            Expr::K => return f.write_str("k"),
            Expr::Add(a, b) => (a, b, "+"),
            Expr::Sub(a, b) => (a, b, "-"),
            Expr::Mul(a, b) => (a, b, "*"),
            Expr::Div(a, b) => (a, b, "/"),
            Expr::Pow(a, b) => (a, b, "^"),
        };
        let p = self.precedence();
        if p == 3 {
            side(f, a, a.precedence() < 4)?;
            f.write_str("^")?;
            return side(f, b, b.precedence() < 4);
        }
        side(f, a, a.precedence() < p)?;
        f.write_str(op)?;
        side(f, b, b.precedence() <= p)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl ops::$tr<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::int(rhs)))
            }
        }
        impl ops::$tr<Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(Expr::int(self)), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);
