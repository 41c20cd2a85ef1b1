use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::expr::Expr;
use super::QuotientStream;
use crate::error::{Error, Result};

/// A finite prefix followed by a cyclic list of expressions in `k`,
/// evaluated at `k = start, start + 1, ...`. An empty period is a finite CF.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPeriodicCF {
    pub prefix: Vec<BigInt>,
    pub period: Vec<Expr>,
    pub start: BigInt,
}

impl QuasiPeriodicCF {
    pub fn new(prefix: Vec<BigInt>, period: Vec<Expr>, start: BigInt) -> Self {
        QuasiPeriodicCF { prefix, period, start }
    }

    pub fn finite(prefix: Vec<BigInt>) -> Self {
        QuasiPeriodicCF {
            prefix,
            period: Vec::new(),
            start: BigInt::one(),
        }
    }

    /// Purely periodic with constant entries, e.g. `[2, 2, 2, ...]`.
    pub fn constant_period(values: &[i64]) -> Self {
        QuasiPeriodicCF {
            prefix: Vec::new(),
            period: values.iter().map(|&v| Expr::int(v)).collect(),
            start: BigInt::one(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// The `k` value and period slot feeding stream index `i`, if `i` is past the prefix.
    pub fn slot(&self, i: usize) -> Option<(BigInt, usize)> {
        let r = self.prefix.len();
        if i < r || self.period.is_empty() {
            return None;
        }
        let s = self.period.len();
        Some((&self.start + BigInt::from((i - r) / s), (i - r) % s))
    }

    /// Partial quotient at index `i` (checked for positivity when `i >= 1`).
    pub fn quotient(&self, i: usize) -> Result<BigInt> {
        let v = if i < self.prefix.len() {
            self.prefix[i].clone()
        } else if let Some((k, j)) = self.slot(i) {
            self.period[j].eval(&k)?
        } else {
            return Err(Error::StreamExhausted {
                needed: i + 1,
                available: self.prefix.len(),
            });
        };
        if i >= 1 && !v.is_positive() {
            return Err(Error::NonPositiveQuotient {
                index: i,
                value: v.to_string(),
            });
        }
        Ok(v)
    }

    /// Quotient at a signed index, rejecting indices before the stream start.
    pub fn quotient_at(&self, i: i64) -> Result<BigInt> {
        let u = usize::try_from(i).map_err(|_| Error::IndexOutOfRange(i))?;
        self.quotient(u)
    }

    pub fn terms(&self, count: usize) -> Result<Vec<BigInt>> {
        qp_evaluate(self, count).take_terms(count)
    }

    /// The whole (possibly infinite) stream.
    pub fn stream(&self) -> QuotientStream {
        let qp = Arc::new(self.clone());
        let finite_len = self.is_finite().then_some(self.prefix.len());
        let it = (0usize..)
            .take_while(move |&i| finite_len.is_none_or(|n| i < n))
            .map(move |i| qp.quotient(i));
        QuotientStream::new(it)
    }

    /// Whether both describe the same quotients on the first `window` terms.
    pub fn agrees_with(&self, other: &QuasiPeriodicCF, window: usize) -> Result<bool> {
        let a = self.stream().take_up_to(window)?;
        let b = other.stream().take_up_to(window)?;
        Ok(a == b)
    }

    /// Same `k` numbering, period length and prefix, and period entries
    /// agreeing at every `k` in the first `window` iterations.
    pub fn structurally_matches(&self, other: &QuasiPeriodicCF, window: usize) -> Result<bool> {
        if self.prefix != other.prefix || self.period.len() != other.period.len() || self.start != other.start {
            return Ok(false);
        }
        for step in 0..window {
            let k = &self.start + BigInt::from(step);
            for (x, y) in self.period.iter().zip(&other.period) {
                if x.eval(&k)? != y.eval(&k)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Period entries with constants folded.
    pub fn simplified(&self) -> QuasiPeriodicCF {
        QuasiPeriodicCF {
            prefix: self.prefix.clone(),
            period: self.period.iter().map(Expr::simplify).collect(),
            start: self.start.clone(),
        }
    }

    pub fn start_i64(&self) -> Option<i64> {
        self.start.to_i64()
    }
}

impl fmt::Display for QuasiPeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::dsl::format_cf(self))
    }
}

/// Emit the first `count` quotients of `qp`: prefix, then the period evaluated cyclically.
pub fn qp_evaluate(qp: &QuasiPeriodicCF, count: usize) -> QuotientStream {
    let it = qp.stream().take(count);
    QuotientStream::new(it)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::dsl::parse_cf;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn named_expansions() {
        let e = parse_cf("[2; 1, 2*k, 1 @ k=1..]").unwrap();
        assert_eq!(e.terms(7).unwrap(), ints(&[2, 1, 2, 1, 1, 4, 1]));
        let r = parse_cf("[0; 4*k+2 @ k=0..]").unwrap();
        assert_eq!(r.terms(4).unwrap(), ints(&[0, 2, 6, 10]));
        let t = parse_cf("[1; 2*k-1, 1 @ k=1..]").unwrap();
        assert_eq!(t.terms(5).unwrap(), ints(&[1, 1, 1, 3, 1]));
        let tas = parse_cf("[; 7*3^k @ k=1..]").unwrap();
        assert_eq!(tas.terms(3).unwrap(), ints(&[21, 63, 189]));
    }

    #[test]
    fn evaluation_errors() {
        let bad = parse_cf("[1; k-3 @ k=1..]").unwrap();
        assert!(matches!(bad.terms(3), Err(Error::NonPositiveQuotient { index: 1, .. })));
        let frac = parse_cf("[1; k/2 @ k=2..]").unwrap();
        assert!(matches!(frac.terms(3), Err(Error::NonIntegerCoefficient { .. })));
        let fin = parse_cf("[1, 2, 3]").unwrap();
        assert!(matches!(
            fin.terms(4),
            Err(Error::StreamExhausted {
                needed: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn random_access_matches_stream() {
        let qp = parse_cf("[3, 1; 2*k+1, k^2, 5 @ k=2..]").unwrap();
        let terms = qp.terms(40).unwrap();
        for (i, t) in terms.iter().enumerate() {
            assert_eq!(&qp.quotient(i).unwrap(), t);
        }
        assert!(qp.quotient_at(-1).is_err());
    }
}
