//! Digit-by-digit application of an integer LFT to a continued fraction.
//!
//! The state `[[a, b], [c, d]]` stands for `x' -> (a x' + b) / (c x' + d)`
//! where `x' >= 1` is the unread tail of the input. A digit `q` is emitted
//! once `a/c` and `(a+b)/(c+d)` have the same floor and no pole lies in
//! between; otherwise the next input quotient is absorbed.
//!
//! ```
//! use lftcf::{gosper, cf::QuotientStream, Transform};
//!
//! // x -> x + 1 on [1, 2, 3, 4]
//! let out = gosper::apply_lft_finite(&Transform::from_i64(1, 1, 0, 1).unwrap(), &[1, 2, 3, 4].map(Into::into)).unwrap();
//! assert_eq!(out, [2, 2, 3, 4].map(Into::into));
//! ```

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::cf::{cf_of_rational, QuotientStream};
use crate::error::{Error, Result};
use crate::exact::Matrix2x2;
use crate::Transform;

/// Absorptions allowed between two emitted digits.
pub const STALL_BOUND: usize = 1_000_000;

/// Running state of one transformation.
pub struct GosperState {
    mat: Matrix2x2<BigInt>,
    input: QuotientStream,
    emitted: usize,
    absorbed_any: bool,
    since_emit: usize,
    stall_bound: usize,
    pending: VecDeque<BigInt>,
    finished: bool,
}

impl GosperState {
    pub fn new(sigma: &Transform, input: QuotientStream) -> Self {
        GosperState {
            mat: sigma.matrix().clone(),
            input,
            emitted: 0,
            absorbed_any: false,
            since_emit: 0,
            stall_bound: STALL_BOUND,
            pending: VecDeque::new(),
            finished: false,
        }
    }

    pub fn with_stall_bound(mut self, bound: usize) -> Self {
        self.stall_bound = bound;
        self
    }

    pub fn matrix(&self) -> &Matrix2x2<BigInt> {
        &self.mat
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    fn digit(&self) -> Option<BigInt> {
        let Matrix2x2 { a, b, c, d } = &self.mat;
        let c2 = c + d;
        if c.is_zero() || c2.is_zero() || c.is_positive() != c2.is_positive() {
            return None;
        }
        let q = a.div_floor(c);
        (q == (a + b).div_floor(&c2)).then_some(q)
    }

    fn emit(&mut self, q: BigInt) -> BigInt {
        let Matrix2x2 { a, b, c, d } = &self.mat;
        self.mat = Matrix2x2::new(c.clone(), d.clone(), a - &q * c, b - &q * d);
        self.emitted += 1;
        self.since_emit = 0;
        q
    }

    fn absorb(&mut self, q: &BigInt) {
        let Matrix2x2 { a, b, c, d } = &self.mat;
        self.mat = Matrix2x2::new(a * q + b, a.clone(), c * q + d, c.clone());
        self.absorbed_any = true;
        self.since_emit += 1;
    }

    /// Input ended: the remaining value is `a / c` exactly.
    fn finish(&mut self) -> Option<Result<BigInt>> {
        self.finished = true;
        let Matrix2x2 { a, c, .. } = &self.mat;
        if c.is_zero() {
            return (self.emitted == 0).then_some(Err(Error::Pole));
        }
        let rest = num_rational::BigRational::new(a.clone(), c.clone());
        self.pending.extend(cf_of_rational(&rest));
        self.pending.pop_front().map(|q| {
            self.emitted += 1;
            Ok(q)
        })
    }

    fn step(&mut self) -> Option<Result<BigInt>> {
        if let Some(q) = self.pending.pop_front() {
            self.emitted += 1;
            return Some(Ok(q));
        }
        if self.finished {
            return None;
        }
        loop {
            if self.absorbed_any {
                if let Some(q) = self.digit() {
                    return Some(Ok(self.emit(q)));
                }
            }
            if self.since_emit >= self.stall_bound {
                self.finished = true;
                return Some(Err(Error::Stalled {
                    absorptions: self.since_emit,
                }));
            }
            match self.input.next() {
                Some(Ok(q)) => self.absorb(&q),
                Some(Err(e)) => {
                    self.finished = true;
                    return Some(Err(e));
                }
                None => return self.finish(),
            }
        }
    }
}

impl Iterator for GosperState {
    type Item = Result<BigInt>;

    fn next(&mut self) -> Option<Result<BigInt>> {
        self.step()
    }
}

/// Lazily transformed stream, truncated to `max_terms` quotients.
pub fn apply_lft_stream(sigma: &Transform, cf: QuotientStream, max_terms: usize) -> QuotientStream {
    QuotientStream::new(GosperState::new(sigma, cf).take(max_terms))
}

/// Unbounded lazily transformed stream.
pub fn transform(sigma: &Transform, cf: QuotientStream) -> QuotientStream {
    QuotientStream::new(GosperState::new(sigma, cf))
}

/// Transform a finite continued fraction; the result is canonical.
pub fn apply_lft_finite(sigma: &Transform, cf: &[BigInt]) -> Result<Vec<BigInt>> {
    let out: Result<Vec<BigInt>> = GosperState::new(sigma, QuotientStream::from_vec(cf.to_vec())).collect();
    Ok(canonicalize(&out?))
}

/// Fold interior zeros (`[.., a, 0, b, ..] -> [.., a+b, ..]`) and a trailing 1.
pub fn canonicalize(cf: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(cf.len());
    let mut i = 0;
    while i < cf.len() {
        let v = &cf[i];
        if i >= 1 && v.is_zero() && !out.is_empty() && i + 1 < cf.len() {
            *out.last_mut().unwrap() += &cf[i + 1];
            i += 2;
            continue;
        }
        out.push(v.clone());
        i += 1;
    }
    if out.len() >= 2 && out.last().is_some_and(One::is_one) {
        out.pop();
        *out.last_mut().unwrap() += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{parse_cf, value_of};
    use crate::exact::lft_apply;
    use num_rational::BigRational;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn run(sigma: (i64, i64, i64, i64), cf: &str, n: usize) -> Vec<BigInt> {
        let t = Transform::from_i64(sigma.0, sigma.1, sigma.2, sigma.3).unwrap();
        apply_lft_stream(&t, parse_cf(cf).unwrap().stream(), n)
            .take_terms(n)
            .unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            run((1, 0, 0, 1), "[2; 1, 2*k, 1 @ k=1..]", 12),
            parse_cf("[2; 1, 2*k, 1 @ k=1..]").unwrap().terms(12).unwrap()
        );
        assert_eq!(run((1, 1, 0, 1), "[; k @ k=1..]", 6), ints(&[2, 2, 3, 4, 5, 6]));
        assert_eq!(run((2, 0, 0, 1), "[1; 2 @ k=1..]", 7), ints(&[2, 1, 4, 1, 4, 1, 4]));
        assert_eq!(run((1, 1, 1, -1), "[; 2 @ k=1..]", 30), vec![BigInt::from(2); 30]);
        assert_eq!(run((1, 2, 1, 0), "[; 2 @ k=1..]", 7), ints(&[1, 1, 4, 1, 4, 1, 4]));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize(&ints(&[3, 1])), ints(&[4]));
        assert_eq!(canonicalize(&ints(&[2, 1, 2, 1])), ints(&[2, 1, 3]));
        assert_eq!(canonicalize(&ints(&[5])), ints(&[5]));
        assert_eq!(canonicalize(&ints(&[1])), ints(&[1]));
        assert_eq!(canonicalize(&ints(&[0, 2, 0, 3, 4])), ints(&[0, 5, 4]));
    }

    #[test]
    fn finite_inputs() {
        let x = ints(&[1, 2, 3, 4]);
        let xv = value_of(&x).unwrap();
        let m = Transform::from_i64(1, 1, 1, -1).unwrap();
        let out = apply_lft_finite(&m, &x).unwrap();
        assert_eq!(value_of(&out).unwrap(), lft_apply(&m, &xv).unwrap());
        assert!(*out.last().unwrap() >= BigInt::from(2) || out.len() == 1);
        // M has a pole at 1
        assert_eq!(apply_lft_finite(&m, &ints(&[1])), Err(Error::Pole));
        // an integer image
        let two = Transform::from_i64(2, 0, 0, 1).unwrap();
        assert_eq!(apply_lft_finite(&two, &ints(&[1, 2])).unwrap(), ints(&[3]));
        let neg = Transform::from_i64(-1, 0, 0, 1).unwrap();
        let v = apply_lft_finite(&neg, &ints(&[2, 3])).unwrap();
        assert_eq!(value_of(&v).unwrap(), BigRational::new((-7).into(), 3.into()));
    }

    #[test]
    fn stall_guard() {
        // a zero bound trips before the first absorption
        let t = Transform::from_i64(1, 0, 0, 1).unwrap();
        let mut g = GosperState::new(&t, parse_cf("[; 1 @ k=1..]").unwrap().stream()).with_stall_bound(0);
        assert!(matches!(g.next(), Some(Err(Error::Stalled { .. }))));
    }
}
