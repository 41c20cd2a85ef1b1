//! Continued fractions: lazy quotient streams, convergents, tails and the
//! CF1-CF4 parity classes.

pub mod dsl;
pub mod expr;
pub mod qp;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use dsl::{format_cf, parse_cf, parse_expr};
pub use expr::Expr;
pub use qp::{qp_evaluate, QuasiPeriodicCF};

/// Default window for stream classification.
pub const DEFAULT_HORIZON: usize = 64;

/// A single-consumer stream of partial quotients `a0, a1, ...`.
///
/// Quotients after the first are checked to be positive as they pass through.
pub struct QuotientStream {
    inner: Box<dyn Iterator<Item = Result<BigInt>> + Send>,
    index: usize,
    failed: bool,
}

impl QuotientStream {
    pub fn new<I>(it: I) -> Self
    where
        I: Iterator<Item = Result<BigInt>> + Send + 'static,
    {
        QuotientStream {
            inner: Box::new(it),
            index: 0,
            failed: false,
        }
    }

    pub fn from_vec(v: Vec<BigInt>) -> Self {
        QuotientStream::new(v.into_iter().map(Ok))
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        QuotientStream::from_vec(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Index of the next quotient to be yielded.
    pub fn position(&self) -> usize {
        self.index
    }

    /// Exactly `n` quotients, or `StreamExhausted`.
    pub fn take_terms(&mut self, n: usize) -> Result<Vec<BigInt>> {
        let v = self.take_up_to(n)?;
        if v.len() < n {
            return Err(Error::StreamExhausted {
                needed: n,
                available: v.len(),
            });
        }
        Ok(v)
    }

    /// Up to `n` quotients; fewer only if the stream is finite.
    pub fn take_up_to(&mut self, n: usize) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(n);
        for item in self.by_ref().take(n) {
            out.push(item?);
        }
        Ok(out)
    }

    /// The `n`-th tail `[a_{n+1}, a_{n+2}, ...]`.
    pub fn tail(mut self, n: usize) -> Result<QuotientStream> {
        self.take_terms(n + 1)?;
        let next = match self.next() {
            Some(v) => v?,
            None => {
                return Err(Error::StreamExhausted {
                    needed: n + 2,
                    available: n + 1,
                })
            }
        };
        Ok(QuotientStream::new(std::iter::once(Ok(next)).chain(self.inner)))
    }

    /// Buffer the stream so it can be scanned several times.
    pub fn replay(self) -> Replay {
        Replay {
            source: self,
            buffer: Vec::new(),
            done: false,
        }
    }
}

impl Iterator for QuotientStream {
    type Item = Result<BigInt>;

    fn next(&mut self) -> Option<Result<BigInt>> {
        if self.failed {
            return None;
        }
        let item = self.inner.next()?;
        let item = item.and_then(|v| {
            if self.index >= 1 && !v.is_positive() {
                Err(Error::NonPositiveQuotient {
                    index: self.index,
                    value: v.to_string(),
                })
            } else {
                Ok(v)
            }
        });
        self.failed = item.is_err();
        self.index += 1;
        Some(item)
    }
}

/// Buffering wrapper over a [`QuotientStream`] with random access.
pub struct Replay {
    source: QuotientStream,
    buffer: Vec<BigInt>,
    done: bool,
}

impl Replay {
    fn fill(&mut self, n: usize) -> Result<()> {
        while self.buffer.len() < n && !self.done {
            match self.source.next() {
                Some(v) => self.buffer.push(v?),
                None => self.done = true,
            }
        }
        Ok(())
    }

    /// The first `n` quotients.
    pub fn prefix(&mut self, n: usize) -> Result<&[BigInt]> {
        self.fill(n)?;
        if self.buffer.len() < n {
            return Err(Error::StreamExhausted {
                needed: n,
                available: self.buffer.len(),
            });
        }
        Ok(&self.buffer[..n])
    }

    pub fn get(&mut self, i: usize) -> Result<&BigInt> {
        Ok(&self.prefix(i + 1)?[i])
    }

    /// A fresh stream over the first `n` buffered quotients.
    pub fn replay(&mut self, n: usize) -> Result<QuotientStream> {
        Ok(QuotientStream::from_vec(self.prefix(n)?.to_vec()))
    }
}

/// Unreduced convergent `p_n / q_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Streaming convergent recurrence with seeds `p_{-1}=1, p_{-2}=0, q_{-1}=0, q_{-2}=1`.
#[derive(Clone, Debug)]
pub struct ConvergentRecurrence {
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Default for ConvergentRecurrence {
    fn default() -> Self {
        ConvergentRecurrence {
            p: (BigInt::one(), BigInt::zero()),
            q: (BigInt::zero(), BigInt::one()),
        }
    }
}

impl ConvergentRecurrence {
    pub fn push(&mut self, a: &BigInt) -> Convergent {
        let p = a * &self.p.0 + &self.p.1;
        let q = a * &self.q.0 + &self.q.1;
        self.p = (p.clone(), std::mem::take(&mut self.p.0));
        self.q = (q.clone(), std::mem::take(&mut self.q.0));
        Convergent { p, q }
    }
}

/// Convergents `p_0/q_0 ... p_n/q_n`.
pub fn convergents<I>(quotients: I, n: usize) -> Result<Vec<Convergent>>
where
    I: IntoIterator<Item = Result<BigInt>>,
{
    let mut rec = ConvergentRecurrence::default();
    let mut out = Vec::with_capacity(n + 1);
    for a in quotients.into_iter().take(n + 1) {
        out.push(rec.push(&a?));
    }
    if out.len() < n + 1 {
        return Err(Error::StreamExhausted {
            needed: n + 1,
            available: out.len(),
        });
    }
    Ok(out)
}

/// All convergents of a finite list.
pub fn convergents_of(quotients: &[BigInt]) -> Vec<Convergent> {
    let mut rec = ConvergentRecurrence::default();
    quotients.iter().map(|a| rec.push(a)).collect()
}

/// Value of a finite continued fraction.
pub fn value_of(quotients: &[BigInt]) -> Result<BigRational> {
    let last = convergents_of(quotients).pop().ok_or(Error::StreamExhausted {
        needed: 1,
        available: 0,
    })?;
    if last.q.is_zero() {
        return Err(Error::Pole);
    }
    Ok(last.value())
}

/// Canonical expansion of a rational by the Euclidean algorithm.
pub fn cf_of_rational(x: &BigRational) -> Vec<BigInt> {
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        out.push(q);
        num = std::mem::replace(&mut den, r);
    }
    out
}

/// The four parity classes of continued fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CfClass {
    /// All quotients even.
    CF1,
    /// All quotients odd.
    CF2,
    /// Odd at even indices, even at odd indices.
    CF3,
    /// Even at even indices, odd at odd indices.
    CF4,
    Unknown,
}

impl fmt::Display for CfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl CfClass {
    /// Whether a quotient of the given parity may sit at the given index.
    pub fn admits(self, index: usize, value_odd: bool) -> bool {
        let even_index = index.is_multiple_of(2);
        match self {
            CfClass::CF1 => !value_odd,
            CfClass::CF2 => value_odd,
            CfClass::CF3 => value_odd == even_index,
            CfClass::CF4 => value_odd != even_index,
            CfClass::Unknown => true,
        }
    }

    const DEFINITE: [CfClass; 4] = [CfClass::CF1, CfClass::CF2, CfClass::CF3, CfClass::CF4];

    fn from_parities(parities: impl Iterator<Item = (usize, bool)> + Clone) -> CfClass {
        CfClass::DEFINITE
            .into_iter()
            .find(|c| parities.clone().all(|(i, odd)| c.admits(i, odd)))
            .unwrap_or(CfClass::Unknown)
    }
}

fn classify_window(terms: &[BigInt]) -> CfClass {
    if terms.is_empty() || terms.iter().any(|t| !t.is_positive()) {
        return CfClass::Unknown;
    }
    CfClass::from_parities(terms.iter().enumerate().map(|(i, t)| (i, t.is_odd())))
}

/// Classify the first `horizon` quotients. A stream shorter than the horizon,
/// or with `a0 < 1`, is `Unknown`.
pub fn classify(stream: QuotientStream, horizon: usize) -> CfClass {
    let mut stream = stream;
    match stream.take_terms(horizon) {
        Ok(terms) => classify_window(&terms),
        Err(_) => CfClass::Unknown,
    }
}

/// How a classification was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassMethod {
    Symbolic,
    Window { horizon: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: CfClass,
    pub method: ClassMethod,
}

/// Classify a quasi-periodic CF, deciding parities symbolically when every
/// period entry's parity follows from the expression, else over a window.
pub fn classify_qp(qp: &QuasiPeriodicCF, horizon: usize) -> Classification {
    if let Some(class) = classify_symbolic(qp, horizon) {
        return Classification {
            class,
            method: ClassMethod::Symbolic,
        };
    }
    Classification {
        class: classify(qp.stream(), horizon),
        method: ClassMethod::Window { horizon },
    }
}

fn classify_symbolic(qp: &QuasiPeriodicCF, horizon: usize) -> Option<CfClass> {
    if qp.is_finite() {
        return None;
    }
    // positivity is not decided symbolically; the window still has to evaluate cleanly
    let mut window = qp.stream();
    if window.take_terms(horizon).is_err() || !qp.quotient(0).ok()?.is_positive() {
        return None;
    }
    let r = qp.prefix.len();
    let s = qp.period.len();
    let mut facts: Vec<(usize, bool)> = qp.prefix.iter().enumerate().map(|(i, a)| (i, a.is_odd())).collect();
    for (j, e) in qp.period.iter().enumerate() {
        for k_odd in [false, true] {
            let odd = e.parity(k_odd, &qp.start)?;
            // index = r + s (k - start) + j; only its parity matters
            let k_minus_start_odd = k_odd ^ qp.start.is_odd();
            let idx_parity = (r + j + if s % 2 == 1 && k_minus_start_odd { 1 } else { 0 }) % 2;
            facts.push((idx_parity, odd));
        }
    }
    Some(CfClass::from_parities(facts.into_iter()))
}
