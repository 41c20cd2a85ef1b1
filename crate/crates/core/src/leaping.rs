//! Nonlinear leaping convergents of `S(x)` for `|det S| = 2`.
//!
//! Let `U_t/V_t` be the convergents of `S(x)` and `B_t = S(u_t/v_t)` the
//! images of the convergents of `x`. When `x` has one of the four parity
//! classes, selected subsequences `U_f(p)` satisfy three-term recurrences with
//! coefficients read off `x`, and `U_f(p)/V_f(p) = B_l(p)` for explicit
//! index functions `f`, `l`.
//!
//! Index conventions: `d_i`/`e_i` are quotients of `x` at absolute index `i`.
//! `k0` is the first block of the tail formula matched in the output, and
//! `p0 + 1` is the output index where that block starts. Both are found by
//! [`crate::tails::exact_alignment`]. When `S` is `M`/`MR`/`MRJ` itself and `x`
//! has no prefix this gives `p0 = k0 - 1` for the first-class tails; in general
//! the two are independent.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cf::{classify_qp, convergents_of, CfClass, Convergent, QuasiPeriodicCF, DEFAULT_HORIZON};
use crate::det2::decompose;
use crate::error::{Error, Result};
use crate::gosper::apply_lft_stream;
use crate::report::VerificationReport;
use crate::tails::{exact_alignment, TailCase, TailLabel};
use crate::Transform;

/// Output terms computed beyond the largest index a check needs.
const SLACK: usize = 16;

/// `sin(m pi / 2)`.
pub fn sin_half_pi(m: i64) -> i64 {
    [0, 1, 0, -1][m.rem_euclid(4) as usize]
}

fn pow2(e: i64) -> BigRational {
    match e {
        0 => BigRational::one(),
        1 => BigRational::from_integer(2.into()),
        -1 => BigRational::new(1.into(), 2.into()),
        _ => unreachable!("exponent is a sine value"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IndexName {
    S,
    G,
    H,
    L1,
    L2,
    L34,
}

impl IndexName {
    pub fn parse(s: &str) -> Option<IndexName> {
        Some(match s {
            "s" => IndexName::S,
            "g" => IndexName::G,
            "h" => IndexName::H,
            "l1" => IndexName::L1,
            "l2" => IndexName::L2,
            "l34" => IndexName::L34,
            _ => return None,
        })
    }
}

/// The index functions for fixed `p0`, `k0` and (for `l2`/`l34`) tail branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexFns {
    pub p0: i64,
    pub k0: i64,
    pub branch: Option<TailLabel>,
}

impl IndexFns {
    pub fn new(p0: i64, k0: i64, branch: Option<TailLabel>) -> Self {
        IndexFns { p0, k0, branch }
    }

    pub fn s(&self, p: i64) -> i64 {
        self.p0 + 3 * p
    }

    pub fn g(&self, p: i64) -> i64 {
        self.p0 + p + 2 * p.div_euclid(3)
    }

    pub fn h(&self, p: i64) -> i64 {
        self.p0 + 2 * p - 1 + sin_half_pi(p + 1)
    }

    pub fn l1(&self, p: i64) -> i64 {
        self.k0 + p - 2
    }

    pub fn l2(&self, p: i64) -> Result<i64> {
        let off = match self.branch {
            Some(TailLabel::T2_1) => -4,
            Some(TailLabel::T2_2) => -3,
            Some(TailLabel::T2_3) => -2,
            other => return Err(Error::BranchRequired(format!("l2 needs a t2.x branch, have {other:?}"))),
        };
        Ok(3 * self.k0 + p + off)
    }

    pub fn l34(&self, p: i64) -> Result<i64> {
        let off = match self.branch {
            Some(TailLabel::T3_1) => -5,
            Some(TailLabel::T3_2) => -3,
            Some(TailLabel::T4_1) => -4,
            Some(TailLabel::T4_3) => -2,
            other => {
                return Err(Error::BranchRequired(format!(
                    "l34 needs one of t3.1, t3.2, t4.1, t4.3, have {other:?}"
                )))
            }
        };
        Ok(4 * self.k0 + p + off)
    }

    /// Any index function by name; defined for `p >= 2`.
    pub fn idx(&self, name: IndexName, p: i64) -> Result<i64> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!("index functions need p >= 2, got {p}")));
        }
        match name {
            IndexName::S => Ok(self.s(p)),
            IndexName::G => Ok(self.g(p)),
            IndexName::H => Ok(self.h(p)),
            IndexName::L1 => Ok(self.l1(p)),
            IndexName::L2 => self.l2(p),
            IndexName::L34 => self.l34(p),
        }
    }
}

/// `v(p) = 2^sin((p + 1 + floor((p+2)/3)) pi/2)`.
pub fn weight_v(p: i64) -> BigRational {
    pow2(sin_half_pi(p + 1 + (p + 2).div_euclid(3)))
}

/// `z(p) = 2^sin((p+2) pi/2)`.
pub fn weight_z(p: i64) -> BigRational {
    pow2(sin_half_pi(p + 2))
}

/// Power of two multiplying `d_l2(p)` in `G(p)`.
pub fn g_factor(p: i64) -> BigRational {
    pow2(sin_half_pi(p + 2 + (p + 1).div_euclid(3)))
}

/// Power of two multiplying `a_l34(p)` in `H(p)`.
pub fn h_factor(p: i64) -> BigRational {
    pow2(sin_half_pi(p + 2 + (p + 2).div_euclid(4) - p.div_euclid(4)))
}

/// `B_t = S(u_t/v_t)` with the unreduced pair `(A u_t + B v_t, C u_t + D v_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BValue {
    pub n: BigInt,
    pub d: BigInt,
    pub value: BigRational,
}

fn b_from_convergent(sigma: &Transform, c: &Convergent) -> Result<BValue> {
    let mx = sigma.matrix();
    let n = &mx.a * &c.p + &mx.b * &c.q;
    let d = &mx.c * &c.p + &mx.d * &c.q;
    if d.is_zero() {
        return Err(Error::Pole);
    }
    let value = BigRational::new(n.clone(), d.clone());
    Ok(BValue { n, d, value })
}

pub fn b_value(sigma: &Transform, x: &QuasiPeriodicCF, t: usize) -> Result<BValue> {
    let terms = x.terms(t + 1)?;
    let conv = convergents_of(&terms);
    b_from_convergent(sigma, &conv[t])
}

/// Everything a leaping check needs: the transformation, its tail branch and
/// the aligned output stream with convergents.
#[derive(Clone, Debug)]
pub struct LeapingContext {
    pub sigma: Transform,
    pub x: QuasiPeriodicCF,
    pub tail_case: TailCase,
    pub k0: i64,
    pub p0: i64,
    /// `+1`/`-1` relating output convergents to the images `S(u_t/v_t)`.
    pub sign: i8,
    observed: Vec<BigInt>,
    out_conv: Vec<Convergent>,
    in_conv: Vec<Convergent>,
}

impl LeapingContext {
    /// Output terms computed by [`LeapingContext::establish`].
    pub const DEFAULT_TERMS: usize = 400;

    pub fn establish(sigma: &Transform, x: &QuasiPeriodicCF) -> Result<LeapingContext> {
        Self::establish_with_terms(sigma, x, Self::DEFAULT_TERMS)
    }

    pub fn establish_with_terms(sigma: &Transform, x: &QuasiPeriodicCF, terms: usize) -> Result<LeapingContext> {
        if sigma.det().abs() != BigInt::from(2) {
            return Err(Error::NotApplicable(format!("|det| must be 2, got {}", sigma.det())));
        }
        if x.is_finite() {
            return Err(Error::NotApplicable(
                "leaping needs an infinite continued fraction".into(),
            ));
        }
        let dec = decompose(sigma.matrix())?;
        let class = classify_qp(x, DEFAULT_HORIZON).class;
        if class == CfClass::Unknown {
            return Err(Error::NotApplicable("input is not of class CF1..CF4".into()));
        }
        let tail_case = TailCase::new(class, dec.case)?;
        let observed = apply_lft_stream(sigma, x.stream(), terms).take_terms(terms)?;
        let al = exact_alignment(sigma, x, &tail_case, &observed, 1, DEFAULT_HORIZON as i64)?
            .ok_or_else(|| Error::Alignment(format!("{tail_case} not located in the first {terms} output terms")))?;
        let out_conv = convergents_of(&observed);
        let in_conv = convergents_of(&x.terms(terms)?);
        Ok(LeapingContext {
            sigma: sigma.clone(),
            x: x.clone(),
            tail_case,
            k0: al.k0,
            p0: al.n as i64 - 1,
            sign: al.sign,
            observed,
            out_conv,
            in_conv,
        })
    }

    pub fn index_fns(&self) -> IndexFns {
        IndexFns::new(self.p0, self.k0, Some(self.tail_case.label))
    }

    pub fn observed(&self) -> &[BigInt] {
        &self.observed
    }

    /// Output convergent `(U_t, V_t)`, including the seeds at `t = -1, -2`.
    pub fn uv(&self, t: i64) -> Result<(BigInt, BigInt)> {
        match t {
            -2 => Ok((BigInt::zero(), BigInt::one())),
            -1 => Ok((BigInt::one(), BigInt::zero())),
            t if t >= 0 && (t as usize) < self.out_conv.len() => {
                let c = &self.out_conv[t as usize];
                Ok((c.p.clone(), c.q.clone()))
            }
            _ => Err(Error::IndexOutOfRange(t)),
        }
    }

    fn uv_rat(&self, t: i64) -> Result<(BigRational, BigRational)> {
        let (u, v) = self.uv(t)?;
        Ok((BigRational::from_integer(u), BigRational::from_integer(v)))
    }

    /// `B_t` for `t >= 0`.
    pub fn b(&self, t: i64) -> Result<BValue> {
        if t < 0 || t as usize >= self.in_conv.len() {
            return Err(Error::IndexOutOfRange(t));
        }
        b_from_convergent(&self.sigma, &self.in_conv[t as usize])
    }

    /// Quotient `x_i` (written `d_i` when odd, `e_i` when even).
    pub fn quotient(&self, i: i64) -> Result<BigInt> {
        if i < 0 {
            return Err(Error::IndexOutOfRange(i));
        }
        self.x.quotient_at(i)
    }

    /// `G(p)` (CF2) or `H(p)` (CF3/CF4).
    pub fn coeff(&self, name: char, p: i64) -> Result<BigRational> {
        let f = self.index_fns();
        let (l, factor) = match name {
            'G' => (f.l2(p)?, g_factor(p)),
            'H' => (f.l34(p)?, h_factor(p)),
            _ => return Err(Error::InvalidArgument(format!("unknown coefficient {name}"))),
        };
        Ok(BigRational::from_integer(self.quotient(l)?) * factor)
    }

    fn check_terms(&self, max_index: i64) -> Result<()> {
        if max_index as usize + SLACK > self.observed.len() {
            return Err(Error::IndexOutOfRange(max_index));
        }
        Ok(())
    }
}

/// Which recurrence a tail carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Recurrence {
    Rec1,
    Rec2,
    Rec3,
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recurrence::Rec1 => "rec1",
            Recurrence::Rec2 => "rec2",
            Recurrence::Rec3 => "rec3",
        })
    }
}

pub fn recurrence_for(label: TailLabel) -> Option<Recurrence> {
    use TailLabel::*;
    match label {
        T1_1 => Some(Recurrence::Rec1),
        T2_1 | T2_2 | T2_3 => Some(Recurrence::Rec2),
        T3_1 | T3_2 | T4_1 | T4_3 => Some(Recurrence::Rec3),
        T1_2 | T1_3 | T3_3 | T4_2 => None,
    }
}

fn pair(u: &BigRational, v: &BigRational) -> String {
    format!("({u}, {v})")
}

/// Check the branch's recurrence for `p = 4 ..= p_max` in exact rational arithmetic.
pub fn verify_recurrence(ctx: &LeapingContext, p_max: i64) -> Result<VerificationReport> {
    let label = ctx.tail_case.label;
    let rec = recurrence_for(label)
        .ok_or_else(|| Error::NotApplicable(format!("tail {label} has no recurrence; see verify_leaping")))?;
    let f = ctx.index_fns();
    let idx = |p: i64| match rec {
        Recurrence::Rec1 => f.s(p),
        Recurrence::Rec2 => f.g(p),
        Recurrence::Rec3 => f.h(p),
    };
    ctx.check_terms(idx(p_max))?;
    let mut rep = VerificationReport::new(format!("{rec} ({label})"), 4, p_max);
    for p in 4..=p_max {
        let (coef, weight) = match rec {
            Recurrence::Rec1 => (BigRational::from_integer(ctx.quotient(f.l1(p))?), BigRational::one()),
            Recurrence::Rec2 => (ctx.coeff('G', p)?, weight_v(p)),
            Recurrence::Rec3 => (ctx.coeff('H', p)?, weight_z(p)),
        };
        let (u0, v0) = ctx.uv_rat(idx(p))?;
        let (u1, v1) = ctx.uv_rat(idx(p - 1))?;
        let (u2, v2) = ctx.uv_rat(idx(p - 2))?;
        let ru = &coef * &u1 + &weight * &u2;
        let rv = &coef * &v1 + &weight * &v2;
        rep.record(p, u0 == ru && v0 == rv, &pair(&u0, &v0), &pair(&ru, &rv));
    }
    Ok(rep)
}

/// The single-step relations the rec1 derivation starts from, for `p = 2 ..= p_max`.
pub fn verify_rec1_base(ctx: &LeapingContext, p_max: i64) -> Result<VerificationReport> {
    if ctx.tail_case.label != TailLabel::T1_1 {
        return Err(Error::NotApplicable("rec1 relations belong to tail t1.1".into()));
    }
    ctx.check_terms(ctx.p0 + 3 * p_max)?;
    let mut rep = VerificationReport::new("rec1 base relations", 2, p_max);
    for p in 2..=p_max {
        let t = ctx.p0 + 3 * p;
        let e = ctx.quotient(ctx.k0 + p - 2)?;
        let half: BigInt = (&e - 2) / 2;
        for side in 0..2 {
            let w = |i: i64| -> Result<BigInt> {
                let (u, v) = ctx.uv(i)?;
                Ok(if side == 0 { u } else { v })
            };
            let rels: [(i64, BigInt, i64, i64); 5] = [
                (t, BigInt::one(), t - 1, t - 2),
                (t - 1, BigInt::one(), t - 2, t - 3),
                (t - 2, half.clone(), t - 3, t - 4),
                (t - 3, BigInt::one(), t - 4, t - 5),
                (t - 4, BigInt::one(), t - 5, t - 6),
            ];
            for (lhs, c, a, b) in rels {
                let l = w(lhs)?;
                let r = c * w(a)? + w(b)?;
                rep.record(p, l == r, &l, &r);
            }
        }
    }
    Ok(rep)
}

/// The intermediate relations of the rec2 derivation and their combination,
/// checked at every `p = 3m` in range.
pub fn verify_rec2_intermediates(ctx: &LeapingContext, p_max: i64) -> Result<VerificationReport> {
    if ctx.tail_case.cf_class != CfClass::CF2 {
        return Err(Error::NotApplicable("rec2 relations belong to CF2 tails".into()));
    }
    let f = ctx.index_fns();
    ctx.check_terms(f.g(p_max) + 2)?;
    let mut rep = VerificationReport::new(format!("rec2 intermediates ({})", ctx.tail_case.label), 3, p_max);
    let mut m = 1;
    while 3 * m < p_max {
        let b = ctx.p0 + 5 * m;
        let d0 = ctx.quotient(f.l2(3 * m)?)?;
        let d1 = ctx.quotient(f.l2(3 * m + 1)?)?;
        let h0: BigInt = (&d0 - 1) / 2;
        let h1: BigInt = (&d1 - 1) / 2;
        for side in 0..2 {
            let w = |i: i64| -> Result<BigInt> {
                let (u, v) = ctx.uv(i)?;
                Ok(if side == 0 { u } else { v })
            };
            let checks = [
                (w(b - 1)?, w(b - 2)? + w(b - 3)?),
                (w(b - 2)?, &h0 * w(b - 3)? + w(b - 4)?),
                (w(b)?, w(b - 1)? + w(b - 2)?),
                (w(b + 1)?, &h1 * w(b)? + w(b - 1)?),
                (w(b)?, &d0 * w(b - 3)? + 2 * w(b - 4)?),
                (2 * w(b - 1)?, w(b)? + w(b - 3)?),
            ];
            for (l, r) in checks {
                rep.record(3 * m, l == r, &l, &r);
            }
        }
        m += 1;
    }
    Ok(rep)
}

/// Output index minus input index for the one-to-one tails (`t1.2`, `t1.3`, `t3.3`, `t4.2`).
pub fn eqconv4_shift(ctx: &LeapingContext) -> i64 {
    ctx.p0 + 1 - ctx.tail_case.label.first_source(ctx.k0)
}

type IndexFn = Box<dyn Fn(i64) -> i64>;
type FallibleIndexFn = Box<dyn Fn(i64) -> Result<i64>>;

/// Leaping equalities of the context's branch.
///
/// For branches with a recurrence: `U_f(p)/V_f(p) = B_l(p)` for `p = 3 ..= p_max`,
/// plus for CF2 the unreduced form (`U = N` or `U = N/2` by `p mod 3`, up to
/// the context sign). For the one-to-one tails: scans for the smallest `p'`
/// with `U_(p+c)/V_(p+c) = B_p` for all `p' <= p <= p_max`, where `c` is
/// [`eqconv4_shift`], and notes where the unshifted `U_p/V_p = B_p` holds.
pub fn verify_leaping(ctx: &LeapingContext, p_max: i64) -> Result<VerificationReport> {
    let label = ctx.tail_case.label;
    let f = ctx.index_fns();
    match recurrence_for(label) {
        Some(rec) => {
            let (fi, li): (IndexFn, FallibleIndexFn) = match rec {
                Recurrence::Rec1 => (Box::new(move |p| f.s(p)), Box::new(move |p| Ok(f.l1(p)))),
                Recurrence::Rec2 => (Box::new(move |p| f.g(p)), Box::new(move |p| f.l2(p))),
                Recurrence::Rec3 => (Box::new(move |p| f.h(p)), Box::new(move |p| f.l34(p))),
            };
            ctx.check_terms(fi(p_max))?;
            let name = ["eqconv1", "eqconv2", "eqconv3"][rec as usize];
            let mut rep = VerificationReport::new(format!("{name} ({label})"), 3, p_max);
            for p in 3..=p_max {
                let (u, v) = ctx.uv(fi(p))?;
                let lhs = BigRational::new(u.clone(), v.clone());
                let b = ctx.b(li(p)?)?;
                rep.check(p, &lhs, &b.value);
                if rec == Recurrence::Rec2 {
                    let sign = BigInt::from(ctx.sign);
                    let (n, d) = (&b.n * &sign, &b.d * &sign);
                    let ok = if p.rem_euclid(3) == 1 {
                        &u * 2 == n && &v * 2 == d
                    } else {
                        u == n && v == d
                    };
                    rep.record(
                        p,
                        ok,
                        &format!("U={u} V={v}"),
                        &format!("N={n} D={d} (p mod 3 = {})", p.rem_euclid(3)),
                    );
                }
            }
            if rec == Recurrence::Rec2 {
                rep.note(format!(
                    "unreduced U/N refinement checked for p = 3..={p_max} with sign {}",
                    ctx.sign
                ));
            }
            Ok(rep)
        }
        None => {
            let c = eqconv4_shift(ctx);
            ctx.check_terms(p_max + c.max(0))?;
            let holds = |shift: i64, p: i64| -> Result<bool> {
                let t = p + shift;
                if t < 0 {
                    return Ok(false);
                }
                let (u, v) = ctx.uv(t)?;
                Ok(BigRational::new(u, v) == ctx.b(p)?.value)
            };
            let threshold = |shift: i64| -> Result<Option<i64>> {
                let mut th = None;
                for p in (0..=p_max).rev() {
                    if !holds(shift, p)? {
                        break;
                    }
                    th = Some(p);
                }
                Ok(th)
            };
            let mut rep = VerificationReport::new(format!("eqconv4 ({label}, shift {c})"), 0, p_max);
            match threshold(c)? {
                Some(th) => {
                    rep.threshold = Some(th);
                    rep.p_range = (th, p_max);
                    rep.passes = (p_max - th + 1) as usize;
                }
                None => {
                    let (u, v) = ctx.uv(p_max + c)?;
                    rep.record(p_max, false, &BigRational::new(u, v), &ctx.b(p_max)?.value);
                }
            }
            match threshold(0)? {
                Some(th) => rep.note(format!("unshifted U_p/V_p = B_p holds for p = {th}..={p_max}")),
                None => rep.note(format!("unshifted U_p/V_p = B_p fails at p = {p_max}")),
            }
            Ok(rep)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::parse_cf;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn index_examples() {
        let f = IndexFns::new(0, 1, None);
        assert_eq!(f.s(2), 6);
        assert_eq!((f.g(3), f.g(4), f.g(5)), (5, 6, 7));
        assert_eq!((f.h(2), f.h(4)), (2, 8));
        assert!(matches!(f.idx(IndexName::L2, 3), Err(Error::BranchRequired(_))));
        assert_eq!(
            (weight_v(3), weight_v(4), weight_z(2)),
            (rat(2, 1), rat(1, 2), rat(1, 1))
        );
    }

    #[test]
    fn residue_tables() {
        for p in 2..=200i64 {
            let f = IndexFns::new(7, 3, None);
            let m = p / 3;
            match p % 3 {
                0 => assert_eq!(f.g(p), 7 + 5 * m),
                1 => assert_eq!(f.g(p), 7 + 5 * m + 1),
                _ => assert_eq!(f.g(p), 7 + 5 * m + 2),
            }
            assert_eq!(weight_v(p), [rat(2, 1), rat(1, 2), rat(1, 1)][(p % 3) as usize]);
            assert_eq!(g_factor(p), [rat(1, 1), rat(1, 2), rat(2, 1)][(p % 3) as usize]);
            assert_eq!(
                weight_z(p),
                [rat(1, 1), rat(1, 2), rat(1, 1), rat(2, 1)][(p % 4) as usize]
            );
            assert_eq!(
                h_factor(p),
                [rat(1, 1), rat(1, 2), rat(2, 1), rat(1, 1)][(p % 4) as usize]
            );
        }
    }

    #[test]
    fn g_coefficients_on_constant_cf2() {
        let x = QuasiPeriodicCF::constant_period(&[3]);
        let m = Transform::from_i64(1, 1, 1, -1).unwrap();
        let ctx = LeapingContext::establish(&m, &x).unwrap();
        assert_eq!(ctx.tail_case.label, TailLabel::T2_1);
        assert_eq!(ctx.coeff('G', 3).unwrap(), rat(3, 1));
        assert_eq!(ctx.coeff('G', 4).unwrap(), rat(3, 2));
        assert_eq!(ctx.coeff('G', 5).unwrap(), rat(6, 1));
    }

    #[test]
    fn b_examples() {
        let two = QuasiPeriodicCF::constant_period(&[2]);
        let m = Transform::from_i64(1, 1, 1, -1).unwrap();
        assert_eq!(b_value(&m, &two, 0).unwrap().value, rat(3, 1));
        let jj = Transform::from_i64(0, 1, 1, 0).unwrap();
        let x = parse_cf("[5; 1 @ k=1..]").unwrap();
        assert_eq!(b_value(&jj, &x, 0).unwrap().value, rat(1, 5));
        assert_eq!(
            b_value(&Transform::from_i64(1, 0, 0, 1).unwrap(), &two, 2)
                .unwrap()
                .value,
            rat(12, 5)
        );
    }

    #[test]
    fn recurrences_on_examples() {
        let m = Transform::from_i64(1, 1, 1, -1).unwrap();
        let h41 = parse_cf("[; 4*(1+k) @ k=0..]").unwrap();
        let ctx = LeapingContext::establish(&m, &h41).unwrap();
        assert_eq!((ctx.k0, ctx.p0), (1, 0));
        assert!(verify_recurrence(&ctx, 20).unwrap().is_pass());
        assert!(verify_rec1_base(&ctx, 20).unwrap().is_pass());
        assert!(verify_leaping(&ctx, 20).unwrap().is_pass());

        let three = QuasiPeriodicCF::constant_period(&[3]);
        let ctx = LeapingContext::establish(&m, &three).unwrap();
        assert!(verify_recurrence(&ctx, 20).unwrap().is_pass());
        assert!(verify_rec2_intermediates(&ctx, 20).unwrap().is_pass());
        assert!(verify_leaping(&ctx, 20).unwrap().is_pass());
    }

    #[test]
    fn eqconv4_needs_shift() {
        let mr = Transform::from_i64(1, 2, 1, 0).unwrap();
        let two = QuasiPeriodicCF::constant_period(&[2]);
        let ctx = LeapingContext::establish(&mr, &two).unwrap();
        assert!(matches!(verify_recurrence(&ctx, 10), Err(Error::NotApplicable(_))));
        let rep = verify_leaping(&ctx, 40).unwrap();
        assert!(rep.is_pass());
        assert_eq!(eqconv4_shift(&ctx), 1);
        assert_eq!(rep.threshold, Some(0));
        assert!(rep.notes[0].contains("fails"));
    }

    #[test]
    fn unimodular_rejected() {
        let id = Transform::from_i64(2, 1, 1, 1).unwrap();
        let x = QuasiPeriodicCF::constant_period(&[2]);
        assert!(matches!(
            LeapingContext::establish(&id, &x),
            Err(Error::NotApplicable(_))
        ));
    }
}
