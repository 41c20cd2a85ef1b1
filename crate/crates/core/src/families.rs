//! Hurwitz `h(a,n) = [a(1+kn)]_{k>=0}` and Tasoev `t1(u,a) = [u a^k]_{k>=1}`,
//! `t2(u,v,a) = [u a^k, v a^k]_{k>=1}` families.
//!
//! The tails here are written out per family, independently of the generic
//! machinery in [`crate::tails`], so the two can be cross-checked.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cf::{convergents_of, parse_expr, CfClass, Expr, QuasiPeriodicCF};
use crate::det2::DecompCase;
use crate::error::{Error, Result};
use crate::gosper::apply_lft_stream;
use crate::report::VerificationReport;
use crate::tails::{first_applicable_k0, TailCase, TailLabel};
use crate::Transform;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Hurwitz { a: i64, n: i64 },
    Tasoev1 { u: i64, a: i64 },
    Tasoev2 { u: i64, v: i64, a: i64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Hurwitz { a, n } => write!(f, "h({a},{n})"),
            Family::Tasoev1 { u, a } => write!(f, "t1({u},{a})"),
            Family::Tasoev2 { u, v, a } => write!(f, "t2({u},{v},{a})"),
        }
    }
}

impl Family {
    fn params(&self) -> Vec<(char, i64)> {
        match *self {
            Family::Hurwitz { a, n } => vec![('a', a), ('n', n)],
            Family::Tasoev1 { u, a } => vec![('u', u), ('a', a)],
            Family::Tasoev2 { u, v, a } => vec![('u', u), ('v', v), ('a', a)],
        }
    }

    fn check_positive(&self) -> Result<()> {
        match self.params().iter().find(|(_, v)| *v < 1) {
            Some((name, v)) => Err(Error::InvalidArgument(format!("{name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }
}

/// Substitute single-letter parameters into a template and parse it.
fn instantiate(template: &str, params: &[(char, i64)]) -> Expr {
    let text: String = template
        .chars()
        .map(|c| match params.iter().find(|(p, _)| *p == c) {
            Some((_, v)) => format!("({v})"),
            None => c.to_string(),
        })
        .collect();
    parse_expr(&text)
        .unwrap_or_else(|e| panic!("bad template {template}: {e}"))
        .simplify()
}

fn from_templates(f: &Family, templates: &[&str], start: i64) -> QuasiPeriodicCF {
    let params = f.params();
    let period = templates.iter().map(|t| instantiate(t, &params)).collect();
    QuasiPeriodicCF::new(Vec::new(), period, BigInt::from(start))
}

pub fn family_stream(f: &Family) -> Result<QuasiPeriodicCF> {
    f.check_positive()?;
    Ok(match f {
        Family::Hurwitz { .. } => from_templates(f, &["a*(1+k*n)"], 0),
        Family::Tasoev1 { .. } => from_templates(f, &["u*a^k"], 1),
        Family::Tasoev2 { .. } => from_templates(f, &["u*a^k", "v*a^k"], 1),
    })
}

/// Parity class from the parameters.
///
/// Only the combinations listed below are covered; anything else (for
/// example `h(a,n)` with `a`, `n` odd and one of them below 5) is NotApplicable.
pub fn family_class(f: &Family) -> Result<CfClass> {
    f.check_positive()?;
    let even = |x: i64| x % 2 == 0;
    let class = match *f {
        Family::Hurwitz { a, .. } if even(a) => Some(CfClass::CF1),
        Family::Hurwitz { n, .. } if even(n) => Some(CfClass::CF2),
        Family::Hurwitz { a, n } if a >= 5 && n >= 5 => Some(CfClass::CF3),
        Family::Hurwitz { .. } => None,
        Family::Tasoev1 { u, a } if even(u) || even(a) => Some(CfClass::CF1),
        Family::Tasoev1 { .. } => Some(CfClass::CF2),
        Family::Tasoev2 { u, v, a } if even(a) || (even(u) && even(v)) => Some(CfClass::CF1),
        Family::Tasoev2 { u, v, .. } if !even(u) && !even(v) => Some(CfClass::CF2),
        Family::Tasoev2 { v, .. } if even(v) => Some(CfClass::CF3),
        Family::Tasoev2 { .. } => Some(CfClass::CF4),
    };
    class.ok_or_else(|| Error::NotApplicable(format!("{f} is outside the listed parity cases")))
}

/// Period templates of each listed tail, in the family's own `k`.
fn tail_templates(f: &Family, label: TailLabel) -> Option<Vec<&'static str>> {
    use TailLabel::*;
    let t: &[&str] = match (f, label) {
        (Family::Hurwitz { .. }, T1_1) => &["(a*(1+n*(k-1))-2)/2", "1", "1"],
        (Family::Hurwitz { .. }, T1_2) => &["a*(1+n*(2*k-2))/2", "2*a*(1+(2*k-1)*n)"],
        (Family::Hurwitz { .. }, T1_3) => &["a*(1+n*(2*k-1))/2", "2*a*(1+2*k*n)"],
        (Family::Hurwitz { .. }, T2_1) => &[
            "(a*(1+3*n*(k-1))-1)/2",
            "2*a*(1+n*(3*k-2))",
            "(a*(1+n*(3*k-1))-1)/2",
            "1",
            "1",
        ],
        (Family::Hurwitz { .. }, T2_2) => &[
            "(a*(1+n*(3*k-2))-1)/2",
            "2*a*(1+n*(3*k-1))",
            "(a*(1+3*k*n)-1)/2",
            "1",
            "1",
        ],
        (Family::Hurwitz { .. }, T2_3) => &[
            "(a*(1+n*(3*k-1))-1)/2",
            "2*a*(1+3*k*n)",
            "(a*(1+n*(3*k+1))-1)/2",
            "1",
            "1",
        ],
        // sixth entry reads an even quotient, so it is (.. - 2)/2
        (Family::Hurwitz { .. }, T3_1) => &[
            "(a*(1+(4*k-4)*n)-1)/2",
            "2*a*(1+(4*k-3)*n)",
            "(a*(1+(4*k-2)*n)-1)/2",
            "1",
            "1",
            "(a*(1+(4*k-1)*n)-2)/2",
            "1",
            "1",
        ],
        (Family::Hurwitz { .. }, T3_2) => &[
            "(a*(1+(4*k-2)*n)-1)/2",
            "2*a*(1+(4*k-1)*n)",
            "(a*(1+4*k*n)-1)/2",
            "1",
            "1",
            "(a*(1+(4*k+1)*n)-2)/2",
            "1",
            "1",
        ],
        (Family::Hurwitz { .. }, T3_3) => &["a*(1+n*(2*k-1))/2", "2*a*(1+2*k*n)"],

        (Family::Tasoev1 { .. }, T1_1) => &["(u*a^k-2)/2", "1", "1"],
        (Family::Tasoev1 { .. }, T1_2) => &["u*a^(2*k-1)/2", "2*u*a^(2*k)"],
        (Family::Tasoev1 { .. }, T1_3) => &["u*a^(2*k)/2", "2*u*a^(2*k+1)"],
        (Family::Tasoev1 { .. }, T2_1) => &["(u*a^(3*k-2)-1)/2", "2*u*a^(3*k-1)", "(u*a^(3*k)-1)/2", "1", "1"],
        (Family::Tasoev1 { .. }, T2_2) => &["(u*a^(3*k-1)-1)/2", "2*u*a^(3*k)", "(u*a^(3*k+1)-1)/2", "1", "1"],
        (Family::Tasoev1 { .. }, T2_3) => &["(u*a^(3*k)-1)/2", "2*u*a^(3*k+1)", "(u*a^(3*k+2)-1)/2", "1", "1"],

        (Family::Tasoev2 { .. }, T1_1) => &["(u*a^k-2)/2", "1", "1", "(v*a^k-2)/2", "1", "1"],
        (Family::Tasoev2 { .. }, T1_2) => &["u*a^k/2", "2*v*a^k"],
        (Family::Tasoev2 { .. }, T1_3) => &["v*a^k/2", "2*u*a^(k+1)"],
        // sixth entry reads v a^(3k-1)
        (Family::Tasoev2 { .. }, T2_1) => &[
            "(u*a^(3*k-2)-1)/2",
            "2*v*a^(3*k-2)",
            "(u*a^(3*k-1)-1)/2",
            "1",
            "1",
            "(v*a^(3*k-1)-1)/2",
            "2*u*a^(3*k)",
            "(v*a^(3*k)-1)/2",
            "1",
            "1",
        ],
        // last entry reads u a^(3k+1)
        (Family::Tasoev2 { .. }, T2_2) => &[
            "(v*a^(3*k-2)-1)/2",
            "2*u*a^(3*k-1)",
            "(v*a^(3*k-1)-1)/2",
            "1",
            "1",
            "(u*a^(3*k)-1)/2",
            "2*v*a^(3*k)",
            "(u*a^(3*k+1)-1)/2",
            "1",
            "1",
        ],
        (Family::Tasoev2 { .. }, T2_3) => &[
            "(u*a^(3*k-1)-1)/2",
            "2*v*a^(3*k-1)",
            "(u*a^(3*k)-1)/2",
            "1",
            "1",
            "(v*a^(3*k)-1)/2",
            "2*u*a^(3*k+1)",
            "(v*a^(3*k+1)-1)/2",
            "1",
            "1",
        ],
        (Family::Tasoev2 { .. }, T3_1) => &[
            "(u*a^(2*k-1)-1)/2",
            "2*v*a^(2*k-1)",
            "(u*a^(2*k)-1)/2",
            "1",
            "1",
            "(v*a^(2*k)-2)/2",
            "1",
            "1",
        ],
        (Family::Tasoev2 { .. }, T3_2) => &[
            "(u*a^(2*k)-1)/2",
            "2*v*a^(2*k)",
            "(u*a^(2*k+1)-1)/2",
            "1",
            "1",
            "(v*a^(2*k+1)-2)/2",
            "1",
            "1",
        ],
        (Family::Tasoev2 { .. }, T3_3) => &["v*a^k/2", "2*u*a^(k+1)"],
        (Family::Tasoev2 { .. }, T4_1) => &[
            "(v*a^(2*k-1)-1)/2",
            "2*u*a^(2*k)",
            "(v*a^(2*k)-1)/2",
            "1",
            "1",
            "(u*a^(2*k+1)-2)/2",
            "1",
            "1",
        ],
        (Family::Tasoev2 { .. }, T4_2) => &["u*a^k/2", "2*v*a^k"],
        (Family::Tasoev2 { .. }, T4_3) => &[
            "(v*a^(2*k)-1)/2",
            "2*u*a^(2*k+1)",
            "(v*a^(2*k+1)-1)/2",
            "1",
            "1",
            "(u*a^(2*k+2)-2)/2",
            "1",
            "1",
        ],
        _ => return None,
    };
    Some(t.to_vec())
}

/// A family tail with the block index it starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTail {
    pub case: TailCase,
    /// First block in the generic numbering of [`crate::tails::predicted_tail`].
    pub block_k0: i64,
    /// The tail; its `k` counts periods, starting at `start`.
    pub tail: QuasiPeriodicCF,
}

/// The listed tail of `S(f)` for the decomposition case of `S`.
///
/// The start is the first period whose blocks all meet the size conditions.
pub fn family_tail(f: &Family, decomp: DecompCase) -> Result<FamilyTail> {
    let class = family_class(f)?;
    let case = TailCase::new(class, decomp)?;
    let templates = tail_templates(f, case.label)
        .ok_or_else(|| Error::NotApplicable(format!("no listed tail for {f} with {decomp}")))?;
    let x = family_stream(f)?;
    let k0 = first_applicable_k0(&case, &x, 64)
        .ok_or_else(|| Error::NotApplicable(format!("size conditions of {} fail for {f}", case.label)))?;
    // blocks per listed period
    let per = (templates.len() / case.label.entries_per_block()) as i64;
    let start = (k0 - 1 + per - 1) / per + 1;
    let tail = from_templates(f, &templates, start);
    Ok(FamilyTail {
        case,
        block_k0: per * (start - 1) + 1,
        tail,
    })
}

fn prod_kn1(n: &BigInt, lo: i64, hi: i64) -> BigInt {
    let mut acc = BigInt::one();
    for k in lo..=hi {
        acc *= BigInt::from(k) * n + 1;
    }
    acc
}

/// Closed form of the `p`-th convergent of `h(a,n)` as an unreduced pair.
pub fn hurwitz_hp_closed(a: i64, n: i64, p: i64) -> (BigInt, BigInt) {
    let (a, nn) = (BigInt::from(a), BigInt::from(n));
    let mut num = BigInt::zero();
    for i in 0..=(p + 1) / 2 {
        num += a.pow((p - 2 * i + 1) as u32)
            * binomial(BigInt::from(p - i + 1), BigInt::from(i))
            * prod_kn1(&nn, i, p - i);
    }
    let mut den = BigInt::zero();
    for i in 0..=p / 2 {
        den += a.pow((p - 2 * i) as u32) * binomial(BigInt::from(p - i), BigInt::from(i)) * prod_kn1(&nn, i + 1, p - i);
    }
    (num, den)
}

/// `(1 - (-1)^p) / 2`.
pub fn delta(p: i64) -> i64 {
    p.rem_euclid(2)
}

/// Closed form of `S(H_p(a,n))`.
pub fn hurwitz_bp_closed(sigma: &Transform, a: i64, n: i64, p: i64) -> Result<BigRational> {
    let mx = sigma.matrix();
    let (ab, nn) = (BigInt::from(a), BigInt::from(n));
    let mut num = BigInt::zero();
    let mut den = BigInt::zero();
    for i in 0..=p / 2 {
        let pw = ab.pow((p - 2 * i) as u32);
        let c1 = binomial(BigInt::from(p - i + 1), BigInt::from(i));
        let c0 = binomial(BigInt::from(p - i), BigInt::from(i));
        let lead = &ab * (BigInt::from(i) * &nn + 1) * &c1;
        let pr = prod_kn1(&nn, i + 1, p - i);
        num += &pw * (&mx.a * &lead + &mx.b * &c0) * &pr;
        den += &pw * (&mx.c * &lead + &mx.d * &c0) * &pr;
    }
    num += &mx.a * delta(p);
    den += &mx.c * delta(p);
    if den.is_zero() {
        return Err(Error::Pole);
    }
    Ok(BigRational::new(num, den))
}

/// For even `a`, `M(h(a,n)) = [1; ak n/2 + (a(1-n)-2)/2, 1, 1 ...]` and
/// its convergents satisfy `U_3p / V_3p = M(H_{p-1})`. Checks both for
/// `p = 1 ..= p_max`.
pub fn komatsu_special_check(a: i64, n: i64, p_max: i64) -> Result<VerificationReport> {
    if a < 1 || n < 1 || a % 2 != 0 {
        return Err(Error::NotApplicable(format!(
            "needs a positive even a and positive n, got a={a}, n={n}"
        )));
    }
    let alpha = a * n / 2;
    let beta = (a * (1 - n) - 2) / 2;
    if alpha + beta < 1 {
        return Err(Error::NotApplicable(format!(
            "first period quotient alpha + beta = {} is not positive",
            alpha + beta
        )));
    }
    let m = Transform::from_i64(1, 1, 1, -1)?;
    let x = family_stream(&Family::Hurwitz { a, n })?;
    let count = (3 * p_max + 4) as usize;
    let observed = apply_lft_stream(&m, x.stream(), count).take_terms(count)?;
    let shape = QuasiPeriodicCF::new(
        vec![BigInt::one()],
        vec![Expr::int(alpha) * Expr::k() + beta, Expr::int(1), Expr::int(1)],
        BigInt::one(),
    );
    if shape.terms(count)? != observed {
        return Err(Error::NotApplicable(format!(
            "M(h({a},{n})) does not have the shape {shape}"
        )));
    }
    let out = convergents_of(&observed);
    let inp = convergents_of(&x.terms(p_max as usize)?);
    let mut rep = VerificationReport::new(format!("U_3p/V_3p = B_(p-1) on h({a},{n})"), 1, p_max);
    for p in 1..=p_max {
        let u = out[(3 * p) as usize].value();
        let h = &inp[(p - 1) as usize];
        let b = m.apply(&h.value())?;
        rep.check(p, &u, &b);
    }
    Ok(rep)
}

/// One concrete parameter choice per listed parity case.
pub fn sample_families() -> Vec<Family> {
    vec![
        Family::Hurwitz { a: 4, n: 1 },
        Family::Hurwitz { a: 3, n: 2 },
        Family::Hurwitz { a: 5, n: 5 },
        Family::Tasoev1 { u: 2, a: 2 },
        Family::Tasoev1 { u: 3, a: 3 },
        Family::Tasoev2 { u: 2, v: 4, a: 2 },
        Family::Tasoev2 { u: 3, v: 5, a: 3 },
        Family::Tasoev2 { u: 3, v: 2, a: 3 },
        Family::Tasoev2 { u: 2, v: 3, a: 3 },
    ]
}
