//! Determinant +-2 matrices: the `TM` / `TMR` / `TMRJ` decomposition and the
//! commutation identities between `M`, `J`, the auxiliary matrices and powers
//! of `R`, `L`.
//!
//! ```
//! use lftcf::det2::{decompose, DecompCase};
//! use lftcf::Matrix;
//!
//! let d = decompose(&Matrix::from_i64(3, 1, 1, 1)).unwrap();
//! assert_eq!(d.case, DecompCase::TM);
//! assert_eq!(d.t, Matrix::from_i64(2, 1, 1, 0));
//! ```

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{aux_a, aux_b, aux_c, j, l, l_pow, m, r, r_pow, Letter, Matrix2x2, Scalar};
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DecompCase {
    TM,
    TMR,
    TMRJ,
}

impl DecompCase {
    pub const ALL: [DecompCase; 3] = [DecompCase::TM, DecompCase::TMR, DecompCase::TMRJ];

    /// `M`, `MR` or `MRJ`.
    pub fn word<T: Scalar>(self) -> Matrix2x2<T> {
        match self {
            DecompCase::TM => m(),
            DecompCase::TMR => &m() * &r(),
            DecompCase::TMRJ => &(&m() * &r()) * &j(),
        }
    }

    pub fn parse(s: &str) -> Option<DecompCase> {
        match s.to_ascii_uppercase().as_str() {
            "TM" => Some(DecompCase::TM),
            "TMR" => Some(DecompCase::TMR),
            "TMRJ" => Some(DecompCase::TMRJ),
            _ => None,
        }
    }
}

impl fmt::Display for DecompCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `S = T * word(case)` with `T` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<T> {
    pub t: Matrix2x2<T>,
    pub case: DecompCase,
}

/// The three parity situations, in `TM, TMR, TMRJ` order.
pub fn case_predicates<T: Scalar>(s: &Matrix2x2<T>) -> [bool; 3] {
    let odd = |v: &T| v.is_odd();
    let (a, b, c, d) = (odd(&s.a), odd(&s.b), odd(&s.c), odd(&s.d));
    [a == b && c == d, (a || c) && !b && !d, (b || d) && !a && !c]
}

pub fn decompose<T: Scalar>(s: &Matrix2x2<T>) -> Result<Decomposition<T>> {
    let det = s.det();
    if det.abs() != T::from_i64(2).unwrap() {
        return Err(Error::BadDeterminant(det.to_string()));
    }
    let two = T::from_i64(2).unwrap();
    let half = |v: T| v.div_floor(&two);
    let Matrix2x2 { a, b, c, d } = s.clone();
    let [tm, tmr, tmrj] = case_predicates(s);
    let (t, case) = if tm {
        let t = Matrix2x2::new(
            half(a.clone() + b.clone()),
            half(a - b),
            half(c.clone() + d.clone()),
            half(c - d),
        );
        (t, DecompCase::TM)
    } else if tmr {
        let t = Matrix2x2::new(
            half(b.clone()),
            half(two.clone() * a - b),
            half(d.clone()),
            half(two.clone() * c - d),
        );
        (t, DecompCase::TMR)
    } else if tmrj {
        let t = Matrix2x2::new(
            half(a.clone()),
            half(two.clone() * b - a),
            half(c.clone()),
            half(two.clone() * d - c),
        );
        (t, DecompCase::TMRJ)
    } else {
        unreachable!("an odd determinant cannot occur when |det| = 2");
    };
    debug_assert_eq!(&t * &case.word(), *s);
    Ok(Decomposition { t, case })
}

/// The eleven commutation identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityName {
    /// `J R^h = L^h J`
    JR,
    /// `J L^h = R^h J`
    JL,
    /// `A L^h = R^{2h} A`
    AL,
    /// `B R^h = L^{2h} B`
    BR,
    /// `M R^h = R L^{(h-1)/2} A`, h odd
    MROdd,
    /// `A R^h = L^{(h-1)/2} C`, h odd
    AROdd,
    /// `B L^h = R^{(h-1)/2} L M`, h odd
    BLOdd,
    /// `C L^h = R L R^{(h-1)/2} B`, h odd
    CLOdd,
    /// `M R^h = R L^{(h-2)/2} C`, h even
    MREven,
    /// `A R^h = L^{h/2} A`, h even
    AREven,
    /// `C L^h = R L R^{(h-2)/2} L M`, h even
    CLEven,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HParity {
    Any,
    Odd,
    Even,
}

impl IdentityName {
    pub const ALL: [IdentityName; 11] = [
        IdentityName::JR,
        IdentityName::JL,
        IdentityName::AL,
        IdentityName::BR,
        IdentityName::MROdd,
        IdentityName::AROdd,
        IdentityName::BLOdd,
        IdentityName::CLOdd,
        IdentityName::MREven,
        IdentityName::AREven,
        IdentityName::CLEven,
    ];

    pub fn parity(self) -> HParity {
        use IdentityName::*;
        match self {
            JR | JL | AL | BR => HParity::Any,
            MROdd | AROdd | BLOdd | CLOdd => HParity::Odd,
            MREven | AREven | CLEven => HParity::Even,
        }
    }

    pub fn admits<T: Scalar>(self, h: &T) -> bool {
        match self.parity() {
            HParity::Any => true,
            HParity::Odd => h.is_odd(),
            HParity::Even => h.is_even(),
        }
    }

    pub fn label(self) -> &'static str {
        use IdentityName::*;
        match self {
            JR => "J R^h = L^h J",
            JL => "J L^h = R^h J",
            AL => "A L^h = R^(2h) A",
            BR => "B R^h = L^(2h) B",
            MROdd => "M R^h = R L^((h-1)/2) A",
            AROdd => "A R^h = L^((h-1)/2) C",
            BLOdd => "B L^h = R^((h-1)/2) L M",
            CLOdd => "C L^h = R L R^((h-1)/2) B",
            MREven => "M R^h = R L^((h-2)/2) C",
            AREven => "A R^h = L^(h/2) A",
            CLEven => "C L^h = R L R^((h-2)/2) L M",
        }
    }

    /// Both sides at `h`, as exact matrices.
    pub fn sides<T: Scalar>(self, h: &T) -> Result<(Matrix2x2<T>, Matrix2x2<T>)> {
        use IdentityName::*;
        if !self.admits(h) {
            return Err(Error::Parity(format!(
                "{} needs {:?} h, got {h}",
                self.label(),
                self.parity()
            )));
        }
        let one = T::one();
        let two = T::from_i64(2).unwrap();
        let h1 = (h.clone() - one.clone()).div_floor(&two);
        let h2 = (h.clone() - two.clone()).div_floor(&two);
        let mul = |xs: &[Matrix2x2<T>]| xs.iter().fold(Matrix2x2::identity(), |acc, x| &acc * x);
        let (lhs, rhs) = match self {
            JR => (mul(&[j(), r_pow(h)]), mul(&[l_pow(h), j()])),
            JL => (mul(&[j(), l_pow(h)]), mul(&[r_pow(h), j()])),
            AL => (
                mul(&[aux_a(), l_pow(h)]),
                mul(&[r_pow(&(two.clone() * h.clone())), aux_a()]),
            ),
            BR => (
                mul(&[aux_b(), r_pow(h)]),
                mul(&[l_pow(&(two.clone() * h.clone())), aux_b()]),
            ),
            MROdd => (mul(&[m(), r_pow(h)]), mul(&[r(), l_pow(&h1), aux_a()])),
            AROdd => (mul(&[aux_a(), r_pow(h)]), mul(&[l_pow(&h1), aux_c()])),
            BLOdd => (mul(&[aux_b(), l_pow(h)]), mul(&[r_pow(&h1), l(), m()])),
            CLOdd => (mul(&[aux_c(), l_pow(h)]), mul(&[r(), l(), r_pow(&h1), aux_b()])),
            MREven => (mul(&[m(), r_pow(h)]), mul(&[r(), l_pow(&h2), aux_c()])),
            AREven => (mul(&[aux_a(), r_pow(h)]), mul(&[l_pow(&h.div_floor(&two)), aux_a()])),
            CLEven => (mul(&[aux_c(), l_pow(h)]), mul(&[r(), l(), r_pow(&h2), l(), m()])),
        };
        Ok((lhs, rhs))
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Check one identity at one `h`.
pub fn verify_identity<T: Scalar>(name: IdentityName, h: &T) -> Result<VerificationReport> {
    let (lhs, rhs) = name.sides(h)?;
    let p = h.to_string().parse::<i64>().unwrap_or(i64::MAX);
    let mut rep = VerificationReport::new(name.label(), p, p);
    rep.check(p, &lhs, &rhs);
    Ok(rep)
}

/// All eleven identities at every admissible `h` in `lo..=hi`.
pub fn identity_sweep(lo: i64, hi: i64) -> VerificationReport {
    let mut total = VerificationReport::new("commutation identities", lo, hi);
    for name in IdentityName::ALL {
        for h in lo..=hi {
            if name.admits(&h) {
                let rep = verify_identity(name, &num_bigint::BigInt::from(h)).expect("parity checked");
                total.absorb(rep);
            }
        }
    }
    total.p_range = (lo, hi);
    total
}

/// The `R`/`L` word of a nonnegative matrix of determinant 1, by repeated row subtraction.
pub fn t_word_if_nonneg<T: Scalar>(t: &Matrix2x2<T>) -> Option<Vec<(Letter, T)>> {
    if !t.det().is_one() || !t.is_nonnegative() {
        return None;
    }
    let mut cur = t.clone();
    let mut word: Vec<(Letter, T)> = Vec::new();
    let mut push = |letter: Letter| match word.last_mut() {
        Some((last, n)) if *last == letter => *n = n.clone() + T::one(),
        _ => word.push((letter, T::one())),
    };
    while cur != Matrix2x2::identity() {
        if cur.a >= cur.c && cur.b >= cur.d {
            cur = Matrix2x2::new(
                cur.a.clone() - cur.c.clone(),
                cur.b.clone() - cur.d.clone(),
                cur.c,
                cur.d,
            );
            push(Letter::R);
        } else if cur.c >= cur.a && cur.d >= cur.b {
            cur = Matrix2x2::new(
                cur.a.clone(),
                cur.b.clone(),
                cur.c.clone() - cur.a.clone(),
                cur.d.clone() - cur.b.clone(),
            );
            push(Letter::L);
        } else {
            return None;
        }
        if cur.a.is_negative()
            || cur.b.is_negative()
            || cur.c.is_negative()
            || cur.d.is_negative()
            || cur.det().is_zero()
        {
            return None;
        }
    }
    Some(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rl_word_to_matrix;
    use num_bigint::BigInt;

    type Mx = Matrix2x2<BigInt>;

    #[test]
    fn worked_decompositions() {
        let d = decompose(&Mx::from_i64(1, 1, 1, -1)).unwrap();
        assert_eq!((d.t, d.case), (Mx::identity(), DecompCase::TM));
        let d = decompose(&Mx::from_i64(1, 2, 1, 0)).unwrap();
        assert_eq!((d.t, d.case), (Mx::identity(), DecompCase::TMR));
        let d = decompose(&Mx::from_i64(2, 1, 0, 1)).unwrap();
        assert_eq!((d.t, d.case), (Mx::identity(), DecompCase::TMRJ));
        let d = decompose(&Mx::from_i64(3, 1, 1, 1)).unwrap();
        assert_eq!((d.t, d.case), (Mx::from_i64(2, 1, 1, 0), DecompCase::TM));
        assert!(matches!(
            decompose(&Mx::from_i64(1, 0, 0, 1)),
            Err(Error::BadDeterminant(_))
        ));
    }

    #[test]
    fn worked_identities() {
        let (l5, r5) = IdentityName::JR.sides(&5i64).unwrap();
        assert_eq!(l5, Matrix2x2::from_i64(0, 1, 1, 5));
        assert_eq!(l5, r5);
        let (lhs, rhs) = IdentityName::MROdd.sides(&1i64).unwrap();
        assert_eq!(lhs, Matrix2x2::from_i64(1, 2, 1, 0));
        assert_eq!(rhs, lhs);
        let (lhs, rhs) = IdentityName::MREven.sides(&2i64).unwrap();
        assert_eq!(lhs, Matrix2x2::from_i64(1, 3, 1, 1));
        assert_eq!(rhs, lhs);
        assert!(matches!(
            verify_identity(IdentityName::AREven, &3i64),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn raney_words() {
        assert_eq!(t_word_if_nonneg(&Mx::identity()), Some(vec![]));
        let w = t_word_if_nonneg(&Mx::from_i64(3, 2, 1, 1)).unwrap();
        assert_eq!(w, vec![(Letter::R, BigInt::from(2)), (Letter::L, BigInt::from(1))]);
        assert_eq!(rl_word_to_matrix(&w).unwrap(), Mx::from_i64(3, 2, 1, 1));
        assert_eq!(t_word_if_nonneg(&Mx::from_i64(0, 1, 1, 0)), None);
        assert_eq!(t_word_if_nonneg(&Mx::from_i64(2, -1, 1, 0)), None);
    }

    #[test]
    fn small_sweep() {
        assert!(identity_sweep(-5, 5).is_pass());
    }
}
