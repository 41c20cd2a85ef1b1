//! Integer matrices, linear fractional transformations and R/L words.
//!
//! Everything here is generic over an exact integer scalar. The crate root
//! fixes the scalar to [`BigInt`](num_bigint::BigInt); the small fixed-width
//! instantiations (`i64`, `i128`) are used by the exhaustive sweeps where
//! entries are known to stay small.
//!
//! ```
//! use lftcf::exact::{Matrix2x2, Letter};
//! use lftcf::Integer;
//!
//! let m = Matrix2x2::<Integer>::from_i64(1, 1, 1, -1);
//! assert_eq!(&m * &m, Matrix2x2::from_i64(2, 0, 0, 2));
//! let w = lftcf::exact::rl_word_to_matrix(&[(Letter::R, Integer::from(2)), (Letter::L, Integer::from(2))]).unwrap();
//! assert_eq!(w, Matrix2x2::from_i64(5, 2, 2, 1));
//! ```

use std::fmt;
use std::ops::Mul;

use num_integer::Integer as IntegerOps;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

use crate::error::{Error, Result};

/// Exact signed integer usable as a matrix entry.
pub trait Scalar: Clone + IntegerOps + Signed + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync {}

impl<T> Scalar for T where T: Clone + IntegerOps + Signed + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync {}

fn lit<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("small literal fits every scalar")
}

/// A 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2x2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Matrix2x2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2x2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Matrix2x2::new(lit(a), lit(b), lit(c), lit(d))
    }

    pub fn identity() -> Self {
        Matrix2x2::from_i64(1, 0, 0, 1)
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn neg(&self) -> Self {
        Matrix2x2::new(-self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    /// Multiply every entry by `k`.
    pub fn scale(&self, k: &T) -> Self {
        Matrix2x2::new(
            self.a.clone() * k.clone(),
            self.b.clone() * k.clone(),
            self.c.clone() * k.clone(),
            self.d.clone() * k.clone(),
        )
    }

    /// Adjugate: `[[d, -b], [-c, a]]`, so that `m * m.adjugate() = det(m) I`.
    pub fn adjugate(&self) -> Self {
        Matrix2x2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<Self> {
        let det = self.det();
        if det.is_one() {
            Some(self.adjugate())
        } else if (-det).is_one() {
            Some(self.adjugate().neg())
        } else {
            None
        }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix2x2<U> {
        Matrix2x2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative() && !self.c.is_negative() && !self.d.is_negative()
    }
}

impl<T: Scalar> Mul for &Matrix2x2<T> {
    type Output = Matrix2x2<T>;

    fn mul(self, o: &Matrix2x2<T>) -> Matrix2x2<T> {
        Matrix2x2 {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }
}

impl<T: Scalar> Mul for Matrix2x2<T> {
    type Output = Matrix2x2<T>;

    fn mul(self, o: Matrix2x2<T>) -> Matrix2x2<T> {
        &self * &o
    }
}

impl<T: fmt::Display> fmt::Display for Matrix2x2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Exact product, the free-function form used by the other modules.
pub fn mat_mul<T: Scalar>(x: &Matrix2x2<T>, y: &Matrix2x2<T>) -> Matrix2x2<T> {
    x * y
}

pub fn mat_det<T: Scalar>(x: &Matrix2x2<T>) -> T {
    x.det()
}

/// `M = [[1,1],[1,-1]]`, the determinant -2 generator.
pub fn m<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(1, 1, 1, -1)
}

/// `R = [[1,1],[0,1]]`.
pub fn r<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(1, 1, 0, 1)
}

/// `L = [[1,0],[1,1]]`.
pub fn l<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(1, 0, 1, 1)
}

/// `J = [[0,1],[1,0]]`.
pub fn j<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(0, 1, 1, 0)
}

/// `[[0,2],[1,0]]`.
pub fn aux_a<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(0, 2, 1, 0)
}

/// `[[0,1],[2,0]]`.
pub fn aux_b<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(0, 1, 2, 0)
}

/// `[[0,2],[1,1]]`.
pub fn aux_c<T: Scalar>() -> Matrix2x2<T> {
    Matrix2x2::from_i64(0, 2, 1, 1)
}

/// `R^h` for any integer `h`; negative powers are the exact inverses.
pub fn r_pow<T: Scalar>(h: &T) -> Matrix2x2<T> {
    Matrix2x2::new(T::one(), h.clone(), T::zero(), T::one())
}

/// `L^h` for any integer `h`.
pub fn l_pow<T: Scalar>(h: &T) -> Matrix2x2<T> {
    Matrix2x2::new(T::one(), T::zero(), h.clone(), T::one())
}

/// Generator letters of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    R,
    L,
    M,
    J,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::R => Letter::L,
            Letter::L => Letter::R,
            other => other,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::R => "R",
            Letter::L => "L",
            Letter::M => "M",
            Letter::J => "J",
        };
        f.write_str(s)
    }
}

pub fn letter_pow<T: Scalar>(letter: Letter, h: &T) -> Result<Matrix2x2<T>> {
    match letter {
        Letter::R => Ok(r_pow(h)),
        Letter::L => Ok(l_pow(h)),
        Letter::M | Letter::J if h.is_one() => Ok(if letter == Letter::M { m() } else { j() }),
        _ => Err(Error::InvalidWord(format!(
            "{letter} only appears with exponent 1, got {h}"
        ))),
    }
}

/// Product of a word of generator powers. Exponents must be nonnegative and
/// `M`, `J` only appear to the first power.
pub fn rl_word_to_matrix<T: Scalar>(word: &[(Letter, T)]) -> Result<Matrix2x2<T>> {
    let mut acc = Matrix2x2::identity();
    for (letter, h) in word {
        if h.is_negative() {
            return Err(Error::InvalidWord(format!("negative exponent {h} on {letter}")));
        }
        acc = &acc * &letter_pow(*letter, h)?;
    }
    Ok(acc)
}

/// The Raney word `R^{a0} L^{a1} R^{a2} ...` of a list of partial quotients.
pub fn quotients_to_matrix<T: Scalar>(quotients: &[T]) -> Matrix2x2<T> {
    let mut acc = Matrix2x2::identity();
    for (i, q) in quotients.iter().enumerate() {
        let f = if i % 2 == 0 { r_pow(q) } else { l_pow(q) };
        acc = &acc * &f;
    }
    acc
}

/// A linear fractional transformation `x -> (ax + b) / (cx + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lft<T> {
    mat: Matrix2x2<T>,
}

impl<T: Scalar> Lft<T> {
    pub fn new(mat: Matrix2x2<T>) -> Result<Self> {
        if mat.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(Lft { mat })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Lft::new(Matrix2x2::from_i64(a, b, c, d))
    }

    pub fn identity() -> Self {
        Lft {
            mat: Matrix2x2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2x2<T> {
        &self.mat
    }

    pub fn det(&self) -> T {
        self.mat.det()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Lft<T>) -> Lft<T> {
        // a product of nonsingular matrices is nonsingular
        Lft {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn apply(&self, x: &Ratio<T>) -> Result<Ratio<T>> {
        lft_apply(self, x)
    }
}

impl<T: fmt::Display> fmt::Display for Lft<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mat.fmt(f)
    }
}

pub fn lft_apply<T: Scalar>(sigma: &Lft<T>, x: &Ratio<T>) -> Result<Ratio<T>> {
    let m = &sigma.mat;
    let (p, q) = (x.numer().clone(), x.denom().clone());
    let num = m.a.clone() * p.clone() + m.b.clone() * q.clone();
    let den = m.c.clone() * p + m.d.clone() * q;
    if den.is_zero() {
        return Err(Error::Pole);
    }
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Matrix2x2<BigInt>;

    fn q(n: i64, d: i64) -> Ratio<BigInt> {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn products() {
        let x = M::from_i64(3, -4, 7, 2);
        assert_eq!(&M::identity() * &x, x);
        assert_eq!(&m::<BigInt>() * &m(), M::from_i64(2, 0, 0, 2));
        assert_eq!(&M::from_i64(2, 1, 1, 0) * &m(), M::from_i64(3, 1, 1, 1));
    }

    #[test]
    fn determinants() {
        assert_eq!(M::identity().det(), BigInt::from(1));
        assert_eq!(m::<BigInt>().det(), BigInt::from(-2));
        assert_eq!(r::<BigInt>().det(), BigInt::from(1));
    }

    #[test]
    fn apply() {
        let id = Lft::<BigInt>::identity();
        assert_eq!(id.apply(&q(5, 3)).unwrap(), q(5, 3));
        let mm = Lft::new(m::<BigInt>()).unwrap();
        assert_eq!(mm.apply(&q(3, 1)).unwrap(), q(2, 1));
        let jj = Lft::new(j::<BigInt>()).unwrap();
        assert_eq!(jj.apply(&q(2, 7)).unwrap(), q(7, 2));
        assert_eq!(mm.apply(&q(1, 1)), Err(Error::Pole));
        assert_eq!(Lft::<BigInt>::from_i64(1, 2, 2, 4), Err(Error::Singular));
    }

    #[test]
    fn words() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(rl_word_to_matrix::<BigInt>(&[]).unwrap(), M::identity());
        let w = rl_word_to_matrix(&[(Letter::R, b(2)), (Letter::L, b(1))]).unwrap();
        // first column carries (p1, q1) of [2; 1]
        assert_eq!((w.a.clone(), w.c.clone()), (b(3), b(1)));
        assert!(rl_word_to_matrix(&[(Letter::R, b(-1))]).is_err());
        assert!(rl_word_to_matrix(&[(Letter::M, b(2))]).is_err());
        let mr = rl_word_to_matrix(&[(Letter::M, b(1)), (Letter::R, b(1))]).unwrap();
        assert_eq!(mr, M::from_i64(1, 2, 1, 0));
    }

    #[test]
    fn negative_powers_are_inverses() {
        for h in -6i64..=6 {
            assert_eq!(&r_pow(&h) * &r_pow(&-h), Matrix2x2::<i64>::identity());
            assert_eq!(&l_pow(&h) * &l_pow(&-h), Matrix2x2::<i64>::identity());
            assert_eq!(r_pow(&h).inverse_unimodular().unwrap(), r_pow(&-h));
        }
    }

    #[test]
    fn generic_scalars_agree() {
        let small = &Matrix2x2::<i64>::from_i64(2, 1, 1, 0) * &m();
        let big = &M::from_i64(2, 1, 1, 0) * &m();
        assert_eq!(small.map(|v| BigInt::from(*v)), big);
    }
}
