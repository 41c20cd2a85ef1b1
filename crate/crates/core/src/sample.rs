//! Seeded random instances for sweeps and self-tests.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf::{CfClass, Expr, QuasiPeriodicCF};
use crate::Matrix;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer matrix with entries in `[-bound, bound]` and determinant in `dets`.
///
/// Picks `a`, `b`, `c` and solves for `d`, retrying until it fits.
pub fn matrix_with_det(rng: &mut SampleRng, bound: i64, dets: &[i64]) -> Matrix {
    loop {
        let a = rng.gen_range(-bound..=bound);
        let b = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        let det = dets[rng.gen_range(0..dets.len())];
        let d = if a == 0 {
            if -b * c != det {
                continue;
            }
            rng.gen_range(-bound..=bound)
        } else {
            let num = det + b * c;
            if num % a != 0 {
                continue;
            }
            num / a
        };
        if d.abs() <= bound {
            return Matrix::from_i64(a, b, c, d);
        }
    }
}

pub fn unimodular(rng: &mut SampleRng, bound: i64) -> Matrix {
    matrix_with_det(rng, bound, &[1, -1])
}

pub fn det2(rng: &mut SampleRng, bound: i64) -> Matrix {
    matrix_with_det(rng, bound, &[2, -2])
}

/// Whether index `i` of a class member holds an odd quotient.
fn odd_at(class: CfClass, i: usize) -> bool {
    match class {
        CfClass::CF1 => false,
        CfClass::CF2 => true,
        CfClass::CF3 => i.is_multiple_of(2),
        CfClass::CF4 => i % 2 == 1,
        CfClass::Unknown => unreachable!(),
    }
}

/// A member of `class` with empty prefix and period entries `c k + d`
/// (`c` in {0, 2, 4}, `1 <= d <= max`) of the right parity, starting at `k = 1`.
pub fn class_member(rng: &mut SampleRng, class: CfClass, max: i64) -> QuasiPeriodicCF {
    let s = match class {
        CfClass::CF1 | CfClass::CF2 => rng.gen_range(1..=3),
        _ => 2 * rng.gen_range(1..=2),
    };
    let period = (0..s)
        .map(|j| {
            let odd = odd_at(class, j);
            let d = loop {
                let d = rng.gen_range(1..=max);
                if (d % 2 == 1) == odd {
                    break d;
                }
            };
            let c = 2 * rng.gen_range(0..=2);
            if c == 0 {
                Expr::int(d)
            } else {
                Expr::int(c) * Expr::k() + d
            }
        })
        .collect();
    QuasiPeriodicCF::new(Vec::new(), period, BigInt::from(1))
}

/// A finite expansion `[a0; a1, ..]` with `|a0| <= 20`, up to ten further quotients in `1..=20`.
pub fn rational_cf(rng: &mut SampleRng) -> Vec<BigInt> {
    let len = rng.gen_range(0..=10);
    let mut v = vec![BigInt::from(rng.gen_range(-20..=20))];
    v.extend((0..len).map(|_| BigInt::from(rng.gen_range(1..=20))));
    v
}

/// An infinite expansion with a short random prefix and a period of constants or affine terms.
pub fn infinite_cf(rng: &mut SampleRng) -> QuasiPeriodicCF {
    let r = rng.gen_range(0..=3);
    let prefix = (0..r)
        .map(|i| {
            BigInt::from(if i == 0 {
                rng.gen_range(-10..=10)
            } else {
                rng.gen_range(1..=30)
            })
        })
        .collect();
    let s = rng.gen_range(1..=4);
    let period = (0..s)
        .map(|_| {
            let c = rng.gen_range(0..=3);
            let d = rng.gen_range(1..=30);
            if c == 0 {
                Expr::int(d)
            } else {
                Expr::int(c) * Expr::k() + d
            }
        })
        .collect();
    QuasiPeriodicCF::new(prefix, period, BigInt::from(1))
}
