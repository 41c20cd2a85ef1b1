//! Predicted tails of `S(x)` for `|det S| = 2`.
//!
//! Writing `S = T W` with `W` one of `M`, `MR`, `MRJ` (see [`crate::det2`]),
//! the product `W R^{a0} L^{a1} ...` can be rewritten left to right with the
//! commutation identities: a residual matrix (`M` or one of the auxiliary
//! matrices `A`, `B`, `C`) travels to the right and leaves `R`/`L` powers
//! behind. For a parity class the residual returns to its starting state
//! after a fixed number of input quotients (a block), so the emitted powers
//! repeat with a fixed shape. That shape, evaluated on the input's
//! coefficient expressions, is the predicted tail.
//!
//! The same rewriting is exposed three ways: [`block_identity_check`] checks
//! one block as an exact matrix identity, [`natural_expansion`] runs it over
//! a whole input prefix (giving the expansion of `W(x)` with the provenance
//! of every output quotient), and [`predicted_tail`] builds the symbolic tail.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cf::{classify_qp, CfClass, Expr, QuasiPeriodicCF, DEFAULT_HORIZON};
use crate::det2::{decompose, DecompCase};
use crate::error::{Error, Result};
use crate::exact::{aux_a, aux_b, aux_c, j, l_pow, m, r_pow, Letter, Matrix2x2, Scalar};
use crate::report::VerificationReport;
use crate::{Matrix, Transform};

/// The twelve tail formulas, `t<class>.<case>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TailLabel {
    T1_1,
    T1_2,
    T1_3,
    T2_1,
    T2_2,
    T2_3,
    T3_1,
    T3_2,
    T3_3,
    T4_1,
    T4_2,
    T4_3,
}

impl TailLabel {
    pub const ALL: [TailLabel; 12] = [
        TailLabel::T1_1,
        TailLabel::T1_2,
        TailLabel::T1_3,
        TailLabel::T2_1,
        TailLabel::T2_2,
        TailLabel::T2_3,
        TailLabel::T3_1,
        TailLabel::T3_2,
        TailLabel::T3_3,
        TailLabel::T4_1,
        TailLabel::T4_2,
        TailLabel::T4_3,
    ];

    pub fn class(self) -> CfClass {
        use TailLabel::*;
        match self {
            T1_1 | T1_2 | T1_3 => CfClass::CF1,
            T2_1 | T2_2 | T2_3 => CfClass::CF2,
            T3_1 | T3_2 | T3_3 => CfClass::CF3,
            T4_1 | T4_2 | T4_3 => CfClass::CF4,
        }
    }

    pub fn case(self) -> DecompCase {
        use TailLabel::*;
        match self {
            T1_1 | T2_1 | T3_1 | T4_1 => DecompCase::TM,
            T1_2 | T2_2 | T3_2 | T4_2 => DecompCase::TMR,
            T1_3 | T2_3 | T3_3 | T4_3 => DecompCase::TMRJ,
        }
    }

    /// TM -> x.1, TMR -> x.2, TMRJ -> x.3.
    pub fn of(class: CfClass, case: DecompCase) -> Option<TailLabel> {
        TailLabel::ALL
            .into_iter()
            .find(|t| t.class() == class && t.case() == case)
    }

    /// Whether the tail carries a three-term leaping recurrence (the 2-periodic tails have none).
    pub fn has_recurrence(self) -> bool {
        self.recipe().entries.len() > 2
    }

    pub(crate) fn recipe(self) -> Recipe {
        use Entry::*;
        use TailLabel::*;
        let pair = vec![Src(0, Op::Half), Src(1, Op::Double)];
        let five = vec![Src(0, Op::OddHalf), Src(1, Op::Double), Src(2, Op::OddHalf), One, One];
        let eight = vec![
            Src(0, Op::OddHalf),
            Src(1, Op::Double),
            Src(2, Op::OddHalf),
            One,
            One,
            Src(3, Op::EvenHalf),
            One,
            One,
        ];
        let (block, shift, entries, conditions): (i64, i64, Vec<Entry>, Vec<(i64, i64)>) = match self {
            T1_1 => (1, -1, vec![Src(0, Op::EvenHalf), One, One], vec![(0, 4)]),
            T1_2 => (2, -2, pair, vec![]),
            T1_3 => (2, -1, pair, vec![]),
            T2_1 => (3, -3, five, vec![(0, 3), (2, 3)]),
            T2_2 => (3, -2, five, vec![(0, 3), (2, 3)]),
            T2_3 => (3, -1, five, vec![(0, 3), (2, 3)]),
            T3_1 => (4, -4, eight, vec![(0, 3), (2, 3), (3, 4)]),
            T3_2 => (4, -2, eight, vec![(0, 3), (2, 3), (3, 4)]),
            T3_3 => (2, -1, pair, vec![]),
            T4_1 => (4, -3, eight, vec![(0, 3), (2, 3), (3, 4)]),
            T4_2 => (2, -2, pair, vec![]),
            T4_3 => (4, -1, eight, vec![(0, 3), (2, 3), (3, 4)]),
        };
        Recipe {
            block,
            shift,
            entries,
            conditions,
        }
    }

    /// Input index feeding the first entry of block `k`.
    pub fn first_source(self, k: i64) -> i64 {
        let r = self.recipe();
        r.block * k + r.shift
    }

    /// Input quotients consumed per block.
    pub fn block_len(self) -> usize {
        self.recipe().block as usize
    }

    /// Output quotients per block.
    pub fn entries_per_block(self) -> usize {
        self.recipe().entries.len()
    }
}

impl fmt::Display for TailLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{:?}", self).to_lowercase().replace('_', ".");
        f.write_str(&s)
    }
}

/// How an output entry is obtained from an input quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    /// `(d - 1) / 2`
    OddHalf,
    /// `(e - 2) / 2`
    EvenHalf,
    /// `e / 2`
    Half,
    /// `2 v`
    Double,
}

impl Op {
    fn expr(self, v: Expr) -> Expr {
        match self {
            Op::OddHalf => (v - 1) / 2,
            Op::EvenHalf => (v - 2) / 2,
            Op::Half => v / 2,
            Op::Double => 2 * v,
        }
    }

    fn eval(self, v: &BigInt) -> Result<BigInt> {
        self.expr(Expr::Int(v.clone())).eval(&BigInt::zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Entry {
    Src(i64, Op),
    One,
}

/// Block shape of one tail formula. Block `k` reads input quotients
/// `block*k + shift + o` for the offsets `o` named in `entries`.
#[derive(Clone, Debug)]
pub(crate) struct Recipe {
    pub block: i64,
    pub shift: i64,
    pub entries: Vec<Entry>,
    /// `(offset, minimum)`: the quotient at that offset must be at least the minimum.
    pub conditions: Vec<(i64, i64)>,
}

/// Parity class, decomposition case and the tail formula they select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TailCase {
    pub cf_class: CfClass,
    pub decomp: DecompCase,
    pub label: TailLabel,
}

impl TailCase {
    pub fn new(cf_class: CfClass, decomp: DecompCase) -> Result<TailCase> {
        let label = TailLabel::of(cf_class, decomp).ok_or_else(|| Error::ClassMismatch {
            expected: "one of CF1..CF4".into(),
            found: cf_class.to_string(),
        })?;
        Ok(TailCase {
            cf_class,
            decomp,
            label,
        })
    }

    pub fn from_label(label: TailLabel) -> TailCase {
        TailCase {
            cf_class: label.class(),
            decomp: label.case(),
            label,
        }
    }

    pub fn all() -> impl Iterator<Item = TailCase> {
        TailLabel::ALL.into_iter().map(TailCase::from_label)
    }
}

impl fmt::Display for TailCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{} ({})", self.cf_class, self.decomp, self.label)
    }
}

// ---------------------------------------------------------------------------
// Rewriting

/// The matrix carried to the right while rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Residual {
    M,
    /// `[[0,2],[1,0]]`
    A,
    /// `[[0,1],[2,0]]`
    B,
    /// `[[0,2],[1,1]]`
    C,
}

impl Residual {
    pub fn matrix<T: Scalar>(self) -> Matrix2x2<T> {
        match self {
            Residual::M => m(),
            Residual::A => aux_a(),
            Residual::B => aux_b(),
            Residual::C => aux_c(),
        }
    }
}

/// An emitted power, remembering which input quotient it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<T> {
    pub letter: Letter,
    pub exp: T,
    pub source: Option<usize>,
}

/// Move `res` past `letter^h`: `res * letter^h = (pieces) * res'`.
pub fn rewrite_step<T: Scalar>(
    res: Residual,
    letter: Letter,
    h: &T,
    source: Option<usize>,
) -> Result<(Vec<Piece<T>>, Residual)> {
    let one = T::one();
    let two = T::from_i64(2).unwrap();
    let odd = h.is_odd();
    let lit = |letter: Letter| Piece {
        letter,
        exp: one.clone(),
        source: None,
    };
    let src = |letter: Letter, exp: T| Piece { letter, exp, source };
    let h1 = (h.clone() - one.clone()).div_floor(&two);
    let h2 = (h.clone() - two.clone()).div_floor(&two);
    use Letter::{L, R};
    let (pieces, next) = match (res, letter, odd) {
        (Residual::M, R, true) => (vec![lit(R), src(L, h1)], Residual::A),
        (Residual::M, R, false) => (vec![lit(R), src(L, h2)], Residual::C),
        (Residual::A, L, _) => (vec![src(R, two.clone() * h.clone())], Residual::A),
        (Residual::A, R, true) => (vec![src(L, h1)], Residual::C),
        (Residual::A, R, false) => (vec![src(L, h.div_floor(&two))], Residual::A),
        (Residual::B, R, _) => (vec![src(L, two.clone() * h.clone())], Residual::B),
        (Residual::B, L, true) => (vec![src(R, h1), lit(L)], Residual::M),
        (Residual::C, L, true) => (vec![lit(R), lit(L), src(R, h1)], Residual::B),
        (Residual::C, L, false) => (vec![lit(R), lit(L), src(R, h2), lit(L)], Residual::M),
        _ => {
            return Err(Error::Parity(format!(
                "no rewriting rule for {res:?} followed by {letter}^{h}"
            )))
        }
    };
    if pieces.iter().any(|p| p.exp.is_negative()) {
        return Err(Error::Parity(format!(
            "{res:?} {letter}^{h} would emit a negative power"
        )));
    }
    Ok((pieces, next))
}

fn word_matrix<T: Scalar>(pieces: &[Piece<T>]) -> Matrix2x2<T> {
    pieces.iter().fold(Matrix2x2::identity(), |acc, p| {
        let f = if p.letter == Letter::R {
            r_pow(&p.exp)
        } else {
            l_pow(&p.exp)
        };
        &acc * &f
    })
}

/// Check `res * letter^h = (emitted) * res'` for a single rewriting step.
pub fn step_identity_check<T: Scalar>(res: Residual, letter: Letter, h: &T) -> Result<VerificationReport> {
    let (pieces, next) = rewrite_step(res, letter, h, None)?;
    let pow = if letter == Letter::R { r_pow(h) } else { l_pow(h) };
    let lhs = &res.matrix::<T>() * &pow;
    let rhs = &word_matrix(&pieces) * &next.matrix();
    let p = h.to_string().parse().unwrap_or(0);
    let mut rep = VerificationReport::new(format!("{res:?} {letter}^h"), p, p);
    rep.check(p, &lhs, &rhs);
    Ok(rep)
}

/// One row of the block table: the residual at a block boundary, the letter
/// it faces, and the parity (`true` = odd) of each quotient in the block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockIdentity {
    pub cf_class: CfClass,
    pub decomp: DecompCase,
    pub residual: Residual,
    pub first_letter: char,
    pub parities: Vec<bool>,
}

impl BlockIdentity {
    pub fn arity(&self) -> usize {
        self.parities.len()
    }

    fn letter(&self) -> Letter {
        if self.first_letter == 'R' {
            Letter::R
        } else {
            Letter::L
        }
    }

    /// The block table, one row per (class, case).
    pub fn table() -> Vec<BlockIdentity> {
        use CfClass::*;
        use DecompCase::*;
        use Residual as Rs;
        let row = |cf_class, decomp, residual, first_letter, parities: &[bool]| BlockIdentity {
            cf_class,
            decomp,
            residual,
            first_letter,
            parities: parities.to_vec(),
        };
        let (o, e) = (true, false);
        vec![
            row(CF1, TM, Rs::M, 'R', &[e, e]),
            row(CF1, TMR, Rs::A, 'L', &[e, e]),
            row(CF1, TMRJ, Rs::A, 'L', &[e, e]),
            row(CF2, TM, Rs::M, 'R', &[o, o, o, o, o, o]),
            row(CF2, TMR, Rs::C, 'L', &[o, o, o, o, o, o]),
            row(CF2, TMRJ, Rs::A, 'L', &[o, o, o, o, o, o]),
            row(CF3, TM, Rs::M, 'R', &[o, e, o, e]),
            row(CF3, TMR, Rs::C, 'L', &[e, o, e, o]),
            row(CF3, TMRJ, Rs::A, 'L', &[o, e]),
            row(CF4, TM, Rs::M, 'R', &[e, o, e, o]),
            row(CF4, TMR, Rs::A, 'L', &[o, e]),
            row(CF4, TMRJ, Rs::A, 'L', &[e, o, e, o]),
        ]
    }
}

/// Rewrite one block and compare both sides as exact matrices.
pub fn block_identity_check<T: Scalar>(bi: &BlockIdentity, quotients: &[T]) -> Result<VerificationReport> {
    if quotients.len() != bi.arity() {
        return Err(Error::Arity {
            expected: bi.arity(),
            got: quotients.len(),
        });
    }
    let mut lhs = bi.residual.matrix::<T>();
    let mut res = bi.residual;
    let mut emitted = Vec::new();
    let mut letter = bi.letter();
    for (i, (q, &odd)) in quotients.iter().zip(&bi.parities).enumerate() {
        if q.is_odd() != odd || !q.is_positive() {
            return Err(Error::Parity(format!(
                "quotient {i} = {q} should be a positive {} number",
                if odd { "odd" } else { "even" }
            )));
        }
        let pow = if letter == Letter::R { r_pow(q) } else { l_pow(q) };
        lhs = &lhs * &pow;
        let (pieces, next) = rewrite_step(res, letter, q, Some(i))?;
        emitted.extend(pieces);
        res = next;
        letter = letter.flip();
    }
    let rhs = &word_matrix(&emitted) * &res.matrix();
    let mut rep = VerificationReport::new(format!("{}-{} block", bi.cf_class, bi.decomp), 0, 0);
    rep.check(0, &lhs, &rhs);
    if res != bi.residual {
        rep.record(0, false, &format!("{res:?}"), &format!("{:?}", bi.residual));
    }
    Ok(rep)
}

/// Every admissible block with quotients in `1..=max`, in fixed-width arithmetic.
pub fn block_sweep(bi: &BlockIdentity, max: i64) -> VerificationReport {
    let choices: Vec<Vec<i128>> = bi
        .parities
        .iter()
        .map(|&odd| (1..=max as i128).filter(|v| (v % 2 == 1) == odd).collect())
        .collect();
    let mut total = VerificationReport::new(format!("{}-{} blocks in 1..={max}", bi.cf_class, bi.decomp), 1, max);
    let mut idx = vec![0usize; choices.len()];
    loop {
        let q: Vec<i128> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        match block_identity_check(bi, &q) {
            Ok(rep) if rep.is_pass() => total.passes += 1,
            Ok(rep) => total.failures.extend(rep.failures),
            Err(e) => {
                total.record(0, false, &format!("{q:?}"), &e);
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return total;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The expansion of `W(x)` (`W` = `M`, `MR` or `MRJ`) produced by rewriting,
/// with the output index of every emitted power that carries an input quotient.
#[derive(Clone, Debug)]
pub struct NaturalExpansion {
    /// Output quotients whose value is already final.
    pub quotients: Vec<BigInt>,
    /// Output index of the entry fed by each input index, when it is final and nonzero.
    pub source_index: HashMap<usize, usize>,
}

pub fn natural_expansion(case: DecompCase, input: &[BigInt]) -> Result<NaturalExpansion> {
    let mut feed: Vec<(Letter, BigInt, Option<usize>)> = Vec::new();
    let mut letter = Letter::R;
    if case == DecompCase::TMRJ {
        feed.push((Letter::R, BigInt::one(), None));
        letter = Letter::L;
    }
    for (i, a) in input.iter().enumerate() {
        let h = if i == 0 && case == DecompCase::TMR {
            a + 1
        } else {
            a.clone()
        };
        feed.push((letter, h, Some(i)));
        letter = letter.flip();
    }
    let mut res = Residual::M;
    let mut pieces = Vec::new();
    for (letter, h, src) in feed {
        let (p, next) = rewrite_step(res, letter, &h, src)?;
        pieces.extend(p);
        res = next;
    }
    // merge into alternating groups, dropping zero powers
    let mut groups: Vec<(Letter, BigInt, Vec<usize>)> = Vec::new();
    for p in pieces {
        if p.exp.is_zero() {
            continue;
        }
        match groups.last_mut() {
            Some((l, e, srcs)) if *l == p.letter => {
                *e += &p.exp;
                srcs.extend(p.source);
            }
            _ => groups.push((p.letter, p.exp, p.source.into_iter().collect())),
        }
    }
    if groups.first().is_some_and(|g| g.0 == Letter::L) {
        groups.insert(0, (Letter::R, BigInt::zero(), Vec::new()));
    }
    // the last group can still grow
    groups.pop();
    let mut source_index = HashMap::new();
    for (i, (_, _, srcs)) in groups.iter().enumerate() {
        for &s in srcs {
            source_index.insert(s, i);
        }
    }
    Ok(NaturalExpansion {
        quotients: groups.into_iter().map(|g| g.1).collect(),
        source_index,
    })
}

// ---------------------------------------------------------------------------
// Predicted tails

fn source_value(x: &QuasiPeriodicCF, i: i64) -> Result<BigInt> {
    x.quotient_at(i)
}

/// The expression in `k` for input index `step * k + offset`, which must lie past the prefix.
fn source_expr(x: &QuasiPeriodicCF, step: i64, offset: i64) -> Result<Expr> {
    let r = x.prefix.len() as i64;
    let s = x.period.len() as i64;
    debug_assert!(step % s == 0);
    let j = (offset - r).rem_euclid(s);
    let base = (offset - r - j) / s;
    let scale = step / s;
    let k_in = (Expr::int(scale) * Expr::k() + (Expr::Int(x.start.clone()) + base)).simplify();
    Ok(x.period[j as usize].substitute(&k_in).simplify())
}

fn check_tail_class(tc: &TailCase, x: &QuasiPeriodicCF) -> Result<()> {
    if x.is_finite() {
        return Err(Error::NotApplicable(
            "a tail needs an infinite continued fraction".into(),
        ));
    }
    let found = classify_qp(x, DEFAULT_HORIZON).class;
    if found != tc.cf_class {
        return Err(Error::ClassMismatch {
            expected: tc.cf_class.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

/// Whether every block from `k0` on meets the formula's size conditions.
///
/// Decided from the first blocks when all period entries are provably
/// nondecreasing in `k`, otherwise over `horizon` blocks.
pub fn applicability(tc: &TailCase, x: &QuasiPeriodicCF, k0: i64) -> bool {
    applicability_with_horizon(tc, x, k0, DEFAULT_HORIZON)
}

pub fn applicability_with_horizon(tc: &TailCase, x: &QuasiPeriodicCF, k0: i64, horizon: usize) -> bool {
    let rec = tc.label.recipe();
    if x.is_finite() || k0 < 1 {
        return false;
    }
    let monotone = x.period.iter().all(|e| e.is_nondecreasing(&x.start));
    let blocks = if monotone {
        // past the prefix each condition reads one fixed period slot with growing k
        let r = x.prefix.len() as i64;
        let s = x.period.len() as i64;
        let mut k = k0;
        while rec.block * k + rec.shift < r {
            k += 1;
        }
        (k - k0) + s * rec.block + 1
    } else {
        horizon as i64
    };
    (k0..k0 + blocks).all(|k| {
        rec.conditions
            .iter()
            .all(|&(o, min)| source_value(x, rec.block * k + rec.shift + o).is_ok_and(|v| v >= BigInt::from(min)))
    })
}

/// Smallest `k0 >= 1` (up to `limit`) from which the formula applies.
pub fn first_applicable_k0(tc: &TailCase, x: &QuasiPeriodicCF, limit: i64) -> Option<i64> {
    (1..=limit).find(|&k| applicability(tc, x, k))
}

/// The symbolic tail of `S(x)` for the formula `tc.label`, from block `k0` on.
///
/// When the input period length does not divide the block length, several
/// blocks are grouped into one period (`k` then counts groups). Blocks that
/// read the input's finite prefix are evaluated and placed in the result's prefix.
pub fn predicted_tail(tc: &TailCase, x: &QuasiPeriodicCF, k0: i64) -> Result<QuasiPeriodicCF> {
    check_tail_class(tc, x)?;
    if k0 < 1 {
        return Err(Error::InvalidArgument(format!("k0 must be at least 1, got {k0}")));
    }
    if !applicability(tc, x, k0) {
        return Err(Error::NotApplicable(format!(
            "size conditions of {} fail for blocks from k0={k0}",
            tc.label
        )));
    }
    let rec = tc.label.recipe();
    let r = x.prefix.len() as i64;
    let s = x.period.len() as i64;
    let b = rec.block;
    let group = b.lcm(&s) / b;
    let mut k_start = k0;
    while b * k_start + rec.shift < r {
        k_start += 1;
    }
    let mut prefix = Vec::new();
    for k in k0..k_start {
        for entry in &rec.entries {
            prefix.push(match *entry {
                Entry::One => BigInt::one(),
                Entry::Src(o, op) => op.eval(&source_value(x, b * k + rec.shift + o)?)?,
            });
        }
    }
    let mut period = Vec::new();
    for g in 0..group {
        for entry in &rec.entries {
            period.push(match *entry {
                Entry::One => Expr::int(1),
                Entry::Src(o, op) => {
                    // block k_start + group*(k - k_start) + g
                    let offset = b * (k_start * (1 - group) + g) + rec.shift + o;
                    op.expr(source_expr(x, b * group, offset)?).simplify()
                }
            });
        }
    }
    Ok(QuasiPeriodicCF::new(prefix, period, BigInt::from(k_start)))
}

// ---------------------------------------------------------------------------
// Alignment

/// Where an observed stream meets a predicted tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alignment {
    /// Observed index where the match starts.
    pub offset_observed: usize,
    /// Value of the predicted form's `k` at that point.
    pub offset_predicted_k: BigInt,
}

/// Search bound on both offsets used by [`align_tail`].
pub const MAX_ALIGN_OFFSET: usize = 64;

/// Smallest `(n, k')` such that `observed[n..]` equals the predicted form
/// evaluated from the period iteration `k = k'` on, for `horizon` terms.
pub fn align_tail(predicted: &QuasiPeriodicCF, observed: &[BigInt], horizon: usize) -> Result<Option<Alignment>> {
    align_tail_bounded(predicted, observed, horizon, MAX_ALIGN_OFFSET, MAX_ALIGN_OFFSET)
}

pub fn align_tail_bounded(
    predicted: &QuasiPeriodicCF,
    observed: &[BigInt],
    horizon: usize,
    max_n: usize,
    max_k: usize,
) -> Result<Option<Alignment>> {
    if predicted.is_finite() {
        return Err(Error::InvalidArgument("predicted tail must be periodic".into()));
    }
    let r = predicted.prefix.len();
    let s = predicted.period.len();
    let pred = predicted.terms(r + s * max_k + horizon)?;
    for n in 0..=max_n {
        if n + horizon > observed.len() {
            break;
        }
        let obs = &observed[n..n + horizon];
        for step in 0..max_k {
            let o = r + s * step;
            if &pred[o..o + horizon] == obs {
                return Ok(Some(Alignment {
                    offset_observed: n,
                    offset_predicted_k: &predicted.start + BigInt::from(step),
                }));
            }
        }
    }
    Ok(None)
}

/// Offsets `(i, j)` with `a[i..i+horizon] == b[j..j+horizon]`, both at most `max_offset`.
pub fn shared_tail(a: &[BigInt], b: &[BigInt], horizon: usize, max_offset: usize) -> Option<(usize, usize)> {
    for i in 0..=max_offset {
        for j in 0..=max_offset {
            if i + horizon <= a.len() && j + horizon <= b.len() && a[i..i + horizon] == b[j..j + horizon] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Exact alignment of the observed expansion of `S(x)` with the rewriting of `W(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactAlignment {
    /// Observed index where block `k0` starts.
    pub n: usize,
    /// First aligned block.
    pub k0: i64,
    /// Index of that block in the expansion of `W(x)`.
    pub natural_index: usize,
    /// `+1` or `-1`: observed convergents equal `sign * T *` rewritten ones.
    pub sign: i8,
}

fn sign_normal(mut mx: Matrix) -> (Matrix, i8) {
    let first = [&mx.a, &mx.b, &mx.c, &mx.d].into_iter().find(|v| !v.is_zero()).cloned();
    if first.is_some_and(|v| v.is_negative()) {
        mx = mx.neg();
        (mx, -1)
    } else {
        (mx, 1)
    }
}

/// Prefix products `Q_n J^(n mod 2)` of a quotient list, `n = 0..=len`.
fn oriented_products(quotients: &[BigInt]) -> Vec<Matrix> {
    let mut acc = Matrix::identity();
    let mut out = vec![acc.clone()];
    for (i, q) in quotients.iter().enumerate() {
        acc = &acc * &if i % 2 == 0 { r_pow(q) } else { l_pow(q) };
        out.push(if (i + 1) % 2 == 1 { &acc * &j() } else { acc.clone() });
    }
    out
}

/// Locate block `k0` (the first applicable one at or after `k_min`) in the
/// observed expansion of `S(x)` by exact matrix comparison: with
/// `S = T W`, the observed prefix product at `n` must equal `+-T` times the
/// rewritten prefix product up to the block start (orientations included).
/// This pins the offset even for periodic inputs, where plain value matching
/// can lock onto a shifted period.
pub fn exact_alignment(
    sigma: &Transform,
    x: &QuasiPeriodicCF,
    tc: &TailCase,
    observed: &[BigInt],
    k_min: i64,
    max_blocks: i64,
) -> Result<Option<ExactAlignment>> {
    let dec = decompose(sigma.matrix())?;
    if dec.case != tc.decomp {
        return Err(Error::ClassMismatch {
            expected: tc.decomp.to_string(),
            found: dec.case.to_string(),
        });
    }
    let Some(k_first) = (k_min.max(1)..k_min.max(1) + max_blocks).find(|&k| applicability(tc, x, k)) else {
        return Ok(None);
    };
    let last_source = tc.label.first_source(k_first + max_blocks) + tc.label.block_len() as i64 + 4;
    let input = x.terms(last_source.max(1) as usize)?;
    let nat = natural_expansion(tc.decomp, &input)?;
    let nat_products = oriented_products(&nat.quotients);
    let mut seen: HashMap<Matrix, (usize, i8)> = HashMap::new();
    for (n, mx) in oriented_products(observed).into_iter().enumerate() {
        let (key, sign) = sign_normal(mx);
        seen.entry(key).or_insert((n, sign));
    }
    for k in k_first..k_first + max_blocks {
        let src = tc.label.first_source(k);
        let Some(&m_idx) = usize::try_from(src).ok().and_then(|s| nat.source_index.get(&s)) else {
            continue;
        };
        let g = &dec.t * &nat_products[m_idx];
        let (key, sign) = sign_normal(g);
        if let Some(&(n, obs_sign)) = seen.get(&key) {
            return Ok(Some(ExactAlignment {
                n,
                k0: k,
                natural_index: m_idx,
                sign: sign * obs_sign,
            }));
        }
    }
    Ok(None)
}

/// Convenience: decompose, classify and build the tail with the smallest admissible `k0`.
pub fn tail_for(sigma: &Transform, x: &QuasiPeriodicCF) -> Result<(TailCase, i64, QuasiPeriodicCF)> {
    let dec = decompose(sigma.matrix())?;
    let class = classify_qp(x, DEFAULT_HORIZON).class;
    if class == CfClass::Unknown {
        return Err(Error::NotApplicable("input is not of class CF1..CF4".into()));
    }
    let tc = TailCase::new(class, dec.case)?;
    let k0 = first_applicable_k0(&tc, x, DEFAULT_HORIZON as i64)
        .ok_or_else(|| Error::NotApplicable(format!("size conditions of {} never hold", tc.label)))?;
    let tail = predicted_tail(&tc, x, k0)?;
    Ok((tc, k0, tail))
}

/// Predict the tail of `S(x)` and check it against the streamed output over `horizon` quotients.
pub fn verify_tail(sigma: &Transform, x: &QuasiPeriodicCF, horizon: usize) -> Result<VerificationReport> {
    let (tc, k0, tail) = tail_for(sigma, x)?;
    let count = horizon + 2 * MAX_ALIGN_OFFSET;
    let observed = crate::gosper::apply_lft_stream(sigma, x.stream(), count).take_terms(count)?;
    let mut rep = VerificationReport::new(format!("tail {} from k0={k0}", tc.label), 0, horizon as i64 - 1);
    match align_tail(&tail, &observed, horizon)? {
        Some(al) => {
            rep.passes = horizon;
            rep.p_range = (al.offset_observed as i64, (al.offset_observed + horizon) as i64 - 1);
            rep.note(format!(
                "output index {} meets period k={}",
                al.offset_observed, al.offset_predicted_k
            ));
        }
        None => {
            // report the first disagreement after the exact block start, if one was found
            let n = exact_alignment(sigma, x, &tc, &observed, k0, DEFAULT_HORIZON as i64)?.map_or(0, |a| a.n);
            let pred = tail.terms(horizon)?;
            let obs = &observed[n..n + horizon];
            let i = (0..horizon).find(|&i| pred[i] != obs[i]).unwrap_or(0);
            rep.record((n + i) as i64, false, &obs[i], &pred[i]);
        }
    }
    Ok(rep)
}
