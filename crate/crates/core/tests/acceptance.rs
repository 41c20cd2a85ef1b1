//! Acceptance gate: ten exact checks, one status line each.
//!
//! Runs as a plain binary (no libtest harness) so the lines print in order.

use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use lftcf::cf::{cf_of_rational, convergents_of, format_cf, parse_cf, value_of, Expr, QuasiPeriodicCF};
use lftcf::det2::{case_predicates, decompose, identity_sweep, DecompCase};
use lftcf::error::Error;
use lftcf::exact::lft_apply;
use lftcf::families::{
    family_stream, hurwitz_bp_closed, hurwitz_hp_closed, komatsu_special_check, sample_families, Family,
};
use lftcf::gosper::{apply_lft_finite, apply_lft_stream};
use lftcf::leaping::{recurrence_for, verify_leaping, verify_recurrence, LeapingContext};
use lftcf::sample::{self, SampleRng};
use lftcf::tails::{
    align_tail, block_sweep, first_applicable_k0, predicted_tail, shared_tail, BlockIdentity, TailCase, TailLabel,
};
use lftcf::{Matrix, Transform};

type Outcome = Result<String, String>;
type Criterion<'a> = dyn Fn() -> Outcome + 'a;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Outcome {
    let rep = identity_sweep(-20, 20);
    if rep.is_pass() {
        Ok(format!("{} identity instances for h in [-20, 20]", rep.passes))
    } else {
        Err(rep.to_string())
    }
}

fn criterion_2() -> Outcome {
    let mut rng = sample::rng(2);
    let mut counts = [0usize; 3];
    for _ in 0..1000 {
        let s = sample::det2(&mut rng, 50);
        let preds = case_predicates(&s);
        if preds.iter().filter(|&&b| b).count() != 1 {
            return Err(format!("{s}: predicates {preds:?} not exactly one"));
        }
        let dec = decompose(&s).map_err(|e| format!("{s}: {e}"))?;
        if dec.t.det().magnitude() != &One::one() {
            return Err(format!("{s}: det T = {}", dec.t.det()));
        }
        if &dec.t * &dec.case.word::<BigInt>() != s {
            return Err(format!("{s}: T*W = {}", &dec.t * &dec.case.word::<BigInt>()));
        }
        let idx = DecompCase::ALL.iter().position(|c| *c == dec.case).unwrap();
        if !preds[idx] {
            return Err(format!("{s}: case {} disagrees with predicates", dec.case));
        }
        counts[idx] += 1;
    }
    Ok(format!("1000 matrices, cases TM/TMR/TMRJ = {counts:?}"))
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for bi in BlockIdentity::table() {
        let rep = block_sweep(&bi, 15);
        if !rep.is_pass() {
            return Err(rep.to_string());
        }
        total += rep.passes;
    }
    Ok(format!("12 rows, {total} blocks with quotients in [1, 15]"))
}

/// A random instance of `tc` whose tail applies from some `k0 <= 64`.
fn tail_instance(rng: &mut SampleRng, tc: &TailCase) -> (Transform, QuasiPeriodicCF, i64) {
    loop {
        let x = sample::class_member(rng, tc.cf_class, 30);
        let Some(k0) = first_applicable_k0(tc, &x, 64) else {
            continue;
        };
        let t = sample::unimodular(rng, 9);
        let sigma = Transform::new(&t * &tc.decomp.word::<BigInt>()).unwrap();
        return (sigma, x, k0);
    }
}

fn criterion_4() -> Outcome {
    let mut rng = sample::rng(4);
    let mut n = 0;
    for tc in TailCase::all() {
        for _ in 0..50 {
            let (sigma, x, k0) = tail_instance(&mut rng, &tc);
            let pred = predicted_tail(&tc, &x, k0).map_err(|e| format!("{tc} {x}: {e}"))?;
            let obs = apply_lft_stream(&sigma, x.stream(), 300)
                .take_terms(300)
                .map_err(|e| e.to_string())?;
            match align_tail(&pred, &obs, 200) {
                Ok(Some(_)) => n += 1,
                other => {
                    return Err(format!(
                        "{tc}, sigma {}, x {x}: no alignment ({other:?})",
                        sigma.matrix()
                    ))
                }
            }
        }
    }
    Ok(format!("{n} instances aligned over 200 quotients"))
}

fn criterion_5() -> Outcome {
    let mut rng = sample::rng(5);
    for _ in 0..100 {
        let t = Transform::new(sample::unimodular(&mut rng, 9)).unwrap();
        let x = sample::infinite_cf(&mut rng);
        let input = x.terms(300).map_err(|e| e.to_string())?;
        let out = apply_lft_stream(&t, x.stream(), 300)
            .take_terms(300)
            .map_err(|e| e.to_string())?;
        if shared_tail(&input, &out, 200, 64).is_none() {
            return Err(format!("{} on {x}: no shared tail", t.matrix()));
        }
    }
    let mut poles = 0;
    for _ in 0..500 {
        let sigma = loop {
            let m = Matrix::from_i64(
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
            );
            if let Ok(s) = Transform::new(m) {
                break s;
            }
        };
        let cf = sample::rational_cf(&mut rng);
        let x = value_of(&cf).map_err(|e| e.to_string())?;
        let direct = lft_apply(&sigma, &x);
        let streamed = apply_lft_finite(&sigma, &cf).and_then(|v| value_of(&v));
        match (direct, streamed) {
            (Ok(a), Ok(b)) if a == b => {}
            (Err(Error::Pole), Err(Error::Pole)) => poles += 1,
            (a, b) => return Err(format!("{} at {x}: direct {a:?}, streamed {b:?}", sigma.matrix())),
        }
    }
    Ok(format!(
        "100 unimodular tails shared; 500 rationals exact ({poles} poles on both sides)"
    ))
}

/// Sample families under several factors, plus random class members for every branch.
fn leaping_instances() -> Vec<(Transform, QuasiPeriodicCF)> {
    let ts = [
        Matrix::from_i64(1, 0, 0, 1),
        Matrix::from_i64(2, 1, 1, 1),
        Matrix::from_i64(-3, 2, 1, -1),
    ];
    let mut out = Vec::new();
    for f in sample_families() {
        let x = family_stream(&f).unwrap();
        for case in DecompCase::ALL {
            for t in &ts {
                out.push((Transform::new(t * &case.word::<BigInt>()).unwrap(), x.clone()));
            }
        }
    }
    let mut rng = sample::rng(6);
    for tc in TailCase::all() {
        for _ in 0..10 {
            let (sigma, x, _) = tail_instance(&mut rng, &tc);
            out.push((sigma, x));
        }
    }
    out
}

fn criterion_6(instances: &[LeapingContext]) -> Outcome {
    let mut counts = [0usize; 3];
    for ctx in instances {
        let Some(rec) = recurrence_for(ctx.tail_case.label) else {
            continue;
        };
        let rep = verify_recurrence(ctx, 30).map_err(|e| e.to_string())?;
        if !rep.is_pass() {
            return Err(format!("{} on {}: {rep}", ctx.sigma.matrix(), ctx.x));
        }
        counts[rec as usize] += 1;
    }
    if counts.contains(&0) {
        return Err(format!("some recurrence never exercised: {counts:?}"));
    }
    Ok(format!(
        "rec1/rec2/rec3 on {}/{}/{} instances, p = 4..30",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_7(instances: &[LeapingContext]) -> Outcome {
    let (mut eq, mut eq4, mut worst) = (0, 0, i64::MIN);
    for ctx in instances {
        let label = ctx.tail_case.label;
        let p_max = if recurrence_for(label).is_some() { 30 } else { 40 };
        let rep = verify_leaping(ctx, p_max).map_err(|e| e.to_string())?;
        if !rep.is_pass() {
            return Err(format!("{} on {}: {rep}", ctx.sigma.matrix(), ctx.x));
        }
        if let Some(th) = rep.threshold {
            let beyond = th - label.first_source(ctx.k0);
            if beyond > 10 {
                return Err(format!(
                    "{} on {}: threshold {th} is {beyond} past alignment",
                    ctx.sigma.matrix(),
                    ctx.x
                ));
            }
            worst = worst.max(beyond);
            eq4 += 1;
        } else {
            eq += 1;
        }
    }
    Ok(format!("eqconv1-3 (with CF2 unreduced form) on {eq} instances; eqconv4 on {eq4}, threshold at most {worst} past alignment"))
}

fn criterion_8() -> Outcome {
    for a in 1..=9 {
        for n in 1..=9 {
            let x = family_stream(&Family::Hurwitz { a, n }).unwrap();
            let conv = convergents_of(&x.terms(31).unwrap());
            for p in 0..=30 {
                let (num, den) = hurwitz_hp_closed(a, n, p);
                if BigRational::new(num.clone(), den.clone()) != conv[p as usize].value() {
                    return Err(format!("H_{p}({a},{n}): closed {num}/{den}"));
                }
            }
        }
    }
    let mut rng = sample::rng(8);
    let mut draws = 0;
    while draws < 200 {
        let sigma = Transform::new(sample::det2(&mut rng, 9)).unwrap();
        let (a, n, p) = (rng.gen_range(1..=9), rng.gen_range(1..=9), rng.gen_range(0..=30));
        let (num, den) = hurwitz_hp_closed(a, n, p);
        let direct = match lft_apply(&sigma, &BigRational::new(num, den)) {
            Ok(v) => v,
            Err(Error::Pole) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let closed = hurwitz_bp_closed(&sigma, a, n, p).map_err(|e| e.to_string())?;
        if closed != direct {
            return Err(format!(
                "B_{p} for h({a},{n}), sigma {}: {closed} vs {direct}",
                sigma.matrix()
            ));
        }
        draws += 1;
    }
    for (a, n) in [(4, 1), (6, 1), (4, 3)] {
        let rep = komatsu_special_check(a, n, 20).map_err(|e| e.to_string())?;
        if !rep.is_pass() {
            return Err(rep.to_string());
        }
    }
    Ok("H_p closed form for a, n in [1, 9], p <= 30; 200 B_p draws; U_3p/V_3p = B_(p-1) for 3 cases".into())
}

fn criterion_9() -> Outcome {
    let two = QuasiPeriodicCF::constant_period(&[2]);
    let m = Transform::from_i64(1, 1, 1, -1).unwrap();
    let out = apply_lft_stream(&m, two.stream(), 100)
        .take_terms(100)
        .map_err(|e| e.to_string())?;
    if out != vec![BigInt::from(2); 100] {
        return Err(format!("M on [2,2,..] gave {:?}", &out[..10]));
    }
    let mr = Transform::from_i64(1, 2, 1, 0).unwrap();
    let out = apply_lft_stream(&mr, two.stream(), 100)
        .take_terms(100)
        .map_err(|e| e.to_string())?;
    let tail = predicted_tail(&TailCase::from_label(TailLabel::T1_2), &two, 1).map_err(|e| e.to_string())?;
    if out[0] != BigInt::one() || out[1..] != tail.terms(99).unwrap()[..] || tail.terms(2).unwrap() != ints(&[1, 4]) {
        return Err(format!("MR on [2,2,..] gave {:?}, tail {tail}", &out[..10]));
    }
    Ok("M fixes [2,2,..]; MR gives [1; 1, 4, 1, 4, ..] = 1 followed by tail t1.2".into())
}

fn random_expr(rng: &mut SampleRng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.4) {
            Expr::k()
        } else {
            Expr::int(rng.gen_range(-9..=30))
        };
    }
    let a = random_expr(rng, depth - 1);
    let b = random_expr(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => a + b,
        1 => a - b,
        2 => a * b,
        3 => a / b,
        _ => a.pow(if rng.gen_bool(0.5) {
            Expr::k()
        } else {
            Expr::int(rng.gen_range(0..=4))
        }),
    }
}

fn criterion_10() -> Outcome {
    let mut rng = sample::rng(10);
    for _ in 0..500 {
        let r = rng.gen_range(0..=3);
        let prefix: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-5..=40))).collect();
        let qp = if rng.gen_bool(0.15) && r > 0 {
            QuasiPeriodicCF::finite(prefix)
        } else {
            let s = rng.gen_range(1..=4);
            let period = (0..s).map(|_| random_expr(&mut rng, 3)).collect();
            QuasiPeriodicCF::new(prefix, period, BigInt::from(rng.gen_range(0..=5)))
        };
        let text = format_cf(&qp);
        let back = parse_cf(&text).map_err(|e| format!("{text}: {e}"))?;
        if back != qp || format_cf(&back) != text {
            return Err(format!("round trip changed {text} into {}", format_cf(&back)));
        }
    }
    // independent values: partial sums of the series for e, sin 1 and cos 1
    let mut e = BigRational::zero();
    let (mut sin1, mut cos1) = (BigRational::zero(), BigRational::zero());
    let mut fact = BigInt::one();
    for i in 0..40u32 {
        if i > 0 {
            fact *= i;
        }
        let term = BigRational::new(BigInt::one(), fact.clone());
        e += &term;
        let sign = if (i / 2) % 2 == 0 { term.clone() } else { -term.clone() };
        if i % 2 == 0 {
            cos1 += sign;
        } else {
            sin1 += sign;
        }
    }
    let one = BigRational::one();
    let cases = [
        (
            "[2; 1, 2*k, 1 @ k=1..]",
            ints(&[2, 1, 2, 1, 1, 4, 1, 1, 6, 1]),
            e.clone(),
        ),
        (
            "[1; 2*k-1, 1 @ k=1..]",
            ints(&[1, 1, 1, 3, 1, 5, 1, 7, 1, 9]),
            &sin1 / &cos1,
        ),
        (
            "[0; 4*k+2 @ k=0..]",
            ints(&[0, 2, 6, 10, 14, 18, 22, 26]),
            (&e - &one) / (&e + &one),
        ),
    ];
    for (text, printed, value) in cases {
        let qp = parse_cf(text).map_err(|e| format!("{text}: {e}"))?;
        let terms = qp.terms(printed.len()).map_err(|e| e.to_string())?;
        if terms != printed {
            return Err(format!("{text} gives {terms:?}"));
        }
        let oracle = cf_of_rational(&value);
        if oracle[..printed.len()] != printed[..] {
            return Err(format!("series oracle for {text} gives {:?}", &oracle[..printed.len()]));
        }
    }
    Ok("500 random round trips; e, tan 1, (e-1)/(e+1) match printed terms and series values".into())
}

fn main() {
    let started = Instant::now();
    let contexts: Vec<LeapingContext> = leaping_instances()
        .iter()
        .map(|(s, x)| LeapingContext::establish(s, x).unwrap_or_else(|e| panic!("{} on {x}: {e}", s.matrix())))
        .collect();

    let criteria: Vec<(&str, Box<Criterion<'_>>)> = vec![
        ("commutation identities", Box::new(criterion_1)),
        ("determinant 2 decomposition", Box::new(criterion_2)),
        ("block identities", Box::new(criterion_3)),
        ("tail predictions end to end", Box::new(criterion_4)),
        ("streaming oracle", Box::new(criterion_5)),
        ("recurrences", Box::new(|| criterion_6(&contexts))),
        ("leaping equalities", Box::new(|| criterion_7(&contexts))),
        ("families", Box::new(criterion_8)),
        ("worked fixed points", Box::new(criterion_9)),
        ("parser", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => writeln!(out, "[PASS] {:>2} {name}: {detail} ({secs:.1}s)", i + 1).unwrap(),
            Err(detail) => {
                failed += 1;
                writeln!(out, "[FAIL] {:>2} {name}: {detail} ({secs:.1}s)", i + 1).unwrap();
            }
        }
    }
    writeln!(
        out,
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    )
    .unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
