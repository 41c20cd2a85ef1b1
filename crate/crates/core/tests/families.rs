use lftcf::det2::DecompCase;
use lftcf::families::{family_stream, family_tail, sample_families};
use lftcf::gosper::apply_lft_stream;
use lftcf::leaping::{recurrence_for, verify_leaping, verify_recurrence, LeapingContext};
use lftcf::tails::align_tail;
use lftcf::{Matrix, Transform};

fn sigmas(case: DecompCase) -> Vec<Transform> {
    let w: Matrix = case.word();
    let ts = [
        Matrix::from_i64(1, 0, 0, 1),
        Matrix::from_i64(2, 1, 1, 1),
        Matrix::from_i64(-3, 2, 1, -1),
        Matrix::from_i64(0, 1, 1, 0),
    ];
    ts.iter().map(|t| Transform::new(t * &w).unwrap()).collect()
}

#[test]
fn family_tails_align_with_output() {
    for f in sample_families() {
        let x = family_stream(&f).unwrap();
        for case in DecompCase::ALL {
            let ft = family_tail(&f, case).unwrap();
            for sigma in sigmas(case) {
                let obs = apply_lft_stream(&sigma, x.stream(), 300).take_terms(300).unwrap();
                let al = align_tail(&ft.tail, &obs, 200).unwrap();
                assert!(al.is_some(), "{f} {case} {}", sigma.matrix());
            }
        }
    }
}

#[test]
fn leaping_on_families() {
    for f in sample_families() {
        let x = family_stream(&f).unwrap();
        for case in DecompCase::ALL {
            for sigma in sigmas(case) {
                let ctx = LeapingContext::establish(&sigma, &x).unwrap();
                if recurrence_for(ctx.tail_case.label).is_some() {
                    let rep = verify_recurrence(&ctx, 30).unwrap();
                    assert!(rep.is_pass(), "{f} {case} {}: {rep}", sigma.matrix());
                }
                let rep = verify_leaping(&ctx, 30).unwrap();
                assert!(rep.is_pass(), "{f} {case} {}: {rep}", sigma.matrix());
            }
        }
    }
}
