use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lftcf::cf::{classify_qp, parse_cf, QuasiPeriodicCF, DEFAULT_HORIZON};
use lftcf::det2::{decompose, identity_sweep, DecompCase};
use lftcf::families::{family_class, family_stream, family_tail, Family};
use lftcf::gosper::{apply_lft_finite, apply_lft_stream};
use lftcf::leaping::{verify_leaping, verify_recurrence, LeapingContext};
use lftcf::sample;
use lftcf::tails::{
    align_tail, block_sweep, exact_alignment, predicted_tail, tail_for, verify_tail, BlockIdentity, TailCase,
};
use lftcf::{Error, Integer, Matrix, Transform, VerificationReport};

#[derive(Parser)]
#[command(
    name = "lftcf",
    version,
    about = "Exact linear fractional transformations of continued fractions"
)]
struct Cli {
    /// Print JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LftArg {
    /// Matrix entries A,B,C,D of x -> (Ax+B)/(Cx+D), row-major
    #[arg(long, allow_hyphen_values = true)]
    lft: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first quotients of a continued fraction
    Expand {
        cf: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Stream a continued fraction through an LFT
    Transform {
        #[command(flatten)]
        lft: LftArg,
        cf: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Split a determinant +-2 matrix as T*M, T*M*R or T*M*R*J
    Decompose {
        #[command(flatten)]
        lft: LftArg,
    },
    /// Predict the tail of the image of a parity-class continued fraction
    PredictTail {
        #[command(flatten)]
        lft: LftArg,
        cf: String,
    },
    /// Check a prediction against the streamed output
    Verify {
        what: VerifyKind,
        #[command(flatten)]
        lft: LftArg,
        cf: String,
        #[arg(long, default_value_t = 30)]
        pmax: i64,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
        /// Seed for randomized checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hurwitz and Tasoev families
    Family {
        #[command(subcommand)]
        family: FamilyCmd,
        /// Also print the tail for the given decomposition case
        #[arg(long, global = true)]
        emit_tail: bool,
        #[arg(long, global = true, value_enum, default_value_t = CaseArg::Tm)]
        case: CaseArg,
        #[arg(long, global = true, default_value_t = 12)]
        terms: usize,
    },
    /// Run the identity and block sweeps plus a seeded tail check
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Tail,
    Recurrence,
    Leaping,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    #[value(name = "TM")]
    Tm,
    #[value(name = "TMR")]
    Tmr,
    #[value(name = "TMRJ")]
    Tmrj,
}

impl From<CaseArg> for DecompCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Tm => DecompCase::TM,
            CaseArg::Tmr => DecompCase::TMR,
            CaseArg::Tmrj => DecompCase::TMRJ,
        }
    }
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// h(a,n) = [a(1+kn)], k >= 0
    Hurwitz {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        n: i64,
    },
    /// t1(u,a) = [u a^k], k >= 1
    Tasoev1 {
        #[arg(long)]
        u: i64,
        #[arg(long)]
        a: i64,
    },
    /// t2(u,v,a) = [u a^k, v a^k], k >= 1
    Tasoev2 {
        #[arg(long)]
        u: i64,
        #[arg(long)]
        v: i64,
        #[arg(long)]
        a: i64,
    },
}

/// Exit status of a finished command.
enum Status {
    Ok,
    Failed,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::Singular => 2,
        Error::NotApplicable(_) | Error::ClassMismatch { .. } | Error::BadDeterminant(_) | Error::BranchRequired(_) => {
            3
        }
        _ => 1,
    }
}

fn parse_lft(s: &str) -> Result<Transform, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "--lft needs four comma-separated integers, got {s:?}"
        )));
    }
    let mut v = Vec::with_capacity(4);
    for p in parts {
        v.push(
            p.parse::<Integer>()
                .map_err(|_| Error::InvalidArgument(format!("not an integer: {p:?}")))?,
        );
    }
    let [a, b, c, d]: [Integer; 4] = v.try_into().unwrap();
    Transform::new(Matrix::new(a, b, c, d))
}

fn strings(v: &[Integer]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_json(m: &Matrix) -> Value {
    json!([[m.a.to_string(), m.b.to_string()], [m.c.to_string(), m.d.to_string()]])
}

fn print_terms(json: bool, terms: &[Integer]) {
    if json {
        println!("{}", json!({ "terms": strings(terms) }));
    } else {
        println!("{}", strings(terms).join(" "));
    }
}

fn print_report(json: bool, rep: &VerificationReport) -> Status {
    if json {
        println!("{}", serde_json::to_string(rep).unwrap());
    } else {
        println!("{rep}");
        for n in &rep.notes {
            println!("note: {n}");
        }
    }
    if rep.is_pass() {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn transform_terms(sigma: &Transform, x: &QuasiPeriodicCF, terms: usize) -> Result<Vec<Integer>, Error> {
    if x.is_finite() {
        let mut out = apply_lft_finite(sigma, &x.prefix)?;
        out.truncate(terms);
        Ok(out)
    } else {
        apply_lft_stream(sigma, x.stream(), terms).take_up_to(terms)
    }
}

fn run(cli: Cli) -> Result<Status, Error> {
    let json = cli.json;
    match cli.command {
        Command::Expand { cf, terms } => {
            let x = parse_cf(&cf)?;
            print_terms(json, &x.stream().take_up_to(terms)?);
        }
        Command::Transform { lft, cf, terms } => {
            let sigma = parse_lft(&lft.lft)?;
            let x = parse_cf(&cf)?;
            print_terms(json, &transform_terms(&sigma, &x, terms)?);
        }
        Command::Decompose { lft } => {
            let sigma = parse_lft(&lft.lft)?;
            let dec = decompose(sigma.matrix())?;
            if json {
                println!("{}", json!({ "case": dec.case.to_string(), "t": matrix_json(&dec.t) }));
            } else {
                println!("case={} T={}", dec.case, dec.t);
            }
        }
        Command::PredictTail { lft, cf } => {
            let sigma = parse_lft(&lft.lft)?;
            let x = parse_cf(&cf)?;
            let (tc, k0, tail) = tail_for(&sigma, &x)?;
            let observed = apply_lft_stream(&sigma, x.stream(), 400).take_terms(400)?;
            let start = exact_alignment(&sigma, &x, &tc, &observed, k0, DEFAULT_HORIZON as i64)?.map(|a| a.n);
            if json {
                println!(
                    "{}",
                    json!({
                        "class": tc.cf_class.to_string(),
                        "case": tc.decomp.to_string(),
                        "label": tc.label.to_string(),
                        "k0": k0,
                        "output_index": start,
                        "tail": tail.to_string(),
                    })
                );
            } else {
                println!("class={} case={} label={} k0={k0}", tc.cf_class, tc.decomp, tc.label);
                if let Some(n) = start {
                    println!("starts at output index {n}");
                }
                println!("{tail}");
            }
        }
        Command::Verify {
            what,
            lft,
            cf,
            pmax,
            horizon,
            seed: _,
        } => {
            let sigma = parse_lft(&lft.lft)?;
            let x = parse_cf(&cf)?;
            let rep = match what {
                VerifyKind::Tail => verify_tail(&sigma, &x, horizon)?,
                VerifyKind::Recurrence => verify_recurrence(&LeapingContext::establish(&sigma, &x)?, pmax)?,
                VerifyKind::Leaping => verify_leaping(&LeapingContext::establish(&sigma, &x)?, pmax)?,
            };
            return Ok(print_report(json, &rep));
        }
        Command::Family {
            family,
            emit_tail,
            case,
            terms,
        } => {
            let f = match family {
                FamilyCmd::Hurwitz { a, n } => Family::Hurwitz { a, n },
                FamilyCmd::Tasoev1 { u, a } => Family::Tasoev1 { u, a },
                FamilyCmd::Tasoev2 { u, v, a } => Family::Tasoev2 { u, v, a },
            };
            let x = family_stream(&f)?;
            let class = family_class(&f).unwrap_or_else(|_| classify_qp(&x, DEFAULT_HORIZON).class);
            let first = x.terms(terms)?;
            let tail = if emit_tail {
                Some(family_tail(&f, case.into())?)
            } else {
                None
            };
            if json {
                let mut v = json!({ "family": f.to_string(), "class": class.to_string(), "cf": x.to_string(), "terms": strings(&first) });
                if let Some(t) = &tail {
                    v["label"] = json!(t.case.label.to_string());
                    v["tail"] = json!(t.tail.to_string());
                }
                println!("{v}");
            } else {
                println!("{f} = {x} class={class}");
                println!("{}", strings(&first).join(" "));
                if let Some(t) = tail {
                    println!("{} tail {}: {}", t.case.decomp, t.case.label, t.tail);
                }
            }
        }
        Command::Selftest { seed } => return Ok(selftest(json, seed)),
    }
    Ok(Status::Ok)
}

fn selftest(json: bool, seed: u64) -> Status {
    let mut reports = vec![identity_sweep(-20, 20)];
    for bi in BlockIdentity::table() {
        reports.push(block_sweep(&bi, 9));
    }
    let mut rng = sample::rng(seed);
    for tc in TailCase::all() {
        let mut rep = VerificationReport::new(format!("random tails {}", tc.label), 0, 9);
        let mut i = 0;
        while i < 10 {
            let x = sample::class_member(&mut rng, tc.cf_class, 30);
            let Some(k0) = lftcf::tails::first_applicable_k0(&tc, &x, 64) else {
                continue;
            };
            let t = sample::unimodular(&mut rng, 9);
            let sigma = Transform::new(&t * &tc.decomp.word::<Integer>()).unwrap();
            let aligned = predicted_tail(&tc, &x, k0).and_then(|pred| {
                let obs = apply_lft_stream(&sigma, x.stream(), 300).take_terms(300)?;
                align_tail(&pred, &obs, 200)
            });
            rep.record(
                i,
                matches!(aligned, Ok(Some(_))),
                &format!("{} on {x}", sigma.matrix()),
                &"aligned",
            );
            i += 1;
        }
        reports.push(rep);
    }
    let ok = reports.iter().all(VerificationReport::is_pass);
    if json {
        println!("{}", json!({ "pass": ok, "reports": reports }));
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
