mod cli;

use std::fmt::Display;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::Parser;
use num_bigint::BigUint;
use serde_json::json;

use ordtope::audit::{self, AuditConfig, AuditError, ClaimParams};
use ordtope::codes::{g_decode_value, g_encode, l_encode_declared, CodeError};
use ordtope::extras::{self, ExtrasError};
use ordtope::numeric::{gen_primes, FixedLog, NumericError, PrimeBasis, PrimeSequence};
use ordtope::order::{
    order_curve, order_curve_of, order_search, OrderError, Preimage, RankOracle, RankedDomain, Strategy,
};
use ordtope::transforms::{self, TransformError};

use cli::{Cli, Command, Format, Global};

/// `print!` that exits quietly when the reader closes the pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            return Err(malformed(e));
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

const SCHEMA: &str = include_str!("../schema/audit-report.schema.json");

/// Failure classes, one exit code each.
#[derive(Debug)]
enum Failure {
    Malformed(String),
    NotInDomain(String),
    Absent(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::NotInDomain(_) => 3,
            Failure::Absent(_) => 4,
            Failure::Budget(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Malformed(m) | Failure::NotInDomain(m) | Failure::Absent(m) | Failure::Budget(m) => m,
        }
    }
}

fn malformed(e: impl Display) -> Failure {
    Failure::Malformed(e.to_string())
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        malformed(e)
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::NotInFactorialDomain { .. } | CodeError::ZeroCode => {
                Failure::NotInDomain(format!("not-in-factorial-domain: {e}"))
            }
            other => malformed(other),
        }
    }
}

impl From<OrderError> for Failure {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::Budget(m) => Failure::Budget(format!("budget exceeded: {m}")),
            other => malformed(other),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Budget(m) => Failure::Budget(format!("budget exceeded: {m}")),
            other => malformed(other),
        }
    }
}

impl From<AuditError> for Failure {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::Order(o) => o.into(),
            AuditError::Transform(t) => t.into(),
            other => malformed(other),
        }
    }
}

impl From<ExtrasError> for Failure {
    fn from(e: ExtrasError) -> Self {
        malformed(e)
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, Failure>
where
    T::Err: Display,
{
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|e| Failure::Malformed(format!("bad list entry {x:?}: {e}")))
        })
        .collect()
}

/// `first:m` or `prog:a:d`; a progression takes `count` primes.
fn parse_basis(spec: &str, count: usize, digits: u32) -> Result<PrimeBasis, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| Failure::Malformed(format!("bad basis {spec:?}")))
    };
    let basis = match parts.as_slice() {
        ["first", m] => {
            let m = num(m)? as usize;
            if m < count {
                return Err(Failure::Malformed(format!(
                    "basis {spec} has {m} primes, {count} needed"
                )));
            }
            gen_primes(m, PrimeSequence::First, digits)?
        }
        ["prog", a, d] => gen_primes(
            count,
            PrimeSequence::Progression {
                start: num(a)?,
                step: num(d)?,
            },
            digits,
        )?,
        _ => {
            return Err(Failure::Malformed(format!(
                "basis must be first:m or prog:a:d, got {spec:?}"
            )))
        }
    };
    Ok(basis)
}

fn basis_for(spec: Option<&str>, count: usize, digits: u32) -> Result<Arc<PrimeBasis>, Failure> {
    let basis = match spec {
        Some(s) => parse_basis(s, count, digits)?,
        None => gen_primes(count.max(1), PrimeSequence::First, digits)?,
    };
    Ok(Arc::new(basis))
}

fn join<T: Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(malformed)?;
    outln!("{s}");
    Ok(())
}

fn oracle(
    g: &Global,
    basis: Arc<PrimeBasis>,
    n: usize,
    max_exponent: u32,
) -> Result<RankOracle, Failure> {
    Ok(RankOracle::new(
        basis,
        n,
        max_exponent,
        g.digits,
        Strategy::MeetInTheMiddle,
        g.budget,
    )?)
}

/// Target at the oracle's precision; `None` when it has more digits than
/// any code can carry.
fn target_at(target: &str, digits: u32) -> Result<Option<FixedLog>, Failure> {
    let t: FixedLog = target.parse()?;
    if t.digits() <= digits {
        return Ok(t.rescaled(digits));
    }
    let cut = t.truncated(digits);
    Ok(if cut.rescaled(t.digits()).as_ref() == Some(&t) {
        Some(cut)
    } else {
        None
    })
}

/// Order curves of the three JST codes, one block per code.
fn jst_curves_csv(codes: &transforms::JstCodes) -> String {
    let curves = [
        ("code1", order_curve_of(codes.code1.clone())),
        ("code2", order_curve_of(codes.code2.clone())),
        ("code3", order_curve_of(codes.code3.clone())),
    ];
    let mut out = String::from("code,rank,value_mantissa,digits,preimage\n");
    for (name, curve) in curves {
        for line in curve.to_csv().lines().skip(1) {
            out.push_str(name);
            out.push(',');
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    match cli.command {
        Command::Encode {
            kind,
            basis,
            exponents,
        } => {
            let a: Vec<u32> = parse_list(&exponents)?;
            let basis = basis_for(basis.as_deref(), a.len(), g.digits)?;
            if kind.g {
                let code = g_encode(&a, &basis)?;
                match g.format {
                    Format::Json => print_json(&json!({ "g": code.value().to_string() }))?,
                    _ => outln!("{}", code.value()),
                }
            } else {
                let max = a.iter().copied().max().unwrap_or(0);
                let code = l_encode_declared(&a, &basis, g.digits, max)?;
                if let Some(w) = code.warning() {
                    eprintln!("warning: {} digits given, {} needed to preserve order", w.digits, w.required);
                }
                let sum = code.sum();
                match g.format {
                    Format::Json => print_json(&json!({
                        "mantissa": sum.mantissa().to_string(),
                        "digits": sum.digits(),
                        "value": sum.to_string(),
                    }))?,
                    Format::Csv => outln!("{},{}", sum.mantissa(), sum.digits()),
                    Format::Text => outln!("{sum}"),
                }
            }
        }
        Command::Decode {
            kind,
            basis,
            max_exponent,
            length,
            value,
        } => {
            let b = parse_basis(&basis, length.unwrap_or(0), g.digits)?;
            if kind.g {
                let v: BigUint = value
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Malformed(format!("not a natural number: {value:?}")))?;
                let a = g_decode_value(&v, length.unwrap_or(b.len()), &b)?;
                outln!("{}", join(&a));
            } else {
                let b = Arc::new(b);
                let n = b.len();
                let o = oracle(&g, b, n, max_exponent)?;
                let t = target_at(&value, g.digits)?
                    .ok_or_else(|| Failure::Absent(format!("no code equals {value}")))?;
                match order_search(&t, &o)?.preimage {
                    Some(a) => outln!("{}", join(&a)),
                    None => return Err(Failure::Absent(format!("no code equals {value}"))),
                }
            }
        }
        Command::OrderCurve {
            n,
            basis,
            max_exponent,
        } => {
            let b = basis_for(basis.as_deref(), n, g.digits)?;
            let o = oracle(&g, b, n, max_exponent)?;
            let size = o.size();
            if size > g.budget {
                return Err(Failure::Budget(format!(
                    "budget exceeded: {size} codes above {}",
                    g.budget
                )));
            }
            let curve = order_curve(
                (0..size)
                    .map(|i| {
                        (
                            o.value_at_index(i),
                            Preimage::Exponents(o.exponents_at_index(i)),
                        )
                    })
                    .collect(),
            );
            match g.format {
                Format::Json => print_json(&curve)?,
                _ => out!("{}", curve.to_csv()),
            }
        }
        Command::Search {
            n,
            basis,
            max_exponent,
            target,
        } => {
            let b = basis_for(basis.as_deref(), n, g.digits)?;
            let o = oracle(&g, b, n, max_exponent)?;
            let t = target_at(&target, g.digits)?;
            let found = match t {
                Some(t) => order_search(&t, &o)?,
                None => {
                    return Err(Failure::Absent(format!("no code equals {target}")));
                }
            };
            match g.format {
                Format::Json => print_json(&found)?,
                _ => {
                    if let Some(a) = &found.preimage {
                        outln!(
                            "preimage={} rank={} comparisons={}",
                            join(a),
                            found.rank.unwrap_or_default(),
                            found.comparisons
                        );
                    }
                }
            }
            if found.preimage.is_none() {
                return Err(Failure::Absent(format!(
                    "no code equals {target} ({} comparisons)",
                    found.comparisons
                )));
            }
        }
        Command::Audit {
            claims,
            n,
            primes,
            k,
            m,
            exp_bound,
            grid,
            targets,
            schema,
        } => {
            if schema {
                out!("{SCHEMA}");
                return Ok(());
            }
            let cfg = AuditConfig {
                seed: g.seed,
                digits: g.digits,
                budget: g.budget,
                timings: g.timings,
            };
            let params = ClaimParams {
                n,
                primes,
                k_blocks: k,
                m_blocks: m,
                exponent_bound: exp_bound,
                grid,
                targets,
            };
            let reports = audit::run_claims(&claims, &cfg, &params)?;
            print_json(&reports)?;
        }
        Command::Jst {
            k,
            m,
            exp_bound,
            audit,
        } => {
            if audit {
                let reports = transforms::audit_jst_orders(k, m, exp_bound, g.seed, g.digits)?;
                print_json(&reports)?;
                return Ok(());
            }
            let s = transforms::build_jst(k, m, g.seed)?;
            let basis = gen_primes(2 * (k + m), PrimeSequence::First, g.digits)?;
            let codes = transforms::jst_lcodes(&s, &basis, g.digits, exp_bound)?;
            match g.format {
                Format::Csv => out!("{}", jst_curves_csv(&codes)),
                _ => print_json(&json!({ "matrix": s, "codes": codes }))?,
            }
        }
        Command::Sphere { n, samples, stats } => {
            if stats {
                print_json(&extras::concentration_stats(n, samples, g.seed)?)?;
            } else {
                let pts = extras::sibuya_points(n, samples, g.seed)?;
                match g.format {
                    Format::Json => print_json(&pts)?,
                    _ => {
                        for p in pts {
                            outln!("{}", join(p.coords()));
                        }
                    }
                }
            }
        }
        Command::Beadsort { width, values } => {
            let v: Vec<u64> = parse_list(&values)?;
            outln!("{}", join(&extras::bead_sort(&v, width)?));
        }
        Command::Bench { grid, targets } => {
            let cfg = AuditConfig {
                seed: g.seed,
                digits: g.digits,
                budget: g.budget,
                timings: g.timings,
            };
            let rows = audit::bench(&grid, targets, &cfg)?;
            match g.format {
                Format::Json => print_json(&rows)?,
                _ => out!("{}", audit::bench_csv(&rows, g.timings)),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
