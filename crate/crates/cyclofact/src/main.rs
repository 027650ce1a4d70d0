use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclofact::arith::{factor_u64, v2};
use cyclofact::composed::{composed_product, oracle_composed, ComposedKind};
use cyclofact::construct::{construct_fm, construct_thm2, varshamov, ConstructionReport};
use cyclofact::cyclotomic::{
    factor_phi_2nr, factor_phi_coprime_composed, oracle_factor_cyclotomic, two_adic_profile,
    Factorization,
};
use cyclofact::lrs::{berlekamp_massey, product_sequence, LinearSequence};
use cyclofact::poly::{self, Polynomial};
use cyclofact::verify::{verify_table1, verify_table2, verify_table3, RowCheck};
use cyclofact::{Error, FieldTower};

/// Exact-arithmetic toolkit for finite fields: cyclotomic factorization,
/// composed products, irreducible-polynomial constructions, and linear
/// recurring sequences.
#[derive(Parser)]
#[command(name = "cyclofact", version)]
struct Cli {
    /// Seed for all randomized searches; falls back to CYCLOFACT_SEED, then 7.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Closed,
    Oracle,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mul,
    Sum,
    #[value(name = "circle-")]
    CircleMinus,
    #[value(name = "circle+")]
    CirclePlus,
}

impl From<KindArg> for ComposedKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Mul => ComposedKind::Mul,
            KindArg::Sum => ComposedKind::Sum,
            KindArg::CircleMinus => ComposedKind::CircleMinus,
            KindArg::CirclePlus => ComposedKind::CirclePlus,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a field tower and print its moduli.
    Field(FieldArgs),
    /// Cyclotomic factorization and two-adic profiles.
    Cyclo {
        #[command(subcommand)]
        sub: CycloCmd,
    },
    /// Composed products of two polynomials read from files.
    Composed(ComposedArgs),
    /// Irreducible-polynomial constructions.
    Construct {
        #[command(subcommand)]
        sub: ConstructCmd,
    },
    /// Linear recurring sequences.
    Lrs {
        #[command(subcommand)]
        sub: LrsCmd,
    },
    /// Recompute the published sample tables and report row-by-row.
    VerifyPaper {
        /// Which table to recompute.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field size q = p^s (a prime power).
    #[arg(long)]
    q: u64,
    /// Extension levels to construct eagerly.
    #[arg(long, default_value_t = 1)]
    level: usize,
}

#[derive(Subcommand)]
enum CycloCmd {
    /// Factor the n-th cyclotomic polynomial over F_q.
    Factor {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Print the two-adic profile (d_r, A, K, L) of q relative to r.
    Profile {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Args)]
struct ComposedArgs {
    /// Diamond operation.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Field size q = p^s.
    #[arg(long)]
    q: u64,
    /// File with the first polynomial (comma-separated ascending coefficients).
    f: std::path::PathBuf,
    /// File with the second polynomial.
    g: std::path::PathBuf,
    /// Cross-check against the brute-force root-pair oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Mobius product of minimal polynomials of root powers.
    Fm {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        /// Input polynomial, comma-separated ascending coefficients.
        #[arg(long)]
        f: String,
    },
    /// Varshamov quotient psi(x^r)/f(x).
    Varshamov {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        f: String,
    },
    /// Quotient f(x^r)/f(x), optionally substituted by x^(r^k).
    Thm2 {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum LrsCmd {
    /// Berlekamp-Massey complexity of the product of two sequences.
    Complexity {
        #[arg(long)]
        q: u64,
        /// Characteristic polynomial of the first sequence.
        #[arg(long)]
        char1: String,
        /// Initial terms of the first sequence, comma-separated.
        #[arg(long)]
        init1: String,
        #[arg(long)]
        char2: String,
        #[arg(long)]
        init2: String,
        /// How many product terms to feed Berlekamp-Massey.
        #[arg(long)]
        terms: usize,
        /// Also print the closed-form complexity prediction for
        /// two-power-order times odd-order characteristic polynomials.
        #[arg(long)]
        predict: bool,
    },
}

fn split_prime_power(q: u64) -> Result<(u64, usize), Error> {
    let fac = factor_u64(q);
    if fac.len() != 1 {
        return Err(Error::NotPrime(q));
    }
    Ok((fac[0].0, fac[0].1 as usize))
}

fn tower_for(q: u64, seed: u64) -> Result<FieldTower, Error> {
    let (p, s) = split_prime_power(q)?;
    FieldTower::new(p, s, seed)
}

fn factor_json(tower: &FieldTower, fac: &Factorization, cross_checked: Option<bool>) -> Value {
    let factors: Vec<Value> = fac
        .factors
        .iter()
        .map(|e| {
            json!({
                "coeffs": e.poly.to_int_string(tower),
                "degree": e.poly.deg().unwrap_or(0),
                "provenance": e.provenance,
            })
        })
        .collect();
    let mut obj = json!({
        "index": fac.index,
        "count": factors.len(),
        "factors": factors,
    });
    if let Some(c) = cross_checked {
        obj["cross_checked"] = json!(c);
    }
    obj
}

fn report_json(tower: &FieldTower, report: &ConstructionReport) -> Value {
    let hyps: Vec<Value> = report
        .hypotheses
        .iter()
        .map(|h| json!({"name": h.name, "passed": h.passed, "detail": h.detail}))
        .collect();
    let comps: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            json!({
                "d": c.d,
                "r_d": c.r_d.to_int_string(tower),
                "psi_d": c.psi_d.to_int_string(tower),
            })
        })
        .collect();
    json!({
        "result": report.result.to_int_string(tower),
        "degree": report.degree,
        "order": report.order.map(|o| o.to_string()),
        "hypotheses": hyps,
        "components": comps,
    })
}

fn rows_json(name: &str, rows: &[RowCheck]) -> Value {
    let all = rows.iter().all(|r| r.passed);
    json!({
        "table": name,
        "all_passed": all,
        "rows": rows.iter().map(|r| json!({
            "row": r.name,
            "passed": r.passed,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
    })
}

fn parse_init(tower: &FieldTower, text: &str) -> Result<Vec<Vec<u64>>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u128>()
                .map(|v| tower.fq_from_u128(v))
                .map_err(|e| Error::Parse(format!("bad initial term {t:?}: {e}")))
        })
        .collect()
}

fn run(cli: &Cli, seed: u64) -> Result<Value, Error> {
    match &cli.command {
        Command::Field(args) => {
            let tower = tower_for(args.q, seed)?;
            tower.ensure_level(args.level)?;
            let moduli: BTreeMap<String, Value> = tower
                .extension_moduli()
                .iter()
                .map(|(d, m)| {
                    (
                        d.to_string(),
                        json!(m.iter().map(|c| c.clone()).collect::<Vec<_>>()),
                    )
                })
                .collect();
            Ok(json!({
                "p": tower.p(),
                "s": tower.s(),
                "seed": tower.seed(),
                "base_modulus": tower.base_modulus_digits(),
                "moduli": moduli,
            }))
        }
        Command::Cyclo { sub } => match sub {
            CycloCmd::Factor { q, n, method } => {
                let tower = tower_for(*q, seed)?;
                let a = v2(*n as u128);
                let r = *n >> a;
                let closed = |tower: &FieldTower| -> Result<Factorization, Error> {
                    if a >= 1 {
                        factor_phi_2nr(tower, a, r)
                    } else if factor_u64(r).len() >= 2 {
                        factor_phi_coprime_composed(tower, r)
                    } else {
                        oracle_factor_cyclotomic(tower, *n)
                    }
                };
                match method {
                    Method::Closed => Ok(factor_json(&tower, &closed(&tower)?, None)),
                    Method::Oracle => Ok(factor_json(
                        &tower,
                        &oracle_factor_cyclotomic(&tower, *n)?,
                        None,
                    )),
                    Method::Auto => {
                        let got = closed(&tower)?;
                        let reference = oracle_factor_cyclotomic(&tower, *n)?;
                        let mut a_set = got.polys();
                        let mut b_set = reference.polys();
                        a_set.sort_by(|x, y| poly::canon_cmp(&tower, x, y));
                        b_set.sort_by(|x, y| poly::canon_cmp(&tower, x, y));
                        if a_set != b_set {
                            return Err(Error::HypothesisViolation(
                                "closed-form and oracle factorizations disagree".into(),
                            ));
                        }
                        Ok(factor_json(&tower, &got, Some(true)))
                    }
                }
            }
            CycloCmd::Profile { q, r } => {
                let tower = tower_for(*q, seed)?;
                let profile = two_adic_profile(&tower, *r)?;
                Ok(json!({
                    "q": q,
                    "r": r,
                    "d_r": profile.d_r,
                    "A": profile.a,
                    "K": profile.k,
                    "L": profile.l,
                }))
            }
        },
        Command::Composed(args) => {
            let tower = tower_for(args.q, seed)?;
            let read = |path: &std::path::Path| -> Result<Polynomial, Error> {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                Polynomial::parse(&tower, text.trim())
            };
            let f = read(&args.f)?;
            let g = read(&args.g)?;
            let kind: ComposedKind = args.kind.into();
            let result = composed_product(&tower, kind, &f, &g)?;
            let mut obj = json!({
                "kind": kind.name(),
                "result": result.to_int_string(&tower),
                "degree": result.deg().unwrap_or(0),
            });
            if args.oracle {
                let reference = oracle_composed(&tower, kind, &f, &g)?;
                obj["oracle_agrees"] = json!(reference == result);
            }
            Ok(obj)
        }
        Command::Construct { sub } => match sub {
            ConstructCmd::Fm { q, m, f } => {
                let tower = tower_for(*q, seed)?;
                let f = Polynomial::parse(&tower, f)?;
                Ok(report_json(&tower, &construct_fm(&tower, &f, *m)?))
            }
            ConstructCmd::Varshamov { q, r, f } => {
                let tower = tower_for(*q, seed)?;
                let f = Polynomial::parse(&tower, f)?;
                Ok(report_json(&tower, &varshamov(&tower, &f, *r)?))
            }
            ConstructCmd::Thm2 { q, r, f, k } => {
                let tower = tower_for(*q, seed)?;
                let f = Polynomial::parse(&tower, f)?;
                Ok(report_json(&tower, &construct_thm2(&tower, &f, *r, *k)?))
            }
        },
        Command::Lrs { sub } => match sub {
            LrsCmd::Complexity {
                q,
                char1,
                init1,
                char2,
                init2,
                terms,
                predict,
            } => {
                let tower = tower_for(*q, seed)?;
                let c1 = Polynomial::parse(&tower, char1)?;
                let c2 = Polynomial::parse(&tower, char2)?;
                let s = LinearSequence::new(&tower, c1.clone(), parse_init(&tower, init1)?)?;
                let t = LinearSequence::new(&tower, c2.clone(), parse_init(&tower, init2)?)?;
                let prod = product_sequence(&tower, &s, &t, *terms);
                let (minpoly, complexity) = berlekamp_massey(&tower, &prod);
                let mut obj = json!({
                    "terms": terms,
                    "complexity": complexity,
                    "minpoly": minpoly.to_int_string(&tower),
                });
                if *predict {
                    obj["predicted"] = json!(complexity_prediction(&tower, &c1, &c2)?);
                }
                Ok(obj)
            }
        },
        Command::VerifyPaper { table } => {
            let rows = match table {
                1 => verify_table1(seed)?,
                2 => verify_table2(seed)?,
                _ => verify_table3(seed)?,
            };
            Ok(rows_json(&format!("table {table}"), &rows))
        }
    }
}

/// Closed-form complexity prediction for a product of sequences whose
/// characteristic polynomials have orders 2^n and odd r: the factor degree
/// of the (2^n r)-indexed cyclotomic polynomial past the stable threshold,
/// 2^(n-K) * d_r.
fn complexity_prediction(
    tower: &FieldTower,
    c1: &Polynomial,
    c2: &Polynomial,
) -> Result<u64, Error> {
    let t1 = poly::poly_order(tower, c1)?;
    let t2 = poly::poly_order(tower, c2)?;
    let (two_part, odd) = if t2 % 2 == 0 { (t2, t1) } else { (t1, t2) };
    let n = v2(two_part);
    if two_part != 1u128 << n || odd % 2 == 0 || odd > u64::MAX as u128 {
        return Err(Error::HypothesisViolation(
            "prediction needs one two-power order and one odd order".into(),
        ));
    }
    let profile = two_adic_profile(tower, odd as u64)?;
    let shift = n.saturating_sub(profile.k);
    Ok(profile.d_r << shift)
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable"),
        Format::Text => {
            let mut out = String::new();
            render_text(value, "", &mut out);
            out
        }
    }
}

fn render_text(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(v, &key, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{prefix}[{i}]"), out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push_str(" = ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::LengthMismatch { .. } | Error::NotMonic => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or_else(|| {
        std::env::var("CYCLOFACT_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(7)
    });
    match run(&cli, seed) {
        Ok(value) => {
            println!("{}", render(&value, cli.format));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
