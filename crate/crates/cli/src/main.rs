use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use zetaforge::characters::characters_mod;
use zetaforge::constants::{constants_path_from_env, load_or_build};
use zetaforge::identities::{identity_residual, IdentityId};
use zetaforge::oracle::{hurwitz_em, zeta_derivative_em};
use zetaforge::rapid::{
    l_even_argument, l_odd_argument, odd_zeta, validate_all_variants, validate_variant, Ledger,
    RapidFormula, RapidMode, RapidParams, Variant,
};
use zetaforge::render::{render, render_f64, OutputFormat, Record};
use zetaforge::series::{
    log_gamma_series, shifted_hurwitz_derivative_series, shifted_hurwitz_series,
    zeta_neg_m_alpha_closed, zeta_neg_m_alpha_closed_complex, zeta_prime_neg_series,
    zeta_second_derivative_at_zero, ExpansionParams, FormulaId, SeriesResult,
};
use zetaforge::{ComplexScalar, PrecisionContext, ZetaError};

const SERIES_COLUMNS: &[&str] = &["formula_id", "value", "error_bound", "terms_used", "precision_bits"];
const IDENTITY_COLUMNS: &[&str] = &["identity_id", "s", "terms", "lhs", "rhs", "residual", "precision_bits", "note"];
const CHARACTER_COLUMNS: &[&str] = &["modulus", "index", "conductor", "parity", "primitive", "generators", "exponents"];
const VALIDATION_COLUMNS: &[&str] = &[
    "formula_id", "m", "q", "index", "variant", "verdict", "printed_value", "oracle_value", "abs_err",
    "rel_err", "corrected_value", "precision_bits",
];

#[derive(Parser)]
#[command(name = "zetaforge", version, about = "High-precision Hurwitz zeta series and their reference checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in bits
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Absolute tolerance every reported error bound must meet
    #[arg(long, global = true, default_value_t = 1e-30)]
    tol: f64,
    /// Cap on series terms
    #[arg(long, global = true, default_value_t = 10_000)]
    max_terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Discrepancy ledger (JSON lines) read by as-printed evaluations and written by `validate`
    #[arg(long, global = true)]
    ledger: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Validated,
    AsPrinted,
}

impl From<Mode> for RapidMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Validated => RapidMode::Validated,
            Mode::AsPrinted => RapidMode::AsPrinted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NegKind {
    /// zeta(-m, k + alpha) in closed form
    Value,
    /// d/ds zeta(s, 1 + alpha) at s = -m
    Derivative,
    /// d^2/ds^2 zeta(s, alpha) at s = 0 (m must be 0)
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    OddZeta,
    LogGamma,
    Zeta,
}

#[derive(Subcommand)]
enum Command {
    /// Riemann zeta from the reference oracle
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Hurwitz zeta (or an s-derivative) from the reference oracle
    Hurwitz {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        derivative: usize,
    },
    /// zeta(s, k + alpha) from the series in alpha
    Series {
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// r-th s-derivative of zeta(s, 1 + alpha) from the series in alpha
    Deriv {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Values and derivatives at non-positive integers
    Neg {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = NegKind::Value)]
        kind: NegKind,
    },
    /// Residuals of the classical identities (I, II, III, IV, gamma or all)
    Identities {
        #[arg(long, default_value = "all")]
        id: String,
        #[arg(long, allow_hyphen_values = true, default_value = "2")]
        s: String,
        #[arg(long, default_value_t = 80)]
        terms: usize,
    },
    /// log Gamma(1 + alpha) from its zeta series
    GammaSeries {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// zeta(2m+1) from the rapid series
    OddZeta {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Mode::Validated)]
        mode: Mode,
    },
    /// L(2m+1, chi) (even chi) or L(2m, chi) (odd chi) from the rapid series
    Lfunction {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Mode::Validated)]
        mode: Mode,
    },
    /// Dirichlet characters modulo q
    Characters {
        #[arg(long)]
        q: u64,
    },
    /// Compare printed rapid series against the oracle and update the ledger
    Validate {
        /// odd_zeta_rapid, l_odd_rapid, l_even_rapid or all
        #[arg(long, default_value = "all")]
        formula: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        index: Option<usize>,
        /// Evaluate every reading of every suspect site, not only the printed one
        #[arg(long)]
        all_variants: bool,
    },
    /// One row per parameter point
    #[command(alias = "sweep")]
    Table {
        #[arg(long, value_enum)]
        kind: SweepKind,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
}

struct Failure {
    exit: u8,
    error: ZetaError,
}

impl From<ZetaError> for Failure {
    fn from(error: ZetaError) -> Self {
        let exit = match error {
            ZetaError::Parse(_) | ZetaError::InvalidContext(_) => 2,
            _ => 1,
        };
        Failure { exit, error }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.error.code(), f.error);
            ExitCode::from(f.exit)
        }
    }
}

fn format_of(g: &Global) -> OutputFormat {
    match g.format {
        Format::Text => OutputFormat::Text,
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    }
}

fn scalar(ctx: &PrecisionContext, text: &str) -> Result<ComplexScalar, ZetaError> {
    ComplexScalar::parse(ctx.working_bits(), text)
}

/// Exact rational from `p/q`, an integer or a plain decimal.
fn exact_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Ok(r) = Rational::parse(t) {
        return Some(Rational::from(r));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.')?;
    if !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) || int.len() + frac.len() == 0 {
        return None;
    }
    let digits = Integer::parse(format!("{int}{frac}")).ok()?;
    let r = Rational::from((Integer::from(digits), Integer::from(10).pow(frac.len() as u32)));
    Some(if neg { -r } else { r })
}

fn checked(r: SeriesResult, ctx: &PrecisionContext) -> Result<SeriesResult, ZetaError> {
    if r.error_bound > ctx.target_tol() {
        return Err(ZetaError::PrecisionExhausted {
            max_terms: ctx.max_terms(),
            detail: format!("error bound {:e} exceeds --tol", r.error_bound),
        });
    }
    Ok(r)
}

fn series_out(r: SeriesResult, ctx: &PrecisionContext, g: &Global) -> Outcome {
    let r = checked(r, ctx)?;
    Ok(render(&[Record::from_series(&r, ctx.bits())], SERIES_COLUMNS, format_of(g)))
}

/// Oracle values carry the oracle's working-precision accuracy.
fn oracle_out(v: ComplexScalar, ctx: &PrecisionContext, g: &Global) -> Outcome {
    let bound = v.abs_f64().max(1.0) * (-(ctx.bits() as f64)).exp2();
    let rec = Record::new()
        .field("formula_id", "reference_oracle")
        .field("value", &v)
        .field("error_bound", render_f64(bound))
        .field("terms_used", "")
        .field("precision_bits", ctx.bits());
    Ok(render(&[rec], SERIES_COLUMNS, format_of(g)))
}

fn open_ledger(g: &Global) -> Result<Option<Ledger>, ZetaError> {
    g.ledger.as_ref().map(Ledger::open).transpose()
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let ctx = PrecisionContext::new(g.precision_bits, g.tol, g.max_terms)?;
    if let Some(path) = constants_path_from_env() {
        load_or_build(&path, &ctx)?;
    }
    let fmt = format_of(g);
    match &cli.command {
        Command::Zeta { s } => oracle_out(zetaforge::oracle::zeta_em(&scalar(&ctx, s)?, &ctx)?, &ctx, g),
        Command::Hurwitz { s, alpha, derivative } => {
            let (s, a) = (scalar(&ctx, s)?, scalar(&ctx, alpha)?);
            let v = if *derivative == 0 {
                hurwitz_em(&s, &a, &ctx)?
            } else {
                zeta_derivative_em(*derivative, &s, &a, &ctx)?
            };
            oracle_out(v, &ctx, g)
        }
        Command::Series { k, s, alpha, order } => {
            let p = ExpansionParams::new(*k, scalar(&ctx, s)?, scalar(&ctx, alpha)?).with_order(*order);
            series_out(shifted_hurwitz_series(&p, &ctx)?, &ctx, g)
        }
        Command::Deriv { r, s, alpha } => {
            let res = shifted_hurwitz_derivative_series(*r, &scalar(&ctx, s)?, &scalar(&ctx, alpha)?, &ctx)?;
            series_out(res, &ctx, g)
        }
        Command::Neg { m, alpha, k, kind } => match kind {
            NegKind::Value => match exact_rational(alpha) {
                Some(a) => {
                    let v = zeta_neg_m_alpha_closed(*m, *k, &a)?;
                    let rec = Record::new()
                        .field("formula_id", FormulaId::ZetaNegClosed)
                        .field("value", ComplexScalar::from_rational(ctx.bits(), &v))
                        .field("exact", &v)
                        .field("error_bound", render_f64(0.0))
                        .field("terms_used", m + 1)
                        .field("precision_bits", ctx.bits());
                    let mut cols = SERIES_COLUMNS.to_vec();
                    cols.insert(2, "exact");
                    Ok(render(&[rec], &cols, fmt))
                }
                None => series_out(zeta_neg_m_alpha_closed_complex(*m, *k, &scalar(&ctx, alpha)?, &ctx)?, &ctx, g),
            },
            NegKind::Derivative => series_out(zeta_prime_neg_series(*m, &scalar(&ctx, alpha)?, &ctx)?, &ctx, g),
            NegKind::Second => {
                if *m != 0 {
                    return Err(ZetaError::Parse("--kind second needs --m 0".into()).into());
                }
                series_out(zeta_second_derivative_at_zero(&scalar(&ctx, alpha)?, &ctx)?, &ctx, g)
            }
        },
        Command::Identities { id, s, terms } => {
            let ids: Vec<IdentityId> = if id == "all" {
                IdentityId::ALL.to_vec()
            } else {
                vec![IdentityId::parse(id)?]
            };
            let s = scalar(&ctx, s)?;
            let rows = ids
                .par_iter()
                .map(|i| identity_residual(*i, &s, *terms, &ctx).map(|c| Record::from_identity(&c, ctx.bits())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(render(&rows, IDENTITY_COLUMNS, fmt))
        }
        Command::GammaSeries { alpha } => series_out(log_gamma_series(&scalar(&ctx, alpha)?, &ctx)?, &ctx, g),
        Command::OddZeta { m, mode } => {
            let ledger = open_ledger(g)?;
            series_out(odd_zeta(*m, &ctx, (*mode).into(), ledger.as_ref())?, &ctx, g)
        }
        Command::Lfunction { q, index, m, mode } => {
            let chi = RapidParams::character(*m, *q, *index).resolve_character()?;
            let ledger = open_ledger(g)?;
            let res = if chi.is_even() {
                l_odd_argument(*m, &chi, &ctx, (*mode).into(), ledger.as_ref())?
            } else {
                l_even_argument(*m, &chi, &ctx, (*mode).into(), ledger.as_ref())?
            };
            series_out(res, &ctx, g)
        }
        Command::Characters { q } => {
            let rows: Vec<Record> = characters_mod(*q)?
                .iter()
                .map(|c| Record::from_character(&c.record()))
                .collect();
            Ok(render(&rows, CHARACTER_COLUMNS, fmt))
        }
        Command::Validate { formula, m, q, index, all_variants } => {
            let points = validation_points(formula, *m, *q, *index)?;
            let reports = points
                .par_iter()
                .map(|(f, p)| {
                    if *all_variants {
                        validate_all_variants(*f, *p, &ctx)
                    } else {
                        validate_variant(Variant::as_printed(*f), *p, &ctx).map(|r| vec![r])
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect::<Vec<_>>();
            if let Some(mut ledger) = open_ledger(g)? {
                for r in &reports {
                    ledger.record(r);
                }
                ledger.save()?;
            }
            let rows: Vec<Record> = reports.iter().map(|r| Record::from_validation(r, ctx.bits())).collect();
            Ok(render(&rows, VALIDATION_COLUMNS, fmt))
        }
        Command::Table { kind, from, to, step } => sweep(*kind, *from, *to, *step, &ctx, g),
    }
}

/// Explicit parameters, or the default grid: `m = 1..=3` for `zeta(2m+1)` and,
/// for each modulus up to 13, the first primitive character of the right
/// parity with `m = 1, 2`.
fn validation_points(
    formula: &str,
    m: Option<usize>,
    q: Option<u64>,
    index: Option<usize>,
) -> Result<Vec<(RapidFormula, RapidParams)>, ZetaError> {
    let formulas: Vec<RapidFormula> = if formula == "all" {
        RapidFormula::ALL.to_vec()
    } else {
        vec![RapidFormula::from_formula_id(FormulaId::parse(formula)?)?]
    };
    let mut points = Vec::new();
    for f in formulas {
        match (f, q, index) {
            (RapidFormula::OddZeta, _, _) => {
                let ms: Vec<usize> = m.map_or((1..=3).collect(), |m| vec![m]);
                points.extend(ms.into_iter().map(|m| (f, RapidParams::odd_zeta(m))));
            }
            (_, Some(q), Some(i)) => points.push((f, RapidParams::character(m.unwrap_or(1), q, i))),
            (_, Some(_), None) | (_, None, Some(_)) => {
                return Err(ZetaError::Parse("--q and --index go together".into()))
            }
            (_, None, None) => {
                let even = f == RapidFormula::LOddArgument;
                for q in 3..=13u64 {
                    let Some(chi) = characters_mod(q)?.into_iter().find(|c| c.is_primitive() && c.is_even() == even)
                    else {
                        continue;
                    };
                    let ms: Vec<usize> = m.map_or(vec![1, 2], |m| vec![m]);
                    points.extend(ms.into_iter().map(|m| (f, RapidParams::character(m, q, chi.index()))));
                }
            }
        }
    }
    Ok(points)
}

fn sweep(kind: SweepKind, from: f64, to: f64, step: f64, ctx: &PrecisionContext, g: &Global) -> Outcome {
    if !(step > 0.0 && from.is_finite() && to.is_finite()) {
        return Err(ZetaError::Parse("sweep needs finite bounds and a positive step".into()).into());
    }
    let mut points = Vec::new();
    let mut i = 0u64;
    loop {
        let x = from + i as f64 * step;
        if x > to + step * 1e-9 {
            break;
        }
        points.push(x);
        i += 1;
    }
    let mut columns = vec!["point"];
    columns.extend_from_slice(SERIES_COLUMNS);
    let rows = points
        .par_iter()
        .map(|&x| -> Result<Record, ZetaError> {
            // decimal text of the grid point, so that 0.1 means 1/10 exactly
            let label = format!("{}", (x * 1e9).round() / 1e9);
            let rec = match kind {
                SweepKind::OddZeta => {
                    let m = x.round() as usize;
                    let r = checked(odd_zeta(m, ctx, RapidMode::Validated, None)?, ctx)?;
                    Record::from_series(&r, ctx.bits())
                }
                SweepKind::LogGamma => {
                    let r = checked(log_gamma_series(&scalar(ctx, &label)?, ctx)?, ctx)?;
                    Record::from_series(&r, ctx.bits())
                }
                SweepKind::Zeta => {
                    let v = zetaforge::oracle::zeta_em(&scalar(ctx, &label)?, ctx)?;
                    let bound = v.abs_f64().max(1.0) * (-(ctx.bits() as f64)).exp2();
                    Record::new()
                        .field("formula_id", "reference_oracle")
                        .field("value", &v)
                        .field("error_bound", render_f64(bound))
                        .field("terms_used", "")
                        .field("precision_bits", ctx.bits())
                }
            };
            let mut full = Record::new().field("point", label);
            for c in SERIES_COLUMNS {
                full = full.field(c, rec.get(c).unwrap_or(""));
            }
            Ok(full)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(render(&rows, &columns, format_of(g)))
}
