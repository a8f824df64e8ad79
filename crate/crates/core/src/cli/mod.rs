//! The `moduli` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure, 3 limit
//! exceeded.

mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::{self, CacheStore, LoadStatus};
use crate::descendent::{effective_recursion, psi_correlator, CorrelatorKey};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, MultiIndex};
use crate::fabering::{rank_profile, FaberMatrix};
use crate::hodge::{closed_formula_oracle, hodge_integral, ClosedFormula, HodgeIntegrand};
use crate::mocktheta::{garthwaite_sum, omega_decomposition, omega_series, omega_series_alt};
use crate::npoint::{f_table, f_table_kdv, npoint_coefficient, Route};
use crate::reference;
use crate::rspin::{rspin_correlator, RSpinKey};
use crate::wpvolumes::{mixed_via_volumes, wp_mixed, wp_volume, wp_volume_closed};

pub use output::{Format, Table};
pub use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Largest genus accepted by `faber-rank` and `table faber-rank`.
pub const FABER_MAX_G: i64 = 30;
/// Largest `n` accepted by `mocktheta` and `table omega` (as `g − 2`).
pub const OMEGA_MAX_N: i64 = 5000;
/// Largest `n` for the floating Garthwaite sum.
pub const GARTHWAITE_MAX_N: i64 = 1000;

#[derive(Parser, Debug)]
#[command(name = "moduli", version, about = "Exact intersection numbers on moduli spaces of curves")]
struct Cli {
    /// Persistent memo file (default: $MODULI_CACHE or the per-user data directory).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Neither read nor write the persistent memo file.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Algorithm choice; the accepted names depend on the subcommand.
    #[arg(long, global = true)]
    route: Option<String>,
    /// Size cap: the dimension 3g−3+n for correlators, g for ranks and
    /// tables, n for mock theta. `verify` reads it as the suite's range.
    #[arg(long, global = true, allow_negative_numbers = true)]
    bound: Option<i64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// ψ-class intersection number ⟨τ_{d_1}⋯τ_{d_n}⟩_g. Routes: dvv, effective, npoint.
    Psi {
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
    },
    /// Coefficients of the n-point function F_g. Routes: recursion, theorem, kdv.
    Npoint {
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        #[arg(long)]
        n: usize,
        /// Print only the coefficient of x^d.
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u32>>,
    },
    /// ∫ ψ^d κ λ ch over M̄_{g,n}. Routes: reduce, lg, l2g, l3g.
    Hodge {
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        /// Indices j of the λ_j factors, e.g. 1,1,1 for λ_1³.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<u32>,
        /// Indices i of the κ_i factors.
        #[arg(long, value_delimiter = ',')]
        kappa: Vec<usize>,
        /// Odd degrees of ch(E) factors.
        #[arg(long, value_delimiter = ',')]
        ch: Vec<u32>,
    },
    /// Higher Weil–Petersson volume ⟨τ_d κ(b)⟩_g. Routes: alpha, volume, kappa, exchange.
    Wp {
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        /// Number of marked points when --d is absent.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Indices i of the κ_i factors (default: κ_1 to the top degree).
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u32>>,
    },
    /// Ranks R_g^k of the Faber intersection matrices.
    FaberRank {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Coefficient ω(n) of the mock theta function. Routes: series, alt, garthwaite
    /// (exit 2 when the partial sum is 0.25 or more from an integer).
    Mocktheta {
        #[arg(long)]
        n: usize,
        /// Terms of the Garthwaite sum.
        #[arg(long, default_value_t = 25)]
        k_max: u64,
    },
    /// Witten r-spin number for r ∈ {2,3,4}.
    Rspin {
        #[arg(long)]
        r: u32,
        #[arg(long, allow_negative_numbers = true)]
        g: i64,
        /// Insertions τ_{n,m} written n,m.
        #[arg(long, num_args = 1.., required = true)]
        ins: Vec<String>,
    },
    /// Regenerate a published table over a genus range a..b.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        #[arg(long)]
        g: String,
    },
    /// Run a cross-check suite; exit 2 on any failure.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest n for mock-garthwaite (same as --bound).
        #[arg(long)]
        n: Option<i64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    FaberRank,
    Omega,
    Rspin3,
    Rspin4,
}

/// A command failed after parsing.
enum Failure {
    Compute(Error),
    Verify(Table),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Limit(_) => EXIT_LIMIT,
        Error::Numeric(_) => EXIT_VERIFY,
        Error::Invalid(_) | Error::Unstable { .. } | Error::Cache(_) => EXIT_USAGE,
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

fn check_bound(bound: Option<i64>, size: i64, what: &str) -> Result<()> {
    match bound {
        Some(b) if size > b => Err(Error::Limit(format!("{what} = {size} exceeds --bound {b}"))),
        _ => Ok(()),
    }
}

fn no_route(route: &Option<String>, cmd: &str) -> Result<()> {
    match route {
        Some(r) => usage(format!("{cmd} takes no --route (got {r})")),
        None => Ok(()),
    }
}

fn route_of<'a>(route: &'a Option<String>, allowed: &[&'a str]) -> Result<&'a str> {
    match route.as_deref() {
        None => Ok(allowed[0]),
        Some(r) if allowed.contains(&r) => Ok(r),
        Some(r) => usage(format!("unknown route {r}; expected one of {}", allowed.join(", "))),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// `a`, `a..b` or `a..=b`, both ends inclusive.
fn parse_range(s: &str) -> Result<(i64, i64)> {
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad range {s:?}")));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => (num(s)?, num(s)?),
    };
    if lo > hi {
        return usage(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_insertion(s: &str) -> Result<(u32, u32)> {
    s.split_once(',')
        .and_then(|(n, m)| Some((n.trim().parse().ok()?, m.trim().parse().ok()?)))
        .ok_or_else(|| Error::Invalid(format!("bad insertion {s:?}; expected n,m")))
}

fn dim(g: i64, n: usize) -> i64 {
    3 * g - 3 + n as i64
}

fn stable(g: i64, n: usize) -> Result<()> {
    if g < 0 || 2 * g - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    Ok(())
}

fn value(v: &crate::Rational) -> Table {
    Table::scalar("value", fmt_rational(v))
}

fn execute(cli: &Cli) -> std::result::Result<Table, Failure> {
    let (route, bound) = (&cli.route, cli.bound);
    match &cli.cmd {
        Cmd::Psi { g, d } => {
            let (g, n) = (*g, d.len());
            stable(g, n)?;
            check_bound(bound, dim(g, n), "3g-3+n")?;
            let v = match route_of(route, &["dvv", "effective", "npoint"])? {
                "dvv" => psi_correlator(g, d),
                "effective" => effective_recursion(g, d),
                _ if CorrelatorKey::new(g, d).dimension_ok() => npoint_coefficient(g, d)?,
                _ => crate::Rational::default(),
            };
            Ok(value(&v))
        }
        Cmd::Npoint { g, n, d } => {
            let (g, n) = (*g, *n);
            stable(g, n)?;
            check_bound(bound, dim(g, n), "3g-3+n")?;
            let t = match route_of(route, &["recursion", "theorem", "kdv"])? {
                "recursion" => f_table(Route::Recursion, g, n)?,
                "theorem" => f_table(Route::Theorem, g, n)?,
                _ => f_table_kdv(g, n)?,
            };
            if let Some(d) = d {
                if d.len() != n {
                    return Err(Error::Invalid(format!("--d needs {n} entries")).into());
                }
                let deg: i64 = d.iter().map(|&x| x as i64).sum();
                let v = if deg == dim(g, n) { t.get(d) } else { crate::Rational::default() };
                return Ok(value(&v));
            }
            let mut out = Table::new(&["d", "coefficient"]);
            for (e, c) in t.entries() {
                let mut e = e;
                e.sort_unstable_by(|a, b| b.cmp(a));
                if c != crate::Rational::default() {
                    out.push(vec![join(&e), fmt_rational(&c)]);
                }
            }
            out.rows.sort();
            out.rows.dedup();
            Ok(out)
        }
        Cmd::Hodge { g, d, lambda, kappa, ch } => {
            let g = *g;
            stable(g, d.len())?;
            check_bound(bound, dim(g, d.len()), "3g-3+n")?;
            if let Some(c) = ch.iter().find(|&&c| c % 2 == 0) {
                return Err(Error::Invalid(format!("ch_{c} has even degree")).into());
            }
            let mut h = HodgeIntegrand::new(g, d).with_kappa(MultiIndex::from_places(kappa));
            for &j in lambda {
                h = h.with_lambda(j);
            }
            for &c in ch {
                h = h.with_ch(c);
            }
            let closed = |which: ClosedFormula, want: Vec<u32>| -> Result<crate::Rational> {
                let mut got = lambda.clone();
                got.sort_unstable();
                let mut want = want;
                want.sort_unstable();
                if got != want || !kappa.is_empty() || !ch.is_empty() {
                    return usage(format!("this route needs exactly --lambda {}", join(&want)));
                }
                closed_formula_oracle(which, g, d)
            };
            let gu = g.max(1) as u32;
            let v = match route_of(route, &["reduce", "lg", "l2g", "l3g"])? {
                "reduce" => hodge_integral(&h),
                "lg" => closed(ClosedFormula::Lg, vec![gu])?,
                "l2g" => closed(ClosedFormula::L2g, vec![gu, gu - 1])?,
                _ => closed(ClosedFormula::L3g, vec![gu - 1; 3])?,
            };
            Ok(value(&v))
        }
        Cmd::Wp { g, n, kappa, d } => {
            let g = *g;
            let d = d.clone().unwrap_or_else(|| vec![0; *n]);
            let n = d.len();
            stable(g, n)?;
            check_bound(bound, dim(g, n), "3g-3+n")?;
            let b = match kappa {
                Some(k) => MultiIndex::from_places(k),
                None => {
                    let top = dim(g, n) - d.iter().map(|&x| x as i64).sum::<i64>();
                    MultiIndex::from_places(&vec![1; top.max(0) as usize])
                }
            };
            let v = match route_of(route, &["alpha", "volume", "kappa", "exchange"])? {
                "alpha" | "volume" if n == 0 => wp_volume_closed(g, &b)?,
                "alpha" => wp_mixed(g, &b, &d)?,
                "volume" if d.iter().all(|&x| x == 0) => wp_volume(g, n, &b)?,
                "volume" => return Err(Error::Invalid("route volume needs all d = 0".into()).into()),
                "kappa" => hodge_integral(&HodgeIntegrand::new(g, &d).with_kappa(b)),
                _ => mixed_via_volumes(g, &b, &d)?,
            };
            Ok(value(&v))
        }
        Cmd::FaberRank { g, k } => {
            no_route(route, "faber-rank")?;
            check_bound(bound, *g, "g")?;
            check_bound(Some(FABER_MAX_G), *g, "g")?;
            if let Some(k) = k {
                return Ok(Table::scalar("rank", FaberMatrix::new(*g, *k)?.rank().to_string()));
            }
            let mut t = Table::new(&["k", "rank"]);
            for (k, r) in rank_profile(*g)?.iter().enumerate() {
                t.push(vec![k.to_string(), r.to_string()]);
            }
            Ok(t)
        }
        Cmd::Mocktheta { n, k_max } => {
            check_bound(bound, *n as i64, "n")?;
            match route_of(route, &["series", "alt", "garthwaite"])? {
                "garthwaite" => {
                    check_bound(Some(GARTHWAITE_MAX_N), *n as i64, "n")?;
                    let s = garthwaite_sum(*n as u64, *k_max)?;
                    let exact = omega_series(*n);
                    let mut t = Table::new(&["n", "k_max", "float_partial_sum", "nearest", "distance", "exact"]);
                    t.push(vec![
                        n.to_string(),
                        k_max.to_string(),
                        s.decimal.clone(),
                        s.nearest.to_string(),
                        format!("{:.3e}", s.distance),
                        exact.coeff(*n).to_string(),
                    ]);
                    // too few terms to pin down the nearest integer
                    if s.distance < 0.25 {
                        Ok(t)
                    } else {
                        Err(Failure::Verify(t))
                    }
                }
                r => {
                    check_bound(Some(OMEGA_MAX_N), *n as i64, "n")?;
                    let s = if r == "series" { omega_series(*n) } else { omega_series_alt(*n) };
                    Ok(Table::scalar("omega", s.coeff(*n).to_string()))
                }
            }
        }
        Cmd::Rspin { r, g, ins } => {
            no_route(route, "rspin")?;
            let ins: Vec<(u32, u32)> = ins.iter().map(|s| parse_insertion(s)).collect::<Result<_>>()?;
            check_bound(bound, dim(*g, ins.len()), "3g-3+s")?;
            let key = RSpinKey::new(*r, *g, &ins)?;
            Ok(value(&rspin_correlator(&key)?))
        }
        Cmd::Table { which, g } => {
            no_route(route, "table")?;
            let (lo, hi) = parse_range(g)?;
            check_bound(bound, hi, "g")?;
            table(*which, lo, hi)
        }
        Cmd::Verify { suite, n } => {
            no_route(route, "verify")?;
            let b = n.or(bound).unwrap_or(suite.default_bound());
            let checks = verify::run(*suite, b)?;
            let mut t = Table::new(&["check", "cases", "failures", "status"]);
            let all = checks.iter().all(verify::Check::passed);
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                t.push(vec![c.name.clone(), c.cases.to_string(), c.failures.len().to_string(), status.into()]);
            }
            if all {
                Ok(t)
            } else {
                Err(Failure::Verify(t))
            }
        }
    }
}

fn table(which: TableKind, lo: i64, hi: i64) -> std::result::Result<Table, Failure> {
    match which {
        TableKind::FaberRank => {
            if lo < 2 {
                return Err(Error::Invalid("faber-rank table starts at g = 2".into()).into());
            }
            check_bound(Some(FABER_MAX_G), hi, "g")?;
            let mut t = Table::new(&["g", "R_g", "profile"]);
            for g in lo..=hi {
                let p = rank_profile(g)?;
                t.push(vec![g.to_string(), p.iter().sum::<usize>().to_string(), join(&p)]);
            }
            Ok(t)
        }
        TableKind::Omega => {
            if lo < 2 {
                return Err(Error::Invalid("omega table starts at g = 2".into()).into());
            }
            check_bound(Some(OMEGA_MAX_N + 2), hi, "g")?;
            let d = omega_decomposition(hi as u64)?;
            let mut t = Table::new(&["g", "omega_g", "profile"]);
            for p in d.profiles.iter().filter(|p| p.g as i64 >= lo) {
                t.push(vec![p.g.to_string(), p.total().to_string(), join(&p.components)]);
            }
            Ok(t)
        }
        TableKind::Rspin3 | TableKind::Rspin4 => {
            let r = if which == TableKind::Rspin3 { 3 } else { 4 };
            let mut t = Table::new(&["g", "correlator", "value"]);
            for (g, ins, _) in reference::rspin_table(r).into_iter().filter(|row| (lo..=hi).contains(&row.0)) {
                let key = RSpinKey::new(r, g, &ins)?;
                let v = rspin_correlator(&key)?;
                let body: Vec<String> = ins.iter().map(|(n, m)| format!("t{n},{m}")).collect();
                t.push(vec![g.to_string(), format!("<{}>", body.join(" ")), fmt_rational(&v)]);
            }
            Ok(t)
        }
    }
}

/// Load the persistent memo into the process tables.
fn open_cache(cli: &Cli, err: &mut dyn Write) -> Option<CacheStore> {
    if cli.no_cache {
        return None;
    }
    let path = cli.cache.clone().or_else(cache::default_path)?;
    match CacheStore::open(path) {
        Ok(store) => {
            store.seed_memos();
            Some(store)
        }
        Err(e) => {
            let _ = writeln!(err, "warning: {e}");
            None
        }
    }
}

fn close_cache(store: Option<CacheStore>, err: &mut dyn Write) {
    let Some(mut store) = store else { return };
    let added = store.absorb_memos();
    let damaged = matches!(store.status, LoadStatus::Stale | LoadStatus::Corrupted);
    if added == 0 && !damaged {
        return;
    }
    if let Err(e) = store.save() {
        let _ = writeln!(err, "warning: {e}");
    }
}

/// Run with explicit arguments (the first is the program name) and output
/// streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let store = open_cache(&cli, err);
    let result = execute(&cli);
    close_cache(store, err);
    match result {
        Ok(t) => {
            let _ = out.write_all(t.render(cli.format).as_bytes());
            EXIT_OK
        }
        Err(Failure::Verify(t)) => {
            let _ = out.write_all(t.render(cli.format).as_bytes());
            EXIT_VERIFY
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive() {
        assert_eq!(parse_range("2..12").unwrap(), (2, 12));
        assert_eq!(parse_range("2..=12").unwrap(), (2, 12));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert!(parse_range("7..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn insertions_parse() {
        assert_eq!(parse_insertion("2,1").unwrap(), (2, 1));
        assert!(parse_insertion("2").is_err());
    }
}
