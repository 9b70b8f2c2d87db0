//! Argument parsing and subcommand dispatch for the `intersective` binary.

use std::collections::BTreeSet;
use std::error::Error;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use intersective_core::abelian::{cyclic_log, GroupElement, GroupSpec};
use intersective_core::constructions::{
    alon_slab_size, slab_is_valid, slab_target, thm17_generate, thm17_verify, thm17_with_s,
};
use intersective_core::cyclotomic::inverse_cyclotomic;
use intersective_core::engine::{best_bounds, search_h, subgroup_generator, EngineOptions};
use intersective_core::oracle::{exact_d, DEFAULT_VERTEX_CAP};
use intersective_core::spectral::{
    residue_dp_ratios, spectral_upper_bound, spectral_upper_bound_counted, CountOptions,
};
use intersective_core::IntPolynomial;

use crate::formats::{
    emit_report, ratios_csv, OracleJson, PolynomialJson, QueryJson, RatioRow, SpectralJson,
    Thm17Json, VerifiedJson,
};
use crate::{memo, Deadline};

pub type CliResult<T> = Result<T, Box<dyn Error + Send + Sync>>;

/// Exit code for a report whose bounds contradict each other.
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "intersective", version, about = "Bounds on intersective sets in finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Φ_n, or (t^n − 1)/Φ_n with --inverse.
    Cyclotomic {
        n: u64,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Single-method bounds.
    Bound {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Ratios residue_dp_count(n, N)/(n − 1)^N for N = 1..max-N.
    LimitC {
        #[arg(long)]
        n: u64,
        #[arg(long = "max-N")]
        max_n: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Exact D_G(J, N) by maximum independent set.
    Oracle {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        certificate: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Instance of the n = Q·r^s family.
    Thm17 {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        eps: String,
        /// Override the chosen exponent s.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Size of the central slab in {1..n−1}^N.
    Slab {
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long)]
        check: bool,
    },
    /// Every applicable bound for (G, J, N).
    Bounds {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        oracle_timeout: Option<f64>,
        #[arg(long)]
        oracle_cap: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundKind {
    /// Counting bound for an `h` with support in J, or `auto` to search.
    Spectral {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value = "auto")]
        h: String,
        /// Generator of the cyclic subgroup holding J.
        #[arg(long)]
        a: Option<String>,
        /// Count tuples even when the closed form applies.
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Clone, Args)]
pub struct QueryArgs {
    /// `12` for Z_12, `2x4` for Z_2 × Z_4.
    #[arg(long)]
    pub group: String,
    /// Elements separated by `;` (a comma list also works for cyclic groups).
    #[arg(long = "J")]
    pub j: String,
    #[arg(long = "N")]
    pub big_n: u64,
}

impl QueryArgs {
    fn parse(&self) -> CliResult<(GroupSpec, Vec<GroupElement>)> {
        let group: GroupSpec = self.group.parse()?;
        let j = group.parse_subset(&self.j)?;
        Ok((group, j))
    }

    fn json(&self, group: &GroupSpec, j: &[GroupElement]) -> QueryJson {
        QueryJson {
            group: group.to_string(),
            j: j.iter().map(|x| x.to_string()).collect(),
            n: self.big_n,
        }
    }
}

fn parse_ratio(s: &str) -> CliResult<(u64, u64)> {
    let (a, b) = s.split_once('/').ok_or_else(|| format!("expected a/b, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn default_generator(group: &GroupSpec, j: &[GroupElement]) -> CliResult<GroupElement> {
    if group.is_cyclic() {
        return Ok(group.element_reduced(&vec![1; group.rank()])?);
    }
    subgroup_generator(group, j).ok_or_else(|| "J does not lie in a cyclic subgroup; pass --a".into())
}

/// Parses `args` (program name first) and runs the command, writing to `out`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> CliResult<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli.command, out)
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Cyclotomic {
            n,
            inverse,
            stats,
            format,
        } => {
            let h = if inverse {
                inverse_cyclotomic(n)?
            } else {
                (*memo::global().get(n)?).clone()
            };
            let j = PolynomialJson::new(n, if inverse { "inverse" } else { "cyclotomic" }, &h)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?,
                Format::Text => {
                    writeln!(out, "{h}")?;
                    if stats {
                        writeln!(out, "degree {}", j.degree)?;
                        writeln!(out, "nonzero {}", j.nonzero_count)?;
                        writeln!(out, "max_gap {}", j.max_gap)?;
                    }
                }
            }
        }
        Command::Bound {
            kind:
                BoundKind::Spectral {
                    query,
                    h,
                    a,
                    count,
                    format,
                },
        } => {
            let (group, j) = query.parse()?;
            let a = match a {
                Some(s) => group.parse_element(&s)?,
                None => default_generator(&group, &j)?,
            };
            let h: IntPolynomial = if h == "auto" {
                let n = intersective_core::abelian::element_order(&group, &a);
                let residues = j
                    .iter()
                    .map(|x| cyclic_log(&group, &a, x))
                    .collect::<Option<BTreeSet<u64>>>()
                    .ok_or_else(|| format!("J is not contained in <{a}>"))?;
                search_h(n, &residues)?
                    .ok_or("no cyclotomic product has support in J")?
                    .h
            } else {
                h.parse()?
            };
            let opts = CountOptions::default();
            let b = if count {
                spectral_upper_bound_counted(&group, &a, &j, &h, query.big_n, &opts)?
            } else {
                spectral_upper_bound(&group, &a, &j, &h, query.big_n, &opts)?
            };
            let js = SpectralJson::new(query.json(&group, &j), a.to_string(), &h, &b);
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?,
                Format::Text => {
                    writeln!(out, "h = {}", js.h)?;
                    writeln!(out, "a = {} (order {}, index {})", js.a, js.n, js.index)?;
                    if let Some(c) = &js.count {
                        writeln!(out, "count {c}")?;
                    }
                    writeln!(
                        out,
                        "upper {} ({})",
                        js.value,
                        if js.closed_form { "closed form" } else { "tuple count" }
                    )?;
                }
            }
        }
        Command::LimitC { n, max_n, format } => {
            let rows: Vec<RatioRow> = residue_dp_ratios(n, max_n)?
                .into_iter()
                .map(|(n, ratio)| RatioRow { n, ratio })
                .collect();
            match format {
                TableFormat::Csv => write!(out, "{}", ratios_csv(&rows))?,
                TableFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
            }
        }
        Command::Oracle {
            query,
            timeout,
            certificate,
            cap,
            format,
        } => {
            let (group, j) = query.parse()?;
            let d = exact_d(&group, &j, query.big_n, cap, &Deadline::from_secs(timeout))?;
            let js = OracleJson::new(&d, certificate);
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?,
                Format::Text => {
                    let tag = if js.exact { "exact" } else { "lower bound (timed out)" };
                    writeln!(out, "D = {} ({tag})", js.alpha)?;
                    writeln!(out, "alpha(<J>^N) = {}, index = {}", js.alpha_reduced, js.index)?;
                    for p in &js.certificate {
                        writeln!(out, "  ({})", p.join(" | "))?;
                    }
                }
            }
        }
        Command::Thm17 {
            m,
            eps,
            s,
            verify,
            json,
        } => {
            let eps = parse_ratio(&eps)?;
            let inst = match s {
                Some(s) => thm17_with_s(m, eps, s)?,
                None => thm17_generate(m, eps)?,
            };
            let report = verify.then(|| thm17_verify(&inst));
            let js = Thm17Json::new(&inst, report.as_ref());
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?;
            } else {
                writeln!(out, "M = {}, eps = {}", js.m, js.eps)?;
                writeln!(out, "primes = {}, r = {}, Q = {}, s = {}", js.primes.join(","), js.r, js.q, js.s)?;
                writeln!(out, "n = {}", js.n)?;
                writeln!(out, "h = {}, deg h = {}", js.h, js.d)?;
                writeln!(out, "|J| = {}", js.j_size)?;
                if let Some(v) = &js.verified {
                    print_verified(out, v)?;
                }
            }
            if report.is_some_and(|r| !r.passed()) {
                return Ok(1);
            }
        }
        Command::Slab { n, big_n, check } => {
            let size = alon_slab_size(n, big_n)?;
            writeln!(out, "target {}", slab_target(n, big_n))?;
            writeln!(out, "size {size}")?;
            if check {
                let ok = slab_is_valid(n, big_n)?;
                writeln!(out, "valid {ok}")?;
                if !ok {
                    return Ok(1);
                }
            }
        }
        Command::Bounds {
            query,
            format,
            oracle_timeout,
            oracle_cap,
        } => {
            let (group, j) = query.parse()?;
            let mut opts = EngineOptions::default();
            if let Some(cap) = oracle_cap {
                opts.oracle_cap = cap;
            }
            let report = best_bounds(&group, &j, query.big_n, &opts, &Deadline::from_secs(oracle_timeout))?;
            match format {
                Format::Json => writeln!(out, "{}", emit_report(&report)?)?,
                Format::Text => {
                    writeln!(out, "G = {group}, J = {{{}}}, N = {}", query.json(&group, &j).j.join("; "), query.big_n)?;
                    for (side, list) in [("upper", &report.upper), ("lower", &report.lower)] {
                        for e in list {
                            let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                            writeln!(out, "{side} {} {} [{}]", e.value, e.method, params.join(", "))?;
                        }
                    }
                    if let Some(b) = report.best_upper() {
                        writeln!(out, "best upper {} ({})", b.value, b.method)?;
                    }
                    if let Some(b) = report.best_lower() {
                        writeln!(out, "best lower {} ({})", b.value, b.method)?;
                    }
                    if let Some(e) = &report.exact {
                        writeln!(out, "exact {e}")?;
                    }
                    for n in &report.notes {
                        writeln!(out, "note: {n}")?;
                    }
                }
            }
            let bad = report.inconsistencies();
            if !bad.is_empty() {
                for b in bad {
                    writeln!(out, "INCONSISTENT: {b}")?;
                }
                return Ok(EXIT_INCONSISTENT);
            }
        }
    }
    Ok(0)
}

fn print_verified(out: &mut dyn Write, v: &VerifiedJson) -> CliResult<()> {
    writeln!(out, "structure: {}", v.structure)?;
    for b in &v.bullets {
        writeln!(out, "({}) {}: {}", b.bullet, if b.passed { "pass" } else { "FAIL" }, b.detail)?;
    }
    writeln!(out, "eps <= 3/(s+1): {}", v.eps_below_three_over_s1)?;
    writeln!(out, "4n^eps > n^(3/(s+1)): {}", v.four_n_eps_condition)?;
    writeln!(out, "verified: {}", v.passed)?;
    Ok(())
}
