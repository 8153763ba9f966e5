//! Argument parsing and rendering for the `aap` binary. Kept in a library
//! so tests can drive commands without spawning processes.

use std::fmt::Write as _;

use aap_core::exact::{parse_rational, parse_rational_or_decimal, BigRational, FactoredRational, Poly, Symbol};
use aap_core::operators::two_symbol_assignment;
use aap_core::simulate::{simulate_against_exact, SimulationReport, DEFAULT_BURN_IN};
use aap_core::spectrum::{charpoly_specialized, spectrum_report, spectrum_report_symbolic, SpectrumReport};
use aap_core::steady::{
    partition_from_steady, steady_entries, steady_state_specialized, steady_state_symbolic, verify_partition,
    verify_partition_general, SteadyEntry,
};
use aap_core::suite::{run_suite, Suite, SuiteConfig, SuiteReport};
use aap_core::transfer::{build_t, propagate_steady, verify_tma_with, PropagationCheck, TmaCheck};
use aap_core::{Error, ExactScalar};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 42;
/// Bumped whenever a CSV layout changes.
pub const CSV_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn suites_help() -> String {
    let mut s = String::from("Suites:\n");
    for suite in Suite::ALL {
        let _ = writeln!(s, "  {:<13} {}", suite.name(), suite.description());
    }
    s
}

#[derive(Debug, Parser)]
#[command(name = "aap", version, about = "Exact spectra, steady states and transfer matrices of the asymmetric annihilation process")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,

    /// Seed for every randomized step.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
}

/// Lattice size and parameter point shared by the report commands.
#[derive(Debug, Args)]
pub struct Point {
    /// Number of sites.
    #[arg(long = "L", value_name = "L")]
    pub len: usize,
    /// Creation rate, as an exact rational "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Exit rate at the last site, as an exact rational "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Keep alpha and beta as symbols a and b.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    pub symbolic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form spectrum with multiplicities.
    Spectrum {
        #[command(flatten)]
        point: Point,
        /// Also compute geometric multiplicities by exact rank (L <= 6).
        #[arg(long)]
        geometric: bool,
    },
    /// Factored characteristic polynomial, expanded at rational points.
    Charpoly {
        #[command(flatten)]
        point: Point,
    },
    /// Normalized steady state.
    Steady {
        #[command(flatten)]
        point: Point,
    },
    /// Partition function as the lcm of steady-state denominators (symbolic).
    Partition {
        #[command(flatten)]
        point: Point,
        /// One independent symbol per configuration and site (L <= 3).
        #[arg(long)]
        general: bool,
    },
    /// Transfer matrix T_{L,L+1} with its intertwining and propagation checks.
    Transfer {
        #[command(flatten)]
        point: Point,
    },
    /// Gillespie simulation compared with the exact steady state.
    Simulate {
        #[arg(long = "L", value_name = "L")]
        len: usize,
        /// Rational "p/q" or decimal.
        #[arg(long)]
        alpha: String,
        /// Rational "p/q" or decimal.
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 100_000)]
        events: u64,
        /// Fraction of events discarded before recording.
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: f64,
    },
    /// Run a verification suite over a range of sizes.
    #[command(after_help = suites_help())]
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Single size (overrides --lmin/--lmax).
        #[arg(long = "L", value_name = "L")]
        len: Option<usize>,
        #[arg(long, default_value_t = 1)]
        lmin: usize,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long)]
        symbolic: bool,
        /// Independent symbols or random rates per configuration.
        #[arg(long)]
        general: bool,
        /// Random parameter points per size in rational mode.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

/// Rendered output plus whether the command's assertions held.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub success: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, success: true }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::Infeasible { .. } | Error::DenseCap { .. } | Error::UnsupportedLength { .. }) => 3,
        _ => 2,
    }
}

fn exact(flag: &str, value: &str) -> anyhow::Result<BigRational> {
    parse_rational(value).map_err(|e| anyhow::Error::new(e).context(format!("--{flag} {value:?}")))
}

enum Mode {
    Symbolic,
    Rational(BigRational, BigRational),
}

impl Point {
    fn mode(&self) -> anyhow::Result<Mode> {
        if self.len == 0 {
            anyhow::bail!(Error::Invalid("L must be at least 1".into()));
        }
        if self.symbolic {
            return Ok(Mode::Symbolic);
        }
        match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => Ok(Mode::Rational(exact("alpha", a)?, exact("beta", b)?)),
            _ => anyhow::bail!(Error::Invalid("give both --alpha and --beta, or --symbolic".into())),
        }
    }
}

fn json<T: Serialize>(t: &T) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("# aap-csv v{CSV_VERSION}\n{}\n", header.join(","));
    for r in rows {
        let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn params_line(p: &std::collections::BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn render_spectrum(r: &SpectrumReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => csv(
            &["eigenvalue", "algebraic_multiplicity", "geometric_multiplicity", "witness"],
            r.entries.iter().map(|e| {
                vec![
                    e.eigenvalue.clone(),
                    e.alg_mult.to_string(),
                    e.geo_mult.map(|g| g.to_string()).unwrap_or_default(),
                    e.witness.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = format!("L={} {}\n", r.len, params_line(&r.parameters));
            for e in &r.entries {
                let _ = write!(s, "{}  alg={}", e.eigenvalue, e.alg_mult);
                if let Some(g) = e.geo_mult {
                    let _ = write!(s, " geo={g}");
                }
                let _ = writeln!(s, "  witness={}", e.witness);
            }
            s
        }
    }
}

#[derive(Serialize)]
struct CharpolyDoc {
    #[serde(rename = "L")]
    len: usize,
    parameters: std::collections::BTreeMap<String, String>,
    factored: String,
    degree: u32,
    /// Ascending powers of x, at rational points only.
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
}

#[derive(Serialize)]
struct SteadyDoc {
    #[serde(rename = "L")]
    len: usize,
    parameters: std::collections::BTreeMap<String, String>,
    entries: Vec<SteadyEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition_function: Option<String>,
}

#[derive(Serialize)]
struct TransferDoc {
    #[serde(rename = "L")]
    len: usize,
    parameters: std::collections::BTreeMap<String, String>,
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<String>>,
    tma: TmaCheck,
    propagation: PropagationCheck,
}

fn parameters(mode: &Mode) -> std::collections::BTreeMap<String, String> {
    let (a, b) = match mode {
        Mode::Symbolic => ("a".to_string(), "b".to_string()),
        Mode::Rational(a, b) => (a.to_string(), b.to_string()),
    };
    [("alpha".to_string(), a), ("beta".to_string(), b)].into()
}

fn transfer_doc<T: ExactScalar>(len: usize, alpha: &T, beta: &T, params: std::collections::BTreeMap<String, String>) -> anyhow::Result<TransferDoc> {
    let t = build_t(len, alpha, beta)?;
    let tma = verify_tma_with(len, &t, alpha, beta)?;
    let propagation = propagate_steady(len, alpha, beta)?;
    let matrix = (0..t.rows()).map(|r| (0..t.cols()).map(|c| t.get(r, c).to_string()).collect()).collect();
    Ok(TransferDoc {
        len,
        parameters: params,
        rows: t.rows(),
        cols: t.cols(),
        matrix,
        tma,
        propagation,
    })
}

fn render_simulation(r: &SimulationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => csv(
            &["state", "empirical_frequency", "exact_probability"],
            r.rows
                .iter()
                .map(|row| vec![row.state.to_string(), format!("{:.6}", row.empirical_frequency), row.exact_probability.clone()]),
        ),
        Format::Text => {
            let mut s = format!(
                "L={} alpha={} beta={} events={} seed={} burn_in={}\n",
                r.len, r.alpha, r.beta, r.events, r.seed, r.burn_in
            );
            for row in &r.rows {
                let _ = writeln!(s, "{}  empirical={:.6}  exact={}", row.state, row.empirical_frequency, row.exact_probability);
            }
            let _ = writeln!(s, "tv_distance={:.6}", r.tv_distance);
            s
        }
    }
}

fn render_suite(r: &SuiteReport, format: Format) -> String {
    let params = |c: &aap_core::suite::CaseResult| c.parameters.as_ref().map(|p| p.to_string()).unwrap_or_default();
    match format {
        Format::Json => json(r),
        Format::Csv => csv(
            &["suite", "L", "mode", "parameters", "passed"],
            r.cases
                .iter()
                .map(|c| vec![r.suite.to_string(), c.len.to_string(), c.mode.to_string(), params(c), c.passed.to_string()]),
        ),
        Format::Text => {
            let mut s = format!("suite {}: {}\nseed {}\n", r.suite, r.description, r.seed);
            for c in &r.cases {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                let p = params(c);
                let _ = write!(s, "  L={} {} {verdict}", c.len, c.mode);
                if !p.is_empty() {
                    let _ = write!(s, " {p}");
                }
                if !c.passed {
                    let _ = write!(s, "\n    {}", c.detail);
                }
                s.push('\n');
            }
            let verdict = match (r.report_only, r.passed) {
                (true, true) => "REPORT (algebraic data consistent)",
                (true, false) => "REPORT (algebraic data inconsistent)",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(s, "{verdict}: {} case(s)", r.cases.len());
            s
        }
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Spectrum { point, geometric } => {
            let r = match point.mode()? {
                Mode::Symbolic => {
                    if *geometric {
                        anyhow::bail!(Error::Invalid("geometric multiplicities need a rational point".into()));
                    }
                    spectrum_report_symbolic(point.len)?
                }
                Mode::Rational(a, b) => spectrum_report(point.len, &a, &b, *geometric)?,
            };
            Ok(Outcome::ok(render_spectrum(&r, format)))
        }
        Command::Charpoly { point } => {
            let mode = point.mode()?;
            let p = charpoly_specialized(point.len)?;
            let (factored, coefficients) = match &mode {
                Mode::Symbolic => (p.clone(), None),
                Mode::Rational(a, b) => {
                    let at = two_symbol_assignment(a, b);
                    let u = p.to_unipoly(&at)?;
                    (p.substitute(&at), Some(u.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()))
                }
            };
            let doc = CharpolyDoc {
                len: point.len,
                parameters: parameters(&mode),
                factored: factored.to_string(),
                degree: factored.degree(),
                coefficients,
            };
            let body = match format {
                Format::Json => json(&doc),
                Format::Csv => csv(
                    &["factor", "exponent"],
                    std::iter::once(vec!["content".into(), factored.product().content().to_string()]).chain(
                        factored.product().factors().iter().map(|(f, e)| vec![f.to_string(), e.to_string()]),
                    ),
                ),
                Format::Text => {
                    let mut s = format!("L={} {}\nP(x) = {}\n", doc.len, params_line(&doc.parameters), doc.factored);
                    if let Some(c) = &doc.coefficients {
                        let _ = writeln!(s, "coefficients (ascending) = [{}]", c.join(", "));
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Steady { point } => {
            let mode = point.mode()?;
            let doc = match &mode {
                Mode::Symbolic => {
                    let x = steady_state_symbolic(point.len)?;
                    SteadyDoc {
                        len: point.len,
                        parameters: parameters(&mode),
                        entries: steady_entries(&x, point.len),
                        partition_function: Some(partition_from_steady(&x).to_string()),
                    }
                }
                Mode::Rational(a, b) => {
                    let x = steady_state_specialized(point.len, a, b)?;
                    SteadyDoc {
                        len: point.len,
                        parameters: parameters(&mode),
                        entries: steady_entries(&x, point.len),
                        partition_function: None,
                    }
                }
            };
            let body = match format {
                Format::Json => json(&doc),
                Format::Csv => csv(
                    &["state", "probability"],
                    doc.entries.iter().map(|e| vec![e.state.to_string(), e.probability.clone()]),
                ),
                Format::Text => {
                    let mut s = format!("L={} {}\n", doc.len, params_line(&doc.parameters));
                    for e in &doc.entries {
                        let _ = writeln!(s, "{}  {}", e.state, e.probability);
                    }
                    if let Some(z) = &doc.partition_function {
                        let _ = writeln!(s, "Z = {z}");
                    }
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Partition { point, general } => {
            if !matches!(point.mode(), Ok(Mode::Symbolic)) {
                anyhow::bail!(Error::Invalid(
                    "the partition function is a polynomial in the rates; pass --symbolic".into()
                ));
            }
            if *general {
                let c = verify_partition_general(point.len)?;
                let body = match format {
                    Format::Json => json(&c),
                    Format::Csv => csv(
                        &["L", "lcm", "product", "matches"],
                        [vec![c.len.to_string(), c.lcm.to_string(), c.product.to_string(), c.matches.to_string()]],
                    ),
                    Format::Text => format!("{}\n", c.lcm),
                };
                return Ok(Outcome { body, success: c.passed() });
            }
            let c = verify_partition(point.len)?;
            let body = match format {
                Format::Json => json(&c),
                Format::Csv => csv(
                    &["L", "lcm", "closed_form", "matches_closed_form", "matches_restricted_product"],
                    [vec![
                        c.len.to_string(),
                        c.lcm.to_string(),
                        c.closed_form.to_string(),
                        c.matches_closed_form.to_string(),
                        c.matches_restricted_product.to_string(),
                    ]],
                ),
                Format::Text => format!("{}\n", c.lcm),
            };
            Ok(Outcome { body, success: c.passed() })
        }
        Command::Transfer { point } => {
            let mode = point.mode()?;
            let params = parameters(&mode);
            let doc = match &mode {
                Mode::Symbolic => {
                    let a = FactoredRational::from_poly(&Poly::var(Symbol::Alpha));
                    let b = FactoredRational::from_poly(&Poly::var(Symbol::Beta));
                    transfer_doc(point.len, &a, &b, params)?
                }
                Mode::Rational(a, b) => transfer_doc(point.len, a, b, params)?,
            };
            let body = match format {
                Format::Json => json(&doc),
                Format::Csv => csv(
                    &["row", "col", "entry"],
                    doc.matrix.iter().enumerate().flat_map(|(r, row)| {
                        row.iter().enumerate().map(move |(c, e)| vec![r.to_string(), c.to_string(), e.clone()])
                    }),
                ),
                Format::Text => {
                    let mut s = format!("T_{{{},{}}} {} ({}x{})\n", doc.len, doc.len + 1, params_line(&doc.parameters), doc.rows, doc.cols);
                    for row in &doc.matrix {
                        let _ = writeln!(s, "  [{}]", row.join(", "));
                    }
                    let _ = writeln!(s, "intertwines: {}  nonzero: {}", doc.tma.intertwines, doc.tma.nonzero);
                    if let (Some((r, c)), Some(l), Some(rh)) = (doc.tma.first_difference, &doc.tma.lhs_entry, &doc.tma.rhs_entry) {
                        let _ = writeln!(s, "first difference at ({r},{c}): M T = {l}, T M = {rh}");
                    }
                    let _ = writeln!(
                        s,
                        "T v_L proportional to v_(L+1): {}{}",
                        doc.propagation.proportional,
                        doc.propagation.scalar.as_ref().map(|k| format!(" (scalar {k})")).unwrap_or_default()
                    );
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::Simulate {
            len,
            alpha,
            beta,
            events,
            burn_in,
        } => {
            let a = parse_rational_or_decimal(alpha)?;
            let b = parse_rational_or_decimal(beta)?;
            let r = simulate_against_exact(*len, &a, &b, *events, cli.seed, *burn_in)?;
            Ok(Outcome::ok(render_simulation(&r, format)))
        }
        Command::Verify {
            suite,
            len,
            lmin,
            lmax,
            symbolic,
            general,
            samples,
        } => {
            let (lmin, lmax) = match len {
                Some(l) => (*l, *l),
                None => (*lmin, *lmax),
            };
            let cfg = SuiteConfig {
                lmin,
                lmax,
                symbolic: *symbolic,
                general: *general,
                seed: cli.seed,
                samples: *samples,
            };
            let r = run_suite(*suite, &cfg)?;
            Ok(Outcome {
                body: render_suite(&r, format),
                success: r.success(),
            })
        }
    }
}
