//! `binseq`: command-line surface over the bin-sequence library.
//!
//! One subcommand per library operation. Output goes to stdout (or
//! `--out`) as JSON, CSV, or text; identical invocations produce
//! identical bytes. Exit codes: 0 on success, 1 on domain errors
//! (rendered as a structured object in JSON mode), 2 on usage errors.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use binseq_core::{
    bin_equivalence_check, bin_moments, build_gnary_bruteforce, build_gnary_gapformula,
    build_sequence, build_tree, classify, decompose, divisibility_check, empirical_summand_pmf,
    enumerate_decompositions, gap_report, gaussian_distance, lyapunov_series, model_summand_pmf,
    parse_schedule, recurrence_check, telephone_check, theorem35_check, verify_exhaustive,
    BinSchedule, Decomposition, EmpiricalFinding, Sequence, SummandPmf, DEFAULT_ENUM_LIMIT,
    DEFAULT_STATE_CAP,
};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use render::{
    BinReasonDto, ClassifyDto, DecomposeDto, DecompositionDto, DistDto, DivisibilityDto,
    EnumerateDto, FindingDto, Format, GnaryReportDto, IndivisibleDto, KsDto, LyapunovDto,
    LyapunovRowDto, MismatchDto, MomentsDto, PicksDto, ReadingDto, RepresentableDto, SequenceDto,
    Thm35Dto, Thm35RowDto, TreeCheckDto, TreeDto, VerifyDto,
};

#[derive(Parser)]
#[command(
    name = "binseq",
    version,
    about = "Bin-sequence construction, decomposition, and statistics"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// How a fixed-count sequence is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Greedy search rejecting any collision of selection sums.
    Bruteforce,
    /// Evenly spaced bins stepping by one past the prior reach.
    Gapformula,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Bruteforce => "bruteforce",
            Method::Gapformula => "gapformula",
        }
    }

    fn build(self, b: u64, g: u64, bins: usize) -> binseq_core::Result<Sequence> {
        match self {
            Method::Bruteforce => build_gnary_bruteforce(b, g, bins),
            Method::Gapformula => build_gnary_gapformula(b, g, bins),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a sequence by the greedy least-unreachable rule.
    Construct {
        /// Schedule text, e.g. "const:2/zero-one/adj:1".
        #[arg(long)]
        schedule: String,
        /// Number of bins to build.
        #[arg(long)]
        bins: usize,
        /// Abort once a prefix tracks this many achievable-sum states.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Canonical decomposition of one integer.
    Decompose {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        bins: usize,
        /// The integer to decompose.
        #[arg(long)]
        x: BigUint,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// All decompositions of one integer, up to a limit.
    Enumerate {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        x: BigUint,
        /// Stop after this many decompositions.
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Structural uniqueness verdict for a schedule's allowed counts.
    Classify {
        #[arg(long)]
        schedule: String,
        /// Number of leading bins to classify.
        #[arg(long)]
        bins: usize,
    },
    /// Exhaustively verify decomposition uniqueness on 1..=bound.
    VerifyUnique {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        bins: usize,
        /// Upper end of the verified range.
        #[arg(long)]
        bound: BigUint,
        /// Worker threads for the range scan.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Check that every term from bin n onward shares one modulus.
    Divisibility {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        bins: usize,
        /// First bin expected to be divisible (its predecessors set the
        /// modulus).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Exact mean, variance, and absolute central moment of one bin.
    Moments {
        #[arg(long)]
        schedule: String,
        /// Bin index.
        #[arg(long)]
        n: usize,
        /// Moment order parameter: the absolute moment is E|Y−μ|^(2+δ).
        #[arg(long, default_value_t = 2)]
        delta: u32,
    },
    /// Cumulative variance, absolute moments, and squared ratio per N.
    Lyapunov {
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = 2)]
        delta: u32,
        /// Last row of the series.
        #[arg(long)]
        max_n: usize,
    },
    /// Exact model distribution of the summand count.
    ModelDist {
        #[arg(long)]
        schedule: String,
        /// Top bin N: the distribution covers bins 1..N, plus N itself
        /// with --include-top-bin.
        #[arg(long)]
        n: usize,
        /// Condition on a nonempty pick in bin N.
        #[arg(long)]
        include_top_bin: bool,
    },
    /// Summand-count tally over every integer with its top pick in bin N.
    EmpiricalDist {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        bins: usize,
        /// Top bin N.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Kolmogorov–Smirnov distance of the model distribution from the
    /// standard normal.
    Ks {
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        include_top_bin: bool,
    },
    /// Scaled absolute moments of full-count size-n bins and their
    /// boundedness check.
    #[command(name = "thm35")]
    Thm35 {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        delta: u32,
    },
    /// Build a fixed-count sequence (g picks from size-b bins).
    Gnary {
        /// Bin size.
        #[arg(long)]
        b: u64,
        /// Picks per used bin.
        #[arg(long)]
        g: u64,
        #[arg(long)]
        bins: usize,
        /// Construction method.
        #[arg(long, value_enum, default_value_t = Method::Bruteforce)]
        method: Method,
    },
    /// Gap, spacing, and representable-count report for a fixed-count
    /// sequence.
    GnaryReport {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = Method::Bruteforce)]
        method: Method,
    },
    /// Build the triangular tree (level i holds i terms).
    Tree {
        /// Number of levels.
        #[arg(long)]
        levels: usize,
    },
    /// Run every tree check: telephone recurrence, bin equivalence, and
    /// the level-recurrence readings.
    TreeCheck {
        /// Number of levels (at least 3).
        #[arg(long)]
        levels: usize,
    },
}

enum CliError {
    Usage(String),
    Domain(binseq_core::Error),
}

impl From<binseq_core::Error> for CliError {
    fn from(error: binseq_core::Error) -> Self {
        if error.is_usage() {
            CliError::Usage(error.to_string())
        } else {
            CliError::Domain(error)
        }
    }
}

fn error_kind(error: &binseq_core::Error) -> &'static str {
    use binseq_core::Error;
    match error {
        Error::Parse { .. } => "parse",
        Error::Schedule(_) => "schedule",
        Error::Precondition(_) => "precondition",
        Error::StateCap { .. } => "state-cap",
        Error::EnumerationCap(_) => "enumeration-cap",
        Error::SearchWindow { .. } => "search-window",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let out = cli.out.clone();
    match run(cli.command, format) {
        Ok(rendered) => {
            let written = match &out {
                Some(path) => std::fs::write(path, rendered.as_bytes()),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(rendered.as_bytes())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(error) => {
                    eprintln!("error: cannot write output: {error}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(error)) => {
            if format == Format::Json {
                print!("{}", render::error_json(error_kind(&error), &error.to_string()));
            } else {
                eprintln!("error: {error}");
            }
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, format: Format) -> Result<String, CliError> {
    match command {
        Command::Construct {
            schedule,
            bins,
            state_cap,
        } => cmd_construct(&schedule, bins, state_cap, format),
        Command::Decompose {
            schedule,
            bins,
            x,
            state_cap,
        } => cmd_decompose(&schedule, bins, &x, state_cap, format),
        Command::Enumerate {
            schedule,
            bins,
            x,
            limit,
            state_cap,
        } => cmd_enumerate(&schedule, bins, &x, limit, state_cap, format),
        Command::Classify { schedule, bins } => cmd_classify(&schedule, bins, format),
        Command::VerifyUnique {
            schedule,
            bins,
            bound,
            threads,
            state_cap,
        } => cmd_verify(&schedule, bins, &bound, threads, state_cap, format),
        Command::Divisibility {
            schedule,
            bins,
            n,
            state_cap,
        } => cmd_divisibility(&schedule, bins, n, state_cap, format),
        Command::Moments { schedule, n, delta } => cmd_moments(&schedule, n, delta, format),
        Command::Lyapunov {
            schedule,
            delta,
            max_n,
        } => cmd_lyapunov(&schedule, delta, max_n, format),
        Command::ModelDist {
            schedule,
            n,
            include_top_bin,
        } => cmd_model_dist(&schedule, n, include_top_bin, format),
        Command::EmpiricalDist {
            schedule,
            bins,
            n,
            state_cap,
        } => cmd_empirical_dist(&schedule, bins, n, state_cap, format),
        Command::Ks {
            schedule,
            n,
            include_top_bin,
        } => cmd_ks(&schedule, n, include_top_bin, format),
        Command::Thm35 { max_n, delta } => cmd_thm35(max_n, delta, format),
        Command::Gnary { b, g, bins, method } => cmd_gnary(b, g, bins, method, format),
        Command::GnaryReport { b, g, bins, method } => {
            cmd_gnary_report(b, g, bins, method, format)
        }
        Command::Tree { levels } => cmd_tree(levels, format),
        Command::TreeCheck { levels } => cmd_tree_check(levels, format),
    }
}

// -------------------------------------------------------------------------
// Shared plumbing.

fn schedule_of(text: &str) -> Result<BinSchedule, CliError> {
    parse_schedule(text).map_err(|error| CliError::Usage(format!("--schedule: {error}")))
}

fn no_csv(command: &str) -> CliError {
    CliError::Usage(format!(
        "--format csv is not available for {command}; use json or text"
    ))
}

fn strings(terms: &[BigUint]) -> Vec<String> {
    terms.iter().map(|t| t.to_string()).collect()
}

fn sequence_dto(seq: &Sequence) -> SequenceDto {
    SequenceDto {
        schedule: seq.schedule().render(),
        bins: seq.bins().iter().map(|bin| strings(bin)).collect(),
    }
}

fn picks_dto(d: &Decomposition) -> PicksDto {
    d.picks()
        .iter()
        .map(|(&bin, positions)| (bin, positions.iter().copied().collect()))
        .collect()
}

fn decomposition_dto(seq: &Sequence, d: &Decomposition) -> Result<DecompositionDto, CliError> {
    Ok(DecompositionDto {
        summands: strings(&d.summands(seq)?),
        picks: picks_dto(d),
    })
}

fn sum_line(seq: &Sequence, d: &Decomposition) -> Result<String, CliError> {
    Ok(strings(&d.summands(seq)?).join(" + "))
}

fn dist_dto(source: &str, schedule: &BinSchedule, pmf: &SummandPmf) -> DistDto {
    DistDto {
        source: source.to_string(),
        schedule: schedule.render(),
        bin: pmf.bin(),
        include_top_bin: pmf.include_top_bin(),
        total: pmf.total().to_string(),
        weights: pmf
            .weights()
            .iter()
            .map(|(&count, weight)| (count, weight.to_string()))
            .collect(),
        probs: pmf
            .probs()
            .iter()
            .map(|(&count, prob)| (count, render::rational(prob)))
            .collect(),
        mean: render::rational(&pmf.mean()),
        variance: render::rational(&pmf.variance()),
    }
}

fn dist_output(source: &str, schedule: &BinSchedule, pmf: &SummandPmf, format: Format) -> String {
    match format {
        Format::Json => render::json(&dist_dto(source, schedule, pmf)),
        Format::Csv => {
            let probs = pmf.probs();
            let rows = pmf
                .weights()
                .iter()
                .map(|(&count, weight)| {
                    let [exact, float] = render::csv_rational(&probs[&count]);
                    vec![count.to_string(), weight.to_string(), exact, float]
                })
                .collect();
            render::csv_table(&["count", "weight", "probExact", "probFloat"], rows)
        }
        Format::Text => {
            let mut text = format!(
                "{source} distribution at bin {} (top bin {}): total {}\n",
                pmf.bin(),
                if pmf.include_top_bin() {
                    "included"
                } else {
                    "excluded"
                },
                pmf.total()
            );
            let probs = pmf.probs();
            for (&count, weight) in pmf.weights() {
                let prob = &probs[&count];
                text.push_str(&format!(
                    "count {count}: weight {weight}, prob {}/{} (~{})\n",
                    prob.numer(),
                    prob.denom(),
                    render::float_approx(prob)
                ));
            }
            let mean = pmf.mean();
            let variance = pmf.variance();
            text.push_str(&format!(
                "mean {}/{} (~{}), variance {}/{} (~{})\n",
                mean.numer(),
                mean.denom(),
                render::float_approx(&mean),
                variance.numer(),
                variance.denom(),
                render::float_approx(&variance)
            ));
            text
        }
    }
}

// -------------------------------------------------------------------------
// Command handlers.

fn cmd_construct(
    schedule: &str,
    bins: usize,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    Ok(match format {
        Format::Json => render::json(&sequence_dto(&seq)),
        Format::Text => format!("{seq}\n"),
        Format::Csv => return Err(no_csv("construct")),
    })
}

fn cmd_decompose(
    schedule: &str,
    bins: usize,
    x: &BigUint,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    let found = decompose(&seq, x)?;
    Ok(match format {
        Format::Json => {
            let dto = match &found {
                Some(d) => DecomposeDto {
                    schedule: schedule.render(),
                    x: x.to_string(),
                    found: true,
                    summands: strings(&d.summands(&seq)?),
                    picks: picks_dto(d),
                },
                None => DecomposeDto {
                    schedule: schedule.render(),
                    x: x.to_string(),
                    found: false,
                    summands: Vec::new(),
                    picks: PicksDto::new(),
                },
            };
            render::json(&dto)
        }
        Format::Text => match &found {
            Some(d) => format!("{x} = {}\n", sum_line(&seq, d)?),
            None => format!("no decomposition: {x}\n"),
        },
        Format::Csv => return Err(no_csv("decompose")),
    })
}

fn cmd_enumerate(
    schedule: &str,
    bins: usize,
    x: &BigUint,
    limit: usize,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    let set = enumerate_decompositions(&seq, x, limit)?;
    Ok(match format {
        Format::Json => {
            let decompositions = set
                .found()
                .iter()
                .map(|d| decomposition_dto(&seq, d))
                .collect::<Result<Vec<_>, _>>()?;
            render::json(&EnumerateDto {
                schedule: schedule.render(),
                x: x.to_string(),
                limit,
                truncated: set.truncated(),
                count: set.len(),
                decompositions,
            })
        }
        Format::Text => {
            let mut text = format!(
                "{x}: {} decomposition(s){}\n",
                set.len(),
                if set.truncated() { ", truncated" } else { "" }
            );
            for d in set.found() {
                text.push_str(&format!("  {}\n", sum_line(&seq, d)?));
            }
            text
        }
        Format::Csv => return Err(no_csv("enumerate")),
    })
}

fn cmd_classify(schedule: &str, bins: usize, format: Format) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let report = classify(&schedule, bins)?;
    Ok(match format {
        Format::Json => render::json(&ClassifyDto {
            schedule: schedule.render(),
            bins,
            adjacency: report.adjacency(),
            verdict: report.verdict().to_string(),
            per_bin: report
                .per_bin()
                .iter()
                .map(|&(bin, reason)| BinReasonDto {
                    bin,
                    reason: reason.to_string(),
                })
                .collect(),
        }),
        Format::Text => {
            let mut text = format!("verdict: {}\n", report.verdict());
            for &(bin, reason) in report.per_bin() {
                text.push_str(&format!("bin {bin}: {reason}\n"));
            }
            text
        }
        Format::Csv => return Err(no_csv("classify")),
    })
}

fn cmd_verify(
    schedule: &str,
    bins: usize,
    bound: &BigUint,
    threads: usize,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let bound = u64::try_from(bound).map_err(|_| {
        CliError::Domain(binseq_core::Error::Precondition(format!(
            "bound {bound} exceeds the supported verification range"
        )))
    })?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    let report = verify_exhaustive(&seq, bound, threads)?;
    Ok(match format {
        Format::Json => {
            let finding = match report.finding() {
                EmpiricalFinding::ConfirmedUnique => FindingDto::ConfirmedUnique,
                EmpiricalFinding::Collision { x, first, second } => FindingDto::Collision {
                    x: x.to_string(),
                    first: decomposition_dto(&seq, first)?,
                    second: decomposition_dto(&seq, second)?,
                },
                EmpiricalFinding::CoverageGap { x } => FindingDto::CoverageGap { x: x.to_string() },
            };
            render::json(&VerifyDto {
                schedule: schedule.render(),
                bound,
                threads,
                unique: report.is_unique(),
                finding,
            })
        }
        Format::Text => match report.finding() {
            EmpiricalFinding::Collision { first, second, .. } => format!(
                "{report}\nfirst: {}\nsecond: {}\n",
                sum_line(&seq, first)?,
                sum_line(&seq, second)?
            ),
            _ => format!("{report}\n"),
        },
        Format::Csv => return Err(no_csv("verify-unique")),
    })
}

fn cmd_divisibility(
    schedule: &str,
    bins: usize,
    n0: usize,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    let report = divisibility_check(&seq, n0)?;
    Ok(match format {
        Format::Json => render::json(&DivisibilityDto {
            schedule: schedule.render(),
            n0: report.n0(),
            k: report.k().to_string(),
            modulus: report.modulus().to_string(),
            all_divisible: report.all_divisible(),
            first_indivisible: report.first_indivisible().map(|(bin, term)| IndivisibleDto {
                bin: *bin,
                term: term.to_string(),
            }),
        }),
        Format::Csv => {
            let (fail_bin, fail_term) = match report.first_indivisible() {
                Some((bin, term)) => (bin.to_string(), term.to_string()),
                None => (String::new(), String::new()),
            };
            render::csv_table(
                &[
                    "n0",
                    "k",
                    "modulus",
                    "allDivisible",
                    "firstIndivisibleBin",
                    "firstIndivisibleTerm",
                ],
                vec![vec![
                    report.n0().to_string(),
                    report.k().to_string(),
                    report.modulus().to_string(),
                    report.all_divisible().to_string(),
                    fail_bin,
                    fail_term,
                ]],
            )
        }
        Format::Text => {
            let mut text = format!(
                "bins before {} reach 1..={}; every term from bin {} divisible by {}: {}\n",
                report.n0(),
                report.k(),
                report.n0(),
                report.modulus(),
                report.all_divisible()
            );
            if let Some((bin, term)) = report.first_indivisible() {
                text.push_str(&format!("first indivisible: bin {bin}, term {term}\n"));
            }
            text
        }
    })
}

fn cmd_moments(schedule: &str, n: usize, delta: u32, format: Format) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let m = bin_moments(n, &schedule.allowed(n)?, delta)?;
    Ok(match format {
        Format::Json => render::json(&MomentsDto {
            schedule: schedule.render(),
            bin: m.bin(),
            delta: m.delta(),
            mu: render::rational(m.mu()),
            sigma2: render::rational(m.sigma2()),
            rho2d: render::rational(m.rho2d()),
        }),
        Format::Csv => {
            let [mu_e, mu_f] = render::csv_rational(m.mu());
            let [s2_e, s2_f] = render::csv_rational(m.sigma2());
            let [rho_e, rho_f] = render::csv_rational(m.rho2d());
            render::csv_table(
                &[
                    "bin",
                    "delta",
                    "muExact",
                    "muFloat",
                    "sigma2Exact",
                    "sigma2Float",
                    "rho2dExact",
                    "rho2dFloat",
                ],
                vec![vec![
                    m.bin().to_string(),
                    m.delta().to_string(),
                    mu_e,
                    mu_f,
                    s2_e,
                    s2_f,
                    rho_e,
                    rho_f,
                ]],
            )
        }
        Format::Text => format!(
            "bin {} (delta {}): mu {}/{} (~{}), sigma2 {}/{} (~{}), rho2d {}/{} (~{})\n",
            m.bin(),
            m.delta(),
            m.mu().numer(),
            m.mu().denom(),
            render::float_approx(m.mu()),
            m.sigma2().numer(),
            m.sigma2().denom(),
            render::float_approx(m.sigma2()),
            m.rho2d().numer(),
            m.rho2d().denom(),
            render::float_approx(m.rho2d()),
        ),
    })
}

fn cmd_lyapunov(
    schedule: &str,
    delta: u32,
    max_n: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let series = lyapunov_series(&schedule, delta, max_n)?;
    Ok(match format {
        Format::Json => render::json(&LyapunovDto {
            schedule: schedule.render(),
            delta: series.delta(),
            max_n,
            rows: series
                .rows()
                .iter()
                .map(|row| LyapunovRowDto {
                    n: row.n(),
                    s2: render::rational(row.s2()),
                    e: render::rational(row.e()),
                    squared_ratio: row.squared_ratio().as_ref().map(render::rational),
                })
                .collect(),
        }),
        Format::Csv => {
            let rows = series
                .rows()
                .iter()
                .map(|row| {
                    let [s2_e, s2_f] = render::csv_rational(row.s2());
                    let [e_e, e_f] = render::csv_rational(row.e());
                    let [r_e, r_f] = match row.squared_ratio() {
                        Some(ratio) => render::csv_rational(&ratio),
                        None => [String::new(), String::new()],
                    };
                    vec![row.n().to_string(), s2_e, s2_f, e_e, e_f, r_e, r_f]
                })
                .collect();
            render::csv_table(
                &[
                    "n",
                    "s2Exact",
                    "s2Float",
                    "eExact",
                    "eFloat",
                    "squaredRatioExact",
                    "squaredRatioFloat",
                ],
                rows,
            )
        }
        Format::Text => {
            let mut text = String::new();
            for row in series.rows() {
                let ratio = match row.squared_ratio() {
                    Some(r) => format!("{}/{} (~{})", r.numer(), r.denom(), render::float_approx(&r)),
                    None => "undefined".to_string(),
                };
                text.push_str(&format!(
                    "N={}: s2 {}/{}, e {}/{}, squared ratio {}\n",
                    row.n(),
                    row.s2().numer(),
                    row.s2().denom(),
                    row.e().numer(),
                    row.e().denom(),
                    ratio
                ));
            }
            text
        }
    })
}

fn cmd_model_dist(
    schedule: &str,
    n: usize,
    include_top_bin: bool,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let pmf = model_summand_pmf(&schedule, n, include_top_bin)?;
    Ok(dist_output("model", &schedule, &pmf, format))
}

fn cmd_empirical_dist(
    schedule: &str,
    bins: usize,
    n: usize,
    state_cap: usize,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let seq = build_sequence(&schedule, bins, state_cap)?;
    let pmf = empirical_summand_pmf(&seq, n)?;
    Ok(dist_output("empirical", &schedule, &pmf, format))
}

fn cmd_ks(
    schedule: &str,
    n: usize,
    include_top_bin: bool,
    format: Format,
) -> Result<String, CliError> {
    let schedule = schedule_of(schedule)?;
    let pmf = model_summand_pmf(&schedule, n, include_top_bin)?;
    let report = gaussian_distance(&pmf)?;
    Ok(match format {
        Format::Json => render::json(&KsDto {
            schedule: schedule.render(),
            bin: n,
            include_top_bin,
            ks_distance: report.ks_distance(),
            mean: report.mean(),
            std_dev: report.std_dev(),
            grid_size: report.grid_size(),
        }),
        Format::Csv => render::csv_table(
            &[
                "bin",
                "includeTopBin",
                "ksDistance",
                "mean",
                "stdDev",
                "gridSize",
            ],
            vec![vec![
                n.to_string(),
                include_top_bin.to_string(),
                report.ks_distance().to_string(),
                report.mean().to_string(),
                report.std_dev().to_string(),
                report.grid_size().to_string(),
            ]],
        ),
        Format::Text => format!(
            "KS distance to the standard normal at bin {}: {} (mean {}, sd {}, grid {})\n",
            n,
            report.ks_distance(),
            report.mean(),
            report.std_dev(),
            report.grid_size()
        ),
    })
}

fn cmd_thm35(max_n: usize, delta: u32, format: Format) -> Result<String, CliError> {
    let report = theorem35_check(max_n, delta)?;
    let (max_ratio, max_at) = report.max_ratio();
    Ok(match format {
        Format::Json => render::json(&Thm35Dto {
            delta: report.delta(),
            max_n: report.max_n(),
            bounded: report.bounded(),
            max_ratio: render::rational(max_ratio),
            max_ratio_at: max_at,
            sigma_is_quarter_n: report.sigma_is_quarter_n(),
            closed_form_matches_general: report.closed_form_matches_general(),
            alternating_sum_vanishes: report.alternating_sum_vanishes(),
            weighted_alternating_sum_vanishes: report.weighted_alternating_sum_vanishes(),
            rows: (1..=report.max_n())
                .map(|n| Thm35RowDto {
                    n,
                    rho: render::rational(report.rho(n).expect("rows cover 1..=maxN")),
                    ratio: render::rational(report.ratio(n).expect("rows cover 1..=maxN")),
                })
                .collect(),
        }),
        Format::Csv => {
            let rows = (1..=report.max_n())
                .map(|n| {
                    let [rho_e, rho_f] =
                        render::csv_rational(report.rho(n).expect("rows cover 1..=maxN"));
                    let [ratio_e, ratio_f] =
                        render::csv_rational(report.ratio(n).expect("rows cover 1..=maxN"));
                    vec![n.to_string(), rho_e, rho_f, ratio_e, ratio_f]
                })
                .collect();
            render::csv_table(&["n", "rhoExact", "rhoFloat", "ratioExact", "ratioFloat"], rows)
        }
        Format::Text => format!(
            "bounded: {} (max ratio {}/{} at n={})\nsigma2 = n/4: {}\nclosed form matches general pipeline: {}\nalternating sum vanishes: {}\nweighted alternating sum vanishes: {}\n",
            report.bounded(),
            max_ratio.numer(),
            max_ratio.denom(),
            max_at,
            report.sigma_is_quarter_n(),
            report.closed_form_matches_general(),
            report.alternating_sum_vanishes(),
            report.weighted_alternating_sum_vanishes()
        ),
    })
}

fn cmd_gnary(
    b: u64,
    g: u64,
    bins: usize,
    method: Method,
    format: Format,
) -> Result<String, CliError> {
    let seq = method.build(b, g, bins)?;
    Ok(match format {
        Format::Json => render::json(&sequence_dto(&seq)),
        Format::Text => format!("{seq}\n"),
        Format::Csv => return Err(no_csv("gnary")),
    })
}

fn cmd_gnary_report(
    b: u64,
    g: u64,
    bins: usize,
    method: Method,
    format: Format,
) -> Result<String, CliError> {
    let seq = method.build(b, g, bins)?;
    let report = gap_report(&seq)?;
    Ok(match format {
        Format::Json => render::json(&GnaryReportDto {
            b,
            g,
            method: method.name().to_string(),
            schedule: seq.schedule().render(),
            omegas: strings(report.omegas()),
            gaps: report.gaps().iter().map(|bin| strings(bin)).collect(),
            gap_verdicts: report.gap_verdicts().to_vec(),
            uniform_gap_is_omega_plus_one: report.uniform_gap_is_omega_plus_one().to_vec(),
            all_gaps_exceed_prior_omega: report.all_gaps_exceed_prior_omega(),
            representable: report
                .representable()
                .iter()
                .map(|row| RepresentableDto {
                    n: row.n(),
                    actual: row.actual(),
                    predicted_constant: row.predicted_constant().map(|p| p.to_string()),
                    predicted_general: row.predicted_general().to_string(),
                })
                .collect(),
        }),
        Format::Csv => {
            let rows = report
                .representable()
                .iter()
                .map(|row| {
                    vec![
                        row.n().to_string(),
                        row.actual().to_string(),
                        row.predicted_constant()
                            .map(|p| p.to_string())
                            .unwrap_or_default(),
                        row.predicted_general().to_string(),
                    ]
                })
                .collect();
            render::csv_table(
                &["n", "actual", "predictedConstant", "predictedGeneral"],
                rows,
            )
        }
        Format::Text => {
            let mut text = format!(
                "sequence: {seq}\nomegas: {}\n",
                strings(report.omegas()).join(", ")
            );
            for (idx, gaps) in report.gaps().iter().enumerate() {
                if gaps.is_empty() {
                    continue;
                }
                text.push_str(&format!(
                    "bin {} gaps: {}\n",
                    idx + 1,
                    strings(gaps).join(", ")
                ));
            }
            text.push_str(&format!(
                "all gaps exceed prior omega: {}\nuniform gap = prior omega + 1 per bin: {}\n",
                report.all_gaps_exceed_prior_omega(),
                report
                    .uniform_gap_is_omega_plus_one()
                    .iter()
                    .map(|u| u.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            for row in report.representable() {
                text.push_str(&format!(
                    "representable through bin {}: {} (predicted {})\n",
                    row.n(),
                    row.actual(),
                    row.predicted_general()
                ));
            }
            text
        }
    })
}

fn cmd_tree(levels: usize, format: Format) -> Result<String, CliError> {
    let tree = build_tree(levels)?;
    Ok(match format {
        Format::Json => render::json(&TreeDto {
            levels: tree.levels().iter().map(|level| strings(level)).collect(),
            diagonal: tree.diagonal().iter().map(|t| t.to_string()).collect(),
        }),
        Format::Text => format!("{tree}\n"),
        Format::Csv => return Err(no_csv("tree")),
    })
}

fn cmd_tree_check(levels: usize, format: Format) -> Result<String, CliError> {
    if levels < 3 {
        return Err(CliError::Usage(
            "--levels must be at least 3 for tree-check (the telephone recurrence needs three diagonal entries)"
                .to_string(),
        ));
    }
    let tree = build_tree(levels)?;
    let telephone = telephone_check(&tree)?;
    let bin_equivalence = bin_equivalence_check(levels)?;
    let recurrence = recurrence_check(&tree)?;
    Ok(match format {
        Format::Json => render::json(&TreeCheckDto {
            levels,
            telephone,
            bin_equivalence,
            passing: recurrence
                .passing()
                .iter()
                .map(|reading| reading.to_string())
                .collect(),
            readings: recurrence
                .per_reading()
                .iter()
                .map(|(reading, mismatches)| ReadingDto {
                    reading: reading.to_string(),
                    mismatches: mismatches
                        .iter()
                        .map(|m| MismatchDto {
                            level: m.level(),
                            position: m.position(),
                            built: m.built().to_string(),
                            predicted: m.predicted().to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }),
        Format::Text => {
            let mut text = format!(
                "telephone: {}\nbin equivalence: {}\n",
                if telephone { "pass" } else { "fail" },
                if bin_equivalence { "pass" } else { "fail" }
            );
            for (reading, mismatches) in recurrence.per_reading() {
                match mismatches.first() {
                    None => text.push_str(&format!("reading {reading}: pass\n")),
                    Some(first) => text.push_str(&format!(
                        "reading {reading}: {} mismatch(es), first at level {} position {} (built {}, predicted {})\n",
                        mismatches.len(),
                        first.level(),
                        first.position(),
                        first.built(),
                        first.predicted()
                    )),
                }
            }
            text
        }
        Format::Csv => return Err(no_csv("tree-check")),
    })
}
