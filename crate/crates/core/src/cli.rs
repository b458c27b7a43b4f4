//! Command-line front end. [`run`] does all the work so it can be driven
//! from tests with in-memory streams.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alternating::{chambers, chords_cross, find_chords, Chord, OrientedCycle};
use crate::error::{Error, Result};
use crate::family::{classify, search_family, write_member_files, SearchConfig, DEFAULT_GUARD_LIMIT};
use crate::graph::{EdgeId, Multigraph};
use crate::matching::{count_matchings, enumerate_matchings, is_minimally_k_matchable, PerfectMatching};
use crate::reduction::reduce;
use crate::verify::{run_suite, Suite, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "minmatch", version, about = "Perfect matchings and minimally k-matchable multigraphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// mg-v1 file, or "-" for standard input.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count perfect matchings.
    Count {
        #[command(flatten)]
        input: Input,
        /// Stop counting at this value.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// List perfect matchings as edge-id sets.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Test for minimal k-matchability.
    Minimal {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Smooth and strip K2 components down to an irreducible base.
    Reduce {
        #[command(flatten)]
        input: Input,
    },
    /// Minimality verdict plus reduction base and family name.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Chords of an M-alternating cycle with respect to a second matching.
    Chords {
        #[command(flatten)]
        input: Input,
        /// Cycle vertices in order, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<usize>,
        /// Edge ids of the matching the cycle alternates with.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        /// Edge ids of the second matching.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Edge ids marking chords as external.
        #[arg(long, value_delimiter = ',')]
        f: Vec<usize>,
    },
    /// Components spanned by edges that lie in some perfect matching.
    Chambers {
        #[command(flatten)]
        input: Input,
    },
    /// Irreducible minimally k-matchable multigraphs up to a vertex bound.
    Search {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Defaults to 6 for k <= 3 and 10 otherwise.
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Defaults to k.
        #[arg(long)]
        max_multiplicity: Option<usize>,
        /// Worker threads; defaults to the available cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Abort after generating this many graphs.
        #[arg(long, default_value_t = DEFAULT_GUARD_LIMIT)]
        guard_limit: u64,
        /// Also write each member as <hash>.mg into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a property suite and report pass/fail counts.
    Verify {
        #[arg(long, value_parser = ["lemma1", "lemma2", "oracle", "claims", "exchange"])]
        suite: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        max_vertices: usize,
        /// Random cases for the sampled suites (0 keeps the default).
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_GUARD_LIMIT)]
        guard_limit: u64,
    },
}

/// Parses `args` (program name first), executes, and returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            if json_requested {
                emit_error(stdout, "usage", &first_line(&e.to_string()));
            } else {
                let _ = write!(stderr, "{e}");
            }
            return EXIT_USAGE;
        }
    };
    let format = cli.format;
    match execute(cli.command, stdin) {
        Ok((out, status)) => {
            let _ = stdout.write_all(render(&out, format).as_bytes());
            status
        }
        Err(e) => {
            let status = match e {
                Error::ResourceGuard { .. } => EXIT_GUARD,
                Error::InvalidArgument(_) => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            };
            match format {
                Format::Json => emit_error(stdout, e.kind(), &e.to_string()),
                Format::Text => {
                    let _ = writeln!(stderr, "error: {e}");
                }
            }
            status
        }
    }
}

fn wants_json(args: &[OsString]) -> bool {
    let mut json = true;
    let mut iter = args.iter().filter_map(|a| a.to_str());
    while let Some(a) = iter.next() {
        if a == "--format" {
            json = iter.next() != Some("text");
        } else if let Some(v) = a.strip_prefix("--format=") {
            json = v != "text";
        }
    }
    json
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}

fn emit_error(out: &mut dyn Write, kind: &str, message: &str) {
    let obj = serde_json::json!({ "error": { "kind": kind, "message": message } });
    let _ = writeln!(out, "{obj}");
}

/// A command result: JSON value plus a text rendering.
struct Output {
    json: String,
    text: String,
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", out.json),
        Format::Text => out.text.clone(),
    }
}

fn output<T: Serialize>(value: &T, text: String) -> Output {
    Output { json: serde_json::to_string(value).expect("plain data serializes"), text }
}

fn read_graph(input: &Input, stdin: &mut dyn Read) -> Result<Multigraph> {
    let text = if input.input == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&input.input).map_err(|e| Error::Io(format!("{}: {e}", input.input)))?
    };
    Multigraph::parse(&text)
}

fn ids(v: &[usize]) -> Vec<EdgeId> {
    v.iter().map(|&i| EdgeId(i)).collect()
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct CountOut {
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u64>,
}

#[derive(Serialize)]
struct ChordReport<'a> {
    cycle: &'a OrientedCycle,
    chords: &'a [Chord],
    /// Index pairs of crossing chords.
    crossings: Vec<(usize, usize)>,
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<(Output, i32)> {
    let out = match command {
        Command::Count { input, cap } => {
            let g = read_graph(&input, stdin)?;
            let count = count_matchings(&g, cap);
            output(&CountOut { count, cap }, format!("{count}\n"))
        }
        Command::Enumerate { input, limit } => {
            let g = read_graph(&input, stdin)?;
            let set = enumerate_matchings(&g, limit);
            let mut text: String = set.matchings.iter().map(|m| join(m.edges()) + "\n").collect();
            if !set.exhaustive {
                text.push_str("(truncated)\n");
            }
            output(&set, text)
        }
        Command::Minimal { input, k } => {
            let g = read_graph(&input, stdin)?;
            let v = is_minimally_k_matchable(&g, k);
            let text = match (v.is_minimal, v.witness_edge) {
                (true, _) => format!("minimally {k}-matchable\n"),
                (false, Some(e)) => format!("not minimal: deleting edge {e} leaves {k} perfect matchings\n"),
                (false, None) => format!("not {k}-matchable ({} perfect matchings)\n", v.count),
            };
            output(&v, text)
        }
        Command::Reduce { input } => {
            let g = read_graph(&input, stdin)?;
            let t = reduce(&g);
            let text = format!(
                "{} steps, {} K2 stripped\nbase:\n{}",
                t.steps.len(),
                t.stripped_k2,
                t.base.to_mg_string()
            );
            output(&t, text)
        }
        Command::Classify { input, k } => {
            let g = read_graph(&input, stdin)?;
            let c = classify(&g, k)?;
            let text = match (&c.base, c.q) {
                (Some(base), Some(q)) => format!(
                    "minimally {k}-matchable; base {} with {q} K2\n{base}",
                    c.name.unwrap_or("(unnamed)")
                ),
                _ => format!("not minimally {k}-matchable\n"),
            };
            output(&c, text)
        }
        Command::Chords { input, cycle, m, n, f } => {
            let g = read_graph(&input, stdin)?;
            let m = PerfectMatching::new(&g, ids(&m))?;
            let n = PerfectMatching::new(&g, ids(&n))?;
            let c = OrientedCycle::from_vertices(&g, cycle, Some(&m))?;
            let chords = find_chords(&g, &c, &m, &n, &ids(&f))?;
            let mut crossings = Vec::new();
            for i in 0..chords.len() {
                for j in i + 1..chords.len() {
                    if chords_cross(&c, &chords[i], &chords[j]) {
                        crossings.push((i, j));
                    }
                }
            }
            let mut text: String = chords
                .iter()
                .map(|ch| {
                    let ext = if ch.external { " external" } else { "" };
                    format!("{:?} {}..{}{ext}: {}\n", ch.kind, ch.start, ch.end, join(&ch.vertices)).to_lowercase()
                })
                .collect();
            for (i, j) in &crossings {
                text.push_str(&format!("chords {i} and {j} cross\n"));
            }
            output(&ChordReport { cycle: &c, chords: &chords, crossings }, text)
        }
        Command::Chambers { input } => {
            let g = read_graph(&input, stdin)?;
            let parts = chambers(&g);
            let text = parts.iter().map(|p| join(p) + "\n").collect();
            output(&serde_json::json!({ "chambers": parts }), text)
        }
        Command::Search { k, max_vertices, max_multiplicity, jobs, guard_limit, out_dir } => {
            let mut cfg = SearchConfig::new(k, max_vertices.unwrap_or_else(|| SearchConfig::default_max_vertices(k)));
            if let Some(mm) = max_multiplicity {
                cfg.max_multiplicity = mm;
            }
            if let Some(j) = jobs {
                cfg.worker_count = j;
            }
            cfg.guard_limit = guard_limit;
            let report = search_family(&cfg)?;
            if let Some(dir) = out_dir {
                write_member_files(&report, &dir)?;
            }
            let mut text = format!(
                "k = {k}: {} members on at most {} vertices\n",
                report.members.len(),
                report.complete_up_to_vertices
            );
            for m in &report.members {
                text.push_str(&format!(
                    "{} n={} m={} matchings={}: {}\n",
                    m.hash,
                    m.vertex_count,
                    m.edge_count,
                    m.matching_count,
                    m.canonical.trim_end().replace('\n', "; ")
                ));
            }
            output(&report, text)
        }
        Command::Verify { suite, k, max_vertices, trials, jobs, guard_limit } => {
            let suite: Suite = suite.parse()?;
            let mut opts = SuiteOptions::new(k, max_vertices);
            opts.trials = trials;
            opts.guard_limit = guard_limit;
            if let Some(j) = jobs {
                opts.workers = j;
            }
            let report = run_suite(suite, &opts)?;
            let mut text = format!(
                "{:?} k={k}: {} checked, {} passed, {} failed\n",
                report.suite, report.checked, report.passed, report.failed
            )
            .to_lowercase();
            for f in &report.failures {
                text.push_str(&format!("  {f}\n"));
            }
            let status = if report.ok() { EXIT_OK } else { EXIT_DOMAIN };
            return Ok((output(&report, text), status));
        }
    };
    Ok((out, EXIT_OK))
}
