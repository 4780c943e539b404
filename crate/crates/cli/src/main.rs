mod render;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use parahecke::commute::{
    self, Certificate, LiftSource, RowOptions, ScanOptions, Table, Verdict, DEFAULT_GUARD,
};
use parahecke::group::{Bound, CoxeterGroup};
use parahecke::heaps::Limits;
use parahecke::hecke::HeckeAlgebra;
use parahecke::{Bond, CoxeterDiagram, Error, Node};
use serde_json::json;

#[derive(Parser)]
#[command(name = "parahecke", version, about = "Parabolic Hecke algebras and commutativity certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Target {
    /// Diagram spec, e.g. "E8", "~G2", "B2^{1,2}", "matrix{3; 1-2:4; 2-3:3}".
    #[arg(long)]
    diagram: String,
    /// Remove one node: I = S \ {i}.
    #[arg(long, conflicts_with = "subset")]
    remove: Option<String>,
    /// Comma-separated subset I.
    #[arg(long)]
    subset: Option<String>,
}

impl Target {
    fn group(&self) -> Result<Arc<CoxeterGroup>> {
        Ok(CoxeterGroup::from_spec(&self.diagram)?)
    }

    fn subset(&self, d: &CoxeterDiagram) -> Result<BTreeSet<Node>> {
        match (&self.remove, &self.subset) {
            (Some(i), None) => Ok(d.complement_of(d.node(i)?)),
            (None, Some(s)) => Ok(d.parse_subset(s)?),
            _ => bail!("give exactly one of --remove or --subset"),
        }
    }
}

#[derive(Args, Clone, Copy)]
struct Search {
    /// Longest representative length to enumerate.
    #[arg(long)]
    max_length: Option<usize>,
    /// Braid closure class limit.
    #[arg(long, default_value_t = Limits::default().max_classes)]
    max_classes: usize,
    /// State guard for Bruhat searches.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
    /// Worker threads for scans.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl Search {
    fn row_options(&self, max_n: usize) -> RowOptions {
        let limits = Limits { max_classes: self.max_classes, ..Limits::default() };
        RowOptions { limits, guard: self.guard, max_n, always_second: false }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Look up the verdict in the classification.
    Classify(Target),
    /// Compare structure constants c(u,v) and c(v,u) over all pairs.
    Scan {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
    },
    /// Automorphism search for pi(w) = w^-1 over minimal representatives.
    Opposition {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
    },
    /// Double cosets W_I \ W / W_I.
    Cosets {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
    },
    /// Poincare polynomial W_I(q); the whole group when no subset is given.
    Poincare {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        subset: Option<String>,
    },
    /// Certify an explicit witness.
    Certify {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = CertifyMethod::Decomposition)]
        method: CertifyMethod,
        /// u (decomposition and heap methods).
        #[arg(long)]
        u: Option<String>,
        /// z in W_I (decomposition), or w_I (heap).
        #[arg(long)]
        z: Option<String>,
        /// v (decomposition).
        #[arg(long)]
        v: Option<String>,
        /// k (heap).
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        search: Search,
    },
    /// Verify rows of the word table.
    VerifyTable {
        /// Row id, or a family member such as "D_{7,5}".
        #[arg(long)]
        row: Option<String>,
        /// Family parameters "n,i" for a parametrized row.
        #[arg(long)]
        params: Option<String>,
        /// Table file; defaults to the built-in table.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Largest rank for parametrized rows.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Double coset sizes and involution flags for I = S \ {i}.
    Involutions {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        remove: String,
    },
    /// Re-verify a table row in a diagram with larger bonds.
    Lift {
        #[arg(long)]
        row: String,
        #[arg(long)]
        params: Option<String>,
        /// Target diagram spec with the same node names.
        #[arg(long, required_unless_present = "raise", conflicts_with = "raise")]
        target: Option<String>,
        /// Raise a bond of the row's own diagram, e.g. "0-1:5" or "1-2:inf"; repeatable.
        #[arg(long)]
        raise: Vec<String>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        search: Search,
    },
    /// Re-check certificates (one JSON object per line) from a file or stdin.
    Recheck {
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyMethod {
    Decomposition,
    Heap,
    Path,
}

/// Result of a command: output lines and whether any verdict was inconclusive.
struct Outcome {
    lines: Vec<String>,
    inconclusive: bool,
}

impl Outcome {
    fn done(lines: Vec<String>) -> Outcome {
        Outcome { lines, inconclusive: false }
    }

    fn certificates(certs: &[Certificate], format: Format) -> Outcome {
        let lines = certs
            .iter()
            .map(|c| match format {
                Format::Json => c.to_json(),
                Format::Text => render::certificate(c),
            })
            .collect();
        Outcome { lines, inconclusive: certs.iter().any(|c| c.verdict == Verdict::Inconclusive) }
    }
}

fn load_table(path: &Option<PathBuf>) -> Result<Table> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(commute::parse_table(&text)?)
        }
        None => Ok(commute::embedded_table().clone()),
    }
}

fn parse_params(text: &Option<String>) -> Result<Option<(usize, usize)>> {
    let Some(t) = text else { return Ok(None) };
    let (n, i) = t.split_once(',').context("--params takes n,i")?;
    Ok(Some((n.trim().parse()?, i.trim().parse()?)))
}

fn words_for_row(table: &Table, row: &str, params: &Option<String>, max_n: usize) -> Result<Vec<commute::WordSet>> {
    let params = parse_params(params)?;
    let (r, implied) = table.resolve(row).with_context(|| format!("no table row `{row}`"))?;
    match (params.or(implied), r.family) {
        (Some(p), Some(_)) => Ok(vec![r.instantiate(Some(p))?]),
        (None, Some(_)) => Ok(r.instances(max_n)?),
        (Some(_), None) => bail!("row `{row}` takes no parameters"),
        (None, None) => Ok(vec![r.instantiate(None)?]),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Classify(target) => {
            let d = CoxeterDiagram::parse(&target.diagram)?;
            let subset = target.subset(&d)?;
            let c = commute::classify(&d, &subset)?;
            let line = match format {
                Format::Json => serde_json::to_string(&c)?,
                Format::Text => render::classification(&c),
            };
            Ok(Outcome { lines: vec![line], inconclusive: false })
        }
        Command::Scan { target, search } => {
            let g = target.group()?;
            let subset = target.subset(g.diagram())?;
            let options = ScanOptions { bound: search.max_length, threads: search.threads };
            let cert = commute::direct_commutativity_scan(&g, &subset, options)?;
            Ok(Outcome::certificates(&[cert], format))
        }
        Command::Opposition { target, search } => {
            let g = target.group()?;
            let subset = target.subset(g.diagram())?;
            let cert = commute::opposition_commutativity(&g, &subset, search.max_length)?;
            Ok(Outcome::certificates(&[cert], format))
        }
        Command::Cosets { target, search } => {
            let g = target.group()?;
            let d = g.diagram();
            let subset = target.subset(d)?;
            let bound = search.max_length.map_or(Bound::All, Bound::Length);
            let records = g.double_cosets(&subset, bound)?;
            Ok(Outcome::done(render::cosets(d, &records, format)))
        }
        Command::Poincare { diagram, subset } => {
            let algebra = HeckeAlgebra::from_spec(diagram)?;
            let d = algebra.diagram();
            let subset = match subset {
                Some(s) => d.parse_subset(s)?,
                None => d.all_nodes().into_iter().collect(),
            };
            let p = algebra.poincare_polynomial(&subset)?;
            let text = algebra.format_poly(&p);
            let line = match format {
                Format::Json => json!({
                    "diagram": d.to_spec(),
                    "subset": subset.iter().map(|&s| d.name(s)).collect::<Vec<_>>(),
                    "poincare": text,
                    "order": p.eval_uniform(1).to_string(),
                })
                .to_string(),
                Format::Text => text,
            };
            Ok(Outcome::done(vec![line]))
        }
        Command::Certify { target, method, u, z, v, k, search } => {
            let g = target.group()?;
            let d = g.diagram();
            let subset = target.subset(d)?;
            let word = |w: &Option<String>, name: &str| -> Result<Vec<Node>> {
                match w {
                    Some(t) => Ok(d.parse_word(t)?),
                    None => bail!("--{name} is required for this method"),
                }
            };
            let cert = match method {
                CertifyMethod::Decomposition => commute::verify_no_reverse_decomposition(
                    &g,
                    &subset,
                    &word(u, "u")?,
                    &word(z, "z")?,
                    &word(v, "v")?,
                    search.guard,
                )?,
                CertifyMethod::Heap => {
                    let removed: Vec<Node> = d.all_nodes().into_iter().filter(|s| !subset.contains(s)).collect();
                    let [i] = removed[..] else { bail!("the heap method needs exactly one removed node") };
                    let k = match k {
                        Some(k) => d.node(k)?,
                        None => bail!("--k is required for the heap method"),
                    };
                    let limits = search.row_options(8).limits;
                    commute::verify_heap_exclusion(&g, &word(u, "u")?, &word(z, "z")?, i, k, limits)?
                }
                CertifyMethod::Path => commute::path_witness(&g, &subset)?,
            };
            Ok(Outcome::certificates(&[cert], format))
        }
        Command::VerifyTable { row, params, table, max_n, search } => {
            let table = load_table(table)?;
            let sets = match row {
                Some(r) => words_for_row(&table, r, params, *max_n)?,
                None => {
                    if params.is_some() {
                        bail!("--params needs --row");
                    }
                    let mut all = Vec::new();
                    for r in table.rows() {
                        all.extend(r.instances(*max_n)?);
                    }
                    all
                }
            };
            let options = search.row_options(*max_n);
            let certs = verify_all(&sets, options, search.threads)?;
            Ok(Outcome::certificates(&certs, format))
        }
        Command::Involutions { diagram, remove } => {
            let g = CoxeterGroup::from_spec(diagram)?;
            let i = g.diagram().node(remove)?;
            let report = commute::involution_report(&g, i)?;
            let lines = match format {
                Format::Json => vec![serde_json::to_string(&report)?],
                Format::Text => render::involutions(&report),
            };
            Ok(Outcome::done(lines))
        }
        Command::Lift { row, params, target, raise, table, search } => {
            let table = load_table(table)?;
            let sets = words_for_row(&table, row, params, 8)?;
            let [ws] = &sets[..] else { bail!("lift needs a single row instance; give --params") };
            let target = match target {
                Some(t) => CoxeterDiagram::parse(t)?,
                None => raised(ws.diagram(), raise)?,
            };
            let cert = commute::lift_witness(&LiftSource::Row(ws.clone()), &target, search.row_options(8))?;
            Ok(Outcome::certificates(&[cert], format))
        }
        Command::Recheck { file } => {
            let text = match file {
                Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                None => std::io::read_to_string(std::io::stdin())?,
            };
            let mut lines = Vec::new();
            let mut failed = false;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let cert = Certificate::from_json(line)?;
                let ok = cert.recheck()?;
                failed |= !ok;
                lines.push(match format {
                    Format::Json => json!({"case": cert.case, "recheck": ok}).to_string(),
                    Format::Text => format!("{}: {}", cert.case, if ok { "ok" } else { "MISMATCH" }),
                });
            }
            if failed {
                for l in &lines {
                    println!("{l}");
                }
                bail!("some certificates did not re-check");
            }
            Ok(Outcome::done(lines))
        }
    }
}

fn raised(d: &CoxeterDiagram, raise: &[String]) -> Result<CoxeterDiagram> {
    let mut bonds = Vec::new();
    for r in raise {
        let parse = || -> Option<(&str, &str, &str)> {
            let (pair, m) = r.split_once(':')?;
            let (s, t) = pair.split_once('-')?;
            Some((s.trim(), t.trim(), m.trim()))
        };
        let (s, t, m) = parse().with_context(|| format!("--raise takes s-t:m, got `{r}`"))?;
        let m = match m {
            "inf" => Bond::Infinite,
            m => Bond::Finite(m.parse().with_context(|| format!("bad bond `{m}`"))?),
        };
        bonds.push((d.node(s)?, d.node(t)?, m));
    }
    Ok(d.with_bonds(&bonds))
}

/// Verifies word sets on `threads` workers; output keeps the input order.
fn verify_all(sets: &[commute::WordSet], options: RowOptions, threads: usize) -> Result<Vec<Certificate>> {
    let threads = threads.clamp(1, sets.len().max(1));
    let results: Vec<(usize, parahecke::Result<Certificate>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (t..sets.len())
                        .step_by(threads)
                        .map(|idx| (idx, commute::verify_words(&sets[idx], options)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut ordered: Vec<Option<Certificate>> = vec![None; sets.len()];
    for (idx, r) in results {
        ordered[idx] = Some(r.with_context(|| format!("row {}", sets[idx].case))?);
    }
    Ok(ordered.into_iter().map(|c| c.expect("every row verified")).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for l in &out.lines {
                println!("{l}");
            }
            if out.inconclusive {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::GuardExceeded(_)) | Some(Error::LimitExceeded(_)) => {
                println!("{}", json!({"verdict": "inconclusive", "reason": e.to_string()}));
                ExitCode::from(2)
            }
            _ => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
