//! Command-line interface. Exit codes: 0 when the property holds or the
//! construction succeeds, 1 when the property fails, 2 on usage, input or
//! capacity errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::counting::{a_formula, a_search, c_of, c_search, C_NOTE};
use crate::error::{Error, Result};
use crate::graph::{
    graph_of, independence_number, is_ke, is_ke_via_theorem, is_well_covered, max_independent_sets,
    maximum_matching, wellcovered_roundtrip, Graph,
};
use crate::iso::are_isomorphic;
use crate::maximal::{as_dual_pairing, complete_to_maximal, extend, typical_collection};
use crate::sets::{tokens, SetFamily};
use crate::sweep::run_sweep;
use crate::verify::{check_hke_definition, check_hke_pairwise, check_hke_partition};

#[derive(Parser, Debug)]
#[command(
    name = "hke",
    version,
    about = "Hereditary König–Egerváry collections and graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FamilyFile {
    /// Family file: one member set per line
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct GraphFile {
    /// Graph file: `v` and `e` lines
    #[arg(short = 'G', long = "graph")]
    graph: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Definition,
    Pairwise,
    Partition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KeMethod {
    Direct,
    Theorem,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a family is hke
    Verify {
        #[command(flatten)]
        input: FamilyFile,
        #[arg(long, value_enum, default_value = "definition")]
        mode: Mode,
        /// Accepted for compatibility; the verdict is always JSON
        #[arg(long)]
        json: bool,
    },
    /// Print the typical collection for alpha
    Typical {
        #[arg(long)]
        alpha: usize,
    },
    /// Build D with A∩D = E so that F ∪ {D} is hke
    Extend {
        #[command(flatten)]
        input: FamilyFile,
        /// Position of A in the family, from 0
        #[arg(long)]
        base: usize,
        /// Labels of E, whitespace separated
        #[arg(long, allow_hyphen_values = true)]
        subset: String,
    },
    /// Complete an hke family to a maximal one
    Complete {
        #[command(flatten)]
        input: FamilyFile,
    },
    /// Dual pairing of a maximal hke family
    Dual {
        #[command(flatten)]
        input: FamilyFile,
    },
    /// Isomorphism of two families
    Iso {
        #[command(flatten)]
        input: FamilyFile,
        #[arg(short = 'g', long = "other")]
        other: PathBuf,
    },
    /// Graph of a family
    GraphOf {
        #[command(flatten)]
        input: FamilyFile,
    },
    /// Maximum independent sets of a graph
    Omega {
        #[command(flatten)]
        input: GraphFile,
    },
    /// A maximum matching, as `m u v` lines
    Matching {
        #[command(flatten)]
        input: GraphFile,
    },
    /// König–Egerváry test
    Ke {
        #[command(flatten)]
        input: GraphFile,
        #[arg(long, value_enum, default_value = "direct")]
        method: KeMethod,
    },
    /// Well-covered test, optionally with the G(Ω(G)) = G round trip
    Wellcovered {
        #[command(flatten)]
        input: GraphFile,
        #[arg(long)]
        roundtrip: bool,
    },
    /// a(alpha, n) by formula and/or exhaustive search
    Count {
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["formula", "both"])]
        search: bool,
        #[arg(long, conflicts_with = "both")]
        formula: bool,
        #[arg(long)]
        both: bool,
        /// Also write the search witness in family format
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// c(n), with the search check for n <= 7
    Cn {
        #[arg(long)]
        n: usize,
    },
    /// Cross-validate the graph theorems on exhaustive and random graphs
    Sweep {
        #[arg(long = "max-vertices")]
        max_vertices: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Experimental: whether Ω(G) and Ω(H) are isomorphic
    Equiv {
        #[command(flatten)]
        input: GraphFile,
        #[arg(short = 'H', long = "other")]
        other: PathBuf,
    },
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path)
        .map_err(|e| Error::PreconditionFailed(format!("cannot read {}: {e}", path.display())))
}

fn read_family(path: &Path) -> Result<SetFamily> {
    SetFamily::parse(&read(path)?)
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::PreconditionFailed(format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    emit(out, &format!("{value}\n"))
}

fn exit(holds: bool) -> i32 {
    if holds {
        0
    } else {
        1
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify { input, mode, .. } => {
            let f = read_family(&input.file)?;
            let v = match mode {
                Mode::Definition => check_hke_definition(&f)?,
                Mode::Pairwise => check_hke_pairwise(&f)?,
                Mode::Partition => check_hke_partition(&f)?,
            };
            emit_json(out, &serde_json::to_value(&v).expect("verdict serializes"))?;
            Ok(exit(v.holds))
        }
        Command::Typical { alpha } => {
            emit(out, &typical_collection(alpha)?.render())?;
            Ok(0)
        }
        Command::Extend {
            input,
            base,
            subset,
        } => {
            let f = read_family(&input.file)?;
            let labels: Vec<&str> = tokens(&subset).into_iter().map(|t| t.1).collect();
            let e = f.set_from_labels(&labels)?;
            let ext = extend(&f, base, e)?;
            if !ext.fresh.is_empty() {
                emit(out, &format!("# fresh: {}\n", ext.fresh.join(" ")))?;
            }
            emit(out, &format!("{}\n", ext.d_labels().join(" ")))?;
            Ok(0)
        }
        Command::Complete { input } => {
            let c = complete_to_maximal(&read_family(&input.file)?)?;
            if !c.fresh.is_empty() {
                emit(out, &format!("# fresh: {}\n", c.fresh.join(" ")))?;
            }
            emit(out, &c.family.render())?;
            Ok(0)
        }
        Command::Dual { input } => {
            let p = as_dual_pairing(&read_family(&input.file)?)?;
            emit_json(out, &serde_json::to_value(&p).expect("pairing serializes"))?;
            Ok(0)
        }
        Command::Iso { input, other } => {
            let (f1, f2) = (read_family(&input.file)?, read_family(&other)?);
            let b = are_isomorphic(&f1, &f2);
            emit_json(
                out,
                &json!({ "isomorphic": b.is_some(), "forward": b.as_ref().map(|b| &b.forward) }),
            )?;
            Ok(exit(b.is_some()))
        }
        Command::GraphOf { input } => {
            emit(out, &graph_of(&read_family(&input.file)?)?.render())?;
            Ok(0)
        }
        Command::Omega { input } => {
            emit(
                out,
                &max_independent_sets(&read_graph(&input.graph)?)?.render(),
            )?;
            Ok(0)
        }
        Command::Matching { input } => {
            let m = maximum_matching(&read_graph(&input.graph)?)?;
            for [u, v] in &m.edges {
                emit(out, &format!("m {u} {v}\n"))?;
            }
            Ok(0)
        }
        Command::Ke { input, method } => {
            let g = read_graph(&input.graph)?;
            let mut report =
                json!({ "method": format!("{method:?}").to_lowercase(), "vertices": g.len() });
            let mut verdict = None;
            if method != KeMethod::Theorem {
                let alpha = independence_number(&g)?;
                let mu = maximum_matching(&g)?.size();
                let ke = is_ke(&g)?;
                report["alpha"] = json!(alpha);
                report["mu"] = json!(mu);
                report["direct"] = json!(ke);
                verdict = Some(ke);
            }
            if method != KeMethod::Direct {
                let v = is_ke_via_theorem(&g)?;
                if verdict.is_some_and(|d| d != v.holds) {
                    return Err(Error::TheoremViolation(format!(
                        "direct KE test says {}, theorem route says {}",
                        verdict.unwrap(),
                        v.holds
                    )));
                }
                report["theorem"] = serde_json::to_value(&v).expect("verdict serializes");
                verdict = Some(v.holds);
            }
            let ke = verdict.expect("some method ran");
            report["ke"] = json!(ke);
            emit_json(out, &report)?;
            Ok(exit(ke))
        }
        Command::Wellcovered { input, roundtrip } => {
            let g = read_graph(&input.graph)?;
            let wc = is_well_covered(&g)?;
            let mut report = json!({ "well_covered": wc });
            let mut holds = wc;
            if roundtrip {
                let rt = if wc {
                    Some(wellcovered_roundtrip(&g)?)
                } else {
                    None
                };
                report["roundtrip"] = json!(rt);
                holds &= rt == Some(true);
            }
            emit_json(out, &report)?;
            Ok(exit(holds))
        }
        Command::Count {
            alpha,
            n,
            search,
            formula,
            both,
            witness,
        } => {
            let value = a_formula(alpha, n)?;
            if !(search || both) || formula {
                emit_json(
                    out,
                    &json!({ "alpha": alpha, "n": n, "formula_value": value }),
                )?;
                return Ok(0);
            }
            let r = a_search(alpha, n)?;
            if let Some(path) = witness {
                std::fs::write(&path, r.witness.render()).map_err(|e| {
                    Error::PreconditionFailed(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            emit_json(
                out,
                &serde_json::to_value(r.report()).expect("report serializes"),
            )?;
            Ok(exit(r.max_size as u128 == value))
        }
        Command::Cn { n } => {
            let c = c_of(n)?;
            let search = if n <= crate::counting::C_SEARCH_MAX_N {
                let mut rep = c_search(n)?.report();
                rep.note = Some(C_NOTE.to_owned());
                Some(rep)
            } else {
                None
            };
            emit_json(
                out,
                &json!({ "n": n, "c": c, "note": C_NOTE, "search": search }),
            )?;
            Ok(0)
        }
        Command::Sweep {
            max_vertices,
            samples,
            seed,
        } => {
            let low = max_vertices.clamp(1, 4);
            let r = run_sweep(max_vertices, samples, low, max_vertices.max(low), seed)?;
            emit_json(out, &serde_json::to_value(&r).expect("report serializes"))?;
            Ok(exit(r.holds))
        }
        Command::Equiv { input, other } => {
            let g = read_graph(&input.graph)?;
            let h = read_graph(&other)?;
            let (og, oh) = (max_independent_sets(&g)?, max_independent_sets(&h)?);
            let b = are_isomorphic(&og, &oh);
            emit_json(
                out,
                &json!({ "omega_isomorphic": b.is_some(), "forward": b.as_ref().map(|b| &b.forward) }),
            )?;
            Ok(exit(b.is_some()))
        }
    }
}
