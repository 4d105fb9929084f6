//! Command-line front end.
//!
//! Exit codes: 0 when the property holds, 1 when it fails (a certificate is
//! printed), 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::amalgam::{amalgamate, reproduce_no_amalgam, AmalgamMode, FactValue};
use crate::error::{Error, Result};
use crate::format;
use crate::free::truncate_free;
use crate::generic::{chain_is_strong, generic_prefix};
use crate::map::PartialMap;
use crate::named;
use crate::ordering::{find_hf, find_hf_over, verify_hf, HfCheck, HfSearch};
use crate::predim::{delta, find_orientation, in_class_or, OrientationSearch};
use crate::pstss::{PartialSts, VertexSet};
use crate::strong::{is_n_strong, is_strong, minimal_pair_chain, StrongResult};
use crate::trees::tree_above;

pub const DEFAULT_SEED: u64 = 20240526;

#[derive(Parser, Debug)]
#[command(name = "freests", about = "Free and unconfined Steiner triple systems")]
struct Cli {
    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Greedy HF-ordering search; prints a confined core on failure.
    CheckUnconfined {
        pstss: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints an HF-ordering, optionally with a base as initial segment.
    HfOrder {
        pstss: PathBuf,
        #[arg(long, value_delimiter = ',')]
        over: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    VerifyOrder { pstss: PathBuf, hforder: PathBuf },
    /// Vertices minus blocks.
    Delta { pstss: PathBuf },
    /// Strongness of a base, or n-strongness with `-n`.
    Strong {
        pstss: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<String>,
        #[arg(short = 'n')]
        grade: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Orient {
        pstss: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ClassOr { pstss: PathBuf },
    /// Free truncation with `k` generators and `L` levels.
    Free {
        #[arg(long)]
        generators: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amalgamates two structures over the base named by the glue file.
    Amalgamate {
        b: PathBuf,
        c: PathBuf,
        #[arg(long)]
        glue: PathBuf,
        #[arg(short = 'n')]
        grade: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binary tree above a vertex of a free truncation.
    Tree {
        #[arg(long)]
        generators: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        above: String,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    MinpairChain {
        #[arg(short = 'k')]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints a named structure.
    Example {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ReportNoAmalgam {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain of strong extensions inside free truncations.
    Generic {
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

/// Outcome of a subcommand: whether the property held.
type Outcome = Result<bool>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    })
}

fn read_pstss(path: &Path) -> Result<PartialSts> {
    format::parse_pstss(&read(path)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    })
}

/// Writes to `--out` if given, otherwise to standard output.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn names_set(p: &PartialSts, names: &[String]) -> Result<VertexSet> {
    p.ids(names.iter().filter(|n| !n.is_empty()))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::CheckUnconfined { pstss, out: path } => {
            let p = read_pstss(&pstss)?;
            match find_hf(&p) {
                HfSearch::Ordered(o) => {
                    let _ = writeln!(out, "unconfined");
                    if let Some(path) = path {
                        write(&path, &format::write_hforder(&p, &o))?;
                    }
                    Ok(true)
                }
                HfSearch::Confined(core) => {
                    let _ = writeln!(out, "confined core of {} vertices", core.core.len());
                    emit(out, path.as_deref(), &format::write_core(&p, &core))?;
                    Ok(false)
                }
            }
        }
        Command::HfOrder { pstss, over, out: path } => {
            let p = read_pstss(&pstss)?;
            let search = match over {
                Some(names) => find_hf_over(&p, &names_set(&p, &names)?)?,
                None => find_hf(&p),
            };
            match search {
                HfSearch::Ordered(o) => {
                    emit(out, path.as_deref(), &format::write_hforder(&p, &o))?;
                    Ok(true)
                }
                HfSearch::Confined(core) => {
                    let _ = writeln!(out, "confined core of {} vertices", core.core.len());
                    let _ = out.write_all(format::write_core(&p, &core).as_bytes());
                    Ok(false)
                }
            }
        }
        Command::VerifyOrder { pstss, hforder } => {
            let p = read_pstss(&pstss)?;
            let seq = format::parse_hforder_in(&p, &read(&hforder)?)?;
            match verify_hf(&p, &seq)? {
                HfCheck::Ok(_) => {
                    let _ = writeln!(out, "ok");
                    Ok(true)
                }
                HfCheck::Violation(v) => {
                    let [b0, b1] = v.blocks.map(|b| p.block_names(&b).join(" "));
                    let _ = writeln!(
                        out,
                        "violation at {}: blocks {{{b0}}} and {{{b1}}} lie below it",
                        p.name(v.vertex)
                    );
                    Ok(false)
                }
            }
        }
        Command::Delta { pstss } => {
            let p = read_pstss(&pstss)?;
            let _ = writeln!(out, "{}", delta(&p));
            Ok(true)
        }
        Command::Strong {
            pstss,
            base,
            grade,
            out: path,
        } => {
            let p = read_pstss(&pstss)?;
            let a = names_set(&p, &base)?;
            if let Some(n) = grade {
                let holds = is_n_strong(&a, &p, n)?;
                let _ = writeln!(out, "{}", if holds { format!("{n}-strong") } else { format!("not {n}-strong") });
                return Ok(holds);
            }
            match is_strong(&a, &p)? {
                StrongResult::Strong(o) => {
                    let _ = writeln!(out, "strong");
                    emit(out, path.as_deref(), &format::write_hforder(&p, &o))?;
                    Ok(true)
                }
                StrongResult::NotStrong(core) => {
                    let _ = writeln!(out, "not strong");
                    emit(out, path.as_deref(), &format::write_core(&p, &core))?;
                    Ok(false)
                }
            }
        }
        Command::Orient { pstss, out: path } => {
            let p = read_pstss(&pstss)?;
            match find_orientation(&p) {
                OrientationSearch::Oriented(o) => {
                    emit(out, path.as_deref(), &format::write_orientation(&p, &o))?;
                    Ok(true)
                }
                OrientationSearch::HallViolation(blocks) => {
                    let _ = writeln!(out, "no orientation: {} blocks on fewer vertices", blocks.len());
                    for b in &blocks {
                        let _ = writeln!(out, "{}", p.block_names(b).join(" "));
                    }
                    Ok(false)
                }
            }
        }
        Command::ClassOr { pstss } => {
            let p = read_pstss(&pstss)?;
            let holds = in_class_or(&p)?;
            let _ = writeln!(out, "{holds}");
            Ok(holds)
        }
        Command::Free {
            generators,
            levels,
            out: path,
        } => {
            let f = truncate_free(generators, levels)?;
            let p = f.carrier();
            let _ = writeln!(out, "{} vertices, {} blocks", p.len(), p.blocks().len());
            if let Some(path) = path {
                write(&path, &format::write_pstss(p))?;
                write(&sibling(&path, ".levels"), &f.levels_text())?;
            }
            Ok(true)
        }
        Command::Amalgamate {
            b,
            c,
            glue,
            grade,
            out: path,
        } => {
            let (pb, pc) = (read_pstss(&b)?, read_pstss(&c)?);
            let pairs = format::parse_glue(&read(&glue)?)?;
            let glue = PartialMap::from_names(&pb, &pc, &pairs)?;
            let mode = grade.map_or(AmalgamMode::Full, AmalgamMode::Graded);
            let r = match amalgamate(&pb, &pc, &glue, mode) {
                Err(Error::PostconditionFailed(what)) => {
                    let _ = writeln!(out, "postcondition failed: {what}");
                    return Ok(false);
                }
                other => other?,
            };
            let _ = writeln!(
                out,
                "{} vertices, {} blocks, {} identifications",
                r.d.len(),
                r.d.blocks().len(),
                r.identifications.len()
            );
            for &(x, y) in &r.identifications {
                let _ = writeln!(out, "merged {} = {}", pb.name(x), pc.name(y));
            }
            let cert = |suffix: &str| path.as_ref().map(|p| sibling(p, suffix));
            let d_cert = cert(".order.hforder");
            let c_cert = cert(".c.hforder");
            let b_cert = cert(".b.hforder");
            // Certificates sit next to the report and are named relative to it.
            let as_str = |p: &Option<PathBuf>| {
                p.as_ref()
                    .and_then(|p| p.file_name())
                    .map(|n| n.to_string_lossy().into_owned())
            };
            let mut report = String::new();
            report += &format::report_line("D unconfined", FactValue::Bool(true), as_str(&d_cert).as_deref());
            report += "\n";
            report += &format::report_line("g(C) strong in D", FactValue::Bool(true), as_str(&c_cert).as_deref());
            report += "\n";
            match (mode, &r.certificates.b_strong) {
                (AmalgamMode::Full, Some(_)) => {
                    report += &format::report_line(
                        "f(B) strong in D",
                        FactValue::Bool(true),
                        as_str(&b_cert).as_deref(),
                    );
                }
                (_, _) => {
                    report += &format::report_line(
                        "f(B) n-strong in D",
                        FactValue::Int(r.certificates.b_grade.unwrap_or(0) as i64),
                        None,
                    );
                }
            }
            report += "\n";
            report += &format::report_line(
                "identifications",
                FactValue::Int(r.identifications.len() as i64),
                None,
            );
            report += "\n";
            match &path {
                Some(p) => {
                    write(p, &format::write_pstss(&r.d))?;
                    write(&sibling(p, ".report.jsonl"), &report)?;
                    write(d_cert.as_ref().unwrap(), &format::write_hforder(&r.d, &r.certificates.d_order))?;
                    write(c_cert.as_ref().unwrap(), &format::write_hforder(&r.d, &r.certificates.c_strong))?;
                    if let Some(o) = &r.certificates.b_strong {
                        write(b_cert.as_ref().unwrap(), &format::write_hforder(&r.d, o))?;
                    }
                }
                None => {
                    let _ = out.write_all(report.as_bytes());
                }
            }
            Ok(true)
        }
        Command::Tree {
            generators,
            levels,
            above,
            height,
            out: path,
        } => {
            let mut f = truncate_free(generators, levels)?;
            let a = f.vertex_by_name(&above)?;
            let t = tree_above(&mut f, a, height)?;
            emit(out, path.as_deref(), &format::write_tree(f.carrier(), &t))?;
            Ok(true)
        }
        Command::MinpairChain { count, out: path } => {
            let chain = minimal_pair_chain(count)?;
            let p = &chain.structure;
            let _ = writeln!(out, "{} minimal pairs verified", chain.stages.len() - 1);
            for (i, s) in chain.stages.iter().enumerate() {
                let _ = writeln!(out, "A{i}: {}", p.set_names(s).join(" "));
            }
            if let Some(path) = path {
                write(&path, &format::write_pstss(p))?;
            }
            Ok(true)
        }
        Command::Example { name, out: path } => {
            let p = named::canonical_example(&name)?;
            emit(out, path.as_deref(), &format::write_pstss(&p))?;
            Ok(true)
        }
        Command::ReportNoAmalgam { out: path } => {
            let r = reproduce_no_amalgam();
            let expected = [
                FactValue::Bool(true),
                FactValue::Bool(true),
                FactValue::Bool(false),
                FactValue::Bool(false),
                FactValue::Bool(true),
                FactValue::Int(2),
                FactValue::Int(2),
                FactValue::Bool(false),
                FactValue::Bool(true),
            ];
            let cert = path.as_ref().map(|p| p.display().to_string());
            for f in &r.facts {
                let c = match f.name.as_str() {
                    "minimal amalgam min degree" | "confined core is whole amalgam" => cert.as_deref(),
                    _ => None,
                };
                let _ = writeln!(out, "{}", format::report_line(&f.name, f.value, c));
            }
            if let Some(path) = path {
                write(&path, &format::write_pstss(&r.amalgam))?;
            }
            let values: Vec<FactValue> = r.facts.iter().map(|f| f.value).collect();
            Ok(values == expected)
        }
        Command::Generic { steps } => {
            let chain = generic_prefix(steps, cli.seed)?;
            let f = &chain.truncation;
            let p = f.carrier();
            let _ = writeln!(out, "F({},{}) with {} vertices", f.generators(), f.depth(), p.len());
            for (i, (s, req)) in chain.stages.iter().zip(&chain.requirements).enumerate() {
                let _ = writeln!(out, "C{i}: {} vertices after {req:?}", s.len());
            }
            let strong = chain_is_strong(&chain)?;
            let base_ok = chain.free_base == f.generator_set();
            let _ = writeln!(out, "chain strong: {strong}; free base is the generators: {base_ok}");
            Ok(strong && base_ok)
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("freests").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let grid = dir.path().join("grid9.pstss");
        fs::write(&grid, format::write_pstss(&named::grid9())).unwrap();
        let fano = dir.path().join("fano.pstss");
        fs::write(&fano, format::write_pstss(&named::fano())).unwrap();
        let g = grid.to_str().unwrap();
        let (code, out, _) = call(&["check-unconfined", g]);
        assert_eq!(code, 1);
        assert!(out.starts_with("confined core of 9 vertices"));
        assert_eq!(call(&["delta", fano.to_str().unwrap()]), (0, "0\n".into(), String::new()));
        let (code, out, _) = call(&["free", "--generators", "3", "--levels", "2"]);
        assert_eq!((code, out.as_str()), (0, "12 vertices, 9 blocks\n"));
        assert_eq!(call(&["delta", "/nonexistent/x.pstss"]).0, 2);
        assert_eq!(call(&["delta", g, "--bogus"]).0, 2);
        assert_eq!(call(&["class-or", g]).0, 0);
        assert_eq!(call(&["example", "nope"]).0, 2);
    }

    #[test]
    fn strong_and_reports() {
        let dir = tempfile::tempdir().unwrap();
        let mp = dir.path().join("mp.pstss");
        fs::write(&mp, format::write_pstss(&named::minpair())).unwrap();
        let m = mp.to_str().unwrap();
        assert_eq!(call(&["strong", m, "--base", "b,a2,a3"]).0, 1);
        assert_eq!(call(&["strong", m, "--base", "b,a2,a3", "-n", "2"]).0, 0);
        assert_eq!(call(&["strong", m, "--base", "b,a2,a3", "-n", "3"]).0, 1);
        assert_eq!(call(&["strong", m, "--base", "a2"]).0, 0);
        let (code, out, _) = call(&["report-no-amalgam"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 9);
        assert_eq!(call(&["minpair-chain", "-k", "3"]).0, 0);
        let (code, out, _) = call(&["tree", "--generators", "3", "--levels", "3", "--above", "g0", "--height", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("btree 1\nEPS "));
    }
}
