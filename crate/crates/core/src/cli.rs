//! Command-line front end: `build`, `verify` and `transfer`, each emitting a
//! JSON report. Exit codes: 0 success, 1 a check failed, 2 invalid input.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::endo::{build_eprime, build_named_maps, FiniteDgAlgebra};
use crate::quiver::{build_named_algebra, NamedAlgebra, QuotientAlgebra};
use crate::report::{all_passed, Check};
use crate::suites::{run_all, Suite, SuiteOptions};
use crate::transfer::{a_infinity_relation_check, build_contraction, transferred_table, verify_contraction};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest supported arity of transferred operations.
pub const MAX_ARITY: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "zigzag",
    version,
    about = "Exact GF(2) computations for DG-enhanced zigzag algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct an algebra and print its block basis.
    Build {
        #[arg(value_enum)]
        algebra: BuildTarget,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        ceiling: usize,
    },
    /// Run verification suites over a range of n.
    Verify {
        /// One suite, `all`, or a comma-separated list.
        #[arg(long, default_value = "all")]
        suite: String,
        /// A single n (`4`) or an inclusive range (`2..5`).
        #[arg(long, alias = "n-range")]
        n: String,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Largest accepted n.
        #[arg(long, default_value_t = 8)]
        ceiling: usize,
        /// Apply each suite's single-entry perturbation; the suites must fail.
        #[arg(long)]
        perturb: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the transferred A∞ operations on the zigzag algebra.
    Transfer {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        #[arg(long, default_value_t = 8)]
        ceiling: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum BuildTarget {
    AnShriek,
    An,
    Zigzag,
    Eprime,
    S,
}

#[derive(Debug)]
struct UsageError(String);

#[derive(Serialize)]
struct BlockJson {
    source: usize,
    target: usize,
    degree: i32,
    /// Path words as vertex arrays, or generator names for E′ and S.
    elements: Vec<Value>,
}

fn quotient_blocks(alg: &QuotientAlgebra) -> Vec<BlockJson> {
    let mut out: Vec<BlockJson> = Vec::new();
    for &i in alg.vertex_set() {
        for &j in alg.vertex_set() {
            let mut by_degree = std::collections::BTreeMap::<i32, Vec<Value>>::new();
            for k in alg.block_indices(i, j) {
                let b = &alg.basis()[k];
                by_degree.entry(b.degree).or_default().push(json!(b.word));
            }
            out.extend(by_degree.into_iter().map(|(degree, elements)| BlockJson {
                source: i,
                target: j,
                degree,
                elements,
            }));
        }
    }
    out
}

fn finite_blocks(alg: &FiniteDgAlgebra) -> Vec<BlockJson> {
    let mut map = std::collections::BTreeMap::<(usize, usize, i32), Vec<Value>>::new();
    for k in 0..alg.dim() {
        let (i, j) = alg.blocks[k];
        map.entry((i, j, alg.degrees[k]))
            .or_default()
            .push(json!(alg.names[k].to_string()));
    }
    map.into_iter()
        .map(|((source, target, degree), elements)| BlockJson {
            source,
            target,
            degree,
            elements,
        })
        .collect()
}

fn check_n(n: usize, ceiling: usize) -> Result<(), UsageError> {
    if n < 2 || n > ceiling {
        return Err(UsageError(format!("n = {n} outside the supported range 2..={ceiling}")));
    }
    Ok(())
}

fn check_arity(k: usize) -> Result<(), UsageError> {
    if !(2..=MAX_ARITY).contains(&k) {
        return Err(UsageError(format!("max arity {k} outside 2..={MAX_ARITY}")));
    }
    Ok(())
}

/// Parse `4` or the inclusive range `2..5`.
pub fn parse_n_range(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid n `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

pub fn parse_suites(s: &str) -> Result<Vec<Suite>, String> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    s.split(',').map(|t| t.trim().parse::<Suite>()).collect()
}

fn build(target: BuildTarget, n: usize, ceiling: usize) -> Result<(Value, bool), UsageError> {
    check_n(n, ceiling)?;
    let internal = |e: String| UsageError(e);
    let (name, dim, blocks) = match target {
        BuildTarget::AnShriek | BuildTarget::An | BuildTarget::Zigzag => {
            let name = match target {
                BuildTarget::AnShriek => NamedAlgebra::AnShriek,
                BuildTarget::An => NamedAlgebra::An,
                _ => NamedAlgebra::Zigzag,
            };
            let alg = build_named_algebra(name, n).map_err(|e| internal(e.to_string()))?;
            (alg.name().to_string(), alg.dim(), quotient_blocks(&alg))
        }
        BuildTarget::Eprime | BuildTarget::S => {
            let maps = build_named_maps(n).map_err(|e| internal(e.to_string()))?;
            let (ep, checks) = build_eprime(maps).map_err(|e| internal(e.to_string()))?;
            if !all_passed(&checks) {
                return Ok((json!({"schema_version": SCHEMA_VERSION, "checks": checks}), false));
            }
            let (label, vertices): (&str, Vec<usize>) = match target {
                BuildTarget::Eprime => ("eprime", (1..=n).collect()),
                _ => ("s", (1..n).collect()),
            };
            let alg = ep.truncate(&vertices);
            (label.to_string(), alg.dim(), finite_blocks(&alg))
        }
    };
    Ok((
        json!({
            "schema_version": SCHEMA_VERSION,
            "algebra": name,
            "n": n,
            "dimension": dim,
            "blocks": blocks,
        }),
        true,
    ))
}

fn transfer(n: usize, max_arity: usize, ceiling: usize) -> Result<(Value, bool), UsageError> {
    check_n(n, ceiling)?;
    check_arity(max_arity)?;
    let ct = build_contraction(n).map_err(|e| UsageError(e.to_string()))?;
    let contraction = verify_contraction(&ct);
    if !contraction.passed() {
        let v = json!({"schema_version": SCHEMA_VERSION, "n": n, "contraction": contraction.checks});
        return Ok((v, false));
    }
    let table = transferred_table(&ct, max_arity).map_err(|e| UsageError(e.to_string()))?;
    let relations: Vec<Check> = if max_arity >= 3 {
        a_infinity_relation_check(&table, max_arity)
    } else {
        Vec::new()
    };
    let passed = all_passed(&relations);
    let counts: Vec<Value> = (2..=max_arity)
        .map(|k| json!({"arity": k, "nonzero": table.layer(k).map_or(0, |l| l.len())}))
        .collect();
    Ok((
        json!({
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "max_arity": max_arity,
            "algebra": table.algebra().name(),
            "layers": counts,
            "operations": table.to_json(),
            "relations": relations,
        }),
        passed,
    ))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    n: &str,
    max_arity: usize,
    seed: u64,
    samples: usize,
    ceiling: usize,
    perturb: bool,
) -> Result<(Value, bool), UsageError> {
    let suites = parse_suites(suite).map_err(UsageError)?;
    let ns = parse_n_range(n).map_err(UsageError)?;
    for &n in &ns {
        check_n(n, ceiling)?;
    }
    check_arity(max_arity)?;
    let opts = SuiteOptions {
        max_arity,
        seed,
        samples,
        perturb,
    };
    let reports = run_all(&suites, &ns, &opts);
    let passed = reports.iter().all(|r| r.passed);
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| json!({"suite": r.suite, "n": r.n, "status": if r.passed {"pass"} else {"fail"}}))
        .collect();
    Ok((
        json!({
            "schema_version": SCHEMA_VERSION,
            "status": if passed {"pass"} else {"fail"},
            "options": {"max_arity": max_arity, "seed": seed, "samples": samples, "perturb": perturb},
            "summary": summary,
            "reports": reports,
        }),
        passed,
    ))
}

/// Run the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (result, out) = match cli.command {
        Command::Build {
            algebra,
            n,
            out,
            ceiling,
        } => (build(algebra, n, ceiling), out),
        Command::Verify {
            suite,
            n,
            max_arity,
            seed,
            samples,
            ceiling,
            perturb,
            out,
        } => (verify(&suite, &n, max_arity, seed, samples, ceiling, perturb), out),
        Command::Transfer {
            n,
            max_arity,
            ceiling,
            out,
        } => (transfer(n, max_arity, ceiling), out),
    };
    let (value, passed) = match result {
        Ok(x) => x,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("reports serialize");
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe is not an error for a report consumer
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    if passed {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_ranges() {
        assert_eq!(parse_n_range("4").unwrap(), vec![4]);
        assert_eq!(parse_n_range("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_n_range("2..=3").unwrap(), vec![2, 3]);
        assert!(parse_n_range("5..2").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn suite_lists() {
        assert_eq!(parse_suites("all").unwrap().len(), 7);
        assert_eq!(parse_suites("dg,burau").unwrap(), vec![Suite::Dg, Suite::Burau]);
        assert!(parse_suites("nope").is_err());
    }
}
