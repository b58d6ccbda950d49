//! Command-line frontend for the sforge mutation engine.

pub mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use sforge::algebra::{check_symmetric, nakayama_permutation};
use sforge::equivalence::invariants;
use sforge::examples::{symmetric_nakayama, weighted_surface_example, WsaParams};
use sforge::explore::{explore_mutation_class, mutate, quiver_dot, ExploreOptions};
use sforge::mutation::MAX_PERIOD;
use sforge::representations::period_of_simple;
use sforge::verify::{algebra_id, verify, VerificationReport, VerifyOptions};
use sforge::{
    Algebra, AlgebraPresentation, AnyPresentation, Error, Field, FieldSpec, Fp, Rationals,
};

use cache::Cache;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_SPLIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sforge",
    version,
    about = "Iterated silting mutation of quiver algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// algebra file (JSON)
    pub file: PathBuf,
    /// largest path length tried when building the algebra
    #[arg(long, default_value_t = 40)]
    pub degree_cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize an algebra: dimension, symmetry, Nakayama permutation, Cartan matrix
    Info {
        #[command(flatten)]
        input: Input,
        /// also compute the periods of the simple modules
        #[arg(long)]
        periods: bool,
    },
    /// Print the presentation of μ_i^k(Λ)
    Mutate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        assume_symmetric: bool,
    },
    /// Check that the iterated mutation at a vertex returns to Λ
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        assume_symmetric: bool,
        #[arg(long, default_value_t = MAX_PERIOD)]
        max_period: usize,
        /// print stage timings to stderr
        #[arg(long)]
        timings: bool,
    },
    /// Breadth-first exploration of the mutation class
    Explore {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// comma-separated vertices to mutate at (default: all)
        #[arg(long, value_delimiter = ',')]
        vertices: Option<Vec<usize>>,
        #[arg(long, default_value_t = 64)]
        node_cap: usize,
        #[arg(long)]
        assume_symmetric: bool,
    },
    /// Generate the five-vertex weighted surface algebra
    GenWsa {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "0")]
        b: String,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "1")]
        d: String,
        /// prime field characteristic; omit with --rational
        #[arg(long, default_value_t = 5)]
        prime: u64,
        #[arg(long)]
        rational: bool,
        /// allow weight n = 1 (xi and mu are dropped)
        #[arg(long)]
        allow_n1: bool,
    },
    /// Generate the cyclic Nakayama algebra with n vertices and Loewy length l
    GenNakayama {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 5)]
        prime: u64,
        #[arg(long)]
        rational: bool,
    },
    /// Graphviz output for an algebra file (its quiver) or an explore result (its graph)
    ExportDot { file: PathBuf },
}

/// What a command prints and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::InvalidField(_)
            | Error::InvalidPresentation(_)
            | Error::Disconnected
            | Error::ZeroRelationDegenerate(_)
            | Error::NotAdmissible { .. }
            | Error::VertexOutOfRange { .. }
            | Error::InvalidWeights(_) => EXIT_USAGE,
            Error::NonSplitEndomorphism { .. } => EXIT_NON_SPLIT,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(path: &PathBuf) -> Result<AnyPresentation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(AnyPresentation::from_json_str(&text)?)
}

/// 1-based vertex from the command line to 0-based.
fn vertex_arg<F: Field>(alg: &Algebra<F>, v: usize) -> Result<usize, CliError> {
    let n = alg.vertex_count();
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            count: n,
        }
        .into());
    }
    Ok(v - 1)
}

fn require_symmetric<F: Field>(alg: &Algebra<F>, assume: bool) -> Result<(), CliError> {
    if assume {
        return Ok(());
    }
    match check_symmetric(alg) {
        Ok(Some(_)) => Ok(()),
        Ok(None) => Err(CliError::usage(
            "algebra is not symmetric (pass --assume-symmetric to skip this check)",
        )),
        Err(e) => Err(CliError::usage(format!(
            "symmetry check failed: {e} (pass --assume-symmetric to skip it)"
        ))),
    }
}

fn field_name(spec: FieldSpec) -> String {
    match spec {
        FieldSpec::Prime(p) => format!("F_{p}"),
        FieldSpec::Rational => "Q".into(),
    }
}

fn info<F: Field>(pres: &AlgebraPresentation<F>, alg: &Algebra<F>, periods: bool) -> String {
    let mut out = String::new();
    let symmetric = match check_symmetric(alg) {
        Ok(Some(_)) => "yes",
        Ok(None) => "no",
        Err(_) => "unknown",
    };
    let inv = invariants(alg);
    writeln!(out, "dim {}, symmetric: {symmetric}", alg.dim()).unwrap();
    writeln!(out, "field: {}", field_name(pres.field.spec())).unwrap();
    writeln!(
        out,
        "vertices: {}, arrows: {}, relations: {}",
        alg.vertex_count(),
        pres.quiver.arrows().len(),
        pres.relations.len()
    )
    .unwrap();
    writeln!(out, "Loewy length: {}", alg.loewy_length()).unwrap();
    writeln!(out, "center dimension: {}", inv.center_dim).unwrap();
    match nakayama_permutation(alg) {
        Ok(nu) => writeln!(
            out,
            "Nakayama permutation: {:?}",
            nu.iter().map(|v| v + 1).collect::<Vec<_>>()
        )
        .unwrap(),
        Err(e) => writeln!(out, "Nakayama permutation: none ({e})").unwrap(),
    }
    writeln!(out, "Cartan matrix:").unwrap();
    for row in alg.cartan() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        writeln!(out, "  {}", cells.join("")).unwrap();
    }
    if periods {
        let n = alg.vertex_count();
        let found: Vec<Option<usize>> = (0..n)
            .map(|i| period_of_simple(alg, i, MAX_PERIOD).ok().flatten())
            .collect();
        let shown: Vec<String> = found
            .iter()
            .map(|d| d.map_or("-".to_string(), |d| d.to_string()))
            .collect();
        writeln!(out, "periods of simples: [{}]", shown.join(", ")).unwrap();
        let mut ds: Vec<usize> = found.iter().flatten().copied().collect();
        ds.sort_unstable();
        ds.dedup();
        for d in ds {
            writeln!(
                out,
                "period-{d} simples: {}/{n}",
                found.iter().filter(|x| **x == Some(d)).count()
            )
            .unwrap();
        }
        let none = found.iter().filter(|x| x.is_none()).count();
        if none > 0 {
            writeln!(out, "no period up to {MAX_PERIOD}: {none}/{n}").unwrap();
        }
    }
    out
}

fn cached(
    cache: Option<&Cache>,
    key: String,
    compute: impl FnOnce() -> Result<String, CliError>,
) -> Result<String, CliError> {
    match cache {
        Some(c) => c.get_or_compute(&key, compute).map(|(text, _)| text),
        None => compute(),
    }
}

fn run_typed<F: Field>(
    command: &Command,
    pres: &AlgebraPresentation<F>,
    cache: Option<&Cache>,
) -> Result<Output, CliError> {
    let canonical = pres.to_json_string();
    let build = |input: &Input| Algebra::build(pres, input.degree_cap).map_err(CliError::from);
    match command {
        Command::Info { input, periods } => {
            let alg = build(input)?;
            Ok(Output::ok(info(pres, &alg, *periods)))
        }
        Command::Mutate {
            input,
            vertex,
            steps,
            assume_symmetric,
        } => {
            let alg = build(input)?;
            let v = vertex_arg(&alg, *vertex)?;
            require_symmetric(&alg, *assume_symmetric)?;
            let key = Cache::key(
                &canonical,
                "mutate",
                &format!("vertex={vertex} steps={steps} cap={}", input.degree_cap),
            );
            let out = cached(cache, key, || {
                let p = mutate(&alg, v, *steps)?;
                let mut file = p.algebra.presentation().to_file();
                file.meta = Some(serde_json::json!({
                    "mutation": { "source": algebra_id(pres), "vertex": vertex, "steps": steps }
                }));
                Ok(serde_json::to_string_pretty(&file).expect("presentation serializes") + "\n")
            })?;
            Ok(Output::ok(out))
        }
        Command::Verify {
            input,
            vertex,
            assume_symmetric,
            max_period,
            timings,
        } => {
            let alg = build(input)?;
            let v = vertex_arg(&alg, *vertex)?;
            require_symmetric(&alg, *assume_symmetric)?;
            let opts = VerifyOptions {
                max_period: *max_period,
                ..VerifyOptions::default()
            };
            let key = Cache::key(
                &canonical,
                "verify",
                &format!(
                    "vertex={vertex} max_period={max_period} cap={} opts={}",
                    input.degree_cap,
                    serde_json::to_string(&opts).unwrap()
                ),
            );
            let mut stderr = String::new();
            let out = cached(cache, key, || {
                let result = verify(&alg, v, &opts)?;
                if *timings {
                    for (stage, t) in &result.timings {
                        writeln!(stderr, "{stage}: {:.3} s", t.as_secs_f64()).unwrap();
                    }
                }
                Ok(serde_json::to_string_pretty(&result.report).expect("report serializes") + "\n")
            })?;
            let report: VerificationReport = serde_json::from_str(&out).map_err(|e| CliError {
                code: 1,
                message: format!("corrupt cached report: {e}"),
            })?;
            Ok(Output {
                code: report.exit_code(),
                stdout: out,
                stderr,
            })
        }
        Command::Explore {
            input,
            depth,
            vertices,
            node_cap,
            assume_symmetric,
        } => {
            let alg = build(input)?;
            require_symmetric(&alg, *assume_symmetric)?;
            let vertices = match vertices {
                Some(vs) => Some(
                    vs.iter()
                        .map(|&v| vertex_arg(&alg, v))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            };
            let opts = ExploreOptions {
                depth: *depth,
                vertices,
                node_cap: *node_cap,
                ..ExploreOptions::default()
            };
            let key = Cache::key(
                &canonical,
                "explore",
                &format!(
                    "cap={} opts={}",
                    input.degree_cap,
                    serde_json::to_string(&opts).unwrap()
                ),
            );
            let out = cached(cache, key, || {
                let graph = explore_mutation_class(&alg, &opts)?;
                let mut table = graph.node_table();
                table["dot"] = Value::String(graph.to_dot());
                Ok(serde_json::to_string_pretty(&table).expect("table serializes") + "\n")
            })?;
            Ok(Output::ok(out))
        }
        _ => unreachable!("generator commands take no input file"),
    }
}

fn scalar<F: Field>(f: &F, s: &str) -> Result<F::Elem, CliError> {
    let v: Value = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    f.from_json(&v)
        .map_err(|e| CliError::usage(format!("bad scalar {s:?}: {e}")))
}

fn gen_wsa<F: Field>(
    f: &F,
    m: usize,
    n: usize,
    p: usize,
    abcd: [&str; 4],
    allow_n1: bool,
) -> Result<String, CliError> {
    let params = WsaParams {
        m,
        n,
        p,
        a: scalar(f, abcd[0])?,
        b: scalar(f, abcd[1])?,
        c: scalar(f, abcd[2])?,
        d: scalar(f, abcd[3])?,
        allow_n1,
    };
    let pres = weighted_surface_example(f, &params)?;
    Ok(serde_json::to_string_pretty(&pres.to_file()).expect("presentation serializes") + "\n")
}

fn gen_nakayama<F: Field>(f: &F, n: usize, l: usize) -> Result<String, CliError> {
    let pres = symmetric_nakayama(f, n, l)?;
    Ok(serde_json::to_string_pretty(&pres.to_file()).expect("presentation serializes") + "\n")
}

fn export_dot(path: &PathBuf) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("parse error: {e}")))?;
    if let Some(dot) = v.get("dot").and_then(Value::as_str) {
        return Ok(dot.to_string());
    }
    Ok(match AnyPresentation::from_json_str(&text)? {
        AnyPresentation::Prime(p) => quiver_dot(&p),
        AnyPresentation::Rational(p) => quiver_dot(&p),
    })
}

/// Runs one command. Output never depends on the thread count or on whether
/// the result came from the cache.
pub fn run(cli: &Cli, cache: Option<&Cache>) -> Result<Output, CliError> {
    match &cli.command {
        Command::GenWsa {
            m,
            n,
            p,
            a,
            b,
            c,
            d,
            prime,
            rational,
            allow_n1,
        } => {
            let abcd = [a.as_str(), b.as_str(), c.as_str(), d.as_str()];
            let out = if *rational {
                gen_wsa(&Rationals, *m, *n, *p, abcd, *allow_n1)?
            } else {
                gen_wsa(&Fp::new(*prime)?, *m, *n, *p, abcd, *allow_n1)?
            };
            Ok(Output::ok(out))
        }
        Command::GenNakayama {
            n,
            l,
            prime,
            rational,
        } => {
            let out = if *rational {
                gen_nakayama(&Rationals, *n, *l)?
            } else {
                gen_nakayama(&Fp::new(*prime)?, *n, *l)?
            };
            Ok(Output::ok(out))
        }
        Command::ExportDot { file } => Ok(Output::ok(export_dot(file)?)),
        Command::Info { input, .. }
        | Command::Mutate { input, .. }
        | Command::Verify { input, .. }
        | Command::Explore { input, .. } => match read_input(&input.file)? {
            AnyPresentation::Prime(p) => run_typed(&cli.command, &p, cache),
            AnyPresentation::Rational(p) => run_typed(&cli.command, &p, cache),
        },
    }
}

/// Configures the global thread pool from `SFORGE_THREADS`.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        CliError::usage(format!(
            "SFORGE_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::usage("SFORGE_THREADS must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError {
            code: 1,
            message: format!("thread pool: {e}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        let non_split = Error::NonSplitEndomorphism {
            summand: 0,
            detail: "x^2 + 1".into(),
        };
        assert_eq!(CliError::from(non_split).code, EXIT_NON_SPLIT);
        assert_eq!(CliError::from(Error::Parse("eof".into())).code, EXIT_USAGE);
        assert_eq!(
            CliError::from(Error::VertexOutOfRange {
                vertex: 9,
                count: 5
            })
            .code,
            EXIT_USAGE
        );
        assert_eq!(CliError::from(Error::NotBasic("dup".into())).code, 1);
    }

    #[test]
    fn verdict_codes() {
        use sforge::verify::verdict_exit_code;
        assert_eq!(verdict_exit_code("Isomorphic"), 0);
        assert_eq!(verdict_exit_code("SocleEquivalentAt"), 0);
        assert_eq!(verdict_exit_code("Inconclusive"), 4);
        assert_eq!(verdict_exit_code("Distinct"), 5);
    }

    #[test]
    fn generators_round_trip() {
        let cli = Cli::parse_from([
            "sforge",
            "gen-nakayama",
            "--n",
            "3",
            "--l",
            "4",
            "--rational",
        ]);
        let out = run(&cli, None).unwrap();
        let back = AnyPresentation::from_json_str(&out.stdout).unwrap();
        assert!(matches!(back, AnyPresentation::Rational(_)));
    }
}
