use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use divsq::format::{self, FormatError};
use divsq::render;
use divsq::selftest::{self, SelftestConfig};
use divsq_core::delta::normal_form;
use divsq_core::loopspace::{collapse_check, enum_dl, enum_e2};
use divsq_core::rchain::{decompose_complex, dold_kan_k, RVSComplex};
use divsq_core::restricted::decompose;
use divsq_core::unstable::{e_infinity_length, pi_u_closed_form, pi_u_oracle};
use divsq_core::Error;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "divsq", version, about = "Restricted vector spaces, higher divided squares and free unstable algebras over F2")]
struct Cli {
    /// Internal degree bound Q.
    #[arg(long, global = true)]
    max_internal: Option<usize>,
    /// Homotopy degree bound T.
    #[arg(long, global = true)]
    max_homotopy: Option<usize>,
    /// Degree bound D for e2, qx and collapse.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Simplicial level bound L for the oracle; at least T + 1.
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Seed for the randomized parts of selftest.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also compute π_*U by brute force and compare.
    #[arg(long, global = true)]
    oracle: bool,
    /// Directory of snapshots for selftest; written when missing, compared when present.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a restricted vector space into F(n) and T(n,k) summands.
    Decompose { path: PathBuf },
    /// Decompose a complex into shifted free points and torsion cells.
    ChainDecompose { path: PathBuf },
    /// Homotopy of the free unstable algebra on K(C).
    PiU { path: PathBuf },
    /// The associated graded of the length filtration on π_*U.
    EInfinity { path: PathBuf },
    /// E2 generators for a sphere of degree k.
    E2 {
        #[arg(long)]
        degrees: usize,
    },
    /// Dyer–Lashof generators of H_*(QS^k).
    Qx {
        #[arg(long)]
        degrees: usize,
    },
    /// Compare the Hilbert series of H_*(QX) and of the E2 algebra.
    Collapse {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        degrees: Vec<usize>,
    },
    /// Admissible normal form of d_i d_j.
    Adem { i: usize, j: usize },
    /// Run the acceptance checks.
    Selftest,
}

enum Failure {
    Mismatch(String),
    Input(String),
    Size(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Size(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Input(m) | Failure::Size(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => Failure::Size(format!("{e}; try smaller bounds")),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<RVSComplex, Failure> {
    format::parse_complex(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, value: Value, table: String) {
    let text = match cli.format {
        OutputFormat::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
        OutputFormat::Table => table,
    };
    // a closed pipe downstream is not an error
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn positive(name: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        Err(Failure::Input(format!("--{name} must be positive")))
    } else {
        Ok(v)
    }
}

fn bounds(cli: &Cli, c: &RVSComplex) -> Result<(usize, usize), Failure> {
    let t = positive("max-homotopy", cli.max_homotopy.unwrap_or(6))?;
    let q = positive("max-internal", cli.max_internal.unwrap_or(c.max_degree()).max(1))?;
    if q > c.max_degree() {
        return Err(Failure::Input(format!(
            "--max-internal {q} exceeds the input's max_internal_degree {}",
            c.max_degree()
        )));
    }
    Ok((t, q))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Decompose { path } => {
            let v = format::parse_restricted(&read(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let d = decompose(&v)?;
            let names: Vec<String> = d.summands().iter().map(ToString::to_string).collect();
            emit(cli, json!({ "max_degree": d.max_degree(), "summands": names }), format!("{d}\n"));
        }
        Command::ChainDecompose { path } => {
            let c = load_complex(path)?;
            let parts = decompose_complex(&c)?;
            let names: Vec<String> = parts.iter().map(ToString::to_string).collect();
            let table = if names.is_empty() { "0\n".to_string() } else { format!("{}\n", names.join(" + ")) };
            emit(cli, json!({ "summands": names }), table);
        }
        Command::PiU { path } => {
            let c = load_complex(path)?;
            let (t, q) = bounds(cli, &c)?;
            let closed = pi_u_closed_form(&c, t, q)?;
            let mut value = format::pi_u_value(&closed);
            let mut table = render::bigraded_table(&closed.dims);
            let mut verdict = None;
            if cli.oracle {
                let levels = cli.levels.unwrap_or(t + 1);
                if levels < t + 1 {
                    return Err(Failure::Input(format!("--levels {levels} must be at least T + 1 = {}", t + 1)));
                }
                let s = dold_kan_k(&c, levels)?;
                let oracle = pi_u_oracle(&s, t, q).map_err(|e| match e {
                    Error::SizeLimit { .. } => {
                        Failure::Size(format!("{e}; try smaller --max-homotopy or --max-internal"))
                    }
                    e => e.into(),
                })?;
                let diff = oracle.dims.first_difference(&closed.dims);
                let line = match diff {
                    None => "MATCH".to_string(),
                    Some(((a, b), x, y)) => format!("MISMATCH at (t,q) = ({a},{b}): oracle {x}, closed form {y}"),
                };
                value["oracle"] = json!({ "match": diff.is_none(), "verdict": line });
                table.push_str(&line);
                table.push('\n');
                verdict = diff.map(|_| line);
            }
            emit(cli, value, table);
            if let Some(line) = verdict {
                return Err(Failure::Mismatch(line));
            }
        }
        Command::EInfinity { path } => {
            let c = load_complex(path)?;
            let (t, q) = bounds(cli, &c)?;
            let e = e_infinity_length(&c, t, q)?;
            emit(cli, format::e_infinity_value(&e), render::e_infinity_table(&e));
        }
        Command::E2 { degrees } | Command::Qx { degrees } => {
            let k = positive("degrees", *degrees)?;
            let d = cli.max_degree.unwrap_or(20);
            let report = collapse_check(&[k], d)?;
            let dl = enum_dl(k, d);
            let e2 = enum_e2(k, d);
            let value = render::generators_value(k, d, &dl, &e2, report.equal);
            let mut table = String::new();
            if matches!(cli.command, Command::Qx { .. }) {
                for g in &dl {
                    table.push_str(&format!("{:>4}  {}\n", g.degree(), render::dl_label(g)));
                }
            } else {
                let mut sorted: Vec<_> = e2.iter().collect();
                sorted.sort_by_key(|g| (g.degree().total, *g));
                for g in sorted {
                    let deg = g.degree();
                    table.push_str(&format!(
                        "{:>4}  s={} internal={}  {}\n",
                        deg.total,
                        deg.filtration,
                        deg.internal,
                        render::e2_label(g)
                    ));
                }
            }
            emit(cli, value, table);
        }
        Command::Collapse { degrees } => {
            if degrees.is_empty() {
                return Err(Failure::Input("--degrees needs at least one sphere degree".into()));
            }
            let d = cli.max_degree.unwrap_or(20);
            let r = collapse_check(degrees, d)?;
            emit(cli, render::collapse_value(&r), render::collapse_text(&r));
            if let Some((deg, a, b)) = r.first_mismatch {
                return Err(Failure::Mismatch(format!("series differ at degree {deg}: {a} vs {b}")));
            }
        }
        Command::Adem { i, j } => {
            let nf = normal_form(&[*i, *j])?;
            let terms: Vec<Vec<usize>> = nf.terms().map(<[usize]>::to_vec).collect();
            emit(cli, json!({ "word": [i, j], "normal_form": nf.to_string(), "terms": terms }), format!("{nf}\n"));
        }
        Command::Selftest => {
            let cfg = SelftestConfig {
                seed: cli.seed.unwrap_or(selftest::DEFAULT_SEED),
            };
            let mut failed = Vec::new();
            let mut rows = Vec::new();
            for id in 1..=9 {
                let r = selftest::run_criterion(id, &cfg);
                println!("{r}");
                if !r.passed {
                    failed.push(id);
                }
                if let Some(dir) = &cli.golden {
                    if r.passed && !golden(dir, id, &r.snapshot)? {
                        println!("criterion {id:>2} differs from its golden snapshot");
                        failed.push(id);
                    }
                }
                rows.push(json!({ "id": id, "name": r.name, "passed": r.passed, "detail": r.detail }));
            }
            if cli.format == OutputFormat::Json {
                println!("{}", serde_json::to_string_pretty(&json!({ "criteria": rows })).expect("serializable"));
            }
            if !failed.is_empty() {
                return Err(Failure::Mismatch(format!("failed criteria: {failed:?}")));
            }
        }
    }
    Ok(())
}

// Writes the snapshot when absent; otherwise reports whether it is unchanged.
fn golden(dir: &Path, id: usize, snapshot: &Value) -> Result<bool, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("criterion_{id}.json"));
    let text = serde_json::to_string_pretty(snapshot).expect("serializable");
    if path.exists() {
        let old = read(&path)?;
        Ok(old.trim_end() == text.trim_end())
    } else {
        fs::write(&path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(true)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("divsq: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
