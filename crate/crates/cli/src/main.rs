use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use fanomutate::atlas::{explore, find_path, graph_to_json, save_graph, seed_of, transport_polarization, ExplorationBounds, PathOutcome};
use fanomutate::delpezzo::{edge_data, markov_triples, wps_triangle, WeightTriple};
use fanomutate::error::{parse_json, Error};
use fanomutate::laurent::LaurentPolynomial;
use fanomutate::mutation::{is_mutable, mutate_algebraic, mutate_combinatorial, mutate_lattice_polytope, MutationData};
use fanomutate::num::rational_to_string;
use fanomutate::polytope::{canonical_form, is_fano, normalized_volume, polar_dual, FanoPolytope, LatticePolytope};

/// Exact mutations of Fano polytopes and Laurent polynomials.
///
/// Inputs are file paths, inline JSON (starting with `{` or `[`), or `-`
/// for standard input. Polynomials may also be given as text such as
/// "x + y + x^-1*y^-1".
#[derive(Parser, Debug)]
#[command(name = "fanomutate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Shorthand for `--format pretty`.
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Echo the effective configuration and log progress on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Args, Debug, Clone)]
struct BoundArgs {
    /// Maximum number of mutation steps from the root.
    #[arg(long = "depth", env = "FANOMUTATE_MAX_DEPTH")]
    max_depth: Option<u32>,
    /// Maximum number of nodes.
    #[arg(long, env = "FANOMUTATE_MAX_NODES")]
    max_nodes: Option<usize>,
    /// Largest absolute vertex coordinate of an admitted node.
    #[arg(long, env = "FANOMUTATE_MAX_COORDINATE")]
    max_coordinate: Option<BigInt>,
    /// Largest dilation of a factor segment.
    #[arg(long, env = "FANOMUTATE_MAX_FACTOR_DILATION")]
    max_factor_dilation: Option<u32>,
}

impl BoundArgs {
    fn resolve(&self) -> Result<ExplorationBounds, Error> {
        let d = ExplorationBounds::default();
        let b = ExplorationBounds {
            max_depth: self.max_depth.unwrap_or(d.max_depth),
            max_nodes: self.max_nodes.unwrap_or(d.max_nodes),
            max_coordinate: self.max_coordinate.clone().unwrap_or(d.max_coordinate),
            max_factor_dilation: self.max_factor_dilation.unwrap_or(d.max_factor_dilation),
        };
        b.validate()?;
        Ok(b)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a polytope is Fano (exit 1 if it is not).
    Check { polytope: String },
    /// Apply a mutation datum to a polytope or a Laurent polynomial.
    Mutate {
        input: String,
        #[arg(long)]
        data: String,
        /// Include the certificate of the computation.
        #[arg(long)]
        certificate: bool,
        /// Ambient dimension for polynomials given as text.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Test whether a Laurent polynomial is mutable under a datum.
    Mutable {
        polynomial: String,
        #[arg(long)]
        data: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Polar dual of a Fano polytope.
    Dual { polytope: String },
    /// Normalized volumes of a polytope and, when Fano, of its polar dual.
    Volume { polytope: String },
    /// Canonical form up to unimodular equivalence.
    Canonical { polytope: String },
    /// Edge data and class T test of a Fano polygon.
    Analyze { polygon: String },
    /// Markov triples with largest entry at most the bound.
    Markov {
        #[arg(long)]
        bound: BigInt,
    },
    /// Triangle of a weighted projective plane.
    Wps {
        /// Three comma-separated weights.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<BigInt>,
    },
    /// Explore the mutation graph of a Fano polytope.
    Explore {
        polytope: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Find a mutation path between two Fano polytopes (exit 1 if none).
    Path {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Seed of mutation data of a Laurent polynomial in two variables.
    Seed {
        polynomial: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Transport a Fano polytope along a list of mutation data.
    Transport {
        polytope: String,
        #[arg(long)]
        path: String,
    },
}

/// A finished command: the output document and whether it is a negative
/// answer (exit 1).
struct Report {
    doc: Value,
    negative: bool,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Report { doc, negative: false }
    }
}

fn read_source(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::InvalidDocument(e.to_string()))
}

fn load<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Error> {
    parse_json(&read_source(arg)?)
}

fn load_fano(arg: &str) -> Result<FanoPolytope, Error> {
    let p: LatticePolytope = load(arg)?;
    FanoPolytope::new(p)
}

fn load_polynomial(arg: &str, dim: usize) -> Result<LaurentPolynomial, Error> {
    let trimmed = arg.trim_start();
    let is_text = !(arg == "-" || trimmed.starts_with('{') || std::path::Path::new(arg).exists());
    if is_text {
        LaurentPolynomial::parse(dim, arg)
    } else {
        load(arg)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn run(cli: &Cli) -> Result<Report, Error> {
    Ok(match &cli.command {
        Command::Check { polytope } => {
            let p: LatticePolytope = load(polytope)?;
            match FanoPolytope::new(p.clone()) {
                Ok(_) => Report::ok(json!({"fano": true, "polytope": to_value(&p)})),
                Err(Error::NotFano(why)) => Report {
                    doc: json!({"fano": false, "reason": why, "polytope": to_value(&p)}),
                    negative: true,
                },
                Err(e) => return Err(e),
            }
        }
        Command::Mutate {
            input,
            data,
            certificate,
            dim,
        } => {
            let mu: MutationData = load(data)?;
            let text = read_source_or_text(input)?;
            match text {
                Input::Document(v) if v.get("vertices").is_some() => {
                    let p: LatticePolytope = from_value(v)?;
                    let comb = mu.to_combinatorial();
                    let (result, cert) = if is_fano(&p) {
                        let out = mutate_combinatorial(&comb, &FanoPolytope::new(p)?)?;
                        (out.result.into_polytope(), out.certificate)
                    } else {
                        mutate_lattice_polytope(&comb, &p)?
                    };
                    if *certificate {
                        Report::ok(json!({"result": to_value(&result), "certificate": to_value(&cert)}))
                    } else {
                        Report::ok(to_value(&result))
                    }
                }
                other => {
                    let f = match other {
                        Input::Document(v) => from_value(v)?,
                        Input::Text(t) => LaurentPolynomial::parse(*dim, &t)?,
                    };
                    let MutationData::Algebraic(mu) = mu else {
                        return Err(Error::InvalidMutationData(
                            "polynomials need an algebraic datum with \"h\"".into(),
                        ));
                    };
                    let out = mutate_algebraic(&mu, &f)?;
                    if *certificate {
                        Report::ok(to_value(&out))
                    } else {
                        Report::ok(to_value(&out.result))
                    }
                }
            }
        }
        Command::Mutable { polynomial, data, dim } => {
            let f = load_polynomial(polynomial, *dim)?;
            let MutationData::Algebraic(mu) = load(data)? else {
                return Err(Error::InvalidMutationData("expected an algebraic datum with \"h\"".into()));
            };
            Report::ok(json!({"mutable": is_mutable(&f, &mu)?}))
        }
        Command::Dual { polytope } => Report::ok(to_value(&polar_dual(&load_fano(polytope)?))),
        Command::Volume { polytope } => {
            let p: LatticePolytope = load(polytope)?;
            let mut doc = json!({"normalized_volume": rational_to_string(&normalized_volume(&p)?)});
            if let Ok(f) = FanoPolytope::new(p) {
                doc["dual_normalized_volume"] = json!(rational_to_string(&normalized_volume(&polar_dual(&f))?));
            }
            Report::ok(doc)
        }
        Command::Canonical { polytope } => {
            let p: LatticePolytope = load(polytope)?;
            Report::ok(to_value(&canonical_form(&p)?))
        }
        Command::Analyze { polygon } => Report::ok(to_value(&edge_data(&load_fano(polygon)?)?)),
        Command::Markov { bound } => {
            if *bound < BigInt::from(1) {
                return Err(Error::InvalidDocument("bound must be at least 1".into()));
            }
            Report::ok(to_value(&markov_triples(bound)))
        }
        Command::Wps { weights } => {
            if weights.len() != 3 {
                return Err(Error::InvalidDocument(format!("expected 3 weights, got {}", weights.len())));
            }
            let w = WeightTriple::new([weights[0].clone(), weights[1].clone(), weights[2].clone()]);
            Report::ok(to_value(&wps_triangle(&w)?))
        }
        Command::Explore { polytope, bounds } => {
            let b = resolve(bounds, cli.verbose)?;
            let g = explore(&load_fano(polytope)?, &b)?;
            if let Some(out) = &cli.out {
                save_graph(&g, out)?;
                Report::ok(json!({"written": out.display().to_string(), "nodes": g.nodes.len(), "edges": g.edges.len(), "truncated": g.truncated}))
            } else {
                Report::ok(parse_json(&graph_to_json(&g)?)?)
            }
        }
        Command::Path { from, to, bounds } => {
            let b = resolve(bounds, cli.verbose)?;
            let outcome = find_path(&load_fano(from)?, &load_fano(to)?, &b)?;
            let negative = matches!(outcome, PathOutcome::NotFound(_));
            Report {
                doc: to_value(&outcome),
                negative,
            }
        }
        Command::Seed { polynomial, bounds } => {
            let b = resolve(bounds, cli.verbose)?;
            Report::ok(to_value(&seed_of(&load_polynomial(polynomial, 2)?, &b)?))
        }
        Command::Transport { polytope, path } => {
            let steps: Vec<MutationData> = load(path)?;
            Report::ok(to_value(&transport_polarization(&load_fano(polytope)?, &steps)?))
        }
    })
}

enum Input {
    Document(Value),
    Text(String),
}

fn read_source_or_text(arg: &str) -> Result<Input, Error> {
    let trimmed = arg.trim_start();
    if arg == "-" || trimmed.starts_with('{') || std::path::Path::new(arg).exists() {
        Ok(Input::Document(parse_json(&read_source(arg)?)?))
    } else {
        Ok(Input::Text(arg.to_string()))
    }
}

fn resolve(bounds: &BoundArgs, verbose: bool) -> Result<ExplorationBounds, Error> {
    let b = bounds.resolve()?;
    if verbose {
        eprintln!("{}", json!({"config": to_value(&b)}));
    }
    Ok(b)
}

fn render(doc: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(doc).expect("values serialize")
    } else {
        serde_json::to_string(doc).expect("values serialize")
    }
}

fn error_doc(e: &Error) -> Value {
    let mut doc = json!({"error": e.kind(), "detail": e.to_string()});
    let mut inner = e;
    while let Error::PathStep { index, source } = inner {
        doc["step"] = json!(index);
        inner = source;
    }
    match inner {
        Error::NotMutable { height } | Error::Undefined { height } => {
            doc["height"] = serde_json::from_str(&height.to_string()).expect("integer literal");
        }
        Error::Parse { offset, line, column, .. } => {
            doc["offset"] = json!(offset);
            doc["line"] = json!(line);
            doc["column"] = json!(column);
        }
        _ => {}
    }
    doc
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", json!({"error": "usage", "detail": e.to_string()}));
            return ExitCode::from(2);
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .parse_env("FANOMUTATE_LOG")
        .init();
    let pretty = cli.pretty || cli.format == Format::Pretty;
    match run(&cli) {
        Ok(report) => {
            let text = render(&report.doc, pretty);
            let written = match (&cli.out, &cli.command) {
                (Some(_), Command::Explore { .. }) | (None, _) => {
                    println!("{text}");
                    Ok(())
                }
                (Some(path), _) => std::fs::write(path, text + "\n"),
            };
            if let Err(e) = written {
                eprintln!("{}", error_doc(&Error::from(e)));
                return ExitCode::from(2);
            }
            ExitCode::from(if report.negative { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("{}", render(&error_doc(&e), pretty));
            ExitCode::from(if e.is_domain_failure() { 1 } else { 2 })
        }
    }
}
