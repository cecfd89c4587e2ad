//! Command-line front end: Bezout bounds, resultant degrees, degree
//! vectors, Weyman complexes, Koszul matrices, and the MEP solver.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use koszul_core::blocks::{mhb, resultant_degree};
use koszul_core::error::Error;
use koszul_core::formulas::{
    classify_square, star_degree_vector, Classification, DeterminantalData, F0Case,
};
use koszul_core::koszul::assemble_delta1;
use koszul_core::scalar::format_rational;
use koszul_core::solver::{solve_mep, SolveOptions};
use koszul_core::weyman::{complex_terms, is_determinantal, DegreeVector};
use num::complex::Complex64;
use rand::SeedableRng;
use serde_json::{json, Value};

use koszul_cli::docs::{biguint_value, Arithmetic, MepDocument, SystemDocument};
use koszul_cli::random::{random_mep_document, random_system_document, SystemSpec};

#[derive(Parser)]
#[command(name = "koszul", version, about = "Determinantal resultant matrices for mixed multilinear systems and a multiparameter eigenvalue solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixFormat {
    Json,
    Coo,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeKind {
    Star,
    Bipartite,
    Mep,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multihomogeneous Bezout bound of a square system document.
    Mhb { file: PathBuf },
    /// Per-polynomial and total resultant degree of an overdetermined
    /// system document.
    ResDegree { file: PathBuf },
    /// Degree vector, omega, and sizes for a square star or bipartite
    /// document with a chosen f0 support.
    Degree {
        file: PathBuf,
        /// f0 support: center-vertex | outer-vertex:J | edge:J |
        /// triangle:J1,J2 | x-only:I | y-only:J | xy:I,J (1-based).
        #[arg(long)]
        case: String,
        /// Star determinantal data "P=1,2;D=;c=0" (1-based; default
        /// Sylvester data P = {1..B}, D = {}, c = 0).
        #[arg(long)]
        data: Option<String>,
        /// Permutation of the X-blocks as the image list "s(1),...,s(A)".
        #[arg(long)]
        perm: Option<String>,
    },
    /// Nonzero Weyman complex terms of an overdetermined document at a
    /// degree vector.
    Complex {
        file: PathBuf,
        /// Degree vector, e.g. "2,-1".
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Assemble the Koszul matrix of delta_1(m) and write it to a file.
    Matrix {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
        format: MatrixFormat,
    },
    /// Solve an affine MEP document end to end.
    SolveMep {
        file: PathBuf,
        /// "auto" or comma-separated coefficients "c0,c1,...".
        #[arg(long, allow_hyphen_values = true)]
        f0: Option<String>,
        /// Relative eigenvalue-separation tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a random document on standard output.
    Random {
        #[arg(long, value_enum)]
        shape: ShapeKind,
        /// X-block dimensions, e.g. "1,1".
        #[arg(long)]
        alpha: Option<String>,
        /// Y-block dimensions, e.g. "1,1" (MEP: the beta_t sizes).
        #[arg(long)]
        beta: String,
        /// Polynomial counts: star "2,2"; bipartite rows "1,2;1,2".
        #[arg(long)]
        e: Option<String>,
        /// Optional f0 support prepended as polynomial 0.
        #[arg(long)]
        f0_case: Option<String>,
        #[arg(long, value_enum, default_value_t = Arithmetic::Rational)]
        arithmetic: Arithmetic,
        /// Construct a system with a common rational root.
        #[arg(long)]
        vanishing: bool,
        /// Include a random f0 in an MEP document.
        #[arg(long)]
        with_f0: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DeterminantalityError(_) => 3,
        Error::NotAffine
        | Error::SingularMEP
        | Error::MultiplicityUnsupported
        | Error::DegenerateEigenvector
        | Error::EigenConvergence
        | Error::Singular => 4,
        _ => 2,
    }
}

fn load_system(path: &PathBuf) -> Result<SystemDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_mep(path: &PathBuf) -> Result<MepDocument, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer {v:?}")))
        })
        .collect()
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {v:?}")))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {v:?}")))
        })
        .collect()
}

/// 1-based block index.
fn one_based(v: usize) -> Result<usize, Error> {
    v.checked_sub(1)
        .ok_or_else(|| Error::Parse("block indices are 1-based".into()))
}

fn parse_case(s: &str) -> Result<F0Case, Error> {
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a)),
        None => (s.trim(), None),
    };
    let indices = |a: Option<&str>, n: usize| -> Result<Vec<usize>, Error> {
        let list = parse_usize_list(a.unwrap_or(""))?;
        if list.len() != n {
            return Err(Error::Parse(format!("case {name} expects {n} block index(es)")));
        }
        list.into_iter().map(one_based).collect()
    };
    match name {
        "center-vertex" => Ok(F0Case::CenterVertex),
        "outer-vertex" => Ok(F0Case::OuterVertex(indices(args, 1)?[0])),
        "edge" => Ok(F0Case::Edge(indices(args, 1)?[0])),
        "triangle" => {
            let ix = indices(args, 2)?;
            Ok(F0Case::Triangle(ix[0], ix[1]))
        }
        "x-only" => Ok(F0Case::XOnly(indices(args, 1)?[0])),
        "y-only" => Ok(F0Case::YOnly(indices(args, 1)?[0])),
        "xy" => {
            let ix = indices(args, 2)?;
            Ok(F0Case::XY(ix[0], ix[1]))
        }
        other => Err(Error::Parse(format!("unknown f0 case {other:?}"))),
    }
}

/// "P=1,2;D=;c=0" with 1-based Y-block indices.
fn parse_data(s: &str, a: usize, b: usize) -> Result<DeterminantalData, Error> {
    let (mut p, mut d, mut c) = (None, None, None);
    for part in s.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad data segment {part:?}")))?;
        match key.trim() {
            "P" => {
                p = Some(
                    parse_usize_list(value)?
                        .into_iter()
                        .map(one_based)
                        .collect::<Result<BTreeSet<usize>, Error>>()?,
                )
            }
            "D" => {
                d = Some(
                    parse_usize_list(value)?
                        .into_iter()
                        .map(one_based)
                        .collect::<Result<BTreeSet<usize>, Error>>()?,
                )
            }
            "c" => {
                c = Some(
                    value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad c value {value:?}")))?,
                )
            }
            other => return Err(Error::Parse(format!("unknown data key {other:?}"))),
        }
    }
    let p = p.ok_or_else(|| Error::Parse("data needs P=".into()))?;
    let d = match d {
        Some(d) => d,
        None => (0..b).filter(|j| !p.contains(j)).collect(),
    };
    let c = c.ok_or_else(|| Error::Parse("data needs c=".into()))?;
    Ok(DeterminantalData::new(p, d, c, (0..a).collect()))
}

/// Permutation as the image list sigma(1),...,sigma(A), 1-based.
fn parse_perm(s: &str, a: usize) -> Result<Vec<usize>, Error> {
    let images = parse_usize_list(s)?
        .into_iter()
        .map(one_based)
        .collect::<Result<Vec<usize>, Error>>()?;
    if images.len() != a {
        return Err(Error::Parse(format!("permutation must list {a} images")));
    }
    Ok(images)
}

fn parse_degree_vector(s: &str) -> Result<DegreeVector, Error> {
    Ok(DegreeVector(parse_i64_list(s)?))
}

fn seed_override(cli_seed: u64) -> u64 {
    match std::env::var("KOSZUL_SEED") {
        Ok(v) => v.parse().unwrap_or(cli_seed),
        Err(_) => cli_seed,
    }
}

fn complex_value(z: &Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Mhb { file } => {
            let doc = load_system(&file)?;
            let structure = doc.structure()?;
            let degrees = doc.degrees()?;
            // an overdetermined document contributes its square part
            let square = if degrees.len() == structure.n() + 1 {
                &degrees[1..]
            } else {
                &degrees[..]
            };
            let bound = mhb(&structure, square)?;
            println!("{bound}");
        }
        Cmd::ResDegree { file } => {
            let doc = load_system(&file)?;
            let structure = doc.structure()?;
            let degrees = doc.degrees()?;
            let (total, per_poly) = resultant_degree(&structure, &degrees)?;
            let out = json!({
                "total": biguint_value(&total),
                "per_poly": per_poly.iter().map(biguint_value).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Cmd::Degree { file, case, data, perm } => {
            let doc = load_system(&file)?;
            let structure = doc.structure()?;
            let mut degrees = doc.degrees()?;
            // an overdetermined document contributes its square part; f0
            // always comes from --case
            if degrees.len() == structure.n() + 1 {
                degrees.remove(0);
            }
            let case = parse_case(&case)?;
            let d0 = case.d0(&structure)?;
            if d0.0.iter().all(|&e| e == 0) {
                eprintln!("warning: f0 is constant (d0 = 0); admissible but degenerate");
            }
            let (m, omega) = match classify_square(&structure, &degrees) {
                Classification::Star(shape) => {
                    let mut data = match data {
                        Some(s) => parse_data(&s, structure.a(), structure.b())?,
                        None => DeterminantalData::sylvester(&structure),
                    };
                    if let Some(p) = perm {
                        data.sigma = parse_perm(&p, structure.a())?;
                    }
                    star_degree_vector(&shape, &d0, &data)?
                }
                Classification::Bipartite(shape) => {
                    let m = koszul_core::formulas::bipartite_degree_vector(&shape, &d0)?;
                    (m, structure.beta().iter().sum())
                }
                Classification::Generic => {
                    return Err(Error::InvalidShape(
                        "document is neither a star nor a bipartite square system".into(),
                    ))
                }
            };
            let solutions = mhb(&structure, &degrees)?;
            let mut over = vec![d0];
            over.extend(degrees);
            let (matrix_size, _) = resultant_degree(&structure, &over)?;
            let out = json!({
                "m": m.0,
                "omega": omega,
                "sizes": {
                    "matrix": biguint_value(&matrix_size),
                    "solutions": biguint_value(&solutions),
                },
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Cmd::Complex { file, m } => {
            let doc = load_system(&file)?;
            let m = parse_degree_vector(&m)?;
            let desc = match doc.arithmetic {
                Arithmetic::Rational => complex_terms(&doc.to_rational_system()?, &m)?,
                Arithmetic::Float64 => complex_terms(&doc.to_f64_system()?, &m)?,
            };
            let ranks: Value = desc
                .nonzero_vs()
                .iter()
                .map(|&v| (v.to_string(), Value::from(desc.rank(v))))
                .collect::<serde_json::Map<String, Value>>()
                .into();
            let out = json!({
                "determinantal": is_determinantal(&desc),
                "ranks": ranks,
                "terms": desc.terms,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Cmd::Matrix { file, m, out, format } => {
            let doc = load_system(&file)?;
            let m = parse_degree_vector(&m)?;
            let text = match doc.arithmetic {
                Arithmetic::Rational => {
                    let k = assemble_delta1(&doc.to_rational_system()?, &m)?;
                    match format {
                        MatrixFormat::Json => serde_json::to_string_pretty(
                            &k.to_labeled_json(|v| Value::String(format_rational(v))),
                        )
                        .unwrap(),
                        MatrixFormat::Coo => k.to_coo(format_rational)?,
                    }
                }
                Arithmetic::Float64 => {
                    let k = assemble_delta1(&doc.to_f64_system()?, &m)?;
                    match format {
                        MatrixFormat::Json => serde_json::to_string_pretty(
                            &k.to_labeled_json(|v| Value::from(*v)),
                        )
                        .unwrap(),
                        MatrixFormat::Coo => k.to_coo(|v| format!("{v}"))?,
                    }
                }
            };
            fs::write(&out, text).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
        }
        Cmd::SolveMep { file, f0, tol, seed } => {
            let doc = load_mep(&file)?;
            let inst = doc.to_instance_f64()?;
            let f0_vec: Option<Vec<f64>> = match f0.as_deref() {
                Some("auto") => None,
                Some(list) => Some(parse_f64_list(list)?),
                None => doc.f0.clone(),
            };
            let opts = SolveOptions {
                seed: seed_override(seed),
                separation_tol: tol,
                ..Default::default()
            };
            let pairs = solve_mep(&inst, f0_vec.as_deref(), &opts)?;
            let out: Vec<Value> = pairs
                .iter()
                .map(|p| {
                    json!({
                        "lambda": p.lambda.iter().map(complex_value).collect::<Vec<_>>(),
                        "vectors": p
                            .vectors
                            .iter()
                            .map(|v| v.iter().map(complex_value).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "residual": p.residual,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Cmd::Random {
            shape,
            alpha,
            beta,
            e,
            f0_case,
            arithmetic,
            vanishing,
            with_f0,
            seed,
        } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed_override(seed));
            let beta_list = parse_usize_list(&beta)?;
            let doc_text = match shape {
                ShapeKind::Mep => {
                    let doc = random_mep_document(&beta_list, with_f0, &mut rng)?;
                    serde_json::to_string_pretty(&doc).unwrap()
                }
                ShapeKind::Star | ShapeKind::Bipartite => {
                    let alpha_list = parse_usize_list(
                        alpha
                            .as_deref()
                            .ok_or_else(|| Error::Parse("--alpha is required".into()))?,
                    )?;
                    let counts_str =
                        e.ok_or_else(|| Error::Parse("--e counts are required".into()))?;
                    let counts: Vec<Vec<usize>> = counts_str
                        .split(';')
                        .map(parse_usize_list)
                        .collect::<Result<_, Error>>()?;
                    let spec = SystemSpec {
                        alpha: alpha_list,
                        beta: beta_list,
                        counts,
                        star: shape == ShapeKind::Star,
                        f0_case: f0_case.as_deref().map(parse_case).transpose()?,
                        arithmetic,
                        vanishing,
                    };
                    let doc = random_system_document(&spec, &mut rng)?;
                    serde_json::to_string_pretty(&doc).unwrap()
                }
            };
            println!("{doc_text}");
        }
    }
    Ok(())
}
