use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyprod::json::{
    broadcast_disk_sphere, classification_json, complex_json, join_json, mmf_json, parse_complex,
    parse_pairs, ranks_json, render,
};
use polyprod::mmf::mmf_including_ghosts;
use polyprod::verify::{self, Ops, VerifyConfig};
use polyprod::{
    build_kbar, classify, complex_from_mmf, decompose_loops, growth_report, join_decomposition,
    mmf, ranks_of_formal, Classification, ClassifyOptions, Error, ErrorKind, Face, FormalSpace,
    PairSpec, SimplicialComplex, DEFAULT_MAX_DEGREE,
};

#[derive(Parser)]
#[command(
    name = "polyprod",
    version,
    about = "Ellipticity of polyhedral products"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// Pairs file: {"pairs": [...]}.
    #[arg(long, conflicts_with = "disk_sphere")]
    pairs: Option<PathBuf>,
    /// Use (D^n, S^{n-1}) at every vertex.
    #[arg(long, value_name = "N")]
    disk_sphere: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal missing faces of a complex.
    Mmf {
        input: PathBuf,
        #[arg(long)]
        allow_ghosts: bool,
    },
    /// Elliptic or hyperbolic, with evidence.
    Classify {
        input: PathBuf,
        #[command(flatten)]
        pairs: PairArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u32,
        /// Attach rational homotopy ranks of the decomposition or witness.
        #[arg(long)]
        with_ranks: bool,
        #[arg(long)]
        allow_ghosts: bool,
    },
    /// Loop-space decomposition and join splitting of an elliptic case.
    Decompose {
        input: PathBuf,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Rank series of a classified complex, or of a named space.
    Ranks {
        input: Option<PathBuf>,
        #[command(flatten)]
        pairs: PairArgs,
        /// Ω(S^a ∨ S^b ∨ ...) for the given sphere dimensions.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["input", "loop_spheres"])]
        loop_wedge: Option<Vec<u32>>,
        /// ΩS^a × ΩS^b × ... for the given sphere dimensions.
        #[arg(long, value_delimiter = ',', conflicts_with = "input")]
        loop_spheres: Option<Vec<u32>>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u32,
    },
    /// Seeded property checks; exits 1 if any property fails.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        max_m: usize,
    },
    /// Emit a complex from a named family.
    Family {
        name: FamilyName,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        sigma1: Option<String>,
        #[arg(long)]
        sigma2: Option<String>,
        /// Disjoint missing faces, e.g. "1,2|3,4".
        #[arg(long)]
        blocks: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyName {
    BoundarySimplex,
    Kbar,
    DisjointMmf,
}

enum Failure {
    Core(Error),
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Internal => 4,
            },
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Input(s) | Failure::Io(s) => s.clone(),
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    Ok(parse_complex(&read(path)?)?)
}

fn load_pairs(args: &PairArgs, m: usize) -> Result<PairSpec, Failure> {
    let spec = match (&args.pairs, args.disk_sphere) {
        (Some(p), _) => parse_pairs(&read(p)?)?,
        (None, Some(n)) => broadcast_disk_sphere(n),
        (None, None) => {
            return Err(Failure::Input(
                "one of --pairs or --disk-sphere is required".into(),
            ))
        }
    };
    Ok(spec.resolve(m)?)
}

fn parse_face(text: &str, m: usize) -> Result<Face, Failure> {
    let vs = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("bad vertex list {text:?}: {e}")))?;
    Face::within(vs, m).map_err(|e| Failure::Input(e.to_string()))
}

/// Space whose ranks accompany a classification: the decomposition when
/// elliptic, the loops on the witness wedge when hyperbolic through (ii).
fn ranked_space(c: &Classification) -> Option<FormalSpace> {
    c.decomposition.clone().or_else(|| {
        c.witness
            .as_ref()
            .map(|w| FormalSpace::loop_of(w.wedge.clone()).normalize())
    })
}

fn ranks_value(space: &FormalSpace, pairs: &PairSpec, n: u32) -> Result<Value, Failure> {
    let r = ranks_of_formal(space, pairs, n)?;
    let g = growth_report(&r)?;
    let mut v = ranks_json(&r, &g);
    v["space"] = json!(space.to_string());
    Ok(v)
}

fn cmd_mmf(input: &Path, allow_ghosts: bool) -> Outcome {
    let k = load_complex(input)?;
    if allow_ghosts {
        return Ok((mmf_json(&mmf_including_ghosts(&k)), 0));
    }
    if let Some(v) = k.ghosts().min_vertex() {
        return Err(Error::GhostVertex(v).into());
    }
    Ok((mmf_json(&mmf(&k)), 0))
}

fn cmd_classify(
    input: &Path,
    pairs: &PairArgs,
    max_degree: u32,
    with_ranks: bool,
    allow_ghosts: bool,
) -> Outcome {
    let k = load_complex(input)?;
    let pairs = load_pairs(pairs, k.m())?;
    let c = classify(&k, &pairs, ClassifyOptions { allow_ghosts })?;
    let mut out = classification_json(&c);
    if with_ranks {
        out["ranks"] = match ranked_space(&c) {
            Some(space) => ranks_value(&space, &pairs, max_degree)?,
            None => Value::Null,
        };
    }
    Ok((out, 0))
}

fn cmd_decompose(input: &Path, pairs: &PairArgs) -> Outcome {
    let k = load_complex(input)?;
    let pairs = load_pairs(pairs, k.m())?;
    let d = decompose_loops(&k, &pairs)?;
    let join = join_decomposition(&k)?;
    Ok((
        json!({
            "decomposition": d,
            "display": d.to_string(),
            "join": join_json(&join),
        }),
        0,
    ))
}

fn cmd_ranks(
    input: Option<&Path>,
    pairs: &PairArgs,
    loop_wedge: Option<&[u32]>,
    loop_spheres: Option<&[u32]>,
    n: u32,
) -> Outcome {
    let spheres = |ds: &[u32]| {
        ds.iter()
            .map(|d| FormalSpace::Sphere(*d))
            .collect::<Vec<_>>()
    };
    let (space, pairs) = match (input, loop_wedge, loop_spheres) {
        (Some(path), None, None) => {
            let k = load_complex(path)?;
            let pairs = load_pairs(pairs, k.m())?;
            let c = classify(&k, &pairs, ClassifyOptions::default())?;
            let space = ranked_space(&c).ok_or_else(|| {
                Failure::Core(Error::Precondition(
                    "hyperbolic without a wedge witness; no rank series available".into(),
                ))
            })?;
            (space, pairs)
        }
        (None, Some(ds), None) => (
            FormalSpace::loop_of(FormalSpace::Wedge(spheres(ds))).normalize(),
            PairSpec::new(Vec::new()),
        ),
        (None, None, Some(ds)) => (
            FormalSpace::Product(spheres(ds).into_iter().map(FormalSpace::loop_of).collect())
                .normalize(),
            PairSpec::new(Vec::new()),
        ),
        _ => {
            return Err(Failure::Input(
                "give a complex, --loop-wedge, or --loop-spheres".into(),
            ))
        }
    };
    Ok((ranks_value(&space, &pairs, n)?, 0))
}

fn cmd_verify(seed: u64, iters: usize, max_m: usize) -> Outcome {
    let cfg = VerifyConfig {
        seed,
        iterations: iters,
        max_m,
    };
    let report = verify::run(&cfg, &Ops::default())?;
    let code = if report.passed { 0 } else { 1 };
    let v = serde_json::to_value(&report).map_err(|e| Failure::Io(e.to_string()))?;
    Ok((v, code))
}

fn required<'a>(s: Option<&'a str>, flag: &str) -> Result<&'a str, Failure> {
    s.ok_or_else(|| Failure::Input(format!("{flag} is required for this family")))
}

fn cmd_family(
    name: FamilyName,
    m: usize,
    sigma1: Option<&str>,
    sigma2: Option<&str>,
    blocks: Option<&str>,
) -> Outcome {
    let bad = |e: Error| Failure::Input(e.to_string());
    let k = match name {
        FamilyName::BoundarySimplex => {
            SimplicialComplex::boundary_of_simplex(Face::full(m), m).map_err(bad)?
        }
        FamilyName::Kbar => {
            let s1 = parse_face(required(sigma1, "--sigma1")?, m)?;
            let s2 = parse_face(required(sigma2, "--sigma2")?, m)?;
            build_kbar(m, s1, s2).map_err(bad)?
        }
        FamilyName::DisjointMmf => {
            let faces = required(blocks, "--blocks")?
                .split('|')
                .map(|b| parse_face(b, m))
                .collect::<Result<Vec<_>, _>>()?;
            if !polyprod::mutually_disjoint(&faces) {
                return Err(Failure::Input("blocks must be pairwise disjoint".into()));
            }
            complex_from_mmf(m, &faces).map_err(bad)?
        }
    };
    Ok((complex_json(&k), 0))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Mmf {
            input,
            allow_ghosts,
        } => cmd_mmf(input, *allow_ghosts),
        Command::Classify {
            input,
            pairs,
            max_degree,
            with_ranks,
            allow_ghosts,
        } => cmd_classify(input, pairs, *max_degree, *with_ranks, *allow_ghosts),
        Command::Decompose { input, pairs } => cmd_decompose(input, pairs),
        Command::Ranks {
            input,
            pairs,
            loop_wedge,
            loop_spheres,
            max_degree,
        } => cmd_ranks(
            input.as_deref(),
            pairs,
            loop_wedge.as_deref(),
            loop_spheres.as_deref(),
            *max_degree,
        ),
        Command::Verify { seed, iters, max_m } => cmd_verify(*seed, *iters, *max_m),
        Command::Family {
            name,
            m,
            sigma1,
            sigma2,
            blocks,
        } => cmd_family(
            *name,
            *m,
            sigma1.as_deref(),
            sigma2.as_deref(),
            blocks.as_deref(),
        ),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(value, code)| {
        emit(&render(&value), cli.output.as_deref())?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
