//! Command-line front end for `ncpoly`.
//!
//! Exit codes: 0 ok or member, 1 non-member or failed verification, 2 input
//! error, 3 simplex cone, 4 certification failure, 5 undecided.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ncpoly::error::Error;
use ncpoly::exact::parse_rat;
use ncpoly::io::{self, ConeDoc, ProofFile, TupleDoc, WitnessDoc, KIND_CERTIFICATE, KIND_DECOMPOSITION};
use ncpoly::nc_sets::{check_pt, check_sep, member_ph, ph_violation};
use ncpoly::polyhedral::{analyze, extreme_rays, facets_of, rays_of, HRep, VRep};
use ncpoly::section::{classify, to_csv, to_svg, SectionSpec};
use ncpoly::witness::construct_witness;
use ncpoly::{Decision, MatTuple, PtOracle, SolverConfig};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SIMPLEX: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;
pub const EXIT_UNDECIDED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "ncpoly", version, about = "Exact level-2 extensions of polyhedral cones")]
pub struct Cli {
    /// Feasibility tolerance of the numerical solvers.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Iteration cap for alternating projections.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub iter_max: usize,
    /// Largest denominator tried when rounding solver output.
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    pub max_den: u64,
    /// Seed for randomized helpers; every command is deterministic without it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format: text or json for reports, csv or svg for sections.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ph,
    Pt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Extreme rays.
    V,
    /// Facet functionals.
    H,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print dimension, ray and facet counts, properness and simpliciality.
    Analyze { cone: PathBuf },
    /// Convert between generator and facet descriptions.
    Convert {
        cone: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Both)]
        to: Target,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a tuple in the polyhedral but not the polytopal extension.
    Witness {
        cone: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide membership of a tuple.
    Check {
        #[arg(value_enum)]
        mode: Mode,
        cone: PathBuf,
        tuple: PathBuf,
        /// Where to write the proof of a pt verdict.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-run the exact checks on a witness, decomposition or certificate.
    Verify { cone: PathBuf, proof: PathBuf },
    /// Classify an affine 2-plane of tuples on a grid.
    Section {
        cone: PathBuf,
        /// JSON plane description; defaults to (diag(x, -1), offdiag(y), I).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Points per axis.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

type Outcome = std::result::Result<i32, Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_INPUT, message: e.to_string() }
}

fn core(e: Error) -> Failure {
    let code = match e {
        Error::SimplexCone => EXIT_SIMPLEX,
        Error::CertificationFailed(_)
        | Error::NormalizationFailed
        | Error::FeatureSearchFailed
        | Error::Verification(_)
        | Error::NoSeparatingFunctional(_) => EXIT_CERTIFICATION,
        _ => EXIT_INPUT,
    };
    Failure { code, message: e.to_string() }
}

impl Cli {
    fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default().with_max_den(self.max_den);
        cfg.tolerance = self.tolerance;
        cfg.iter_max = self.iter_max;
        cfg
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(|e| input(format!("{e:#}")))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(|e| input(format!("{e:#}"))),
        None => stdout.write_all(text.as_bytes()).map_err(input),
    }
}

/// A cone file resolved to generators and facets. If both descriptions are
/// given they must describe the same cone.
struct Cone {
    v: VRep,
    h: HRep,
}

fn load_cone(path: &Path) -> std::result::Result<Cone, Failure> {
    let doc = io::parse_cone(&read(path)?).map_err(core)?;
    let v = doc.to_vrep().map_err(core)?;
    let h = facets_of(&v).map_err(core)?;
    if doc.generators.is_some() {
        if let Some(given) = doc.to_hrep().map_err(core)? {
            let rays = rays_of(&given).map_err(core)?;
            if rays.canonical() != extreme_rays(&v).canonical() {
                return Err(input("generators and functionals describe different cones"));
            }
        }
    }
    Ok(Cone { v, h })
}

fn load_tuple(path: &Path, d: usize) -> std::result::Result<MatTuple, Failure> {
    let a = io::parse_tuple(&read(path)?).map_err(core)?;
    if a.dim() != d {
        return Err(core(Error::DimensionMismatch { expected: d, found: a.dim() }));
    }
    Ok(a)
}

fn analyze_cmd(cli: &Cli, path: &Path, stdout: &mut dyn Write) -> Outcome {
    let cone = load_cone(path)?;
    let a = analyze(&cone.v).map_err(core)?;
    let d = cone.v.dim();
    let (r, f) = (a.extreme_rays.len(), a.facets.len());
    let text = if cli.format == Some(Format::Json) {
        let v = serde_json::json!({ "dim": d, "rays": r, "facets": f, "proper": a.proper, "simplex": a.simplex });
        format!("{v}\n")
    } else {
        format!("dim={d} rays={r} facets={f} proper={} simplex={}\n", a.proper, a.simplex)
    };
    emit(&None, &text, stdout)?;
    Ok(EXIT_OK)
}

fn convert_cmd(path: &Path, to: Target, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Outcome {
    let cone = load_cone(path)?;
    let rays = extreme_rays(&cone.v);
    let doc = match to {
        Target::V => ConeDoc::from_vrep(&rays),
        Target::H => ConeDoc { dim: rays.dim(), ..ConeDoc::default() }.with_functionals(&cone.h),
        Target::Both => ConeDoc::from_vrep(&rays).with_functionals(&cone.h),
    };
    emit(out, &io::to_json(&doc), stdout)?;
    Ok(EXIT_OK)
}

fn witness_cmd(cli: &Cli, path: &Path, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Outcome {
    let cone = load_cone(path)?;
    match construct_witness(&cone.v, &cli.solver()) {
        Ok(w) => {
            emit(out, &io::to_json(&WitnessDoc::from_result(&w)), stdout)?;
            Ok(EXIT_OK)
        }
        Err(Error::SimplexCone) => Err(Failure {
            code: EXIT_SIMPLEX,
            message: "simplex cone: it is a linear image of the orthant, so every tuple in its polyhedral extension \
                      decomposes and no witness exists"
                .into(),
        }),
        Err(e) => Err(core(e)),
    }
}

fn check_cmd(cli: &Cli, mode: Mode, cone: &Path, tuple: &Path, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Outcome {
    let c = load_cone(cone)?;
    let a = load_tuple(tuple, c.v.dim())?;
    let json = cli.format == Some(Format::Json);
    match mode {
        Mode::Ph => {
            let member = member_ph(&c.h, &a).map_err(core)?;
            let text = match (member, json) {
                (true, false) => "member\n".to_string(),
                (false, false) => {
                    let k = ph_violation(&c.h, &a).map_err(core)?.expect("non-member violates a facet");
                    format!("non-member: facet {k} is not PSD\n")
                }
                (m, true) => format!("{}\n", serde_json::json!({ "mode": "ph", "member": m })),
            };
            emit(&None, &text, stdout)?;
            Ok(if member { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Mode::Pt => {
            let decision = PtOracle::with_facets(&c.v, c.h.clone()).decide(&a, &cli.solver()).map_err(core)?;
            let (label, proof, code) = match &decision {
                Decision::Member(d) => ("member", Some(TupleDoc::new(KIND_DECOMPOSITION, &d.blocks)), EXIT_OK),
                Decision::NonMember(s) => ("non-member", Some(TupleDoc::new(KIND_CERTIFICATE, &s.blocks)), EXIT_NEGATIVE),
                Decision::Undecided(_) => ("undecided", None, EXIT_UNDECIDED),
            };
            let proof = proof.map(|p| p.about(&a));
            if let (Some(p), Some(_)) = (&proof, out) {
                emit(out, &io::to_json(p), stdout)?;
            }
            let text = if json {
                let mut v = serde_json::json!({ "mode": "pt", "verdict": label });
                if let Some(p) = &proof {
                    v["proof"] = serde_json::to_value(p).expect("documents serialize");
                }
                if let Decision::Undecided(why) = &decision {
                    v["diagnostics"] = Value::String(why.clone());
                }
                format!("{v}\n")
            } else if let Decision::Undecided(why) = &decision {
                format!("undecided: {why}\n")
            } else {
                format!("{label}\n")
            };
            emit(&None, &text, stdout)?;
            Ok(code)
        }
    }
}

fn verify_cmd(cone: &Path, proof: &Path, stdout: &mut dyn Write) -> Outcome {
    let c = load_cone(cone)?;
    let proof = io::parse_proof(&read(proof)?).map_err(core)?;
    let d = c.v.dim();
    let failure = match &proof {
        ProofFile::Witness(w) => {
            if w.tuple.dim() != d || w.certificate.dim() != d {
                return Err(core(Error::DimensionMismatch { expected: d, found: w.tuple.dim() }));
            }
            match ph_violation(&c.h, &w.tuple).map_err(core)? {
                Some(k) => Some(format!("tuple is not in the polyhedral extension: facet {k} is not PSD")),
                None => check_sep(&c.v, &w.tuple, &w.certificate).map_err(core)?.map(|v| v.to_string()),
            }
        }
        ProofFile::Decomposition { tuple, decomposition } => {
            if tuple.dim() != d {
                return Err(core(Error::DimensionMismatch { expected: d, found: tuple.dim() }));
            }
            if decomposition.blocks.len() != c.v.len() {
                return Err(core(Error::DimensionMismatch { expected: c.v.len(), found: decomposition.blocks.len() }));
            }
            check_pt(&c.v, tuple, decomposition).map_err(core)?.map(|v| v.to_string())
        }
        ProofFile::Certificate { tuple, certificate } => {
            if tuple.dim() != d || certificate.dim() != d {
                return Err(core(Error::DimensionMismatch { expected: d, found: tuple.dim() }));
            }
            check_sep(&c.v, tuple, certificate).map_err(core)?.map(|v| v.to_string())
        }
    };
    match failure {
        None => {
            emit(&None, "pass\n", stdout)?;
            Ok(EXIT_OK)
        }
        Some(why) => {
            emit(&None, &format!("fail: {why}\n"), stdout)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn rat_arg(s: &str) -> std::result::Result<ncpoly::Rat, Failure> {
    parse_rat(s).map_err(core)
}

/// Plane file: `{"base", "dx", "dy"}` tuple documents, optional `"grid"`
/// (integer or pair) and `"range"` (pair of `[lo, hi]` rational strings).
fn load_spec(path: &Path) -> std::result::Result<SectionSpec, Failure> {
    let value: Value = serde_json::from_str(&read(path)?).map_err(input)?;
    let tuple = |key: &str| -> std::result::Result<MatTuple, Failure> {
        let v = value.get(key).ok_or_else(|| input(format!("section spec needs {key:?}")))?;
        let doc: TupleDoc = serde_json::from_value(v.clone()).map_err(input)?;
        doc.to_tuple().map_err(core)
    };
    let mut spec = SectionSpec { base: tuple("base")?, dx: tuple("dx")?, dy: tuple("dy")?, ..SectionSpec::default() };
    match value.get("grid") {
        None => {}
        Some(Value::Number(n)) => {
            let n = n.as_u64().ok_or_else(|| input("grid must be a positive integer"))? as usize;
            spec.grid = [n, n];
        }
        Some(Value::Array(ns)) if ns.len() == 2 => {
            for (k, n) in ns.iter().enumerate() {
                spec.grid[k] = n.as_u64().ok_or_else(|| input("grid must be a positive integer"))? as usize;
            }
        }
        Some(_) => return Err(input("grid must be an integer or a pair")),
    }
    if let Some(r) = value.get("range") {
        let pairs: Vec<[String; 2]> = serde_json::from_value(r.clone()).map_err(input)?;
        if pairs.len() != 2 {
            return Err(input("range needs one [lo, hi] pair per axis"));
        }
        for (k, [lo, hi]) in pairs.iter().enumerate() {
            spec.range[k] = (rat_arg(lo)?, rat_arg(hi)?);
        }
    }
    Ok(spec)
}

#[allow(clippy::too_many_arguments)]
fn section_cmd(
    cli: &Cli,
    cone: &Path,
    spec_file: &Option<PathBuf>,
    grid: Option<usize>,
    lo: &Option<String>,
    hi: &Option<String>,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Outcome {
    let c = load_cone(cone)?;
    let mut spec = match spec_file {
        Some(p) => load_spec(p)?,
        None => SectionSpec::default(),
    };
    if let Some(n) = grid {
        spec.grid = [n, n];
    }
    if lo.is_some() || hi.is_some() {
        for k in 0..2 {
            if let Some(l) = lo {
                spec.range[k].0 = rat_arg(l)?;
            }
            if let Some(h) = hi {
                spec.range[k].1 = rat_arg(h)?;
            }
        }
    }
    spec.validate().map_err(input)?;
    let oracle = PtOracle::with_facets(&c.v, c.h.clone());
    let points = classify(&oracle, &spec, &cli.solver()).map_err(core)?;
    let text = match cli.format {
        Some(Format::Svg) => to_svg(&spec, &points),
        None | Some(Format::Csv) => to_csv(&points),
        Some(f) => return Err(input(format!("section writes csv or svg, not {f:?}"))),
    };
    emit(out, &text, stdout)?;
    Ok(EXIT_OK)
}

/// Runs one parsed command, writing reports to `stdout` and diagnostics to
/// `stderr`, and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Analyze { cone } => analyze_cmd(cli, cone, stdout),
        Command::Convert { cone, to, out } => convert_cmd(cone, *to, out, stdout),
        Command::Witness { cone, out } => witness_cmd(cli, cone, out, stdout),
        Command::Check { mode, cone, tuple, out } => check_cmd(cli, *mode, cone, tuple, out, stdout),
        Command::Verify { cone, proof } => verify_cmd(cone, proof, stdout),
        Command::Section { cone, spec, grid, lo, hi, out } => section_cmd(cli, cone, spec, *grid, lo, hi, out, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
