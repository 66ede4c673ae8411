//! Front end for `filippov-core`: builtin or file algebras in, JSON or TSV
//! reports out.
//!
//! Exit codes: 0 when the checked property holds, 1 on a mathematical
//! failure (the report carries a witness), 2 on usage or I/O errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use filippov_core::deriv_solver::{
    chain_report, default_delta_sweep, solve_centroid, solve_delta_der, solve_der, solve_gder,
    solve_nary_derivations, solve_qder, verify_tuple, DerivationTuple, OperatorSpace,
    OperatorSpaceJson, SolverError,
};
use filippov_core::exact::{format_rational, parse_rational, Rational};
use filippov_core::lie_structure::{blockwise_delta, delta_report, QuotientJson, QuotientReport};
use filippov_core::nary_algebra::{AlgebraError, NaryAlgebra};
use filippov_core::theorems::{check_block_invariance, decompose, DecompositionJson};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "filippov",
    version,
    about = "Derivation spaces of n-ary Filippov algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check anticommutativity and the Filippov identity.
    Verify(Common),
    /// Solve for one operator space.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        space: Space,
        /// Required for `delta-der`.
        #[arg(long, value_parser = parse_delta, allow_hyphen_values = true)]
        delta: Option<Rational>,
    },
    /// Dimensions along Der, Der_δ, QDer, GDer, End.
    Chain {
        #[command(flatten)]
        common: Common,
        /// δ values to sweep (repeatable or comma separated); default 1, 1/n, -1, 1/2, 2.
        #[arg(long, value_parser = parse_delta, value_delimiter = ',', allow_hyphen_values = true)]
        delta: Vec<Rational>,
    },
    /// GDer modulo its annihilator, with Killing-form verdicts.
    DeltaReport(Common),
    /// Split a derivation tuple into its normal form.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// JSON list of n+1 matrices of rational strings.
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Report whether GDer = End and the algebra's shape.
    ProbeConjecture(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// `simple:n`, `semisimple:n:t`, or a path to an algebra file.
    #[arg(long)]
    pub algebra: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Der,
    DeltaDer,
    Centroid,
    Qder,
    Gder,
    NaryDer,
}

fn parse_delta(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Where an algebra comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSource {
    Simple(usize),
    Semisimple(usize, usize),
    File(PathBuf),
}

impl AlgebraSource {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let num = |x: &str| {
            x.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad number {x:?} in algebra spec {s:?}")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["simple", n] => Ok(Self::Simple(num(n)?)),
            ["semisimple", n, t] => Ok(Self::Semisimple(num(n)?, num(t)?)),
            ["simple" | "semisimple", ..] => Err(CliError::Usage(format!(
                "expected simple:n or semisimple:n:t, got {s:?}"
            ))),
            _ => Ok(Self::File(PathBuf::from(s))),
        }
    }

    pub fn build(&self) -> Result<NaryAlgebra, CliError> {
        Ok(match self {
            Self::Simple(n) => NaryAlgebra::make_simple(*n)?,
            Self::Semisimple(n, t) => {
                if *t == 0 {
                    return Err(CliError::Usage("semisimple needs t >= 1".into()));
                }
                let a = NaryAlgebra::make_simple(*n)?;
                NaryAlgebra::direct_sum(&vec![a; *t])?
            }
            Self::File(p) => NaryAlgebra::load(p)?,
        })
    }
}

pub fn load_algebra(spec: &str) -> Result<NaryAlgebra, CliError> {
    AlgebraSource::parse(spec)?.build()
}

/// A rendered report and whether the checked property held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Serialize)]
struct VerifyJson {
    arity: usize,
    dim: usize,
    algebra_hash: String,
    anticommutative: bool,
    filippov: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    anticommutativity_witness: Option<AntiWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filippov_witness: Option<FilippovWitness>,
}

#[derive(Serialize)]
struct AntiWitness {
    args: Vec<usize>,
    reason: String,
}

#[derive(Serialize)]
struct FilippovWitness {
    x: Vec<usize>,
    y: Vec<usize>,
    lhs: Vec<String>,
    rhs: Vec<String>,
}

pub fn cmd_verify(alg: &NaryAlgebra, format: Format) -> Outcome {
    let anti = alg.check_anticommutativity().err();
    let fil = alg.check_filippov().err();
    let passed = anti.is_none() && fil.is_none();
    let body = match format {
        Format::Json => json(&VerifyJson {
            arity: alg.arity(),
            dim: alg.dim(),
            algebra_hash: alg.content_hash(),
            anticommutative: anti.is_none(),
            filippov: fil.is_none(),
            anticommutativity_witness: anti.map(|a| AntiWitness {
                args: a.args,
                reason: a.reason,
            }),
            filippov_witness: fil.map(|f| FilippovWitness {
                x: f.x,
                y: f.y,
                lhs: strings(&f.lhs),
                rhs: strings(&f.rhs),
            }),
        }),
        Format::Tsv => {
            let mut s = String::from("check\tresult\n");
            let _ = writeln!(s, "anticommutative\t{}", pass(anti.is_none()));
            let _ = writeln!(s, "filippov\t{}", pass(fil.is_none()));
            if let Some(f) = fil {
                let _ = writeln!(s, "witness\t{f}");
            }
            s
        }
    };
    Outcome { body, passed }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct SolveJson {
    #[serde(flatten)]
    space: OperatorSpaceJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    head_dimension: Option<usize>,
}

pub fn solve_space(
    alg: &NaryAlgebra,
    space: Space,
    delta: Option<&Rational>,
) -> Result<OperatorSpace, CliError> {
    Ok(match space {
        Space::Der => solve_der(alg),
        Space::DeltaDer => {
            let d =
                delta.ok_or_else(|| CliError::Usage("--space delta-der needs --delta".into()))?;
            solve_delta_der(alg, d)
        }
        Space::Centroid => solve_centroid(alg),
        Space::Qder => solve_qder(alg),
        Space::Gder => solve_gder(alg),
        Space::NaryDer => solve_nary_derivations(alg),
    })
}

pub fn cmd_solve(
    alg: &NaryAlgebra,
    space: Space,
    delta: Option<&Rational>,
    format: Format,
) -> Result<Outcome, CliError> {
    let sp = solve_space(alg, space, delta)?;
    let head_dimension = (space == Space::Qder).then(|| sp.head_span().len());
    let body = match format {
        Format::Json => json(&SolveJson {
            space: sp.to_json(alg),
            head_dimension,
        }),
        Format::Tsv => {
            let mut s = String::from("kind\tdelta\tdimension\n");
            let _ = writeln!(
                s,
                "{}\t{}\t{}",
                sp.kind.name(),
                sp.delta.as_ref().map_or("-".into(), format_rational),
                sp.dimension()
            );
            if let Some(h) = head_dimension {
                let _ = writeln!(s, "qder_heads\t-\t{h}");
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

pub fn cmd_chain(alg: &NaryAlgebra, deltas: &[Rational], format: Format) -> Outcome {
    let deltas = if deltas.is_empty() {
        default_delta_sweep(alg.arity())
    } else {
        deltas.to_vec()
    };
    let rep = chain_report(alg, &deltas);
    let body = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct ChainJson<'a> {
                #[serde(flatten)]
                report: &'a filippov_core::deriv_solver::ChainReport,
                chain: String,
            }
            json(&ChainJson {
                report: &rep,
                chain: rep.render(),
            })
        }
        Format::Tsv => {
            let mut s = String::from("space\tdimension\n");
            let _ = writeln!(s, "Der\t{}", rep.der);
            for e in &rep.deltas {
                let _ = writeln!(s, "Der_{{{}}}\t{}", e.delta, e.dimension);
            }
            let _ = writeln!(s, "Der_δ span\t{}", rep.delta_span);
            let _ = writeln!(s, "QDer heads\t{}", rep.qder_heads);
            let _ = writeln!(s, "GDer\t{}", rep.gder);
            let _ = writeln!(s, "End\t{}", rep.end);
            let _ = writeln!(s, "chain\t{}", rep.render());
            s
        }
    };
    Outcome { body, passed: true }
}

/// Quotient reports for the whole algebra and, with several blocks, each block.
pub fn delta_reports(alg: &NaryAlgebra) -> (Vec<QuotientReport>, QuotientReport) {
    let multi = alg.blocks().is_some_and(|b| b.len() > 1);
    if multi {
        let rep = blockwise_delta(alg).expect("blocks present");
        (rep.blocks, rep.combined)
    } else {
        (Vec::new(), delta_report(alg).expect("nonempty GDer"))
    }
}

pub fn cmd_delta_report(alg: &NaryAlgebra, format: Format) -> Outcome {
    let (blocks, combined) = delta_reports(alg);
    let passed = combined.sl_compatible() && blocks.iter().all(QuotientReport::sl_compatible);
    let body = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct DeltaJson {
                algebra_hash: String,
                #[serde(skip_serializing_if = "Vec::is_empty")]
                blocks: Vec<QuotientJson>,
                combined: QuotientJson,
            }
            json(&DeltaJson {
                algebra_hash: alg.content_hash(),
                blocks: blocks.iter().map(QuotientReport::to_json).collect(),
                combined: combined.to_json(),
            })
        }
        Format::Tsv => {
            let mut s = String::from(
                "scope\tgder_dim\tannihilator_dim\tquotient_dim\tquotient_center_dim\tkilling_rank\tsl_compatible\n",
            );
            let rows = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| (format!("block{}", i + 1), b))
                .chain(std::iter::once(("combined".to_string(), &combined)));
            for (name, r) in rows {
                let _ = writeln!(
                    s,
                    "{name}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.algebra_dim,
                    r.annihilator.len(),
                    r.quotient_dim,
                    r.quotient_center_dim,
                    r.killing_rank,
                    yes(r.sl_compatible())
                );
            }
            s
        }
    };
    Outcome { body, passed }
}

pub fn load_tuple(path: &std::path::Path) -> Result<DerivationTuple, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    DerivationTuple::from_json(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DecomposeJson {
    algebra_hash: String,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    blocks: Vec<DecompositionJson>,
}

pub fn cmd_decompose(
    alg: &NaryAlgebra,
    t: &DerivationTuple,
    format: Format,
) -> Result<Outcome, CliError> {
    if let Err(SolverError::Shape(m)) = verify_tuple(alg, t) {
        return Err(CliError::Usage(m));
    }
    let multi = alg.blocks().is_some_and(|b| b.len() > 1);
    let result = if multi {
        check_block_invariance(alg, t).map(|r| r.blocks)
    } else {
        decompose(alg, t).map(|d| vec![d])
    };
    let (blocks, witness) = match result {
        Ok(b) => (b, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let passed = witness.is_none()
        && blocks
            .iter()
            .all(|b| b.residual_is_zero() && b.skew_pairing());
    let body = match format {
        Format::Json => json(&DecomposeJson {
            algebra_hash: alg.content_hash(),
            verified: witness.is_none(),
            witness,
            blocks: blocks.iter().map(|b| b.to_json()).collect(),
        }),
        Format::Tsv => {
            let mut s = String::from("block\th\tskew_pairing\tresidual\n");
            if let Some(w) = &witness {
                let _ = writeln!(s, "-\t-\t-\t{w}");
            }
            for (i, b) in blocks.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}",
                    i + 1,
                    strings(&b.h).join(","),
                    yes(b.skew_pairing()),
                    if b.residual_is_zero() {
                        "zero"
                    } else {
                        "nonzero"
                    }
                );
            }
            s
        }
    };
    Ok(Outcome { body, passed })
}

/// Simple `(n+1)`-dimensional: right dimension, Filippov identity holds, and
/// the algebra equals its own derived algebra.
pub fn looks_simple(alg: &NaryAlgebra) -> bool {
    alg.dim() == alg.arity() + 1
        && alg.check_filippov().is_ok()
        && alg.derived_dimension() == alg.dim()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub algebra_hash: String,
    pub arity: usize,
    pub dim: usize,
    pub gder: usize,
    pub end: usize,
    pub gder_is_end: bool,
    pub shape: &'static str,
}

pub fn probe(alg: &NaryAlgebra) -> ProbeReport {
    let gder = solve_gder(alg).dimension();
    let end = alg.dim() * alg.dim();
    let shape = if alg.dim() <= alg.arity() {
        "dim <= n"
    } else if looks_simple(alg) {
        "simple (n+1)-dim"
    } else {
        "other"
    };
    ProbeReport {
        algebra_hash: alg.content_hash(),
        arity: alg.arity(),
        dim: alg.dim(),
        gder,
        end,
        gder_is_end: gder == end,
        shape,
    }
}

/// Observational only: always passes.
pub fn cmd_probe_conjecture(alg: &NaryAlgebra, format: Format) -> Outcome {
    let p = probe(alg);
    let body = match format {
        Format::Json => json(&p),
        Format::Tsv => format!(
            "gder\tend\tGDer=End\tshape\n{}\t{}\t{}\t{}\n",
            p.gder,
            p.end,
            yes(p.gder_is_end),
            p.shape
        ),
    };
    Outcome { body, passed: true }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Verify(c) | Command::DeltaReport(c) | Command::ProbeConjecture(c) => c,
        Command::Solve { common, .. }
        | Command::Chain { common, .. }
        | Command::Decompose { common, .. } => common,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = common(&cli.command);
    let alg = load_algebra(&c.algebra)?;
    match &cli.command {
        Command::Verify(_) => Ok(cmd_verify(&alg, c.format)),
        Command::Solve { space, delta, .. } => cmd_solve(&alg, *space, delta.as_ref(), c.format),
        Command::Chain { delta, .. } => Ok(cmd_chain(&alg, delta, c.format)),
        Command::DeltaReport(_) => Ok(cmd_delta_report(&alg, c.format)),
        Command::Decompose { tuple, .. } => cmd_decompose(&alg, &load_tuple(tuple)?, c.format),
        Command::ProbeConjecture(_) => Ok(cmd_probe_conjecture(&alg, c.format)),
    }
}

/// Writes the report to `--out` (printing a one-line status) or to stdout.
pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    match &common(&cli.command).out {
        Some(path) => {
            std::fs::write(path, &outcome.body).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            println!("{}: wrote {}", pass(outcome.passed), path.display());
        }
        None => print!("{}", outcome.body),
    }
    Ok(())
}
