//! Command-line front end for `chevalley`: root tables, structure constants,
//! matrix evaluation, decompositions and seeded test campaigns.
//!
//! Every report is a single JSON document on standard output (or in the
//! `--out` file); diagnostics go to standard error. Exit codes are 0 on
//! success, 1 when a verification fails or no stable-rank witness exists,
//! and 2 on usage errors.
//!
//! Random words come from ChaCha8 seeded with `seed_from_u64(seed)` and
//! stream set to the trial index. Each draw is `next_u64() % n`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chevalley::gauss::{conjugate_to_uhv, gauss_decompose, unitriangular5};
use chevalley::json::{
    constant_rows, gauss_form_to_json, uhv_to_json, unitri5_to_json, word_from_json, SystemDesc,
};
use chevalley::repr::oracle_kinds;
use chevalley::roots::Family;
use chevalley::{CartanType, Elem, Generator, Group, Oracle, RepKind, Representation, Ring, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{flag}: {source}")]
    Library {
        flag: &'static str,
        #[source]
        source: chevalley::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
            CliError::Library { source, .. } => match source {
                chevalley::Error::NoWitness { .. }
                | chevalley::Error::SearchBoundExceeded(_)
                | chevalley::Error::CollectionBound(_)
                | chevalley::Error::Internal(_) => 1,
                _ => 2,
            },
        }
    }
}

fn lib_err(flag: &'static str) -> impl Fn(chevalley::Error) -> CliError {
    move |source| CliError::Library { flag, source }
}

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "chv", version, about = "Gauss decompositions in elementary Chevalley groups")]
pub struct RunConfig {
    /// Search bound for stable-rank witnesses over the integers.
    #[arg(long, global = true, env = "CHV_WITNESS_BOUND")]
    pub witness_bound: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the root table of a system.
    Roots {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the commutator table of a system.
    Constants {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a word in a representation.
    Eval {
        /// adjoint, natural-a, natural-c or minuscule:k
        #[arg(long)]
        rep: String,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gauss decomposition h·u1·v·u2 of a word.
    Decompose(FormArgs),
    /// Conjugate a word into u·h·v form.
    Conjugate(FormArgs),
    /// Unitriangular factorisation with five blocks.
    Unitri5(FormArgs),
    /// Decompose seeded random words and verify each one.
    RandomTest(CampaignArgs),
    /// Check stable rank 1 of a finite ring exhaustively.
    CheckSr {
        #[arg(long)]
        ring: String,
    },
}

#[derive(Debug, Args)]
pub struct FormArgs {
    /// Expected system type; must agree with the word file.
    #[arg(long = "type")]
    pub ty: Option<String>,
    /// Expected ring; must agree with the word file.
    #[arg(long)]
    pub ring: Option<String>,
    #[arg(long)]
    pub word: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OracleChoice::Faithful)]
    pub verify: OracleChoice,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    #[arg(long = "type")]
    pub ty: String,
    #[arg(long)]
    pub ring: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 30)]
    pub maxlen: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OracleChoice::Faithful)]
    pub verify: OracleChoice,
    /// Include wall time in the report, which makes it nondeterministic.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleChoice {
    /// Natural representation for A and C, adjoint plus minuscule otherwise.
    Faithful,
    Adjoint,
    /// Natural representation; types A and C only.
    Natural,
}

impl OracleChoice {
    pub fn kinds(self, ty: CartanType) -> Result<Vec<RepKind>, CliError> {
        match (self, ty.family) {
            (OracleChoice::Faithful, _) => Ok(oracle_kinds(ty)),
            (OracleChoice::Adjoint, _) => Ok(vec![RepKind::Adjoint]),
            (OracleChoice::Natural, Family::A) => Ok(vec![RepKind::NaturalA]),
            (OracleChoice::Natural, Family::C) => Ok(vec![RepKind::NaturalC]),
            (OracleChoice::Natural, _) => {
                Err(CliError::Usage(format!("--verify: no natural representation for type {ty}")))
            }
        }
    }
}

/// Summary of a `random-test` campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub trials: u64,
    pub failures: u64,
    pub max_block_params: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&config, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "chv: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command.
pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let bound = config.witness_bound;
    match &config.command {
        Command::Roots { ty, out: path } => {
            let ty = parse_type(ty)?;
            emit(out, path.as_deref(), &roots_report(&Group::new(ty, Ring::Zmod(2))))
        }
        Command::Constants { ty, out: path } => {
            let g = Group::new(parse_type(ty)?, Ring::Zmod(2));
            emit(out, path.as_deref(), &json!(constant_rows(&g)))
        }
        Command::Eval { rep, word, out: path } => {
            let kind: RepKind = rep.parse().map_err(lib_err("--rep"))?;
            let (g, w) = read_word(word, bound)?;
            let rep = Representation::new(&g, kind).map_err(lib_err("--rep"))?;
            let m = rep.eval(&g, &w).map_err(lib_err("--word"))?;
            emit(out, path.as_deref(), &m.to_json(&g.ring))
        }
        Command::Decompose(a) => {
            let (g, w, oracle) = prepare(a, bound)?;
            let f = gauss_decompose(&g, &w).map_err(lib_err("--word"))?;
            emit(out, a.out.as_deref(), &gauss_form_to_json(&g, &f))?;
            if !f.supports_ok(&g) {
                return Err(CliError::Verification("blocks have the wrong supports".into()));
            }
            check(&oracle, &g, &w, &f.to_word(&g))
        }
        Command::Conjugate(a) => {
            let (g, w, oracle) = prepare(a, bound)?;
            let c = conjugate_to_uhv(&g, &w).map_err(lib_err("--word"))?;
            emit(out, a.out.as_deref(), &uhv_to_json(&g, &c))?;
            let inverse = Word::new(
                c.conjugator.gens.iter().rev().map(|x| Generator::x(x.root, g.ring.neg(x.param))).collect(),
            );
            check(&oracle, &g, &c.conjugator.concat(&w).concat(&inverse), &c.to_word(&g))
        }
        Command::Unitri5(a) => {
            let (g, w, oracle) = prepare(a, bound)?;
            let f = unitriangular5(&g, &w).map_err(lib_err("--word"))?;
            emit(out, a.out.as_deref(), &unitri5_to_json(&g, &f))?;
            if !f.is_alternating(&g) {
                return Err(CliError::Verification("blocks do not alternate".into()));
            }
            check(&oracle, &g, &w, &f.to_word())
        }
        Command::RandomTest(a) => {
            let ty = parse_type(&a.ty)?;
            let ring = parse_ring(&a.ring)?;
            if !ring.is_finite() {
                return Err(CliError::Usage(format!("--ring: random campaigns need a finite ring, got {ring}")));
            }
            let g = Group::new(ty, ring).with_witness_bound(bound);
            let oracle = Oracle::new(&g, &a.verify.kinds(ty)?).map_err(lib_err("--verify"))?;
            let report = campaign(&g, &oracle, a, err);
            emit(out, None, &serde_json::to_value(&report).expect("reports serialise"))?;
            if report.failures > 0 {
                return Err(CliError::Verification(format!("{} of {} trials failed", report.failures, report.trials)));
            }
            Ok(())
        }
        Command::CheckSr { ring } => {
            let ring = parse_ring(ring)?;
            let sr1 = ring.check_sr1().map_err(lib_err("--ring"))?;
            emit(out, None, &json!({ "sr1": sr1 }))
        }
    }
}

fn parse_type(s: &str) -> Result<CartanType, CliError> {
    s.parse().map_err(lib_err("--type"))
}

fn parse_ring(s: &str) -> Result<Ring, CliError> {
    s.parse().map_err(lib_err("--ring"))
}

fn read_word(path: &Path, bound: Option<u64>) -> Result<(Group, Word), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--word: cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("--word: {} is not JSON: {e}", path.display())))?;
    let (g, w) = word_from_json(&v).map_err(lib_err("--word"))?;
    Ok((g.with_witness_bound(bound), w))
}

fn prepare(a: &FormArgs, bound: Option<u64>) -> Result<(Group, Word, Oracle), CliError> {
    let (g, w) = read_word(&a.word, bound)?;
    let ty = g.system().cartan_type();
    if let Some(expected) = &a.ty {
        if parse_type(expected)? != ty {
            return Err(CliError::Usage(format!("--type: {expected} does not match the word file ({ty})")));
        }
    }
    if let Some(expected) = &a.ring {
        if parse_ring(expected)? != g.ring {
            return Err(CliError::Usage(format!("--ring: {expected} does not match the word file ({})", g.ring)));
        }
    }
    let oracle = Oracle::new(&g, &a.verify.kinds(ty)?).map_err(lib_err("--verify"))?;
    Ok((g, w, oracle))
}

fn check(oracle: &Oracle, g: &Group, lhs: &Word, rhs: &Word) -> Result<(), CliError> {
    if oracle.verify_equal(g, lhs, rhs).map_err(lib_err("--word"))? {
        Ok(())
    } else {
        Err(CliError::Verification("oracle images differ".into()))
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialise");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("--out: cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    }
}

pub fn roots_report(g: &Group) -> Value {
    let rs = g.system();
    let roots: Vec<Value> = rs
        .roots()
        .map(|a| {
            json!({
                "id": a.index(),
                "root": rs.vector(a),
                "height": rs.height(a),
                "norm": rs.norm(a),
            })
        })
        .collect();
    json!({
        "system": SystemDesc::of(rs.cartan_type()),
        "cartan": rs.cartan(),
        "roots": roots,
    })
}

fn draw(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    rng.next_u64() % n
}

fn draw_elem(rng: &mut ChaCha8Rng, ring: &Ring, unit: bool) -> Elem {
    match ring.size() {
        Some(n) => loop {
            let e = ring.element(draw(rng, n)).expect("index below the ring size");
            if !unit || ring.is_unit(e) {
                return e;
            }
        },
        None if unit => ring.from_i64(if draw(rng, 2) == 0 { 1 } else { -1 }),
        None => ring.from_i64(draw(rng, 11) as i64 - 5),
    }
}

/// The random word for trial `stream` of a campaign seeded with `seed`.
///
/// Each generator is x with probability 1/2, h or w with probability 1/4
/// each. Roots are uniform over all roots, parameters uniform over the ring,
/// over its units for h and w. Over the integers x parameters lie in
/// `-5..=5` and h, w parameters are ±1.
pub fn random_word(group: &Group, seed: u64, stream: u64, maxlen: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let rs = group.system();
    let roots: Vec<_> = rs.roots().collect();
    let gens = (0..maxlen)
        .map(|_| {
            let kind = draw(&mut rng, 4);
            let root = roots[draw(&mut rng, roots.len() as u64) as usize];
            let param = draw_elem(&mut rng, &group.ring, kind >= 2);
            match kind {
                0 | 1 => Generator::x(root, param),
                2 => Generator::h(root, param),
                _ => Generator::w(root, param),
            }
        })
        .collect();
    Word::new(gens)
}

enum Trial {
    Passed(usize),
    Failed(String),
}

fn run_trial(g: &Group, oracle: &Oracle, seed: u64, index: u64, maxlen: usize) -> Trial {
    let w = random_word(g, seed, index, maxlen);
    let f = match gauss_decompose(g, &w) {
        Ok(f) => f,
        Err(e) => return Trial::Failed(e.to_string()),
    };
    if !f.supports_ok(g) {
        return Trial::Failed("blocks have the wrong supports".into());
    }
    match oracle.verify_equal(g, &w, &f.to_word(g)) {
        Ok(true) => Trial::Passed(f.max_block_params()),
        Ok(false) => Trial::Failed("oracle images differ".into()),
        Err(e) => Trial::Failed(e.to_string()),
    }
}

/// Runs the trials in parallel; results are reported in trial order.
pub fn campaign(g: &Group, oracle: &Oracle, a: &CampaignArgs, err: &mut dyn Write) -> CampaignReport {
    let start = Instant::now();
    let results: Vec<Trial> =
        (0..a.trials).into_par_iter().map(|i| run_trial(g, oracle, a.seed, i, a.maxlen)).collect();
    let mut report = CampaignReport { trials: a.trials, failures: 0, max_block_params: 0, elapsed_ms: None };
    for (i, t) in results.into_iter().enumerate() {
        match t {
            Trial::Passed(m) => report.max_block_params = report.max_block_params.max(m),
            Trial::Failed(why) => {
                report.failures += 1;
                let _ = writeln!(err, "trial {i}: {why}");
            }
        }
    }
    if a.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}
