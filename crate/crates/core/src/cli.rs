//! The `ds-kit` command line: argument parsing, input decoding and JSON
//! verdicts.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{LaurentMatrix, OrbitSpec, Scalar};
use crate::coxeter::{
    coxeter_decide, ds_generator, h1_dimension, is_rigid_coxeter_gl, rigid_table_simple_type,
    CharPolySpec, CoxeterFormalType, Family, SimpleTypeQuery,
};
use crate::error::DsError;
use crate::formal::{certify_slope, regsing_normalize, SlopeCertificate};
use crate::fuchsian::{fuchsian_decide, FuchsianVerdict};
use crate::rootsys::{EdgeCounting, DEFAULT_BUDGET};
use crate::unramified::{
    count_rank2_moduli, unramified_decide, EllMode, UnramFormalType, UnramOptions, UnramVerdict,
};

pub const SCHEMA: &str = "ds-kit/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ds-kit", version, about = "Deligne-Simpson, rigidity and slope checks")]
pub struct Cli {
    /// Sensitivity switches: ell-ge-2, table-conjunction, directed-edges
    #[arg(long = "flag", value_enum, global = true)]
    pub flags: Vec<Flag>,
    /// Maximum number of search states for decomposition searches
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Flag {
    #[value(name = "ell-ge-2")]
    EllGe2,
    TableConjunction,
    DirectedEdges,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Existence and rigidity for Fuchsian connections
    FuchsianDs {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        emit_quiver: Option<PathBuf>,
    },
    /// Existence for unramified formal types
    UnramifiedDs {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        emit_quiver: Option<PathBuf>,
    },
    /// Existence for a maximally ramified type at 0 and an orbit at infinity
    CoxeterDs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        p0: Scalar,
        #[arg(long)]
        orbit: PathBuf,
    },
    /// Rigidity: Fuchsian with --input, maximally ramified with --n --r --orbit
    Rigidity {
        #[arg(long, conflicts_with_all = ["n", "r", "orbit"])]
        input: Option<PathBuf>,
        #[arg(long, requires_all = ["r", "orbit"])]
        n: Option<usize>,
        #[arg(long, requires_all = ["n", "orbit"])]
        r: Option<usize>,
        #[arg(long, requires_all = ["n", "r"])]
        orbit: Option<PathBuf>,
    },
    /// Rigidity lookup for homogeneous connections of simple type
    RigidityTable {
        #[arg(long = "type")]
        family: Family,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        r: usize,
    },
    /// Certify the slope of d + M dz/z
    Slope {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Gauge a nonresonant regular singular connection to d + B0 dz/z
    NormalizeRegsing {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        order: i64,
    },
    /// Point count for the rank-2 slope-1 family
    CountRank2 {
        #[arg(long)]
        input: PathBuf,
    },
    /// Graphviz export of the quiver built from a Fuchsian or unramified input
    QuiverExport {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Verdict {
    pub schema: String,
    pub command: String,
    pub inputs_digest: String,
    pub result: Value,
    pub notes: Vec<String>,
}

/// Failure carrying the exit code and a JSON body.
#[derive(Debug)]
struct Failure {
    code: i32,
    body: Value,
}

impl Failure {
    fn input(message: impl Into<String>, path: Option<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            body: json!({"kind": "input", "message": message.into(), "path": path}),
        }
    }
}

impl From<DsError> for Failure {
    fn from(e: DsError) -> Self {
        if e.is_inconclusive() {
            Failure {
                code: EXIT_INCONCLUSIVE,
                body: json!({"kind": "inconclusive", "message": e.to_string()}),
            }
        } else {
            Failure::input(e.to_string(), None)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FuchsianInput {
    #[serde(default)]
    schema: Option<String>,
    orbits: Vec<OrbitSpec>,
    #[serde(default)]
    sequences: Option<Vec<Vec<Scalar>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnramInput {
    #[serde(default)]
    schema: Option<String>,
    types: Vec<UnramFormalType>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Rank2Input {
    #[serde(default)]
    schema: Option<String>,
    #[serde(rename = "type")]
    formal_type: UnramFormalType,
    orbit: OrbitSpec,
}

struct Context {
    hasher: Sha256,
    notes: Vec<String>,
    flags: Vec<Flag>,
    budget: usize,
}

impl Context {
    fn has(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    fn digest_part(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    fn read(&mut self, label: &str, path: &Path) -> Result<Vec<u8>, Failure> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display()), None))?;
        self.digest_part(label, &bytes);
        Ok(bytes)
    }

    fn parse<T: DeserializeOwned>(&mut self, label: &str, path: &Path) -> Result<T, Failure> {
        let bytes = self.read(label, path)?;
        let de = &mut serde_json::Deserializer::from_slice(&bytes);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let p = e.path().to_string();
            Failure::input(format!("{}: {}", path.display(), e.inner()), Some(p))
        })
    }

    fn write(&self, path: &Path, text: &str) -> Result<(), Failure> {
        std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()), None))
    }

    fn unram_options(&self) -> UnramOptions {
        UnramOptions {
            ell_mode: if self.has(Flag::EllGe2) {
                EllMode::AtLeastTwo
            } else {
                EllMode::GreaterThanTwo
            },
            counting: if self.has(Flag::DirectedEdges) {
                EdgeCounting::Directed
            } else {
                EdgeCounting::Undirected
            },
            budget: self.budget,
            allow_regular_base: false,
        }
    }
}

fn check_schema(schema: &Option<String>) -> Result<(), Failure> {
    match schema {
        Some(s) if s != SCHEMA => Err(Failure::input(
            format!("unsupported schema {s:?}, expected {SCHEMA:?}"),
            Some("schema".into()),
        )),
        _ => Ok(()),
    }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn fuchsian_result(v: &FuchsianVerdict) -> Value {
    json!({
        "exists": v.exists,
        "rigidity": v.rigidity,
        "root_class": v.report.class,
        "vertices": v.data.quiver.vertices(),
        "alpha": v.data.alpha,
        "lambda": strings(&v.data.lambda),
    })
}

fn unram_result(v: &UnramVerdict) -> Value {
    json!({
        "exists": v.exists,
        "exists_ell_gt_2": v.exists_ell_gt_2,
        "exists_ell_ge_2": v.exists_ell_ge_2,
        "root_class": v.class,
        "vertices": v.data.quiver.vertices(),
        "alpha": v.data.alpha,
        "lambda": strings(&v.data.lambda),
    })
}

fn load_fuchsian(ctx: &mut Context, path: &Path) -> Result<FuchsianVerdict, Failure> {
    let input: FuchsianInput = ctx.parse("input", path)?;
    check_schema(&input.schema)?;
    let v = fuchsian_decide(&input.orbits, input.sequences.as_deref(), ctx.budget)?;
    if input.sequences.is_none() {
        ctx.notes.push("factor sequences: default round-robin order".into());
    }
    if let Some(s) = v.report.real_shortcut {
        ctx.notes.push(format!("real-root criterion agrees: {s}"));
    }
    Ok(v)
}

fn load_unram(ctx: &mut Context, path: &Path) -> Result<UnramVerdict, Failure> {
    let input: UnramInput = ctx.parse("input", path)?;
    check_schema(&input.schema)?;
    let opts = ctx.unram_options();
    let v = unramified_decide(&input.types, &opts)?;
    ctx.notes.extend(v.notes.iter().cloned());
    if opts.counting == EdgeCounting::Directed {
        ctx.notes.push("Cartan matrix built with directed arrow counts".into());
    }
    Ok(v)
}

fn load_orbit(ctx: &mut Context, path: &Path) -> Result<OrbitSpec, Failure> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OrbitFile {
        Wrapped {
            #[serde(default)]
            schema: Option<String>,
            orbit: OrbitSpec,
        },
        Bare(OrbitSpec),
    }
    match ctx.parse::<OrbitFile>("orbit", path)? {
        OrbitFile::Wrapped { schema, orbit } => {
            check_schema(&schema)?;
            Ok(orbit)
        }
        OrbitFile::Bare(o) => Ok(o),
    }
}

fn load_matrix(ctx: &mut Context, path: &Path) -> Result<LaurentMatrix, Failure> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum MatrixFile {
        Wrapped {
            #[serde(default)]
            schema: Option<String>,
            matrix: LaurentMatrix,
        },
        Bare(LaurentMatrix),
    }
    match ctx.parse::<MatrixFile>("matrix", path)? {
        MatrixFile::Wrapped { schema, matrix } => {
            check_schema(&schema)?;
            Ok(matrix)
        }
        MatrixFile::Bare(m) => Ok(m),
    }
}

fn slope_result(cert: &SlopeCertificate) -> (Value, i32) {
    match cert {
        SlopeCertificate::CertifiedSlope { slope, j_set } => (
            json!({"kind": "certified", "slope": slope.to_string(), "parahoric": j_set}),
            EXIT_OK,
        ),
        SlopeCertificate::UpperBoundOnly { bound, j_set } => (
            json!({"kind": "upper_bound", "slope_upper_bound": bound.to_string(), "parahoric": j_set}),
            EXIT_INCONCLUSIVE,
        ),
        SlopeCertificate::RegularSingularCandidate => {
            (json!({"kind": "regular_singular_candidate"}), EXIT_OK)
        }
    }
}

fn execute(ctx: &mut Context, cmd: &Command) -> Result<(Value, i32), Failure> {
    match cmd {
        Command::FuchsianDs { input, emit_quiver } => {
            let v = load_fuchsian(ctx, input)?;
            if let Some(out) = emit_quiver {
                ctx.write(out, &v.data.to_dot())?;
            }
            Ok((fuchsian_result(&v), EXIT_OK))
        }
        Command::UnramifiedDs { input, emit_quiver } => {
            let v = load_unram(ctx, input)?;
            if let Some(out) = emit_quiver {
                ctx.write(out, &v.data.to_dot())?;
            }
            Ok((unram_result(&v), EXIT_OK))
        }
        Command::CoxeterDs { n, r, p0, orbit } => {
            ctx.digest_part("args", format!("n={n} r={r} p0={p0}").as_bytes());
            let o = load_orbit(ctx, orbit)?;
            let f = CoxeterFormalType::monomial(*n, *r, Scalar::one(), p0.clone())?;
            let v = coxeter_decide(&f, &o)?;
            let generator = ds_generator(*r, &CharPolySpec::of_orbit(&o)?)?;
            let gen: Vec<Value> = generator
                .blocks()
                .iter()
                .map(|b| json!({"eig": b.eig.to_string(), "partition": b.partition}))
                .collect();
            Ok((
                json!({
                    "exists": v.exists,
                    "trace_condition": v.trace_condition,
                    "block_condition": v.block_condition,
                    "filter_generator": gen,
                }),
                EXIT_OK,
            ))
        }
        Command::Rigidity { input: Some(input), .. } => {
            let v = load_fuchsian(ctx, input)?;
            let mut res = fuchsian_result(&v);
            res["kind"] = json!("fuchsian");
            Ok((res, EXIT_OK))
        }
        Command::Rigidity {
            n: Some(n),
            r: Some(r),
            orbit: Some(orbit),
            ..
        } => {
            ctx.digest_part("args", format!("n={n} r={r}").as_bytes());
            let o = load_orbit(ctx, orbit)?;
            let rigid = is_rigid_coxeter_gl(*n, *r, &o)?;
            let h1 = match h1_dimension(*n, *r, &o) {
                Ok(h) => Some(h),
                Err(e) => {
                    ctx.notes.push(format!("h1 not evaluated: {e}"));
                    None
                }
            };
            Ok((json!({"kind": "coxeter", "rigid": rigid, "h1": h1}), EXIT_OK))
        }
        Command::Rigidity { .. } => Err(Failure::input(
            "rigidity needs either --input or all of --n, --r, --orbit",
            None,
        )),
        Command::RigidityTable { family, rank, r } => {
            ctx.digest_part("args", format!("type={family} rank={rank} r={r}").as_bytes());
            let q = SimpleTypeQuery::new(*family, *rank, *r)?;
            let conj = ctx.has(Flag::TableConjunction);
            let rigid = rigid_table_simple_type(&q, conj);
            let other = rigid_table_simple_type(&q, !conj);
            if rigid != other {
                ctx.notes.push(format!(
                    "answer depends on the row reading: disjunction {}, conjunction {}",
                    if conj { other } else { rigid },
                    if conj { rigid } else { other }
                ));
            }
            Ok((
                json!({"rigid": rigid, "coxeter_number": q.coxeter_number()}),
                EXIT_OK,
            ))
        }
        Command::Slope { matrix } => {
            let m = load_matrix(ctx, matrix)?;
            let cert = certify_slope(&m)?;
            if let SlopeCertificate::UpperBoundOnly { .. } = cert {
                ctx.notes.push(
                    "all leading strata are nilpotent in this trivialization; a gauge change may lower the slope"
                        .into(),
                );
            }
            Ok(slope_result(&cert))
        }
        Command::NormalizeRegsing { matrix, order } => {
            ctx.digest_part("args", format!("order={order}").as_bytes());
            let m = load_matrix(ctx, matrix)?;
            let g = regsing_normalize(&m, *order)?;
            Ok((json!({"gauge": g}), EXIT_OK))
        }
        Command::CountRank2 { input } => {
            let inp: Rank2Input = ctx.parse("input", input)?;
            check_schema(&inp.schema)?;
            let count = count_rank2_moduli(&inp.formal_type, &inp.orbit)?;
            Ok((json!({"count": count}), EXIT_OK))
        }
        Command::QuiverExport { input, output } => {
            let bytes = ctx.read("input", input)?;
            let probe: Value = serde_json::from_slice(&bytes)
                .map_err(|e| Failure::input(format!("{}: {e}", input.display()), None))?;
            let dot = if probe.get("types").is_some() {
                let inp: UnramInput = from_bytes(&bytes, input)?;
                check_schema(&inp.schema)?;
                unramified_decide(&inp.types, &ctx.unram_options())?.data.to_dot()
            } else {
                let inp: FuchsianInput = from_bytes(&bytes, input)?;
                check_schema(&inp.schema)?;
                crate::fuchsian::build_cb_data(&inp.orbits, inp.sequences.as_deref())?.to_dot()
            };
            if let Some(out) = output {
                ctx.write(out, &dot)?;
            }
            Ok((json!({"dot": dot}), EXIT_OK))
        }
    }
}

fn from_bytes<T: DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let p = e.path().to_string();
        Failure::input(format!("{}: {}", path.display(), e.inner()), Some(p))
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::FuchsianDs { .. } => "fuchsian-ds",
        Command::UnramifiedDs { .. } => "unramified-ds",
        Command::CoxeterDs { .. } => "coxeter-ds",
        Command::Rigidity { .. } => "rigidity",
        Command::RigidityTable { .. } => "rigidity-table",
        Command::Slope { .. } => "slope",
        Command::NormalizeRegsing { .. } => "normalize-regsing",
        Command::CountRank2 { .. } => "count-rank2",
        Command::QuiverExport { .. } => "quiver-export",
    }
}

/// Output of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `argv` (program name first) without touching the
/// process: the caller prints and exits.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome {
                code,
                stdout: if code == EXIT_OK { e.to_string() } else { String::new() },
                stderr: if code == EXIT_OK { String::new() } else { e.to_string() },
            };
        }
    };
    let name = command_name(&cli.command);
    let mut ctx = Context {
        hasher: Sha256::new(),
        notes: Vec::new(),
        flags: cli.flags.clone(),
        budget: cli.budget,
    };
    ctx.digest_part("command", name.as_bytes());
    let mut flags: Vec<String> = cli.flags.iter().map(|f| format!("{f:?}")).collect();
    flags.sort();
    ctx.digest_part("flags", flags.join(",").as_bytes());
    ctx.digest_part("budget", cli.budget.to_string().as_bytes());

    let (code, result) = match execute(&mut ctx, &cli.command) {
        Ok((result, code)) => (code, result),
        Err(f) => (f.code, json!({"error": f.body})),
    };
    let verdict = Verdict {
        schema: SCHEMA.into(),
        command: name.into(),
        inputs_digest: hex::encode(ctx.hasher.finalize()),
        result,
        notes: ctx.notes,
    };
    let stderr = if code == EXIT_INPUT {
        verdict.result["error"]["message"].as_str().unwrap_or("").to_string()
    } else {
        String::new()
    };
    Outcome {
        code,
        stdout: serde_json::to_string_pretty(&verdict).expect("serializable") + "\n",
        stderr,
    }
}
