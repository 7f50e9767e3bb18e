//! The `cfk` command line: invariant reports for torus knots and staircases,
//! checks on the Whitehead double complexes, classification of `D(K)` versus
//! `D²(K)`, batch tables and SVG lattice drawings.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cfk::doubles::{
    acyclicity_label, build_double_complex, classify_iterates, delta_double_double_fast, delta_double_double_full,
    hfk_hat_double, verify_splitting, Classification, SplittingReport,
};
use cfk::filtered::{from_staircase, tensor, validate};
use cfk::homology::d1_general;
use cfk::laurent::LaurentPoly;
use cfk::staircase::{d1_closed_form, delta_whitehead, tau, torus_staircase, vertices, Vertex};
use cfk::{FilteredComplex, Staircase};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub mod svg;
pub mod table;

pub const SCHEMA: &str = "cfk-1";

#[derive(Debug, Parser)]
#[command(
    name = "cfk",
    version,
    about = "Knot Floer invariants of staircase knots and their Whitehead doubles"
)]
struct Cli {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants of the torus knot T(p,q).
    Torus { p: i64, q: i64 },
    /// Invariants of the L-space knot with staircase v1,v2,...
    Staircase { steps: String },
    /// The complex of D(T(2,2m+1)).
    Double {
        m: i64,
        /// Check the trefoil ⊕ acyclic splitting.
        #[arg(long)]
        verify: bool,
        /// Compute δ(D²(T(2,2m+1))) by the full and the trefoil-only routes.
        #[arg(long)]
        delta2: bool,
    },
    /// d(S³₁(K)) of a complex stored as JSON.
    D1 {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Decide whether δ separates D(K) from its iterates.
    Classify {
        #[command(subcommand)]
        knot: KnotArg,
    },
    /// Write an SVG lattice drawing.
    Diagram {
        #[command(subcommand)]
        source: DiagramSource,
        /// Draw the tensor square of the complex.
        #[arg(long, global = true)]
        square: bool,
        /// Output path.
        #[arg(long, global = true)]
        svg: Option<PathBuf>,
    },
    /// One row of invariants per knot in a family.
    Table {
        /// `torus:N` (coprime 2 ≤ p < q ≤ N) or `t2:a..b` (T(2,2m+1), a ≤ m ≤ b).
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum KnotArg {
    Torus { p: i64, q: i64 },
    Staircase { steps: String },
}

#[derive(Debug, Subcommand)]
enum DiagramSource {
    Torus { p: i64, q: i64 },
    Staircase { steps: String },
    Double { m: i64 },
    Complex { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A failed invocation: bad input (exit 2) or a failed computation (exit 1).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => f.write_str(m),
        }
    }
}

impl From<cfk::Error> for Failure {
    fn from(e: cfk::Error) -> Self {
        use cfk::Error::*;
        match e {
            InvalidTorusParameters { .. } | InvalidStaircase(_) | InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let text = e.render().to_string();
            if to_stdout {
                let _ = write!(out, "{text}");
                return 0;
            }
            let _ = write!(err, "{text}");
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Outcome<String> {
    let json = cli.json;
    match cli.command {
        Command::Torus { p, q } => {
            let s = torus_staircase(p, q)?;
            emit(json, &invariant_report(format!("T({p},{q})"), &s))
        }
        Command::Staircase { steps } => {
            let s = Staircase::parse(&steps)?;
            emit(json, &invariant_report(s.to_string(), &s))
        }
        Command::Double { m, verify, delta2 } => emit(json, &double_report(positive(m)?, verify, delta2)?),
        Command::D1 { complex } => {
            let c = read_complex(&complex)?;
            let d1 = d1_general(&c)?;
            emit(
                json,
                &D1Report {
                    schema: SCHEMA,
                    complex: complex.display().to_string(),
                    generators: c.len(),
                    arrows: c.arrow_count(),
                    d1,
                },
            )
        }
        Command::Classify { knot } => {
            let (name, s) = match knot {
                KnotArg::Torus { p, q } => (format!("T({p},{q})"), torus_staircase(p, q)?),
                KnotArg::Staircase { steps } => {
                    let s = Staircase::parse(&steps)?;
                    (s.to_string(), s)
                }
            };
            let report = ClassifyReport {
                schema: SCHEMA,
                knot: name,
                classification: classify_iterates(&s)?,
            };
            emit(json, &report)
        }
        Command::Diagram { source, square, svg } => {
            let path = svg.ok_or_else(|| Failure::Usage("diagram needs --svg <path>".into()))?;
            let (name, mut complex) = match source {
                DiagramSource::Torus { p, q } => (format!("T({p},{q})"), from_staircase(&torus_staircase(p, q)?)),
                DiagramSource::Staircase { steps } => {
                    let s = Staircase::parse(&steps)?;
                    (s.to_string(), from_staircase(&s))
                }
                DiagramSource::Double { m } => {
                    let m = positive(m)?;
                    (format!("D(T(2,{}))", 2 * m + 1), build_double_complex(m)?)
                }
                DiagramSource::Complex { path } => (path.display().to_string(), read_complex(&path)?),
            };
            let title = if square {
                complex = tensor(&complex, &complex);
                format!("{name} ⊗ {name}")
            } else {
                name
            };
            let (doc, stats) = svg::render(&complex, &title);
            std::fs::write(&path, doc)
                .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?;
            emit(
                json,
                &DiagramReport {
                    schema: SCHEMA,
                    knot: title,
                    svg: path.display().to_string(),
                    dots: stats.dots,
                    arrows: stats.arrows,
                },
            )
        }
        Command::Table { family, format } => {
            let family = table::Family::parse(&family)?;
            let rows = table::rows(&family)?;
            match format {
                Format::Csv => table::to_csv(&rows),
                Format::Json => to_json(&table::TableDocument {
                    schema: SCHEMA,
                    family: family.to_string(),
                    rows,
                }),
            }
        }
    }
}

fn positive(m: i64) -> Outcome<usize> {
    if m < 1 {
        return Err(Failure::Usage(format!("m must be at least 1, got {m}")));
    }
    Ok(m as usize)
}

fn read_complex(path: &Path) -> Outcome<FilteredComplex> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Compute(format!("cannot read {}: {e}", path.display())))?;
    let c: FilteredComplex = serde_json::from_str(&text)
        .map_err(|e| Failure::Compute(format!("{} is not a complex: {e}", path.display())))?;
    validate(&c).map_err(|v| Failure::Compute(format!("{}: {v}", path.display())))?;
    Ok(c)
}

/// Values that render both as JSON and as aligned `key value` text.
trait Report: Serialize {
    fn lines(&self) -> Vec<(String, String)>;
}

fn emit<R: Report>(json: bool, report: &R) -> Outcome<String> {
    if json {
        to_json(report)
    } else {
        Ok(aligned(&report.lines()))
    }
}

fn to_json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn aligned(lines: &[(String, String)]) -> String {
    let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    lines.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

#[derive(Debug, Serialize)]
pub struct InvariantReport {
    pub schema: &'static str,
    pub knot: String,
    pub alexander: String,
    pub alexander_terms: LaurentPoly,
    pub steps: Vec<u64>,
    pub vertices: Vec<Vertex>,
    pub tau: i64,
    pub d1: i64,
    pub delta_whitehead: i64,
}

fn invariant_report(knot: String, s: &Staircase) -> InvariantReport {
    let alexander = cfk::staircase::alexander_of_staircase(s);
    InvariantReport {
        schema: SCHEMA,
        knot,
        alexander: alexander.to_string(),
        alexander_terms: alexander,
        steps: s.steps().to_vec(),
        vertices: vertices(s),
        tau: tau(s),
        d1: d1_closed_form(s),
        delta_whitehead: delta_whitehead(s),
    }
}

impl Report for InvariantReport {
    fn lines(&self) -> Vec<(String, String)> {
        let verts: Vec<String> = self.vertices.iter().map(|v| format!("({},{})", v.i, v.j)).collect();
        let steps: Vec<String> = self.steps.iter().map(u64::to_string).collect();
        vec![
            kv("knot", &self.knot),
            kv("alexander", &self.alexander),
            kv("staircase", format!("St({})", steps.join(","))),
            kv("vertices", verts.join(" ")),
            kv("tau", self.tau),
            kv("d1", self.d1),
            kv("delta(D)", self.delta_whitehead),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct HfkEntry {
    pub alexander: i64,
    pub maslov: i64,
    pub rank: usize,
}

#[derive(Debug, Serialize)]
pub struct DeltaRoutes {
    pub value: i64,
    pub full: i64,
    pub fast: i64,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct DoubleReport {
    pub schema: &'static str,
    pub knot: String,
    pub m: usize,
    pub generators: usize,
    pub arrows: usize,
    pub hfk: Vec<HfkEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_double_double: Option<DeltaRoutes>,
}

fn double_report(m: usize, verify: bool, delta2: bool) -> Outcome<DoubleReport> {
    let c = build_double_complex(m)?;
    let hfk = hfk_hat_double(m)?
        .into_iter()
        .rev()
        .map(|((alexander, maslov), rank)| HfkEntry {
            alexander,
            maslov,
            rank,
        })
        .collect();
    let splitting = verify.then(|| verify_splitting(&c));
    let delta_double_double = if delta2 {
        let full = delta_double_double_full(m)?;
        let fast = delta_double_double_fast(m)?;
        Some(DeltaRoutes {
            value: full,
            full,
            fast,
            agree: full == fast,
        })
    } else {
        None
    };
    Ok(DoubleReport {
        schema: SCHEMA,
        knot: format!("D(T(2,{}))", 2 * m + 1),
        m,
        generators: c.len(),
        arrows: c.arrow_count(),
        hfk,
        splitting,
        delta_double_double,
    })
}

fn splitting_lines(s: &SplittingReport) -> Vec<(String, String)> {
    let sizes: Vec<String> = s.components.iter().map(usize::to_string).collect();
    vec![
        kv("trefoil summand", if s.trefoil_summand { "yes" } else { "no" }),
        kv("rest", acyclicity_label(&s.acyclic_rest)),
        kv("components", format!("{} [{}]", s.components.len(), sizes.join(" "))),
    ]
}

impl Report for DoubleReport {
    fn lines(&self) -> Vec<(String, String)> {
        let mut lines = vec![
            kv("knot", &self.knot),
            kv("generators", self.generators),
            kv("arrows", self.arrows),
        ];
        for j in [1, 0, -1] {
            let row: Vec<String> = self
                .hfk
                .iter()
                .filter(|e| e.alexander == j)
                .map(|e| format!("F^{}({})", e.rank, e.maslov))
                .collect();
            lines.push(kv(&format!("HFK j={j}"), row.join(" + ")));
        }
        if let Some(s) = &self.splitting {
            lines.extend(splitting_lines(s));
        }
        if let Some(d) = &self.delta_double_double {
            lines.push(kv("delta(D^2)", d.value));
            lines.push(kv(
                "routes",
                format!("full {} fast {} agree {}", d.full, d.fast, d.agree),
            ));
        }
        lines
    }
}

#[derive(Debug, Serialize)]
pub struct D1Report {
    pub schema: &'static str,
    pub complex: String,
    pub generators: usize,
    pub arrows: usize,
    pub d1: i64,
}

impl Report for D1Report {
    fn lines(&self) -> Vec<(String, String)> {
        vec![
            kv("complex", &self.complex),
            kv("generators", self.generators),
            kv("arrows", self.arrows),
            kv("d1", self.d1),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub knot: String,
    #[serde(flatten)]
    pub classification: Classification,
}

impl Report for ClassifyReport {
    fn lines(&self) -> Vec<(String, String)> {
        let c = &self.classification;
        let psi: Vec<String> = c.psi.iter().map(|r| format!("({},{})", r[0], r[1])).collect();
        let mut lines = vec![
            kv("knot", &self.knot),
            kv("tau", c.tau),
            kv("delta(D)", c.delta_whitehead),
            kv("verdict", c.verdict),
            kv("psi", psi.join(" ")),
        ];
        if let Some(d) = c.delta_double_double {
            lines.push(kv("delta(D^2)", d));
        }
        lines.push(kv("Z^2 summand", if c.summand { "certified" } else { "not certified" }));
        if let Some(s) = &c.splitting {
            lines.extend(splitting_lines(s));
        }
        lines.extend(c.notes.iter().map(|n| kv("note", n)));
        lines
    }
}

#[derive(Debug, Serialize)]
pub struct DiagramReport {
    pub schema: &'static str,
    pub knot: String,
    pub svg: String,
    pub dots: usize,
    pub arrows: usize,
}

impl Report for DiagramReport {
    fn lines(&self) -> Vec<(String, String)> {
        vec![
            kv("knot", &self.knot),
            kv("svg", &self.svg),
            kv("dots", self.dots),
            kv("arrows", self.arrows),
        ]
    }
}
