//! `praag`: command-line front end for LOG checks, fans, link assembly,
//! homology and the Dehn-function diagram harness.
//!
//! Exit codes: 0 on success, 1 when a validation fails (a JSON witness goes
//! to stderr), 2 on usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use praag_core::complex::{flag_complex, SimpleGraph};
use praag_core::dehn::{self, DehnLab, Family, GrowthModel};
use praag_core::fans::{self, preset_exp, Direction, FanEngine};
use praag_core::homology::{homology, HomologyProfile};
use praag_core::log::{self as logs, LogPresentation};
use praag_core::praag::{self, Mark, Marking};
use praag_core::word::Word;
use praag_core::Error;

const VERSION_LINE: &str = concat!("# praag ", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(name = "praag", version, about = "Perturbed RAAG toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LOG presentation checks and searches.
    #[command(subcommand)]
    Log(LogCommand),
    /// Build one fan and print its rim, edge rim or size.
    Fan(FanArgs),
    /// Descending rim table against the closed form.
    Rims(RimsArgs),
    /// Assemble the perturbed link of a marked graph.
    Build(BuildArgs),
    /// Homology of the flag complex or of a perturbed Morse link.
    Homology(HomologyArgs),
    /// Print the PRAAG presentation.
    Present(GraphArgs),
    /// Diagram statistics for the Dehn-function experiments.
    Dehn(DehnArgs),
}

#[derive(Subcommand)]
enum LogCommand {
    /// Girth, curvature verdict and sublink shapes.
    Check(LogSource),
    /// Exhaustive search for a hyperbolic LOG on N vertices.
    SearchExp {
        #[arg(long)]
        vertices: usize,
        /// Search for the girth-4 substitute with exponential fans instead.
        #[arg(long)]
        substitute: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LogSource {
    /// `poly:<d>` or `exp`.
    #[arg(long)]
    preset: Option<String>,
    /// LOG JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct FanArgs {
    #[arg(long)]
    preset: String,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    #[arg(long, value_enum, default_value = "stats")]
    emit: FanEmit,
    #[arg(long)]
    ascending: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FanEmit {
    Rim,
    Erim,
    Stats,
}

#[derive(Args)]
struct RimsArgs {
    #[arg(long)]
    preset: String,
    #[arg(long)]
    max_n: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    graph: Option<PathBuf>,
    /// Marking JSON file; all edges are marked 0 when absent.
    #[arg(long, requires = "graph")]
    marking: Option<PathBuf>,
    /// `delta` (the orthoplex) or `sigma` (its double), marked with `--d`.
    #[arg(long, value_parser = ["delta", "sigma"])]
    preset: Option<String>,
    #[arg(long, requires = "preset")]
    d: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "link")]
    report: BuildReport,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildReport {
    Link,
    Morse,
    Presentation,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "flag")]
    which: Which,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Desc,
    Asc,
    Flag,
}

#[derive(Args)]
struct DehnArgs {
    /// Mark of the interior edge: an integer above 1 or `inf`.
    #[arg(long)]
    d: String,
    #[arg(long)]
    max_n: u64,
    #[arg(long, value_parser = ["F'", "F", "P", "Q", "R", "T"])]
    diagram: String,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_parser = ["power", "exp"])]
    fit: Option<String>,
}

enum Failure {
    Usage(String),
    Invalid(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(witness(&e))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn witness(e: &Error) -> Value {
    let mut w = json!({ "error": e.kind(), "message": e.to_string() });
    match e {
        Error::Inadmissible { first, second, shared } => {
            w["first"] = json!(first);
            w["second"] = json!(second);
            w["shared"] = json!(shared);
        }
        Error::NotFull { context, witness } | Error::NotFlag { context, witness } => {
            w["context"] = json!(context);
            w["witness"] = json!(witness);
        }
        Error::QuadrupleNotIndependent(edges) => w["witness"] = json!(edges),
        _ => {}
    }
    w
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(w)) => {
            eprintln!("{w}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Log(LogCommand::Check(src)) => log_check(src, out),
        Command::Log(LogCommand::SearchExp { vertices, substitute }) => search_exp(vertices, substitute, out),
        Command::Fan(a) => fan(a, out),
        Command::Rims(a) => rims(a, out),
        Command::Build(a) => build(a, out),
        Command::Homology(a) => homology_cmd(a, out),
        Command::Present(a) => {
            let m = load_marking(&a)?;
            let p = praag::emit_praag_presentation(&m)?;
            writeln!(out, "{VERSION_LINE}")?;
            write!(out, "{}", p.to_text())?;
            Ok(())
        }
        Command::Dehn(a) => dehn_cmd(a, out),
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> Outcome {
    writeln!(out, "{VERSION_LINE}")?;
    writeln!(out, "{}", serde_json::to_string_pretty(v).map_err(Error::from)?)?;
    Ok(())
}

fn parse_mark(s: &str) -> Result<Mark, Failure> {
    let d: Mark = s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if matches!(d, Mark::Finite(k) if k <= 1) {
        return Err(Failure::Usage(format!("d must exceed 1 or be `inf`, got {d}")));
    }
    Ok(d)
}

enum Preset {
    Poly(usize),
    Exp,
}

fn parse_preset(s: &str) -> Result<Preset, Failure> {
    if s == "exp" {
        return Ok(Preset::Exp);
    }
    s.strip_prefix("poly:")
        .and_then(|d| d.parse().ok())
        .filter(|&d| d >= 1)
        .map(Preset::Poly)
        .ok_or_else(|| Failure::Usage(format!("preset must be `poly:<d>` with d ≥ 1 or `exp`, got `{s}`")))
}

fn preset_log(p: &Preset) -> Result<LogPresentation, Failure> {
    Ok(match p {
        Preset::Poly(d) => logs::preset_poly(*d)?,
        Preset::Exp => preset_exp()?.log,
    })
}

fn log_check(src: LogSource, out: &mut dyn Write) -> Outcome {
    let (log, exp) = match (&src.preset, &src.file) {
        (Some(p), _) => {
            let p = parse_preset(p)?;
            (preset_log(&p)?, matches!(p, Preset::Exp))
        }
        (None, Some(f)) => (LogPresentation::from_json(&read(f)?)?, false),
        (None, None) => return Err(Failure::Usage("one of --preset or --file is required".into())),
    };
    let link = log.link();
    let girth = link.girth();
    let verdict = link.classify_curvature();
    let (desc_tree, asc_tree) = link.asc_desc_are_trees();
    let mut report = json!({
        "vertices": log.vertex_count(),
        "edges": log.edges().len(),
        "girth": girth,
        "verdict": verdict.as_str(),
        "asc_tree": asc_tree,
        "desc_tree": desc_tree,
    });
    if exp {
        let p = preset_exp()?;
        let v = logs::validate_exp_log(&p.log, &p.src, &p.dst)?;
        report["pair"] = json!([p.src, p.dst]);
        report["hyperbolic_checks"] = json!(v);
        report["endpoint_four_cycle"] = json!(logs::endpoint_four_cycle(&p.log));
    }
    print_json(out, &report)?;
    if verdict == logs::Curvature::Fail || !desc_tree || !asc_tree {
        return Err(Failure::Invalid(json!({
            "error": "log_check",
            "girth": girth,
            "verdict": verdict.as_str(),
            "asc_tree": asc_tree,
            "desc_tree": desc_tree,
        })));
    }
    Ok(())
}

fn search_exp(k: usize, substitute: bool, out: &mut dyn Write) -> Outcome {
    let found = if substitute {
        fans::search_exp_substitute(k)?.map(|p| {
            json!({ "src": p.src, "dst": p.dst, "anchor": p.anchor, "end": p.end, "log": p.log.to_file() })
        })
    } else {
        logs::search_exp_log(k)?.map(|c| json!({ "src": c.src, "dst": c.dst, "log": c.log.to_file() }))
    };
    print_json(out, &json!({ "vertices": k, "substitute": substitute, "found": found }))
}

fn fan(a: FanArgs, out: &mut dyn Write) -> Outcome {
    let log = preset_log(&parse_preset(&a.preset)?)?;
    let direction = if a.ascending { Direction::Ascending } else { Direction::Descending };
    let engine = FanEngine::new(&log, direction)?;
    let names = log.vertices();
    let u = Word::parse(&a.u, names)?;
    let v = Word::parse(&a.v, names)?;
    let f = engine.build(&u, &v)?;
    f.verify(&engine)?;
    writeln!(out, "{VERSION_LINE}")?;
    match a.emit {
        FanEmit::Rim => writeln!(out, "{}", f.vrim(&engine).render(names))?,
        FanEmit::Erim => {
            // one `x<id>` generator per LOG edge, in file order
            let edge_names: Vec<String> = (0..log.edges().len()).map(|i| format!("x{i}")).collect();
            writeln!(out, "{}", f.erim(&engine).render(&edge_names))?
        }
        FanEmit::Stats => {
            let layers: Vec<usize> = f.layers.iter().map(|l| l.cells.len()).collect();
            let v = json!({
                "direction": direction.as_str(),
                "height": f.height(),
                "area": f.area(),
                "rim_length": f.vrim(&engine).len(),
                "erim_length": f.erim(&engine).len(),
                "layers": layers,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(Error::from)?)?;
        }
    }
    Ok(())
}

fn rims(a: RimsArgs, out: &mut dyn Write) -> Outcome {
    let d = match parse_preset(&a.preset)? {
        Preset::Poly(d) => d,
        Preset::Exp => return Err(Failure::Usage("rim tables need a `poly:<d>` preset".into())),
    };
    let rows = fans::rim_table_poly(d, a.max_n)?;
    let mut buf = Vec::new();
    writeln!(buf, "{VERSION_LINE}")?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["i", "j", "n", "f_constructed", "f_closed_form", "match"]).map_err(Error::from)?;
        for r in &rows {
            w.write_record([
                r.i.to_string(),
                r.j.to_string(),
                r.n.to_string(),
                r.constructed.to_string(),
                r.closed_form.to_string(),
                r.matches().to_string(),
            ])
            .map_err(Error::from)?;
        }
        w.flush()?;
    }
    emit(out, a.out.as_deref(), &buf)?;
    if let Some(r) = rows.iter().find(|r| !r.matches()) {
        return Err(Failure::Invalid(json!({
            "error": "rim_mismatch",
            "i": r.i, "j": r.j, "n": r.n,
            "constructed": r.constructed.to_string(),
            "closed_form": r.closed_form.to_string(),
        })));
    }
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, bytes),
        None => out.write_all(bytes),
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| Failure::Invalid(json!({
        "error": "io",
        "path": p.display().to_string(),
        "message": e.to_string(),
    })))
}

fn load_marking(a: &GraphArgs) -> Result<Marking, Failure> {
    if let Some(preset) = &a.preset {
        let d = parse_mark(a.d.as_deref().unwrap_or("2"))?;
        return Ok(match preset.as_str() {
            "delta" => praag::orthoplex_marking(d)?,
            _ => praag::double_marking(d)?,
        });
    }
    let g = a.graph.as_ref().ok_or_else(|| Failure::Usage("--graph is required".into()))?;
    let graph = SimpleGraph::from_json(&read(g)?)?;
    let m = match &a.marking {
        Some(p) => Marking::from_json(graph, &read(p)?)?,
        None => Marking::zero(graph),
    };
    Ok(m)
}

fn build(a: BuildArgs, out: &mut dyn Write) -> Outcome {
    let m = load_marking(&a.graph)?;
    praag::check_admissible(&m)?;
    match a.report {
        BuildReport::Link => {
            let link = praag::assemble_perturbed_link(&m)?;
            let gluings: Vec<Value> = link
                .gluings
                .iter()
                .map(|g| json!({ "edge": g.edge, "d": g.d, "quadruple": g.quadruple, "y_link_vertices": g.y_link_vertices }))
                .collect();
            print_json(out, &json!({
                "f_vector": link.f_vector(),
                "flag": link.complex.flag_violation().is_none(),
                "gluings": gluings,
                "complex": link.complex.to_file(),
            }))
        }
        BuildReport::Morse => {
            let ml = praag::perturbed_morse_links(&m)?;
            let trees: Vec<Value> = ml
                .certificates
                .iter()
                .map(|c| json!({ "edge": c.edge, "side": c.side, "collapses": c.collapse.len() }))
                .collect();
            print_json(out, &json!({
                "descending": { "f_vector": ml.descending.f_vector(), "homology": profile_json(&ml.descending_homology) },
                "ascending": { "f_vector": ml.ascending.f_vector(), "homology": profile_json(&ml.ascending_homology) },
                "base": profile_json(&ml.base),
                "trees": trees,
            }))
        }
        BuildReport::Presentation => {
            let p = praag::emit_praag_presentation(&m)?;
            writeln!(out, "{VERSION_LINE}")?;
            write!(out, "{}", p.to_text())?;
            Ok(())
        }
    }
}

fn profile_json(h: &HomologyProfile) -> Value {
    let torsion: Vec<Vec<String>> = h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect();
    json!({
        "betti": h.betti,
        "reduced_betti": h.reduced_betti(),
        "torsion": torsion,
        "euler": h.euler,
    })
}

fn homology_cmd(a: HomologyArgs, out: &mut dyn Write) -> Outcome {
    let m = load_marking(&a.graph)?;
    let profile = match a.which {
        Which::Flag => {
            let k = flag_complex(m.graph());
            homology(&k, praag::MORSE_HOMOLOGY_DIM.max(k.f_vector().len()))?
        }
        Which::Desc | Which::Asc => {
            praag::check_admissible(&m)?;
            let ml = praag::perturbed_morse_links(&m)?;
            if matches!(a.which, Which::Desc) {
                ml.descending_homology
            } else {
                ml.ascending_homology
            }
        }
    };
    print_json(out, &profile_json(&profile))
}

fn dehn_cmd(a: DehnArgs, out: &mut dyn Write) -> Outcome {
    let d = parse_mark(&a.d)?;
    let family: Family = a.diagram.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if family == Family::Q && d == Mark::Infinite {
        return Err(Failure::Usage("Q_n is only built for finite d".into()));
    }
    if a.max_n == 0 {
        return Err(Failure::Usage("--max-n must be positive".into()));
    }
    let stats = if family == Family::T {
        (1..=a.max_n).map(dehn::tent_stats).collect::<Result<Vec<_>, _>>()?
    } else {
        DehnLab::new(d, a.max_n as usize)?.series(family, a.max_n)?
    };
    let fit = match a.fit.as_deref() {
        Some(m) => Some(dehn::fit_growth(&stats, m.parse::<GrowthModel>()?)?),
        None => None,
    };
    let mut buf = Vec::new();
    writeln!(buf, "{VERSION_LINE}")?;
    dehn::write_csv(&stats, &mut buf)?;
    if let Some(svg) = &a.svg {
        fs::write(svg, dehn::render_svg(&stats, fit.as_ref()))?;
    }
    match &a.out {
        Some(p) => {
            fs::write(p, &buf)?;
            if let Some(f) = &fit {
                print_json(out, &json!(f))?;
            }
        }
        None => {
            out.write_all(&buf)?;
            if let Some(f) = &fit {
                writeln!(out, "# fit {}", serde_json::to_string(f).map_err(Error::from)?)?;
            }
        }
    }
    Ok(())
}
