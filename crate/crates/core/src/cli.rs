//! The `morita` command line.
//!
//! Exit codes: 0 when every check passes (and a requested certificate is
//! granted), 1 on a verification failure or refusal, 2 on bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::context::{ClassicalContext, GeneralisedContext, MatrixRing};
use crate::error::{Error, Result};
use crate::gallery::{self, GalleryOptions};
use crate::spec::{canonical_json, Named, SpecBuilder, Workspace};
use crate::surgery::{certify_equivalence, column_excision, compose, row_excision, Surgery, SurgeryResult};
use crate::verify::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "morita", version, about = "Verify Morita contexts and replace corners of generalised matrix rings")]
pub struct Cli {
    /// Also write the JSON report to PATH ("-" for stdout instead of text).
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SurgeryArgs {
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Generalised context (or algebra) to operate on.
    pub context: String,
    /// Classical context `(R, S; N, L; ζ, θ)` whose `R` is the corner.
    pub classical: String,
    /// Corner index, 1-based.
    #[arg(long)]
    pub t: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the axioms of a named algebra, bimodule or context.
    Verify {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        name: String,
    },
    /// Assemble and verify the generalised matrix ring of a context.
    MatrixRing {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        name: String,
        /// Write the assembled ring as a spec file.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Compose a classical context into corner t of a generalised context.
    Compose {
        #[command(flatten)]
        args: SurgeryArgs,
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Column and row excision at corner t.
    Excise {
        #[command(flatten)]
        args: SurgeryArgs,
    },
    /// Both ligations at corner t, with their ranks.
    Ligate {
        #[command(flatten)]
        args: SurgeryArgs,
    },
    /// The full corner replacement at t.
    CornerReplace {
        #[command(flatten)]
        args: SurgeryArgs,
        /// Also decide the equivalence certificate.
        #[arg(long)]
        certify: bool,
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
    /// Corner replacement followed by the equivalence certificate.
    Certify {
        #[command(flatten)]
        args: SurgeryArgs,
    },
    /// Run a worked instance and print expected against actual values.
    Gallery {
        /// triangular, prospecies, clannish or enough-idempotents
        name: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        split: Option<usize>,
        /// Power of the Galois generator used as θ (clannish only).
        #[arg(long)]
        theta: Option<u32>,
        /// Write the instance's inputs as a spec file.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
    },
}

/// What a command produced: a JSON document, human text, and the exit code.
struct Outcome {
    doc: Value,
    text: String,
    code: i32,
}

fn read_workspace(path: &Path) -> Result<Workspace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))?;
    Workspace::load(&text)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::MalformedInput(format!("cannot write {}: {e}", path.display())))
}

fn report_text(out: &mut String, title: &str, r: &Report) {
    let _ = writeln!(out, "{title}: {}", if r.passes() { "PASS" } else { "FAIL" });
    let width = r.sections.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (name, s) in &r.sections {
        let pad = " ".repeat(width - name.chars().count());
        let status = if s.passes() { "ok".to_string() } else { format!("{} FAILED", s.failures) };
        let _ = writeln!(out, "  {name}{pad}  {status}  ({} checked)", s.checked);
        for w in s.witnesses.iter().take(5) {
            let _ = writeln!(out, "      witness {w}");
        }
    }
    for (name, v) in &r.flags {
        let _ = writeln!(out, "  [{name}] {v}");
    }
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn dims_text(d: &[Vec<usize>]) -> String {
    let rows: Vec<String> =
        d.iter().map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join(" | "))
}

fn cmd_verify(spec: &Path, name: &str) -> Result<Outcome> {
    let w = read_workspace(spec)?;
    let obj = w.get(name)?;
    let report = match &obj {
        Named::Algebra(a) => a.verify(),
        Named::Bimodule(b) => b.verify(),
        Named::Context(c) => c.verify(),
    };
    let mut text = String::new();
    report_text(&mut text, &format!("verify {name} ({})", obj.kind()), &report);
    let doc = json!({ "object": name, "kind": obj.kind(), "pass": report.passes(), "report": report.to_json() });
    Ok(Outcome { doc, text, code: pass_code(report.passes()) })
}

fn cmd_matrix_ring(spec: &Path, name: &str, export: Option<&Path>) -> Result<Outcome> {
    let w = read_workspace(spec)?;
    let g = w.generalised(name)?;
    let ring = MatrixRing::assemble(&g);
    let report = ring.ring().verify();
    let mut text = String::new();
    let _ = writeln!(text, "block dims {}  total {}", dims_text(&g.dims()), ring.dim());
    report_text(&mut text, &format!("matrix ring of {name}"), &report);
    if let Some(p) = export {
        let mut b = SpecBuilder::new(w.field);
        b.add_algebra(&format!("{name}.ring"), ring.ring());
        write_file(p, &b.finish().to_json_string())?;
    }
    let doc = json!({
        "context": name,
        "dims": g.dims(),
        "dim": ring.dim(),
        "pass": report.passes(),
        "report": report.to_json(),
    });
    Ok(Outcome { doc, text, code: pass_code(report.passes()) })
}

struct Loaded {
    w: Workspace,
    g: GeneralisedContext,
    c: ClassicalContext,
    t: usize,
}

fn algebra_label(w: &Workspace, a: &crate::algebra::Algebra) -> String {
    match w.algebra_name(a) {
        Some(n) => format!("'{n}'"),
        None => format!("an unnamed algebra of dim {}", a.dim()),
    }
}

fn load_surgery(a: &SurgeryArgs) -> Result<Loaded> {
    let w = read_workspace(&a.spec)?;
    let g = w.generalised(&a.context)?;
    let c = w.classical(&a.classical)?;
    if a.t == 0 || a.t > g.n() {
        return Err(Error::MalformedInput(format!("--t {} is out of range 1..={}", a.t, g.n())));
    }
    let t = a.t - 1;
    if !g.algebra(t).same_ring(c.r()) {
        return Err(Error::CornerMismatch(format!(
            "corner {} of '{}' is {} but R of '{}' is {}",
            a.t,
            a.context,
            algebra_label(&w, g.algebra(t)),
            a.classical,
            algebra_label(&w, c.r())
        )));
    }
    Ok(Loaded { w, g, c, t })
}

fn echo(a: &SurgeryArgs) -> Value {
    json!({ "context": a.context, "classical": a.classical, "t": a.t })
}

fn cmd_compose(a: &SurgeryArgs, export: Option<&Path>) -> Result<Outcome> {
    let l = load_surgery(a)?;
    let h = compose(&l.c, &l.g, l.t)?;
    let report = h.verify();
    let mut text = String::new();
    let _ = writeln!(text, "dims {} -> {}", dims_text(&l.g.dims()), dims_text(&h.dims()));
    report_text(&mut text, "composed context", &report);
    let mut b = SpecBuilder::new(l.w.field);
    let name = format!("{}.composed", a.context);
    b.add_context(&name, &crate::context::ContextObject::Generalised(h.clone()));
    let spec = b.finish();
    if let Some(p) = export {
        write_file(p, &spec.to_json_string())?;
    }
    let doc = json!({
        "input": echo(a),
        "dims": { "input": l.g.dims(), "composed": h.dims() },
        "pass": report.passes(),
        "report": report.to_json(),
        "composed_spec": serde_json::to_value(&spec).expect("spec serializes"),
    });
    Ok(Outcome { doc, text, code: pass_code(report.passes()) })
}

fn cmd_excise(a: &SurgeryArgs) -> Result<Outcome> {
    let l = load_surgery(a)?;
    let h = compose(&l.c, &l.g, l.t)?;
    let col = column_excision(&l.g, &l.c, l.t)?;
    let row = row_excision(&l.g, &l.c, l.t)?;
    let rc = col.matrix.verify(&l.g, &h)?;
    let rr = row.matrix.verify(&h, &l.g)?;
    let mut text = String::new();
    let _ = writeln!(text, "column excision dims {}", dims_text(&col.matrix.dims()));
    report_text(&mut text, "column excision", &rc);
    let _ = writeln!(text, "row excision dims {}", dims_text(&row.matrix.dims()));
    report_text(&mut text, "row excision", &rr);
    let pass = rc.passes() && rr.passes();
    let doc = json!({
        "input": echo(a),
        "column": { "dims": col.matrix.dims(), "report": rc.to_json() },
        "row": { "dims": row.matrix.dims(), "report": rr.to_json() },
        "pass": pass,
    });
    Ok(Outcome { doc, text, code: pass_code(pass) })
}

fn ligation_json(r: &SurgeryResult) -> Value {
    let one = |l: &crate::surgery::Ligation| {
        json!({
            "tensor_dim": l.tensor.dim(),
            "rank": l.rank(),
            "target_dim": l.target_dim(),
            "surjective": l.is_surjective(),
        })
    };
    json!({ "alpha": one(&r.alpha), "alpha_prime": one(&r.alpha_prime) })
}

fn ligation_text(out: &mut String, r: &SurgeryResult) {
    for (name, l) in [("|α| : |N|⊗|L| → ring", &r.alpha), ("|α'|: |L|⊗|N| → composed ring", &r.alpha_prime)] {
        let _ = writeln!(
            out,
            "{name}  tensor dim {}, rank {} of {}{}",
            l.tensor.dim(),
            l.rank(),
            l.target_dim(),
            if l.is_surjective() { ", surjective" } else { "" }
        );
    }
}

fn run_surgery(l: &Loaded) -> Result<SurgeryResult> {
    Surgery::new(&l.g, &l.c, l.t)?.run()
}

fn cmd_ligate(a: &SurgeryArgs) -> Result<Outcome> {
    let l = load_surgery(a)?;
    let r = run_surgery(&l)?;
    let mut text = String::new();
    ligation_text(&mut text, &r);
    let doc = json!({ "input": echo(a), "ligations": ligation_json(&r), "pass": r.report.passes() });
    Ok(Outcome { doc, text, code: pass_code(r.report.passes()) })
}

fn cmd_corner_replace(a: &SurgeryArgs, certify: bool, export: Option<&Path>) -> Result<Outcome> {
    let l = load_surgery(a)?;
    let r = run_surgery(&l)?;
    let mut text = String::new();
    let _ = writeln!(text, "dims {} -> {}", dims_text(&r.input.dims()), dims_text(&r.composed.dims()));
    let _ = writeln!(text, "matrix rings: dim {} -> dim {}", r.ring.dim(), r.composed_ring.dim());
    let _ = writeln!(text, "column excision dims {}", dims_text(&r.column.matrix.dims()));
    let _ = writeln!(text, "row excision dims {}", dims_text(&r.row.matrix.dims()));
    ligation_text(&mut text, &r);
    report_text(&mut text, "corner replacement", &r.report);
    let mut b = SpecBuilder::new(l.w.field);
    b.add_context(&format!("{}.composed", a.context), &crate::context::ContextObject::Generalised(r.composed.clone()));
    let spec = b.finish();
    if let Some(p) = export {
        write_file(p, &spec.to_json_string())?;
    }
    let mut doc = json!({
        "input": echo(a),
        "dims": {
            "input": r.input.dims(),
            "composed": r.composed.dims(),
            "column_excision": r.column.matrix.dims(),
            "row_excision": r.row.matrix.dims(),
        },
        "ring_dims": [r.ring.dim(), r.composed_ring.dim()],
        "ligations": ligation_json(&r),
        "report": r.report.to_json(),
        "composed_spec": serde_json::to_value(&spec).expect("spec serializes"),
    });
    let mut pass = r.report.passes();
    if certify {
        match certify_equivalence(&r) {
            Ok(c) => {
                let _ = writeln!(text, "certificate granted: {}", c.conclusion);
                doc["certificate"] = c.to_json();
            }
            Err(x) => {
                let _ = writeln!(text, "{x}");
                doc["certificate"] = x.to_json();
                pass = false;
            }
        }
    }
    doc["pass"] = Value::Bool(pass);
    Ok(Outcome { doc, text, code: pass_code(pass) })
}

fn gallery_hint(name: &str, e: &Error) -> String {
    match e {
        Error::BadPrime(_) => "the clannish instance needs a prime p ≡ 1 (mod 4), for example --p 5 or --p 13".into(),
        Error::IncompletePartition => "enough-idempotents needs 1 <= --split < --k".into(),
        Error::MalformedInput(m) if m.contains("prime") => format!("{name} needs a prime --p"),
        _ => format!("instances: {}", gallery::NAMES.join(", ")),
    }
}

fn cmd_gallery(name: &str, opts: &GalleryOptions, export: Option<&Path>) -> Result<Outcome> {
    let inst = gallery::run(name, opts)?;
    let mut text = String::new();
    let params: Vec<String> = inst.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(text, "gallery {} ({})", inst.name, params.join(", "));
    text.push_str(&inst.table());
    for s in &inst.steps {
        match &s.certificate {
            Ok(c) => {
                let _ = writeln!(text, "{}: certificate granted, {}", s.name, c.conclusion);
            }
            Err(x) => {
                let _ = writeln!(text, "{}: {x}", s.name);
            }
        }
    }
    let _ = writeln!(text, "{}", if inst.passes() { "all expectations met" } else { "MISMATCH" });
    if let Some(p) = export {
        let f = inst.inputs.first().map(|(_, c)| c.field()).expect("instances have inputs");
        let mut b = SpecBuilder::new(f);
        for (n, c) in &inst.inputs {
            b.add_context(n, c);
        }
        write_file(p, &b.finish().to_json_string())?;
    }
    Ok(Outcome { doc: inst.to_json(), text, code: pass_code(inst.passes()) })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { spec, name } => cmd_verify(spec, name),
        Command::MatrixRing { spec, name, export } => cmd_matrix_ring(spec, name, export.as_deref()),
        Command::Compose { args, export } => cmd_compose(args, export.as_deref()),
        Command::Excise { args } => cmd_excise(args),
        Command::Ligate { args } => cmd_ligate(args),
        Command::CornerReplace { args, certify, export } => cmd_corner_replace(args, *certify, export.as_deref()),
        Command::Certify { args } => cmd_corner_replace(args, true, None),
        Command::Gallery { name, p, k, split, theta, export } => {
            let opts = GalleryOptions { p: *p, k: *k, split: *split, theta: *theta };
            cmd_gallery(name, &opts, export.as_deref())
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::MatrixRing { .. } => "matrix-ring",
        Command::Compose { .. } => "compose",
        Command::Excise { .. } => "excise",
        Command::Ligate { .. } => "ligate",
        Command::CornerReplace { .. } => "corner-replace",
        Command::Certify { .. } => "certify",
        Command::Gallery { .. } => "gallery",
    }
}

/// Caps rayon's pool at `MORITA_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("MORITA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let name = command_name(&cli.command);
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_FAIL };
            let _ = writeln!(err, "error: {e}");
            if let Command::Gallery { name, .. } = &cli.command {
                let _ = writeln!(err, "hint: {}", gallery_hint(name, &e));
            }
            Outcome { doc: json!({ "error": e.to_string(), "pass": false }), text: String::new(), code }
        }
    };
    let mut doc = outcome.doc;
    doc["command"] = Value::String(name.into());
    let rendered = canonical_json(&doc);
    match cli.json_out.as_deref() {
        Some(p) if p == Path::new("-") => {
            let _ = out.write_all(rendered.as_bytes());
        }
        Some(p) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if let Err(e) = write_file(p, &rendered) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = out.write_all(outcome.text.as_bytes());
        }
    }
    outcome.code
}
