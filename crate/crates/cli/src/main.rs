use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lawrence_core::braid::{BraidRepresentation, BraidWord, CONVENTION};
use lawrence_core::completion::helix_class;
use lawrence_core::embeddings::{certify_injective, embedding_matrix, reducibility_witness, Direction};
use lawrence_core::homology::{genericity_check, homology_ranks_at, ComplexFile, SpecializationPoint};
use lawrence_core::linalg::Matrix;
use lawrence_core::pairing::{delta_pairing, geometric_pairing_matrix};
use lawrence_core::ring::{format as ring_format, CoefficientRing, GroupRingElement};
use lawrence_core::surface::{basis, Flavour, LocalSystemSpec, Side, SurfaceTriad};
use lawrence_core::verify::run_all;

#[derive(Parser)]
#[command(name = "lawrence", version, about = "Bases, pairings, embeddings and braid matrices for twisted configuration-space homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Genus, inner circles and outer intervals as `g,n,k`.
    #[arg(long, value_parser = parse_surface, default_value = "0,3,0")]
    surface: (u32, u32, u32),
    /// Number of configuration points.
    #[arg(long, default_value_t = 2)]
    m: u32,
}

impl SurfaceArgs {
    fn triad(&self) -> Result<SurfaceTriad> {
        let (g, n, k) = self.surface;
        Ok(SurfaceTriad::new(g, n, k, self.m)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List a basis indexed by compositions.
    Basis {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "in")]
        side: Side,
        #[arg(long, value_enum, default_value_t = FlavourArg::Relative)]
        flavour: FlavourArg,
    },
    /// The intersection pairing between the lf and relative bases.
    Pairing {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "in")]
        side: Side,
        /// Count intersection points instead of using the dual-basis identity.
        #[arg(long)]
        geometric: bool,
    },
    /// The diagonal embedding of relative into lf homology.
    Embed {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value = "in")]
        direction: Direction,
        /// Specialise the swap parameter, e.g. `u=-1`.
        #[arg(long)]
        specialize: Option<String>,
        /// Coefficient field for `--specialize`: Q, F<p> or C.
        #[arg(long, default_value = "Q")]
        coefficients: String,
    },
    /// Braid group matrices (m = 1 Burau, m = 2 Lawrence-Krammer-Bigelow).
    Rep {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Comma-separated generator indices; negative for inverses.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        /// Evaluate at `x=...,d=...`.
        #[arg(long, allow_hyphen_values = true)]
        specialize: Option<String>,
        #[arg(long, default_value = "Q")]
        coefficients: String,
        /// Print the dual representation instead.
        #[arg(long)]
        dual: bool,
    },
    /// Genericity of a specialisation of the standard local system.
    GenericCheck {
        #[arg(long, allow_hyphen_values = true)]
        theta_x: String,
        #[arg(long, allow_hyphen_values = true)]
        theta_d: Option<String>,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, value_parser = parse_surface, default_value = "0,3,0")]
        surface: (u32, u32, u32),
        #[arg(long, default_value = "C")]
        coefficients: String,
    },
    /// Ranks of a chain complex read from JSON, at a specialisation.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        /// Specialisation such as `x=2,d=-1`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value = "Q")]
        coefficients: String,
    },
    /// A helix class in the completed module.
    Helix {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Basis index of the composition carrying the helix.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        y: Vector,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        z: Vector,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlavourArg {
    Relative,
    Lf,
    LfImage,
}

impl From<FlavourArg> for Flavour {
    fn from(f: FlavourArg) -> Self {
        match f {
            FlavourArg::Relative => Flavour::Relative,
            FlavourArg::Lf => Flavour::LocallyFinite,
            FlavourArg::LfImage => Flavour::LfImage,
        }
    }
}

fn parse_surface(s: &str) -> std::result::Result<(u32, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [g, n, k] = parts.as_slice() else {
        return Err(format!("expected g,n,k, got {s:?}"));
    };
    let num = |v: &str| v.parse::<u32>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(g)?, num(n)?, num(k)?))
}

/// Lattice vector `a,b,...`; wrapped so clap treats it as one value.
#[derive(Clone)]
struct Vector(Vec<i64>);

fn parse_vector(s: &str) -> std::result::Result<Vector, String> {
    s.split(',').map(|v| v.trim().parse::<i64>().map_err(|e| format!("{v:?}: {e}"))).collect::<std::result::Result<_, _>>().map(Vector)
}

fn latex_element(a: &GroupRingElement) -> String {
    let text = ring_format(a);
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '*' => out.push(' '),
            '^' => {
                out.push_str("^{");
                while let Some(&d) = chars.peek() {
                    if d == '-' || d.is_ascii_digit() {
                        out.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push('}');
            }
            _ => out.push(c),
        }
    }
    out
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|v| json!(ring_format(v))).collect())).collect())
}

fn matrix_latex(m: &Matrix) -> String {
    let rows: Vec<String> =
        m.to_rows().iter().map(|r| r.iter().map(latex_element).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n"))
}

fn matrix_text(m: &Matrix) -> String {
    m.to_rows().iter().map(|r| r.iter().map(ring_format).collect::<Vec<_>>().join("\t")).collect::<Vec<_>>().join("\n")
}

/// What a subcommand produced: a JSON document, and optionally a matrix
/// for the LaTeX and text renderings.
struct Output {
    json: Value,
    matrix: Option<Matrix>,
    text: Option<String>,
    ok: bool,
}

impl Output {
    fn new(json: Value) -> Self { Self { json, matrix: None, text: None, ok: true } }
}

fn render(out: &Output, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut doc = json!({ "schema": 1 });
            if let (Value::Object(d), Value::Object(body)) = (&mut doc, &out.json) {
                d.extend(body.clone());
            }
            Ok(serde_json::to_string_pretty(&doc)?)
        }
        Format::Latex => match &out.matrix {
            Some(m) => Ok(matrix_latex(m)),
            None => bail!("LaTeX output is only available for matrix-valued commands"),
        },
        Format::Text => Ok(match (&out.text, &out.matrix) {
            (Some(t), _) => t.clone(),
            (None, Some(m)) => matrix_text(m),
            (None, None) => serde_json::to_string_pretty(&out.json)?,
        }),
    }
}

fn field(name: &str) -> Result<CoefficientRing> {
    let ring = CoefficientRing::from_name(name)?;
    if matches!(ring, CoefficientRing::Integers) {
        bail!("specialisation needs a field, not Z");
    }
    Ok(ring)
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Basis { surface, side, flavour } => {
            let t = surface.triad()?;
            let classes: Vec<String> = basis(&t, *side, (*flavour).into()).iter().map(ToString::to_string).collect();
            let mut out = Output::new(json!({ "triad": t, "dimension": t.dimension(), "classes": classes }));
            out.text = Some(classes.join("\n"));
            Ok(out)
        }
        Command::Pairing { surface, side, geometric } => {
            let t = surface.triad()?;
            let system = LocalSystemSpec::standard(t.points, CoefficientRing::Integers)?;
            let p = if *geometric {
                geometric_pairing_matrix(&t, *side, &system)?
            } else {
                delta_pairing(&t, *side, system.context())
            };
            let labels = |v: &[lawrence_core::surface::BasisClass]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            let mut out = Output::new(json!({
                "triad": t,
                "variables": system.context().names(),
                "rows": labels(&p.left),
                "columns": labels(&p.right),
                "matrix": matrix_json(&p.matrix),
            }));
            out.matrix = Some(p.matrix);
            Ok(out)
        }
        Command::Embed { surface, direction, specialize, coefficients } => {
            let t = surface.triad()?;
            let system = match specialize {
                None => LocalSystemSpec::standard(t.points, CoefficientRing::Integers)?,
                Some(s) => {
                    let ring = field(coefficients)?;
                    let (name, value) = s.split_once('=').ok_or_else(|| anyhow!("expected u=VALUE, got {s:?}"))?;
                    if name.trim() != "u" {
                        bail!("only u can be specialised for embed, got {name:?}");
                    }
                    let value = ring.parse(value.trim())?;
                    LocalSystemSpec::with_swap_value(t.points, ring, value)?
                }
            };
            let e = embedding_matrix(&t, *direction, &system)?;
            let targets: Vec<String> = (0..e.diagonal.len()).map(|i| e.target_class(i).to_string()).collect();
            let images: Vec<String> = (0..e.diagonal.len()).map(|i| e.image_class(i).to_string()).collect();
            let mut body = json!({
                "triad": t,
                "direction": direction,
                "variables": system.context().names(),
                "u": ring_format(system.u()),
                "images": images,
                "targets": targets,
                "diagonal": e.diagonal.iter().map(ring_format).collect::<Vec<_>>(),
            });
            if !matches!(system.context().coefficients(), CoefficientRing::ComplexApprox { .. }) {
                let cert = certify_injective(&e)?;
                body["injective"] = json!(cert.injective);
                body["vanishing"] = json!(cert.vanishing.iter().map(|v| v.composition.to_string()).collect::<Vec<_>>());
                if let Some(w) = reducibility_witness(&e)? {
                    body["reducibility_witness"] = json!({ "class": w.witness.to_string(), "entry": w.entry });
                }
            }
            let mut out = Output::new(body);
            out.text = Some(
                images.iter().zip(&e.diagonal).map(|(c, d)| format!("{c}\t{}", ring_format(d))).collect::<Vec<_>>().join("\n"),
            );
            out.matrix = Some(e.to_matrix());
            Ok(out)
        }
        Command::Rep { n, m, word, specialize, coefficients, dual } => {
            let rep = BraidRepresentation::new(*n, *m)?;
            let w = BraidWord::parse(*n, word)?;
            let r = if *dual { rep.evaluate_dual(&w)? } else { rep.evaluate(&w)? };
            let matrix = match specialize {
                None => r.matrix,
                Some(s) => {
                    let theta = SpecializationPoint::parse(field(coefficients)?, s)?;
                    r.specialize(&theta.values_for(rep.context())?, theta.ring())?
                }
            };
            let mut out = Output::new(json!({
                "n": n,
                "m": m,
                "word": w.to_string(),
                "dual": dual,
                "convention": CONVENTION,
                "variables": matrix.context().names(),
                "dimension": matrix.rows(),
                "matrix": matrix_json(&matrix),
            }));
            out.matrix = Some(matrix);
            Ok(out)
        }
        Command::GenericCheck { theta_x, theta_d, m, surface, coefficients } => {
            let (g, n, k) = *surface;
            let t = SurfaceTriad::new(g, n, k, *m)?;
            let system = LocalSystemSpec::standard(*m, CoefficientRing::Integers)?;
            let mut spec = format!("x={theta_x}");
            match (theta_d, m) {
                (Some(d), _) => spec.push_str(&format!(",d={d}")),
                (None, 1) => {}
                (None, _) => bail!("--theta-d is required when m >= 2"),
            }
            let theta = SpecializationPoint::parse(field(coefficients)?, &spec)?;
            let v = genericity_check(&t, &system, &theta)?;
            let mut out = Output::new(json!({ "triad": t, "theta": spec, "generic": v.generic, "reasons": v.reasons }));
            out.text = Some(if v.generic { "generic".into() } else { format!("not generic: {}", v.reasons.join("; ")) });
            Ok(out)
        }
        Command::Homology { complex, at, coefficients } => {
            let raw = std::fs::read_to_string(complex).with_context(|| format!("reading {}", complex.display()))?;
            let file: ComplexFile = serde_json::from_str(&raw).with_context(|| format!("parsing {}", complex.display()))?;
            let cx = file.build()?;
            let theta = SpecializationPoint::parse(field(coefficients)?, at)?;
            let ranks = homology_ranks_at(&cx, &theta)?;
            let mut out = Output::new(json!({ "direction": cx.direction(), "at": at, "ranks": ranks }));
            out.text = Some(ranks.iter().enumerate().map(|(i, r)| format!("H{i}\t{r}")).collect::<Vec<_>>().join("\n"));
            Ok(out)
        }
        Command::Helix { surface, index, y, z } => {
            let t = surface.triad()?;
            let dim = t.dimension() as usize;
            let h = helix_class(*index, dim, &y.0, &z.0, &CoefficientRing::Integers)?;
            let entry = &h.entries[*index];
            let mut out = Output::new(json!({
                "triad": t,
                "index": index,
                "class": basis(&t, Side::Out, Flavour::LocallyFinite)[*index].to_string(),
                "entry": entry.to_json(),
                "is_zero": h.is_zero(),
                "in_group_ring": h.is_in_group_ring(),
            }));
            out.text = Some(serde_json::to_string(&entry.to_json())?);
            Ok(out)
        }
        Command::Verify { seed } => {
            let reports = run_all(*seed)?;
            let lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    match &r.counterexample {
                        Some(c) => format!("{status}\t{}\t{} cases\t{c}", r.name, r.cases),
                        None => format!("{status}\t{}\t{} cases", r.name, r.cases),
                    }
                })
                .collect();
            let ok = reports.iter().all(|r| r.passed);
            let mut out = Output::new(json!({ "seed": seed, "passed": ok, "properties": reports }));
            out.text = Some(lines.join("\n"));
            out.ok = ok;
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| Ok((render(&out, cli.format)?, out.ok)));
    match result {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: some properties failed");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
