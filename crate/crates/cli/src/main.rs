mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use derbra::error::{Error, Result};
use derbra::gla::{GlaViolation, StructureGLA, TermJson};
use derbra::graded::{BasisKey, Elem};
use derbra::linfty::{mc_residual, twist, LInftyOne, DEFAULT_MAX_ARITY, DEFAULT_MAX_TERMS};
use derbra::polygeo::{self, Dims, ElementJson};
use derbra::suites::{run_suite, RunConfig, SuiteReport};
use derbra::tpois::{
    flow_curve, gauge_y, generator_match, join, residual_derivative, series_gauge_y, split, TPois,
};
use derbra::vdata::{join_big, split_big, VData};
use serde_json::{json, Value};

use input::{ElementFile, VDataFile};

#[derive(Parser)]
#[command(name = "derbra", version, about = "Exact L-infinity algebras from derived brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ARITY)]
    max_arity: usize,
    /// Polynomial degree bound for generated elements.
    #[arg(long, global = true, default_value_t = 2)]
    max_degree: u32,
    /// Safety cap on the number of series terms.
    #[arg(long, global = true, env = "DB_MAX_TERMS", default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct Which {
    /// Use the small algebra on the abelian part (the default).
    #[arg(long)]
    small: bool,
    /// Use the big algebra on the shifted total space plus the abelian part.
    #[arg(long)]
    big: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check degrees, antisymmetry and Jacobi of a structure-constant algebra.
    VerifyGla { file: PathBuf },
    /// Evaluate a multibracket of the derived algebra.
    Derived {
        vdata: PathBuf,
        #[command(flatten)]
        which: Which,
        /// Element files, one per argument; none gives the curvature.
        args: Vec<PathBuf>,
    },
    /// Maurer-Cartan residual of an element.
    Mc {
        vdata: PathBuf,
        element: PathBuf,
        #[command(flatten)]
        which: Which,
    },
    /// Evaluate a multibracket of the algebra twisted by a Maurer-Cartan element.
    Twist {
        vdata: PathBuf,
        element: PathBuf,
        #[command(flatten)]
        which: Which,
        args: Vec<PathBuf>,
    },
    /// Gauge field of (B, X) at a twisted Poisson pair (H, pi).
    Gauge { point: PathBuf },
    /// Integral curve of the gauge field of (B, X) through (H, pi).
    Flow {
        point: PathBuf,
        /// Evaluate the curve at these parameter values (e.g. 1/2).
        #[arg(long = "at")]
        at: Vec<String>,
    },
    /// Run a seeded property suite.
    Suite {
        name: String,
        /// Replace the algebras under test by deliberately broken ones.
        #[arg(long)]
        fault: bool,
    },
}

struct Outcome {
    ok: bool,
    text: String,
    json: Value,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Arg(_) | Error::Unsupported(_) | Error::OutOfCategory(_) => 2,
        Error::NotMaurerCartan { .. } | Error::NonTerminating(_) | Error::Validation(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.opts.json;
    match dispatch(cli) {
        Ok(o) => {
            let body = if json_out {
                serde_json::to_string_pretty(&o.json).expect("serializable")
            } else {
                o.text
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", body);
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(e) => {
            if json_out {
                let _ = writeln!(std::io::stdout().lock(), "{}", json!({ "error": e.to_string(), "exit": exit_code(&e) }));
            }
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let o = &cli.opts;
    match &cli.command {
        Command::VerifyGla { file } => verify_gla(file),
        Command::Derived { vdata, which, args } => {
            let args = read_values(args)?;
            with_algebra(vdata, *which, Derived { args })
        }
        Command::Mc { vdata, element, which } => {
            let element = input::read_json(element)?;
            with_algebra(vdata, *which, Mc { element, max_terms: o.max_terms })
        }
        Command::Twist { vdata, element, which, args } => {
            let element = input::read_json(element)?;
            let args = read_values(args)?;
            with_algebra(vdata, *which, Twist { element, args })
        }
        Command::Gauge { point } => gauge(point),
        Command::Flow { point, at } => flow(point, at),
        Command::Suite { name, fault } => {
            let cfg = RunConfig {
                seed: o.seed,
                samples: o.samples,
                max_arity: o.max_arity,
                max_degree: o.max_degree,
                max_terms: o.max_terms,
                fault: *fault,
            };
            Ok(suite_outcome(&run_suite(name, &cfg)?))
        }
    }
}

fn read_values(paths: &[PathBuf]) -> Result<Vec<Value>> {
    paths.iter().map(|p| input::read_json(p)).collect()
}

fn verify_gla(file: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::arg(format!("cannot read {}: {}", file.display(), e)))?;
    let g = StructureGLA::parse(&text)?;
    let report = g.verify();
    let mut lines = vec![format!(
        "{}: {} basis elements, {}",
        file.display(),
        g.dim(),
        if report.ok() { "ok".to_string() } else { format!("{} violations", report.violations.len()) }
    )];
    let mut items = Vec::new();
    for v in &report.violations {
        let (kind, elems, value) = match v {
            GlaViolation::Degree { left, right, result } => ("degree", vec![left, right], result),
            GlaViolation::Antisymmetry { left, right, residual } => ("antisymmetry", vec![left, right], residual),
            GlaViolation::Jacobi { a, b, c, residual } => ("jacobi", vec![a, b, c], residual),
        };
        let names: Vec<&str> = elems.iter().map(|s| s.as_str()).collect();
        lines.push(format!("  {} ({}): {}", kind, names.join(", "), input::structure_text(&g, value)));
        items.push(json!({ "kind": kind, "elements": names, "value": input::structure_json(&g, value) }));
    }
    Ok(Outcome {
        ok: report.ok(),
        text: lines.join("\n"),
        json: json!({ "ok": report.ok(), "dimension": g.dim(), "violations": items }),
    })
}

/// How elements of one algebra are read and printed.
struct Codec<K: Ord> {
    parse: Box<dyn Fn(&Value) -> Result<Elem<K>>>,
    text: Box<dyn Fn(&Elem<K>) -> String>,
    json: Box<dyn Fn(&Elem<K>) -> Value>,
}

trait Visit {
    fn visit<A: LInftyOne + 'static>(self, a: A, codec: Codec<A::Key>) -> Result<Outcome>;
}

fn element_file<T: serde::de::DeserializeOwned>(v: &Value) -> Result<ElementFile<T>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("element: {}", e)))
}

fn with_algebra<V: Visit>(path: &Path, which: Which, visitor: V) -> Result<Outcome> {
    let big = which.big;
    match input::read_json::<VDataFile>(path)? {
        VDataFile::Structure(j) => {
            let v = j.build()?;
            let report = v.validate();
            if !report.ok() {
                return Err(Error::Validation(format!("{:?}", report.violations)));
            }
            structure(v, big, visitor)
        }
        VDataFile::Coisotropic { pi } => {
            let dims = pi.dims;
            let v = polygeo::coiso_vdata(&dims, &pi.parse()?, 0)?;
            coisotropic(dims, v, big, visitor)
        }
        VDataFile::TwistedPoisson { dims } => {
            let d = Dims::plain(dims);
            let t = TPois::new(d)?;
            let codec = Codec {
                parse: Box::new(move |v: &Value| {
                    let f: ElementFile<ElementJson> = element_file(v)?;
                    let x = join(&input::geometric(&d, &f.shift)?, &input::geometric(&d, &f.abelian)?);
                    TPois::new(d)?.check(&x)?;
                    Ok(x)
                }),
                text: Box::new(move |x| {
                    let (w, u) = split(x);
                    format!("form: {}\nmultivector: {}", polygeo::render(&d, &w, true), polygeo::render(&d, &u, false))
                }),
                json: Box::new(move |x| {
                    let (w, u) = split(x);
                    json!({ "form": input::geometric_json(&d, &w), "multivector": input::geometric_json(&d, &u) })
                }),
            };
            visitor.visit(t, codec)
        }
    }
}

fn structure<V: Visit>(v: VData<derbra::gla::StructureGLA>, big: bool, visitor: V) -> Result<Outcome> {
    let g = v.lie.clone();
    let in_a = v.in_a.clone();
    let check_a = move |e: &Elem<usize>| -> Result<()> {
        if e.keys().all(|k| in_a(k)) {
            Ok(())
        } else {
            Err(Error::arg("abelian part leaves the abelian subspace"))
        }
    };
    if big {
        let (g1, g2, g3) = (g.clone(), g.clone(), g);
        let codec = Codec {
            parse: Box::new(move |val: &Value| {
                let f: ElementFile<Vec<TermJson>> = element_file(val)?;
                let a = input::structure_terms(&g1, &f.abelian)?;
                check_a(&a)?;
                Ok(join_big(&input::structure_terms(&g1, &f.shift)?, &a))
            }),
            text: Box::new(move |x| {
                let (l, a) = split_big(x);
                format!("shift: {}\nabelian: {}", input::structure_text(&g2, &l), input::structure_text(&g2, &a))
            }),
            json: Box::new(move |x| {
                let (l, a) = split_big(x);
                json!({ "shift": input::structure_json(&g3, &l), "abelian": input::structure_json(&g3, &a) })
            }),
        };
        visitor.visit(v.big_algebra()?, codec)
    } else {
        let (g1, g2, g3) = (g.clone(), g.clone(), g);
        let codec = Codec {
            parse: Box::new(move |val: &Value| {
                let f: ElementFile<Vec<TermJson>> = element_file(val)?;
                if f.shift.as_ref().map(|s| !s.is_empty()).unwrap_or(false) {
                    return Err(Error::arg("the small algebra has no shifted part"));
                }
                let a = input::structure_terms(&g1, &f.abelian)?;
                check_a(&a)?;
                Ok(a)
            }),
            text: Box::new(move |x| input::structure_text(&g2, x)),
            json: Box::new(move |x| json!({ "abelian": input::structure_json(&g3, x) })),
        };
        visitor.visit(v.small_algebra(), codec)
    }
}

fn coisotropic<V: Visit>(d: Dims, v: VData<polygeo::Schouten>, big: bool, visitor: V) -> Result<Outcome> {
    let check_a = move |u: &polygeo::Mv| -> Result<()> {
        if u.keys().all(|k| polygeo::in_vertical_constant(&d, k)) {
            Ok(())
        } else {
            Err(Error::arg("abelian part must be a vertical multivector field constant along the fibers"))
        }
    };
    if big {
        let codec = Codec {
            parse: Box::new(move |val: &Value| {
                let f: ElementFile<ElementJson> = element_file(val)?;
                let a = input::geometric(&d, &f.abelian)?;
                check_a(&a)?;
                Ok(join_big(&input::geometric(&d, &f.shift)?, &a))
            }),
            text: Box::new(move |x| {
                let (l, a) = split_big(x);
                format!("shift: {}\nabelian: {}", polygeo::render(&d, &l, false), polygeo::render(&d, &a, false))
            }),
            json: Box::new(move |x| {
                let (l, a) = split_big(x);
                json!({ "shift": input::geometric_json(&d, &l), "abelian": input::geometric_json(&d, &a) })
            }),
        };
        visitor.visit(v.big_algebra()?, codec)
    } else {
        let codec = Codec {
            parse: Box::new(move |val: &Value| {
                let f: ElementFile<ElementJson> = element_file(val)?;
                if f.shift.as_ref().map(|s| !s.terms.is_empty()).unwrap_or(false) {
                    return Err(Error::arg("the small algebra has no shifted part"));
                }
                let a = input::geometric(&d, &f.abelian)?;
                check_a(&a)?;
                Ok(a)
            }),
            text: Box::new(move |x| polygeo::render(&d, x, false)),
            json: Box::new(move |x| json!({ "abelian": input::geometric_json(&d, x) })),
        };
        visitor.visit(v.small_algebra(), codec)
    }
}

fn homogeneous<K: BasisKey>(a: &impl LInftyOne<Key = K>, x: &Elem<K>, what: &str) -> Result<()> {
    match a.homogeneity(x) {
        derbra::graded::Homogeneity::Mixed => Err(Error::arg(format!("{} is not homogeneous", what))),
        _ => Ok(()),
    }
}

struct Derived {
    args: Vec<Value>,
}

impl Visit for Derived {
    fn visit<A: LInftyOne + 'static>(self, a: A, codec: Codec<A::Key>) -> Result<Outcome> {
        let args = self.args.iter().map(|v| (codec.parse)(v)).collect::<Result<Vec<_>>>()?;
        for (i, x) in args.iter().enumerate() {
            homogeneous(&a, x, &format!("argument {}", i + 1))?;
        }
        let r = a.m(&args);
        Ok(Outcome {
            ok: true,
            text: format!("m_{} = {}", args.len(), (codec.text)(&r)),
            json: json!({ "arity": args.len(), "value": (codec.json)(&r) }),
        })
    }
}

struct Mc {
    element: Value,
    max_terms: usize,
}

impl Visit for Mc {
    fn visit<A: LInftyOne + 'static>(self, a: A, codec: Codec<A::Key>) -> Result<Outcome> {
        let x = (codec.parse)(&self.element)?;
        let rep = mc_residual(&a, &x, self.max_terms)?;
        let ok = rep.vanishes();
        Ok(Outcome {
            ok,
            text: format!(
                "{}\nresidual: {}\nterms: {}, stopped by {}",
                if ok { "Maurer-Cartan" } else { "not Maurer-Cartan" },
                (codec.text)(&rep.residual),
                rep.terms_evaluated,
                rep.terminated_by
            ),
            json: json!({
                "maurer_cartan": ok,
                "residual": (codec.json)(&rep.residual),
                "terms_evaluated": rep.terms_evaluated,
                "terminated_by": rep.terminated_by.to_string(),
            }),
        })
    }
}

struct Twist {
    element: Value,
    args: Vec<Value>,
}

impl Visit for Twist {
    fn visit<A: LInftyOne + 'static>(self, a: A, codec: Codec<A::Key>) -> Result<Outcome> {
        let alpha = (codec.parse)(&self.element)?;
        let args = self.args.iter().map(|v| (codec.parse)(v)).collect::<Result<Vec<_>>>()?;
        for (i, x) in args.iter().enumerate() {
            homogeneous(&a, x, &format!("argument {}", i + 1))?;
        }
        let t = twist(a, alpha, true)?;
        let r = t.m(&args);
        Ok(Outcome {
            ok: true,
            text: format!("twisted m_{} = {}", args.len(), (codec.text)(&r)),
            json: json!({ "arity": args.len(), "value": (codec.json)(&r) }),
        })
    }
}

fn pair_json(d: &Dims, p: &(polygeo::Form, polygeo::Mv)) -> Value {
    json!({ "form": input::geometric_json(d, &p.0), "multivector": input::geometric_json(d, &p.1) })
}

fn pair_text(d: &Dims, p: &(polygeo::Form, polygeo::Mv)) -> String {
    format!("({}, {})", polygeo::render(d, &p.0, true), polygeo::render(d, &p.1, false))
}

fn gauge(path: &Path) -> Result<Outcome> {
    let p = input::read_json::<input::PointFile>(path)?.parse()?;
    let d = p.dims;
    let gm = generator_match(&d, &p.b, &p.x, &p.h, &p.pi)?;
    let y = gauge_y(&d, &p.b, &p.x, &p.h, &p.pi)?;
    let series = series_gauge_y(&d, &p.b, &p.x, &p.h, &p.pi)?;
    let tangent = residual_derivative(&d, &p.h, &p.pi, &y.0, &y.1)?;
    let tangent_ok = tangent.0.is_zero() && tangent.1.is_zero();
    let series_ok = series == y;
    let ok = gm.matches && tangent_ok && series_ok;
    Ok(Outcome {
        ok,
        text: [
            format!("gauge field: {}", pair_text(&d, &y)),
            format!("generator: {} ({})", pair_text(&d, &gm.generator), if gm.matches { "matches" } else { "differs" }),
            format!("derivative of the residual: {}", pair_text(&d, &tangent)),
            format!("series agrees: {}", series_ok),
        ]
        .join("\n"),
        json: json!({
            "ok": ok,
            "gauge_field": pair_json(&d, &y),
            "generator": pair_json(&d, &gm.generator),
            "generator_matches": gm.matches,
            "residual_derivative": pair_json(&d, &tangent),
            "series_agrees": series_ok,
        }),
    })
}

fn flow(path: &Path, at: &[String]) -> Result<Outcome> {
    let p = input::read_json::<input::PointFile>(path)?.parse()?;
    let d = p.dims;
    let c = flow_curve(&d, &p.b, &p.x, &p.h, &p.pi)?;
    let dt = c.dims;
    let ode = c.satisfies_ode()?;
    let start = c.at(&derbra::graded::int(0))? == (p.h.clone(), p.pi.clone());
    let velocity = c.velocity_at_zero()? == gauge_y(&d, &p.b, &p.x, &p.h, &p.pi)?;
    let den = polygeo::function(c.denominator.clone());
    let mut lines = vec![
        format!("H_t = {}", polygeo::render(&dt, &c.h, true)),
        format!("pi_t = ({}) / ({})", polygeo::render(&dt, &c.numerator, false), polygeo::render(&dt, &den, false)),
        format!("ode: {}, starts at the point: {}, initial velocity is the gauge field: {}", ode, start, velocity),
    ];
    let mut values = Vec::new();
    for s in at {
        let t = input::parse_rational(s)?;
        let v = c.at(&t)?;
        lines.push(format!("t = {}: {}", t, pair_text(&d, &v)));
        values.push(json!({ "t": t.to_string(), "value": pair_json(&d, &v) }));
    }
    let ok = ode && start && velocity;
    Ok(Outcome {
        ok,
        text: lines.join("\n"),
        json: json!({
            "ok": ok,
            "h_t": input::geometric_json(&dt, &c.h),
            "pi_t_numerator": input::geometric_json(&dt, &c.numerator),
            "pi_t_denominator": input::geometric_json(&dt, &den),
            "ode": ode,
            "starts_at_point": start,
            "velocity_is_gauge_field": velocity,
            "values": values,
        }),
    })
}

fn suite_outcome(rep: &SuiteReport) -> Outcome {
    let ok = rep.passed();
    let mut lines = vec![format!(
        "suite {}: {} ({} checks, seed {})",
        rep.suite,
        if ok { "PASS" } else { "FAIL" },
        rep.checks(),
        rep.config.seed
    )];
    for c in &rep.cases {
        lines.push(format!("  {}: {} checks, {} failures", c.case, c.checks, c.failures));
    }
    for f in &rep.failures {
        lines.push(format!("  failure {} #{}: {}", f.case, f.index, f.witness));
    }
    for n in &rep.notes {
        lines.push(format!("  note: {}", n));
    }
    let mut j = serde_json::to_value(rep).expect("serializable");
    j["passed"] = Value::Bool(ok);
    Outcome {
        ok,
        text: lines.join("\n"),
        json: j,
    }
}
