//! Command-line front end: JSON in, JSON/SVG out.
//!
//! Subcommands: `variety` (inspect a fan and its Cox data), `reg`
//! (regularity region of a module), `powers` (verified bounds for powers
//! of an ideal), `bounds` (degree-based bounds only), `certify`
//! (nonregularity certificates along a ray of degrees).
//!
//! Exit codes: 0 success, 1 verification failure (witness printed),
//! 2 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::One;
use serde_json::{json, Value};

use torreg::cohomology::{suggested_cap, Certification, DimsOracle, OraclePath};
use torreg::lattice::{chamber_complex, Cone, PicVector};
use torreg::regularity::{
    check_containment_bounds, nonregularity_certificate, reg_region, Certificate,
    RegularityRegion, Window,
};
use torreg::rees::{
    degree_bounds_q, rees_ideal, schreyer_resolution, shift_a, verify_powers_theorem,
    BoundReport,
};
use torreg::ring::{MonomialIdeal, MonomialModule};
use torreg::toric::{build_variety, Fan, ToricVariety};
use torreg::{Error, Fp, Rat};

#[derive(Parser)]
#[command(name = "torreg", version, about = "multigraded regularity over toric Cox rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect a fan: grading, irrelevant ideal, Nef/Eff cones, chambers
    Variety { path: PathBuf },
    /// Regularity region of a module (default: the Cox ring itself)
    Reg {
        #[command(flatten)]
        common: Common,
        /// write an SVG staircase (rank 2 only)
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Verified inner/outer regularity bounds for powers of an ideal
    Powers {
        #[command(flatten)]
        common: Common,
        /// largest power to check
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Degree-based bounds only (no region computation)
    Bounds {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        ideal: Option<PathBuf>,
        /// generator degrees like "1,1;0,2" for non-monomial ideals
        #[arg(long, allow_hyphen_values = true)]
        degrees: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Nonregularity certificates along a ray (a degenerate window) of degrees
    Certify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    variety: PathBuf,
    /// monomial ideal, treated as a module
    #[arg(long)]
    ideal: Option<PathBuf>,
    /// monomial ideal whose quotient S/I is the module
    #[arg(long)]
    quotient: Option<PathBuf>,
    /// presented module JSON
    #[arg(long)]
    module: Option<PathBuf>,
    /// degree window "x0,y0:x1,y1"
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// cohomology path: pattern | taylor | both
    #[arg(long, default_value = "pattern")]
    oracle: String,
    /// coefficient field: q (rationals) or a prime
    #[arg(long, default_value = "q")]
    field: String,
    /// JSON overrides, e.g. {"fine_cap": 12}
    #[arg(long)]
    caps: Option<String>,
}

/// Input problems exit 2; failed verifications exit 1.
enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type RunResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Variety { path } => run_variety(&path),
        Cmd::Reg { common, svg } => run_reg(&common, svg.as_deref()),
        Cmd::Powers { common, n } => run_powers(&common, n),
        Cmd::Bounds {
            variety,
            ideal,
            degrees,
            n,
        } => run_bounds(&variety, ideal.as_deref(), degrees.as_deref(), n),
        Cmd::Certify { common } => run_certify(&common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// input plumbing
// ---------------------------------------------------------------------------

fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_variety(path: &std::path::Path) -> Result<ToricVariety, Failure> {
    let fan = Fan::from_json(&read_file(path)?)?;
    Ok(build_variety(fan)?)
}

fn load_module(x: &ToricVariety, common: &Common) -> Result<MonomialModule, Failure> {
    let picks = [
        common.ideal.is_some(),
        common.quotient.is_some(),
        common.module.is_some(),
    ];
    if picks.iter().filter(|p| **p).count() > 1 {
        return Err(Failure::Input(
            "pass at most one of --ideal, --quotient, --module".into(),
        ));
    }
    if let Some(p) = &common.ideal {
        let ideal = MonomialIdeal::from_json(&read_file(p)?)?;
        return Ok(MonomialModule::Ideal { ideal });
    }
    if let Some(p) = &common.quotient {
        let ideal = MonomialIdeal::from_json(&read_file(p)?)?;
        return Ok(MonomialModule::Quotient { ideal });
    }
    if let Some(p) = &common.module {
        return Ok(MonomialModule::from_json(&read_file(p)?, x)?);
    }
    Ok(MonomialModule::cox_ring(x.picard_rank()))
}

/// Reject modules whose associated sheaf is zero before any region work.
fn reject_zero_sheaf(m: &MonomialModule) -> Result<(), Failure> {
    let zero = match m {
        MonomialModule::Ideal { ideal } => ideal.is_zero(),
        MonomialModule::Free { twists } => twists.is_empty(),
        MonomialModule::Presented { twists, .. } => twists.is_empty(),
        MonomialModule::Quotient { .. } => false,
    };
    if zero {
        return Err(Failure::Input(Error::ZeroSheaf.to_string()));
    }
    Ok(())
}

fn parse_vector(text: &str, rho: usize) -> Result<PicVector, Failure> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|c| c.trim().parse()).collect();
    let coords =
        coords.map_err(|_| Failure::Input(format!("bad coordinate list {text:?}")))?;
    if coords.len() != rho {
        return Err(Failure::Input(format!(
            "expected {rho} coordinates in {text:?}"
        )));
    }
    Ok(PicVector(coords))
}

fn parse_window(text: &str, rho: usize) -> Result<Window, Failure> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| Failure::Input("window must look like x0,y0:x1,y1".into()))?;
    Ok(Window::new(parse_vector(lo, rho)?, parse_vector(hi, rho)?)?)
}

fn window_for(x: &ToricVariety, m: &MonomialModule, common: &Common) -> Result<Window, Failure> {
    match &common.window {
        Some(w) => parse_window(w, x.picard_rank()),
        None => Ok(Window::default_for(x, m)),
    }
}

struct Caps {
    fine_cap: Option<i64>,
}

fn parse_caps(text: Option<&str>) -> Result<Caps, Failure> {
    let Some(text) = text else {
        return Ok(Caps { fine_cap: None });
    };
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Failure::Input(format!("caps JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Failure::Input("caps must be a JSON object".into()))?;
    let mut caps = Caps { fine_cap: None };
    for (k, val) in obj {
        match k.as_str() {
            "fine_cap" => {
                caps.fine_cap = Some(
                    val.as_i64()
                        .ok_or_else(|| Failure::Input("fine_cap must be an integer".into()))?,
                )
            }
            other => return Err(Failure::Input(format!("unknown cap {other:?}"))),
        }
    }
    Ok(caps)
}

enum FieldChoice {
    Rationals,
    Prime(u64),
}

fn parse_field(text: &str) -> Result<FieldChoice, Failure> {
    if text == "q" {
        return Ok(FieldChoice::Rationals);
    }
    let p: u64 = text
        .parse()
        .map_err(|_| Failure::Input(format!("field must be q or a prime, got {text:?}")))?;
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Failure::Input(format!("{p} is not prime")));
    }
    Ok(FieldChoice::Prime(p))
}

// ---------------------------------------------------------------------------
// JSON rendering
// ---------------------------------------------------------------------------

fn vec_json(v: &PicVector) -> Value {
    json!(v.0)
}

fn vecs_json(vs: &[PicVector]) -> Value {
    Value::Array(vs.iter().map(vec_json).collect())
}

fn cone_json(c: &Cone) -> Value {
    json!({ "rays": vecs_json(c.rays()) })
}

fn window_json(w: &Window) -> Value {
    json!({ "lower": vec_json(&w.lower), "upper": vec_json(&w.upper) })
}

fn certification_str(c: Certification) -> &'static str {
    match c {
        Certification::Exact => "exact",
        Certification::Window => "window",
    }
}

fn region_json(r: &RegularityRegion) -> Value {
    json!({
        "window": window_json(&r.window),
        "points": vecs_json(&r.points),
        "minima": vecs_json(&r.minima),
        "certification": certification_str(r.certification),
    })
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "d": vec_json(&c.d),
        "chamber_index": c.chamber_index,
        "chamber": cone_json(&c.chamber),
        "wall": c.wall.as_ref().map(cone_json),
        "differences": vecs_json(&c.differences),
        "witnesses": c.witnesses.iter().map(|m| json!(m.0.0)).collect::<Vec<_>>(),
    })
}

fn bound_report_json(r: &BoundReport) -> Value {
    let descriptor = |d: &torreg::rees::RegionDescriptor| {
        json!({
            "window": window_json(&d.window),
            "points": vecs_json(&d.points),
            "minima": vecs_json(&d.minima),
        })
    };
    json!({
        "n": r.n,
        "q1": vec_json(&r.q1),
        "q2": vec_json(&r.q2),
        "a": vec_json(&r.a),
        "reg": region_json(&r.reg),
        "inner": descriptor(&r.inner),
        "sharp_inner": descriptor(&r.sharp_inner),
        "outer": descriptor(&r.outer),
        "verdicts": {
            "inner_in_reg": r.inner_ok,
            "sharp_in_reg": r.sharp_ok,
            "reg_in_outer": r.outer_ok,
            "inner_in_sharp": r.sharp_contains_inner,
        },
        "witness": r.witness.as_ref().map(vec_json),
    })
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn run_variety(path: &std::path::Path) -> RunResult {
    let x = load_variety(path)?;
    let degrees = x.var_degrees();
    let complex = chamber_complex(&degrees, Some(&x.nef))?;
    let out = json!({
        "rays": x.fan.rays.iter().map(|r| json!(r.0)).collect::<Vec<_>>(),
        "max_cones": x.fan.max_cones,
        "picard_rank": x.picard_rank(),
        "var_degrees": vecs_json(&degrees),
        "irrelevant_generators": x
            .irrelevant_generators()
            .iter()
            .map(|g| json!(g.0))
            .collect::<Vec<_>>(),
        "nef": cone_json(&x.nef),
        "eff": cone_json(&x.eff),
        "nef_hilbert_basis": vecs_json(&x.nef_gens),
        "chambers": complex
            .chambers()
            .iter()
            .map(cone_json)
            .collect::<Vec<_>>(),
        "walls": complex
            .walls()
            .iter()
            .map(|(w, (a, b))| json!({ "cone": cone_json(w), "between": [a, b] }))
            .collect::<Vec<_>>(),
    });
    emit(&out);
    Ok(())
}

fn compute_region<F: torreg::Field>(
    x: &ToricVariety,
    m: &MonomialModule,
    window: &Window,
    oracle: &str,
    caps: &Caps,
    one: F,
) -> Result<RegularityRegion, Failure> {
    let cap = caps.fine_cap.unwrap_or_else(|| {
        suggested_cap(x, m, &window.lower, &window.upper)
    });
    let run = |path: OraclePath| -> Result<RegularityRegion, Failure> {
        let mut oracle = DimsOracle::new(x, m, path, cap, one.clone())?;
        Ok(reg_region(x, &mut oracle, window)?)
    };
    match oracle {
        "pattern" => run(OraclePath::Pattern),
        "taylor" => run(OraclePath::Taylor),
        "both" => {
            let a = run(OraclePath::Pattern)?;
            let b = run(OraclePath::Taylor)?;
            if a.points != b.points {
                let diff = a
                    .points
                    .iter()
                    .find(|p| !b.points.contains(p))
                    .or_else(|| b.points.iter().find(|p| !a.points.contains(p)));
                return Err(Failure::Verification(format!(
                    "oracle disagreement at degree {:?}",
                    diff.map(|p| p.0.clone()).unwrap_or_default()
                )));
            }
            Ok(b)
        }
        other => Err(Failure::Input(format!(
            "oracle must be pattern, taylor or both, got {other:?}"
        ))),
    }
}

fn run_reg(common: &Common, svg: Option<&std::path::Path>) -> RunResult {
    let x = load_variety(&common.variety)?;
    let m = load_module(&x, common)?;
    reject_zero_sheaf(&m)?;
    let window = window_for(&x, &m, common)?;
    let caps = parse_caps(common.caps.as_deref())?;
    let region = match parse_field(&common.field)? {
        FieldChoice::Rationals => {
            compute_region(&x, &m, &window, &common.oracle, &caps, Rat::one())?
        }
        FieldChoice::Prime(p) => {
            compute_region(&x, &m, &window, &common.oracle, &caps, Fp::new(1, p))?
        }
    };
    let containment = check_containment_bounds(&x, &m, &region)?;
    let out = json!({
        "region": region_json(&region),
        "containment": {
            "eff_translate": containment.eff_translate.as_ref().map(vec_json),
            "eff_ok": containment.eff_ok(),
            "nef_translate": containment.nef_translate.as_ref().map(vec_json),
            "nef_ok": containment.nef_ok(),
            "torsion_free": containment.torsion_free,
        },
    });
    emit(&out);
    if let Some(path) = svg {
        if x.picard_rank() != 2 {
            return Err(Failure::Input(
                "SVG staircase output requires Picard rank 2".into(),
            ));
        }
        fs::write(path, render_svg(&region))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_powers(common: &Common, n_max: usize) -> RunResult {
    let x = load_variety(&common.variety)?;
    let Some(ideal_path) = &common.ideal else {
        return Err(Failure::Input("powers requires --ideal".into()));
    };
    let ideal = MonomialIdeal::from_json(&read_file(ideal_path)?)?;
    if ideal.is_zero() {
        return Err(Failure::Input(Error::ZeroSheaf.to_string()));
    }
    let window = match &common.window {
        Some(w) => parse_window(w, x.picard_rank())?,
        None => {
            let low = Window::default_for(
                &x,
                &MonomialModule::Ideal {
                    ideal: ideal.clone(),
                },
            );
            let high = Window::default_for(
                &x,
                &MonomialModule::Ideal {
                    ideal: torreg::ring::ideal_power(&ideal, n_max.max(1)),
                },
            );
            let lower = PicVector(
                low.lower
                    .0
                    .iter()
                    .zip(&high.lower.0)
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            );
            let upper = PicVector(
                low.upper
                    .0
                    .iter()
                    .zip(&high.upper.0)
                    .map(|(a, b)| *a.max(b))
                    .collect(),
            );
            Window::new(lower, upper)?
        }
    };
    let reports = verify_powers_theorem(&x, &ideal, n_max, &window)?;
    let out = Value::Array(reports.iter().map(bound_report_json).collect());
    emit(&out);
    if let Some(bad) = reports.iter().find(|r| r.witness.is_some()) {
        return Err(Failure::Verification(format!(
            "containment fails for n={} at degree {:?}",
            bad.n,
            bad.witness.as_ref().unwrap().0
        )));
    }
    Ok(())
}

fn run_bounds(
    variety: &std::path::Path,
    ideal: Option<&std::path::Path>,
    degrees: Option<&str>,
    n: usize,
) -> RunResult {
    let x = load_variety(variety)?;
    let rho = x.picard_rank();
    let (gen_degrees, a) = match (ideal, degrees) {
        (Some(path), None) => {
            let ideal = MonomialIdeal::from_json(&read_file(path)?)?;
            if ideal.is_zero() {
                return Err(Failure::Input(Error::ZeroSheaf.to_string()));
            }
            let degs: Vec<PicVector> =
                ideal.gens().iter().map(|g| g.degree(&x)).collect();
            let (ring, gens) = rees_ideal(&x, &ideal)?;
            let f = schreyer_resolution(&ring, &gens)?;
            (degs, Some(shift_a(&x, &f)))
        }
        (None, Some(list)) => {
            let degs: Result<Vec<PicVector>, Failure> =
                list.split(';').map(|d| parse_vector(d, rho)).collect();
            (degs?, None)
        }
        _ => {
            return Err(Failure::Input(
                "bounds requires exactly one of --ideal or --degrees".into(),
            ))
        }
    };
    let (q1s, q2s) = degree_bounds_q(&gen_degrees, &x.nef, &x.nef_gens);
    let q1 = &q1s[0];
    let q2 = &q2s[0];
    let inner_translate = match &a {
        Some(a) => Some(&q1.scaled(n as i64) + a),
        None => None,
    };
    let out = json!({
        "n": n,
        "generator_degrees": vecs_json(&gen_degrees),
        "q1_candidates": vecs_json(&q1s),
        "q2_candidates": vecs_json(&q2s),
        "a": a.as_ref().map(vec_json),
        // inner bound region is inner_translate + reg S (when a is known)
        "inner_translate": inner_translate.as_ref().map(vec_json),
        // outer bound region is outer_translate + Nef X
        "outer_translate": vec_json(&q2.scaled(n as i64)),
    });
    emit(&out);
    Ok(())
}

fn run_certify(common: &Common) -> RunResult {
    let x = load_variety(&common.variety)?;
    let m = load_module(&x, common)?;
    reject_zero_sheaf(&m)?;
    let Some(window) = &common.window else {
        return Err(Failure::Input(
            "certify requires --window (a segment of degrees)".into(),
        ));
    };
    let window = parse_window(window, x.picard_rank())?;
    let complex = chamber_complex(&x.var_degrees(), Some(&x.nef))?;
    let mut entries = vec![];
    for d in window.points() {
        let entry = match nonregularity_certificate(&x, &m, &d, &complex) {
            Ok(cert) => json!({ "d": vec_json(&d), "certificate": certificate_json(&cert) }),
            Err(e) => json!({ "d": vec_json(&d), "status": e.to_string() }),
        };
        entries.push(entry);
    }
    emit(&Value::Array(entries));
    Ok(())
}

// ---------------------------------------------------------------------------
// SVG staircase (rank 2)
// ---------------------------------------------------------------------------

/// Staircase drawing: one unit cell per region point and a boundary
/// polyline whose inner corners are exactly the region's minima. The
/// polyline lives in lattice coordinates inside a flipped-and-scaled
/// group, so tests can re-parse the corner list directly.
fn render_svg(region: &RegularityRegion) -> String {
    let w = &region.window;
    let (x0, y0) = (w.lower.0[0], w.lower.0[1]);
    let (x1, y1) = (w.upper.0[0] + 1, w.upper.0[1] + 1);
    let scale = 24;
    let width = (x1 - x0) * scale;
    let height = (y1 - y0) * scale;
    let mut cells = String::new();
    for p in &region.points {
        cells.push_str(&format!(
            "    <rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"1\" height=\"1\"/>\n",
            p.0[0], p.0[1]
        ));
    }
    // staircase: minima sorted by first coordinate; corners at the minima
    let mut minima = region.minima.clone();
    minima.sort();
    let mut pts: Vec<(i64, i64)> = vec![];
    if let (Some(first), Some(last)) = (minima.first(), minima.last()) {
        pts.push((first.0[0], y1));
        for (i, m) in minima.iter().enumerate() {
            if i > 0 {
                pts.push((m.0[0], minima[i - 1].0[1]));
            }
            pts.push((m.0[0], m.0[1]));
        }
        pts.push((x1, last.0[1]));
    }
    let polyline = pts
        .iter()
        .map(|(a, b)| format!("{a},{b}"))
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
viewBox=\"0 0 {width} {height}\">\n\
  <style>.cell{{fill:#9db9e8;stroke:none}}.staircase{{fill:none;stroke:#1a3a6b;stroke-width:0.12}}</style>\n\
  <g transform=\"translate({tx},{ty}) scale({scale},-{scale})\">\n\
{cells}    <polyline class=\"staircase\" points=\"{polyline}\"/>\n\
  </g>\n</svg>\n",
        tx = -x0 * scale,
        ty = y1 * scale,
    )
}
