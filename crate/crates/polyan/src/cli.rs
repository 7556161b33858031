//! `polyan <command> [--in PATH]... [--out PATH] [--q N] [--alpha a,b,...] [--tol X] [--seed N]`
//!
//! Exit codes: 0 success, 1 negative mathematical verdict (report still
//! written), 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use polyan_core::harmonic::{solve_dirichlet, Domain2D, GridField};
use polyan_core::levi::{
    bmmp_verify, build_disc_family, constant_modulus_trace, levi_form, DiscCounts, DiscFamily, GraphHypersurface,
    TraceVerdict,
};
use polyan_core::modulus::{balk_decompose, is_constant_modulus};
use polyan_core::polycore::{MWitness, MultiIndex, PolyAnalytic};
use polyan_core::rado::{
    hartogs_assemble, rado_verify, HartogsVerdict, PolyGrid, Polydisc, RadoVerdict, SampledFunction,
};
use polyan_core::sampling::{condensation_order, fit_polyanalytic, limiting_directions};
use polyan_core::{tol, Error};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::heatmap::emit_heatmap;
use crate::io::{self, complex, matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Eval,
    Order,
    Modulus,
    Fit,
    Directions,
    Dirichlet,
    Rado,
    Hartogs,
    Levi,
    Discs,
    Trace,
}

#[derive(Debug, Parser)]
#[command(name = "polyan", version, about = "Polyanalytic function toolkit")]
pub struct Config {
    #[arg(value_enum)]
    pub command: Command,
    /// Input files; `trace` takes the witness then the hypersurface, `rado`
    /// takes the grid CSV and optionally its JSON sidecar.
    #[arg(long = "in")]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<u32>>,
    /// Overrides the command's main tolerance (constant-modulus residual
    /// for `modulus`, zero-set threshold for `rado`).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Accepted for reproducibility; no command draws random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluation point `re,im[,re,im...]`, one pair per variable; the base
    /// point for `fit` and `directions`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Coefficient degree for `fit`.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
    #[arg(long, default_value_t = tol::SHELLS)]
    pub shells: usize,
    #[arg(long, default_value_t = tol::ANGULAR_RESOLUTION)]
    pub resolution: f64,
    /// Lattice points per side and variable for `hartogs`.
    #[arg(long, default_value_t = 32)]
    pub per_side: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.3)]
    pub delta: f64,
    /// Portable pixmap of `|f|` (`dirichlet`: the solution; `trace`: the
    /// widest disc slice).
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
}

/// Report plus whether the verdict is negative.
struct Outcome {
    report: Value,
    negative: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, negative: false }
    }
}

/// Parses `argv` (without the program name handling: `argv[0]` is the
/// program) and runs the command, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match Config::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cfg) {
        Ok(out) => {
            let written = match &cfg.out {
                Some(p) if cfg.command != Command::Dirichlet => io::write_json(p, &out.report),
                Some(_) => Ok(()),
                None => {
                    let text = serde_json::to_string_pretty(&out.report).expect("JSON values serialize");
                    writeln!(std::io::stdout(), "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
                }
            };
            match written {
                Ok(()) if out.negative => 1,
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("polyan: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("polyan: {e}");
            2
        }
    }
}

fn input(cfg: &Config, k: usize, what: &str) -> Result<PathBuf, CliError> {
    cfg.inputs.get(k).cloned().ok_or_else(|| CliError::Usage(format!("missing --in {what}")))
}

fn parse_point(s: &str) -> Result<Vec<Complex64>, CliError> {
    let nums = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--at expects re,im pairs, got '{s}'")))?;
    if nums.is_empty() || nums.len() % 2 != 0 {
        return Err(CliError::Usage(format!("--at expects re,im pairs, got '{s}'")));
    }
    Ok(nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

fn base_point(cfg: &Config) -> Result<Complex64, CliError> {
    match cfg.at.as_slice() {
        [] => Ok(Complex64::new(0.0, 0.0)),
        [s] => match parse_point(s)?.as_slice() {
            [z] => Ok(*z),
            _ => Err(CliError::Usage("base point must be a single re,im pair".into())),
        },
        _ => Err(CliError::Usage("give one base point".into())),
    }
}

fn read_poly(cfg: &Config) -> Result<PolyAnalytic, CliError> {
    io::poly_from_json(&io::read_json(&input(cfg, 0, "function.json")?)?)
}

fn read_surface(path: &Path) -> Result<GraphHypersurface, CliError> {
    io::surface_from_json(&io::read_json(path)?)
}

fn family(cfg: &Config, m: &GraphHypersurface) -> Result<DiscFamily, CliError> {
    let l = levi_form(m)?;
    Ok(build_disc_family(m, &l, cfg.eps, cfg.delta, DiscCounts::default())?)
}

fn execute(cfg: &Config) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Eval => eval(cfg),
        Command::Order => {
            let f = read_poly(cfg)?;
            Ok(Outcome::ok(json!({ "alpha": f.order().entries(), "exact_order": f.exact_order().entries() })))
        }
        Command::Modulus => modulus(cfg),
        Command::Fit => fit(cfg),
        Command::Directions => directions(cfg),
        Command::Dirichlet => dirichlet(cfg),
        Command::Rado => rado(cfg),
        Command::Hartogs => hartogs(cfg),
        Command::Levi => levi(cfg),
        Command::Discs => discs(cfg),
        Command::Trace => trace(cfg),
    }
}

fn eval(cfg: &Config) -> Result<Outcome, CliError> {
    let f = read_poly(cfg)?;
    if cfg.at.is_empty() {
        return Err(CliError::Usage("eval needs at least one --at point".into()));
    }
    let mut rows = Vec::new();
    for s in &cfg.at {
        let z = parse_point(s)?;
        if z.len() != f.dim() {
            return Err(CliError::Usage(format!("point '{s}' has {} coordinates, f has {}", z.len(), f.dim())));
        }
        let value = match f.eval(&z) {
            Ok(v) => complex(v),
            Err(Error::SingularPoint) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        rows.push(json!({ "z": z.iter().map(|c| complex(*c)).collect::<Vec<_>>(), "value": value }));
    }
    Ok(Outcome::ok(json!({ "values": rows })))
}

fn modulus(cfg: &Config) -> Result<Outcome, CliError> {
    let f = read_poly(cfg)?;
    let c = is_constant_modulus(&f, cfg.tol.unwrap_or(tol::CONSTANT_MODULUS))?;
    let Some(c) = c else {
        return Ok(Outcome {
            report: json!({ "constant_modulus": false, "C": null, "lambda": null, "Q": null }),
            negative: true,
        });
    };
    let form = balk_decompose(&f)?;
    Ok(Outcome::ok(json!({
        "constant_modulus": true,
        "C": c,
        "lambda": complex(form.lambda),
        "Q": io::cpoly_to_json(&form.q),
    })))
}

fn fit(cfg: &Config) -> Result<Outcome, CliError> {
    let q = cfg.q.ok_or_else(|| CliError::Usage("fit needs --q".into()))?;
    let e = io::read_points_csv(&input(cfg, 0, "points.csv")?, base_point(cfg)?)?;
    match fit_polyanalytic(&e, q, cfg.degree) {
        Ok(fit) => Ok(Outcome::ok(json!({
            "function": io::poly_to_json(&fit.function),
            "residual": fit.residual,
            "condition": fit.condition,
        }))),
        Err(Error::RankDeficient { rank, unknowns, .. }) => Ok(Outcome {
            report: json!({ "error": "rank_deficient", "rank": rank, "unknowns": unknowns }),
            negative: true,
        }),
        Err(e) => Err(e.into()),
    }
}

fn directions(cfg: &Config) -> Result<Outcome, CliError> {
    let e = io::read_points_csv(&input(cfg, 0, "points.csv")?, base_point(cfg)?)?;
    let r = limiting_directions(&e, cfg.shells, cfg.resolution)?;
    let clusters: Vec<Value> =
        r.clusters.iter().map(|c| json!({ "angle": c.angle, "count": c.count, "min_radius": c.min_radius })).collect();
    let mut report = json!({ "clusters": clusters, "shell_counts": r.shell_counts, "order": r.order() });
    let mut negative = false;
    if let Some(q) = cfg.q {
        let condensed = condensation_order(&e, q as usize)?;
        report["condensation_order_at_least_q"] = json!(condensed);
        negative = !condensed;
    }
    Ok(Outcome { report, negative })
}

fn dirichlet(cfg: &Config) -> Result<Outcome, CliError> {
    let spec: io::DomainJson = io::read_json(&input(cfg, 0, "domain.json")?)?;
    let dom = io::domain_from_json(&spec)?;
    let data = spec.data.as_ref().ok_or_else(|| CliError::Format("domain has no boundary 'data'".into()))?;
    let g = io::poly_from_json(data)?;
    if g.dim() != 1 {
        return Err(CliError::Format("boundary data must be a function of one variable".into()));
    }
    let bd: Vec<Complex64> = dom.attachments().iter().map(|a| g.eval(&[a.point])).collect::<Result<_, _>>()?;
    let u = solve_dirichlet(&dom, &bd)?;
    if let Some(p) = &cfg.out {
        io::write_grid_csv(p, &u)?;
    }
    if let Some(p) = &cfg.heatmap {
        emit_heatmap(&u, p)?;
    }
    Ok(Outcome::ok(json!({ "nodes": u.iter().count(), "h": dom.h(), "max_abs": u.max_abs() })))
}

fn rado(cfg: &Config) -> Result<Outcome, CliError> {
    let field = io::read_grid_csv(&input(cfg, 0, "field.csv")?)?;
    let sidecar: Option<io::Sidecar> = cfg.inputs.get(1).map(|p| io::read_json(p)).transpose()?;
    let q =
        cfg.q.or(sidecar.as_ref().map(|s| s.q)).ok_or_else(|| CliError::Usage("rado needs --q or a sidecar".into()))?;
    let threshold = cfg.tol.or(sidecar.as_ref().map(|s| s.zero_threshold)).unwrap_or(tol::ZERO_SET);
    let f = SampledFunction::with_threshold(field, q, threshold)?;
    let r = match rado_verify(&f) {
        Ok(r) => r,
        Err(Error::NotCqSmooth { jump, bound }) => {
            return Ok(Outcome {
                report: json!({ "verdict": "not_cq_smooth", "jump": jump, "bound": bound }),
                negative: true,
            })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        negative: r.verdict == RadoVerdict::Fails,
        report: json!({
            "verdict": r.verdict.as_str(),
            "q": q,
            "dbar_residual": r.dbar_residual,
            "band_residual": r.band_residual,
            "K": r.k,
            "scheme_bound": r.scheme_bound,
            "zero_nodes": r.zero_nodes,
            "zero_set_interior_empty": r.zero_set_interior_empty,
            "zero_set_u": r.zero_set_u,
            "harmonic_defect": r.harmonic_defect,
            "max_principle_ok": r.max_principle_ok,
            "coefficients": r.coefficients.len(),
            "coefficient_residual": r.coefficient_residual,
            "reproduction_error": r.reproduction_error,
            "remark": r.remark,
        }),
    })
}

fn hartogs(cfg: &Config) -> Result<Outcome, CliError> {
    let f = read_poly(cfg)?;
    let alpha = MultiIndex::new(cfg.alpha.clone().unwrap_or_else(|| f.order().entries().to_vec()));
    let n = f.dim();
    let disc = Polydisc::new(&vec![Complex64::new(0.0, 0.0); n], &vec![1.0; n], cfg.per_side)?;
    let g = PolyGrid::from_polyanalytic(disc, &f)?;
    match hartogs_assemble(&g, &alpha) {
        Ok(r) => Ok(Outcome {
            negative: r.verdict != HartogsVerdict::JointlyPolyanalytic,
            report: json!({
                "verdict": r.verdict.as_str(),
                "alpha": alpha.entries(),
                "K": r.k,
                "slice_residuals": r.slice_residuals,
                "slice_bounds": r.slice_bounds,
                "mixed_residual": r.mixed_residual,
                "mixed_bound": r.mixed_bound,
            }),
        }),
        Err(Error::SliceViolation { variable, slice, residual }) => Ok(Outcome {
            negative: true,
            report: json!({
                "verdict": "slice_violation",
                "alpha": alpha.entries(),
                "variable": variable + 1,
                "slice": slice,
                "residual": residual,
            }),
        }),
        Err(e) => Err(e.into()),
    }
}

fn levi(cfg: &Config) -> Result<Outcome, CliError> {
    let m = read_surface(&input(cfg, 0, "surface.json")?)?;
    let l = levi_form(&m)?;
    Ok(Outcome::ok(json!({
        "S": matrix(&l.s),
        "U": matrix(&l.u),
        "lambda": l.lambda,
        "positive_eigenvalue": l.lambda.first().is_some_and(|x| *x > 0.0),
        "unitarity_defect": l.unitarity_defect(),
        "diagonalization_defect": l.diagonalization_defect(),
    })))
}

fn family_failure(e: Error) -> Result<Outcome, CliError> {
    let kind = match e {
        Error::NoPositiveEigenvalue => "no_positive_eigenvalue",
        Error::AttachmentFailure { .. } => "attachment_failure",
        Error::CoverageFailure { .. } => "coverage_failure",
        e => return Err(e.into()),
    };
    Ok(Outcome { report: json!({ "error": kind, "detail": e.to_string() }), negative: true })
}

fn discs(cfg: &Config) -> Result<Outcome, CliError> {
    let m = read_surface(&input(cfg, 0, "surface.json")?)?;
    let fam = match family(cfg, &m) {
        Ok(f) => f,
        Err(CliError::Core(e)) => return family_failure(e),
        Err(e) => return Err(e),
    };
    let worst = fam.discs.iter().map(|d| d.attachment_defect).fold(0.0, f64::max);
    Ok(Outcome::ok(json!({
        "eps": fam.eps,
        "delta": fam.delta,
        "halvings": fam.halvings,
        "lambda": fam.levi.lambda,
        "discs": fam.discs.len(),
        "attachment_tol": fam.attachment_tol,
        "max_attachment_defect": worst,
        "third_derivative_bound": fam.third_bound,
        "c1": fam.c1,
        "c2": fam.c2,
        "coverage_tested": fam.coverage_tested,
    })))
}

/// `|f|` on the ζ-plane of the widest disc, over the disc's bounding circle.
fn slice_field(f: &MWitness, fam: &DiscFamily) -> Result<GridField, CliError> {
    let d = fam
        .discs
        .iter()
        .max_by(|a, b| a.radii.iter().sum::<f64>().total_cmp(&b.radii.iter().sum::<f64>()))
        .ok_or_else(|| CliError::Format("empty disc family".into()))?;
    let r = d.radii.iter().copied().fold(0.0, f64::max);
    let dom = Domain2D::disc(Complex64::new(0.0, 0.0), r, r / 32.0)?;
    Ok(GridField::from_fn(&dom, |z| {
        f.eval(&fam.to_ambient(z, &d.w_rest, d.x, d.y))
            .map_or(Complex64::new(0.0, 0.0), |v| Complex64::new(v.norm(), 0.0))
    }))
}

fn trace(cfg: &Config) -> Result<Outcome, CliError> {
    let f = io::witness_from_json(&io::read_json(&input(cfg, 0, "witness.json")?)?)?;
    let m = read_surface(&input(cfg, 1, "surface.json")?)?;
    let fam = match family(cfg, &m) {
        Ok(f) => f,
        Err(CliError::Core(e)) => return family_failure(e),
        Err(e) => return Err(e),
    };
    let b = bmmp_verify(&f, &fam, 8)?;
    let t = constant_modulus_trace(&f, &m, &fam)?;
    if let Some(p) = &cfg.heatmap {
        emit_heatmap(&slice_field(&f, &fam)?, p)?;
    }
    let balk = t.balk.as_ref().map(|form| json!({ "lambda": complex(form.lambda), "Q": io::cpoly_to_json(&form.q) }));
    Ok(Outcome {
        negative: t.verdict != TraceVerdict::BalkForm || !b.within_bound,
        report: json!({
            "kind": f.kind(),
            "bmmp": {
                "discs": b.discs,
                "max_interior": b.max_interior,
                "max_boundary": b.max_boundary,
                "defect": b.defect,
                "sampling_bound": b.sampling_bound,
                "within_bound": b.within_bound,
                "reciprocal_defect": b.reciprocal_defect,
                "reciprocal_within_bound": b.reciprocal_within_bound,
                "min_denominator": b.min_denominator,
            },
            "trace": {
                "verdict": t.verdict.as_str(),
                "mean": t.trace_mean,
                "std": t.trace_std,
                "samples": t.samples,
                "lambda_abs": t.lambda_abs,
                "q_degree": t.q_degree,
                "mismatch": t.mismatch,
                "balk": balk,
            },
        }),
    })
}
