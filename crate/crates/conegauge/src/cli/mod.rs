//! The `conegauge` command line: every analysis as a scriptable run that
//! writes JSON or CSV.
//!
//! Exit codes: 0 success, 2 parse or input error, 3 numerical failure,
//! 4 failed verification. `CONEGAUGE_THREADS` caps the worker count.

mod args;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Deserialize;
use serde_json::{json, Value};

pub use args::{Cli, Command, Family, Format, DEFAULT_SEED};
use args::{ChainArgs, ExponentArgs, GammaArgs, KlArgs, ProjectArgs, SolveArgs, TightnessArgs};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::frf::{expcone_g, pcone_frf, ExpFaceTag, GFunction};
use crate::kl::{kl_exponent, solve_prox_grad, RegLsInstance, SolveOptions, StepRule};
use crate::pcone::{
    classify_exposing, parse_p, pnorm, polar_projection, project_cone, ConePoint, ExposingClass, PExponent,
    BOUNDARY_TOL, DEFAULT_ZERO_TOL,
};
use crate::reduction::{
    assemble_exponent, dpps_upper_bound, lipschitz_cases, verify_certificate, AssembleOptions, FeasProblem,
    GammaChoice, ReductionChain,
};
use crate::tightness::{
    check_error_bound, default_small_index, estimate_gamma_with, fit_exponent, g1_limsup, log_grid,
    witness_exp_beta, witness_exp_minus_infinity, witness_exp_plus_infinity, witness_large_support,
    witness_small_support, GammaConfig, WitnessCurve,
};

pub const THREADS_ENV: &str = "CONEGAUGE_THREADS";

/// Exit code for an error class.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) => 2,
        Error::Numerical { .. } => 3,
        Error::Verification(_) | Error::NonHolder(_) => 4,
    }
}

/// Worker count: available parallelism capped by `CONEGAUGE_THREADS`.
pub fn worker_count() -> Result<usize> {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{THREADS_ENV}={v:?} is not a count")))?;
            if cap == 0 {
                return Err(Error::Parse(format!("{THREADS_ENV} must be at least 1")));
            }
            Ok(avail.min(cap))
        }
        Err(_) => Ok(avail),
    }
}

/// Parses a comma-separated list of reals.
pub fn parse_vector(s: &str) -> Result<Vec<f64>> {
    let v: std::result::Result<Vec<f64>, _> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse::<f64>)
        .collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(Error::Parse(format!("cannot read {s:?} as a comma-separated list of reals"))),
    }
}

/// Fixed-format double with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn exponent_json(e: &Exponent) -> Value {
    json!({ "exact": e.as_rational().map(|r| r.to_string()), "value": e.value() })
}

fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

/// What a command produced: JSON always, CSV where a table exists, and an
/// exit code for reports that describe a failed precondition.
struct Output {
    json: Value,
    csv: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, csv: String) -> Self {
        Output { json, csv, code: 0 }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => match write_output(&cli, &out) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_output(cli: &Cli, out: &Output) -> Result<()> {
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).map_err(|e| Error::invalid(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => out.csv.clone(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::invalid(format!("cannot write output: {e}")))
        }
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Project(a) => cmd_project(cli, a),
        Command::Exponent(a) => cmd_exponent(cli, a),
        Command::Tightness(a) => cmd_tightness(cli, a),
        Command::Gamma(a) => cmd_gamma(cli, a),
        Command::Chain(a) => cmd_chain(cli, a),
        Command::Kl(a) => cmd_kl(a),
        Command::Solve(a) => cmd_solve(cli, a),
    }
}

fn cmd_project(cli: &Cli, a: &ProjectArgs) -> Result<Output> {
    #[derive(Deserialize)]
    struct Input {
        p: PExponent,
        point: Vec<f64>,
    }
    let (p, v) = match (&a.input, &a.p, &a.point) {
        (Some(path), _, _) => {
            let inp: Input = serde_json::from_str(&read_file(path)?)
                .map_err(|e| Error::Parse(format!("project input: {e}")))?;
            (inp.p, inp.point)
        }
        (None, Some(p), Some(pt)) => (parse_p(p)?, parse_vector(pt)?),
        _ => return Err(Error::Parse("project needs --p and --point, or --input".into())),
    };
    let tol = cli.tol.unwrap_or(1e-12);
    let x = ConePoint::from_slice(&v)?;
    let proj = project_cone(&x, &p, tol)?;
    let polar = polar_projection(&x, &p, tol)?;
    let moreau = x.sub(&proj.point).sub(&polar).norm();
    let orth = proj.point.dot(&polar).abs();
    let pv = proj.point.to_vec();
    let qv = polar.to_vec();
    let mut csv = String::from("index,point,projection,polar\n");
    for i in 0..v.len() {
        csv.push_str(&format!("{i},{},{},{}\n", num(v[i]), num(pv[i]), num(qv[i])));
    }
    Ok(Output::ok(
        json!({
            "p": p.p(),
            "point": v,
            "projection": pv,
            "distance": proj.distance,
            "polar": qv,
            "moreau_residual": moreau,
            "orthogonality": orth,
        }),
        csv,
    ))
}

fn cmd_exponent(cli: &Cli, a: &ExponentArgs) -> Result<Output> {
    let p = parse_p(&a.p)?;
    let zv = parse_vector(&a.z)?;
    let z = ConePoint::from_slice(&zv)?;
    let btol = cli.tol.unwrap_or(BOUNDARY_TOL);
    match classify_exposing(&z, &p, btol, DEFAULT_ZERO_TOL) {
        ExposingClass::Ray(ray) => {
            let workers = worker_count()?;
            let (gamma, source) = match a.gamma {
                Some(g) => (g, "fixed"),
                None if a.eta == 0.0 => (f64::INFINITY, "t_zero"),
                None => {
                    let cfg = GammaConfig::new(a.eta, a.samples, cli.seed).with_workers(workers);
                    (estimate_gamma_with(&ray, &cfg)?.value, "estimate")
                }
            };
            let frf = pcone_frf(&ray, a.eta, gamma)?;
            let kappa = 1f64.max(1.0 / ray.z.norm());
            let rho_hat = frf.terms().iter().find(|t| t.exponent != crate::Rational::from_integer(1)).map_or(0.0, |t| t.coeff);
            let json = json!({
                "p": p.p(),
                "z": zv,
                "class": "ray",
                "support": ray.support,
                "support_size": ray.support.len(),
                "n": ray.n(),
                "alpha": exponent_json(&ray.alpha),
                "f": ray.f.to_vec(),
                "frf": {
                    "t": a.eta,
                    "gamma_hat": gamma,
                    "gamma_source": source,
                    "kappa": kappa,
                    "rho_hat": rho_hat,
                    "expr": frf,
                },
            });
            let csv = format!(
                "support_size,n,alpha,f0,kappa,rho_hat,gamma_hat\n{},{},{},{},{},{},{}\n",
                ray.support.len(),
                ray.n(),
                num(ray.alpha.value()),
                num(ray.f.x0),
                num(kappa),
                num(rho_hat),
                num(gamma)
            );
            Ok(Output::ok(json, csv))
        }
        class => {
            let (name, msg) = match class {
                ExposingClass::Zero => ("zero", "z is interior to the dual cone: face {0}, linear FRF".to_string()),
                ExposingClass::Full => ("full", "z = 0: full cone, no reduction".to_string()),
                ExposingClass::NotDual(g) => ("not_dual", format!("z is not in the dual cone (‖z̄‖_q − z0 = {g:e})")),
                ExposingClass::Ray(_) => unreachable!(),
            };
            eprintln!("{msg}");
            Ok(Output {
                json: json!({ "p": p.p(), "z": zv, "class": name, "message": msg }),
                csv: format!("class\n{name}\n"),
                code: 4,
            })
        }
    }
}

fn ray_from_args(p: &Option<String>, z: &Option<String>) -> Result<(PExponent, crate::pcone::ExposedRay)> {
    let p = parse_p(p.as_deref().ok_or_else(|| Error::Parse("--p is required for this family".into()))?)?;
    let zv = parse_vector(z.as_deref().ok_or_else(|| Error::Parse("--z is required for this family".into()))?)?;
    let ray = crate::pcone::face_from_exposing(&ConePoint::from_slice(&zv)?, &p, DEFAULT_ZERO_TOL)?;
    Ok((p, ray))
}

fn cmd_tightness(cli: &Cli, a: &TightnessArgs) -> Result<Output> {
    let grid = log_grid(a.eps_min, a.eps_max, a.grid)?;
    let workers = worker_count()?;
    let (curve, g, expected, ray): (WitnessCurve, GFunction, Option<f64>, _) = match a.family {
        Family::Small => {
            let (p, ray) = ray_from_args(&a.p, &a.z)?;
            let j = match a.index {
                Some(j) => j,
                None => default_small_index(&ray)
                    .ok_or_else(|| Error::invalid("small-support witness needs |J_z| < n"))?,
            };
            (witness_small_support(&ray, j)?, GFunction::power(p.inv_p()), Some(p.p()), Some(ray))
        }
        Family::Large => {
            let (_, ray) = ray_from_args(&a.p, &a.z)?;
            let half = Exponent::Exact(crate::Rational::new(1, 2));
            (witness_large_support(&ray, a.index)?, GFunction::power(half), Some(2.0), Some(ray))
        }
        Family::ExpPlus => (witness_exp_plus_infinity(), expcone_g(ExpFaceTag::PlusInfinity), None, None),
        Family::ExpMinus => (witness_exp_minus_infinity(), expcone_g(ExpFaceTag::MinusInfinity), None, None),
        Family::ExpBeta => (witness_exp_beta(a.beta)?, expcone_g(ExpFaceTag::Beta), Some(2.0), None),
    };
    let fit = fit_exponent(&curve, &grid)?;
    let g1 = g1_limsup(&curve, &g, &grid)?;
    let gamma = match (&ray, a.samples) {
        (Some(r), n) if n > 0 => {
            let cfg = GammaConfig::new(a.eta, n, cli.seed).with_workers(workers);
            Some(estimate_gamma_with(r, &cfg)?)
        }
        _ => None,
    };
    for w in &g1.warnings {
        eprintln!("warning: {w}");
    }
    let mut csv = String::from("eps,dist_k,ln_dist_k,dist_f,hyperplane_residual,g1_ratio\n");
    for (s, r) in fit.samples.iter().zip(&g1.table) {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(s.eps),
            num(s.dist_k),
            num(s.ln_dist_k),
            num(s.dist_f),
            num(s.hyperplane_residual),
            num(r.ratio)
        ));
    }
    let table: Vec<Value> = fit
        .samples
        .iter()
        .zip(&g1.table)
        .map(|(s, r)| {
            json!({
                "eps": s.eps, "dist_k": s.dist_k, "ln_dist_k": s.ln_dist_k,
                "dist_f": s.dist_f, "hyperplane_residual": s.hyperplane_residual, "g1_ratio": r.ratio,
            })
        })
        .collect();
    Ok(Output::ok(
        json!({
            "family": curve.family,
            "g": g.name(),
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r2": fit.r2,
            "expected_slope": expected,
            "g1_limsup": g1.estimate,
            "warnings": g1.warnings,
            "gamma": gamma,
            "table": table,
        }),
        csv,
    ))
}

fn cmd_gamma(cli: &Cli, a: &GammaArgs) -> Result<Output> {
    let (_, ray) = ray_from_args(&Some(a.p.clone()), &Some(a.z.clone()))?;
    let workers = worker_count()?;
    let cfg = GammaConfig::new(a.eta, a.samples, cli.seed).with_workers(workers);
    let est = estimate_gamma_with(&ray, &cfg)?;
    let check = if a.check > 0 {
        let c = check_error_bound(&ray, est.value, &GammaConfig::new(a.eta, a.check, cli.seed).with_workers(workers))?;
        Some(c)
    } else {
        None
    };
    let mut csv = String::from("samples,gamma_hat\n");
    for t in &est.trend {
        csv.push_str(&format!("{},{}\n", t.samples, num(t.value)));
    }
    let violations = check.as_ref().map_or(0, |c| c.violations);
    let json = json!({
        "support": ray.support,
        "alpha": exponent_json(&ray.alpha),
        "estimate": est,
        "check": check,
    });
    if violations > 0 {
        eprintln!("error bound violated on {violations} held-out points");
        return Ok(Output { json, csv, code: 4 });
    }
    Ok(Output::ok(json, csv))
}

fn cmd_chain(cli: &Cli, a: &ChainArgs) -> Result<Output> {
    let problem = FeasProblem::from_json(&read_file(&a.problem)?)?;
    let chain = match &a.chain {
        Some(p) => ReductionChain::from_json(&read_file(p)?)?,
        None => ReductionChain::default(),
    };
    let tol = cli.tol.unwrap_or(1e-9);
    let hint = a.hint.as_deref().map(parse_vector).transpose()?;
    let lip = lipschitz_cases(&problem, hint.as_deref(), a.zero_intersection, tol)?;
    let verified = verify_certificate(&problem, &chain, tol)?;
    let opts = AssembleOptions {
        t: a.eta,
        gamma: match a.gamma {
            Some(value) => GammaChoice::Fixed { value },
            None => GammaChoice::Estimate {
                samples: a.samples,
                seed: cli.seed,
            },
        },
        workers: worker_count()?,
        ..Default::default()
    };
    let asm = assemble_exponent(&verified, &opts)?;
    let final_exponent = match lip.exponent() {
        Some(e) => e,
        None => asm.exponent,
    };
    let mut csv = String::from("step,block,from,to,dual_residual,lperp_residual,a_residual,step_exponent\n");
    for (s, sf) in verified.steps.iter().zip(&asm.steps) {
        for b in &s.blocks {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                s.step,
                b.block,
                b.from.label(),
                b.to.label(),
                num(b.dual_residual),
                num(s.lperp_residual),
                num(s.a_residual),
                num(sf.exponent.value())
            ));
        }
    }
    Ok(Output::ok(
        json!({
            "preprocess": problem.report(),
            "dpps_upper_bound": dpps_upper_bound(&problem),
            "faces_count": verified.faces_count,
            "lipschitz": lip,
            "verification": verified,
            "assembly": {
                "exponent": exponent_json(&asm.exponent),
                "frf": asm.frf,
                "steps": asm.steps.iter().map(|s| json!({
                    "step": s.step, "kappa": s.kappa, "exponent": exponent_json(&s.exponent), "frf": s.frf,
                })).collect::<Vec<_>>(),
            },
            "exponent": exponent_json(&final_exponent),
        }),
        csv,
    ))
}

fn cmd_kl(a: &KlArgs) -> Result<Output> {
    let inst = a
        .instance
        .as_ref()
        .map(|p| read_file(p).and_then(|t| RegLsInstance::from_json(&t)))
        .transpose()?;
    let p = match (&a.p, &inst) {
        (Some(p), _) => parse_p(p)?,
        (None, Some(i)) => i.p(),
        (None, None) => return Err(Error::Parse("kl needs --p or --instance".into())),
    };
    let bound = inst.as_ref().map(|i| i.s() as u32 + 1);
    let d = match (a.d, bound) {
        (Some(d), _) => d,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::Parse("kl needs --d or --instance".into())),
    };
    let e = kl_exponent(&p, d);
    Ok(Output::ok(
        json!({
            "p": p.p(),
            "d": d,
            "d_upper_bound": bound,
            "exponent": exponent_json(&e),
        }),
        format!("p,d,exponent\n{},{d},{}\n", num(p.p()), num(e.value())),
    ))
}

fn cmd_solve(cli: &Cli, a: &SolveArgs) -> Result<Output> {
    let inst = RegLsInstance::from_json(&read_file(&a.instance)?)?;
    let step = match a.step.trim() {
        "auto" => StepRule::Auto,
        s => StepRule::Fixed(
            s.parse()
                .map_err(|_| Error::Parse(format!("--step must be `auto` or a number, got {s:?}")))?,
        ),
    };
    let mut opts = SolveOptions {
        step,
        max_iter: a.iters,
        ..Default::default()
    };
    if let Some(t) = cli.tol {
        opts.tol = t;
    }
    let res = solve_prox_grad(&inst, &opts)?;
    let p = inst.p();
    Ok(Output::ok(
        json!({
            "x": res.x,
            "objective": res.objective,
            "iterations": res.trace.len() - 1,
            "stop": res.stop,
            "converged": res.converged,
            "step": res.step,
            "lipschitz": res.lipschitz,
            "optimality": res.optimality,
            "regularizer_norms": inst.blocks().into_iter().map(|r| pnorm(&res.x[r], p.p())).collect::<Vec<_>>(),
            "kl_exponent_bound": exponent_json(&kl_exponent(&p, inst.s() as u32 + 1)),
            "trace": res.trace,
        }),
        res.trace_csv(),
    ))
}
