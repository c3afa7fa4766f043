//! Command dispatch: parameter resolution (flags over config), target
//! execution, and error → exit-code mapping.

use std::fmt;

use levywright::cbi::{self, CbiParams};
use levywright::expfun::{self, ExpFunctionalLaw};
use levywright::levy::{self, FamilyParams};
use levywright::sim::{self, Direction, SimConfig};
use levywright::verify;
use levywright::wright::{self, WrightSpec};
use num_complex::Complex64;

use crate::config::Config;
use crate::output::{emit, fmt17, Envelope, Table};
use crate::{Cli, Command, DirectionArg, Format, ParamArgs, SimArgs, Target};

pub enum CliError {
    /// Bad flags, config, or domain: exit 2.
    Validation(String),
    /// The computation could not certify its result: exit 3.
    Numerical(String),
    /// `verify` found failing criteria: exit 4.
    VerifyMismatch(usize),
}

impl CliError {
    pub fn validation(what: String) -> Self {
        CliError::Validation(what)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::VerifyMismatch(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(w) => write!(f, "{w}"),
            CliError::Numerical(w) => write!(f, "{w}"),
            CliError::VerifyMismatch(n) => write!(f, "{n} acceptance criteria failed"),
        }
    }
}

impl From<levywright::Error> for CliError {
    fn from(e: levywright::Error) -> Self {
        use levywright::Error::*;
        match &e {
            Domain { .. } | Config { .. } | Pole { .. } | Bracket { .. } => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eval {
            target,
            params,
            format,
        } => {
            let env = eval_target(target, &params, &cfg)?;
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&env)
                        .map_err(|e| CliError::Validation(format!("serializing: {e}")))?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let t = Table {
                        metadata: vec![
                            format!("levywright {}", env!("CARGO_PKG_VERSION")),
                            format!("target={} method={}", env.target, env.method),
                            params_echo(&env.params),
                        ],
                        header: vec!["value".into(), "abs_err".into(), "terms".into()],
                        rows: vec![vec![env.value, env.abs_err, env.terms as f64]],
                    };
                    t.to_csv()
                }
            };
            emit(cli.output.as_ref(), &text)
        }
        Command::Table {
            target,
            params,
            min,
            max,
            n,
            log,
            read,
        } => {
            if let Some(path) = read {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Validation(format!("reading {}: {e}", path.display())))?;
                let t = Table::parse(&text)?;
                return emit(cli.output.as_ref(), &t.to_csv());
            }
            let t = table_target(target, &params, &cfg, min, max, n, log)?;
            emit(cli.output.as_ref(), &t.to_csv())
        }
        Command::Simulate {
            target,
            params,
            sim,
        } => {
            let t = simulate_target(target, &params, &sim, &cfg)?;
            emit(cli.output.as_ref(), &t.to_csv())
        }
        Command::Invert {
            target,
            params,
            min,
            max,
            n,
            n_nodes,
        } => {
            let t = invert_target(target, &params, &cfg, min, max, n, n_nodes)?;
            emit(cli.output.as_ref(), &t.to_csv())
        }
        Command::Verify { suite, seed } => {
            if suite != "all" {
                return Err(CliError::Validation(format!(
                    "unknown verify suite `{suite}` (only `all`)"
                )));
            }
            let seed = cfg.seed(seed)?;
            let results = verify::run_all(seed);
            let mut lines = String::new();
            let mut failures = 0usize;
            for c in &results {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if !c.passed {
                    failures += 1;
                }
                lines.push_str(&format!(
                    "[{status}] criterion {:2}: {} — {}\n",
                    c.id, c.name, c.detail
                ));
            }
            emit(cli.output.as_ref(), &lines)?;
            if failures > 0 {
                Err(CliError::VerifyMismatch(failures))
            } else {
                Ok(())
            }
        }
    }
}

fn params_echo(params: &[(String, f64)]) -> String {
    let cells: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    cells.join(" ")
}

fn parse_pairs(raw: &str, what: &str) -> Result<Vec<(f64, f64)>, CliError> {
    raw.split(',')
        .map(|pair| {
            let (c, o) = pair.split_once(':').ok_or_else(|| {
                CliError::Validation(format!("{what}: expected `coef:offset`, got `{pair}`"))
            })?;
            let c: f64 = c
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("{what}: bad coefficient `{c}`")))?;
            let o: f64 = o
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("{what}: bad offset `{o}`")))?;
            Ok((c, o))
        })
        .collect()
}

fn gamma_params(p: &ParamArgs, cfg: &Config) -> Result<FamilyParams, CliError> {
    let alpha = cfg.require_f64(p.alpha, "alpha")?;
    let gamma = cfg.f64_or(p.gamma, "gamma", 0.0)?;
    Ok(FamilyParams::gamma_family(alpha, gamma)?)
}

fn delta_params(p: &ParamArgs, cfg: &Config) -> Result<FamilyParams, CliError> {
    let alpha = cfg.require_f64(p.alpha, "alpha")?;
    let delta = cfg.require_f64(p.delta, "delta")?;
    Ok(FamilyParams::delta_family(alpha, delta)?)
}

fn cbi_params(p: &ParamArgs, cfg: &Config) -> Result<CbiParams, CliError> {
    let kappa = cfg.require_f64(p.kappa, "kappa")?;
    let delta = cfg.require_f64(p.delta, "delta")?;
    Ok(CbiParams::new(kappa, delta, 0.0)?)
}

fn eval_target(target: Target, p: &ParamArgs, cfg: &Config) -> Result<Envelope, CliError> {
    let tol = cfg.f64_or(p.tol, "tol", 1e-10)?;
    match target {
        Target::PsiGamma => {
            let fp = gamma_params(p, cfg)?;
            let lambda = cfg.require_f64(p.lambda, "lambda")?;
            let v = levy::psi_gamma(&fp, lambda)?;
            Ok(closed_form(
                "psi_gamma",
                vec![
                    ("alpha".into(), fp.alpha),
                    ("gamma".into(), fp.gamma_param()?),
                    ("lambda".into(), lambda),
                ],
                v,
            ))
        }
        Target::PsiDelta => {
            let fp = delta_params(p, cfg)?;
            let lambda = cfg.require_f64(p.lambda, "lambda")?;
            let v = levy::psi_delta(&fp, lambda)?;
            Ok(closed_form(
                "psi_delta",
                vec![
                    ("alpha".into(), fp.alpha),
                    ("delta".into(), fp.delta_param()?),
                    ("lambda".into(), lambda),
                ],
                v,
            ))
        }
        Target::Wright => {
            let upper = cfg
                .string(p.upper.clone(), "upper")
                .map(|s| parse_pairs(&s, "--upper"))
                .transpose()?
                .unwrap_or_default();
            let lower = cfg
                .string(p.lower.clone(), "lower")
                .map(|s| parse_pairs(&s, "--lower"))
                .transpose()?
                .ok_or_else(|| CliError::Validation("wright needs --lower".into()))?;
            let z = cfg.require_f64(p.z, "z")?;
            let spec = WrightSpec::new(upper, lower)?;
            let r = wright::wright_eval(&spec, z, tol)?;
            Ok(Envelope {
                target: "wright".into(),
                params: vec![("z".into(), z), ("tol".into(), tol)],
                value: r.value,
                abs_err: r.abs_err,
                method: r.method.to_string(),
                terms: r.terms,
            })
        }
        Target::Density => {
            let fp = delta_params(p, cfg)?;
            let y = cfg.require_f64(p.y, "y")?;
            let law = ExpFunctionalLaw::new(fp)?;
            let r = expfun::density_report(&law, y, tol)?;
            Ok(Envelope {
                target: "density".into(),
                params: vec![
                    ("alpha".into(), fp.alpha),
                    ("delta".into(), fp.delta_param()?),
                    ("y".into(), y),
                ],
                value: r.value,
                abs_err: r.abs_err,
                method: r.method.to_string(),
                terms: r.terms,
            })
        }
        Target::LaplaceN => {
            let fp = delta_params(p, cfg)?;
            let x = cfg.require_f64(p.x, "x")?;
            let v = expfun::laplace_n(&fp, x)?;
            Ok(Envelope {
                target: "laplace_N".into(),
                params: vec![
                    ("alpha".into(), fp.alpha),
                    ("delta".into(), fp.delta_param()?),
                    ("x".into(), x),
                ],
                value: v,
                abs_err: 1e-10 * v.abs().max(1.0),
                method: "series".into(),
                terms: 0,
            })
        }
        Target::Transition => {
            let cp = cbi_params(p, cfg)?;
            let t = cfg.require_f64(p.t, "t")?;
            let x = cfg.require_f64(p.x, "x")?;
            let y = cfg.require_f64(p.y, "y")?;
            let v = cbi::transition_density(&cp, t, x, y, tol, 400)?;
            Ok(Envelope {
                target: "transition".into(),
                params: vec![
                    ("kappa".into(), cp.kappa),
                    ("delta".into(), cp.delta),
                    ("t".into(), t),
                    ("x".into(), x),
                    ("y".into(), y),
                ],
                value: v,
                abs_err: tol * v.abs().max(1.0),
                method: "series".into(),
                terms: 0,
            })
        }
        Target::Entrance => {
            let cp = cbi_params(p, cfg)?;
            let t = cfg.require_f64(p.t, "t")?;
            let y = cfg.require_f64(p.y, "y")?;
            let v = cbi::entrance_density(&cp, t, y)?;
            Ok(Envelope {
                target: "entrance".into(),
                params: vec![
                    ("kappa".into(), cp.kappa),
                    ("delta".into(), cp.delta),
                    ("t".into(), t),
                    ("y".into(), y),
                ],
                value: v,
                abs_err: 1e-10 * v.abs().max(1.0),
                method: "series".into(),
                terms: 0,
            })
        }
        Target::FirstPassage => {
            let cp = cbi_params(p, cfg)?;
            let q = cfg.require_f64(p.q, "q")?;
            let x = cfg.require_f64(p.x, "x")?;
            let a = cfg.require_f64(p.a, "a")?;
            let v = cbi::first_passage_laplace(&cp, q, x, a)?;
            Ok(Envelope {
                target: "first_passage".into(),
                params: vec![
                    ("kappa".into(), cp.kappa),
                    ("delta".into(), cp.delta),
                    ("q".into(), q),
                    ("x".into(), x),
                    ("a".into(), a),
                ],
                value: v,
                abs_err: 1e-9 * v.abs().max(1.0),
                method: "quadrature".into(),
                terms: 0,
            })
        }
        Target::Identity => {
            let alpha = cfg.require_f64(p.alpha, "alpha")?;
            let gamma = cfg.f64_or(p.gamma, "gamma", 0.0)?;
            let lambda = cfg.require_f64(p.lambda, "lambda")?;
            let (lhs, rhs) = levy::verify_integral_identity(alpha, gamma, lambda)?;
            Ok(Envelope {
                target: "identity".into(),
                params: vec![
                    ("alpha".into(), alpha),
                    ("gamma".into(), gamma),
                    ("lambda".into(), lambda),
                ],
                value: rhs,
                abs_err: (lhs - rhs).abs(),
                method: "quadrature".into(),
                terms: 0,
            })
        }
        Target::ExpfunMc | Target::AbsorptionMc => Err(CliError::Validation(
            "Monte Carlo targets run under `simulate`, not `eval`".into(),
        )),
    }
}

fn closed_form(target: &str, params: Vec<(String, f64)>, v: f64) -> Envelope {
    Envelope {
        target: target.into(),
        params,
        value: v,
        abs_err: 8.0 * f64::EPSILON * v.abs().max(1.0),
        method: "closed-form".into(),
        terms: 0,
    }
}

fn grid(
    cfg: &Config,
    min: Option<f64>,
    max: Option<f64>,
    n: Option<usize>,
    log: bool,
) -> Result<Vec<f64>, CliError> {
    let lo = cfg.require_f64(min, "min")?;
    let hi = cfg.require_f64(max, "max")?;
    let n = cfg.usize_or(n, "n", 100)?;
    if !(hi > lo) || n < 2 || (log && lo <= 0.0) {
        return Err(CliError::Validation(format!(
            "grid needs max > min, n ≥ 2, and min > 0 when --log (got {lo}, {hi}, {n})"
        )));
    }
    let pts = (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if log {
                (lo.ln() + f * (hi.ln() - lo.ln())).exp()
            } else {
                lo + f * (hi - lo)
            }
        })
        .collect();
    Ok(pts)
}

fn table_target(
    target: Target,
    p: &ParamArgs,
    cfg: &Config,
    min: Option<f64>,
    max: Option<f64>,
    n: Option<usize>,
    log: bool,
) -> Result<Table, CliError> {
    let pts = grid(cfg, min, max, n, log)?;
    let tol = cfg.f64_or(p.tol, "tol", 1e-10)?;
    let version = format!("levywright {}", env!("CARGO_PKG_VERSION"));
    let (meta, header, f): (String, &str, Box<dyn Fn(f64) -> Result<f64, CliError>>) = match target
    {
        Target::PsiGamma => {
            let fp = gamma_params(p, cfg)?;
            (
                format!("target=psi_gamma alpha={} gamma={}", fp.alpha, fp.gamma_param()?),
                "lambda,psi",
                Box::new(move |l| Ok(levy::psi_gamma(&fp, l)?)),
            )
        }
        Target::PsiDelta => {
            let fp = delta_params(p, cfg)?;
            (
                format!("target=psi_delta alpha={} delta={}", fp.alpha, fp.delta_param()?),
                "lambda,psi",
                Box::new(move |l| Ok(levy::psi_delta(&fp, l)?)),
            )
        }
        Target::Density => {
            let fp = delta_params(p, cfg)?;
            let law = ExpFunctionalLaw::new(fp)?;
            (
                format!("target=density alpha={} delta={}", fp.alpha, fp.delta_param()?),
                "y,f",
                Box::new(move |y| Ok(law.density(y, tol)?)),
            )
        }
        Target::LaplaceN => {
            let fp = delta_params(p, cfg)?;
            (
                format!("target=laplace_N alpha={} delta={}", fp.alpha, fp.delta_param()?),
                "x,N",
                Box::new(move |x| Ok(expfun::laplace_n(&fp, x)?)),
            )
        }
        Target::Entrance => {
            let cp = cbi_params(p, cfg)?;
            let t = cfg.require_f64(p.t, "t")?;
            (
                format!("target=entrance kappa={} delta={} t={t}", cp.kappa, cp.delta),
                "y,p",
                Box::new(move |y| Ok(cbi::entrance_density(&cp, t, y)?)),
            )
        }
        Target::Transition => {
            let cp = cbi_params(p, cfg)?;
            let t = cfg.require_f64(p.t, "t")?;
            let x = cfg.require_f64(p.x, "x")?;
            (
                format!(
                    "target=transition kappa={} delta={} t={t} x={x}",
                    cp.kappa, cp.delta
                ),
                "y,p",
                Box::new(move |y| Ok(cbi::transition_density(&cp, t, x, y, tol, 400)?)),
            )
        }
        _ => {
            return Err(CliError::Validation(format!(
                "target {target:?} has no table form"
            )))
        }
    };
    let mut rows = Vec::with_capacity(pts.len());
    for v in pts {
        rows.push(vec![v, f(v)?]);
    }
    Ok(Table {
        metadata: vec![version, meta],
        header: header.split(',').map(str::to_string).collect(),
        rows,
    })
}

fn sim_config(s: &SimArgs, cfg: &Config) -> Result<SimConfig, CliError> {
    let c = SimConfig {
        eps_jump: cfg.f64_or(s.eps_jump, "eps_jump", 0.02)?,
        horizon: cfg.f64_or(s.horizon, "horizon", 250.0)?,
        step: cfg.f64_or(s.step, "step", 0.02)?,
        n_paths: cfg.usize_or(s.n_paths, "n_paths", 10_000)?,
        seed: cfg.seed(s.seed)?,
        gaussian_compensation: true,
    };
    c.validate()?;
    Ok(c)
}

fn simulate_target(
    target: Target,
    p: &ParamArgs,
    s: &SimArgs,
    cfg: &Config,
) -> Result<Table, CliError> {
    let sc = sim_config(s, cfg)?;
    let (meta, samples) = match target {
        Target::ExpfunMc => {
            let has_delta = cfg.opt_f64(p.delta, "delta")?.is_some();
            let fp = if has_delta {
                delta_params(p, cfg)?
            } else {
                gamma_params(p, cfg)?
            };
            let flag = match s.direction {
                Some(DirectionArg::PlusKappa) => Some("plus_kappa".to_string()),
                Some(DirectionArg::MinusKappa) => Some("minus_kappa".to_string()),
                None => None,
            };
            let dir = match cfg.string(flag, "direction").as_deref() {
                Some("plus_kappa") => Direction::PlusKappa,
                Some("minus_kappa") => Direction::MinusKappa,
                Some(other) => {
                    return Err(CliError::Validation(format!(
                        "direction `{other}`: expected plus_kappa or minus_kappa"
                    )))
                }
                // Default: the direction that is finite for the family —
                // +κ needs negative mean (δ-family laws), −κ positive drift.
                None if has_delta => Direction::PlusKappa,
                None => Direction::MinusKappa,
            };
            let samples = sim::sample_exponential_functional(&fp, dir, &sc)?;
            let dir_name = match dir {
                Direction::PlusKappa => "plus_kappa",
                Direction::MinusKappa => "minus_kappa",
            };
            (
                format!(
                    "target=expfun_mc alpha={} direction={dir_name} (raw Lamperti integral; multiply by kappa for Sigma_infty)",
                    fp.alpha
                ),
                samples,
            )
        }
        Target::AbsorptionMc => {
            let cp = CbiParams::new(cfg.require_f64(p.kappa, "kappa")?, 0.0, 0.0)?;
            let x = cfg.require_f64(p.x, "x")?;
            let samples = sim::sample_absorption_time(&cp, x, &sc)?;
            (format!("target=absorption_mc kappa={} x={x}", cp.kappa), samples)
        }
        _ => {
            return Err(CliError::Validation(format!(
                "target {target:?} is not a sampler"
            )))
        }
    };
    Ok(Table {
        metadata: vec![
            format!("levywright {}", env!("CARGO_PKG_VERSION")),
            meta,
            format!(
                "seed={} n_paths={} eps_jump={} horizon={} step={}",
                samples.seed, sc.n_paths, sc.eps_jump, sc.horizon, sc.step
            ),
            format!(
                "neglected_jump_mass={} horizon_tail_bound={}",
                fmt17(samples.meta.neglected_jump_mass),
                fmt17(samples.meta.horizon_tail_bound)
            ),
        ],
        header: vec!["value".into()],
        rows: samples.values.iter().map(|&v| vec![v]).collect(),
    })
}

fn invert_target(
    target: Target,
    p: &ParamArgs,
    cfg: &Config,
    min: Option<f64>,
    max: Option<f64>,
    n: Option<usize>,
    n_nodes: usize,
) -> Result<Table, CliError> {
    let pts = grid(cfg, min, max, n, false)?;
    let cp = cbi_params(p, cfg)?;
    let t = cfg.require_f64(p.t, "t")?;
    let ct = cp.c * t;
    let kappa = cp.kappa;
    let dp = cp.delta_prime();
    let meta;
    let transform: Box<dyn Fn(Complex64) -> Complex64> = match target {
        Target::Entrance => {
            meta = format!("target=entrance kappa={kappa} delta={} t={t}", cp.delta);
            Box::new(move |s: Complex64| {
                (Complex64::new(1.0, 0.0) + ct * s.powf(kappa)).powf(-dp)
            })
        }
        Target::Transition => {
            let x = cfg.require_f64(p.x, "x")?;
            meta = format!(
                "target=transition kappa={kappa} delta={} t={t} x={x}",
                cp.delta
            );
            Box::new(move |s: Complex64| {
                let base = Complex64::new(1.0, 0.0) + ct * s.powf(kappa);
                base.powf(-dp) * (-x * s * base.powf(-1.0 / kappa)).exp()
            })
        }
        _ => {
            return Err(CliError::Validation(format!(
                "target {target:?} has no inversion form"
            )))
        }
    };
    let values = sim::laplace_invert(|s| transform(s), &pts, n_nodes)?;
    Ok(Table {
        metadata: vec![
            format!("levywright {}", env!("CARGO_PKG_VERSION")),
            meta,
            format!("method=fixed-talbot n_nodes={n_nodes}"),
        ],
        header: vec!["y".into(), "p".into()],
        rows: pts
            .iter()
            .zip(values)
            .map(|(&y, v)| vec![y, v])
            .collect(),
    })
}
