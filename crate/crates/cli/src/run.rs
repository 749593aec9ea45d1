use std::collections::BTreeMap;

use epr_ga::{
    chsh_report, correlation_exact, correlation_mc, geometric_product, locality_audit,
    maximize_s_with, measure_alice, measure_bob, naive_correlation, sweep_curve, Axis,
    ChshConfig64, ChshReport64, CorrelationReport64, CrossSign, Direction64, HiddenVariable,
    Multivector64, ProductConvention, SearchOptions, RNG_ALGORITHM,
};
use serde::Serialize;

use crate::args::{parse_vector, resolve, Cli, Command, Common, ParsedDirection};
use crate::error::CliError;
use crate::output::{render, Meta};

/// Output of one invocation: the rendered document and any warnings for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub document: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Estimator {
    Exact,
    MonteCarlo,
    Naive,
}

impl Estimator {
    fn from_flags(c: &Common) -> Self {
        if c.naive {
            Estimator::Naive
        } else if c.exact {
            Estimator::Exact
        } else {
            Estimator::MonteCarlo
        }
    }

    fn label(self) -> &'static str {
        match self {
            Estimator::Exact => "exact",
            Estimator::MonteCarlo => "monte-carlo",
            Estimator::Naive => "naive",
        }
    }
}

struct Settings {
    a: Direction64,
    a2: Direction64,
    b: Direction64,
    b2: Direction64,
}

fn fmt_dir(d: &Direction64) -> String {
    format!("{},{},{}", d.x(), d.y(), d.z())
}

fn settings(c: &Common, warnings: &mut Vec<String>) -> Result<Settings, CliError> {
    let mut take = |flag: &str, angle, vector: &Option<String>, default| {
        let ParsedDirection { direction, warned } =
            resolve(flag, angle, vector.as_deref(), default)?;
        if warned {
            warnings.push(format!(
                "warning: --{flag}-vec is more than 1e-6 off unit length; normalized"
            ));
        }
        Ok::<_, CliError>(direction)
    };
    Ok(Settings {
        a: take("a", c.a, &c.a_vec, 0.0)?,
        a2: take("a2", c.a2, &c.a2_vec, 90.0)?,
        b: take("b", c.b, &c.b_vec, 225.0)?,
        b2: take("b2", c.b2, &c.b2_vec, 135.0)?,
    })
}

#[derive(Serialize)]
struct TableRow {
    sigma: i8,
    left: &'static str,
    right: &'static str,
    scalar: f64,
    beta_x: f64,
    beta_y: f64,
    beta_z: f64,
}

#[derive(Serialize)]
struct MeasureRow {
    party: &'static str,
    lambda: i8,
    setting_x: f64,
    setting_y: f64,
    setting_z: f64,
    raw_scalar: f64,
    raw_x: f64,
    raw_y: f64,
    raw_z: f64,
    residual_norm: f64,
    classified: &'static str,
}

#[derive(Serialize)]
pub struct CorrelationRow {
    pub theta_deg: f64,
    pub scalar: f64,
    pub residual_x: f64,
    pub residual_y: f64,
    pub residual_z: f64,
    pub residual_norm: f64,
    pub reference_minus_cos: f64,
    pub n: u64,
    pub standard_error: f64,
}

impl CorrelationRow {
    fn new(theta_deg: f64, reference_minus_cos: f64, r: &CorrelationReport64) -> Self {
        Self {
            theta_deg,
            scalar: r.scalar_estimate,
            residual_x: r.bivector_residual[0],
            residual_y: r.bivector_residual[1],
            residual_z: r.bivector_residual[2],
            residual_norm: r.residual_norm,
            reference_minus_cos,
            n: r.n,
            standard_error: r.standard_error,
        }
    }
}

#[derive(Serialize)]
struct ChshRow {
    mode: &'static str,
    a_x: f64,
    a_y: f64,
    a_z: f64,
    a2_x: f64,
    a2_y: f64,
    a2_z: f64,
    b_x: f64,
    b_y: f64,
    b_z: f64,
    b2_x: f64,
    b2_y: f64,
    b2_z: f64,
    s: f64,
    paper_bound: f64,
    paper_bound_flipped: f64,
    tsirelson: f64,
    within_paper_bound: bool,
    within_tsirelson: bool,
}

impl ChshRow {
    fn new(mode: &'static str, cfg: &ChshConfig64, r: &ChshReport64) -> Self {
        let [a_x, a_y, a_z] = cfg.a.components();
        let [a2_x, a2_y, a2_z] = cfg.a_prime.components();
        let [b_x, b_y, b_z] = cfg.b.components();
        let [b2_x, b2_y, b2_z] = cfg.b_prime.components();
        Self {
            mode,
            a_x,
            a_y,
            a_z,
            a2_x,
            a2_y,
            a2_z,
            b_x,
            b_y,
            b_z,
            b2_x,
            b2_y,
            b2_z,
            s: r.s,
            paper_bound: r.paper_bound,
            paper_bound_flipped: r.paper_bound_flipped,
            tsirelson: r.tsirelson,
            within_paper_bound: r.within_paper_bound,
            within_tsirelson: r.within_tsirelson,
        }
    }
}

#[derive(Serialize)]
struct AuditRow {
    party: &'static str,
    setting_index: usize,
    setting_x: f64,
    setting_y: f64,
    setting_z: f64,
    mean: f64,
    standard_error: f64,
    n: u64,
    non_dichotomic: u64,
    mismatching_trials: u64,
}

fn correlate_with(
    est: Estimator,
    a: &Direction64,
    b: &Direction64,
    n: u64,
    seed: u64,
    convention: ProductConvention,
) -> Result<CorrelationReport64, CliError> {
    Ok(match est {
        Estimator::Exact => correlation_exact(a, b, convention),
        Estimator::MonteCarlo => correlation_mc(a, b, n, seed, convention)?,
        Estimator::Naive => naive_correlation(a, b, n, seed)?,
    })
}

/// Validates the configuration and produces the rendered output.
pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let c = &cli.common;
    let convention: ProductConvention = c.convention.into();
    let est = Estimator::from_flags(c);
    let mut warnings = Vec::new();

    if c.n == 0 {
        return Err(CliError::Validation("--n must be at least 1".into()));
    }
    if !(c.step > 0.0 && c.step <= 90.0) {
        return Err(CliError::Validation(format!(
            "--step {} outside (0, 90]",
            c.step
        )));
    }
    let s = settings(c, &mut warnings)?;

    let mut parameters = BTreeMap::new();
    let meta = |params: BTreeMap<String, String>, estimator: &'static str| Meta {
        tool: "epr-ga",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cli.command.name(),
        convention: convention.label(),
        estimator,
        seed: c.seed,
        n: c.n,
        rng: RNG_ALGORITHM,
        parameters: params,
    };

    let document = match cli.command {
        Command::Table => {
            let signs: &[(i8, CrossSign)] = match convention {
                ProductConvention::FixedBasis => &[(1, CrossSign::Plus)],
                ProductConvention::LambdaStructure => {
                    &[(1, CrossSign::Plus), (-1, CrossSign::Minus)]
                }
            };
            let mut rows = Vec::new();
            for &(sg, sigma) in signs {
                for j in Axis::ALL {
                    for k in Axis::ALL {
                        let p = geometric_product(
                            &Multivector64::basis(j),
                            &Multivector64::basis(k),
                            sigma,
                        );
                        let b = p.bivector_part();
                        rows.push(TableRow {
                            sigma: sg,
                            left: j.label(),
                            right: k.label(),
                            scalar: p.scalar_part() + 0.0,
                            beta_x: b[0] + 0.0,
                            beta_y: b[1] + 0.0,
                            beta_z: b[2] + 0.0,
                        });
                    }
                }
            }
            render(&meta(parameters, "none"), &rows, c.format)?
        }
        Command::Measure => {
            parameters.insert("a".into(), fmt_dir(&s.a));
            parameters.insert("b".into(), fmt_dir(&s.b));
            let mut rows = Vec::new();
            for lambda in HiddenVariable::BOTH {
                for (party, d, o) in [
                    ("alice", &s.a, measure_alice(&s.a, lambda)),
                    ("bob", &s.b, measure_bob(&s.b, lambda)),
                ] {
                    let raw = o.raw.bivector_part();
                    rows.push(MeasureRow {
                        party,
                        lambda: lambda.sign(),
                        setting_x: d.x(),
                        setting_y: d.y(),
                        setting_z: d.z(),
                        raw_scalar: o.raw.scalar_part(),
                        raw_x: raw[0],
                        raw_y: raw[1],
                        raw_z: raw[2],
                        residual_norm: o.residual_norm,
                        classified: o.classified.label(),
                    });
                }
            }
            render(&meta(parameters, "none"), &rows, c.format)?
        }
        Command::Correlate => {
            parameters.insert("a".into(), fmt_dir(&s.a));
            parameters.insert("b".into(), fmt_dir(&s.b));
            let r = correlate_with(est, &s.a, &s.b, c.n, c.seed, convention)?;
            let row = CorrelationRow::new(s.a.angle_to_deg(&s.b), r.target, &r);
            render(&meta(parameters, est.label()), &[row], c.format)?
        }
        Command::Sweep => {
            let normal = parse_vector("normal-vec", &c.normal_vec)?;
            if normal.warned {
                warnings.push("warning: --normal-vec has been normalized".into());
            }
            parameters.insert("normal".into(), fmt_dir(&normal.direction));
            parameters.insert("step_deg".into(), c.step.to_string());
            let points = sweep_curve(&normal.direction, c.step, |a, b| {
                correlate_with(est, a, b, c.n, c.seed, convention)
            })?;
            let rows = points
                .into_iter()
                .map(|p| Ok(CorrelationRow::new(p.angle_deg, p.reference, &p.value?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            render(&meta(parameters, est.label()), &rows, c.format)?
        }
        Command::Chsh => {
            let cfg = ChshConfig64 {
                a: s.a,
                a_prime: s.a2,
                b: s.b,
                b_prime: s.b2,
            };
            let failure = std::cell::RefCell::new(None);
            let e = |x: &Direction64, y: &Direction64| match correlate_with(
                est, x, y, c.n, c.seed, convention,
            ) {
                Ok(r) => r.scalar_estimate,
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    f64::NAN
                }
            };
            let mut rows = vec![ChshRow::new("given", &cfg, &chsh_report(e, &cfg))];
            if let Some(err) = failure.into_inner() {
                return Err(err);
            }
            if c.maximize {
                // the search evaluates millions of correlators: only
                // trial-count independent estimators are allowed
                let opts = SearchOptions {
                    resolution_deg: c.resolution,
                    refine_iters: c.refine,
                    tie_alice: false,
                };
                let best = match est {
                    Estimator::Exact => maximize_s_with(
                        |x: &Direction64, y: &Direction64| {
                            correlation_exact(x, y, convention).scalar_estimate
                        },
                        &opts,
                    )?,
                    Estimator::Naive => {
                        let nan_seen = std::sync::atomic::AtomicBool::new(false);
                        let best = maximize_s_with(
                            |x: &Direction64, y: &Direction64| match naive_correlation(
                                x, y, 1, c.seed,
                            ) {
                                Ok(r) => r.scalar_estimate,
                                Err(_) => {
                                    nan_seen.store(true, std::sync::atomic::Ordering::Relaxed);
                                    f64::NAN
                                }
                            },
                            &opts,
                        )?;
                        if nan_seen.into_inner() {
                            return Err(CliError::Numerical(epr_ga::Error::NonDichotomic {
                                scalar: f64::NAN,
                                residual_norm: f64::NAN,
                            }));
                        }
                        best
                    }
                    Estimator::MonteCarlo => {
                        return Err(CliError::Validation(
                            "--maximize needs --exact or --naive".into(),
                        ))
                    }
                };
                parameters.insert("resolution_deg".into(), c.resolution.to_string());
                parameters.insert("refine_passes".into(), c.refine.to_string());
                parameters.insert(
                    "maximized_angles_deg".into(),
                    best.angles_deg.map(|t| t.to_string()).join(","),
                );
                let report = chsh_report(
                    |x: &Direction64, y: &Direction64| {
                        correlate_with(est, x, y, 1, c.seed, convention)
                            .map(|r| r.scalar_estimate)
                            .unwrap_or(f64::NAN)
                    },
                    &best.config,
                );
                rows.push(ChshRow::new("maximized", &best.config, &report));
            }
            render(&meta(parameters, est.label()), &rows, c.format)?
        }
        Command::Audit => {
            let alice = [s.a, s.a2];
            let bob = [s.b, s.b2];
            let r = locality_audit(&alice, &bob, c.n, c.seed)?;
            let mut rows = Vec::new();
            for (party, marginals, mismatching_trials) in [
                ("alice", &r.alice, r.alice_mismatches),
                ("bob", &r.bob, r.bob_mismatches),
            ] {
                for (i, m) in marginals.iter().enumerate() {
                    rows.push(AuditRow {
                        party,
                        setting_index: i,
                        setting_x: m.setting.x(),
                        setting_y: m.setting.y(),
                        setting_z: m.setting.z(),
                        mean: m.mean,
                        standard_error: m.standard_error,
                        n: r.trials,
                        non_dichotomic: m.non_dichotomic,
                        mismatching_trials,
                    });
                }
            }
            render(&meta(parameters, "monte-carlo"), &rows, c.format)?
        }
    };

    Ok(Rendered { document, warnings })
}
