mod input;
mod verify;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lelong_core::sampling::format_sig9;
use lelong_core::{
    cor62_probe, estimate_type, growth_curve, mass_lower_bound, mixed_mass, greenify_directional,
    greenify_weights, Error, Evaluator, GermEvaluator, MapEvaluator, MassBound, ProbeConfig, SamplerConfig,
    TropicalGerm, WeightFamily,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    /// Some rows of a verification table failed.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_input_error() || matches!(e, Error::InvalidConfig(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "lelong", version, about = "Exact singularity invariants of toric plurisubharmonic germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Out {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid of levels r, as `a:b` or a comma list (probe: shell indices `first:last`)
    #[arg(long, allow_hyphen_values = true)]
    shells: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct Target {
    /// Germ whose growth is sampled
    #[arg(long, conflicts_with = "map", required_unless_present = "map")]
    u: Option<String>,
    /// Polynomial map whose log-norm is sampled
    #[arg(long)]
    map: Option<String>,
    /// Reference weight; defaults to log|z|
    #[arg(long)]
    phi: Option<String>,
    /// Half-width factor of the sampling box
    #[arg(long)]
    box_depth: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Relative type of u with respect to the weight phi
    Type {
        #[arg(long)]
        u: String,
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        out: Out,
    },
    /// Residual Monge-Ampere mass
    Mass {
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        out: Out,
    },
    /// Mixed mass of n convenient germs (repeat --u)
    Mixed {
        #[arg(long, required = true)]
        u: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Lelong-Demailly number of u against phi
    Demailly {
        #[arg(long)]
        u: String,
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        out: Out,
    },
    /// Lelong number, mass and Lojasiewicz exponent
    Profile {
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        out: Out,
    },
    /// Comparison of two weights
    Order {
        #[arg(long)]
        u: String,
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        out: Out,
    },
    /// Newton number of a polynomial map at its center
    Newton {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        out: Out,
    },
    /// Indicator germ of a polynomial map
    Indicator {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        out: Out,
    },
    /// Largest toric minorant with the same data on a family
    Greenify {
        #[arg(long)]
        u: String,
        #[arg(long)]
        family: String,
        #[command(flatten)]
        out: Out,
    },
    /// Lower bound on the residual mass from directional data
    Bound {
        #[arg(long)]
        u: String,
        #[arg(long)]
        family: String,
        #[command(flatten)]
        out: Out,
    },
    /// Sampled estimate of the relative type
    Estimate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
    /// Sampled growth curve
    Curve {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
    /// Heuristic comparison of log|f| with its indicator near the center
    Probe {
        #[arg(long)]
        map: String,
        #[arg(long)]
        drift_margin: Option<f64>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
    /// Recompute the reference values and print a pass/fail table
    VerifyPaper {
        /// Also run the sampled rows
        #[arg(long)]
        sampled: bool,
        /// JSON object of row id to expected value, replacing the built-in values
        #[arg(long)]
        expected: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
}

fn scalar(value: impl ToString, format: Format) -> String {
    let v = value.to_string();
    match format {
        Format::Text => format!("{v}\n"),
        Format::Json => format!("{}\n", json!({ "value": v })),
        Format::Csv => format!("value\n{v}\n"),
    }
}

fn no_csv(format: Format, command: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("--format csv is not available for `{command}`")));
    }
    Ok(())
}

fn to_json(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    format!("{}\n", serde_json::to_string_pretty(&round_floats(v)).expect("valid json"))
}

/// Rounds every non-integer number to 9 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            format_sig9(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn germ_output(g: &TropicalGerm, format: Format, command: &str) -> Result<String, CliError> {
    no_csv(format, command)?;
    Ok(match format {
        Format::Json => to_json(g),
        _ => format!("{g}\n"),
    })
}

fn sampler_config(s: &Sampling, box_depth: Option<f64>) -> Result<SamplerConfig, CliError> {
    let mut cfg = SamplerConfig { seed: s.seed, ..SamplerConfig::default() };
    if let Some(shells) = &s.shells {
        cfg.r_grid = input::grid(shells)?;
    }
    if let Some(n) = s.samples {
        cfg.samples_per_shell = n;
    }
    if let Some(c) = box_depth {
        cfg.box_depth = c;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn evaluator(t: &Target) -> Result<(Box<dyn Evaluator>, TropicalGerm), CliError> {
    let eval: Box<dyn Evaluator> = match (&t.u, &t.map) {
        (Some(u), _) => Box::new(GermEvaluator::new(&input::germ(u)?)),
        (None, Some(m)) => {
            let spec = input::map(m)?;
            Box::new(MapEvaluator::new(&spec.map.recenter(&spec.zeta)?))
        }
        (None, None) => return Err(CliError::Usage("one of --u or --map is required".into())),
    };
    let phi = match &t.phi {
        Some(p) => input::germ(p)?,
        None => TropicalGerm::log_norm(eval.dim()),
    };
    Ok((eval, phi))
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Type { u, phi, out } => {
            Ok(scalar(input::germ(&u)?.relative_type(&input::germ(&phi)?)?, out.format))
        }
        Command::Mass { phi, out } => Ok(scalar(input::germ(&phi)?.residual_mass(), out.format)),
        Command::Mixed { u, out } => {
            let germs = u.iter().map(|g| input::germ(g)).collect::<Result<Vec<_>, _>>()?;
            Ok(scalar(mixed_mass(&germs)?, out.format))
        }
        Command::Demailly { u, phi, out } => {
            Ok(scalar(input::germ(&u)?.demailly_number(&input::germ(&phi)?)?, out.format))
        }
        Command::Profile { phi, out } => {
            let p = input::germ(&phi)?.weight_profile();
            Ok(match out.format {
                Format::Text => format!("{p}\n"),
                Format::Json => to_json(&p),
                Format::Csv => format!(
                    "nu,tau,alpha,weight,convenient\n{},{},{},{},{}\n",
                    p.lelong, p.mass, p.lojasiewicz, p.is_weight, p.is_convenient
                ),
            })
        }
        Command::Order { u, phi, out } => {
            Ok(scalar(input::germ(&u)?.weight_order(&input::germ(&phi)?)?, out.format))
        }
        Command::Newton { map, out } => {
            let spec = input::map(&map)?;
            match out.format {
                Format::Json => Ok(to_json(&spec.map.kouchnirenko_report(&spec.zeta)?)),
                f => Ok(scalar(spec.map.newton_number(&spec.zeta)?, f)),
            }
        }
        Command::Indicator { map, out } => {
            let spec = input::map(&map)?;
            germ_output(&spec.map.indicator(&spec.zeta)?, out.format, "indicator")
        }
        Command::Greenify { u, family, out } => {
            let u = input::germ(&u)?;
            let g = match input::family(&family)? {
                WeightFamily::Directions(a) => greenify_directional(&u, &a)?,
                family => greenify_weights(&u, &family)?,
            };
            germ_output(&g, out.format, "greenify")
        }
        Command::Bound { u, family, out } => {
            let WeightFamily::Directions(a) = input::family(&family)? else {
                return Err(CliError::Usage("bound needs a family of directions".into()));
            };
            let bound = mass_lower_bound(&input::germ(&u)?, &a)?;
            Ok(match (out.format, &bound) {
                (Format::Json, MassBound::Finite(q)) => format!("{}\n", json!({ "value": q.to_string() })),
                (Format::Json, MassBound::NoFiniteBound) => format!("{}\n", json!({ "value": null })),
                (f, b) => scalar(b, f),
            })
        }
        Command::Estimate { target, sampling, out } => {
            let (eval, phi) = evaluator(&target)?;
            let cfg = sampler_config(&sampling, target.box_depth)?;
            let est = estimate_type(eval.as_ref(), &phi, &cfg)?;
            let s = format_sig9;
            Ok(match out.format {
                Format::Json => to_json(&est),
                Format::Text => format!(
                    "sigma_hat {}\nstd_error {}\nfit_range {} {}\nresidual {}\nmonotonicity_violations {}\nmin_quotient {}\none_sided_ok {}\nnoise_band {}\n",
                    s(est.sigma_hat), s(est.std_error), s(est.fit_range.0), s(est.fit_range.1), s(est.residual),
                    est.monotonicity_violations, s(est.min_quotient), est.one_sided_ok, s(est.noise_band)
                ),
                Format::Csv => format!(
                    "sigma_hat,std_error,r_min,r_max,residual,monotonicity_violations,min_quotient,one_sided_ok,noise_band\n{},{},{},{},{},{},{},{},{}\n",
                    s(est.sigma_hat), s(est.std_error), s(est.fit_range.0), s(est.fit_range.1), s(est.residual),
                    est.monotonicity_violations, s(est.min_quotient), est.one_sided_ok, s(est.noise_band)
                ),
            })
        }
        Command::Curve { target, sampling, out } => {
            let (eval, phi) = evaluator(&target)?;
            let cfg = sampler_config(&sampling, target.box_depth)?;
            let curve = growth_curve(eval.as_ref(), &phi, &cfg)?;
            Ok(match out.format {
                Format::Json => to_json(&curve),
                _ => curve.to_csv(),
            })
        }
        Command::Probe { map, drift_margin, sampling, out } => {
            let spec = input::map(&map)?;
            let mut cfg = ProbeConfig { seed: sampling.seed, ..ProbeConfig::default() };
            if let Some(shells) = &sampling.shells {
                (cfg.first_shell, cfg.last_shell) = input::shell_range(shells)?;
            }
            if let Some(n) = sampling.samples {
                cfg.samples_per_shell = n;
            }
            if let Some(m) = drift_margin {
                cfg.drift_margin = m;
            }
            let report = cor62_probe(&spec.map, &spec.zeta, &cfg)?;
            let s = format_sig9;
            Ok(match out.format {
                Format::Json => to_json(&report),
                Format::Text | Format::Csv => {
                    let mut text = String::new();
                    if out.format == Format::Text {
                        let _ = writeln!(text, "{}", report.label);
                        let _ = writeln!(text, "verdict {}", report.verdict);
                        let _ = writeln!(
                            text,
                            "window {} baseline {} drift_threshold {}",
                            s(report.window), s(report.baseline), s(report.drift_threshold)
                        );
                    }
                    text.push_str("shell,radius,raw_min,raw_max,max_abs,excess\n");
                    for sh in &report.shells {
                        let _ = writeln!(
                            text,
                            "{},{},{},{},{},{}",
                            sh.shell, s(sh.radius), s(sh.raw_min), s(sh.raw_max), s(sh.max_abs), s(sh.excess)
                        );
                    }
                    text
                }
            })
        }
        Command::VerifyPaper { sampled, expected, sampling, out } => {
            let overrides: BTreeMap<String, String> = match &expected {
                Some(arg) => serde_json::from_str(&input::load(arg)?).map_err(|e| Error::Json(e.to_string()))?,
                None => BTreeMap::new(),
            };
            let cfg = if sampled { Some(sampler_config(&sampling, None)?) } else { None };
            let run = verify::run(cfg.as_ref(), &overrides)?;
            eprintln!("exact rows computed in {:.3} s", run.exact_seconds);
            let text = match out.format {
                Format::Json => to_json(&run.rows),
                Format::Csv => {
                    let mut t = String::from("id,kind,expected,computed,status\n");
                    for r in &run.rows {
                        let _ = writeln!(t, "{},{},{},{},{}", r.id, kind(r), r.expected, r.computed, status(r));
                    }
                    t
                }
                Format::Text => {
                    let mut t = String::new();
                    for r in &run.rows {
                        let _ = writeln!(
                            t,
                            "{:<4} {:<7} {:<22} expected {:<12} computed {:<12} {}",
                            status(r), kind(r), r.id, r.expected, r.computed, r.claim
                        );
                    }
                    let failed = run.rows.iter().filter(|r| !r.pass).count();
                    let _ = writeln!(t, "{} rows, {} failed", run.rows.len(), failed);
                    t
                }
            };
            if run.rows.iter().all(|r| r.pass) {
                Ok(text)
            } else {
                Err(CliError::Failed(text))
            }
        }
    }
}

fn kind(r: &verify::Row) -> &'static str {
    match r.kind {
        verify::RowKind::Exact => "exact",
        verify::RowKind::Sampled => "sampled",
    }
}

fn status(r: &verify::Row) -> &'static str {
    if r.pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli.command)) {
        Ok(Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            let code = e.exit_code();
            match e {
                CliError::Failed(text) => print!("{text}"),
                CliError::Usage(msg) => eprintln!("error: Usage: {msg}"),
                CliError::Core(err) => eprintln!("error: {err}"),
            }
            ExitCode::from(code)
        }
        Err(_) => {
            eprintln!("error: Internal: invariant breach");
            ExitCode::from(4)
        }
    }
}
