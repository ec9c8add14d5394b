//! One function per subcommand, each producing results and checks.

use qeccov_core::channel::KrausChannel;
use qeccov_core::covariance::{covariance_check, hks_check, noncovariance, tradeoff};
use qeccov_core::haar::{
    first_factor_dephasing, mc_average, moment_check, MomentItem, Quantity, SeededEnsemble,
};
use qeccov_core::io::{parse_channel, parse_symmetry, Symmetry};
use qeccov_core::linalg::{c, identity, max_abs};
use qeccov_core::qec::{infidelity, knill_laflamme, CodeNoisePair};
use qeccov_core::skew::Normalization;
use qeccov_core::tol::Tolerances;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig, QuantityKind};
use crate::error::CliError;
use crate::report::Check;
use crate::suite::Suite;

type Result<T> = std::result::Result<T, CliError>;

pub const DEFAULT_MC_SAMPLES: usize = 2000;
pub const DEFAULT_MOMENT_SAMPLES: usize = 10_000;

/// Run-wide settings derived from the config, the command line and the environment.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub tol: Tolerances,
    pub scale: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
}

pub fn dispatch(command: Command, cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    match command {
        Command::Verify => verify(ctx),
        Command::Infidelity => infidelity_cmd(cfg, ctx),
        Command::Noncovariance => noncovariance_cmd(cfg, ctx),
        Command::Tradeoff => tradeoff_cmd(cfg, ctx),
        Command::RandomAvg => random_avg(cfg, ctx),
        Command::HaarCheck => haar_check(cfg, ctx),
    }
}

fn required<'a>(v: &'a Option<Value>, name: &str) -> Result<&'a Value> {
    v.as_ref()
        .ok_or_else(|| CliError::Input(format!("missing field `{name}` in config")))
}

fn channel_at(cfg_value: &Option<Value>, name: &str) -> Result<KrausChannel> {
    Ok(parse_channel(required(cfg_value, name)?, &format!("$.{name}"))?)
}

fn symmetry(cfg: &ExperimentConfig) -> Result<Symmetry> {
    Ok(parse_symmetry(
        required(&cfg.symmetry, "symmetry")?,
        "$.symmetry",
    )?)
}

fn square_noise(noise: &KrausChannel) -> Result<()> {
    if noise.d_in() != noise.d_out() {
        return Err(CliError::Input(format!(
            "`noise` must map the physical space to itself: d_in = {} but d_out = {}",
            noise.d_in(),
            noise.d_out()
        )));
    }
    Ok(())
}

fn mismatch(a: &str, a_dims: String, b: &str, b_dims: String) -> CliError {
    CliError::Input(format!(
        "dimension mismatch between `{a}` ({a_dims}) and `{b}` ({b_dims})"
    ))
}

fn symmetry_dims(sym: &Symmetry) -> (usize, usize) {
    let basis = sym.as_ref();
    (basis.d_l(), basis.d_s())
}

fn infidelity_cmd(cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    let encoding = channel_at(&cfg.encoding, "encoding")?;
    let noise = channel_at(&cfg.noise, "noise")?;
    square_noise(&noise)?;
    if encoding.d_out() != noise.d_in() {
        return Err(mismatch(
            "encoding",
            format!("d_out = {}", encoding.d_out()),
            "noise",
            format!("d_in = {}", noise.d_in()),
        ));
    }
    let pair = CodeNoisePair::new(encoding, noise)?;
    let rep = infidelity(&pair)?;
    let s = ctx.scale;
    let chain = &rep.chain;
    let d_l = pair.d_l();
    let mixed = identity(d_l) / c(d_l as f64, 0.0);
    let rho_r_dev = max_abs(&(rep.complementary.rho_r.matrix() - mixed));
    let fid_excess = 1.0 - rep.complementary.fid_product - rep.epsilon;
    let mut checks = vec![
        Check::at_most(
            "closed-form epsilon = complementary oracle (relative)",
            rep.oracle_relative_error(),
            1e-9 * s,
        ),
        Check::at_most(
            "1 - F <= trace distance (excess)",
            chain.one_minus_fid - chain.half_1norm,
            1e-9 * s,
        ),
        Check::at_most(
            "trace distance <= sqrt(d_L d_E)/2 ||.||_2 (excess)",
            chain.half_1norm - chain.scaled_2norm,
            1e-9 * s,
        ),
        Check::at_most("rho_R = 1/d_L", rho_r_dev, 1e-12 * s),
        Check::at_most("1 - fid_product <= epsilon (excess)", fid_excess, 1e-9 * s),
    ];
    let mut results = json!({
        "d_L": d_l,
        "d_S": pair.d_s(),
        "d_E": pair.d_e(),
        "m": pair.m(),
        "n": pair.n(),
        "epsilon": rep.epsilon,
        "epsilon_sq": rep.terms.epsilon_sq,
        "term_o": rep.terms.term_o,
        "term_cross": rep.terms.term_cross,
        "radicand": rep.terms.radicand,
        "lower_bound_fe": rep.lower_bound_fe,
        "oracle_2norm": rep.oracle_2norm,
        "oracle_relative_error": rep.oracle_relative_error(),
        "fid_product": rep.complementary.fid_product,
        "chain": {
            "one_minus_fid": chain.one_minus_fid,
            "half_1norm": chain.half_1norm,
            "scaled_2norm": chain.scaled_2norm,
            "fid_le_trace": chain.fid_le_trace,
            "trace_le_frobenius": chain.trace_le_frobenius,
        },
    });
    if let Some(w) = pair.encoding().as_isometry() {
        let kl = knill_laflamme(&w.projector(), pair.noise(), ctx.tol.knill_laflamme)?;
        results["knill_laflamme"] = json!({"ok": kl.ok, "residual": kl.residual});
        if kl.ok {
            checks.push(Check::at_most(
                "Knill-Laflamme implies epsilon = 0",
                rep.epsilon,
                1e-9 * s,
            ));
        }
    }
    Ok(Outcome { results, checks })
}

fn normalization_json(n: Normalization) -> Value {
    match n {
        Normalization::Orthonormal => json!({"kind": "orthonormal"}),
        Normalization::Uniform { scale } => json!({"kind": "uniform", "trace_square": scale}),
        Normalization::Raw => json!({"kind": "raw"}),
    }
}

fn noncovariance_cmd(cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    let (channel, name) = if cfg.channel.is_some() {
        (channel_at(&cfg.channel, "channel")?, "channel")
    } else {
        (channel_at(&cfg.encoding, "channel")?, "encoding")
    };
    let sym = symmetry(cfg)?;
    let (d_l, d_s) = symmetry_dims(&sym);
    if (channel.d_in(), channel.d_out()) != (d_l, d_s) {
        return Err(mismatch(
            name,
            format!("d_in x d_out = {} x {}", channel.d_in(), channel.d_out()),
            "symmetry",
            format!("d_L x d_S = {d_l} x {d_s}"),
        ));
    }
    let n = noncovariance(&channel, &sym)?;
    let cc = covariance_check(&channel, &sym, ctx.tol.covariance)?;
    let basis = sym.as_ref().combined();
    let zero = n < 1e-9 * ctx.scale;
    let results = json!({
        "noncovariance": n,
        "covariant": cc.covariant,
        "max_commutator": cc.max_commutator,
        "label": basis.label(),
        "d_G": basis.len(),
        "normalization": normalization_json(basis.normalization()),
    });
    let checks = vec![Check::holds(
        "noncovariance vanishes exactly when covariance_check passes",
        zero == cc.covariant,
    )];
    Ok(Outcome { results, checks })
}

fn tradeoff_cmd(cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    let encoding = channel_at(&cfg.encoding, "encoding")?;
    let w = encoding.as_isometry().ok_or_else(|| {
        CliError::Input("`encoding` must be an isometry (a single Kraus operator) for tradeoff".into())
    })?;
    let noise = channel_at(&cfg.noise, "noise")?;
    square_noise(&noise)?;
    if w.d_s() != noise.d_in() {
        return Err(mismatch(
            "encoding",
            format!("d_S = {}", w.d_s()),
            "noise",
            format!("d_in = {}", noise.d_in()),
        ));
    }
    let sym = symmetry(cfg)?;
    let (d_l, d_s) = symmetry_dims(&sym);
    if (w.d_l(), w.d_s()) != (d_l, d_s) {
        return Err(mismatch(
            "encoding",
            format!("d_L x d_S = {} x {}", w.d_l(), w.d_s()),
            "symmetry",
            format!("d_L x d_S = {d_l} x {d_s}"),
        ));
    }
    let t = tradeoff(&w, &noise, &sym)?;
    let mut results = json!({
        "lhs": t.lhs,
        "rhs": t.rhs,
        "slack": t.slack,
        "epsilon": t.epsilon,
        "noncovariance": t.noncovariance,
    });
    if let Symmetry::U1(spec) = &sym {
        let hks = hks_check(&noise, spec.h_s(), ctx.tol.hks)?;
        results["hks"] = json!({"ok": hks.ok, "residual": hks.residual});
    }
    let checks = vec![Check::at_least("trade-off slack", t.slack, -1e-9 * ctx.scale)];
    Ok(Outcome { results, checks })
}

fn random_noise(v: &Value, d_s: usize) -> Result<KrausChannel> {
    if let Some(family) = v.get("family") {
        return match family.as_str() {
            Some("first_factor_dephasing") => Ok(first_factor_dephasing(d_s)?),
            _ => Err(CliError::Input(format!(
                "at `$.noise.family`: unknown family {family} (expected \"first_factor_dephasing\")"
            ))),
        };
    }
    Ok(parse_channel(v, "$.noise")?)
}

fn random_avg(cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    let spec = cfg
        .random
        .as_ref()
        .ok_or_else(|| CliError::Input("missing field `random` in config".into()))?;
    let samples = cfg.samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let (quantity, d_l, d_a) = match spec.quantity {
        QuantityKind::InfidelitySq => {
            let d_l = spec
                .d_l
                .ok_or_else(|| CliError::Input("missing field `random.d_L`".into()))?;
            let noise_v = required(&cfg.noise, "noise")?;
            let d_a = match spec.d_a {
                Some(d_a) => d_a,
                None if noise_v.get("family").is_some() => {
                    return Err(CliError::Input(
                        "`random.d_A` is required with a noise family".into(),
                    ))
                }
                None => {
                    let d_s = parse_channel(noise_v, "$.noise")?.d_in();
                    if d_l == 0 || d_s % d_l != 0 {
                        return Err(mismatch(
                            "random",
                            format!("d_L = {d_l}"),
                            "noise",
                            format!("d_in = {d_s}"),
                        ));
                    }
                    d_s / d_l
                }
            };
            let noise = random_noise(noise_v, d_l * d_a)?;
            square_noise(&noise)?;
            if noise.d_in() != d_l * d_a {
                return Err(mismatch(
                    "random",
                    format!("d_L d_A = {}", d_l * d_a),
                    "noise",
                    format!("d_in = {}", noise.d_in()),
                ));
            }
            (Quantity::InfidelitySq { noise }, d_l, d_a)
        }
        QuantityKind::Noncovariance => {
            let u1 = match symmetry(cfg)? {
                Symmetry::U1(u1) => u1,
                Symmetry::Product(_) => {
                    return Err(CliError::Input(
                        "random noncovariance averages need a U(1) symmetry {\"H_L\", \"H_S\"}".into(),
                    ))
                }
            };
            let (d_l, d_s) = (u1.h_l().dim(), u1.h_s().dim());
            if d_s % d_l != 0 {
                return Err(CliError::Input(format!(
                    "`symmetry`: d_S = {d_s} is not a multiple of d_L = {d_l}"
                )));
            }
            let d_a = d_s / d_l;
            for (key, declared, actual) in [("d_L", spec.d_l, d_l), ("d_A", spec.d_a, d_a)] {
                if let Some(declared) = declared {
                    if declared != actual {
                        return Err(mismatch(
                            "random",
                            format!("{key} = {declared}"),
                            "symmetry",
                            format!("{key} = {actual}"),
                        ));
                    }
                }
            }
            (Quantity::Noncovariance { spec: u1 }, d_l, d_a)
        }
    };
    let ens = SeededEnsemble::new(d_l, d_a, ctx.seed, samples)?;
    let est = mc_average(&quantity, &ens)?;
    let results = json!({
        "quantity": quantity.name(),
        "d_L": ens.d_l,
        "d_A": ens.d_a,
        "d_S": ens.d_s,
        "samples": ens.samples,
        "seed": ens.seed,
        "mean": est.mean,
        "stderr": est.stderr,
        "analytic": est.analytic,
        "z_score": est.z_score,
    });
    let checks = vec![Check::at_most(
        format!(
            "{} Monte Carlo matches the analytic average (|z|)",
            quantity.name()
        ),
        est.z_score.abs(),
        spec.sigmas * ctx.scale,
    )];
    Ok(Outcome { results, checks })
}

fn haar_check(cfg: &ExperimentConfig, ctx: &Ctx) -> Result<Outcome> {
    let spec = cfg.haar.clone().unwrap_or_default();
    if spec.dims.is_empty() {
        return Err(CliError::Input("`haar.dims` is empty".into()));
    }
    let samples = cfg.samples.unwrap_or(DEFAULT_MOMENT_SAMPLES);
    let sigmas = spec.sigmas * ctx.scale;
    let mut moments = Vec::new();
    let mut checks = Vec::new();
    for &d in &spec.dims {
        for item in MomentItem::ALL {
            let mc = moment_check(item, d, samples, ctx.seed, sigmas)?;
            let mut check = Check::at_most(format!("{} d = {d} (max |z|)", item.name()), mc.max_z, sigmas);
            check.passed = mc.passed;
            checks.push(check);
            moments.push(serde_json::to_value(&mc).map_err(|e| CliError::Input(e.to_string()))?);
        }
    }
    let results = json!({
        "samples": samples,
        "seed": ctx.seed,
        "sigmas": sigmas,
        "moments": moments,
    });
    Ok(Outcome { results, checks })
}

fn verify(ctx: &Ctx) -> Result<Outcome> {
    // Random U(1) generators are unnormalized on purpose; one warning each is noise.
    let level = log::max_level();
    log::set_max_level(level.min(log::LevelFilter::Error));
    let checks = Suite::new(ctx.seed, ctx.scale).run_all();
    log::set_max_level(level);
    let checks = checks?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let results = json!({
        "seed": ctx.seed,
        "invariants": checks.len(),
        "failed": failed,
    });
    Ok(Outcome { results, checks })
}

/// Looks up a dotted path such as `chain.half_1norm` in the results.
pub fn lookup<'a>(results: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(results, |v, key| v.get(key))
}

/// Checks for the config's `expect` list.
pub fn expectations(cfg: &ExperimentConfig, results: &Value, scale: f64) -> Result<Vec<Check>> {
    cfg.expect
        .iter()
        .map(|e| {
            let v = lookup(results, &e.field)
                .and_then(Value::as_f64)
                .ok_or_else(|| CliError::Input(format!("`expect`: no numeric result field `{}`", e.field)))?;
            Ok(Check::at_most(
                format!("{} = {} (deviation)", e.field, e.value),
                (v - e.value).abs(),
                e.tol * scale,
            ))
        })
        .collect()
}
