//! Parameter sweeps: one run per grid point, flattened into rows.

use serde_json::{Map, Value};

use crate::commands::{dispatch, Ctx, Outcome};
use crate::config::{Command, ExperimentConfig, RandomSpec, Sweep};
use crate::error::CliError;
use crate::report::Check;

type Result<T> = std::result::Result<T, CliError>;

/// Column order for `random-avg` sweeps.
pub const RANDOM_AVG_COLUMNS: [&str; 10] = [
    "d_L", "d_A", "d_S", "samples", "seed", "quantity", "mean", "stderr", "analytic", "z_score",
];

const DIMENSION_AXES: [&str; 3] = ["d_L", "d_A", "d_S"];

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: String,
    pub columns: Vec<String>,
    /// Cells already rendered as text.
    pub rows: Vec<Vec<String>>,
    pub points: Vec<Value>,
    pub checks: Vec<Check>,
}

pub fn run_sweep(command: Command, cfg: &ExperimentConfig, sweep: &Sweep, ctx: &Ctx) -> Result<SweepResult> {
    if sweep.values.is_empty() {
        return Err(CliError::Input("sweep grid is empty".into()));
    }
    if matches!(command, Command::Verify | Command::HaarCheck) {
        return Err(CliError::Input(format!(
            "`{}` does not support sweeps",
            command.name()
        )));
    }
    let mut points = Vec::new();
    let mut checks = Vec::new();
    for &value in &sweep.values {
        let point_cfg = with_axis(cfg, command, &sweep.axis, value)?;
        let Outcome {
            results,
            checks: point_checks,
        } = dispatch(command, &point_cfg, ctx)?;
        let label = format!("[{} = {}]", sweep.axis, render_f64(value));
        checks.extend(point_checks.into_iter().map(|mut c| {
            c.name = format!("{label} {}", c.name);
            c
        }));
        points.push(point_value(&sweep.axis, value, command, results));
    }
    let columns = columns(command, &sweep.axis, &points);
    let rows = points
        .iter()
        .map(|p| {
            columns
                .iter()
                .map(|col| p.get(col).map(render).unwrap_or_default())
                .collect()
        })
        .collect();
    Ok(SweepResult {
        axis: sweep.axis.clone(),
        columns,
        rows,
        points,
        checks,
    })
}

fn point_value(axis: &str, value: f64, command: Command, results: Value) -> Value {
    let mut flat = Map::new();
    if !(command == Command::RandomAvg && DIMENSION_AXES.contains(&axis)) {
        flat.insert(axis.to_string(), Value::from(value));
    }
    flatten("", &results, &mut flat);
    Value::Object(flat)
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(_) => {}
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn columns(command: Command, axis: &str, points: &[Value]) -> Vec<String> {
    if command == Command::RandomAvg {
        let mut cols: Vec<String> = RANDOM_AVG_COLUMNS.iter().map(|s| s.to_string()).collect();
        if !DIMENSION_AXES.contains(&axis) {
            cols.insert(0, axis.to_string());
        }
        return cols;
    }
    let mut cols = vec![axis.to_string()];
    if let Some(Value::Object(first)) = points.first() {
        cols.extend(first.keys().filter(|k| k.as_str() != axis).cloned());
    }
    cols
}

/// Shortest round-trip decimal for floats, plain text otherwise.
fn render(v: &Value) -> String {
    match v {
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (_, Some(i)) => i.to_string(),
            _ => render_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render_f64(x: f64) -> String {
    format!("{x:?}")
}

/// The config with `axis` set to `value`.
fn with_axis(cfg: &ExperimentConfig, command: Command, axis: &str, value: f64) -> Result<ExperimentConfig> {
    let mut out = cfg.clone();
    if DIMENSION_AXES.contains(&axis) {
        if command != Command::RandomAvg {
            return Err(CliError::Input(format!(
                "sweep axis `{axis}` is a dimension; only random-avg sweeps dimensions"
            )));
        }
        if value < 1.0 || value.fract() != 0.0 {
            return Err(CliError::Input(format!(
                "sweep axis `{axis}` needs positive integers, got {value}"
            )));
        }
        let v = value as usize;
        let spec: &mut RandomSpec = out
            .random
            .as_mut()
            .ok_or_else(|| CliError::Input("missing field `random` in config".into()))?;
        match axis {
            "d_L" => spec.d_l = Some(v),
            "d_A" => spec.d_a = Some(v),
            _ => {
                let d_l = spec
                    .d_l
                    .ok_or_else(|| CliError::Input("sweeping `d_S` needs `random.d_L`".into()))?;
                if !v.is_multiple_of(d_l) {
                    return Err(CliError::Input(format!(
                        "sweep value d_S = {v} is not a multiple of d_L = {d_l}"
                    )));
                }
                spec.d_a = Some(v / d_l);
            }
        }
        return Ok(out);
    }
    let mut hits = 0;
    for slot in [&mut out.noise, &mut out.channel, &mut out.encoding] {
        if let Some(v) = slot.as_mut() {
            hits += set_param(v, axis, value)?;
        }
    }
    if hits == 0 {
        return Err(CliError::Input(format!(
            "sweep axis `{axis}` is neither a dimension (d_L, d_A, d_S) nor a parameter of a builtin channel in the config"
        )));
    }
    Ok(out)
}

/// Sets `params[axis]` in every builtin below `v`; returns how many were set.
fn set_param(v: &mut Value, axis: &str, value: f64) -> Result<usize> {
    match v {
        Value::Object(obj) => {
            let mut hits = 0;
            if obj.contains_key("builtin") {
                if let Some(Value::Object(params)) = obj.get_mut("params") {
                    if let Some(slot) = params.get_mut(axis) {
                        if !slot.is_number() {
                            return Err(CliError::Input(format!(
                                "sweep axis `{axis}` is not a scalar parameter"
                            )));
                        }
                        *slot = Value::from(value);
                        hits += 1;
                    }
                }
            }
            for (k, child) in obj.iter_mut() {
                if k != "params" {
                    hits += set_param(child, axis, value)?;
                }
            }
            Ok(hits)
        }
        Value::Array(items) => {
            let mut hits = 0;
            for item in items {
                hits += set_param(item, axis, value)?;
            }
            Ok(hits)
        }
        _ => Ok(0),
    }
}

/// CSV text with a header row.
pub fn to_csv(result: &SweepResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    w.write_record(&result.columns).map_err(io)?;
    for row in &result.rows {
        w.write_record(row).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn params_are_set_recursively() {
        let mut v = json!({"compose": [
            {"builtin": "dephasing", "params": {"p": 0.1}},
            {"builtin": "single_site", "params": {"site": 0, "n_qubits": 2},
             "inner": {"builtin": "dephasing", "params": {"p": 0.2}}}
        ]});
        assert_eq!(set_param(&mut v, "p", 0.5).unwrap(), 2);
        assert_eq!(v["compose"][0]["params"]["p"], json!(0.5));
        assert_eq!(v["compose"][1]["inner"]["params"]["p"], json!(0.5));
        assert_eq!(set_param(&mut v, "gamma", 0.5).unwrap(), 0);
    }

    #[test]
    fn floats_render_round_trip() {
        for x in [0.1, 1e-300, 2.0 / 3.0, 12345.678] {
            assert_eq!(render_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(render(&json!(7)), "7");
    }
}
