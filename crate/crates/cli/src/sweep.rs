//! Parameter sweeps: `name=v1,v2,...` or `name=start:step:end`, fanned out
//! over threads, one output file per value.

use crate::config::{RunConfig, UsageError};
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub values: Vec<f64>,
}

const SWEEPABLE: &[&str] = &["omega", "gamma", "g", "epsilon", "a", "b", "z1_0", "t_max"];

pub fn parse_sweep(spec: &str) -> Result<SweepSpec, UsageError> {
    let (param, rest) = spec
        .split_once('=')
        .ok_or_else(|| UsageError(format!("sweep spec `{spec}`: expected name=values")))?;
    let param = param.trim().to_string();
    if !SWEEPABLE.contains(&param.as_str()) {
        return Err(UsageError(format!(
            "sweep parameter `{param}` not supported (one of {SWEEPABLE:?})"
        )));
    }
    let bad = |what: &str| UsageError(format!("sweep spec `{spec}`: {what}"));
    let values = if rest.contains(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range form is start:step:end"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| bad("bad step"))?;
        let end: f64 = parts[2].trim().parse().map_err(|_| bad("bad end"))?;
        if step == 0.0 || (end - start) * step < 0.0 {
            return Err(bad("step must advance from start toward end"));
        }
        let n = ((end - start) / step).round() as usize;
        (0..=n).map(|i| start + step * i as f64).collect()
    } else {
        rest.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad("bad value")))
            .collect::<Result<Vec<f64>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok(SweepSpec { param, values })
}

pub fn apply(config: &RunConfig, param: &str, value: f64) -> RunConfig {
    let mut c = config.clone();
    match param {
        "omega" => c.omega = value,
        "gamma" => c.gamma = value,
        "g" => c.g = value,
        "epsilon" => c.epsilon = value,
        "a" => c.a = value,
        "b" => c.b = value,
        "z1_0" => c.z1_0 = value,
        "t_max" => c.t_max = value,
        _ => unreachable!("validated in parse_sweep"),
    }
    c
}

/// Per-value output path: `<stem>_<param>_<value>.<ext>`.
pub fn output_path(base: &PathBuf, param: &str, value: f64) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    let value_tag = format!("{value}").replace('-', "m").replace('.', "p");
    base.with_file_name(format!("{stem}_{param}_{value_tag}.{ext}"))
}
