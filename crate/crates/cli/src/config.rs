use std::fs;
use std::path::Path;

use domsearch::sasmo::{InitialMean, RunConfig};
use serde_json::Value;

use crate::args::SearchArgs;
use crate::error::{CliError, CliResult};

fn read_config_file(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let value: Value = if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    if !value.is_object() {
        return Err(CliError::Usage(format!(
            "{}: expected a table of settings",
            path.display()
        )));
    }
    Ok(value)
}

fn parse_mu0(s: &str) -> CliResult<InitialMean> {
    match s {
        "zero" => Ok(InitialMean::Zero),
        "box-center" => Ok(InitialMean::BoxCenter),
        coords => coords
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map(InitialMean::Point)
            .map_err(|_| CliError::Usage(format!("--mu0 `{s}` is not zero, box-center or a coordinate list"))),
    }
}

/// Effective configuration: built-in defaults, then the config file, then
/// flags. A problem must come from a flag or the file.
pub fn effective_config(args: &SearchArgs) -> CliResult<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let value = read_config_file(path)?;
            if value.get("problem").is_none() && args.problem.is_none() {
                return Err(CliError::Usage(
                    "no problem given (use --problem or `problem` in the config file)".into(),
                ));
            }
            serde_json::from_value::<RunConfig>(value)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => {
            if args.problem.is_none() {
                return Err(CliError::Usage("--problem is required".into()));
            }
            RunConfig::default()
        }
    };

    if let Some(v) = &args.problem {
        config.problem = v.clone();
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.n0 {
        config.n0 = v;
    }
    if let Some(v) = args.growth_exponent {
        config.growth_exponent = v;
    }
    if let Some(v) = args.rho {
        config.rho = v;
    }
    if let Some(v) = args.alpha {
        config.alpha = v;
    }
    if let Some(v) = args.threshold_bound {
        config.threshold_bound = v;
    }
    if let Some(v) = args.initial_threshold {
        config.initial_threshold = Some(v);
    }
    if let Some(v) = args.shrink_factor {
        config.shrink_factor = v;
    }
    if let Some(v) = args.threshold_rule {
        config.threshold_rule = v.into();
    }
    if let Some(v) = args.tmax {
        config.t_max = v;
    }
    if let Some(v) = args.sigma0 {
        config.sigma0_scale = v;
    }
    if let Some(v) = &args.mu0 {
        config.mu0 = parse_mu0(v)?;
    }
    config.validate()?;
    Ok(config)
}
