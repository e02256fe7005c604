//! Parsing of level and value lists: inline comma-separated literals or
//! `@path` files with one value per line. Errors carry the 1-based token or
//! line position.

use boltzlab::maxent::EnergyLevels;

use crate::CliError;

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    if let Some(path) = text.strip_prefix('@') {
        let content = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {what} file {path}: {e}")))?;
        let mut values = Vec::new();
        for (lineno, line) in content.lines().enumerate() {
            let token = line.trim();
            if token.is_empty() {
                continue;
            }
            let value: f64 = token.parse().map_err(|_| {
                CliError::Usage(format!(
                    "invalid {what} in {path} line {}: `{token}` is not a number",
                    lineno + 1
                ))
            })?;
            values.push(value);
        }
        if values.is_empty() {
            return Err(CliError::Usage(format!(
                "{what} file {path} holds no values"
            )));
        }
        Ok(values)
    } else {
        let mut values = Vec::new();
        for (pos, token) in text.split(',').enumerate() {
            let token = token.trim();
            if token.is_empty() {
                return Err(CliError::Usage(format!(
                    "empty {what} entry at position {}",
                    pos + 1
                )));
            }
            let value: f64 = token.parse().map_err(|_| {
                CliError::Usage(format!(
                    "invalid {what} at position {}: `{token}` is not a number",
                    pos + 1
                ))
            })?;
            values.push(value);
        }
        Ok(values)
    }
}

/// Parse, validate, and sort energy levels from `"1,2,3"` or `"@file"`.
pub fn parse_levels(text: &str) -> Result<EnergyLevels, CliError> {
    let values = parse_numbers(text, "energy")?;
    for (pos, &value) in values.iter().enumerate() {
        if value < 0.0 {
            return Err(CliError::Usage(format!(
                "invalid energy at position {}: {value} is negative",
                pos + 1
            )));
        }
    }
    EnergyLevels::new(values).map_err(CliError::from)
}

/// Parse occupation/probability values; the domain is validated later by
/// the distribution kind.
pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    parse_numbers(text, "value")
}
