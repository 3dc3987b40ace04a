//! Probability lists as text.
//!
//! Two formats are accepted: a JSON array of numbers, or one decimal per line
//! where `#` starts a comment and blank lines are ignored.

use crate::error::Error;

pub fn parse_probabilities(text: &str) -> Result<Vec<f64>, Error> {
    let trimmed = text.trim_start();
    let values = if trimmed.starts_with('[') {
        serde_json::from_str::<Vec<f64>>(trimmed)
            .map_err(|e| Error::ProbParse(format!("invalid JSON array: {e}")))?
    } else {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let v: f64 = content
                .parse()
                .map_err(|_| Error::ProbParse(format!("line {}: not a number: '{content}'", lineno + 1)))?;
            values.push(v);
        }
        values
    };
    if values.is_empty() {
        return Err(Error::ProbParse("no probabilities found".to_string()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::ProbParse(format!("not a finite number: {bad}")));
    }
    Ok(values)
}
