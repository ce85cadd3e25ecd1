//! Parameter grids: `start:stop:count` or a comma-separated list.

use crate::error::CliError;

/// Parses a grid. `allow_inf` admits the token `inf` in lists.
pub fn parse_grid(name: &str, text: &str, allow_inf: bool) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::Input(format!("--{name} {text:?}: {msg}"));
    let text = text.trim();
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let [start, stop, count] = parts[..] else {
            return Err(bad("a range needs the form start:stop:count".into()));
        };
        let start = number(start, false).map_err(&bad)?;
        let stop = number(stop, false).map_err(&bad)?;
        let count: usize = count.parse().map_err(|_| bad(format!("count {count:?} is not a positive integer")))?;
        match count {
            0 => return Err(bad("a range needs at least one point".into())),
            1 => vec![start],
            n => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        text.split(',').map(|t| number(t.trim(), allow_inf)).collect::<Result<Vec<_>, _>>().map_err(&bad)?
    };
    if values.is_empty() {
        return Err(bad("grid is empty".into()));
    }
    let rising = values.windows(2).all(|w| w[0] < w[1]);
    let falling = values.windows(2).all(|w| w[0] > w[1]);
    if !rising && !falling {
        return Err(bad("grid must be strictly monotone".into()));
    }
    Ok(values)
}

/// A grid that must hold exactly one value.
pub fn parse_single(name: &str, text: &str, allow_inf: bool) -> Result<f64, CliError> {
    match parse_grid(name, text, allow_inf)?[..] {
        [v] => Ok(v),
        _ => Err(CliError::Input(format!("--{name} takes a single value here, got {text:?}"))),
    }
}

fn number(t: &str, allow_inf: bool) -> Result<f64, String> {
    if allow_inf && matches!(t, "inf" | "+inf" | "infinity") {
        return Ok(f64::INFINITY);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{t:?} is not a finite number")),
    }
}
