//! Single-column numeric CSV ingestion: optional header, values
//! separated by newlines or commas, locale-independent decimal point.

pub fn read_single_column(raw: &str, source: &str) -> Result<Vec<f64>, String> {
    let lines: Vec<&str> = raw
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(format!("{source}: no data"));
    }
    let rows: Vec<Vec<&str>> = lines
        .iter()
        .map(|l| {
            l.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect()
        })
        .collect();
    // a multi-line file must have one value per line; a single line may
    // carry the whole column comma-separated
    if rows.len() > 1 {
        if let Some(bad) = rows.iter().position(|r| r.len() > 1) {
            return Err(format!(
                "{source}: expected a single column, line {} has {} fields",
                bad + 1,
                rows[bad].len()
            ));
        }
    }
    let mut tokens: Vec<&str> = rows.into_iter().flatten().collect();
    // optional header: drop a leading non-numeric token
    if tokens
        .first()
        .map(|t| t.parse::<f64>().is_err())
        .unwrap_or(false)
    {
        tokens.remove(0);
    }
    let mut values = Vec::with_capacity(tokens.len());
    for t in tokens {
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => return Err(format!("{source}: `{t}` is not a finite number")),
        }
    }
    if values.is_empty() {
        return Err(format!("{source}: no numeric values"));
    }
    Ok(values)
}
