pub mod correlate;
pub mod diversity;
pub mod footprint;
pub mod metrics;
pub mod polstate;
pub mod stats;
pub mod synth;

use std::path::Path;

use anrecip_core::correlation::{CorrelationMap, MapSummary, MeanKind};
use anrecip_core::pattern::{invert_eis, resample, PowerConvention};
use anrecip_core::{Pattern, Region, SphericalGrid};
use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::cli::region_name;
use crate::fmt::g9;
use crate::io::read_pattern;
use crate::output::CsvText;

/// Reads a pattern and turns raw EIS into gain-proportional data.
pub fn load(path: &Path) -> Result<Pattern> {
    let p = read_pattern(path, None)?;
    if p.convention() == PowerConvention::EisRaw {
        log::info!("{}: inverting EIS", path.display());
        let (q, _) = invert_eis(&p).with_context(|| path.display().to_string())?;
        return Ok(q);
    }
    Ok(p)
}

/// Brings two patterns onto one grid: the first one's, or a fresh grid with
/// spacing `step` when given.
pub fn align(a: Pattern, b: Pattern, step: Option<f64>) -> Result<(Pattern, Pattern)> {
    let target = match step {
        Some(s) => SphericalGrid::new(s, s, a.grid().theta_max().min(b.grid().theta_max()))?,
        None => a.grid().clone(),
    };
    let fit = |p: Pattern| -> Result<Pattern> {
        if p.grid().same_nodes(&target) {
            Ok(p)
        } else {
            Ok(resample(&p, &target)?)
        }
    };
    Ok((fit(a)?, fit(b)?))
}

pub fn load_pair(ul: &Path, dl: &Path, step: Option<f64>) -> Result<(Pattern, Pattern)> {
    align(load(ul)?, load(dl)?, step)
}

pub fn path_str(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

/// Finite floats as JSON numbers, everything else as its `%.9g` text.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        g9(v).parse::<f64>().map_or(Value::Null, |x| json!(x))
    } else {
        Value::String(g9(v))
    }
}

pub fn map_csv(map: &CorrelationMap, extra: &[(&str, Vec<String>)]) -> String {
    let mut header = vec!["theta_c", "phi_c", "rho_abs", "rho_phase_deg", "truncated"];
    header.extend(extra.iter().map(|(h, _)| *h));
    let mut csv = CsvText::new(&header);
    for (i, n) in map.grid.nodes().enumerate() {
        let r = map.rho[i];
        let mut row = vec![
            g9(n.theta_deg),
            g9(n.phi_deg),
            g9(r.norm()),
            g9(r.im.atan2(r.re).to_degrees()),
            (map.truncated[i] as u8).to_string(),
        ];
        row.extend(extra.iter().map(|(_, v)| v[i].clone()));
        csv.row(row);
    }
    csv.into_string()
}

pub fn summaries(map: &CorrelationMap, regions: &[Region], mean: MeanKind) -> Result<Vec<MapSummary>> {
    regions
        .iter()
        .map(|r| map.summary(r, mean).map_err(Into::into))
        .collect()
}

pub fn summary_csv(rows: &[MapSummary]) -> String {
    let mut csv = CsvText::new(&[
        "region",
        "centers",
        "min",
        "mean",
        "high_minimum",
        "low_mean",
        "truncated",
    ]);
    for s in rows {
        csv.row([
            region_name(&s.region),
            s.centers.to_string(),
            g9(s.min),
            g9(s.mean),
            (s.high_minimum() as u8).to_string(),
            (s.low_mean() as u8).to_string(),
            s.truncated.to_string(),
        ]);
    }
    csv.into_string()
}

pub fn summary_json(rows: &[MapSummary]) -> Value {
    rows.iter()
        .map(|s| {
            json!({
                "region": region_name(&s.region),
                "centers": s.centers,
                "min": num(s.min),
                "mean": num(s.mean),
                "truncated_centers": s.truncated,
            })
        })
        .collect()
}
