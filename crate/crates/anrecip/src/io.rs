//! Pattern CSV files.
//!
//! ```text
//! # link: UL
//! # band: LTE1800
//! # kind: complex
//! # convention: gain
//! theta_deg,phi_deg,etheta_re,etheta_im,ephi_re,ephi_im
//! 0,0,0.5,0.1,-0.2,0.3
//! ...
//! ```
//!
//! Scalar files use the columns `ptheta_db,pphi_db` instead. The grid is
//! inferred from the rows; poles carry a single row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anrecip_core::pattern::{Link, PatternKind, PowerConvention};
use anrecip_core::{Complex64, Pattern, SphericalGrid};
use thiserror::Error;

use crate::fmt::g9;

pub const COMPLEX_HEADER: [&str; 6] = [
    "theta_deg",
    "phi_deg",
    "etheta_re",
    "etheta_im",
    "ephi_re",
    "ephi_im",
];
pub const SCALAR_HEADER: [&str; 4] = ["theta_deg", "phi_deg", "ptheta_db", "pphi_db"];

/// Largest number of absent nodes listed in an error message.
const MAX_LISTED: usize = 8;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {msg}")]
    Line {
        path: String,
        line: u64,
        msg: String,
    },
    #[error("{path}: {msg}")]
    File { path: String, msg: String },
}

struct Row {
    line: u64,
    theta: f64,
    phi: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Default)]
struct Meta {
    link: Option<Link>,
    band: Option<String>,
    kind: Option<PatternKind>,
    convention: Option<PowerConvention>,
}

pub fn parse_link(s: &str) -> Option<Link> {
    match s.trim().to_ascii_uppercase().as_str() {
        "UL" => Some(Link::Ul),
        "DL" => Some(Link::Dl),
        _ => None,
    }
}

fn parse_meta(path: &str, text: &str) -> Result<Meta, FormatError> {
    let mut m = Meta::default();
    for (k, raw) in text.lines().enumerate() {
        let Some(body) = raw.trim_start().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = body.split_once(':') else {
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| FormatError::Line {
            path: path.into(),
            line: k as u64 + 1,
            msg: format!("unknown {what} '{value}'"),
        };
        match key {
            "link" => m.link = Some(parse_link(value).ok_or_else(|| bad("link"))?),
            "band" => m.band = Some(value.to_string()),
            "kind" => {
                m.kind = Some(match value {
                    "complex" => PatternKind::Complex,
                    "scalar" => PatternKind::Scalar,
                    _ => return Err(bad("kind")),
                })
            }
            "convention" => {
                m.convention = Some(match value {
                    "gain" => PowerConvention::GainProportional,
                    "eis" => PowerConvention::EisRaw,
                    _ => return Err(bad("convention")),
                })
            }
            // generator provenance and other free-form keys
            _ => {}
        }
    }
    Ok(m)
}

fn infer_grid(path: &str, rows: &[Row]) -> Result<SphericalGrid, FormatError> {
    let file_err = |msg: String| FormatError::File {
        path: path.into(),
        msg,
    };
    let mut thetas: Vec<f64> = rows.iter().map(|r| r.theta).collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let mut phis: Vec<f64> = rows
        .iter()
        .filter(|r| r.theta > 1e-6 && r.theta < 180.0 - 1e-6)
        .map(|r| r.phi.rem_euclid(360.0))
        .collect();
    phis.sort_by(f64::total_cmp);
    phis.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    if thetas.len() < 2 || thetas[0].abs() > 1e-6 {
        return Err(file_err("grid must start at the north pole and have at least one ring".into()));
    }
    if phis.len() < 2 {
        return Err(file_err("grid needs at least two azimuths".into()));
    }
    let dt = thetas[1] - thetas[0];
    let dp = phis[1] - phis[0];
    let theta_max = *thetas.last().unwrap();
    SphericalGrid::new(dt, dp, theta_max).map_err(|e| file_err(format!("cannot infer grid: {e}")))
}

fn field(line: u64, path: &str, name: &str, s: &str) -> Result<f64, FormatError> {
    s.trim().parse::<f64>().map_err(|_| FormatError::Line {
        path: path.into(),
        line,
        msg: format!("non-numeric {name} '{s}'"),
    })
}

/// Reads a pattern file. `link` and `band` fall back to the given values when
/// the file does not declare them.
pub fn read_pattern(path: &Path, fallback: Option<(Link, &str)>) -> Result<Pattern, FormatError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: p.clone(),
        source,
    })?;
    parse_pattern(&p, &text, fallback)
}

pub fn parse_pattern(
    path: &str,
    text: &str,
    fallback: Option<(Link, &str)>,
) -> Result<Pattern, FormatError> {
    let meta = parse_meta(path, text)?;
    let file_err = |msg: String| FormatError::File {
        path: path.into(),
        msg,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| file_err(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let kind = if header == COMPLEX_HEADER {
        PatternKind::Complex
    } else if header == SCALAR_HEADER {
        PatternKind::Scalar
    } else {
        return Err(file_err(format!(
            "unrecognized header '{}'",
            header.join(",")
        )));
    };
    if meta.kind.is_some_and(|k| k != kind) {
        return Err(file_err("declared kind does not match the columns".into()));
    }
    let width = header.len();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            FormatError::Line {
                path: path.into(),
                line,
                msg: e.to_string(),
            }
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(FormatError::Line {
                path: path.into(),
                line,
                msg: format!("expected {width} fields, got {}", rec.len()),
            });
        }
        let v = |k: usize| field(line, path, &header[k], &rec[k]);
        let (c, d) = if width == 6 { (v(4)?, v(5)?) } else { (0.0, 0.0) };
        rows.push(Row {
            line,
            theta: v(0)?,
            phi: v(1)?,
            a: v(2)?,
            b: v(3)?,
            c,
            d,
        });
    }
    let grid = infer_grid(path, &rows)?;

    let mut seen: Vec<Option<u64>> = vec![None; grid.len()];
    let mut et = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut ep = et.clone();
    let mut db = vec![(0.0, 0.0); grid.len()];
    for r in &rows {
        let Some(i) = grid.index_of(r.theta, r.phi) else {
            return Err(FormatError::Line {
                path: path.into(),
                line: r.line,
                msg: format!("(θ={}, φ={}) is not a node of the inferred grid", r.theta, r.phi),
            });
        };
        if let Some(first) = seen[i] {
            return Err(FormatError::Line {
                path: path.into(),
                line: r.line,
                msg: format!(
                    "duplicate node (θ={}, φ={}), first given on line {first}",
                    r.theta, r.phi
                ),
            });
        }
        seen[i] = Some(r.line);
        match kind {
            PatternKind::Complex => {
                et[i] = Complex64::new(r.a, r.b);
                ep[i] = Complex64::new(r.c, r.d);
            }
            PatternKind::Scalar => db[i] = (r.a, r.b),
        }
    }
    let missing: Vec<usize> = (0..grid.len()).filter(|&i| seen[i].is_none()).collect();
    if !missing.is_empty() {
        let mut msg = format!("{} node(s) missing:", missing.len());
        for &i in missing.iter().take(MAX_LISTED) {
            let n = grid.node(i);
            let _ = write!(msg, " (θ={}, φ={})", n.theta_deg, n.phi_deg);
        }
        if missing.len() > MAX_LISTED {
            msg.push_str(" ...");
        }
        return Err(file_err(msg));
    }

    let (link, band) = match (meta.link, meta.band, fallback) {
        (Some(l), Some(b), _) => (l, b),
        (l, b, Some((fl, fb))) => (l.unwrap_or(fl), b.unwrap_or_else(|| fb.to_string())),
        (None, _, None) => return Err(file_err("missing '# link:' metadata".into())),
        (_, None, None) => return Err(file_err("missing '# band:' metadata".into())),
    };
    let convention = meta.convention.unwrap_or(PowerConvention::GainProportional);
    let built = match kind {
        PatternKind::Complex => Pattern::with_fields(grid, link, band, kind, convention, et, ep),
        PatternKind::Scalar => {
            let (t, f): (Vec<f64>, Vec<f64>) = db.into_iter().unzip();
            Pattern::from_power_db(grid, link, band, convention, &t, &f)
        }
    };
    built.map_err(|e| file_err(e.to_string()))
}

/// Serializes a pattern in grid order. `extra` metadata lines follow the
/// standard ones.
pub fn write_pattern(p: &Pattern, extra: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    let kind = match p.kind() {
        PatternKind::Complex => "complex",
        PatternKind::Scalar => "scalar",
    };
    let conv = match p.convention() {
        PowerConvention::GainProportional => "gain",
        PowerConvention::EisRaw => "eis",
    };
    let _ = writeln!(s, "# link: {}", p.link().as_str());
    let _ = writeln!(s, "# band: {}", p.band());
    let _ = writeln!(s, "# kind: {kind}");
    let _ = writeln!(s, "# convention: {conv}");
    for (k, v) in extra {
        let _ = writeln!(s, "# {k}: {v}");
    }
    match p.kind() {
        PatternKind::Complex => s.push_str(&COMPLEX_HEADER.join(",")),
        PatternKind::Scalar => s.push_str(&SCALAR_HEADER.join(",")),
    }
    s.push('\n');
    for (i, n) in p.grid().nodes().enumerate() {
        let (t, f) = (p.e_theta()[i], p.e_phi()[i]);
        let _ = match p.kind() {
            PatternKind::Complex => writeln!(
                s,
                "{},{},{},{},{},{}",
                g9(n.theta_deg),
                g9(n.phi_deg),
                g9(t.re),
                g9(t.im),
                g9(f.re),
                g9(f.im)
            ),
            PatternKind::Scalar => writeln!(
                s,
                "{},{},{},{}",
                g9(n.theta_deg),
                g9(n.phi_deg),
                g9(amp_db(t.re)),
                g9(amp_db(f.re))
            ),
        };
    }
    s
}

fn amp_db(m: f64) -> f64 {
    if m > 0.0 {
        20.0 * m.log10()
    } else {
        f64::NEG_INFINITY
    }
}
