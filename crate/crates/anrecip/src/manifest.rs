//! Population manifests: one CSV record `phone,band,link,path` per pattern
//! file, paths relative to the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anrecip_core::pattern::{HandsetDataset, Link};
use anyhow::{bail, Context, Result};
use serde::Deserialize;

use crate::io::{parse_link, read_pattern};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct RawRecord {
    phone: String,
    band: String,
    link: String,
    path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub phone: String,
    pub band: String,
    pub link: Link,
    pub path: PathBuf,
}

pub fn read_manifest(path: &Path) -> Result<Vec<Record>> {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("{}", path.display()))?;
    let mut out = Vec::new();
    for rec in rdr.deserialize::<RawRecord>() {
        let r = rec.with_context(|| format!("{}", path.display()))?;
        let Some(link) = parse_link(&r.link) else {
            bail!("{}: unknown link '{}' for {}/{}", path.display(), r.link, r.phone, r.band);
        };
        out.push(Record {
            phone: r.phone,
            band: r.band,
            link,
            path: base.join(&r.path),
        });
    }
    if out.is_empty() {
        bail!("{}: manifest lists no pattern files", path.display());
    }
    Ok(out)
}

/// Loads every file of the manifest into per-phone datasets, keyed by phone id.
/// Manifest labels override the files' own link and band metadata.
pub fn load_population(records: &[Record]) -> Result<BTreeMap<String, HandsetDataset>> {
    let mut out: BTreeMap<String, HandsetDataset> = BTreeMap::new();
    for r in records {
        let mut p = read_pattern(&r.path, Some((r.link, &r.band)))?;
        p.set_link(r.link);
        p.set_band(r.band.clone());
        out.entry(r.phone.clone())
            .or_insert_with(|| HandsetDataset::new(r.phone.clone()))
            .insert(p);
    }
    Ok(out)
}
