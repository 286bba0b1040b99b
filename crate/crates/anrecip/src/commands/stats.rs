use std::collections::BTreeMap;

use anrecip_core::correlation::CorrelationMode;
use anrecip_core::scalar_metrics::{delta_ip, delta_psi, ipb, MetricField, Unit};
use anrecip_core::stats::{aggregate, population_cdf, AggregateKind, PopulationSample};
use anrecip_core::{Pattern, Polarization, Region};
use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;

use super::{align, num, path_str};
use crate::cli::{region_name, StatsArgs};
use crate::fmt::g9;
use crate::manifest::{load_population, read_manifest};
use crate::output::{CsvText, Outputs};
use crate::parallel::correlation_map;

const POLS: [Polarization; 2] = [Polarization::Theta, Polarization::Phi];

struct Job {
    phone: String,
    band: String,
    ul: Pattern,
    dl: Pattern,
}

struct Sample {
    inner: PopulationSample,
    polarization: &'static str,
}

fn fields(j: &Job, region: &Region, a: &StatsArgs) -> Result<Vec<(&'static str, &'static str, MetricField)>> {
    let mut v = Vec::new();
    for pol in POLS {
        v.push(("ipb_db", pol.label(), ipb(&j.ul, &j.dl, region, pol)?));
        v.push(("delta_ip", pol.label(), delta_ip(&j.ul, &j.dl, region, pol)?));
    }
    v.push(("delta_psi_deg", "-", delta_psi(&j.ul, &j.dl, region)?));
    if a.correlation {
        let c = &a.corr;
        let map = correlation_map(&j.ul, &j.dl, c.sigma_rel, c.xpd_db, CorrelationMode::Complex, c.shape.into())?;
        let abs = map.abs();
        let nodes: Vec<usize> = (0..abs.len()).collect();
        let f = MetricField {
            grid: map.grid.clone(),
            unit: Unit::Linear,
            nodes,
            values: abs,
        };
        v.push(("rho_abs", "-", f.restrict(region)?));
    }
    Ok(v)
}

fn samples(j: &Job, a: &StatsArgs) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for region in &a.regions {
        for (metric, pol, f) in fields(j, region, a)? {
            let s = aggregate(&f, region)
                .with_context(|| format!("{}/{}: {metric} over {}", j.phone, j.band, region_name(region)))?;
            let mut names = vec![(metric.to_string(), false)];
            // ΔIP aggregates are taken linearly and restated in dB
            if metric == "delta_ip" {
                names.push(("delta_ip_db".to_string(), true));
            }
            for (name, db) in names {
                for kind in AggregateKind::ALL {
                    let v = s.get(kind);
                    out.push(Sample {
                        inner: PopulationSample {
                            phone_id: j.phone.clone(),
                            band: j.band.clone(),
                            region: *region,
                            metric: name.clone(),
                            kind,
                            value: if db { 10.0 * v.log10() } else { v },
                        },
                        polarization: pol,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn file_token(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn run(a: &StatsArgs) -> Result<()> {
    let records = read_manifest(&a.manifest)?;
    let population = load_population(&records)?;
    let mut jobs = Vec::new();
    for (phone, ds) in population {
        for (band, mut e) in ds.entries {
            if e.ul.is_empty() || e.dl.is_empty() {
                log::warn!("{phone}/{band}: missing UL or DL, skipped");
                continue;
            }
            if e.ul.len() > 1 || e.dl.len() > 1 {
                log::warn!("{phone}/{band}: several elements per link, using the first");
            }
            let (ul, dl) = align(e.ul.swap_remove(0), e.dl.swap_remove(0), a.resample)?;
            jobs.push(Job { phone: phone.clone(), band, ul, dl });
        }
    }
    anyhow::ensure!(!jobs.is_empty(), "manifest has no complete UL/DL pair");

    let per_job = jobs
        .par_iter()
        .map(|j| samples(j, a))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<Sample> = per_job.into_iter().flatten().collect();

    let mut table = CsvText::new(&["phone", "band", "region", "metric", "polarization", "kind", "value"]);
    // (metric, region) → kind → values, pooled over phones, bands and polarizations
    let mut pooled: BTreeMap<(String, String), BTreeMap<AggregateKind, Vec<f64>>> = BTreeMap::new();
    for s in &all {
        let p = &s.inner;
        table.row([
            p.phone_id.clone(),
            p.band.clone(),
            region_name(&p.region),
            p.metric.clone(),
            s.polarization.to_string(),
            p.kind.as_str().to_string(),
            g9(p.value),
        ]);
        pooled
            .entry((p.metric.clone(), region_name(&p.region)))
            .or_default()
            .entry(p.kind)
            .or_default()
            .push(p.value);
    }

    let mut out = Outputs::new(&a.out.out, "stats");
    out.add("samples.csv", table.into_string());
    let mut quant = CsvText::new(&["metric", "region", "kind", "n", "p10", "median", "p90"]);
    for ((metric, region), kinds) in &pooled {
        let mut cdf_csv = CsvText::new(&["kind", "value", "cum_prob"]);
        for (kind, values) in kinds {
            let Ok(cdf) = population_cdf(values) else { continue };
            for (x, f) in cdf.steps() {
                cdf_csv.row([kind.as_str().to_string(), g9(x), g9(f)]);
            }
            let q = cdf.deciles();
            quant.row([
                metric.clone(),
                region.clone(),
                kind.as_str().to_string(),
                cdf.len().to_string(),
                g9(q.p10),
                g9(q.median),
                g9(q.p90),
            ]);
        }
        let name = format!("cdf_{}_{}.csv", file_token(metric), file_token(region));
        out.add(&name, cdf_csv.into_string());
    }
    out.add("quantiles.csv", quant.into_string());

    out.record(
        "inputs",
        json!({
            "manifest": path_str(&a.manifest),
            "files": records.iter().map(|r| path_str(&r.path)).collect::<Vec<_>>(),
        }),
    );
    out.record(
        "parameters",
        json!({
            "regions": a.regions.iter().map(region_name).collect::<Vec<_>>(),
            "resample_deg": a.resample.map(num),
            "correlation": a.correlation,
            "sigma_rel": num(a.corr.sigma_rel),
            "xpd_db": num(a.corr.xpd_db),
        }),
    );
    out.record("results", json!({ "pairs": jobs.len(), "samples": all.len() }));
    out.commit()?;
    Ok(())
}
