use anrecip_core::scalar_metrics::{delta_fb, delta_ip, delta_psi, ipb, tilt, xpd, FbClass, MetricField};
use anrecip_core::stats::{aggregate, AggregateKind};
use anrecip_core::{Pattern, Polarization, Region};
use anyhow::Result;
use serde_json::json;

use super::{load_pair, num, path_str};
use crate::cli::{region_name, MetricsArgs};
use crate::fmt::g9;
use crate::output::{CsvText, Outputs};

const POLS: [Polarization; 3] = [Polarization::Theta, Polarization::Phi, Polarization::Total];

fn class_str(c: FbClass) -> &'static str {
    match c {
        FbClass::High => "high",
        FbClass::Low => "low",
        FbClass::Moderate => "moderate",
    }
}

/// Per-region fields named as in the output tables.
pub fn region_fields(ul: &Pattern, dl: &Pattern, region: &Region) -> Result<Vec<(String, &'static str, MetricField)>> {
    let mut v = Vec::new();
    for pol in POLS {
        v.push(("ipb_db".to_string(), pol.label(), ipb(ul, dl, region, pol)?));
        v.push(("delta_ip".to_string(), pol.label(), delta_ip(ul, dl, region, pol)?));
    }
    v.push(("delta_psi_deg".to_string(), "-", delta_psi(ul, dl, region)?));
    v.push(("xpd_ul_db".to_string(), "-", xpd(ul).restrict(region)?));
    v.push(("xpd_dl_db".to_string(), "-", xpd(dl).restrict(region)?));
    Ok(v)
}

pub fn run(a: &MetricsArgs) -> Result<()> {
    let (ul, dl) = load_pair(&a.pair.ul, &a.pair.dl, a.pair.resample)?;
    let phone = a.phone.clone().unwrap_or_default();
    let band = ul.band().to_string();
    let grid = ul.grid().clone();

    // per-node fields over the whole measured grid
    let all = Region::FullMeasured;
    let mut cols: Vec<(String, MetricField)> = Vec::new();
    for pol in POLS {
        cols.push((format!("ipb_{}_db", pol.label()), ipb(&ul, &dl, &all, pol)?));
        cols.push((format!("delta_ip_{}", pol.label()), delta_ip(&ul, &dl, &all, pol)?));
    }
    cols.push(("xpd_ul_db".into(), xpd(&ul)));
    cols.push(("xpd_dl_db".into(), xpd(&dl)));
    cols.push(("tilt_ul_deg".into(), tilt(&ul)));
    cols.push(("tilt_dl_deg".into(), tilt(&dl)));
    if let Ok(f) = delta_psi(&ul, &dl, &all) {
        cols.push(("delta_psi_deg".into(), f));
    }
    let mut header = vec!["theta_deg", "phi_deg"];
    header.extend(cols.iter().map(|(n, _)| n.as_str()));
    let mut fields = CsvText::new(&header);
    for (i, n) in grid.nodes().enumerate() {
        let mut row = vec![g9(n.theta_deg), g9(n.phi_deg)];
        row.extend(cols.iter().map(|(_, f)| g9(f.get(i).unwrap_or(f64::NAN))));
        fields.row(row);
    }

    let mut summary = CsvText::new(&[
        "phone", "band", "region", "metric", "polarization", "count", "mean", "sigma", "mean_plus_sigma",
        "mean_minus_sigma", "max", "min",
    ]);
    let mut fb = CsvText::new(&[
        "phone", "band", "region", "polarization", "phi_max_dl", "delta_fb_db", "class", "dl_front_db",
        "ul_front_db", "dl_back_db", "ul_back_db",
    ]);
    let mut fb_json = Vec::new();
    for region in &a.regions {
        for (metric, pol, f) in region_fields(&ul, &dl, region)? {
            let Ok(s) = aggregate(&f, region) else {
                log::warn!("{metric}/{pol}: no finite values in {}", region_name(region));
                continue;
            };
            let db = metric == "delta_ip";
            let mut row = |metric: String, conv: &dyn Fn(f64) -> f64, sigma: f64| {
                summary.row([
                    phone.clone(),
                    band.clone(),
                    region_name(region),
                    metric,
                    pol.to_string(),
                    s.count.to_string(),
                    g9(conv(s.mean)),
                    g9(sigma),
                    g9(conv(s.get(AggregateKind::MeanPlusSigma))),
                    g9(conv(s.get(AggregateKind::MeanMinusSigma))),
                    g9(conv(s.max)),
                    g9(conv(s.min)),
                ]);
            };
            row(metric.clone(), &|v| v, s.sigma);
            // linear aggregates restated in dB; σ itself has no dB form
            if db {
                row(format!("{metric}_db"), &|v| 10.0 * v.log10(), f64::NAN);
            }
        }
        for pol in POLS {
            let r = delta_fb(&ul, &dl, region, pol)?;
            fb.row([
                phone.clone(),
                band.clone(),
                region_name(region),
                pol.label().to_string(),
                g9(r.phi_max_dl),
                g9(r.delta_fb),
                class_str(r.class()).to_string(),
                g9(r.dl_front),
                g9(r.ul_front),
                g9(r.dl_back),
                g9(r.ul_back),
            ]);
            fb_json.push(json!({
                "region": region_name(region),
                "polarization": pol.label(),
                "delta_fb_db": num(r.delta_fb),
                "class": class_str(r.class()),
            }));
        }
    }

    let mut out = Outputs::new(&a.out.out, "metrics");
    out.add("fields.csv", fields.into_string());
    out.add("summary.csv", summary.into_string());
    out.add("front_back.csv", fb.into_string());
    out.record("inputs", json!({"ul": path_str(&a.pair.ul), "dl": path_str(&a.pair.dl)}));
    out.record(
        "parameters",
        json!({
            "regions": a.regions.iter().map(region_name).collect::<Vec<_>>(),
            "resample_deg": a.pair.resample.map(num),
            "phone": phone,
            "band": band,
            "grid_step_deg": [num(grid.delta_theta()), num(grid.delta_phi())],
        }),
    );
    out.record("results", json!({ "delta_fb": fb_json }));
    out.commit()?;
    Ok(())
}
