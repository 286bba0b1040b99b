use anrecip_core::correlation::{quadruple_fit, CorrelationMode};
use anrecip_core::Region;
use anyhow::Result;
use serde_json::json;

use super::{load_pair, map_csv, num, path_str, summaries, summary_csv, summary_json};
use crate::cli::{region_name, CorrelateArgs};
use crate::fmt::g9;
use crate::output::{CsvText, Outputs};
use crate::parallel::correlation_map;

const FIT_REGIONS: [Region; 3] = [Region::FullMeasured, Region::Girdle, Region::OutsideGirdle];

pub fn run(a: &CorrelateArgs) -> Result<()> {
    let (ul, dl) = load_pair(&a.pair.ul, &a.pair.dl, a.pair.resample)?;
    let c = &a.corr;
    let mode: CorrelationMode = a.mode.into();
    let map = correlation_map(&ul, &dl, c.sigma_rel, c.xpd_db, mode, c.shape.into())?;
    let rows = summaries(&map, &a.regions, c.mean.into())?;

    let mut out = Outputs::new(&a.out.out, "correlate");
    out.add("map.csv", map_csv(&map, &[]));
    out.add("summary.csv", summary_csv(&rows));
    let mut results = json!({ "summary": summary_json(&rows) });

    if a.quadruple {
        let other = match mode {
            CorrelationMode::Complex => CorrelationMode::Scalar,
            CorrelationMode::Scalar => CorrelationMode::Complex,
        };
        let map2 = correlation_map(&ul, &dl, c.sigma_rel, c.xpd_db, other, c.shape.into())?;
        let (cx, sc) = match mode {
            CorrelationMode::Complex => (&map, &map2),
            CorrelationMode::Scalar => (&map2, &map),
        };
        let mut csv = CsvText::new(&["region", "centers", "gamma_fit", "rho_fit", "degenerate"]);
        let mut fits = Vec::new();
        for r in &FIT_REGIONS {
            let q = quadruple_fit(cx, sc, r)?;
            let rho = q.rho_fit.unwrap_or(f64::NAN);
            csv.row([
                region_name(r),
                q.centers.to_string(),
                g9(q.gamma_fit),
                g9(rho),
                (q.degenerate() as u8).to_string(),
            ]);
            fits.push(json!({
                "region": region_name(r),
                "gamma_fit": num(q.gamma_fit),
                "rho_fit": q.rho_fit.map(num),
            }));
        }
        out.add("quadruple.csv", csv.into_string());
        results["quadruple"] = fits.into();
    }

    out.record("inputs", json!({"ul": path_str(&a.pair.ul), "dl": path_str(&a.pair.dl)}));
    out.record(
        "parameters",
        json!({
            "sigma_rel": num(c.sigma_rel),
            "xpd_db": num(c.xpd_db),
            "mode": mode.as_str(),
            "shape": format!("{:?}", c.shape).to_lowercase(),
            "mean": format!("{:?}", c.mean).to_lowercase(),
            "regions": a.regions.iter().map(region_name).collect::<Vec<_>>(),
            "resample_deg": a.pair.resample.map(num),
        }),
    );
    out.record("results", results);
    out.commit()?;
    Ok(())
}
