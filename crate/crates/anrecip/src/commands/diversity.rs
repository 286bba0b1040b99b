use std::collections::BTreeMap;

use anrecip_core::correlation::CorrelationMode;
use anrecip_core::diversity::{mrc_pattern, sc_pattern, Element};
use anyhow::Result;
use serde_json::json;

use super::{align, load, map_csv, num, path_str, summaries, summary_csv, summary_json};
use crate::cli::{region_name, Combiner, DiversityArgs};
use crate::fmt::g9;
use crate::io::write_pattern;
use crate::output::{CsvText, Outputs};
use crate::parallel::correlation_map;

fn winners(w: &[Element]) -> Vec<String> {
    w.iter().map(|e| e.number().to_string()).collect()
}

pub fn run(a: &DiversityArgs) -> Result<()> {
    let (e1, e2) = align(load(&a.el1)?, load(&a.el2)?, None)?;
    let mut out = Outputs::new(&a.out.out, "diversity");
    let mut extra = BTreeMap::new();
    extra.insert("combiner".to_string(), format!("{:?}", a.combiner).to_lowercase());

    let (combined, win) = match a.combiner {
        Combiner::Sc => {
            let sc = sc_pattern(&e1, &e2)?;
            let mut csv = CsvText::new(&["theta_deg", "phi_deg", "winner_theta", "winner_phi"]);
            for (i, n) in e1.grid().nodes().enumerate() {
                csv.row([
                    g9(n.theta_deg),
                    g9(n.phi_deg),
                    sc.winner_theta[i].number().to_string(),
                    sc.winner_phi[i].number().to_string(),
                ]);
            }
            out.add("winners.csv", csv.into_string());
            let w = (winners(&sc.winner_theta), winners(&sc.winner_phi));
            (sc.pattern, Some(w))
        }
        Combiner::Mrc => (mrc_pattern(&e1, &e2)?, None),
    };
    out.add("combined.csv", write_pattern(&combined, &extra));

    let mut results = json!({});
    if let Some(ul_path) = &a.ul {
        let (ul, comb) = align(load(ul_path)?, combined, None)?;
        let c = &a.corr;
        let map = correlation_map(&ul, &comb, c.sigma_rel, c.xpd_db, CorrelationMode::Complex, c.shape.into())?;
        let cols = match &win {
            Some((wt, wp)) => vec![("winner_theta", wt.clone()), ("winner_phi", wp.clone())],
            None => vec![],
        };
        out.add("map.csv", map_csv(&map, &cols));
        let rows = summaries(&map, &a.regions, c.mean.into())?;
        out.add("summary.csv", summary_csv(&rows));
        results["summary"] = summary_json(&rows);
    }

    out.record(
        "inputs",
        json!({
            "el1": path_str(&a.el1),
            "el2": path_str(&a.el2),
            "ul": a.ul.as_deref().map(path_str),
        }),
    );
    out.record(
        "parameters",
        json!({
            "combiner": format!("{:?}", a.combiner).to_lowercase(),
            "sigma_rel": num(a.corr.sigma_rel),
            "xpd_db": num(a.corr.xpd_db),
            "regions": a.regions.iter().map(region_name).collect::<Vec<_>>(),
        }),
    );
    out.record("results", results);
    out.commit()?;
    Ok(())
}
