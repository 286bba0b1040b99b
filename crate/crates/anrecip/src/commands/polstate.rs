use anrecip_core::pattern::PatternKind;
use anrecip_core::polarimetry::{bound_fit_from_pairs, state_pairs, RelativeSense, Rotation};
use anyhow::{ensure, Result};
use serde_json::json;

use super::{load_pair, num, path_str};
use crate::cli::{region_name, PolstateArgs};
use crate::fmt::g9;
use crate::output::{CsvText, Outputs};

fn rotation(r: Rotation) -> &'static str {
    match r {
        Rotation::Positive => "positive",
        Rotation::Negative => "negative",
        Rotation::Linear => "linear",
    }
}

fn sense(s: RelativeSense) -> &'static str {
    match s {
        RelativeSense::Co => "co",
        RelativeSense::Cross => "cross",
        RelativeSense::Linear => "linear",
    }
}

pub fn run(a: &PolstateArgs) -> Result<()> {
    let (ul, dl) = load_pair(&a.pair.ul, &a.pair.dl, a.pair.resample)?;
    ensure!(
        ul.kind() == PatternKind::Complex && dl.kind() == PatternKind::Complex,
        "polarization states need complex patterns"
    );
    let pairs = state_pairs(&ul, &dl, &a.region)?;
    let grid = ul.grid();

    let mut states = CsvText::new(&[
        "theta_deg", "phi_deg", "ul_alpha", "ul_delta", "ul_tilt", "ul_chi", "ul_rotation", "dl_alpha",
        "dl_delta", "dl_tilt", "dl_chi", "dl_rotation", "sense",
    ]);
    let mut scatter = CsvText::new(&["theta_deg", "phi_deg", "delta_psi", "delta_chi", "plf"]);
    for p in &pairs {
        let n = grid.node(p.node);
        let mut row = vec![g9(n.theta_deg), g9(n.phi_deg)];
        for s in [&p.ul, &p.dl] {
            row.extend([g9(s.alpha), g9(s.delta), g9(s.tilt), g9(s.chi)]);
            row.push(rotation(s.rotation()).to_string());
        }
        row.push(sense(p.sense).to_string());
        states.row(row);
        scatter.row([
            g9(n.theta_deg),
            g9(n.phi_deg),
            g9(p.delta_psi),
            g9(p.delta_chi),
            g9(p.plf),
        ]);
    }

    let mut out = Outputs::new(&a.out.out, "polstate");
    let fit = match bound_fit_from_pairs(&pairs) {
        Ok(f) => {
            let mut env = CsvText::new(&["delta_psi", "max_delta_chi"]);
            for &(x, y) in &f.envelope {
                env.row([g9(x), g9(y)]);
            }
            out.add("envelope.csv", env.into_string());
            json!({
                "gamma_fit": num(f.gamma_fit),
                "intercept": num(f.intercept),
                "rho_fit": num(f.rho_fit),
                "bins": f.envelope.len(),
            })
        }
        Err(e) => {
            log::warn!("bound fit skipped: {e}");
            json!({ "error": e.to_string() })
        }
    };
    out.add("states.csv", states.into_string());
    out.add("scatter.csv", scatter.into_string());
    out.record("inputs", json!({"ul": path_str(&a.pair.ul), "dl": path_str(&a.pair.dl)}));
    out.record(
        "parameters",
        json!({
            "region": region_name(&a.region),
            "resample_deg": a.pair.resample.map(num),
        }),
    );
    out.record("results", json!({ "nodes": pairs.len(), "bound_fit": fit }));
    out.commit()?;
    Ok(())
}
