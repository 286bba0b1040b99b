use anrecip_core::footprint::{build_footprint, fit_diagnostics, FootprintSpec, N_MIDPOINTS};
use anrecip_core::{AreaWeights, SphericalGrid};
use anyhow::Result;
use serde_json::json;

use super::num;
use crate::cli::FootprintArgs;
use crate::fmt::g9;
use crate::output::{CsvText, Outputs};

/// Share of the azimuth range over which the 2D and 3D fits are judged.
const CENTRAL_FRACTION: f64 = 0.75;

pub fn run(a: &FootprintArgs) -> Result<()> {
    let grid = SphericalGrid::new(a.step, a.step, a.theta_max)?;
    let spec = FootprintSpec::new(a.sigma_rel, a.center.0, a.center.1)?.with_shape(a.shape.into());
    let fp = build_footprint(&grid, &AreaWeights::new(&grid), &spec)?;
    let diag = fit_diagnostics(a.sigma_rel)?;

    let mut members = CsvText::new(&["theta_deg", "phi_deg", "arc_deg", "p_s"]);
    for ((&i, &p), &arc) in fp.members.iter().zip(&fp.p_s).zip(&fp.arc_deg) {
        let n = grid.node(i);
        members.row([g9(n.theta_deg), g9(n.phi_deg), g9(arc), g9(p)]);
    }

    let mut prof = CsvText::new(&[
        "phi_deg",
        "numeric",
        "continuous",
        "integrated_2d",
        "integrated_3d",
    ]);
    for k in 0..N_MIDPOINTS {
        prof.row([
            g9(diag.numeric.phi[k]),
            g9(diag.numeric.density[k]),
            g9(diag.continuous.density[k]),
            g9(diag.integrated_2d.density[k]),
            g9(diag.integrated_3d.density[k]),
        ]);
    }

    let s = spec.scales();
    let central = CENTRAL_FRACTION * diag.r0();
    let mut out = Outputs::new(&a.out.out, "footprint");
    out.add("footprint.csv", members.into_string());
    out.add("fit_profiles.csv", prof.into_string());
    out.record(
        "parameters",
        json!({
            "sigma_rel": num(a.sigma_rel),
            "center": [num(a.center.0), num(a.center.1)],
            "grid_step_deg": num(a.step),
            "theta_max_deg": num(a.theta_max),
            "shape": format!("{:?}", a.shape).to_lowercase(),
        }),
    );
    out.record(
        "results",
        json!({
            "members": fp.len(),
            "truncated": fp.truncated,
            "sum_p_s": num(fp.p_s.iter().sum()),
            "r0_deg": num(s.r0),
            "b_2d": num(s.b_2d),
            "max_rel_dev_continuous": num(diag.continuous.max_relative_deviation(&diag.numeric, f64::INFINITY)),
            "max_rel_dev_2d_central": num(diag.integrated_2d.max_relative_deviation(&diag.numeric, central)),
            "max_rel_dev_3d_central": num(diag.integrated_3d.max_relative_deviation(&diag.numeric, central)),
        }),
    );
    out.commit()?;
    Ok(())
}
