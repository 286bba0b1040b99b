use std::collections::BTreeMap;

use anrecip_core::synth::{harmonic_pattern, hertzian_dipole, two_element_mockup, RNG_ALGORITHM};
use anrecip_core::SphericalGrid;
use anyhow::Result;
use serde_json::json;

use super::num;
use crate::cli::{SynthArgs, SynthKind};
use crate::io::write_pattern;
use crate::output::Outputs;

pub fn run(a: &SynthArgs) -> Result<()> {
    let grid = SphericalGrid::new(a.step, a.step, a.theta_max)?;
    let mut out = Outputs::new(&a.out.out, "synth");
    let mut meta = BTreeMap::new();

    match a.kind {
        SynthKind::Dipole => {
            meta.insert("generator".to_string(), "hertzian_dipole".to_string());
            meta.insert("axis_tilt_deg".to_string(), a.tilt.to_string());
            let mut p = hertzian_dipole(&grid, a.tilt)?;
            p.set_band(a.band.clone());
            out.add("dipole.csv", write_pattern(&p, &meta));
        }
        SynthKind::Harmonic | SynthKind::TwoElement => {
            let name = match a.kind {
                SynthKind::Harmonic => "harmonic",
                _ => "two_element",
            };
            meta.insert("generator".to_string(), name.to_string());
            meta.insert("rng".to_string(), RNG_ALGORITHM.to_string());
            meta.insert("seed".to_string(), a.seed.to_string());
            meta.insert("max_degree".to_string(), a.degree.to_string());
            meta.insert("detune".to_string(), a.detune.to_string());
            let files = if a.kind == SynthKind::Harmonic {
                let (ul, dl) = harmonic_pattern(&grid, a.seed, a.degree, a.detune)?;
                vec![("ul.csv", ul), ("dl.csv", dl)]
            } else {
                let m = two_element_mockup(&grid, a.seed, a.degree, a.detune)?;
                vec![("ul1.csv", m.ul1), ("dl1.csv", m.dl1), ("ul2.csv", m.ul2), ("dl2.csv", m.dl2)]
            };
            for (file, mut p) in files {
                p.set_band(a.band.clone());
                out.add(file, write_pattern(&p, &meta));
            }
        }
    }

    out.record(
        "parameters",
        json!({
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "seed": a.seed,
            "max_degree": a.degree,
            "detune": num(a.detune),
            "tilt_deg": num(a.tilt),
            "grid_step_deg": num(a.step),
            "theta_max_deg": num(a.theta_max),
            "band": a.band,
            "rng": RNG_ALGORITHM,
        }),
    );
    out.commit()?;
    Ok(())
}
