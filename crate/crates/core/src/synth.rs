//! Analytic and seeded synthetic patterns.
//!
//! Random patterns are tangential projections of a band-limited vector field
//! `F(r) = Σ c_m · x^a y^b z^c` (`a+b+c ≤ L`) with complex coefficient
//! vectors drawn from ChaCha20. The generator only depends on the seed and
//! the parameters.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::math::{cos, exp, sin, to_rad};
use crate::pattern::{Link, Pattern};
use crate::sphgrid::{Node, SphericalGrid};

/// Identifier of the coefficient generator, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha20";
/// Scale of the DL perturbation per unit detune (5% detune perturbs by half
/// the UL coefficient scale).
pub const DETUNE_GAIN: f64 = 10.0;
/// Exponent of the hemisphere envelopes of the two-element mockup.
pub const ELEMENT_ENVELOPE: f64 = 3.0;
pub const MAX_DEGREE: usize = 12;

/// Local unit vectors `(r̂, θ̂, φ̂)` of a node; poles use the node's φ = 0.
fn frame(n: &Node) -> [[f64; 3]; 3] {
    let (t, p) = (to_rad(n.theta_deg), to_rad(n.phi_deg));
    let (st, ct, sp, cp) = (sin(t), cos(t), sin(p), cos(p));
    [
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Far field of a short dipole whose axis is tilted from ẑ towards x̂ by
/// `axis_tilt` degrees: `E = −(â − (â·r̂) r̂)`, so `E_θ = sin θ` for no tilt.
pub fn hertzian_dipole(grid: &SphericalGrid, axis_tilt: f64) -> Result<Pattern> {
    if !axis_tilt.is_finite() {
        return Err(Error::InvalidArgument("dipole tilt must be finite".into()));
    }
    let a = [sin(to_rad(axis_tilt)), 0.0, cos(to_rad(axis_tilt))];
    let (mut et, mut ep) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for n in grid.nodes() {
        let [_, th, ph] = frame(&n);
        et.push(Complex64::new(-dot(a, th), 0.0));
        ep.push(Complex64::new(-dot(a, ph), 0.0));
    }
    Pattern::complex(grid.clone(), Link::Ul, "dipole", et, ep)
}

fn exponents(max_degree: usize) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for d in 0..=max_degree as u32 {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Complex coefficient vectors, one per monomial, entries uniform in the unit
/// square around 0 scaled by `1/(1+degree)`.
fn coefficients(rng: &mut ChaCha20Rng, mons: &[[u32; 3]]) -> Vec<[Complex64; 3]> {
    mons.iter()
        .map(|m| {
            let s = 1.0 / (1 + m[0] + m[1] + m[2]) as f64;
            let mut c = [Complex64::new(0.0, 0.0); 3];
            for z in &mut c {
                let re = 2.0 * uniform(rng) - 1.0;
                let im = 2.0 * uniform(rng) - 1.0;
                *z = Complex64::new(s * re, s * im);
            }
            c
        })
        .collect()
}

fn powi(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * x)
}

fn evaluate(
    grid: &SphericalGrid,
    mons: &[[u32; 3]],
    coef: &[[Complex64; 3]],
    envelope: impl Fn([f64; 3]) -> f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let (mut et, mut ep) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for n in grid.nodes() {
        let [r, th, ph] = frame(&n);
        let mut f = [Complex64::new(0.0, 0.0); 3];
        for (m, c) in mons.iter().zip(coef) {
            let v = powi(r[0], m[0]) * powi(r[1], m[1]) * powi(r[2], m[2]);
            for k in 0..3 {
                f[k] += c[k] * v;
            }
        }
        let w = envelope(r);
        let proj = |u: [f64; 3]| (f[0] * u[0] + f[1] * u[1] + f[2] * u[2]) * w;
        et.push(proj(th));
        ep.push(proj(ph));
    }
    (et, ep)
}

fn check_params(max_degree: usize, detune: f64) -> Result<()> {
    if max_degree == 0 || max_degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(alloc::format!(
            "max degree must be in 1..={MAX_DEGREE}, got {max_degree}"
        )));
    }
    if !(detune >= 0.0) || !detune.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "detune must be a non-negative fraction, got {detune}"
        )));
    }
    Ok(())
}

fn pair(
    grid: &SphericalGrid,
    rng: &mut ChaCha20Rng,
    max_degree: usize,
    detune: f64,
    envelope: impl Fn([f64; 3]) -> f64 + Copy,
) -> Result<(Pattern, Pattern)> {
    let mons = exponents(max_degree);
    let ul_c = coefficients(rng, &mons);
    let pert = coefficients(rng, &mons);
    let eps = DETUNE_GAIN * detune;
    let dl_c: Vec<[Complex64; 3]> = ul_c
        .iter()
        .zip(&pert)
        .map(|(u, p)| [u[0] + p[0] * eps, u[1] + p[1] * eps, u[2] + p[2] * eps])
        .collect();
    let (ut, up) = evaluate(grid, &mons, &ul_c, envelope);
    let (dt, dp) = evaluate(grid, &mons, &dl_c, envelope);
    Ok((
        Pattern::complex(grid.clone(), Link::Ul, "synth", ut, up)?,
        Pattern::complex(grid.clone(), Link::Dl, "synth", dt, dp)?,
    ))
}

/// Seeded UL/DL pair; `detune = 0` gives identical patterns and the DL
/// departs from the UL linearly in `detune`.
pub fn harmonic_pattern(
    grid: &SphericalGrid,
    seed: u64,
    max_degree: usize,
    detune: f64,
) -> Result<(Pattern, Pattern)> {
    check_params(max_degree, detune)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    pair(grid, &mut rng, max_degree, detune, |_| 1.0)
}

/// Two-element handset mockup.
#[derive(Debug, Clone)]
pub struct TwoElement {
    pub ul1: Pattern,
    pub dl1: Pattern,
    pub ul2: Pattern,
    pub dl2: Pattern,
}

/// Two independent elements radiating mainly into the +x and −x half spaces
/// (`exp(±k·x)` envelopes). Element 1 carries the UL.
pub fn two_element_mockup(
    grid: &SphericalGrid,
    seed: u64,
    max_degree: usize,
    detune: f64,
) -> Result<TwoElement> {
    check_params(max_degree, detune)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (ul1, dl1) = pair(grid, &mut rng, max_degree, detune, |r| {
        exp(ELEMENT_ENVELOPE * r[0])
    })?;
    rng.set_stream(1);
    let (ul2, dl2) = pair(grid, &mut rng, max_degree, detune, |r| {
        exp(-ELEMENT_ENVELOPE * r[0])
    })?;
    Ok(TwoElement { ul1, dl1, ul2, dl2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upright_dipole_closed_form() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let p = hertzian_dipole(&g, 0.0).unwrap();
        for (i, n) in g.nodes().enumerate() {
            let want = sin(to_rad(n.theta_deg));
            assert!((p.e_theta()[i].re - want).abs() < 1e-15);
            assert_eq!(p.e_phi()[i].norm_sqr(), 0.0);
            if n.theta_deg == 90.0 {
                assert_eq!(p.e_theta()[i].re, 1.0);
            }
        }
    }

    #[test]
    fn tilted_dipole_magnitude() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let tilt = 37.0;
        let p = hertzian_dipole(&g, tilt).unwrap();
        let a = [sin(to_rad(tilt)), 0.0, cos(to_rad(tilt))];
        for (i, n) in g.nodes().enumerate() {
            let c = dot(a, n.unit_vector());
            let want = libm::sqrt((1.0 - c * c).max(0.0));
            assert!((libm::sqrt(p.total_power(i)) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn monomial_count() {
        assert_eq!(exponents(1).len(), 4);
        assert_eq!(exponents(4).len(), 35);
    }

    #[test]
    fn seeded_and_zero_detune() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let (u1, d1) = harmonic_pattern(&g, 7, 4, 0.0).unwrap();
        let (u2, _) = harmonic_pattern(&g, 7, 4, 0.01).unwrap();
        let (u3, _) = harmonic_pattern(&g, 8, 4, 0.0).unwrap();
        assert_eq!(u1.e_theta(), d1.e_theta());
        assert_eq!(u1.e_phi(), d1.e_phi());
        assert_eq!(u1.e_theta(), u2.e_theta());
        assert_ne!(u1.e_theta(), u3.e_theta());
        assert!(harmonic_pattern(&g, 1, 0, 0.0).is_err());
        assert!(harmonic_pattern(&g, 1, 2, -0.1).is_err());
    }

    #[test]
    fn mockup_elements_differ() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let m = two_element_mockup(&g, 3, 3, 0.0).unwrap();
        assert_eq!(m.ul1.e_theta(), m.dl1.e_theta());
        assert_ne!(m.ul1.e_theta(), m.ul2.e_theta());
    }
}
