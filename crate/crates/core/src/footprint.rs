//! Circular cluster footprint with a quasi-Laplacian radial profile.
//!
//! The construction starts from the 20-ray Laplacian azimuth layout of the
//! 3GPP cluster model (TR 38.901, ray offsets for unit cluster spread), scaled
//! by the relative spread `σ_rel`. A truncated continuous Laplacian with
//! stretched scale `b̂ = ν·σ_φ/√2` reproduces the ray density, and a rotationally
//! symmetric `exp(−√r / b_2D)` profile is used on the sphere so that its
//! elevation-integrated cut approximates the azimuth Laplacian.
//!
//! All angles are in degrees, including inside the exponent: `b_2D` absorbs
//! the `√σ_rel` so the shape is scale invariant.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{acos, asin, cos, exp, sin, sqrt, to_deg, to_rad};
use crate::sphgrid::{AreaWeights, SphericalGrid};

/// Positive half of the 20 nominal ray offsets (degrees) for a 1° cluster spread.
pub const NOMINAL_RAY_OFFSETS: [f64; 10] = [
    0.0447, 0.1413, 0.2492, 0.3715, 0.5129, 0.6797, 0.8844, 1.1481, 1.5195, 2.1551,
];
pub const N_RAYS: usize = 20;
pub const N_MIDPOINTS: usize = N_RAYS - 1;
/// Nominal azimuth spread of the ray table, degrees.
pub const SIGMA_NOMINAL_DEG: f64 = 1.0;
/// Largest nominal ray offset, degrees.
pub const MAX_NOMINAL_OFFSET_DEG: f64 = 2.1551;
/// Laplacian scale stretch matching the ray density.
pub const NU: f64 = 1.32;
/// Radial scale divisor of the 2D / 3D profile.
pub const BETA_L: f64 = 2.29;
/// Largest relative spread keeping the cap within a hemisphere.
pub const SIGMA_REL_MAX: f64 = 49.0;

/// Sub-intervals of the line integrals used for the profile diagnostics.
const LINE_INTEGRAL_STEPS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FootprintShape {
    #[default]
    Laplacian,
    /// Flat density over the same cap (pilot-study style variant).
    UniformDisc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintSpec {
    sigma_rel: f64,
    theta_c: f64,
    phi_c: f64,
    shape: FootprintShape,
}

fn check_sigma(sigma_rel: f64) -> Result<()> {
    if !(sigma_rel > 0.0) || !sigma_rel.is_finite() {
        return Err(Error::InvalidFootprint(format!(
            "σ_rel must be positive, got {sigma_rel}"
        )));
    }
    if sigma_rel > SIGMA_REL_MAX {
        return Err(Error::InvalidFootprint(format!(
            "σ_rel={sigma_rel} exceeds {SIGMA_REL_MAX}: the cap would cross the hemisphere"
        )));
    }
    Ok(())
}

impl FootprintSpec {
    pub fn new(sigma_rel: f64, theta_c: f64, phi_c: f64) -> Result<Self> {
        check_sigma(sigma_rel)?;
        if !(0.0..=180.0).contains(&theta_c) || !phi_c.is_finite() {
            return Err(Error::InvalidFootprint(format!(
                "centre (θ={theta_c}, φ={phi_c}) out of range"
            )));
        }
        Ok(FootprintSpec {
            sigma_rel,
            theta_c,
            phi_c,
            shape: FootprintShape::Laplacian,
        })
    }

    pub fn with_shape(mut self, shape: FootprintShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn with_center(mut self, theta_c: f64, phi_c: f64) -> Self {
        self.theta_c = theta_c;
        self.phi_c = phi_c;
        self
    }

    pub fn sigma_rel(&self) -> f64 {
        self.sigma_rel
    }
    pub fn center(&self) -> (f64, f64) {
        (self.theta_c, self.phi_c)
    }
    pub fn shape(&self) -> FootprintShape {
        self.shape
    }
    pub fn scales(&self) -> FootprintScales {
        FootprintScales::new(self.sigma_rel)
    }
}

/// Derived angular scales of a footprint, all in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintScales {
    pub sigma_rel: f64,
    /// σ_φ = σ_rel · σ_nom
    pub sigma_phi: f64,
    /// Laplacian scale b = σ_φ/√2
    pub b: f64,
    /// stretched scale b̂ = ν·b
    pub b_hat: f64,
    /// radial scale b_2D = b̂ / (β_L √σ_rel)
    pub b_2d: f64,
    /// cap radius (arc) r0 = σ_rel · 2.1551°
    pub r0: f64,
    /// cap radius as a unit-sphere chord
    pub r0_3d: f64,
}

impl FootprintScales {
    pub fn new(sigma_rel: f64) -> Self {
        let sigma_phi = sigma_rel * SIGMA_NOMINAL_DEG;
        let b = sigma_phi / core::f64::consts::SQRT_2;
        let b_hat = b * NU;
        let r0 = sigma_rel * MAX_NOMINAL_OFFSET_DEG;
        FootprintScales {
            sigma_rel,
            sigma_phi,
            b,
            b_hat,
            b_2d: b_hat / (BETA_L * sqrt(sigma_rel)),
            r0,
            r0_3d: sqrt(2.0 * (1.0 - cos(to_rad(r0)))),
        }
    }

    /// Unnormalized radial profile `exp(−√r / b_2D)` for arc radius `r` (degrees),
    /// zero outside the cap.
    pub fn radial(&self, r: f64) -> f64 {
        if r <= self.r0 {
            exp(-sqrt(r) / self.b_2d)
        } else {
            0.0
        }
    }
}

/// The 20 ray offsets for `sigma_rel`, ascending, each carrying power 1/20.
pub fn ray_offsets(sigma_rel: f64) -> Result<[f64; N_RAYS]> {
    check_positive(sigma_rel)?;
    let mut out = [0.0; N_RAYS];
    for (k, &o) in NOMINAL_RAY_OFFSETS.iter().enumerate() {
        out[9 - k] = -o * sigma_rel;
        out[10 + k] = o * sigma_rel;
    }
    Ok(out)
}

fn check_positive(sigma_rel: f64) -> Result<()> {
    if sigma_rel > 0.0 && sigma_rel.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidFootprint(format!(
            "σ_rel must be positive, got {sigma_rel}"
        )))
    }
}

/// Azimuth samples of a density shape, normalized to unit sum over the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AzimuthProfile {
    pub phi: Vec<f64>,
    pub density: Vec<f64>,
}

impl AzimuthProfile {
    fn from_unnormalized(phi: Vec<f64>, g: Vec<f64>) -> Self {
        let s: f64 = g.iter().sum();
        AzimuthProfile {
            phi,
            density: g.into_iter().map(|x| x / s).collect(),
        }
    }

    /// Largest `|self/reference − 1|` over samples with `|φ| ≤ half_width`.
    pub fn max_relative_deviation(&self, reference: &AzimuthProfile, half_width: f64) -> f64 {
        self.phi
            .iter()
            .zip(self.density.iter().zip(&reference.density))
            .filter(|(phi, _)| phi.abs() <= half_width + 1e-12)
            .map(|(_, (a, b))| (a / b - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Ray-density form of the Laplacian: at the 19 midpoints between consecutive
/// rays the density is proportional to the reciprocal ray spacing.
pub fn numeric_pdf(sigma_rel: f64) -> Result<AzimuthProfile> {
    let rays = ray_offsets(sigma_rel)?;
    let (phi, g) = rays
        .windows(2)
        .map(|w| (0.5 * (w[0] + w[1]), 1.0 / (w[1] - w[0])))
        .unzip();
    Ok(AzimuthProfile::from_unnormalized(phi, g))
}

/// Midpoint azimuths of the ray layout.
pub fn midpoints(sigma_rel: f64) -> Result<Vec<f64>> {
    Ok(numeric_pdf(sigma_rel)?.phi)
}

/// Truncated continuous Laplacian `exp(−|φ| / b̂)` on `|φ| ≤ r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedLaplacian {
    pub b_hat: f64,
    pub r0: f64,
}

impl TruncatedLaplacian {
    pub fn eval(&self, phi: f64) -> f64 {
        if phi.abs() <= self.r0 {
            exp(-phi.abs() / self.b_hat)
        } else {
            0.0
        }
    }

    /// Samples at `phi`, normalized to unit sum.
    pub fn profile(&self, phi: &[f64]) -> AzimuthProfile {
        AzimuthProfile::from_unnormalized(phi.to_vec(), phi.iter().map(|&p| self.eval(p)).collect())
    }
}

pub fn continuous_laplacian(sigma_rel: f64) -> Result<TruncatedLaplacian> {
    check_positive(sigma_rel)?;
    let s = FootprintScales::new(sigma_rel);
    Ok(TruncatedLaplacian {
        b_hat: s.b_hat,
        r0: s.r0,
    })
}

/// Midpoint rule for `∫_a^b f(t) dt` after substituting `t = a + u²`,
/// which removes a square-root cusp at the lower limit.
fn integrate_cusp_at_lower(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let umax = sqrt(b - a);
    let h = umax / LINE_INTEGRAL_STEPS as f64;
    let mut acc = 0.0;
    for k in 0..LINE_INTEGRAL_STEPS {
        let u = (k as f64 + 0.5) * h;
        acc += 2.0 * u * f(a + u * u);
    }
    acc * h
}

/// Planar rotationally symmetric profile `g_2D(r) = exp(−√r / b_2D)`, r ≤ r0,
/// with (θ_2D, φ_2D) treated as Cartesian coordinates in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint2d {
    pub scales: FootprintScales,
}

impl Footprint2d {
    pub fn g(&self, r: f64) -> f64 {
        self.scales.radial(r)
    }

    /// `∫ g_2D(√(t² + φ²)) dt` over the chord of the disc at azimuth `phi`.
    pub fn azimuth_integral(&self, phi: f64) -> f64 {
        let r0 = self.scales.r0;
        if phi.abs() > r0 {
            return 0.0;
        }
        let half = sqrt(r0 * r0 - phi * phi);
        let f = |t: f64| self.g(sqrt(t * t + phi * phi));
        2.0 * integrate_cusp_at_lower(0.0, half, f)
    }

    pub fn profile(&self, phi: &[f64]) -> AzimuthProfile {
        AzimuthProfile::from_unnormalized(
            phi.to_vec(),
            phi.iter().map(|&p| self.azimuth_integral(p)).collect(),
        )
    }
}

pub fn footprint_2d(sigma_rel: f64) -> Result<Footprint2d> {
    check_positive(sigma_rel)?;
    Ok(Footprint2d {
        scales: FootprintScales::new(sigma_rel),
    })
}

/// Elevation integral `∫ g_3D sin θ dθ` of an equator-centred spherical
/// footprint at azimuth offset `phi` (degrees).
pub fn spherical_azimuth_integral(scales: &FootprintScales, phi: f64) -> f64 {
    // θ = 90° + t puts the point at angular distance r with cos r = cos t · cos φ.
    let c = cos(to_rad(phi));
    let k = cos(to_rad(scales.r0));
    let (lo, hi) = if c > 0.0 {
        let ratio = k / c;
        if ratio > 1.0 {
            return 0.0;
        }
        (0.0, to_deg(acos(ratio.max(-1.0))).min(90.0))
    } else if c == 0.0 {
        if k > 0.0 {
            return 0.0;
        }
        (0.0, 90.0)
    } else {
        let ratio = k / c;
        if ratio < 0.0 {
            return 0.0;
        }
        (to_deg(acos(ratio.min(1.0))).min(90.0), 90.0)
    };
    let f = |t: f64| {
        let cr = (cos(to_rad(t)) * c).clamp(-1.0, 1.0);
        scales.radial(to_deg(acos(cr)).min(scales.r0)) * cos(to_rad(t))
    };
    2.0 * integrate_cusp_at_lower(lo, hi, f)
}

/// Normalized profiles at the 19 ray midpoints used to judge the fits.
#[derive(Debug, Clone, PartialEq)]
pub struct FitDiagnostics {
    pub sigma_rel: f64,
    pub numeric: AzimuthProfile,
    pub continuous: AzimuthProfile,
    pub integrated_2d: AzimuthProfile,
    pub integrated_3d: AzimuthProfile,
}

impl FitDiagnostics {
    pub fn r0(&self) -> f64 {
        FootprintScales::new(self.sigma_rel).r0
    }
}

pub fn fit_diagnostics(sigma_rel: f64) -> Result<FitDiagnostics> {
    check_sigma(sigma_rel)?;
    let numeric = numeric_pdf(sigma_rel)?;
    let phi = numeric.phi.clone();
    let scales = FootprintScales::new(sigma_rel);
    let continuous = continuous_laplacian(sigma_rel)?.profile(&phi);
    let integrated_2d = footprint_2d(sigma_rel)?.profile(&phi);
    let integrated_3d = AzimuthProfile::from_unnormalized(
        phi.clone(),
        phi.iter()
            .map(|&p| spherical_azimuth_integral(&scales, p))
            .collect(),
    );
    Ok(FitDiagnostics {
        sigma_rel,
        numeric,
        continuous,
        integrated_2d,
        integrated_3d,
    })
}

/// Normalized cluster illumination over the grid nodes inside the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintDensity {
    /// Member node indices, ascending.
    pub members: Vec<usize>,
    /// Probability per member, summing to 1.
    pub p_s: Vec<f64>,
    /// Arc distance of each member from the centre, degrees.
    pub arc_deg: Vec<f64>,
    /// The cap extends beyond the grid's θ_max.
    pub truncated: bool,
}

impl FootprintDensity {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.members.iter().copied().zip(self.p_s.iter().copied())
    }
}

/// `sin θ` taken on the nearer side of the equator, so both poles give exactly 0.
fn sin_polar(theta_deg: f64) -> f64 {
    sin(to_rad(theta_deg.min(180.0 - theta_deg)))
}

/// Per-node trigonometry reused across many footprint builds.
#[derive(Debug, Clone)]
pub struct NodeGeometry {
    theta_rad: Vec<f64>,
    phi_rad: Vec<f64>,
    sin_theta: Vec<f64>,
    theta_deg: Vec<f64>,
    extent_deg: f64,
}

impl NodeGeometry {
    pub fn new(grid: &SphericalGrid) -> Self {
        let mut g = NodeGeometry {
            theta_rad: Vec::with_capacity(grid.len()),
            phi_rad: Vec::with_capacity(grid.len()),
            sin_theta: Vec::with_capacity(grid.len()),
            theta_deg: Vec::with_capacity(grid.len()),
            extent_deg: if grid.has_south_pole() {
                180.0
            } else {
                grid.theta_max()
            },
        };
        for n in grid.nodes() {
            let t = to_rad(n.theta_deg);
            g.theta_rad.push(t);
            g.phi_rad.push(to_rad(n.phi_deg));
            g.sin_theta.push(sin_polar(n.theta_deg));
            g.theta_deg.push(n.theta_deg);
        }
        g
    }

    /// Unit-sphere chord between node `i` and a centre, via the haversine
    /// form of `|n − c|` (stable for short distances, exactly φ-independent
    /// for a polar centre).
    fn chord(&self, i: usize, theta_c: f64, sin_tc: f64, phi_c: f64) -> f64 {
        let sdt = sin(0.5 * (self.theta_rad[i] - theta_c));
        let sdp = sin(0.5 * (self.phi_rad[i] - phi_c));
        let hav = sdt * sdt + self.sin_theta[i] * sin_tc * sdp * sdp;
        2.0 * sqrt(hav.clamp(0.0, 1.0))
    }
}

/// Builds the footprint by a brute-force chord search around the centre.
pub fn build_footprint(
    grid: &SphericalGrid,
    weights: &AreaWeights,
    spec: &FootprintSpec,
) -> Result<FootprintDensity> {
    build_footprint_with(&NodeGeometry::new(grid), weights, spec)
}

pub fn build_footprint_with(
    geom: &NodeGeometry,
    weights: &AreaWeights,
    spec: &FootprintSpec,
) -> Result<FootprintDensity> {
    check_sigma(spec.sigma_rel)?;
    let s = spec.scales();
    let tc = to_rad(spec.theta_c);
    let pc = to_rad(spec.phi_c);
    let sin_tc = sin_polar(spec.theta_c);

    let mut members = Vec::new();
    let mut arc_deg = Vec::new();
    let mut mass = Vec::new();
    for i in 0..geom.theta_rad.len() {
        // |θ − θ_c| never exceeds the arc distance
        if (geom.theta_deg[i] - spec.theta_c).abs() > s.r0 + 1e-9 {
            continue;
        }
        let r3d = geom.chord(i, tc, sin_tc, pc);
        if r3d > s.r0_3d {
            continue;
        }
        let arc = to_deg(2.0 * asin((0.5 * r3d).min(1.0)));
        let g = match spec.shape {
            FootprintShape::Laplacian => exp(-sqrt(arc) / s.b_2d),
            FootprintShape::UniformDisc => 1.0,
        };
        members.push(i);
        arc_deg.push(arc);
        mass.push(g * weights[i]);
    }
    if members.is_empty() {
        return Err(Error::FootprintOutsideGrid {
            theta_c: spec.theta_c,
            phi_c: spec.phi_c,
        });
    }
    let total: f64 = mass.iter().sum();
    let p_s = mass.into_iter().map(|m| m / total).collect();
    Ok(FootprintDensity {
        members,
        p_s,
        arc_deg,
        // on a closed sphere the cap wraps over the south pole instead
        truncated: geom.extent_deg < 180.0 && spec.theta_c + s.r0 > geom.extent_deg + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_table_extremes_and_symmetry() {
        let r1 = ray_offsets(1.0).unwrap();
        assert_eq!(r1[0], -2.1551);
        assert_eq!(r1[19], 2.1551);
        let r15 = ray_offsets(15.0).unwrap();
        assert!((r15[19] - 32.3265).abs() < 1e-12);
        // diameter of ca. 60°
        assert!((2.0 * r15[19] - 60.0).abs() < 5.0);
        let mut neg: Vec<f64> = r15.iter().map(|x| -x).collect();
        neg.reverse();
        assert_eq!(neg.as_slice(), r15.as_slice());
        assert!(r15.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn numeric_pdf_shape() {
        let p = numeric_pdf(15.0).unwrap();
        assert_eq!(p.phi.len(), N_MIDPOINTS);
        let imax = (0..N_MIDPOINTS)
            .max_by(|&a, &b| p.density[a].partial_cmp(&p.density[b]).unwrap())
            .unwrap();
        assert_eq!(imax, 9);
        assert_eq!(p.phi[9], 0.0);
        for k in 0..N_MIDPOINTS {
            assert!((p.density[k] - p.density[N_MIDPOINTS - 1 - k]).abs() < 1e-15);
        }
        assert!((p.density.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn laplacian_closed_forms() {
        let l = continuous_laplacian(15.0).unwrap();
        assert!((l.b_hat - 15.0 / core::f64::consts::SQRT_2 * 1.32).abs() < 1e-12);
        assert!((l.b_hat - 14.0).abs() < 0.01);
        let ratio = l.eval(0.0) / l.eval(l.r0);
        assert!((ratio - exp(l.r0 / l.b_hat)).abs() < 1e-12 * ratio);
        assert_eq!(l.eval(l.r0 + 0.1), 0.0);
    }

    #[test]
    fn laplacian_fits_ray_density() {
        for s in [1.0, 15.0, 49.0] {
            let d = fit_diagnostics(s).unwrap();
            let dev = d.continuous.max_relative_deviation(&d.numeric, f64::INFINITY);
            assert!(dev <= 0.015, "σ_rel={s}: {dev}");
        }
    }

    #[test]
    fn radial_profile_monotone() {
        let f = footprint_2d(15.0).unwrap();
        assert_eq!(f.g(0.0), 1.0);
        let mut prev = 1.0;
        for k in 1..100 {
            let g = f.g(k as f64 * f.scales.r0 / 100.0);
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn line_integral_against_refined_rule() {
        // a uniform-disc chord has a closed form
        let s = FootprintScales::new(15.0);
        let half = sqrt(s.r0 * s.r0 - 100.0);
        let v = 2.0 * integrate_cusp_at_lower(0.0, half, |_| 1.0);
        assert!((v - 2.0 * half).abs() < 1e-9);
    }

    fn grid15() -> (SphericalGrid, AreaWeights) {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let w = AreaWeights::new(&g);
        (g, w)
    }

    #[test]
    fn normalization_and_monotonicity() {
        let (g, w) = grid15();
        for s in [5.0, 15.0, 49.0] {
            let spec = FootprintSpec::new(s, 75.0, 30.0).unwrap();
            let f = build_footprint(&g, &w, &spec).unwrap();
            let total: f64 = f.p_s.iter().sum();
            assert!((total - 1.0).abs() <= 1e-12);
            assert!(f.p_s.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn pole_centre_ring_symmetry() {
        let g = SphericalGrid::new(3.0, 3.0, 180.0).unwrap();
        let w = AreaWeights::new(&g);
        let f = build_footprint(&g, &w, &FootprintSpec::new(15.0, 0.0, 0.0).unwrap()).unwrap();
        for (k, &i) in f.members.iter().enumerate() {
            if let Some((ring, _)) = g.ring_position(i) {
                let first = f.members.iter().position(|&m| m == g.ring_node(ring, 0)).unwrap();
                assert_eq!(f.p_s[k], f.p_s[first]);
            }
        }
    }

    #[test]
    fn three_node_oracle() {
        // equal-area nodes at arcs 0°, 10°, 20° along a meridian of a 10° grid
        let g = SphericalGrid::new(10.0, 10.0, 180.0).unwrap();
        let w = AreaWeights::new(&g);
        let spec = FootprintSpec::new(15.0, 90.0, 0.0).unwrap();
        let f = build_footprint(&g, &w, &spec).unwrap();
        let b2 = spec.scales().b_2d;
        let idx = |t: f64, p: f64| g.index_of(t, p).unwrap();
        let pos = |i: usize| f.members.iter().position(|&m| m == i).unwrap();
        // along the equator the weights are equal
        let (i0, i1, i2) = (idx(90.0, 0.0), idx(90.0, 10.0), idx(90.0, 20.0));
        let e = [1.0, exp(-sqrt(10.0) / b2), exp(-sqrt(20.0) / b2)];
        let got = [f.p_s[pos(i0)], f.p_s[pos(i1)], f.p_s[pos(i2)]];
        for k in 1..3 {
            let want = e[k] / e[0];
            assert!((got[k] / got[0] - want).abs() < 1e-12, "{k}: {} vs {want}", got[k] / got[0]);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(FootprintSpec::new(49.5, 90.0, 0.0).is_err());
        assert!(FootprintSpec::new(0.0, 90.0, 0.0).is_err());
        let g = SphericalGrid::new(15.0, 15.0, 150.0).unwrap();
        let w = AreaWeights::new(&g);
        let spec = FootprintSpec::new(2.0, 180.0, 0.0).unwrap();
        assert!(matches!(
            build_footprint(&g, &w, &spec),
            Err(Error::FootprintOutsideGrid { .. })
        ));
    }

    #[test]
    fn truncation_flag() {
        let g = SphericalGrid::new(15.0, 15.0, 150.0).unwrap();
        let w = AreaWeights::new(&g);
        let f = build_footprint(&g, &w, &FootprintSpec::new(15.0, 135.0, 0.0).unwrap()).unwrap();
        assert!(f.truncated);
        let f = build_footprint(&g, &w, &FootprintSpec::new(15.0, 90.0, 0.0).unwrap()).unwrap();
        assert!(!f.truncated);
    }
}
