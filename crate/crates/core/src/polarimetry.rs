//! Polarization ellipse state, polarization loss factor and the
//! eccentricity-difference vs tilt-difference envelope fit.
//!
//! The polarization vector is `[E_φ, E_θ]`. The help angle `α = atan(|E_θ|/|E_φ|)`
//! is measured from φ̂ towards θ̂, `δ = ∠E_θ − ∠E_φ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{asin, atan2, cabs, carg, cos, sin, sqrt, to_deg, to_rad, wrap_deg};
use crate::pattern::{Pattern, PatternKind};
use crate::sphgrid::{region_indices, Region};

/// |χ| below this (degrees) counts as linear polarization.
pub const LINEAR_CHI_EPS_DEG: f64 = 1e-9;
/// Bin width in Δψ for the max-Δχ envelope, degrees.
pub const DELTA_PSI_BIN_DEG: f64 = 2.0;

/// Handedness of a single state, from the sign of χ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    Positive,
    Negative,
    Linear,
}

/// Rotation sense of one state relative to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativeSense {
    Co,
    Cross,
    /// At least one of the two states is linear.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    /// Help angle α in [0°, 90°].
    pub alpha: f64,
    /// Phase difference δ in (−180°, 180°]; 0 when either component vanishes.
    pub delta: f64,
    /// Ellipse tilt ψ̃ in [0°, 180°).
    pub tilt: f64,
    /// Eccentricity angle χ in [−45°, 45°].
    pub chi: f64,
}

impl PolarizationState {
    pub fn rotation(&self) -> Rotation {
        if self.chi.abs() < LINEAR_CHI_EPS_DEG {
            Rotation::Linear
        } else if self.chi > 0.0 {
            Rotation::Positive
        } else {
            Rotation::Negative
        }
    }

    pub fn relative_sense(&self, other: &PolarizationState) -> RelativeSense {
        match (self.rotation(), other.rotation()) {
            (Rotation::Linear, _) | (_, Rotation::Linear) => RelativeSense::Linear,
            (a, b) if a == b => RelativeSense::Co,
            _ => RelativeSense::Cross,
        }
    }
}

/// Ellipse state from the two field components.
pub fn ellipse_state(e_theta: Complex64, e_phi: Complex64) -> Result<PolarizationState> {
    let (mt, mp) = (cabs(e_theta), cabs(e_phi));
    if mt == 0.0 && mp == 0.0 {
        return Err(Error::ZeroPower("both field components vanish"));
    }
    let alpha_rad = atan2(mt, mp);
    let delta = if mt == 0.0 || mp == 0.0 {
        0.0
    } else {
        wrap_deg(to_deg(carg(e_theta) - carg(e_phi)))
    };
    let d = to_rad(delta);
    // tan 2ψ̃ = tan 2α · cos δ, resolved with atan2 so ψ̃ follows the larger component
    let two_a = 2.0 * alpha_rad;
    let mut tilt = 0.5 * to_deg(atan2(sin(two_a) * cos(d), cos(two_a)));
    if tilt < 0.0 {
        tilt += 180.0;
    }
    if tilt >= 180.0 {
        tilt -= 180.0;
    }
    let s = (sin(two_a) * sin(d)).clamp(-1.0, 1.0);
    let chi = 0.5 * to_deg(asin(s));
    Ok(PolarizationState {
        alpha: to_deg(alpha_rad),
        delta,
        tilt,
        chi,
    })
}

/// Unit polarization vector `[E_φ, E_θ] / |E|`.
pub fn unit_vector(e_theta: Complex64, e_phi: Complex64) -> Option<[Complex64; 2]> {
    let n = sqrt(e_theta.norm_sqr() + e_phi.norm_sqr());
    (n > 0.0).then(|| [e_phi / n, e_theta / n])
}

/// Polarization loss factor `|E₁ · E₂*|²` of two unit polarization vectors.
pub fn plf(e1: [Complex64; 2], e2: [Complex64; 2]) -> f64 {
    let ip = e1[0] * e2[0].conj() + e1[1] * e2[1].conj();
    ip.norm_sqr().min(1.0)
}

/// One direction of the UL/DL state comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub node: usize,
    pub ul: PolarizationState,
    pub dl: PolarizationState,
    /// |α_UL − α_DL|
    pub delta_psi: f64,
    /// |χ_UL − χ_DL|
    pub delta_chi: f64,
    pub plf: f64,
    pub sense: RelativeSense,
}

/// Per-node state comparison over a region; nodes where either link has no
/// field are skipped.
pub fn state_pairs(ul: &Pattern, dl: &Pattern, region: &Region) -> Result<Vec<StatePair>> {
    ul.require_same_grid(dl)?;
    let mut out = Vec::new();
    for i in region_indices(ul.grid(), region)? {
        let (ut, up) = (ul.e_theta()[i], ul.e_phi()[i]);
        let (dt, dp) = (dl.e_theta()[i], dl.e_phi()[i]);
        let (Ok(su), Ok(sd)) = (ellipse_state(ut, up), ellipse_state(dt, dp)) else {
            continue;
        };
        let eta = plf(
            unit_vector(ut, up).expect("non-zero"),
            unit_vector(dt, dp).expect("non-zero"),
        );
        out.push(StatePair {
            node: i,
            ul: su,
            dl: sd,
            delta_psi: (su.alpha - sd.alpha).abs(),
            delta_chi: (su.chi - sd.chi).abs(),
            plf: eta,
            sense: su.relative_sense(&sd),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundFitReport {
    /// Slope of the max-Δχ envelope against Δψ.
    pub gamma_fit: f64,
    pub intercept: f64,
    /// Pearson correlation of the envelope points.
    pub rho_fit: f64,
    /// `(Δψ, max Δχ)` per non-empty 2° bin; Δψ is that of the maximizing sample.
    pub envelope: Vec<(f64, f64)>,
}

/// Least-squares line with intercept and Pearson correlation.
pub(crate) fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (mx / n, my / n);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r = if syy == 0.0 {
        0.0
    } else {
        (sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0)
    };
    Some((slope, my - slope * mx, r))
}

/// Upper envelope of Δχ over 2° bins of Δψ and its linear regression.
pub fn chi_bound_fit(ul: &Pattern, dl: &Pattern, region: &Region) -> Result<BoundFitReport> {
    if ul.kind() != PatternKind::Complex || dl.kind() != PatternKind::Complex {
        return Err(Error::WrongPattern(
            "polarization ellipse analysis needs complex patterns".into(),
        ));
    }
    let pairs = state_pairs(ul, dl, region)?;
    bound_fit_from_pairs(&pairs)
}

pub fn bound_fit_from_pairs(pairs: &[StatePair]) -> Result<BoundFitReport> {
    let n_bins = libm::ceil(90.0 / DELTA_PSI_BIN_DEG) as usize;
    let mut bins: Vec<Option<(f64, f64)>> = alloc::vec![None; n_bins];
    for p in pairs {
        let b = ((p.delta_psi / DELTA_PSI_BIN_DEG) as usize).min(n_bins - 1);
        match bins[b] {
            Some((_, c)) if c >= p.delta_chi => {}
            _ => bins[b] = Some((p.delta_psi, p.delta_chi)),
        }
    }
    let envelope: Vec<(f64, f64)> = bins.into_iter().flatten().collect();
    if envelope.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: envelope.len(),
        });
    }
    let (slope, intercept, r) = linear_fit(&envelope).ok_or(Error::InsufficientData {
        needed: 3,
        got: envelope.len(),
    })?;
    Ok(BoundFitReport {
        gamma_fit: slope,
        intercept,
        rho_fit: r,
        envelope,
    })
}
