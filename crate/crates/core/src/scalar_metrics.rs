//! Power-pattern divergence metrics between the UL and DL patterns of one band.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{atan2, db10, sqrt, to_deg};
use crate::pattern::{Pattern, PowerConvention};
use crate::sphgrid::{region_indices, AreaWeights, Region, SphericalGrid};

/// Magnitude of |ΔFB| flagged as a strongly bi-modal divergence, dB.
pub const DELTA_FB_HIGH_DB: f64 = 10.0;
/// Magnitude of |ΔFB| at or below which the links are considered aligned, dB.
pub const DELTA_FB_LOW_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Linear,
    Db,
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Theta,
    Phi,
    /// p_θ + p_φ
    Total,
}

impl Polarization {
    pub fn power(&self, p: &Pattern, i: usize) -> f64 {
        match self {
            Polarization::Theta => p.p_theta(i),
            Polarization::Phi => p.p_phi(i),
            Polarization::Total => p.total_power(i),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Theta => "theta",
            Polarization::Phi => "phi",
            Polarization::Total => "total",
        }
    }
}

/// Per-node metric values on a subset of grid nodes.
///
/// Non-finite values (e.g. an infinite XPD) are kept in the field but skipped
/// by [`MetricField::finite`] and the aggregates in [`crate::stats`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    pub grid: SphericalGrid,
    pub unit: Unit,
    pub nodes: Vec<usize>,
    pub values: Vec<f64>,
}

impl MetricField {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }

    pub fn finite(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.iter().filter(|(_, v)| v.is_finite())
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.nodes
            .binary_search(&node)
            .ok()
            .map(|k| self.values[k])
    }

    /// Keeps only the nodes inside `region`.
    pub fn restrict(&self, region: &Region) -> Result<MetricField> {
        let mask = crate::sphgrid::region_mask(&self.grid, region)?;
        let (nodes, values): (Vec<_>, Vec<_>) = self.iter().filter(|(i, _)| mask[*i]).unzip();
        if nodes.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(MetricField {
            grid: self.grid.clone(),
            unit: self.unit,
            nodes,
            values,
        })
    }
}

fn require_scalar_pair(ul: &Pattern, dl: &Pattern) -> Result<()> {
    ul.require_same_grid(dl)
}

/// Isotropic power balance `EIRP·EIS` in dB per node and polarization.
///
/// A raw-EIS DL enters as a product; a gain-proportional DL (already inverted)
/// enters as a division. Either way identical UL and DL patterns give a
/// constant field.
pub fn ipb(ul: &Pattern, dl: &Pattern, region: &Region, pol: Polarization) -> Result<MetricField> {
    require_scalar_pair(ul, dl)?;
    let nodes = region_indices(ul.grid(), region)?;
    let values = nodes
        .iter()
        .map(|&i| {
            let u = db10(pol.power(ul, i));
            let d = db10(pol.power(dl, i));
            match dl.convention() {
                PowerConvention::EisRaw => u + d,
                PowerConvention::GainProportional => u - d,
            }
        })
        .collect();
    Ok(MetricField {
        grid: ul.grid().clone(),
        unit: Unit::Db,
        nodes,
        values,
    })
}

fn require_gain(p: &Pattern, what: &str) -> Result<()> {
    if p.convention() == PowerConvention::GainProportional {
        Ok(())
    } else {
        Err(Error::WrongPattern(alloc::format!(
            "{what} must be gain-proportional (invert EIS first)"
        )))
    }
}

/// `|EIRP/mean(EIRP) − (1/EIS)/mean(1/EIS)|` per node, linear.
///
/// The DL must already be gain-proportional, i.e. it holds 1/EIS. Means are
/// area-weighted over the region.
pub fn delta_ip(
    ul: &Pattern,
    dl: &Pattern,
    region: &Region,
    pol: Polarization,
) -> Result<MetricField> {
    require_scalar_pair(ul, dl)?;
    require_gain(dl, "DL pattern")?;
    require_gain(ul, "UL pattern")?;
    let grid = ul.grid();
    let nodes = region_indices(grid, region)?;
    let w = AreaWeights::new(grid);
    let area: f64 = nodes.iter().map(|&i| w[i]).sum();
    let mean = |p: &Pattern| nodes.iter().map(|&i| w[i] * pol.power(p, i)).sum::<f64>() / area;
    let (mu, md) = (mean(ul), mean(dl));
    if !(mu > 0.0) {
        return Err(Error::ZeroPower("UL mean power over the region"));
    }
    if !(md > 0.0) {
        return Err(Error::ZeroPower("DL mean power over the region"));
    }
    let values = nodes
        .iter()
        .map(|&i| (pol.power(ul, i) / mu - pol.power(dl, i) / md).abs())
        .collect();
    Ok(MetricField {
        grid: grid.clone(),
        unit: Unit::Linear,
        nodes,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbClass {
    /// |ΔFB| ≥ 10 dB
    High,
    /// |ΔFB| ≤ 3 dB
    Low,
    Moderate,
}

pub fn classify_delta_fb(delta_fb_db: f64) -> FbClass {
    let a = delta_fb_db.abs();
    if a >= DELTA_FB_HIGH_DB {
        FbClass::High
    } else if a <= DELTA_FB_LOW_DB {
        FbClass::Low
    } else {
        FbClass::Moderate
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontBackReport {
    pub polarization: Polarization,
    /// Azimuth of the DL maximum, degrees.
    pub phi_max_dl: f64,
    pub delta_fb: f64,
    /// Per-link maxima over θ at φ_max,DL and φ_max,DL + 180°, dB.
    pub dl_front: f64,
    pub ul_front: f64,
    pub dl_back: f64,
    pub ul_back: f64,
}

impl FrontBackReport {
    pub fn class(&self) -> FbClass {
        classify_delta_fb(self.delta_fb)
    }
}

/// Cross-link front-to-back difference, dB.
///
/// The DL maximum is searched over the region's ring nodes (poles have no
/// azimuth); ties go to the smallest azimuth. Both links are then maximized
/// over the region's θ span at the DL-maximum azimuth and its opposite.
pub fn delta_fb(
    ul: &Pattern,
    dl: &Pattern,
    region: &Region,
    pol: Polarization,
) -> Result<FrontBackReport> {
    require_scalar_pair(ul, dl)?;
    let grid = ul.grid();
    let mask = crate::sphgrid::region_mask(grid, region)?;
    let n_phi = grid.n_phi();

    // per-azimuth maxima over the region's rings, dB
    let column_max = |p: &Pattern, j: usize| -> Option<f64> {
        (1..=grid.n_rings())
            .map(|k| grid.ring_node(k, j))
            .filter(|&i| mask[i])
            .map(|i| db10(pol.power(p, i)))
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    };

    let mut best: Option<(usize, f64)> = None;
    for j in 0..n_phi {
        if let Some(v) = column_max(dl, j) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((j, v));
            }
        }
    }
    let (j_front, dl_front) = best.ok_or(Error::EmptyRegion)?;
    let j_back = (j_front + n_phi / 2) % n_phi;
    let missing = || {
        Error::InvalidArgument(alloc::format!(
            "region lacks the azimuth opposite φ={}°",
            j_front as f64 * grid.delta_phi()
        ))
    };
    let ul_front = column_max(ul, j_front).ok_or_else(missing)?;
    let ul_back = column_max(ul, j_back).ok_or_else(missing)?;
    let dl_back = column_max(dl, j_back).ok_or_else(missing)?;
    Ok(FrontBackReport {
        polarization: pol,
        phi_max_dl: j_front as f64 * grid.delta_phi(),
        delta_fb: dl_front - ul_front + ul_back - dl_back,
        dl_front,
        ul_front,
        dl_back,
        ul_back,
    })
}

/// `10·log10(p_θ / p_φ)` over all nodes. `p_φ = 0` yields `+∞`, `p_θ = 0`
/// yields `−∞`; nodes without any power are left out.
pub fn xpd(p: &Pattern) -> MetricField {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for i in 0..p.len() {
        let (a, b) = (p.p_theta(i), p.p_phi(i));
        let v = match (a > 0.0, b > 0.0) {
            (false, false) => continue,
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (true, true) => db10(a / b),
        };
        nodes.push(i);
        values.push(v);
    }
    MetricField {
        grid: p.grid().clone(),
        unit: Unit::Db,
        nodes,
        values,
    }
}

/// Linear tilt `ψ = arctan √(p_θ/p_φ)` in degrees, in [0°, 90°].
pub fn tilt_angle(p_theta: f64, p_phi: f64) -> Option<f64> {
    if p_theta <= 0.0 && p_phi <= 0.0 {
        return None;
    }
    Some(to_deg(atan2(sqrt(p_theta), sqrt(p_phi))))
}

pub fn tilt(p: &Pattern) -> MetricField {
    let (nodes, values) = (0..p.len())
        .filter_map(|i| tilt_angle(p.p_theta(i), p.p_phi(i)).map(|v| (i, v)))
        .unzip();
    MetricField {
        grid: p.grid().clone(),
        unit: Unit::Degrees,
        nodes,
        values,
    }
}

/// `|ψ_UL − ψ_DL|` over region nodes where both tilts are defined.
pub fn delta_psi(ul: &Pattern, dl: &Pattern, region: &Region) -> Result<MetricField> {
    require_scalar_pair(ul, dl)?;
    let nodes_in = region_indices(ul.grid(), region)?;
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for i in nodes_in {
        let a = tilt_angle(ul.p_theta(i), ul.p_phi(i));
        let b = tilt_angle(dl.p_theta(i), dl.p_phi(i));
        if let (Some(a), Some(b)) = (a, b) {
            nodes.push(i);
            values.push((a - b).abs());
        }
    }
    if nodes.is_empty() {
        return Err(Error::ZeroPower("no node with power on both links"));
    }
    Ok(MetricField {
        grid: ul.grid().clone(),
        unit: Unit::Degrees,
        nodes,
        values,
    })
}

/// Co-polar loss `−20·log10 cos Δψ` (dB) between linear polarizations.
pub fn tilt_mismatch_loss_db(delta_psi_deg: f64) -> f64 {
    -20.0 * crate::math::log10(crate::math::cos(crate::math::to_rad(delta_psi_deg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Link;
    use alloc::vec;

    fn g15() -> SphericalGrid {
        SphericalGrid::new(15.0, 15.0, 180.0).unwrap()
    }

    fn scalar(g: &SphericalGrid, link: Link, mt: Vec<f64>, mp: Vec<f64>) -> Pattern {
        Pattern::scalar(
            g.clone(),
            link,
            "B",
            PowerConvention::GainProportional,
            mt,
            mp,
        )
        .unwrap()
    }

    #[test]
    fn ipb_examples() {
        let g = g15();
        let n = g.len();
        let m: Vec<f64> = (0..n).map(|i| 0.5 + (i % 5) as f64).collect();
        let ul = scalar(&g, Link::Ul, m.clone(), m.clone());
        let dl = scalar(&g, Link::Dl, m.clone(), m.clone());
        let f = ipb(&ul, &dl, &Region::FullMeasured, Polarization::Theta).unwrap();
        assert!(f.values.iter().all(|v| v.abs() < 1e-12));

        let flat = scalar(&g, Link::Ul, vec![1.0; n], vec![1.0; n]);
        let mut dented = vec![1.0; n];
        dented[40] = crate::math::pow(10.0, -10.0 / 20.0);
        let dl = scalar(&g, Link::Dl, dented.clone(), dented);
        let f = ipb(&flat, &dl, &Region::FullMeasured, Polarization::Total).unwrap();
        assert!((f.get(40).unwrap().abs() - 10.0).abs() < 1e-12);
        assert!(f.get(41).unwrap().abs() < 1e-12);

        // constant scale shifts, shape unchanged
        let f0 = ipb(&ul, &dl, &Region::Girdle, Polarization::Phi).unwrap();
        let f1 = ipb(&ul.scaled(2.0), &dl, &Region::Girdle, Polarization::Phi).unwrap();
        let shift = f1.values[0] - f0.values[0];
        assert!((shift - db10(4.0)).abs() < 1e-12);
        for (a, b) in f0.values.iter().zip(&f1.values) {
            assert!((b - a - shift).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_ip_two_node_oracle() {
        // region of two equal-area equator nodes
        let g = g15();
        let n = g.len();
        let region = Region::Custom {
            theta: (90.0, 90.0),
            phi: (0.0, 15.0),
        };
        let mut dl = vec![0.0; n];
        dl[g.index_of(90.0, 0.0).unwrap()] = sqrt(2.0);
        dl[g.index_of(90.0, 15.0).unwrap()] = sqrt(0.5);
        let ul = scalar(&g, Link::Ul, vec![1.0; n], vec![0.0; n]);
        let dl = scalar(&g, Link::Dl, dl, vec![0.0; n]);
        let f = delta_ip(&ul, &dl, &region, Polarization::Theta).unwrap();
        assert_eq!(f.len(), 2);
        for v in &f.values {
            assert!((v - 0.6).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn delta_ip_scale_invariant_and_errors() {
        let g = g15();
        let n = g.len();
        let m: Vec<f64> = (0..n).map(|i| 1.0 + (i % 3) as f64).collect();
        let ul = scalar(&g, Link::Ul, m.clone(), m.clone());
        let f = delta_ip(&ul, &ul.scaled(3.7), &Region::FullMeasured, Polarization::Total).unwrap();
        assert!(f.values.iter().all(|&v| v < 1e-12));
        let zero = scalar(&g, Link::Dl, vec![0.0; n], vec![0.0; n]);
        assert!(matches!(
            delta_ip(&ul, &zero, &Region::FullMeasured, Polarization::Total),
            Err(Error::ZeroPower(_))
        ));
        let eis = Pattern::scalar(g.clone(), Link::Dl, "B", PowerConvention::EisRaw, m.clone(), m)
            .unwrap();
        assert!(delta_ip(&ul, &eis, &Region::FullMeasured, Polarization::Total).is_err());
    }

    fn front_back_pair(g: &SphericalGrid, front: usize) -> (Pattern, Pattern) {
        // DL: 0 dB at the front azimuth, −20 dB behind; UL the other way round
        let n = g.len();
        let back = (front + g.n_phi() / 2) % g.n_phi();
        let low = crate::math::pow(10.0, -30.0 / 20.0);
        let mut ul = vec![low; n];
        let mut dl = vec![low; n];
        for k in 1..=g.n_rings() {
            dl[g.ring_node(k, front)] = 0.1;
            dl[g.ring_node(k, back)] = 0.1;
            ul[g.ring_node(k, front)] = 0.1;
            ul[g.ring_node(k, back)] = 0.1;
        }
        dl[g.ring_node(6, front)] = 1.0;
        ul[g.ring_node(6, back)] = 1.0;
        (
            scalar(g, Link::Ul, ul, vec![0.0; n]),
            scalar(g, Link::Dl, dl, vec![0.0; n]),
        )
    }

    #[test]
    fn delta_fb_opposing_focus() {
        let g = g15();
        let (ul, dl) = front_back_pair(&g, 4);
        let r = delta_fb(&ul, &dl, &Region::FullMeasured, Polarization::Theta).unwrap();
        assert_eq!(r.phi_max_dl, 60.0);
        assert!((r.delta_fb - 40.0).abs() < 1e-9, "{}", r.delta_fb);
        assert_eq!(r.class(), FbClass::High);
        let same = delta_fb(&ul, &ul, &Region::Girdle, Polarization::Theta).unwrap();
        assert_eq!(same.delta_fb, 0.0);
        assert_eq!(classify_delta_fb(-2.5), FbClass::Low);
        assert_eq!(classify_delta_fb(5.0), FbClass::Moderate);
    }

    #[test]
    fn delta_fb_tie_breaks_to_smallest_azimuth() {
        let g = g15();
        let n = g.len();
        let p = scalar(&g, Link::Dl, vec![1.0; n], vec![1.0; n]);
        let r = delta_fb(&p, &p, &Region::FullMeasured, Polarization::Phi).unwrap();
        assert_eq!(r.phi_max_dl, 0.0);
    }

    #[test]
    fn xpd_and_tilt_examples() {
        let g = SphericalGrid::new(90.0, 90.0, 180.0).unwrap();
        let n = g.len();
        let mt = vec![1.0, sqrt(2.0), 1.0, 0.0, 0.0, 1.0];
        let mp = vec![1.0, 1.0, 0.0, 1.0, 0.0, crate::math::pow(10.0, -3.0 / 20.0)];
        assert_eq!(n, 6);
        let p = scalar(&g, Link::Ul, mt, mp);
        let x = xpd(&p);
        assert_eq!(x.get(0), Some(0.0));
        assert!((x.get(1).unwrap() - 3.0103).abs() < 1e-4);
        assert_eq!(x.get(2), Some(f64::INFINITY));
        assert_eq!(x.get(3), Some(f64::NEG_INFINITY));
        assert_eq!(x.get(4), None);
        let t = tilt(&p);
        assert!((t.get(0).unwrap() - 45.0).abs() < 1e-12);
        assert_eq!(t.get(2), Some(90.0));
        assert_eq!(t.get(3), Some(0.0));
        assert_eq!(t.get(4), None);
        let want = to_deg(libm::atan(crate::math::pow(10.0, 3.0 / 20.0)));
        assert!((t.get(5).unwrap() - want).abs() < 1e-12);
        assert!((want - 54.7).abs() < 0.05);
    }

    #[test]
    fn delta_psi_examples() {
        let g = g15();
        let n = g.len();
        let a = scalar(&g, Link::Ul, vec![1.0; n], vec![0.0; n]);
        let b = scalar(&g, Link::Dl, vec![0.0; n], vec![1.0; n]);
        let d = delta_psi(&a, &b, &Region::FullMeasured).unwrap();
        assert!(d.values.iter().all(|&v| v == 90.0));
        let d = delta_psi(&a, &a, &Region::Girdle).unwrap();
        assert!(d.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mismatch_loss_anchors() {
        assert!((tilt_mismatch_loss_db(24.0) - 0.8).abs() < 0.05);
        assert!((tilt_mismatch_loss_db(56.0) - 5.0).abs() < 0.1);
    }
}
