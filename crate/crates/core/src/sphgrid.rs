//! Regular spherical grids, quadrature area weights and region masks.
//!
//! Nodes are ordered north pole first, then ring by ring in increasing θ with
//! φ increasing inside a ring, then the south pole when the grid reaches 180°.
//! Each pole is a single logical node (its φ is reported as 0°).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, sin, to_rad, PI};

/// Pole cap tuning factor for the area weights.
pub const POLE_CAP_GAMMA: f64 = 1.337;

/// Lower edge (inclusive) of the girdle in inclination, degrees.
pub const GIRDLE_THETA_MIN: f64 = 60.0;
/// Upper edge (inclusive) of the girdle in inclination, degrees.
pub const GIRDLE_THETA_MAX: f64 = 90.0;

const ANGLE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    NorthPole,
    Ring,
    SouthPole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_pole(&self) -> bool {
        self.kind != NodeKind::Ring
    }

    /// Elevation above the horizontal plane, degrees.
    pub fn elevation_deg(&self) -> f64 {
        90.0 - self.theta_deg
    }

    /// Unit vector (x, y, z) of the direction.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (t, p) = (to_rad(self.theta_deg), to_rad(self.phi_deg));
        [sin(t) * cos(p), sin(t) * sin(p), cos(t)]
    }
}

/// Regular (θ, φ) grid truncated at `theta_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalGrid {
    delta_theta: f64,
    delta_phi: f64,
    theta_max: f64,
    n_rings: usize,
    n_phi: usize,
    south_pole: bool,
}

/// Integer `n` with `total / step == n` up to rounding, if any.
fn exact_divisions(total: f64, step: f64) -> Option<usize> {
    let q = total / step;
    let n = libm::round(q);
    if n >= 1.0 && (q - n).abs() <= ANGLE_EPS * n {
        Some(n as usize)
    } else {
        None
    }
}

impl SphericalGrid {
    /// Builds a grid covering θ ∈ [0°, theta_max], φ ∈ [0°, 360°).
    ///
    /// 180° must be an integer multiple of `delta_theta` and 360° an even multiple
    /// of `delta_phi` (so that every azimuth has its opposite on the grid).
    pub fn new(delta_theta: f64, delta_phi: f64, theta_max: f64) -> Result<Self> {
        if !(delta_theta > 0.0 && delta_phi > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacings must be positive (Δθ={delta_theta}, Δφ={delta_phi})"
            )));
        }
        let n_theta = exact_divisions(180.0, delta_theta).ok_or_else(|| {
            Error::InvalidGrid(format!("Δθ={delta_theta}° does not divide 180°"))
        })?;
        let n_phi = exact_divisions(360.0, delta_phi)
            .ok_or_else(|| Error::InvalidGrid(format!("Δφ={delta_phi}° does not divide 360°")))?;
        if n_phi % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "360°/Δφ = {n_phi} is odd; opposite azimuths would be off-grid"
            )));
        }
        if !(theta_max > 0.0 && theta_max <= 180.0 + ANGLE_EPS) {
            return Err(Error::InvalidGrid(format!(
                "θ_max={theta_max}° must lie in (0°, 180°]"
            )));
        }
        let south_pole = theta_max >= 180.0 - ANGLE_EPS;
        let last_ring = libm::floor(theta_max / delta_theta + ANGLE_EPS) as usize;
        let n_rings = last_ring.min(n_theta - 1);
        Ok(SphericalGrid {
            delta_theta,
            delta_phi,
            theta_max: theta_max.min(180.0),
            n_rings,
            n_phi,
            south_pole,
        })
    }

    pub fn delta_theta(&self) -> f64 {
        self.delta_theta
    }
    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }
    /// Number of interior rings (poles excluded).
    pub fn n_rings(&self) -> usize {
        self.n_rings
    }
    /// Azimuth nodes per ring.
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }
    pub fn has_south_pole(&self) -> bool {
        self.south_pole
    }

    pub fn len(&self) -> usize {
        1 + self.n_rings * self.n_phi + usize::from(self.south_pole)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Inclination of every θ level, poles included.
    pub fn theta_nodes(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..=self.n_rings)
            .map(|k| k as f64 * self.delta_theta)
            .collect();
        if self.south_pole {
            v.push(180.0);
        }
        v
    }

    pub fn phi_nodes(&self) -> Vec<f64> {
        (0..self.n_phi).map(|j| j as f64 * self.delta_phi).collect()
    }

    /// Ring θ for ring index `k` in `1..=n_rings`.
    pub fn ring_theta(&self, k: usize) -> f64 {
        k as f64 * self.delta_theta
    }

    /// Node index of ring `k` (1-based), azimuth index `j`.
    pub fn ring_node(&self, k: usize, j: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.n_rings && j < self.n_phi);
        1 + (k - 1) * self.n_phi + j
    }

    pub fn south_pole_index(&self) -> Option<usize> {
        self.south_pole.then(|| self.len() - 1)
    }

    /// `(ring, azimuth index)` of a ring node, `None` for poles.
    pub fn ring_position(&self, index: usize) -> Option<(usize, usize)> {
        if index == 0 || Some(index) == self.south_pole_index() || index >= self.len() {
            return None;
        }
        let r = index - 1;
        Some((1 + r / self.n_phi, r % self.n_phi))
    }

    pub fn node(&self, index: usize) -> Node {
        if index == 0 {
            return Node {
                theta_deg: 0.0,
                phi_deg: 0.0,
                kind: NodeKind::NorthPole,
            };
        }
        match self.ring_position(index) {
            Some((k, j)) => Node {
                theta_deg: self.ring_theta(k),
                phi_deg: j as f64 * self.delta_phi,
                kind: NodeKind::Ring,
            },
            None => {
                assert!(index < self.len(), "node index {index} out of range");
                Node {
                    theta_deg: 180.0,
                    phi_deg: 0.0,
                    kind: NodeKind::SouthPole,
                }
            }
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// Unit vectors of all nodes, in node order.
    pub fn unit_vectors(&self) -> Vec<[f64; 3]> {
        self.nodes().map(|n| n.unit_vector()).collect()
    }

    /// Index of the node at (θ, φ), tolerating rounding in the inputs.
    /// Any φ is accepted at a pole.
    pub fn index_of(&self, theta_deg: f64, phi_deg: f64) -> Option<usize> {
        let kt = theta_deg / self.delta_theta;
        let k = libm::round(kt);
        if (kt - k).abs() > 1e-6 || k < 0.0 {
            return None;
        }
        let k = k as usize;
        if k == 0 {
            return Some(0);
        }
        if libm::round(180.0 / self.delta_theta) as usize == k {
            return self.south_pole_index();
        }
        if k > self.n_rings {
            return None;
        }
        let phi = libm::fmod(phi_deg, 360.0);
        let phi = if phi < 0.0 { phi + 360.0 } else { phi };
        let jp = phi / self.delta_phi;
        let j = libm::round(jp);
        if (jp - j).abs() > 1e-6 {
            return None;
        }
        Some(self.ring_node(k, (j as usize) % self.n_phi))
    }

    /// True when `other` has the same node set.
    pub fn same_nodes(&self, other: &SphericalGrid) -> bool {
        self.n_rings == other.n_rings
            && self.n_phi == other.n_phi
            && self.south_pole == other.south_pole
            && (self.delta_theta - other.delta_theta).abs() <= ANGLE_EPS
            && (self.delta_phi - other.delta_phi).abs() <= ANGLE_EPS
    }
}

/// Quadrature area (steradians) per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaWeights(Vec<f64>);

impl AreaWeights {
    /// Interior nodes get `sin θ·Δθ·Δφ`; each pole carries the whole cap
    /// `(γ/2)·2π·(1 − cos(Δθ/2))` with γ = [`POLE_CAP_GAMMA`].
    pub fn new(grid: &SphericalGrid) -> Self {
        let dt = to_rad(grid.delta_theta());
        let dp = to_rad(grid.delta_phi());
        let cap = POLE_CAP_GAMMA / 2.0 * 2.0 * PI * (1.0 - cos(dt / 2.0));
        let w = grid
            .nodes()
            .map(|n| match n.kind {
                NodeKind::Ring => sin(to_rad(n.theta_deg)) * dt * dp,
                _ => cap,
            })
            .collect();
        AreaWeights(w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl core::ops::Index<usize> for AreaWeights {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn area_weights(grid: &SphericalGrid) -> AreaWeights {
    AreaWeights::new(grid)
}

/// Spherical region of investigation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Everything down to the grid's θ_max.
    FullMeasured,
    /// 0° ≤ elevation ≤ 30°, i.e. 60° ≤ θ ≤ 90°.
    Girdle,
    /// Measured nodes not in the girdle.
    OutsideGirdle,
    /// Closed θ interval and φ interval in degrees. A φ interval with
    /// `lo > hi` wraps through 0°. Poles only test the θ interval.
    Custom { theta: (f64, f64), phi: (f64, f64) },
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::FullMeasured => "sphere",
            Region::Girdle => "girdle",
            Region::OutsideGirdle => "outside_girdle",
            Region::Custom { .. } => "custom",
        }
    }

    pub fn contains(&self, node: &Node) -> bool {
        let in_girdle = node.theta_deg >= GIRDLE_THETA_MIN - ANGLE_EPS
            && node.theta_deg <= GIRDLE_THETA_MAX + ANGLE_EPS;
        match *self {
            Region::FullMeasured => true,
            Region::Girdle => in_girdle,
            Region::OutsideGirdle => !in_girdle,
            Region::Custom { theta, phi } => {
                let t_ok =
                    node.theta_deg >= theta.0 - ANGLE_EPS && node.theta_deg <= theta.1 + ANGLE_EPS;
                if !t_ok {
                    return false;
                }
                if node.is_pole() {
                    return true;
                }
                let p = node.phi_deg;
                let (lo, hi) = (norm360(phi.0), norm360(phi.1));
                if phi.1 - phi.0 >= 360.0 - ANGLE_EPS {
                    true
                } else if lo <= hi {
                    p >= lo - ANGLE_EPS && p <= hi + ANGLE_EPS
                } else {
                    p >= lo - ANGLE_EPS || p <= hi + ANGLE_EPS
                }
            }
        }
    }
}

fn norm360(a: f64) -> f64 {
    let w = libm::fmod(a, 360.0);
    if w < 0.0 {
        w + 360.0
    } else {
        w
    }
}

/// Inclusion flag per node. Nodes beyond θ_max do not exist on the grid, so
/// [`Region::FullMeasured`] selects every node.
pub fn region_mask(grid: &SphericalGrid, region: &Region) -> Result<Vec<bool>> {
    if let Region::Custom { theta, .. } = region {
        if theta.0 > theta.1 {
            return Err(Error::InvalidArgument(format!(
                "custom region θ interval [{}, {}] is reversed",
                theta.0, theta.1
            )));
        }
    }
    let mask: Vec<bool> = grid.nodes().map(|n| region.contains(&n)).collect();
    if mask.iter().any(|&m| m) {
        Ok(mask)
    } else {
        Err(Error::EmptyRegion)
    }
}

/// Node indices selected by `region`.
pub fn region_indices(grid: &SphericalGrid, region: &Region) -> Result<Vec<usize>> {
    Ok(region_mask(grid, region)?
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        assert_eq!(SphericalGrid::new(15.0, 15.0, 180.0).unwrap().len(), 266);
        assert_eq!(SphericalGrid::new(3.0, 3.0, 180.0).unwrap().len(), 7082);
        let g = SphericalGrid::new(15.0, 15.0, 150.0).unwrap();
        assert_eq!(g.len(), 241);
        assert!(!g.has_south_pole());
        assert_eq!(g.n_rings(), 10);
    }

    #[test]
    fn rejects_non_divisors() {
        assert!(matches!(
            SphericalGrid::new(7.0, 15.0, 180.0),
            Err(Error::InvalidGrid(_))
        ));
        assert!(SphericalGrid::new(15.0, 7.0, 180.0).is_err());
        assert!(SphericalGrid::new(15.0, 15.0, 0.0).is_err());
        assert!(SphericalGrid::new(15.0, 15.0, 190.0).is_err());
        // 360/40 = 9 azimuths, odd
        assert!(SphericalGrid::new(15.0, 40.0, 180.0).is_err());
    }

    #[test]
    fn equator_weight() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let w = AreaWeights::new(&g);
        let i = g.index_of(90.0, 0.0).unwrap();
        let expect = (PI / 12.0) * (PI / 12.0);
        assert!((w[i] - expect).abs() < 1e-15);
        assert!((w[i] - 0.06854).abs() < 1e-5);
    }

    #[test]
    fn sphere_area_closure() {
        for d in [3.0, 15.0] {
            let g = SphericalGrid::new(d, d, 180.0).unwrap();
            let w = AreaWeights::new(&g);
            let rel = (w.total() - 4.0 * PI).abs() / (4.0 * PI);
            assert!(rel <= 1e-5, "Δ={d}: rel err {rel}");
            assert!(w.as_slice().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn region_examples() {
        let g = SphericalGrid::new(15.0, 15.0, 150.0).unwrap();
        let at = |t: f64| g.node(g.index_of(t, 0.0).unwrap());
        assert!(Region::Girdle.contains(&at(75.0)));
        assert!(!Region::Girdle.contains(&at(30.0)));
        // θ=160° is not a node of a 150°-truncated grid at all
        assert!(g.index_of(165.0, 0.0).is_none());
        let full = SphericalGrid::new(5.0, 5.0, 180.0).unwrap();
        let n160 = full.node(full.index_of(160.0, 0.0).unwrap());
        let m = Region::Custom {
            theta: (0.0, 150.0),
            phi: (0.0, 360.0),
        };
        assert!(!m.contains(&n160));
    }

    #[test]
    fn girdle_count() {
        for (dt, dp) in [(15.0, 15.0), (3.0, 3.0), (5.0, 10.0)] {
            let g = SphericalGrid::new(dt, dp, 180.0).unwrap();
            let n = region_indices(&g, &Region::Girdle).unwrap().len();
            let rings = libm::round(30.0 / dt) as usize + 1;
            assert_eq!(n, rings * g.n_phi());
        }
    }

    #[test]
    fn empty_region_rejected() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let r = Region::Custom {
            theta: (91.0, 104.0),
            phi: (0.0, 360.0),
        };
        assert_eq!(region_mask(&g, &r), Err(Error::EmptyRegion));
    }

    #[test]
    fn wrapped_phi_interval() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let r = Region::Custom {
            theta: (90.0, 90.0),
            phi: (330.0, 30.0),
        };
        let idx = region_indices(&g, &r).unwrap();
        let phis: Vec<f64> = idx.iter().map(|&i| g.node(i).phi_deg).collect();
        assert_eq!(phis, [0.0, 15.0, 30.0, 330.0, 345.0]);
    }

    #[test]
    fn index_roundtrip() {
        let g = SphericalGrid::new(3.0, 3.0, 150.0).unwrap();
        for i in 0..g.len() {
            let n = g.node(i);
            assert_eq!(g.index_of(n.theta_deg, n.phi_deg), Some(i));
        }
        assert_eq!(g.index_of(0.0, 123.0), Some(0));
        assert_eq!(g.index_of(90.0, 360.0), g.index_of(90.0, 0.0));
    }
}
