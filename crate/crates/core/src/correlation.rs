//! Footprint-weighted signal correlation between two patterns, sphere maps of
//! it over footprint centres, and the scalar-vs-complex quadruple relation.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::footprint::{build_footprint_with, FootprintDensity, FootprintShape, FootprintSpec, NodeGeometry};
use crate::math::{cabs, pow, sqrt};
use crate::pattern::{Pattern, PowerConvention};
use crate::polarimetry::linear_fit;
use crate::sphgrid::{region_indices, AreaWeights, Region, SphericalGrid};

pub const DEFAULT_XPD_DB: f64 = 3.0;
pub const DEFAULT_SIGMA_REL: f64 = 15.0;
/// Table thresholds: a map minimum at or above this is "high", a mean at or below it "low".
pub const RHO_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrelationMode {
    #[default]
    Complex,
    /// Field magnitudes only, phases dropped.
    Scalar,
}

impl CorrelationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorrelationMode::Complex => "complex",
            CorrelationMode::Scalar => "scalar",
        }
    }
}

fn xpd_linear(xpd_db: f64) -> f64 {
    pow(10.0, xpd_db / 10.0)
}

fn field(z: Complex64, mode: CorrelationMode) -> Complex64 {
    match mode {
        CorrelationMode::Complex => z,
        CorrelationMode::Scalar => Complex64::new(cabs(z), 0.0),
    }
}

fn check_pair(hj: &Pattern, hk: &Pattern) -> Result<()> {
    hj.require_same_grid(hk)?;
    if hj.convention() == PowerConvention::EisRaw || hk.convention() == PowerConvention::EisRaw {
        return Err(Error::WrongPattern(
            "correlation needs gain-proportional patterns; invert EIS first".into(),
        ));
    }
    Ok(())
}

/// `C_jk = Σ p_S (X·h_jθ h*_kθ + h_jφ h*_kφ)` over the footprint members.
fn cross_power(
    hj: &Pattern,
    hk: &Pattern,
    fp: &FootprintDensity,
    x: f64,
    mode: CorrelationMode,
) -> Complex64 {
    let mut c = Complex64::new(0.0, 0.0);
    for (i, p) in fp.iter() {
        let t = field(hj.e_theta()[i], mode) * field(hk.e_theta()[i], mode).conj();
        let f = field(hj.e_phi()[i], mode) * field(hk.e_phi()[i], mode).conj();
        c += (t * x + f) * p;
    }
    c
}

fn correlate_unchecked(
    hj: &Pattern,
    hk: &Pattern,
    fp: &FootprintDensity,
    x: f64,
    mode: CorrelationMode,
) -> Result<Complex64> {
    let cjj = cross_power(hj, hj, fp, x, mode).re;
    let ckk = cross_power(hk, hk, fp, x, mode).re;
    if !(cjj > 0.0) || !(ckk > 0.0) {
        return Err(Error::ZeroPower("pattern vanishes on the footprint"));
    }
    let cjk = cross_power(hj, hk, fp, x, mode);
    Ok(cjk / sqrt(cjj * ckk))
}

/// Correlation coefficient `ρ = C_jk / √(C_jj C_kk)`; `p_S` is the complete
/// quadrature weight.
pub fn correlate(
    hj: &Pattern,
    hk: &Pattern,
    fp: &FootprintDensity,
    xpd_db: f64,
    mode: CorrelationMode,
) -> Result<Complex64> {
    check_pair(hj, hk)?;
    if fp.members.iter().any(|&i| i >= hj.len()) {
        return Err(Error::GridMismatch);
    }
    correlate_unchecked(hj, hk, fp, xpd_linear(xpd_db), mode)
}

/// Envelope signal correlation from a scalar pattern correlation, `ρ_s⁴`.
pub fn envelope_estimate(rho_scalar: f64) -> f64 {
    let r2 = rho_scalar * rho_scalar;
    r2 * r2
}

/// Correlation at one footprint centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterValue {
    pub rho: Complex64,
    pub truncated: bool,
}

/// Precomputed state for evaluating a map centre by centre. Centres are the
/// grid nodes; each evaluation is independent, so callers may evaluate them
/// in any order or in parallel and hand the results to [`MapBuilder::finish`].
pub struct MapBuilder<'a> {
    hj: &'a Pattern,
    hk: &'a Pattern,
    geom: NodeGeometry,
    weights: AreaWeights,
    spec: FootprintSpec,
    xpd_db: f64,
    x: f64,
    mode: CorrelationMode,
}

impl<'a> MapBuilder<'a> {
    pub fn new(
        hj: &'a Pattern,
        hk: &'a Pattern,
        sigma_rel: f64,
        xpd_db: f64,
        mode: CorrelationMode,
    ) -> Result<Self> {
        check_pair(hj, hk)?;
        if !xpd_db.is_finite() {
            return Err(Error::InvalidArgument("XPD must be finite".into()));
        }
        let grid = hj.grid();
        Ok(MapBuilder {
            hj,
            hk,
            geom: NodeGeometry::new(grid),
            weights: AreaWeights::new(grid),
            spec: FootprintSpec::new(sigma_rel, 0.0, 0.0)?,
            xpd_db,
            x: xpd_linear(xpd_db),
            mode,
        })
    }

    pub fn with_shape(mut self, shape: FootprintShape) -> Self {
        self.spec = self.spec.with_shape(shape);
        self
    }

    pub fn len(&self) -> usize {
        self.hj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hj.is_empty()
    }

    pub fn footprint(&self, center: usize) -> Result<FootprintDensity> {
        let n = self.hj.grid().node(center);
        let spec = self.spec.with_center(n.theta_deg, n.phi_deg);
        build_footprint_with(&self.geom, &self.weights, &spec)
    }

    pub fn center(&self, center: usize) -> Result<CenterValue> {
        let fp = self.footprint(center)?;
        Ok(CenterValue {
            rho: correlate_unchecked(self.hj, self.hk, &fp, self.x, self.mode)?,
            truncated: fp.truncated,
        })
    }

    pub fn finish(self, values: Vec<CenterValue>) -> Result<CorrelationMap> {
        if values.len() != self.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {} centre values, got {}",
                self.len(),
                values.len()
            )));
        }
        let (rho, truncated) = values.into_iter().map(|v| (v.rho, v.truncated)).unzip();
        Ok(CorrelationMap {
            grid: self.hj.grid().clone(),
            rho,
            truncated,
            mode: self.mode,
            xpd_db: self.xpd_db,
            sigma_rel: self.spec.sigma_rel(),
        })
    }
}

/// Correlation coefficient per footprint centre (one centre per grid node).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    pub grid: SphericalGrid,
    pub rho: Vec<Complex64>,
    /// The footprint at this centre was cut by the grid's θ limit.
    pub truncated: Vec<bool>,
    pub mode: CorrelationMode,
    pub xpd_db: f64,
    pub sigma_rel: f64,
}

/// Sequential map evaluation.
pub fn correlation_map(
    hj: &Pattern,
    hk: &Pattern,
    sigma_rel: f64,
    xpd_db: f64,
    mode: CorrelationMode,
) -> Result<CorrelationMap> {
    let b = MapBuilder::new(hj, hk, sigma_rel, xpd_db, mode)?;
    let values = (0..b.len()).map(|i| b.center(i)).collect::<Result<Vec<_>>>()?;
    b.finish(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanKind {
    #[default]
    AreaWeighted,
    Arithmetic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapSummary {
    pub region: Region,
    pub centers: usize,
    pub min: f64,
    pub mean: f64,
    pub truncated: usize,
}

impl MapSummary {
    pub fn high_minimum(&self) -> bool {
        self.min >= RHO_THRESHOLD
    }
    pub fn low_mean(&self) -> bool {
        self.mean <= RHO_THRESHOLD
    }
}

impl CorrelationMap {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.rho.iter().map(|&r| cabs(r)).collect()
    }

    /// Minimum and mean of |ρ| over the centres in `region`.
    pub fn summary(&self, region: &Region, mean: MeanKind) -> Result<MapSummary> {
        let idx = region_indices(&self.grid, region)?;
        let w = AreaWeights::new(&self.grid);
        let (mut min, mut acc, mut wsum) = (f64::INFINITY, 0.0, 0.0);
        for &i in &idx {
            let a = cabs(self.rho[i]);
            min = min.min(a);
            let wi = match mean {
                MeanKind::AreaWeighted => w[i],
                MeanKind::Arithmetic => 1.0,
            };
            acc += wi * a;
            wsum += wi;
        }
        Ok(MapSummary {
            region: *region,
            centers: idx.len(),
            min,
            mean: acc / wsum,
            truncated: idx.iter().filter(|&&i| self.truncated[i]).count(),
        })
    }
}

/// Regression of |ρ_complex| on ρ_scalar² over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupleFit {
    pub region: Region,
    pub centers: usize,
    /// Slope through the origin.
    pub gamma_fit: f64,
    /// Pearson correlation; `None` when either coordinate has zero spread.
    pub rho_fit: Option<f64>,
}

impl QuadrupleFit {
    pub fn degenerate(&self) -> bool {
        self.rho_fit.is_none()
    }
}

pub fn quadruple_fit(
    complex: &CorrelationMap,
    scalar: &CorrelationMap,
    region: &Region,
) -> Result<QuadrupleFit> {
    if !complex.grid.same_nodes(&scalar.grid) {
        return Err(Error::GridMismatch);
    }
    let idx = region_indices(&complex.grid, region)?;
    if idx.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: idx.len(),
        });
    }
    let pts: Vec<(f64, f64)> = idx
        .iter()
        .map(|&i| {
            let s = cabs(scalar.rho[i]);
            (s * s, cabs(complex.rho[i]))
        })
        .collect();
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x * x, b + x * y));
    if sxx == 0.0 {
        return Err(Error::ZeroPower("scalar correlation vanishes over the region"));
    }
    let spread = |f: fn(&(f64, f64)) -> f64| {
        let first = f(&pts[0]);
        pts.iter().any(|p| f(p) != first)
    };
    let rho_fit = if spread(|p| p.0) && spread(|p| p.1) {
        linear_fit(&pts).map(|(_, _, r)| r)
    } else {
        None
    };
    Ok(QuadrupleFit {
        region: *region,
        centers: pts.len(),
        gamma_fit: sxy / sxx,
        rho_fit,
    })
}
