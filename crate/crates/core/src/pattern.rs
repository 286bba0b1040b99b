//! Dual-polarized pattern samples on a [`SphericalGrid`].
//!
//! Fields are stored linearly (volts-proportional). Scalar patterns carry the
//! field magnitude in the real part with a zero imaginary part; their power is
//! the squared magnitude.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cabs, carg, from_polar, sqrt, wrap_deg, to_deg, to_rad};
use crate::sphgrid::{region_indices, AreaWeights, Region, SphericalGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Link {
    Ul,
    Dl,
}

impl Link {
    pub fn as_str(&self) -> &'static str {
        match self {
            Link::Ul => "UL",
            Link::Dl => "DL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    Complex,
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerConvention {
    /// Power proportional to antenna gain (EIRP, or inverted EIS).
    GainProportional,
    /// Raw effective isotropic sensitivity: smaller means better.
    EisRaw,
}

/// Non-fatal conditions reported alongside a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// `invert_eis` called on a pattern that is already gain-proportional.
    AlreadyInverted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    grid: SphericalGrid,
    link: Link,
    band: String,
    kind: PatternKind,
    convention: PowerConvention,
    e_theta: Vec<Complex64>,
    e_phi: Vec<Complex64>,
}

impl Pattern {
    /// Complex dual-polarized pattern (always gain-proportional).
    pub fn complex(
        grid: SphericalGrid,
        link: Link,
        band: impl Into<String>,
        e_theta: Vec<Complex64>,
        e_phi: Vec<Complex64>,
    ) -> Result<Self> {
        Self::with_fields(
            grid,
            link,
            band,
            PatternKind::Complex,
            PowerConvention::GainProportional,
            e_theta,
            e_phi,
        )
    }

    /// Scalar pattern from non-negative field magnitudes.
    pub fn scalar(
        grid: SphericalGrid,
        link: Link,
        band: impl Into<String>,
        convention: PowerConvention,
        mag_theta: Vec<f64>,
        mag_phi: Vec<f64>,
    ) -> Result<Self> {
        let c = |v: Vec<f64>| v.into_iter().map(|m| Complex64::new(m, 0.0)).collect();
        Self::with_fields(
            grid,
            link,
            band,
            PatternKind::Scalar,
            convention,
            c(mag_theta),
            c(mag_phi),
        )
    }

    /// Scalar pattern from per-polarization powers in dB (relative or absolute).
    pub fn from_power_db(
        grid: SphericalGrid,
        link: Link,
        band: impl Into<String>,
        convention: PowerConvention,
        p_theta_db: &[f64],
        p_phi_db: &[f64],
    ) -> Result<Self> {
        let m = |v: &[f64]| v.iter().map(|&db| crate::math::pow(10.0, db / 20.0)).collect();
        Self::scalar(grid, link, band, convention, m(p_theta_db), m(p_phi_db))
    }

    pub fn with_fields(
        grid: SphericalGrid,
        link: Link,
        band: impl Into<String>,
        kind: PatternKind,
        convention: PowerConvention,
        e_theta: Vec<Complex64>,
        e_phi: Vec<Complex64>,
    ) -> Result<Self> {
        let n = grid.len();
        if e_theta.len() != n || e_phi.len() != n {
            return Err(Error::WrongPattern(format!(
                "expected {n} samples per polarization, got {} and {}",
                e_theta.len(),
                e_phi.len()
            )));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !e_theta.iter().chain(&e_phi).all(finite) {
            return Err(Error::WrongPattern("non-finite field sample".into()));
        }
        if kind == PatternKind::Scalar
            && !e_theta
                .iter()
                .chain(&e_phi)
                .all(|z| z.im == 0.0 && z.re >= 0.0)
        {
            return Err(Error::WrongPattern(
                "scalar pattern needs real non-negative magnitudes".into(),
            ));
        }
        if kind == PatternKind::Complex && convention == PowerConvention::EisRaw {
            return Err(Error::WrongPattern(
                "raw EIS is a power quantity; complex patterns must be gain-proportional".into(),
            ));
        }
        Ok(Pattern {
            grid,
            link,
            band: band.into(),
            kind,
            convention,
            e_theta,
            e_phi,
        })
    }

    pub fn grid(&self) -> &SphericalGrid {
        &self.grid
    }
    pub fn link(&self) -> Link {
        self.link
    }
    pub fn band(&self) -> &str {
        &self.band
    }
    pub fn kind(&self) -> PatternKind {
        self.kind
    }
    pub fn convention(&self) -> PowerConvention {
        self.convention
    }
    pub fn e_theta(&self) -> &[Complex64] {
        &self.e_theta
    }
    pub fn e_phi(&self) -> &[Complex64] {
        &self.e_phi
    }
    pub fn len(&self) -> usize {
        self.e_theta.len()
    }
    pub fn is_empty(&self) -> bool {
        self.e_theta.is_empty()
    }

    pub fn p_theta(&self, i: usize) -> f64 {
        self.e_theta[i].norm_sqr()
    }
    pub fn p_phi(&self, i: usize) -> f64 {
        self.e_phi[i].norm_sqr()
    }
    pub fn total_power(&self, i: usize) -> f64 {
        self.p_theta(i) + self.p_phi(i)
    }

    pub fn set_link(&mut self, link: Link) {
        self.link = link;
    }
    pub fn set_band(&mut self, band: impl Into<String>) {
        self.band = band.into();
    }

    /// Multiplies both polarizations by a real factor.
    pub fn scaled(&self, factor: f64) -> Pattern {
        let mut p = self.clone();
        for z in p.e_theta.iter_mut().chain(p.e_phi.iter_mut()) {
            *z *= factor;
        }
        p
    }

    /// Same pattern with field magnitudes only (scalar kind).
    pub fn to_scalar(&self) -> Pattern {
        let m = |v: &[Complex64]| v.iter().map(|&z| Complex64::new(cabs(z), 0.0)).collect();
        Pattern {
            kind: PatternKind::Scalar,
            e_theta: m(&self.e_theta),
            e_phi: m(&self.e_phi),
            ..self.clone()
        }
    }

    pub(crate) fn require_same_grid(&self, other: &Pattern) -> Result<()> {
        if self.grid.same_nodes(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Negates per-node power in dB (`p → 1/p` linearly, field magnitude `m → 1/m`)
/// so that EIS data becomes gain-proportional. The global reference constant
/// is dropped. Phases, if any, are kept.
pub fn invert_eis(p: &Pattern) -> Result<(Pattern, Option<Warning>)> {
    if p.convention == PowerConvention::GainProportional {
        return Ok((p.clone(), Some(Warning::AlreadyInverted)));
    }
    let inv = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        v.iter()
            .map(|&z| {
                let m = cabs(z);
                if m > 0.0 {
                    Ok(from_polar(1.0 / m, carg(z)))
                } else {
                    Err(Error::ZeroPower("EIS sample of zero power cannot be inverted"))
                }
            })
            .collect()
    };
    let out = Pattern {
        e_theta: inv(&p.e_theta)?,
        e_phi: inv(&p.e_phi)?,
        convention: PowerConvention::GainProportional,
        ..p.clone()
    };
    Ok((out, None))
}

/// True when one spacing is an integer multiple of the other.
fn commensurate(a: f64, b: f64) -> bool {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let q = hi / lo;
    (q - libm::round(q)).abs() <= 1e-9 * q
}

/// Splits `x / step` into an integer cell index and a fractional weight,
/// snapping weights that are zero up to rounding.
fn cell(x: f64, step: f64) -> (usize, f64) {
    let q = x / step;
    let r = libm::round(q);
    if (q - r).abs() <= 1e-9 {
        return (r as usize, 0.0);
    }
    let f = libm::floor(q);
    (f as usize, q - f)
}

/// Linear interpolation of field magnitude with shortest-arc phase.
fn lerp_field(a: Complex64, b: Complex64, w: f64) -> Complex64 {
    if w == 0.0 {
        return a;
    }
    let (ma, mb) = (cabs(a), cabs(b));
    let mag = ma + w * (mb - ma);
    if a.im == 0.0 && b.im == 0.0 && a.re >= 0.0 && b.re >= 0.0 {
        return Complex64::new(mag, 0.0);
    }
    let pa = to_deg(carg(a));
    let pb = to_deg(carg(b));
    let phase = pa + w * wrap_deg(pb - pa);
    from_polar(mag, to_rad(phase))
}

/// Resamples onto `target` by bilinear interpolation of |E| in (θ, φ) with φ
/// wrap-around; complex phases are interpolated along the shortest arc. Nodes
/// shared by both grids are copied unchanged.
pub fn resample(p: &Pattern, target: &SphericalGrid) -> Result<Pattern> {
    let src = &p.grid;
    if src.same_nodes(target) {
        return Ok(Pattern {
            grid: target.clone(),
            ..p.clone()
        });
    }
    if !commensurate(src.delta_theta(), target.delta_theta()) {
        return Err(Error::IncommensurateGrids {
            source: src.delta_theta(),
            target: target.delta_theta(),
        });
    }
    if !commensurate(src.delta_phi(), target.delta_phi()) {
        return Err(Error::IncommensurateGrids {
            source: src.delta_phi(),
            target: target.delta_phi(),
        });
    }
    let src_extent = if src.has_south_pole() {
        180.0
    } else {
        src.n_rings() as f64 * src.delta_theta()
    };
    let tgt_extent = if target.has_south_pole() {
        180.0
    } else {
        target.n_rings() as f64 * target.delta_theta()
    };
    if tgt_extent > src_extent + 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "target grid reaches θ={tgt_extent}°, source only {src_extent}°"
        )));
    }

    let n_levels_180 = libm::round(180.0 / src.delta_theta()) as usize;
    // value of one polarization at θ-level k (0 = north pole) and azimuth φ
    let level = |field: &[Complex64], k: usize, phi: f64| -> Complex64 {
        if k == 0 {
            return field[0];
        }
        if k == n_levels_180 {
            return field[src.south_pole_index().expect("extent checked")];
        }
        let (j0, w) = cell(phi, src.delta_phi());
        let j0 = j0 % src.n_phi();
        let j1 = (j0 + 1) % src.n_phi();
        lerp_field(field[src.ring_node(k, j0)], field[src.ring_node(k, j1)], w)
    };
    let sample = |field: &[Complex64], theta: f64, phi: f64| -> Complex64 {
        let (k0, w) = cell(theta, src.delta_theta());
        let a = level(field, k0, phi);
        if w == 0.0 {
            return a;
        }
        lerp_field(a, level(field, k0 + 1, phi), w)
    };

    let mut e_theta = Vec::with_capacity(target.len());
    let mut e_phi = Vec::with_capacity(target.len());
    for n in target.nodes() {
        e_theta.push(sample(&p.e_theta, n.theta_deg, n.phi_deg));
        e_phi.push(sample(&p.e_phi, n.theta_deg, n.phi_deg));
    }
    Ok(Pattern {
        grid: target.clone(),
        e_theta,
        e_phi,
        ..p.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeMode {
    /// Region maximum of total power becomes 1.
    MaxTotal,
    /// Area-weighted region mean of total power becomes 1.
    MeanTotal,
}

/// Scales both polarizations so the region reference of `p_θ + p_φ` is 1.
pub fn normalize(p: &Pattern, region: &Region, mode: NormalizeMode) -> Result<Pattern> {
    let idx = region_indices(&p.grid, region)?;
    let reference = match mode {
        NormalizeMode::MaxTotal => idx
            .iter()
            .map(|&i| p.total_power(i))
            .fold(0.0_f64, f64::max),
        NormalizeMode::MeanTotal => {
            let w = AreaWeights::new(&p.grid);
            let (num, den) = idx.iter().fold((0.0, 0.0), |(n, d), &i| {
                (n + w[i] * p.total_power(i), d + w[i])
            });
            num / den
        }
    };
    if !(reference > 0.0) {
        return Err(Error::ZeroPower("pattern has no power in the region"));
    }
    Ok(p.scaled(1.0 / sqrt(reference)))
}

/// UL and DL patterns of one band; several elements per link for array mock-ups.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEntry {
    pub ul: Vec<Pattern>,
    pub dl: Vec<Pattern>,
}

impl BandEntry {
    /// Resamples every DL pattern onto the grid of the first UL pattern.
    pub fn align_to_ul(&mut self) -> Result<()> {
        let Some(target) = self.ul.first().map(|p| p.grid.clone()) else {
            return Err(Error::InvalidArgument("band entry without UL pattern".into()));
        };
        for p in self.ul.iter_mut().chain(self.dl.iter_mut()) {
            if !p.grid.same_nodes(&target) {
                *p = resample(p, &target)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandsetDataset {
    pub phone_id: String,
    pub entries: BTreeMap<String, BandEntry>,
}

impl HandsetDataset {
    pub fn new(phone_id: impl Into<String>) -> Self {
        HandsetDataset {
            phone_id: phone_id.into(),
            entries: BTreeMap::new(),
        }
    }

    /// Adds a pattern under its own band label and link.
    pub fn insert(&mut self, p: Pattern) {
        let e = self
            .entries
            .entry(String::from(p.band()))
            .or_insert_with(|| BandEntry {
                ul: Vec::new(),
                dl: Vec::new(),
            });
        match p.link() {
            Link::Ul => e.ul.push(p),
            Link::Dl => e.dl.push(p),
        }
    }

    /// Checks that every band has both links on one common grid.
    pub fn validate(&self) -> Result<()> {
        for (band, e) in &self.entries {
            let first = e.ul.first().or(e.dl.first());
            let Some(first) = first else { continue };
            if e.ul.is_empty() || e.dl.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "{}: band {band} lacks a UL or DL pattern",
                    self.phone_id
                )));
            }
            for p in e.ul.iter().chain(&e.dl) {
                first.require_same_grid(p)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid(d: f64) -> SphericalGrid {
        SphericalGrid::new(d, d, 180.0).unwrap()
    }

    fn const_scalar(g: &SphericalGrid, m: f64) -> Pattern {
        Pattern::scalar(
            g.clone(),
            Link::Ul,
            "B",
            PowerConvention::GainProportional,
            vec![m; g.len()],
            vec![m; g.len()],
        )
        .unwrap()
    }

    #[test]
    fn scalar_invariant_enforced() {
        let g = grid(90.0);
        let n = g.len();
        let neg = Pattern::scalar(
            g.clone(),
            Link::Ul,
            "B",
            PowerConvention::GainProportional,
            vec![-1.0; n],
            vec![0.0; n],
        );
        assert!(neg.is_err());
        let short = Pattern::scalar(
            g,
            Link::Ul,
            "B",
            PowerConvention::GainProportional,
            vec![1.0; n - 1],
            vec![1.0; n],
        );
        assert!(short.is_err());
    }

    #[test]
    fn eis_inversion() {
        let g = grid(90.0);
        let n = g.len();
        let mut db = vec![0.0; n];
        db[1] = -10.0;
        db[2] = -16.0;
        let p = Pattern::from_power_db(g, Link::Dl, "B", PowerConvention::EisRaw, &db, &db)
            .unwrap();
        let (q, w) = invert_eis(&p).unwrap();
        assert!(w.is_none());
        assert_eq!(q.convention(), PowerConvention::GainProportional);
        let to_db = |x: f64| 10.0 * libm::log10(x);
        assert!((to_db(q.p_theta(1)) - 10.0).abs() < 1e-12);
        // 6 dB apart before, -6 dB apart after
        assert!((to_db(q.p_theta(2)) - to_db(q.p_theta(1)) - 6.0).abs() < 1e-12);
        let (r, w) = invert_eis(&q).unwrap();
        assert_eq!(w, Some(Warning::AlreadyInverted));
        assert_eq!(r, q);
    }

    #[test]
    fn uniform_eis_stays_uniform() {
        let g = grid(30.0);
        let n = g.len();
        let p = Pattern::from_power_db(
            g,
            Link::Dl,
            "B",
            PowerConvention::EisRaw,
            &vec![-95.0; n],
            &vec![-95.0; n],
        )
        .unwrap();
        let (q, _) = invert_eis(&p).unwrap();
        let first = q.total_power(0);
        assert!((0..n).all(|i| (q.total_power(i) - first).abs() <= 1e-12 * first));
    }

    #[test]
    fn resample_identity_is_exact() {
        let g = grid(15.0);
        let n = g.len();
        let e: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(i as f64 * 0.1, -(i as f64) * 0.03))
            .collect();
        let p = Pattern::complex(g.clone(), Link::Ul, "B", e.clone(), e).unwrap();
        assert_eq!(resample(&p, &g).unwrap(), p);
    }

    #[test]
    fn resample_phi_midpoint() {
        let src = SphericalGrid::new(30.0, 30.0, 180.0).unwrap();
        let dst = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let mut m = vec![1.0; src.len()];
        m[src.index_of(90.0, 30.0).unwrap()] = 3.0;
        let p = Pattern::scalar(
            src,
            Link::Dl,
            "B",
            PowerConvention::GainProportional,
            m.clone(),
            m,
        )
        .unwrap();
        let q = resample(&p, &dst).unwrap();
        let i = dst.index_of(90.0, 15.0).unwrap();
        assert_eq!(q.e_theta()[i].re, 2.0);
    }

    #[test]
    fn resample_constant_and_restrict() {
        let src = grid(30.0);
        let dst = grid(10.0);
        let q = resample(&const_scalar(&src, 2.5), &dst).unwrap();
        assert!(q.e_phi().iter().all(|z| z.re == 2.5));

        let n = src.len();
        let m: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64).collect();
        let p = Pattern::scalar(
            src.clone(),
            Link::Dl,
            "B",
            PowerConvention::GainProportional,
            m.clone(),
            m.clone(),
        )
        .unwrap();
        let fine = resample(&p, &dst).unwrap();
        let back = resample(&fine, &src).unwrap();
        assert_eq!(back.e_theta(), p.e_theta());
    }

    #[test]
    fn resample_rejects_incommensurate() {
        let p = const_scalar(&grid(15.0), 1.0);
        let g = SphericalGrid::new(10.0, 10.0, 180.0).unwrap();
        assert!(matches!(
            resample(&p, &g),
            Err(Error::IncommensurateGrids { .. })
        ));
    }

    #[test]
    fn resample_shortest_arc_phase() {
        let src = SphericalGrid::new(90.0, 180.0, 180.0).unwrap();
        let dst = SphericalGrid::new(90.0, 90.0, 180.0).unwrap();
        let e = vec![
            Complex64::new(1.0, 0.0),
            from_polar(1.0, to_rad(170.0)),
            from_polar(1.0, to_rad(-170.0)),
            Complex64::new(1.0, 0.0),
        ];
        let p = Pattern::complex(src, Link::Ul, "B", e.clone(), e).unwrap();
        let q = resample(&p, &dst).unwrap();
        let mid = q.e_theta()[dst.index_of(90.0, 90.0).unwrap()];
        assert!((to_deg(carg(mid)).abs() - 180.0).abs() < 1e-9);
        assert!((cabs(mid) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_modes() {
        let g = grid(15.0);
        let n = g.len();
        let mut m = vec![1.0; n];
        m[5] = sqrt(2.0);
        // total power at node 5 is 2 + 2 = 4
        let p = Pattern::scalar(
            g.clone(),
            Link::Ul,
            "B",
            PowerConvention::GainProportional,
            m.clone(),
            m,
        )
        .unwrap();
        let q = normalize(&p, &Region::FullMeasured, NormalizeMode::MaxTotal).unwrap();
        assert!((q.total_power(5) - 1.0).abs() < 1e-15);
        assert!((q.total_power(0) - 0.5).abs() < 1e-15);
        let r = normalize(&q, &Region::FullMeasured, NormalizeMode::MaxTotal).unwrap();
        for i in 0..n {
            assert!((r.total_power(i) - q.total_power(i)).abs() <= 1e-15);
        }
        let u = normalize(
            &const_scalar(&g, 3.0),
            &Region::FullMeasured,
            NormalizeMode::MeanTotal,
        )
        .unwrap();
        assert!((0..n).all(|i| (u.total_power(i) - 1.0).abs() < 1e-14));
        assert!(matches!(
            normalize(&const_scalar(&g, 0.0), &Region::Girdle, NormalizeMode::MaxTotal),
            Err(Error::ZeroPower(_))
        ));
    }

    #[test]
    fn dataset_alignment() {
        let mut ds = HandsetDataset::new("phone");
        ds.insert(const_scalar(&grid(15.0), 1.0));
        let mut dl = const_scalar(&grid(30.0), 1.0);
        dl.set_link(Link::Dl);
        ds.insert(dl);
        assert_eq!(ds.validate(), Err(Error::GridMismatch));
        ds.entries.get_mut("B").unwrap().align_to_ul().unwrap();
        ds.validate().unwrap();
    }
}
