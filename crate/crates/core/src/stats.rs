//! Region aggregates of metric fields and empirical distributions over a
//! handset population.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::scalar_metrics::MetricField;
use crate::sphgrid::{AreaWeights, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateKind {
    Max,
    Mean,
    MeanPlusSigma,
    MeanMinusSigma,
    Min,
}

impl AggregateKind {
    pub const ALL: [AggregateKind; 5] = [
        AggregateKind::Max,
        AggregateKind::Mean,
        AggregateKind::MeanPlusSigma,
        AggregateKind::MeanMinusSigma,
        AggregateKind::Min,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AggregateKind::Max => "max",
            AggregateKind::Mean => "mean",
            AggregateKind::MeanPlusSigma => "mean_plus_sigma",
            AggregateKind::MeanMinusSigma => "mean_minus_sigma",
            AggregateKind::Min => "min",
        }
    }
}

/// Area-weighted moments and extremes of one field over one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregates {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation, area-weighted.
    pub sigma: f64,
    pub max: f64,
    pub min: f64,
}

impl Aggregates {
    pub fn get(&self, kind: AggregateKind) -> f64 {
        match kind {
            AggregateKind::Max => self.max,
            AggregateKind::Mean => self.mean,
            AggregateKind::MeanPlusSigma => self.mean + self.sigma,
            AggregateKind::MeanMinusSigma => self.mean - self.sigma,
            AggregateKind::Min => self.min,
        }
    }
}

/// Aggregates the finite values of `field` inside `region`. Non-finite
/// sentinels (e.g. XPD of a vanishing component) are skipped.
pub fn aggregate(field: &MetricField, region: &Region) -> Result<Aggregates> {
    let w = AreaWeights::new(&field.grid);
    let mask = crate::sphgrid::region_mask(&field.grid, region)?;
    let (mut n, mut ws, mut acc) = (0usize, 0.0, 0.0);
    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for (i, v) in field.finite().filter(|(i, _)| mask[*i]) {
        n += 1;
        ws += w[i];
        acc += w[i] * v;
        max = max.max(v);
        min = min.min(v);
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    let mean = acc / ws;
    let var: f64 = field
        .finite()
        .filter(|(i, _)| mask[*i])
        .map(|(i, v)| w[i] * (v - mean) * (v - mean))
        .sum::<f64>()
        / ws;
    Ok(Aggregates {
        count: n,
        mean,
        sigma: sqrt(var.max(0.0)),
        max,
        min,
    })
}

/// One aggregate value of one metric for one phone, band and region.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSample {
    pub phone_id: String,
    pub band: String,
    pub region: Region,
    pub metric: String,
    pub kind: AggregateKind,
    pub value: f64,
}

/// Right-continuous empirical distribution of a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    sorted: Vec<f64>,
}

impl Cdf {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Step points `(x, F(x))` at each distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (k, &v) in self.sorted.iter().enumerate() {
            let f = (k + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }

    /// Linear interpolation between order statistics at `h = (n−1)·p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let h = (self.sorted.len() - 1) as f64 * p;
        let lo = libm::floor(h) as usize;
        let hi = (lo + 1).min(self.sorted.len() - 1);
        let (a, b) = (self.sorted[lo], self.sorted[hi]);
        a + (h - lo as f64) * (b - a)
    }

    pub fn deciles(&self) -> Quantiles {
        Quantiles {
            p10: self.quantile(0.1),
            median: self.quantile(0.5),
            p90: self.quantile(0.9),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantiles {
    pub p10: f64,
    pub median: f64,
    pub p90: f64,
}

/// Empirical CDF over the finite values.
pub fn population_cdf(values: &[f64]) -> Result<Cdf> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    sorted.sort_by(f64::total_cmp);
    Ok(Cdf { sorted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_metrics::Unit;
    use crate::sphgrid::SphericalGrid;
    use alloc::vec;

    fn field(g: &SphericalGrid, f: impl Fn(usize) -> f64) -> MetricField {
        MetricField {
            grid: g.clone(),
            unit: Unit::Db,
            nodes: (0..g.len()).collect(),
            values: (0..g.len()).map(f).collect(),
        }
    }

    #[test]
    fn constant_field() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let a = aggregate(&field(&g, |_| 2.5), &Region::FullMeasured).unwrap();
        assert!((a.mean - 2.5).abs() < 1e-14);
        assert_eq!((a.max, a.min), (2.5, 2.5));
        assert!(a.sigma < 1e-7);
    }

    #[test]
    fn two_equal_area_nodes() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let (i, j) = (g.ring_node(6, 0), g.ring_node(6, 1));
        let f = MetricField {
            grid: g.clone(),
            unit: Unit::Db,
            nodes: vec![i, j],
            values: vec![0.0, 2.0],
        };
        let a = aggregate(&f, &Region::FullMeasured).unwrap();
        assert!((a.mean - 1.0).abs() < 1e-15);
        assert!((a.sigma - 1.0).abs() < 1e-15);
        assert_eq!(a.max, 2.0);
        assert_eq!(a.get(AggregateKind::MeanMinusSigma), 0.0);
    }

    #[test]
    fn polar_dent_separates_regions() {
        let g = SphericalGrid::new(15.0, 15.0, 180.0).unwrap();
        let f = field(&g, |i| if g.node(i).theta_deg < 30.0 { 10.0 } else { 0.0 });
        let s = aggregate(&f, &Region::FullMeasured).unwrap();
        let gi = aggregate(&f, &Region::Girdle).unwrap();
        assert_eq!(gi.max, 0.0);
        assert!(s.max == 10.0 && s.mean > gi.mean);
    }

    #[test]
    fn non_finite_skipped() {
        let g = SphericalGrid::new(90.0, 90.0, 180.0).unwrap();
        let f = field(&g, |i| if i == 0 { f64::INFINITY } else { 1.0 });
        assert_eq!(aggregate(&f, &Region::FullMeasured).unwrap().count, 5);
        let f = field(&g, |_| f64::NAN);
        assert_eq!(aggregate(&f, &Region::FullMeasured), Err(Error::EmptyRegion));
    }

    #[test]
    fn quantile_oracles() {
        let c = population_cdf(&[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(c.quantile(0.5), 3.0);
        let v: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let c = population_cdf(&v).unwrap();
        assert!((c.quantile(0.9) - 9.0).abs() < 1e-12);
        let c = population_cdf(&[7.0]).unwrap();
        assert_eq!(c.deciles(), Quantiles { p10: 7.0, median: 7.0, p90: 7.0 });
        assert_eq!(c.eval(6.9), 0.0);
        assert_eq!(c.eval(7.0), 1.0);
    }

    #[test]
    fn steps_merge_ties() {
        let c = population_cdf(&[1.0, 1.0, 2.0, f64::NAN]).unwrap();
        assert_eq!(c.steps(), vec![(1.0, 2.0 / 3.0), (2.0, 1.0)]);
        assert!(population_cdf(&[]).is_err());
    }
}
