//! Emulated two-element combining: per-direction selection (SC) and maximum
//! ratio combining (MRC) under single-direction point-source exposure.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cabs, hypot};
use crate::pattern::{Pattern, PatternKind};

/// Element chosen by the selection combiner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    First,
    Second,
}

impl Element {
    pub fn number(&self) -> u8 {
        match self {
            Element::First => 1,
            Element::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    pub pattern: Pattern,
    pub winner_theta: Vec<Element>,
    pub winner_phi: Vec<Element>,
}

fn check(h1: &Pattern, h2: &Pattern) -> Result<()> {
    h1.require_same_grid(h2)?;
    if h1.kind() != PatternKind::Complex || h2.kind() != PatternKind::Complex {
        return Err(Error::WrongPattern("combining needs complex patterns".into()));
    }
    Ok(())
}

fn select(a: Complex64, b: Complex64) -> (Complex64, Element) {
    if cabs(b) > cabs(a) {
        (b, Element::Second)
    } else {
        (a, Element::First)
    }
}

/// Per node and polarization, keeps the element field of larger magnitude
/// (complex value retained, ties to element 1).
pub fn sc_pattern(h1: &Pattern, h2: &Pattern) -> Result<ScOutput> {
    check(h1, h2)?;
    let pick = |a: &[Complex64], b: &[Complex64]| -> (Vec<Complex64>, Vec<Element>) {
        a.iter().zip(b).map(|(&x, &y)| select(x, y)).unzip()
    };
    let (t, wt) = pick(h1.e_theta(), h2.e_theta());
    let (p, wp) = pick(h1.e_phi(), h2.e_phi());
    let pattern = Pattern::with_fields(
        h1.grid().clone(),
        h1.link(),
        h1.band(),
        PatternKind::Complex,
        h1.convention(),
        t,
        p,
    )?;
    Ok(ScOutput {
        pattern,
        winner_theta: wt,
        winner_phi: wp,
    })
}

/// Per-polarization root-sum-square of the element magnitudes; the result is
/// scalar since ideal co-phasing removes the phase relation.
pub fn mrc_pattern(h1: &Pattern, h2: &Pattern) -> Result<Pattern> {
    check(h1, h2)?;
    let rss = |a: &[Complex64], b: &[Complex64]| -> Vec<f64> {
        a.iter().zip(b).map(|(&x, &y)| hypot(cabs(x), cabs(y))).collect()
    };
    Pattern::scalar(
        h1.grid().clone(),
        h1.link(),
        h1.band(),
        h1.convention(),
        rss(h1.e_theta(), h2.e_theta()),
        rss(h1.e_phi(), h2.e_phi()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Link;
    use crate::sphgrid::SphericalGrid;
    use alloc::vec;

    fn pat(t: Vec<Complex64>, p: Vec<Complex64>) -> Pattern {
        let g = SphericalGrid::new(90.0, 90.0, 180.0).unwrap();
        Pattern::complex(g, Link::Dl, "b", t, p).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sc_with_silent_second_element() {
        let t: Vec<_> = (0..6).map(|k| c(k as f64, 1.0)).collect();
        let h1 = pat(t.clone(), t.clone());
        let h0 = pat(vec![c(0.0, 0.0); 6], vec![c(0.0, 0.0); 6]);
        let out = sc_pattern(&h1, &h0).unwrap();
        assert_eq!(out.pattern.e_theta(), h1.e_theta());
        assert!(out.winner_theta.iter().all(|&w| w == Element::First));
        let m = mrc_pattern(&h1, &h0).unwrap();
        for i in 0..6 {
            assert_eq!(m.e_theta()[i].re, cabs(h1.e_theta()[i]));
        }
    }

    #[test]
    fn ties_and_magnitude_selection() {
        let mut a = vec![c(1.0, 0.0); 6];
        let mut b = vec![c(0.0, 1.0); 6];
        a[2] = c(0.0, 2.0);
        b[3] = c(-2.0, 0.0);
        let h1 = pat(a.clone(), a);
        let h2 = pat(b.clone(), b);
        let out = sc_pattern(&h1, &h2).unwrap();
        assert_eq!(out.winner_theta[0], Element::First);
        assert_eq!(out.pattern.e_theta()[2], c(0.0, 2.0));
        assert_eq!(out.winner_theta[3], Element::Second);
        assert_eq!(out.pattern.e_theta()[3], c(-2.0, 0.0));
    }

    #[test]
    fn mrc_identical_elements() {
        let t: Vec<_> = (0..6).map(|k| c(0.5 * k as f64, -0.2)).collect();
        let h = pat(t.clone(), t);
        let m = mrc_pattern(&h, &h).unwrap();
        assert_eq!(m.kind(), PatternKind::Scalar);
        for i in 0..6 {
            let want = core::f64::consts::SQRT_2 * cabs(h.e_theta()[i]);
            assert!((m.e_theta()[i].re - want).abs() < 1e-15);
        }
    }
}
