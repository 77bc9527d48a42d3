//! Frequency envelopes: smoothed plateaus on the ξ-grid.

use serde::{Deserialize, Serialize};

use crate::grid::LineGrid;
use crate::{Error, Result};

/// Smooth-bump ramp: 0 for s ≤ 0, 1 for s ≥ 1, C^∞ in between.
fn ramp(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let f = (-1.0 / s).exp();
        let g = (-1.0 / (1.0 - s)).exp();
        f / (f + g)
    }
}

/// Real envelope φ sampled on a ξ-grid: exactly 1 on the plateau `[lo, hi]`,
/// a smooth transition of the given width on both sides, 0 outside.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    lo: f64,
    hi: f64,
    width: f64,
}

impl Envelope {
    pub fn smooth_plateau(lo: f64, hi: f64, width: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "plateau interval [{lo}, {hi}] is empty"
            )));
        }
        if !(width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "transition width must be positive, got {width}"
            )));
        }
        Ok(Self { lo, hi, width })
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Support interval including the transitions.
    pub fn support(&self) -> (f64, f64) {
        (self.lo - self.width, self.hi + self.width)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        if xi < self.lo {
            ramp((xi - (self.lo - self.width)) / self.width)
        } else if xi > self.hi {
            ramp(((self.hi + self.width) - xi) / self.width)
        } else {
            1.0
        }
    }

    /// Samples on every ξ-row of the grid. Fails when the support is not
    /// resolved by the grid's frequency band.
    pub fn sample(&self, line: &LineGrid) -> Result<Vec<f64>> {
        let (lo, hi) = self.support();
        if hi >= line.xi_max() || lo <= -line.xi_max() {
            return Err(Error::InvalidParameter(format!(
                "envelope support [{lo}, {hi}] exceeds the resolved band ±{}",
                line.xi_max()
            )));
        }
        Ok((0..line.n_x()).map(|ix| self.eval(line.xi(ix))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_is_exactly_one_and_support_compact() {
        let env = Envelope::smooth_plateau(-1.0, 1.0, 0.5).unwrap();
        let line = LineGrid::new(16.0, 256).unwrap();
        let phi = env.sample(&line).unwrap();
        for ix in 0..line.n_x() {
            let xi = line.xi(ix);
            if (-1.0..=1.0).contains(&xi) {
                assert_eq!(phi[ix], 1.0, "ξ = {xi}");
            }
            if !(-1.5..=1.5).contains(&xi) {
                assert_eq!(phi[ix], 0.0, "ξ = {xi}");
            }
            assert!((0.0..=1.0).contains(&phi[ix]));
        }
        // monotone on the ramps
        assert!(env.eval(-1.4) < env.eval(-1.2));
        assert!(env.eval(1.2) > env.eval(1.4));
    }

    #[test]
    fn unresolved_support_rejected() {
        let env = Envelope::smooth_plateau(-10.0, 10.0, 1.0).unwrap();
        let line = LineGrid::new(16.0, 32).unwrap(); // ξ_max = π
        assert!(env.sample(&line).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Envelope::smooth_plateau(1.0, -1.0, 0.5).is_err());
        assert!(Envelope::smooth_plateau(-1.0, 1.0, 0.0).is_err());
    }
}
