//! Collocation grids for the ℝ×𝕋 product domain.
//!
//! The circle carries `2P+1` points and the symmetric mode set `p ∈ {−P..P}`.
//! The line is truncated to the periodic box `[−L, L)` with a power-of-two
//! number of points, so the frequency samples are `ξ_k = kπ/L` for
//! `k ∈ {−n_x/2 .. n_x/2−1}`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mode truncation of the circle direction: `2 p_max + 1` collocation points
/// on `[0, 2π)` and modes `p ∈ {−p_max ..= p_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    p_max: i32,
}

impl TorusGrid {
    pub fn new(p_max: i32) -> Result<Self> {
        if p_max < 0 {
            return Err(Error::InvalidParameter(format!(
                "p_max must be nonnegative, got {p_max}"
            )));
        }
        Ok(Self { p_max })
    }

    pub fn p_max(&self) -> i32 {
        self.p_max
    }

    /// Number of collocation points (always odd).
    pub fn n_y(&self) -> usize {
        2 * self.p_max as usize + 1
    }

    /// Collocation point `y_m = 2π m / n_y`.
    pub fn y(&self, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * m as f64 / self.n_y() as f64
    }

    /// Mode at column `iy` of the mixed representation.
    pub fn mode(&self, iy: usize) -> i32 {
        iy as i32 - self.p_max
    }

    /// Column index of mode `p`, or `None` when out of range.
    pub fn column(&self, p: i32) -> Option<usize> {
        (p.abs() <= self.p_max).then(|| (p + self.p_max) as usize)
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> {
        -self.p_max..=self.p_max
    }
}

/// Periodic truncation `[−L, L)` of the line with `n_x` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    half_length: f64,
    n_x: usize,
}

impl LineGrid {
    /// Rejects non-power-of-two point counts and non-positive box sizes.
    pub fn new(half_length: f64, n_x: usize) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half_length must be positive and finite, got {half_length}"
            )));
        }
        if n_x < 2 || !n_x.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "n_x must be a power of two >= 2, got {n_x}"
            )));
        }
        Ok(Self { half_length, n_x })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    /// Grid spacing `Δx = 2L / n_x`.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n_x as f64
    }

    /// Frequency spacing `Δξ = π / L`.
    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.half_length
    }

    /// Collocation point `x_j = −L + j Δx`.
    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    /// Frequency at row `ix` of the mixed representation,
    /// `ξ = (ix − n_x/2) Δξ`.
    pub fn xi(&self, ix: usize) -> f64 {
        (ix as i64 - self.n_x as i64 / 2) as f64 * self.dxi()
    }

    /// Signed frequency index of row `ix`.
    pub fn k_signed(&self, ix: usize) -> i64 {
        ix as i64 - self.n_x as i64 / 2
    }

    /// Largest resolved frequency magnitude (Nyquist).
    pub fn xi_max(&self) -> f64 {
        self.n_x as f64 / 2.0 * self.dxi()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_grid_is_odd_and_symmetric() {
        let g = TorusGrid::new(4).unwrap();
        assert_eq!(g.n_y(), 9);
        assert_eq!(g.mode(0), -4);
        assert_eq!(g.mode(8), 4);
        assert_eq!(g.column(0), Some(4));
        assert_eq!(g.column(5), None);
        assert!(TorusGrid::new(-1).is_err());
    }

    #[test]
    fn line_grid_rejects_bad_sizes() {
        assert!(LineGrid::new(10.0, 48).is_err());
        assert!(LineGrid::new(10.0, 1).is_err());
        assert!(LineGrid::new(0.0, 64).is_err());
        assert!(LineGrid::new(f64::NAN, 64).is_err());
    }

    #[test]
    fn line_grid_spacings() {
        let g = LineGrid::new(8.0, 32).unwrap();
        assert_eq!(g.dx() * g.n_x() as f64, 2.0 * g.half_length());
        assert!((g.dxi() - std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert_eq!(g.x(0), -8.0);
        assert_eq!(g.xi(16), 0.0);
        assert_eq!(g.k_signed(0), -16);
    }
}
