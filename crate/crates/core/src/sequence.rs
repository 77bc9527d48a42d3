//! Finite mode sequences on the circle.

use num_complex::Complex64;

use crate::grid::TorusGrid;
use crate::{Error, Result};

/// Complex amplitudes `a_p` for `|p| <= p_max`, stored in mode order
/// `p = −p_max ..= p_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSequence {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl TorusSequence {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n_y()],
            grid,
        }
    }

    /// Kronecker delta `value · δ_{p}`.
    pub fn delta(grid: TorusGrid, p: i32, value: Complex64) -> Result<Self> {
        let mut s = Self::zeros(grid);
        s.set(p, value)?;
        Ok(s)
    }

    pub fn from_coeffs(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_y() {
            return Err(Error::GridMismatch(format!(
                "expected {} coefficients, got {}",
                grid.n_y(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, p: i32) -> Complex64 {
        match self.grid.column(p) {
            Some(i) => self.coeffs[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, p: i32, value: Complex64) -> Result<()> {
        let i = self.grid.column(p).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "mode {p} outside grid |p| <= {}",
                self.grid.p_max()
            ))
        })?;
        self.coeffs[i] = value;
        Ok(())
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.grid.mode(i), c))
    }

    /// ℓ² norm of the coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Weighted Sobolev norm `(Σ_p (1+p²)^s |a_p|²)^{1/2}`.
    pub fn h_norm(&self, s: f64) -> f64 {
        self.modes()
            .map(|(p, c)| (1.0 + (p as f64).powi(2)).powf(s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hermitian inner product `Σ_p u_p conj(v_p)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(u, v)| u * v.conj())
            .sum())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "p_max {} vs {}",
                self.grid.p_max(),
                other.grid.p_max()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h_norm_examples() {
        let g = TorusGrid::new(4).unwrap();
        // delta at p = 0 has norm 1 for every s
        let d0 = TorusSequence::delta(g, 0, c(1.0, 0.0)).unwrap();
        for s in [-2.0, -1.0, 0.0, 0.5, 1.0, 12.0] {
            assert!((d0.h_norm(s) - 1.0).abs() < 1e-15);
        }
        // delta at p = 2, s = 1 -> sqrt(5)
        let d2 = TorusSequence::delta(g, 2, c(1.0, 0.0)).unwrap();
        assert!((d2.h_norm(1.0) - 5.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn h0_equals_l2() {
        let g = TorusGrid::new(3).unwrap();
        let coeffs: Vec<Complex64> = (0..7).map(|i| c(0.3 * i as f64, 1.0 - i as f64)).collect();
        let s = TorusSequence::from_coeffs(g, coeffs).unwrap();
        assert!((s.h_norm(0.0) - s.l2_norm()).abs() < 1e-14);
    }

    #[test]
    fn zero_norm_iff_zero() {
        let g = TorusGrid::new(2).unwrap();
        let z = TorusSequence::zeros(g);
        assert_eq!(z.h_norm(3.0), 0.0);
        let nz = TorusSequence::delta(g, 1, c(0.0, 1e-12)).unwrap();
        assert!(nz.h_norm(3.0) > 0.0);
    }

    #[test]
    fn grid_mismatch_detected() {
        let a = TorusSequence::zeros(TorusGrid::new(2).unwrap());
        let b = TorusSequence::zeros(TorusGrid::new(3).unwrap());
        assert!(a.inner(&b).is_err());
    }
}
