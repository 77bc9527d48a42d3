//! Complex fields on the ℝ×𝕋 product grid and the transform pair between the
//! physical (x, y) and mixed (ξ, p) representations.
//!
//! The forward transform approximates
//! `F̂_p(ξ) = (2π)^{-2} ∫ e^{−ixξ} e^{−ipy} F(x,y) dx dy`
//! by the collocation sum with explicit `Δx/(2π)` and `1/n_y` factors, so the
//! mixed samples carry continuum units and the inverse needs no π-factors
//! beyond the frequency spacing `Δξ`. Plancherel then holds exactly between
//! the two quadrature weights [`ProductField::physical_weight`] and
//! [`ProductField::mixed_weight`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fft;
use crate::grid::{LineGrid, TorusGrid};
use crate::sequence::TorusSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    /// Samples `F(x_j, y_m)`.
    Physical,
    /// Samples `F̂_p(ξ_k)`, rows ordered by increasing ξ, columns by mode p.
    Mixed,
}

/// Dense complex matrix `n_x × n_y` in x-major (row-major) order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductField {
    line: LineGrid,
    torus: TorusGrid,
    repr: Representation,
    data: Vec<Complex64>,
}

impl ProductField {
    pub fn zeros(line: LineGrid, torus: TorusGrid, repr: Representation) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); line.n_x() * torus.n_y()],
            line,
            torus,
            repr,
        }
    }

    pub fn from_data(
        line: LineGrid,
        torus: TorusGrid,
        repr: Representation,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        if data.len() != line.n_x() * torus.n_y() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                line.n_x() * torus.n_y(),
                data.len()
            )));
        }
        Ok(Self {
            line,
            torus,
            repr,
            data,
        })
    }

    /// Sample a physical-space function `F(x, y)`.
    pub fn from_physical_fn(
        line: LineGrid,
        torus: TorusGrid,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Self {
        let mut field = Self::zeros(line, torus, Representation::Physical);
        for ix in 0..line.n_x() {
            let x = line.x(ix);
            for iy in 0..torus.n_y() {
                field.data[ix * torus.n_y() + iy] = f(x, torus.y(iy));
            }
        }
        field
    }

    /// Build a mixed-representation field from per-mode frequency profiles.
    pub fn from_mode_profiles(
        line: LineGrid,
        torus: TorusGrid,
        profiles: &[(i32, &dyn Fn(f64) -> Complex64)],
    ) -> Result<Self> {
        let mut field = Self::zeros(line, torus, Representation::Mixed);
        for &(p, profile) in profiles {
            let iy = torus.column(p).ok_or_else(|| {
                Error::InvalidParameter(format!("mode {p} outside grid |p| <= {}", torus.p_max()))
            })?;
            for ix in 0..line.n_x() {
                field.data[ix * torus.n_y() + iy] += profile(line.xi(ix));
            }
        }
        Ok(field)
    }

    pub fn line(&self) -> LineGrid {
        self.line
    }

    pub fn torus(&self) -> TorusGrid {
        self.torus
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[ix * self.torus.n_y() + iy]
    }

    pub fn at_mut(&mut self, ix: usize, iy: usize) -> &mut Complex64 {
        &mut self.data[ix * self.torus.n_y() + iy]
    }

    /// Quadrature weight of one physical sample, `Δx · 2π/n_y`.
    pub fn physical_weight(&self) -> f64 {
        self.line.dx() * 2.0 * std::f64::consts::PI / self.torus.n_y() as f64
    }

    /// Quadrature weight of one mixed sample, `(2π)² · Δξ`.
    pub fn mixed_weight(&self) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        two_pi * two_pi * self.line.dxi()
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.line != other.line || self.torus != other.torus {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    fn expect_repr(&self, expected: Representation) -> Result<()> {
        if self.repr != expected {
            return Err(Error::WrongRepresentation { expected });
        }
        Ok(())
    }

    /// Forward transform to the mixed (ξ, p) representation.
    pub fn to_mixed(&self) -> Result<Self> {
        self.expect_repr(Representation::Physical)?;
        let n_x = self.line.n_x();
        let n_y = self.torus.n_y();
        let p_max = self.torus.p_max() as usize;
        let mut out = self.data.clone();

        // y-direction: forward DFT per row, reorder bins so that column iy
        // holds mode p = iy - p_max, scale by 1/n_y.
        let inv_ny = 1.0 / n_y as f64;
        let mut row = vec![Complex64::new(0.0, 0.0); n_y];
        for chunk in out.chunks_exact_mut(n_y) {
            row.copy_from_slice(chunk);
            fft::forward(&mut row);
            for iy in 0..n_y {
                let p = iy as i64 - p_max as i64;
                let bin = p.rem_euclid(n_y as i64) as usize;
                chunk[iy] = row[bin] * inv_ny;
            }
        }

        // x-direction: forward DFT per column with the box phase
        // e^{−iξ_k x_j} = (−1)^k e^{−2πi kj/n_x} and the Δx/(2π) factor.
        let cx = self.line.dx() / (2.0 * std::f64::consts::PI);
        let mut col = vec![Complex64::new(0.0, 0.0); n_x];
        for iy in 0..n_y {
            for j in 0..n_x {
                col[j] = out[j * n_y + iy];
            }
            fft::forward(&mut col);
            for ix in 0..n_x {
                let k = ix as i64 - n_x as i64 / 2;
                let bin = k.rem_euclid(n_x as i64) as usize;
                let sign = if k & 1 == 0 { 1.0 } else { -1.0 };
                out[ix * n_y + iy] = col[bin] * (sign * cx);
            }
        }

        Ok(Self {
            line: self.line,
            torus: self.torus,
            repr: Representation::Mixed,
            data: out,
        })
    }

    /// Inverse transform back to physical samples; exact inverse of
    /// [`Self::to_mixed`] up to rounding.
    pub fn to_physical(&self) -> Result<Self> {
        self.expect_repr(Representation::Mixed)?;
        let n_x = self.line.n_x();
        let n_y = self.torus.n_y();
        let p_max = self.torus.p_max() as usize;
        let mut out = self.data.clone();

        // x-direction inverse with the Δξ factor.
        let dxi = self.line.dxi();
        let mut col = vec![Complex64::new(0.0, 0.0); n_x];
        for iy in 0..n_y {
            for ix in 0..n_x {
                let k = ix as i64 - n_x as i64 / 2;
                let bin = k.rem_euclid(n_x as i64) as usize;
                let sign = if k & 1 == 0 { 1.0 } else { -1.0 };
                col[bin] = out[ix * n_y + iy] * sign;
            }
            fft::inverse(&mut col);
            for j in 0..n_x {
                out[j * n_y + iy] = col[j] * dxi;
            }
        }

        // y-direction inverse (unnormalised).
        let mut row = vec![Complex64::new(0.0, 0.0); n_y];
        for chunk in out.chunks_exact_mut(n_y) {
            for iy in 0..n_y {
                let p = iy as i64 - p_max as i64;
                let bin = p.rem_euclid(n_y as i64) as usize;
                row[bin] = chunk[iy];
            }
            fft::inverse(&mut row);
            chunk.copy_from_slice(&row);
        }

        Ok(Self {
            line: self.line,
            torus: self.torus,
            repr: Representation::Physical,
            data: out,
        })
    }

    /// Multiply each mixed sample by `m(ξ, p)` in place.
    pub fn apply_mixed_multiplier(&mut self, m: impl Fn(f64, i32) -> Complex64) -> Result<()> {
        self.expect_repr(Representation::Mixed)?;
        let n_y = self.torus.n_y();
        for ix in 0..self.line.n_x() {
            let xi = self.line.xi(ix);
            for iy in 0..n_y {
                let p = self.torus.mode(iy);
                self.data[ix * n_y + iy] *= m(xi, p);
            }
        }
        Ok(())
    }

    /// Torus sequence held in ξ-row `ix` of a mixed field.
    pub fn row_sequence(&self, ix: usize) -> Result<TorusSequence> {
        self.expect_repr(Representation::Mixed)?;
        let n_y = self.torus.n_y();
        TorusSequence::from_coeffs(self.torus, self.data[ix * n_y..(ix + 1) * n_y].to_vec())
    }

    pub fn set_row_sequence(&mut self, ix: usize, seq: &TorusSequence) -> Result<()> {
        self.expect_repr(Representation::Mixed)?;
        if seq.grid() != self.torus {
            return Err(Error::GridMismatch(
                "sequence grid differs from field".into(),
            ));
        }
        let n_y = self.torus.n_y();
        self.data[ix * n_y..(ix + 1) * n_y].copy_from_slice(seq.coeffs());
        Ok(())
    }

    /// Unweighted complex inner product `Σ u conj(v)` over all samples.
    pub fn dot(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(u, v)| u * v.conj())
            .sum())
    }

    /// Sum of squared moduli over all samples.
    pub fn sum_sq(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// L² norm under the representation's quadrature weight.
    pub fn l2_norm(&self) -> f64 {
        let w = match self.repr {
            Representation::Physical => self.physical_weight(),
            Representation::Mixed => self.mixed_weight(),
        };
        (w * self.sum_sq()).sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            line: self.line,
            torus: self.torus,
            repr: self.repr,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        if self.repr != other.repr {
            return Err(Error::WrongRepresentation {
                expected: self.repr,
            });
        }
        Ok(Self {
            line: self.line,
            torus: self.torus,
            repr: self.repr,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(u, v)| u - v)
                .collect(),
        })
    }

    /// Largest squared modulus of a boundary x-row relative to the global
    /// maximum; used to detect support touching the box edge.
    pub fn edge_mass_ratio(&self) -> f64 {
        let n_y = self.torus.n_y();
        let n_x = self.line.n_x();
        let max = self
            .data
            .iter()
            .map(|c| c.norm_sqr())
            .fold(0.0_f64, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0_f64;
        for iy in 0..n_y {
            edge = edge.max(self.data[iy].norm_sqr());
            edge = edge.max(self.data[(n_x - 1) * n_y + iy].norm_sqr());
        }
        (edge / max).sqrt()
    }

    /// True when the field has decayed at the box edge (|F| at the boundary
    /// below 1e−10 of the maximum).
    pub fn edge_decay_ok(&self) -> bool {
        self.edge_mass_ratio() <= 1e-10
    }
}
