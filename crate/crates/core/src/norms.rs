//! Weighted Sobolev norms on product fields.
//!
//! `H^N` is evaluated spectrally with the weight `(1 + ξ² + p²)^N`. The strong
//! norm `S` adds the spatial moment `‖xF‖_{L²}`, and `S⁺` stacks on the
//! `(1−∂_xx)^4` multiplier and one more x-moment:
//!
//! `‖F‖_S  = ‖F‖_{H^N} + ‖xF‖_{L²}`
//! `‖F‖_{S⁺} = ‖F‖_S + ‖(1−∂_xx)^4 F‖_S + ‖xF‖_S`
//!
//! The x-weights are applied by physical-space multiplication, which is only
//! meaningful when the field has decayed before the box edge; the reports
//! carry an `edge_ok` flag for that precondition.

use num_complex::Complex64;

use crate::field::{ProductField, Representation};
use crate::Result;

/// Norm value together with the box-edge decay check.
#[derive(Debug, Clone, Copy)]
pub struct NormReport {
    pub value: f64,
    /// False when |F| at the box boundary exceeds 1e−10 of its maximum, in
    /// which case the x-weighted terms are contaminated by wrap-around.
    pub edge_ok: bool,
}

fn as_mixed(field: &ProductField) -> Result<ProductField> {
    match field.representation() {
        Representation::Mixed => Ok(field.clone()),
        Representation::Physical => field.to_mixed(),
    }
}

fn as_physical(field: &ProductField) -> Result<ProductField> {
    match field.representation() {
        Representation::Physical => Ok(field.clone()),
        Representation::Mixed => field.to_physical(),
    }
}

/// Sobolev norm `‖F‖_{H^N}` evaluated spectrally.
pub fn norm_hn(field: &ProductField, n: i32) -> Result<f64> {
    let mixed = as_mixed(field)?;
    let line = mixed.line();
    let torus = mixed.torus();
    let mut sum = 0.0;
    for ix in 0..line.n_x() {
        let xi2 = mixed.line().xi(ix).powi(2);
        for iy in 0..torus.n_y() {
            let p2 = (torus.mode(iy) as f64).powi(2);
            sum += (1.0 + xi2 + p2).powi(n) * mixed.at(ix, iy).norm_sqr();
        }
    }
    Ok((mixed.mixed_weight() * sum).sqrt())
}

/// Multiply by x in physical space.
fn x_weighted(field: &ProductField) -> Result<ProductField> {
    let mut phys = as_physical(field)?;
    let line = phys.line();
    let n_y = phys.torus().n_y();
    for ix in 0..line.n_x() {
        let x = line.x(ix);
        for iy in 0..n_y {
            *phys.at_mut(ix, iy) *= x;
        }
    }
    Ok(phys)
}

/// Apply the `(1−∂_xx)^4` multiplier, i.e. `(1+ξ²)^4` in mixed space.
fn bessel_x4(field: &ProductField) -> Result<ProductField> {
    let mut mixed = as_mixed(field)?;
    mixed.apply_mixed_multiplier(|xi, _| Complex64::new((1.0 + xi * xi).powi(4), 0.0))?;
    Ok(mixed)
}

fn s_value(field: &ProductField, n: i32) -> Result<f64> {
    Ok(norm_hn(field, n)? + x_weighted(field)?.l2_norm())
}

/// `‖F‖_S` with the edge-decay check attached.
pub fn norm_s_report(field: &ProductField, n: i32) -> Result<NormReport> {
    let phys = as_physical(field)?;
    Ok(NormReport {
        value: s_value(&phys, n)?,
        edge_ok: phys.edge_decay_ok(),
    })
}

/// `‖F‖_{S⁺}` with the edge-decay check attached.
pub fn norm_s_plus_report(field: &ProductField, n: i32) -> Result<NormReport> {
    let phys = as_physical(field)?;
    let value =
        s_value(&phys, n)? + s_value(&bessel_x4(&phys)?, n)? + s_value(&x_weighted(&phys)?, n)?;
    Ok(NormReport {
        value,
        edge_ok: phys.edge_decay_ok(),
    })
}

/// `‖F‖_S` at the default regularity `N = 12`.
pub fn norm_s(field: &ProductField) -> Result<f64> {
    Ok(norm_s_report(field, crate::SOBOLEV_N)?.value)
}

/// `‖F‖_{S⁺}` at the default regularity `N = 12`.
pub fn norm_s_plus(field: &ProductField) -> Result<f64> {
    Ok(norm_s_plus_report(field, crate::SOBOLEV_N)?.value)
}
