//! Shared FFT plan cache.
//!
//! Plans are deterministic for a fixed length, so cached transforms produce
//! bit-identical output regardless of which thread runs them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanMap = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

fn plans() -> &'static Mutex<PlanMap> {
    static PLANS: OnceLock<Mutex<PlanMap>> = OnceLock::new();
    PLANS.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut map = plans().lock().expect("fft plan cache poisoned");
    map.entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Unnormalised forward DFT in place: `out_k = Σ_j e^{−2πi jk/n} in_j`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Unnormalised inverse DFT in place: `out_j = Σ_k e^{+2πi jk/n} in_k`.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}
