//! The dual surface of an S-Willmore surface.

use crate::charts::field::{Field, MVec};
use crate::charts::jet::Jet;
use crate::charts::Immersion;
use crate::classify::{swillmore_extract, willmore_residual, willmore_scale, SWillmoreData};
use crate::error::{Error, Result};
use crate::frame::{frame_at, FrameFields};
use crate::pair::{LiftSource, PairFields, Tolerances};
use num_complex::Complex64 as C64;
use std::sync::Arc;

/// `Ŷ = (|μ|²/2) Y + μ̄ Y_z + μ Y_z̄ + N`.
pub fn dual_lift<S: Field>(fr: &FrameFields<S>, mu: &S) -> MVec<S> {
    let mub = mu.conj();
    let mut y = &fr.n + &fr.y.scale(&(mu.abs2() * 0.5));
    y = &y + &fr.y_z.scale(&mub);
    y = &y + &fr.y_zb.scale(mu);
    y.re()
}

/// Checks the S-Willmore conditions and returns the dual pair, already normalized.
pub fn dual_swillmore<S: Field>(fr: &FrameFields<S>, tol: &Tolerances) -> Result<(PairFields<S>, SWillmoreData<S>)> {
    let w = willmore_residual(fr).sup();
    let ws = willmore_scale(fr).sup();
    if !tol.is_zero(w, ws) {
        return Err(Error::NotSWillmore(format!("Willmore residual {w:e} at scale {ws:e}")));
    }
    let data = swillmore_extract(fr)?;
    let dep = data.dependence_residual.sup();
    if !tol.is_zero(dep, 1.0) {
        return Err(Error::NotSWillmore(format!("dependence residual {dep:e}")));
    }
    let yhat = dual_lift(fr, &data.mu);
    Ok((PairFields::from_normalized(fr.clone(), yhat), data))
}

/// The dual of an S-Willmore immersion as a second lift.
pub struct DualLift {
    pub surface: Arc<dyn Immersion>,
    pub tol: Tolerances,
}

impl DualLift {
    pub fn new(surface: Arc<dyn Immersion>) -> Self {
        DualLift { surface, tol: Tolerances::default() }
    }
}

impl LiftSource for DualLift {
    fn lift_jet(&self, z: C64) -> Result<MVec<Jet>> {
        let fr = frame_at(self.surface.as_ref(), z)?;
        Ok(dual_swillmore(&fr, &self.tol)?.0.yhat)
    }
    fn name(&self) -> String {
        format!("dual({})", self.surface.name())
    }
}
