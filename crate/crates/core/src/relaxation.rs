//! Pointwise BGK collision integrators.
//!
//! During a collision the conservative moments `w`, hence the equilibrium
//! `f^eq`, are frozen, so both implicit integrators reduce to a relaxation
//! `f + θ (f^eq - f)`:
//!
//! * implicit Euler: `θ = dt / (dt + τ)`,
//! * Crank-Nicolson: `θ = 2 dt / (2τ + dt)`.
//!
//! At `τ = 0` the Crank-Nicolson map is the reflection `2 f^eq - f` for every
//! `dt`, an involution.

use rayon::prelude::*;

use crate::dg::KineticField;
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::lattice::LatticeModel;
use crate::scalar::{Complex64, Scalar};

/// Default threshold on `|2τ + dt| / (2τ + |dt|)`.
///
/// The non-equilibrium part of `f` is amplified by `|(2τ - dt) / (2τ + dt)|`,
/// which is about the inverse of this ratio near the pole; `1e-3` caps the
/// per-stage amplification near `2e3`.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-3;

const PARALLEL_THRESHOLD: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    pub tau: f64,
    pub singular_tol: f64,
}

impl RelaxationParams {
    pub fn new(tau: f64, singular_tol: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::Config(format!("relaxation time must be >= 0, got {tau}")));
        }
        if !(singular_tol > 0.0) {
            return Err(Error::Config(format!("singular tolerance must be > 0, got {singular_tol}")));
        }
        Ok(Self { tau, singular_tol })
    }

    pub fn fluid_limit() -> Self {
        Self {
            tau: 0.0,
            singular_tol: DEFAULT_SINGULAR_TOL,
        }
    }

    /// Relaxation weight of the Crank-Nicolson collision, with the pole guard.
    pub fn theta_c2(&self, dt: Complex64) -> Result<Complex64> {
        if self.tau == 0.0 {
            return Ok(Complex64::new(2.0, 0.0));
        }
        let denom = dt + 2.0 * self.tau;
        self.guard(denom, 2.0 * self.tau + dt.norm(), dt)?;
        Ok(2.0 * dt / denom)
    }

    /// Relaxation weight of the implicit Euler collision.
    pub fn theta_c1(&self, dt: Complex64) -> Result<Complex64> {
        if self.tau == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let denom = dt + self.tau;
        self.guard(denom, self.tau + dt.norm(), dt)?;
        Ok(dt / denom)
    }

    fn guard(&self, denom: Complex64, scale: f64, dt: Complex64) -> Result<()> {
        let relative = denom.norm() / scale;
        if relative <= self.singular_tol {
            return Err(Error::SingularCollision {
                stage: 0,
                denominator: denom.norm(),
                relative,
                dt_re: dt.re,
                dt_im: dt.im,
            });
        }
        Ok(())
    }
}

/// Collision integrator order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionOrder {
    /// Implicit Euler, `C_1`.
    First,
    /// Crank-Nicolson, `C_2`.
    Second,
}

/// Relaxes one node state: `f <- f + θ (f^eq(f) - f)`.
#[inline]
fn relax_node<S: Scalar, F: Flux>(
    model: &LatticeModel<F>,
    f: &mut [S],
    theta: S,
    w: &mut [S],
    q: &mut [S],
    feq: &mut [S],
) -> Result<()> {
    model.conserved_into(f, w);
    model.maxwellian_into(w, q, feq)?;
    if theta == S::one() {
        f.copy_from_slice(feq);
        return Ok(());
    }
    for (fi, ei) in f.iter_mut().zip(feq.iter()) {
        *fi += theta * (*ei - *fi);
    }
    Ok(())
}

/// `C_1(dt)` at one node.
pub fn collide_c1<S: Scalar, F: Flux>(f: &[S], dt: S, params: &RelaxationParams, model: &LatticeModel<F>) -> Result<Vec<S>> {
    collide_node(f, dt, params, model, CollisionOrder::First)
}

/// `C_2(dt)` at one node.
pub fn collide_c2<S: Scalar, F: Flux>(f: &[S], dt: S, params: &RelaxationParams, model: &LatticeModel<F>) -> Result<Vec<S>> {
    collide_node(f, dt, params, model, CollisionOrder::Second)
}

fn collide_node<S: Scalar, F: Flux>(
    f: &[S],
    dt: S,
    params: &RelaxationParams,
    model: &LatticeModel<F>,
    order: CollisionOrder,
) -> Result<Vec<S>> {
    let mut out = f.to_vec();
    if dt == S::zero() && params.tau > 0.0 {
        return Ok(out);
    }
    let theta = theta(params, dt, order)?;
    let m = model.m();
    let (mut w, mut q, mut feq) = (vec![S::zero(); m], vec![S::zero(); m], vec![S::zero(); 2 * m]);
    relax_node(model, &mut out, theta, &mut w, &mut q, &mut feq)?;
    Ok(out)
}

fn theta<S: Scalar>(params: &RelaxationParams, dt: S, order: CollisionOrder) -> Result<S> {
    let z = match order {
        CollisionOrder::First => params.theta_c1(dt.to_complex())?,
        CollisionOrder::Second => params.theta_c2(dt.to_complex())?,
    };
    S::from_complex(z).ok_or_else(|| Error::ComplexStepInRealRun(format!("{dt:?}")))
}

/// Largest number of conserved variables `collide_field` handles.
pub const MAX_CONSERVED: usize = 8;

/// Applies a collision step at every node of `f`.
pub fn collide_field<S: Scalar, F: Flux>(
    f: &mut KineticField<S>,
    dt: S,
    params: &RelaxationParams,
    model: &LatticeModel<F>,
    order: CollisionOrder,
) -> Result<()> {
    if dt == S::zero() && params.tau > 0.0 {
        return Ok(());
    }
    let theta = theta(params, dt, order)?;
    let nv = f.n_components();
    let m = model.m();
    if nv != 2 * m {
        return Err(Error::ShapeMismatch(format!("{nv} components for a model with m = {m}")));
    }
    if m > MAX_CONSERVED {
        return Err(Error::ShapeMismatch(format!("m = {m} exceeds {MAX_CONSERVED} conserved variables")));
    }
    let n_points = f.n_points();
    let chunk = if f.as_slice().len() >= PARALLEL_THRESHOLD {
        n_points.div_ceil(rayon::current_num_threads().max(1) * 4).max(64)
    } else {
        n_points
    };
    let n_chunks = n_points.div_ceil(chunk);
    let mut groups: Vec<Vec<&mut [S]>> = (0..n_chunks).map(|_| Vec::with_capacity(nv)).collect();
    for comp in f.as_mut_slice().chunks_mut(n_points) {
        for (g, c) in groups.iter_mut().zip(comp.chunks_mut(chunk)) {
            g.push(c);
        }
    }
    let work = |mut g: Vec<&mut [S]>| -> Result<()> {
        let mut node = [S::zero(); 2 * MAX_CONSERVED];
        let mut w = [S::zero(); MAX_CONSERVED];
        let mut q = [S::zero(); MAX_CONSERVED];
        let mut feq = [S::zero(); 2 * MAX_CONSERVED];
        for p in 0..g[0].len() {
            for (i, c) in g.iter().enumerate() {
                node[i] = c[p];
            }
            relax_node(model, &mut node[..nv], theta, &mut w[..m], &mut q[..m], &mut feq[..nv])?;
            for (i, c) in g.iter_mut().enumerate() {
                c[p] = node[i];
            }
        }
        Ok(())
    };
    if n_chunks > 1 {
        groups.into_par_iter().try_for_each(work)
    } else {
        groups.into_iter().try_for_each(work)
    }
}
