//! Two-velocity-per-component kinetic representation of a conservation law.
//!
//! A system of `m` conservation laws is represented by `2m` distribution
//! functions. Component `k` of the conservative state is carried by the pair
//! of indices `2k` (velocity `-λ`) and `2k + 1` (velocity `+λ`):
//!
//! ```text
//! w_k = f_{2k} + f_{2k+1}
//! z_k = λ (f_{2k+1} - f_{2k})
//! ```
//!
//! The equilibrium ("Maxwellian") distribution is the unique `f` whose moments
//! are `(w, q(w))`.

use crate::dg::KineticField;
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::scalar::Scalar;

/// Flux model plus lattice speed `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel<F> {
    pub flux: F,
    lambda: f64,
}

impl<F: Flux> LatticeModel<F> {
    pub fn new(flux: F, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!("lattice speed must be positive, got {lambda}")));
        }
        Ok(Self { flux, lambda })
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of conserved components `m`.
    #[inline]
    pub fn m(&self) -> usize {
        self.flux.m()
    }

    /// Number of kinetic velocities `2m`.
    #[inline]
    pub fn n_velocities(&self) -> usize {
        2 * self.flux.m()
    }

    /// Velocity carried by kinetic index `i`.
    #[inline]
    pub fn velocity(&self, i: usize) -> f64 {
        if i % 2 == 0 {
            -self.lambda
        } else {
            self.lambda
        }
    }

    /// Writes the equilibrium distribution of `w` into `feq`.
    ///
    /// `q` is caller-provided scratch of length `m`.
    #[inline]
    pub fn maxwellian_into<S: Scalar>(&self, w: &[S], q: &mut [S], feq: &mut [S]) -> Result<()> {
        self.flux.flux(w, q)?;
        let inv = 0.5 / self.lambda;
        for k in 0..w.len() {
            let half = w[k].scale(0.5);
            let shift = q[k].scale(inv);
            feq[2 * k] = half - shift;
            feq[2 * k + 1] = half + shift;
        }
        Ok(())
    }

    pub fn maxwellian<S: Scalar>(&self, w: &[S]) -> Result<Vec<S>> {
        let mut q = vec![S::zero(); self.m()];
        let mut feq = vec![S::zero(); self.n_velocities()];
        self.maxwellian_into(w, &mut q, &mut feq)?;
        Ok(feq)
    }

    /// Conservative moments `w` of a node state.
    #[inline]
    pub fn conserved_into<S: Scalar>(&self, f: &[S], w: &mut [S]) {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = f[2 * k] + f[2 * k + 1];
        }
    }

    /// Returns `(w, z)`.
    pub fn moments<S: Scalar>(&self, f: &[S]) -> (Vec<S>, Vec<S>) {
        let m = f.len() / 2;
        let mut w = vec![S::zero(); m];
        self.conserved_into(f, &mut w);
        let z = (0..m)
            .map(|k| (f[2 * k + 1] - f[2 * k]).scale(self.lambda))
            .collect();
        (w, z)
    }

    /// Minimum of `λ - max_wave_speed(w)` over `states`.
    ///
    /// The margin is returned as-is; callers reject non-positive values.
    pub fn check_subcharacteristic<'a, I>(&self, states: I) -> Result<f64>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut margin = f64::INFINITY;
        let mut any = false;
        for w in states {
            any = true;
            margin = margin.min(self.lambda - self.flux.max_wave_speed(w)?);
        }
        if !any {
            return Err(Error::Config("sub-characteristic check on an empty state set".into()));
        }
        Ok(margin)
    }
}

/// Swaps the `-λ` and `+λ` components of every pair at every node.
pub fn reverse_velocities<S: Scalar>(f: &KineticField<S>) -> KineticField<S> {
    let mut out = f.clone();
    reverse_velocities_in_place(&mut out);
    out
}

pub fn reverse_velocities_in_place<S: Scalar>(f: &mut KineticField<S>) {
    let stride = f.component_len();
    let data = f.as_mut_slice();
    for pair in data.chunks_mut(2 * stride) {
        let (minus, plus) = pair.split_at_mut(stride);
        minus.swap_with_slice(plus);
    }
}
