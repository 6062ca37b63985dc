//! Flux functions for the built-in systems of conservation laws.
//!
//! Fluxes are written as rational functions of the conservative variables
//! only, so they extend analytically to complex states. Wave speeds are
//! real-valued and used for the sub-characteristic check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A system of `m` conservation laws `w_t + q(w)_x = 0`.
pub trait Flux: Send + Sync {
    /// Number of conserved components.
    fn m(&self) -> usize;

    /// Writes `q(w)` into `q`.
    fn flux<S: Scalar>(&self, w: &[S], q: &mut [S]) -> Result<()>;

    /// Spectral radius of the flux Jacobian at a real state.
    fn max_wave_speed(&self, w: &[f64]) -> Result<f64>;

    /// Names of the primitive variables used in output files.
    fn primitive_names(&self) -> &'static [&'static str];

    /// Converts conservative to primitive variables.
    fn primitive<S: Scalar>(&self, w: &[S], out: &mut [S]) -> Result<()>;

    /// Real-arithmetic admissibility of a state (positive density, ...).
    fn check_admissible(&self, w: &[f64]) -> Result<()>;
}

/// Isothermal gas dynamics: `w = (ρ, ρu)`, `q = (ρu, ρu² + c²ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isothermal {
    pub c: f64,
}

impl Isothermal {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Config(format!("isothermal sound speed must be positive, got {c}")));
        }
        Ok(Self { c })
    }
}

impl Flux for Isothermal {
    fn m(&self) -> usize {
        2
    }

    #[inline]
    fn flux<S: Scalar>(&self, w: &[S], q: &mut [S]) -> Result<()> {
        let (rho, mom) = (w[0], w[1]);
        if rho.modulus() == 0.0 {
            return Err(Error::SingularFlux);
        }
        q[0] = mom;
        q[1] = (mom * mom).div_by(rho) + rho.scale(self.c * self.c);
        Ok(())
    }

    fn max_wave_speed(&self, w: &[f64]) -> Result<f64> {
        self.check_admissible(w)?;
        Ok((w[1] / w[0]).abs() + self.c)
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["rho", "u"]
    }

    fn primitive<S: Scalar>(&self, w: &[S], out: &mut [S]) -> Result<()> {
        if w[0].modulus() == 0.0 {
            return Err(Error::SingularFlux);
        }
        out[0] = w[0];
        out[1] = w[1].div_by(w[0]);
        Ok(())
    }

    fn check_admissible(&self, w: &[f64]) -> Result<()> {
        if !(w[0] > 0.0) {
            return Err(Error::InadmissibleState(format!("density {} <= 0", w[0])));
        }
        Ok(())
    }
}

/// Polytropic Euler equations: `w = (ρ, ρu, E)` with `p = (γ-1)(E - ρu²/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Euler {
    pub gamma: f64,
}

impl Euler {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("polytropic exponent must exceed 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn pressure<S: Scalar>(&self, w: &[S]) -> S {
        (w[2] - (w[1] * w[1]).div_by(w[0] + w[0])).scale(self.gamma - 1.0)
    }

    /// Conservative state from primitive `(ρ, u, p)`.
    pub fn conservative(&self, rho: f64, u: f64, p: f64) -> [f64; 3] {
        [rho, rho * u, 0.5 * rho * u * u + p / (self.gamma - 1.0)]
    }
}

impl Flux for Euler {
    fn m(&self) -> usize {
        3
    }

    #[inline]
    fn flux<S: Scalar>(&self, w: &[S], q: &mut [S]) -> Result<()> {
        let (rho, mom, energy) = (w[0], w[1], w[2]);
        if rho.modulus() == 0.0 {
            return Err(Error::SingularFlux);
        }
        let u = mom.div_by(rho);
        let p = (energy - mom * u.scale(0.5)).scale(self.gamma - 1.0);
        q[0] = mom;
        q[1] = mom * u + p;
        q[2] = (energy + p) * u;
        Ok(())
    }

    fn max_wave_speed(&self, w: &[f64]) -> Result<f64> {
        self.check_admissible(w)?;
        let p = self.pressure(w);
        Ok((w[1] / w[0]).abs() + (self.gamma * p / w[0]).sqrt())
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["rho", "u", "p"]
    }

    fn primitive<S: Scalar>(&self, w: &[S], out: &mut [S]) -> Result<()> {
        if w[0].modulus() == 0.0 {
            return Err(Error::SingularFlux);
        }
        out[0] = w[0];
        out[1] = w[1].div_by(w[0]);
        out[2] = self.pressure(w);
        Ok(())
    }

    fn check_admissible(&self, w: &[f64]) -> Result<()> {
        if !(w[0] > 0.0) {
            return Err(Error::InadmissibleState(format!("density {} <= 0", w[0])));
        }
        let p = self.pressure(w);
        if !(p > 0.0) {
            return Err(Error::InadmissibleState(format!("pressure {p} <= 0")));
        }
        Ok(())
    }
}

/// Scalar linear advection `q(w) = a w`, mostly useful for testing the
/// transport machinery on a single pair of velocities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearAdvection {
    pub a: f64,
}

impl Flux for LinearAdvection {
    fn m(&self) -> usize {
        1
    }
    #[inline]
    fn flux<S: Scalar>(&self, w: &[S], q: &mut [S]) -> Result<()> {
        q[0] = w[0].scale(self.a);
        Ok(())
    }
    fn max_wave_speed(&self, _w: &[f64]) -> Result<f64> {
        Ok(self.a.abs())
    }
    fn primitive_names(&self) -> &'static [&'static str] {
        &["w"]
    }
    fn primitive<S: Scalar>(&self, w: &[S], out: &mut [S]) -> Result<()> {
        out[0] = w[0];
        Ok(())
    }
    fn check_admissible(&self, _w: &[f64]) -> Result<()> {
        Ok(())
    }
}

/// Runtime selection between the built-in systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxModel {
    Isothermal(Isothermal),
    Euler(Euler),
}

impl FluxModel {
    pub fn name(&self) -> &'static str {
        match self {
            FluxModel::Isothermal(_) => "isothermal",
            FluxModel::Euler(_) => "euler",
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $model:ident => $body:expr) => {
        match $self {
            FluxModel::Isothermal($model) => $body,
            FluxModel::Euler($model) => $body,
        }
    };
}

impl Flux for FluxModel {
    fn m(&self) -> usize {
        dispatch!(self, f => f.m())
    }
    #[inline]
    fn flux<S: Scalar>(&self, w: &[S], q: &mut [S]) -> Result<()> {
        dispatch!(self, f => f.flux(w, q))
    }
    fn max_wave_speed(&self, w: &[f64]) -> Result<f64> {
        dispatch!(self, f => f.max_wave_speed(w))
    }
    fn primitive_names(&self) -> &'static [&'static str] {
        dispatch!(self, f => f.primitive_names())
    }
    fn primitive<S: Scalar>(&self, w: &[S], out: &mut [S]) -> Result<()> {
        dispatch!(self, f => f.primitive(w, out))
    }
    fn check_admissible(&self, w: &[f64]) -> Result<()> {
        dispatch!(self, f => f.check_admissible(w))
    }
}
