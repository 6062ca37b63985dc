//! Closed-form initial data and exact solutions.

use crate::flux::Euler;

/// Isothermal pulse `ρ = 1 + exp(-30 x²)`, `u = 0`, as `(ρ, ρu)`.
pub fn smooth_pulse_init(x: f64) -> [f64; 2] {
    [1.0 + (-30.0 * x * x).exp(), 0.0]
}

/// Parameters of the slowly moving erf contact discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactWave {
    pub rho_left: f64,
    pub rho_right: f64,
    pub velocity: f64,
    pub pressure: f64,
    pub steepness: f64,
    pub gamma: f64,
}

impl Default for ContactWave {
    fn default() -> Self {
        Self {
            rho_left: 2.0,
            rho_right: 1.0,
            velocity: 0.01,
            pressure: 1.0,
            steepness: 10.0,
            gamma: 1.4,
        }
    }
}

impl ContactWave {
    pub fn density(&self, x: f64, t: f64) -> f64 {
        let omega = 0.5 * (1.0 - libm::erf(self.steepness * (x - self.velocity * t)));
        omega * self.rho_left + (1.0 - omega) * self.rho_right
    }

    /// Conservative Euler state at `(x, t)`.
    pub fn state(&self, x: f64, t: f64) -> [f64; 3] {
        Euler { gamma: self.gamma }.conservative(self.density(x, t), self.velocity, self.pressure)
    }
}

/// [`ContactWave::state`] with the default parameters.
pub fn contact_wave_exact(x: f64, t: f64) -> [f64; 3] {
    ContactWave::default().state(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::Flux;

    #[test]
    fn pulse_values() {
        assert_eq!(smooth_pulse_init(0.0), [2.0, 0.0]);
        assert!((smooth_pulse_init(2.0)[0] - 1.0).abs() < 1e-50);
        assert!((smooth_pulse_init(-2.0)[0] - 1.0).abs() < 1e-50);
    }

    #[test]
    fn contact_limits() {
        let cw = ContactWave::default();
        assert!((cw.density(-5.0, 0.0) - 2.0).abs() < 1e-15);
        assert!((cw.density(5.0, 0.0) - 1.0).abs() < 1e-15);
        assert!((cw.density(0.2, 20.0) - 1.5).abs() < 1e-15);
        let w = contact_wave_exact(0.0, 0.0);
        let p = Euler { gamma: 1.4 }.pressure(&w);
        assert!((p - 1.0).abs() < 1e-14);
    }

    /// Centered finite differences of `w_t + q(w)_x` on the closed form.
    #[test]
    fn contact_is_an_exact_solution() {
        let euler = Euler { gamma: 1.4 };
        let flux = |x: f64, t: f64| {
            let mut q = [0.0; 3];
            euler.flux(&contact_wave_exact(x, t), &mut q).unwrap();
            q
        };
        let e = 1e-5;
        for &(x, t) in &[(0.0, 0.0), (0.05, 1.0), (-0.1, 3.0), (0.3, 20.0)] {
            let wp = contact_wave_exact(x, t + e);
            let wm = contact_wave_exact(x, t - e);
            let qp = flux(x + e, t);
            let qm = flux(x - e, t);
            for k in 0..3 {
                let residual = (wp[k] - wm[k]) / (2.0 * e) + (qp[k] - qm[k]) / (2.0 * e);
                assert!(residual.abs() < 1e-8, "k={k} x={x} t={t}: {residual}");
            }
        }
    }
}
