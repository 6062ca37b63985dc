//! Exact Riemann solver for isothermal gas dynamics.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

/// Self-similar solution of an isothermal Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct IsothermalRiemann {
    pub c: f64,
    pub left: (f64, f64),
    pub right: (f64, f64),
    pub rho_star: f64,
    pub u_star: f64,
    pub waves: [Wave; 2],
}

/// Velocity change across the wave joining `rho_side` to `rho`, and its
/// derivative in `rho`.
fn lax_curve(rho: f64, rho_side: f64, c: f64) -> (f64, f64) {
    if rho <= rho_side {
        (c * (rho / rho_side).ln(), c / rho)
    } else {
        let s = (rho * rho_side).sqrt();
        (c * (rho - rho_side) / s, c * (rho + rho_side) / (2.0 * rho * s))
    }
}

pub fn solve_riemann_isothermal(rho_l: f64, u_l: f64, rho_r: f64, u_r: f64, c: f64) -> Result<IsothermalRiemann> {
    if !(rho_l > 0.0 && rho_r > 0.0 && c > 0.0) {
        return Err(Error::InadmissibleState(format!(
            "Riemann data needs positive densities and sound speed (rho_l={rho_l}, rho_r={rho_r}, c={c})"
        )));
    }
    // phi is increasing; solve phi(rho) = 0 in s = ln(rho).
    let phi = |rho: f64| {
        let (fl, dl) = lax_curve(rho, rho_l, c);
        let (fr, dr) = lax_curve(rho, rho_r, c);
        (fl + fr + u_r - u_l, dl + dr)
    };
    let (mut lo, mut hi) = (rho_l.min(rho_r).ln(), rho_l.max(rho_r).ln());
    while phi(lo.exp()).0 > 0.0 {
        lo -= 1.0;
        if lo < -700.0 {
            return Err(Error::RootFinding("no lower bracket for the intermediate density".into()));
        }
    }
    while phi(hi.exp()).0 < 0.0 {
        hi += 1.0;
        if hi > 700.0 {
            return Err(Error::RootFinding("no upper bracket for the intermediate density".into()));
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let rho = s.exp();
        let (val, der) = phi(rho);
        if val == 0.0 {
            break;
        }
        if val > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        // Newton in log space, bisection when it leaves the bracket.
        let newton = s - val / (der * rho);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let done = (next - s).abs() < 1e-15 || hi - lo < 1e-15;
        s = next;
        if done {
            break;
        }
    }
    let rho_star = s.exp();
    let u_star = u_l - lax_curve(rho_star, rho_l, c).0;

    let w1 = if rho_star > rho_l {
        Wave::Shock {
            speed: u_l - c * (rho_star / rho_l).sqrt(),
        }
    } else {
        Wave::Rarefaction {
            head: u_l - c,
            tail: u_star - c,
        }
    };
    let w2 = if rho_star > rho_r {
        Wave::Shock {
            speed: u_r + c * (rho_star / rho_r).sqrt(),
        }
    } else {
        Wave::Rarefaction {
            head: u_r + c,
            tail: u_star + c,
        }
    };
    Ok(IsothermalRiemann {
        c,
        left: (rho_l, u_l),
        right: (rho_r, u_r),
        rho_star,
        u_star,
        waves: [w1, w2],
    })
}

impl IsothermalRiemann {
    /// `(ρ, u)` at `ξ = x / t`.
    pub fn sample(&self, xi: f64) -> (f64, f64) {
        let c = self.c;
        let star = (self.rho_star, self.u_star);
        let (rho_l, u_l) = self.left;
        let (rho_r, u_r) = self.right;
        match self.waves[0] {
            Wave::Shock { speed } if xi < speed => return self.left,
            Wave::Rarefaction { head, .. } if xi < head => return self.left,
            Wave::Rarefaction { tail, .. } if xi <= tail => {
                let u = xi + c;
                return (rho_l * ((u_l - u) / c).exp(), u);
            }
            _ => {}
        }
        match self.waves[1] {
            Wave::Shock { speed } if xi > speed => self.right,
            Wave::Rarefaction { head, .. } if xi > head => self.right,
            Wave::Rarefaction { tail, .. } if xi >= tail => {
                let u = xi - c;
                (rho_r * ((u - u_r) / c).exp(), u)
            }
            _ => star,
        }
    }

    /// `(ρ, u)` at position `x` relative to the initial discontinuity `x0`.
    pub fn sample_at(&self, x: f64, x0: f64, t: f64) -> (f64, f64) {
        if t <= 0.0 {
            return if x < x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }

    /// Positions at time `t` of every shock.
    pub fn shock_positions(&self, x0: f64, t: f64) -> Vec<f64> {
        self.waves
            .iter()
            .filter_map(|w| match w {
                Wave::Shock { speed } => Some(x0 + speed * t),
                _ => None,
            })
            .collect()
    }
}
