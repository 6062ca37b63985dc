//! Expansion of a composition scheme into a flat list of transport and
//! collision stages.

use super::coefficients::CompositionScheme;
use crate::error::Result;
use crate::relaxation::RelaxationParams;
use crate::scalar::Complex64;

/// Second-order (or first-order) building block the scheme composes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMethod {
    /// `C_1(dt) T_1(dt)`; first order, for diagnostics only.
    Lie,
    /// `T_2(dt/2) C_2(dt) T_2(dt/2)`; degrades to first order as `τ -> 0`.
    Strang,
    /// `T_2(dt/4) C_2(dt/2) T_2(dt/2) C_2(dt/2) T_2(dt/4)`; stays second
    /// order at `τ = 0` because two reflections cancel.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    Transport,
    Collide,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub kind: StageKind,
    pub dt: Complex64,
    /// Index of the base step this stage came from.
    pub substep: usize,
}

/// Ordered stages of one macro time step. Stages are applied first to last.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPlan {
    pub stages: Vec<Stage>,
    pub base: BaseMethod,
    pub dt: f64,
    pub fused: bool,
    pub substeps: usize,
}

/// Expands `scheme` at macro step `dt`.
///
/// With `fuse`, adjacent transport stages of consecutive substeps are merged
/// into one transport with the summed step. That halves the number of
/// sweeps but is not the same map: `T_2(a) T_2(b)` and `T_2(a + b)` differ at
/// third order in the step, which perturbs the order conditions of the
/// composition. Fused plans are used for cost accounting, not production.
pub fn build_plan(scheme: &CompositionScheme, dt: f64, base: BaseMethod, fuse: bool) -> StepPlan {
    let mut stages = Vec::new();
    for (substep, gamma) in scheme.gammas.iter().enumerate() {
        let h = gamma * dt;
        let t = |dt| Stage { kind: StageKind::Transport, dt, substep };
        let c = |dt| Stage { kind: StageKind::Collide, dt, substep };
        match base {
            BaseMethod::Lie => stages.extend([t(h), c(h)]),
            BaseMethod::Strang => stages.extend([t(h * 0.5), c(h), t(h * 0.5)]),
            BaseMethod::Symmetric => {
                stages.extend([t(h * 0.25), c(h * 0.5), t(h * 0.5), c(h * 0.5), t(h * 0.25)])
            }
        }
    }
    if fuse {
        let mut merged: Vec<Stage> = Vec::with_capacity(stages.len());
        for s in stages {
            match merged.last_mut() {
                Some(last) if last.kind == StageKind::Transport && s.kind == StageKind::Transport => {
                    last.dt += s.dt;
                }
                _ => merged.push(s),
            }
        }
        stages = merged;
    }
    StepPlan {
        stages,
        base,
        dt,
        fused: fuse,
        substeps: scheme.gammas.len(),
    }
}

impl StepPlan {
    pub fn n_transport(&self) -> usize {
        self.stages.iter().filter(|s| s.kind == StageKind::Transport).count()
    }

    pub fn n_collide(&self) -> usize {
        self.stages.iter().filter(|s| s.kind == StageKind::Collide).count()
    }

    pub fn is_real(&self) -> bool {
        self.stages.iter().all(|s| s.dt.im == 0.0)
    }

    /// Stage step multipliers read the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let n = self.stages.len();
        (0..n / 2).all(|i| {
            let (a, b) = (self.stages[i], self.stages[n - 1 - i]);
            a.kind == b.kind && (a.dt - b.dt).norm() <= 1e-15 * a.dt.norm().max(1e-300)
        })
    }

    /// Checks every collision stage against the pole guard; the error names
    /// the first offending stage.
    pub fn check_collisions(&self, params: &RelaxationParams) -> Result<()> {
        for (i, s) in self.stages.iter().enumerate() {
            if s.kind == StageKind::Collide {
                let r = match self.base {
                    BaseMethod::Lie => params.theta_c1(s.dt),
                    _ => params.theta_c2(s.dt),
                };
                r.map_err(|e| e.at_stage(i))?;
            }
        }
        Ok(())
    }

    /// `|2τ + dt|` for each collision stage (`|τ + dt|` for the Lie base).
    pub fn collision_denominators(&self, tau: f64) -> Vec<(usize, f64)> {
        let k = if self.base == BaseMethod::Lie { 1.0 } else { 2.0 };
        self.stages
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind == StageKind::Collide)
            .map(|(i, s)| (i, (s.dt + k * tau).norm()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::palindrome::coefficients::SchemeKind;

    #[test]
    fn base_case_is_the_symmetric_brick() {
        let plan = build_plan(&CompositionScheme::order2(), 0.8, BaseMethod::Symmetric, true);
        let kinds: Vec<_> = plan.stages.iter().map(|s| s.kind).collect();
        use StageKind::*;
        assert_eq!(kinds, [Transport, Collide, Transport, Collide, Transport]);
        let dts: Vec<f64> = plan.stages.iter().map(|s| s.dt.re).collect();
        assert_eq!(dts, [0.2, 0.4, 0.4, 0.4, 0.2]);
    }

    #[test]
    fn stage_counts() {
        let cases = [
            (SchemeKind::M2, 5, 5),
            (SchemeKind::Tj4Real, 15, 13),
            (SchemeKind::Tj4Complex, 15, 13),
            (SchemeKind::Suzuki4, 25, 21),
            (SchemeKind::KahanLi6, 45, 37),
            (SchemeKind::Tj6Complex, 45, 37),
        ];
        for (kind, unfused, fused) in cases {
            let s = kind.scheme();
            assert_eq!(build_plan(&s, 0.1, BaseMethod::Symmetric, false).stages.len(), unfused, "{kind}");
            assert_eq!(build_plan(&s, 0.1, BaseMethod::Symmetric, true).stages.len(), fused, "{kind}");
        }
    }

    #[test]
    fn plans_are_palindromic() {
        for kind in SchemeKind::ALL {
            for fuse in [false, true] {
                for base in [BaseMethod::Strang, BaseMethod::Symmetric] {
                    let plan = build_plan(&kind.scheme(), 0.37, base, fuse);
                    assert!(plan.is_palindromic(), "{kind} {base:?} fuse={fuse}");
                }
            }
        }
        let lie = build_plan(&CompositionScheme::order2(), 0.1, BaseMethod::Lie, false);
        assert!(!lie.is_palindromic());
    }

    #[test]
    fn total_transport_time_is_dt() {
        for kind in SchemeKind::ALL {
            let plan = build_plan(&kind.scheme(), 0.25, BaseMethod::Symmetric, true);
            let total: Complex64 = plan
                .stages
                .iter()
                .filter(|s| s.kind == StageKind::Transport)
                .map(|s| s.dt)
                .sum();
            assert!((total - 0.25).norm() < 1e-14);
        }
    }

    /// With `h = 0.01` cells of degree 5, `λ = 2` and `β = 5`, the Kahan-Li
    /// stage `γ_2 dt / 2` sits on the Crank-Nicolson pole for `τ ≈ 5.19e-4`.
    #[test]
    fn collision_pole_is_reported_with_stage() {
        let mesh = crate::dg::DgMesh::new(-0.5, 0.5, 100, 5).unwrap();
        let dt = mesh.cfl_dt(5.0, 2.0);
        let plan = build_plan(&CompositionScheme::kahan_li6(), dt, BaseMethod::Symmetric, false);
        let params = RelaxationParams::new(0.000519, crate::relaxation::DEFAULT_SINGULAR_TOL).unwrap();
        match plan.check_collisions(&params) {
            // Substep 2 is the first with γ_2; its first collision is stage 11.
            Err(Error::SingularCollision { stage, relative, .. }) => {
                assert_eq!(stage, 11);
                assert_eq!(plan.stages[stage].substep, 2);
                assert!(relative < 1e-3);
            }
            other => panic!("expected singular collision, got {other:?}"),
        }
        let wide = build_plan(&CompositionScheme::kahan_li6(), 2.0 * dt, BaseMethod::Symmetric, false);
        assert!(wide.check_collisions(&params).is_ok());
        let complex = build_plan(&SchemeKind::Tj6Complex.scheme(), dt, BaseMethod::Symmetric, false);
        assert!(complex.check_collisions(&params).is_ok());
    }
}
