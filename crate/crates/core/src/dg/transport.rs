//! Upwind nodal DG transport and its implicit solvers.
//!
//! For a velocity `v` the semi-discrete operator on one cell reads
//!
//! ```text
//! (L_h f)_cell = v D f + |v| / w_in (f_in - f_up) e_in
//! ```
//!
//! where `in` is the inflow node of the cell (left end for `v > 0`), `w_in` its
//! lumped mass weight and `f_up` the trace of the upstream neighbour, or the
//! boundary equilibrium at the domain inflow. Because the coupling only goes
//! downstream, `Id + dt L_h` is block lower triangular in flow order and is
//! solved cell by cell.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::field::KineticField;
use super::mesh::DgMesh;
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::lattice::LatticeModel;
use crate::scalar::Scalar;

/// Largest accepted 1-norm condition number of a local implicit block.
pub const BLOCK_CONDITION_LIMIT: f64 = 1e12;

/// Below this many values, sweeps run on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// Time-independent inflow data: the macroscopic states imposed at `a` and `b`.
///
/// Each inflowing distribution receives the equilibrium of its side's state.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Which way the velocities point during a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    /// Every velocity negated; used for negative time steps.
    Reversed,
}

/// First order implicit Euler `(Id + dt L_h)^{-1}` or the Cayley form
/// `(Id - dt/2 L_h)(Id + dt/2 L_h)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportOrder {
    First,
    Second,
}

/// LU factorization with partial pivoting of a small dense block.
#[derive(Debug, Clone)]
pub struct LocalLu<S> {
    n: usize,
    lu: Vec<S>,
    pivots: Vec<usize>,
}

impl<S: Scalar> LocalLu<S> {
    /// Factorizes the row-major `n x n` matrix `a`.
    pub fn factor(n: usize, mut a: Vec<S>) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let norm = one_norm(n, &a);
        let mut pivots = vec![0; n];
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].modulus().total_cmp(&a[j * n + k].modulus()))
                .unwrap_or(k);
            if a[p * n + k].modulus() == 0.0 {
                return Err(Error::SingularBlock { condition: f64::INFINITY });
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k].div_by(pivot);
                a[i * n + k] = factor;
                for j in k + 1..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= factor * akj;
                }
            }
        }
        let lu = Self { n, lu: a, pivots };
        let condition = norm * lu.inverse_one_norm();
        if !(condition <= BLOCK_CONDITION_LIMIT) {
            return Err(Error::SingularBlock { condition });
        }
        Ok(lu)
    }

    fn inverse_one_norm(&self) -> f64 {
        let n = self.n;
        let mut col = vec![S::zero(); n];
        let mut best: f64 = 0.0;
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = S::zero());
            col[j] = S::one();
            self.solve(&mut col);
            best = best.max(col.iter().map(|v| v.modulus()).sum());
        }
        best
    }

    /// Solves in place.
    #[inline]
    pub fn solve(&self, b: &mut [S]) {
        let n = self.n;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
        }
        for i in 1..n {
            let mut acc = b[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * b[j];
            }
            b[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * b[j];
            }
            b[i] = acc.div_by(self.lu[i * n + i]);
        }
    }
}

fn one_norm<S: Scalar>(n: usize, a: &[S]) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Factorized block for one `(dt, sign of velocity)` pair.
#[derive(Debug)]
struct Block<S> {
    lu: LocalLu<S>,
    /// `dt |v| / w_in`, the weight of the upstream trace in the right side.
    inflow_coef: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct BlockKey {
    re: u64,
    im: u64,
    positive: bool,
}

/// Transport operator for all `2m` velocities on a fixed mesh.
#[derive(Debug)]
pub struct Transport<S> {
    n_cells: usize,
    n_nodes: usize,
    lambda: f64,
    /// Physical differentiation matrix, row-major.
    deriv: Vec<f64>,
    lift_left: f64,
    lift_right: f64,
    inflow_left: Vec<S>,
    inflow_right: Vec<S>,
    cache: HashMap<BlockKey, Arc<Block<S>>>,
}

const CACHE_LIMIT: usize = 256;

impl<S: Scalar> Transport<S> {
    pub fn new<F: Flux>(mesh: &DgMesh, model: &LatticeModel<F>, bc: &BoundaryCondition) -> Result<Self> {
        let m = model.m();
        if bc.left.len() != m || bc.right.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "boundary states need {m} components, got {} and {}",
                bc.left.len(),
                bc.right.len()
            )));
        }
        let lift = |w: &[f64]| -> Result<Vec<S>> {
            let w: Vec<S> = w.iter().map(|&x| S::from_real(x)).collect();
            model.maxwellian(&w)
        };
        let scale = 2.0 / mesh.h();
        let weights = mesh.weights();
        Ok(Self {
            n_cells: mesh.n_cells(),
            n_nodes: mesh.n_nodes(),
            lambda: model.lambda(),
            deriv: mesh.reference().deriv.iter().map(|d| d * scale).collect(),
            lift_left: 1.0 / weights[0],
            lift_right: 1.0 / weights[mesh.degree()],
            inflow_left: lift(&bc.left)?,
            inflow_right: lift(&bc.right)?,
            cache: HashMap::new(),
        })
    }

    pub fn n_components(&self) -> usize {
        self.inflow_left.len()
    }

    /// Signed velocity of component `comp` in direction `dir`.
    #[inline]
    fn velocity(&self, comp: usize, dir: Direction) -> f64 {
        let v = if comp % 2 == 0 { -self.lambda } else { self.lambda };
        match dir {
            Direction::Forward => v,
            Direction::Reversed => -v,
        }
    }

    #[inline]
    fn inflow(&self, comp: usize, v: f64) -> S {
        if v > 0.0 {
            self.inflow_left[comp]
        } else {
            self.inflow_right[comp]
        }
    }

    fn check(&self, f: &KineticField<S>) -> Result<()> {
        if f.n_cells() != self.n_cells || f.n_nodes() != self.n_nodes || f.n_components() != self.n_components() {
            return Err(Error::ShapeMismatch(format!(
                "field ({}, {}, {}) on transport ({}, {}, {})",
                f.n_cells(),
                f.n_nodes(),
                f.n_components(),
                self.n_cells,
                self.n_nodes,
                self.n_components()
            )));
        }
        Ok(())
    }

    /// Explicit application of `L_h` (including inflow boundary data).
    pub fn apply(&self, f: &KineticField<S>) -> Result<KineticField<S>> {
        self.apply_directed(f, Direction::Forward)
    }

    pub fn apply_directed(&self, f: &KineticField<S>, dir: Direction) -> Result<KineticField<S>> {
        self.check(f)?;
        let np = self.n_nodes;
        let mut out = KineticField::zeros(self.n_cells, np, f.n_components());
        for comp in 0..f.n_components() {
            let v = self.velocity(comp, dir);
            let src = f.component(comp);
            let dst = out.component_mut(comp);
            for j in 0..self.n_cells {
                let cell = &src[j * np..(j + 1) * np];
                let res = &mut dst[j * np..(j + 1) * np];
                for (i, r) in res.iter_mut().enumerate() {
                    let row = &self.deriv[i * np..(i + 1) * np];
                    *r = row.iter().zip(cell).map(|(d, x)| x.scale(v * d)).sum();
                }
                if v > 0.0 {
                    let up = if j == 0 { self.inflow(comp, v) } else { src[j * np - 1] };
                    res[0] += (cell[0] - up).scale(v * self.lift_left);
                } else {
                    let up = if j + 1 == self.n_cells { self.inflow(comp, v) } else { src[(j + 1) * np] };
                    res[np - 1] += (cell[np - 1] - up).scale(-v * self.lift_right);
                }
            }
        }
        Ok(out)
    }

    fn block(&mut self, dt: S, positive: bool) -> Result<Arc<Block<S>>> {
        let z = dt.to_complex();
        let key = BlockKey {
            re: z.re.to_bits(),
            im: z.im.to_bits(),
            positive,
        };
        if let Some(b) = self.cache.get(&key) {
            return Ok(Arc::clone(b));
        }
        let np = self.n_nodes;
        let (v, inflow_node, lift) = if positive {
            (self.lambda, 0, self.lift_left)
        } else {
            (-self.lambda, np - 1, self.lift_right)
        };
        let mut a: Vec<S> = self.deriv.iter().map(|d| dt.scale(v * d)).collect();
        for i in 0..np {
            a[i * np + i] += S::one();
        }
        let inflow_coef = dt.scale(self.lambda * lift);
        a[inflow_node * np + inflow_node] += inflow_coef;
        let block = Arc::new(Block {
            lu: LocalLu::factor(np, a)?,
            inflow_coef,
        });
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(key, Arc::clone(&block));
        Ok(block)
    }

    /// Implicit transport over `dt`, overwriting `f`.
    pub fn solve(&mut self, f: &mut KineticField<S>, dt: S, dir: Direction, order: TransportOrder) -> Result<()> {
        self.check(f)?;
        if dt == S::zero() {
            return Ok(());
        }
        let dt_solve = match order {
            TransportOrder::First => dt,
            TransportOrder::Second => dt.scale(0.5),
        };
        let plus = self.block(dt_solve, true)?;
        let minus = self.block(dt_solve, false)?;
        let cayley = order == TransportOrder::Second;
        let (n_cells, np) = (self.n_cells, self.n_nodes);
        let stride = f.component_len();
        let jobs: Vec<(Arc<Block<S>>, S, bool)> = (0..f.n_components())
            .map(|comp| {
                let v = self.velocity(comp, dir);
                let block = if v > 0.0 { Arc::clone(&plus) } else { Arc::clone(&minus) };
                (block, self.inflow(comp, v), v > 0.0)
            })
            .collect();
        let run = |(data, (block, inflow, forward)): (&mut [S], &(Arc<Block<S>>, S, bool))| {
            sweep(data, n_cells, np, block, *inflow, *forward, cayley);
        };
        if f.as_slice().len() >= PARALLEL_THRESHOLD {
            f.as_mut_slice().par_chunks_mut(stride).zip(jobs.par_iter()).for_each(run);
        } else {
            f.as_mut_slice().chunks_mut(stride).zip(jobs.iter()).for_each(run);
        }
        Ok(())
    }

    /// `T_1(dt) = (Id + dt L_h)^{-1}`.
    pub fn solve_t1(&mut self, f: &mut KineticField<S>, dt: S) -> Result<()> {
        self.solve(f, dt, Direction::Forward, TransportOrder::First)
    }

    /// `T_2(dt) = (Id - dt/2 L_h)(Id + dt/2 L_h)^{-1}`, evaluated as `2g - f`
    /// with `g = T_1(dt/2) f`.
    pub fn solve_t2(&mut self, f: &mut KineticField<S>, dt: S) -> Result<()> {
        self.solve(f, dt, Direction::Forward, TransportOrder::Second)
    }

    /// `T_2(dt)` when `Re dt >= 0`, otherwise `R T_2(-dt) R`: the reversed
    /// problem runs forward in time with every velocity negated, which keeps
    /// the upwind dissipation of the right sign.
    pub fn transport_signed(&mut self, f: &mut KineticField<S>, dt: S) -> Result<()> {
        self.transport_signed_with(f, dt, TransportOrder::Second)
    }

    pub fn transport_signed_with(&mut self, f: &mut KineticField<S>, dt: S, order: TransportOrder) -> Result<()> {
        if dt.re() >= 0.0 {
            self.solve(f, dt, Direction::Forward, order)
        } else {
            self.solve(f, -dt, Direction::Reversed, order)
        }
    }
}

/// One velocity, cells visited in flow order. The solution overwrites `data`
/// cell by cell; the upstream trace is always taken from already updated
/// (implicit) values.
#[inline]
fn sweep<S: Scalar>(data: &mut [S], n_cells: usize, np: usize, block: &Block<S>, inflow: S, forward: bool, cayley: bool) {
    let mut old = [S::zero(); super::quadrature::MAX_DEGREE + 1];
    let mut up = inflow;
    let in_node = if forward { 0 } else { np - 1 };
    let out_node = np - 1 - in_node;
    for step in 0..n_cells {
        let j = if forward { step } else { n_cells - 1 - step };
        let cell = &mut data[j * np..(j + 1) * np];
        if cayley {
            old[..np].copy_from_slice(cell);
        }
        cell[in_node] += block.inflow_coef * up;
        block.lu.solve(cell);
        up = cell[out_node];
        if cayley {
            for (g, f) in cell.iter_mut().zip(&old[..np]) {
                *g = *g + *g - *f;
            }
        }
    }
}
