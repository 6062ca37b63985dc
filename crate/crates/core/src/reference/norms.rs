//! Quadrature error norms and observed convergence orders.

use crate::dg::{DgMesh, KineticField};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Errors below this are treated as round-off rather than discretization.
pub const ROUND_OFF_FLOOR: f64 = 1e-12;

/// `L²` norms of a difference of kinetic fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorNorms {
    /// Over all kinetic components.
    pub kinetic: f64,
    /// One per conservative variable `w_k = f_{2k} + f_{2k+1}`.
    pub conserved: Vec<f64>,
}

/// Gauss-Lobatto `L²` norm of `a - b` (modulus for complex fields).
pub fn l2_error<S: Scalar>(a: &KineticField<S>, b: &KineticField<S>, mesh: &DgMesh) -> Result<ErrorNorms> {
    a.check_shape(b)?;
    if a.n_cells() != mesh.n_cells() || a.n_nodes() != mesh.n_nodes() {
        return Err(Error::ShapeMismatch("field does not live on this mesh".into()));
    }
    let diff = a.difference(b)?;
    let kinetic = mesh.l2_norm(&diff);
    let np = mesh.n_nodes();
    let weights = mesh.weights();
    let conserved = (0..diff.n_components() / 2)
        .map(|k| {
            let minus = diff.component(2 * k);
            let plus = diff.component(2 * k + 1);
            minus
                .iter()
                .zip(plus)
                .enumerate()
                .map(|(p, (m, q))| weights[p % np] * (*m + *q).modulus_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    Ok(ErrorNorms { kinetic, conserved })
}

/// `L²` error against a pointwise reference `reference(x) -> f(x)`.
pub fn l2_error_against<S: Scalar>(
    a: &KineticField<S>,
    mesh: &DgMesh,
    reference: impl Fn(f64) -> Vec<S>,
) -> Result<ErrorNorms> {
    let b = sample_field(mesh, a.n_components(), |_, x| reference(x))?;
    l2_error(a, &b, mesh)
}

/// Builds a field by evaluating `values(cell, x)` at every node.
pub fn sample_field<S: Scalar>(
    mesh: &DgMesh,
    n_components: usize,
    mut values: impl FnMut(usize, f64) -> Vec<S>,
) -> Result<KineticField<S>> {
    let np = mesh.n_nodes();
    let mut f = KineticField::zeros(mesh.n_cells(), np, n_components);
    for (p, &x) in mesh.nodes().iter().enumerate() {
        let v = values(p / np, x);
        if v.len() != n_components {
            return Err(Error::ShapeMismatch(format!("{} values for {n_components} components", v.len())));
        }
        f.scatter(p, &v);
    }
    Ok(f)
}

/// Evaluates `fine` (living on `fine_mesh`) at the nodes of `coarse`, by
/// polynomial evaluation inside the fine cell that lies within each coarse
/// cell.
pub fn restrict_to_mesh<S: Scalar>(fine: &KineticField<S>, fine_mesh: &DgMesh, coarse: &DgMesh) -> KineticField<S> {
    let np = coarse.n_nodes();
    let mut out = KineticField::zeros(coarse.n_cells(), np, fine.n_components());
    for (p, &x) in coarse.nodes().iter().enumerate() {
        let center = coarse.cell_center(p / np);
        for comp in 0..fine.n_components() {
            let v = fine_mesh.evaluate(fine, comp, x, center);
            let i = out.index(comp, p / np, p % np);
            out.as_mut_slice()[i] = v;
        }
    }
    out
}

/// Slope between two consecutive refinement levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservedOrder {
    Slope(f64),
    /// The finer error is below [`ROUND_OFF_FLOOR`].
    RoundOffFloor(f64),
    /// An error was zero, negative or not finite.
    Undefined,
}

impl ObservedOrder {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ObservedOrder::Slope(s) => Some(*s),
            _ => None,
        }
    }
}

/// Pairwise slopes `log(e_i / e_{i+1}) / log(h_i / h_{i+1})`.
pub fn observed_order(errors: &[f64], sizes: &[f64]) -> Result<Vec<ObservedOrder>> {
    if errors.len() != sizes.len() || errors.len() < 2 {
        return Err(Error::UndefinedOrder(format!(
            "need at least two matching entries, got {} errors and {} sizes",
            errors.len(),
            sizes.len()
        )));
    }
    Ok(errors
        .windows(2)
        .zip(sizes.windows(2))
        .map(|(e, h)| {
            if !(e[0] > 0.0 && e[1] > 0.0 && e[0].is_finite() && e[1].is_finite()) {
                return ObservedOrder::Undefined;
            }
            let slope = (e[0] / e[1]).ln() / (h[0] / h[1]).ln();
            if e[1] < ROUND_OFF_FLOOR {
                ObservedOrder::RoundOffFloor(slope)
            } else {
                ObservedOrder::Slope(slope)
            }
        })
        .collect())
}
