use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nodal values of the `2m` distribution functions on a DG mesh.
///
/// Storage is component-major: each velocity index owns one contiguous block
/// of `n_cells * n_nodes` values, laid out cell by cell. Transport sweeps
/// therefore work on disjoint slices, one per velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticField<S> {
    n_cells: usize,
    n_nodes: usize,
    n_components: usize,
    data: Vec<S>,
}

impl<S: Scalar> KineticField<S> {
    pub fn zeros(n_cells: usize, n_nodes: usize, n_components: usize) -> Self {
        Self {
            n_cells,
            n_nodes,
            n_components,
            data: vec![S::zero(); n_cells * n_nodes * n_components],
        }
    }

    pub fn from_vec(n_cells: usize, n_nodes: usize, n_components: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != n_cells * n_nodes * n_components {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {n_cells} cells x {n_nodes} nodes x {n_components} components",
                data.len()
            )));
        }
        Ok(Self {
            n_cells,
            n_nodes,
            n_components,
            data,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }
    pub fn n_components(&self) -> usize {
        self.n_components
    }
    /// Number of spatial points (`n_cells * n_nodes`).
    pub fn n_points(&self) -> usize {
        self.n_cells * self.n_nodes
    }
    /// Length of one component block.
    pub fn component_len(&self) -> usize {
        self.n_points()
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n_cells == other.n_cells
            && self.n_nodes == other.n_nodes
            && self.n_components == other.n_components
    }

    pub fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.n_cells, self.n_nodes, self.n_components, other.n_cells, other.n_nodes, other.n_components
            )))
        }
    }

    #[inline]
    pub fn index(&self, comp: usize, cell: usize, node: usize) -> usize {
        comp * self.n_points() + cell * self.n_nodes + node
    }

    #[inline]
    pub fn get(&self, comp: usize, cell: usize, node: usize) -> S {
        self.data[self.index(comp, cell, node)]
    }

    #[inline]
    pub fn set(&mut self, comp: usize, cell: usize, node: usize, value: S) {
        let i = self.index(comp, cell, node);
        self.data[i] = value;
    }

    pub fn component(&self, comp: usize) -> &[S] {
        let n = self.n_points();
        &self.data[comp * n..(comp + 1) * n]
    }

    pub fn component_mut(&mut self, comp: usize) -> &mut [S] {
        let n = self.n_points();
        &mut self.data[comp * n..(comp + 1) * n]
    }

    pub fn cell(&self, comp: usize, cell: usize) -> &[S] {
        let start = self.index(comp, cell, 0);
        &self.data[start..start + self.n_nodes]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    /// Copies the `2m` values at spatial point `point` into `out`.
    #[inline]
    pub fn gather(&self, point: usize, out: &mut [S]) {
        let n = self.n_points();
        for (i, v) in out.iter_mut().enumerate() {
            *v = self.data[i * n + point];
        }
    }

    #[inline]
    pub fn scatter(&mut self, point: usize, values: &[S]) {
        let n = self.n_points();
        for (i, v) in values.iter().enumerate() {
            self.data[i * n + point] = *v;
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> KineticField<T> {
        KineticField {
            n_cells: self.n_cells,
            n_nodes: self.n_nodes,
            n_components: self.n_components,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_complex(&self) -> KineticField<crate::scalar::Complex64> {
        self.map(Scalar::to_complex)
    }

    /// Real part of every value.
    pub fn real_part(&self) -> KineticField<f64> {
        self.map(Scalar::re)
    }

    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|v| !v.is_finite())
    }

    /// `self - other`, elementwise.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a -= *b);
        Ok(out)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).modulus())
            .fold(0.0, f64::max)
    }
}
