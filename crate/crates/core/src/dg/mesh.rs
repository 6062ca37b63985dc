use super::field::KineticField;
use super::quadrature::{gauss_lobatto, GaussLobatto};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform 1D mesh of `n_cells` cells on `[a, b]` with a Gauss-Lobatto
/// nodal basis of degree `degree` in each cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DgMesh {
    a: f64,
    b: f64,
    n_cells: usize,
    h: f64,
    delta: f64,
    reference: GaussLobatto,
    /// Physical node coordinates, cell-major.
    nodes: Vec<f64>,
    /// Physical quadrature weights per local node (same in every cell).
    weights: Vec<f64>,
}

impl DgMesh {
    pub fn new(a: f64, b: f64, n_cells: usize, degree: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Config(format!("invalid domain [{a}, {b}]")));
        }
        if n_cells == 0 {
            return Err(Error::Config("mesh needs at least one cell".into()));
        }
        let reference = gauss_lobatto(degree)?;
        let h = (b - a) / n_cells as f64;
        let half = 0.5 * h;
        let delta = half * reference.min_gap();
        let mut nodes = Vec::with_capacity(n_cells * reference.n_nodes());
        for j in 0..n_cells {
            let left = a + j as f64 * h;
            let center = left + half;
            let right = if j + 1 == n_cells { b } else { a + (j + 1) as f64 * h };
            let last = reference.degree;
            for (l, xi) in reference.nodes.iter().enumerate() {
                // Pin endpoints so neighbouring cells share interface coordinates.
                nodes.push(match l {
                    0 => left,
                    l if l == last => right,
                    _ => center + half * xi,
                });
            }
        }
        let weights = reference.weights.iter().map(|w| half * w).collect();
        Ok(Self {
            a,
            b,
            n_cells,
            h,
            delta,
            reference,
            nodes,
            weights,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    pub fn degree(&self) -> usize {
        self.reference.degree
    }
    pub fn n_nodes(&self) -> usize {
        self.reference.n_nodes()
    }
    /// Cell width.
    pub fn h(&self) -> f64 {
        self.h
    }
    /// Minimal distance between two nodes of a cell.
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn reference(&self) -> &GaussLobatto {
        &self.reference
    }
    /// Node coordinates, cell-major.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn cell_nodes(&self, cell: usize) -> &[f64] {
        let np = self.n_nodes();
        &self.nodes[cell * np..(cell + 1) * np]
    }
    /// Physical quadrature weights of one cell.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn cell_center(&self, cell: usize) -> f64 {
        self.a + (cell as f64 + 0.5) * self.h
    }

    /// Time step `β δ / λ` for CFL number `β`.
    pub fn cfl_dt(&self, beta: f64, lambda: f64) -> f64 {
        beta * self.delta / lambda
    }

    /// Cell containing `x`; points on an interface are attributed to the
    /// cell on the side of `toward`.
    pub fn locate(&self, x: f64, toward: f64) -> usize {
        let s = (x - self.a) / self.h;
        let mut j = s.floor();
        if s == j && toward < x && j > 0.0 {
            j -= 1.0;
        }
        (j.max(0.0) as usize).min(self.n_cells - 1)
    }

    /// Evaluates component `comp` of `f` at `x` by polynomial interpolation
    /// inside the located cell.
    pub fn evaluate<S: Scalar>(&self, f: &KineticField<S>, comp: usize, x: f64, toward: f64) -> S {
        let cell = self.locate(x, toward);
        let xi = ((x - self.cell_center(cell)) / (0.5 * self.h)).clamp(-1.0, 1.0);
        let mut basis = [0.0; super::quadrature::MAX_DEGREE + 1];
        let np = self.n_nodes();
        self.reference.basis_at(xi, &mut basis[..np]);
        f.cell(comp, cell)
            .iter()
            .zip(&basis[..np])
            .map(|(v, b)| v.scale(*b))
            .sum()
    }

    /// Discrete `L²` norm over all cells, nodes and components.
    pub fn l2_norm<S: Scalar>(&self, f: &KineticField<S>) -> f64 {
        let np = self.n_nodes();
        f.as_slice()
            .chunks(np)
            .map(|cell| {
                cell.iter()
                    .zip(&self.weights)
                    .map(|(v, w)| w * v.modulus_sqr())
                    .sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Quadrature integral of each component.
    pub fn integrate<S: Scalar>(&self, f: &KineticField<S>) -> Vec<S> {
        let np = self.n_nodes();
        (0..f.n_components())
            .map(|i| {
                f.component(i)
                    .chunks(np)
                    .flat_map(|cell| cell.iter().zip(&self.weights).map(|(v, w)| v.scale(*w)))
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn geometry() {
        let mesh = DgMesh::new(-2.0, 2.0, 10, 3).unwrap();
        assert_relative_eq!(mesh.h(), 0.4);
        for j in 0..9 {
            assert_eq!(mesh.cell_nodes(j)[3], mesh.cell_nodes(j + 1)[0]);
            assert!(mesh.cell_nodes(j).windows(2).all(|p| p[1] > p[0]));
        }
        assert_eq!(mesh.nodes()[0], -2.0);
        assert_eq!(*mesh.nodes().last().unwrap(), 2.0);
        let wsum: f64 = mesh.weights().iter().sum();
        assert_relative_eq!(wsum, 0.4, max_relative = 1e-14);
        let gap = mesh.cell_nodes(4)[1] - mesh.cell_nodes(4)[0];
        assert_relative_eq!(mesh.delta(), gap, max_relative = 1e-12);
    }

    #[test]
    fn cfl_time_step() {
        // delta = 0.02 -> dt = 5 * 0.02 / 2
        let mesh = DgMesh::new(0.0, 0.04, 1, 1).unwrap();
        assert_relative_eq!(mesh.delta(), 0.04);
        let mesh = DgMesh::new(0.0, 0.02, 1, 1).unwrap();
        assert_relative_eq!(mesh.cfl_dt(5.0, 2.0), 0.05, max_relative = 1e-15);
        assert_eq!(mesh.cfl_dt(0.0, 2.0), 0.0);
        let coarse = DgMesh::new(-1.0, 1.0, 20, 5).unwrap();
        let fine = DgMesh::new(-1.0, 1.0, 40, 5).unwrap();
        assert_relative_eq!(fine.cfl_dt(5.0, 2.0), 0.5 * coarse.cfl_dt(5.0, 2.0), max_relative = 1e-14);
    }

    #[test]
    fn locate_interfaces() {
        let mesh = DgMesh::new(0.0, 1.0, 4, 2).unwrap();
        assert_eq!(mesh.locate(0.25, 0.0), 0);
        assert_eq!(mesh.locate(0.25, 1.0), 1);
        assert_eq!(mesh.locate(0.0, 0.5), 0);
        assert_eq!(mesh.locate(1.0, 0.5), 3);
        assert_eq!(mesh.locate(0.6, 0.6), 2);
    }

    #[test]
    fn invalid_meshes() {
        assert!(DgMesh::new(1.0, 0.0, 4, 2).is_err());
        assert!(DgMesh::new(0.0, 1.0, 0, 2).is_err());
        assert_eq!(DgMesh::new(0.0, 1.0, 4, 9), Err(Error::UnsupportedDegree(9)));
    }
}
