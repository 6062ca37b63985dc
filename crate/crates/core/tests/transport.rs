use nalgebra::{DMatrix, DVector};
use palindg::dg::{BoundaryCondition, DgMesh, Direction, KineticField, Transport};
use palindg::flux::{Isothermal, LinearAdvection};
use palindg::lattice::{reverse_velocities, LatticeModel};
use palindg::scalar::{Complex64, Scalar};
use proptest::prelude::*;

fn field_from<S: Scalar>(mesh: &DgMesh, m: usize, values: &[f64]) -> KineticField<S> {
    let n = mesh.n_cells() * mesh.n_nodes() * 2 * m;
    let data = (0..n).map(|i| S::from_real(values[i % values.len()])).collect();
    KineticField::from_vec(mesh.n_cells(), mesh.n_nodes(), 2 * m, data).unwrap()
}

/// Dense matrix of the linear part of `L_h` in direction `dir`, and its
/// affine (boundary) part.
fn assemble(tr: &Transport<Complex64>, shape: &KineticField<Complex64>, dir: Direction) -> (DMatrix<Complex64>, Vec<Complex64>) {
    let n = shape.as_slice().len();
    let zero = KineticField::zeros(shape.n_cells(), shape.n_nodes(), shape.n_components());
    let affine = tr.apply_directed(&zero, dir).unwrap().as_slice().to_vec();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = zero.clone();
        e.as_mut_slice()[j] = Complex64::new(1.0, 0.0);
        let col = tr.apply_directed(&e, dir).unwrap();
        for i in 0..n {
            l[(i, j)] = col.as_slice()[i] - affine[i];
        }
    }
    (l, affine)
}

/// `(Id + dt L)^{-1}` applied to the affine problem, by dense LU.
fn dense_t1(l: &DMatrix<Complex64>, affine: &[Complex64], f: &[Complex64], dt: Complex64) -> DVector<Complex64> {
    let n = f.len();
    let a = DMatrix::identity(n, n) + l * dt;
    let rhs = DVector::from_iterator(n, f.iter().zip(affine).map(|(v, b)| v - dt * b));
    a.lu().solve(&rhs).unwrap()
}

fn max_rel(a: &[Complex64], b: &DVector<Complex64>) -> f64 {
    let scale = b.iter().fold(1.0_f64, |m, v| m.max(v.norm()));
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn isothermal() -> LatticeModel<Isothermal> {
    LatticeModel::new(Isothermal::new(0.7).unwrap(), 2.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sweep_matches_dense_solve(
        n_cells in 1usize..=16,
        degree in 1usize..=3,
        values in proptest::collection::vec(-1.0f64..1.0, 7..40),
        dt_re in 0.0f64..5.0,
        dt_im in -2.0f64..2.0,
        reversed in any::<bool>(),
    ) {
        let mesh = DgMesh::new(-0.5, 1.0, n_cells, degree).unwrap();
        let bc = BoundaryCondition { left: vec![1.2, 0.3], right: vec![0.8, -0.2] };
        let mut tr = Transport::<Complex64>::new(&mesh, &isothermal(), &bc).unwrap();
        let f = field_from::<Complex64>(&mesh, 2, &values);
        let dir = if reversed { Direction::Reversed } else { Direction::Forward };
        let (l, affine) = assemble(&tr, &f, dir);
        let dt = Complex64::new(dt_re, dt_im);
        let expected = dense_t1(&l, &affine, f.as_slice(), dt);
        let mut g = f.clone();
        tr.solve(&mut g, dt, dir, palindg::dg::TransportOrder::First).unwrap();
        prop_assert!(max_rel(g.as_slice(), &expected) <= 1e-12);
    }

    /// `T_2 f = 2 T_1(dt/2) f - f` against `(Id - dt/2 L) T_1(dt/2) f`.
    #[test]
    fn cayley_two_paths_agree(
        n_cells in 1usize..=10,
        degree in 1usize..=3,
        values in proptest::collection::vec(-1.0f64..1.0, 5..30),
        dt in 0.0f64..3.0,
    ) {
        let mesh = DgMesh::new(0.0, 1.0, n_cells, degree).unwrap();
        let bc = BoundaryCondition { left: vec![1.0, 0.1], right: vec![1.1, 0.0] };
        let mut tr = Transport::<Complex64>::new(&mesh, &isothermal(), &bc).unwrap();
        let f = field_from::<Complex64>(&mesh, 2, &values);
        let (l, affine) = assemble(&tr, &f, Direction::Forward);
        let h = Complex64::new(dt / 2.0, 0.0);
        let g = dense_t1(&l, &affine, f.as_slice(), h);
        let af = DVector::from_column_slice(&affine);
        let expected = &g - (&l * &g + af) * h;
        let mut t2 = f.clone();
        tr.solve_t2(&mut t2, Complex64::new(dt, 0.0)).unwrap();
        prop_assert!(max_rel(t2.as_slice(), &expected) <= 1e-12);
    }

    /// Zero inflow: both implicit maps contract the discrete norm, far past
    /// the explicit CFL limit.
    #[test]
    fn implicit_transport_is_contractive(
        n_cells in 2usize..=20,
        degree in 1usize..=5,
        values in proptest::collection::vec(-1.0f64..1.0, 5..50),
        cfl in 0.01f64..100.0,
    ) {
        let mesh = DgMesh::new(-1.0, 1.0, n_cells, degree).unwrap();
        let model = LatticeModel::new(LinearAdvection { a: 0.4 }, 1.0).unwrap();
        let bc = BoundaryCondition { left: vec![0.0], right: vec![0.0] };
        let mut tr = Transport::<f64>::new(&mesh, &model, &bc).unwrap();
        let f = field_from::<f64>(&mesh, 1, &values);
        let dt = mesh.cfl_dt(cfl, 1.0);
        let n0 = mesh.l2_norm(&f);
        let mut g = f.clone();
        tr.solve_t1(&mut g, dt).unwrap();
        prop_assert!(mesh.l2_norm(&g) <= n0 * (1.0 + 1e-13));
        let mut g = f.clone();
        tr.solve_t2(&mut g, dt).unwrap();
        prop_assert!(mesh.l2_norm(&g) <= n0 * (1.0 + 1e-13));
    }
}

#[test]
fn boundary_equilibrium_is_a_fixed_point() {
    let mesh = DgMesh::new(-1.0, 2.0, 7, 4).unwrap();
    let model = isothermal();
    let w = [1.4, -0.35];
    let bc = BoundaryCondition { left: w.to_vec(), right: w.to_vec() };
    let feq = model.maxwellian(&w).unwrap();
    let mut f = KineticField::zeros(7, 5, 4);
    for p in 0..f.n_points() {
        f.scatter(p, &feq);
    }
    let mut tr = Transport::<f64>::new(&mesh, &model, &bc).unwrap();
    for dt in [0.01, 0.7, 30.0, -0.4] {
        let mut g = f.clone();
        tr.transport_signed(&mut g, dt).unwrap();
        assert!(g.max_abs_diff(&f) <= 1e-14, "dt {dt}");
        if dt > 0.0 {
            let mut g = f.clone();
            tr.solve_t1(&mut g, dt).unwrap();
            assert!(g.max_abs_diff(&f) <= 1e-14);
        }
    }
}

/// A negative step is the positive step of the velocity-mirrored problem:
/// `R` swaps the pair, and the flux `a w` becomes `-a w`.
#[test]
fn negative_step_is_the_mirrored_forward_step() {
    let mesh = DgMesh::new(-1.0, 1.0, 9, 3).unwrap();
    let bc = BoundaryCondition { left: vec![0.7], right: vec![1.3] };
    let model = LatticeModel::new(LinearAdvection { a: 0.3 }, 1.0).unwrap();
    let mirrored = LatticeModel::new(LinearAdvection { a: -0.3 }, 1.0).unwrap();
    let values: Vec<f64> = (0..11).map(|i| (i as f64 * 1.3).cos()).collect();
    let f = field_from::<f64>(&mesh, 1, &values);

    let mut back = f.clone();
    Transport::<f64>::new(&mesh, &model, &bc).unwrap().transport_signed(&mut back, -0.25).unwrap();
    let mut fwd = reverse_velocities(&f);
    Transport::<f64>::new(&mesh, &mirrored, &bc).unwrap().solve_t2(&mut fwd, 0.25).unwrap();
    assert!(back.max_abs_diff(&reverse_velocities(&fwd)) <= 1e-15);
}

/// Mirroring space and velocities together maps the forward problem to
/// itself with the boundary states exchanged. Momentum is odd, so its pair
/// also changes sign.
#[test]
fn spatial_mirror_symmetry() {
    let n_cells = 8;
    let mesh = DgMesh::new(-1.0, 1.0, n_cells, 4).unwrap();
    let np = mesh.n_nodes();
    let model = isothermal();
    let (wl, wr) = ([1.2, 0.25], [0.9, -0.1]);
    let flip = |w: [f64; 2]| vec![w[0], -w[1]];
    let bc = BoundaryCondition { left: wl.to_vec(), right: wr.to_vec() };
    let bc_m = BoundaryCondition { left: flip(wr), right: flip(wl) };
    let values: Vec<f64> = (0..13).map(|i| 0.5 + 0.3 * (i as f64 * 0.9).sin()).collect();
    let f = field_from::<f64>(&mesh, 2, &values);
    let mirror = |f: &KineticField<f64>| {
        let mut g = f.clone();
        for comp in 0..4 {
            for cell in 0..n_cells {
                for node in 0..np {
                    let sign = if comp < 2 { 1.0 } else { -1.0 };
                    g.set(comp ^ 1, n_cells - 1 - cell, np - 1 - node, sign * f.get(comp, cell, node));
                }
            }
        }
        g
    };
    let mut a = f.clone();
    Transport::<f64>::new(&mesh, &model, &bc).unwrap().solve_t2(&mut a, 0.3).unwrap();
    let mut b = mirror(&f);
    Transport::<f64>::new(&mesh, &model, &bc_m).unwrap().solve_t2(&mut b, 0.3).unwrap();
    assert!(mirror(&a).max_abs_diff(&b) <= 1e-14);
}

/// Nodal truncation error of `L_h` on a smooth field with matching inflow
/// decays like `h^d`.
#[test]
fn operator_consistency_order() {
    let g = |x: f64| 0.5 + 0.1 * (std::f64::consts::PI * x).sin().powi(2);
    let dg = |x: f64| 0.1 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).sin();
    let model = LatticeModel::new(LinearAdvection { a: 0.0 }, 1.0).unwrap();
    let bc = BoundaryCondition { left: vec![1.0], right: vec![1.0] };
    for degree in 1..=4 {
        let errors: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let mesh = DgMesh::new(-1.0, 1.0, n, degree).unwrap();
                let tr = Transport::<f64>::new(&mesh, &model, &bc).unwrap();
                let mut f = KineticField::zeros(n, degree + 1, 2);
                for (p, &x) in mesh.nodes().iter().enumerate() {
                    f.scatter(p, &[g(x), g(x)]);
                }
                let lf = tr.apply(&f).unwrap();
                let mut err: f64 = 0.0;
                let mut node = [0.0; 2];
                for (p, &x) in mesh.nodes().iter().enumerate() {
                    lf.gather(p, &mut node);
                    err = err.max((node[0] + dg(x)).abs()).max((node[1] - dg(x)).abs());
                }
                err
            })
            .collect();
        for pair in errors.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= degree as f64 - 0.3, "degree {degree}: {errors:?}");
        }
    }
}

#[test]
fn complex_path_reproduces_real_path_bitwise() {
    let mesh = DgMesh::new(-1.0, 1.0, 6, 5).unwrap();
    let model = isothermal();
    let bc = BoundaryCondition { left: vec![1.2, 0.1], right: vec![0.9, 0.0] };
    let values: Vec<f64> = (0..17).map(|i| (i as f64).sqrt().sin()).collect();
    let f = field_from::<f64>(&mesh, 2, &values);
    let mut real = f.clone();
    Transport::<f64>::new(&mesh, &model, &bc).unwrap().transport_signed(&mut real, -0.37).unwrap();
    let mut cplx = f.to_complex();
    Transport::<Complex64>::new(&mesh, &model, &bc)
        .unwrap()
        .transport_signed(&mut cplx, Complex64::new(-0.37, 0.0))
        .unwrap();
    assert!(cplx.as_slice().iter().all(|v| v.im == 0.0));
    assert_eq!(cplx.real_part(), real);
}
