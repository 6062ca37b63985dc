//! Gauss-Lobatto nodes, weights and the nodal differentiation matrix on
//! the reference interval `[-1, 1]`.

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 8;

/// Reference Gauss-Lobatto rule of polynomial degree `d` (`d + 1` nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLobatto {
    pub degree: usize,
    /// Increasing, with `nodes[0] = -1` and `nodes[d] = 1`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Row-major `(d+1) x (d+1)`: `deriv[i * (d+1) + j] = l_j'(x_i)`.
    pub deriv: Vec<f64>,
    /// Barycentric interpolation weights.
    pub bary: Vec<f64>,
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
pub(crate) fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * cur - (k - 1) as f64 * prev) / k as f64;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

pub fn gauss_lobatto(degree: usize) -> Result<GaussLobatto> {
    if !(1..=MAX_DEGREE).contains(&degree) {
        return Err(Error::UnsupportedDegree(degree));
    }
    let n = degree;
    let np = n + 1;
    let nf = n as f64;

    // Newton iteration on (1 - x^2) P_n'(x) = 0 from Chebyshev-Gauss-Lobatto
    // starting points. Uses (x P_n - P_{n-1}) = (x^2 - 1) P_n' / n.
    let mut nodes: Vec<f64> = (0..np)
        .map(|i| -(std::f64::consts::PI * i as f64 / nf).cos())
        .collect();
    for x in nodes.iter_mut().take(n).skip(1) {
        for _ in 0..100 {
            let (p, pm) = legendre_pair(n, *x);
            let step = (*x * p - pm) / (np as f64 * p);
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    // Enforce exact antisymmetry.
    for i in 0..np / 2 {
        let s = 0.5 * (nodes[n - i] - nodes[i]);
        nodes[i] = -s;
        nodes[n - i] = s;
    }
    if np % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let pn: Vec<f64> = nodes.iter().map(|&x| legendre_pair(n, x).0).collect();
    let weights: Vec<f64> = pn.iter().map(|p| 2.0 / (nf * (nf + 1.0) * p * p)).collect();

    let mut deriv = vec![0.0; np * np];
    for i in 0..np {
        let mut diag = 0.0;
        for j in 0..np {
            if i != j {
                let d = pn[i] / (pn[j] * (nodes[i] - nodes[j]));
                deriv[i * np + j] = d;
                diag -= d;
            }
        }
        deriv[i * np + i] = diag;
    }

    let bary = (0..np)
        .map(|j| {
            1.0 / (0..np)
                .filter(|&k| k != j)
                .map(|k| nodes[j] - nodes[k])
                .product::<f64>()
        })
        .collect();

    Ok(GaussLobatto {
        degree,
        nodes,
        weights,
        deriv,
        bary,
    })
}

impl GaussLobatto {
    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.degree + 1
    }

    /// Smallest gap between consecutive reference nodes.
    pub fn min_gap(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Lagrange basis values at reference coordinate `xi`.
    pub fn basis_at(&self, xi: f64, out: &mut [f64]) {
        if let Some(j) = self.nodes.iter().position(|&x| x == xi) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[j] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for j in 0..self.n_nodes() {
            let t = self.bary[j] / (xi - self.nodes[j]);
            out[j] = t;
            denom += t;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }
}
