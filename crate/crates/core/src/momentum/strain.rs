use crate::spectral::{Basis, Field3, VectorField3};

/// A 2×2 tensor field, `c[i][j]` on the `(x, z)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub c: [[Field3; 2]; 2],
}

impl Tensor3 {
    /// Pointwise `Σ_ij a_ij b_ij`.
    pub fn contract(&self, other: &Tensor3) -> Field3 {
        let mut out = self.c[0][0].mul(&other.c[0][0]);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            out.axpy(1.0, &self.c[i][j].mul(&other.c[i][j]));
        }
        out
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        let f = |i: usize, j: usize| self.c[i][j].add(&other.c[i][j]);
        Tensor3 {
            c: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]],
        }
    }
}

/// Horizontal velocity gradient, `g[i][j] = ∂_j u_i`.
pub fn velocity_gradient(basis: &Basis, u: &VectorField3) -> Tensor3 {
    let [a, b] = basis.grad3(&u[0]);
    let [c, d] = basis.grad3(&u[1]);
    Tensor3 { c: [[a, b], [c, d]] }
}

/// Symmetric and antisymmetric parts of a gradient.
pub fn split_gradient(g: &Tensor3) -> (Tensor3, Tensor3) {
    let half = |a: &Field3, b: &Field3, s: f64| {
        let mut out = a.scale(0.5);
        out.axpy(0.5 * s, b);
        out
    };
    let d = Tensor3 {
        c: [
            [g.c[0][0].clone(), half(&g.c[0][1], &g.c[1][0], 1.0)],
            [half(&g.c[1][0], &g.c[0][1], 1.0), g.c[1][1].clone()],
        ],
    };
    let zero = g.c[0][0].scale(0.0);
    let a = Tensor3 {
        c: [
            [zero.clone(), half(&g.c[0][1], &g.c[1][0], -1.0)],
            [half(&g.c[1][0], &g.c[0][1], -1.0), zero],
        ],
    };
    (d, a)
}

/// `D(u) = (∇u + ∇uᵀ)/2` and `A(u) = (∇u − ∇uᵀ)/2`.
pub fn strain(basis: &Basis, u: &VectorField3) -> (Tensor3, Tensor3) {
    split_gradient(&velocity_gradient(basis, u))
}
