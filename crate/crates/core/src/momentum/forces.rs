use crate::error::{check_density, Result};
use crate::hydrostatic::{cumulative_fluctuation, vertical_average_vec, vertical_flux};
use crate::spectral::{Basis, DiffOp, Field2, Field3, Parity, Spec2, Spec3, VectorField3};

use super::params::Params;
use super::quantum::divergence_form_spec;

pub const FORCE_NAMES: [&str; 12] = [
    "convection_x",
    "convection_z",
    "pressure",
    "drag_r0",
    "damping_r",
    "hyperviscosity_mu",
    "horizontal_viscosity",
    "vertical_viscosity",
    "eps_commutator",
    "cold_pressure_eta",
    "quantum_kappa",
    "highorder_delta",
];

/// Every term of the momentum right-hand side, each projected onto the
/// dealiased band. Order follows [`FORCE_NAMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForceBreakdown {
    pub terms: Vec<VectorField3>,
}

impl ForceBreakdown {
    pub fn get(&self, name: &str) -> Option<&VectorField3> {
        FORCE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| &self.terms[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &VectorField3)> {
        FORCE_NAMES.iter().copied().zip(self.terms.iter())
    }

    pub fn total(&self) -> VectorField3 {
        let mut out = self.terms[0].clone();
        for t in &self.terms[1..] {
            out[0].axpy(1.0, &t[0]);
            out[1].axpy(1.0, &t[1]);
        }
        out
    }
}

pub(crate) type TermSpec = [Spec3; 2];

fn lift2(basis: &Basis, c: &Spec2) -> Spec3 {
    let mut out = Spec3::zeros(basis.n3(), Parity::Even);
    out.data[..c.data.len()].copy_from_slice(&c.data);
    out
}

fn d(basis: &Basis, c: &Spec3, op: DiffOp) -> Spec3 {
    basis.apply3(c, op).expect("parity checked")
}

fn d2(basis: &Basis, c: &Spec2, op: DiffOp) -> Spec2 {
    basis.apply2(c, op).expect("horizontal op")
}

fn sum(mut a: Spec3, b: &Spec3, s: f64) -> Spec3 {
    a.axpy(s, b);
    a
}

/// Spectral coefficients of every force term, in [`FORCE_NAMES`] order.
pub(crate) fn force_terms_spec(
    basis: &Basis,
    xi: &Field2,
    u: &VectorField3,
    p: &Params,
) -> Result<Vec<TermSpec>> {
    check_density(xi.min(), p.density_floor)?;
    let n3 = basis.n3();
    let zero = || [Spec3::zeros(n3, Parity::Even), Spec3::zeros(n3, Parity::Even)];
    let uh = [basis.forward3(&u[0]), basis.forward3(&u[1])];
    // g[i][j] = ∂_j u_i
    let g = [
        [
            basis.inverse3(&d(basis, &uh[0], DiffOp::Dx1)),
            basis.inverse3(&d(basis, &uh[0], DiffOp::Dx2)),
        ],
        [
            basis.inverse3(&d(basis, &uh[1], DiffOp::Dx1)),
            basis.inverse3(&d(basis, &uh[1], DiffOp::Dx2)),
        ],
    ];
    let xih = basis.forward2(xi);
    let mut terms: Vec<TermSpec> = Vec::with_capacity(12);

    // −div(ξ u ⊗ u)
    let xu = [u[0].mul2(xi), u[1].mul2(xi)];
    let p11 = basis.forward3(&xu[0].mul(&u[0]));
    let p12 = basis.forward3(&xu[0].mul(&u[1]));
    let p22 = basis.forward3(&xu[1].mul(&u[1]));
    terms.push([
        sum(d(basis, &p11, DiffOp::Dx1), &d(basis, &p12, DiffOp::Dx2), 1.0).scale(-1.0),
        sum(d(basis, &p12, DiffOp::Dx1), &d(basis, &p22, DiffOp::Dx2), 1.0).scale(-1.0),
    ]);

    // −∂z(ξ u w)
    let xw = vertical_flux(basis, xi, u)?;
    terms.push([0, 1].map(|i| d(basis, &basis.forward3(&xw.mul(&u[i])), DiffOp::Dz).scale(-1.0)));

    // −∇ξ
    terms.push([
        lift2(basis, &d2(basis, &xih, DiffOp::Dx1).scale(-1.0)),
        lift2(basis, &d2(basis, &xih, DiffOp::Dx2).scale(-1.0)),
    ]);

    // −r₀ u
    terms.push(if p.r0 != 0.0 {
        [uh[0].scale(-p.r0), uh[1].scale(-p.r0)]
    } else {
        zero()
    });

    // −r ξ|u|u
    terms.push(if p.r != 0.0 {
        let speed = Field3 {
            data: u[0]
                .data
                .iter()
                .zip(&u[1].data)
                .map(|(a, b)| a.hypot(*b))
                .collect(),
            parity: Parity::Even,
        };
        let w = speed.mul2(xi);
        [0, 1].map(|i| basis.forward3(&w.mul(&u[i])).scale(-p.r))
    } else {
        zero()
    });

    // −μΔ²u
    terms.push(if p.mu != 0.0 {
        [0, 1].map(|i| d(basis, &uh[i], DiffOp::Bilaplace).scale(-p.mu))
    } else {
        zero()
    });

    // 2ν̄₁ div(ξ D(u))
    let t11 = g[0][0].mul2(xi);
    let t22 = g[1][1].mul2(xi);
    let mut t12 = g[0][1].add(&g[1][0]);
    t12.scale_in_place(0.5);
    let t12 = t12.mul2(xi);
    let (c11, c12, c22) = (
        basis.forward3(&t11),
        basis.forward3(&t12),
        basis.forward3(&t22),
    );
    let s = 2.0 * p.nu1;
    terms.push([
        sum(d(basis, &c11, DiffOp::Dx1), &d(basis, &c12, DiffOp::Dx2), 1.0).scale(s),
        sum(d(basis, &c12, DiffOp::Dx1), &d(basis, &c22, DiffOp::Dx2), 1.0).scale(s),
    ]);

    // ν̄₂ ξ ∂zz u
    terms.push([0, 1].map(|i| {
        let uzz = basis.inverse3(&d(basis, &d(basis, &uh[i], DiffOp::Dz), DiffOp::Dz));
        basis.forward3(&uzz.mul2(xi)).scale(p.nu2)
    }));

    // −ε (∇ξ·∇) u
    terms.push(if p.eps != 0.0 {
        let [x1, x2] = basis.grad2(xi);
        [0, 1].map(|i| {
            let mut f = g[i][0].mul2(&x1);
            f.axpy(1.0, &g[i][1].mul2(&x2));
            basis.forward3(&f).scale(-p.eps)
        })
    } else {
        zero()
    });

    // η ∇ξ^{−10}
    terms.push(if p.eta != 0.0 {
        let c = basis.forward2(&xi.map(|v| v.powi(-10)));
        [DiffOp::Dx1, DiffOp::Dx2].map(|op| lift2(basis, &d2(basis, &c, op).scale(p.eta)))
    } else {
        zero()
    });

    // (κ/2) div(ξ ∇² ln ξ)
    terms.push(if p.kappa != 0.0 {
        let [a, b] = divergence_form_spec(basis, xi);
        [
            lift2(basis, &a.scale(0.5 * p.kappa)),
            lift2(basis, &b.scale(0.5 * p.kappa)),
        ]
    } else {
        zero()
    });

    // δ ξ ∇Δ⁵ξ
    terms.push(if p.delta != 0.0 {
        let l5 = d2(basis, &xih, DiffOp::LaplaceX5);
        [DiffOp::Dx1, DiffOp::Dx2].map(|op| {
            let grad = basis.inverse2(&d2(basis, &l5, op));
            lift2(basis, &basis.forward2(&grad.mul(xi)).scale(p.delta))
        })
    } else {
        zero()
    });

    for t in terms.iter_mut() {
        basis.dealias3(&mut t[0]);
        basis.dealias3(&mut t[1]);
    }
    Ok(terms)
}

/// Sum of all force terms in coefficient space.
pub(crate) fn force_total_spec(
    basis: &Basis,
    xi: &Field2,
    u: &VectorField3,
    p: &Params,
) -> Result<TermSpec> {
    let terms = force_terms_spec(basis, xi, u, p)?;
    let mut it = terms.into_iter();
    let mut total = it.next().expect("twelve terms");
    for t in it {
        total[0].axpy(1.0, &t[0]);
        total[1].axpy(1.0, &t[1]);
    }
    Ok(total)
}

/// Every named term of the momentum right-hand side on the grid.
pub fn momentum_rhs(
    basis: &Basis,
    xi: &Field2,
    u: &VectorField3,
    p: &Params,
) -> Result<ForceBreakdown> {
    let terms = force_terms_spec(basis, xi, u, p)?
        .into_iter()
        .map(|[a, b]| [basis.inverse3(&a), basis.inverse3(&b)])
        .collect();
    Ok(ForceBreakdown { terms })
}

/// The vertical convection term through its expanded form
/// `−∂z(−div(ξũ⊗u) + ξũ·∇u + z div(ξū⊗u) − zξū·∇u)`; equal to the
/// `convection_z` term up to aliasing.
pub fn convection_z_expanded(basis: &Basis, xi: &Field2, u: &VectorField3) -> Result<VectorField3> {
    check_density(xi.min(), 0.0)?;
    let n2 = basis.n2();
    let ubar = vertical_average_vec(basis, u);
    // ũ = (ũ − zū) + zū on the grid
    let mut cum = [
        cumulative_fluctuation(basis, &u[0])?,
        cumulative_fluctuation(basis, &u[1])?,
    ];
    let mut zbar = [Field3::zeros(basis.n3(), Parity::Mixed), Field3::zeros(basis.n3(), Parity::Mixed)];
    for (j, &z) in basis.z_grid().iter().enumerate() {
        for k in 0..2 {
            for p in 0..n2 {
                let v = z * ubar[k].data[p];
                cum[k].data[j * n2 + p] += v;
                zbar[k].data[j * n2 + p] = v;
            }
        }
    }
    let out = [0, 1].map(|i| {
        let grad_ui = basis.grad3(&u[i]);
        let mut bracket = Field3::zeros(basis.n3(), Parity::Mixed);
        for (tilde, sign) in [(&cum, -1.0), (&zbar, 1.0)] {
            let a = tilde[0].mul2(xi).mul(&u[i]);
            let b = tilde[1].mul2(xi).mul(&u[i]);
            bracket.axpy(sign, &basis.div_levels(&a, &b));
            let mut adv = tilde[0].mul(&grad_ui[0]);
            adv.axpy(1.0, &tilde[1].mul(&grad_ui[1]));
            bracket.axpy(-sign, &adv.mul2(xi));
        }
        // the bracket equals ξuw, which vanishes at both ends of the column
        bracket.parity = Parity::Odd;
        let mut c = basis.apply3(&basis.forward3(&bracket), DiffOp::Dz).expect("odd field");
        basis.dealias3(&mut c);
        basis.inverse3(&c).scale(-1.0)
    });
    Ok(out)
}
