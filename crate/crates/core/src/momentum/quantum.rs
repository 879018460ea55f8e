use crate::error::{check_density, Result};
use crate::spectral::{Basis, DiffOp, Field2, Spec2};

/// Hessian of `ln ξ`, entries `[h11, h12, h22]`, from pointwise `ln ξ`.
pub fn log_hessian(basis: &Basis, xi: &Field2) -> [Field2; 3] {
    let c = basis.forward2(&xi.map(f64::ln));
    let d1 = basis.apply2(&c, DiffOp::Dx1).expect("horizontal op");
    let d2 = basis.apply2(&c, DiffOp::Dx2).expect("horizontal op");
    [
        basis.inverse2(&basis.apply2(&d1, DiffOp::Dx1).expect("horizontal op")),
        basis.inverse2(&basis.apply2(&d1, DiffOp::Dx2).expect("horizontal op")),
        basis.inverse2(&basis.apply2(&d2, DiffOp::Dx2).expect("horizontal op")),
    ]
}

/// Coefficients of `div(ξ ∇² ln ξ)`, not projected.
pub(crate) fn divergence_form_spec(basis: &Basis, xi: &Field2) -> [Spec2; 2] {
    let [h11, h12, h22] = log_hessian(basis, xi);
    let t11 = h11.mul(xi);
    let t12 = h12.mul(xi);
    let t22 = h22.mul(xi);
    [basis.div2_spec(&t11, &t12), basis.div2_spec(&t12, &t22)]
}

/// `(κ/2) div(ξ ∇² ln ξ)`, projected onto the dealiased band.
pub fn quantum_force(basis: &Basis, xi: &Field2, kappa: f64) -> Result<[Field2; 2]> {
    check_density(xi.min(), 0.0)?;
    let mut c = divergence_form_spec(basis, xi);
    Ok(c.each_mut().map(|s| {
        basis.dealias2(s);
        basis.inverse2(&s.scale(0.5 * kappa))
    }))
}

/// `κ ξ ∇(Δ√ξ / √ξ)` evaluated directly, without projection.
pub fn quantum_force_direct(basis: &Basis, xi: &Field2, kappa: f64) -> Result<[Field2; 2]> {
    check_density(xi.min(), 0.0)?;
    let root = xi.map(f64::sqrt);
    let lap = basis.op2(&root, DiffOp::LaplaceX);
    let bohm = Field2 {
        data: lap.data.iter().zip(&root.data).map(|(l, r)| l / r).collect(),
    };
    let [g1, g2] = basis.grad2(&bohm);
    Ok([g1.mul(xi).scale(kappa), g2.mul(xi).scale(kappa)])
}
