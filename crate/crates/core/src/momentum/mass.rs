use crate::error::{check_density, Result, SolverError};
use crate::spectral::{Basis, Field2, Field3, Spec3};

pub const DEFAULT_CG_MAX: usize = 500;

/// `P(ξu)`: pointwise weighting followed by band projection.
pub fn apply_mass_operator(basis: &Basis, xi: &Field2, u: &Field3) -> Result<Field3> {
    check_density(xi.min(), 0.0)?;
    Ok(basis.project3(&u.mul2(xi)))
}

/// Solves `P(ξu) = P f` for band-limited `u` to relative tolerance `tol`.
pub fn solve_mass_operator(
    basis: &Basis,
    xi: &Field2,
    f: &Field3,
    tol: f64,
    max_iter: usize,
) -> Result<Field3> {
    check_density(xi.min(), 0.0)?;
    let mut rhs = basis.to_spectral3(f)?;
    basis.dealias3(&mut rhs);
    let shift = vec![0.0; basis.n3()];
    let zero = Spec3::zeros(rhs.data.len(), rhs.parity);
    let ([c, _], _) = solve_coupled(basis, xi, &[rhs, zero], &shift, &[], None, tol, max_iter)?;
    Ok(basis.inverse3(&c))
}

/// Symmetric 2×2 block `[s11, s12, s22]` coupling the two velocity
/// components at one coefficient index.
pub(crate) type Coupling = (usize, [f64; 3]);

fn apply_block(
    basis: &Basis,
    xi: &Field2,
    shift: &[f64],
    coupling: &[Coupling],
    c: &[Spec3; 2],
) -> [Spec3; 2] {
    let mut out = [0, 1].map(|i| {
        let mut o = basis.forward3(&basis.inverse3(&c[i]).mul2(xi));
        basis.dealias3(&mut o);
        for ((o, v), s) in o.data.iter_mut().zip(&c[i].data).zip(shift) {
            *o += v * s;
        }
        o
    });
    for &(p, [s11, s12, s22]) in coupling {
        let (a, b) = (c[0].data[p], c[1].data[p]);
        out[0].data[p] += a * s11 + b * s12;
        out[1].data[p] += a * s12 + b * s22;
    }
    out
}

fn inner(basis: &Basis, a: &[Spec3; 2], b: &[Spec3; 2]) -> f64 {
    basis.spectral_inner3(&a[0], &b[0]) + basis.spectral_inner3(&a[1], &b[1])
}

/// Preconditioned conjugate gradients for
/// `(M[ξ] + diag(shift)) c_i + Σ_j S_ij c_j = rhs_i` on the dealiased band,
/// in the `L²(Ω)` inner product of the coefficients. The preconditioner
/// inverts the same system with `ξ` replaced by its mean. Returns the
/// solution and the iteration count.
pub(crate) fn solve_coupled(
    basis: &Basis,
    xi: &Field2,
    rhs: &[Spec3; 2],
    shift: &[f64],
    coupling: &[Coupling],
    guess: Option<&[Spec3; 2]>,
    tol: f64,
    max_iter: usize,
) -> Result<([Spec3; 2], usize)> {
    let parity = rhs[0].parity;
    let len = rhs[0].data.len();
    let bnorm = inner(basis, rhs, rhs).sqrt();
    if bnorm == 0.0 {
        return Ok(([Spec3::zeros(len, parity), Spec3::zeros(len, parity)], 0));
    }
    let mean = xi.mean();
    let diag: Vec<f64> = shift.iter().map(|s| 1.0 / (mean + s)).collect();
    let blocks: Vec<(usize, [f64; 3])> = coupling
        .iter()
        .map(|&(p, [s11, s12, s22])| {
            let a = mean + shift[p];
            let (d11, d22) = (a + s11, a + s22);
            let det = d11 * d22 - s12 * s12;
            (p, [d22 / det, -s12 / det, d11 / det])
        })
        .collect();
    let precondition = |r: &[Spec3; 2]| {
        let mut z = [0, 1].map(|i| Spec3 {
            data: r[i].data.iter().zip(&diag).map(|(v, d)| v * d).collect(),
            parity,
        });
        for &(p, [i11, i12, i22]) in &blocks {
            let (a, b) = (r[0].data[p], r[1].data[p]);
            z[0].data[p] = a * i11 + b * i12;
            z[1].data[p] = a * i12 + b * i22;
        }
        z
    };
    let mut x = match guess {
        Some(g) => {
            let mut g = g.clone();
            basis.dealias3(&mut g[0]);
            basis.dealias3(&mut g[1]);
            g
        }
        None => [Spec3::zeros(len, parity), Spec3::zeros(len, parity)],
    };
    let ax = apply_block(basis, xi, shift, coupling, &x);
    let mut r = [rhs[0].sub(&ax[0]), rhs[1].sub(&ax[1])];
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = inner(basis, &r, &z);
    let mut rnorm = inner(basis, &r, &r).sqrt();
    for it in 0..=max_iter {
        if rnorm <= tol * bnorm {
            return Ok((x, it));
        }
        if it == max_iter || !rnorm.is_finite() {
            break;
        }
        let ap = apply_block(basis, xi, shift, coupling, &p);
        let pap = inner(basis, &p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..2 {
            x[i].axpy(alpha, &p[i]);
            r[i].axpy(-alpha, &ap[i]);
        }
        rnorm = inner(basis, &r, &r).sqrt();
        z = precondition(&r);
        let rz_new = inner(basis, &r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..2 {
            p[i] = Spec3 {
                data: z[i].data.iter().zip(&p[i].data).map(|(a, b)| a + b * beta).collect(),
                parity,
            };
        }
    }
    Err(SolverError::NoConvergence {
        iterations: max_iter,
        residual: rnorm / bnorm,
    })
}
