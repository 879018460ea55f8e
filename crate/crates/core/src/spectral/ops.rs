use super::{Basis, DiffOp, Field2, Field3, Spec2, Spec3};

/// Vector-calculus shorthands built from the single-operator transforms.
/// None of these dealias; callers project where a Galerkin product is meant.
impl Basis {
    pub fn grad2(&self, f: &Field2) -> [Field2; 2] {
        let c = self.forward2(f);
        [
            self.inverse2(&self.apply2(&c, DiffOp::Dx1).expect("horizontal op")),
            self.inverse2(&self.apply2(&c, DiffOp::Dx2).expect("horizontal op")),
        ]
    }

    pub fn grad3(&self, f: &Field3) -> [Field3; 2] {
        let c = self.forward3(f);
        [
            self.inverse3(&self.apply3(&c, DiffOp::Dx1).expect("parity checked")),
            self.inverse3(&self.apply3(&c, DiffOp::Dx2).expect("parity checked")),
        ]
    }

    /// Spectral coefficients of `∂1 a + ∂2 b` for fields of equal parity.
    pub fn div3_spec(&self, a: &Field3, b: &Field3) -> Spec3 {
        let mut out = self.apply3(&self.forward3(a), DiffOp::Dx1).expect("parity checked");
        let d2 = self.apply3(&self.forward3(b), DiffOp::Dx2).expect("parity checked");
        out.axpy(1.0, &d2);
        out
    }

    pub fn div3(&self, a: &Field3, b: &Field3) -> Field3 {
        self.inverse3(&self.div3_spec(a, b))
    }

    pub fn div2_spec(&self, a: &Field2, b: &Field2) -> Spec2 {
        let mut out = self.apply2(&self.forward2(a), DiffOp::Dx1).expect("horizontal op");
        let d2 = self.apply2(&self.forward2(b), DiffOp::Dx2).expect("horizontal op");
        out.axpy(1.0, &d2);
        out
    }

    pub fn div2(&self, a: &Field2, b: &Field2) -> Field2 {
        self.inverse2(&self.div2_spec(a, b))
    }

    pub fn dz(&self, f: &Field3) -> Field3 {
        self.inverse3(&self.apply3(&self.forward3(f), DiffOp::Dz).expect("parity checked"))
    }

    pub fn op2(&self, f: &Field2, op: DiffOp) -> Field2 {
        self.inverse2(&self.apply2(&self.forward2(f), op).expect("horizontal op"))
    }

    pub fn op3(&self, f: &Field3, op: DiffOp) -> Field3 {
        self.inverse3(&self.apply3(&self.forward3(f), op).expect("parity checked"))
    }
}

impl Basis {
    /// Horizontal `∂1 a + ∂2 b` level by level; works for any parity.
    pub fn div_levels(&self, a: &Field3, b: &Field3) -> Field3 {
        let n2 = self.n2();
        let mut out = Field3::zeros(a.len(), a.parity);
        for j in 0..self.nz() {
            let la = Field2 { data: a.level(j, n2).to_vec() };
            let lb = Field2 { data: b.level(j, n2).to_vec() };
            out.data[j * n2..(j + 1) * n2].copy_from_slice(&self.div2(&la, &lb).data);
        }
        out
    }
}

impl Basis {
    /// Samples `f(x1, x2)` on the horizontal grid.
    pub fn sample2(&self, f: impl Fn(f64, f64) -> f64) -> Field2 {
        let (x1, x2) = (self.x1_grid(), self.x2_grid());
        let mut data = Vec::with_capacity(self.n2());
        for &y in &x2 {
            for &x in &x1 {
                data.push(f(x, y));
            }
        }
        Field2 { data }
    }

    /// Samples `f(x1, x2, z)` on the full grid as a cosine field.
    pub fn sample3(&self, f: impl Fn(f64, f64, f64) -> f64) -> Field3 {
        let (x1, x2) = (self.x1_grid(), self.x2_grid());
        let mut out = Field3::zeros(self.n3(), super::Parity::Even);
        let mut q = 0;
        for &z in self.z_grid() {
            for &y in &x2 {
                for &x in &x1 {
                    out.data[q] = f(x, y, z);
                    q += 1;
                }
            }
        }
        out
    }
}
