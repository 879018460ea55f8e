use rustfft::num_complex::Complex64;

/// Vertical symmetry of a three-dimensional field.
///
/// `Even` fields expand in `cos(mπz/h)` (homogeneous Neumann data), `Odd`
/// fields in `sin(mπz/h)` (homogeneous Dirichlet data). `Mixed` marks grid
/// samples with no single vertical expansion, e.g. a column integral; they
/// can be sampled and integrated but not transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Parity after one vertical derivative.
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Mixed => Parity::Mixed,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Real samples on the horizontal grid, `x1` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2 {
    pub data: Vec<f64>,
}

/// Real samples on the `(x, z)` grid, `x1` fastest, then `x2`, then `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field3 {
    pub data: Vec<f64>,
    pub parity: Parity,
}

/// Horizontal Fourier coefficients in FFT order, normalised so that the
/// coefficient is the amplitude of `exp(i k·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spec2 {
    pub data: Vec<Complex64>,
}

/// Fourier–cosine (or Fourier–sine) coefficients, vertical mode slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Spec3 {
    pub data: Vec<Complex64>,
    pub parity: Parity,
}

/// Horizontal velocity, one `Field3` per component.
pub type VectorField3 = [Field3; 2];
pub type VectorField2 = [Field2; 2];

macro_rules! pointwise_ops {
    ($t:ty) => {
        impl $t {
            pub fn len(&self) -> usize {
                self.data.len()
            }

            pub fn is_empty(&self) -> bool {
                self.data.is_empty()
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }

            pub fn min(&self) -> f64 {
                self.data.iter().copied().fold(f64::INFINITY, f64::min)
            }

            pub fn max(&self) -> f64 {
                self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }

            pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
                let mut out = self.clone();
                out.data.iter_mut().for_each(|v| *v = f(*v));
                out
            }

            pub fn scale(&self, a: f64) -> Self {
                self.map(|v| a * v)
            }

            pub fn scale_in_place(&mut self, a: f64) {
                self.data.iter_mut().for_each(|v| *v *= a);
            }

            /// `self += a * other`.
            pub fn axpy(&mut self, a: f64, other: &Self) {
                debug_assert_eq!(self.data.len(), other.data.len());
                self.data
                    .iter_mut()
                    .zip(&other.data)
                    .for_each(|(s, o)| *s += a * o);
            }

            pub fn is_finite(&self) -> bool {
                self.data.iter().all(|v| v.is_finite())
            }
        }
    };
}

pointwise_ops!(Field2);
pointwise_ops!(Field3);

impl Field2 {
    pub fn zeros(n: usize) -> Self {
        Field2 { data: vec![0.0; n] }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Field2 {
            data: vec![value; n],
        }
    }

    pub fn mul(&self, other: &Field2) -> Field2 {
        Field2 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn sub(&self, other: &Field2) -> Field2 {
        Field2 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Field2) -> Field2 {
        Field2 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

impl Field3 {
    pub fn zeros(n: usize, parity: Parity) -> Self {
        Field3 {
            data: vec![0.0; n],
            parity,
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Field3 {
            data: vec![value; n],
            parity: Parity::Even,
        }
    }

    pub fn mul(&self, other: &Field3) -> Field3 {
        Field3 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
            parity: self.parity.product(other.parity),
        }
    }

    /// Multiplies every level by a horizontal (z-independent) field.
    pub fn mul2(&self, other: &Field2) -> Field3 {
        let n2 = other.data.len();
        let mut out = self.clone();
        for level in out.data.chunks_mut(n2) {
            level.iter_mut().zip(&other.data).for_each(|(a, b)| *a *= b);
        }
        out
    }

    /// Divides every level by a horizontal field.
    pub fn div2(&self, other: &Field2) -> Field3 {
        let n2 = other.data.len();
        let mut out = self.clone();
        for level in out.data.chunks_mut(n2) {
            level.iter_mut().zip(&other.data).for_each(|(a, b)| *a /= b);
        }
        out
    }

    pub fn add(&self, other: &Field3) -> Field3 {
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            Parity::Mixed
        };
        Field3 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            parity,
        }
    }

    pub fn sub(&self, other: &Field3) -> Field3 {
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            Parity::Mixed
        };
        Field3 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            parity,
        }
    }

    /// Repeats a horizontal field on every level.
    pub fn broadcast(f: &Field2, nz: usize) -> Field3 {
        let mut data = Vec::with_capacity(f.data.len() * nz);
        for _ in 0..nz {
            data.extend_from_slice(&f.data);
        }
        Field3 {
            data,
            parity: Parity::Even,
        }
    }

    pub fn level(&self, j: usize, n2: usize) -> &[f64] {
        &self.data[j * n2..(j + 1) * n2]
    }
}

impl Spec2 {
    pub fn zeros(n: usize) -> Self {
        Spec2 {
            data: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Spec2) {
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(s, o)| *s += o * a);
    }

    pub fn scale(&self, a: f64) -> Spec2 {
        Spec2 {
            data: self.data.iter().map(|c| c * a).collect(),
        }
    }
}

impl Spec3 {
    pub fn zeros(n: usize, parity: Parity) -> Self {
        Spec3 {
            data: vec![Complex64::new(0.0, 0.0); n],
            parity,
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Spec3) {
        debug_assert_eq!(self.parity, other.parity);
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(s, o)| *s += o * a);
    }

    pub fn scale(&self, a: f64) -> Spec3 {
        Spec3 {
            data: self.data.iter().map(|c| c * a).collect(),
            parity: self.parity,
        }
    }

    pub fn sub(&self, other: &Spec3) -> Spec3 {
        Spec3 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            parity: self.parity,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }
}
