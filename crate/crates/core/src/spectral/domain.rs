use super::SpectralError;

/// Grid and geometry of the reduced domain `T² × (0, h)`.
///
/// The torus has side `2π` in both horizontal directions. The vertical grid
/// is uniform with both endpoints included, so `nz` is the number of levels
/// and `nz - 1` the number of cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub nx1: usize,
    pub nx2: usize,
    pub nz: usize,
    pub h: f64,
}

impl DomainSpec {
    pub fn new(nx1: usize, nx2: usize, nz: usize, h: f64) -> Result<Self, SpectralError> {
        let spec = DomainSpec { nx1, nx2, nz, h };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds the spec from the height `H` of the original (stratified) layer,
    /// using `h = 1 - exp(-H)`.
    pub fn from_original_height(
        nx1: usize,
        nx2: usize,
        nz: usize,
        height: f64,
    ) -> Result<Self, SpectralError> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(SpectralError::InvalidSpec(format!(
                "original height must be positive, got {height}"
            )));
        }
        Self::new(nx1, nx2, nz, -(-height).exp_m1())
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        for (name, n) in [("nx1", self.nx1), ("nx2", self.nx2)] {
            if n < 8 || n % 2 != 0 {
                return Err(SpectralError::InvalidSpec(format!(
                    "{name} must be even and >= 8, got {n}"
                )));
            }
        }
        if self.nz < 5 || self.nz % 2 == 0 {
            return Err(SpectralError::InvalidSpec(format!(
                "nz must be odd and >= 5, got {}",
                self.nz
            )));
        }
        if !(self.h > 0.0 && self.h < 1.0) {
            return Err(SpectralError::InvalidSpec(format!(
                "h must lie in (0, 1), got {}",
                self.h
            )));
        }
        Ok(())
    }

    /// Height `H` of the original layer, the inverse of `h = 1 - exp(-H)`.
    pub fn original_height(&self) -> f64 {
        -(-self.h).ln_1p()
    }

    /// Points per horizontal level.
    pub fn n2(&self) -> usize {
        self.nx1 * self.nx2
    }

    /// Points in the full three-dimensional grid.
    pub fn n3(&self) -> usize {
        self.nx1 * self.nx2 * self.nz
    }

    pub fn torus_area(&self) -> f64 {
        4.0 * std::f64::consts::PI * std::f64::consts::PI
    }

    pub fn volume(&self) -> f64 {
        self.torus_area() * self.h
    }

    /// Largest horizontal wavenumber kept by the dealiasing filter.
    pub fn max_band_wavenumber(&self) -> f64 {
        let k1 = (self.nx1 / 3) as f64;
        let k2 = (self.nx2 / 3) as f64;
        k1.max(k2)
    }

    /// Smallest horizontal grid spacing.
    pub fn min_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.nx1.max(self.nx2) as f64
    }
}
