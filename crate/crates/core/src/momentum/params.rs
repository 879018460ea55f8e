use std::fmt;

/// Physical and regularisation coefficients of the approximate system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub nu1: f64,
    pub nu2: f64,
    pub r: f64,
    pub r0: f64,
    pub eps: f64,
    pub mu: f64,
    pub eta: f64,
    pub kappa: f64,
    pub delta: f64,
    pub density_floor: f64,
}

/// Serialisation order of [`Params`]; also the snapshot header order.
pub const PARAM_NAMES: [&str; 10] = [
    "nu1",
    "nu2",
    "r",
    "r0",
    "eps",
    "mu",
    "eta",
    "kappa",
    "delta",
    "density_floor",
];

impl Default for Params {
    fn default() -> Self {
        Params {
            nu1: 0.1,
            nu2: 0.1,
            r: 1.0,
            r0: 1e-2,
            eps: 1e-2,
            mu: 1e-2,
            eta: 1e-3,
            kappa: 1e-4,
            delta: 1e-4,
            density_floor: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamError {
    pub key: &'static str,
    pub reason: &'static str,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.reason)
    }
}

impl Params {
    pub fn to_array(&self) -> [f64; 10] {
        [
            self.nu1,
            self.nu2,
            self.r,
            self.r0,
            self.eps,
            self.mu,
            self.eta,
            self.kappa,
            self.delta,
            self.density_floor,
        ]
    }

    pub fn from_array(a: [f64; 10]) -> Self {
        Params {
            nu1: a[0],
            nu2: a[1],
            r: a[2],
            r0: a[3],
            eps: a[4],
            mu: a[5],
            eta: a[6],
            kappa: a[7],
            delta: a[8],
            density_floor: a[9],
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        PARAM_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.to_array()[i])
    }

    pub fn set(&mut self, name: &str, value: f64) -> bool {
        match PARAM_NAMES.iter().position(|n| *n == name) {
            Some(i) => {
                let mut a = self.to_array();
                a[i] = value;
                *self = Params::from_array(a);
                true
            }
            None => false,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (key, v) in PARAM_NAMES.iter().zip(self.to_array()) {
            if !v.is_finite() {
                return Err(ParamError { key, reason: "must be finite" });
            }
            if v < 0.0 {
                return Err(ParamError { key, reason: "must be nonnegative" });
            }
        }
        if self.nu1 <= 0.0 {
            return Err(ParamError { key: "nu1", reason: "must be positive" });
        }
        if self.nu2 <= 0.0 {
            return Err(ParamError { key: "nu2", reason: "must be positive" });
        }
        if self.density_floor <= 0.0 {
            return Err(ParamError { key: "density_floor", reason: "must be positive" });
        }
        Ok(())
    }
}
