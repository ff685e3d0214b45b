use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};

/// Representation label `(N, mu_x, mu_y)` of the `N + 1` dimensional module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscParams {
    pub n: usize,
    pub mu_x: f64,
    pub mu_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Check that a single mu lies in the irreducibility domain `(-1/2, inf)`.
pub fn check_mu(name: &str, mu: f64) -> Result<()> {
    if !mu.is_finite() || mu <= -0.5 {
        return Err(Sd2Error::InvalidParams(format!(
            "{name} = {mu} is outside (-1/2, inf)"
        )));
    }
    Ok(())
}

impl OscParams {
    pub fn new(n: usize, mu_x: f64, mu_y: f64) -> Result<Self> {
        check_mu("mu_x", mu_x)?;
        check_mu("mu_y", mu_y)?;
        Ok(Self { n, mu_x, mu_y })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.n, self.mu_x, self.mu_y).map(|_| ())
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..*self }
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn zeta(&self) -> f64 {
        self.mu_x + self.mu_y
    }

    pub fn xi(&self) -> f64 {
        self.mu_x - self.mu_y
    }

    /// Energy `E_N = N + mu_x + mu_y + 1`.
    pub fn energy(&self) -> f64 {
        self.n as f64 + self.zeta() + 1.0
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// Number of 2x2 sectors: `N/2` for even `N`, `(N-1)/2` for odd `N`.
    pub fn m(&self) -> usize {
        match self.parity() {
            Parity::Even => self.n / 2,
            Parity::Odd => (self.n - 1) / 2,
        }
    }

    pub fn is_isotropic(&self, tol: f64) -> bool {
        (self.mu_x - self.mu_y).abs() <= tol
    }
}
