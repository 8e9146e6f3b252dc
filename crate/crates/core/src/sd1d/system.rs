use std::fmt;

/// A 1D conservation law ∂ₜu + ∂ₓF(u) = 0 with Q components.
pub trait HyperbolicSystem: Send + Sync + fmt::Debug {
    fn n_vars(&self) -> usize;

    fn flux(&self, u: &[f64], out: &mut [f64]);

    /// Upper bound of |λ| over the eigenvalues of ∂F/∂u.
    fn max_speed(&self, u: &[f64]) -> f64;

    /// Quantity subject to the discrete maximum principle.
    fn density(&self, u: &[f64]) -> f64 {
        u[0]
    }

    /// Physical admissibility (finite, and positive where required).
    fn is_admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite())
    }

    /// Column names of [`HyperbolicSystem::primitives`].
    fn primitive_names(&self) -> &'static [&'static str];

    fn primitives(&self, u: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAdvection {
    pub speed: f64,
}

impl HyperbolicSystem for LinearAdvection {
    fn n_vars(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        out[0] = self.speed * u[0];
    }

    fn max_speed(&self, _u: &[f64]) -> f64 {
        self.speed.abs()
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["u"]
    }

    fn primitives(&self, u: &[f64]) -> Vec<f64> {
        vec![u[0]]
    }
}

/// Ideal-gas Euler equations in conserved variables (ρ, ρv, E).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub gamma: f64,
}

impl Default for Euler {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

impl Euler {
    pub fn pressure(&self, u: &[f64]) -> f64 {
        (self.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0])
    }

    pub fn conserved(&self, rho: f64, v: f64, p: f64) -> [f64; 3] {
        [rho, rho * v, p / (self.gamma - 1.0) + 0.5 * rho * v * v]
    }

    pub fn sound_speed(&self, rho: f64, p: f64) -> f64 {
        (self.gamma * p / rho).max(0.0).sqrt()
    }
}

impl HyperbolicSystem for Euler {
    fn n_vars(&self) -> usize {
        3
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        let v = u[1] / u[0];
        let p = self.pressure(u);
        out[0] = u[1];
        out[1] = u[1] * v + p;
        out[2] = (u[2] + p) * v;
    }

    fn max_speed(&self, u: &[f64]) -> f64 {
        let v = u[1] / u[0];
        v.abs() + self.sound_speed(u[0], self.pressure(u))
    }

    fn is_admissible(&self, u: &[f64]) -> bool {
        u.iter().all(|v| v.is_finite()) && u[0] > 0.0 && self.pressure(u) > 0.0
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["rho", "v", "p"]
    }

    fn primitives(&self, u: &[f64]) -> Vec<f64> {
        vec![u[0], u[1] / u[0], self.pressure(u)]
    }
}
