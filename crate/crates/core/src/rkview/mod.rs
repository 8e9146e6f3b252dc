//! Runge–Kutta view of ADER: implicit and explicit Butcher tableaux, order
//! conditions B/C/D, stability functions and stage-count tables.

mod conditions;
mod export;
mod stability;
mod stages;

pub use conditions::{order_condition_residuals, OrderResiduals};
pub use export::{explicit_tableau, implicit_tableau, TableauJson};
pub use stability::{
    max_real_step, stability_poly, stability_region_boundary, tableau_stability, truncated_exp, BoundaryPoint,
};
pub use stages::{closed_form_stages, stage_count, stage_table, StageCountRow};

use crate::linalg::Mat;

/// Coefficients (A, b, c) of an S-stage Runge–Kutta scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub a: Mat,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub explicit: bool,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// True when A is strictly lower triangular.
    pub fn is_strictly_lower(&self) -> bool {
        (0..self.a.rows()).all(|i| (i..self.a.cols()).all(|j| self.a[(i, j)] == 0.0))
    }

    /// max |Σⱼ aᵢⱼ − cᵢ|.
    pub fn row_sum_defect(&self) -> f64 {
        self.a.row_sums().iter().zip(&self.c).fold(0.0, |m, (s, c)| m.max((s - c).abs()))
    }

    /// One explicit RK step for an explicit tableau.
    ///
    /// # Panics
    /// If the tableau is not explicit.
    pub fn explicit_step<R: crate::aderops::OdeRhs + ?Sized>(&self, rhs: &R, u: &[f64], t: f64, dt: f64) -> Vec<f64> {
        assert!(self.explicit, "explicit_step needs an explicit tableau");
        let q = u.len();
        let s = self.stages();
        let mut k = vec![0.0; s * q];
        let mut y = vec![0.0; q];
        for i in 0..s {
            y.copy_from_slice(u);
            for j in 0..i {
                let a = self.a[(i, j)];
                if a != 0.0 {
                    for r in 0..q {
                        y[r] += dt * a * k[j * q + r];
                    }
                }
            }
            let (_, rest) = k.split_at_mut(i * q);
            rhs.eval(t + self.c[i] * dt, &y, &mut rest[..q]);
        }
        let mut out = u.to_vec();
        for (j, &bj) in self.b.iter().enumerate() {
            for r in 0..q {
                out[r] += dt * bj * k[j * q + r];
            }
        }
        out
    }
}
