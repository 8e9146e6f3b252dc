use super::export::explicit_tableau;
use crate::aderops::{build_ladder, target_degree, AderError, Variant};
use crate::timebasis::NodeKind;
use serde::Serialize;

/// Stage counts of the four schemes at one order, with their quotients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageCountRow {
    pub p: usize,
    /// Optimal degree M of the Ader family at this order.
    pub m: usize,
    pub classical: usize,
    pub ader: usize,
    pub ader_u: usize,
    pub ader_du: usize,
}

impl StageCountRow {
    /// Speed-ups of (Ader, AderU, AderDu) over the classical scheme.
    pub fn speedup_vs_classical(&self) -> [f64; 3] {
        let c = self.classical as f64;
        [c / self.ader as f64, c / self.ader_u as f64, c / self.ader_du as f64]
    }

    /// Speed-ups of (AderU, AderDu) over Ader.
    pub fn speedup_vs_ader(&self) -> [f64; 2] {
        let a = self.ader as f64;
        [a / self.ader_u as f64, a / self.ader_du as f64]
    }

    pub fn get(&self, v: Variant) -> usize {
        match v {
            Variant::Classical => self.classical,
            Variant::Ader => self.ader,
            Variant::AderU => self.ader_u,
            Variant::AderDu | Variant::AderL2 => self.ader_du,
        }
    }
}

/// Number of stages of the pruned explicit tableau.
pub fn stage_count(kind: NodeKind, variant: Variant, p: usize) -> Result<usize, AderError> {
    Ok(explicit_tableau(&build_ladder(kind, variant, p)?).stages())
}

/// Closed-form stage count after ghost pruning.
///
/// Before pruning, 1 + (P−1)(M+1) stages, reduced by (M−1)(M−2)/2 for AderU
/// and M(M−1)/2 for AderDu. Families with a node at ξ = 0 then lose the Euler
/// stage at c = 0, and AderDu additionally the zero first rows of its M−1
/// growing iterations.
pub fn closed_form_stages(kind: NodeKind, variant: Variant, p: usize) -> usize {
    let m = target_degree(kind, variant, p);
    let variant = if variant.is_ladder() && p == 2 { Variant::Ader } else { variant };
    let full = 1 + (p - 1) * (m + 1);
    let g = usize::from(kind != NodeKind::GaussLegendre);
    match variant {
        Variant::Classical | Variant::Ader => full - g,
        Variant::AderU => full - (m - 1) * m.saturating_sub(2) / 2 - g,
        Variant::AderDu | Variant::AderL2 => full - m * (m - 1) / 2 - g * m,
    }
}

/// Stage counts for every order in `orders` (each within 2..=14).
pub fn stage_table(kind: NodeKind, orders: impl IntoIterator<Item = usize>) -> Result<Vec<StageCountRow>, AderError> {
    orders
        .into_iter()
        .map(|p| {
            Ok(StageCountRow {
                p,
                m: target_degree(kind, Variant::Ader, p),
                classical: stage_count(kind, Variant::Classical, p)?,
                ader: stage_count(kind, Variant::Ader, p)?,
                ader_u: stage_count(kind, Variant::AderU, p)?,
                ader_du: stage_count(kind, Variant::AderDu, p)?,
            })
        })
        .collect()
}
