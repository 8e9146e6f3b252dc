use super::ButcherTableau;
use crate::aderops::{AderOperator, IterationLadder};
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

/// Implicit tableau of the ADER-IWF: A = B⁻¹Λ, b = w, c = nodes.
///
/// With a single node (M = 0) the one-stage tableau with a = c is returned,
/// i.e. the implicit midpoint rule for the Gauss–Legendre node.
pub fn implicit_tableau(op: &AderOperator) -> ButcherTableau {
    let ns = op.nodes();
    let a = if ns.degree() == 0 { Mat::from_row_major(1, 1, vec![ns.nodes()[0]]) } else { op.a().clone() };
    ButcherTableau { a, b: ns.weights().to_vec(), c: ns.nodes().to_vec(), explicit: false }
}

/// Explicit tableau of the iterated scheme, with ghost stages removed.
///
/// Stage 0 is uₙ. Each later iteration contributes one stage per state at
/// which G is evaluated; states whose coefficients all vanish coincide with
/// uₙ and are folded into stage 0. The first iteration becomes an Euler
/// block with coefficients c·e₀.
pub fn explicit_tableau(ladder: &IterationLadder) -> ButcherTableau {
    // each state is uₙ + Δt Σₛ coef[s]·G(Yₛ); rows grow as stages are added
    let mut rows: Vec<Vec<f64>> = vec![Vec::new()];
    let mut cs: Vec<f64> = vec![0.0];
    let n0 = ladder.initial_nodes().len();
    let mut state: Vec<Vec<f64>> = vec![Vec::new(); n0];

    for level in ladder.schedule() {
        let inputs: Vec<Vec<f64>> = match level.pre_embed() {
            Some(h) => (0..h.rows()).map(|i| combine(h.row(i), &state)).collect(),
            None => state.clone(),
        };
        let stage_of: Vec<usize> = inputs
            .iter()
            .zip(level.input_nodes())
            .map(|(coef, &c)| {
                if coef.iter().all(|&v| v == 0.0) {
                    0
                } else {
                    rows.push(coef.clone());
                    cs.push(c);
                    rows.len() - 1
                }
            })
            .collect();
        let u = level.update_matrix();
        state = if stage_of.iter().all(|&s| s == 0) {
            level.output_nodes().iter().map(|&c| vec![c]).collect()
        } else {
            (0..u.rows())
                .map(|i| {
                    let mut coef = vec![0.0; rows.len()];
                    for (k, &s) in stage_of.iter().enumerate() {
                        coef[s] += u[(i, k)];
                    }
                    if level.ghost_rows()[i] {
                        coef.fill(0.0);
                    }
                    coef
                })
                .collect()
        };
    }
    let b = combine(ladder.final_level().operator.end_eval(), &state);
    let s = rows.len();
    let mut a = Mat::zeros(s, s);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let mut b_full = vec![0.0; s];
    b_full[..b.len()].copy_from_slice(&b);
    ButcherTableau { a, b: b_full, c: cs, explicit: true }
}

/// Σᵢ wᵢ·rowsᵢ with rows of differing lengths padded by zeros.
fn combine(weights: &[f64], rows: &[Vec<f64>]) -> Vec<f64> {
    let len = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![0.0; len];
    for (w, row) in weights.iter().zip(rows) {
        if *w == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o += w * v;
        }
    }
    out
}

/// JSON form of an exported tableau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableauJson {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub variant: String,
    pub kind: String,
    pub order: usize,
}

impl TableauJson {
    pub fn new(t: &ButcherTableau, variant: &str, kind: &str, order: usize) -> Self {
        Self {
            s: t.stages(),
            a: (0..t.a.rows()).map(|i| t.a.row(i).to_vec()).collect(),
            b: t.b.clone(),
            c: t.c.clone(),
            variant: variant.to_string(),
            kind: kind.to_string(),
            order,
        }
    }
}
