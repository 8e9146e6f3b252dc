use super::operator::{embed_matrix, galerkin_cross_matrix, AderOperator};
use super::AderError;
use crate::linalg::Mat;
use crate::timebasis::{make_nodes, make_quadrature, NodeKind, NodeSet};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Rows of an update matrix smaller than this (relative to its largest entry)
/// are treated as exactly zero.
pub const GHOST_ROW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// M+1 equal to the target order.
    #[serde(rename = "cader")]
    Classical,
    /// Minimal M for the node family.
    Ader,
    /// Degree ladder with interpolation of the state.
    AderU,
    /// Degree ladder with interpolation of the right-hand side.
    AderDu,
    /// Degree ladder with a Galerkin projection of the evolution operator.
    AderL2,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Classical, Variant::Ader, Variant::AderU, Variant::AderDu, Variant::AderL2];

    pub fn is_ladder(self) -> bool {
        matches!(self, Variant::AderU | Variant::AderDu | Variant::AderL2)
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Classical => "cader",
            Variant::Ader => "ader",
            Variant::AderU => "aderu",
            Variant::AderDu => "aderdu",
            Variant::AderL2 => "aderl2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = AderError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cader" | "classical" => Ok(Variant::Classical),
            "ader" => Ok(Variant::Ader),
            "aderu" => Ok(Variant::AderU),
            "aderdu" => Ok(Variant::AderDu),
            "aderl2" => Ok(Variant::AderL2),
            _ => Err(AderError::UnknownVariant(s.to_string())),
        }
    }
}

/// Final polynomial degree M used by `variant` to reach order `p`.
pub fn target_degree(kind: NodeKind, variant: Variant, p: usize) -> usize {
    if variant == Variant::Classical {
        return p.saturating_sub(1);
    }
    match kind {
        NodeKind::Equispaced => p.saturating_sub(1),
        NodeKind::GaussLobatto => p.div_ceil(2),
        NodeKind::GaussLegendre => (p.saturating_sub(1)).div_ceil(2).max(1),
    }
}

/// How the previous iterate enters a ladder level whose degree has grown.
#[derive(Debug, Clone)]
pub enum Embedding {
    /// H⁽ᵖ⁻¹⁾, interpolating nodal values onto the finer nodes.
    Interpolation(Mat),
    /// Λ⁽ᵖ,ᵖ⁻¹⁾, the Galerkin cross mass matrix.
    Galerkin(Mat),
}

impl Embedding {
    pub fn matrix(&self) -> &Mat {
        match self {
            Embedding::Interpolation(m) | Embedding::Galerkin(m) => m,
        }
    }
}

/// One iteration of a ladder.
///
/// Iteration p evaluates G at `input_nodes` on the states `pre_embed·ū⁽ᵖ⁻¹⁾`
/// (or ū⁽ᵖ⁻¹⁾ directly) and sets ū⁽ᵖ⁾ = uₙ + Δt·`update`·G.
#[derive(Debug, Clone)]
pub struct LadderLevel {
    pub degree: usize,
    pub operator: Arc<AderOperator>,
    pub embed: Option<Embedding>,
    pub(crate) update: Mat,
    pub(crate) pre_embed: Option<Mat>,
    pub(crate) pre_embed_source: Vec<Option<usize>>,
    pub(crate) input_nodes: Vec<f64>,
    pub(crate) ghost_rows: Vec<bool>,
}

impl LadderLevel {
    /// The matrix mapping G at the input states to the new iterate.
    pub fn update_matrix(&self) -> &Mat {
        &self.update
    }

    /// Interpolation applied to the previous iterate before evaluating G
    /// (state-embedding ladders only).
    pub fn pre_embed(&self) -> Option<&Mat> {
        self.pre_embed.as_ref()
    }

    /// Subtimenodes (in [0,1]) at which G is evaluated in this iteration.
    pub fn input_nodes(&self) -> &[f64] {
        &self.input_nodes
    }

    /// Subtimenodes of the iterate produced by this level.
    pub fn output_nodes(&self) -> &[f64] {
        self.operator.nodes().nodes()
    }

    /// Rows of the update that vanish, whose states equal uₙ exactly.
    pub fn ghost_rows(&self) -> &[bool] {
        &self.ghost_rows
    }
}

/// Per-iteration schedule of degrees, operators and embeddings.
#[derive(Debug, Clone)]
pub struct IterationLadder {
    kind: NodeKind,
    variant: Variant,
    order: usize,
    initial_nodes: NodeSet,
    schedule: Vec<LadderLevel>,
}

impl IterationLadder {
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn schedule(&self) -> &[LadderLevel] {
        &self.schedule
    }

    /// Node set of the initial guess ū⁽⁰⁾.
    pub fn initial_nodes(&self) -> &NodeSet {
        &self.initial_nodes
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.schedule.iter().map(|l| l.degree).collect()
    }

    pub fn final_level(&self) -> &LadderLevel {
        self.schedule.last().expect("ladders have at least one level")
    }
}

/// Builds the iteration schedule for `variant` at order `p`.
///
/// Classical and Ader use one operator for all P iterations. The ladder
/// variants raise the degree 1, 2, …, M and then repeat M; at order 2 they
/// reduce to plain Ader.
pub fn build_ladder(kind: NodeKind, variant: Variant, p: usize) -> Result<IterationLadder, AderError> {
    if p == 0 || (variant.is_ladder() && p < 2) {
        return Err(AderError::InvalidOrder { variant, order: p });
    }
    let m = target_degree(kind, variant, p);
    if m < 1 {
        return Err(AderError::InvalidOrder { variant, order: p });
    }
    let degrees: Vec<usize> =
        if variant.is_ladder() && p > 2 { (1..=p).map(|i| i.min(m)).collect() } else { vec![m; p] };
    let engine_variant = if variant.is_ladder() && p == 2 { Variant::Ader } else { variant };
    let schedule = levels_for_degrees(kind, engine_variant, &degrees)?;
    let initial_nodes = make_nodes(kind, degrees[0])?;
    Ok(IterationLadder { kind, variant, order: p, initial_nodes, schedule })
}

/// Levels for an arbitrary nondecreasing degree sequence, starting from an
/// initial guess of degree `degrees[0]`.
pub(crate) fn levels_for_degrees(
    kind: NodeKind,
    variant: Variant,
    degrees: &[usize],
) -> Result<Vec<LadderLevel>, AderError> {
    let mut ops: Vec<Option<Arc<AderOperator>>> = Vec::new();
    let mut op_for = |d: usize| -> Result<Arc<AderOperator>, AderError> {
        if ops.len() <= d {
            ops.resize(d + 1, None);
        }
        if ops[d].is_none() {
            ops[d] = Some(Arc::new(AderOperator::new(&make_nodes(kind, d)?)?));
        }
        Ok(ops[d].clone().expect("just inserted"))
    };
    let mut levels = Vec::with_capacity(degrees.len());
    let mut prev = degrees[0];
    for &d in degrees {
        let op = op_for(d)?;
        let prev_op = op_for(prev)?;
        let level = if d == prev {
            plain_level(op, prev_op.nodes().nodes().to_vec())
        } else {
            ladder_level(kind, variant, op, prev_op.nodes())?
        };
        levels.push(level);
        prev = d;
    }
    Ok(levels)
}

fn plain_level(op: Arc<AderOperator>, input_nodes: Vec<f64>) -> LadderLevel {
    let (update, ghost_rows) = prune_rows(op.a().clone());
    LadderLevel {
        degree: op.degree(),
        operator: op,
        embed: None,
        update,
        pre_embed: None,
        pre_embed_source: Vec::new(),
        input_nodes,
        ghost_rows,
    }
}

fn ladder_level(
    kind: NodeKind,
    variant: Variant,
    op: Arc<AderOperator>,
    coarse: &NodeSet,
) -> Result<LadderLevel, AderError> {
    let fine = op.nodes();
    let h = embed_matrix(coarse, fine);
    let degree = op.degree();
    let level = match variant {
        Variant::AderU => {
            let (update, ghost_rows) = prune_rows(op.a().clone());
            let pre_embed_source = (0..h.rows()).map(|i| unit_row(h.row(i))).collect();
            LadderLevel {
                degree,
                embed: Some(Embedding::Interpolation(h.clone())),
                update,
                pre_embed: Some(h),
                pre_embed_source,
                input_nodes: fine.nodes().to_vec(),
                ghost_rows,
                operator: op,
            }
        }
        Variant::AderDu => {
            let (update, ghost_rows) = prune_rows(op.a().matmul(&h));
            LadderLevel {
                degree,
                embed: Some(Embedding::Interpolation(h)),
                update,
                pre_embed: None,
                pre_embed_source: Vec::new(),
                input_nodes: coarse.nodes().to_vec(),
                ghost_rows,
                operator: op,
            }
        }
        Variant::AderL2 => {
            let quad = match kind {
                NodeKind::GaussLobatto => make_quadrature(NodeKind::GaussLobatto, fine.len())?,
                _ => make_quadrature(NodeKind::GaussLegendre, fine.len())?,
            };
            let cross = galerkin_cross_matrix(coarse, fine, &quad);
            let (update, ghost_rows) = prune_rows(op.solve_b(&cross));
            LadderLevel {
                degree,
                embed: Some(Embedding::Galerkin(cross)),
                update,
                pre_embed: None,
                pre_embed_source: Vec::new(),
                input_nodes: coarse.nodes().to_vec(),
                ghost_rows,
                operator: op,
            }
        }
        Variant::Classical | Variant::Ader => {
            unreachable!("constant-degree variants never change degree")
        }
    };
    Ok(level)
}

/// Index j when `row` is exactly the unit vector eⱼ.
fn unit_row(row: &[f64]) -> Option<usize> {
    let j = row.iter().position(|&v| v == 1.0)?;
    row.iter().enumerate().all(|(k, &v)| k == j || v == 0.0).then_some(j)
}

fn prune_rows(mut m: Mat) -> (Mat, Vec<bool>) {
    let scale = m.max_abs().max(1.0);
    let ghosts: Vec<bool> = (0..m.rows()).map(|i| m.row(i).iter().all(|v| v.abs() <= GHOST_ROW_TOL * scale)).collect();
    for (i, &g) in ghosts.iter().enumerate() {
        if g {
            m.row_mut(i).fill(0.0);
        }
    }
    (m, ghosts)
}
