//! Inter-patch coupling: every patch edge value is prescribed by Lagrange
//! interpolation of the macroscale samples.
//!
//! Away from the double patch each edge interpolates the 2*gamma+1 nearest
//! macroscale nodes. Next to the double patch the stencil keeps its far-side
//! extent but truncates at the nearest shock node, so no stencil ever reaches
//! across the shock: the left macro-domain only ever sees nodes at positions
//! <= X_s^l, and symmetrically on the right. The domain boundaries get the
//! mirror treatment, with the Dirichlet boundary points acting as extra
//! interpolation nodes that stencils truncate against.
//!
//! Stencil weights depend on geometry only, so they are computed once per
//! layout ([`CouplingStencils::build`]) and reused every evaluation.

use crate::mesh::{MacroNode, NodeRole, PatchLayout};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error("an interpolation stencil needs at least two nodes (got {0})")]
    TooFewNodes(usize),
    #[error("duplicate interpolation node at position {0}")]
    DuplicateNodes(f64),
    #[error("degenerate stencil for patch {patch}: {source}")]
    DegenerateStencil {
        patch: usize,
        source: Box<CouplingError>,
    },
    #[error("macro sample does not match the layout node set: {0}")]
    SampleMismatch(String),
    #[error("macro sample positions must be finite and strictly increasing")]
    BadSample,
}

/// Field values at the macroscale nodes, in layout node order.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroSample {
    positions: Vec<f64>,
    values: Vec<f64>,
    roles: Vec<NodeRole>,
}

impl MacroSample {
    pub fn new(
        positions: Vec<f64>,
        values: Vec<f64>,
        roles: Vec<NodeRole>,
    ) -> Result<Self, CouplingError> {
        if positions.len() != values.len() || positions.len() != roles.len() {
            return Err(CouplingError::BadSample);
        }
        let ordered = positions.windows(2).all(|w| w[0] < w[1]);
        let finite = positions.iter().chain(values.iter()).all(|v| v.is_finite());
        if !ordered || !finite {
            return Err(CouplingError::BadSample);
        }
        Ok(Self {
            positions,
            values,
            roles,
        })
    }

    /// Skips the validation; used on the simulation hot path where the
    /// positions come straight from a validated layout.
    pub(crate) fn from_layout_values(nodes: &[MacroNode], values: Vec<f64>) -> Self {
        debug_assert_eq!(nodes.len(), values.len());
        Self {
            positions: nodes.iter().map(|n| n.position).collect(),
            values,
            roles: nodes.iter().map(|n| n.role).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }
}

/// Prescribed edge values, one `(left, right)` pair per patch.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeValues {
    pairs: Vec<(f64, f64)>,
}

impl EdgeValues {
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn get(&self, patch: usize) -> (f64, f64) {
        self.pairs[patch]
    }
}

/// What a stencil entry refers to: a macroscale node, or one of the Dirichlet
/// boundary anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilNode {
    Macro(usize),
    LeftBoundary,
    RightBoundary,
}

/// An interpolation stencil: the nodes it reads, their positions, the
/// precomputed Lagrange weights, and the edge position it targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub nodes: Vec<StencilNode>,
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
    pub target: f64,
}

impl Stencil {
    fn evaluate(&self, sample: &MacroSample, bc_left: f64, bc_right: f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(node, w)| {
                w * match node {
                    StencilNode::Macro(i) => sample.values[*i],
                    StencilNode::LeftBoundary => bc_left,
                    StencilNode::RightBoundary => bc_right,
                }
            })
            .sum()
    }
}

/// Classic Lagrange weights: `w_i = prod_{k != i} (target - x_k)/(x_i - x_k)`.
/// They sum to one for any node set (partition of unity).
pub fn lagrange_weights(nodes: &[f64], target: f64) -> Result<Vec<f64>, CouplingError> {
    if nodes.len() < 2 {
        return Err(CouplingError::TooFewNodes(nodes.len()));
    }
    for (i, &xi) in nodes.iter().enumerate() {
        for &xk in &nodes[i + 1..] {
            if xi == xk {
                return Err(CouplingError::DuplicateNodes(xi));
            }
        }
    }
    let weights = nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &xk)| (target - xk) / (xi - xk))
                .product()
        })
        .collect();
    Ok(weights)
}

#[derive(Debug, Clone, Copy)]
enum ShockSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy)]
enum EdgeSide {
    Left,
    Right,
}

/// All stencils of a layout, precomputed.
#[derive(Debug, Clone)]
pub struct CouplingStencils {
    per_patch: Vec<(Stencil, Stencil)>,
    node_positions: Vec<f64>,
    node_roles: Vec<NodeRole>,
}

impl CouplingStencils {
    pub fn build(layout: &PatchLayout) -> Result<Self, CouplingError> {
        let nodes = layout.macro_nodes();
        let mut per_patch = Vec::with_capacity(layout.patches().len());
        for (j, patch) in layout.patches().iter().enumerate() {
            let left = build_stencil(layout, &nodes, j, patch.left_edge(), EdgeSide::Left)
                .map_err(|e| CouplingError::DegenerateStencil {
                    patch: j,
                    source: Box::new(e),
                })?;
            let right = build_stencil(layout, &nodes, j, patch.right_edge(), EdgeSide::Right)
                .map_err(|e| CouplingError::DegenerateStencil {
                    patch: j,
                    source: Box::new(e),
                })?;
            per_patch.push((left, right));
        }
        Ok(Self {
            per_patch,
            node_positions: nodes.iter().map(|n| n.position).collect(),
            node_roles: nodes.iter().map(|n| n.role).collect(),
        })
    }

    /// `(left, right)` stencil pair of one patch.
    pub fn for_patch(&self, patch: usize) -> (&Stencil, &Stencil) {
        let (l, r) = &self.per_patch[patch];
        (l, r)
    }

    pub fn patch_count(&self) -> usize {
        self.per_patch.len()
    }

    /// Evaluate every edge value from a macro sample and the boundary data.
    pub fn apply(&self, sample: &MacroSample, bc_left: f64, bc_right: f64) -> EdgeValues {
        let pairs = self
            .per_patch
            .iter()
            .map(|(l, r)| {
                (
                    l.evaluate(sample, bc_left, bc_right),
                    r.evaluate(sample, bc_left, bc_right),
                )
            })
            .collect();
        EdgeValues { pairs }
    }

    fn check_sample(&self, sample: &MacroSample) -> Result<(), CouplingError> {
        if sample.len() != self.node_positions.len() {
            return Err(CouplingError::SampleMismatch(format!(
                "expected {} node values, got {}",
                self.node_positions.len(),
                sample.len()
            )));
        }
        for (k, (&got, &want)) in sample
            .positions()
            .iter()
            .zip(self.node_positions.iter())
            .enumerate()
        {
            if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
                return Err(CouplingError::SampleMismatch(format!(
                    "node {k} at {got}, layout expects {want}"
                )));
            }
            if sample.roles()[k] != self.node_roles[k] {
                return Err(CouplingError::SampleMismatch(format!(
                    "node {k} role mismatch"
                )));
            }
        }
        Ok(())
    }

    /// Stencil inspection dump: one `patch,edge,target,node_position,weight`
    /// row per stencil entry.
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("patch,edge,target,node_position,weight\n");
        for (j, (l, r)) in self.per_patch.iter().enumerate() {
            for (side, st) in [("left", l), ("right", r)] {
                for (pos, w) in st.positions.iter().zip(st.weights.iter()) {
                    out.push_str(&format!("{j},{side},{},{},{}\n", st.target, pos, w));
                }
            }
        }
        out
    }
}

/// Build one edge stencil in patch-index space.
///
/// The candidate index range is [j - gamma, j + gamma]. It truncates at the
/// double patch (which supplies the facing shock node as the terminal entry)
/// and at the domain ends (which supply the boundary anchors). The far-side
/// extent is never widened, which is the constant-bandwidth rule that keeps
/// the global consistency order.
fn build_stencil(
    layout: &PatchLayout,
    nodes: &[MacroNode],
    j: usize,
    target: f64,
    side: EdgeSide,
) -> Result<Stencil, CouplingError> {
    let gamma = layout.gamma() as isize;
    let last = layout.patches().len() as isize - 1;
    let j = j as isize;
    let mut lo = j - gamma;
    let mut hi = j + gamma;
    let mut shock_side = None;
    if let Some(s) = layout.double_index() {
        let s = s as isize;
        match j.cmp(&s) {
            std::cmp::Ordering::Less => {
                if hi >= s {
                    hi = s;
                    shock_side = Some(ShockSide::Left);
                }
            }
            std::cmp::Ordering::Greater => {
                if lo <= s {
                    lo = s;
                    shock_side = Some(ShockSide::Right);
                }
            }
            std::cmp::Ordering::Equal => match side {
                // The double patch couples each edge to its own macro-domain.
                EdgeSide::Left => {
                    hi = s;
                    shock_side = Some(ShockSide::Left);
                }
                EdgeSide::Right => {
                    lo = s;
                    shock_side = Some(ShockSide::Right);
                }
            },
        }
    }
    let clip_left = lo < 0;
    let clip_right = hi > last;
    lo = lo.max(0);
    hi = hi.min(last);

    // Map patch index -> macro node index; the double patch contributes the
    // shock node facing this stencil's side.
    let node_index = |i: isize| -> usize {
        match layout.double_index() {
            Some(s) => {
                let s = s as isize;
                if i < s {
                    i as usize
                } else if i > s {
                    (i + 1) as usize
                } else {
                    match shock_side {
                        Some(ShockSide::Left) => s as usize,
                        Some(ShockSide::Right) => s as usize + 1,
                        None => unreachable!("range includes the double patch only when truncated"),
                    }
                }
            }
            None => i as usize,
        }
    };

    let mut refs = Vec::with_capacity((hi - lo + 3) as usize);
    if clip_left {
        refs.push(StencilNode::LeftBoundary);
    }
    for i in lo..=hi {
        refs.push(StencilNode::Macro(node_index(i)));
    }
    if clip_right {
        refs.push(StencilNode::RightBoundary);
    }

    let positions: Vec<f64> = refs
        .iter()
        .map(|r| match r {
            StencilNode::Macro(i) => nodes[*i].position,
            StencilNode::LeftBoundary => layout.x_lo(),
            StencilNode::RightBoundary => layout.x_hi(),
        })
        .collect();
    let weights = lagrange_weights(&positions, target)?;
    Ok(Stencil {
        nodes: refs,
        positions,
        weights,
        target,
    })
}

/// One-shot edge-value computation; builds and applies the layout's
/// stencils after checking the sample against the layout node set.
pub fn compute_edge_values(
    sample: &MacroSample,
    layout: &PatchLayout,
    bc_left: f64,
    bc_right: f64,
) -> Result<EdgeValues, CouplingError> {
    let stencils = CouplingStencils::build(layout)?;
    stencils.check_sample(sample)?;
    Ok(stencils.apply(sample, bc_left, bc_right))
}
