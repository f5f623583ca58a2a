//! Patch geometry: standard patches, the shock-capturing double patch, the
//! macroscale node set, and the built-in archetype layouts.

use crate::model::ArchetypeId;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("a patch needs n >= 2 and dx > 0 (got n={n}, dx={dx})")]
    BadPatchMesh { n: usize, dx: f64 },
    #[error("patch point count must be odd and >= 5 (got {0})")]
    BadPointCount(usize),
    #[error("patch width must be positive and finite (got {0})")]
    BadWidth(f64),
    #[error(
        "shock-node insets must satisfy left >= 1, right >= 1 and left + right < 2n \
         (got left={left}, right={right}, n={n})"
    )]
    BadShockInsets { left: usize, right: usize, n: usize },
    #[error("patches {0} and {1} are out of order or overlap")]
    OverlappingPatches(usize, usize),
    #[error("patch {index} extends outside the domain [{x_lo}, {x_hi}]")]
    PatchOutsideDomain { index: usize, x_lo: f64, x_hi: f64 },
    #[error("at most one double patch is allowed (found at indices {0} and {1})")]
    MultipleDoublePatches(usize, usize),
    #[error(
        "the double patch needs at least one standard patch on each side \
         (double at index {0} of {1} patches)"
    )]
    DoublePatchNeedsNeighbours(usize, usize),
    #[error("coupling order gamma must be >= 1")]
    BadGamma,
    #[error("invalid layout domain: x_lo={0}, x_hi={1}")]
    BadDomain(f64, f64),
    #[error("a layout needs at least one patch")]
    NoPatches,
    #[error(
        "shock-node spacing rule gives a non-positive offset {offset} \
         (eps={eps}, macro spacing={macro_spacing}, gamma={gamma})"
    )]
    NonPositiveOffset {
        offset: f64,
        eps: f64,
        macro_spacing: f64,
        gamma: usize,
    },
    #[error("shock-node spacing rule needs eps > 0, macro spacing > 0 and gamma >= 1")]
    BadOffsetArguments,
}

/// Standard patches carry one macroscale node at their centre. The double
/// patch instead carries two *shock nodes*, placed `left_inset` and
/// `right_inset` micro spacings inward from its left and right edges so that
/// both sit on micro mesh points, outside the transition layer they bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchKind {
    Standard,
    Double { left_inset: usize, right_inset: usize },
}

/// One patch: a centre, a micro mesh of 2n+1 equally spaced points, and its
/// kind. Micro point i lives at `centre + dx * i` for i in [-n, n]; the patch
/// half-width is `h = n * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Patch {
    centre: f64,
    n: usize,
    dx: f64,
    kind: PatchKind,
}

impl Patch {
    pub fn new(centre: f64, n: usize, dx: f64, kind: PatchKind) -> Result<Self, LayoutError> {
        if n < 2 || !dx.is_finite() || dx <= 0.0 || !centre.is_finite() {
            return Err(LayoutError::BadPatchMesh { n, dx });
        }
        if let PatchKind::Double {
            left_inset,
            right_inset,
        } = kind
        {
            // Shock nodes must be strictly interior and strictly ordered.
            if left_inset < 1 || right_inset < 1 || left_inset + right_inset >= 2 * n {
                return Err(LayoutError::BadShockInsets {
                    left: left_inset,
                    right: right_inset,
                    n,
                });
            }
        }
        Ok(Self {
            centre,
            n,
            dx,
            kind,
        })
    }

    pub fn standard(centre: f64, n: usize, dx: f64) -> Result<Self, LayoutError> {
        Self::new(centre, n, dx, PatchKind::Standard)
    }

    /// Build from the total width and (odd) point count, the form the
    /// archetype configurations are stated in.
    pub fn from_width(
        centre: f64,
        width: f64,
        points: usize,
        kind: PatchKind,
    ) -> Result<Self, LayoutError> {
        if !width.is_finite() || width <= 0.0 {
            return Err(LayoutError::BadWidth(width));
        }
        if points < 5 || points.is_multiple_of(2) {
            return Err(LayoutError::BadPointCount(points));
        }
        let n = (points - 1) / 2;
        Self::new(centre, n, width / (points - 1) as f64, kind)
    }

    pub fn centre(&self) -> f64 {
        self.centre
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn kind(&self) -> PatchKind {
        self.kind
    }

    pub fn is_double(&self) -> bool {
        matches!(self.kind, PatchKind::Double { .. })
    }

    pub fn half_width(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn left_edge(&self) -> f64 {
        self.centre - self.half_width()
    }

    pub fn right_edge(&self) -> f64 {
        self.centre + self.half_width()
    }

    pub fn point_count(&self) -> usize {
        2 * self.n + 1
    }

    /// Position of micro point i, i in [-n, n].
    pub fn micro_position(&self, i: isize) -> f64 {
        debug_assert!(i.unsigned_abs() <= self.n);
        self.centre + self.dx * i as f64
    }

    /// All 2n+1 micro positions, left to right.
    pub fn micro_positions(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n as isize;
        (-n..=n).map(move |i| self.micro_position(i))
    }

    /// Shock-node positions `(left, right)`, if this is a double patch.
    pub fn shock_node_positions(&self) -> Option<(f64, f64)> {
        match self.kind {
            PatchKind::Standard => None,
            PatchKind::Double {
                left_inset,
                right_inset,
            } => Some((
                self.left_edge() + left_inset as f64 * self.dx,
                self.right_edge() - right_inset as f64 * self.dx,
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Centre,
    ShockLeft,
    ShockRight,
}

impl NodeRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeRole::Centre => "centre",
            NodeRole::ShockLeft => "shock_left",
            NodeRole::ShockRight => "shock_right",
        }
    }
}

/// One macroscale node: where it sits, what it is, and which patch owns it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroNode {
    pub position: f64,
    pub role: NodeRole,
    pub patch: usize,
}

/// The geometry of a whole run: ordered patches inside a domain, the coupling
/// order gamma, and (at most) one double patch.
///
/// Immutable after construction; freely shareable.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchLayout {
    x_lo: f64,
    x_hi: f64,
    patches: Vec<Patch>,
    gamma: usize,
    double_index: Option<usize>,
}

impl PatchLayout {
    pub fn new(
        x_lo: f64,
        x_hi: f64,
        patches: Vec<Patch>,
        gamma: usize,
    ) -> Result<Self, LayoutError> {
        if !x_lo.is_finite() || !x_hi.is_finite() || x_lo >= x_hi {
            return Err(LayoutError::BadDomain(x_lo, x_hi));
        }
        if gamma < 1 {
            return Err(LayoutError::BadGamma);
        }
        if patches.is_empty() {
            return Err(LayoutError::NoPatches);
        }
        let tol = 1e-12 * (x_hi - x_lo).abs().max(1.0);
        let mut double_index = None;
        for (i, p) in patches.iter().enumerate() {
            if p.left_edge() < x_lo - tol || p.right_edge() > x_hi + tol {
                return Err(LayoutError::PatchOutsideDomain {
                    index: i,
                    x_lo,
                    x_hi,
                });
            }
            if i + 1 < patches.len() && p.right_edge() > patches[i + 1].left_edge() + tol {
                return Err(LayoutError::OverlappingPatches(i, i + 1));
            }
            if p.is_double() {
                if let Some(first) = double_index {
                    return Err(LayoutError::MultipleDoublePatches(first, i));
                }
                double_index = Some(i);
            }
        }
        if let Some(s) = double_index {
            // One-sided stencils next to the shock need neighbours on both sides.
            if s == 0 || s == patches.len() - 1 {
                return Err(LayoutError::DoublePatchNeedsNeighbours(s, patches.len()));
            }
        }
        Ok(Self {
            x_lo,
            x_hi,
            patches,
            gamma,
            double_index,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn double_index(&self) -> Option<usize> {
        self.double_index
    }

    /// The ordered macroscale node set: one centre node per standard patch,
    /// two shock nodes for the double patch.
    pub fn macro_nodes(&self) -> Vec<MacroNode> {
        let mut nodes = Vec::with_capacity(self.patches.len() + 1);
        for (j, p) in self.patches.iter().enumerate() {
            match p.shock_node_positions() {
                None => nodes.push(MacroNode {
                    position: p.centre(),
                    role: NodeRole::Centre,
                    patch: j,
                }),
                Some((left, right)) => {
                    nodes.push(MacroNode {
                        position: left,
                        role: NodeRole::ShockLeft,
                        patch: j,
                    });
                    nodes.push(MacroNode {
                        position: right,
                        role: NodeRole::ShockRight,
                        patch: j,
                    });
                }
            }
        }
        nodes
    }

    /// Fraction of the domain covered by patch interiors; the whole point of
    /// the scheme is that this stays well below one.
    pub fn simulated_fraction(&self) -> f64 {
        let covered: f64 = self.patches.iter().map(|p| 2.0 * p.half_width()).sum();
        covered / (self.x_hi - self.x_lo)
    }
}

/// Standard patches spread uniformly over `(x_lo, gap_hi)`, both endpoints
/// excluded.
fn spread_patches(
    x_lo: f64,
    gap_hi: f64,
    count: usize,
    width: f64,
    points: usize,
) -> Result<Vec<Patch>, LayoutError> {
    let step = (gap_hi - x_lo) / (count + 1) as f64;
    (1..=count)
        .map(|k| Patch::from_width(x_lo + k as f64 * step, width, points, PatchKind::Standard))
        .collect()
}

/// Mirror image of `left` about x = 0. Negation is exact, so symmetric
/// layouts stay bit-symmetric.
fn mirror(left: &[Patch]) -> Vec<Patch> {
    left.iter()
        .rev()
        .map(|p| Patch {
            centre: -p.centre,
            ..*p
        })
        .collect()
}

/// The patch configuration used for each archetype problem.
///
/// Stated micro counts of 100 and 180 are rounded up to the nearest odd count
/// (101, 181) so every patch keeps the centre mesh point the coupling needs;
/// the resulting half-spacing change is far below the reported error levels.
/// Shock nodes default to one micro spacing inside each double-patch edge.
pub fn archetype_layout(id: ArchetypeId) -> PatchLayout {
    let double = |width: f64, points: usize| {
        Patch::from_width(
            0.0,
            width,
            points,
            PatchKind::Double {
                left_inset: 1,
                right_inset: 1,
            },
        )
        .expect("archetype double patch is valid")
    };
    // M1/M3 use four standard patches at +-pi/3 and +-2pi/3; this builds the
    // left half, mirrored below.
    let thirds = |width: f64| -> Vec<Patch> {
        vec![
            Patch::from_width(-2.0 * PI / 3.0, width, 5, PatchKind::Standard).unwrap(),
            Patch::from_width(-PI / 3.0, width, 5, PatchKind::Standard).unwrap(),
        ]
    };
    let (left, dbl, gamma) = match id {
        ArchetypeId::M1 => (thirds(0.01), double(0.05, 25), 1),
        ArchetypeId::M2 => (
            spread_patches(-PI, -0.1, 17, 0.01, 5).expect("M2 layout is valid"),
            double(0.2, 101),
            3,
        ),
        ArchetypeId::M3 => (thirds(0.02), double(0.6, 181), 1),
        ArchetypeId::M4 => (
            spread_patches(-PI, -0.3, 17, 0.02, 5).expect("M4 layout is valid"),
            double(0.6, 181),
            3,
        ),
    };
    let mut patches = left.clone();
    patches.push(dbl);
    patches.extend(mirror(&left));
    PatchLayout::new(-PI, PI, patches, gamma).expect("archetype layouts satisfy the invariants")
}

/// Advisory shock-node distance from the shock centre:
/// `(7 - 2 gamma ln H) * eps` with H the macroscale node spacing.
///
/// The transition layer decays like exp(-x/eps), so this keeps its influence
/// on the shock-node values below the H^(2 gamma) consistency level (natural
/// logarithm; e^-7 ~ 1e-3 sets the baseline).
pub fn recommend_shock_offset(
    eps: f64,
    macro_spacing: f64,
    gamma: usize,
) -> Result<f64, LayoutError> {
    if !eps.is_finite()
        || eps <= 0.0
        || !macro_spacing.is_finite()
        || macro_spacing <= 0.0
        || gamma < 1
    {
        return Err(LayoutError::BadOffsetArguments);
    }
    let offset = (7.0 - 2.0 * gamma as f64 * macro_spacing.ln()) * eps;
    if offset <= 0.0 {
        return Err(LayoutError::NonPositiveOffset {
            offset,
            eps,
            macro_spacing,
            gamma,
        });
    }
    Ok(offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ArchetypeId;

    #[test]
    fn standard_patches_give_centre_nodes() {
        let patches = vec![
            Patch::standard(-1.0, 2, 0.01).unwrap(),
            Patch::standard(0.0, 2, 0.01).unwrap(),
            Patch::standard(1.0, 2, 0.01).unwrap(),
        ];
        let layout = PatchLayout::new(-2.0, 2.0, patches, 1).unwrap();
        let nodes = layout.macro_nodes();
        assert_eq!(nodes.len(), 3);
        for (node, want) in nodes.iter().zip([-1.0, 0.0, 1.0]) {
            assert_eq!(node.position, want);
            assert_eq!(node.role, NodeRole::Centre);
        }
    }

    #[test]
    fn shock_nodes_sit_one_inset_inside_the_edges() {
        // h = 0.025, dx = 0.0025 => n = 10; insets of one spacing.
        let p = Patch::new(
            0.0,
            10,
            0.0025,
            PatchKind::Double {
                left_inset: 1,
                right_inset: 1,
            },
        )
        .unwrap();
        let (l, r) = p.shock_node_positions().unwrap();
        assert!((l + 0.0225).abs() < 1e-15);
        assert!((r - 0.0225).abs() < 1e-15);
    }

    #[test]
    fn m1_layout_has_six_macro_nodes() {
        let layout = archetype_layout(ArchetypeId::M1);
        let nodes = layout.macro_nodes();
        assert_eq!(nodes.len(), 6);
        let roles: Vec<_> = nodes.iter().map(|n| n.role).collect();
        assert_eq!(
            roles,
            vec![
                NodeRole::Centre,
                NodeRole::Centre,
                NodeRole::ShockLeft,
                NodeRole::ShockRight,
                NodeRole::Centre,
                NodeRole::Centre,
            ]
        );
    }

    #[test]
    fn m1_double_patch_dimensions() {
        let layout = archetype_layout(ArchetypeId::M1);
        let dbl = &layout.patches()[layout.double_index().unwrap()];
        assert_eq!(dbl.n(), 12);
        assert_eq!(dbl.point_count(), 25);
        assert!((dbl.half_width() - 0.025).abs() < 1e-15);
        assert!((dbl.dx() - 0.025 / 12.0).abs() < 1e-17);
    }

    #[test]
    fn m4_layout_parameters() {
        let layout = archetype_layout(ArchetypeId::M4);
        assert_eq!(layout.gamma(), 3);
        assert_eq!(layout.patches().len(), 35);
        let standard = layout.patches().iter().filter(|p| !p.is_double()).count();
        assert_eq!(standard, 34);
        // Roughly a fifth of the domain is actually simulated.
        let frac = layout.simulated_fraction();
        assert!((frac - 0.20).abs() < 0.02, "M4 coverage {frac}");
    }

    #[test]
    fn archetype_layouts_are_valid_and_symmetric() {
        for id in ArchetypeId::ALL {
            let layout = archetype_layout(id);
            let nodes = layout.macro_nodes();
            for w in nodes.windows(2) {
                assert!(w[0].position < w[1].position);
            }
            // Bit-exact mirror symmetry about x = 0.
            let m = nodes.len();
            for k in 0..m {
                assert_eq!(nodes[k].position, -nodes[m - 1 - k].position, "{id}");
            }
            assert!(layout.simulated_fraction() < 0.25);
        }
    }

    #[test]
    fn recommended_offset_matches_the_rule() {
        let r = recommend_shock_offset(0.001, 0.5, 1).unwrap();
        assert!((r - (7.0 + 2.0 * 2.0_f64.ln()) * 0.001).abs() < 1e-15);
        let r = recommend_shock_offset(0.001, (-1.0_f64).exp(), 1).unwrap();
        assert!((r - 0.009).abs() < 1e-9);
        // Larger gamma widens the recommendation for sub-unit spacings.
        let g1 = recommend_shock_offset(0.001, 0.5, 1).unwrap();
        let g2 = recommend_shock_offset(0.001, 0.5, 2).unwrap();
        assert!(g2 > g1);
        assert!(recommend_shock_offset(0.0, 0.5, 1).is_err());
        // H so large the rule turns negative.
        assert!(recommend_shock_offset(0.001, 1e4, 2).is_err());
    }

    #[test]
    fn layout_invariants_are_enforced() {
        let std_at = |c: f64| Patch::standard(c, 2, 0.01).unwrap();
        let dbl_at = |c: f64| {
            Patch::new(
                c,
                5,
                0.01,
                PatchKind::Double {
                    left_inset: 1,
                    right_inset: 1,
                },
            )
            .unwrap()
        };

        // Overlapping pair.
        let err = PatchLayout::new(-1.0, 1.0, vec![std_at(0.0), std_at(0.01)], 1);
        assert!(matches!(err, Err(LayoutError::OverlappingPatches(0, 1))));

        // Outside the domain.
        let err = PatchLayout::new(-1.0, 1.0, vec![std_at(0.999)], 1);
        assert!(matches!(err, Err(LayoutError::PatchOutsideDomain { .. })));

        // Two double patches.
        let err = PatchLayout::new(
            -2.0,
            2.0,
            vec![std_at(-1.5), dbl_at(-0.5), dbl_at(0.5), std_at(1.5)],
            1,
        );
        assert!(matches!(err, Err(LayoutError::MultipleDoublePatches(1, 2))));

        // Double patch on the boundary of the list.
        let err = PatchLayout::new(-2.0, 2.0, vec![dbl_at(-1.0), std_at(1.0)], 1);
        assert!(matches!(
            err,
            Err(LayoutError::DoublePatchNeedsNeighbours(0, 2))
        ));

        // gamma = 0.
        let err = PatchLayout::new(-1.0, 1.0, vec![std_at(0.0)], 0);
        assert!(matches!(err, Err(LayoutError::BadGamma)));

        // Shock nodes out of order.
        let err = Patch::new(
            0.0,
            2,
            0.01,
            PatchKind::Double {
                left_inset: 2,
                right_inset: 2,
            },
        );
        assert!(matches!(err, Err(LayoutError::BadShockInsets { .. })));
    }

    #[test]
    fn equal_insets_straddle_the_centre_symmetrically() {
        let p = Patch::new(
            0.5,
            8,
            0.01,
            PatchKind::Double {
                left_inset: 3,
                right_inset: 3,
            },
        )
        .unwrap();
        let (l, r) = p.shock_node_positions().unwrap();
        assert!((0.5 - l - (r - 0.5)).abs() < 1e-15);
    }
}
