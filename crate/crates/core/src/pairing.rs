//! Intersection pairings between locally-finite and relative classes.
//!
//! On matched bases the pairing `<D_f, U_e>` (and `<V_e, G_f>`) is the
//! Kronecker delta. The geometric engine pairs the lf-image classes
//! `U~_e` / `G~_e` against the relative basis by summing `sign * phi(loop)`
//! over the intersection points of the standard arc model: a red point on
//! arc `i` can only meet a green point on the same arc, so an intersection
//! point is a tuple of per-arc bijections, and the loop closed up through a
//! bijection `s` picks up `u^{inv(s)}` from the swaps it performs.

use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::combinatorics::Composition;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{GroupRingElement, RingContext};
use crate::surface::{basis, BasisClass, Flavour, LocalSystemSpec, Side, SurfaceTriad};

#[derive(Debug, Clone, PartialEq)]
pub struct PairingMatrix {
    pub side: Side,
    pub left_flavour: Flavour,
    pub right_flavour: Flavour,
    pub left: Vec<BasisClass>,
    pub right: Vec<BasisClass>,
    pub matrix: Matrix,
}

impl PairingMatrix {
    pub fn size(&self) -> usize { self.matrix.rows() }

    /// `<v, w> = sum_ij alpha(v_i) M_ij w_j`: antilinear in the first slot.
    pub fn evaluate(&self, v: &[GroupRingElement], w: &[GroupRingElement]) -> Result<GroupRingElement> {
        let n = self.size();
        if v.len() != n || w.len() != n {
            return Err(Error::Dimension(format!("pairing of size {n} applied to vectors of length {} and {}", v.len(), w.len())));
        }
        let mw = self.matrix.mul_vec(w)?;
        let mut acc = GroupRingElement::zero(self.matrix.context());
        for (a, b) in v.iter().zip(&mw) {
            acc = acc.checked_add(&a.alpha().checked_mul(b)?)?;
        }
        Ok(acc)
    }
}

/// `<D_f, U_e>` on the in side or `<V_e, G_f>` on the out side: the identity.
pub fn delta_pairing(triad: &SurfaceTriad, side: Side, ctx: &Arc<RingContext>) -> PairingMatrix {
    let left = basis(triad, side, Flavour::LocallyFinite);
    let right = basis(triad, side, Flavour::Relative);
    let matrix = Matrix::identity(ctx, left.len());
    PairingMatrix { side, left_flavour: Flavour::LocallyFinite, right_flavour: Flavour::Relative, left, right, matrix }
}

/// One transverse intersection point of two multi-arc classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionPoint {
    /// `matchings[i][a] = b`: the `a`-th red point on arc `i` meets the
    /// `b`-th green point on the same arc.
    pub matchings: Vec<Vec<usize>>,
    pub sign: i8,
    #[serde(serialize_with = "ser_element")]
    pub monodromy: GroupRingElement,
}

fn ser_element<S: serde::Serializer>(v: &GroupRingElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn inversions(perm: &[usize]) -> usize {
    (0..perm.len()).map(|i| (i + 1..perm.len()).filter(|&j| perm[i] > perm[j]).count()).sum()
}

fn unit_power(u: &GroupRingElement, k: usize) -> GroupRingElement { u.pow(k as u32) }

/// All intersection points between the red class on `e` and the green class
/// on `f`; empty unless the points sit on the same arcs in the same numbers.
pub fn intersection_points(e: &Composition, f: &Composition, u: &GroupRingElement) -> Result<Vec<IntersectionPoint>> {
    if e.len() != f.len() {
        return Err(Error::Dimension(format!("compositions {e} and {f} have different lengths")));
    }
    // each red point must land on a green point of its own arc
    if e.parts().iter().zip(f.parts()).any(|(a, b)| a != b) {
        return Ok(Vec::new());
    }
    let per_arc: Vec<Vec<Vec<usize>>> =
        e.parts().iter().map(|&r| (0..r as usize).permutations(r as usize).collect()).collect();
    let points = per_arc
        .into_iter()
        .multi_cartesian_product()
        .map(|matchings| {
            let inv: usize = matchings.iter().map(|p| inversions(p)).sum();
            IntersectionPoint { matchings, sign: 1, monodromy: unit_power(u, inv) }
        })
        .collect::<Vec<_>>();
    // multi_cartesian_product of zero factors yields nothing; l >= 1 always
    Ok(points)
}

/// `sum_{s in S_r} u^{inv(s)}`, computed by enumeration.
pub fn local_intersection_sum(r: u32, u: &GroupRingElement) -> GroupRingElement {
    let mut acc = GroupRingElement::zero(u.context());
    for p in (0..r as usize).permutations(r as usize) {
        acc = &acc + &unit_power(u, inversions(&p));
    }
    acc
}

/// `<left, right>` by summing over intersection points. `left` must be an
/// lf-image class (`U~_e` when `side = out`, `G~_e` when `side = in`) and
/// `right` a relative class on the same side.
pub fn geometric_pairing(
    triad: &SurfaceTriad,
    side: Side,
    left: &BasisClass,
    right: &BasisClass,
    system: &LocalSystemSpec,
) -> Result<GroupRingElement> {
    if left.flavour != Flavour::LfImage || right.flavour != Flavour::Relative {
        return Err(Error::Precondition(format!("geometric pairing expects (lf-image, relative) classes, got {left} and {right}")));
    }
    if left.side != side || right.side != side {
        return Err(Error::Precondition(format!("classes {left} and {right} are not both on the {side} side")));
    }
    let l = triad.arc_count();
    for c in [&left.composition, &right.composition] {
        if c.len() != l {
            return Err(Error::Dimension(format!("composition {c} has length {}, the triad has {l} arcs", c.len())));
        }
        if c.total() != triad.points {
            return Err(Error::Precondition(format!("composition {c} does not sum to m = {}", triad.points)));
        }
    }
    let ctx = system.context();
    let mut acc = GroupRingElement::zero(ctx);
    for p in intersection_points(&left.composition, &right.composition, system.u())? {
        let term = if p.sign < 0 { -&p.monodromy } else { p.monodromy.clone() };
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

/// The full matrix of [`geometric_pairing`] in basis order.
pub fn geometric_pairing_matrix(triad: &SurfaceTriad, side: Side, system: &LocalSystemSpec) -> Result<PairingMatrix> {
    let left = basis(triad, side, Flavour::LfImage);
    let right = basis(triad, side, Flavour::Relative);
    let n = left.len();
    let mut matrix = Matrix::zeros(system.context(), n, n);
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            matrix.set(i, j, geometric_pairing(triad, side, a, b, system)?);
        }
    }
    Ok(PairingMatrix { side, left_flavour: Flavour::LfImage, right_flavour: Flavour::Relative, left, right, matrix })
}
