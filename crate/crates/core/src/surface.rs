//! Surface triads, their labelled bases, and rank-one local systems.
//!
//! A triad is recorded by genus `g`, the number `n` of inner boundary circles,
//! the number `k` of intervals on the outer boundary circle, and the number
//! `m` of configuration points. Every basis is indexed by `E_{l,m}` with
//! `l = n - 1 + k + 2g` arcs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{count_compositions, enumerate_compositions, Composition};
use crate::error::{Error, Result};
use crate::ring::{Coeff, CoefficientRing, GroupRingElement, RingContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceTriad {
    pub genus: u32,
    pub inner_circles: u32,
    pub outer_intervals: u32,
    pub points: u32,
}

impl SurfaceTriad {
    pub fn new(genus: u32, inner_circles: u32, outer_intervals: u32, points: u32) -> Result<Self> {
        if inner_circles == 0 {
            return Err(Error::Precondition("a triad needs at least one inner boundary circle (n >= 1)".into()));
        }
        if points == 0 {
            return Err(Error::Precondition("the number of points m must be positive".into()));
        }
        let t = Self { genus, inner_circles, outer_intervals, points };
        if t.arc_count() == 0 {
            return Err(Error::Precondition("arc count l = n - 1 + k + 2g must be at least 1".into()));
        }
        Ok(t)
    }

    /// The braid-group case: a disc with `n` punctures, `g = k = 0`.
    pub fn punctured_disc(n: u32, m: u32) -> Result<Self> { Self::new(0, n, 0, m) }

    pub fn arc_count(&self) -> usize { (self.inner_circles - 1 + self.outer_intervals + 2 * self.genus) as usize }

    pub fn dimension(&self) -> u64 { count_compositions(self.arc_count(), self.points) }

    pub fn compositions(&self) -> Vec<Composition> {
        enumerate_compositions(self.arc_count(), self.points).expect("arc count is positive")
    }

    pub fn is_punctured_disc(&self) -> bool { self.genus == 0 && self.outer_intervals == 0 }
}

/// `C(m + l - 1, m)`.
pub fn dimension(triad: &SurfaceTriad) -> u64 { triad.dimension() }

impl fmt::Display for SurfaceTriad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, n={}, k={}, m={})", self.genus, self.inner_circles, self.outer_intervals, self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::In => "in",
            Side::Out => "out",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Side::In),
            "out" => Ok(Side::Out),
            _ => Err(Error::Parse(format!("side must be 'in' or 'out', got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavour {
    Relative,
    LocallyFinite,
    /// Image of a relative class under the map to locally-finite homology
    /// on the other side.
    LfImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisClass {
    pub side: Side,
    pub flavour: Flavour,
    pub composition: Composition,
}

impl BasisClass {
    /// `U`, `D`, `V`, `G`, `U~` or `G~`.
    pub fn letter(&self) -> &'static str {
        match (self.side, self.flavour) {
            (Side::In, Flavour::Relative) => "U",
            (Side::In, Flavour::LocallyFinite) => "D",
            (Side::Out, Flavour::LocallyFinite) => "V",
            (Side::Out, Flavour::Relative) => "G",
            // U_e is relative on the in side; its lf image lives on the out side
            (Side::Out, Flavour::LfImage) => "U~",
            (Side::In, Flavour::LfImage) => "G~",
        }
    }
}

impl fmt::Display for BasisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}@{}", self.letter(), self.composition, self.side)
    }
}

pub fn basis(triad: &SurfaceTriad, side: Side, flavour: Flavour) -> Vec<BasisClass> {
    triad.compositions().into_iter().map(|composition| BasisClass { side, flavour, composition }).collect()
}

/// A rank-one local system on the configuration space, recorded by the
/// images of the puncture loop `x`, the swap loop `d`, and the homogeneity
/// unit `u` (the image of every small swap).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSystemSpec {
    ctx: Arc<RingContext>,
    points: u32,
    x: GroupRingElement,
    d: Option<GroupRingElement>,
    u: GroupRingElement,
}

impl LocalSystemSpec {
    /// Over `k[x^{+-1}]` for `m = 1` (with `u = 1`) and over
    /// `k[x^{+-1}, d^{+-1}]` with `u = d` otherwise.
    pub fn standard(points: u32, coefficients: CoefficientRing) -> Result<Self> {
        if points == 0 {
            return Err(Error::Precondition("m must be positive".into()));
        }
        if points == 1 {
            let ctx = RingContext::new(1, coefficients);
            let x = GroupRingElement::variable(&ctx, 0);
            let u = GroupRingElement::one(&ctx);
            Ok(Self { ctx, points, x, d: None, u })
        } else {
            let ctx = RingContext::new(2, coefficients);
            let x = GroupRingElement::variable(&ctx, 0);
            let d = GroupRingElement::variable(&ctx, 1);
            Ok(Self { ctx, points, x, d: Some(d.clone()), u: d })
        }
    }

    /// The standard system with the swap monodromy specialised to a scalar:
    /// the ring becomes `k[x^{+-1}]` and `d = u = value`.
    pub fn with_swap_value(points: u32, coefficients: CoefficientRing, value: Coeff) -> Result<Self> {
        let ctx = RingContext::new(1, coefficients);
        let x = GroupRingElement::variable(&ctx, 0);
        let u = GroupRingElement::constant(&ctx, value);
        if points == 1 {
            return Self::new(ctx.clone(), points, x, None, GroupRingElement::one(&ctx));
        }
        Self::new(ctx, points, x, Some(u.clone()), u)
    }

    /// General constructor; `u` must be a unit, and must be 1 when `m = 1`.
    pub fn new(
        ctx: Arc<RingContext>,
        points: u32,
        x: GroupRingElement,
        d: Option<GroupRingElement>,
        u: GroupRingElement,
    ) -> Result<Self> {
        if points == 0 {
            return Err(Error::Precondition("m must be positive".into()));
        }
        for v in std::iter::once(&x).chain(d.iter()).chain(std::iter::once(&u)) {
            if !v.same_context(&GroupRingElement::zero(&ctx)) {
                return Err(Error::ContextMismatch(format!("monodromy {v} lives in another ring")));
            }
        }
        if points == 1 && !u.is_one() {
            return Err(Error::Precondition("homogeneity is vacuous for m = 1, so u must be 1".into()));
        }
        let unit = if ctx.coefficients().is_integral_domain() { u.is_unit()? } else { u.unit_inverse()?.is_some() };
        if !unit {
            return Err(Error::Precondition(format!("homogeneity parameter u = {u} is not a unit")));
        }
        Ok(Self { ctx, points, x, d, u })
    }

    pub fn context(&self) -> &Arc<RingContext> { &self.ctx }

    pub fn lattice_rank(&self) -> usize { self.ctx.rank() }

    pub fn points(&self) -> u32 { self.points }

    pub fn x(&self) -> &GroupRingElement { &self.x }

    pub fn d(&self) -> Option<&GroupRingElement> { self.d.as_ref() }

    pub fn u(&self) -> &GroupRingElement { &self.u }
}
