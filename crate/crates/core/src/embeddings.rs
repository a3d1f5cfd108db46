//! The maps from relative to locally-finite homology, which are diagonal in
//! the standard bases with entries `Π_i [e_i]_u!`, plus injectivity
//! certificates and explicit witnesses that the image is a proper submodule.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::combinatorics::Composition;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{quantum_factorial_product, GroupRingElement};
use crate::surface::{BasisClass, Flavour, LocalSystemSpec, Side, SurfaceTriad};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// relative on the in side to locally-finite on the out side: `U_e -> U~_e`
    #[serde(rename = "in")]
    InToOutLf,
    /// relative on the out side to locally-finite on the in side: `G_e -> G~_e`
    #[serde(rename = "out")]
    OutToInLf,
}

impl Direction {
    pub fn source_side(self) -> Side {
        match self {
            Direction::InToOutLf => Side::In,
            Direction::OutToInLf => Side::Out,
        }
    }

    pub fn target_side(self) -> Side { self.source_side().opposite() }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { write!(f, "{}", self.source_side()) }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Direction::InToOutLf),
            "out" => Ok(Direction::OutToInLf),
            _ => Err(Error::Parse(format!("direction must be 'in' or 'out', got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    pub direction: Direction,
    pub triad: SurfaceTriad,
    pub system: LocalSystemSpec,
    pub compositions: Vec<Composition>,
    pub diagonal: Vec<GroupRingElement>,
}

impl EmbeddingMatrix {
    pub fn to_matrix(&self) -> Matrix { Matrix::diagonal(self.system.context(), &self.diagonal) }

    pub fn is_identity(&self) -> bool { self.diagonal.iter().all(GroupRingElement::is_one) }

    /// Applies the map to a coordinate vector.
    pub fn apply(&self, v: &[GroupRingElement]) -> Result<Vec<GroupRingElement>> {
        if v.len() != self.diagonal.len() {
            return Err(Error::Dimension(format!("vector of length {} for a map of size {}", v.len(), self.diagonal.len())));
        }
        self.diagonal.iter().zip(v).map(|(a, b)| a.checked_mul(b)).collect()
    }

    /// Label of the target basis vector at position `i` (`V_e` or `D_e`).
    pub fn target_class(&self, i: usize) -> BasisClass {
        BasisClass { side: self.direction.target_side(), flavour: Flavour::LocallyFinite, composition: self.compositions[i].clone() }
    }

    /// Label of the image of the `i`-th source basis vector (`U~_e` or `G~_e`).
    pub fn image_class(&self, i: usize) -> BasisClass {
        BasisClass { side: self.direction.target_side(), flavour: Flavour::LfImage, composition: self.compositions[i].clone() }
    }
}

pub fn embedding_matrix(triad: &SurfaceTriad, direction: Direction, system: &LocalSystemSpec) -> Result<EmbeddingMatrix> {
    if system.points() != triad.points {
        return Err(Error::Precondition(format!(
            "local system built for m = {} used on a triad with m = {}",
            system.points(),
            triad.points
        )));
    }
    let compositions = triad.compositions();
    let diagonal = compositions
        .iter()
        .map(|e| quantum_factorial_product(e.parts(), system.u()))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddingMatrix { direction, triad: *triad, system: system.clone(), compositions, diagonal })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingEntry {
    pub index: usize,
    pub composition: Composition,
    pub entry: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityCertificate {
    pub injective: bool,
    /// Diagonal entries that are zero divisors (zero, since `R` is a domain).
    pub vanishing: Vec<VanishingEntry>,
}

/// A diagonal map of free modules over a domain is injective iff every
/// diagonal entry is nonzero.
pub fn certify_injective(e: &EmbeddingMatrix) -> Result<InjectivityCertificate> {
    let mut vanishing = Vec::new();
    for (i, (d, c)) in e.diagonal.iter().zip(&e.compositions).enumerate() {
        if !d.is_non_zero_divisor()? {
            vanishing.push(VanishingEntry { index: i, composition: c.clone(), entry: d.to_string() });
        }
    }
    Ok(InjectivityCertificate { injective: vanishing.is_empty(), vanishing })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducibilityWitness {
    /// Scalars `c_e` such that the image is spanned by `c_e * V_e`.
    pub generators: Vec<(Composition, String)>,
    /// A target basis vector outside the image.
    pub witness: BasisClass,
    pub witness_index: usize,
    /// The non-unit diagonal entry at the witness.
    pub entry: String,
}

/// Exhibits a basis vector `V_e` (or `D_e`) outside the image: since the map
/// is diagonal and injective, `V_e` lies in the image iff its entry is a
/// unit. Returns `None` for `m = 1`, for non-injective maps, and when every
/// entry is a unit.
pub fn reducibility_witness(e: &EmbeddingMatrix) -> Result<Option<ReducibilityWitness>> {
    if e.triad.points <= 1 {
        return Ok(None);
    }
    if !certify_injective(e)?.injective {
        return Ok(None);
    }
    for (i, d) in e.diagonal.iter().enumerate() {
        if !d.is_unit()? {
            let generators = e.compositions.iter().cloned().zip(e.diagonal.iter().map(ToString::to_string)).collect();
            return Ok(Some(ReducibilityWitness { generators, witness: e.target_class(i), witness_index: i, entry: d.to_string() }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, CoefficientRing};

    #[test]
    fn diagonals() {
        let t = SurfaceTriad::new(0, 3, 0, 2).unwrap();
        let s = LocalSystemSpec::standard(2, CoefficientRing::Integers).unwrap();
        let e = embedding_matrix(&t, Direction::InToOutLf, &s).unwrap();
        let txt: Vec<String> = e.diagonal.iter().map(ToString::to_string).collect();
        assert_eq!(txt, vec!["1 + d", "1", "1 + d"]);
        assert!(e.to_matrix().is_diagonal());
        let t1 = SurfaceTriad::new(0, 2, 0, 3).unwrap();
        let s3 = LocalSystemSpec::standard(3, CoefficientRing::Integers).unwrap();
        let e = embedding_matrix(&t1, Direction::OutToInLf, &s3).unwrap();
        assert_eq!(e.diagonal[0], parse(s3.context(), "1 + 2*d + 2*d^2 + d^3").unwrap());
        let s1 = LocalSystemSpec::standard(1, CoefficientRing::Integers).unwrap();
        let t = SurfaceTriad::new(1, 2, 1, 1).unwrap();
        assert!(embedding_matrix(&t, Direction::InToOutLf, &s1).unwrap().is_identity());
    }

    #[test]
    fn injectivity_and_witness() {
        let t = SurfaceTriad::new(0, 3, 0, 2).unwrap();
        let s = LocalSystemSpec::standard(2, CoefficientRing::Integers).unwrap();
        let e = embedding_matrix(&t, Direction::InToOutLf, &s).unwrap();
        assert!(certify_injective(&e).unwrap().injective);
        let w = reducibility_witness(&e).unwrap().unwrap();
        assert_eq!(w.witness.to_string(), "V[2,0]@out");
        assert_eq!(w.entry, "1 + d");

        let q = CoefficientRing::Rationals;
        let s = LocalSystemSpec::with_swap_value(2, q.clone(), q.from_i64(-1)).unwrap();
        let e = embedding_matrix(&t, Direction::InToOutLf, &s).unwrap();
        let cert = certify_injective(&e).unwrap();
        assert!(!cert.injective);
        assert_eq!(cert.vanishing[0].composition.parts(), &[2, 0]);
        assert_eq!(cert.vanishing[0].entry, "0");

        let c = LocalSystemSpec::with_swap_value(2, CoefficientRing::complex(), CoefficientRing::complex().from_i64(2)).unwrap();
        let e = embedding_matrix(&t, Direction::InToOutLf, &c).unwrap();
        assert!(matches!(certify_injective(&e), Err(Error::UnsupportedCoefficients(_))));
    }
}
