//! Finite chain complexes with rank-one local coefficients, specialisation to
//! scalar fields, the circle complex `R --(1-m)--> R`, Shapiro-lemma checks
//! on small coverings of the circle, and the genericity test for the
//! punctured disc.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{scalar_rank, smith_invariants, Matrix};
use crate::ring::{parse, Coeff, CoefficientRing, GroupRingElement, RingContext};
use crate::surface::{LocalSystemSpec, SurfaceTriad};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexDirection {
    /// `boundaries[k] : C_{k+1} -> C_k`
    Homological,
    /// `boundaries[k] : C^k -> C^{k+1}`
    Cohomological,
}

#[derive(Debug, Clone)]
pub struct FiniteChainComplex {
    ctx: Arc<RingContext>,
    ranks: Vec<usize>,
    boundaries: Vec<Matrix>,
    direction: ComplexDirection,
}

impl FiniteChainComplex {
    /// Validates shapes and `d∘d = 0`.
    pub fn new(ctx: &Arc<RingContext>, ranks: Vec<usize>, boundaries: Vec<Matrix>, direction: ComplexDirection) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Precondition("a chain complex needs at least one degree".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::Dimension(format!("{} degrees need {} boundary maps, got {}", ranks.len(), ranks.len() - 1, boundaries.len())));
        }
        for (k, b) in boundaries.iter().enumerate() {
            let (rows, cols) = match direction {
                ComplexDirection::Homological => (ranks[k], ranks[k + 1]),
                ComplexDirection::Cohomological => (ranks[k + 1], ranks[k]),
            };
            if b.rows() != rows || b.cols() != cols {
                return Err(Error::Dimension(format!("map {k} is {}x{}, expected {rows}x{cols}", b.rows(), b.cols())));
            }
        }
        let c = Self { ctx: ctx.clone(), ranks, boundaries, direction };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 0..self.boundaries.len().saturating_sub(1) {
            let composite = match self.direction {
                ComplexDirection::Homological => self.boundaries[k].mul(&self.boundaries[k + 1])?,
                ComplexDirection::Cohomological => self.boundaries[k + 1].mul(&self.boundaries[k])?,
            };
            if !composite.is_zero() {
                return Err(Error::Precondition(format!("d∘d is nonzero between maps {k} and {}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &Arc<RingContext> { &self.ctx }

    pub fn ranks(&self) -> &[usize] { &self.ranks }

    pub fn boundaries(&self) -> &[Matrix] { &self.boundaries }

    pub fn direction(&self) -> ComplexDirection { self.direction }

    /// The complex `R --(1-m)--> R` computing the (co)homology of a circle
    /// with monodromy `m`.
    pub fn circle(monodromy: &GroupRingElement, direction: ComplexDirection) -> Self {
        let ctx = monodromy.context();
        let d = &GroupRingElement::one(ctx) - monodromy;
        Self { ctx: ctx.clone(), ranks: vec![1, 1], boundaries: vec![Matrix::diagonal(ctx, &[d])], direction }
    }

    /// Ranks of (co)homology in each degree after specialising every variable.
    pub fn ranks_over(&self, ring: &CoefficientRing, values: &[Coeff]) -> Result<Vec<usize>> {
        let target = RingContext::new(0, ring.clone());
        let images: Vec<_> = values.iter().map(|v| GroupRingElement::constant(&target, v.clone())).collect();
        let mut map_ranks = Vec::with_capacity(self.boundaries.len());
        let mut specialised = Vec::with_capacity(self.boundaries.len());
        for b in &self.boundaries {
            let s = b.substitute(&target, &images)?;
            let rows: Vec<Vec<Coeff>> = (0..s.rows()).map(|i| s.row(i).iter().map(|v| v.coefficient(&[])).collect()).collect();
            map_ranks.push(scalar_rank(ring, &rows)?);
            specialised.push(s);
        }
        if ring.is_exact() {
            let again = Self { ctx: target.clone(), ranks: self.ranks.clone(), boundaries: specialised, direction: self.direction };
            again.check_square_zero().map_err(|e| Error::Internal(format!("specialised complex: {e}")))?;
        }
        // degree k sees the map into it and the map out of it
        Ok((0..self.ranks.len())
            .map(|k| {
                let (into, out) = match self.direction {
                    ComplexDirection::Homological => (map_ranks.get(k).copied(), k.checked_sub(1).map(|j| map_ranks[j])),
                    ComplexDirection::Cohomological => (k.checked_sub(1).map(|j| map_ranks[j]), map_ranks.get(k).copied()),
                };
                self.ranks[k] - into.unwrap_or(0) - out.unwrap_or(0)
            })
            .collect())
    }
}

/// An assignment of nonzero scalars to the variables of the ring.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializationPoint {
    ring: CoefficientRing,
    values: BTreeMap<String, Coeff>,
}

impl SpecializationPoint {
    pub fn new(ring: CoefficientRing, values: BTreeMap<String, Coeff>) -> Result<Self> {
        if matches!(ring, CoefficientRing::Integers) {
            return Err(Error::UnsupportedCoefficients("specialisation targets must be fields".into()));
        }
        for (k, v) in &values {
            if ring.is_zero(v) {
                return Err(Error::Precondition(format!("{k} is sent to zero, which is not a unit")));
            }
        }
        Ok(Self { ring, values })
    }

    /// Parses `x=2,d=-1/3` (or complex literals such as `x=(0+1i)`).
    pub fn parse(ring: CoefficientRing, s: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
            values.insert(k.trim().to_string(), ring.parse(v.trim())?);
        }
        Self::new(ring, values)
    }

    pub fn ring(&self) -> &CoefficientRing { &self.ring }

    pub fn get(&self, name: &str) -> Option<&Coeff> { self.values.get(name) }

    /// Values in the variable order of `ctx`.
    pub fn values_for(&self, ctx: &RingContext) -> Result<Vec<Coeff>> {
        ctx.names()
            .iter()
            .map(|n| {
                let v = self.values.get(n).ok_or_else(|| Error::Precondition(format!("no value given for {n}")))?;
                self.ring.map_from(&self.ring, v)
            })
            .collect()
    }
}

pub fn homology_ranks_at(complex: &FiniteChainComplex, theta: &SpecializationPoint) -> Result<Vec<usize>> {
    let values = theta.values_for(complex.context())?;
    complex.ranks_over(theta.ring(), &values)
}

/// A module over `R` described by a presentation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleDescription {
    Zero,
    /// `R` itself.
    Free,
    /// `R / <relation>`.
    Quotient { relation: String },
}

impl fmt::Display for ModuleDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleDescription::Zero => f.write_str("0"),
            ModuleDescription::Free => f.write_str("R"),
            ModuleDescription::Quotient { relation } => write!(f, "R/<{relation}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleCohomology {
    pub differential: String,
    pub h0: ModuleDescription,
    pub h1: ModuleDescription,
}

/// Cohomology of `R --(1-m)--> R`: `H^0 = ker`, `H^1 = R/<1-m>`. Since `R`
/// is a domain the kernel vanishes unless `1 - m = 0`.
pub fn circle_cohomology(monodromy: &GroupRingElement) -> Result<CircleCohomology> {
    if !monodromy.is_unit()? {
        return Err(Error::Precondition(format!("monodromy {monodromy} is not a unit")));
    }
    let d = &GroupRingElement::one(monodromy.context()) - monodromy;
    let (h0, h1) = if d.is_zero() {
        (ModuleDescription::Free, ModuleDescription::Free)
    } else if d.is_unit()? {
        (ModuleDescription::Zero, ModuleDescription::Zero)
    } else {
        (ModuleDescription::Zero, ModuleDescription::Quotient { relation: d.to_string() })
    };
    Ok(CircleCohomology { differential: d.to_string(), h0, h1 })
}

/// A finitely generated module over the coefficient ring `k`: `k^free`
/// plus cyclic torsion (only over `Z`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KModule {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl fmt::Display for KModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("k^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("k/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Kernel and cokernel of an integer matrix viewed over `k`.
fn kernel_cokernel(k: &CoefficientRing, rows: &[Vec<i64>], ncols: usize) -> Result<(KModule, KModule)> {
    let nrows = rows.len();
    match k {
        CoefficientRing::Integers => {
            let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            let inv = smith_invariants(&big);
            let r = inv.len();
            let torsion = inv.iter().filter(|d| !d.is_one()).map(ToString::to_string).collect();
            Ok((KModule { free_rank: ncols - r, torsion: vec![] }, KModule { free_rank: nrows - r, torsion }))
        }
        CoefficientRing::ComplexApprox { .. } => Err(Error::UnsupportedCoefficients("Shapiro check needs exact coefficients".into())),
        _ => {
            let coeffs: Vec<Vec<Coeff>> = rows.iter().map(|r| r.iter().map(|&v| k.from_i64(v)).collect()).collect();
            let r = if nrows == 0 { 0 } else { scalar_rank(k, &coeffs)? };
            Ok((KModule { free_rank: ncols - r, torsion: vec![] }, KModule { free_rank: nrows - r, torsion: vec![] }))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapiroVerdict {
    pub coefficients: String,
    /// `[H_0, H_1]` of the circle with coefficients in the group ring.
    pub twisted: [KModule; 2],
    /// `[H_0, H_1]` of the covering space with coefficients in `k`.
    pub covering: [KModule; 2],
    pub matches: bool,
}

/// `H_*(S^1; k[Z])` from `k[x^{+-1}] --(1-x)--> k[x^{+-1}]` against
/// `H_*(R; k)` of the universal cover.
///
/// The twisted side: `1 - x` is a nonzero element of a domain, so the kernel
/// is zero; the cokernel `k[x^{+-1}]/(1-x)` is free over `k` on
/// `1, x, ..., x^{s-1}` where `s` is the exponent span, because the extreme
/// coefficients are units. The cover side: ordinary homology of the line is
/// the colimit over segments `[-N, N]`, and is already attained at `N = 1`;
/// it is computed from the cellular complex of a segment.
pub fn shapiro_circle_check(k: &CoefficientRing) -> Result<ShapiroVerdict> {
    let ctx = RingContext::new(1, k.clone());
    let diff = &GroupRingElement::one(&ctx) - &GroupRingElement::variable(&ctx, 0);
    let h1 = if diff.is_non_zero_divisor()? { 0 } else { 1 };
    let exps: Vec<i64> = diff.terms().keys().map(|e| e[0]).collect();
    let (lo, hi) = (exps[0], exps[exps.len() - 1]);
    let extreme_units = [lo, hi].iter().all(|&e| k.is_unit(&diff.coefficient(&[e])));
    if !extreme_units {
        return Err(Error::Internal("1 - x has non-unit extreme coefficients".into()));
    }
    let twisted = [KModule { free_rank: (hi - lo) as usize, torsion: vec![] }, KModule { free_rank: h1, torsion: vec![] }];

    // segment with vertices -N..N and edges [j, j+1]
    let n = 3i64;
    let verts = (2 * n + 1) as usize;
    let edges = (2 * n) as usize;
    let rows: Vec<Vec<i64>> = (0..verts)
        .map(|v| (0..edges).map(|e| if v == e + 1 { 1 } else if v == e { -1 } else { 0 }).collect())
        .collect();
    let (ker, coker) = kernel_cokernel(k, &rows, edges)?;
    let covering = [coker, ker];
    let matches = twisted == covering;
    Ok(ShapiroVerdict { coefficients: k.name(), twisted, covering, matches })
}

/// The same comparison for the connected `N`-fold cover of the circle,
/// using `k[Z/N]` coefficients: the twisted side is multiplication by
/// `1 - x` on `k[Z/N] = k^N`; the covering is a circle built from `N`
/// vertices and `N` edges.
pub fn shapiro_finite_cover_check(k: &CoefficientRing, order: usize) -> Result<ShapiroVerdict> {
    if order == 0 {
        return Err(Error::Precondition("cover order must be positive".into()));
    }
    // column j is the image of x^j: x^j - x^{j+1}
    let mut twisted_rows = vec![vec![0i64; order]; order];
    for j in 0..order {
        twisted_rows[j][j] += 1;
        twisted_rows[(j + 1) % order][j] -= 1;
    }
    let (tk, tc) = kernel_cokernel(k, &twisted_rows, order)?;
    // cellular boundary of the N-gon: edge j runs from vertex j to vertex j+1
    let mut cover_rows = vec![vec![0i64; order]; order];
    for e in 0..order {
        cover_rows[(e + 1) % order][e] += 1;
        cover_rows[e][e] -= 1;
    }
    let (ck, cc) = kernel_cokernel(k, &cover_rows, order)?;
    let twisted = [tc, tk];
    let covering = [cc, ck];
    let matches = twisted == covering;
    Ok(ShapiroVerdict { coefficients: k.name(), twisted, covering, matches })
}

/// `v` is a generic value for a monodromy: nonzero and different from 1.
pub fn is_generic_value(ring: &CoefficientRing, v: &Coeff) -> bool { !ring.is_zero(v) && !ring.is_one(v) }

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityVerdict {
    pub generic: bool,
    pub reasons: Vec<String>,
}

/// For the punctured disc the loops escaping every compact set are generated
/// by `x` (and `d` when `m >= 2`), so the system is generic iff `θ(x)` and,
/// for `m >= 2`, `θ(d)` avoid `{0, 1}`. A generic verdict means ordinary
/// and locally-finite homology agree. Other triads are unsupported.
pub fn genericity_check(triad: &SurfaceTriad, system: &LocalSystemSpec, theta: &SpecializationPoint) -> Result<GenericityVerdict> {
    if !triad.is_punctured_disc() {
        return Err(Error::Unsupported(format!("genericity is only decided for the punctured disc (g = k = 0), not {triad}")));
    }
    if system.points() != triad.points {
        return Err(Error::Precondition(format!("local system for m = {} used with m = {}", system.points(), triad.points)));
    }
    let ring = theta.ring();
    let mut names = vec!["x"];
    if triad.points >= 2 {
        names.push("d");
    }
    let mut reasons = Vec::new();
    for n in names {
        let v = theta.get(n).ok_or_else(|| Error::Precondition(format!("θ must assign {n}")))?;
        if !is_generic_value(ring, v) {
            reasons.push(format!("θ({n}) = {} lies in {{0, 1}}, so 1 - θ({n}) is not a unit", ring.format(v)));
        }
    }
    Ok(GenericityVerdict { generic: reasons.is_empty(), reasons })
}

/// JSON file format for `homology --complex`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default = "one")]
    pub schema: u32,
    #[serde(default = "default_coefficients")]
    pub coefficients: String,
    pub variables: Vec<String>,
    pub direction: ComplexDirection,
    pub ranks: Vec<usize>,
    /// Each map as rows of canonical-text entries.
    pub boundaries: Vec<Vec<Vec<String>>>,
}

fn one() -> u32 { 1 }

fn default_coefficients() -> String { "Z".into() }

impl ComplexFile {
    pub fn build(&self) -> Result<FiniteChainComplex> {
        if self.schema != 1 {
            return Err(Error::Parse(format!("unsupported complex schema {}", self.schema)));
        }
        let names: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        let ctx = RingContext::with_names(CoefficientRing::from_name(&self.coefficients)?, &names)?;
        let maps = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let parsed = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse(&ctx, s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let expected_cols = match self.direction {
                    ComplexDirection::Homological => self.ranks.get(k + 1),
                    ComplexDirection::Cohomological => self.ranks.get(k),
                };
                if parsed.is_empty() {
                    // a map into the zero module
                    return Ok(Matrix::zeros(&ctx, 0, expected_cols.copied().unwrap_or(0)));
                }
                Matrix::from_rows(&ctx, parsed)
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteChainComplex::new(&ctx, self.ranks.clone(), maps, self.direction)
    }
}
