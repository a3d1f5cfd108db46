//! Reduced Burau (`m = 1`) and Lawrence-Krammer-Bigelow (`m = 2`) matrices
//! for the punctured disc, in the multi-arc basis indexed by `E_{n-1,m}`.
//!
//! Matrices act on column vectors: `σ_i v_e = Σ_f ρ(σ_i)[f][e] v_f`. A word
//! `w_1 w_2 ... w_k` evaluates to the product `ρ(w_1) ρ(w_2) ... ρ(w_k)`.
//! `x` is the puncture monodromy and `d` the swap monodromy (the classical
//! `q` and `t`).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::combinatorics::{enumerate_compositions, rank, Composition};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{quantum_factorial_product, Coeff, CoefficientRing, GroupRingElement, RingContext};

pub const CONVENTION: &str = "multi-arc basis, column action, q=x t=d";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Precondition(format!("braid words need n >= 2 strands, got {strands}")));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(Error::OutOfRange(format!("letter {l} outside +-1..+-{}", strands - 1)));
            }
        }
        Ok(Self { strands, letters })
    }

    /// Parses `"1,2,-1"`; the empty string is the empty word.
    pub fn parse(strands: u32, s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| Error::Parse(format!("bad braid letter {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> u32 { self.strands }

    pub fn letters(&self) -> &[i32] { &self.letters }

    pub fn inverse(&self) -> Self {
        Self { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::Precondition("words on different strand counts".into()));
        }
        Ok(Self { strands: self.strands, letters: self.letters.iter().chain(&other.letters).copied().collect() })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters.iter().map(i32::to_string).collect::<Vec<_>>().join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub strands: u32,
    pub points: u32,
    pub convention: &'static str,
    pub matrix: Matrix,
}

impl RepMatrix {
    /// Evaluates `x`, `d` (in that order; only `x` for `m = 1`) at scalars.
    pub fn specialize(&self, values: &[Coeff], target: &CoefficientRing) -> Result<Matrix> {
        let ctx = RingContext::new(0, target.clone());
        let images: Vec<_> = values.iter().map(|v| GroupRingElement::constant(&ctx, v.clone())).collect();
        self.matrix.substitute(&ctx, &images)
    }
}

/// The ring of the representation: `Z[x^{+-1}]` for `m = 1`,
/// `Z[x^{+-1}, d^{+-1}]` for `m = 2`.
pub fn rep_context(m: u32) -> Result<Arc<RingContext>> {
    match m {
        1 => Ok(RingContext::new(1, CoefficientRing::Integers)),
        2 => Ok(RingContext::new(2, CoefficientRing::Integers)),
        _ => Err(Error::Unsupported(format!("explicit matrices exist only for m in {{1, 2}}, got m = {m}"))),
    }
}

fn check_generator(n: u32, i: u32, m: u32) -> Result<()> {
    rep_context(m)?;
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    if i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("generator index {i} outside 1..{}", n - 1)));
    }
    Ok(())
}

// Terms are (arc pair, coefficient monomial x^a d^b with integer coefficient).
type Term = ((u32, u32), i64, i64, i64);

/// Image of the basis vector with points on arcs `a <= b` (1-based; `a == b`
/// means both points on one arc) under `σ_i`, for `m = 2`.
fn lkb_image(i: u32, a: u32, b: u32) -> Vec<Term> {
    let (im, ip) = (i.wrapping_sub(1), i + 1);
    if a == b {
        return if a == im {
            vec![((im, im), 1, 0, 0), ((im, i), 1, 1, 0), ((i, i), 1, 2, -1)]
        } else if a == i {
            vec![((i, i), 1, 2, 1)]
        } else if a == ip {
            vec![((ip, ip), 1, 0, 0), ((i, ip), 1, 0, 1), ((i, i), 1, 0, 1)]
        } else {
            vec![((a, a), 1, 0, 0)]
        };
    }
    if i >= 2 && a == im {
        return if b == i {
            vec![((im, i), -1, 1, 0), ((i, i), -1, 2, -1), ((i, i), -1, 2, 0)]
        } else if b == ip {
            vec![((im, i), 1, 0, 1), ((im, ip), 1, 0, 0), ((i, i), 1, 1, 0), ((i, i), 1, 1, 1), ((i, ip), 1, 1, 0)]
        } else {
            vec![((im, b), 1, 0, 0), ((i, b), 1, 1, 0)]
        };
    }
    if a == i {
        return if b == ip {
            vec![((i, ip), -1, 1, 0), ((i, i), -1, 1, 0), ((i, i), -1, 1, 1)]
        } else {
            vec![((i, b), -1, 1, 0)]
        };
    }
    if a == ip {
        return vec![((ip, b), 1, 0, 0), ((i, b), 1, 0, 0)];
    }
    if i >= 2 && a < im {
        if b == im {
            return vec![((a, im), 1, 0, 0), ((a, i), 1, 1, -1)];
        } else if b == i {
            return vec![((a, i), -1, 1, 0)];
        } else if b == ip {
            return vec![((a, ip), 1, 0, 0), ((a, i), 1, 0, 1)];
        }
    }
    vec![((a, b), 1, 0, 0)]
}

/// Reduced Burau image of arc `a` (1-based) under `σ_i`.
fn burau_image(i: u32, a: u32) -> Vec<(u32, i64, i64)> {
    if i >= 2 && a == i - 1 {
        vec![(i - 1, 1, 0), (i, 1, 1)]
    } else if a == i {
        vec![(i, -1, 1)]
    } else if a == i + 1 {
        vec![(i + 1, 1, 0), (i, 1, 0)]
    } else {
        vec![(a, 1, 0)]
    }
}

fn composition_of(l: usize, arcs: &[u32]) -> Composition {
    Composition::from_positions(l, &arcs.iter().map(|&a| (a - 1) as usize).collect::<Vec<_>>()).expect("arc in range")
}

pub fn generator_matrix(n: u32, i: u32, m: u32) -> Result<RepMatrix> {
    check_generator(n, i, m)?;
    let ctx = rep_context(m)?;
    let l = (n - 1) as usize;
    let basis = enumerate_compositions(l, m)?;
    let dim = basis.len();
    let mut matrix = Matrix::zeros(&ctx, dim, dim);
    let z = ctx.coefficients().clone();
    for (col, e) in basis.iter().enumerate() {
        let arcs: Vec<u32> = e.point_positions().iter().map(|&p| p as u32 + 1).collect();
        let terms: Vec<(Vec<u32>, i64, Vec<i64>)> = if m == 1 {
            burau_image(i, arcs[0]).into_iter().map(|(a, c, xe)| (vec![a], c, vec![xe])).collect()
        } else {
            lkb_image(i, arcs[0], arcs[1]).into_iter().map(|((a, b), c, xe, de)| (vec![a, b], c, vec![xe, de])).collect()
        };
        for (target, c, exps) in terms {
            let row = rank(&composition_of(l, &target)) as usize;
            let v = matrix.get(row, col) + &GroupRingElement::monomial(&ctx, exps, z.from_i64(c));
            matrix.set(row, col, v);
        }
    }
    Ok(RepMatrix { strands: n, points: m, convention: CONVENTION, matrix })
}

/// Generator matrices and their inverses for one `(n, m)`, built lazily.
#[derive(Debug)]
pub struct BraidRepresentation {
    strands: u32,
    points: u32,
    ctx: Arc<RingContext>,
    cache: Mutex<HashMap<i32, Matrix>>,
}

impl BraidRepresentation {
    pub fn new(strands: u32, points: u32) -> Result<Self> {
        let ctx = rep_context(points)?;
        if strands < 2 {
            return Err(Error::Precondition(format!("n must be at least 2, got {strands}")));
        }
        Ok(Self { strands, points, ctx, cache: Mutex::new(HashMap::new()) })
    }

    pub fn strands(&self) -> u32 { self.strands }

    pub fn points(&self) -> u32 { self.points }

    pub fn context(&self) -> &Arc<RingContext> { &self.ctx }

    pub fn dimension(&self) -> usize { crate::combinatorics::count_compositions((self.strands - 1) as usize, self.points) as usize }

    /// `ρ(σ_i)` for `letter = i > 0`, `ρ(σ_i)^{-1}` for `letter = -i`.
    pub fn letter(&self, letter: i32) -> Result<Matrix> {
        if let Some(m) = self.cache.lock().expect("cache poisoned").get(&letter) {
            return Ok(m.clone());
        }
        let i = letter.unsigned_abs();
        let g = generator_matrix(self.strands, i, self.points)?.matrix;
        let m = if letter > 0 { g } else { g.inverse()? };
        self.cache.lock().expect("cache poisoned").insert(letter, m.clone());
        Ok(m)
    }

    pub fn evaluate(&self, w: &BraidWord) -> Result<RepMatrix> {
        if w.strands() != self.strands {
            return Err(Error::Precondition(format!("word on {} strands for a representation on {}", w.strands(), self.strands)));
        }
        let mut acc = Matrix::identity(&self.ctx, self.dimension());
        for &l in w.letters() {
            acc = acc.mul(&self.letter(l)?)?;
        }
        Ok(RepMatrix { strands: self.strands, points: self.points, convention: CONVENTION, matrix: acc })
    }

    /// `ρ'(σ) = α(ρ(σ^{-1}))^T`, extended multiplicatively over the word.
    pub fn evaluate_dual(&self, w: &BraidWord) -> Result<RepMatrix> {
        if w.strands() != self.strands {
            return Err(Error::Precondition(format!("word on {} strands for a representation on {}", w.strands(), self.strands)));
        }
        let mut acc = Matrix::identity(&self.ctx, self.dimension());
        for &l in w.letters() {
            acc = acc.mul(&self.letter(-l)?.alpha().transpose())?;
        }
        Ok(RepMatrix { strands: self.strands, points: self.points, convention: CONVENTION, matrix: acc })
    }
}

pub fn evaluate_word(w: &BraidWord, m: u32) -> Result<RepMatrix> { BraidRepresentation::new(w.strands(), m)?.evaluate(w) }

/// The dual generator matrices `ρ'(σ_i) = α(ρ(σ_i^{-1}))^T`, for `i = 1..n-1`.
pub fn dual_representation(generators: &[RepMatrix]) -> Result<Vec<RepMatrix>> {
    generators
        .iter()
        .map(|g| {
            let inv = g.matrix.inverse()?;
            Ok(RepMatrix { matrix: inv.alpha().transpose(), ..g.clone() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffendingEntry {
    pub generator: u32,
    pub row: Composition,
    pub col: Composition,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityCertificate {
    pub integral: bool,
    pub checked_entries: usize,
    pub offending: Option<OffendingEntry>,
}

/// Checks that `D^{-1} ρ(σ_i) D` has entries in `R` for every generator, with
/// `D = diag(Π_j [e_j]_d!)`. Entry `(f, e)` is `ρ[f][e] D_e / D_f`, tested by
/// exact division.
pub fn diagonal_conjugation_integrality(n: u32, m: u32) -> Result<IntegralityCertificate> {
    let ctx = rep_context(m)?;
    let u = if m == 1 { GroupRingElement::one(&ctx) } else { GroupRingElement::variable(&ctx, 1) };
    let basis = enumerate_compositions((n.max(2) - 1) as usize, m)?;
    let diag = basis.iter().map(|e| quantum_factorial_product(e.parts(), &u)).collect::<Result<Vec<_>>>()?;
    if let Some(pos) = diag.iter().position(GroupRingElement::is_zero) {
        return Err(Error::Precondition(format!("diagonal entry at {} is zero", basis[pos])));
    }
    let mut checked = 0;
    for i in 1..n {
        let g = generator_matrix(n, i, m)?.matrix;
        for (f, e, v) in g.entries() {
            if v.is_zero() {
                continue;
            }
            checked += 1;
            let num = v * &diag[e];
            if num.div_exact(&diag[f])?.is_none() {
                return Ok(IntegralityCertificate {
                    integral: false,
                    checked_entries: checked,
                    offending: Some(OffendingEntry {
                        generator: i,
                        row: basis[f].clone(),
                        col: basis[e].clone(),
                        numerator: num.to_string(),
                        denominator: diag[f].to_string(),
                    }),
                });
            }
        }
    }
    Ok(IntegralityCertificate { integral: true, checked_entries: checked, offending: None })
}

impl FromStr for BraidWord {
    type Err = Error;

    /// `"n:1,2,-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, w) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected 'n:letters', got {s:?}")))?;
        let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad strand count {n:?}")))?;
        Self::parse(n, w)
    }
}
