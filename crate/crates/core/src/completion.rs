//! The completed group ring `k[[G]]`, restricted to functions `G -> k` whose
//! support is a finite set plus finitely many lattice rays carrying
//! periodic coefficient patterns. This covers the inclusion of `k[G]` and
//! the helix classes, and keeps equality and membership in `k[G]`
//! decidable.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Coeff, CoefficientRing, ExponentVector, GroupRingElement, TermJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayDirection {
    /// `i ∈ Z`
    Bi,
    /// `i >= 0`
    Fwd,
}

/// `Σ_i pattern[i mod len] · (base + i·step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub base: ExponentVector,
    pub step: ExponentVector,
    pub pattern: Vec<Coeff>,
    pub direction: RayDirection,
}

#[derive(Debug, Clone)]
pub struct CompletedElement {
    rank: usize,
    ring: CoefficientRing,
    finite: BTreeMap<ExponentVector, Coeff>,
    rays: Vec<Ray>,
}

// A line {origin + t·dir} with `dir` primitive and `origin` the canonical
// point of the coset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Line {
    dir: Vec<i64>,
    origin: Vec<i64>,
}

fn primitive(v: &[i64]) -> (Vec<i64>, i64) {
    let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    let mut p: Vec<i64> = v.iter().map(|x| x / g).collect();
    let mut s = g;
    if p.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        p.iter_mut().for_each(|x| *x = -*x);
        s = -s;
    }
    (p, s)
}

/// Line through `point` with direction `dir`, and the parameter of `point`.
fn line_through(point: &[i64], dir: &[i64]) -> (Line, i64) {
    let j = dir.iter().position(|x| *x != 0).expect("nonzero direction");
    // shift so that 0 <= origin[j] < dir[j]
    let t = Integer::div_floor(&point[j], &dir[j]);
    let origin = point.iter().zip(dir).map(|(a, b)| a - t * b).collect();
    (Line { dir: dir.to_vec(), origin }, t)
}

fn parameter_on(line: &Line, g: &[i64]) -> Option<i64> {
    let (l, t) = line_through(g, &line.dir);
    (l == *line).then_some(t)
}

impl Ray {
    fn validate(&self, rank: usize) -> Result<()> {
        if self.base.len() != rank || self.step.len() != rank {
            return Err(Error::Dimension(format!("ray vectors must have length {rank}")));
        }
        if self.step.iter().all(|x| *x == 0) {
            return Err(Error::Precondition("ray step must be nonzero".into()));
        }
        if self.pattern.is_empty() {
            return Err(Error::Precondition("ray pattern must be nonempty".into()));
        }
        Ok(())
    }

    fn coefficient_at(&self, ring: &CoefficientRing, g: &[i64]) -> Coeff {
        let (p, s) = primitive(&self.step);
        let (line, t0) = line_through(&self.base, &p);
        let Some(t) = parameter_on(&line, g) else { return ring.zero() };
        let diff = t - t0;
        if diff % s != 0 {
            return ring.zero();
        }
        let i = diff / s;
        if self.direction == RayDirection::Fwd && i < 0 {
            return ring.zero();
        }
        self.pattern[i.rem_euclid(self.pattern.len() as i64) as usize].clone()
    }
}

/// Rays lying on one line, plus the finite terms assigned to it (each
/// finite term goes to the first line through it).
struct LineData<'a> {
    // (t0, s, ray)
    rays: Vec<(i64, i64, &'a Ray)>,
    finite: BTreeMap<i64, Coeff>,
}

impl CompletedElement {
    pub fn zero(rank: usize, ring: CoefficientRing) -> Self { Self { rank, ring, finite: BTreeMap::new(), rays: Vec::new() } }

    pub fn new(rank: usize, ring: CoefficientRing, finite: BTreeMap<ExponentVector, Coeff>, rays: Vec<Ray>) -> Result<Self> {
        for e in finite.keys() {
            if e.len() != rank {
                return Err(Error::Dimension(format!("finite exponent {e:?} has length {}, expected {rank}", e.len())));
            }
        }
        for r in &rays {
            r.validate(rank)?;
        }
        let finite = finite.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Ok(Self { rank, ring, finite, rays })
    }

    pub fn rank(&self) -> usize { self.rank }

    pub fn ring(&self) -> &CoefficientRing { &self.ring }

    pub fn finite(&self) -> &BTreeMap<ExponentVector, Coeff> { &self.finite }

    pub fn rays(&self) -> &[Ray] { &self.rays }

    pub fn coefficient_at(&self, g: &[i64]) -> Coeff {
        let mut acc = self.finite.get(g).cloned().unwrap_or_else(|| self.ring.zero());
        for r in &self.rays {
            acc = self.ring.add(&acc, &r.coefficient_at(&self.ring, g));
        }
        acc
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.ring != other.ring {
            return Err(Error::ContextMismatch(format!(
                "completed elements over rank {} / {} and rank {} / {}",
                self.rank, self.ring, other.rank, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut finite = self.finite.clone();
        for (e, c) in &other.finite {
            let v = finite.get(e).map_or_else(|| c.clone(), |a| self.ring.add(a, c));
            finite.insert(e.clone(), v);
        }
        finite.retain(|_, c| !self.ring.is_zero(c));
        let rays = self.rays.iter().chain(&other.rays).cloned().collect();
        Ok(Self { rank: self.rank, ring: self.ring.clone(), finite, rays })
    }

    pub fn neg(&self) -> Self {
        let ring = &self.ring;
        Self {
            rank: self.rank,
            ring: ring.clone(),
            finite: self.finite.iter().map(|(e, c)| (e.clone(), ring.neg(c))).collect(),
            rays: self.rays.iter().map(|r| Ray { pattern: r.pattern.iter().map(|c| ring.neg(c)).collect(), ..r.clone() }).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> { self.add(&other.neg()) }

    fn lines(&self) -> BTreeMap<Line, LineData<'_>> {
        let mut out: BTreeMap<Line, LineData<'_>> = BTreeMap::new();
        for r in &self.rays {
            let (p, s) = primitive(&r.step);
            let (line, t0) = line_through(&r.base, &p);
            out.entry(line).or_insert_with(|| LineData { rays: Vec::new(), finite: BTreeMap::new() }).rays.push((t0, s, r));
        }
        for (g, c) in &self.finite {
            if let Some((t, data)) = out.iter_mut().find_map(|(l, d)| parameter_on(l, g).map(|t| (t, d))) {
                data.finite.insert(t, c.clone());
            }
        }
        out
    }

    /// The part of the function carried by one line, at parameter `t`.
    fn line_value(&self, line: &Line, data: &LineData<'_>, t: i64) -> Coeff {
        let g: Vec<i64> = line.origin.iter().zip(&line.dir).map(|(o, d)| o + t * d).collect();
        let mut acc = data.finite.get(&t).cloned().unwrap_or_else(|| self.ring.zero());
        for (_, _, r) in &data.rays {
            acc = self.ring.add(&acc, &r.coefficient_at(&self.ring, &g));
        }
        acc
    }

    /// `(period, tail at +inf, tail at -inf, lo, hi)`: outside `[lo, hi]`
    /// the line function equals the periodic tails.
    fn tails(&self, line: &Line, data: &LineData<'_>) -> (i64, Vec<Coeff>, Vec<Coeff>, i64, i64) {
        let period = data.rays.iter().fold(1i64, |acc, (_, s, r)| acc.lcm(&(s.abs() * r.pattern.len() as i64)));
        let lo = data.rays.iter().map(|(t0, ..)| *t0).min().unwrap_or(0);
        let hi = data.rays.iter().map(|(t0, ..)| *t0).max().unwrap_or(0);
        let lo = lo.min(data.finite.keys().next().copied().unwrap_or(lo));
        let hi = hi.max(data.finite.keys().next_back().copied().unwrap_or(hi));
        // sample one full period beyond each end of the window
        let plus = (0..period).map(|r| {
            let t = hi + 1 + (r - (hi + 1)).rem_euclid(period);
            self.line_value(line, data, t)
        });
        let plus: Vec<Coeff> = plus.collect();
        let minus: Vec<Coeff> = (0..period)
            .map(|r| {
                let t = lo - 1 - (lo - 1 - r).rem_euclid(period);
                self.line_value(line, data, t)
            })
            .collect();
        (period, plus, minus, lo, hi)
    }

    /// True iff the support is finite, i.e. every ray cancels at infinity.
    pub fn is_in_group_ring(&self) -> bool {
        let lines = self.lines();
        lines.iter().all(|(line, data)| {
            let (_, plus, minus, ..) = self.tails(line, data);
            plus.iter().chain(&minus).all(|c| self.ring.is_zero(c))
        })
    }

    /// The finitely supported function, if the support is finite.
    pub fn to_group_ring_terms(&self) -> Option<BTreeMap<ExponentVector, Coeff>> {
        let lines = self.lines();
        let mut out = BTreeMap::new();
        let mut on_lines: Vec<ExponentVector> = Vec::new();
        for (line, data) in &lines {
            let (_, plus, minus, lo, hi) = self.tails(line, data);
            if !plus.iter().chain(&minus).all(|c| self.ring.is_zero(c)) {
                return None;
            }
            for t in lo..=hi {
                let g: Vec<i64> = line.origin.iter().zip(&line.dir).map(|(o, d)| o + t * d).collect();
                on_lines.push(g);
            }
        }
        for g in self.finite.keys().cloned().chain(on_lines) {
            let c = self.coefficient_at(&g);
            if !self.ring.is_zero(&c) {
                out.insert(g, c);
            }
        }
        Some(out)
    }

    pub fn to_group_ring(&self, ctx: &std::sync::Arc<crate::ring::RingContext>) -> Option<Result<GroupRingElement>> {
        self.to_group_ring_terms().map(|t| GroupRingElement::from_terms(ctx, t))
    }

    pub fn is_zero(&self) -> bool { self.to_group_ring_terms().is_some_and(|t| t.is_empty()) }

    pub fn equals(&self, other: &Self) -> Result<bool> { Ok(self.sub(other)?.is_zero()) }

    /// Canonical form: off-line finite terms, and per line either one
    /// two-sided ray, or finite terms plus a forward ray at each end with a
    /// minimal period and start.
    pub fn normalize(&self) -> Self {
        let lines = self.lines();
        let mut finite = BTreeMap::new();
        let mut rays = Vec::new();
        let covered = |g: &ExponentVector| lines.keys().any(|l| parameter_on(l, g).is_some());
        for (g, c) in &self.finite {
            if !covered(g) {
                finite.insert(g.clone(), c.clone());
            }
        }
        for (line, data) in &lines {
            let (period, plus, minus, lo, hi) = self.tails(line, data);
            let plus_p = minimal_period(&self.ring, &plus);
            let minus_p = minimal_period(&self.ring, &minus);
            let at = |t: i64| -> ExponentVector { line.origin.iter().zip(&line.dir).map(|(o, d)| o + t * d).collect() };
            let tail = |v: &Vec<Coeff>, t: i64| v[t.rem_euclid(period) as usize].clone();
            let plus_zero = plus.iter().all(|c| self.ring.is_zero(c));
            let minus_zero = minus.iter().all(|c| self.ring.is_zero(c));
            // fully periodic line
            let periodic = (lo..=hi).all(|t| self.ring.equal(&self.line_value(line, data, t), &tail(&plus, t)))
                && (0..period).all(|r| self.ring.equal(&plus[r as usize], &minus[r as usize]));
            if periodic && !plus_zero {
                rays.push(Ray { base: at(0), step: line.dir.clone(), pattern: plus[..plus_p].to_vec(), direction: RayDirection::Bi });
                continue;
            }
            let mut start = hi + 1;
            if !plus_zero {
                while start > lo && self.ring.equal(&self.line_value(line, data, start - 1), &tail(&plus, start - 1)) {
                    start -= 1;
                }
                let pattern = (0..plus_p as i64).map(|i| tail(&plus, start + i)).collect();
                rays.push(Ray { base: at(start), step: line.dir.clone(), pattern, direction: RayDirection::Fwd });
            }
            let mut end = lo - 1;
            if !minus_zero {
                while end < start - 1 && self.ring.equal(&self.line_value(line, data, end + 1), &tail(&minus, end + 1)) {
                    end += 1;
                }
                let pattern = (0..minus_p as i64).map(|i| tail(&minus, end - i)).collect();
                let step = line.dir.iter().map(|x| -x).collect();
                rays.push(Ray { base: at(end), step, pattern, direction: RayDirection::Fwd });
            }
            for t in end + 1..start {
                let c = self.line_value(line, data, t);
                if !self.ring.is_zero(&c) {
                    finite.insert(at(t), c);
                }
            }
        }
        Self { rank: self.rank, ring: self.ring.clone(), finite, rays }
    }

    pub fn to_json(&self) -> CompletedJson {
        CompletedJson {
            finite: self.finite.iter().map(|(e, c)| TermJson { exponents: e.clone(), coeff: self.ring.format(c) }).collect(),
            rays: self
                .rays
                .iter()
                .map(|r| RayJson {
                    base: r.base.clone(),
                    step: r.step.clone(),
                    pattern: r.pattern.iter().map(|c| self.ring.format(c)).collect(),
                    direction: r.direction,
                })
                .collect(),
        }
    }

    pub fn from_json(rank: usize, ring: CoefficientRing, j: &CompletedJson) -> Result<Self> {
        let mut finite = BTreeMap::new();
        for t in &j.finite {
            let c = ring.parse(&t.coeff)?;
            let v = finite.get(&t.exponents).map_or_else(|| c.clone(), |a| ring.add(a, &c));
            finite.insert(t.exponents.clone(), v);
        }
        let rays = j
            .rays
            .iter()
            .map(|r| {
                Ok(Ray {
                    base: r.base.clone(),
                    step: r.step.clone(),
                    pattern: r.pattern.iter().map(|c| ring.parse(c)).collect::<Result<Vec<_>>>()?,
                    direction: r.direction,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, ring, finite, rays)
    }
}

fn minimal_period(ring: &CoefficientRing, v: &[Coeff]) -> usize {
    let n = v.len();
    (1..=n).find(|p| n.is_multiple_of(*p) && (0..n).all(|i| ring.equal(&v[i], &v[(i + p) % n]))).unwrap_or(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayJson {
    pub base: Vec<i64>,
    pub step: Vec<i64>,
    pub pattern: Vec<String>,
    pub direction: RayDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletedJson {
    pub finite: Vec<TermJson>,
    pub rays: Vec<RayJson>,
}

pub fn include_group_ring(a: &GroupRingElement) -> CompletedElement {
    CompletedElement {
        rank: a.context().rank(),
        ring: a.ring().clone(),
        finite: a.terms().clone(),
        rays: Vec::new(),
    }
}

/// `(r·c)(g) = Σ_h r_h c(g - h)`: finite terms convolve, and every ray is
/// translated by each term of `r` with its pattern scaled.
pub fn module_action(r: &GroupRingElement, c: &CompletedElement) -> Result<CompletedElement> {
    if r.context().rank() != c.rank || *r.ring() != c.ring {
        return Err(Error::ContextMismatch("group ring element and completed element live over different rings".into()));
    }
    let ring = &c.ring;
    let mut finite: BTreeMap<ExponentVector, Coeff> = BTreeMap::new();
    let mut rays = Vec::new();
    for (h, rh) in r.terms() {
        for (g, cg) in &c.finite {
            let e: Vec<i64> = g.iter().zip(h).map(|(a, b)| a + b).collect();
            let v = ring.mul(rh, cg);
            let total = finite.get(&e).map_or(v.clone(), |a| ring.add(a, &v));
            finite.insert(e, total);
        }
        for ray in &c.rays {
            rays.push(Ray {
                base: ray.base.iter().zip(h).map(|(a, b)| a + b).collect(),
                step: ray.step.clone(),
                pattern: ray.pattern.iter().map(|p| ring.mul(rh, p)).collect(),
                direction: ray.direction,
            });
        }
    }
    CompletedElement::new(c.rank, ring.clone(), finite, rays)
}

pub fn is_in_group_ring(c: &CompletedElement) -> bool { c.is_in_group_ring() }

/// A vector of completed elements indexed by a basis.
#[derive(Debug, Clone)]
pub struct CompletedVector {
    pub entries: Vec<CompletedElement>,
}

impl CompletedVector {
    pub fn len(&self) -> usize { self.entries.len() }

    pub fn is_empty(&self) -> bool { self.entries.is_empty() }

    pub fn is_zero(&self) -> bool { self.entries.iter().all(CompletedElement::is_zero) }

    pub fn is_in_group_ring(&self) -> bool { self.entries.iter().all(CompletedElement::is_in_group_ring) }
}

/// `V_e · Σ_{i ∈ Z} (1 - y)(yz)^i`: the coordinate at `index` is `+1` on
/// `i(y+z)` and `-1` on `y + i(y+z)`, all other coordinates zero.
///
/// `y = 0` means the loop lifts, and `y + z = 0` makes the sum diverge;
/// both are rejected. `z = 0` is the loop around a single boundary
/// component, for which the sum telescopes to zero.
pub fn helix_class(
    index: usize,
    dimension: usize,
    y: &[i64],
    z: &[i64],
    ring: &CoefficientRing,
) -> Result<CompletedVector> {
    if index >= dimension {
        return Err(Error::OutOfRange(format!("basis index {index} >= dimension {dimension}")));
    }
    if y.len() != z.len() {
        return Err(Error::Dimension("y and z have different lengths".into()));
    }
    if y.iter().all(|v| *v == 0) {
        return Err(Error::Precondition("y = 0: the loop lifts to the covering, so there is no helix".into()));
    }
    let step: Vec<i64> = y.iter().zip(z).map(|(a, b)| a + b).collect();
    if step.iter().all(|v| *v == 0) {
        return Err(Error::Precondition("y + z = 0: the helix sum does not converge in the completion".into()));
    }
    let rank = y.len();
    let entry = CompletedElement::new(
        rank,
        ring.clone(),
        BTreeMap::new(),
        vec![
            Ray { base: vec![0; rank], step: step.clone(), pattern: vec![ring.one()], direction: RayDirection::Bi },
            Ray { base: y.to_vec(), step, pattern: vec![ring.neg(&ring.one())], direction: RayDirection::Bi },
        ],
    )?;
    let mut entries = vec![CompletedElement::zero(rank, ring.clone()); dimension];
    entries[index] = entry;
    Ok(CompletedVector { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, RingContext};

    fn z() -> CoefficientRing { CoefficientRing::Integers }

    fn int(c: &Coeff) -> i64 { z().format(c).parse().unwrap() }

    #[test]
    fn inclusion() {
        let ctx = RingContext::new(1, z());
        let a = parse(&ctx, "1 + x").unwrap();
        let c = include_group_ring(&a);
        assert_eq!(int(&c.coefficient_at(&[1])), 1);
        assert!(c.is_in_group_ring());
        assert_eq!(c.to_group_ring(&ctx).unwrap().unwrap(), a);
        assert!(include_group_ring(&GroupRingElement::zero(&ctx)).is_zero());
        let xc = module_action(&GroupRingElement::variable(&ctx, 0), &include_group_ring(&GroupRingElement::one(&ctx))).unwrap();
        assert!(xc.equals(&include_group_ring(&GroupRingElement::variable(&ctx, 0))).unwrap());
    }

    #[test]
    fn helix() {
        let v = helix_class(0, 1, &[1, 0], &[0, 1], &z()).unwrap();
        let h = &v.entries[0];
        assert_eq!(int(&h.coefficient_at(&[3, 3])), 1);
        assert_eq!(int(&h.coefficient_at(&[-1, -2])), -1);
        assert_eq!(int(&h.coefficient_at(&[2, 0])), 0);
        assert!(!h.is_in_group_ring());
        let left = helix_class(0, 2, &[1, 0], &[0, 0], &z()).unwrap();
        assert!(left.is_zero());
        assert!(helix_class(0, 1, &[0, 0], &[0, 1], &z()).is_err());
        assert!(helix_class(0, 1, &[1, 0], &[-1, 0], &z()).is_err());
    }

    #[test]
    fn action_on_ray() {
        // (1 - y) · Σ_i (yz)^i
        let ctx = RingContext::with_names(z(), &["y", "z"]).unwrap();
        let ray = CompletedElement::new(
            2,
            z(),
            BTreeMap::new(),
            vec![Ray { base: vec![0, 0], step: vec![1, 1], pattern: vec![z().one()], direction: RayDirection::Bi }],
        )
        .unwrap();
        let out = module_action(&parse(&ctx, "1 - y").unwrap(), &ray).unwrap();
        assert_eq!(int(&out.coefficient_at(&[4, 4])), 1);
        assert_eq!(int(&out.coefficient_at(&[5, 4])), -1);
        assert!(!out.is_zero());
        assert!(ray.sub(&ray).unwrap().is_in_group_ring());
        assert!(ray.sub(&ray).unwrap().is_zero());
    }

    #[test]
    fn forward_rays_cancel_to_finite() {
        // Σ_{i>=0} x^i - Σ_{i>=0} x^{i+2} = 1 + x
        let r = |b: i64| Ray { base: vec![b], step: vec![1], pattern: vec![z().one()], direction: RayDirection::Fwd };
        let a = CompletedElement::new(1, z(), BTreeMap::new(), vec![r(0)]).unwrap();
        let b = CompletedElement::new(1, z(), BTreeMap::new(), vec![r(2)]).unwrap();
        let d = a.sub(&b).unwrap();
        assert!(d.is_in_group_ring());
        let terms = d.to_group_ring_terms().unwrap();
        assert_eq!(terms.len(), 2);
        let n = a.normalize();
        assert_eq!(n.rays().len(), 1);
        assert!(n.equals(&a).unwrap());
    }

    #[test]
    fn normalize_merges() {
        // two interleaved rays of step 2 make one ray of step 1
        let r = |b: i64| Ray { base: vec![b], step: vec![2], pattern: vec![z().one()], direction: RayDirection::Bi };
        let a = CompletedElement::new(1, z(), BTreeMap::new(), vec![r(0), r(1)]).unwrap();
        let n = a.normalize();
        assert_eq!(n.rays().len(), 1);
        assert_eq!(n.rays()[0].pattern.len(), 1);
        assert!(n.equals(&a).unwrap());
    }
}
