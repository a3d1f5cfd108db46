use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

use super::coefficient::{Coeff, CoefficientRing};

/// A point of the lattice `Z^d`; the group law is componentwise addition.
/// Ordered lexicographically, which fixes the canonical term order.
pub type ExponentVector = Vec<i64>;

/// The ambient data shared by all elements of one group ring `k[Z^d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingContext {
    rank: usize,
    coefficients: CoefficientRing,
    names: Vec<String>,
}

impl RingContext {
    /// Ring with the default variable names: `x` for rank 1, `x, d` for rank 2,
    /// `x1..xd` otherwise.
    pub fn new(rank: usize, coefficients: CoefficientRing) -> Arc<Self> {
        let names = match rank {
            0 => vec![],
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "d".to_string()],
            _ => (1..=rank).map(|i| format!("x{i}")).collect(),
        };
        Arc::new(Self { rank, coefficients, names })
    }

    pub fn with_names(coefficients: CoefficientRing, names: &[&str]) -> Result<Arc<Self>> {
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Precondition(format!("invalid variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Precondition(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Arc::new(Self { rank: names.len(), coefficients, names: names.iter().map(|s| s.to_string()).collect() }))
    }

    pub fn rank(&self) -> usize { self.rank }

    pub fn coefficients(&self) -> &CoefficientRing { &self.coefficients }

    pub fn names(&self) -> &[String] { &self.names }

    pub fn variable_index(&self, name: &str) -> Option<usize> { self.names.iter().position(|n| n == name) }

    pub fn zero_exponent(&self) -> ExponentVector { vec![0; self.rank] }
}

/// A finitely supported function `Z^d -> k`, i.e. an element of `k[Z^d]`
/// (a multivariate Laurent polynomial). No stored coefficient is zero.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    ctx: Arc<RingContext>,
    terms: BTreeMap<ExponentVector, Coeff>,
}

impl GroupRingElement {
    pub fn zero(ctx: &Arc<RingContext>) -> Self { Self { ctx: ctx.clone(), terms: BTreeMap::new() } }

    pub fn one(ctx: &Arc<RingContext>) -> Self { Self::constant(ctx, ctx.coefficients.one()) }

    pub fn from_i64(ctx: &Arc<RingContext>, v: i64) -> Self { Self::constant(ctx, ctx.coefficients.from_i64(v)) }

    pub fn constant(ctx: &Arc<RingContext>, c: Coeff) -> Self { Self::monomial(ctx, ctx.zero_exponent(), c) }

    /// `c * g` for the group element with exponent vector `exponents`.
    pub fn monomial(ctx: &Arc<RingContext>, exponents: ExponentVector, c: Coeff) -> Self {
        assert_eq!(exponents.len(), ctx.rank, "exponent vector has wrong length");
        let mut terms = BTreeMap::new();
        if !ctx.coefficients.is_zero(&c) {
            terms.insert(exponents, c);
        }
        Self { ctx: ctx.clone(), terms }
    }

    /// The group element `t_i` (the i-th lattice generator).
    pub fn variable(ctx: &Arc<RingContext>, index: usize) -> Self {
        let mut e = ctx.zero_exponent();
        e[index] = 1;
        Self::monomial(ctx, e, ctx.coefficients.one())
    }

    /// Builds an element from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(ctx: &Arc<RingContext>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Coeff)>,
    {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            if e.len() != ctx.rank {
                return Err(Error::Dimension(format!("exponent vector {e:?} in a rank-{} ring", ctx.rank)));
            }
            if !ctx.coefficients.contains(&c) {
                return Err(Error::ContextMismatch(format!("{c:?} is not a {} coefficient", ctx.coefficients)));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn context(&self) -> &Arc<RingContext> { &self.ctx }

    pub fn ring(&self) -> &CoefficientRing { &self.ctx.coefficients }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Coeff> { &self.terms }

    pub fn num_terms(&self) -> usize { self.terms.len() }

    pub fn is_zero(&self) -> bool { self.terms.is_empty() }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| e.iter().all(|&v| v == 0) && self.ring().is_one(c))
    }

    pub fn coefficient(&self, e: &[i64]) -> Coeff { self.terms.get(e).cloned().unwrap_or_else(|| self.ring().zero()) }

    /// The single term, if this element is a (nonzero) monomial.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn same_context(&self, other: &Self) -> bool { Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "rank {} over {} with variables {:?} vs rank {} over {} with variables {:?}",
                self.ctx.rank, self.ctx.coefficients, self.ctx.names, other.ctx.rank, other.ctx.coefficients, other.ctx.names
            )))
        }
    }

    fn add_term(&mut self, e: ExponentVector, c: Coeff) {
        let ring = self.ctx.coefficients.clone();
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = ring.add(existing, &c);
                if ring.is_zero(&sum) {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                if !ring.is_zero(&c) {
                    self.terms.insert(e, c);
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), self.ring().neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let ring = self.ring();
        let mut out = Self::zero(&self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: ExponentVector = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let ring = self.ring();
        let mut out = Self::zero(&self.ctx);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), ring.mul(v, c));
        }
        out
    }

    /// Multiplication by the group element `g`: shifts every exponent.
    pub fn shift(&self, g: &[i64]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>(), c.clone()))
            .collect();
        Self { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The involution induced by `g -> g^{-1}`: every exponent vector is negated.
    pub fn alpha(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|v| -v).collect(), c.clone())).collect();
        Self { ctx: self.ctx.clone(), terms }
    }

    fn require_domain(&self, what: &str) -> Result<()> {
        if self.ring().is_integral_domain() {
            Ok(())
        } else {
            Err(Error::UnsupportedCoefficients(format!(
                "{what} is not decidable over {} (tolerance makes it ill-posed)",
                self.ring()
            )))
        }
    }

    /// Over an integral domain the units of `k[Z^d]` are exactly `c * g` with
    /// `c` a unit of `k`.
    pub fn is_unit(&self) -> Result<bool> {
        self.require_domain("is_unit")?;
        Ok(self.as_monomial().is_some_and(|(_, c)| self.ring().is_unit(c)))
    }

    /// The inverse of a unit, `c^{-1} g^{-1}`; `None` for non-units.
    pub fn unit_inverse(&self) -> Result<Option<Self>> {
        if !self.ring().is_integral_domain() {
            // complex-approx: nonzero scalar monomials are invertible numerically
            return Ok(self.as_monomial().and_then(|(e, c)| {
                let inv = self.ring().inverse(c)?;
                Some(Self::monomial(&self.ctx, e.iter().map(|v| -v).collect(), inv))
            }));
        }
        if !self.is_unit()? {
            return Ok(None);
        }
        let (e, c) = self.as_monomial().expect("unit is a monomial");
        let inv = self.ring().inverse(c).expect("unit coefficient");
        Ok(Some(Self::monomial(&self.ctx, e.iter().map(|v| -v).collect(), inv)))
    }

    /// `k[Z^d]` over an integral domain is itself a domain, so the non-zero-divisors
    /// are the nonzero elements.
    pub fn is_non_zero_divisor(&self) -> Result<bool> {
        self.require_domain("is_non_zero_divisor")?;
        Ok(!self.is_zero())
    }

    /// Componentwise minimum of the exponents (the zero vector for the zero element).
    pub fn min_exponents(&self) -> ExponentVector {
        let mut out = self.ctx.zero_exponent();
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        }
        out
    }

    /// Exact quotient `self / divisor` in `k[Z^d]`, or `None` if `divisor`
    /// does not divide `self`.
    ///
    /// Both sides are shifted into the polynomial ring (nonnegative exponents,
    /// minimal exponent zero in every variable) and divided by lex-leading-term
    /// reduction. Since the shifted divisor has no monomial factor, Laurent
    /// divisibility agrees with polynomial divisibility of the shifted numerator.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_context(divisor)?;
        self.require_domain("exact division")?;
        if divisor.is_zero() {
            return Err(Error::Precondition("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let ring = self.ring().clone();
        let dmin = divisor.min_exponents();
        let nmin = self.min_exponents();
        let b = divisor.shift(&dmin.iter().map(|v| -v).collect::<Vec<_>>());
        let mut rem = self.shift(&nmin.iter().map(|v| -v).collect::<Vec<_>>());
        let (lead_e, lead_c) = b.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut quotient = Self::zero(&self.ctx);
        while let Some((re, rc)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Vec<i64> = re.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&v| v < 0) {
                return Ok(None);
            }
            let Some(qc) = ring.div_exact(&rc, &lead_c) else {
                return Ok(None);
            };
            let t = Self::monomial(&self.ctx, qe, qc);
            rem = &rem - &(&t * &b);
            quotient = &quotient + &t;
        }
        // undo the shifts: self = x^nmin * rem0, divisor = x^dmin * b
        let back: Vec<i64> = nmin.iter().zip(&dmin).map(|(n, d)| n - d).collect();
        Ok(Some(quotient.shift(&back)))
    }

    /// Applies the ring homomorphism `k[Z^d] -> target` sending the i-th
    /// generator to `images[i]`, which must be units of `target`.
    pub fn substitute(&self, target: &Arc<RingContext>, images: &[GroupRingElement]) -> Result<Self> {
        if images.len() != self.ctx.rank {
            return Err(Error::Dimension(format!("{} images for a rank-{} ring", images.len(), self.ctx.rank)));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            if !(Arc::ptr_eq(img.context(), target) || **img.context() == **target) {
                return Err(Error::ContextMismatch(format!("image of {} lives in another ring", self.ctx.names[i])));
            }
            let inv = img.unit_inverse()?.ok_or_else(|| {
                Error::Precondition(format!("image {} of {} is not a unit", img, self.ctx.names[i]))
            })?;
            inverses.push(inv);
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, target.coefficients.map_from(self.ring(), c)?);
            for (i, &k) in e.iter().enumerate() {
                let factor = if k >= 0 { images[i].pow(k as u32) } else { inverses[i].pow((-k) as u32) };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Evaluates at numeric points (all values in the coefficient ring of
    /// `target`, which is expected to be rank 0).
    pub fn evaluate(&self, values: &[Coeff], target: &CoefficientRing) -> Result<Coeff> {
        let ctx = RingContext::new(0, target.clone());
        let images: Vec<_> = values.iter().map(|v| Self::constant(&ctx, v.clone())).collect();
        let v = self.substitute(&ctx, &images)?;
        Ok(v.coefficient(&[]))
    }

    /// Structural equality for exact rings; within tolerance for complex-approx.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if !self.same_context(other) {
            return false;
        }
        if self.ring().is_exact() {
            self.terms == other.terms
        } else {
            (self - other).is_zero()
        }
    }
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool { self.approx_eq(other) }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&GroupRingElement> for &GroupRingElement {
            type Output = GroupRingElement;

            /// Panics on a context mismatch; use the `checked_*` form for
            /// untrusted operands.
            fn $m(self, rhs: &GroupRingElement) -> GroupRingElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr<GroupRingElement> for GroupRingElement {
            type Output = GroupRingElement;

            fn $m(self, rhs: GroupRingElement) -> GroupRingElement { (&self).$m(&rhs) }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;

    fn neg(self) -> GroupRingElement {
        let ring = self.ring();
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), ring.neg(c))).collect();
        GroupRingElement { ctx: self.ctx.clone(), terms }
    }
}

impl Neg for GroupRingElement {
    type Output = GroupRingElement;

    fn neg(self) -> GroupRingElement { -&self }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { f.write_str(&super::text::format(self)) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Checked arithmetic entry point; `b` is ignored for `Neg`.
pub fn ring_arithmetic(a: &GroupRingElement, b: &GroupRingElement, op: RingOp) -> Result<GroupRingElement> {
    match op {
        RingOp::Add => a.checked_add(b),
        RingOp::Sub => a.checked_sub(b),
        RingOp::Mul => a.checked_mul(b),
        RingOp::Neg => Ok(-a),
    }
}
