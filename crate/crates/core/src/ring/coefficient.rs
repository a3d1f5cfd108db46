//! Coefficient rings for group rings `k[Z^d]`.
//!
//! Three rings are exact (integers, rationals, integers modulo a prime). The
//! fourth, `ComplexApprox`, carries a tolerance and treats any value whose
//! modulus is at most the tolerance as zero.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default comparison tolerance for complex-approx coefficients.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    /// `Z/pZ` for a prime `p`.
    IntegersMod(u64),
    ComplexApprox { tolerance: f64 },
}

/// A coefficient value. Which variant is valid is determined by the
/// [`CoefficientRing`] that owns it; mod-p values are kept reduced in `[0, p)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
    Complex(Complex64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % p) as u128;
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl CoefficientRing {
    pub fn integers_mod(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("modulus {p} is not prime")));
        }
        Ok(Self::IntegersMod(p))
    }

    pub fn complex_approx(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Precondition(format!("tolerance must be > 0, got {tolerance}")));
        }
        Ok(Self::ComplexApprox { tolerance })
    }

    pub fn complex() -> Self { Self::ComplexApprox { tolerance: DEFAULT_TOLERANCE } }

    pub fn is_exact(&self) -> bool { !matches!(self, Self::ComplexApprox { .. }) }

    /// True exactly for the integral domains we can decide things over.
    pub fn is_integral_domain(&self) -> bool { self.is_exact() }

    pub fn is_field(&self) -> bool { !matches!(self, Self::Integers) }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            Self::ComplexApprox { tolerance } => Some(*tolerance),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Integers => "integers".into(),
            Self::Rationals => "rationals".into(),
            Self::IntegersMod(p) => format!("integers-mod-{p}"),
            Self::ComplexApprox { tolerance } => format!("complex-approx({tolerance:e})"),
        }
    }

    /// Parses the names produced by [`CoefficientRing::name`], plus the
    /// short forms `Z`, `Q`, `F<p>` and `C`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "integers" | "Z" => return Ok(Self::Integers),
            "rationals" | "Q" => return Ok(Self::Rationals),
            "complex" | "complex-approx" | "C" => return Ok(Self::complex()),
            _ => {}
        }
        if let Some(p) = name.strip_prefix("integers-mod-").or_else(|| name.strip_prefix('F')) {
            let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad modulus in {name:?}")))?;
            return Self::integers_mod(p);
        }
        if let Some(rest) = name.strip_prefix("complex-approx(").and_then(|r| r.strip_suffix(')')) {
            let tol: f64 = rest.parse().map_err(|_| Error::Parse(format!("bad tolerance in {name:?}")))?;
            return Self::complex_approx(tol);
        }
        Err(Error::Parse(format!("unknown coefficient ring {name:?}")))
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Self::Integers => Coeff::Int(BigInt::zero()),
            Self::Rationals => Coeff::Rat(BigRational::zero()),
            Self::IntegersMod(_) => Coeff::Mod(0),
            Self::ComplexApprox { .. } => Coeff::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(&self) -> Coeff { self.from_i64(1) }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Self::Integers => Coeff::Int(BigInt::from(v)),
            Self::Rationals => Coeff::Rat(BigRational::from_integer(BigInt::from(v))),
            Self::IntegersMod(p) => Coeff::Mod(v.rem_euclid(*p as i64) as u64),
            Self::ComplexApprox { .. } => Coeff::Complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Self::Integers => Coeff::Int(v.clone()),
            Self::Rationals => Coeff::Rat(BigRational::from_integer(v.clone())),
            Self::IntegersMod(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Coeff::Mod(r.to_u64().expect("reduced residue fits in u64"))
            }
            Self::ComplexApprox { .. } => Coeff::Complex(Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    /// Checks that `c` is a value of this ring.
    pub fn contains(&self, c: &Coeff) -> bool {
        matches!(
            (self, c),
            (Self::Integers, Coeff::Int(_))
                | (Self::Rationals, Coeff::Rat(_))
                | (Self::ComplexApprox { .. }, Coeff::Complex(_))
        ) || matches!((self, c), (Self::IntegersMod(p), Coeff::Mod(v)) if v < p)
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        match (self, c) {
            (Self::ComplexApprox { tolerance }, Coeff::Complex(z)) => z.norm() <= *tolerance,
            (_, Coeff::Int(v)) => v.is_zero(),
            (_, Coeff::Rat(v)) => v.is_zero(),
            (_, Coeff::Mod(v)) => *v == 0,
            (_, Coeff::Complex(z)) => z.norm() == 0.0,
        }
    }

    pub fn is_one(&self, c: &Coeff) -> bool { self.equal(c, &self.one()) }

    pub fn equal(&self, a: &Coeff, b: &Coeff) -> bool {
        match (a, b) {
            (Coeff::Complex(x), Coeff::Complex(y)) => match self {
                Self::ComplexApprox { tolerance } => (x - y).norm() <= *tolerance,
                _ => x == y,
            },
            _ => a == b,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (_, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Self::IntegersMod(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(((*x as u128 + *y as u128) % *p as u128) as u64),
            (_, Coeff::Complex(x), Coeff::Complex(y)) => Coeff::Complex(x + y),
            _ => panic!("coefficient variants do not match ring {}", self.name()),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (_, Coeff::Int(x)) => Coeff::Int(-x),
            (_, Coeff::Rat(x)) => Coeff::Rat(-x),
            (Self::IntegersMod(p), Coeff::Mod(x)) => Coeff::Mod(if *x == 0 { 0 } else { p - x }),
            (_, Coeff::Complex(x)) => Coeff::Complex(-x),
            _ => panic!("coefficient variant does not match ring {}", self.name()),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff { self.add(a, &self.neg(b)) }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (_, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Self::IntegersMod(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(((*x as u128 * *y as u128) % *p as u128) as u64),
            (_, Coeff::Complex(x), Coeff::Complex(y)) => Coeff::Complex(x * y),
            _ => panic!("coefficient variants do not match ring {}", self.name()),
        }
    }

    /// Units of the coefficient ring: ±1 over Z, nonzero elements of fields.
    pub fn is_unit(&self, c: &Coeff) -> bool {
        match (self, c) {
            (Self::Integers, Coeff::Int(v)) => v.abs().is_one(),
            _ => !self.is_zero(c),
        }
    }

    pub fn inverse(&self, c: &Coeff) -> Option<Coeff> {
        if !self.is_unit(c) {
            return None;
        }
        Some(match (self, c) {
            (_, Coeff::Int(v)) => Coeff::Int(v.clone()),
            (_, Coeff::Rat(v)) => Coeff::Rat(v.recip()),
            (Self::IntegersMod(p), Coeff::Mod(v)) => Coeff::Mod(mod_pow(*v, p - 2, *p)),
            (_, Coeff::Complex(z)) => Coeff::Complex(z.inv()),
            _ => return None,
        })
    }

    /// Exact quotient `a / b` when it exists in the ring.
    pub fn div_exact(&self, a: &Coeff, b: &Coeff) -> Option<Coeff> {
        match (self, a, b) {
            (Self::Integers, Coeff::Int(x), Coeff::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(Coeff::Int(q))
            }
            _ => self.inverse(b).map(|inv| self.mul(a, &inv)),
        }
    }

    /// True when the value prints with a leading minus sign.
    pub fn is_negative(&self, c: &Coeff) -> bool {
        match c {
            Coeff::Int(v) => v.is_negative(),
            Coeff::Rat(v) => v.is_negative(),
            _ => false,
        }
    }

    /// Image of `c` (a value of `source`) under the canonical map
    /// `source -> self` (Z -> anything, Q -> Q/F_p/C, F_p -> F_p).
    pub fn map_from(&self, source: &CoefficientRing, c: &Coeff) -> Result<Coeff> {
        let fail = || Error::UnsupportedCoefficients(format!("no ring map {} -> {}", source.name(), self.name()));
        match (c, self) {
            (Coeff::Int(v), _) => Ok(self.from_bigint(v)),
            (Coeff::Rat(v), Self::Rationals) => Ok(Coeff::Rat(v.clone())),
            (Coeff::Rat(v), Self::IntegersMod(p)) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                self.div_exact(&num, &den)
                    .ok_or_else(|| Error::UnsupportedCoefficients(format!("denominator of {v} vanishes mod {p}")))
            }
            (Coeff::Rat(v), Self::ComplexApprox { .. }) => {
                let re = v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN);
                Ok(Coeff::Complex(Complex64::new(re, 0.0)))
            }
            (Coeff::Mod(v), Self::IntegersMod(p)) if matches!(source, Self::IntegersMod(q) if q == p) => Ok(Coeff::Mod(*v)),
            (Coeff::Complex(z), Self::ComplexApprox { .. }) => Ok(Coeff::Complex(*z)),
            _ => Err(fail()),
        }
    }

    pub fn to_complex(&self, c: &Coeff) -> Option<Complex64> {
        match c {
            Coeff::Int(v) => v.to_f64().map(|r| Complex64::new(r, 0.0)),
            Coeff::Rat(v) => Some(Complex64::new(v.numer().to_f64()? / v.denom().to_f64()?, 0.0)),
            Coeff::Complex(z) => Some(*z),
            Coeff::Mod(_) => None,
        }
    }

    pub fn format(&self, c: &Coeff) -> String {
        match c {
            Coeff::Int(v) => v.to_string(),
            Coeff::Rat(v) => {
                if v.is_integer() {
                    v.numer().to_string()
                } else {
                    format!("{}/{}", v.numer(), v.denom())
                }
            }
            Coeff::Mod(v) => v.to_string(),
            Coeff::Complex(z) => format!("({}{}i)", z.re, fmt_signed(z.im)),
        }
    }

    /// Parses a coefficient literal in the form printed by [`Self::format`].
    pub fn parse(&self, s: &str) -> Result<Coeff> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad {} coefficient {s:?}", self.name()));
        match self {
            Self::Integers => s.parse::<BigInt>().map(Coeff::Int).map_err(|_| bad()),
            Self::Rationals => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Coeff::Rat(BigRational::new(n, d)))
            }
            Self::IntegersMod(_) => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
            Self::ComplexApprox { .. } => parse_complex(s).map(Coeff::Complex).ok_or_else(bad),
        }
    }
}

fn fmt_signed(x: f64) -> String {
    if x.is_sign_negative() {
        format!("{x}")
    } else {
        format!("+{x}")
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s).trim();
    if let Some(body) = inner.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i].trim().parse().ok()?;
                let im_str = body[i..].trim();
                let im: f64 = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_str.parse().ok()?,
                };
                Some(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() { 1.0 } else { body.trim().parse().ok()? };
                Some(Complex64::new(0.0, im))
            }
        }
    } else {
        inner.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result { f.write_str(&self.name()) }
}
