//! Quantum integers `[n]_u = 1 + u + ... + u^{n-1}` and quantum factorials
//! `[n]_u! = [1]_u [2]_u ... [n]_u`.

use crate::error::{Error, Result};

use super::element::GroupRingElement;

pub fn quantum_integer(n: u32, u: &GroupRingElement) -> Result<GroupRingElement> {
    if n == 0 {
        return Err(Error::Precondition("quantum integers are defined for n >= 1".into()));
    }
    if u.ring().is_integral_domain() && !u.is_unit()? {
        return Err(Error::Precondition(format!("{u} is not a unit")));
    }
    let mut acc = GroupRingElement::zero(u.context());
    let mut power = GroupRingElement::one(u.context());
    for _ in 0..n {
        acc = &acc + &power;
        power = &power * u;
    }
    Ok(acc)
}

/// `[0]_u! = 1` (empty product).
pub fn quantum_factorial(n: u32, u: &GroupRingElement) -> Result<GroupRingElement> {
    let mut acc = GroupRingElement::one(u.context());
    for k in 1..=n {
        acc = &acc * &quantum_integer(k, u)?;
    }
    Ok(acc)
}

/// `Π_i [parts_i]_u!`, the diagonal scalar attached to a composition.
pub fn quantum_factorial_product(parts: &[u32], u: &GroupRingElement) -> Result<GroupRingElement> {
    let mut acc = GroupRingElement::one(u.context());
    for &p in parts {
        acc = &acc * &quantum_factorial(p, u)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, CoefficientRing, RingContext};

    #[test]
    fn small_values() {
        let ctx = RingContext::with_names(CoefficientRing::Integers, &["u"]).unwrap();
        let u = parse(&ctx, "u").unwrap();
        assert!(quantum_integer(1, &u).unwrap().is_one());
        assert_eq!(quantum_integer(2, &u).unwrap(), parse(&ctx, "1 + u").unwrap());
        assert!(quantum_factorial(0, &u).unwrap().is_one());
        assert!(quantum_factorial(1, &u).unwrap().is_one());
        assert_eq!(quantum_factorial(2, &u).unwrap(), parse(&ctx, "1 + u").unwrap());
        assert_eq!(quantum_factorial(3, &u).unwrap(), parse(&ctx, "1 + 2*u + 2*u^2 + u^3").unwrap());
        assert!(matches!(quantum_integer(0, &u), Err(Error::Precondition(_))));
    }

    #[test]
    fn in_d_variable() {
        let ctx = RingContext::new(2, CoefficientRing::Integers);
        let d = parse(&ctx, "d").unwrap();
        assert_eq!(quantum_integer(3, &d).unwrap(), parse(&ctx, "1 + d + d^2").unwrap());
    }

    #[test]
    fn non_unit_rejected() {
        let ctx = RingContext::new(1, CoefficientRing::Integers);
        assert!(quantum_integer(2, &parse(&ctx, "1 + x").unwrap()).is_err());
    }
}
