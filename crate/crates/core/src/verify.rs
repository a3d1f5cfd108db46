//! Seeded self-checks of the library's invariants, reported one line per
//! property. Used by the `verify` subcommand.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid::{diagonal_conjugation_integrality, BraidRepresentation, BraidWord};
use crate::combinatorics::{count_compositions, enumerate_compositions, rank, unrank};
use crate::completion::{helix_class, include_group_ring, module_action};
use crate::embeddings::{certify_injective, embedding_matrix, Direction};
use crate::error::Result;
use crate::homology::{circle_cohomology, shapiro_circle_check, shapiro_finite_cover_check, ModuleDescription};
use crate::pairing::{delta_pairing, geometric_pairing, local_intersection_sum};
use crate::ring::{quantum_factorial, quantum_factorial_product, Coeff, CoefficientRing, GroupRingElement, RingContext};
use crate::surface::{basis, Flavour, LocalSystemSpec, Side, SurfaceTriad};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// First counterexample, when the property fails.
    pub counterexample: Option<String>,
}

/// A random Laurent polynomial with up to `terms` terms, exponents in
/// `[-span, span]` and small integer coefficients.
pub fn random_element(ctx: &Arc<RingContext>, rng: &mut impl Rng, terms: usize, span: i64) -> GroupRingElement {
    let n = rng.gen_range(0..=terms);
    let parts = (0..n).map(|_| {
        let e = (0..ctx.rank()).map(|_| rng.gen_range(-span..=span)).collect();
        (e, ctx.coefficients().from_i64(rng.gen_range(-4..=4)))
    });
    GroupRingElement::from_terms(ctx, parts.collect::<Vec<_>>()).expect("well-formed terms")
}

pub fn random_unit(ctx: &Arc<RingContext>, rng: &mut impl Rng, span: i64) -> GroupRingElement {
    let e = (0..ctx.rank()).map(|_| rng.gen_range(-span..=span)).collect();
    let c = match ctx.coefficients() {
        CoefficientRing::Integers => if rng.gen_bool(0.5) { 1 } else { -1 },
        CoefficientRing::IntegersMod(p) => rng.gen_range(1..*p as i64),
        _ => {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-5..=5);
            }
            v
        }
    };
    GroupRingElement::monomial(ctx, e, ctx.coefficients().from_i64(c))
}

pub fn random_word(strands: u32, len: usize, rng: &mut impl Rng) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) { i } else { -i }
        })
        .collect();
    BraidWord::new(strands, letters).expect("letters in range")
}

struct Check {
    name: &'static str,
    cases: usize,
    counterexample: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self { Self { name, cases: 0, counterexample: None } }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> PropertyReport {
        PropertyReport { name: self.name, passed: self.counterexample.is_none(), cases: self.cases, counterexample: self.counterexample }
    }
}

fn check_alpha(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("alpha is an involution and multiplicative");
    let ctx = RingContext::new(2, CoefficientRing::Integers);
    for _ in 0..200 {
        let a = random_element(&ctx, rng, 5, 3);
        let b = random_element(&ctx, rng, 5, 3);
        c.case(a.alpha().alpha() == a && (&a * &b).alpha() == &a.alpha() * &b.alpha(), || format!("a = {a}, b = {b}"));
    }
    c.finish()
}

fn check_units(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("units have explicit inverses");
    for ring in [CoefficientRing::Integers, CoefficientRing::Rationals, CoefficientRing::IntegersMod(5)] {
        let ctx = RingContext::new(2, ring);
        for _ in 0..50 {
            let u = random_unit(&ctx, rng, 4);
            let inv = u.unit_inverse().ok().flatten();
            c.case(inv.is_some_and(|v| (&u * &v).is_one()), || format!("u = {u}"));
        }
    }
    c.finish()
}

fn check_specialization(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("specialisation is a ring homomorphism");
    let ctx = RingContext::new(2, CoefficientRing::Integers);
    let q = CoefficientRing::Rationals;
    for _ in 0..100 {
        let a = random_element(&ctx, rng, 4, 2);
        let b = random_element(&ctx, rng, 4, 2);
        let vals: Vec<Coeff> = (0..2).map(|_| q.from_i64([-3, -2, -1, 2, 3][rng.gen_range(0..5)])).collect();
        let ev = |x: &GroupRingElement| x.evaluate(&vals, &q).expect("units");
        let ok = q.equal(&ev(&(&a * &b)), &q.mul(&ev(&a), &ev(&b))) && q.equal(&ev(&(&a + &b)), &q.add(&ev(&a), &ev(&b)));
        c.case(ok, || format!("a = {a}, b = {b}"));
    }
    c.finish()
}

fn check_quantum() -> PropertyReport {
    let mut c = Check::new("quantum factorial equals the inversion generating function");
    let ctx = RingContext::with_names(CoefficientRing::Integers, &["u"]).expect("one name");
    let u = GroupRingElement::variable(&ctx, 0);
    for r in 0..=6 {
        let ok = quantum_factorial(r, &u).is_ok_and(|q| q == local_intersection_sum(r, &u));
        c.case(ok, || format!("r = {r}"));
    }
    c.finish()
}

fn check_compositions() -> PropertyReport {
    let mut c = Check::new("composition enumeration, count and ranking agree");
    for l in 1..=6 {
        for m in 0..=5 {
            let all = enumerate_compositions(l, m).expect("l >= 1");
            let ok = all.len() as u64 == count_compositions(l, m)
                && all.iter().enumerate().all(|(i, e)| rank(e) == i as u64 && unrank(i as u64, l, m).is_ok_and(|f| &f == e))
                && all.windows(2).all(|w| w[0] < w[1]);
            c.case(ok, || format!("l = {l}, m = {m}"));
        }
    }
    c.finish()
}

fn small_triads(max_l: usize, max_m: u32) -> Vec<SurfaceTriad> {
    let mut out = Vec::new();
    for g in 0..=1 {
        for n in 1..=4 {
            for k in 0..=2 {
                for m in 1..=max_m {
                    if let Ok(t) = SurfaceTriad::new(g, n, k, m) {
                        if t.arc_count() <= max_l {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_pairings() -> PropertyReport {
    let mut c = Check::new("delta pairing is the identity; geometric pairing is the quantum factorial product");
    for t in small_triads(3, 3) {
        let sys = LocalSystemSpec::standard(t.points, CoefficientRing::Integers).expect("m >= 1");
        for side in [Side::In, Side::Out] {
            c.case(delta_pairing(&t, side, sys.context()).matrix.is_identity(), || format!("delta {t} {side}"));
            let left = basis(&t, side, Flavour::LfImage);
            let right = basis(&t, side, Flavour::Relative);
            for a in &left {
                for b in &right {
                    let expect = if a.composition == b.composition {
                        quantum_factorial_product(a.composition.parts(), sys.u()).expect("unit")
                    } else {
                        GroupRingElement::zero(sys.context())
                    };
                    let got = geometric_pairing(&t, side, a, b, &sys);
                    c.case(got.is_ok_and(|g| g == expect), || format!("<{a}, {b}> on {t}"));
                }
            }
        }
    }
    c.finish()
}

fn check_embeddings() -> PropertyReport {
    let mut c = Check::new("embeddings: m = 1 identity, injective over Z[x,d] with u = d");
    for t in small_triads(4, 3) {
        let sys = LocalSystemSpec::standard(t.points, CoefficientRing::Integers).expect("m >= 1");
        let e = embedding_matrix(&t, Direction::InToOutLf, &sys).expect("matching m");
        if t.points == 1 {
            c.case(e.is_identity(), || format!("{t}"));
        }
        c.case(certify_injective(&e).is_ok_and(|cert| cert.injective), || format!("{t}"));
    }
    c.finish()
}

fn check_braid(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("braid relations, inverses and pairing invariance");
    for m in 1..=2 {
        for n in 2..=5u32 {
            let rep = BraidRepresentation::new(n, m).expect("m in {1,2}");
            let ev = |s: &str| rep.evaluate(&BraidWord::parse(n, s).expect("valid")).expect("evaluates").matrix;
            for i in 1..n {
                if i + 1 < n {
                    let ok = ev(&format!("{i},{},{i}", i + 1)) == ev(&format!("{},{i},{}", i + 1, i + 1));
                    c.case(ok, || format!("braid relation n = {n}, m = {m}, i = {i}"));
                }
                for j in i + 2..n {
                    c.case(ev(&format!("{i},{j}")) == ev(&format!("{j},{i}")), || format!("commutation n = {n}, m = {m}, {i}, {j}"));
                }
            }
            if n <= 4 {
                for _ in 0..5 {
                    let w = random_word(n, rng.gen_range(0..6), rng);
                    let r = rep.evaluate(&w).expect("evaluates").matrix;
                    let d = rep.evaluate_dual(&w).expect("evaluates").matrix;
                    let inv = rep.evaluate(&w.inverse()).expect("evaluates").matrix;
                    let ok = r.alpha().transpose().mul(&d).is_ok_and(|p| p.is_identity()) && r.mul(&inv).is_ok_and(|p| p.is_identity());
                    c.case(ok, || format!("word {w} on n = {n}, m = {m}"));
                }
            }
        }
    }
    c.finish()
}

fn check_integrality() -> PropertyReport {
    let mut c = Check::new("diagonal conjugation keeps LKB matrices integral");
    for n in 2..=5 {
        let r = diagonal_conjugation_integrality(n, 2);
        c.case(r.as_ref().is_ok_and(|v| v.integral), || format!("n = {n}: {r:?}"));
    }
    c.finish()
}

fn check_circle(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("circle H^1 vanishes iff 1 - m is a unit");
    for ring in [CoefficientRing::Integers, CoefficientRing::Rationals, CoefficientRing::IntegersMod(3)] {
        for rank in 0..=2 {
            let ctx = RingContext::new(rank, ring.clone());
            for _ in 0..20 {
                let m = random_unit(&ctx, rng, 2);
                let one_minus = &GroupRingElement::one(&ctx) - &m;
                let ok = circle_cohomology(&m).is_ok_and(|h| (h.h1 == ModuleDescription::Zero) == one_minus.is_unit().unwrap_or(false));
                c.case(ok, || format!("m = {m} over {ring}"));
            }
        }
    }
    c.finish()
}

fn check_shapiro() -> PropertyReport {
    let mut c = Check::new("Shapiro comparison on the circle and its double cover");
    for ring in [
        CoefficientRing::Integers,
        CoefficientRing::Rationals,
        CoefficientRing::IntegersMod(2),
        CoefficientRing::IntegersMod(3),
        CoefficientRing::IntegersMod(5),
    ] {
        c.case(shapiro_circle_check(&ring).is_ok_and(|v| v.matches), || format!("universal cover over {ring}"));
        c.case(shapiro_finite_cover_check(&ring, 2).is_ok_and(|v| v.matches), || format!("double cover over {ring}"));
    }
    c.finish()
}

fn check_completion(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut c = Check::new("inclusion into the completion is a module map; helices lie outside");
    let ctx = RingContext::new(2, CoefficientRing::Integers);
    for _ in 0..100 {
        let r = random_element(&ctx, rng, 3, 2);
        let a = random_element(&ctx, rng, 3, 2);
        let lhs = include_group_ring(&(&r * &a));
        let ok = module_action(&r, &include_group_ring(&a)).and_then(|rhs| lhs.equals(&rhs)).unwrap_or(false);
        c.case(ok, || format!("r = {r}, a = {a}"));
    }
    let h = helix_class(0, 1, &[1, 0], &[0, 1], ctx.coefficients());
    c.case(h.is_ok_and(|h| !h.is_in_group_ring()), || "helix y = (1,0), z = (0,1)".into());
    let left = helix_class(0, 1, &[1, 0], &[0, 0], ctx.coefficients());
    c.case(left.is_ok_and(|h| h.is_zero()), || "left-circle helix".into());
    c.finish()
}

/// Runs every check with the given seed.
pub fn run_all(seed: u64) -> Result<Vec<PropertyReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        check_alpha(&mut rng),
        check_units(&mut rng),
        check_specialization(&mut rng),
        check_quantum(),
        check_compositions(),
        check_pairings(),
        check_embeddings(),
        check_braid(&mut rng),
        check_integrality(),
        check_circle(&mut rng),
        check_shapiro(),
        check_completion(&mut rng),
    ])
}
