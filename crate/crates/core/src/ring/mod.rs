//! Exact arithmetic in group rings `k[Z^d]`.

mod coefficient;
mod element;
mod quantum;
mod text;

pub use coefficient::{Coeff, CoefficientRing, DEFAULT_TOLERANCE};
pub use element::{ring_arithmetic, ExponentVector, GroupRingElement, RingContext, RingOp};
pub use quantum::{quantum_factorial, quantum_factorial_product, quantum_integer};
pub use text::{format, from_json_terms, parse, to_json_terms, TermJson};
