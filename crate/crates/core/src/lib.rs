//! Algebraic ZX-calculus over arbitrary complex parameters.
//!
//! Diagrams are built from green spiders, Hadamard boxes and triangles
//! ([`diagram`]), interpreted exactly as complex matrices ([`semantics`]),
//! rewritten with a catalogue of sound rules ([`rules`], [`rewrite`]) and
//! brought into a unique normal form built from elementary row operations
//! ([`normalform`]), which decides equality ([`equivalence`]).

pub mod diagram;
pub mod equivalence;
pub mod gadgets;
pub mod io;
pub mod normalform;
pub mod rewrite;
pub mod rules;
pub mod semantics;
pub mod testing;

pub use num_complex::Complex64 as C64;
