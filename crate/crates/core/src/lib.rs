//! Symbolic + numeric toolkit for complex Lagrangian mechanics: Wirtinger
//! calculus over immutable expression trees, derivation of complex
//! Euler-Lagrange equations and Kaehler-geometric quantities, transcription
//! oracles for two worked mechanical systems, and fixed-step numerical
//! integration of the resulting dynamics with energy diagnostics.
//!
//! The numeric lane (evaluation, compilation, integration) is generic over
//! the floating-point scalar via [`scalar::Real`]; the aliases below pin
//! the default double-precision instantiation. Symbolic constants are
//! exact complex rationals throughout.

pub mod binding;
pub mod calculus;
pub mod dynamics;
pub mod euler_lagrange;
pub mod eval;
pub mod expr;
pub mod geometry;
pub mod parser;
pub mod printer;
pub mod random;
pub mod sample;
pub mod scalar;
pub mod simplify;
pub mod system;
pub mod verify;

pub use binding::{substitute, Binding, BindingError};
pub use eval::{eval, EvalError, NumPoint};
pub use expr::{CoordRole, CoordSym, Expr, Sym, UnaryFn};
pub use parser::{parse_expr, ParseError};
pub use printer::print_expr;
pub use sample::{equal_numeric, EqualityReport, SampleDomain, SampleError};
pub use scalar::{CRational, Real};
pub use simplify::{conjugate, simplify};
pub use system::SystemSpec;

/// Default floating-point scalar.
pub type Scalar = f64;
/// Default complex number type.
pub type CScalar = num_complex::Complex<Scalar>;
/// Default evaluation point.
pub type Point = NumPoint<Scalar>;
