//! Exact invariants and classification for circular spherical divisors.
//!
//! A circular spherical divisor is a cycle of symplectic spheres, recorded as
//! the cyclic sequence of self-intersection numbers `(s_1, ..., s_r)`.  Two
//! sequences describe the same divisor when they differ by a rotation or a
//! reversal.  This crate computes the standard invariants of such a cycle and
//! of its boundary torus bundle, decides convexity of its neighborhoods by an
//! exact linear program, searches for toric equivalences between cycles with
//! replayable move certificates, and classifies cycles by symplectic
//! fillability of the boundary and by realizability as an anti-canonical
//! divisor.
//!
//! Everything is computed in exact integer or rational arithmetic.  The scalar
//! type is generic: any type implementing [`Int`] works, and the crate-level
//! aliases [`Z`] (arbitrary-precision integers) and [`Q`] (rationals over
//! [`Z`]) are the defaults used throughout.  `i64` satisfies [`Int`] as well
//! and is convenient for bulk enumeration where coefficient growth is known to
//! be bounded; all public types default their scalar parameter to [`Z`].
//!
//! Module map:
//!
//! * [`divisor`]: the [`Divisor`](divisor::Divisor) type, cyclic canonical
//!   forms, the move calculus (toric and non-toric blow-ups, blow-downs,
//!   balancing moves, zero-pair collapses, smoothings) and replayable
//!   [`MoveTrace`](divisor::MoveTrace) certificates.
//! * [`lattice`]: the intersection matrix, exact characteristic polynomials,
//!   signatures, Smith normal forms and boundary homology.
//! * [`sl2z`]: boundary torus-bundle monodromy and exact conjugacy
//!   canonicalization in `SL(2, Z)`.
//! * [`convexity`]: the exact-LP concavity/convexity test with rational
//!   certificates, and the signature trichotomy it is cross-checked against.
//! * [`equiv`]: toric-equivalence search between two cycles, returning either
//!   a replayable move trace, an invariant that separates them, or an honest
//!   "search budget exhausted".
//! * [`classify`]: fillability of the boundary bundle, blown-up-cycle
//!   domination checks, anti-canonical realizability, and rigidity reports.
//! * [`fillings`]: homological invariants of minimal symplectic fillings,
//!   concave caps, the geography of Stein fillings, and the dual-cusp
//!   involution on negative cusp cycles.

pub mod classify;
pub mod convexity;
pub mod divisor;
pub mod equiv;
pub mod fillings;
pub mod lattice;
pub mod sl2z;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Arbitrary-precision integers, the default scalar.
pub type Z = num_bigint::BigInt;

/// Rationals over [`Z`].
pub type Q = num_rational::Ratio<Z>;

/// Exact rationals over an arbitrary [`Int`] scalar.
pub type Rat<T> = num_rational::Ratio<T>;

/// Integer scalars the crate can compute with.
///
/// The bounds are exactly what the algorithms need: Euclidean integer
/// arithmetic ([`Integer`]), signs ([`Signed`]), integer roots for exact
/// quadratic-surd comparisons ([`num_integer::Roots`]), in-place operators,
/// conversions from and to machine integers, and hashing for canonical-form
/// tables.  [`Z`] and the primitive signed integers satisfy all of them.
pub trait Int:
    Integer
    + Signed
    + num_integer::Roots
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + num_integer::Roots
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Converts any [`Int`] scalar into an arbitrary-precision integer exactly.
pub fn to_z<T: Int>(v: &T) -> Z {
    v.to_i128()
        .map(Z::from)
        .unwrap_or_else(|| v.to_string().parse().expect("Int scalars print as decimal integers"))
}

/// Converts a machine integer into any [`Int`] scalar.
pub fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("i64 fits in every Int scalar")
}

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A divisor needs at least two entries.
    #[error("a divisor needs at least two entries, got {0}")]
    TooShort(usize),
    /// Malformed divisor literal.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// An index does not name an entry of the divisor.
    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },
    /// Blow-down requires a `-1` entry.
    #[error("entry {index} is {value}, expected -1")]
    NotExceptional { index: usize, value: String },
    /// Blow-down would shorten a divisor below length two.
    #[error("cannot blow down a divisor of length two")]
    LengthTwo,
    /// Balancing requires a `0` pivot entry.
    #[error("entry {index} is {value}, expected 0")]
    NotZero { index: usize, value: String },
    /// Zero-pair collapse requires two adjacent `0` entries.
    #[error("entries {index} and its successor do not form a zero pair")]
    NotZeroPair { index: usize },
    /// A matrix that should lie in `SL(2, Z)` does not.
    #[error("matrix is not in SL(2,Z): determinant {0}")]
    NotUnimodular(String),
    /// The operation is defined only for concave divisors.
    #[error("divisor is not concave")]
    NotConcave,
    /// The operation is defined only for strictly semi-definite divisors.
    #[error("divisor is not strictly semi-definite")]
    NotSemidefinite,
    /// The operation is defined only for fillable divisors.
    #[error("divisor is not fillable")]
    NotFillable,
    /// The operation requires a negative definite intersection lattice.
    #[error("intersection lattice is not negative definite")]
    NotNegativeDefinite,
    /// The input is not a negative cusp cycle.
    #[error("not a cusp cycle: {0}")]
    NotCuspShape(String),
    /// The divisor does not have the blown-up cycle shape.
    #[error("divisor does not have the blown-up cycle shape")]
    WrongShape,
    /// A search budget field is not usable.
    #[error("invalid search budget: {0}")]
    BudgetInvalid(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
