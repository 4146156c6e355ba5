//! Boundary torus-bundle monodromy and exact conjugacy canonicalization in
//! `SL(2, Z)`.
//!
//! The boundary of a cycle neighborhood is a torus bundle whose monodromy is
//! a word in the standard generators.  Two bundles agree (respecting all
//! orientations) exactly when their monodromies are conjugate, so everything
//! here funnels into [`conjugacy_canon`], which computes a canonical
//! conjugacy-class representative:
//!
//! * elliptic classes are pinned down by the trace together with a discrete
//!   turning direction,
//! * parabolic classes by a sign and an integer twist,
//! * hyperbolic classes by a sign and a cyclic positive word in
//!   `R = [[1,1],[0,1]]` and `L = [[1,0],[1,1]]`, found by an exact
//!   continued-fraction walk on the expanding fixed point followed by a
//!   greedy factorization.
//!
//! No floating point is involved: fixed-point comparisons are done on
//! quadratic surds with integer square roots.

use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::divisor::Divisor;
use crate::{int, Error, Int, Result, Z};

/// A 2x2 integer matrix of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SL2<T: Int = Z> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: Int> SL2<T> {
    /// Builds a matrix `[[a, b], [c, d]]`, rejecting determinants other
    /// than 1.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if !det.is_one() {
            return Err(Error::NotUnimodular(format!(
                "[[{a}, {b}], [{c}, {d}]] has determinant {det}"
            )));
        }
        Ok(SL2 { a, b, c, d })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        SL2 { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    /// The upper triangular generator power `R^k = [[1, k], [0, 1]]`.
    pub fn r_power(k: &T) -> Self {
        SL2 { a: T::one(), b: k.clone(), c: T::zero(), d: T::one() }
    }

    /// The lower triangular generator power `L^k = [[1, 0], [k, 1]]`.
    pub fn l_power(k: &T) -> Self {
        SL2 { a: T::one(), b: T::zero(), c: k.clone(), d: T::one() }
    }

    pub fn a(&self) -> &T {
        &self.a
    }

    pub fn b(&self) -> &T {
        &self.b
    }

    pub fn c(&self) -> &T {
        &self.c
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        SL2 {
            a: self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            b: self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            c: self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            d: self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        }
    }

    /// The inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        SL2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// The entrywise negation, also of determinant 1.
    pub fn negated(&self) -> Self {
        SL2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    fn apply(&self, v: &(T, T)) -> (T, T) {
        (
            self.a.clone() * v.0.clone() + self.b.clone() * v.1.clone(),
            self.c.clone() * v.0.clone() + self.d.clone() * v.1.clone(),
        )
    }

    fn is_nonnegative(&self) -> bool {
        !self.a.is_negative()
            && !self.b.is_negative()
            && !self.c.is_negative()
            && !self.d.is_negative()
    }
}

impl<T: Int> fmt::Display for SL2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl<T: Int> Serialize for SL2<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ];
        rows.serialize(serializer)
    }
}

/// The product `M(t_r) ... M(t_1)` of the factors `M(t) = [[t, 1], [-1, 0]]`,
/// with the factor for the first entry applied first.
pub fn word_matrix<T: Int>(ts: &[T]) -> SL2<T> {
    assert!(!ts.is_empty(), "word_matrix needs at least one entry");
    let mut result = SL2::identity();
    for t in ts {
        let factor = SL2 { a: t.clone(), b: T::one(), c: -T::one(), d: T::zero() };
        result = factor.mul(&result);
    }
    result
}

/// The boundary monodromy of a divisor: the word matrix of the negated
/// entries.
pub fn monodromy<T: Int>(d: &Divisor<T>) -> SL2<T> {
    let negated: Vec<T> = d.entries().iter().map(|s| -s.clone()).collect();
    word_matrix(&negated)
}

/// The five coarse bundle types, read off the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleKind {
    Elliptic,
    PositiveParabolic,
    NegativeParabolic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

impl BundleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BundleKind::Elliptic => "elliptic",
            BundleKind::PositiveParabolic => "positive-parabolic",
            BundleKind::NegativeParabolic => "negative-parabolic",
            BundleKind::PositiveHyperbolic => "positive-hyperbolic",
            BundleKind::NegativeHyperbolic => "negative-hyperbolic",
        }
    }
}

impl fmt::Display for BundleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for BundleKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Classifies a matrix by its trace: elliptic for |trace| < 2, parabolic for
/// |trace| = 2, hyperbolic otherwise, with the sign of the trace attached.
pub fn bundle_type<T: Int>(m: &SL2<T>) -> BundleKind {
    let t = m.trace();
    let two: T = int(2);
    if t > two {
        BundleKind::PositiveHyperbolic
    } else if t == two {
        BundleKind::PositiveParabolic
    } else if t == -two.clone() {
        BundleKind::NegativeParabolic
    } else if t < -two {
        BundleKind::NegativeHyperbolic
    } else {
        BundleKind::Elliptic
    }
}

/// A positive cyclic word `R^(e_1) L^(e_2) R^(e_3) ...` in the parabolic
/// generators, stored as its run exponents starting with an `R` run, in the
/// lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RlWord<T: Int = Z> {
    runs: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Letter {
    R,
    L,
}

impl<T: Int> RlWord<T> {
    /// Alternating run exponents, `R` run first; always of even length with
    /// every exponent positive.
    pub fn runs(&self) -> &[T] {
        &self.runs
    }

    /// Number of alternating runs (twice the number of `R` runs).
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    fn from_flat(runs: Vec<T>) -> Self {
        assert!(!runs.is_empty() && runs.len().is_multiple_of(2), "run list must pair R and L runs");
        assert!(runs.iter().all(T::is_positive), "run exponents must be positive");
        RlWord { runs: canonical_rotation(runs) }
    }

    fn from_peeled(mut pairs: Vec<(Letter, T)>) -> Self {
        assert!(!pairs.is_empty(), "a hyperbolic matrix cannot have an empty word");
        if pairs.len() >= 2 && pairs[0].0 == pairs[pairs.len() - 1].0 {
            let (_, e) = pairs.pop().expect("nonempty");
            pairs[0].1 += e;
        }
        if pairs[0].0 == Letter::L {
            pairs.rotate_left(1);
        }
        for (i, (letter, _)) in pairs.iter().enumerate() {
            let expected = if i % 2 == 0 { Letter::R } else { Letter::L };
            assert!(*letter == expected, "runs must alternate starting with R");
        }
        Self::from_flat(pairs.into_iter().map(|(_, e)| e).collect())
    }

    /// Rebuilds the matrix product of the word.
    pub fn matrix(&self) -> SL2<T> {
        let mut result = SL2::identity();
        for (i, e) in self.runs.iter().enumerate() {
            let factor = if i % 2 == 0 { SL2::r_power(e) } else { SL2::l_power(e) };
            result = result.mul(&factor);
        }
        result
    }

    /// The word read against the cyclic direction, re-canonicalized.
    pub fn reversed(&self) -> Self {
        let mut rev: Vec<T> = self.runs.iter().rev().cloned().collect();
        rev.rotate_left(1);
        Self::from_flat(rev)
    }
}

fn canonical_rotation<T: Int>(runs: Vec<T>) -> Vec<T> {
    let n = runs.len();
    let mut best: Option<Vec<T>> = None;
    for offset in (0..n).step_by(2) {
        let candidate: Vec<T> = (0..n).map(|i| runs[(offset + i) % n].clone()).collect();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("nonempty run list")
}

impl<T: Int> fmt::Display for RlWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let letter = if i % 2 == 0 { 'R' } else { 'L' };
            if e.is_one() {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A canonical conjugacy-class representative.  Two matrices are conjugate in
/// `SL(2, Z)` exactly when their classes are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BundleClass<T: Int = Z> {
    /// Finite order, |trace| < 2.  There are exactly two classes for each
    /// trace in {-1, 0, 1}, told apart by the turning direction: the sign of
    /// the lower-left entry.  That sign is conjugation-invariant (the entry
    /// is never 0 here, and the invariance is the rotation sense of the
    /// induced map around its fixed point); the six standard representatives
    /// realize both signs for each trace, so trace plus sign is complete.
    Elliptic { trace: i8, positive_turn: bool },
    /// `sign * [[1, n], [0, 1]]` with `sign = -1` exactly when `negated`.
    /// The twist `n` is read in a basis `(v, w)` with `v` a primitive
    /// eigenvector: `sign * A * w = w + n * v`.
    Parabolic { negated: bool, twist: T },
    /// `sign * W` for a positive cyclic word `W` in `R` and `L`.
    Hyperbolic { negated: bool, word: RlWord<T> },
}

impl<T: Int> BundleClass<T> {
    pub fn kind(&self) -> BundleKind {
        match self {
            BundleClass::Elliptic { .. } => BundleKind::Elliptic,
            BundleClass::Parabolic { negated: false, .. } => BundleKind::PositiveParabolic,
            BundleClass::Parabolic { negated: true, .. } => BundleKind::NegativeParabolic,
            BundleClass::Hyperbolic { negated: false, .. } => BundleKind::PositiveHyperbolic,
            BundleClass::Hyperbolic { negated: true, .. } => BundleKind::NegativeHyperbolic,
        }
    }

    /// The class of the bundle with the base circle traversed backwards:
    /// conjugate the inverse by any determinant -1 matrix.  On canonical data
    /// this fixes elliptic and parabolic classes and reverses the cyclic word
    /// of a hyperbolic class.
    pub fn reversal_class(&self) -> Self {
        match self {
            BundleClass::Hyperbolic { negated, word } => {
                BundleClass::Hyperbolic { negated: *negated, word: word.reversed() }
            }
            other => other.clone(),
        }
    }
}

impl<T: Int> fmt::Display for BundleClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleClass::Elliptic { trace, positive_turn } => {
                write!(f, "elliptic(trace {trace}, turn {})", if *positive_turn { '+' } else { '-' })
            }
            BundleClass::Parabolic { twist, .. } => {
                write!(f, "{}(n = {twist})", self.kind())
            }
            BundleClass::Hyperbolic { word, .. } => {
                write!(f, "{}({word})", self.kind())
            }
        }
    }
}

impl<T: Int> Serialize for BundleClass<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("kind", self.kind().as_str())?;
        match self {
            BundleClass::Elliptic { trace, positive_turn } => {
                map.serialize_entry("sign", if *positive_turn { "+" } else { "-" })?;
                map.serialize_entry("data", trace)?;
            }
            BundleClass::Parabolic { negated, twist } => {
                map.serialize_entry("sign", if *negated { "-" } else { "+" })?;
                map.serialize_entry("data", &twist.to_string())?;
            }
            BundleClass::Hyperbolic { negated, word } => {
                map.serialize_entry("sign", if *negated { "-" } else { "+" })?;
                let runs: Vec<String> = word.runs().iter().map(|e| e.to_string()).collect();
                map.serialize_entry("data", &runs)?;
            }
        }
        map.end()
    }
}

/// `(p + u sqrt(delta)) / q` with `delta > 0` not a perfect square and
/// `u, q` nonzero, so the value is irrational; supports exact floor and
/// reciprocal, which is all the reduction walk needs.
struct Surd<T: Int> {
    p: T,
    u: T,
    q: T,
    delta: T,
}

impl<T: Int> Surd<T> {
    fn floor(&self) -> T {
        debug_assert!(!self.u.is_zero() && !self.q.is_zero());
        let radical = (self.u.clone() * self.u.clone() * self.delta.clone()).sqrt();
        let f = if self.u.is_negative() { -radical - T::one() } else { radical };
        let num = self.p.clone() + f;
        if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            (-num - T::one()).div_floor(&-self.q.clone())
        }
    }

    fn recip(&self) -> Self {
        let den = self.p.clone() * self.p.clone()
            - self.u.clone() * self.u.clone() * self.delta.clone();
        assert!(!den.is_zero(), "surd is irrational");
        Surd {
            p: self.q.clone() * self.p.clone(),
            u: -(self.q.clone() * self.u.clone()),
            q: den,
            delta: self.delta.clone(),
        }
    }
}

/// Conjugates a trace >= 3 matrix until all entries are nonnegative, by
/// walking the continued-fraction expansion of its expanding fixed point
/// `((a - d) + sqrt(trace^2 - 4)) / (2c)`.  Each step conjugates by a whole
/// generator power, so the number of steps is small even for huge entries.
fn reduce_to_nonnegative<T: Int>(mut m: SL2<T>) -> SL2<T> {
    let t = m.trace();
    assert!(t >= int(3), "reduction expects trace at least 3");
    let delta = t.clone() * t - int::<T>(4);
    let mut guard = 0usize;
    while !m.is_nonnegative() {
        guard += 1;
        assert!(guard < 100_000, "fixed-point walk failed to settle");
        let q = int::<T>(2) * m.c().clone();
        assert!(!q.is_zero(), "a trace >= 3 matrix has a nonzero lower-left entry");
        let x = Surd { p: m.a().clone() - m.d().clone(), u: T::one(), q, delta: delta.clone() };
        let step = x.floor();
        let (g, gi) = if step.is_zero() {
            let k = x.recip().floor();
            debug_assert!(k.is_positive());
            (SL2::l_power(&k), SL2::l_power(&-k.clone()))
        } else {
            (SL2::r_power(&step), SL2::r_power(&-step.clone()))
        };
        m = gi.mul(&m).mul(&g);
    }
    m
}

/// Factors a nonnegative determinant-1 matrix as a positive word in `R` and
/// `L`, greedily peeling maximal runs from the left.
fn peel_word<T: Int>(mut m: SL2<T>) -> Vec<(Letter, T)> {
    assert!(m.is_nonnegative());
    let mut out: Vec<(Letter, T)> = Vec::new();
    let mut guard = 0usize;
    loop {
        guard += 1;
        assert!(guard < 100_000, "word factorization failed to settle");
        if m.c().is_zero() {
            assert!(m.a().is_one() && m.d().is_one());
            if !m.b().is_zero() {
                out.push((Letter::R, m.b().clone()));
            }
            return out;
        }
        if m.b().is_zero() {
            assert!(m.a().is_one() && m.d().is_one());
            out.push((Letter::L, m.c().clone()));
            return out;
        }
        assert!(m.a().is_positive() && m.d().is_positive());
        let take_r = m.a() >= m.c() && m.b() >= m.d();
        let take_l = m.c() >= m.a() && m.d() >= m.b();
        if take_r {
            let k = m.a().div_floor(m.c()).min(m.b().div_floor(m.d()));
            assert!(k.is_positive());
            m = SL2::r_power(&-k.clone()).mul(&m);
            out.push((Letter::R, k));
        } else if take_l {
            let k = m.c().div_floor(m.a()).min(m.d().div_floor(m.b()));
            assert!(k.is_positive());
            m = SL2::l_power(&-k.clone()).mul(&m);
            out.push((Letter::L, k));
        } else {
            unreachable!("a nonnegative determinant-1 matrix always peels");
        }
    }
}

fn canon_elliptic<T: Int>(m: &SL2<T>) -> BundleClass<T> {
    let trace = m.trace().to_i8().expect("elliptic trace is -1, 0 or 1");
    assert!(!m.c().is_zero(), "an elliptic matrix has a nonzero lower-left entry");
    BundleClass::Elliptic { trace, positive_turn: m.c().is_positive() }
}

fn canon_parabolic<T: Int>(m: &SL2<T>, negated: bool) -> BundleClass<T> {
    let b = if negated { m.negated() } else { m.clone() };
    if b.is_identity() {
        return BundleClass::Parabolic { negated, twist: T::zero() };
    }
    let rows = [
        (b.a().clone() - T::one(), b.b().clone()),
        (b.c().clone(), b.d().clone() - T::one()),
    ];
    let (p, q) = rows
        .into_iter()
        .find(|(p, q)| !p.is_zero() || !q.is_zero())
        .expect("non-identity matrix has a nonzero row in b - I");
    let mut v = (q, -p);
    let g = v.0.gcd(&v.1);
    v = (v.0 / g.clone(), v.1 / g);
    let leading_negative = if v.0.is_zero() { v.1.is_negative() } else { v.0.is_negative() };
    if leading_negative {
        v = (-v.0, -v.1);
    }
    let egcd = v.0.extended_gcd(&v.1);
    debug_assert!(egcd.gcd.is_one());
    let w = (-egcd.y.clone(), egcd.x.clone());
    debug_assert!((v.0.clone() * w.1.clone() - v.1.clone() * w.0.clone()).is_one());
    let z = b.apply(&w);
    let diff = (z.0 - w.0.clone(), z.1 - w.1.clone());
    let twist = if v.0.is_zero() {
        exact_ratio(diff.1.clone(), &v.1)
    } else {
        exact_ratio(diff.0.clone(), &v.0)
    };
    debug_assert!(diff.0 == twist.clone() * v.0.clone() && diff.1 == twist.clone() * v.1);
    BundleClass::Parabolic { negated, twist }
}

fn exact_ratio<T: Int>(a: T, b: &T) -> T {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "eigenvector component must divide exactly");
    q
}

fn canon_hyperbolic<T: Int>(m: &SL2<T>, negated: bool) -> BundleClass<T> {
    let b = if negated { m.negated() } else { m.clone() };
    let word = RlWord::from_peeled(peel_word(reduce_to_nonnegative(b)));
    BundleClass::Hyperbolic { negated, word }
}

/// The canonical conjugacy class of a matrix.  The input itself is never
/// inverted; reading the bundle against the base direction is handled
/// separately by [`BundleClass::reversal_class`].
pub fn conjugacy_canon<T: Int>(m: &SL2<T>) -> BundleClass<T> {
    match bundle_type(m) {
        BundleKind::Elliptic => canon_elliptic(m),
        BundleKind::PositiveParabolic => canon_parabolic(m, false),
        BundleKind::NegativeParabolic => canon_parabolic(m, true),
        BundleKind::PositiveHyperbolic => canon_hyperbolic(m, false),
        BundleKind::NegativeHyperbolic => canon_hyperbolic(m, true),
    }
}

/// The class of the orientation-reversed boundary: the conjugacy class of the
/// inverse monodromy.
pub fn negative_boundary_class<T: Int>(d: &Divisor<T>) -> BundleClass<T> {
    conjugacy_canon(&monodromy(d).inverse())
}

/// The class of the boundary bundle itself.
pub fn divisor_bundle_class<T: Int>(d: &Divisor<T>) -> BundleClass<T> {
    conjugacy_canon(&monodromy(d))
}

/// Whether two classes present the same oriented bundle: the base circle has
/// no preferred direction, so a class matches both itself and its reversal.
pub fn bundle_equal_oriented<T: Int>(x: &BundleClass<T>, y: &BundleClass<T>) -> bool {
    *x == *y || *x == y.reversal_class()
}

/// [`bundle_equal_oriented`] on the boundary classes of two divisors.
pub fn bundle_equal_oriented_divisors<T: Int>(d1: &Divisor<T>, d2: &Divisor<T>) -> bool {
    bundle_equal_oriented(&divisor_bundle_class(d1), &divisor_bundle_class(d2))
}
