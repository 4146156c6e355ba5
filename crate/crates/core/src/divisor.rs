//! Divisors as cyclic integer sequences, and the elementary move calculus.
//!
//! A divisor is stored as a concrete sequence `(s_1, ..., s_r)`, `r >= 2`, but
//! compares, hashes and prints through its canonical form: the
//! lexicographically least sequence among all `2r` rotations and reflections.
//! All moves act on the stored literal sequence, so a [`MoveTrace`] replays to
//! a concrete literal; only the endpoints of a trace are compared cyclically.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::{Error, Int, Result, Z};

/// A circular spherical divisor: the cyclic sequence of self-intersection
/// numbers of a cycle of spheres.
#[derive(Debug, Clone)]
pub struct Divisor<T: Int = Z> {
    entries: Vec<T>,
}

/// Where a canonical reading starts in the stored sequence and whether it runs
/// backwards: canonical index `j` reads stored index `start + j` (forward) or
/// `start - j` (reflected), both mod `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalFrame {
    pub start: usize,
    pub reflected: bool,
}

impl<T: Int> Divisor<T> {
    /// Builds a divisor from its entries; at least two are required.
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::TooShort(entries.len()));
        }
        Ok(Divisor { entries })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| crate::int(e)).collect())
    }

    /// Number of sphere components `r`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; a divisor has at least two entries.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The stored (not canonicalized) entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Consumes the divisor, returning its stored entries.
    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    /// The same divisor with arbitrary-precision entries.
    pub fn to_bigint(&self) -> Divisor<crate::Z> {
        Divisor { entries: self.entries.iter().map(crate::to_z).collect() }
    }

    /// The charge `q(D) = 12 - 3r - sum(s_i)`: invariant under toric moves,
    /// incremented by each non-toric blow-up.
    pub fn charge(&self) -> T {
        let r = crate::int::<T>(self.entries.len() as i64);
        let sum = self
            .entries
            .iter()
            .fold(T::zero(), |acc, e| acc + e.clone());
        crate::int::<T>(12) - crate::int::<T>(3) * r - sum
    }

    /// The square `[D]^2 = sum(s_i + 2)` of the total homology class.
    pub fn self_intersection_square(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, e| acc + e.clone() + crate::int(2))
    }

    /// Number of entries that are `>= 0`.
    pub fn nonnegative_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_negative()).count()
    }

    /// The least entry value.
    pub fn min_entry(&self) -> &T {
        self.entries.iter().min().expect("nonempty")
    }

    /// The sequence read in the opposite cyclic direction.
    pub fn reversed(&self) -> Self {
        let mut v = self.entries.clone();
        v.reverse();
        Divisor { entries: v }
    }

    /// The sequence rotated so stored index `k` comes first.
    pub fn rotated(&self, k: usize) -> Self {
        let r = self.entries.len();
        let k = k % r;
        let mut v = Vec::with_capacity(r);
        v.extend_from_slice(&self.entries[k..]);
        v.extend_from_slice(&self.entries[..k]);
        Divisor { entries: v }
    }

    fn frame_index(&self, f: CanonicalFrame, j: usize) -> usize {
        let r = self.entries.len();
        if f.reflected {
            (f.start + r - j % r) % r
        } else {
            (f.start + j) % r
        }
    }

    fn frame_cmp(&self, a: CanonicalFrame, b: CanonicalFrame) -> Ordering {
        for j in 0..self.entries.len() {
            let x = &self.entries[self.frame_index(a, j)];
            let y = &self.entries[self.frame_index(b, j)];
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// The reading frame that realizes the canonical form.
    pub fn canonical_frame(&self) -> CanonicalFrame {
        let r = self.entries.len();
        let mut best = CanonicalFrame { start: 0, reflected: false };
        for reflected in [false, true] {
            for start in 0..r {
                let cand = CanonicalFrame { start, reflected };
                if self.frame_cmp(cand, best) == Ordering::Less {
                    best = cand;
                }
            }
        }
        best
    }

    /// The canonical entries: lexicographic minimum over all rotations and
    /// reflections.
    pub fn canonical_entries(&self) -> Vec<T> {
        let f = self.canonical_frame();
        (0..self.entries.len())
            .map(|j| self.entries[self.frame_index(f, j)].clone())
            .collect()
    }

    /// The divisor rewritten in canonical form.
    pub fn canonical_form(&self) -> Self {
        Divisor { entries: self.canonical_entries() }
    }

    /// Whether the stored sequence already is the canonical form.
    pub fn is_canonical(&self) -> bool {
        self.canonical_frame() == CanonicalFrame { start: 0, reflected: false }
    }

    /// Whether no toric blow-down applies: no `-1` entry, or length two
    /// (blow-downs of length-two divisors are excluded).
    pub fn is_toric_minimal(&self) -> bool {
        let minus_one = -T::one();
        self.entries.len() == 2 || self.entries.iter().all(|e| *e != minus_one)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.entries.len() {
            Err(Error::OutOfRange { index, len: self.entries.len() })
        } else {
            Ok(())
        }
    }

    /// Toric blow-up at edge `i`: the edge joins components `i-1` and `i`
    /// cyclically; both lose 1 and a `-1` entry is inserted between them.
    /// Edge 0 is the wrap-around edge, so the `-1` is appended at the end.
    pub fn toric_blow_up(&self, edge: usize) -> Result<Self> {
        self.check_index(edge)?;
        let r = self.entries.len();
        let mut v = self.entries.clone();
        let prev = (edge + r - 1) % r;
        v[prev] -= T::one();
        v[edge] -= T::one();
        if edge == 0 {
            v.push(-T::one());
        } else {
            v.insert(edge, -T::one());
        }
        Ok(Divisor { entries: v })
    }

    /// Toric blow-down of the `-1` entry at `index`: both cyclic neighbors
    /// gain 1 and the entry is removed.
    pub fn toric_blow_down(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let r = self.entries.len();
        if self.entries[index] != -T::one() {
            return Err(Error::NotExceptional {
                index,
                value: self.entries[index].to_string(),
            });
        }
        if r == 2 {
            return Err(Error::LengthTwo);
        }
        let mut v = self.entries.clone();
        let prev = (index + r - 1) % r;
        let next = (index + 1) % r;
        v[prev] += T::one();
        v[next] += T::one();
        v.remove(index);
        Ok(Divisor { entries: v })
    }

    /// Balancing move across the `0` entry at `zero_index`: the predecessor
    /// loses `n`, the successor gains `n`.  Negative `n` transfers the other
    /// way.  Equal to `|n|` blow-up/blow-down composites.
    pub fn balancing_move(&self, zero_index: usize, n: &T) -> Result<Self> {
        self.check_index(zero_index)?;
        let r = self.entries.len();
        if !self.entries[zero_index].is_zero() {
            return Err(Error::NotZero {
                index: zero_index,
                value: self.entries[zero_index].to_string(),
            });
        }
        if r == 2 {
            return Err(Error::LengthTwo);
        }
        let mut v = self.entries.clone();
        let prev = (zero_index + r - 1) % r;
        let next = (zero_index + 1) % r;
        v[prev] -= n.clone();
        v[next] += n.clone();
        Ok(Divisor { entries: v })
    }

    /// Collapses the adjacent zero pair at `(index, index+1)`: the pair is
    /// replaced by a single `1` and both outer neighbors gain 1; for length
    /// three, `(0,0,p)` becomes `(1, p+2)`.
    pub fn zero_pair_collapse(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let r = self.entries.len();
        let partner = (index + 1) % r;
        if !self.entries[index].is_zero() || !self.entries[partner].is_zero() {
            return Err(Error::NotZeroPair { index });
        }
        if r == 2 {
            return Err(Error::LengthTwo);
        }
        let mut v = self.entries.clone();
        let prev = (index + r - 1) % r;
        let next = (index + 2) % r;
        v[prev] += T::one();
        v[next] += T::one();
        if index == r - 1 {
            v.remove(r - 1);
            v.remove(0);
            v.push(T::one());
        } else {
            v.remove(index + 1);
            v[index] = T::one();
        }
        Ok(Divisor { entries: v })
    }

    /// Non-toric blow-up at `index`: the entry drops by 1 and the charge
    /// rises by 1.
    pub fn non_toric_blow_up(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let mut v = self.entries.clone();
        v[index] -= T::one();
        Ok(Divisor { entries: v })
    }

    /// Smoothing of edge `i`: components `i` and `i+1` merge into a single
    /// one of self-intersection `s_i + s_{i+1} + 2`.  Not a toric move.
    pub fn smoothing(&self, edge: usize) -> Result<Self> {
        self.check_index(edge)?;
        let r = self.entries.len();
        if r == 2 {
            return Err(Error::LengthTwo);
        }
        let mut v = self.entries.clone();
        if edge == r - 1 {
            let merged = v[r - 1].clone() + v[0].clone() + crate::int(2);
            v.remove(r - 1);
            v[0] = merged;
        } else {
            v[edge] = v[edge].clone() + v[edge + 1].clone() + crate::int(2);
            v.remove(edge + 1);
        }
        Ok(Divisor { entries: v })
    }

    /// Applies a single recorded move step.
    pub fn apply(&self, step: &MoveStep<T>) -> Result<Self> {
        match step {
            MoveStep::ToricBlowUp { edge } => self.toric_blow_up(*edge),
            MoveStep::ToricBlowDown { index } => self.toric_blow_down(*index),
            MoveStep::Balancing { index, n } => self.balancing_move(*index, n),
            MoveStep::ZeroPairCollapse { index } => self.zero_pair_collapse(*index),
            MoveStep::NonToricBlowUp { index } => self.non_toric_blow_up(*index),
            MoveStep::Smoothing { edge } => self.smoothing(*edge),
        }
    }

    /// Parses a divisor literal: `'(' int (',' int)* ')'`, optional
    /// whitespace anywhere between tokens.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_entry_list(text)?;
        if entries.len() < 2 {
            return Err(Error::Parse {
                pos: text.len(),
                msg: "a divisor needs at least two entries".to_string(),
            });
        }
        Ok(Divisor { entries })
    }

    /// The stored literal, formatted without canonicalization.
    pub fn literal_string(&self) -> String {
        format_entries(&self.entries)
    }
}

pub fn format_entries<T: Int>(entries: &[T]) -> String {
    let mut s = String::from("(");
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&e.to_string());
    }
    s.push(')');
    s
}

/// Parses a parenthesized integer list: `'(' int (',' int)* ')'`, optional
/// whitespace anywhere between tokens. Accepts a single entry; callers with
/// a length floor check it themselves.
pub fn parse_entry_list<T: Int>(text: &str) -> Result<Vec<T>> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos >= bytes.len() || bytes[pos] != b'(' {
        return Err(err(pos, "expected '('"));
    }
    pos += 1;
    let mut entries: Vec<T> = Vec::new();
    loop {
        skip_ws(&mut pos);
        let negative = if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
            let neg = bytes[pos] == b'-';
            pos += 1;
            neg
        } else {
            false
        };
        skip_ws(&mut pos);
        let digits_start = pos;
        let mut value = T::zero();
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            value = value * crate::int(10) + crate::int((bytes[pos] - b'0') as i64);
            pos += 1;
        }
        if pos == digits_start {
            return Err(err(pos, "expected an integer"));
        }
        entries.push(if negative { -value } else { value });
        skip_ws(&mut pos);
        match bytes.get(pos) {
            Some(b',') => pos += 1,
            Some(b')') => {
                pos += 1;
                break;
            }
            _ => return Err(err(pos, "expected ',' or ')'")),
        }
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "unexpected trailing input"));
    }
    Ok(entries)
}

impl<T: Int> PartialEq for Divisor<T> {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self.canonical_entries() == other.canonical_entries()
    }
}

impl<T: Int> Eq for Divisor<T> {}

impl<T: Int> Hash for Divisor<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_entries().hash(state);
    }
}

impl<T: Int> PartialOrd for Divisor<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> Ord for Divisor<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries
            .len()
            .cmp(&other.entries.len())
            .then_with(|| self.canonical_entries().cmp(&other.canonical_entries()))
    }
}

impl<T: Int> fmt::Display for Divisor<T> {
    /// Prints the canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_entries(&self.canonical_entries()))
    }
}

impl<T: Int> Serialize for Divisor<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let canon = self.canonical_entries();
        let mut seq = serializer.serialize_seq(Some(canon.len()))?;
        for e in &canon {
            seq.serialize_element(&e.to_string())?;
        }
        seq.end()
    }
}

/// One elementary move, recorded with enough data to replay it.
///
/// Toric blow-ups/blow-downs, balancing moves and zero-pair collapses are the
/// toric-equivalence moves; non-toric blow-ups raise the charge; smoothings
/// change the underlying cycle and appear only in non-equivalence traces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveStep<T: Int = Z> {
    ToricBlowUp { edge: usize },
    ToricBlowDown { index: usize },
    Balancing { index: usize, n: T },
    ZeroPairCollapse { index: usize },
    NonToricBlowUp { index: usize },
    Smoothing { edge: usize },
}

impl<T: Int> fmt::Display for MoveStep<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveStep::ToricBlowUp { edge } => write!(f, "toric blow-up at edge {edge}"),
            MoveStep::ToricBlowDown { index } => write!(f, "toric blow-down at {index}"),
            MoveStep::Balancing { index, n } => write!(f, "balancing at {index} by {n}"),
            MoveStep::ZeroPairCollapse { index } => write!(f, "zero-pair collapse at {index}"),
            MoveStep::NonToricBlowUp { index } => write!(f, "non-toric blow-up at {index}"),
            MoveStep::Smoothing { edge } => write!(f, "smoothing at edge {edge}"),
        }
    }
}

impl<T: Int> Serialize for MoveStep<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            MoveStep::ToricBlowUp { edge } => {
                map.serialize_entry("move", "toric-blow-up")?;
                map.serialize_entry("index", edge)?;
            }
            MoveStep::ToricBlowDown { index } => {
                map.serialize_entry("move", "toric-blow-down")?;
                map.serialize_entry("index", index)?;
            }
            MoveStep::Balancing { index, n } => {
                map.serialize_entry("move", "balancing")?;
                map.serialize_entry("index", index)?;
                map.serialize_entry("n", &n.to_string())?;
            }
            MoveStep::ZeroPairCollapse { index } => {
                map.serialize_entry("move", "zero-pair-collapse")?;
                map.serialize_entry("index", index)?;
            }
            MoveStep::NonToricBlowUp { index } => {
                map.serialize_entry("move", "non-toric-blow-up")?;
                map.serialize_entry("index", index)?;
            }
            MoveStep::Smoothing { edge } => {
                map.serialize_entry("move", "smoothing")?;
                map.serialize_entry("index", edge)?;
            }
        }
        map.end()
    }
}

/// A replayable certificate: a source divisor and the moves applied to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace<T: Int = Z> {
    pub source: Divisor<T>,
    pub steps: Vec<MoveStep<T>>,
}

impl<T: Int> MoveTrace<T> {
    /// An empty trace starting at `source`.
    pub fn new(source: Divisor<T>) -> Self {
        MoveTrace { source, steps: Vec::new() }
    }

    /// Replays every step from the source, returning the final divisor.
    pub fn replay(&self) -> Result<Divisor<T>> {
        let mut d = self.source.clone();
        for step in &self.steps {
            d = d.apply(step)?;
        }
        Ok(d)
    }

    /// Replays the trace, returning the source and every intermediate state.
    pub fn states(&self) -> Result<Vec<Divisor<T>>> {
        let mut out = vec![self.source.clone()];
        for step in &self.steps {
            let next = out.last().expect("nonempty").apply(step)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Whether the trace has no steps.
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl<T: Int> Serialize for MoveTrace<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("steps", &self.steps)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[i64]) -> Divisor<i64> {
        Divisor::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(d(&[0, -5]).canonical_entries(), vec![-5, 0]);
        assert_eq!(d(&[1, 1, 1]).canonical_entries(), vec![1, 1, 1]);
        assert_eq!(d(&[3, -2, 0]).canonical_entries(), vec![-2, 0, 3]);
    }

    #[test]
    fn canonical_form_orbit_constant() {
        let base = d(&[2, -1, 0, -3, 5]);
        let canon = base.canonical_entries();
        for k in 0..base.len() {
            assert_eq!(base.rotated(k).canonical_entries(), canon);
            assert_eq!(base.rotated(k).reversed().canonical_entries(), canon);
        }
        assert!(base.canonical_form().is_canonical());
    }

    #[test]
    fn charge_and_square() {
        assert_eq!(d(&[1, 1, 1]).charge(), 0);
        assert_eq!(d(&[-2; 7]).charge(), 12 - 7);
        assert_eq!(d(&[1, -2, -3, -3, -2, -3, -2]).charge(), 5);
        assert_eq!(d(&[1, 1, 1]).self_intersection_square(), 9);
        assert_eq!(d(&[-1, -4]).self_intersection_square(), -1);
        assert_eq!(d(&[-2; 5]).self_intersection_square(), 0);
        assert_eq!(d(&[1, 1, 1]).nonnegative_count(), 3);
        assert_eq!(d(&[0, -5]).nonnegative_count(), 1);
        assert_eq!(d(&[-1, -3]).nonnegative_count(), 0);
    }

    #[test]
    fn blow_up_examples() {
        assert_eq!(d(&[3, -2, 0]).toric_blow_up(0).unwrap().entries(), &[2, -2, -1, -1]);
        assert_eq!(d(&[1, 1, 1]).toric_blow_up(1).unwrap().entries(), &[0, -1, 0, 1]);
        assert_eq!(
            d(&[0, 0, 4, 7]).toric_blow_up(1).unwrap().entries(),
            &[-1, -1, -1, 4, 7]
        );
    }

    #[test]
    fn blow_down_examples() {
        assert_eq!(d(&[2, -2, -1, -1]).toric_blow_down(3).unwrap().entries(), &[3, -2, 0]);
        assert_eq!(d(&[2, -2, -1, -1]).toric_blow_down(2).unwrap().entries(), &[2, -1, 0]);
        assert_eq!(d(&[-1, -4]).toric_blow_down(0), Err(Error::LengthTwo));
        assert!(matches!(
            d(&[2, -2, -1, -1]).toric_blow_down(0),
            Err(Error::NotExceptional { index: 0, .. })
        ));
    }

    #[test]
    fn blow_down_inverts_blow_up() {
        let base = d(&[2, -1, 0, -3, 5]);
        for edge in 0..base.len() {
            let up = base.toric_blow_up(edge).unwrap();
            let inserted = if edge == 0 { base.len() } else { edge };
            assert_eq!(up.entries()[inserted], -1);
            let down = up.toric_blow_down(inserted).unwrap();
            assert_eq!(down.entries(), base.entries());
        }
    }

    #[test]
    fn balancing_examples() {
        assert_eq!(d(&[1, 0, -3]).balancing_move(1, &1).unwrap().entries(), &[0, 0, -2]);
        assert_eq!(d(&[3, -2, 0]).balancing_move(2, &-1).unwrap().entries(), &[2, -1, 0]);
        assert_eq!(d(&[5, 0, -3]).balancing_move(1, &0).unwrap().entries(), &[5, 0, -3]);
        assert!(matches!(
            d(&[1, 0, -3]).balancing_move(0, &1),
            Err(Error::NotZero { index: 0, .. })
        ));
        assert_eq!(d(&[4, 0]).balancing_move(1, &1), Err(Error::LengthTwo));
    }

    #[test]
    fn balancing_matches_its_composite() {
        let base = d(&[1, 0, -3, 2]);
        let direct = base.balancing_move(1, &1).unwrap();
        let composite = base
            .toric_blow_up(1)
            .unwrap()
            .toric_blow_down(2)
            .unwrap();
        assert_eq!(direct.entries(), composite.entries());
        let direct_neg = base.balancing_move(1, &-1).unwrap();
        let composite_neg = base
            .toric_blow_up(2)
            .unwrap()
            .toric_blow_down(1)
            .unwrap();
        assert_eq!(direct_neg.entries(), composite_neg.entries());
    }

    #[test]
    fn zero_pair_collapse_examples() {
        assert_eq!(d(&[0, 0, 0, 7]).zero_pair_collapse(0).unwrap().entries(), &[1, 1, 8]);
        assert_eq!(d(&[0, 0, -2]).zero_pair_collapse(0).unwrap().entries(), &[1, 0]);
        assert_eq!(d(&[0, 0, -3, -3]).zero_pair_collapse(0).unwrap().entries(), &[1, -2, -2]);
        assert!(matches!(
            d(&[0, 1, 0]).zero_pair_collapse(0),
            Err(Error::NotZeroPair { index: 0 })
        ));
    }

    #[test]
    fn zero_pair_collapse_wraparound() {
        let base = d(&[0, -3, 0]);
        let collapsed = base.zero_pair_collapse(2).unwrap();
        assert_eq!(collapsed.entries(), &[-1, 1]);
        assert_eq!(collapsed, d(&[1, -1]));
    }

    #[test]
    fn zero_pair_collapse_matches_its_composite() {
        for (entries, index) in [
            (vec![0i64, 0, -2, 5], 0usize),
            (vec![4, 0, 0, -2], 1),
            (vec![0, -2, 5, 0], 3),
            (vec![0, 0, -4], 0),
        ] {
            let base = d(&entries);
            let direct = base.zero_pair_collapse(index).unwrap();
            let r = base.len();
            let up_edge = (index + 1) % r;
            let up = base.toric_blow_up(up_edge).unwrap();
            let first_zero = index;
            let second_zero = if up_edge == 0 { 0 } else { index + 2 };
            let (a, b) = if first_zero < second_zero {
                (second_zero, first_zero)
            } else {
                (first_zero, second_zero)
            };
            let composite = up.toric_blow_down(a).unwrap().toric_blow_down(b).unwrap();
            assert_eq!(direct.entries(), composite.entries(), "pair at {index} in {entries:?}");
        }
    }

    #[test]
    fn non_toric_blow_up_charge() {
        let base = d(&[1, 4]);
        let blown = base.non_toric_blow_up(0).unwrap();
        assert_eq!(blown.entries(), &[0, 4]);
        assert_eq!(blown.charge() - base.charge(), 1);
    }

    #[test]
    fn smoothing_examples() {
        let d5 = d(&[-2; 5]);
        for edge in 0..5 {
            assert_eq!(d5.smoothing(edge).unwrap(), d(&[-2; 4]));
        }
        assert_eq!(d(&[1, 1, 1]).smoothing(0).unwrap().entries(), &[4, 1]);
        assert_eq!(d(&[0, -5, -2]).smoothing(1).unwrap().entries(), &[0, -5]);
        assert_eq!(d(&[0, -5, -2]).smoothing(2).unwrap().entries(), &[0, -5]);
        assert_eq!(d(&[1, -1]).smoothing(0), Err(Error::LengthTwo));
    }

    #[test]
    fn parse_round_trip() {
        let div: Divisor<i64> = Divisor::parse(" ( 1, -2 , -3 ) ").unwrap();
        assert_eq!(div.entries(), &[1, -2, -3]);
        assert_eq!(Divisor::<i64>::parse("(1,-2,-3)").unwrap().to_string(), "(-3,-2,1)");
        assert!(matches!(Divisor::<i64>::parse("1,2"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(Divisor::<i64>::parse("(1,)"), Err(Error::Parse { .. })));
        assert!(matches!(Divisor::<i64>::parse("(4)"), Err(Error::Parse { .. })));
        assert!(matches!(Divisor::<i64>::parse("(1,2) x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn trace_replay() {
        let mut trace = MoveTrace::new(d(&[3, -2, 0]));
        trace.steps.push(MoveStep::ToricBlowUp { edge: 0 });
        trace.steps.push(MoveStep::ToricBlowDown { index: 2 });
        let end = trace.replay().unwrap();
        assert_eq!(end.entries(), &[2, -1, 0]);
        assert_eq!(trace.states().unwrap().len(), 3);
    }
}
