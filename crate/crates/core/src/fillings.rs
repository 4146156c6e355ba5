//! Homological data of minimal symplectic fillings, cap invariants, dual
//! cusp cycles, and Stein-filling geography.
//!
//! The filling record is computed from two toric invariants of the divisor,
//! the charge `q` and the kernel rank of the intersection lattice, so it is
//! constant on equivalence classes. Dual cusp cycles pair negative definite
//! toric-minimal cycles by exchanging their block data, an involution.

use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::classify::{FillStatus, FillabilityVerdict};
use crate::divisor::{format_entries, Divisor};
use crate::lattice::divisor_signature;
use crate::{to_z, Error, Int, Result, Z};

/// Convention statement attached to every filling record: `b1` comes from
/// the boundary computation, which forces `b1 = 0` whenever the lattice is
/// nondegenerate.
pub const B1_CONVENTION_NOTE: &str =
    "b1 is computed as b1 of the boundary minus 1, equal to the kernel rank of the intersection lattice";

/// Betti and characteristic numbers of the minimal symplectic filling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingHomology {
    pub b1: Z,
    pub b2: Z,
    pub b3: Z,
    pub b_plus: Z,
    pub b_minus: Z,
    pub b_zero: Z,
    pub euler: Z,
    pub sigma: Z,
    pub c1_zero: bool,
    pub note: &'static str,
}

impl FillingHomology {
    /// The three internal identities every record must satisfy.
    pub fn identities_hold(&self) -> bool {
        self.b2 == self.b_plus.clone() + &self.b_minus + &self.b_zero
            && self.euler == Z::from(1) - &self.b1 + &self.b2 - &self.b3
            && self.sigma == self.b_plus.clone() - &self.b_minus
    }
}

impl Serialize for FillingHomology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(10))?;
        m.serialize_entry("b1", &self.b1.to_string())?;
        m.serialize_entry("b2", &self.b2.to_string())?;
        m.serialize_entry("b3", &self.b3.to_string())?;
        m.serialize_entry("b_plus", &self.b_plus.to_string())?;
        m.serialize_entry("b_minus", &self.b_minus.to_string())?;
        m.serialize_entry("b_zero", &self.b_zero.to_string())?;
        m.serialize_entry("euler", &self.euler.to_string())?;
        m.serialize_entry("sigma", &self.sigma.to_string())?;
        m.serialize_entry("c1_zero", &self.c1_zero)?;
        m.serialize_entry("note", self.note)?;
        m.end()
    }
}

/// Homology of the minimal filling of a fillable divisor.
///
/// With `q = q(D)` and `k` the kernel rank of the lattice: `b1 = k`,
/// `b_minus = q - 2 + k`, `b2 = 1 + b_minus`, `b_plus = b3 = 0`,
/// `b_zero = 1`, `euler = q`, `sigma = 2 - q - k`, and `c1 = 0`.
pub fn minimal_filling_homology<T: Int>(
    d: &Divisor<T>,
    f: &FillabilityVerdict<T>,
) -> Result<FillingHomology> {
    if f.status != FillStatus::Fillable {
        return Err(Error::NotFillable);
    }
    let q = to_z(&d.charge());
    let k = Z::from(divisor_signature(d).b_zero as i64);
    let b_minus = q.clone() - 2 + &k;
    debug_assert!(b_minus >= Z::from(0), "fillable divisors have b_minus >= 0");
    let record = FillingHomology {
        b1: k.clone(),
        b2: Z::from(1) + &b_minus,
        b3: Z::from(0),
        b_plus: Z::from(0),
        b_minus,
        b_zero: Z::from(1),
        euler: q.clone(),
        sigma: Z::from(2) - &q - &k,
        c1_zero: true,
        note: B1_CONVENTION_NOTE,
    };
    debug_assert!(record.identities_hold());
    Ok(record)
}

/// Invariants of a closed neighborhood cap cut out along the divisor inside
/// an ambient space with second Betti number `ambient_b2`. The Euler number
/// and signature need no ambient data; the Betti fields apply only when the
/// lattice is nonsingular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapInvariants {
    pub euler: Z,
    pub sigma: Z,
    pub b2: Option<Z>,
    pub b1: Option<u8>,
    pub b0: Option<u8>,
}

impl Serialize for CapInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("euler", &self.euler.to_string())?;
        m.serialize_entry("sigma", &self.sigma.to_string())?;
        m.serialize_entry("b2", &self.b2.as_ref().map(|v| v.to_string()))?;
        m.serialize_entry("b1", &self.b1)?;
        m.serialize_entry("b0", &self.b0)?;
        m.end()
    }
}

/// `e(V) = q`, `sigma(V) = 4 - q - 2 b_plus - b_zero`, and for nonsingular
/// lattices `b2(V) = ambient_b2 + 1 - r`, `b1(V) = 0`, `b0(V) = 1`.
pub fn cap_invariants<T: Int>(d: &Divisor<T>, ambient_b2: i64) -> CapInvariants {
    let q = to_z(&d.charge());
    let sig = divisor_signature(d);
    let sigma = Z::from(4) - &q - Z::from(2 * sig.b_plus as i64) - Z::from(sig.b_zero as i64);
    let nonsingular = sig.b_zero == 0;
    CapInvariants {
        euler: q,
        sigma,
        b2: nonsingular.then(|| Z::from(ambient_b2) + 1 - Z::from(d.len() as i64)),
        b1: nonsingular.then_some(0),
        b0: nonsingular.then_some(1),
    }
}

/// One admissible Stein-filling profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeographyCase {
    pub label: u8,
    pub b_plus: u8,
    pub b_zero: u8,
    pub b1: u8,
    pub b_minus: Option<Z>,
    pub c1_zero: Option<bool>,
}

impl Serialize for GeographyCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("case", &self.label)?;
        m.serialize_entry("b_plus", &self.b_plus.to_string())?;
        m.serialize_entry("b_zero", &self.b_zero.to_string())?;
        m.serialize_entry("b1", &self.b1.to_string())?;
        m.serialize_entry("b_minus", &self.b_minus.as_ref().map(|v| v.to_string()))?;
        m.serialize_entry("c1_zero", &self.c1_zero)?;
        m.end()
    }
}

/// The admissible Stein-filling profiles for a negative definite divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeographyReport {
    pub q: Z,
    pub cases: Vec<GeographyCase>,
}

impl Serialize for GeographyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("q", &self.q.to_string())?;
        m.serialize_entry("cases", &self.cases)?;
        m.end()
    }
}

/// Stein-filling geography for a negative definite divisor: the negative
/// definite profile is always admissible with unconstrained `b_minus`; the
/// `(1,1,0)` profile with `b_minus = 21 - q` requires `3 <= q <= 21`; the
/// `(2,0,1)` profile with `b_minus = 22 - q` requires `3 <= q <= 22`. For
/// `q >= 23` only the first profile remains.
pub fn stein_geography<T: Int>(d: &Divisor<T>) -> Result<GeographyReport> {
    let sig = divisor_signature(d);
    if sig.b_plus != 0 || sig.b_zero != 0 {
        return Err(Error::NotNegativeDefinite);
    }
    let q = to_z(&d.charge());
    let three = Z::from(3);
    let mut cases = vec![GeographyCase {
        label: 1,
        b_plus: 0,
        b_zero: 0,
        b1: 1,
        b_minus: None,
        c1_zero: None,
    }];
    if q >= three && q <= Z::from(21) {
        cases.push(GeographyCase {
            label: 2,
            b_plus: 1,
            b_zero: 1,
            b1: 0,
            b_minus: Some(Z::from(21) - &q),
            c1_zero: Some(true),
        });
    }
    if q >= three && q <= Z::from(22) {
        cases.push(GeographyCase {
            label: 3,
            b_plus: 2,
            b_zero: 0,
            b1: 1,
            b_minus: Some(Z::from(22) - &q),
            c1_zero: Some(true),
        });
    }
    Ok(GeographyReport { q, cases })
}

/// A negative definite toric-minimal cusp cycle: every entry at most `-2`,
/// at least one at most `-3`, rotation-normalized to the lexicographically
/// least rotation starting at an entry at most `-3`. Length 1 is allowed
/// and flags an irreducible nodal cusp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspCycle<T: Int = Z> {
    entries: Vec<T>,
}

impl<T: Int> CuspCycle<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        let minus_two = -(T::one() + T::one());
        if entries.is_empty() {
            return Err(Error::NotCuspShape("cycle is empty".into()));
        }
        if entries.iter().any(|e| *e > minus_two) {
            return Err(Error::NotCuspShape("every entry must be at most -2".into()));
        }
        if entries.iter().all(|e| *e == minus_two) {
            return Err(Error::NotCuspShape("some entry must be at most -3".into()));
        }
        let r = entries.len();
        let mut best: Option<usize> = None;
        for k in 0..r {
            if entries[k] >= minus_two {
                continue;
            }
            let Some(held) = best else {
                best = Some(k);
                continue;
            };
            for j in 0..r {
                let candidate = &entries[(k + j) % r];
                let current = &entries[(held + j) % r];
                if candidate < current {
                    best = Some(k);
                    break;
                }
                if candidate > current {
                    break;
                }
            }
        }
        let start = best.expect("a rotation starts below -2");
        let mut entries = entries;
        entries.rotate_left(start);
        Ok(CuspCycle { entries })
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        let converted = entries
            .iter()
            .map(|&e| T::from_i64(e).ok_or(Error::NotCuspShape("entry out of range".into())))
            .collect::<Result<Vec<T>>>()?;
        Self::new(converted)
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// A single-entry cycle, the plumbing shape of an irreducible nodal
    /// cusp.
    pub fn irreducible_nodal(&self) -> bool {
        self.entries.len() == 1
    }

    /// The charge `12 - 3r - sum` of the cycle.
    pub fn charge(&self) -> Z {
        let sum: Z = self.entries.iter().map(to_z).sum();
        Z::from(12) - Z::from(3 * self.entries.len() as i64) - sum
    }

    /// The block data `(a_i, b_i)`: each block is an entry `-a_i <= -3`
    /// followed by `b_i >= 0` entries equal to `-2`.
    fn blocks(&self) -> Vec<(T, usize)> {
        let minus_two = -(T::one() + T::one());
        let mut blocks = Vec::new();
        for e in &self.entries {
            if *e < minus_two {
                blocks.push((-e.clone(), 0));
            } else {
                let last = blocks.last_mut().expect("normalization starts below -2");
                last.1 += 1;
            }
        }
        blocks
    }
}

impl<T: Int> std::fmt::Display for CuspCycle<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_entries(&self.entries))
    }
}

impl<T: Int> Serialize for CuspCycle<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("entries", &EntryList(&self.entries))?;
        m.serialize_entry("irreducible_nodal", &self.irreducible_nodal())?;
        m.end()
    }
}

struct EntryList<'a, T: Int>(&'a [T]);

impl<T: Int> Serialize for EntryList<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for e in self.0 {
            seq.serialize_element(&e.to_string())?;
        }
        seq.end()
    }
}

/// The dual cusp cycle: block data `(a_1, b_1), ..., (a_k, b_k)` maps to
/// the cycle `(-b_1 - 3, -2 x (a_1 - 3), ..., -b_k - 3, -2 x (a_k - 3))`.
/// Applying it twice returns the input, so it is an involution.
pub fn dual_cusp<T: Int>(c: &CuspCycle<T>) -> CuspCycle<T> {
    let three = T::from_i64(3).expect("3 fits");
    let minus_two = -(T::one() + T::one());
    let mut entries = Vec::new();
    for (a, b) in c.blocks() {
        entries.push(-(T::from_usize(b).expect("block length fits") + three.clone()));
        let twos = (a - three.clone()).to_usize().expect("block size fits");
        for _ in 0..twos {
            entries.push(minus_two.clone());
        }
    }
    CuspCycle::new(entries).expect("duals keep the cusp shape")
}
