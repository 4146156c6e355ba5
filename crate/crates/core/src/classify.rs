//! Fillability classification, the blown-up domination test, and the
//! anti-canonical witness search.
//!
//! A concave divisor is fillable exactly when it is toric equivalent to a
//! member of one of four families, each pinned down by the bundle class of
//! its negatively oriented boundary: lens-type elliptic classes, positive
//! and negative parabolic classes with bounded twist, and negative
//! hyperbolic classes whose cyclic words encode cycles `(p_1, ..., p_l)`.
//! Anti-canonical divisors are recognized by searching blow-up paths from
//! the minimal-model seed families.

use std::collections::{HashSet, VecDeque};

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::convexity::{trichotomy, Trichotomy};
use crate::divisor::{Divisor, MoveStep, MoveTrace};
use crate::equiv::{decide_equivalence, invariant_screen, toric_minimal_reduction, EquivKind, Mismatch, SearchBudget};
use crate::lattice::divisor_signature;
use crate::sl2z::{bundle_equal_oriented, bundle_equal_oriented_divisors, negative_boundary_class, BundleClass, RlWord};
use crate::{Error, Int, Result, Z};

/// Top-level fillability outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillStatus {
    Fillable,
    NotFillable,
    Inconclusive,
}

impl FillStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FillStatus::Fillable => "fillable",
            FillStatus::NotFillable => "not_fillable",
            FillStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Machine-readable grounds for a fillability verdict.
#[derive(Debug, Clone)]
pub enum FillReason<T: Int = Z> {
    BPlusAtLeastTwo,
    BundleMismatch,
    NotBlownUp,
    InvariantMismatch(Mismatch),
    Certificate(MoveTrace<T>),
    Budget,
}

impl<T: Int> FillReason<T> {
    pub fn code(&self) -> &'static str {
        match self {
            FillReason::BPlusAtLeastTwo => "b-plus-ge-2",
            FillReason::BundleMismatch => "bundle-mismatch",
            FillReason::NotBlownUp => "not-blown-up",
            FillReason::InvariantMismatch(_) => "invariant-mismatch",
            FillReason::Certificate(_) => "certificate",
            FillReason::Budget => "budget",
        }
    }
}

impl<T: Int> Serialize for FillReason<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let extra = matches!(self, FillReason::InvariantMismatch(_) | FillReason::Certificate(_));
        let mut m = s.serialize_map(Some(if extra { 2 } else { 1 }))?;
        m.serialize_entry("code", self.code())?;
        match self {
            FillReason::InvariantMismatch(w) => m.serialize_entry("witness", w)?,
            FillReason::Certificate(t) => m.serialize_entry("trace", t)?,
            _ => {}
        }
        m.end()
    }
}

/// The fillability verdict: status, the matched family (1 to 4) when one
/// exists, the family representative, and the grounds.
#[derive(Debug, Clone)]
pub struct FillabilityVerdict<T: Int = Z> {
    pub status: FillStatus,
    pub family: Option<u8>,
    pub representative: Option<Divisor<T>>,
    pub reason: FillReason<T>,
}

impl<T: Int> Serialize for FillabilityVerdict<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("status", self.status.as_str())?;
        m.serialize_entry("family", &self.family)?;
        m.serialize_entry("representative", &self.representative)?;
        m.serialize_entry("reason", &self.reason)?;
        m.end()
    }
}

/// Anti-canonical search outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcStatus {
    AntiCanonical,
    NotAntiCanonical,
    Inconclusive,
}

impl AcStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AcStatus::AntiCanonical => "anti_canonical",
            AcStatus::NotAntiCanonical => "not_anti_canonical",
            AcStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Anti-canonical verdict with an optional blow-up witness from a
/// minimal-model seed and, for negative answers, the obstruction used.
#[derive(Debug, Clone)]
pub struct AntiCanonicalVerdict<T: Int = Z> {
    pub status: AcStatus,
    pub witness: Option<MoveTrace<T>>,
    pub obstruction: Option<&'static str>,
}

impl<T: Int> Serialize for AntiCanonicalVerdict<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("status", self.status.as_str())?;
        m.serialize_entry("witness", &self.witness)?;
        m.serialize_entry("obstruction", &self.obstruction)?;
        m.end()
    }
}

/// A dominating toric blow-up of `(1,1,1)` together with the alignment
/// under which it dominates the tested divisor componentwise.
#[derive(Debug, Clone)]
pub struct DominationWitness<T: Int = Z> {
    pub base: Divisor<T>,
    pub trace: MoveTrace<T>,
    pub rotation: usize,
    pub reflected: bool,
}

impl<T: Int> Serialize for DominationWitness<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("base", &self.base)?;
        m.serialize_entry("trace", &self.trace)?;
        m.serialize_entry("rotation", &self.rotation)?;
        m.serialize_entry("reflected", &self.reflected)?;
        m.end()
    }
}

/// Three-valued answer for properties that may be undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trilean {
    Yes,
    No,
    Unknown,
}

impl Trilean {
    pub fn as_str(self) -> &'static str {
        match self {
            Trilean::Yes => "yes",
            Trilean::No => "no",
            Trilean::Unknown => "unknown",
        }
    }
}

impl Serialize for Trilean {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// The four equivalent-or-related embedding properties in one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RigidityReport {
    pub symplectically_embeddable: Trilean,
    pub rationally_embeddable: Trilean,
    pub anti_canonical: Trilean,
    pub rigid: Trilean,
}

impl Serialize for RigidityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("symplectically_embeddable", &self.symplectically_embeddable)?;
        m.serialize_entry("rationally_embeddable", &self.rationally_embeddable)?;
        m.serialize_entry("anti_canonical", &self.anti_canonical)?;
        m.serialize_entry("rigid", &self.rigid)?;
        m.end()
    }
}

/// Checks the family-(4) shape: one entry `+1`, its neighbors at most `-1`,
/// every other entry at most `-2`, length at least 3.
fn family_four_shape<T: Int>(d: &Divisor<T>) -> Result<()> {
    let r = d.len();
    let one = T::one();
    if r < 3 {
        return Err(Error::WrongShape);
    }
    let ones: Vec<usize> = (0..r).filter(|&i| d.entries()[i] == one).collect();
    if ones.len() != 1 {
        return Err(Error::WrongShape);
    }
    let pos = ones[0];
    let minus_one = -T::one();
    let minus_two = -(T::one() + T::one());
    for j in 0..r {
        if j == pos {
            continue;
        }
        let neighbor = j == (pos + 1) % r || (j + 1) % r == pos;
        let limit = if neighbor { &minus_one } else { &minus_two };
        if d.entries()[j] > *limit {
            return Err(Error::WrongShape);
        }
    }
    Ok(())
}

fn alignment_index(r: usize, rotation: usize, reflected: bool, j: usize) -> usize {
    if reflected {
        (rotation + r - j % r) % r
    } else {
        (rotation + j) % r
    }
}

/// An alignment under which `dom` dominates `d` componentwise, if any:
/// `d[j] <= dom[align(j)]` for every `j`.
fn domination_alignment<T: Int>(dom: &Divisor<T>, d: &Divisor<T>) -> Option<(usize, bool)> {
    let r = d.len();
    if dom.len() != r {
        return None;
    }
    for reflected in [false, true] {
        for rotation in 0..r {
            if (0..r).all(|j| d.entries()[j] <= dom.entries()[alignment_index(r, rotation, reflected, j)]) {
                return Some((rotation, reflected));
            }
        }
    }
    None
}

struct TreeNode<T: Int> {
    state: Divisor<T>,
    parent: Option<usize>,
    edge: Option<usize>,
}

enum DomOutcome<T: Int> {
    Found { steps: Vec<MoveStep<T>>, dominator: Divisor<T>, rotation: usize, reflected: bool },
    Exhausted,
    OutOfNodes,
}

/// Breadth-first expansion of toric blow-ups of `root` up to the length of
/// `d`, pruning states with an entry below `floor` (blow-ups only lower
/// entries, so such states cannot dominate `d`). Tests every state of full
/// length for componentwise domination of `d`.
fn dominating_descendant<T: Int>(
    root: &Divisor<T>,
    d: &Divisor<T>,
    floor: &T,
    node_cap: usize,
    nodes_used: &mut usize,
) -> DomOutcome<T> {
    let target = d.len();
    if root.len() > target || root.min_entry() < floor {
        return DomOutcome::Exhausted;
    }
    if *nodes_used >= node_cap {
        return DomOutcome::OutOfNodes;
    }
    *nodes_used += 1;
    let mut nodes = vec![TreeNode { state: root.clone(), parent: None, edge: None }];
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    seen.insert(root.canonical_entries());
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let state = nodes[id].state.clone();
        if state.len() == target {
            if let Some((rotation, reflected)) = domination_alignment(&state, d) {
                let mut rev_steps = Vec::new();
                let mut cur = id;
                while let Some(p) = nodes[cur].parent {
                    let edge = nodes[cur].edge.expect("non-root node has an edge");
                    rev_steps.push(MoveStep::ToricBlowUp { edge });
                    cur = p;
                }
                rev_steps.reverse();
                return DomOutcome::Found { steps: rev_steps, dominator: state, rotation, reflected };
            }
            continue;
        }
        for edge in 0..state.len() {
            let next = state.toric_blow_up(edge).expect("edge in range");
            if next.min_entry() < floor {
                continue;
            }
            if !seen.insert(next.canonical_entries()) {
                continue;
            }
            if *nodes_used >= node_cap {
                return DomOutcome::OutOfNodes;
            }
            *nodes_used += 1;
            nodes.push(TreeNode { state: next, parent: Some(id), edge: Some(edge) });
            queue.push_back(nodes.len() - 1);
        }
    }
    DomOutcome::Exhausted
}

/// Whether `d` can be produced from some toric blow-up of `(1,1,1)` by
/// non-toric blow-ups alone. Non-toric blow-ups only decrement entries, so
/// this holds exactly when some toric blow-up of `(1,1,1)` of the same
/// length dominates `d` componentwise under an alignment; the enumeration
/// is exhaustive with pruning below `min(d)`.
pub fn blown_up_check<T: Int>(d: &Divisor<T>) -> Result<(bool, Option<DominationWitness<T>>)> {
    family_four_shape(d)?;
    let root = Divisor::from_ints(&[1, 1, 1]).expect("length 3");
    let mut nodes_used = 0usize;
    match dominating_descendant(&root, d, d.min_entry(), usize::MAX, &mut nodes_used) {
        DomOutcome::Found { steps, dominator, rotation, reflected } => {
            let trace = MoveTrace { source: root, steps };
            debug_assert_eq!(trace.replay().expect("toric steps replay").entries(), dominator.entries());
            Ok((true, Some(DominationWitness { base: dominator, trace, rotation, reflected })))
        }
        DomOutcome::Exhausted => Ok((false, None)),
        DomOutcome::OutOfNodes => unreachable!("the uncapped enumeration cannot run out"),
    }
}

/// Reads the cycle `(p_1, ..., p_l)` off a positive cyclic word: each
/// `R^a L^b` pair contributes an entry `a + 2` followed by `b - 1` twos.
fn decode_cycle<T: Int>(word: &RlWord<T>) -> Vec<T> {
    let two = T::one() + T::one();
    let mut cycle = Vec::new();
    for pair in word.runs().chunks(2) {
        cycle.push(pair[0].clone() + two.clone());
        let reps = (pair[1].clone() - T::one()).to_usize().expect("run length fits in usize");
        for _ in 0..reps {
            cycle.push(two.clone());
        }
    }
    cycle
}

/// The family-(4) divisor attached to a cycle: `(1, 2 - p_1)` for a
/// one-entry cycle, otherwise `(1, 1-p_1, -p_2, ..., -p_{l-1}, 1-p_l)`.
fn rep_from_cycle<T: Int>(cycle: &[T]) -> Divisor<T> {
    let one = T::one();
    let two = T::one() + T::one();
    if cycle.len() == 1 {
        return Divisor::new(vec![one, two - cycle[0].clone()]).expect("length 2");
    }
    let mut entries = Vec::with_capacity(cycle.len() + 1);
    entries.push(one.clone());
    entries.push(one.clone() - cycle[0].clone());
    for p in &cycle[1..cycle.len() - 1] {
        entries.push(-p.clone());
    }
    entries.push(one - cycle[cycle.len() - 1].clone());
    Divisor::new(entries).expect("length at least 3")
}

fn not_fillable<T: Int>(family: Option<u8>, representative: Option<Divisor<T>>, reason: FillReason<T>) -> FillabilityVerdict<T> {
    FillabilityVerdict { status: FillStatus::NotFillable, family, representative, reason }
}

/// Shared tail of the family branches: screen the remaining invariants
/// against the unique matched representative, then search for a
/// certificate. A non-bundle invariant mismatch is definitive because the
/// family bundles are pairwise distinct, so no other member can match.
fn finish_against<T: Int>(
    d: &Divisor<T>,
    family: u8,
    target: Divisor<T>,
    budget: &SearchBudget<T>,
) -> Result<FillabilityVerdict<T>> {
    if let Some(witness) = invariant_screen(d, &target) {
        debug_assert_ne!(witness.invariant, "bundle-class");
        return Ok(not_fillable(Some(family), Some(target), FillReason::InvariantMismatch(witness)));
    }
    let verdict = decide_equivalence(d, &target, budget)?;
    Ok(match verdict.kind {
        EquivKind::Equivalent => FillabilityVerdict {
            status: FillStatus::Fillable,
            family: Some(family),
            representative: Some(target),
            reason: FillReason::Certificate(verdict.trace.expect("equivalent verdicts carry a trace")),
        },
        EquivKind::Inconclusive => FillabilityVerdict {
            status: FillStatus::Inconclusive,
            family: Some(family),
            representative: Some(target),
            reason: FillReason::Budget,
        },
        EquivKind::Distinct => unreachable!("all invariants were screened before the search"),
    })
}

/// Classifies symplectic fillability of a concave divisor.
///
/// Pipeline: `b⁺ ≥ 2` is an outright obstruction; otherwise the class of
/// the negatively oriented boundary is matched against the four family
/// class sets, the unique candidate representative is reconstructed, the
/// hyperbolic candidates are gated by [`blown_up_check`], and a move
/// certificate is searched. `Distinct` never arises from search: negative
/// answers always rest on an invariant or on the blown-up test.
pub fn classify_fillability<T: Int>(d: &Divisor<T>, budget: &SearchBudget<T>) -> Result<FillabilityVerdict<T>> {
    budget.validate()?;
    if trichotomy(d) != Trichotomy::Concave {
        return Err(Error::NotConcave);
    }
    if divisor_signature(d).b_plus >= 2 {
        return Ok(not_fillable(None, None, FillReason::BPlusAtLeastTwo));
    }
    let class = negative_boundary_class(d);
    match &class {
        BundleClass::Elliptic { .. } => {
            let target = [[1, 1], [1, 2], [1, 3], [-1, -1], [-1, -2], [-1, -3]]
                .iter()
                .map(|e| Divisor::<T>::from_ints(e).expect("length 2"))
                .find(|rep| bundle_equal_oriented(&class, &negative_boundary_class(rep)))
                .expect("the six lens representatives exhaust the elliptic classes");
            finish_against(d, 1, target, budget)
        }
        BundleClass::Parabolic { negated: false, twist } => {
            if *twist >= T::zero() {
                let p = T::one() - twist.clone();
                let target = Divisor::new(vec![T::one(), T::one(), p]).expect("length 3");
                finish_against(d, 2, target, budget)
            } else {
                Ok(not_fillable(None, None, FillReason::BundleMismatch))
            }
        }
        BundleClass::Parabolic { negated: true, twist } => {
            if *twist >= -T::from_i64(4).expect("4 fits") {
                let target = Divisor::new(vec![T::zero(), -twist.clone()]).expect("length 2");
                finish_against(d, 3, target, budget)
            } else {
                Ok(not_fillable(None, None, FillReason::BundleMismatch))
            }
        }
        BundleClass::Hyperbolic { negated: false, .. } => {
            Ok(not_fillable(None, None, FillReason::BundleMismatch))
        }
        BundleClass::Hyperbolic { negated: true, word } => {
            let mut candidates: Vec<Divisor<T>> = Vec::new();
            let mut cycle_len = 0usize;
            for cycle in [decode_cycle(word), decode_cycle(&word.reversed())] {
                cycle_len = cycle.len();
                for k in 0..cycle.len() {
                    let rotated: Vec<T> =
                        (0..cycle.len()).map(|j| cycle[(k + j) % cycle.len()].clone()).collect();
                    let rep = rep_from_cycle(&rotated);
                    if candidates.iter().any(|c| c.canonical_entries() == rep.canonical_entries()) {
                        continue;
                    }
                    if !bundle_equal_oriented_divisors(d, &rep) {
                        debug_assert!(false, "decoded representative {rep} misses the class of {d}");
                        continue;
                    }
                    candidates.push(rep);
                }
            }
            if candidates.is_empty() {
                debug_assert!(false, "no decoded representative matched the class of {d}");
                return Ok(FillabilityVerdict {
                    status: FillStatus::Inconclusive,
                    family: Some(4),
                    representative: None,
                    reason: FillReason::Budget,
                });
            }
            let eligible: Vec<Divisor<T>> = if cycle_len == 1 {
                candidates.clone()
            } else {
                candidates
                    .iter()
                    .filter(|rep| matches!(blown_up_check(*rep), Ok((true, _))))
                    .cloned()
                    .collect()
            };
            if eligible.is_empty() {
                return Ok(not_fillable(Some(4), Some(candidates[0].clone()), FillReason::NotBlownUp));
            }
            let target = eligible
                .iter()
                .find(|rep| rep.canonical_entries() == d.canonical_entries())
                .unwrap_or(&eligible[0])
                .clone();
            finish_against(d, 4, target, budget)
        }
    }
}

/// The minimal-model seed divisors admissible for `d`: the nine families
/// with parameters restricted so every seed entry stays at or above
/// `min(d)` (blow-ups only lower entries), the seed is no longer than `d`,
/// its charge does not exceed `q(d)` (each non-toric blow-up adds one), and
/// the coarse parameter bound `max|entries| + r + q` holds.
fn minimal_model_seeds<T: Int>(d: &Divisor<T>) -> Vec<Divisor<T>> {
    let floor = d.min_entry().clone();
    let q = d.charge();
    let r = d.len();
    let zero = T::zero();
    let one = T::one();
    let two = T::one() + T::one();
    let coarse = d.entries().iter().map(|e| e.abs()).max().expect("nonempty")
        + T::from_usize(r).expect("length fits")
        + q.clone();

    let mut seeds: Vec<Divisor<T>> = Vec::new();
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let push = |entries: Vec<T>, seeds: &mut Vec<Divisor<T>>, seen: &mut HashSet<Vec<T>>| {
        let seed = match Divisor::new(entries) {
            Ok(s) => s,
            Err(_) => return,
        };
        if seed.len() > r || seed.min_entry() < &floor || seed.charge() > q {
            return;
        }
        if seen.insert(seed.canonical_entries()) {
            seeds.push(seed);
        }
    };

    // Parameter scan bounds: every entry of the family must stay in
    // [floor, coarse]; both constraints are linear in the parameter.
    let scan = |mut lo: T, hi: T, f: &mut dyn FnMut(&T)| {
        while lo <= hi {
            f(&lo);
            lo += T::one();
        }
    };
    let half_ceil = |x: T| (x + T::one()).div_floor(&two);
    let half_floor = |x: T| x.div_floor(&two);

    push(vec![one.clone(), T::from_i64(4).expect("fits")], &mut seeds, &mut seen);
    push(vec![one.clone(), one.clone(), one.clone()], &mut seeds, &mut seen);

    let four = T::from_i64(4).expect("fits");
    let three = T::from_i64(3).expect("fits");

    // (2b, 4-2b)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()));
        let hi = half_floor((four.clone() - floor.clone()).min(coarse.clone()));
        scan(lo, hi, &mut |b: &T| {
            let e = two.clone() * b.clone();
            push(vec![e.clone(), four.clone() - e], &mut seeds, &mut seen);
        });
    }
    // (2b, 0, 2-2b)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()));
        let hi = half_floor((two.clone() - floor.clone()).min(coarse.clone()));
        scan(lo, hi, &mut |b: &T| {
            let e = two.clone() * b.clone();
            push(vec![e.clone(), zero.clone(), two.clone() - e], &mut seeds, &mut seen);
        });
    }
    // (2b, 0, -2b, 0)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()));
        let hi = half_floor((-floor.clone()).min(coarse.clone()));
        scan(lo, hi, &mut |b: &T| {
            let e = two.clone() * b.clone();
            push(vec![e.clone(), zero.clone(), -e, zero.clone()], &mut seeds, &mut seen);
        });
    }
    // (2a+1, 3-2a)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()) - one.clone());
        let hi = half_floor((three.clone() - floor.clone()).min(coarse.clone()));
        scan(lo, hi, &mut |a: &T| {
            let e = two.clone() * a.clone() + one.clone();
            push(vec![e.clone(), three.clone() - (e - one.clone())], &mut seeds, &mut seen);
        });
    }
    push(vec![four.clone(), zero.clone()], &mut seeds, &mut seen);
    // (2a+1, 0, 1-2a)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()) - one.clone());
        let hi = half_floor((one.clone() - floor.clone()).min(coarse.clone()));
        scan(lo, hi, &mut |a: &T| {
            let e = two.clone() * a.clone() + one.clone();
            push(vec![e.clone(), zero.clone(), two.clone() - e], &mut seeds, &mut seen);
        });
    }
    // (2a+1, 0, -2a-1, 0)
    {
        let lo = half_ceil(floor.clone().max(-coarse.clone()) - one.clone());
        let hi = half_floor((-floor.clone()).min(coarse.clone()) - one.clone());
        scan(lo, hi, &mut |a: &T| {
            let e = two.clone() * a.clone() + one.clone();
            push(vec![e.clone(), zero.clone(), -e, zero.clone()], &mut seeds, &mut seen);
        });
    }
    seeds
}

/// Searches for a realization of `d` as toric blow-ups of a minimal-model
/// seed followed by non-toric blow-ups. Negative definite divisors with
/// charge below 3 are rejected outright; otherwise exhaustion of the
/// bounded seed trees is definitive and only hitting the node budget is
/// inconclusive.
pub fn anticanonical_search<T: Int>(d: &Divisor<T>, budget: &SearchBudget<T>) -> Result<AntiCanonicalVerdict<T>> {
    budget.validate()?;
    let sig = divisor_signature(d);
    let negative_definite = sig.b_plus == 0 && sig.b_zero == 0;
    if negative_definite && d.charge() < T::from_i64(3).expect("fits") {
        return Ok(AntiCanonicalVerdict {
            status: AcStatus::NotAntiCanonical,
            witness: None,
            obstruction: Some("q-deficit"),
        });
    }
    let mut nodes_used = 0usize;
    for seed in minimal_model_seeds(d) {
        match dominating_descendant(&seed, d, d.min_entry(), budget.max_nodes, &mut nodes_used) {
            DomOutcome::Found { steps, dominator, rotation, reflected } => {
                let mut trace = MoveTrace { source: seed.clone(), steps };
                let r = d.len();
                let mut deficit_total = T::zero();
                for j in 0..r {
                    let pos = alignment_index(r, rotation, reflected, j);
                    let mut deficit =
                        dominator.entries()[pos].clone() - d.entries()[j].clone();
                    deficit_total += deficit.clone();
                    while deficit > T::zero() {
                        trace.steps.push(MoveStep::NonToricBlowUp { index: pos });
                        deficit -= T::one();
                    }
                }
                assert_eq!(
                    deficit_total,
                    d.charge() - seed.charge(),
                    "non-toric count must equal the charge gap"
                );
                let replayed = trace.replay().expect("witness replays");
                assert_eq!(replayed.canonical_entries(), d.canonical_entries());
                return Ok(AntiCanonicalVerdict {
                    status: AcStatus::AntiCanonical,
                    witness: Some(trace),
                    obstruction: None,
                });
            }
            DomOutcome::Exhausted => continue,
            DomOutcome::OutOfNodes => {
                return Ok(AntiCanonicalVerdict {
                    status: AcStatus::Inconclusive,
                    witness: None,
                    obstruction: None,
                })
            }
        }
    }
    Ok(AntiCanonicalVerdict {
        status: AcStatus::NotAntiCanonical,
        witness: None,
        obstruction: Some("exhaustive-search"),
    })
}

/// Anti-canonical status for strictly semi-definite divisors: reduce to the
/// minimal model, which is a cycle of `-2` entries or `(-1,-4)`, and read
/// the answer off its length (at most 9 is anti-canonical).
pub fn strictly_semidefinite_report<T: Int>(d: &Divisor<T>) -> Result<AntiCanonicalVerdict<T>> {
    if trichotomy(d) != Trichotomy::Neither {
        return Err(Error::NotSemidefinite);
    }
    let (minimal, _) = toric_minimal_reduction(d);
    let minus_two = -(T::one() + T::one());
    let n = if minimal.entries().iter().all(|e| *e == minus_two) {
        minimal.len()
    } else {
        let canon = minimal.canonical_entries();
        assert_eq!(
            canon,
            vec![-T::from_i64(4).expect("fits"), -T::one()],
            "strictly semi-definite divisors reduce to a -2 cycle or (-1,-4)"
        );
        1
    };
    Ok(if n <= 9 {
        AntiCanonicalVerdict { status: AcStatus::AntiCanonical, witness: None, obstruction: None }
    } else {
        AntiCanonicalVerdict {
            status: AcStatus::NotAntiCanonical,
            witness: None,
            obstruction: Some("exhaustive-search"),
        }
    })
}

/// Bundles the four embedding properties: for `b⁺ ≥ 1` they are all
/// equivalent to fillability; for `b⁺ = 0` the divisor is always
/// symplectically embeddable and never rigid, anti-canonical status comes
/// from the supplied verdict, and rational embeddability beyond the
/// anti-canonical case is open.
pub fn rigidity_report<T: Int>(
    d: &Divisor<T>,
    fillability: Option<&FillabilityVerdict<T>>,
    anti: Option<&AntiCanonicalVerdict<T>>,
) -> RigidityReport {
    if divisor_signature(d).b_plus >= 1 {
        let all = |t: Trilean| RigidityReport {
            symplectically_embeddable: t,
            rationally_embeddable: t,
            anti_canonical: t,
            rigid: t,
        };
        return match fillability.map(|f| f.status) {
            Some(FillStatus::Fillable) => all(Trilean::Yes),
            Some(FillStatus::NotFillable) => all(Trilean::No),
            _ => all(Trilean::Unknown),
        };
    }
    let anti_status = match anti.map(|a| a.status) {
        Some(AcStatus::AntiCanonical) => Trilean::Yes,
        Some(AcStatus::NotAntiCanonical) => Trilean::No,
        _ => Trilean::Unknown,
    };
    RigidityReport {
        symplectically_embeddable: Trilean::Yes,
        rationally_embeddable: if anti_status == Trilean::Yes { Trilean::Yes } else { Trilean::Unknown },
        anti_canonical: anti_status,
        rigid: Trilean::No,
    }
}
