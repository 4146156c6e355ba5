//! Decision procedure for toric equivalence.
//!
//! Two divisors are toric equivalent when a chain of toric blow-ups and
//! blow-downs (and the balancing moves they generate) carries one to the
//! other up to rotation and reversal. The decision procedure screens by
//! move-invariant quantities first, normalizes both sides, and then runs a
//! bounded bidirectional search; an `Equivalent` verdict always carries a
//! replayable [`MoveTrace`] and a `Distinct` verdict always carries the
//! separating invariant. Search exhaustion alone never yields `Distinct`.

use std::collections::{HashMap, VecDeque};

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::divisor::{Divisor, MoveStep, MoveTrace};
use crate::lattice::divisor_signature;
use crate::sl2z::{bundle_equal_oriented_divisors, divisor_bundle_class};
use crate::{Error, Int, Result, Z};

/// Resource bounds for the equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget<T: Int = Z> {
    /// Longest divisor the search may construct.
    pub max_length: usize,
    /// Smallest entry the search may construct.
    pub min_entry: T,
    /// Total number of states held across both search frontiers.
    pub max_nodes: usize,
}

impl<T: Int> SearchBudget<T> {
    /// The default budget for a pair: length may grow by four past the longer
    /// input, entries may drop four below the smallest input entry, and the
    /// search keeps at most 200000 states.
    pub fn for_pair(d1: &Divisor<T>, d2: &Divisor<T>) -> Self {
        let max_length = d1.len().max(d2.len()) + 4;
        let min_entry = d1.min_entry().min(d2.min_entry()).clone() - T::from_i64(4).expect("4 fits");
        SearchBudget { max_length, min_entry, max_nodes: 200_000 }
    }

    /// Rejects bounds under which no search is possible. A `max_length`
    /// below two admits no divisor at all and a `max_nodes` below one admits
    /// no state; `min_entry` may be any integer.
    pub fn validate(&self) -> Result<()> {
        if self.max_length < 2 {
            return Err(Error::BudgetInvalid(format!(
                "max_length is {}, but every divisor has length at least 2",
                self.max_length
            )));
        }
        if self.max_nodes < 1 {
            return Err(Error::BudgetInvalid("max_nodes must be at least 1".into()));
        }
        Ok(())
    }
}

impl<T: Int> Serialize for SearchBudget<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("max_length", &self.max_length)?;
        m.serialize_entry("min_entry", &self.min_entry.to_string())?;
        m.serialize_entry("max_nodes", &self.max_nodes)?;
        m.end()
    }
}

/// An invariant separating two divisors, with both values rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub invariant: &'static str,
    pub left: String,
    pub right: String,
}

impl Serialize for Mismatch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("invariant", self.invariant)?;
        m.serialize_entry("left", &self.left)?;
        m.serialize_entry("right", &self.right)?;
        m.end()
    }
}

/// Outcome kind of an equivalence decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivKind {
    Equivalent,
    Distinct,
    Inconclusive,
}

impl EquivKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquivKind::Equivalent => "equivalent",
            EquivKind::Distinct => "distinct",
            EquivKind::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for EquivKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for EquivKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// The result of an equivalence decision: the verdict kind, a replayable
/// trace when equivalent, the separating invariant when distinct, and the
/// budget the decision ran under.
#[derive(Debug, Clone)]
pub struct EquivVerdict<T: Int = Z> {
    pub kind: EquivKind,
    pub trace: Option<MoveTrace<T>>,
    pub witness: Option<Mismatch>,
    pub budget: SearchBudget<T>,
}

impl<T: Int> Serialize for EquivVerdict<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("kind", &self.kind)?;
        m.serialize_entry("trace", &self.trace)?;
        m.serialize_entry("witness", &self.witness)?;
        m.serialize_entry("budget", &self.budget)?;
        m.end()
    }
}

/// Compares the move-invariant quantities of two divisors: charge, the
/// positive and null parts of the intersection signature, and the oriented
/// boundary bundle class. Returns the first mismatch found, or `None` when
/// all four agree.
pub fn invariant_screen<T: Int>(d1: &Divisor<T>, d2: &Divisor<T>) -> Option<Mismatch> {
    let q1 = d1.charge();
    let q2 = d2.charge();
    if q1 != q2 {
        return Some(Mismatch { invariant: "charge", left: q1.to_string(), right: q2.to_string() });
    }
    let s1 = divisor_signature(d1);
    let s2 = divisor_signature(d2);
    if s1.b_plus != s2.b_plus {
        return Some(Mismatch {
            invariant: "b_plus",
            left: s1.b_plus.to_string(),
            right: s2.b_plus.to_string(),
        });
    }
    if s1.b_zero != s2.b_zero {
        return Some(Mismatch {
            invariant: "b_zero",
            left: s1.b_zero.to_string(),
            right: s2.b_zero.to_string(),
        });
    }
    if !bundle_equal_oriented_divisors(d1, d2) {
        return Some(Mismatch {
            invariant: "bundle-class",
            left: divisor_bundle_class(d1).to_string(),
            right: divisor_bundle_class(d2).to_string(),
        });
    }
    None
}

/// The stored index of the first `-1` in the canonical reading, or `None`
/// when the divisor is toric minimal.
fn first_canonical_minus_one<T: Int>(d: &Divisor<T>) -> Option<usize> {
    let r = d.len();
    if r < 3 {
        return None;
    }
    let minus_one = -T::one();
    let f = d.canonical_frame();
    for j in 0..r {
        let literal = if f.reflected { (f.start + r - j % r) % r } else { (f.start + j) % r };
        if d.entries()[literal] == minus_one {
            return Some(literal);
        }
    }
    None
}

/// Blows down exceptional entries until none remain, always choosing the
/// first `-1` of the canonical reading. Length-two divisors are already
/// minimal. Returns the minimal model and the trace that reaches it.
pub fn toric_minimal_reduction<T: Int>(d: &Divisor<T>) -> (Divisor<T>, MoveTrace<T>) {
    let mut trace = MoveTrace::new(d.clone());
    let mut cur = d.clone();
    while let Some(i) = first_canonical_minus_one(&cur) {
        cur = cur.toric_blow_down(i).expect("selected entry is -1 and length exceeds 2");
        trace.steps.push(MoveStep::ToricBlowDown { index: i });
    }
    (cur, trace)
}

/// The collapse of the zero pair at `(i, i+1)` expressed as one blow-up and
/// two blow-downs, so downstream consumers only see primitive steps.
fn collapse_steps<T: Int>(r: usize, i: usize) -> [MoveStep<T>; 3] {
    if i + 1 < r {
        [
            MoveStep::ToricBlowUp { edge: i + 1 },
            MoveStep::ToricBlowDown { index: i + 2 },
            MoveStep::ToricBlowDown { index: i },
        ]
    } else {
        [
            MoveStep::ToricBlowUp { edge: 0 },
            MoveStep::ToricBlowDown { index: 0 },
            MoveStep::ToricBlowDown { index: r - 2 },
        ]
    }
}

/// Deterministic shrinking pass: blow down exceptional entries, collapse
/// adjacent zero pairs, and use a balancing move to pull the predecessor of
/// a lone zero down to zero so a pair appears. Every balancing is followed
/// by a collapse on the next round, so the length strictly decreases and
/// the pass terminates.
fn normalize<T: Int>(d: &Divisor<T>) -> (Divisor<T>, MoveTrace<T>) {
    let mut trace = MoveTrace::new(d.clone());
    let mut cur = d.clone();
    let zero = T::zero();
    loop {
        if cur.len() < 3 {
            break;
        }
        if let Some(i) = first_canonical_minus_one(&cur) {
            cur = cur.toric_blow_down(i).expect("selected entry is -1");
            trace.steps.push(MoveStep::ToricBlowDown { index: i });
            continue;
        }
        let r = cur.len();
        let pair = (0..r).find(|&i| cur.entries()[i] == zero && cur.entries()[(i + 1) % r] == zero);
        if let Some(i) = pair {
            let collapsed = cur.zero_pair_collapse(i).expect("adjacent zero pair");
            for step in collapse_steps(r, i) {
                cur = cur.apply(&step).expect("collapse decomposition applies");
                trace.steps.push(step);
            }
            debug_assert_eq!(cur.entries(), collapsed.entries());
            continue;
        }
        let lone = (0..r).find(|&i| cur.entries()[i] == zero);
        if let Some(i) = lone {
            let n = cur.entries()[(i + r - 1) % r].clone();
            debug_assert!(n != zero, "a zero predecessor would have formed a pair");
            cur = cur.balancing_move(i, &n).expect("entry is zero");
            trace.steps.push(MoveStep::Balancing { index: i, n });
            continue;
        }
        break;
    }
    (cur, trace)
}

/// Single-move successors of a state, respecting the length and entry
/// bounds. Blow-downs come first so the search prefers shrinking.
fn neighbors<T: Int>(v: &Divisor<T>, max_length: usize, min_entry: &T) -> Vec<(MoveStep<T>, Divisor<T>)> {
    let mut out = Vec::new();
    let r = v.len();
    let zero = T::zero();
    let minus_one = -T::one();
    if r >= 3 {
        for i in 0..r {
            if v.entries()[i] == minus_one {
                let next = v.toric_blow_down(i).expect("entry is -1");
                out.push((MoveStep::ToricBlowDown { index: i }, next));
            }
        }
        for i in 0..r {
            if v.entries()[i] == zero {
                for n in [T::one(), -T::one()] {
                    let next = v.balancing_move(i, &n).expect("entry is zero");
                    if next.min_entry() >= min_entry {
                        out.push((MoveStep::Balancing { index: i, n }, next));
                    }
                }
            }
        }
    }
    if r < max_length {
        for edge in 0..r {
            let next = v.toric_blow_up(edge).expect("edge in range");
            if next.min_entry() >= min_entry {
                out.push((MoveStep::ToricBlowUp { edge }, next));
            }
        }
    }
    out
}

struct Node<T: Int> {
    state: Divisor<T>,
    parent: Option<usize>,
    step: Option<MoveStep<T>>,
}

struct Side<T: Int> {
    nodes: Vec<Node<T>>,
    visited: HashMap<Vec<T>, usize>,
    queue: VecDeque<usize>,
}

impl<T: Int> Side<T> {
    fn new(root: Divisor<T>) -> Self {
        let key = root.canonical_entries();
        let nodes = vec![Node { state: root, parent: None, step: None }];
        let mut visited = HashMap::new();
        visited.insert(key, 0);
        Side { nodes, visited, queue: VecDeque::from([0]) }
    }
}

enum Expand {
    Meet { own: usize, other: usize },
    OutOfNodes,
    Continue,
}

fn expand_one<T: Int>(
    side: &mut Side<T>,
    other: &Side<T>,
    max_length: usize,
    min_entry: &T,
    node_cap: usize,
) -> Expand {
    let id = match side.queue.pop_front() {
        Some(id) => id,
        None => return Expand::Continue,
    };
    let state = side.nodes[id].state.clone();
    for (step, next) in neighbors(&state, max_length, min_entry) {
        let key = next.canonical_entries();
        if side.visited.contains_key(&key) {
            continue;
        }
        if side.nodes.len() + other.nodes.len() >= node_cap {
            return Expand::OutOfNodes;
        }
        let new_id = side.nodes.len();
        side.nodes.push(Node { state: next, parent: Some(id), step: Some(step) });
        side.visited.insert(key.clone(), new_id);
        side.queue.push_back(new_id);
        if let Some(&oid) = other.visited.get(&key) {
            return Expand::Meet { own: new_id, other: oid };
        }
    }
    Expand::Continue
}

fn path_from_root<T: Int>(side: &Side<T>, id: usize) -> (Vec<MoveStep<T>>, Vec<Divisor<T>>) {
    let mut ids = vec![id];
    let mut cur = id;
    while let Some(p) = side.nodes[cur].parent {
        ids.push(p);
        cur = p;
    }
    ids.reverse();
    let states = ids.iter().map(|&i| side.nodes[i].state.clone()).collect();
    let steps = ids
        .iter()
        .skip(1)
        .map(|&i| side.nodes[i].step.clone().expect("non-root node has a step"))
        .collect();
    (steps, states)
}

/// A position bijection from one literal sequence onto another in the same
/// rotation-reversal orbit. `map[j]` is the target position of source
/// position `j`; `flip` records whether the identification reverses the
/// cyclic orientation.
fn frame_between<T: Int>(from: &Divisor<T>, to: &Divisor<T>) -> (Vec<usize>, bool) {
    let r = from.len();
    assert_eq!(r, to.len(), "frame endpoints must have equal length");
    let fe = from.entries();
    let te = to.entries();
    for k in 0..r {
        if (0..r).all(|j| fe[j] == te[(j + k) % r]) {
            return ((0..r).map(|j| (j + k) % r).collect(), false);
        }
    }
    for k in 0..r {
        if (0..r).all(|j| fe[j] == te[(k + r - j) % r]) {
            return ((0..r).map(|j| (k + r - j) % r).collect(), true);
        }
    }
    panic!("frame endpoints are not in the same rotation-reversal orbit");
}

/// Inverts one step of a chain and rewrites its index through the position
/// bijection `phi`, which maps post-step positions onto positions of the
/// state the inverse is applied to. Returns the rewritten inverse step and
/// the bijection for the pre-step state.
#[allow(clippy::needless_range_loop)]
fn transport_inverse<T: Int>(
    step: &MoveStep<T>,
    before_len: usize,
    phi: &[usize],
    flip: bool,
) -> (MoveStep<T>, Vec<usize>) {
    match step {
        MoveStep::ToricBlowUp { edge } => {
            let created = if *edge == 0 { before_len } else { *edge };
            let removed = phi[created];
            let mut next = Vec::with_capacity(before_len);
            for j in 0..before_len {
                let after_pos = if j < created { j } else { j + 1 };
                let a = phi[after_pos];
                debug_assert_ne!(a, removed);
                next.push(if a > removed { a - 1 } else { a });
            }
            (MoveStep::ToricBlowDown { index: removed }, next)
        }
        MoveStep::ToricBlowDown { index } => {
            let r = before_len;
            let after_len = r - 1;
            let (pred_after, succ_after) = if *index == 0 {
                (r - 2, 0)
            } else {
                (*index - 1, if *index == r - 1 { 0 } else { *index })
            };
            let edge_target = if flip { phi[pred_after] } else { phi[succ_after] };
            let inserted = if edge_target == 0 { after_len } else { edge_target };
            let mut next = vec![0usize; r];
            for j in 0..r {
                if j == *index {
                    next[j] = inserted;
                } else {
                    let after_pos = if j < *index { j } else { j - 1 };
                    let a = phi[after_pos];
                    next[j] = if a < inserted { a } else { a + 1 };
                }
            }
            (MoveStep::ToricBlowUp { edge: edge_target }, next)
        }
        MoveStep::Balancing { index, n } => {
            let amount = if flip { n.clone() } else { -n.clone() };
            (MoveStep::Balancing { index: phi[*index], n: amount }, phi.to_vec())
        }
        other => unreachable!("search chains contain only primitive toric steps, got {other:?}"),
    }
}

/// Walks a chain backwards from its endpoint, applying transported inverse
/// steps to `actual` (a state in the same orbit as the chain endpoint) and
/// appending them to `out`. Returns the final state, which lies in the
/// orbit of the chain root.
fn invert_onto<T: Int>(
    mut actual: Divisor<T>,
    states: &[Divisor<T>],
    steps: &[MoveStep<T>],
    out: &mut Vec<MoveStep<T>>,
) -> Divisor<T> {
    let last = states.last().expect("chain holds at least its root");
    let (mut phi, flip) = frame_between(last, &actual);
    for i in (0..steps.len()).rev() {
        let before = &states[i];
        let (step, phi_next) = transport_inverse(&steps[i], before.len(), &phi, flip);
        actual = actual.apply(&step).expect("transported inverse step applies");
        debug_assert!(
            (0..before.len()).all(|j| before.entries()[j] == actual.entries()[phi_next[j]]),
            "transport lost the entry alignment"
        );
        phi = phi_next;
        out.push(step);
    }
    actual
}

/// Decides toric equivalence of two divisors under the given budget.
///
/// The procedure first screens by move invariants; a mismatch is a proof of
/// distinctness and is returned as the witness. Otherwise both sides are
/// normalized and a bidirectional breadth-first search over canonical orbit
/// keys looks for a common state. A meet is stitched into one trace from
/// `d1` that replays to the orbit of `d2`, and the trace is replayed before
/// the verdict is returned. If the search exhausts its budget the verdict
/// is `Inconclusive`, never `Distinct`.
pub fn decide_equivalence<T: Int>(
    d1: &Divisor<T>,
    d2: &Divisor<T>,
    budget: &SearchBudget<T>,
) -> Result<EquivVerdict<T>> {
    budget.validate()?;
    if let Some(witness) = invariant_screen(d1, d2) {
        return Ok(EquivVerdict {
            kind: EquivKind::Distinct,
            trace: None,
            witness: Some(witness),
            budget: budget.clone(),
        });
    }
    let (n1, trace1) = normalize(d1);
    let (n2, trace2) = normalize(d2);
    let max_length = budget.max_length.max(n1.len()).max(n2.len()).max(d1.len()).max(d2.len());
    let mut min_entry = budget.min_entry.clone();
    for v in [&n1, &n2, d1, d2] {
        if v.min_entry() < &min_entry {
            min_entry = v.min_entry().clone();
        }
    }
    let inconclusive = |budget: &SearchBudget<T>| EquivVerdict {
        kind: EquivKind::Inconclusive,
        trace: None,
        witness: None,
        budget: budget.clone(),
    };

    let mut fwd = Side::new(n1);
    let mut bwd = Side::new(n2);
    let meet;
    let root_key = fwd.nodes[0].state.canonical_entries();
    if let Some(&b0) = bwd.visited.get(&root_key) {
        meet = (0, b0);
    } else {
        let mut found = None;
        loop {
            if fwd.queue.is_empty() && bwd.queue.is_empty() {
                break;
            }
            let use_fwd =
                !fwd.queue.is_empty() && (bwd.queue.is_empty() || fwd.nodes.len() <= bwd.nodes.len());
            let outcome = if use_fwd {
                expand_one(&mut fwd, &bwd, max_length, &min_entry, budget.max_nodes)
            } else {
                expand_one(&mut bwd, &fwd, max_length, &min_entry, budget.max_nodes)
            };
            match outcome {
                Expand::Meet { own, other } => {
                    found = Some(if use_fwd { (own, other) } else { (other, own) });
                    break;
                }
                Expand::OutOfNodes => return Ok(inconclusive(budget)),
                Expand::Continue => {}
            }
        }
        match found {
            Some(pair) => meet = pair,
            None => return Ok(inconclusive(budget)),
        }
    }

    let (steps_f, _) = path_from_root(&fwd, meet.0);
    let (steps_b, states_b) = path_from_root(&bwd, meet.1);
    let mut full_steps = trace1.steps.clone();
    full_steps.extend(steps_f);
    let mut chain_states = trace2.states().expect("normalization trace replays");
    chain_states.extend(states_b.into_iter().skip(1));
    let mut chain_steps = trace2.steps.clone();
    chain_steps.extend(steps_b);
    let actual = fwd.nodes[meet.0].state.clone();
    let landed = invert_onto(actual, &chain_states, &chain_steps, &mut full_steps);
    debug_assert_eq!(landed.canonical_entries(), d2.canonical_entries());

    let trace = MoveTrace { source: d1.clone(), steps: full_steps };
    let replayed = trace.replay().expect("stitched trace replays");
    assert_eq!(
        replayed.canonical_entries(),
        d2.canonical_entries(),
        "stitched trace must land in the target orbit"
    );
    Ok(EquivVerdict {
        kind: EquivKind::Equivalent,
        trace: Some(trace),
        witness: None,
        budget: budget.clone(),
    })
}
