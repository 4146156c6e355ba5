//! Report assembly shared by the single-divisor subcommands and the batch
//! enumerator. Every report is built once in both shapes: a JSON value whose
//! keys and reason codes are a stability contract, and a text rendering for
//! humans. Exact integers appear as strings in JSON; counts and indices are
//! plain numbers.

use std::fmt::Write as _;

use csdiv::classify::{
    anticanonical_search, classify_fillability, rigidity_report, AcStatus, AntiCanonicalVerdict,
    FillReason, FillStatus, FillabilityVerdict, RigidityReport,
};
use csdiv::convexity::{convexity_verdict, ConvexityVerdict, Trichotomy};
use csdiv::divisor::{Divisor, MoveTrace};
use csdiv::equiv::{decide_equivalence, EquivKind, EquivVerdict, SearchBudget};
use csdiv::fillings::{
    dual_cusp, minimal_filling_homology, stein_geography, CuspCycle, FillingHomology,
    GeographyReport,
};
use csdiv::lattice::{boundary_h1, divisor_signature, Signature};
use csdiv::sl2z::negative_boundary_class;
use csdiv::Result;
use serde_json::{json, Map, Value};

/// A finished report: the JSON value, the text rendering, and whether any
/// verdict inside ran out of search budget.
pub struct ReportSet {
    pub value: Value,
    pub text: String,
    pub inconclusive: bool,
}

/// The move-invariant data of a divisor.
pub fn invariants(d: &Divisor) -> ReportSet {
    let inv = Invariants::compute(d);
    let value = json!({
        "input": d,
        "invariants": inv.value(),
    });
    ReportSet { value, text: inv.text(d), inconclusive: false }
}

/// The full report: invariants, trichotomy, fillability, anti-canonical
/// status, rigidity, and filling data where it applies.
pub fn classify(d: &Divisor, budget: &SearchBudget, traces: bool) -> Result<ReportSet> {
    let inv = Invariants::compute(d);
    let conv = convexity_verdict(d);
    let fill = (conv.kind == Trichotomy::Concave)
        .then(|| classify_fillability(d, budget))
        .transpose()?;
    let anti = anticanonical_search(d, budget)?;
    let rigid = rigidity_report(d, fill.as_ref(), Some(&anti));
    let homology = fill
        .as_ref()
        .filter(|f| f.status == FillStatus::Fillable)
        .map(|f| minimal_filling_homology(d, f))
        .transpose()?;
    let geography = (conv.kind == Trichotomy::Convex).then(|| stein_geography(d)).transpose()?;
    let notes = notes_for(&inv.signature, fill.as_ref());
    let inconclusive = fill.as_ref().is_some_and(|f| f.status == FillStatus::Inconclusive)
        || anti.status == AcStatus::Inconclusive;

    let mut text = inv.text(d);
    text.push_str(&verdict_text(&conv, fill.as_ref(), &anti, &rigid));
    text.push_str(&filling_text(homology.as_ref(), geography.as_ref()));
    for note in &notes {
        let _ = writeln!(text, "note: {note}");
    }
    if traces {
        text.push_str(&trace_text(fill.as_ref(), &anti));
    }

    let mut map = Map::new();
    map.insert("input".into(), json!(d));
    map.insert("invariants".into(), inv.value());
    if traces {
        map.insert("traces".into(), trace_value(fill.as_ref(), &anti));
    }
    map.insert(
        "verdicts".into(),
        json!({
            "trichotomy": conv,
            "fillability": fill,
            "anti_canonical": anti,
            "rigidity": rigid,
        }),
    );
    if homology.is_some() || geography.is_some() {
        map.insert(
            "fillings".into(),
            json!({ "homology": homology, "geography": geography }),
        );
    }
    map.insert("notes".into(), json!(notes));

    Ok(ReportSet { value: Value::Object(map), text, inconclusive })
}

/// The toric-equivalence decision for a pair of divisors.
pub fn equiv(d1: &Divisor, d2: &Divisor, budget: &SearchBudget) -> Result<ReportSet> {
    let verdict = decide_equivalence(d1, d2, budget)?;
    let mut text = String::new();
    let _ = writeln!(text, "left: {d1}");
    let _ = writeln!(text, "right: {d2}");
    let _ = writeln!(text, "verdict: {}", verdict.kind);
    match &verdict {
        EquivVerdict { kind: EquivKind::Equivalent, trace: Some(t), .. } => {
            let _ = writeln!(text, "trace: {}", arrows(t));
        }
        EquivVerdict { kind: EquivKind::Distinct, witness: Some(w), .. } => {
            let _ = writeln!(text, "separated by {}: {} vs {}", w.invariant, w.left, w.right);
        }
        EquivVerdict { kind: EquivKind::Inconclusive, budget, .. } => {
            let _ = writeln!(
                text,
                "budget exhausted: max_length {}, min_entry {}, max_nodes {}",
                budget.max_length, budget.min_entry, budget.max_nodes
            );
        }
        _ => {}
    }
    let inconclusive = verdict.kind == EquivKind::Inconclusive;
    Ok(ReportSet { value: json!(verdict), text, inconclusive })
}

/// The dual of a negative cusp cycle.
pub fn dual(c: &CuspCycle) -> ReportSet {
    let d = dual_cusp(c);
    let mut text = String::new();
    let _ = writeln!(text, "cycle: {c}");
    let _ = writeln!(text, "dual: {d}");
    let _ = writeln!(text, "q: {} -> {}", c.charge(), d.charge());
    if d.irreducible_nodal() {
        let _ = writeln!(text, "the dual is an irreducible nodal cusp");
    }
    let value = json!({
        "input": c,
        "dual": d,
        "q": d.charge().to_string(),
    });
    ReportSet { value, text, inconclusive: false }
}

struct Invariants {
    r: usize,
    q: String,
    d_squared: String,
    nonnegative: usize,
    signature: Signature,
    h1: String,
    h1_value: Value,
    class: String,
    class_value: Value,
}

impl Invariants {
    fn compute(d: &Divisor) -> Self {
        let h1 = boundary_h1(d);
        let class = negative_boundary_class(d);
        Invariants {
            r: d.len(),
            q: d.charge().to_string(),
            d_squared: d.self_intersection_square().to_string(),
            nonnegative: d.nonnegative_count(),
            signature: divisor_signature(d),
            h1: h1.to_string(),
            h1_value: json!(h1),
            class: class.to_string(),
            class_value: json!(class),
        }
    }

    fn value(&self) -> Value {
        json!({
            "r": self.r,
            "q": self.q,
            "d_squared": self.d_squared,
            "nonnegative_entries": self.nonnegative,
            "signature": self.signature,
            "h1_boundary": self.h1_value,
            "bundle_class": self.class_value,
        })
    }

    fn text(&self, d: &Divisor) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "divisor: {d}");
        let _ = writeln!(out, "r: {}", self.r);
        let _ = writeln!(out, "q: {}", self.q);
        let _ = writeln!(out, "D^2: {}", self.d_squared);
        let _ = writeln!(out, "nonnegative entries: {}", self.nonnegative);
        let _ = writeln!(
            out,
            "signature (b+, b-, b0): ({}, {}, {})",
            self.signature.b_plus, self.signature.b_minus, self.signature.b_zero
        );
        let _ = writeln!(out, "boundary H1: {}", self.h1);
        let _ = writeln!(out, "boundary bundle: {}", self.class);
        out
    }
}

fn verdict_text(
    conv: &ConvexityVerdict,
    fill: Option<&FillabilityVerdict>,
    anti: &AntiCanonicalVerdict,
    rigid: &RigidityReport,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "trichotomy: {}", conv.kind);
    match fill {
        None => {
            let _ = writeln!(out, "fillability: not applicable (the divisor is not concave)");
        }
        Some(fill) => {
            let _ = write!(out, "fillability: {}", fill.status.as_str());
            if let Some(family) = fill.family {
                let _ = write!(out, ", family {family}");
            }
            if let Some(rep) = &fill.representative {
                let _ = write!(out, ", representative {rep}");
            }
            match &fill.reason {
                FillReason::Certificate(t) => {
                    let _ = writeln!(out, " ({})", moves_word(t.len()));
                }
                other => {
                    let _ = writeln!(out, " ({})", other.code());
                }
            }
        }
    }
    let _ = write!(out, "anti-canonical: {}", ac_word(anti.status));
    match (&anti.witness, anti.obstruction) {
        (Some(t), _) => {
            let _ = writeln!(out, " (witness from {}, {})", t.source, moves_word(t.len()));
        }
        (None, Some(obstruction)) => {
            let _ = writeln!(out, " ({obstruction})");
        }
        (None, None) => {
            let _ = writeln!(out);
        }
    }
    let _ = writeln!(
        out,
        "rigidity: symplectically embeddable {}, rationally embeddable {}, anti-canonical {}, rigid {}",
        rigid.symplectically_embeddable.as_str(),
        rigid.rationally_embeddable.as_str(),
        rigid.anti_canonical.as_str(),
        rigid.rigid.as_str()
    );
    out
}

fn moves_word(n: usize) -> String {
    if n == 1 {
        "1 move".into()
    } else {
        format!("{n} moves")
    }
}

fn ac_word(status: AcStatus) -> &'static str {
    match status {
        AcStatus::AntiCanonical => "yes",
        AcStatus::NotAntiCanonical => "no",
        AcStatus::Inconclusive => "inconclusive",
    }
}

fn filling_text(homology: Option<&FillingHomology>, geography: Option<&GeographyReport>) -> String {
    let mut out = String::new();
    if let Some(h) = homology {
        let _ = write!(
            out,
            "minimal filling: b1 {}, b2 {}, b3 {}, b+ {}, b- {}, b0 {}, euler {}, sigma {}",
            h.b1, h.b2, h.b3, h.b_plus, h.b_minus, h.b_zero, h.euler, h.sigma
        );
        let _ = writeln!(out, "{}", if h.c1_zero { ", c1 = 0" } else { "" });
    }
    if let Some(g) = geography {
        let _ = writeln!(out, "stein geography at q = {}:", g.q);
        for case in &g.cases {
            let _ = write!(
                out,
                "  case {}: b+ {}, b0 {}, b1 {}, b- ",
                case.label, case.b_plus, case.b_zero, case.b1
            );
            match &case.b_minus {
                Some(b) => {
                    let _ = write!(out, "{b}");
                }
                None => {
                    let _ = write!(out, "unconstrained");
                }
            }
            match case.c1_zero {
                Some(true) => {
                    let _ = writeln!(out, ", c1 = 0");
                }
                _ => {
                    let _ = writeln!(out);
                }
            }
        }
    }
    out
}

fn notes_for(sig: &Signature, fill: Option<&FillabilityVerdict>) -> Vec<&'static str> {
    let mut notes = Vec::new();
    if sig.b_plus == 0 && sig.b_zero > 0 {
        notes.push(
            "strictly semi-definite cycle: without an anti-canonical witness, rational \
             embeddability is an open conjecture, so the rigidity report leaves it unknown",
        );
    }
    if fill.is_some_and(|f| f.status == FillStatus::Fillable) {
        notes.push(
            "fillable boundary: the minimal symplectic fillings fall into finitely many \
             deformation classes",
        );
    }
    notes
}

fn fill_trace(fill: Option<&FillabilityVerdict>) -> Option<&MoveTrace> {
    match fill.map(|f| &f.reason) {
        Some(FillReason::Certificate(t)) => Some(t),
        _ => None,
    }
}

fn trace_value(fill: Option<&FillabilityVerdict>, anti: &AntiCanonicalVerdict) -> Value {
    let expand = |t: &MoveTrace| {
        let states: Vec<String> =
            t.states().expect("certificates replay").iter().map(Divisor::literal_string).collect();
        json!({ "trace": t, "states": states })
    };
    json!({
        "fillability": fill_trace(fill).map(expand),
        "anti_canonical": anti.witness.as_ref().map(expand),
    })
}

fn trace_text(fill: Option<&FillabilityVerdict>, anti: &AntiCanonicalVerdict) -> String {
    let mut out = String::new();
    if let Some(t) = fill_trace(fill) {
        let _ = writeln!(out, "fillability trace: {}", arrows(t));
    }
    if let Some(t) = &anti.witness {
        let _ = writeln!(out, "anti-canonical trace: {}", arrows(t));
    }
    out
}

fn arrows(trace: &MoveTrace) -> String {
    let states = trace.states().expect("certificates replay");
    let rendered: Vec<String> = states.iter().map(Divisor::literal_string).collect();
    rendered.join(" -> ")
}
