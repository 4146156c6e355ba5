//! The acceptance checklist. Each criterion runs in order and prints one
//! pass/fail line; run with `--nocapture` to see the lines as they finish.
//! A criterion fails if its assertions trip or if it overruns its time
//! budget. The final assertion fails the target when any criterion failed.

use std::collections::BTreeSet;
use std::panic::catch_unwind;
use std::time::{Duration, Instant};

use csdiv::classify::{
    anticanonical_search, classify_fillability, AcStatus, FillStatus, FillabilityVerdict,
};
use csdiv::convexity::{gs_feasible, GsMode};
use csdiv::divisor::Divisor;
use csdiv::equiv::{decide_equivalence, EquivKind, SearchBudget};
use csdiv::fillings::{
    cap_invariants, dual_cusp, minimal_filling_homology, stein_geography, CuspCycle,
};
use csdiv::lattice::{
    det, divisor_signature, intersection_matrix, smith_normal_form, AbelianGroup, IntMatrix,
};
use csdiv::sl2z::{conjugacy_canon, monodromy, negative_boundary_class, BundleClass, SL2};
use csdiv::Z;
use num_traits::{One, Signed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CRITERIA: [(&str, u64, fn()); 10] = [
    ("01 toric move invariance", 30_000, toric_move_invariance),
    ("02 monodromy lattice consistency", 30_000, monodromy_lattice_consistency),
    ("03 convexity route agreement", 300_000, convexity_route_agreement),
    ("04 certified equivalences", 10_000, certified_equivalences),
    ("05 fillability table", 30_000, fillability_table),
    ("06 filling homology", 5_000, filling_homology),
    ("07 anti-canonical search", 120_000, anti_canonical_search),
    ("08 dual cusp involution", 60_000, dual_cusp_involution),
    ("09 conjugacy canonicalization", 60_000, conjugacy_canonicalization),
    ("10 filling geography", 1_000, filling_geography),
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (label, limit_ms, body) in CRITERIA {
        let limit = Duration::from_millis(limit_ms);
        let start = Instant::now();
        let outcome = catch_unwind(body);
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= limit => Ok(()),
            Ok(()) => Err(format!("finished in {elapsed:.2?}, over the {limit:.2?} budget")),
            Err(payload) => Err(panic_text(payload)),
        };
        match verdict {
            Ok(()) => println!("acceptance {label}: PASS ({elapsed:.2?})"),
            Err(message) => {
                println!("acceptance {label}: FAIL ({message})");
                failed.push(label);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(text) = payload.downcast_ref::<&str>() {
        (*text).to_string()
    } else if let Some(text) = payload.downcast_ref::<String>() {
        text.clone()
    } else {
        "panicked".to_string()
    }
}

fn mk(entries: &[i64]) -> Divisor {
    Divisor::from_ints(entries).unwrap()
}

fn random_divisor(rng: &mut StdRng) -> Divisor {
    let r = rng.gen_range(2..=8);
    let entries: Vec<i64> = (0..r).map(|_| rng.gen_range(-6..=4)).collect();
    mk(&entries)
}

fn toric_move_invariance() {
    let mut rng = StdRng::from_seed([11; 32]);
    for _ in 0..500 {
        let base = random_divisor(&mut rng);
        let charge = base.charge();
        let sig0 = divisor_signature(&base);
        let class0 = negative_boundary_class(&base);
        let mut current = base;
        let mut expect_minus = sig0.b_minus as i64;
        for _ in 0..rng.gen_range(0..=6) {
            let r = current.len();
            let minus_one = Z::from(-1);
            let zero = Z::from(0);
            current = match rng.gen_range(0u8..4) {
                1 if r >= 3 => {
                    let ones: Vec<usize> =
                        (0..r).filter(|&i| current.entries()[i] == minus_one).collect();
                    if ones.is_empty() {
                        expect_minus += 1;
                        current.toric_blow_up(rng.gen_range(0..r)).unwrap()
                    } else {
                        expect_minus -= 1;
                        current.toric_blow_down(ones[rng.gen_range(0..ones.len())]).unwrap()
                    }
                }
                2 if r >= 3 => {
                    let zeros: Vec<usize> =
                        (0..r).filter(|&i| current.entries()[i] == zero).collect();
                    if zeros.is_empty() {
                        expect_minus += 1;
                        current.toric_blow_up(rng.gen_range(0..r)).unwrap()
                    } else {
                        let at = zeros[rng.gen_range(0..zeros.len())];
                        current.balancing_move(at, &Z::from(rng.gen_range(-3i64..=3))).unwrap()
                    }
                }
                3 if r >= 3 => {
                    let pairs: Vec<usize> = (0..r)
                        .filter(|&i| {
                            current.entries()[i] == zero && current.entries()[(i + 1) % r] == zero
                        })
                        .collect();
                    if pairs.is_empty() {
                        expect_minus += 1;
                        current.toric_blow_up(rng.gen_range(0..r)).unwrap()
                    } else {
                        expect_minus -= 1;
                        current.zero_pair_collapse(pairs[rng.gen_range(0..pairs.len())]).unwrap()
                    }
                }
                _ => {
                    expect_minus += 1;
                    current.toric_blow_up(rng.gen_range(0..r)).unwrap()
                }
            };
            let sig = divisor_signature(&current);
            assert_eq!(current.charge(), charge, "charge drifted at {current}");
            assert_eq!(sig.b_plus, sig0.b_plus, "b+ drifted at {current}");
            assert_eq!(sig.b_zero, sig0.b_zero, "b0 drifted at {current}");
            assert_eq!(sig.b_minus as i64, expect_minus, "b- off at {current}");
            assert_eq!(
                negative_boundary_class(&current),
                class0,
                "bundle class drifted at {current}"
            );
        }
    }
}

fn group_order(group: &AbelianGroup) -> Option<Z> {
    if group.free_rank > 0 {
        None
    } else {
        Some(group.torsion.iter().fold(Z::one(), |acc, t| acc * t))
    }
}

fn monodromy_lattice_consistency() {
    let mut rng = StdRng::from_seed([13; 32]);
    for _ in 0..500 {
        let d = random_divisor(&mut rng);
        let a = monodromy(&d);
        let fixed = IntMatrix::from_rows(vec![
            vec![a.a().clone() - Z::one(), a.b().clone()],
            vec![a.c().clone(), a.d().clone() - Z::one()],
        ])
        .unwrap();
        let q = intersection_matrix(&d);
        assert_eq!(det(&fixed).abs(), det(&q).abs(), "determinants split on {d}");
        assert_eq!(
            group_order(&smith_normal_form(&fixed)),
            group_order(&smith_normal_form(&q)),
            "cokernel orders split on {d}"
        );
    }
}

fn convexity_route_agreement() {
    let mut canon: BTreeSet<Vec<Z>> = BTreeSet::new();
    for r in 2usize..=5 {
        let mut odo = vec![-5i64; r];
        loop {
            canon.insert(mk(&odo).canonical_entries());
            let mut pos = 0;
            loop {
                if pos == r {
                    break;
                }
                odo[pos] += 1;
                if odo[pos] <= 3 {
                    break;
                }
                odo[pos] = -5;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
    }
    assert!(canon.len() > 5_000, "pool unexpectedly small: {}", canon.len());
    for entries in canon {
        let d = Divisor::new(entries).unwrap();
        let sig = divisor_signature(&d);
        assert_eq!(
            gs_feasible(&d, GsMode::Concave).is_feasible(),
            sig.b_plus >= 1,
            "concave routes split on {d}"
        );
        assert_eq!(
            gs_feasible(&d, GsMode::Convex).is_feasible(),
            sig.b_plus == 0 && sig.b_zero == 0,
            "convex routes split on {d}"
        );
    }
}

fn assert_equivalent(a: &[i64], b: &[i64]) {
    let d1 = mk(a);
    let d2 = mk(b);
    let verdict = decide_equivalence(&d1, &d2, &SearchBudget::for_pair(&d1, &d2)).unwrap();
    assert_eq!(verdict.kind, EquivKind::Equivalent, "{d1} vs {d2}");
    let trace = verdict.trace.expect("equivalent verdicts carry traces");
    assert_eq!(trace.source.canonical_entries(), d1.canonical_entries());
    assert_eq!(trace.replay().unwrap().canonical_entries(), d2.canonical_entries());
}

fn certified_equivalences() {
    let pairs: [(&[i64], &[i64]); 6] = [
        (&[-1, 4], &[1, -1, -2, -2, -2]),
        (&[1, 4], &[3, -1, 0]),
        (&[3, -1, 0], &[1, 1, 0]),
        (&[2, 2], &[1, 1, -1]),
        (&[3, -2, 0], &[2, -2, -1, -1]),
        (&[2, -2, -1, -1], &[2, -1, 0]),
    ];
    for (a, b) in pairs {
        assert_equivalent(a, b);
    }
    for p in -4i64..=0 {
        assert_equivalent(&[0, 0, 0, p], &[1, 1, p + 1]);
    }
}

fn fill(entries: &[i64]) -> FillabilityVerdict {
    let d = mk(entries);
    classify_fillability(&d, &SearchBudget::for_pair(&d, &d)).unwrap()
}

fn fillability_table() {
    for p in -6i64..=4 {
        assert_eq!(fill(&[0, p]).status, FillStatus::Fillable, "(0,{p})");
    }
    for p in [5i64, 6] {
        assert_eq!(fill(&[0, p]).status, FillStatus::NotFillable, "(0,{p})");
    }
    for p in -15i64..=1 {
        assert_eq!(fill(&[1, 1, p]).status, FillStatus::Fillable, "(1,1,{p})");
    }
    let two = fill(&[1, 1, 2]);
    assert_eq!(two.status, FillStatus::NotFillable);
    assert_eq!(two.reason.code(), "b-plus-ge-2");
    assert_eq!(fill(&[5, 0]).status, FillStatus::NotFillable);
    let seven = fill(&[1, -2, -3, -3, -2, -3, -2]);
    assert_eq!(seven.status, FillStatus::Fillable);
    assert_eq!(seven.family, Some(4));
}

fn filling_homology() {
    let d111 = mk(&[1, 1, 1]);
    let f111 = classify_fillability(&d111, &SearchBudget::for_pair(&d111, &d111)).unwrap();
    assert_eq!(f111.status, FillStatus::Fillable);
    let h111 = minimal_filling_homology(&d111, &f111).unwrap();
    assert_eq!(h111.b1, Z::from(2));
    assert_eq!(h111.b2, Z::from(1));
    assert_eq!(h111.b_minus, Z::from(0));
    assert!(h111.identities_hold());

    let seven = mk(&[1, -2, -3, -3, -2, -3, -2]);
    let fs = classify_fillability(&seven, &SearchBudget::for_pair(&seven, &seven)).unwrap();
    assert_eq!(fs.status, FillStatus::Fillable);
    let hs = minimal_filling_homology(&seven, &fs).unwrap();
    assert_eq!(hs.b1, Z::from(0));
    assert_eq!(hs.b2, Z::from(4));
    assert_eq!(hs.b_minus, Z::from(3));
    assert!(hs.identities_hold());
    let cap = cap_invariants(&seven, 10);
    assert_eq!(cap.b2, Some(Z::from(4)));
    assert_eq!(hs.b2, cap.b2.unwrap());
}

fn assert_witnessed(d: &Divisor) {
    let verdict = anticanonical_search(d, &SearchBudget::for_pair(d, d)).unwrap();
    assert_eq!(verdict.status, AcStatus::AntiCanonical, "{d}");
    let witness = verdict.witness.expect("positive verdicts carry traces");
    assert_eq!(witness.replay().unwrap().canonical_entries(), d.canonical_entries());
}

fn anti_canonical_search() {
    assert_witnessed(&mk(&[-1, -4]));
    for n in 2usize..=9 {
        assert_witnessed(&mk(&vec![-2i64; n]));
    }
    for n in [10usize, 11] {
        let d = mk(&vec![-2i64; n]);
        let verdict = anticanonical_search(&d, &SearchBudget::for_pair(&d, &d)).unwrap();
        assert_eq!(verdict.status, AcStatus::NotAntiCanonical, "cycle of {n}");
        assert_eq!(verdict.obstruction, Some("exhaustive-search"));
    }
}

fn is_canonical(buf: &[i64]) -> bool {
    let r = buf.len();
    let first = buf[0];
    'rotations: for j in 1..r {
        if buf[j] != first {
            continue;
        }
        for k in 0..r {
            let own = buf[k];
            let other = buf[(j + k) % r];
            if own < other {
                continue 'rotations;
            }
            if own > other {
                return false;
            }
        }
    }
    true
}

fn involution_check(entries: &[i64]) {
    let c = CuspCycle::<i64>::from_ints(entries).unwrap();
    assert_eq!(c.entries(), entries, "normalizer moved a canonical representative");
    let double = dual_cusp(&dual_cusp(&c));
    assert_eq!(double.entries(), entries, "double dual moved {entries:?}");
}

/// Walks every cyclic sequence over [-12, -2] of length at most eight with
/// some entry at or below -3, once per rotation class, by generating only
/// lexicographically minimal representatives that start at their smallest
/// entry. The expected class total is the necklace census for that alphabet
/// minus the all minus-two classes.
fn dual_cusp_involution() {
    let mut classes: u64 = 0;
    let mut buf = [0i64; 8];
    for r in 1usize..=8 {
        for f in -12i64..=-3 {
            buf[0] = f;
            if r == 1 {
                involution_check(&buf[..1]);
                classes += 1;
                continue;
            }
            for slot in buf.iter_mut().take(r).skip(1) {
                *slot = f;
            }
            'sequences: loop {
                if is_canonical(&buf[..r]) {
                    involution_check(&buf[..r]);
                    classes += 1;
                }
                let mut pos = r - 1;
                loop {
                    buf[pos] += 1;
                    if buf[pos] <= -2 {
                        continue 'sequences;
                    }
                    buf[pos] = f;
                    if pos == 1 {
                        break 'sequences;
                    }
                    pos -= 1;
                }
            }
        }
    }
    assert_eq!(classes, 29_912_578, "class count drifted from the necklace census");
}

fn random_conjugator(rng: &mut StdRng) -> SL2 {
    let mut g = SL2::identity();
    for _ in 0..rng.gen_range(1..=6) {
        let e = Z::from(rng.gen_range(-3i64..=3));
        if rng.gen::<bool>() {
            g = g.mul(&SL2::r_power(&e));
        } else {
            g = g.mul(&SL2::l_power(&e));
        }
    }
    g
}

fn conjugacy_canonicalization() {
    let mut rng = StdRng::from_seed([17; 32]);
    let mut pool: Vec<SL2> = vec![
        SL2::from_ints(0, 1, -1, 0).unwrap(),
        SL2::from_ints(0, -1, 1, 0).unwrap(),
        SL2::from_ints(1, 1, -1, 0).unwrap(),
        SL2::from_ints(-1, -1, 1, 0).unwrap(),
        SL2::from_ints(0, 1, -1, 1).unwrap(),
        SL2::from_ints(0, -1, 1, -1).unwrap(),
    ];
    for n in [3i64, -2] {
        let r = SL2::r_power(&Z::from(n));
        let l = SL2::l_power(&Z::from(n));
        pool.push(r.negated());
        pool.push(r);
        pool.push(l.negated());
        pool.push(l);
    }
    let mut parity = false;
    while pool.len() < 50 {
        let mut m = SL2::identity();
        for _ in 0..rng.gen_range(2..=5) {
            m = m.mul(&SL2::r_power(&Z::from(rng.gen_range(1i64..=3))));
            m = m.mul(&SL2::l_power(&Z::from(rng.gen_range(1i64..=3))));
        }
        if parity {
            m = m.negated();
        }
        parity = !parity;
        pool.push(m);
    }
    let kinds: BTreeSet<&str> =
        pool.iter().map(|m| conjugacy_canon(m).kind().as_str()).collect();
    assert_eq!(kinds.len(), 5, "pool misses a bundle kind: {kinds:?}");
    for m in &pool {
        let base = conjugacy_canon(m);
        for _ in 0..200 {
            let g = random_conjugator(&mut rng);
            let conjugate = g.mul(m).mul(&g.inverse());
            assert_eq!(conjugacy_canon(&conjugate), base, "canon unstable over {m:?}");
        }
    }
    for n in -20i64..=20 {
        let twist = SL2::r_power(&Z::from(n));
        for negated in [false, true] {
            let target = if negated { twist.negated() } else { twist.clone() };
            let want = BundleClass::Parabolic { negated, twist: Z::from(n) };
            assert_eq!(conjugacy_canon(&target), want);
            for _ in 0..5 {
                let g = random_conjugator(&mut rng);
                let conjugate = g.mul(&target).mul(&g.inverse());
                assert_eq!(conjugacy_canon(&conjugate), want, "twist {n} not recovered");
            }
        }
    }
}

fn filling_geography() {
    let report = stein_geography(&mk(&[-2, -5])).unwrap();
    assert_eq!(report.q, Z::from(13));
    let labels: Vec<u8> = report.cases.iter().map(|c| c.label).collect();
    assert_eq!(labels, vec![1, 2, 3]);
    assert_eq!(report.cases[0].b_minus, None);
    assert_eq!(report.cases[1].b_minus, Some(Z::from(8)));
    assert_eq!(report.cases[2].b_minus, Some(Z::from(9)));
    for entries in [[-2i64, -15], [-4, -20]] {
        let far = stein_geography(&mk(&entries)).unwrap();
        assert!(far.q >= Z::from(23), "charge below the cutoff: {}", far.q);
        assert_eq!(far.cases.len(), 1);
        assert_eq!(far.cases[0].label, 1);
    }
}
