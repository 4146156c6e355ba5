//! Cross-module randomized invariants: move calculus vs. lattice data,
//! monodromy vs. intersection form, the two convexity routes, and the dual
//! cusp involution.

use csdiv::convexity::{gs_feasible, GsMode};
use csdiv::divisor::Divisor;
use csdiv::equiv::{decide_equivalence, invariant_screen, EquivKind, SearchBudget};
use csdiv::fillings::{dual_cusp, CuspCycle};
use csdiv::lattice::{det, divisor_signature, intersection_matrix, smith_normal_form, IntMatrix};
use csdiv::sl2z::{bundle_equal_oriented_divisors, monodromy, negative_boundary_class};
use csdiv::Z;
use num_traits::Signed;
use proptest::prelude::*;

fn divisor_entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=4, 2..=7)
}

fn mk(v: &[i64]) -> Divisor {
    Divisor::from_ints(v).unwrap()
}

proptest! {
    #[test]
    fn canonical_entries_are_frame_invariant(v in divisor_entries(), k in 0usize..7, reflect in any::<bool>()) {
        let d = mk(&v);
        let moved = if reflect { d.rotated(k % d.len()).reversed() } else { d.rotated(k % d.len()) };
        prop_assert_eq!(d.canonical_entries(), moved.canonical_entries());
    }

    #[test]
    fn blow_up_then_down_is_identity(v in divisor_entries(), e in 0usize..7) {
        let d = mk(&v);
        let edge = e % d.len();
        let up = d.toric_blow_up(edge).unwrap();
        let inserted = if edge == 0 { d.len() } else { edge };
        prop_assert_eq!(&up.entries()[inserted], &Z::from(-1));
        let down = up.toric_blow_down(inserted).unwrap();
        prop_assert_eq!(down.entries(), d.entries());
    }

    #[test]
    fn toric_blow_up_shifts_only_b_minus(v in divisor_entries(), e in 0usize..7) {
        let d = mk(&v);
        let edge = e % d.len();
        let up = d.toric_blow_up(edge).unwrap();
        prop_assert_eq!(d.charge(), up.charge());
        let before = divisor_signature(&d);
        let after = divisor_signature(&up);
        prop_assert_eq!(before.b_plus, after.b_plus);
        prop_assert_eq!(before.b_zero, after.b_zero);
        prop_assert_eq!(before.b_minus + 1, after.b_minus);
        prop_assert_eq!(negative_boundary_class(&d), negative_boundary_class(&up));
    }

    #[test]
    fn balancing_preserves_all_invariants(
        v in prop::collection::vec(-5i64..=4, 3..=7),
        pos in 0usize..7,
        n in -3i64..=3,
    ) {
        let mut entries = v.clone();
        let at = pos % entries.len();
        entries[at] = 0;
        let d = mk(&entries);
        let moved = d.balancing_move(at, &Z::from(n)).unwrap();
        prop_assert_eq!(d.charge(), moved.charge());
        prop_assert_eq!(divisor_signature(&d), divisor_signature(&moved));
        prop_assert_eq!(negative_boundary_class(&d), negative_boundary_class(&moved));
    }

    #[test]
    fn collapse_equals_its_three_step_expansion(v in divisor_entries(), pos in 0usize..7) {
        let mut entries = v.clone();
        let at = pos % entries.len();
        entries.insert(at, 0);
        entries.insert(at, 0);
        let d = mk(&entries);
        let collapsed = d.zero_pair_collapse(at).unwrap();
        let r = d.len();
        let expanded = if at <= r - 2 {
            d.toric_blow_up(at + 1)
                .and_then(|x| x.toric_blow_down(at + 2))
                .and_then(|x| x.toric_blow_down(at))
        } else {
            d.toric_blow_up(0)
                .and_then(|x| x.toric_blow_down(0))
                .and_then(|x| x.toric_blow_down(r - 2))
        }
        .unwrap();
        prop_assert_eq!(collapsed.entries(), expanded.entries());
    }

    #[test]
    fn monodromy_and_lattice_share_cokernel(v in divisor_entries()) {
        let d = mk(&v);
        let a = monodromy(&d);
        let fixed = IntMatrix::from_rows(vec![
            vec![a.a().clone() - Z::from(1), a.b().clone()],
            vec![a.c().clone(), a.d().clone() - Z::from(1)],
        ])
        .unwrap();
        let q = intersection_matrix(&d);
        prop_assert_eq!(det(&fixed).abs(), det(&q).abs());
        prop_assert_eq!(smith_normal_form(&fixed), smith_normal_form(&q));
    }

    #[test]
    fn feasibility_routes_match_the_signature(v in divisor_entries()) {
        let d = mk(&v);
        let sig = divisor_signature(&d);
        prop_assert_eq!(gs_feasible(&d, GsMode::Concave).is_feasible(), sig.b_plus >= 1);
        prop_assert_eq!(
            gs_feasible(&d, GsMode::Convex).is_feasible(),
            sig.b_plus == 0 && sig.b_zero == 0
        );
    }

    #[test]
    fn screen_agreement_means_matching_invariants(a in divisor_entries(), b in divisor_entries()) {
        let d1 = mk(&a);
        let d2 = mk(&b);
        let agreed = invariant_screen(&d1, &d2).is_none();
        let s1 = divisor_signature(&d1);
        let s2 = divisor_signature(&d2);
        let all_match = d1.charge() == d2.charge()
            && s1.b_plus == s2.b_plus
            && s1.b_zero == s2.b_zero
            && bundle_equal_oriented_divisors(&d1, &d2);
        prop_assert_eq!(agreed, all_match);
    }

    #[test]
    fn display_parse_round_trip(v in divisor_entries()) {
        let d = mk(&v);
        let reparsed: Divisor = Divisor::parse(&d.to_string()).unwrap();
        prop_assert_eq!(reparsed.entries(), &d.canonical_entries()[..]);
    }

    #[test]
    fn dual_cusp_involution_and_charge_pairing(
        blocks in prop::collection::vec((3i64..=9, 0usize..=3), 1..=4)
    ) {
        let mut entries = Vec::new();
        for (a, b) in &blocks {
            entries.push(-a);
            entries.extend(std::iter::repeat_n(-2, *b));
        }
        let c = CuspCycle::<Z>::from_ints(&entries).unwrap();
        let dual = dual_cusp(&c);
        prop_assert_eq!(&dual_cusp(&dual), &c);
        let reference = {
            let base = CuspCycle::<Z>::from_ints(&[-5, -2]).unwrap();
            base.charge() + dual_cusp(&base).charge()
        };
        prop_assert_eq!(c.charge() + dual.charge(), reference);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn short_move_chains_never_separate(
        v in prop::collection::vec(-4i64..=3, 2..=5),
        picks in prop::collection::vec((any::<u8>(), any::<u8>()), 0..=3)
    ) {
        let d = mk(&v);
        let mut current = d.clone();
        for (kind, slot) in picks {
            let r = current.len();
            current = match kind % 3 {
                0 => current.toric_blow_up(slot as usize % r).unwrap(),
                1 => {
                    let minus_one = Z::from(-1);
                    let target = (0..r).find(|&i| current.entries()[i] == minus_one);
                    match target {
                        Some(i) if r >= 3 => current.toric_blow_down(i).unwrap(),
                        _ => current.toric_blow_up(slot as usize % r).unwrap(),
                    }
                }
                _ => {
                    let zero = Z::from(0);
                    let target = (0..r).find(|&i| current.entries()[i] == zero);
                    match target {
                        Some(i) if r >= 3 => current.balancing_move(i, &Z::from(1)).unwrap(),
                        _ => current.toric_blow_up(slot as usize % r).unwrap(),
                    }
                }
            };
        }
        let mut budget = SearchBudget::for_pair(&d, &current);
        budget.max_nodes = 60_000;
        let verdict = decide_equivalence(&d, &current, &budget).unwrap();
        prop_assert_ne!(verdict.kind, EquivKind::Distinct);
    }
}
