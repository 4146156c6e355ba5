//! The concave/convex/neither trichotomy, decided twice: by the signature of
//! the intersection matrix, and independently by exact rational linear
//! feasibility of the area criterion.
//!
//! The criterion asks for an area vector `a > 0` with `Q_D z = a` where the
//! profile `z` is strictly positive (concave side) or nonpositive (convex
//! side).  Both sides are scale-invariant, so strict inequalities normalize
//! losslessly to `>= 1`, and a small self-contained big-rational simplex
//! settles feasibility with a reusable proof either way: a certificate
//! `(z, a)` that re-multiplies exactly, or a Farkas dual vector certifying
//! infeasibility.  The two decision routes are kept separate so each can
//! audit the other.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::divisor::Divisor;
use crate::lattice::{divisor_signature, intersection_matrix, solve};
use crate::{Int, Q, Z};

/// Which side of the area criterion to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsMode {
    Concave,
    Convex,
}

/// An exact solution of the area criterion: `Q_D z = a` with `a` strictly
/// positive and `z` strictly positive (concave) or nonpositive (convex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsCertificate {
    pub z: Vec<Q>,
    pub a: Vec<Q>,
}

/// A Farkas dual vector proving the criterion infeasible: `y >= 0`,
/// `y^T M <= 0` and `y^T c > 0` for the normalized system `x >= 0, Mx >= c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasWitness {
    pub y: Vec<Q>,
}

/// The outcome of one feasibility test, always carrying a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GsOutcome {
    Feasible(GsCertificate),
    Infeasible(FarkasWitness),
}

impl GsOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, GsOutcome::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&GsCertificate> {
        match self {
            GsOutcome::Feasible(c) => Some(c),
            GsOutcome::Infeasible(_) => None,
        }
    }
}

/// The three convexity kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trichotomy {
    Concave,
    Convex,
    Neither,
}

impl Trichotomy {
    pub fn as_str(self) -> &'static str {
        match self {
            Trichotomy::Concave => "concave",
            Trichotomy::Convex => "convex",
            Trichotomy::Neither => "neither",
        }
    }
}

impl fmt::Display for Trichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Trichotomy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The combined verdict: the kind from the signature route, with the
/// feasibility route's certificate attached whenever one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub kind: Trichotomy,
    pub certificate: Option<GsCertificate>,
}

/// Decides the trichotomy from eigenvalue sign counts alone: concave exactly
/// when `b+ >= 1`, convex exactly when `Q_D` is negative definite, neither
/// exactly when it is strictly negative semi-definite.
pub fn trichotomy<T: Int>(d: &Divisor<T>) -> Trichotomy {
    let sig = divisor_signature(d);
    if sig.b_plus >= 1 {
        Trichotomy::Concave
    } else if sig.b_zero == 0 {
        Trichotomy::Convex
    } else {
        Trichotomy::Neither
    }
}

fn big_q(v: i64) -> Q {
    Q::from_integer(Z::from(v))
}

fn intersection_rows<T: Int>(d: &Divisor<T>) -> Vec<Vec<Q>> {
    let q = intersection_matrix(&d.to_bigint());
    (0..q.rows())
        .map(|i| (0..q.cols()).map(|j| Q::from_integer(q.get(i, j).clone())).collect())
        .collect()
}

/// Tests one side of the area criterion by exact linear programming.
pub fn gs_feasible<T: Int>(d: &Divisor<T>, mode: GsMode) -> GsOutcome {
    let rows = intersection_rows(d);
    let r = rows.len();
    let (m, c): (Vec<Vec<Q>>, Vec<Q>) = match mode {
        GsMode::Concave => {
            // z = x + 1 with x >= 0 turns z >= 1, Qz >= 1 into Qx >= 1 - Q*1.
            let c = (0..r)
                .map(|i| big_q(1) - rows[i].iter().fold(Q::zero(), |acc, v| acc + v.clone()))
                .collect();
            (rows.clone(), c)
        }
        GsMode::Convex => {
            // z = -x with x >= 0 turns z <= 0, Qz >= 1 into (-Q)x >= 1.
            let m = rows
                .iter()
                .map(|row| row.iter().map(|v| -v.clone()).collect())
                .collect();
            (m, vec![big_q(1); r])
        }
    };
    match feasible_nonnegative(&m, &c) {
        Ok(x) => {
            let z: Vec<Q> = match mode {
                GsMode::Concave => x.iter().map(|v| v.clone() + big_q(1)).collect(),
                GsMode::Convex => x.iter().map(|v| -v.clone()).collect(),
            };
            let a: Vec<Q> = rows
                .iter()
                .map(|row| {
                    row.iter().zip(&z).fold(Q::zero(), |acc, (m, zj)| acc + m.clone() * zj.clone())
                })
                .collect();
            assert!(a.iter().all(Q::is_positive), "area vector must be strictly positive");
            match mode {
                GsMode::Concave => {
                    assert!(z.iter().all(Q::is_positive), "concave profile must be positive")
                }
                GsMode::Convex => {
                    assert!(!z.iter().any(Q::is_positive), "convex profile must be nonpositive")
                }
            }
            GsOutcome::Feasible(GsCertificate { z, a })
        }
        Err(y) => GsOutcome::Infeasible(FarkasWitness { y }),
    }
}

/// Combines the routes: kind from the signature, certificate from the
/// feasibility test.  The two must agree; a disagreement is a bug in one of
/// them and aborts loudly.
pub fn convexity_verdict<T: Int>(d: &Divisor<T>) -> ConvexityVerdict {
    let kind = trichotomy(d);
    let certificate = match kind {
        Trichotomy::Concave => match gs_feasible(d, GsMode::Concave) {
            GsOutcome::Feasible(c) => Some(c),
            GsOutcome::Infeasible(_) => {
                unreachable!("signature says concave but the area criterion is infeasible")
            }
        },
        Trichotomy::Convex => match gs_feasible(d, GsMode::Convex) {
            GsOutcome::Feasible(c) => Some(c),
            GsOutcome::Infeasible(_) => {
                unreachable!("signature says convex but the area criterion is infeasible")
            }
        },
        Trichotomy::Neither => {
            debug_assert!(!gs_feasible(d, GsMode::Concave).is_feasible());
            debug_assert!(!gs_feasible(d, GsMode::Convex).is_feasible());
            None
        }
    };
    ConvexityVerdict { kind, certificate }
}

/// Solves `Q_D z = a` exactly for a prescribed area vector, if possible.
pub fn solve_area<T: Int>(d: &Divisor<T>, a: &[Q]) -> Option<Vec<Q>> {
    solve(&intersection_matrix(&d.to_bigint()), a)
}

/// Exact feasibility of `{x >= 0 : Mx >= c}` by a two-phase dense simplex
/// with Bland's rule.  Returns a feasible point or a Farkas vector `y >= 0`
/// with `y^T M <= 0`, `y^T c > 0`.
#[allow(clippy::needless_range_loop)]
fn feasible_nonnegative(m: &[Vec<Q>], c: &[Q]) -> std::result::Result<Vec<Q>, Vec<Q>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    // Surplus then artificial variables; rows are sign-flipped so every
    // right-hand side is nonnegative and the artificials form a basis.
    let sigma: Vec<Q> = c
        .iter()
        .map(|ci| if ci.is_negative() { big_q(-1) } else { big_q(1) })
        .collect();
    let total = cols + rows + rows;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = vec![Q::zero(); total + 1];
        for j in 0..cols {
            row[j] = sigma[i].clone() * m[i][j].clone();
        }
        row[cols + i] = -sigma[i].clone();
        row[cols + rows + i] = Q::one();
        row[total] = sigma[i].clone() * c[i].clone();
        tab.push(row);
    }
    // Reduced-cost row for minimizing the sum of artificials, already priced
    // for the artificial basis; the last entry is minus the objective.
    let mut obj = vec![Q::zero(); total + 1];
    for j in 0..=total {
        let col_sum = (0..rows).fold(Q::zero(), |acc, i| acc + tab[i][j].clone());
        let cost = if (cols + rows..total).contains(&j) { Q::one() } else { Q::zero() };
        obj[j] = cost - col_sum;
    }
    let mut basis: Vec<usize> = (0..rows).map(|i| cols + rows + i).collect();
    let mut guard = 0usize;
    loop {
        guard += 1;
        assert!(guard < 100_000, "simplex failed to terminate under Bland's rule");
        let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        let mut best: Option<Q> = None;
        for i in 0..rows {
            if tab[i][enter].is_positive() {
                let ratio = tab[i][total].clone() / tab[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded below by zero");
        let pivot = tab[leave][enter].clone();
        for v in tab[leave].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        for i in 0..rows {
            if i != leave && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..=total {
                    let delta = f.clone() * tab[leave][j].clone();
                    tab[i][j] = tab[i][j].clone() - delta;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=total {
                let delta = f.clone() * tab[leave][j].clone();
                obj[j] = obj[j].clone() - delta;
            }
        }
        basis[leave] = enter;
    }
    let objective = -obj[total].clone();
    if objective.is_positive() {
        // Dual prices off the artificial columns give the Farkas vector once
        // the row sign flips are undone.
        let y: Vec<Q> = (0..rows)
            .map(|i| sigma[i].clone() * (Q::one() - obj[cols + rows + i].clone()))
            .collect();
        assert!(y.iter().all(|v| !v.is_negative()), "Farkas vector must be nonnegative");
        for j in 0..cols {
            let col = (0..rows).fold(Q::zero(), |acc, i| acc + y[i].clone() * m[i][j].clone());
            assert!(!col.is_positive(), "Farkas vector must price out the columns");
        }
        let rhs = (0..rows).fold(Q::zero(), |acc, i| acc + y[i].clone() * c[i].clone());
        assert!(rhs.is_positive(), "Farkas vector must separate the right-hand side");
        Err(y)
    } else {
        let mut x = vec![Q::zero(); cols];
        for (i, &b) in basis.iter().enumerate() {
            if b < cols {
                x[b] = tab[i][total].clone();
            }
        }
        for i in 0..rows {
            let lhs = (0..cols).fold(Q::zero(), |acc, j| acc + m[i][j].clone() * x[j].clone());
            assert!(lhs >= c[i], "feasible point must satisfy every row");
        }
        Ok(x)
    }
}

fn serialize_rational<S: Serializer>(v: &Q, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(2))?;
    map.serialize_entry("num", &v.numer().to_string())?;
    map.serialize_entry("den", &v.denom().to_string())?;
    map.end()
}

struct RationalList<'a>(&'a [Q]);

impl Serialize for RationalList<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct One<'a>(&'a Q);
        impl Serialize for One<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serialize_rational(self.0, serializer)
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for v in self.0 {
            seq.serialize_element(&One(v))?;
        }
        seq.end()
    }
}

impl Serialize for GsCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("z", &RationalList(&self.z))?;
        map.serialize_entry("a", &RationalList(&self.a))?;
        map.end()
    }
}

impl Serialize for FarkasWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry("y", &RationalList(&self.y))?;
        map.end()
    }
}

impl Serialize for ConvexityVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("kind", &self.kind)?;
        map.serialize_entry("certificate", &self.certificate)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(entries: &[i64]) -> Divisor<i64> {
        Divisor::new(entries.to_vec()).unwrap()
    }

    fn q(n: i64, den: i64) -> Q {
        Q::new(Z::from(n), Z::from(den))
    }

    #[test]
    fn trichotomy_examples() {
        assert_eq!(trichotomy(&d(&[1, 1, 1])), Trichotomy::Concave);
        assert_eq!(trichotomy(&d(&[-2, -5])), Trichotomy::Convex);
        for n in 2..=6 {
            let dn = Divisor::new(vec![-2i64; n]).unwrap();
            assert_eq!(trichotomy(&dn), Trichotomy::Neither);
        }
        assert_eq!(trichotomy(&d(&[-1, -3])), Trichotomy::Concave);
        assert_eq!(trichotomy(&d(&[-1, -4])), Trichotomy::Neither);
    }

    #[test]
    fn concave_example_certificate() {
        let z = solve_area(&d(&[-1, -3]), &[q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(z, vec![q(7, 1), q(4, 1)]);

        match gs_feasible(&d(&[-1, -3]), GsMode::Concave) {
            GsOutcome::Feasible(cert) => {
                assert!(cert.z.iter().all(|v| v.is_positive()));
                assert!(cert.a.iter().all(|v| v.is_positive()));
            }
            GsOutcome::Infeasible(_) => panic!("(-1,-3) satisfies the concave criterion"),
        }
    }

    #[test]
    fn convex_example_certificate() {
        let z = solve_area(&d(&[-2, -5]), &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(z, vec![q(-7, 6), q(-2, 3)]);
        assert!(gs_feasible(&d(&[-2, -5]), GsMode::Convex).is_feasible());
        assert!(!gs_feasible(&d(&[-2, -5]), GsMode::Concave).is_feasible());
    }

    #[test]
    fn flat_cycle_is_neither() {
        let flat = d(&[-2, -2, -2]);
        assert!(!gs_feasible(&flat, GsMode::Concave).is_feasible());
        assert!(!gs_feasible(&flat, GsMode::Convex).is_feasible());
        assert_eq!(trichotomy(&flat), Trichotomy::Neither);
    }

    #[test]
    fn verdict_merges_routes() {
        let v = convexity_verdict(&d(&[1, 1, 1]));
        assert_eq!(v.kind, Trichotomy::Concave);
        assert!(v.certificate.is_some());
        let v = convexity_verdict(&d(&[-2, -5]));
        assert_eq!(v.kind, Trichotomy::Convex);
        assert!(v.certificate.is_some());
        let v = convexity_verdict(&d(&[-2, -2, -2, -2]));
        assert_eq!(v.kind, Trichotomy::Neither);
        assert!(v.certificate.is_none());
    }

    #[test]
    fn oracle_agreement_length_two() {
        for s1 in -4i64..=2 {
            for s2 in -4i64..=2 {
                let dv = d(&[s1, s2]);
                let kind = trichotomy(&dv);
                assert_eq!(
                    gs_feasible(&dv, GsMode::Concave).is_feasible(),
                    kind == Trichotomy::Concave,
                    "concave mismatch at {dv}"
                );
                assert_eq!(
                    gs_feasible(&dv, GsMode::Convex).is_feasible(),
                    kind == Trichotomy::Convex,
                    "convex mismatch at {dv}"
                );
            }
        }
    }

    #[test]
    fn kind_survives_toric_blow_up() {
        for entries in [[1i64, 1, 1], [-2, -5, 0], [-3, -2, -2], [0, 0, -2]] {
            let dv = d(&entries);
            let kind = trichotomy(&dv);
            for edge in 0..dv.len() {
                assert_eq!(trichotomy(&dv.toric_blow_up(edge).unwrap()), kind, "at {dv}, {edge}");
            }
        }
    }
}
