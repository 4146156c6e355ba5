//! The intersection matrix `Q_D` and exact integer linear algebra: signature,
//! determinant, Smith normal form, and the boundary first homology.
//!
//! Everything is exact.  Eigenvalue sign counts come from the integer
//! characteristic polynomial (Faddeev-LeVerrier, whose divisions are exact
//! over the integers) combined with Descartes' rule, which counts real roots
//! exactly because symmetric matrices have only real eigenvalues.  The module
//! accepts arbitrary rectangular matrices so it doubles as a small exact
//! linear-algebra utility.

use std::fmt;

use num_traits::Zero;
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::divisor::Divisor;
use crate::{Error, Int, Rat, Result, Z};

/// A dense integer matrix (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix<T: Int = Z> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Int> IntMatrix<T> {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds a matrix from rows, which must all have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Parse { pos: 0, msg: "ragged matrix rows".into() });
        }
        Ok(IntMatrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| crate::int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    /// Whether the matrix is square and equal to its transpose.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| {
                    acc + self.get(i, j).clone() * v[j].clone()
                })
            })
            .collect()
    }

    /// The entrywise negation.
    pub fn negated(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v.clone()).collect(),
        }
    }

    fn plus_scaled_identity(&self, c: &T) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i).clone() + c.clone();
            out.set(i, i, v);
        }
        out
    }
}

impl<T: Int> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: Int> Serialize for IntMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

/// A finitely generated abelian group: free rank plus invariant factors
/// `d_1 | d_2 | ...`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup<T: Int = Z> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: Int> AbelianGroup<T> {
    /// The order of the torsion subgroup.
    pub fn torsion_order(&self) -> T {
        self.torsion.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Whether the group is finite.
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

impl<T: Int> fmt::Display for AbelianGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<T: Int> Serialize for AbelianGroup<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        map.serialize_entry("torsion", &torsion)?;
        map.end()
    }
}

/// The intersection matrix of a divisor: diagonal `s_i`, and 1 for every
/// cyclic adjacency.  For length two the two components meet in two points,
/// so the off-diagonal entries are 2.
pub fn intersection_matrix<T: Int>(d: &Divisor<T>) -> IntMatrix<T> {
    let r = d.len();
    let mut m = IntMatrix::zero(r, r);
    for (i, s) in d.entries().iter().enumerate() {
        m.set(i, i, s.clone());
    }
    for i in 0..r {
        let j = (i + 1) % r;
        let v = m.get(i, j).clone() + T::one();
        m.set(i, j, v);
        let v = m.get(j, i).clone() + T::one();
        m.set(j, i, v);
    }
    m
}

fn exact_div<T: Int>(a: T, b: &T) -> T {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "inexact division in an exact algorithm");
    q
}

/// Monic characteristic polynomial `det(xI - M)` as coefficients
/// `[1, c_1, ..., c_n]` (so `p(x) = x^n + c_1 x^(n-1) + ... + c_n`), computed
/// by Faddeev-LeVerrier; every division is exact over the integers.
pub fn char_poly<T: Int>(m: &IntMatrix<T>) -> Vec<T> {
    assert_eq!(m.rows(), m.cols(), "characteristic polynomial needs a square matrix");
    let n = m.rows();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(T::one());
    let mut work = m.clone();
    for k in 1..=n {
        let c = exact_div(-work.trace(), &crate::int(k as i64));
        coeffs.push(c.clone());
        if k < n {
            work = m.mul(&work.plus_scaled_identity(&c));
        }
    }
    coeffs
}

/// The determinant, via the characteristic polynomial:
/// `det M = (-1)^n p(0)`.
pub fn det<T: Int>(m: &IntMatrix<T>) -> T {
    let coeffs = char_poly(m);
    let n = m.rows();
    let constant = coeffs.last().expect("nonempty").clone();
    if n.is_multiple_of(2) {
        constant
    } else {
        -constant
    }
}

fn sign_variations<T: Int>(coeffs: &[T]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let positive = c.is_positive();
        if let Some(prev) = last {
            if prev != positive {
                count += 1;
            }
        }
        last = Some(positive);
    }
    count
}

/// Exact eigenvalue sign counts of a symmetric integer matrix.
///
/// The zero multiplicity is the number of trailing zero coefficients of the
/// characteristic polynomial; the positive and negative counts are Descartes
/// sign variations of `p(x)` and `p(-x)`, exact here because all roots are
/// real.
pub fn signature<T: Int>(m: &IntMatrix<T>) -> Signature {
    assert!(m.is_symmetric(), "signature needs a symmetric matrix");
    let n = m.rows();
    let coeffs = char_poly(m);
    let b_zero = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    let reduced = &coeffs[..coeffs.len() - b_zero];
    let b_plus = sign_variations(reduced);
    let negated: Vec<T> = reduced
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let degree = reduced.len() - 1 - i;
            if degree.is_multiple_of(2) {
                c.clone()
            } else {
                -c.clone()
            }
        })
        .collect();
    let b_minus = sign_variations(&negated);
    assert_eq!(b_plus + b_minus + b_zero, n, "sign counts must sum to the dimension");
    Signature { b_plus, b_minus, b_zero }
}

/// Signature of the intersection matrix of a divisor.
pub fn divisor_signature<T: Int>(d: &Divisor<T>) -> Signature {
    signature(&intersection_matrix(d))
}

/// The nonzero diagonal of the Smith normal form: positive invariant factors
/// `d_1 | d_2 | ...` including any leading 1s; their count is the rank.
#[allow(clippy::needless_range_loop)]
pub fn smith_invariant_factors<T: Int>(m: &IntMatrix<T>) -> Vec<T> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<T>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut t = 0usize;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        let mut guard = 0usize;
        loop {
            guard += 1;
            assert!(guard < 10_000, "Smith reduction failed to settle");
            if let Some(i) = (0..rows).find(|&i| i != t && !a[i][t].is_zero()) {
                let q = a[i][t].clone().div_rem(&a[t][t]).0;
                for j in 0..cols {
                    let v = a[i][j].clone() - q.clone() * a[t][j].clone();
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                }
                continue;
            }
            if let Some(j) = (0..cols).find(|&j| j != t && !a[t][j].is_zero()) {
                let q = a[t][j].clone().div_rem(&a[t][t]).0;
                for i in 0..rows {
                    let v = a[i][j].clone() - q.clone() * a[i][t].clone();
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, t, j);
                }
                continue;
            }
            let nondivisible = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].clone().div_rem(&a[t][t]).1.is_zero());
            match nondivisible {
                Some((i, _)) => {
                    for j in 0..cols {
                        let v = a[t][j].clone() + a[i][j].clone();
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        t += 1;
    }
    (0..t).map(|k| a[k][k].abs()).collect()
}

fn min_abs_nonzero<T: Int>(a: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn swap_cols<T: Int>(a: &mut [Vec<T>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// The cokernel of the map `Z^cols -> Z^rows` given by the matrix, from its
/// Smith normal form: free rank `rows - rank`, torsion the invariant factors
/// above 1.
pub fn smith_normal_form<T: Int>(m: &IntMatrix<T>) -> AbelianGroup<T> {
    let factors = smith_invariant_factors(m);
    let rank = factors.len();
    let torsion: Vec<T> = factors.into_iter().filter(|d| *d > T::one()).collect();
    AbelianGroup { free_rank: m.rows() - rank, torsion }
}

/// First homology of the boundary torus bundle:
/// `H_1(Y_D) = Z + coker(Q_D)`.
pub fn boundary_h1<T: Int>(d: &Divisor<T>) -> AbelianGroup<T> {
    let mut group = smith_normal_form(&intersection_matrix(d));
    group.free_rank += 1;
    group
}

/// Solves `M x = rhs` exactly over the rationals, returning any solution
/// (free variables set to 0), or `None` if the system is inconsistent.
#[allow(clippy::needless_range_loop)]
pub fn solve<T: Int>(m: &IntMatrix<T>, rhs: &[Rat<T>]) -> Option<Vec<Rat<T>>> {
    assert_eq!(m.rows(), rhs.len(), "shape mismatch");
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rat<T>>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| Rat::from_integer(m.get(i, j).clone()))
                .chain(std::iter::once(rhs[i].clone()))
                .collect()
        })
        .collect();
    let width = cols + 1;
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut row = 0usize;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].clone();
        for j in col..width {
            a[row][j] = a[row][j].clone() / inv.clone();
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..width {
                    let v = a[i][j].clone() - f.clone() * a[row][j].clone();
                    a[i][j] = v;
                }
            }
        }
        pivot_col_of_row[row] = Some(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    for i in row..rows {
        if !a[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::from_integer(T::zero()); cols];
    for (i, pc) in pivot_col_of_row.iter().enumerate() {
        if let Some(col) = pc {
            x[*col] = a[i][cols].clone();
        }
    }
    Some(x)
}
