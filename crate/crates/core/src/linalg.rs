//! Dense exact linear algebra over the rationals.
//!
//! Matrices are plain `Vec<Vec<Rat>>` in row-major order. Everything here is
//! small (at most a few hundred columns), so clarity wins over cache tricks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rat;

pub type Matrix = Vec<Vec<Rat>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn transpose(m: &[Vec<Rat>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = Rat::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped) and
/// the pivot column of each remaining row.
pub fn rref(m: &[Vec<Rat>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column, each
/// with a 1 in its free column.
pub fn kernel(m: &[Vec<Rat>], cols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Some solution of `a x = b`, or `None` if inconsistent.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &[Vec<Rat>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "inverse of a non-square matrix");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Clears denominators row by row so that each row becomes an integer vector.
pub fn integer_rows(m: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination on the integer matrix obtained by
/// clearing denominators; all intermediate divisions are exact.
pub fn bareiss_rank(m: &[Vec<Rat>]) -> usize {
    let mut a = integer_rows(m);
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Incremental echelon basis of a subspace of `Q^n` that also remembers how each
/// echelon row is combined from the inserted vectors. This gives independence
/// tests and coordinates with respect to the inserted vectors in one place.
#[derive(Clone, Debug)]
pub struct SpanTracker {
    n: usize,
    /// (pivot column, echelon row normalised to 1 at the pivot, combination of inserted vectors)
    rows: Vec<(usize, Vec<Rat>, Vec<Rat>)>,
    inserted: usize,
}

impl SpanTracker {
    pub fn new(n: usize) -> Self {
        SpanTracker {
            n,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; returns the residual and the
    /// combination of inserted vectors that was subtracted.
    fn reduce_with(&self, v: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        assert_eq!(v.len(), self.n);
        let mut res = v.to_vec();
        let mut comb = vec![Rat::zero(); self.inserted];
        for (p, row, c) in &self.rows {
            if res[*p].is_zero() {
                continue;
            }
            let f = res[*p].clone();
            for (x, y) in res.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in comb.iter_mut().zip(c) {
                if !y.is_zero() {
                    *x += &f * y;
                }
            }
        }
        (res, comb)
    }

    pub fn residual(&self, v: &[Rat]) -> Vec<Rat> {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero_vec(&self.residual(v))
    }

    /// Inserts `v` if it is independent of the current span. Returns whether it was.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let (res, comb) = self.reduce_with(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = res[p].recip();
        let row: Vec<Rat> = res.iter().map(|x| x * &inv).collect();
        // the new row equals (v - comb·inserted) / res[p]
        let mut c: Vec<Rat> = comb.iter().map(|x| -x * &inv).collect();
        c.push(inv);
        for (_, _, old) in self.rows.iter_mut() {
            old.push(Rat::zero());
        }
        // keep the basis fully reduced so pivots never reappear in other rows
        for (_, old_row, old_c) in self.rows.iter_mut() {
            if !old_row[p].is_zero() {
                let f = old_row[p].clone();
                for (x, y) in old_row.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                for (x, y) in old_c.iter_mut().zip(&c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, row, c));
        self.inserted += 1;
        true
    }

    /// Coordinates of `v` with respect to the inserted (independent) vectors, if `v`
    /// lies in their span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let (res, comb) = self.reduce_with(v);
        if is_zero_vec(&res) {
            Some(comb)
        } else {
            None
        }
    }
}

/// Makes the first nonzero entry equal to one.
pub fn normalize_first(v: &[Rat]) -> Vec<Rat> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(f) => {
            let inv = f.recip();
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Makes the last nonzero entry equal to one.
pub fn normalize_last(v: &[Rat]) -> Vec<Rat> {
    match v.iter().rev().find(|x| !x.is_zero()) {
        Some(f) => {
            let inv = f.recip();
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

pub fn max_abs_height(v: &[Rat]) -> BigInt {
    v.iter()
        .map(|x| x.numer().abs().max(x.denom().clone()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&mat_vec(&a, v)));
        }
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(det(&a), int(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solve_inconsistent() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(solve(&a, &[int(1), int(2)]).is_none());
        assert_eq!(solve(&a, &[int(3), int(3)]).unwrap(), vec![int(3), int(0)]);
    }

    #[test]
    fn tracker_coordinates() {
        let mut t = SpanTracker::new(3);
        assert!(t.insert(&[int(1), int(1), int(0)]));
        assert!(t.insert(&[int(0), int(1), int(1)]));
        assert!(!t.insert(&[int(1), int(2), int(1)]));
        assert_eq!(t.coordinates(&[int(2), int(5), int(3)]), Some(vec![int(2), int(3)]));
        assert_eq!(t.coordinates(&[int(0), int(0), int(1)]), None);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
                .prop_map(|rows| rows.into_iter().map(|row| row.into_iter().map(int).collect()).collect())
        })
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rref(a in small_matrix()) {
            prop_assert_eq!(bareiss_rank(&a), rank(&a));
        }

        #[test]
        fn tracker_coordinates_reconstruct(a in small_matrix(), w in prop::collection::vec(-3i64..4, 6)) {
            let n = a[0].len();
            let mut t = SpanTracker::new(n);
            let mut kept = Vec::new();
            for row in &a {
                if t.insert(row) { kept.push(row.clone()); }
            }
            prop_assert_eq!(kept.len(), rank(&a));
            let mut v = vec![Rat::zero(); n];
            for (row, c) in kept.iter().zip(&w) {
                for (x, y) in v.iter_mut().zip(row) { *x += y * int(*c); }
            }
            let coords = t.coordinates(&v).unwrap();
            let mut back = vec![Rat::zero(); n];
            for (row, c) in kept.iter().zip(&coords) {
                for (x, y) in back.iter_mut().zip(row) { *x += y * c; }
            }
            prop_assert_eq!(back, v);
        }
    }
}
