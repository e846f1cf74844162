//! Quadratic forms as symmetric matrices, the generic member `M_Q` of a space of
//! quadrics, its minors, and the pure-power sieve over small submatrices.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, Rat, Ring, RingRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("not a quadratic form: {0}")]
    NotQuadric(String),
    #[error("the zero form has no rank")]
    ZeroForm,
    #[error("minor size {k} out of range for a {n}x{n} matrix")]
    MinorSize { k: usize, n: usize },
    #[error("quadrics are linearly dependent")]
    Dependent,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Index pairs `(i, j)`, `i <= j`, in lexicographic order: the coordinates of
/// the space of quadrics in `n` variables.
pub fn quadric_monomials(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i hold n + (n-1) + ... + (n-i+1) pairs
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Coefficient vector of a quadric against [`quadric_monomials`].
pub fn quadric_vector(q: &Poly) -> Result<Vec<Rat>, QuadError> {
    let n = q.ring().arity();
    let mut v = vec![Rat::zero(); n * (n + 1) / 2];
    for (m, c) in q.terms() {
        if m.degree() != 2 {
            return Err(QuadError::NotQuadric(q.to_string()));
        }
        let e = m.exponents();
        let idx: Vec<usize> = (0..n).filter(|&k| e[k] > 0).collect();
        let (i, j) = if idx.len() == 1 { (idx[0], idx[0]) } else { (idx[0], idx[1]) };
        v[pair_index(n, i, j)] = c.clone();
    }
    Ok(v)
}

/// Coefficient vector of the product of two linear forms given by their
/// coefficient vectors.
pub fn product_vector(l: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let n = l.len();
    let mut v = vec![Rat::zero(); n * (n + 1) / 2];
    for (i, a) in l.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in m.iter().enumerate() {
            if !b.is_zero() {
                v[pair_index(n, i, j)] += a * b;
            }
        }
    }
    v
}

pub fn quadric_from_vector(ring: &RingRef, v: &[Rat]) -> Poly {
    let n = ring.arity();
    let terms = quadric_monomials(n).into_iter().zip(v).map(|((i, j), c)| {
        let mut e = vec![0u32; n];
        e[i] += 1;
        e[j] += 1;
        (Monomial::from_exponents(e), c.clone())
    });
    Poly::from_terms(ring, terms)
}

/// A quadric together with its symmetric matrix, `q = z^T M z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    matrix: Matrix,
    poly: Poly,
}

impl QuadraticForm {
    pub fn from_poly(q: &Poly) -> Result<Self, QuadError> {
        let n = q.ring().arity();
        let mut m = linalg::zeros(n, n);
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        for (mono, c) in q.terms() {
            if mono.degree() != 2 {
                return Err(QuadError::NotQuadric(q.to_string()));
            }
            let e = mono.exponents();
            let idx: Vec<usize> = (0..n).filter(|&k| e[k] > 0).collect();
            if idx.len() == 1 {
                m[idx[0]][idx[0]] = c.clone();
            } else {
                let v = c * &half;
                m[idx[0]][idx[1]] = v.clone();
                m[idx[1]][idx[0]] = v;
            }
        }
        Ok(QuadraticForm { matrix: m, poly: q.clone() })
    }

    pub fn from_matrix(ring: &RingRef, m: Matrix) -> Result<Self, QuadError> {
        let n = ring.arity();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(QuadError::NotQuadric("matrix size does not match ring".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(QuadError::NotQuadric("matrix is not symmetric".into()));
                }
            }
        }
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = if i == j { m[i][i].clone() } else { &m[i][j] * Rat::from_integer(2.into()) };
                let mut e = vec![0u32; n];
                e[i] += 1;
                e[j] += 1;
                terms.push((Monomial::from_exponents(e), c));
            }
        }
        Ok(QuadraticForm {
            poly: Poly::from_terms(ring, terms),
            matrix: m,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> Result<usize, QuadError> {
        if self.poly.is_zero() {
            return Err(QuadError::ZeroForm);
        }
        Ok(linalg::bareiss_rank(&self.matrix))
    }
}

pub fn quad_rank(q: &Poly) -> Result<usize, QuadError> {
    QuadraticForm::from_poly(q)?.rank()
}

/// The symmetric matrix of `Σ a_k Q_k` with entries linear in `a_0 .. a_{t-1}`,
/// stored as dense coefficient vectors.
#[derive(Clone, Debug)]
pub struct GenericSymMatrix {
    size: usize,
    entries: Vec<Vec<Vec<Rat>>>,
    coeff_ring: RingRef,
}

impl GenericSymMatrix {
    pub fn from_basis(basis: &[Poly]) -> Result<Self, QuadError> {
        let Some(first) = basis.first() else {
            return Err(QuadError::NotQuadric("empty basis".into()));
        };
        let n = first.ring().arity();
        let t = basis.len();
        let mats: Vec<QuadraticForm> = basis.iter().map(QuadraticForm::from_poly).collect::<Result<_, _>>()?;
        let vecs: Vec<Vec<Rat>> = basis.iter().map(quadric_vector).collect::<Result<_, _>>()?;
        if linalg::rank(&vecs) != t {
            return Err(QuadError::Dependent);
        }
        let mut entries = vec![vec![vec![Rat::zero(); t]; n]; n];
        for (k, q) in mats.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    entries[i][j][k] = q.matrix[i][j].clone();
                }
            }
        }
        Ok(GenericSymMatrix {
            size: n,
            entries,
            coeff_ring: Ring::indexed("a", t, MonomialOrder::DegRevLex),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeff_ring.arity()
    }

    pub fn coeff_ring(&self) -> &RingRef {
        &self.coeff_ring
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Rat] {
        &self.entries[i][j]
    }

    pub fn entry_poly(&self, i: usize, j: usize) -> Poly {
        linear_poly(&self.coeff_ring, &self.entries[i][j])
    }

    /// The numeric matrix at `a`.
    pub fn specialize(&self, a: &[Rat]) -> Matrix {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().zip(a).fold(Rat::zero(), |acc, (x, y)| acc + x * y))
                    .collect()
            })
            .collect()
    }

    /// Determinant of the submatrix on `rows × cols` after reducing every entry
    /// modulo the linear forms in `reducer`.
    pub fn minor(&self, rows: &[usize], cols: &[usize], reducer: &LinearReducer) -> Poly {
        let sub: Vec<Vec<Poly>> = rows
            .iter()
            .map(|&i| {
                cols.iter()
                    .map(|&j| linear_poly(&self.coeff_ring, &reducer.reduce(&self.entries[i][j])))
                    .collect()
            })
            .collect();
        symbolic_det(&sub, &self.coeff_ring)
    }

    /// All `k × k` minors, symmetric duplicates (rows and columns swapped) removed.
    pub fn minors(&self, k: usize) -> Result<Vec<MinorEntry>, QuadError> {
        if k == 0 || k > self.size {
            return Err(QuadError::MinorSize { k, n: self.size });
        }
        let subsets = k_subsets(self.size, k);
        let none = LinearReducer::new(self.num_coeffs());
        let mut out = Vec::new();
        for (a, r) in subsets.iter().enumerate() {
            for c in &subsets[a..] {
                let det = self.minor(r, c, &none);
                if !det.is_zero() {
                    out.push(MinorEntry {
                        rows: r.clone(),
                        cols: c.clone(),
                        det,
                    });
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct MinorEntry {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: Poly,
}

pub fn linear_poly(ring: &RingRef, coeffs: &[Rat]) -> Poly {
    let n = ring.arity();
    Poly::from_terms(
        ring,
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(n, i), c.clone())),
    )
}

/// Coefficient vector of a linear form.
pub fn linear_coeffs(p: &Poly) -> Option<Vec<Rat>> {
    let n = p.ring().arity();
    let mut v = vec![Rat::zero(); n];
    for (m, c) in p.terms() {
        if m.degree() != 1 {
            return None;
        }
        let i = m.exponents().iter().position(|&e| e == 1)?;
        v[i] = c.clone();
    }
    Some(v)
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant of a small matrix of polynomials by Laplace expansion along rows,
/// memoising the minors of the trailing rows by column subset.
pub fn symbolic_det(m: &[Vec<Poly>], ring: &RingRef) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(ring);
    }
    // memo[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut memo: std::collections::HashMap<u32, Poly> = std::collections::HashMap::new();
    fn go(
        m: &[Vec<Poly>],
        mask: u32,
        memo: &mut std::collections::HashMap<u32, Poly>,
        ring: &RingRef,
    ) -> Poly {
        let n = m.len();
        let k = mask.count_ones() as usize;
        if k == 0 {
            return Poly::one(ring);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let row = n - k;
        let mut acc = Poly::zero(ring);
        let mut sign_pos = true;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let rest = go(m, mask & !(1 << j), memo, ring);
                if !rest.is_zero() {
                    let term = &m[row][j] * &rest;
                    acc = if sign_pos { &acc + &term } else { &acc - &term };
                }
            }
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    go(m, (1u32 << n) - 1, &mut memo, ring)
}

/// Reduces linear forms modulo a span of known linear forms by eliminating the
/// pivot variables of its reduced echelon basis.
#[derive(Clone, Debug)]
pub struct LinearReducer {
    t: usize,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl LinearReducer {
    pub fn new(t: usize) -> Self {
        LinearReducer {
            t,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_forms(t: usize, forms: &[Vec<Rat>]) -> Self {
        let (rows, pivots) = linalg::rref(forms);
        LinearReducer { t, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        out
    }

    pub fn is_independent(&self, v: &[Rat]) -> bool {
        !linalg::is_zero_vec(&self.reduce(v))
    }

    pub fn with(&self, v: &[Rat]) -> Self {
        let mut forms = self.rows.clone();
        forms.push(v.to_vec());
        Self::from_forms(self.t, &forms)
    }

    /// Substitution image of a polynomial in the coefficient variables: each
    /// pivot variable is replaced by minus the rest of its echelon row.
    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        if self.rows.is_empty() {
            return p.clone();
        }
        let ring = p.ring();
        let mut assignment = std::collections::BTreeMap::new();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let mut image = row.clone();
            image[piv] = Rat::zero();
            let image: Vec<Rat> = image.iter().map(|x| -x).collect();
            assignment.insert(piv, linear_poly(ring, &image));
        }
        p.substitute(&assignment, ring).expect("same ring")
    }
}

/// If `g = c · l^N` for a linear form `l`, returns `(l, N, c)` with `l`
/// normalised to have first nonzero coefficient one.
pub fn pure_power(g: &Poly) -> Option<(Vec<Rat>, u32, Rat)> {
    if g.is_zero() || !g.is_homogeneous() {
        return None;
    }
    let n = g.ring().arity();
    let degree = g.total_degree()?;
    if degree == 0 {
        return None;
    }
    // the lex-largest monomial of c l^N is x_i^N for the first variable i of l
    let lead = g
        .terms()
        .iter()
        .map(|(m, _)| m)
        .max_by(|a, b| MonomialOrder::Lex.cmp(a, b))?;
    let i = lead.exponents().iter().position(|&e| e > 0)?;
    if lead.exponents()[i] != degree {
        return None;
    }
    let c = g.coeff(lead);
    let nrat = Rat::from_integer(BigInt::from(degree));
    let mut l = vec![Rat::zero(); n];
    l[i] = Rat::one();
    for (j, lj) in l.iter_mut().enumerate().skip(i + 1) {
        let mut e = vec![0u32; n];
        e[i] = degree - 1;
        e[j] = 1;
        let cj = g.coeff(&Monomial::from_exponents(e));
        *lj = cj / (&c * &nrat);
    }
    let lp = linear_poly(g.ring(), &l);
    let candidate = lp.pow(degree).scale(&c);
    (candidate == *g).then_some((l, degree, c))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Largest number of distinct indices in `rows ∪ cols`.
    pub max_distinct: usize,
    /// Upper bound on submatrices examined in one pass.
    pub max_candidates: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_distinct: 6,
            max_candidates: 200_000,
        }
    }
}

/// A certified linear form: `det(M[rows, cols]) ≡ scalar · l^exponent` modulo the
/// forms found before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveHit {
    pub form: Vec<Rat>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub exponent: u32,
    pub scalar: Rat,
}

/// Submatrix index pairs in scan order: principal ones first, then by number of
/// distinct indices, then lexicographically.
pub fn sieve_candidates(n: usize, k: usize, cfg: &SieveConfig) -> Vec<(Vec<usize>, Vec<usize>)> {
    let subsets = k_subsets(n, k);
    let mut out: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for (a, r) in subsets.iter().enumerate() {
        for c in &subsets[a..] {
            let distinct: BTreeSet<usize> = r.iter().chain(c.iter()).copied().collect();
            if distinct.len() > cfg.max_distinct {
                continue;
            }
            out.push((distinct.len(), r.clone(), c.clone()));
        }
    }
    out.sort_by(|x, y| {
        let px = x.1 == x.2;
        let py = y.1 == y.2;
        py.cmp(&px).then(x.0.cmp(&y.0)).then_with(|| (&x.1, &x.2).cmp(&(&y.1, &y.2)))
    });
    out.truncate(cfg.max_candidates);
    out.into_iter().map(|(_, r, c)| (r, c)).collect()
}

/// Searches `(k+1) × (k+1)` submatrices whose determinant, modulo the forms
/// already known, is a scalar times a pure power of a linear form. Iterates until
/// no new independent form appears. Returned hits are in discovery order and do
/// not repeat the `known` forms; each hit's determinant is reduced modulo all
/// forms before it (the `known` ones first).
pub fn triangular_sieve(
    m: &GenericSymMatrix,
    k: usize,
    known: &[Vec<Rat>],
    cfg: &SieveConfig,
    exec: Exec,
) -> Result<Vec<SieveHit>, QuadError> {
    triangular_sieve_cancellable(m, k, known, cfg, exec, None)
}

/// [`triangular_sieve`] that returns the hits found so far once `cancel` is set.
pub fn triangular_sieve_cancellable(
    m: &GenericSymMatrix,
    k: usize,
    known: &[Vec<Rat>],
    cfg: &SieveConfig,
    exec: Exec,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<SieveHit>, QuadError> {
    let size = k + 1;
    if size > m.size() || k == 0 {
        return Err(QuadError::MinorSize { k: size, n: m.size() });
    }
    let cancelled = || cancel.is_some_and(|c| c.load(Ordering::Relaxed));
    let t = m.num_coeffs();
    let candidates = sieve_candidates(m.size(), size, cfg);
    let mut forms: Vec<Vec<Rat>> = known.to_vec();
    let mut hits: Vec<SieveHit> = Vec::new();
    loop {
        let reducer = LinearReducer::from_forms(t, &forms);
        if reducer.dim() == t || cancelled() {
            break;
        }
        let base = forms.len();
        let found: Vec<Option<(Vec<Rat>, u32, Rat)>> = exec.map(&candidates, |(r, c)| {
            if cancelled() {
                return None;
            }
            let det = m.minor(r, c, &reducer);
            pure_power(&det)
        });
        let mut current = reducer;
        let mut added = false;
        for ((r, c), f) in candidates.iter().zip(found) {
            let Some((mut l, mut n, mut s)) = f else { continue };
            if !current.is_independent(&l) {
                continue;
            }
            if forms.len() > base {
                // the trail reduces modulo every earlier form, so re-derive the power
                let det = m.minor(r, c, &current);
                let Some(again) = pure_power(&det) else { continue };
                (l, n, s) = again;
                if !current.is_independent(&l) {
                    continue;
                }
            }
            current = current.with(&l);
            forms.push(l.clone());
            hits.push(SieveHit {
                form: l,
                rows: r.clone(),
                cols: c.clone(),
                exponent: n,
                scalar: s,
            });
            added = true;
        }
        if !added {
            break;
        }
    }
    Ok(hits)
}

/// Replays one hit: recomputes the determinant reduced modulo `earlier` and
/// compares it with `scalar · form^exponent`. Index sets must be strictly
/// increasing with `rows <= cols` lexicographically.
pub fn replay_hit(m: &GenericSymMatrix, earlier: &[Vec<Rat>], hit: &SieveHit) -> bool {
    let t = m.num_coeffs();
    let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    if hit.form.len() != t
        || hit.rows.len() != hit.cols.len()
        || hit.rows.is_empty()
        || !increasing(&hit.rows)
        || !increasing(&hit.cols)
        || hit.rows > hit.cols
        || hit.exponent as usize != hit.rows.len()
        || hit.rows.iter().chain(&hit.cols).any(|&i| i >= m.size())
    {
        return false;
    }
    let reducer = LinearReducer::from_forms(t, earlier);
    if !reducer.is_independent(&hit.form) || hit.scalar.is_zero() {
        return false;
    }
    let det = m.minor(&hit.rows, &hit.cols, &reducer);
    let expected = linear_poly(m.coeff_ring(), &hit.form).pow(hit.exponent).scale(&hit.scalar);
    // both sides are compared after the same substitution
    reducer.reduce_poly(&expected) == det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn ring(n: usize) -> RingRef {
        Ring::indexed("x", n, MonomialOrder::DegRevLex)
    }

    fn p(s: &str, r: &RingRef) -> Poly {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn ranks_of_small_quadrics() {
        let r = ring(7);
        assert_eq!(quad_rank(&p("x0*x4 - x2^2", &r)).unwrap(), 3);
        assert_eq!(quad_rank(&p("x0*x4 - x1*x3", &r)).unwrap(), 4);
        assert_eq!(quad_rank(&p("(x0+x4)*(x2+x6) - (x1+x5)^2", &r)).unwrap(), 3);
        assert!(quad_rank(&Poly::zero(&r)).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let r = ring(4);
        let q = p("3*x0^2 - x1*x3 + 2/5*x2*x3 + x3^2", &r);
        let v = quadric_vector(&q).unwrap();
        assert_eq!(quadric_from_vector(&r, &v), q);
        let mono = quadric_monomials(4);
        for (k, &(i, j)) in mono.iter().enumerate() {
            assert_eq!(pair_index(4, i, j), k);
        }
    }

    #[test]
    fn matrix_round_trip() {
        let r = ring(3);
        let q = p("x0*x2 - x1^2", &r);
        let f = QuadraticForm::from_poly(&q).unwrap();
        let back = QuadraticForm::from_matrix(&r, f.matrix().clone()).unwrap();
        assert_eq!(back.poly(), &q);
    }

    #[test]
    fn singleton_generic_matrix() {
        let r = ring(3);
        let m = GenericSymMatrix::from_basis(&[p("x0*x2 - x1^2", &r)]).unwrap();
        let a = m.coeff_ring().clone();
        assert_eq!(m.entry_poly(1, 1), p("-a0", &a));
        assert_eq!(m.entry_poly(0, 2), p("1/2*a0", &a));
        let minors = m.minors(3).unwrap();
        assert_eq!(minors.len(), 1);
        assert_eq!(minors[0].det, p("1/4*a0^3", &a));
        // nonzero entries up to symmetry: (0,2) and (1,1)
        assert_eq!(m.minors(1).unwrap().len(), 2);
    }

    #[test]
    fn pure_power_detection() {
        let a = Ring::indexed("a", 3, MonomialOrder::DegRevLex);
        let l = p("2*a1 - a2", &a);
        let g = l.pow(4).scale(&int(-3));
        let (form, n, c) = pure_power(&g).unwrap();
        assert_eq!(n, 4);
        assert_eq!(linear_poly(&a, &form).pow(4).scale(&c), g);
        assert!(pure_power(&p("a0*a1", &a)).is_none());
        assert!(pure_power(&p("a0^2 + a1^2", &a)).is_none());
    }

    #[test]
    fn quintic_projection_sieve() {
        // the four quadrics of the projection of the quintic curve from e_2
        let r = ring(6);
        let basis: Vec<Poly> = ["x0*x4 - x1*x3", "x0*x5 - x1*x4", "x1*x5 - x3^2", "x3*x5 - x4^2"]
            .iter()
            .map(|s| p(s, &r).to_ring(&r).unwrap())
            .collect();
        let sub = Ring::new(["x0", "x1", "x3", "x4", "x5"], MonomialOrder::DegRevLex).unwrap();
        let basis: Vec<Poly> = basis.iter().map(|q| q.to_ring(&sub).unwrap()).collect();
        let m = GenericSymMatrix::from_basis(&basis).unwrap();
        let hits = triangular_sieve(&m, 3, &[], &SieveConfig::default(), Exec::Sequential).unwrap();
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].rows, vec![0, 1, 2, 3]);
        assert_eq!(hits[0].exponent, 4);
        let mut earlier = Vec::new();
        for h in &hits {
            assert!(replay_hit(&m, &earlier, h));
            earlier.push(h.form.clone());
        }
    }
}
