//! Rank-three quadrics `f(s²h) f(t²h) - f(sth)²` through an embedded curve, the
//! pencil minors of rank at most four, closed-form identities among binomials of
//! monomial projections, and a budgeted harvest of low-rank quadrics.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::binform::BinaryForm;
use crate::curvegen::{LinearSystem, Target};
use crate::exec::Exec;
use crate::linalg::{self, Matrix, SpanTracker};
use crate::poly::{int, Poly, Rat, RingRef};
use crate::quadrics::{product_vector, quad_rank, quadric_from_vector, quadric_vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QmapError {
    #[error("invalid splitting d = 2a + b: {0}")]
    Decomposition(String),
    #[error("target has no embedding to map sections through")]
    NoSystem,
    #[error("degenerate triple: {0}")]
    Degenerate(String),
    #[error("the product {0} is not a section of the embedding")]
    OutsideSystem(String),
    #[error("resulting quadric is not in the ideal")]
    NotInIdeal,
    #[error("index constraints violated: {0}")]
    Indices(String),
}

/// A splitting `d = 2a + b` of the degree of the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub d: usize,
    pub a: usize,
    pub b: usize,
}

impl Decomposition {
    pub fn new(d: usize, a: usize) -> Result<Self, QmapError> {
        if a == 0 || 2 * a > d {
            return Err(QmapError::Decomposition(format!("a={a}, d={d}")));
        }
        Ok(Decomposition { d, a, b: d - 2 * a })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTriple {
    pub s: BinaryForm,
    pub t: BinaryForm,
    pub h: BinaryForm,
}

/// Linear forms (coefficient vectors) exhibiting a low-rank quadric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `q = l0 l2 - l1²`
    Square([Vec<Rat>; 3]),
    /// `q = l0 l1 - l2 l3`
    Pencil([Vec<Rat>; 4]),
    /// One of the rational parts `q0`, `q1` of `L0 L2 - L1² = q0 + √δ q1`, where
    /// `L_i = A_i + √δ B_i` and `parts[i] = [A_i, B_i]`. Over `Q(√δ)` the conjugate
    /// quadrics `q0 ± √δ q1` have rank at most three and span `q0, q1`.
    Conjugate {
        delta: Rat,
        parts: [[Vec<Rat>; 2]; 3],
        part: usize,
    },
}

impl Witness {
    pub fn vector(&self) -> Vec<Rat> {
        let sub = |p: Vec<Rat>, m: Vec<Rat>| p.iter().zip(&m).map(|(x, y)| x - y).collect::<Vec<Rat>>();
        match self {
            Witness::Square([a, b, c]) => sub(product_vector(a, c), product_vector(b, b)),
            Witness::Pencil([a, b, c, e]) => sub(product_vector(a, b), product_vector(c, e)),
            Witness::Conjugate { delta, parts, part } => {
                let [[a0, b0], [a1, b1], [a2, b2]] = parts;
                if *part == 0 {
                    let p: Vec<Rat> = product_vector(a0, a2)
                        .iter()
                        .zip(product_vector(b0, b2))
                        .map(|(x, y)| x + delta * y)
                        .collect();
                    let m: Vec<Rat> = product_vector(a1, a1)
                        .iter()
                        .zip(product_vector(b1, b1))
                        .map(|(x, y)| x + delta * y)
                        .collect();
                    sub(p, m)
                } else {
                    let p: Vec<Rat> = product_vector(a0, b2)
                        .iter()
                        .zip(product_vector(b0, a2))
                        .map(|(x, y)| x + y)
                        .collect();
                    let m: Vec<Rat> = product_vector(a1, b1).iter().map(|x| x * int(2)).collect();
                    sub(p, m)
                }
            }
        }
    }

    pub fn rank_bound(&self) -> usize {
        match self {
            Witness::Square(_) | Witness::Conjugate { .. } => 3,
            Witness::Pencil(_) => 4,
        }
    }

    /// True when the quadric itself (not only its conjugates) is exhibited.
    pub fn is_rational(&self) -> bool {
        !matches!(self, Witness::Conjugate { .. })
    }
}

/// Output of [`qab`].
#[derive(Clone, Debug)]
pub struct QOutput {
    pub quadric: Poly,
    pub witness: Witness,
    /// Coordinates against the target's quadric basis.
    pub coords: Vec<Rat>,
}

fn system_of(target: &Target) -> Result<&LinearSystem, QmapError> {
    target.system.as_ref().ok_or(QmapError::NoSystem)
}

fn square_forms(sys: &LinearSystem, s: &BinaryForm, t: &BinaryForm, h: &BinaryForm) -> Option<[Vec<Rat>; 3]> {
    let ss = s.mul(s).mul(h);
    let st = s.mul(t).mul(h);
    let tt = t.mul(t).mul(h);
    Some([sys.coordinates(&ss)?, sys.coordinates(&st)?, sys.coordinates(&tt)?])
}

fn independent(forms: &[&BinaryForm]) -> bool {
    let rows: Matrix = forms.iter().map(|f| f.coeffs().to_vec()).collect();
    linalg::rank(&rows) == forms.len()
}

/// `f(s²h) f(t²h) - f(sth)²` for the target's embedding `f`.
pub fn qab(dec: &Decomposition, tr: &QTriple, target: &Target) -> Result<QOutput, QmapError> {
    let sys = system_of(target)?;
    if sys.degree() != dec.d || tr.s.degree() != dec.a || tr.t.degree() != dec.a || tr.h.degree() != dec.b {
        return Err(QmapError::Decomposition("degrees of s, t, h do not match".into()));
    }
    if tr.h.is_zero() {
        return Err(QmapError::Degenerate("h = 0".into()));
    }
    if !independent(&[&tr.s, &tr.t]) {
        return Err(QmapError::Degenerate("s and t are proportional".into()));
    }
    let products = [
        ("s^2 h", tr.s.mul(&tr.s).mul(&tr.h)),
        ("s t h", tr.s.mul(&tr.t).mul(&tr.h)),
        ("t^2 h", tr.t.mul(&tr.t).mul(&tr.h)),
    ];
    let mut ls = Vec::new();
    for (name, g) in &products {
        ls.push(sys.coordinates(g).ok_or_else(|| QmapError::OutsideSystem(name.to_string()))?);
    }
    let witness = Witness::Square([ls[0].clone(), ls[1].clone(), ls[2].clone()]);
    let v = witness.vector();
    let quadric = quadric_from_vector(&target.ring, &v);
    let coords = target.coordinates(&quadric).ok_or(QmapError::NotInIdeal)?;
    Ok(QOutput {
        quadric,
        witness,
        coords,
    })
}

/// One quadric found by a search, with how it was found.
#[derive(Clone, Debug)]
pub struct HarvestItem {
    pub quadric: Poly,
    pub witness: Option<Witness>,
    pub origin: String,
}

#[derive(Clone, Debug)]
pub struct Harvest {
    /// Linearly independent members of `I₂` of rank at most `k`.
    pub items: Vec<HarvestItem>,
    pub k: usize,
    /// Candidates examined.
    pub samples: usize,
    pub goal: usize,
}

impl Harvest {
    pub fn span(&self) -> usize {
        self.items.len()
    }

    pub fn complete(&self) -> bool {
        self.items.len() == self.goal
    }
}

#[derive(Clone, Debug)]
pub struct HarvestConfig {
    pub max_samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for HarvestConfig {
    fn default() -> Self {
        HarvestConfig {
            max_samples: 5000,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
enum Job {
    /// Pencils `⟨s, γ0 u + γ1 w⟩`, or the single pencil `⟨s, u⟩` without `w`.
    Square {
        s: BinaryForm,
        u: BinaryForm,
        w: Option<BinaryForm>,
    },
    /// Minors of `[f(b t_i) f(b t_j); f(c t_i) f(c t_j)]` for `t` with `bt, ct ∈ V`.
    Minors { b: BinaryForm, c: BinaryForm },
}

#[derive(Clone, Debug)]
struct Candidate {
    vector: Vec<Rat>,
    witness: Witness,
    origin: String,
}

/// A parameter value `(γ0, γ1)`, or the two conjugate roots of an irreducible
/// binary quadratic `a γ0² + b γ0γ1 + c γ1²`.
#[derive(Clone, Debug)]
enum Gamma {
    Rational(Rat, Rat),
    Quadratic(Rat, Rat, Rat),
}

fn sweep() -> Vec<Gamma> {
    [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1), (1, 3), (3, 1)]
        .iter()
        .map(|&(a, b)| Gamma::Rational(int(a), int(b)))
        .collect()
}

/// `φ(g · S^{b-j} T^j)` for `j = 0..=b`.
fn hankel_row(phi: &[Rat], g: &BinaryForm, b: usize) -> Vec<Rat> {
    (0..=b)
        .map(|j| {
            let mut acc = Rat::zero();
            for (m, c) in g.coeffs().iter().enumerate() {
                if !c.is_zero() && !phi[m + j].is_zero() {
                    acc += c * &phi[m + j];
                }
            }
            acc
        })
        .collect()
}

fn form_det(m: &[Vec<BinaryForm>]) -> BinaryForm {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total: Option<BinaryForm> = None;
    for col in 0..n {
        let minor: Vec<Vec<BinaryForm>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let mut term = m[0][col].mul(&form_det(&minor));
        if col % 2 == 1 {
            term = term.scale(&int(-1));
        }
        total = Some(match total {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    total.expect("nonempty")
}

/// Parameter values `(γ0, γ1)` for which the pencil `⟨s, γ0 u + γ1 w⟩` admits a
/// nonzero `h`. Returns the sweep when every value works.
fn admissible_gammas(phis: &Matrix, s: &BinaryForm, u: &BinaryForm, w: &BinaryForm, b: usize) -> Vec<Gamma> {
    let r = phis.len();
    if r == 0 || b + 1 > 3 * r {
        return sweep();
    }
    let lin = |x: &[Rat], y: &[Rat]| -> Vec<BinaryForm> {
        x.iter().zip(y).map(|(p, q)| BinaryForm::new(vec![p.clone(), q.clone()])).collect()
    };
    let (ss, su, sw, uu, uw, ww) = (s.mul(s), s.mul(u), s.mul(w), u.mul(u), u.mul(w), w.mul(w));
    let two = int(2);
    let mut rows: Vec<Vec<BinaryForm>> = Vec::new();
    for phi in phis {
        rows.push(hankel_row(phi, &ss, b).into_iter().map(|c| BinaryForm::new(vec![c])).collect());
        rows.push(lin(&hankel_row(phi, &su, b), &hankel_row(phi, &sw, b)));
        let (a0, a1, a2) = (hankel_row(phi, &uu, b), hankel_row(phi, &uw, b), hankel_row(phi, &ww, b));
        rows.push(
            (0..=b)
                .map(|j| BinaryForm::new(vec![a0[j].clone(), &two * &a1[j], a2[j].clone()]))
                .collect(),
        );
    }
    let mut g: Option<BinaryForm> = None;
    for subset in crate::quadrics::k_subsets(rows.len(), b + 1) {
        let sub: Vec<Vec<BinaryForm>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let det = form_det(&sub);
        if det.is_zero() {
            continue;
        }
        g = Some(match g {
            None => det,
            Some(acc) => acc.gcd(&det),
        });
    }
    let Some(g) = g else {
        return sweep();
    };
    let mut out = Vec::new();
    let (factors, rest) = g.linear_factorization();
    for (factor, _) in factors {
        // factor = p x + q y vanishes at (q, -p)
        let p = factor.coeff(0).clone();
        let q = factor.coeff(1).clone();
        out.push(Gamma::Rational(q, -p));
    }
    if rest.degree() == 2 && !rest.coeff(0).is_zero() {
        let (qa, qb, qc) = (rest.coeff(0).clone(), rest.coeff(1).clone(), rest.coeff(2).clone());
        let disc = &qb * &qb - int(4) * &qa * &qc;
        match rational_sqrt(&disc) {
            // the root search gave up on large coefficients; the roots are rational
            Some(r) => {
                out.push(Gamma::Rational(-&qb + &r, int(2) * &qa));
                if !r.is_zero() {
                    out.push(Gamma::Rational(-&qb - &r, int(2) * &qa));
                }
            }
            None => out.push(Gamma::Quadratic(qa, qb, qc)),
        }
    }
    out
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rat::new(root(x.numer())?, root(x.denom())?))
}

/// Elements `x0 + √δ x1` of `Q(√δ)[S, T]`.
type Ext = (BinaryForm, BinaryForm);

fn ext_mul(x: &Ext, y: &Ext, delta: &Rat) -> Ext {
    (
        x.0.mul(&y.0).add(&x.1.mul(&y.1).scale(delta)),
        x.0.mul(&y.1).add(&x.1.mul(&y.0)),
    )
}

/// Rank-three candidates from the conjugate pencils `⟨s, t0 ± √δ t1⟩`.
fn conjugate_candidates(sys: &LinearSystem, s: &BinaryForm, t: &Ext, delta: &Rat, b: usize) -> Vec<Candidate> {
    if rational_sqrt(delta).is_some() {
        return Vec::new();
    }
    let phis = sys.constraints();
    let zero_a = BinaryForm::zero(s.degree());
    let se: Ext = (s.clone(), zero_a);
    let st = ext_mul(&se, t, delta);
    let tt = ext_mul(t, t, delta);
    let ss = s.mul(s);
    // (M0 + √δ M1)(h0 + √δ h1) = 0 as a rational system in (h0, h1)
    let mut rows: Matrix = Vec::new();
    for phi in phis {
        let zero_row = vec![Rat::zero(); b + 1];
        let blocks = [
            (hankel_row(phi, &ss, b), zero_row.clone()),
            (hankel_row(phi, &st.0, b), hankel_row(phi, &st.1, b)),
            (hankel_row(phi, &tt.0, b), hankel_row(phi, &tt.1, b)),
        ];
        for (m0, m1) in blocks {
            let mut r1 = m0.clone();
            r1.extend(m1.iter().map(|x| x * delta));
            let mut r2 = m1;
            r2.extend(m0);
            rows.push(r1);
            rows.push(r2);
        }
    }
    let ker = linalg::kernel(&rows, 2 * (b + 1));
    let mut out = Vec::new();
    for hv in polarization_samples(&ker) {
        let h: Ext = (BinaryForm::new(hv[..=b].to_vec()), BinaryForm::new(hv[b + 1..].to_vec()));
        let prods = [ext_mul(&(ss.clone(), BinaryForm::zero(ss.degree())), &h, delta), ext_mul(&st, &h, delta), ext_mul(&tt, &h, delta)];
        let mut parts: Vec<[Vec<Rat>; 2]> = Vec::new();
        for (p0, p1) in &prods {
            let (Some(c0), Some(c1)) = (sys.coordinates(p0), sys.coordinates(p1)) else {
                return out;
            };
            parts.push([c0, c1]);
        }
        let parts: [[Vec<Rat>; 2]; 3] = [parts[0].clone(), parts[1].clone(), parts[2].clone()];
        for part in 0..2 {
            let witness = Witness::Conjugate {
                delta: delta.clone(),
                parts: parts.clone(),
                part,
            };
            let vector = witness.vector();
            if linalg::is_zero_vec(&vector) {
                continue;
            }
            out.push(Candidate {
                vector,
                witness,
                origin: format!("conjugate s={s} t={} + sqrt({delta})*({}) h={} + sqrt({delta})*({})", t.0, t.1, h.0, h.1),
            });
        }
    }
    out
}

/// Kernel of the linear conditions on `h` for the pencil `⟨s, t⟩`.
fn h_space(phis: &Matrix, s: &BinaryForm, t: &BinaryForm, b: usize) -> Matrix {
    if phis.is_empty() {
        return linalg::identity(b + 1);
    }
    let mut rows = Vec::new();
    for phi in phis {
        rows.push(hankel_row(phi, &s.mul(s), b));
        rows.push(hankel_row(phi, &s.mul(t), b));
        rows.push(hankel_row(phi, &t.mul(t), b));
    }
    linalg::kernel(&rows, b + 1)
}

/// Kernel elements and their pairwise sums: enough to span the image of a
/// quadratic map on the kernel.
fn polarization_samples(kernel: &Matrix) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = kernel.clone();
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            out.push(kernel[i].iter().zip(&kernel[j]).map(|(x, y)| x + y).collect());
        }
    }
    out
}

fn run_job(job: &Job, sys: &LinearSystem) -> Vec<Candidate> {
    let d = sys.degree();
    let phis = sys.constraints();
    let mut out = Vec::new();
    match job {
        Job::Square { s, u, w } => {
            let a = s.degree();
            let b = d - 2 * a;
            let gammas = match w {
                None => vec![Gamma::Rational(Rat::one(), Rat::zero())],
                Some(w) => admissible_gammas(phis, s, u, w, b),
            };
            let mut ts: Vec<BinaryForm> = Vec::new();
            for g in gammas {
                match (g, w) {
                    (Gamma::Rational(g0, g1), Some(w)) => ts.push(u.scale(&g0).add(&w.scale(&g1))),
                    (Gamma::Rational(..), None) => ts.push(u.clone()),
                    (Gamma::Quadratic(qa, qb, qc), Some(w)) => {
                        // roots γ0/γ1 = (-qb ± √δ) / (2 qa)
                        let delta = &qb * &qb - int(4) * &qa * &qc;
                        let two_a = int(2) * &qa;
                        let t0 = u.scale(&(-&qb / &two_a)).add(w);
                        let t1 = u.scale(&(Rat::one() / &two_a));
                        out.extend(conjugate_candidates(sys, s, &(t0, t1), &delta, b));
                    }
                    (Gamma::Quadratic(..), None) => {}
                }
            }
            for t in ts {
                if !independent(&[s, &t]) {
                    continue;
                }
                for hv in polarization_samples(&h_space(phis, s, &t, b)) {
                    let h = BinaryForm::new(hv);
                    let Some(ls) = square_forms(sys, s, &t, &h) else { continue };
                    let witness = Witness::Square(ls);
                    let vector = witness.vector();
                    if linalg::is_zero_vec(&vector) {
                        continue;
                    }
                    out.push(Candidate {
                        vector,
                        witness,
                        origin: format!("square s={s} t={t} h={h}"),
                    });
                }
            }
        }
        Job::Minors { b: bf, c: cf } => {
            let e = bf.degree();
            let m = d - e;
            let mut rows = Vec::new();
            for phi in phis {
                rows.push(hankel_row(phi, bf, m));
                rows.push(hankel_row(phi, cf, m));
            }
            let ker = if rows.is_empty() { linalg::identity(m + 1) } else { linalg::kernel(&rows, m + 1) };
            let ts: Vec<BinaryForm> = ker.into_iter().map(BinaryForm::new).collect();
            let images: Vec<Option<(Vec<Rat>, Vec<Rat>)>> = ts
                .iter()
                .map(|t| Some((sys.coordinates(&bf.mul(t))?, sys.coordinates(&cf.mul(t))?)))
                .collect();
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    let (Some((bi, ci)), Some((bj, cj))) = (&images[i], &images[j]) else { continue };
                    let witness = Witness::Pencil([bi.clone(), cj.clone(), bj.clone(), ci.clone()]);
                    let vector = witness.vector();
                    if linalg::is_zero_vec(&vector) {
                        continue;
                    }
                    out.push(Candidate {
                        vector,
                        witness,
                        origin: format!("minor b={bf} c={cf} t={} t'={}", ts[i], ts[j]),
                    });
                }
            }
        }
    }
    out
}

/// Small forms of degree `a`: monomials, `S^a ± T^a`, and sums and differences
/// of adjacent monomials.
pub fn seed_forms(a: usize) -> Vec<BinaryForm> {
    let mut out: Vec<BinaryForm> = (0..=a).map(|i| BinaryForm::monomial(a, i)).collect();
    let mut push = |f: BinaryForm| {
        if !out.contains(&f) {
            out.push(f);
        }
    };
    let one = Rat::one();
    let m = |i: usize| BinaryForm::monomial(a, i);
    for sign in [one.clone(), -one.clone()] {
        push(m(0).add(&m(a).scale(&sign)));
    }
    for i in 0..a {
        for sign in [one.clone(), -one.clone()] {
            push(m(i).add(&m(i + 1).scale(&sign)));
        }
    }
    out
}

/// Products of `a` rational linear factors of the apolar generators, which give
/// pencils whose products with `h` fall into the ideal of the lower generator.
fn factor_seeds(target: &Target, a: usize) -> Vec<BinaryForm> {
    let Some(pair) = &target.pair else { return Vec::new() };
    let mut lin: Vec<BinaryForm> = vec![BinaryForm::monomial(1, 0), BinaryForm::monomial(1, 1)];
    for g in [&pair.g1, &pair.g2] {
        for (l, _) in g.rational_linear_factors() {
            let l = l.monic();
            if !lin.iter().any(|m| !independent(&[m, &l])) {
                lin.push(l);
            }
        }
    }
    let mut out: Vec<BinaryForm> = Vec::new();
    let mut stack: Vec<(usize, BinaryForm)> = vec![(0, BinaryForm::monomial(0, 0))];
    while let Some((start, f)) = stack.pop() {
        if f.degree() == a {
            if !out.contains(&f) {
                out.push(f);
            }
            continue;
        }
        for (i, l) in lin.iter().enumerate().skip(start) {
            stack.push((i, f.mul(l)));
        }
    }
    out.sort_by_key(|f| f.to_string());
    out
}

fn square_jobs(d: usize, target: &Target) -> Vec<Job> {
    let mut jobs = Vec::new();
    // single monomial pencils
    for a in 1..=d / 2 {
        for i in 0..=a {
            for j in i + 1..=a {
                jobs.push(Job::Square {
                    s: BinaryForm::monomial(a, i),
                    u: BinaryForm::monomial(a, j),
                    w: None,
                });
            }
        }
    }
    // pencils through products of linear factors
    for a in 2..=d / 2 {
        let monos: Vec<BinaryForm> = (0..=a).map(|i| BinaryForm::monomial(a, i)).collect();
        let basic = seed_forms(a);
        for s in factor_seeds(target, a) {
            if basic.contains(&s) {
                continue;
            }
            for x in 0..monos.len() {
                for y in x + 1..monos.len() {
                    if independent(&[&s, &monos[x], &monos[y]]) {
                        jobs.push(Job::Square {
                            s: s.clone(),
                            u: monos[x].clone(),
                            w: Some(monos[y].clone()),
                        });
                    }
                }
            }
        }
    }
    // lines of pencils through a seed
    for tier in 0..2 {
        for a in 2..=d / 2 {
            let seeds = seed_forms(a);
            let pool = if tier == 0 { &seeds[..=a] } else { &seeds[..] };
            for (si, s) in seeds.iter().enumerate() {
                if tier == 0 && si > a {
                    continue;
                }
                for x in 0..pool.len() {
                    for y in x + 1..pool.len() {
                        if tier == 1 && si <= a && x <= a && y <= a {
                            continue;
                        }
                        if x == si || y == si || !independent(&[s, &pool[x], &pool[y]]) {
                            continue;
                        }
                        jobs.push(Job::Square {
                            s: s.clone(),
                            u: pool[x].clone(),
                            w: Some(pool[y].clone()),
                        });
                    }
                }
            }
        }
    }
    jobs
}

fn minor_jobs(d: usize) -> Vec<Job> {
    let mut jobs = Vec::new();
    for e in 1..=d / 2 {
        let seeds = seed_forms(e);
        for x in 0..seeds.len() {
            for y in x + 1..seeds.len() {
                if independent(&[&seeds[x], &seeds[y]]) {
                    jobs.push(Job::Minors {
                        b: seeds[x].clone(),
                        c: seeds[y].clone(),
                    });
                }
            }
        }
    }
    jobs
}

fn random_form(rng: &mut ChaCha8Rng, a: usize) -> BinaryForm {
    loop {
        let f = BinaryForm::new((0..=a).map(|_| int(rng.gen_range(-3..=3))).collect());
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_job(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Job {
    let a = rng.gen_range(1..=d / 2);
    if k >= 4 && rng.gen_bool(0.5) {
        return Job::Minors {
            b: random_form(rng, a),
            c: random_form(rng, a),
        };
    }
    let s = random_form(rng, a);
    let u = random_form(rng, a);
    let w = (a >= 2).then(|| random_form(rng, a));
    Job::Square { s, u, w }
}

struct Collector<'a> {
    target: &'a Target,
    tracker: SpanTracker,
    items: Vec<HarvestItem>,
    goal: usize,
}

impl Collector<'_> {
    fn offer(&mut self, vector: &[Rat], witness: Option<Witness>, origin: String) -> bool {
        if self.items.len() >= self.goal || !self.tracker.insert(vector) {
            return false;
        }
        let quadric = quadric_from_vector(&self.target.ring, vector);
        debug_assert!(self.target.contains(&quadric));
        self.items.push(HarvestItem {
            quadric,
            witness,
            origin,
        });
        true
    }

    fn full(&self) -> bool {
        self.items.len() >= self.goal
    }
}

/// Collects independent quadrics of rank at most `k` (3 or 4) in the target's
/// `I₂`: low-rank basis members, then rank-four pencil minors when `k >= 4`,
/// then rank-three quadrics from pencils of seed forms, then random pencils,
/// until the span is all of `I₂` or the sample budget runs out.
pub fn rank3_harvest(target: &Target, k: usize, cfg: &HarvestConfig) -> Harvest {
    rank3_harvest_cancellable(target, k, cfg, None)
}

/// [`rank3_harvest`] that stops early once `cancel` is set.
pub fn rank3_harvest_cancellable(target: &Target, k: usize, cfg: &HarvestConfig, cancel: Option<&AtomicBool>) -> Harvest {
    let cancelled = || cancel.is_some_and(|c| c.load(Ordering::Relaxed));
    let goal = target.dim_i2();
    let n = target.ring.arity();
    let mut col = Collector {
        target,
        tracker: SpanTracker::new(n * (n + 1) / 2),
        items: Vec::new(),
        goal,
    };
    let mut samples = 0usize;
    for q in &target.basis {
        if col.full() {
            break;
        }
        samples += 1;
        if quad_rank(q).map(|r| r <= k).unwrap_or(false) {
            let v = quadric_vector(q).expect("quadric");
            col.offer(&v, None, "basis".into());
        }
    }
    let Some(sys) = target.system.as_ref() else {
        return Harvest {
            items: col.items,
            k,
            samples,
            goal,
        };
    };
    let d = sys.degree();
    let mut fixed = Vec::new();
    if k >= 4 {
        fixed.extend(minor_jobs(d));
    }
    fixed.extend(square_jobs(d, target));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let batch = 32;
    let mut next_fixed = 0;
    while !col.full() && samples < cfg.max_samples && !cancelled() {
        let jobs: Vec<Job> = if next_fixed < fixed.len() {
            let end = (next_fixed + batch).min(fixed.len());
            let j = fixed[next_fixed..end].to_vec();
            next_fixed = end;
            j
        } else {
            (0..batch).map(|_| random_job(&mut rng, d, k)).collect()
        };
        let results = cfg.exec.map(&jobs, |job| run_job(job, sys));
        for cands in results {
            samples += cands.len().max(1);
            for c in cands {
                if col.full() {
                    break;
                }
                if target.contains(&quadric_from_vector(&target.ring, &c.vector)) {
                    col.offer(&c.vector, Some(c.witness), c.origin);
                }
            }
            if col.full() || samples >= cfg.max_samples {
                break;
            }
        }
    }
    Harvest {
        items: col.items,
        k,
        samples,
        goal,
    }
}

/// Independent rank-three quadrics from the pencils `⟨s, γ0 u + γ1 w⟩` over the
/// parameter sweep, with `h` ranging over the admissible space.
pub fn pencil_family(target: &Target, s: &BinaryForm, u: &BinaryForm, w: &BinaryForm) -> Result<Vec<HarvestItem>, QmapError> {
    let sys = system_of(target)?;
    if !independent(&[s, u, w]) {
        return Err(QmapError::Degenerate("s, u, w must be independent".into()));
    }
    let n = target.ring.arity();
    let mut col = Collector {
        target,
        tracker: SpanTracker::new(n * (n + 1) / 2),
        items: Vec::new(),
        goal: target.dim_i2(),
    };
    let job = Job::Square {
        s: s.clone(),
        u: u.clone(),
        w: Some(w.clone()),
    };
    for c in run_job(&job, sys) {
        col.offer(&c.vector, Some(c.witness), c.origin);
    }
    Ok(col.items)
}

/// Which closed-form identity produced a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityFamily {
    /// `x_i x_j + x_{i+k} x_{j-k} - 2 x_m x_n` with `m, n = (i+j∓k)/2`.
    Balanced { i: usize, j: usize, k: usize },
    /// Index-five binomials for `c = i + 3`.
    ShiftThree { i: usize },
    /// Index-five binomials for `c = i + 1`.
    ShiftOne { i: usize },
}

/// A quadric written as an explicit sum of rank-three members of the ideal.
#[derive(Clone, Debug)]
pub struct IdentityGen {
    pub family: IdentityFamily,
    pub target: Poly,
    pub terms: Vec<(Rat, Poly)>,
}

impl IdentityGen {
    /// The terms sum to the target, each has rank at most three, and each lies
    /// in the quadric span of `ideal`.
    pub fn verify(&self, ideal: &Target) -> bool {
        let mut sum = Poly::zero(self.target.ring());
        for (c, q) in &self.terms {
            if !quad_rank(q).map(|r| r <= 3).unwrap_or(false) || !ideal.contains(q) {
                return false;
            }
            sum = &sum + &q.scale(c);
        }
        sum == self.target
    }
}

fn x(ring: &RingRef, c: usize, i: usize) -> Poly {
    Poly::var(ring, if i < c { i } else { i - 1 })
}

/// Writes `goal` as a combination of `parts`, dropping zero coefficients.
fn combine(goal: &Poly, parts: &[Poly]) -> Option<Vec<(Rat, Poly)>> {
    let cols: Vec<Vec<Rat>> = parts.iter().map(|p| quadric_vector(p).expect("quadric")).collect();
    let a = linalg::transpose(&cols);
    let sol = linalg::solve(&a, &quadric_vector(goal).ok()?)?;
    Some(
        sol.into_iter()
            .zip(parts)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| (c, p.clone()))
            .collect(),
    )
}

/// Explicit rank-three decompositions of binomial combinations in the ideal of
/// the monomial projection `π_{e_c}(C_d)`.
pub fn lemma_identity_gens(d: usize, c: usize) -> Result<Vec<IdentityGen>, QmapError> {
    if d < 6 || c < 3 || c + 3 > d {
        return Err(QmapError::Indices(format!("need d >= 6 and 3 <= c <= d-3, got d={d} c={c}")));
    }
    let target = Target::build(&crate::curvegen::SchemeSpec::Monomial { d, c })
        .map_err(|e| QmapError::Indices(e.to_string()))?;
    let ring = target.ring.clone();
    let xx = |i: usize| x(&ring, c, i);
    let binom = |i: usize, j: usize, k: usize, l: usize| &(&xx(i) * &xx(j)) - &(&xx(k) * &xx(l));
    let mut out = Vec::new();

    for i in 0..=d {
        for j in i + 1..=d {
            for k in 1..=d {
                if i + k >= j || (i + j + k) % 2 != 0 {
                    continue;
                }
                let m = (i + j - k) / 2;
                let n = (i + j + k) / 2;
                if [i, i + k, j - k, j, m, n].contains(&c) {
                    continue;
                }
                let half = (j - i - k) / 2;
                let dec = Decomposition::new(d, half)?;
                let h = BinaryForm::monomial(dec.b, i).add(&BinaryForm::monomial(dec.b, i + k));
                let tr = QTriple {
                    s: BinaryForm::monomial(half, 0),
                    t: BinaryForm::monomial(half, half),
                    h,
                };
                let q = qab(&dec, &tr, &target)?.quadric;
                let goal = &(&(&xx(i) * &xx(j)) + &(&xx(i + k) * &xx(j - k))) - &(&xx(m) * &xx(n)).scale(&int(2));
                let parts = [q, binom(i, j - k, m, m), binom(i + k, j, n, n)];
                if let Some(terms) = combine(&goal, &parts) {
                    out.push(IdentityGen {
                        family: IdentityFamily::Balanced { i, j, k },
                        target: goal,
                        terms,
                    });
                }
            }
        }
    }

    let dec = Decomposition::new(d, 2)?;
    if c >= 3 && c - 3 + 6 <= d {
        let i = c - 3;
        let mut parts = Vec::new();
        for a in [int(1), int(2)] {
            let h = BinaryForm::monomial(d - 4, i)
                .sub(&BinaryForm::monomial(d - 4, i + 1).scale(&(&int(2) * &a)))
                .add(&BinaryForm::monomial(d - 4, i + 2).scale(&(&int(2) * &a * &a)));
            let tr = QTriple {
                s: BinaryForm::monomial(2, 0),
                t: BinaryForm::monomial(2, 1).add(&BinaryForm::monomial(2, 2).scale(&a)),
                h,
            };
            parts.push(qab(&dec, &tr, &target)?.quadric);
        }
        let balanced = &(&(&xx(i) + &xx(i + 4)) * &(&xx(i + 2) + &xx(i + 6))) - &(&xx(i + 1) + &xx(i + 5)).pow(2);
        parts.push(balanced);
        parts.push(binom(i, i + 2, i + 1, i + 1));
        parts.push(binom(i, i + 4, i + 2, i + 2));
        parts.push(binom(i + 2, i + 6, i + 4, i + 4));
        parts.push(binom(i + 4, i + 6, i + 5, i + 5));
        for goal in [binom(i, i + 5, i + 1, i + 4), binom(i + 1, i + 6, i + 2, i + 5)] {
            if let Some(terms) = combine(&goal, &parts) {
                out.push(IdentityGen {
                    family: IdentityFamily::ShiftThree { i },
                    target: goal,
                    terms,
                });
            }
        }
    }
    if c >= 1 && c - 1 + 5 <= d {
        let i = c - 1;
        let mut parts = Vec::new();
        for a in [int(1), int(2)] {
            let h = BinaryForm::monomial(d - 4, i).sub(&BinaryForm::monomial(d - 4, i + 1).scale(&(&int(2) * &a)));
            let tr = QTriple {
                s: BinaryForm::monomial(2, 0).add(&BinaryForm::monomial(2, 1).scale(&a)),
                t: BinaryForm::monomial(2, 2),
                h,
            };
            parts.push(qab(&dec, &tr, &target)?.quadric);
        }
        parts.push(binom(i, i + 4, i + 2, i + 2));
        parts.push(binom(i + 2, i + 4, i + 3, i + 3));
        parts.push(binom(i + 3, i + 5, i + 4, i + 4));
        for goal in [binom(i, i + 5, i + 2, i + 3), binom(i + 2, i + 5, i + 3, i + 4)] {
            if let Some(terms) = combine(&goal, &parts) {
                out.push(IdentityGen {
                    family: IdentityFamily::ShiftOne { i },
                    target: goal,
                    terms,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binform::ApolarPair;
    use crate::curvegen::SchemeSpec;

    fn target(s: &str) -> Target {
        Target::build(&SchemeSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn qab_matches_balanced_expansion() {
        let t = target("monomial:6,3");
        let dec = Decomposition::new(6, 1).unwrap();
        // i=0, j=6, k=4: h = S^4 + T^4
        let tr = QTriple {
            s: BinaryForm::monomial(1, 0),
            t: BinaryForm::monomial(1, 1),
            h: BinaryForm::monomial(4, 0).add(&BinaryForm::monomial(4, 4)),
        };
        let out = qab(&dec, &tr, &t).unwrap();
        let expected = Poly::parse("(x0 + x4)*(x2 + x6) - (x1 + x5)^2", &t.ring).unwrap();
        assert_eq!(out.quadric, expected);
        assert!(quad_rank(&out.quadric).unwrap() <= 3);
        assert_eq!(quadric_from_vector(&t.ring, &out.witness.vector()), out.quadric);
    }

    #[test]
    fn qab_rejects_sections_outside() {
        let t = target("monomial:6,3");
        let dec = Decomposition::new(6, 1).unwrap();
        let tr = QTriple {
            s: BinaryForm::monomial(1, 0),
            t: BinaryForm::monomial(1, 1),
            h: BinaryForm::monomial(4, 3),
        };
        assert!(matches!(qab(&dec, &tr, &t), Err(QmapError::OutsideSystem(_))));
        let same = QTriple {
            s: BinaryForm::monomial(1, 0),
            t: BinaryForm::monomial(1, 0),
            h: BinaryForm::monomial(4, 0),
        };
        assert!(matches!(qab(&dec, &same, &t), Err(QmapError::Degenerate(_))));
    }

    #[test]
    fn identity_generators_verify() {
        for (d, c) in [(6, 3), (7, 3), (8, 3), (8, 4)] {
            let t = Target::build(&SchemeSpec::Monomial { d, c }).unwrap();
            let gens = lemma_identity_gens(d, c).unwrap();
            assert!(!gens.is_empty());
            for g in &gens {
                assert!(g.verify(&t), "{:?} for d={d} c={c}", g.family);
            }
        }
        let gens = lemma_identity_gens(6, 3).unwrap();
        let ring = Target::build(&SchemeSpec::Monomial { d: 6, c: 3 }).unwrap().ring;
        let want = Poly::parse("x0*x5 - x1*x4", &ring).unwrap();
        assert!(gens.iter().any(|g| g.target == want && matches!(g.family, IdentityFamily::ShiftThree { i: 0 })));
        let gens = lemma_identity_gens(7, 3).unwrap();
        let ring = Target::build(&SchemeSpec::Monomial { d: 7, c: 3 }).unwrap().ring;
        let want = Poly::parse("x2*x7 - x4*x5", &ring).unwrap();
        assert!(gens.iter().any(|g| g.target == want && matches!(g.family, IdentityFamily::ShiftOne { i: 2 })));
        assert!(lemma_identity_gens(6, 2).is_err());
    }

    #[test]
    fn harvest_spans_monomial_projection() {
        let t = target("monomial:6,3");
        let h = rank3_harvest(&t, 3, &HarvestConfig::default());
        assert_eq!(h.span(), 8);
        for item in &h.items {
            assert!(quad_rank(&item.quadric).unwrap() <= 3);
            assert!(t.contains(&item.quadric));
        }
    }

    #[test]
    fn harvest_stops_short_for_triple_point() {
        let t = target("monomial:6,2");
        let h = rank3_harvest(&t, 3, &HarvestConfig::default());
        assert_eq!(h.span(), 6);
        let h4 = rank3_harvest(&t, 4, &HarvestConfig::default());
        assert_eq!(h4.span(), 8);
    }

    #[test]
    fn three_point_families() {
        let pair = ApolarPair::parse("S^3-S*T^2,T^5").unwrap();
        let t = Target::build(&SchemeSpec::Projected { center: pair.point() }).unwrap();
        let u = BinaryForm::parse("S*T").unwrap();
        let w = BinaryForm::parse("T^2").unwrap();
        let mut all = SpanTracker::new(21);
        for s in ["S^2-T^2", "S^2-S*T", "S^2+S*T"] {
            let fam = pencil_family(&t, &BinaryForm::parse(s).unwrap(), &u, &w).unwrap();
            assert!(fam.len() >= 5, "{s}: {}", fam.len());
            for it in &fam {
                all.insert(&quadric_vector(&it.quadric).unwrap());
            }
        }
        assert_eq!(all.dim(), 8);
    }
}
