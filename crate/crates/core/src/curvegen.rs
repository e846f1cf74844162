//! Projected rational normal curves, their containing scrolls, and explicit
//! bases for the quadrics in their ideals.
//!
//! A projected curve `π_p(C_d) ⊂ P^{d-1}` is parametrized by the forms
//! `g2 S^{a-i} T^i` (`i = 0..=a`, `a = deg g1 - 2`) followed by
//! `g1 S^{b-j} T^j` (`j = 0..=b`, `b = deg g2 - 2`), where `(g1, g2)` generate the
//! apolar ideal of the center. Coordinates `z_0 .. z_{d-1}` follow that order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::binform::{
    apolar_ideal, point_to_form, ApolarPair, BinaryForm, FormError, ProjPoint,
};
use crate::groebner::{self, GbCaps, GbError};
use crate::linalg::{self, Matrix, SpanTracker};
use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, Rat, Ring, RingRef};
use crate::quadrics::{quadric_from_vector, quadric_monomials, quadric_vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("center lies on the rational normal curve")]
    CenterOnCurve,
    #[error("center has curve rank {0}, this construction needs rank {1}")]
    WrongRank(usize, String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GbError),
}

/// What to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeSpec {
    /// The rational normal curve `C_d ⊂ P^d`.
    Rnc { d: usize },
    /// `π_{e_c}(C_d)` in the coordinates `x_i`, `i ≠ c`.
    Monomial { d: usize, c: usize },
    /// `π_p(C_d)` in the adapted coordinates `z_0 .. z_{d-1}`.
    Projected { center: ProjPoint },
    /// The rational normal surface scroll `S(a, b) ⊂ P^{a+b+1}`.
    Scroll { a: usize, b: usize },
    /// The curve together with its trisecant line, cut out by the curve's
    /// quadrics; the center must have curve rank 3.
    Union { center: ProjPoint },
}

impl SchemeSpec {
    /// Parses descriptors such as `rnc:6`, `monomial:6,3`, `point:0,0,1,0,1,0,0`,
    /// `apolar:S^3-S*T^2,T^5`, `scroll:1,4`, `union:0,0,1,0,0`,
    /// `union-apolar:S^3-S*T^2,T^4`.
    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| CurveError::Invalid(format!("missing `kind:` prefix in `{text}`")))?;
        let ints = |s: &str| -> Result<Vec<usize>, CurveError> {
            s.split(',')
                .map(|x| {
                    let x = x.trim();
                    let x = x.split_once('=').map(|(_, v)| v).unwrap_or(x);
                    x.parse::<usize>()
                        .map_err(|_| CurveError::Invalid(format!("bad integer `{x}`")))
                })
                .collect()
        };
        let spec = match kind.trim() {
            "rnc" => match ints(rest)?.as_slice() {
                [d] => SchemeSpec::Rnc { d: *d },
                _ => return Err(CurveError::Invalid("rnc:<d>".into())),
            },
            "monomial" => match ints(rest)?.as_slice() {
                [d, c] => SchemeSpec::Monomial { d: *d, c: *c },
                _ => return Err(CurveError::Invalid("monomial:<d>,<c>".into())),
            },
            "scroll" => match ints(rest)?.as_slice() {
                [a, b] => SchemeSpec::Scroll { a: *a, b: *b },
                _ => return Err(CurveError::Invalid("scroll:<a>,<b>".into())),
            },
            "point" => SchemeSpec::Projected {
                center: ProjPoint::parse(rest)?,
            },
            "apolar" => SchemeSpec::Projected {
                center: ApolarPair::parse(rest)?.point(),
            },
            "union" => SchemeSpec::Union {
                center: ProjPoint::parse(rest)?,
            },
            "union-apolar" => SchemeSpec::Union {
                center: ApolarPair::parse(rest)?.point(),
            },
            other => return Err(CurveError::Invalid(format!("unknown scheme kind `{other}`"))),
        };
        Ok(spec)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SchemeSpec::Rnc { .. } => "rnc",
            SchemeSpec::Monomial { .. } => "monomial-projection",
            SchemeSpec::Projected { .. } => "projected-curve",
            SchemeSpec::Scroll { .. } => "scroll",
            SchemeSpec::Union { .. } => "curve-union-trisecant",
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeSpec::Rnc { d } => write!(f, "rnc:{d}"),
            SchemeSpec::Monomial { d, c } => write!(f, "monomial:{d},{c}"),
            SchemeSpec::Projected { center } => write!(f, "point:{}", center.to_text()),
            SchemeSpec::Scroll { a, b } => write!(f, "scroll:{a},{b}"),
            SchemeSpec::Union { center } => write!(f, "union:{}", center.to_text()),
        }
    }
}

/// Sections of `O(d)` on the line spanned by the coordinate forms of an
/// embedding, with the identification of sections and linear forms.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    d: usize,
    forms: Vec<BinaryForm>,
    tracker: SpanTracker,
    constraints: Matrix,
}

impl LinearSystem {
    pub fn new(d: usize, forms: Vec<BinaryForm>) -> Result<Self, CurveError> {
        let mut tracker = SpanTracker::new(d + 1);
        for g in &forms {
            if g.degree() != d {
                return Err(CurveError::Invalid("coordinate forms must have degree d".into()));
            }
            if !tracker.insert(g.coeffs()) {
                return Err(CurveError::Invalid("coordinate forms are dependent".into()));
            }
        }
        let rows: Matrix = forms.iter().map(|g| g.coeffs().to_vec()).collect();
        let constraints = linalg::kernel(&rows, d + 1);
        Ok(LinearSystem {
            d,
            forms,
            tracker,
            constraints,
        })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    /// Functionals `φ` with `Σ φ_i w_i = 0` exactly on the system.
    pub fn constraints(&self) -> &Matrix {
        &self.constraints
    }

    pub fn contains(&self, w: &BinaryForm) -> bool {
        w.degree() == self.d && self.tracker.contains(w.coeffs())
    }

    /// Coordinates of a section against the coordinate forms.
    pub fn coordinates(&self, w: &BinaryForm) -> Option<Vec<Rat>> {
        if w.degree() != self.d {
            return None;
        }
        self.tracker.coordinates(w.coeffs())
    }

    /// The linear form corresponding to the section `w`.
    pub fn linear_form(&self, w: &BinaryForm, ring: &RingRef) -> Option<Poly> {
        let c = self.coordinates(w)?;
        Some(crate::quadrics::linear_poly(ring, &c))
    }

    /// Quadrics in the coordinate ring that vanish on the embedded line:
    /// the kernel of `z_i z_j ↦ v_i v_j`.
    pub fn quadric_kernel(&self, ring: &RingRef) -> Vec<Poly> {
        let n = self.forms.len();
        let pairs = quadric_monomials(n);
        let cols: Vec<Vec<Rat>> = pairs
            .iter()
            .map(|&(i, j)| self.forms[i].mul(&self.forms[j]).coeffs().to_vec())
            .collect();
        let m = linalg::transpose(&cols);
        let k = linalg::kernel(&m, pairs.len());
        // reduced echelon form of the kernel makes the basis canonical
        let (r, _) = linalg::rref(&k);
        r.iter().map(|v| quadric_from_vector(ring, v)).collect()
    }
}

/// The Thm 3.1 style parametrization of a projected curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    pub components: Vec<BinaryForm>,
    /// Number of components in the leading `g2` block.
    pub split: usize,
}

impl Parametrization {
    pub fn from_pair(pair: &ApolarPair) -> Self {
        let a = pair.d1() - 2;
        let b = pair.d2() - 2;
        let mut components = Vec::with_capacity(pair.d);
        for i in 0..=a {
            components.push(pair.g2.mul(&BinaryForm::monomial(a, i)));
        }
        for j in 0..=b {
            components.push(pair.g1.mul(&BinaryForm::monomial(b, j)));
        }
        Parametrization { components, split: a + 1 }
    }

    pub fn eval(&self, alpha: &Rat, beta: &Rat) -> Vec<Rat> {
        self.components.iter().map(|g| g.eval(alpha, beta)).collect()
    }
}

pub fn parametrize_projection(p: &ProjPoint) -> Result<Parametrization, CurveError> {
    let pair = apolar_ideal(&point_to_form(p))?;
    if pair.d1() < 2 {
        return Err(CurveError::CenterOnCurve);
    }
    Ok(Parametrization::from_pair(&pair))
}

/// Independent quadrics in a fixed ring, with their degree profile.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub ring: RingRef,
    pub gens: Vec<Poly>,
}

impl IdealBasis {
    pub fn new(ring: RingRef, gens: Vec<Poly>) -> Self {
        IdealBasis { ring, gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degree_profile(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gens {
            *out.entry(g.total_degree().unwrap_or(0)).or_insert(0) += 1;
        }
        out
    }

    /// Rank of the span of the quadrics.
    pub fn quadric_rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = self
            .gens
            .iter()
            .filter(|g| g.total_degree() == Some(2))
            .map(|g| quadric_vector(g).expect("quadric"))
            .collect();
        linalg::rank(&rows)
    }
}

/// True if two lists of quadrics in the same ring span the same space.
pub fn same_quadric_span(a: &[Poly], b: &[Poly]) -> bool {
    let va: Vec<Vec<Rat>> = a.iter().map(|q| quadric_vector(q).expect("quadric")).collect();
    let vb: Vec<Vec<Rat>> = b.iter().map(|q| quadric_vector(q).expect("quadric")).collect();
    let ra = linalg::rank(&va);
    let rb = linalg::rank(&vb);
    let mut both = va;
    both.extend(vb);
    ra == rb && linalg::rank(&both) == ra
}

fn var(ring: &RingRef, i: usize) -> Poly {
    Poly::var(ring, i)
}

fn binom_minor(ring: &RingRef, a: (usize, usize), b: (usize, usize)) -> Poly {
    // det [z_a0 z_b0; z_a1 z_b1]
    &(&var(ring, a.0) * &var(ring, b.1)) - &(&var(ring, a.1) * &var(ring, b.0))
}

/// 2 × 2 minors of the two-block matrix of `S(a, b)` in a ring whose first
/// `a + 1` variables are the `u` block and next `b + 1` the `v` block.
pub fn scroll_ideal(a: usize, b: usize, ring: &RingRef) -> Result<IdealBasis, CurveError> {
    if ring.arity() != a + b + 2 {
        return Err(CurveError::Invalid(format!(
            "scroll S({a},{b}) needs {} variables, ring has {}",
            a + b + 2,
            ring.arity()
        )));
    }
    let mut cols: Vec<(usize, usize)> = (0..a).map(|i| (i, i + 1)).collect();
    cols.extend((0..b).map(|j| (a + 1 + j, a + 2 + j)));
    let mut gens = Vec::new();
    for x in 0..cols.len() {
        for y in x + 1..cols.len() {
            gens.push(binom_minor(ring, cols[x], cols[y]));
        }
    }
    Ok(IdealBasis::new(ring.clone(), gens))
}

/// Writes `Σ_k c_k S^{deg-k} T^k · (block_x)(block_y)` as a quadric in the scroll
/// coordinates. `x_off, xa` and `y_off, yb` locate the two blocks and their top
/// index. Within one block the first index is kept as small as possible; across
/// blocks the first index is kept as large as possible.
fn lift_bihomogeneous(
    ring: &RingRef,
    coeffs: &[Rat],
    x: (usize, usize),
    y: (usize, usize),
    same_block: bool,
) -> Poly {
    let (x_off, xa) = x;
    let (y_off, yb) = y;
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let i = if same_block { k.saturating_sub(yb) } else { k.min(xa) };
        let j = k - i;
        debug_assert!(i <= xa && j <= yb);
        let mut e = vec![0u32; ring.arity()];
        e[x_off + i] += 1;
        e[y_off + j] += 1;
        terms.push((Monomial::from_exponents(e), c.clone()));
    }
    Poly::from_terms(ring, terms)
}

/// Scroll minors followed by the quadrics `m (g1 γ - g2 η) γ` and
/// `m' (g1 γ - g2 η) η` lifted to the scroll coordinates.
pub fn projected_curve_quadrics(p: &ProjPoint) -> Result<IdealBasis, CurveError> {
    let pair = apolar_ideal(&point_to_form(p))?;
    let d = pair.d;
    if pair.d1() < 3 {
        return Err(CurveError::WrongRank(pair.d1(), "at least 3".into()));
    }
    if d < 5 {
        return Err(CurveError::Invalid("degree must be at least 5".into()));
    }
    let ring = Ring::indexed("z", d, MonomialOrder::DegRevLex);
    Ok(IdealBasis::new(ring.clone(), pair_quadrics(&pair, &ring)))
}

fn pair_quadrics(pair: &ApolarPair, ring: &RingRef) -> Vec<Poly> {
    let (d1, d2) = (pair.d1(), pair.d2());
    let a = d1 - 2;
    let b = d2 - 2;
    let mut gens = scroll_ideal(a, b, ring).expect("arity a+b+2 = d").gens;
    let u = (0, a);
    let v = (a + 1, b);
    // g1 γ² - g2 γη, times S^{d1-4-j} T^j
    if d1 >= 4 {
        for j in 0..=d1 - 4 {
            let m = BinaryForm::monomial(d1 - 4, j);
            let uu = pair.g1.mul(&m);
            let uv = pair.g2.mul(&m);
            let q = &lift_bihomogeneous(ring, uu.coeffs(), u, u, true)
                - &lift_bihomogeneous(ring, uv.coeffs(), u, v, false);
            gens.push(q);
        }
    }
    // g1 γη - g2 η², times S^{d2-4-j} T^j
    if d2 >= 4 {
        for j in 0..=d2 - 4 {
            let m = BinaryForm::monomial(d2 - 4, j);
            let uv = pair.g1.mul(&m);
            let vv = pair.g2.mul(&m);
            let q = &lift_bihomogeneous(ring, uv.coeffs(), u, v, false)
                - &lift_bihomogeneous(ring, vv.coeffs(), v, v, true);
            gens.push(q);
        }
    }
    gens
}

/// Monomials `x_i x_j` (`i <= j`, both `≠ c`) grouped by index `i + j`.
pub fn index_table(d: usize, c: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for t in 0..=2 * d {
        let mut list = Vec::new();
        for i in 0..=d {
            if i > t || t - i > d || i > t - i {
                continue;
            }
            let j = t - i;
            if i == c || j == c {
                continue;
            }
            list.push((i, j));
        }
        out.push((t, list));
    }
    out
}

fn monomial_ring(d: usize, c: usize) -> RingRef {
    Ring::new(
        (0..=d).filter(|&i| i != c).map(|i| format!("x{i}")),
        MonomialOrder::DegRevLex,
    )
    .expect("distinct names")
}

/// For each index, the binomials `m_k - m_last` among the monomials of that
/// index avoiding `x_c`.
pub fn monomial_projection_quadrics(d: usize, c: usize) -> Result<IdealBasis, CurveError> {
    if d < 2 || c > d {
        return Err(CurveError::Invalid(format!("need 0 <= c <= d, got d={d} c={c}")));
    }
    let ring = monomial_ring(d, c);
    let idx = |i: usize| if i < c { i } else { i - 1 };
    let mono = |i: usize, j: usize| &var(&ring, idx(i)) * &var(&ring, idx(j));
    let mut gens = Vec::new();
    for (_, list) in index_table(d, c) {
        if list.len() < 2 {
            continue;
        }
        let (li, lj) = *list.last().expect("nonempty");
        let last = mono(li, lj);
        for &(i, j) in &list[..list.len() - 1] {
            gens.push(&mono(i, j) - &last);
        }
    }
    Ok(IdealBasis::new(ring, gens))
}

/// 2 × 2 minors of the 2 × d Hankel matrix in `x_0 .. x_d`.
pub fn rnc_ideal(d: usize, ring: &RingRef) -> Vec<Poly> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            out.push(binom_minor(ring, (i, i + 1), (j, j + 1)));
        }
    }
    out
}

/// Which projection the elimination oracle performs.
#[derive(Clone, Debug)]
pub enum Drop {
    /// Eliminate the coordinate `x_c`.
    Coordinate(usize),
    /// Change coordinates by `x = B y` with `B e_0 = p`, then eliminate `y_0`.
    Point(ProjPoint),
}

#[derive(Clone, Debug)]
pub struct Eliminated {
    pub ring: RingRef,
    pub gens: Vec<Poly>,
    pub quadrics: Vec<Poly>,
}

/// The basis change used for a general center: columns `p` and `e_i` for all
/// `i` except the first nonzero coordinate of `p`.
pub fn center_basis(p: &ProjPoint) -> Matrix {
    let d = p.dim();
    let piv = p.first_nonzero();
    let mut cols: Vec<Vec<Rat>> = vec![p.coords().to_vec()];
    for i in (0..=d).filter(|&i| i != piv) {
        let mut e = vec![Rat::zero(); d + 1];
        e[i] = Rat::from_integer(1.into());
        cols.push(e);
    }
    linalg::transpose(&cols)
}

/// Eliminates one variable from the ideal of `C_d` by a Gröbner basis
/// computation. The degree-two part of the result defines the projection.
pub fn elimination_oracle(d: usize, drop: &Drop, caps: GbCaps) -> Result<Eliminated, CurveError> {
    let std = Ring::indexed("x", d + 1, MonomialOrder::DegRevLex);
    let minors = rnc_ideal(d, &std);
    let (_, gens) = match drop {
        Drop::Coordinate(c) => {
            if *c > d {
                return Err(CurveError::Invalid(format!("coordinate {c} out of range")));
            }
            let mut names = vec![format!("x{c}")];
            names.extend((0..=d).filter(|i| i != c).map(|i| format!("x{i}")));
            let ring = Ring::new(names, MonomialOrder::DegRevLex)?;
            let moved: Vec<Poly> = minors.iter().map(|m| m.to_ring(&ring)).collect::<Result<_, _>>()?;
            (ring, moved)
        }
        Drop::Point(p) => {
            if p.dim() != d {
                return Err(CurveError::Invalid("center lives in the wrong space".into()));
            }
            let b = center_basis(p);
            let yring = Ring::indexed("y", d + 1, MonomialOrder::DegRevLex);
            let mut assignment = BTreeMap::new();
            for (i, row) in b.iter().enumerate() {
                assignment.insert(i, crate::quadrics::linear_poly(&yring, row));
            }
            let moved: Vec<Poly> = minors
                .iter()
                .map(|m| m.substitute(&assignment, &yring))
                .collect::<Result<_, _>>()?;
            (yring, moved)
        }
    };
    let (_, kept, sub) = groebner::eliminate(&gens, 1, caps)?;
    let quadrics: Vec<Poly> = kept.iter().filter(|g| g.total_degree() == Some(2)).cloned().collect();
    Ok(Eliminated {
        ring: sub,
        gens: kept,
        quadrics,
    })
}

/// For a general center: the matrix `M` with `z = M y'`, where `z` are the
/// adapted coordinates and `y' = (y_1, .., y_d)` the coordinates left after
/// eliminating `y_0` in [`elimination_oracle`].
pub fn adapted_to_eliminated(p: &ProjPoint) -> Result<Matrix, CurveError> {
    let pair = apolar_ideal(&point_to_form(p))?;
    let par = Parametrization::from_pair(&pair);
    let b = center_basis(p);
    // z_k = Σ_i (v_k)_i x_i
    let v: Matrix = par.components.iter().map(|g| g.coeffs().to_vec()).collect();
    let vb = linalg::mat_mul(&v, &b);
    Ok(vb.into_iter().map(|row| row[1..].to_vec()).collect())
}

/// Rewrites a polynomial in the adapted coordinates as one in the eliminated
/// ring through `z = M y'`.
pub fn pull_back(q: &Poly, m: &Matrix, target: &RingRef) -> Result<Poly, CurveError> {
    let mut assignment = BTreeMap::new();
    for (k, row) in m.iter().enumerate() {
        assignment.insert(k, crate::quadrics::linear_poly(target, row));
    }
    Ok(q.substitute(&assignment, target)?)
}

/// A scheme with its coordinates, the embedding when it is a curve, and a basis
/// of the quadrics in its ideal.
#[derive(Clone, Debug)]
pub struct Target {
    pub spec: SchemeSpec,
    pub ring: RingRef,
    pub system: Option<LinearSystem>,
    pub pair: Option<ApolarPair>,
    pub basis: Vec<Poly>,
    tracker: SpanTracker,
}

impl Target {
    pub fn build(spec: &SchemeSpec) -> Result<Self, CurveError> {
        let (ring, system, pair, basis) = match spec {
            SchemeSpec::Rnc { d } => {
                if *d < 2 {
                    return Err(CurveError::Invalid("degree must be at least 2".into()));
                }
                let ring = Ring::indexed("x", d + 1, MonomialOrder::DegRevLex);
                let forms = (0..=*d).map(|i| BinaryForm::monomial(*d, i)).collect();
                let basis = rnc_ideal(*d, &ring);
                (ring, Some(LinearSystem::new(*d, forms)?), None, basis)
            }
            SchemeSpec::Monomial { d, c } => {
                if *d < 3 || *c > *d {
                    return Err(CurveError::Invalid(format!("need d >= 3 and c <= d, got d={d} c={c}")));
                }
                let ib = monomial_projection_quadrics(*d, *c)?;
                let forms = (0..=*d).filter(|i| i != c).map(|i| BinaryForm::monomial(*d, i)).collect();
                let pair = apolar_ideal(&point_to_form(&ProjPoint::unit(*d, *c)))?;
                (ib.ring, Some(LinearSystem::new(*d, forms)?), Some(pair), ib.gens)
            }
            SchemeSpec::Projected { center } | SchemeSpec::Union { center } => {
                let pair = apolar_ideal(&point_to_form(center))?;
                if pair.d1() < 2 {
                    return Err(CurveError::CenterOnCurve);
                }
                if matches!(spec, SchemeSpec::Union { .. }) && pair.d1() != 3 {
                    return Err(CurveError::WrongRank(pair.d1(), "exactly 3".into()));
                }
                let d = pair.d;
                let ring = Ring::indexed("z", d, MonomialOrder::DegRevLex);
                let par = Parametrization::from_pair(&pair);
                let system = LinearSystem::new(d, par.components)?;
                let basis = if pair.d1() >= 3 && d >= 5 {
                    pair_quadrics(&pair, &ring)
                } else {
                    system.quadric_kernel(&ring)
                };
                (ring, Some(system), Some(pair), basis)
            }
            SchemeSpec::Scroll { a, b } => {
                if a > b || *b == 0 {
                    return Err(CurveError::Invalid("scroll needs a <= b and b >= 1".into()));
                }
                let mut names: Vec<String> = (0..=*a).map(|i| format!("u{i}")).collect();
                names.extend((0..=*b).map(|j| format!("v{j}")));
                let ring = Ring::new(names, MonomialOrder::DegRevLex)?;
                let basis = scroll_ideal(*a, *b, &ring)?.gens;
                (ring, None, None, basis)
            }
        };
        let n = ring.arity();
        let mut tracker = SpanTracker::new(n * (n + 1) / 2);
        for q in &basis {
            let v = quadric_vector(q).map_err(|e| CurveError::Invalid(e.to_string()))?;
            if !tracker.insert(&v) {
                return Err(CurveError::Invalid("quadric basis is dependent".into()));
            }
        }
        Ok(Target {
            spec: spec.clone(),
            ring,
            system,
            pair,
            basis,
            tracker,
        })
    }

    pub fn dim_i2(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a quadric against the basis, if it lies in the span.
    pub fn coordinates(&self, q: &Poly) -> Option<Vec<Rat>> {
        let v = quadric_vector(q).ok()?;
        self.tracker.coordinates(&v)
    }

    pub fn contains(&self, q: &Poly) -> bool {
        self.coordinates(q).is_some()
    }

    /// Degree of the embedding for curve targets.
    pub fn degree(&self) -> Option<usize> {
        self.system.as_ref().map(LinearSystem::degree)
    }

    pub fn scroll_type(&self) -> Option<(usize, usize)> {
        match &self.spec {
            SchemeSpec::Scroll { a, b } => Some((*a, *b)),
            _ => self.pair.as_ref().filter(|p| p.d1() >= 2).map(|p| (p.d1() - 2, p.d2() - 2)),
        }
    }

    /// Reparametrizes the curve by `(S, T) ↦ σ(S, T)` and returns the matrix `A`
    /// with `z = A z'`, where `z'` are the adapted coordinates of the
    /// reparametrized curve. Quadrics `q(z)` become `q(A z')`; the determinantal
    /// ideals of the generic quadric are unchanged by this congruence.
    pub fn reframe(&self, sigma: &[[Rat; 2]; 2]) -> Option<Matrix> {
        self.moved(sigma).map(|(_, a)| a)
    }

    /// The reparametrized target together with the matrix `A` of [`Target::reframe`].
    pub fn moved(&self, sigma: &[[Rat; 2]; 2]) -> Option<(Target, Matrix)> {
        let pair = self.pair.as_ref()?;
        let sys = self.system.as_ref()?;
        let det = &sigma[0][0] * &sigma[1][1] - &sigma[0][1] * &sigma[1][0];
        if det.is_zero() || !matches!(self.spec, SchemeSpec::Projected { .. } | SchemeSpec::Union { .. } | SchemeSpec::Monomial { .. }) {
            return None;
        }
        let moved = ApolarPair::new(pair.g1.substitute_linear(sigma), pair.g2.substitute_linear(sigma), pair.d).ok()?;
        let other = Target::build(&SchemeSpec::Projected { center: moved.point() }).ok()?;
        let osys = other.system.as_ref()?;
        let a = sys
            .forms()
            .iter()
            .map(|v| osys.coordinates(&v.substitute_linear(sigma)))
            .collect::<Option<Matrix>>()?;
        Some((other, a))
    }

    /// Every basis quadric vanishes on the embedded curve.
    pub fn vanishes_on_curve(&self, q: &Poly) -> bool {
        let Some(sys) = &self.system else { return false };
        let forms = sys.forms();
        let mut total = BinaryForm::zero(2 * sys.degree());
        for (m, c) in q.terms() {
            let e = m.exponents();
            let mut prod = BinaryForm::monomial(0, 0).scale(c);
            for (k, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    prod = prod.mul(&forms[k]);
                }
            }
            if prod.degree() != total.degree() {
                return false;
            }
            total = total.add(&prod);
        }
        total.is_zero()
    }
}
