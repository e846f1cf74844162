//! Binary forms, apolarity, and apolar ideals of points of `P^d`.
//!
//! A [`BinaryForm`] of degree `d` stores the monomial coefficients `c_i` of
//! `x^{d-i} y^i`. Whether `x, y` mean the primal variables `s, t` or the dual
//! variables `S, T` is up to the caller; [`apolar`] treats its first argument as
//! the differential operator. Divided-power coordinates are only a view: the
//! divided-power coefficient of `s^[d-i] t^[i]` is `c_i (d-i)! i!`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::poly::{format_rat, parse_rat, MonomialOrder, Poly, PolyError, Rat, Ring, RingRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("operator degree {op} exceeds form degree {form}")]
    DegreeTooLarge { op: usize, form: usize },
    #[error("the zero form has no apolar ideal")]
    ZeroForm,
    #[error("point has no nonzero coordinate")]
    ZeroPoint,
    #[error("expected a lower generator of degree 3, found degree {0}")]
    NotRankThree(usize),
    #[error("forms have a common root")]
    CommonRoot,
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n (n-1) ... (n-k+1)`
fn falling(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (n - k + 1..=n).fold(BigInt::one(), |acc, x| acc * BigInt::from(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Rat>,
}

impl BinaryForm {
    /// Coefficients of `x^d, x^{d-1}y, ..., y^d`.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![Rat::zero(); d + 1])
    }

    /// `x^{d-i} y^i`
    pub fn monomial(d: usize, i: usize) -> Self {
        let mut f = Self::zero(d);
        f.coeffs[i] = Rat::one();
        f
    }

    /// Builds a form from divided-power coordinates `p_i` of `x^[d-i] y^[i]`.
    pub fn from_divided(p: &[Rat]) -> Self {
        let d = p.len() - 1;
        Self::new(
            p.iter()
                .enumerate()
                .map(|(i, x)| x / Rat::from_integer(factorial(d - i) * factorial(i)))
                .collect(),
        )
    }

    pub fn divided_coeffs(&self) -> Vec<Rat> {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, x)| x * Rat::from_integer(factorial(d - i) * factorial(i)))
            .collect()
    }

    /// `(a x + b y)^d`
    pub fn linear_power(a: &Rat, b: &Rat, d: usize) -> Self {
        Self::new(
            (0..=d)
                .map(|i| {
                    Rat::from_integer(binomial(d, i))
                        * num_traits::pow(a.clone(), d - i)
                        * num_traits::pow(b.clone(), i)
                })
                .collect(),
        )
    }

    /// `F(a x + b y, c x + e y)` for the matrix `[[a, b], [c, e]]`.
    pub fn substitute_linear(&self, m: &[[Rat; 2]; 2]) -> Self {
        let d = self.degree();
        let x = BinaryForm::new(vec![m[0][0].clone(), m[0][1].clone()]);
        let y = BinaryForm::new(vec![m[1][0].clone(), m[1][1].clone()]);
        let mut out = BinaryForm::zero(d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&x.pow(d - i).mul(&y.pow(i)).scale(c));
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degrees");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "subtracting forms of different degrees");
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Rat::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::monomial(0, 0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, a: &Rat, b: &Rat) -> Rat {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * num_traits::pow(a.clone(), d - i) * num_traits::pow(b.clone(), i))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Derivative in the first variable.
    pub fn d_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new((0..d).map(|i| &self.coeffs[i] * Rat::from_integer(BigInt::from(d - i))).collect())
    }

    /// Derivative in the second variable.
    pub fn d_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new((1..=d).map(|i| &self.coeffs[i] * Rat::from_integer(BigInt::from(i))).collect())
    }

    /// Index of the leading monomial under lex with `x > y`, i.e. the smallest
    /// index with a nonzero coefficient.
    pub fn lex_leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn last_nonzero_index(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Leading coefficient made one.
    pub fn monic(&self) -> Self {
        Self::new(linalg::normalize_first(&self.coeffs))
    }

    /// Polynomial in a ring whose variables include `x` and `y`.
    pub fn to_poly(&self, ring: &RingRef, x: usize, y: usize) -> Poly {
        let d = self.degree() as u32;
        let terms = self.coeffs.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0u32; ring.arity()];
            e[x] += d - i as u32;
            e[y] += i as u32;
            (crate::poly::Monomial::from_exponents(e), c.clone())
        });
        Poly::from_terms(ring, terms)
    }

    /// Reads a homogeneous polynomial in two named variables. The degree has to be
    /// supplied when the polynomial is zero.
    pub fn from_poly(p: &Poly, x: usize, y: usize) -> Result<Self, FormError> {
        let Some(d) = p.total_degree() else {
            return Err(FormError::Parse("zero polynomial has no degree".into()));
        };
        if !p.is_homogeneous() {
            return Err(FormError::Parse(format!("`{p}` is not homogeneous")));
        }
        let mut coeffs = vec![Rat::zero(); d as usize + 1];
        for (m, c) in p.terms() {
            let e = m.exponents();
            for (k, &v) in e.iter().enumerate() {
                if k != x && k != y && v > 0 {
                    return Err(FormError::Parse(format!("`{p}` involves extra variables")));
                }
            }
            coeffs[e[y] as usize] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    /// Parses text in `S, T` (dual) or `s, t` (primal); the variable names are
    /// auto-detected.
    pub fn parse(text: &str) -> Result<Self, FormError> {
        let dual = text.contains('S') || text.contains('T');
        let ring = if dual { dual_ring() } else { primal_ring() };
        let p = Poly::parse(text, &ring)?;
        Self::from_poly(&p, 0, 1)
    }

    pub fn display_with(&self, x: &str, y: &str) -> String {
        let ring = Ring::new([x, y], MonomialOrder::Lex).expect("two distinct names");
        self.to_poly(&ring, 0, 1).to_string()
    }

    /// Splits off the largest power of `y`: returns `(k, h)` with `self = y^k h`
    /// and `h` not divisible by `y`.
    fn split_y(&self) -> (usize, Vec<Rat>) {
        // self = y^lead * h, and h(x, 1) has coefficients c_lead..c_d in decreasing powers of x
        let lead = self.lex_leading_index().unwrap_or(0);
        let h: Vec<Rat> = self.coeffs[lead..].iter().rev().cloned().collect();
        (lead, h)
    }

    /// Greatest common divisor, up to a scalar, computed by dehomogenizing.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (ka, ha) = self.split_y();
        let (kb, hb) = other.split_y();
        let g = upoly_gcd(&ha, &hb);
        let k = ka.min(kb);
        // g is in ascending powers of x; homogenize
        let gd = g.len() - 1;
        let mut coeffs = vec![Rat::zero(); gd + k + 1];
        for (j, c) in g.iter().enumerate() {
            // x^j y^{gd-j}, times y^k
            coeffs[gd - j + k] = c.clone();
        }
        Self::new(coeffs).monic()
    }

    /// Sylvester resultant; zero exactly when the forms share a projective root
    /// (or one of them is the zero form).
    pub fn resultant(&self, other: &Self) -> Rat {
        let (m, n) = (self.degree(), other.degree());
        if m + n == 0 {
            return Rat::one();
        }
        let size = m + n;
        let mut rows = linalg::zeros(size, size);
        for i in 0..n {
            for (j, c) in self.coeffs.iter().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        linalg::det(&rows)
    }

    /// Exact quotient by `other`, if it divides.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (n, m) = (self.degree(), other.degree());
        if m > n || other.is_zero() {
            return None;
        }
        let lead = other.lex_leading_index()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![Rat::zero(); n - m + 1];
        for i in 0..=n - m {
            let idx = i + lead;
            if rem[idx].is_zero() {
                continue;
            }
            let f = &rem[idx] / &other.coeffs[lead];
            for (j, c) in other.coeffs.iter().enumerate() {
                rem[i + j] -= &f * c;
            }
            q[i] = f;
        }
        if linalg::is_zero_vec(&rem) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Rational linear factors `(b x - a y)` paired with their multiplicities,
    /// one per distinct rational root `[a : b]`. Only roots whose numerator and
    /// denominator divide coefficients of manageable size are searched.
    pub fn rational_linear_factors(&self) -> Vec<(BinaryForm, usize)> {
        self.linear_factorization().0
    }

    /// Rational linear factors as in [`Self::rational_linear_factors`] together
    /// with the remaining cofactor.
    pub fn linear_factorization(&self) -> (Vec<(BinaryForm, usize)>, BinaryForm) {
        let mut out = Vec::new();
        if self.is_zero() {
            return (out, self.clone());
        }
        let mut rest = self.clone();
        let y = BinaryForm::from_ints(&[0, 1]);
        let mut k = 0;
        while rest.degree() > 0 && rest.coeffs[0].is_zero() {
            rest = rest.div_exact(&y).expect("y divides");
            k += 1;
        }
        if k > 0 {
            out.push((y, k));
        }
        let x = BinaryForm::from_ints(&[1, 0]);
        let mut k = 0;
        while rest.degree() > 0 && rest.coeffs[rest.degree()].is_zero() {
            rest = rest.div_exact(&x).expect("x divides");
            k += 1;
        }
        if k > 0 {
            out.push((x, k));
        }
        if rest.degree() == 0 {
            return (out, rest);
        }
        // integer coefficients for the rational root test
        let ints = linalg::integer_rows(&[rest.coeffs.clone()]).remove(0);
        let lead = ints[0].abs();
        let constant = ints.last().cloned().unwrap_or_default().abs();
        let (Some(ps), Some(qs)) = (small_divisors(&constant), small_divisors(&lead)) else {
            return (out, rest);
        };
        if ps.len() * qs.len() > MAX_ROOT_CANDIDATES {
            return (out, rest);
        }
        let mut candidates: BTreeSet<Rat> = BTreeSet::new();
        for p in &ps {
            for q in &qs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    candidates.insert(Rat::new(p * BigInt::from(sign), q.clone()));
                }
            }
        }
        // the homogeneous integer form vanishes at [p : q] iff Σ c_i p^{n-i} q^i = 0
        let vanishes = |r: &Rat| {
            let (p, q) = (r.numer(), r.denom());
            let n = ints.len() - 1;
            let mut acc = BigInt::zero();
            for (i, c) in ints.iter().enumerate() {
                acc += c * p.pow((n - i) as u32) * q.pow(i as u32);
            }
            acc.is_zero()
        };
        for r in candidates {
            if rest.degree() == 0 || !vanishes(&r) {
                continue;
            }
            // root [r : 1] corresponds to the factor x - r y
            let factor = BinaryForm::new(vec![Rat::one(), -r.clone()]);
            let mut mult = 0;
            while rest.degree() > 0 {
                match rest.div_exact(&factor) {
                    Some(q) => {
                        rest = q;
                        mult += 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                out.push((factor, mult));
            }
        }
        (out, rest)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("S", "T"))
    }
}

/// Upper bound on numerator-denominator pairs tried by the rational root test.
const MAX_ROOT_CANDIDATES: usize = 20_000;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 {
        return Some(vec![BigInt::zero()]);
    }
    if n > 100_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    out.sort();
    Some(out)
}

/// Univariate gcd over the rationals, coefficients in ascending powers, monic.
fn upoly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }
    fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let db = b.len() - 1;
        if db == 0 {
            return vec![Rat::zero()];
        }
        let lb = &b[db];
        let mut r = a.to_vec();
        while r.len() > db {
            let dr = r.len() - 1;
            let f = &r[dr] / lb;
            if !f.is_zero() {
                for (j, c) in b.iter().enumerate() {
                    r[dr - db + j] -= &f * c;
                }
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(Rat::zero());
        }
        trim(r)
    }
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().expect("nonempty").clone();
    if lead.is_zero() {
        return vec![Rat::zero()];
    }
    x.iter().map(|c| c / &lead).collect()
}

pub fn dual_ring() -> RingRef {
    Ring::new(["S", "T"], MonomialOrder::Lex).expect("valid ring")
}

pub fn primal_ring() -> RingRef {
    Ring::new(["s", "t"], MonomialOrder::Lex).expect("valid ring")
}

/// `F ∘ f` where `F` acts by differentiation: `S^{j-k} T^k` acts as
/// `∂^j / ∂s^{j-k} ∂t^k`.
pub fn apolar(op: &BinaryForm, f: &BinaryForm) -> Result<BinaryForm, FormError> {
    let (j, i) = (op.degree(), f.degree());
    if j > i {
        return Err(FormError::DegreeTooLarge { op: j, form: i });
    }
    let mut out = vec![Rat::zero(); i - j + 1];
    for (k, c) in op.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // ∂_s^{j-k} ∂_t^k applied to s^{i-m} t^m lands on index m - k
        for (m, a) in f.coeffs.iter().enumerate() {
            if a.is_zero() || m < k || i - m < j - k {
                continue;
            }
            let w = falling(i - m, j - k) * falling(m, k);
            out[m - k] += c * a * Rat::from_integer(w);
        }
    }
    Ok(BinaryForm::new(out))
}

/// The catalecticant `Cat_e(f)`: column `k` holds the coefficients of
/// `S^{e-k} T^k ∘ f`, so the matrix is `(d-e+1) × (e+1)`.
pub fn catalecticant(f: &BinaryForm, e: usize) -> Result<linalg::Matrix, FormError> {
    let d = f.degree();
    if e > d {
        return Err(FormError::DegreeTooLarge { op: e, form: d });
    }
    let cols: Vec<Vec<Rat>> = (0..=e)
        .map(|k| apolar(&BinaryForm::monomial(e, k), f).map(|g| g.coeffs))
        .collect::<Result<_, _>>()?;
    Ok(linalg::transpose(&cols))
}

/// Kernel of the apolarity map in degree `e`, i.e. a basis of `(f^⊥)_e`.
pub fn annihilators(f: &BinaryForm, e: usize) -> Vec<BinaryForm> {
    if e > f.degree() {
        return (0..=e).map(|k| BinaryForm::monomial(e, k)).collect();
    }
    let cat = catalecticant(f, e).expect("degree checked");
    linalg::kernel(&cat, e + 1).into_iter().map(BinaryForm::new).collect()
}

/// A point of `P^d`, compared up to a nonzero scalar.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<Rat>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rat>) -> Result<Self, FormError> {
        if linalg::is_zero_vec(&coords) {
            return Err(FormError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self, FormError> {
        Self::new(coords.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// The torus-fixed point `e_i` of `P^d`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut c = vec![Rat::zero(); d + 1];
        c[i] = Rat::one();
        ProjPoint { coords: c }
    }

    /// Image of `[a : b]` on the standard rational normal curve.
    pub fn on_curve(d: usize, a: &Rat, b: &Rat) -> Result<Self, FormError> {
        Self::new(
            (0..=d)
                .map(|i| num_traits::pow(a.clone(), d - i) * num_traits::pow(b.clone(), i))
                .collect(),
        )
    }

    /// Comma separated rationals, e.g. `0,0,1,0,1/2,0,0`.
    pub fn parse(text: &str) -> Result<Self, FormError> {
        let coords = text
            .split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Representative with first nonzero coordinate one.
    pub fn normalized(&self) -> Vec<Rat> {
        linalg::normalize_first(&self.coords)
    }

    pub fn first_nonzero(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    pub fn to_text(&self) -> String {
        self.coords.iter().map(format_rat).collect::<Vec<_>>().join(",")
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && self.normalized() == other.normalized()
    }
}

impl Eq for ProjPoint {}

/// `f_p = Σ p_i s^[d-i] t^[i]`.
pub fn point_to_form(p: &ProjPoint) -> BinaryForm {
    BinaryForm::from_divided(&p.coords)
}

/// Inverse of [`point_to_form`]: `p_i = S^{d-i} T^i ∘ f`.
pub fn form_to_point(f: &BinaryForm) -> Result<ProjPoint, FormError> {
    ProjPoint::new(f.divided_coeffs())
}

/// Generators of the complete intersection `f^⊥ = (g1, g2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApolarPair {
    pub g1: BinaryForm,
    pub g2: BinaryForm,
    pub d: usize,
}

impl ApolarPair {
    /// Checks the degree bookkeeping and that the generators share no root.
    pub fn new(g1: BinaryForm, g2: BinaryForm, d: usize) -> Result<Self, FormError> {
        let (d1, d2) = (g1.degree(), g2.degree());
        if d1 > d2 || d1 + d2 != d + 2 {
            return Err(FormError::Parse(format!(
                "generator degrees {d1}, {d2} do not fit ambient degree {d}"
            )));
        }
        if g1.is_zero() || g2.is_zero() || g1.resultant(&g2).is_zero() {
            return Err(FormError::CommonRoot);
        }
        Ok(ApolarPair { g1, g2, d })
    }

    /// Parses `"g1,g2"` in `S, T`; the ambient degree is `deg g1 + deg g2 - 2`.
    pub fn parse(text: &str) -> Result<Self, FormError> {
        let (a, b) = text
            .split_once(',')
            .ok_or_else(|| FormError::Parse("expected `g1,g2`".into()))?;
        let g1 = BinaryForm::parse(a)?;
        let g2 = BinaryForm::parse(b)?;
        let (g1, g2) = if g1.degree() <= g2.degree() { (g1, g2) } else { (g2, g1) };
        let d = g1.degree() + g2.degree() - 2;
        Self::new(g1, g2, d)
    }

    pub fn d1(&self) -> usize {
        self.g1.degree()
    }

    pub fn d2(&self) -> usize {
        self.g2.degree()
    }

    /// The point whose form has this apolar ideal.
    pub fn point(&self) -> ProjPoint {
        form_from_apolar(&self.g1, &self.g2, self.d)
    }

    /// Basis of `(g1, g2)_e` as coefficient vectors (monomials `g·S^{..}T^{..}`).
    pub fn degree_part(&self, e: usize) -> Vec<BinaryForm> {
        let mut out = Vec::new();
        for g in [&self.g1, &self.g2] {
            if g.degree() <= e {
                let k = e - g.degree();
                for i in 0..=k {
                    out.push(g.mul(&BinaryForm::monomial(k, i)));
                }
            }
        }
        out
    }
}

/// Computes `f^⊥` by scanning catalecticant kernels. `g1` is made monic for lex
/// with `S > T`; `g2` is reduced so no term is divisible by the leading term of
/// `g1`, then scaled to have last nonzero coefficient one.
pub fn apolar_ideal(f: &BinaryForm) -> Result<ApolarPair, FormError> {
    if f.is_zero() {
        return Err(FormError::ZeroForm);
    }
    let d = f.degree();
    let mut e = 1;
    let kern = loop {
        let k = annihilators(f, e);
        if !k.is_empty() {
            break k;
        }
        e += 1;
    };
    let d1 = e;
    if kern.len() >= 2 {
        // both generators live in this degree (d1 = d2); take the reduced echelon basis
        let rows: Vec<Vec<Rat>> = kern.iter().map(|g| g.coeffs.clone()).collect();
        let (r, _) = linalg::rref(&rows);
        debug_assert_eq!(r.len(), 2);
        let g2 = BinaryForm::new(linalg::normalize_last(&r[0]));
        let g1 = BinaryForm::new(r[1].clone());
        let g2 = reduce_mod(&g2, &g1);
        let g2 = BinaryForm::new(linalg::normalize_last(&g2.coeffs));
        return ApolarPair::new(g1, g2, d);
    }
    let g1 = kern[0].monic();
    let d2 = d + 2 - d1;
    let mut g2 = None;
    for cand in annihilators(f, d2) {
        let r = reduce_mod(&cand, &g1);
        if !r.is_zero() {
            g2 = Some(BinaryForm::new(linalg::normalize_last(&r.coeffs)));
            break;
        }
    }
    let g2 = g2.expect("complete intersection has a second generator");
    ApolarPair::new(g1, g2, d)
}

/// Removes from `g` every term divisible by the lex-leading term of `m`, using
/// multiples of `m` of the right degree.
pub fn reduce_mod(g: &BinaryForm, m: &BinaryForm) -> BinaryForm {
    let lead = m.lex_leading_index().expect("nonzero modulus");
    let (dg, dm) = (g.degree(), m.degree());
    if dm > dg {
        return g.clone();
    }
    let mut c = g.coeffs.clone();
    let lc = m.coeffs[lead].clone();
    for i in 0..=dg - dm {
        // m * x^{dg-dm-i} y^i has lex-leading index lead + i
        let idx = lead + i;
        if c[idx].is_zero() {
            continue;
        }
        let f = &c[idx] / &lc;
        for (j, x) in m.coeffs.iter().enumerate() {
            c[i + j] -= &f * x;
        }
    }
    BinaryForm::new(c)
}

/// The point `p` with `f_p^⊥ = (g1, g2)`: the orthogonal complement of
/// `(g1, g2)_d` under the apolarity pairing.
pub fn form_from_apolar(g1: &BinaryForm, g2: &BinaryForm, d: usize) -> ProjPoint {
    let pair = ApolarPair {
        g1: g1.clone(),
        g2: g2.clone(),
        d,
    };
    let rows: Vec<Vec<Rat>> = pair.degree_part(d).into_iter().map(|g| g.coeffs).collect();
    let k = linalg::kernel(&rows, d + 1);
    assert_eq!(k.len(), 1, "generators do not cut out a single point");
    ProjPoint {
        coords: linalg::normalize_first(&k[0]),
    }
}

pub fn rnc_rank(p: &ProjPoint) -> usize {
    apolar_ideal(&point_to_form(p)).expect("points are nonzero").d1()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplicityType {
    Triple,
    DoubleSimple,
    ThreeSimple,
}

impl fmt::Display for MultiplicityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MultiplicityType::Triple => "triple",
            MultiplicityType::DoubleSimple => "double-simple",
            MultiplicityType::ThreeSimple => "three-simple",
        })
    }
}

/// Root multiplicity pattern of a cubic `g1`, read off from the degree of the gcd
/// of its two partial derivatives.
pub fn multiplicity_type(pair: &ApolarPair) -> Result<MultiplicityType, FormError> {
    let g = &pair.g1;
    if g.degree() != 3 {
        return Err(FormError::NotRankThree(g.degree()));
    }
    let h = g.d_x().gcd(&g.d_y());
    Ok(match h.degree() {
        2 => MultiplicityType::Triple,
        1 => MultiplicityType::DoubleSimple,
        _ => MultiplicityType::ThreeSimple,
    })
}
