//! Exact multivariate polynomials over the rationals.
//!
//! A [`Poly`] keeps its terms sorted in decreasing order for the monomial order
//! of its [`Ring`], with no zero coefficients stored. Two polynomials built in
//! different ways compare equal exactly when they are equal as polynomials.

mod parse;
mod ring;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use ring::{Monomial, MonomialOrder, Ring, RingRef};

pub(crate) use ring::same_ring;

/// Arbitrary precision rational, always kept in lowest terms with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/2"` style rationals.
pub fn parse_rat(text: &str) -> Result<Rat, PolyError> {
    let text = text.trim();
    let bad = || PolyError::Parse(format!("bad rational `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<(Monomial, Rat)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &RingRef) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn constant(ring: &RingRef, c: Rat) -> Self {
        Self::monomial(ring, Monomial::one(ring.arity()), c)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.arity(), i), Rat::one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Rat) -> Self {
        debug_assert_eq!(m.arity(), ring.arity());
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), ring.arity(), "monomial arity does not match ring");
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &RingRef, acc: HashMap<Monomial, Rat>) -> Self {
        let order = ring.order();
        let mut terms: Vec<(Monomial, Rat)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(text: &str, ring: &RingRef) -> Result<Self, PolyError> {
        parse::parse_poly(text, ring)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.arity())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                std::cmp::Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(PolyError::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c * m * self`; order is preserved since monomial orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Scales so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ring.arity());
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Simultaneous substitution. Variables without an assignment are sent to the
    /// variable of the same name in `target`.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Poly>, target: &RingRef) -> Result<Poly, PolyError> {
        for p in assignment.values() {
            if !same_ring(p.ring(), target) {
                return Err(PolyError::RingMismatch);
            }
        }
        let mut images: Vec<Poly> = Vec::with_capacity(self.ring.arity());
        for i in 0..self.ring.arity() {
            match assignment.get(&i) {
                Some(p) => images.push(p.clone()),
                None => {
                    let name = self.ring.var_name(i);
                    images.push(Poly::var_named(target, name)?);
                }
            }
        }
        // powers are cached per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                term = &term * &powers[v][e as usize];
            }
            for (tm, tc) in term.terms {
                *acc.entry(tm).or_insert_with(Rat::zero) += tc;
            }
        }
        Ok(Poly::from_map(target, acc))
    }

    /// Convenience wrapper over [`Poly::substitute`] keyed by variable name.
    pub fn substitute_named(&self, assignment: &[(&str, Poly)], target: &RingRef) -> Result<Poly, PolyError> {
        let mut map = BTreeMap::new();
        for (name, p) in assignment {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            map.insert(i, p.clone());
        }
        self.substitute(&map, target)
    }

    /// Moves the polynomial into another ring, matching variables by name.
    pub fn to_ring(&self, target: &RingRef) -> Result<Poly, PolyError> {
        let mut idx = Vec::with_capacity(self.ring.arity());
        for (i, name) in self.ring.vars().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => idx.push(Some(j)),
                None => {
                    if self.terms.iter().any(|(m, _)| m.0[i] > 0) {
                        return Err(PolyError::UnknownVariable(name.clone()));
                    }
                    idx.push(None);
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.arity()];
            for (i, &x) in m.0.iter().enumerate() {
                if let Some(j) = idx[i] {
                    e[j] = x;
                }
            }
            (Monomial(e), c.clone())
        });
        Ok(Poly::from_terms(target, terms))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c * Rat::from_integer(BigInt::from(k)))
        });
        Poly::from_terms(&self.ring, terms)
    }

    /// Multiplies through by the lcm of denominators and divides by the content,
    /// with a positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let v = (c * Rat::from_integer(l.clone())).to_integer();
            g = g.gcd(&v);
        }
        let mut factor = Rat::new(l, g);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch in Poly addition")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.try_sub(rhs).expect("ring mismatch in Poly subtraction")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch in Poly multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.var_name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.var_name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rat(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> RingRef {
        Ring::indexed("x", n, MonomialOrder::DegRevLex)
    }

    fn p(text: &str, r: &RingRef) -> Poly {
        Poly::parse(text, r).unwrap()
    }

    #[test]
    fn additive_inverse_and_identity() {
        let r = ring(5);
        let a = p("x0*x2 - x1^2", &r);
        let b = p("x1^2 - x0*x2", &r);
        assert!((&a + &b).is_zero());
        assert_eq!(&a + &Poly::zero(&r), a);
    }

    #[test]
    fn sum_of_index_generators() {
        let r = ring(5);
        let a = p("x0*x4 - x2^2", &r);
        let b = p("x2^2 - x1*x3", &r);
        assert_eq!(&a + &b, p("x0*x4 - x1*x3", &r));
    }

    #[test]
    fn products() {
        let r = Ring::new(["s", "t"], MonomialOrder::Lex).unwrap();
        assert_eq!(p("(s+t)*(s-t)", &r), p("s^2 - t^2", &r));
        let q = p("3/2*s^3 - t", &r);
        assert_eq!(&q * &Poly::one(&r), q);
        let r2 = Ring::new(["S", "T"], MonomialOrder::Lex).unwrap();
        assert_eq!(p("(S^2-T^2)*(S^2+T^2)", &r2), p("S^4 - T^4", &r2));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Poly::var(&ring(2), 0);
        let b = Poly::var(&ring(3), 0);
        assert_eq!(a.try_add(&b), Err(PolyError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn substitution_of_transformed_catalecticant_entry() {
        let rx = ring(4);
        let ry = Ring::indexed("y", 4, MonomialOrder::DegRevLex);
        let q = p("x0*x3 - x1*x2", &rx);
        let y = |s: &str| p(s, &ry);
        let out = q
            .substitute_named(
                &[("x0", y("y0")), ("x1", y("y1")), ("x2", y("y2 + y0")), ("x3", y("y3 + y1"))],
                &ry,
            )
            .unwrap();
        assert_eq!(out, y("y0*y3 - y1*y2"));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let r = ring(3);
        let q = p("x0^2*x1 - 7/3*x2", &r);
        assert_eq!(q.substitute(&BTreeMap::new(), &r).unwrap(), q);
    }

    #[test]
    fn binomial_expansion_by_substitution() {
        let r = Ring::new(["s", "t", "al", "be"], MonomialOrder::DegRevLex).unwrap();
        for d in 0..7u32 {
            let sd = Poly::var(&r, 0).pow(d);
            let image = p("al*s + be*t", &r);
            let got = sd.substitute_named(&[("s", image)], &r).unwrap();
            // binomial theorem oracle
            let mut terms = Vec::new();
            let mut binom = BigInt::one();
            for i in 0..=d {
                terms.push((
                    Monomial::from_exponents(vec![d - i, i, d - i, i]),
                    Rat::from_integer(binom.clone()),
                ));
                binom = binom * BigInt::from(d - i) / BigInt::from(i + 1);
            }
            assert_eq!(got, Poly::from_terms(&r, terms));
        }
    }

    #[test]
    fn display_round_trips() {
        let r = ring(4);
        let q = p("3/2*x0^2*x3 - x1*x2 + 5", &r);
        assert_eq!(p(&q.to_string(), &r), q);
        assert_eq!(q.to_string(), "3/2*x0^2*x3 - x1*x2 + 5");
    }

    #[test]
    fn primitive_part() {
        let r = ring(2);
        assert_eq!(p("-2/3*x0 + 4/9*x1", &r).primitive(), p("3*x0 - 2*x1", &r));
    }
}
