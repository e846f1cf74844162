//! Buchberger's algorithm over the rationals with the sugar selection strategy
//! and the Gebauer–Möller pair criteria.
//!
//! Every procedure here runs under explicit resource caps. Hitting a cap yields
//! [`GbError::Inconclusive`]; callers must treat that as "unknown".

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{same_ring, Monomial, MonomialOrder, Poly, PolyError, Rat, Ring, RingRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbCaps {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for GbCaps {
    fn default() -> Self {
        GbCaps {
            max_pairs: 200_000,
            max_degree: 30,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_considered: usize,
    pub pairs_reduced: usize,
    pub max_degree: u32,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    gens: Vec<Poly>,
    pub stats: GbStats,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn sugar_of(p: &Poly) -> u32 {
    p.total_degree().unwrap_or(0)
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    /// Reduced basis: monic, sorted by increasing leading monomial.
    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant() && !self.gens[0].is_zero()
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly, GbError> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(GbError::Poly(PolyError::RingMismatch));
        }
        Ok(reduce_full(f, &self.gens))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, GbError> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Full reduction of `f` modulo `gens`: no term of the result is divisible by a
/// leading monomial of `gens`.
pub fn reduce_full(f: &Poly, gens: &[Poly]) -> Poly {
    let ring = f.ring().clone();
    let order = ring.order();
    let leads: Vec<(&Monomial, &Rat)> = gens.iter().filter_map(|g| g.leading_term()).collect();
    let mut p = f.clone();
    let mut done = 0;
    loop {
        let terms = p.terms();
        let mut hit = None;
        for (k, (m, c)) in terms.iter().enumerate().skip(done) {
            if let Some(gi) = leads.iter().position(|(lm, _)| lm.divides(m)) {
                hit = Some((k, gi, m.clone(), c.clone()));
                break;
            }
        }
        let Some((k, gi, m, c)) = hit else {
            return p;
        };
        let (lm, lc) = leads[gi];
        let q = lm.quotient_of(&m).expect("divides");
        let factor = -(c / lc);
        let sub = gens_filtered(gens, gi).mul_term(&q, &factor);
        p = p.try_add(&sub).expect("same ring");
        // every term before position k is larger than m and untouched
        done = k;
        debug_assert!(p.terms()[..done].iter().all(|(t, _)| order.cmp(t, &m) == Ordering::Greater));
    }
}

fn gens_filtered(gens: &[Poly], lead_index: usize) -> &Poly {
    gens.iter().filter(|g| !g.is_zero()).nth(lead_index).expect("index of a nonzero generator")
}

/// S-polynomial of two nonzero polynomials.
pub fn s_poly(a: &Poly, b: &Poly) -> Poly {
    let (ma, ca) = a.leading_term().expect("nonzero");
    let (mb, cb) = b.leading_term().expect("nonzero");
    let l = ma.lcm(mb);
    let qa = ma.quotient_of(&l).expect("divides lcm");
    let qb = mb.quotient_of(&l).expect("divides lcm");
    let x = a.mul_term(&qa, &ca.recip());
    let y = b.mul_term(&qb, &cb.recip());
    &x - &y
}

pub fn buchberger(input: &[Poly], ring: &RingRef, caps: GbCaps) -> Result<GroebnerBasis, GbError> {
    buchberger_cancellable(input, ring, caps, None)
}

/// As [`buchberger`], polling `cancel` between pair reductions.
pub fn buchberger_cancellable(
    input: &[Poly],
    ring: &RingRef,
    caps: GbCaps,
    cancel: Option<&AtomicBool>,
) -> Result<GroebnerBasis, GbError> {
    for p in input {
        if !same_ring(p.ring(), ring) {
            return Err(GbError::Poly(PolyError::RingMismatch));
        }
    }
    let order = ring.order();
    let mut stats = GbStats::default();
    let mut polys: Vec<Poly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut seeds: Vec<Poly> = input.iter().filter(|p| !p.is_zero()).map(Poly::monic).collect();
    seeds.sort_by(|a, b| {
        order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.num_terms().cmp(&b.num_terms()))
    });
    for p in seeds {
        let current: Vec<Poly> = basis.iter().map(|&k| polys[k].clone()).collect();
        let h = reduce_full(&p, &current);
        if h.is_zero() {
            continue;
        }
        let s = sugar_of(&p);
        add_to_basis(h.monic(), s, &mut polys, &mut sugars, &mut basis, &mut pairs);
    }

    while !pairs.is_empty() {
        if cancel.is_some_and(|c| c.load(AtomicOrdering::Relaxed)) {
            return Err(GbError::Inconclusive("cancelled".into()));
        }
        let best = (0..pairs.len())
            .min_by(|&x, &y| {
                let (a, b) = (&pairs[x], &pairs[y]);
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        stats.pairs_considered += 1;
        if stats.pairs_considered > caps.max_pairs {
            return Err(GbError::Inconclusive(format!("more than {} S-pairs", caps.max_pairs)));
        }
        let deg = pair.lcm.degree();
        stats.max_degree = stats.max_degree.max(deg);
        if deg > caps.max_degree {
            return Err(GbError::Inconclusive(format!(
                "S-pair degree {deg} exceeds cap {}",
                caps.max_degree
            )));
        }
        let sp = s_poly(&polys[pair.i], &polys[pair.j]);
        let current: Vec<Poly> = basis.iter().map(|&k| polys[k].clone()).collect();
        let h = reduce_full(&sp, &current);
        if h.is_zero() {
            continue;
        }
        stats.pairs_reduced += 1;
        if h.is_constant() {
            let one = Poly::one(ring);
            return Ok(GroebnerBasis {
                ring: ring.clone(),
                gens: vec![one],
                stats,
            });
        }
        add_to_basis(h.monic(), pair.sugar, &mut polys, &mut sugars, &mut basis, &mut pairs);
    }

    let kept: Vec<Poly> = basis.iter().map(|&k| polys[k].clone()).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        gens: interreduce(kept, order),
        stats,
    })
}

/// Gebauer–Möller update: inserts `h` and prunes redundant pairs.
fn add_to_basis(
    h: Poly,
    sugar: u32,
    polys: &mut Vec<Poly>,
    sugars: &mut Vec<u32>,
    basis: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
) {
    if h.is_constant() {
        polys.push(h);
        sugars.push(sugar);
        basis.clear();
        basis.push(polys.len() - 1);
        pairs.clear();
        return;
    }
    let hi = polys.len();
    let hm = h.leading_monomial().expect("nonzero").clone();
    polys.push(h);
    sugars.push(sugar);

    let new_pair = |g: usize, polys: &Vec<Poly>, sugars: &Vec<u32>| {
        let gm = polys[g].leading_monomial().expect("nonzero");
        let lcm = gm.lcm(&hm);
        // sugar of the S-polynomial: max over both sides of sugar - deg(lead) + deg(lcm)
        let s = (sugars[g] + lcm.degree() - gm.degree()).max(sugar + lcm.degree() - hm.degree());
        Pair {
            i: g,
            j: hi,
            lcm,
            sugar: s,
        }
    };

    let candidates: Vec<Pair> = basis.iter().map(|&g| new_pair(g, polys, sugars)).collect();
    let coprime = |p: &Pair| polys[p.i].leading_monomial().unwrap().is_coprime(&hm);

    // chain criterion among the new pairs
    let mut kept: Vec<usize> = Vec::new();
    for (a, pa) in candidates.iter().enumerate() {
        if coprime(pa) {
            kept.push(a);
            continue;
        }
        let dominated = candidates.iter().enumerate().any(|(b, pb)| {
            b != a && pb.lcm.divides(&pa.lcm) && (pb.lcm != pa.lcm || (coprime(pb) || b < a))
        });
        if !dominated {
            kept.push(a);
        }
    }
    let new_pairs: Vec<&Pair> = kept
        .iter()
        .map(|&a| &candidates[a])
        .filter(|p| !coprime(p))
        .collect();

    // old pairs whose lcm is strictly divisible through h
    pairs.retain(|p| {
        if !hm.divides(&p.lcm) {
            return true;
        }
        let li = polys[p.i].leading_monomial().unwrap().lcm(&hm);
        let lj = polys[p.j].leading_monomial().unwrap().lcm(&hm);
        li == p.lcm || lj == p.lcm
    });
    for p in new_pairs {
        pairs.push(Pair {
            i: p.i,
            j: p.j,
            lcm: p.lcm.clone(),
            sugar: p.sugar,
        });
    }
    basis.retain(|&g| !hm.divides(polys[g].leading_monomial().unwrap()));
    basis.push(hi);
}

/// Minimal, fully reduced, monic basis sorted by increasing leading monomial.
fn interreduce(gens: Vec<Poly>, order: MonomialOrder) -> Vec<Poly> {
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = gens.iter().enumerate().any(|(j, h)| {
            let hm = h.leading_monomial().unwrap();
            j != i && hm.divides(lm) && (hm != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<Poly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        out.push(reduce_full(&minimal[i], &others).monic());
    }
    out.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    out
}

/// Generators of `I ∩ K[x_k, ..., x_n]` where the first `k` variables of the ring
/// are eliminated. The result lives in a ring with the remaining variables and
/// degree-reverse-lexicographic order.
pub fn eliminate(input: &[Poly], k: usize, caps: GbCaps) -> Result<(GroebnerBasis, Vec<Poly>, RingRef), GbError> {
    let ring = input
        .first()
        .map(|p| p.ring().clone())
        .ok_or_else(|| GbError::Inconclusive("empty ideal".into()))?;
    let elim_ring = ring.with_order(MonomialOrder::Elim(k))?;
    let moved: Vec<Poly> = input.iter().map(|p| p.to_ring(&elim_ring)).collect::<Result<_, _>>()?;
    let gb = buchberger(&moved, &elim_ring, caps)?;
    let sub = Ring::new(ring.vars()[k..].iter().cloned(), MonomialOrder::DegRevLex)?;
    let kept: Vec<Poly> = gb
        .gens()
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[..k].iter().all(|&e| e == 0)))
        .map(|g| g.to_ring(&sub))
        .collect::<Result<_, _>>()?;
    Ok((gb, kept, sub))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "result", content = "detail")]
pub enum Membership {
    Member,
    NotMember,
    Inconclusive(String),
}

/// Decides `l ∈ √I` by checking whether `I + (1 - w l)` is the unit ideal.
pub fn radical_membership(l: &Poly, ideal: &[Poly], caps: GbCaps) -> Result<Membership, PolyError> {
    radical_membership_cancellable(l, ideal, caps, None)
}

pub fn radical_membership_cancellable(
    l: &Poly,
    ideal: &[Poly],
    caps: GbCaps,
    cancel: Option<&AtomicBool>,
) -> Result<Membership, PolyError> {
    radical_membership_with_stats(l, ideal, caps, cancel).map(|(m, _)| m)
}

/// [`radical_membership_cancellable`] that also reports the Buchberger run's
/// statistics (zero when the run was cut short).
pub fn radical_membership_with_stats(
    l: &Poly,
    ideal: &[Poly],
    caps: GbCaps,
    cancel: Option<&AtomicBool>,
) -> Result<(Membership, GbStats), PolyError> {
    if l.is_zero() {
        return Err(PolyError::Parse("zero candidate".into()));
    }
    let base = l.ring();
    let mut name = String::from("w");
    while base.index_of(&name).is_some() {
        name.push('_');
    }
    let mut vars: Vec<String> = base.vars().to_vec();
    vars.push(name.clone());
    let ext = Ring::new(vars, MonomialOrder::DegRevLex)?;
    let mut gens: Vec<Poly> = ideal.iter().map(|g| g.to_ring(&ext)).collect::<Result<_, _>>()?;
    let w = Poly::var_named(&ext, &name)?;
    let lw = &l.to_ring(&ext)? * &w;
    gens.push(&Poly::one(&ext) - &lw);
    match buchberger_cancellable(&gens, &ext, caps, cancel) {
        Ok(gb) => {
            let m = if gb.is_unit() {
                Membership::Member
            } else {
                Membership::NotMember
            };
            Ok((m, gb.stats.clone()))
        }
        Err(GbError::Inconclusive(why)) => Ok((Membership::Inconclusive(why), GbStats::default())),
        Err(GbError::Poly(e)) => Err(e),
    }
}

/// Smallest `N <= n_max` with `l^N ∈ I`, using one Gröbner basis of `I`.
pub fn power_membership(l: &Poly, ideal: &[Poly], n_max: u32, caps: GbCaps) -> Result<Option<u32>, GbError> {
    let ring = l.ring().with_order(MonomialOrder::DegRevLex)?;
    let gens: Vec<Poly> = ideal.iter().map(|g| g.to_ring(&ring)).collect::<Result<_, _>>()?;
    let gb = buchberger(&gens, &ring, caps)?;
    let l = l.to_ring(&ring)?;
    let mut power = Poly::one(&ring);
    for n in 1..=n_max {
        power = gb.normal_form(&(&power * &l))?;
        if power.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `true` if every generator of `b` reduces to zero modulo a basis of `a`.
pub fn ideal_contains(gb: &GroebnerBasis, b: &[Poly]) -> Result<bool, GbError> {
    for g in b {
        if !gb.contains(&g.to_ring(gb.ring())?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> RingRef {
        Ring::indexed("x", n, MonomialOrder::DegRevLex)
    }

    fn polys(texts: &[&str], r: &RingRef) -> Vec<Poly> {
        texts.iter().map(|t| Poly::parse(t, r).unwrap()).collect()
    }

    /// 2x2 minors of the 2 x d Hankel matrix.
    fn rnc(d: usize, r: &RingRef) -> Vec<Poly> {
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let a = &Poly::var(r, i) * &Poly::var(r, j + 1);
                let b = &Poly::var(r, i + 1) * &Poly::var(r, j);
                out.push(&a - &b);
            }
        }
        out
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let r = ring(3);
        let g = polys(&["x0*x2 - x1^2"], &r);
        let gb = buchberger(&g, &r, GbCaps::default()).unwrap();
        assert_eq!(gb.gens(), &[Poly::parse("x1^2 - x0*x2", &r).unwrap()]);
    }

    #[test]
    fn quartic_curve_minors_form_a_basis() {
        let r = ring(5);
        let g = rnc(4, &r);
        let gb = buchberger(&g, &r, GbCaps::default()).unwrap();
        assert_eq!(gb.gens().len(), 6);
        for p in &g {
            assert!(gb.contains(p).unwrap());
        }
        // idempotence
        let again = buchberger(gb.gens(), &r, GbCaps::default()).unwrap();
        assert_eq!(again.gens(), gb.gens());
    }

    #[test]
    fn index_five_binomial_in_quintic_curve() {
        let r = ring(6);
        let gb = buchberger(&rnc(5, &r), &r, GbCaps::default()).unwrap();
        assert!(gb.contains(&Poly::parse("x0*x5 - x2*x3", &r).unwrap()).unwrap());
        assert!(!gb.contains(&Poly::parse("x0*x5 - x2^2", &r).unwrap()).unwrap());
    }

    #[test]
    fn eliminating_a_middle_coordinate_of_the_quintic() {
        // put x2 first so that it is the eliminated variable
        let r = Ring::new(["x2", "x0", "x1", "x3", "x4", "x5"], MonomialOrder::DegRevLex).unwrap();
        let std = ring(6);
        let g: Vec<Poly> = rnc(5, &std).iter().map(|p| p.to_ring(&r).unwrap()).collect();
        let (_, kept, sub) = eliminate(&g, 1, GbCaps::default()).unwrap();
        let quadrics: Vec<&Poly> = kept.iter().filter(|p| p.total_degree() == Some(2)).collect();
        assert_eq!(quadrics.len(), 4);
        let expected = polys(&["x4^2 - x3*x5", "x1*x4 - x0*x5", "x3^2 - x1*x5", "x1*x3 - x0*x4"], &sub);
        let gb = buchberger(&kept, &sub, GbCaps::default()).unwrap();
        for e in &expected {
            assert!(gb.contains(e).unwrap());
        }
        let expected_gb = buchberger(&expected, &sub, GbCaps::default()).unwrap();
        for q in &quadrics {
            assert!(expected_gb.contains(q).unwrap());
        }
    }

    #[test]
    fn rabinowitsch_basics() {
        let r = ring(2);
        let unit = polys(&["1"], &r);
        let x0 = Poly::var(&r, 0);
        assert_eq!(radical_membership(&x0, &unit, GbCaps::default()).unwrap(), Membership::Member);
        let sq = polys(&["x0^3"], &r);
        assert_eq!(radical_membership(&x0, &sq, GbCaps::default()).unwrap(), Membership::Member);
        assert_eq!(
            radical_membership(&Poly::var(&r, 1), &sq, GbCaps::default()).unwrap(),
            Membership::NotMember
        );
        assert_eq!(power_membership(&x0, &sq, 5, GbCaps::default()).unwrap(), Some(3));
        let f = polys(&["x0*x1 + x1^2"], &r);
        assert_eq!(power_membership(&f[0], &f, 1, GbCaps::default()).unwrap(), Some(1));
    }

    #[test]
    fn caps_are_reported() {
        let r = ring(6);
        let caps = GbCaps {
            max_pairs: 2,
            max_degree: 30,
        };
        match buchberger(&rnc(5, &r), &r, caps) {
            Err(GbError::Inconclusive(_)) => {}
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }
}
