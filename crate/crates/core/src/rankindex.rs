//! Deciding QR(k) with replayable certificates, bounds on δ(X, t), the rank
//! index, and sampled scans over projection centers.
//!
//! A positive answer is a spanning set of `I₂` made of quadrics of rank at most
//! `k`. A negative answer is a list of independent linear forms in the
//! coefficients `a_i` of the generic quadric `Σ a_i q_i`, each lying in the
//! radical of the ideal of its `(k+1)`-minors modulo the earlier forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binform::{multiplicity_type, rnc_rank, ApolarPair, BinaryForm, ProjPoint};
use crate::curvegen::{pull_back, CurveError, SchemeSpec, Target};
use crate::exec::Exec;
use crate::groebner::{GbCaps, Membership};
use crate::linalg::{self, Matrix};
use crate::poly::{format_rat, int, parse_rat, Poly, Rat};
use crate::qmap::{rank3_harvest_cancellable, Harvest, HarvestConfig, HarvestItem, Witness};
use crate::quadrics::{
    linear_poly, quad_rank, quadric_from_vector, quadric_vector, replay_hit, triangular_sieve_cancellable,
    GenericSymMatrix, LinearReducer, SieveConfig, SieveHit,
};

pub const CERT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("unknown budget profile `{0}` (expected quick, paper or exhaustive)")]
    Profile(String),
    #[error("rank bound must be at least 1, got {0}")]
    RankBound(usize),
    #[error("consistency failure: both a spanning set and an obstruction were found for k={0}")]
    Consistency(usize),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Paper,
    Exhaustive,
}

impl Profile {
    pub fn parse(text: &str) -> Result<Self, RankError> {
        match text.trim() {
            "quick" => Ok(Profile::Quick),
            "paper" => Ok(Profile::Paper),
            "exhaustive" => Ok(Profile::Exhaustive),
            other => Err(RankError::Profile(other.to_string())),
        }
    }

    /// Reads `AMC_BUDGET_PROFILE`, defaulting to `paper` when it is unset.
    pub fn from_env() -> Result<Self, RankError> {
        match std::env::var("AMC_BUDGET_PROFILE") {
            Ok(v) if !v.trim().is_empty() => Profile::parse(&v),
            _ => Ok(Profile::Paper),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Paper => "paper",
            Profile::Exhaustive => "exhaustive",
        })
    }
}

/// Limits for the searches behind [`certify_qr`], [`delta`] and [`rank_index`].
#[derive(Clone, Debug)]
pub struct Budget {
    pub profile: Profile,
    pub harvest_samples: usize,
    pub sieve: SieveConfig,
    /// Also run the sieve after reparametrizations sending linear factors of
    /// `g₁` to a coordinate point.
    pub frames: bool,
    /// Radical-membership candidates tried when the sieve finds nothing.
    pub rabinowitsch_candidates: usize,
    /// Skip radical-membership tests when `dim I₂` exceeds this.
    pub rabinowitsch_max_vars: usize,
    pub gb_caps: GbCaps,
    pub seed: u64,
    pub exec: Exec,
}

impl Budget {
    pub fn for_profile(profile: Profile) -> Self {
        let base = Budget {
            profile,
            harvest_samples: 5000,
            sieve: SieveConfig::default(),
            frames: true,
            rabinowitsch_candidates: 500,
            rabinowitsch_max_vars: 8,
            gb_caps: GbCaps {
                max_pairs: 3000,
                max_degree: 12,
            },
            seed: 0,
            exec: Exec::default(),
        };
        match profile {
            Profile::Paper => base,
            Profile::Quick => Budget {
                harvest_samples: 1000,
                sieve: SieveConfig {
                    max_distinct: 6,
                    max_candidates: 20_000,
                },
                rabinowitsch_candidates: 0,
                ..base
            },
            Profile::Exhaustive => Budget {
                harvest_samples: 50_000,
                sieve: SieveConfig {
                    max_distinct: 8,
                    max_candidates: 2_000_000,
                },
                rabinowitsch_max_vars: 30,
                gb_caps: GbCaps::default(),
                ..base
            },
        }
    }

    pub fn from_env() -> Result<Self, RankError> {
        Ok(Budget::for_profile(Profile::from_env()?))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn harvest_config(&self) -> HarvestConfig {
        HarvestConfig {
            max_samples: self.harvest_samples,
            seed: self.seed,
            exec: self.exec,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::for_profile(Profile::Paper)
    }
}

// ---------------------------------------------------------------------------
// JSON shapes. Rationals travel as strings such as "-3/2".

fn rats_out(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn rats_in(v: &[String]) -> Result<Vec<Rat>, RankError> {
    v.iter()
        .map(|s| parse_rat(s).map_err(|e| RankError::Malformed(e.to_string())))
        .collect()
}

fn matrix_out(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| rats_out(r)).collect()
}

fn matrix_in(m: &[Vec<String>]) -> Result<Matrix, RankError> {
    m.iter().map(|r| rats_in(r)).collect()
}

fn malformed(msg: impl Into<String>) -> RankError {
    RankError::Malformed(msg.into())
}

/// How a quadric's rank bound is exhibited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WitnessJson {
    /// No factorization stored; the verifier computes the rank directly.
    Rank,
    /// `l0 l2 - l1²`
    Square { forms: Vec<Vec<String>> },
    /// `l0 l1 - l2 l3`
    Pencil { forms: Vec<Vec<String>> },
    /// The rational part `part` of `L0 L2 - L1²` with `L_i = A_i + √δ B_i`.
    Conjugate {
        delta: String,
        parts: Vec<[Vec<String>; 2]>,
        part: usize,
    },
}

impl WitnessJson {
    fn from_witness(w: Option<&Witness>) -> Self {
        match w {
            None => WitnessJson::Rank,
            Some(Witness::Square(f)) => WitnessJson::Square {
                forms: f.iter().map(|l| rats_out(l)).collect(),
            },
            Some(Witness::Pencil(f)) => WitnessJson::Pencil {
                forms: f.iter().map(|l| rats_out(l)).collect(),
            },
            Some(Witness::Conjugate { delta, parts, part }) => WitnessJson::Conjugate {
                delta: format_rat(delta),
                parts: parts.iter().map(|[a, b]| [rats_out(a), rats_out(b)]).collect(),
                part: *part,
            },
        }
    }

    fn to_witness(&self, n: usize) -> Result<Option<Witness>, RankError> {
        let forms = |f: &[Vec<String>], count: usize| -> Result<Vec<Vec<Rat>>, RankError> {
            if f.len() != count {
                return Err(malformed(format!("expected {count} linear forms")));
            }
            let out: Vec<Vec<Rat>> = f.iter().map(|l| rats_in(l)).collect::<Result<_, _>>()?;
            if out.iter().any(|l| l.len() != n) {
                return Err(malformed("linear form of the wrong length"));
            }
            Ok(out)
        };
        Ok(match self {
            WitnessJson::Rank => None,
            WitnessJson::Square { forms: f } => {
                let [a, b, c]: [Vec<Rat>; 3] = forms(f, 3)?.try_into().expect("length checked");
                Some(Witness::Square([a, b, c]))
            }
            WitnessJson::Pencil { forms: f } => {
                let [a, b, c, e]: [Vec<Rat>; 4] = forms(f, 4)?.try_into().expect("length checked");
                Some(Witness::Pencil([a, b, c, e]))
            }
            WitnessJson::Conjugate { delta, parts, part } => {
                if parts.len() != 3 || *part > 1 {
                    return Err(malformed("conjugate witness needs three parts and part 0 or 1"));
                }
                let flat: Vec<Vec<String>> = parts.iter().flat_map(|[a, b]| [a.clone(), b.clone()]).collect();
                let mut ls = forms(&flat, 6)?.into_iter();
                let mut next = || ls.next().expect("length checked");
                let parts = [[next(), next()], [next(), next()], [next(), next()]];
                let delta = parse_rat(delta).map_err(|e| malformed(e.to_string()))?;
                if delta.is_zero() {
                    return Err(malformed("δ must be nonzero"));
                }
                Some(Witness::Conjugate {
                    delta,
                    parts,
                    part: *part,
                })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertQuadric {
    /// Coefficients against the monomials `z_i z_j`, `i <= j`, in lex order.
    pub coeffs: Vec<String>,
    pub witness: WitnessJson,
}

/// QR(k) holds: `quadrics` are of rank at most `k` and `basis_matrix · Q` is the
/// target's basis of `I₂`, where `Q` stacks the quadrics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrCertificate {
    pub cert_version: u32,
    pub scheme: String,
    pub k: usize,
    pub dim_i2: usize,
    pub quadrics: Vec<CertQuadric>,
    pub basis_matrix: Vec<Vec<String>>,
}

/// A reparametrization `(S, T) ↦ σ(S, T)` and the induced change of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub sigma: [[String; 2]; 2],
    /// `z = A z'` between the original and reparametrized coordinates.
    pub matrix: Vec<Vec<String>>,
    /// Row `i` holds the coordinates of the pulled-back basis quadric `i`
    /// against the basis of the reparametrized target.
    pub basis_change: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ObstructionWitness {
    /// `det M'[rows, cols] ≡ scalar · λ^exponent` modulo the earlier forms, where
    /// `M'` is the generic quadric of the frame's own basis and `λ = C⁻¹ ℓ` for
    /// its basis change `C`.
    Minor {
        frame: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        exponent: u32,
        scalar: String,
    },
    /// `1 ∈ I(k+1, M) + ⟨earlier forms⟩ + (1 - wℓ)`, with the number of
    /// S-pairs the deterministic Buchberger run examined.
    Rabinowitsch { pairs_considered: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionForm {
    /// Coefficients of `ℓ` in the variables `a_0..a_t`.
    pub form: Vec<String>,
    pub witness: ObstructionWitness,
}

/// QR(k) fails: every listed form lies in the radical of the ideal of
/// `(k+1)`-minors of the generic quadric of `I₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub cert_version: u32,
    pub scheme: String,
    pub k: usize,
    pub dim_i2: usize,
    pub frames: Vec<Frame>,
    pub forms: Vec<ObstructionForm>,
}

/// Partial results when neither search settles QR(k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partial {
    pub scheme: String,
    pub k: usize,
    pub dim_i2: usize,
    pub quadrics: Vec<CertQuadric>,
    pub harvest_samples: usize,
    /// A search stopped on a hard cap rather than running out of candidates.
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum QrOutcome {
    Holds(QrCertificate),
    Fails(ObstructionCertificate),
    Inconclusive(Partial),
}

impl QrOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            QrOutcome::Holds(_) => "holds",
            QrOutcome::Fails(_) => "fails",
            QrOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Either certificate kind, as read back from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Qr(QrCertificate),
    Obstruction(ObstructionCertificate),
}

impl Certificate {
    pub fn verify(&self) -> Result<(), String> {
        match self {
            Certificate::Qr(c) => verify_qr(c),
            Certificate::Obstruction(c) => verify_obstruction(c),
        }
    }
}

// ---------------------------------------------------------------------------
// Searches

fn is_identity(sigma: &[[Rat; 2]; 2]) -> bool {
    sigma[0][0].is_one() && sigma[1][1].is_one() && sigma[0][1].is_zero() && sigma[1][0].is_zero()
}

fn identity_sigma() -> [[Rat; 2]; 2] {
    [[int(1), int(0)], [int(0), int(1)]]
}

/// Reparametrizations to try: the identity, then for each rational linear
/// factor `pS + qT` of `g₁` one sending it to `T` and one sending it to `S`.
fn candidate_sigmas(target: &Target) -> Vec<[[Rat; 2]; 2]> {
    let mut out = vec![identity_sigma()];
    let Some(pair) = &target.pair else { return out };
    for (l, _) in pair.g1.rational_linear_factors() {
        let (p, q) = (l.coeff(0).clone(), l.coeff(1).clone());
        if !p.is_zero() {
            out.push([[q.clone(), int(1)], [-p.clone(), int(0)]]);
        }
        if !q.is_zero() {
            out.push([[int(0), q.clone()], [int(1), -p.clone()]]);
        }
    }
    let mut seen: Vec<[[Rat; 2]; 2]> = Vec::new();
    out.retain(|s| {
        let fresh = !seen.contains(s);
        seen.push(s.clone());
        fresh
    });
    out
}

/// A frame in which the sieve runs. With `P_i = q_i(A z')` and `B'` the
/// basis of the reparametrized target, `P = C B'`, so the generic quadric
/// `Σ aᵢ Pᵢ` is `Σ bⱼ B'ⱼ` with `b = Cᵀ a`. A form `λ·b` is `(C λ)·a`.
struct FrameData {
    a: Matrix,
    change: Matrix,
    inverse: Matrix,
    mat: GenericSymMatrix,
}

impl FrameData {
    fn to_frame(&self, v: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec(&self.inverse, v)
    }

    fn out_of_frame(&self, v: &[Rat]) -> Vec<Rat> {
        linalg::mat_vec(&self.change, v)
    }
}

fn frame_data(target: &Target, sigma: &[[Rat; 2]; 2]) -> Option<FrameData> {
    if is_identity(sigma) {
        let t = target.dim_i2();
        return Some(FrameData {
            a: linalg::identity(target.ring.arity()),
            change: linalg::identity(t),
            inverse: linalg::identity(t),
            mat: GenericSymMatrix::from_basis(&target.basis).ok()?,
        });
    }
    let (other, a) = target.moved(sigma)?;
    if other.dim_i2() != target.dim_i2() {
        return None;
    }
    let change = target
        .basis
        .iter()
        .map(|q| other.coordinates(&pull_back(q, &a, &other.ring).ok()?))
        .collect::<Option<Matrix>>()?;
    let inverse = linalg::inverse(&change)?;
    let mat = GenericSymMatrix::from_basis(&other.basis).ok()?;
    Some(FrameData { a, change, inverse, mat })
}

struct Obstructions {
    frames: Vec<([[Rat; 2]; 2], FrameData)>,
    forms: Vec<(Vec<Rat>, ObstructionWitness)>,
    capped: bool,
}

impl Obstructions {
    fn certificate(&self, target: &Target, k: usize) -> ObstructionCertificate {
        ObstructionCertificate {
            cert_version: CERT_VERSION,
            scheme: target.spec.to_string(),
            k,
            dim_i2: target.dim_i2(),
            frames: self
                .frames
                .iter()
                .map(|(s, f)| Frame {
                    sigma: [[format_rat(&s[0][0]), format_rat(&s[0][1])], [format_rat(&s[1][0]), format_rat(&s[1][1])]],
                    matrix: matrix_out(&f.a),
                    basis_change: matrix_out(&f.change),
                })
                .collect(),
            forms: self
                .forms
                .iter()
                .map(|(f, w)| ObstructionForm {
                    form: rats_out(f),
                    witness: w.clone(),
                })
                .collect(),
        }
    }
}

fn minors_ideal(m: &GenericSymMatrix, size: usize, earlier: &[Vec<Rat>]) -> Vec<Poly> {
    let plain = LinearReducer::new(m.num_coeffs());
    let subsets = crate::quadrics::k_subsets(m.size(), size);
    let mut gens = Vec::new();
    for (i, r) in subsets.iter().enumerate() {
        for c in &subsets[i..] {
            let det = m.minor(r, c, &plain);
            if !det.is_zero() {
                gens.push(det);
            }
        }
    }
    gens.extend(earlier.iter().map(|l| linear_poly(m.coeff_ring(), l)));
    gens
}

/// Radical-membership candidates: the coefficient variables, then their
/// pairwise sums and differences.
fn rabinowitsch_candidates(t: usize, cap: usize) -> Vec<Vec<Rat>> {
    let unit = |i: usize| {
        let mut v = vec![Rat::zero(); t];
        v[i] = Rat::one();
        v
    };
    let mut out: Vec<Vec<Rat>> = (0..t).map(unit).collect();
    for i in 0..t {
        for j in i + 1..t {
            for sign in [1, -1] {
                let mut v = unit(i);
                v[j] = int(sign);
                out.push(v);
            }
        }
    }
    out.truncate(cap);
    out
}

fn obstruction_search(target: &Target, k: usize, budget: &Budget, cancel: Option<&AtomicBool>) -> Obstructions {
    let cancelled = || cancel.is_some_and(|c| c.load(Ordering::Relaxed));
    let mut out = Obstructions {
        frames: Vec::new(),
        forms: Vec::new(),
        capped: false,
    };
    let n = target.ring.arity();
    if k + 1 > n || target.basis.is_empty() {
        return out;
    }
    let sigmas = if budget.frames {
        candidate_sigmas(target)
    } else {
        vec![identity_sigma()]
    };
    let uncapped = SieveConfig {
        max_candidates: usize::MAX,
        ..budget.sieve.clone()
    };
    out.capped = crate::quadrics::sieve_candidates(n, k + 1, &uncapped).len() > budget.sieve.max_candidates;
    let mut known: Vec<Vec<Rat>> = Vec::new();
    for sigma in sigmas {
        if cancelled() {
            break;
        }
        let Some(fd) = frame_data(target, &sigma) else { continue };
        let local: Vec<Vec<Rat>> = known.iter().map(|v| fd.to_frame(v)).collect();
        let Ok(hits) = triangular_sieve_cancellable(&fd.mat, k, &local, &budget.sieve, budget.exec, cancel) else {
            continue;
        };
        if hits.is_empty() {
            continue;
        }
        let frame = out.frames.len();
        let mut found = Vec::new();
        for h in hits {
            // the canonical representative modulo the earlier forms
            let form = LinearReducer::from_forms(target.dim_i2(), &known).reduce(&fd.out_of_frame(&h.form));
            known.push(form.clone());
            found.push((
                form,
                ObstructionWitness::Minor {
                    frame,
                    rows: h.rows,
                    cols: h.cols,
                    exponent: h.exponent,
                    scalar: format_rat(&h.scalar),
                },
            ));
        }
        out.frames.push((sigma, fd));
        out.forms.extend(found);
    }
    out
}

/// Radical-membership fallback for when the sieve found nothing: unit vectors
/// and `±` pairs of them, tested with a capped Buchberger run each.
fn rabinowitsch_search(target: &Target, k: usize, budget: &Budget, out: &mut Obstructions) {
    let t = target.dim_i2();
    if !out.forms.is_empty() || budget.rabinowitsch_candidates == 0 || t > budget.rabinowitsch_max_vars || k + 1 > target.ring.arity() {
        return;
    }
    let Ok(m) = GenericSymMatrix::from_basis(&target.basis) else { return };
    let ideal = minors_ideal(&m, k + 1, &[]);
    let mut known: Vec<Vec<Rat>> = Vec::new();
    for cand in rabinowitsch_candidates(t, budget.rabinowitsch_candidates) {
        let reduced = LinearReducer::from_forms(t, &known).reduce(&cand);
        if linalg::is_zero_vec(&reduced) {
            continue;
        }
        let cand = linalg::normalize_first(&reduced);
        let mut gens = ideal.clone();
        gens.extend(known.iter().map(|l| linear_poly(m.coeff_ring(), l)));
        let l = linear_poly(m.coeff_ring(), &cand);
        match rabinowitsch(&l, &gens, budget.gb_caps, None) {
            Some(Ok(pairs)) => {
                known.push(cand.clone());
                out.forms.push((cand, ObstructionWitness::Rabinowitsch { pairs_considered: pairs }));
            }
            Some(Err(())) => out.capped = true,
            None => {}
        }
    }
}

/// `Some(Ok(pairs))` for membership, `Some(Err(()))` when the caps were hit,
/// `None` for non-membership.
fn rabinowitsch(l: &Poly, gens: &[Poly], caps: GbCaps, cancel: Option<&AtomicBool>) -> Option<Result<usize, ()>> {
    match radical_membership_stats(l, gens, caps, cancel) {
        Ok((Membership::Member, pairs)) => Some(Ok(pairs)),
        Ok((Membership::NotMember, _)) => None,
        _ => Some(Err(())),
    }
}

fn radical_membership_stats(
    l: &Poly,
    gens: &[Poly],
    caps: GbCaps,
    cancel: Option<&AtomicBool>,
) -> Result<(Membership, usize), String> {
    let (m, stats) = crate::groebner::radical_membership_with_stats(l, gens, caps, cancel).map_err(|e| e.to_string())?;
    Ok((m, stats.pairs_considered))
}

fn harvest_quadrics(h: &Harvest) -> Vec<CertQuadric> {
    h.items
        .iter()
        .map(|it| CertQuadric {
            coeffs: rats_out(&quadric_vector(&it.quadric).expect("harvest items are quadrics")),
            witness: WitnessJson::from_witness(it.witness.as_ref()),
        })
        .collect()
}

fn qr_certificate(target: &Target, k: usize, h: &Harvest) -> Result<QrCertificate, RankError> {
    let coords: Matrix = h
        .items
        .iter()
        .map(|it| target.coordinates(&it.quadric).ok_or_else(|| malformed("harvested quadric outside I₂")))
        .collect::<Result<_, _>>()?;
    let inv = linalg::inverse(&coords).ok_or_else(|| malformed("harvested quadrics do not span I₂"))?;
    Ok(QrCertificate {
        cert_version: CERT_VERSION,
        scheme: target.spec.to_string(),
        k,
        dim_i2: target.dim_i2(),
        quadrics: harvest_quadrics(h),
        basis_matrix: matrix_out(&inv),
    })
}

fn map_witness(w: &Witness, m: &Matrix) -> Witness {
    let f = |v: &Vec<Rat>| linalg::mat_vec(m, v);
    match w {
        Witness::Square(ls) => Witness::Square(ls.each_ref().map(f)),
        Witness::Pencil(ls) => Witness::Pencil(ls.each_ref().map(f)),
        Witness::Conjugate { delta, parts, part } => Witness::Conjugate {
            delta: delta.clone(),
            parts: parts.each_ref().map(|p| p.each_ref().map(f)),
            part: *part,
        },
    }
}

/// Continues a short rank-`k` harvest in each reparametrized frame. A quadric
/// `q'(z')` found there is `q'(A⁻¹ z)` here, and a linear form with
/// coefficients `v'` becomes `A⁻ᵀ v'`.
fn harvest_in_frames(target: &Target, k: usize, budget: &Budget, h: &mut Harvest) {
    let cfg = budget.harvest_config();
    let n = target.ring.arity();
    let mut span = linalg::SpanTracker::new(n * (n + 1) / 2);
    for it in &h.items {
        span.insert(&quadric_vector(&it.quadric).expect("harvest items are quadrics"));
    }
    for sigma in candidate_sigmas(target).into_iter().filter(|s| !is_identity(s)) {
        if h.complete() {
            break;
        }
        let Some((other, a)) = target.moved(&sigma) else { continue };
        let Some(a_inv) = linalg::inverse(&a) else { continue };
        let lift = linalg::transpose(&a_inv);
        let sub = rank3_harvest_cancellable(&other, k, &cfg, None);
        h.samples += sub.samples;
        for it in sub.items {
            let Ok(q) = pull_back(&it.quadric, &a_inv, &target.ring) else { continue };
            let Ok(v) = quadric_vector(&q) else { continue };
            if span.insert(&v) {
                h.items.push(HarvestItem {
                    quadric: q,
                    witness: it.witness.as_ref().map(|w| map_witness(w, &lift)),
                    origin: format!("{} (reparametrized)", it.origin),
                });
            }
        }
    }
}

/// Runs the spanning search and the obstruction sieve side by side. The
/// harvest stops the sieve once it spans `I₂`; the sieve stops the harvest once
/// it has a form, unless `full_harvest` is set. When neither side has decided,
/// the harvest continues in the reparametrized frames and, failing that, the
/// radical-membership fallback runs.
fn race(target: &Target, k: usize, budget: &Budget, full_harvest: bool) -> (Harvest, Obstructions) {
    let stop_harvest = AtomicBool::new(false);
    let stop_sieve = AtomicBool::new(false);
    let cfg = budget.harvest_config();
    let (mut h, mut o) = budget.exec.join(
        || {
            let h = rank3_harvest_cancellable(target, k, &cfg, Some(&stop_harvest));
            if h.complete() {
                stop_sieve.store(true, Ordering::Relaxed);
            }
            h
        },
        || {
            let o = obstruction_search(target, k, budget, Some(&stop_sieve));
            if !o.forms.is_empty() && !full_harvest {
                stop_harvest.store(true, Ordering::Relaxed);
            }
            o
        },
    );
    if !h.complete() && budget.frames && (full_harvest || o.forms.is_empty()) {
        harvest_in_frames(target, k, budget, &mut h);
    }
    if !h.complete() {
        rabinowitsch_search(target, k, budget, &mut o);
    }
    (h, o)
}

/// Decides QR(k) for a built target.
pub fn certify_target(target: &Target, k: usize, budget: &Budget) -> Result<QrOutcome, RankError> {
    if k == 0 {
        return Err(RankError::RankBound(k));
    }
    let (harvest, obs) = race(target, k, budget, false);
    match (harvest.complete(), obs.forms.is_empty()) {
        (true, false) => Err(RankError::Consistency(k)),
        (true, true) => Ok(QrOutcome::Holds(qr_certificate(target, k, &harvest)?)),
        (false, false) => Ok(QrOutcome::Fails(obs.certificate(target, k))),
        (false, true) => Ok(QrOutcome::Inconclusive(Partial {
            scheme: target.spec.to_string(),
            k,
            dim_i2: target.dim_i2(),
            quadrics: harvest_quadrics(&harvest),
            harvest_samples: harvest.samples,
            capped: obs.capped,
        })),
    }
}

pub fn certify_qr(spec: &SchemeSpec, k: usize, budget: &Budget) -> Result<QrOutcome, RankError> {
    certify_target(&Target::build(spec)?, k, budget)
}

/// Bounds on `δ(X, t)`, the dimension of the span of the rank `<= t` members
/// of `I₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBounds {
    pub t: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub dim_i2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub scheme: String,
    pub bounds: DeltaBounds,
    pub quadrics: Vec<CertQuadric>,
    pub obstruction: Option<ObstructionCertificate>,
}

pub fn delta_target(target: &Target, t: usize, budget: &Budget) -> Result<DeltaReport, RankError> {
    if t == 0 {
        return Err(RankError::RankBound(t));
    }
    let (harvest, obs) = race(target, t, budget, true);
    let dim = target.dim_i2();
    let lower = harvest.span();
    let upper = dim - obs.forms.len().min(dim);
    if lower > upper {
        return Err(RankError::Consistency(t));
    }
    Ok(DeltaReport {
        scheme: target.spec.to_string(),
        bounds: DeltaBounds {
            t,
            lower,
            upper,
            exact: lower == upper,
            dim_i2: dim,
        },
        quadrics: harvest_quadrics(&harvest),
        obstruction: (!obs.forms.is_empty()).then(|| obs.certificate(target, t)),
    })
}

pub fn delta(spec: &SchemeSpec, t: usize, budget: &Budget) -> Result<DeltaReport, RankError> {
    delta_target(&Target::build(spec)?, t, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankIndexReport {
    pub scheme: String,
    /// Every value in `lower..=upper` is still possible; equal bounds decide it.
    pub lower: usize,
    pub upper: usize,
    pub levels: Vec<QrOutcome>,
}

impl RankIndexReport {
    pub fn value(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Smallest `k >= 3` with QR(k). Irreducible nondegenerate schemes have no
/// quadrics of rank two or less in their ideal, so the scan starts at three.
pub fn rank_index_target(target: &Target, budget: &Budget) -> Result<RankIndexReport, RankError> {
    let n = target.ring.arity().max(3);
    let mut levels = Vec::new();
    let mut lower = 3;
    let mut upper = n;
    for k in 3..=n {
        let out = certify_target(target, k, budget)?;
        let holds = matches!(out, QrOutcome::Holds(_));
        if matches!(out, QrOutcome::Fails(_)) {
            lower = k + 1;
        }
        levels.push(out);
        if holds {
            upper = k;
            break;
        }
    }
    Ok(RankIndexReport {
        scheme: target.spec.to_string(),
        lower: lower.min(upper),
        upper,
        levels,
    })
}

pub fn rank_index(spec: &SchemeSpec, budget: &Budget) -> Result<RankIndexReport, RankError> {
    rank_index_target(&Target::build(spec)?, budget)
}

// ---------------------------------------------------------------------------
// Verification

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn rebuild(scheme: &str, dim_i2: usize, version: u32) -> Result<Target, String> {
    check(version == CERT_VERSION, "unsupported cert_version")?;
    let spec = SchemeSpec::parse(scheme).map_err(|e| e.to_string())?;
    check(spec.to_string() == scheme, "scheme is not in canonical form")?;
    let target = Target::build(&spec).map_err(|e| e.to_string())?;
    check(target.dim_i2() == dim_i2, "dim_i2 does not match the scheme")?;
    Ok(target)
}

/// Replays a QR(k) certificate: every quadric matches its witness, has rank at
/// most `k` and lies in `I₂`, and `basis_matrix` inverts their coordinate matrix.
pub fn verify_qr(cert: &QrCertificate) -> Result<(), String> {
    let target = rebuild(&cert.scheme, cert.dim_i2, cert.cert_version)?;
    let n = target.ring.arity();
    check(cert.k >= 1, "k must be positive")?;
    check(cert.quadrics.len() == cert.dim_i2, "need exactly dim I₂ quadrics")?;
    let mut coords: Matrix = Vec::new();
    for (i, cq) in cert.quadrics.iter().enumerate() {
        let v = rats_in(&cq.coeffs).map_err(|e| e.to_string())?;
        check(v.len() == n * (n + 1) / 2, "quadric has the wrong number of coefficients")?;
        let q = quadric_from_vector(&target.ring, &v);
        check(!q.is_zero(), "zero quadric")?;
        let w = cq.witness.to_witness(n).map_err(|e| e.to_string())?;
        match &w {
            Some(w) => {
                check(w.vector() == v, &format!("quadric {i} does not match its witness"))?;
                check(w.rank_bound() <= cert.k, &format!("witness {i} exceeds the rank bound"))?;
                if let Witness::Conjugate { delta, parts, part } = w {
                    // both rational parts must lie in I₂ for the conjugates to
                    // be members of I₂ over Q(√δ)
                    check(!delta.is_zero(), &format!("witness {i} has δ = 0"))?;
                    let companion = Witness::Conjugate {
                        delta: delta.clone(),
                        parts: parts.clone(),
                        part: 1 - part,
                    };
                    check(
                        target.contains(&quadric_from_vector(&target.ring, &companion.vector())),
                        &format!("conjugate companion of quadric {i} is not in I₂"),
                    )?;
                }
                if w.is_rational() {
                    let r = quad_rank(&q).map_err(|e| e.to_string())?;
                    check(r <= cert.k, &format!("quadric {i} has rank above k"))?;
                }
            }
            None => {
                let r = quad_rank(&q).map_err(|e| e.to_string())?;
                check(r <= cert.k, &format!("quadric {i} has rank above k"))?;
            }
        }
        let c = target.coordinates(&q).ok_or(format!("quadric {i} is not in I₂"))?;
        coords.push(c);
    }
    let b = matrix_in(&cert.basis_matrix).map_err(|e| e.to_string())?;
    check(
        b.len() == cert.dim_i2 && b.iter().all(|r| r.len() == cert.dim_i2),
        "basis_matrix has the wrong shape",
    )?;
    check(
        linalg::mat_mul(&b, &coords) == linalg::identity(cert.dim_i2),
        "basis_matrix does not recover the basis of I₂",
    )
}

/// Replays an obstruction certificate form by form, each modulo the forms
/// listed before it.
pub fn verify_obstruction(cert: &ObstructionCertificate) -> Result<(), String> {
    let target = rebuild(&cert.scheme, cert.dim_i2, cert.cert_version)?;
    let n = target.ring.arity();
    let t = cert.dim_i2;
    check(cert.k >= 1 && cert.k < n, "k out of range")?;
    check(!cert.forms.is_empty(), "no obstruction forms")?;
    let mut frames = Vec::new();
    for f in &cert.frames {
        let sigma: Vec<Rat> = rats_in(&f.sigma.concat()).map_err(|e| e.to_string())?;
        let sigma = [[sigma[0].clone(), sigma[1].clone()], [sigma[2].clone(), sigma[3].clone()]];
        let fd = frame_data(&target, &sigma).ok_or("frame does not apply to this scheme")?;
        check(
            matrix_in(&f.matrix).map_err(|e| e.to_string())? == fd.a,
            "frame matrix does not match its reparametrization",
        )?;
        check(
            matrix_in(&f.basis_change).map_err(|e| e.to_string())? == fd.change,
            "basis change does not match its reparametrization",
        )?;
        frames.push(fd);
    }
    let plain = GenericSymMatrix::from_basis(&target.basis).map_err(|e| e.to_string())?;
    let mut earlier: Vec<Vec<Rat>> = Vec::new();
    for (i, of) in cert.forms.iter().enumerate() {
        let form = rats_in(&of.form).map_err(|e| e.to_string())?;
        check(form.len() == t, "form has the wrong length")?;
        check(
            LinearReducer::from_forms(t, &earlier).reduce(&form) == form,
            &format!("form {i} is not reduced modulo the earlier forms"),
        )?;
        match &of.witness {
            ObstructionWitness::Minor {
                frame,
                rows,
                cols,
                exponent,
                scalar,
            } => {
                let fd = frames.get(*frame).ok_or("frame index out of range")?;
                check(rows.len() == cert.k + 1, "minor size is not k+1")?;
                let hit = SieveHit {
                    form: fd.to_frame(&form),
                    rows: rows.clone(),
                    cols: cols.clone(),
                    exponent: *exponent,
                    scalar: parse_rat(scalar).map_err(|e| e.to_string())?,
                };
                let local: Vec<Vec<Rat>> = earlier.iter().map(|v| fd.to_frame(v)).collect();
                check(replay_hit(&fd.mat, &local, &hit), &format!("form {i} does not replay"))?;
            }
            ObstructionWitness::Rabinowitsch { pairs_considered } => {
                check(linalg::normalize_first(&form) == form, "form is not normalized")?;
                check(
                    LinearReducer::from_forms(t, &earlier).is_independent(&form),
                    "form depends on earlier forms",
                )?;
                let ideal = minors_ideal(&plain, cert.k + 1, &earlier);
                let l = linear_poly(plain.coeff_ring(), &form);
                let (m, pairs) = radical_membership_stats(&l, &ideal, GbCaps::default(), None)?;
                check(m == Membership::Member, &format!("form {i} is not in the radical"))?;
                check(pairs == *pairs_considered, "Buchberger transcript differs")?;
            }
        }
        earlier.push(form);
    }
    let used: std::collections::BTreeSet<usize> = cert
        .forms
        .iter()
        .filter_map(|f| match f.witness {
            ObstructionWitness::Minor { frame, .. } => Some(frame),
            _ => None,
        })
        .collect();
    check(used.len() == cert.frames.len(), "unused frame")
}

// ---------------------------------------------------------------------------
// Scans

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjecture {
    /// Rank index three for projections from centers of rank at least four.
    #[serde(rename = "conj-1.2")]
    GeneralCenters,
    /// QR(3) for `C ∪ L` exactly when the trisecant meets the curve in three
    /// simple points.
    #[serde(rename = "conj-1.4")]
    Trisecant,
}

impl Conjecture {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().trim_start_matches("conj-") {
            "1.2" => Some(Conjecture::GeneralCenters),
            "1.4" => Some(Conjecture::Trisecant),
            _ => None,
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::GeneralCenters => "conj-1.2",
            Conjecture::Trisecant => "conj-1.4",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub d: usize,
    pub stratum: String,
    pub scheme: String,
    pub outcome: QrOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub conjecture: Conjecture,
    pub seed: u64,
    pub entries: Vec<ScanEntry>,
    /// `"d=<d> <stratum>"` to counts of `holds`, `fails` and `inconclusive`.
    pub summary: BTreeMap<String, BTreeMap<String, usize>>,
}

fn small(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            return v;
        }
    }
}

fn random_linear(rng: &mut ChaCha8Rng) -> BinaryForm {
    BinaryForm::from_ints(&[small(rng), rng.gen_range(-3i64..=3)])
}

fn random_form(rng: &mut ChaCha8Rng, deg: usize) -> BinaryForm {
    BinaryForm::from_ints(&(0..=deg).map(|_| rng.gen_range(-4i64..=4)).collect::<Vec<_>>())
}

/// A rank-three center of the requested root pattern for `g₁`, or `None` when
/// the random draw degenerates.
fn trisecant_center(rng: &mut ChaCha8Rng, d: usize, stratum: &str) -> Option<ProjPoint> {
    let (l1, l2, l3) = (random_linear(rng), random_linear(rng), random_linear(rng));
    let g1 = match stratum {
        "triple" => l1.pow(3),
        "double-simple" => l1.pow(2).mul(&l2),
        _ => l1.mul(&l2).mul(&l3),
    };
    let g2 = random_form(rng, d - 1);
    let pair = ApolarPair::new(g1, g2, d).ok()?;
    let point = pair.point();
    let back = crate::binform::apolar_ideal(&crate::binform::point_to_form(&point)).ok()?;
    (back.d1() == 3 && multiplicity_type(&back).ok()?.to_string() == stratum).then_some(point)
}

fn general_center(rng: &mut ChaCha8Rng, d: usize) -> Option<ProjPoint> {
    let coords: Vec<i64> = (0..=d).map(|_| rng.gen_range(-4i64..=4)).collect();
    let p = ProjPoint::from_ints(&coords).ok()?;
    (rnc_rank(&p) >= 4).then_some(p)
}

/// Samples rational centers and runs QR(3) on each. For `conj-1.4` the scheme
/// is `C ∪ L` and the samples are split evenly over the three root patterns of
/// `g₁`; for `conj-1.2` the centers have rank at least four.
pub fn conjecture_scan(
    conj: Conjecture,
    degrees: std::ops::RangeInclusive<usize>,
    samples: usize,
    budget: &Budget,
) -> Result<ScanReport, RankError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut entries = Vec::new();
    let mut summary: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for d in degrees {
        let strata: Vec<&str> = match conj {
            Conjecture::Trisecant if d >= 5 => vec!["three-simple", "double-simple", "triple"],
            Conjecture::GeneralCenters if d >= 6 => vec!["rank>=4"],
            _ => continue,
        };
        for (si, stratum) in strata.iter().enumerate() {
            let quota = samples / strata.len() + usize::from(si < samples % strata.len());
            let mut got = 0;
            let mut tries = 0;
            while got < quota && tries < 50 * quota.max(1) {
                tries += 1;
                let center = match conj {
                    Conjecture::Trisecant => trisecant_center(&mut rng, d, stratum),
                    Conjecture::GeneralCenters => general_center(&mut rng, d),
                };
                let Some(center) = center else { continue };
                let spec = match conj {
                    Conjecture::Trisecant => SchemeSpec::Union { center },
                    Conjecture::GeneralCenters => SchemeSpec::Projected { center },
                };
                let outcome = certify_qr(&spec, 3, budget)?;
                *summary
                    .entry(format!("d={d} {stratum}"))
                    .or_default()
                    .entry(outcome.label().to_string())
                    .or_default() += 1;
                entries.push(ScanEntry {
                    d,
                    stratum: stratum.to_string(),
                    scheme: spec.to_string(),
                    outcome,
                });
                got += 1;
            }
        }
    }
    Ok(ScanReport {
        conjecture: conj,
        seed: budget.seed,
        entries,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(d: usize, c: usize) -> SchemeSpec {
        SchemeSpec::Monomial { d, c }
    }

    #[test]
    fn profiles_parse() {
        assert_eq!(Profile::parse("quick").unwrap(), Profile::Quick);
        assert!(Profile::parse("fast").is_err());
        assert_eq!(Budget::for_profile(Profile::Paper).harvest_samples, 5000);
        assert_eq!(Budget::for_profile(Profile::Paper).sieve.max_distinct, 6);
    }

    #[test]
    fn monomial_six_three_holds_and_verifies() {
        let out = certify_qr(&mono(6, 3), 3, &Budget::default()).unwrap();
        let QrOutcome::Holds(cert) = out else { panic!("expected QR(3)") };
        assert_eq!(cert.quadrics.len(), 8);
        verify_qr(&cert).unwrap();
    }

    #[test]
    fn x5_fails_with_two_forms() {
        let out = certify_qr(&mono(5, 2), 3, &Budget::default()).unwrap();
        let QrOutcome::Fails(cert) = out else { panic!("expected an obstruction") };
        assert_eq!(cert.forms.len(), 2);
        verify_obstruction(&cert).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let out = certify_qr(&mono(5, 2), 3, &Budget::default()).unwrap();
        let QrOutcome::Fails(cert) = out else { panic!() };
        let text = serde_json::to_string(&Certificate::Obstruction(cert.clone())).unwrap();
        assert!(text.contains("\"cert_version\":1"));
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, Certificate::Obstruction(cert));
        back.verify().unwrap();
    }

    #[test]
    fn rabinowitsch_candidates_are_capped() {
        assert_eq!(rabinowitsch_candidates(4, 500).len(), 4 + 12);
        assert_eq!(rabinowitsch_candidates(40, 500).len(), 500);
    }
}
