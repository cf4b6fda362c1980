//! Primitive pairs `(j1, j2)` with `Ω = ω1²ω2² − 4(ω1² + ω2²)` a square, and
//! the rotation triples they produce in PSL(2, p^{e1 e2}).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FieldElement};
use crate::polytope::{self, RotationTriple};
use crate::projective::{GroupKind, Pgl, ProjElement};
use crate::schreier::StabChain;
use crate::subgroup::{self, Verdict, DEFAULT_CAP};

/// Fields above this order get the sampled intersection test.
pub const EXACT_INTERSECTION_MAX_Q: u128 = 1 << 16;
/// Samples per seeded stream.
const CHUNK: u64 = 512;

#[derive(Clone, Debug)]
pub struct ConjectureWitness {
    pub p: u64,
    pub e1: usize,
    pub e2: usize,
    pub f1: Arc<FieldCtx>,
    pub f2: Arc<FieldCtx>,
    /// GF(p^{lcm(e1,e2)}).
    pub big: Arc<FieldCtx>,
    /// Primitive in `f1`.
    pub j1: FieldElement,
    /// Primitive in `f2`.
    pub j2: FieldElement,
    /// `j1 + 1/j1`, in `big`.
    pub omega1: FieldElement,
    /// `j2 + 1/j2`, in `big`.
    pub omega2: FieldElement,
    pub omega: FieldElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub p: u64,
    pub e1: usize,
    pub e2: usize,
    pub field: String,
    pub j1: String,
    pub j2: String,
    pub omega1: String,
    pub omega2: String,
    pub omega: String,
}

impl ConjectureWitness {
    /// Validates primitivity and squareness.
    pub fn new(p: u64, e1: usize, e2: usize, j1: FieldElement, j2: FieldElement) -> Result<ConjectureWitness> {
        let lab = Lab::new(p, e1, e2)?;
        if !lab.f1.is_primitive(j1)? || !lab.f2.is_primitive(j2)? {
            return Err(Error::PreconditionFailed("j1 and j2 must be primitive".into()));
        }
        let (omega1, omega2, omega) = lab.omegas(j1, j2)?;
        if !lab.big.is_square(omega) || omega.is_zero() {
            return Err(Error::NotASquare);
        }
        Ok(lab.witness(j1, j2, omega1, omega2, omega))
    }

    pub fn q(&self) -> u128 {
        self.big.q()
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            p: self.p,
            e1: self.e1,
            e2: self.e2,
            field: self.big.describe(),
            j1: self.f1.format(self.j1),
            j2: self.f2.format(self.j2),
            omega1: self.big.format(self.omega1),
            omega2: self.big.format(self.omega2),
            omega: self.big.format(self.omega),
        }
    }
}

/// The three fields and the two embeddings, built once per search.
struct Lab {
    p: u64,
    e1: usize,
    e2: usize,
    f1: Arc<FieldCtx>,
    f2: Arc<FieldCtx>,
    big: Arc<FieldCtx>,
    emb1: Embedding,
    emb2: Embedding,
}

impl Lab {
    fn new(p: u64, e1: usize, e2: usize) -> Result<Lab> {
        if p == 2 || !arith::is_prime(p as u128) {
            return Err(Error::PreconditionFailed(format!("p = {p} must be an odd prime")));
        }
        if e1 % 2 == 0 || e2 % 2 == 0 {
            return Err(Error::PreconditionFailed(format!("e1 = {e1}, e2 = {e2} must be odd")));
        }
        let f1 = FieldCtx::new(p, e1, None)?;
        let f2 = FieldCtx::new(p, e2, None)?;
        let big = FieldCtx::new(p, arith::lcm(e1 as u128, e2 as u128) as usize, None)?;
        let emb1 = f1.embedding(&big)?;
        let emb2 = f2.embedding(&big)?;
        Ok(Lab { p, e1, e2, f1, f2, big, emb1, emb2 })
    }

    fn omegas(&self, j1: FieldElement, j2: FieldElement) -> Result<(FieldElement, FieldElement, FieldElement)> {
        let w = |f: &FieldCtx, j: FieldElement| Ok::<_, Error>(f.add(j, f.inv(j)?));
        let omega1 = self.emb1.apply(w(&self.f1, j1)?);
        let omega2 = self.emb2.apply(w(&self.f2, j2)?);
        Ok((omega1, omega2, big_omega(&self.big, omega1, omega2)))
    }

    fn witness(
        &self,
        j1: FieldElement,
        j2: FieldElement,
        omega1: FieldElement,
        omega2: FieldElement,
        omega: FieldElement,
    ) -> ConjectureWitness {
        ConjectureWitness {
            p: self.p,
            e1: self.e1,
            e2: self.e2,
            f1: Arc::clone(&self.f1),
            f2: Arc::clone(&self.f2),
            big: Arc::clone(&self.big),
            j1,
            j2,
            omega1,
            omega2,
            omega,
        }
    }
}

/// `ω1²ω2² − 4(ω1² + ω2²)` in `f`.
pub fn big_omega(f: &FieldCtx, omega1: FieldElement, omega2: FieldElement) -> FieldElement {
    let (a, b) = (f.square(omega1), f.square(omega2));
    f.sub(f.mul(a, b), f.mul(f.from_int(4), f.add(a, b)))
}

/// Ω for `j1 ∈ f1` and `j2 ∈ f2`, computed in `big`.
pub fn omega_of(
    f1: &Arc<FieldCtx>,
    j1: FieldElement,
    f2: &Arc<FieldCtx>,
    j2: FieldElement,
    big: &Arc<FieldCtx>,
) -> Result<FieldElement> {
    let w = |f: &FieldCtx, j: FieldElement| Ok::<_, Error>(f.add(j, f.inv(j)?));
    let omega1 = f1.subfield_embed(w(f1, j1)?, big)?;
    let omega2 = f2.subfield_embed(w(f2, j2)?, big)?;
    Ok(big_omega(big, omega1, omega2))
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub p: u64,
    pub e1: usize,
    pub e2: usize,
    pub seed: u64,
    /// Uniformly random nonzero pairs drawn.
    pub samples: u64,
    /// Of those, pairs with Ω a nonzero square.
    pub squares: u64,
    /// Uniformly random primitive pairs drawn, one per sample.
    pub primitive_samples: u64,
    pub primitive_squares: u64,
    /// First witness in sample order, with its index.
    pub witness: Option<(u64, ConjectureWitness)>,
}

pub enum SearchOutcome<'a> {
    Witness(&'a ConjectureWitness),
    /// Budget spent without a witness; carries the conditioned fraction.
    Exhausted(f64),
}

impl SearchReport {
    /// Fraction of primitive pairs with Ω square.
    pub fn fraction(&self) -> f64 {
        ratio(self.primitive_squares, self.primitive_samples)
    }

    /// Fraction of all sampled pairs with Ω square.
    pub fn unconditioned_fraction(&self) -> f64 {
        ratio(self.squares, self.samples)
    }

    pub fn outcome(&self) -> SearchOutcome<'_> {
        match &self.witness {
            Some((_, w)) => SearchOutcome::Witness(w),
            None => SearchOutcome::Exhausted(self.fraction()),
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

struct Chunk {
    samples: u64,
    squares: u64,
    primitive_samples: u64,
    primitive_squares: u64,
    witness: Option<(u64, FieldElement, FieldElement)>,
}

/// Draws `budget` uniform primitive pairs, and as many uniform nonzero pairs,
/// from seeded streams; the witness is the first primitive pair with Ω a
/// square. Requires odd `e1, e2 > 1`.
pub fn search_witness(p: u64, e1: usize, e2: usize, budget: u64, seed: u64) -> Result<SearchReport> {
    if e1 < 3 || e2 < 3 {
        return Err(Error::PreconditionFailed("e1 and e2 must exceed 1".into()));
    }
    sample_pairs(p, e1, e2, budget, seed)
}

/// As [`search_witness`], but any odd degrees are accepted.
pub fn sample_pairs(p: u64, e1: usize, e2: usize, budget: u64, seed: u64) -> Result<SearchReport> {
    let lab = Lab::new(p, e1, e2)?;
    let chunks = budget.div_ceil(CHUNK);
    let results: Vec<Result<Chunk>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(budget - c * CHUNK);
            run_chunk(&lab, seed, c, n)
        })
        .collect();
    let mut report = SearchReport {
        p,
        e1,
        e2,
        seed,
        samples: 0,
        squares: 0,
        primitive_samples: 0,
        primitive_squares: 0,
        witness: None,
    };
    for (c, r) in results.into_iter().enumerate() {
        let r = r?;
        if report.witness.is_none() {
            if let Some((i, j1, j2)) = r.witness {
                let (o1, o2, om) = lab.omegas(j1, j2)?;
                report.witness = Some((c as u64 * CHUNK + i, lab.witness(j1, j2, o1, o2, om)));
            }
        }
        report.samples += r.samples;
        report.squares += r.squares;
        report.primitive_samples += r.primitive_samples;
        report.primitive_squares += r.primitive_squares;
    }
    Ok(report)
}

fn run_chunk(lab: &Lab, seed: u64, chunk: u64, n: u64) -> Result<Chunk> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut out = Chunk { samples: 0, squares: 0, primitive_samples: 0, primitive_squares: 0, witness: None };
    let square = |j1, j2| -> Result<bool> {
        let (_, _, omega) = lab.omegas(j1, j2)?;
        Ok(!omega.is_zero() && lab.big.is_square(omega))
    };
    for i in 0..n {
        let j1 = random_nonzero(&lab.f1, &mut rng)?;
        let j2 = random_nonzero(&lab.f2, &mut rng)?;
        out.samples += 1;
        out.squares += square(j1, j2)? as u64;
        let j1 = random_primitive(&lab.f1, &mut rng)?;
        let j2 = random_primitive(&lab.f2, &mut rng)?;
        let sq = square(j1, j2)?;
        out.primitive_samples += 1;
        out.primitive_squares += sq as u64;
        if sq && out.witness.is_none() {
            out.witness = Some((i, j1, j2));
        }
    }
    Ok(out)
}

fn random_nonzero(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Result<FieldElement> {
    f.from_code(rng.random_range(1..f.q()))
}

fn random_primitive(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Result<FieldElement> {
    loop {
        let x = random_nonzero(f, rng)?;
        if f.is_primitive(x)? {
            return Ok(x);
        }
    }
}

/// The candidate triple for `w`, with the square root of Ω negated when
/// `negate` is set. Requires `gcd(e1, e2) = 1`.
pub fn build_candidate_signed(w: &ConjectureWitness, negate: bool) -> Result<(Pgl, RotationTriple)> {
    if arith::gcd(w.e1 as u128, w.e2 as u128) != 1 {
        return Err(Error::PreconditionFailed(format!("gcd({}, {}) ≠ 1", w.e1, w.e2)));
    }
    let f = &w.big;
    if w.omega1.is_zero() {
        return Err(Error::DegenerateOmega1);
    }
    let mut root = f.sqrt(w.omega)?;
    if negate {
        root = f.neg(root);
    }
    let (o1, o2) = (w.omega1, w.omega2);
    let two = f.from_int(2);
    let pg = Pgl::new(Arc::clone(f));
    let s1 = pg.make([o1, f.add(o1, two), f.sub(o1, two), o1])?;
    let s2 = pg.make([f.add(two, o1), o1, f.neg(o1), f.sub(two, o1)])?;
    let s3 = pg.make([f.mul(o2, f.sub(o1, two)), root, root, f.mul(o2, f.add(o1, two))])?;
    Ok((pg, RotationTriple::new(s1, s2, s3)))
}

pub fn build_candidate(w: &ConjectureWitness) -> Result<(Pgl, RotationTriple)> {
    build_candidate_signed(w, false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMethod {
    /// Both parabolics materialized and intersected.
    Closure,
    /// Every element of the smaller parabolic run through the trace filter
    /// of the other (see [`TraceFilter`]).
    TraceFilter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum IntersectionCheck {
    #[serde(rename = "VERIFIED")]
    Verified { holds: bool, method: ExactMethod },
    /// A violation is a sampled element outside `⟨σ2⟩` that passes the
    /// trace filter of the other parabolic.
    #[serde(rename = "UNVERIFIED-SAMPLED")]
    Sampled { budget: u64, violations: u64 },
}

impl IntersectionCheck {
    pub fn passes(&self) -> bool {
        match *self {
            IntersectionCheck::Verified { holds, .. } => holds,
            IntersectionCheck::Sampled { violations, .. } => violations == 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub relations: bool,
    pub orders: [u128; 3],
    pub cyclic_intersections: bool,
    /// Degree over GF(p) of the field generated by `tr²/det` of the triple.
    pub trace_field_degree: usize,
    pub generation: bool,
    /// Strongest verdict available for `⟨σ1,σ2⟩ ∩ ⟨σ2,σ3⟩ = ⟨σ2⟩`.
    pub intersection: IntersectionCheck,
    /// The sampled test, run whenever the field is too large for closure.
    pub sampled: Option<IntersectionCheck>,
    pub not_directly_regular: bool,
}

impl CandidateReport {
    /// Chiral 4-polytope, with the intersection condition possibly sampled.
    pub fn passes(&self) -> bool {
        self.relations
            && self.cyclic_intersections
            && self.generation
            && self.not_directly_regular
            && self.intersection.passes()
    }
}

/// Whether PSL(2,q) (or PGL(2,q)) is the rotation group of some directly
/// regular 4-polytope. The regular rank-4 groups with socle PSL(2,q) are
/// PGL(2,5), PSL(2,11), PSL(2,19) and Σ(2,q) for square q ≥ 9; only PGL(2,5)
/// and Σ(2,q) have PSL(2,q) as a subgroup of index 2.
pub fn admits_directly_regular(q: u128, kind: GroupKind) -> bool {
    match kind {
        GroupKind::Pgl => false,
        GroupKind::Psl => {
            q == 5 || matches!(arith::prime_power(q), Some((p, d)) if p > 2 && d % 2 == 0 && q >= 9)
        }
    }
}

pub fn verify_candidate(
    pg: &Pgl,
    t: &RotationTriple,
    w: &ConjectureWitness,
    budget: u64,
    seed: u64,
) -> CandidateReport {
    let f = pg.field();
    let relations = polytope::check_relations(pg, t);
    let orders = [pg.order(&t.s1), pg.order(&t.s2), pg.order(&t.s3)];
    let cyclic_intersections = polytope::cyclic_intersection_trivial(pg, &t.s1, &t.s2)
        && polytope::cyclic_intersection_trivial(pg, &t.s2, &t.s3);
    let trace_field_degree = f.generated_subfield_degree(
        [t.s1, t.s2, t.s3, pg.mul(&t.s1, &t.s3), pg.mul3(&t.s1, &t.s2, &t.s3)]
            .iter()
            .map(|g| pg.trace_invariant(g)),
    );
    let small = pg.q() <= EXACT_INTERSECTION_MAX_Q;
    let generation = match subgroup::quick_generation(pg, &t.as_array(), GroupKind::Psl) {
        Verdict::Full => true,
        Verdict::Proper => false,
        Verdict::Unknown => small && subgroup::generates_exact(pg, &t.as_array(), GroupKind::Psl),
    };
    let closure = || {
        polytope::parabolic_intersection_order(pg, [t.s1, t.s2], [t.s2, t.s3], DEFAULT_CAP)
            .ok()
            .map(|n| IntersectionCheck::Verified {
                holds: cyclic_intersections && n == orders[1],
                method: ExactMethod::Closure,
            })
    };
    let (intersection, sampled) = if let Some(v) = small.then(closure).flatten() {
        (v, None)
    } else {
        let filter = TraceFilter::new(pg, t);
        let sampled = filter.sample(budget, seed);
        let exhaustive = filter.exhaustive(DEFAULT_CAP).filter(|&flagged| flagged == 0).map(|_| {
            IntersectionCheck::Verified { holds: cyclic_intersections, method: ExactMethod::TraceFilter }
        });
        (exhaustive.unwrap_or_else(|| sampled.clone()), Some(sampled))
    };
    CandidateReport {
        relations,
        orders,
        cyclic_intersections,
        trace_field_degree,
        generation,
        intersection,
        sampled,
        not_directly_regular: !admits_directly_regular(w.q(), GroupKind::Psl),
    }
}

/// Membership filter for a parabolic `H = ⟨a, b⟩`, odd characteristic.
///
/// Lifting to SL(2), every `tr²` in `H` lies in the field `K` generated by
/// `tr²` of `a, b, ab, ab⁻¹`: traces of words are polynomials in `tr a`,
/// `tr b`, `tr ab`, the sign-invariant ones are generated by the squares and
/// `tr a·tr b·tr ab`, and the latter is recovered from `tr² ab⁻¹`. So `x ∈ H`
/// forces `tr²/det` of `x, xa, xb, xab` into `K`. Elements of the other
/// parabolic outside `⟨σ2⟩` that pass are flagged.
pub struct TraceFilter<'a> {
    pg: &'a Pgl,
    s2: ProjElement,
    /// Generators of the parabolic elements are drawn from.
    source: [ProjElement; 2],
    host: [ProjElement; 3],
    /// Degree of the host trace field.
    k: usize,
}

impl<'a> TraceFilter<'a> {
    /// Draws from the parabolic with the smaller trace field.
    pub fn new(pg: &'a Pgl, t: &RotationTriple) -> TraceFilter<'a> {
        let f = pg.field();
        let degree = |a: &ProjElement, b: &ProjElement| {
            f.generated_subfield_degree(
                [*a, *b, pg.mul(a, b), pg.mul(a, &pg.inv(b))].iter().map(|g| pg.trace_invariant(g)),
            )
        };
        let (k1, k2) = (degree(&t.s1, &t.s2), degree(&t.s2, &t.s3));
        let (source, host, k) = if k1 <= k2 {
            ([t.s1, t.s2], [t.s2, t.s3], k2)
        } else {
            ([t.s2, t.s3], [t.s1, t.s2], k1)
        };
        TraceFilter { pg, s2: t.s2, source, host: [host[0], host[1], pg.mul(&host[0], &host[1])], k }
    }

    /// Degree of the host parabolic's trace field.
    pub fn host_degree(&self) -> usize {
        self.k
    }

    fn in_k(&self, x: &ProjElement) -> bool {
        if x.is_identity() {
            return true;
        }
        let kappa = self.pg.trace_invariant(x);
        self.pg.field().frobenius(kappa, self.k) == kappa
    }

    fn in_s2(&self, x: &ProjElement) -> bool {
        let pg = self.pg;
        if x.is_identity() {
            return true;
        }
        if !pg.commutes(x, &self.s2) {
            return false;
        }
        let mut y = self.s2;
        while !y.is_identity() {
            if y == *x {
                return true;
            }
            y = pg.mul(&y, &self.s2);
        }
        false
    }

    pub fn flags(&self, x: &ProjElement) -> bool {
        self.in_k(x) && self.host.iter().all(|h| self.in_k(&self.pg.mul(x, h))) && !self.in_s2(x)
    }

    /// Number of flagged elements of the whole source parabolic, if its
    /// order is at most `cap`.
    pub fn exhaustive(&self, cap: u128) -> Option<u64> {
        let chain = StabChain::new(self.pg, &self.source);
        (chain.order() <= cap).then(|| chain.elements().iter().filter(|x| self.flags(x)).count() as u64)
    }

    /// Random walk on the source parabolic: each step multiplies by a random
    /// generator or inverse, and every fourth step also tests a conjugate of
    /// σ2 (shared p-elements being the likeliest obstruction).
    pub fn sample(&self, budget: u64, seed: u64) -> IntersectionCheck {
        let pg = self.pg;
        let letters = [self.source[0], self.source[1], pg.inv(&self.source[0]), pg.inv(&self.source[1])];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = ProjElement::IDENTITY;
        let mut violations = 0;
        for i in 0..budget {
            x = pg.mul(&x, &letters[rng.random_range(0..4)]);
            let y = if i % 4 == 3 { pg.mul3(&x, &self.s2, &pg.inv(&x)) } else { x };
            violations += self.flags(&y) as u64;
        }
        IntersectionCheck::Sampled { budget, violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_identities() {
        let f = FieldCtx::new(7, 3, None).unwrap();
        for w in f.elements().take(60) {
            let om = big_omega(&f, w, w);
            let w2 = f.square(w);
            assert_eq!(om, f.mul(w2, f.sub(w2, f.from_int(8))));
            assert_eq!(big_omega(&f, w, f.zero()), f.neg(f.mul(f.from_int(4), w2)));
        }
    }

    #[test]
    fn directly_regular_lookup() {
        assert!(admits_directly_regular(5, GroupKind::Psl));
        assert!(admits_directly_regular(9, GroupKind::Psl));
        assert!(admits_directly_regular(49, GroupKind::Psl));
        assert!(!admits_directly_regular(11, GroupKind::Psl));
        assert!(!admits_directly_regular(3u128.pow(15), GroupKind::Psl));
    }

    #[test]
    fn small_search_is_deterministic() {
        let a = search_witness(3, 3, 5, 2000, 7).unwrap();
        let b = search_witness(3, 3, 5, 2000, 7).unwrap();
        assert_eq!((a.samples, a.squares, a.primitive_squares), (b.samples, b.squares, b.primitive_squares));
        assert_eq!(a.witness.map(|w| w.0), b.witness.map(|w| w.0));
    }
}
