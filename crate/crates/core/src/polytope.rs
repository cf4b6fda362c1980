//! Rotation triples and the checks that make them chiral 4-polytopes.
//!
//! A triple `(σ1, σ2, σ3)` in PGL(2,q) is the rotation subgroup data of a
//! chiral 4-polytope when
//!
//! * the orders `p_i` of the `σ_i` are at least 2,
//! * `σ1σ2`, `σ2σ3` and `σ1σ2σ3` are involutions,
//! * `⟨σ1⟩∩⟨σ2⟩ = ⟨σ2⟩∩⟨σ3⟩ = 1` and `⟨σ1,σ2⟩∩⟨σ2,σ3⟩ = ⟨σ2⟩`,
//! * the triple generates the ambient group,
//! * no automorphism maps `(σ1, σ2, σ3)` to `(σ1⁻¹, σ1²σ2, σ3)`.
//!
//! Automorphisms are taken from PΓL(2,q), which is the full automorphism
//! group of both PSL(2,q) and PGL(2,q) for q > 3.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::projective::{GroupKind, Pgl, ProjElement};
use crate::schreier::StabChain;
use crate::subgroup::{self, SubgroupClass, DEFAULT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationTriple {
    pub s1: ProjElement,
    pub s2: ProjElement,
    pub s3: ProjElement,
}

impl RotationTriple {
    pub fn new(s1: ProjElement, s2: ProjElement, s3: ProjElement) -> RotationTriple {
        RotationTriple { s1, s2, s3 }
    }

    pub fn as_array(&self) -> [ProjElement; 3] {
        [self.s1, self.s2, self.s3]
    }

    /// Entrywise Frobenius twist.
    pub fn frobenius(&self, pg: &Pgl, r: usize) -> RotationTriple {
        RotationTriple::new(
            pg.frobenius(&self.s1, r),
            pg.frobenius(&self.s2, r),
            pg.frobenius(&self.s3, r),
        )
    }

    pub fn conj(&self, pg: &Pgl, h: &ProjElement) -> RotationTriple {
        RotationTriple::new(pg.conj(&self.s1, h), pg.conj(&self.s2, h), pg.conj(&self.s3, h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchlafliSymbol {
    pub p1: u128,
    pub p2: u128,
    pub p3: u128,
}

impl SchlafliSymbol {
    pub fn new(p1: u128, p2: u128, p3: u128) -> SchlafliSymbol {
        SchlafliSymbol { p1, p2, p3 }
    }

    pub fn reversed(&self) -> SchlafliSymbol {
        SchlafliSymbol::new(self.p3, self.p2, self.p1)
    }

    pub fn as_array(&self) -> [u128; 3] {
        [self.p1, self.p2, self.p3]
    }
}

impl fmt::Display for SchlafliSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.p1, self.p2, self.p3)
    }
}

pub fn schlafli_of(pg: &Pgl, t: &RotationTriple) -> Result<SchlafliSymbol> {
    let o = t.as_array().map(|g| pg.order(&g));
    if o.iter().any(|&k| k < 2) {
        return Err(Error::DegenerateOrder);
    }
    Ok(SchlafliSymbol::new(o[0], o[1], o[2]))
}

pub fn check_relations(pg: &Pgl, t: &RotationTriple) -> bool {
    let s12 = pg.mul(&t.s1, &t.s2);
    let s23 = pg.mul(&t.s2, &t.s3);
    let s123 = pg.mul(&s12, &t.s3);
    pg.is_involution(&s12) && pg.is_involution(&s23) && pg.is_involution(&s123)
}

/// Whether the cyclic groups generated by `a` and `b` meet trivially.
pub fn cyclic_intersection_trivial(pg: &Pgl, a: &ProjElement, b: &ProjElement) -> bool {
    let (oa, ob) = (pg.order(a), pg.order(b));
    // A shared nontrivial subgroup has prime order dividing both orders and is
    // generated by the corresponding powers of a and b.
    let g = crate::arith::gcd(oa, ob);
    if g == 1 {
        return true;
    }
    for r in crate::arith::factorize(g).primes() {
        let ar = pg.pow(a, oa / r);
        let br = pg.pow(b, ob / r);
        let mut x = br;
        for _ in 1..r {
            if x == ar {
                return false;
            }
            x = pg.mul(&x, &br);
        }
    }
    true
}

/// Order of `⟨first⟩ ∩ ⟨second⟩`; the smaller group is materialized.
pub fn parabolic_intersection_order(
    pg: &Pgl,
    first: [ProjElement; 2],
    second: [ProjElement; 2],
    cap: u128,
) -> Result<u128> {
    let c1 = StabChain::new(pg, &first);
    let c2 = StabChain::new(pg, &second);
    let (small, large) = if c1.order() <= c2.order() { (c1, c2) } else { (c2, c1) };
    if small.order() > cap {
        return Err(Error::ParabolicTooLarge);
    }
    Ok(small.elements().iter().filter(|g| large.contains(g)).count() as u128)
}

pub fn check_intersection(pg: &Pgl, t: &RotationTriple) -> Result<bool> {
    if !cyclic_intersection_trivial(pg, &t.s1, &t.s2)
        || !cyclic_intersection_trivial(pg, &t.s2, &t.s3)
    {
        return Ok(false);
    }
    let n = parabolic_intersection_order(pg, [t.s1, t.s2], [t.s2, t.s3], DEFAULT_CAP)?;
    Ok(n == pg.order(&t.s2))
}

pub fn check_generation(pg: &Pgl, t: &RotationTriple, kind: GroupKind) -> bool {
    subgroup::generates(pg, &t.as_array(), kind)
}

/// Mirror image `(σ1⁻¹, σ1²σ2, σ3)`.
pub fn enantiomorph(pg: &Pgl, t: &RotationTriple) -> RotationTriple {
    let s1sq = pg.mul(&t.s1, &t.s1);
    RotationTriple::new(pg.inv(&t.s1), pg.mul(&s1sq, &t.s2), t.s3)
}

/// Dual triple `(σ3⁻¹, σ2⁻¹, σ1⁻¹)`.
pub fn dual(pg: &Pgl, t: &RotationTriple) -> RotationTriple {
    RotationTriple::new(pg.inv(&t.s3), pg.inv(&t.s2), pg.inv(&t.s1))
}

/// Least `(r, h)` with `h⁻¹·frob_r(src_i)·h = dst_i` for every component.
pub fn find_isomorphism(
    pg: &Pgl,
    src: &[ProjElement],
    dst: &[ProjElement],
) -> Option<(usize, ProjElement)> {
    debug_assert_eq!(src.len(), dst.len());
    for r in 0..pg.field().degree() {
        let pairs: Vec<(ProjElement, ProjElement)> = src
            .iter()
            .zip(dst)
            .map(|(a, b)| (pg.frobenius(a, r), *b))
            .collect();
        // Quick rejection on the conjugacy invariant.
        if pairs
            .iter()
            .any(|(a, b)| pg.trace_invariant(a) != pg.trace_invariant(b))
        {
            continue;
        }
        if let Some(h) = pg.transporters(&pairs).into_iter().next() {
            return Some((r, h));
        }
    }
    None
}

pub fn are_equivalent(pg: &Pgl, t1: &RotationTriple, t2: &RotationTriple) -> bool {
    find_isomorphism(pg, &t1.as_array(), &t2.as_array()).is_some()
}

/// Automorphism realizing the mirror symmetry, if any.
pub fn mirror_automorphism(pg: &Pgl, t: &RotationTriple) -> Option<(usize, ProjElement)> {
    find_isomorphism(pg, &t.as_array(), &enantiomorph(pg, t).as_array())
}

/// No automorphism of the group sends the triple to its mirror image. The
/// triple must satisfy the relations; callers establish the remaining
/// conditions separately.
pub fn is_chiral(pg: &Pgl, t: &RotationTriple) -> Result<bool> {
    schlafli_of(pg, t)?;
    if !check_relations(pg, t) {
        return Err(Error::PreconditionFailed("relations fail".into()));
    }
    Ok(mirror_automorphism(pg, t).is_none())
}

/// Whether `a ↦ a⁻¹, b ↦ a²b` extends to an automorphism of `⟨a,b⟩`. Tries
/// PΓL(2,q) first, then decides inside the materialized subgroup.
pub fn directly_regular_pair(pg: &Pgl, a: &ProjElement, b: &ProjElement) -> Result<bool> {
    let a2 = pg.inv(a);
    let b2 = pg.mul3(a, a, b);
    if find_isomorphism(pg, &[*a, *b], &[a2, b2]).is_some() {
        return Ok(true);
    }
    extends_to_automorphism(pg, [*a, *b], [a2, b2], DEFAULT_CAP)
}

/// Whether `gens[i] ↦ images[i]` defines an automorphism of `⟨gens⟩`,
/// decided on the Cayley graph. The images must lie in the subgroup.
pub fn extends_to_automorphism(
    pg: &Pgl,
    gens: [ProjElement; 2],
    images: [ProjElement; 2],
    cap: u128,
) -> Result<bool> {
    let sc = StabChain::new(pg, &gens);
    if sc.order() > cap {
        return Err(Error::ParabolicTooLarge);
    }
    if !images.iter().all(|g| sc.contains(g)) {
        return Ok(false);
    }
    if StabChain::new(pg, &images).order() != sc.order() {
        return Ok(false);
    }
    let mut phi: FxHashMap<ProjElement, ProjElement> = FxHashMap::default();
    phi.insert(ProjElement::IDENTITY, ProjElement::IDENTITY);
    let mut queue = vec![ProjElement::IDENTITY];
    let mut head = 0;
    while head < queue.len() {
        let g = queue[head];
        let img = phi[&g];
        head += 1;
        for (s, t) in gens.iter().zip(&images) {
            let gs = pg.mul(&g, s);
            let want = pg.mul(&img, t);
            match phi.get(&gs) {
                Some(have) if *have != want => return Ok(false),
                Some(_) => {}
                None => {
                    phi.insert(gs, want);
                    queue.push(gs);
                }
            }
        }
    }
    Ok(true)
}

/// Conjugacy-invariant summary used to bucket triples before exact tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub schlafli: [u128; 3],
    pub kappas: Vec<u128>,
}

fn fingerprint_words(pg: &Pgl, t: &RotationTriple) -> Vec<ProjElement> {
    let [a, b, c] = t.as_array();
    let (ai, bi, ci) = (pg.inv(&a), pg.inv(&b), pg.inv(&c));
    vec![
        a,
        b,
        c,
        pg.mul(&a, &c),
        pg.mul(&a, &ci),
        pg.mul(&a, &bi),
        pg.mul(&b, &ci),
        pg.mul3(&a, &b, &ci),
        pg.mul3(&ai, &b, &c),
        pg.mul3(&a, &a, &b),
        pg.mul3(&b, &b, &c),
    ]
}

pub fn fingerprint(pg: &Pgl, t: &RotationTriple) -> Fingerprint {
    let words = fingerprint_words(pg, t);
    let f = pg.field();
    let kappas: Vec<_> = words.iter().map(|w| pg.trace_invariant(w)).collect();
    let best = (0..f.degree())
        .map(|r| kappas.iter().map(|&k| f.frobenius(k, r).code()).collect::<Vec<u128>>())
        .min()
        .unwrap_or_default();
    Fingerprint {
        schlafli: t.as_array().map(|g| pg.order(&g)),
        kappas: best,
    }
}

/// Outcome of every check on a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub schlafli: Option<SchlafliSymbol>,
    pub relations: bool,
    pub intersection: Option<bool>,
    pub generation: bool,
    pub chiral: Option<bool>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.schlafli.is_some()
            && self.relations
            && self.intersection == Some(true)
            && self.generation
            && self.chiral == Some(true)
    }

    /// Valid rotation triple whose mirror image is equivalent.
    pub fn is_regular(&self) -> bool {
        self.schlafli.is_some()
            && self.relations
            && self.intersection == Some(true)
            && self.generation
            && self.chiral == Some(false)
    }

    pub fn verdict(&self) -> &'static str {
        if self.all_pass() {
            "CHIRAL"
        } else if self.is_regular() {
            "REGULAR"
        } else {
            "INVALID"
        }
    }
}

pub fn verify(pg: &Pgl, t: &RotationTriple, kind: GroupKind) -> Verification {
    let schlafli = schlafli_of(pg, t).ok();
    let relations = check_relations(pg, t);
    let generation = schlafli.is_some() && check_generation(pg, t, kind);
    let intersection = if schlafli.is_some() && generation {
        check_intersection(pg, t).ok()
    } else {
        None
    };
    let chiral = if schlafli.is_some() && relations {
        is_chiral(pg, t).ok()
    } else {
        None
    };
    Verification { schlafli, relations, intersection, generation, chiral }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeRecord {
    pub field: Arc<FieldCtx>,
    pub kind: GroupKind,
    pub triple: RotationTriple,
    pub schlafli: SchlafliSymbol,
    pub group: SubgroupClass,
    pub parabolic1: SubgroupClass,
    pub parabolic2: SubgroupClass,
    pub provenance: String,
}

impl PolytopeRecord {
    /// Runs every check and builds the record, or reports the failing check.
    pub fn new(pg: &Pgl, kind: GroupKind, t: RotationTriple, provenance: &str) -> Result<Self> {
        let v = verify(pg, &t, kind);
        if !v.all_pass() {
            return Err(Error::PreconditionFailed(format!(
                "triple is {}: {v:?}",
                v.verdict()
            )));
        }
        Self::assemble(pg, kind, t, provenance)
    }

    /// Builds a record for a triple already known to pass every check.
    pub fn assemble(pg: &Pgl, kind: GroupKind, t: RotationTriple, provenance: &str) -> Result<Self> {
        let schlafli = schlafli_of(pg, &t)?;
        let p1 = subgroup::generate(pg, &[t.s1, t.s2], DEFAULT_CAP)?.class;
        let p2 = subgroup::generate(pg, &[t.s2, t.s3], DEFAULT_CAP)?.class;
        let q = pg.q();
        let group = if kind == GroupKind::Pgl || q % 2 == 0 {
            SubgroupClass::FullPgl { q }
        } else {
            SubgroupClass::FullPsl { q }
        };
        Ok(PolytopeRecord {
            field: pg.field().clone(),
            kind,
            triple: t,
            schlafli,
            group,
            parabolic1: p1,
            parabolic2: p2,
            provenance: provenance.to_string(),
        })
    }

    pub fn fingerprint(&self, pg: &Pgl) -> Fingerprint {
        fingerprint(pg, &self.triple)
    }

    pub fn to_json(&self, pg: &Pgl) -> RecordJson {
        RecordJson {
            field: self.field.describe(),
            group: self.kind.name().to_string(),
            schlafli: self.schlafli.as_array(),
            s1: pg.format(&self.triple.s1),
            s2: pg.format(&self.triple.s2),
            s3: pg.format(&self.triple.s3),
            parabolics: [self.parabolic1.to_string(), self.parabolic2.to_string()],
            provenance: self.provenance.clone(),
        }
    }
}

/// Serialized form of a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub field: String,
    pub group: String,
    pub schlafli: [u128; 3],
    pub s1: String,
    pub s2: String,
    pub s3: String,
    pub parabolics: [String; 2],
    pub provenance: String,
}

impl RecordJson {
    /// Field, group and triple encoded in the record.
    pub fn decode(&self) -> Result<(Pgl, GroupKind, RotationTriple)> {
        let pg = Pgl::new(FieldCtx::parse(&self.field)?);
        let kind: GroupKind = self.group.parse()?;
        let t = RotationTriple::new(pg.parse(&self.s1)?, pg.parse(&self.s2)?, pg.parse(&self.s3)?);
        Ok((pg, kind, t))
    }
}

/// Sorts records by Schläfli symbol, then fingerprint.
pub fn sort_records(pg: &Pgl, records: &mut [PolytopeRecord]) {
    records.sort_by_cached_key(|r| (r.schlafli, r.fingerprint(pg), r.triple));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    fn pgl(q: u128) -> Pgl {
        Pgl::new(FieldCtx::of_order(q).unwrap())
    }

    /// Literal PGL family triple for exponent `l`.
    fn affine_triple(pg: &Pgl, l: u128) -> RotationTriple {
        let f = pg.field();
        let jl = f.pow(f.primitive_element(), l);
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        let s1 = pg.make([f.neg(f.inv(jl).unwrap()), o, z, o]).unwrap();
        let s2 = pg.make([jl, z, z, o]).unwrap();
        let s3 = pg.make([o, z, f.add(o, jl), f.neg(jl)]).unwrap();
        RotationTriple::new(s1, s2, s3)
    }

    #[test]
    fn affine_triple_is_chiral() {
        let pg = pgl(8);
        let t = affine_triple(&pg, 1);
        assert_eq!(schlafli_of(&pg, &t).unwrap().to_string(), "[7,7,7]");
        let v = verify(&pg, &t, GroupKind::Pgl);
        assert!(v.all_pass(), "{v:?}");
        let rec = PolytopeRecord::new(&pg, GroupKind::Pgl, t, "test").unwrap();
        assert_eq!(rec.parabolic1.to_string(), "E_8:C_7");
        let json = serde_json::to_string(&rec.to_json(&pg)).unwrap();
        let back: RecordJson = serde_json::from_str(&json).unwrap();
        let (pg2, kind, t2) = back.decode().unwrap();
        assert_eq!(kind, GroupKind::Pgl);
        assert_eq!(t2, t);
        assert_eq!(pg2.q(), 8);
    }

    #[test]
    fn type_half_k_for_three_mod_four() {
        let pg = pgl(7);
        let t = affine_triple(&pg, 1);
        assert_eq!(schlafli_of(&pg, &t).unwrap().to_string(), "[3,6,3]");
    }

    #[test]
    fn frobenius_orbit_equivalent() {
        let pg = pgl(8);
        let t1 = affine_triple(&pg, 1);
        let t2 = affine_triple(&pg, 2);
        let t3 = affine_triple(&pg, 3);
        assert!(are_equivalent(&pg, &t1, &t2));
        assert!(!are_equivalent(&pg, &t1, &t3));
        assert_eq!(fingerprint(&pg, &t1), fingerprint(&pg, &t2));
    }

    #[test]
    fn enantiomorph_twice_is_identity() {
        let pg = pgl(13);
        let t = affine_triple(&pg, 2);
        assert_eq!(enantiomorph(&pg, &enantiomorph(&pg, &t)), t);
        assert!(are_equivalent(&pg, &dual(&pg, &dual(&pg, &t)), &t));
    }

    #[test]
    fn bad_triples() {
        let pg = pgl(13);
        let g = pg.from_ints([0, 1, -1, 4]).unwrap();
        assert_eq!(pg.order(&g), 6);
        let t = RotationTriple::new(g, pg.inv(&g), g);
        assert!(!cyclic_intersection_trivial(&pg, &t.s1, &t.s2));
        assert!(!check_intersection(&pg, &t).unwrap());
        let h = pg.from_ints([1, 1, 1, 2]).unwrap();
        let h5 = (1..).map(|k| pg.pow(&h, k)).find(|x| pg.order(x) > 2).unwrap();
        assert!(!check_relations(&pg, &RotationTriple::new(h5, h5, h5)));
        let id = ProjElement::IDENTITY;
        assert!(matches!(
            schlafli_of(&pg, &RotationTriple::new(id, g, g)),
            Err(Error::DegenerateOrder)
        ));
    }
}
