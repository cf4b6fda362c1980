//! Exhaustive search for chiral 4-polytopes (and rank-5 candidates) in
//! PSL(2,q) and PGL(2,q).
//!
//! Writing `t = σ1σ2` and `s = σ2σ3`, a triple is determined by `σ2` and two
//! involutions `t`, `s` with `t·σ2⁻¹·s` an involution. The facet group
//! `⟨σ1,σ2⟩ = ⟨σ2,t⟩` and the vertex-figure group `⟨σ2,s⟩` must be proper,
//! so `t` and `s` are drawn from the involutions that do not generate the
//! whole group together with `σ2`.
//!
//! The pruned search takes `σ2` from one representative per PΓL class; the
//! naive search runs over every element. Triples are grouped into PΓL
//! orbits with a fingerprint-bucketed memo, so each orbit is verified once.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::classifier;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::polytope::{self, Fingerprint, PolytopeRecord, RotationTriple};
use crate::projective::{GroupKind, Pgl, ProjElement};
use crate::schreier::StabChain;
use crate::subgroup;
use crate::tables::Table2Row;

/// Largest supported `q(q²−1)` for rank 4.
pub const RANK4_LIMIT: u128 = 10_000_000;
/// Largest supported `q` for rank 5.
pub const RANK5_MAX_Q: u128 = 13;

/// How polytopes are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// One per PΓL orbit of rotation triples; mirror images and duals apart.
    Orbits,
    /// Mirror images identified.
    MergeEnantiomorphs,
    /// Duals identified.
    MergeDuals,
    /// Both identified.
    MergeBoth,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention::Orbits,
        Convention::MergeEnantiomorphs,
        Convention::MergeDuals,
        Convention::MergeBoth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Convention::Orbits => "orbits",
            Convention::MergeEnantiomorphs => "merge-enantiomorphs",
            Convention::MergeDuals => "merge-duals",
            Convention::MergeBoth => "merge-both",
        }
    }
}

/// The convention that reproduces the published counts.
pub const COUNTING_CONVENTION: Convention = Convention::Orbits;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub sigma2_reps: usize,
    pub candidates: u64,
    pub orbits_checked: u64,
    pub chiral_orbits: u64,
    pub regular_orbits: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.sigma2_reps += o.sigma2_reps;
        self.candidates += o.candidates;
        self.orbits_checked += o.orbits_checked;
        self.chiral_orbits += o.chiral_orbits;
        self.regular_orbits += o.regular_orbits;
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub kind: GroupKind,
    /// One record per PΓL orbit of chiral triples.
    pub records: Vec<PolytopeRecord>,
    pub stats: SearchStats,
}

impl Enumeration {
    pub fn count(&self, pg: &Pgl, convention: Convention) -> usize {
        representatives(pg, &self.records, convention).len()
    }

    /// Records surviving the convention, in canonical order.
    pub fn under(&self, pg: &Pgl, convention: Convention) -> Vec<PolytopeRecord> {
        representatives(pg, &self.records, convention)
            .into_iter()
            .map(|i| self.records[i].clone())
            .collect()
    }
}

/// Indices of the records kept under `convention`: the first of each
/// identified group, in the given order.
pub fn representatives(pg: &Pgl, records: &[PolytopeRecord], convention: Convention) -> Vec<usize> {
    let mut taken = vec![false; records.len()];
    let mut out = Vec::new();
    let fps: Vec<Fingerprint> = records.iter().map(|r| r.fingerprint(pg)).collect();
    let find = |t: &RotationTriple, taken: &[bool]| {
        let fp = polytope::fingerprint(pg, t);
        (0..records.len())
            .find(|&j| !taken[j] && fps[j] == fp && polytope::are_equivalent(pg, t, &records[j].triple))
    };
    for i in 0..records.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        out.push(i);
        let t = records[i].triple;
        let mut partners = Vec::new();
        let merge_e = matches!(convention, Convention::MergeEnantiomorphs | Convention::MergeBoth);
        let merge_d = matches!(convention, Convention::MergeDuals | Convention::MergeBoth);
        if merge_e {
            partners.push(polytope::enantiomorph(pg, &t));
        }
        if merge_d {
            let d = polytope::dual(pg, &t);
            partners.push(d);
            if merge_e {
                partners.push(polytope::enantiomorph(pg, &d));
            }
        }
        for p in partners {
            if let Some(j) = find(&p, &taken) {
                taken[j] = true;
            }
        }
    }
    out
}

/// One representative per PΓL class of non-identity elements of `kind`,
/// sorted by order then code. Involutions are included when asked.
pub fn class_representatives(pg: &Pgl, kind: GroupKind, include_involutions: bool) -> Vec<ProjElement> {
    let f = pg.field();
    let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
    let odd = f.is_odd();
    let four = f.from_int(4);
    let mut reps = Vec::new();
    let mut seen = vec![false; if f.has_tables() { f.q() as usize } else { 0 }];
    for kappa in f.elements() {
        if kappa.is_zero() || kappa == four {
            continue;
        }
        if !seen.is_empty() {
            if seen[kappa.0 as usize] {
                continue;
            }
            for r in 0..f.degree() {
                seen[f.frobenius(kappa, r).0 as usize] = true;
            }
        } else if (1..f.degree()).any(|r| f.frobenius(kappa, r) < kappa) {
            continue;
        }
        if kind == GroupKind::Psl && odd && !f.is_square(kappa) {
            continue;
        }
        let c = f.neg(f.inv(kappa).unwrap());
        reps.push(pg.make([zero, c, one, one]).unwrap());
    }
    // Unipotent class: order p, an involution in characteristic 2.
    if odd || include_involutions {
        reps.push(pg.make([one, one, zero, one]).unwrap());
    }
    if odd && include_involutions {
        reps.push(pg.make([zero, f.neg(one), one, zero]).unwrap());
        if kind == GroupKind::Pgl {
            let nu = f.elements().find(|&x| !x.is_zero() && !f.is_square(x)).unwrap();
            reps.push(pg.make([zero, f.neg(nu), one, zero]).unwrap());
        }
    }
    reps.sort_by_key(|g| (pg.order(g), *g));
    reps
}

#[derive(Default)]
struct OrbitMemo {
    buckets: FxHashMap<Fingerprint, Vec<(RotationTriple, Verdict)>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Chiral,
    Regular,
    Invalid,
}

impl OrbitMemo {
    /// Verdict for the orbit of `t`, and whether it was newly computed.
    fn classify(&mut self, pg: &Pgl, t: &RotationTriple, stats: &mut SearchStats) -> (Verdict, bool) {
        let fp = polytope::fingerprint(pg, t);
        let bucket = self.buckets.entry(fp).or_default();
        for (rep, v) in bucket.iter() {
            if polytope::are_equivalent(pg, t, rep) {
                return (*v, false);
            }
        }
        stats.orbits_checked += 1;
        let v = match polytope::check_intersection(pg, t) {
            Ok(true) => match polytope::is_chiral(pg, t) {
                Ok(true) => Verdict::Chiral,
                Ok(false) => Verdict::Regular,
                Err(_) => Verdict::Invalid,
            },
            _ => Verdict::Invalid,
        };
        match v {
            Verdict::Chiral => stats.chiral_orbits += 1,
            Verdict::Regular => stats.regular_orbits += 1,
            Verdict::Invalid => {}
        }
        bucket.push((*t, v));
        (v, true)
    }
}

fn check_scale(pg: &Pgl) -> Result<()> {
    let q = pg.q();
    if q < 4 || q * (q * q - 1) > RANK4_LIMIT {
        return Err(Error::UnsupportedScale(format!("rank-4 search over GF({q})")));
    }
    Ok(())
}

/// Involutions `t` with `⟨σ2, t⟩` a proper subgroup.
fn proper_partners(pg: &Pgl, kind: GroupKind, s2: &ProjElement, invs: &[ProjElement]) -> Vec<ProjElement> {
    invs.iter()
        .filter(|t| !subgroup::generates(pg, &[*s2, **t], kind))
        .copied()
        .collect()
}

#[inline]
fn trace_of_product(pg: &Pgl, m: &ProjElement, s: &ProjElement) -> FieldElement {
    let f = pg.field();
    let [a, b, c, d] = m.0;
    let [e, g, h, k] = s.0;
    f.add(f.add(f.mul(a, e), f.mul(b, h)), f.add(f.mul(c, g), f.mul(d, k)))
}

/// Scans every `(t, s)` for one `σ2`, feeding new orbits into `memo`.
fn scan_sigma2(
    pg: &Pgl,
    kind: GroupKind,
    s2: &ProjElement,
    invs: &[ProjElement],
    memo: &mut OrbitMemo,
    stats: &mut SearchStats,
    found: &mut Vec<RotationTriple>,
) {
    let odd = pg.field().is_odd();
    let s2i = pg.inv(s2);
    let partners = proper_partners(pg, kind, s2, invs);
    // σ1 candidates, with the cyclic intersection checked once per t.
    let firsts: Vec<ProjElement> = partners
        .iter()
        .map(|t| pg.mul(t, &s2i))
        .filter(|s1| !s1.is_identity() && polytope::cyclic_intersection_trivial(pg, s1, s2))
        .collect();
    let thirds: Vec<(ProjElement, ProjElement)> = partners
        .iter()
        .map(|s| (*s, pg.mul(&s2i, s)))
        .filter(|(_, s3)| !s3.is_identity() && polytope::cyclic_intersection_trivial(pg, s2, s3))
        .collect();
    for s1 in &firsts {
        for (s, s3) in &thirds {
            let ok = if odd {
                trace_of_product(pg, s1, s).is_zero()
            } else {
                pg.is_involution(&pg.mul(s1, s))
            };
            if !ok {
                continue;
            }
            stats.candidates += 1;
            let t = RotationTriple::new(*s1, *s2, *s3);
            if !polytope::check_generation(pg, &t, kind) {
                continue;
            }
            let (v, fresh) = memo.classify(pg, &t, stats);
            if fresh && v == Verdict::Chiral {
                found.push(t);
            }
        }
    }
}

fn finish(pg: &Pgl, kind: GroupKind, triples: Vec<RotationTriple>, stats: SearchStats, provenance: &str) -> Result<Enumeration> {
    let mut records = triples
        .into_iter()
        .map(|t| PolytopeRecord::assemble(pg, kind, t, provenance))
        .collect::<Result<Vec<_>>>()?;
    polytope::sort_records(pg, &mut records);
    Ok(Enumeration { kind, records, stats })
}

/// All chiral 4-polytopes of `kind` over the field of `pg`, one record per
/// PΓL orbit of rotation triples. Uses the current rayon pool.
pub fn enumerate_rank4(pg: &Pgl, kind: GroupKind) -> Result<Enumeration> {
    check_scale(pg)?;
    let invs = pg.involutions(kind);
    let reps = class_representatives(pg, kind, false);
    // Different σ2 classes never give equivalent triples, so each class has
    // its own memo.
    let parts: Vec<(Vec<RotationTriple>, SearchStats)> = reps
        .par_iter()
        .map(|s2| {
            let mut memo = OrbitMemo::default();
            let mut stats = SearchStats { sigma2_reps: 1, ..Default::default() };
            let mut found = Vec::new();
            scan_sigma2(pg, kind, s2, &invs, &mut memo, &mut stats, &mut found);
            (found, stats)
        })
        .collect();
    let mut stats = SearchStats::default();
    let mut triples = Vec::new();
    for (found, st) in parts {
        stats.absorb(&st);
        triples.extend(found);
    }
    finish(pg, kind, triples, stats, "enumerated")
}

/// Same search with `σ2` running over every element of the group.
pub fn enumerate_rank4_naive(pg: &Pgl, kind: GroupKind) -> Result<Enumeration> {
    check_scale(pg)?;
    let invs = pg.involutions(kind);
    let mut memo = OrbitMemo::default();
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    for s2 in pg.elements().filter(|g| !g.is_identity() && pg.in_group(g, kind)) {
        stats.sigma2_reps += 1;
        scan_sigma2(pg, kind, &s2, &invs, &mut memo, &mut stats, &mut found);
    }
    finish(pg, kind, found, stats, "enumerated-naive")
}

/// Rotation quadruple of a rank-5 candidate.
pub type Quadruple = [ProjElement; 4];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank5Stats {
    pub relation_solutions: u64,
    pub generating: u64,
    pub intersection: u64,
    pub chiral: u64,
}

fn in_span(pg: &Pgl, gens: &[ProjElement], cache: &mut FxHashMap<Vec<ProjElement>, Vec<ProjElement>>) -> Vec<ProjElement> {
    let key = gens.to_vec();
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let mut els = StabChain::new(pg, gens).elements();
    els.sort_unstable();
    cache.insert(key, els.clone());
    els
}

/// `⟨σ_i : i ∈ I⟩ ∩ ⟨σ_j : j ∈ J⟩ = ⟨σ_k : k ∈ I∩J⟩` for all index sets.
fn rank5_intersection(pg: &Pgl, s: &Quadruple) -> bool {
    let mut cache = FxHashMap::default();
    let span = |mask: u32, cache: &mut FxHashMap<_, _>| {
        let gens: Vec<ProjElement> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        if gens.is_empty() {
            vec![ProjElement::IDENTITY]
        } else {
            in_span(pg, &gens, cache)
        }
    };
    for a in 1u32..16 {
        for b in 1u32..16 {
            if a & b == a || a & b == b || a > b {
                continue;
            }
            let ga = span(a, &mut cache);
            let gb = span(b, &mut cache);
            let gab = span(a & b, &mut cache);
            let common = ga.iter().filter(|g| gb.binary_search(g).is_ok()).count();
            if common != gab.len() {
                return false;
            }
        }
    }
    true
}

fn rank5_chiral(pg: &Pgl, s: &Quadruple) -> bool {
    let s1sq = pg.mul(&s[0], &s[0]);
    let mirror = [pg.inv(&s[0]), pg.mul(&s1sq, &s[1]), s[2], s[3]];
    polytope::find_isomorphism(pg, s, &mirror).is_none()
}

/// All chiral rank-5 rotation quadruples with `σ2` a class representative.
pub fn enumerate_rank5(pg: &Pgl, kind: GroupKind) -> Result<(Vec<Quadruple>, Rank5Stats)> {
    let q = pg.q();
    if !(4..=RANK5_MAX_Q).contains(&q) {
        return Err(Error::UnsupportedScale(format!("rank-5 search over GF({q})")));
    }
    let invs = pg.involutions(kind);
    let mut stats = Rank5Stats::default();
    let mut out = Vec::new();
    for s2 in class_representatives(pg, kind, true) {
        let s2i = pg.inv(&s2);
        for s in &invs {
            // σ2σ3 = s.
            let s3 = pg.mul(&s2i, s);
            if s3.is_identity() {
                continue;
            }
            for t in &invs {
                // σ1σ2 = t, σ1σ2σ3 = tσ3.
                let s1 = pg.mul(t, &s2i);
                if s1.is_identity() || !pg.is_involution(&pg.mul(t, &s3)) {
                    continue;
                }
                for u in &invs {
                    // σ3σ4 = u, σ2σ3σ4 = σ2u, σ1σ2σ3σ4 = tu.
                    let s4 = pg.mul(&pg.inv(&s3), u);
                    if s4.is_identity()
                        || !pg.is_involution(&pg.mul(&s2, u))
                        || !pg.is_involution(&pg.mul(t, u))
                    {
                        continue;
                    }
                    stats.relation_solutions += 1;
                    let quad = [s1, s2, s3, s4];
                    if !subgroup::generates(pg, &quad, kind) {
                        continue;
                    }
                    stats.generating += 1;
                    if !rank5_intersection(pg, &quad) {
                        continue;
                    }
                    stats.intersection += 1;
                    if rank5_chiral(pg, &quad) {
                        stats.chiral += 1;
                        out.push(quad);
                    }
                }
            }
        }
    }
    Ok((out, stats))
}

/// Table row for PSL(2,q): the count under [`COUNTING_CONVENTION`] with the
/// classifier's residues and case labels.
pub fn table2_row(q: u128) -> Result<Table2Row> {
    let pg = Pgl::new(FieldCtx::of_order(q)?);
    let e = enumerate_rank4(&pg, GroupKind::Psl)?;
    table2_row_from(&pg, &e)
}

pub fn table2_row_from(pg: &Pgl, e: &Enumeration) -> Result<Table2Row> {
    let q = pg.q();
    let report = classifier::classify(q, GroupKind::Psl)?;
    let (q_mod_4, q_mod_20) = classifier::table_residue_columns(q);
    Ok(Table2Row {
        q,
        count: Some(e.count(pg, COUNTING_CONVENTION)),
        q_mod_4,
        q_mod_20,
        cases: report.cases.iter().map(|c| c.label()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn pgl(q: u128) -> Pgl {
        Pgl::new(FieldCtx::of_order(q).unwrap())
    }

    #[test]
    fn class_reps_cover_orders() {
        let pg = pgl(13);
        let reps = class_representatives(&pg, GroupKind::Psl, false);
        let mut orders: Vec<u128> = reps.iter().map(|g| pg.order(g)).collect();
        orders.dedup();
        assert_eq!(orders, vec![3, 6, 7, 13]);
        let reps = class_representatives(&pg, GroupKind::Pgl, true);
        let total: u128 = reps.iter().map(|g| pg.group_order(GroupKind::Pgl) / pg.centralizer(g).len() as u128).sum();
        assert_eq!(total + 1, pg.group_order(GroupKind::Pgl));
    }

    #[test]
    fn small_counts() {
        for (q, expect) in [(7u128, 0usize), (8, 2), (13, 6)] {
            let pg = pgl(q);
            let e = enumerate_rank4(&pg, GroupKind::Psl).unwrap();
            assert_eq!(e.count(&pg, COUNTING_CONVENTION), expect, "q={q}");
        }
    }
}
