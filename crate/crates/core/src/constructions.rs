//! Explicit families of chiral 4-polytopes.
//!
//! * Affine families: `σ2` diagonal, `σ1` fixing ∞ and `σ3` fixing 0, with
//!   both parabolic subgroups point stabilizers.
//! * Coxeter families of types [5,3,4], [5,3,5] and [3,5,3]: an icosahedral
//!   facet group extended by a third generator found by solving the trace
//!   conditions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::polytope::{self, PolytopeRecord, RotationTriple, SchlafliSymbol};
use crate::projective::{GroupKind, Pgl, ProjElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    PglAffine,
    PslAffine,
    T534,
    T535,
    T353,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PglAffine => "pgl",
            Family::PslAffine => "psl",
            Family::T534 => "534",
            Family::T535 => "535",
            Family::T353 => "353",
        }
    }

    pub fn group(self) -> GroupKind {
        match self {
            Family::PglAffine => GroupKind::Pgl,
            _ => GroupKind::Psl,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "pgl" | "pgl-affine" => Family::PglAffine,
            "psl" | "psl-affine" => Family::PslAffine,
            "534" | "[5,3,4]" => Family::T534,
            "535" | "[5,3,5]" => Family::T535,
            "353" | "[3,5,3]" => Family::T353,
            _ => return Err(Error::Parse(format!("family `{s}`"))),
        })
    }
}

/// One admissible `k` of an affine family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineEntry {
    pub k: u128,
    /// Least exponent of each Frobenius orbit of elements `j^l` of order `k`.
    pub exponents: Vec<u128>,
    pub predicted: u128,
    pub schlafli: SchlafliSymbol,
}

/// The affine triple for `j^l`, with `j` the canonical primitive element.
pub fn pgl_triple(pg: &Pgl, l: u128) -> Result<RotationTriple> {
    let f = pg.field();
    let jl = f.pow(f.primitive_element(), l);
    let k = f.element_order(jl)?;
    if k <= 2 {
        return Err(Error::OrderTooSmall(k));
    }
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let s1 = pg.make([f.neg(f.inv(jl)?), o, z, o])?;
    let s2 = pg.make([jl, z, z, o])?;
    let s3 = pg.make([o, z, f.add(o, jl), f.neg(jl)])?;
    Ok(RotationTriple::new(s1, s2, s3))
}

/// Whether `k` divides `p^e ± 1` for some `1 ≤ e < d`.
fn divides_smaller_field(k: u128, p: u128, d: usize) -> bool {
    let mut pe = 1u128;
    for _ in 1..d {
        pe = pe.saturating_mul(p);
        if (pe - 1) % k == 0 || (pe + 1) % k == 0 {
            return true;
        }
    }
    false
}

/// Least exponents `l` of the Frobenius orbits of elements of order `k`.
fn orbit_exponents(f: &FieldCtx, k: u128) -> Vec<u128> {
    let q = f.q();
    let p = f.p() as u128;
    let step = (q - 1) / k;
    let mut out = Vec::new();
    for m in 1..k {
        if arith::gcd(m, k) != 1 {
            continue;
        }
        // Orbit of m under multiplication by p modulo k.
        let mut least = m;
        let mut x = m;
        for _ in 1..f.degree() {
            x = arith::mul_mod(x, p, k);
            least = least.min(x);
        }
        if least == m {
            out.push(m * step);
        }
    }
    out
}

fn affine_type(k: u128, half: bool) -> SchlafliSymbol {
    if half {
        SchlafliSymbol::new(k / 2, k, k / 2)
    } else {
        SchlafliSymbol::new(k, k, k)
    }
}

/// Admissible `k` for the PGL affine family.
pub fn pgl_family(f: &FieldCtx) -> Vec<AffineEntry> {
    let q = f.q();
    let p = f.p() as u128;
    let d = f.degree();
    if q <= 4 {
        return Vec::new();
    }
    let half = q % 4 == 3;
    arith::divisors(q - 1)
        .into_iter()
        .filter(|&k| k > 2)
        .filter(|&k| q % 2 == 0 || ((q - 1) / 2) % k != 0)
        .filter(|&k| !divides_smaller_field(k, p, d))
        .map(|k| AffineEntry {
            k,
            exponents: orbit_exponents(f, k),
            predicted: arith::euler_phi(k) / d as u128,
            schlafli: affine_type(k, half),
        })
        .collect()
}

/// Admissible `k` for the PSL affine family; requires `q ≡ 1 (mod 4)`.
pub fn psl_family(f: &FieldCtx) -> Result<Vec<AffineEntry>> {
    let q = f.q();
    if q % 4 != 1 {
        return Err(Error::WrongResidue(q % 4));
    }
    let p = f.p() as u128;
    let d = f.degree();
    Ok(arith::divisors((q - 1) / 2)
        .into_iter()
        .filter(|&k| k > 2 && k % 2 == 0)
        .filter(|&k| !divides_smaller_field(k, p, d))
        .map(|k| AffineEntry {
            k,
            exponents: orbit_exponents(f, k),
            predicted: arith::euler_phi(k) / d as u128,
            schlafli: affine_type(k, k % 4 == 2),
        })
        .collect())
}

/// Verified records of an affine family, one per admissible `(k, l)`.
pub fn build_affine(pg: &Pgl, kind: GroupKind) -> Result<Vec<PolytopeRecord>> {
    let f = pg.field();
    let (entries, family) = match kind {
        GroupKind::Pgl => (pgl_family(f), Family::PglAffine),
        GroupKind::Psl if f.q() % 2 == 0 => (pgl_family(f), Family::PslAffine),
        GroupKind::Psl => (psl_family(f)?, Family::PslAffine),
    };
    let mut out = Vec::new();
    for e in entries {
        for &l in &e.exponents {
            let t = pgl_triple(pg, l)?;
            out.push(PolytopeRecord::new(pg, kind, t, &format!("{family} k={} l={l}", e.k))?);
        }
    }
    Ok(out)
}

/// Images of the rotation generators of the icosahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IcosahedralPair {
    /// Order 5.
    pub s1: ProjElement,
    /// Order 3.
    pub s2: ProjElement,
    pub branch: usize,
    /// `(−1 ± √5)/2`.
    pub t: FieldElement,
    pub a: FieldElement,
    pub b: FieldElement,
}

/// Canonical square root of 5, when it exists and is nonzero.
pub fn sqrt5(f: &FieldCtx) -> Result<FieldElement> {
    if !f.is_odd() || f.p() == 5 {
        return Err(Error::NoSqrt5);
    }
    f.sqrt(f.from_int(5)).map_err(|_| Error::NoSqrt5)
}

/// The two inequivalent embeddings of A5, for traces `t1 = (−1+√5)/2` and
/// `t2 = (−1−√5)/2`.
pub fn icosahedral_embeddings(pg: &Pgl) -> Result<(IcosahedralPair, IcosahedralPair)> {
    let f = pg.field();
    let r5 = sqrt5(f)?;
    let half = f.inv(f.from_int(2))?;
    let t1 = f.mul(f.sub(r5, f.one()), half);
    let t2 = f.mul(f.sub(f.neg(r5), f.one()), half);
    Ok((embedding_with_trace(pg, t1, 1)?, embedding_with_trace(pg, t2, 2)?))
}

/// Embedding with `σ1` of trace `t`, using the least `a ≠ 0` with
/// `t² − 3 − a²` a square.
pub fn embedding_with_trace(pg: &Pgl, t: FieldElement, branch: usize) -> Result<IcosahedralPair> {
    let f = pg.field();
    let target = f.sub(f.square(t), f.from_int(3));
    let (a, b) = f
        .elements()
        .filter(|a| !a.is_zero())
        .find_map(|a| f.sqrt(f.sub(target, f.square(a))).ok().map(|b| (a, b)))
        .ok_or(Error::NoSqrt5)?;
    let one = f.one();
    let s1 = pg.make([f.sub(t, b), f.add(a, one), f.sub(a, one), f.add(t, b)])?;
    let s2 = pg.make([f.add(a, one), f.add(t, b), f.sub(b, t), f.sub(one, a)])?;
    Ok(IcosahedralPair { s1, s2, branch, t, a, b })
}

/// Discriminant of the quadratic whose roots give the [5,3,4] extensions.
pub fn discriminant_534(f: &FieldCtx, pair: &IcosahedralPair) -> FieldElement {
    let (a2, b2) = (f.square(pair.a), f.square(pair.b));
    let two = f.from_int(2);
    f.sub(f.mul(two, b2), f.mul(two, f.mul(f.add(a2, b2), f.add(a2, f.one()))))
}

fn raw_det(f: &FieldCtx, m: &[FieldElement; 4]) -> FieldElement {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

/// Kernel basis and one particular solution of `A x = rhs` over four unknowns.
fn solve_affine(
    f: &FieldCtx,
    rows: &[([FieldElement; 4], FieldElement)],
) -> Option<([FieldElement; 4], Vec<[FieldElement; 4]>)> {
    let mut m: Vec<([FieldElement; 4], FieldElement)> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        let Some(pr) = (r..m.len()).find(|&i| !m[i].0[col].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r].0[col]).unwrap();
        for k in 0..4 {
            m[r].0[k] = f.mul(m[r].0[k], inv);
        }
        m[r].1 = f.mul(m[r].1, inv);
        for i in 0..m.len() {
            if i != r && !m[i].0[col].is_zero() {
                let s = m[i].0[col];
                for k in 0..4 {
                    m[i].0[k] = f.sub(m[i].0[k], f.mul(s, m[r].0[k]));
                }
                m[i].1 = f.sub(m[i].1, f.mul(s, m[r].1));
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|(_, c)| !c.is_zero()) {
        return None;
    }
    let mut particular = [FieldElement::ZERO; 4];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = m[i].1;
    }
    let kernel = (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = [FieldElement::ZERO; 4];
            v[fc] = FieldElement::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[i].0[fc]);
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

fn add_scaled(f: &FieldCtx, x: &[FieldElement; 4], s: FieldElement, y: &[FieldElement; 4]) -> [FieldElement; 4] {
    [0, 1, 2, 3].map(|i| f.add(x[i], f.mul(s, y[i])))
}

/// Roots of `c0 + c1 λ + c2 λ²`; every element when the polynomial vanishes.
fn quadratic_roots(f: &FieldCtx, c0: FieldElement, c1: FieldElement, c2: FieldElement) -> Vec<FieldElement> {
    if c2.is_zero() {
        if c1.is_zero() {
            return if c0.is_zero() { f.elements().collect() } else { Vec::new() };
        }
        return vec![f.neg(f.div(c0, c1).unwrap())];
    }
    crate::field::Poly::new(vec![c0, c1, c2]).roots(f)
}

/// Every `σ3` with `tr(σ3)²/det(σ3) = target` making `(s1, s2, σ3)` satisfy
/// the involution relations.
pub fn complete_triple(pg: &Pgl, s1: &ProjElement, s2: &ProjElement, target: FieldElement) -> Vec<RotationTriple> {
    let f = pg.field();
    let Ok(tau) = f.sqrt(target) else {
        return Vec::new();
    };
    let s12 = pg.mul_raw(&s1.0, &s2.0);
    // tr(M X) for X = [[w,x],[y,z]] is m0 w + m2 x + m1 y + m3 z.
    let tr_row = |m: &[FieldElement; 4]| [m[0], m[2], m[1], m[3]];
    let rows = [
        ([f.one(), FieldElement::ZERO, FieldElement::ZERO, f.one()], tau),
        (tr_row(&s2.0), FieldElement::ZERO),
        (tr_row(&s12), FieldElement::ZERO),
    ];
    let Some((part, kernel)) = solve_affine(f, &rows) else {
        return Vec::new();
    };
    let mut sols: Vec<[FieldElement; 4]> = Vec::new();
    let mut push_line = |base: [FieldElement; 4], dir: [FieldElement; 4]| {
        // det(base + λ dir) = 1.
        let c0 = f.sub(raw_det(f, &base), f.one());
        let c2 = raw_det(f, &dir);
        let c1 = f.sub(
            f.add(f.mul(base[0], dir[3]), f.mul(base[3], dir[0])),
            f.add(f.mul(base[1], dir[2]), f.mul(base[2], dir[1])),
        );
        for lam in quadratic_roots(f, c0, c1, c2) {
            sols.push(add_scaled(f, &base, lam, &dir));
        }
    };
    match kernel.len() {
        0 => {
            if raw_det(f, &part) == f.one() {
                sols.push(part);
            }
        }
        1 => push_line(part, kernel[0]),
        _ => {
            for mu in f.elements().collect::<Vec<_>>() {
                push_line(add_scaled(f, &part, mu, &kernel[1]), kernel[0]);
            }
        }
    }
    let mut out: Vec<RotationTriple> = sols
        .into_iter()
        .filter_map(|m| pg.make(m).ok())
        .map(|s3| RotationTriple::new(*s1, *s2, s3))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Outcome of building a Coxeter family.
#[derive(Clone, Debug, Default)]
pub struct FamilyBuild {
    /// Chiral, pairwise inequivalent.
    pub records: Vec<PolytopeRecord>,
    /// Generating triples with a mirror automorphism, pairwise inequivalent.
    /// These need not satisfy the intersection condition.
    pub regular: Vec<RotationTriple>,
    /// Solutions failing generation or intersection.
    pub rejected: usize,
}

fn squared_traces_of_order5(pg: &Pgl) -> Result<[FieldElement; 2]> {
    let f = pg.field();
    let (p1, p2) = icosahedral_embeddings(pg)?;
    Ok([f.square(p1.t), f.square(p2.t)])
}

fn finish_family(pg: &Pgl, family: Family, candidates: Vec<RotationTriple>) -> Result<FamilyBuild> {
    let mut out = FamilyBuild::default();
    let mut kept: Vec<RotationTriple> = Vec::new();
    for t in candidates {
        if kept.iter().any(|k| polytope::are_equivalent(pg, k, &t)) {
            continue;
        }
        kept.push(t);
        let v = polytope::verify(pg, &t, GroupKind::Psl);
        if v.all_pass() {
            let label = format!("{family} branch={}", out.records.len() + out.regular.len() + 1);
            out.records.push(PolytopeRecord::assemble(pg, GroupKind::Psl, t, &label)?);
        } else if v.relations && v.generation && v.chiral == Some(false) {
            out.regular.push(t);
        } else {
            out.rejected += 1;
        }
    }
    polytope::sort_records(pg, &mut out.records);
    Ok(out)
}

/// Chiral [5,3,4] polytopes with group PSL(2,q).
pub fn build_family_534(pg: &Pgl) -> Result<FamilyBuild> {
    let f = pg.field();
    let Ok((p1, p2)) = icosahedral_embeddings(pg) else {
        return Ok(FamilyBuild::default());
    };
    let two = f.from_int(2);
    let mut cands = Vec::new();
    for pair in [p1, p2] {
        cands.extend(complete_triple(pg, &pair.s1, &pair.s2, two));
    }
    finish_family(pg, Family::T534, cands)
}

/// Chiral [5,3,5] polytopes with group PSL(2,q).
pub fn build_family_535(pg: &Pgl) -> Result<FamilyBuild> {
    let Ok((p1, p2)) = icosahedral_embeddings(pg) else {
        return Ok(FamilyBuild::default());
    };
    let targets = squared_traces_of_order5(pg)?;
    let mut cands = Vec::new();
    for pair in [p1, p2] {
        for &target in &targets {
            cands.extend(complete_triple(pg, &pair.s1, &pair.s2, target));
        }
    }
    finish_family(pg, Family::T535, cands)
}

/// Chiral [3,5,3] polytopes with group PSL(2,q).
pub fn build_family_353(pg: &Pgl) -> Result<FamilyBuild> {
    let f = pg.field();
    let Ok((p1, p2)) = icosahedral_embeddings(pg) else {
        return Ok(FamilyBuild::default());
    };
    let mut cands = Vec::new();
    for pair in [p1, p2] {
        // Facet of type {3,5}: the inverted generators in reverse order.
        let (a, b) = (pg.inv(&pair.s2), pg.inv(&pair.s1));
        cands.extend(complete_triple(pg, &a, &b, f.one()));
    }
    finish_family(pg, Family::T353, cands)
}

pub fn build_family(pg: &Pgl, family: Family) -> Result<Vec<PolytopeRecord>> {
    match family {
        Family::PglAffine => build_affine(pg, GroupKind::Pgl),
        Family::PslAffine => build_affine(pg, GroupKind::Psl),
        Family::T534 => Ok(build_family_534(pg)?.records),
        Family::T535 => Ok(build_family_535(pg)?.records),
        Family::T353 => Ok(build_family_353(pg)?.records),
    }
}
