//! Generated subgroups of PGL(2,q) and their place in Dickson's list.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::projective::{GroupKind, Pgl, ProjElement, ProjPoint};
use crate::schreier::StabChain;

/// Default materialization cap.
pub const DEFAULT_CAP: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupClass {
    Trivial,
    Cyclic(u128),
    /// Dihedral group of the given order `2k`.
    Dihedral(u128),
    /// `E_q ⋊ C_k`.
    Affine { q: u128, k: u128 },
    A4,
    S4,
    A5,
    SubfieldPsl { e: usize, q: u128 },
    SubfieldPgl { e: usize, q: u128 },
    FullPsl { q: u128 },
    FullPgl { q: u128 },
}

fn psl_order(q: u128) -> u128 {
    q * (q * q - 1) / arith::gcd(2, q - 1)
}

fn pgl_order(q: u128) -> u128 {
    q * (q * q - 1)
}

impl SubgroupClass {
    pub fn order(&self) -> u128 {
        match *self {
            SubgroupClass::Trivial => 1,
            SubgroupClass::Cyclic(k) | SubgroupClass::Dihedral(k) => k,
            SubgroupClass::Affine { q, k } => q * k,
            SubgroupClass::A4 => 12,
            SubgroupClass::S4 => 24,
            SubgroupClass::A5 => 60,
            SubgroupClass::SubfieldPsl { q, .. } | SubgroupClass::FullPsl { q } => psl_order(q),
            SubgroupClass::SubfieldPgl { q, .. } | SubgroupClass::FullPgl { q } => pgl_order(q),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, SubgroupClass::FullPsl { .. } | SubgroupClass::FullPgl { .. })
    }

    /// Whether this is the whole of `kind` over GF(q). For even q the two
    /// groups coincide.
    pub fn is_full_group(&self, kind: GroupKind, q: u128) -> bool {
        match (self, kind) {
            (SubgroupClass::FullPgl { q: q1 }, _) if *q1 == q && q % 2 == 0 => true,
            (SubgroupClass::FullPsl { q: q1 }, GroupKind::Psl) => *q1 == q,
            (SubgroupClass::FullPgl { q: q1 }, GroupKind::Pgl) => *q1 == q,
            _ => false,
        }
    }
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SubgroupClass::Trivial => write!(f, "1"),
            SubgroupClass::Cyclic(k) => write!(f, "C_{k}"),
            SubgroupClass::Dihedral(n) => write!(f, "D_{n}"),
            SubgroupClass::Affine { q, k: 1 } => write!(f, "E_{q}"),
            SubgroupClass::Affine { q, k } => write!(f, "E_{q}:C_{k}"),
            SubgroupClass::A4 => write!(f, "A4"),
            SubgroupClass::S4 => write!(f, "S4"),
            SubgroupClass::A5 => write!(f, "A5"),
            SubgroupClass::SubfieldPsl { q, .. } | SubgroupClass::FullPsl { q } => {
                write!(f, "PSL(2,{q})")
            }
            SubgroupClass::SubfieldPgl { q, .. } | SubgroupClass::FullPgl { q } => {
                write!(f, "PGL(2,{q})")
            }
        }
    }
}

impl FromStr for SubgroupClass {
    type Err = Error;

    /// Parses the display form. `PSL(2,q)`/`PGL(2,q)` parse as full groups;
    /// use [`SubgroupClass::relative_to`] to reinterpret them as subfield
    /// subgroups of a larger field.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("subgroup class `{s}`"));
        let num = |t: &str| t.parse::<u128>().map_err(|_| bad());
        Ok(match s {
            "1" => SubgroupClass::Trivial,
            "A4" => SubgroupClass::A4,
            "S4" => SubgroupClass::S4,
            "A5" => SubgroupClass::A5,
            _ if s.starts_with("PSL(2,") && s.ends_with(')') => {
                SubgroupClass::FullPsl { q: num(&s[6..s.len() - 1])? }
            }
            _ if s.starts_with("PGL(2,") && s.ends_with(')') => {
                SubgroupClass::FullPgl { q: num(&s[6..s.len() - 1])? }
            }
            _ if s.starts_with("C_") => SubgroupClass::Cyclic(num(&s[2..])?),
            _ if s.starts_with("D_") => SubgroupClass::Dihedral(num(&s[2..])?),
            _ if s.starts_with("E_") => match s[2..].split_once(":C_") {
                Some((q, k)) => SubgroupClass::Affine { q: num(q)?, k: num(k)? },
                None => SubgroupClass::Affine { q: num(&s[2..])?, k: 1 },
            },
            _ => return Err(bad()),
        })
    }
}

impl SubgroupClass {
    /// Reinterprets a full-group class over a proper subfield of GF(q) as a
    /// subfield subgroup.
    pub fn relative_to(self, q: u128) -> SubgroupClass {
        let degree = |q0: u128| {
            let (_, e) = arith::prime_power(q0).unwrap_or((q0, 1));
            e as usize
        };
        match self {
            SubgroupClass::FullPsl { q: q0 } if q0 != q => {
                SubgroupClass::SubfieldPsl { e: degree(q0), q: q0 }
            }
            SubgroupClass::FullPgl { q: q0 } if q0 != q => {
                SubgroupClass::SubfieldPgl { e: degree(q0), q: q0 }
            }
            other => other,
        }
    }
}

/// A generated subgroup, with its elements when small enough.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub generators: Vec<ProjElement>,
    /// Sorted, when materialized.
    pub elements: Option<Vec<ProjElement>>,
    pub order: u128,
    pub class: SubgroupClass,
}

impl SubgroupHandle {
    pub fn contains(&self, g: &ProjElement) -> Result<bool> {
        match &self.elements {
            Some(els) => Ok(els.binary_search(g).is_ok()),
            None => Err(Error::ElementsNotMaterialized),
        }
    }
}

pub fn generate(pg: &Pgl, gens: &[ProjElement], cap: u128) -> Result<SubgroupHandle> {
    let sc = StabChain::new(pg, gens);
    let order = sc.order();
    let elements = (order <= cap).then(|| {
        let mut els = sc.elements();
        els.sort_unstable();
        els
    });
    let class = classify_parts(pg, gens, order, elements.as_deref())?;
    Ok(SubgroupHandle {
        generators: gens.to_vec(),
        elements,
        order,
        class,
    })
}

pub fn classify(pg: &Pgl, h: &SubgroupHandle) -> Result<SubgroupClass> {
    classify_parts(pg, &h.generators, h.order, h.elements.as_deref())
}

/// Common fixed points of a set of elements.
pub fn common_fixed_points(pg: &Pgl, gens: &[ProjElement]) -> Vec<ProjPoint> {
    let mut it = gens.iter().filter(|g| !g.is_identity());
    let Some(first) = it.next() else {
        return Vec::new();
    };
    let mut pts = pg.fixed_points_unchecked(first);
    for g in it {
        pts.retain(|&z| pg.fixes(g, z));
        if pts.is_empty() {
            break;
        }
    }
    pts
}

fn classify_parts(
    pg: &Pgl,
    gens: &[ProjElement],
    order: u128,
    elements: Option<&[ProjElement]>,
) -> Result<SubgroupClass> {
    let f = pg.field();
    let q = pg.q();
    let p = f.p() as u128;
    let odd = f.is_odd();
    if order == 1 {
        return Ok(SubgroupClass::Trivial);
    }
    if order == pgl_order(q) {
        return Ok(SubgroupClass::FullPgl { q });
    }
    if odd && order == psl_order(q) {
        return Ok(SubgroupClass::FullPsl { q });
    }
    let source: Vec<ProjElement> = match elements {
        Some(els) if gens.is_empty() => els.to_vec(),
        _ => gens.to_vec(),
    };
    if !common_fixed_points(pg, &source).is_empty() {
        let mut qp = 1u128;
        let mut rest = order;
        while rest % p == 0 {
            qp *= p;
            rest /= p;
        }
        return Ok(match (qp, rest) {
            (1, k) => SubgroupClass::Cyclic(k),
            (qp, 1) if qp == p => SubgroupClass::Cyclic(p),
            (qp, 2) if qp == p && odd => SubgroupClass::Dihedral(2 * p),
            (qp, k) => SubgroupClass::Affine { q: qp, k },
        });
    }
    if let Some(els) = elements {
        let mut max_order = 0u128;
        for g in els {
            max_order = max_order.max(pg.order(g));
        }
        let abelian = source
            .iter()
            .enumerate()
            .all(|(i, a)| source[i + 1..].iter().all(|b| pg.commutes(a, b)));
        if max_order == order {
            return Ok(SubgroupClass::Cyclic(order));
        }
        if abelian && order == 4 {
            return Ok(SubgroupClass::Dihedral(4));
        }
        if !abelian && order % 2 == 0 && max_order == order / 2 && order >= 6 {
            return Ok(SubgroupClass::Dihedral(order));
        }
        match order {
            12 => return Ok(SubgroupClass::A4),
            24 => return Ok(SubgroupClass::S4),
            60 => return Ok(SubgroupClass::A5),
            _ => {}
        }
    }
    let d = f.degree();
    for e in (1..d).filter(|e| d % e == 0) {
        let q0 = p.pow(e as u32);
        if order == psl_order(q0) && (odd || q0 > 2) {
            return Ok(if odd {
                SubgroupClass::SubfieldPsl { e, q: q0 }
            } else {
                SubgroupClass::SubfieldPgl { e, q: q0 }
            });
        }
        if odd && order == pgl_order(q0) {
            return Ok(SubgroupClass::SubfieldPgl { e, q: q0 });
        }
    }
    Err(Error::UnrecognizedSubgroup(format!(
        "order {order} in PGL(2,{q})"
    )))
}

/// Set intersection of two materialized subgroups.
pub fn intersect(pg: &Pgl, h1: &SubgroupHandle, h2: &SubgroupHandle) -> Result<SubgroupHandle> {
    let (Some(a), Some(b)) = (&h1.elements, &h2.elements) else {
        return Err(Error::ElementsNotMaterialized);
    };
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let common: Vec<ProjElement> = small
        .iter()
        .filter(|g| large.binary_search(g).is_ok())
        .copied()
        .collect();
    let order = common.len() as u128;
    let class = classify_parts(pg, &[], order, Some(&common))?;
    Ok(SubgroupHandle {
        generators: common.clone(),
        elements: Some(common),
        order,
        class,
    })
}

/// Degree over GF(p) of the field generated by `tr²/det` of the generators,
/// their pairwise products and the product of all of them.
pub fn trace_field_degree(pg: &Pgl, gens: &[ProjElement]) -> usize {
    let mut vals = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        vals.push(pg.trace_invariant(a));
        for b in &gens[i + 1..] {
            vals.push(pg.trace_invariant(&pg.mul(a, b)));
        }
    }
    if gens.len() > 2 {
        let all = gens.iter().fold(ProjElement::IDENTITY, |acc, g| pg.mul(&acc, g));
        vals.push(pg.trace_invariant(&all));
    }
    pg.field().generated_subfield_degree(vals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Full,
    Proper,
    Unknown,
}

/// Cheap generation test built on Dickson's list: a subgroup with no common
/// fixed point, two non-commuting elements of order above 2, an element of
/// order above 5, and tr²/det values generating GF(q) is PSL(2,q) or PGL(2,q).
pub fn quick_generation(pg: &Pgl, gens: &[ProjElement], kind: GroupKind) -> Verdict {
    let f = pg.field();
    let gens: Vec<ProjElement> = gens.iter().filter(|g| !g.is_identity()).copied().collect();
    if gens.is_empty() {
        return Verdict::Proper;
    }
    let need_outside_psl = kind == GroupKind::Pgl && f.is_odd();
    if need_outside_psl && gens.iter().all(|g| pg.in_psl(g)) {
        return Verdict::Proper;
    }
    if !common_fixed_points(pg, &gens).is_empty() {
        return Verdict::Proper;
    }
    if gens.len() == 2 && pg.commutator_trace(&gens[0], &gens[1]) == f.from_int(2) {
        return Verdict::Proper;
    }
    if gens.len() == 1 {
        return Verdict::Proper;
    }
    let mut words = gens.clone();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            words.push(pg.mul(a, b));
            words.push(pg.mul(a, &pg.inv(b)));
            words.push(pg.mul3(a, a, b));
            words.push(pg.mul3(a, b, b));
        }
    }
    let big: Vec<(ProjElement, u128)> = words
        .iter()
        .map(|w| (*w, pg.order(w)))
        .filter(|&(_, o)| o > 2)
        .collect();
    if !big.iter().any(|&(_, o)| o > 5) {
        return Verdict::Unknown;
    }
    let noncommuting = big
        .iter()
        .enumerate()
        .any(|(i, (a, _))| big[i + 1..].iter().any(|(b, _)| !pg.commutes(a, b)));
    if !noncommuting {
        return Verdict::Unknown;
    }
    let kappas = words.iter().map(|w| pg.trace_invariant(w));
    if f.generated_subfield_degree(kappas) != f.degree() {
        return Verdict::Unknown;
    }
    Verdict::Full
}

/// Exact test for `⟨gens⟩` being all of `kind`.
pub fn generates(pg: &Pgl, gens: &[ProjElement], kind: GroupKind) -> bool {
    match quick_generation(pg, gens, kind) {
        Verdict::Full => true,
        Verdict::Proper => false,
        Verdict::Unknown => generates_exact(pg, gens, kind),
    }
}

/// Generation decided by the stabilizer chain alone.
pub fn generates_exact(pg: &Pgl, gens: &[ProjElement], kind: GroupKind) -> bool {
    let in_kind = gens.iter().all(|g| pg.in_group(g, kind));
    in_kind && StabChain::new(pg, gens).order() == pg.group_order(kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, FieldElement};

    fn pgl(q: u128) -> Pgl {
        Pgl::new(FieldCtx::of_order(q).unwrap())
    }

    #[test]
    fn dihedral_torus_normalizer() {
        let pg = pgl(7);
        let j = pg.field().primitive_element();
        let diag = pg.make([j, FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]).unwrap();
        let w = pg.from_ints([0, 1, -1, 0]).unwrap();
        let h = generate(&pg, &[diag, w], DEFAULT_CAP).unwrap();
        assert_eq!(h.class, SubgroupClass::Dihedral(12));
    }

    #[test]
    fn trivial_and_cyclic() {
        let pg = pgl(11);
        let h = generate(&pg, &[ProjElement::IDENTITY], DEFAULT_CAP).unwrap();
        assert_eq!(h.class, SubgroupClass::Trivial);
        let u = pg.from_ints([1, 1, 0, 1]).unwrap();
        assert_eq!(generate(&pg, &[u], DEFAULT_CAP).unwrap().class, SubgroupClass::Cyclic(11));
    }

    #[test]
    fn class_strings() {
        for s in ["E_169:C_42", "E_13:C_6", "PSL(2,13)", "PGL(2,13)", "A5", "S4", "D_12", "C_7", "E_9"] {
            assert_eq!(s.parse::<SubgroupClass>().unwrap().to_string(), s);
        }
        let c: SubgroupClass = "PSL(2,13)".parse().unwrap();
        assert_eq!(c.relative_to(169), SubgroupClass::SubfieldPsl { e: 1, q: 13 });
        assert_eq!(c.relative_to(169).order(), 1092);
    }

    #[test]
    fn quick_test_agrees_with_chain() {
        for q in [7u128, 8, 9, 11, 13, 16, 25] {
            let pg = pgl(q);
            let els: Vec<ProjElement> = pg.elements().step_by(37).collect();
            for (i, a) in els.iter().enumerate().step_by(3) {
                for b in els.iter().skip(i).step_by(5) {
                    for kind in [GroupKind::Psl, GroupKind::Pgl] {
                        let gens = [*a, *b];
                        if !gens.iter().all(|g| pg.in_group(g, kind)) {
                            continue;
                        }
                        let exact = generates_exact(&pg, &gens, kind);
                        match quick_generation(&pg, &gens, kind) {
                            Verdict::Full => assert!(exact),
                            Verdict::Proper => assert!(!exact),
                            Verdict::Unknown => {}
                        }
                    }
                }
            }
        }
    }
}
