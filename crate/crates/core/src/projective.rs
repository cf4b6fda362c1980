//! PGL(2,q) as canonical 2x2 matrices acting on the projective line.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, Poly};

/// Matrix `[[a,b],[c,d]]` modulo scalars, scaled so that the first nonzero
/// entry in the order a, b, c, d is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjElement(pub [FieldElement; 4]);

impl ProjElement {
    pub const IDENTITY: ProjElement = ProjElement([
        FieldElement::ONE,
        FieldElement::ZERO,
        FieldElement::ZERO,
        FieldElement::ONE,
    ]);

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Affine(FieldElement),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    Psl,
    Pgl,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Psl => "PSL",
            GroupKind::Pgl => "PGL",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psl" => Ok(GroupKind::Psl),
            "pgl" => Ok(GroupKind::Pgl),
            _ => Err(Error::Parse(format!("group `{s}`, expected psl or pgl"))),
        }
    }
}

const KAPPA_TABLE_LIMIT: u128 = 1 << 16;

/// Group context: the field plus per-field caches.
pub struct Pgl {
    f: Arc<FieldCtx>,
    kappa_order: Option<Vec<u32>>,
}

impl fmt::Debug for Pgl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PGL(2, {})", self.f.describe())
    }
}

impl Pgl {
    pub fn new(f: Arc<FieldCtx>) -> Pgl {
        let mut g = Pgl { f, kappa_order: None };
        if g.f.q() <= KAPPA_TABLE_LIMIT {
            let table = g
                .f
                .elements()
                .map(|k| g.order_from_kappa_slow(k) as u32)
                .collect();
            g.kappa_order = Some(table);
        }
        g
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.f
    }

    #[inline]
    pub fn q(&self) -> u128 {
        self.f.q()
    }

    /// |PGL(2,q)| or |PSL(2,q)|.
    pub fn group_order(&self, kind: GroupKind) -> u128 {
        let q = self.q();
        let full = q * (q * q - 1);
        match kind {
            GroupKind::Pgl => full,
            GroupKind::Psl if self.f.is_odd() => full / 2,
            GroupKind::Psl => full,
        }
    }

    #[inline]
    pub fn canonical(&self, m: [FieldElement; 4]) -> ProjElement {
        let f = &*self.f;
        let lead = m.iter().position(|x| !x.is_zero()).expect("nonzero matrix");
        if m[lead] == FieldElement::ONE {
            return ProjElement(m);
        }
        let s = f.inv(m[lead]).unwrap();
        let mut out = [FieldElement::ZERO; 4];
        out[lead] = FieldElement::ONE;
        for i in lead + 1..4 {
            out[i] = f.mul(m[i], s);
        }
        ProjElement(out)
    }

    pub fn make(&self, m: [FieldElement; 4]) -> Result<ProjElement> {
        if self.det_raw(&m).is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.canonical(m))
    }

    pub fn from_ints(&self, m: [i128; 4]) -> Result<ProjElement> {
        self.make(m.map(|x| self.f.from_int(x)))
    }

    #[inline]
    fn det_raw(&self, m: &[FieldElement; 4]) -> FieldElement {
        let f = &*self.f;
        f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
    }

    #[inline]
    pub fn mul_raw(&self, x: &[FieldElement; 4], y: &[FieldElement; 4]) -> [FieldElement; 4] {
        let f = &*self.f;
        [
            f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
            f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
            f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
            f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
        ]
    }

    /// The product `g·h`.
    #[inline]
    pub fn mul(&self, g: &ProjElement, h: &ProjElement) -> ProjElement {
        self.canonical(self.mul_raw(&g.0, &h.0))
    }

    pub fn mul3(&self, a: &ProjElement, b: &ProjElement, c: &ProjElement) -> ProjElement {
        self.canonical(self.mul_raw(&self.mul_raw(&a.0, &b.0), &c.0))
    }

    #[inline]
    pub fn inv(&self, g: &ProjElement) -> ProjElement {
        let f = &*self.f;
        let [a, b, c, d] = g.0;
        self.canonical([d, f.neg(b), f.neg(c), a])
    }

    pub fn pow(&self, g: &ProjElement, mut e: u128) -> ProjElement {
        let mut acc = ProjElement::IDENTITY;
        let mut base = *g;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `h⁻¹·g·h`.
    pub fn conj(&self, g: &ProjElement, h: &ProjElement) -> ProjElement {
        self.mul3(&self.inv(h), g, h)
    }

    pub fn commutes(&self, g: &ProjElement, h: &ProjElement) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// Determinant of the canonical representative.
    #[inline]
    pub fn det(&self, g: &ProjElement) -> FieldElement {
        self.det_raw(&g.0)
    }

    /// Trace of the canonical representative.
    #[inline]
    pub fn trace(&self, g: &ProjElement) -> FieldElement {
        self.f.add(g.0[0], g.0[3])
    }

    /// `tr²/det`, invariant under scaling and conjugation.
    #[inline]
    pub fn trace_invariant(&self, g: &ProjElement) -> FieldElement {
        let f = &*self.f;
        let t = self.trace(g);
        f.mul(f.square(t), f.inv(self.det(g)).unwrap())
    }

    /// Trace of the commutator `g h g⁻¹ h⁻¹` of arbitrary lifts; equals 2
    /// exactly when `g` and `h` share an eigenvector over the closure.
    pub fn commutator_trace(&self, g: &ProjElement, h: &ProjElement) -> FieldElement {
        let f = &*self.f;
        let adj = |m: &[FieldElement; 4]| [m[3], f.neg(m[1]), f.neg(m[2]), m[0]];
        let c = self.mul_raw(
            &self.mul_raw(&g.0, &h.0),
            &self.mul_raw(&adj(&g.0), &adj(&h.0)),
        );
        let scale = f.mul(self.det(g), self.det(h));
        f.div(f.add(c[0], c[3]), scale).unwrap()
    }

    /// Order of a non-identity element with the given `tr²/det`.
    #[inline]
    pub fn order_from_kappa(&self, kappa: FieldElement) -> u128 {
        match &self.kappa_order {
            Some(t) => t[kappa.0 as usize] as u128,
            None => self.order_from_kappa_slow(kappa),
        }
    }

    fn order_from_kappa_slow(&self, kappa: FieldElement) -> u128 {
        let f = &*self.f;
        let four = f.from_int(4);
        if kappa == four {
            return f.p() as u128;
        }
        // The eigenvalue ratio m satisfies m + 1/m = kappa - 2, and
        // V_n = m^n + m^-n equals 2 exactly when m^n = 1.
        let s = f.sub(kappa, f.from_int(2));
        let two = f.from_int(2);
        let q = f.q();
        let (mut n, fac) = if self.lucas(s, q - 1) == two {
            (q - 1, f.factorization_q_minus_1().clone())
        } else {
            (q + 1, f.factorization_q_plus_1().clone())
        };
        for r in fac.primes() {
            while n % r == 0 && self.lucas(s, n / r) == two {
                n /= r;
            }
        }
        n
    }

    fn lucas(&self, s: FieldElement, n: u128) -> FieldElement {
        let f = &*self.f;
        let two = f.from_int(2);
        let (mut v0, mut v1) = (two, s);
        for bit in (0..128 - n.leading_zeros()).rev() {
            let cross = f.sub(f.mul(v0, v1), s);
            if (n >> bit) & 1 == 1 {
                v0 = cross;
                v1 = f.sub(f.square(v1), two);
            } else {
                v1 = cross;
                v0 = f.sub(f.square(v0), two);
            }
        }
        v0
    }

    /// Least `m ≥ 1` with `g^m` scalar.
    pub fn order(&self, g: &ProjElement) -> u128 {
        if g.is_identity() {
            1
        } else {
            self.order_from_kappa(self.trace_invariant(g))
        }
    }

    /// Order by repeated multiplication; test oracle.
    pub fn order_naive(&self, g: &ProjElement) -> u128 {
        let mut x = *g;
        let mut m = 1;
        while !x.is_identity() {
            x = self.mul(&x, g);
            m += 1;
        }
        m
    }

    #[inline]
    pub fn is_involution(&self, g: &ProjElement) -> bool {
        if g.is_identity() {
            return false;
        }
        if self.f.is_odd() {
            self.trace(g).is_zero()
        } else {
            self.mul(g, g).is_identity()
        }
    }

    #[inline]
    pub fn in_psl(&self, g: &ProjElement) -> bool {
        self.f.is_square(self.det(g))
    }

    pub fn in_group(&self, g: &ProjElement, kind: GroupKind) -> bool {
        kind == GroupKind::Pgl || self.in_psl(g)
    }

    /// `z ↦ (az+b)/(cz+d)`.
    pub fn apply(&self, g: &ProjElement, z: ProjPoint) -> ProjPoint {
        let f = &*self.f;
        let [a, b, c, d] = g.0;
        match z {
            ProjPoint::Infinity => {
                if c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Affine(f.div(a, c).unwrap())
                }
            }
            ProjPoint::Affine(x) => {
                let den = f.add(f.mul(c, x), d);
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Affine(f.div(f.add(f.mul(a, x), b), den).unwrap())
                }
            }
        }
    }

    /// Points as indices `0..=q`: affine codes, then `q` for infinity.
    #[inline]
    pub fn point_index(&self, z: ProjPoint) -> u128 {
        match z {
            ProjPoint::Affine(x) => x.0,
            ProjPoint::Infinity => self.q(),
        }
    }

    pub fn point_from_index(&self, i: u128) -> ProjPoint {
        if i == self.q() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Affine(FieldElement(i))
        }
    }

    pub fn fixed_points(&self, g: &ProjElement) -> Result<Vec<ProjPoint>> {
        if g.is_identity() {
            return Err(Error::IdentityElement);
        }
        Ok(self.fixed_points_unchecked(g))
    }

    /// Fixed points; empty for the identity.
    pub fn fixed_points_unchecked(&self, g: &ProjElement) -> Vec<ProjPoint> {
        let f = &*self.f;
        let [a, b, c, d] = g.0;
        let mut out = Vec::with_capacity(2);
        if g.is_identity() {
            return out;
        }
        if c.is_zero() {
            out.push(ProjPoint::Infinity);
            if a != d {
                out.push(ProjPoint::Affine(f.div(b, f.sub(d, a)).unwrap()));
            }
            out.sort();
            return out;
        }
        // c z^2 + (d - a) z - b = 0
        let bb = f.sub(d, a);
        let cc = f.neg(b);
        if f.is_odd() {
            let disc = f.sub(f.square(bb), f.mul(f.from_int(4), f.mul(c, cc)));
            if let Ok(r) = f.sqrt(disc) {
                let inv2c = f.inv(f.mul(f.from_int(2), c)).unwrap();
                let z1 = f.mul(f.sub(r, bb), inv2c);
                let z2 = f.mul(f.sub(f.neg(r), bb), inv2c);
                out.push(ProjPoint::Affine(z1));
                if z2 != z1 {
                    out.push(ProjPoint::Affine(z2));
                }
            }
        } else {
            let poly = Poly::new(vec![cc, bb, c]);
            out.extend(poly.roots(f).into_iter().map(ProjPoint::Affine));
        }
        out.sort();
        out
    }

    pub fn fixes(&self, g: &ProjElement, z: ProjPoint) -> bool {
        self.apply(g, z) == z
    }

    /// Entrywise `x ↦ x^(p^r)`.
    pub fn frobenius(&self, g: &ProjElement, r: usize) -> ProjElement {
        if r % self.f.degree() == 0 {
            return *g;
        }
        ProjElement(g.0.map(|x| self.f.frobenius(x, r)))
    }

    /// Every element of PGL(2,q) in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = ProjElement> + '_ {
        let q = self.q();
        let f = &*self.f;
        let with_a = (0..q).flat_map(move |b| {
            (0..q).flat_map(move |c| {
                (0..q).filter_map(move |d| {
                    let m = [FieldElement::ONE, FieldElement(b), FieldElement(c), FieldElement(d)];
                    (!f.sub(m[3], f.mul(m[1], m[2])).is_zero()).then_some(ProjElement(m))
                })
            })
        });
        let without_a = (1..q).flat_map(move |c| {
            (0..q).map(move |d| {
                ProjElement([FieldElement::ZERO, FieldElement::ONE, FieldElement(c), FieldElement(d)])
            })
        });
        without_a.chain(with_a)
    }

    /// All involutions of the given group.
    pub fn involutions(&self, kind: GroupKind) -> Vec<ProjElement> {
        self.elements()
            .filter(|g| self.is_involution(g) && self.in_group(g, kind))
            .collect()
    }

    /// `[[a,b],[c,d]]`.
    pub fn format(&self, g: &ProjElement) -> String {
        let e: Vec<String> = g.0.iter().map(|&x| self.f.format(x)).collect();
        format!("[[{},{}],[{},{}]]", e[0], e[1], e[2], e[3])
    }

    pub fn parse(&self, s: &str) -> Result<ProjElement> {
        let flat: String = s.chars().filter(|&ch| ch != '[' && ch != ']').collect();
        let mut tokens = Vec::new();
        let (mut depth, mut cur) = (0i32, String::new());
        for ch in flat.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch);
                }
                ',' if depth == 0 => tokens.push(std::mem::take(&mut cur)),
                _ => cur.push(ch),
            }
        }
        tokens.push(cur);
        if tokens.len() != 4 {
            return Err(Error::Parse(format!("matrix `{s}`")));
        }
        let mut m = [FieldElement::ZERO; 4];
        for (slot, tok) in m.iter_mut().zip(&tokens) {
            *slot = self.f.parse_element(tok)?;
        }
        self.make(m)
    }

    /// Every `h` with `h⁻¹·X·h = Y` for all pairs `(X, Y)`, sorted.
    ///
    /// Each pair gives the linear system `X h = μ h Y`, where the scalar μ is
    /// pinned by traces and determinants up to sign. The kernel is
    /// enumerated projectively, so pairs should not all be trivial.
    pub fn transporters(&self, pairs: &[(ProjElement, ProjElement)]) -> Vec<ProjElement> {
        let f = &*self.f;
        let mut options: Vec<Vec<FieldElement>> = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            let (tx, ty) = (self.trace(x), self.trace(y));
            let (dx, dy) = (self.det(x), self.det(y));
            let mus = if !ty.is_zero() {
                if tx.is_zero() {
                    return Vec::new();
                }
                let mu = f.div(tx, ty).unwrap();
                if f.mul(f.square(mu), dy) != dx {
                    return Vec::new();
                }
                vec![mu]
            } else {
                if !tx.is_zero() {
                    return Vec::new();
                }
                match f.sqrt(f.div(dx, dy).unwrap()) {
                    Ok(r) if r == f.neg(r) => vec![r],
                    Ok(r) => vec![r, f.neg(r)],
                    Err(_) => return Vec::new(),
                }
            };
            options.push(mus);
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; pairs.len()];
        loop {
            let mut rows = Vec::with_capacity(4 * pairs.len());
            for (i, (x, y)) in pairs.iter().enumerate() {
                let mu = options[i][choice[i]];
                let [x0, x1, x2, x3] = x.0;
                let [y0, y1, y2, y3] = y.0.map(|v| f.mul(mu, v));
                let z = FieldElement::ZERO;
                rows.push([f.sub(x0, y0), f.neg(y2), x1, z]);
                rows.push([f.neg(y1), f.sub(x0, y3), z, x1]);
                rows.push([x2, z, f.sub(x3, y0), f.neg(y2)]);
                rows.push([z, x2, f.neg(y1), f.sub(x3, y3)]);
            }
            let basis = nullspace(f, rows);
            for v in projective_points(f, &basis) {
                if !self.det_raw(&v).is_zero() {
                    out.push(self.canonical(v));
                }
            }
            // Next combination of scalar choices.
            let mut i = 0;
            loop {
                if i == pairs.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Centralizer of `g` in PGL(2,q); enumerates `O(q)` elements.
    pub fn centralizer(&self, g: &ProjElement) -> Vec<ProjElement> {
        self.transporters(&[(*g, *g)])
    }
}

/// Basis of the kernel of a 4-column matrix.
fn nullspace(f: &FieldCtx, mut rows: Vec<[FieldElement; 4]>) -> Vec<[FieldElement; 4]> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]).unwrap();
        for k in 0..4 {
            rows[r][k] = f.mul(rows[r][k], inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let s = rows[i][col];
                for k in 0..4 {
                    rows[i][k] = f.sub(rows[i][k], f.mul(s, rows[r][k]));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = [FieldElement::ZERO; 4];
            v[fc] = FieldElement::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][fc]);
            }
            v
        })
        .collect()
}

/// Representatives of the projective points of the span of `basis`.
fn projective_points(f: &FieldCtx, basis: &[[FieldElement; 4]]) -> Vec<[FieldElement; 4]> {
    let k = basis.len();
    let mut out = Vec::new();
    for lead in 0..k {
        let rest = k - lead - 1;
        let count = f.q().pow(rest as u32);
        for idx in 0..count {
            let mut v = basis[lead];
            let mut t = idx;
            for j in lead + 1..k {
                let c = FieldElement(t % f.q());
                t /= f.q();
                for i in 0..4 {
                    v[i] = f.add(v[i], f.mul(c, basis[j][i]));
                }
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgl(q: u128) -> Pgl {
        Pgl::new(FieldCtx::of_order(q).unwrap())
    }

    #[test]
    fn basic_products() {
        let g = pgl(7);
        let w = g.from_ints([0, 1, -1, 0]).unwrap();
        assert!(g.mul(&w, &w).is_identity());
        assert_eq!(g.order(&w), 2);
        assert!(g.is_involution(&w));
        let u = g.from_ints([1, 1, 0, 1]).unwrap();
        assert!(!g.is_involution(&u));
        assert_eq!(g.order(&u), 7);
        assert_eq!(g.fixed_points(&u).unwrap(), vec![ProjPoint::Infinity]);
        let z0 = ProjPoint::Affine(FieldElement::ZERO);
        assert_eq!(g.apply(&w, z0), ProjPoint::Infinity);
        assert_eq!(g.apply(&w, ProjPoint::Infinity), z0);
        assert_eq!(g.fixed_points(&ProjElement::IDENTITY), Err(Error::IdentityElement));
    }

    #[test]
    fn orders_match_iteration() {
        for q in [4, 5, 7, 8, 9, 11, 16, 25, 27] {
            let g = pgl(q);
            for x in g.elements() {
                assert_eq!(g.order(&x), g.order_naive(&x), "q={q} {}", g.format(&x));
            }
        }
    }

    #[test]
    fn diagonal_non_square_outside_psl() {
        let g = pgl(13);
        let j = g.field().primitive_element();
        let x = g.make([j, FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]).unwrap();
        assert!(!g.in_psl(&x));
        let fp = g.fixed_points(&x).unwrap();
        assert_eq!(fp, vec![ProjPoint::Affine(FieldElement::ZERO), ProjPoint::Infinity]);
    }

    #[test]
    fn text_round_trip() {
        let g = pgl(169);
        for x in g.elements().step_by(99_991).take(20) {
            assert_eq!(g.parse(&g.format(&x)).unwrap(), x);
        }
    }

    #[test]
    fn centralizer_sizes() {
        let g = pgl(11);
        let x = g.from_ints([2, 0, 0, 1]).unwrap();
        assert_eq!(g.centralizer(&x).len(), 10);
        let u = g.from_ints([1, 1, 0, 1]).unwrap();
        assert_eq!(g.centralizer(&u).len(), 11);
        let w = g.from_ints([0, 1, -1, 0]).unwrap();
        // Dihedral of order 2(q+1) since -1 is a non-square mod 11.
        assert_eq!(g.centralizer(&w).len(), 24);
    }
}
