//! Univariate polynomials over a `FieldCtx`, enough for irreducibility tests
//! and root finding.

use super::{FieldCtx, FieldElement};

/// Coefficients low degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<FieldElement>);

impl Poly {
    pub fn new(mut c: Vec<FieldElement>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::new(vec![c])
    }

    pub fn x() -> Poly {
        Poly(vec![FieldElement::ZERO, FieldElement::ONE])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.0.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn add(&self, f: &FieldCtx, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let c = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or_default();
                let b = other.0.get(i).copied().unwrap_or_default();
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, f: &FieldCtx, other: &Poly) -> Poly {
        let neg = Poly(other.0.iter().map(|&b| f.neg(b)).collect());
        self.add(f, &neg)
    }

    pub fn scale(&self, f: &FieldCtx, s: FieldElement) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, s)).collect())
    }

    pub fn mul(&self, f: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![FieldElement::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, f: &FieldCtx, div: &Poly) -> (Poly, Poly) {
        let dd = div.deg().expect("division by the zero polynomial");
        let inv_lead = f.inv(div.lead()).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), Poly::new(r));
        }
        let mut quot = vec![FieldElement::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in div.0.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.sub(r[k], f.mul(c, b));
            }
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, f: &FieldCtx, div: &Poly) -> Poly {
        self.divrem(f, div).1
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(f, inv)
    }

    pub fn gcd(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, f: &FieldCtx, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(f, m);
        let mut acc = Poly::constant(FieldElement::ONE).rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base).rem(f, m);
            }
        }
        acc
    }

    pub fn eval(&self, f: &FieldCtx, x: FieldElement) -> FieldElement {
        self.0
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// All roots in `f`, sorted by code.
    pub fn roots(&self, f: &FieldCtx) -> Vec<FieldElement> {
        if self.is_zero() {
            return Vec::new();
        }
        let m = self.monic(f);
        // Product of the distinct linear factors.
        let xq = Poly::x().powmod(f, f.q(), &m);
        let g = Poly::gcd(f, &m, &xq.sub(f, &Poly::x()));
        let mut out = Vec::new();
        split_linear(f, g, &mut out);
        out.sort_unstable();
        out
    }
}

fn split_linear(f: &FieldCtx, g: Poly, out: &mut Vec<FieldElement>) {
    match g.deg() {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(f.mul(g.0[0], f.inv(g.0[1]).unwrap()))),
        Some(n) => {
            for a in (1..f.q()).map(FieldElement) {
                let h = separator(f, &g, a);
                let h = Poly::gcd(f, &g, &h);
                if let Some(k) = h.deg() {
                    if k > 0 && k < n {
                        let (rest, _) = g.divrem(f, &h);
                        split_linear(f, h, out);
                        split_linear(f, rest.monic(f), out);
                        return;
                    }
                }
            }
            unreachable!("squarefree split polynomial always separates");
        }
    }
}

/// A polynomial whose gcd with `g` splits the roots of `g` for a suitable `a`.
fn separator(f: &FieldCtx, g: &Poly, a: FieldElement) -> Poly {
    if f.p() == 2 {
        // Absolute trace of a*x.
        let bits = f.degree();
        let ax = Poly::new(vec![FieldElement::ZERO, a]);
        let mut term = ax.rem(f, g);
        let mut acc = term.clone();
        for _ in 1..bits {
            term = term.mul(f, &term).rem(f, g);
            acc = acc.add(f, &term);
        }
        acc
    } else {
        let xa = Poly::new(vec![a, FieldElement::ONE]);
        xa.powmod(f, (f.q() - 1) / 2, g)
            .sub(f, &Poly::constant(FieldElement::ONE))
    }
}
