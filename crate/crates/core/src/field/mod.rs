//! Exact arithmetic in GF(p^d).
//!
//! An element is stored as a packed code: the base-p number whose digits are
//! the coefficients of its residue polynomial, constant term least
//! significant. Codes run over `0..q`, and their integer order is the
//! canonical enumeration order of the field.

mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};

pub use poly::Poly;

const MAX_DEGREE: usize = 64;
const TABLE_LIMIT: u128 = 1024;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct FieldElement(pub u128);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn code(self) -> u128 {
        self.0
    }
}

#[derive(Clone)]
struct Tables {
    exp: Vec<u16>,
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
}

type Digits = [u64; MAX_DEGREE];

pub struct FieldCtx {
    p: u64,
    d: usize,
    q: u128,
    modulus: Vec<u64>,
    pw: Vec<u128>,
    tables: Option<Tables>,
    qm1: OnceLock<Factorization>,
    qp1: OnceLock<Factorization>,
    primitive: OnceLock<FieldElement>,
    nonresidue: OnceLock<FieldElement>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.describe())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.d == other.d && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Order of `-g` given the order `m` of `g`, in odd characteristic.
pub fn negate_order(m: u128) -> u128 {
    match m % 4 {
        0 => m,
        2 => m / 2,
        _ => 2 * m,
    }
}

impl FieldCtx {
    /// Builds GF(p^d). Without a modulus, the least monic irreducible of
    /// degree `d` is used, ordering coefficient vectors `(c0, c1, ...)`
    /// lexicographically.
    pub fn new(p: u64, d: usize, modulus: Option<&[u64]>) -> Result<Arc<FieldCtx>> {
        if !arith::is_prime(p as u128) {
            return Err(Error::NotPrime(p as u128));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(Error::FieldTooLarge(format!("degree {d} outside 1..={MAX_DEGREE}")));
        }
        let mut pw = vec![1u128];
        for _ in 0..d {
            let next = pw
                .last()
                .unwrap()
                .checked_mul(p as u128)
                .filter(|&v| v < 1u128 << 127)
                .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{d} exceeds 2^127")))?;
            pw.push(next);
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != d + 1 || m[d] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!(
                        "expected {} reduced coefficients ending in 1",
                        d + 1
                    )));
                }
                if d > 1 && !is_irreducible(p, m) {
                    return Err(Error::ReducibleModulus);
                }
                m.to_vec()
            }
            None if d == 1 => vec![0, 1],
            None => least_irreducible(p, d),
        };
        let mut ctx = FieldCtx {
            p,
            d,
            q: pw[d],
            modulus,
            pw,
            tables: None,
            qm1: OnceLock::new(),
            qp1: OnceLock::new(),
            primitive: OnceLock::new(),
            nonresidue: OnceLock::new(),
        };
        if ctx.q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(Arc::new(ctx))
    }

    pub fn of_order(q: u128) -> Result<Arc<FieldCtx>> {
        let (p, d) = arith::prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        if p > u64::MAX as u128 {
            return Err(Error::FieldTooLarge(format!("characteristic {p}")));
        }
        FieldCtx::new(p as u64, d as usize, None)
    }

    /// Parses `p^d`, `p^d/c0,...,1`, or a bare prime power `q`.
    pub fn parse(s: &str) -> Result<Arc<FieldCtx>> {
        let s = s.trim();
        let (head, modulus) = match s.split_once('/') {
            Some((h, m)) => (h, Some(m)),
            None => (s, None),
        };
        let bad = || Error::Parse(format!("field description `{s}`"));
        let (p, d) = match head.split_once('^') {
            Some((p, d)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                d.trim().parse::<usize>().map_err(|_| bad())?,
            ),
            None => {
                let q = head.trim().parse::<u128>().map_err(|_| bad())?;
                let (p, d) = arith::prime_power(q).ok_or(Error::NotAPrimePower(q))?;
                (u64::try_from(p).map_err(|_| bad())?, d as usize)
            }
        };
        match modulus {
            None => FieldCtx::new(p, d, None),
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                FieldCtx::new(p, d, Some(&coeffs))
            }
        }
    }

    /// `p^d/c0,...,1`, the modulus written constant term first.
    pub fn describe(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}/{}", self.p, self.d, m.join(","))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn factorization_q_minus_1(&self) -> &Factorization {
        self.qm1.get_or_init(|| arith::factorize(self.q - 1))
    }

    pub fn factorization_q_plus_1(&self) -> &Factorization {
        self.qp1.get_or_init(|| arith::factorize(self.q + 1))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i128) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i128) as u128)
    }

    pub fn from_code(&self, code: u128) -> Result<FieldElement> {
        if code < self.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::Parse(format!("code {code} out of range for q = {}", self.q)))
        }
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FieldElement> {
        if c.len() > self.d || c.iter().any(|&x| x >= self.p) {
            return Err(Error::Parse(format!("coefficients {c:?} for {}", self.describe())));
        }
        let mut digits = [0u64; MAX_DEGREE];
        digits[..c.len()].copy_from_slice(c);
        Ok(self.encode(&digits))
    }

    /// Coefficients `c0..c_{d-1}`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut digits = [0u64; MAX_DEGREE];
        self.decode(x.0, &mut digits);
        digits[..self.d].to_vec()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Integer for prime fields, `(c0,c1,...)` otherwise.
    pub fn format(&self, x: FieldElement) -> String {
        if self.d == 1 {
            x.0.to_string()
        } else {
            let c: Vec<String> = self.coeffs(x).iter().map(|c| c.to_string()).collect();
            format!("({})", c.join(","))
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
        let coeffs = match inner {
            Some(body) => body
                .split(',')
                .map(|c| c.trim().parse::<i128>())
                .collect::<std::result::Result<Vec<_>, _>>(),
            None => s.parse::<i128>().map(|v| vec![v]),
        }
        .map_err(|_| Error::Parse(format!("field element `{s}`")))?;
        let reduced: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(self.p as i128) as u64)
            .collect();
        self.from_coeffs(&reduced)
    }

    #[inline]
    fn decode(&self, mut x: u128, out: &mut Digits) {
        let p = self.p as u128;
        let mut i = 0;
        while x > u64::MAX as u128 && i < self.d {
            out[i] = (x % p) as u64;
            x /= p;
            i += 1;
        }
        let (mut y, p64) = (x as u64, self.p);
        while i < self.d {
            out[i] = y % p64;
            y /= p64;
            i += 1;
        }
    }

    #[inline]
    fn encode(&self, c: &Digits) -> FieldElement {
        let p = self.p as u128;
        let mut x = 0u128;
        for i in (0..self.d).rev() {
            x = x * p + c[i] as u128;
        }
        FieldElement(x)
    }

    #[inline]
    fn add_p(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        let p = self.p as u128;
        (if s >= p { s - p } else { s }) as u64
    }

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.d == 1 {
            return FieldElement(self.add_p(a.0 as u64, b.0 as u64) as u128);
        }
        let (mut x, mut y) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a.0, &mut x);
        self.decode(b.0, &mut y);
        for i in 0..self.d {
            x[i] = self.add_p(x[i], y[i]);
        }
        self.encode(&x)
    }

    fn neg_slow(&self, a: FieldElement) -> FieldElement {
        if self.d == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p as u128 - a.0 });
        }
        let mut x = [0u64; MAX_DEGREE];
        self.decode(a.0, &mut x);
        for c in x.iter_mut().take(self.d) {
            if *c != 0 {
                *c = self.p - *c;
            }
        }
        self.encode(&x)
    }

    /// Product of digit vectors reduced by the modulus.
    fn mul_digits(&self, a: &Digits, b: &Digits, out: &mut Digits) {
        let d = self.d;
        let p = self.p;
        if p < 1 << 28 {
            let mut r = [0u64; 2 * MAX_DEGREE];
            for i in 0..d {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..d {
                    r[i + j] += a[i] * b[j];
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = r[i] % p;
                if c == 0 {
                    continue;
                }
                for j in 0..d {
                    r[i - d + j] += c * ((p - self.modulus[j]) % p);
                }
            }
            for i in 0..d {
                out[i] = r[i] % p;
            }
        } else {
            let pm = p as u128;
            let mut r = [0u128; 2 * MAX_DEGREE];
            for i in 0..d {
                for j in 0..d {
                    r[i + j] = (r[i + j] + arith::mul_mod(a[i] as u128, b[j] as u128, pm)) % pm;
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = r[i];
                for j in 0..d {
                    let t = arith::mul_mod(c, (pm - self.modulus[j] as u128) % pm, pm);
                    r[i - d + j] = (r[i - d + j] + t) % pm;
                }
            }
            for i in 0..d {
                out[i] = r[i] as u64;
            }
        }
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.d == 1 {
            return FieldElement(arith::mul_mod(a.0, b.0, self.p as u128));
        }
        let (mut x, mut y, mut z) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a.0, &mut x);
        self.decode(b.0, &mut y);
        self.mul_digits(&x, &y, &mut z);
        self.encode(&z)
    }

    fn pow_slow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        if self.d == 1 {
            return FieldElement(arith::pow_mod(a.0, e, self.p as u128));
        }
        let mut base = [0u64; MAX_DEGREE];
        self.decode(a.0, &mut base);
        let mut acc = [0u64; MAX_DEGREE];
        acc[0] = 1;
        let mut tmp = [0u64; MAX_DEGREE];
        while e > 0 {
            if e & 1 == 1 {
                self.mul_digits(&acc, &base, &mut tmp);
                acc = tmp;
            }
            e >>= 1;
            if e > 0 {
                self.mul_digits(&base, &base, &mut tmp);
                base = tmp;
            }
        }
        self.encode(&acc)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.q + b.0) as usize] as u128),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize] as u128),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                    FieldElement(t.exp[i] as u128)
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, e: u128) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        match &self.tables {
            Some(t) => {
                if a.0 == 0 {
                    return FieldElement::ZERO;
                }
                let n = (self.q - 1) as u128;
                let i = (t.log[a.0 as usize] as u128 * (e % n)) % n;
                FieldElement(t.exp[i as usize] as u128)
            }
            None => self.pow_slow(a, e),
        }
    }

    #[inline]
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize] as u128),
            None if self.d == 1 => FieldElement(mod_inverse(a.0, self.p as u128)),
            None => self.pow_slow(a, self.q - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^(p^r)`.
    pub fn frobenius(&self, x: FieldElement, r: usize) -> FieldElement {
        let r = r % self.d;
        if r == 0 {
            return x;
        }
        match &self.tables {
            Some(t) => {
                let mut y = x.0 as usize;
                for _ in 0..r {
                    y = t.frob[y] as usize;
                }
                FieldElement(y as u128)
            }
            None => self.pow_slow(x, self.pw[r]),
        }
    }

    /// Multiplicative order.
    pub fn element_order(&self, g: FieldElement) -> Result<u128> {
        if g.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.q - 1;
        if let Some(t) = &self.tables {
            return Ok(n / arith::gcd(t.log[g.0 as usize] as u128, n));
        }
        let mut m = n;
        for &(r, _) in &self.factorization_q_minus_1().factors {
            while m % r == 0 && self.pow(g, m / r) == FieldElement::ONE {
                m /= r;
            }
        }
        Ok(m)
    }

    pub fn is_primitive(&self, g: FieldElement) -> Result<bool> {
        if g.is_zero() {
            return Err(Error::ZeroElement);
        }
        if let Some(t) = &self.tables {
            return Ok(arith::gcd(t.log[g.0 as usize] as u128, self.q - 1) == 1);
        }
        let n = self.q - 1;
        Ok(self
            .factorization_q_minus_1()
            .primes()
            .all(|r| self.pow(g, n / r) != FieldElement::ONE))
    }

    /// The least primitive element in code order.
    pub fn primitive_element(&self) -> FieldElement {
        *self.primitive.get_or_init(|| {
            (1..self.q)
                .map(FieldElement)
                .find(|&g| self.is_primitive(g).unwrap())
                .expect("multiplicative group is cyclic")
        })
    }

    pub fn is_square(&self, g: FieldElement) -> bool {
        if g.is_zero() || self.p == 2 {
            return true;
        }
        if let Some(t) = &self.tables {
            return t.log[g.0 as usize] % 2 == 0;
        }
        self.pow(g, (self.q - 1) / 2) == FieldElement::ONE
    }

    fn least_nonresidue(&self) -> FieldElement {
        *self.nonresidue.get_or_init(|| {
            (2..self.q)
                .map(FieldElement)
                .find(|&z| !self.is_square(z))
                .expect("odd field has non-squares")
        })
    }

    /// Square root; of `h` and `-h`, returns the one whose first nonzero
    /// coefficient (constant term first) is at most `(p-1)/2`.
    pub fn sqrt(&self, g: FieldElement) -> Result<FieldElement> {
        if g.is_zero() {
            return Ok(g);
        }
        if self.p == 2 {
            return Ok(self.pow(g, self.q / 2));
        }
        if !self.is_square(g) {
            return Err(Error::NotASquare);
        }
        let h = if self.q % 4 == 3 {
            self.pow(g, (self.q + 1) / 4)
        } else {
            self.tonelli_shanks(g)
        };
        debug_assert_eq!(self.square(h), g);
        Ok(self.canonical_sign(h))
    }

    fn tonelli_shanks(&self, g: FieldElement) -> FieldElement {
        let mut odd = self.q - 1;
        let mut s = 0u32;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let mut c = self.pow(self.least_nonresidue(), odd);
        let mut t = self.pow(g, odd);
        let mut r = self.pow(g, odd.div_ceil(2));
        let mut m = s;
        while t != FieldElement::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != FieldElement::ONE {
                t2 = self.square(t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }

    fn canonical_sign(&self, h: FieldElement) -> FieldElement {
        let first = self.coeffs(h).into_iter().find(|&c| c != 0).unwrap_or(0);
        if first > (self.p - 1) / 2 {
            self.neg(h)
        } else {
            h
        }
    }

    /// Least `e | d` with `x` in GF(p^e).
    pub fn subfield_degree(&self, x: FieldElement) -> usize {
        (1..=self.d)
            .filter(|e| self.d % e == 0)
            .find(|&e| self.frobenius(x, e) == x)
            .unwrap_or(self.d)
    }

    /// Degree of the subfield generated by `xs`.
    pub fn generated_subfield_degree<I: IntoIterator<Item = FieldElement>>(&self, xs: I) -> usize {
        xs.into_iter().fold(1usize, |acc, x| {
            if acc == self.d {
                acc
            } else {
                arith::lcm(acc as u128, self.subfield_degree(x) as u128) as usize
            }
        })
    }

    /// Fixed embedding of this field into `target`: the generator `x` of the
    /// defining modulus goes to the least root of the modulus in `target`.
    pub fn embedding(self: &Arc<Self>, target: &Arc<FieldCtx>) -> Result<Embedding> {
        if self.p != target.p || target.d % self.d != 0 {
            return Err(Error::NoEmbedding);
        }
        let theta = if self.d == 1 {
            FieldElement::ZERO
        } else {
            let m = Poly::new(self.modulus.iter().map(|&c| FieldElement(c as u128)).collect());
            *m.roots(target).first().ok_or(Error::NoEmbedding)?
        };
        let powers = (0..self.d)
            .scan(FieldElement::ONE, |acc, _| {
                let cur = *acc;
                *acc = target.mul(*acc, theta);
                Some(cur)
            })
            .collect();
        Ok(Embedding {
            source: Arc::clone(self),
            target: Arc::clone(target),
            powers,
        })
    }

    pub fn subfield_embed(
        self: &Arc<Self>,
        g: FieldElement,
        target: &Arc<FieldCtx>,
    ) -> Result<FieldElement> {
        Ok(self.embedding(target)?.apply(g))
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let g = self.primitive_element();
        let n = q - 1;
        let mut exp = vec![0u16; 2 * n.max(1)];
        let mut log = vec![0u16; q];
        let mut x = FieldElement::ONE;
        for i in 0..n {
            exp[i] = x.0 as u16;
            log[x.0 as usize] = i as u16;
            x = self.mul_slow(x, g);
        }
        for i in n..exp.len() {
            exp[i] = exp[i - n];
        }
        let mut add = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_slow(FieldElement(a as u128), FieldElement(b as u128)).0 as u16;
            }
        }
        let neg = (0..q).map(|a| self.neg_slow(FieldElement(a as u128)).0 as u16).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { exp[(n - log[a] as usize) % n] })
            .collect();
        let frob = (0..q)
            .map(|a| self.pow_slow(FieldElement(a as u128), self.p as u128).0 as u16)
            .collect();
        Tables { exp, log, add, neg, inv, frob }
    }
}

/// A field embedding GF(p^e) into GF(p^d).
pub struct Embedding {
    source: Arc<FieldCtx>,
    target: Arc<FieldCtx>,
    powers: Vec<FieldElement>,
}

impl Embedding {
    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.target
    }

    pub fn apply(&self, g: FieldElement) -> FieldElement {
        let t = &self.target;
        self.source
            .coeffs(g)
            .iter()
            .zip(&self.powers)
            .fold(FieldElement::ZERO, |acc, (&c, &th)| {
                t.add(acc, t.mul(FieldElement(c as u128), th))
            })
    }
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(m as i128) as u128
}

fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let prime = FieldCtx::new(p, 1, None).expect("p is prime");
    let f = Poly::new(m.iter().map(|&c| FieldElement(c as u128)).collect());
    let d = m.len() - 1;
    let x = Poly::x();
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = xp.powmod(&prime, p as u128, &f);
        let g = Poly::gcd(&prime, &f, &xp.sub(&prime, &x));
        if g.deg() != Some(0) {
            return false;
        }
    }
    true
}

fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    // c0 is the most significant position in the search order; c0 = 0 is
    // divisible by x.
    let mut c = vec![0u64; d];
    c[0] = 1;
    loop {
        let mut m = c.clone();
        m.push(1);
        if is_irreducible(p, &m) {
            return m;
        }
        let mut i = d;
        loop {
            i -= 1;
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, d: usize) -> Arc<FieldCtx> {
        FieldCtx::new(p, d, None).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2, 1).describe(), "2^1/0,1");
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(2, 3).modulus(), &[1, 0, 1, 1]);
        assert_eq!(gf(13, 2).modulus(), &[1, 3, 1]);
    }

    #[test]
    fn parse_round_trip() {
        let f = FieldCtx::parse("13^2/2,12,1").unwrap();
        assert_eq!(f.describe(), "13^2/2,12,1");
        assert_eq!(FieldCtx::parse("169").unwrap().q(), 169);
        assert!(matches!(FieldCtx::parse("13^2/1,0,1"), Err(Error::ReducibleModulus)));
        assert!(matches!(FieldCtx::parse("12^1"), Err(Error::NotPrime(12))));
    }

    #[test]
    fn spot_values() {
        let f7 = gf(7, 1);
        assert_eq!(f7.element_order(f7.from_int(-1)).unwrap(), 2);
        assert!(f7.is_primitive(FieldElement(3)).unwrap());
        assert!(!f7.is_primitive(FieldElement(2)).unwrap());
        assert_eq!(f7.sqrt(FieldElement(4)).unwrap(), FieldElement(2));
        assert_eq!(f7.sqrt(FieldElement(3)), Err(Error::NotASquare));
        let f11 = gf(11, 1);
        assert!(f11.is_square(FieldElement(5)));
        assert_eq!(f11.sqrt(FieldElement(5)).unwrap(), FieldElement(4));
        assert_eq!(f11.element_order(FieldElement::ZERO), Err(Error::ZeroElement));
    }

    #[test]
    fn negate_order_cases() {
        assert_eq!(negate_order(3), 6);
        assert_eq!(negate_order(4), 4);
        assert_eq!(negate_order(6), 3);
    }

    #[test]
    fn tables_agree_with_generic_paths() {
        for (p, d) in [(2, 5), (3, 4), (13, 2), (31, 1), (5, 3)] {
            let f = gf(p, d);
            assert!(f.has_tables());
            for a in f.elements().step_by(7) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    assert_eq!(f.add(a, b), f.add_slow(a, b));
                }
                assert_eq!(f.pow(a, 11), f.pow_slow(a, 11));
            }
        }
    }

    #[test]
    fn large_field_arithmetic() {
        let f = gf(11, 21);
        assert!(!f.has_tables());
        let g = f.from_coeffs(&[3, 1, 4, 1, 5]).unwrap();
        let gi = f.inv(g).unwrap();
        assert_eq!(f.mul(g, gi), FieldElement::ONE);
        let s = f.square(g);
        assert_eq!(f.square(f.sqrt(s).unwrap()), s);
        assert_eq!(f.pow(g, f.q() - 1), FieldElement::ONE);
    }

    #[test]
    fn embeddings() {
        let f13 = gf(13, 1);
        let f169 = gf(13, 2);
        assert_eq!(f13.subfield_embed(FieldElement(5), &f169).unwrap(), FieldElement(5));
        let f4 = gf(2, 2);
        let f16 = gf(2, 4);
        let g = f4.primitive_element();
        let img = f4.subfield_embed(g, &f16).unwrap();
        assert_eq!(f16.element_order(img).unwrap(), 3);
        assert!(matches!(gf(2, 3).subfield_embed(FieldElement(2), &f16), Err(Error::NoEmbedding)));
    }
}
