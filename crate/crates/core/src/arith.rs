//! Integer number theory on `u128`: primality, factorization, totients.

use std::collections::BTreeMap;

/// Prime factorization as a sorted list of `(prime, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(r, _)| r)
    }

    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(r, e)| acc * r.pow(e))
    }
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // m < 2^127, so doubling a residue never overflows.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u128; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller-Rabin. Deterministic below 3.3e24; beyond that the first sixteen
/// prime bases are used.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut dd = n - 1;
    let mut s = 0;
    while dd % 2 == 0 {
        dd /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, dd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Returns `(p, d)` with `n = p^d` when `n` is a prime power.
pub fn prime_power(n: u128) -> Option<(u128, u32)> {
    if n < 2 {
        return None;
    }
    let f = factorize(n);
    if f.factors.len() == 1 {
        Some(f.factors[0])
    } else {
        None
    }
}

const TRIAL_BOUND: u128 = 1 << 16;

/// Trial division up to 2^16, then Pollard rho with Brent's cycle detection.
pub fn factorize(mut n: u128) -> Factorization {
    let mut map: BTreeMap<u128, u32> = BTreeMap::new();
    if n <= 1 {
        return Factorization::default();
    }
    let mut r = 2u128;
    while r <= TRIAL_BOUND && r * r <= n {
        while n % r == 0 {
            *map.entry(r).or_default() += 1;
            n /= r;
        }
        r += if r == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                *map.entry(m).or_default() += 1;
                continue;
            }
            if let Some((root, k)) = perfect_power(m) {
                for _ in 0..k {
                    stack.push(root);
                }
                continue;
            }
            let f = pollard_brent(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    Factorization {
        factors: map.into_iter().collect(),
    }
}

fn perfect_power(n: u128) -> Option<(u128, u32)> {
    for k in (2..=127u32).rev() {
        let root = integer_root(n, k);
        if root > 1 && checked_pow(root, k) == Some(n) {
            return Some((root, k));
        }
    }
    None
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn integer_root(n: u128, k: u32) -> u128 {
    let mut lo = 1u128;
    let mut hi = 1u128 << (128 / k + 1).min(127);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match checked_pow(mid, k) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

fn pollard_brent(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u128;
        let mut r = 1u64;
        let mut qacc = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    qacc = mul_mod(qacc, x.abs_diff(y), n);
                }
                g = gcd(qacc, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub fn euler_phi(n: u128) -> u128 {
    factorize(n)
        .factors
        .iter()
        .fold(n, |acc, &(r, _)| acc / r * (r - 1))
}

pub fn divisors(n: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for (r, e) in factorize(n).factors {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= r;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}
