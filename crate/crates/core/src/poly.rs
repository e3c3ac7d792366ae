//! Dense univariate polynomials over a small finite field.
//!
//! Coefficients are stored constant term first; a polynomial is "trimmed"
//! when it has no trailing zero coefficients. The zero polynomial is the
//! empty vector.

/// Coefficient arithmetic needed by the polynomial routines.
pub(crate) trait Coeffs {
    fn order(&self) -> u64;
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
}

/// Arithmetic modulo a prime, used to bootstrap `FieldSpec`.
pub(crate) struct PrimeCoeffs(pub u32);

impl Coeffs for PrimeCoeffs {
    fn order(&self) -> u64 {
        self.0 as u64
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        // Fermat: a^(p-2)
        let p = self.0 as u64;
        let (mut base, mut exp, mut acc) = (a as u64 % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
}

pub(crate) fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Remainder of `f` divided by a nonzero `g`.
pub(crate) fn rem<C: Coeffs>(c: &C, f: &[u32], g: &[u32]) -> Vec<u32> {
    let g = trim(g.to_vec());
    assert!(!g.is_empty(), "division by the zero polynomial");
    let mut r = trim(f.to_vec());
    let dg = g.len() - 1;
    let lead_inv = c.inv(g[dg]);
    while r.len() > dg {
        let dr = r.len() - 1;
        let factor = c.mul(r[dr], lead_inv);
        let shift = dr - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = c.sub(r[shift + i], c.mul(factor, gi));
        }
        r = trim(r);
    }
    r
}

/// Product of `f` and `g` reduced modulo `m`.
pub(crate) fn mulmod<C: Coeffs>(c: &C, f: &[u32], g: &[u32], m: &[u32]) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = c.add(out[i + j], c.mul(a, b));
        }
    }
    rem(c, &out, m)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`q`
/// digits of `index` (constant term least significant).
pub(crate) fn monic_from_index(q: u64, deg: usize, mut index: u64) -> Vec<u32> {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push((index % q) as u32);
        index /= q;
    }
    f.push(1);
    f
}

/// Irreducibility by trial division against every monic polynomial of degree
/// `1..=deg/2`. Intended for the small degrees used to build fields.
pub(crate) fn is_irreducible<C: Coeffs>(c: &C, f: &[u32]) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    let q = c.order();
    for d in 1..=deg / 2 {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let g = monic_from_index(q, d, idx);
            if rem(c, &f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible polynomial of degree `deg`, ordering candidates
/// by the integer `sum c_i q^i` of their coefficients.
pub(crate) fn least_irreducible<C: Coeffs>(c: &C, deg: usize) -> Vec<u32> {
    let q = c.order();
    let count = q.pow(deg as u32);
    (0..count)
        .map(|idx| monic_from_index(q, deg, idx))
        .find(|f| is_irreducible(c, f))
        .expect("irreducible polynomials exist in every degree")
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
