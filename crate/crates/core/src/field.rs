//! Exact arithmetic in GF(q), q = p^e.
//!
//! Elements are integer indices in `[0, q)` whose base-`p` digits are the
//! coefficients of the element as a polynomial modulo the field's modulus
//! (constant term least significant). Index 0 is zero, index 1 is one.
//! Multiplication goes through log/antilog tables, which are always built
//! because `q` is capped.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{self, Coeffs, PrimeCoeffs};

/// Default upper limit on `q` for [`FieldSpec`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// A validated finite field GF(p^e).
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    // exp[i] = g^i for i in 0..2(q-1), doubled so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldSpec {
    /// Builds GF(p^e). Without a modulus the least monic irreducible
    /// polynomial of degree `e` is chosen.
    pub fn build(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Arc<Self>> {
        Self::build_with_cap(p, e, modulus, DEFAULT_FIELD_CAP)
    }

    pub fn build_with_cap(p: u32, e: u32, modulus: Option<&[u32]>, cap: u64) -> Result<Arc<Self>> {
        if !poly::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= cap);
        let Some(q) = q else {
            return Err(Error::cap("field order", format!("{p}^{e}"), cap));
        };
        let c = PrimeCoeffs(p);
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == e as usize + 1
                    && m[e as usize] == 1
                    && m.iter().all(|&d| d < p)
                    && poly::is_irreducible(&c, m);
                if !ok {
                    return Err(Error::BadModulus(digits_string(m)));
                }
                m.to_vec()
            }
            None => poly::least_irreducible(&c, e as usize),
        };
        let mut field = FieldSpec {
            p,
            e,
            q: q as u32,
            modulus,
            generator: 1,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// Parses `"q"` or `"p^e"` into a field with the default modulus.
    pub fn from_order_str(s: &str, modulus: Option<&[u32]>) -> Result<Arc<Self>> {
        let (p, e) = parse_order(s)?;
        Self::build(p, e, modulus)
    }

    pub fn gf2() -> Arc<Self> {
        Self::build(2, 1, None).expect("GF(2) is always constructible")
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        if q == 2 {
            self.generator = 1;
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        let factors = poly::prime_factors(q - 1);
        let generator = (2..q as u32)
            .find(|&g| factors.iter().all(|&l| self.pow_raw(g, (q - 1) / l) != 1))
            .expect("the multiplicative group of a finite field is cyclic");
        self.generator = generator;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_raw(x, generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let c = PrimeCoeffs(self.p);
        let f = poly::trim(self.digits(a));
        let g = poly::trim(self.digits(b));
        self.from_digits(&poly::mulmod(&c, &f, &g, &self.modulus))
    }

    fn pow_raw(&self, a: u32, mut exp: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients over GF(p), constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The least element generating the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Base-`p` digits of an element, constant term first, length `e`.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if self.e == 1 {
            (a + b) % self.p
        } else {
            let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
            for _ in 0..self.e {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            a
        } else if self.e == 1 {
            (self.p - a) % self.p
        } else {
            let (mut a, mut out, mut place) = (a, 0u32, 1u32);
            for _ in 0..self.e {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else if self.q == 2 {
            1
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if self.q == 2 {
            return 1;
        }
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn pow(&self, a: u32, exp: u64) -> u32 {
        if exp == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.q == 2 {
            return 1;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (exp % n)) % n) as usize]
    }

    /// Discrete log to the base [`generator`](Self::generator); `a` nonzero.
    pub fn log(&self, a: u32) -> u32 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    pub fn element(self: &Arc<Self>, value: u32) -> Result<FieldElement> {
        if value >= self.q {
            return Err(Error::invalid(format!(
                "{value} is not an element of GF({})",
                self.q
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            value,
        })
    }

    /// `q` rendered as `p` or `p^e`.
    pub fn order_string(&self) -> String {
        if self.e == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.e)
        }
    }
}

impl Coeffs for FieldSpec {
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        FieldSpec::add(self, a, b)
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        FieldSpec::sub(self, a, b)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        FieldSpec::mul(self, a, b)
    }
    fn inv(&self, a: u32) -> u32 {
        FieldSpec::inv(self, a)
    }
}

/// Parses `"9"` or `"3^2"` into `(p, e)`.
pub fn parse_order(s: &str) -> Result<(u32, u32)> {
    let s = s.trim();
    let bad = || Error::invalid(format!("`{s}` is not a prime power"));
    if let Some((p, e)) = s.split_once('^') {
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        if !poly::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        return Ok((p, e));
    }
    let q: u64 = s.parse().map_err(|_| bad())?;
    let factors = poly::prime_factors(q);
    if factors.len() != 1 {
        return Err(bad());
    }
    let p = factors[0];
    let mut e = 0u32;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        e += 1;
    }
    Ok((p as u32, e))
}

/// Coefficient string with one base-36 digit per coefficient.
pub(crate) fn digits_string(d: &[u32]) -> String {
    d.iter()
        .map(|&x| std::char::from_digit(x, 36).unwrap_or('?'))
        .collect()
}

/// A field element tagged with its field, for checked arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    value: u32,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

fn same_field(a: &Arc<FieldSpec>, b: &Arc<FieldSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn with(&self, value: u32) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            value,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.with(self.field.inv(self.value)))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.with(self.field.pow(self.value, exp))
    }
}
