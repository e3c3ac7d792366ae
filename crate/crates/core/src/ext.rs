//! The extension field GF(q^n) over a base field GF(q), with a primitive
//! element.
//!
//! An element is an index `sum c_i q^i`, where `c_i` are base-field indices
//! and `(c_0, ..., c_{n-1})` is its coordinate vector in the polynomial basis
//! `1, x, ..., x^(n-1)`. That coordinate map is the identification of
//! GF(q^n) with F_q^n used throughout the crate.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{digits_string, FieldSpec};
use crate::poly;

/// Extension fields up to this order get log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Default upper limit on `q^n` for [`ExtFieldSpec`].
pub const DEFAULT_EXT_CAP: u64 = 1 << 32;

#[derive(Clone, Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ExtFieldSpec {
    base: Arc<FieldSpec>,
    degree: usize,
    order: u64,
    modulus: Vec<u32>,
    alpha: u32,
    tables: Option<LogTables>,
}

impl ExtFieldSpec {
    /// Builds GF(q^n) with the least monic irreducible modulus (or the given
    /// one) and the least primitive element.
    pub fn build(base: &Arc<FieldSpec>, degree: usize, modulus: Option<&[u32]>) -> Result<Self> {
        Self::build_with_cap(base, degree, modulus, DEFAULT_EXT_CAP)
    }

    pub fn build_with_cap(
        base: &Arc<FieldSpec>,
        degree: usize,
        modulus: Option<&[u32]>,
        cap: u64,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let q = base.order() as u64;
        let cap = cap.min(DEFAULT_EXT_CAP);
        let order = q
            .checked_pow(degree as u32)
            .filter(|&o| o <= cap)
            .ok_or_else(|| Error::cap("extension field order", format!("{q}^{degree}"), cap))?;
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == degree + 1
                    && m[degree] == 1
                    && m.iter().all(|&c| (c as u64) < q)
                    && poly::is_irreducible(base.as_ref(), m);
                if !ok {
                    return Err(Error::BadModulus(digits_string(m)));
                }
                m.to_vec()
            }
            None => poly::least_irreducible(base.as_ref(), degree),
        };
        let mut ext = ExtFieldSpec {
            base: Arc::clone(base),
            degree,
            order,
            modulus,
            alpha: 1,
            tables: None,
        };
        ext.alpha = ext.least_primitive();
        if order <= TABLE_LIMIT {
            ext.build_tables();
        }
        Ok(ext)
    }

    fn least_primitive(&self) -> u32 {
        let group = self.order - 1;
        if group == 1 {
            return 1;
        }
        (2..self.order as u32)
            .find(|&x| self.is_primitive(x))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// True when `x` has multiplicative order exactly `q^n - 1`.
    pub fn is_primitive(&self, x: u32) -> bool {
        if x == 0 {
            return false;
        }
        let group = self.order - 1;
        poly::prime_factors(group)
            .iter()
            .all(|&l| self.pow_poly(x, group / l) != 1)
    }

    fn build_tables(&mut self) {
        let n = (self.order - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_poly(x, self.alpha);
        }
        self.tables = Some(LogTables { exp, log });
    }

    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    /// Extension degree `n`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `q^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group, `q^n - 1`.
    pub fn group_order(&self) -> u64 {
        self.order - 1
    }

    /// Modulus coefficients over GF(q), constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The designated primitive element.
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Coordinates of `x` over GF(q), constant term first.
    pub fn coords(&self, mut x: u32) -> Vec<u32> {
        let q = self.base.order();
        let mut out = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            out.push(x % q);
            x /= q;
        }
        out
    }

    pub fn from_coords(&self, coords: &[u32]) -> u32 {
        let q = self.base.order();
        coords.iter().rev().fold(0u32, |acc, &c| acc * q + c)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.base.characteristic() == 2 {
            return a ^ b;
        }
        let sum: Vec<u32> = self
            .coords(a)
            .into_iter()
            .zip(self.coords(b))
            .map(|(x, y)| self.base.add(x, y))
            .collect();
        self.from_coords(&sum)
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let f = poly::trim(self.coords(a));
        let g = poly::trim(self.coords(b));
        let mut r = poly::mulmod(self.base.as_ref(), &f, &g, &self.modulus);
        r.resize(self.degree, 0);
        self.from_coords(&r)
    }

    fn pow_poly(&self, a: u32, mut exp: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len();
                t.exp[(t.log[a as usize] as usize + t.log[b as usize] as usize) % n]
            }
            None => self.mul_poly(a, b),
        }
    }

    pub fn pow(&self, a: u32, exp: u64) -> u32 {
        if exp == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = t.exp.len() as u64;
                t.exp[((t.log[a as usize] as u64 * (exp % n)) % n) as usize]
            }
            None => self.pow_poly(a, exp),
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.group_order() - 1))
    }

    /// `alpha^i`.
    pub fn alpha_pow(&self, i: u64) -> u32 {
        match &self.tables {
            Some(t) => t.exp[(i % t.exp.len() as u64) as usize],
            None => self.pow_poly(self.alpha, i % self.group_order()),
        }
    }

    /// Discrete log of a nonzero element to base alpha. Requires tables.
    pub fn log(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::invalid("zero has no discrete logarithm"));
        }
        match &self.tables {
            Some(t) => Ok(t.log[a as usize]),
            None => Err(Error::cap("discrete-log table", self.order, TABLE_LIMIT)),
        }
    }

    /// Short human-readable summary, e.g. `GF(2^4) modulus=11001 alpha=2`.
    pub fn describe(&self) -> String {
        format!(
            "GF({}^{}) modulus={} alpha={}",
            self.base.order_string(),
            self.degree,
            digits_string(&self.modulus),
            self.alpha
        )
    }
}
