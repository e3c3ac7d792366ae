//! Subspaces as subsets of GF(q^n), the action of multiplication by a
//! primitive element, and a greedy search for cyclic codes.
//!
//! A nonzero element is written by its discrete log `i` (it is `alpha^i`), so
//! a subspace is the sorted set of logs of its nonzero vectors and
//! multiplication by `alpha` adds one to every log modulo `q^n - 1`. A code
//! is cyclic when it is a union of whole orbits under that action.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::{bound_ratio, packing_bound, Ratio};
use crate::code::SubspaceCode;
use crate::designs::certify_code;
use crate::error::{Error, Result};
use crate::ext::ExtFieldSpec;
use crate::rng::{SeededRng, RNG_NAME};
use crate::subspace::{Space, Subspace};

/// A subspace given by the discrete logs of its nonzero elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSubspace {
    logs: Vec<u32>,
    dim: usize,
    period: u32,
}

impl FieldSubspace {
    /// Sorted logs; the zero vector is implicit.
    pub fn logs(&self) -> &[u32] {
        &self.logs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `q^n - 1`, the order of `alpha`.
    pub fn period(&self) -> u32 {
        self.period
    }

    /// `alpha^steps * V`.
    pub fn alpha_shift(&self, steps: i64) -> FieldSubspace {
        let p = self.period as i64;
        let s = steps.rem_euclid(p) as u64;
        let mut logs: Vec<u32> = self
            .logs
            .iter()
            .map(|&i| ((i as u64 + s) % p as u64) as u32)
            .collect();
        logs.sort_unstable();
        FieldSubspace {
            logs,
            dim: self.dim,
            period: self.period,
        }
    }

    pub fn characteristic_vector(&self) -> CharacteristicVector {
        CharacteristicVector::from_ones(self.period as usize, &self.logs)
    }
}

/// Bit `i` set iff `alpha^i` lies in the subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicVector {
    len: usize,
    words: Vec<u64>,
}

impl CharacteristicVector {
    pub fn from_ones(len: usize, ones: &[u32]) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for &i in ones {
            assert!((i as usize) < len, "bit {i} out of range {len}");
            words[i as usize / 64] |= 1 << (i % 64);
        }
        CharacteristicVector { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(|&i| self.get(i)).map(|i| i as u32)
    }

    /// Cyclic shift moving bit `i` to bit `i + steps`.
    pub fn shifted(&self, steps: usize) -> Self {
        let ones: Vec<u32> = self
            .ones()
            .map(|i| ((i as usize + steps) % self.len) as u32)
            .collect();
        Self::from_ones(self.len, &ones)
    }

    /// The bits as a `0`/`1` string, index 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

/// Lexicographic order on the bit sequence read from index 0, with `0 < 1`.
impl Ord for CharacteristicVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for CharacteristicVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// F_q^n identified with GF(q^n) through the polynomial basis.
pub struct CyclicSpace {
    ext: ExtFieldSpec,
    space: Space,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReport {
    pub cyclic: bool,
    /// A member whose `alpha`-shift is missing from the code.
    pub witness: Option<Subspace>,
}

impl CyclicSpace {
    /// Uses the default modulus of GF(q^n). Needs discrete-log tables.
    pub fn new(space: &Space) -> Result<Self> {
        let ext = ExtFieldSpec::build(space.field(), space.n(), None)?;
        Self::from_ext(ext, space)
    }

    pub fn from_ext(ext: ExtFieldSpec, space: &Space) -> Result<Self> {
        if ext.degree() != space.n() || **ext.base() != **space.field() {
            return Err(Error::DimensionMismatch(format!(
                "extension of degree {} over GF({}) does not model F_{}^{}",
                ext.degree(),
                ext.base().order(),
                space.q(),
                space.n()
            )));
        }
        if !ext.has_tables() {
            return Err(Error::cap(
                "discrete-log table",
                ext.order(),
                crate::ext::TABLE_LIMIT,
            ));
        }
        Ok(CyclicSpace {
            ext,
            space: space.clone(),
        })
    }

    pub fn ext(&self) -> &ExtFieldSpec {
        &self.ext
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    fn period(&self) -> u32 {
        self.ext.group_order() as u32
    }

    fn check(&self, u: &Subspace) -> Result<()> {
        if u.ambient() != self.space.n() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of F^{} in a model of F^{}",
                u.ambient(),
                self.space.n()
            )));
        }
        Ok(())
    }

    pub fn to_field_repr(&self, u: &Subspace) -> Result<FieldSubspace> {
        self.check(u)?;
        let mut logs = Vec::new();
        for v in self.space.vectors(u) {
            let x = self.ext.from_coords(&v);
            if x != 0 {
                logs.push(self.ext.log(x)?);
            }
        }
        logs.sort_unstable();
        Ok(FieldSubspace {
            logs,
            dim: u.dim(),
            period: self.period(),
        })
    }

    pub fn from_field_repr(&self, v: &FieldSubspace) -> Result<Subspace> {
        if v.period != self.period() {
            return Err(Error::DimensionMismatch(
                "field subspace from another field".into(),
            ));
        }
        let rows: Vec<Vec<u32>> = v
            .logs
            .iter()
            .map(|&i| self.ext.coords(self.ext.alpha_pow(i as u64)))
            .collect();
        let u = self.space.canonicalize(&rows)?;
        if u.dim() != v.dim {
            return Err(Error::invalid(
                "element set is not a subspace of the recorded dimension",
            ));
        }
        Ok(u)
    }

    /// Whether `{0} ∪ V` is closed under addition, checked over all pairs.
    pub fn is_closed(&self, v: &FieldSubspace) -> bool {
        let elems: Vec<u32> = v
            .logs
            .iter()
            .map(|&i| self.ext.alpha_pow(i as u64))
            .collect();
        let set: HashSet<u32> = elems.iter().copied().collect();
        elems.iter().all(|&a| {
            elems.iter().all(|&b| {
                let s = self.ext.add(a, b);
                s == 0 || set.contains(&s)
            })
        })
    }

    /// `alpha^steps * U`, computed on a basis.
    pub fn alpha_shift(&self, u: &Subspace, steps: i64) -> Result<Subspace> {
        self.check(u)?;
        let s = steps.rem_euclid(self.period() as i64) as u64;
        let a = self.ext.alpha_pow(s);
        let rows: Vec<Vec<u32>> = u
            .rows()
            .map(|r| self.ext.coords(self.ext.mul(a, self.ext.from_coords(r))))
            .collect();
        Ok(self.space.canonicalize_unchecked(rows))
    }

    /// Distinct shifts of `v` in order `v, alpha v, alpha^2 v, ...`.
    pub fn orbit(&self, v: &FieldSubspace) -> Vec<FieldSubspace> {
        let mut out = vec![v.clone()];
        loop {
            let next = out.last().unwrap().alpha_shift(1);
            if next == *v {
                return out;
            }
            out.push(next);
        }
    }

    /// Whether the code is closed under multiplication by `alpha`.
    pub fn is_cyclic(&self, code: &SubspaceCode) -> Result<CyclicReport> {
        if code.space() != &self.space {
            return Err(Error::DimensionMismatch(
                "code lives in another space".into(),
            ));
        }
        for m in code.members() {
            let shifted = self.alpha_shift(m, 1)?;
            if !code.contains(&shifted) {
                return Ok(CyclicReport {
                    cyclic: false,
                    witness: Some(m.clone()),
                });
            }
        }
        Ok(CyclicReport {
            cyclic: true,
            witness: None,
        })
    }
}

/// An orbit in the search, named by its least characteristic vector.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    pub representative: String,
    pub length: usize,
}

#[derive(Clone, Debug)]
pub struct CyclicSearch {
    pub code: SubspaceCode,
    pub accepted: Vec<OrbitInfo>,
    pub orbits_examined: usize,
    pub ratio: Ratio,
}

/// Greedy union of whole orbits with pairwise distance at least `d`.
///
/// Orbits of `k`-subspaces are listed by representative, shuffled with the
/// seed, and accepted when the representative is far enough from its own
/// shifts and from every accepted member. Both checks suffice because
/// multiplication by `alpha` preserves distance.
pub fn cyclic_greedy_search(
    cs: &CyclicSpace,
    k: usize,
    d: usize,
    seed: u64,
) -> Result<CyclicSearch> {
    let space = cs.space();
    let n = space.n();
    if d < 2 || !d.is_multiple_of(2) || d > 2 * k {
        return Err(Error::invalid(format!(
            "need even 2 <= d <= 2k, got d={d} k={k}"
        )));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }

    struct Orbit {
        rep: CharacteristicVector,
        members: Vec<Subspace>,
    }
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut orbits = Vec::new();
    for u in space.enumerate(k)? {
        if seen.contains(&u) {
            continue;
        }
        let fs = cs.to_field_repr(&u)?;
        let shifts = cs.orbit(&fs);
        let rep = shifts
            .iter()
            .map(|s| s.characteristic_vector())
            .min()
            .unwrap();
        let members = shifts
            .iter()
            .map(|s| cs.from_field_repr(s))
            .collect::<Result<Vec<_>>>()?;
        seen.extend(members.iter().cloned());
        orbits.push(Orbit { rep, members });
    }
    orbits.sort_by(|a, b| a.rep.cmp(&b.rep));
    let mut rng = SeededRng::new(seed);
    rng.shuffle(&mut orbits);

    let mut chosen: Vec<Subspace> = Vec::new();
    let mut accepted = Vec::new();
    for orbit in &orbits {
        let v = &orbit.members[0];
        let self_ok = orbit.members[1..]
            .iter()
            .all(|w| space.distance(v, w).unwrap() >= d);
        if !self_ok {
            continue;
        }
        let code_ok = chosen.iter().all(|w| space.distance(v, w).unwrap() >= d);
        if code_ok {
            chosen.extend(orbit.members.iter().cloned());
            accepted.push(OrbitInfo {
                representative: orbit.rep.to_bit_string(),
                length: orbit.members.len(),
            });
        }
    }

    let mut code = SubspaceCode::new(space, k, chosen)?;
    code.push_comment(format!(
        "cyclic-search q={} n={n} k={k} d={d} seed={seed} rng={RNG_NAME} modulus={} orbits={}",
        space.q(),
        crate::field::digits_string(cs.ext().modulus()),
        accepted.len()
    ));
    let code = certify_code(code, d)?;
    let report = cs.is_cyclic(&code)?;
    if !report.cyclic {
        return Err(Error::VerificationFailed(
            "search result is not closed under alpha".into(),
        ));
    }
    let bound = packing_bound(space.q(), n, k, d / 2 - 1)?;
    let ratio = bound_ratio(
        &BigUint::from(code.len()),
        &BigRational::from_integer(bound.into()),
    )?;
    Ok(CyclicSearch {
        code,
        accepted,
        orbits_examined: orbits.len(),
        ratio,
    })
}
