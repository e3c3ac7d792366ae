//! Subspaces of F_q^n in canonical form, the subspace metric, and
//! Grassmannian enumeration.
//!
//! A [`Subspace`] is its reduced row echelon basis, flattened row-major. RREF
//! is canonical, so equality, hashing and ordering work on the flattened
//! entries directly; the global order is lexicographic on that digit string.
//! Field-dependent work goes through a [`Space`], which pairs a field with an
//! ambient dimension and an enumeration cap.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::bounds::gaussian_u64;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg;

/// Default cap on the number of subspaces any single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A subspace in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    k: usize,
    digits: Vec<u32>,
}

impl Subspace {
    /// The zero subspace of F_q^n.
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            k: 0,
            digits: Vec::new(),
        }
    }

    /// Builds from rows already known to be in RREF.
    pub(crate) fn from_rref_rows(n: usize, rows: &[Vec<u32>]) -> Self {
        let digits: Vec<u32> = rows.iter().flatten().copied().collect();
        Subspace {
            n,
            k: rows.len(),
            digits,
        }
    }

    pub(crate) fn from_digits(n: usize, k: usize, digits: Vec<u32>) -> Self {
        debug_assert_eq!(digits.len(), n * k);
        Subspace { n, k, digits }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// Flattened RREF entries, row-major.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.digits[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        // chunks(0) panics, so an empty basis yields nothing explicitly
        (0..self.k).map(move |i| self.row(i))
    }

    /// Pivot column of each row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    /// True when the stored matrix is in reduced row echelon form.
    pub fn is_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        for (i, row) in self.rows().enumerate() {
            let Some(p) = row.iter().position(|&x| x != 0) else {
                return false;
            };
            if row[p] != 1 || last.is_some_and(|l| p <= l) {
                return false;
            }
            for (j, other) in self.rows().enumerate() {
                if j != i && other[p] != 0 {
                    return false;
                }
            }
            last = Some(p);
        }
        true
    }
}

/// A field together with an ambient dimension `n`.
#[derive(Clone, Debug)]
pub struct Space {
    field: Arc<FieldSpec>,
    n: usize,
    cap: u64,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.field == *other.field
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(field: Arc<FieldSpec>, n: usize) -> Self {
        Space {
            field,
            n,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// Overrides the enumeration cap.
    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// The same field in a different ambient dimension, keeping the cap.
    pub fn with_ambient(&self, n: usize) -> Space {
        Space {
            field: Arc::clone(&self.field),
            n,
            cap: self.cap,
        }
    }

    fn bitset(&self) -> bool {
        self.field.order() == 2 && self.n <= 64
    }

    fn check(&self, s: &Subspace) -> Result<()> {
        if s.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "subspace lives in dimension {}, space has dimension {}",
                s.n, self.n
            )));
        }
        Ok(())
    }

    /// Canonical form of the span of `rows`. An all-zero span gives the zero
    /// subspace.
    pub fn canonicalize(&self, rows: &[Vec<u32>]) -> Result<Subspace> {
        self.check_rows(rows)?;
        Ok(self.canonicalize_unchecked(rows.to_vec()))
    }

    /// Canonicalization through the generic field path only, bypassing the
    /// GF(2) bitset fast path.
    pub fn canonicalize_generic(&self, rows: &[Vec<u32>]) -> Result<Subspace> {
        self.check_rows(rows)?;
        let rref = linalg::rref_generic(&self.field, rows.to_vec(), self.n);
        Ok(Subspace::from_rref_rows(self.n, &rref))
    }

    fn check_rows(&self, rows: &[Vec<u32>]) -> Result<()> {
        let q = self.field.order();
        for row in rows {
            if row.len() != self.n {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in dimension {}",
                    row.len(),
                    self.n
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= q) {
                return Err(Error::invalid(format!("{x} is not an element of GF({q})")));
            }
        }
        Ok(())
    }

    pub(crate) fn canonicalize_unchecked(&self, rows: Vec<Vec<u32>>) -> Subspace {
        if self.bitset() {
            let packed = rows.iter().map(|r| linalg::pack_gf2(r)).collect();
            let reduced = linalg::rref_gf2(packed, self.n);
            let mut digits = Vec::with_capacity(reduced.len() * self.n);
            for b in &reduced {
                digits.extend(linalg::unpack_gf2(*b, self.n));
            }
            Subspace::from_digits(self.n, reduced.len(), digits)
        } else {
            let rref = linalg::rref_generic(&self.field, rows, self.n);
            Subspace::from_rref_rows(self.n, &rref)
        }
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.n)
    }

    pub fn full(&self) -> Subspace {
        let mut digits = vec![0u32; self.n * self.n];
        for i in 0..self.n {
            digits[i * self.n + i] = 1;
        }
        Subspace::from_digits(self.n, self.n, digits)
    }

    /// Span of standard basis vectors `e_i` for the given coordinates.
    pub fn coordinate_subspace(&self, coords: &[usize]) -> Result<Subspace> {
        let rows: Vec<Vec<u32>> = coords
            .iter()
            .map(|&c| {
                let mut v = vec![0u32; self.n];
                if c < self.n {
                    v[c] = 1;
                }
                v
            })
            .collect();
        if let Some(&c) = coords.iter().find(|&&c| c >= self.n) {
            return Err(Error::invalid(format!("coordinate {c} out of range")));
        }
        self.canonicalize(&rows)
    }

    /// Rank of the union of the bases of `parts`.
    fn rank_of(&self, parts: &[&Subspace]) -> usize {
        if self.bitset() {
            let rows: Vec<u64> = parts
                .iter()
                .flat_map(|s| s.rows().map(linalg::pack_gf2))
                .collect();
            linalg::rank_gf2(rows)
        } else {
            let rows: Vec<Vec<u32>> = parts
                .iter()
                .flat_map(|s| s.rows().map(|r| r.to_vec()))
                .collect();
            linalg::rref_generic(&self.field, rows, self.n).len()
        }
    }

    /// `dim(U + V)`.
    pub fn sum_dim(&self, u: &Subspace, v: &Subspace) -> Result<usize> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.rank_of(&[u, v]))
    }

    /// `dim(U ∩ V) = dim U + dim V - dim(U + V)`.
    pub fn intersection_dim(&self, u: &Subspace, v: &Subspace) -> Result<usize> {
        Ok(u.k + v.k - self.sum_dim(u, v)?)
    }

    /// Subspace distance `dim U + dim V - 2 dim(U ∩ V)`; for equal
    /// dimensions this is `2k - 2 dim(U ∩ V)`.
    pub fn distance(&self, u: &Subspace, v: &Subspace) -> Result<usize> {
        let sum = self.sum_dim(u, v)?;
        Ok(2 * sum - u.k - v.k)
    }

    /// The subspace `U + V`.
    pub fn join(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        self.check(v)?;
        let rows = u.rows().chain(v.rows()).map(|r| r.to_vec()).collect();
        Ok(self.canonicalize_unchecked(rows))
    }

    /// `U ⊆ V`.
    pub fn contains(&self, v: &Subspace, u: &Subspace) -> Result<bool> {
        if u.k > v.k {
            self.check(u)?;
            self.check(v)?;
            return Ok(false);
        }
        Ok(self.sum_dim(u, v)? == v.k)
    }

    /// Whether the vector lies in `U`.
    pub fn contains_vector(&self, u: &Subspace, x: &[u32]) -> Result<bool> {
        let line = self.canonicalize(&[x.to_vec()])?;
        self.contains(u, &line)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal_complement(&self, u: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        let pivots = u.pivots();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut rows = Vec::with_capacity(self.n - u.k);
        for free in (0..self.n).filter(|&j| !is_pivot[j]) {
            let mut x = vec![0u32; self.n];
            x[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = self.field.neg(u.row(i)[free]);
            }
            rows.push(x);
        }
        Ok(self.canonicalize_unchecked(rows))
    }

    /// All `q^k` vectors of `U`, by coefficient combinations of its basis.
    pub fn vectors(&self, u: &Subspace) -> impl Iterator<Item = Vec<u32>> + '_ {
        let q = self.field.order();
        let total = (q as u64).pow(u.k as u32);
        let basis: Vec<Vec<u32>> = u.rows().map(|r| r.to_vec()).collect();
        (0..total).map(move |mut idx| {
            let mut x = vec![0u32; self.n];
            for b in &basis {
                let c = (idx % q as u64) as u32;
                idx /= q as u64;
                if c != 0 {
                    for (xi, &bi) in x.iter_mut().zip(b) {
                        *xi = self.field.add(*xi, self.field.mul(c, bi));
                    }
                }
            }
            x
        })
    }

    /// Number of `k`-subspaces, checked against the enumeration cap.
    pub fn grassmannian_size(&self, k: usize) -> Result<u64> {
        if k > self.n {
            return Err(Error::invalid(format!("k = {k} exceeds n = {}", self.n)));
        }
        gaussian_u64(self.q(), self.n, k, self.cap, "Grassmannian enumeration")
    }

    /// Every `k`-subspace exactly once, in lexicographic RREF order.
    pub fn enumerate(&self, k: usize) -> Result<Grassmannian> {
        self.grassmannian_size(k)?;
        Ok(Grassmannian::new(self.n, k, self.field.order()))
    }

    /// All `k`-subspaces containing `U`.
    pub fn superspaces_of<'a>(
        &'a self,
        u: &'a Subspace,
        k: usize,
    ) -> Result<impl Iterator<Item = Subspace> + 'a> {
        self.check(u)?;
        if k < u.k || k > self.n {
            return Err(Error::invalid(format!(
                "superspace dimension {k} outside [{}, {}]",
                u.k, self.n
            )));
        }
        let pivots = u.pivots();
        let complement: Vec<usize> = (0..self.n).filter(|j| !pivots.contains(j)).collect();
        let quotient = self.with_ambient(complement.len());
        let inner = quotient.enumerate(k - u.k)?;
        Ok(inner.map(move |w| {
            let mut rows: Vec<Vec<u32>> = u.rows().map(|r| r.to_vec()).collect();
            for wr in w.rows() {
                let mut x = vec![0u32; self.n];
                for (&c, &val) in complement.iter().zip(wr) {
                    x[c] = val;
                }
                rows.push(x);
            }
            self.canonicalize_unchecked(rows)
        }))
    }

    /// All `r`-subspaces of `V`, in ambient coordinates.
    pub fn subspaces_within<'a>(
        &'a self,
        v: &'a Subspace,
        r: usize,
    ) -> Result<impl Iterator<Item = Subspace> + 'a> {
        self.check(v)?;
        if r > v.k {
            return Err(Error::invalid(format!(
                "sub-dimension {r} exceeds dimension {}",
                v.k
            )));
        }
        let inner = self.with_ambient(v.k).enumerate(r)?;
        Ok(inner.map(move |c| self.combine(&c, v)))
    }

    /// `C · V` for `C` an RREF coefficient matrix over `V`'s basis. Since
    /// `V` is itself in RREF the product is already canonical.
    pub(crate) fn combine(&self, coeffs: &Subspace, v: &Subspace) -> Subspace {
        let mut digits = vec![0u32; coeffs.k * self.n];
        for (i, crow) in coeffs.rows().enumerate() {
            let out = &mut digits[i * self.n..(i + 1) * self.n];
            for (j, &c) in crow.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(v.row(j)) {
                    *o = self.field.add(*o, self.field.mul(c, b));
                }
            }
        }
        let s = Subspace::from_digits(self.n, coeffs.k, digits);
        debug_assert!(s.is_rref());
        s
    }

    /// A ranking of `G_q(n, k)` by pivot set, then free entries.
    pub fn indexer(&self, k: usize) -> Result<Indexer> {
        self.grassmannian_size(k)?;
        Ok(Indexer::new(self.n, k, self.field.order() as u64))
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Flattened positions of the free entries of an RREF matrix with the given
/// pivots, in row-major order.
fn free_positions(n: usize, pivots: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..n {
            if !pivots.contains(&j) {
                out.push(i * n + j);
            }
        }
    }
    out
}

fn template(n: usize, pivots: &[usize]) -> Vec<u32> {
    let mut digits = vec![0u32; n * pivots.len()];
    for (i, &p) in pivots.iter().enumerate() {
        digits[i * n + p] = 1;
    }
    digits
}

/// Odometer over the free entries of one pivot set; the last free position
/// changes fastest, so output is lexicographic within the set.
struct PivotStream {
    free: Vec<usize>,
    digits: Vec<u32>,
}

impl PivotStream {
    fn advance(&mut self, q: u32) -> bool {
        for &pos in self.free.iter().rev() {
            if self.digits[pos] + 1 < q {
                self.digits[pos] += 1;
                return true;
            }
            self.digits[pos] = 0;
        }
        false
    }
}

/// Lazy enumeration of a Grassmannian in lexicographic RREF order, merging
/// one stream per pivot-column set.
pub struct Grassmannian {
    n: usize,
    k: usize,
    q: u32,
    streams: Vec<PivotStream>,
    heap: BinaryHeap<Reverse<(Vec<u32>, usize)>>,
}

impl Grassmannian {
    fn new(n: usize, k: usize, q: u32) -> Self {
        let mut streams = Vec::new();
        let mut heap = BinaryHeap::new();
        for (i, pivots) in combinations(n, k).into_iter().enumerate() {
            let s = PivotStream {
                free: free_positions(n, &pivots),
                digits: template(n, &pivots),
            };
            heap.push(Reverse((s.digits.clone(), i)));
            streams.push(s);
        }
        Grassmannian {
            n,
            k,
            q,
            streams,
            heap,
        }
    }
}

impl Iterator for Grassmannian {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let Reverse((digits, i)) = self.heap.pop()?;
        let s = &mut self.streams[i];
        if s.advance(self.q) {
            self.heap.push(Reverse((s.digits.clone(), i)));
        }
        Some(Subspace::from_digits(self.n, self.k, digits))
    }
}

/// Bijection between `G_q(n, k)` and `0..count`: pivot sets in lexicographic
/// order, then free entries read as a base-`q` number (last position least
/// significant).
#[derive(Clone, Debug)]
pub struct Indexer {
    n: usize,
    k: usize,
    q: u64,
    pivot_sets: Vec<Vec<usize>>,
    free: Vec<Vec<usize>>,
    offsets: Vec<u64>,
}

impl Indexer {
    fn new(n: usize, k: usize, q: u64) -> Self {
        let pivot_sets = combinations(n, k);
        let free: Vec<Vec<usize>> = pivot_sets.iter().map(|p| free_positions(n, p)).collect();
        let mut offsets = Vec::with_capacity(pivot_sets.len() + 1);
        let mut acc = 0u64;
        offsets.push(0);
        for f in &free {
            acc += q.pow(f.len() as u32);
            offsets.push(acc);
        }
        Indexer {
            n,
            k,
            q,
            pivot_sets,
            free,
            offsets,
        }
    }

    pub fn count(&self) -> u64 {
        *self.offsets.last().expect("offsets start with 0")
    }

    pub fn unrank(&self, rank: u64) -> Subspace {
        assert!(rank < self.count(), "rank {rank} out of range");
        let set = self.offsets.partition_point(|&o| o <= rank) - 1;
        let mut rest = rank - self.offsets[set];
        let mut digits = template(self.n, &self.pivot_sets[set]);
        for &pos in self.free[set].iter().rev() {
            digits[pos] = (rest % self.q) as u32;
            rest /= self.q;
        }
        Subspace::from_digits(self.n, self.k, digits)
    }

    pub fn rank(&self, s: &Subspace) -> u64 {
        assert_eq!((s.n, s.k), (self.n, self.k), "subspace shape mismatch");
        let pivots = s.pivots();
        let set = self
            .pivot_sets
            .binary_search(&pivots)
            .expect("every RREF pivot set is indexed");
        let within = self.free[set]
            .iter()
            .fold(0u64, |acc, &pos| acc * self.q + s.digits[pos] as u64);
        self.offsets[set] + within
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::gaussian_binomial;

    fn space(q: u32, n: usize) -> Space {
        let (p, e) = crate::field::parse_order(&q.to_string()).unwrap();
        Space::new(FieldSpec::build(p, e, None).unwrap(), n)
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn canonicalize_examples() {
        let s = space(2, 4);
        let u = s
            .canonicalize(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0]])
            .unwrap();
        assert_eq!(u.digits(), &[1, 0, 0, 0, 0, 1, 0, 0]);

        let s3 = space(2, 3);
        let u = s3
            .canonicalize(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]])
            .unwrap();
        assert_eq!(u.dim(), 2);
        assert_eq!(u.digits(), &[1, 0, 1, 0, 1, 1]);

        let g3 = space(3, 2);
        assert_eq!(g3.canonicalize(&[vec![2, 1]]).unwrap().digits(), &[1, 2]);

        assert_eq!(s.canonicalize(&[vec![0; 4]]).unwrap(), s.zero());
        assert!(matches!(
            s.canonicalize(&[vec![1, 0, 0]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn enumeration_counts_and_order() {
        for q in [2u32, 3, 4] {
            for n in 0..=5 {
                let s = space(q, n);
                for k in 0..=n {
                    let all: Vec<Subspace> = s.enumerate(k).unwrap().collect();
                    let expected = gaussian_binomial(q as u64, n, k).unwrap();
                    assert_eq!(num_bigint::BigUint::from(all.len()), expected);
                    assert!(all.windows(2).all(|w| w[0] < w[1]), "strictly increasing");
                    assert!(all.iter().all(|u| u.is_rref() && u.dim() == k));
                }
            }
        }
        let s = space(2, 4);
        assert_eq!(s.enumerate(0).unwrap().collect::<Vec<_>>(), vec![s.zero()]);
        assert_eq!(s.enumerate(4).unwrap().collect::<Vec<_>>(), vec![s.full()]);
    }

    #[test]
    fn enumeration_cap() {
        let s = space(2, 8).with_cap(100);
        match s.enumerate(3) {
            Err(Error::CapExceeded { count, cap, .. }) => {
                assert_eq!(count, "97155");
                assert_eq!(cap, 100);
            }
            other => panic!("expected cap error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn indexer_is_a_bijection() {
        for (q, n, k) in [
            (2u32, 5usize, 2usize),
            (3, 4, 2),
            (4, 3, 1),
            (2, 4, 0),
            (2, 4, 4),
        ] {
            let s = space(q, n);
            let idx = s.indexer(k).unwrap();
            let mut seen: Vec<Subspace> = (0..idx.count()).map(|r| idx.unrank(r)).collect();
            for (r, u) in seen.iter().enumerate() {
                assert_eq!(idx.rank(u), r as u64);
                assert!(u.is_rref());
            }
            seen.sort();
            let all: Vec<Subspace> = s.enumerate(k).unwrap().collect();
            assert_eq!(seen, all);
        }
    }

    #[test]
    fn intersections_and_distance() {
        let s = space(2, 4);
        let u = s.canonicalize(&[e(4, 0), e(4, 1)]).unwrap();
        let v = s.canonicalize(&[e(4, 2), e(4, 3)]).unwrap();
        let w = s.canonicalize(&[e(4, 0), e(4, 2)]).unwrap();
        assert_eq!(s.intersection_dim(&u, &u).unwrap(), 2);
        assert_eq!(s.intersection_dim(&u, &v).unwrap(), 0);
        assert_eq!(s.intersection_dim(&u, &w).unwrap(), 1);
        assert_eq!(s.sum_dim(&u, &w).unwrap(), 3);
        assert_eq!(s.distance(&u, &u).unwrap(), 0);
        assert_eq!(s.distance(&u, &w).unwrap(), 2);
        assert_eq!(s.distance(&u, &v).unwrap(), 4);
        let other = space(2, 5);
        assert!(other.distance(&u, &v).is_err());
    }

    #[test]
    fn complements() {
        let s = space(2, 4);
        assert_eq!(s.orthogonal_complement(&s.full()).unwrap(), s.zero());
        let s3 = space(2, 3);
        let u = s3.canonicalize(&[e(3, 0)]).unwrap();
        assert_eq!(
            s3.orthogonal_complement(&u).unwrap(),
            s3.canonicalize(&[e(3, 1), e(3, 2)]).unwrap()
        );
        let u = s3.canonicalize(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(
            s3.orthogonal_complement(&u).unwrap(),
            s3.canonicalize(&[vec![1, 1, 1]]).unwrap()
        );
    }

    #[test]
    fn complement_is_an_involution_and_orthogonal() {
        for q in [2u32, 3, 4] {
            let s = space(q, 4);
            for k in 0..=4 {
                for u in s.enumerate(k).unwrap() {
                    let c = s.orthogonal_complement(&u).unwrap();
                    assert_eq!(c.dim(), 4 - k);
                    assert_eq!(s.orthogonal_complement(&c).unwrap(), u);
                    for a in u.rows() {
                        for b in c.rows() {
                            let dot = a
                                .iter()
                                .zip(b)
                                .fold(0, |acc, (&x, &y)| s.field().add(acc, s.field().mul(x, y)));
                            assert_eq!(dot, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn superspace_and_within_counts() {
        let s = space(2, 4);
        let point = s.canonicalize(&[e(4, 0)]).unwrap();
        assert_eq!(s.superspaces_of(&point, 2).unwrap().count(), 7);
        assert_eq!(
            s.superspaces_of(&point, 1).unwrap().collect::<Vec<_>>(),
            vec![point.clone()]
        );
        assert_eq!(
            s.superspaces_of(&point, 4).unwrap().collect::<Vec<_>>(),
            vec![s.full()]
        );

        let line = s.canonicalize(&[e(4, 0), vec![0, 1, 1, 0]]).unwrap();
        let pts: Vec<Subspace> = s.subspaces_within(&line, 1).unwrap().collect();
        assert_eq!(pts.len(), 3);
        assert_eq!(
            s.subspaces_within(&line, 0).unwrap().collect::<Vec<_>>(),
            vec![s.zero()]
        );
        let plane = s
            .canonicalize(&[e(4, 0), e(4, 1), vec![0, 0, 1, 1]])
            .unwrap();
        assert_eq!(s.subspaces_within(&plane, 2).unwrap().count(), 7);
    }

    #[test]
    fn within_and_superspaces_are_consistent() {
        let s = space(2, 4);
        for r in 0..=4 {
            for big in r..=4 {
                let small: Vec<Subspace> = s.enumerate(r).unwrap().collect();
                for v in s.enumerate(big).unwrap() {
                    let within: Vec<Subspace> = s.subspaces_within(&v, r).unwrap().collect();
                    for u in &small {
                        let contained = within.contains(u);
                        assert_eq!(contained, s.contains(&v, u).unwrap());
                        let sup: Vec<Subspace> = s.superspaces_of(u, big).unwrap().collect();
                        assert_eq!(contained, sup.contains(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn gf2_fast_path_matches_generic() {
        let s = space(2, 7);
        let idx = s.indexer(3).unwrap();
        for r in (0..idx.count()).step_by(97) {
            let u = idx.unrank(r);
            let v = idx.unrank((r * 31 + 5) % idx.count());
            let rows: Vec<Vec<u32>> = u.rows().chain(v.rows()).map(|x| x.to_vec()).collect();
            assert_eq!(
                s.canonicalize(&rows).unwrap(),
                s.canonicalize_generic(&rows).unwrap()
            );
        }
    }

    #[test]
    fn vectors_of_a_subspace() {
        let s = space(3, 3);
        let u = s.canonicalize(&[vec![1, 2, 0], vec![0, 0, 1]]).unwrap();
        let vs: std::collections::BTreeSet<Vec<u32>> = s.vectors(&u).collect();
        assert_eq!(vs.len(), 9);
        for x in &vs {
            assert!(s.contains_vector(&u, x).unwrap() || x.iter().all(|&c| c == 0));
        }
    }
}
