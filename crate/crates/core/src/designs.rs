//! Verification of codes, covering designs and Turán designs, and the
//! constructions that move between them.
//!
//! Conversions only accept inputs that carry a verification tag, which is
//! set exclusively by the `certify*` functions here. A code with minimum
//! distance `2*delta + 2` and a covering of `r = k - delta` subspaces are the
//! two sides of the same incidence structure: each `r`-subspace lies in at
//! most one codeword, or at least one covering member.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::bounds::gaussian_binomial;
use crate::code::{CodeTag, SubspaceCode};
use crate::error::{Error, Result};
use crate::ext::ExtFieldSpec;
use crate::linalg;
use crate::subspace::{Space, Subspace};

/// Outcome of a pairwise distance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeReport {
    pub valid: bool,
    pub required: usize,
    /// `None` when the code has fewer than two members.
    pub min_distance: Option<usize>,
    /// First pair (in member order) closer than required.
    pub violating_pair: Option<(Subspace, Subspace)>,
}

/// Pairwise sums `dim(U + V)` for all members, computed once per pair.
struct PairRanks<'a> {
    space: &'a Space,
    packed: Option<Vec<Vec<u64>>>,
}

impl<'a> PairRanks<'a> {
    fn new(space: &'a Space, members: &[Subspace]) -> Self {
        let packed = (space.q() == 2 && space.n() <= 64).then(|| {
            members
                .iter()
                .map(|m| m.rows().map(linalg::pack_gf2).collect())
                .collect()
        });
        PairRanks { space, packed }
    }

    fn sum_dim(&self, members: &[Subspace], i: usize, j: usize) -> usize {
        match &self.packed {
            Some(p) => {
                let mut rows = p[i].clone();
                rows.extend_from_slice(&p[j]);
                linalg::rank_gf2(rows)
            }
            None => self
                .space
                .sum_dim(&members[i], &members[j])
                .expect("members share the ambient space"),
        }
    }
}

fn check_distance_arg(d: usize) -> Result<()> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "minimum distance {d} must be even and at least 2"
        )));
    }
    Ok(())
}

/// Exhaustive pairwise check that every two members satisfy
/// `dim(U ∩ V) <= k - d/2`, i.e. `d_S(U, V) >= d`.
pub fn verify_code(code: &SubspaceCode, d: usize) -> Result<CodeReport> {
    check_distance_arg(d)?;
    let k = code.k();
    let members = code.members();
    let ranks = PairRanks::new(code.space(), members);
    let mut min_distance: Option<usize> = None;
    let mut violating_pair = None;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let dist = 2 * (ranks.sum_dim(members, i, j) - k);
            min_distance = Some(min_distance.map_or(dist, |m| m.min(dist)));
            if dist < d && violating_pair.is_none() {
                violating_pair = Some((members[i].clone(), members[j].clone()));
            }
        }
    }
    Ok(CodeReport {
        valid: violating_pair.is_none(),
        required: d,
        min_distance,
        violating_pair,
    })
}

/// Verifies and tags a code with minimum distance `d`.
pub fn certify_code(code: SubspaceCode, d: usize) -> Result<SubspaceCode> {
    let report = verify_code(&code, d)?;
    if !report.valid {
        return Err(Error::VerificationFailed(format!(
            "code has minimum distance {} < {d}",
            report.min_distance.unwrap_or(0)
        )));
    }
    Ok(code.with_tag(CodeTag::MinDistance(d)))
}

/// Cover counts over all `r`-subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    pub subspaces: u64,
    pub min_cover: u64,
    pub max_cover: u64,
    pub uncovered: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    pub valid: bool,
    pub r: usize,
    pub stats: CoverStats,
    /// First uncovered `r`-subspace, if any.
    pub witness: Option<Subspace>,
}

/// Counts, for every `r`-subspace of the ambient space, how many members
/// contain it.
pub fn verify_covering(code: &SubspaceCode, r: usize) -> Result<CoveringReport> {
    if r > code.k() {
        return Err(Error::invalid(format!(
            "r = {r} exceeds member dimension {}",
            code.k()
        )));
    }
    let space = code.space();
    let all = space.enumerate(r)?;
    let mut counts: HashMap<Subspace, u64> = HashMap::new();
    for m in code.members() {
        for u in space.subspaces_within(m, r)? {
            *counts.entry(u).or_insert(0) += 1;
        }
    }
    let mut stats = CoverStats {
        subspaces: 0,
        min_cover: u64::MAX,
        max_cover: 0,
        uncovered: 0,
    };
    let mut witness = None;
    for u in all {
        let c = counts.get(&u).copied().unwrap_or(0);
        stats.subspaces += 1;
        stats.min_cover = stats.min_cover.min(c);
        stats.max_cover = stats.max_cover.max(c);
        if c == 0 {
            stats.uncovered += 1;
            if witness.is_none() {
                witness = Some(u);
            }
        }
    }
    Ok(CoveringReport {
        valid: stats.uncovered == 0,
        r,
        stats,
        witness,
    })
}

/// A verified q-covering design: every `r`-subspace lies in some member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringDesign {
    code: SubspaceCode,
    r: usize,
    stats: CoverStats,
}

impl CoveringDesign {
    pub fn certify(code: SubspaceCode, r: usize) -> Result<Self> {
        let report = verify_covering(&code, r)?;
        if !report.valid {
            return Err(Error::VerificationFailed(format!(
                "{} of {} subspaces of dimension {r} are uncovered",
                report.stats.uncovered, report.stats.subspaces
            )));
        }
        Ok(CoveringDesign {
            code: code.with_tag(CodeTag::Covering { r }),
            r,
            stats: report.stats,
        })
    }

    pub fn code(&self) -> &SubspaceCode {
        &self.code
    }

    pub fn into_code(self) -> SubspaceCode {
        self.code
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn stats(&self) -> &CoverStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuranReport {
    pub valid: bool,
    pub k: usize,
    pub checked: u64,
    /// First `k`-subspace containing no member, if any.
    pub witness: Option<Subspace>,
}

/// Checks that every `k`-subspace contains at least one member.
pub fn verify_turan(code: &SubspaceCode, k: usize) -> Result<TuranReport> {
    let r = code.k();
    if !(r <= k && k <= code.n()) {
        return Err(Error::invalid(format!(
            "need member dimension {r} <= k = {k} <= n = {}",
            code.n()
        )));
    }
    let space = code.space();
    let members: HashSet<&Subspace> = code.members().iter().collect();
    let mut checked = 0u64;
    let mut witness = None;
    for w in space.enumerate(k)? {
        checked += 1;
        let hit = space.subspaces_within(&w, r)?.any(|u| members.contains(&u));
        if !hit && witness.is_none() {
            witness = Some(w);
        }
    }
    Ok(TuranReport {
        valid: witness.is_none(),
        k,
        checked,
        witness,
    })
}

/// A verified q-Turán design: every `k`-subspace contains some member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuranDesign {
    code: SubspaceCode,
    k: usize,
}

impl TuranDesign {
    pub fn certify(code: SubspaceCode, k: usize) -> Result<Self> {
        let report = verify_turan(&code, k)?;
        if let Some(w) = report.witness {
            return Err(Error::VerificationFailed(format!(
                "the {k}-subspace {:?} contains no member",
                w.digits()
            )));
        }
        Ok(TuranDesign {
            code: code.with_tag(CodeTag::Turan { k }),
            k,
        })
    }

    pub fn code(&self) -> &SubspaceCode {
        &self.code
    }

    pub fn into_code(self) -> SubspaceCode {
        self.code
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }
}

fn tagged_distance(code: &SubspaceCode) -> Result<usize> {
    match code.tag() {
        Some(CodeTag::MinDistance(d)) => Ok(d),
        _ => Err(Error::Unverified(
            "expected a code certified for minimum distance".into(),
        )),
    }
}

fn big_count(q: u64, n: usize, k: usize) -> BigUint {
    gaussian_binomial(q, n, k).expect("dimensions already validated")
}

/// Completes a code with minimum distance `2*delta + 2` to a covering of all
/// `(k - delta)`-subspaces.
///
/// Uncovered subspaces are visited in order; each one still uncovered when
/// reached gets the superspace obtained by extending its basis with standard
/// basis vectors `e_1, e_2, ...`, skipping dependent ones. The result has at
/// most `M + ([n, k-delta]_q - [k, k-delta]_q * M)` members.
pub fn code_to_covering(code: &SubspaceCode) -> Result<CoveringDesign> {
    let d = tagged_distance(code)?;
    let k = code.k();
    let delta = d / 2 - 1;
    if delta >= k {
        return Err(Error::invalid(format!(
            "distance {d} leaves nothing to cover in dimension {k}"
        )));
    }
    let r = k - delta;
    let space = code.space();
    let mut covered: HashSet<Subspace> = HashSet::new();
    for m in code.members() {
        covered.extend(space.subspaces_within(m, r)?);
    }
    let mut members: Vec<Subspace> = code.members().to_vec();
    for u in space.enumerate(r)? {
        if covered.contains(&u) {
            continue;
        }
        let v = extend_with_standard_vectors(space, &u, k);
        covered.extend(space.subspaces_within(&v, r)?);
        members.push(v);
    }
    let added = members.len() - code.len();
    let out = SubspaceCode::new(space, k, members)?;
    let design = CoveringDesign::certify(out, r)?;

    let m = BigInt::from(code.len());
    let slack = BigInt::from(big_count(code.q(), code.n(), r))
        - BigInt::from(big_count(code.q(), k, r)) * &m;
    if BigInt::from(design.len()) > &m + &slack {
        return Err(Error::VerificationFailed(format!(
            "completion added {added} members, more than the {slack} uncovered subspaces"
        )));
    }
    Ok(design)
}

fn extend_with_standard_vectors(space: &Space, u: &Subspace, k: usize) -> Subspace {
    let mut current = u.clone();
    for j in 0..space.n() {
        if current.dim() == k {
            break;
        }
        let mut e = vec![0u32; space.n()];
        e[j] = 1;
        let mut rows: Vec<Vec<u32>> = current.rows().map(|r| r.to_vec()).collect();
        rows.push(e);
        let next = space.canonicalize_unchecked(rows);
        if next.dim() > current.dim() {
            current = next;
        }
    }
    current
}

/// Prunes a covering of `r`-subspaces to a code with minimum distance
/// `2(k - r) + 2`.
///
/// Incidence pairs `(U, V)` are ordered lexicographically; whenever `U`
/// already appeared with an earlier `V'`, `V` is removed. The survivor count
/// is at least `|C| + [n, r]_q - [k, r]_q * |C|`.
pub fn covering_to_code(cov: &CoveringDesign) -> Result<SubspaceCode> {
    let code = cov.code();
    let r = cov.r();
    let k = code.k();
    if r == 0 {
        return Err(Error::invalid(
            "a covering of the zero subspace has no code counterpart",
        ));
    }
    let space = code.space();
    let mut first: HashMap<Subspace, usize> = HashMap::new();
    let mut removed = vec![false; code.len()];
    for (j, v) in code.members().iter().enumerate() {
        for u in space.subspaces_within(v, r)? {
            if let std::collections::hash_map::Entry::Vacant(e) = first.entry(u) {
                e.insert(j);
            } else {
                removed[j] = true;
            }
        }
    }
    let survivors: Vec<Subspace> = code
        .members()
        .iter()
        .zip(&removed)
        .filter(|(_, &gone)| !gone)
        .map(|(v, _)| v.clone())
        .collect();
    let d = 2 * (k - r) + 2;
    let out = certify_code(SubspaceCode::new(space, k, survivors)?, d)?;

    let c = BigInt::from(code.len());
    let floor = &c + BigInt::from(big_count(code.q(), code.n(), r))
        - BigInt::from(big_count(code.q(), k, r)) * &c;
    if BigInt::from(out.len()) < floor {
        return Err(Error::VerificationFailed(format!(
            "pruning kept {} members, fewer than the guaranteed {floor}",
            out.len()
        )));
    }
    Ok(out)
}

/// The spread of F_q^n by `k`-subspaces for `k | n`: the cosets
/// `alpha^i * GF(q^k)` inside GF(q^n).
pub fn spread_construct(space: &Space, k: usize) -> Result<SubspaceCode> {
    let n = space.n();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::invalid(format!(
            "a spread needs k | n, got n={n} k={k}"
        )));
    }
    let ext = ExtFieldSpec::build(space.field(), n, None)?;
    let q = space.q();
    let sub_order = q.pow(k as u32);
    // The subfield GF(q^k) is the fixed field of x -> x^(q^k).
    let subfield: Vec<u32> = (0..ext.order() as u32)
        .filter(|&x| ext.pow(x, sub_order) == x)
        .collect();
    if subfield.len() as u64 != sub_order {
        return Err(Error::VerificationFailed(format!(
            "found {} fixed points of the Frobenius power, expected {sub_order}",
            subfield.len()
        )));
    }
    let rows: Vec<Vec<u32>> = subfield.iter().map(|&x| ext.coords(x)).collect();
    let base = space.canonicalize(&rows)?;
    debug_assert_eq!(base.dim(), k);
    let basis: Vec<u32> = base.rows().map(|r| ext.from_coords(r)).collect();

    let size = (ext.order() - 1) / (sub_order - 1);
    let mut members = Vec::with_capacity(size as usize);
    for i in 0..size {
        let a = ext.alpha_pow(i);
        let rows: Vec<Vec<u32>> = basis.iter().map(|&b| ext.coords(ext.mul(a, b))).collect();
        members.push(space.canonicalize_unchecked(rows));
    }
    let code = SubspaceCode::new(space, k, members)?;
    if code.len() as u64 != size {
        return Err(Error::VerificationFailed(
            "spread cosets are not distinct".into(),
        ));
    }
    let code = certify_code(code, 2 * k)?;

    // every nonzero vector lies in exactly one member
    let mut hits = vec![0u32; ext.order() as usize];
    for m in code.members() {
        for v in space.vectors(m) {
            hits[ext.from_coords(&v) as usize] += 1;
        }
    }
    if hits[1..].iter().any(|&h| h != 1) {
        return Err(Error::VerificationFailed(
            "spread members do not partition the nonzero vectors".into(),
        ));
    }
    Ok(code)
}

/// Orthogonal complement of every member. Requires a certified code; the
/// result is certified at the same distance.
pub fn dual_code(code: &SubspaceCode) -> Result<SubspaceCode> {
    let d = tagged_distance(code)?;
    let space = code.space();
    let members = code
        .members()
        .iter()
        .map(|m| space.orthogonal_complement(m))
        .collect::<Result<Vec<_>>>()?;
    let out = SubspaceCode::new(space, code.n() - code.k(), members)?;
    if out.len() != code.len() {
        return Err(Error::VerificationFailed("complements collided".into()));
    }
    certify_code(out, d)
}

/// Lifts a covering of F_q^n to F_q^(n+1): each member `W` becomes
/// `W ⊕ <e_(n+1)>`, with the new coordinate appended last. Size and the
/// covered dimension are preserved, so `C_q(n+1, n+1-t, r) <= C_q(n, n-t, r)`.
pub fn lift_covering(cov: &CoveringDesign) -> Result<CoveringDesign> {
    let code = cov.code();
    let n = code.n();
    if cov.r() > n {
        return Err(Error::invalid(
            "covered dimension exceeds the ambient dimension",
        ));
    }
    let lifted_space = code.space().with_ambient(n + 1);
    let members = code.members().iter().map(|w| {
        let mut rows: Vec<Vec<u32>> = w
            .rows()
            .map(|r| {
                let mut x = r.to_vec();
                x.push(0);
                x
            })
            .collect();
        let mut e = vec![0u32; n + 1];
        e[n] = 1;
        rows.push(e);
        lifted_space.canonicalize_unchecked(rows)
    });
    let out = SubspaceCode::new(&lifted_space, code.k() + 1, members)?;
    if out.len() != code.len() {
        return Err(Error::VerificationFailed("lifted members collided".into()));
    }
    CoveringDesign::certify(out, cov.r())
}

/// Either kind of design, for [`turan_dual`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Design {
    Covering(CoveringDesign),
    Turan(TuranDesign),
}

impl Design {
    pub fn code(&self) -> &SubspaceCode {
        match self {
            Design::Covering(c) => c.code(),
            Design::Turan(t) => t.code(),
        }
    }
}

/// Memberwise complement: a covering `C_q(n, k, r)` becomes a Turán design
/// `T_q(n, n-r, n-k)` and back.
pub fn turan_dual(design: &Design) -> Result<Design> {
    let code = design.code();
    let space = code.space();
    let n = code.n();
    let complements = code
        .members()
        .iter()
        .map(|m| space.orthogonal_complement(m))
        .collect::<Result<Vec<_>>>()?;
    let out = SubspaceCode::new(space, n - code.k(), complements)?;
    match design {
        Design::Covering(c) => Ok(Design::Turan(TuranDesign::certify(out, n - c.r())?)),
        Design::Turan(t) => Ok(Design::Covering(CoveringDesign::certify(out, n - t.k())?)),
    }
}
