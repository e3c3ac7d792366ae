//! Exact bounds on Grassmannian codes and q-covering designs.
//!
//! Throughout, a code has minimum subspace distance `d = 2*delta + 2`, and a
//! covering design covers subspaces of dimension `r` (the two meet at
//! `r = k - delta`). Everything here is exact integer or rational
//! arithmetic; rationals stay unrounded until the final floor or ceiling.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::invalid(format!("q = {q} must be at least 2")));
    }
    Ok(())
}

fn check_code_params(q: u64, n: usize, k: usize, delta: usize) -> Result<()> {
    check_q(q)?;
    if !(delta <= k && k <= n) {
        return Err(Error::invalid(format!(
            "need 0 <= delta <= k <= n, got n={n} k={k} delta={delta}"
        )));
    }
    Ok(())
}

fn pow(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// `q^e - 1`
fn mersenne(q: u64, e: usize) -> BigUint {
    pow(q, e) - 1u32
}

/// The Gaussian binomial coefficient `[n choose k]_q`, the number of
/// `k`-dimensional subspaces of `F_q^n`.
///
/// ```
/// use grasscode::bounds::gaussian_binomial;
/// assert_eq!(gaussian_binomial(2, 4, 2).unwrap(), 35u32.into());
/// assert_eq!(gaussian_binomial(2, 6, 3).unwrap(), 1395u32.into());
/// ```
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> Result<BigUint> {
    check_q(q)?;
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= mersenne(q, n - i);
        den *= mersenne(q, i + 1);
    }
    let (value, rest) = num.div_rem(&den);
    debug_assert!(rest.is_zero());
    Ok(value)
}

/// `[n choose k]_q` as a `u64`, or a cap error naming `what`.
pub(crate) fn gaussian_u64(
    q: u64,
    n: usize,
    k: usize,
    cap: u64,
    what: &'static str,
) -> Result<u64> {
    let count = gaussian_binomial(q, n, k)?;
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::cap(what, count, cap)),
    }
}

/// The unrounded ratio `[n choose k-delta]_q / [k choose k-delta]_q`, which
/// bounds codes from above and coverings from below.
pub fn reference_ratio(q: u64, n: usize, k: usize, delta: usize) -> Result<BigRational> {
    check_code_params(q, n, k, delta)?;
    let num = gaussian_binomial(q, n, k - delta)?;
    let den = gaussian_binomial(q, k, k - delta)?;
    Ok(BigRational::new(num.into(), den.into()))
}

/// Packing bound: `floor([n, k-delta]_q / [k, k-delta]_q)`.
pub fn packing_bound(q: u64, n: usize, k: usize, delta: usize) -> Result<BigUint> {
    let r = reference_ratio(q, n, k, delta)?;
    Ok(to_biguint(r.floor().to_integer()))
}

/// Covering bound: `ceil([n, k-delta]_q / [k, k-delta]_q)`.
pub fn covering_bound(q: u64, n: usize, k: usize, delta: usize) -> Result<BigUint> {
    let r = reference_ratio(q, n, k, delta)?;
    Ok(to_biguint(r.ceil().to_integer()))
}

fn to_biguint(x: BigInt) -> BigUint {
    x.to_biguint().expect("bounds are nonnegative")
}

/// Iterated Johnson bound: nested floors of `(q^n - 1)/(q^k - 1)`, bottoming
/// out at 1 once the dimension reaches `delta`.
///
/// ```
/// use grasscode::bounds::{iterated_johnson, packing_bound};
/// assert_eq!(iterated_johnson(2, 6, 3, 1).unwrap(), 90u32.into());
/// assert_eq!(packing_bound(2, 6, 3, 1).unwrap(), 93u32.into());
/// ```
pub fn iterated_johnson(q: u64, n: usize, k: usize, delta: usize) -> Result<BigUint> {
    check_code_params(q, n, k, delta)?;
    let mut value = BigUint::one();
    // innermost level has dimension delta + 1 in ambient n - k + delta + 1
    for level in (delta + 1)..=k {
        let amb = n - k + level;
        value = (mersenne(q, amb) * value) / mersenne(q, level);
    }
    Ok(value)
}

/// Iterated Schönheim bound for coverings of `r`-subspaces by
/// `k`-subspaces: nested ceilings, innermost `ceil((q^(n-r+1)-1)/(q^(k-r+1)-1))`.
pub fn iterated_schonheim(q: u64, n: usize, k: usize, r: usize) -> Result<BigUint> {
    check_q(q)?;
    if !(1 <= r && r <= k && k <= n) {
        return Err(Error::invalid(format!(
            "need 1 <= r <= k <= n, got n={n} k={k} r={r}"
        )));
    }
    let mut value = BigUint::one();
    for step in (0..r).rev() {
        let num = mersenne(q, n - step) * value;
        let den = mersenne(q, k - step);
        value = Integer::div_ceil(&num, &den);
    }
    Ok(value)
}

/// One row of a bound table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub packing: BigUint,
    pub iterated_johnson: BigUint,
    pub covering: BigUint,
    /// Absent when `delta = k` (nothing of positive dimension to cover).
    pub iterated_schonheim: Option<BigUint>,
}

pub fn bound_row(q: u64, n: usize, k: usize, delta: usize) -> Result<BoundRow> {
    Ok(BoundRow {
        q,
        n,
        k,
        delta,
        packing: packing_bound(q, n, k, delta)?,
        iterated_johnson: iterated_johnson(q, n, k, delta)?,
        covering: covering_bound(q, n, k, delta)?,
        iterated_schonheim: if delta < k {
            Some(iterated_schonheim(q, n, k, k - delta)?)
        } else {
            None
        },
    })
}

/// Whether a reported value is a bound or the exact optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Upper,
    Lower,
    Exact,
    /// Exact once the ambient dimension is large enough; no explicit
    /// threshold is known.
    ExactForLargeN,
}

/// Closed-form values for families where the optimum (or a lower bound) is
/// known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `A_q(n, 4, 2) = (q^n - 1)/(q^2 - 1)` for even `n`, attained by spreads.
    SpreadEven { q: u64, n: usize },
    /// `A_q(n, 4, 2) >= (q^n - 1)/(q^2 - 1) - q^2/(q + 1)` for odd `n >= 3`.
    SpreadOdd { q: u64, n: usize },
    /// Minimum q-Turán design `T_q(vm + delta, vm - v + 1 + delta, m)`
    /// equals `(q^(vm) - 1)/(q^m - 1)` for `v, m >= 2`.
    TuranNormalSpread {
        q: u64,
        v: usize,
        m: usize,
        delta: usize,
    },
    /// `C_q(n, n - n/(r+1), r) = (q^n - 1)/(q^(n/(r+1)) - 1)` when `(r+1) | n`.
    CoveringDivisible { q: u64, n: usize, r: usize },
    /// `C_q(n, n - t, r) = (q^((r+1)t) - 1)/(q^t - 1)` for all sufficiently
    /// large `n`.
    CoveringLargeN { q: u64, t: usize, r: usize },
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::SpreadEven { .. } => "spread-even",
            ClosedForm::SpreadOdd { .. } => "spread-odd",
            ClosedForm::TuranNormalSpread { .. } => "turan-normal-spread",
            ClosedForm::CoveringDivisible { .. } => "covering-divisible",
            ClosedForm::CoveringLargeN { .. } => "covering-large-n",
        }
    }

    pub const NAMES: [&'static str; 5] = [
        "spread-even",
        "spread-odd",
        "turan-normal-spread",
        "covering-divisible",
        "covering-large-n",
    ];
}

/// Caveat attached to values that only hold eventually in `n`.
pub const LARGE_N_CAVEAT: &str = "holds for all sufficiently large integers n";

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// An exact value with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub params: BTreeMap<&'static str, u64>,
    pub kind: &'static str,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    pub exactness: Exactness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Ratio>,
}

fn exact_quotient(num: BigUint, den: BigUint) -> BigUint {
    let (v, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "closed form is integral");
    v
}

/// Evaluates a closed-form value, checking the family's constraints.
pub fn closed_form(form: ClosedForm) -> Result<BoundReport> {
    let mut params = BTreeMap::new();
    let mut caveat = None;
    let (value, exactness) = match form {
        ClosedForm::SpreadEven { q, n } => {
            check_q(q)?;
            if n == 0 || n % 2 != 0 {
                return Err(Error::invalid(format!("n = {n} must be even and positive")));
            }
            params.extend([("q", q), ("n", n as u64), ("k", 2), ("d", 4)]);
            (
                exact_quotient(mersenne(q, n), mersenne(q, 2)),
                Exactness::Exact,
            )
        }
        ClosedForm::SpreadOdd { q, n } => {
            check_q(q)?;
            if n < 3 || n % 2 == 0 {
                return Err(Error::invalid(format!(
                    "n = {n} must be odd and at least 3"
                )));
            }
            params.extend([("q", q), ("n", n as u64), ("k", 2), ("d", 4)]);
            let q_big = BigInt::from(q);
            let value =
                BigRational::new(BigInt::from(mersenne(q, n)), BigInt::from(mersenne(q, 2)))
                    - BigRational::new(&q_big * &q_big, q_big + 1);
            (to_biguint(value.ceil().to_integer()), Exactness::Lower)
        }
        ClosedForm::TuranNormalSpread { q, v, m, delta } => {
            check_q(q)?;
            if v < 2 || m < 2 {
                return Err(Error::invalid(format!(
                    "need v >= 2 and m >= 2, got v={v} m={m}"
                )));
            }
            params.extend([
                ("q", q),
                ("v", v as u64),
                ("m", m as u64),
                ("delta", delta as u64),
                ("n", (v * m + delta) as u64),
                ("k", (v * m - v + 1 + delta) as u64),
                ("r", m as u64),
            ]);
            (
                exact_quotient(mersenne(q, v * m), mersenne(q, m)),
                Exactness::Exact,
            )
        }
        ClosedForm::CoveringDivisible { q, n, r } => {
            check_q(q)?;
            if r == 0 || n == 0 || n % (r + 1) != 0 {
                return Err(Error::invalid(format!(
                    "need r >= 1 and (r + 1) | n, got n={n} r={r}"
                )));
            }
            let block = n / (r + 1);
            params.extend([
                ("q", q),
                ("n", n as u64),
                ("k", (n - block) as u64),
                ("r", r as u64),
            ]);
            (
                exact_quotient(mersenne(q, n), mersenne(q, block)),
                Exactness::Exact,
            )
        }
        ClosedForm::CoveringLargeN { q, t, r } => {
            check_q(q)?;
            if t == 0 {
                return Err(Error::invalid("t = n - k must be positive"));
            }
            params.extend([("q", q), ("t", t as u64), ("r", r as u64)]);
            caveat = Some(LARGE_N_CAVEAT);
            (
                exact_quotient(mersenne(q, (r + 1) * t), mersenne(q, t)),
                Exactness::ExactForLargeN,
            )
        }
    };
    Ok(BoundReport {
        params,
        kind: form.name(),
        value,
        exactness,
        caveat,
        ratio: None,
    })
}

/// An exact ratio together with a 4-place decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub exact: BigRational,
    pub decimal: String,
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Ratio", 2)?;
        st.serialize_field("exact", &self.exact.to_string())?;
        st.serialize_field("decimal", &self.decimal)?;
        st.end()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.exact, self.decimal)
    }
}

/// `achieved / reference` as a reduced fraction and a decimal.
///
/// ```
/// use grasscode::bounds::{bound_ratio, reference_ratio};
/// let reference = reference_ratio(2, 6, 3, 1).unwrap(); // 651/7
/// let r = bound_ratio(&45u32.into(), &reference).unwrap();
/// assert_eq!(r.exact.to_string(), "15/31");
/// assert_eq!(r.decimal, "0.4839");
/// ```
pub fn bound_ratio(achieved: &BigUint, reference: &BigRational) -> Result<Ratio> {
    if !reference.is_positive() {
        return Err(Error::invalid("reference bound must be positive"));
    }
    let exact = BigRational::from_integer(BigInt::from(achieved.clone())) / reference;
    let decimal = decimal_places(&exact, 4);
    Ok(Ratio { exact, decimal })
}

/// Renders a nonnegative rational with `places` decimals, rounding half to even.
pub fn decimal_places(x: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let mut whole = scaled.floor().to_integer();
    let frac = scaled - BigRational::from_integer(whole.clone());
    let twice = frac * BigRational::from_integer(BigInt::from(2));
    if twice > BigRational::one() || (twice == BigRational::one() && whole.is_odd()) {
        whole += 1;
    }
    let (int_part, frac_part) = whole.div_rem(&scale);
    if places == 0 {
        return int_part.to_string();
    }
    format!(
        "{}.{:0>width$}",
        int_part,
        frac_part.to_string(),
        width = places as usize
    )
}
