//! Combinatorial kernels and the binomial identities the residual formulas rest on.
//!
//! Everything is computed over [`BigInt`] and only then lifted into the
//! scalar type, so factorials of a few hundred stay exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{from_usize, Scalar};

/// `n!` for `n >= 0`.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-k+1) = n!/(n-k)!`, zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Exact binomial coefficient over the integers.
///
/// Zero whenever `k < 0`, `k > n` or `n < 0`: every sum in this crate has a
/// nonnegative upper index and relies on out-of-range terms vanishing.
pub fn binomial_int(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial<T: Scalar>(n: i64, k: i64) -> T {
    T::from_bigint(&binomial_int(n, k))
}

/// Reciprocal factorial `1/m!`, with `1/m! = 0` for negative `m`.
pub fn rfact<T: Scalar>(m: i64) -> T {
    if m < 0 {
        T::zero()
    } else {
        T::one() / T::from_bigint(&factorial(m as u64))
    }
}

/// Table of `1/j!` for `j = 0..=n`.
pub fn inverse_factorials<T: Scalar>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = T::one();
    out.push(acc.clone());
    for j in 1..=n {
        acc = acc / from_usize::<T>(j);
        out.push(acc.clone());
    }
    out
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, computed as a length-`k` product.
pub fn pochhammer<T: Scalar>(a: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (a.clone() + from_usize::<T>(i)))
}

fn sign<T: Scalar>(e: i64) -> T {
    if e.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn delta<T: Scalar>(a: i64, b: i64) -> T {
    if a == b {
        T::one()
    } else {
        T::zero()
    }
}

/// `sum_k (-1)^k C(n,k)` against `delta_{n0}`.
pub fn identity_alternating<T: Scalar>(n: i64) -> (T, T) {
    let lhs = (0..=n).fold(T::zero(), |acc, k| acc + sign::<T>(k) * binomial::<T>(n, k));
    (lhs, delta(n, 0))
}

/// Vandermonde convolution `sum_k C(s,k) C(m,r-k)` against `C(m+s,r)`.
pub fn identity_vandermonde<T: Scalar>(s: i64, m: i64, r: i64) -> (T, T) {
    let lhs = (0..=r).fold(T::zero(), |acc, k| {
        acc + binomial::<T>(s, k) * binomial::<T>(m, r - k)
    });
    (lhs, binomial(m + s, r))
}

/// `sum_k (-1)^(s-k) C(s,k) C(n+k, m+s)` against `C(n,m)`.
pub fn identity_delt<T: Scalar>(s: i64, n: i64, m: i64) -> (T, T) {
    let lhs = (0..=s).fold(T::zero(), |acc, k| {
        acc + sign::<T>(s - k) * binomial::<T>(s, k) * binomial::<T>(n + k, m + s)
    });
    (lhs, binomial(n, m))
}

/// The identity that collapses the umbral image of `x^r y^(s)` to a difference window:
/// `sum_{k=j}^{n+s-r} (-1)^(k-j) C(n-r, k-s) C(k,j)` against
/// `sum_i (-1)^(s-i) C(s,i) delta_{n-r+i, j}`.
pub fn identity_key<T: Scalar>(n: i64, r: i64, s: i64, j: i64) -> (T, T) {
    let lhs = (j..=(n + s - r)).fold(T::zero(), |acc, k| {
        acc + sign::<T>(k - j) * binomial::<T>(n - r, k - s) * binomial::<T>(k, j)
    });
    let rhs = (0..=s).fold(T::zero(), |acc, i| {
        acc + sign::<T>(s - i) * binomial::<T>(s, i) * delta::<T>(n - r + i, j)
    });
    (lhs, rhs)
}

/// Ranges over which [`identity_sweep`] checks each family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityRanges {
    pub alternating_n: i64,
    pub vandermonde: i64,
    pub delt_s: i64,
    pub delt_n: i64,
    pub key_s: i64,
    pub key_n: i64,
}

impl Default for IdentityRanges {
    fn default() -> Self {
        Self {
            alternating_n: 40,
            vandermonde: 15,
            delt_s: 6,
            delt_n: 20,
            key_s: 4,
            key_n: 15,
        }
    }
}

impl IdentityRanges {
    /// Same shape as the defaults with every upper index bound set to `max`.
    pub fn with_max(max: i64) -> Self {
        Self {
            alternating_n: max,
            vandermonde: max,
            delt_n: max,
            key_n: max,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityFamilyReport {
    pub name: &'static str,
    pub checked: usize,
    /// Arguments of the first unequal pair, if any.
    pub first_failure: Option<Vec<i64>>,
}

impl IdentityFamilyReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn run_family<T, I>(
    name: &'static str,
    cases: I,
    eval: impl Fn(&[i64]) -> (T, T),
) -> IdentityFamilyReport
where
    T: Scalar,
    I: IntoIterator<Item = Vec<i64>>,
{
    let mut checked = 0;
    let mut first_failure = None;
    for args in cases {
        checked += 1;
        let (lhs, rhs) = eval(&args);
        if lhs != rhs && first_failure.is_none() {
            first_failure = Some(args);
        }
    }
    IdentityFamilyReport {
        name,
        checked,
        first_failure,
    }
}

/// Evaluate all four identity families over `ranges`.
pub fn identity_sweep<T: Scalar>(ranges: &IdentityRanges) -> Vec<IdentityFamilyReport> {
    let alt = run_family::<T, _>(
        "alternating",
        (0..=ranges.alternating_n).map(|n| vec![n]),
        |a| identity_alternating(a[0]),
    );

    let v = ranges.vandermonde;
    let vdm = run_family::<T, _>(
        "vandermonde",
        (0..=v).flat_map(move |s| (0..=v).flat_map(move |m| (0..=v).map(move |r| vec![s, m, r]))),
        |a| identity_vandermonde(a[0], a[1], a[2]),
    );

    let (ds, dn) = (ranges.delt_s, ranges.delt_n);
    let delt = run_family::<T, _>(
        "delt",
        (0..=ds).flat_map(move |s| (0..=dn).flat_map(move |n| (0..=n).map(move |m| vec![s, n, m]))),
        |a| identity_delt(a[0], a[1], a[2]),
    );

    let (ks, kn) = (ranges.key_s, ranges.key_n);
    let key = run_family::<T, _>(
        "key",
        (0..=ks).flat_map(move |s| {
            (0..=kn).flat_map(move |n| {
                (0..=n).flat_map(move |r| (0..=(n + s - r)).map(move |j| vec![n, r, s, j]))
            })
        }),
        |a| identity_key(a[0], a[1], a[2], a[3]),
    );

    vec![alt, vdm, delt, key]
}
