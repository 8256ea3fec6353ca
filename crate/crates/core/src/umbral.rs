//! Delta operators, basic polynomial sequences, the star product and the
//! interpolating transform between Taylor coefficients and lattice values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, falling_factorial, inverse_factorials};
use crate::scalar::{from_usize, pow_usize, Scalar};
use crate::series::{cauchy, TaylorSeries};

/// `Q = (1/sigma) sum_k alpha_k T^k`, where `T^k` shifts the argument by `k sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaOperator<T> {
    pub sigma: T,
    pub alpha: BTreeMap<i64, T>,
}

impl<T: Scalar> DeltaOperator<T> {
    pub fn new(sigma: T, alpha: BTreeMap<i64, T>) -> Self {
        Self { sigma, alpha }
    }

    /// `Delta_h = (T - 1)/h`.
    pub fn forward(h: T) -> Self {
        Self::new(h, BTreeMap::from([(0, -T::one()), (1, T::one())]))
    }

    /// `(T - T^-1)/(2 sigma)`.
    pub fn central(sigma: T) -> Self {
        let half = T::one() / T::from_i64(2);
        Self::new(sigma, BTreeMap::from([(-1, -half.clone()), (1, half)]))
    }

    /// Lowest and highest shift offsets `(l, m)`.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.alpha.keys().next()?, *self.alpha.keys().next_back()?))
    }

    /// `mu_j = sum_k alpha_k k^j`, with `0^0 = 1`.
    pub fn moment(&self, j: usize) -> T {
        self.alpha.iter().fold(T::zero(), |acc, (&k, a)| {
            acc + a.clone() * pow_usize(&T::from_i64(k), j)
        })
    }

    /// Check the normalization constraints and return the approximation order `p`:
    /// `Q x^M = M x^(M-1) + O(sigma^p)`.
    pub fn validate(&self) -> Result<usize> {
        if self.sigma <= T::zero() {
            return Err(Error::NonPositiveSpacing);
        }
        let (l, m) = self
            .span()
            .ok_or_else(|| Error::DeltaConstraint("alpha has no entries".into()))?;
        if l >= m {
            return Err(Error::DeltaConstraint(format!(
                "need l < m, got l = {l}, m = {m}"
            )));
        }
        if self.alpha[&l].is_zero() || self.alpha[&m].is_zero() {
            return Err(Error::DeltaConstraint(
                "alpha_l and alpha_m must be nonzero".into(),
            ));
        }
        let sum = self.moment(0);
        if !sum.is_zero() {
            return Err(Error::DeltaConstraint(format!(
                "sum of alpha_k is {sum}, expected 0"
            )));
        }
        let first = self.moment(1);
        if first != T::one() {
            return Err(Error::DeltaConstraint(format!(
                "sum of k alpha_k is {first}, expected 1"
            )));
        }
        // a finite stencil cannot reproduce the exponential-polynomial identity
        // sum alpha_k e^{kt} = t, so some moment beyond the first is nonzero
        let width = (m - l) as usize + 1;
        (2..=2 * width + 2)
            .find(|&j| !self.moment(j).is_zero())
            .map(|j| j - 1)
            .ok_or_else(|| Error::DeltaConstraint("no nonvanishing higher moment".into()))
    }

    /// Symbolic action on a polynomial in the monomial basis.
    pub fn apply(&self, p: &BasicPolynomial<T>) -> BasicPolynomial<T> {
        let degree = p.degree();
        let sigma_pow: Vec<T> = (0..=degree + 1)
            .map(|e| pow_usize(&self.sigma, e))
            .collect();
        let moments: Vec<T> = (0..=degree).map(|j| self.moment(j)).collect();
        let mut out = vec![T::zero(); degree + 1];
        for (d, c) in p.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..=d {
                // (1/sigma) C(d,j) mu_j sigma^j x^(d-j)
                let term = c.clone()
                    * binomial::<T>(d as i64, j as i64)
                    * moments[j].clone()
                    * sigma_pow[j].clone()
                    / self.sigma.clone();
                out[d - j] = out[d - j].clone() + term;
            }
        }
        BasicPolynomial::new(out)
    }
}

/// Polynomial in the monomial basis, `coeffs[d]` multiplying `x^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicPolynomial<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> BasicPolynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            return Self {
                coeffs: vec![T::zero()],
            };
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Drop trailing zero coefficients (keeps at least the constant term).
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }
}

/// The basic sequence `p_0..=p_kmax` of `op`: `p_0 = 1`, `p_n(0) = 0` and `Q p_n = n p_(n-1)`.
///
/// `Q` lowers degree by exactly one with unit leading factor, so the
/// coefficients of `p_n` follow from a triangular solve, top degree first.
pub fn basic_polynomials<T: Scalar>(
    op: &DeltaOperator<T>,
    kmax: usize,
) -> Result<Vec<BasicPolynomial<T>>> {
    op.validate()?;
    let moments: Vec<T> = (0..=kmax + 1).map(|j| op.moment(j)).collect();
    let sigma_pow: Vec<T> = (0..=kmax + 1).map(|e| pow_usize(&op.sigma, e)).collect();
    // entry d -> e of Q on monomials, j = d - e >= 1
    let q_entry = |d: usize, e: usize| {
        let j = d - e;
        binomial::<T>(d as i64, j as i64) * moments[j].clone() * sigma_pow[j - 1].clone()
    };
    let mut out = vec![BasicPolynomial::new(vec![T::one()])];
    for n in 1..=kmax {
        let prev = &out[n - 1].coeffs;
        let mut c = vec![T::zero(); n + 1];
        for e in (0..n).rev() {
            let mut rhs = from_usize::<T>(n) * prev[e].clone();
            for d in (e + 2)..=n {
                rhs = rhs - c[d].clone() * q_entry(d, e);
            }
            c[e + 1] = rhs / from_usize::<T>(e + 1);
        }
        out.push(BasicPolynomial::new(c));
    }
    Ok(out)
}

/// Values `u_0..=u_nmax` on the mesh `x_n = n h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSequence<T> {
    values: Vec<T>,
    h: T,
}

impl<T: Scalar> LatticeSequence<T> {
    pub fn new(values: Vec<T>, h: T) -> Result<Self> {
        if h <= T::zero() {
            return Err(Error::NonPositiveSpacing);
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "lattice sequence needs at least u_0".into(),
            ));
        }
        Ok(Self { values, h })
    }

    /// Unit-spaced lattice.
    pub fn unit(values: Vec<T>) -> Result<Self> {
        Self::new(values, T::one())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn h(&self) -> &T {
        &self.h
    }

    pub fn nmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&T> {
        self.values.get(n)
    }

    pub(crate) fn value(&self, n: usize) -> Result<&T> {
        self.values.get(n).ok_or(Error::WindowExceeded {
            need: n,
            have: self.nmax(),
        })
    }

    pub(crate) fn require(&self, last: usize) -> Result<()> {
        if last > self.nmax() {
            return Err(Error::WindowExceeded {
                need: last,
                have: self.nmax(),
            });
        }
        Ok(())
    }

    /// Replace one value, e.g. to check that a certificate notices corruption.
    pub fn with_value(mut self, n: usize, value: T) -> Result<Self> {
        self.require(n)?;
        self.values[n] = value;
        Ok(self)
    }
}

/// `p_k(nh) = n! h^k/(n-k)!`, zero for `n < k`.
pub fn lower_factorial<T: Scalar>(k: usize, n: usize, h: &T) -> T {
    T::from_bigint(&falling_factorial(n as u64, k as u64)) * pow_usize(h, k)
}

/// `u_n = sum_{k<=n} b_k n! h^k/(n-k)!` for `n = 0..=nmax`.
pub fn forward_transform<T: Scalar>(
    b: &TaylorSeries<T>,
    nmax: usize,
    h: &T,
) -> Result<LatticeSequence<T>> {
    b.require_order(nmax)?;
    let coeffs = b.coeffs();
    let values = (0..=nmax)
        .map(|n| {
            let mut weight = T::one();
            let mut acc = T::zero();
            for (k, bk) in coeffs.iter().enumerate().take(n + 1) {
                if k > 0 {
                    weight = weight * from_usize::<T>(n + 1 - k) * h.clone();
                }
                acc = acc + bk.clone() * weight.clone();
            }
            acc
        })
        .collect();
    LatticeSequence::new(values, h.clone())
}

/// `b_k = h^-k sum_{j<=k} (-1)^(k-j) u_j/(j! (k-j)!)`; exact inverse of [`forward_transform`].
pub fn inverse_transform<T: Scalar>(u: &LatticeSequence<T>) -> TaylorSeries<T> {
    let nmax = u.nmax();
    let inv = inverse_factorials::<T>(nmax);
    let mut h_inv_pow = T::one();
    let hinv = T::one() / u.h.clone();
    let coeffs = (0..=nmax)
        .map(|k| {
            let s = (0..=k).fold(T::zero(), |acc, j| {
                let term = u.values[j].clone() * inv[j].clone() * inv[k - j].clone();
                if (k - j) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            let out = s * h_inv_pow.clone();
            h_inv_pow = h_inv_pow.clone() * hinv.clone();
            out
        })
        .collect();
    TaylorSeries::new(coeffs)
}

/// Product of the algebra spanned by the basic sequence: `p_n * p_m = p_(n+m)`.
pub fn star_product<T: Scalar>(
    f: &TaylorSeries<T>,
    g: &TaylorSeries<T>,
) -> Result<TaylorSeries<T>> {
    if f.order() != g.order() {
        return Err(Error::TruncationMismatch {
            left: f.order(),
            right: g.order(),
        });
    }
    Ok(TaylorSeries::new(cauchy(f.coeffs(), g.coeffs())))
}

/// Action of the delta operator on basic-sequence coordinates: `(b_k) -> ((k+1) b_(k+1))`.
pub fn delta_coefficients<T: Scalar>(f: &TaylorSeries<T>) -> Result<TaylorSeries<T>> {
    f.derivative()
}

/// `(Delta_h^i u)_n = h^-i sum_k (-1)^(i-k) C(i,k) u_(n+k)`.
pub fn delta_window<T: Scalar>(u: &LatticeSequence<T>, i: usize, n: usize) -> Result<T> {
    u.require(n + i)?;
    let s = (0..=i).fold(T::zero(), |acc, k| {
        let term = binomial::<T>(i as i64, k as i64) * u.values[n + k].clone();
        if (i - k).is_multiple_of(2) {
            acc + term
        } else {
            acc - term
        }
    });
    Ok(s / pow_usize(&u.h, i))
}

/// `Delta_h^i u` on `n = 0..=nmax-i`.
pub fn delta_power<T: Scalar>(u: &LatticeSequence<T>, i: usize) -> Result<LatticeSequence<T>> {
    if i > u.nmax() {
        return Err(Error::WindowExceeded {
            need: i,
            have: u.nmax(),
        });
    }
    let values = (0..=u.nmax() - i)
        .map(|n| delta_window(u, i, n))
        .collect::<Result<Vec<_>>>()?;
    LatticeSequence::new(values, u.h.clone())
}
