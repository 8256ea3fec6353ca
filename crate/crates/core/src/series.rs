//! Truncated power series and the power-series ODE solvers.
//!
//! A [`TaylorSeries`] of order `K` stores `b_0..=b_K` and nothing else: no
//! operation reads past `K` or pads with zeros on its own. Whenever more
//! coefficients are needed the call fails with [`Error::TruncationTooSmall`].

use crate::error::{Error, Result};
use crate::exactnum::falling_factorial;
use crate::scalar::{from_usize, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> TaylorSeries<T> {
    /// Series of order `coeffs.len() - 1`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least b_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![T::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// `x^k` truncated at `order` (the zero series if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = T::one();
        }
        s
    }

    /// An exact polynomial carried at truncation `order`.
    ///
    /// Coefficients above the polynomial's degree are genuinely zero, so this
    /// is the one place where zeros are written past the supplied data.
    pub fn from_polynomial(poly: &[T], order: usize) -> Result<Self> {
        let degree = poly.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        if degree > order {
            return Err(Error::TruncationTooSmall {
                have: order,
                need: degree,
            });
        }
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(poly) {
            *dst = src.clone();
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::TruncationMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_order(&self, need: usize) -> Result<()> {
        if self.order() < need {
            return Err(Error::TruncationTooSmall {
                have: self.order(),
                need,
            });
        }
        Ok(())
    }

    /// Keep `b_0..=b_order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.require_order(order)?;
        Ok(Self::new(self.coeffs[..=order].to_vec()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self::new(cauchy(&self.coeffs, &other.coeffs)))
    }

    /// `self^r`, with `self^0` the unit series.
    pub fn pow(&self, r: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..r {
            acc = Self::new(cauchy(&acc.coeffs, &self.coeffs));
        }
        acc
    }

    /// Term-by-term derivative; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::TruncationTooSmall { have: 0, need: 1 });
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * from_usize::<T>(k))
                .collect(),
        ))
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

pub(crate) fn cauchy<T: Scalar>(f: &[T], g: &[T]) -> Vec<T> {
    let len = f.len().min(g.len());
    (0..len)
        .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + f[j].clone() * g[k - j].clone()))
        .collect()
}

pub fn series_mul<T: Scalar>(f: &TaylorSeries<T>, g: &TaylorSeries<T>) -> Result<TaylorSeries<T>> {
    f.mul(g)
}

pub fn eval_series<T: Scalar>(f: &TaylorSeries<T>, x: &T) -> T {
    f.eval(x)
}

fn check_shared_order<T: Scalar>(series: &[&TaylorSeries<T>]) -> Result<usize> {
    let order = series[0].order();
    for s in &series[1..] {
        if s.order() != order {
            return Err(Error::TruncationMismatch {
                left: order,
                right: s.order(),
            });
        }
    }
    Ok(order)
}

/// `a_N y^(N) + ... + a_1 y' + a_0 y + c_0 = 0` with coefficients given as
/// plain Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOde<T> {
    a: Vec<TaylorSeries<T>>,
    c0: TaylorSeries<T>,
}

impl<T: Scalar> LinearOde<T> {
    /// `a` holds `a_0..=a_N`; its length fixes the order `N >= 1`.
    pub fn new(a: Vec<TaylorSeries<T>>, c0: TaylorSeries<T>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidArgument(
                "a linear ODE needs order N >= 1".into(),
            ));
        }
        let mut all: Vec<&TaylorSeries<T>> = a.iter().collect();
        all.push(&c0);
        check_shared_order(&all)?;
        if a.last().is_some_and(|s| s.is_zero()) {
            return Err(Error::InvalidArgument(
                "leading coefficient a_N vanishes identically".into(),
            ));
        }
        Ok(Self { a, c0 })
    }

    /// Homogeneous equation from polynomial coefficients carried at `order`.
    pub fn homogeneous_polynomial(a: &[Vec<T>], order: usize) -> Result<Self> {
        let a = a
            .iter()
            .map(|p| TaylorSeries::from_polynomial(p, order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, TaylorSeries::zero(order))
    }

    /// Equation from polynomial coefficients and polynomial inhomogeneity.
    pub fn polynomial(a: &[Vec<T>], c0: &[T], order: usize) -> Result<Self> {
        let a = a
            .iter()
            .map(|p| TaylorSeries::from_polynomial(p, order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, TaylorSeries::from_polynomial(c0, order)?)
    }

    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficients(&self) -> &[TaylorSeries<T>] {
        &self.a
    }

    pub fn inhomogeneity(&self) -> &TaylorSeries<T> {
        &self.c0
    }

    pub fn truncation(&self) -> usize {
        self.c0.order()
    }

    /// Re-carry the data at a larger truncation, reading the stored
    /// coefficients as exact polynomials.
    pub fn extend_polynomial(&self, order: usize) -> Result<Self> {
        let lift = |s: &TaylorSeries<T>| TaylorSeries::from_polynomial(s.coeffs(), order);
        Self::new(
            self.a.iter().map(lift).collect::<Result<_>>()?,
            lift(&self.c0)?,
        )
    }

    /// Fails unless every coefficient is a constant and `c_0 = 0`.
    pub fn constant_coefficients(&self) -> Result<Vec<T>> {
        for (index, s) in self.a.iter().enumerate() {
            if let Some(degree) = s.degree().filter(|&d| d > 0) {
                return Err(Error::NonConstantCoefficients { index, degree });
            }
        }
        if !self.c0.is_zero() {
            return Err(Error::InvalidArgument(
                "equation must be homogeneous".into(),
            ));
        }
        Ok(self.a.iter().map(|s| s.coeffs()[0].clone()).collect())
    }
}

/// `y^(m) = a_N y^N + ... + a_1 y + a_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearOde<T> {
    m: usize,
    a: Vec<TaylorSeries<T>>,
}

impl<T: Scalar> NonlinearOde<T> {
    /// `a` holds `a_0..=a_N`; `N = a.len() - 1 >= 1`.
    pub fn new(m: usize, a: Vec<TaylorSeries<T>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "derivative order m must be >= 1".into(),
            ));
        }
        if a.len() < 2 {
            return Err(Error::InvalidArgument(
                "polynomial degree N must be >= 1".into(),
            ));
        }
        check_shared_order(&a.iter().collect::<Vec<_>>())?;
        Ok(Self { m, a })
    }

    pub fn polynomial(m: usize, a: &[Vec<T>], order: usize) -> Result<Self> {
        let a = a
            .iter()
            .map(|p| TaylorSeries::from_polynomial(p, order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, a)
    }

    pub fn derivative_order(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficients(&self) -> &[TaylorSeries<T>] {
        &self.a
    }

    pub fn truncation(&self) -> usize {
        self.a[0].order()
    }

    pub fn extend_polynomial(&self, order: usize) -> Result<Self> {
        let a = self
            .a
            .iter()
            .map(|s| TaylorSeries::from_polynomial(s.coeffs(), order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.m, a)
    }

    /// The constants `a_0..=a_N`, or an error if any coefficient depends on `x`.
    pub fn constant_coefficients(&self) -> Result<Vec<T>> {
        for (index, s) in self.a.iter().enumerate() {
            if let Some(degree) = s.degree().filter(|&d| d > 0) {
                return Err(Error::NonConstantCoefficients { index, degree });
            }
        }
        Ok(self.a.iter().map(|s| s.coeffs()[0].clone()).collect())
    }
}

fn initial_coefficients<T: Scalar>(init: &[T], expected: usize, order: usize) -> Result<Vec<T>> {
    if init.len() != expected {
        return Err(Error::InitialDataLength {
            expected,
            got: init.len(),
        });
    }
    let mut b = vec![T::zero(); order + 1];
    let mut fact = T::one();
    for (k, y) in init.iter().enumerate() {
        if k > 0 {
            fact = fact * from_usize::<T>(k);
        }
        b[k] = y.clone() / fact.clone();
    }
    Ok(b)
}

/// Power-series solution `b_0..=b_K` at the ordinary point `x = 0`.
///
/// `init` holds `y(0), y'(0), ..., y^(N-1)(0)`. The coefficient of `x^j` in the
/// equation is solved for `b_{j+N}`, for `j = 0..=K-N`.
pub fn solve_linear_series<T: Scalar>(
    ode: &LinearOde<T>,
    init: &[T],
    order: usize,
) -> Result<TaylorSeries<T>> {
    let big_n = ode.order();
    if order < big_n {
        return Err(Error::TruncationTooSmall {
            have: order,
            need: big_n,
        });
    }
    let lead = ode.a[big_n].coeffs()[0].clone();
    if lead.is_zero() {
        return Err(Error::SingularPoint);
    }
    let steps = order - big_n;
    if ode.truncation() < steps {
        return Err(Error::TruncationTooSmall {
            have: ode.truncation(),
            need: steps,
        });
    }
    let mut b = initial_coefficients(init, big_n, order)?;
    let deriv_factor =
        |t: usize, i: usize| T::from_bigint(&falling_factorial((t + i) as u64, i as u64));
    for j in 0..=steps {
        let mut rest = ode.c0.coeffs()[j].clone();
        for (i, ai) in ode.a.iter().enumerate() {
            for k in 0..=j {
                if i == big_n && k == 0 {
                    continue;
                }
                let aik = &ai.coeffs()[k];
                if aik.is_zero() {
                    continue;
                }
                let t = j - k;
                rest = rest + aik.clone() * deriv_factor(t, i) * b[t + i].clone();
            }
        }
        b[j + big_n] = -rest / (lead.clone() * deriv_factor(j, big_n));
    }
    Ok(TaylorSeries::new(b))
}

/// Power-series solution of `y^(m) = sum_r a_r(x) y^r` at `x = 0`.
///
/// `init` holds `y(0)..=y^(m-1)(0)`. Powers `y^r` are grown column by column
/// as soon as the corresponding `b_t` is known.
pub fn solve_nonlinear_series<T: Scalar>(
    ode: &NonlinearOde<T>,
    init: &[T],
    order: usize,
) -> Result<TaylorSeries<T>> {
    let m = ode.m;
    if order < m {
        return Err(Error::TruncationTooSmall {
            have: order,
            need: m,
        });
    }
    let steps = order - m;
    if ode.truncation() < steps {
        return Err(Error::TruncationTooSmall {
            have: ode.truncation(),
            need: steps,
        });
    }
    let mut b = initial_coefficients(init, m, order)?;
    let degree = ode.degree();
    // powers[r][t] = coefficient t of y^r
    let mut powers: Vec<Vec<T>> = vec![Vec::with_capacity(steps + 1); degree + 1];
    for j in 0..=steps {
        powers[0].push(if j == 0 { T::one() } else { T::zero() });
        for r in 1..=degree {
            let col = (0..=j).fold(T::zero(), |acc, i| {
                acc + b[i].clone() * powers[r - 1][j - i].clone()
            });
            powers[r].push(col);
        }
        let rhs = ode.a.iter().enumerate().fold(T::zero(), |acc, (r, ar)| {
            (0..=j).fold(acc, |acc, s| {
                acc + ar.coeffs()[s].clone() * powers[r][j - s].clone()
            })
        });
        b[j + m] = rhs / T::from_bigint(&falling_factorial((j + m) as u64, m as u64));
    }
    Ok(TaylorSeries::new(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rfact;
    use crate::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }
    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }
    fn series(v: &[Rational]) -> TaylorSeries<Rational> {
        TaylorSeries::new(v.to_vec())
    }
    fn exp_prefix(order: usize) -> TaylorSeries<Rational> {
        TaylorSeries::new((0..=order).map(|k| rfact(k as i64)).collect())
    }
    fn exp_neg_prefix(order: usize) -> TaylorSeries<Rational> {
        TaylorSeries::new(
            (0..=order)
                .map(|k| {
                    if k % 2 == 0 {
                        rfact(k as i64)
                    } else {
                        -rfact::<Rational>(k as i64)
                    }
                })
                .collect(),
        )
    }

    // Back-substitution oracle: the series of sum_i a_i y^(i) + c_0, built with
    // derivative + mul only.
    fn linear_lhs(ode: &LinearOde<Rational>, y: &TaylorSeries<Rational>) -> Vec<Rational> {
        let n = ode.order();
        let keep = y.order() - n;
        let mut acc = ode.inhomogeneity().truncate(keep).unwrap();
        let mut d = y.clone();
        for (i, ai) in ode.coefficients().iter().enumerate() {
            if i > 0 {
                d = d.derivative().unwrap();
            }
            let term = ai
                .truncate(keep)
                .unwrap()
                .mul(&d.truncate(keep).unwrap())
                .unwrap();
            acc = acc.add(&term).unwrap();
        }
        acc.into_coeffs()
    }

    fn nonlinear_lhs(ode: &NonlinearOde<Rational>, y: &TaylorSeries<Rational>) -> Vec<Rational> {
        let keep = y.order() - ode.derivative_order();
        let mut d = y.clone();
        for _ in 0..ode.derivative_order() {
            d = d.derivative().unwrap();
        }
        let yk = y.truncate(keep).unwrap();
        let mut acc = d;
        for (r, ar) in ode.coefficients().iter().enumerate() {
            acc = acc
                .sub(&ar.truncate(keep).unwrap().mul(&yk.pow(r)).unwrap())
                .unwrap();
        }
        acc.into_coeffs()
    }

    #[test]
    fn cauchy_product_examples() {
        let f = series(&[q(1), q(1), q(0)]);
        let g = series(&[q(1), q(-1), q(0)]);
        assert_eq!(f.mul(&g).unwrap().coeffs(), &[q(1), q(0), q(-1)]);

        let one = exp_prefix(4).mul(&exp_neg_prefix(4)).unwrap();
        assert_eq!(one, TaylorSeries::one(4));

        let f = series(&[qq(2, 3), q(-5), q(7)]);
        assert_eq!(f.mul(&TaylorSeries::one(2)).unwrap(), f);
    }

    #[test]
    fn mismatched_orders_fail() {
        let err = TaylorSeries::<Rational>::one(2)
            .mul(&TaylorSeries::one(3))
            .unwrap_err();
        assert_eq!(err, Error::TruncationMismatch { left: 2, right: 3 });
    }

    #[test]
    fn polynomial_must_fit() {
        assert!(TaylorSeries::from_polynomial(&[q(1), q(0), q(3)], 1).is_err());
        let p = TaylorSeries::from_polynomial(&[q(1), q(0), q(3), q(0)], 2).unwrap();
        assert_eq!(p.coeffs(), &[q(1), q(0), q(3)]);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(series(&[q(1), q(1), q(1)]).eval(&q(2)), q(7));
        assert_eq!(exp_prefix(6).eval(&q(1)), qq(1957, 720));
        let f = series(&[qq(3, 7), q(4), q(-9)]);
        assert_eq!(f.eval(&q(0)), qq(3, 7));
    }

    #[test]
    fn exponential_solution() {
        // y' - y = 0
        let ode = LinearOde::homogeneous_polynomial(&[vec![q(-1)], vec![q(1)]], 5).unwrap();
        let y = solve_linear_series(&ode, &[q(1)], 5).unwrap();
        assert_eq!(y, exp_prefix(5));
        for k in 0..5 {
            assert_eq!(q(k as i64 + 1) * y.coeffs()[k + 1].clone(), y.coeffs()[k]);
        }
    }

    #[test]
    fn gaussian_solution() {
        // y' + x y = 0; b_{k+1} = -b_{k-1}/(k+1)
        let ode = LinearOde::homogeneous_polynomial(&[vec![q(0), q(1)], vec![q(1)]], 4).unwrap();
        let y = solve_linear_series(&ode, &[q(1)], 4).unwrap();
        assert_eq!(y.coeffs(), &[q(1), q(0), qq(-1, 2), q(0), qq(1, 8)]);
    }

    #[test]
    fn hypergeometric_111_is_singular_at_origin() {
        // x(1-x) y'' + (1 - 3x) y' - y = 0
        let ode = LinearOde::homogeneous_polynomial(
            &[vec![q(-1)], vec![q(1), q(-3)], vec![q(0), q(1), q(-1)]],
            4,
        )
        .unwrap();
        assert_eq!(
            solve_linear_series(&ode, &[q(1), q(1)], 4).unwrap_err(),
            Error::SingularPoint
        );

        // the same branch 1/(1-x) from the first-order equation (1-x) y' - y = 0
        let ode = LinearOde::homogeneous_polynomial(&[vec![q(-1)], vec![q(1), q(-1)]], 4).unwrap();
        let y = solve_linear_series(&ode, &[q(1)], 4).unwrap();
        assert_eq!(y.coeffs(), vec![q(1); 5]);
    }

    #[test]
    fn linear_solver_errors() {
        let ode =
            LinearOde::homogeneous_polynomial(&[vec![q(1)], vec![q(0)], vec![q(1)]], 6).unwrap();
        assert_eq!(
            solve_linear_series(&ode, &[q(1), q(0)], 1).unwrap_err(),
            Error::TruncationTooSmall { have: 1, need: 2 }
        );
        assert_eq!(
            solve_linear_series(&ode, &[q(1)], 6).unwrap_err(),
            Error::InitialDataLength {
                expected: 2,
                got: 1
            }
        );
        assert_eq!(
            solve_linear_series(&ode, &[q(1), q(0)], 20).unwrap_err(),
            Error::TruncationTooSmall { have: 6, need: 18 }
        );
    }

    #[test]
    fn painleve_prefix() {
        // y'' = 6 y^2 + x
        let ode = NonlinearOde::polynomial(2, &[vec![q(0), q(1)], vec![], vec![q(6)]], 8).unwrap();
        let y = solve_nonlinear_series(&ode, &[q(0), q(0)], 8).unwrap();
        let mut expected = vec![q(0); 9];
        expected[3] = qq(1, 6);
        expected[8] = qq(1, 336);
        assert_eq!(y.coeffs(), expected.as_slice());
    }

    #[test]
    fn riccati_prefixes() {
        // y' = y^2, y(0) = 1
        let ode = NonlinearOde::polynomial(1, &[vec![], vec![], vec![q(1)]], 4).unwrap();
        assert_eq!(
            solve_nonlinear_series(&ode, &[q(1)], 4).unwrap().coeffs(),
            vec![q(1); 5]
        );

        // y' = x y^2, y(0) = -2 gives -2/(1 + x^2)
        let ode = NonlinearOde::polynomial(1, &[vec![], vec![], vec![q(0), q(1)]], 8).unwrap();
        let y = solve_nonlinear_series(&ode, &[q(-2)], 8).unwrap();
        assert_eq!(
            y.coeffs(),
            &[q(-2), q(0), q(2), q(0), q(-2), q(0), q(2), q(0), q(-2)]
        );
        assert_eq!(
            solve_nonlinear_series(&ode, &[q(-2)], 0).unwrap_err(),
            Error::TruncationTooSmall { have: 0, need: 1 }
        );
    }

    #[test]
    fn back_substitution_linear() {
        // (1 + x^2) y'' - x y' + 3 y + (1 - x) = 0
        let ode = LinearOde::polynomial(
            &[vec![q(3)], vec![q(0), q(-1)], vec![q(1), q(0), q(1)]],
            &[q(1), q(-1)],
            12,
        )
        .unwrap();
        let y = solve_linear_series(&ode, &[qq(1, 2), q(-3)], 12).unwrap();
        assert!(linear_lhs(&ode, &y).iter().all(|c| c.is_zero()));
        assert_eq!(y.coeffs()[0], qq(1, 2));
        assert_eq!(y.coeffs()[1], q(-3));
    }

    #[test]
    fn back_substitution_nonlinear() {
        // y''' = (1 + x) y^3 - 2 y + x^2
        let ode = NonlinearOde::polynomial(
            3,
            &[
                vec![q(0), q(0), q(1)],
                vec![q(-2)],
                vec![],
                vec![q(1), q(1)],
            ],
            14,
        )
        .unwrap();
        let y = solve_nonlinear_series(&ode, &[q(1), qq(1, 3), q(-1)], 14).unwrap();
        assert!(nonlinear_lhs(&ode, &y).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn float_solver_tracks_exponential() {
        let ode = LinearOde::<f64>::homogeneous_polynomial(&[vec![-1.0], vec![1.0]], 20).unwrap();
        let y = solve_linear_series(&ode, &[1.0], 20).unwrap();
        assert!((y.eval(&1.0) - std::f64::consts::E).abs() < 1e-12);
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TaylorSeries<Rational>> {
        prop::collection::vec((-20i64..20, 1i64..6), order + 1)
            .prop_map(|v| TaylorSeries::new(v.into_iter().map(|(n, d)| qq(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(f in arb_series(6), g in arb_series(6), h in arb_series(6)) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        }

        #[test]
        fn random_linear_back_substitution(
            coeffs in prop::collection::vec(prop::collection::vec(-4i64..5, 1..4), 3),
            init in prop::collection::vec(-5i64..6, 2),
        ) {
            let mut a: Vec<Vec<Rational>> = coeffs.iter().map(|p| p.iter().map(|&c| q(c)).collect()).collect();
            a[2][0] = q(1);
            let ode = LinearOde::homogeneous_polynomial(&a, 10).unwrap();
            let init: Vec<Rational> = init.into_iter().map(q).collect();
            let y = solve_linear_series(&ode, &init, 10).unwrap();
            prop_assert!(linear_lhs(&ode, &y).iter().all(|c| c.is_zero()));
        }
    }
}
