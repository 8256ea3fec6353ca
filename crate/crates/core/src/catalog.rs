//! Worked instances: Gaussian, hypergeometric, Jacobi, `y' = x^k y^2` and
//! Painleve I, each certified on construction, plus the continuum-limit study.

use std::collections::BTreeMap;

use crate::discretize::{Problem, ResidualSweep};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, pochhammer, rfact};
use crate::scalar::{from_usize, pow_usize, Scalar};
use crate::series::{solve_nonlinear_series, LinearOde, NonlinearOde, TaylorSeries};
use crate::umbral::{forward_transform, lower_factorial, LatticeSequence};

pub const ENTRY_NAMES: [&str; 5] = [
    "gaussian",
    "hypergeometric",
    "jacobi",
    "riccati_xk",
    "painleve1",
];

/// Default certified range for linear entries.
pub const LINEAR_CERTIFY_THROUGH: usize = 50;
/// Default certified range for nonlinear entries, bounded by the `O(n^r)` image sums.
pub const NONLINEAR_CERTIFY_THROUGH: usize = 20;

/// `sum_{k<=n} (a)_k (b)_k/(c)_k C(n,k)`: the lattice image of the `2F1(a,b;c;x)` branch.
pub fn gauss_sum<T: Scalar>(a: &T, b: &T, c: &T, n: usize) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..=n {
        let ck = pochhammer(c, k);
        if ck.is_zero() {
            return Err(Error::PochhammerZero {
                parameter: format!("c = {c}"),
                k,
            });
        }
        acc = acc + pochhammer(a, k) * pochhammer(b, k) / ck * binomial::<T>(n as i64, k as i64);
    }
    Ok(acc)
}

/// Taylor coefficients `(a)_k (b)_k/((c)_k k!)` of `2F1(a,b;c;x)` through `order`.
pub fn hypergeometric_coefficients<T: Scalar>(
    a: &T,
    b: &T,
    c: &T,
    order: usize,
) -> Result<TaylorSeries<T>> {
    let mut out = Vec::with_capacity(order + 1);
    let mut term = T::one();
    out.push(term.clone());
    for k in 0..order {
        let denom = (c.clone() + from_usize::<T>(k)) * from_usize::<T>(k + 1);
        if denom.is_zero() {
            return Err(Error::PochhammerZero {
                parameter: format!("c = {c}"),
                k: k + 1,
            });
        }
        term = term * (a.clone() + from_usize::<T>(k)) * (b.clone() + from_usize::<T>(k)) / denom;
        out.push(term.clone());
    }
    Ok(TaylorSeries::new(out))
}

/// Monomial coefficients of the classical Jacobi polynomial `P_m^(alpha,beta)`,
/// from `(1/m!) sum_k C(m,k) (alpha+k+1)_(m-k) (alpha+beta+m+1)_k ((x-1)/2)^k`.
pub fn jacobi_polynomial<T: Scalar>(m: usize, alpha: &T, beta: &T) -> Vec<T> {
    let mut out = vec![T::zero(); m + 1];
    let two = T::from_i64(2);
    let lift = alpha.clone() + beta.clone() + from_usize::<T>(m + 1);
    for k in 0..=m {
        let weight = binomial::<T>(m as i64, k as i64)
            * pochhammer(&(alpha.clone() + from_usize::<T>(k + 1)), m - k)
            * pochhammer(&lift, k)
            / pow_usize(&two, k);
        for i in 0..=k {
            let mut term = weight.clone() * binomial::<T>(k as i64, i as i64);
            if (k - i) % 2 == 1 {
                term = -term;
            }
            out[i] = out[i].clone() + term;
        }
    }
    let m_fact = T::from_bigint(&factorial(m as u64));
    out.into_iter().map(|c| c / m_fact.clone()).collect()
}

/// Lattice image of `P_m^(alpha,beta)` at site `n` (unit mesh).
pub fn discrete_jacobi<T: Scalar>(m: usize, alpha: &T, beta: &T, n: usize) -> T {
    jacobi_polynomial(m, alpha, beta)
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, c)| {
            acc + c.clone() * lower_factorial(k, n, &T::one())
        })
}

fn at<T: Scalar>(u: &LatticeSequence<T>, idx: i64) -> Result<T> {
    if idx < 0 {
        return Ok(T::zero());
    }
    u.value(idx as usize).cloned()
}

/// `u_(n+1) - u_n + n u_(n-1)`.
pub fn gaussian_map<T: Scalar>(u: &LatticeSequence<T>, n: usize) -> Result<T> {
    let n_i = n as i64;
    Ok(at(u, n_i + 1)? - at(u, n_i)? + from_usize::<T>(n) * at(u, n_i - 1)?)
}

/// `(n+c) u_(n+1) - (n^2 + (a+b+2) n + ab + c) u_n + n (a+b+2n) u_(n-1) - n(n-1) u_(n-2)`.
pub fn hypergeometric_map<T: Scalar>(
    a: &T,
    b: &T,
    c: &T,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<T> {
    let x = from_usize::<T>(n);
    let n_i = n as i64;
    let two = T::from_i64(2);
    let c1 = x.clone() + c.clone();
    let c0 = x.clone() * x.clone()
        + (a.clone() + b.clone() + two.clone()) * x.clone()
        + a.clone() * b.clone()
        + c.clone();
    let cm1 = x.clone() * (a.clone() + b.clone() + two * x.clone());
    let cm2 = x.clone() * (x - T::one());
    Ok(c1 * at(u, n_i + 1)? - c0 * at(u, n_i)? + cm1 * at(u, n_i - 1)? - cm2 * at(u, n_i - 2)?)
}

/// The discrete Jacobi equation
/// `u_(n+2) - (alpha-beta+2) u_(n+1) + (m^2 - n^2 + (m-n)(alpha+beta+1) + alpha-beta+1) u_n
///  + n (alpha+beta+2n) u_(n-1) - n(n-1) u_(n-2)`.
pub fn jacobi_map<T: Scalar>(
    m: usize,
    alpha: &T,
    beta: &T,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<T> {
    let x = from_usize::<T>(n);
    let mm = from_usize::<T>(m);
    let n_i = n as i64;
    let one = T::one();
    let two = T::from_i64(2);
    let diff = alpha.clone() - beta.clone();
    let sum = alpha.clone() + beta.clone();
    let c1 = diff.clone() + two.clone();
    let c0 = mm.clone() * mm.clone() - x.clone() * x.clone()
        + (mm - x.clone()) * (sum.clone() + one.clone())
        + diff
        + one.clone();
    let cm1 = x.clone() * (sum + two * x.clone());
    let cm2 = x.clone() * (x - one);
    Ok(
        at(u, n_i + 2)? - c1 * at(u, n_i + 1)? + c0 * at(u, n_i)? + cm1 * at(u, n_i - 1)?
            - cm2 * at(u, n_i - 2)?,
    )
}

/// `(u_(n+2) - 2u_(n+1) + u_n)/h^2 - 6 sum n! (-1)^(n-|j|)/(n-|j|)! u_j1 u_j2/(j1! j2!) - n h`.
pub fn painleve_map<T: Scalar>(u: &LatticeSequence<T>, n: usize) -> Result<T> {
    let h = u.h().clone();
    let window = (at(u, n as i64 + 2)? - T::from_i64(2) * at(u, n as i64 + 1)? + at(u, n as i64)?)
        / (h.clone() * h.clone());
    Ok(window - T::from_i64(6) * quadratic_sum(u, 0, n)? - from_usize::<T>(n) * h)
}

/// `u_(n+1) - u_n - sum n! (-1)^(n-k-|j|)/(n-k-|j|)! u_j1 u_j2/(j1! j2!)` on the unit mesh.
pub fn riccati_map<T: Scalar>(k: usize, u: &LatticeSequence<T>, n: usize) -> Result<T> {
    let lhs = at(u, n as i64 + 1)? - at(u, n as i64)?;
    Ok(lhs - quadratic_sum(u, k, n)?)
}

fn quadratic_sum<T: Scalar>(u: &LatticeSequence<T>, shift: usize, n: usize) -> Result<T> {
    let n_fact = T::from_bigint(&factorial(n as u64));
    let mut sum = T::zero();
    for j1 in 0..=n {
        for j2 in 0..=n {
            let e = n as i64 - shift as i64 - j1 as i64 - j2 as i64;
            if e < 0 {
                continue;
            }
            let mut term = rfact::<T>(e)
                * at(u, j1 as i64)?
                * rfact::<T>(j1 as i64)
                * at(u, j2 as i64)?
                * rfact::<T>(j2 as i64);
            if e % 2 == 1 {
                term = -term;
            }
            sum = sum + term;
        }
    }
    Ok(n_fact * sum)
}

/// A cataloged equation with its analytic solution and residual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry<T> {
    pub name: String,
    pub parameters: BTreeMap<String, T>,
    pub problem: Problem<T>,
    pub solution: TaylorSeries<T>,
    pub lattice: LatticeSequence<T>,
    pub certificate: ResidualSweep<T>,
}

struct Params<'a, T> {
    given: &'a BTreeMap<String, T>,
    allowed: &'static [&'static str],
}

impl<T: Scalar> Params<'_, T> {
    fn check(&self, name: &str) -> Result<()> {
        for key in self.given.keys() {
            if !self.allowed.contains(&key.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown parameter `{key}` for {name}; expected one of {:?}",
                    self.allowed
                )));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str, default: T) -> T {
        self.given.get(key).cloned().unwrap_or(default)
    }

    fn natural(&self, key: &str, default: usize) -> Result<usize> {
        let Some(v) = self.given.get(key) else {
            return Ok(default);
        };
        let as_int = (0..=1000usize).find(|&i| from_usize::<T>(i) == *v);
        as_int.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "parameter {key} = {v} must be a nonnegative integer"
            ))
        })
    }
}

fn resolve<T: Scalar>(
    name: &str,
    params: &BTreeMap<String, T>,
) -> Result<(BTreeMap<String, T>, Problem<T>)> {
    let allowed: &'static [&'static str] = match name {
        "gaussian" => &[],
        "hypergeometric" => &["a", "b", "c"],
        "jacobi" => &["m", "alpha", "beta"],
        "riccati_xk" => &["k", "c1"],
        "painleve1" => &["y0", "y1"],
        other => return Err(Error::UnknownEntry(other.to_string())),
    };
    let p = Params {
        given: params,
        allowed,
    };
    p.check(name)?;
    let one = T::one;
    let q = |n: i64| T::from_i64(n);
    let mut resolved = BTreeMap::new();
    let problem = match name {
        "gaussian" => Problem::Linear(LinearOde::homogeneous_polynomial(
            &[vec![q(0), one()], vec![one()]],
            2,
        )?),
        "hypergeometric" => {
            let (a, b, c) = (p.get("a", one()), p.get("b", one()), p.get("c", one()));
            if (0..=1000).any(|i| c == q(-i)) {
                return Err(Error::InvalidArgument(format!(
                    "hypergeometric c = {c} is a nonpositive integer"
                )));
            }
            let ode = LinearOde::homogeneous_polynomial(
                &[
                    vec![-(a.clone() * b.clone())],
                    vec![c.clone(), -(a.clone() + b.clone() + one())],
                    vec![q(0), one(), -one()],
                ],
                2,
            )?;
            resolved.extend([("a".into(), a), ("b".into(), b), ("c".into(), c)]);
            Problem::Linear(ode)
        }
        "jacobi" => {
            let m = p.natural("m", 1)?;
            let (alpha, beta) = (p.get("alpha", T::zero()), p.get("beta", T::zero()));
            let mm = from_usize::<T>(m);
            let lambda = mm.clone() * (mm.clone() + alpha.clone() + beta.clone() + one());
            let ode = LinearOde::homogeneous_polynomial(
                &[
                    vec![lambda],
                    vec![
                        beta.clone() - alpha.clone(),
                        -(alpha.clone() + beta.clone() + q(2)),
                    ],
                    vec![one(), q(0), -one()],
                ],
                2,
            )?;
            resolved.extend([
                ("m".into(), mm),
                ("alpha".into(), alpha),
                ("beta".into(), beta),
            ]);
            Problem::Linear(ode)
        }
        "riccati_xk" => {
            let k = p.natural("k", 0)?;
            let c1 = p.get("c1", one());
            if c1.is_zero() {
                return Err(Error::InvalidArgument("riccati_xk needs c1 != 0".into()));
            }
            let mut a2 = vec![T::zero(); k + 1];
            a2[k] = one();
            let ode = NonlinearOde::polynomial(1, &[vec![], vec![], a2], k)?;
            resolved.extend([("k".into(), from_usize::<T>(k)), ("c1".into(), c1)]);
            Problem::Nonlinear(ode)
        }
        "painleve1" => {
            let (y0, y1) = (p.get("y0", T::zero()), p.get("y1", T::zero()));
            let ode = NonlinearOde::polynomial(2, &[vec![q(0), one()], vec![], vec![q(6)]], 1)?;
            resolved.extend([("y0".into(), y0), ("y1".into(), y1)]);
            Problem::Nonlinear(ode)
        }
        _ => unreachable!(),
    };
    Ok((resolved, problem))
}

/// Analytic solution of a cataloged entry through `order`.
pub fn entry_solution<T: Scalar>(
    name: &str,
    params: &BTreeMap<String, T>,
    order: usize,
) -> Result<TaylorSeries<T>> {
    let (p, problem) = resolve(name, params)?;
    let q = |n: i64| T::from_i64(n);
    match name {
        "gaussian" => {
            // b_(2j) = (-1/2)^j / j!
            let mut b = vec![T::zero(); order + 1];
            let half = -(T::one() / q(2));
            for j in 0..=order / 2 {
                b[2 * j] = pow_usize(&half, j) * rfact::<T>(j as i64);
            }
            Ok(TaylorSeries::new(b))
        }
        "hypergeometric" => hypergeometric_coefficients(&p["a"], &p["b"], &p["c"], order),
        "jacobi" => {
            let m = (0..=1000usize)
                .find(|&i| from_usize::<T>(i) == p["m"])
                .unwrap_or(0);
            let poly = jacobi_polynomial(m, &p["alpha"], &p["beta"]);
            if poly.len() > order + 1 {
                return Err(Error::TruncationTooSmall {
                    have: order,
                    need: m,
                });
            }
            TaylorSeries::from_polynomial(&poly, order)
        }
        "riccati_xk" => {
            // -(k+1)/(c1 + x^(k+1)) = -(k+1)/c1 sum_j (-1/c1)^j x^(j(k+1))
            let c1 = p["c1"].clone();
            let kp1 = (0..=1000usize)
                .find(|&i| from_usize::<T>(i) == p["k"])
                .unwrap_or(0)
                + 1;
            let lead = -(from_usize::<T>(kp1) / c1.clone());
            let ratio = -(T::one() / c1);
            let mut b = vec![T::zero(); order + 1];
            for j in 0..=order / kp1 {
                b[j * kp1] = lead.clone() * pow_usize(&ratio, j);
            }
            Ok(TaylorSeries::new(b))
        }
        "painleve1" => {
            let Problem::Nonlinear(ode) = problem else {
                unreachable!()
            };
            let ode = ode.extend_polynomial(order.max(1))?;
            solve_nonlinear_series(&ode, &[p["y0"].clone(), p["y1"].clone()], order)
        }
        _ => unreachable!(),
    }
}

/// Build and certify an entry over the default range.
pub fn build_example<T: Scalar>(
    name: &str,
    params: &BTreeMap<String, T>,
) -> Result<CatalogEntry<T>> {
    let (_, problem) = resolve(name, params)?;
    let through = match problem {
        Problem::Linear(_) => LINEAR_CERTIFY_THROUGH,
        Problem::Nonlinear(_) => NONLINEAR_CERTIFY_THROUGH,
    };
    build_example_through(name, params, through)
}

/// Build an entry whose residual is certified for `n = 0..=through`.
///
/// Fails with [`Error::CertificateFailed`] if any residual is nonzero.
pub fn build_example_through<T: Scalar>(
    name: &str,
    params: &BTreeMap<String, T>,
    through: usize,
) -> Result<CatalogEntry<T>> {
    let (parameters, problem) = resolve(name, params)?;
    let nmax = through + problem.reach();
    let problem = problem.extend_polynomial(through.max(problem.truncation()))?;
    let solution = entry_solution(name, params, nmax)?;
    let lattice = forward_transform(&solution, nmax, &T::one())?;
    let certificate = problem.sweep(&lattice, through)?;
    if T::EXACT {
        if let Some(n) = certificate.first_failure() {
            return Err(Error::CertificateFailed { index: 0, n });
        }
    }
    Ok(CatalogEntry {
        name: name.to_string(),
        parameters,
        problem,
        solution,
        lattice,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow<T> {
    pub h: T,
    pub n: usize,
    pub lattice_value: T,
    pub series_value: T,
    /// `|u_n - y(x*)|`, the only floating-point quantity in the study.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub entry: String,
    pub x_star: T,
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Scalar> ConvergenceTable<T> {
    /// `e(h_i)/e(h_(i+1))` for consecutive rows; `None` when the finer error is zero.
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.rows
            .windows(2)
            .map(|w| (w[1].error != 0.0).then(|| w[0].error / w[1].error))
            .collect()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }
}

/// Compare the lattice value at `x* = n h` with the series value at `x*`, for each `h`.
pub fn continuum_limit_study<T: Scalar>(
    entry: &CatalogEntry<T>,
    hs: &[T],
    x_star: &T,
) -> Result<ConvergenceTable<T>> {
    if *x_star < T::zero() {
        return Err(Error::InvalidArgument("x* must be nonnegative".into()));
    }
    let mut sites = Vec::with_capacity(hs.len());
    for h in hs {
        if *h <= T::zero() {
            return Err(Error::NonPositiveSpacing);
        }
        let ratio = x_star.clone() / h.clone();
        let n = (0..=100_000usize)
            .find(|&i| from_usize::<T>(i) == ratio)
            .ok_or_else(|| Error::NonIntegerMeshIndex {
                h: h.to_string(),
                x_star: x_star.to_string(),
            })?;
        sites.push(n);
    }
    let order = sites
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .max(entry.solution.order());
    let b = if order > entry.solution.order() {
        entry_solution(&entry.name, &entry.parameters, order)?
    } else {
        entry.solution.clone()
    };
    let series_value = b.eval(x_star);
    let rows = hs
        .iter()
        .zip(sites)
        .map(|(h, n)| {
            let u = forward_transform(&b, n, h)?;
            let lattice_value = u.values()[n].clone();
            let error = (lattice_value.clone() - series_value.clone())
                .abs()
                .to_f64();
            Ok(ConvergenceRow {
                h: h.clone(),
                n,
                lattice_value,
                series_value: series_value.clone(),
                error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        entry: entry.name.clone(),
        x_star: x_star.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{linear_residual, nonlinear_residual};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }
    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }
    fn params(kv: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn gauss_sum_values() {
        assert_eq!(gauss_sum(&q(1), &q(1), &q(1), 2).unwrap(), q(5));
        assert_eq!(gauss_sum(&q(1), &q(1), &q(1), 4).unwrap(), q(65));
        assert_eq!(gauss_sum(&qq(2, 3), &q(-7), &qq(9, 2), 0).unwrap(), q(1));
        assert_eq!(
            gauss_sum(&q(1), &q(1), &q(-2), 4).unwrap_err(),
            Error::PochhammerZero {
                parameter: "c = -2".into(),
                k: 3
            }
        );
    }

    #[test]
    fn gauss_sum_equals_transform_of_series() {
        for (a, b, c) in [
            (q(1), q(1), q(1)),
            (qq(1, 2), qq(1, 3), qq(5, 4)),
            (q(2), q(3), qq(7, 2)),
        ] {
            let coeffs = hypergeometric_coefficients(&a, &b, &c, 20).unwrap();
            let u = forward_transform(&coeffs, 20, &q(1)).unwrap();
            for n in 0..=20 {
                assert_eq!(gauss_sum(&a, &b, &c, n).unwrap(), u.values()[n]);
            }
        }
    }

    #[test]
    fn hypergeometric_n2_identity() {
        let u = LatticeSequence::unit(
            (0..5)
                .map(|n| gauss_sum(&q(1), &q(1), &q(1), n).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(&u.values()[..4], &[q(1), q(2), q(5), q(16)]);
        assert_eq!(
            q(3) * q(16) - q(14) * q(5) + q(2) * q(6) * q(2) - q(2) * q(1),
            q(0)
        );
        assert_eq!(
            hypergeometric_map(&q(1), &q(1), &q(1), &u, 2).unwrap(),
            q(0)
        );
    }

    #[test]
    fn jacobi_polynomials() {
        assert_eq!(jacobi_polynomial(0, &q(0), &q(0)), vec![q(1)]);
        assert_eq!(jacobi_polynomial(1, &q(0), &q(0)), vec![q(0), q(1)]);
        assert_eq!(
            jacobi_polynomial(2, &q(0), &q(0)),
            vec![qq(-1, 2), q(0), qq(3, 2)]
        );
        assert_eq!(
            jacobi_polynomial(3, &q(0), &q(0)),
            vec![q(0), qq(-3, 2), q(0), qq(5, 2)]
        );
        // P_m(1) = (alpha+1)_m / m!
        for m in 0..6 {
            for (a, b) in [(qq(1, 2), qq(1, 2)), (q(1), qq(5, 3))] {
                let p = jacobi_polynomial(m, &a, &b);
                let at_one = p.iter().fold(q(0), |acc, c| acc + c.clone());
                assert_eq!(
                    at_one,
                    pochhammer(&(a.clone() + q(1)), m) * rfact::<Rational>(m as i64)
                );
            }
        }
    }

    #[test]
    fn discrete_jacobi_values() {
        for n in 0..10 {
            assert_eq!(discrete_jacobi(1, &q(0), &q(0), n), q(n as i64));
            assert_eq!(discrete_jacobi(0, &qq(1, 2), &q(3), n), q(1));
        }
        assert_eq!(discrete_jacobi(2, &q(0), &q(0), 2), qq(5, 2));
    }

    #[test]
    fn jacobi_hand_map() {
        for m in 0..=5 {
            for (a, b) in [(q(0), q(0)), (qq(1, 2), qq(1, 2)), (q(1), qqq())] {
                let u = LatticeSequence::unit(
                    (0..=27).map(|n| discrete_jacobi(m, &a, &b, n)).collect(),
                )
                .unwrap();
                for n in 0..=25 {
                    assert_eq!(
                        jacobi_map(m, &a, &b, &u, n).unwrap(),
                        q(0),
                        "m={m} a={a} b={b} n={n}"
                    );
                }
            }
        }
        fn qqq() -> Rational {
            Rational::new(5.into(), 3.into())
        }
    }

    #[test]
    fn entries_certify() {
        let e = build_example::<Rational>("gaussian", &BTreeMap::new()).unwrap();
        assert_eq!(e.certificate.verified_through(), Some(50));
        for n in 0..=50 {
            assert_eq!(gaussian_map(&e.lattice, n).unwrap(), q(0));
        }

        let e = build_example::<Rational>("painleve1", &BTreeMap::new()).unwrap();
        assert_eq!(e.lattice.values()[3], q(1));
        assert_eq!(e.lattice.values()[4], q(4));
        assert_eq!(e.certificate.verified_through(), Some(20));

        let e = build_example("riccati_xk", &params(&[("k", q(0)), ("c1", q(1))])).unwrap();
        for (k, b) in e.solution.coeffs().iter().enumerate() {
            assert_eq!(*b, if k % 2 == 0 { q(-1) } else { q(1) });
        }

        let e = build_example_through(
            "hypergeometric",
            &params(&[("a", q(2)), ("b", q(3)), ("c", qq(7, 2))]),
            30,
        )
        .unwrap();
        for n in 0..=30 {
            assert_eq!(
                hypergeometric_map(&q(2), &q(3), &qq(7, 2), &e.lattice, n).unwrap(),
                q(0)
            );
        }
    }

    #[test]
    fn riccati_closed_form_matches_solver() {
        for k in 0..=2usize {
            for c1 in [q(1), q(2), qq(-3, 4)] {
                let p = params(&[("k", q(k as i64)), ("c1", c1.clone())]);
                let closed = entry_solution("riccati_xk", &p, 12).unwrap();
                let mut a2 = vec![q(0); k + 1];
                a2[k] = q(1);
                let ode = NonlinearOde::polynomial(1, &[vec![], vec![], a2], 12).unwrap();
                let y0 = -(q(k as i64 + 1) / c1.clone());
                assert_eq!(solve_nonlinear_series(&ode, &[y0], 12).unwrap(), closed);
            }
        }
    }

    #[test]
    fn riccati_hand_map_with_factorial() {
        for k in 0..=2usize {
            let e = build_example_through(
                "riccati_xk",
                &params(&[("k", q(k as i64)), ("c1", q(2))]),
                12,
            )
            .unwrap();
            for n in 0..=12 {
                assert_eq!(riccati_map(k, &e.lattice, n).unwrap(), q(0));
            }
        }
    }

    #[test]
    fn painleve_hand_map_on_scaled_mesh() {
        let e = build_example_through::<Rational>("painleve1", &BTreeMap::new(), 10).unwrap();
        let h = qq(1, 4);
        let u = forward_transform(&e.solution, 12, &h).unwrap();
        let Problem::Nonlinear(ode) = &e.problem else {
            panic!()
        };
        for n in 0..=10 {
            assert_eq!(painleve_map(&u, n).unwrap(), q(0));
            assert_eq!(nonlinear_residual(ode, &u, n).unwrap(), q(0));
        }
    }

    #[test]
    fn invalid_requests() {
        assert_eq!(
            build_example::<Rational>("airy", &BTreeMap::new()).unwrap_err(),
            Error::UnknownEntry("airy".into())
        );
        assert!(build_example("hypergeometric", &params(&[("c", q(-3))])).is_err());
        assert!(build_example("hypergeometric", &params(&[("c", q(0))])).is_err());
        assert!(build_example("jacobi", &params(&[("m", qq(1, 2))])).is_err());
        assert!(build_example("gaussian", &params(&[("a", q(1))])).is_err());
        assert!(build_example("riccati_xk", &params(&[("c1", q(0))])).is_err());
    }

    #[test]
    fn corrupted_lattice_breaks_certificate() {
        let e = build_example_through::<Rational>("gaussian", &BTreeMap::new(), 10).unwrap();
        let Problem::Linear(ode) = &e.problem else {
            panic!()
        };
        let bad = e.lattice.clone().with_value(5, q(7)).unwrap();
        let sweep = e.problem.sweep(&bad, 10).unwrap();
        assert_eq!(sweep.first_failure(), Some(4));
        assert!(linear_residual(ode, &bad, 4).unwrap() != q(0));
    }

    #[test]
    fn continuum_limits() {
        let e = build_example_through::<Rational>("gaussian", &BTreeMap::new(), 10).unwrap();
        let t = continuum_limit_study(&e, &[qq(1, 4), qq(1, 8), qq(1, 16)], &q(1)).unwrap();
        assert!(t.strictly_decreasing());
        assert_eq!(t.rows[2].n, 16);

        let t = continuum_limit_study(&e, &[qq(1, 3)], &q(0)).unwrap();
        assert_eq!(t.rows[0].error, 0.0);

        let p = build_example_through::<Rational>("painleve1", &BTreeMap::new(), 10).unwrap();
        let t = continuum_limit_study(&p, &[qq(1, 8), qq(1, 16)], &qq(1, 2)).unwrap();
        assert!(t.strictly_decreasing());
        let r = t.ratios()[0].unwrap();
        assert!((1.6..2.4).contains(&r), "{r}");

        assert!(matches!(
            continuum_limit_study(&e, &[qq(1, 3)], &qq(1, 2)).unwrap_err(),
            Error::NonIntegerMeshIndex { .. }
        ));
    }
}
