//! Residuals of the difference equations obtained from linear and nonlinear
//! ODEs, plus the coefficient-space dynamics of constant-coefficient systems.
//!
//! Every residual is an exact evaluation of the left-hand side of the lattice
//! equation at one site `n`. A value of zero for `u = forward_transform(b)`
//! certifies that `b` maps to a lattice solution.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, falling_factorial, inverse_factorials, rfact};
use crate::scalar::{from_usize, pow_i64, pow_usize, Scalar};
use crate::series::{LinearOde, NonlinearOde, TaylorSeries};
use crate::umbral::{delta_window, forward_transform, inverse_transform, LatticeSequence};

/// Image of `x^r y^(s)` at site `n`: `n! h^r/(n-r)! (Delta_h^s u)_(n-r)`, zero for `n < r`.
pub fn monomial_correspondence<T: Scalar>(
    u: &LatticeSequence<T>,
    r: usize,
    s: usize,
    n: usize,
) -> Result<T> {
    if n < r {
        return Ok(T::zero());
    }
    let weight = T::from_bigint(&falling_factorial(n as u64, r as u64)) * pow_usize(u.h(), r);
    Ok(weight * delta_window(u, s, n - r)?)
}

fn check_linear_window<T: Scalar>(
    ode: &LinearOde<T>,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<()> {
    u.require(n + ode.order())?;
    if ode.truncation() < n {
        return Err(Error::TruncationTooSmall {
            have: ode.truncation(),
            need: n,
        });
    }
    Ok(())
}

/// Image of `c_0(x)`: `sum_s gamma_s n! h^s/(n-s)!`.
fn inhomogeneity_image<T: Scalar>(c0: &TaylorSeries<T>, h: &T, n: usize) -> T {
    c0.coeffs()
        .iter()
        .enumerate()
        .take(n + 1)
        .filter(|(_, g)| !g.is_zero())
        .fold(T::zero(), |acc, (s, g)| {
            acc + g.clone()
                * T::from_bigint(&falling_factorial(n as u64, s as u64))
                * pow_usize(h, s)
        })
}

/// Left side of the linear lattice equation at `n`,
/// `sum_i sum_k n! alpha_ik/((n-k)! k!) h^k (Delta_h^i u)_(n-k) + image(c_0)`,
/// with `alpha_ik = k! [x^k] a_i`.
pub fn linear_residual<T: Scalar>(
    ode: &LinearOde<T>,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<T> {
    check_linear_window(ode, u, n)?;
    let n_fact = T::from_bigint(&factorial(n as u64));
    let mut acc = inhomogeneity_image(ode.inhomogeneity(), u.h(), n);
    for (i, ai) in ode.coefficients().iter().enumerate() {
        for (k, gamma) in ai.coeffs().iter().enumerate().take(n + 1) {
            if gamma.is_zero() {
                continue;
            }
            let alpha = gamma.clone() * T::from_bigint(&factorial(k as u64));
            let weight = n_fact.clone()
                * alpha
                * rfact::<T>(n as i64 - k as i64)
                * rfact::<T>(k as i64)
                * pow_usize(u.h(), k);
            acc = acc + weight * delta_window(u, i, n - k)?;
        }
    }
    Ok(acc)
}

/// The same residual expanded into single lattice values,
/// `sum_i sum_k sum_j (-1)^(i-j) C(n,k) C(i,j) alpha_ik h^(k-i) u_(n-k+j) + image(c_0)`.
pub fn linear_residual_expanded<T: Scalar>(
    ode: &LinearOde<T>,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<T> {
    check_linear_window(ode, u, n)?;
    let h = u.h();
    let mut acc = T::zero();
    for (s, g) in ode.inhomogeneity().coeffs().iter().enumerate().take(n + 1) {
        let alpha = g.clone() * T::from_bigint(&factorial(s as u64));
        acc = acc + binomial::<T>(n as i64, s as i64) * alpha * pow_usize(h, s);
    }
    for (i, ai) in ode.coefficients().iter().enumerate() {
        for (k, gamma) in ai.coeffs().iter().enumerate().take(n + 1) {
            let alpha = gamma.clone() * T::from_bigint(&factorial(k as u64));
            let outer = binomial::<T>(n as i64, k as i64) * alpha * pow_i64(h, k as i64 - i as i64);
            for j in 0..=i {
                let mut term =
                    outer.clone() * binomial::<T>(i as i64, j as i64) * u.value(n - k + j)?.clone();
                if (i - j) % 2 == 1 {
                    term = -term;
                }
                acc = acc + term;
            }
        }
    }
    Ok(acc)
}

/// Direct multi-index sum
/// `h^m sum_{j_1..j_r, |j| <= n-m} n! (1-r)^(n-m-|j|)/(n-m-|j|)! prod u_(j_i)/j_i!`,
/// the image of `x^m y^r` at site `n`. `r = 0` gives the image of `x^m`.
fn multi_index_image<T: Scalar>(u: &LatticeSequence<T>, r: usize, m: usize, n: usize) -> Result<T> {
    if n < m {
        return Ok(T::zero());
    }
    let top = n - m;
    u.require(top)?;
    let inv = inverse_factorials::<T>(top);
    let weights: Vec<T> = (0..=top)
        .map(|j| u.values()[j].clone() * inv[j].clone())
        .collect();
    let base = T::one() - from_usize::<T>(r);
    // tail[e] = (1-r)^e/e!
    let tail: Vec<T> = (0..=top)
        .map(|e| pow_usize(&base, e) * inv[e].clone())
        .collect();

    fn walk<T: Scalar>(depth: usize, budget: usize, prod: T, weights: &[T], tail: &[T]) -> T {
        if depth == 0 {
            return prod * tail[budget].clone();
        }
        let mut acc = T::zero();
        for j in 0..=budget {
            if weights[j].is_zero() {
                continue;
            }
            acc = acc
                + walk(
                    depth - 1,
                    budget - j,
                    prod.clone() * weights[j].clone(),
                    weights,
                    tail,
                );
        }
        acc
    }

    let sum = walk(r, top, T::one(), &weights, &tail);
    Ok(sum * T::from_bigint(&factorial(n as u64)) * pow_usize(u.h(), m))
}

/// Image of `y^r` at site `n`.
pub fn power_image<T: Scalar>(u: &LatticeSequence<T>, r: usize, n: usize) -> Result<T> {
    multi_index_image(u, r, 0, n)
}

/// Image of `x^m y^r` at site `n`; zero for `n < m`.
pub fn shifted_power_image<T: Scalar>(
    u: &LatticeSequence<T>,
    r: usize,
    m: usize,
    n: usize,
) -> Result<T> {
    multi_index_image(u, r, m, n)
}

/// Image of `a(x) y^r` at site `n`, `a` given by plain Taylor coefficients.
pub fn coeff_power_image<T: Scalar>(
    u: &LatticeSequence<T>,
    a: &TaylorSeries<T>,
    r: usize,
    n: usize,
) -> Result<T> {
    a.require_order(n)?;
    let mut acc = T::zero();
    for (s, alpha) in a.coeffs().iter().enumerate().take(n + 1) {
        if alpha.is_zero() {
            continue;
        }
        acc = acc + alpha.clone() * shifted_power_image(u, r, s, n)?;
    }
    Ok(acc)
}

/// Image of `y^r` through the series route: inverse transform, Cauchy power,
/// forward transform. Quadratic in `n` instead of `O(n^r)`.
pub fn power_image_via_series<T: Scalar>(u: &LatticeSequence<T>, r: usize, n: usize) -> Result<T> {
    u.require(n)?;
    let window = LatticeSequence::new(u.values()[..=n].to_vec(), u.h().clone())?;
    let b = inverse_transform(&window);
    let image = forward_transform(&b.pow(r), n, u.h())?;
    Ok(image.values()[n].clone())
}

/// Left side of the nonlinear lattice equation at `n`:
/// `sum_i (-1)^(m-i) C(m,i) u_(n+i) - h^m sum_r image(a_r y^r)`.
pub fn nonlinear_residual<T: Scalar>(
    ode: &NonlinearOde<T>,
    u: &LatticeSequence<T>,
    n: usize,
) -> Result<T> {
    let m = ode.derivative_order();
    u.require(n + m)?;
    if ode.truncation() < n {
        return Err(Error::TruncationTooSmall {
            have: ode.truncation(),
            need: n,
        });
    }
    let window = delta_window(u, m, n)? * pow_usize(u.h(), m);
    let mut rhs = T::zero();
    for (r, ar) in ode.coefficients().iter().enumerate() {
        if ar.is_zero() {
            continue;
        }
        rhs = rhs + coeff_power_image(u, ar, r, n)?;
    }
    Ok(window - rhs * pow_usize(u.h(), m))
}

/// Coefficients `zeta_n` of a lattice solution in the basic-polynomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients<T> {
    pub zeta: Vec<T>,
}

/// `zeta_n = sum_{l<=n} sum_{k<=l} (-1)^(n-l) b_k/((n-l)! (l-k)!)` for `n = 0..=u.nmax()`.
pub fn fourier_coefficients<T: Scalar>(
    b: &TaylorSeries<T>,
    u: &LatticeSequence<T>,
) -> Result<FourierCoefficients<T>> {
    let nmax = u.nmax();
    b.require_order(nmax)?;
    let inv = inverse_factorials::<T>(nmax);
    let zeta = (0..=nmax)
        .map(|n| {
            (0..=n).fold(T::zero(), |acc, l| {
                let inner = (0..=l).fold(T::zero(), |a, k| {
                    a + b.coeffs()[k].clone() * inv[l - k].clone()
                });
                let term = inner * inv[n - l].clone();
                if (n - l) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    Ok(FourierCoefficients { zeta })
}

/// `sum_{l_1 + ... + l_(r-1) <= n} zeta_(l_1) ... zeta_(l_(r-1)) zeta_(n - sum l)`, and `delta_(n0)` for `r = 0`.
fn zeta_convolution<T: Scalar>(zeta: &[T], r: usize, n: usize) -> T {
    fn walk<T: Scalar>(depth: usize, budget: usize, prod: T, zeta: &[T]) -> T {
        if depth == 1 {
            return prod * zeta[budget].clone();
        }
        (0..=budget).fold(T::zero(), |acc, l| {
            if zeta[l].is_zero() {
                acc
            } else {
                acc + walk(depth - 1, budget - l, prod.clone() * zeta[l].clone(), zeta)
            }
        })
    }
    match r {
        0 if n == 0 => T::one(),
        0 => T::zero(),
        _ => walk(r, n, T::one(), zeta),
    }
}

/// `(n+m)!/n! zeta_(n+m) - sum_r a_r (zeta^(*r))_n` for constant coefficients `a_r`;
/// the `r = 0` coefficient contributes only at `n = 0`.
pub fn fourier_residual<T: Scalar>(
    ode: &NonlinearOde<T>,
    zeta: &FourierCoefficients<T>,
    n: usize,
) -> Result<T> {
    let a = ode.constant_coefficients()?;
    let m = ode.derivative_order();
    if zeta.zeta.is_empty() || n + m > zeta.zeta.len() - 1 {
        return Err(Error::WindowExceeded {
            need: n + m,
            have: zeta.zeta.len().saturating_sub(1),
        });
    }
    let lhs =
        T::from_bigint(&falling_factorial((n + m) as u64, m as u64)) * zeta.zeta[n + m].clone();
    let rhs = a.iter().enumerate().fold(T::zero(), |acc, (r, ar)| {
        if ar.is_zero() {
            acc
        } else {
            acc + ar.clone() * zeta_convolution(&zeta.zeta, r, n)
        }
    });
    Ok(lhs - rhs)
}

/// Either kind of equation, for code that sweeps residuals generically.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem<T> {
    Linear(LinearOde<T>),
    Nonlinear(NonlinearOde<T>),
}

impl<T: Scalar> Problem<T> {
    /// Number of forward shifts the stencil reaches past `n`.
    pub fn reach(&self) -> usize {
        match self {
            Problem::Linear(ode) => ode.order(),
            Problem::Nonlinear(ode) => ode.derivative_order(),
        }
    }

    pub fn truncation(&self) -> usize {
        match self {
            Problem::Linear(ode) => ode.truncation(),
            Problem::Nonlinear(ode) => ode.truncation(),
        }
    }

    pub fn residual(&self, u: &LatticeSequence<T>, n: usize) -> Result<T> {
        match self {
            Problem::Linear(ode) => linear_residual(ode, u, n),
            Problem::Nonlinear(ode) => nonlinear_residual(ode, u, n),
        }
    }

    /// Residuals for `n = 0..=nmax`.
    pub fn sweep(&self, u: &LatticeSequence<T>, nmax: usize) -> Result<ResidualSweep<T>> {
        ResidualSweep::collect(0..=nmax, |n| self.residual(u, n))
    }

    /// Re-carry polynomial coefficient data at a larger truncation.
    pub fn extend_polynomial(&self, order: usize) -> Result<Self> {
        Ok(match self {
            Problem::Linear(ode) => Problem::Linear(ode.extend_polynomial(order)?),
            Problem::Nonlinear(ode) => Problem::Nonlinear(ode.extend_polynomial(order)?),
        })
    }
}

/// Residual values over a range of sites, in increasing `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSweep<T> {
    pub records: Vec<(usize, T)>,
}

impl<T: Scalar> ResidualSweep<T> {
    pub fn collect(
        sites: impl IntoIterator<Item = usize>,
        mut f: impl FnMut(usize) -> Result<T>,
    ) -> Result<Self> {
        let records = sites
            .into_iter()
            .map(|n| Ok((n, f(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { records })
    }

    pub fn max_abs(&self) -> T {
        self.records
            .iter()
            .map(|(_, r)| r.abs())
            .fold(T::zero(), |m, a| if a > m { a } else { m })
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.records
            .iter()
            .find(|(_, r)| !r.is_zero())
            .map(|(n, _)| *n)
    }

    /// Last site of the leading run of exact zeros.
    pub fn verified_through(&self) -> Option<usize> {
        self.records
            .iter()
            .take_while(|(_, r)| r.is_zero())
            .last()
            .map(|(n, _)| *n)
    }

    pub fn all_zero(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// A linear lattice equation written out as `sum_d P_d(n) u_(n+d) + C(n) = 0`,
/// each `P_d` a polynomial in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearStencil<T> {
    /// `(d, P_d)` in increasing shift, `P_d[e]` multiplying `n^e`.
    pub shifts: Vec<(i64, Vec<T>)>,
    pub constant: Vec<T>,
}

/// Monomial coefficients of `n (n-1) ... (n-k+1)`.
fn falling_polynomial<T: Scalar>(k: usize) -> Vec<T> {
    let mut c = vec![T::one()];
    for j in 0..k {
        let mut next = vec![T::zero(); c.len() + 1];
        for (e, ce) in c.iter().enumerate() {
            next[e + 1] = next[e + 1].clone() + ce.clone();
            next[e] = next[e].clone() - ce.clone() * from_usize::<T>(j);
        }
        c = next;
    }
    c
}

fn add_scaled<T: Scalar>(dst: &mut Vec<T>, src: &[T], scale: &T) {
    if dst.len() < src.len() {
        dst.resize(src.len(), T::zero());
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.clone() + s.clone() * scale.clone();
    }
}

fn trim<T: Scalar>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn eval_poly<T: Scalar>(p: &[T], x: &T) -> T {
    p.iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

impl<T: Scalar> LinearStencil<T> {
    /// Collect the expanded residual by lattice shift, on a mesh of spacing `h`.
    pub fn from_ode(ode: &LinearOde<T>, h: &T) -> Self {
        let reach = ode.order() as i64;
        let lowest = -(ode.truncation() as i64);
        let mut by_shift: Vec<Vec<T>> = vec![Vec::new(); (reach - lowest + 1) as usize];
        for (i, ai) in ode.coefficients().iter().enumerate() {
            for (k, gamma) in ai.coeffs().iter().enumerate() {
                if gamma.is_zero() {
                    continue;
                }
                let fall = falling_polynomial::<T>(k);
                for j in 0..=i {
                    let mut scale = gamma.clone()
                        * binomial::<T>(i as i64, j as i64)
                        * pow_i64(h, k as i64 - i as i64);
                    if (i - j) % 2 == 1 {
                        scale = -scale;
                    }
                    let d = j as i64 - k as i64;
                    add_scaled(&mut by_shift[(d - lowest) as usize], &fall, &scale);
                }
            }
        }
        let mut constant = Vec::new();
        for (s, g) in ode.inhomogeneity().coeffs().iter().enumerate() {
            if !g.is_zero() {
                add_scaled(
                    &mut constant,
                    &falling_polynomial::<T>(s),
                    &(g.clone() * pow_usize(h, s)),
                );
            }
        }
        trim(&mut constant);
        let shifts = by_shift
            .into_iter()
            .enumerate()
            .filter_map(|(idx, mut p)| {
                trim(&mut p);
                (!p.is_empty()).then(|| (idx as i64 + lowest, p))
            })
            .collect();
        Self { shifts, constant }
    }

    /// Coefficient polynomial of `u_(n+d)`, empty when absent.
    pub fn shift(&self, d: i64) -> &[T] {
        self.shifts
            .iter()
            .find(|(s, _)| *s == d)
            .map(|(_, p)| p.as_slice())
            .unwrap_or(&[])
    }

    /// Evaluate at site `n`; terms whose index falls below zero carry a vanishing coefficient.
    pub fn eval(&self, u: &LatticeSequence<T>, n: usize) -> Result<T> {
        let x = from_usize::<T>(n);
        let mut acc = eval_poly(&self.constant, &x);
        for (d, p) in &self.shifts {
            let coeff = eval_poly(p, &x);
            if coeff.is_zero() {
                continue;
            }
            let idx = n as i64 + d;
            if idx < 0 {
                return Err(Error::InvalidArgument(format!(
                    "stencil reaches u_{idx} with nonzero weight"
                )));
            }
            acc = acc + coeff * u.value(idx as usize)?.clone();
        }
        Ok(acc)
    }
}

fn render_poly<T: Scalar>(p: &[T]) -> String {
    let mut out = String::new();
    for (e, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = *c < T::zero();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let unit = mag == T::one();
        match (e, unit) {
            (0, _) => write!(out, "{mag}").unwrap(),
            (1, true) => out.push('n'),
            (1, false) => write!(out, "{mag} n").unwrap(),
            (_, true) => write!(out, "n^{e}").unwrap(),
            (_, false) => write!(out, "{mag} n^{e}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_index(d: i64) -> String {
    match d {
        0 => "u[n]".to_string(),
        d if d > 0 => format!("u[n+{d}]"),
        d => format!("u[n{d}]"),
    }
}

impl<T: Scalar> std::fmt::Display for LinearStencil<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms: Vec<String> = self
            .shifts
            .iter()
            .rev()
            .map(|(d, p)| {
                let body = render_poly(p);
                if body == "1" {
                    render_index(*d)
                } else {
                    format!("({body}) {}", render_index(*d))
                }
            })
            .collect();
        if !self.constant.is_empty() {
            terms.push(format!("({})", render_poly(&self.constant)));
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} = 0", terms.join(" + "))
    }
}

/// Textual form of the nonlinear lattice equation for `ode` on spacing `h`.
pub fn describe_nonlinear<T: Scalar>(ode: &NonlinearOde<T>, h: &T) -> String {
    let m = ode.derivative_order();
    let mut window = Vec::new();
    for i in (0..=m).rev() {
        let c: T = binomial(m as i64, i as i64);
        let sign = if (m - i).is_multiple_of(2) { "+" } else { "-" };
        let idx = if i == 0 {
            "u[n]".to_string()
        } else {
            format!("u[n+{i}]")
        };
        window.push(if c == T::one() {
            format!("{sign} {idx}")
        } else {
            format!("{sign} {c} {idx}")
        });
    }
    let mut out = String::new();
    let window = window.join(" ");
    let window = window.strip_prefix("+ ").unwrap_or(&window);
    write!(out, "{window}").unwrap();
    let hm = pow_usize(h, m);
    for (r, ar) in ode.coefficients().iter().enumerate() {
        for (s, alpha) in ar.coeffs().iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            let scale = alpha.clone() * hm.clone() * pow_usize(h, s);
            let head = if scale == T::one() {
                String::new()
            } else {
                format!("{scale} ")
            };
            let term = match r {
                0 => format!("{head}n!/(n-{s})!"),
                _ => {
                    let js: Vec<String> = (1..=r).map(|i| format!("j{i}")).collect();
                    let prod: Vec<String> = js.iter().map(|j| format!("u[{j}]/{j}!")).collect();
                    format!(
                        "{head}sum_{{{}}} n! ({})^(n-{s}-|j|)/(n-{s}-|j|)! {}",
                        js.join(","),
                        T::one() - from_usize::<T>(r),
                        prod.join(" ")
                    )
                }
            };
            write!(out, " - {term}").unwrap();
        }
    }
    out.push_str(" = 0");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }
    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }
    fn lattice(v: Vec<Rational>) -> LatticeSequence<Rational> {
        LatticeSequence::unit(v).unwrap()
    }
    fn powers_of(base: i64, len: usize) -> LatticeSequence<Rational> {
        lattice((0..len).map(|n| pow_usize(&q(base), n)).collect())
    }
    fn gaussian_ode(order: usize) -> LinearOde<Rational> {
        LinearOde::homogeneous_polynomial(&[vec![q(0), q(1)], vec![q(1)]], order).unwrap()
    }
    fn gaussian_lattice(nmax: usize) -> LatticeSequence<Rational> {
        let mut b = vec![q(0); nmax + 1];
        let mut c = q(1);
        for j in 0..=nmax / 2 {
            b[2 * j] = c.clone();
            c = c * qq(-1, 2) / q(j as i64 + 1);
        }
        forward_transform(&TaylorSeries::new(b), nmax, &q(1)).unwrap()
    }

    #[test]
    fn monomial_correspondence_examples() {
        let u = powers_of(2, 8);
        assert_eq!(monomial_correspondence(&u, 0, 0, 5).unwrap(), q(32));
        assert_eq!(monomial_correspondence(&u, 1, 1, 4).unwrap(), q(32));
        assert_eq!(monomial_correspondence(&u, 2, 0, 1).unwrap(), q(0));
        assert!(monomial_correspondence(&u, 0, 3, 6).is_err());
    }

    #[test]
    fn gaussian_linear_residual() {
        let u = gaussian_lattice(12);
        assert_eq!(&u.values()[..5], &[q(1), q(1), q(0), q(-2), q(-2)]);
        let ode = gaussian_ode(12);
        for n in 0..=11 {
            assert_eq!(linear_residual(&ode, &u, n).unwrap(), q(0));
            assert_eq!(linear_residual_expanded(&ode, &u, n).unwrap(), q(0));
        }
        // hand stencil u_{n+1} - u_n + n u_{n-1} at n = 2
        let v = u.values();
        assert_eq!(v[3].clone() - v[2].clone() + q(2) * v[1].clone(), q(0));
    }

    #[test]
    fn linear_residual_simple_cases() {
        let ode = LinearOde::homogeneous_polynomial(&[vec![q(-1)], vec![q(1)]], 9).unwrap();
        let u = powers_of(2, 10);
        for n in 0..9 {
            assert_eq!(linear_residual(&ode, &u, n).unwrap(), q(0));
        }
        let ode = LinearOde::homogeneous_polynomial(&[vec![q(0)], vec![q(1)]], 9).unwrap();
        let ones = lattice(vec![q(1); 10]);
        for n in 0..9 {
            assert_eq!(linear_residual(&ode, &ones, n).unwrap(), q(0));
        }
        let zeros = lattice(vec![q(0); 10]);
        assert_eq!(
            linear_residual_expanded(&gaussian_ode(9), &zeros, 4).unwrap(),
            q(0)
        );
    }

    #[test]
    fn linear_residual_window_errors() {
        let u = powers_of(2, 6);
        let ode = gaussian_ode(10);
        assert_eq!(
            linear_residual(&ode, &u, 5).unwrap_err(),
            Error::WindowExceeded { need: 6, have: 5 }
        );
        let short = gaussian_ode(2);
        assert_eq!(
            linear_residual(&short, &u, 3).unwrap_err(),
            Error::TruncationTooSmall { have: 2, need: 3 }
        );
    }

    #[test]
    fn inhomogeneous_linear() {
        // y' = 1 + 2x: y = x + x^2
        let ode = LinearOde::polynomial(&[vec![q(0)], vec![q(-1)]], &[q(1), q(2)], 8).unwrap();
        let b = TaylorSeries::from_polynomial(&[q(0), q(1), q(1)], 9).unwrap();
        for h in [q(1), qq(1, 3)] {
            let u = forward_transform(&b, 9, &h).unwrap();
            for n in 0..=8 {
                assert_eq!(linear_residual(&ode, &u, n).unwrap(), q(0));
                assert_eq!(linear_residual_expanded(&ode, &u, n).unwrap(), q(0));
            }
        }
    }

    #[test]
    fn power_image_examples() {
        let u = powers_of(2, 8);
        assert_eq!(power_image(&u, 1, 5).unwrap(), q(32));
        assert_eq!(power_image(&u, 2, 1).unwrap(), q(3));
        assert_eq!(power_image(&u, 2, 3).unwrap(), q(27));
        assert_eq!(power_image(&u, 0, 4).unwrap(), q(1));
        assert_eq!(power_image(&u, 3, 4).unwrap(), q(256));
    }

    #[test]
    fn shifted_power_image_examples() {
        let u = powers_of(2, 8);
        assert_eq!(shifted_power_image(&u, 2, 3, 2).unwrap(), q(0));
        for n in 0..6 {
            assert_eq!(
                shifted_power_image(&u, 2, 0, n).unwrap(),
                power_image(&u, 2, n).unwrap()
            );
        }
        // x e^{2x} -> n 3^{n-1}
        assert_eq!(shifted_power_image(&u, 2, 1, 2).unwrap(), q(6));
        for n in 1..7 {
            assert_eq!(
                shifted_power_image(&u, 2, 1, n).unwrap(),
                q(n as i64) * pow_usize(&q(3), n - 1)
            );
        }
    }

    #[test]
    fn coeff_power_image_examples() {
        let u = lattice(vec![
            qq(3, 2),
            q(-1),
            qq(7, 5),
            q(4),
            q(0),
            qq(-2, 9),
            q(11),
        ]);
        let one = TaylorSeries::one(6);
        let x = TaylorSeries::monomial(1, 6);
        let six = TaylorSeries::from_polynomial(&[q(6)], 6).unwrap();
        for n in 0..=6 {
            assert_eq!(
                coeff_power_image(&u, &one, 2, n).unwrap(),
                power_image(&u, 2, n).unwrap()
            );
            assert_eq!(
                coeff_power_image(&u, &six, 2, n).unwrap(),
                q(6) * power_image(&u, 2, n).unwrap()
            );
            assert_eq!(
                coeff_power_image(&u, &x, 1, n).unwrap(),
                monomial_correspondence(&u, 1, 0, n).unwrap()
            );
        }
        assert_eq!(coeff_power_image(&u, &x, 1, 4).unwrap(), q(4) * q(4));
    }

    #[test]
    fn power_image_routes_agree_with_h() {
        let h = qq(1, 3);
        let b = TaylorSeries::new(vec![
            qq(1, 2),
            q(-2),
            qq(3, 7),
            q(1),
            qq(-5, 4),
            q(2),
            q(0),
            qq(1, 9),
        ]);
        let u = forward_transform(&b, 7, &h).unwrap();
        for r in 0..=3 {
            for n in 0..=7 {
                assert_eq!(
                    power_image(&u, r, n).unwrap(),
                    power_image_via_series(&u, r, n).unwrap()
                );
            }
        }
        let h_image = forward_transform(
            &b.mul(&b)
                .unwrap()
                .mul(&TaylorSeries::monomial(2, 7))
                .unwrap(),
            7,
            &h,
        )
        .unwrap();
        for n in 0..=7 {
            assert_eq!(
                shifted_power_image(&u, 2, 2, n).unwrap(),
                h_image.values()[n]
            );
        }
    }

    #[test]
    fn riccati_geometric_residual() {
        // y' = y^2 with b_k = 1
        let ode = NonlinearOde::polynomial(1, &[vec![], vec![], vec![q(1)]], 10).unwrap();
        let u = forward_transform(&TaylorSeries::new(vec![q(1); 11]), 10, &q(1)).unwrap();
        for n in 0..10 {
            assert_eq!(nonlinear_residual(&ode, &u, n).unwrap(), q(0));
        }
        assert!(nonlinear_residual(&ode, &u, 10).is_err());
    }

    #[test]
    fn painleve_residual_and_hand_map() {
        let ode = NonlinearOde::polynomial(2, &[vec![q(0), q(1)], vec![], vec![q(6)]], 12).unwrap();
        let b = crate::series::solve_nonlinear_series(&ode, &[q(0), q(0)], 12).unwrap();
        let u = forward_transform(&b, 12, &q(1)).unwrap();
        assert_eq!(u.values()[3], q(1));
        assert_eq!(u.values()[4], q(4));
        for n in 0..=10 {
            assert_eq!(nonlinear_residual(&ode, &u, n).unwrap(), q(0));
        }
        // displayed map with h = 1
        let v = u.values();
        for n in 0..=10usize {
            let mut sum = q(0);
            for j1 in 0..=n {
                for j2 in 0..=n - j1 {
                    let e = n - j1 - j2;
                    let sign = if e % 2 == 0 { q(1) } else { q(-1) };
                    sum += sign
                        * rfact::<Rational>(e as i64)
                        * v[j1].clone()
                        * rfact::<Rational>(j1 as i64)
                        * v[j2].clone()
                        * rfact::<Rational>(j2 as i64);
                }
            }
            let fact = Rational::from_bigint(&factorial(n as u64));
            let lhs = v[n + 2].clone() - q(2) * v[n + 1].clone() + v[n].clone()
                - q(6) * fact * sum
                - q(n as i64);
            assert_eq!(lhs, q(0));
        }
    }

    #[test]
    fn scaled_mesh_nonlinear_residual() {
        let ode =
            NonlinearOde::polynomial(2, &[vec![q(0), q(1)], vec![q(-1)], vec![q(6)]], 14).unwrap();
        let b = crate::series::solve_nonlinear_series(&ode, &[qq(1, 4), qq(-1, 2)], 14).unwrap();
        let u = forward_transform(&b, 14, &qq(1, 8)).unwrap();
        for n in 0..=12 {
            assert_eq!(nonlinear_residual(&ode, &u, n).unwrap(), q(0));
        }
    }

    #[test]
    fn fourier_examples() {
        let riccati = NonlinearOde::polynomial(1, &[vec![], vec![], vec![q(1)]], 0).unwrap();
        let ones = FourierCoefficients {
            zeta: vec![q(1); 12],
        };
        for n in 0..11 {
            assert_eq!(fourier_residual(&riccati, &ones, n).unwrap(), q(0));
        }
        let linear = NonlinearOde::polynomial(1, &[vec![], vec![q(1)]], 0).unwrap();
        let exp = FourierCoefficients {
            zeta: (0..12).map(rfact).collect(),
        };
        for n in 0..11 {
            assert_eq!(fourier_residual(&linear, &exp, n).unwrap(), q(0));
        }
        let zero = FourierCoefficients {
            zeta: vec![q(0); 6],
        };
        assert_eq!(fourier_residual(&riccati, &zero, 2).unwrap(), q(0));
        // y' = 3 with y = 3x
        let constant = NonlinearOde::polynomial(1, &[vec![q(3)], vec![q(0)]], 0).unwrap();
        let line = FourierCoefficients {
            zeta: vec![q(0), q(3), q(0), q(0), q(0)],
        };
        for n in 0..4 {
            assert_eq!(fourier_residual(&constant, &line, n).unwrap(), q(0));
        }
        let variable = NonlinearOde::polynomial(1, &[vec![], vec![q(1), q(2)]], 3).unwrap();
        assert_eq!(
            fourier_residual(&variable, &ones, 0).unwrap_err(),
            Error::NonConstantCoefficients {
                index: 1,
                degree: 1
            }
        );
    }

    #[test]
    fn fourier_coefficients_telescope() {
        let b = TaylorSeries::new((0..9).map(rfact).collect());
        let u = forward_transform(&b, 8, &q(1)).unwrap();
        assert_eq!(fourier_coefficients(&b, &u).unwrap().zeta, b.coeffs());
        let c = TaylorSeries::from_polynomial(&[qq(-4, 3)], 5).unwrap();
        let u = forward_transform(&c, 5, &q(1)).unwrap();
        assert_eq!(fourier_coefficients(&c, &u).unwrap().zeta, c.coeffs());
    }

    #[test]
    fn stencil_matches_hand_forms() {
        let gauss = LinearStencil::from_ode(&gaussian_ode(6), &q(1));
        assert_eq!(gauss.shift(1), &[q(1)]);
        assert_eq!(gauss.shift(0), &[q(-1)]);
        assert_eq!(gauss.shift(-1), &[q(0), q(1)]);
        assert_eq!(gauss.to_string(), "u[n+1] + (-1) u[n] + (n) u[n-1] = 0");

        // hypergeometric with a = 1/2, b = 1/3, c = 5/4
        let (a, b, c) = (qq(1, 2), qq(1, 3), qq(5, 4));
        let ode = LinearOde::homogeneous_polynomial(
            &[
                vec![-(a.clone() * b.clone())],
                vec![c.clone(), -(a.clone() + b.clone() + q(1))],
                vec![q(0), q(1), q(-1)],
            ],
            6,
        )
        .unwrap();
        let st = LinearStencil::from_ode(&ode, &q(1));
        assert_eq!(st.shift(1), &[c.clone(), q(1)]);
        assert_eq!(
            st.shift(0),
            &[
                -(a.clone() * b.clone() + c.clone()),
                -(a.clone() + b.clone() + q(2)),
                q(-1)
            ]
        );
        assert_eq!(st.shift(-1), &[q(0), a.clone() + b.clone(), q(2)]);
        assert_eq!(st.shift(-2), &[q(0), q(1), q(-1)]);
    }

    #[test]
    fn stencil_evaluation_equals_residual() {
        let ode = LinearOde::polynomial(
            &[
                vec![q(2), q(-1)],
                vec![qq(1, 2), q(0), q(3)],
                vec![q(1), q(1)],
            ],
            &[q(0), q(5)],
            10,
        )
        .unwrap();
        for h in [q(1), qq(2, 5)] {
            let st = LinearStencil::from_ode(&ode, &h);
            let u =
                LatticeSequence::new((0..13).map(|n| qq(n * n - 3, n + 2)).collect(), h.clone())
                    .unwrap();
            for n in 0..=10 {
                assert_eq!(
                    st.eval(&u, n).unwrap(),
                    linear_residual(&ode, &u, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn sweep_bookkeeping() {
        let sweep = ResidualSweep {
            records: vec![(0, q(0)), (1, q(0)), (2, qq(-3, 2)), (3, q(0)), (4, q(1))],
        };
        assert_eq!(sweep.first_failure(), Some(2));
        assert_eq!(sweep.verified_through(), Some(1));
        assert_eq!(sweep.max_abs(), qq(3, 2));
        assert!(!sweep.all_zero());
    }

    #[test]
    fn nonlinear_description() {
        let ode = NonlinearOde::polynomial(2, &[vec![q(0), q(1)], vec![], vec![q(6)]], 4).unwrap();
        let text = describe_nonlinear(&ode, &q(1));
        assert!(text.starts_with("u[n+2] - 2 u[n+1] + u[n]"), "{text}");
        assert!(text.contains("6 sum_{j1,j2} n! (-1)^(n-0-|j|)"), "{text}");
        assert!(text.contains("n!/(n-1)!"), "{text}");
    }
}
