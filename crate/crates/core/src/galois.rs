//! Star-product Wronskian and the fundamental-system check for
//! constant-coefficient linear equations.

use crate::discretize::linear_residual;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LinearOde, TaylorSeries};
use crate::umbral::{delta_coefficients, forward_transform, star_product};

/// Square matrix of basic-sequence coefficient vectors sharing one truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct StarMatrix<T> {
    rows: Vec<Vec<TaylorSeries<T>>>,
}

impl<T: Scalar> StarMatrix<T> {
    pub fn new(rows: Vec<Vec<TaylorSeries<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let order = rows[0].first().map(|s| s.order()).unwrap_or(0);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::InvalidArgument("matrix must be square".into()));
            }
            for s in row {
                if s.order() != order {
                    return Err(Error::TruncationMismatch {
                        left: order,
                        right: s.order(),
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &TaylorSeries<T> {
        &self.rows[i][j]
    }

    /// Leibniz expansion with the star product as multiplication.
    pub fn determinant(&self) -> Result<TaylorSeries<T>> {
        let dim = self.dim();
        let order = self.rows[0][0].order();
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut acc = TaylorSeries::zero(order);
        permutations(&mut perm, 0, true, &mut |p, even| {
            let mut term = TaylorSeries::one(order);
            for (i, &j) in p.iter().enumerate() {
                term = star_product(&term, &self.rows[i][j])?;
            }
            acc = if even {
                acc.add(&term)?
            } else {
                acc.sub(&term)?
            };
            Ok(())
        })?;
        Ok(acc)
    }
}

// Every permutation of perm[start..] with its parity, by successive transpositions.
fn permutations(
    perm: &mut Vec<usize>,
    start: usize,
    even: bool,
    visit: &mut dyn FnMut(&[usize], bool) -> Result<()>,
) -> Result<()> {
    if start == perm.len() {
        return visit(perm, even);
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        permutations(perm, start + 1, even ^ (i != start), visit)?;
        perm.swap(start, i);
    }
    Ok(())
}

/// Determinant of the matrix whose row `i` holds `Delta^i` of each solution.
///
/// Each application of `Delta` drops one coefficient, so all entries are
/// carried at order `K - (N-1)`.
pub fn star_wronskian<T: Scalar>(solutions: &[TaylorSeries<T>]) -> Result<TaylorSeries<T>> {
    let dim = solutions.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("need at least one solution".into()));
    }
    let order = solutions[0].order();
    for s in solutions {
        if s.order() != order {
            return Err(Error::TruncationMismatch {
                left: order,
                right: s.order(),
            });
        }
    }
    if order + 1 < dim {
        return Err(Error::TruncationTooSmall {
            have: order,
            need: dim - 1,
        });
    }
    let keep = order + 1 - dim;
    let mut rows = Vec::with_capacity(dim);
    let mut current: Vec<TaylorSeries<T>> = solutions.to_vec();
    for i in 0..dim {
        if i > 0 {
            current = current
                .iter()
                .map(delta_coefficients)
                .collect::<Result<_>>()?;
        }
        rows.push(
            current
                .iter()
                .map(|s| s.truncate(keep))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    StarMatrix::new(rows)?.determinant()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalVerdict<T> {
    pub fundamental: bool,
    /// Constant coefficient of the Wronskian; the set is fundamental iff it is nonzero.
    pub witness: T,
    pub wronskian: TaylorSeries<T>,
}

/// Whether the lattice images of `solutions` form a fundamental system of the
/// discretized constant-coefficient equation.
///
/// Each candidate must first pass the residual certificate on `n = 0..=nmax`;
/// its series therefore needs order at least `nmax + N`.
pub fn is_fundamental_system<T: Scalar>(
    ode: &LinearOde<T>,
    solutions: &[TaylorSeries<T>],
    nmax: usize,
) -> Result<FundamentalVerdict<T>> {
    ode.constant_coefficients()?;
    let big_n = ode.order();
    if solutions.len() != big_n {
        return Err(Error::InvalidArgument(format!(
            "an order-{big_n} equation needs {big_n} candidate solutions, got {}",
            solutions.len()
        )));
    }
    let ode = ode.extend_polynomial(nmax.max(ode.truncation()))?;
    for (index, s) in solutions.iter().enumerate() {
        let u = forward_transform(s, nmax + big_n, &T::one())?;
        for n in 0..=nmax {
            if !linear_residual(&ode, &u, n)?.is_zero() {
                return Err(Error::CertificateFailed { index, n });
            }
        }
    }
    let wronskian = star_wronskian(solutions)?;
    let witness = wronskian.coeffs()[0].clone();
    Ok(FundamentalVerdict {
        fundamental: !witness.is_zero(),
        witness,
        wronskian,
    })
}
