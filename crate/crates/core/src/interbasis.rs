//! Transition between the circular basis `B1` and the Cartesian basis.
//!
//! Column `j` of the transition matrix holds the `B1` coordinates of the
//! Cartesian vector `v_j`, generated by Krawtchouk polynomials at `p = 1/2`.

use crate::error::{Result, Sd2Error};
use crate::numerics::{re, DenseMatrix};
use crate::params::OscParams;
use crate::specfun::{factorial, krawtchouk_monic};

/// `P_n(j) = 2^n K_n(j; N) / n!`, the solution of
/// `(2j - N) P_n = (n+1) P_{n+1} + (N-n+1) P_{n-1}` with `P_0 = 1`.
pub fn transition_coeff(n: usize, j: usize, level: usize) -> Result<f64> {
    if n > level || j > level {
        return Err(Sd2Error::OutOfRange(format!(
            "transition coefficient ({n}, {j}) outside 0..={level}"
        )));
    }
    let k = krawtchouk_monic(n, j as f64, level)?;
    Ok(2f64.powi(n as i32) * k / factorial(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub t: DenseMatrix,
    pub column_convention: String,
}

pub const COLUMN_CONVENTION: &str =
    "column j = B1 coordinates of v_j, unit Euclidean norm, first nonzero entry positive";

/// Transition matrix for level `N`; independent of `mu`.
pub fn build_transition(params: &OscParams) -> Result<TransitionMatrix> {
    params.validate()?;
    let level = params.n;
    let d = params.dim();
    let mut t = DenseMatrix::zeros(d, d);
    for j in 0..d {
        let col: Vec<f64> = (0..d)
            .map(|n| transition_coeff(n, j, level))
            .collect::<Result<_>>()?;
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        let lead = col.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
        let s = lead.signum() / norm;
        for (n, x) in col.iter().enumerate() {
            t[(n, j)] = re(x * s);
        }
    }
    Ok(TransitionMatrix {
        t,
        column_convention: COLUMN_CONVENTION.to_string(),
    })
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &DenseMatrix) -> f64 {
    let sv = m.to_nalgebra().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues `j + (xi - N)/2` that the columns carry under `[J3]_B1`.
pub fn column_eigenvalues(params: &OscParams) -> Vec<f64> {
    (0..=params.n)
        .map(|j| j as f64 + (params.xi() - params.n as f64) / 2.0)
        .collect()
}
