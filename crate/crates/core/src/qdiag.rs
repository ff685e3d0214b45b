//! Eigenvectors of the auxiliary operator `Q` and of `J2` in the circular
//! basis `B2`.
//!
//! Each sector `k` is described by two coefficient sequences `a_n`, `b_n`
//! obtained from a forward recurrence (the reference route). Closed forms in
//! terms of para-Krawtchouk / complementary Bannai-Ito polynomials, Heun
//! series, and isotropic hypergeometric formulas are provided as independent
//! routes to the same numbers.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};
use crate::numerics::{c, re, DenseMatrix, C64, ONE, ZERO};
use crate::params::{OscParams, Parity};
use crate::repmat::{b2_index, block_range, build_circular, BasisOrdering, GeneratorSet, Sign};
use crate::specfun::{
    cbi_monic, factorial, heun_series, pochhammer, sign, CbiParams, HeunParams,
};

/// Coefficient sequences `a_n`, `b_n` of sector `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffPair {
    pub k: usize,
    pub parity: Parity,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl CoeffPair {
    pub fn max_abs_diff(&self, other: &CoeffPair) -> f64 {
        let n = self.a.len().min(other.a.len());
        (0..n)
            .map(|i| (self.a[i] - other.a[i]).abs().max((self.b[i] - other.b[i]).abs()))
            .fold(0.0, f64::max)
    }

    /// `max_n |self - reference| / max(1, |reference|)`
    pub fn max_rel_diff(&self, reference: &CoeffPair) -> f64 {
        let n = self.a.len().min(reference.a.len());
        (0..n)
            .map(|i| {
                let da = (self.a[i] - reference.a[i]).abs() / reference.a[i].abs().max(1.0);
                let db = (self.b[i] - reference.b[i]).abs() / reference.b[i].abs().max(1.0);
                da.max(db)
            })
            .fold(0.0, f64::max)
    }
}

fn singular(what: &'static str, index: usize) -> Sd2Error {
    Sd2Error::SingularParameter { what, index }
}

/// Forward solution of the even-sector system for `n = 0..=n_max`.
///
/// `b_n = (k-n) a_n / k` and
/// `a_n = 2k sum_{j<n} {(-1)^{n+j} mu_x + mu_y} b_j / (n (2k - n + zeta))`.
/// Stops early (shorter output) at a vanishing denominator.
pub fn solve_recurrence_even_upto(k: usize, params: &OscParams, n_max: usize) -> CoeffPair {
    let (mx, my, z) = (params.mu_x, params.mu_y, params.zeta());
    let mut a = vec![1.0];
    let mut b = vec![1.0];
    if k > 0 {
        let kf = k as f64;
        for n in 1..=n_max {
            let s: f64 = (0..n).map(|j| (sign(n + j) * mx + my) * b[j]).sum();
            let den = n as f64 * (2.0 * kf - n as f64 + z);
            if den.abs() < 1e-12 {
                break;
            }
            let an = 2.0 * kf * s / den;
            a.push(an);
            b.push((kf - n as f64) * an / kf);
        }
    }
    CoeffPair {
        k,
        parity: Parity::Even,
        a,
        b,
    }
}

/// `a_n, b_n` for `n = 0..=k`, even `N`.
pub fn solve_recurrence_even(k: usize, params: &OscParams) -> Result<CoeffPair> {
    let out = solve_recurrence_even_upto(k, params, k);
    if out.a.len() != k + 1 {
        return Err(singular("even recurrence", out.a.len()));
    }
    Ok(out)
}

/// Forward solution of the odd-sector system for `n = 0..=n_max`; each step
/// solves
/// `(k+mu_y+1/2) a_n - (k-n+mu_y+1/2) b_n = 2 mu_y sum_{j<n} b_j` and
/// `-(k-n+mu_x+1/2) a_n + (k+mu_x+1/2) b_n = 2 mu_x (-1)^n sum_{j<n} (-1)^j a_j`.
/// Stops early at a singular 2x2 step.
pub fn solve_recurrence_odd_upto(k: usize, params: &OscParams, n_max: usize) -> CoeffPair {
    let (mx, my) = (params.mu_x, params.mu_y);
    let kf = k as f64;
    let mut a = vec![1.0];
    let mut b = vec![1.0];
    for n in 1..=n_max {
        let nf = n as f64;
        let s1 = 2.0 * my * b.iter().sum::<f64>();
        let s2 = 2.0 * mx * sign(n) * a.iter().enumerate().map(|(j, x)| sign(j) * x).sum::<f64>();
        let (m11, m12) = (kf + my + 0.5, -(kf - nf + my + 0.5));
        let (m21, m22) = (-(kf - nf + mx + 0.5), kf + mx + 0.5);
        let det = m11 * m22 - m12 * m21;
        if det.abs() < 1e-12 * (m11 * m22).abs().max(1.0) {
            break;
        }
        a.push((s1 * m22 - m12 * s2) / det);
        b.push((m11 * s2 - m21 * s1) / det);
    }
    CoeffPair {
        k,
        parity: Parity::Odd,
        a,
        b,
    }
}

/// `a_n, b_n` for `n = 0..=k`, odd `N`.
pub fn solve_recurrence_odd(k: usize, params: &OscParams) -> Result<CoeffPair> {
    let out = solve_recurrence_odd_upto(k, params, k);
    if out.a.len() != k + 1 {
        return Err(singular("odd recurrence 2x2 step", out.a.len()));
    }
    Ok(out)
}

pub fn solve_recurrence(k: usize, params: &OscParams) -> Result<CoeffPair> {
    match params.parity() {
        Parity::Even => solve_recurrence_even(k, params),
        Parity::Odd => solve_recurrence_odd(k, params),
    }
}

/// Para-Krawtchouk closed form of the even-sector `a_n`, `0 <= n <= 2k`,
/// mirrored through `a_n = a_{2k-n}`.
pub fn closed_form_even(k: usize, params: &OscParams, n: usize) -> Result<f64> {
    if n > 2 * k {
        return Err(Sd2Error::OutOfRange(format!("n = {n} > 2k = {}", 2 * k)));
    }
    let n = if n > k { 2 * k - n } else { n };
    let (z, xi) = (params.zeta(), params.xi());
    let kf = k as f64;
    let cbi = CbiParams::new((z - 2.0) / 2.0, 0.0, (2.0 * kf + z) / 2.0, 0.0);
    let pre = (-4f64).powi(n as i32) / factorial(n) * pochhammer(kf + 1.0 - n as f64, n)
        / pochhammer(2.0 * kf + z - n as f64, n);
    Ok(pre * cbi_monic(n, xi / 2.0, &cbi)?)
}

/// Odd-sector polynomial `P_r(xi)`: CBI closed form for `r <= k`, mirrored
/// by `P_r = P_{2k+1-r}` above, zero for `r < 0` or `r > 2k + 1`.
pub fn para_krawtchouk_odd(k: usize, xi: f64, zeta: f64, r: isize) -> Result<f64> {
    if r < 0 || r as usize > 2 * k + 1 {
        return Ok(0.0);
    }
    let r = r as usize;
    let r = if r > k { 2 * k + 1 - r } else { r };
    let kf = k as f64;
    let cbi = CbiParams::new((zeta - 1.0) / 2.0, 0.0, (2.0 * kf + zeta + 1.0) / 2.0, 0.0);
    let pre = (-4f64).powi(r as i32) / factorial(r) * pochhammer(kf + 1.0 - r as f64, r)
        / pochhammer(2.0 * kf + zeta + 1.0 - r as f64, r);
    Ok(pre * cbi_monic(r, (1.0 + xi) / 2.0, &cbi)?)
}

/// Closed form of the odd-sector `(a_n, b_n)`, `0 <= n <= 2k+1`:
/// `a_n = P_n(xi) + P_{n-1}(xi)`, `b_n = (-1)^n [P_n(-xi) + P_{n-1}(-xi)]`.
pub fn closed_form_odd(k: usize, params: &OscParams, n: usize) -> Result<(f64, f64)> {
    if n > 2 * k + 1 {
        return Err(Sd2Error::OutOfRange(format!("n = {n} > 2k+1 = {}", 2 * k + 1)));
    }
    let (z, xi) = (params.zeta(), params.xi());
    let ni = n as isize;
    let a = para_krawtchouk_odd(k, xi, z, ni)? + para_krawtchouk_odd(k, xi, z, ni - 1)?;
    let b = sign(n) * (para_krawtchouk_odd(k, -xi, z, ni)? + para_krawtchouk_odd(k, -xi, z, ni - 1)?);
    Ok((a, b))
}

/// The `b_n` from the alternative `T_r` formula taken at face value:
/// `T_r = 4^r/r! (k+1-r)_r / (2k+zeta+r-1)_r I_r((1-xi)/2)` for `r <= 2k`,
/// `T_r = T_{2k+1-r}` above, `b_n = T_n + T_{n-1}`. Kept for comparison only;
/// it does not reproduce the recurrence solution.
pub fn literal_t_form_odd_b(k: usize, params: &OscParams, n: usize) -> Result<f64> {
    let (z, xi) = (params.zeta(), params.xi());
    let kf = k as f64;
    let cbi = CbiParams::new((z - 1.0) / 2.0, 0.0, (2.0 * kf + z + 1.0) / 2.0, 0.0);
    let t = |r: isize| -> Result<f64> {
        if r < 0 {
            return Ok(0.0);
        }
        let r = r as usize;
        let r = if r > 2 * k { 2 * k + 1 - r } else { r };
        let pre = 4f64.powi(r as i32) / factorial(r) * pochhammer(kf + 1.0 - r as f64, r)
            / pochhammer(2.0 * kf + z + r as f64 - 1.0, r);
        Ok(pre * cbi_monic(r, (1.0 - xi) / 2.0, &cbi)?)
    };
    Ok(t(n as isize)? + t(n as isize - 1)?)
}

/// Closed forms for `n = 0..=k` as a [`CoeffPair`].
pub fn closed_form_pair(k: usize, params: &OscParams) -> Result<CoeffPair> {
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    match params.parity() {
        Parity::Even => {
            for n in 0..=k {
                let an = closed_form_even(k, params, n)?;
                a.push(an);
                b.push(if k == 0 { 1.0 } else { (k - n) as f64 * an / k as f64 });
            }
        }
        Parity::Odd => {
            for n in 0..=k {
                let (an, bn) = closed_form_odd(k, params, n)?;
                a.push(an);
                b.push(bn);
            }
        }
    }
    Ok(CoeffPair {
        k,
        parity: params.parity(),
        a,
        b,
    })
}

fn checked_ratio(num: f64, den: f64, index: usize) -> Result<f64> {
    if den.abs() < 1e-12 {
        return Err(singular("isotropic Pochhammer denominator", index));
    }
    Ok(num / den)
}

/// Isotropic (`mu_x = mu_y = mu`) closed forms; `n = 0..=2k` for even
/// sectors (upper half by `a_n = a_{2k-n}`) and `n = 0..=k` for odd ones.
pub fn isotropic_coeffs(k: usize, mu: f64, parity: Parity) -> Result<CoeffPair> {
    let kf = k as f64;
    let mut a = vec![0.0; k + 1];
    match parity {
        Parity::Even => {
            a.resize(2 * k + 1, 0.0);
            for n in 0..=k / 2 {
                a[2 * n] = checked_ratio(
                    pochhammer(-kf, n) * pochhammer(mu, n),
                    pochhammer(1.0 - kf - mu, n) * factorial(n),
                    2 * n,
                )?;
            }
            for n in k + 1..=2 * k {
                a[n] = a[2 * k - n];
            }
            let b = if k == 0 {
                vec![1.0]
            } else {
                (0..=2 * k).map(|n| (k as f64 - n as f64) / kf * a[n]).collect()
            };
            Ok(CoeffPair { k, parity, a, b })
        }
        Parity::Odd => {
            for (n, slot) in a.iter_mut().enumerate() {
                let m = n / 2;
                *slot = if n % 2 == 0 {
                    checked_ratio(
                        pochhammer(-kf, m) * pochhammer(mu, m),
                        factorial(m) * pochhammer(-mu - kf, m),
                        n,
                    )?
                } else {
                    let lead = checked_ratio(mu, kf + mu, n)?;
                    lead * checked_ratio(
                        pochhammer(-kf, m) * pochhammer(mu + 1.0, m),
                        factorial(m) * pochhammer(-kf - mu + 1.0, m),
                        n,
                    )?
                };
            }
            let b = a.iter().enumerate().map(|(n, x)| sign(n) * x).collect();
            Ok(CoeffPair { k, parity, a, b })
        }
    }
}

/// Heun parameters generating the even-sector `a_n`.
pub fn heun_params_even(k: usize, params: &OscParams) -> HeunParams {
    let kf = k as f64;
    let z = params.zeta();
    HeunParams {
        a: -1.0,
        q: 2.0 * kf * (params.mu_y - params.mu_x),
        alpha: -2.0 * kf,
        beta: z,
        gamma: 1.0 - 2.0 * kf - z,
        delta: 2.0 * params.mu_y,
    }
}

/// Heun parameters of the odd-sector factor; `swap` exchanges `mu_x` and
/// `mu_y` (used for the `b_n` series).
pub fn heun_params_odd(k: usize, params: &OscParams, swap: bool) -> HeunParams {
    let kf = k as f64;
    let z = params.zeta();
    let (mx, my) = if swap {
        (params.mu_y, params.mu_x)
    } else {
        (params.mu_x, params.mu_y)
    };
    HeunParams {
        a: -1.0,
        q: 2.0 * kf * (my - mx - 1.0),
        alpha: -2.0 * kf,
        beta: z + 1.0,
        gamma: -2.0 * kf - z,
        delta: 2.0 * my,
    }
}

/// Even-sector `a_0..=a_degree` from the Heun series.
pub fn heun_even_coeffs(k: usize, params: &OscParams, degree: usize) -> Result<Vec<f64>> {
    heun_series(&heun_params_even(k, params), degree)
}

/// Odd-sector `(a_n, b_n)`, `n = 0..=degree`, from
/// `A(z) = (1+z) Hl(...; z)` and `B(z) = (1-z) Hl(mu_x <-> mu_y; -z)`.
pub fn heun_odd_coeffs(k: usize, params: &OscParams, degree: usize) -> Result<CoeffPair> {
    let ha = heun_series(&heun_params_odd(k, params, false), degree)?;
    let hb = heun_series(&heun_params_odd(k, params, true), degree)?;
    let conv = |h: &[f64], s: f64| -> Vec<f64> {
        (0..=degree)
            .map(|n| h[n] + if n > 0 { s * h[n - 1] } else { 0.0 })
            .collect()
    };
    let hb_neg: Vec<f64> = hb.iter().enumerate().map(|(n, x)| sign(n) * x).collect();
    Ok(CoeffPair {
        k,
        parity: Parity::Odd,
        a: conv(&ha, 1.0),
        b: conv(&hb_neg, -1.0),
    })
}

/// Constants combining `a_n`, `b_n` into eigenvector components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorConstants {
    pub alpha0: C64,
    pub beta0: C64,
    pub gamma0: C64,
    pub eps0: C64,
}

impl SectorConstants {
    pub fn even(k: usize, params: &OscParams) -> Self {
        let kf = k as f64;
        let z = params.zeta();
        let den = c(kf, kf + z);
        Self {
            alpha0: c(1.0, -1.0),
            beta0: c(1.0, 1.0),
            gamma0: c(0.0, 2.0 * (kf + z)) / den,
            eps0: re(2.0 * kf) / den,
        }
    }

    pub fn odd(k: usize, params: &OscParams) -> Self {
        let kf = k as f64;
        let (mx, my, z, xi) = (params.mu_x, params.mu_y, params.zeta(), params.xi());
        let den = c(2.0 * kf + 1.0 + z, -xi);
        Self {
            alpha0: c(1.0, -1.0),
            beta0: c(1.0, 1.0),
            gamma0: c(1.0, 1.0) * (2.0 * kf + 1.0 + 2.0 * my) / den,
            eps0: c(1.0, -1.0) * (2.0 * kf + 1.0 + 2.0 * mx) / den,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableKind {
    Q,
    J2,
}

/// One eigenvector, labelled by sector and sign, with `B2` components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorVector {
    pub k: usize,
    pub sign: Sign,
    pub eigenvalue: f64,
    pub components: Vec<C64>,
}

/// Eigenvectors of `Q` or `J2`, ordered `(0+, 0-, 1+, 1-, ...)` for odd `N`
/// and `(0-, 1+, 1-, ...)` for even `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigvecTable {
    pub params: OscParams,
    pub kind: TableKind,
    pub vectors: Vec<SectorVector>,
}

impl EigvecTable {
    pub fn get(&self, k: usize, sign: Sign) -> Option<&SectorVector> {
        self.vectors.iter().find(|v| v.k == k && v.sign == sign)
    }

    /// Component on the circular vector `|l, sigma>`; zero for absent labels.
    pub fn component(&self, k: usize, sign: Sign, l: usize, sigma: Sign) -> Option<C64> {
        let v = self.get(k, sign)?;
        Some(b2_index(self.params.n, l, sigma).map_or(ZERO, |i| v.components[i]))
    }

    /// Matrix whose columns are the table vectors.
    pub fn matrix(&self) -> DenseMatrix {
        let d = self.params.dim();
        DenseMatrix::from_fn(d, self.vectors.len(), |i, j| self.vectors[j].components[i])
    }

    /// `max_j ||M w_j - lambda_j w_j|| / ||M||_F`
    pub fn max_relative_residual(&self, m: &DenseMatrix) -> Result<f64> {
        let norm = m.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for v in &self.vectors {
            let r = crate::numerics::eigen_residual(m, re(v.eigenvalue), &v.components)?;
            worst = worst.max(r / norm);
        }
        Ok(worst)
    }
}

fn sector_range(params: &OscParams) -> std::ops::RangeInclusive<usize> {
    match params.parity() {
        Parity::Even => 1..=params.n / 2,
        Parity::Odd => 0..=(params.n - 1) / 2,
    }
}

/// Q eigenvectors from the recurrence solutions.
pub fn assemble_q_eigvecs(params: &OscParams) -> Result<EigvecTable> {
    assemble_q_eigvecs_from(params, |k| solve_recurrence(k, params))
}

/// Q eigenvectors from any source of sector coefficients (`n = 0..=k`).
pub fn assemble_q_eigvecs_from(
    params: &OscParams,
    mut coeffs: impl FnMut(usize) -> Result<CoeffPair>,
) -> Result<EigvecTable> {
    params.validate()?;
    let n = params.n;
    let d = params.dim();
    let z = params.zeta();
    let idx = |l: usize, s: Sign| b2_index(n, l, s);
    let mut vectors = Vec::new();
    if params.parity() == Parity::Even {
        let mut w = vec![ZERO; d];
        w[0] = ONE;
        vectors.push(SectorVector {
            k: 0,
            sign: Sign::Minus,
            eigenvalue: -z - 0.5,
            components: w,
        });
    }
    for k in sector_range(params) {
        let cp = coeffs(k)?;
        if cp.a.len() < k + 1 || cp.b.len() < k + 1 {
            return Err(Sd2Error::OutOfRange(format!("sector {k} needs {} coefficients", k + 1)));
        }
        let sc = match params.parity() {
            Parity::Even => SectorConstants::even(k, params),
            Parity::Odd => SectorConstants::odd(k, params),
        };
        let kf = k as f64;
        // (first pair) = (alpha0, beta0), (second pair) = (gamma0, eps0)
        let mut first = vec![ZERO; d];
        let mut second = vec![ZERO; d];
        for l in 0..=k {
            let (a, b) = (cp.a[k - l], cp.b[k - l]);
            if let Some(i) = idx(l, Sign::Minus) {
                first[i] = (sc.alpha0 * a + sc.beta0 * b) / 2.0;
                second[i] = (sc.gamma0 * a + sc.eps0 * b) / 2.0;
            }
            if let Some(i) = idx(l, Sign::Plus) {
                first[i] = (sc.alpha0 * a - sc.beta0 * b) / 2.0;
                second[i] = (sc.gamma0 * a - sc.eps0 * b) / 2.0;
            }
        }
        match params.parity() {
            Parity::Even => {
                vectors.push(SectorVector {
                    k,
                    sign: Sign::Plus,
                    eigenvalue: 2.0 * kf + z - 0.5,
                    components: first,
                });
                vectors.push(SectorVector {
                    k,
                    sign: Sign::Minus,
                    eigenvalue: -2.0 * kf - z - 0.5,
                    components: second,
                });
            }
            Parity::Odd => {
                vectors.push(SectorVector {
                    k,
                    sign: Sign::Plus,
                    eigenvalue: 2.0 * kf + z + 1.5,
                    components: second,
                });
                vectors.push(SectorVector {
                    k,
                    sign: Sign::Minus,
                    eigenvalue: -(2.0 * kf + z + 0.5),
                    components: first,
                });
            }
        }
    }
    Ok(EigvecTable {
        params: *params,
        kind: TableKind::Q,
        vectors,
    })
}

/// Link between the Q and J2 eigenvectors of sector `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkCoeffs {
    pub k: usize,
    pub parity: Parity,
    /// `omega_k` for even `N`, `upsilon_k` for odd `N`.
    pub c: C64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

pub fn lambda_plus(k: usize, params: &OscParams) -> f64 {
    let kf = k as f64;
    match params.parity() {
        Parity::Even => (kf * (kf + params.zeta())).sqrt(),
        Parity::Odd => ((kf + params.mu_x + 0.5) * (kf + params.mu_y + 0.5)).sqrt(),
    }
}

/// `omega_k = (zeta - 2i sqrt(k(k+zeta))) / (2k + zeta)`
pub fn omega(k: usize, params: &OscParams) -> C64 {
    let kf = k as f64;
    let z = params.zeta();
    c(z, -2.0 * (kf * (kf + z)).sqrt()) / (2.0 * kf + z)
}

/// `upsilon_k = (xi + 2i lambda_k) / (2k + zeta + 1)`
pub fn upsilon(k: usize, params: &OscParams) -> C64 {
    let kf = k as f64;
    let lam = ((kf + params.mu_x + 0.5) * (kf + params.mu_y + 0.5)).sqrt();
    c(params.xi(), 2.0 * lam) / (2.0 * kf + params.zeta() + 1.0)
}

pub fn link_coeffs(k: usize, params: &OscParams) -> LinkCoeffs {
    let lam = lambda_plus(k, params);
    LinkCoeffs {
        k,
        parity: params.parity(),
        c: match params.parity() {
            Parity::Even => omega(k, params),
            Parity::Odd => upsilon(k, params),
        },
        lambda_plus: lam,
        lambda_minus: -lam,
    }
}

/// Map Q eigenvectors to J2 eigenvectors.
///
/// With the unnormalized Q vectors used here, `|k,->_Q` is first rescaled by
/// the unique `s` for which `|k,+>_Q + s |k,->_Q` is a `lambda_k^+`
/// eigenvector (fixed by the diagonal block of `[J2]_B2` on sector `k`). Then
/// `|k,+>_J2 = (|k,+>_Q + |k,->_Q)/sqrt2` and
/// `|k,->_J2 = -(|k,+>_Q - |k,->_Q)/(c_k sqrt2)`.
pub fn q_to_j2(table: &EigvecTable, params: &OscParams) -> Result<EigvecTable> {
    let gens = build_circular(params, BasisOrdering::CircularB2)?;
    q_to_j2_with(table, params, &gens.j2)
}

pub fn q_to_j2_with(table: &EigvecTable, params: &OscParams, j2_b2: &DenseMatrix) -> Result<EigvecTable> {
    if table.kind != TableKind::Q {
        return Err(Sd2Error::InvalidParams("q_to_j2 expects a Q eigenvector table".into()));
    }
    let n = params.n;
    let mut vectors = Vec::new();
    if params.parity() == Parity::Even {
        let v0 = table
            .get(0, Sign::Minus)
            .ok_or_else(|| Sd2Error::OutOfRange("missing |0,->_Q".into()))?;
        vectors.push(SectorVector {
            k: 0,
            sign: Sign::Minus,
            eigenvalue: 0.0,
            components: v0.components.clone(),
        });
    }
    for k in sector_range(params) {
        let qp = &table
            .get(k, Sign::Plus)
            .ok_or_else(|| Sd2Error::OutOfRange(format!("missing |{k},+>_Q")))?
            .components;
        let qm = &table
            .get(k, Sign::Minus)
            .ok_or_else(|| Sd2Error::OutOfRange(format!("missing |{k},->_Q")))?
            .components;
        let link = link_coeffs(k, params);
        let range = block_range(n, k);
        let gamma = j2_b2.block(range.start, range.start, 2, 2);
        let lam = re(link.lambda_plus);
        let rows = [
            [gamma[(0, 0)] - lam, gamma[(0, 1)]],
            [gamma[(1, 0)], gamma[(1, 1)] - lam],
        ];
        let rnorm = |r: &[C64; 2]| r[0].norm_sqr() + r[1].norm_sqr();
        let r = if rnorm(&rows[0]) >= rnorm(&rows[1]) { rows[0] } else { rows[1] };
        let tp = [qp[range.start], qp[range.start + 1]];
        let tm = [qm[range.start], qm[range.start + 1]];
        let dp = r[0] * tp[0] + r[1] * tp[1];
        let dm = r[0] * tm[0] + r[1] * tm[1];
        if dm.norm() < 1e-14 * (dp.norm() + 1.0) {
            return Err(singular("Q to J2 rescaling", k));
        }
        let s = -dp / dm;
        let h = re(FRAC_1_SQRT_2);
        let plus: Vec<C64> = qp.iter().zip(qm).map(|(a, b)| (a + s * b) * h).collect();
        let minus: Vec<C64> = qp
            .iter()
            .zip(qm)
            .map(|(a, b)| -(a - s * b) * h / link.c)
            .collect();
        vectors.push(SectorVector {
            k,
            sign: Sign::Plus,
            eigenvalue: link.lambda_plus,
            components: plus,
        });
        vectors.push(SectorVector {
            k,
            sign: Sign::Minus,
            eigenvalue: link.lambda_minus,
            components: minus,
        });
    }
    Ok(EigvecTable {
        params: *params,
        kind: TableKind::J2,
        vectors,
    })
}

/// J2 eigenvectors in `B2` through the whole chain.
pub fn j2_eigvecs(params: &OscParams) -> Result<EigvecTable> {
    let gens = build_circular(params, BasisOrdering::CircularB2)?;
    q_to_j2_with(&assemble_q_eigvecs(params)?, params, &gens.j2)
}

/// Generators in the J2 eigenbasis obtained as `W^{-1} G W` with `W` the
/// computed J2 eigenvectors; defined on the isotropic line too.
pub fn j2_eigenbasis_by_similarity(params: &OscParams) -> Result<GeneratorSet> {
    let gens = build_circular(params, BasisOrdering::CircularB2)?;
    let table = q_to_j2_with(&assemble_q_eigvecs(params)?, params, &gens.j2)?;
    let w = table.matrix();
    let mut out = gens.transformed(&w, BasisOrdering::J2Eigen)?;
    // J2 is diagonal by construction; drop rounding noise off the diagonal.
    let lam: Vec<C64> = table.vectors.iter().map(|v| re(v.eigenvalue)).collect();
    let exact = DenseMatrix::diag(&lam);
    if (&out.j2 - &exact).max_abs() < 1e-8 * exact.max_abs().max(1.0) {
        out.j2 = exact;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, mx: f64, my: f64) -> OscParams {
        OscParams::new(n, mx, my).unwrap()
    }

    #[test]
    fn even_solver_examples() {
        let q = p(4, 0.3, 0.7);
        let cp = solve_recurrence_even(2, &q).unwrap();
        assert!((cp.a[1] - 0.4).abs() < 1e-15);
        assert!((cp.b[1] - 0.2).abs() < 1e-15);
        let k0 = solve_recurrence_even(0, &q).unwrap();
        assert_eq!((k0.a, k0.b), (vec![1.0], vec![1.0]));
        let iso = solve_recurrence_even_upto(3, &p(6, 0.7, 0.7), 6);
        for n in [1, 3, 5] {
            assert!(iso.a[n].abs() < 1e-14);
        }
    }

    #[test]
    fn odd_solver_examples() {
        let q = p(3, 0.3, 0.7);
        let cp = solve_recurrence_odd(1, &q).unwrap();
        assert!((cp.a[1] - 0.6).abs() < 1e-15);
        assert!((cp.b[1] + 1.0 / 15.0).abs() < 1e-15);
        let k0 = solve_recurrence_odd(0, &q).unwrap();
        assert_eq!((k0.a, k0.b), (vec![1.0], vec![1.0]));
        let iso = solve_recurrence_odd(4, &p(9, 0.3, 0.3)).unwrap();
        for n in 0..=4 {
            assert!((iso.a[n] - sign(n) * iso.b[n]).abs() < 1e-14);
        }
    }

    #[test]
    fn even_closed_form_examples() {
        let q = p(4, 0.3, 0.7);
        let (z, xi) = (q.zeta(), q.xi());
        for k in 1..4usize {
            let kf = k as f64;
            let expect = -2.0 * kf * xi / (2.0 * kf + z - 1.0);
            assert!((closed_form_even(k, &q, 1).unwrap() - expect).abs() < 1e-14);
            assert_eq!(closed_form_even(k, &q, 0).unwrap(), 1.0);
        }
        assert_eq!(closed_form_even(1, &q, 2).unwrap(), 1.0);
        assert!(closed_form_even(1, &q, 3).is_err());
    }

    #[test]
    fn odd_closed_form_examples() {
        let q = p(3, 0.3, 0.7);
        let p1 = para_krawtchouk_odd(1, q.xi(), q.zeta(), 1).unwrap();
        assert!((p1 + 0.4).abs() < 1e-15);
        let (a, b) = closed_form_odd(1, &q, 1).unwrap();
        assert!((a - 0.6).abs() < 1e-15);
        assert!((b + 1.0 / 15.0).abs() < 1e-15);
        assert_eq!(closed_form_odd(1, &q, 0).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn literal_t_form_disagrees_with_solver() {
        let q = p(5, 0.3, 0.7);
        let cp = solve_recurrence_odd(2, &q).unwrap();
        let worst = (0..=2)
            .map(|n| (literal_t_form_odd_b(2, &q, n).unwrap() - cp.b[n]).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    #[test]
    fn isotropic_examples() {
        for mu in [0.3, 1.5] {
            let e = isotropic_coeffs(1, mu, Parity::Even).unwrap();
            assert!((e.a[2] - 1.0).abs() < 1e-14);
            let direct = pochhammer(-1.0, 1) * pochhammer(mu, 1) / pochhammer(-mu, 1);
            assert!((direct - 1.0).abs() < 1e-14);
            let o = isotropic_coeffs(3, mu, Parity::Odd).unwrap();
            assert!((o.a[1] - mu / (3.0 + mu)).abs() < 1e-15);
        }
        let e = isotropic_coeffs(5, 0.0, Parity::Even).unwrap();
        assert!(e.a[2] == 0.0 && e.a[4] == 0.0);
    }

    #[test]
    fn terminating_components() {
        let q = p(6, 0.3, 0.7);
        let t = assemble_q_eigvecs(&q).unwrap();
        for k in 1..=3 {
            assert!((t.component(k, Sign::Plus, k, Sign::Plus).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
            assert!((t.component(k, Sign::Plus, k, Sign::Minus).unwrap() - ONE).norm() < 1e-15);
            let kf = k as f64;
            let z = q.zeta();
            let expect = c(kf + z, kf) / c(kf + z, -kf);
            assert!((t.component(k, Sign::Minus, k, Sign::Plus).unwrap() - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn odd_ground_sector_vector() {
        let q = p(3, 0.3, 0.7);
        let t = assemble_q_eigvecs(&q).unwrap();
        let v = &t.get(0, Sign::Minus).unwrap().components;
        assert!((v[0] - c(0.0, -1.0)).norm() < 1e-15 && (v[1] - ONE).norm() < 1e-15);
    }

    #[test]
    fn residuals_small_on_sample_points() {
        for n in 1..=9 {
            for (mx, my) in [(0.3, 0.7), (-0.4, 1.5), (0.7, 0.7), (0.0, 0.0)] {
                let q = p(n, mx, my);
                let gens = build_circular(&q, BasisOrdering::CircularB2).unwrap();
                let qt = assemble_q_eigvecs(&q).unwrap();
                assert!(qt.max_relative_residual(&gens.q_operator()).unwrap() < 1e-12);
                let jt = q_to_j2_with(&qt, &q, &gens.j2).unwrap();
                assert!(jt.max_relative_residual(&gens.j2).unwrap() < 1e-12, "{q:?}");
            }
        }
    }

    #[test]
    fn unimodular_links() {
        let q = p(4, 0.3, 0.7);
        let w = omega(1, &q);
        assert!((w - c(1.0, -2.0 * 2f64.sqrt()) / 3.0).norm() < 1e-15);
        for k in 0..5 {
            assert!((omega(k.max(1), &q).norm() - 1.0).abs() < 1e-14);
            assert!((upsilon(k, &q).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn u2_point_gives_circular_vectors() {
        let q = p(4, 0.0, 0.0);
        let t = j2_eigvecs(&q).unwrap();
        for v in &t.vectors {
            let nz = v.components.iter().filter(|z| z.norm() > 1e-12).count();
            assert_eq!(nz, 1, "{v:?}");
        }
    }
}
