//! Scalar special-function kernels: Pochhammer symbols, mu-numbers,
//! terminating hypergeometric sums, monic Krawtchouk and complementary
//! Bannai-Ito polynomials, and Heun power-series coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).map(|i| a + i as f64).product()
}

pub fn factorial(n: usize) -> f64 {
    pochhammer(1.0, n)
}

/// `[n]_mu = n + mu (1 - (-1)^n)`
pub fn mu_number(n: usize, mu: f64) -> f64 {
    if n.is_multiple_of(2) {
        n as f64
    } else {
        n as f64 + 2.0 * mu
    }
}

#[inline]
pub(crate) fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn near_zero(x: f64, scale: f64) -> bool {
    x.abs() <= 1e-12 * scale.max(1.0)
}

fn nonpositive_integer(a: f64) -> Option<usize> {
    (a <= 0.0 && a.fract() == 0.0).then(|| (-a) as usize)
}

/// Terminating `pFq(num; den; z)`, summed directly.
///
/// The series stops at the smallest `M` such that some numerator parameter is
/// `-M`. A denominator parameter that reaches zero before that point is a
/// singular-parameter error.
pub fn hyp_terminating(num: &[f64], den: &[f64], z: f64) -> Result<f64> {
    let stop = num
        .iter()
        .filter_map(|&a| nonpositive_integer(a))
        .min()
        .ok_or_else(|| {
            Sd2Error::InvalidParams("no non-positive integer numerator parameter".into())
        })?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..stop {
        let jf = j as f64;
        let mut ratio = z / (jf + 1.0);
        for &a in num {
            ratio *= a + jf;
        }
        for &b in den {
            let d = b + jf;
            if near_zero(d, b.abs()) {
                return Err(Sd2Error::SingularParameter {
                    what: "hypergeometric denominator",
                    index: j,
                });
            }
            ratio /= d;
        }
        term *= ratio;
        sum += term;
    }
    Ok(sum)
}

/// Monic Krawtchouk polynomial at `p = 1/2`:
/// `K_{n+1} = (x - N/2) K_n - n (N - n + 1) K_{n-1} / 4`.
pub fn krawtchouk_monic(n: usize, x: f64, level: usize) -> Result<f64> {
    if n > level {
        return Err(Sd2Error::OutOfRange(format!(
            "Krawtchouk degree {n} exceeds N = {level}"
        )));
    }
    let half = level as f64 / 2.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..n {
        let jf = j as f64;
        let next = (x - half) * cur - 0.25 * jf * (level as f64 - jf + 1.0) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Parameters `(rho1, rho2, r1, r2)` of the complementary Bannai-Ito family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CbiParams {
    pub rho1: f64,
    pub rho2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl CbiParams {
    pub fn new(rho1: f64, rho2: f64, r1: f64, r2: f64) -> Self {
        Self { rho1, rho2, r1, r2 }
    }

    pub fn g(&self) -> f64 {
        self.rho1 + self.rho2 - self.r1 - self.r2
    }
}

fn checked_div(num: f64, den: f64, scale: f64, what: &'static str, index: usize) -> Result<f64> {
    if near_zero(den, scale) {
        return Err(Sd2Error::SingularParameter { what, index });
    }
    Ok(num / den)
}

/// Recurrence coefficient `tau_n`, split by the parity of `n`.
pub fn cbi_recurrence_coeff(n: usize, p: &CbiParams) -> Result<f64> {
    let g = p.g();
    let scale = 1.0 + g.abs();
    if n == 0 {
        return Ok(0.0);
    }
    if n.is_multiple_of(2) {
        let m = (n / 2) as f64;
        let num = -m
            * (m + p.rho1 - p.r1 + 0.5)
            * (m + p.rho1 - p.r2 + 0.5)
            * (m - p.r1 - p.r2);
        let den = (2.0 * m + g) * (2.0 * m + g + 1.0);
        checked_div(num, den, scale, "CBI recurrence coefficient", n)
    } else {
        let m = ((n - 1) / 2) as f64;
        let num = -(m + g + 1.0)
            * (m + p.rho1 + p.rho2 + 1.0)
            * (m + p.rho2 - p.r1 + 0.5)
            * (m + p.rho2 - p.r2 + 0.5);
        let den = (2.0 * m + g + 1.0) * (2.0 * m + g + 2.0);
        checked_div(num, den, scale, "CBI recurrence coefficient", n)
    }
}

/// Monic CBI polynomial `I_n(x)` from the three-term recurrence
/// `I_{n+1} = (x - (-1)^n rho2) I_n - tau_n I_{n-1}`.
pub fn cbi_monic(n: usize, x: f64, p: &CbiParams) -> Result<f64> {
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..n {
        let tau = if j == 0 { 0.0 } else { cbi_recurrence_coeff(j, p)? };
        let next = (x - sign(j) * p.rho2) * cur - tau * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The same polynomial through its 4F3 representation.
pub fn cbi_hypergeometric(n: usize, x: f64, p: &CbiParams) -> Result<f64> {
    let g = p.g();
    let (rho1, rho2, r1, r2) = (p.rho1, p.rho2, p.r1, p.r2);
    let m = n / 2;
    let mf = m as f64;
    let ratio = |num: f64, den: f64, idx| checked_div(num, den, 1.0 + num.abs(), "CBI normalization", idx);
    if n.is_multiple_of(2) {
        let eta = ratio(
            pochhammer(rho1 + rho2 + 1.0, m)
                * pochhammer(rho2 - r1 + 0.5, m)
                * pochhammer(rho2 - r2 + 0.5, m),
            pochhammer(mf + g + 1.0, m),
            n,
        )?;
        let f = hyp_terminating(
            &[-mf, mf + g + 1.0, rho2 + x, rho2 - x],
            &[rho1 + rho2 + 1.0, rho2 - r1 + 0.5, rho2 - r2 + 0.5],
            1.0,
        )?;
        Ok(eta * f)
    } else {
        let iota = ratio(
            pochhammer(rho1 + rho2 + 2.0, m)
                * pochhammer(rho2 - r1 + 1.5, m)
                * pochhammer(rho2 - r2 + 1.5, m),
            pochhammer(mf + g + 2.0, m),
            n,
        )?;
        let f = hyp_terminating(
            &[-mf, mf + g + 2.0, rho2 + x + 1.0, rho2 - x + 1.0],
            &[rho1 + rho2 + 2.0, rho2 - r1 + 1.5, rho2 - r2 + 1.5],
            1.0,
        )?;
        Ok((x - rho2) * iota * f)
    }
}

/// Heun equation parameters; `epsilon` follows from the Fuchsian constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub a: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl HeunParams {
    pub fn epsilon(&self) -> f64 {
        self.alpha + self.beta + 1.0 - self.gamma - self.delta
    }
}

/// Power-series coefficients `c_0..=c_max_degree` of the local Heun solution
/// regular at zero:
/// `R_n c_{n+1} = (Q_n + q) c_n - P_n c_{n-1}`, with
/// `R_n = a (n+1)(n+gamma)`, `Q_n = n[(n-1+gamma)(1+a) + a delta + epsilon]`,
/// `P_n = (n-1+alpha)(n-1+beta)`.
///
/// When `R_n` vanishes the step is only accepted if the right-hand side
/// vanishes too, in which case `c_{n+1}` is taken as zero.
pub fn heun_series(p: &HeunParams, max_degree: usize) -> Result<Vec<f64>> {
    let eps = p.epsilon();
    let mut c = Vec::with_capacity(max_degree + 1);
    c.push(1.0);
    for n in 0..max_degree {
        let nf = n as f64;
        let r = p.a * (nf + 1.0) * (nf + p.gamma);
        let qn = nf * ((nf - 1.0 + p.gamma) * (1.0 + p.a) + p.a * p.delta + eps);
        let pn = (nf - 1.0 + p.alpha) * (nf - 1.0 + p.beta);
        let cprev = if n == 0 { 0.0 } else { c[n - 1] };
        let lhs = (qn + p.q) * c[n];
        let rhs = pn * cprev;
        let numer = lhs - rhs;
        let rscale = p.a.abs() * (nf + 1.0) * (nf + 1.0 + p.gamma.abs());
        if r.abs() <= 1e-12 * rscale.max(1.0) {
            let scale = lhs.abs() + rhs.abs();
            if numer.abs() <= 1e-9 * scale.max(1e-300) || scale == 0.0 {
                c.push(0.0);
                continue;
            }
            return Err(Sd2Error::SingularParameter {
                what: "Heun recurrence R_n",
                index: n,
            });
        }
        c.push(numer / r);
    }
    Ok(c)
}

/// Evaluate a polynomial given by its coefficients in increasing degree.
pub fn poly_eval(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0.37, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(-3.0, 5), 0.0);
    }

    #[test]
    fn mu_number_examples() {
        assert_eq!(mu_number(4, 0.9), 4.0);
        assert_eq!(mu_number(3, 0.5), 4.0);
        assert_eq!(mu_number(0, 0.9), 0.0);
    }

    #[test]
    fn hypergeometric_examples() {
        assert_eq!(hyp_terminating(&[0.0, 2.5], &[1.5], 0.3).unwrap(), 1.0);
        let (b, c, z) = (2.5, 1.5, 0.3);
        assert!(close(hyp_terminating(&[-1.0, b], &[c], z).unwrap(), 1.0 - b * z / c, 1e-15));
        assert_eq!(hyp_terminating(&[-2.0, 1.0], &[1.0], 1.0).unwrap(), 0.0);
    }

    #[test]
    fn hypergeometric_errors() {
        assert!(matches!(
            hyp_terminating(&[-3.0, 1.0], &[-1.0], 1.0),
            Err(Sd2Error::SingularParameter { index: 1, .. })
        ));
        assert!(hyp_terminating(&[0.5], &[1.0], 1.0).is_err());
        // termination before the bad denominator is fine
        assert!(hyp_terminating(&[-1.0, 1.0], &[-1.0], 1.0).is_ok());
    }

    #[test]
    fn krawtchouk_examples() {
        assert!(close(krawtchouk_monic(1, 1.7, 6).unwrap(), 1.7 - 3.0, 1e-15));
        assert_eq!(krawtchouk_monic(2, 0.0, 4).unwrap(), 3.0);
        assert_eq!(krawtchouk_monic(0, 0.3, 2).unwrap(), 1.0);
        assert!(krawtchouk_monic(5, 0.0, 4).is_err());
    }

    #[test]
    fn cbi_coefficient_examples() {
        let p = CbiParams::new(-0.5, 0.0, 2.5, 0.0);
        assert!(close(cbi_recurrence_coeff(1, &p).unwrap(), -0.5, 1e-15));
        assert_eq!(cbi_recurrence_coeff(0, &p).unwrap(), 0.0);
        assert!(matches!(
            cbi_recurrence_coeff(2, &p),
            Err(Sd2Error::SingularParameter { index: 2, .. })
        ));
    }

    #[test]
    fn cbi_monic_examples() {
        let p = CbiParams::new(-0.5, 0.0, 2.5, 0.0);
        assert_eq!(cbi_monic(0, 0.7, &p).unwrap(), 1.0);
        assert_eq!(cbi_monic(1, 0.7, &p).unwrap(), 0.7);
        assert!(close(cbi_monic(2, 0.7, &p).unwrap(), 0.49 + 0.5, 1e-14));
        assert!(cbi_monic(3, 0.7, &p).is_err());
    }

    #[test]
    fn cbi_forms_agree_at_sample_point() {
        let p = CbiParams::new(0.3, 0.45, -0.2, 0.1);
        for n in 0..8 {
            for &x in &[-1.3, 0.0, 0.4, 2.2] {
                let a = cbi_monic(n, x, &p).unwrap();
                let b = cbi_hypergeometric(n, x, &p).unwrap();
                assert!(close(a, b, 1e-10), "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn heun_examples() {
        let p = HeunParams { a: -1.0, q: 0.8, alpha: -2.0, beta: 1.5, gamma: 0.3, delta: 0.2 };
        assert_eq!(heun_series(&p, 0).unwrap(), vec![1.0]);
        let c = heun_series(&p, 1).unwrap();
        assert!(close(c[1], p.q / (p.a * p.gamma), 1e-15));
    }

    #[test]
    fn heun_truncates_for_sector_parameters() {
        // k = 2, mu = (0.3, 0.7)
        let (k, mx, my) = (2.0, 0.3, 0.7);
        let z = mx + my;
        let p = HeunParams {
            a: -1.0,
            q: 2.0 * k * (my - mx),
            alpha: -2.0 * k,
            beta: z,
            gamma: 1.0 - 2.0 * k - z,
            delta: 2.0 * my,
        };
        let c = heun_series(&p, 10).unwrap();
        assert!(c[4].abs() > 1e-3);
        assert!(c[5..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn heun_singular_step_is_an_error() {
        let p = HeunParams { a: 1.0, q: 1.0, alpha: 0.5, beta: 0.5, gamma: -1.0, delta: 0.0 };
        assert!(matches!(
            heun_series(&p, 4),
            Err(Sd2Error::SingularParameter { index: 1, .. })
        ));
    }

    #[test]
    fn poly_eval_horner() {
        assert_eq!(poly_eval(&[1.0, 2.0, 3.0], 2.0), 17.0);
        assert_eq!(poly_eval(&[], 2.0), 0.0);
    }
}
