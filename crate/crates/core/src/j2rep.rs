//! `J3` in the eigenbasis of `J2` for anisotropic parameters.
//!
//! In that basis `J3` is block tridiagonal with 2x2 blocks. Blocks coupling
//! sectors `k-1` and `k` carry a free nonzero scale (the gauge); the upper
//! block is multiplied by it and the lower block divided, so different gauges
//! are related by a block-diagonal similarity.

use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};
use crate::numerics::{dense_eigen, re, DenseMatrix, C64, I};
use crate::params::{OscParams, Parity};
use crate::repmat::{block_range, BasisOrdering, GeneratorSet};
use crate::specfun::pochhammer;

/// Gauge values `g_1..g_m`; `g_k` scales the coupling of sectors `k-1`, `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeSeq {
    values: Vec<f64>,
}

impl GaugeSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Sd2Error::NonFinite("gauge"));
            }
            if *v == 0.0 {
                return Err(Sd2Error::ZeroGauge { index: i + 1 });
            }
        }
        Ok(Self { values })
    }

    pub fn ones(m: usize) -> Self {
        Self { values: vec![1.0; m] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `g_k`, `k >= 1`.
    fn at(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

type Block = [[f64; 2]; 2];

/// The explicit pieces of `J3`: diagonal blocks `C_k`, upper blocks
/// `U_k` (sectors `k-1`, `k`) and lower blocks `D_k` (sectors `k`, `k-1`),
/// all at unit gauge. For even `N` the blocks touching sector 0 are the
/// scalar `c0`, the row `u1` and the column `d0 = w_N (1, 1)^T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockTriple {
    pub parity: Parity,
    pub diag: Vec<Block>,
    pub upper: Vec<Block>,
    pub lower: Vec<Block>,
    pub c0: Option<f64>,
    pub u1: Option<[f64; 2]>,
    pub d0: Option<[f64; 2]>,
    pub w_n: Option<f64>,
}

fn sqrt_checked(x: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Sd2Error::InvalidParams(format!("negative square-root argument {x}")));
    }
    Ok(x.max(0.0).sqrt())
}

fn sym(m: f64, n: f64) -> Block {
    [[m, n], [n, m]]
}

/// Block entries for anisotropic parameters.
pub fn block_triple(params: &OscParams) -> Result<BlockTriple> {
    let (mx, my, z, xi) = (params.mu_x, params.mu_y, params.zeta(), params.xi());
    let nf = params.n as f64;
    let e = nf + z + 1.0;
    let m = params.m();
    let mut t = BlockTriple {
        parity: params.parity(),
        diag: Vec::new(),
        upper: Vec::new(),
        lower: Vec::new(),
        c0: None,
        u1: None,
        d0: None,
        w_n: None,
    };
    match params.parity() {
        Parity::Odd => {
            for k in 0..=m {
                let kf = k as f64;
                let d = 2.0 * (2.0 * kf + z) * (2.0 * kf + z + 2.0);
                t.diag.push(sym(xi * z * e / d, z * e / d));
            }
            for k in 1..=m {
                let kf = k as f64;
                let root = sqrt_checked(pochhammer(kf + mx - 0.5, 2) * pochhammer(kf + my - 0.5, 2))?;
                let mu = (1.0 - 4.0 * (kf + mx) * (kf + my) - 4.0 * root) / (2.0 * xi);
                t.upper.push(sym(mu, 1.0));
            }
            for k in 0..m {
                let kf = k as f64;
                let ml = xi * (kf + 1.0) * (2.0 * kf - nf + 1.0) * (kf + 1.0 + z) * (2.0 * kf + 2.0 * z + nf + 3.0)
                    / (4.0 * (2.0 * kf + z + 2.0) * pochhammer(2.0 * kf + z + 1.0, 3));
                let root = sqrt_checked(pochhammer(kf + mx + 0.5, 2) * pochhammer(kf + my + 0.5, 2))?;
                let ek = (1.0 - 4.0 * (kf + mx + 1.0) * (kf + my + 1.0) + 4.0 * root) / (2.0 * xi);
                t.lower.push(sym(ml, ek * ml));
            }
        }
        Parity::Even => {
            t.c0 = Some(xi * e / (2.0 * (1.0 + z)));
            if m >= 1 {
                let half = nf / 2.0;
                let w = half * (1.0 + 2.0 * mx) * (1.0 + 2.0 * my) * (half + z + 1.0)
                    / (2.0 * (1.0 + z).powi(2) * (2.0 + z));
                t.u1 = Some([1.0, 1.0]);
                t.d0 = Some([w, w]);
                t.w_n = Some(w);
            }
            for k in 1..=m {
                let kf = k as f64;
                let d = 2.0 * (2.0 * kf - 1.0 + z) * (2.0 * kf + 1.0 + z);
                t.diag.push(sym(xi * z * e / d, -xi * e / d));
            }
            for k in 2..=m {
                let kf = k as f64;
                let root = sqrt_checked(pochhammer(kf - 1.0, 2) * pochhammer(kf - 1.0 + z, 2))?;
                let nu = (z + 2.0 * (kf - 1.0) * (kf + z) - 2.0 * root) / z;
                t.upper.push(sym(1.0, nu));
            }
            let half = nf / 2.0;
            for k in 1..m {
                let kf = k as f64;
                let common = (half - kf) * (half + kf + 1.0 + z) * (2.0 * kf + 1.0 + 2.0 * mx) * (2.0 * kf + 1.0 + 2.0 * my)
                    / (4.0 * (2.0 * kf + 1.0 + z) * pochhammer(2.0 * kf + z, 3));
                let root = sqrt_checked(pochhammer(kf, 2) * pochhammer(kf + z, 2))?;
                let ml = common * (z + 2.0 * kf * (kf + z + 1.0) + 2.0 * root);
                t.lower.push(sym(ml, z * common));
            }
        }
    }
    for b in t.diag.iter().chain(&t.upper).chain(&t.lower) {
        if !b.iter().flatten().all(|x| x.is_finite()) {
            return Err(Sd2Error::SingularParameter {
                what: "J3 block entries",
                index: params.n,
            });
        }
    }
    Ok(t)
}

fn put(m: &mut DenseMatrix, n: usize, bi: usize, bj: usize, b: &Block, scale: f64) {
    for (a, i) in block_range(n, bi).enumerate() {
        for (bb, j) in block_range(n, bj).enumerate() {
            m[(i, j)] = re(b[a][bb] * scale);
        }
    }
}

/// `J3` from the blocks with the given gauge.
pub fn assemble_j3(params: &OscParams, t: &BlockTriple, gauge: &GaugeSeq) -> DenseMatrix {
    let n = params.n;
    let m = params.m();
    let mut j3 = DenseMatrix::zeros(params.dim(), params.dim());
    match params.parity() {
        Parity::Odd => {
            for k in 0..=m {
                put(&mut j3, n, k, k, &t.diag[k], 1.0);
            }
            for k in 1..=m {
                put(&mut j3, n, k - 1, k, &t.upper[k - 1], gauge.at(k));
                put(&mut j3, n, k, k - 1, &t.lower[k - 1], 1.0 / gauge.at(k));
            }
        }
        Parity::Even => {
            j3[(0, 0)] = re(t.c0.unwrap_or(0.0));
            if let (Some(u1), Some(d0)) = (t.u1, t.d0) {
                let g = gauge.at(1);
                j3[(0, 1)] = re(u1[0] * g);
                j3[(0, 2)] = re(u1[1] * g);
                j3[(1, 0)] = re(d0[0] / g);
                j3[(2, 0)] = re(d0[1] / g);
            }
            for k in 1..=m {
                put(&mut j3, n, k, k, &t.diag[k - 1], 1.0);
            }
            for k in 2..=m {
                put(&mut j3, n, k - 1, k, &t.upper[k - 2], gauge.at(k));
                put(&mut j3, n, k, k - 1, &t.lower[k - 2], 1.0 / gauge.at(k));
            }
        }
    }
    j3
}

/// `J2` eigenvalues in the basis order: `(l0, -l0, l1, -l1, ...)` for odd `N`,
/// `(0, l1, -l1, ...)` for even `N`.
pub fn j2_diagonal(params: &OscParams) -> Vec<f64> {
    let (mx, my, z) = (params.mu_x, params.mu_y, params.zeta());
    let m = params.m();
    match params.parity() {
        Parity::Odd => (0..=m)
            .flat_map(|k| {
                let kf = k as f64;
                let l = ((kf + mx + 0.5) * (kf + my + 0.5)).sqrt();
                [l, -l]
            })
            .collect(),
        Parity::Even => std::iter::once(0.0)
            .chain((1..=m).flat_map(|k| {
                let kf = k as f64;
                let l = (kf * (kf + z)).sqrt();
                [l, -l]
            }))
            .collect(),
    }
}

/// Reflections: `Ry = -Rx = diag(s1, ...)` for odd `N`,
/// `Rx = Ry = diag(1, s1, ...)` for even `N`.
pub fn reflections(params: &OscParams) -> (DenseMatrix, DenseMatrix) {
    crate::repmat::explicit::reflections_b2(params)
}

/// `D = blockdiag(d_k I)` with `d_k = g_1 ... g_k`; the gauged `J3` equals
/// `D^{-1} J3(unit) D`.
pub fn gauge_matrix(params: &OscParams, gauge: &GaugeSeq) -> DenseMatrix {
    let n = params.n;
    let mut d = DenseMatrix::identity(params.dim());
    let mut acc = 1.0;
    for k in 1..=params.m() {
        acc *= gauge.at(k);
        for i in block_range(n, k) {
            d[(i, i)] = re(acc);
        }
    }
    d
}

/// All generators in the `J2` eigenbasis, `J1 = -i[J2, J3]`, `H = E I`.
pub fn build_j3_j2basis(params: &OscParams, gauge: &GaugeSeq, degeneracy_tol: f64) -> Result<GeneratorSet> {
    params.validate()?;
    if params.is_isotropic(degeneracy_tol) {
        return Err(Sd2Error::IsotropicDegenerate { tol: degeneracy_tol });
    }
    if gauge.len() != params.m() {
        return Err(Sd2Error::InvalidParams(format!(
            "gauge needs {} values for N = {}, got {}",
            params.m(),
            params.n,
            gauge.len()
        )));
    }
    let t = block_triple(params)?;
    let j3 = assemble_j3(params, &t, gauge);
    let j2 = DenseMatrix::diag_real(&j2_diagonal(params));
    let j1 = (&(&j2 * &j3) - &(&j3 * &j2)).scale(-I);
    let (rx, ry) = reflections(params);
    let h = DenseMatrix::identity(params.dim()).scale(re(params.energy()));
    GeneratorSet::from_parts(*params, BasisOrdering::J2Eigen, j1, j2, j3, rx, ry, h)
}

/// Outcome of comparing the `J3` spectrum with the Cartesian lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: OscParams,
    pub expected: Vec<f64>,
    pub computed: Vec<f64>,
    pub max_deviation: f64,
    pub max_imag: f64,
    pub matches: bool,
    pub note: String,
}

/// Eigenvalues of `J3` against `{n + (xi - N)/2}`.
pub fn j3_spectrum_check(gs: &GeneratorSet, tol: f64) -> SpectrumReport {
    let p = gs.params;
    let expected: Vec<f64> = (0..=p.n).map(|j| j as f64 + (p.xi() - p.n as f64) / 2.0).collect();
    let mut report = SpectrumReport {
        params: p,
        expected: expected.clone(),
        computed: Vec::new(),
        max_deviation: f64::INFINITY,
        max_imag: 0.0,
        matches: false,
        note: String::new(),
    };
    if p.is_isotropic(0.0) && gs.ordering == BasisOrdering::J2Eigen {
        report.note = "isotropic point: block formulas not applicable".into();
    }
    match dense_eigen(&gs.j3) {
        Ok(eig) => {
            let mut vals: Vec<C64> = eig.values;
            vals.sort_by(|a, b| a.re.total_cmp(&b.re));
            report.max_imag = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            report.computed = vals.iter().map(|v| v.re).collect();
            report.max_deviation = report
                .computed
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            report.matches = report.max_imag <= tol && report.max_deviation <= tol;
        }
        Err(e) => report.note = e.to_string(),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{anticommutator, commutator, matmul};

    fn p(n: usize, mx: f64, my: f64) -> OscParams {
        OscParams::new(n, mx, my).unwrap()
    }

    fn worst_relation(g: &GeneratorSet) -> f64 {
        let (mx, my) = (g.params.mu_x, g.params.mu_y);
        let rel = |a: DenseMatrix, b: DenseMatrix| (&a - &b).max_abs();
        let mut w: f64 = 0.0;
        w = w.max(rel(commutator(&g.j2, &g.j3).unwrap(), g.j1.scale(I)));
        w = w.max(rel(commutator(&g.j3, &g.j1).unwrap(), g.j2.scale(I)));
        let s = &(&g.rx * mx) + &(&g.ry * my);
        let dmu = &(&g.rx * mx) - &(&g.ry * my);
        let rhs = &(&g.j3 + &(&g.j3 * &s)) - &(&(&g.h * &dmu) * 0.5);
        w = w.max(rel(commutator(&g.j1, &g.j2).unwrap(), rhs.scale(I)));
        for r in [&g.rx, &g.ry] {
            w = w.max(anticommutator(&g.j1, r).unwrap().max_abs());
            w = w.max(anticommutator(&g.j2, r).unwrap().max_abs());
            w = w.max(commutator(&g.j3, r).unwrap().max_abs());
        }
        let c = &(&(&g.h * &g.h) - &DenseMatrix::identity(g.params.dim())) * 0.25;
        w.max(rel(g.casimir.clone(), c))
    }

    #[test]
    fn central_entries() {
        let t = block_triple(&p(3, 0.3, 0.7)).unwrap();
        assert!((t.diag[0][0][0] + 1.0 / 3.0).abs() < 1e-15);
        let t = block_triple(&p(4, 0.3, 0.7)).unwrap();
        assert!((t.c0.unwrap() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn rejects_isotropic_and_zero_gauge() {
        let q = OscParams::new(3, 0.3 + 1e-12, 0.3).unwrap();
        assert!(matches!(
            build_j3_j2basis(&q, &GaugeSeq::ones(1), 1e-7),
            Err(Sd2Error::IsotropicDegenerate { .. })
        ));
        assert_eq!(GaugeSeq::new(vec![1.0, 0.0]), Err(Sd2Error::ZeroGauge { index: 2 }));
    }

    #[test]
    fn relations_hold_with_random_gauges() {
        let grid = [-0.4, 0.0, 0.3, 0.7, 1.5];
        for n in 1..=9 {
            for &mx in &grid {
                for &my in &grid {
                    if mx == my {
                        continue;
                    }
                    let q = p(n, mx, my);
                    let m = q.m();
                    for gauge in [GaugeSeq::ones(m), GaugeSeq::new((1..=m).map(|k| 0.5 + k as f64 * 0.37).collect()).unwrap()] {
                        let g = build_j3_j2basis(&q, &gauge, 1e-7).unwrap();
                        let scale = g.j3.frobenius_norm().max(1.0).powi(2) * q.energy().max(1.0);
                        assert!(worst_relation(&g) < 1e-9 * scale, "{q:?} {}", worst_relation(&g));
                        assert!(crate::repmat::is_block_tridiagonal_exact(&g.j3, n));
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_matches_lattice() {
        let g = build_j3_j2basis(&p(3, 0.3, 0.7), &GaugeSeq::ones(1), 1e-7).unwrap();
        let r = j3_spectrum_check(&g, 1e-8);
        assert!(r.matches, "{r:?}");
        for (a, b) in r.expected.iter().zip([-1.7, -0.7, 0.3, 1.3]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn gauge_covariance() {
        let q = p(8, -0.4, 0.7);
        let gauge = GaugeSeq::new(vec![2.0, -0.5, 3.0, 0.25]).unwrap();
        let t = block_triple(&q).unwrap();
        let unit = assemble_j3(&q, &t, &GaugeSeq::ones(4));
        let gauged = assemble_j3(&q, &t, &gauge);
        let d = gauge_matrix(&q, &gauge);
        let conj = matmul(&matmul(&d.try_inverse().unwrap(), &unit).unwrap(), &d).unwrap();
        assert!((&conj - &gauged).max_abs() < 1e-13);
    }
}
