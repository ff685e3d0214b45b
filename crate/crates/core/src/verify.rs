//! Cross-checks over parameter grids, collected into a serializable report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};
use crate::interbasis::{build_transition, column_eigenvalues, condition_number};
use crate::j2rep::{build_j3_j2basis, j3_spectrum_check, GaugeSeq};
use crate::numerics::{anticommutator, commutator, dense_eigen, matmul, DenseMatrix, Tolerances, C64, I};
use crate::params::{check_mu, OscParams, Parity};
use crate::qdiag::{
    assemble_q_eigvecs, closed_form_pair, heun_even_coeffs, heun_odd_coeffs, isotropic_coeffs, omega,
    q_to_j2_with, solve_recurrence, solve_recurrence_even_upto, solve_recurrence_odd_upto, upsilon,
};
use crate::repmat::{
    build, build_cartesian, build_circular, casimir_polynomial, is_block_tridiagonal_exact,
    is_block_upper_triangular_exact, spectrum_closed_form, BasisOrdering, GeneratorSet, SpectrumOp,
};

pub const DEFAULT_MU_VALUES: [f64; 5] = [-0.4, 0.0, 0.3, 0.7, 1.5];
pub const DEFAULT_SEED: u64 = 0x5d2_2024;

/// Every pair from [`DEFAULT_MU_VALUES`], isotropic pairs included.
pub fn default_grid() -> Vec<(f64, f64)> {
    DEFAULT_MU_VALUES
        .iter()
        .flat_map(|&x| DEFAULT_MU_VALUES.iter().map(move |&y| (x, y)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: OscParams,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub notes: String,
}

impl CheckRecord {
    fn new(id: impl Into<String>, params: OscParams, residual: f64, tol: f64) -> Self {
        Self {
            id: id.into(),
            params,
            max_residual: residual,
            tol,
            passed: residual.is_finite() && residual <= tol,
            notes: String::new(),
        }
    }

    fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    fn failed(id: impl Into<String>, params: OscParams, err: impl std::fmt::Display) -> Self {
        Self {
            id: id.into(),
            params,
            max_residual: f64::INFINITY,
            tol: 0.0,
            passed: false,
            notes: err.to_string(),
        }
    }

    /// Passes when the inner check does *not* hold.
    fn expect_failure(id: impl Into<String>, params: OscParams, inner: &CheckRecord) -> Self {
        Self {
            id: id.into(),
            params,
            max_residual: inner.max_residual,
            tol: inner.tol,
            passed: !inner.passed,
            notes: format!("detected by: {}", inner.notes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub passed: bool,
    pub n_max: usize,
    pub grid: Vec<(f64, f64)>,
    pub seed: u64,
    pub random_samples: usize,
    pub tolerances: Tolerances,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    /// Records whose id starts with `prefix`.
    pub fn section<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.id.starts_with(prefix))
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{} checks, {} failed, N <= {}, {} grid points, {} random samples (seed {})",
            self.records.len(),
            failed,
            self.n_max,
            self.grid.len(),
            self.random_samples,
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub grid: Vec<(f64, f64)>,
    pub tol: Tolerances,
    pub seed: u64,
    pub random_samples: usize,
}

impl SuiteConfig {
    pub fn new(n_max: usize, grid: Vec<(f64, f64)>, tol: Tolerances) -> Self {
        Self {
            n_max,
            grid,
            tol,
            seed: DEFAULT_SEED,
            random_samples: 0,
        }
    }
}

/// Run every check for `N = 0..=n_max` over the grid.
pub fn run_suite(n_max: usize, grid: &[(f64, f64)], tol: Tolerances) -> Result<Report> {
    run_suite_with(&SuiteConfig::new(n_max, grid.to_vec(), tol))
}

pub fn run_suite_with(cfg: &SuiteConfig) -> Result<Report> {
    if cfg.n_max < 1 {
        return Err(Sd2Error::InvalidParams("n_max must be at least 1".into()));
    }
    cfg.tol.validate()?;
    for &(x, y) in &cfg.grid {
        check_mu("mu_x", x)?;
        check_mu("mu_y", y)?;
    }
    let mut cells: Vec<OscParams> = Vec::new();
    for n in 0..=cfg.n_max {
        for &(x, y) in &cfg.grid {
            cells.push(OscParams { n, mu_x: x, mu_y: y });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_samples {
        let n = rng.random_range(0..=cfg.n_max);
        let x = rng.random_range(-0.45..2.0);
        let y = rng.random_range(-0.45..2.0);
        cells.push(OscParams { n, mu_x: x, mu_y: y });
    }
    let tol = cfg.tol;
    let mut records: Vec<CheckRecord> = cells
        .par_iter()
        .map(|p| check_cell(p, &tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    records.extend(transition_independence(cfg.n_max, &cfg.grid));
    Ok(Report {
        passed: records.iter().all(|r| r.passed),
        n_max: cfg.n_max,
        grid: cfg.grid.clone(),
        seed: cfg.seed,
        random_samples: cfg.random_samples,
        tolerances: tol,
        records,
    })
}

/// Relative residuals of each defining relation of the algebra.
pub fn relation_residuals(g: &GeneratorSet) -> Result<Vec<(&'static str, f64)>> {
    let p = &g.params;
    let (mx, my) = (p.mu_x, p.mu_y);
    let d = p.dim();
    let id = DenseMatrix::identity(d);
    let nrm = |m: &DenseMatrix| m.frobenius_norm();
    let rel = |diff: DenseMatrix, scale: f64| nrm(&diff) / scale.max(1.0);
    let (j1, j2, j3, rx, ry, h) = (&g.j1, &g.j2, &g.j3, &g.rx, &g.ry, &g.h);

    let mut out = vec![
        ("[J2,J3]=iJ1", rel(&commutator(j2, j3)? - &j1.scale(I), nrm(j2) * nrm(j3))),
        ("[J3,J1]=iJ2", rel(&commutator(j3, j1)? - &j2.scale(I), nrm(j3) * nrm(j1))),
    ];
    let s = &(rx * mx) + &(ry * my);
    let dm = &(rx * mx) - &(ry * my);
    let rhs = (&(j3 + &matmul(j3, &s)?) - &(&matmul(h, &dm)? * 0.5)).scale(I);
    let scale = (nrm(j1) * nrm(j2)).max(nrm(&rhs));
    out.push(("[J1,J2]", rel(&commutator(j1, j2)? - &rhs, scale)));
    for (name, a, r) in [("{J1,Rx}=0", j1, rx), ("{J1,Ry}=0", j1, ry), ("{J2,Rx}=0", j2, rx), ("{J2,Ry}=0", j2, ry)] {
        out.push((name, rel(anticommutator(a, r)?, nrm(a) * nrm(r))));
    }
    for (name, r) in [("[J3,Rx]=0", rx), ("[J3,Ry]=0", ry)] {
        out.push((name, rel(commutator(j3, r)?, nrm(j3) * nrm(r))));
    }
    for (name, r) in [("Rx^2=I", rx), ("Ry^2=I", ry)] {
        out.push((name, rel(&matmul(r, r)? - &id, nrm(r) * nrm(r))));
    }
    let mut hc: f64 = 0.0;
    for x in [j1, j2, j3, rx, ry] {
        hc = hc.max(rel(commutator(h, x)?, nrm(h) * nrm(x)));
    }
    out.push(("H central", hc));
    let cas = casimir_polynomial(p, j1, j2, j3, rx, ry)?;
    let target = &(&matmul(h, h)? - &id) * 0.25;
    out.push(("Casimir", rel(&cas - &target, nrm(&target).max(nrm(&cas)))));
    Ok(out)
}

fn fmt_breakdown(rs: &[(&str, f64)]) -> String {
    rs.iter()
        .map(|(n, v)| format!("{n}: {v:.3e}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// One record with the worst relation residual and the full breakdown.
pub fn check_relations(id: &str, g: &GeneratorSet, tol: f64) -> CheckRecord {
    match relation_residuals(g) {
        Ok(rs) => {
            let worst = rs.iter().map(|r| r.1).fold(0.0, f64::max);
            CheckRecord::new(id, g.params, worst, tol).with_notes(fmt_breakdown(&rs))
        }
        Err(e) => CheckRecord::failed(id, g.params, e),
    }
}

/// Sorted eigenvalues of `built` against `predicted`.
pub fn check_spectrum_match(id: &str, params: OscParams, built: &DenseMatrix, predicted: &[f64], tol: f64) -> CheckRecord {
    if built.rows() != predicted.len() {
        return CheckRecord::failed(
            id,
            params,
            format!("{} eigenvalues expected, matrix is {}x{}", predicted.len(), built.rows(), built.cols()),
        );
    }
    let eig = match dense_eigen(built) {
        Ok(e) => e,
        Err(e) => return CheckRecord::failed(id, params, e),
    };
    let max_im = eig.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let mut got: Vec<f64> = eig.values.iter().map(|v| v.re).collect();
    got.sort_by(f64::total_cmp);
    let mut want = predicted.to_vec();
    want.sort_by(f64::total_cmp);
    let dev = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut rec = CheckRecord::new(id, params, dev.max(max_im), tol);
    rec.notes = format!("max |eigenvalue - predicted| = {dev:.3e}, max |imag| = {max_im:.3e}");
    rec
}

fn basis_sets(p: &OscParams) -> Vec<(BasisOrdering, Result<GeneratorSet>)> {
    BasisOrdering::ALL.iter().map(|&o| (o, build(p, o))).collect()
}

fn check_cell(p: &OscParams, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let sets = basis_sets(p);
    for (o, g) in &sets {
        let id = format!("relations/{}", o.as_str());
        out.push(match g {
            Ok(g) => check_relations(&id, g, tol.residual_tol),
            Err(e) => CheckRecord::failed(id, *p, e),
        });
    }
    let get = |o: BasisOrdering| sets.iter().find(|s| s.0 == o).and_then(|s| s.1.as_ref().ok());

    if let (Some(cart), Some(b2)) = (get(BasisOrdering::CartesianV), get(BasisOrdering::CircularB2)) {
        out.extend(spectra(p, cart, b2, tol));
        out.extend(block_structure(p, b2, get(BasisOrdering::J2Eigen), tol));
        out.extend(eigvec_pipeline(p, b2, tol));
        out.extend(negative_controls(p, cart, tol));
        if p.mu_x == 0.0 && p.mu_y == 0.0 {
            out.extend(u2_reduction(p, cart, b2));
        }
    }
    if let Some(b1) = get(BasisOrdering::CircularB1) {
        out.push(transition_check(p, b1, tol));
    }
    out.extend(closed_forms(p));
    out.push(unimodularity(p));
    if !p.is_isotropic(tol.degeneracy_tol) {
        out.push(match build_j3_j2basis(p, &GaugeSeq::ones(p.m()), tol.degeneracy_tol) {
            Ok(g) => {
                let r = j3_spectrum_check(&g, tol.eig_match_tol);
                let notes = if r.matches {
                    String::new()
                } else {
                    relation_residuals(&g).map(|rs| fmt_breakdown(&rs)).unwrap_or_default()
                };
                CheckRecord::new("j2rep/j3-spectrum", *p, r.max_deviation.max(r.max_imag), tol.eig_match_tol)
                    .with_notes(notes)
            }
            Err(e) => CheckRecord::failed("j2rep/j3-spectrum", *p, e),
        });
    }
    out
}

fn spectra(p: &OscParams, cart: &GeneratorSet, b2: &GeneratorSet, tol: &Tolerances) -> Vec<CheckRecord> {
    let t = tol.eig_match_tol;
    vec![
        check_spectrum_match("spectrum/J2", *p, &b2.j2, &spectrum_closed_form(p, SpectrumOp::J2), t),
        check_spectrum_match("spectrum/J3", *p, &cart.j3, &spectrum_closed_form(p, SpectrumOp::J3), t),
        check_spectrum_match("spectrum/Q", *p, &b2.q_operator(), &spectrum_closed_form(p, SpectrumOp::Q), t),
        check_spectrum_match("spectrum/H", *p, &cart.h, &spectrum_closed_form(p, SpectrumOp::H), t),
    ]
}

fn exact_record(id: &str, p: &OscParams, ok: bool, what: &str) -> CheckRecord {
    let mut r = CheckRecord::new(id, *p, if ok { 0.0 } else { f64::INFINITY }, 0.0);
    if !ok {
        r.notes = format!("nonzero entry outside {what}");
    }
    r
}

fn block_structure(p: &OscParams, b2: &GeneratorSet, j2e: Option<&GeneratorSet>, tol: &Tolerances) -> Vec<CheckRecord> {
    let n = p.n;
    let mut out = vec![
        exact_record("blocks/J2-b2-upper", p, is_block_upper_triangular_exact(&b2.j2, n), "the block upper triangle"),
        exact_record("blocks/Q-b2-upper", p, is_block_upper_triangular_exact(&b2.q_operator(), n), "the block upper triangle"),
    ];
    if !p.is_isotropic(tol.degeneracy_tol) {
        if let Some(g) = j2e {
            out.push(exact_record("blocks/J3-j2eigen-tridiagonal", p, is_block_tridiagonal_exact(&g.j3, n), "three block diagonals"));
        }
    }
    out
}

fn eigvec_pipeline(p: &OscParams, b2: &GeneratorSet, tol: &Tolerances) -> Vec<CheckRecord> {
    let q = b2.q_operator();
    let qt = match assemble_q_eigvecs(p) {
        Ok(t) => t,
        Err(e) => return vec![CheckRecord::failed("eigvecs/Q", *p, e)],
    };
    let mut out = vec![match qt.max_relative_residual(&q) {
        Ok(r) => CheckRecord::new("eigvecs/Q", *p, r, tol.residual_tol),
        Err(e) => CheckRecord::failed("eigvecs/Q", *p, e),
    }];
    out.push(
        match q_to_j2_with(&qt, p, &b2.j2).and_then(|jt| jt.max_relative_residual(&b2.j2)) {
            Ok(r) => CheckRecord::new("eigvecs/J2", *p, r, tol.residual_tol),
            Err(e) => CheckRecord::failed("eigvecs/J2", *p, e),
        },
    );
    out
}

const CLOSED_FORM_TOL: f64 = 1e-9;
const ISOTROPIC_TOL: f64 = 1e-10;
const UNIMODULAR_TOL: f64 = 1e-12;
const U2_TOL: f64 = 1e-12;

fn closed_forms(p: &OscParams) -> Vec<CheckRecord> {
    let sectors: Vec<usize> = match p.parity() {
        Parity::Even => (1..=p.n / 2).collect(),
        Parity::Odd => (0..=p.m()).collect(),
    };
    let mut cf: f64 = 0.0;
    let mut heun: f64 = 0.0;
    let mut iso: f64 = 0.0;
    let mut notes = Vec::new();
    for &k in &sectors {
        let reference = match solve_recurrence(k, p) {
            Ok(r) => r,
            Err(e) => return vec![CheckRecord::failed("closed-form/para-krawtchouk", *p, e)],
        };
        match closed_form_pair(k, p) {
            Ok(c) => cf = cf.max(c.max_rel_diff(&reference)),
            Err(e) => notes.push(format!("k={k}: {e}")),
        }
        match heun_deviation(k, p) {
            Ok(d) => heun = heun.max(d),
            Err(e) => notes.push(format!("heun k={k}: {e}")),
        }
        if p.is_isotropic(0.0) {
            match isotropic_coeffs(k, p.mu_x, p.parity()) {
                Ok(c) => iso = iso.max(c.max_rel_diff(&reference)),
                Err(e) => notes.push(format!("isotropic k={k}: {e}")),
            }
        }
    }
    let failed_notes = notes.join("; ");
    let mut out = vec![
        CheckRecord::new("closed-form/para-krawtchouk", *p, cf, CLOSED_FORM_TOL),
        CheckRecord::new("closed-form/heun", *p, heun, CLOSED_FORM_TOL),
    ];
    if p.is_isotropic(0.0) {
        out.push(CheckRecord::new("closed-form/isotropic", *p, iso, ISOTROPIC_TOL));
    }
    if !failed_notes.is_empty() {
        for r in &mut out {
            r.passed = false;
            r.notes = failed_notes.clone();
        }
    }
    out
}

fn rel_dev(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max)
}

/// Heun coefficients against the recurrence extended past `k` as far as it
/// is defined.
fn heun_deviation(k: usize, p: &OscParams) -> Result<f64> {
    match p.parity() {
        Parity::Even => {
            let ext = solve_recurrence_even_upto(k, p, 2 * k);
            Ok(rel_dev(&heun_even_coeffs(k, p, ext.a.len() - 1)?, &ext.a))
        }
        Parity::Odd => {
            let ext = solve_recurrence_odd_upto(k, p, 2 * k + 1);
            Ok(heun_odd_coeffs(k, p, ext.a.len() - 1)?.max_rel_diff(&ext))
        }
    }
}

fn unimodularity(p: &OscParams) -> CheckRecord {
    let dev = match p.parity() {
        Parity::Even => (1..=p.n / 2).map(|k| (omega(k, p).norm() - 1.0).abs()).fold(0.0, f64::max),
        Parity::Odd => (0..=p.m()).map(|k| (upsilon(k, p).norm() - 1.0).abs()).fold(0.0, f64::max),
    };
    CheckRecord::new("unimodular", *p, dev, UNIMODULAR_TOL)
}

fn transition_check(p: &OscParams, b1: &GeneratorSet, tol: &Tolerances) -> CheckRecord {
    let id = "transition/j3-diagonalized";
    let t = match build_transition(p) {
        Ok(t) => t.t,
        Err(e) => return CheckRecord::failed(id, *p, e),
    };
    let d = DenseMatrix::diag_real(&column_eigenvalues(p));
    let res = match (matmul(&b1.j3, &t), matmul(&t, &d)) {
        (Ok(l), Ok(r)) => (&l - &r).frobenius_norm() / (b1.j3.frobenius_norm() * t.frobenius_norm()).max(1.0),
        (Err(e), _) | (_, Err(e)) => return CheckRecord::failed(id, *p, e),
    };
    let cond = condition_number(&t);
    let mut rec = CheckRecord::new(id, *p, res, tol.residual_tol).with_notes(format!("condition number {cond:.3e}"));
    if !cond.is_finite() {
        rec.passed = false;
    }
    rec
}

fn transition_independence(n_max: usize, grid: &[(f64, f64)]) -> Vec<CheckRecord> {
    (0..=n_max)
        .map(|n| {
            let base = OscParams { n, mu_x: 0.0, mu_y: 0.0 };
            let t0 = build_transition(&base).map(|t| t.t);
            let dev = grid
                .iter()
                .map(|&(x, y)| match (&t0, build_transition(&OscParams { n, mu_x: x, mu_y: y })) {
                    (Ok(a), Ok(b)) => (a - &b.t).max_abs(),
                    _ => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            CheckRecord::new("transition/mu-independent", base, dev, 0.0)
        })
        .collect()
}

/// Standard spin-`N/2` matrices `(Jx, Jy, Jz)` on `|j, m>`, `m = -j..=j`.
pub fn su2_matrices(n: usize) -> [DenseMatrix; 3] {
    let d = n + 1;
    let j = n as f64 / 2.0;
    let mut jp = DenseMatrix::zeros(d, d);
    for i in 0..n {
        let m = i as f64 - j;
        jp[(i + 1, i)] = C64::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = &(&jp + &jm) * 0.5;
    let jy = (&jp - &jm).scale(C64::new(0.0, -0.5));
    let jz = DenseMatrix::diag_real(&(0..d).map(|i| i as f64 - j).collect::<Vec<_>>());
    [jx, jy, jz]
}

fn u2_reduction(p: &OscParams, cart: &GeneratorSet, b2: &GeneratorSet) -> Vec<CheckRecord> {
    let d = p.dim();
    let offdiag = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| b2.j2[(i, j)].norm())
        .fold(0.0, f64::max);
    let n = p.n;
    let fact = |k: usize| crate::specfun::factorial(k);
    let scale: Vec<f64> = (0..=n).map(|k| (fact(k) * fact(n - k)).sqrt()).collect();
    let dmat = DenseMatrix::diag_real(&scale);
    let dinv = DenseMatrix::diag_real(&scale.iter().map(|s| 1.0 / s).collect::<Vec<_>>());
    let [jx, jy, jz] = su2_matrices(n);
    let mut dev: f64 = 0.0;
    for (a, b) in [(&cart.j1, &jx), (&cart.j2, &jy), (&cart.j3, &jz)] {
        let conj = &(&dmat * a) * &dinv;
        dev = dev.max((&conj - b).max_abs());
    }
    vec![
        CheckRecord::new("u2/J2-b2-diagonal", *p, offdiag, U2_TOL),
        CheckRecord::new("u2/standard-spin-matrices", *p, dev, U2_TOL),
    ]
}

const PERTURBATION: f64 = 1e-3;

/// Perturb each generator in one entry; the relation check must notice.
fn negative_controls(p: &OscParams, cart: &GeneratorSet, tol: &Tolerances) -> Vec<CheckRecord> {
    ["J1", "J2", "J3", "Rx", "Ry", "H"]
        .iter()
        .map(|name| {
            let mut g = cart.clone();
            if let Some(m) = g.get_mut(name) {
                m[(0, 0)] += C64::new(PERTURBATION, 0.0);
            }
            let inner = check_relations("relations/perturbed", &g, tol.residual_tol);
            CheckRecord::expect_failure(format!("negative-control/{name}"), *p, &inner)
        })
        .collect()
}

/// Eigenvalue check on a matrix with one entry shifted; used as a
/// negative control for [`check_spectrum_match`].
pub fn perturbed(m: &DenseMatrix, i: usize, j: usize, delta: f64) -> DenseMatrix {
    let mut out = m.clone();
    out[(i, j)] += C64::new(delta, 0.0);
    out
}

/// Cartesian and `B2` builds for quick use by callers.
pub fn cartesian_and_b2(p: &OscParams) -> Result<(GeneratorSet, GeneratorSet)> {
    Ok((build_cartesian(p)?, build_circular(p, BasisOrdering::CircularB2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spectrum_passes() {
        let p = OscParams::new(1, 0.0, 0.0).unwrap();
        let m = DenseMatrix::diag_real(&[1.0, 2.0]);
        assert!(check_spectrum_match("t", p, &m, &[2.0, 1.0], 1e-8).passed);
        assert!(!check_spectrum_match("t", p, &perturbed(&m, 0, 0, 1e-3), &[1.0, 2.0], 1e-8).passed);
    }

    #[test]
    fn j2_b2_odd_spectrum() {
        let p = OscParams::new(5, 0.3, 0.7).unwrap();
        let g = build_circular(&p, BasisOrdering::CircularB2).unwrap();
        assert!(check_spectrum_match("t", p, &g.j2, &spectrum_closed_form(&p, SpectrumOp::J2), 1e-8).passed);
    }

    #[test]
    fn u2_point_passes() {
        let r = run_suite(4, &[(0.0, 0.0)], Tolerances::default()).unwrap();
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(r.section("u2/J2-b2-diagonal").all(|c| c.max_residual == 0.0));
    }

    #[test]
    fn rejects_grid_outside_domain() {
        assert!(run_suite(2, &[(-0.6, 0.2)], Tolerances::default()).is_err());
        assert!(run_suite(0, &[(0.0, 0.0)], Tolerances::default()).is_err());
    }

    #[test]
    fn deterministic() {
        let mut cfg = SuiteConfig::new(3, vec![(0.3, 0.7), (1.5, 1.5)], Tolerances::default());
        cfg.random_samples = 4;
        let a = serde_json::to_string(&run_suite_with(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite_with(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
