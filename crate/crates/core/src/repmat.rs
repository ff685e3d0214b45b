//! Generator matrices of sd(2) in the Cartesian basis and in the two circular
//! orderings, built by pushing Fock-state actions through a basis.
//!
//! Matrices follow the column convention: entry `(i, j)` is the coefficient of
//! basis vector `i` in the image of basis vector `j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};
use crate::fock::{CartesianState, CircularState, FockState, OperatorId, StateSum};
use crate::numerics::{c, matmul, re, DenseMatrix, C64, I};
use crate::params::{OscParams, Parity};

pub mod explicit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisOrdering {
    CartesianV,
    CircularB1,
    CircularB2,
    J2Eigen,
}

impl BasisOrdering {
    pub const ALL: [BasisOrdering; 4] = [
        BasisOrdering::CartesianV,
        BasisOrdering::CircularB1,
        BasisOrdering::CircularB2,
        BasisOrdering::J2Eigen,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BasisOrdering::CartesianV => "cartesian",
            BasisOrdering::CircularB1 => "circular-b1",
            BasisOrdering::CircularB2 => "circular-b2",
            BasisOrdering::J2Eigen => "j2-eigen",
        }
    }
}

impl fmt::Display for BasisOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisOrdering {
    type Err = Sd2Error;
    fn from_str(s: &str) -> Result<Self> {
        BasisOrdering::ALL
            .iter()
            .copied()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Sd2Error::InvalidParams(format!("unknown basis '{s}'")))
    }
}

/// Label sign in the `B2` ordering; `sign(n_R - n_L)` with `sign(0) = -`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(&self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `(l, sign)` label of a circular state.
pub fn b2_label(s: CircularState) -> (usize, Sign) {
    let l = s.nl.abs_diff(s.nr) / 2;
    let sg = if s.nr > s.nl { Sign::Plus } else { Sign::Minus };
    (l, sg)
}

/// Circular states of level `n` in the `B2` order.
pub fn b2_states(n: usize) -> Vec<CircularState> {
    let mut states = CircularState::level_states(n);
    states.sort_by_key(|&s| b2_label(s));
    states
}

/// Position of `|l, sign>` in the `B2` order, if that label exists.
pub fn b2_index(n: usize, l: usize, sign: Sign) -> Option<usize> {
    b2_states(n).iter().position(|&s| b2_label(s) == (l, sign))
}

/// Block index of each position in `B2` (and in the J2 eigenbasis ordering):
/// pairs `(0,1), (2,3), ...` for odd `N`; `0`, then pairs `(1,2), (3,4), ...`
/// for even `N`.
pub fn block_of(n: usize, index: usize) -> usize {
    match Parity::of(n) {
        Parity::Odd => index / 2,
        Parity::Even => index.div_ceil(2),
    }
}

/// Position range of block `k`.
pub fn block_range(n: usize, k: usize) -> std::ops::Range<usize> {
    match Parity::of(n) {
        Parity::Odd => 2 * k..2 * k + 2,
        Parity::Even if k == 0 => 0..1,
        Parity::Even => 2 * k - 1..2 * k + 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumOp {
    J2,
    J3,
    Q,
    H,
}

impl FromStr for SpectrumOp {
    type Err = Sd2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "J2" => Ok(SpectrumOp::J2),
            "J3" => Ok(SpectrumOp::J3),
            "Q" => Ok(SpectrumOp::Q),
            "H" => Ok(SpectrumOp::H),
            _ => Err(Sd2Error::InvalidParams(format!("unknown spectrum operator '{s}'"))),
        }
    }
}

impl fmt::Display for SpectrumOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The generators of one representation in one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub params: OscParams,
    pub ordering: BasisOrdering,
    pub j1: DenseMatrix,
    pub j2: DenseMatrix,
    pub j3: DenseMatrix,
    pub rx: DenseMatrix,
    pub ry: DenseMatrix,
    pub h: DenseMatrix,
    pub casimir: DenseMatrix,
}

pub const GENERATOR_NAMES: [&str; 7] = ["J1", "J2", "J3", "Rx", "Ry", "H", "C"];

impl GeneratorSet {
    /// Assemble a set and compute the Casimir from its defining polynomial.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        params: OscParams,
        ordering: BasisOrdering,
        j1: DenseMatrix,
        j2: DenseMatrix,
        j3: DenseMatrix,
        rx: DenseMatrix,
        ry: DenseMatrix,
        h: DenseMatrix,
    ) -> Result<Self> {
        let dim = params.dim();
        for (name, m) in [("J1", &j1), ("J2", &j2), ("J3", &j3), ("Rx", &rx), ("Ry", &ry), ("H", &h)] {
            if m.shape() != (dim, dim) {
                return Err(Sd2Error::Format(format!(
                    "{name} has shape {:?}, expected {dim}x{dim}",
                    m.shape()
                )));
            }
        }
        let casimir = casimir_polynomial(&params, &j1, &j2, &j3, &rx, &ry)?;
        Ok(Self {
            params,
            ordering,
            j1,
            j2,
            j3,
            rx,
            ry,
            h,
            casimir,
        })
    }

    pub fn get(&self, name: &str) -> Option<&DenseMatrix> {
        match name {
            "J1" => Some(&self.j1),
            "J2" => Some(&self.j2),
            "J3" => Some(&self.j3),
            "Rx" => Some(&self.rx),
            "Ry" => Some(&self.ry),
            "H" => Some(&self.h),
            "C" => Some(&self.casimir),
            _ => None,
        }
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut DenseMatrix> {
        match name {
            "J1" => Some(&mut self.j1),
            "J2" => Some(&mut self.j2),
            "J3" => Some(&mut self.j3),
            "Rx" => Some(&mut self.rx),
            "Ry" => Some(&mut self.ry),
            "H" => Some(&mut self.h),
            "C" => Some(&mut self.casimir),
            _ => None,
        }
    }

    pub fn named(&self) -> Vec<(&'static str, &DenseMatrix)> {
        GENERATOR_NAMES
            .iter()
            .map(|&n| (n, self.get(n).expect("known name")))
            .collect()
    }

    /// `Q = -2i J2 Rx - mu_x Ry - mu_y Rx - Rx Ry / 2` in this basis.
    pub fn q_operator(&self) -> DenseMatrix {
        let p = &self.params;
        let j2rx = &self.j2 * &self.rx;
        let rxry = &self.rx * &self.ry;
        let a = &j2rx.scale(c(0.0, -2.0)) - &(&self.ry * p.mu_x);
        let b = &(&self.rx * p.mu_y) + &(&rxry * 0.5);
        &a - &b
    }

    /// The set expressed in the basis given by the columns of `w`:
    /// every generator `G` becomes `W^{-1} G W`.
    pub fn transformed(&self, w: &DenseMatrix, ordering: BasisOrdering) -> Result<Self> {
        let winv = w.try_inverse().ok_or(Sd2Error::SingularParameter {
            what: "change of basis",
            index: 0,
        })?;
        let t = |m: &DenseMatrix| -> Result<DenseMatrix> { matmul(&winv, &matmul(m, w)?) };
        let mut out = Self::from_parts(
            self.params,
            ordering,
            t(&self.j1)?,
            t(&self.j2)?,
            t(&self.j3)?,
            t(&self.rx)?,
            t(&self.ry)?,
            t(&self.h)?,
        )?;
        out.casimir = t(&self.casimir)?;
        Ok(out)
    }
}

/// `C = J1^2 + J2^2 + J3^2 + mu_x Rx/2 + mu_y Ry/2 + mu_x mu_y Rx Ry`
pub fn casimir_polynomial(
    p: &OscParams,
    j1: &DenseMatrix,
    j2: &DenseMatrix,
    j3: &DenseMatrix,
    rx: &DenseMatrix,
    ry: &DenseMatrix,
) -> Result<DenseMatrix> {
    let sq = &(&matmul(j1, j1)? + &matmul(j2, j2)?) + &matmul(j3, j3)?;
    let refl = &(&(rx * (p.mu_x / 2.0)) + &(ry * (p.mu_y / 2.0))) + &(&matmul(rx, ry)? * (p.mu_x * p.mu_y));
    Ok(&sq + &refl)
}

/// Linear combination of operator words.
type Combo = Vec<(C64, Vec<OperatorId>)>;

fn anti(a: OperatorId, b: OperatorId, w: C64) -> Combo {
    vec![(w, vec![a, b]), (w, vec![b, a])]
}

fn combo_matrix<S: FockState>(basis: &[S], combo: &Combo, params: &OscParams) -> Result<DenseMatrix> {
    let dim = basis.len();
    let mut m = DenseMatrix::zeros(dim, dim);
    for (j, &s) in basis.iter().enumerate() {
        let mut image: StateSum<S> = StateSum::zero();
        for (w, word) in combo {
            image.add_scaled(*w, &crate::fock::apply_word(word, s, params)?);
        }
        for (t, &coef) in image.iter() {
            let i = basis.iter().position(|b| b == t).ok_or_else(|| {
                Sd2Error::OutOfRange(format!("{t} lies outside the level-{} basis", params.n))
            })?;
            m[(i, j)] = coef;
        }
    }
    Ok(m)
}

fn build_from_combos<S: FockState>(
    params: &OscParams,
    ordering: BasisOrdering,
    basis: &[S],
    combos: [Combo; 4],
) -> Result<GeneratorSet> {
    let [j1, j2, j3, h] = combos;
    let mat = |cmb: &Combo| combo_matrix(basis, cmb, params);
    GeneratorSet::from_parts(
        *params,
        ordering,
        mat(&j1)?,
        mat(&j2)?,
        mat(&j3)?,
        mat(&vec![(re(1.0), vec![OperatorId::Rx])])?,
        mat(&vec![(re(1.0), vec![OperatorId::Ry])])?,
        mat(&h)?,
    )
}

/// Generators on `v_n = |n, N-n>` from the Cartesian ladder realization.
pub fn build_cartesian(params: &OscParams) -> Result<GeneratorSet> {
    use OperatorId::*;
    params.validate()?;
    let basis = CartesianState::level_states(params.n);
    let j1 = vec![
        (re(0.5), vec![APlusX, AMinusY]),
        (re(0.5), vec![AMinusX, APlusY]),
    ];
    // 1/(2i) = -i/2
    let j2 = vec![
        (c(0.0, -0.5), vec![APlusX, AMinusY]),
        (c(0.0, 0.5), vec![AMinusX, APlusY]),
    ];
    let mut j3 = anti(AMinusX, APlusX, re(0.25));
    j3.extend(anti(AMinusY, APlusY, re(-0.25)));
    let mut h = anti(AMinusX, APlusX, re(0.5));
    h.extend(anti(AMinusY, APlusY, re(0.5)));
    build_from_combos(params, BasisOrdering::CartesianV, &basis, [j1, j2, j3, h])
}

/// Generators in a circular ordering from the circular ladder realization.
pub fn build_circular(params: &OscParams, ordering: BasisOrdering) -> Result<GeneratorSet> {
    use OperatorId::*;
    params.validate()?;
    let basis = match ordering {
        BasisOrdering::CircularB1 => CircularState::level_states(params.n),
        BasisOrdering::CircularB2 => b2_states(params.n),
        other => {
            return Err(Sd2Error::InvalidParams(format!(
                "build_circular needs a circular ordering, got {other}"
            )))
        }
    };
    let q = re(0.25);
    let mut j1 = anti(APlusL, AMinusR, I * 0.25);
    j1.extend(anti(AMinusL, APlusR, -I * 0.25));
    let mut j2 = anti(AMinusR, APlusR, q);
    j2.extend(anti(AMinusL, APlusL, -q));
    let mut j3 = anti(AMinusL, APlusR, q);
    j3.extend(anti(APlusL, AMinusR, q));
    let mut h = anti(AMinusL, APlusL, re(0.5));
    h.extend(anti(AMinusR, APlusR, re(0.5)));
    build_from_combos(params, ordering, &basis, [j1, j2, j3, h])
}

/// Generators in any ordering. The J2 eigenbasis uses the explicit block
/// formulas with unit gauge away from the isotropic line and a similarity
/// transform by computed J2 eigenvectors on it.
pub fn build(params: &OscParams, ordering: BasisOrdering) -> Result<GeneratorSet> {
    match ordering {
        BasisOrdering::CartesianV => build_cartesian(params),
        BasisOrdering::CircularB1 | BasisOrdering::CircularB2 => build_circular(params, ordering),
        BasisOrdering::J2Eigen => {
            let tol = crate::numerics::Tolerances::default().degeneracy_tol;
            if params.is_isotropic(tol) {
                crate::qdiag::j2_eigenbasis_by_similarity(params)
            } else {
                crate::j2rep::build_j3_j2basis(params, &crate::j2rep::GaugeSeq::ones(params.m()), tol)
            }
        }
    }
}

/// Q in the `B2` ordering.
pub fn build_q(params: &OscParams) -> Result<DenseMatrix> {
    Ok(build_circular(params, BasisOrdering::CircularB2)?.q_operator())
}

/// Closed-form spectrum, sorted ascending.
pub fn spectrum_closed_form(params: &OscParams, which: SpectrumOp) -> Vec<f64> {
    let (mx, my, z, xi) = (params.mu_x, params.mu_y, params.zeta(), params.xi());
    let n = params.n;
    let nf = n as f64;
    let mut out: Vec<f64> = match (which, params.parity()) {
        (SpectrumOp::J3, _) => (0..=n).map(|j| j as f64 + (xi - nf) / 2.0).collect(),
        (SpectrumOp::H, _) => vec![params.energy(); n + 1],
        (SpectrumOp::J2, Parity::Even) => std::iter::once(0.0)
            .chain((1..=n / 2).flat_map(|k| {
                let kf = k as f64;
                let l = (kf * (kf + z)).sqrt();
                [l, -l]
            }))
            .collect(),
        (SpectrumOp::J2, Parity::Odd) => (0..=(n - 1) / 2)
            .flat_map(|k| {
                let kf = k as f64;
                let l = ((kf + mx + 0.5) * (kf + my + 0.5)).sqrt();
                [l, -l]
            })
            .collect(),
        (SpectrumOp::Q, Parity::Even) => std::iter::once(-z - 0.5)
            .chain((1..=n / 2).flat_map(|k| {
                let kf = k as f64;
                [2.0 * kf + z - 0.5, -2.0 * kf - z - 0.5]
            }))
            .collect(),
        (SpectrumOp::Q, Parity::Odd) => (0..=(n - 1) / 2)
            .flat_map(|k| {
                let kf = k as f64;
                [2.0 * kf + z + 1.5, -2.0 * kf - z - 0.5]
            })
            .collect(),
    };
    out.sort_by(f64::total_cmp);
    out
}

/// True when every entry below the diagonal blocks is exactly zero.
pub fn is_block_upper_triangular_exact(m: &DenseMatrix, n: usize) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| block_of(n, i) <= block_of(n, j) || m[(i, j)] == c(0.0, 0.0))
    })
}

/// True when every entry outside the three central block diagonals is exactly zero.
pub fn is_block_tridiagonal_exact(m: &DenseMatrix, n: usize) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| block_of(n, i).abs_diff(block_of(n, j)) <= 1 || m[(i, j)] == c(0.0, 0.0))
    })
}
