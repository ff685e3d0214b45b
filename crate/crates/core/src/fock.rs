//! Exact actions of the parabosonic ladder operators and reflections on
//! Cartesian states `|n_x, n_y>` and circular states `|n_L, n_R>`.
//!
//! States are unnormalized: `|n_x, n_y> = (A+x)^n_x (A+y)^n_y |0>` and
//! `|n_L, n_R> = (A+L)^n_L (A+R)^n_R |0>`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Sd2Error};
use crate::numerics::{c, re, C64, ZERO};
use crate::params::OscParams;
use crate::specfun::{mu_number, sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CartesianState {
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CircularState {
    pub nl: usize,
    pub nr: usize,
}

impl CartesianState {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self { nx, ny }
    }
}

impl CircularState {
    pub fn new(nl: usize, nr: usize) -> Self {
        Self { nl, nr }
    }
}

impl fmt::Display for CartesianState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.nx, self.ny)
    }
}

impl fmt::Display for CircularState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}L,{}R>", self.nl, self.nr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorId {
    APlusX,
    AMinusX,
    APlusY,
    AMinusY,
    APlusL,
    AMinusL,
    APlusR,
    AMinusR,
    Rx,
    Ry,
}

impl OperatorId {
    pub const ALL: [OperatorId; 10] = [
        OperatorId::APlusX,
        OperatorId::AMinusX,
        OperatorId::APlusY,
        OperatorId::AMinusY,
        OperatorId::APlusL,
        OperatorId::AMinusL,
        OperatorId::APlusR,
        OperatorId::AMinusR,
        OperatorId::Rx,
        OperatorId::Ry,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorId::APlusX => "A+x",
            OperatorId::AMinusX => "A-x",
            OperatorId::APlusY => "A+y",
            OperatorId::AMinusY => "A-y",
            OperatorId::APlusL => "A+L",
            OperatorId::AMinusL => "A-L",
            OperatorId::APlusR => "A+R",
            OperatorId::AMinusR => "A-R",
            OperatorId::Rx => "Rx",
            OperatorId::Ry => "Ry",
        }
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, OperatorId::Rx | OperatorId::Ry)
    }

    pub fn is_cartesian(&self) -> bool {
        matches!(
            self,
            OperatorId::APlusX | OperatorId::AMinusX | OperatorId::APlusY | OperatorId::AMinusY
        )
    }

    pub fn is_circular(&self) -> bool {
        matches!(
            self,
            OperatorId::APlusL | OperatorId::AMinusL | OperatorId::APlusR | OperatorId::AMinusR
        )
    }

    /// Change in total excitation number.
    pub fn level_shift(&self) -> isize {
        match self {
            OperatorId::APlusX | OperatorId::APlusY | OperatorId::APlusL | OperatorId::APlusR => 1,
            OperatorId::AMinusX
            | OperatorId::AMinusY
            | OperatorId::AMinusL
            | OperatorId::AMinusR => -1,
            OperatorId::Rx | OperatorId::Ry => 0,
        }
    }

    /// Circular operators as combinations of Cartesian ones:
    /// `A±L = (A±x ∓ i A±y)/√2`, `A±R = (A±x ± i A±y)/√2`.
    /// Cartesian operators and reflections map to themselves.
    pub fn cartesian_components(&self) -> Vec<(C64, OperatorId)> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            OperatorId::APlusL => vec![(re(h), OperatorId::APlusX), (c(0.0, -h), OperatorId::APlusY)],
            OperatorId::AMinusL => vec![(re(h), OperatorId::AMinusX), (c(0.0, h), OperatorId::AMinusY)],
            OperatorId::APlusR => vec![(re(h), OperatorId::APlusX), (c(0.0, h), OperatorId::APlusY)],
            OperatorId::AMinusR => vec![(re(h), OperatorId::AMinusX), (c(0.0, -h), OperatorId::AMinusY)],
            other => vec![(re(1.0), *other)],
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorId {
    type Err = Sd2Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorId::ALL
            .iter()
            .copied()
            .find(|op| op.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Sd2Error::InvalidParams(format!("unknown operator '{s}'")))
    }
}

/// Linear combination of basis states with canonical (lexicographic) order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSum<S: Ord> {
    terms: BTreeMap<S, C64>,
}

impl<S: Ord + Copy> Default for StateSum<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Ord + Copy> StateSum<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn single(s: S) -> Self {
        let mut out = Self::zero();
        out.add_term(re(1.0), s);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (C64, S)>) -> Self {
        let mut out = Self::zero();
        for (coef, s) in terms {
            out.add_term(coef, s);
        }
        out
    }

    pub fn add_term(&mut self, coef: C64, s: S) {
        if coef == ZERO {
            return;
        }
        let entry = self.terms.entry(s).or_insert(ZERO);
        *entry += coef;
        if *entry == ZERO {
            self.terms.remove(&s);
        }
    }

    pub fn add_scaled(&mut self, scale: C64, other: &StateSum<S>) {
        for (s, &coef) in &other.terms {
            self.add_term(scale * coef, *s);
        }
    }

    pub fn scaled(&self, scale: C64) -> Self {
        let mut out = Self::zero();
        out.add_scaled(scale, self);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, s: &S) -> C64 {
        self.terms.get(s).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &C64)> {
        self.terms.iter()
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &StateSum<S>) -> f64 {
        let mut diff = self.clone();
        diff.add_scaled(re(-1.0), other);
        diff.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// A labelled Fock state on which [`OperatorId`]s act.
pub trait FockState: Copy + Ord + fmt::Debug + fmt::Display {
    const BASIS: &'static str;
    fn level(&self) -> usize;
    fn apply(self, op: OperatorId, params: &OscParams) -> Result<StateSum<Self>>;
    /// All states with the given total excitation number, ordered by first index.
    fn level_states(level: usize) -> Vec<Self>;
}

impl FockState for CartesianState {
    const BASIS: &'static str = "Cartesian";
    fn level(&self) -> usize {
        self.nx + self.ny
    }
    fn apply(self, op: OperatorId, params: &OscParams) -> Result<StateSum<Self>> {
        apply_cartesian(op, self, params)
    }
    fn level_states(level: usize) -> Vec<Self> {
        (0..=level).map(|n| CartesianState::new(n, level - n)).collect()
    }
}

impl FockState for CircularState {
    const BASIS: &'static str = "circular";
    fn level(&self) -> usize {
        self.nl + self.nr
    }
    fn apply(self, op: OperatorId, params: &OscParams) -> Result<StateSum<Self>> {
        apply_circular(op, self, params)
    }
    fn level_states(level: usize) -> Vec<Self> {
        (0..=level).map(|n| CircularState::new(n, level - n)).collect()
    }
}

pub fn apply_cartesian(
    op: OperatorId,
    s: CartesianState,
    params: &OscParams,
) -> Result<StateSum<CartesianState>> {
    let CartesianState { nx, ny } = s;
    let one = |st| StateSum::single(st);
    Ok(match op {
        OperatorId::APlusX => one(CartesianState::new(nx + 1, ny)),
        OperatorId::APlusY => one(CartesianState::new(nx, ny + 1)),
        OperatorId::AMinusX if nx == 0 => StateSum::zero(),
        OperatorId::AMinusX => StateSum::from_terms([(
            re(mu_number(nx, params.mu_x)),
            CartesianState::new(nx - 1, ny),
        )]),
        OperatorId::AMinusY if ny == 0 => StateSum::zero(),
        OperatorId::AMinusY => StateSum::from_terms([(
            re(mu_number(ny, params.mu_y)),
            CartesianState::new(nx, ny - 1),
        )]),
        OperatorId::Rx => StateSum::from_terms([(re(sign(nx)), s)]),
        OperatorId::Ry => StateSum::from_terms([(re(sign(ny)), s)]),
        _ => {
            return Err(Sd2Error::WrongBasis {
                op: op.as_str(),
                basis: CartesianState::BASIS,
            })
        }
    })
}

pub fn apply_circular(
    op: OperatorId,
    s: CircularState,
    params: &OscParams,
) -> Result<StateSum<CircularState>> {
    let CircularState { nl, nr } = s;
    let (mx, my) = (params.mu_x, params.mu_y);
    let mut out = StateSum::zero();
    match op {
        OperatorId::APlusL => out.add_term(re(1.0), CircularState::new(nl + 1, nr)),
        OperatorId::APlusR => out.add_term(re(1.0), CircularState::new(nl, nr + 1)),
        OperatorId::Rx => out.add_term(re(sign(nl + nr)), CircularState::new(nr, nl)),
        OperatorId::Ry => out.add_term(re(1.0), CircularState::new(nr, nl)),
        OperatorId::AMinusL | OperatorId::AMinusR => {
            let left = op == OperatorId::AMinusL;
            if left && nl > 0 {
                out.add_term(re(nl as f64), CircularState::new(nl - 1, nr));
            }
            if !left && nr > 0 {
                out.add_term(re(nr as f64), CircularState::new(nl, nr - 1));
            }
            let ysign = if left { 1.0 } else { -1.0 };
            let (lo, hi, outer) = if nl > nr {
                (nr, nl, 1.0)
            } else {
                (nl, nr, -1.0)
            };
            // empty when nl == nr
            for j in lo..hi {
                let coef = outer * (sign(nr + j) * mx + ysign * my);
                out.add_term(re(coef), CircularState::new(nl + nr - j - 1, j));
            }
        }
        _ => {
            return Err(Sd2Error::WrongBasis {
                op: op.as_str(),
                basis: CircularState::BASIS,
            })
        }
    }
    Ok(out)
}

/// Apply `op` linearly to a sum of states.
pub fn apply_to_sum<S: FockState>(
    op: OperatorId,
    v: &StateSum<S>,
    params: &OscParams,
) -> Result<StateSum<S>> {
    let mut out = StateSum::zero();
    for (s, &coef) in v.iter() {
        out.add_scaled(coef, &s.apply(op, params)?);
    }
    Ok(out)
}

/// Apply an operator word; the rightmost operator acts first.
pub fn apply_word<S: FockState>(ops: &[OperatorId], s: S, params: &OscParams) -> Result<StateSum<S>> {
    apply_word_to_sum(ops, &StateSum::single(s), params)
}

pub fn apply_word_to_sum<S: FockState>(
    ops: &[OperatorId],
    v: &StateSum<S>,
    params: &OscParams,
) -> Result<StateSum<S>> {
    let mut cur = v.clone();
    for &op in ops.iter().rev() {
        cur = apply_to_sum(op, &cur, params)?;
    }
    Ok(cur)
}

/// Expand `|n_L, n_R>` in Cartesian states using
/// `(A+L)^n_L (A+R)^n_R |0>` and the commuting `A+x`, `A+y`.
pub fn circular_to_cartesian(s: CircularState) -> StateSum<CartesianState> {
    let mut poly: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    poly.insert((0, 0), re(1.0));
    let factors = std::iter::repeat_n(OperatorId::APlusL, s.nl)
        .chain(std::iter::repeat_n(OperatorId::APlusR, s.nr));
    for f in factors {
        let comps = f.cartesian_components();
        let mut next: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (&(a, b), &coef) in &poly {
            for &(w, cop) in &comps {
                let key = if cop == OperatorId::APlusX { (a + 1, b) } else { (a, b + 1) };
                *next.entry(key).or_insert(ZERO) += coef * w;
            }
        }
        poly = next;
    }
    StateSum::from_terms(poly.into_iter().map(|((a, b), coef)| (coef, CartesianState::new(a, b))))
}

pub fn expand_circular_sum(v: &StateSum<CircularState>) -> StateSum<CartesianState> {
    let mut out = StateSum::zero();
    for (s, &coef) in v.iter() {
        out.add_scaled(coef, &circular_to_cartesian(*s));
    }
    out
}

/// Act with a circular (or reflection) operator by rewriting it in Cartesian
/// operators and applying them to the Cartesian expansion of `s`.
pub fn conjugated_circular_action(
    op: OperatorId,
    s: CircularState,
    params: &OscParams,
) -> Result<StateSum<CartesianState>> {
    let expanded = circular_to_cartesian(s);
    let mut out = StateSum::zero();
    for (w, cop) in op.cartesian_components() {
        out.add_scaled(w, &apply_to_sum(cop, &expanded, params)?);
    }
    Ok(out)
}
