//! Closed-form matrix layouts written out entry by entry. They are an
//! independent route to the same matrices that [`super::build_cartesian`]
//! and [`super::build_circular`] obtain from Fock actions.

use crate::numerics::{c, re, DenseMatrix, C64};
use crate::params::{OscParams, Parity};
use crate::specfun::mu_number;

use super::block_range;

/// `(J1, J2, J3, Rx, Ry)` on `v_n` from the module actions.
pub fn cartesian(p: &OscParams) -> [DenseMatrix; 5] {
    let n = p.n;
    let d = p.dim();
    let mut j1 = DenseMatrix::zeros(d, d);
    let mut j2 = DenseMatrix::zeros(d, d);
    let mut j3 = DenseMatrix::zeros(d, d);
    let mut rx = DenseMatrix::zeros(d, d);
    let mut ry = DenseMatrix::zeros(d, d);
    for col in 0..=n {
        if col < n {
            let up = mu_number(n - col, p.mu_y) / 2.0;
            j1[(col + 1, col)] = re(up);
            j2[(col + 1, col)] = c(0.0, -up);
        }
        if col > 0 {
            let down = mu_number(col, p.mu_x) / 2.0;
            j1[(col - 1, col)] = re(down);
            j2[(col - 1, col)] = c(0.0, down);
        }
        j3[(col, col)] = re(col as f64 + (p.xi() - n as f64) / 2.0);
        rx[(col, col)] = re(if col % 2 == 0 { 1.0 } else { -1.0 });
        ry[(col, col)] = re(if (n - col).is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    [j1, j2, j3, rx, ry]
}

/// Tridiagonal `J3` on `f_n = |n, N-n>`.
pub fn j3_b1(p: &OscParams) -> DenseMatrix {
    let n = p.n;
    DenseMatrix::from_fn(p.dim(), p.dim(), |i, j| {
        if i == j {
            re(p.xi() / 2.0)
        } else if i == j + 1 {
            re((n - j) as f64 / 2.0)
        } else if j == i + 1 {
            re(j as f64 / 2.0)
        } else {
            re(0.0)
        }
    })
}

type Block = [[C64; 2]; 2];

fn realb(a: f64, b: f64, cc: f64, d: f64) -> Block {
    [[re(a), re(b)], [re(cc), re(d)]]
}

fn put(m: &mut DenseMatrix, n: usize, bi: usize, bj: usize, b: &Block) {
    let (ri, rj) = (block_range(n, bi), block_range(n, bj));
    for (a, i) in ri.enumerate() {
        for (bb, j) in rj.clone().enumerate() {
            m[(i, j)] = b[a][bb];
        }
    }
}

fn put_top_row(m: &mut DenseMatrix, n: usize, bj: usize, row: [C64; 2]) {
    for (bb, j) in block_range(n, bj).enumerate() {
        m[(0, j)] = row[bb];
    }
}

/// Block upper-triangular `J2` in `B2`.
pub fn j2_b2(p: &OscParams) -> DenseMatrix {
    let (z, xi) = (p.zeta(), p.xi());
    let n = p.n;
    let mut m = DenseMatrix::zeros(p.dim(), p.dim());
    match p.parity() {
        Parity::Even => {
            let mm = n / 2;
            let omega = |k: usize| {
                if k % 2 == 1 {
                    realb(-xi, xi, -xi, xi)
                } else {
                    realb(z, -z, z, -z)
                }
            };
            for k in 1..=mm {
                let kf = k as f64;
                put(&mut m, n, k, k, &realb(kf + z / 2.0, -z / 2.0, z / 2.0, -kf - z / 2.0));
                put_top_row(&mut m, n, k, omega(k)[1]);
                for j in k + 1..=mm {
                    put(&mut m, n, k, j, &omega(j - k));
                }
            }
        }
        Parity::Odd => {
            let mm = (n - 1) / 2;
            let omega = |k: usize| {
                if k % 2 == 1 {
                    realb(-xi, -z, z, xi)
                } else {
                    realb(z, xi, -xi, -z)
                }
            };
            for k in 0..=mm {
                let s = (2.0 * k as f64 + 1.0 + z) / 2.0;
                put(&mut m, n, k, k, &realb(s, xi / 2.0, -xi / 2.0, -s));
                for j in k + 1..=mm {
                    put(&mut m, n, k, j, &omega(j - k));
                }
            }
        }
    }
    m
}

/// Reflections in `B2`: `Rx = Ry = diag(1, s1, ...)` for even `N`,
/// `Ry = -Rx = diag(s1, ...)` for odd `N`.
pub fn reflections_b2(p: &OscParams) -> (DenseMatrix, DenseMatrix) {
    let n = p.n;
    let mut ry = DenseMatrix::zeros(p.dim(), p.dim());
    let s1 = realb(0.0, 1.0, 1.0, 0.0);
    let (first, last) = match p.parity() {
        Parity::Even => {
            ry[(0, 0)] = re(1.0);
            (1, n / 2)
        }
        Parity::Odd => (0, (n - 1) / 2),
    };
    for k in first..=last {
        put(&mut ry, n, k, k, &s1);
    }
    let rx = match p.parity() {
        Parity::Even => ry.clone(),
        Parity::Odd => ry.scale(re(-1.0)),
    };
    (rx, ry)
}

/// Block upper-triangular `Q` in `B2`.
pub fn q_b2(p: &OscParams) -> DenseMatrix {
    let (z, xi) = (p.zeta(), p.xi());
    let n = p.n;
    let mut m = DenseMatrix::zeros(p.dim(), p.dim());
    match p.parity() {
        Parity::Even => {
            let mm = n / 2;
            m[(0, 0)] = re(-z - 0.5);
            let delta = |k: usize| -> Block {
                if k % 2 == 1 {
                    [[c(0.0, -2.0 * xi), c(0.0, 2.0 * xi)], [c(0.0, -2.0 * xi), c(0.0, 2.0 * xi)]]
                } else {
                    [[c(0.0, 2.0 * z), c(0.0, -2.0 * z)], [c(0.0, 2.0 * z), c(0.0, -2.0 * z)]]
                }
            };
            for k in 1..=mm {
                let kf = k as f64;
                let phi = [
                    [c(-0.5, z), c(-z, -2.0 * kf - z)],
                    [c(-z, 2.0 * kf + z), c(-0.5, -z)],
                ];
                put(&mut m, n, k, k, &phi);
                put_top_row(&mut m, n, k, delta(k)[1]);
                for j in k + 1..=mm {
                    put(&mut m, n, k, j, &delta(j - k));
                }
            }
        }
        Parity::Odd => {
            let mm = (n - 1) / 2;
            let delta = |k: usize| -> Block {
                if k % 2 == 1 {
                    [[c(0.0, -2.0 * z), c(0.0, -2.0 * xi)], [c(0.0, 2.0 * xi), c(0.0, 2.0 * z)]]
                } else {
                    [[c(0.0, 2.0 * xi), c(0.0, 2.0 * z)], [c(0.0, -2.0 * z), c(0.0, -2.0 * xi)]]
                }
            };
            for k in 0..=mm {
                let s = 2.0 * k as f64 + z + 1.0;
                let phi = [[c(0.5, xi), c(-xi, s)], [c(-xi, -s), c(0.5, -xi)]];
                put(&mut m, n, k, k, &phi);
                for j in k + 1..=mm {
                    put(&mut m, n, k, j, &delta(j - k));
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmat::{build_cartesian, build_circular, BasisOrdering};

    const GRID: [f64; 5] = [-0.4, 0.0, 0.3, 0.7, 1.5];

    fn each_point(mut f: impl FnMut(OscParams)) {
        for n in 0..=9 {
            for &mx in &GRID {
                for &my in &GRID {
                    f(OscParams::new(n, mx, my).unwrap());
                }
            }
        }
    }

    #[test]
    fn cartesian_layout_matches_fock_build() {
        each_point(|p| {
            let g = build_cartesian(&p).unwrap();
            let [j1, j2, j3, rx, ry] = cartesian(&p);
            for (a, b) in [(&g.j1, j1), (&g.j2, j2), (&g.j3, j3), (&g.rx, rx), (&g.ry, ry)] {
                assert!((a - &b).max_abs() < 1e-13, "{p:?}");
            }
        });
    }

    #[test]
    fn b1_j3_matches_fock_build() {
        each_point(|p| {
            let g = build_circular(&p, BasisOrdering::CircularB1).unwrap();
            assert!((&g.j3 - &j3_b1(&p)).max_abs() < 1e-13, "{p:?}");
        });
    }

    #[test]
    fn b2_layouts_match_fock_build() {
        each_point(|p| {
            if p.n == 0 {
                return;
            }
            let g = build_circular(&p, BasisOrdering::CircularB2).unwrap();
            assert!((&g.j2 - &j2_b2(&p)).max_abs() < 1e-13, "J2 {p:?}");
            let (rx, ry) = reflections_b2(&p);
            assert_eq!(g.rx, rx, "Rx {p:?}");
            assert_eq!(g.ry, ry, "Ry {p:?}");
            assert!((&g.q_operator() - &q_b2(&p)).max_abs() < 1e-12, "Q {p:?}");
        });
    }
}
