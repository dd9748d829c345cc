//! Dense integer matrices and Smith normal form.
//!
//! Smith form is the computational backbone of the group-theoretic half of
//! the crate: canonical decompositions, subgroup lattices, annihilators and
//! torus-valued linear systems all reduce to it. Matrices stay small (rank
//! at most a handful), so a dense `i128` representation with full transform
//! tracking is the right trade-off.

use crate::rat::{fract_mod1, Rat};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(cols: Vec<Vec<i128>>, rows: usize) -> Self {
        let c = cols.len();
        let mut m = IntMat::zero(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<i128> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                let swap = (k + 1..n).find(|&i| a[(i, k)] != 0);
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            let t = a[(k, j)];
                            a[(k, j)] = a[(i, j)];
                            a[(i, j)] = t;
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
                a[(i, k)] = 0;
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U A V = D` with unimodular `U`, `V` and diagonal `D`
/// whose nonzero entries are positive and satisfy `d_1 | d_2 | ...`.
pub struct SmithForm {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// The diagonal entries, including trailing zeros.
    pub fn diagonal(&self) -> Vec<i128> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

/// Rounded division: quotient `q` minimizing `|a - q b|`.
fn div_round(a: i128, b: i128) -> i128 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r > 0) == (b > 0) { 1 } else { -1 }
    } else {
        q
    }
}

pub fn smith_normal_form(a: &IntMat) -> SmithForm {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);

    let swap_rows = |d: &mut IntMat, u: &mut IntMat, i: usize, j: usize| {
        for c in 0..n {
            let t = d[(i, c)];
            d[(i, c)] = d[(j, c)];
            d[(j, c)] = t;
        }
        for c in 0..m {
            let t = u[(i, c)];
            u[(i, c)] = u[(j, c)];
            u[(j, c)] = t;
        }
    };
    let swap_cols = |d: &mut IntMat, v: &mut IntMat, i: usize, j: usize| {
        for r in 0..m {
            let t = d[(r, i)];
            d[(r, i)] = d[(r, j)];
            d[(r, j)] = t;
        }
        for r in 0..n {
            let t = v[(r, i)];
            v[(r, i)] = v[(r, j)];
            v[(r, j)] = t;
        }
    };
    // row_i -= q * row_j, col_i -= q * col_j
    let add_row = |d: &mut IntMat, u: &mut IntMat, i: usize, j: usize, q: i128| {
        for c in 0..n {
            d[(i, c)] -= q * d[(j, c)];
        }
        for c in 0..m {
            u[(i, c)] -= q * u[(j, c)];
        }
    };
    let add_col = |d: &mut IntMat, v: &mut IntMat, i: usize, j: usize, q: i128| {
        for r in 0..m {
            d[(r, i)] -= q * d[(r, j)];
        }
        for r in 0..n {
            v[(r, i)] -= q * v[(r, j)];
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // pivot: entry of least absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)] != 0
                    && pivot.map_or(true, |(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut d, &mut u, pi, t);
        }
        if pj != t {
            swap_cols(&mut d, &mut v, pj, t);
        }

        // clear row and column t; restart pivot selection whenever a
        // remainder smaller than the pivot shows up
        let mut dirty = false;
        for i in t + 1..m {
            if d[(i, t)] != 0 {
                let q = div_round(d[(i, t)], d[(t, t)]);
                add_row(&mut d, &mut u, i, t, q);
                if d[(i, t)] != 0 {
                    dirty = true;
                }
            }
        }
        for j in t + 1..n {
            if d[(t, j)] != 0 {
                let q = div_round(d[(t, j)], d[(t, t)]);
                add_col(&mut d, &mut v, j, t, q);
                if d[(t, j)] != 0 {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }

        // pivot must divide every entry of the trailing block
        let mut fixed = true;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if d[(i, j)] % d[(t, t)] != 0 {
                    add_row(&mut d, &mut u, t, i, -1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }

        if d[(t, t)] < 0 {
            for c in 0..n {
                d[(t, c)] = -d[(t, c)];
            }
            for c in 0..m {
                u[(t, c)] = -u[(t, c)];
            }
        }
        t += 1;
    }

    debug_assert_eq!(u.mul(a).mul(&v), d);
    SmithForm { d, u, v }
}

/// Solves `A x = b` over the integers, if possible.
pub fn solve_diophantine(a: &IntMat, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![0i128; a.cols()];
    for (i, &ci) in c.iter().enumerate() {
        let di = diag.get(i).copied().unwrap_or(0);
        if di == 0 {
            if ci != 0 {
                return None;
            }
        } else {
            if ci % di != 0 {
                return None;
            }
            y[i] = ci / di;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Basis of the integer kernel lattice `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<i128>> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    (0..a.cols())
        .filter(|&j| diag.get(j).copied().unwrap_or(0) == 0)
        .map(|j| snf.v.col(j))
        .collect()
}

/// Solution of `A x = b (mod 1)` over the rational torus.
pub struct TorusSolution {
    /// One particular solution, entries in `[0, 1)`.
    pub particular: Vec<Rat>,
    /// Generators of the torsion part of the homogeneous solution group,
    /// with their orders.
    pub torsion: Vec<(Vec<Rat>, i128)>,
    /// Directions along which solutions are free (a full circle each).
    pub free: Vec<Vec<i128>>,
}

/// Witness that `A x = b (mod 1)` has no solution: an integer functional
/// `lambda` with `lambda A = 0` while `lambda . b` is not an integer.
pub struct TorusObstruction {
    pub functional: Vec<i128>,
}

pub fn solve_mod1(a: &IntMat, b: &[Rat]) -> Result<TorusSolution, TorusObstruction> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let c: Vec<Rat> = (0..a.rows())
        .map(|i| (0..a.rows()).map(|j| Rat::from_integer(snf.u[(i, j)]) * b[j]).sum())
        .collect();

    let mut y = vec![Rat::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = diag.get(i).copied().unwrap_or(0);
        if di == 0 {
            if !ci.is_integer() {
                return Err(TorusObstruction {
                    functional: snf.u.row(i),
                });
            }
        } else {
            y[i] = ci / Rat::from_integer(di);
        }
    }

    let particular: Vec<Rat> = (0..a.cols())
        .map(|i| {
            fract_mod1(
                (0..a.cols())
                    .map(|j| Rat::from_integer(snf.v[(i, j)]) * y[j])
                    .sum(),
            )
        })
        .collect();

    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for j in 0..a.cols() {
        let dj = diag.get(j).copied().unwrap_or(0);
        if dj == 0 {
            free.push(snf.v.col(j));
        } else if dj > 1 {
            let gen: Vec<Rat> = (0..a.cols())
                .map(|i| fract_mod1(Rat::new(snf.v[(i, j)], dj)))
                .collect();
            torsion.push((gen, dj));
        }
    }

    Ok(TorusSolution {
        particular,
        torsion,
        free,
    })
}
