//! Exact integer matrices, Smith normal form and lattice solvers.
//!
//! Everything in this module works over `i64` with `i128` intermediates;
//! the matrices that occur in practice (holonomy actions, transfer sums,
//! kernel computations) are tiny and stay far away from overflow.

use crate::Rat;
use std::fmt;
use std::ops::{Index, IndexMut};

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)]
                        .checked_add(a.checked_mul(other[(k, j)]).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Apply the matrix to a rational vector. Entries 0 and +-1 (the common
    /// case for holonomy actions) avoid rational multiplication entirely.
    pub fn mul_rat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = crate::rat_int(0);
                for (&a, b) in self.row(i).iter().zip(v) {
                    match a {
                        0 => {}
                        1 => acc += b,
                        -1 => acc -= b,
                        _ => acc += crate::rat_int(a) * b,
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn pow(&self, k: usize) -> IntMat {
        assert_eq!(self.rows, self.cols);
        let mut out = IntMat::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMat::identity(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                    return 0;
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        i64::try_from(sign * m[n - 1][n - 1]).expect("determinant overflow")
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with a divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols)).take_while(|&i| self.d[(i, i)] != 0).count()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)]).collect()
    }
}

struct WideMat {
    rows: usize,
    cols: usize,
    a: Vec<i128>,
}

impl WideMat {
    fn from(m: &IntMat) -> Self {
        WideMat {
            rows: m.rows,
            cols: m.cols,
            a: m.data.iter().map(|&x| x as i128).collect(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut a = vec![0i128; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        WideMat { rows: n, cols: n, a }
    }

    fn get(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        if x == y {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(x * self.cols + j, y * self.cols + j);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        if x == y {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + x, i * self.cols + y);
        }
    }

    fn row_sub(&mut self, x: usize, y: usize, q: i128) {
        for j in 0..self.cols {
            let v = self.a[y * self.cols + j];
            self.a[x * self.cols + j] -= q * v;
        }
    }

    fn col_sub(&mut self, x: usize, y: usize, q: i128) {
        for i in 0..self.rows {
            let v = self.a[i * self.cols + y];
            self.a[i * self.cols + x] -= q * v;
        }
    }

    fn negate_row(&mut self, x: usize) {
        for j in 0..self.cols {
            self.a[x * self.cols + j] = -self.a[x * self.cols + j];
        }
    }

    fn narrow(&self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .a
                .iter()
                .map(|&x| i64::try_from(x).expect("smith normal form entry overflow"))
                .collect(),
        }
    }
}

/// Division rounded to nearest (ties toward zero); keeps remainders at most
/// half the pivot during elimination.
fn div_nearest(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

pub fn smith_normal_form(a: &IntMat) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = WideMat::from(a);
    let mut u = WideMat::identity(m);
    let mut v = WideMat::identity(n);

    fn eliminate(d: &mut WideMat, u: &mut WideMat, v: &mut WideMat) {
        let (m, n) = (d.rows, d.cols);
        let mut t = 0;
        'position: while t < m.min(n) {
            loop {
                // select the smallest nonzero entry of the trailing block
                let mut piv: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        let x = d.get(i, j);
                        if x != 0
                            && piv.map_or(true, |(pi, pj)| x.abs() < d.get(pi, pj).abs())
                        {
                            piv = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = piv else { break 'position };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                let pivot = d.get(t, t);
                let mut dirty = false;
                for i in t + 1..m {
                    let x = d.get(i, t);
                    if x != 0 {
                        let q = div_nearest(x, pivot);
                        if q != 0 {
                            d.row_sub(i, t, q);
                            u.row_sub(i, t, q);
                        }
                        dirty |= d.get(i, t) != 0;
                    }
                }
                for j in t + 1..n {
                    let x = d.get(t, j);
                    if x != 0 {
                        let q = div_nearest(x, pivot);
                        if q != 0 {
                            d.col_sub(j, t, q);
                            v.col_sub(j, t, q);
                        }
                        dirty |= d.get(t, j) != 0;
                    }
                }
                if !dirty {
                    let cleared = (t + 1..m).all(|i| d.get(i, t) == 0)
                        && (t + 1..n).all(|j| d.get(t, j) == 0);
                    if cleared {
                        break;
                    }
                }
            }
            t += 1;
        }
        for t in 0..m.min(n) {
            if d.get(t, t) < 0 {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
    }

    eliminate(&mut d, &mut u, &mut v);
    // Enforce the divisibility chain; each pass replaces a violating pair
    // (d_i, d_j) by (gcd, lcm), so this terminates quickly.
    let mut guard = 0;
    loop {
        let k = m.min(n);
        let bad = (0..k.saturating_sub(1))
            .find(|&i| d.get(i, i) != 0 && d.get(i + 1, i + 1) % d.get(i, i) != 0);
        let Some(i) = bad else { break };
        // col i += col i+1 puts d_{i+1} below the pivot, then re-eliminate.
        d.col_sub(i, i + 1, -1);
        v.col_sub(i, i + 1, -1);
        eliminate(&mut d, &mut u, &mut v);
        guard += 1;
        assert!(guard < 10_000, "smith normal form did not stabilize");
    }
    Snf { d: d.narrow(), u: u.narrow(), v: v.narrow() }
}

/// A particular integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMat, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let y = snf.u.mul_vec(b);
    let k = a.rows.min(a.cols);
    let mut x = vec![0i64; a.cols];
    for i in 0..a.rows {
        if i < k && snf.d[(i, i)] != 0 {
            if y[i] % snf.d[(i, i)] != 0 {
                return None;
            }
            x[i] = y[i] / snf.d[(i, i)];
        } else if y[i] != 0 {
            return None;
        }
    }
    Some(snf.v.mul_vec(&x))
}

/// Basis of the integer kernel of `a` (as column vectors).
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(a);
    let k = a.rows.min(a.cols);
    (0..a.cols)
        .filter(|&j| j >= k || snf.d[(j, j)] == 0)
        .map(|j| snf.v.col(j))
        .collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn gcd_all(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0, num_integer::gcd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn check_snf(a: &IntMat) {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.d, "u*a*v != d for\n{a}");
        assert_eq!(snf.u.det().abs(), 1);
        assert_eq!(snf.v.det().abs(), 1);
        for i in 0..a.rows {
            for j in 0..a.cols {
                if i != j {
                    assert_eq!(snf.d[(i, j)], 0);
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if w[0] != 0 {
                assert!(w[0] >= 0 && (w[1] == 0 || w[1] % w[0] == 0), "chain broken: {diag:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
    }

    #[test]
    fn snf_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let mut a = IntMat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = rng.gen_range(-6..=6);
                }
            }
            check_snf(&a);
        }
    }

    #[test]
    fn snf_known_divisors() {
        let a = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![1, 6]);
    }

    #[test]
    fn solve_against_bruteforce() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=3);
            let cols = rng.gen_range(1..=3);
            let mut a = IntMat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = rng.gen_range(-4..=4);
                }
            }
            let b: Vec<i64> = (0..rows).map(|_| rng.gen_range(-6..=6)).collect();
            let got = solve(&a, &b);
            // brute force over a window
            let mut found = false;
            let w = 9i64;
            let mut x = vec![-w; cols];
            'outer: loop {
                if a.mul_vec(&x) == b {
                    found = true;
                    break;
                }
                for i in 0..cols {
                    x[i] += 1;
                    if x[i] <= w {
                        continue 'outer;
                    }
                    x[i] = -w;
                }
                break;
            }
            match got {
                Some(sol) => assert_eq!(a.mul_vec(&sol), b),
                None => assert!(
                    !found,
                    "solver missed a solution for\n{a} b = {b:?}"
                ),
            }
        }
    }

    #[test]
    fn kernel_members_are_killed() {
        let a = IntMat::from_rows(&[vec![2, 4, 6]]);
        let basis = kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert_eq!(a.mul_vec(v), vec![0]);
        }
    }

    #[test]
    fn det_matches_cofactor_3x3() {
        let a = IntMat::from_rows(&[vec![1, 2, 3], vec![0, -1, 4], vec![2, 0, 1]]);
        // cofactor expansion by hand: 1*(-1-0) - 2*(0-8) + 3*(0+2) = -1+16+6 = 21
        assert_eq!(a.det(), 21);
    }
}
