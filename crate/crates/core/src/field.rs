use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self(p as u32))
    }

    pub fn get(self) -> u64 {
        self.0 as u64
    }

    /// Canonical residue of a signed integer.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.get()) as u32
    }

    fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.get() - b as u64) % self.get()) as u32
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.get()) as u32
    }

    fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow(a, self.get() - 2)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> Self {
        p.get()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    pub fn new(x: i64, p: Prime) -> Self {
        Self { value: p.reduce(x), p }
    }

    pub fn zero(p: Prime) -> Self {
        Self { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Self::new(1, p)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Self {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }
}

impl Add for Fp {
    type Output = Fp;

    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;

    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;

    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;

    fn neg(self) -> Fp {
        Fp {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p.0;
        }
        m
    }

    /// Builds a matrix from signed integer rows.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = p.reduce(x);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % p.0;
            }
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = self.p.reduce(value);
    }

    /// Adds `value` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, value: i64) {
        let i = r * self.cols + c;
        self.data[i] = self.p.add(self.data[i], self.p.reduce(value));
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product; panics on shape mismatch.
    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, rhs.cols);
        let modulus = p.get();
        for i in 0..self.rows {
            let mut acc = vec![0u64; rhs.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot = (*slot + a * b as u64) % modulus;
                }
            }
            for (j, v) in acc.into_iter().enumerate() {
                out.data[i * rhs.cols + j] = v as u32;
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let m = self.p.get();
        (0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                (row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m)) as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&rhs.data) {
            *a = self.p.add(*a, b);
        }
        out
    }

    pub fn sub(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&rhs.data) {
            *a = self.p.sub(*a, b);
        }
        out
    }

    pub fn trace(&self) -> Fp {
        let n = self.rows.min(self.cols);
        (0..n).fold(Fp::zero(self.p), |acc, i| {
            acc + Fp {
                value: self.get(i, i),
                p: self.p,
            }
        })
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        let cols = self.cols + rhs.cols;
        let mut out = FpMatrix::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * cols + c] = self.get(r, c);
            }
            for c in 0..rhs.cols {
                out.data[r * cols + self.cols + c] = rhs.get(r, c);
            }
        }
        out
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let modulus = p.get();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..self.cols {
                    self.data.swap(piv * self.cols + c, row * self.cols + c);
                }
            }
            let inv = p.inv(self.get(row, col));
            for c in col..self.cols {
                let i = row * self.cols + c;
                self.data[i] = p.mul(self.data[i], inv);
            }
            let pivot_row: Vec<u32> = self.data[row * self.cols..(row + 1) * self.cols].to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col) as u64;
                if f == 0 {
                    continue;
                }
                let target = &mut self.data[r * self.cols..(r + 1) * self.cols];
                for c in col..self.cols {
                    let sub = f * pivot_row[c] as u64 % modulus;
                    target[c] = ((target[c] as u64 + modulus - sub) % modulus) as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate on the shorter side
        let mut m = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        m.rref_in_place().len()
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1 % self.p.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.p.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let rhs = FpMatrix::from_columns(self.p, self.rows, &[b.to_vec()]);
        let mut aug = self.hstack(&rhs);
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Rank of the span of a set of vectors of common length `len`.
pub fn span_rank(p: Prime, len: usize, vectors: &[Vec<u32>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    FpMatrix::from_columns(p, len, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(2_147_483_647).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1 << 31).is_err());
    }

    #[test]
    fn scalar_arithmetic() {
        let q = p(7);
        let a = Fp::new(-3, q);
        assert_eq!(a.value(), 4);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((a - Fp::new(5, q)).value(), 6);
        assert_eq!((-a).value(), 3);
        assert!(Fp::zero(q).inv().is_none());
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 2
        let rows = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(FpMatrix::from_rows(p(2), &rows).rank(), 1);
        assert_eq!(FpMatrix::from_rows(p(3), &rows).rank(), 2);
    }

    #[test]
    fn solve_and_kernel() {
        let q = p(5);
        let a = FpMatrix::from_rows(q, &[vec![1, 2, 3], vec![0, 1, 4]]);
        let b = vec![1, 0];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(|&v| v == 0));
        let singular = FpMatrix::from_rows(q, &[vec![1, 1], vec![2, 2]]);
        assert!(singular.solve(&[1, 0]).is_none());
    }

    #[test]
    fn empty_shapes() {
        let q = p(3);
        assert_eq!(FpMatrix::zeros(q, 0, 4).rank(), 0);
        assert_eq!(FpMatrix::zeros(q, 3, 0).kernel().len(), 0);
        assert_eq!(FpMatrix::zeros(q, 0, 2).kernel().len(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-4i64..5, r * c)))
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, data) in small_matrix(), prime in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let rows: Vec<Vec<i64>> = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = FpMatrix::from_rows(p(prime), &rows);
            prop_assert_eq!(m.rank() + m.kernel().len(), c);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(m.rank() <= r.min(c));
        }
    }
}
