//! Exact arithmetic and linear algebra over the prime field 𝔽_p.
//!
//! The modulus is a runtime value. Only odd primes below 2³¹ are accepted, so
//! every product of two residues fits in a `u64` before reduction.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// An odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.0 - b)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.0),
            "zero has no inverse mod {}",
            self.0
        );
        self.pow(a, self.0 as u64 - 2)
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce(self, n: i64) -> u32 {
        n.rem_euclid(self.0 as i64) as u32
    }

    pub fn element(self, n: i64) -> Fp {
        Fp {
            value: self.reduce(n),
            prime: self,
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    prime: Prime,
}

impl Fp {
    pub fn new(value: i64, prime: Prime) -> Self {
        prime.element(value)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.prime
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Fp> {
        (!self.is_zero()).then(|| Fp {
            value: self.prime.inv(self.value),
            prime: self.prime,
        })
    }

    fn same_field(self, other: Fp) -> Prime {
        assert_eq!(
            self.prime, other.prime,
            "arithmetic between different prime fields"
        );
        self.prime
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let p = self.same_field(rhs);
        Fp {
            value: p.add(self.value, rhs.value),
            prime: p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let p = self.same_field(rhs);
        Fp {
            value: p.sub(self.value, rhs.value),
            prime: p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let p = self.same_field(rhs);
        Fp {
            value: p.mul(self.value, rhs.value),
            prime: p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.prime.neg(self.value),
            prime: self.prime,
        }
    }
}

/// Dense matrix over 𝔽_p, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            prime,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_integers(prime: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("rows have different lengths".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| prime.reduce(v)))
            .collect();
        Ok(FpMatrix {
            prime,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from field elements. All entries must share one modulus.
    pub fn from_entries(rows: &[Vec<Fp>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("rows have different lengths".into()));
        }
        let mut entries = rows.iter().flatten();
        let Some(first) = entries.next() else {
            return Err(Error::InvalidInput(
                "cannot infer the modulus of an empty matrix".into(),
            ));
        };
        let prime = first.prime();
        if let Some(bad) = entries.find(|e| e.prime() != prime) {
            return Err(Error::InvalidInput(format!(
                "mismatched moduli: {} and {}",
                prime,
                bad.prime()
            )));
        }
        Ok(FpMatrix {
            prime,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|e| e.value()).collect(),
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Fp {
        Fp {
            value: self.data[row * self.cols + col],
            prime: self.prime,
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: Fp) {
        assert_eq!(value.prime(), self.prime);
        self.data[row * self.cols + col] = value.value();
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.prime, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn scale_row(&mut self, row: usize, by: Fp) {
        assert_eq!(by.prime(), self.prime);
        let p = self.prime;
        for v in &mut self.data[row * self.cols..(row + 1) * self.cols] {
            *v = p.mul(*v, by.value());
        }
    }

    /// Reduced row-echelon form. Pivots are 1 and pivot columns strictly increase.
    pub fn rref(&self) -> FpMatrix {
        let mut m = self.clone();
        m.reduce_in_place();
        m
    }

    pub fn rank(&self) -> usize {
        self.rref_pivots().len()
    }

    /// Pivot columns of the reduced row-echelon form.
    pub fn rref_pivots(&self) -> Vec<usize> {
        self.clone().reduce_in_place()
    }

    fn reduce_in_place(&mut self) -> Vec<usize> {
        let p = self.prime;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..cols {
            if next == self.rows {
                break;
            }
            let Some(found) = (next..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            self.swap_rows(next, found);
            let inv = p.inv(self.data[next * cols + col]);
            for v in &mut self.data[next * cols..(next + 1) * cols] {
                *v = p.mul(*v, inv);
            }
            for r in 0..self.rows {
                if r == next {
                    continue;
                }
                let factor = self.data[r * cols + col];
                if factor == 0 {
                    continue;
                }
                let neg = p.neg(factor);
                for c in col..cols {
                    let pv = self.data[next * cols + c];
                    if pv != 0 {
                        let cur = self.data[r * cols + c];
                        self.data[r * cols + c] = p.add(cur, p.mul(neg, pv));
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }
}

/// A sparse row: `(column, nonzero value)` pairs sorted by column.
pub type SparseRow = Vec<(usize, u32)>;

/// Incremental row echelon form over sparse rows.
///
/// Rows are reduced against the stored pivots as they arrive; only
/// independent rows are kept. The resulting rank is the rank of the dense
/// matrix formed by all inserted rows.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    prime: Prime,
    pivots: HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(prime: Prime) -> Self {
        SparseEchelon {
            prime,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` and stores it if it is independent. Returns whether the
    /// rank increased.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        let p = self.prime;
        row.retain(|&(_, v)| v % p.get() != 0);
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        // Only the leading entry is eliminated each step, so stored pivot rows
        // are in echelon (not reduced) form.
        while let Some(&(lead, value)) = row.first() {
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    row = axpy(p, &row, p.neg(value), pivot);
                }
                None => {
                    let inv = p.inv(value);
                    for (_, v) in &mut row {
                        *v = p.mul(*v, inv);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }
}

/// `a + s * b` for sparse rows, where `b` has leading coefficient 1.
fn axpy(p: Prime, a: &[(usize, u32)], s: u32, b: &[(usize, u32)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, p.mul(s, b[j].1)));
            j += 1;
        } else {
            let v = p.add(a[i].1, p.mul(s, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(7919).is_ok());
        assert_eq!(Prime::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(Prime::new(9), Err(Error::NotOddPrime(9)));
        assert_eq!(Prime::new(1), Err(Error::NotOddPrime(1)));
    }

    #[test]
    fn scalar_arithmetic() {
        let p = Prime::new(5).unwrap();
        let a = Fp::new(3, p);
        let b = Fp::new(-1, p);
        assert_eq!(b.value(), 4);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a * b).value(), 2);
        assert_eq!((a - b).value(), 4);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert!(Fp::new(10, p).inv().is_none());
    }

    #[test]
    fn rank_examples() {
        let p = f3();
        assert_eq!(FpMatrix::identity(p, 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(p, 2, 4).rank(), 0);
        let m = FpMatrix::from_integers(p, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_examples() {
        let p = f3();
        let id = FpMatrix::identity(p, 3);
        assert_eq!(id.rref(), id);
        let two = FpMatrix::from_integers(p, &[vec![2]]).unwrap();
        assert_eq!(two.rref(), FpMatrix::from_integers(p, &[vec![1]]).unwrap());
        let m = FpMatrix::from_integers(p, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(
            m.rref(),
            FpMatrix::from_integers(p, &[vec![1, 2], vec![0, 0]]).unwrap()
        );
    }

    #[test]
    fn rank_does_not_modify_input() {
        let p = f3();
        let m = FpMatrix::from_integers(p, &[vec![2, 1], vec![1, 2]]).unwrap();
        let before = m.clone();
        let _ = m.rank();
        assert_eq!(m, before);
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let a = Fp::new(1, Prime::new(3).unwrap());
        let b = Fp::new(1, Prime::new(5).unwrap());
        let err = FpMatrix::from_entries(&[vec![a, b]]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = FpMatrix::from_integers(f3(), &[vec![1, 2], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let p = Prime::new(5).unwrap();
        let rows = vec![
            vec![1, 2, 0, 4],
            vec![2, 4, 0, 3],
            vec![0, 0, 3, 1],
            vec![1, 2, 3, 0],
        ];
        let dense = FpMatrix::from_integers(p, &rows).unwrap();
        let mut sparse = SparseEchelon::new(p);
        for r in &rows {
            let row = r
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, p.reduce(v)))
                .collect();
            sparse.insert(row);
        }
        assert_eq!(sparse.rank(), dense.rank());
    }
}
