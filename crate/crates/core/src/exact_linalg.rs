//! Exact linear algebra over a prime field or the rationals.
//!
//! Rank computations in this crate sit exactly at combinatorial thresholds, so
//! everything here is exact: no floating point appears anywhere. The default
//! scalar is a fixed 62-bit prime field (random evaluation in the spirit of
//! Schwartz–Zippel polynomial identity testing); arbitrary-precision rationals
//! are available as a slower verification path for small instances.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest prime below 2^62. Default modulus for randomized rank computation.
pub const PRIME: u64 = 4_611_686_018_427_387_847;

/// Second-largest prime below 2^62, used to cross-check ranks against an
/// independent modulus.
pub const PRIME_ALT: u64 = 4_611_686_018_427_387_817;

/// Which exact field a computation ran over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    /// Integers modulo the given prime.
    Prime(u64),
    /// Arbitrary-precision rationals.
    Rational,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// Deterministic stream of field elements. Same seed, same stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform value in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // rejection sampling over the smallest covering power of two
        let mask = bound.next_power_of_two().wrapping_sub(1);
        loop {
            let x = self.next_u64() & mask;
            if x < bound {
                return x;
            }
        }
    }

    /// Derive an independent child stream. Deterministic given the parent state.
    pub fn fork(&mut self) -> RandomSource {
        RandomSource::new(self.next_u64())
    }
}

/// Field scalar the rank-critical code is generic over.
///
/// `Zero`/`One` come from `num_traits`; `inv` returns `None` exactly on zero.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn field_spec() -> FieldSpec;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Draw a uniform-ish field element for generic-position evaluation.
    fn sample(rng: &mut RandomSource) -> Self;

    fn from_u64(x: u64) -> Self;

    fn from_i64(x: i64) -> Self {
        if x >= 0 {
            Self::from_u64(x as u64)
        } else {
            -Self::from_u64(x.unsigned_abs())
        }
    }
}

/// Element of the prime field with modulus `P`. Always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mul_raw(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, base);
            }
            base = Self::mul_raw(base, base);
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, carry) = self.0.overflowing_add(rhs.0);
        // P < 2^63, so a single reduction suffices and the carry never fires
        debug_assert!(!carry);
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(Self::mul_raw(self.0, rhs.0))
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u64> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u64> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn field_spec() -> FieldSpec {
        FieldSpec::Prime(P)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat: a^(P-2) mod P
            Some(self.pow(P - 2))
        }
    }

    fn sample(rng: &mut RandomSource) -> Self {
        Fp(rng.below(P))
    }

    fn from_u64(x: u64) -> Self {
        Fp::new(x)
    }
}

impl Scalar for BigRational {
    fn field_spec() -> FieldSpec {
        FieldSpec::Rational
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sample(rng: &mut RandomSource) -> Self {
        // 62-bit integers match the prime-field value range
        BigRational::from_integer(BigInt::from(rng.next_u64() >> 2))
    }

    fn from_u64(x: u64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (c, x) in v.iter().enumerate() {
                    acc += self.get(r, c).clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    /// Reduce in place to reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(row, c).clone() * inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let f = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c).clone() - f.clone() * self.get(row, c).clone();
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Exact rank via Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..work.cols {
            if row == work.rows {
                break;
            }
            let Some(p) = (row..work.rows).find(|&r| !work.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in col..work.cols {
                    work.data.swap(p * work.cols + c, row * work.cols + c);
                }
            }
            let inv = work.get(row, col).inv().expect("pivot is nonzero");
            for r in row + 1..work.rows {
                if !work.get(r, col).is_zero() {
                    let f = work.get(r, col).clone() * inv.clone();
                    for c in col..work.cols {
                        let v = work.get(r, c).clone() - f.clone() * work.get(row, c).clone();
                        work.set(r, c, v);
                    }
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Basis of the right null space; its size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let mut work = self.clone();
        let pivots = work.rref();
        let pivot_rows: Vec<(usize, usize)> =
            pivots.iter().copied().enumerate().map(|(r, c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.binary_search(&free).is_ok() {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for &(pc, pr) in &pivot_rows {
                v[pc] = -work.get(pr, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Draw `n * d` field elements deterministically from `rng`.
pub fn random_config<S: Scalar>(n: usize, d: usize, rng: &mut RandomSource) -> Vec<S> {
    assert!(d >= 1, "dimension must be positive");
    (0..n * d).map(|_| S::sample(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp<PRIME>;

    fn mat(rows: &[&[i64]]) -> Matrix<F> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_has_full_rank() {
        let m = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(m.rank(), 3);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m: Matrix<F> = Matrix::zero(3, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().len(), 4);
    }

    #[test]
    fn one_one_kernel() {
        let m = mat(&[&[1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        // proportional to (1, -1)
        let v = &basis[0];
        assert_eq!(v[0].clone() + v[1].clone(), F::zero());
        assert!(!v[0].is_zero());
        assert!(m.mul_vec(v).iter().all(Zero::is_zero));
    }

    #[test]
    fn kernel_vectors_are_exact() {
        let m = mat(&[&[2, 4, 6, 1], &[1, 2, 3, 0], &[0, 0, 0, 5]]);
        assert_eq!(m.rank(), 2);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_matches_transpose() {
        let mut rng = RandomSource::new(7);
        for _ in 0..10 {
            let rows = 3 + (rng.next_u64() % 4) as usize;
            let cols = 3 + (rng.next_u64() % 4) as usize;
            let m = Matrix::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| F::sample(&mut rng)).collect())
                    .collect::<Vec<Vec<F>>>(),
            );
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn field_inverse_round_trips() {
        let mut rng = RandomSource::new(3);
        for _ in 0..100 {
            let x = F::sample(&mut rng);
            if x.is_zero() {
                continue;
            }
            assert_eq!(x * x.inv().unwrap(), F::one());
        }
        assert_eq!(F::zero().inv(), None);
    }

    #[test]
    fn rational_scalar_agrees_with_prime_field_rank() {
        let rows: Vec<Vec<i64>> = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let mf = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        );
        let mq: Matrix<BigRational> = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_i64(x)).collect())
                .collect(),
        );
        assert_eq!(mf.rank(), 2);
        assert_eq!(mq.rank(), 2);
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<F> = random_config(5, 3, &mut RandomSource::new(42));
        let b: Vec<F> = random_config(5, 3, &mut RandomSource::new(42));
        assert_eq!(a, b);
        assert_eq!(a.len(), 15);
        let c: Vec<F> = random_config(0, 3, &mut RandomSource::new(42));
        assert!(c.is_empty());
    }
}
