//! Exact scalar arithmetic behind a single field interface.
//!
//! Two backends are provided:
//! - [`Rationals`]: arbitrary-precision rationals, the reference backend;
//! - [`PrimeField`]: integers modulo a 31-bit prime, the fast backend.
//!
//! The backends share the [`Field`] trait, which passes the field itself
//! around as a small copyable value so that a runtime-chosen modulus needs
//! no global state. The rank of an integer matrix over F_p never exceeds
//! its rank over the rationals, so full rank modulo p certifies full
//! rational rank; this one-sided error direction is what the rank
//! certification protocol relies on.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Default modulus for the prime-field backend: the largest 31-bit prime.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A field of exact scalars, passed by value.
///
/// Implementations must be tiny `Copy` descriptors ([`Rationals`] is a unit
/// struct, [`PrimeField`] is a single `u64`), so that matrices and
/// polynomials can carry their field without overhead.
pub trait Field: Copy + Eq + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Debug + Display + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Embeds the exact rational num/den. Fails only over F_p when the
    /// denominator is divisible by p.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem, Error>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;

    /// Splits an element into a sign flag and the rendering of its
    /// magnitude, for the polynomial printer. Prime-field elements are
    /// canonical in `0..p` and never report a sign.
    fn sign_split(&self, a: &Self::Elem) -> (bool, String);

    /// Short description for reports, e.g. `"Q"` or `"F_2147483647"`.
    fn describe(&self) -> String;

    /// Reduced row echelon form computed in place on row-major data.
    ///
    /// Returns the pivot columns. Rows are left exactly reduced: pivot
    /// entries one, pivot columns otherwise zero, zero rows swept to the
    /// bottom. The default is plain Gauss-Jordan elimination, which is
    /// right for prime fields; the rational backend overrides it with
    /// fraction-free elimination to bound intermediate growth.
    fn rref_in_place(&self, rows: usize, cols: usize, data: &mut [Self::Elem]) -> Vec<usize> {
        gauss_jordan(self, rows, cols, data)
    }
}

/// Textbook exact Gauss-Jordan; shared by default implementations.
fn gauss_jordan<F: Field>(field: &F, rows: usize, cols: usize, data: &mut [F::Elem]) -> Vec<usize> {
    assert_eq!(data.len(), rows * cols);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !field.is_zero(&data[r * cols + col])) else {
            continue;
        };
        swap_rows(data, cols, pivot_row, rank);
        let inv = field
            .inv(&data[rank * cols + col])
            .expect("pivot entry is nonzero");
        for c in col..cols {
            data[rank * cols + c] = field.mul(&data[rank * cols + c], &inv);
        }
        for r in 0..rows {
            if r == rank || field.is_zero(&data[r * cols + col]) {
                continue;
            }
            let factor = data[r * cols + col].clone();
            for c in col..cols {
                let scaled = field.mul(&factor, &data[rank * cols + c]);
                data[r * cols + c] = field.sub(&data[r * cols + c], &scaled);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

fn swap_rows<E>(data: &mut [E], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..lo * cols + cols].swap_with_slice(&mut tail[..cols]);
}

/// The field of arbitrary-precision rationals.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn sign_split(&self, a: &BigRational) -> (bool, String) {
        (a.is_negative(), a.abs().to_string())
    }

    fn describe(&self) -> String {
        "Q".to_string()
    }

    /// Fraction-free elimination with a final normalization pass.
    ///
    /// Denominators are cleared per row (row scaling does not change the
    /// row space), the forward sweep runs the Bareiss recurrence on
    /// integers so every division is exact, and the reduced form is then
    /// produced by normalizing pivots and back-substituting. Keeps
    /// intermediate entries polynomially bounded instead of letting naive
    /// rational elimination compound numerators and denominators.
    fn rref_in_place(&self, rows: usize, cols: usize, data: &mut [BigRational]) -> Vec<usize> {
        assert_eq!(data.len(), rows * cols);
        let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let mut lcm = BigInt::one();
            for c in 0..cols {
                lcm = num_integer::lcm(lcm, data[r * cols + c].denom().clone());
            }
            for c in 0..cols {
                let q = &data[r * cols + c];
                m.push(q.numer() * (&lcm / q.denom()));
            }
        }

        // Forward Bareiss sweep to integer row echelon form.
        let mut pivots = Vec::new();
        let mut prev_pivot = BigInt::one();
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(pivot_row) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot_row != rank {
                for c in 0..cols {
                    m.swap(pivot_row * cols + c, rank * cols + c);
                }
            }
            let pivot = m[rank * cols + col].clone();
            for r in rank + 1..rows {
                let lead = m[r * cols + col].clone();
                for c in col..cols {
                    let num = &pivot * &m[r * cols + c] - &lead * &m[rank * cols + c];
                    m[r * cols + c] = num / &prev_pivot;
                }
            }
            prev_pivot = pivot;
            pivots.push(col);
            rank += 1;
            if rank == rows {
                break;
            }
        }

        // Normalize pivots to one and eliminate above them.
        for r in 0..rows {
            for c in 0..cols {
                data[r * cols + c] = if r < rank {
                    BigRational::from_integer(m[r * cols + c].clone())
                } else {
                    BigRational::zero()
                };
            }
        }
        for (r, &p) in pivots.iter().enumerate() {
            let inv = data[r * cols + p].recip();
            for c in p..cols {
                let v = &data[r * cols + c] * &inv;
                data[r * cols + c] = v;
            }
        }
        for (r, &p) in pivots.iter().enumerate().rev() {
            for above in 0..r {
                if data[above * cols + p].is_zero() {
                    continue;
                }
                let factor = data[above * cols + p].clone();
                for c in p..cols {
                    let scaled = &factor * &data[r * cols + c];
                    let v = &data[above * cols + c] - scaled;
                    data[above * cols + c] = v;
                }
            }
        }
        pivots
    }
}

/// The prime field F_p for a fixed odd prime `p < 2^31`.
///
/// Elements are canonical residues in `0..p` stored as `u64`; products fit
/// in `u128` without overflow.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// A prime field with the given modulus.
    ///
    /// The modulus must be an odd prime below 2^31; primality of small
    /// inputs is checked outright.
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 3 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let mut r = n % &m;
        if r.is_negative() {
            r += &m;
        }
        let digits = r.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let d = self.reduce_bigint(den);
        let inv = self
            .inv(&d)
            .ok_or_else(|| Error::DenominatorDivisibleByP(self.p))?;
        Ok(self.mul(&self.reduce_bigint(num), &inv))
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }

    fn sign_split(&self, a: &u64) -> (bool, String) {
        (false, a.to_string())
    }

    fn describe(&self) -> String {
        format!("F_{}", self.p)
    }
}
