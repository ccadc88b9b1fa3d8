//! Sparse bihomogeneous polynomials in `x0, x1, y0, y1` with the bigrading
//! `deg(xi) = (1,0)`, `deg(yi) = (0,1)`.
//!
//! A polynomial carries its bidegree as a tag even when zero, and every
//! stored term is checked against that tag; mixing bidegrees is an error,
//! never a coercion. Coefficient vectors are extracted densely on demand in
//! the canonical monomial order (exponent of `x0` descending, then exponent
//! of `y0` descending), which fixes the coordinates used by every matrix
//! downstream.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::Error;
use crate::field::Field;

/// A bidegree `(a, b)`; both components may be negative, in which case the
/// graded piece is zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
pub struct BiDegree {
    pub a: i64,
    pub b: i64,
}

impl BiDegree {
    pub fn new(a: i64, b: i64) -> Self {
        BiDegree { a, b }
    }

    /// Dimension of the graded piece `S_{a,b}`: `(a+1)(b+1)` for
    /// nonnegative bidegrees, zero otherwise.
    pub fn dim(&self) -> usize {
        if self.a < 0 || self.b < 0 {
            0
        } else {
            ((self.a + 1) * (self.b + 1)) as usize
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a >= 0 && self.b >= 0
    }

    pub fn plus(&self, other: BiDegree) -> BiDegree {
        BiDegree::new(self.a + other.a, self.b + other.b)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// One of the four coordinate variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X0,
    X1,
    Y0,
    Y1,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X0, Var::X1, Var::Y0, Var::Y1];

    pub fn name(&self) -> &'static str {
        match self {
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::Y0 => "y0",
            Var::Y1 => "y1",
        }
    }
}

/// A monomial `x0^i x1^j y0^k y1^l`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0, k: 0, l: 0 };

    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        Monomial { i, j, k, l }
    }

    pub fn degree(&self) -> BiDegree {
        BiDegree::new(self.i as i64 + self.j as i64, self.k as i64 + self.l as i64)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.i + other.i,
            self.j + other.j,
            self.k + other.k,
            self.l + other.l,
        )
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match v {
            Var::X0 => self.i,
            Var::X1 => self.j,
            Var::Y0 => self.k,
            Var::Y1 => self.l,
        }
    }

    /// Position in the canonical basis of its own graded piece.
    pub fn index(&self) -> usize {
        let d = self.degree();
        ((d.a - self.i as i64) * (d.b + 1) + (d.b - self.k as i64)) as usize
    }
}

// Canonical order: x0-exponent major descending, then y0-exponent
// descending; the remaining exponents break ties across bidegrees.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .i
            .cmp(&self.i)
            .then(other.k.cmp(&self.k))
            .then(self.j.cmp(&other.j))
            .then(self.l.cmp(&other.l))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given bidegree in canonical order; empty for
/// negative bidegrees.
pub fn monomial_basis(deg: BiDegree) -> Vec<Monomial> {
    if !deg.is_nonnegative() {
        return Vec::new();
    }
    let (a, b) = (deg.a as u32, deg.b as u32);
    let mut out = Vec::with_capacity(deg.dim());
    for i in (0..=a).rev() {
        for k in (0..=b).rev() {
            out.push(Monomial::new(i, a - i, k, b - k));
        }
    }
    out
}

/// A sparse bihomogeneous polynomial of a fixed bidegree.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly<F: Field> {
    field: F,
    degree: BiDegree,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> BiPoly<F> {
    pub fn zero(field: F, degree: BiDegree) -> Self {
        BiPoly {
            field,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from term pairs, merging duplicates and
    /// dropping zero coefficients. Every monomial must match `degree`.
    pub fn from_terms(
        field: F,
        degree: BiDegree,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Result<Self, Error> {
        let mut map: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::BidegreeConflict {
                    left: m.degree(),
                    right: degree,
                });
            }
            let entry = map.entry(m).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Ok(BiPoly {
            field,
            degree,
            terms: map,
        })
    }

    pub fn monomial(field: F, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, field.one());
        BiPoly {
            field,
            degree: m.degree(),
            terms,
        }
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn degree(&self) -> BiDegree {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Dense coefficient vector in the canonical monomial order; its
    /// length is the dimension of the graded piece.
    pub fn coeff_vector(&self) -> Vec<F::Elem> {
        let mut out = vec![self.field.zero(); self.degree.dim()];
        for (m, c) in &self.terms {
            out[m.index()] = c.clone();
        }
        out
    }

    /// Reconstructs a polynomial from a dense coefficient vector.
    pub fn from_coeff_vector(field: F, degree: BiDegree, v: &[F::Elem]) -> Result<Self, Error> {
        if v.len() != degree.dim() {
            return Err(Error::AmbientMismatch {
                expected: degree.dim(),
                found: v.len(),
            });
        }
        let basis = monomial_basis(degree);
        BiPoly::from_terms(
            field,
            degree,
            basis.into_iter().zip(v.iter().cloned()),
        )
    }

    pub fn add(&self, other: &BiPoly<F>) -> Result<BiPoly<F>, Error> {
        if self.degree != other.degree {
            return Err(Error::BidegreeConflict {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(|| self.field.zero());
            *entry = self.field.add(entry, c);
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        Ok(BiPoly {
            field: self.field,
            degree: self.degree,
            terms,
        })
    }

    pub fn sub(&self, other: &BiPoly<F>) -> Result<BiPoly<F>, Error> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &F::Elem) -> BiPoly<F> {
        let f = self.field;
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let w = f.mul(v, c);
            if !f.is_zero(&w) {
                terms.insert(*m, w);
            }
        }
        BiPoly {
            field: f,
            degree: self.degree,
            terms,
        }
    }

    /// Product of two polynomials; bidegrees add.
    pub fn mul(&self, other: &BiPoly<F>) -> BiPoly<F> {
        let f = self.field;
        let degree = self.degree.plus(other.degree);
        let mut terms: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.times(m2);
                let c = f.mul(c1, c2);
                let entry = terms.entry(m).or_insert_with(|| f.zero());
                *entry = f.add(entry, &c);
            }
        }
        terms.retain(|_, c| !f.is_zero(c));
        BiPoly {
            field: f,
            degree,
            terms,
        }
    }

    /// Product with a single monomial, shifting exponents.
    pub fn mul_monomial(&self, m: &Monomial) -> BiPoly<F> {
        let degree = self.degree.plus(m.degree());
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.times(m), c.clone()))
            .collect();
        BiPoly {
            field: self.field,
            degree,
            terms,
        }
    }

    /// Formal partial derivative; the bidegree drops by `(1,0)` for the
    /// `x` variables and `(0,1)` for the `y` variables.
    pub fn partial(&self, v: Var) -> BiPoly<F> {
        let f = self.field;
        let degree = match v {
            Var::X0 | Var::X1 => BiDegree::new(self.degree.a - 1, self.degree.b),
            Var::Y0 | Var::Y1 => BiDegree::new(self.degree.a, self.degree.b - 1),
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let dropped = match v {
                Var::X0 => Monomial::new(m.i - 1, m.j, m.k, m.l),
                Var::X1 => Monomial::new(m.i, m.j - 1, m.k, m.l),
                Var::Y0 => Monomial::new(m.i, m.j, m.k - 1, m.l),
                Var::Y1 => Monomial::new(m.i, m.j, m.k, m.l - 1),
            };
            let coeff = f.mul(c, &f.from_i64(e as i64));
            if !f.is_zero(&coeff) {
                terms.insert(dropped, coeff);
            }
        }
        BiPoly {
            field: f,
            degree,
            terms,
        }
    }

    /// Evaluates at a point given by the four coordinate values.
    pub fn eval(&self, point: &[F::Elem; 4]) -> F::Elem {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, exp) in [
                (&point[0], m.i),
                (&point[1], m.j),
                (&point[2], m.k),
                (&point[3], m.l),
            ] {
                for _ in 0..exp {
                    term = f.mul(&term, v);
                }
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// A seeded random polynomial with integer coefficients drawn
    /// uniformly from `[-height, height]`, one draw per canonical basis
    /// monomial. The draws depend only on `(deg, seed, height)`, so the
    /// result is reproducible across platforms and thread counts, and the
    /// same seed selects the same polynomial over every backend.
    pub fn random(field: F, deg: BiDegree, seed: u64, height: i64) -> BiPoly<F> {
        let draws = random_integers(deg.dim(), seed, height);
        let terms = monomial_basis(deg)
            .into_iter()
            .zip(draws)
            .filter_map(|(m, c)| {
                if c == 0 {
                    None
                } else {
                    Some((m, field.from_i64(c)))
                }
            });
        BiPoly::from_terms(field, deg, terms.collect::<Vec<_>>()).expect("basis monomials match the degree")
    }
}

/// `n` integers uniform in `[-height, height]` from the deterministic
/// generator; the shared coefficient-drawing primitive.
pub fn random_integers(n: usize, seed: u64, height: i64) -> Vec<i64> {
    assert!(height >= 0, "height must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 2 * height as u64 + 1;
    (0..n).map(|_| (rng.next_u64() % span) as i64 - height).collect()
}

/// The two Euler defects of a bihomogeneous polynomial of bidegree
/// `(d, e)`:
///
/// `x0*dF/dx0 + x1*dF/dx1 - d*F` and `y0*dF/dy0 + y1*dF/dy1 - e*F`.
///
/// Both are identically zero for every bihomogeneous input; a nonzero
/// defect means corrupted arithmetic.
pub fn euler_defect<F: Field>(p: &BiPoly<F>) -> (BiPoly<F>, BiPoly<F>) {
    let f = p.field();
    let deg = p.degree();
    let x_side = p
        .partial(Var::X0)
        .mul_monomial(&Monomial::new(1, 0, 0, 0))
        .add(&p.partial(Var::X1).mul_monomial(&Monomial::new(0, 1, 0, 0)))
        .and_then(|s| s.sub(&p.scale(&f.from_i64(deg.a))))
        .expect("all summands share the bidegree");
    let y_side = p
        .partial(Var::Y0)
        .mul_monomial(&Monomial::new(0, 0, 1, 0))
        .add(&p.partial(Var::Y1).mul_monomial(&Monomial::new(0, 0, 0, 1)))
        .and_then(|s| s.sub(&p.scale(&f.from_i64(deg.b))))
        .expect("all summands share the bidegree");
    (x_side, y_side)
}

impl<F: Field> fmt::Display for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = self.field.sign_split(c);
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for v in Var::ALL {
                let e = m.exponent(v);
                match e {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    _ => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            let coeff_is_one = mag == "1";
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if coeff_is_one {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
