//! Graded pieces of the Jacobian ideal and ring of a curve on the quadric
//! surface.
//!
//! For a curve `Z = {F = 0}` with `F` bihomogeneous of bidegree `(d, e)`,
//! the piece `J_{a,b}` of the Jacobian ideal is spanned by the products of
//! the four partial derivatives of `F` with all monomials of the right
//! bidegree: multipliers in `S_{a-d+1,b-e}` for the `x`-partials and in
//! `S_{a-d,b-e+1}` for the `y`-partials. The quotient `R_{a,b} =
//! S_{a,b}/J_{a,b}` is represented by the non-pivot monomials of the
//! reduced basis.
//!
//! The same module certifies smoothness (a graded piece where the ideal
//! fills the whole space rules out a common zero of the partials over the
//! algebraic closure) and measures lengths of finite base schemes by
//! Hilbert-function stabilization.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::bipoly::{monomial_basis, BiDegree, BiPoly, Var};
use crate::error::Error;
use crate::field::Field;
use crate::linalg::{span, Subspace};

/// A bidegree piece of the Jacobian ideal and its quotient.
#[derive(Clone, Debug)]
pub struct QuotientPiece<F: Field> {
    pub degree: BiDegree,
    pub ideal: Subspace<F>,
    /// Indices (into the canonical monomial basis) of the quotient
    /// representatives.
    pub reps: Vec<usize>,
}

impl<F: Field> QuotientPiece<F> {
    pub fn dim_space(&self) -> usize {
        self.degree.dim()
    }

    pub fn dim_ideal(&self) -> usize {
        self.ideal.dim()
    }

    pub fn dim_ring(&self) -> usize {
        self.dim_space() - self.dim_ideal()
    }

    /// Coordinates of a polynomial of this bidegree in the quotient.
    pub fn reduce(&self, p: &BiPoly<F>) -> Result<Vec<F::Elem>, Error> {
        if p.degree() != self.degree {
            return Err(Error::BidegreeConflict {
                left: p.degree(),
                right: self.degree,
            });
        }
        self.ideal.quotient_coords(&p.coeff_vector())
    }
}

/// Outcome of the smoothness certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SmoothnessVerdict {
    /// Some graded piece of the ideal equals the whole space, so the four
    /// partials have no common zero over the algebraic closure.
    CertifiedSmooth {
        at: BiDegree,
        trace: Vec<EscalationStep>,
    },
    /// A common zero of the four partials was found outright.
    SingularWitnessed { point: String },
    /// No certificate up to the cap; says nothing either way.
    Undecided { trace: Vec<EscalationStep> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EscalationStep {
    pub degree: BiDegree,
    pub dim_ideal: usize,
    pub dim_space: usize,
}

impl SmoothnessVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SmoothnessVerdict::CertifiedSmooth { .. })
    }
}

/// A fixed curve datum: the section, its partials, and a memo table of
/// Jacobian pieces.
///
/// The context is immutable after construction except for the piece cache,
/// which behaves as a concurrent memo table: simultaneous computations of
/// the same piece may race, but they produce identical canonical results,
/// so either write may win.
pub struct CurveContext<F: Field> {
    field: F,
    f: BiPoly<F>,
    partials: [BiPoly<F>; 4],
    pieces: Mutex<BTreeMap<BiDegree, Arc<QuotientPiece<F>>>>,
    smooth: Mutex<Option<(BiDegree, SmoothnessVerdict)>>,
}

impl<F: Field> CurveContext<F> {
    pub fn new(f: BiPoly<F>) -> Result<Self, Error> {
        if f.is_zero() {
            return Err(Error::InvalidCurve("the section is zero".into()));
        }
        let deg = f.degree();
        if deg.a < 1 || deg.b < 1 {
            return Err(Error::InvalidCurve(format!(
                "bidegree {deg} must be at least (1,1)"
            )));
        }
        let partials = [
            f.partial(Var::X0),
            f.partial(Var::X1),
            f.partial(Var::Y0),
            f.partial(Var::Y1),
        ];
        Ok(CurveContext {
            field: f.field(),
            f,
            partials,
            pieces: Mutex::new(BTreeMap::new()),
            smooth: Mutex::new(None),
        })
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn curve(&self) -> &BiPoly<F> {
        &self.f
    }

    pub fn d(&self) -> i64 {
        self.f.degree().a
    }

    pub fn e(&self) -> i64 {
        self.f.degree().b
    }

    /// Genus of the smooth curve: `(d-1)(e-1)`.
    pub fn genus(&self) -> usize {
        ((self.d() - 1) * (self.e() - 1)) as usize
    }

    pub fn partial(&self, v: Var) -> &BiPoly<F> {
        match v {
            Var::X0 => &self.partials[0],
            Var::X1 => &self.partials[1],
            Var::Y0 => &self.partials[2],
            Var::Y1 => &self.partials[3],
        }
    }

    /// Coefficient vectors of all monomial multiples of the four partials
    /// landing in `S_{a,b}`, in a fixed order: the `x0`-partial multiples
    /// first (multipliers in canonical order), then `x1`, `y0`, `y1`.
    pub fn jacobian_generators(&self, deg: BiDegree) -> Vec<Vec<F::Elem>> {
        let (d, e) = (self.d(), self.e());
        let x_multipliers = monomial_basis(BiDegree::new(deg.a - d + 1, deg.b - e));
        let y_multipliers = monomial_basis(BiDegree::new(deg.a - d, deg.b - e + 1));
        let mut out = Vec::new();
        for p in [&self.partials[0], &self.partials[1]] {
            for m in &x_multipliers {
                out.push(p.mul_monomial(m).coeff_vector());
            }
        }
        for p in [&self.partials[2], &self.partials[3]] {
            for m in &y_multipliers {
                out.push(p.mul_monomial(m).coeff_vector());
            }
        }
        out
    }

    /// The Jacobian piece at `deg`, from the cache when available.
    pub fn jacobian_piece(&self, deg: BiDegree) -> Arc<QuotientPiece<F>> {
        if let Some(p) = self.pieces.lock().unwrap().get(&deg) {
            return p.clone();
        }
        let generators = self.jacobian_generators(deg);
        let ideal = span(self.field, deg.dim(), generators).expect("generator vectors are dense in S_deg");
        let reps = ideal.complement();
        let piece = Arc::new(QuotientPiece { degree: deg, ideal, reps });
        self.pieces
            .lock()
            .unwrap()
            .entry(deg)
            .or_insert(piece)
            .clone()
    }

    /// `(dim S, dim J, dim R)` at the given bidegree.
    pub fn hilbert(&self, deg: BiDegree) -> (usize, usize, usize) {
        if !deg.is_nonnegative() {
            return (0, 0, 0);
        }
        let piece = self.jacobian_piece(deg);
        (piece.dim_space(), piece.dim_ideal(), piece.dim_ring())
    }

    /// Tries to certify that the curve is smooth.
    ///
    /// A common zero of the four partials would define an evaluation
    /// functional vanishing on every generator of every piece, so a piece
    /// with `J_{a,b} = S_{a,b}` at some nonnegative bidegree certifies the
    /// empty common zero locus over the algebraic closure of the working
    /// field. The escalation tests `(d,e), (2d,2e), (4d,4e), ...` up to
    /// the cap, doubling each time. Before escalating, the four
    /// coordinate points are evaluated directly, which catches blunt
    /// singular inputs like monomial curves with an explicit witness.
    ///
    /// Full rank of an integer generator matrix modulo p implies full
    /// rational rank, so a prime-field certificate covers the same curve
    /// over the rationals; a missing certificate decides nothing.
    pub fn certify_smooth(&self, cap: BiDegree) -> SmoothnessVerdict {
        if let Some((cached_cap, v)) = &*self.smooth.lock().unwrap() {
            if *cached_cap == cap {
                return v.clone();
            }
        }
        let verdict = self.certify_smooth_uncached(cap);
        *self.smooth.lock().unwrap() = Some((cap, verdict.clone()));
        verdict
    }

    fn certify_smooth_uncached(&self, cap: BiDegree) -> SmoothnessVerdict {
        let f = self.field;
        let zero = f.zero();
        let one = f.one();
        for xs in [[one.clone(), zero.clone()], [zero.clone(), one.clone()]] {
            for ys in [[one.clone(), zero.clone()], [zero.clone(), one.clone()]] {
                let point = [xs[0].clone(), xs[1].clone(), ys[0].clone(), ys[1].clone()];
                if self
                    .partials
                    .iter()
                    .all(|p| f.is_zero(&p.eval(&point)))
                {
                    let name = |c: &F::Elem| if f.is_zero(c) { "0" } else { "1" };
                    return SmoothnessVerdict::SingularWitnessed {
                        point: format!(
                            "([{}:{}],[{}:{}])",
                            name(&point[0]),
                            name(&point[1]),
                            name(&point[2]),
                            name(&point[3])
                        ),
                    };
                }
            }
        }

        let (d, e) = (self.d(), self.e());
        let mut trace = Vec::new();
        let mut k = 1i64;
        while k * d <= cap.a && k * e <= cap.b {
            let deg = BiDegree::new(k * d, k * e);
            let piece = self.jacobian_piece(deg);
            trace.push(EscalationStep {
                degree: deg,
                dim_ideal: piece.dim_ideal(),
                dim_space: piece.dim_space(),
            });
            if piece.dim_ideal() == piece.dim_space() {
                return SmoothnessVerdict::CertifiedSmooth { at: deg, trace };
            }
            k *= 2;
        }
        SmoothnessVerdict::Undecided { trace }
    }
}

/// Length of the scheme cut out by the given sections, by Hilbert-function
/// stabilization.
///
/// At each step the span of all monomial multiples of the generators
/// inside `S_{a,b}` is computed and its codimension recorded; the walk
/// raises both components by one per step and two consecutive equal
/// codimensions are taken as the stabilized length. The walk starts at
/// the componentwise sum of the generator bidegrees: the codimension
/// function can plateau transiently below its stable range (for a curve
/// of bidegree (2,3) the diagonal reads 8, 8, 6, 6, ... from the maximum
/// generator degree), and the degreewise Taylor bound puts the sum safely
/// past every such transient. Returns `(last codimension, stabilized?)`;
/// a generator set cutting out a curve rather than points never
/// stabilizes below the cap.
pub fn scheme_length<F: Field>(
    generators: &[BiPoly<F>],
    cap: BiDegree,
) -> Result<(usize, bool), Error> {
    if generators.is_empty() {
        return Err(Error::InvalidCurve("no generators given".into()));
    }
    let field = generators[0].field();
    let start = BiDegree::new(
        generators.iter().map(|g| g.degree().a).sum(),
        generators.iter().map(|g| g.degree().b).sum(),
    );
    let mut previous: Option<usize> = None;
    let mut deg = start;
    let mut last = 0usize;
    while deg.a <= cap.a && deg.b <= cap.b {
        let mut rows = Vec::new();
        for g in generators {
            let mult = BiDegree::new(deg.a - g.degree().a, deg.b - g.degree().b);
            for m in monomial_basis(mult) {
                rows.push(g.mul_monomial(&m).coeff_vector());
            }
        }
        let piece = span(field, deg.dim(), rows)?;
        let codim = deg.dim() - piece.dim();
        if previous == Some(codim) {
            return Ok((codim, true));
        }
        previous = Some(codim);
        last = codim;
        deg = BiDegree::new(deg.a + 1, deg.b + 1);
    }
    Ok((last, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::Monomial;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use crate::parse::parse_bipoly;

    fn prime() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn smooth_curve(seed: u64) -> CurveContext<PrimeField> {
        let f = BiPoly::random(prime(), BiDegree::new(3, 3), seed, 10);
        CurveContext::new(f).unwrap()
    }

    #[test]
    fn rejects_degenerate_curves() {
        let z = BiPoly::zero(Rationals, BiDegree::new(3, 3));
        assert!(CurveContext::new(z).is_err());
        let line = BiPoly::random(Rationals, BiDegree::new(0, 3), 1, 5);
        assert!(CurveContext::new(line).is_err());
    }

    #[test]
    fn small_pieces_of_the_ideal() {
        let ctx = smooth_curve(1);
        // Below the generator degrees both multiplier spaces are empty.
        assert!(ctx.jacobian_generators(BiDegree::new(2, 2)).is_empty());
        assert_eq!(ctx.hilbert(BiDegree::new(2, 2)), (9, 0, 9));

        // At (d-1, e) exactly the two x-partials appear.
        let gens = ctx.jacobian_generators(BiDegree::new(2, 3));
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0], ctx.partial(Var::X0).coeff_vector());
        assert_eq!(gens[1], ctx.partial(Var::X1).coeff_vector());
        assert_eq!(ctx.hilbert(BiDegree::new(2, 3)).1, 2);

        // At (d, e) the eight products appear and satisfy one relation.
        let gens = ctx.jacobian_generators(BiDegree::new(3, 3));
        assert_eq!(gens.len(), 8);
        let piece = ctx.jacobian_piece(BiDegree::new(3, 3));
        assert!(piece.dim_ideal() <= 7);
        assert_eq!(piece.dim_ideal(), 7, "generic curve attains the bound");
        assert_eq!(ctx.hilbert(BiDegree::new(3, 3)), (16, 7, 9));
    }

    #[test]
    fn ring_dimension_at_adjoint_degree_is_the_genus() {
        for seed in [1u64, 2, 3] {
            let ctx = smooth_curve(seed);
            assert_eq!(ctx.hilbert(BiDegree::new(1, 1)), (4, 0, 4));
            assert_eq!(ctx.genus(), 4);
        }
    }

    #[test]
    fn top_piece_is_a_line_for_smooth_curves() {
        let ctx = smooth_curve(2);
        assert_eq!(ctx.hilbert(BiDegree::new(5, 5)), (36, 35, 1));
    }

    #[test]
    fn negative_degrees_have_empty_data() {
        let ctx = smooth_curve(3);
        assert_eq!(ctx.hilbert(BiDegree::new(-1, 5)), (0, 0, 0));
    }

    #[test]
    fn curve_section_lies_in_its_jacobian_piece() {
        let ctx = smooth_curve(4);
        let piece = ctx.jacobian_piece(BiDegree::new(3, 3));
        assert!(piece.ideal.contains(&ctx.curve().coeff_vector()).unwrap());
    }

    #[test]
    fn ideal_pieces_absorb_monomial_multiples() {
        let ctx = smooth_curve(5);
        let small = ctx.jacobian_piece(BiDegree::new(3, 3));
        let big = ctx.jacobian_piece(BiDegree::new(4, 4));
        // Multiply each basis row of J_(3,3) by each monomial of S_(1,1).
        for row in small.ideal.basis().row_vecs() {
            let p = BiPoly::from_coeff_vector(ctx.field(), BiDegree::new(3, 3), row).unwrap();
            for m in monomial_basis(BiDegree::new(1, 1)) {
                let shifted = p.mul_monomial(&m);
                assert!(big.ideal.contains(&shifted.coeff_vector()).unwrap());
            }
        }
    }

    #[test]
    fn smoothness_certificates_for_random_curves() {
        let mut certified = 0;
        for seed in 0..20u64 {
            let ctx = smooth_curve(seed);
            let v = ctx.certify_smooth(BiDegree::new(12, 12));
            if let SmoothnessVerdict::CertifiedSmooth { at, .. } = v {
                assert_eq!(at, BiDegree::new(6, 6), "seed {seed}");
                certified += 1;
            }
        }
        assert!(certified >= 18, "only {certified}/20 certified");
    }

    #[test]
    fn monomial_curve_is_witnessed_singular() {
        let f = BiPoly::monomial(prime(), Monomial::new(3, 0, 3, 0));
        let ctx = CurveContext::new(f).unwrap();
        let v = ctx.certify_smooth(BiDegree::new(12, 12));
        match v {
            SmoothnessVerdict::SingularWitnessed { .. } => {}
            other => panic!("expected a singular witness, got {other:?}"),
        }
    }

    #[test]
    fn reducible_curve_gets_no_certificate() {
        // Product of two general (1,1) forms: the components meet, so the
        // curve is singular and no piece can fill the whole space.
        let a = BiPoly::random(prime(), BiDegree::new(1, 1), 11, 10);
        let b = BiPoly::random(prime(), BiDegree::new(1, 1), 12, 10);
        let ctx = CurveContext::new(a.mul(&b)).unwrap();
        let v = ctx.certify_smooth(BiDegree::new(8, 8));
        assert!(!v.is_certified());
    }

    #[test]
    fn ramification_scheme_has_riemann_hurwitz_length() {
        let ctx = smooth_curve(6);
        let gens = vec![
            ctx.curve().clone(),
            ctx.partial(Var::X0).clone(),
            ctx.partial(Var::X1).clone(),
        ];
        let (len, stabilized) = scheme_length(&gens, BiDegree::new(12, 12)).unwrap();
        assert!(stabilized);
        assert_eq!(len, 12); // 2g - 2 + 2d with g = 4, d = 3
    }

    #[test]
    fn full_and_curve_generator_sets() {
        let field = prime();
        let everything: Vec<_> = monomial_basis(BiDegree::new(1, 1))
            .into_iter()
            .map(|m| BiPoly::monomial(field, m))
            .collect();
        let (len, stabilized) = scheme_length(&everything, BiDegree::new(6, 6)).unwrap();
        assert_eq!((len, stabilized), (0, true));

        let ctx = smooth_curve(7);
        let (_, stabilized) = scheme_length(
            std::slice::from_ref(ctx.curve()),
            BiDegree::new(10, 10),
        )
        .unwrap();
        assert!(!stabilized, "a curve is not finite");
    }

    #[test]
    fn pieces_agree_between_backends() {
        let fq = BiPoly::random(Rationals, BiDegree::new(3, 3), 9, 10);
        let fp = BiPoly::random(prime(), BiDegree::new(3, 3), 9, 10);
        let cq = CurveContext::new(fq).unwrap();
        let cp = CurveContext::new(fp).unwrap();
        for deg in [BiDegree::new(3, 3), BiDegree::new(4, 4), BiDegree::new(5, 5)] {
            assert_eq!(cq.hilbert(deg), cp.hilbert(deg));
        }
    }

    #[test]
    fn literal_curve_from_the_grammar() {
        let text = "x0^3*y0^3 + x1^3*y1^3 + x0*x1^2*y0^2*y1 + x0^2*x1*y0*y1^2";
        let f = parse_bipoly(prime(), text, BiDegree::new(3, 3)).unwrap();
        let ctx = CurveContext::new(f).unwrap();
        let (s, j, r) = ctx.hilbert(BiDegree::new(5, 5));
        assert_eq!(s, 36);
        assert_eq!(j + r, 36);
    }
}
