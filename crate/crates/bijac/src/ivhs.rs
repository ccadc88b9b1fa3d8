//! The trace functional on the top graded piece, duality pairings, the
//! symmetric forms attached to embedded deformations, and the rank
//! certification pipeline for maximal infinitesimal variation of Hodge
//! structure.
//!
//! For a curve of bidegree `(d, e)` the top piece sits in bidegree
//! `(3d-4, 3e-4)`. When the quotient there is a line, the functional
//! annihilating the ideal piece is unique up to scalar; multiplying into
//! the top piece and applying it defines the pairings between
//! complementary pieces, the duality maps, and the symmetric form
//!
//! `B_tau(alpha, beta) = tr(tau * alpha * beta)`
//!
//! on the adjoint piece `S_{d-2,e-2}`, whose rank is the rank of the
//! infinitesimal variation attached to the deformation direction `tau`.
//! Rank is lower-semicontinuous in `tau`, so a single full-rank witness
//! certifies the generic statement.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bipoly::{monomial_basis, random_integers, BiDegree, BiPoly};
use crate::error::Error;
use crate::field::Field;
use crate::jacobian::{CurveContext, SmoothnessVerdict};
use crate::linalg::{kernel_basis, rank, span, Matrix};

/// The top bidegree `(3d-4, 3e-4)`.
pub fn top_degree(d: i64, e: i64) -> BiDegree {
    BiDegree::new(3 * d - 4, 3 * e - 4)
}

/// The linear functional on the top piece, vanishing exactly on the
/// ideal, normalized so that its first nonzero coordinate is one.
#[derive(Clone, Debug)]
pub struct TraceFunctional<F: Field> {
    degree: BiDegree,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> TraceFunctional<F> {
    pub fn degree(&self) -> BiDegree {
        self.degree
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    /// Applies the functional to a polynomial of the top bidegree.
    pub fn evaluate(&self, field: F, p: &BiPoly<F>) -> Result<F::Elem, Error> {
        if p.degree() != self.degree {
            return Err(Error::BidegreeConflict {
                left: p.degree(),
                right: self.degree,
            });
        }
        let mut acc = field.zero();
        for (m, c) in p.terms() {
            acc = field.add(&acc, &field.mul(&self.coeffs[m.index()], c));
        }
        Ok(acc)
    }
}

/// Dimension of the top ring piece, and whether it is a line.
pub fn top_piece_check<F: Field>(ctx: &CurveContext<F>) -> (usize, bool) {
    let dim = ctx
        .jacobian_piece(top_degree(ctx.d(), ctx.e()))
        .dim_ring();
    (dim, dim == 1)
}

/// Computes the trace functional; errors when the top piece is not a
/// line (for bidegrees with `d, e >= 3` it always is on a smooth curve).
pub fn trace_functional<F: Field>(ctx: &CurveContext<F>) -> Result<TraceFunctional<F>, Error> {
    let top = top_degree(ctx.d(), ctx.e());
    let piece = ctx.jacobian_piece(top);
    if piece.dim_ring() != 1 {
        return Err(Error::TopPieceNotLine {
            dim: piece.dim_ring(),
        });
    }
    // The annihilator of the ideal piece inside the dual space is the
    // kernel of the generator matrix; it is one-dimensional here, and the
    // canonical kernel basis already has leading coordinate one.
    let generators = ctx.jacobian_generators(top);
    let m = Matrix::from_rows(ctx.field(), top.dim(), generators)?;
    let ker = kernel_basis(&m);
    debug_assert_eq!(ker.dim(), 1);
    Ok(TraceFunctional {
        degree: top,
        coeffs: ker.basis().row(0).to_vec(),
    })
}

/// Matrix of the pairing `(u, v) -> tr(u v)` between the quotient
/// representatives in bidegree `deg` and those in the complementary
/// bidegree `(3d-4-a, 3e-4-b)`.
///
/// Representatives are monomials, so each entry is a single coordinate of
/// the trace functional.
pub fn pairing_matrix<F: Field>(
    ctx: &CurveContext<F>,
    trace: &TraceFunctional<F>,
    deg: BiDegree,
) -> Result<Matrix<F>, Error> {
    let top = trace.degree();
    let cdeg = BiDegree::new(top.a - deg.a, top.b - deg.b);
    if !deg.is_nonnegative() || !cdeg.is_nonnegative() {
        return Err(Error::DegreeTooSmall {
            d: deg.a,
            e: deg.b,
            needs: 0,
        });
    }
    let row_basis = monomial_basis(deg);
    let col_basis = monomial_basis(cdeg);
    let rows: Vec<_> = ctx.jacobian_piece(deg).reps.clone();
    let cols: Vec<_> = ctx.jacobian_piece(cdeg).reps.clone();
    Ok(Matrix::from_fn(
        ctx.field(),
        rows.len(),
        cols.len(),
        |i, j| {
            let m = row_basis[rows[i]].times(&col_basis[cols[j]]);
            trace.coeffs[m.index()].clone()
        },
    ))
}

/// The symmetric form of an embedded deformation direction, on the full
/// monomial basis of `S_{d-2,e-2}` (the ideal piece there is zero, since
/// both multiplier bidegrees are negative).
#[derive(Clone, Debug)]
pub struct IvhsForm<F: Field> {
    pub tau: BiPoly<F>,
    pub matrix: Matrix<F>,
}

impl<F: Field> IvhsForm<F> {
    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }
}

/// Builds `B_tau` with entries `tr(tau * m_i * m_j)`.
pub fn btau_matrix<F: Field>(
    ctx: &CurveContext<F>,
    trace: &TraceFunctional<F>,
    tau: &BiPoly<F>,
) -> Result<IvhsForm<F>, Error> {
    let curve_deg = ctx.curve().degree();
    if tau.degree() != curve_deg {
        return Err(Error::BidegreeConflict {
            left: tau.degree(),
            right: curve_deg,
        });
    }
    let basis = monomial_basis(BiDegree::new(ctx.d() - 2, ctx.e() - 2));
    let g = basis.len();
    let field = ctx.field();
    let mut entries = Vec::with_capacity(g * g);
    for mi in &basis {
        for mj in &basis {
            let p = tau.mul_monomial(&mi.times(mj));
            entries.push(trace.evaluate(field, &p)?);
        }
    }
    let matrix = Matrix::from_rows(field, g, entries.chunks(g).map(|c| c.to_vec()).collect())?;
    debug_assert!(matrix.is_symmetric());
    Ok(IvhsForm {
        tau: tau.clone(),
        matrix,
    })
}

/// Kernel dimension of `(A, B) -> A F + B G` on
/// `S_{d-4,e-4} + S_{d-4,e-4}`; zero domain for `d < 4` or `e < 4`.
pub fn mu_kernel_dim<F: Field>(ctx: &CurveContext<F>, g_section: &BiPoly<F>) -> Result<usize, Error> {
    let (d, e) = (ctx.d(), ctx.e());
    if d < 3 || e < 3 {
        return Err(Error::DegreeTooSmall { d, e, needs: 3 });
    }
    if g_section.degree() != ctx.curve().degree() {
        return Err(Error::BidegreeConflict {
            left: g_section.degree(),
            right: ctx.curve().degree(),
        });
    }
    let pair = Matrix::from_rows(
        ctx.field(),
        ctx.curve().degree().dim(),
        vec![ctx.curve().coeff_vector(), g_section.coeff_vector()],
    )?;
    if rank(&pair) < 2 {
        return Err(Error::ProportionalSection);
    }
    let mult = BiDegree::new(d - 4, e - 4);
    let dm = mult.dim();
    if dm == 0 {
        return Ok(0);
    }
    let target = BiDegree::new(2 * d - 4, 2 * e - 4);
    let mut columns = Vec::with_capacity(2 * dm);
    for m in monomial_basis(mult) {
        columns.push(ctx.curve().mul_monomial(&m).coeff_vector());
    }
    for m in monomial_basis(mult) {
        columns.push(g_section.mul_monomial(&m).coeff_vector());
    }
    let map = Matrix::from_rows(ctx.field(), target.dim(), columns)?.transpose();
    Ok(kernel_basis(&map).dim())
}

/// Draws a probe section from the ideal piece in the curve bidegree: a
/// seeded integer combination of the eight partial-derivative products.
pub fn random_ideal_section<F: Field>(ctx: &CurveContext<F>, seed: u64, height: i64) -> BiPoly<F> {
    let deg = ctx.curve().degree();
    let weights = random_integers(8, seed, height);
    let field = ctx.field();
    let mut acc = BiPoly::zero(field, deg);
    for (gen, w) in ctx.jacobian_generators(deg).into_iter().zip(weights) {
        if w == 0 {
            continue;
        }
        let p = BiPoly::from_coeff_vector(field, deg, &gen).expect("generator vectors are dense");
        acc = acc
            .add(&p.scale(&field.from_i64(w)))
            .expect("generators share the curve bidegree");
    }
    acc
}

/// Verdict of the certification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IvhsVerdict {
    /// A full-rank witness was found.
    Success,
    /// No witness in the sample; says nothing against the generic
    /// statement (bad luck over a small field remains possible).
    UndecidedGeneric,
    /// The top piece is not a line and no alternate route applies.
    UndecidedTop,
}

/// Which argument produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IvhsRoute {
    /// Ranks of `B_tau` against the trace functional.
    TraceRank,
    /// For bidegree (2,2), where the top piece is a plane rather than a
    /// line: the sampled deformation classes span the whole top quotient,
    /// so every nonzero functional vanishing on the ideal piece - the
    /// trace among them - takes a nonzero value on some sampled `tau`,
    /// which is a rank-1 = g witness whichever functional is the trace.
    TopSpan,
}

#[derive(Clone, Debug, Serialize)]
pub struct IvhsCertificate {
    pub route: IvhsRoute,
    pub verdict: IvhsVerdict,
    pub genus: usize,
    pub top_dim: usize,
    pub trials: u32,
    pub seed: u64,
    pub height: i64,
    /// Per-trial `(trial seed, rank)` in trial order.
    pub ranks: Vec<(u64, usize)>,
    /// Rank value -> number of trials attaining it.
    pub histogram: BTreeMap<usize, usize>,
    pub max_rank: usize,
    /// `(trial seed, rank)` of the first full-rank witness.
    pub witness: Option<(u64, usize)>,
    /// For `d = 2` with a trace: whether the duality map out of the
    /// doubled-adjoint piece is injective, mirroring the separate
    /// small-degree argument. `None` when not applicable.
    pub d2_injectivity: Option<bool>,
}

/// Samples deformation directions and certifies maximal infinitesimal
/// variation.
///
/// Directions are drawn from the whole section space of the curve
/// bidegree with per-trial seeds `seed ^ trial`, so trials are
/// order-independent and the report is identical however they are
/// scheduled. Success requires a single full-rank witness; failure of
/// every trial is reported as undecided, never as a refutation.
pub fn certify_max_ivhs<F: Field>(
    ctx: &CurveContext<F>,
    smooth: &SmoothnessVerdict,
    trials: u32,
    seed: u64,
    height: i64,
) -> Result<IvhsCertificate, Error> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if !smooth.is_certified() {
        return Err(Error::NotCertifiedSmooth);
    }
    let (d, e) = (ctx.d(), ctx.e());
    if d < 2 || e < 2 {
        return Err(Error::DegreeTooSmall { d, e, needs: 2 });
    }
    let g = ctx.genus();
    let (top_dim, top_is_line) = top_piece_check(ctx);
    let curve_deg = ctx.curve().degree();

    if top_is_line {
        let trace = trace_functional(ctx)?;
        let mut ranks = Vec::new();
        let mut witness = None;
        for t in 0..trials {
            let trial_seed = seed ^ t as u64;
            let tau = BiPoly::random(ctx.field(), curve_deg, trial_seed, height);
            let form = btau_matrix(ctx, &trace, &tau)?;
            let r = form.rank();
            ranks.push((trial_seed, r));
            if r == g && witness.is_none() {
                witness = Some((trial_seed, r));
            }
        }
        let d2_injectivity = if d == 2 {
            let m = pairing_matrix(ctx, &trace, BiDegree::new(2 * d - 4, 2 * e - 4))?;
            Some(rank(&m) == m.rows())
        } else {
            None
        };
        return Ok(finish_certificate(
            IvhsRoute::TraceRank,
            g,
            top_dim,
            trials,
            seed,
            height,
            ranks,
            witness,
            d2_injectivity,
        ));
    }

    if g == 1 {
        // Top piece is not a line, but the adjoint piece is; see
        // `IvhsRoute::TopSpan`.
        let top = top_degree(d, e);
        let piece = ctx.jacobian_piece(top);
        let field = ctx.field();
        let mut classes: Vec<Vec<F::Elem>> = Vec::new();
        let mut ranks = Vec::new();
        let mut witness = None;
        for t in 0..trials {
            let trial_seed = seed ^ t as u64;
            let tau = BiPoly::random(field, curve_deg, trial_seed, height);
            let class = piece.reduce(&tau)?;
            let nonzero = class.iter().any(|c| !field.is_zero(c));
            ranks.push((trial_seed, usize::from(nonzero)));
            classes.push(class);
            if witness.is_none() {
                let spanned = span(field, top_dim, classes.clone())?;
                if spanned.dim() == top_dim {
                    witness = Some((trial_seed, g));
                }
            }
        }
        return Ok(finish_certificate(
            IvhsRoute::TopSpan,
            g,
            top_dim,
            trials,
            seed,
            height,
            ranks,
            witness,
            None,
        ));
    }

    Ok(IvhsCertificate {
        route: IvhsRoute::TraceRank,
        verdict: IvhsVerdict::UndecidedTop,
        genus: g,
        top_dim,
        trials,
        seed,
        height,
        ranks: Vec::new(),
        histogram: BTreeMap::new(),
        max_rank: 0,
        witness: None,
        d2_injectivity: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_certificate(
    route: IvhsRoute,
    genus: usize,
    top_dim: usize,
    trials: u32,
    seed: u64,
    height: i64,
    ranks: Vec<(u64, usize)>,
    witness: Option<(u64, usize)>,
    d2_injectivity: Option<bool>,
) -> IvhsCertificate {
    let mut histogram = BTreeMap::new();
    for (_, r) in &ranks {
        *histogram.entry(*r).or_insert(0usize) += 1;
    }
    let max_rank = ranks.iter().map(|(_, r)| *r).max().unwrap_or(0);
    let verdict = if witness.is_some() {
        IvhsVerdict::Success
    } else {
        IvhsVerdict::UndecidedGeneric
    };
    IvhsCertificate {
        route,
        verdict,
        genus,
        top_dim,
        trials,
        seed,
        height,
        ranks,
        histogram,
        max_rank,
        witness,
        d2_injectivity,
    }
}

/// Outcome of checking that kernel elements of a maximal-rank form have
/// square classes annihilated by the duality pairing.
#[derive(Clone, Debug, Serialize)]
pub struct KernelSquareReport {
    pub kernel_dim: usize,
    pub nonvanishing: usize,
    pub verdict: KernelSquareVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelSquareVerdict {
    /// The kernel is zero; nothing to check.
    VacuousPass,
    /// Every pairing of a kernel square against the curve-degree
    /// representatives vanished.
    Pass,
    /// Evaluations reported for a witness that was not genuinely of
    /// maximal rank; the property is only asserted at the maximum.
    Reported,
    /// A maximal-rank witness produced a nonvanishing evaluation.
    Fail,
}

/// Evaluates `tr(alpha^2 * w)` for every kernel basis vector `alpha` of
/// `B_{tau_star}` and every curve-degree representative `w`.
pub fn kernel_square_check<F: Field>(
    ctx: &CurveContext<F>,
    trace: &TraceFunctional<F>,
    tau_star: &BiPoly<F>,
    star_is_maximal: bool,
) -> Result<KernelSquareReport, Error> {
    let field = ctx.field();
    let form = btau_matrix(ctx, trace, tau_star)?;
    let kernel = kernel_basis(&form.matrix);
    if kernel.dim() == 0 {
        return Ok(KernelSquareReport {
            kernel_dim: 0,
            nonvanishing: 0,
            verdict: KernelSquareVerdict::VacuousPass,
        });
    }
    let adjoint = BiDegree::new(ctx.d() - 2, ctx.e() - 2);
    let curve_deg = ctx.curve().degree();
    let curve_basis = monomial_basis(curve_deg);
    let reps = ctx.jacobian_piece(curve_deg).reps.clone();
    let mut nonvanishing = 0usize;
    for row in kernel.basis().row_vecs() {
        let alpha = BiPoly::from_coeff_vector(field, adjoint, row)?;
        let alpha_sq = alpha.mul(&alpha);
        for &rep in &reps {
            let w = curve_basis[rep];
            let p = alpha_sq.mul_monomial(&w);
            if !field.is_zero(&trace.evaluate(field, &p)?) {
                nonvanishing += 1;
            }
        }
    }
    let verdict = if nonvanishing == 0 {
        KernelSquareVerdict::Pass
    } else if star_is_maximal {
        KernelSquareVerdict::Fail
    } else {
        KernelSquareVerdict::Reported
    };
    Ok(KernelSquareReport {
        kernel_dim: kernel.dim(),
        nonvanishing,
        verdict,
    })
}

/// The dimension-bound arithmetic for the contradiction argument, plus
/// the computed ring dimensions it leans on.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsRecord {
    pub d: i64,
    pub e: i64,
    /// `de - d - e`: the lower bound forced by a failure of maximality.
    pub lower: i64,
    /// `de - d - e - 4`: the unconditional upper bound.
    pub upper: i64,
    /// Lower exceeds upper, so maximality cannot fail.
    pub contradiction: bool,
    pub dim_j_doubled: usize,
    pub dim_r_doubled: usize,
    pub dim_r_curve: usize,
    /// `dim R_{2d-4,2e-4} = dim R_{d,e}`, the duality input to the upper
    /// bound.
    pub doubled_equals_curve: bool,
    pub dim_j_curve: usize,
    /// `h^0` of the operator bundle at twist zero; bounds `dim J_{d,e}`.
    pub operator_sections: usize,
    /// `de - d - e - 10 + dim J_{d,e}`: the computed value of the chain
    /// whose ceiling is `upper + 1`.
    pub chain_value: i64,
}

pub fn bounds_report<F: Field>(ctx: &CurveContext<F>) -> Result<BoundsRecord, Error> {
    let (d, e) = (ctx.d(), ctx.e());
    if d < 3 || e < 3 {
        return Err(Error::DegreeTooSmall { d, e, needs: 3 });
    }
    let lower = d * e - d - e;
    let upper = d * e - d - e - 4;
    let doubled = BiDegree::new(2 * d - 4, 2 * e - 4);
    let (_, dim_j_doubled, dim_r_doubled) = ctx.hilbert(doubled);
    let (_, dim_j_curve, dim_r_curve) = ctx.hilbert(ctx.curve().degree());
    let operator_sections = crate::diffop::space_dim(0, 0);
    Ok(BoundsRecord {
        d,
        e,
        lower,
        upper,
        contradiction: lower > upper,
        dim_j_doubled,
        dim_r_doubled,
        dim_r_curve,
        doubled_equals_curve: dim_r_doubled == dim_r_curve,
        dim_j_curve,
        operator_sections,
        chain_value: d * e - d - e - 10 + dim_j_curve as i64,
    })
}

/// Ranks and verdicts for the two duality maps out of the doubled pieces.
#[derive(Clone, Debug, Serialize)]
pub struct DualityRecord {
    /// Pairing of `R_{2d-4,2e-4}` against `R_{d,e}`.
    pub square: DualityMapRecord,
    /// Pairing of `R_{2d-2,2e-2}` against `R_{d-2,e-2}`.
    pub adjoint: DualityMapRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityMapRecord {
    pub source_degree: BiDegree,
    pub target_degree: BiDegree,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub verdict: bool,
}

/// Checks the two duality maps:
///
/// - out of `R_{2d-4,2e-4}` into the dual of `R_{d,e}`: an isomorphism
///   for `d, e >= 3`, injective for `d = 2`;
/// - out of `R_{2d-2,2e-2}` into the dual of `R_{d-2,e-2}`: surjective
///   with a kernel of dimension exactly one for `d, e >= 2`.
pub fn duality_report<F: Field>(
    ctx: &CurveContext<F>,
    trace: &TraceFunctional<F>,
) -> Result<DualityRecord, Error> {
    let (d, e) = (ctx.d(), ctx.e());
    if d < 2 || e < 2 {
        return Err(Error::DegreeTooSmall { d, e, needs: 2 });
    }
    let square_deg = BiDegree::new(2 * d - 4, 2 * e - 4);
    let m = pairing_matrix(ctx, trace, square_deg)?;
    let r = rank(&m);
    let square = DualityMapRecord {
        source_degree: square_deg,
        target_degree: ctx.curve().degree(),
        source_dim: m.rows(),
        target_dim: m.cols(),
        rank: r,
        kernel_dim: m.rows() - r,
        verdict: if d >= 3 {
            m.rows() == m.cols() && r == m.rows()
        } else {
            r == m.rows()
        },
    };

    let adjoint_deg = BiDegree::new(2 * d - 2, 2 * e - 2);
    let m = pairing_matrix(ctx, trace, adjoint_deg)?;
    let r = rank(&m);
    let adjoint = DualityMapRecord {
        source_degree: adjoint_deg,
        target_degree: BiDegree::new(d - 2, e - 2),
        source_dim: m.rows(),
        target_dim: m.cols(),
        rank: r,
        kernel_dim: m.rows() - r,
        verdict: r == m.cols() && m.rows() - r == 1,
    };
    Ok(DualityRecord { square, adjoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::Monomial;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};

    fn prime() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn curve(seed: u64, d: i64, e: i64) -> CurveContext<PrimeField> {
        CurveContext::new(BiPoly::random(prime(), BiDegree::new(d, e), seed, 10)).unwrap()
    }

    fn certified(ctx: &CurveContext<PrimeField>) -> SmoothnessVerdict {
        let cap = BiDegree::new(4 * ctx.d(), 4 * ctx.e());
        let v = ctx.certify_smooth(cap);
        assert!(v.is_certified(), "curve not smooth");
        v
    }

    #[test]
    fn top_piece_dims() {
        assert_eq!(top_piece_check(&curve(1, 3, 3)), (1, true));
        assert_eq!(top_piece_check(&curve(1, 3, 4)), (1, true));
        assert_eq!(top_piece_check(&curve(1, 4, 4)), (1, true));
        // Recorded, not asserted: for (2,2) the computation finds a plane.
        let (dim, line) = top_piece_check(&curve(1, 2, 2));
        assert!(!line);
        assert_eq!(dim, 2);
    }

    #[test]
    fn trace_annihilates_ideal_generators() {
        let ctx = curve(2, 3, 3);
        let f = ctx.field();
        let trace = trace_functional(&ctx).unwrap();
        let top = top_degree(3, 3);
        for gen in ctx.jacobian_generators(top) {
            let p = BiPoly::from_coeff_vector(f, top, &gen).unwrap();
            assert!(f.is_zero(&trace.evaluate(f, &p).unwrap()));
        }
        // Normalized leading coordinate, and nonzero somewhere.
        let lead = trace.coeffs().iter().find(|c| !f.is_zero(c)).unwrap();
        assert!(f.is_one(lead));
    }

    #[test]
    fn trace_errors_when_top_is_not_a_line() {
        let ctx = curve(3, 2, 2);
        match trace_functional(&ctx) {
            Err(Error::TopPieceNotLine { dim }) => assert_eq!(dim, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pairing_of_complementary_degrees_transpose_to_each_other() {
        let ctx = curve(23, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        for deg in [BiDegree::new(2, 2), BiDegree::new(4, 4), BiDegree::new(1, 1)] {
            let top = top_degree(3, 3);
            let cdeg = BiDegree::new(top.a - deg.a, top.b - deg.b);
            let m = pairing_matrix(&ctx, &trace, deg).unwrap();
            let n = pairing_matrix(&ctx, &trace, cdeg).unwrap();
            assert_eq!(m.transpose(), n, "degree {deg}");
        }
    }

    #[test]
    fn pairing_at_the_ends() {
        let ctx = curve(4, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        // Top against the constants: a single nonzero entry.
        let m = pairing_matrix(&ctx, &trace, top_degree(3, 3)).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(!ctx.field().is_zero(m.at(0, 0)));

        let err = pairing_matrix(&ctx, &trace, BiDegree::new(6, 6));
        assert!(err.is_err());
    }

    #[test]
    fn duality_ranks_at_3_3() {
        let ctx = curve(5, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        let rec = duality_report(&ctx, &trace).unwrap();
        assert_eq!((rec.square.source_dim, rec.square.target_dim), (9, 9));
        assert_eq!(rec.square.rank, 9);
        assert!(rec.square.verdict);
        assert_eq!((rec.adjoint.source_dim, rec.adjoint.target_dim), (5, 4));
        assert_eq!(rec.adjoint.rank, 4);
        assert_eq!(rec.adjoint.kernel_dim, 1);
        assert!(rec.adjoint.verdict);
    }

    #[test]
    fn duality_at_2_3_is_injective() {
        let ctx = curve(6, 2, 3);
        let trace = trace_functional(&ctx).unwrap();
        let rec = duality_report(&ctx, &trace).unwrap();
        assert_eq!(rec.square.source_dim, 3);
        assert_eq!(rec.square.rank, 3);
        assert!(rec.square.verdict);
        assert!(rec.adjoint.verdict);
    }

    #[test]
    fn btau_is_symmetric_and_zero_for_zero_tau() {
        let ctx = curve(7, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        let zero = BiPoly::zero(ctx.field(), BiDegree::new(3, 3));
        let form = btau_matrix(&ctx, &trace, &zero).unwrap();
        assert_eq!(form.rank(), 0);

        for seed in 0..10u64 {
            let tau = BiPoly::random(ctx.field(), BiDegree::new(3, 3), seed, 10);
            let form = btau_matrix(&ctx, &trace, &tau).unwrap();
            assert!(form.matrix.is_symmetric());
            assert_eq!(form.matrix.rows(), 4);
        }
    }

    #[test]
    fn rank_is_invariant_under_scaling() {
        let ctx = curve(8, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        let tau = BiPoly::random(ctx.field(), BiDegree::new(3, 3), 3, 10);
        let r1 = btau_matrix(&ctx, &trace, &tau).unwrap().rank();
        let r2 = btau_matrix(&ctx, &trace, &tau.scale(&ctx.field().from_i64(17)))
            .unwrap()
            .rank();
        assert_eq!(r1, r2);

        // Rescaling the functional scales every entry, leaving the rank
        // unchanged as well.
        let scaled = TraceFunctional {
            degree: trace.degree(),
            coeffs: trace
                .coeffs()
                .iter()
                .map(|c| ctx.field().mul(c, &ctx.field().from_i64(5)))
                .collect(),
        };
        let r3 = btau_matrix(&ctx, &scaled, &tau).unwrap().rank();
        assert_eq!(r1, r3);
    }

    #[test]
    fn certification_finds_full_rank_at_3_3() {
        let ctx = curve(9, 3, 3);
        let smooth = certified(&ctx);
        let cert = certify_max_ivhs(&ctx, &smooth, 20, 7, 10).unwrap();
        assert_eq!(cert.verdict, IvhsVerdict::Success);
        assert_eq!(cert.route, IvhsRoute::TraceRank);
        let (_, r) = cert.witness.unwrap();
        assert_eq!(r, 4);
        assert_eq!(cert.genus, 4);
    }

    #[test]
    fn certification_uses_span_route_at_2_2() {
        let ctx = curve(10, 2, 2);
        let smooth = certified(&ctx);
        let cert = certify_max_ivhs(&ctx, &smooth, 20, 7, 10).unwrap();
        assert_eq!(cert.route, IvhsRoute::TopSpan);
        assert_eq!(cert.verdict, IvhsVerdict::Success);
        assert_eq!(cert.genus, 1);
        assert_eq!(cert.top_dim, 2);
    }

    #[test]
    fn certification_rejects_bad_inputs() {
        let ctx = curve(11, 3, 3);
        let smooth = certified(&ctx);
        assert!(matches!(
            certify_max_ivhs(&ctx, &smooth, 0, 7, 10),
            Err(Error::NoTrials)
        ));
        let undecided = crate::jacobian::SmoothnessVerdict::Undecided { trace: vec![] };
        assert!(matches!(
            certify_max_ivhs(&ctx, &undecided, 5, 7, 10),
            Err(Error::NotCertifiedSmooth)
        ));
    }

    #[test]
    fn tau_equal_to_curve_is_diagnostic_only() {
        // The curve section itself represents the trivial deformation;
        // its rank is recorded, not asserted.
        let ctx = curve(12, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        let form = btau_matrix(&ctx, &trace, ctx.curve()).unwrap();
        let r = form.rank();
        assert!(r <= 4);
    }

    #[test]
    fn kernel_square_is_vacuous_at_full_rank() {
        let ctx = curve(13, 3, 3);
        let smooth = certified(&ctx);
        let trace = trace_functional(&ctx).unwrap();
        let cert = certify_max_ivhs(&ctx, &smooth, 20, 7, 10).unwrap();
        let (wseed, _) = cert.witness.unwrap();
        let tau = BiPoly::random(ctx.field(), BiDegree::new(3, 3), wseed, 10);
        let rep = kernel_square_check(&ctx, &trace, &tau, true).unwrap();
        assert_eq!(rep.verdict, KernelSquareVerdict::VacuousPass);
    }

    #[test]
    fn kernel_square_reports_for_degenerate_tau() {
        let ctx = curve(14, 3, 3);
        let trace = trace_functional(&ctx).unwrap();
        let zero = BiPoly::zero(ctx.field(), BiDegree::new(3, 3));
        let rep = kernel_square_check(&ctx, &trace, &zero, false).unwrap();
        assert_eq!(rep.kernel_dim, 4);
        assert_ne!(rep.verdict, KernelSquareVerdict::Fail);
    }

    #[test]
    fn mu_probes() {
        // (3,3): empty domain, kernel zero for any independent section.
        let ctx = curve(15, 3, 3);
        let g = random_ideal_section(&ctx, 3, 10);
        assert_eq!(mu_kernel_dim(&ctx, &g).unwrap(), 0);

        // Proportional probes are rejected.
        let f2 = ctx.curve().scale(&ctx.field().from_i64(3));
        assert!(matches!(
            mu_kernel_dim(&ctx, &f2),
            Err(Error::ProportionalSection)
        ));

        // (4,4): ten seeded ideal sections, kernel zero each.
        let ctx = curve(16, 4, 4);
        for seed in 0..10u64 {
            let g = random_ideal_section(&ctx, seed, 10);
            assert_eq!(mu_kernel_dim(&ctx, &g).unwrap(), 0, "seed {seed}");
        }

        let ctx = curve(17, 2, 3);
        let g = BiPoly::random(ctx.field(), BiDegree::new(2, 3), 5, 10);
        assert!(matches!(
            mu_kernel_dim(&ctx, &g),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn bounds_arithmetic() {
        let ctx = curve(18, 3, 3);
        let rec = bounds_report(&ctx).unwrap();
        assert_eq!((rec.lower, rec.upper), (3, -1));
        assert!(rec.contradiction);
        assert_eq!(rec.dim_r_doubled, 9);
        assert_eq!(rec.dim_r_curve, 9);
        assert!(rec.doubled_equals_curve);
        assert_eq!(rec.operator_sections, 7);
        assert_eq!(rec.chain_value, 3 - 10 + 7);

        let ctx = curve(19, 4, 5);
        let rec = bounds_report(&ctx).unwrap();
        assert_eq!((rec.lower, rec.upper), (11, 7));
        assert!(rec.contradiction);
        assert!(rec.doubled_equals_curve);

        let ctx = curve(20, 2, 3);
        assert!(bounds_report(&ctx).is_err());
    }

    #[test]
    fn certificates_match_over_both_backends() {
        let fq = BiPoly::random(Rationals, BiDegree::new(3, 3), 21, 10);
        let fp = BiPoly::random(prime(), BiDegree::new(3, 3), 21, 10);
        let cq = CurveContext::new(fq).unwrap();
        let cp = CurveContext::new(fp).unwrap();
        let sq = cq.certify_smooth(BiDegree::new(12, 12));
        let sp = cp.certify_smooth(BiDegree::new(12, 12));
        let a = certify_max_ivhs(&cq, &sq, 8, 7, 10).unwrap();
        let b = certify_max_ivhs(&cp, &sp, 8, 7, 10).unwrap();
        assert_eq!(a.ranks, b.ranks);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn trace_coordinates_touch_monomials() {
        let ctx = curve(22, 3, 3);
        let f = ctx.field();
        let trace = trace_functional(&ctx).unwrap();
        let nonzero = trace.coeffs().iter().filter(|c| !f.is_zero(c)).count();
        assert!(nonzero >= 1);
        // The functional pairs nontrivially with at least one monomial.
        let top = top_degree(3, 3);
        let hit = monomial_basis(top)
            .into_iter()
            .any(|m| !f.is_zero(&trace.evaluate(f, &BiPoly::monomial(f, m)).unwrap()));
        assert!(hit);
        let _ = Monomial::ONE;
    }
}
