//! Global sections of the twisted bundle of first-order differential
//! operators, and the differential of the curve section applied to them.
//!
//! The sections of the twist `(a, b)` fall into five families, written
//! here through their action under the differential of `F`. Families 1, 2
//! and 4 are monomial multiples of the identity operator and of the two
//! coordinate derivations; families 3 and 5 are the glued combinations
//! forced by the transition relations, and their images collapse to
//! multiples of a single partial derivative.
//!
//! Applying the differential to the full basis spans a subspace of
//! `S_{a+d, b+e}` that must coincide with the Jacobian piece spanned by
//! the partial-derivative multiples. The two constructions are
//! independent, so their agreement is used as a cross-check on both.

use serde::Serialize;

use crate::bipoly::{BiDegree, BiPoly, Monomial, Var};
use crate::error::Error;
use crate::field::Field;
use crate::jacobian::CurveContext;
use crate::linalg::{span, subspace_equal, Subspace};

/// One basis section of the operator bundle twisted by `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub twist: BiDegree,
    pub kind: SectionKind,
}

/// The five basis families with their exponent parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SectionKind {
    /// Multiplication operators `x0^t x1^(a-t) y0^u y1^(b-u) * 1`
    /// with `0 <= t <= a`, `0 <= u <= b`.
    Mult { t: i64, u: i64 },
    /// Monomial multiples of the `x`-derivation, `0 <= r <= a+1`,
    /// `0 <= s <= b`.
    DerX { r: i64, s: i64 },
    /// Glued `x`-sections, one per `0 <= s <= b`.
    DerXGlued { s: i64 },
    /// Monomial multiples of the `y`-derivation, `0 <= n <= a`,
    /// `0 <= m <= b+1`.
    DerY { n: i64, m: i64 },
    /// Glued `y`-sections, one per `0 <= n <= a`.
    DerYGlued { n: i64 },
}

impl SectionKind {
    /// Family number 1 through 5, for reports.
    pub fn family(&self) -> u8 {
        match self {
            SectionKind::Mult { .. } => 1,
            SectionKind::DerX { .. } => 2,
            SectionKind::DerXGlued { .. } => 3,
            SectionKind::DerY { .. } => 4,
            SectionKind::DerYGlued { .. } => 5,
        }
    }
}

/// Dimension of the space of sections at twist `(a, b)`:
/// `(b+1)(2a+4) + (a+1)(b+3)` when both components are at least -1, and
/// zero otherwise (at -2 every family range is empty).
pub fn space_dim(a: i64, b: i64) -> usize {
    if a < -1 || b < -1 {
        return 0;
    }
    ((b + 1) * (2 * a + 4) + (a + 1) * (b + 3)) as usize
}

/// Enumerates the basis at the given twist; families with empty parameter
/// ranges at boundary twists contribute nothing.
pub fn section_basis(twist: BiDegree) -> Vec<Section> {
    let (a, b) = (twist.a, twist.b);
    let mut out = Vec::new();
    if a < -1 || b < -1 {
        return out;
    }
    for t in 0..=a {
        for u in 0..=b {
            out.push(Section { twist, kind: SectionKind::Mult { t, u } });
        }
    }
    for r in 0..=a + 1 {
        for s in 0..=b {
            out.push(Section { twist, kind: SectionKind::DerX { r, s } });
        }
    }
    for s in 0..=b {
        out.push(Section { twist, kind: SectionKind::DerXGlued { s } });
    }
    for n in 0..=a {
        for m in 0..=b + 1 {
            out.push(Section { twist, kind: SectionKind::DerY { n, m } });
        }
    }
    for n in 0..=a {
        out.push(Section { twist, kind: SectionKind::DerYGlued { n } });
    }
    out
}

fn mono(i: i64, j: i64, k: i64, l: i64) -> Result<Monomial, Error> {
    if i < 0 || j < 0 || k < 0 || l < 0 {
        return Err(Error::InvalidCurve(format!(
            "section parameters out of range: exponents ({i},{j},{k},{l})"
        )));
    }
    Ok(Monomial::new(i as u32, j as u32, k as u32, l as u32))
}

/// The differential of the curve section applied to one basis section.
///
/// The result lives in `S_{a+d, b+e}`: family 1 multiplies `F` itself,
/// families 2 and 4 multiply a partial derivative by a monomial, and the
/// glued families 3 and 5 reduce to single-partial multiples with a sign.
pub fn apply_differential<F: Field>(
    ctx: &CurveContext<F>,
    section: &Section,
) -> Result<BiPoly<F>, Error> {
    let BiDegree { a, b } = section.twist;
    let f = ctx.field();
    let minus_one = f.from_i64(-1);
    let out = match section.kind {
        SectionKind::Mult { t, u } => {
            check_range(t, a)?;
            check_range(u, b)?;
            ctx.curve().mul_monomial(&mono(t, a - t, u, b - u)?)
        }
        SectionKind::DerX { r, s } => {
            check_range(r, a + 1)?;
            check_range(s, b)?;
            ctx.partial(Var::X0).mul_monomial(&mono(r, a - r + 1, s, b - s)?)
        }
        SectionKind::DerXGlued { s } => {
            check_range(s, b)?;
            ctx.partial(Var::X1)
                .mul_monomial(&mono(a + 1, 0, s, b - s)?)
                .scale(&minus_one)
        }
        SectionKind::DerY { n, m } => {
            check_range(n, a)?;
            check_range(m, b + 1)?;
            ctx.partial(Var::Y0).mul_monomial(&mono(n, a - n, m, b - m + 1)?)
        }
        SectionKind::DerYGlued { n } => {
            check_range(n, a)?;
            ctx.partial(Var::Y1)
                .mul_monomial(&mono(n, a - n, b + 1, 0)?)
                .scale(&minus_one)
        }
    };
    Ok(out)
}

fn check_range(v: i64, upper: i64) -> Result<(), Error> {
    if v < 0 || v > upper {
        return Err(Error::InvalidCurve(format!(
            "section parameter {v} outside 0..={upper}"
        )));
    }
    Ok(())
}

/// The image of the differential on the whole basis at the given twist, a
/// subspace of `S_{a+d, b+e}`.
pub fn image<F: Field>(ctx: &CurveContext<F>, twist: BiDegree) -> Subspace<F> {
    let target = twist.plus(ctx.curve().degree());
    let rows: Vec<Vec<F::Elem>> = section_basis(twist)
        .iter()
        .map(|s| {
            apply_differential(ctx, s)
                .expect("enumerated sections have valid parameters")
                .coeff_vector()
        })
        .collect();
    span(ctx.field(), target.dim(), rows).expect("images are dense vectors in the target piece")
}

/// Whether the operator-basis construction of the ideal agrees with the
/// partial-derivative construction at this twist. Disagreement indicates
/// an implementation bug in one of the two routes.
pub fn matches_jacobian_piece<F: Field>(ctx: &CurveContext<F>, twist: BiDegree) -> bool {
    let target = twist.plus(ctx.curve().degree());
    let from_operators = image(ctx, twist);
    if !target.is_nonnegative() {
        return from_operators.dim() == 0;
    }
    let from_partials = &ctx.jacobian_piece(target).ideal;
    subspace_equal(&from_operators, from_partials).expect("both live in S_target")
}
