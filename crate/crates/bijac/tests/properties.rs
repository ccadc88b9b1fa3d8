//! Property tests for the algebraic core: the multiplication laws against
//! a convolution oracle, canonicity of the reduced row form, and the
//! grammar round trip on arbitrary polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use bijac::bipoly::{euler_defect, monomial_basis, BiDegree, BiPoly};
use bijac::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use bijac::linalg::{kernel_basis, rref, span, span_of, subspace_equal, Matrix};
use bijac::parse_bipoly;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A polynomial of the given bidegree with small rational coefficients.
fn arb_poly(deg: BiDegree) -> impl Strategy<Value = BiPoly<Rationals>> {
    let n = deg.dim();
    proptest::collection::vec((-30i64..=30, 1i64..=6), n).prop_map(move |coeffs| {
        BiPoly::from_terms(
            Rationals,
            deg,
            monomial_basis(deg)
                .into_iter()
                .zip(coeffs)
                .map(|(m, (num, den))| (m, BigRational::new(BigInt::from(num), BigInt::from(den)))),
        )
        .unwrap()
    })
}

fn arb_degree() -> impl Strategy<Value = BiDegree> {
    (0i64..=3, 0i64..=3).prop_map(|(a, b)| BiDegree::new(a, b))
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rationals>> {
    proptest::collection::vec(-9i64..=9, rows * cols)
        .prop_map(move |v| Matrix::from_fn(Rationals, rows, cols, |r, c| rat(v[r * cols + c])))
}

/// Dense convolution over raw exponent grids, independent of the sparse
/// term-map multiplication it checks.
fn convolution(p: &BiPoly<Rationals>, q: &BiPoly<Rationals>) -> Vec<BigRational> {
    let deg = p.degree().plus(q.degree());
    let mut out = vec![rat(0); deg.dim()];
    for (m1, c1) in p.terms() {
        for (m2, c2) in q.terms() {
            let i = (m1.i + m2.i) as i64;
            let k = (m1.k + m2.k) as i64;
            let idx = ((deg.a - i) * (deg.b + 1) + (deg.b - k)) as usize;
            out[idx] = &out[idx] + c1 * c2;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_matches_convolution(
        (p, q) in (arb_degree(), arb_degree()).prop_flat_map(|(dp, dq)| (arb_poly(dp), arb_poly(dq)))
    ) {
        let pq = p.mul(&q);
        prop_assert_eq!(&pq, &q.mul(&p));
        prop_assert_eq!(pq.coeff_vector(), convolution(&p, &q));
    }

    #[test]
    fn multiplication_is_associative_and_bilinear(
        (p, q, r) in (arb_degree(), arb_degree(), arb_degree())
            .prop_flat_map(|(dp, dq, dr)| (arb_poly(dp), arb_poly(dq), arb_poly(dr)))
    ) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        // Bilinearity in the first argument against a shared second.
        let sum = p.add(&p.scale(&rat(3))).unwrap();
        prop_assert_eq!(
            sum.mul(&q),
            p.mul(&q).add(&p.scale(&rat(3)).mul(&q)).unwrap()
        );
    }

    #[test]
    fn euler_defects_vanish(p in arb_degree().prop_flat_map(arb_poly)) {
        let (ex, ey) = euler_defect(&p);
        prop_assert!(ex.is_zero());
        prop_assert!(ey.is_zero());
    }

    #[test]
    fn grammar_round_trip(p in arb_degree().prop_flat_map(arb_poly)) {
        let back = parse_bipoly(Rationals, &p.to_string(), p.degree()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rref_is_idempotent_and_canonical(m in arb_matrix(5, 7), perm in 0usize..120) {
        let reduced = rref(&m);
        let again = rref(&reduced.matrix);
        prop_assert_eq!(&again.matrix, &reduced.matrix);
        prop_assert_eq!(&again.pivots, &reduced.pivots);

        // A row-equivalent matrix (rows permuted, one row rescaled and
        // another row added onto it) reduces to the same canonical form.
        let mut rows: Vec<Vec<BigRational>> = m.row_vecs().map(|r| r.to_vec()).collect();
        let mut k = perm;
        for i in (1..rows.len()).rev() {
            rows.swap(i, k % (i + 1));
            k /= i + 1;
        }
        for c in 0..7 {
            let add = rows[1][c].clone();
            rows[0][c] = &rows[0][c] * rat(2) + add;
        }
        let shuffled = Matrix::from_rows(Rationals, 7, rows).unwrap();
        let other = rref(&shuffled);
        prop_assert_eq!(other.matrix, reduced.matrix);
        prop_assert_eq!(other.pivots, reduced.pivots);
    }

    #[test]
    fn kernel_dimension_complements_rank(m in arb_matrix(4, 6)) {
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.dim() + rref(&m).rank(), 6);
        for v in ker.basis().row_vecs() {
            let image = m.mul_vec(v).unwrap();
            prop_assert!(image.iter().all(|e| Rationals.is_zero(e)));
        }
    }

    #[test]
    fn span_of_a_basis_recovers_the_subspace(m in arb_matrix(3, 6)) {
        let u = span_of(&m);
        let again = span(
            Rationals,
            6,
            u.basis().row_vecs().map(|r| r.to_vec()).collect(),
        )
        .unwrap();
        prop_assert!(subspace_equal(&u, &again).unwrap());
    }

    #[test]
    fn prime_and_rational_reductions_agree_on_pivots(v in proptest::collection::vec(-9i64..=9, 30)) {
        // Entries this small cannot meet the working prime, so the pivot
        // structure must coincide.
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mq = Matrix::from_fn(Rationals, 5, 6, |r, c| rat(v[r * 6 + c]));
        let mp = Matrix::from_fn(f, 5, 6, |r, c| f.from_i64(v[r * 6 + c]));
        prop_assert_eq!(rref(&mq).pivots, rref(&mp).pivots);
    }
}
