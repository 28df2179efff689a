use flatsing::{Complex64, LaurentSeries, Tolerance};
use proptest::prelude::*;

const TOL: Tolerance = Tolerance { rel: 1e-9, abs: 1e-10 };

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Series with valuation in `vals`, a leading coefficient of modulus at least
/// `min_lead` and up to `max_len` coefficients.
fn series_with(
    vals: std::ops::RangeInclusive<i32>,
    max_len: usize,
    min_lead: f64,
) -> impl Strategy<Value = LaurentSeries> {
    (vals, min_lead..1.5f64, -3.2..3.2f64, prop::collection::vec(coeff(), 0..max_len), 0..4i32).prop_map(
        |(v, r, t, tail, extra)| {
            let mut coeffs = vec![Complex64::from_polar(r, t)];
            coeffs.extend(tail);
            let order = v + coeffs.len() as i32 + extra;
            LaurentSeries::new(v, coeffs, order.max(v + 1)).unwrap()
        },
    )
}

fn series(vals: std::ops::RangeInclusive<i32>, max_len: usize) -> impl Strategy<Value = LaurentSeries> {
    series_with(vals, max_len, 0.5)
}

fn unit() -> impl Strategy<Value = LaurentSeries> {
    series(0..=0, 10)
}

// a small linear term makes the reverted coefficients grow geometrically
fn positive_valuation() -> impl Strategy<Value = LaurentSeries> {
    series_with(1..=1, 8, 1.0)
}

proptest! {
    #[test]
    fn addition_is_invertible(a in series(-3..=3, 8), b in series(-3..=3, 8)) {
        let back = &(&a + &b) - &b;
        prop_assert!(back.approx_eq(&a, TOL));
        prop_assert!(back.order() <= a.order().min(b.order()));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in series(-2..=2, 6), b in series(-2..=2, 6), c in series(-2..=2, 6)
    ) {
        prop_assert!((&a * &b).approx_eq(&(&b * &a), TOL));
        prop_assert!((&(&a * &b) * &c).approx_eq(&(&a * &(&b * &c)), TOL));
    }

    #[test]
    fn multiplication_distributes(a in series(-2..=2, 6), b in series(-2..=2, 6), c in series(-2..=2, 6)) {
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn inverse_is_two_sided(a in series(-3..=3, 8)) {
        let inv = a.inverse().unwrap();
        let one = LaurentSeries::one(a.precision());
        prop_assert!((&a * &inv).approx_eq(&one, TOL));
        prop_assert_eq!(inv.valuation(), -a.valuation());
    }

    #[test]
    fn leading_coefficient_is_nonzero(a in series(-3..=3, 8), b in series(-3..=3, 8)) {
        let s = &a - &b;
        if !s.is_zero() {
            prop_assert!(s.leading().norm() > 0.0);
            prop_assert!(s.order() > s.valuation());
        }
    }

    #[test]
    fn exp_and_log_are_inverse(u in unit()) {
        let back = u.log_unit(0).unwrap().exp().unwrap();
        prop_assert!(back.approx_eq(&u, TOL));
    }

    #[test]
    fn exp_is_a_homomorphism(a in series(0..=2, 6), b in series(0..=2, 6)) {
        let lhs = (&a + &b).exp().unwrap();
        let rhs = &a.exp().unwrap() * &b.exp().unwrap();
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn derivative_obeys_leibniz(a in series(-2..=2, 6), b in series(-2..=2, 6)) {
        let lhs = (&a * &b).derive();
        let rhs = &(&a.derive() * &b) + &(&a * &b.derive());
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn composition_is_associative(
        a in series(0..=3, 6), b in positive_valuation(), c in positive_valuation()
    ) {
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, TOL));
    }

    #[test]
    fn reversion_undoes_composition(s in positive_valuation()) {
        let r = s.revert().unwrap();
        // reverted coefficients can grow large; rounding scales with them
        let scale = r.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max);
        let tol = Tolerance { rel: TOL.rel, abs: TOL.abs * scale };
        let id = s.compose(&r).unwrap();
        prop_assert!(id.approx_eq(&LaurentSeries::variable(id.order()), tol));
        let id = r.compose(&s).unwrap();
        prop_assert!(id.approx_eq(&LaurentSeries::variable(id.order()), tol));
    }

    #[test]
    fn integer_powers_match_repeated_products(a in series(-2..=2, 5), m in 0..5i32) {
        let mut expected = LaurentSeries::one(a.precision());
        for _ in 0..m {
            expected = &expected * &a;
        }
        prop_assert!(a.powi(m).unwrap().approx_eq(&expected, TOL));
        let neg = a.powi(-m).unwrap();
        prop_assert!((&neg * &expected).approx_eq(&LaurentSeries::one(a.precision()), TOL));
    }

    #[test]
    fn real_powers_compose(u in unit(), p in 1..5i32) {
        let root = u.pow_real(1.0 / p as f64, 0).unwrap();
        prop_assert!(root.powi(p).unwrap().approx_eq(&u, TOL));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in series(-2..=2, 6), b in series(-2..=2, 6), t in -3.2..3.2f64) {
        let w = Complex64::from_polar(0.3, t);
        let sum = &a + &b;
        let (x, y) = (a.truncate(sum.order()), b.truncate(sum.order()));
        let value = sum.eval(w);
        prop_assert!((value - x.eval(w) - y.eval(w)).norm() < 1e-9 * (1.0 + value.norm()));
    }
}

#[test]
fn truncation_order_is_never_fabricated() {
    let a = LaurentSeries::from_real(-1, &[1.0, 2.0], 3).unwrap();
    let b = LaurentSeries::from_real(0, &[1.0, 1.0, 1.0, 1.0], 10).unwrap();
    // a is known to z^2, b has no pole: the product is known to z^2 as well
    assert_eq!((&a * &b).order(), 3);
    assert_eq!((&a + &b).order(), 3);
    assert_eq!(a.derive().order(), 2);
}

#[test]
fn exp_of_a_pole_is_rejected() {
    let s = LaurentSeries::monomial(Complex64::new(1.0, 0.0), -1, 8);
    assert!(matches!(s.exp(), Err(flatsing::Error::EssentialExponential(-1))));
}
