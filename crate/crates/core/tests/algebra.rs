use gksiegel_core::algebra::{
    rat, BivariateLaurent, HalfExp, HalfExpLaurent, MultiQuad, QuadExt, Rational, Substitution,
};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn y_poly() -> impl Strategy<Value = HalfExpLaurent> {
    prop::collection::vec((-4i64..=4, small_rat()), 0..4)
        .prop_map(|t| HalfExpLaurent::from_terms(t.into_iter().map(|(e, c)| (HalfExp::halves(e), c))))
}

fn bivariate() -> impl Strategy<Value = BivariateLaurent> {
    prop::collection::vec((-4i64..=4, y_poly()), 0..4).prop_map(|t| {
        let mut out = BivariateLaurent::zero();
        for (x, p) in t {
            out.add_x_term(HalfExp::halves(x), &p);
        }
        out
    })
}

fn quad(d: u64) -> impl Strategy<Value = QuadExt> {
    (small_rat(), small_rat()).prop_map(move |(u, v)| QuadExt::new(u, v, d))
}

proptest! {
    #[test]
    fn bivariate_ring_axioms(a in bivariate(), b in bivariate(), c in bivariate()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &BivariateLaurent::one(), a.clone());
    }

    #[test]
    fn substitutions_are_ring_maps(a in bivariate(), b in bivariate()) {
        for rule in [Substitution::YTimesX, Substitution::YOverX, Substitution::Inverse] {
            prop_assert_eq!((&a * &b).substitute(rule), &a.substitute(rule) * &b.substitute(rule));
        }
        prop_assert_eq!(a.substitute(Substitution::Inverse).substitute(Substitution::Inverse), a.clone());
    }

    #[test]
    fn quotient_times_denominator(num in bivariate(), xi in -1i64..=1, order in 0i64..6) {
        // denominators of the shapes 1 - xi X and X^-1 - X
        let dens = [
            &BivariateLaurent::one() - &BivariateLaurent::monomial(rat(xi, 1), HalfExp::ZERO, HalfExp::int(1)),
            &BivariateLaurent::monomial(rat(1, 1), HalfExp::ZERO, HalfExp::int(-1))
                - &BivariateLaurent::monomial(rat(1, 1), HalfExp::ZERO, HalfExp::int(1)),
        ];
        for den in dens {
            let ord = HalfExp::int(order);
            let q = BivariateLaurent::series_expand_quotient(&num, &den, ord).unwrap();
            let lo = den.min_x().unwrap();
            let back = (&q * &den).truncate(ord + lo);
            prop_assert_eq!(back, num.truncate(ord + lo));
        }
    }

    #[test]
    fn quadratic_field(a in quad(6), b in quad(6), c in quad(6)) {
        let s = a.checked_add(&b).unwrap();
        prop_assert_eq!(s.checked_sub(&b).unwrap(), a.clone());
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(ab.clone(), b.checked_mul(&a).unwrap());
        prop_assert_eq!(
            a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
            ab.checked_add(&a.checked_mul(&c).unwrap()).unwrap()
        );
        if !a.is_zero() {
            prop_assert_eq!(a.checked_mul(&a.inv().unwrap()).unwrap(), QuadExt::one());
        }
        prop_assert_eq!(a.norm(), a.checked_mul(&a.conj()).unwrap().as_rational().unwrap().clone());
        let f = a.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.signum() as f64, f.signum());
        }
    }

    #[test]
    fn multiquad_sign(c in prop::collection::vec((small_rat(), prop::sample::select(vec![1u64, 2, 3, 5, 6, 10, 15, 30])), 1..5)) {
        let mut m = MultiQuad::zero();
        for (coef, r) in &c {
            m = m.add(&MultiQuad::sqrt_term(coef.clone(), *r));
        }
        let f = m.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(m.signum() as f64, f.signum());
        } else if m.is_zero() {
            prop_assert_eq!(m.signum(), 0);
        }
        let sq = m.mul(&m);
        prop_assert!(sq.signum() >= 0);
    }
}

#[test]
fn quotient_rejects_non_monomial_lead() {
    let y = HalfExpLaurent::from_terms([(HalfExp::ZERO, rat(1, 1)), (HalfExp::int(1), rat(1, 1))]);
    let den = BivariateLaurent::x_term(y, HalfExp::ZERO);
    assert!(BivariateLaurent::series_expand_quotient(&BivariateLaurent::one(), &den, HalfExp::int(2)).is_err());
}
