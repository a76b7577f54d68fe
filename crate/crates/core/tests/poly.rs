use crossloop::poly::{int, rat, DdConvention, Mobius, Monomial, Poly, Rational, RationalPoint, Vars};
use num_traits::{One, Zero};
use proptest::prelude::*;

const WIDTH: usize = 4;

fn vars() -> Vars {
    Vars::z(WIDTH)
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, WIDTH), -9i64..=9), 0..8).prop_map(|terms| {
        Poly::from_terms(&vars(), terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), int(c))))
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(a, b)| rat(a, b))
}

fn point() -> impl Strategy<Value = RationalPoint> {
    prop::collection::vec(rational(), WIDTH).prop_map(RationalPoint::new)
}

fn pair() -> impl Strategy<Value = (usize, usize)> {
    (0..WIDTH, 0..WIDTH).prop_filter("distinct", |(i, j)| i != j)
}

proptest! {
    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in point()) {
        prop_assert_eq!((&p + &q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x));
        prop_assert_eq!((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
    }

    #[test]
    fn divided_difference_squares_to_zero(p in poly(), (i, j) in pair()) {
        for c in [DdConvention::Loop, DdConvention::Classical] {
            let d = p.divided_difference(i, j, c);
            prop_assert!(d.divided_difference(i, j, c).is_zero());
            // symmetric in (i, j), and anticommutes with the swap
            prop_assert_eq!(d.swap_vars(i, j), d.clone());
            prop_assert_eq!(p.swap_vars(i, j).divided_difference(i, j, c), -&d);
        }
    }

    #[test]
    fn divided_difference_leibniz(f in poly(), g in poly(), (i, j) in pair()) {
        let c = DdConvention::Classical;
        let lhs = (&f * &g).divided_difference(i, j, c);
        let rhs = &(&f.divided_difference(i, j, c) * &g) + &(&f.swap_vars(i, j) * &g.divided_difference(i, j, c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_by_linear_forms(
        p in poly(),
        c0 in rational(),
        coeffs in prop::collection::vec(rational(), WIDTH),
    ) {
        let lin: Vec<(usize, Rational)> = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let ell = Poly::affine(&vars(), c0, &lin);
        prop_assume!(!ell.is_zero());
        let product = &p * &ell;
        prop_assert_eq!(product.exact_div_linear(&ell).unwrap(), p.clone());
        prop_assert_eq!(product.exact_div(&ell).unwrap(), p);
    }

    #[test]
    fn text_round_trip(p in poly()) {
        prop_assert_eq!(Poly::parse(&p.to_string(), &vars()).unwrap(), p);
    }

    #[test]
    fn linear_fraction_substitution(
        p in poly(),
        (a, b, c, d) in (rational(), rational(), rational(), rational()),
        s in rational(),
        rest in point(),
    ) {
        let map = Mobius::new(a.clone(), b.clone(), c.clone(), d.clone());
        prop_assume!(!map.determinant().is_zero());
        let den = &c * &s + &d;
        prop_assume!(!den.is_zero());
        // substitute z1 = map(s), with s carried by z1 itself
        let (num, e) = p.substitute_linear_fraction(0, &map, 0).unwrap();
        let x = (&a * &s + &b) / &den;
        let mut at_x = rest.values().to_vec();
        at_x[0] = x.clone();
        let mut at_s = rest.values().to_vec();
        at_s[0] = s.clone();
        let scale = if c.is_zero() { Rational::one() } else { num_traits::pow(den.clone(), e as usize) };
        prop_assert_eq!(num.evaluate(&RationalPoint::new(at_s)), p.evaluate(&RationalPoint::new(at_x)) * scale);
        // the inverse map undoes the forward one
        let inv = map.inverse();
        let back = (&inv.a * &x + &inv.b) / (&inv.c * &x + &inv.d);
        prop_assert_eq!(back, s);
    }
}
