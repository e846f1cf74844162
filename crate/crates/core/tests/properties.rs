use amc_core::binform::{apolar, apolar_ideal, point_to_form, BinaryForm, ProjPoint};
use amc_core::groebner::{buchberger, radical_membership, GbCaps, Membership};
use amc_core::linalg::rank;
use amc_core::poly::{int, rat, MonomialOrder, Poly, Rat, Ring, RingRef};
use amc_core::quadrics::{product_vector, quad_rank, quadric_from_vector};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ring3() -> RingRef {
    Ring::indexed("x", 3, MonomialOrder::DegRevLex)
}

fn small() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Polynomials in three variables with up to five terms of degree at most 3.
fn poly3() -> impl Strategy<Value = Poly> {
    prop::collection::vec((small(), 0u32..=3, 0u32..=3, 0u32..=3), 0..5).prop_map(|terms| {
        let r = ring3();
        terms.into_iter().fold(Poly::zero(&r), |acc, (c, a, b, e)| {
            let m = &(&Poly::var(&r, 0).pow(a) * &Poly::var(&r, 1).pow(b)) * &Poly::var(&r, 2).pow(e);
            &acc + &m.scale(&c)
        })
    })
}

fn point3() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small(), 3)
}

fn form_of(deg: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(small(), deg + 1).prop_map(BinaryForm::new)
}

/// Hankel check of `g ∘ f_p = 0` on divided-power coordinates.
fn annihilates(g: &BinaryForm, p: &[Rat]) -> bool {
    let j = g.degree();
    (0..p.len() - j).all(|m| (0..=j).map(|k| g.coeff(k) * &p[m + k]).sum::<Rat>().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        let r = ring3();
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Poly::one(&r), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&b), &a - &b);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly3(), b in poly3(), x in point3()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
    }

    #[test]
    fn printing_and_parsing_round_trip(a in poly3()) {
        let back = Poly::parse(&a.to_string(), &ring3()).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pairing_with_a_power_evaluates(d in 1usize..=8, seed in prop::collection::vec(small(), 11), a in small(), b in small()) {
        let f = BinaryForm::new(seed[..=d].to_vec());
        let power = BinaryForm::linear_power(&a, &b, d);
        let got = apolar(&f, &power).unwrap();
        let d_fact: Rat = (1..=d).fold(Rat::one(), |acc, k| acc * int(k as i64));
        prop_assert_eq!(got.coeffs(), &[d_fact * f.eval(&a, &b)][..]);
    }

    #[test]
    fn linear_substitution_commutes_with_evaluation(f in form_of(5), m in prop::collection::vec(small(), 4), x in small(), y in small()) {
        let sigma = [[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]];
        let g = f.substitute_linear(&sigma);
        let (u, v) = (&m[0] * &x + &m[1] * &y, &m[2] * &x + &m[3] * &y);
        prop_assert_eq!(g.eval(&x, &y), f.eval(&u, &v));
    }

    #[test]
    fn apolar_generators_annihilate(coords in prop::collection::vec(-3i64..=3, 5..=9)) {
        prop_assume!(coords.iter().any(|&c| c != 0));
        let p = ProjPoint::from_ints(&coords).unwrap();
        let pair = apolar_ideal(&point_to_form(&p)).unwrap();
        let d = coords.len() - 1;
        prop_assert_eq!(pair.d1() + pair.d2(), d + 2);
        prop_assert!(pair.d1() <= pair.d2());
        prop_assert!(annihilates(&pair.g1, p.coords()));
        prop_assert!(annihilates(&pair.g2, p.coords()));
        // nothing below degree d1 annihilates: every smaller Hankel matrix has full column rank
        for e in 1..pair.d1() {
            let hankel: Vec<Vec<Rat>> = (0..=d - e).map(|m| (0..=e).map(|k| p.coords()[m + k].clone()).collect()).collect();
            prop_assert_eq!(rank(&hankel), e + 1);
        }
        prop_assert_eq!(pair.point(), p);
    }

    #[test]
    fn products_of_linear_forms_have_small_rank(l in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 4)) {
        let r = Ring::indexed("z", 5, MonomialOrder::DegRevLex);
        let v: Vec<Vec<Rat>> = l.iter().map(|x| x.iter().map(|&c| int(c)).collect()).collect();
        let square: Vec<Rat> = product_vector(&v[0], &v[2]).iter().zip(product_vector(&v[1], &v[1])).map(|(a, b)| a - b).collect();
        let pencil: Vec<Rat> = product_vector(&v[0], &v[1]).iter().zip(product_vector(&v[2], &v[3])).map(|(a, b)| a - b).collect();
        prop_assert!(quad_rank(&quadric_from_vector(&r, &square)).unwrap() <= 3);
        prop_assert!(quad_rank(&quadric_from_vector(&r, &pencil)).unwrap() <= 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn groebner_basis_contains_its_input(gens in prop::collection::vec(poly3(), 1..=3)) {
        let r = ring3();
        let gb = buchberger(&gens, &r, GbCaps::default()).unwrap();
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
        for g in gb.gens() {
            prop_assert!(gb.normal_form(g).unwrap().is_zero());
        }
    }

    #[test]
    fn powers_lie_in_the_radical(c in prop::collection::vec(small(), 3), n in 1u32..=3) {
        let r = ring3();
        let l = (0..3).fold(Poly::zero(&r), |acc, i| &acc + &Poly::var(&r, i).scale(&c[i]));
        prop_assume!(!l.is_zero());
        let ideal = vec![l.pow(n)];
        prop_assert_eq!(radical_membership(&l, &ideal, GbCaps::default()).unwrap(), Membership::Member);
        let other = &Poly::var(&r, 0) + &Poly::var(&r, 1);
        prop_assert_eq!(
            radical_membership(&Poly::var(&r, 2), &[other.pow(n + 1)], GbCaps::default()).unwrap(),
            Membership::NotMember
        );
    }
}
