use homcheck_core::algebra::{check_identity_concrete, load_algebra, yau_twist, Element, Verdict, EXAMPLES};
use homcheck_core::identity::catalog;
use homcheck_core::{Algebra, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn example(name: &str) -> Algebra {
    let (_, text) = EXAMPLES.iter().find(|(f, _)| *f == name).unwrap();
    load_algebra(text).unwrap()
}

fn holds(a: &Algebra, id: &str) -> bool {
    check_identity_concrete(a, &catalog(id).unwrap()).holds()
}

/// Cayley-Dickson doubling: (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)),
/// on coordinate vectors of length 2^level.
fn cd_mul(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    if x.len() == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let sub = |u: Vec<Rational>, v: Vec<Rational>| u.into_iter().zip(v).map(|(p, q)| p - q).collect::<Vec<_>>();
    let add = |u: Vec<Rational>, v: Vec<Rational>| u.into_iter().zip(v).map(|(p, q)| p + q).collect::<Vec<_>>();
    let mut out = sub(cd_mul(a, c), cd_mul(&cd_conj(d), b));
    out.extend(add(cd_mul(d, a), cd_mul(b, &cd_conj(c))));
    out
}

fn cd_conj(x: &[Rational]) -> Vec<Rational> {
    x.iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() }).collect()
}

#[test]
fn m7_is_the_octonion_commutator() {
    let m7 = example("m7.json");
    let unit = |i: usize| (0..8).map(|k| q((k == i) as i64)).collect::<Vec<_>>();
    for i in 1..8 {
        for j in 1..8 {
            let ab = cd_mul(&unit(i), &unit(j));
            let ba = cd_mul(&unit(j), &unit(i));
            let half = Rational::new(1.into(), 2.into());
            let bracket: Vec<Rational> = ab.iter().zip(&ba).map(|(p, r)| (p - r) * half.clone()).collect();
            assert_eq!(bracket[0], q(0));
            let got = m7.multiply(&Element::basis(7, i - 1), &Element::basis(7, j - 1)).unwrap();
            assert_eq!(got.0, bracket[1..].to_vec(), "e{i}*e{j}");
        }
    }
}

#[test]
fn cross3_jacobi_on_all_basis_triples() {
    let a = example("cross3.json");
    let e = |i| Element::basis(3, i);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let m = |u: &Element<Rational>, v: &Element<Rational>| a.multiply(u, v).unwrap();
                let mut s = m(&m(&e(i), &e(j)), &e(k));
                s.add_scaled(&m(&m(&e(j), &e(k)), &e(i)), &q(1));
                s.add_scaled(&m(&m(&e(k), &e(i)), &e(j)), &q(1));
                assert!(s.is_zero());
            }
        }
    }
    assert!(holds(&a, "hom_jacobi"));
    assert!(holds(&a, "hom_malcev"));
}

#[test]
fn m7_is_malcev_but_not_lie() {
    let m7 = example("m7.json");
    assert!(holds(&m7, "malcev"));
    assert!(holds(&m7, "hom_malcev"));
    assert!(holds(&m7, "identity_1_2"));
    match check_identity_concrete(&m7, &catalog("hom_jacobi").unwrap()) {
        Verdict::Counterexample(cx) => {
            assert_eq!(cx.assignment.len(), 3);
            assert!(!cx.residual.is_zero());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn skew3_is_not_malcev() {
    let a = example("skew3.json");
    assert!(!holds(&a, "malcev"));
    assert!(!holds(&a, "hom_malcev"));
    assert!(!holds(&a, "hom_jacobi"));
}

#[test]
fn sl2_is_lie() {
    let a = example("sl2.json");
    assert!(a.twist_is_identity());
    assert!(holds(&a, "hom_jacobi"));
    assert!(holds(&a, "identity_1_2"));
}

#[test]
fn shipped_twists_are_automorphisms() {
    for name in ["cross3_rot.json", "m7_auto.json"] {
        let a = example(name);
        assert!(a.require_multiplicative, "{name}");
        assert!(!a.twist_is_identity(), "{name}");
        assert_eq!(a.check_multiplicative(), Ok(()), "{name}");
    }
}

#[test]
fn yau_twists_are_hom_malcev() {
    for (name, lie) in [("cross3_rot.json", true), ("m7_auto.json", false)] {
        let twisted = yau_twist(&example(name)).unwrap();
        assert!(holds(&twisted, "hom_malcev"), "{name}");
        assert!(holds(&twisted, "identity_1_2"), "{name}");
        assert_eq!(holds(&twisted, "hom_jacobi"), lie, "{name}");
        assert_eq!(twisted.check_multiplicative(), Ok(()));
    }
}

#[test]
fn yau_twist_product_is_twist_of_product() {
    let a = example("m7_auto.json");
    let t = yau_twist(&a).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            let (u, v) = (Element::basis(7, i), Element::basis(7, j));
            let want = a.apply_twist(&a.multiply(&u, &v).unwrap()).unwrap();
            assert_eq!(t.multiply(&u, &v).unwrap(), want);
        }
    }
}

#[test]
fn verdicts_are_deterministic_across_thread_counts() {
    let m7 = example("m7.json");
    let id = catalog("hom_jacobi").unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| check_identity_concrete(&m7, &id))
    };
    let one = run(1);
    assert_eq!(one, run(4));
}
