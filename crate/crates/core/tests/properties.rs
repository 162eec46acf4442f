use proptest::prelude::*;

use fqcert::covers::{intersect, marshall_hall_cover, regular_closure};
use fqcert::homology::{find_functional, ClassVector, HomologyBasis};
use fqcert::words::{are_independent, conjugator, cyclic_reduce, oracle_conjugate, primitive_root};
use fqcert::wreath::{wreath_inverse, wreath_multiply, wreath_order, wreath_power, WreathElement};
use fqcert::{
    certify_nonconjugate, from_json, to_canonical_json, verify, Caps, Certificate, CoverGraph, SearchMode, Word,
};

fn letters(max: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..=max)
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max).prop_map(|l| Word::reduce(&l, 2).unwrap())
}

fn nontrivial(max: usize) -> impl Strategy<Value = Word> {
    word(max).prop_filter("nontrivial", |w| !w.is_empty())
}

fn permutation(d: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..d as u32).collect::<Vec<_>>()).prop_shuffle()
}

fn cover() -> impl Strategy<Value = CoverGraph> {
    (1usize..=5)
        .prop_flat_map(|d| (permutation(d), permutation(d)))
        .prop_filter_map("connected", |(a, b)| CoverGraph::new(2, vec![a, b]).ok())
}

fn normal_cover() -> impl Strategy<Value = CoverGraph> {
    cover().prop_filter_map("small closure", |c| regular_closure(&c, 60).ok())
}

fn wreath_element(size: usize, modulus: u64) -> impl Strategy<Value = WreathElement> {
    (prop::collection::vec(0..modulus, size), permutation(size)).prop_map(move |(base, top)| WreathElement {
        modulus,
        base,
        top,
    })
}

fn wreath_triple() -> impl Strategy<Value = (WreathElement, WreathElement, WreathElement)> {
    (1usize..=5, 1u64..=6).prop_flat_map(|(s, n)| (wreath_element(s, n), wreath_element(s, n), wreath_element(s, n)))
}

fn add(u: &ClassVector, v: &ClassVector) -> Vec<i64> {
    u.to_dense().iter().zip(v.to_dense()).map(|(a, b)| a + b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_canonical(l in letters(12)) {
        let w = Word::reduce(&l, 2).unwrap();
        prop_assert_eq!(Word::reduce(w.letters(), 2).unwrap(), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
        prop_assert_eq!(Word::parse(&w.to_string(), 2).unwrap(), w);
    }

    #[test]
    fn group_laws(u in word(8), v in word(8), x in word(8)) {
        prop_assert_eq!(u.concat(&u.inverse()).unwrap(), Word::identity(2).unwrap());
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        let left = u.concat(&v).unwrap().concat(&x).unwrap();
        let right = u.concat(&v.concat(&x).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let ab: Vec<i64> = u.abelianization().iter().zip(v.abelianization()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(u.concat(&v).unwrap().abelianization(), ab);
    }

    #[test]
    fn cyclic_reduction_invariant(w in word(10)) {
        let c = cyclic_reduce(&w);
        let cyc = c.as_word();
        prop_assert_eq!(w.conjugate(&c.conjugator).unwrap(), cyc.clone());
        prop_assert!(cyc.is_cyclically_reduced());
        // least rotation
        let n = cyc.len();
        for r in 0..n {
            let rot: Vec<i32> = cyc.letters()[r..].iter().chain(&cyc.letters()[..r]).copied().collect();
            prop_assert!(cyc.letters() <= &rot[..]);
        }
    }

    #[test]
    fn conjugates_are_detected(w in word(8), h in word(6)) {
        let v = w.conjugate(&h).unwrap();
        prop_assert!(oracle_conjugate(&w, &v).unwrap());
        let x = conjugator(&w, &v).unwrap().unwrap();
        prop_assert_eq!(w.conjugate(&x).unwrap(), v);
    }

    #[test]
    fn oracle_matches_invariant(u in word(7), v in word(7)) {
        // conjugate words have equal abelianization and equal cyclic length
        if oracle_conjugate(&u, &v).unwrap() {
            prop_assert_eq!(u.abelianization(), v.abelianization());
            prop_assert_eq!(cyclic_reduce(&u).letters.len(), cyclic_reduce(&v).letters.len());
        }
        prop_assert_eq!(oracle_conjugate(&u, &v).unwrap(), conjugator(&u, &v).unwrap().is_some());
    }

    #[test]
    fn primitive_roots(w in nontrivial(8), k in 1i64..4) {
        let (root, e) = primitive_root(&w).unwrap();
        prop_assert_eq!(root.power(e as i64), w.clone());
        prop_assert_eq!(primitive_root(&root).unwrap().1, 1);
        let (r2, e2) = primitive_root(&w.power(k)).unwrap();
        prop_assert_eq!(r2, root);
        prop_assert_eq!(e2 as i64, e as i64 * k);
        prop_assert_eq!(are_independent(&[w.clone(), w.power(k)]).unwrap(), Some((0, 1)));
    }

    #[test]
    fn action_is_a_right_action(c in cover(), u in word(8), v in word(8)) {
        let uv = u.concat(&v).unwrap();
        for x in 0..c.degree() {
            prop_assert_eq!(c.act(x, &uv), c.act(c.act(x, &u), &v));
        }
    }

    #[test]
    fn degree_is_minimal_power(c in cover(), w in nontrivial(8)) {
        let n = c.degree_of(&w);
        prop_assert!(c.contains(&w.power(n as i64)));
        prop_assert!((1..n).all(|k| !c.contains(&w.power(k as i64))));
    }

    #[test]
    fn coset_reps_reach_each_vertex(c in cover()) {
        let reps = c.coset_reps();
        for (v, r) in reps.iter().enumerate() {
            prop_assert_eq!(c.act(0, r), v);
        }
        prop_assert_eq!(reps[0].len(), 0);
    }

    #[test]
    fn marshall_hall_contains_word(w in nontrivial(8)) {
        let core = cyclic_reduce(&w).as_word();
        let c = marshall_hall_cover(&core).unwrap();
        prop_assert_eq!(c.degree(), core.len());
        prop_assert!(c.contains(&core));
    }

    #[test]
    fn intersection_membership(c1 in cover(), c2 in cover(), w in word(8)) {
        let i = intersect(&c1, &c2).unwrap();
        prop_assert_eq!(i.contains(&w), c1.contains(&w) && c2.contains(&w));
    }

    #[test]
    fn closure_is_normal_core(c in cover(), w in word(8)) {
        if let Ok(rc) = regular_closure(&c, 120) {
            prop_assert!(rc.is_normal());
            prop_assert_eq!(rc.degree() % c.degree(), 0);
            // the closure's subgroup is the normal core: w lies in it iff it fixes every vertex of c
            let fixes_all = (0..c.degree()).all(|v| c.act(v, &w) == v);
            prop_assert_eq!(rc.contains(&w), fixes_all);
        }
    }

    #[test]
    fn homology_classes_add(c in cover(), u in word(6), v in word(6)) {
        let basis = HomologyBasis::new(&c);
        prop_assert_eq!(basis.dim(), 2 * c.degree() - c.degree() + 1);
        let (pu, pv) = (u.power(c.degree_of(&u).max(1) as i64), v.power(c.degree_of(&v).max(1) as i64));
        let (cu, cv) = (basis.loop_class(0, &pu).unwrap(), basis.loop_class(0, &pv).unwrap());
        let cuv = basis.loop_class(0, &pu.concat(&pv).unwrap()).unwrap();
        prop_assert_eq!(cuv.to_dense(), add(&cu, &cv));
        prop_assert!(basis.loop_class(0, &pu.inverse()).unwrap().to_dense().iter().zip(cu.to_dense()).all(|(a, b)| a + b == 0));
    }

    #[test]
    fn solver_solutions_hold(
        target in prop::collection::vec(-4i64..=4, 1..=6),
        seeds in prop::collection::vec(prop::collection::vec(-4i64..=4, 6), 0..4),
    ) {
        let d = target.len();
        let kill: Vec<ClassVector> = seeds.iter().map(|k| ClassVector::from_dense(&k[..d])).collect();
        if let Some(phi) = find_functional(&ClassVector::from_dense(&target), &kill).unwrap() {
            prop_assert_eq!(phi.eval(&ClassVector::from_dense(&target)), 1);
            prop_assert!(kill.iter().all(|k| phi.eval(k) == 0));
        } else {
            // the gcd of the target is a necessary condition; a unimodular target with no kills is always solvable
            let g = target.iter().fold(0i64, |g, &x| num_gcd(g, x));
            prop_assert!(g != 1 || !kill.iter().all(|k| k.is_zero()));
        }
    }

    #[test]
    fn wreath_group_laws((x, y, z) in wreath_triple()) {
        let xy_z = wreath_multiply(&wreath_multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = wreath_multiply(&x, &wreath_multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let id = WreathElement::identity(x.modulus, x.base.len());
        prop_assert_eq!(wreath_multiply(&x, &wreath_inverse(&x)).unwrap(), id.clone());
        prop_assert_eq!(wreath_multiply(&id, &y).unwrap(), y.clone());
        let o = wreath_order(&x);
        prop_assert_eq!(wreath_power(&x, o), id.clone());
        for p in [2u64, 3, 5, 7] {
            if o.is_multiple_of(p) {
                prop_assert_ne!(wreath_power(&x, o / p), id.clone());
            }
        }
    }

    #[test]
    fn normal_cover_deck_group_is_transitive(c in normal_cover(), w in word(6)) {
        // in a normal cover membership does not depend on the basepoint
        let closes_everywhere = (0..c.degree()).all(|v| c.act(v, &w) == v);
        prop_assert_eq!(c.contains(&w), closes_everywhere);
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificates_round_trip(a in nontrivial(5), b in nontrivial(5)) {
        match certify_nonconjugate(&a, &b, SearchMode::Auto, &Caps::default()) {
            Ok(cert) => {
                let c = Certificate::Nonconjugacy(cert);
                let text = to_canonical_json(&c);
                let back = from_json(&text).unwrap();
                prop_assert_eq!(to_canonical_json(&back), text);
                prop_assert!(verify(&back).accepted());
                prop_assert!(!oracle_conjugate(&a, &b).unwrap());
            }
            Err(fqcert::Error::ElementsConjugate { conjugator }) => {
                prop_assert_eq!(a.conjugate(&conjugator).unwrap(), b);
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
