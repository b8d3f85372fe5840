//! Property tests over random frames, spaces and groupoids.

mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use quantal::catalog;
use quantal::cover::groupoid_cover;
use quantal::format::{emit, from_str, Structure};
use quantal::groupoid::{groupoid_iso, groupoid_of, sober_map, TopGroupoid};
use quantal::iso::quantale_iso;
use quantal::lattice::{FiniteLattice, LatticeMap};
use quantal::quantale::Quantale;
use quantal::report::{self, Options};
use quantal::semigroup::{lcc_completion, partial_units_semigroup};
use quantal::tensor::{multiplicativity, TensorSpace, DEFAULT_CAP};
use quantal::topology::FiniteSpace;

fn searched() -> &'static [(String, Quantale)] {
    static CELL: OnceLock<Vec<(String, Quantale)>> = OnceLock::new();
    CELL.get_or_init(common::searched)
}

fn frame() -> impl Strategy<Value = Arc<FiniteLattice>> {
    prop_oneof![
        (1usize..6).prop_map(|n| Arc::new(FiniteLattice::chain(n))),
        (0usize..4).prop_map(|k| Arc::new(FiniteLattice::powerset(&["a", "b", "c"][..k]))),
        space().prop_map(|x| x.frame()),
    ]
}

/// A finite poset on up to four points, topologised by its up-sets.
fn space() -> impl Strategy<Value = FiniteSpace> {
    (1usize..5).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |edges| {
            let mut le = vec![vec![false; n]; n];
            for i in 0..n {
                le[i][i] = true;
                for j in i + 1..n {
                    le[i][j] = edges[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i][k] && le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            let opens: Vec<u64> = (0..1u64 << n)
                .filter(|&m| (0..n).all(|i| m >> i & 1 == 0 || (0..n).all(|j| !le[i][j] || m >> j & 1 == 1)))
                .collect();
            FiniteSpace::new((0..n).map(|i| format!("p{i}")).collect(), opens).unwrap()
        })
    })
}

/// A join-preserving map, given by arbitrary images of join-irreducibles.
fn join_map() -> impl Strategy<Value = LatticeMap> {
    (frame(), frame()).prop_flat_map(|(src, dst)| {
        let k = src.join_irreducibles().len();
        proptest::collection::vec(0..dst.len(), k).prop_map(move |img| {
            let js = src.join_irreducibles().to_vec();
            let table = src
                .elements()
                .map(|a| dst.join_all(js.iter().zip(&img).filter(|&(&j, _)| src.leq(j, a)).map(|(_, &b)| b)))
                .collect();
            LatticeMap::new(src.clone(), dst.clone(), table)
        })
    })
}

/// Disjoint unions of small étale groupoids with at most 32 opens of arrows.
fn etale_groupoid() -> impl Strategy<Value = TopGroupoid> {
    let piece = prop_oneof![
        Just(catalog::pair_discrete(1)),
        Just(catalog::pair_discrete(2)),
        Just(catalog::cyclic_groupoid(2)),
        Just(catalog::cyclic_groupoid(3)),
        Just(catalog::unit_groupoid(catalog::sierpinski())),
    ];
    proptest::collection::vec(piece, 1..4).prop_map(|ps| {
        let mut g = ps[0].clone();
        for p in &ps[1..] {
            if g.arrows.opens().len() * p.arrows.opens().len() <= 32 {
                g = catalog::disjoint_union(&g, p);
            }
        }
        g
    })
}

fn open_groupoid() -> impl Strategy<Value = TopGroupoid> {
    prop_oneof![
        space()
            .prop_filter("small object space", |x| x.len() <= 3 && x.opens().len() <= 5)
            .prop_map(catalog::pair_groupoid)
            .prop_filter("at most 32 opens of arrows", |g| g.arrows.opens().len() <= 32),
        etale_groupoid(),
        Just(catalog::mixed_bundle()),
    ]
}

fn instance() -> impl Strategy<Value = usize> {
    0..searched().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoints_form_galois_connections(f in join_map()) {
        let g = f.right_adjoint().unwrap();
        let (src, dst) = (f.src.clone(), f.dst.clone());
        for a in src.elements() {
            for b in dst.elements() {
                prop_assert_eq!(dst.leq(f.apply(a), b), src.leq(a, g.apply(b)));
            }
        }
        for a in src.elements() {
            let c = g.apply(f.apply(a));
            prop_assert!(src.leq(a, c));
            prop_assert_eq!(g.apply(f.apply(c)), c);
        }
        for b in dst.elements() {
            prop_assert!(dst.leq(f.apply(g.apply(b)), b));
        }
        prop_assert!(g.meet_failure().is_none());
    }

    #[test]
    fn upsilon_preserves_meets(k in instance()) {
        let q = &searched()[k].1;
        for a in q.elements() {
            for b in q.elements() {
                prop_assert_eq!(q.upsilon(q.meet(a, b)), q.meet(q.upsilon(a), q.upsilon(b)));
            }
        }
    }

    #[test]
    fn u_axiom_biconditional(k in instance()) {
        let q = &searched()[k].1;
        let f = q.frame();
        let identity = q.elements().all(|a| {
            let pairs = q.elements().flat_map(|x| q.elements().map(move |y| (x, y)));
            f.join_all(pairs.filter(|&(x, y)| q.leq(q.mul(x, y), a)).map(|(x, y)| f.meet(q.upsilon(x), y))) == a
        });
        prop_assert_eq!(identity, q.classify().u_axiom.holds());
    }

    #[test]
    fn unital_open_frames_are_inverse(k in instance()) {
        let c = searched()[k].1.classify();
        prop_assert_eq!(c.unital() && c.open(), c.inverse());
        prop_assert_eq!(
            c.semiopen(),
            c.balanced.holds() && c.r_axiom.holds() && c.u_axiom.holds()
        );
    }

    #[test]
    fn balancing_is_middle_linear(k in instance(), a in 0usize..16, b in 0usize..16, t in 0usize..16) {
        let q = &searched()[k].1;
        let s = TensorSpace::over_rs(q);
        let (a, b, t) = (a % q.len(), b % q.len(), t % s.base_len());
        prop_assert_eq!(s.pure(s.left_action(t, a), b), s.pure(a, s.right_action(t, b)));
    }

    #[test]
    fn finite_t0_spaces_are_sober(x in space()) {
        prop_assert!(sober_map(&x).is_ok());
    }

    #[test]
    fn report_rendering_is_deterministic(k in instance()) {
        let q = searched()[k].1.clone();
        let a = common::report_of("q", Structure::Quantale(q.clone()), true);
        let b = common::report_of("q", Structure::Quantale(q), true);
        prop_assert_eq!(a.render(true), b.render(true));
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn open_groupoids_give_open_multiplicative_quantales(g in open_groupoid()) {
        let q = g.quantale().unwrap();
        let c = q.classify();
        prop_assert!(c.open());
        prop_assert!(multiplicativity(&q).holds());
        let h = groupoid_of(&q).unwrap();
        prop_assert!(groupoid_iso(&g, &h).is_some());
    }

    #[test]
    fn etale_groupoids_round_trip(g in etale_groupoid()) {
        let q = g.quantale().unwrap();
        prop_assert!(q.classify().inverse());
        let (i, _) = partial_units_semigroup(&q).unwrap();
        let back = lcc_completion(&i).unwrap().quantale;
        prop_assert!(quantale_iso(&back, &q).is_some());
        let cover = groupoid_cover(&g, DEFAULT_CAP, 1).unwrap();
        prop_assert!(cover.functor.as_ref().is_some_and(|f| f.iso));
    }

    #[test]
    fn emitted_groupoids_reload(g in open_groupoid()) {
        let text = emit(&Structure::Groupoid(g.clone()), Some("random"));
        let file = from_str("<emitted>", &text).unwrap();
        let Structure::Groupoid(h) = file.structure else { panic!("kind changed") };
        prop_assert!(groupoid_iso(&g, &h).is_some());
    }

    #[test]
    fn groupoid_reports_have_no_red_flags(g in open_groupoid().prop_filter("at most 16 opens", |g| g.arrows.opens().len() <= 16)) {
        let r = report::check(&common::in_memory("g", Structure::Groupoid(g)), &Options { roundtrip: true, ..Options::default() }).unwrap();
        prop_assert_eq!(common::red_flags(&r), Vec::<String>::new());
    }
}

