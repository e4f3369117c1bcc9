mod common;

use std::collections::BTreeSet;

use common::*;
use confluent::colimit::{equal_at, eventual_equalizer, factor_through_stage};
use confluent::confluence::{
    induced_map, roundtrip_check, search_confluence, verify_certificate, Direction, SearchBudget,
};
use confluent::formats::{emit_certificate, emit_diagram, parse_certificate, parse_diagram_unchecked};
use confluent::ints::{snf, solve_matrix_eq, Constraint};
use confluent::invariants::{noniso_evidence, steinitz, Exponent, SupernaturalNumber};
use confluent::{BigInt, Matrix, Mode, SequenceDiagram, Trilean};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = M> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |data| M::new(r, c, data).unwrap())
    })
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Plain), Just(Mode::Simplicial)]
}

fn to_big_matrix(m: &M) -> Matrix<BigInt> {
    Matrix::from_fn(m.rows(), m.cols(), |r, c| BigInt::from(m[(r, c)]))
}

fn to_big(d: &D) -> SequenceDiagram<BigInt> {
    let t = d.transitions().iter().map(to_big_matrix).collect();
    let mut out = SequenceDiagram::new(d.mode(), d.ranks().to_vec(), t).with_mono(d.mono_required());
    if let Some(p) = d.period() {
        out = out.with_period(p);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smith_form_reconstructs(m in matrix(4, 5)) {
        let f = snf(&m);
        prop_assert_eq!(&(&f.u * &m) * &f.v, f.s.clone());
        prop_assert_eq!(det_cofactor(&rows_of(&f.u)).abs(), 1);
        prop_assert_eq!(det_cofactor(&rows_of(&f.v)).abs(), 1);
        let d = f.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(w[0] > 0 && w[1] % w[0] == 0, "{:?}", d);
        }
        for r in 0..f.s.rows() {
            for c in 0..f.s.cols() {
                if r != c {
                    prop_assert_eq!(f.s[(r, c)], 0);
                }
            }
        }
    }

    #[test]
    fn smith_rank_matches_elimination(m in matrix(4, 5)) {
        prop_assert_eq!(snf(&m).rank(), rank_fraction_free(&rows_of(&m)));
    }

    #[test]
    fn solutions_satisfy_equation_and_match_brute_force(
        k in matrix(2, 3),
        t_rows in 0usize..=2,
        nonneg in any::<bool>(),
        bound in 0u64..=3,
        t_seed in seeds(),
    ) {
        let mut rng = rng(t_seed);
        // half the time make the system solvable on purpose
        let t = if t_seed % 2 == 0 {
            let x = random_matrix(&mut rng, t_rows, k.rows(), if nonneg { 0 } else { -2 }, 2);
            &x * &k
        } else {
            random_matrix(&mut rng, t_rows, k.cols(), -3, 3)
        };
        let constraint = if nonneg { Constraint::Nonnegative } else { Constraint::Any };
        let got: BTreeSet<Vec<i64>> = match solve_matrix_eq(&k, &t, constraint, bound) {
            Ok(stream) => stream
                .map(|x| {
                    assert_eq!(&x * &k, t);
                    assert!(!nonneg || x.is_nonnegative());
                    assert!(x.max_abs() <= bound as i64);
                    x.entries().to_vec()
                })
                .collect(),
            Err(_) => BTreeSet::new(),
        };
        prop_assert_eq!(got, brute_force_solutions(&k, &t, nonneg, bound as i64));
    }

    #[test]
    fn transitions_compose(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let d = random_diagram(&mut rng, mode, false, 5, 3, 3);
        for i in 1..=5 {
            for j in i..=5 {
                for k in j..=5 {
                    let lhs = &d.transition(j, k).unwrap() * &d.transition(i, j).unwrap();
                    prop_assert_eq!(lhs, d.transition(i, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn pushforward_is_the_same_element(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let d = random_diagram(&mut rng, mode, false, 5, 3, 3);
        let e = random_element(&mut rng, &d, 5, -3, 3);
        for j in e.stage..=5 {
            let pushed = E::new(j, d.transition(e.stage, j).unwrap().apply(&e.vec));
            prop_assert_eq!(equal_at(&d, &e, &pushed, j).unwrap(), Trilean::Yes(j));
        }
    }

    #[test]
    fn equality_is_symmetric_and_transitive(seed in seeds()) {
        let mut rng = rng(seed);
        // a zero-heavy diagram so that distinct representatives collide
        let d = random_diagram(&mut rng, Mode::Plain, false, 4, 2, 1);
        let es: Vec<E> = (0..3).map(|_| random_element(&mut rng, &d, 4, -1, 1)).collect();
        let eq = |x: &E, y: &E| equal_at(&d, x, y, 4).unwrap();
        for x in &es {
            for y in &es {
                prop_assert_eq!(eq(x, y).is_yes(), eq(y, x).is_yes());
                for z in &es {
                    if eq(x, y).is_yes() && eq(y, z).is_yes() {
                        prop_assert!(eq(x, z).is_yes());
                    }
                }
            }
        }
    }

    #[test]
    fn eventual_equalizer_answers_are_exact(seed in seeds(), mode in mode(), mono in any::<bool>()) {
        let mut rng = rng(seed);
        let d = random_diagram(&mut rng, mode, mono, 5, 2, 2);
        let i = rng.gen_range(1..=3);
        let j = rng.gen_range(i..=3);
        let p = random_matrix(&mut rng, d.ranks()[j - 1], d.ranks()[i - 1], -1, 1);
        match eventual_equalizer(&d, i, j, &p, 5).unwrap() {
            Trilean::Yes(k) => {
                prop_assert_eq!(&d.transition(j, k).unwrap() * &p, d.transition(i, k).unwrap());
            }
            Trilean::No => {
                prop_assert!(mono);
                prop_assert_ne!(&d.transition(j, 5).unwrap() * &p, d.transition(i, 5).unwrap());
            }
            Trilean::Unknown(h) => {
                prop_assert_eq!(h, 5);
                prop_assert_ne!(&d.transition(j, 5).unwrap() * &p, d.transition(i, 5).unwrap());
            }
        }
    }

    #[test]
    fn factoring_reproduces_images(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let d = random_diagram(&mut rng, mode, false, 5, 3, 2);
        let lo = if mode == Mode::Simplicial { 0 } else { -3 };
        let images: Vec<E> = (0..rng.gen_range(1..=3)).map(|_| random_element(&mut rng, &d, 4, lo, 3)).collect();
        let (i0, g) = factor_through_stage(&d, &images, 5).unwrap().expect("nonnegative images factor at once");
        for (k, e) in images.iter().enumerate() {
            prop_assert!(equal_at(&d, &E::new(i0, g.column(k)), e, 5).unwrap().is_yes());
        }
        prop_assert!(mode == Mode::Plain || g.is_nonnegative());
    }

    #[test]
    fn split_certificates_verify_and_round_trip(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let (a, b, c) = random_splitting(&mut rng, mode, 4, 3, 2);
        prop_assert!(verify_certificate(&a, &b, &c).unwrap().accepted());
        let sa: Vec<E> = (0..5).map(|_| random_element(&mut rng, &a, 3, -3, 3)).collect();
        let sb: Vec<E> = (0..5).map(|_| random_element(&mut rng, &b, 3, -3, 3)).collect();
        let report = roundtrip_check(&a, &b, &c, &sa, &sb, 4);
        prop_assert!(report.all_yes(), "{:?}", report.failures);
        for m in 2..=4 {
            prop_assert!(verify_certificate(&a, &b, &c.truncate(m)).unwrap().accepted());
        }
    }

    #[test]
    fn induced_map_respects_pushforward(seed in seeds()) {
        let mut rng = rng(seed);
        let (a, b, c) = random_splitting(&mut rng, Mode::Plain, 5, 2, 2);
        let e = random_element(&mut rng, &a, 3, -3, 3);
        let j = rng.gen_range(e.stage..=4);
        let pushed = E::new(j, a.transition(e.stage, j).unwrap().apply(&e.vec));
        let x = induced_map(&a, &b, &c, Direction::Forward, &e).unwrap();
        let y = induced_map(&a, &b, &c, Direction::Forward, &pushed).unwrap();
        prop_assert!(equal_at(&b, &x, &y, 5).unwrap().is_yes());
    }

    #[test]
    fn search_results_verify_and_carry_no_conclusive_evidence(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let (a, b) = if seed % 2 == 0 {
            let (a, b, _) = random_splitting(&mut rng, mode, 4, 2, 2);
            (a, b)
        } else {
            (random_diagram(&mut rng, mode, false, 4, 2, 2), random_diagram(&mut rng, mode, false, 4, 2, 2))
        };
        let budget = SearchBudget { depth: 2, entry_bound: 2, stage_horizon: 4, node_limit: 2000 };
        if let Some(c) = search_confluence(&a, &b, budget).unwrap().certificate {
            prop_assert!(verify_certificate(&a, &b, &c).unwrap().accepted());
            prop_assert!(!noniso_evidence(&a, &b).is_conclusive());
        }
    }

    #[test]
    fn diagrams_survive_emit_and_parse(seed in seeds(), mode in mode(), mono in any::<bool>(), periodic in any::<bool>()) {
        let mut rng = rng(seed);
        let mut d = to_big(&random_diagram(&mut rng, mode, mono, 4, 3, 1000));
        if periodic {
            let last = d.transitions().last().unwrap().clone();
            let mut ranks = d.ranks().to_vec();
            ranks.push(last.rows());
            let mut t = d.transitions().to_vec();
            if last.is_square() {
                t.push(last);
                d = SequenceDiagram::new(mode, ranks, t).with_mono(mono).with_period(confluent::Period { prefix_len: 2, period_len: 1 });
            }
        }
        let text = emit_diagram(&d);
        let back = parse_diagram_unchecked(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(emit_diagram(&back), text);
    }

    #[test]
    fn certificates_survive_emit_and_parse(seed in seeds(), mode in mode()) {
        let mut rng = rng(seed);
        let (_, _, c) = random_splitting(&mut rng, mode, 4, 3, 9);
        let big = confluent::ConfluenceCertificate::new(
            c.i_indices.clone(),
            c.k_indices.clone(),
            c.f_mats.iter().map(to_big_matrix).collect(),
            c.g_mats.iter().map(to_big_matrix).collect(),
        );
        let text = emit_certificate(&big);
        prop_assert_eq!(parse_certificate(&text).unwrap(), big);
    }

    #[test]
    fn steinitz_adds_over_concatenation(xs in proptest::collection::vec(1i64..=60, 0..5), ys in proptest::collection::vec(1i64..=60, 0..5)) {
        let s = |v: &[i64]| steinitz(&D::scalar(Mode::Plain, v.to_vec())).unwrap();
        let both: Vec<i64> = xs.iter().chain(&ys).copied().collect();
        prop_assert_eq!(s(&both), s(&xs).multiply(&s(&ys)));
        // oracle: trial division
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let mut e = 0;
            for &x in &both {
                let mut x = x as u64;
                while x.is_multiple_of(p) {
                    x /= p;
                    e += 1;
                }
            }
            prop_assert_eq!(s(&both).exponent(&BigUint::from(p)), Exponent::Finite(e));
        }
    }

    #[test]
    fn supernatural_equivalence_is_an_equivalence(
        sets in proptest::collection::vec((proptest::collection::btree_set(0usize..4, 0..3), 1u64..100), 3)
    ) {
        let primes = [2u64, 3, 5, 7];
        let values: Vec<SupernaturalNumber> = sets
            .iter()
            .map(|(inf, finite)| {
                let mut s = SupernaturalNumber::of(&BigUint::from(*finite));
                for &i in inf {
                    s.set(BigUint::from(primes[i]), Exponent::Infinite);
                }
                s
            })
            .collect();
        for x in &values {
            prop_assert!(x.equivalent(x));
            for y in &values {
                prop_assert_eq!(x.equivalent(y), y.equivalent(x));
                for z in &values {
                    if x.equivalent(y) && y.equivalent(z) {
                        prop_assert!(x.equivalent(z));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_one_confluent_pairs_show_no_conclusive_evidence(m in 1i64..=6, e1 in 1u32..=2, e2 in 1u32..=2) {
        let a = times(m.pow(e1));
        let b = times(m.pow(e2));
        let budget = SearchBudget { depth: 3, entry_bound: 64, stage_horizon: 8, node_limit: 20_000 };
        if let Some(c) = search_confluence(&a, &b, budget).unwrap().certificate {
            prop_assert!(verify_certificate(&a, &b, &c).unwrap().accepted());
            prop_assert!(!noniso_evidence(&a, &b).is_conclusive());
        }
    }
}
