use proptest::prelude::*;
use saw_core::cayley::{GroupKind, GroupModel};
use saw_core::estimate::{mu_lower_bridge, mu_lower_renewal, mu_upper};
use saw_core::graph::{Color, Direction, EdgeSpec};
use saw_core::transforms::{augment_edges, multiplicities_symmetric, quotient_translation};
use saw_core::{builtin, builtin_spec, count_bridges, count_saws, EnumOptions, GraphOracle, PeriodicGraph, PeriodicGraphSpec};

fn opts() -> EnumOptions {
    EnumOptions::default().with_workers(1)
}

fn arb_spec() -> impl Strategy<Value = PeriodicGraphSpec> {
    (0usize..=3, 1usize..=4).prop_flat_map(|(dim, cells)| {
        let pos = prop::collection::vec(prop::collection::vec(-4.0f64..4.0, dim), cells);
        let colors = prop::collection::vec(prop_oneof![Just(Color::None), Just(Color::Black), Just(Color::White)], cells);
        let edge = (0..cells, 0..cells, prop::collection::vec(-2i64..=2, dim), 1u32..=3, any::<bool>());
        (
            "[a-z][a-z0-9_]{0,8}",
            pos,
            colors,
            prop::collection::vec(edge, 0..8),
            any::<bool>(),
        )
            .prop_map(move |(name, pos, colors, edges, transitive)| {
                let mut s = PeriodicGraphSpec::new(name, dim, cells);
                for (i, (p, c)) in pos.iter().zip(colors).enumerate() {
                    s.set_position(i, p).set_color(i, c);
                }
                for (u, v, off, m, directed) in edges {
                    let loop_edge = u == v && off.iter().all(|&x| x == 0);
                    let e = if directed || loop_edge {
                        EdgeSpec::directed(u, v, &off, m)
                    } else {
                        EdgeSpec::undirected(u, v, &off).with_multiplicity(m)
                    };
                    s.add_edge(e);
                }
                s.transitive = transitive;
                s
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spec_text_round_trip(s in arb_spec()) {
        let text = s.to_text();
        let back = PeriodicGraphSpec::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.content_hash(), s.content_hash());
        prop_assert_eq!(back.edges.len(), s.edges.len());
        prop_assert_eq!(back.cell, s.cell);
    }
}

fn s3() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    perms
        .iter()
        .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect()
}

fn models() -> Vec<GroupModel> {
    vec![
        GroupModel::standard_abelian(2),
        GroupModel::standard_abelian(3).add_relator_abelian(&[3, 0, 1]).unwrap(),
        GroupModel::standard_abelian(2).add_relator_abelian(&[2, 4]).unwrap(),
        GroupModel::standard_free(2),
        GroupModel::standard_free(3).add_generator(&[1, -2]).unwrap(),
        GroupModel::new(GroupKind::finite(s3()).unwrap(), &[vec![1], vec![2], vec![3]]).unwrap(),
    ]
}

fn inverse_word(g: &GroupModel, w: &[usize]) -> Vec<usize> {
    w.iter()
        .rev()
        .map(|&i| {
            let inv = g.inverse(&g.generators[i]);
            g.generators.iter().position(|x| *x == inv).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn normal_forms_are_sound(m in 0usize..6, raw_a in prop::collection::vec(any::<u16>(), 0..24), raw_b in prop::collection::vec(any::<u16>(), 0..24)) {
        let g = &models()[m];
        let k = g.generators.len();
        let a: Vec<usize> = raw_a.iter().map(|&x| x as usize % k).collect();
        let b: Vec<usize> = raw_b.iter().map(|&x| x as usize % k).collect();
        let ea = g.eval(&a);
        let eb = g.eval(&b);
        let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(g.eval(&ab), g.mul(&ea, &eb));
        prop_assert_eq!(g.normal_form(ea.parts()).unwrap(), ea.clone());
        let back: Vec<usize> = a.iter().copied().chain(inverse_word(g, &a)).collect();
        prop_assert_eq!(g.eval(&back), g.identity());
        prop_assert_eq!(g.mul(&ea, &g.inverse(&ea)), g.identity());
        prop_assert_eq!(g.mul(&g.mul(&ea, &eb), &ea), g.mul(&ea, &g.mul(&eb, &ea)));
    }
}

const LATTICES: &[&str] = &["zd2", "hexagonal", "triangular", "square_octagon", "ladder"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotients_never_exceed_their_cover(gi in 0usize..5, m in 2i64..=5, axis in 0usize..2) {
        let spec = builtin_spec(LATTICES[gi]).unwrap();
        prop_assume!(axis < spec.dim);
        let q = quotient_translation(&spec, axis, m).unwrap();
        prop_assert!(multiplicities_symmetric(&q));
        prop_assert!(q.edges.iter().all(|e| e.direction == Direction::Directed));
        let base = PeriodicGraph::new(spec).unwrap();
        let n = if gi == 2 { 6 } else { 9 };
        let sb = count_saws(&base, n, &opts()).unwrap();
        let sq = count_saws(&PeriodicGraph::new(q).unwrap(), n, &opts()).unwrap();
        for i in 0..=n {
            prop_assert!(sq.counts[i] <= sb.counts[i], "n = {}", i);
        }
    }

    #[test]
    fn added_edges_only_add_walks(gi in 0usize..5, u in 0usize..4, v in 0usize..4, off in prop::collection::vec(-2i64..=2, 2)) {
        let spec = builtin_spec(LATTICES[gi]).unwrap();
        let (u, v) = (u % spec.cells(), v % spec.cells());
        let off = &off[..spec.dim];
        prop_assume!(!(u == v && off.iter().all(|&x| x == 0)));
        let aug = augment_edges(&spec, &[EdgeSpec::undirected(u, v, off)], true).unwrap();
        let n = if gi == 2 { 5 } else { 7 };
        let sb = count_saws(&PeriodicGraph::new(spec).unwrap(), n, &opts()).unwrap();
        let sa = count_saws(&PeriodicGraph::new(aug).unwrap(), n, &opts()).unwrap();
        for i in 0..=n {
            prop_assert!(sa.counts[i] >= sb.counts[i], "n = {}", i);
        }
    }

    #[test]
    fn counts_are_sub_and_super_multiplicative(gi in 0usize..5, a in 1usize..5, b in 1usize..5) {
        let g = builtin(LATTICES[gi]).unwrap();
        let n = a + b;
        let s = saw_core::count_saws_for_bounds(&g, n, &opts()).unwrap();
        if g.meta().claimed_transitive {
            prop_assert!(s.counts[n] <= &s.counts[a] * &s.counts[b]);
        }
        let br = count_bridges(&g, 0, n, &opts()).unwrap();
        prop_assert!(br.counts[n] >= &br.counts[a] * &br.counts[b]);
        let up = mu_upper(&s).unwrap().value;
        if let Ok(lo) = mu_lower_bridge(&br) {
            prop_assert!(lo.value <= up);
        }
        if let Ok(lo) = mu_lower_renewal(&br) {
            prop_assert!(lo.value <= up);
        }
    }
}
