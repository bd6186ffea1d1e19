//! Property tests for the structural invariants.

use proptest::prelude::*;
use ramsey_core::cnf::{Clause, ClauseTag, Lit};
use ramsey_core::graph::{Graph, VertexSet};
use ramsey_core::pattern::Pattern;
use ramsey_core::Cnf;

fn arb_graph(k: u32) -> impl Strategy<Value = Graph> {
    let n = 1usize << k;
    let pairs = n * (n - 1) / 2;
    proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
        let mut g = Graph::empty(k).unwrap();
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits[idx] {
                    g.add_edge(u, v).unwrap();
                }
                idx += 1;
            }
        }
        g
    })
}

fn arb_pattern(k: u32) -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(proptest::option::of(any::<bool>()), k as usize).prop_map(
        move |entries| {
            let mut p = Pattern::empty(k);
            for (i, e) in entries.into_iter().enumerate() {
                if let Some(bit) = e {
                    p = p.with_bit(i as u32 + 1, bit);
                }
            }
            p
        },
    )
}

fn arb_subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
        VertexSet::from_vertices(
            n,
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    })
}

fn arb_clause(num_vars: u32) -> impl Strategy<Value = Clause> {
    proptest::collection::btree_map(1..=num_vars, any::<bool>(), 0..=num_vars as usize).prop_map(
        |m| Clause::new(m.into_iter().map(|(v, pol)| Lit::new(v, pol)).collect()).unwrap(),
    )
}

proptest! {
    #[test]
    fn graph_text_round_trips(g in arb_graph(3)) {
        prop_assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn pattern_extension_shrinks_consistent_set(p in arb_pattern(4), b in 1u32..=4, bit: bool) {
        let ext = p.with_bit(b, bit);
        prop_assert!(ext.extends(&p) || p.is_set(b));
        if ext.extends(&p) {
            let (cp, ce) = (p.consistent_set(), ext.consistent_set());
            for v in ce.iter() {
                prop_assert!(cp.contains(v));
            }
        }
    }

    #[test]
    fn consistent_set_size_is_exact(p in arb_pattern(5)) {
        prop_assert_eq!(p.consistent_set().len(), 1usize << (5 - p.size()));
    }

    #[test]
    fn density_is_symmetric(g in arb_graph(3), a in arb_subset(8), b in arb_subset(8)) {
        prop_assume!(!a.is_empty() && !b.is_empty());
        prop_assert_eq!(g.density(&a, &b), g.density(&b, &a));
    }

    #[test]
    fn common_neighbors_factor_one_vertex(g in arb_graph(3), u in arb_subset(8), v in 0usize..8) {
        let mut with_v = u.clone();
        with_v.insert(v);
        prop_assert_eq!(
            g.common_neighbors(&with_v),
            g.common_neighbors(&u).intersection(g.neighbors(v))
        );
    }

    #[test]
    fn restriction_preserves_models(
        clauses in proptest::collection::vec(arb_clause(5), 1..12),
        var in 1u32..=5,
        polarity: bool,
        assignment in proptest::collection::vec(any::<bool>(), 5),
    ) {
        let mut cnf = Cnf::new(5);
        for c in clauses {
            cnf.push(c, ClauseTag::Input).unwrap();
        }
        let lit = Lit::new(var, polarity);
        let restricted = cnf.restrict(lit);
        let mut fixed = assignment.clone();
        fixed[var as usize - 1] = polarity;
        prop_assert_eq!(cnf.eval(&fixed), restricted.eval(&fixed));
    }

    #[test]
    fn resolvents_are_implied(
        a in arb_clause(5),
        b in arb_clause(5),
        assignment in proptest::collection::vec(any::<bool>(), 5),
    ) {
        for lit in a.lits().iter().copied().filter(|l| l.is_positive()) {
            if b.contains(lit.negated()) {
                if let Ok(resolvent) = a.resolve(&b, lit.var()) {
                    if a.eval(&assignment) && b.eval(&assignment) {
                        prop_assert!(resolvent.eval(&assignment));
                    }
                }
            }
        }
    }
}
