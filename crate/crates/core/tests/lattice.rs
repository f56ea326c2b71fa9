use abeltrans::{AbelianGroup, GroupElement, Subgroup};
use proptest::prelude::*;

fn group_and_gens() -> impl Strategy<Value = (AbelianGroup, Vec<GroupElement>, Vec<GroupElement>)> {
    prop::collection::vec(2u64..=12, 1..=3).prop_flat_map(|orders| {
        let g = AbelianGroup::new(orders.clone()).unwrap();
        let elem = orders.iter().map(|&n| 0..n).collect::<Vec<_>>().prop_map(GroupElement);
        let gens = prop::collection::vec(elem.clone(), 0..=3);
        let more = prop::collection::vec(elem, 0..=3);
        (Just(g), gens, more)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_does_not_depend_on_generating_set((g, gens, _) in group_and_gens()) {
        let h = Subgroup::from_generators(&g, &gens).unwrap();
        let mut shuffled: Vec<GroupElement> = gens.iter().rev().cloned().collect();
        for x in &gens {
            for y in &gens {
                shuffled.push(g.add(x, y).unwrap());
            }
        }
        prop_assert_eq!(&Subgroup::from_generators(&g, &shuffled).unwrap(), &h);
        let again = Subgroup::from_generators(&g, h.smith_generators()).unwrap();
        prop_assert_eq!(again, h);
    }

    #[test]
    fn order_matches_element_count((g, gens, _) in group_and_gens()) {
        let h = Subgroup::from_generators(&g, &gens).unwrap();
        let members: Vec<GroupElement> = h.elements().unwrap().collect();
        prop_assert_eq!(members.len() as u64, h.order());
        let inside = g.elements().filter(|x| h.contains(x)).count() as u64;
        prop_assert_eq!(inside, h.order());
        prop_assert_eq!(h.invariant_factors().iter().product::<u64>(), h.order());
    }

    #[test]
    fn join_and_meet_orders((g, a, b) in group_and_gens()) {
        let a = Subgroup::from_generators(&g, &a).unwrap();
        let b = Subgroup::from_generators(&g, &b).unwrap();
        let join = a.join(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(join.order() * meet.order(), a.order() * b.order());
        prop_assert!(meet.is_subgroup_of(&a) && meet.is_subgroup_of(&b));
        prop_assert!(a.is_subgroup_of(&join) && b.is_subgroup_of(&join));
        for x in g.elements() {
            prop_assert_eq!(meet.contains(&x), a.contains(&x) && b.contains(&x));
        }
    }

    #[test]
    fn sylow_parts_multiply((g, gens, _) in group_and_gens()) {
        let h = Subgroup::from_generators(&g, &gens).unwrap();
        let mut product = 1;
        let mut parts = Vec::new();
        for p in [2u64, 3, 5, 7, 11] {
            let s = h.sylow(p).unwrap();
            let mut o = s.order();
            while o.is_multiple_of(p) {
                o /= p;
            }
            prop_assert_eq!(o, 1);
            product *= s.order();
            parts.push(s);
        }
        prop_assert_eq!(product, h.order());
        prop_assert_eq!(Subgroup::join_all(&g, &parts).unwrap(), h);
    }

    #[test]
    fn gamma_is_monotone((g, gens, _) in group_and_gens(), n in 1u64..=12, m in 1u64..=4) {
        let h = Subgroup::from_generators(&g, &gens).unwrap();
        let small = h.gamma(n).unwrap();
        let large = h.gamma(n * m).unwrap();
        prop_assert!(small.is_subgroup_of(&large));
        prop_assert!(large.is_subgroup_of(&h));
        for x in h.elements().unwrap() {
            prop_assert_eq!(small.contains(&x), g.scale(n as i128, &x) == g.identity());
        }
    }

    #[test]
    fn quotient_round_trip((g, k, h) in group_and_gens()) {
        let k = Subgroup::from_generators(&g, &k).unwrap();
        let h = Subgroup::from_generators(&g, &h).unwrap();
        let q = k.quotient().unwrap();
        prop_assert_eq!(q.group().order(), k.index());
        for y in q.group().elements() {
            prop_assert_eq!(q.project(&q.section(&y)), y);
        }
        let back = q.preimage(&q.project_subgroup(&h).unwrap()).unwrap();
        prop_assert_eq!(back, h.join(&k).unwrap());
    }

    #[test]
    fn chart_round_trip((g, gens, sub) in group_and_gens()) {
        let x = Subgroup::from_generators(&g, &gens).unwrap();
        let inner = Subgroup::from_generators(&g, &sub).unwrap().intersect(&x).unwrap();
        let chart = x.chart().unwrap();
        prop_assert_eq!(chart.group().order(), x.order());
        for y in chart.group().elements() {
            prop_assert_eq!(chart.locate(&chart.embed(&y)).unwrap(), y);
        }
        prop_assert_eq!(chart.push(&chart.pull(&inner).unwrap()).unwrap(), inner);
    }
}
