use abeltrans::complements::{count_complements, enumerate_complements, is_complemented, ComplementCertificate};
use abeltrans::oracle::{oracle_common_complements, oracle_common_transversal, SubgroupCatalog};
use abeltrans::transversals::{decide_three_cyclic, verify_transversal, Verdict};
use abeltrans::{AbelianGroup, GroupElement, Subgroup};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_subgroup(g: &AbelianGroup, rng: &mut ChaCha8Rng, gens: usize) -> Subgroup {
    let gens: Vec<GroupElement> = (0..gens).map(|_| g.element_at(rng.gen_range(0..g.order()))).collect();
    Subgroup::from_generators(g, &gens).unwrap()
}

#[test]
fn catalog_closure_matches_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for orders in [vec![12, 6], vec![8, 4, 2], vec![9, 3], vec![30]] {
        let g = AbelianGroup::new(orders).unwrap();
        let catalog = SubgroupCatalog::new(&g, 4096).unwrap();
        for _ in 0..20 {
            let h = random_subgroup(&g, &mut rng, 2);
            let set = catalog.set_of(&h).unwrap();
            assert_eq!(set.order(), h.order());
            for (i, x) in g.elements().enumerate() {
                assert_eq!(set.contains(i), h.contains(&x));
            }
            assert_eq!(catalog.to_subgroup(&set).unwrap(), h);
        }
    }
}

#[test]
fn complement_counts_agree_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shapes = [vec![4, 2], vec![8, 2], vec![6, 6], vec![4, 4, 2], vec![9, 3], vec![2, 2, 2, 2]];
    for orders in shapes {
        let g = AbelianGroup::new(orders).unwrap();
        for _ in 0..10 {
            let n = rng.gen_range(1..=2);
            let a = random_subgroup(&g, &mut rng, n);
            let oracle = oracle_common_complements(std::slice::from_ref(&a), &g, 4096).unwrap();
            match is_complemented(&a, &g).unwrap() {
                None => assert!(oracle.is_empty(), "{a} in {g}"),
                Some(_) => {
                    let listed = enumerate_complements(&a, &g).unwrap();
                    assert_eq!(count_complements(&a, &g).unwrap(), oracle.len() as u64);
                    assert_eq!(listed, oracle);
                    for k in &listed {
                        assert!(ComplementCertificate::holds(&a, k));
                    }
                }
            }
        }
    }
}

#[test]
fn pinning_the_identity_loses_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let shapes = [vec![2, 2], vec![4, 2], vec![4, 4], vec![2, 2, 2], vec![8, 2], vec![3, 3], vec![4, 2, 2], vec![6, 2]];
    let mut checked = 0;
    while checked < 20 {
        let g = AbelianGroup::new(shapes.choose(&mut rng).unwrap().clone()).unwrap();
        let first = random_subgroup(&g, &mut rng, 1);
        let mut targets = vec![first.clone()];
        for _ in 0..rng.gen_range(1..=3) {
            let t = random_subgroup(&g, &mut rng, 1);
            if t.order() == first.order() {
                targets.push(t);
            }
        }
        let catalog = SubgroupCatalog::new(&g, 4096).unwrap();
        let pinned = catalog.common_transversal(&targets, true).unwrap();
        let free = catalog.common_transversal(&targets, false).unwrap();
        assert_eq!(pinned.is_some(), free.is_some());
        for t in pinned.iter().chain(free.iter()) {
            verify_transversal(t, &targets, &g).unwrap();
        }
        checked += 1;
    }
}

#[test]
fn three_cyclic_decisions_match_oracle_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shapes = [vec![4, 4], vec![8, 4], vec![4, 2, 2], vec![12, 4], vec![6, 6], vec![8, 8]];
    for orders in shapes {
        let g = AbelianGroup::new(orders).unwrap();
        let mut done = 0;
        while done < 15 {
            let a = random_subgroup(&g, &mut rng, 1);
            let b = random_subgroup(&g, &mut rng, 1);
            let c = random_subgroup(&g, &mut rng, 1);
            if a.order() != b.order() || a.order() != c.order() {
                continue;
            }
            let d = decide_three_cyclic(&a, &b, &c, &g).unwrap();
            let o = oracle_common_transversal(&[a, b, c], &g, 4096).unwrap();
            assert_eq!(d.verdict == Verdict::Exists, o.is_some());
            done += 1;
        }
    }
}
