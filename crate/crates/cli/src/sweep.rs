//! Exhaustive family runs over small abelian groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use abeltrans::complements::{
    count_common_two_cyclic_maximal, count_complements, enumerate_complements_capped, is_complemented,
    lower_bound_common_complements,
};
use abeltrans::oracle::{ElementSet, SubgroupCatalog};
use abeltrans::transversals::{construct_three_cyclic, decide_three_cyclic, verify_transversal, Verdict};
use abeltrans::{AbelianGroup, Error, Result, Subgroup};
use itertools::Itertools;
use num_rational::Ratio;
use serde::Serialize;

/// Factorizations `n = d_1 · d_2 · …` with `d_1 ≥ d_2 ≥ … ≥ 2`.
pub fn multiplicative_partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in (2..=max.min(n)).rev() {
            if n.is_multiple_of(d) {
                prefix.push(d);
                go(n / d, d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Invariant-factor forms `d_1, d_2, …` with every `d_{i+1} | d_i`: one per
/// isomorphism type of abelian group of order `n`.
pub fn invariant_forms(n: u64) -> Vec<Vec<u64>> {
    multiplicative_partitions(n).into_iter().filter(|f| f.windows(2).all(|w| w[0] % w[1] == 0)).collect()
}

/// Every cyclic subgroup of `G`, grouped by order.
pub fn cyclic_subgroups(g: &AbelianGroup) -> Result<BTreeMap<u64, Vec<Subgroup>>> {
    let mut by_order: BTreeMap<u64, BTreeSet<Subgroup>> = BTreeMap::new();
    for x in g.elements() {
        let h = Subgroup::from_generators(g, &[x])?;
        by_order.entry(h.order()).or_default().insert(h);
    }
    Ok(by_order.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect())
}

fn totient(n: u64) -> u64 {
    let mut out = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn names(subs: &[&Subgroup]) -> String {
    subs.iter().map(|s| s.to_string()).join(", ")
}

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub oracle: u64,
    pub enumeration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeCyclicGroup {
    pub orders: Vec<u64>,
    pub ordered_triples: u64,
    /// Triples up to order, each decided by the oracle once.
    pub distinct_triples: u64,
    pub exists: u64,
    pub not_exists: u64,
    /// Distinct triples for which a transversal was built and verified.
    pub constructed: u64,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeCyclicSweep {
    pub max_order: u64,
    pub groups: Vec<ThreeCyclicGroup>,
    pub ordered_triples: u64,
    pub distinct_triples: u64,
    pub not_exists: u64,
    pub case_tags: BTreeMap<String, u64>,
    pub disagreements: u64,
}

/// Decision against oracle over every ordered triple of equal-order cyclic
/// subgroups, for every factorization of every order up to `max_order`.
pub fn three_cyclic(max_order: u64, caps: Caps) -> Result<ThreeCyclicSweep> {
    let mut sweep = ThreeCyclicSweep {
        max_order,
        groups: Vec::new(),
        ordered_triples: 0,
        distinct_triples: 0,
        not_exists: 0,
        case_tags: BTreeMap::new(),
        disagreements: 0,
    };
    for n in 2..=max_order {
        for orders in multiplicative_partitions(n) {
            let record = three_cyclic_group(&orders, caps, &mut sweep.case_tags)?;
            sweep.ordered_triples += record.ordered_triples;
            sweep.distinct_triples += record.distinct_triples;
            sweep.not_exists += record.not_exists;
            sweep.disagreements += record.disagreements.len() as u64;
            sweep.groups.push(record);
        }
    }
    Ok(sweep)
}

pub fn three_cyclic_group(
    orders: &[u64],
    caps: Caps,
    case_tags: &mut BTreeMap<String, u64>,
) -> Result<ThreeCyclicGroup> {
    let g = AbelianGroup::new(orders.iter().copied())?;
    let catalog = SubgroupCatalog::new(&g, caps.oracle)?;
    let mut rec = ThreeCyclicGroup {
        orders: orders.to_vec(),
        ordered_triples: 0,
        distinct_triples: 0,
        exists: 0,
        not_exists: 0,
        constructed: 0,
        disagreements: Vec::new(),
    };
    for class in cyclic_subgroups(&g)?.values() {
        let k = class.len();
        let mut oracle: HashMap<(usize, usize, usize), bool> = HashMap::new();
        for (i, j, l) in (0..k).flat_map(|i| (i..k).flat_map(move |j| (j..k).map(move |l| (i, j, l)))) {
            let targets = [class[i].clone(), class[j].clone(), class[l].clone()];
            let witness = catalog.common_transversal(&targets, true)?;
            if let Some(w) = &witness {
                if let Err(e) = verify_transversal(w, &targets, &g) {
                    rec.disagreements.push(format!(
                        "oracle witness for {} rejected: {e}",
                        names(&[&targets[0], &targets[1], &targets[2]])
                    ));
                }
            }
            let verdict = decide_three_cyclic(&targets[0], &targets[1], &targets[2], &g)?.verdict;
            if verdict == Verdict::Exists && witness.is_some() {
                construct_three_cyclic(&targets[0], &targets[1], &targets[2], &g)?;
                rec.constructed += 1;
            }
            rec.distinct_triples += 1;
            oracle.insert((i, j, l), witness.is_some());
        }
        for (i, j, l) in (0..k).flat_map(|i| (0..k).flat_map(move |j| (0..k).map(move |l| (i, j, l)))) {
            let d = decide_three_cyclic(&class[i], &class[j], &class[l], &g)?;
            let mut key = [i, j, l];
            key.sort_unstable();
            let found = oracle[&(key[0], key[1], key[2])];
            rec.ordered_triples += 1;
            *case_tags.entry(d.case_tag.to_string()).or_default() += 1;
            match d.verdict {
                Verdict::Exists => rec.exists += 1,
                Verdict::NotExists => rec.not_exists += 1,
            }
            if found != (d.verdict == Verdict::Exists) {
                rec.disagreements.push(format!(
                    "{}: decision {} ({}), oracle {}",
                    names(&[&class[i], &class[j], &class[l]]),
                    d.verdict,
                    d.case_tag,
                    if found { "exists" } else { "not-exists" }
                ));
            }
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementGroup {
    pub orders: Vec<u64>,
    pub subgroups: u64,
    pub complemented: u64,
    /// `exhaustive`: every subgroup checked three ways. `representative`:
    /// the formula for every subgroup, enumeration and oracle for one
    /// subgroup per isomorphism type.
    pub mode: String,
    /// Subgroups whose count was checked against enumeration and oracle.
    pub cross_checked: u64,
    pub complements: u128,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementSweep {
    pub max_order: u64,
    pub work_budget: u64,
    pub groups: Vec<ComplementGroup>,
    pub subgroups: u64,
    pub complemented: u64,
    pub cross_checked: u64,
    pub representative_groups: u64,
    pub disagreements: u64,
}

/// Default bound on oracle and enumeration work per group before falling
/// back to one subgroup per isomorphism type.
pub const COMPLEMENT_WORK_BUDGET: u64 = 40_000_000;

/// Cost of one enumerated complement in units of oracle subset tests.
const ENUMERATION_WEIGHT: u128 = 200;

/// Formula, enumeration and oracle counts of complements for every subgroup
/// of every abelian group of order up to `max_order`, one group per
/// isomorphism type.
pub fn complements(max_order: u64, caps: Caps, work_budget: u64) -> Result<ComplementSweep> {
    let mut sweep = ComplementSweep {
        max_order,
        work_budget,
        groups: Vec::new(),
        subgroups: 0,
        complemented: 0,
        cross_checked: 0,
        representative_groups: 0,
        disagreements: 0,
    };
    for n in 1..=max_order {
        for orders in invariant_forms(n) {
            let rec = complement_group(&orders, caps, work_budget)?;
            sweep.subgroups += rec.subgroups;
            sweep.complemented += rec.complemented;
            sweep.cross_checked += rec.cross_checked;
            sweep.representative_groups += u64::from(rec.mode == "representative");
            sweep.disagreements += rec.disagreements.len() as u64;
            sweep.groups.push(rec);
        }
    }
    Ok(sweep)
}

struct Candidate {
    subgroup: Subgroup,
    set: ElementSet,
    formula: Option<u64>,
}

pub fn complement_group(orders: &[u64], caps: Caps, work_budget: u64) -> Result<ComplementGroup> {
    let g = AbelianGroup::new(orders.iter().copied())?;
    let mut catalog = SubgroupCatalog::new(&g, caps.oracle)?;
    let mut by_order: BTreeMap<u64, Vec<ElementSet>> = BTreeMap::new();
    for d in (1..=g.order()).filter(|d| g.order() % d == 0) {
        by_order.insert(d, catalog.sets_of_order(d));
    }
    let mut rec = ComplementGroup {
        orders: orders.to_vec(),
        subgroups: 0,
        complemented: 0,
        mode: String::new(),
        cross_checked: 0,
        complements: 0,
        disagreements: Vec::new(),
    };
    let mut all = Vec::new();
    for sets in by_order.values() {
        for set in sets {
            let subgroup = catalog.to_subgroup(set)?;
            let formula = match is_complemented(&subgroup, &g)? {
                Some(_) => Some(count_complements(&subgroup, &g)?),
                None => None,
            };
            all.push(Candidate { subgroup, set: set.clone(), formula });
        }
    }
    all.sort_by(|a, b| a.subgroup.cmp(&b.subgroup));
    rec.subgroups = all.len() as u64;
    rec.complemented = all.iter().filter(|c| c.formula.is_some()).count() as u64;
    rec.complements = all.iter().filter_map(|c| c.formula).map(u128::from).sum();

    let oracle_work: u64 = all.iter().map(|c| by_order[&(g.order() / c.subgroup.order())].len() as u64).sum();
    let enum_work: u128 = rec.complements * ENUMERATION_WEIGHT;
    let exhaustive = u128::from(oracle_work) + enum_work <= u128::from(work_budget);
    rec.mode = if exhaustive { "exhaustive" } else { "representative" }.to_string();

    // Isomorphism type and complementedness determine the count.
    let mut seen: BTreeMap<(Vec<u64>, bool), u64> = BTreeMap::new();
    for c in &all {
        let key = (c.subgroup.invariant_factors().to_vec(), c.formula.is_some());
        let first = !seen.contains_key(&key);
        if let Some(&f) = seen.get(&key) {
            if c.formula.is_some() && Some(f) != c.formula {
                rec.disagreements
                    .push(format!("{}: formula {:?} differs within its isomorphism type", c.subgroup, c.formula));
            }
        } else {
            seen.insert(key, c.formula.unwrap_or(0));
        }
        if !exhaustive && !first {
            continue;
        }
        rec.cross_checked += 1;
        let cands = &by_order[&(g.order() / c.subgroup.order())];
        let oracle = cands.iter().filter(|k| k.meets_trivially(&c.set)).count() as u64;
        match c.formula {
            None if oracle > 0 => rec
                .disagreements
                .push(format!("{}: no complement found by projection search, oracle finds {oracle}", c.subgroup)),
            None => {}
            Some(f) => {
                let listed = enumerate_complements_capped(&c.subgroup, &g, caps.enumeration)?;
                if f != oracle || listed.len() as u64 != f {
                    rec.disagreements.push(format!(
                        "{}: formula {f}, enumeration {}, oracle {oracle}",
                        c.subgroup,
                        listed.len()
                    ));
                }
            }
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalCyclicGroup {
    pub orders: Vec<u64>,
    pub maximal_cyclic: u64,
    pub pairs: u64,
    /// Pairs meeting trivially, where the count equals `φ(s)`.
    pub sharp_pairs: u64,
    pub families: u64,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalCyclicSweep {
    pub primes: Vec<u64>,
    pub max_order: u64,
    pub max_family: usize,
    pub groups: Vec<MaximalCyclicGroup>,
    pub pairs: u64,
    pub sharp_pairs: u64,
    pub families: u64,
    /// Families counted by `ω`.
    pub omega_histogram: BTreeMap<u64, u64>,
    pub disagreements: u64,
}

/// Pairs and families of cyclic subgroups of maximal order in every abelian
/// `p`-group of order up to `max_order`: the two-subgroup count formula, the
/// `φ(s)/s` proportion and the `ω` lower bound, each against the oracle.
pub fn maximal_cyclic(primes: &[u64], max_order: u64, max_family: usize, caps: Caps) -> Result<MaximalCyclicSweep> {
    let mut sweep = MaximalCyclicSweep {
        primes: primes.to_vec(),
        max_order,
        max_family,
        groups: Vec::new(),
        pairs: 0,
        sharp_pairs: 0,
        families: 0,
        omega_histogram: BTreeMap::new(),
        disagreements: 0,
    };
    for &p in primes {
        if !(2..=max_order).contains(&p) {
            continue;
        }
        let mut q = p;
        while q <= max_order {
            for orders in invariant_forms(q) {
                let rec = maximal_cyclic_group(&orders, p, max_family, caps, &mut sweep.omega_histogram)?;
                sweep.pairs += rec.pairs;
                sweep.sharp_pairs += rec.sharp_pairs;
                sweep.families += rec.families;
                sweep.disagreements += rec.disagreements.len() as u64;
                sweep.groups.push(rec);
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    Ok(sweep)
}

pub fn maximal_cyclic_group(
    orders: &[u64],
    p: u64,
    max_family: usize,
    caps: Caps,
    omega_histogram: &mut BTreeMap<u64, u64>,
) -> Result<MaximalCyclicGroup> {
    let g = AbelianGroup::new(orders.iter().copied())?;
    let mut catalog = SubgroupCatalog::new(&g, caps.oracle)?;
    let maximal = cyclic_subgroups(&g)?.remove(&g.exponent()).unwrap_or_default();
    if maximal.len() > 128 {
        return Err(Error::BudgetExceeded {
            what: "maximal cyclic subgroups",
            needed: maximal.len() as u128,
            cap: 128,
        });
    }
    let mut rec = MaximalCyclicGroup {
        orders: orders.to_vec(),
        maximal_cyclic: maximal.len() as u64,
        pairs: 0,
        sharp_pairs: 0,
        families: 0,
        disagreements: Vec::new(),
    };
    let s = g.order() / g.exponent();
    let sets = maximal.iter().map(|a| catalog.set_of(a)).collect::<Result<Vec<_>>>()?;
    // Bit i of a candidate's mask: it meets the i-th maximal cyclic subgroup trivially.
    let masks: Vec<u128> = catalog
        .sets_of_order(s)
        .iter()
        .map(|k| sets.iter().enumerate().filter(|(_, a)| a.meets_trivially(k)).fold(0u128, |m, (i, _)| m | 1 << i))
        .collect();
    let oracle_count = |family: u128| masks.iter().filter(|&&m| m & family == family).count() as u64;
    let omegas = maximal.iter().map(|a| a.omega(p)).collect::<Result<Vec<_>>>()?;

    let single: Vec<u64> = (0..maximal.len()).map(|i| oracle_count(1 << i)).collect();
    for (i, a) in maximal.iter().enumerate() {
        let formula = count_complements(a, &g)?;
        if formula != s || single[i] != s {
            rec.disagreements.push(format!("{a}: expected {s} complements, formula {formula}, oracle {}", single[i]));
        }
    }
    for (i, j) in (0..maximal.len()).flat_map(|i| (i..maximal.len()).map(move |j| (i, j))) {
        let (a, b) = (&maximal[i], &maximal[j]);
        let formula = count_common_two_cyclic_maximal(a, b, &g)?;
        let oracle = oracle_count(1 << i | 1 << j);
        rec.pairs += 1;
        if formula != oracle {
            rec.disagreements.push(format!("{}: formula {formula}, oracle {oracle}", names(&[a, b])));
        }
        // |X(A,B)| / |X(A)| ≥ φ(s) / s
        if u128::from(oracle) * u128::from(s) < u128::from(totient(s)) * u128::from(single[i]) {
            rec.disagreements.push(format!("{}: proportion {oracle}/{} below φ({s})/{s}", names(&[a, b]), single[i]));
        }
        if oracle == totient(s) {
            rec.sharp_pairs += 1;
        }
    }
    for t in 1..=max_family.min(maximal.len()) {
        for family in (0..maximal.len()).combinations(t) {
            let mask = family.iter().fold(0u128, |m, &i| m | 1 << i);
            let omega = family.iter().map(|&i| &omegas[i]).collect::<BTreeSet<_>>().len() as u64;
            let bound = lower_bound_common_complements(s, p, omega)?;
            let count = oracle_count(mask);
            rec.families += 1;
            *omega_histogram.entry(omega).or_default() += 1;
            if Ratio::from_integer(count as i64) < bound {
                let members: Vec<&Subgroup> = family.iter().map(|&i| &maximal[i]).collect();
                rec.disagreements.push(format!("{}: {count} common complements, bound {bound}", names(&members)));
            }
        }
    }
    Ok(rec)
}
