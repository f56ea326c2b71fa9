//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use abeltrans::complements::{
    common_complement, is_complemented, lower_bound_common_complements, ComplementCertificate,
};
use abeltrans::oracle::{oracle_common_complements, oracle_common_transversal, SubgroupCatalog, DEFAULT_ORACLE_CAP};
use abeltrans::transversals::{
    construct_t_odd, construct_three_cyclic, construct_y_2group, decide_three_cyclic, extend_by_direct_factor,
    homocyclic_common_transversal, sigma_permutation, verify_transversal, CaseTag, Verdict,
};
use abeltrans::{AbelianGroup, GroupElement, Subgroup, DEFAULT_ENUM_CAP};
use abeltrans_cli::sweep::{self, Caps, MaximalCyclicSweep};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const CAPS: Caps = Caps { oracle: DEFAULT_ORACLE_CAP, enumeration: DEFAULT_ENUM_CAP };

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn group(orders: &[u64]) -> AbelianGroup {
    AbelianGroup::new(orders.iter().copied()).unwrap()
}

fn cyclic(g: &AbelianGroup, x: &GroupElement) -> Subgroup {
    Subgroup::from_generators(g, std::slice::from_ref(x)).unwrap()
}

/// `G = C_{p^n}² × C_{p^r}` with `b = e1`, `c = e2`, `a = e1 + e2 + e3`, so
/// that `⟨a⟩ ∩ ⟨b, c⟩` has order `p^m`. The last factor is dropped when `r = 0`.
fn configuration(p: u64, n: u32, m: u32) -> (AbelianGroup, [GroupElement; 3]) {
    let (q, r) = (p.pow(n), p.pow(n - m));
    if r == 1 {
        let g = group(&[q, q]);
        let e = [g.element(&[1, 1]).unwrap(), g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()];
        return (g, e);
    }
    let g = group(&[q, q, r]);
    let e = [g.element(&[1, 1, 1]).unwrap(), g.element(&[1, 0, 0]).unwrap(), g.element(&[0, 1, 0]).unwrap()];
    (g, e)
}

fn klein() -> Check {
    let start = Instant::now();
    let g = group(&[2, 2]);
    let subs: Vec<Subgroup> = [[1, 0], [0, 1], [1, 1]].iter().map(|v| cyclic(&g, &g.element(v).unwrap())).collect();
    let d = decide_three_cyclic(&subs[0], &subs[1], &subs[2], &g).map_err(err)?;
    let oracle = oracle_common_transversal(&subs, &g, DEFAULT_ORACLE_CAP).map_err(err)?;
    let elapsed = start.elapsed();
    ensure(d.verdict == Verdict::NotExists, || format!("decision says {}", d.verdict))?;
    ensure(oracle.is_none(), || "oracle found a transversal".into())?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("both report not-exists in {elapsed:?}"))
}

fn three_cyclic_sweep() -> Check {
    let start = Instant::now();
    let s = sweep::three_cyclic(64, CAPS).map_err(err)?;
    ensure(s.disagreements == 0, || format!("{} disagreements", s.disagreements))?;
    Ok(format!(
        "{} groups, {} ordered triples, {} without transversal, 0 disagreements in {:.0?}",
        s.groups.len(),
        s.ordered_triples,
        s.not_exists,
        start.elapsed()
    ))
}

fn case_table() -> Check {
    let mut seen = Vec::new();
    for n in 1..=3u32 {
        for m in 0..=n {
            let (g, [a, b, c]) = configuration(2, n, m);
            let subs = [cyclic(&g, &a), cyclic(&g, &b), cyclic(&g, &c)];
            let d = decide_three_cyclic(&subs[0], &subs[1], &subs[2], &g).map_err(err)?;
            let label = format!("(n,m,k)=({n},{m},0)");
            ensure(d.exponents == Some((n, m, 0)), || format!("{label}: exponents {:?}", d.exponents))?;
            if m == 0 {
                ensure(d.case_tag == CaseTag::MZero, || format!("{label}: tag {}", d.case_tag))?;
                let h = Subgroup::from_generators(&g, &[g.add(&a, &c).map_err(err)?, g.add(&b, &c).map_err(err)?])
                    .map_err(err)?;
                for s in &subs {
                    ComplementCertificate::check(s, &h).map_err(|e| format!("{label}: {e}"))?;
                }
                let oracle = oracle_common_complements(&subs, &g, DEFAULT_ORACLE_CAP).map_err(err)?;
                ensure(oracle.contains(&h), || format!("{label}: oracle does not list the complement"))?;
                let t = construct_three_cyclic(&subs[0], &subs[1], &subs[2], &g).map_err(err)?;
                verify_transversal(&t, &subs, &g).map_err(err)?;
            } else if m == n {
                ensure(d.case_tag == CaseTag::MEqualsN && d.verdict == Verdict::NotExists, || {
                    format!("{label}: {} {}", d.case_tag, d.verdict)
                })?;
                let oracle = oracle_common_transversal(&subs, &g, DEFAULT_ORACLE_CAP).map_err(err)?;
                ensure(oracle.is_none(), || format!("{label}: oracle found a transversal"))?;
            } else {
                ensure(d.case_tag == CaseTag::MBetween, || format!("{label}: tag {}", d.case_tag))?;
                let oracle = oracle_common_complements(&subs, &g, DEFAULT_ORACLE_CAP).map_err(err)?;
                ensure(oracle.is_empty(), || format!("{label}: oracle found {} common complements", oracle.len()))?;
                let y = construct_y_2group(&a, &b, &c, n, m, &g).map_err(err)?;
                let r = n - m;
                ensure(y.len() as u64 == 1 << (n + r), || format!("{label}: |Y| = {}", y.len()))?;
                verify_transversal(&y, &subs, &g).map_err(err)?;
                let catalog = SubgroupCatalog::new(&g, DEFAULT_ORACLE_CAP).map_err(err)?;
                ensure(catalog.is_common_transversal(&y, &subs).map_err(err)?, || {
                    format!("{label}: oracle rejects Y")
                })?;
            }
            seen.push(format!("{n}{m}"));
        }
    }
    Ok(format!("{} configurations: cases (i), (ii), (iii) reproduced", seen.len()))
}

fn maximal_cyclic_sweeps() -> Result<Vec<MaximalCyclicSweep>, String> {
    Ok(vec![
        sweep::maximal_cyclic(&[2], 64, 4, CAPS).map_err(err)?,
        sweep::maximal_cyclic(&[3], 243, 4, CAPS).map_err(err)?,
    ])
}

fn counting(pgroups: &[MaximalCyclicSweep]) -> Check {
    let start = Instant::now();
    let s = sweep::complements(256, CAPS, sweep::COMPLEMENT_WORK_BUDGET).map_err(err)?;
    ensure(s.disagreements == 0, || format!("{} complement disagreements", s.disagreements))?;
    let pairs: u64 = pgroups.iter().map(|m| m.pairs).sum();
    let bad: u64 = pgroups.iter().map(|m| m.disagreements).sum();
    ensure(bad == 0, || format!("{bad} disagreements in the p-group family"))?;
    Ok(format!(
        "{} subgroups ({} complemented) in {} groups, {} cross-checked against enumeration and oracle, \
         {} groups checked per isomorphism type; {} maximal cyclic pairs; {:.0?}",
        s.subgroups,
        s.complemented,
        s.groups.len(),
        s.cross_checked,
        s.representative_groups,
        pairs,
        start.elapsed()
    ))
}

fn bounds(pgroups: &[MaximalCyclicSweep]) -> Check {
    let families: u64 = pgroups.iter().map(|m| m.families).sum();
    let sharp: u64 = pgroups.iter().map(|m| m.sharp_pairs).sum();
    let bad: u64 = pgroups.iter().map(|m| m.disagreements).sum();
    ensure(bad == 0, || format!("{bad} bound violations"))?;
    for p in [2u64, 3] {
        let g = group(&[p, p]);
        let mut lines = vec![g.element(&[0, 1]).unwrap()];
        lines.extend((0..p as i64).map(|k| g.element(&[1, k]).unwrap()));
        let subs: Vec<Subgroup> = lines.iter().map(|x| cyclic(&g, x)).collect();
        ensure(subs.len() as u64 == p + 1, || "wrong number of lines".into())?;
        let oracle = oracle_common_transversal(&subs, &g, DEFAULT_ORACLE_CAP).map_err(err)?;
        ensure(oracle.is_none(), || format!("p={p}: oracle found a transversal"))?;
        let bound = lower_bound_common_complements(p, p, p + 1).map_err(err)?;
        ensure(bound <= Ratio::from_integer(0), || format!("p={p}: bound {bound} is positive"))?;
    }
    Ok(format!("{families} families and {sharp} sharp pairs within bounds; C_p² sharpness for p = 2, 3"))
}

fn complemented_classes(
    catalog: &mut SubgroupCatalog,
    g: &AbelianGroup,
    order: u64,
) -> BTreeMap<Vec<u64>, Vec<Subgroup>> {
    let mut classes: BTreeMap<Vec<u64>, Vec<Subgroup>> = BTreeMap::new();
    for s in catalog.subgroups_of_order(order).unwrap() {
        if is_complemented(&s, g).unwrap().is_some() {
            classes.entry(s.invariant_factors().to_vec()).or_default().push(s);
        }
    }
    classes
}

fn pgroup_forms(p: u64, max_order: u64, max_rank: usize) -> Vec<Vec<u64>> {
    let mut forms = Vec::new();
    let mut q = p;
    while q <= max_order {
        forms.extend(sweep::invariant_forms(q).into_iter().filter(|f| f.len() <= max_rank));
        q *= p;
    }
    forms
}

fn common_complements_sampled() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut forms = Vec::new();
    for p in [2u64, 3, 5] {
        forms.extend(pgroup_forms(p, 729, 3).into_iter().filter(|f| f.iter().product::<u64>() > p).map(|f| (p, f)));
    }
    let mut done = 0;
    let mut by_prime: BTreeMap<u64, u32> = BTreeMap::new();
    while done < 200 {
        let (p, orders) = forms.choose(&mut rng).unwrap().clone();
        let g = group(&orders);
        let mut catalog = SubgroupCatalog::new(&g, DEFAULT_ORACLE_CAP).map_err(err)?;
        let exps = abeltrans::arith::log_exact(g.order(), p).unwrap();
        let order = p.pow(rng.gen_range(1..exps));
        let classes = complemented_classes(&mut catalog, &g, order);
        let Some(class) = classes.values().collect::<Vec<_>>().choose(&mut rng).copied() else { continue };
        let t = rng.gen_range(1..=p as usize).min(class.len());
        let picked: Vec<Subgroup> = class.choose_multiple(&mut rng, t).cloned().collect();
        let label = format!("{orders:?} with {t} subgroups of order {order}");
        let h = common_complement(&picked, &g).map_err(|e| format!("{label}: {e}"))?;
        let hs = catalog.set_of(&h).map_err(err)?;
        for a in &picked {
            ComplementCertificate::check(a, &h).map_err(|e| format!("{label}: {e}"))?;
            let aset = catalog.set_of(a).map_err(err)?;
            ensure(aset.meets_trivially(&hs) && aset.order() * hs.order() == g.order(), || {
                format!("{label}: oracle rejects the complement")
            })?;
        }
        *by_prime.entry(p).or_default() += 1;
        done += 1;
    }
    Ok(format!("200 instances certified, by prime {by_prime:?}"))
}

fn embed(x: &GroupElement) -> GroupElement {
    let mut v = vec![0];
    v.extend_from_slice(x.residues());
    GroupElement(v)
}

fn constructions() -> Check {
    let mut checked = 0;
    let mut confirmed = 0;
    let mut confirm = |t: &[GroupElement], subs: &[Subgroup], g: &AbelianGroup, label: &str| -> Result<(), String> {
        verify_transversal(t, subs, g).map_err(|e| format!("{label}: {e}"))?;
        checked += 1;
        if g.order() <= 4096 {
            let found = oracle_common_transversal(subs, g, DEFAULT_ORACLE_CAP).map_err(err)?;
            ensure(found.is_some(), || format!("{label}: oracle finds no transversal"))?;
            confirmed += 1;
        }
        Ok(())
    };

    for p in [3u64, 5] {
        for n in 1..=2u32 {
            for m in 0..=n {
                let (g, [a, b, c]) = configuration(p, n, m);
                let subs = [cyclic(&g, &a), cyclic(&g, &b), cyclic(&g, &c)];
                let t = construct_t_odd(&a, &b, &c, p, n, m, &g).map_err(err)?;
                confirm(&t, &subs, &g, &format!("T p={p} n={n} m={m}"))?;
            }
        }
    }
    for n in 2..=4u32 {
        for m in 1..n {
            let (g, [a, b, c]) = configuration(2, n, m);
            let c = g.scale(3, &c);
            let subs = [cyclic(&g, &a), cyclic(&g, &b), cyclic(&g, &c)];
            let y = construct_y_2group(&a, &b, &c, n, m, &g).map_err(err)?;
            confirm(&y, &subs, &g, &format!("Y n={n} m={m}"))?;
        }
    }
    for (p, n, m) in [(2u64, 2u32, 1u32), (2, 3, 2), (3, 1, 0), (3, 1, 1), (5, 1, 0)] {
        let (x, [a, b, c]) = configuration(p, n, m);
        let t = if p == 2 {
            construct_y_2group(&a, &b, &c, n, m, &x).map_err(err)?
        } else {
            construct_t_odd(&a, &b, &c, p, n, m, &x).map_err(err)?
        };
        let mut orders = vec![p.pow(n)];
        orders.extend_from_slice(x.orders());
        let g = group(&orders);
        let first = cyclic(&g, &g.generator(0));
        let bs: Vec<Subgroup> = [a, b, c].iter().map(|v| cyclic(&g, &embed(v))).collect();
        let lifted: Vec<GroupElement> = t.iter().map(embed).collect();
        let d = extend_by_direct_factor(&first, &bs, &lifted, &g).map_err(err)?;
        let mut subs = vec![first];
        subs.extend(bs);
        confirm(&d, &subs, &g, &format!("direct factor p={p} n={n} m={m}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut homocyclic = 0;
    let mut forms = Vec::new();
    for p in [2u64, 3, 5] {
        forms.extend(pgroup_forms(p, 243, 3).into_iter().map(|f| (p, f)));
    }
    while homocyclic < 30 {
        let (p, orders) = forms.choose(&mut rng).unwrap().clone();
        let g = group(&orders);
        let mut catalog = SubgroupCatalog::new(&g, DEFAULT_ORACLE_CAP).map_err(err)?;
        let mut classes: BTreeMap<Vec<u64>, Vec<Subgroup>> = BTreeMap::new();
        let mut q = p;
        while q < g.order() {
            for s in catalog.subgroups_of_order(q).map_err(err)? {
                if s.is_homocyclic() {
                    classes.entry(s.invariant_factors().to_vec()).or_default().push(s);
                }
            }
            q *= p;
        }
        let t = rng.gen_range(2..=p as usize);
        let usable: Vec<&Vec<Subgroup>> = classes.values().filter(|c| c.len() >= t).collect();
        let Some(class) = usable.choose(&mut rng) else { continue };
        let picked: Vec<Subgroup> = class.choose_multiple(&mut rng, t).cloned().collect();
        let label = format!("homocyclic {orders:?} t={t} order {}", picked[0].order());
        let h = homocyclic_common_transversal(&picked, &g).map_err(|e| format!("{label}: {e}"))?;
        confirm(&h, &picked, &g, &label)?;
        homocyclic += 1;
    }
    Ok(format!("{checked} constructions verified, {confirmed} confirmed by the oracle"))
}

fn sigma() -> Check {
    let mut pairs = 0u64;
    for n in 2..=6u32 {
        for m in 1..n {
            let size = 1u64 << n;
            let image: Vec<u64> =
                (0..size).map(|i| sigma_permutation(n, m, i)).collect::<Result<_, _>>().map_err(err)?;
            let mut sorted = image.clone();
            sorted.sort_unstable();
            ensure(sorted.iter().copied().eq(0..size), || format!("n={n} m={m}: not a bijection"))?;
            let r = n - m;
            let two_r = 1i64 << r;
            for i in 0..size {
                for v in (i % two_r as u64..size).step_by(two_r as usize) {
                    let lhs = (i as i64 - image[i as usize] as i64) - (v as i64 - image[v as usize] as i64);
                    let rhs = Ratio::new(i as i64 - v as i64, two_r) * (two_r - 1);
                    ensure(Ratio::from_integer(lhs) == rhs, || format!("n={n} m={m} i={i} v={v}: {lhs} != {rhs}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("bijective for every 0 < m < n <= 6; identity exact on {pairs} pairs"))
}

fn determinism() -> Check {
    let runs: &[&[&str]] = &[
        &["compare", "--group", "4,4,2", "--sub", "A=1,1,1", "--sub", "B=1,0,0", "--sub", "C=0,1,0"],
        &["compare", "--group", "2,2", "--sub", "A=1,0", "--sub", "B=0,1", "--sub", "C=1,1"],
        &["compare", "--group", "9,3", "--sub", "A=1,0"],
        &["compare", "--group", "3,3,3", "--sub", "A=1,0,0", "--sub", "B=0,1,0"],
        &["sweep", "--family", "three-cyclic", "--max-order", "16"],
        &["sweep", "--family", "complements", "--max-order", "32"],
        &["sweep", "--family", "maximal-cyclic", "--primes", "2,3", "--max-order", "27"],
    ];
    let mut bytes = 0;
    for args in runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_abeltrans")).args(*args).args(["--format", "json"]).output().map_err(err)
        };
        let (first, second) = (once()?, once()?);
        ensure(first.status.success(), || format!("{args:?} exited with {}", first.status))?;
        ensure(first.stdout == second.stdout, || format!("{args:?} differs between runs"))?;
        serde_json::from_slice::<serde_json::Value>(&first.stdout).map_err(err)?;
        bytes += first.stdout.len();
    }
    Ok(format!("{} commands byte-identical across two runs ({bytes} bytes each)", runs.len()))
}

fn guarded(f: impl FnOnce() -> Check) -> Check {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    })
}

fn report(n: u32, name: &str, result: Check) -> bool {
    match &result {
        Ok(detail) => println!("PASS criterion {n} ({name}): {detail}"),
        Err(why) => println!("FAIL criterion {n} ({name}): {why}"),
    }
    result.is_ok()
}

fn main() {
    let sweeps = catch_unwind(maximal_cyclic_sweeps).unwrap_or_else(|_| Err("maximal cyclic sweep panicked".into()));
    let with_sweeps = |f: fn(&[MaximalCyclicSweep]) -> Check| match &sweeps {
        Ok(s) => guarded(|| f(s)),
        Err(e) => Err(e.clone()),
    };
    let outcomes = [
        report(1, "Klein group negativity", guarded(klein)),
        report(2, "three cyclic subgroups, exhaustive to order 64", guarded(three_cyclic_sweep)),
        report(3, "2-group case table", guarded(case_table)),
        report(4, "counting formulas", with_sweeps(counting)),
        report(5, "lower bounds and sharpness", with_sweeps(bounds)),
        report(6, "common complements, sampled", guarded(common_complements_sampled)),
        report(7, "explicit constructions", guarded(constructions)),
        report(8, "sigma permutation", guarded(sigma)),
        report(9, "deterministic output", guarded(determinism)),
    ];
    let passed = outcomes.iter().filter(|&&ok| ok).count();
    println!("{passed} of {} criteria passed", outcomes.len());
    if passed < outcomes.len() {
        std::process::exit(1);
    }
}
