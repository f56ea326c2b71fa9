//! Complements and common complements.
//!
//! `H` is a complement of `A` in `G` when `A + H = G` and `A ∩ H = 0`.

use num_rational::Ratio;

use crate::arith::{gcd, is_prime, product, totient};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement, Homomorphism};
use crate::primary::PrimaryDecomposition;
use crate::subgroup::{Subgroup, DEFAULT_ENUM_CAP};

/// Evidence that `complement` is a complement of `subject` in `ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementCertificate {
    pub subject: Subgroup,
    pub complement: Subgroup,
    pub ambient: AbelianGroup,
}

impl ComplementCertificate {
    /// Checks join, meet and order; fails with a precondition error otherwise.
    pub fn check(subject: &Subgroup, complement: &Subgroup) -> Result<Self> {
        if subject.ambient() != complement.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let ambient = subject.ambient().clone();
        let join = subject.join(complement)?;
        let meet = subject.intersect(complement)?;
        let orders_ok = subject.order().checked_mul(complement.order()) == Some(ambient.order());
        if !join.is_full() {
            return Err(Error::precondition(format!(
                "{subject} + {complement} has order {}, not {}",
                join.order(),
                ambient.order()
            )));
        }
        if !meet.is_trivial() {
            return Err(Error::precondition(format!(
                "{subject} and {complement} meet in a subgroup of order {}",
                meet.order()
            )));
        }
        if !orders_ok {
            return Err(Error::precondition("orders do not multiply to |G|"));
        }
        Ok(ComplementCertificate { subject: subject.clone(), complement: complement.clone(), ambient })
    }

    pub fn holds(subject: &Subgroup, complement: &Subgroup) -> bool {
        Self::check(subject, complement).is_ok()
    }
}

/// A set `I` of primary factors onto which `A` projects isomorphically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionWitness {
    /// Indices into [`PrimaryDecomposition::factors`].
    pub index_set: Vec<usize>,
    /// From `A` (presented by its Smith generators) onto `∏_{i∈I} G_i`.
    pub iso: Homomorphism,
}

fn require_in(a: &Subgroup, g: &AbelianGroup) -> Result<()> {
    if a.ambient() != g {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// Chooses a sub-multiset of `pool` (given as factor indices with orders)
/// whose orders equal `wanted`, in lexicographic order of index sets.
fn order_matching_subsets(pool: &[(usize, u64)], wanted: &[u64]) -> Vec<Vec<usize>> {
    fn go(
        pool: &[(usize, u64)],
        start: usize,
        remaining: &mut Vec<u64>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining.is_empty() {
            out.push(chosen.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < remaining.len() {
                break;
            }
            if let Some(pos) = remaining.iter().position(|&o| o == pool[i].1) {
                let o = remaining.remove(pos);
                chosen.push(pool[i].0);
                go(pool, i + 1, remaining, chosen, out);
                chosen.pop();
                remaining.insert(pos, o);
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, &mut wanted.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn project_coordinates(x: &GroupElement, index_set: &[usize]) -> GroupElement {
    GroupElement(index_set.iter().map(|&i| x.0[i]).collect())
}

/// Decides whether `A` has a complement in `G`, by testing projections onto
/// sets of primary factors. Returns `None` when the exhaustive search fails.
pub fn is_complemented(a: &Subgroup, g: &AbelianGroup) -> Result<Option<(ProjectionWitness, ComplementCertificate)>> {
    require_in(a, g)?;
    let dec = PrimaryDecomposition::new(g)?;
    let prim = dec.primary_group();
    let a_prim = dec.subgroup_to_primary(a)?;

    let mut index_set = Vec::new();
    for p in dec.primes() {
        let a_p = a_prim.sylow(p)?;
        if a_p.is_trivial() {
            continue;
        }
        let pool: Vec<(usize, u64)> = dec.indices_for(p).into_iter().map(|i| (i, dec.factors()[i].order)).collect();
        let mut found = None;
        for subset in order_matching_subsets(&pool, a_p.invariant_factors()) {
            let sub_group = AbelianGroup::new(subset.iter().map(|&i| prim.orders()[i]))?;
            let gens: Vec<GroupElement> =
                a_p.smith_generators().iter().map(|x| project_coordinates(x, &subset)).collect();
            if Subgroup::from_generators(&sub_group, &gens)?.order() == a_p.order() {
                found = Some(subset);
                break;
            }
        }
        match found {
            Some(s) => index_set.extend(s),
            None => return Ok(None),
        }
    }
    index_set.sort_unstable();

    let target = AbelianGroup::new(index_set.iter().map(|&i| prim.orders()[i]))?;
    let chart = a.chart()?;
    let images = a
        .smith_generators()
        .iter()
        .map(|x| Ok(project_coordinates(&dec.element_to_primary(x)?, &index_set)))
        .collect::<Result<Vec<_>>>()?;
    let iso = Homomorphism::new(chart.group().clone(), target, images)?;
    if !iso.is_bijective()? {
        return Err(Error::verification("projection witness is not bijective"));
    }

    let others: Vec<GroupElement> =
        (0..prim.rank()).filter(|i| index_set.binary_search(i).is_err()).map(|i| prim.generator(i)).collect();
    let complement = dec.subgroup_from_primary(&Subgroup::from_generators(prim, &others)?)?;
    let cert = ComplementCertificate::check(a, &complement).map_err(|e| e.into_bug("is_complemented"))?;
    Ok(Some((ProjectionWitness { index_set, iso }, cert)))
}

fn complement_of(a: &Subgroup, g: &AbelianGroup) -> Result<Subgroup> {
    is_complemented(a, g)?
        .map(|(_, c)| c.complement)
        .ok_or_else(|| Error::precondition(format!("{a} has no complement in {g}")))
}

/// `|Hom(S, T)|` for `S` with cyclic factor orders `source` and `T` with
/// invariant factors `target`.
pub fn hom_count(source: &[u64], target: &[u64]) -> Result<u64> {
    product(source.iter().flat_map(|&d| target.iter().map(move |&s| gcd(d, s))))
}

/// Calls `visit` with the generator images of every homomorphism from a
/// group with cyclic factor orders `source` into the subgroup `target`.
pub fn for_each_hom(
    source: &[u64],
    target: &Subgroup,
    cap: u64,
    mut visit: impl FnMut(&[GroupElement]) -> Result<()>,
) -> Result<()> {
    let needed = hom_count(source, target.invariant_factors())?;
    if needed > cap {
        return Err(Error::BudgetExceeded { what: "homomorphism enumeration", needed: needed as u128, cap });
    }
    let choices: Vec<Vec<GroupElement>> =
        source.iter().map(|&d| Ok(target.gamma(d)?.elements_capped(cap)?.collect())).collect::<Result<_>>()?;
    let mut idx = vec![0usize; choices.len()];
    let mut images: Vec<GroupElement> = choices.iter().map(|c| c[0].clone()).collect();
    loop {
        visit(&images)?;
        let mut i = idx.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                images[i] = choices[i][idx[i]].clone();
                break;
            }
            idx[i] = 0;
            images[i] = choices[i][0].clone();
        }
    }
}

/// All complements of `A` in `G`, sorted.
pub fn enumerate_complements(a: &Subgroup, g: &AbelianGroup) -> Result<Vec<Subgroup>> {
    enumerate_complements_capped(a, g, DEFAULT_ENUM_CAP)
}

pub fn enumerate_complements_capped(a: &Subgroup, g: &AbelianGroup, cap: u64) -> Result<Vec<Subgroup>> {
    let t = complement_of(a, g)?;
    let mut out = Vec::new();
    for_each_hom(t.invariant_factors(), a, cap, |images| {
        let gens: Vec<GroupElement> = images.iter().zip(t.smith_generators()).map(|(img, tj)| g.sub(img, tj)).collect();
        out.push(Subgroup::from_generators(g, &gens)?);
        Ok(())
    })?;
    out.sort();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::verification("distinct homomorphisms gave the same complement"));
    }
    Ok(out)
}

/// `∏_j |Γ_{n_j}(G/A)|` over the invariant factors `n_j` of `A`.
pub fn count_complements(a: &Subgroup, g: &AbelianGroup) -> Result<u64> {
    require_in(a, g)?;
    if is_complemented(a, g)?.is_none() {
        return Err(Error::precondition(format!("{a} has no complement in {g}")));
    }
    let q = a.quotient()?;
    hom_count(a.invariant_factors(), q.group().orders())
}

fn check_direct_decomposition(factors: &[&Subgroup], g: &AbelianGroup) -> Result<()> {
    for f in factors {
        require_in(f, g)?;
    }
    let total = product(factors.iter().map(|f| f.order()))?;
    let join = Subgroup::join_all(g, factors.iter().copied())?;
    if total != g.order() || !join.is_full() {
        return Err(Error::precondition("the subgroups do not form a direct decomposition of G"));
    }
    Ok(())
}

fn count_isomorphisms(a: &Subgroup, b: &Subgroup) -> Result<u64> {
    if !a.is_isomorphic_to(b) {
        return Ok(0);
    }
    let source = a.chart()?;
    let mut n = 0u64;
    for_each_hom(source.group().orders(), b, DEFAULT_ENUM_CAP, |images| {
        if Subgroup::from_generators(b.ambient(), images)?.order() == a.order() {
            n += 1;
        }
        Ok(())
    })?;
    Ok(n)
}

/// Number of common complements of `A_1, …, A_t` in `G = A_1 × … × A_t × B`:
/// `∏_{i≥2} |Iso(A_1, A_i)| · |Hom(A_1, B)|`.
pub fn count_common_complements_direct(a_list: &[Subgroup], b: &Subgroup, g: &AbelianGroup) -> Result<u64> {
    let first = a_list.first().ok_or_else(|| Error::precondition("no subgroups given"))?;
    let mut all: Vec<&Subgroup> = a_list.iter().collect();
    all.push(b);
    check_direct_decomposition(&all, g)?;
    let mut count = hom_count(first.invariant_factors(), b.invariant_factors())?;
    for ai in &a_list[1..] {
        count = count.checked_mul(count_isomorphisms(first, ai)?).ok_or(Error::Overflow("common complement count"))?;
    }
    Ok(count)
}

/// The common complements of `A_1, …, A_t` in `G = A_1 × … × A_t × B`, built
/// as graphs of maps `A_2 × … × A_t × B → A_1` that are bijective on every
/// `A_i`. Each one is checked against every `A_i`.
pub fn common_complements_direct(a_list: &[Subgroup], b: &Subgroup, g: &AbelianGroup) -> Result<Vec<Subgroup>> {
    let first = a_list.first().ok_or_else(|| Error::precondition("no subgroups given"))?;
    let mut all: Vec<&Subgroup> = a_list.iter().collect();
    all.push(b);
    check_direct_decomposition(&all, g)?;
    if a_list.iter().any(|a| !a.is_isomorphic_to(first)) {
        return Ok(Vec::new());
    }

    // Per factor, the admissible lists of generator images in A_1.
    let mut per_factor: Vec<(Vec<GroupElement>, Vec<Vec<GroupElement>>)> = Vec::new();
    for (pos, f) in a_list[1..].iter().chain(std::iter::once(b)).enumerate() {
        let bijective_only = pos + 1 < a_list.len();
        let mut maps = Vec::new();
        for_each_hom(f.invariant_factors(), first, DEFAULT_ENUM_CAP, |images| {
            if !bijective_only || Subgroup::from_generators(g, images)?.order() == first.order() {
                maps.push(images.to_vec());
            }
            Ok(())
        })?;
        per_factor.push((f.smith_generators().to_vec(), maps));
    }
    let total = product(per_factor.iter().map(|(_, m)| m.len() as u64))?;
    if total > DEFAULT_ENUM_CAP {
        return Err(Error::BudgetExceeded {
            what: "common complement construction",
            needed: total as u128,
            cap: DEFAULT_ENUM_CAP,
        });
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; per_factor.len()];
    if per_factor.iter().any(|(_, m)| m.is_empty()) {
        return Ok(out);
    }
    loop {
        let mut gens = Vec::new();
        for ((src, maps), &i) in per_factor.iter().zip(&idx) {
            for (y, img) in src.iter().zip(&maps[i]) {
                gens.push(g.add_unchecked(y, img));
            }
        }
        let k = Subgroup::from_generators(g, &gens)?;
        for a in a_list {
            ComplementCertificate::check(a, &k).map_err(|e| e.into_bug("direct common complement"))?;
        }
        out.push(k);
        let mut j = idx.len();
        loop {
            if j == 0 {
                out.sort();
                if out.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::verification("two maps gave the same common complement"));
                }
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < per_factor[j].1.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn prime_of_p_group(g: &AbelianGroup) -> Option<u64> {
    let ps = crate::arith::primes_of(g.order());
    (ps.len() == 1).then(|| ps[0])
}

/// Common complements of two cyclic subgroups of maximal order in a `p`-group:
/// `|G:A|` if they intersect nontrivially, `φ(|G:A|)` otherwise.
pub fn count_common_two_cyclic_maximal(a: &Subgroup, b: &Subgroup, g: &AbelianGroup) -> Result<u64> {
    require_in(a, g)?;
    require_in(b, g)?;
    if prime_of_p_group(g).is_none() {
        return Err(Error::precondition(format!("{g} is not a nontrivial p-group")));
    }
    for h in [a, b] {
        if !h.is_cyclic() || h.order() != g.exponent() {
            return Err(Error::precondition(format!("{h} is not cyclic of maximal order")));
        }
    }
    let index = a.index();
    Ok(if a.intersect(b)?.is_trivial() { totient(index) } else { index })
}

/// `s · (1 − (ω − 1)/p)`, the guaranteed number of common complements.
pub fn lower_bound_common_complements(s: u64, p: u64, omega: u64) -> Result<Ratio<i64>> {
    if s == 0 {
        return Err(Error::NonPositive("s"));
    }
    if omega == 0 {
        return Err(Error::NonPositive("omega"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let s = i64::try_from(s).map_err(|_| Error::Overflow("lower bound"))?;
    let p = p as i64;
    let omega = i64::try_from(omega).map_err(|_| Error::Overflow("lower bound"))?;
    Ok(Ratio::new(s * (p - omega + 1), p))
}

fn distinct(list: &[Subgroup]) -> Vec<Subgroup> {
    let mut v = list.to_vec();
    v.sort();
    v.dedup();
    v
}

fn distinct_omegas(list: &[Subgroup], p: u64) -> Result<usize> {
    let omegas = list.iter().map(|a| a.omega(p)).collect::<Result<Vec<_>>>()?;
    Ok(distinct(&omegas).len())
}

/// A common complement of `A_1, …, A_t` in `G`.
///
/// Requires every `A_i` complemented, all pairwise isomorphic, and for every
/// prime `p` either at most `p` distinct Sylow `p`-parts or cyclic Sylow
/// `p`-parts with at most `p` distinct `Ω`. The result is checked against
/// every `A_i` before it is returned.
pub fn common_complement(a_list: &[Subgroup], g: &AbelianGroup) -> Result<Subgroup> {
    let first = a_list.first().ok_or_else(|| Error::precondition("no subgroups given"))?;
    for a in a_list {
        require_in(a, g)?;
        if !a.is_isomorphic_to(first) {
            return Err(Error::precondition(format!("{a} and {first} are not isomorphic")));
        }
        if is_complemented(a, g)?.is_none() {
            return Err(Error::precondition(format!("{a} has no complement in {g}")));
        }
    }
    let a_list = distinct(a_list);

    let mut parts = Vec::new();
    for p in crate::arith::primes_of(g.order()) {
        let g_p = g.full().sylow(p)?;
        let sylows = distinct(&a_list.iter().map(|a| a.sylow(p)).collect::<Result<Vec<_>>>()?);
        if sylows[0].is_trivial() {
            parts.push(g_p);
            continue;
        }
        let few = sylows.len() as u64 <= p;
        let cyclic_few = sylows[0].is_cyclic() && distinct_omegas(&sylows, p)? as u64 <= p;
        if !few && !cyclic_few {
            return Err(Error::precondition(format!("{} distinct Sylow {p}-parts exceed {p}", sylows.len())));
        }
        let chart = g_p.chart()?;
        let pulled = sylows.iter().map(|s| chart.pull(s)).collect::<Result<Vec<_>>>()?;
        let k = solve_p_group(chart.group(), &pulled, p)?;
        parts.push(chart.push(&k)?);
    }
    let k = Subgroup::join_all(g, &parts)?;
    for a in &a_list {
        ComplementCertificate::check(a, &k).map_err(|e| e.into_bug("common_complement"))?;
    }
    Ok(k)
}

/// Common complement inside a `p`-group whose factors are its own coordinates.
fn solve_p_group(group: &AbelianGroup, a_list: &[Subgroup], p: u64) -> Result<Subgroup> {
    let a_list = distinct(a_list);
    if a_list[0].is_trivial() {
        return Ok(group.full());
    }
    if a_list[0].is_cyclic() {
        return cyclic_base(group, &a_list, p);
    }
    // Split off the cyclic factor of largest order, complement those first.
    let heads = a_list
        .iter()
        .map(|a| {
            let g = a.smith_generators().last().expect("nontrivial").clone();
            Subgroup::from_generators(group, &[g])
        })
        .collect::<Result<Vec<_>>>()?;
    let h = solve_p_group(group, &heads, p)?;
    let chart = h.chart()?;
    let rests = a_list.iter().map(|a| chart.pull(&a.intersect(&h)?)).collect::<Result<Vec<_>>>()?;
    let l = solve_p_group(chart.group(), &rests, p)?;
    chart.push(&l)
}

/// Cyclic case: pick for every `A_j = ⟨a_j⟩` a coordinate on which `a_j`
/// projects isomorphically, and cut the span `H` of those coordinates by a
/// hyperplane that misses every `Ω(A_j)`.
fn cyclic_base(group: &AbelianGroup, a_list: &[Subgroup], p: u64) -> Result<Subgroup> {
    let e_order = a_list[0].order();
    let gens: Vec<&GroupElement> = a_list.iter().map(|a| &a.smith_generators()[0]).collect();
    let mut chosen = Vec::new();
    for a in &gens {
        let i = (0..group.rank())
            .find(|&i| group.orders()[i] == e_order && a.0[i] % p != 0)
            .ok_or_else(|| Error::verification(format!("{a} has no isomorphic coordinate projection")))?;
        chosen.push(i);
    }
    chosen.sort_unstable();
    chosen.dedup();
    let s = chosen.len();
    let betas: Vec<Vec<u64>> = gens.iter().map(|a| chosen.iter().map(|&i| a.0[i] % p).collect()).collect();

    // Ω(H) viewed inside the group; its maximal subgroups are kernels of
    // normalized functionals f on F_p^s.
    let scale = e_order / p;
    let mut candidates: Vec<(Subgroup, Vec<u64>)> = Vec::new();
    let total = (p as u128).pow(s as u32);
    if total > DEFAULT_ENUM_CAP as u128 {
        return Err(Error::BudgetExceeded { what: "hyperplane scan", needed: total, cap: DEFAULT_ENUM_CAP });
    }
    for code in 1..total as u64 {
        let mut f = vec![0u64; s];
        let mut c = code;
        for slot in f.iter_mut().rev() {
            *slot = c % p;
            c /= p;
        }
        if f.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let pivot = f.iter().position(|&x| x == 1).expect("normalized");
        let kernel_gens: Vec<GroupElement> = (0..s)
            .filter(|&i| i != pivot)
            .map(|i| {
                let mut v = vec![0u64; group.rank()];
                v[chosen[i]] = scale;
                v[chosen[pivot]] = ((p - f[i]) % p) * scale;
                GroupElement(v)
            })
            .collect();
        candidates.push((Subgroup::from_generators(group, &kernel_gens)?, f));
    }
    candidates.sort();
    let f = candidates
        .into_iter()
        .map(|(_, f)| f)
        .find(|f| betas.iter().all(|b| b.iter().zip(f).map(|(x, y)| x * y).sum::<u64>() % p != 0))
        .ok_or_else(|| Error::precondition("every maximal subgroup of Ω(H) meets some Ω(A_i)"))?;

    let pivot = f.iter().position(|&x| x == 1).expect("normalized");
    let mut out_gens: Vec<GroupElement> = (0..s)
        .filter(|&i| i != pivot)
        .map(|i| {
            let mut v = vec![0u64; group.rank()];
            v[chosen[i]] = 1;
            v[chosen[pivot]] = (e_order - f[i] % e_order) % e_order;
            GroupElement(v)
        })
        .collect();
    out_gens.extend((0..group.rank()).filter(|i| !chosen.contains(i)).map(|i| group.generator(i)));
    Subgroup::from_generators(group, &out_gens)
}
