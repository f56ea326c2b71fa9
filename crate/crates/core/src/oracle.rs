//! Brute-force ground truth on small groups.
//!
//! Everything here works on explicit element sets (bitsets over the group's
//! elements in index order) and never consults the lattice machinery, except
//! to convert final answers into [`Subgroup`] values.

use std::collections::HashSet;

use crate::error::{Error, Result, TransversalDefect};
use crate::group::{AbelianGroup, GroupElement};
use crate::subgroup::Subgroup;

/// Default cap on `|G|` for oracle searches.
pub const DEFAULT_ORACLE_CAP: u64 = 4096;

/// A subgroup as an explicit set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: Vec<u64>,
    order: u64,
    gens: Vec<usize>,
}

impl ElementSet {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    fn insert(&mut self, index: usize) -> bool {
        let fresh = !self.contains(index);
        self.bits[index / 64] |= 1 << (index % 64);
        fresh
    }

    /// Members in increasing index order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
    }

    /// True when the two sets share only the identity.
    pub fn meets_trivially(&self, other: &ElementSet) -> bool {
        let mut shared = self.bits.iter().zip(&other.bits).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
        shared -= 1;
        shared == 0
    }
}

/// Element arithmetic by index, plus a lazily filled table of subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupCatalog {
    group: AbelianGroup,
    elements: Vec<GroupElement>,
    /// Row-major addition table, present for small groups.
    table: Option<Vec<u32>>,
    /// For each element, the indices of its prime multiples `p·x` for the
    /// primes `p` dividing its order.
    prime_multiples: Vec<Vec<usize>>,
    /// Subgroups of every order dividing `limit`, once computed.
    cached: Option<(u64, Vec<ElementSet>)>,
}

impl SubgroupCatalog {
    pub fn new(group: &AbelianGroup, cap: u64) -> Result<Self> {
        if group.order() > cap {
            return Err(Error::BudgetExceeded { what: "oracle group size", needed: group.order() as u128, cap });
        }
        let elements: Vec<GroupElement> = group.elements().collect();
        let n = elements.len();
        let table = (n <= 1024).then(|| {
            let mut t = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    let s = group.add_unchecked(&elements[x], &elements[y]);
                    t[x * n + y] = group.index_of(&s) as u32;
                }
            }
            t
        });
        let prime_multiples = elements
            .iter()
            .map(|x| {
                crate::arith::primes_of(group.element_order(x))
                    .into_iter()
                    .map(|p| group.index_of(&group.scale(p as i128, x)) as usize)
                    .collect()
            })
            .collect();
        Ok(SubgroupCatalog { group: group.clone(), elements, table, prime_multiples, cached: None })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn element(&self, index: usize) -> &GroupElement {
        &self.elements[index]
    }

    fn add(&self, x: usize, y: usize) -> usize {
        if let Some(t) = &self.table {
            return t[x * self.elements.len() + y] as usize;
        }
        let s = self.group.add_unchecked(&self.elements[x], &self.elements[y]);
        self.group.index_of(&s) as usize
    }

    fn empty(&self) -> ElementSet {
        let words = self.elements.len().div_ceil(64);
        let mut s = ElementSet { bits: vec![0; words], order: 0, gens: Vec::new() };
        s.insert(0);
        s.order = 1;
        s
    }

    /// `⟨S, x⟩` built as the union of the cosets `S + k·x`.
    fn extend(&self, s: &ElementSet, x: usize) -> ElementSet {
        let mut out = s.clone();
        out.gens.push(x);
        let base: Vec<usize> = s.members().collect();
        let mut shift = x;
        while !s.contains(shift) {
            for &b in &base {
                out.insert(self.add(b, shift));
            }
            shift = self.add(shift, x);
        }
        out.order = out.bits.iter().map(|w| w.count_ones() as u64).sum();
        out
    }

    /// The closure of a list of elements.
    pub fn closure(&self, gens: &[GroupElement]) -> Result<ElementSet> {
        let mut s = self.empty();
        for g in gens {
            self.group.check(g)?;
            let x = self.group.index_of(g) as usize;
            if !s.contains(x) {
                s = self.extend(&s, x);
            }
        }
        Ok(s)
    }

    /// The element set of a library subgroup, rebuilt from its generators.
    pub fn set_of(&self, h: &Subgroup) -> Result<ElementSet> {
        if h.ambient() != &self.group {
            return Err(Error::AmbientMismatch);
        }
        self.closure(h.smith_generators())
    }

    pub fn to_subgroup(&self, s: &ElementSet) -> Result<Subgroup> {
        let gens: Vec<GroupElement> = s.gens.iter().map(|&i| self.elements[i].clone()).collect();
        Subgroup::from_generators(&self.group, &gens)
    }

    /// All subgroups whose order divides `limit`, by breadth-first extension
    /// of smaller subgroups by single elements.
    fn fill(&mut self, limit: u64) {
        if let Some((l, _)) = &self.cached {
            if l % limit == 0 {
                return;
            }
        }
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let start = self.empty();
        seen.insert(start.bits.clone());
        let mut all = vec![start];
        let mut next = 0;
        while next < all.len() {
            let s = all[next].clone();
            next += 1;
            // Every element of a prime-index cover T \ S generates T over S,
            // so each cover is built once.
            let mut done = s.clone();
            for x in 0..self.elements.len() {
                if done.contains(x) || !self.prime_multiples[x].iter().any(|&px| s.contains(px)) {
                    continue;
                }
                let t = self.extend(&s, x);
                for (d, w) in done.bits.iter_mut().zip(&t.bits) {
                    *d |= w;
                }
                if !limit.is_multiple_of(t.order) || !seen.insert(t.bits.clone()) {
                    continue;
                }
                all.push(t);
            }
        }
        self.cached = Some((limit, all));
    }

    /// Subgroups of exactly the given order, as element sets.
    pub fn sets_of_order(&mut self, order: u64) -> Vec<ElementSet> {
        if order == 0 || !self.group.order().is_multiple_of(order) {
            return Vec::new();
        }
        self.fill(order);
        let (_, all) = self.cached.as_ref().expect("filled");
        all.iter().filter(|s| s.order == order).cloned().collect()
    }

    pub fn subgroups_of_order(&mut self, order: u64) -> Result<Vec<Subgroup>> {
        let mut out = self.sets_of_order(order).iter().map(|s| self.to_subgroup(s)).collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    /// Coset index of every element, for the subgroup `h`.
    fn coset_labels(&self, h: &ElementSet) -> Vec<u32> {
        let members: Vec<usize> = h.members().collect();
        let mut label = vec![u32::MAX; self.elements.len()];
        let mut next = 0;
        for x in 0..self.elements.len() {
            if label[x] != u32::MAX {
                continue;
            }
            for &y in &members {
                label[self.add(x, y)] = next;
            }
            next += 1;
        }
        label
    }

    /// True when `elements` hits every coset of every target exactly once.
    pub fn is_common_transversal(&self, elements: &[GroupElement], targets: &[Subgroup]) -> Result<bool> {
        for t in targets {
            let set = self.set_of(t)?;
            if elements.len() as u64 * set.order() != self.group.order() {
                return Ok(false);
            }
            let labels = self.coset_labels(&set);
            let mut hit = vec![false; elements.len()];
            for x in elements {
                self.group.check(x)?;
                let l = labels[self.group.index_of(x) as usize] as usize;
                if std::mem::replace(&mut hit[l], true) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Exact-cover search for a common transversal of `targets`.
    ///
    /// With `pin_identity` the identity is forced into the answer.
    pub fn common_transversal(&self, targets: &[Subgroup], pin_identity: bool) -> Result<Option<Vec<GroupElement>>> {
        if targets.is_empty() {
            return Err(Error::precondition("no target subgroups"));
        }
        let sets = targets.iter().map(|t| self.set_of(t)).collect::<Result<Vec<_>>>()?;
        let indices: Vec<u64> = sets.iter().map(|s| self.group.order() / s.order()).collect();
        if indices.iter().any(|&m| m != indices[0]) {
            return Err(Error::NotATransversal(TransversalDefect::UnequalIndex { indices }));
        }
        let labels: Vec<Vec<u32>> = sets.iter().map(|s| self.coset_labels(s)).collect();
        let mut search = ExactCover::new(labels, indices[0] as usize);
        let found = if pin_identity {
            if search.pick(0) {
                search.solve()
            } else {
                false
            }
        } else {
            search.solve()
        };
        if !found {
            return Ok(None);
        }
        let mut out: Vec<GroupElement> = search.chosen.iter().map(|&i| self.elements[i].clone()).collect();
        out.sort();
        Ok(Some(out))
    }
}

/// Backtracking over (target, coset) cells, most constrained cell first.
struct ExactCover {
    labels: Vec<Vec<u32>>,
    members: Vec<Vec<Vec<usize>>>,
    used: Vec<Vec<bool>>,
    avail: Vec<Vec<u32>>,
    blocked: Vec<u32>,
    chosen: Vec<usize>,
    m: usize,
}

impl ExactCover {
    fn new(labels: Vec<Vec<u32>>, m: usize) -> Self {
        let n = labels[0].len();
        let mut members = vec![vec![Vec::new(); m]; labels.len()];
        for (t, lab) in labels.iter().enumerate() {
            for (x, &c) in lab.iter().enumerate() {
                members[t][c as usize].push(x);
            }
        }
        let avail = members.iter().map(|cells| cells.iter().map(|c| c.len() as u32).collect()).collect();
        ExactCover {
            used: vec![vec![false; m]; labels.len()],
            labels,
            members,
            avail,
            blocked: vec![0; n],
            chosen: Vec::new(),
            m,
        }
    }

    fn set_block(&mut self, x: usize, up: bool) {
        for t in 0..self.labels.len() {
            let c = self.labels[t][x] as usize;
            self.used[t][c] = up;
            for i in 0..self.members[t][c].len() {
                let y = self.members[t][c][i];
                if up {
                    self.blocked[y] += 1;
                    if self.blocked[y] == 1 {
                        for t2 in 0..self.labels.len() {
                            self.avail[t2][self.labels[t2][y] as usize] -= 1;
                        }
                    }
                } else {
                    self.blocked[y] -= 1;
                    if self.blocked[y] == 0 {
                        for t2 in 0..self.labels.len() {
                            self.avail[t2][self.labels[t2][y] as usize] += 1;
                        }
                    }
                }
            }
        }
    }

    /// Takes `x` if it is still available.
    fn pick(&mut self, x: usize) -> bool {
        if self.blocked[x] > 0 {
            return false;
        }
        self.set_block(x, true);
        self.chosen.push(x);
        true
    }

    fn unpick(&mut self) {
        let x = self.chosen.pop().expect("nonempty");
        self.set_block(x, false);
    }

    fn solve(&mut self) -> bool {
        if self.chosen.len() == self.m {
            return true;
        }
        let mut best: Option<(u32, usize, usize)> = None;
        for t in 0..self.used.len() {
            for c in 0..self.m {
                if !self.used[t][c] && best.is_none_or(|(a, _, _)| self.avail[t][c] < a) {
                    best = Some((self.avail[t][c], t, c));
                }
            }
        }
        let Some((count, t, c)) = best else { return false };
        if count == 0 {
            return false;
        }
        let candidates: Vec<usize> = self.members[t][c].iter().copied().filter(|&y| self.blocked[y] == 0).collect();
        for y in candidates {
            self.pick(y);
            if self.solve() {
                return true;
            }
            self.unpick();
        }
        false
    }
}

/// Every subgroup of `G` of the given order.
pub fn oracle_enumerate_subgroups(g: &AbelianGroup, order: u64, cap: u64) -> Result<Vec<Subgroup>> {
    SubgroupCatalog::new(g, cap)?.subgroups_of_order(order)
}

/// Subgroups of order `|G|/|A_1|` meeting every `A_i` trivially.
pub fn oracle_common_complements(a_list: &[Subgroup], g: &AbelianGroup, cap: u64) -> Result<Vec<Subgroup>> {
    let mut catalog = SubgroupCatalog::new(g, cap)?;
    common_complements_in(&mut catalog, a_list)
}

/// [`oracle_common_complements`] against a shared catalog.
pub fn common_complements_in(catalog: &mut SubgroupCatalog, a_list: &[Subgroup]) -> Result<Vec<Subgroup>> {
    let sets = common_complement_sets(catalog, a_list)?;
    let mut out = sets.iter().map(|s| catalog.to_subgroup(s)).collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// The number of common complements, without building [`Subgroup`] values.
pub fn count_common_complements_in(catalog: &mut SubgroupCatalog, a_list: &[Subgroup]) -> Result<u64> {
    Ok(common_complement_sets(catalog, a_list)?.len() as u64)
}

fn common_complement_sets(catalog: &mut SubgroupCatalog, a_list: &[Subgroup]) -> Result<Vec<ElementSet>> {
    let first = a_list.first().ok_or_else(|| Error::precondition("no subgroups given"))?;
    if a_list.iter().any(|a| a.order() != first.order()) {
        return Err(Error::precondition("subgroups of different orders"));
    }
    let sets = a_list.iter().map(|a| catalog.set_of(a)).collect::<Result<Vec<_>>>()?;
    let order = catalog.group().order() / first.order();
    Ok(catalog.sets_of_order(order).into_iter().filter(|k| sets.iter().all(|a| a.meets_trivially(k))).collect())
}

/// Exact-cover search with the identity pinned into the answer.
pub fn oracle_common_transversal(
    targets: &[Subgroup],
    g: &AbelianGroup,
    cap: u64,
) -> Result<Option<Vec<GroupElement>>> {
    SubgroupCatalog::new(g, cap)?.common_transversal(targets, true)
}
