//! Explicit common transversals for cyclic triples, direct factors and
//! homocyclic families.

use crate::arith::{is_prime, log_exact};
use crate::complements::common_complement;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::subgroup::{Subgroup, DEFAULT_ENUM_CAP};

use super::{check_output_size, lift_transversal, verify_transversal, verify_transversal_in};

/// `σ(i) = t·2^m + (i − t)/2^r` with `r = n − m` and `t = i mod 2^r`.
pub fn sigma_permutation(n: u32, m: u32, i: u64) -> Result<u64> {
    if !(0 < m && m < n && n < 64) {
        return Err(Error::precondition(format!("need 0 < m < n < 64, got n={n}, m={m}")));
    }
    if i >= 1u64 << n {
        return Err(Error::precondition(format!("i={i} is outside 0..2^{n}")));
    }
    let r = n - m;
    let t = i & ((1u64 << r) - 1);
    Ok((t << m) + ((i - t) >> r))
}

fn cyclic(g: &AbelianGroup, x: &GroupElement) -> Result<Subgroup> {
    Subgroup::from_generators(g, std::slice::from_ref(x))
}

/// Replaces `b, c` by generators `u·b, v·c` of the same subgroups so that
/// `p^r·a = p^r·(u·b + v·c)` with `r = n − m`, taking the smallest `(u, v)`.
/// When `m = 0` the generators are returned unchanged.
pub fn normalize_generators(
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
    p: u64,
    n: u32,
    m: u32,
    g: &AbelianGroup,
) -> Result<(GroupElement, GroupElement)> {
    if m == 0 {
        return Ok((b.clone(), c.clone()));
    }
    let pr = p.pow(n - m) as i128;
    let pm = p.pow(m);
    if pm.saturating_mul(pm) > DEFAULT_ENUM_CAP {
        return Err(Error::BudgetExceeded {
            what: "generator normalization",
            needed: pm as u128 * pm as u128,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let goal = g.scale(pr, a);
    for u in (1..pm).filter(|u| u % p != 0) {
        for v in (1..pm).filter(|v| v % p != 0) {
            let sum = g.combination(&[u as i128, v as i128], &[b.clone(), c.clone()]);
            if g.scale(pr, &sum) == goal {
                return Ok((g.scale(u as i128, b), g.scale(v as i128, c)));
            }
        }
    }
    Err(Error::precondition(format!(
        "no generators b', c' with {pr}·a = {pr}·(b' + c'); the intersection data is inconsistent"
    )))
}

/// Checks the shared hypotheses of the cyclic-triple constructions and
/// returns the three subgroups.
fn check_triple(
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
    p: u64,
    n: u32,
    m: u32,
    g: &AbelianGroup,
) -> Result<[Subgroup; 3]> {
    for x in [a, b, c] {
        g.check(x)?;
        if g.element_order(x) != p.pow(n) {
            return Err(Error::precondition(format!("{x} does not have order {p}^{n}")));
        }
    }
    let (sa, sb, sc) = (cyclic(g, a)?, cyclic(g, b)?, cyclic(g, c)?);
    for (x, y) in [(&sa, &sb), (&sa, &sc), (&sb, &sc)] {
        if !x.intersect(y)?.is_trivial() {
            return Err(Error::precondition(format!("{x} and {y} intersect nontrivially")));
        }
    }
    let meet = sa.intersect(&sb.join(&sc)?)?.order();
    if log_exact(meet, p) != Some(m) {
        return Err(Error::precondition(format!("|A ∩ BC| = {meet}, expected {p}^{m}")));
    }
    Ok([sa, sb, sc])
}

/// The set `{ j·a + j·2^m·c + i·b + σ(i)·c : j < 2^r, i < 2^n }` after
/// normalizing `b` and `c`, verified as a common transversal inside `ABC`.
pub fn construct_y_2group(
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
    n: u32,
    m: u32,
    g: &AbelianGroup,
) -> Result<Vec<GroupElement>> {
    if !(0 < m && m < n) {
        return Err(Error::precondition(format!("need 0 < m < n, got n={n}, m={m}")));
    }
    let targets = check_triple(a, b, c, 2, n, m, g)?;
    let (b, c) = normalize_generators(a, b, c, 2, n, m, g)?;
    let r = n - m;
    check_output_size(1u64 << (r + n))?;
    let mut out = Vec::with_capacity(1 << (r + n));
    for j in 0..(1u64 << r) {
        let head = g.combination(&[j as i128, (j << m) as i128], &[a.clone(), c.clone()]);
        for i in 0..(1u64 << n) {
            let s = sigma_permutation(n, m, i)?;
            let tail = g.combination(&[i as i128, s as i128], &[b.clone(), c.clone()]);
            out.push(g.add_unchecked(&head, &tail));
        }
    }
    out.sort();
    let container = Subgroup::join_all(g, &targets)?;
    verify_transversal_in(&out, &targets, &container).map_err(|e| e.into_bug("construct_y_2group"))?;
    Ok(out)
}

/// The set `{ i·a + (j − i)·b − j·c : 0 ≤ i < p^{n−m}, 0 ≤ j < p^n }` for an
/// odd prime `p`, after normalizing `b` and `c`, verified inside `ABC`.
pub fn construct_t_odd(
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
    p: u64,
    n: u32,
    m: u32,
    g: &AbelianGroup,
) -> Result<Vec<GroupElement>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::precondition("construct_t_odd needs an odd prime"));
    }
    if m > n {
        return Err(Error::precondition(format!("m={m} exceeds n={n}")));
    }
    let targets = check_triple(a, b, c, p, n, m, g)?;
    let (b, c) = normalize_generators(a, b, c, p, n, m, g)?;
    let (pr, pn) = (p.pow(n - m), p.pow(n));
    check_output_size(pr.saturating_mul(pn))?;
    let mut out = Vec::with_capacity((pr * pn) as usize);
    for i in 0..pr as i128 {
        for j in 0..pn as i128 {
            out.push(g.combination(&[i, j - i, -j], &[a.clone(), b.clone(), c.clone()]));
        }
    }
    out.sort();
    let container = Subgroup::join_all(g, &targets)?;
    verify_transversal_in(&out, &targets, &container).map_err(|e| e.into_bug("construct_t_odd"))?;
    Ok(out)
}

/// `D = ⋃ (a_i + b_i + T)` pairing the elements of `A` and `B_1` in their
/// enumeration order. Needs `G = A × X` with `X` the join of the `B_i`.
pub fn extend_by_direct_factor(
    a: &Subgroup,
    bs: &[Subgroup],
    t: &[GroupElement],
    g: &AbelianGroup,
) -> Result<Vec<GroupElement>> {
    let b1 = bs.first().ok_or_else(|| Error::precondition("no subgroups B_i given"))?;
    if a.ambient() != g || bs.iter().any(|b| b.ambient() != g) {
        return Err(Error::AmbientMismatch);
    }
    if bs.iter().any(|b| b.order() != a.order()) {
        return Err(Error::precondition("A and every B_i must have the same order"));
    }
    let x = Subgroup::join_all(g, bs)?;
    if !a.intersect(&x)?.is_trivial() || !a.join(&x)?.is_full() {
        return Err(Error::precondition("G is not the direct product of A and the join of the B_i"));
    }
    verify_transversal_in(t, bs, &x)?;
    check_output_size(a.order().saturating_mul(t.len() as u64))?;
    let mut out = Vec::with_capacity(a.order() as usize * t.len());
    for (ai, bi) in a.elements()?.zip(b1.elements()?) {
        let shift = g.add_unchecked(&ai, &bi);
        out.extend(t.iter().map(|x| g.add_unchecked(&shift, x)));
    }
    out.sort();
    let mut targets = vec![a.clone()];
    targets.extend(bs.iter().cloned());
    verify_transversal(&out, &targets, g).map_err(|e| e.into_bug("extend_by_direct_factor"))?;
    Ok(out)
}

/// Common transversal of homocyclic subgroups of equal order whose smallest
/// prime divisor is at least their number: a common complement inside their
/// join `K`, lifted to `G`.
pub fn homocyclic_common_transversal(a_list: &[Subgroup], g: &AbelianGroup) -> Result<Vec<GroupElement>> {
    let first = a_list.first().ok_or_else(|| Error::precondition("no subgroups given"))?;
    for a in a_list {
        if a.ambient() != g {
            return Err(Error::AmbientMismatch);
        }
        if !a.is_homocyclic() {
            return Err(Error::precondition(format!("{a} is not homocyclic")));
        }
        if !a.is_isomorphic_to(first) {
            return Err(Error::precondition(format!("{a} and {first} are not isomorphic")));
        }
    }
    check_output_size(first.index())?;
    if let Some(&p) = crate::arith::primes_of(first.order()).first() {
        if p < a_list.len() as u64 {
            return Err(Error::precondition(format!(
                "smallest prime {p} of |A_1| is below the number of subgroups {}",
                a_list.len()
            )));
        }
    }
    let k = Subgroup::join_all(g, a_list)?;
    let chart = k.chart()?;
    let pulled = a_list.iter().map(|a| chart.pull(a)).collect::<Result<Vec<_>>>()?;
    let h = chart.push(&common_complement(&pulled, chart.group())?)?;
    let inside: Vec<GroupElement> = h.elements()?.collect();
    lift_transversal(&inside, &k, g, a_list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[u64]) -> AbelianGroup {
        AbelianGroup::new(orders.iter().copied()).unwrap()
    }

    fn e(v: &[u64]) -> GroupElement {
        GroupElement(v.to_vec())
    }

    fn sub(grp: &AbelianGroup, gens: &[&[u64]]) -> Subgroup {
        let gens: Vec<GroupElement> = gens.iter().map(|v| e(v)).collect();
        Subgroup::from_generators(grp, &gens).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let s: Vec<u64> = (0..4).map(|i| sigma_permutation(2, 1, i).unwrap()).collect();
        assert_eq!(s, vec![0, 2, 1, 3]);
        assert_eq!(sigma_permutation(3, 1, 5).unwrap(), 3);
        assert_eq!(sigma_permutation(5, 2, 0).unwrap(), 0);
        assert!(sigma_permutation(2, 2, 0).is_err());
        assert!(sigma_permutation(2, 1, 4).is_err());
    }

    #[test]
    fn sigma_is_a_permutation() {
        for n in 2..=6 {
            for m in 1..n {
                let mut v: Vec<u64> = (0..1u64 << n).map(|i| sigma_permutation(n, m, i).unwrap()).collect();
                v.sort();
                assert!(v.iter().enumerate().all(|(i, &x)| i as u64 == x), "n={n} m={m}");
            }
        }
    }

    /// `C_{2^n} × C_{2^n} × C_{2^r}` with `b, c` the first two generators and
    /// `a = b + c + e_3`.
    fn case_three(n: u32, m: u32) -> (AbelianGroup, [GroupElement; 3]) {
        let r = n - m;
        let grp = g(&[1 << n, 1 << n, 1 << r]);
        (grp, [e(&[1, 1, 1]), e(&[1, 0, 0]), e(&[0, 1, 0])])
    }

    #[test]
    fn y_examples() {
        for (n, m, size) in [(2, 1, 8), (3, 1, 32), (3, 2, 16), (4, 3, 32)] {
            let (grp, [a, b, c]) = case_three(n, m);
            let y = construct_y_2group(&a, &b, &c, n, m, &grp).unwrap();
            assert_eq!(y.len(), size, "n={n} m={m}");
        }
        let (grp, [a, b, c]) = case_three(2, 1);
        assert!(construct_y_2group(&a, &b, &c, 1, 0, &grp).is_err());
        assert!(construct_y_2group(&a, &b, &c, 2, 2, &grp).is_err());
    }

    #[test]
    fn y_needs_normalization() {
        // a = 3b + c + e_3 forces b' = 3b.
        let grp = g(&[4, 4, 2]);
        let (a, b, c) = (e(&[3, 1, 1]), e(&[1, 0, 0]), e(&[0, 1, 0]));
        let (b2, c2) = normalize_generators(&a, &b, &c, 2, 2, 1, &grp).unwrap();
        assert_eq!(grp.scale(2, &a), grp.scale(2, &grp.add(&b2, &c2).unwrap()));
        assert_eq!(construct_y_2group(&a, &b, &c, 2, 1, &grp).unwrap().len(), 8);
    }

    #[test]
    fn t_odd_examples() {
        let c3c3 = g(&[3, 3]);
        let t = construct_t_odd(&e(&[1, 1]), &e(&[1, 0]), &e(&[0, 1]), 3, 1, 1, &c3c3).unwrap();
        assert_eq!(t.len(), 3);

        let c3c3c3 = g(&[3, 3, 3]);
        let t = construct_t_odd(&e(&[0, 0, 1]), &e(&[1, 0, 0]), &e(&[0, 1, 0]), 3, 1, 0, &c3c3c3).unwrap();
        assert_eq!(t.len(), 9);

        let grp = g(&[25, 25, 5]);
        let t = construct_t_odd(&e(&[1, 1, 1]), &e(&[1, 0, 0]), &e(&[0, 1, 0]), 5, 2, 1, &grp).unwrap();
        assert_eq!(t.len(), 125);

        let klein = g(&[2, 2]);
        assert!(construct_t_odd(&e(&[1, 1]), &e(&[1, 0]), &e(&[0, 1]), 2, 1, 1, &klein).is_err());
    }

    #[test]
    fn extend_examples() {
        let klein = g(&[2, 2]);
        let a = sub(&klein, &[&[1, 0]]);
        let b = sub(&klein, &[&[0, 1]]);
        let d = extend_by_direct_factor(&a, &[b], &[e(&[0, 0])], &klein).unwrap();
        assert_eq!(d, vec![e(&[0, 0]), e(&[1, 1])]);

        let grp = g(&[3, 3, 3]);
        let a = sub(&grp, &[&[1, 0, 0]]);
        let b = sub(&grp, &[&[0, 1, 0]]);
        let c = sub(&grp, &[&[0, 0, 1]]);
        let t = [e(&[0, 0, 0]), e(&[0, 1, 2]), e(&[0, 2, 1])];
        let d = extend_by_direct_factor(&a, &[b, c], &t, &grp).unwrap();
        assert_eq!(d.len(), 9);
    }

    #[test]
    fn homocyclic_examples() {
        let c3c3 = g(&[3, 3]);
        let three = [sub(&c3c3, &[&[1, 0]]), sub(&c3c3, &[&[0, 1]]), sub(&c3c3, &[&[1, 1]])];
        assert_eq!(homocyclic_common_transversal(&three, &c3c3).unwrap().len(), 3);

        let grp = g(&[4, 4, 2]);
        let pair = [sub(&grp, &[&[1, 0, 0]]), sub(&grp, &[&[1, 1, 1]])];
        assert_eq!(homocyclic_common_transversal(&pair, &grp).unwrap().len(), 8);

        let one = [sub(&grp, &[&[2, 0, 1]])];
        assert_eq!(homocyclic_common_transversal(&one, &grp).unwrap().len(), 16);

        let klein = g(&[2, 2]);
        let all = [sub(&klein, &[&[1, 0]]), sub(&klein, &[&[0, 1]]), sub(&klein, &[&[1, 1]])];
        assert!(matches!(homocyclic_common_transversal(&all, &klein), Err(Error::Precondition(_))));
    }
}
