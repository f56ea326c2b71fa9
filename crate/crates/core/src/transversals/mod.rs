//! Common transversals: verification, the reduction steps that move between
//! subgroups and quotients, and explicit constructions.

mod constructions;
mod three_cyclic;

use std::collections::HashMap;

pub use constructions::{
    construct_t_odd, construct_y_2group, extend_by_direct_factor, homocyclic_common_transversal, normalize_generators,
    sigma_permutation,
};
pub use three_cyclic::{
    construct_three_cyclic, decide_three_cyclic, detect_obstruction, CaseTag, Obstruction, ThreeCyclicDiagnosis,
    Verdict,
};

use crate::error::{Error, Result, TransversalDefect};
use crate::group::{AbelianGroup, GroupElement};
use crate::subgroup::{Quotient, Subgroup, DEFAULT_ENUM_CAP};

/// A checked common transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalCertificate {
    pub elements: Vec<GroupElement>,
    pub targets: Vec<Subgroup>,
    pub ambient: AbelianGroup,
    /// Common index of the targets in the container.
    pub index: u64,
}

/// Checks that `elements` is a common transversal of `targets` in `G`.
pub fn verify_transversal(
    elements: &[GroupElement],
    targets: &[Subgroup],
    g: &AbelianGroup,
) -> Result<TransversalCertificate> {
    verify_transversal_in(elements, targets, &g.full())
}

/// Same as [`verify_transversal`] with a subgroup as the container.
pub fn verify_transversal_in(
    elements: &[GroupElement],
    targets: &[Subgroup],
    container: &Subgroup,
) -> Result<TransversalCertificate> {
    let ambient = container.ambient();
    if targets.is_empty() {
        return Err(Error::precondition("no target subgroups"));
    }
    for (i, t) in targets.iter().enumerate() {
        if t.ambient() != ambient {
            return Err(Error::AmbientMismatch);
        }
        if !t.is_subgroup_of(container) {
            return Err(Error::NotATransversal(TransversalDefect::TargetOutsideContainer(i)));
        }
    }
    let indices: Vec<u64> = targets.iter().map(|t| container.order() / t.order()).collect();
    if indices.iter().any(|&m| m != indices[0]) {
        return Err(Error::NotATransversal(TransversalDefect::UnequalIndex { indices }));
    }
    let index = indices[0];
    for (j, x) in elements.iter().enumerate() {
        ambient.check(x)?;
        if !container.contains(x) {
            return Err(Error::NotATransversal(TransversalDefect::OutsideContainer(j)));
        }
    }
    if elements.len() as u64 != index {
        return Err(Error::NotATransversal(TransversalDefect::WrongCardinality {
            expected: index,
            found: elements.len(),
        }));
    }
    for (ti, t) in targets.iter().enumerate() {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(elements.len());
        for (j, x) in elements.iter().enumerate() {
            if let Some(&first) = seen.get(&t.coset_label(x)) {
                return Err(Error::NotATransversal(TransversalDefect::DuplicateCoset { target: ti, first, second: j }));
            }
            seen.insert(t.coset_label(x), j);
        }
    }
    Ok(TransversalCertificate {
        elements: elements.to_vec(),
        targets: targets.to_vec(),
        ambient: ambient.clone(),
        index,
    })
}

/// `X ∩ H` for a transversal `X` of `A` in `G` and `A ≤ H`; the result is a
/// transversal of `A` in `H` and is verified as such.
pub fn restrict_transversal(x: &[GroupElement], a: &Subgroup, h: &Subgroup) -> Result<Vec<GroupElement>> {
    if a.ambient() != h.ambient() {
        return Err(Error::AmbientMismatch);
    }
    if !a.is_subgroup_of(h) {
        return Err(Error::precondition(format!("{a} is not contained in {h}")));
    }
    let out: Vec<GroupElement> = x.iter().filter(|e| h.contains(e)).cloned().collect();
    verify_transversal_in(&out, std::slice::from_ref(a), h)?;
    Ok(out)
}

pub(crate) fn check_output_size(needed: u64) -> Result<()> {
    if needed > DEFAULT_ENUM_CAP {
        return Err(Error::BudgetExceeded {
            what: "transversal output",
            needed: needed as u128,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    Ok(())
}

/// `{s + t}` where `t` runs over a transversal of `X` in `G` taken from the
/// section of `G → G/X`. `S` must be a common transversal of `targets` in
/// `X`, and `X` their join.
pub fn lift_transversal(
    s: &[GroupElement],
    x: &Subgroup,
    g: &AbelianGroup,
    targets: &[Subgroup],
) -> Result<Vec<GroupElement>> {
    if x.ambient() != g {
        return Err(Error::AmbientMismatch);
    }
    if &Subgroup::join_all(g, targets)? != x {
        return Err(Error::precondition("X is not the join of the targets"));
    }
    verify_transversal_in(s, targets, x)?;
    check_output_size((s.len() as u64).saturating_mul(x.index()))?;
    let q = x.quotient()?;
    let reps: Vec<GroupElement> = q.group().elements().map(|y| q.section(&y)).collect();
    let mut out = Vec::with_capacity(s.len() * reps.len());
    for si in s {
        for t in &reps {
            out.push(g.add_unchecked(si, t));
        }
    }
    out.sort();
    verify_transversal(&out, targets, g).map_err(|e| e.into_bug("lift_transversal"))?;
    Ok(out)
}

/// A common-transversal problem moved to `G/N`.
#[derive(Debug, Clone)]
pub struct ReducedProblem {
    pub quotient: Quotient,
    /// `A_i/N` as subgroups of the quotient group.
    pub targets: Vec<Subgroup>,
    originals: Vec<Subgroup>,
}

impl ReducedProblem {
    /// Lifts a common transversal of the quotient targets through the section
    /// and verifies it upstairs.
    pub fn pullback(&self, t: &[GroupElement]) -> Result<Vec<GroupElement>> {
        verify_transversal(t, &self.targets, self.quotient.group())?;
        let up: Vec<GroupElement> = t.iter().map(|y| self.quotient.section(y)).collect();
        verify_transversal(&up, &self.originals, self.quotient.ambient())
            .map_err(|e| e.into_bug("quotient pullback"))?;
        Ok(up)
    }
}

/// Passes to `G/N` for `N` inside every target.
pub fn reduce_mod_common(targets: &[Subgroup], n: &Subgroup, g: &AbelianGroup) -> Result<ReducedProblem> {
    if n.ambient() != g || targets.iter().any(|t| t.ambient() != g) {
        return Err(Error::AmbientMismatch);
    }
    if let Some(t) = targets.iter().find(|t| !n.is_subgroup_of(t)) {
        return Err(Error::precondition(format!("{n} is not contained in {t}")));
    }
    let quotient = n.quotient()?;
    let reduced = targets.iter().map(|t| quotient.project_subgroup(t)).collect::<Result<Vec<_>>>()?;
    Ok(ReducedProblem { quotient, targets: reduced, originals: targets.to_vec() })
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
    fn verify_examples() {
        let klein = g(&[2, 2]);
        let a = sub(&klein, &[&[1, 0]]);
        let b = sub(&klein, &[&[0, 1]]);
        let cert = verify_transversal(&[e(&[0, 0]), e(&[1, 1])], &[a.clone(), b], &klein).unwrap();
        assert_eq!(cert.index, 2);
        assert_eq!(
            verify_transversal(&[e(&[0, 0]), e(&[1, 0])], std::slice::from_ref(&a), &klein),
            Err(Error::NotATransversal(TransversalDefect::DuplicateCoset { target: 0, first: 0, second: 1 }))
        );
        assert!(matches!(
            verify_transversal(&[e(&[0, 0])], &[a], &klein),
            Err(Error::NotATransversal(TransversalDefect::WrongCardinality { expected: 2, found: 1 }))
        ));
    }

    #[test]
    fn complements_are_transversals() {
        let grp = g(&[4, 2]);
        let h = sub(&grp, &[&[1, 1]]);
        let c = sub(&grp, &[&[0, 1]]);
        let els: Vec<_> = h.elements().unwrap().collect();
        verify_transversal(&els, &[c], &grp).unwrap();
    }

    #[test]
    fn unequal_indices_rejected() {
        let grp = g(&[4, 2]);
        let r = verify_transversal(&[e(&[0, 0])], &[sub(&grp, &[&[1, 0]]), sub(&grp, &[&[0, 1]])], &grp);
        assert!(matches!(r, Err(Error::NotATransversal(TransversalDefect::UnequalIndex { .. }))));
    }

    #[test]
    fn restrict_examples() {
        let c4 = g(&[4]);
        let a = sub(&c4, &[&[2]]);
        let x = [e(&[0]), e(&[1])];
        assert_eq!(restrict_transversal(&x, &a, &c4.full()).unwrap(), x.to_vec());
        assert_eq!(restrict_transversal(&x, &a, &a).unwrap(), vec![e(&[0])]);
        let klein = g(&[2, 2]);
        let a = sub(&klein, &[&[1, 0]]);
        let h = a.join(&sub(&klein, &[&[0, 1]])).unwrap();
        let x = [e(&[0, 0]), e(&[0, 1])];
        assert_eq!(restrict_transversal(&x, &a, &h).unwrap(), x.to_vec());
    }

    #[test]
    fn lift_examples() {
        let klein = g(&[2, 2]);
        let t = [sub(&klein, &[&[1, 0]]), sub(&klein, &[&[0, 1]])];
        let s = vec![e(&[0, 0]), e(&[1, 1])];
        assert_eq!(lift_transversal(&s, &klein.full(), &klein, &t).unwrap(), s);

        let grp = g(&[4, 2]);
        let x = sub(&grp, &[&[1, 0]]);
        let lifted = lift_transversal(&[e(&[0, 0])], &x, &grp, std::slice::from_ref(&x)).unwrap();
        assert_eq!(lifted.len(), 2);
        verify_transversal(&lifted, &[x], &grp).unwrap();

        let c2c2c2 = g(&[2, 2, 2]);
        let targets = [sub(&c2c2c2, &[&[1, 0, 0]]), sub(&c2c2c2, &[&[0, 1, 0]])];
        let x = targets[0].join(&targets[1]).unwrap();
        let lifted = lift_transversal(&[e(&[0, 0, 0]), e(&[1, 1, 0])], &x, &c2c2c2, &targets).unwrap();
        assert_eq!(lifted.len(), 4);
    }

    #[test]
    fn reduce_examples() {
        let c4 = g(&[4]);
        let a = sub(&c4, &[&[2]]);
        let r = reduce_mod_common(&[a.clone(), a.clone()], &c4.trivial_subgroup(), &c4).unwrap();
        assert_eq!(r.quotient.group(), &c4);

        let r = reduce_mod_common(&[a.clone(), a.clone()], &a, &c4).unwrap();
        assert_eq!(r.quotient.group().orders(), &[2]);
        assert!(r.targets.iter().all(|t| t.is_trivial()));
        let up = r.pullback(&[e(&[0]), e(&[1])]).unwrap();
        assert_eq!(up.len(), 2);

        let c8 = g(&[8]);
        let a = sub(&c8, &[&[2]]);
        let n = sub(&c8, &[&[4]]);
        let r = reduce_mod_common(&[a.clone(), a.clone(), a.clone()], &n, &c8).unwrap();
        assert_eq!(r.quotient.group().orders(), &[4]);
        let down = [r.quotient.group().identity(), e(&[1])];
        let up = r.pullback(&down).unwrap();
        verify_transversal(&up, &[a], &c8).unwrap();

        assert!(reduce_mod_common(std::slice::from_ref(&n), &sub(&c8, &[&[2]]), &c8).is_err());
    }
}
