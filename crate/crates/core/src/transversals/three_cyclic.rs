//! Three cyclic subgroups of equal order: deciding and constructing common
//! transversals.

use std::fmt;

use crate::arith::{log_exact, primes_of};
use crate::complements::common_complement;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::subgroup::Subgroup;

use super::constructions::{construct_t_odd, construct_y_2group};
use super::{check_output_size, lift_transversal, reduce_mod_common, verify_transversal, verify_transversal_in};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Exists,
    NotExists,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exists => "exists",
            Verdict::NotExists => "not-exists",
        })
    }
}

/// Classification of the reduced Sylow 2-configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// The common order is odd.
    Odd,
    /// Two of the subgroups meet nontrivially.
    KPositive,
    MZero,
    MEqualsN,
    MBetween,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Odd => "odd",
            CaseTag::KPositive => "k>0",
            CaseTag::MZero => "m=0",
            CaseTag::MEqualsN => "m=n",
            CaseTag::MBetween => "0<m<n",
        })
    }
}

/// The involutions of `A_2, B_2, C_2` when they pairwise split `G_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub involutions: Vec<GroupElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeCyclicDiagnosis {
    pub order: u64,
    /// `I = A_2 ∩ B_2 ∩ C_2`.
    pub intersection: Subgroup,
    /// Invariant factors of `A_2 B_2 C_2 / I`.
    pub quotient_invariants: Vec<u64>,
    pub verdict: Verdict,
    pub case_tag: CaseTag,
    /// `(n, m, k)` of the reduced configuration, absent for odd order.
    pub exponents: Option<(u32, u32, u32)>,
    /// Representatives in `G` of the obstructing involutions of the reduced
    /// configuration.
    pub obstruction: Option<Obstruction>,
}

fn check_cyclic_triple(a: &Subgroup, b: &Subgroup, c: &Subgroup, g: &AbelianGroup) -> Result<()> {
    for x in [a, b, c] {
        if x.ambient() != g {
            return Err(Error::AmbientMismatch);
        }
        if !x.is_cyclic() {
            return Err(Error::precondition(format!("{x} is not cyclic")));
        }
    }
    if a.order() != b.order() || a.order() != c.order() {
        return Err(Error::precondition(format!("orders {}, {}, {} are not equal", a.order(), b.order(), c.order())));
    }
    Ok(())
}

fn splits(x: &Subgroup, y: &Subgroup, whole: &Subgroup) -> Result<bool> {
    Ok(x.intersect(y)?.is_trivial() && &x.join(y)? == whole)
}

fn log2(n: u64) -> Result<u32> {
    log_exact(n, 2).ok_or_else(|| Error::verification(format!("{n} is not a power of 2")))
}

/// The involution of a nontrivial cyclic 2-group.
fn involution(h: &Subgroup) -> GroupElement {
    let x = &h.smith_generators()[0];
    h.ambient().scale((h.order() / 2) as i128, x)
}

/// The literal obstruction `G_2 = A_2 × B_2 = A_2 × C_2 = B_2 × C_2 ≠ 1` for
/// cyclic `A, B, C`; returns their involutions when it holds.
pub fn detect_obstruction(a: &Subgroup, b: &Subgroup, c: &Subgroup, g: &AbelianGroup) -> Result<Option<Obstruction>> {
    if [a, b, c].iter().any(|x| x.ambient() != g) {
        return Err(Error::AmbientMismatch);
    }
    let g2 = g.full().sylow(2)?;
    if g2.is_trivial() {
        return Ok(None);
    }
    let (a2, b2, c2) = (a.sylow(2)?, b.sylow(2)?, c.sylow(2)?);
    if ![&a2, &b2, &c2].iter().all(|x| x.is_cyclic()) {
        return Ok(None);
    }
    if splits(&a2, &b2, &g2)? && splits(&a2, &c2, &g2)? && splits(&b2, &c2, &g2)? {
        let involutions = [&a2, &b2, &c2].iter().map(|x| involution(x)).collect();
        return Ok(Some(Obstruction { involutions }));
    }
    Ok(None)
}

/// Decides whether cyclic `A, B, C` of equal order have a common transversal
/// in `G`, from their Sylow 2-subgroups modulo `I = A_2 ∩ B_2 ∩ C_2`.
pub fn decide_three_cyclic(a: &Subgroup, b: &Subgroup, c: &Subgroup, g: &AbelianGroup) -> Result<ThreeCyclicDiagnosis> {
    check_cyclic_triple(a, b, c, g)?;
    let order = a.order();
    if order % 2 == 1 {
        return Ok(ThreeCyclicDiagnosis {
            order,
            intersection: g.trivial_subgroup(),
            quotient_invariants: Vec::new(),
            verdict: Verdict::Exists,
            case_tag: CaseTag::Odd,
            exponents: None,
            obstruction: None,
        });
    }
    let (a2, b2, c2) = (a.sylow(2)?, b.sylow(2)?, c.sylow(2)?);
    let i = a2.intersect(&b2)?.intersect(&c2)?;
    let x = Subgroup::join_all(g, [&a2, &b2, &c2])?;
    let q = i.quotient()?;
    let [ab, bb, cb, xb] = [&a2, &b2, &c2, &x].map(|s| q.project_subgroup(s));
    let (ab, bb, cb, xb) = (ab?, bb?, cb?, xb?);

    let obstructed = !xb.is_trivial() && splits(&ab, &bb, &xb)? && splits(&ab, &cb, &xb)? && splits(&bb, &cb, &xb)?;

    let n = log2(ab.order())?;
    let (tag, m, k) = if n == 0 {
        (CaseTag::MZero, 0, 0)
    } else {
        let pairs = [
            (ab.intersect(&bb)?, &cb, &ab, &bb),
            (ab.intersect(&cb)?, &bb, &ab, &cb),
            (bb.intersect(&cb)?, &ab, &bb, &cb),
        ];
        let meeting: Vec<_> = pairs.iter().filter(|p| !p.0.is_trivial()).collect();
        if meeting.len() > 1 {
            return Err(Error::verification("two pairs meet although the triple intersection is trivial"));
        }
        let (meet, lone, y, z) = meeting.first().copied().unwrap_or(&pairs[2]);
        let k = log2(meet.order())?;
        let m = log2(lone.intersect(&y.join(z)?)?.order())?;
        let tag = match (k, m) {
            (k, _) if k > 0 => CaseTag::KPositive,
            (_, 0) => CaseTag::MZero,
            (_, m) if m == n => CaseTag::MEqualsN,
            _ => CaseTag::MBetween,
        };
        (tag, m, k)
    };
    if (tag == CaseTag::MEqualsN) != obstructed {
        return Err(Error::verification(format!("case {tag} disagrees with the splitting test ({obstructed})")));
    }

    let obstruction = if obstructed {
        let chart = xb.chart()?;
        let [pa, pb, pc] = [&ab, &bb, &cb].map(|s| chart.pull(s));
        let found = detect_obstruction(&pa?, &pb?, &pc?, chart.group())?
            .ok_or_else(|| Error::verification("reduced configuration splits but has no obstruction"))?;
        let involutions = found.involutions.iter().map(|v| q.section(&chart.embed(v))).collect();
        Some(Obstruction { involutions })
    } else {
        None
    };

    Ok(ThreeCyclicDiagnosis {
        order,
        intersection: i,
        quotient_invariants: xb.invariant_factors().to_vec(),
        verdict: if obstructed { Verdict::NotExists } else { Verdict::Exists },
        case_tag: tag,
        exponents: Some((n, m, k)),
        obstruction,
    })
}

/// A common transversal of cyclic `A, B, C` of equal order, sorted.
///
/// Passes to `X = ABC`, divides out `A ∩ B ∩ C`, solves every Sylow
/// subgroup separately and multiplies the pieces, then pulls back and lifts.
pub fn construct_three_cyclic(a: &Subgroup, b: &Subgroup, c: &Subgroup, g: &AbelianGroup) -> Result<Vec<GroupElement>> {
    let diagnosis = decide_three_cyclic(a, b, c, g)?;
    if diagnosis.verdict == Verdict::NotExists {
        return Err(Error::precondition(format!("no common transversal exists (case {})", diagnosis.case_tag)));
    }
    check_output_size(a.index())?;
    let targets = [a.clone(), b.clone(), c.clone()];
    let x = Subgroup::join_all(g, &targets)?;
    let chart = x.chart()?;
    let gx = chart.group();
    let local = targets.iter().map(|t| chart.pull(t)).collect::<Result<Vec<_>>>()?;
    let i = local[0].intersect(&local[1])?.intersect(&local[2])?;
    let reduced = reduce_mod_common(&local, &i, gx)?;
    let qg = reduced.quotient.group();

    let mut down = vec![qg.identity()];
    for p in primes_of(qg.order()) {
        let qp = qg.full().sylow(p)?;
        let pchart = qp.chart()?;
        let parts = reduced.targets.iter().map(|t| pchart.pull(&t.sylow(p)?)).collect::<Result<Vec<_>>>()?;
        let tp = solve_prime(p, pchart.group(), &parts)?;
        let tp: Vec<GroupElement> = tp.iter().map(|y| pchart.embed(y)).collect();
        down = down.iter().flat_map(|x| tp.iter().map(move |y| qg.add_unchecked(x, y))).collect();
    }
    let inside: Vec<GroupElement> = reduced.pullback(&down)?.iter().map(|y| chart.embed(y)).collect();
    let mut out = lift_transversal(&inside, &x, g, &targets)?;
    out.sort();
    verify_transversal(&out, &targets, g).map_err(|e| e.into_bug("construct_three_cyclic"))?;
    Ok(out)
}

/// A common transversal in the `p`-group `P = ABC` with `A ∩ B ∩ C = 1`.
fn solve_prime(p: u64, group: &AbelianGroup, parts: &[Subgroup]) -> Result<Vec<GroupElement>> {
    let n = log_exact(parts[0].order(), p).ok_or_else(|| Error::verification("Sylow part is not a p-group"))?;
    if n == 0 {
        return Ok(vec![group.identity()]);
    }
    let meets = [parts[0].intersect(&parts[1])?, parts[0].intersect(&parts[2])?, parts[1].intersect(&parts[2])?];
    let via_complement = || -> Result<Vec<GroupElement>> {
        let k = common_complement(parts, group).map_err(|e| e.into_bug("common complement route"))?;
        Ok(k.elements()?.collect())
    };
    let out = if meets.iter().any(|s| !s.is_trivial()) {
        via_complement()?
    } else {
        let [a, b, c] = [0, 1, 2].map(|j| parts[j].smith_generators()[0].clone());
        let m = log_exact(parts[0].intersect(&parts[1].join(&parts[2])?)?.order(), p)
            .ok_or_else(|| Error::verification("intersection order is not a power of p"))?;
        if p != 2 {
            construct_t_odd(&a, &b, &c, p, n, m, group)?
        } else if m == 0 {
            let h = Subgroup::from_generators(group, &[group.add(&a, &c)?, group.add(&b, &c)?])?;
            h.elements()?.collect()
        } else if m < n {
            construct_y_2group(&a, &b, &c, n, m, group)?
        } else {
            return Err(Error::verification("obstructed Sylow 2-configuration reached construction"));
        }
    };
    verify_transversal_in(&out, parts, &group.full()).map_err(|e| e.into_bug("per-prime transversal"))?;
    Ok(out)
}
