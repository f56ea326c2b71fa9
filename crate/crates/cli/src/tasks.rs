//! One function per subcommand, each producing a [`Report`].

use abeltrans::complements::{
    common_complement, common_complements_direct, count_common_complements_direct, count_common_two_cyclic_maximal,
    count_complements, enumerate_complements_capped, is_complemented, ComplementCertificate,
};
use abeltrans::oracle::{common_complements_in, SubgroupCatalog};
use abeltrans::transversals::{
    construct_three_cyclic, decide_three_cyclic, homocyclic_common_transversal, verify_transversal, Verdict,
};
use abeltrans::{Error, GroupElement, Subgroup};
use serde_json::{json, Value};

use crate::report::{elements_json, elements_text, subgroup_json, Report};
use crate::spec::{parse_element_list, Instance, ParseError};
use crate::sweep::{self, Caps};

/// Why a task did not produce a report.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Library(Error),
    /// The constructive path and the oracle disagree.
    Disagreement(Box<Report>),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Library(Error::Verification(_)) | Failure::Disagreement(_) => 4,
            Failure::Library(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Library(e) => e.to_string(),
            Failure::Disagreement(r) => format!("disagreement in {}", r.task),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.0)
    }
}

pub type Outcome = std::result::Result<Report, Failure>;

fn precondition(msg: impl Into<String>) -> Failure {
    Failure::Library(Error::Precondition(msg.into()))
}

fn require_subgroups(inst: &Instance, task: &str, n: Option<usize>) -> Result<(), Failure> {
    match n {
        Some(n) if inst.subs.len() != n => {
            Err(precondition(format!("{task} needs exactly {n} subgroups, got {}", inst.subs.len())))
        }
        None if inst.subs.is_empty() => Err(precondition(format!("{task} needs at least one subgroup"))),
        _ => Ok(()),
    }
}

fn named(inst: &Instance) -> Value {
    Value::Array(inst.names.iter().map(|n| json!(n)).collect())
}

pub fn decide(inst: &Instance) -> Outcome {
    require_subgroups(inst, "decide", Some(3))?;
    let (a, b, c) = (&inst.subs[0], &inst.subs[1], &inst.subs[2]);
    let d = decide_three_cyclic(a, b, c, &inst.group)?;
    let obstruction = d.obstruction.as_ref().map(|o| elements_json(&o.involutions));
    let mut report = Report::new("decide")
        .verdict(d.verdict)
        .case_tag(d.case_tag)
        .certificate(json!({
            "order": d.order,
            "intersection": subgroup_json(&d.intersection),
            "quotient_invariants": d.quotient_invariants,
            "exponents": d.exponents.map(|(n, m, k)| json!({"n": n, "m": m, "k": k})),
        }))
        .line(format!("common order: {}", d.order))
        .line(format!("I = {} , quotient invariants {:?}", d.intersection, d.quotient_invariants));
    if let Some((n, m, k)) = d.exponents {
        report = report.line(format!("n = {n}, m = {m}, k = {k}"));
    }
    if let Some(o) = &d.obstruction {
        report = report.line(format!("obstruction involutions: {}", elements_text(&o.involutions)));
    }
    report.witness = obstruction;
    Ok(report)
}

fn transversal_report(task: &str, inst: &Instance, elements: &[GroupElement]) -> Outcome {
    let cert = verify_transversal(elements, &inst.subs, &inst.group).map_err(|e| match e {
        Error::NotATransversal(d) => Failure::Library(Error::Verification(d.to_string())),
        other => Failure::Library(other),
    })?;
    Ok(Report::new(task)
        .verdict(Verdict::Exists)
        .witness(elements_json(elements))
        .certificate(json!({"targets": named(inst), "index": cert.index, "verified": true}))
        .line(format!("{} elements, verified", elements.len()))
        .line(elements_text(elements)))
}

pub fn construct(inst: &Instance, enum_cap: u64) -> Outcome {
    require_subgroups(inst, "construct", None)?;
    let index = inst.subs[0].index();
    if index > enum_cap {
        return Err(Failure::Library(Error::BudgetExceeded {
            what: "transversal output",
            needed: index.into(),
            cap: enum_cap,
        }));
    }
    let three_cyclic = inst.subs.len() == 3 && inst.subs.iter().all(Subgroup::is_cyclic);
    if three_cyclic {
        let (a, b, c) = (&inst.subs[0], &inst.subs[1], &inst.subs[2]);
        let d = decide_three_cyclic(a, b, c, &inst.group)?;
        if d.verdict == Verdict::NotExists {
            return Ok(Report::new("construct")
                .verdict(d.verdict)
                .case_tag(d.case_tag)
                .certificate(json!({
                    "obstruction": d.obstruction.as_ref().map(|o| elements_json(&o.involutions)),
                }))
                .line("no common transversal exists"));
        }
        let t = construct_three_cyclic(a, b, c, &inst.group)?;
        return Ok(transversal_report("construct", inst, &t)?.case_tag(d.case_tag));
    }
    let t = homocyclic_common_transversal(&inst.subs, &inst.group)?;
    transversal_report("construct", inst, &t)
}

fn complement_certificate(inst: &Instance, k: &Subgroup) -> Result<Value, Failure> {
    let mut per = serde_json::Map::new();
    for (name, a) in inst.names.iter().zip(&inst.subs) {
        ComplementCertificate::check(a, k).map_err(|e| Failure::Library(Error::Verification(e.to_string())))?;
        per.insert(
            name.clone(),
            json!({"join_is_group": true, "meet_is_trivial": true, "orders_multiply": a.order() * k.order() == inst.group.order()}),
        );
    }
    Ok(Value::Object(per))
}

pub fn construct_complement(inst: &Instance) -> Outcome {
    require_subgroups(inst, "construct-complement", None)?;
    let k = if inst.subs.len() == 1 {
        match is_complemented(&inst.subs[0], &inst.group)? {
            Some((_, cert)) => cert.complement,
            None => {
                return Ok(Report::new("construct-complement")
                    .verdict("not-complemented")
                    .line(format!("{} has no complement", inst.subs[0])))
            }
        }
    } else {
        common_complement(&inst.subs, &inst.group)?
    };
    let certificate = complement_certificate(inst, &k)?;
    Ok(Report::new("construct-complement")
        .verdict(Verdict::Exists)
        .witness(subgroup_json(&k))
        .certificate(certificate)
        .line(format!("complement {k} of order {}, invariants {:?}", k.order(), k.invariant_factors())))
}

pub fn count_complements_task(inst: &Instance, enum_cap: u64) -> Outcome {
    require_subgroups(inst, "count-complements", Some(1))?;
    let a = &inst.subs[0];
    if is_complemented(a, &inst.group)?.is_none() {
        return Ok(Report::new("count-complements").verdict("not-complemented").witness(json!(0)).line("0"));
    }
    let formula = count_complements(a, &inst.group)?;
    let listed = if formula <= enum_cap {
        let list = enumerate_complements_capped(a, &inst.group, enum_cap)?;
        if list.len() as u64 != formula {
            return Err(Failure::Library(Error::Verification(format!(
                "formula gives {formula} complements, enumeration {}",
                list.len()
            ))));
        }
        Some(list.len())
    } else {
        None
    };
    Ok(Report::new("count-complements")
        .verdict("complemented")
        .witness(json!(formula))
        .certificate(json!({"formula": formula, "enumerated": listed}))
        .line(formula.to_string()))
}

/// `factor` names the extra direct factor `B`; without it the two-subgroup
/// formula for cyclic subgroups of maximal order is used.
pub fn count_common(inst: &Instance, factor: Option<&str>) -> Outcome {
    require_subgroups(inst, "count-common", None)?;
    let (count, certificate) = match factor {
        Some(name) => {
            let b = inst.subgroup(name).ok_or_else(|| Failure::Parse(format!("unknown subgroup {name}")))?;
            let a_list: Vec<Subgroup> =
                inst.names.iter().zip(&inst.subs).filter(|(n, _)| n.as_str() != name).map(|(_, s)| s.clone()).collect();
            let count = count_common_complements_direct(&a_list, b, &inst.group)?;
            let built = common_complements_direct(&a_list, b, &inst.group)?;
            if built.len() as u64 != count {
                return Err(Failure::Library(Error::Verification(format!(
                    "formula gives {count}, construction {}",
                    built.len()
                ))));
            }
            (count, json!({"formula": "direct", "factor": name, "constructed": built.len()}))
        }
        None => {
            if inst.subs.len() != 2 {
                return Err(precondition("without --factor, count-common needs exactly two subgroups"));
            }
            let count = count_common_two_cyclic_maximal(&inst.subs[0], &inst.subs[1], &inst.group)?;
            let meet = inst.subs[0].intersect(&inst.subs[1])?;
            (count, json!({"formula": "two-cyclic-maximal", "intersection_order": meet.order()}))
        }
    };
    Ok(Report::new("count-common").witness(json!(count)).certificate(certificate).line(count.to_string()))
}

pub fn verify(inst: &Instance, transversal: &str) -> Outcome {
    require_subgroups(inst, "verify", None)?;
    let elements = parse_element_list(transversal)?
        .iter()
        .map(|v| inst.spec.element(&inst.group, v))
        .collect::<Result<Vec<_>, _>>()?;
    match verify_transversal(&elements, &inst.subs, &inst.group) {
        Ok(cert) => Ok(Report::new("verify")
            .verdict("valid")
            .witness(elements_json(&elements))
            .certificate(json!({"targets": named(inst), "index": cert.index}))
            .line(format!("common transversal of index {}", cert.index))),
        Err(Error::NotATransversal(defect)) => Ok(Report::new("verify")
            .verdict("invalid")
            .witness(elements_json(&elements))
            .certificate(json!({"defect": defect.to_string()}))
            .line(defect.to_string())),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleKind {
    Transversal,
    Complements,
    Subgroups,
}

pub fn oracle(inst: &Instance, kind: OracleKind, order: Option<u64>, oracle_cap: u64) -> Outcome {
    let mut catalog = SubgroupCatalog::new(&inst.group, oracle_cap)?;
    match kind {
        OracleKind::Transversal => {
            require_subgroups(inst, "oracle", None)?;
            Ok(match catalog.common_transversal(&inst.subs, true)? {
                Some(t) => Report::new("oracle-transversal")
                    .verdict(Verdict::Exists)
                    .witness(elements_json(&t))
                    .line(elements_text(&t)),
                None => Report::new("oracle-transversal")
                    .verdict(Verdict::NotExists)
                    .line("exhaustive search found no common transversal"),
            })
        }
        OracleKind::Complements => {
            require_subgroups(inst, "oracle", None)?;
            let found = common_complements_in(&mut catalog, &inst.subs)?;
            let mut report = Report::new("oracle-complements")
                .verdict(if found.is_empty() { Verdict::NotExists } else { Verdict::Exists })
                .witness(Value::Array(found.iter().map(subgroup_json).collect()))
                .certificate(json!({"count": found.len()}))
                .line(format!("{} common complements", found.len()));
            for k in &found {
                report = report.line(k.to_string());
            }
            Ok(report)
        }
        OracleKind::Subgroups => {
            let order = order.ok_or_else(|| Failure::Parse("--order is required for subgroup enumeration".into()))?;
            let found = catalog.subgroups_of_order(order)?;
            let mut report = Report::new("oracle-subgroups")
                .witness(Value::Array(found.iter().map(subgroup_json).collect()))
                .certificate(json!({"order": order, "count": found.len()}))
                .line(format!("{} subgroups of order {order}", found.len()));
            for k in &found {
                report = report.line(k.to_string());
            }
            Ok(report)
        }
    }
}

/// Runs the constructive path and the oracle on the same instance.
pub fn compare(inst: &Instance, caps: Caps) -> Outcome {
    require_subgroups(inst, "compare", None)?;
    let mut catalog = SubgroupCatalog::new(&inst.group, caps.oracle)?;
    let g = &inst.group;
    let subs = &inst.subs;
    let three_cyclic =
        subs.len() == 3 && subs.iter().all(Subgroup::is_cyclic) && subs.iter().all(|s| s.order() == subs[0].order());
    let (agree, report) = if three_cyclic {
        let d = decide_three_cyclic(&subs[0], &subs[1], &subs[2], g)?;
        let oracle = catalog.common_transversal(subs, true)?;
        let constructed = match d.verdict {
            Verdict::Exists => Some(construct_three_cyclic(&subs[0], &subs[1], &subs[2], g)?),
            Verdict::NotExists => None,
        };
        let construction_ok = match &constructed {
            Some(t) => catalog.is_common_transversal(t, subs)?,
            None => true,
        };
        let agree = (d.verdict == Verdict::Exists) == oracle.is_some() && construction_ok;
        let report = Report::new("compare")
            .case_tag(d.case_tag)
            .witness(json!({
                "constructed": constructed.as_deref().map(elements_json),
                "oracle": oracle.as_deref().map(elements_json),
            }))
            .certificate(json!({
                "kind": "three-cyclic",
                "decision": d.verdict.to_string(),
                "oracle": if oracle.is_some() { "exists" } else { "not-exists" },
                "construction_checked_by_oracle": constructed.is_some().then_some(construction_ok),
            }))
            .line(format!(
                "decision: {}, oracle: {}",
                d.verdict,
                if oracle.is_some() { "exists" } else { "not-exists" }
            ));
        (agree, report)
    } else if subs.len() == 1 {
        let a = &subs[0];
        let oracle = common_complements_in(&mut catalog, subs)?;
        let (formula, listed) = match is_complemented(a, g)? {
            Some(_) => {
                let f = count_complements(a, g)?;
                (f, enumerate_complements_capped(a, g, caps.enumeration)?)
            }
            None => (0, Vec::new()),
        };
        let agree = formula == oracle.len() as u64 && listed == oracle;
        let report = Report::new("compare")
            .witness(Value::Array(oracle.iter().map(subgroup_json).collect()))
            .certificate(json!({
                "kind": "complements",
                "formula": formula,
                "enumerated": listed.len(),
                "oracle": oracle.len(),
            }))
            .line(format!("formula {formula}, enumerated {}, oracle {}", listed.len(), oracle.len()));
        (agree, report)
    } else {
        let k = common_complement(subs, g)?;
        let oracle = common_complements_in(&mut catalog, subs)?;
        let agree = oracle.contains(&k);
        let report = Report::new("compare")
            .witness(subgroup_json(&k))
            .certificate(json!({"kind": "common-complement", "oracle_count": oracle.len(), "found_by_oracle": agree}))
            .line(format!("constructed {k}, oracle lists {} common complements", oracle.len()));
        (agree, report)
    };
    let report = report.verdict(if agree { "agree" } else { "disagree" });
    if agree {
        Ok(report)
    } else {
        Err(Failure::Disagreement(Box::new(report)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    ThreeCyclic,
    Complements,
    MaximalCyclic,
}

pub struct SweepOptions {
    pub family: Family,
    pub max_order: u64,
    pub primes: Vec<u64>,
    pub max_family: usize,
    pub work_budget: u64,
}

pub fn run_sweep(opts: &SweepOptions, caps: Caps) -> Outcome {
    let (value, disagreements, line) = match opts.family {
        Family::ThreeCyclic => {
            let s = sweep::three_cyclic(opts.max_order, caps)?;
            let line = format!(
                "{} groups, {} ordered triples, {} not-exists, {} disagreements",
                s.groups.len(),
                s.ordered_triples,
                s.not_exists,
                s.disagreements
            );
            (serde_json::to_value(&s), s.disagreements, line)
        }
        Family::Complements => {
            let s = sweep::complements(opts.max_order, caps, opts.work_budget)?;
            let line = format!(
                "{} groups, {} subgroups, {} complemented, {} cross-checked, {} disagreements",
                s.groups.len(),
                s.subgroups,
                s.complemented,
                s.cross_checked,
                s.disagreements
            );
            (serde_json::to_value(&s), s.disagreements, line)
        }
        Family::MaximalCyclic => {
            let s = sweep::maximal_cyclic(&opts.primes, opts.max_order, opts.max_family, caps)?;
            let line = format!(
                "{} groups, {} pairs, {} families, {} disagreements",
                s.groups.len(),
                s.pairs,
                s.families,
                s.disagreements
            );
            (serde_json::to_value(&s), s.disagreements, line)
        }
    };
    let value = value.map_err(|e| Failure::Library(Error::Verification(e.to_string())))?;
    let report = Report::new("sweep")
        .verdict(if disagreements == 0 { "agree" } else { "disagree" })
        .certificate(value)
        .line(line);
    if disagreements == 0 {
        Ok(report)
    } else {
        Err(Failure::Disagreement(Box::new(report)))
    }
}
