//! The full verification catalog.
//!
//! Every check in the crate — bracket identities, table relations,
//! operator identities on the Fock oracle, series expansions, and the
//! floating-point corroboration — is exposed here as a named entry so
//! the CLI `verify` subcommand and the acceptance suite run the same
//! code. Checks are independent and may fan out across worker threads
//! (capped by `QSTIRLING_THREADS`); output order is fixed by catalog
//! position regardless of completion order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use crate::boson::extract_reduced_factor;
use crate::boson::{verify_biorthogonality, QChoice, ReducedKind, ShatFirstTable, ShatSecondTable};
use crate::bracket::{check_bracket_identity, BracketIdentity, BracketKind};
use crate::expansion::{
    commutator_residual, hamiltonian_degree1_at_t_neg_s, hamiltonian_residual,
};
use crate::fock::{
    float_corroboration, oracle_normal_coeffs, verify_identity_on_levels,
    verify_operator_identity, OpIdentity, OpParams,
};
use crate::stirling::{
    build_table, check_classical_limit, check_tilde_relation, check_wachs_white_reduction,
    duality_pairs, verify_defining_relations, verify_duality, StirlingFamily,
};

/// Parameters of a full suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub dim: usize,
    /// Restrict to entries whose id equals this name.
    pub only: Option<String>,
    /// Restrict kind-parameterized entries to one bracket kind.
    pub kind: Option<BracketKind>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { n_max: 10, dim: 10, only: None, kind: None }
    }
}

/// One suite entry outcome, serialized as
/// `{id, params, dim, pass, counterexample}`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub pass: bool,
    pub counterexample: Option<Value>,
}

struct Job {
    id: &'static str,
    params: Value,
    dim: Option<usize>,
    kind: Option<BracketKind>,
    run: Box<dyn FnOnce() -> (bool, Option<Value>) + Send>,
}

fn job(
    id: &'static str,
    params: Value,
    dim: Option<usize>,
    kind: Option<BracketKind>,
    run: impl FnOnce() -> (bool, Option<Value>) + Send + 'static,
) -> Job {
    Job { id, params, dim, kind, run: Box::new(run) }
}

fn table_outcome(report: crate::stirling::TableReport) -> (bool, Option<Value>) {
    let detail = report
        .witness
        .map(|(place, residual)| json!({"place": place, "residual": residual.to_string()}));
    (report.pass, detail)
}

fn fock_outcome(
    result: Result<crate::fock::FockReport, crate::fock::FockError>,
) -> (bool, Option<Value>) {
    match result {
        Ok(report) => {
            let detail = report
                .counterexample
                .map(|c| json!({"l": c.level, "residual": c.residual}));
            (report.pass, detail)
        }
        Err(e) => (false, Some(json!({"error": e.to_string()}))),
    }
}

/// All identity names known to `--only`, for the CLI usage error path.
pub fn known_ids() -> Vec<&'static str> {
    let mut ids = vec![
        "STIRLING_LIMITS",
        "DEFINING_RELATIONS",
        "DUALITY",
        "TILDE_RELATION",
        "WACHS_WHITE_REDUCTION",
        "BIORTHOGONALITY",
        "REDUCED_FACTOR",
        "ORACLE_COEFFS",
        "EDGE_CONTROL",
        "SERIES_HAMILTONIAN",
        "SERIES_COMMUTATOR",
        "SERIES_T_NEG_S",
        "FLOAT_CORROBORATION",
    ];
    for id in BracketIdentity::ALL {
        ids.push(id.name());
    }
    for id in OpIdentity::ALL {
        ids.push(id.name());
    }
    ids
}

fn build_catalog(config: &SuiteConfig) -> Vec<Job> {
    let n_max = config.n_max;
    let dim = config.dim;
    let mut jobs = Vec::new();

    // Stirling-limit checks: every deformed family collapses to its
    // classical counterpart at q = p = 1.
    jobs.push(job("STIRLING_LIMITS", json!({"n_max": n_max}), None, None, move || {
        for family in StirlingFamily::ALL {
            let report = check_classical_limit(family, n_max);
            if !report.pass {
                return table_outcome(report);
            }
        }
        (true, None)
    }));

    // Defining relations per family.
    for family in [
        StirlingFamily::ClassicalFirst,
        StirlingFamily::ClassicalSecond,
        StirlingFamily::QFirst,
        StirlingFamily::QSecond,
        StirlingFamily::TildeFirst,
        StirlingFamily::TildeSecond,
        StirlingFamily::ReducedFirstXi,
        StirlingFamily::ReducedSecondXiPrime,
    ] {
        jobs.push(job(
            "DEFINING_RELATIONS",
            json!({"family": family.name(), "n_max": n_max}),
            None,
            None,
            move || table_outcome(verify_defining_relations(family, n_max)),
        ));
    }

    // Duality for every matched pair.
    for (first, second) in duality_pairs() {
        jobs.push(job(
            "DUALITY",
            json!({"first": first.name(), "second": second.name(), "n_max": n_max}),
            None,
            None,
            move || {
                let f = build_table(first, n_max);
                let s = build_table(second, n_max);
                match verify_duality(&f, &s) {
                    Ok(report) => table_outcome(report),
                    Err(e) => (false, Some(json!({"error": e.to_string()}))),
                }
            },
        ));
    }

    jobs.push(job("TILDE_RELATION", json!({"n_max": n_max}), None, None, move || {
        table_outcome(check_tilde_relation(n_max))
    }));
    jobs.push(job(
        "WACHS_WHITE_REDUCTION",
        json!({"n_max": n_max}),
        None,
        None,
        move || table_outcome(check_wachs_white_reduction(n_max)),
    ));
    jobs.push(job("BIORTHOGONALITY", json!({"n_max": n_max}), None, None, move || {
        match verify_biorthogonality(n_max) {
            Ok(report) => table_outcome(report),
            Err(e) => (false, Some(json!({"error": e.to_string()}))),
        }
    }));

    // Bracket-arithmetic identities over integer ranges.
    for id in BracketIdentity::ALL {
        jobs.push(job(id.name(), json!({"range": 8}), None, None, move || {
            let instances: Vec<Vec<i64>> = match id.arity() {
                1 => (-8..=8).map(|x| vec![x]).collect(),
                _ => match id {
                    BracketIdentity::PowerSub | BracketIdentity::KmExpand => (1..=5)
                        .flat_map(|k| (0..=5).map(move |m| vec![k, m]))
                        .collect(),
                    _ => (-8..=8)
                        .flat_map(|a| (-8..=8).map(move |b| vec![a, b]))
                        .collect(),
                },
            };
            for args in instances {
                match check_bracket_identity(id, &args) {
                    Ok(report) if report.pass => {}
                    Ok(report) => {
                        return (
                            false,
                            Some(json!({
                                "args": report.args,
                                "residual": report.witness.to_string(),
                            })),
                        )
                    }
                    Err(e) => return (false, Some(json!({"error": e.to_string()}))),
                }
            }
            (true, None)
        }));
    }

    // Operator identities on the Fock oracle.
    for kind in BracketKind::ALL {
        for id in [
            OpIdentity::E24Commutator,
            OpIdentity::E28Falling,
            OpIdentity::E31BracketFalling,
            OpIdentity::E30NormalOrder,
            OpIdentity::E33Inverse,
            OpIdentity::E34GeneralNormal,
            OpIdentity::E45RightForm,
        ] {
            jobs.push(job(
                id.name(),
                json!({"kind": kind.name(), "orders": "1..=5", "q_choice": "Q_equals_q"}),
                Some(dim),
                Some(kind),
                move || {
                    for order in 1..=5 {
                        let outcome = fock_outcome(verify_operator_identity(
                            id,
                            &OpParams::new(order, kind),
                            dim,
                        ));
                        if !outcome.0 {
                            return outcome;
                        }
                    }
                    (true, None)
                },
            ));
        }
        let genfun_k_max = 5.min(dim - 1);
        jobs.push(job(
            "E51_GENFUN",
            json!({"kind": kind.name(), "k_max": genfun_k_max}),
            Some(dim),
            Some(kind),
            move || fock_outcome(crate::fock::verify_genfun(genfun_k_max, dim, kind)),
        ));
        // The truncation-edge negative control: E24 at l = D-1 must fail;
        // this entry passes exactly when that failure is observed.
        jobs.push(job(
            "EDGE_CONTROL",
            json!({"kind": kind.name(), "level": dim - 1}),
            Some(dim),
            Some(kind),
            move || {
                let report = verify_identity_on_levels(
                    OpIdentity::E24Commutator,
                    &OpParams::new(2, kind),
                    dim,
                    &[dim - 1],
                );
                match report {
                    Ok(r) if !r.pass => (true, None),
                    Ok(_) => (
                        false,
                        Some(json!({"error": "edge state unexpectedly satisfied the identity"})),
                    ),
                    Err(e) => (false, Some(json!({"error": e.to_string()}))),
                }
            },
        ));
        // Two-path agreement: the Fock-solved pointwise coefficients
        // equal the recurrence-built operator values. The solve needs
        // dim > m, so the order range respects a small dimension.
        let oracle_m_max = 5.min(dim - 1);
        jobs.push(job(
            "ORACLE_COEFFS",
            json!({"kind": kind.name(), "m": format!("1..={oracle_m_max}")}),
            Some(dim),
            Some(kind),
            move || {
                for m in 1..=oracle_m_max {
                    let oracle = match oracle_normal_coeffs(m, kind, dim) {
                        Ok(o) => o,
                        Err(e) => return (false, Some(json!({"error": e.to_string()}))),
                    };
                    let table = ShatSecondTable::build(m, QChoice::QEqualsQ, kind);
                    for k in 1..=m {
                        let shat = table.entry(m, k);
                        for l in 0..dim - k {
                            let expect = shat.eval(l as i64).unwrap();
                            if oracle.values[&(k, l)] != expect {
                                return (
                                    false,
                                    Some(json!({
                                        "m": m, "k": k, "l": l,
                                        "residual":
                                            oracle.values[&(k, l)].sub_ref(&expect).to_string(),
                                    })),
                                );
                            }
                        }
                    }
                }
                (true, None)
            },
        ));
    }

    // Reduced-factor structure for the G kind, m <= 6, both kinds of
    // operator-valued numbers, cross-checked against the scalar tables.
    jobs.push(job(
        "REDUCED_FACTOR",
        json!({"m_max": 6}),
        None,
        Some(BracketKind::G),
        move || {
            let second = ShatSecondTable::build(6, QChoice::QEqualsQ, BracketKind::G);
            let first = ShatFirstTable::build(6, BracketKind::G);
            let xi = build_table(StirlingFamily::ReducedSecondXi, 6);
            let xi_first = build_table(StirlingFamily::ReducedFirstXi, 6);
            for m in 1..=6usize {
                for k in 1..=m {
                    match extract_reduced_factor(&second.entry(m, k), m, k, ReducedKind::SecondKind)
                    {
                        Ok(scalar) => {
                            if scalar != xi.entry(m, k) {
                                return (
                                    false,
                                    Some(json!({
                                        "place": format!("second-kind ({m},{k})"),
                                        "residual": scalar.sub_ref(&xi.entry(m, k)).to_string(),
                                    })),
                                );
                            }
                        }
                        Err(e) => return (false, Some(json!({"error": e.to_string()}))),
                    }
                    match extract_reduced_factor(&first.entry(m, k), k, m, ReducedKind::FirstKind) {
                        Ok(scalar) => {
                            if scalar != xi_first.entry(m, k) {
                                return (
                                    false,
                                    Some(json!({
                                        "place": format!("first-kind ({m},{k})"),
                                        "residual":
                                            scalar.sub_ref(&xi_first.entry(m, k)).to_string(),
                                    })),
                                );
                            }
                        }
                        Err(e) => return (false, Some(json!({"error": e.to_string()}))),
                    }
                }
            }
            (true, None)
        },
    ));

    // Series expansions, levels 0..=12.
    jobs.push(job(
        "SERIES_HAMILTONIAN",
        json!({"levels": 12, "degree": 1}),
        None,
        None,
        move || {
            for l in 0..=12 {
                let residual = hamiltonian_residual(l, 2);
                if !residual.is_zero() {
                    return (false, Some(json!({"l": l, "residual": residual.to_string()})));
                }
            }
            (true, None)
        },
    ));
    jobs.push(job(
        "SERIES_COMMUTATOR",
        json!({"levels": 12, "degree": 2}),
        None,
        None,
        move || {
            for l in 0..=12 {
                let residual = commutator_residual(l, 3);
                if !residual.is_zero() {
                    return (false, Some(json!({"l": l, "residual": residual.to_string()})));
                }
            }
            (true, None)
        },
    ));
    jobs.push(job("SERIES_T_NEG_S", json!({"levels": 12}), None, None, move || {
        for l in 0..=12 {
            let c = hamiltonian_degree1_at_t_neg_s(l);
            if c != crate::rational::rat(0) {
                return (false, Some(json!({"l": l, "coefficient": c.to_string()})));
            }
        }
        (true, None)
    }));

    // Floating-point corroboration of the asymmetric-normalization
    // design at random rational points. Orders are kept below the
    // dimension: at order = dim every compared column vanishes
    // identically and the relative residual degenerates to an absolute
    // one.
    let float_order = 5.min(dim - 1);
    jobs.push(job(
        "FLOAT_CORROBORATION",
        json!({"samples": 20, "max_order": float_order, "tolerance": 1e-9}),
        Some(dim),
        None,
        move || {
            let report = float_corroboration(dim, 20, float_order);
            let detail = json!({
                "max_relative_residual": report.max_relative_residual,
                "tolerance": report.tolerance,
            });
            (report.pass, if report.pass { None } else { Some(detail) })
        },
    ));

    jobs
}

/// Worker-pool size: `QSTIRLING_THREADS` if set, else the available
/// parallelism, clamped to the job count.
fn worker_count(jobs: usize) -> usize {
    let env_cap = std::env::var("QSTIRLING_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    env_cap.unwrap_or(default).min(jobs.max(1))
}

/// Runs the catalog (optionally filtered) and returns outcomes in fixed
/// catalog order.
pub fn run_suite(config: &SuiteConfig) -> Vec<CheckOutcome> {
    let jobs: Vec<Job> = build_catalog(config)
        .into_iter()
        .filter(|j| config.only.as_deref().is_none_or(|only| j.id == only))
        .filter(|j| match (config.kind, j.kind) {
            (Some(want), Some(have)) => want == have,
            _ => true,
        })
        .collect();
    let n = jobs.len();
    let workers = worker_count(n);
    let slots: Vec<Mutex<Option<CheckOutcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let queue: Vec<Mutex<Option<Job>>> = jobs.into_iter().map(|j| Mutex::new(Some(j))).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let job = queue[i].lock().unwrap().take().expect("job taken once");
                let (pass, counterexample) = (job.run)();
                *slots[i].lock().unwrap() = Some(CheckOutcome {
                    id: job.id.to_string(),
                    params: job.params,
                    dim: job.dim,
                    pass,
                    counterexample,
                });
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("all jobs completed"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let outcomes = run_suite(&SuiteConfig { n_max: 6, dim: 7, only: None, kind: None });
        assert!(!outcomes.is_empty());
        for o in &outcomes {
            assert!(o.pass, "{} {} failed: {:?}", o.id, o.params, o.counterexample);
        }
    }

    #[test]
    fn only_filter_selects_one_id() {
        let outcomes = run_suite(&SuiteConfig {
            n_max: 4,
            dim: 6,
            only: Some("EDGE_CONTROL".into()),
            kind: Some(BracketKind::P),
        });
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].id, "EDGE_CONTROL");
        assert!(outcomes[0].pass);
    }

    #[test]
    fn suite_order_is_deterministic() {
        let config = SuiteConfig { n_max: 4, dim: 5, only: Some("DUALITY".into()), kind: None };
        let a: Vec<String> = run_suite(&config).iter().map(|o| o.params.to_string()).collect();
        let b: Vec<String> = run_suite(&config).iter().map(|o| o.params.to_string()).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }
}
