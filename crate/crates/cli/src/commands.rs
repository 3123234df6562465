use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;

use symbranch::abelian::Weight;
use symbranch::localize::{BranchTable, Engine};
use symbranch::oracle::oracle_branch;
use symbranch::pairs::TransportIdentity;
use symbranch::rootdata::weyl_enumerate;
use symbranch::Result;

use crate::report::{
    BranchReport, ClassReport, EntryReport, OrbitValue, OrbitsReport, PropertyReport, SelftestReport, VerifyReport,
};

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub fn branch_report(engine: &Engine, table: &BranchTable, all: bool) -> BranchReport {
    let h = engine.pair().h();
    let entries = table
        .entries
        .iter()
        .filter(|(_, e)| all || e.total != 0)
        .map(|(mu, e)| EntryReport {
            mu: h.render(mu),
            total: e.total,
            per_orbit: table
                .columns
                .iter()
                .zip(&e.per_orbit)
                .map(|(c, &value)| OrbitValue { orbit: c.class_label.clone(), coset: c.coset_label.clone(), value })
                .collect(),
        })
        .collect();
    BranchReport {
        pair: table.pair.clone(),
        lambda: engine.pair().g().render(&table.lambda),
        entries,
        verdict: None,
        elapsed_ms: 0,
    }
}

/// First disagreement between the table and the oracle, if any.
fn oracle_mismatch(engine: &Engine, table: &BranchTable) -> Result<Option<String>> {
    let oracle = oracle_branch(engine.pair(), &table.lambda, engine.caps().max_dim)?;
    let h = engine.pair().h();
    let g = engine.pair().g();
    for (mu, e) in &table.entries {
        let want = oracle.multiplicity(mu) as i64;
        if e.total != want {
            return Ok(Some(format!(
                "lambda {} mu {}: localization {} oracle {want}",
                g.render(&table.lambda),
                h.render(mu),
                e.total
            )));
        }
    }
    for (mu, m) in &oracle.entries {
        if !table.entries.contains_key(mu) {
            return Ok(Some(format!(
                "lambda {} mu {}: missing from table, oracle {m}",
                g.render(&table.lambda),
                h.render(mu)
            )));
        }
    }
    Ok(None)
}

pub fn cmd_branch(engine: &Engine, lambda: &Weight, all: bool, verify: bool) -> Result<(BranchReport, bool)> {
    let start = Instant::now();
    let table = engine.branch_table(lambda)?;
    let mut report = branch_report(engine, &table, all);
    let mut ok = table.check_invariants().is_ok();
    if verify {
        let verdict = match oracle_mismatch(engine, &table)? {
            Some(m) => {
                ok = false;
                format!("mismatch: {m}")
            }
            None => "ok".to_string(),
        };
        report.verdict = Some(verdict);
    }
    report.elapsed_ms = elapsed_ms(start);
    Ok((report, ok))
}

pub fn cmd_verify(engine: &Engine, lambdas: &[Weight]) -> Result<(VerifyReport, bool)> {
    let start = Instant::now();
    let g = engine.pair().g();
    let h = engine.pair().h();
    let mut entries_checked = 0;
    let mut route_checks = 0;
    let mut mismatch = None;
    'outer: for lambda in lambdas {
        let table = engine.branch_table(lambda)?;
        if let Err(e) = table.check_invariants() {
            mismatch = Some(format!("lambda {}: {e}", g.render(lambda)));
            break;
        }
        if let Some(m) = oracle_mismatch(engine, &table)? {
            mismatch = Some(m);
            break;
        }
        entries_checked += table.entries.len();
        for class in 0..engine.orbits().len() {
            for mu in table.entries.keys() {
                let thm = engine.class_mult(class, lambda, mu)?;
                let prop = engine.weyl_route_mult(class, lambda, mu)?;
                route_checks += 1;
                if thm != prop {
                    mismatch = Some(format!(
                        "lambda {} mu {} class {}: orbit sum {thm}, full-Weyl route {prop}",
                        g.render(lambda),
                        h.render(mu),
                        engine.orbits()[class].label
                    ));
                    break 'outer;
                }
            }
        }
    }
    let ok = mismatch.is_none();
    let report = VerifyReport {
        pair: engine.pair().to_string(),
        lambdas: lambdas.iter().map(|l| g.render(l)).collect(),
        entries_checked,
        route_checks,
        verdict: if ok { "ok".into() } else { "mismatch".into() },
        mismatch,
        elapsed_ms: elapsed_ms(start),
    };
    Ok((report, ok))
}

fn property(name: &str, checked: usize, failure: Option<String>) -> PropertyReport {
    PropertyReport { name: name.to_string(), checked, passed: failure.is_none(), detail: failure }
}

pub fn cmd_selftest(engine: &Engine, lambdas: &[Weight], seed: u64) -> Result<(SelftestReport, bool)> {
    let start = Instant::now();
    let group = weyl_enumerate(engine.pair().g(), engine.caps().max_weyl)?;
    let mut properties = Vec::new();

    let mut checked = 0;
    let mut failure = None;
    for o in engine.orbits() {
        for w in &group {
            checked += 1;
            let sd = o.sign_data(w);
            if failure.is_none() && !sd.parity_holds() {
                failure = Some(format!("class {} w={w}: n={} k={} m={} d_ci={}", o.label, sd.n, sd.k, sd.m, sd.d_ci));
            }
        }
    }
    properties.push(property("sign-parity", checked, failure));

    for t in TransportIdentity::ALL {
        let mut checked = 0;
        let mut failure = None;
        for o in engine.orbits() {
            for w in &group {
                checked += 1;
                if failure.is_none() {
                    failure = t.check(o, w).err();
                }
            }
        }
        properties.push(property(t.name(), checked, failure));
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let perturbed = engine.perturbed(&mut rng);
    let mut checked = 0;
    let mut failure = None;
    'outer: for lambda in lambdas {
        let (support, margin) = engine.candidate_support(lambda)?;
        for mu in support.iter().chain(&margin) {
            checked += 1;
            let a = engine.branch_mult(lambda, mu)?;
            let b = perturbed.branch_mult(lambda, mu)?;
            if a != b {
                failure = Some(format!(
                    "lambda {} mu {}: {:?} vs {:?}",
                    engine.pair().g().render(lambda),
                    engine.pair().h().render(mu),
                    a,
                    b
                ));
                break 'outer;
            }
        }
    }
    properties.push(property("representative-independence", checked, failure));

    let ok = properties.iter().all(|p| p.passed);
    let report = SelftestReport {
        pair: engine.pair().to_string(),
        properties,
        verdict: if ok { "ok".into() } else { "failed".into() },
        elapsed_ms: elapsed_ms(start),
    };
    Ok((report, ok))
}

pub fn cmd_orbits(engine: &Engine) -> OrbitsReport {
    let id = engine.pair().g().identity();
    let classes = engine
        .orbits()
        .iter()
        .map(|o| {
            let cls = o.classify_roots(&id);
            ClassReport {
                label: o.label.clone(),
                hx: o.hx().describe(),
                wxh_order: o.wxh_order(),
                cosets: o.coset_labels().to_vec(),
                ci: cls.ci_plus.len(),
                nci: cls.nci_plus.len(),
                real: cls.real_plus.len(),
                complex_pairs: cls.complex_pairs.len(),
                complex_unpaired: cls.complex_unpaired.len(),
                delta: o.delta(&id).to_string(),
            }
        })
        .collect();
    OrbitsReport { pair: engine.pair().to_string(), classes }
}
