//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use flightgate::load::{load_kb, KbPaths};
use flightgate::service;
use flightgate_core::explain::fix_oracle;
use flightgate_core::oracle::{extends, stable_models};
use flightgate_core::{
    brave_entails, check_compliance, desugar_abducibles, minimal_fix, parse_program, render_text, solve, validate,
    AnswerSet, DualProgram, KnowledgeBase, Literal, NoClock, SolveOptions, TemplateMap,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_f11e;
const RANDOM_PROGRAMS: usize = 1000;
const RANDOM_BUDGET: Duration = Duration::from_secs(60);
const LATENCY_RUNS: usize = 100;
const LATENCY_BUDGET_MS: f64 = 100.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kb() -> KnowledgeBase {
    load_kb(&KbPaths::new(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../kb/ama_general.lp")))
        .expect("bundled knowledge base loads")
}

fn answers(kb: &KnowledgeBase, yes: &[&str]) -> AnswerSet {
    yes.iter().fold(AnswerSet::all_no(kb.questionnaire()), |a, c| a.with(c, true))
}

/// Up to 12 atoms, 20 rules (3 of them constraints), some abducibles.
fn random_program(rng: &mut ChaCha8Rng) -> (String, usize) {
    let atoms = rng.gen_range(1..=12);
    let constraints = rng.gen_range(0..=3);
    let rules = rng.gen_range(0..=20 - constraints);
    let mut src = String::new();
    for a in 0..atoms {
        src.push_str(&format!("#pred a{a} :: 'atom {a}'.\n"));
        if rng.gen_bool(0.08) {
            src.push_str(&format!("#abducible a{a}.\n"));
        }
    }
    for i in 0..rules + constraints {
        if i < rules {
            src.push_str(&format!("a{}", rng.gen_range(0..atoms)));
        }
        let min = usize::from(i >= rules);
        let body: Vec<String> = (0..rng.gen_range(min..=3))
            .map(|_| {
                let a = rng.gen_range(0..atoms);
                if rng.gen_bool(0.35) {
                    format!("not a{a}")
                } else {
                    format!("a{a}")
                }
            })
            .collect();
        if !body.is_empty() {
            src.push_str(&format!(" :- {}", body.join(", ")));
        }
        src.push_str(".\n");
    }
    (src, atoms)
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut checked, mut models_checked, mut rejected) = (0, 0, 0);
    while checked < RANDOM_PROGRAMS {
        let (src, atoms) = random_program(&mut rng);
        let program = parse_program(&src).map_err(|e| format!("generator produced bad syntax: {e}"))?;
        if !validate(&program).is_ok() {
            rejected += 1;
            continue;
        }
        checked += 1;
        let oracle = stable_models(&program).map_err(|e| e.to_string())?;
        let dual = DualProgram::new(&program).map_err(|e| e.to_string())?;
        for atom in program.atom_ids().take(atoms) {
            let brave = brave_entails(&dual, atom).map_err(|e| e.to_string())?;
            ensure(brave == oracle.brave(atom), || {
                format!("brave({}) engine={brave} oracle={} in\n{src}", program.name(atom), oracle.brave(atom))
            })?;
            for lit in [Literal::pos(atom), Literal::naf(atom)] {
                for a in solve(&[lit], &dual, SolveOptions::limit(8)).map_err(|e| e.to_string())? {
                    models_checked += 1;
                    ensure(extends(&a.model, &oracle), || format!("unsound model {:?} in\n{src}", a.model))?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < RANDOM_BUDGET, || format!("took {elapsed:.1?}, budget {RANDOM_BUDGET:?}"))?;
    Ok(format!(
        "{checked} programs ({rejected} odd-loop programs skipped), {models_checked} partial models sound, brave agreement 100%, {:.1?}",
        elapsed
    ))
}

fn two_models() -> Outcome {
    let p = parse_program("p :- not q. q :- not p.").unwrap();
    let (pa, qa) = (p.atom("p").unwrap(), p.atom("q").unwrap());
    let oracle = stable_models(&p).map_err(|e| e.to_string())?;
    let expected = [[pa].into(), [qa].into()].into();
    ensure(oracle.models == expected, || format!("oracle returned {:?}", oracle.models))?;
    let dual = DualProgram::new(&p).unwrap();
    let got = solve(&[Literal::pos(pa)], &dual, SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure(got.len() == 1, || format!("{} partial models", got.len()))?;
    let m = &got[0].model;
    ensure(m.positives == [pa].into() && m.negatives == [qa].into(), || format!("model {m:?}"))?;
    Ok("oracle {p},{q}; query p gives one model {p, not q}".into())
}

fn tweety() -> Outcome {
    let p = parse_program(
        "flies_tweety :- bird_tweety, not penguin_tweety.\nbird_tweety.\n\
         #pred flies_tweety :: 'tweety flies'.\n#pred bird_tweety :: 'tweety is a bird'.\n\
         #pred penguin_tweety :: 'tweety is a penguin'.",
    )
    .unwrap();
    let dual = DualProgram::new(&p).unwrap();
    let got = solve(&[Literal::pos(p.atom("flies_tweety").unwrap())], &dual, SolveOptions::limit(1))
        .map_err(|e| e.to_string())?;
    let answer = got.first().ok_or("query failed")?;
    let text = render_text(&answer.proofs[0], &TemplateMap::new(dual.program()));
    let lines: Vec<&str> = text.lines().collect();
    ensure(lines.len() == 3, || format!("{} lines:\n{text}", lines.len()))?;
    ensure(lines[2].trim() == "there is no evidence that tweety is a penguin", || format!("naf line `{}`", lines[2]))?;
    Ok("3-line tree with the naf line as expected".into())
}

fn scenario_table() -> Outcome {
    let kb = kb();
    let rows: &[(&[&str], &[u32])] = &[
        (&[], &[]),
        (&["alcohol_drug_influence"], &[3]),
        (&["aircraft_weighs_above_55_pounds"], &[7]),
        (&["aircraft_weighs_above_55_pounds", "certified_by_ama_large_program"], &[]),
        (&["human_carrying_aircraft"], &[2]),
    ];
    for (yes, expected) in rows {
        let a = answers(&kb, yes);
        let report = check_compliance(&a, &kb, &NoClock).map_err(|e| e.to_string())?;
        let found: Vec<u32> = report.findings.iter().map(|f| f.violation_id).collect();
        ensure(found == *expected, || format!("{yes:?}: engine found {found:?}"))?;
        let facts =
            kb.condition_atoms().iter().zip(kb.questionnaire().conditions()).filter(|(_, c)| a.get(c) == Some(true));
        let models =
            stable_models(&kb.program().with_facts(facts.map(|(&atom, _)| atom))).map_err(|e| e.to_string())?;
        ensure(models.models.len() == 1, || format!("{yes:?}: {} stable models", models.models.len()))?;
        let oracle: Vec<u32> = kb.violations().iter().filter(|(_, v)| models.brave(*v)).map(|(n, _)| *n).collect();
        ensure(oracle == *expected, || format!("{yes:?}: oracle found {oracle:?}"))?;
    }
    Ok(format!("{} rows match engine and oracle", rows.len()))
}

fn fix_optimality() -> Outcome {
    let kb = kb();
    let scenarios: &[&[&str]] = &[
        &["aircraft_weighs_above_55_pounds"],
        &["alcohol_drug_influence"],
        &["human_carrying_aircraft"],
        &["human_carrying_aircraft", "yield_right_of_way"],
        &["closer_than_25_ft", "landing_takeoff"],
        &["turbine_model", "ff_cl", "has_prior_history_of_violation"],
        &["aircraft_weighs_above_55_pounds", "alcohol_drug_influence", "directly_over_people_vehicles_structures"],
    ];
    let mut fixes = 0;
    for yes in scenarios {
        let a = answers(&kb, yes);
        let report = check_compliance(&a, &kb, &NoClock).map_err(|e| e.to_string())?;
        ensure(!report.compliant, || format!("{yes:?} is compliant"))?;
        for f in &report.findings {
            let id = f.violation_id;
            let fix = minimal_fix(id, &a, &kb).map_err(|e| e.to_string())?;
            let oracle = fix_oracle(id, &a, &kb).map_err(|e| e.to_string())?.ok_or("oracle found no fix")?;
            ensure(fix.changes.len() == oracle.min_flips, || {
                format!("violation_{id} {yes:?}: {} changes, oracle minimum {}", fix.changes.len(), oracle.min_flips)
            })?;
            ensure(!kb.is_violated(id, &fix.apply(&a)).unwrap(), || {
                format!("violation_{id} {yes:?}: fix does not apply")
            })?;
            for skip in 0..fix.changes.len() {
                let mut partial = a.clone();
                for (_, c) in fix.changes.iter().enumerate().filter(|(i, _)| *i != skip) {
                    partial.set(c.condition.clone(), c.to);
                }
                ensure(kb.is_violated(id, &partial).unwrap(), || format!("violation_{id} {yes:?}: subset suffices"))?;
            }
            fixes += 1;
        }
    }
    let heavy = minimal_fix(7, &answers(&kb, &["aircraft_weighs_above_55_pounds"]), &kb).map_err(|e| e.to_string())?;
    let c = &heavy.changes;
    ensure(c.len() == 1 && c[0].condition == "certified_by_ama_large_program" && !c[0].from && c[0].to, || {
        format!("rule 7 fix {c:?}")
    })?;
    Ok(format!("{fixes} fixes at the exhaustive minimum; rule 7 fix is certified_by_ama_large_program no->yes"))
}

fn post_check(addr: SocketAddr, body: &str) -> Result<String, String> {
    let mut stream = TcpStream::connect(addr).map_err(|e| e.to_string())?;
    write!(
        stream,
        "POST /api/check HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .map_err(|e| e.to_string())?;
    let mut resp = String::new();
    stream.read_to_string(&mut resp).map_err(|e| e.to_string())?;
    Ok(resp)
}

fn latency() -> Outcome {
    let kb = kb();
    let a = answers(&kb, &["aircraft_weighs_above_55_pounds", "alcohol_drug_influence", "human_carrying_aircraft"]);
    let body = serde_json::json!({ "answers": a }).to_string();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).map_err(|e| e.to_string())?;
    let addr = listener.local_addr().map_err(|e| e.to_string())?;
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = runtime.spawn(service::serve(listener, Arc::new(kb), async {
        let _ = stopped.await;
    }));

    let first = post_check(addr, &body)?;
    ensure(first.starts_with("HTTP/1.1 200"), || format!("unexpected response {first}"))?;
    ensure(first.contains("\"violation_id\":7"), || "violation_7 missing".into())?;
    let mut times = Vec::with_capacity(LATENCY_RUNS);
    for _ in 0..LATENCY_RUNS {
        let t = Instant::now();
        post_check(addr, &body)?;
        times.push(t.elapsed().as_secs_f64() * 1000.0);
    }
    let _ = stop.send(());
    let _ = runtime.block_on(server);
    times.sort_by(f64::total_cmp);
    let median = (times[LATENCY_RUNS / 2 - 1] + times[LATENCY_RUNS / 2]) / 2.0;
    ensure(median < LATENCY_BUDGET_MS, || format!("median {median:.2} ms, budget {LATENCY_BUDGET_MS} ms"))?;
    Ok(format!(
        "median {median:.2} ms over {LATENCY_RUNS} requests with 3 active violations, max {:.2} ms",
        times[LATENCY_RUNS - 1]
    ))
}

fn validation() -> Outcome {
    let report = validate(&parse_program("p :- not p.").unwrap());
    ensure(report.odd_loop_atoms == ["p"], || format!("p :- not p. gave {:?}", report.odd_loop_atoms))?;
    let kb = kb();
    ensure(validate(kb.program()).is_ok(), || "rule base rejected".into())?;
    let abductive = kb.abductive_program().program();
    ensure(validate(abductive).is_ok(), || "abductive rule base rejected".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=20);
        let src: String = (0..n).map(|i| format!("#abducible c{i}.\nv :- c{i}, not d{}.\n", (i + 1) % n)).collect();
        let p = desugar_abducibles(&parse_program(&src).unwrap()).map_err(|e| e.to_string())?;
        ensure(validate(&p).is_ok(), || format!("desugared program rejected:\n{src}"))?;
    }
    Ok("p :- not p. names p; rule base, its abductive form and 200 desugared programs pass".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle soundness and brave agreement", oracle_agreement),
        ("two-model program", two_models),
        ("tweety justification", tweety),
        ("AMA scenario table", scenario_table),
        ("fix optimality", fix_optimality),
        ("check latency", latency),
        ("odd-loop validation", validation),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
