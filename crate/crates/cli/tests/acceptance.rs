//! Acceptance criteria, run in sequence so the timings are not skewed by
//! other tests. Prints one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use hefcheck::elementary::{is_elementary_bruteforce, is_outbound, ElementaryVerdict};
use hefcheck::hef::{extract_witness, is_hef, is_hef_with, verify_certificate, SearchOptions};
use hefcheck::reduction::{
    assignment_set, build_reduction, opposites_condition_holds, sat_bruteforce, Assignment,
};
use hefcheck::semantics::{reduct, shift};
use hefcheck::text::{
    certificate_from_json, parse_program, parse_rules_in, render_program, render_rule,
    CertificateJson, Cnf3,
};
use hefcheck::{is_elementary_poly, is_hcf, HefCertificate, HefStatus, Limits, Program};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P_EX: &str = "b | c :- a.\nb :- c.\nc :- b.\na :- b.\nd :- b, c.\n";
const P_MEMB: &str =
    "b | c :- a.\nb :- c.\nd :- b.\ne :- b.\nf :- d, e.\ne :- f.\nc :- e.\na :- d.\n";
const P_SEM: &str = "b | c :- a.\ne :- not a, d.\ne :- c, not b, f.\na :- not b.\n";
const P_AB: &str = "a | b.\na :- b.\nb :- a.\n";
const W_MEMB: &str = "b :- c.\ne :- b.\nf :- e.\ne :- f.\nc :- e.\n";

type Criterion = (&'static str, Duration, fn() -> String);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "golden-example-2",
            Duration::from_millis(100),
            golden_example_2,
        ),
        (
            "golden-example-3",
            Duration::from_millis(500),
            golden_example_3,
        ),
        (
            "golden-semantics",
            Duration::from_millis(100),
            golden_semantics,
        ),
        (
            "oracle-equivalence",
            Duration::from_secs(60),
            oracle_equivalence,
        ),
        (
            "structural-properties",
            Duration::from_secs(300),
            structural_properties,
        ),
        (
            "hardness-equivalence",
            Duration::from_secs(600),
            hardness_equivalence,
        ),
        ("shifting", Duration::from_secs(120), shifting),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let timing = format!(
            "{:.3}s of {:.1}s",
            elapsed.as_secs_f64(),
            budget.as_secs_f64()
        );
        match outcome {
            Ok(detail) if elapsed <= budget => println!("PASS {name} ({timing}) {detail}"),
            Ok(detail) => {
                failed += 1;
                println!("FAIL {name} ({timing}) over budget; {detail}");
            }
            Err(panic) => {
                failed += 1;
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {name} ({timing}) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}

fn parse(text: &str) -> Program {
    parse_program(text).unwrap()
}

fn golden_example_2() -> String {
    let p = parse(P_EX);
    let e = p.atom_set(&["a", "b", "c"]).unwrap();
    let o = p.atom_set(&["a", "b"]).unwrap();
    let rule = is_outbound(&o, &e, &p)
        .unwrap()
        .rule
        .expect("{a,b} is outbound");
    assert_eq!(render_rule(&p, p.rule(rule)), "b :- c.");
    assert!(is_elementary_bruteforce(&e, &p, 20)
        .unwrap()
        .is_elementary());

    let verdict = is_hef(&p, &Limits::default());
    assert_eq!(verdict.status, HefStatus::NotHef);
    assert!(verify_certificate(&p, verdict.certificate.as_ref().unwrap()).valid);

    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    let pex = data("pex.lp");
    let (pex, cert) = (pex.to_str().unwrap(), cert_path.to_str().unwrap());
    let out = hefcheck(
        &[
            "check",
            pex,
            "--mode",
            "hef",
            "--format",
            "json",
            "--certificate",
            cert,
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "not_hef");
    let json: CertificateJson =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let loaded = certificate_from_json(&p, &json).unwrap();
    assert!(verify_certificate(&p, &loaded).valid);
    assert_eq!(
        hefcheck(&["verify", pex, cert], None).status.code(),
        Some(0)
    );

    let out = hefcheck(&["elementary", pex, "--set", "a,b,c"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "elementary");
    format!("E = {:?}", json.elementary_set)
}

fn golden_example_3() -> String {
    let p = parse(P_MEMB);
    let rules = shapes_of(&p);
    let all = p.all_atoms();
    assert!(elementary(mask(&all), &rules));
    assert!(is_elementary_bruteforce(&all, &p, 20)
        .unwrap()
        .is_elementary());

    let reduced = p.with_rules(p.rules()[1..].to_vec());
    let s = p.atom_set(&["b", "c", "e", "f"]).unwrap();
    assert_eq!(
        is_elementary_bruteforce(&all, &reduced, 20).unwrap(),
        ElementaryVerdict::NotElementary { subset: s.clone() }
    );
    assert!(!outbound(mask(&s), mask(&all), &rules[1..]));
    assert!(outbound(mask(&s), mask(&all), &rules));

    let w = extract_witness(&all, &p, 20).unwrap();
    assert_eq!(w.set, s);
    assert_eq!(render_program(&w.program), W_MEMB);
    assert!(is_elementary_poly(&s, &w.program).unwrap());

    let cert = HefCertificate {
        elementary_set: s,
        witness: parse_rules_in(W_MEMB, &p).unwrap(),
        violating_rule: 0,
    };
    assert!(verify_certificate(&p, &cert).valid);
    let verdict = is_hef(&p, &Limits::default());
    assert_eq!(verdict.status, HefStatus::NotHef);
    assert!(verify_certificate(&p, verdict.certificate.as_ref().unwrap()).valid);
    "witness matches".into()
}

fn golden_semantics() -> String {
    let p = parse(P_SEM);
    let m = p.atom_set(&["a", "c"]).unwrap();
    assert_eq!(
        render_program(&reduct(&p, &m)),
        "b | c :- a.\ne :- c, f.\na.\n"
    );
    let models = hefcheck::stable_models(&p, 20).unwrap();
    assert_eq!(models, vec![m.clone()]);
    assert_eq!(
        stable_models(p.atom_count(), &shapes_of(&p)),
        vec![mask(&m)]
    );
    "stable models = [{a, c}]".into()
}

fn oracle_equivalence() -> String {
    // Every set of at most four distinct single-head rules over three atoms.
    let space = ShapeSpace::positive(3, 1, 3, false);
    let mut programs = 0;
    let mut rules = Vec::new();
    fn visit(
        shapes: &[Shape],
        from: usize,
        rules: &mut Vec<Shape>,
        left: usize,
        f: &mut dyn FnMut(&[Shape]),
    ) {
        f(rules);
        if left == 0 {
            return;
        }
        for i in from..shapes.len() {
            rules.push(shapes[i]);
            visit(shapes, i + 1, rules, left - 1, f);
            rules.pop();
        }
    }
    let check = |n: usize, rules: &[Shape]| {
        let p = program(n, rules);
        for y in 1u32..1 << n {
            let truth = elementary(y, rules);
            assert_eq!(
                is_elementary_poly(&set(y), &p).unwrap(),
                truth,
                "{p:?} Y={y:b}"
            );
            assert_eq!(
                is_elementary_bruteforce(&set(y), &p, 20)
                    .unwrap()
                    .is_elementary(),
                truth
            );
        }
    };
    visit(&space.shapes, 0, &mut rules, 4, &mut |rs| {
        programs += 1;
        check(3, rs);
    });
    assert_eq!(programs, 1 + 24 + 276 + 2024 + 10626);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let count = rng.gen_range(0..=2 * n);
        let density = rng.gen_range(0.1..0.6);
        let rules: Vec<Shape> = (0..count)
            .map(|_| {
                let head = 1 << rng.gen_range(0..n);
                let body = (0..n)
                    .filter(|_| rng.gen_bool(density))
                    .fold(0, |b, i| b | 1 << i);
                (head, body, 0)
            })
            .collect();
        check(n, &rules);
    }
    format!("{programs} exhaustive + 1000 random programs agree")
}

#[derive(Default)]
struct Tally {
    programs: usize,
    not_hef: usize,
    elementary_sets: usize,
}

fn check_properties(n: usize, rules: &[Shape], tally: &mut Tally) {
    let p = program(n, rules);
    let mut truth_not_hef = false;
    for y in 1u32..1 << n {
        let e = elementary(y, rules);
        assert_eq!(
            is_elementary_bruteforce(&set(y), &p, 20)
                .unwrap()
                .is_elementary(),
            e,
            "{p:?} Y={y:b}"
        );
        // Elementary for P iff elementary for the projection on Y.
        assert_eq!(elementary(y, &project(rules, y)), e, "{p:?} Y={y:b}");
        // Dropping a rule never creates an elementary set.
        for i in 0..rules.len() {
            let mut sub = rules.to_vec();
            sub.remove(i);
            assert!(!elementary(y, &sub) || e, "{p:?} Y={y:b} without rule {i}");
        }
        if e && y.count_ones() > 1 {
            tally.elementary_sets += 1;
            assert!(induced_strongly_connected(y, rules), "{p:?} Y={y:b}");
            assert!(support_conditions(y, rules), "{p:?} Y={y:b}");
        }
        truth_not_hef |= e && disjunctive(y, rules);
    }
    if is_hcf(&p).is_hcf() {
        assert!(!truth_not_hef, "{p:?} is head-cycle-free but not HEF");
    }
    let limits = Limits::default();
    let verdict = is_hef(&p, &limits);
    assert_eq!(verdict.status == HefStatus::NotHef, truth_not_hef, "{p:?}");
    assert_ne!(verdict.status, HefStatus::ResourceLimit);
    assert_eq!(
        is_hef_with(&p, &limits, SearchOptions::unpruned()).status,
        verdict.status
    );
    match &verdict.certificate {
        Some(cert) => {
            tally.not_hef += 1;
            assert!(verify_certificate(&p, cert).valid, "{p:?}");
            let e = mask(&cert.elementary_set);
            let witness = shapes_of(&cert.witness);
            let projected = project(rules, e);
            assert!(witness
                .iter()
                .all(|w| w.0.count_ones() == 1 && projected.contains(w)));
            assert!(elementary(e, &witness));
            assert!((rules[cert.violating_rule].0 & e).count_ones() > 1);
        }
        None => assert_eq!(verdict.status, HefStatus::Hef),
    }
    tally.programs += 1;
}

fn structural_properties() -> String {
    let mut tally = Tally::default();
    let families = [
        (ShapeSpace::positive(4, 4, 4, true), 5),
        (ShapeSpace::positive(3, 3, 3, false), 4),
        (ShapeSpace::positive(4, 4, 4, false), 3),
    ];
    for (space, max_rules) in &families {
        space.for_each_program(*max_rules, |rules| {
            check_properties(space.n, rules, &mut tally)
        });
    }
    format!(
        "{} programs, {} not HEF, {} elementary sets checked",
        tally.programs, tally.not_hef, tally.elementary_sets
    )
}

fn clause_shape(s: usize) -> [i32; 3] {
    let lit = |v: i32, bit: usize| if s >> bit & 1 == 1 { -v } else { v };
    [lit(1, 0), lit(2, 1), lit(3, 2)]
}

fn hardness_equivalence() -> String {
    let budget = Duration::from_secs(600);
    let mut satisfiable = 0;
    let mut all_eight = String::new();
    for subset in 1usize..1 << 8 {
        let clauses: Vec<[i32; 3]> = (0..8)
            .filter(|s| subset >> s & 1 == 1)
            .map(clause_shape)
            .collect();
        let formula = Cnf3::new(3, clauses.clone()).unwrap();
        let (p, atoms) = build_reduction(&formula);
        let n = clauses.len();
        assert_eq!(p.len(), 3 * n + 4 * 3 + 1);
        assert_eq!(p.atom_count(), 2 * 3 + n + 3);
        let rules = shapes_of(&p);

        let models = sat_models(3, &clauses);
        let first = sat_bruteforce(&formula, 24).unwrap();
        assert_eq!(
            first.as_ref().map(|x| x.0.clone()),
            models.first().map(|&b| Assignment::from_bits(b, 3).0)
        );

        let start = Instant::now();
        let verdict = is_hef(&p, &Limits::default().with_time_budget(budget));
        let elapsed = start.elapsed();

        // Every assignment shape: elementary exactly when it satisfies the
        // formula, and exactly when some opposite per clause is missing.
        for bits in 0u64..8 {
            let x = Assignment::from_bits(bits, 3);
            let e = assignment_set(&x, &atoms);
            let sat = models.contains(&bits);
            assert_eq!(
                elementary(mask(&e), &rules),
                sat,
                "{clauses:?} X={bits:03b}"
            );
            assert_eq!(opposites_condition_holds(&formula, &atoms, &e), sat);
        }

        if subset == 0xff {
            assert!(models.is_empty());
            all_eight = match verdict.status {
                HefStatus::Hef => format!("all-eight: hef in {:.3}s", elapsed.as_secs_f64()),
                HefStatus::ResourceLimit => {
                    "all-eight: resource_limit, every assignment shape refuted".into()
                }
                HefStatus::NotHef => panic!("unsatisfiable formula reported not HEF"),
            };
            continue;
        }
        assert_eq!(
            verdict.status == HefStatus::NotHef,
            !models.is_empty(),
            "{clauses:?}"
        );
        if let Some(cert) = &verdict.certificate {
            satisfiable += 1;
            assert!(verify_certificate(&p, cert).valid);
        }
    }
    format!("255 formulas, {satisfiable} satisfiable; {all_eight}")
}

fn shift_shapes(rules: &[Shape]) -> Vec<Shape> {
    let mut out = Vec::new();
    for &(h, b, f) in rules {
        if h.count_ones() == 1 {
            out.push((h, b, f));
            continue;
        }
        for i in (0..32).filter(|i| h >> i & 1 == 1) {
            out.push((1 << i, b, f | (h & !(1 << i))));
        }
    }
    out
}

fn check_shift(n: usize, rules: &[Shape], hef_programs: &mut usize) {
    let p = program(n, rules);
    let shifted = shift(&p);
    assert_eq!(shapes_of(&shifted), shift_shapes(rules));
    if is_hef(&p, &Limits::default()).status != HefStatus::Hef {
        return;
    }
    *hef_programs += 1;
    let models = stable_models(n, rules);
    assert_eq!(models, stable_models(n, &shapes_of(&shifted)), "{p:?}");
    let lib: Vec<u32> = hefcheck::stable_models(&p, 20)
        .unwrap()
        .iter()
        .map(mask)
        .collect();
    assert_eq!(lib, models);
}

fn shifting() -> String {
    let mut hef_programs = 0;
    let mut visited = 0;
    for (space, max_rules) in [
        (ShapeSpace::with_negation(3, 3, 3), 3),
        (ShapeSpace::with_negation(4, 4, 4), 2),
        (ShapeSpace::with_negation(5, 2, 2), 2),
    ] {
        visited += space.for_each_program(max_rules, |rules| {
            check_shift(space.n, rules, &mut hef_programs)
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..5000 {
        let n = rng.gen_range(1..=5);
        let full = (1u32 << n) - 1;
        let count = rng.gen_range(0..=6);
        let rules: Vec<Shape> = (0..count)
            .map(|_| {
                let h = rng.gen_range(1..=full);
                let b = rng.gen_range(0..=full) & rng.gen_range(0..=full);
                let f = rng.gen_range(0..=full) & rng.gen_range(0..=full) & !b;
                (h, b, f)
            })
            .collect();
        check_shift(n, &rules, &mut hef_programs);
        visited += 1;
    }

    let p = parse(P_AB);
    assert_eq!(is_hef(&p, &Limits::default()).status, HefStatus::NotHef);
    let before = hefcheck::stable_models(&p, 20).unwrap();
    let after = hefcheck::stable_models(&shift(&p), 20).unwrap();
    assert_eq!(before, vec![p.all_atoms()]);
    assert!(after.is_empty());
    format!("{hef_programs} HEF programs of {visited} equivalent under shifting; P_AB is not")
}

fn determinism() -> String {
    let dir = tempfile::tempdir().unwrap();
    let reduced = dir.path().join("all_eight.lp");
    let out = hefcheck(
        &[
            "reduce",
            data("all_eight.cnf").to_str().unwrap(),
            "-o",
            reduced.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));

    let mut programs: Vec<String> = [
        "pex.lp",
        "membership.lp",
        "psm.lp",
        "pab.lp",
        "nondisj.lp",
        "hef_not_hcf.lp",
    ]
    .iter()
    .map(|f| data(f).to_str().unwrap().to_string())
    .collect();
    programs.push(reduced.to_str().unwrap().to_string());
    let cnfs: Vec<String> = [
        "one_clause.cnf",
        "two_clauses.cnf",
        "all_eight.cnf",
        "tautology.cnf",
    ]
    .iter()
    .map(|f| data(f).to_str().unwrap().to_string())
    .collect();

    let mut runs: Vec<Vec<String>> = Vec::new();
    for file in &programs {
        for mode in ["hef", "hcf"] {
            runs.push(vec![
                "check".into(),
                file.clone(),
                "--mode".into(),
                mode.into(),
                "--format".into(),
                "json".into(),
            ]);
        }
        runs.push(vec![
            "stable".into(),
            file.clone(),
            "--format".into(),
            "json".into(),
        ]);
        runs.push(vec!["shift".into(), file.clone()]);
    }
    runs.push(vec![
        "elementary".into(),
        programs[0].clone(),
        "--set".into(),
        "a,b,c".into(),
        "--format".into(),
        "json".into(),
    ]);
    let mut xv = vec!["xvalidate".to_string(), "--format".into(), "json".into()];
    xv.extend(cnfs.iter().cloned());
    runs.push(xv);

    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let reference = hefcheck(&args, Some(1));
        assert!(
            reference.status.code().is_some_and(|c| c <= 2),
            "{args:?} failed"
        );
        for threads in [1, 4, 4] {
            let other = hefcheck(&args, Some(threads));
            assert_eq!(other.status.code(), reference.status.code(), "{args:?}");
            assert!(
                other.stdout == reference.stdout,
                "{args:?} differs with {threads} threads"
            );
        }
    }
    format!(
        "{} commands byte-identical across 1 and 4 threads",
        runs.len()
    )
}
