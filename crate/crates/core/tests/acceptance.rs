//! End-to-end acceptance run: one PASS/FAIL line per criterion, then a
//! determinism check that repeats the whole run on 1 and 8 worker threads.

use std::fmt::Write;
use std::process::ExitCode;

use sublo::catalog::{c_m, canonical_bitrack, co_chain, is_subdirectly_irreducible, l_mn};
use sublo::corpus::lattices_up_to;
use sublo::dependency::{check_dependency_invariants, DependencyData};
use sublo::lattice::{direct_product, embedding_search, monolith, principal_congruence, surjection_search};
use sublo::membership::{brute_force_oracle, chain_order_with, decide_sub_lo, decide_sub_n, verify_certificate, Membership};
use sublo::projectivity::{retract_section, LambdaKind};
use sublo::star::{fixture, search_pq, singleton_sides, verify_separation};
use sublo::term::builtin::builtin;
use sublo::term::{check, check_sigma, SigmaKind};
use sublo::tracks::{track_to_embedding, weak_bitracks};
use sublo::FinLattice;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn corpus(n: usize) -> Vec<FinLattice> {
    lattices_up_to(n).expect("corpus")
}

/// `Co(1..=5)` and `L_{m,n}` for `m + n ≤ 5`, with names.
fn catalog() -> Vec<(String, FinLattice)> {
    let mut out: Vec<(String, FinLattice)> = (1..=5).map(|n| (format!("Co({n})"), co_chain(n))).collect();
    for s in 2..=5 {
        for m in 1..s {
            out.push((format!("L({m},{})", s - m), l_mn(m, s - m)));
        }
    }
    out
}

fn c1_chain_identities() -> Outcome {
    let mut failures = Vec::new();
    for t in 1..=6 {
        let l = co_chain(t);
        for name in ["E", "P", "HS", "STAR"] {
            let id = builtin(name).unwrap();
            let holds = check(&l, &id).map(|o| o.holds()).unwrap_or(false);
            if !holds {
                failures.push(format!("Co({t}) {name}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("Co(1..6) x {{E,P,HS,STAR}}; failures {failures:?}"))
}

fn c2_sigma_direction() -> Outcome {
    let mut ls = corpus(6);
    ls.extend(catalog().into_iter().map(|(_, l)| l));
    let pairs = [("E", SigmaKind::E), ("P", SigmaKind::P), ("HS", SigmaKind::HS)];
    let mut checked = [0usize; 3];
    let mut exceptions = 0;
    for l in &ls {
        for (i, (name, kind)) in pairs.iter().enumerate() {
            if check(l, &builtin(name).unwrap()).unwrap().holds() {
                checked[i] += 1;
                if !check_sigma(l, *kind).holds() {
                    exceptions += 1;
                }
            }
        }
    }
    outcome(
        exceptions == 0,
        format!("{} lattices; satisfying E/P/HS: {:?}; exceptions {exceptions}", ls.len(), checked),
    )
}

fn c3_membership_boundaries() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=5 {
        let l = co_chain(n);
        if !(decide_sub_n(&l, n).unwrap() && !decide_sub_n(&l, n - 1).unwrap()) {
            bad.push(format!("Co({n})"));
        }
    }
    let n5 = l_mn(1, 1);
    if !(decide_sub_n(&n5, 3).unwrap() && !decide_sub_n(&n5, 2).unwrap()) {
        bad.push("pentagon".into());
    }
    let mut distributive = 0;
    for l in corpus(8).iter().filter(|l| l.is_distributive()) {
        distributive += 1;
        if !decide_sub_n(l, 2).unwrap() {
            bad.push(format!("distributive lattice of size {}", l.len()));
        }
    }
    if decide_sub_lo(&FinLattice::m3()).unwrap().accepted() {
        bad.push("M3 accepted".into());
    }
    outcome(bad.is_empty(), format!("{distributive} distributive lattices in SUB(2); problems {bad:?}"))
}

fn c4_certificates() -> Outcome {
    let mut ls = corpus(8);
    ls.extend(catalog().into_iter().map(|(_, l)| l));
    let mut accepted = 0;
    let mut bad = Vec::new();
    for l in &ls {
        if let Membership::Accepted(cert) = decide_sub_lo(l).unwrap() {
            accepted += 1;
            let j = l.join_irreducibles().len();
            if verify_certificate(l, &cert).is_err() || cert.total_size() > j * j {
                bad.push(format!("size {}", l.len()));
            }
        }
    }
    let mut si = 0;
    for (name, l) in catalog() {
        if !is_subdirectly_irreducible(&l).unwrap() {
            continue;
        }
        si += 1;
        let dep = DependencyData::compute(&l).unwrap();
        let j = l.join_irreducibles().len();
        let found = l.join_irreducibles().iter().any(|&a| match chain_order_with(&l, &dep, a).unwrap() {
            Some(w) if w.chain.len() == j => {
                let images: std::collections::BTreeSet<u64> = (0..l.len()).map(|x| w.image(&l, x)).collect();
                images.len() == l.len()
            }
            _ => false,
        });
        if !found {
            bad.push(format!("{name}: no injective full anchor"));
        }
    }
    outcome(bad.is_empty(), format!("{accepted} certificates verified; {si} SI catalog lattices; problems {bad:?}"))
}

fn c5_oracle() -> Outcome {
    let ls = corpus(7);
    let mut disagreements = 0;
    let mut members = 0;
    for l in &ls {
        let d = decide_sub_lo(l).unwrap().accepted();
        members += d as usize;
        if d != brute_force_oracle(l).unwrap() {
            disagreements += 1;
        }
    }
    outcome(
        disagreements == 0,
        format!("{} lattices of size <= 7, {members} members; disagreements {disagreements}", ls.len()),
    )
}

fn c6_dependency_invariants() -> Outcome {
    let mut ls = corpus(8);
    ls.extend(catalog().into_iter().map(|(_, l)| l));
    let mut lattices = 0;
    let mut violations = Vec::new();
    for l in ls.iter().filter(|l| decide_sub_lo(l).unwrap().accepted()) {
        lattices += 1;
        for r in check_dependency_invariants(l).unwrap().results {
            if r.applicable && !r.holds {
                violations.push(format!("{} on size {}: {:?}", r.name, l.len(), r.witness));
            }
        }
    }
    outcome(violations.is_empty(), format!("{lattices} member lattices; violations {violations:?}"))
}

fn c7_catalog() -> Outcome {
    let mut bad = Vec::new();
    for s in 2..=5 {
        for m in 1..s {
            let n = s - m;
            let l = l_mn(m, n);
            let c = c_m(&l, m).unwrap();
            let mut expect: Vec<usize> = (0..=s)
                .filter(|&i| i != m)
                .map(|i| l.resolve(&format!("{{{i}}}")).unwrap())
                .chain([c])
                .collect();
            expect.sort_unstable();
            if l.join_irreducibles() != expect {
                bad.push(format!("L({m},{n}) join-irreducibles"));
            }
            let below = l.resolve(&format!("{{{}}}", m - 1)).unwrap();
            if monolith(&l).unwrap() != Some(principal_congruence(&l, below, c)) {
                bad.push(format!("L({m},{n}) monolith"));
            }
            let canon = canonical_bitrack(m, n);
            match track_to_embedding(&l, &canon) {
                Ok(phi) if phi.is_embedding(&co_chain(s), &l) => {}
                _ => bad.push(format!("L({m},{n}) canonical track")),
            }
            let (s0, t0) = canon.trace();
            for m2 in 1..s {
                for t in weak_bitracks(&l, m2, s - m2) {
                    let tr = t.trace();
                    if tr != (s0.clone(), t0.clone()) && tr != (t0.clone(), s0.clone()) {
                        bad.push(format!("L({m},{n}) stray track of index ({m2},{})", s - m2));
                    }
                }
            }
        }
        let ls: Vec<FinLattice> = (1..s).map(|m| l_mn(m, s - m)).collect();
        let mut classes = 0;
        for (i, a) in ls.iter().enumerate() {
            let alone = ls.iter().enumerate().all(|(j, b)| i == j || embedding_search(a, b).is_none());
            classes += alone as usize;
        }
        if classes != s - 1 {
            bad.push(format!("sum {s}: {classes} non-embeddable classes"));
        }
    }
    outcome(bad.is_empty(), format!("m+n <= 5; problems {bad:?}"))
}

fn c8_projectivity() -> Outcome {
    let targets = [
        ("Co(3)", LambdaKind::Plain(3)),
        ("pentagon", LambdaKind::Split(1, 1)),
        ("L(1,2)", LambdaKind::Split(1, 2)),
    ];
    let two = FinLattice::chain(2);
    let (co2, co3, n5, l12) = (co_chain(2), co_chain(3), l_mn(1, 1), l_mn(1, 2));
    let mut sources: Vec<FinLattice> = corpus(8);
    sources.extend([
        co_chain(4),
        co_chain(5),
        l_mn(1, 3),
        l_mn(2, 2),
        l_mn(2, 1),
        direct_product(&co3, &two),
        direct_product(&n5, &two),
        direct_product(&l12, &two),
        direct_product(&co3, &co2),
        direct_product(&n5, &n5),
        direct_product(&n5, &co3),
        direct_product(&l12, &co2),
        direct_product(&l12, &n5),
        direct_product(&co3, &co3),
    ]);
    let mut surjections = 0;
    let mut failures = Vec::new();
    let mut max_iter = 0;
    for lp in sources.iter().filter(|l| l.len() <= 60 && decide_sub_lo(l).unwrap().accepted()) {
        for (name, kind) in targets {
            let (t, _) = kind.domain().unwrap();
            for pi in surjection_search(lp, &t, usize::MAX) {
                surjections += 1;
                match retract_section(lp, &pi, kind) {
                    Ok(r) if r.iterations <= lp.len() => max_iter = max_iter.max(r.iterations),
                    other => failures.push(format!("{name} from size {}: {:?}", lp.len(), other.err())),
                }
            }
        }
    }
    outcome(
        failures.is_empty() && surjections > 0,
        format!("{surjections} surjections split; max iterations {max_iter}; failures {failures:?}"),
    )
}

fn c9_counterexample() -> Outcome {
    let log = match search_pq() {
        Ok(log) => log,
        Err(e) => return outcome(false, format!("search failed: {e}")),
    };
    let mut bad = Vec::new();
    for w in &log.witnesses {
        let p = sublo::Poset::from_json(&w.p).unwrap();
        let q = sublo::Poset::from_json(&w.q).unwrap();
        if (p.len(), q.len()) != (6, 7) {
            bad.push("sizes".to_string());
        }
        if singleton_sides(&p).unwrap() != ("{1}".to_string(), "{}".to_string()) {
            bad.push("singleton assignment".to_string());
        }
        if !verify_separation(&p, &q).unwrap().separated {
            bad.push("separation".to_string());
        }
    }
    let (fp, fq) = fixture().unwrap();
    let shipped = verify_separation(&fp, &fq).unwrap().separated
        && log.witnesses.iter().any(|w| w.q == fq.to_json());
    outcome(
        !log.witnesses.is_empty() && bad.is_empty() && shipped,
        format!(
            "{} completions, {} with Co(P) failing, {} witnesses; shipped pair confirmed {shipped}; problems {bad:?}",
            log.completions,
            log.p_failures,
            log.witnesses.len()
        ),
    )
}

type Criterion = fn() -> Outcome;

const CRITERIA: [(&str, Criterion); 9] = [
    ("chain identity suite", c1_chain_identities),
    ("join-irreducible readings", c2_sigma_direction),
    ("membership boundaries", c3_membership_boundaries),
    ("certificate soundness and bound", c4_certificates),
    ("oracle equivalence", c5_oracle),
    ("dependency invariants", c6_dependency_invariants),
    ("catalog suite", c7_catalog),
    ("projectivity", c8_projectivity),
    ("counterexample", c9_counterexample),
];

fn run_all() -> (Vec<bool>, String) {
    let mut report = String::new();
    let mut passes = Vec::new();
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let o = f();
        writeln!(report, "criterion {}: {} ({name}): {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail).unwrap();
        passes.push(o.pass);
    }
    (passes, report)
}

fn run_on(workers: usize) -> String {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(|| run_all().1)
}

fn main() -> ExitCode {
    // Determinism is judged on the report text of the other nine criteria.
    let one = run_on(1);
    let eight = run_on(8);
    let again = run_on(8);
    let (mut passes, report) = run_all();
    print!("{report}");
    let same = one == eight && eight == again && again == report;
    println!(
        "criterion 10: {} (determinism): reports at 1 and 8 workers {}",
        if same { "PASS" } else { "FAIL" },
        if same { "byte-identical" } else { "differ" }
    );
    passes.push(same);
    let failed = passes.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria pass", passes.len() - failed, passes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
