//! The reproducibility suite: each check rebuilds one published claim
//! from scratch and reports pass/fail with a short detail line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::canonical_code;
use crate::circulant::{
    build_circulant, lemma_check, scan_circulants, verify_even_impossibility, CirculantSpec,
    ScanMode,
};
use crate::colouring::{chi_o, exists_colouring, is_deeply_critical, reference};
use crate::enumeration::{
    census_dcoc, generate_all, labelled_class_codes, minimal_clique_probe, random_graph,
    CensusFilter, LABELLED_LIMIT,
};
use crate::extension::{
    find_extending_partition, four_extension, gen_odd_dcoc, is_extending_partition,
    nine_vertex_dcoc, nine_vertex_partition, six_extension, two_extension, ExtendingPartition,
};
use crate::graph::{directed_cycle, OrientedGraph};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    /// Everything except the order-7 census, which drops to order 6.
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
}

pub const CHECKS: [(u8, &str); 10] = [
    (1, "directed 5-cycle is a deeply critical clique"),
    (2, "no deeply critical clique of order 7"),
    (3, "nine-vertex graph and its extending partition"),
    (4, "6-extension of the directed triangle"),
    (5, "odd-order construction 5..=31"),
    (6, "circulant characterisation, n <= 13"),
    (7, "no even-order circulant examples, n <= 48"),
    (8, "extensions preserve deep criticality"),
    (9, "solver agrees with partition enumeration"),
    (10, "circulant scans, odd n <= 49"),
];

pub fn run_check(id: u8, depth: Depth) -> CheckResult {
    let started = Instant::now();
    let outcome = match id {
        1 => check_cycle(),
        2 => check_order_seven(depth),
        3 => check_nine_vertex(),
        4 => check_six_extension(),
        5 => check_odd_orders(),
        6 => check_lemma_equivalence(),
        7 => check_even_circulants(),
        8 => check_extension_corpus(),
        9 => check_solver_oracle(),
        10 => check_circulant_scale(),
        _ => Err(format!("no check {id}")),
    };
    let elapsed = started.elapsed();
    let budget = time_budget(id);
    let (passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    let in_time = budget.is_none_or(|b| elapsed <= b);
    if !in_time {
        detail.push_str(&format!("; over the {:?} budget", budget.unwrap()));
    }
    CheckResult {
        id,
        name: CHECKS
            .iter()
            .find(|(i, _)| *i == id)
            .map_or("unknown", |(_, n)| n),
        passed: passed && in_time,
        detail,
        elapsed_secs: elapsed.as_secs_f64(),
    }
}

pub fn run_suite(depth: Depth) -> Vec<CheckResult> {
    CHECKS.iter().map(|&(id, _)| run_check(id, depth)).collect()
}

fn time_budget(id: u8) -> Option<Duration> {
    match id {
        1 | 3 => Some(Duration::from_secs(1)),
        4 => Some(Duration::from_secs(10)),
        5 => Some(Duration::from_secs(60)),
        9 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn check_cycle() -> Outcome {
    let c5 = directed_cycle(5);
    let (chi, _) = chi_o(&c5).map_err(err)?;
    let report = is_deeply_critical(&c5).map_err(err)?;
    ensure(chi == 5, || format!("chi_o = {chi}"))?;
    ensure(report.clique && report.verdict, || {
        "not a deeply critical clique".into()
    })?;
    Ok("chi_o = 5, deeply critical clique".into())
}

fn check_order_seven(depth: Depth) -> Outcome {
    for n in 1..=LABELLED_LIMIT {
        let brute = labelled_class_codes(n).map_err(err)?;
        let generated = generate_all(n).map_err(err)?;
        let codes: std::collections::BTreeSet<_> =
            generated.iter().map(|c| c.code.clone()).collect();
        ensure(codes.len() == generated.len() && codes == brute, || {
            format!("generator disagrees with labelled brute force at n = {n}")
        })?;
    }
    let n = match depth {
        Depth::Quick => 6,
        Depth::Full => 7,
    };
    let report = census_dcoc(n, CensusFilter::CliquesFirst).map_err(err)?;
    ensure(report.dcoc == 0, || {
        format!("{} examples at n = {n}", report.dcoc)
    })?;
    Ok(format!(
        "n = {n}: {} classes, {} cliques, 0 deeply critical",
        report.generated, report.cliques
    ))
}

fn check_nine_vertex() -> Outcome {
    let g = nine_vertex_dcoc();
    ensure(g.is_absolute_clique(), || "not an absolute clique".into())?;
    let report = is_deeply_critical(&g).map_err(err)?;
    ensure(report.verdict, || "not deeply critical".into())?;
    ensure(
        is_extending_partition(&g, &nine_vertex_partition()).map_err(err)?,
        || "published partition is not extending".into(),
    )?;
    Ok(format!(
        "{} arcs, every removal drops chi_o 9 -> 7",
        g.arc_count()
    ))
}

fn check_six_extension() -> Outcome {
    let c3 = directed_cycle(3);
    let p = ExtendingPartition::new(vec![0], vec![1], vec![2]);
    let (g, _) = six_extension(&c3, &p).map_err(err)?;
    let same =
        canonical_code(&g).map_err(err)? == canonical_code(&nine_vertex_dcoc()).map_err(err)?;
    ensure(same, || "codes differ".into())?;
    Ok("canonical codes equal".into())
}

fn check_odd_orders() -> Outcome {
    let mut built = Vec::new();
    for n in (5..=31).step_by(2).filter(|&n| n != 7) {
        let g = gen_odd_dcoc(n).map_err(err)?;
        ensure(g.order() == n, || {
            format!("order {} for n = {n}", g.order())
        })?;
        let report = is_deeply_critical(&g).map_err(err)?;
        ensure(report.clique && report.verdict, || format!("n = {n} fails"))?;
        built.push(n);
    }
    for n in [1, 3, 7] {
        ensure(gen_odd_dcoc(n) == Err(Error::NoSuchOrder(n)), || {
            format!("n = {n} did not fail with NoSuchOrder")
        })?;
    }
    Ok(format!("{} orders verified, 1/3/7 rejected", built.len()))
}

/// Definitional test: absolute clique, at least one arc, and an
/// `(n-2)`-colouring of every single-arc deletion from the general solver.
fn definitional_dcoc(g: &OrientedGraph) -> bool {
    let n = g.order();
    g.is_absolute_clique()
        && g.arc_count() > 0
        && g.arcs()
            .all(|a| exists_colouring(&g.remove_arc(a).expect("arc"), n - 2).is_some())
}

fn all_connection_sets(n: usize) -> impl Iterator<Item = CirculantSpec> {
    let pairs = if n < 3 { 0 } else { (n - 1) / 2 };
    (0..3usize.pow(pairs as u32)).map(move |code| {
        let mut c = code;
        let mut set = Vec::new();
        for k in 1..=pairs {
            match c % 3 {
                1 => set.push(k),
                2 => set.push(n - k),
                _ => {}
            }
            c /= 3;
        }
        CirculantSpec::new(n, set).expect("one residue per pair")
    })
}

fn check_lemma_equivalence() -> Outcome {
    let mut tested = 0;
    let mut positive = 0;
    for n in 1..=13 {
        for spec in all_connection_sets(n) {
            let g = build_circulant(&spec);
            let by_lemma = lemma_check(&spec);
            ensure(by_lemma == definitional_dcoc(&g), || {
                format!("disagreement at n = {n}, S = {:?}", spec.set())
            })?;
            tested += 1;
            positive += by_lemma as usize;
        }
    }
    Ok(format!(
        "{tested} connection sets, {positive} deeply critical, 0 disagreements"
    ))
}

fn check_even_circulants() -> Outcome {
    let sweep = verify_even_impossibility(48);
    ensure(sweep.holds, || {
        let bad: Vec<usize> = sweep
            .orders
            .iter()
            .filter(|o| o.found > 0 || o.cliques_traced == Some(u64::MAX))
            .map(|o| o.n)
            .collect();
        format!("failing orders {bad:?}")
    })?;
    let traced: u64 = sweep.orders.iter().filter_map(|o| o.cliques_traced).sum();
    Ok(format!(
        "{} even orders empty; {traced} circulant cliques traced to the antipodal pair",
        sweep.orders.len()
    ))
}

/// Extendable deeply critical cliques to test the extension lemmas on,
/// each with the partition to use.
pub fn extension_corpus() -> Vec<(String, OrientedGraph, ExtendingPartition)> {
    let mut corpus = Vec::new();
    let seed = nine_vertex_dcoc();
    corpus.push((
        "nine-vertex, published partition".into(),
        seed.clone(),
        nine_vertex_partition(),
    ));
    if let Some(p) = find_extending_partition(&seed) {
        corpus.push(("nine-vertex, searched partition".into(), seed.clone(), p));
    }
    if let Ok(probe) = minimal_clique_probe(9, 200_000, 2024) {
        for w in probe.witnesses {
            let g = OrientedGraph::from_compact(&w).expect("own output");
            if let Some(p) = find_extending_partition(&g) {
                corpus.push((format!("probe hit {w}"), g, p));
            }
        }
    }
    if let Ok((g, p)) = six_extension(&seed, &nine_vertex_partition()) {
        corpus.push(("order-15 6-extension".into(), g, p));
    }
    corpus
}

fn check_extension_corpus() -> Outcome {
    let corpus = extension_corpus();
    for (name, g, p) in &corpus {
        ensure(
            g.is_absolute_clique() && is_deeply_critical(g).map_err(err)?.verdict,
            || format!("{name}: input is not a deeply critical clique"),
        )?;
        let (six, p6) = six_extension(g, p).map_err(err)?;
        let four = four_extension(g, p).map_err(err)?;
        let two = two_extension(g, p).map_err(err)?;
        for (k, h) in [(2, &two), (4, &four), (6, &six)] {
            ensure(
                h.is_absolute_clique() && is_deeply_critical(h).map_err(err)?.verdict,
                || format!("{name}: {k}-extension is not a deeply critical clique"),
            )?;
        }
        ensure(is_extending_partition(&six, &p6).map_err(err)?, || {
            format!("{name}: returned partition of the 6-extension fails")
        })?;
    }
    Ok(format!("{} extendable inputs, 0 failures", corpus.len()))
}

fn check_solver_oracle() -> Outcome {
    let mut compared = 0;
    for class in generate_all(5).map_err(err)? {
        let (chi, _) = chi_o(&class.graph).map_err(err)?;
        let brute = reference::chi_brute(&class.graph);
        ensure(chi == brute, || {
            format!("{}: {chi} vs {brute}", class.graph)
        })?;
        compared += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let g = random_graph(n, &mut rng);
        let (chi, _) = chi_o(&g).map_err(err)?;
        let brute = reference::chi_brute(&g);
        ensure(chi == brute, || format!("{g}: {chi} vs {brute}"))?;
        compared += 1;
    }
    Ok(format!("{compared} graphs, 0 disagreements"))
}

fn check_circulant_scale() -> Outcome {
    let mut table = Vec::new();
    for n in (1..=49).step_by(2) {
        let pruned = scan_circulants(n, ScanMode::Pruned);
        if n <= 33 {
            let exhaustive = scan_circulants(n, ScanMode::Exhaustive);
            ensure(exhaustive.raw == pruned.raw, || {
                format!("modes disagree at n = {n}")
            })?;
        }
        if !pruned.raw.is_empty() {
            table.push(format!("{n}:{}/{}", pruned.raw.len(), pruned.classes.len()));
        }
    }
    Ok(format!("raw/classes per order {}", table.join(" ")))
}
