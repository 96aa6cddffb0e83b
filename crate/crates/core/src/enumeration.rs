//! Isomorph-free generation of small oriented graphs and censuses of
//! deeply critical oriented cliques.
//!
//! Generation is by canonical augmentation. Each representative on
//! `n - 1` vertices gets one new vertex attached in all `3^(n-1)` ways.
//! A child is kept only if deleting its canonically last vertex gives
//! back the parent's class; survivors of one parent are deduplicated by
//! canonical code and emitted in code order.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{
    canonical_code, canonical_labelling, equitable_partition, CanonicalCode, CANON_LIMIT,
};
use crate::colouring::deeply_critical_verdict;
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

/// Largest order for exhaustive generation and censuses.
pub const EXHAUSTIVE_LIMIT: usize = 7;

/// A class representative with its canonical code.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub graph: OrientedGraph,
    pub code: CanonicalCode,
}

fn check_order(n: usize) -> Result<()> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::Capacity {
            what: "exhaustive order",
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// Canonical children of one parent, in canonical-code order.
pub fn children(parent: &ClassRep) -> Vec<ClassRep> {
    let p = &parent.graph;
    let m = p.order();
    let v = m;
    let mut kept: BTreeMap<CanonicalCode, OrientedGraph> = BTreeMap::new();
    for mut code in 0..3usize.pow(m as u32) {
        let (mut out_of_new, mut into_new) = (0u64, 0u64);
        for u in 0..m {
            match code % 3 {
                1 => out_of_new |= 1 << u,
                2 => into_new |= 1 << u,
                _ => {}
            }
            code /= 3;
        }
        let child = p
            .with_vertex(out_of_new, into_new)
            .expect("within capacity");
        // The canonically last vertex lies in the last cell of the
        // equitable partition, whose vertices share the largest
        // (out-degree, in-degree) key.
        let key = |u: usize| {
            (
                child.out_mask(u).count_ones(),
                child.in_mask(u).count_ones(),
            )
        };
        let new_key = key(v);
        if (0..m).any(|u| key(u) > new_key) {
            continue;
        }
        let cells = equitable_partition(&child);
        if cells.last().is_some_and(|c| c >> v & 1 == 0) {
            continue;
        }
        let labelling = canonical_labelling(&child).expect("within canonical limit");
        let w = labelling.last_vertex();
        let accepted = w == v
            || canonical_code(&child.without_vertex(w)).expect("within limit") == parent.code;
        if accepted {
            kept.entry(labelling.code).or_insert(child);
        }
    }
    kept.into_iter()
        .map(|(code, graph)| ClassRep { graph, code })
        .collect()
}

/// Every isomorphism class on `n` vertices, one representative each.
pub fn generate_all(n: usize) -> Result<Vec<ClassRep>> {
    check_order(n)?;
    let mut level = vec![root()];
    for _ in 1..=n {
        level = level.par_iter().flat_map_iter(children).collect();
    }
    Ok(level)
}

fn root() -> ClassRep {
    let graph = OrientedGraph::empty(0).expect("empty graph");
    let code = canonical_code(&graph).expect("empty graph");
    ClassRep { graph, code }
}

/// Class counts for orders `1..=n` without keeping the last level.
pub fn count_classes(n: usize) -> Result<u64> {
    check_order(n)?;
    if n == 0 {
        return Ok(1);
    }
    let parents = generate_all(n - 1)?;
    Ok(parents.par_iter().map(|p| children(p).len() as u64).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusFilter {
    /// Criticality is decided for every graph.
    All,
    /// Only absolute cliques reach the criticality check.
    CliquesFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanParameters {
    pub mode: String,
    pub filter: Option<CensusFilter>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub model: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n: usize,
    /// Graphs examined: isomorphism classes for a census, samples for a probe.
    pub generated: u64,
    pub cliques: u64,
    pub dcoc: u64,
    /// Deeply critical graphs, cliques or not; only counted under `All`.
    pub deeply_critical: Option<u64>,
    /// Compact forms of the deeply critical cliques found.
    pub witnesses: Vec<String>,
    pub elapsed_secs: f64,
    pub parameters: ScanParameters,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct Tally {
    generated: u64,
    cliques: u64,
    dcoc: u64,
    deeply_critical: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn add(&mut self, g: &OrientedGraph, filter: CensusFilter) {
        self.generated += 1;
        let clique = g.is_absolute_clique();
        let hit = match filter {
            CensusFilter::All => {
                let critical = deeply_critical_verdict(g);
                self.deeply_critical += critical as u64;
                critical && clique
            }
            CensusFilter::CliquesFirst => clique && deeply_critical_verdict(g),
        };
        self.cliques += clique as u64;
        if hit {
            self.dcoc += 1;
            self.witnesses.push(g.to_compact());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.generated += other.generated;
        self.cliques += other.cliques;
        self.dcoc += other.dcoc;
        self.deeply_critical += other.deeply_critical;
        self.witnesses.extend(other.witnesses);
        self
    }
}

/// Progress of a census: parents are processed in fixed-size chunks and
/// each completed chunk is recorded with its tally.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CensusCheckpoint {
    n: usize,
    filter: Option<CensusFilter>,
    chunks: BTreeMap<usize, Tally>,
}

const CHUNK: usize = 512;

pub fn census_dcoc(n: usize, filter: CensusFilter) -> Result<ScanReport> {
    census_dcoc_resumable(n, filter, None)
}

/// Census of deeply critical oriented cliques over all classes of order
/// `n`, optionally resuming from and updating a checkpoint file.
pub fn census_dcoc_resumable(
    n: usize,
    filter: CensusFilter,
    checkpoint: Option<&Path>,
) -> Result<ScanReport> {
    check_order(n)?;
    let started = Instant::now();
    let parameters = ScanParameters {
        mode: "exhaustive".into(),
        filter: Some(filter),
        trials: None,
        seed: None,
        model: None,
    };
    if n == 0 {
        return Ok(ScanReport {
            n,
            generated: 1,
            cliques: 1,
            dcoc: 0,
            deeply_critical: (filter == CensusFilter::All).then_some(0),
            witnesses: Vec::new(),
            elapsed_secs: started.elapsed().as_secs_f64(),
            parameters,
        });
    }
    let parents = generate_all(n - 1)?;
    let chunk_count = parents.len().div_ceil(CHUNK);
    let loaded = match checkpoint {
        Some(p) => load_checkpoint(p)?
            .filter(|c| c.n == n && c.filter == Some(filter))
            .unwrap_or_default(),
        None => CensusCheckpoint::default(),
    };
    let state = Mutex::new(CensusCheckpoint {
        n,
        filter: Some(filter),
        chunks: loaded.chunks,
    });
    let todo: Vec<usize> = {
        let st = state.lock().expect("lock");
        (0..chunk_count)
            .filter(|c| !st.chunks.contains_key(c))
            .collect()
    };
    todo.par_iter().try_for_each(|&c| -> Result<()> {
        let range = c * CHUNK..((c + 1) * CHUNK).min(parents.len());
        let tally = parents[range]
            .iter()
            .map(|p| {
                let mut t = Tally::default();
                for child in children(p) {
                    t.add(&child.graph, filter);
                }
                t
            })
            .fold(Tally::default(), Tally::merge);
        let mut st = state.lock().expect("lock");
        st.chunks.insert(c, tally);
        if let Some(p) = checkpoint {
            save_checkpoint(p, &st)?;
        }
        Ok(())
    })?;
    let st = state.into_inner().expect("lock");
    let total = st.chunks.into_values().fold(Tally::default(), Tally::merge);
    Ok(ScanReport {
        n,
        generated: total.generated,
        cliques: total.cliques,
        dcoc: total.dcoc,
        deeply_critical: (filter == CensusFilter::All).then_some(total.deeply_critical),
        witnesses: total.witnesses,
        elapsed_secs: started.elapsed().as_secs_f64(),
        parameters,
    })
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line: 0,
        msg: format!("checkpoint: {e}"),
    }
}

fn load_checkpoint(path: &Path) -> Result<Option<CensusCheckpoint>> {
    match std::fs::read_to_string(path) {
        Ok(s) => serde_json::from_str(&s).map(Some).map_err(io_err),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io_err(e)),
    }
}

fn save_checkpoint(path: &Path, c: &CensusCheckpoint) -> Result<()> {
    let tmp = path.with_extension("ckpt.tmp");
    std::fs::write(&tmp, serde_json::to_string(c).map_err(io_err)?).map_err(io_err)?;
    std::fs::rename(tmp, path).map_err(io_err)
}

/// Label the pairs `(u, v)`, `u < v`, with none / `u -> v` / `v -> u`
/// independently and uniformly.
pub fn random_graph<R: Rng>(n: usize, rng: &mut R) -> OrientedGraph {
    let mut rows = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            match rng.gen_range(0..3u8) {
                1 => rows[u] |= 1 << v,
                2 => rows[v] |= 1 << u,
                _ => {}
            }
        }
    }
    OrientedGraph::from_rows_unchecked(n, rows)
}

pub const PROBE_MODEL: &str = "uniform over none/forward/backward per vertex pair";

/// Sample labelled oriented graphs and report clique and DCOC hits.
/// Witnesses are deduplicated up to isomorphism when the order allows.
pub fn random_probe(n: usize, trials: u64, seed: u64) -> Result<ScanReport> {
    if n == 0 || n > crate::graph::MAX_VERTICES {
        return Err(Error::Capacity {
            what: "probe order",
            n,
            limit: crate::graph::MAX_VERTICES,
        });
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cliques = 0;
    let mut dcoc = 0;
    let mut seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    let mut witnesses = Vec::new();
    for _ in 0..trials {
        let g = random_graph(n, &mut rng);
        if !g.is_absolute_clique() {
            continue;
        }
        cliques += 1;
        if !deeply_critical_verdict(&g) {
            continue;
        }
        dcoc += 1;
        let fresh = if n <= CANON_LIMIT {
            let code = canonical_code(&g)?;
            seen.insert(code.as_bytes().to_vec(), ()).is_none()
        } else {
            true
        };
        if fresh {
            witnesses.push(g.to_compact());
        }
    }
    Ok(ScanReport {
        n,
        generated: trials,
        cliques,
        dcoc,
        deeply_critical: None,
        witnesses,
        elapsed_secs: started.elapsed().as_secs_f64(),
        parameters: ScanParameters {
            mode: "probe".into(),
            filter: Some(CensusFilter::CliquesFirst),
            trials: Some(trials),
            seed: Some(seed),
            model: Some(PROBE_MODEL.into()),
        },
    })
}

pub const DESCENT_MODEL: &str =
    "uniform three-state sample, then random arc deletions while the graph stays an absolute clique";

/// Delete arcs in random order for as long as the graph stays an
/// absolute clique. The result has no arc whose removal keeps it a clique.
pub fn descend_to_minimal_clique<R: Rng>(g: &OrientedGraph, rng: &mut R) -> OrientedGraph {
    let mut g = g.clone();
    loop {
        let mut arcs: Vec<_> = g.arcs().collect();
        rand::seq::SliceRandom::shuffle(arcs.as_mut_slice(), rng);
        let next = arcs.into_iter().find_map(|a| {
            let h = g.remove_arc(a).expect("arc of g");
            h.is_absolute_clique().then_some(h)
        });
        match next {
            Some(h) => g = h,
            None => return g,
        }
    }
}

/// Targeted probe: every sampled absolute clique is first thinned to an
/// arc-minimal clique, which is where deeply critical cliques live.
pub fn minimal_clique_probe(n: usize, trials: u64, seed: u64) -> Result<ScanReport> {
    if n == 0 || n > CANON_LIMIT {
        return Err(Error::Capacity {
            what: "probe order",
            n,
            limit: CANON_LIMIT,
        });
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cliques = 0;
    let mut dcoc = 0;
    let mut seen = BTreeSet::new();
    let mut witnesses = Vec::new();
    for _ in 0..trials {
        let g = random_graph(n, &mut rng);
        if !g.is_absolute_clique() {
            continue;
        }
        cliques += 1;
        let g = descend_to_minimal_clique(&g, &mut rng);
        if !deeply_critical_verdict(&g) {
            continue;
        }
        dcoc += 1;
        if seen.insert(canonical_code(&g)?) {
            witnesses.push(g.to_compact());
        }
    }
    Ok(ScanReport {
        n,
        generated: trials,
        cliques,
        dcoc,
        deeply_critical: None,
        witnesses,
        elapsed_secs: started.elapsed().as_secs_f64(),
        parameters: ScanParameters {
            mode: "minimal-clique-probe".into(),
            filter: Some(CensusFilter::CliquesFirst),
            trials: Some(trials),
            seed: Some(seed),
            model: Some(DESCENT_MODEL.into()),
        },
    })
}

/// Largest order for [`labelled_class_codes`].
pub const LABELLED_LIMIT: usize = 5;

/// Canonical codes of every labelled oriented graph on `n` vertices:
/// a brute-force class census independent of the augmentation scheme.
pub fn labelled_class_codes(n: usize) -> Result<BTreeSet<CanonicalCode>> {
    if n > LABELLED_LIMIT {
        return Err(Error::Capacity {
            what: "labelled enumeration order",
            n,
            limit: LABELLED_LIMIT,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut codes = BTreeSet::new();
    for mut code in 0..3usize.pow(pairs.len() as u32) {
        let mut rows = vec![0u64; n];
        for &(u, v) in &pairs {
            match code % 3 {
                1 => rows[u] |= 1 << v,
                2 => rows[v] |= 1 << u,
                _ => {}
            }
            code /= 3;
        }
        codes.insert(canonical_code(&OrientedGraph::from_out_rows(n, &rows)?)?);
    }
    Ok(codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::directed_cycle;

    #[test]
    fn small_counts_match_brute_force() {
        for n in 1..=4 {
            let brute = labelled_class_codes(n).unwrap();
            let gen = generate_all(n).unwrap();
            let codes: BTreeSet<CanonicalCode> = gen.iter().map(|c| c.code.clone()).collect();
            assert_eq!(codes.len(), gen.len(), "repeat at n = {n}");
            assert_eq!(codes, brute);
        }
        assert_eq!(generate_all(3).unwrap().len(), 7);
        assert_eq!(generate_all(4).unwrap().len(), 42);
        assert_eq!(generate_all(1).unwrap().len(), 1);
    }

    #[test]
    fn codes_match_representatives() {
        for c in generate_all(4).unwrap() {
            assert_eq!(canonical_code(&c.graph).unwrap(), c.code);
        }
    }

    #[test]
    fn deterministic_order() {
        let a: Vec<_> = generate_all(5)
            .unwrap()
            .into_iter()
            .map(|c| c.code)
            .collect();
        let b: Vec<_> = generate_all(5)
            .unwrap()
            .into_iter()
            .map(|c| c.code)
            .collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 582);
    }

    #[test]
    fn capacity() {
        assert!(matches!(generate_all(8), Err(Error::Capacity { .. })));
        assert!(matches!(
            census_dcoc(8, CensusFilter::CliquesFirst),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn small_censuses() {
        let c5_code = canonical_code(&directed_cycle(5)).unwrap();
        for filter in [CensusFilter::All, CensusFilter::CliquesFirst] {
            let r = census_dcoc(5, filter).unwrap();
            assert_eq!(r.generated, 582);
            assert!(r.dcoc >= 1);
            assert!(r.witnesses.iter().any(|w| {
                canonical_code(&OrientedGraph::from_compact(w).unwrap()).unwrap() == c5_code
            }));
            assert_eq!(census_dcoc(3, filter).unwrap().dcoc, 0);
        }
    }

    #[test]
    fn probe_is_reproducible() {
        let a = random_probe(5, 3000, 11).unwrap();
        let b = random_probe(5, 3000, 11).unwrap();
        assert_eq!(
            (a.cliques, a.dcoc, &a.witnesses),
            (b.cliques, b.dcoc, &b.witnesses)
        );
        assert_eq!(random_probe(7, 2000, 3).unwrap().dcoc, 0);
    }
}
