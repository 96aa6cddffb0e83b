//! Oriented circulants `C(n, S)` and connection-set scans.
//!
//! `C(n, S)` is a deeply critical oriented clique exactly when, with
//! `T = S ∪ {0}`:
//!
//! * (a) every residue `k` is `x + y` or `-(x + y)` for some `x, y` in `T`;
//! * (b) for every `s` in `S`, the only such expression of `2s` is
//!   `s + s` with the plus sign.
//!
//! [`lemma_check`] tests this by listing all pairs of `T`. The scans use
//! a bit-mask form of the same test, which the tests cross-check.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, OrientedGraph, MAX_VERTICES};

/// Modulus and connection set of an oriented circulant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CirculantSpec {
    n: usize,
    set: Vec<usize>,
}

impl CirculantSpec {
    pub fn new(n: usize, set: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadConnectionSet(format!(
                "modulus {n} outside 1..={MAX_VERTICES}"
            )));
        }
        let set: BTreeSet<usize> = set.into_iter().collect();
        for &k in &set {
            if k == 0 || k >= n {
                return Err(Error::BadConnectionSet(format!("{k} is not in 1..{n}")));
            }
            if set.contains(&(n - k)) {
                return Err(Error::BadConnectionSet(format!(
                    "{k} and its negative {} are both present",
                    n - k
                )));
            }
        }
        Ok(CirculantSpec {
            n,
            set: set.into_iter().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    pub fn mask(&self) -> u64 {
        self.set.iter().fold(0, |m, &k| m | 1 << k)
    }

    fn from_mask(n: usize, mask: u64) -> Self {
        CirculantSpec {
            n,
            set: bits(mask).collect(),
        }
    }

    /// `cS mod n`.
    pub fn scaled(&self, c: usize) -> Self {
        let mut set: Vec<usize> = self.set.iter().map(|&s| s * c % self.n).collect();
        set.sort_unstable();
        CirculantSpec { n: self.n, set }
    }

    /// Distinct images `cS` over the units `c` of `Z_n`.
    pub fn multiplier_class(&self) -> BTreeSet<Vec<usize>> {
        units(self.n).map(|c| self.scaled(c).set).collect()
    }

    /// Lexicographically least sorted set in the multiplier class.
    pub fn class_representative(&self) -> Self {
        let set = self
            .multiplier_class()
            .into_iter()
            .next()
            .expect("1 is always a unit");
        CirculantSpec { n: self.n, set }
    }
}

pub fn units(n: usize) -> impl Iterator<Item = usize> {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..n.max(2)).filter(move |&c| gcd(c, n) == 1)
}

/// Arc `i -> j` whenever `j - i mod n` lies in `S`.
pub fn build_circulant(spec: &CirculantSpec) -> OrientedGraph {
    let n = spec.n;
    let mask = spec.mask();
    let rows = (0..n).map(|i| rotate(mask, i, n)).collect();
    OrientedGraph::from_rows_unchecked(n, rows)
}

/// Rotate an `n`-bit mask: bit `i` moves to `i + r mod n`.
#[inline]
fn rotate(mask: u64, r: usize, n: usize) -> u64 {
    let r = r % n;
    if r == 0 {
        return mask;
    }
    ((mask << r) | (mask >> (n - r))) & full_mask(n)
}

/// Bit `i` moves to `-i mod n`.
#[inline]
fn negate(mask: u64, n: usize) -> u64 {
    rotate(mask.reverse_bits() >> (64 - n), 1, n)
}

/// Representation counts over unordered pairs `{x, y}` of `S ∪ {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representations {
    /// `plus[k]` lists pairs with `x + y = k`.
    pub plus: Vec<Vec<(usize, usize)>>,
    /// `minus[k]` lists pairs with `-(x + y) = k`.
    pub minus: Vec<Vec<(usize, usize)>>,
}

pub fn representations(spec: &CirculantSpec) -> Representations {
    let n = spec.n;
    let mut t = vec![0];
    t.extend_from_slice(&spec.set);
    let mut plus = vec![Vec::new(); n];
    let mut minus = vec![Vec::new(); n];
    for (i, &x) in t.iter().enumerate() {
        for &y in &t[i..] {
            let sum = (x + y) % n;
            plus[sum].push((x, y));
            minus[(n - sum) % n].push((x, y));
        }
    }
    Representations { plus, minus }
}

/// Which half of the characterisation fails, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaVerdict {
    /// Residues with no representation; (a) holds iff empty.
    pub uncovered: Vec<usize>,
    /// Elements `s` whose double has another representation; (b) holds iff empty.
    pub ambiguous: Vec<usize>,
}

impl LemmaVerdict {
    pub fn holds(&self) -> bool {
        self.uncovered.is_empty() && self.ambiguous.is_empty()
    }
}

pub fn lemma_verdict(spec: &CirculantSpec) -> LemmaVerdict {
    let n = spec.n;
    let reps = representations(spec);
    let uncovered = (0..n)
        .filter(|&k| reps.plus[k].is_empty() && reps.minus[k].is_empty())
        .collect();
    let ambiguous = spec
        .set
        .iter()
        .copied()
        .filter(|&s| {
            let k = 2 * s % n;
            !(reps.plus[k] == [(s, s)] && reps.minus[k].is_empty())
        })
        .collect();
    LemmaVerdict {
        uncovered,
        ambiguous,
    }
}

/// Does `C(n, S)` satisfy both conditions? The arcless `C(1, {})`
/// satisfies them vacuously but is not counted, matching the convention
/// that graphs without arcs are not deeply critical.
pub fn lemma_check(spec: &CirculantSpec) -> bool {
    !spec.set.is_empty() && lemma_verdict(spec).holds()
}

/// Condition (a) on a raw mask.
#[inline]
fn covers(n: usize, t: u64) -> bool {
    let sums = bits(t).fold(0u64, |acc, x| acc | rotate(t, x, n));
    (sums | negate(sums, n)) == full_mask(n)
}

/// Condition (b) for every `s` in `s_mask`, against `t = S ∪ {0}`.
#[inline]
fn doubles_unique(n: usize, s_mask: u64, t: u64) -> bool {
    let neg_t = negate(t, n);
    bits(s_mask).all(|s| {
        let k = 2 * s % n;
        // ordered pairs (x, k - x) in T x T
        (t & rotate(neg_t, k, n)).count_ones() == 1 && t & rotate(neg_t, (n - k) % n, n) == 0
    })
}

/// Bit-mask form of [`lemma_check`] used by the scans.
pub fn lemma_check_mask(n: usize, s_mask: u64) -> bool {
    let t = s_mask | 1;
    s_mask != 0 && covers(n, t) && doubles_unique(n, s_mask, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Every connection set is tested.
    Exhaustive,
    /// Backtracking with early rejection on both conditions.
    Pruned,
}

/// One multiplier class of deeply critical circulant cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantClass {
    pub n: usize,
    pub set: Vec<usize>,
    pub class_size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirculantScanReport {
    pub n: usize,
    pub mode: ScanMode,
    /// Complete connection sets tested (leaves of the search).
    pub candidates: u64,
    /// Every connection set found, sorted.
    pub raw: Vec<Vec<usize>>,
    /// One representative per multiplier class, sorted.
    pub classes: Vec<CirculantClass>,
    pub elapsed_secs: f64,
}

/// Residue pairs `{k, n - k}` with `k != n - k`, by their smaller member.
fn pair_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        (n - 1) / 2
    }
}

/// Top-level branch count: the first `depth` pairs are fixed per branch.
fn branch_depth(n: usize) -> usize {
    pair_count(n).min(4)
}

fn prefix_mask(n: usize, branch: usize, depth: usize) -> u64 {
    let mut b = branch;
    let mut mask = 0u64;
    for k in 1..=depth {
        match b % 3 {
            1 => mask |= 1 << k,
            2 => mask |= 1 << (n - k),
            _ => {}
        }
        b /= 3;
    }
    mask
}

struct BranchResult {
    candidates: u64,
    found: Vec<u64>,
}

fn run_branch(n: usize, mode: ScanMode, branch: usize) -> BranchResult {
    let depth = branch_depth(n);
    let pairs = pair_count(n);
    let start = prefix_mask(n, branch, depth);
    let mut out = BranchResult {
        candidates: 0,
        found: Vec::new(),
    };
    match mode {
        ScanMode::Exhaustive => exhaustive(n, depth + 1, pairs, start, &mut out),
        ScanMode::Pruned => {
            let undecided = (depth + 1..=pairs).fold(0u64, |m, k| m | 1 << k | 1 << (n - k));
            if feasible(n, start, undecided) {
                pruned(n, depth + 1, pairs, start, undecided, &mut out);
            }
        }
    }
    out
}

fn exhaustive(n: usize, k: usize, pairs: usize, mask: u64, out: &mut BranchResult) {
    if k > pairs {
        out.candidates += 1;
        if lemma_check_mask(n, mask) {
            out.found.push(mask);
        }
        return;
    }
    exhaustive(n, k + 1, pairs, mask, out);
    exhaustive(n, k + 1, pairs, mask | 1 << k, out);
    exhaustive(n, k + 1, pairs, mask | 1 << (n - k), out);
}

/// Can some completion of `decided` using residues from `undecided`
/// still satisfy both conditions? Representations only grow as elements
/// are added, so (b) failing now is final, and (a) failing even with
/// every undecided residue present is final.
#[inline]
fn feasible(n: usize, decided: u64, undecided: u64) -> bool {
    doubles_unique(n, decided, decided | 1) && covers(n, decided | undecided | 1)
}

fn pruned(n: usize, k: usize, pairs: usize, mask: u64, undecided: u64, out: &mut BranchResult) {
    if k > pairs {
        out.candidates += 1;
        if lemma_check_mask(n, mask) {
            out.found.push(mask);
        }
        return;
    }
    let rest = undecided & !(1 << k | 1 << (n - k));
    for choice in [mask, mask | 1 << k, mask | 1 << (n - k)] {
        if feasible(n, choice, rest) {
            pruned(n, k + 1, pairs, choice, rest, out);
        }
    }
}

/// Persistent progress of a scan: completed top-level branches and what
/// they found.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct ScanCheckpoint {
    pub n: usize,
    pub mode: Option<ScanMode>,
    pub completed: BTreeSet<usize>,
    pub candidates: u64,
    pub found: Vec<Vec<usize>>,
}

impl ScanCheckpoint {
    pub fn load(path: &Path) -> std::io::Result<Option<Self>> {
        match std::fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let tmp = path.with_extension("ckpt.tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(tmp, path)
    }
}

/// Every deeply critical circulant clique of order `n`.
pub fn scan_circulants(n: usize, mode: ScanMode) -> CirculantScanReport {
    scan_circulants_resumable(n, mode, None).expect("no checkpoint I/O")
}

/// As [`scan_circulants`], recording each finished top-level branch in
/// `checkpoint` and skipping branches already recorded there.
pub fn scan_circulants_resumable(
    n: usize,
    mode: ScanMode,
    checkpoint: Option<&Path>,
) -> std::io::Result<CirculantScanReport> {
    let started = Instant::now();
    let n = n.clamp(1, MAX_VERTICES);
    let mut state = match checkpoint {
        Some(p) => ScanCheckpoint::load(p)?
            .filter(|c| c.n == n && c.mode == Some(mode))
            .unwrap_or_default(),
        None => ScanCheckpoint::default(),
    };
    state.n = n;
    state.mode = Some(mode);
    let branches = 3usize.pow(branch_depth(n) as u32);
    let todo: Vec<usize> = (0..branches)
        .filter(|b| !state.completed.contains(b))
        .collect();
    let state = Mutex::new(state);
    todo.par_iter().try_for_each(|&b| -> std::io::Result<()> {
        let r = run_branch(n, mode, b);
        let mut st = state.lock().expect("checkpoint lock");
        st.candidates += r.candidates;
        st.found
            .extend(r.found.iter().map(|&m| CirculantSpec::from_mask(n, m).set));
        st.completed.insert(b);
        if let Some(p) = checkpoint {
            st.save(p)?;
        }
        Ok(())
    })?;
    let state = state.into_inner().expect("checkpoint lock");
    let mut raw = state.found;
    raw.sort();
    raw.dedup();
    Ok(CirculantScanReport {
        n,
        mode,
        candidates: state.candidates,
        classes: classify(n, &raw),
        raw,
        elapsed_secs: started.elapsed().as_secs_f64(),
    })
}

fn classify(n: usize, raw: &[Vec<usize>]) -> Vec<CirculantClass> {
    let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut classes = Vec::new();
    for set in raw {
        let spec = CirculantSpec {
            n,
            set: set.clone(),
        };
        let rep = spec.class_representative();
        if reps.insert(rep.set.clone()) {
            classes.push(CirculantClass {
                n,
                class_size: rep.multiplier_class().len(),
                set: rep.set,
            });
        }
    }
    classes.sort_by(|a, b| a.set.cmp(&b.set));
    classes
}

/// Per-order outcome of the even-order sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EvenOrderCheck {
    pub n: usize,
    pub found: usize,
    pub candidates: u64,
    /// Circulant cliques whose failure was traced to the antipodal pair,
    /// or `None` when the order is above the exhaustive limit.
    pub cliques_traced: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvenSweep {
    pub orders: Vec<EvenOrderCheck>,
    pub holds: bool,
}

/// Largest even order whose circulant cliques are all traced one by one.
pub const MECHANISM_LIMIT: usize = 24;

/// For a circulant clique of even order `n`, confirm that `0` and `n/2`
/// are non-adjacent, that a 2-dipath joins them, and that this forces
/// an ambiguous double.
fn antipodal_mechanism(spec: &CirculantSpec) -> bool {
    let n = spec.n;
    let half = n / 2;
    let g = build_circulant(spec);
    if g.adjacent(0, half) || !(g.has_two_dipath(0, half) || g.has_two_dipath(half, 0)) {
        return false;
    }
    let ambiguous = lemma_verdict(spec).ambiguous;
    let set = &spec.set;
    set.iter().any(|&x| {
        set.iter()
            .any(|&y| (x + y) % n == half && ambiguous.contains(&x) && ambiguous.contains(&y))
    })
}

/// No even order up to `n_max` has a deeply critical circulant clique.
pub fn verify_even_impossibility(n_max: usize) -> EvenSweep {
    let mut orders = Vec::new();
    for n in (2..=n_max.min(MAX_VERTICES)).step_by(2) {
        let report = scan_circulants(n, ScanMode::Pruned);
        let traced = (n <= MECHANISM_LIMIT).then(|| trace_even_cliques(n));
        orders.push(EvenOrderCheck {
            n,
            found: report.raw.len(),
            candidates: report.candidates,
            cliques_traced: traced.map(|t| t.unwrap_or(u64::MAX)),
        });
    }
    let holds = orders
        .iter()
        .all(|o| o.found == 0 && o.cliques_traced != Some(u64::MAX));
    EvenSweep { orders, holds }
}

/// Enumerate every circulant clique of even order `n` and check the
/// antipodal mechanism on each; `None` if some clique escapes it.
fn trace_even_cliques(n: usize) -> Option<u64> {
    let pairs = pair_count(n);
    let total = 3usize.pow(pairs as u32);
    let mut traced = 0;
    for code in 0..total {
        let mut c = code;
        let mut mask = 0u64;
        for k in 1..=pairs {
            match c % 3 {
                1 => mask |= 1 << k,
                2 => mask |= 1 << (n - k),
                _ => {}
            }
            c /= 3;
        }
        if covers(n, mask | 1) {
            if !antipodal_mechanism(&CirculantSpec::from_mask(n, mask)) {
                return None;
            }
            traced += 1;
        }
    }
    Some(traced)
}
