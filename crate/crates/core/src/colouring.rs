//! Exact oriented colouring.
//!
//! A colouring is searched for as a partition into classes together with a
//! table recording, for each ordered pair of classes, whether arcs already
//! run between them. A vertex may join a class only if the class stays
//! independent and every arc it brings agrees with the table.

use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bits, Arc, OrientedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    None,
    Forward,
    Backward,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::None => "0",
            Direction::Forward => "+",
            Direction::Backward => "-",
        }
    }
}

/// A partition into colour classes plus the induced class-pair directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringCertificate {
    classes: Vec<Vec<usize>>,
    directions: Vec<Vec<Direction>>,
}

/// Why a proposed colouring is not an oriented colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateFault {
    NotAPartition,
    EmptyClass(usize),
    ArcInsideClass(Arc),
    OppositeArcs { first: Arc, second: Arc },
    DirectionMismatch(usize, usize),
}

impl ColouringCertificate {
    /// Validate a proposed partition and derive its direction table.
    /// Classes are normalised: each sorted, ordered by smallest member.
    pub fn from_classes(
        g: &OrientedGraph,
        mut classes: Vec<Vec<usize>>,
    ) -> std::result::Result<Self, CertificateFault> {
        for c in classes.iter_mut() {
            c.sort_unstable();
        }
        if let Some(i) = classes.iter().position(Vec::is_empty) {
            return Err(CertificateFault::EmptyClass(i));
        }
        classes.sort_unstable_by_key(|c| c[0]);
        let class_of = class_index(g.order(), &classes).ok_or(CertificateFault::NotAPartition)?;
        let k = classes.len();
        let mut directions = vec![vec![Direction::None; k]; k];
        let mut witness: Vec<Vec<Option<Arc>>> = vec![vec![None; k]; k];
        for a in g.arcs() {
            let (c, d) = (class_of[a.tail], class_of[a.head]);
            if c == d {
                return Err(CertificateFault::ArcInsideClass(a));
            }
            if directions[c][d] == Direction::Backward {
                return Err(CertificateFault::OppositeArcs {
                    first: witness[d][c].expect("recorded"),
                    second: a,
                });
            }
            directions[c][d] = Direction::Forward;
            directions[d][c] = Direction::Backward;
            witness[c][d] = Some(a);
        }
        Ok(ColouringCertificate {
            classes,
            directions,
        })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn directions(&self) -> &[Vec<Direction>] {
        &self.directions
    }

    pub fn colours(&self) -> usize {
        self.classes.len()
    }

    /// Colour of each vertex.
    pub fn colour_map(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        class_index(n, &self.classes).expect("certificate holds a partition")
    }

    /// Re-check the certificate against `g` from scratch.
    pub fn validate(&self, g: &OrientedGraph) -> std::result::Result<(), CertificateFault> {
        let fresh = Self::from_classes(g, self.classes.clone())?;
        if fresh.classes != self.classes {
            return Err(CertificateFault::NotAPartition);
        }
        for (i, row) in self.directions.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                if fresh.directions[i][j] != *d {
                    return Err(CertificateFault::DirectionMismatch(i, j));
                }
            }
        }
        Ok(())
    }
}

fn class_index(n: usize, classes: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut class_of = vec![usize::MAX; n];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            if v >= n || class_of[v] != usize::MAX {
                return None;
            }
            class_of[v] = i;
        }
    }
    class_of
        .iter()
        .all(|&c| c != usize::MAX)
        .then_some(class_of)
}

impl Serialize for ColouringCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dirs: Vec<Vec<&str>> = self
            .directions
            .iter()
            .map(|r| r.iter().map(|d| d.symbol()).collect())
            .collect();
        let mut st = s.serialize_struct("ColouringCertificate", 3)?;
        st.serialize_field("colours", &self.classes.len())?;
        st.serialize_field("classes", &self.classes)?;
        st.serialize_field("directions", &dirs)?;
        st.end()
    }
}

/// Depth-first class assignment shared by the existence test and the
/// branch-and-bound minimiser.
struct Assign<'a> {
    g: &'a OrientedGraph,
    order: Vec<usize>,
    class_of: Vec<usize>,
    /// `to[c]` has bit `d` when some arc runs from class `c` to class `d`.
    to: Vec<u64>,
    /// `from[c]` has bit `d` when some arc runs from class `d` to class `c`.
    from: Vec<u64>,
    used: usize,
    /// Classes allowed; a complete assignment must use fewer than this
    /// many in minimise mode, at most this many otherwise.
    limit: usize,
    minimise: bool,
    best: Option<Vec<usize>>,
}

impl<'a> Assign<'a> {
    fn new(g: &'a OrientedGraph, limit: usize, minimise: bool) -> Self {
        let n = g.order();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.neighbours(v).count_ones()), v));
        let width = limit.min(n).max(1);
        Assign {
            g,
            order,
            class_of: vec![usize::MAX; n],
            to: vec![0; width],
            from: vec![0; width],
            used: 0,
            limit,
            minimise,
            best: None,
        }
    }

    /// Returns true to stop the search.
    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.best = Some(self.class_of.clone());
            if self.minimise {
                self.limit = self.used;
                return self.limit <= 1;
            }
            return true;
        }
        if self.used > self.cap() {
            return false;
        }
        let v = self.order[depth];
        let mut out_classes = 0u64;
        for u in bits(self.g.out_mask(v)) {
            if self.class_of[u] != usize::MAX {
                out_classes |= 1 << self.class_of[u];
            }
        }
        let mut in_classes = 0u64;
        for u in bits(self.g.in_mask(v)) {
            if self.class_of[u] != usize::MAX {
                in_classes |= 1 << self.class_of[u];
            }
        }
        if out_classes & in_classes != 0 {
            return false;
        }
        let mut c = 0;
        while c < (self.used + 1).min(self.cap()) {
            if (out_classes | in_classes) >> c & 1 == 1
                || out_classes & self.from[c] != 0
                || in_classes & self.to[c] != 0
            {
                c += 1;
                continue;
            }
            let opened = c == self.used;
            let saved_to = self.to.clone();
            let saved_from = self.from.clone();
            self.to[c] |= out_classes;
            self.from[c] |= in_classes;
            for d in bits(out_classes) {
                self.from[d] |= 1 << c;
            }
            for d in bits(in_classes) {
                self.to[d] |= 1 << c;
            }
            self.class_of[v] = c;
            if opened {
                self.used += 1;
            }
            let stop = self.dfs(depth + 1);
            if opened {
                self.used -= 1;
            }
            self.class_of[v] = usize::MAX;
            self.to = saved_to;
            self.from = saved_from;
            if stop {
                return true;
            }
            c += 1;
        }
        false
    }

    /// Number of classes a completion may use.
    fn cap(&self) -> usize {
        if self.minimise {
            self.limit.saturating_sub(1)
        } else {
            self.limit
        }
    }

    fn certificate(&self) -> Option<ColouringCertificate> {
        let class_of = self.best.as_ref()?;
        let k = class_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in class_of.iter().enumerate() {
            classes[c].push(v);
        }
        Some(
            ColouringCertificate::from_classes(self.g, classes)
                .expect("search only produces valid colourings"),
        )
    }
}

/// An oriented colouring with at most `k` colours, if one exists.
pub fn exists_colouring(g: &OrientedGraph, k: usize) -> Option<ColouringCertificate> {
    if g.order() == 0 {
        return Some(ColouringCertificate {
            classes: Vec::new(),
            directions: Vec::new(),
        });
    }
    if k == 0 {
        return None;
    }
    let mut search = Assign::new(g, k, false);
    search.dfs(0);
    search.certificate()
}

/// Oriented chromatic number with an optimal certificate.
pub fn chi_o(g: &OrientedGraph) -> Result<(usize, ColouringCertificate)> {
    let n = g.order();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.is_absolute_clique() {
        let cert = ColouringCertificate::from_classes(g, (0..n).map(|v| vec![v]).collect())
            .expect("singletons always colour");
        return Ok((n, cert));
    }
    let mut search = Assign::new(g, n + 1, true);
    search.dfs(0);
    let cert = search.certificate().expect("the identity colouring exists");
    Ok((cert.colours(), cert))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcDrop {
    pub arc: Arc,
    pub chi_without: usize,
    pub drop: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalityReport {
    pub chi: usize,
    pub clique: bool,
    pub per_arc: Vec<ArcDrop>,
    pub verdict: bool,
}

/// Chromatic number of `g - a` given `chi = chi_o(g)`, relying on the
/// fact that deleting an arc lowers it by at most two.
fn chi_without_arc(g: &OrientedGraph, chi: usize, clique: bool, a: Arc) -> usize {
    if clique {
        return clique_chi_without(g, a).expect("clique and arc checked by caller");
    }
    let h = g.remove_arc(a).expect("arc taken from the graph");
    if chi >= 2 && exists_colouring(&h, chi - 2).is_some() {
        chi - 2
    } else if chi >= 1 && exists_colouring(&h, chi - 1).is_some() {
        chi - 1
    } else {
        chi
    }
}

/// Full per-arc report. Arcs are checked in parallel and reported in
/// lexicographic order.
pub fn is_deeply_critical(g: &OrientedGraph) -> Result<CriticalityReport> {
    let (chi, _) = chi_o(g)?;
    let clique = chi == g.order();
    let arcs: Vec<Arc> = g.arcs().collect();
    let per_arc: Vec<ArcDrop> = arcs
        .par_iter()
        .map(|&arc| {
            let chi_without = chi_without_arc(g, chi, clique, arc);
            ArcDrop {
                arc,
                chi_without,
                drop: chi - chi_without,
            }
        })
        .collect();
    let verdict = !per_arc.is_empty() && per_arc.iter().all(|d| d.drop == 2);
    Ok(CriticalityReport {
        chi,
        clique,
        per_arc,
        verdict,
    })
}

/// Verdict only, stopping at the first arc whose removal does not drop
/// the chromatic number by two.
pub fn deeply_critical_verdict(g: &OrientedGraph) -> bool {
    if g.arc_count() == 0 || g.order() == 0 {
        return false;
    }
    if g.is_absolute_clique() {
        return g.arcs().all(|a| clique_drop_two(g, a).expect("clique"));
    }
    let (chi, _) = chi_o(g).expect("non-empty");
    if chi < 2 {
        return false;
    }
    g.arcs().all(|a| {
        let h = g.remove_arc(a).expect("arc taken from the graph");
        exists_colouring(&h, chi - 2).is_some()
    })
}

/// A way of colouring a clique minus one arc with fewer than `n` colours:
/// the non-singleton classes of the partition.
pub type Merge = Vec<Vec<usize>>;

fn check_clique_arc(g: &OrientedGraph, a: Arc) -> Result<OrientedGraph> {
    if !g.is_absolute_clique() {
        return Err(Error::NotAClique);
    }
    g.remove_arc(a)
}

fn merged_partition(n: usize, groups: &[&[usize]]) -> Vec<Vec<usize>> {
    let mut grouped = 0u64;
    let mut classes: Vec<Vec<usize>> = groups.iter().map(|g| g.to_vec()).collect();
    for g in groups {
        for &v in *g {
            grouped |= 1 << v;
        }
    }
    classes.extend((0..n).filter(|&v| grouped >> v & 1 == 0).map(|v| vec![v]));
    classes
}

/// Colour `g - a` with `n - 2` colours by merging two disjoint unseen
/// pairs or one mutually unseen triple; the witness merge if one exists.
pub fn clique_merge_two(g: &OrientedGraph, a: Arc) -> Result<Option<Merge>> {
    let h = check_clique_arc(g, a)?;
    let n = h.order();
    let pairs = h.unseen_pairs();
    let ok = |groups: &[&[usize]]| {
        ColouringCertificate::from_classes(&h, merged_partition(n, groups)).is_ok()
    };
    for (i, p) in pairs.iter().enumerate() {
        for q in &pairs[i + 1..] {
            let disjoint = p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1;
            if disjoint {
                let (x, y) = ([p.0, p.1], [q.0, q.1]);
                if ok(&[&x, &y]) {
                    return Ok(Some(vec![x.to_vec(), y.to_vec()]));
                }
            } else if p.0 == q.0 {
                // triple {p.0, p.1, q.1} needs the third pair unseen as well
                let (u, v) = (p.1.min(q.1), p.1.max(q.1));
                if pairs.binary_search(&(u, v)).is_ok() {
                    let t = [p.0, u, v];
                    if ok(&[&t]) {
                        return Ok(Some(vec![t.to_vec()]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Fast path for cliques: does removing `a` drop the chromatic number to
/// `n - 2`?
pub fn clique_drop_two(g: &OrientedGraph, a: Arc) -> Result<bool> {
    clique_merge_two(g, a).map(|m| m.is_some())
}

/// `chi_o(g - a)` for an absolute clique `g`, by the merge shapes alone.
pub fn clique_chi_without(g: &OrientedGraph, a: Arc) -> Result<usize> {
    let n = g.order();
    if clique_drop_two(g, a)? {
        return Ok(n - 2);
    }
    let h = g.remove_arc(a)?;
    let single = h.unseen_pairs().into_iter().any(|(u, v)| {
        ColouringCertificate::from_classes(&h, merged_partition(n, &[&[u, v]])).is_ok()
    });
    Ok(if single { n - 1 } else { n })
}

pub mod reference {
    //! Exhaustive set-partition colouring straight from the definition,
    //! independent of the class/direction solver. Exponential; for
    //! cross-checking small graphs only.
    use super::*;

    /// Both colouring conditions, checked over all pairs of arcs.
    pub fn is_oriented_colouring(g: &OrientedGraph, colour: &[usize]) -> bool {
        let arcs: Vec<Arc> = g.arcs().collect();
        for a in &arcs {
            if colour[a.tail] == colour[a.head] {
                return false;
            }
            for b in &arcs {
                if colour[a.tail] == colour[b.head] && colour[a.head] == colour[b.tail] {
                    return false;
                }
            }
        }
        true
    }

    /// Minimum colours over all restricted-growth strings.
    pub fn chi_brute(g: &OrientedGraph) -> usize {
        let n = g.order();
        let mut best = n;
        let mut colour = vec![0usize; n];
        fn rec(
            g: &OrientedGraph,
            i: usize,
            used: usize,
            colour: &mut Vec<usize>,
            best: &mut usize,
        ) {
            if used >= *best {
                return;
            }
            if i == colour.len() {
                if is_oriented_colouring(g, colour) {
                    *best = used;
                }
                return;
            }
            for c in 0..=used {
                colour[i] = c;
                rec(g, i + 1, used.max(c + 1), colour, best);
            }
        }
        if n > 0 {
            rec(g, 0, 0, &mut colour, &mut best);
        }
        best
    }
}
