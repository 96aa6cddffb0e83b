//! Canonical forms by individualisation and refinement.
//!
//! The vertex set is first split into an ordered equitable partition
//! (cells refined by out- and in-degree counts into every other cell).
//! Vertices of the first non-singleton cell are then individualised one
//! at a time and the partition refined again, until every cell is a
//! singleton. Each leaf fixes a vertex order; the code is the smallest
//! relabelled adjacency matrix over all leaves. Automorphisms found along
//! the way (two leaves with the same matrix) prune sibling branches.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bits, OrientedGraph};

/// Largest order accepted by [`canonical_code`].
pub const CANON_LIMIT: usize = 16;

/// Byte string identifying an isomorphism class: the order followed by
/// the rows of the minimal relabelled adjacency matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn from_rows(n: usize, rows: &[u64]) -> Self {
        let width = n.div_ceil(8);
        let mut bytes = Vec::with_capacity(1 + width * n);
        bytes.push(n as u8);
        for &r in rows {
            bytes.extend_from_slice(&r.to_be_bytes()[8 - width..]);
        }
        CanonicalCode(bytes)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({self})")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Result of canonical labelling.
#[derive(Debug, Clone)]
pub struct Labelling {
    pub code: CanonicalCode,
    /// `position[v]` is the index of `v` in the canonical order.
    pub position: Vec<usize>,
}

impl Labelling {
    /// The vertex placed last in the canonical order.
    pub fn last_vertex(&self) -> usize {
        let n = self.position.len();
        self.position
            .iter()
            .position(|&p| p + 1 == n)
            .expect("non-empty")
    }
}

pub fn canonical_code(g: &OrientedGraph) -> Result<CanonicalCode> {
    canonical_labelling(g).map(|l| l.code)
}

pub fn canonical_labelling(g: &OrientedGraph) -> Result<Labelling> {
    let n = g.order();
    if n > CANON_LIMIT {
        return Err(Error::Capacity {
            what: "canonical form order",
            n,
            limit: CANON_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Labelling {
            code: CanonicalCode(vec![0]),
            position: Vec::new(),
        });
    }
    let mut cells = Vec::with_capacity(n);
    if n > 0 {
        cells.push(crate::graph::full_mask(n));
    }
    refine(g, &mut cells);
    let mut search = Search {
        g,
        n,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
    };
    search.descend(cells);
    let (rows, position) = search.best.expect("at least one leaf");
    Ok(Labelling {
        code: CanonicalCode::from_rows(n, &rows),
        position,
    })
}

/// Ordered equitable partition of the vertex set, as cell bit masks.
pub fn equitable_partition(g: &OrientedGraph) -> Vec<u64> {
    let mut cells = Vec::with_capacity(g.order());
    if g.order() > 0 {
        cells.push(crate::graph::full_mask(g.order()));
    }
    refine(g, &mut cells);
    cells
}

/// Refine `cells` in place until equitable. Sub-cells keep the position
/// of the cell they came from and are ordered by their count signature,
/// so the result depends only on the graph and the input order.
fn refine(g: &OrientedGraph, cells: &mut Vec<u64>) {
    let mut keyed: Vec<(u32, usize)> = Vec::with_capacity(g.order());
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut c = 0;
            while c < cells.len() {
                let cell = cells[c];
                if cell & (cell - 1) == 0 {
                    c += 1;
                    continue;
                }
                keyed.clear();
                for v in bits(cell) {
                    let key = (g.out_mask(v) & splitter).count_ones() << 8
                        | (g.in_mask(v) & splitter).count_ones();
                    keyed.push((key, v));
                }
                let first = keyed[0].0;
                if keyed.iter().all(|&(k, _)| k == first) {
                    c += 1;
                    continue;
                }
                keyed.sort_unstable();
                let mut pieces: Vec<u64> = Vec::new();
                let mut prev = None;
                for &(k, v) in keyed.iter() {
                    if prev != Some(k) {
                        pieces.push(0);
                        prev = Some(k);
                    }
                    *pieces.last_mut().unwrap() |= 1 << v;
                }
                let added = pieces.len();
                cells.splice(c..=c, pieces);
                c += added;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            break;
        }
    }
}

struct Search<'a> {
    g: &'a OrientedGraph,
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<u64>) {
        if cells.len() == self.n {
            self.leaf(&cells);
            return;
        }
        let target = cells
            .iter()
            .position(|c| c.count_ones() > 1)
            .expect("non-discrete partition has a big cell");
        let mut tried: Vec<usize> = Vec::new();
        for v in bits(cells[target]) {
            if self.equivalent_to_tried(v, &tried) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cells[target] & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);
            self.path.push(v);
            self.descend(child);
            self.path.pop();
        }
    }

    /// Is `v` in the orbit of an already explored sibling under the group
    /// generated by known automorphisms that fix the current path?
    fn equivalent_to_tried(&self, v: usize, tried: &[usize]) -> bool {
        if tried.is_empty() || self.generators.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gen in &self.generators {
            if self.path.iter().all(|&p| gen[p] == p) {
                any = true;
                for (x, &y) in gen.iter().enumerate() {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == root)
    }

    fn leaf(&mut self, cells: &[u64]) {
        let mut position = vec![0usize; self.n];
        for (i, c) in cells.iter().enumerate() {
            position[c.trailing_zeros() as usize] = i;
        }
        let mut rows = vec![0u64; self.n];
        for u in 0..self.n {
            let mut r = 0u64;
            for v in bits(self.g.out_mask(u)) {
                r |= 1 << position[v];
            }
            rows[position[u]] = r;
        }
        match &self.best {
            None => self.best = Some((rows, position)),
            Some((best_rows, best_pos)) => match rows.cmp(best_rows) {
                std::cmp::Ordering::Less => self.best = Some((rows, position)),
                std::cmp::Ordering::Equal => {
                    // position^-1 after best_pos is an automorphism
                    let mut inverse = vec![0usize; self.n];
                    for (v, &p) in best_pos.iter().enumerate() {
                        inverse[p] = v;
                    }
                    let gen: Vec<usize> = position.iter().map(|&p| inverse[p]).collect();
                    if gen.iter().enumerate().any(|(i, &j)| i != j) {
                        self.generators.push(gen);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}
