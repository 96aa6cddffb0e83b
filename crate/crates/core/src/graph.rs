//! Oriented graphs on at most 64 vertices.
//!
//! Every adjacency row is a single `u64`, so neighbourhood intersections
//! (2-dipath tests, the "sees" relation, colour-class checks) are one
//! machine instruction. Graphs are immutable values: every edit returns a
//! fresh graph.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_VERTICES: usize = 64;

/// Bit mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate the set bits of a mask in increasing order.
#[inline]
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub const fn new(tail: usize, head: usize) -> Self {
        Arc { tail, head }
    }
}

impl From<(usize, usize)> for Arc {
    fn from((tail, head): (usize, usize)) -> Self {
        Arc { tail, head }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.tail, self.head)
    }
}

/// A loopless directed graph without opposite arcs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl OrientedGraph {
    /// The graph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                n,
                limit: MAX_VERTICES,
            });
        }
        Ok(OrientedGraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
        })
    }

    /// Build a graph from an arc list. Duplicate arcs are rejected.
    pub fn build<I, A>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = A>,
        A: Into<Arc>,
    {
        let mut g = Self::empty(n)?;
        for a in arcs {
            let a = a.into();
            g.insert_checked(a)?;
        }
        Ok(g)
    }

    /// Build from out-neighbourhood rows, validating both invariants.
    pub fn from_out_rows(n: usize, rows: &[u64]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::OutOfRange {
                vertex: rows.len(),
                n,
            });
        }
        let mut g = Self::empty(n)?;
        for (u, &row) in rows.iter().enumerate() {
            if row & !full_mask(n) != 0 {
                let vertex = 63 - row.leading_zeros() as usize;
                return Err(Error::OutOfRange { vertex, n });
            }
            for v in bits(row) {
                g.insert_checked(Arc::new(u, v))?;
            }
        }
        Ok(g)
    }

    /// Internal constructor for rows already known to be valid.
    pub(crate) fn from_rows_unchecked(n: usize, out: Vec<u64>) -> Self {
        let mut inn = vec![0u64; n];
        for (u, &row) in out.iter().enumerate() {
            for v in bits(row) {
                inn[v] |= 1 << u;
            }
        }
        let g = OrientedGraph { n, out, inn };
        debug_assert!(g.check_invariants());
        g
    }

    fn insert_checked(&mut self, a: Arc) -> Result<()> {
        let n = self.n;
        for v in [a.tail, a.head] {
            if v >= n {
                return Err(Error::OutOfRange { vertex: v, n });
            }
        }
        if a.tail == a.head {
            return Err(Error::SelfLoop(a.tail));
        }
        if self.has_arc(a.head, a.tail) {
            return Err(Error::Antisymmetry(a.tail, a.head));
        }
        if self.has_arc(a.tail, a.head) {
            return Err(Error::DuplicateArc(a.tail, a.head));
        }
        self.out[a.tail] |= 1 << a.head;
        self.inn[a.head] |= 1 << a.tail;
        Ok(())
    }

    fn check_invariants(&self) -> bool {
        (0..self.n).all(|v| {
            self.out[v] & (1 << v) == 0
                && self.out[v] & self.inn[v] == 0
                && self.out[v] & !full_mask(self.n) == 0
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Out-neighbourhood of `v` as a bit mask.
    #[inline]
    pub fn out_mask(&self, v: usize) -> u64 {
        self.out[v]
    }

    /// In-neighbourhood of `v` as a bit mask.
    #[inline]
    pub fn in_mask(&self, v: usize) -> u64 {
        self.inn[v]
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> u64 {
        self.out[v] | self.inn[v]
    }

    pub fn out_rows(&self) -> &[u64] {
        &self.out
    }

    #[inline]
    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.out[tail] >> head & 1 == 1
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbours(u) >> v & 1 == 1
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.n).flat_map(move |u| bits(self.out[u]).map(move |v| Arc::new(u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Copy of the graph with one arc deleted.
    pub fn remove_arc(&self, a: Arc) -> Result<Self> {
        self.check_vertex(a.tail)?;
        self.check_vertex(a.head)?;
        if !self.has_arc(a.tail, a.head) {
            return Err(Error::MissingArc(a.tail, a.head));
        }
        let mut g = self.clone();
        g.out[a.tail] &= !(1 << a.head);
        g.inn[a.head] &= !(1 << a.tail);
        Ok(g)
    }

    /// Copy of the graph with one arc added.
    pub fn with_arc(&self, a: Arc) -> Result<Self> {
        let mut g = self.clone();
        g.insert_checked(a)?;
        Ok(g)
    }

    /// Is there a vertex `w` with `u -> w -> v`?
    #[inline]
    pub fn has_two_dipath(&self, u: usize, v: usize) -> bool {
        self.out[u] & self.inn[v] != 0
    }

    /// `u` and `v` are adjacent or joined by a 2-dipath in some direction.
    #[inline]
    pub fn sees(&self, u: usize, v: usize) -> bool {
        self.adjacent(u, v) || self.has_two_dipath(u, v) || self.has_two_dipath(v, u)
    }

    /// Vertices seen by `v` (excluding `v`).
    pub fn seen_by(&self, v: usize) -> u64 {
        let mut mask = self.neighbours(v);
        for w in bits(self.out[v]) {
            mask |= self.out[w];
        }
        for w in bits(self.inn[v]) {
            mask |= self.inn[w];
        }
        mask & !(1 << v)
    }

    /// Every pair of distinct vertices sees each other, which is
    /// equivalent to `chi_o(g) == g.order()`.
    pub fn is_absolute_clique(&self) -> bool {
        let all = full_mask(self.n);
        (0..self.n).all(|v| self.seen_by(v) | (1 << v) == all)
    }

    /// Unordered pairs `(u, v)`, `u < v`, that do not see each other.
    pub fn unseen_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..self.n {
            let unseen = !self.seen_by(u) & full_mask(self.n) & !full_mask(u + 1);
            pairs.extend(bits(unseen).map(|v| (u, v)));
        }
        pairs
    }

    /// Relabel so that vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut out = vec![0u64; self.n];
        for (u, &pu) in perm.iter().enumerate() {
            for v in bits(self.out[u]) {
                out[pu] |= 1 << perm[v];
            }
        }
        Self::from_rows_unchecked(self.n, out)
    }

    /// Subgraph induced by `keep`; vertex `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let out = keep
            .iter()
            .map(|&u| {
                bits(self.out[u])
                    .filter(|&v| pos[v] != usize::MAX)
                    .fold(0u64, |acc, v| acc | 1 << pos[v])
            })
            .collect();
        Self::from_rows_unchecked(keep.len(), out)
    }

    /// Delete one vertex; later vertices shift down by one.
    pub fn without_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Add a new vertex `n` with the given out- and in-neighbourhoods.
    pub fn with_vertex(&self, out_of_new: u64, into_new: u64) -> Result<Self> {
        let n = self.n;
        if n + 1 > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                n: n + 1,
                limit: MAX_VERTICES,
            });
        }
        if out_of_new & into_new != 0 {
            let v = out_of_new.trailing_zeros() as usize;
            return Err(Error::Antisymmetry(n, v));
        }
        let mut out = self.out.clone();
        for u in bits(into_new) {
            out[u] |= 1 << n;
        }
        out.push(out_of_new);
        Ok(Self::from_rows_unchecked(n + 1, out))
    }

    /// `n:u>v,u>v,...` single-line form.
    pub fn to_compact(&self) -> String {
        let arcs: Vec<String> = self.arcs().map(|a| a.to_string()).collect();
        format!("{}:{}", self.n, arcs.join(","))
    }

    pub fn from_compact(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, rest) = s
            .split_once(':')
            .ok_or_else(|| parse_err(1, "missing ':'"))?;
        let n = parse_num(n, 1)?;
        let mut g = Self::empty(n)?;
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (u, v) = tok
                .split_once('>')
                .ok_or_else(|| parse_err(1, &format!("bad arc {tok:?}")))?;
            g.insert_checked(Arc::new(parse_num(u, 1)?, parse_num(v, 1)?))?;
        }
        Ok(g)
    }

    /// "OGRAPH v1" text: `n m` then one sorted `u v` line per arc.
    pub fn to_ograph(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.arc_count());
        for a in self.arcs() {
            s.push_str(&format!("{} {}\n", a.tail, a.head));
        }
        s
    }

    pub fn parse_ograph(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(parse_err(lineno, "header must be `n m`"));
        }
        let n = parse_num(head[0], lineno)?;
        let m = parse_num(head[1], lineno)?;
        let mut g = Self::empty(n)?;
        let mut seen = 0;
        for (lineno, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(parse_err(lineno, "arc line must be `u v`"));
            }
            let a = Arc::new(parse_num(f[0], lineno)?, parse_num(f[1], lineno)?);
            g.insert_checked(a)?;
            seen += 1;
        }
        if seen != m {
            return Err(parse_err(
                lineno,
                &format!("header declares {m} arcs but {seen} were given"),
            ));
        }
        Ok(g)
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn parse_num(s: &str, line: usize) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, &format!("not a vertex number: {s:?}")))
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrientedGraph({})", self.to_compact())
    }
}

impl fmt::Display for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> OrientedGraph {
    assert!(n >= 3, "a directed cycle needs at least 3 vertices");
    OrientedGraph::build(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

/// Transitive tournament: `i -> j` for all `i < j`.
pub fn transitive_tournament(n: usize) -> OrientedGraph {
    let arcs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    OrientedGraph::build(n, arcs).expect("valid tournament")
}
