//! Extending partitions and the 2-, 4- and 6-extensions built from them.
//!
//! An extending partition `(X1, X2, X3)` of an oriented graph satisfies,
//! with indices taken mod 3:
//!
//! 1. no arc goes from `X(i+1)` back to `Xi`;
//! 2. every `u` in `Xi` is the unique in-neighbour within `Xi` of some
//!    `v` in `X(i+1)`;
//! 3. every `v` in `X(i+1)` is the unique out-neighbour within `X(i+1)`
//!    of some `u` in `Xi`.
//!
//! The 6-extension adds hubs `x1-, x1+, x2-, x2+, x3-, x3+` with
//! `xi- -> Xi -> xi+` and a hexagon of arcs between hubs. The 4- and
//! 2-extensions are the induced subgraphs dropping `{x1+, x2-}` and
//! `{x1-, x2+, x3-, x3+}` respectively.

use serde::Serialize;

use crate::colouring::deeply_critical_verdict;
use crate::error::{Error, Result};
use crate::graph::{bits, directed_cycle, full_mask, OrientedGraph, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendingPartition {
    parts: [Vec<usize>; 3],
}

impl ExtendingPartition {
    pub fn new(x1: Vec<usize>, x2: Vec<usize>, x3: Vec<usize>) -> Self {
        let mut parts = [x1, x2, x3];
        for p in parts.iter_mut() {
            p.sort_unstable();
        }
        ExtendingPartition { parts }
    }

    /// From a per-vertex part index in `0..3`.
    pub fn from_assignment(assignment: &[u8]) -> Self {
        let mut parts: [Vec<usize>; 3] = Default::default();
        for (v, &p) in assignment.iter().enumerate() {
            parts[p as usize].push(v);
        }
        ExtendingPartition { parts }
    }

    pub fn parts(&self) -> &[Vec<usize>; 3] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    fn masks(&self, n: usize) -> Result<[u64; 3]> {
        let mut masks = [0u64; 3];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                if v >= n {
                    return Err(Error::BadPartition(format!("vertex {v} out of range")));
                }
                if masks.iter().any(|m| m >> v & 1 == 1) {
                    return Err(Error::BadPartition(format!("vertex {v} in two parts")));
                }
                masks[i] |= 1 << v;
            }
        }
        let missing = full_mask(n) & !(masks[0] | masks[1] | masks[2]);
        if missing != 0 {
            return Err(Error::BadPartition(format!(
                "vertex {} in no part",
                missing.trailing_zeros()
            )));
        }
        Ok(masks)
    }
}

/// Which of the three conditions hold, with the first offender of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionDiagnosis {
    pub no_back_arcs: bool,
    pub unique_in_witness: bool,
    pub unique_out_witness: bool,
    pub violations: Vec<String>,
}

impl PartitionDiagnosis {
    pub fn holds(&self) -> bool {
        self.no_back_arcs && self.unique_in_witness && self.unique_out_witness
    }
}

pub fn diagnose_partition(g: &OrientedGraph, p: &ExtendingPartition) -> Result<PartitionDiagnosis> {
    let m = p.masks(g.order())?;
    let mut d = PartitionDiagnosis {
        no_back_arcs: true,
        unique_in_witness: true,
        unique_out_witness: true,
        violations: Vec::new(),
    };
    for i in 0..3 {
        let next = (i + 1) % 3;
        if let Some(u) = bits(m[next]).find(|&u| g.out_mask(u) & m[i] != 0) {
            let v = (g.out_mask(u) & m[i]).trailing_zeros();
            d.no_back_arcs = false;
            d.violations
                .push(format!("(i) arc {u}->{v} from X{} to X{}", next + 1, i + 1));
        }
        if let Some(u) = bits(m[i]).find(|&u| !bits(m[next]).any(|v| g.in_mask(v) & m[i] == 1 << u))
        {
            d.unique_in_witness = false;
            d.violations.push(format!(
                "(ii) no vertex of X{} has {u} as its only in-neighbour in X{}",
                next + 1,
                i + 1
            ));
        }
        if let Some(v) =
            bits(m[next]).find(|&v| !bits(m[i]).any(|u| g.out_mask(u) & m[next] == 1 << v))
        {
            d.unique_out_witness = false;
            d.violations.push(format!(
                "(iii) no vertex of X{} has {v} as its only out-neighbour in X{}",
                i + 1,
                next + 1
            ));
        }
    }
    Ok(d)
}

pub fn is_extending_partition(g: &OrientedGraph, p: &ExtendingPartition) -> Result<bool> {
    diagnose_partition(g, p).map(|d| d.holds())
}

/// Lexicographically least extending partition (as a part-index vector
/// over vertices `0..n`), if any.
pub fn find_extending_partition(g: &OrientedGraph) -> Option<ExtendingPartition> {
    let n = g.order();
    let mut assignment = vec![0u8; n];
    let mut masks = [0u64; 3];

    fn rec(g: &OrientedGraph, v: usize, assignment: &mut [u8], masks: &mut [u64; 3]) -> bool {
        if v == g.order() {
            let p = ExtendingPartition::from_assignment(assignment);
            return is_extending_partition(g, &p).unwrap_or(false);
        }
        for part in 0..3usize {
            let prev = (part + 2) % 3;
            let next = (part + 1) % 3;
            // v -> X(prev) or X(next) -> v would be a back arc
            if g.out_mask(v) & masks[prev] != 0 || g.in_mask(v) & masks[next] != 0 {
                continue;
            }
            assignment[v] = part as u8;
            masks[part] |= 1 << v;
            let found = rec(g, v + 1, assignment, masks);
            masks[part] &= !(1 << v);
            if found {
                return true;
            }
        }
        false
    }

    rec(g, 0, &mut assignment, &mut masks).then(|| ExtendingPartition::from_assignment(&assignment))
}

/// Hub vertex roles of the 6-extension in id order after the base graph.
pub const HUBS: [&str; 6] = ["x1-", "x1+", "x2-", "x2+", "x3-", "x3+"];

fn hub_minus(i: usize) -> usize {
    2 * i
}

fn hub_plus(i: usize) -> usize {
    2 * i + 1
}

/// Out-rows of the 6-extension, hubs at `n..n+6`.
fn six_extension_rows(g: &OrientedGraph, p: &ExtendingPartition) -> Result<Vec<u64>> {
    let d = diagnose_partition(g, p)?;
    if !d.holds() {
        return Err(Error::NotExtending(d.violations.join("; ")));
    }
    let n = g.order();
    if n + 6 > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "extension order",
            n: n + 6,
            limit: MAX_VERTICES,
        });
    }
    let hub = |h: usize| n + h;
    let mut rows = g.out_rows().to_vec();
    rows.resize(n + 6, 0);
    for i in 0..3 {
        let next = (i + 1) % 3;
        // x(i)- -> x(i+1)+ and x(i)+ -> x(i+1)-
        rows[hub(hub_minus(i))] |= 1 << hub(hub_plus(next));
        rows[hub(hub_plus(i))] |= 1 << hub(hub_minus(next));
        for &x in p.part(i) {
            rows[hub(hub_minus(i))] |= 1 << x;
            rows[x] |= 1 << hub(hub_plus(i));
        }
    }
    Ok(rows)
}

pub fn six_extension(
    g: &OrientedGraph,
    p: &ExtendingPartition,
) -> Result<(OrientedGraph, ExtendingPartition)> {
    let rows = six_extension_rows(g, p)?;
    let n = g.order();
    let ext = OrientedGraph::from_rows_unchecked(n + 6, rows);
    let parts: Vec<Vec<usize>> = (0..3)
        .map(|i| {
            let mut part = p.part(i).to_vec();
            part.extend([n + hub_minus(i), n + hub_plus(i)]);
            part
        })
        .collect();
    let [x1, x2, x3]: [Vec<usize>; 3] = parts.try_into().expect("three parts");
    Ok((ext, ExtendingPartition::new(x1, x2, x3)))
}

fn drop_hubs(
    g: &OrientedGraph,
    p: &ExtendingPartition,
    dropped: &[usize],
) -> Result<OrientedGraph> {
    let n = g.order();
    let rows = six_extension_rows(g, p)?;
    let full = OrientedGraph::from_rows_unchecked(n + 6, rows);
    let keep: Vec<usize> = (0..n + 6)
        .filter(|&v| v < n || !dropped.contains(&(v - n)))
        .collect();
    Ok(full.induced(&keep))
}

/// 6-extension without `x1+` and `x2-`; remaining hubs keep their order.
pub fn four_extension(g: &OrientedGraph, p: &ExtendingPartition) -> Result<OrientedGraph> {
    drop_hubs(g, p, &[hub_plus(0), hub_minus(1)])
}

/// 6-extension keeping only the hubs `x1+` and `x2-`.
pub fn two_extension(g: &OrientedGraph, p: &ExtendingPartition) -> Result<OrientedGraph> {
    drop_hubs(
        g,
        p,
        &[hub_minus(0), hub_plus(1), hub_minus(2), hub_plus(2)],
    )
}

/// `k`-extension for `k` in {0, 2, 4, 6}; 0 returns the graph itself.
pub fn extend(g: &OrientedGraph, p: &ExtendingPartition, k: usize) -> Result<OrientedGraph> {
    match k {
        0 => {
            if is_extending_partition(g, p)? {
                Ok(g.clone())
            } else {
                Err(Error::NotExtending("partition fails the conditions".into()))
            }
        }
        2 => two_extension(g, p),
        4 => four_extension(g, p),
        6 => six_extension(g, p).map(|(h, _)| h),
        _ => Err(Error::BadPartition(format!("no {k}-extension"))),
    }
}

/// Arcs of the nine-vertex deeply critical oriented clique used as the
/// seed of the odd-order construction.
pub const NINE_VERTEX_ARCS: [(usize, usize); 15] = [
    (5, 8),
    (8, 2),
    (2, 5),
    (2, 7),
    (6, 2),
    (8, 3),
    (4, 8),
    (0, 5),
    (5, 1),
    (7, 0),
    (1, 4),
    (3, 6),
    (0, 3),
    (4, 7),
    (6, 1),
];

/// The nine-vertex seed graph.
pub fn nine_vertex_dcoc() -> OrientedGraph {
    OrientedGraph::build(9, NINE_VERTEX_ARCS).expect("valid constant")
}

/// The seed graph's published extending partition.
pub fn nine_vertex_partition() -> ExtendingPartition {
    ExtendingPartition::new(vec![6, 2, 7], vec![1, 5, 0], vec![4, 8, 3])
}

/// The chain of extensions producing order `n`: number of 6-extensions
/// applied to the nine-vertex seed, then the size of the last step.
pub fn odd_schedule(n: usize) -> Result<(usize, usize)> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    if n < 9 {
        return Err(Error::NoSuchOrder(n));
    }
    Ok(((n - 9) / 6, (n - 9) % 6))
}

/// A deeply critical oriented clique of odd order `n`, verified before
/// it is returned.
pub fn gen_odd_dcoc(n: usize) -> Result<OrientedGraph> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder(n));
    }
    if matches!(n, 1 | 3 | 7) {
        return Err(Error::NoSuchOrder(n));
    }
    if n > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "order",
            n,
            limit: MAX_VERTICES,
        });
    }
    let g = if n == 5 {
        directed_cycle(5)
    } else {
        let (sixes, last) = odd_schedule(n)?;
        let mut g = nine_vertex_dcoc();
        let mut p = nine_vertex_partition();
        for _ in 0..sixes {
            (g, p) = six_extension(&g, &p)?;
        }
        extend(&g, &p, last)?
    };
    debug_assert_eq!(g.order(), n);
    if !g.is_absolute_clique() || !deeply_critical_verdict(&g) {
        return Err(Error::VerificationFailed(format!(
            "order-{n} construction is not a deeply critical oriented clique"
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use crate::colouring::is_deeply_critical;

    fn c3_singletons() -> ExtendingPartition {
        ExtendingPartition::new(vec![0], vec![1], vec![2])
    }

    #[test]
    fn seed_graph_and_partition() {
        let g = nine_vertex_dcoc();
        assert_eq!(g.arc_count(), 15);
        assert!(g.is_absolute_clique());
        assert!(is_extending_partition(&g, &nine_vertex_partition()).unwrap());
        assert!(deeply_critical_verdict(&g));
    }

    #[test]
    fn directed_triangle_partitions() {
        let c3 = directed_cycle(3);
        assert!(is_extending_partition(&c3, &c3_singletons()).unwrap());
        let swapped = ExtendingPartition::new(vec![0], vec![2], vec![1]);
        let d = diagnose_partition(&c3, &swapped).unwrap();
        assert!(!d.no_back_arcs);
        assert!(!d.holds());
        assert!(matches!(
            is_extending_partition(&c3, &ExtendingPartition::new(vec![0, 1], vec![1], vec![2])),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            is_extending_partition(&c3, &ExtendingPartition::new(vec![0], vec![1], vec![])),
            Err(Error::BadPartition(_))
        ));
    }

    /// Brute force over all 3^n assignments.
    fn all_partitions(g: &OrientedGraph) -> Vec<Vec<u8>> {
        let n = g.order();
        let mut found = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let mut assignment = vec![0u8; n];
            for slot in assignment.iter_mut().rev() {
                *slot = (c % 3) as u8;
                c /= 3;
            }
            if is_extending_partition(g, &ExtendingPartition::from_assignment(&assignment)).unwrap()
            {
                found.push(assignment);
            }
        }
        found
    }

    #[test]
    fn search_matches_brute_force() {
        for g in [
            directed_cycle(3),
            directed_cycle(5),
            directed_cycle(6),
            nine_vertex_dcoc(),
        ] {
            let brute = all_partitions(&g);
            let found = find_extending_partition(&g);
            match brute.first() {
                None => assert!(found.is_none()),
                Some(first) => {
                    assert_eq!(found, Some(ExtendingPartition::from_assignment(first)));
                }
            }
        }
        assert!(find_extending_partition(&OrientedGraph::empty(3).unwrap()).is_none());
    }

    #[test]
    fn six_extension_of_triangle_is_the_seed() {
        let (g, p) = six_extension(&directed_cycle(3), &c3_singletons()).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.arc_count(), 3 + 6 + 6);
        assert!(is_extending_partition(&g, &p).unwrap());
        assert_eq!(
            canonical_code(&g).unwrap(),
            canonical_code(&nine_vertex_dcoc()).unwrap()
        );
    }

    #[test]
    fn extensions_of_triangle() {
        let c3 = directed_cycle(3);
        let four = four_extension(&c3, &c3_singletons()).unwrap();
        assert_eq!(four.order(), 7);
        assert!(!is_deeply_critical(&four).unwrap().verdict);
        let two = two_extension(&c3, &c3_singletons()).unwrap();
        assert_eq!(two.order(), 5);
        // decided by the solver, not assumed
        let report = is_deeply_critical(&two).unwrap();
        assert_eq!(report.verdict, deeply_critical_verdict(&two));
    }

    #[test]
    fn not_extending_is_rejected() {
        let c3 = directed_cycle(3);
        let bad = ExtendingPartition::new(vec![0], vec![2], vec![1]);
        assert!(matches!(
            six_extension(&c3, &bad),
            Err(Error::NotExtending(_))
        ));
        assert!(matches!(
            two_extension(&c3, &bad),
            Err(Error::NotExtending(_))
        ));
    }

    #[test]
    fn seed_extensions_are_deeply_critical() {
        let g = nine_vertex_dcoc();
        let p = nine_vertex_partition();
        let (six, p6) = six_extension(&g, &p).unwrap();
        assert_eq!(six.order(), 15);
        assert!(is_extending_partition(&six, &p6).unwrap());
        for h in [
            two_extension(&g, &p).unwrap(),
            four_extension(&g, &p).unwrap(),
            six,
        ] {
            assert!(h.is_absolute_clique());
            assert!(deeply_critical_verdict(&h), "order {}", h.order());
        }
    }

    #[test]
    fn odd_orders() {
        assert_eq!(gen_odd_dcoc(5).unwrap(), directed_cycle(5));
        assert_eq!(gen_odd_dcoc(9).unwrap(), nine_vertex_dcoc());
        for n in [1, 3, 7] {
            assert_eq!(gen_odd_dcoc(n), Err(Error::NoSuchOrder(n)));
        }
        assert_eq!(gen_odd_dcoc(10), Err(Error::EvenOrder(10)));
        assert_eq!(odd_schedule(21).unwrap(), (2, 0));
        let g = gen_odd_dcoc(21).unwrap();
        assert_eq!(g.order(), 21);
        // construction is deterministic
        assert_eq!(gen_odd_dcoc(21).unwrap(), g);
    }
}
