//! Independent oracles over plain arc lists. Nothing here calls into the
//! library's solvers.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub type Arcs = Vec<(usize, usize)>;

pub fn dcoc_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dcoc"))
}

pub fn run(args: &[&str], out: &Path) -> Output {
    dcoc_bin()
        .args(args)
        .env("DCOC_OUT", out)
        .output()
        .expect("binary runs")
}

pub fn write_ograph(dir: &Path, name: &str, n: usize, arcs: &[(usize, usize)]) -> PathBuf {
    let mut text = format!("{n} {}\n", arcs.len());
    for (u, v) in arcs {
        text.push_str(&format!("{u} {v}\n"));
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn read_ograph(path: &Path) -> (usize, Arcs) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    let arcs: Arcs = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(arcs.len(), header[1]);
    (header[0], arcs)
}

pub fn cycle(n: usize) -> Arcs {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Colouring is oriented: no arc inside a class, and all arcs between two
/// classes point the same way.
pub fn is_oriented_colouring(arcs: &[(usize, usize)], colour: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in arcs {
        let (a, b) = (colour[u], colour[v]);
        if a == b || seen.contains(&(b, a)) {
            return false;
        }
        seen.insert((a, b));
    }
    true
}

/// Least number of colours, by trying every set partition in growth order.
pub fn chi_brute(n: usize, arcs: &[(usize, usize)]) -> usize {
    fn go(
        v: usize,
        n: usize,
        used: usize,
        colour: &mut Vec<usize>,
        arcs: &[(usize, usize)],
        best: &mut usize,
    ) {
        if used >= *best {
            return;
        }
        if v == n {
            if is_oriented_colouring(arcs, colour) {
                *best = used;
            }
            return;
        }
        for c in 0..=used {
            colour[v] = c;
            go(v + 1, n, used.max(c + 1), colour, arcs, best);
        }
    }
    let mut best = n;
    let mut colour = vec![0; n];
    go(0, n, 0, &mut colour, arcs, &mut best);
    best
}

fn adjacency(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in arcs {
        adj[u][v] = true;
    }
    adj
}

/// Every two vertices are adjacent or joined by a directed path of length 2.
pub fn is_clique(n: usize, arcs: &[(usize, usize)]) -> bool {
    let a = adjacency(n, arcs);
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            a[u][v] || a[v][u] || (0..n).any(|w| (a[u][w] && a[w][v]) || (a[v][w] && a[w][u]))
        })
    })
}

/// Whether a clique minus one arc admits n - 2 colours: the classes must
/// be singletons plus either one triple or two pairs.
fn clique_minus_arc_drops_two(n: usize, arcs: &[(usize, usize)]) -> bool {
    let try_classes = |groups: &[&[usize]]| {
        let mut colour: Vec<usize> = (0..n).collect();
        for g in groups {
            for &v in g.iter() {
                colour[v] = g[0];
            }
        }
        is_oriented_colouring(arcs, &colour)
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if try_classes(&[&[a, b, c]]) {
                    return true;
                }
            }
            for c in a + 1..n {
                for d in c + 1..n {
                    if c == b || d == b {
                        continue;
                    }
                    if try_classes(&[&[a, b], &[c, d]]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Absolute clique with at least one arc, every arc deletion dropping the
/// chromatic number from n to n - 2.
pub fn is_dcoc(n: usize, arcs: &[(usize, usize)]) -> bool {
    is_clique(n, arcs)
        && !arcs.is_empty()
        && (0..arcs.len()).all(|i| {
            let mut rest = arcs.to_vec();
            rest.remove(i);
            clique_minus_arc_drops_two(n, &rest)
        })
}

pub fn circulant_arcs(n: usize, set: &[usize]) -> Arcs {
    let mut arcs = Vec::new();
    for v in 0..n {
        for &s in set {
            arcs.push((v, (v + s) % n));
        }
    }
    arcs
}

/// Adjacency-matrix form under `perm`, compared lexicographically.
fn relabelled(n: usize, arcs: &[(usize, usize)], perm: &[usize]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(u, v) in arcs {
        m[perm[u]][perm[v]] = true;
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Number of isomorphism classes of oriented graphs on n labelled
/// vertices, by minimising over all relabellings.
pub fn class_count(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut c = code;
        let mut arcs = Vec::new();
        for &(u, v) in &pairs {
            match c % 3 {
                1 => arcs.push((u, v)),
                2 => arcs.push((v, u)),
                _ => {}
            }
            c /= 3;
        }
        let canon = perms.iter().map(|p| relabelled(n, &arcs, p)).min().unwrap();
        classes.insert(canon);
    }
    classes.len()
}

/// Backtracking isomorphism test.
pub fn isomorphic(n: usize, a: &[(usize, usize)], m: usize, b: &[(usize, usize)]) -> bool {
    if n != m || a.len() != b.len() {
        return false;
    }
    let (ma, mb) = (adjacency(n, a), adjacency(n, b));
    let deg = |adj: &Vec<Vec<bool>>, v: usize| {
        let out = adj[v].iter().filter(|&&x| x).count();
        let inn = (0..n).filter(|&u| adj[u][v]).count();
        (out, inn)
    };
    fn go(
        v: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ma: &Vec<Vec<bool>>,
        mb: &Vec<Vec<bool>>,
        ok_pair: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || !ok_pair(v, w) {
                continue;
            }
            if (0..v).all(|u| ma[u][v] == mb[map[u]][w] && ma[v][u] == mb[w][map[u]]) {
                map[v] = w;
                used[w] = true;
                if go(v + 1, n, map, used, ma, mb, ok_pair) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    let ok_pair = |v: usize, w: usize| deg(&ma, v) == deg(&mb, w);
    go(
        0,
        n,
        &mut vec![0; n],
        &mut vec![false; n],
        &ma,
        &mb,
        &ok_pair,
    )
}

/// Parts (X1, X2, X3), indices mod 3: no arc from X(i+1) back to X(i);
/// each u in X(i) is the sole in-neighbour in X(i) of some v in X(i+1);
/// each v in X(i+1) is the sole out-neighbour in X(i+1) of some u in X(i).
pub fn is_extending(n: usize, arcs: &[(usize, usize)], parts: &[Vec<usize>; 3]) -> bool {
    let mut part = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            if v >= n || part[v] != usize::MAX {
                return false;
            }
            part[v] = i;
        }
    }
    if part.contains(&usize::MAX) {
        return false;
    }
    let a = adjacency(n, arcs);
    (0..3).all(|i| {
        let next = (i + 1) % 3;
        let no_back = parts[next]
            .iter()
            .all(|&u| parts[i].iter().all(|&v| !a[u][v]));
        let cond_ii = parts[i].iter().all(|&u| {
            parts[next].iter().any(|&v| {
                let ins: Vec<usize> = parts[i].iter().copied().filter(|&w| a[w][v]).collect();
                ins == [u]
            })
        });
        let cond_iii = parts[next].iter().all(|&v| {
            parts[i].iter().any(|&u| {
                let outs: Vec<usize> = parts[next].iter().copied().filter(|&w| a[u][w]).collect();
                outs == [v]
            })
        });
        no_back && cond_ii && cond_iii
    })
}
