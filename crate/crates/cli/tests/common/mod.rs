//! Independent reference computations used to cross-check the engine.

#![allow(dead_code)]

use std::collections::HashMap;

use sforge::{AlgebraPresentation, Fp, Path, Quiver};

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// All paths of length `< level`, in a fixed order.
fn paths_below(q: &Quiver, level: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    let mut layer = out.clone();
    for _ in 1..level {
        let mut next = Vec::new();
        for p in &layer {
            let end = q.path_target(p);
            for a in q.arrows_from(end) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path {
                    source: p.source,
                    arrows,
                });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Sparse Gaussian elimination over `F_p`; returns the rank of the rows.
fn rank_mod_p(rows: Vec<HashMap<usize, u64>>, p: u64) -> usize {
    let mut pivots: HashMap<usize, HashMap<usize, u64>> = HashMap::new();
    for mut row in rows {
        loop {
            row.retain(|_, c| *c != 0);
            let Some(&lead) = row.keys().min() else { break };
            match pivots.get(&lead) {
                Some(piv) => {
                    let factor = row[&lead];
                    for (&col, &c) in piv {
                        let e = row.entry(col).or_insert(0);
                        *e = (*e + p - factor * c % p) % p;
                    }
                }
                None => {
                    let inv = pow_mod(row[&lead], p - 2, p);
                    for c in row.values_mut() {
                        *c = *c * inv % p;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `dim KQ / (I + R^level)` by spanning all products `u r v` truncated at `level`.
pub fn truncated_dim(pres: &AlgebraPresentation<Fp>, level: usize) -> usize {
    let q = &pres.quiver;
    let p = pres.field.prime();
    let all = paths_below(q, level);
    let index: HashMap<&Path, usize> = all.iter().enumerate().map(|(k, path)| (path, k)).collect();
    let ending_at = |v: usize| all.iter().filter(move |u| q.path_target(u) == v);
    let starting_at = |v: usize| all.iter().filter(move |w| w.source == v);
    let mut rows = Vec::new();
    for r in &pres.relations {
        let s = r.terms[0].path.source;
        let t = q.path_target(&r.terms[0].path);
        let shortest = r
            .terms
            .iter()
            .map(|term| term.path.arrows.len())
            .min()
            .unwrap();
        for u in ending_at(s) {
            for w in starting_at(t) {
                if u.arrows.len() + shortest + w.arrows.len() >= level {
                    continue;
                }
                let mut row = HashMap::new();
                for term in &r.terms {
                    let mut arrows = u.arrows.clone();
                    arrows.extend(&term.path.arrows);
                    arrows.extend(&w.arrows);
                    if arrows.len() >= level {
                        continue;
                    }
                    let col = index[&Path {
                        source: u.source,
                        arrows,
                    }];
                    let e = row.entry(col).or_insert(0);
                    *e = (*e + term.coeff) % p;
                }
                rows.push(row);
            }
        }
    }
    all.len() - rank_mod_p(rows, p)
}

/// Dimension of the completed algebra: the truncated dimension once it no
/// longer changes when the truncation level grows by one.
pub fn naive_dim(pres: &AlgebraPresentation<Fp>, max_level: usize) -> Option<usize> {
    let mut prev = truncated_dim(pres, 2);
    for level in 3..=max_level {
        let d = truncated_dim(pres, level);
        if d == prev {
            return Some(d);
        }
        prev = d;
    }
    None
}

/// Period of the simple `S_i` over the symmetric Nakayama algebra with `n`
/// vertices and Loewy length `ell`. Indecomposables are uniserial, given by
/// (top, length), and `Ω(top t, length k) = (t + k, ell - k)`.
pub fn nakayama_simple_period(n: usize, ell: usize, i: usize) -> usize {
    let start = (i, 1);
    let mut cur = start;
    for d in 1..=4 * n * ell {
        cur = ((cur.0 + cur.1) % n, ell - cur.1);
        if cur == start {
            return d;
        }
    }
    unreachable!("uniserial syzygies are periodic")
}
