//! Oracles shared by the integration tests. Nothing here calls the code
//! path it is used to check.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashSet};

use chainprofile::certificate::{CompressedPoset, Vertex};
use chainprofile::{ChainProfile, Poset, PosetCatalog};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every isomorphism class on 1..=max elements, from the catalog.
pub fn corpus(catalog: &mut PosetCatalog, max: usize) -> Vec<Poset> {
    (1..=max).flat_map(|n| catalog.level(n).to_vec()).collect()
}

/// Strict order as an `n x n` boolean matrix (row below column).
pub fn order_matrix(p: &Poset) -> Vec<Vec<bool>> {
    let n = p.len();
    let mut below = vec![vec![false; n]; n];
    for x in 0..n {
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for &w in p.upper_covers(v) {
                if !below[x][w] {
                    below[x][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    below
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Least relation bit-string over all relabelings: an isomorphism
/// invariant computed by brute force.
pub fn brute_key(rel: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<bool> {
    let n = rel.len();
    perms
        .iter()
        .map(|perm| {
            let mut bits = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    bits.push(rel[perm[a]][perm[b]]);
                }
            }
            bits
        })
        .min()
        .unwrap_or_default()
}

/// Isomorphism classes of posets on `n` labeled elements, found by listing
/// every strict order compatible with the natural labeling (every poset has
/// one) and grouping by [`brute_key`]. Returns one representative per class
/// together with its key.
pub fn brute_force_classes(n: usize) -> BTreeMap<Vec<bool>, Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut classes = BTreeMap::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            rel[i][j] = mask >> k & 1 == 1;
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || rel[a][c])));
        if !transitive {
            continue;
        }
        let key = brute_key(&rel, &perms);
        classes.entry(key).or_insert_with(|| {
            let chosen: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(i, j)| rel[i][j]).collect();
            Poset::from_relation(n, &chosen).unwrap()
        });
    }
    classes
}

pub fn brute_key_of(p: &Poset) -> Vec<bool> {
    brute_key(&order_matrix(p), &permutations(p.len()))
}

/// Every maximal chain, by recursion over upper covers.
pub fn maximal_chains(p: &Poset) -> Vec<Vec<usize>> {
    fn walk(p: &Poset, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let top = *path.last().unwrap();
        if p.upper_covers(top).is_empty() {
            out.push(path.clone());
            return;
        }
        for &w in p.upper_covers(top) {
            path.push(w);
            walk(p, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in (0..p.len()).filter(|&v| p.lower_covers(v).is_empty()) {
        walk(p, &mut vec![s], &mut out);
    }
    out
}

pub fn profile_by_recursion(p: &Poset) -> ChainProfile {
    ChainProfile::from_values(maximal_chains(p).iter().map(|c| c.len() as u64)).unwrap()
}

/// Random valid poset on up to `max_len` elements, with shuffled labels.
pub fn random_poset<R: Rng>(rng: &mut R, max_len: usize) -> Poset {
    let n = rng.gen_range(1..=max_len);
    let density: f64 = rng.gen_range(0.05..0.7);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((labels[i], labels[j]));
            }
        }
    }
    Poset::from_relation(n, &pairs).unwrap()
}

/// Rebuilds the full poset a certificate describes, reinserting the dropped
/// chain elements. `None` if the expansion is not a valid cover graph or the
/// certificate references vertices that do not exist.
pub fn expand(cert: &CompressedPoset) -> Option<Poset> {
    let m = usize::try_from(cert.m).ok()?;
    if m == 0 || m > 10_000 {
        return None;
    }
    let retained: HashSet<u64> = cert.mprime_positions.iter().copied().collect();
    let index = |v: Vertex| match v {
        Vertex::M(p) if p >= 1 && p <= cert.m && retained.contains(&p) => Some(p as usize - 1),
        Vertex::X(i) if i < cert.x_count => Some(m + i),
        _ => None,
    };
    let mut edges: Vec<(usize, usize)> = (1..m).map(|p| (p - 1, p)).collect();
    for &(u, v) in &cert.light_edges {
        let (a, b) = (index(u)?, index(v)?);
        // chain edges are already present; any other chain-to-chain edge
        // is redundant and makes the expansion invalid
        if !matches!((u, v), (Vertex::M(p), Vertex::M(q)) if q == p + 1) {
            edges.push((a, b));
        }
    }
    Poset::from_cover_edges(m + cert.x_count, edges).ok()
}

/// All antichains of `p` by checking every subset.
pub fn antichains_by_subsets(p: &Poset) -> Vec<Vec<usize>> {
    let below = order_matrix(p);
    let n = p.len();
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|set| set.iter().all(|&a| set.iter().all(|&b| !below[a][b])))
        .collect()
}

/// Next level grown the other way round from the catalog: a new minimal
/// element placed under an antichain.
pub fn grow_by_minimal(parents: &[Poset]) -> Vec<Poset> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for parent in parents {
        let n = parent.len();
        for uppers in antichains_by_subsets(parent) {
            let mut edges: Vec<(usize, usize)> = parent.cover_edges().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
            edges.extend(uppers.iter().map(|&u| (0, u + 1)));
            let child = Poset::from_cover_edges(n + 1, edges).unwrap();
            if seen.insert(child.canonical_form()) {
                out.push(child);
            }
        }
    }
    out
}

/// Every isomorphism class on 1..=7 elements without using the catalog:
/// brute force through six, then one minimal-element extension.
pub fn flat_classes() -> Vec<Vec<Poset>> {
    let mut levels: Vec<Vec<Poset>> = (1..=6)
        .map(|n| brute_force_classes(n).into_values().collect())
        .collect();
    let seven = grow_by_minimal(&levels[5]);
    levels.push(seven);
    levels
}

/// Smallest realizing size of every profile met on at most seven elements,
/// by scanning every class.
pub fn flat_minimum_sizes(levels: &[Vec<Poset>]) -> BTreeMap<String, usize> {
    let mut best = BTreeMap::new();
    for level in levels {
        for p in level {
            best.entry(profile_by_recursion(p).to_string()).or_insert(p.len());
        }
    }
    best
}

/// Multisets with maximum `m`, `n` members, drawn from `1..=m`.
pub fn profiles_with(m: u64, n: usize) -> Vec<ChainProfile> {
    fn go(lo: u64, m: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<ChainProfile>) {
        if left == 0 {
            let mut values = cur.clone();
            values.push(m);
            out.push(ChainProfile::from_values(values).unwrap());
            return;
        }
        for v in lo..=m {
            cur.push(v);
            go(v, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, n - 1, &mut Vec::new(), &mut out);
    out
}

/// Verdict the expansion oracle gives on `(cert, claim, t)`.
pub fn oracle_accepts(cert: &CompressedPoset, claim: &ChainProfile, t: u64) -> bool {
    match expand(cert) {
        Some(p) => p.len() as u64 <= t && &profile_by_recursion(&p) == claim,
        None => false,
    }
}

/// Certificates near `cert`: each light edge dropped, each missing edge
/// added, each interior retained position moved by one.
pub fn mutations(cert: &CompressedPoset) -> Vec<CompressedPoset> {
    let mut out = Vec::new();
    for k in 0..cert.light_edges.len() {
        let mut c = cert.clone();
        c.light_edges.remove(k);
        out.push(c);
    }
    let vertices: Vec<Vertex> = cert
        .mprime_positions
        .iter()
        .map(|&p| Vertex::M(p))
        .chain((0..cert.x_count).map(Vertex::X))
        .collect();
    for &u in &vertices {
        for &v in &vertices {
            if u != v && !cert.light_edges.contains(&(u, v)) {
                let mut c = cert.clone();
                c.light_edges.push((u, v));
                out.push(c);
            }
        }
    }
    let last = cert.mprime_positions.len().saturating_sub(1);
    for k in 1..last {
        for up in [false, true] {
            let mut c = cert.clone();
            let old = c.mprime_positions[k];
            let new = if up { old + 1 } else { old - 1 };
            c.mprime_positions[k] = new;
            for e in &mut c.light_edges {
                for end in [&mut e.0, &mut e.1] {
                    if *end == Vertex::M(old) {
                        *end = Vertex::M(new);
                    }
                }
            }
            out.push(c);
        }
    }
    out
}

/// Claims that differ from `claim` by one member.
pub fn altered_claims(claim: &ChainProfile) -> Vec<ChainProfile> {
    let values = claim.to_sorted_vec(1 << 12).expect("small claim");
    let mut out = Vec::new();
    for k in 0..values.len() {
        let mut bumped = values.clone();
        bumped[k] += 1;
        out.push(ChainProfile::from_values(bumped).unwrap());
        if values.len() > 1 {
            let mut dropped = values.clone();
            dropped.remove(k);
            out.push(ChainProfile::from_values(dropped).unwrap());
        }
    }
    let mut extra = values.clone();
    extra.push(values[0]);
    out.push(ChainProfile::from_values(extra).unwrap());
    out.retain(|c| c != claim);
    out
}
