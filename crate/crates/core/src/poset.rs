//! Finite posets stored as their covering-relation DAG (Hasse diagram).
//!
//! A [`Poset`] is built from cover edges that must already be transitively
//! reduced and acyclic; the constructor validates and rejects, it never
//! repairs. [`Poset::from_relation`] is the explicit entry point for callers
//! that hold an arbitrary order relation and want it reduced.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("element index {index} out of range for poset with {len} elements")]
    Index { index: usize, len: usize },
    #[error("cover graph has a directed cycle through edge ({0}, {1})")]
    Cycle(usize, usize),
    #[error("cover edge ({0}, {1}) is redundant: another path connects its endpoints")]
    RedundantEdge(usize, usize),
    #[error("cover edge ({0}, {1}) is listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("element {0} appears more than once in the element set")]
    DuplicateElement(usize),
}

/// A finite poset given by its covering relation. Immutable after
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

/// Ordered list of distinct elements of some host poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(Vec<usize>);

impl ElementSet {
    pub fn new(host: &Poset, elements: Vec<usize>) -> Result<Self, PosetError> {
        let mut seen = vec![false; host.len()];
        for &e in &elements {
            host.check_index(e)?;
            if std::mem::replace(&mut seen[e], true) {
                return Err(PosetError::DuplicateElement(e));
            }
        }
        Ok(ElementSet(elements))
    }

    pub fn all(host: &Poset) -> Self {
        ElementSet((0..host.len()).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(elements: Vec<usize>) -> Self {
        ElementSet(elements)
    }
}

impl Poset {
    /// Validates `edges` as the covering relation of a poset on `len`
    /// elements. The edge list is stored exactly as given.
    pub fn from_cover_edges(len: usize, edges: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        let mut succ = vec![Vec::new(); len];
        let mut pred = vec![Vec::new(); len];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(i, j) in &edges {
            for index in [i, j] {
                if index >= len {
                    return Err(PosetError::Index { index, len });
                }
            }
            if i == j {
                return Err(PosetError::Cycle(i, j));
            }
            if !seen.insert((i, j)) {
                return Err(PosetError::DuplicateEdge(i, j));
            }
            succ[i].push(j);
            pred[j].push(i);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
        }
        let topo = topological_order(&succ, &pred)?;
        if let Some((i, j)) = first_redundant_edge(&succ) {
            return Err(PosetError::RedundantEdge(i, j));
        }
        Ok(Poset {
            edges,
            succ,
            pred,
            topo,
        })
    }

    /// Builds the poset generated by an arbitrary set of strict-order pairs:
    /// takes the transitive closure and keeps only its covering pairs.
    pub fn from_relation(len: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut succ = vec![Vec::new(); len];
        let mut pred = vec![Vec::new(); len];
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= len {
                    return Err(PosetError::Index { index, len });
                }
            }
            if i == j {
                return Err(PosetError::Cycle(i, j));
            }
            succ[i].push(j);
            pred[j].push(i);
        }
        let topo = topological_order(&succ, &pred)?;
        let below = strict_up_sets(len, &succ, &topo);
        let mut edges = Vec::new();
        for a in 0..len {
            let mut indirect = BitSet::new(len);
            for c in below[a].ones() {
                indirect.union_with(&below[c]);
            }
            edges.extend(below[a].ones().filter(|&b| !indirect.contains(b)).map(|b| (a, b)));
        }
        Poset::from_cover_edges(len, edges)
    }

    pub fn empty() -> Self {
        Poset::from_cover_edges(0, Vec::new()).expect("empty poset is valid")
    }

    pub fn chain(len: usize) -> Self {
        let edges = (1..len).map(|i| (i - 1, i)).collect();
        Poset::from_cover_edges(len, edges).expect("a chain is a valid cover graph")
    }

    pub fn antichain(len: usize) -> Self {
        Poset::from_cover_edges(len, Vec::new()).expect("an antichain is a valid cover graph")
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Cover edges in the order they were supplied.
    pub fn cover_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Elements covering `x`, ascending.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    /// Elements covered by `x`, ascending.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.pred[x]
    }

    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.succ[x].binary_search(&y).is_ok()
    }

    /// A topological order of the cover DAG (every element before its upper
    /// covers).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<(), PosetError> {
        if index < self.len() {
            Ok(())
        } else {
            Err(PosetError::Index { index, len: self.len() })
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> Result<bool, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x == y {
            return Ok(true);
        }
        let mut visited = vec![false; self.len()];
        let mut stack = vec![x];
        visited[x] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.succ[v] {
                if w == y {
                    return Ok(true);
                }
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok(false)
    }

    pub fn minimal_elements(&self) -> ElementSet {
        ElementSet((0..self.len()).filter(|&v| self.pred[v].is_empty()).collect())
    }

    pub fn maximal_elements(&self) -> ElementSet {
        ElementSet((0..self.len()).filter(|&v| self.succ[v].is_empty()).collect())
    }

    /// `up[x]` holds every `y` with `x < y`.
    pub(crate) fn strict_up_sets(&self) -> Vec<BitSet> {
        strict_up_sets(self.len(), &self.succ, &self.topo)
    }

    /// Restriction of the order to `subset`. Element `k` of the result is
    /// `subset[k]`; covers are recomputed from the restricted order.
    pub fn suborder(&self, subset: &ElementSet) -> Result<Poset, PosetError> {
        for e in subset.iter() {
            self.check_index(e)?;
        }
        let mut local = vec![usize::MAX; self.len()];
        for (k, e) in subset.iter().enumerate() {
            local[e] = k;
        }
        let mut pairs = Vec::new();
        let mut visited = vec![false; self.len()];
        for (k, e) in subset.iter().enumerate() {
            visited.iter_mut().for_each(|v| *v = false);
            let mut stack = vec![e];
            while let Some(v) = stack.pop() {
                for &w in &self.succ[v] {
                    if !visited[w] {
                        visited[w] = true;
                        if local[w] != usize::MAX {
                            pairs.push((k, local[w]));
                        }
                        stack.push(w);
                    }
                }
            }
        }
        Poset::from_relation(subset.len(), &pairs)
    }

    /// Ordinal sum: `self` placed entirely below `upper`. Elements of `upper`
    /// are shifted by `self.len()`.
    pub fn ordinal_sum(&self, upper: &Poset) -> Poset {
        let shift = self.len();
        let mut edges = self.edges.clone();
        edges.extend(upper.edges.iter().map(|&(i, j)| (i + shift, j + shift)));
        for a in self.maximal_elements().iter() {
            for b in upper.minimal_elements().iter() {
                edges.push((a, b + shift));
            }
        }
        Poset::from_cover_edges(shift + upper.len(), edges).expect("ordinal sum of valid posets is a valid cover graph")
    }

    /// True iff there are at least two maximal chains in the down-set of `x`
    /// and at least two in its up-set.
    pub fn is_splitting_element(&self, x: usize) -> Result<bool, PosetError> {
        self.check_index(x)?;
        // path counts saturate at 2
        let mut from_bottom = vec![0u8; self.len()];
        for &v in &self.topo {
            from_bottom[v] = if self.pred[v].is_empty() {
                1
            } else {
                self.pred[v].iter().map(|&u| from_bottom[u]).sum::<u8>().min(2)
            };
        }
        let mut to_top = vec![0u8; self.len()];
        for &v in self.topo.iter().rev() {
            to_top[v] = if self.succ[v].is_empty() {
                1
            } else {
                self.succ[v].iter().map(|&w| to_top[w]).sum::<u8>().min(2)
            };
        }
        Ok(from_bottom[x] >= 2 && to_top[x] >= 2)
    }

    /// Renames elements: new element `k` is old element `order[k]`. Edges are
    /// emitted sorted.
    pub fn relabel(&self, order: &[usize]) -> Poset {
        assert_eq!(order.len(), self.len(), "relabeling must be a permutation");
        let mut position = vec![usize::MAX; self.len()];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(i, j)| (position[i], position[j])).collect();
        edges.sort_unstable();
        Poset::from_cover_edges(self.len(), edges).expect("relabeling preserves validity")
    }

    /// Serializes in the `poset v1` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("poset v1\nelements {}\n", self.len());
        for &(i, j) in &self.edges {
            out.push_str(&format!("cover {i} {j}\n"));
        }
        out
    }

    /// Parses the `poset v1` text format. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Poset, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line, header) = lines.next().ok_or(ParseError::new(1, "missing `poset v1` header"))?;
        if header.split_whitespace().collect::<Vec<_>>() != ["poset", "v1"] {
            return Err(ParseError::new(line, format!("expected `poset v1`, found `{header}`")));
        }
        let (line, count) = lines
            .next()
            .ok_or(ParseError::new(line + 1, "missing `elements <n>` line"))?;
        let len = match count.split_whitespace().collect::<Vec<_>>()[..] {
            ["elements", n] => parse_index(n, line)?,
            _ => {
                return Err(ParseError::new(
                    line,
                    format!("expected `elements <n>`, found `{count}`"),
                ))
            }
        };

        let mut edges = Vec::new();
        let mut edge_lines = Vec::new();
        for (line, body) in lines {
            match body.split_whitespace().collect::<Vec<_>>()[..] {
                ["cover", i, j] => {
                    let (i, j) = (parse_index(i, line)?, parse_index(j, line)?);
                    edges.push((i, j));
                    edge_lines.push(line);
                }
                _ => {
                    return Err(ParseError::new(
                        line,
                        format!("expected `cover <i> <j>`, found `{body}`"),
                    ))
                }
            }
        }
        Poset::from_cover_edges(len, edges.clone()).map_err(|err| {
            let line = match err {
                PosetError::Index { index, .. } => edges.iter().position(|&(i, j)| i == index || j == index),
                PosetError::Cycle(i, j) | PosetError::RedundantEdge(i, j) => edges.iter().position(|&e| e == (i, j)),
                PosetError::DuplicateEdge(i, j) => edges.iter().rposition(|&e| e == (i, j)),
                PosetError::DuplicateElement(_) => None,
            }
            .map_or(1, |k| edge_lines[k]);
            ParseError::new(line, err.to_string())
        })
    }
}

/// Malformed text input, with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

fn parse_index(token: &str, line: usize) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a nonnegative integer")))
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn topological_order(succ: &[Vec<usize>], pred: &[Vec<usize>]) -> Result<Vec<usize>, PosetError> {
    let n = succ.len();
    let mut indegree: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &w in succ[v].iter().rev() {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover vertex has a leftover predecessor; walking backwards
    // must revisit a vertex, which closes a cycle.
    let start = (0..n).find(|&v| indegree[v] > 0).expect("leftover vertex");
    let mut on_walk = vec![usize::MAX; n];
    let mut walk = vec![start];
    on_walk[start] = 0;
    loop {
        let v = *walk.last().unwrap();
        let u = *pred[v]
            .iter()
            .find(|&&u| indegree[u] > 0)
            .expect("leftover vertex has a leftover predecessor");
        if on_walk[u] != usize::MAX {
            return Err(PosetError::Cycle(u, v));
        }
        on_walk[u] = walk.len();
        walk.push(u);
    }
}

fn first_redundant_edge(succ: &[Vec<usize>]) -> Option<(usize, usize)> {
    let n = succ.len();
    let mut stamp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for i in 0..n {
        if succ[i].len() < 2 {
            continue;
        }
        // mark everything reachable by a path of length >= 2 from i
        for &s in &succ[i] {
            for &w in &succ[s] {
                if stamp[w] != i {
                    stamp[w] = i;
                    stack.push(w);
                }
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if stamp[w] != i {
                    stamp[w] = i;
                    stack.push(w);
                }
            }
        }
        if let Some(&j) = succ[i].iter().find(|&&j| stamp[j] == i) {
            return Some((i, j));
        }
    }
    None
}

fn strict_up_sets(n: usize, succ: &[Vec<usize>], topo: &[usize]) -> Vec<BitSet> {
    let mut up = vec![BitSet::new(n); n];
    for &v in topo.iter().rev() {
        let mut set = BitSet::new(n);
        for &w in &succ[v] {
            set.insert(w);
            set.union_with(&up[w]);
        }
        up[v] = set;
    }
    up
}
