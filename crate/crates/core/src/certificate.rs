//! Compressed poset certificates and their verifier.
//!
//! A poset with a distinguished maximum chain `M` and remainder `X` is
//! described by `m = |M|`, the retained chain positions `M'` (the two ends
//! of `M` and every chain element with a cover edge to or from `X`), `|X|`,
//! and the cover edges among `M' ∪ X`. Dropped chain elements are implied:
//! consecutive retained positions `i < j` with `j > i + 1` are joined by an
//! implicit edge of weight `j - i`.
//!
//! The verifier never expands the chain. It propagates polynomials in `x`
//! through the weighted graph (an edge of weight `w` multiplies by `x^w`),
//! so the coefficient of `x^l` collected at the maximal vertices counts the
//! maximal chains of cardinality `l + 1`. Work depends on the number of
//! vertices and edges, not on `m`.
//!
//! Heavy edges join only consecutive retained positions. Joining every
//! comparable pair of retained positions would give the chain `M` several
//! weighted paths and break the path/chain correspondence.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::poset::{ElementSet, ParseError, Poset};
use crate::profile::{longest_chain_len, ChainProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// Chain element at 1-based position.
    M(u64),
    /// Off-chain element, 0-based.
    X(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::M(pos) => write!(f, "M{pos}"),
            Vertex::X(idx) => write!(f, "X{idx}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedPoset {
    pub m: u64,
    pub mprime_positions: Vec<u64>,
    pub x_count: usize,
    pub light_edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressError {
    #[error("element set is not a maximal chain of maximum cardinality")]
    NotMaximumChain,
}

/// Why a certificate was rejected. Each structural failure has its own
/// variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("chain length m must be positive")]
    EmptyChain,
    #[error("retained positions must start at 1 and end at m")]
    PositionEndpoints,
    #[error("retained positions must be strictly increasing")]
    PositionOrder,
    #[error("edge endpoint {0} is not a certificate vertex")]
    UnknownVertex(Vertex),
    #[error("edge {0} -> {1} is a self-loop")]
    SelfLoop(Vertex, Vertex),
    #[error("edge {0} -> {1} is listed twice")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {0} -> {1} joins chain vertices that are not adjacent")]
    NonAdjacentChainEdge(Vertex, Vertex),
    #[error("adjacent retained positions {0} and {1} lack their chain edge")]
    MissingChainEdge(u64, u64),
    #[error("retained position {0} touches no off-chain element")]
    UnusedPosition(u64),
    #[error("certificate has {vertices} vertices, more than {bound} allowed for the claimed profile")]
    TooManyVertices { vertices: usize, bound: BigUint },
    #[error("encoded poset has {size} elements, more than the claimed bound {bound}")]
    TooLarge { size: BigUint, bound: u64 },
    #[error("weighted graph has a directed cycle")]
    Cycle,
    #[error("edge {0} -> {1} is not a cover: another path joins its endpoints")]
    NotCover(Vertex, Vertex),
    #[error("more maximal chains than the claimed profile has members")]
    TooManyChains,
    #[error("encoded profile {found} differs from the claim")]
    ProfileMismatch { found: String },
}

/// Sparse polynomial: path length (exponent) -> number of paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LengthPolynomial {
    terms: BTreeMap<BigUint, BigUint>,
}

impl LengthPolynomial {
    pub fn one() -> Self {
        LengthPolynomial {
            terms: BTreeMap::from([(BigUint::zero(), BigUint::from(1u32))]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &BigUint) -> BigUint {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> + '_ {
        self.terms.iter()
    }

    pub fn add_assign(&mut self, other: &LengthPolynomial) {
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert_with(BigUint::zero) += c;
        }
    }

    /// Product with the monomial `x^weight`.
    pub fn shifted(&self, weight: &BigUint) -> LengthPolynomial {
        LengthPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e + weight, c.clone())).collect(),
        }
    }

    pub fn max_coefficient(&self) -> BigUint {
        self.terms.values().max().cloned().unwrap_or_default()
    }

    /// Reads the coefficient of `x^l` as the multiplicity of cardinality
    /// `l + 1`. `None` if a cardinality does not fit in `u64`.
    pub fn to_profile(&self) -> Option<Result<ChainProfile, crate::ProfileError>> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            pairs.push(((e + 1u32).to_u64()?, c.clone()));
        }
        Some(ChainProfile::from_counts(pairs))
    }
}

/// `sum over members x of (floor(log2 x) + 1)`, the bit size of a profile.
pub fn size_of_profile(profile: &ChainProfile) -> BigUint {
    profile
        .iter()
        .map(|(v, mult)| mult * BigUint::from(u64::BITS - v.leading_zeros()))
        .sum()
}

/// Compresses `poset` around the maximum chain `chain` (bottom to top).
pub fn compress(poset: &Poset, chain: &ElementSet) -> Result<CompressedPoset, CompressError> {
    let elems = chain.as_slice();
    let valid = !elems.is_empty()
        && poset.lower_covers(elems[0]).is_empty()
        && poset.upper_covers(elems[elems.len() - 1]).is_empty()
        && elems.windows(2).all(|w| poset.covers(w[0], w[1]))
        && elems.len() == longest_chain_len(poset);
    if !valid {
        return Err(CompressError::NotMaximumChain);
    }

    let m = elems.len();
    let mut vertex: Vec<Vertex> = vec![Vertex::X(0); poset.len()];
    let mut on_chain = vec![false; poset.len()];
    for (k, &e) in elems.iter().enumerate() {
        vertex[e] = Vertex::M(k as u64 + 1);
        on_chain[e] = true;
    }
    let mut x_count = 0;
    for v in 0..poset.len() {
        if !on_chain[v] {
            vertex[v] = Vertex::X(x_count);
            x_count += 1;
        }
    }

    let mut retained = vec![false; m + 1];
    retained[1] = true;
    retained[m] = true;
    for &(a, b) in poset.cover_edges() {
        match (on_chain[a], on_chain[b]) {
            (true, false) => retained[pos(vertex[a])] = true,
            (false, true) => retained[pos(vertex[b])] = true,
            _ => {}
        }
    }
    let keep = |v: Vertex| match v {
        Vertex::M(p) => retained[p as usize],
        Vertex::X(_) => true,
    };
    let mut light_edges: Vec<(Vertex, Vertex)> = poset
        .cover_edges()
        .iter()
        .map(|&(a, b)| (vertex[a], vertex[b]))
        .filter(|&(u, v)| keep(u) && keep(v))
        .collect();
    light_edges.sort_unstable();

    Ok(CompressedPoset {
        m: m as u64,
        mprime_positions: (1..=m).filter(|&p| retained[p]).map(|p| p as u64).collect(),
        x_count,
        light_edges,
    })
}

fn pos(v: Vertex) -> usize {
    match v {
        Vertex::M(p) => p as usize,
        Vertex::X(_) => unreachable!("chain vertex expected"),
    }
}

/// Weighted graph over `M' ∪ X`: retained positions first, then `X`.
struct WeightedGraph {
    succ: Vec<Vec<(usize, BigUint)>>,
    light: Vec<(usize, usize)>,
}

impl CompressedPoset {
    pub fn vertex_count(&self) -> usize {
        self.mprime_positions.len() + self.x_count
    }

    /// Checks the structural invariants and builds the weighted graph.
    fn weighted_graph(&self) -> Result<WeightedGraph, Rejection> {
        let positions = &self.mprime_positions;
        if self.m == 0 {
            return Err(Rejection::EmptyChain);
        }
        if positions.first() != Some(&1) || positions.last() != Some(&self.m) {
            return Err(Rejection::PositionEndpoints);
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Rejection::PositionOrder);
        }

        let chain_index: BTreeMap<u64, usize> = positions.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let index = |v: Vertex| -> Result<usize, Rejection> {
            match v {
                Vertex::M(p) => chain_index.get(&p).copied().ok_or(Rejection::UnknownVertex(v)),
                Vertex::X(i) if i < self.x_count => Ok(positions.len() + i),
                Vertex::X(_) => Err(Rejection::UnknownVertex(v)),
            }
        };

        let vertices = self.vertex_count();
        let mut succ: Vec<Vec<(usize, BigUint)>> = vec![Vec::new(); vertices];
        let mut light = Vec::with_capacity(self.light_edges.len());
        let mut seen = HashSet::new();
        let mut chain_edges = HashSet::new();
        let mut touches_x = vec![false; positions.len()];
        for &(u, v) in &self.light_edges {
            let (a, b) = (index(u)?, index(v)?);
            if a == b {
                return Err(Rejection::SelfLoop(u, v));
            }
            if !seen.insert((a, b)) {
                return Err(Rejection::DuplicateEdge(u, v));
            }
            match (u, v) {
                (Vertex::M(p), Vertex::M(q)) => {
                    if q != p + 1 {
                        return Err(Rejection::NonAdjacentChainEdge(u, v));
                    }
                    chain_edges.insert(p);
                }
                (Vertex::M(_), _) => touches_x[a] = true,
                (_, Vertex::M(_)) => touches_x[b] = true,
                _ => {}
            }
            succ[a].push((b, BigUint::from(1u32)));
            light.push((a, b));
        }
        for (k, w) in positions.windows(2).enumerate() {
            let (i, j) = (w[0], w[1]);
            if j == i + 1 {
                if !chain_edges.contains(&i) {
                    return Err(Rejection::MissingChainEdge(i, j));
                }
            } else {
                succ[k].push((k + 1, BigUint::from(j - i)));
            }
        }
        let interior = positions.len().saturating_sub(1);
        if let Some(k) = (1..interior).find(|&k| !touches_x[k]) {
            return Err(Rejection::UnusedPosition(positions[k]));
        }
        Ok(WeightedGraph { succ, light })
    }
}

impl WeightedGraph {
    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.succ.len();
        let mut indegree = vec![0usize; n];
        for edges in &self.succ {
            for (w, _) in edges {
                indegree[*w] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for (w, _) in &self.succ[v] {
                indegree[*w] -= 1;
                if indegree[*w] == 0 {
                    ready.push(*w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// First light edge `(a, b)` that has a second path from `a` to `b`.
    fn first_non_cover(&self) -> Option<(usize, usize)> {
        let n = self.succ.len();
        let mut mark = vec![usize::MAX; n];
        for (e, &(a, b)) in self.light.iter().enumerate() {
            let mut stack: Vec<usize> = self.succ[a].iter().map(|(w, _)| *w).filter(|&w| w != b).collect();
            for &w in &stack {
                mark[w] = e;
            }
            while let Some(v) = stack.pop() {
                if v == b {
                    return Some((a, b));
                }
                for (w, _) in &self.succ[v] {
                    if mark[*w] != e {
                        mark[*w] = e;
                        stack.push(*w);
                    }
                }
            }
        }
        None
    }
}

/// Accepts iff the certificate is well formed, encodes a poset of at most
/// `t` elements, and that poset's maximal-chain profile is exactly `claim`.
pub fn verify(cert: &CompressedPoset, claim: &ChainProfile, t: u64) -> Result<(), Rejection> {
    let graph = cert.weighted_graph()?;
    let n = claim.total();

    // With t <= m + n - 1 a valid certificate has |X| <= n - 1 and at most
    // 2 + 2|X| retained positions, hence at most 3n - 1 vertices. Larger t
    // admits genuine posets beyond that size, so the limit applies only here.
    let vertices = cert.vertex_count();
    let bound = BigUint::from(3u32) * &n - 1u32;
    if BigUint::from(t) < BigUint::from(claim.max()) + &n && BigUint::from(vertices) > bound {
        return Err(Rejection::TooManyVertices { vertices, bound });
    }
    let size = BigUint::from(cert.m) + cert.x_count;
    if size > BigUint::from(t) {
        return Err(Rejection::TooLarge { size, bound: t });
    }
    if graph.topological_order().is_none() {
        return Err(Rejection::Cycle);
    }
    if let Some((a, b)) = graph.first_non_cover() {
        let name = |k: usize| cert_vertex(cert, k);
        return Err(Rejection::NotCover(name(a), name(b)));
    }

    let total = chain_polynomial(&graph, &n)?;
    match total.to_profile() {
        Some(Ok(found)) if &found == claim => Ok(()),
        Some(Ok(found)) => Err(Rejection::ProfileMismatch {
            found: found.to_string(),
        }),
        _ => Err(Rejection::ProfileMismatch {
            found: "(unrepresentable)".into(),
        }),
    }
}

fn cert_vertex(cert: &CompressedPoset, k: usize) -> Vertex {
    match cert.mprime_positions.get(k) {
        Some(&p) => Vertex::M(p),
        None => Vertex::X(k - cert.mprime_positions.len()),
    }
}

/// `sum over sources i, sinks j of (A^0 + A^1 + ... + A^(V-1))_(i, j)`,
/// evaluated as the row vector of sources pushed through `A` once per power.
/// Fails as soon as any coefficient exceeds `cap`.
fn chain_polynomial(graph: &WeightedGraph, cap: &BigUint) -> Result<LengthPolynomial, Rejection> {
    let n = graph.succ.len();
    let mut has_pred = vec![false; n];
    for edges in &graph.succ {
        for (w, _) in edges {
            has_pred[*w] = true;
        }
    }
    let sinks: Vec<usize> = (0..n).filter(|&v| graph.succ[v].is_empty()).collect();

    let mut row: Vec<LengthPolynomial> = (0..n)
        .map(|v| {
            if has_pred[v] {
                LengthPolynomial::default()
            } else {
                LengthPolynomial::one()
            }
        })
        .collect();
    let mut total = LengthPolynomial::default();
    for _power in 0..n {
        for &s in &sinks {
            total.add_assign(&row[s]);
        }
        if total.max_coefficient() > *cap {
            return Err(Rejection::TooManyChains);
        }
        let mut next = vec![LengthPolynomial::default(); n];
        for (v, poly) in row.iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            for (w, weight) in &graph.succ[v] {
                next[*w].add_assign(&poly.shifted(weight));
            }
        }
        if next.iter().any(|p| p.max_coefficient() > *cap) {
            return Err(Rejection::TooManyChains);
        }
        if next.iter().all(LengthPolynomial::is_zero) {
            break;
        }
        row = next;
    }
    Ok(total)
}

impl CompressedPoset {
    /// Serializes in the `cert v1` text format.
    pub fn to_text(&self) -> String {
        let positions: Vec<String> = self.mprime_positions.iter().map(u64::to_string).collect();
        let mut out = format!(
            "cert v1\nm {}\nmprime {}\nx {}\n",
            self.m,
            positions.join(" "),
            self.x_count
        );
        for (u, v) in &self.light_edges {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        out
    }

    /// Parses the `cert v1` text format. Only syntax is checked here;
    /// structural validity is the verifier's job.
    pub fn parse(text: &str) -> Result<CompressedPoset, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut expect = |what: &str, last: usize| {
            lines
                .next()
                .map(|(line, body)| (line, body.split_whitespace().collect::<Vec<_>>()))
                .ok_or_else(|| ParseError::new(last + 1, format!("missing `{what}` line")))
        };

        let (line, words) = expect("cert v1", 0)?;
        if words != ["cert", "v1"] {
            return Err(ParseError::new(line, "expected `cert v1`"));
        }
        let (line, words) = expect("m <m>", line)?;
        let m = match words[..] {
            ["m", m] => number(m, line)?,
            _ => return Err(ParseError::new(line, "expected `m <m>`")),
        };
        let (line, words) = expect("mprime <pos...>", line)?;
        if words.first() != Some(&"mprime") {
            return Err(ParseError::new(line, "expected `mprime <pos...>`"));
        }
        let mprime_positions = words[1..].iter().map(|w| number(w, line)).collect::<Result<_, _>>()?;
        let (line, words) = expect("x <count>", line)?;
        let x_count = match words[..] {
            ["x", x] => number(x, line)? as usize,
            _ => return Err(ParseError::new(line, "expected `x <count>`")),
        };

        let mut light_edges = Vec::new();
        for (line, body) in lines {
            match body.split_whitespace().collect::<Vec<_>>()[..] {
                ["edge", u, v] => light_edges.push((vertex(u, line)?, vertex(v, line)?)),
                _ => {
                    return Err(ParseError::new(
                        line,
                        format!("expected `edge <u> <v>`, found `{body}`"),
                    ))
                }
            }
        }
        Ok(CompressedPoset {
            m,
            mprime_positions,
            x_count,
            light_edges,
        })
    }
}

fn number(token: &str, line: usize) -> Result<u64, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a nonnegative integer")))
}

fn vertex(token: &str, line: usize) -> Result<Vertex, ParseError> {
    let bad = || ParseError::new(line, format!("`{token}` is not a vertex (M<pos> or X<idx>)"));
    let digits = token
        .get(1..)
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
    match (token.as_bytes().first(), digits) {
        (Some(b'M'), Some(d)) => d.parse().map(Vertex::M).map_err(|_| bad()),
        (Some(b'X'), Some(d)) => d.parse().map(Vertex::X).map_err(|_| bad()),
        _ => Err(bad()),
    }
}
