//! Exact canonical labeling of posets.
//!
//! Color refinement on the cover DAG (split classes by the colors of upper
//! and lower covers) followed by individualization and backtracking. Every
//! leaf of the search tree fixes an ordering of the elements; the canonical
//! key is the lexicographically least cover-matrix encoding over all leaves.
//! Branches on twin elements (identical upper and lower covers) are pruned,
//! since swapping twins is an automorphism.

use std::fmt;

use crate::poset::Poset;

/// Isomorphism-invariant encoding of a poset: equal keys iff isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

impl Poset {
    pub fn canonical_form(&self) -> CanonicalKey {
        self.canonical_labeling().0
    }

    /// Canonical key together with the ordering that realizes it:
    /// `order[k]` is the element placed at canonical position `k`.
    pub fn canonical_labeling(&self) -> (CanonicalKey, Vec<usize>) {
        let search = Search::new(self);
        let mut colors = vec![0u32; self.len()];
        search.refine(&mut colors);
        let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
        search.descend(colors, &mut best);
        let (key, order) = best.expect("search visits at least one leaf");
        (CanonicalKey(key), order)
    }

    /// Relabels the poset into its canonical ordering.
    pub fn canonical_poset(&self) -> Poset {
        let (_, order) = self.canonical_labeling();
        self.relabel(&order)
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.len() == other.len()
            && self.cover_edges().len() == other.cover_edges().len()
            && self.canonical_form() == other.canonical_form()
    }
}

struct Search<'a> {
    poset: &'a Poset,
    twin_class: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(poset: &'a Poset) -> Self {
        let n = poset.len();
        let mut twin_class = (0..n).collect::<Vec<_>>();
        for v in 0..n {
            if let Some(u) = (0..v).find(|&u| {
                poset.upper_covers(u) == poset.upper_covers(v) && poset.lower_covers(u) == poset.lower_covers(v)
            }) {
                twin_class[v] = twin_class[u];
            }
        }
        Search { poset, twin_class }
    }

    /// Refines `colors` to the coarsest stable partition below it. Colors are
    /// kept as dense ranks whose order depends only on the structure.
    fn refine(&self, colors: &mut [u32]) {
        let n = colors.len();
        let mut classes = count_classes(colors);
        loop {
            let mut signatures: Vec<(u32, Vec<u32>, Vec<u32>, usize)> = (0..n)
                .map(|v| {
                    let mut up: Vec<u32> = self.poset.upper_covers(v).iter().map(|&w| colors[w]).collect();
                    let mut down: Vec<u32> = self.poset.lower_covers(v).iter().map(|&w| colors[w]).collect();
                    up.sort_unstable();
                    down.sort_unstable();
                    (colors[v], up, down, v)
                })
                .collect();
            signatures.sort_unstable_by(|a, b| (a.0, &a.1, &a.2).cmp(&(b.0, &b.1, &b.2)));
            let mut rank = 0u32;
            for k in 0..n {
                if k > 0 {
                    let (p, q) = (&signatures[k - 1], &signatures[k]);
                    if (p.0, &p.1, &p.2) != (q.0, &q.1, &q.2) {
                        rank += 1;
                    }
                }
                colors[signatures[k].3] = rank;
            }
            let refined = if n == 0 { 0 } else { rank as usize + 1 };
            if refined == classes {
                return;
            }
            classes = refined;
        }
    }

    fn descend(&self, colors: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
        let n = colors.len();
        let classes = count_classes(&colors);
        if classes == n {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            let key = self.encode(&order, &colors);
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                *best = Some((key, order));
            }
            return;
        }
        // smallest non-singleton cell, ties broken by color
        let mut sizes = vec![0usize; classes];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..classes)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition has a non-singleton cell") as u32;

        let mut tried_twins = Vec::new();
        for v in (0..n).filter(|&v| colors[v] == target) {
            if tried_twins.contains(&self.twin_class[v]) {
                continue;
            }
            tried_twins.push(self.twin_class[v]);
            let mut child: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(u != v))
                .collect();
            self.refine(&mut child);
            self.descend(child, best);
        }
    }

    /// Element count (little-endian u32) followed by the row-major cover
    /// matrix in canonical positions, packed MSB first.
    fn encode(&self, order: &[usize], position: &[u32]) -> Vec<u8> {
        let n = order.len();
        let mut key = (n as u32).to_le_bytes().to_vec();
        let mut bits = vec![0u8; (n * n).div_ceil(8)];
        for (row, &v) in order.iter().enumerate() {
            for &w in self.poset.upper_covers(v) {
                let bit = row * n + position[w] as usize;
                bits[bit / 8] |= 0x80 >> (bit % 8);
            }
        }
        key.extend(bits);
        key
    }
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}
