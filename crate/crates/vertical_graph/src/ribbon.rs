//! Abstract ribbon graphs: vertices with a cyclic list of slots, finite edges
//! between slots, and rays leaving a slot toward a free tip.

use flat_kernel::rational::{abs, zero};
use flat_kernel::Q;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RibbonError {
    #[error("slot {slot} of vertex {vertex} does not exist")]
    NoSuchSlot { vertex: usize, slot: usize },
    #[error("slot {slot} of vertex {vertex} holds two half-edges")]
    SlotReused { vertex: usize, slot: usize },
    #[error("component {0} has a non-integral genus")]
    BadEuler(usize),
}

/// A position in the cyclic (counterclockwise) order at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub vertex: usize,
    pub slot: usize,
}

impl Slot {
    pub fn new(vertex: usize, slot: usize) -> Self {
        Slot { vertex, slot }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Finite { a: Slot, b: Slot },
    Ray { at: Slot },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEdge {
    pub kind: EdgeKind,
    /// `None` for an infinite ray.
    #[serde(with = "opt_q")]
    pub length: Option<Q>,
}

mod opt_q {
    use flat_kernel::rational::{format_q, parse_q};
    use flat_kernel::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(q) => s.serialize_some(&format_q(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Which end a half-edge starts from. For a ray, `A` leaves the vertex and `B`
/// returns from the tip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum End {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

/// A maximal stretch of a boundary walk between two ray tips, or a whole walk
/// without tips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub walk: usize,
    pub half_edges: Vec<HalfEdge>,
    pub is_cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonGraph {
    /// Slot count per vertex.
    pub slots: Vec<usize>,
    pub edges: Vec<RibbonEdge>,
}

impl RibbonGraph {
    pub fn new(slots: Vec<usize>, edges: Vec<RibbonEdge>) -> Result<Self, RibbonError> {
        let g = RibbonGraph { slots, edges };
        let mut used: Vec<Vec<bool>> = g.slots.iter().map(|&n| vec![false; n]).collect();
        for e in &g.edges {
            let ends: Vec<Slot> = match &e.kind {
                EdgeKind::Finite { a, b } => vec![*a, *b],
                EdgeKind::Ray { at } => vec![*at],
            };
            for s in ends {
                let cell = used
                    .get_mut(s.vertex)
                    .and_then(|v| v.get_mut(s.slot))
                    .ok_or(RibbonError::NoSuchSlot { vertex: s.vertex, slot: s.slot })?;
                if *cell {
                    return Err(RibbonError::SlotReused { vertex: s.vertex, slot: s.slot });
                }
                *cell = true;
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.slots.len()
    }

    pub fn is_ray(&self, e: usize) -> bool {
        matches!(self.edges[e].kind, EdgeKind::Ray { .. })
    }

    /// The slot a half-edge leaves from, or `None` for a ray's return half.
    pub fn origin(&self, h: HalfEdge) -> Option<Slot> {
        match (&self.edges[h.edge].kind, h.end) {
            (EdgeKind::Finite { a, .. }, End::A) => Some(*a),
            (EdgeKind::Finite { b, .. }, End::B) => Some(*b),
            (EdgeKind::Ray { at }, End::A) => Some(*at),
            (EdgeKind::Ray { .. }, End::B) => None,
        }
    }

    /// The slot a half-edge arrives at, or `None` when it runs out to a tip.
    pub fn target(&self, h: HalfEdge) -> Option<Slot> {
        match (&self.edges[h.edge].kind, h.end) {
            (EdgeKind::Finite { b, .. }, End::A) => Some(*b),
            (EdgeKind::Finite { a, .. }, End::B) => Some(*a),
            (EdgeKind::Ray { .. }, End::A) => None,
            (EdgeKind::Ray { at }, End::B) => Some(*at),
        }
    }

    pub fn half_edges(&self) -> Vec<HalfEdge> {
        (0..self.edges.len())
            .flat_map(|edge| [HalfEdge { edge, end: End::A }, HalfEdge { edge, end: End::B }])
            .collect()
    }

    fn occupants(&self) -> Vec<Vec<Option<HalfEdge>>> {
        let mut occ: Vec<Vec<Option<HalfEdge>>> = self.slots.iter().map(|&n| vec![None; n]).collect();
        for h in self.half_edges() {
            if let Some(s) = self.origin(h) {
                occ[s.vertex][s.slot] = Some(h);
            }
        }
        occ
    }

    /// Boundary successor: follow `h` to its far end, then turn to the next occupied
    /// slot counterclockwise. At a tip the walk turns back along the ray.
    fn successor(&self, occ: &[Vec<Option<HalfEdge>>], h: HalfEdge) -> HalfEdge {
        match self.target(h) {
            None => HalfEdge { edge: h.edge, end: End::B },
            Some(s) => {
                let n = self.slots[s.vertex];
                (1..=n)
                    .find_map(|k| occ[s.vertex][(s.slot + k) % n])
                    .expect("the arrival slot is occupied")
            }
        }
    }

    /// Boundary walks of the thickened graph, each as a cyclic list of half-edges.
    pub fn walks(&self) -> Vec<Vec<HalfEdge>> {
        let occ = self.occupants();
        let all = self.half_edges();
        let mut seen = std::collections::HashSet::new();
        let mut walks = Vec::new();
        for &h0 in &all {
            if seen.contains(&h0) {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = h0;
            loop {
                seen.insert(h);
                walk.push(h);
                h = self.successor(&occ, h);
                if h == h0 {
                    break;
                }
            }
            walks.push(walk);
        }
        walks
    }

    /// Sides: each walk is cut after every ray tip; a walk without tips is one cyclic side.
    pub fn sides(&self) -> Vec<Side> {
        let mut sides = Vec::new();
        for (w, walk) in self.walks().into_iter().enumerate() {
            let tips: Vec<usize> = walk
                .iter()
                .enumerate()
                .filter(|(_, h)| self.is_ray(h.edge) && h.end == End::A)
                .map(|(i, _)| i)
                .collect();
            if tips.is_empty() {
                sides.push(Side { walk: w, half_edges: walk, is_cycle: true });
                continue;
            }
            let n = walk.len();
            for (k, &t) in tips.iter().enumerate() {
                let next = tips[(k + 1) % tips.len()];
                let span = (next + n - t) % n;
                let span = if span == 0 { n } else { span };
                let half_edges = (1..=span).map(|j| walk[(t + j) % n]).collect();
                sides.push(Side { walk: w, half_edges, is_cycle: false });
            }
        }
        sides
    }

    /// Lengths of the finite edges along a side, in walk order.
    pub fn finite_lengths(&self, side: &Side) -> Vec<Q> {
        side.half_edges
            .iter()
            .filter(|h| !self.is_ray(h.edge))
            .map(|h| self.edges[h.edge].length.clone().unwrap_or_else(zero))
            .collect()
    }

    pub fn side_length(&self, side: &Side) -> Q {
        self.finite_lengths(side).iter().fold(zero(), |a, b| a + b)
    }

    /// Component index per vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for e in &self.edges {
            if let EdgeKind::Finite { a, b } = e.kind {
                let (ra, rb) = (find(&mut parent, a.vertex), find(&mut parent, b.vertex));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    pub fn vertex_of_walk(&self, walk: &[HalfEdge]) -> Option<usize> {
        walk.iter().find_map(|h| self.origin(*h)).map(|s| s.vertex)
    }

    /// Genus of the closed surface obtained by capping every boundary walk of each
    /// component with a disc.
    pub fn component_genera(&self) -> Result<Vec<u32>, RibbonError> {
        let comp = self.components();
        let k = self.component_count();
        let mut chi = vec![0i64; k];
        for &c in &comp {
            chi[c] += 1;
        }
        for e in &self.edges {
            match e.kind {
                EdgeKind::Finite { a, .. } => chi[comp[a.vertex]] -= 1,
                // A ray adds a tip vertex and an edge.
                EdgeKind::Ray { .. } => {}
            }
        }
        for walk in self.walks() {
            if let Some(v) = self.vertex_of_walk(&walk) {
                chi[comp[v]] += 1;
            }
        }
        // Vertices without any half-edge bound a disc of their own.
        let occ = self.occupants();
        for v in 0..self.vertex_count() {
            if occ[v].iter().all(Option::is_none) {
                chi[comp[v]] += 1;
            }
        }
        chi.iter()
            .enumerate()
            .map(|(c, &x)| {
                if x > 2 || (2 - x) % 2 != 0 {
                    Err(RibbonError::BadEuler(c))
                } else {
                    Ok(((2 - x) / 2) as u32)
                }
            })
            .collect()
    }
}

/// `|Σ (−1)^{i+1} ℓᵢ|` for an even number of terms, and 0 for an odd number.
pub fn alternating_residue(lengths: &[Q]) -> Q {
    if lengths.len() % 2 == 1 {
        return zero();
    }
    let s = lengths
        .iter()
        .enumerate()
        .fold(zero(), |acc, (i, l)| if i % 2 == 0 { acc + l } else { acc - l });
    abs(&s)
}
