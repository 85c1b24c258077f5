use crate::ribbon::{EdgeKind, RibbonEdge, RibbonError, RibbonGraph, Side, Slot};
use crate::trace::{Axis, PathSegment, Site, Stop, Tracer};
use flat_kernel::rational::zero;
use flat_kernel::{FlatSurface, Q};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("length bound must be non-negative")]
    NegativeBound,
    #[error("feeler from vertex {vertex} prong {prong} meets a vertex after length {at}")]
    FeelersCollide { vertex: usize, prong: usize, at: String },
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
}

/// A vertex of the vertical graph: a cone point or a marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub class: usize,
    pub angle_pi: u32,
    pub label: Option<String>,
    /// Vertical directions at the vertex, counterclockwise.
    pub prongs: Vec<Site>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Prong {
    pub vertex: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaddleConnection {
    pub from: Prong,
    pub to: Prong,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub length: Q,
    pub path: Vec<PathSegment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feeler {
    pub prong: Prong,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub length: Q,
    pub path: Vec<PathSegment>,
}

/// Vertical saddle connections of a surface with feelers of a common length
/// on the remaining prongs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalGraph {
    pub vertices: Vec<GraphVertex>,
    pub connections: Vec<SaddleConnection>,
    pub feelers: Vec<Feeler>,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub feeler_length: Q,
}

/// Vertex classes that become graph vertices: cone points and marked points.
pub fn graph_vertices(s: &FlatSurface) -> Vec<GraphVertex> {
    let tracer = Tracer::new(s, Axis::Vertical);
    s.vertex_classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.angle_pi > 2 || c.label.is_some())
        .map(|(k, c)| GraphVertex {
            class: k,
            angle_pi: c.angle_pi,
            label: c.label.clone(),
            prongs: tracer.sites(k).to_vec(),
        })
        .collect()
}

fn vertex_lookup(s: &FlatSurface, vertices: &[GraphVertex]) -> Vec<Option<usize>> {
    let mut look = vec![None; s.vertex_classes().len()];
    for (i, v) in vertices.iter().enumerate() {
        look[v.class] = Some(i);
    }
    look
}

/// All vertical segments of length at most `bound` joining graph vertices, each
/// listed once from its lexicographically smaller prong.
pub fn vertical_saddle_connections(s: &FlatSurface, bound: &Q) -> Result<Vec<SaddleConnection>, GraphError> {
    if bound.is_negative() {
        return Err(GraphError::NegativeBound);
    }
    let vertices = graph_vertices(s);
    Ok(connections_among(s, &vertices, bound))
}

fn connections_among(s: &FlatSurface, vertices: &[GraphVertex], bound: &Q) -> Vec<SaddleConnection> {
    let tracer = Tracer::new(s, Axis::Vertical);
    let look = vertex_lookup(s, vertices);
    let is_vertex = |class: usize| look[class].is_some();
    let mut out = Vec::new();
    for (vi, v) in vertices.iter().enumerate() {
        for (pi, site) in v.prongs.iter().enumerate() {
            let tr = tracer.from_site(site, bound, &is_vertex, None);
            if let Stop::Vertex { class, site: arrival } = tr.stop {
                let wi = look[class].expect("stop class is a vertex");
                let wj = vertices[wi].prongs.iter().position(|p| *p == arrival).expect("arrival prong");
                let from = Prong { vertex: vi, index: pi };
                let to = Prong { vertex: wi, index: wj };
                if from < to {
                    out.push(SaddleConnection { from, to, length: tr.length, path: tr.path });
                }
            }
        }
    }
    out
}

/// `V_L`: saddle connections of length at most `l` plus feelers of length `l`.
pub fn appended_graph(s: &FlatSurface, l: &Q) -> Result<VerticalGraph, GraphError> {
    let connections = vertical_saddle_connections(s, l)?;
    appended_graph_with(s, connections, l)
}

/// Appends feelers of length `l` to the prongs not used by `connections`. Fails when
/// a feeler reaches a graph vertex within length `l`, which happens when the
/// connection list was computed with a bound below `l`.
pub fn appended_graph_with(s: &FlatSurface, connections: Vec<SaddleConnection>, l: &Q) -> Result<VerticalGraph, GraphError> {
    if l.is_negative() {
        return Err(GraphError::NegativeBound);
    }
    let vertices = graph_vertices(s);
    let look = vertex_lookup(s, &vertices);
    let is_vertex = |class: usize| look[class].is_some();
    let tracer = Tracer::new(s, Axis::Vertical);
    let mut used = std::collections::HashSet::new();
    for c in &connections {
        used.insert(c.from);
        used.insert(c.to);
    }
    let mut feelers = Vec::new();
    if l.is_positive() {
        for (vi, v) in vertices.iter().enumerate() {
            for (pi, site) in v.prongs.iter().enumerate() {
                let prong = Prong { vertex: vi, index: pi };
                if used.contains(&prong) {
                    continue;
                }
                let tr = tracer.from_site(site, l, &is_vertex, None);
                if let Stop::Vertex { .. } = tr.stop {
                    return Err(GraphError::FeelersCollide {
                        vertex: vi,
                        prong: pi,
                        at: flat_kernel::format_q(&tr.length),
                    });
                }
                feelers.push(Feeler { prong, length: l.clone(), path: tr.path });
            }
        }
    }
    Ok(VerticalGraph { vertices, connections, feelers, feeler_length: l.clone() })
}

fn truncate_path(path: &[PathSegment], l: &Q) -> Vec<PathSegment> {
    let mut out = Vec::new();
    let mut left = l.clone();
    for seg in path {
        if !left.is_positive() {
            break;
        }
        let len = seg.length();
        if len <= left {
            left = &left - &len;
            out.push(seg.clone());
        } else {
            let end = &seg.start + &(&seg.direction() * &left);
            out.push(PathSegment { poly: seg.poly, start: seg.start.clone(), end });
            left = zero();
        }
    }
    out
}

impl VerticalGraph {
    pub fn prong_count(&self) -> usize {
        self.vertices.iter().map(|v| v.prongs.len()).sum()
    }

    /// The graph seen with the shorter length `l`: longer connections become pairs
    /// of feelers and every feeler is cut to `l`.
    pub fn restrict(&self, l: &Q) -> VerticalGraph {
        let mut connections = Vec::new();
        let mut feelers = Vec::new();
        for c in &self.connections {
            if &c.length <= l {
                connections.push(c.clone());
            } else if l.is_positive() {
                feelers.push(Feeler { prong: c.from, length: l.clone(), path: truncate_path(&c.path, l) });
                let back: Vec<PathSegment> = c.path.iter().rev().map(PathSegment::reversed).collect();
                feelers.push(Feeler { prong: c.to, length: l.clone(), path: truncate_path(&back, l) });
            }
        }
        if l.is_positive() {
            for f in &self.feelers {
                feelers.push(Feeler { prong: f.prong, length: l.clone(), path: truncate_path(&f.path, l) });
            }
        }
        feelers.sort_by_key(|f| f.prong);
        VerticalGraph { vertices: self.vertices.clone(), connections, feelers, feeler_length: l.clone() }
    }

    /// Ribbon structure: finite edges are connections (edge `i` is connection `i`),
    /// rays are feelers (edge `connections.len() + j`).
    pub fn ribbon(&self) -> RibbonGraph {
        let slots = self.vertices.iter().map(|v| v.prongs.len()).collect();
        let slot = |p: Prong| Slot::new(p.vertex, p.index);
        let mut edges: Vec<RibbonEdge> = self
            .connections
            .iter()
            .map(|c| RibbonEdge { kind: EdgeKind::Finite { a: slot(c.from), b: slot(c.to) }, length: Some(c.length.clone()) })
            .collect();
        edges.extend(
            self.feelers
                .iter()
                .map(|f| RibbonEdge { kind: EdgeKind::Ray { at: slot(f.prong) }, length: Some(f.length.clone()) }),
        );
        RibbonGraph::new(slots, edges).expect("each prong carries at most one half-edge")
    }

    pub fn sides(&self) -> Vec<Side> {
        self.ribbon().sides()
    }

    pub fn component_count(&self) -> usize {
        self.ribbon().component_count()
    }

    /// Residue of the end bounded by boundary walk `walk`: the alternating sum of its
    /// sides' saddle-connection lengths. Feelers do not contribute.
    pub fn walk_residue(&self, walk: usize) -> Q {
        let r = self.ribbon();
        let lengths: Vec<Q> = r.sides().iter().filter(|s| s.walk == walk).map(|s| r.side_length(s)).collect();
        crate::ribbon::alternating_residue(&lengths)
    }
}
