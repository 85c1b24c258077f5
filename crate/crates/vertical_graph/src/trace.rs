//! Exact straight-line tracing along the axis directions of a flat surface.

use flat_kernel::geom::{in_sweep, vertical_directions_in_sweep, VerticalDir};
use flat_kernel::rational::{one, zero};
use flat_kernel::{Corner, EdgeRef, FlatSurface, Vec2, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// A straight piece of a traced path inside one polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSegment {
    pub poly: usize,
    pub start: Vec2,
    pub end: Vec2,
}

impl PathSegment {
    pub fn length(&self) -> Q {
        let d = &self.end - &self.start;
        d.x.abs() + d.y.abs()
    }

    pub fn reversed(&self) -> PathSegment {
        PathSegment { poly: self.poly, start: self.end.clone(), end: self.start.clone() }
    }

    pub fn direction(&self) -> Vec2 {
        let d = &self.end - &self.start;
        let l = self.length();
        &d * &(one() / l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Vertical,
    Horizontal,
}

/// A direction leaving a vertex inside a given corner, in that corner's polygon frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub corner: Corner,
    pub dir: Vec2,
}

/// Axis directions at a vertex class, counterclockwise.
pub fn class_sites(s: &FlatSurface, class: usize, axis: Axis) -> Vec<Site> {
    let mut out = Vec::new();
    for &c in &s.vertex_classes()[class].corners {
        let (u, w) = s.corner_rays(c);
        match axis {
            Axis::Vertical => {
                for d in vertical_directions_in_sweep(&u, &w) {
                    out.push(Site { corner: c, dir: d.vector() });
                }
            }
            Axis::Horizontal => {
                for d in vertical_directions_in_sweep(&u.quarter_cw(), &w.quarter_cw()) {
                    let x = match d {
                        VerticalDir::Down => one(),
                        VerticalDir::Up => -one(),
                    };
                    out.push(Site { corner: c, dir: Vec2::new(x, zero()) });
                }
            }
        }
    }
    out
}

/// Puts a direction given at corner `c` into the corner whose half-open sweep holds
/// it. A direction along the corner's outgoing edge belongs to the previous corner.
/// Any other direction outside the sweep is resolved by turning counterclockwise,
/// which is only meaningful at a point of angle 2π.
pub fn locate_direction(s: &FlatSurface, c: Corner, d: &Vec2) -> (Corner, Vec2) {
    let (u, w) = s.corner_rays(c);
    if in_sweep(&u, &w, d) {
        return (c, d.clone());
    }
    if u.cross(d).is_zero() && u.dot(d).is_positive() {
        let link = s.link(EdgeRef::new(c.poly, c.vertex));
        return (s.prev_corner(c), link.map.apply_vec(d));
    }
    let mut c = c;
    let mut d = d.clone();
    for _ in 0..s.vertex_classes()[s.class_of(c)].corners.len() {
        let n = s.polygon(c.poly).len();
        let link = s.link(EdgeRef::new(c.poly, (c.vertex + n - 1) % n));
        d = link.map.apply_vec(&d);
        c = Corner::new(link.to.poly, link.to.edge);
        let (u, w) = s.corner_rays(c);
        if in_sweep(&u, &w, &d) {
            return (c, d);
        }
    }
    unreachable!("direction is in no corner of its vertex")
}

/// Vertical obstacle segments per polygon, each tagged with an id.
#[derive(Clone, Debug, Default)]
pub struct Obstacles {
    pub per_poly: Vec<Vec<(usize, Vec2, Vec2)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    /// Reached a vertex whose class satisfies the stop predicate, through the given site.
    Vertex { class: usize, site: Site },
    /// Met an obstacle segment at `point` of polygon `poly`, travelling in `dir`.
    Obstacle { id: usize, poly: usize, point: Vec2, dir: Vec2 },
    /// Ran out of length at `point` of polygon `poly`.
    Exhausted { poly: usize, point: Vec2 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub stop: Stop,
    pub length: Q,
    pub path: Vec<PathSegment>,
}

#[derive(Clone, Debug)]
enum At {
    Corner(Corner),
    Point(usize, Vec2),
}

enum Candidate {
    Vertex(usize),
    Edge(usize),
    Obstacle(usize),
}

pub struct Tracer<'a> {
    pub s: &'a FlatSurface,
    /// Sites per vertex class for the traced axis.
    sites: Vec<Vec<Site>>,
    axis: Axis,
}

impl<'a> Tracer<'a> {
    pub fn new(s: &'a FlatSurface, axis: Axis) -> Self {
        let sites = (0..s.vertex_classes().len()).map(|k| class_sites(s, k, axis)).collect();
        Tracer { s, sites, axis }
    }

    pub fn sites(&self, class: usize) -> &[Site] {
        &self.sites[class]
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    fn site_index(&self, class: usize, c: Corner, d: &Vec2) -> usize {
        let (c, d) = locate_direction(self.s, c, d);
        self.sites[class]
            .iter()
            .position(|st| st.corner == c && st.dir == d)
            .expect("axis direction is a site")
    }

    /// Starting position for a ray leaving a point of polygon `poly` in direction `d`:
    /// a corner when the point is a vertex, the partner polygon when `d` points out
    /// across the edge the point lies on.
    fn start_at_point(&self, poly: usize, z: &Vec2, d: &Vec2) -> (At, Vec2) {
        let p = self.s.polygon(poly);
        let n = p.len();
        for i in 0..n {
            if p.vertex(i) == z {
                let (c, d) = locate_direction(self.s, Corner::new(poly, i), d);
                return (At::Corner(c), d);
            }
        }
        for k in 0..n {
            let a = p.edge_start(k);
            let v = p.edge_vector(k);
            let rel = z - a;
            if v.cross(&rel).is_zero() {
                let t = rel.dot(&v) / v.dot(&v);
                if t.is_positive() && t < one() && v.cross(d).is_negative() {
                    let link = self.s.link(EdgeRef::new(poly, k));
                    return (At::Point(link.to.poly, link.map.apply(z)), link.map.apply_vec(d));
                }
            }
        }
        (At::Point(poly, z.clone()), d.clone())
    }

    pub fn from_site(&self, site: &Site, budget: &Q, stop: &dyn Fn(usize) -> bool, obs: Option<&Obstacles>) -> Trace {
        self.run(At::Corner(site.corner), site.dir.clone(), budget, stop, obs)
    }

    pub fn from_point(
        &self,
        poly: usize,
        z: &Vec2,
        d: &Vec2,
        budget: &Q,
        stop: &dyn Fn(usize) -> bool,
        obs: Option<&Obstacles>,
    ) -> Trace {
        let (at, d) = self.start_at_point(poly, z, d);
        self.run(at, d, budget, stop, obs)
    }

    fn run(&self, mut at: At, mut d: Vec2, budget: &Q, stop: &dyn Fn(usize) -> bool, obs: Option<&Obstacles>) -> Trace {
        let s = self.s;
        let mut length = zero();
        let mut path = Vec::new();
        loop {
            let (poly, z) = match &at {
                At::Corner(c) => (c.poly, s.polygon(c.poly).vertex(c.vertex).clone()),
                At::Point(p, z) => (*p, z.clone()),
            };
            let (dist, cand) = self.cast(poly, &z, &d, obs);
            let remaining = budget - &length;
            if dist > remaining {
                let end = &z + &(&d * &remaining);
                if remaining.is_positive() {
                    path.push(PathSegment { poly, start: z, end: end.clone() });
                }
                return Trace { stop: Stop::Exhausted { poly, point: end }, length: budget.clone(), path };
            }
            let end = &z + &(&d * &dist);
            path.push(PathSegment { poly, start: z, end: end.clone() });
            length = &length + &dist;
            match cand {
                Candidate::Obstacle(id) => {
                    return Trace { stop: Stop::Obstacle { id, poly, point: end, dir: d }, length, path };
                }
                Candidate::Edge(k) => {
                    let link = s.link(EdgeRef::new(poly, k));
                    at = At::Point(link.to.poly, link.map.apply(&end));
                    d = link.map.apply_vec(&d);
                }
                Candidate::Vertex(j) => {
                    let back = -&d;
                    let class = s.class_of(Corner::new(poly, j));
                    let k = self.site_index(class, Corner::new(poly, j), &back);
                    if stop(class) {
                        let site = self.sites[class][k].clone();
                        return Trace { stop: Stop::Vertex { class, site }, length, path };
                    }
                    // A regular point: leave through the opposite axis direction.
                    let sites = &self.sites[class];
                    let out = &sites[(k + sites.len() / 2) % sites.len()];
                    at = At::Corner(out.corner);
                    d = out.dir.clone();
                }
            }
        }
    }

    /// First boundary feature met by the ray `z + s·d`, `s > 0`, inside polygon `poly`.
    fn cast(&self, poly: usize, z: &Vec2, d: &Vec2, obs: Option<&Obstacles>) -> (Q, Candidate) {
        let p = self.s.polygon(poly);
        let n = p.len();
        let mut best: Option<(Q, Candidate)> = None;
        let offer = |dist: Q, c: Candidate, best: &mut Option<(Q, Candidate)>| {
            let better = match best {
                None => true,
                Some((b, bc)) => dist < *b || (dist == *b && matches!(c, Candidate::Obstacle(_)) && !matches!(bc, Candidate::Obstacle(_))),
            };
            if better {
                *best = Some((dist, c));
            }
        };
        for k in 0..n {
            let a = p.edge_start(k);
            let rel = a - z;
            if d.cross(&rel).is_zero() && d.dot(&rel).is_positive() {
                offer(d.dot(&rel), Candidate::Vertex(k), &mut best);
            }
            if let Some((dist, r)) = ray_segment(z, d, a, p.edge_end(k)) {
                if r.is_positive() && r < one() {
                    offer(dist, Candidate::Edge(k), &mut best);
                }
            }
        }
        if let Some(obs) = obs {
            for (id, a, b) in obs.per_poly.get(poly).into_iter().flatten() {
                for e in [a, b] {
                    let rel = e - z;
                    if d.cross(&rel).is_zero() && d.dot(&rel).is_positive() {
                        offer(d.dot(&rel), Candidate::Obstacle(*id), &mut best);
                    }
                }
                if let Some((dist, r)) = ray_segment(z, d, a, b) {
                    if !r.is_negative() && r <= one() {
                        offer(dist, Candidate::Obstacle(*id), &mut best);
                    }
                }
            }
        }
        best.expect("a ray inside a polygon meets its boundary")
    }
}

/// Intersection of the ray `z + s·d` with the line through `a`, `b` at `a + r(b − a)`;
/// `Some((s, r))` with `s > 0` when they cross transversally.
fn ray_segment(z: &Vec2, d: &Vec2, a: &Vec2, b: &Vec2) -> Option<(Q, Q)> {
    let e = b - a;
    let den = d.cross(&e);
    if den.is_zero() {
        return None;
    }
    let rel = a - z;
    let s = rel.cross(&e) / &den;
    let r = rel.cross(d) / &den;
    s.is_positive().then_some((s, r))
}
