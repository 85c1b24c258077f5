//! Exact planar vectors and the direction predicates the kernel is built on.

use crate::rational::{format_q, parse_q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Q,
    pub y: Q,
}

impl Vec2 {
    pub fn new(x: Q, y: Q) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(Q::zero(), Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, o: &Vec2) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn scale(&self, k: &Q) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    /// Horizontal stretch `(x, y) ↦ (k·x, y)`.
    pub fn stretch_x(&self, k: &Q) -> Vec2 {
        Vec2::new(&self.x * k, self.y.clone())
    }

    pub fn is_vertical(&self) -> bool {
        self.x.is_zero() && !self.y.is_zero()
    }

    pub fn is_horizontal(&self) -> bool {
        self.y.is_zero() && !self.x.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (crate::rational::to_f64(&self.x), crate::rational::to_f64(&self.y))
    }

    /// Rotation by −π/2: sends the upward vertical to the positive horizontal.
    pub fn quarter_cw(&self) -> Vec2 {
        Vec2::new(self.y.clone(), -&self.x)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.x), format_q(&self.y))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }
}

impl Mul<&Q> for &Vec2 {
    type Output = Vec2;
    fn mul(self, k: &Q) -> Vec2 {
        self.scale(k)
    }
}

impl Serialize for Vec2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_q(&self.x), format_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vec2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_q(&x).map_err(serde::de::Error::custom)?;
        let y = parse_q(&y).map_err(serde::de::Error::custom)?;
        Ok(Vec2::new(x, y))
    }
}

/// Shorthand for building points from small integer fractions in tests and catalogs.
pub fn v(x: Q, y: Q) -> Vec2 {
    Vec2::new(x, y)
}

/// Half of the circle containing the direction: 0 for angles in [0, π), 1 for [π, 2π).
pub fn half(d: &Vec2) -> u8 {
    if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Compares the polar angles (in [0, 2π)) of two nonzero directions.
pub fn angle_cmp(a: &Vec2, b: &Vec2) -> Ordering {
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let c = a.cross(b);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Number of directions at angle ≡ 0 (mod π) met when sweeping counterclockwise
/// from `u` (excluded) to `w` (included). The sweep is the interior angle of a
/// polygon corner with outgoing edge `u` and reversed incoming edge `w`.
pub fn horizontal_crossings(u: &Vec2, w: &Vec2) -> u32 {
    let wrap = if angle_cmp(w, u) != Ordering::Greater { 2 } else { 0 };
    (half(w) as u32 + wrap) - half(u) as u32
}

/// Same count for the vertical directions (angle ≡ π/2 mod π).
pub fn vertical_crossings(u: &Vec2, w: &Vec2) -> u32 {
    horizontal_crossings(&u.quarter_cw(), &w.quarter_cw())
}

/// The vertical directions (up or down) met in the half-open sweep `(u, w]`,
/// in sweep order.
pub fn vertical_directions_in_sweep(u: &Vec2, w: &Vec2) -> Vec<VerticalDir> {
    let up = Vec2::new(Q::zero(), crate::rational::one());
    let down = -&up;
    let mut found = Vec::new();
    for (dir, vec) in [(VerticalDir::Up, &up), (VerticalDir::Down, &down)] {
        if in_sweep(u, w, vec) {
            found.push((dir, vec.clone()));
        }
    }
    found.sort_by(|a, b| sweep_offset_cmp(u, &a.1, &b.1));
    found.into_iter().map(|(d, _)| d).collect()
}

/// Whether direction `d` lies in the half-open counterclockwise sweep `(u, w]`.
pub fn in_sweep(u: &Vec2, w: &Vec2, d: &Vec2) -> bool {
    if angle_cmp(d, u) == Ordering::Equal {
        return angle_cmp(w, u) == Ordering::Equal;
    }
    sweep_offset_cmp(u, d, w) != Ordering::Greater
}

/// Compares the counterclockwise angular offsets of `a` and `b` measured from `u`,
/// with offsets taken in (0, 2π].
pub fn sweep_offset_cmp(u: &Vec2, a: &Vec2, b: &Vec2) -> Ordering {
    let group = |d: &Vec2| match angle_cmp(d, u) {
        Ordering::Greater => 0u8,
        Ordering::Less => 1,
        Ordering::Equal => 2,
    };
    let (ga, gb) = (group(a), group(b));
    if ga != gb {
        return ga.cmp(&gb);
    }
    if ga == 2 {
        return Ordering::Equal;
    }
    angle_cmp(a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerticalDir {
    Up,
    Down,
}

impl VerticalDir {
    pub fn vector(self) -> Vec2 {
        let one = crate::rational::one();
        match self {
            VerticalDir::Up => Vec2::new(Q::zero(), one),
            VerticalDir::Down => Vec2::new(Q::zero(), -one),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            VerticalDir::Up => VerticalDir::Down,
            VerticalDir::Down => VerticalDir::Up,
        }
    }

    /// The sign of the y-component.
    pub fn sign(self) -> i32 {
        match self {
            VerticalDir::Up => 1,
            VerticalDir::Down => -1,
        }
    }
}

/// Twice the signed area.
pub fn twice_signed_area(pts: &[Vec2]) -> Q {
    let n = pts.len();
    let mut s = Q::zero();
    for i in 0..n {
        s += pts[i].cross(&pts[(i + 1) % n]);
    }
    s
}

fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> Q {
    (b - a).cross(&(c - a))
}

fn on_segment(a: &Vec2, b: &Vec2, p: &Vec2) -> bool {
    let lo_x = if a.x <= b.x { &a.x } else { &b.x };
    let hi_x = if a.x <= b.x { &b.x } else { &a.x };
    let lo_y = if a.y <= b.y { &a.y } else { &b.y };
    let hi_y = if a.y <= b.y { &b.y } else { &a.y };
    orient(a, b, p).is_zero() && lo_x <= &p.x && &p.x <= hi_x && lo_y <= &p.y && &p.y <= hi_y
}

/// Closed-segment intersection test.
pub fn segments_intersect(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1.signum() * o2.signum() < Q::zero() && o3.signum() * o4.signum() < Q::zero() {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Whether the closed polygon is simple. Consecutive collinear edges are allowed
/// as long as they do not fold back.
pub fn is_simple(pts: &[Vec2]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if pts[i] == pts[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let a = &pts[i];
        let b = &pts[(i + 1) % n];
        // Adjacent edge: must not fold back onto edge i.
        let c = &pts[(i + 2) % n];
        let e1 = b - a;
        let e2 = c - b;
        if e1.cross(&e2).is_zero() && e1.dot(&e2).is_negative() {
            return false;
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let c = &pts[j];
            let d = &pts[(j + 1) % n];
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
