use crate::HalfPlaneError;
use flat_kernel::rational::{format_q, zero};
use flat_kernel::Q;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use vertical_graph::alternating_residue;

/// Cyclically ordered half-planes, each with a rectangular notch over `[a, b]` on
/// its boundary. `[bᵢ, ∞)` is glued to `(−∞, aᵢ₊₁]` reversing orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarEnd {
    #[serde(with = "flat_kernel::rational::serde_q_pairs")]
    notches: Vec<(Q, Q)>,
}

impl PlanarEnd {
    pub fn new(notches: Vec<(Q, Q)>) -> Result<Self, HalfPlaneError> {
        if notches.is_empty() {
            return Err(HalfPlaneError::InvalidInput("a planar end needs at least one half-plane".into()));
        }
        if let Some((a, b)) = notches.iter().find(|(a, b)| a >= b) {
            return Err(HalfPlaneError::InvalidInput(format!("notch ({}, {}) is empty", format_q(a), format_q(b))));
        }
        Ok(PlanarEnd { notches })
    }

    pub fn half_planes(&self) -> usize {
        self.notches.len()
    }

    pub fn notches(&self) -> &[(Q, Q)] {
        &self.notches
    }

    pub fn notch_lengths(&self) -> Vec<Q> {
        self.notches.iter().map(|(a, b)| b - a).collect()
    }

    /// Pole order `n + 2`.
    pub fn order(&self) -> u32 {
        self.notches.len() as u32 + 2
    }
}

/// `|Σ (−1)^{i+1}(bᵢ − aᵢ)|` for an even number of half-planes, 0 for an odd number.
pub fn metric_residue(e: &PlanarEnd) -> Q {
    alternating_residue(&e.notch_lengths())
}

/// A crown: `n` bi-infinite boundary geodesics in cyclic order. Geodesic `i` is cut
/// by horocyclic arcs at heights `Lᵢ < Rᵢ` measured from a basepoint on it; the arc
/// leaving geodesic `i` at `Rᵢ` arrives on geodesic `i + 1` at `Lᵢ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrownEnd {
    #[serde(with = "flat_kernel::rational::serde_q_pairs")]
    cuts: Vec<(Q, Q)>,
}

impl CrownEnd {
    pub fn new(cuts: Vec<(Q, Q)>) -> Result<Self, HalfPlaneError> {
        if cuts.is_empty() {
            return Err(HalfPlaneError::InvalidInput("a crown needs at least one geodesic".into()));
        }
        if let Some((l, r)) = cuts.iter().find(|(l, r)| l > r) {
            return Err(HalfPlaneError::InvalidInput(format!("cut ({}, {}) has negative length", format_q(l), format_q(r))));
        }
        Ok(CrownEnd { cuts })
    }

    /// A crown whose truncated geodesic sides have the given lengths.
    pub fn from_side_lengths(lengths: &[Q]) -> Result<Self, HalfPlaneError> {
        Self::new(lengths.iter().map(|l| (zero(), l.clone())).collect())
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[(Q, Q)] {
        &self.cuts
    }

    pub fn side_lengths(&self) -> Vec<Q> {
        self.cuts.iter().map(|(l, r)| r - l).collect()
    }

    /// Moves the basepoint on geodesic `i`, shifting both of its heights.
    pub fn shift_basepoint(&self, i: usize, by: &Q) -> CrownEnd {
        let mut cuts = self.cuts.clone();
        cuts[i].0 = &cuts[i].0 + by;
        cuts[i].1 = &cuts[i].1 + by;
        CrownEnd { cuts }
    }

    /// Moves the horocyclic arc between geodesics `i` and `i + 1` further out the spike
    /// by hyperbolic distance `by` (negative moves it inward).
    pub fn shift_leaf(&self, i: usize, by: &Q) -> CrownEnd {
        let n = self.cuts.len();
        let mut cuts = self.cuts.clone();
        cuts[i].1 = &cuts[i].1 + by;
        let j = (i + 1) % n;
        cuts[j].0 = &cuts[j].0 - by;
        CrownEnd { cuts }
    }
}

/// 0 for an odd number of geodesics, `|Σ (−1)^{i+1}(Rᵢ − Lᵢ)|` otherwise.
pub fn crown_residue(c: &CrownEnd) -> Q {
    alternating_residue(&c.side_lengths())
}

/// Outward leaf shifts `dᵢ ≥ 0` (arc `i` joins geodesics `i` and `i + 1`) after which
/// the geodesic sides have lengths `H` except one side of length `H + C`. Among the
/// admissible solutions the one with the least shift on the last arc is returned.
pub fn truncation_leaf_shifts(c: &CrownEnd, h: &Q) -> Result<Vec<Q>, HalfPlaneError> {
    let too_small = || HalfPlaneError::HTooSmall { height: format_q(h) };
    if !h.is_positive() {
        return Err(too_small());
    }
    let n = c.len();
    let base = c.side_lengths();
    let targets = target_lengths(c, h);
    // Side i gains d_{i−1} + d_i. With x = d_{n−1}, each d_i = a_i + sᵢ·x, sᵢ = ±1.
    let mut a = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let (mut prev_a, mut prev_s) = (zero(), 1i32);
    for i in 0..n {
        let t = &targets[i] - &base[i];
        let ai = &t - &prev_a;
        let si = -prev_s;
        a.push(ai.clone());
        s.push(si);
        prev_a = ai;
        prev_s = si;
    }
    // Closing condition d_{n−1} = x.
    let x = if n % 2 == 1 {
        // a_{n−1} − x = x.
        &a[n - 1] / Q::from_integer(2.into())
    } else {
        if !a[n - 1].is_zero() {
            return Err(HalfPlaneError::InvalidInput("side lengths do not close up".into()));
        }
        // d_i ≥ 0 bounds x from below where sᵢ = 1 and from above where sᵢ = −1.
        let lower = (0..n).filter(|&i| s[i] == 1).map(|i| -&a[i]).max().unwrap_or_else(zero);
        let upper = (0..n).filter(|&i| s[i] == -1).map(|i| a[i].clone()).min();
        if upper.is_some_and(|u| u < lower) {
            return Err(too_small());
        }
        lower
    };
    let d: Vec<Q> = (0..n).map(|i| if s[i] == 1 { &a[i] + &x } else { &a[i] - &x }).collect();
    if d.iter().any(|v| v.is_negative()) {
        return Err(too_small());
    }
    Ok(d)
}

/// Side lengths `{H, …, H, H + C}`; the long side sits where the alternating sign of
/// the untruncated lengths puts it.
fn target_lengths(c: &CrownEnd, h: &Q) -> Vec<Q> {
    let n = c.len();
    let mut out = vec![h.clone(); n];
    if n.is_multiple_of(2) {
        let lengths = c.side_lengths();
        let signed = lengths.iter().enumerate().fold(zero(), |acc, (i, l)| if i % 2 == 0 { acc + l } else { acc - l });
        let long = if signed.is_negative() { 1 } else { 0 };
        out[long] = h + signed.abs();
    }
    out
}

/// Truncated geodesic side lengths `{H, …, H, H + C}` with `C` the crown residue.
pub fn normalize_truncation(c: &CrownEnd, h: &Q) -> Result<Vec<Q>, HalfPlaneError> {
    let d = truncation_leaf_shifts(c, h)?;
    let n = c.len();
    let base = c.side_lengths();
    Ok((0..n).map(|i| &base[i] + &d[(i + n - 1) % n] + &d[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use flat_kernel::{q, qi};

    #[test]
    fn odd_crowns_need_half_the_closing_defect() {
        let c = CrownEnd::from_side_lengths(&[qi(1), qi(2), qi(3)]).unwrap();
        let lengths = normalize_truncation(&c, &qi(10)).unwrap();
        assert_eq!(lengths, vec![qi(10); 3]);
    }

    #[test]
    fn small_heights_are_rejected() {
        let c = CrownEnd::from_side_lengths(&[qi(1), qi(2), qi(30)]).unwrap();
        assert!(matches!(normalize_truncation(&c, &qi(10)), Err(HalfPlaneError::HTooSmall { .. })));
        let c = CrownEnd::from_side_lengths(&[q(1, 2), qi(7)]).unwrap();
        assert!(normalize_truncation(&c, &q(1, 4)).is_err());
        assert_eq!(normalize_truncation(&c, &qi(7)).unwrap(), vec![qi(7), q(27, 2)]);
    }
}
