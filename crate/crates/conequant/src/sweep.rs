//! Scalarization order bookkeeping and the rotation step that advances a
//! direction across the dual base segment while pinning one point to the
//! boundary of its halfspace.

use crate::geometry::{Tolerance, Vec2};
use crate::{Error, Scalar};

/// Immutable point sample. Indices are assigned by position and never change.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet<T = f64> {
    points: Vec<Vec2<T>>,
}

impl<T: Scalar> DataSet<T> {
    pub fn new(points: Vec<Vec2<T>>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::OutOfRange { what: "data point coordinate" });
        }
        Ok(Self { points })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    #[inline]
    pub fn point(&self, i: usize) -> Vec2<T> {
        self.points[i]
    }

    #[inline]
    pub fn points(&self) -> &[Vec2<T>] {
        &self.points
    }

    /// Scalar products of every point with `w`, in index order.
    pub fn scalarize(&self, w: Vec2<T>) -> Vec<T> {
        self.points.iter().map(|p| p.dot(w)).collect()
    }

    /// Copy of the sample with `z` appended at the end.
    pub(crate) fn appending(&self, z: Vec2<T>) -> Self {
        let mut points = self.points.clone();
        points.push(z);
        Self { points }
    }
}

/// Ordering of data indices, usually from [`index_sort`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    /// Validates that `order` visits every index below its length once.
    pub fn from_order(order: Vec<usize>) -> Result<Self, Error> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(Error::InvalidState("order is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Self { order })
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of a data index in the ordering.
    pub fn position_of(&self, idx: usize) -> Option<usize> {
        self.order.iter().position(|&i| i == idx)
    }
}

/// Stable ascending sort, returned as source indices: entry `j` names the
/// index of the `j`-th smallest value, ties in input order.
pub fn index_sort<T: Scalar>(values: &[T]) -> Permutation {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Permutation { order }
}

/// Split of the sample by scalarization against an anchor point: strictly
/// below within tolerance, tied, or (implicitly) strictly above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPartition {
    /// Indices with `w.x < w.anchor - eps`, ascending.
    pub below: Vec<usize>,
    /// Indices within `eps` of the anchor value, ascending. Contains the
    /// anchor's own index when the anchor is a data point.
    pub equal: Vec<usize>,
}

impl BoundaryPartition {
    #[inline]
    pub fn below_count(&self) -> usize {
        self.below.len()
    }

    #[inline]
    pub fn tie_count(&self) -> usize {
        self.equal.len()
    }
}

/// Classifies every data point against the anchor's scalarization.
pub fn boundary_partition<T: Scalar>(
    data: &DataSet<T>,
    w: Vec2<T>,
    anchor: Vec2<T>,
    eps: T,
) -> BoundaryPartition {
    let av = w.dot(anchor);
    let mut below = Vec::new();
    let mut equal = Vec::new();
    for (i, p) in data.points().iter().enumerate() {
        let v = p.dot(w);
        if v < av - eps {
            below.push(i);
        } else if v <= av + eps {
            equal.push(i);
        }
    }
    BoundaryPartition { below, equal }
}

/// Rewrites the tie block inside `pi` in ascending order of `v2 . x`,
/// leaving every other position unchanged. Ties under `v2` (duplicate
/// points) keep their relative order. For distinct points tied under `w`,
/// linear independence of `w` and `v2` makes the new block order strict.
pub fn reorder_ties<T: Scalar>(
    pi: &Permutation,
    part: &BoundaryPartition,
    data: &DataSet<T>,
    v2: Vec2<T>,
) -> Permutation {
    let mut member = vec![false; pi.len()];
    for &i in &part.equal {
        member[i] = true;
    }
    let mut order = pi.order.clone();
    let positions: Vec<usize> = (0..order.len()).filter(|&j| member[order[j]]).collect();
    let mut block: Vec<usize> = positions.iter().map(|&j| order[j]).collect();
    block.sort_by(|&a, &b| {
        data.point(a)
            .dot(v2)
            .partial_cmp(&data.point(b).dot(v2))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for (slot, idx) in positions.into_iter().zip(block) {
        order[slot] = idx;
    }
    Permutation { order }
}

/// Result of one rotation step: the largest admissible rotation parameter
/// and the direction it produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationOutcome<T = f64> {
    /// In `(0, 1]`; `1` means the sweep reaches `v2`.
    pub s_bar: T,
    /// `(1 - s_bar) w + s_bar v2`, exactly `v2` when `s_bar` is `1`.
    pub w_next: Vec2<T>,
}

/// Constraint side of a point relative to the pinned anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// Must stay at or below the anchor's scalarization.
    Le,
    /// Must stay at or above.
    Ge,
    /// Known tie-block member ordered before the anchor.
    LeTie,
    /// Known tie-block member ordered after the anchor.
    GeTie,
    Anchor,
}

/// Classification of one sweep position: the count strictly below the
/// anchor value and the tie block, stably sorted by the `v2` scalarization
/// so duplicates keep index order.
pub(crate) struct StepClass {
    pub below: usize,
    pub block: Vec<usize>,
}

pub(crate) fn classify_against<T: Scalar>(
    values: &[T],
    vvals: &[T],
    anchor_value: T,
    eps: T,
) -> StepClass {
    let mut below = 0;
    let mut block = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if v < anchor_value - eps {
            below += 1;
        } else if v <= anchor_value + eps {
            block.push(i);
        }
    }
    block.sort_by(|&a, &b| {
        vvals[a]
            .partial_cmp(&vvals[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    StepClass { below, block }
}

/// Fills per-index constraint sides for a rotation anchored at position
/// `anchor_block_pos` of the tie block.
pub(crate) fn sides_against<T: Scalar>(
    values: &[T],
    anchor_value: T,
    eps: T,
    block: &[usize],
    anchor_block_pos: usize,
    sides: &mut Vec<Side>,
) {
    sides.clear();
    sides.extend(values.iter().map(|&v| {
        if v < anchor_value - eps {
            Side::Le
        } else {
            Side::Ge
        }
    }));
    for (j, &idx) in block.iter().enumerate() {
        sides[idx] = match j.cmp(&anchor_block_pos) {
            std::cmp::Ordering::Less => Side::LeTie,
            std::cmp::Ordering::Equal => Side::Anchor,
            std::cmp::Ordering::Greater => Side::GeTie,
        };
    }
}

/// Largest `s` in `(0, 1]` keeping every constraint satisfied along
/// `w(s) = (1-s) w + s v2`, given precomputed scalarizations under `w`
/// (`values`) and `v2` (`vvals`).
///
/// Each constraint is linear in `s` with endpoints `a = w.(x - anchor)` and
/// `c = v2.(x - anchor)`, so its only sign change sits at `s = a / (a - c)`.
/// Constraints tied at `s = 0` must be feasible for small positive `s`
/// (guaranteed by tie reordering); a tied constraint moving the wrong way is
/// reported as invalid state. Critical values at or below `eps_s` are
/// treated as ties at zero, not as blocking.
pub(crate) fn critical_rotation<T: Scalar>(
    values: &[T],
    vvals: &[T],
    anchor: usize,
    sides: &[Side],
    tol: &Tolerance<T>,
) -> Result<T, Error> {
    let av = values[anchor];
    let cv = vvals[anchor];
    let mut s_bar = T::one();
    for i in 0..values.len() {
        if i == anchor {
            continue;
        }
        let a = values[i] - av;
        let c = vvals[i] - cv;
        match sides[i] {
            Side::Anchor => return Err(Error::InvalidState("two anchors in one rotation")),
            Side::Le | Side::LeTie => {
                if sides[i] == Side::LeTie || a.abs() <= tol.eps {
                    if c > tol.eps {
                        return Err(Error::InvalidState(
                            "tied constraint strictly infeasible for positive rotation",
                        ));
                    }
                } else if a > T::zero() {
                    return Err(Error::InvalidState("constraint violated before rotation"));
                } else if c > tol.eps {
                    let s = a / (a - c);
                    if s > tol.eps_s && s < s_bar {
                        s_bar = s;
                    }
                }
            }
            Side::Ge | Side::GeTie => {
                if sides[i] == Side::GeTie || a.abs() <= tol.eps {
                    if c < -tol.eps {
                        return Err(Error::InvalidState(
                            "tied constraint strictly infeasible for positive rotation",
                        ));
                    }
                } else if a < T::zero() {
                    return Err(Error::InvalidState("constraint violated before rotation"));
                } else if c < -tol.eps {
                    let s = a / (a - c);
                    if s > tol.eps_s && s < s_bar {
                        s_bar = s;
                    }
                }
            }
        }
    }
    Ok(s_bar)
}

#[inline]
pub(crate) fn rotate_direction<T: Scalar>(w: Vec2<T>, v2: Vec2<T>, s_bar: T) -> Vec2<T> {
    if s_bar >= T::one() {
        v2
    } else {
        w * (T::one() - s_bar) + v2 * s_bar
    }
}

/// One rotation step: starting from `w`, rotate toward `v2` while the point
/// at position `anchor_pos` of `pi` stays on its halfspace boundary and all
/// points keep their side of it. `pi` must be sorted for `w` with its tie
/// block already reordered; positions before the anchor are constrained
/// below, positions after it above.
pub fn rotation_step<T: Scalar>(
    data: &DataSet<T>,
    w: Vec2<T>,
    v2: Vec2<T>,
    pi: &Permutation,
    anchor_pos: usize,
    tol: Tolerance<T>,
) -> Result<RotationOutcome<T>, Error> {
    if pi.len() != data.len() || anchor_pos >= pi.len() {
        return Err(Error::InvalidState("permutation does not match data"));
    }
    let values = data.scalarize(w);
    let vvals = data.scalarize(v2);
    let mut sides = vec![Side::Ge; data.len()];
    for (pos, &idx) in pi.as_slice().iter().enumerate() {
        sides[idx] = match pos.cmp(&anchor_pos) {
            std::cmp::Ordering::Less => Side::Le,
            std::cmp::Ordering::Equal => Side::Anchor,
            std::cmp::Ordering::Greater => Side::Ge,
        };
    }
    let anchor = pi.as_slice()[anchor_pos];
    let s_bar = critical_rotation(&values, &vvals, anchor, &sides, &tol)?;
    Ok(RotationOutcome {
        s_bar,
        w_next: rotate_direction(w, v2, s_bar),
    })
}
