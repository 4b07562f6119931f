//! Halfspace intersection in two modes: recession-cone polyhedra whose
//! normals live in a dual base segment (the quantile case), and bounded
//! polygons from normals that positively span the plane (the Tukey case).

use super::{Cone, DualBase, Halfspace, Tolerance, Vec2};
use crate::{Error, Scalar};

/// Convex polyhedron as a minimal halfspace list plus its vertices.
///
/// `hrep` keeps the input halfspaces verbatim, ordered by normal angle.
/// `vertices` are sorted by x, then y. `rec_dirs` holds the two recession
/// cone generators, or is empty for a bounded polyhedron. Minimality means
/// every halfspace has at least one vertex on its boundary and dropping any
/// halfspace strictly enlarges the set.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron<T = f64> {
    pub hrep: Vec<Halfspace<T>>,
    pub vertices: Vec<Vec2<T>>,
    pub rec_dirs: Vec<Vec2<T>>,
}

impl<T: Scalar> Polyhedron<T> {
    /// Membership in every halfspace, each with slack `eps`.
    pub fn contains(&self, z: Vec2<T>, eps: T) -> bool {
        self.hrep.iter().all(|h| h.contains(z, eps))
    }
}

pub(crate) fn sort_xy<T: Scalar>(vertices: &mut [Vec2<T>]) {
    vertices.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.y.partial_cmp(&b.y).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Angle of `w` measured from `v1`, in `(-pi, pi]`. Within the segment the
/// value is nonnegative and at most the angle of `v2`.
#[inline]
fn angle_from<T: Scalar>(v1: Vec2<T>, w: Vec2<T>) -> T {
    v1.cross(w).atan2(v1.dot(w))
}

#[inline]
fn same_direction<T: Scalar>(a: Vec2<T>, b: Vec2<T>, tol: &Tolerance<T>) -> bool {
    a.cross(b).abs() <= tol.eps * a.norm() * b.norm() && a.dot(b) > T::zero()
}

/// Offset after scaling the normal to unit length; comparable across
/// parallel halfspaces.
#[inline]
fn unit_offset<T: Scalar>(h: &Halfspace<T>) -> T {
    h.q / h.w.norm()
}

pub(crate) struct ChainIntersection<T> {
    /// Indices into the input list, in normal angle order.
    pub kept: Vec<usize>,
    /// Breakpoints between consecutive kept halfspaces, in chain order.
    pub corners: Vec<Vec2<T>>,
}

/// Core of the segment-cone intersection: sort by angle from `v1`, coalesce
/// parallel halfspaces keeping the strongest, then drop every halfspace whose
/// neighbors' breakpoint already satisfies it. The two extreme directions can
/// never be redundant, so the result always keeps them.
pub(crate) fn chain_intersection<T: Scalar>(
    hs: &[Halfspace<T>],
    base: &DualBase<T>,
    tol: &Tolerance<T>,
) -> Result<ChainIntersection<T>, Error> {
    if hs.is_empty() {
        return Err(Error::EmptyInput);
    }
    // Angles are measured in the segment's own orientation, so the sweep
    // order v1 -> v2 is ascending whichever way the segment turns.
    let sigma = if base.v1.cross(base.v2) < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let span = angle_from(base.v1, base.v2) * sigma;
    let slack = T::c(1e-9);
    let mut order: Vec<(T, usize)> = Vec::with_capacity(hs.len());
    for (i, h) in hs.iter().enumerate() {
        if h.w.norm() == T::zero() {
            return Err(Error::InvalidState("halfspace normal is zero"));
        }
        let a = angle_from(base.v1, h.w) * sigma;
        if a < -slack || a > span + slack {
            return Err(Error::InvalidState("halfspace normal outside dual segment"));
        }
        order.push((a, i));
    }
    order.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.1.cmp(&y.1))
    });

    // Coalesce runs of parallel normals, keeping the strongest constraint.
    let mut merged: Vec<usize> = Vec::with_capacity(order.len());
    for &(_, i) in &order {
        if let Some(&last) = merged.last() {
            if same_direction(hs[last].w, hs[i].w, tol) {
                if unit_offset(&hs[i]) > unit_offset(&hs[last]) {
                    *merged.last_mut().unwrap() = i;
                }
                continue;
            }
        }
        merged.push(i);
    }

    // Stack pass: a halfspace is redundant exactly when the breakpoint of its
    // neighbors lies inside it.
    let mut stack: Vec<usize> = Vec::with_capacity(merged.len());
    for &i in &merged {
        while stack.len() >= 2 {
            let t = stack[stack.len() - 1];
            let s = stack[stack.len() - 2];
            match Halfspace::boundary_intersection(&hs[s], &hs[i], tol.eps_rank) {
                Some(p) if hs[t].contains(p, tol.eps) => {
                    stack.pop();
                }
                _ => break,
            }
        }
        stack.push(i);
    }

    let mut corners = Vec::with_capacity(stack.len().saturating_sub(1));
    for pair in stack.windows(2) {
        if let Some(p) =
            Halfspace::boundary_intersection(&hs[pair[0]], &hs[pair[1]], tol.eps_rank)
        {
            corners.push(p);
        }
    }
    Ok(ChainIntersection { kept: stack, corners })
}

/// Intersection of halfspaces whose normals all lie in the dual base segment
/// of the cone spanned by `rec_dirs`. The result is a nonempty unbounded
/// polyhedron; when the input contains both extreme directions its recession
/// cone is exactly the given cone.
pub fn intersect_halfspaces<T: Scalar>(
    hs: &[Halfspace<T>],
    rec_dirs: (Vec2<T>, Vec2<T>),
    tol: Tolerance<T>,
) -> Result<Polyhedron<T>, Error> {
    let cone = Cone::with_tolerance(rec_dirs.0, rec_dirs.1, tol)?;
    let base = cone.dual_base();
    let chain = chain_intersection(hs, &base, &tol)?;
    let hrep = chain.kept.iter().map(|&i| hs[i]).collect();
    let mut vertices = chain.corners;
    sort_xy(&mut vertices);
    Ok(Polyhedron {
        hrep,
        vertices,
        rec_dirs: vec![rec_dirs.0, rec_dirs.1],
    })
}

/// Intersection of halfspaces whose normals positively span the plane, so the
/// result is bounded. Returns `None` when the intersection is empty. Feasible
/// breakpoints of pairs of boundary lines are the candidate vertices; a
/// halfspace stays in the minimal description when its boundary carries an
/// edge of the polygon (or touches the region at all, in the degenerate case
/// of a point or segment).
pub fn intersect_halfspaces_bounded<T: Scalar>(
    hs: &[Halfspace<T>],
    tol: Tolerance<T>,
) -> Result<Option<Polyhedron<T>>, Error> {
    if hs.is_empty() {
        return Err(Error::EmptyInput);
    }
    for h in hs {
        if h.w.norm() == T::zero() {
            return Err(Error::InvalidState("halfspace normal is zero"));
        }
    }

    // Drop parallel halfspaces dominated by a stronger one; on exact ties the
    // earliest stays.
    let mut live: Vec<usize> = Vec::new();
    'outer: for i in 0..hs.len() {
        for &j in &live {
            if same_direction(hs[j].w, hs[i].w, &tol) && unit_offset(&hs[j]) >= unit_offset(&hs[i])
            {
                continue 'outer;
            }
        }
        live.retain(|&j| {
            !(same_direction(hs[j].w, hs[i].w, &tol) && unit_offset(&hs[j]) < unit_offset(&hs[i]))
        });
        live.push(i);
    }

    let mut vertices: Vec<Vec2<T>> = Vec::new();
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            let Some(p) = Halfspace::boundary_intersection(&hs[i], &hs[j], tol.eps_rank) else {
                continue;
            };
            if !p.is_finite() {
                continue;
            }
            if live.iter().all(|&k| hs[k].contains(p, tol.eps)) {
                vertices.push(p);
            }
        }
    }
    if vertices.is_empty() {
        return Ok(None);
    }
    sort_xy(&mut vertices);
    vertices.dedup_by(|a, b| (a.x - b.x).abs() <= tol.eps && (a.y - b.y).abs() <= tol.eps);

    let tight = |h: &Halfspace<T>, v: Vec2<T>| {
        (h.w.dot(v) - h.q).abs() <= tol.eps * (T::one() + h.w.norm())
    };
    let degenerate = vertices.len() < 3;
    let mut kept: Vec<usize> = live
        .iter()
        .copied()
        .filter(|&i| {
            let n = vertices.iter().filter(|&&v| tight(&hs[i], v)).count();
            if degenerate {
                n >= 1
            } else {
                n >= 2
            }
        })
        .collect();
    kept.sort_by(|&a, &b| {
        let ta = hs[a].w.y.atan2(hs[a].w.x);
        let tb = hs[b].w.y.atan2(hs[b].w.x);
        ta.partial_cmp(&tb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    Ok(Some(Polyhedron {
        hrep: kept.into_iter().map(|i| hs[i]).collect(),
        vertices,
        rec_dirs: Vec::new(),
    }))
}
