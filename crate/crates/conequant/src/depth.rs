//! Cone location depth and the lower cone distribution function, computed
//! by sweeping the dual base segment with the query pinned to the moving
//! boundary. Halfspace depth and depth regions reuse the same sweeps over
//! three fixed segments whose conic spans cover every direction.

use rayon::prelude::*;

use crate::geometry::{
    intersect_halfspaces_bounded, Cone, DualBase, Polyhedron, Tolerance, Vec2,
};
use crate::quantile::{quantile_rank, sweep_segment};
use crate::sweep::{classify_against, critical_rotation, rotate_direction, sides_against, DataSet, Side};
use crate::{Error, Scalar};

/// Depth of a query point relative to an ordering cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthResult<T = f64> {
    /// Minimal count of sample points (query included) weakly below a
    /// boundary through the query, over the dual base segment.
    pub k: usize,
    /// Lower distribution value in `[0,1]`.
    pub f: T,
    /// Whether the query coincided with a sample point.
    pub z_was_original: bool,
    /// A direction attaining the minimal count.
    pub argmin_w: Vec2<T>,
}

/// Count of sample points weakly below the boundary through `z` with
/// normal `w`, inclusive within the default tolerance.
pub fn w_depth<T: Scalar>(z: Vec2<T>, data: &DataSet<T>, w: Vec2<T>) -> usize {
    let eps = Tolerance::<T>::default().eps;
    let t = w.dot(z);
    data.points().iter().filter(|x| x.dot(w) <= t + eps).count()
}

/// The sample with `z` appended unless an exact coordinate copy already
/// exists; ties anchor on the last copy.
fn augment<T: Scalar>(z: Vec2<T>, data: &DataSet<T>) -> (DataSet<T>, usize, bool) {
    match data
        .points()
        .iter()
        .rposition(|p| p.x == z.x && p.y == z.y)
    {
        Some(i) => (data.clone(), i, true),
        None => (data.appending(z), data.len(), false),
    }
}

/// Minimal weakly-below count over one segment for the point at `z_idx`,
/// with a direction attaining it.
///
/// Between consecutive visited directions the count is constant, and at a
/// visited direction the boundary-tied points split to both sides, so the
/// closed count there never undercuts the neighboring arcs. The minimum is
/// therefore the least arc count, except possibly at the far segment end,
/// which contributes its closed count.
pub(crate) fn sweep_depth_segment<T: Scalar>(
    points: &DataSet<T>,
    z_idx: usize,
    base: &DualBase<T>,
    tol: &Tolerance<T>,
) -> Result<(usize, Vec2<T>), Error> {
    let n = points.len();
    let vvals = points.scalarize(base.v2);
    let max_rotations = n * n.saturating_sub(1) / 2 + 2;
    let half = T::c(0.5);
    let mut sides: Vec<Side> = Vec::with_capacity(n);
    let mut w = base.v1;
    let mut rotations = 0usize;
    let mut best_k = usize::MAX;
    let mut best_w = base.v1;
    loop {
        let values = points.scalarize(w);
        let t = values[z_idx];
        let class = classify_against(&values, &vvals, t, tol.eps);
        let zpos = class
            .block
            .iter()
            .position(|&i| i == z_idx)
            .ok_or(Error::InvalidState("query point left its own tie block"))?;
        sides_against(&values, t, tol.eps, &class.block, zpos, &mut sides);
        let s_bar = critical_rotation(&values, &vvals, z_idx, &sides, tol)?;
        // Count on the open arc this rotation sweeps: points strictly below
        // plus tied points ordered before the query, plus the query itself.
        let k_arc = class.below + zpos + 1;
        if k_arc < best_k {
            best_k = k_arc;
            best_w = rotate_direction(w, base.v2, s_bar * half);
        }
        rotations += 1;
        if rotations > max_rotations {
            return Err(Error::InvalidState("rotation step budget exceeded"));
        }
        if s_bar >= T::one() {
            let values = points.scalarize(base.v2);
            let t = values[z_idx];
            let end = classify_against(&values, &vvals, t, tol.eps);
            let k_end = end.below + end.block.len();
            if k_end < best_k {
                best_k = k_end;
                best_w = base.v2;
            }
            break;
        }
        w = rotate_direction(w, base.v2, s_bar);
    }
    Ok((best_k, best_w))
}

/// Cone location depth of `z`: the query joins the sample (unless already
/// present) and the minimal weakly-below count over the dual base segment
/// is found by one sweep.
pub fn cone_depth<T: Scalar>(
    z: Vec2<T>,
    data: &DataSet<T>,
    cone: &Cone<T>,
) -> Result<DepthResult<T>, Error> {
    cone_depth_with(z, data, cone, Tolerance::default())
}

/// As [`cone_depth`] with explicit tolerances.
pub fn cone_depth_with<T: Scalar>(
    z: Vec2<T>,
    data: &DataSet<T>,
    cone: &Cone<T>,
    tol: Tolerance<T>,
) -> Result<DepthResult<T>, Error> {
    if !z.is_finite() {
        return Err(Error::OutOfRange { what: "query point" });
    }
    let base = cone.dual_base();
    let (aug, z_idx, z_was_original) = augment(z, data);
    let (k, argmin_w) = sweep_depth_segment(&aug, z_idx, &base, &tol)?;
    let n = aug.len();
    let f = if z_was_original {
        T::from_count(k) / T::from_count(n)
    } else {
        T::from_count(k - 1) / T::from_count(n - 1)
    };
    Ok(DepthResult {
        k,
        f,
        z_was_original,
        argmin_w,
    })
}

/// Lower cone distribution value at `z`.
pub fn cone_cdf<T: Scalar>(z: Vec2<T>, data: &DataSet<T>, cone: &Cone<T>) -> Result<T, Error> {
    Ok(cone_depth(z, data, cone)?.f)
}

/// As [`cone_cdf`] with explicit tolerances.
pub fn cone_cdf_with<T: Scalar>(
    z: Vec2<T>,
    data: &DataSet<T>,
    cone: &Cone<T>,
    tol: Tolerance<T>,
) -> Result<T, Error> {
    Ok(cone_depth_with(z, data, cone, tol)?.f)
}

/// The three fixed segments whose swept directions jointly cover the whole
/// circle; each spans less than a half turn, so the rotation stays linear.
pub fn tukey_segments<T: Scalar>() -> [DualBase<T>; 3] {
    let a = Vec2::new(-T::one(), -T::one());
    let b = Vec2::new(T::one(), -T::one());
    let c = Vec2::new(T::zero(), T::one());
    [
        DualBase { v1: a, v2: b },
        DualBase { v1: b, v2: c },
        DualBase { v1: a, v2: c },
    ]
}

/// Halfspace depth of `z` in the classical counting convention: the least
/// number of sample points in a closed halfplane whose boundary passes
/// through `z`. Three segment sweeps cover all directions.
pub fn tukey_depth<T: Scalar>(z: Vec2<T>, data: &DataSet<T>) -> usize {
    let tol = Tolerance::default();
    let (aug, z_idx, z_was_original) = augment(z, data);
    let m = tukey_segments::<T>()
        .iter()
        .map(|seg| {
            sweep_depth_segment(&aug, z_idx, seg, &tol)
                .expect("fixed segments are nondegenerate")
                .0
        })
        .min()
        .expect("three segments");
    if z_was_original {
        m
    } else {
        m - 1
    }
}

/// Halfspace depth region at level `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TukeyRegion<T = f64> {
    /// Rank `ceil(N p)` every direction must weakly cover.
    pub k: usize,
    /// The region, or `None` when it is empty.
    pub poly: Option<Polyhedron<T>>,
    /// Rotation steps summed over the three sweeps.
    pub steps: usize,
}

/// Region of points whose halfspace depth reaches `ceil(N p)`: quantile
/// sweeps over the three segments pool their supporting halfspaces, whose
/// normals positively span the plane, so the intersection is bounded and
/// possibly empty.
pub fn tukey_region<T: Scalar>(data: &DataSet<T>, p: T) -> Result<TukeyRegion<T>, Error> {
    tukey_region_with(data, p, Tolerance::default())
}

/// As [`tukey_region`] with explicit tolerances.
pub fn tukey_region_with<T: Scalar>(
    data: &DataSet<T>,
    p: T,
    tol: Tolerance<T>,
) -> Result<TukeyRegion<T>, Error> {
    let k = quantile_rank(data.len(), p)?;
    let mut pool = Vec::new();
    let mut steps = 0usize;
    for seg in tukey_segments::<T>() {
        let (facets, flags, trace) = sweep_segment(data, &seg, k, &tol)?;
        steps += trace.rotation_count();
        pool.extend(
            facets
                .iter()
                .zip(&flags)
                .filter(|(_, &keep)| keep)
                .map(|(f, _)| crate::geometry::Halfspace::new(f.w, f.q)),
        );
    }
    let poly = intersect_halfspaces_bounded(&pool, tol)?;
    Ok(TukeyRegion { k, poly, steps })
}

/// Distribution values for many query points at once.
///
/// Each sample point is weakly below the moving boundary on a closed
/// subinterval of the segment parameter, the count between consecutive
/// interval endpoints is constant, and endpoint directions never undercut
/// their neighboring arcs. So per query it suffices to sweep the sorted
/// endpoints once, taking the least open-gap coverage. This is much
/// cheaper than one full rotation sweep per query on large grids, and the
/// result equals [`cone_cdf`] at every point.
pub fn cdf_field<T: Scalar>(data: &DataSet<T>, cone: &Cone<T>, queries: &[Vec2<T>]) -> Vec<T> {
    cdf_field_with(data, cone, queries, Tolerance::default())
}

/// As [`cdf_field`] with explicit tolerances.
pub fn cdf_field_with<T: Scalar>(
    data: &DataSet<T>,
    cone: &Cone<T>,
    queries: &[Vec2<T>],
    _tol: Tolerance<T>,
) -> Vec<T> {
    let base = cone.dual_base();
    let n = data.len();
    let avals = data.scalarize(base.v1);
    let cvals = data.scalarize(base.v2);
    let nf = T::from_count(n);
    queries
        .par_iter()
        .map_init(
            || (Vec::<T>::new(), Vec::<T>::new()),
            |(ins, outs), &z| {
                let ta = base.v1.dot(z);
                let tc = base.v2.dot(z);
                let zero = T::zero();
                let one = T::one();
                // Points weakly below at both segment ends stay below
                // throughout; the others are below on [0, s] or [s, 1] where
                // s is the crossing of their linear margin.
                let mut always = 0usize;
                ins.clear();
                outs.clear();
                for i in 0..n {
                    let a = avals[i] - ta;
                    let c = cvals[i] - tc;
                    if a <= zero {
                        if c <= zero {
                            always += 1;
                        } else {
                            ins.push(a / (a - c));
                        }
                    } else if c <= zero {
                        outs.push(a / (a - c));
                    }
                }
                let by = |x: &T, y: &T| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal);
                ins.sort_unstable_by(by);
                outs.sort_unstable_by(by);
                // Open arcs between consecutive crossings have constant
                // coverage, and crossing directions themselves never fall
                // under their neighboring arcs; parameters closer than the
                // merge width count as one crossing.
                let merge = T::c(1e-12);
                let mut i_in = 0usize;
                let mut i_out = 0usize;
                let mut left = zero;
                let mut min_cov = usize::MAX;
                while i_in < ins.len() && ins[i_in] <= left + merge {
                    i_in += 1;
                }
                while i_out < outs.len() && outs[i_out] <= left + merge {
                    i_out += 1;
                }
                loop {
                    let mut next = one;
                    if let Some(&s) = ins.get(i_in) {
                        next = next.min(s);
                    }
                    if let Some(&s) = outs.get(i_out) {
                        next = next.min(s);
                    }
                    if next > left + merge {
                        min_cov = min_cov.min(always + (ins.len() - i_in) + i_out);
                    }
                    if next >= one - merge {
                        break;
                    }
                    while i_in < ins.len() && ins[i_in] <= next + merge {
                        i_in += 1;
                    }
                    while i_out < outs.len() && outs[i_out] <= next + merge {
                        i_out += 1;
                    }
                    left = next;
                }
                if min_cov == usize::MAX {
                    min_cov = always;
                }
                T::from_count(min_cov) / nf
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_cone_depth, oracle_tukey_depth};
    use rand::{Rng, SeedableRng};

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn data(points: &[(f64, f64)]) -> DataSet {
        DataSet::new(points.iter().map(|&(x, y)| v(x, y)).collect()).unwrap()
    }

    fn chain() -> DataSet {
        data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    }

    fn lattice_instance(rng: &mut rand_chacha::ChaCha8Rng, n: usize, m: i32) -> DataSet {
        DataSet::new(
            (0..n)
                .map(|_| v(rng.gen_range(0..=m) as f64, rng.gen_range(0..=m) as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn w_depth_examples() {
        assert_eq!(w_depth(v(1.0, 1.0), &chain(), v(1.0, 0.0)), 2);
        let two = data(&[(0.0, 2.0), (2.0, 0.0)]);
        assert_eq!(w_depth(v(2.0, 2.0), &two, v(0.5, 0.5)), 2);
        assert_eq!(w_depth(v(-1.0, -1.0), &two, v(0.5, 0.5)), 0);
    }

    #[test]
    fn depth_of_fresh_dominating_point() {
        let two = data(&[(0.0, 2.0), (2.0, 0.0)]);
        let r = cone_depth(v(2.0, 2.0), &two, &Cone::orthant()).unwrap();
        assert_eq!(r.k, 3);
        assert!(!r.z_was_original);
        assert_eq!(r.f, 1.0);
    }

    #[test]
    fn depth_of_fresh_dominated_point() {
        let two = data(&[(0.0, 2.0), (2.0, 0.0)]);
        let r = cone_depth(v(0.0, 0.0), &two, &Cone::orthant()).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.f, 0.0);
    }

    #[test]
    fn depth_of_original_chain_point() {
        let r = cone_depth(v(1.0, 1.0), &chain(), &Cone::orthant()).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.z_was_original);
        assert_eq!(r.f, 2.0 / 3.0);
    }

    #[test]
    fn cdf_formula_branches() {
        assert_eq!(cone_cdf(v(1.0, 1.0), &chain(), &Cone::orthant()).unwrap(), 2.0 / 3.0);
        // Fresh query: one point weakly below everywhere near the first
        // segment end, so the unaugmented minimum is 1 of 3.
        let r = cone_depth(v(3.0, 0.0), &chain(), &Cone::orthant()).unwrap();
        assert_eq!(r.k, 2);
        assert!(!r.z_was_original);
        assert_eq!(r.f, 1.0 / 3.0);
    }

    #[test]
    fn duplicates_anchor_on_last_copy() {
        let d = data(&[(1.0, 1.0), (0.0, 0.0), (1.0, 1.0)]);
        let r = cone_depth(v(1.0, 1.0), &d, &Cone::orthant()).unwrap();
        assert!(r.z_was_original);
        // Both copies and the dominated point count in every direction.
        assert_eq!(r.k, 3);
        assert_eq!(r.f, 1.0);
    }

    #[test]
    fn argmin_attains_the_minimum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let cone = Cone::orthant();
        let base = cone.dual_base();
        for _ in 0..60 {
            let n = rng.gen_range(2..12);
            let d = lattice_instance(&mut rng, n, 8);
            let z = v(rng.gen_range(0..=8) as f64, rng.gen_range(0..=8) as f64);
            let r = cone_depth(z, &d, &cone).unwrap();
            let mut aug: Vec<Vec2> = d.points().to_vec();
            if !r.z_was_original {
                aug.push(z);
            }
            let count_at = |w: Vec2| {
                let t = w.dot(z);
                aug.iter().filter(|x| x.dot(w) <= t + 1e-9).count()
            };
            assert_eq!(count_at(r.argmin_w), r.k, "argmin must attain the depth");
            for i in 0..=50 {
                let w = base.at(i as f64 / 50.0).unwrap();
                assert!(r.k <= count_at(w), "sampled direction beats the minimum");
            }
        }
    }

    #[test]
    fn unaugmented_depth_is_cone_monotone() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..80 {
            let n = rng.gen_range(2..15);
            let d = lattice_instance(&mut rng, n, 10);
            let cone = Cone::orthant();
            let z = v(rng.gen_range(-2..=12) as f64, rng.gen_range(-2..=12) as f64);
            let c = v(rng.gen_range(0..=4) as f64, rng.gen_range(0..=4) as f64);
            let a = cone_depth(z, &d, &cone).unwrap();
            let b = cone_depth(z + c, &d, &cone).unwrap();
            let ua = a.k - usize::from(!a.z_was_original);
            let ub = b.k - usize::from(!b.z_was_original);
            assert!(ub >= ua, "shift into the cone lowered the depth");
        }
    }

    #[test]
    fn matches_reference_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let cones = [
            Cone::orthant(),
            Cone::new(v(2.0, 1.0), v(-1.0, 2.0)).unwrap(),
            Cone::new(v(1.0, -1.0), v(1.0, 1.0)).unwrap(),
        ];
        for i in 0..60 {
            let n = rng.gen_range(3..14);
            let d = lattice_instance(&mut rng, n, 9);
            let cone = &cones[i % cones.len()];
            let z = v(rng.gen_range(0..=9) as f64, rng.gen_range(0..=9) as f64);
            let k = cone_depth(z, &d, cone).unwrap().k;
            assert_eq!(k, oracle_cone_depth(z, &d, cone).unwrap());
        }
    }

    #[test]
    fn distribution_value_is_affine_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for _ in 0..40 {
            let cone = loop {
                let b1 = v(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
                let b2 = v(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
                if let Ok(c) = Cone::new(b1, b2) {
                    break c;
                }
            };
            let map = cone.standardizer();
            let n = rng.gen_range(2..12);
            let d = lattice_instance(&mut rng, n, 8);
            let z = v(rng.gen_range(0..=8) as f64, rng.gen_range(0..=8) as f64);
            let r = cone_depth(z, &d, &cone).unwrap();
            let mapped = DataSet::new(d.points().iter().map(|&x| map.apply(x)).collect()).unwrap();
            let rs = cone_depth(map.apply(z), &mapped, &Cone::orthant()).unwrap();
            assert_eq!(r.k, rs.k, "integer depth must survive standardization");
            assert_eq!(r.z_was_original, rs.z_was_original);
        }
    }

    #[test]
    fn tukey_depth_examples() {
        let tri = data(&[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)]);
        assert_eq!(tukey_depth(v(0.0, 0.0), &tri), 1);
        assert_eq!(tukey_depth(v(1.0, 0.5), &tri), oracle_tukey_depth(v(1.0, 0.5), &tri));
        assert_eq!(tukey_depth(v(1.0, 0.5), &tri), 1);
        let single = data(&[(0.0, 0.0)]);
        assert_eq!(tukey_depth(v(0.0, 0.0), &single), 1);
        assert_eq!(tukey_depth(v(3.0, 3.0), &single), 0);
        let line = data(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(tukey_depth(v(1.0, 0.0), &line), 2);
    }

    #[test]
    fn tukey_depth_matches_circular_reference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..80 {
            let n = rng.gen_range(1..16);
            let d = lattice_instance(&mut rng, n, 9);
            let z = v(rng.gen_range(0..=9) as f64, rng.gen_range(0..=9) as f64);
            assert_eq!(tukey_depth(z, &d), oracle_tukey_depth(z, &d));
        }
    }

    #[test]
    fn tukey_region_of_square_corners() {
        let d = data(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        let r = tukey_region(&d, 0.25).unwrap();
        assert_eq!(r.k, 1);
        let poly = r.poly.expect("quarter level region is the square");
        assert_eq!(
            poly.vertices,
            vec![v(0.0, 0.0), v(0.0, 1.0), v(1.0, 0.0), v(1.0, 1.0)]
        );
        let deep = tukey_region(&d, 0.75).unwrap();
        assert_eq!(deep.k, 3);
        assert!(deep.poly.is_none(), "no point reaches depth 3 here");
    }

    #[test]
    fn tukey_region_of_single_point() {
        let d = data(&[(3.0, 7.0)]);
        let r = tukey_region(&d, 1.0).unwrap();
        let poly = r.poly.expect("the point itself has full depth");
        assert_eq!(poly.vertices, vec![v(3.0, 7.0)]);
    }

    #[test]
    fn tukey_region_facets_touch_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(67);
        for _ in 0..25 {
            let n = rng.gen_range(3..18);
            let d = lattice_instance(&mut rng, n, 10);
            let r = tukey_region(&d, 0.25).unwrap();
            let Some(poly) = r.poly else { continue };
            for h in &poly.hrep {
                let anchored = d
                    .points()
                    .iter()
                    .any(|&x| (h.w.dot(x) - h.q).abs() <= 1e-7 * (1.0 + h.w.norm()));
                assert!(anchored, "region facet must pass through a sample point");
            }
        }
    }

    #[test]
    fn region_membership_matches_pointwise_depth() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..15 {
            let n = rng.gen_range(3..12);
            let d = lattice_instance(&mut rng, n, 6);
            let k = quantile_rank(d.len(), 0.25).unwrap();
            let r = tukey_region(&d, 0.25).unwrap();
            for gx in -1..=7 {
                for gy in -1..=7 {
                    let z = v(gx as f64 + 0.5, gy as f64 + 0.5);
                    let inside = r.poly.as_ref().is_some_and(|p| p.contains(z, 1e-9));
                    assert_eq!(
                        inside,
                        tukey_depth(z, &d) >= k,
                        "region and pointwise depth disagree at {z:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn field_matches_single_point_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(83);
        let cones = [
            Cone::orthant(),
            Cone::new(v(3.0, 1.0), v(-1.0, 1.0)).unwrap(),
        ];
        for i in 0..20 {
            let n = rng.gen_range(2..14);
            let d = lattice_instance(&mut rng, n, 8);
            let cone = &cones[i % 2];
            let queries: Vec<Vec2> = (0..40)
                .map(|_| v(rng.gen_range(-2..=10) as f64, rng.gen_range(-2..=10) as f64))
                .collect();
            let field = cdf_field(&d, cone, &queries);
            for (&z, &fv) in queries.iter().zip(&field) {
                let reference = cone_cdf(z, &d, cone).unwrap();
                assert!(
                    (fv - reference).abs() <= 1e-12,
                    "field value {fv} differs from {reference} at {z:?}"
                );
            }
        }
    }

    #[test]
    fn segments_cover_all_directions() {
        let segs = tukey_segments::<f64>();
        for i in 0..360 {
            let a = (i as f64).to_radians();
            let w = v(a.cos(), a.sin());
            let covered = segs.iter().any(|seg| {
                // w lies in the conic span of the segment ends
                let det = seg.v1.cross(seg.v2);
                let s = w.cross(seg.v2) / det;
                let t = seg.v1.cross(w) / det;
                s >= -1e-12 && t >= -1e-12
            });
            assert!(covered, "direction {i} degrees not covered");
        }
    }
}
