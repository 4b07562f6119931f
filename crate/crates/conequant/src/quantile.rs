//! Set-valued lower quantiles. A sweep of the dual base segment collects
//! one supporting halfspace per visited direction; interior directions
//! whose weak lower count equals the rank contribute nothing and are
//! dropped, and a final geometric pass removes the remaining redundancy.

use crate::geometry::poly::{chain_intersection, sort_xy};
use crate::geometry::{Cone, DualBase, Halfspace, Polyhedron, Tolerance, Vec2};
use crate::sweep::{
    classify_against, critical_rotation, index_sort, rotate_direction, sides_against, DataSet,
    Side,
};
use crate::{Error, Scalar};

/// Rank `ceil(N p)` for a level `p` in `(0, 1]`, with products snapped to
/// the nearest integer first so that levels like `0.1 * 10` do not round
/// up to 2.
pub fn quantile_rank<T: Scalar>(n: usize, p: T) -> Result<usize, Error> {
    // partial_cmp so that NaN lands in the error branch too
    let positive = p.partial_cmp(&T::zero()) == Some(core::cmp::Ordering::Greater);
    if !positive || p > T::one() {
        return Err(Error::OutOfRange { what: "quantile level" });
    }
    let np = p * T::from_count(n);
    let r = np.round();
    let k = if (np - r).abs() <= T::c(1e-9) * (T::one() + np.abs()) {
        r
    } else {
        np.ceil()
    };
    Ok(k.to_usize().unwrap_or(1).clamp(1, n))
}

/// Supporting halfspace of the level set in one direction: `w . z >= q`
/// with `q` the rank-th smallest scalarization, anchored on the data point
/// attaining it.
pub fn w_quantile<T: Scalar>(data: &DataSet<T>, w: Vec2<T>, p: T) -> Result<Halfspace<T>, Error> {
    if !w.is_finite() || w.norm() == T::zero() {
        return Err(Error::OutOfRange { what: "direction" });
    }
    let k = quantile_rank(data.len(), p)?;
    let values = data.scalarize(w);
    let pi = index_sort(&values);
    Ok(Halfspace::new(w, values[pi.as_slice()[k - 1]]))
}

/// One supporting halfspace produced by the sweep, with the index of the
/// data point on its boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileFacet<T = f64> {
    pub w: Vec2<T>,
    pub q: T,
    pub anchor_index: usize,
}

/// Lower quantile at level `p`: the set of points whose cone distribution
/// value reaches `p`, a convex polyhedron whose recession cone is the
/// ordering cone.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileResult<T = f64> {
    pub p: T,
    pub k: usize,
    pub poly: Polyhedron<T>,
    /// Facets surviving the geometric redundancy pass, in sweep order.
    pub normals: Vec<QuantileFacet<T>>,
}

/// One visited direction of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStep<T = f64> {
    pub w: Vec2<T>,
    /// Rotation parameter leaving this direction; `None` on the final one.
    pub s_bar: Option<T>,
    /// Points weakly below the anchor's boundary line.
    pub le_count: usize,
    /// False exactly when an interior direction had `le_count` equal to
    /// the rank and was discarded.
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrace<T = f64> {
    pub steps: Vec<SweepStep<T>>,
}

impl<T: Scalar> SweepTrace<T> {
    /// Number of rotation steps performed (one less than directions
    /// visited).
    pub fn rotation_count(&self) -> usize {
        self.steps.iter().filter(|s| s.s_bar.is_some()).count()
    }
}

/// Facet candidates, their survival flags, and the sweep trace.
pub(crate) type SweptFacets<T> = (Vec<QuantileFacet<T>>, Vec<bool>, SweepTrace<T>);

/// Full sweep of one segment: every visited direction yields a facet
/// candidate anchored on the rank-th point of its ordering. Returned
/// flags mark candidates that survive the count-based removal; both
/// segment ends always do.
pub(crate) fn sweep_segment<T: Scalar>(
    data: &DataSet<T>,
    base: &DualBase<T>,
    k: usize,
    tol: &Tolerance<T>,
) -> Result<SweptFacets<T>, Error> {
    let n = data.len();
    debug_assert!(k >= 1 && k <= n);
    let vvals = data.scalarize(base.v2);
    let max_rotations = n * n.saturating_sub(1) / 2 + 2;
    let mut facets: Vec<QuantileFacet<T>> = Vec::new();
    let mut flags: Vec<bool> = Vec::new();
    let mut steps: Vec<SweepStep<T>> = Vec::new();
    let mut scratch: Vec<T> = Vec::with_capacity(n);
    let mut sides: Vec<Side> = Vec::with_capacity(n);
    let mut w = base.v1;
    let mut rotations = 0usize;
    let mut first = true;
    let mut at_end = false;
    loop {
        let values = data.scalarize(w);
        scratch.clone_from(&values);
        let q_sel = *scratch
            .select_nth_unstable_by(k - 1, |a, b| {
                a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
            })
            .1;
        let class = classify_against(&values, &vvals, q_sel, tol.eps);
        if class.below > k - 1 || k - 1 - class.below >= class.block.len() {
            return Err(Error::InvalidState("rank selection disagrees with tie block"));
        }
        let anchor_block_pos = k - 1 - class.below;
        let anchor = class.block[anchor_block_pos];
        let le_count = class.below + class.block.len();
        let facet = QuantileFacet {
            w,
            q: values[anchor],
            anchor_index: anchor,
        };
        if at_end {
            facets.push(facet);
            flags.push(true);
            steps.push(SweepStep {
                w,
                s_bar: None,
                le_count,
                kept: true,
            });
            break;
        }
        let kept = first || le_count != k;
        sides_against(&values, q_sel, tol.eps, &class.block, anchor_block_pos, &mut sides);
        let s_bar = critical_rotation(&values, &vvals, anchor, &sides, tol)?;
        facets.push(facet);
        flags.push(kept);
        steps.push(SweepStep {
            w,
            s_bar: Some(s_bar),
            le_count,
            kept,
        });
        rotations += 1;
        if rotations > max_rotations {
            return Err(Error::InvalidState("rotation step budget exceeded"));
        }
        if s_bar >= T::one() {
            at_end = true;
        }
        w = rotate_direction(w, base.v2, s_bar);
        first = false;
    }
    Ok((facets, flags, SweepTrace { steps }))
}

/// Lower quantile of the sample at level `p` for an ordering cone, with
/// the trace of the sweep that produced it.
pub fn cone_quantile<T: Scalar>(
    data: &DataSet<T>,
    cone: &Cone<T>,
    p: T,
) -> Result<(QuantileResult<T>, SweepTrace<T>), Error> {
    cone_quantile_with(data, cone, p, Tolerance::default())
}

/// As [`cone_quantile`] with explicit tolerances.
pub fn cone_quantile_with<T: Scalar>(
    data: &DataSet<T>,
    cone: &Cone<T>,
    p: T,
    tol: Tolerance<T>,
) -> Result<(QuantileResult<T>, SweepTrace<T>), Error> {
    let k = quantile_rank(data.len(), p)?;
    let base = cone.dual_base();
    let (facets, flags, trace) = sweep_segment(data, &base, k, &tol)?;
    let survivors: Vec<QuantileFacet<T>> = facets
        .into_iter()
        .zip(&flags)
        .filter_map(|(f, &keep)| keep.then_some(f))
        .collect();
    let hs: Vec<Halfspace<T>> = survivors.iter().map(|f| Halfspace::new(f.w, f.q)).collect();
    let chain = chain_intersection(&hs, &base, &tol)?;
    let hrep: Vec<Halfspace<T>> = chain.kept.iter().map(|&i| hs[i]).collect();
    let normals: Vec<QuantileFacet<T>> = chain.kept.iter().map(|&i| survivors[i]).collect();
    let mut vertices = chain.corners;
    sort_xy(&mut vertices);
    Ok((
        QuantileResult {
            p,
            k,
            poly: Polyhedron {
                hrep,
                vertices,
                rec_dirs: vec![cone.b1(), cone.b2()],
            },
            normals,
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_quantile_membership;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn data(points: &[(f64, f64)]) -> DataSet {
        DataSet::new(points.iter().map(|&(x, y)| v(x, y)).collect()).unwrap()
    }

    fn chain() -> DataSet {
        data(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(quantile_rank::<f64>(3, 2.0 / 3.0).unwrap(), 2);
        assert_eq!(quantile_rank::<f64>(8, 0.125).unwrap(), 1);
        assert_eq!(quantile_rank::<f64>(10, 0.1).unwrap(), 1);
        assert_eq!(quantile_rank::<f64>(5, 0.21).unwrap(), 2);
        assert_eq!(quantile_rank::<f64>(7, 1.0).unwrap(), 7);
        assert!(quantile_rank::<f64>(7, 0.0).is_err());
        assert!(quantile_rank::<f64>(7, -0.5).is_err());
        assert!(quantile_rank::<f64>(7, 1.0 + 1e-6).is_err());
    }

    #[test]
    fn w_quantile_examples() {
        let h = w_quantile(&chain(), v(1.0, 0.0), 2.0 / 3.0).unwrap();
        assert_eq!(h.w, v(1.0, 0.0));
        assert_eq!(h.q, 1.0);

        let d = data(&[(0.0, 2.0), (2.0, 0.0)]);
        let h = w_quantile(&d, v(0.5, 0.5), 0.5).unwrap();
        assert_eq!(h.q, 1.0);

        let single = data(&[(3.0, 7.0)]);
        let w = v(0.3, 1.7);
        let h = w_quantile(&single, w, 1.0).unwrap();
        assert_eq!(h.q, w.dot(v(3.0, 7.0)));

        assert!(w_quantile(&single, v(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn chain_quantile_is_point_plus_cone() {
        let (res, trace) = cone_quantile(&chain(), &Cone::orthant(), 2.0 / 3.0).unwrap();
        assert_eq!(res.k, 2);
        assert_eq!(res.poly.hrep.len(), 2);
        assert_eq!(res.poly.vertices, vec![v(1.0, 1.0)]);
        // Interior directions all carry exactly k points weakly below.
        for s in &trace.steps[1..trace.steps.len() - 1] {
            assert!(!s.kept);
            assert_eq!(s.le_count, 2);
        }
        for f in &res.normals {
            assert_eq!(f.anchor_index, 1);
        }
    }

    #[test]
    fn two_point_median_sweep() {
        let d = data(&[(0.0, 2.0), (2.0, 0.0)]);
        let (res, trace) = cone_quantile(&d, &Cone::orthant(), 0.5).unwrap();
        assert_eq!(res.k, 1);
        assert_eq!(res.poly.hrep.len(), 3);
        assert_eq!(res.poly.vertices, vec![v(0.0, 2.0), v(2.0, 0.0)]);
        assert_eq!(trace.rotation_count(), 2);
        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.steps[0].w, v(0.0, 1.0));
        assert_eq!(trace.steps[1].w, v(0.5, 0.5));
        assert_eq!(trace.steps[2].w, v(1.0, 0.0));
        assert_eq!(trace.steps[1].le_count, 2);
        assert!(trace.steps[1].kept);
        // The diagonal facet is the segment between the two points.
        let mid = &res.poly.hrep[1];
        assert!((mid.w.dot(v(0.0, 2.0)) - mid.q).abs() < 1e-12);
        assert!((mid.w.dot(v(2.0, 0.0)) - mid.q).abs() < 1e-12);
    }

    #[test]
    fn single_point_full_level() {
        let d = data(&[(3.0, 7.0)]);
        let (res, trace) = cone_quantile(&d, &Cone::orthant(), 1.0).unwrap();
        assert_eq!(res.k, 1);
        assert_eq!(res.poly.vertices, vec![v(3.0, 7.0)]);
        assert_eq!(res.poly.hrep.len(), 2);
        assert_eq!(trace.rotation_count(), 1);
    }

    #[test]
    fn full_level_anchors_on_maxima() {
        let (res, _) = cone_quantile(&chain(), &Cone::orthant(), 1.0).unwrap();
        assert_eq!(res.k, 3);
        assert_eq!(res.poly.vertices, vec![v(2.0, 2.0)]);
        assert_eq!(res.poly.hrep.len(), 2);
        for f in &res.normals {
            assert_eq!(f.anchor_index, 2);
        }
    }

    #[test]
    fn duplicates_collapse_to_point_region() {
        let d = data(&[(1.0, 1.0), (1.0, 1.0), (2.0, 0.0)]);
        let (res, _) = cone_quantile(&d, &Cone::orthant(), 2.0 / 3.0).unwrap();
        assert_eq!(res.k, 2);
        assert_eq!(res.poly.vertices, vec![v(1.0, 1.0)]);
        assert_eq!(res.poly.hrep.len(), 2);
    }

    #[test]
    fn staircase_antichain_collapses_to_three_facets() {
        // Eight points on one line: every pair blocks at the same rotation,
        // so the sweep meets one interior direction carrying all of them.
        let d = data(&[
            (0.0, 7.0),
            (1.0, 6.0),
            (2.0, 5.0),
            (3.0, 4.0),
            (4.0, 3.0),
            (5.0, 2.0),
            (6.0, 1.0),
            (7.0, 0.0),
        ]);
        let (res, trace) = cone_quantile(&d, &Cone::orthant(), 0.125).unwrap();
        assert_eq!(res.k, 1);
        assert_eq!(res.poly.hrep.len(), 3);
        assert_eq!(res.poly.vertices, vec![v(0.0, 7.0), v(7.0, 0.0)]);
        assert_eq!(trace.rotation_count(), 2);
    }

    #[test]
    fn convex_antichain_keeps_every_facet() {
        // Strictly convex anti-chain: each consecutive pair blocks at its
        // own rotation, giving the worst case of N+1 facets.
        let pts: Vec<(f64, f64)> = (0..8).map(|i| (i as f64, ((7 - i) * (7 - i)) as f64)).collect();
        let d = data(&pts);
        let (res, trace) = cone_quantile(&d, &Cone::orthant(), 0.125).unwrap();
        assert_eq!(res.k, 1);
        assert_eq!(res.poly.hrep.len(), 9);
        assert_eq!(res.poly.vertices.len(), 8);
        assert_eq!(trace.rotation_count(), 8);
    }

    #[test]
    fn trace_endpoints_are_segment_ends() {
        let d = data(&[(0.0, 3.0), (1.0, 1.0), (4.0, 0.0), (2.0, 2.0)]);
        let cone = Cone::new(v(2.0, 1.0), v(-1.0, 3.0)).unwrap();
        let base = cone.dual_base();
        let (_, trace) = cone_quantile(&d, &cone, 0.5).unwrap();
        assert_eq!(trace.steps.first().unwrap().w, base.v1);
        assert_eq!(trace.steps.last().unwrap().w, base.v2);
        assert!(trace.steps.last().unwrap().s_bar.is_none());
    }

    #[test]
    fn every_facet_is_anchored_on_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..80 {
            let n = rng.gen_range(1..15usize);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64))
                .collect();
            let d = data(&pts);
            let p = rng.gen_range(0.05..=1.0f64);
            let (res, _) = cone_quantile(&d, &Cone::orthant(), p).unwrap();
            assert_eq!(res.poly.hrep.len(), res.normals.len());
            for (h, f) in res.poly.hrep.iter().zip(&res.normals) {
                let x = d.point(f.anchor_index);
                assert!(
                    (h.w.dot(x) - h.q).abs() <= 1e-9,
                    "facet boundary misses its anchor"
                );
            }
        }
    }

    #[test]
    fn rank_one_region_contains_everything_shifted_up() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..12usize);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..8) as f64, rng.gen_range(0..8) as f64))
                .collect();
            let d = data(&pts);
            let p = 1.0 / n as f64;
            let (res, _) = cone_quantile(&d, &Cone::orthant(), p).unwrap();
            // Upper-set property: any data point shifted into the cone stays in.
            for &(x, y) in &pts {
                assert!(res.poly.contains(v(x, y), 1e-9));
                let shift = v(
                    x + rng.gen_range(0.0..3.0),
                    y + rng.gen_range(0.0..3.0),
                );
                assert!(res.poly.contains(shift, 1e-9));
            }
        }
    }

    #[test]
    fn nested_levels() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..30 {
            let n = rng.gen_range(3..14usize);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..12) as f64, rng.gen_range(0..12) as f64))
                .collect();
            let d = data(&pts);
            let mut prev: Option<QuantileResult> = None;
            for p in [0.2, 0.5, 0.8] {
                let (res, _) = cone_quantile(&d, &Cone::orthant(), p).unwrap();
                if let Some(looser) = &prev {
                    for &vert in &res.poly.vertices {
                        assert!(
                            looser.poly.contains(vert, 1e-7),
                            "higher level must nest inside lower"
                        );
                    }
                }
                prev = Some(res);
            }
        }
    }

    #[test]
    fn membership_matches_reference_counting() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(59);
        let cone = Cone::orthant();
        for _ in 0..25 {
            let n = rng.gen_range(2..10usize);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..7) as f64, rng.gen_range(0..7) as f64))
                .collect();
            let d = data(&pts);
            let p = rng.gen_range(0.1..=1.0f64);
            let (res, _) = cone_quantile(&d, &cone, p).unwrap();
            for _ in 0..30 {
                let z = v(rng.gen_range(-1..9) as f64 + 0.5, rng.gen_range(-1..9) as f64 + 0.5);
                let inside = res.poly.contains(z, 1e-9);
                let reference = oracle_quantile_membership(z, &d, &cone, p).unwrap();
                assert_eq!(inside, reference, "membership mismatch at {z:?} p={p}");
            }
        }
    }

    #[test]
    fn rotation_budget_holds() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let n = rng.gen_range(2..16usize);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0..9) as f64, rng.gen_range(0..9) as f64))
                .collect();
            let d = data(&pts);
            let p = rng.gen_range(0.05..=1.0f64);
            let (_, trace) = cone_quantile(&d, &Cone::orthant(), p).unwrap();
            assert!(trace.rotation_count() <= n * (n - 1) / 2 + 2);
        }
    }

    #[test]
    fn affine_equivariance_against_standardized_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
        for _ in 0..25 {
            let cone = loop {
                let b1 = v(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
                let b2 = v(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
                if let Ok(c) = Cone::new(b1, b2) {
                    break c;
                }
            };
            let map = cone.standardizer();
            let n = rng.gen_range(2..10usize);
            let pts: Vec<Vec2> = (0..n)
                .map(|_| v(rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64))
                .collect();
            let d = DataSet::new(pts.clone()).unwrap();
            let mapped = DataSet::new(pts.iter().map(|&x| map.apply(x)).collect()).unwrap();
            let p = rng.gen_range(0.1..=1.0f64);
            let (res, _) = cone_quantile(&d, &cone, p).unwrap();
            let (std_res, _) = cone_quantile(&mapped, &Cone::orthant(), p).unwrap();
            assert_eq!(res.k, std_res.k);
            assert_eq!(res.poly.vertices.len(), std_res.poly.vertices.len());
            let mut image: Vec<Vec2> = res.poly.vertices.iter().map(|&x| map.apply(x)).collect();
            sort_xy(&mut image);
            for (a, b) in image.iter().zip(&std_res.poly.vertices) {
                assert!((*a - *b).norm() <= 1e-8, "vertex image mismatch");
            }
        }
    }
}
