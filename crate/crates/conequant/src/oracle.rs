//! Brute-force reference evaluators. They exhaust candidate directions
//! instead of sweeping, so they share no logic with the rotation
//! algorithms and serve as an independent check in the test suite. Costs
//! are cubic; keep inputs small (N up to about 50).

use crate::geometry::{Cone, DualBase, Tolerance, Vec2};
use crate::sweep::DataSet;
use crate::{Error, Scalar};

/// Directions along a dual base segment at which a halfspace count can
/// change, plus one direction inside every open arc between them. The
/// count of points weakly below a moving boundary is piecewise constant
/// in the segment parameter and only jumps where the boundary crosses a
/// pair difference, so evaluating at these directions finds the true
/// minimum over the whole segment.
#[derive(Debug, Clone)]
pub struct CandidateDirections<T = f64> {
    pub directions: Vec<Vec2<T>>,
}

impl<T: Scalar> CandidateDirections<T> {
    /// Candidates from every pair difference of `points`.
    pub fn for_points(points: &[Vec2<T>], base: &DualBase<T>) -> Self {
        let mut params = vec![T::zero(), T::one()];
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                push_crossing(&mut params, base, a - b);
            }
        }
        Self::from_params(params, base)
    }

    /// Candidates from differences against a single query point. Counts
    /// relative to `z` can only change where the boundary sweeps through
    /// some `x - z`, so this smaller set suffices for membership tests.
    pub fn for_query(z: Vec2<T>, data: &DataSet<T>, base: &DualBase<T>) -> Self {
        let mut params = vec![T::zero(), T::one()];
        for &x in data.points() {
            push_crossing(&mut params, base, x - z);
        }
        Self::from_params(params, base)
    }

    fn from_params(mut params: Vec<T>, base: &DualBase<T>) -> Self {
        params.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        params.dedup_by(|a, b| (*a - *b).abs() <= T::c(1e-12));
        let two = T::c(2.0);
        let mids: Vec<T> = params.windows(2).map(|w| (w[0] + w[1]) / two).collect();
        params.extend(mids);
        let directions = params
            .into_iter()
            .map(|s| base.at(s).expect("parameter stays inside the segment"))
            .collect();
        Self { directions }
    }
}

/// Records `s` with `w(s)` orthogonal to `d`, if that happens strictly
/// inside the segment.
fn push_crossing<T: Scalar>(params: &mut Vec<T>, base: &DualBase<T>, d: Vec2<T>) {
    let a = base.v1.dot(d);
    let c = base.v2.dot(d);
    let zero = T::zero();
    if (a > zero && c < zero) || (a < zero && c > zero) {
        let s = a / (a - c);
        if s.is_finite() && s > zero && s < T::one() {
            params.push(s);
        }
    }
}

fn closed_count<T: Scalar>(points: &[Vec2<T>], w: Vec2<T>, z: Vec2<T>, eps: T) -> usize {
    let t = w.dot(z);
    points.iter().filter(|p| p.dot(w) <= t + eps).count()
}

/// Minimum over the dual base segment of the number of points of
/// `X union {z}` weakly below the boundary through `z`. Exhaustive
/// counterpart of the sweep-based depth; exact on well-separated inputs.
pub fn oracle_cone_depth<T: Scalar>(
    z: Vec2<T>,
    data: &DataSet<T>,
    cone: &Cone<T>,
) -> Result<usize, Error> {
    let base = cone.dual_base();
    let mut points = data.points().to_vec();
    if !points.iter().any(|&p| p.x == z.x && p.y == z.y) {
        points.push(z);
    }
    let eps = Tolerance::<T>::default().eps;
    let cands = CandidateDirections::for_points(&points, &base);
    Ok(cands
        .directions
        .iter()
        .map(|&w| closed_count(&points, w, z, eps))
        .min()
        .expect("candidate set is never empty"))
}

/// Whether `z` lies in the level set at `p`: the minimal count of data
/// points weakly below the boundary through `z`, over the whole segment,
/// reaches the rank `ceil(N p)`. The query point itself is never counted.
pub fn oracle_quantile_membership<T: Scalar>(
    z: Vec2<T>,
    data: &DataSet<T>,
    cone: &Cone<T>,
    p: T,
) -> Result<bool, Error> {
    let k = rank(data.len(), p)?;
    let base = cone.dual_base();
    let eps = Tolerance::<T>::default().eps;
    let cands = CandidateDirections::for_query(z, data, &base);
    let min_count = cands
        .directions
        .iter()
        .map(|&w| closed_count(data.points(), w, z, eps))
        .min()
        .expect("candidate set is never empty");
    Ok(min_count >= k)
}

/// Halfspace depth of `z` by a full circular scan: every direction
/// orthogonal to some `x - z` splits the circle into arcs on which the
/// closed-halfplane count is constant, and boundary directions never beat
/// both neighboring arcs, so arc midpoints cover the minimum.
pub fn oracle_tukey_depth<T: Scalar>(z: Vec2<T>, data: &DataSet<T>) -> usize {
    let eps = Tolerance::<T>::default().eps;
    let mut angles: Vec<T> = Vec::new();
    let tau = T::c(std::f64::consts::TAU);
    for &x in data.points() {
        let d = x - z;
        if d.norm() <= eps {
            continue;
        }
        let theta = d.y.atan2(d.x);
        for quarter in [T::c(std::f64::consts::FRAC_PI_2), T::c(-std::f64::consts::FRAC_PI_2)] {
            let mut a = (theta + quarter) % tau;
            if a < T::zero() {
                a += tau;
            }
            angles.push(a);
        }
    }
    if angles.is_empty() {
        return closed_count(data.points(), Vec2::new(T::one(), T::zero()), z, eps);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    angles.dedup_by(|a, b| (*a - *b).abs() <= T::c(1e-12));
    let two = T::c(2.0);
    let mut probes = angles.clone();
    for w in angles.windows(2) {
        probes.push((w[0] + w[1]) / two);
    }
    let first = angles[0];
    let last = angles[angles.len() - 1];
    probes.push((last + first + tau) / two);
    probes
        .into_iter()
        .map(|a| closed_count(data.points(), Vec2::new(a.cos(), a.sin()), z, eps))
        .min()
        .expect("probe set is never empty")
}

fn rank<T: Scalar>(n: usize, p: T) -> Result<usize, Error> {
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
    let k = k.to_usize().unwrap_or(1);
    Ok(k.clamp(1, n))
}
