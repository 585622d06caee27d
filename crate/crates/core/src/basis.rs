//! Thin-plate-spline bases over two-dimensional domains.
//!
//! The same machinery serves two domains: wavelength x day-of-year for the
//! reflectance surfaces, and planar coordinates for the spatial random
//! effect. Inputs are affinely standardized to the unit square before any
//! radial function is evaluated, so basis entries do not depend on the
//! original units.

use ndarray::Array2;

use crate::{Error, Result};

/// Min/max per axis used to standardize raw coordinates to `[0,1]^2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DomainBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl DomainBounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        for v in [x_min, x_max, y_min, y_max] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "domain bound".into(),
                    value: v,
                });
            }
        }
        if x_min >= x_max {
            return Err(Error::DegenerateBounds {
                axis: 'x',
                value: x_min,
            });
        }
        if y_min >= y_max {
            return Err(Error::DegenerateBounds {
                axis: 'y',
                value: y_min,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Bounding box of a point cloud.
    pub fn from_points(points: &[[f64; 2]]) -> Result<Self> {
        check_finite_points(points)?;
        let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for p in points {
            b[0] = b[0].min(p[0]);
            b[1] = b[1].max(p[0]);
            b[2] = b[2].min(p[1]);
            b[3] = b[3].max(p[1]);
        }
        Self::new(b[0], b[1], b[2], b[3])
    }

    #[inline]
    pub fn standardize(&self, p: [f64; 2]) -> [f64; 2] {
        [
            (p[0] - self.x_min) / (self.x_max - self.x_min),
            (p[1] - self.y_min) / (self.y_max - self.y_min),
        ]
    }

    pub fn x_range(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn y_range(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// Knot locations in standardized coordinates together with the bounds that
/// map raw points into the same coordinates.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KnotSet {
    knots: Vec<[f64; 2]>,
    pub domain_bounds: DomainBounds,
}

impl KnotSet {
    /// `knots` are already standardized; rejects knots outside the unit
    /// square and duplicate locations.
    pub fn new(knots: Vec<[f64; 2]>, domain_bounds: DomainBounds) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Config("knot set must not be empty".into()));
        }
        for k in &knots {
            if !(k[0].is_finite() && k[1].is_finite()) {
                return Err(Error::NonFinitePoints {
                    ids: format!("knot ({}, {})", k[0], k[1]),
                });
            }
            if !(0.0..=1.0).contains(&k[0]) || !(0.0..=1.0).contains(&k[1]) {
                return Err(Error::Config(format!(
                    "knot ({}, {}) outside the standardized domain [0,1]^2",
                    k[0], k[1]
                )));
            }
        }
        for i in 0..knots.len() {
            for j in (i + 1)..knots.len() {
                if knots[i] == knots[j] {
                    return Err(Error::DuplicateKnot {
                        x: knots[i][0],
                        y: knots[i][1],
                    });
                }
            }
        }
        Ok(Self {
            knots,
            domain_bounds,
        })
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn knots(&self) -> &[[f64; 2]] {
        &self.knots
    }
}

/// Basis matrix with row identifiers for error reporting and joins.
#[derive(Debug, Clone)]
pub struct BasisMatrix {
    pub values: Array2<f64>,
    pub point_ids: Vec<String>,
}

/// Split a total knot count into per-axis counts whose product is the total,
/// as close to square as the divisors allow. The axis with the larger raw
/// range receives the larger count; ties go to the y axis.
pub fn split_knot_counts(total: usize, x_range: f64, y_range: f64) -> (usize, usize) {
    assert!(total >= 1, "knot total must be positive");
    let mut small = 1;
    let mut d = 1;
    while d * d <= total {
        if total % d == 0 {
            small = d;
        }
        d += 1;
    }
    let large = total / small;
    if x_range > y_range {
        (large, small)
    } else {
        (small, large)
    }
}

/// Knots at the centers of an equal-area `count_x x count_y` partition of the
/// bounds, stored in standardized coordinates.
pub fn make_regular_knots(bounds: DomainBounds, count_x: usize, count_y: usize) -> Result<KnotSet> {
    if count_x == 0 || count_y == 0 {
        return Err(Error::Config(format!(
            "knot counts must be positive, got ({count_x}, {count_y})"
        )));
    }
    let mut knots = Vec::with_capacity(count_x * count_y);
    for ix in 0..count_x {
        for iy in 0..count_y {
            knots.push([
                (ix as f64 + 0.5) / count_x as f64,
                (iy as f64 + 0.5) / count_y as f64,
            ]);
        }
    }
    KnotSet::new(knots, bounds)
}

/// Knots at the Cartesian product of per-axis empirical quantiles taken at
/// levels `(i - 0.5) / count`. Bounds come from the data's min/max.
pub fn make_quantile_knots(points: &[[f64; 2]], count_x: usize, count_y: usize) -> Result<KnotSet> {
    if count_x == 0 || count_y == 0 {
        return Err(Error::Config(format!(
            "knot counts must be positive, got ({count_x}, {count_y})"
        )));
    }
    let bounds = DomainBounds::from_points(points)?;
    let qx = axis_quantiles(points.iter().map(|p| p[0]), 'x', count_x)?;
    let qy = axis_quantiles(points.iter().map(|p| p[1]), 'y', count_y)?;
    let mut knots = Vec::with_capacity(count_x * count_y);
    for &x in &qx {
        for &y in &qy {
            knots.push(bounds.standardize([x, y]));
        }
    }
    KnotSet::new(knots, bounds)
}

fn axis_quantiles(values: impl Iterator<Item = f64>, axis: char, count: usize) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut distinct = usize::from(!v.is_empty());
    for w in v.windows(2) {
        if w[0] != w[1] {
            distinct += 1;
        }
    }
    if distinct < count {
        return Err(Error::TooFewDistinctCoordinates {
            axis,
            distinct,
            requested: count,
        });
    }
    Ok((1..=count)
        .map(|i| crate::math::quantile_sorted(&v, (i as f64 - 0.5) / count as f64))
        .collect())
}

/// Radial function `phi(r) = r^2 log r`, with the defined limit `phi(0) = 0`.
#[inline]
pub fn tps_phi(r: f64) -> f64 {
    if r > 0.0 {
        r * r * r.ln()
    } else {
        0.0
    }
}

#[inline]
fn tps_row(out: &mut [f64], p: [f64; 2], knots: &[[f64; 2]]) {
    for (o, k) in out.iter_mut().zip(knots) {
        let dx = p[0] - k[0];
        let dy = p[1] - k[1];
        *o = tps_phi((dx * dx + dy * dy).sqrt());
    }
}

fn check_finite_points(points: &[[f64; 2]]) -> Result<()> {
    let bad: Vec<String> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| !(p[0].is_finite() && p[1].is_finite()))
        .map(|(i, _)| i.to_string())
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::NonFinitePoints {
            ids: bad.join(", "),
        })
    }
}

/// Evaluate the raw (unscaled) basis at raw-coordinate points.
pub fn eval_tps_rows(points: &[[f64; 2]], knots: &KnotSet) -> Result<Array2<f64>> {
    check_finite_points(points)?;
    let m = knots.len();
    let mut values = Array2::zeros((points.len(), m));
    for (i, p) in points.iter().enumerate() {
        let std = knots.domain_bounds.standardize(*p);
        tps_row(
            values.row_mut(i).into_slice().expect("contiguous row"),
            std,
            knots.knots(),
        );
    }
    Ok(values)
}

/// Evaluate the basis with explicit row identifiers; offending ids are named
/// when coordinates are non-finite.
pub fn eval_tps_basis(
    points: &[[f64; 2]],
    point_ids: &[String],
    knots: &KnotSet,
) -> Result<BasisMatrix> {
    if points.len() != point_ids.len() {
        return Err(Error::DimensionMismatch {
            name: "point_ids",
            expected: points.len().to_string(),
            got: point_ids.len().to_string(),
        });
    }
    let bad: Vec<&str> = points
        .iter()
        .zip(point_ids)
        .filter(|(p, _)| !(p[0].is_finite() && p[1].is_finite()))
        .map(|(_, id)| id.as_str())
        .collect();
    if !bad.is_empty() {
        return Err(Error::NonFinitePoints {
            ids: bad.join(", "),
        });
    }
    let values = eval_tps_rows(points, knots)?;
    Ok(BasisMatrix {
        values,
        point_ids: point_ids.to_vec(),
    })
}

/// A knot set plus per-column scalings frozen at training time.
///
/// Columns are divided by their population standard deviation over the
/// training evaluation points so that a shared prior variance is comparable
/// across columns; the same scalings must be reused at prediction time.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScaledBasis {
    pub knots: KnotSet,
    pub scalings: Vec<f64>,
}

impl ScaledBasis {
    /// Freeze column scalings from the training points. A column that is
    /// numerically constant keeps scaling 1 (the identifiability check is
    /// responsible for flagging such bases).
    pub fn fit(knots: KnotSet, training_points: &[[f64; 2]]) -> Result<Self> {
        let raw = eval_tps_rows(training_points, &knots)?;
        let n = training_points.len();
        if n == 0 {
            return Err(Error::Data(
                "cannot fit basis scalings without training points".into(),
            ));
        }
        let scalings = (0..knots.len())
            .map(|c| {
                let col = raw.column(c);
                let mean = col.sum() / n as f64;
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
                let sd = var.sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { knots, scalings })
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Scaled basis matrix for raw-coordinate points.
    pub fn eval(&self, points: &[[f64; 2]]) -> Result<Array2<f64>> {
        let mut values = eval_tps_rows(points, &self.knots)?;
        for (c, s) in self.scalings.iter().enumerate() {
            values.column_mut(c).mapv_inplace(|v| v / s);
        }
        Ok(values)
    }

    /// Single-point evaluation into a caller-provided buffer (hot path for
    /// streaming prediction); coordinates must be finite.
    pub fn eval_row_into(&self, p: [f64; 2], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        let std = self.knots.domain_bounds.standardize(p);
        tps_row(out, std, self.knots.knots());
        for (o, s) in out.iter_mut().zip(&self.scalings) {
            *o /= s;
        }
    }
}

/// Numerical-rank report for the concatenated design `[X | H]`.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub rank: usize,
    pub expected: usize,
    pub singular_values: Vec<f64>,
    pub relative_tolerance: f64,
    pub deficient: bool,
}

/// Check that the landscape covariates and the spatial basis are jointly
/// identifiable: the stacked matrix `[X | H]` must have full column rank at a
/// relative singular-value tolerance of 1e-10.
pub fn check_spatial_identifiability(x: &Array2<f64>, h: &Array2<f64>) -> Result<RankReport> {
    if x.nrows() != h.nrows() {
        return Err(Error::DimensionMismatch {
            name: "spatial basis rows",
            expected: x.nrows().to_string(),
            got: h.nrows().to_string(),
        });
    }
    let rows = x.nrows();
    let cols = x.ncols() + h.ncols();
    let mut stacked = nalgebra::DMatrix::<f64>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..x.ncols() {
            stacked[(i, j)] = x[[i, j]];
        }
        for j in 0..h.ncols() {
            stacked[(i, x.ncols() + j)] = h[[i, j]];
        }
    }
    let mut singular_values: Vec<f64> = stacked.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let relative_tolerance = 1e-10;
    let cutoff = singular_values.first().copied().unwrap_or(0.0) * relative_tolerance;
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    Ok(RankReport {
        rank,
        expected: cols,
        singular_values,
        relative_tolerance,
        deficient: rank < cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit_bounds() -> DomainBounds {
        DomainBounds::new(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn regular_knots_single_center() {
        let ks = make_regular_knots(unit_bounds(), 1, 1).unwrap();
        assert_eq!(ks.knots(), &[[0.5, 0.5]]);
    }

    #[test]
    fn regular_knots_two_by_two() {
        let ks = make_regular_knots(unit_bounds(), 2, 2).unwrap();
        let mut got: Vec<[f64; 2]> = ks.knots().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            got,
            vec![[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]]
        );
    }

    #[test]
    fn regular_knots_five_by_six_gives_thirty() {
        let ks = make_regular_knots(unit_bounds(), 5, 6).unwrap();
        assert_eq!(ks.len(), 30);
        for k in ks.knots() {
            assert!((0.0..=1.0).contains(&k[0]) && (0.0..=1.0).contains(&k[1]));
        }
    }

    #[test]
    fn degenerate_bounds_rejected() {
        let err = DomainBounds::new(2.0, 2.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateBounds { axis: 'x', .. }));
    }

    #[test]
    fn knot_count_split_prefers_near_square_and_y_on_ties() {
        assert_eq!(split_knot_counts(30, 1.0, 1.0), (5, 6));
        assert_eq!(split_knot_counts(30, 2.0, 1.0), (6, 5));
        assert_eq!(split_knot_counts(36, 1.0, 1.0), (6, 6));
        assert_eq!(split_knot_counts(7, 1.0, 1.0), (1, 7));
        assert_eq!(split_knot_counts(1, 1.0, 1.0), (1, 1));
    }

    #[test]
    fn quantile_knots_on_uniform_grid() {
        // 0, 1/9, ..., 1 on each axis: the (0.25, 0.75) quantiles of the
        // pooled coordinates are the per-axis 25th/75th percentiles.
        let mut points = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                points.push([i as f64 / 9.0, j as f64 / 9.0]);
            }
        }
        let ks = make_quantile_knots(&points, 2, 2).unwrap();
        assert_eq!(ks.len(), 4);
        let xs: Vec<f64> = (0..10).flat_map(|i| vec![i as f64 / 9.0; 10]).collect();
        let q25 = crate::math::quantile(&xs, 0.25);
        let q75 = crate::math::quantile(&xs, 0.75);
        let mut got: Vec<[f64; 2]> = ks.knots().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // bounds are [0,1] so standardized == raw here
        assert_abs_diff_eq!(got[0][0], q25, epsilon = 1e-12);
        assert_abs_diff_eq!(got[3][1], q75, epsilon = 1e-12);
    }

    #[test]
    fn quantile_knots_degenerate_axis_is_named() {
        let points: Vec<[f64; 2]> = (0..100).map(|i| [3.25, i as f64]).collect();
        let err = make_quantile_knots(&points, 2, 1).unwrap_err();
        match err {
            Error::TooFewDistinctCoordinates { axis, distinct, .. } => {
                assert_eq!(axis, 'x');
                assert_eq!(distinct, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn quantile_knots_balance_strip_occupancy() {
        // Skewed cloud: each inter-knot strip should hold about 1/3 of the
        // points on each axis.
        let mut points = Vec::new();
        let mut state = 11u64;
        let mut next = || {
            // xorshift, deterministic without pulling an rng into the test
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..3000 {
            let u: f64 = next();
            let v: f64 = next();
            points.push([u * u, v.powf(0.3)]);
        }
        let ks = make_quantile_knots(&points, 3, 3).unwrap();
        let mut kx: Vec<f64> = ks.knots().iter().map(|k| k[0]).collect();
        kx.sort_by(|a, b| a.partial_cmp(b).unwrap());
        kx.dedup();
        let b = ks.domain_bounds;
        for axis in 0..2 {
            let mut knot_coords: Vec<f64> = ks.knots().iter().map(|k| k[axis]).collect();
            knot_coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
            knot_coords.dedup();
            assert_eq!(knot_coords.len(), 3);
            // interior strips: between consecutive knots
            for w in knot_coords.windows(2) {
                let count = points
                    .iter()
                    .map(|p| b.standardize(*p)[axis])
                    .filter(|&c| c >= w[0] && c < w[1])
                    .count();
                let frac = count as f64 / points.len() as f64;
                assert!(
                    (frac - 1.0 / 3.0).abs() < 0.05,
                    "axis {axis} strip fraction {frac}"
                );
            }
        }
    }

    #[test]
    fn quantile_strip_counts_within_sampling_bounds() {
        let n = 10_000usize;
        let c = 5usize;
        let mut state = 97u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let points: Vec<[f64; 2]> = (0..n).map(|_| [next(), next()]).collect();
        let ks = make_quantile_knots(&points, c, c).unwrap();
        let mut knot_x: Vec<f64> = ks.knots().iter().map(|k| k[0]).collect();
        knot_x.sort_by(|a, b| a.partial_cmp(b).unwrap());
        knot_x.dedup();
        let slack = (n as f64).sqrt();
        let lo = (n / c) as f64 - slack;
        let hi = (n as f64 / c as f64).ceil() + slack;
        for w in knot_x.windows(2) {
            let count = points
                .iter()
                .map(|p| ks.domain_bounds.standardize(*p)[0])
                .filter(|&x| x >= w[0] && x < w[1])
                .count() as f64;
            assert!((lo..=hi).contains(&count), "strip count {count}");
        }
    }

    #[test]
    fn tps_values_at_reference_distances() {
        assert_eq!(tps_phi(1.0), 0.0);
        assert_relative_eq!(
            tps_phi(std::f64::consts::E),
            std::f64::consts::E * std::f64::consts::E,
            max_relative = 1e-14
        );
        assert_eq!(tps_phi(0.0), 0.0);

        let ks = KnotSet::new(vec![[0.2, 0.2]], unit_bounds()).unwrap();
        let m = eval_tps_rows(&[[0.2, 0.2]], &ks).unwrap();
        assert_eq!(m[[0, 0]], 0.0);
    }

    #[test]
    fn tps_depends_only_on_distance() {
        let ks = KnotSet::new(vec![[0.3, 0.8]], unit_bounds()).unwrap();
        let swapped = KnotSet::new(vec![[0.9, 0.1]], unit_bounds()).unwrap();
        let a = eval_tps_rows(&[[0.9, 0.1]], &ks).unwrap();
        let b = eval_tps_rows(&[[0.3, 0.8]], &swapped).unwrap();
        assert_eq!(a[[0, 0]].to_bits(), b[[0, 0]].to_bits());
    }

    #[test]
    fn eval_rejects_non_finite_points_with_ids() {
        let ks = make_regular_knots(unit_bounds(), 2, 2).unwrap();
        let pts = vec![[0.1, 0.1], [f64::NAN, 0.5], [0.2, 0.2]];
        let ids = vec!["a".to_string(), "bad-site".to_string(), "c".to_string()];
        let err = eval_tps_basis(&pts, &ids, &ks).unwrap_err();
        match err {
            Error::NonFinitePoints { ids } => assert_eq!(ids, "bad-site"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn standardization_makes_entries_unit_invariant() {
        // Same relative geometry in nanometers vs a shifted/scaled unit
        // system must give identical basis entries.
        let raw_a: Vec<[f64; 2]> = vec![[490.0, 10.0], [1610.0, 200.0], [842.0, 365.0]];
        let raw_b: Vec<[f64; 2]> = raw_a
            .iter()
            .map(|p| [p[0] * 3.5 - 100.0, p[1] * 0.02 + 7.0])
            .collect();
        let bounds_a = DomainBounds::from_points(&raw_a).unwrap();
        let bounds_b = DomainBounds::from_points(&raw_b).unwrap();
        let ka = make_regular_knots(bounds_a, 2, 3).unwrap();
        let kb = make_regular_knots(bounds_b, 2, 3).unwrap();
        let ma = eval_tps_rows(&raw_a, &ka).unwrap();
        let mb = eval_tps_rows(&raw_b, &kb).unwrap();
        for (a, b) in ma.iter().zip(mb.iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn scaled_basis_columns_have_unit_training_sd() {
        let mut pts = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                pts.push([i as f64, 10.0 + j as f64 * 3.0]);
            }
        }
        let bounds = DomainBounds::from_points(&pts).unwrap();
        let ks = make_regular_knots(bounds, 3, 3).unwrap();
        let sb = ScaledBasis::fit(ks, &pts).unwrap();
        let g = sb.eval(&pts).unwrap();
        for c in 0..sb.len() {
            let col: Vec<f64> = g.column(c).iter().copied().collect();
            assert_relative_eq!(crate::math::std_dev(&col), 1.0, max_relative = 1e-10);
        }
        // row evaluation agrees with matrix evaluation bit-for-bit
        let mut row = vec![0.0; sb.len()];
        sb.eval_row_into(pts[5], &mut row);
        for c in 0..sb.len() {
            assert_eq!(row[c].to_bits(), g[[5, c]].to_bits());
        }
    }

    #[test]
    fn identifiability_flags_duplicate_column() {
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                pts.push([i as f64 / 5.0, j as f64 / 5.0]);
            }
        }
        let bounds = DomainBounds::from_points(&pts).unwrap();
        let ks = make_regular_knots(bounds, 2, 2).unwrap();
        let sb = ScaledBasis::fit(ks, &pts).unwrap();
        let h = sb.eval(&pts).unwrap();
        // X carries the intercept and a duplicate of H's first column
        let mut x = Array2::ones((pts.len(), 2));
        for i in 0..pts.len() {
            x[[i, 1]] = h[[i, 0]];
        }
        let report = check_spatial_identifiability(&x, &h).unwrap();
        assert!(report.deficient);
        assert_eq!(report.rank, report.expected - 1);
    }

    #[test]
    fn identifiability_flags_zero_column() {
        let x = Array2::ones((12, 1));
        let mut h = Array2::zeros((12, 3));
        for i in 0..12 {
            h[[i, 0]] = (i as f64).sin();
            h[[i, 1]] = (i as f64 * 0.7).cos();
            // column 2 stays zero
        }
        let report = check_spatial_identifiability(&x, &h).unwrap();
        assert!(report.deficient);
    }

    #[test]
    fn identifiability_full_rank_on_grid_basis() {
        // 36 sites on a 6x6 unit grid, 3x3 regular knots, intercept-only X.
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                pts.push([i as f64 / 5.0, j as f64 / 5.0]);
            }
        }
        let bounds = DomainBounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let ks = make_regular_knots(bounds, 3, 3).unwrap();
        let sb = ScaledBasis::fit(ks, &pts).unwrap();
        let h = sb.eval(&pts).unwrap();
        let x = Array2::ones((pts.len(), 1));
        let report = check_spatial_identifiability(&x, &h).unwrap();
        assert_eq!(report.rank, 10);
        assert!(!report.deficient);
        // frozen from an independent singular-value computation of the same
        // standardized, scaled design
        let expected_max = 39.78888826913942;
        let expected_min = 0.35738347719838753;
        assert_relative_eq!(
            report.singular_values[0],
            expected_max,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            *report.singular_values.last().unwrap(),
            expected_min,
            max_relative = 1e-8
        );
    }
}
