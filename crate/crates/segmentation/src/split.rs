//! Splitting an over-budget proxy in two along its widest extent.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use vsa_core::{PointCloud, Proxy, Segmentation};

use crate::error::SplitRejection;

/// Components smaller than this are treated as zero when canonicalizing an
/// eigenvector's sign.
const SIGN_EPS: f64 = 1e-12;

/// Splits proxy `proxy_id` by the plane through its weighted position mean,
/// orthogonal to the direction of largest weighted positional variance.
///
/// Members with a non-negative projection onto that direction form the
/// first child (points exactly on the plane included); the rest form the
/// second. Both children are refitted from scratch. The first child keeps
/// the parent's id, the second is appended with a fresh id, so no other
/// proxy is renumbered. Returns the two child ids.
///
/// Declined (without modifying the segmentation) when the proxy has fewer
/// than two members, when all members land on one side — e.g. coincident
/// positions — or when a child's weighted normal sum vanishes.
pub fn split_proxy(
    cloud: &PointCloud,
    segmentation: &mut Segmentation,
    proxy_id: usize,
) -> Result<(usize, usize), SplitRejection> {
    let members = &segmentation.proxies[proxy_id].members;
    if members.len() < 2 {
        return Err(SplitRejection::TooFewMembers);
    }

    let total_weight: f64 = members.iter().map(|&j| cloud.weight(j)).sum();
    let mean = members
        .iter()
        .map(|&j| cloud.weight(j) * cloud.position(j).coords)
        .sum::<Vector3<f64>>()
        / total_weight;
    let mut covariance = Matrix3::zeros();
    for &j in members {
        let d = cloud.position(j).coords - mean;
        covariance += cloud.weight(j) * d * d.transpose();
    }
    covariance /= total_weight;
    let direction = principal_direction(&covariance);

    let (mut positive, mut negative) = (Vec::new(), Vec::new());
    for &j in members {
        let side = (cloud.position(j).coords - mean).dot(&direction);
        if side >= 0.0 {
            positive.push(j);
        } else {
            negative.push(j);
        }
    }
    if positive.is_empty() || negative.is_empty() {
        return Err(SplitRejection::EmptySide);
    }

    let new_id = segmentation.proxies.len();
    let first = Proxy::fit(cloud, proxy_id, positive)
        .map_err(|_| SplitRejection::DegenerateChild)?;
    let second =
        Proxy::fit(cloud, new_id, negative).map_err(|_| SplitRejection::DegenerateChild)?;
    for &j in &second.members {
        segmentation.assignment[j] = Some(new_id);
    }
    segmentation.proxies[proxy_id] = first;
    segmentation.proxies.push(second);
    Ok((proxy_id, new_id))
}

/// The eigenvector of the largest eigenvalue, with a canonical sign (first
/// non-negligible component positive). Among (numerically) tied largest
/// eigenvalues the lexicographically smallest canonical vector is chosen,
/// so fully symmetric inputs still split deterministically.
fn principal_direction(covariance: &Matrix3<f64>) -> Vector3<f64> {
    let eigen = SymmetricEigen::new(*covariance);
    let max_value = eigen.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
    let tolerance = 1e-12 * max_value.abs().max(1e-300);
    let mut best: Option<Vector3<f64>> = None;
    for i in 0..3 {
        if (eigen.eigenvalues[i] - max_value).abs() > tolerance {
            continue;
        }
        let candidate = canonical_sign(eigen.eigenvectors.column(i).into_owned());
        let smaller = match &best {
            None => true,
            Some(current) => lex_less(&candidate, current),
        };
        if smaller {
            best = Some(candidate);
        }
    }
    best.expect("a symmetric 3x3 matrix always has eigenvectors")
}

fn canonical_sign(mut v: Vector3<f64>) -> Vector3<f64> {
    for i in 0..3 {
        if v[i].abs() > SIGN_EPS {
            if v[i] < 0.0 {
                v = -v;
            }
            break;
        }
    }
    v
}

fn lex_less(a: &Vector3<f64>, b: &Vector3<f64>) -> bool {
    for i in 0..3 {
        match a[i].total_cmp(&b[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Point3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn splits_a_strip_across_its_long_axis() {
        // Eight points along x with two normal groups; the widest extent is
        // x, so the split separates x < 3.5 from x >= 3.5.
        let positions: Vec<Point3<f64>> =
            (0..8).map(|i| Point3::new(i as f64, 0.0, 0.0)).collect();
        let normals: Vec<Vector3<f64>> = (0..8)
            .map(|i| if i < 4 { Vector3::z() } else { Vector3::x() })
            .collect();
        let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
        let mut segmentation =
            Segmentation::from_labels(&cloud, &[0; 8]).unwrap();
        let (first, second) = split_proxy(&cloud, &mut segmentation, 0).unwrap();
        assert_eq!((first, second), (0, 1));
        // Positive side of the +x direction holds the larger coordinates.
        assert_eq!(segmentation.proxies[0].members, vec![4, 5, 6, 7]);
        assert_eq!(segmentation.proxies[1].members, vec![0, 1, 2, 3]);
        assert_relative_eq!(segmentation.proxies[0].normal, Vector3::x(), epsilon = 1e-12);
        assert_relative_eq!(segmentation.proxies[1].normal, Vector3::z(), epsilon = 1e-12);
        assert_eq!(segmentation.proxies[0].energy, 0.0);
        segmentation.validate_complete(&cloud).unwrap();
    }

    #[test]
    fn split_never_increases_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(4..40);
            let positions: Vec<Point3<f64>> = (0..n)
                .map(|_| {
                    Point3::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                })
                .collect();
            let normals: Vec<Vector3<f64>> = (0..n)
                .map(|_| {
                    Vector3::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                    .normalize()
                })
                .collect();
            let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
            let mut segmentation =
                Segmentation::from_labels(&cloud, &vec![0; n]).unwrap();
            let before = vsa_core::total_energy(&cloud, &segmentation);
            if split_proxy(&cloud, &mut segmentation, 0).is_ok() {
                let after = vsa_core::total_energy(&cloud, &segmentation);
                assert!(after <= before + 1e-9, "split raised energy");
                segmentation.validate_complete(&cloud).unwrap();
            }
        }
    }

    #[test]
    fn points_on_the_plane_go_to_the_positive_side() {
        // Symmetric pair around the mean plus two points exactly on it.
        let positions = vec![
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.0, 1e-9, 0.0),
        ];
        let cloud =
            PointCloud::with_unit_weights(positions, vec![Vector3::z(); 4]).unwrap();
        let mut segmentation = Segmentation::from_labels(&cloud, &[0; 4]).unwrap();
        split_proxy(&cloud, &mut segmentation, 0).unwrap();
        // Principal direction is +x; points 2 and 3 project to exactly 0
        // and join the positive child together with point 1.
        assert_eq!(segmentation.proxies[0].members, vec![1, 2, 3]);
        assert_eq!(segmentation.proxies[1].members, vec![0]);
    }

    #[test]
    fn rejects_singleton_and_coincident_proxies() {
        let cloud = PointCloud::with_unit_weights(
            vec![Point3::origin()],
            vec![Vector3::z()],
        )
        .unwrap();
        let mut segmentation = Segmentation::from_labels(&cloud, &[0]).unwrap();
        assert_eq!(
            split_proxy(&cloud, &mut segmentation, 0),
            Err(SplitRejection::TooFewMembers)
        );

        // All positions identical: every projection is zero, one side empty.
        let cloud = PointCloud::with_unit_weights(
            vec![Point3::origin(), Point3::origin(), Point3::origin()],
            vec![Vector3::z(); 3],
        )
        .unwrap();
        let mut segmentation = Segmentation::from_labels(&cloud, &[0; 3]).unwrap();
        assert_eq!(
            split_proxy(&cloud, &mut segmentation, 0),
            Err(SplitRejection::EmptySide)
        );
    }

    #[test]
    fn weighted_mean_shifts_the_plane() {
        // Heavy weight drags the mean toward x = 10, flipping which points
        // land on the negative side compared to the unweighted mean.
        let positions = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(4.0, 0.0, 0.0),
            Point3::new(10.0, 0.0, 0.0),
        ];
        let cloud = PointCloud::new(
            positions,
            vec![Vector3::z(); 3],
            vec![1.0, 1.0, 10.0],
        )
        .unwrap();
        let mut segmentation = Segmentation::from_labels(&cloud, &[0; 3]).unwrap();
        split_proxy(&cloud, &mut segmentation, 0).unwrap();
        // Weighted mean x = (0 + 4 + 100) / 12 ~ 8.67: only point 2 is on
        // the positive side.
        assert_eq!(segmentation.proxies[0].members, vec![2]);
        assert_eq!(segmentation.proxies[1].members, vec![0, 1]);
    }

    #[test]
    fn principal_direction_matches_dense_reference() {
        // Reference: evaluate the quadratic form over many unit directions
        // and check none beats the eigenvector.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut m = Matrix3::zeros();
            for _ in 0..10 {
                let v = Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                m += v * v.transpose();
            }
            let d = principal_direction(&m);
            assert_relative_eq!(d.norm(), 1.0, max_relative = 1e-9);
            let value = (m * d).dot(&d);
            for _ in 0..200 {
                let v = Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
                .normalize();
                assert!((m * v).dot(&v) <= value + 1e-9);
            }
        }
    }
}
