//! Seed selection: the starting points for region growing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vsa_core::{least_deviation_member, PointCloud, Segmentation};

use crate::config::Seeding;
use crate::error::{SegmentationError, SegmentationResult};

/// Chooses the initial seed points according to the seeding strategy.
///
/// Returned indices are distinct and sorted ascending; their order defines
/// the initial proxy ids. Sampling uses a counter-based RNG seeded with
/// `rng_seed`, so the same configuration always yields the same seeds.
pub fn select_seeds(
    cloud: &PointCloud,
    seeding: &Seeding,
    rng_seed: u64,
) -> SegmentationResult<Vec<usize>> {
    let n = cloud.len();
    let invalid = |reason: String| Err(SegmentationError::InvalidSeeds { reason });
    match seeding {
        Seeding::Explicit(indices) => {
            if indices.is_empty() {
                return invalid("explicit seed list is empty".into());
            }
            let mut seeds = indices.clone();
            seeds.sort_unstable();
            if seeds.windows(2).any(|w| w[0] == w[1]) {
                return invalid("explicit seed list contains duplicates".into());
            }
            if *seeds.last().expect("non-empty") >= n {
                return invalid(format!("seed index out of range for {n} points"));
            }
            Ok(seeds)
        }
        Seeding::Count(m) => {
            if *m == 0 || *m > n {
                return invalid(format!("cannot place {m} seeds among {n} points"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let mut seeds = rand::seq::index::sample(&mut rng, n, *m).into_vec();
            seeds.sort_unstable();
            Ok(seeds)
        }
        Seeding::AllPoints => Ok((0..n).collect()),
    }
}

/// Picks the next flood seeds from a fitted segmentation: for each proxy,
/// the member whose normal deviates least from the proxy normal (ties by
/// smaller index). Returned in proxy-id order.
pub fn seed_step(cloud: &PointCloud, segmentation: &Segmentation) -> Vec<usize> {
    segmentation
        .proxies
        .iter()
        .map(|proxy| least_deviation_member(cloud, &proxy.members, &proxy.normal))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Point3, Vector3};

    fn line_cloud(n: usize) -> PointCloud {
        let positions = (0..n).map(|i| Point3::new(i as f64, 0.0, 0.0)).collect();
        PointCloud::with_unit_weights(positions, vec![Vector3::z(); n]).unwrap()
    }

    #[test]
    fn explicit_seeds_are_validated() {
        let cloud = line_cloud(5);
        assert!(select_seeds(&cloud, &Seeding::Explicit(vec![]), 0).is_err());
        assert!(select_seeds(&cloud, &Seeding::Explicit(vec![1, 1]), 0).is_err());
        assert!(select_seeds(&cloud, &Seeding::Explicit(vec![5]), 0).is_err());
        assert_eq!(
            select_seeds(&cloud, &Seeding::Explicit(vec![4, 0]), 0).unwrap(),
            vec![0, 4]
        );
    }

    #[test]
    fn count_seeding_is_deterministic_and_distinct() {
        let cloud = line_cloud(50);
        let a = select_seeds(&cloud, &Seeding::Count(10), 7).unwrap();
        let b = select_seeds(&cloud, &Seeding::Count(10), 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let c = select_seeds(&cloud, &Seeding::Count(10), 8).unwrap();
        assert_ne!(a, c, "different RNG seeds should give different samples");
    }

    #[test]
    fn count_seeding_rejects_bad_counts() {
        let cloud = line_cloud(5);
        assert!(select_seeds(&cloud, &Seeding::Count(0), 0).is_err());
        assert!(select_seeds(&cloud, &Seeding::Count(6), 0).is_err());
        assert_eq!(
            select_seeds(&cloud, &Seeding::Count(5), 0).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn all_points_seeding_enumerates_everything() {
        let cloud = line_cloud(4);
        assert_eq!(
            select_seeds(&cloud, &Seeding::AllPoints, 0).unwrap(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn seed_step_picks_least_deviating_member() {
        // Proxy normal will be the normalized sum; point 1's normal is
        // closest to it among {0 -> z, 1 -> (x+z)/sqrt(2), 2 -> x}.
        let positions = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
        ];
        let normals = vec![
            Vector3::z(),
            (Vector3::x() + Vector3::z()).normalize(),
            Vector3::x(),
        ];
        let cloud = PointCloud::with_unit_weights(positions, normals).unwrap();
        let segmentation = vsa_core::Segmentation::from_labels(&cloud, &[0, 0, 0]).unwrap();
        assert_eq!(seed_step(&cloud, &segmentation), vec![1]);
    }
}
