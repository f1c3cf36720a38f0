//! The proxy-fitting half of the alternating minimization.

use vsa_core::{optimal_normal, proxy_energy, PointCloud, Segmentation};

use crate::error::SegmentationResult;

/// Refits every proxy normal to its current members using the closed-form
/// minimizer (the normalized weighted normal sum) and recaches energies.
///
/// Memberships and centers are untouched, so for fixed memberships this
/// step never increases the total energy. Fails if some proxy's weighted
/// normal sum vanishes.
pub fn proxy_update(cloud: &PointCloud, segmentation: &mut Segmentation) -> SegmentationResult<()> {
    for proxy in &mut segmentation.proxies {
        proxy.normal = optimal_normal(cloud, &proxy.members, proxy.id)?;
        proxy.energy = proxy_energy(cloud, &proxy.members, &proxy.normal);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Point3, Vector3};
    use vsa_core::total_energy;

    #[test]
    fn update_fits_the_normalized_weighted_sum() {
        // Two members with normals z and x: the fitted normal is their
        // bisector and the energy is 2 * (2 - sqrt(2)).
        let cloud = PointCloud::with_unit_weights(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)],
            vec![Vector3::z(), Vector3::x()],
        )
        .unwrap();
        let mut segmentation = vsa_core::Segmentation::from_labels(&cloud, &[0, 0]).unwrap();
        // Perturb the normal, then let the update restore the optimum.
        segmentation.proxies[0].normal = Vector3::y();
        segmentation.proxies[0].energy =
            proxy_energy(&cloud, &[0, 1], &Vector3::y());
        let before = total_energy(&cloud, &segmentation);
        proxy_update(&cloud, &mut segmentation).unwrap();
        let after = total_energy(&cloud, &segmentation);
        assert!(after <= before + 1e-12);
        let expected = (Vector3::x() + Vector3::z()).normalize();
        assert_relative_eq!(segmentation.proxies[0].normal, expected, epsilon = 1e-12);
        assert_relative_eq!(after, 2.0 * (2.0 - 2.0_f64.sqrt()), max_relative = 1e-12);
        segmentation.validate_complete(&cloud).unwrap();
    }

    #[test]
    fn update_respects_weights() {
        // Weight 3 on the x-normal pulls the fitted normal toward x.
        let cloud = PointCloud::new(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)],
            vec![Vector3::z(), Vector3::x()],
            vec![1.0, 3.0],
        )
        .unwrap();
        let mut segmentation = vsa_core::Segmentation::from_labels(&cloud, &[0, 0]).unwrap();
        proxy_update(&cloud, &mut segmentation).unwrap();
        let expected = (Vector3::<f64>::x() * 3.0 + Vector3::z()).normalize();
        assert_relative_eq!(segmentation.proxies[0].normal, expected, epsilon = 1e-12);
    }

    #[test]
    fn update_propagates_degenerate_sums() {
        let cloud = PointCloud::with_unit_weights(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)],
            vec![Vector3::z(), -Vector3::z()],
        )
        .unwrap();
        let mut segmentation = vsa_core::Segmentation {
            assignment: vec![Some(0), Some(0)],
            proxies: vec![vsa_core::Proxy {
                id: 0,
                members: vec![0, 1],
                center: 0,
                normal: Vector3::x(),
                energy: proxy_energy(&cloud, &[0, 1], &Vector3::x()),
            }],
        };
        assert!(proxy_update(&cloud, &mut segmentation).is_err());
    }
}
