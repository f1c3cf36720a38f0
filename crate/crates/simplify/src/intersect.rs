//! Direct intersection of proxy planes.

use nalgebra::{Matrix3, Point3, Vector3};

use crate::error::{SimplifyError, SimplifyResult};

/// Planes whose normal matrix has a smallest singular value below this
/// fraction of the largest are treated as effectively parallel: their
/// intersection point is numerically meaningless and tends to fly far away
/// from the model.
pub const NEAR_PARALLEL_RATIO: f64 = 1e-6;

/// Returns the unique point lying on all three planes, each given as
/// `(center, unit normal)`.
pub fn intersect_three_planes(
    planes: &[(Point3<f64>, Vector3<f64>); 3],
) -> SimplifyResult<Point3<f64>> {
    let matrix = Matrix3::from_rows(&[
        planes[0].1.transpose(),
        planes[1].1.transpose(),
        planes[2].1.transpose(),
    ]);
    let rhs = Vector3::new(
        planes[0].1.dot(&planes[0].0.coords),
        planes[1].1.dot(&planes[1].0.coords),
        planes[2].1.dot(&planes[2].0.coords),
    );
    let (sigma_min, sigma_max) = singular_extremes(&matrix);
    if sigma_min < NEAR_PARALLEL_RATIO * sigma_max || sigma_max == 0.0 {
        return Err(SimplifyError::NearParallelPlanes {
            sigma_min,
            sigma_max,
        });
    }
    let svd = matrix.svd(true, true);
    let solution = svd
        .solve(&rhs, 0.0)
        .map_err(|_| SimplifyError::NearParallelPlanes {
            sigma_min,
            sigma_max,
        })?;
    Ok(Point3::from(solution))
}

/// Picks, among all 3-subsets of the given planes, the one whose normal
/// matrix has the largest smallest singular value — the best-conditioned
/// triple. Ties resolve to the lexicographically smallest index set.
/// Returns the subset indices and its `(sigma_min, sigma_max)`.
pub(crate) fn best_three_subset(
    planes: &[(Point3<f64>, Vector3<f64>)],
) -> Option<([usize; 3], f64, f64)> {
    if planes.len() < 3 {
        return None;
    }
    let mut best: Option<([usize; 3], f64, f64)> = None;
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            for k in j + 1..planes.len() {
                let matrix = Matrix3::from_rows(&[
                    planes[i].1.transpose(),
                    planes[j].1.transpose(),
                    planes[k].1.transpose(),
                ]);
                let (sigma_min, sigma_max) = singular_extremes(&matrix);
                let better = match &best {
                    None => true,
                    Some((_, current, _)) => sigma_min > *current,
                };
                if better {
                    best = Some(([i, j, k], sigma_min, sigma_max));
                }
            }
        }
    }
    best
}

fn singular_extremes(matrix: &Matrix3<f64>) -> (f64, f64) {
    let values = matrix.singular_values();
    let mut min = f64::INFINITY;
    let mut max = 0.0_f64;
    for v in values.iter() {
        min = min.min(*v);
        max = max.max(*v);
    }
    (min, max)
}
