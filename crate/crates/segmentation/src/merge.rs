//! Merging adjacent proxies whose union stays under the energy budget.

use nalgebra::Vector3;
use vsa_core::{least_deviation_member, proxy_energy, PointCloud, Proxy, Segmentation};

use crate::error::MergeRejection;

/// Length below which the size-weighted normal sum is considered void.
const DEGENERATE_EPS: f64 = 1e-12;

/// The proxy a merge of `(i, j)` would produce: its normal is the
/// normalized size-weighted sum of the two proxy normals, its energy the
/// member energy under that normal.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeCandidate {
    pub normal: Vector3<f64>,
    pub energy: f64,
}

/// Evaluates a merge without applying it. The merged normal is
/// `normalize(|P_i| N_i + |P_j| N_j)`; the candidate energy may exceed the
/// sum of the parts (merging can raise the total energy).
pub fn evaluate_merge(
    cloud: &PointCloud,
    segmentation: &Segmentation,
    i: usize,
    j: usize,
) -> Result<MergeCandidate, MergeRejection> {
    let a = &segmentation.proxies[i];
    let b = &segmentation.proxies[j];
    let sum = a.size() as f64 * a.normal + b.size() as f64 * b.normal;
    let length = sum.norm();
    if length < DEGENERATE_EPS {
        return Err(MergeRejection::DegenerateNormal);
    }
    let normal = sum / length;
    let energy = proxy_energy(cloud, &a.members, &normal) + proxy_energy(cloud, &b.members, &normal);
    Ok(MergeCandidate { normal, energy })
}

/// Merges proxies `i` and `j` if the merged energy is strictly below `eta`.
///
/// The union keeps the smaller of the two ids; every proxy above the larger
/// id shifts down by one and the assignment is renumbered to match. The
/// merged center is the union member of least deviation from the merged
/// normal. Callers are responsible for only merging adjacent proxies.
pub fn merge_proxies(
    cloud: &PointCloud,
    segmentation: &mut Segmentation,
    i: usize,
    j: usize,
    eta: f64,
) -> Result<(), MergeRejection> {
    assert_ne!(i, j, "cannot merge a proxy with itself");
    let candidate = evaluate_merge(cloud, segmentation, i, j)?;
    if candidate.energy >= eta {
        return Err(MergeRejection::EnergyAtLeastEta {
            energy: candidate.energy,
        });
    }

    let (low, high) = (i.min(j), i.max(j));
    let removed = segmentation.proxies.remove(high);
    let keep = &mut segmentation.proxies[low];
    let mut members = Vec::with_capacity(keep.members.len() + removed.members.len());
    let (mut a, mut b) = (keep.members.iter().peekable(), removed.members.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some(&&x), Some(&&y)) => {
                if x < y {
                    members.push(x);
                    a.next();
                } else {
                    members.push(y);
                    b.next();
                }
            }
            (Some(&&x), None) => {
                members.push(x);
                a.next();
            }
            (None, Some(&&y)) => {
                members.push(y);
                b.next();
            }
            (None, None) => break,
        }
    }
    let center = least_deviation_member(cloud, &members, &candidate.normal);
    *keep = Proxy {
        id: low,
        members,
        center,
        normal: candidate.normal,
        energy: candidate.energy,
    };
    for proxy in &mut segmentation.proxies[high..] {
        proxy.id -= 1;
    }
    for id in segmentation.assignment.iter_mut().flatten() {
        if *id == high {
            *id = low;
        } else if *id > high {
            *id -= 1;
        }
    }
    Ok(())
}
