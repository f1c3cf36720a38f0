//! Planar proxies and segmentations.
//!
//! A [`Proxy`] is a planar stand-in for a subset of the cloud: the plane
//! through one representative member (the center) orthogonal to a unit
//! normal, together with the cached normal-deviation energy of its members.
//! A [`Segmentation`] is a set of proxies plus the per-point assignment that
//! partitions the cloud among them.
//!
//! Proxy ids are kept dense: `segmentation.proxies[i].id == i` always holds,
//! and the assignment stores those ids directly. Operations that add or
//! remove proxies renumber deterministically.

use nalgebra::{Point3, Vector3};

use crate::cloud::PointCloud;
use crate::energy::{least_deviation_member, optimal_normal, proxy_energy};
use crate::error::{CoreError, CoreResult};

/// Relative tolerance for the cached-energy consistency check.
const ENERGY_CACHE_TOL: f64 = 1e-9;

/// A planar proxy: members, representative center point, unit normal and
/// cached member energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Proxy {
    /// Dense id; equals the proxy's position in `Segmentation::proxies`.
    pub id: usize,
    /// Member point indices, sorted ascending.
    pub members: Vec<usize>,
    /// Index of the member point the proxy plane passes through.
    pub center: usize,
    /// Unit proxy normal.
    pub normal: Vector3<f64>,
    /// Cached `sum of w_j |n_j - normal|^2` over the members.
    pub energy: f64,
}

impl Proxy {
    /// Fits a proxy to a member set: the energy-minimizing normal, the
    /// member of least normal deviation as center, and the cached energy.
    pub fn fit(cloud: &PointCloud, id: usize, mut members: Vec<usize>) -> CoreResult<Self> {
        members.sort_unstable();
        let normal = optimal_normal(cloud, &members, id)?;
        let center = least_deviation_member(cloud, &members, &normal);
        let energy = proxy_energy(cloud, &members, &normal);
        Ok(Self {
            id,
            members,
            center,
            normal,
            energy,
        })
    }

    /// Number of member points.
    #[inline]
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The proxy plane as (base point, unit normal).
    #[inline]
    pub fn plane(&self, cloud: &PointCloud) -> (Point3<f64>, Vector3<f64>) {
        (cloud.position(self.center), self.normal)
    }
}

/// A partition of a point cloud into planar proxies.
#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    /// `assignment[j]` is the proxy id of point `j`, or `None` while a
    /// region-growing pass is still underway.
    pub assignment: Vec<Option<usize>>,
    /// Proxies with dense ids: `proxies[i].id == i`.
    pub proxies: Vec<Proxy>,
}

impl Segmentation {
    /// Number of proxies.
    #[inline]
    pub fn proxy_count(&self) -> usize {
        self.proxies.len()
    }

    /// Builds a segmentation from per-point labels by fitting one proxy per
    /// distinct label. Labels are renumbered densely in ascending order.
    pub fn from_labels(cloud: &PointCloud, labels: &[usize]) -> CoreResult<Self> {
        if labels.len() != cloud.len() {
            return Err(CoreError::InvalidSegmentation {
                reason: format!(
                    "label array has {} entries for {} points",
                    labels.len(),
                    cloud.len()
                ),
            });
        }
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let dense = |label: usize| distinct.binary_search(&label).expect("label is present");

        let mut member_lists: Vec<Vec<usize>> = vec![Vec::new(); distinct.len()];
        let mut assignment = Vec::with_capacity(labels.len());
        for (j, &label) in labels.iter().enumerate() {
            let id = dense(label);
            member_lists[id].push(j);
            assignment.push(Some(id));
        }
        let proxies = member_lists
            .into_iter()
            .enumerate()
            .map(|(id, members)| Proxy::fit(cloud, id, members))
            .collect::<CoreResult<Vec<_>>>()?;
        Ok(Self {
            assignment,
            proxies,
        })
    }

    /// Checks every structural invariant against the cloud:
    /// dense ids, sorted unique member lists, assignment/membership
    /// consistency, centers inside their member sets, unit normals, and
    /// cached energies within relative tolerance of recomputation.
    pub fn validate(&self, cloud: &PointCloud) -> CoreResult<()> {
        let fail = |reason: String| Err(CoreError::InvalidSegmentation { reason });
        if self.assignment.len() != cloud.len() {
            return fail(format!(
                "assignment covers {} of {} points",
                self.assignment.len(),
                cloud.len()
            ));
        }
        let mut member_count = 0usize;
        for (position, proxy) in self.proxies.iter().enumerate() {
            if proxy.id != position {
                return fail(format!("proxy at slot {position} has id {}", proxy.id));
            }
            if proxy.members.is_empty() {
                return fail(format!("proxy {} has no members", proxy.id));
            }
            if !proxy.members.windows(2).all(|w| w[0] < w[1]) {
                return fail(format!("members of proxy {} are not sorted unique", proxy.id));
            }
            if *proxy.members.last().expect("non-empty") >= cloud.len() {
                return fail(format!("proxy {} references an out-of-range point", proxy.id));
            }
            if !proxy.members.contains(&proxy.center) {
                return fail(format!(
                    "center {} of proxy {} is not one of its members",
                    proxy.center, proxy.id
                ));
            }
            if (proxy.normal.norm() - 1.0).abs() > 1e-9 {
                return fail(format!("normal of proxy {} is not unit length", proxy.id));
            }
            for &j in &proxy.members {
                if self.assignment[j] != Some(proxy.id) {
                    return fail(format!(
                        "point {j} is a member of proxy {} but assigned to {:?}",
                        proxy.id, self.assignment[j]
                    ));
                }
            }
            let recomputed = proxy_energy(cloud, &proxy.members, &proxy.normal);
            let scale = recomputed.abs().max(1.0);
            if (proxy.energy - recomputed).abs() > ENERGY_CACHE_TOL * scale {
                return fail(format!(
                    "cached energy {} of proxy {} differs from recomputed {}",
                    proxy.energy, proxy.id, recomputed
                ));
            }
            member_count += proxy.members.len();
        }
        let assigned = self.assignment.iter().flatten().count();
        if member_count != assigned {
            return fail(format!(
                "{member_count} proxy members vs {assigned} assigned points"
            ));
        }
        for (j, &slot) in self.assignment.iter().enumerate() {
            if let Some(id) = slot {
                if id >= self.proxies.len() {
                    return fail(format!("point {j} assigned to unknown proxy {id}"));
                }
            }
        }
        Ok(())
    }

    /// Like [`Segmentation::validate`], but additionally requires every
    /// point to be assigned.
    pub fn validate_complete(&self, cloud: &PointCloud) -> CoreResult<()> {
        self.validate(cloud)?;
        for (j, slot) in self.assignment.iter().enumerate() {
            if slot.is_none() {
                return Err(CoreError::UnassignedPoint { index: j });
            }
        }
        Ok(())
    }
}
