//! Segmentation persistence: label CSV plus a JSON sidecar of proxies.
//!
//! The CSV holds one `point_index,proxy_id` row per point in index order.
//! The sidecar records each proxy's id, center point index, fitted normal,
//! energy and member count. Loading goes through `Segmentation::from_labels`,
//! which refits every proxy, so reloaded energies are recomputed rather than
//! trusted from the file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use vsa_core::{PointCloud, Segmentation};

use crate::error::{CliError, CliResult};
use crate::ply::write_atomically;

/// Writes `point_index,proxy_id` rows for every point, in index order.
pub fn save_labels_csv(segmentation: &Segmentation, path: &Path) -> CliResult<()> {
    let mut out = String::from("point_index,proxy_id\n");
    for (j, slot) in segmentation.assignment.iter().enumerate() {
        let proxy = slot.ok_or_else(|| {
            CliError::Data(format!("point {j} has no proxy and cannot be exported"))
        })?;
        out.push_str(&format!("{j},{proxy}\n"));
    }
    write_atomically(path, out.as_bytes())
}

/// Reads a label CSV back into one proxy id per point.
pub fn load_labels_csv(path: &Path) -> CliResult<Vec<usize>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "point_index,proxy_id" => {}
        Some((_, header)) => {
            return Err(CliError::Data(format!(
                "{}: expected header 'point_index,proxy_id', found '{header}'",
                path.display()
            )))
        }
        None => {
            return Err(CliError::Data(format!(
                "{}: empty label file",
                path.display()
            )))
        }
    }
    let mut labels = Vec::new();
    for (index, line) in lines {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (point, proxy) = match (fields.next(), fields.next(), fields.next()) {
            (Some(point), Some(proxy), None) => (point.trim(), proxy.trim()),
            _ => {
                return Err(CliError::Data(format!(
                    "{}:{line_no}: expected two comma-separated fields",
                    path.display()
                )))
            }
        };
        let point: usize = point.parse().map_err(|_| {
            CliError::Data(format!(
                "{}:{line_no}: bad point index '{point}'",
                path.display()
            ))
        })?;
        if point != labels.len() {
            return Err(CliError::Data(format!(
                "{}:{line_no}: point index {point} out of order, expected {}",
                path.display(),
                labels.len()
            )));
        }
        let proxy: usize = proxy.parse().map_err(|_| {
            CliError::Data(format!(
                "{}:{line_no}: bad proxy id '{proxy}'",
                path.display()
            ))
        })?;
        labels.push(proxy);
    }
    if labels.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no label rows",
            path.display()
        )));
    }
    Ok(labels)
}

/// Rebuilds a segmentation from a label CSV, refitting every proxy.
pub fn load_segmentation(cloud: &PointCloud, path: &Path) -> CliResult<Segmentation> {
    let labels = load_labels_csv(path)?;
    if labels.len() != cloud.len() {
        return Err(CliError::Data(format!(
            "{}: {} label rows for a cloud of {} points",
            path.display(),
            labels.len(),
            cloud.len()
        )));
    }
    Ok(Segmentation::from_labels(cloud, &labels)?)
}

/// One proxy as stored in the JSON sidecar.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProxyRecord {
    pub id: usize,
    /// Index of the member point the proxy plane passes through.
    pub center_index: usize,
    pub normal: [f64; 3],
    pub energy: f64,
    pub member_count: usize,
}

/// Writes the per-proxy sidecar (id, center index, normal, energy, size).
pub fn save_proxies_json(segmentation: &Segmentation, path: &Path) -> CliResult<()> {
    let records: Vec<ProxyRecord> = segmentation
        .proxies
        .iter()
        .map(|p| ProxyRecord {
            id: p.id,
            center_index: p.center,
            normal: [p.normal.x, p.normal.y, p.normal.z],
            energy: p.energy,
            member_count: p.members.len(),
        })
        .collect();
    let json = serde_json::to_string_pretty(&records)?;
    write_atomically(path, json.as_bytes())
}

/// Reads the per-proxy sidecar back.
pub fn load_proxies_json(path: &Path) -> CliResult<Vec<ProxyRecord>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}
