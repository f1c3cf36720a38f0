//! PLY point-cloud reading and writing.
//!
//! Reads ascii and binary-little-endian PLY files whose first element is
//! `vertex` with scalar properties including `x y z nx ny nz` (float or
//! double); other properties are skipped, trailing elements (such as faces)
//! are ignored. Oriented normals are a hard requirement of the pipeline, so
//! files without them are rejected outright.
//!
//! Writing uses binary little-endian doubles, which round-trips positions
//! bit for bit. A separate ascii writer adds one deterministic color per
//! proxy for visual inspection of segmentations.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{Point3, Vector3};

use vsa_core::{PointCloud, Segmentation};

use crate::error::{CliError, CliResult};

/// Scalar PLY property types, with their binary widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    fn parse(token: &str) -> Option<Self> {
        match token {
            "char" | "int8" => Some(ScalarType::I8),
            "uchar" | "uint8" => Some(ScalarType::U8),
            "short" | "int16" => Some(ScalarType::I16),
            "ushort" | "uint16" => Some(ScalarType::U16),
            "int" | "int32" => Some(ScalarType::I32),
            "uint" | "uint32" => Some(ScalarType::U32),
            "float" | "float32" => Some(ScalarType::F32),
            "double" | "float64" => Some(ScalarType::F64),
            _ => None,
        }
    }

    fn width(self) -> usize {
        match self {
            ScalarType::I8 | ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::I32 | ScalarType::U32 | ScalarType::F32 => 4,
            ScalarType::F64 => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Ascii,
    BinaryLittleEndian,
}

#[derive(Debug)]
struct Header {
    format: Format,
    vertex_count: usize,
    /// Scalar vertex properties in declaration order.
    properties: Vec<(String, ScalarType)>,
    /// Byte offset of the first payload byte.
    payload_start: usize,
    /// Header lines consumed, for ascii line reporting.
    header_lines: usize,
}

/// Loads an oriented point cloud from a PLY file.
pub fn load_ply(path: &Path) -> CliResult<PointCloud> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let header = parse_header(path, &bytes)?;

    let field = |name: &str| -> Option<usize> {
        header.properties.iter().position(|(n, _)| n == name)
    };
    for coordinate in ["x", "y", "z"] {
        if field(coordinate).is_none() {
            return Err(CliError::Data(format!(
                "{}: vertex element lacks required property '{coordinate}'",
                path.display()
            )));
        }
    }
    if ["nx", "ny", "nz"].iter().any(|n| field(n).is_none()) {
        return Err(CliError::Data(format!(
            "{}: normals required — vertex element lacks nx/ny/nz properties \
             (the pipeline needs oriented normals)",
            path.display()
        )));
    }
    let slots: Vec<usize> = ["x", "y", "z", "nx", "ny", "nz"]
        .iter()
        .map(|n| field(n).expect("checked above"))
        .collect();

    let rows = match header.format {
        Format::Ascii => read_ascii_rows(path, &bytes, &header)?,
        Format::BinaryLittleEndian => read_binary_rows(path, &bytes, &header)?,
    };

    let mut positions = Vec::with_capacity(header.vertex_count);
    let mut normals = Vec::with_capacity(header.vertex_count);
    for (index, row) in rows.iter().enumerate() {
        let value = |slot: usize| row[slots[slot]];
        let position = [value(0), value(1), value(2)];
        let normal = [value(3), value(4), value(5)];
        if position.iter().chain(normal.iter()).any(|v| !v.is_finite()) {
            return Err(CliError::Data(format!(
                "{}: vertex {index} has a non-finite coordinate",
                path.display()
            )));
        }
        positions.push(Point3::new(position[0], position[1], position[2]));
        normals.push(Vector3::new(normal[0], normal[1], normal[2]));
    }
    PointCloud::with_unit_weights(positions, normals)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn parse_header(path: &Path, bytes: &[u8]) -> CliResult<Header> {
    let fail = |line: usize, message: String| {
        Err(CliError::Data(format!(
            "{}:{line}: {message}",
            path.display()
        )))
    };
    fn next_line(bytes: &[u8], offset: &mut usize, line_number: &mut usize) -> Option<String> {
        if *offset >= bytes.len() {
            return None;
        }
        let end = bytes[*offset..]
            .iter()
            .position(|&b| b == b'\n')
            .map_or(bytes.len(), |p| *offset + p);
        let line = String::from_utf8_lossy(&bytes[*offset..end])
            .trim_end_matches('\r')
            .to_string();
        *offset = (end + 1).min(bytes.len());
        *line_number += 1;
        Some(line)
    }

    let mut offset = 0usize;
    let mut line_number = 0usize;
    let Some(magic) = next_line(bytes, &mut offset, &mut line_number) else {
        return fail(1, "empty file".into());
    };
    if magic.trim() != "ply" {
        return fail(1, "not a PLY file (missing 'ply' magic)".into());
    }

    let mut format = None;
    let mut vertex_count = None;
    let mut properties = Vec::new();
    let mut current_element: Option<String> = None;
    loop {
        let Some(line) = next_line(bytes, &mut offset, &mut line_number) else {
            return fail(line_number, "header ends before end_header".into());
        };
        let line_no = line_number;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] | ["comment", ..] | ["obj_info", ..] => {}
            ["end_header"] => break,
            ["format", kind, "1.0"] => {
                format = match *kind {
                    "ascii" => Some(Format::Ascii),
                    "binary_little_endian" => Some(Format::BinaryLittleEndian),
                    other => {
                        return fail(line_no, format!("unsupported format '{other}'"));
                    }
                };
            }
            ["element", name, count] => {
                if *name == "vertex" {
                    if vertex_count.is_some() {
                        return fail(line_no, "duplicate vertex element".into());
                    }
                    if current_element.is_some() {
                        return fail(
                            line_no,
                            "vertex element must be the first element".into(),
                        );
                    }
                    let Ok(parsed) = count.parse::<usize>() else {
                        return fail(line_no, format!("bad vertex count '{count}'"));
                    };
                    vertex_count = Some(parsed);
                }
                current_element = Some((*name).to_string());
            }
            ["property", "list", ..] => {
                if current_element.as_deref() == Some("vertex") {
                    return fail(
                        line_no,
                        "list properties on the vertex element are not supported".into(),
                    );
                }
            }
            ["property", kind, name] => {
                if current_element.as_deref() == Some("vertex") {
                    let Some(scalar) = ScalarType::parse(kind) else {
                        return fail(line_no, format!("unknown property type '{kind}'"));
                    };
                    properties.push(((*name).to_string(), scalar));
                }
            }
            _ => {
                return fail(line_no, format!("unrecognized header line '{line}'"));
            }
        }
    }

    let Some(format) = format else {
        return fail(line_number, "header lacks a format line".into());
    };
    let Some(vertex_count) = vertex_count else {
        return fail(line_number, "header lacks a vertex element".into());
    };
    if properties.is_empty() {
        return fail(line_number, "vertex element has no properties".into());
    }
    Ok(Header {
        format,
        vertex_count,
        properties,
        payload_start: offset.min(bytes.len()),
        header_lines: line_number,
    })
}

fn read_ascii_rows(path: &Path, bytes: &[u8], header: &Header) -> CliResult<Vec<Vec<f64>>> {
    let text = String::from_utf8_lossy(&bytes[header.payload_start..]);
    let width = header.properties.len();
    let mut rows = Vec::with_capacity(header.vertex_count);
    let mut row = Vec::with_capacity(width);
    'outer: for (offset, line) in text.lines().enumerate() {
        let line_no = header.header_lines + offset + 1;
        for token in line.split_whitespace() {
            let value = token.parse::<f64>().map_err(|_| {
                CliError::Data(format!(
                    "{}:{line_no}: expected a number, found '{token}'",
                    path.display()
                ))
            })?;
            row.push(value);
            if row.len() == width {
                rows.push(std::mem::take(&mut row));
                row.reserve(width);
                if rows.len() == header.vertex_count {
                    break 'outer;
                }
            }
        }
    }
    if rows.len() < header.vertex_count {
        return Err(CliError::Data(format!(
            "{}: file ends after {} of {} vertex records",
            path.display(),
            rows.len(),
            header.vertex_count
        )));
    }
    Ok(rows)
}

fn read_binary_rows(path: &Path, bytes: &[u8], header: &Header) -> CliResult<Vec<Vec<f64>>> {
    let stride: usize = header.properties.iter().map(|(_, t)| t.width()).sum();
    let needed = stride * header.vertex_count;
    let payload = &bytes[header.payload_start.min(bytes.len())..];
    if payload.len() < needed {
        return Err(CliError::Data(format!(
            "{}: payload holds {} bytes at byte offset {} but {} vertices of stride {} \
             need {needed}",
            path.display(),
            payload.len(),
            header.payload_start,
            header.vertex_count,
            stride
        )));
    }
    let mut rows = Vec::with_capacity(header.vertex_count);
    for v in 0..header.vertex_count {
        let mut cursor = v * stride;
        let mut row = Vec::with_capacity(header.properties.len());
        for (_, scalar) in &header.properties {
            let end = cursor + scalar.width();
            let chunk = &payload[cursor..end];
            let value = match scalar {
                ScalarType::I8 => chunk[0] as i8 as f64,
                ScalarType::U8 => chunk[0] as f64,
                ScalarType::I16 => i16::from_le_bytes([chunk[0], chunk[1]]) as f64,
                ScalarType::U16 => u16::from_le_bytes([chunk[0], chunk[1]]) as f64,
                ScalarType::I32 => {
                    i32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64
                }
                ScalarType::U32 => {
                    u32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64
                }
                ScalarType::F32 => {
                    f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64
                }
                ScalarType::F64 => f64::from_le_bytes(
                    chunk.try_into().expect("slice has width 8"),
                ),
            };
            row.push(value);
            cursor = end;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Writes the cloud as binary little-endian PLY with double precision;
/// positions survive a save/load round trip bit for bit.
pub fn save_cloud_ply(cloud: &PointCloud, path: &Path) -> CliResult<()> {
    let mut out = Vec::with_capacity(128 + cloud.len() * 48);
    out.extend_from_slice(b"ply\n");
    out.extend_from_slice(b"format binary_little_endian 1.0\n");
    out.extend_from_slice(format!("element vertex {}\n", cloud.len()).as_bytes());
    for name in ["x", "y", "z", "nx", "ny", "nz"] {
        out.extend_from_slice(format!("property double {name}\n").as_bytes());
    }
    out.extend_from_slice(b"end_header\n");
    for j in 0..cloud.len() {
        let p = cloud.position(j);
        let n = cloud.normal(j);
        for value in [p.x, p.y, p.z, n.x, n.y, n.z] {
            out.extend_from_slice(&value.to_le_bytes());
        }
    }
    write_atomically(path, &out)
}

/// Writes an ascii PLY of the cloud with one deterministic color per proxy,
/// for eyeballing segmentations in any viewer.
pub fn save_segmentation_ply(
    cloud: &PointCloud,
    segmentation: &Segmentation,
    path: &Path,
) -> CliResult<()> {
    if segmentation.assignment.len() != cloud.len() {
        return Err(CliError::Data(format!(
            "segmentation covers {} points but the cloud has {}",
            segmentation.assignment.len(),
            cloud.len()
        )));
    }
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    out.push_str(&format!("element vertex {}\n", cloud.len()));
    for name in ["x", "y", "z", "nx", "ny", "nz"] {
        out.push_str(&format!("property double {name}\n"));
    }
    for name in ["red", "green", "blue"] {
        out.push_str(&format!("property uchar {name}\n"));
    }
    out.push_str("end_header\n");
    for j in 0..cloud.len() {
        let p = cloud.position(j);
        let n = cloud.normal(j);
        let proxy = segmentation.assignment[j].ok_or_else(|| {
            CliError::Data(format!("point {j} is unassigned; cannot color it"))
        })?;
        let [r, g, b] = palette_color(proxy);
        out.push_str(&format!(
            "{} {} {} {} {} {} {r} {g} {b}\n",
            p.x, p.y, p.z, n.x, n.y, n.z
        ));
    }
    write_atomically(path, out.as_bytes())
}

/// One of 256 fixed colors, indexed by proxy id modulo 256. Hues step by the
/// golden-angle fraction so nearby ids get clearly different colors.
pub fn palette_color(proxy: usize) -> [u8; 3] {
    let hue = (((proxy % 256) as f64) * 0.618_033_988_749_895).fract() * 360.0;
    hsv_to_rgb(hue, 0.65, 0.95)
}

fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> [u8; 3] {
    let c = value * saturation;
    let sector = hue / 60.0;
    let x = c * (1.0 - (sector % 2.0 - 1.0).abs());
    let (r, g, b) = match sector as usize {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = value - c;
    let quantize = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    [quantize(r), quantize(g), quantize(b)]
}

/// Writes via a sibling temp file and rename so readers never observe a
/// half-written artifact.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(parent) = parent {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Data(format!("cannot create {}: {e}", parent.display())))?;
    }
    let mut temp = path.as_os_str().to_owned();
    temp.push(".tmp");
    let temp = std::path::PathBuf::from(temp);
    let mut file = fs::File::create(&temp)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", temp.display())))?;
    file.write_all(bytes)
        .and_then(|()| file.flush())
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", temp.display())))?;
    drop(file);
    fs::rename(&temp, path)
        .map_err(|e| CliError::Data(format!("cannot move output into {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use tempfile::tempdir;

    fn write(path: &Path, contents: &str) {
        fs::write(path, contents).unwrap();
    }

    fn sample_cloud() -> PointCloud {
        let positions = vec![
            Point3::new(0.125, -3.5, 2.0e-7),
            Point3::new(1.0, 2.0, 3.0),
            Point3::new(-0.1, 0.7, 0.3333333333333333),
        ];
        let normals = vec![
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::new(-0.2, 0.5, 0.9),
        ];
        PointCloud::with_unit_weights(positions, normals).unwrap()
    }

    #[test]
    fn ascii_cloud_loads_with_exact_positions() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("three.ply");
        write(
            &path,
            "ply\n\
             format ascii 1.0\n\
             comment three oriented points\n\
             element vertex 3\n\
             property float x\nproperty float y\nproperty float z\n\
             property float nx\nproperty float ny\nproperty float nz\n\
             end_header\n\
             0 0 0 0 0 1\n\
             1 0 0 0 1 0\n\
             0 1 0 1 0 0\n",
        );
        let cloud = load_ply(&path).unwrap();
        assert_eq!(cloud.len(), 3);
        assert_eq!(cloud.position(1), Point3::new(1.0, 0.0, 0.0));
        assert_relative_eq!(cloud.normal(2), Vector3::x(), epsilon = 1e-15);
    }

    #[test]
    fn extra_properties_and_face_elements_are_ignored() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("extra.ply");
        write(
            &path,
            "ply\n\
             format ascii 1.0\n\
             element vertex 2\n\
             property float x\nproperty float y\nproperty float z\n\
             property uchar red\n\
             property float nx\nproperty float ny\nproperty float nz\n\
             element face 1\n\
             property list uchar int vertex_indices\n\
             end_header\n\
             0 0 0 255 0 0 1\n\
             1 0 0 128 0 0 1\n\
             2 0 1\n",
        );
        let cloud = load_ply(&path).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.position(1), Point3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn missing_normals_are_a_hard_error() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bare.ply");
        write(
            &path,
            "ply\nformat ascii 1.0\nelement vertex 1\n\
             property float x\nproperty float y\nproperty float z\n\
             end_header\n0 0 0\n",
        );
        let err = load_ply(&path).unwrap_err();
        assert!(err.to_string().contains("normals required"), "{err}");
    }

    #[test]
    fn bad_token_reports_its_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.ply");
        write(
            &path,
            "ply\nformat ascii 1.0\nelement vertex 2\n\
             property float x\nproperty float y\nproperty float z\n\
             property float nx\nproperty float ny\nproperty float nz\n\
             end_header\n\
             0 0 0 0 0 1\n\
             0 oops 0 0 0 1\n",
        );
        let err = load_ply(&path).unwrap_err();
        let message = err.to_string();
        assert!(message.contains(":12:"), "line number missing: {message}");
        assert!(message.contains("oops"), "{message}");
    }

    #[test]
    fn non_finite_coordinates_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("nan.ply");
        write(
            &path,
            "ply\nformat ascii 1.0\nelement vertex 1\n\
             property float x\nproperty float y\nproperty float z\n\
             property float nx\nproperty float ny\nproperty float nz\n\
             end_header\n\
             0 nan 0 0 0 1\n",
        );
        let err = load_ply(&path).unwrap_err();
        assert!(err.to_string().contains("non-finite"), "{err}");
    }

    #[test]
    fn binary_round_trip_is_bitwise_for_positions() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cloud.ply");
        let cloud = sample_cloud();
        save_cloud_ply(&cloud, &path).unwrap();
        let reloaded = load_ply(&path).unwrap();
        assert_eq!(reloaded.len(), cloud.len());
        for j in 0..cloud.len() {
            for t in 0..3 {
                assert_eq!(
                    cloud.position(j)[t].to_bits(),
                    reloaded.position(j)[t].to_bits(),
                    "position {j}[{t}] changed bits"
                );
            }
            assert_relative_eq!(cloud.normal(j), reloaded.normal(j), epsilon = 1e-15);
        }
    }

    #[test]
    fn truncated_binary_payload_reports_offsets() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cloud.ply");
        save_cloud_ply(&sample_cloud(), &path).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 5);
        fs::write(&path, &bytes).unwrap();
        let err = load_ply(&path).unwrap_err();
        assert!(err.to_string().contains("byte offset"), "{err}");
    }

    #[test]
    fn mixed_float_and_double_binary_properties_load() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("mixed.ply");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(
            b"ply\nformat binary_little_endian 1.0\nelement vertex 1\n\
              property double x\nproperty double y\nproperty double z\n\
              property float nx\nproperty float ny\nproperty float nz\n\
              end_header\n",
        );
        for v in [0.5f64, -1.25, 8.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        for v in [0.0f32, 0.0, 1.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fs::write(&path, &bytes).unwrap();
        let cloud = load_ply(&path).unwrap();
        assert_eq!(cloud.position(0), Point3::new(0.5, -1.25, 8.0));
        assert_eq!(cloud.normal(0), Vector3::z());
    }

    #[test]
    fn colored_segmentation_ply_is_deterministic() {
        let dir = tempdir().unwrap();
        let cloud = sample_cloud();
        let segmentation = Segmentation::from_labels(&cloud, &[0, 1, 0]).unwrap();
        let a = dir.path().join("a.ply");
        let b = dir.path().join("b.ply");
        save_segmentation_ply(&cloud, &segmentation, &a).unwrap();
        save_segmentation_ply(&cloud, &segmentation, &b).unwrap();
        let first = fs::read(&a).unwrap();
        assert_eq!(first, fs::read(&b).unwrap());
        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with("ply\nformat ascii 1.0\n"));
        // Points 0 and 2 share proxy 0's color; point 1 differs.
        let lines: Vec<&str> = text.lines().rev().take(3).collect();
        let color = |line: &str| {
            line.split_whitespace()
                .rev()
                .take(3)
                .map(str::to_owned)
                .collect::<Vec<_>>()
        };
        assert_eq!(color(lines[0]), color(lines[2]));
        assert_ne!(color(lines[0]), color(lines[1]));
    }

    #[test]
    fn palette_colors_are_distinct_for_small_ids() {
        let mut seen = std::collections::BTreeSet::new();
        for id in 0..32 {
            seen.insert(palette_color(id));
        }
        assert_eq!(seen.len(), 32);
        assert_eq!(palette_color(7), palette_color(7 + 256));
    }
}
