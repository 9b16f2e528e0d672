//! Text formats for meshes and cells.
//!
//! Meshes use an OFF dialect for R⁴: the `4OFF` magic line is followed by an
//! extension header line
//!
//! ```text
//! # plcone-mesh version=1 kind=<complex3|skeleton|cell> fixed=<0|1>
//! ```
//!
//! then the usual `V C 0` count line, one vertex per line with four
//! coordinates (and a trailing `0`/`1` fixed flag when `fixed=1`), and one
//! cell per line as a vertex count followed by indices. Coordinates are
//! written in shortest round-trip form, so a write/parse cycle is exact.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cells::{realize_cell, CellRealization, CellType};
use crate::evolver::{pop, EvolverError, PopCell, PopSpec};
use crate::geom::Vec4;
use crate::mass::{cone_complex, Complex3, Hull, MassError};
use crate::partition::{build_partition, PartitionComplex, PartitionError, PartitionLabel};

pub const OFF_MAGIC: &str = "4OFF";
const HEADER: &str = "# plcone-mesh";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("unknown format '{0}'")]
    UnknownFormat(String),
    #[error("cannot build {object}: {reason}")]
    Build { object: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshKind {
    Complex3,
    Skeleton,
    Cell,
}

impl MeshKind {
    fn name(self) -> &'static str {
        match self {
            MeshKind::Complex3 => "complex3",
            MeshKind::Skeleton => "skeleton",
            MeshKind::Cell => "cell",
        }
    }
}

impl FromStr for MeshKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "complex3" => Ok(MeshKind::Complex3),
            "skeleton" => Ok(MeshKind::Skeleton),
            "cell" => Ok(MeshKind::Cell),
            _ => Err(format!("unknown mesh kind '{s}'")),
        }
    }
}

/// A polyhedral complex in R⁴ in file form.
#[derive(Clone, Debug, PartialEq)]
pub struct OffMesh {
    pub kind: MeshKind,
    pub vertices: Vec<Vec4>,
    pub fixed: Option<Vec<bool>>,
    pub cells: Vec<Vec<usize>>,
}

impl OffMesh {
    pub fn from_complex(c: &Complex3) -> Self {
        OffMesh {
            kind: MeshKind::Complex3,
            vertices: c.vertices.clone(),
            fixed: Some(c.fixed.clone()),
            cells: c.tets.iter().map(|t| t.to_vec()).collect(),
        }
    }

    /// Polygonal 2-faces of a partition; smooth faces without corners are
    /// omitted.
    pub fn from_skeleton(p: &PartitionComplex) -> Self {
        OffMesh {
            kind: MeshKind::Skeleton,
            vertices: p.vertices.clone(),
            fixed: None,
            cells: p.faces.iter().filter(|f| f.vertices.len() >= 3).map(|f| f.vertices.clone()).collect(),
        }
    }

    pub fn from_cell(c: &CellRealization) -> Self {
        OffMesh {
            kind: MeshKind::Cell,
            vertices: c.vertices.clone(),
            fixed: None,
            cells: c.faces.iter().filter(|f| f.vertices.len() >= 3).map(|f| f.vertices.clone()).collect(),
        }
    }

    /// Back to a simplicial complex; every cell must be a tetrahedron.
    pub fn into_complex(self) -> Result<Complex3, IoError> {
        let n = self.vertices.len();
        let tets = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                <[usize; 4]>::try_from(c.as_slice()).map_err(|_| IoError::Parse {
                    line: 0,
                    message: format!("cell {i} has {} vertices, expected 4", c.len()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Complex3 {
            vertices: self.vertices,
            tets,
            fixed: self.fixed.unwrap_or_else(|| vec![false; n]),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let has_fixed = self.fixed.is_some();
        let _ = writeln!(s, "{OFF_MAGIC}");
        let _ = writeln!(
            s,
            "{HEADER} version={FORMAT_VERSION} kind={} fixed={}",
            self.kind.name(),
            u8::from(has_fixed)
        );
        let _ = writeln!(s, "{} {} 0", self.vertices.len(), self.cells.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = write!(s, "{:?} {:?} {:?} {:?}", v[0], v[1], v[2], v[3]);
            if let Some(f) = &self.fixed {
                let _ = write!(s, " {}", u8::from(f[i]));
            }
            s.push('\n');
        }
        for c in &self.cells {
            let _ = write!(s, "{}", c.len());
            for i in c {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let err = |line: usize, message: String| IoError::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, OFF_MAGIC)) => {}
            Some((n, l)) => return Err(err(n, format!("expected {OFF_MAGIC}, found '{l}'"))),
            None => return Err(err(1, "empty input".into())),
        }
        let mut kind = MeshKind::Complex3;
        let mut has_fixed = false;
        let mut body = Vec::new();
        for (n, l) in lines {
            if let Some(rest) = l.strip_prefix(HEADER) {
                for kv in rest.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("version", v)) => {
                            if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                                return Err(err(n, format!("unsupported version {v}")));
                            }
                        }
                        Some(("kind", v)) => kind = v.parse().map_err(|m| err(n, m))?,
                        Some(("fixed", v)) => has_fixed = v == "1",
                        _ => return Err(err(n, format!("bad header field '{kv}'"))),
                    }
                }
            } else if !l.is_empty() && !l.starts_with('#') {
                body.push((n, l));
            }
        }
        let mut body = body.into_iter();
        let (n0, counts) = body.next().ok_or_else(|| err(2, "missing count line".into()))?;
        let counts: Vec<usize> = counts
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| err(n0, e.to_string())))
            .collect::<Result<_, _>>()?;
        if counts.len() != 3 {
            return Err(err(n0, "count line needs three integers".into()));
        }
        let (nv, nc) = (counts[0], counts[1]);
        let mut vertices = Vec::with_capacity(nv);
        let mut fixed = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (n, l) = body.next().ok_or_else(|| err(0, "truncated vertex list".into()))?;
            let t: Vec<&str> = l.split_whitespace().collect();
            let want = if has_fixed { 5 } else { 4 };
            if t.len() != want {
                return Err(err(n, format!("expected {want} fields, found {}", t.len())));
            }
            let mut v = Vec4::zeros();
            for k in 0..4 {
                v[k] = t[k].parse::<f64>().map_err(|e| err(n, e.to_string()))?;
            }
            vertices.push(v);
            if has_fixed {
                fixed.push(match t[4] {
                    "0" => false,
                    "1" => true,
                    f => return Err(err(n, format!("bad fixed flag '{f}'"))),
                });
            }
        }
        let mut cells = Vec::with_capacity(nc);
        for _ in 0..nc {
            let (n, l) = body.next().ok_or_else(|| err(0, "truncated cell list".into()))?;
            let t: Vec<usize> = l
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|e| err(n, e.to_string())))
                .collect::<Result<_, _>>()?;
            if t.is_empty() || t[0] + 1 != t.len() {
                return Err(err(n, "cell length does not match its count".into()));
            }
            if let Some(&bad) = t[1..].iter().find(|&&i| i >= nv) {
                return Err(err(n, format!("vertex index {bad} out of range")));
            }
            cells.push(t[1..].to_vec());
        }
        if let Some((n, _)) = body.next() {
            return Err(err(n, "trailing data".into()));
        }
        Ok(OffMesh {
            kind,
            vertices,
            fixed: has_fixed.then_some(fixed),
            cells,
        })
    }
}

fn arr(v: &Vec4) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

#[derive(Serialize)]
struct FaceJson {
    class: String,
    vertices: Vec<usize>,
    normal: [f64; 4],
}

#[derive(Serialize)]
struct CellJson {
    format_version: u32,
    cell_type: String,
    vertex_count: usize,
    face_count: usize,
    residual: f64,
    status: crate::cells::RealizationStatus,
    vertices: Vec<[f64; 4]>,
    faces: Vec<FaceJson>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct PartitionJson {
    format_version: u32,
    label: String,
    counts: [usize; 4],
    euler: i64,
    residual: f64,
    status: crate::cells::RealizationStatus,
    cell_types: Vec<String>,
    vertices: Vec<[f64; 4]>,
    faces: Vec<FaceJson>,
    dual_edges: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct ComplexJson {
    format_version: u32,
    mass: f64,
    vertices: Vec<[f64; 4]>,
    tets: Vec<[usize; 4]>,
    fixed: Vec<bool>,
}

pub fn cell_json(c: &CellRealization) -> String {
    let j = CellJson {
        format_version: FORMAT_VERSION,
        cell_type: c.cell_type.to_string(),
        vertex_count: c.vertices.len(),
        face_count: c.faces.len(),
        residual: c.residual,
        status: c.status,
        vertices: c.vertices.iter().map(arr).collect(),
        faces: c
            .faces
            .iter()
            .map(|f| FaceJson {
                class: f.class.tag(),
                vertices: f.vertices.clone(),
                normal: arr(&f.normal),
            })
            .collect(),
        notes: c.notes.clone(),
    };
    to_json(&j)
}

pub fn partition_json(p: &PartitionComplex) -> String {
    let (v, e, f, c) = p.counts();
    let j = PartitionJson {
        format_version: FORMAT_VERSION,
        label: p.label.to_string(),
        counts: [v, e, f, c],
        euler: p.euler(),
        residual: p.residual,
        status: p.status,
        cell_types: p.cells.iter().map(|c| c.cell_type.to_string()).collect(),
        vertices: p.vertices.iter().map(arr).collect(),
        faces: p
            .faces
            .iter()
            .map(|f| FaceJson {
                class: f.class.tag(),
                vertices: f.vertices.clone(),
                normal: arr(&f.normal),
            })
            .collect(),
        dual_edges: p.faces.iter().map(|f| f.cells).collect(),
    };
    to_json(&j)
}

pub fn complex_json(c: &Complex3) -> String {
    let j = ComplexJson {
        format_version: FORMAT_VERSION,
        mass: c.mass(),
        vertices: c.vertices.iter().map(arr).collect(),
        tets: c.tets.clone(),
        fixed: c.fixed.clone(),
    };
    to_json(&j)
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("plain data serializes");
    s.push('\n');
    s
}

/// Something that can be exported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportObject {
    Empty,
    Cell(CellType),
    Skeleton(PartitionLabel),
    Cone(PartitionLabel),
    Popped(PartitionLabel, PopCell),
}

impl FromStr for ExportObject {
    type Err = IoError;

    /// `empty`, `C8`, `cell:C8`, `T4`, `skeleton:T4`, `cone:T5` or
    /// `pop:T5:C4`.
    fn from_str(s: &str) -> Result<Self, IoError> {
        let bad = || IoError::UnknownObject(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let cell = |t: &str| -> Result<CellType, IoError> {
            t.strip_prefix(['C', 'c'])
                .and_then(|i| i.parse::<usize>().ok())
                .and_then(CellType::from_index)
                .ok_or_else(bad)
        };
        let label = |t: &str| t.parse::<PartitionLabel>().map_err(|_| bad());
        match parts.as_slice() {
            ["empty"] => Ok(ExportObject::Empty),
            [t] if t.starts_with(['C', 'c']) => Ok(ExportObject::Cell(cell(t)?)),
            [t] => Ok(ExportObject::Skeleton(label(t)?)),
            ["cell", t] => Ok(ExportObject::Cell(cell(t)?)),
            ["skeleton", t] => Ok(ExportObject::Skeleton(label(t)?)),
            ["cone", t] => Ok(ExportObject::Cone(label(t)?)),
            ["pop", t, c] => Ok(ExportObject::Popped(label(t)?, c.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ExportObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExportObject::Empty => write!(f, "empty"),
            ExportObject::Cell(t) => write!(f, "cell-{t}"),
            ExportObject::Skeleton(l) => write!(f, "skeleton-{l}"),
            ExportObject::Cone(l) => write!(f, "cone-{l}"),
            ExportObject::Popped(l, c) => write!(f, "pop-{l}-{c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Off,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Off => "off",
            ExportFormat::Json => "json",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = IoError;
    fn from_str(s: &str) -> Result<Self, IoError> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(ExportFormat::Off),
            "json" => Ok(ExportFormat::Json),
            _ => Err(IoError::UnknownFormat(s.to_string())),
        }
    }
}

fn build_err(o: ExportObject, e: impl fmt::Display) -> IoError {
    IoError::Build {
        object: o.to_string(),
        reason: e.to_string(),
    }
}

fn cone_of(l: PartitionLabel) -> Result<(PartitionComplex, Hull, Complex3), String> {
    let p = build_partition(l).map_err(|e: PartitionError| e.to_string())?;
    let h = Hull::from_partition(&p).map_err(|e: MassError| e.to_string())?;
    let c = cone_complex(&p, &h).map_err(|e| e.to_string())?;
    Ok((p, h, c))
}

/// Renders an object in the requested format.
pub fn export(o: ExportObject, f: ExportFormat) -> Result<String, IoError> {
    let complex = |c: &Complex3| match f {
        ExportFormat::Off => OffMesh::from_complex(c).to_text(),
        ExportFormat::Json => complex_json(c),
    };
    match o {
        ExportObject::Empty => Ok(complex(&Complex3::default())),
        ExportObject::Cell(t) => {
            let c = realize_cell(t).map_err(|e| build_err(o, e))?;
            Ok(match f {
                ExportFormat::Off => OffMesh::from_cell(&c).to_text(),
                ExportFormat::Json => cell_json(&c),
            })
        }
        ExportObject::Skeleton(l) => {
            let p = build_partition(l).map_err(|e| build_err(o, e))?;
            Ok(match f {
                ExportFormat::Off => OffMesh::from_skeleton(&p).to_text(),
                ExportFormat::Json => partition_json(&p),
            })
        }
        ExportObject::Cone(l) => {
            let (_, _, c) = cone_of(l).map_err(|e| build_err(o, e))?;
            Ok(complex(&c))
        }
        ExportObject::Popped(l, which) => {
            let (p, h, _) = cone_of(l).map_err(|e| build_err(o, e))?;
            let cell = crate::evolver::pick_cell(&p, which).map_err(|e| build_err(o, e))?;
            let spec = PopSpec::for_cell(&p, &h, cell).map_err(|e| build_err(o, e))?;
            let c = pop(&p, &spec).map_err(|e: EvolverError| build_err(o, e))?;
            Ok(complex(&c))
        }
    }
}

#[cfg(test)]
mod tests;
