//! Triangulated surfaces of revolution.
//!
//! A meridian is sampled arc by arc (node counts proportional to arc length,
//! junction nodes shared exactly), each off-axis node is swept into a ring
//! of `n_angular` vertices, and the two axis points become single pole
//! vertices closed with triangle fans. The result is a closed, consistently
//! outward-oriented genus-0 mesh.
//!
//! The discrete measures here (triangle-sum area, divergence-theorem volume,
//! cotangent-Laplacian mean curvature) are independent of the line
//! integrals in [`crate::measures`] and serve as a cross-check.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::curvature::mean_curvature;
use crate::profile::{ArcId, Direction, Meridian, ProfileError, Vec2};
use crate::quadrature::{QuadratureError, Tolerance};

pub const MIN_SEGMENTS_PER_ARC: usize = 8;
pub const MIN_ANGULAR: usize = 8;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("resolution too low: {0}")]
    InvalidResolution(String),
    #[error("degenerate meridian: {0}")]
    Degenerate(String),
    #[error("mesh is not closed: {boundary} boundary and {nonmanifold} non-manifold edges")]
    OpenMesh { boundary: usize, nonmanifold: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexKind {
    Pole,
    Junction,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexInfo {
    pub arc: ArcId,
    pub t: f64,
    pub kind: VertexKind,
    /// Mean curvature of the smooth surface at this vertex; `None` at poles
    /// and junctions, where it is not single-valued.
    pub h_analytic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshSurface {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
    pub info: Vec<VertexInfo>,
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

struct ProfileNode {
    p: Vec2,
    arc: ArcId,
    t: f64,
    kind: VertexKind,
    h: Option<f64>,
}

/// Samples the material part of the meridian from one pole to the other.
fn profile_nodes(meridian: &Meridian, n_profile: usize) -> Result<Vec<ProfileNode>, MeshError> {
    let arcs = meridian.arcs();
    let axis_idx = arcs
        .iter()
        .position(|oa| oa.arc.id == ArcId::AxisSegment)
        .ok_or_else(|| MeshError::Degenerate("meridian has no axis segment".into()))?;
    let (pole_start, pole_end) = (arcs[axis_idx].end()?, arcs[axis_idx].start()?);
    let material: Vec<_> = arcs[axis_idx + 1..]
        .iter()
        .chain(&arcs[..axis_idx])
        .collect();

    let tol = Tolerance::uniform(1e-10).expect("valid tolerance");
    let lengths: Vec<f64> = material
        .iter()
        .map(|oa| oa.arc.length(&tol))
        .collect::<Result<_, _>>()?;
    let total: f64 = lengths.iter().sum();
    for (oa, &len) in material.iter().zip(&lengths) {
        if !(len > 1e-14 * total) {
            return Err(MeshError::Degenerate(format!(
                "{} has length {len:e}",
                oa.arc.id
            )));
        }
    }

    let mut nodes = Vec::new();
    let last = material.len() - 1;
    for (k, (oa, &len)) in material.iter().zip(&lengths).enumerate() {
        let n = MIN_SEGMENTS_PER_ARC.max((n_profile as f64 * len / total).round() as usize);
        let ts = oa.arc.grid(n);
        let mut pts: Vec<(f64, Vec2)> = ts.iter().copied().zip(oa.arc.eval_many(&ts)?).collect();
        if oa.direction == Direction::Reverse {
            pts.reverse();
        }
        for (j, (t, p)) in pts.into_iter().enumerate() {
            // shared junction nodes are emitted once, by the earlier arc
            if j == 0 && k > 0 {
                continue;
            }
            let (kind, p) = if k == 0 && j == 0 {
                (VertexKind::Pole, pole_start)
            } else if k == last && j == n {
                (VertexKind::Pole, pole_end)
            } else if j == 0 || j == n {
                (VertexKind::Junction, p)
            } else {
                (VertexKind::Interior, p)
            };
            let h = match kind {
                VertexKind::Interior => mean_curvature(oa, t),
                _ => None,
            };
            nodes.push(ProfileNode {
                p,
                arc: oa.arc.id,
                t,
                kind,
                h,
            });
        }
    }
    Ok(nodes)
}

/// Triangulates the surface swept by `meridian` about the y-axis.
///
/// `n_profile` is the approximate total number of profile segments,
/// distributed over the arcs in proportion to their length with at least
/// [`MIN_SEGMENTS_PER_ARC`] each.
pub fn tessellate(
    meridian: &Meridian,
    n_profile: usize,
    n_angular: usize,
) -> Result<MeshSurface, MeshError> {
    if n_angular < MIN_ANGULAR {
        return Err(MeshError::InvalidResolution(format!(
            "n_angular must be at least {MIN_ANGULAR}, got {n_angular}"
        )));
    }
    if n_profile < MIN_SEGMENTS_PER_ARC {
        return Err(MeshError::InvalidResolution(format!(
            "n_profile must be at least {MIN_SEGMENTS_PER_ARC}, got {n_profile}"
        )));
    }
    let nodes = profile_nodes(meridian, n_profile)?;
    let rings = nodes.len() - 2;
    let n = n_angular;

    let mut vertices = Vec::with_capacity(2 + rings * n);
    let mut info = Vec::with_capacity(vertices.capacity());
    let pole0 = 0usize;
    let pole1 = 1 + rings * n;
    let ring_vertex = |i: usize, k: usize| 1 + i * n + (k % n);

    let push =
        |vertices: &mut Vec<Point3>, info: &mut Vec<VertexInfo>, p: Point3, node: &ProfileNode| {
            vertices.push(p);
            info.push(VertexInfo {
                arc: node.arc,
                t: node.t,
                kind: node.kind,
                h_analytic: node.h,
            });
        };
    push(
        &mut vertices,
        &mut info,
        [0.0, nodes[0].p.y, 0.0],
        &nodes[0],
    );
    let angles: Vec<(f64, f64)> = (0..n)
        .map(|k| (TAU * k as f64 / n as f64).sin_cos())
        .collect();
    for node in &nodes[1..=rings] {
        for &(s, c) in &angles {
            push(
                &mut vertices,
                &mut info,
                [node.p.x * c, node.p.y, node.p.x * s],
                node,
            );
        }
    }
    let last = nodes.last().expect("two poles");
    push(&mut vertices, &mut info, [0.0, last.p.y, 0.0], last);

    let mut triangles = Vec::with_capacity(2 * n * (rings + 1));
    for k in 0..n {
        triangles.push([pole0, ring_vertex(0, k + 1), ring_vertex(0, k)]);
    }
    for i in 0..rings.saturating_sub(1) {
        for k in 0..n {
            let a = ring_vertex(i, k);
            let b = ring_vertex(i, k + 1);
            let c = ring_vertex(i + 1, k);
            let d = ring_vertex(i + 1, k + 1);
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }
    for k in 0..n {
        triangles.push([
            pole1,
            ring_vertex(rings - 1, k),
            ring_vertex(rings - 1, k + 1),
        ]);
    }

    let mut mesh = MeshSurface {
        vertices,
        triangles,
        info,
    };
    if signed_volume(&mesh) < 0.0 {
        for tri in &mut mesh.triangles {
            tri.swap(1, 2);
        }
    }
    Ok(mesh)
}

/// Sum of signed tetrahedra spanned by the origin and each triangle.
pub fn signed_volume(mesh: &MeshSurface) -> f64 {
    mesh.triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| mesh.vertices[i]);
            dot(a, cross(b, c))
        })
        .sum::<f64>()
        / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub boundary_edges: usize,
    pub nonmanifold_edges: usize,
    /// Every interior edge is traversed once in each direction.
    pub orientation_consistent: bool,
    pub unused_vertices: usize,
}

impl TopologyReport {
    pub fn watertight(&self) -> bool {
        self.boundary_edges == 0
            && self.nonmanifold_edges == 0
            && self.orientation_consistent
            && self.unused_vertices == 0
    }
}

/// Edge manifoldness, orientation and Euler characteristic.
pub fn topology(mesh: &MeshSurface) -> TopologyReport {
    // undirected edge -> (count, net direction)
    let mut edges: HashMap<(usize, usize), (usize, i64)> = HashMap::new();
    let mut used = vec![false; mesh.vertices.len()];
    for tri in &mesh.triangles {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            used[a] = true;
            let (key, dir) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            let entry = edges.entry(key).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += dir;
        }
    }
    let boundary_edges = edges.values().filter(|e| e.0 == 1).count();
    let nonmanifold_edges = edges.values().filter(|e| e.0 > 2).count();
    let orientation_consistent = edges.values().filter(|e| e.0 == 2).all(|e| e.1 == 0);
    let v = mesh.vertices.len();
    let (e, f) = (edges.len(), mesh.triangles.len());
    TopologyReport {
        vertices: v,
        edges: e,
        faces: f,
        euler_characteristic: v as i64 - e as i64 + f as i64,
        boundary_edges,
        nonmanifold_edges,
        orientation_consistent,
        unused_vertices: used.iter().filter(|u| !**u).count(),
    }
}

fn require_closed(mesh: &MeshSurface) -> Result<(), MeshError> {
    let topo = topology(mesh);
    if topo.boundary_edges > 0 || topo.nonmanifold_edges > 0 {
        return Err(MeshError::OpenMesh {
            boundary: topo.boundary_edges,
            nonmanifold: topo.nonmanifold_edges,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteMeasures {
    pub area: f64,
    pub volume: f64,
}

/// Triangle-sum area and divergence-theorem volume of a closed mesh.
pub fn discrete_measures(mesh: &MeshSurface) -> Result<DiscreteMeasures, MeshError> {
    require_closed(mesh)?;
    let area = mesh
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| mesh.vertices[i]);
            0.5 * norm(cross(sub(b, a), sub(c, a)))
        })
        .sum();
    Ok(DiscreteMeasures {
        area,
        volume: signed_volume(mesh).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteCurvature {
    /// Signed mean curvature (average convention, outward normal).
    pub h: f64,
    /// False at poles, next to junctions or poles, and next to degenerate
    /// triangles. Such vertices are excluded from comparisons.
    pub reliable: bool,
}

/// Cotangent-Laplacian mean curvature with mixed Voronoi areas.
pub fn discrete_mean_curvature(mesh: &MeshSurface) -> Result<Vec<DiscreteCurvature>, MeshError> {
    require_closed(mesh)?;
    let nv = mesh.vertices.len();
    let mut lap = vec![[0.0f64; 3]; nv];
    let mut area = vec![0.0f64; nv];
    let mut normal = vec![[0.0f64; 3]; nv];
    let mut degenerate = vec![false; nv];

    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.vertices[i]);
        let n = cross(sub(p[1], p[0]), sub(p[2], p[0]));
        let tri_area = 0.5 * norm(n);
        let scale =
            dot(sub(p[1], p[0]), sub(p[1], p[0])).max(dot(sub(p[2], p[0]), sub(p[2], p[0])));
        if !(tri_area > 1e-14 * scale) {
            for &i in tri {
                degenerate[i] = true;
            }
            continue;
        }
        // cot of the angle at corner c, opposite edge (c+1, c+2)
        let mut cot = [0.0; 3];
        let mut obtuse = None;
        for c in 0..3 {
            let u = sub(p[(c + 1) % 3], p[c]);
            let v = sub(p[(c + 2) % 3], p[c]);
            let d = dot(u, v);
            cot[c] = d / (2.0 * tri_area);
            if d < 0.0 {
                obtuse = Some(c);
            }
        }
        for c in 0..3 {
            let (i, j) = (tri[(c + 1) % 3], tri[(c + 2) % 3]);
            let e = sub(mesh.vertices[i], mesh.vertices[j]);
            for k in 0..3 {
                lap[i][k] += cot[c] * e[k];
                lap[j][k] -= cot[c] * e[k];
            }
        }
        for c in 0..3 {
            let i = tri[c];
            area[i] += match obtuse {
                None => {
                    let e1 = sub(p[(c + 1) % 3], p[c]);
                    let e2 = sub(p[(c + 2) % 3], p[c]);
                    (dot(e1, e1) * cot[(c + 2) % 3] + dot(e2, e2) * cot[(c + 1) % 3]) / 8.0
                }
                Some(o) if o == c => tri_area / 2.0,
                Some(_) => tri_area / 4.0,
            };
            for k in 0..3 {
                normal[i][k] += n[k];
            }
        }
    }

    // vertices touching a pole or junction, or a degenerate triangle
    let mut unreliable: Vec<bool> = mesh
        .info
        .iter()
        .zip(&degenerate)
        .map(|(inf, &d)| d || inf.kind != VertexKind::Interior)
        .collect();
    let seeds = unreliable.clone();
    for tri in &mesh.triangles {
        if tri.iter().any(|&i| seeds[i]) {
            for &i in tri {
                unreliable[i] = true;
            }
        }
    }

    Ok((0..nv)
        .map(|i| {
            if area[i] <= 0.0 {
                return DiscreteCurvature {
                    h: 0.0,
                    reliable: false,
                };
            }
            let k = lap[i].map(|c| c / (2.0 * area[i]));
            let mag = 0.5 * norm(k);
            let sign = if dot(k, normal[i]) >= 0.0 { 1.0 } else { -1.0 };
            DiscreteCurvature {
                h: sign * mag,
                reliable: !unreliable[i],
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeshFormat {
    Obj,
    StlBinary,
}

/// STL header text; the remainder of the 80 bytes is zero.
const STL_HEADER: &[u8] = b"nodoid binary STL";

/// Writes `mesh` to `sink`, returning the number of bytes written.
pub fn export<W: Write>(
    mesh: &MeshSurface,
    format: MeshFormat,
    sink: &mut W,
) -> Result<usize, MeshError> {
    let mut buf: Vec<u8> = Vec::new();
    match format {
        MeshFormat::Obj => {
            for v in &mesh.vertices {
                writeln!(buf, "v {} {} {}", v[0], v[1], v[2])?;
            }
            for t in &mesh.triangles {
                writeln!(buf, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
            }
        }
        MeshFormat::StlBinary => {
            let mut header = [0u8; 80];
            header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
            buf.extend_from_slice(&header);
            let count = u32::try_from(mesh.triangles.len())
                .map_err(|_| MeshError::InvalidResolution("too many triangles for STL".into()))?;
            buf.extend_from_slice(&count.to_le_bytes());
            for t in &mesh.triangles {
                let [a, b, c] = t.map(|i| mesh.vertices[i]);
                let n = cross(sub(b, a), sub(c, a));
                let len = norm(n);
                let unit = if len > 0.0 {
                    n.map(|x| x / len)
                } else {
                    [0.0; 3]
                };
                for v in [unit, a, b, c] {
                    for x in v {
                        buf.extend_from_slice(&(x as f32).to_le_bytes());
                    }
                }
                buf.extend_from_slice(&0u16.to_le_bytes());
            }
        }
    }
    sink.write_all(&buf)?;
    Ok(buf.len())
}
