//! Sampling into grids and export to OBJ, PLY and CSV, plus morph-frame
//! sequences across the family.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::grid::{Domain, Grid};
use crate::kernel::{ShapeParam, THETA_MAX, THETA_MIN};
use crate::surface::{frame_normal, x_associated, x_conjugate_tilde, x_theta, x_tilde, Vec3};
use crate::verify::CurvatureLine;
use crate::weierstrass::AssociatedParam;

/// Resolution used when none is given.
pub const DEFAULT_RESOLUTION: usize = 129;

/// Which member of the family to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// `X^θ`; interior θ only.
    Plain,
    /// `R^θ·X^θ`, the plane at the endpoints.
    Tilde,
    /// `R^θ·X̂^θ`, the plane at the endpoints.
    Conjugate,
    /// `X^λ = Re(λ⁻²Ψ)`; interior θ only.
    Associated(AssociatedParam),
}

impl Variant {
    pub fn name(&self) -> String {
        match self {
            Variant::Plain => "plain".into(),
            Variant::Tilde => "tilde".into(),
            Variant::Conjugate => "conjugate".into(),
            Variant::Associated(l) => format!("associated:{},{}", l.lambda().re, l.lambda().im),
        }
    }

    /// Position of this variant at `(u, v)`.
    pub fn eval(&self, p: &ShapeParam, u: f64, v: f64) -> Result<Vec3> {
        match self {
            Variant::Plain => x_theta(p, u, v),
            Variant::Tilde => Ok(x_tilde(p, u, v)),
            Variant::Conjugate => Ok(x_conjugate_tilde(p, u, v)),
            Variant::Associated(l) => x_associated(p, l, u, v),
        }
    }

    fn check(&self, p: &ShapeParam) -> Result<()> {
        if p.is_endpoint() && matches!(self, Variant::Plain | Variant::Associated(_)) {
            return Err(Error::Domain(
                "X is undefined at the plane endpoints; use the tilde variant",
            ));
        }
        Ok(())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "tilde" => Ok(Variant::Tilde),
            "conjugate" => Ok(Variant::Conjugate),
            _ => {
                let rest = s.strip_prefix("associated:").ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "unknown variant {s:?}; expected plain|tilde|conjugate|associated:<re>,<im>"
                    ))
                })?;
                let (re, im) = rest.split_once(',').ok_or_else(|| {
                    Error::InvalidInput(format!("associated variant needs <re>,<im>, got {rest:?}"))
                })?;
                let parse = |t: &str| {
                    t.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidInput(format!("not a number in associated variant: {t:?}"))
                    })
                };
                Ok(Variant::Associated(AssociatedParam::new(Complex64::new(
                    parse(re)?,
                    parse(im)?,
                ))?))
            }
        }
    }
}

/// Row-major `nu × nv` samples of one surface with unit normals.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGrid {
    pub grid: Grid,
    pub theta: f64,
    pub variant: Variant,
    pub positions: Vec<Vec3>,
    pub normals: Vec<Vec3>,
}

impl MeshGrid {
    pub fn nu(&self) -> usize {
        self.grid.nu
    }

    pub fn nv(&self) -> usize {
        self.grid.nv
    }

    pub fn index(&self, r: usize, c: usize) -> usize {
        r * self.grid.nv + c
    }

    /// Quads as 0-based corner indices, counter-clockwise in `(u, v)`.
    pub fn quads(&self) -> Vec<[usize; 4]> {
        let (nu, nv) = (self.nu(), self.nv());
        let mut out = Vec::with_capacity((nu - 1) * (nv - 1));
        for r in 0..nu - 1 {
            for c in 0..nv - 1 {
                out.push([
                    self.index(r, c),
                    self.index(r + 1, c),
                    self.index(r + 1, c + 1),
                    self.index(r, c + 1),
                ]);
            }
        }
        out
    }

    /// Uniform homothety of the positions.
    pub fn scaled(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidInput(format!(
                "scale must be positive, got {factor}"
            )));
        }
        for x in &mut self.positions {
            *x *= factor;
        }
        Ok(self)
    }

    /// Largest distance between corresponding vertices.
    pub fn sup_distance(&self, other: &MeshGrid) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidInput(
                "meshes are sampled on different grids".into(),
            ));
        }
        Ok(exec::max_nonneg(
            self.positions
                .iter()
                .zip(&other.positions)
                .map(|(a, b)| (a - b).norm()),
        ))
    }
}

fn normal_at(p: &ShapeParam, u: f64, v: f64) -> Result<Vec3> {
    if p.is_endpoint() {
        Ok(Vector3::new(0.0, 0.0, -1.0))
    } else {
        frame_normal(p, u, v)
    }
}

pub fn sample_grid(p: &ShapeParam, variant: Variant, grid: &Grid) -> Result<MeshGrid> {
    sample_grid_with(Execution::default(), p, variant, grid)
}

pub fn sample_grid_with(
    mode: Execution,
    p: &ShapeParam,
    variant: Variant,
    grid: &Grid,
) -> Result<MeshGrid> {
    variant.check(p)?;
    let samples = exec::map_with(mode, &grid.points(), |&(u, v)| -> Result<(Vec3, Vec3)> {
        Ok((variant.eval(p, u, v)?, normal_at(p, u, v)?))
    });
    let mut positions = Vec::with_capacity(grid.len());
    let mut normals = Vec::with_capacity(grid.len());
    for s in samples {
        let (x, n) = s?;
        if !x.iter().all(|c| c.is_finite()) {
            return Err(Error::Degenerate("non-finite position; shrink the domain"));
        }
        positions.push(x);
        normals.push(n);
    }
    Ok(MeshGrid {
        grid: *grid,
        theta: p.theta(),
        variant,
        positions,
        normals,
    })
}

fn push_vec(out: &mut String, tag: &str, x: &Vec3) {
    writeln!(out, "{tag} {:.16e} {:.16e} {:.16e}", x.x, x.y, x.z).unwrap();
}

pub fn obj_string(mesh: &MeshGrid) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# theta {:.16e} variant {} grid {}x{}",
        mesh.theta,
        mesh.variant.name(),
        mesh.nu(),
        mesh.nv()
    )
    .unwrap();
    for x in &mesh.positions {
        push_vec(&mut out, "v", x);
    }
    for n in &mesh.normals {
        push_vec(&mut out, "vn", n);
    }
    for q in mesh.quads() {
        let [a, b, c, d] = q.map(|i| i + 1);
        writeln!(out, "f {a}//{a} {b}//{b} {c}//{c} {d}//{d}").unwrap();
    }
    out
}

pub fn export_obj(mesh: &MeshGrid, path: &Path) -> Result<()> {
    fs::write(path, obj_string(mesh))?;
    Ok(())
}

/// Contents of an OBJ file written by [`export_obj`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjData {
    pub positions: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    /// 1-based vertex indices as written.
    pub faces: Vec<Vec<usize>>,
}

pub fn parse_obj(text: &str) -> Result<ObjData> {
    let mut data = ObjData::default();
    for (lineno, line) in text.lines().enumerate() {
        let bad = || Error::InvalidInput(format!("malformed OBJ line {}: {line:?}", lineno + 1));
        let mut it = line.split_whitespace();
        match it.next() {
            Some(tag @ ("v" | "vn")) => {
                let xs = it
                    .map(|t| t.parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if xs.len() != 3 {
                    return Err(bad());
                }
                let x = Vector3::new(xs[0], xs[1], xs[2]);
                if tag == "v" {
                    data.positions.push(x);
                } else {
                    data.normals.push(x);
                }
            }
            Some("f") => {
                let idx = it
                    .map(|t| {
                        t.split('/')
                            .next()
                            .and_then(|i| i.parse::<usize>().ok())
                            .ok_or_else(bad)
                    })
                    .collect::<Result<Vec<_>>>()?;
                data.faces.push(idx);
            }
            _ => {}
        }
    }
    Ok(data)
}

pub fn read_obj(path: &Path) -> Result<ObjData> {
    parse_obj(&fs::read_to_string(path)?)
}

/// Binary little-endian PLY with `double` positions and normals.
pub fn export_ply(mesh: &MeshGrid, path: &Path) -> Result<()> {
    let quads = mesh.quads();
    let mut w = BufWriter::new(fs::File::create(path)?);
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\n\
         element vertex {}\n\
         property double x\nproperty double y\nproperty double z\n\
         property double nx\nproperty double ny\nproperty double nz\n\
         element face {}\n\
         property list uchar uint vertex_indices\nend_header\n",
        mesh.positions.len(),
        quads.len()
    )?;
    for (x, n) in mesh.positions.iter().zip(&mesh.normals) {
        for c in x.iter().chain(n.iter()) {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    for q in quads {
        w.write_all(&[4u8])?;
        for i in q {
            let i = u32::try_from(i)
                .map_err(|_| Error::InvalidInput("mesh too large for PLY indices".into()))?;
            w.write_all(&i.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

const CSV_HEADER: &str = "u,v,x1,x2,x3\n";

fn push_row(out: &mut String, u: f64, v: f64, x: &Vec3) {
    writeln!(
        out,
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        u, v, x.x, x.y, x.z
    )
    .unwrap();
}

/// One row per grid vertex, row-major.
pub fn grid_csv_string(mesh: &MeshGrid) -> String {
    let mut out = String::from(CSV_HEADER);
    for ((u, v), x) in mesh.grid.points().into_iter().zip(&mesh.positions) {
        push_row(&mut out, u, v, x);
    }
    out
}

pub fn export_grid_csv(mesh: &MeshGrid, path: &Path) -> Result<()> {
    fs::write(path, grid_csv_string(mesh))?;
    Ok(())
}

/// Sampled curvature lines, one block of rows per line in the given order.
pub fn lines_csv_string(
    p: &ShapeParam,
    variant: Variant,
    lines: &[CurvatureLine],
) -> Result<String> {
    variant.check(p)?;
    let mut out = String::from(CSV_HEADER);
    for line in lines {
        for (u, v) in line.params() {
            push_row(&mut out, u, v, &variant.eval(p, u, v)?);
        }
    }
    Ok(out)
}

pub fn export_lines_csv(
    p: &ShapeParam,
    variant: Variant,
    lines: &[CurvatureLine],
    path: &Path,
) -> Result<()> {
    fs::write(path, lines_csv_string(p, variant, lines)?)?;
    Ok(())
}

/// An evenly spaced θ sweep, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphSpec {
    pub theta_start: f64,
    pub theta_end: f64,
    pub frames: usize,
    pub grid: Grid,
    /// Sweep the conjugate family instead of `X̃`.
    pub conjugate: bool,
}

impl MorphSpec {
    pub fn validate(&self) -> Result<()> {
        for t in [self.theta_start, self.theta_end] {
            if !(THETA_MIN..=THETA_MAX).contains(&t) {
                return Err(Error::ThetaOutOfRange { theta: t });
            }
        }
        if self.theta_start.partial_cmp(&self.theta_end) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidInput(format!(
                "morph needs theta_start < theta_end, got {} and {}",
                self.theta_start, self.theta_end
            )));
        }
        if self.frames < 2 {
            return Err(Error::InvalidInput(format!(
                "morph needs at least 2 frames, got {}",
                self.frames
            )));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.frames)
            .map(|i| crate::grid::lerp(self.theta_start, self.theta_end, i, self.frames))
            .collect()
    }

    fn variant(&self) -> Variant {
        if self.conjugate {
            Variant::Conjugate
        } else {
            Variant::Tilde
        }
    }
}

/// Frame file name for a 1-based frame number.
pub fn frame_name(number: usize) -> String {
    format!("frame_{number:04}.obj")
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorphOutput {
    pub thetas: Vec<f64>,
    pub files: Vec<PathBuf>,
    /// `sup |X_i − X_{i+1}|` for each adjacent pair.
    pub adjacent_sup: Vec<f64>,
}

pub fn morph_meshes(mode: Execution, spec: &MorphSpec) -> Result<Vec<MeshGrid>> {
    spec.validate()?;
    let variant = spec.variant();
    exec::map_with(mode, &spec.thetas(), |&th| {
        sample_grid_with(
            Execution::Sequential,
            &ShapeParam::new(th)?,
            variant,
            &spec.grid,
        )
    })
    .into_iter()
    .collect()
}

pub fn morph_frames(spec: &MorphSpec, out_dir: &Path) -> Result<MorphOutput> {
    morph_frames_with(Execution::default(), spec, out_dir)
}

/// Writes `frame_0001.obj`, `frame_0002.obj`, … into `out_dir`.
pub fn morph_frames_with(mode: Execution, spec: &MorphSpec, out_dir: &Path) -> Result<MorphOutput> {
    let meshes = morph_meshes(mode, spec)?;
    fs::create_dir_all(out_dir)?;
    let numbered: Vec<(usize, &MeshGrid)> = meshes.iter().enumerate().collect();
    let files = exec::map_with(mode, &numbered, |&(i, m)| -> Result<PathBuf> {
        let path = out_dir.join(frame_name(i + 1));
        export_obj(m, &path)?;
        Ok(path)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let adjacent_sup = meshes
        .windows(2)
        .map(|w| w[0].sup_distance(&w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(MorphOutput {
        thetas: spec.thetas(),
        files,
        adjacent_sup,
    })
}

/// Default export grid: `[−2, 2] × [−π, π]` at 129 × 129.
pub fn default_grid() -> Grid {
    Grid {
        domain: Domain::mesh_default(),
        nu: DEFAULT_RESOLUTION,
        nv: DEFAULT_RESOLUTION,
    }
}
