//! Mesh generators: sphere, tori, cylinder, circle.
//!
//! All generators produce oriented complexes that pass the closed/oriented
//! audit where applicable. Grid meshes use the Freudenthal pattern (each
//! cube split into 6 tetrahedra along coordinate-sorted paths, each square
//! split along its min-to-max diagonal), which is translation invariant and
//! therefore consistent across periodic wraps.
//!
//! Wrapped axes with period below 3 are refined to the smallest multiple of
//! the request that reaches 3: identifying opposite faces of a period-2
//! grid makes distinct simplices share vertex sets, which is no longer a
//! simplicial complex.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::error::{HoloError, Result};

/// Generator name and resolution for [`build_mesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshSpec {
    /// Octahedron with `level` rounds of edge-midpoint subdivision,
    /// vertices projected to the unit sphere.
    Sphere2 { level: u32 },
    /// Flat 2-torus on an n×m quad grid.
    Torus2 { n: u32, m: u32 },
    /// Flat 3-torus on an n×m×p cube grid, 6 tetrahedra per cube.
    Torus3 { n: u32, m: u32, p: u32 },
    /// [0,1] × S¹ with n axial segments and m angular segments.
    Cylinder { n: u32, m: u32 },
    /// S¹ with n vertices.
    Circle { n: u32 },
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSpec::Sphere2 { level } => write!(f, "sphere2({level})"),
            MeshSpec::Torus2 { n, m } => write!(f, "torus2({n},{m})"),
            MeshSpec::Torus3 { n, m, p } => write!(f, "torus3({n},{m},{p})"),
            MeshSpec::Cylinder { n, m } => write!(f, "cylinder({n},{m})"),
            MeshSpec::Circle { n } => write!(f, "circle({n})"),
        }
    }
}

impl FromStr for MeshSpec {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| HoloError::InvalidSpec(format!("expected name(args): {s}")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| HoloError::InvalidSpec(format!("missing ')': {s}")))?;
        let nums: Vec<u32> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u32>()
                    .map_err(|_| HoloError::InvalidSpec(format!("bad resolution in {s}")))
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(HoloError::InvalidSpec(format!(
                    "{name} takes {k} resolution argument(s)"
                )))
            }
        };
        match name.trim() {
            "sphere2" => {
                want(1)?;
                Ok(MeshSpec::Sphere2 { level: nums[0] })
            }
            "torus2" => {
                want(2)?;
                Ok(MeshSpec::Torus2 {
                    n: nums[0],
                    m: nums[1],
                })
            }
            "torus3" => {
                want(3)?;
                Ok(MeshSpec::Torus3 {
                    n: nums[0],
                    m: nums[1],
                    p: nums[2],
                })
            }
            "cylinder" => {
                want(2)?;
                Ok(MeshSpec::Cylinder {
                    n: nums[0],
                    m: nums[1],
                })
            }
            "circle" => {
                want(1)?;
                Ok(MeshSpec::Circle { n: nums[0] })
            }
            other => Err(HoloError::InvalidSpec(format!("unknown generator {other}"))),
        }
    }
}

/// Layout of a generated grid mesh: vertex id = (x·dims[1] + y)·dims[2] + z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridInfo {
    /// Effective extents per axis (vertex counts along each axis).
    pub dims: [usize; 3],
    /// Whether the axis wraps around.
    pub wraps: [bool; 3],
}

impl GridInfo {
    pub fn vertex_id(&self, x: usize, y: usize, z: usize) -> usize {
        let [_, ny, nz] = self.dims;
        (x * ny + y) * nz + z
    }

    pub fn coords_of(&self, v: usize) -> [usize; 3] {
        let [_, ny, nz] = self.dims;
        [v / (ny * nz), (v / nz) % ny, v % nz]
    }

    /// Wraps an axis coordinate into range where the axis is periodic.
    pub fn wrap(&self, axis: usize, c: i64) -> usize {
        let d = self.dims[axis] as i64;
        if self.wraps[axis] {
            (c.rem_euclid(d)) as usize
        } else {
            c as usize
        }
    }
}

/// Smallest multiple of `r` that is at least 3. Periodic axes below 3
/// collapse distinct simplices onto shared vertex sets.
fn effective_period(r: u32) -> usize {
    let r = r as usize;
    if r >= 3 {
        r
    } else {
        r * 3_usize.div_ceil(r)
    }
}

/// Builds the mesh described by `spec`.
pub fn build_mesh(spec: MeshSpec) -> Result<SimplicialComplex> {
    let positive = |r: u32| -> Result<()> {
        if r == 0 {
            Err(HoloError::InvalidSpec(format!("resolution 0 in {spec}")))
        } else {
            Ok(())
        }
    };
    let mut cx = match spec {
        MeshSpec::Sphere2 { level } => {
            positive(level)?;
            sphere2(level)
        }
        MeshSpec::Torus2 { n, m } => {
            positive(n)?;
            positive(m)?;
            torus2(effective_period(n), effective_period(m))
        }
        MeshSpec::Torus3 { n, m, p } => {
            positive(n)?;
            positive(m)?;
            positive(p)?;
            torus3(
                effective_period(n),
                effective_period(m),
                effective_period(p),
            )
        }
        MeshSpec::Cylinder { n, m } => {
            positive(n)?;
            positive(m)?;
            cylinder(n as usize, effective_period(m))
        }
        MeshSpec::Circle { n } => {
            positive(n)?;
            circle(effective_period(n))
        }
    }?;
    let grid = grid_info(spec);
    cx.set_provenance(spec, grid);
    Ok(cx)
}

fn grid_info(spec: MeshSpec) -> Option<GridInfo> {
    match spec {
        MeshSpec::Sphere2 { .. } => None,
        MeshSpec::Torus2 { n, m } => Some(GridInfo {
            dims: [effective_period(n), effective_period(m), 1],
            wraps: [true, true, false],
        }),
        MeshSpec::Torus3 { n, m, p } => Some(GridInfo {
            dims: [
                effective_period(n),
                effective_period(m),
                effective_period(p),
            ],
            wraps: [true, true, true],
        }),
        MeshSpec::Cylinder { n, m } => Some(GridInfo {
            dims: [n as usize + 1, effective_period(m), 1],
            wraps: [false, true, false],
        }),
        MeshSpec::Circle { n } => Some(GridInfo {
            dims: [effective_period(n), 1, 1],
            wraps: [true, false, false],
        }),
    }
}

fn sphere2(level: u32) -> Result<SimplicialComplex> {
    // Octahedron: ±x, ±y, ±z.
    let mut coords: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(8);
    for &sx in &[1.0f64, -1.0] {
        for &sy in &[1.0f64, -1.0] {
            for &sz in &[1.0f64, -1.0] {
                let vx = if sx > 0.0 { 0 } else { 1 };
                let vy = if sy > 0.0 { 2 } else { 3 };
                let vz = if sz > 0.0 { 4 } else { 5 };
                // Outward orientation: determinant of the vertex triple.
                if sx * sy * sz > 0.0 {
                    faces.push([vx, vy, vz]);
                } else {
                    faces.push([vx, vz, vy]);
                }
            }
        }
    }

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next: Vec<[usize; 3]> = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: usize, b: usize, coords: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&m) = midpoint.get(&key) {
                return m;
            }
            let pa = coords[a];
            let pb = coords[b];
            let mut p = [
                0.5 * (pa[0] + pb[0]),
                0.5 * (pa[1] + pb[1]),
                0.5 * (pa[2] + pb[2]),
            ];
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            p = [p[0] / n, p[1] / n, p[2] / n];
            let id = coords.len();
            coords.push(p);
            midpoint.insert(key, id);
            id
        };
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut coords);
            let bc = mid(b, c, &mut coords);
            let ca = mid(c, a, &mut coords);
            next.push([a, ab, ca]);
            next.push([ab, b, bc]);
            next.push([ca, bc, c]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }

    let cells: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_cells(&cells, Some(coords))
}

fn torus2(n: usize, m: usize) -> Result<SimplicialComplex> {
    let grid = GridInfo {
        dims: [n, m, 1],
        wraps: [true, true, false],
    };
    let mut cells = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let a = grid.vertex_id(i, j, 0);
            let b = grid.vertex_id((i + 1) % n, j, 0);
            let c = grid.vertex_id((i + 1) % n, (j + 1) % m, 0);
            let d = grid.vertex_id(i, (j + 1) % m, 0);
            cells.push(vec![a, b, c]);
            cells.push(vec![a, c, d]);
        }
    }
    // Embed as a donut for inspection; topology ignores coordinates.
    let (big, small) = (2.0, 0.75);
    let mut coords = vec![[0.0; 3]; n * m];
    for i in 0..n {
        for j in 0..m {
            let u = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let v = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            coords[grid.vertex_id(i, j, 0)] = [
                (big + small * v.cos()) * u.cos(),
                (big + small * v.cos()) * u.sin(),
                small * v.sin(),
            ];
        }
    }
    SimplicialComplex::from_cells(&cells, Some(coords))
}

/// Freudenthal tetrahedra of the unit cube: one per permutation of the
/// axes, walking from the low corner to the high corner. Odd permutations
/// get two vertices swapped so every tuple is positively oriented.
const AXIS_PERMS: [([usize; 3], bool); 6] = [
    ([0, 1, 2], true),
    ([0, 2, 1], false),
    ([1, 0, 2], false),
    ([1, 2, 0], true),
    ([2, 0, 1], true),
    ([2, 1, 0], false),
];

fn torus3(n: usize, m: usize, p: usize) -> Result<SimplicialComplex> {
    let grid = GridInfo {
        dims: [n, m, p],
        wraps: [true, true, true],
    };
    let mut cells = Vec::with_capacity(6 * n * m * p);
    for x in 0..n {
        for y in 0..m {
            for z in 0..p {
                for (perm, even) in AXIS_PERMS {
                    let mut c = [x as i64, y as i64, z as i64];
                    let mut path = [0usize; 4];
                    path[0] = grid.vertex_id(
                        grid.wrap(0, c[0]),
                        grid.wrap(1, c[1]),
                        grid.wrap(2, c[2]),
                    );
                    for (step, &axis) in perm.iter().enumerate() {
                        c[axis] += 1;
                        path[step + 1] = grid.vertex_id(
                            grid.wrap(0, c[0]),
                            grid.wrap(1, c[1]),
                            grid.wrap(2, c[2]),
                        );
                    }
                    if !even {
                        path.swap(2, 3);
                    }
                    cells.push(path.to_vec());
                }
            }
        }
    }
    // Fundamental-domain coordinates; wraps make them discontinuous, which
    // is fine because nothing topological reads them.
    let mut coords = vec![[0.0; 3]; n * m * p];
    for x in 0..n {
        for y in 0..m {
            for z in 0..p {
                coords[grid.vertex_id(x, y, z)] = [x as f64, y as f64, z as f64];
            }
        }
    }
    SimplicialComplex::from_cells(&cells, Some(coords))
}

fn cylinder(n: usize, m: usize) -> Result<SimplicialComplex> {
    let grid = GridInfo {
        dims: [n + 1, m, 1],
        wraps: [false, true, false],
    };
    // Oriented so that the surface's boundary is (i = 0 ring) − (i = n
    // ring): the cylinder identity then reads surface = hol₀ · hol₁⁻¹ with
    // both rings traversed by increasing angle.
    let mut cells = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let a = grid.vertex_id(i, j, 0);
            let b = grid.vertex_id(i + 1, j, 0);
            let c = grid.vertex_id(i + 1, (j + 1) % m, 0);
            let d = grid.vertex_id(i, (j + 1) % m, 0);
            cells.push(vec![a, c, b]);
            cells.push(vec![a, d, c]);
        }
    }
    let mut coords = vec![[0.0; 3]; (n + 1) * m];
    for i in 0..=n {
        for j in 0..m {
            let th = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            coords[grid.vertex_id(i, j, 0)] = [th.cos(), th.sin(), i as f64 / n as f64];
        }
    }
    SimplicialComplex::from_cells(&cells, Some(coords))
}

fn circle(n: usize) -> Result<SimplicialComplex> {
    let cells: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    let coords: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            [th.cos(), th.sin(), 0.0]
        })
        .collect();
    SimplicialComplex::from_cells(&cells, Some(coords))
}

/// The ring of sphere vertices on the z = 0 plane, ordered by increasing
/// azimuth and closed (first vertex repeated at the end).
pub fn equator_loop(cx: &SimplicialComplex) -> Result<Vec<usize>> {
    let Some(MeshSpec::Sphere2 { .. }) = cx.provenance() else {
        return Err(HoloError::InvalidInput(
            "equator loop requires a generated sphere2 mesh".into(),
        ));
    };
    let coords = cx.coords().expect("sphere meshes carry coordinates");
    let mut ring: Vec<usize> = (0..cx.n_vertices())
        .filter(|&v| coords[v][2].abs() < 1e-12)
        .collect();
    ring.sort_by(|&a, &b| {
        let pa = coords[a][1].atan2(coords[a][0]);
        let pb = coords[b][1].atan2(coords[b][0]);
        pa.partial_cmp(&pb).unwrap()
    });
    for w in ring.windows(2) {
        if cx.edge_id([w[0].min(w[1]), w[0].max(w[1])]).is_none() {
            return Err(HoloError::InvalidLoop(
                "equator vertices are not consecutive".into(),
            ));
        }
    }
    let mut path = ring;
    path.push(path[0]);
    Ok(path)
}

/// A closed walk through mesh vertices hugging the circle at the given
/// colatitude: per azimuthal sector, the vertex nearest the target height
/// is chosen, and consecutive picks are joined by shortest edge paths.
pub fn latitude_loop(cx: &SimplicialComplex, colatitude: f64) -> Result<Vec<usize>> {
    let Some(&MeshSpec::Sphere2 { level }) = cx.provenance() else {
        return Err(HoloError::InvalidInput(
            "latitude loop requires a generated sphere2 mesh".into(),
        ));
    };
    let coords = cx.coords().expect("sphere meshes carry coordinates");
    let z0 = colatitude.cos();
    let sectors = 4usize << level;
    let width = 2.0 * std::f64::consts::PI / sectors as f64;
    // Only vertices within roughly one subdivision row of the target
    // colatitude may be picked; a sector without candidates is skipped.
    let band = 1.2 * std::f64::consts::FRAC_PI_2 / (1u64 << level) as f64;

    let mut pick: Vec<Option<usize>> = vec![None; sectors];
    for v in 0..cx.n_vertices() {
        let [x, y, z] = coords[v];
        if x == 0.0 && y == 0.0 {
            continue; // poles have no azimuth
        }
        if (z.clamp(-1.0, 1.0).acos() - colatitude).abs() > band {
            continue;
        }
        let phi = y.atan2(x) + std::f64::consts::PI;
        let k = ((phi / width) as usize).min(sectors - 1);
        let better = match pick[k] {
            None => true,
            Some(w) => {
                let dw = (coords[w][2] - z0).abs();
                let dv = (z - z0).abs();
                dv < dw || (dv == dw && v < w)
            }
        };
        if better {
            pick[k] = Some(v);
        }
    }
    let picks: Vec<usize> = pick.into_iter().flatten().collect();
    if picks.len() < 3 {
        return Err(HoloError::InvalidLoop("latitude ring too sparse".into()));
    }

    let mut walk: Vec<usize> = vec![picks[0]];
    for i in 0..picks.len() {
        let from = *walk.last().unwrap();
        let to = picks[(i + 1) % picks.len()];
        if from == to {
            continue;
        }
        let hop = shortest_vertex_path(cx, from, to)?;
        walk.extend_from_slice(&hop[1..]);
    }
    if walk.last() != Some(&walk[0]) {
        walk.push(walk[0]);
    }
    Ok(walk)
}

/// Maps a generated cylinder onto an annulus inside a coordinate plane of a
/// generated 3-torus: the axial direction runs along `plane`, the angular
/// direction along the next axis, and the remaining coordinate is fixed at
/// `layer`. The cylinder's angular resolution must match the torus period;
/// the Freudenthal diagonals agree by translation invariance, so the vertex
/// assignment is simplicial.
pub fn annulus_into_torus3(
    cyl: &std::sync::Arc<SimplicialComplex>,
    torus: &std::sync::Arc<SimplicialComplex>,
    plane: usize,
    axial_offset: usize,
    angular_offset: usize,
    layer: usize,
) -> Result<super::SimplicialMap> {
    let Some(MeshSpec::Cylinder { .. }) = cyl.provenance() else {
        return Err(HoloError::InvalidInput(
            "annulus source must be a generated cylinder".into(),
        ));
    };
    let Some(MeshSpec::Torus3 { .. }) = torus.provenance() else {
        return Err(HoloError::InvalidInput(
            "annulus target must be a generated torus3".into(),
        ));
    };
    let cgrid = cyl.grid().expect("generated cylinder has grid info");
    let tgrid = torus.grid().expect("generated torus has grid info");
    let [rings, m, _] = cgrid.dims;
    let ax = plane % 3;
    let ang = (plane + 1) % 3;
    let fix = (plane + 2) % 3;
    if m != tgrid.dims[ang] {
        return Err(HoloError::InvalidMap(format!(
            "cylinder angular resolution {m} does not match torus period {}",
            tgrid.dims[ang]
        )));
    }
    let mut vmap = vec![0usize; cyl.n_vertices()];
    for i in 0..rings {
        for j in 0..m {
            let mut g = [0usize; 3];
            g[ax] = (axial_offset + i) % tgrid.dims[ax];
            g[ang] = (angular_offset + j) % tgrid.dims[ang];
            g[fix] = layer % tgrid.dims[fix];
            vmap[cgrid.vertex_id(i, j, 0)] = tgrid.vertex_id(g[0], g[1], g[2]);
        }
    }
    super::SimplicialMap::new(cyl.clone(), torus.clone(), vmap)
}

/// Maps a generated 2-torus onto the coordinate subtorus of a generated
/// 3-torus at a fixed layer of the remaining axis.
pub fn subtorus_into_torus3(
    t2: &std::sync::Arc<SimplicialComplex>,
    torus: &std::sync::Arc<SimplicialComplex>,
    plane: usize,
    layer: usize,
) -> Result<super::SimplicialMap> {
    let Some(MeshSpec::Torus2 { .. }) = t2.provenance() else {
        return Err(HoloError::InvalidInput(
            "subtorus source must be a generated torus2".into(),
        ));
    };
    let Some(MeshSpec::Torus3 { .. }) = torus.provenance() else {
        return Err(HoloError::InvalidInput(
            "subtorus target must be a generated torus3".into(),
        ));
    };
    let sgrid = t2.grid().expect("generated torus2 has grid info");
    let tgrid = torus.grid().expect("generated torus has grid info");
    let ax = plane % 3;
    let ang = (plane + 1) % 3;
    let fix = (plane + 2) % 3;
    let [n, m, _] = sgrid.dims;
    if n != tgrid.dims[ax] || m != tgrid.dims[ang] {
        return Err(HoloError::InvalidMap(format!(
            "torus2 {n}×{m} does not match torus3 plane {}×{}",
            tgrid.dims[ax], tgrid.dims[ang]
        )));
    }
    let mut vmap = vec![0usize; t2.n_vertices()];
    for i in 0..n {
        for j in 0..m {
            let mut g = [0usize; 3];
            g[ax] = i;
            g[ang] = j;
            g[fix] = layer % tgrid.dims[fix];
            vmap[sgrid.vertex_id(i, j, 0)] = tgrid.vertex_id(g[0], g[1], g[2]);
        }
    }
    super::SimplicialMap::new(t2.clone(), torus.clone(), vmap)
}

/// BFS shortest path in the 1-skeleton, ascending-id tie-breaking.
fn shortest_vertex_path(cx: &SimplicialComplex, from: usize, to: usize) -> Result<Vec<usize>> {
    if from == to {
        return Ok(vec![from]);
    }
    let mut prev: Vec<Option<usize>> = vec![None; cx.n_vertices()];
    prev[from] = Some(from);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for w in cx.vertex_neighbors(v) {
            if prev[w].is_none() {
                prev[w] = Some(v);
                if w == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[cur].unwrap();
                        path.push(cur);
                    }
                    path.reverse();
                    return Ok(path);
                }
                queue.push_back(w);
            }
        }
    }
    Err(HoloError::InvalidLoop(format!(
        "no path between {from} and {to}"
    )))
}

/// The two boundary circles of a generated cylinder, both ordered by
/// increasing angle and closed: (i = 0 ring, i = n ring).
pub fn cylinder_boundary_loops(cx: &SimplicialComplex) -> Result<(Vec<usize>, Vec<usize>)> {
    let Some(MeshSpec::Cylinder { .. }) = cx.provenance() else {
        return Err(HoloError::InvalidInput(
            "boundary loops require a generated cylinder mesh".into(),
        ));
    };
    let grid = cx.grid().expect("generated cylinder has grid info");
    let [rings, m, _] = grid.dims;
    let ring = |i: usize| -> Vec<usize> {
        let mut r: Vec<usize> = (0..m).map(|j| grid.vertex_id(i, j, 0)).collect();
        r.push(r[0]);
        r
    };
    Ok((ring(0), ring(rings - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_counts_and_euler() {
        let cx = build_mesh(MeshSpec::Sphere2 { level: 1 }).unwrap();
        assert_eq!(cx.n_vertices(), 18);
        assert_eq!(cx.n_simplices(2), 32);
        assert_eq!(cx.euler_characteristic(), 2);
        assert!(cx.is_closed_oriented());
        for lvl in 2..=3 {
            let cx = build_mesh(MeshSpec::Sphere2 { level: lvl }).unwrap();
            assert_eq!(cx.euler_characteristic(), 2);
            assert!(cx.is_closed_oriented());
        }
    }

    #[test]
    fn sphere_vertices_on_unit_sphere() {
        let cx = build_mesh(MeshSpec::Sphere2 { level: 2 }).unwrap();
        for p in cx.coords().unwrap() {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!((r - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn torus2_euler_zero() {
        let cx = build_mesh(MeshSpec::Torus2 { n: 3, m: 3 }).unwrap();
        assert_eq!(cx.euler_characteristic(), 0);
        assert!(cx.is_closed_oriented());
    }

    #[test]
    fn torus3_audit_all_requested_sizes() {
        for n in [1u32, 2, 3] {
            let cx = build_mesh(MeshSpec::Torus3 { n, m: n, p: n }).unwrap();
            assert!(cx.is_closed_oriented(), "torus3({n}) audit failed");
            assert_eq!(cx.euler_characteristic(), 0);
            // every triangle in exactly 2 tetrahedra
            for t in 0..cx.n_simplices(2) {
                assert_eq!(cx.cofaces(2, t).len(), 2);
            }
        }
    }

    #[test]
    fn cylinder_has_boundary() {
        let cx = build_mesh(MeshSpec::Cylinder { n: 2, m: 4 }).unwrap();
        assert!(!cx.is_closed_oriented());
        let (c0, c1) = cylinder_boundary_loops(&cx).unwrap();
        assert_eq!(c0.len(), 5);
        assert_eq!(c1.len(), 5);
        assert_eq!(c0[0], c0[4]);
        // boundary edges have one coface, interior edges two
        for e in 0..cx.n_simplices(1) {
            let n = cx.cofaces(1, e).len();
            assert!(n == 1 || n == 2);
        }
    }

    #[test]
    fn circle_closed() {
        let cx = build_mesh(MeshSpec::Circle { n: 8 }).unwrap();
        assert_eq!(cx.n_vertices(), 8);
        assert_eq!(cx.n_simplices(1), 8);
        assert!(cx.is_closed_oriented());
    }

    #[test]
    fn zero_resolution_rejected() {
        assert!(build_mesh(MeshSpec::Sphere2 { level: 0 }).is_err());
        assert!(build_mesh(MeshSpec::Torus3 { n: 2, m: 0, p: 2 }).is_err());
    }

    #[test]
    fn small_periods_refined() {
        let cx = build_mesh(MeshSpec::Torus2 { n: 2, m: 2 }).unwrap();
        assert!(cx.is_closed_oriented());
        assert_eq!(cx.grid().unwrap().dims, [4, 4, 1]);
    }

    #[test]
    fn spec_parsing_roundtrip() {
        for s in ["sphere2(3)", "torus2(3,4)", "torus3(2,2,2)", "cylinder(8,12)", "circle(9)"] {
            let spec: MeshSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("sphere2".parse::<MeshSpec>().is_err());
        assert!("klein(3)".parse::<MeshSpec>().is_err());
        assert!("sphere2(x)".parse::<MeshSpec>().is_err());
    }

    #[test]
    fn equator_is_closed_edge_loop() {
        let cx = build_mesh(MeshSpec::Sphere2 { level: 3 }).unwrap();
        let eq = equator_loop(&cx).unwrap();
        assert_eq!(eq.len(), 4 * 8 + 1);
        assert_eq!(eq.first(), eq.last());
    }

    #[test]
    fn latitude_walk_is_closed_and_connected() {
        let cx = build_mesh(MeshSpec::Sphere2 { level: 4 }).unwrap();
        let lat = latitude_loop(&cx, std::f64::consts::FRAC_PI_3).unwrap();
        assert_eq!(lat.first(), lat.last());
        for w in lat.windows(2) {
            assert!(cx.edge_id([w[0].min(w[1]), w[0].max(w[1])]).is_some());
        }
        let coords = cx.coords().unwrap();
        for &v in &lat {
            let z = coords[v][2];
            assert!((z - 0.5).abs() < 0.25, "latitude walk strays: z = {z}");
        }
    }
}
