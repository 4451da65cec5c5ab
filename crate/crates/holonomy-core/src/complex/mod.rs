//! Oriented simplicial complexes up to dimension 3.
//!
//! A complex stores each simplex once, as a strictly increasing vertex
//! tuple, together with face/coface incidence and an orientation sign per
//! top-dimensional simplex. Čech data on the vertex-star cover of a
//! triangulation is carried by simplicial cochains: a k-fold overlap of
//! stars is nonempty exactly when its k vertices span a (k−1)-simplex, so
//! the nerve of the cover is the complex itself and no overlap bookkeeping
//! is needed.

pub(crate) mod coboundary;
pub(crate) mod cochain;
pub(crate) mod io;
pub(crate) mod map;
pub(crate) mod mesh;

pub use coboundary::{coboundary, solve_coboundary, solve_coboundary_on, ObstructionReport, SOLVE_TOL};
pub use cochain::{integrate, C64, Chain, Cochain, CochainKind, CochainValue, PHASE_MODULUS_TOL};
pub use io::{cochain_from_json, cochain_to_json, mesh_from_json, mesh_to_json};
pub use map::{ImageSimplex, SimplicialMap};
pub use mesh::{
    annulus_into_torus3, build_mesh, cylinder_boundary_loops, equator_loop, latitude_loop,
    subtorus_into_torus3, GridInfo, MeshSpec,
};

use std::collections::HashMap;

use crate::error::{HoloError, Result};

/// Sorts a small vertex tuple in place and returns the permutation parity
/// (+1 even, −1 odd), or `None` if a vertex repeats.
pub fn sort_with_parity(verts: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..verts.len() {
        let mut j = i;
        while j > 0 && verts[j - 1] > verts[j] {
            verts.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in verts.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}

/// An oriented simplicial complex of dimension ≤ 3.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    n_vertices: usize,
    coords: Option<Vec<[f64; 3]>>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    tetrahedra: Vec<[usize; 4]>,
    edge_ids: HashMap<[usize; 2], usize>,
    triangle_ids: HashMap<[usize; 3], usize>,
    tetrahedron_ids: HashMap<[usize; 4], usize>,
    /// Per triangle: its three edges in face-drop order with sign (−1)^i.
    tri_edges: Vec<[(usize, i8); 3]>,
    /// Per tetrahedron: its four triangles in face-drop order with sign (−1)^i.
    tet_triangles: Vec<[(usize, i8); 4]>,
    /// Per vertex: incident edges with the coefficient of the vertex in δ⁰
    /// (+1 at the head of the sorted edge, −1 at the tail).
    vertex_edges: Vec<Vec<(usize, i8)>>,
    /// Per edge: triangles containing it, with the sign the edge carries in δ¹.
    edge_cofaces: Vec<Vec<(usize, i8)>>,
    /// Per triangle: tetrahedra containing it, with the sign in δ².
    tri_cofaces: Vec<Vec<(usize, i8)>>,
    dimension: usize,
    /// Orientation sign per top simplex relative to its sorted tuple.
    orientation: Vec<i8>,
    closed_oriented: bool,
    provenance: Option<MeshSpec>,
    grid: Option<GridInfo>,
}

impl SimplicialComplex {
    /// Builds a complex from top-dimensional cells given as oriented vertex
    /// tuples. All faces are generated; the cell order fixes the stored
    /// orientation signs.
    pub fn from_cells(cells: &[Vec<usize>], coords: Option<Vec<[f64; 3]>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(HoloError::InvalidSpec("no cells".into()));
        }
        let len = cells[0].len();
        if !(1..=4).contains(&len) {
            return Err(HoloError::InvalidSpec(format!(
                "cells must have 1..=4 vertices, got {len}"
            )));
        }
        if cells.iter().any(|c| c.len() != len) {
            return Err(HoloError::InvalidSpec("cells of mixed dimension".into()));
        }
        let dimension = len - 1;

        let max_vertex = cells.iter().flatten().copied().max().unwrap_or(0);
        let n_vertices = match &coords {
            Some(c) => {
                if c.len() <= max_vertex {
                    return Err(HoloError::InvalidSpec(
                        "cell references a vertex without coordinates".into(),
                    ));
                }
                c.len()
            }
            None => max_vertex + 1,
        };

        // Canonicalize cells; remember orientation parity.
        let mut sorted_cells: Vec<(Vec<usize>, i8)> = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut t = cell.clone();
            let sign = sort_with_parity(&mut t).ok_or_else(|| {
                HoloError::InvalidSpec(format!("degenerate cell {cell:?}"))
            })?;
            sorted_cells.push((t, sign));
        }

        // Collect all simplices per degree.
        use std::collections::BTreeSet;
        let mut edge_set: BTreeSet<[usize; 2]> = BTreeSet::new();
        let mut tri_set: BTreeSet<[usize; 3]> = BTreeSet::new();
        let mut tet_set: BTreeSet<[usize; 4]> = BTreeSet::new();
        let mut add = |s: &[usize]| match s.len() {
            2 => {
                edge_set.insert([s[0], s[1]]);
            }
            3 => {
                tri_set.insert([s[0], s[1], s[2]]);
            }
            4 => {
                tet_set.insert([s[0], s[1], s[2], s[3]]);
            }
            _ => {}
        };
        for (t, _) in &sorted_cells {
            add(t);
            // faces of all intermediate degrees
            for skip in subsets_dropping_one(t) {
                add(&skip);
                for skip2 in subsets_dropping_one(&skip) {
                    add(&skip2);
                }
            }
        }

        let edges: Vec<[usize; 2]> = edge_set.into_iter().collect();
        let triangles: Vec<[usize; 3]> = tri_set.into_iter().collect();
        let tetrahedra: Vec<[usize; 4]> = tet_set.into_iter().collect();

        let edge_ids: HashMap<_, _> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let triangle_ids: HashMap<_, _> =
            triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let tetrahedron_ids: HashMap<_, _> =
            tetrahedra.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        // Duplicate top cells (as sets) are a modelling error.
        {
            let top_count = match dimension {
                0 => n_vertices,
                1 => edges.len(),
                2 => triangles.len(),
                3 => tetrahedra.len(),
                _ => unreachable!(),
            };
            if dimension > 0 && sorted_cells.len() != top_count {
                return Err(HoloError::InvalidSpec("duplicate top cells".into()));
            }
        }

        // Incidence.
        let tri_edges: Vec<[(usize, i8); 3]> = triangles
            .iter()
            .map(|t| {
                let f = |a: usize, b: usize| edge_ids[&[t[a], t[b]]];
                [(f(1, 2), 1), (f(0, 2), -1), (f(0, 1), 1)]
            })
            .collect();
        let tet_triangles: Vec<[(usize, i8); 4]> = tetrahedra
            .iter()
            .map(|t| {
                let f = |a: usize, b: usize, c: usize| triangle_ids[&[t[a], t[b], t[c]]];
                [
                    (f(1, 2, 3), 1),
                    (f(0, 2, 3), -1),
                    (f(0, 1, 3), 1),
                    (f(0, 1, 2), -1),
                ]
            })
            .collect();

        let mut vertex_edges = vec![Vec::new(); n_vertices];
        for (ei, e) in edges.iter().enumerate() {
            vertex_edges[e[1]].push((ei, 1));
            vertex_edges[e[0]].push((ei, -1));
        }
        let mut edge_cofaces = vec![Vec::new(); edges.len()];
        for (ti, fs) in tri_edges.iter().enumerate() {
            for &(ei, s) in fs {
                edge_cofaces[ei].push((ti, s));
            }
        }
        let mut tri_cofaces = vec![Vec::new(); triangles.len()];
        for (ti, fs) in tet_triangles.iter().enumerate() {
            for &(fi, s) in fs {
                tri_cofaces[fi].push((ti, s));
            }
        }

        let orientation: Vec<i8> = if dimension == 0 {
            vec![1; n_vertices]
        } else {
            // Signs indexed by the canonical simplex order, not cell order.
            let mut o = vec![0i8; match dimension {
                1 => edges.len(),
                2 => triangles.len(),
                3 => tetrahedra.len(),
                _ => unreachable!(),
            }];
            for (t, sign) in &sorted_cells {
                let idx = match dimension {
                    1 => edge_ids[&[t[0], t[1]]],
                    2 => triangle_ids[&[t[0], t[1], t[2]]],
                    3 => tetrahedron_ids[&[t[0], t[1], t[2], t[3]]],
                    _ => unreachable!(),
                };
                o[idx] = *sign;
            }
            o
        };

        let mut cx = SimplicialComplex {
            n_vertices,
            coords,
            edges,
            triangles,
            tetrahedra,
            edge_ids,
            triangle_ids,
            tetrahedron_ids,
            tri_edges,
            tet_triangles,
            vertex_edges,
            edge_cofaces,
            tri_cofaces,
            dimension,
            orientation,
            closed_oriented: false,
            provenance: None,
            grid: None,
        };
        cx.closed_oriented = cx.audit_closed_oriented();
        Ok(cx)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of k-simplices.
    pub fn n_simplices(&self, degree: usize) -> usize {
        match degree {
            0 => self.n_vertices,
            1 => self.edges.len(),
            2 => self.triangles.len(),
            3 => self.tetrahedra.len(),
            _ => 0,
        }
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn tetrahedra(&self) -> &[[usize; 4]] {
        &self.tetrahedra
    }

    pub fn coords(&self) -> Option<&[[f64; 3]]> {
        self.coords.as_deref()
    }

    pub fn vertex_coord(&self, v: usize) -> Option<[f64; 3]> {
        self.coords.as_ref().map(|c| c[v])
    }

    /// Euler characteristic V − E + F − T.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.triangles.len() as i64
            - self.tetrahedra.len() as i64
    }

    pub fn edge_id(&self, e: [usize; 2]) -> Option<usize> {
        self.edge_ids.get(&e).copied()
    }

    pub fn triangle_id(&self, t: [usize; 3]) -> Option<usize> {
        self.triangle_ids.get(&t).copied()
    }

    pub fn tetrahedron_id(&self, t: [usize; 4]) -> Option<usize> {
        self.tetrahedron_ids.get(&t).copied()
    }

    /// Resolves an oriented vertex tuple to (canonical index, parity sign).
    pub fn resolve(&self, verts: &[usize]) -> Option<(usize, i8)> {
        let mut t = verts.to_vec();
        let sign = sort_with_parity(&mut t)?;
        let idx = match t.len() {
            1 => {
                if t[0] < self.n_vertices {
                    Some(t[0])
                } else {
                    None
                }
            }
            2 => self.edge_id([t[0], t[1]]),
            3 => self.triangle_id([t[0], t[1], t[2]]),
            4 => self.tetrahedron_id([t[0], t[1], t[2], t[3]]),
            _ => None,
        }?;
        Some((idx, sign))
    }

    /// The sorted vertex tuple of the idx-th k-simplex.
    pub fn simplex_vertices(&self, degree: usize, idx: usize) -> Vec<usize> {
        match degree {
            0 => vec![idx],
            1 => self.edges[idx].to_vec(),
            2 => self.triangles[idx].to_vec(),
            3 => self.tetrahedra[idx].to_vec(),
            _ => panic!("degree out of range"),
        }
    }

    /// Faces of the idx-th k-simplex with their δ signs, in face-drop order.
    pub fn faces(&self, degree: usize, idx: usize) -> Vec<(usize, i8)> {
        match degree {
            1 => {
                let [a, b] = self.edges[idx];
                vec![(b, 1), (a, -1)]
            }
            2 => self.tri_edges[idx].to_vec(),
            3 => self.tet_triangles[idx].to_vec(),
            _ => Vec::new(),
        }
    }

    /// Cofaces of the idx-th k-simplex with the sign the simplex carries in
    /// the coface's coboundary expansion.
    pub fn cofaces(&self, degree: usize, idx: usize) -> &[(usize, i8)] {
        match degree {
            0 => &self.vertex_edges[idx],
            1 => &self.edge_cofaces[idx],
            2 => &self.tri_cofaces[idx],
            _ => &[],
        }
    }

    /// Orientation sign of the idx-th top simplex relative to sorted order.
    pub fn orientation(&self, idx: usize) -> i8 {
        self.orientation[idx]
    }

    pub fn is_closed_oriented(&self) -> bool {
        self.closed_oriented
    }

    /// Checks that every (d−1)-simplex lies in exactly two d-simplices with
    /// opposite induced orientations.
    pub fn audit_closed_oriented(&self) -> bool {
        if self.dimension == 0 || self.orientation.iter().any(|&s| s == 0) {
            return false;
        }
        let n_sub = self.n_simplices(self.dimension - 1);
        for sub in 0..n_sub {
            let cofs = self.cofaces(self.dimension - 1, sub);
            if cofs.len() != 2 {
                return false;
            }
            let induced: i64 = cofs
                .iter()
                .map(|&(top, s)| (self.orientation[top] * s) as i64)
                .sum();
            if induced != 0 {
                return false;
            }
        }
        true
    }

    pub fn provenance(&self) -> Option<&MeshSpec> {
        self.provenance.as_ref()
    }

    pub(crate) fn set_provenance(&mut self, spec: MeshSpec, grid: Option<GridInfo>) {
        self.provenance = Some(spec);
        self.grid = grid;
    }

    pub fn grid(&self) -> Option<&GridInfo> {
        self.grid.as_ref()
    }

    /// Neighbouring vertices of v in ascending order.
    pub fn vertex_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertex_edges[v]
            .iter()
            .map(|&(ei, _)| {
                let [a, b] = self.edges[ei];
                if a == v {
                    b
                } else {
                    a
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// All sub-tuples obtained by dropping one vertex, preserving order.
fn subsets_dropping_one(t: &[usize]) -> Vec<Vec<usize>> {
    if t.len() <= 1 {
        return Vec::new();
    }
    (0..t.len())
        .map(|i| {
            t.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// A set of simplices of a complex closed under taking faces, identified by
/// canonical indices. Used to restrict solves and trivializations.
#[derive(Debug, Clone)]
pub struct Subcomplex {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub triangles: Vec<usize>,
}

impl Subcomplex {
    /// Face closure of a set of triangles.
    pub fn from_triangles(cx: &SimplicialComplex, tri_ids: &[usize]) -> Self {
        let mut tris: Vec<usize> = tri_ids.to_vec();
        tris.sort_unstable();
        tris.dedup();
        let mut edge_set: Vec<usize> = tris
            .iter()
            .flat_map(|&t| cx.tri_edges[t].iter().map(|&(e, _)| e))
            .collect();
        edge_set.sort_unstable();
        edge_set.dedup();
        let mut verts: Vec<usize> = edge_set
            .iter()
            .flat_map(|&e| cx.edges[e].iter().copied())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        Subcomplex {
            vertices: verts,
            edges: edge_set,
            triangles: tris,
        }
    }

    /// The whole 2-skeleton of a complex.
    pub fn whole(cx: &SimplicialComplex) -> Self {
        Subcomplex {
            vertices: (0..cx.n_vertices()).collect(),
            edges: (0..cx.n_simplices(1)).collect(),
            triangles: (0..cx.n_simplices(2)).collect(),
        }
    }

    /// The 2-skeleton closure of a triangle's open star. The open star of a
    /// triangle contains no other triangles, so this is the face closure of
    /// the triangle itself: the Čech cover element with no 2-cycles, over
    /// which any gerbe trivializes.
    pub fn triangle_star(cx: &SimplicialComplex, tri_id: usize) -> Self {
        Self::from_triangles(cx, &[tri_id])
    }
}

/// A closed oriented 2-dimensional subcomplex: triangles with orientation
/// signs such that every interior edge cancels.
#[derive(Debug, Clone)]
pub struct OrientedSurface {
    pub triangles: Vec<(usize, i8)>,
}

impl OrientedSurface {
    /// The whole complex, which must be a closed oriented surface.
    pub fn whole(cx: &SimplicialComplex) -> Result<Self> {
        if cx.dimension() != 2 || !cx.is_closed_oriented() {
            return Err(HoloError::InvalidSurface(
                "complex is not a closed oriented surface".into(),
            ));
        }
        Ok(OrientedSurface {
            triangles: (0..cx.n_simplices(2))
                .map(|t| (t, cx.orientation(t)))
                .collect(),
        })
    }

    /// Orientation with every sign flipped.
    pub fn reversed(&self) -> Self {
        OrientedSurface {
            triangles: self.triangles.iter().map(|&(t, s)| (t, -s)).collect(),
        }
    }

    /// Builds a consistent orientation over a set of triangles by
    /// propagation across shared edges, starting from the lowest triangle id
    /// with sign +1. Fails if the set is not a closed orientable surface
    /// inside the complex.
    pub fn orient(cx: &SimplicialComplex, tri_ids: &[usize]) -> Result<Self> {
        let mut ids: Vec<usize> = tri_ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return Err(HoloError::InvalidSurface("empty triangle set".into()));
        }
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        // Edge -> incident (triangle slot, δ-sign) within the set.
        let mut edge_use: HashMap<usize, Vec<(usize, i8)>> = HashMap::new();
        for (slot, &t) in ids.iter().enumerate() {
            for &(e, s) in &cx.tri_edges[t] {
                edge_use.entry(e).or_default().push((slot, s));
            }
        }
        for uses in edge_use.values() {
            if uses.len() != 2 {
                return Err(HoloError::InvalidSurface(
                    "an edge of the set does not have exactly two triangles".into(),
                ));
            }
        }
        let mut sign = vec![0i8; ids.len()];
        let mut stack = Vec::new();
        for start in 0..ids.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            stack.push(start);
            while let Some(slot) = stack.pop() {
                let t = ids[slot];
                for &(e, s) in &cx.tri_edges[t] {
                    for &(other, os) in &edge_use[&e] {
                        if other == slot {
                            continue;
                        }
                        // Opposite induced orientation on the shared edge.
                        let want = -sign[slot] * s * os;
                        if sign[other] == 0 {
                            sign[other] = want;
                            stack.push(other);
                        } else if sign[other] != want {
                            return Err(HoloError::InvalidSurface(
                                "triangle set is not orientable".into(),
                            ));
                        }
                    }
                }
            }
        }
        let _ = pos;
        Ok(OrientedSurface {
            triangles: ids.into_iter().zip(sign).collect(),
        })
    }
}

/// A closed oriented 3-dimensional subcomplex.
#[derive(Debug, Clone)]
pub struct OrientedVolume {
    pub tetrahedra: Vec<(usize, i8)>,
}

impl OrientedVolume {
    /// The whole complex, which must be a closed oriented 3-manifold.
    pub fn whole(cx: &SimplicialComplex) -> Result<Self> {
        if cx.dimension() != 3 || !cx.is_closed_oriented() {
            return Err(HoloError::InvalidInput(
                "complex is not a closed oriented 3-manifold".into(),
            ));
        }
        Ok(OrientedVolume {
            tetrahedra: (0..cx.n_simplices(3))
                .map(|t| (t, cx.orientation(t)))
                .collect(),
        })
    }

    pub fn reversed(&self) -> Self {
        OrientedVolume {
            tetrahedra: self.tetrahedra.iter().map(|&(t, s)| (t, -s)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_sorting() {
        let mut t = [2usize, 0, 1];
        assert_eq!(sort_with_parity(&mut t), Some(1));
        assert_eq!(t, [0, 1, 2]);
        let mut t = [1usize, 0];
        assert_eq!(sort_with_parity(&mut t), Some(-1));
        let mut t = [1usize, 1];
        assert_eq!(sort_with_parity(&mut t), None);
    }

    #[test]
    fn single_triangle_faces() {
        let cx = SimplicialComplex::from_cells(&[vec![0, 1, 2]], None).unwrap();
        assert_eq!(cx.n_vertices(), 3);
        assert_eq!(cx.n_simplices(1), 3);
        assert_eq!(cx.n_simplices(2), 1);
        // δ signs on the triangle: +[1,2] − [0,2] + [0,1]
        let fs = cx.faces(2, 0);
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], (cx.edge_id([1, 2]).unwrap(), 1));
        assert_eq!(fs[1], (cx.edge_id([0, 2]).unwrap(), -1));
        assert_eq!(fs[2], (cx.edge_id([0, 1]).unwrap(), 1));
    }

    #[test]
    fn resolve_orientation() {
        let cx = SimplicialComplex::from_cells(&[vec![0, 1, 2]], None).unwrap();
        let (idx, s) = cx.resolve(&[2, 1, 0]).unwrap();
        assert_eq!(idx, 0);
        assert_eq!(s, -1);
        assert!(cx.resolve(&[0, 1, 3]).is_none());
    }

    #[test]
    fn tetrahedron_boundary_is_closed() {
        // Boundary of a tetrahedron as four oriented triangles.
        let cells = vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
        let cx = SimplicialComplex::from_cells(&cells, None).unwrap();
        assert!(cx.is_closed_oriented());
        assert_eq!(cx.euler_characteristic(), 2);
    }

    #[test]
    fn duplicate_cells_rejected() {
        let r = SimplicialComplex::from_cells(&[vec![0, 1, 2], vec![2, 0, 1]], None);
        assert!(r.is_err());
    }

    #[test]
    fn orient_surface_from_unoriented_set() {
        let cells = vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]];
        let cx = SimplicialComplex::from_cells(&cells, None).unwrap();
        let all: Vec<usize> = (0..cx.n_simplices(2)).collect();
        let surf = OrientedSurface::orient(&cx, &all).unwrap();
        // The propagated orientation matches the stored one up to a global sign.
        let rel: Vec<i8> = surf
            .triangles
            .iter()
            .map(|&(t, s)| s * cx.orientation(t))
            .collect();
        assert!(rel.iter().all(|&r| r == rel[0]));
    }
}
