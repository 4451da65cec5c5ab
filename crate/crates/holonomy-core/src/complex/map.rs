//! Simplicial maps and cochain pullback.

use std::sync::Arc;

use super::cochain::{C64, Cochain, CochainKind};
use super::SimplicialComplex;
use crate::error::{HoloError, Result};

/// Where a source simplex lands: on a target simplex with a parity sign, or
/// collapsed onto a lower-dimensional one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSimplex {
    On(usize, i8),
    Degenerate,
}

/// A vertex assignment whose induced map sends every simplex of the source
/// onto a simplex of the target. Degenerate collapses are allowed and
/// recorded at construction.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_map: Vec<usize>,
    images: [Vec<ImageSimplex>; 4],
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.n_vertices() {
            return Err(HoloError::InvalidMap(format!(
                "vertex map covers {} of {} vertices",
                vertex_map.len(),
                source.n_vertices()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.n_vertices()) {
            return Err(HoloError::InvalidMap(format!(
                "image vertex {v} outside the target"
            )));
        }
        let mut images: [Vec<ImageSimplex>; 4] = Default::default();
        for degree in 0..=3 {
            let n = source.n_simplices(degree);
            let mut imgs = Vec::with_capacity(n);
            for idx in 0..n {
                let verts = source.simplex_vertices(degree, idx);
                let mapped: Vec<usize> = verts.iter().map(|&v| vertex_map[v]).collect();
                let mut sorted = mapped.clone();
                match super::sort_with_parity(&mut sorted) {
                    None => imgs.push(ImageSimplex::Degenerate),
                    Some(sign) => match target.resolve(&sorted) {
                        Some((tidx, _)) => imgs.push(ImageSimplex::On(tidx, sign)),
                        None => {
                            return Err(HoloError::InvalidMap(format!(
                                "image of simplex {verts:?} spans {sorted:?}, absent from target"
                            )))
                        }
                    },
                }
            }
            images[degree] = imgs;
        }
        Ok(SimplicialMap {
            source,
            target,
            vertex_map,
            images,
        })
    }

    pub fn identity(cx: Arc<SimplicialComplex>) -> Self {
        let n = cx.n_vertices();
        SimplicialMap::new(cx.clone(), cx, (0..n).collect()).expect("identity is simplicial")
    }

    pub fn constant(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        vertex: usize,
    ) -> Result<Self> {
        let n = source.n_vertices();
        SimplicialMap::new(source, target, vec![vertex; n])
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn image(&self, degree: usize, idx: usize) -> ImageSimplex {
        self.images[degree][idx]
    }

    /// Number of source simplices of a degree that collapse.
    pub fn degenerate_count(&self, degree: usize) -> usize {
        self.images[degree]
            .iter()
            .filter(|i| matches!(i, ImageSimplex::Degenerate))
            .count()
    }

    /// Pullback of a cochain on the target: the value on the image simplex
    /// with the parity sign, neutral (0 real / 1 phase) on collapses.
    pub fn pullback(&self, c: &Cochain) -> Result<Cochain> {
        let degree = c.degree();
        if degree > self.source.dimension() {
            return Err(HoloError::InvalidInput(format!(
                "cannot pull a degree-{degree} cochain back to a {}-dimensional source",
                self.source.dimension()
            )));
        }
        if c.len() != self.target.n_simplices(degree) {
            return Err(HoloError::InvalidInput(
                "cochain length does not match the map's target".into(),
            ));
        }
        let n = self.source.n_simplices(degree);
        match c.kind() {
            CochainKind::Real => {
                let mut out = vec![0.0; n];
                for (i, o) in out.iter_mut().enumerate() {
                    if let ImageSimplex::On(t, s) = self.images[degree][i] {
                        *o = f64::from(s) * c.real_values()[t];
                    }
                }
                Ok(Cochain::from_real_values(degree, out))
            }
            CochainKind::Phase => {
                let mut out = vec![C64::new(1.0, 0.0); n];
                for (i, o) in out.iter_mut().enumerate() {
                    if let ImageSimplex::On(t, s) = self.images[degree][i] {
                        let z = c.phase_values()[t];
                        *o = if s >= 0 { z } else { z.conj() };
                    }
                }
                Cochain::from_phase_values(degree, out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::coboundary::coboundary;
    use crate::complex::mesh::{build_mesh, MeshSpec};

    #[test]
    fn identity_pullback_is_identity() {
        let cx = Arc::new(build_mesh(MeshSpec::Torus2 { n: 3, m: 3 }).unwrap());
        let f = SimplicialMap::identity(cx.clone());
        let c = Cochain::from_real_fn(&cx, 1, |e| e[0] as f64 - 0.5 * e[1] as f64);
        let p = f.pullback(&c).unwrap();
        assert_eq!(p.real_values(), c.real_values());
    }

    #[test]
    fn constant_map_pullback_is_neutral() {
        let cx = Arc::new(build_mesh(MeshSpec::Torus2 { n: 3, m: 3 }).unwrap());
        let f = SimplicialMap::constant(cx.clone(), cx.clone(), 0).unwrap();
        let c = Cochain::from_real_fn(&cx, 1, |e| e[0] as f64 + 1.0);
        let p = f.pullback(&c).unwrap();
        assert!(p.real_values().iter().all(|&x| x == 0.0));
        assert_eq!(f.degenerate_count(1), cx.n_simplices(1));
    }

    #[test]
    fn non_simplicial_assignment_rejected() {
        // Two disjoint edges mapped onto a diagonal of a square mesh.
        let square =
            Arc::new(SimplicialComplex::from_cells(&[vec![0, 1, 2], vec![0, 2, 3]], None).unwrap());
        let path = Arc::new(SimplicialComplex::from_cells(&[vec![0, 1]], None).unwrap());
        // (1,3) is not an edge of the square.
        let r = SimplicialMap::new(path, square, vec![1, 3]);
        assert!(r.is_err());
    }

    #[test]
    fn pullback_commutes_with_coboundary() {
        // Collapse a torus onto one of its grid circles.
        let torus = Arc::new(build_mesh(MeshSpec::Torus2 { n: 4, m: 4 }).unwrap());
        let grid = *torus.grid().unwrap();
        let vmap: Vec<usize> = (0..torus.n_vertices())
            .map(|v| {
                let [x, _, _] = grid.coords_of(v);
                grid.vertex_id(x, 0, 0)
            })
            .collect();
        let f = SimplicialMap::new(torus.clone(), torus.clone(), vmap).unwrap();
        let c = Cochain::from_real_fn(&torus, 1, |e| (3 * e[0] + 7 * e[1]) as f64 * 0.01);
        let lhs = coboundary(&torus, &f.pullback(&c).unwrap()).unwrap();
        let rhs = f.pullback(&coboundary(&torus, &c).unwrap()).unwrap();
        for (a, b) in lhs.real_values().iter().zip(rhs.real_values()) {
            assert!((a - b).abs() < 1e-12, "naturality violated: {a} vs {b}");
        }
    }
}
