//! Discrete Hermitian line bundles with connection.
//!
//! A bundle is a unit phase U_e per oriented edge (a link variable);
//! reversing the edge conjugates the phase. Loop holonomy is the ordered
//! product of link phases, curvature is the principal argument of the
//! boundary product around each triangle, and the Chern number of a closed
//! oriented surface is the curvature sum over 2π. Gauge transformations act
//! by vertex phases and leave every loop observable unchanged.
//!
//! Sign convention (the one global choice): over the unit sphere with
//! outward orientation, the lower band of H = x·σ has Chern number −1.

use std::sync::Arc;

use crate::complex::{
    C64, Cochain, CochainKind, OrientedSurface, SimplicialComplex,
};
use crate::error::{HoloError, Result};

/// Required closeness of a curvature sum to 2πZ before rounding.
pub const QUANTIZATION_TOL: f64 = 1e-6;

/// An integer invariant together with its distance from exact quantization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizedInvariant {
    pub value: i64,
    pub residual: f64,
}

/// A line bundle with connection: one unit phase per edge of the base.
#[derive(Debug, Clone)]
pub struct LineBundle {
    base: Arc<SimplicialComplex>,
    link: Vec<C64>,
}

impl LineBundle {
    /// The trivial bundle with trivial connection.
    pub fn all_ones(base: Arc<SimplicialComplex>) -> Self {
        let n = base.n_simplices(1);
        LineBundle {
            base,
            link: vec![C64::new(1.0, 0.0); n],
        }
    }

    /// Wraps a phase 1-cochain as link variables.
    pub fn from_cochain(base: Arc<SimplicialComplex>, c: &Cochain) -> Result<Self> {
        if c.degree() != 1 || c.kind() != CochainKind::Phase {
            return Err(HoloError::InvalidInput(
                "a line bundle is a phase cochain of degree 1".into(),
            ));
        }
        if c.len() != base.n_simplices(1) {
            return Err(HoloError::InvalidInput(
                "cochain length does not match the base".into(),
            ));
        }
        Ok(LineBundle {
            base,
            link: c.phase_values().to_vec(),
        })
    }

    pub(crate) fn from_links(base: Arc<SimplicialComplex>, link: Vec<C64>) -> Self {
        LineBundle { base, link }
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn as_cochain(&self) -> Cochain {
        Cochain::from_phase_values(1, self.link.clone()).expect("links are unit phases")
    }

    /// Link phase on the oriented edge v → w.
    pub fn link(&self, v: usize, w: usize) -> Result<C64> {
        let (idx, sign) = self
            .base
            .resolve(&[v, w])
            .ok_or_else(|| HoloError::InvalidLoop(format!("({v},{w}) is not an edge")))?;
        Ok(if sign >= 0 {
            self.link[idx]
        } else {
            self.link[idx].conj()
        })
    }

    /// Ordered product of link phases along a closed vertex path
    /// (`path[0] == path[last]`).
    pub fn loop_holonomy(&self, path: &[usize]) -> Result<C64> {
        if path.len() < 2 || path.first() != path.last() {
            return Err(HoloError::InvalidLoop(
                "path must be closed: first vertex repeated at the end".into(),
            ));
        }
        let mut acc = C64::new(1.0, 0.0);
        for w in path.windows(2) {
            acc *= self.link(w[0], w[1])?;
        }
        Ok(acc / acc.norm())
    }

    /// Principal argument of the boundary product around each triangle.
    pub fn plaquette_curvature(&self) -> Cochain {
        let n = self.base.n_simplices(2);
        let mut out = vec![0.0; n];
        for (t, o) in out.iter_mut().enumerate() {
            let mut prod = C64::new(1.0, 0.0);
            for (e, s) in self.base.faces(2, t) {
                prod *= if s >= 0 {
                    self.link[e]
                } else {
                    self.link[e].conj()
                };
            }
            *o = prod.arg();
        }
        Cochain::from_real_values(2, out)
    }

    /// Curvature flux through a closed oriented surface over 2π, rounded to
    /// the nearest integer. Fails if the sum sits further than
    /// [`QUANTIZATION_TOL`] from 2πZ — a plaquette product landed on the
    /// branch cut and the mesh should be refined.
    pub fn chern_number(&self, surface: &OrientedSurface) -> Result<QuantizedInvariant> {
        let curv = self.plaquette_curvature();
        let vals = curv.real_values();
        let mut total = 0.0;
        for &(t, s) in &surface.triangles {
            total += f64::from(s) * vals[t];
        }
        quantize(total)
    }

    /// U'(v→w) = g(w) · U(v→w) · conj(g(v)).
    pub fn gauge_transform(&self, g: &Cochain) -> Result<LineBundle> {
        if g.degree() != 0 || g.kind() != CochainKind::Phase {
            return Err(HoloError::InvalidInput(
                "gauge transformations are phase 0-cochains".into(),
            ));
        }
        if g.len() != self.base.n_vertices() {
            return Err(HoloError::InvalidInput(
                "gauge cochain does not cover all vertices".into(),
            ));
        }
        let gv = g.phase_values();
        let link = self
            .base
            .edges()
            .iter()
            .zip(&self.link)
            .map(|(e, u)| gv[e[1]] * u * gv[e[0]].conj())
            .collect();
        Ok(LineBundle {
            base: self.base.clone(),
            link,
        })
    }

    /// Edgewise product of two bundles over the same base.
    pub fn tensor(&self, other: &LineBundle) -> Result<LineBundle> {
        if !Arc::ptr_eq(&self.base, &other.base) {
            return Err(HoloError::BaseMismatch);
        }
        let link = self
            .link
            .iter()
            .zip(&other.link)
            .map(|(a, b)| a * b)
            .collect();
        Ok(LineBundle {
            base: self.base.clone(),
            link,
        })
    }

    /// Edgewise conjugate.
    pub fn dual(&self) -> LineBundle {
        LineBundle {
            base: self.base.clone(),
            link: self.link.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// Rounds an angle sum to the nearest multiple of 2π.
pub(crate) fn quantize(total: f64) -> Result<QuantizedInvariant> {
    let ratio = total / (2.0 * std::f64::consts::PI);
    let value = ratio.round() as i64;
    let residual = (ratio - value as f64).abs();
    if residual >= QUANTIZATION_TOL {
        Err(HoloError::QuantizationFailure { residual })
    } else {
        Ok(QuantizedInvariant { value, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_mesh, coboundary, equator_loop, MeshSpec};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_phases(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
        (0..n)
            .map(|_| scale * (rng.random::<f64>() * 2.0 - 1.0))
            .collect()
    }

    fn sphere_bundle(seed: u64) -> (Arc<SimplicialComplex>, LineBundle) {
        let cx = Arc::new(build_mesh(MeshSpec::Sphere2 { level: 2 }).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = random_phases(&mut rng, cx.n_simplices(1), 0.4);
        let b = LineBundle::from_cochain(cx.clone(), &Cochain::from_angles(1, &angles)).unwrap();
        (cx, b)
    }

    #[test]
    fn trivial_bundle_has_unit_holonomy_and_zero_curvature() {
        let cx = Arc::new(build_mesh(MeshSpec::Sphere2 { level: 2 }).unwrap());
        let b = LineBundle::all_ones(cx.clone());
        let eq = equator_loop(&cx).unwrap();
        let h = b.loop_holonomy(&eq).unwrap();
        assert!((h - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(b.plaquette_curvature().real_values().iter().all(|&f| f == 0.0));
        let surf = OrientedSurface::whole(&cx).unwrap();
        assert_eq!(b.chern_number(&surf).unwrap().value, 0);
    }

    #[test]
    fn reversed_loop_conjugates_holonomy() {
        let (cx, b) = sphere_bundle(7);
        let eq = equator_loop(&cx).unwrap();
        let fwd = b.loop_holonomy(&eq).unwrap();
        let rev: Vec<usize> = eq.iter().rev().copied().collect();
        let bwd = b.loop_holonomy(&rev).unwrap();
        assert!((fwd * bwd - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn open_path_rejected() {
        let (cx, b) = sphere_bundle(7);
        let mut eq = equator_loop(&cx).unwrap();
        eq.pop();
        assert!(matches!(
            b.loop_holonomy(&eq),
            Err(HoloError::InvalidLoop(_))
        ));
    }

    #[test]
    fn pure_gauge_bundle_is_flat() {
        let cx = Arc::new(build_mesh(MeshSpec::Torus2 { n: 4, m: 4 }).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Cochain::from_angles(0, &random_phases(&mut rng, cx.n_vertices(), 3.0));
        let dg = coboundary(&cx, &g).unwrap();
        let b = LineBundle::from_cochain(cx.clone(), &dg).unwrap();
        let max = b
            .plaquette_curvature()
            .real_values()
            .iter()
            .fold(0.0f64, |m, &f| m.max(f.abs()));
        assert!(max < 1e-12, "pure-gauge curvature {max}");
    }

    #[test]
    fn gauge_action_preserves_holonomy_and_chern() {
        let (cx, b) = sphere_bundle(11);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = Cochain::from_angles(0, &random_phases(&mut rng, cx.n_vertices(), 3.0));
        let bg = b.gauge_transform(&g).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let h0 = b.loop_holonomy(&eq).unwrap();
        let h1 = bg.loop_holonomy(&eq).unwrap();
        assert!((h0 - h1).norm() < 1e-12);
        let surf = OrientedSurface::whole(&cx).unwrap();
        assert_eq!(
            b.chern_number(&surf).unwrap().value,
            bg.chern_number(&surf).unwrap().value
        );
    }

    #[test]
    fn curvature_sum_is_quantized_on_closed_surfaces() {
        for seed in 0..5u64 {
            let cx = Arc::new(build_mesh(MeshSpec::Torus2 { n: 4, m: 5 }).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Large random angles so plaquette products wrap freely.
            let angles = random_phases(&mut rng, cx.n_simplices(1), 3.0);
            let b =
                LineBundle::from_cochain(cx.clone(), &Cochain::from_angles(1, &angles)).unwrap();
            let surf = OrientedSurface::whole(&cx).unwrap();
            let q = b.chern_number(&surf).unwrap();
            assert!(q.residual < 1e-9, "seed {seed}: residual {}", q.residual);
        }
    }

    #[test]
    fn chern_flips_under_orientation_reversal() {
        let (cx, b) = sphere_bundle(5);
        let surf = OrientedSurface::whole(&cx).unwrap();
        let c = b.chern_number(&surf).unwrap().value;
        let cr = b.chern_number(&surf.reversed()).unwrap().value;
        assert_eq!(c, -cr);
    }

    #[test]
    fn tensor_with_dual_is_flat_and_dual_is_involutive() {
        let (_, b) = sphere_bundle(19);
        let flat = b.tensor(&b.dual()).unwrap();
        let max = flat
            .plaquette_curvature()
            .real_values()
            .iter()
            .fold(0.0f64, |m, &f| m.max(f.abs()));
        assert!(max < 1e-12);
        let bb = b.dual().dual();
        for (a, c) in b.link.iter().zip(&bb.link) {
            assert!((a - c).norm() < 1e-15);
        }
    }

    #[test]
    fn base_mismatch_rejected() {
        let (_, b1) = sphere_bundle(1);
        let (_, b2) = sphere_bundle(2);
        assert!(matches!(b1.tensor(&b2), Err(HoloError::BaseMismatch)));
    }

    #[test]
    fn stokes_on_disk_patches() {
        // Holonomy around a patch boundary equals the enclosed curvature
        // flux up to 2πZ.
        let (cx, b) = sphere_bundle(23);
        let curv = b.plaquette_curvature();
        // Grow a patch of triangles around triangle 0 by breadth-first
        // adjacency, then walk its boundary.
        let mut patch = vec![0usize];
        let mut seen = vec![false; cx.n_simplices(2)];
        seen[0] = true;
        let mut frontier = vec![0usize];
        for _ in 0..3 {
            let mut next = Vec::new();
            for &t in &frontier {
                for (e, _) in cx.faces(2, t) {
                    for &(t2, _) in cx.cofaces(1, e) {
                        if !seen[t2] {
                            seen[t2] = true;
                            patch.push(t2);
                            next.push(t2);
                        }
                    }
                }
            }
            frontier = next;
        }
        patch.sort_unstable();
        // Oriented flux through the patch with the base orientation.
        let flux: f64 = patch
            .iter()
            .map(|&t| f64::from(cx.orientation(t)) * curv.real_values()[t])
            .sum();
        // Boundary edges: those with exactly one patch coface; chain them
        // into a loop oriented to match the patch orientation.
        use std::collections::HashMap;
        let in_patch: Vec<bool> = (0..cx.n_simplices(2)).map(|t| patch.binary_search(&t).is_ok()).collect();
        let mut succ: HashMap<usize, usize> = HashMap::new();
        for e in 0..cx.n_simplices(1) {
            let cofs: Vec<_> = cx
                .cofaces(1, e)
                .iter()
                .filter(|&&(t, _)| in_patch[t])
                .collect();
            if cofs.len() != 1 {
                continue;
            }
            let &&(t, s) = cofs.first().unwrap();
            // Induced boundary orientation: traverse the edge with the sign
            // it carries in the oriented triangle.
            let [a, c] = [cx.edges()[e][0], cx.edges()[e][1]];
            let dir = cx.orientation(t) * s;
            let (from, to) = if dir > 0 { (a, c) } else { (c, a) };
            succ.insert(from, to);
        }
        let start = *succ.keys().min().unwrap();
        let mut path = vec![start];
        let mut cur = start;
        loop {
            cur = succ[&cur];
            path.push(cur);
            if cur == start {
                break;
            }
            assert!(path.len() <= succ.len() + 1, "boundary is not a single loop");
        }
        let h = b.loop_holonomy(&path).unwrap();
        let expect = C64::from_polar(1.0, flux);
        assert!(
            (h - expect).norm() < 1e-12,
            "Stokes mismatch: {h} vs {expect}"
        );
    }
}
