//! Discrete gerbes with connective structure.
//!
//! A gerbe is a unit phase W_t per oriented triangle — the gauge-invariant
//! shadow of a Čech 2-cocycle with connection and curving data. Curvature
//! lives on tetrahedra as the principal argument of the boundary product of
//! triangle phases; its total over a closed oriented 3-manifold is 2π times
//! the Dixmier–Douady number. Surface holonomy is the oriented product of
//! (pulled-back) triangle phases over a closed surface, and trivializing W
//! as a coboundary δu of edge phases over a cylinder relates the surface
//! phase to the boundary loop holonomies of u exactly, by discrete Stokes.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::bundle::{quantize, LineBundle, QuantizedInvariant};
use crate::complex::{
    coboundary, cylinder_boundary_loops, solve_coboundary_on, C64, Cochain, CochainKind,
    ImageSimplex, MeshSpec, OrientedVolume, SimplicialComplex, SimplicialMap, Subcomplex,
};
use crate::error::{HoloError, Result};

/// How far a triangle product of edge lifts may sit from a scalar matrix.
pub const SCALARITY_TOL: f64 = 1e-8;

/// Tolerance on the cocycle identity δW ≡ 1 for extracted classifying
/// cocycles.
pub const COCYCLE_TOL: f64 = 1e-10;

/// Tolerance on the cylinder identity; it is exact in exact arithmetic, so
/// this covers rounding only.
pub const CYLINDER_TOL: f64 = 1e-9;

/// A gerbe presented by one unit phase per triangle of the base.
#[derive(Debug, Clone)]
pub struct DiscreteGerbe {
    base: Arc<SimplicialComplex>,
    w: Vec<C64>,
}

impl DiscreteGerbe {
    pub fn all_ones(base: Arc<SimplicialComplex>) -> Self {
        let n = base.n_simplices(2);
        DiscreteGerbe {
            base,
            w: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn from_cochain(base: Arc<SimplicialComplex>, c: &Cochain) -> Result<Self> {
        if c.degree() != 2 || c.kind() != CochainKind::Phase {
            return Err(HoloError::InvalidInput(
                "a gerbe is a phase cochain of degree 2".into(),
            ));
        }
        if c.len() != base.n_simplices(2) {
            return Err(HoloError::InvalidInput(
                "cochain length does not match the base".into(),
            ));
        }
        Ok(DiscreteGerbe {
            base,
            w: c.phase_values().to_vec(),
        })
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn as_cochain(&self) -> Cochain {
        Cochain::from_phase_values(2, self.w.clone()).expect("unit phases")
    }

    /// Phase on the idx-th triangle with orientation sign.
    pub fn value(&self, idx: usize, sign: i8) -> C64 {
        if sign >= 0 {
            self.w[idx]
        } else {
            self.w[idx].conj()
        }
    }

    /// Largest |Arg δW| over tetrahedra — zero for genuine cocycles.
    pub fn cocycle_deviation(&self) -> f64 {
        let dw = coboundary(&self.base, &self.as_cochain()).expect("degree 2");
        dw.max_abs_angle()
    }
}

/// Extracts the classifying cocycle of projective transition data: unitary
/// lifts per oriented edge whose triangle products are scalar. The scalar,
/// read off as the normalized trace, is the triangle phase of the gerbe —
/// the obstruction to lifting the projective bundle to a vector bundle.
pub fn from_projective_cocycle(
    base: Arc<SimplicialComplex>,
    lifts: &[DMatrix<C64>],
) -> Result<DiscreteGerbe> {
    if lifts.len() != base.n_simplices(1) {
        return Err(HoloError::InvalidInput(format!(
            "{} lifts for {} edges",
            lifts.len(),
            base.n_simplices(1)
        )));
    }
    let n = lifts
        .first()
        .map(|m| m.nrows())
        .ok_or_else(|| HoloError::InvalidInput("no lifts".into()))?;
    for (e, g) in lifts.iter().enumerate() {
        if g.nrows() != n || g.ncols() != n {
            return Err(HoloError::InvalidInput(format!(
                "lift on edge {e} is not {n}×{n}"
            )));
        }
        let dev = (g * g.adjoint() - DMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > SCALARITY_TOL {
            return Err(HoloError::InvalidInput(format!(
                "lift on edge {e} is not unitary: deviation {dev:.3e}"
            )));
        }
    }
    let edge_index = |a: usize, b: usize| base.edge_id([a, b]).expect("triangle edge");
    let mut w = Vec::with_capacity(base.n_simplices(2));
    for t in 0..base.n_simplices(2) {
        let tri: [usize; 3] = base.triangles()[t];
        let [i, j, k] = tri;
        // c_ijk = g_ki · g_ij · g_jk with g_ab the transport b → a.
        let prod = lifts[edge_index(i, k)].adjoint()
            * &lifts[edge_index(i, j)]
            * &lifts[edge_index(j, k)];
        let tau = prod.trace() / C64::new(n as f64, 0.0);
        let dev = (&prod - DMatrix::from_diagonal_element(n, n, tau))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > SCALARITY_TOL || tau.norm() < 0.5 {
            return Err(HoloError::NotProjectiveCocycle {
                triangle: tri,
                deviation: dev,
            });
        }
        w.push(tau / tau.norm());
    }
    Ok(DiscreteGerbe { base, w })
}

/// Principal argument of the boundary product of triangle phases around
/// each tetrahedron.
pub fn tetra_curvature(g: &DiscreteGerbe) -> Cochain {
    let base = &g.base;
    let n = base.n_simplices(3);
    let mut out = vec![0.0; n];
    for (tet, o) in out.iter_mut().enumerate() {
        let mut prod = C64::new(1.0, 0.0);
        for (t, s) in base.faces(3, tet) {
            prod *= g.value(t, s);
        }
        *o = prod.arg();
    }
    Cochain::from_real_values(3, out)
}

/// Curvature flux through a closed oriented 3-manifold over 2π, rounded to
/// the nearest integer with its quantization residual.
pub fn dd_number(g: &DiscreteGerbe, volume: &OrientedVolume) -> Result<QuantizedInvariant> {
    let curv = tetra_curvature(g);
    let vals = curv.real_values();
    let mut total = 0.0;
    for &(tet, s) in &volume.tetrahedra {
        total += f64::from(s) * vals[tet];
    }
    quantize(total)
}

/// W ↦ W · δλ for edge phases λ; all closed-surface observables and the
/// Dixmier–Douady number are unchanged.
pub fn gauge_gerbe(g: &DiscreteGerbe, lambda: &Cochain) -> Result<DiscreteGerbe> {
    if lambda.degree() != 1 || lambda.kind() != CochainKind::Phase {
        return Err(HoloError::InvalidInput(
            "gerbe gauge shifts are phase 1-cochains".into(),
        ));
    }
    let dl = coboundary(&g.base, lambda)?;
    let w = g
        .w
        .iter()
        .zip(dl.phase_values())
        .map(|(a, b)| a * b)
        .collect();
    Ok(DiscreteGerbe {
        base: g.base.clone(),
        w,
    })
}

/// Pullback along a simplicial map into the gerbe's base.
pub fn pullback_gerbe(f: &SimplicialMap, g: &DiscreteGerbe) -> Result<DiscreteGerbe> {
    if !Arc::ptr_eq(f.target(), &g.base) {
        return Err(HoloError::BaseMismatch);
    }
    let c = f.pullback(&g.as_cochain())?;
    DiscreteGerbe::from_cochain(f.source().clone(), &c)
}

/// Holonomy of the gerbe around a closed oriented surface mapped into the
/// base: the oriented product of pulled-back triangle phases.
pub fn surface_holonomy(g: &DiscreteGerbe, f: &SimplicialMap) -> Result<C64> {
    if !Arc::ptr_eq(f.target(), &g.base) {
        return Err(HoloError::BaseMismatch);
    }
    let src = f.source();
    if src.dimension() != 2 || !src.is_closed_oriented() {
        return Err(HoloError::InvalidSurface(
            "surface holonomy needs a closed oriented 2-dimensional source".into(),
        ));
    }
    let mut acc = C64::new(1.0, 0.0);
    for t in 0..src.n_simplices(2) {
        if let ImageSimplex::On(idx, parity) = f.image(2, t) {
            acc *= g.value(idx, src.orientation(t) * parity);
        }
    }
    Ok(acc / acc.norm())
}

/// Edge phases trivializing a gerbe over a subcomplex: δu = W there.
#[derive(Debug, Clone)]
pub struct TrivializationObject {
    pub subcomplex: Subcomplex,
    /// Phase 1-cochain over the whole base, 1 off the subcomplex.
    pub edge_phases: Cochain,
}

impl TrivializationObject {
    /// Largest per-triangle deviation of δu from W on the subcomplex.
    pub fn deviation(&self, g: &DiscreteGerbe) -> f64 {
        let du = coboundary(&g.base, &self.edge_phases).expect("degree 1");
        let dv = du.phase_values();
        self.subcomplex
            .triangles
            .iter()
            .map(|&t| (dv[t] * g.w[t].conj()).arg().abs())
            .fold(0.0, f64::max)
    }
}

/// Solves δu = W over a subcomplex whose degree-2 obstruction vanishes.
/// The failure carries the residual cocycle — the nontriviality witness.
pub fn trivialize_over(g: &DiscreteGerbe, sub: &Subcomplex) -> Result<TrivializationObject> {
    match solve_coboundary_on(&g.base, &g.as_cochain(), Some(sub)) {
        Ok(u) => Ok(TrivializationObject {
            subcomplex: sub.clone(),
            edge_phases: u,
        }),
        Err(report) => Err(HoloError::NontrivialOnSubcomplex {
            angle_sum: report.angle_sum,
            residual: report.residual,
        }),
    }
}

/// Both sides of the cylinder identity: the surface phase of the pulled-back
/// gerbe, the two boundary holonomies of one common trivialization, and
/// |surface − hol₀·hol₁⁻¹|.
#[derive(Debug, Clone, Copy)]
pub struct CylinderCheck {
    pub surface_phase: C64,
    pub hol0: C64,
    pub hol1: C64,
    pub residual: f64,
}

/// Pulls the gerbe back along a map from a generated cylinder, trivializes
/// it there (H² of a cylinder is trivial), and compares the surface phase
/// with the ratio of boundary holonomies. Both boundary circles are
/// oriented by increasing angle.
pub fn cylinder_check(g: &DiscreteGerbe, f: &SimplicialMap) -> Result<CylinderCheck> {
    let cyl = f.source().clone();
    let Some(MeshSpec::Cylinder { .. }) = cyl.provenance() else {
        return Err(HoloError::InvalidInput(
            "cylinder_check needs a map from a generated cylinder".into(),
        ));
    };
    let pulled = pullback_gerbe(f, g)?;
    let tri = trivialize_over(&pulled, &Subcomplex::whole(&cyl))?;
    let u = LineBundle::from_cochain(cyl.clone(), &tri.edge_phases)?;
    let (c0, c1) = cylinder_boundary_loops(&cyl)?;
    let hol0 = u.loop_holonomy(&c0)?;
    let hol1 = u.loop_holonomy(&c1)?;
    let mut surface = C64::new(1.0, 0.0);
    for t in 0..cyl.n_simplices(2) {
        surface *= pulled.value(t, cyl.orientation(t));
    }
    surface /= surface.norm();
    let residual = (surface - hol0 * hol1.conj()).norm();
    Ok(CylinderCheck {
        surface_phase: surface,
        hol0,
        hol1,
        residual,
    })
}

/// The reference gerbe of Dixmier–Douady number k on a generated 3-torus.
///
/// The flux 2πk is concentrated on one column of cubes rather than spread
/// uniformly: each tetrahedron of the column is assigned curvature
/// 2πk·s(T)/count, one designated tetrahedron absorbs an extra −2πk·s(T*)
/// to make the real system δB = F consistent on the closed manifold, and
/// triangle angles B are solved for exactly. On the designated tetrahedron
/// the phases wrap once around the branch cut, restoring the 2πk that the
/// real solve removed — which is precisely the nontriviality of the class.
pub fn basic_gerbe(base: Arc<SimplicialComplex>, k: i64) -> Result<DiscreteGerbe> {
    let Some(MeshSpec::Torus3 { .. }) = base.provenance() else {
        return Err(HoloError::InvalidInput(
            "basic_gerbe needs a generated torus3 base".into(),
        ));
    };
    if k == 0 {
        return Ok(DiscreteGerbe::all_ones(base));
    }
    let grid = *base.grid().expect("generated torus has grid info");
    let [_, ny, nz] = grid.dims;
    // The column: cubes whose (y, z) min corner (after unwrapping the
    // periodic seam) is the origin.
    let column: Vec<usize> = (0..base.n_simplices(3))
        .filter(|&tet| {
            let verts = base.tetrahedra()[tet];
            let mut coords: Vec<[i64; 3]> = verts
                .iter()
                .map(|&v| {
                    let c = grid.coords_of(v);
                    [c[0] as i64, c[1] as i64, c[2] as i64]
                })
                .collect();
            for axis in 0..3 {
                let max = coords.iter().map(|c| c[axis]).max().unwrap();
                let min = coords.iter().map(|c| c[axis]).min().unwrap();
                if max - min > 1 {
                    let d = grid.dims[axis] as i64;
                    for c in coords.iter_mut() {
                        if c[axis] == 0 {
                            c[axis] = d;
                        }
                    }
                }
            }
            let min_y = (coords.iter().map(|c| c[1]).min().unwrap() as usize) % ny;
            let min_z = (coords.iter().map(|c| c[2]).min().unwrap() as usize) % nz;
            (min_y, min_z) == (0, 0)
        })
        .collect();
    let two_pi = 2.0 * std::f64::consts::PI;
    let per_tet = two_pi * k as f64 / column.len() as f64;
    let mut flux = vec![0.0; base.n_simplices(3)];
    for &tet in &column {
        flux[tet] = f64::from(base.orientation(tet)) * per_tet;
    }
    // Designated wrap tetrahedron: the real solve needs a signed total of
    // zero; the removed 2πk reappears as a single branch-cut wrap.
    let star = column[0];
    flux[star] -= f64::from(base.orientation(star)) * two_pi * k as f64;
    let angles = crate::complex::coboundary::least_squares_delta(&base, 3, &flux, None)
        .ok_or_else(|| HoloError::InvalidInput("degenerate flux prescription".into()))?;
    let w = angles
        .iter()
        .map(|&a| C64::from_polar(1.0, a))
        .collect();
    Ok(DiscreteGerbe { base, w })
}

/// A Haar-ish random unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases absorbed.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
    use rand_distr::StandardNormal;
    let g = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..n {
        let d = r[(i, i)];
        let ph = if d.norm() > 0.0 {
            d.conj() / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for row in 0..n {
            q[(row, i)] *= ph;
        }
    }
    q
}
