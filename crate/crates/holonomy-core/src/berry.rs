//! Parametrized Hamiltonian families and Berry phases.
//!
//! A family assigns a Hermitian matrix to every vertex of a parameter
//! complex. The selected spectral band, checked against a gap tolerance,
//! yields a unit eigenvector per vertex; overlaps of neighbouring
//! eigenvectors give gauge-covariant link phases (the lattice discretization
//! of the band's connection), from which Berry phases and Chern numbers
//! follow. A norm-preserving Schrödinger integrator verifies that the slow
//! time evolution around a loop reproduces the Berry phase as T → ∞.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bundle::LineBundle;
use crate::complex::{C64, SimplicialComplex};
use crate::error::{HoloError, Result};

/// Hermiticity tolerance for input matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Minimum admissible |⟨φ_v, φ_w⟩| on an edge before the mesh is declared
/// too coarse to resolve the bundle.
pub const OVERLAP_TOL: f64 = 1e-6;

/// Wraps an angle into the principal branch (−π, π].
pub fn principal_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = x - two_pi * (x / two_pi).round();
    if a <= -std::f64::consts::PI {
        a += two_pi;
    }
    a
}

/// A Hermitian matrix per vertex of a parameter complex, with a selected
/// band and a spectral gap tolerance.
#[derive(Debug, Clone)]
pub struct HamiltonianFamily {
    base: Arc<SimplicialComplex>,
    matrices: Vec<DMatrix<C64>>,
    band: usize,
    gap_tol: f64,
}

impl HamiltonianFamily {
    /// Validates hermiticity and shape; the gap condition is enforced when
    /// the eigenbundle is extracted.
    pub fn new(
        base: Arc<SimplicialComplex>,
        matrices: Vec<DMatrix<C64>>,
        band: usize,
        gap_tol: f64,
    ) -> Result<Self> {
        if matrices.len() != base.n_vertices() {
            return Err(HoloError::InvalidInput(format!(
                "{} matrices for {} vertices",
                matrices.len(),
                base.n_vertices()
            )));
        }
        let n = matrices
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| HoloError::InvalidInput("empty family".into()))?;
        if n == 0 {
            return Err(HoloError::InvalidInput("0×0 Hamiltonians".into()));
        }
        if band >= n {
            return Err(HoloError::InvalidInput(format!(
                "band {band} out of range for {n}×{n} Hamiltonians"
            )));
        }
        if gap_tol <= 0.0 {
            return Err(HoloError::InvalidInput("gap tolerance must be > 0".into()));
        }
        for (v, m) in matrices.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(HoloError::InvalidInput(format!(
                    "matrix at vertex {v} is not {n}×{n}"
                )));
            }
            let dev = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if dev > HERMITIAN_TOL {
                return Err(HoloError::InvalidInput(format!(
                    "matrix at vertex {v} is not Hermitian: deviation {dev:.3e}"
                )));
            }
        }
        Ok(HamiltonianFamily {
            base,
            matrices,
            band,
            gap_tol,
        })
    }

    /// The default gap tolerance: 10⁻³ × the mean spectral spread over the
    /// vertices.
    pub fn default_gap_tolerance(matrices: &[DMatrix<C64>]) -> f64 {
        let mut total = 0.0;
        for m in matrices {
            let ev = sorted_eigen(m).0;
            total += ev.last().unwrap_or(&0.0) - ev.first().unwrap_or(&0.0);
        }
        1e-3 * total / matrices.len().max(1) as f64
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn gap_tolerance(&self) -> f64 {
        self.gap_tol
    }

    pub fn matrix(&self, v: usize) -> &DMatrix<C64> {
        &self.matrices[v]
    }

    /// Same family with another selected band.
    pub fn with_band(&self, band: usize) -> Result<Self> {
        HamiltonianFamily::new(
            self.base.clone(),
            self.matrices.clone(),
            band,
            self.gap_tol,
        )
    }
}

/// The two-level family H(v) = field(v)·σ over a complex with one ℝ³ value
/// per vertex. The spectral gap at v is 2·|field(v)|.
pub fn spin_half(base: Arc<SimplicialComplex>, field: &[[f64; 3]]) -> Result<HamiltonianFamily> {
    if field.len() != base.n_vertices() {
        return Err(HoloError::InvalidInput(
            "field does not cover all vertices".into(),
        ));
    }
    let mut matrices = Vec::with_capacity(field.len());
    let mut mean_spread = 0.0;
    for (v, f) in field.iter().enumerate() {
        let norm = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
        if norm == 0.0 {
            return Err(HoloError::InvalidInput(format!(
                "field vanishes at vertex {v}"
            )));
        }
        mean_spread += 2.0 * norm;
        matrices.push(DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(f[2], 0.0),
                C64::new(f[0], -f[1]),
                C64::new(f[0], f[1]),
                C64::new(-f[2], 0.0),
            ],
        ));
    }
    mean_spread /= field.len() as f64;
    HamiltonianFamily::new(base, matrices, 0, 1e-3 * mean_spread)
}

/// [`spin_half`] with the unit radial field read off the vertex embedding.
pub fn spin_half_radial(base: Arc<SimplicialComplex>) -> Result<HamiltonianFamily> {
    let coords = base
        .coords()
        .ok_or_else(|| HoloError::InvalidInput("mesh carries no coordinates".into()))?;
    let field: Vec<[f64; 3]> = coords
        .iter()
        .map(|p| {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt().max(1e-300);
            [p[0] / n, p[1] / n, p[2] / n]
        })
        .collect();
    spin_half(base, &field)
}

/// A unit eigenvector and eigenvalue per vertex for one selected band.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    base: Arc<SimplicialComplex>,
    vectors: Vec<DVector<C64>>,
    values: Vec<f64>,
}

impl EigenFrame {
    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn vector(&self, v: usize) -> &DVector<C64> {
        &self.vectors[v]
    }

    pub fn value(&self, v: usize) -> f64 {
        self.values[v]
    }

    /// Multiplies each vertex vector by a unit phase; observables built on
    /// loops must not change.
    pub fn rephased(&self, phases: &[C64]) -> EigenFrame {
        EigenFrame {
            base: self.base.clone(),
            vectors: self
                .vectors
                .iter()
                .zip(phases)
                .map(|(v, z)| v * *z)
                .collect(),
            values: self.values.clone(),
        }
    }
}

/// Eigenvalues ascending with the matching eigenvector columns.
fn sorted_eigen(m: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors: Vec<DVector<C64>> = order
        .iter()
        .map(|&i| se.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}

/// Deterministic representative of the eigenvector's U(1) orbit: the
/// largest-modulus component is made real and positive.
fn fix_phase(mut v: DVector<C64>) -> DVector<C64> {
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    let z = v[best];
    let w = z.conj() / z.norm();
    v *= w;
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Extracts the selected band's unit eigenvector at every vertex, enforcing
/// the spectral gap.
pub fn eigenbundle(h: &HamiltonianFamily) -> Result<EigenFrame> {
    let band = h.band;
    let mut vectors = Vec::with_capacity(h.matrices.len());
    let mut values = Vec::with_capacity(h.matrices.len());
    for (vertex, m) in h.matrices.iter().enumerate() {
        let (ev, vecs) = sorted_eigen(m);
        let gap = ev
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != band)
            .map(|(_, &e)| (e - ev[band]).abs())
            .fold(f64::INFINITY, f64::min);
        if gap < 1e-12 {
            return Err(HoloError::DegenerateBand { vertex });
        }
        if gap <= h.gap_tol {
            return Err(HoloError::GapClosure {
                vertex,
                gap,
                tol: h.gap_tol,
            });
        }
        values.push(ev[band]);
        vectors.push(fix_phase(vecs[band].clone()));
    }
    Ok(EigenFrame {
        base: h.base.clone(),
        vectors,
        values,
    })
}

/// Link phases U(v→w) from normalized eigenvector overlaps.
///
/// The transport direction is chosen so that the lower band of the radial
/// spin-½ family over the outward-oriented sphere has Chern number −1; this
/// is the crate's one global sign convention.
pub fn link_phases(frame: &EigenFrame) -> Result<LineBundle> {
    let base = frame.base.clone();
    let mut link = Vec::with_capacity(base.n_simplices(1));
    for e in base.edges() {
        let [v, w] = *e;
        let z = frame.vectors[v].dotc(&frame.vectors[w]);
        let n = z.norm();
        if n <= OVERLAP_TOL {
            return Err(HoloError::MeshTooCoarse {
                edge: *e,
                overlap: n,
            });
        }
        link.push(z / n);
    }
    Ok(LineBundle::from_links(base, link))
}

/// Principal argument of the loop holonomy of the selected band.
pub fn berry_phase(h: &HamiltonianFamily, path: &[usize]) -> Result<f64> {
    let bundle = link_phases(&eigenbundle(h)?)?;
    Ok(bundle.loop_holonomy(path)?.arg())
}

/// Outcome of one slow drive around a parameter loop.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticRecord {
    /// arg⟨Ψ(0), Ψ(T)⟩.
    pub total_phase: f64,
    /// −∫ E(t) dt, wrapped to the principal branch.
    pub dynamical_phase: f64,
    /// total − dynamical mod 2π; approaches the Berry phase as T → ∞.
    pub geometric_residue: f64,
    /// Largest single-step deviation of ‖Ψ‖ from 1 before renormalization.
    pub norm_drift: f64,
}

/// Integrates i ∂t Ψ = H(t) Ψ along the time-parametrized loop.
///
/// H(t) interpolates linearly along each edge of the loop; each step applies
/// the exact exponential of the midpoint Hamiltonian, so the update is
/// unitary and the local error is O(Δt³) against the time-ordered flow.
pub fn adiabatic_evolve(
    h: &HamiltonianFamily,
    path: &[usize],
    t_final: f64,
    steps: usize,
) -> Result<AdiabaticRecord> {
    if path.len() < 2 || path.first() != path.last() {
        return Err(HoloError::InvalidLoop(
            "adiabatic drive needs a closed vertex path".into(),
        ));
    }
    let n_edges = path.len() - 1;
    for w in path.windows(2) {
        if h.base.resolve(&[w[0], w[1]]).is_none() {
            return Err(HoloError::InvalidLoop(format!(
                "({},{}) is not an edge",
                w[0], w[1]
            )));
        }
    }
    if t_final <= 0.0 {
        return Err(HoloError::InvalidInput("total time must be > 0".into()));
    }
    if steps < 100 * n_edges {
        return Err(HoloError::InvalidInput(format!(
            "need at least 100 steps per loop edge ({} < {})",
            steps,
            100 * n_edges
        )));
    }

    let h_at = |s: f64| -> (DMatrix<C64>, usize) {
        let x = (s * n_edges as f64).min(n_edges as f64 - 1e-12);
        let k = x.floor() as usize;
        let lam = x - k as f64;
        let a = &h.matrices[path[k]];
        let b = &h.matrices[path[k + 1]];
        (a * C64::new(1.0 - lam, 0.0) + b * C64::new(lam, 0.0), path[k])
    };

    // Initial state: the selected eigenvector at the loop start.
    let (ev0, vecs0) = sorted_eigen(&h.matrices[path[0]]);
    let gap0 = min_gap(&ev0, h.band);
    if gap0 <= h.gap_tol {
        return Err(HoloError::GapClosure {
            vertex: path[0],
            gap: gap0,
            tol: h.gap_tol,
        });
    }
    let psi0 = fix_phase(vecs0[h.band].clone());
    let mut psi = psi0.clone();

    let dt = t_final / steps as f64;
    let mut dynamical = 0.0;
    let mut drift: f64 = 0.0;
    for i in 0..steps {
        let s_mid = (i as f64 + 0.5) / steps as f64;
        let (h_mid, near_vertex) = h_at(s_mid);
        let (ev, vecs) = sorted_eigen(&h_mid);
        let gap = min_gap(&ev, h.band);
        if gap <= h.gap_tol {
            return Err(HoloError::GapClosure {
                vertex: near_vertex,
                gap,
                tol: h.gap_tol,
            });
        }
        dynamical -= ev[h.band] * dt;
        // Ψ ← Σ_k e^{−i λ_k Δt} v_k ⟨v_k, Ψ⟩
        let mut next = DVector::from_element(psi.len(), C64::new(0.0, 0.0));
        for (lam, v) in ev.iter().zip(&vecs) {
            let amp = v.dotc(&psi);
            let rot = C64::from_polar(1.0, -lam * dt);
            next += v * (amp * rot);
        }
        let n = next.norm();
        drift = drift.max((n - 1.0).abs());
        if drift > 1e-6 {
            return Err(HoloError::IntegratorFailure { drift });
        }
        psi = next / C64::new(n, 0.0);
    }

    let total_phase = psi0.dotc(&psi).arg();
    Ok(AdiabaticRecord {
        total_phase,
        dynamical_phase: principal_angle(dynamical),
        geometric_residue: principal_angle(total_phase - dynamical),
        norm_drift: drift,
    })
}

fn min_gap(sorted_values: &[f64], band: usize) -> f64 {
    sorted_values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != band)
        .map(|(_, &e)| (e - sorted_values[band]).abs())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_mesh, equator_loop, Cochain, MeshSpec, OrientedSurface};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sphere(level: u32) -> Arc<SimplicialComplex> {
        Arc::new(build_mesh(MeshSpec::Sphere2 { level }).unwrap())
    }

    #[test]
    fn constant_diagonal_family() {
        let cx = sphere(1);
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(2.0, 0.0),
            ],
        );
        let h =
            HamiltonianFamily::new(cx.clone(), vec![m; cx.n_vertices()], 0, 1e-3).unwrap();
        let frame = eigenbundle(&h).unwrap();
        for v in 0..cx.n_vertices() {
            assert!((frame.value(v) - 1.0).abs() < 1e-14);
            assert!((frame.vector(v)[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
            assert!(frame.vector(v)[1].norm() < 1e-14);
        }
        // Constant frame → trivial bundle, zero Berry phase.
        let eq = equator_loop(&cx).unwrap();
        assert!(berry_phase(&h, &eq).unwrap().abs() < 1e-13);
    }

    #[test]
    fn radial_spin_half_eigenvalues() {
        let cx = sphere(2);
        let h = spin_half_radial(cx.clone()).unwrap();
        let frame = eigenbundle(&h).unwrap();
        for v in 0..cx.n_vertices() {
            assert!((frame.value(v) + 1.0).abs() < 1e-12);
        }
        let upper = eigenbundle(&h.with_band(1).unwrap()).unwrap();
        for v in 0..cx.n_vertices() {
            assert!((upper.value(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_rejected_and_gap_closure_detected() {
        let cx = sphere(1);
        let mut field = vec![[0.0, 0.0, 1.0]; cx.n_vertices()];
        field[3] = [0.0, 0.0, 0.0];
        assert!(matches!(
            spin_half(cx.clone(), &field),
            Err(HoloError::InvalidInput(_))
        ));
        // A near-zero vector passes construction but closes the gap.
        field[3] = [0.0, 0.0, 1e-9];
        let h = spin_half(cx.clone(), &field).unwrap();
        match eigenbundle(&h) {
            Err(HoloError::GapClosure { vertex, .. }) => assert_eq!(vertex, 3),
            other => panic!("expected gap closure, got {other:?}"),
        }
    }

    #[test]
    fn lower_band_chern_is_minus_one() {
        for level in [2u32, 3] {
            let cx = sphere(level);
            let h = spin_half_radial(cx.clone()).unwrap();
            let bundle = link_phases(&eigenbundle(&h).unwrap()).unwrap();
            let surf = OrientedSurface::whole(&cx).unwrap();
            let q = bundle.chern_number(&surf).unwrap();
            assert_eq!(q.value, -1, "level {level}");
            assert!(q.residual < 1e-9);
            let upper = link_phases(&eigenbundle(&h.with_band(1).unwrap()).unwrap()).unwrap();
            assert_eq!(upper.chern_number(&surf).unwrap().value, 1);
        }
    }

    #[test]
    fn tensor_square_has_chern_minus_two() {
        let cx = sphere(3);
        let h = spin_half_radial(cx.clone()).unwrap();
        let b = link_phases(&eigenbundle(&h).unwrap()).unwrap();
        let surf = OrientedSurface::whole(&cx).unwrap();
        let sq = b.tensor(&b).unwrap();
        assert_eq!(sq.chern_number(&surf).unwrap().value, -2);
        let sum = b.chern_number(&surf).unwrap().value * 2;
        assert_eq!(sq.chern_number(&surf).unwrap().value, sum);
    }

    #[test]
    fn rephasing_leaves_loop_observables_alone() {
        let cx = sphere(2);
        let h = spin_half_radial(cx.clone()).unwrap();
        let frame = eigenbundle(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phases: Vec<C64> = (0..cx.n_vertices())
            .map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.0 - 3.0))
            .collect();
        let frame2 = frame.rephased(&phases);
        let b1 = link_phases(&frame).unwrap();
        let b2 = link_phases(&frame2).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let h1 = b1.loop_holonomy(&eq).unwrap();
        let h2 = b2.loop_holonomy(&eq).unwrap();
        assert!((h1 - h2).norm() < 1e-12);
        // The rephased bundle is exactly a gauge transform of the original.
        let g = Cochain::from_phase_values(0, phases).unwrap();
        let b1g = b1.gauge_transform(&g).unwrap();
        for e in 0..cx.n_simplices(1) {
            let [v, w] = cx.edges()[e];
            assert!((b1g.link(v, w).unwrap() - b2.link(v, w).unwrap()).norm() < 1e-12);
        }
        let surf = OrientedSurface::whole(&cx).unwrap();
        assert_eq!(
            b1.chern_number(&surf).unwrap().value,
            b2.chern_number(&surf).unwrap().value
        );
    }

    #[test]
    fn isospectral_conjugation_preserves_berry_phase() {
        let cx = sphere(2);
        let h = spin_half_radial(cx.clone()).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let p0 = berry_phase(&h, &eq).unwrap();
        // A fixed unitary W: exp of i times a Hermitian matrix.
        let w = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.6, 0.0),
                C64::new(0.48, -0.64),
                C64::new(0.48, 0.64),
                C64::new(-0.6, 0.0),
            ],
        );
        assert!((&w * w.adjoint() - DMatrix::identity(2, 2))
            .iter()
            .all(|z| z.norm() < 1e-12));
        let rotated: Vec<DMatrix<C64>> = (0..cx.n_vertices())
            .map(|v| &w * h.matrix(v) * w.adjoint())
            .collect();
        let h2 = HamiltonianFamily::new(cx.clone(), rotated, 0, h.gap_tolerance()).unwrap();
        let p1 = berry_phase(&h2, &eq).unwrap();
        assert!(
            principal_angle(p0 - p1).abs() < 1e-12,
            "conjugation shifted the phase: {p0} vs {p1}"
        );
    }

    #[test]
    fn scaled_field_same_phases() {
        let cx = sphere(2);
        let coords = cx.coords().unwrap().to_vec();
        let f1: Vec<[f64; 3]> = coords.clone();
        let f3: Vec<[f64; 3]> = coords.iter().map(|p| [3.0 * p[0], 3.0 * p[1], 3.0 * p[2]]).collect();
        let h1 = spin_half(cx.clone(), &f1).unwrap();
        let h3 = spin_half(cx.clone(), &f3).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let p1 = berry_phase(&h1, &eq).unwrap();
        let p3 = berry_phase(&h3, &eq).unwrap();
        assert!(principal_angle(p1 - p3).abs() < 1e-12);
        let e1 = eigenbundle(&h1).unwrap();
        let e3 = eigenbundle(&h3).unwrap();
        for v in 0..cx.n_vertices() {
            assert!((3.0 * e1.value(v) - e3.value(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn equator_berry_phase_is_minus_pi() {
        let cx = sphere(3);
        let h = spin_half_radial(cx.clone()).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let p = berry_phase(&h, &eq).unwrap();
        // Holonomy −1: the phase is ±π; compare holonomies.
        let hol = C64::from_polar(1.0, p);
        assert!((hol - C64::new(-1.0, 0.0)).norm() < 1e-12, "phase {p}");
    }

    #[test]
    fn constant_family_has_zero_geometric_residue() {
        let cx = sphere(1);
        let field = vec![[0.3, -0.4, 1.2]; cx.n_vertices()];
        let h = spin_half(cx.clone(), &field).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let rec = adiabatic_evolve(&h, &eq, 7.0, 100 * (eq.len() - 1)).unwrap();
        assert!(
            rec.geometric_residue.abs() < 1e-9,
            "residue {}",
            rec.geometric_residue
        );
        assert!(rec.norm_drift < 1e-9);
    }

    #[test]
    fn adiabatic_limit_approaches_berry_phase() {
        let cx = sphere(1);
        let h = spin_half_radial(cx.clone()).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let target = berry_phase(&h, &eq).unwrap();
        let steps = 100 * (eq.len() - 1);
        let err_at = |t: f64, steps: usize| -> f64 {
            let rec = adiabatic_evolve(&h, &eq, t, steps).unwrap();
            principal_angle(rec.geometric_residue - target).abs()
        };
        let e200 = err_at(200.0, steps);
        let e400 = err_at(400.0, steps);
        assert!(e400 < e200, "no improvement: {e200} vs {e400}");
        let e2000 = err_at(2000.0, steps.max(4000));
        assert!(e2000 < 0.02, "adiabatic limit off by {e2000}");
    }

    #[test]
    fn insufficient_steps_rejected() {
        let cx = sphere(1);
        let h = spin_half_radial(cx.clone()).unwrap();
        let eq = equator_loop(&cx).unwrap();
        assert!(matches!(
            adiabatic_evolve(&h, &eq, 10.0, 7),
            Err(HoloError::InvalidInput(_))
        ));
    }
}
