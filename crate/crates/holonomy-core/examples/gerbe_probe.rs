use holonomy_core::complex::{build_mesh, MeshSpec, OrientedVolume, annulus_into_torus3, Cochain};
use holonomy_core::gerbe::{basic_gerbe, tetra_curvature, cylinder_check, DiscreteGerbe};
use std::sync::Arc;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() {
    for n in [2u32, 3] {
        let cx = Arc::new(build_mesh(MeshSpec::Torus3 { n, m: n, p: n }).unwrap());
        print!("torus3({n}) dims {:?}: ", cx.grid().unwrap().dims);
        for k in -2i64..=2 {
            let g = basic_gerbe(cx.clone(), k).unwrap();
            let curv = tetra_curvature(&g);
            let total: f64 = (0..cx.n_simplices(3))
                .map(|t| f64::from(cx.orientation(t)) * curv.real_values()[t])
                .sum();
            print!("k={k}: {:.4}pi  ", total / std::f64::consts::PI);
        }
        println!();
        let _ = OrientedVolume::whole(&cx).unwrap();
    }
    // cylinder ratio convention
    let t3 = Arc::new(build_mesh(MeshSpec::Torus3 { n: 3, m: 3, p: 3 }).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let angles: Vec<f64> = (0..t3.n_simplices(2)).map(|_| 3.0 * (rng.random::<f64>() * 2.0 - 1.0)).collect();
    let g = DiscreteGerbe::from_cochain(t3.clone(), &Cochain::from_angles(2, &angles)).unwrap();
    let cyl = Arc::new(build_mesh(MeshSpec::Cylinder { n: 2, m: 3 }).unwrap());
    let f = annulus_into_torus3(&cyl, &t3, 0, 0, 0, 1).unwrap();
    match cylinder_check(&g, &f) {
        Ok(chk) => {
            let alt = (chk.surface_phase - chk.hol1 * chk.hol0.conj()).norm();
            println!("cylinder: residual(h0 conj h1) = {:.3e}, residual(h1 conj h0) = {:.3e}", chk.residual, alt);
        }
        Err(e) => println!("cylinder_check error: {e}"),
    }
}
