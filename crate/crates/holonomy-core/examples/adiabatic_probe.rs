use holonomy_core::berry::{adiabatic_evolve, berry_phase, principal_angle, spin_half_radial};
use holonomy_core::complex::{build_mesh, equator_loop, MeshSpec};
use std::sync::Arc;

fn main() {
    for level in [1u32, 2, 3] {
        let cx = Arc::new(build_mesh(MeshSpec::Sphere2 { level }).unwrap());
        let h = spin_half_radial(cx.clone()).unwrap();
        let eq = equator_loop(&cx).unwrap();
        let target = berry_phase(&h, &eq).unwrap();
        let base_steps = 100 * (eq.len() - 1);
        print!("L{level} (K={}): ", eq.len() - 1);
        let mut prev: Option<f64> = None;
        for t in [100.0f64, 200.0, 400.0, 800.0, 2000.0] {
            let steps = base_steps.max((t * 8.0) as usize);
            let rec = adiabatic_evolve(&h, &eq, t, steps).unwrap();
            let err = principal_angle(rec.geometric_residue - target).abs();
            match prev {
                Some(p) => print!("T={t}: {err:.5} (x{:.2})  ", p / err),
                None => print!("T={t}: {err:.5}  "),
            }
            prev = Some(err);
        }
        println!();
    }
}
