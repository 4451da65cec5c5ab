use holonomy_core::complex::{build_mesh, MeshSpec, latitude_loop, equator_loop};

// Solid angle swept by the geodesic polygon through unit vectors `pts`
// (closed: first == last), as the line integral of A = (1 - cos th) dphi
// along each geodesic segment, Simpson quadrature.
fn polygon_solid_angle(pts: &[[f64; 3]]) -> f64 {
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += segment_a_integral(w[0], w[1]);
    }
    total
}

fn segment_a_integral(p: [f64; 3], q: [f64; 3]) -> f64 {
    let dot = (p[0]*q[0] + p[1]*q[1] + p[2]*q[2]).clamp(-1.0, 1.0);
    let alpha = dot.acos();
    if alpha < 1e-15 { return 0.0; }
    let n = 64usize; // Simpson panels
    let f = |t: f64| -> f64 {
        let (sa, sb) = (((1.0 - t) * alpha).sin(), (t * alpha).sin());
        let s = alpha.sin();
        let x = (p[0]*sa + q[0]*sb) / s;
        let y = (p[1]*sa + q[1]*sb) / s;
        let z = (p[2]*sa + q[2]*sb) / s;
        // (1 - z) * dphi/dt, dphi/dt = (x y' - y x')/(x^2+y^2)
        let ca = ((1.0 - t) * alpha).cos();
        let cb = (t * alpha).cos();
        let xp = (-p[0]*ca*alpha + q[0]*cb*alpha) / s;
        let yp = (-p[1]*ca*alpha + q[1]*cb*alpha) / s;
        let r2 = x*x + y*y;
        if r2 < 1e-30 { return 0.0; }
        (1.0 - z) * (x*yp - y*xp) / r2
    };
    let h = 1.0 / n as f64;
    let mut acc = f(0.0) + f(1.0);
    for i in 1..n {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn main() {
    for level in [4u32, 5, 6] {
        let cx = build_mesh(MeshSpec::Sphere2 { level }).unwrap();
        let coords = cx.coords().unwrap();
        let lat = latitude_loop(&cx, std::f64::consts::FRAC_PI_3).unwrap();
        let pts: Vec<[f64;3]> = lat.iter().map(|&v| coords[v]).collect();
        let omega = polygon_solid_angle(&pts);
        let target = std::f64::consts::PI;
        println!("L{level}: walk {} verts, Omega = {omega:.6}, target pi = {target:.6}, err = {:+.5}",
                 lat.len(), omega - target);
        let eq = equator_loop(&cx).unwrap();
        let epts: Vec<[f64;3]> = eq.iter().map(|&v| coords[v]).collect();
        let eo = polygon_solid_angle(&epts);
        println!("   equator Omega = {eo:.9} (expect 2pi = {:.9})", 2.0*target);
    }
}
