//! The Čech/simplicial coboundary operator δ and its multiplicative solver.
//!
//! For a real k-cochain, (δc)(σ) = Σᵢ (−1)ⁱ c(σ \ vᵢ) over the faces of the
//! sorted simplex σ; for a phase cochain the alternating sum becomes a
//! product with exponents ±1. δ∘δ vanishes identically.
//!
//! `solve_coboundary` inverts δ on phase cochains where possible:
//! vertex phases from edge targets via a spanning-forest gauge, edge phases
//! from triangle targets via integer-exponent elimination over the
//! triangle/edge incidence system. A nonvanishing obstruction is reported
//! as a residual cocycle, not as a failure — it is the nontriviality
//! witness of the bundle or gerbe the target came from.

use super::cochain::{C64, Cochain, CochainKind};
use super::{SimplicialComplex, Subcomplex};
use crate::error::{HoloError, Result};

/// Per-simplex tolerance on δu = target for a successful solve.
pub const SOLVE_TOL: f64 = 1e-12;

/// Applies δ to a cochain of degree ≤ 2.
pub fn coboundary(cx: &SimplicialComplex, c: &Cochain) -> Result<Cochain> {
    let k = c.degree();
    if k > 2 {
        return Err(HoloError::InvalidInput(format!(
            "coboundary only defined for degree ≤ 2, got {k}"
        )));
    }
    if c.len() != cx.n_simplices(k) {
        return Err(HoloError::InvalidInput(
            "cochain length does not match complex".into(),
        ));
    }
    let n_out = cx.n_simplices(k + 1);
    match c.kind() {
        CochainKind::Real => {
            let vals = c.real_values();
            let mut out = vec![0.0; n_out];
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (face, sign) in cx.faces(k + 1, i) {
                    acc += f64::from(sign) * vals[face];
                }
                *o = acc;
            }
            Ok(Cochain::from_real_values(k + 1, out))
        }
        CochainKind::Phase => {
            let vals = c.phase_values();
            let mut out = vec![C64::new(1.0, 0.0); n_out];
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = C64::new(1.0, 0.0);
                for (face, sign) in cx.faces(k + 1, i) {
                    acc *= if sign >= 0 {
                        vals[face]
                    } else {
                        vals[face].conj()
                    };
                }
                *o = acc;
            }
            // Products of unit phases; renormalize rounding residue away.
            Cochain::from_phase_values(k + 1, out)
        }
    }
}

/// Residual cocycle left when δu = target has no solution on the domain.
///
/// The attempt is gauge-polished so that the residual is spread with small
/// per-simplex angles; principal-branch sums of it are then meaningful and
/// recover 2π × (Chern or Dixmier–Douady number) on the standard witnesses.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    /// target · conj(δu) for the polished attempt; a phase cochain of the
    /// target's degree, ≡ 1 exactly where the solve succeeded.
    pub residual: Cochain,
    /// Raw sum of principal angles of the residual over the domain.
    pub angle_sum: f64,
    /// Largest per-simplex deviation |Arg(residual)|.
    pub max_angle: f64,
}

/// Solves δu = target for a phase cochain `target` of degree 1 or 2 over
/// the whole complex.
pub fn solve_coboundary(
    cx: &SimplicialComplex,
    target: &Cochain,
) -> std::result::Result<Cochain, Box<ObstructionReport>> {
    solve_coboundary_on(cx, target, None)
}

/// Same as [`solve_coboundary`] but restricted to a subcomplex: unknowns
/// and equations outside it are ignored, and the returned cochain is 1 off
/// the subcomplex.
pub fn solve_coboundary_on(
    cx: &SimplicialComplex,
    target: &Cochain,
    sub: Option<&Subcomplex>,
) -> std::result::Result<Cochain, Box<ObstructionReport>> {
    assert_eq!(
        target.kind(),
        CochainKind::Phase,
        "solve_coboundary expects a phase cochain"
    );
    match target.degree() {
        1 => solve_degree1(cx, target, sub),
        2 => solve_degree2(cx, target, sub),
        k => panic!("solve_coboundary defined for degrees 1 and 2, got {k}"),
    }
}

/// Spanning-forest gauge: u = 1 at the lowest vertex id of each component,
/// transported along tree edges discovered in ascending neighbour order.
fn solve_degree1(
    cx: &SimplicialComplex,
    target: &Cochain,
    sub: Option<&Subcomplex>,
) -> std::result::Result<Cochain, Box<ObstructionReport>> {
    let vals = target.phase_values();
    let in_sub_edge: Vec<bool> = match sub {
        None => vec![true; cx.n_simplices(1)],
        Some(s) => {
            let mut m = vec![false; cx.n_simplices(1)];
            for &e in &s.edges {
                m[e] = true;
            }
            m
        }
    };
    let mut u = vec![C64::new(1.0, 0.0); cx.n_vertices()];
    let mut seen = vec![false; cx.n_vertices()];
    for root in 0..cx.n_vertices() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in cx.vertex_neighbors(v) {
                if seen[w] {
                    continue;
                }
                let (ei, sign) = cx.resolve(&[v, w]).expect("neighbour edge");
                if !in_sub_edge[ei] {
                    continue;
                }
                // δu on (v→w) must equal target: u(w) = u(v) · target(v→w).
                let t = if sign >= 0 { vals[ei] } else { vals[ei].conj() };
                u[w] = u[v] * t;
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let u = Cochain::from_phase_values(0, u).expect("unit by construction");
    let check: Vec<usize> = match sub {
        None => (0..cx.n_simplices(1)).collect(),
        Some(s) => s.edges.clone(),
    };
    finish(cx, target, u, &check)
}

/// Integer-exponent elimination for δ¹u = target.
///
/// Each triangle contributes Π u_e^{±1} = W_t. Rows are combined by
/// row_j ← row_j − q·row_p, exact on both the integer exponents and the
/// unit-complex right-hand sides, so 2π wraps in the target are handled
/// natively. Pivots stay ±1 on the incidence systems generated here; the
/// gcd fallback takes principal roots, sound because U(1) is divisible.
fn solve_degree2(
    cx: &SimplicialComplex,
    target: &Cochain,
    sub: Option<&Subcomplex>,
) -> std::result::Result<Cochain, Box<ObstructionReport>> {
    let vals = target.phase_values();
    let (edge_list, tri_list): (Vec<usize>, Vec<usize>) = match sub {
        None => (
            (0..cx.n_simplices(1)).collect(),
            (0..cx.n_simplices(2)).collect(),
        ),
        Some(s) => (s.edges.clone(), s.triangles.clone()),
    };
    let edge_col: std::collections::HashMap<usize, usize> = edge_list
        .iter()
        .enumerate()
        .map(|(c, &e)| (e, c))
        .collect();
    let n_cols = edge_list.len();
    let n_rows = tri_list.len();

    let mut coeff: Vec<Vec<i64>> = Vec::with_capacity(n_rows);
    let mut rhs: Vec<C64> = Vec::with_capacity(n_rows);
    for &t in &tri_list {
        let mut row = vec![0i64; n_cols];
        for (e, s) in cx.faces(2, t) {
            row[edge_col[&e]] += i64::from(s);
        }
        coeff.push(row);
        rhs.push(vals[t]);
    }

    // row_r ← row_r − q · row_p
    let row_op = |coeff: &mut Vec<Vec<i64>>, rhs: &mut Vec<C64>, r: usize, p: usize, q: i64| {
        if q == 0 {
            return;
        }
        let prow = coeff[p].clone();
        let prhs = rhs[p];
        for (a, b) in coeff[r].iter_mut().zip(&prow) {
            *a -= q * *b;
        }
        rhs[r] *= phase_pow(prhs, -q);
        let n = rhs[r].norm();
        rhs[r] /= n;
    };

    // Forward elimination: establish pivots column by column, clearing only
    // the rows below; back-substitution accounts for what remains above.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, row)
    let mut next_row = 0usize;
    for col in 0..n_cols {
        if next_row >= n_rows {
            break;
        }
        // Euclidean reduction within the column among rows ≥ next_row.
        loop {
            let mut best: Option<usize> = None;
            let mut second: Option<usize> = None;
            for r in next_row..n_rows {
                if coeff[r][col] == 0 {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if coeff[r][col].abs() < coeff[b][col].abs() {
                            second = Some(b);
                            best = Some(r);
                        } else if second.is_none() {
                            second = Some(r);
                        }
                    }
                }
            }
            let Some(p) = best else { break };
            match second {
                None => {
                    coeff.swap(p, next_row);
                    rhs.swap(p, next_row);
                    pivots.push((col, next_row));
                    next_row += 1;
                    break;
                }
                Some(s) => {
                    let q = coeff[s][col] / coeff[p][col];
                    row_op(&mut coeff, &mut rhs, s, p, q);
                    if coeff[p][col].abs() == 1 {
                        // Unit pivot: clear the whole column below.
                        coeff.swap(p, next_row);
                        rhs.swap(p, next_row);
                        let a_p = coeff[next_row][col];
                        for r in next_row + 1..n_rows {
                            let q = coeff[r][col] / a_p;
                            row_op(&mut coeff, &mut rhs, r, next_row, q);
                        }
                        pivots.push((col, next_row));
                        next_row += 1;
                        break;
                    }
                }
            }
        }
    }

    // Back-substitution in reverse pivot order; free columns stay at 1.
    let one = C64::new(1.0, 0.0);
    let mut u_cols = vec![one; n_cols];
    let mut assigned = vec![false; n_cols];
    for &(col, row) in pivots.iter().rev() {
        let d = coeff[row][col];
        let mut rest = one;
        for c in 0..n_cols {
            if c != col && coeff[row][c] != 0 && assigned[c] {
                rest *= phase_pow(u_cols[c], coeff[row][c]);
            }
        }
        let rhs_eff = rhs[row] * rest.conj();
        let rhs_eff = rhs_eff / rhs_eff.norm();
        u_cols[col] = if d == 1 {
            rhs_eff
        } else if d == -1 {
            rhs_eff.conj()
        } else {
            C64::from_polar(1.0, rhs_eff.arg() / d as f64)
        };
        assigned[col] = true;
    }

    let mut u_full = vec![one; cx.n_simplices(1)];
    for (c, &e) in edge_list.iter().enumerate() {
        u_full[e] = u_cols[c];
    }
    let u = Cochain::from_phase_values(1, u_full).expect("unit by construction");
    finish(cx, target, u, &tri_list)
}

/// Success check on the domain, with an angle-space least-squares polish of
/// the gauge before reporting an obstruction.
fn finish(
    cx: &SimplicialComplex,
    target: &Cochain,
    u: Cochain,
    check_ids: &[usize],
) -> std::result::Result<Cochain, Box<ObstructionReport>> {
    let (residual, angle_sum, max_angle) = residual_on(cx, target, &u, check_ids);
    if max_angle <= SOLVE_TOL {
        return Ok(u);
    }
    let polished = least_squares_gauge(cx, target, check_ids);
    let (residual, angle_sum, max_angle) = match polished {
        Some(p) => residual_on(cx, target, &p, check_ids),
        None => (residual, angle_sum, max_angle),
    };
    Err(Box::new(ObstructionReport {
        residual,
        angle_sum,
        max_angle,
    }))
}

fn residual_on(
    cx: &SimplicialComplex,
    target: &Cochain,
    u: &Cochain,
    check_ids: &[usize],
) -> (Cochain, f64, f64) {
    let du = coboundary(cx, u).expect("degree checked");
    let tv = target.phase_values();
    let dv = du.phase_values();
    let mut residual_vals = vec![C64::new(1.0, 0.0); tv.len()];
    let mut angle_sum = 0.0;
    let mut max_angle: f64 = 0.0;
    for &i in check_ids {
        let r = tv[i] * dv[i].conj();
        residual_vals[i] = r / r.norm();
        let a = residual_vals[i].arg();
        angle_sum += a;
        max_angle = max_angle.max(a.abs());
    }
    (
        Cochain::from_phase_values(target.degree(), residual_vals).expect("unit by construction"),
        angle_sum,
        max_angle,
    )
}

/// Least-squares solve of δθ ≈ Arg(target) in angle space. This spreads
/// the unsolvable part of the target evenly (its harmonic representative),
/// so the reported residual keeps small per-simplex angles.
fn least_squares_gauge(
    cx: &SimplicialComplex,
    target: &Cochain,
    check_ids: &[usize],
) -> Option<Cochain> {
    let degree = target.degree();
    let b: Vec<f64> = target.phase_values().iter().map(|z| z.arg()).collect();
    let mask = {
        let mut m = vec![false; cx.n_simplices(degree)];
        for &i in check_ids {
            m[i] = true;
        }
        m
    };
    let theta = least_squares_delta(cx, degree, &b, Some(&mask))?;
    Some(Cochain::from_angles(degree - 1, &theta))
}

/// Minimizes ‖δx − b‖₂ over real (degree−1)-cochains x, optionally
/// restricted to the rows where `mask` is true, via conjugate gradients on
/// the normal equations. Consistent systems are solved to rounding.
pub(crate) fn least_squares_delta(
    cx: &SimplicialComplex,
    degree: usize,
    b: &[f64],
    mask: Option<&[bool]>,
) -> Option<Vec<f64>> {
    let n_unknown = cx.n_simplices(degree - 1);
    let n_rows = cx.n_simplices(degree);
    let row_on = |i: usize| mask.map_or(true, |m| m[i]);

    // y = δx restricted to the domain rows.
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; n_rows];
        for (i, yi) in y.iter_mut().enumerate() {
            if !row_on(i) {
                continue;
            }
            for (face, sign) in cx.faces(degree, i) {
                *yi += f64::from(sign) * x[face];
            }
        }
        y
    };
    // x = δᵀy
    let apply_t = |y: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n_unknown];
        for i in 0..n_rows {
            if !row_on(i) {
                continue;
            }
            for (face, sign) in cx.faces(degree, i) {
                x[face] += f64::from(sign) * y[i];
            }
        }
        x
    };

    let mut theta = vec![0.0; n_unknown];
    let mut r = apply_t(b);
    let mut p = r.clone();
    let mut rs: f64 = r.iter().map(|v| v * v).sum();
    let rs0 = rs;
    if rs0 == 0.0 {
        return None;
    }
    for _ in 0..8 * n_unknown.max(64) {
        let ap_rows = apply(&p);
        let atap = apply_t(&ap_rows);
        let pap: f64 = p.iter().zip(&atap).map(|(a, b)| a * b).sum();
        if pap.abs() < 1e-300 {
            break;
        }
        let alpha = rs / pap;
        for (t, pv) in theta.iter_mut().zip(&p) {
            *t += alpha * pv;
        }
        for (rv, av) in r.iter_mut().zip(&atap) {
            *rv -= alpha * av;
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        if rs_new <= 1e-30 * rs0 {
            break;
        }
        let beta = rs_new / rs;
        for (pv, rv) in p.iter_mut().zip(&r) {
            *pv = rv + beta * *pv;
        }
        rs = rs_new;
    }
    Some(theta)
}

fn phase_pow(z: C64, n: i64) -> C64 {
    match n {
        0 => C64::new(1.0, 0.0),
        1 => z,
        -1 => z.conj(),
        _ => C64::from_polar(1.0, n as f64 * z.arg()),
    }
}
