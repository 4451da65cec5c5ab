//! Cochains: real- or phase-valued assignments to oriented simplices.
//!
//! Values are stored on the canonical (sorted) orientation. Reversing the
//! orientation negates a real value and conjugates a phase. Phase cochains
//! keep unit-modulus complex numbers; angles are only ever extracted
//! through the principal branch Arg ∈ (−π, π].

use num_complex::Complex;

use super::SimplicialComplex;
use crate::error::{HoloError, Result};

pub type C64 = Complex<f64>;

/// Tolerance for the unit-modulus invariant of phase cochains.
pub const PHASE_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CochainKind {
    Real,
    Phase,
}

/// A single integrated value, matching the kind of the cochain it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CochainValue {
    Real(f64),
    Phase(C64),
}

impl CochainValue {
    pub fn as_real(&self) -> f64 {
        match self {
            CochainValue::Real(x) => *x,
            CochainValue::Phase(_) => panic!("expected a real value"),
        }
    }

    pub fn as_phase(&self) -> C64 {
        match self {
            CochainValue::Phase(z) => *z,
            CochainValue::Real(_) => panic!("expected a phase value"),
        }
    }
}

#[derive(Debug, Clone)]
enum Data {
    Real(Vec<f64>),
    Phase(Vec<C64>),
}

/// A degree-k cochain over some complex (the complex is passed to the
/// operations, not stored here).
#[derive(Debug, Clone)]
pub struct Cochain {
    degree: usize,
    data: Data,
}

impl Cochain {
    pub fn zeros_real(cx: &SimplicialComplex, degree: usize) -> Self {
        Cochain {
            degree,
            data: Data::Real(vec![0.0; cx.n_simplices(degree)]),
        }
    }

    pub fn ones_phase(cx: &SimplicialComplex, degree: usize) -> Self {
        Cochain {
            degree,
            data: Data::Phase(vec![C64::new(1.0, 0.0); cx.n_simplices(degree)]),
        }
    }

    pub fn from_real_values(degree: usize, values: Vec<f64>) -> Self {
        Cochain {
            degree,
            data: Data::Real(values),
        }
    }

    /// Builds a phase cochain, renormalizing each value onto the unit circle.
    /// Inputs further than `PHASE_MODULUS_TOL` from the circle are rejected.
    pub fn from_phase_values(degree: usize, values: Vec<C64>) -> Result<Self> {
        let mut vs = values;
        for z in &mut vs {
            let n = z.norm();
            if (n - 1.0).abs() > PHASE_MODULUS_TOL {
                return Err(HoloError::InvalidInput(format!(
                    "phase value with modulus {n} is not on the unit circle"
                )));
            }
            *z /= n;
        }
        Ok(Cochain {
            degree,
            data: Data::Phase(vs),
        })
    }

    /// Phase cochain from per-simplex angles (radians on the canonical
    /// orientation).
    pub fn from_angles(degree: usize, angles: &[f64]) -> Self {
        Cochain {
            degree,
            data: Data::Phase(angles.iter().map(|&a| C64::from_polar(1.0, a)).collect()),
        }
    }

    /// Evaluates a closure on every canonical simplex of the degree.
    pub fn from_real_fn(
        cx: &SimplicialComplex,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Self {
        let values = (0..cx.n_simplices(degree))
            .map(|i| f(&cx.simplex_vertices(degree, i)))
            .collect();
        Cochain::from_real_values(degree, values)
    }

    pub fn from_phase_fn(
        cx: &SimplicialComplex,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> C64,
    ) -> Result<Self> {
        let values = (0..cx.n_simplices(degree))
            .map(|i| f(&cx.simplex_vertices(degree, i)))
            .collect();
        Cochain::from_phase_values(degree, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> CochainKind {
        match self.data {
            Data::Real(_) => CochainKind::Real,
            Data::Phase(_) => CochainKind::Phase,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            Data::Real(v) => v.len(),
            Data::Phase(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn real_values(&self) -> &[f64] {
        match &self.data {
            Data::Real(v) => v,
            Data::Phase(_) => panic!("expected a real cochain"),
        }
    }

    pub fn phase_values(&self) -> &[C64] {
        match &self.data {
            Data::Phase(v) => v,
            Data::Real(_) => panic!("expected a phase cochain"),
        }
    }

    /// Value on the idx-th simplex taken with orientation `sign`.
    pub fn value(&self, idx: usize, sign: i8) -> CochainValue {
        match &self.data {
            Data::Real(v) => CochainValue::Real(f64::from(sign) * v[idx]),
            Data::Phase(v) => CochainValue::Phase(if sign >= 0 { v[idx] } else { v[idx].conj() }),
        }
    }

    /// Value on an oriented vertex tuple.
    pub fn value_on(&self, cx: &SimplicialComplex, verts: &[usize]) -> Result<CochainValue> {
        let (idx, sign) = cx
            .resolve(verts)
            .ok_or_else(|| HoloError::InvalidInput(format!("simplex {verts:?} not in complex")))?;
        Ok(self.value(idx, sign))
    }

    /// Pointwise product of two phase cochains of the same degree.
    pub fn phase_mul(&self, other: &Cochain) -> Cochain {
        let a = self.phase_values();
        let b = other.phase_values();
        assert_eq!(self.degree, other.degree);
        assert_eq!(a.len(), b.len());
        Cochain {
            degree: self.degree,
            data: Data::Phase(a.iter().zip(b).map(|(x, y)| x * y).collect()),
        }
    }

    /// Pointwise conjugate of a phase cochain.
    pub fn phase_conj(&self) -> Cochain {
        Cochain {
            degree: self.degree,
            data: Data::Phase(self.phase_values().iter().map(|z| z.conj()).collect()),
        }
    }

    /// Largest distance of any value from the unit circle.
    pub fn max_modulus_deviation(&self) -> f64 {
        self.phase_values()
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest |Arg| over the values of a phase cochain; a convenient
    /// distance-from-one measure.
    pub fn max_abs_angle(&self) -> f64 {
        self.phase_values()
            .iter()
            .map(|z| z.arg().abs())
            .fold(0.0, f64::max)
    }

    /// Sum of principal-branch angles of a phase cochain.
    pub fn angle_sum(&self) -> f64 {
        self.phase_values().iter().map(|z| z.arg()).sum()
    }
}

/// A formal signed combination of k-simplices (coefficients ±1 per entry;
/// repetitions encode larger coefficients).
#[derive(Debug, Clone)]
pub struct Chain {
    pub degree: usize,
    pub terms: Vec<(usize, i8)>,
}

impl Chain {
    pub fn empty(degree: usize) -> Self {
        Chain {
            degree,
            terms: Vec::new(),
        }
    }

    /// Builds a chain from oriented vertex tuples.
    pub fn from_oriented(cx: &SimplicialComplex, simplices: &[Vec<usize>]) -> Result<Self> {
        if simplices.is_empty() {
            return Ok(Chain::empty(0));
        }
        let degree = simplices[0].len() - 1;
        let mut terms = Vec::with_capacity(simplices.len());
        for s in simplices {
            if s.len() != degree + 1 {
                return Err(HoloError::InvalidInput("mixed-degree chain".into()));
            }
            let (idx, sign) = cx.resolve(s).ok_or_else(|| {
                HoloError::InvalidInput(format!("simplex {s:?} not in complex"))
            })?;
            terms.push((idx, sign));
        }
        Ok(Chain { degree, terms })
    }

    /// The 1-chain of a vertex path v0 → v1 → …; consecutive vertices must
    /// span edges.
    pub fn edge_path(cx: &SimplicialComplex, path: &[usize]) -> Result<Self> {
        let mut terms = Vec::new();
        for w in path.windows(2) {
            let (idx, sign) = cx.resolve(&[w[0], w[1]]).ok_or_else(|| {
                HoloError::InvalidLoop(format!("({},{}) is not an edge", w[0], w[1]))
            })?;
            terms.push((idx, sign));
        }
        Ok(Chain { degree: 1, terms })
    }

    /// Boundary chain with the alternating-sign convention matching δ.
    pub fn boundary(&self, cx: &SimplicialComplex) -> Chain {
        let mut terms = Vec::new();
        for &(idx, sign) in &self.terms {
            for (face, fsign) in cx.faces(self.degree, idx) {
                terms.push((face, sign * fsign));
            }
        }
        // Cancel opposite pairs so tests can compare chains structurally.
        let mut counts: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
        for (idx, s) in terms {
            *counts.entry(idx).or_insert(0) += i64::from(s);
        }
        let mut out = Vec::new();
        for (idx, c) in counts {
            let s: i8 = if c > 0 { 1 } else { -1 };
            for _ in 0..c.abs() {
                out.push((idx, s));
            }
        }
        Chain {
            degree: self.degree.saturating_sub(1),
            terms: out,
        }
    }
}

/// Signed sum (real) or signed product (phase) of a cochain over a chain.
pub fn integrate(c: &Cochain, chain: &Chain) -> Result<CochainValue> {
    if !chain.terms.is_empty() && chain.degree != c.degree() {
        return Err(HoloError::InvalidInput(format!(
            "cannot integrate a degree-{} cochain over a degree-{} chain",
            c.degree(),
            chain.degree
        )));
    }
    match c.kind() {
        CochainKind::Real => {
            let mut acc = 0.0;
            for &(idx, sign) in &chain.terms {
                acc += c.value(idx, sign).as_real();
            }
            Ok(CochainValue::Real(acc))
        }
        CochainKind::Phase => {
            let mut acc = C64::new(1.0, 0.0);
            for &(idx, sign) in &chain.terms {
                acc *= c.value(idx, sign).as_phase();
            }
            Ok(CochainValue::Phase(acc))
        }
    }
}
