//! Potentials, momenta and physical parameters.
//!
//! Units have ħ = 1 and a user-chosen mass. Potentials are piecewise constant
//! on a finite support and vanish identically outside it.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        Ok(Self { mass })
    }

    pub fn two_m(&self) -> f64 {
        2.0 * self.mass
    }

    /// Free-particle energy k²/2m.
    pub fn energy_of(&self, k: f64) -> f64 {
        k * k / self.two_m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub width: f64,
    pub potential: Complex64,
}

impl Segment {
    pub fn new(width: f64, potential: Complex64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "segment width must be positive and finite, got {width}"
            )));
        }
        if !(potential.re.is_finite() && potential.im.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "segment potential must be finite, got {potential}"
            )));
        }
        Ok(Self { width, potential })
    }
}

/// Ordered constant-potential segments starting at `left_edge`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePotential {
    left_edge: f64,
    segments: Vec<Segment>,
}

impl PiecewisePotential {
    pub fn new(left_edge: f64, segments: Vec<Segment>) -> Result<Self> {
        if !left_edge.is_finite() {
            return Err(Error::InvalidParameter("left_edge must be finite".into()));
        }
        for s in &segments {
            Segment::new(s.width, s.potential)?;
        }
        Ok(Self { left_edge, segments })
    }

    /// No segments at all: V ≡ 0 everywhere.
    pub fn empty(left_edge: f64) -> Self {
        Self {
            left_edge,
            segments: Vec::new(),
        }
    }

    /// A single segment `[left_edge, left_edge + width]` of constant potential.
    pub fn single(left_edge: f64, width: f64, potential: Complex64) -> Result<Self> {
        Self::new(left_edge, vec![Segment::new(width, potential)?])
    }

    pub fn left_edge(&self) -> f64 {
        self.left_edge
    }

    pub fn right_edge(&self) -> f64 {
        self.left_edge + self.width()
    }

    pub fn width(&self) -> f64 {
        self.segments.iter().map(|s| s.width).sum()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Segment boundaries, `segments().len() + 1` of them.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut xs = Vec::with_capacity(self.segments.len() + 1);
        let mut x = self.left_edge;
        xs.push(x);
        for s in &self.segments {
            x += s.width;
            xs.push(x);
        }
        xs
    }

    /// V(x). Points on an internal boundary take the segment to their right;
    /// the right edge itself belongs to the last segment.
    pub fn value_at(&self, x: f64) -> Complex64 {
        if self.segments.is_empty() || x < self.left_edge {
            return Complex64::new(0.0, 0.0);
        }
        let mut start = self.left_edge;
        for s in &self.segments {
            let end = start + s.width;
            if x < end {
                return s.potential;
            }
            start = end;
        }
        if x == start {
            return self.segments[self.segments.len() - 1].potential;
        }
        Complex64::new(0.0, 0.0)
    }

    /// Mean of V over `[lo, hi]`, integrating across segment boundaries.
    pub fn cell_average(&self, lo: f64, hi: f64) -> Complex64 {
        if hi <= lo {
            return self.value_at(lo);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut start = self.left_edge;
        for s in &self.segments {
            let end = start + s.width;
            let overlap = hi.min(end) - lo.max(start);
            if overlap > 0.0 {
                acc += s.potential * overlap;
            }
            start = end;
        }
        acc / (hi - lo)
    }

    /// Same support with every segment potential conjugated, V → V*.
    pub fn conjugate(&self) -> Self {
        Self {
            left_edge: self.left_edge,
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    width: s.width,
                    potential: s.potential.conj(),
                })
                .collect(),
        }
    }

    /// Place `other` immediately to the right of `self`.
    pub fn concat(&self, other: &PiecewisePotential) -> Self {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Self {
            left_edge: self.left_edge,
            segments,
        }
    }

    /// Same segments, moved so the support starts at `left_edge`.
    pub fn shifted_to(&self, left_edge: f64) -> Self {
        Self {
            left_edge,
            segments: self.segments.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.segments.iter().all(|s| s.potential.im == 0.0)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: PotentialDoc = serde_json::from_str(s)?;
        doc.try_into()
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PotentialDoc::from(self))?)
    }
}

/// On-disk form: `{"left_edge": x, "segments": [{"width": w, "re": v, "im": v}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialDoc {
    pub left_edge: f64,
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentDoc {
    pub width: f64,
    pub re: f64,
    pub im: f64,
}

impl From<&PiecewisePotential> for PotentialDoc {
    fn from(p: &PiecewisePotential) -> Self {
        Self {
            left_edge: p.left_edge,
            segments: p
                .segments
                .iter()
                .map(|s| SegmentDoc {
                    width: s.width,
                    re: s.potential.re,
                    im: s.potential.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PotentialDoc> for PiecewisePotential {
    type Error = Error;

    fn try_from(doc: PotentialDoc) -> Result<Self> {
        let segments = doc
            .segments
            .iter()
            .map(|s| Segment::new(s.width, Complex64::new(s.re, s.im)))
            .collect::<Result<Vec<_>>>()?;
        PiecewisePotential::new(doc.left_edge, segments)
    }
}

/// A wavenumber tied to the (E, V) pair it solves: value² = 2m(E − V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMomentum {
    pub value: Complex64,
}

impl ComplexMomentum {
    pub fn negated(self) -> Self {
        Self { value: -self.value }
    }
}

/// Principal square root: Re ≥ 0, and Im ≥ 0 when Re = 0.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

pub fn momentum_in_region(energy: Complex64, potential: Complex64, params: &PhysicalParams) -> ComplexMomentum {
    ComplexMomentum {
        value: principal_sqrt(params.two_m() * (energy - potential)),
    }
}

/// The two-segment cell `[U0 + iV0][U0 − iV0]`, each of width `a`, centred on
/// the origin so that V(−x) = V*(x).
pub fn build_pt_unit_cell(v0: f64, a: f64, u0: f64) -> Result<PiecewisePotential> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    if !(v0.is_finite() && v0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("V0 must be >= 0, got {v0}")));
    }
    PiecewisePotential::new(
        -a,
        vec![
            Segment::new(a, Complex64::new(u0, v0))?,
            Segment::new(a, Complex64::new(u0, -v0))?,
        ],
    )
}

/// Reversing the segment order and conjugating must reproduce the potential.
pub fn is_pt_symmetric(pot: &PiecewisePotential, tol: f64) -> bool {
    let segs = pot.segments();
    segs.iter().zip(segs.iter().rev()).all(|(s, mirror)| {
        (s.width - mirror.width).abs() <= tol && (s.potential - mirror.potential.conj()).norm() <= tol
    })
}
