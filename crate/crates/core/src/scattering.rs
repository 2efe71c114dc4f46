//! Scattering by piecewise-constant complex potentials.
//!
//! Amplitudes are defined against global plane waves e^{±ikx}: for left
//! incidence the state is `e^{ikx} + r e^{-ikx}` left of the support and
//! `t e^{ikx}` right of it, so V ≡ 0 gives `t = 1, r = 0` wherever the
//! support sits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    build_pt_unit_cell, momentum_in_region, principal_sqrt, ComplexMomentum, PhysicalParams, PiecewisePotential,
};
use crate::numerics::{bisect, bisect_predicate_log, golden_max, linspace};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Threshold below which `|kL + kR|` counts as a degenerate interface.
pub const DEGENERATE_INTERFACE_TOL: f64 = 1e-14;

/// Relative energy shift applied at degenerate energies.
pub const DEGENERATE_NUDGE: f64 = 1e-9;

/// |T| must exceed 1 by more than this to count as amplification. Sits two
/// orders above the round-off floor of |T| from the transfer matrix.
pub const TRANSMISSION_EXCESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceAmplitudes {
    pub t: Complex64,
    pub r: Complex64,
}

/// Fresnel amplitudes for a wave arriving from the `kL` side of a step.
pub fn interface_amplitudes(kl: ComplexMomentum, kr: ComplexMomentum) -> Result<InterfaceAmplitudes> {
    let sum = kl.value + kr.value;
    if sum.norm() < DEGENERATE_INTERFACE_TOL {
        return Err(Error::DegenerateInterface {
            k_left: kl.value,
            k_right: kr.value,
            magnitude: sum.norm(),
        });
    }
    Ok(InterfaceAmplitudes {
        t: 2.0 * kl.value / sum,
        r: (kl.value - kr.value) / sum,
    })
}

/// Maps exterior plane-wave coefficients `(A, B)` of `A e^{ikx} + B e^{-ikx}`
/// on the left of a potential to those on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m11: one,
            m12: zero,
            m21: zero,
            m22: one,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn apply(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        (self.m11 * a + self.m12 * b, self.m21 * a + self.m22 * b)
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// 2×2 propagator of `(ψ, ψ')` across a constant region of momentum `k`.
/// Regular at k = 0.
fn region_propagator(k: Complex64, width: f64) -> [[Complex64; 2]; 2] {
    let kw = k * width;
    let s = sinc(kw) * width;
    let c = kw.cos();
    [[c, s], [-k * k * s, c]]
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Product of region propagators acting on `(ψ, ψ')` from the left edge of
/// the support to its right edge. Its half-trace is the Bloch
/// `cos(Kd)` for a periodic repetition of the potential.
pub fn wave_propagator(pot: &PiecewisePotential, energy: Complex64, params: &PhysicalParams) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut p = [[one, zero], [zero, one]];
    for seg in pot.segments() {
        let k = momentum_in_region(energy, seg.potential, params).value;
        p = mat_mul(&region_propagator(k, seg.width), &p);
    }
    p
}

fn exterior_momentum(energy: Complex64, params: &PhysicalParams) -> Result<Complex64> {
    let k = momentum_in_region(energy, Complex64::new(0.0, 0.0), params).value;
    if k.norm() < 1e-300 {
        return Err(Error::ZeroMomentum { magnitude: k.norm() });
    }
    Ok(k)
}

/// Transfer matrix of `pot` at energy `E` (complex energies continue the
/// exterior momentum `k = √(2mE)` analytically).
pub fn transfer_matrix(pot: &PiecewisePotential, energy: Complex64, params: &PhysicalParams) -> Result<TransferMatrix> {
    let k = exterior_momentum(energy, params)?;
    if pot.is_empty() {
        return Ok(TransferMatrix::identity());
    }
    let p = wave_propagator(pot, energy, params);
    let (xl, xr) = (pot.left_edge(), pot.right_edge());
    // (ψ, ψ') = W(x)(A, B) with W = [[e, 1/e], [ik e, -ik/e]], e = e^{ikx}
    let el = (I * k * xl).exp();
    let w_left = [[el, 1.0 / el], [I * k * el, -I * k / el]];
    let er = (I * k * xr).exp();
    let ik = I * k;
    let w_right_inv = [[0.5 / er, 0.5 / (er * ik)], [0.5 * er, -0.5 * er / ik]];
    let m = mat_mul(&w_right_inv, &mat_mul(&p, &w_left));
    Ok(TransferMatrix {
        m11: m[0][0],
        m12: m[0][1],
        m21: m[1][0],
        m22: m[1][1],
    })
}

/// Plane-wave coefficients inside one segment, referenced to its left edge:
/// `ψ = a e^{ik(x - x_j)} + b e^{-ik(x - x_j)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub energy: f64,
    pub k: f64,
    /// Transmission for left incidence.
    pub t: Complex64,
    /// Transmission for right incidence; equals `t` by reciprocity.
    pub t_right: Complex64,
    pub r_left: Complex64,
    pub r_right: Complex64,
    /// Interior coefficients for left incidence.
    pub interior: Vec<SegmentAmplitudes>,
    /// Set when the energy was shifted off a degenerate point.
    pub nudged: bool,
}

impl ScatteringSolution {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r_left.norm_sqr()
    }
}

fn interior_degenerate(pot: &PiecewisePotential, energy: f64, params: &PhysicalParams) -> bool {
    pot.segments().iter().any(|s| {
        momentum_in_region(Complex64::new(energy, 0.0), s.potential, params)
            .value
            .norm()
            < 1e-10
    })
}

pub fn scattering_amplitudes(
    pot: &PiecewisePotential,
    energy: f64,
    params: &PhysicalParams,
) -> Result<ScatteringSolution> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scattering energy must be > 0, got {energy}"
        )));
    }
    let mut e = energy;
    let mut nudged = false;
    if interior_degenerate(pot, e, params) {
        e *= 1.0 + DEGENERATE_NUDGE;
        nudged = true;
    }
    let ec = Complex64::new(e, 0.0);
    let m = transfer_matrix(pot, ec, params)?;
    let k = exterior_momentum(ec, params)?;
    let t_right = 1.0 / m.m22;
    let r_left = -m.m21 / m.m22;
    // equal exterior momenta make det M = 1, and det/M22 cancels badly
    // when M22 is large
    let t = t_right;
    let r_right = m.m12 / m.m22;
    let interior = interior_amplitudes(pot, ec, params, k, Complex64::new(1.0, 0.0), r_left);
    Ok(ScatteringSolution {
        energy: e,
        k: k.re,
        t,
        t_right,
        r_left,
        r_right,
        interior,
        nudged,
    })
}

/// Interior coefficients given the left-exterior state `a e^{ikx} + b e^{-ikx}`.
fn interior_amplitudes(
    pot: &PiecewisePotential,
    energy: Complex64,
    params: &PhysicalParams,
    k: Complex64,
    a: Complex64,
    b: Complex64,
) -> Vec<SegmentAmplitudes> {
    let x0 = pot.left_edge();
    let e0 = (I * k * x0).exp();
    let mut psi = a * e0 + b / e0;
    let mut dpsi = I * k * (a * e0 - b / e0);
    let mut out = Vec::with_capacity(pot.segments().len());
    for seg in pot.segments() {
        let kj = momentum_in_region(energy, seg.potential, params).value;
        let ratio = dpsi / (I * kj);
        out.push(SegmentAmplitudes {
            a: 0.5 * (psi + ratio),
            b: 0.5 * (psi - ratio),
        });
        let p = region_propagator(kj, seg.width);
        let next = p[0][0] * psi + p[0][1] * dpsi;
        dpsi = p[1][0] * psi + p[1][1] * dpsi;
        psi = next;
    }
    out
}

/// Which side the unit-amplitude incoming wave arrives from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    FromLeft,
    FromRight,
}

/// A scattering eigenstate that can be evaluated anywhere on the line.
#[derive(Debug, Clone)]
pub struct ScatteringState {
    pub energy: f64,
    pub k: f64,
    pub incidence: Incidence,
    left: (Complex64, Complex64),
    right: (Complex64, Complex64),
    boundaries: Vec<f64>,
    momenta: Vec<Complex64>,
    interior: Vec<SegmentAmplitudes>,
}

impl ScatteringState {
    /// Scattering state with signed wavenumber `k`: `k > 0` arrives from the
    /// left as `e^{ikx}`, `k < 0` arrives from the right as `e^{ikx}`.
    pub fn new(pot: &PiecewisePotential, k: f64, params: &PhysicalParams) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scattering wavenumber must be nonzero, got {k}"
            )));
        }
        let energy = params.energy_of(k);
        let sol = scattering_amplitudes(pot, energy, params)?;
        let kk = Complex64::new(sol.k, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (incidence, left, right) = if k > 0.0 {
            (Incidence::FromLeft, (one, sol.r_left), (sol.t, zero))
        } else {
            (Incidence::FromRight, (zero, sol.t_right), (sol.r_right, one))
        };
        let ec = Complex64::new(sol.energy, 0.0);
        let interior = interior_amplitudes(pot, ec, params, kk, left.0, left.1);
        let momenta = pot
            .segments()
            .iter()
            .map(|s| momentum_in_region(ec, s.potential, params).value)
            .collect();
        Ok(Self {
            energy: sol.energy,
            k: sol.k,
            incidence,
            left,
            right,
            boundaries: pot.boundaries(),
            momenta,
            interior,
        })
    }

    pub fn value_at(&self, x: f64) -> Complex64 {
        let k = self.k;
        let n = self.interior.len();
        if n == 0 || x < self.boundaries[0] {
            let e = Complex64::new(0.0, k * x).exp();
            return self.left.0 * e + self.left.1 / e;
        }
        if x >= self.boundaries[n] {
            let e = Complex64::new(0.0, k * x).exp();
            return self.right.0 * e + self.right.1 / e;
        }
        let j = match self.boundaries[1..].iter().position(|&b| x < b) {
            Some(j) => j,
            None => n - 1,
        };
        let arg = I * self.momenta[j] * (x - self.boundaries[j]);
        let e = arg.exp();
        self.interior[j].a * e + self.interior[j].b / e
    }
}

/// Closed-form amplitudes of the imaginary square barrier `iV0` on `[0, a]`,
/// rephased so that `V0 = 0` gives `(t, r) = (1, 0)`.
pub fn single_barrier_closed_form(
    v0: f64,
    a: f64,
    energy: f64,
    params: &PhysicalParams,
) -> Result<(Complex64, Complex64)> {
    if !(energy > 0.0 && a > 0.0) {
        return Err(Error::InvalidParameter("closed form needs E > 0 and a > 0".into()));
    }
    let k = momentum_in_region(Complex64::new(energy, 0.0), Complex64::new(0.0, 0.0), params).value;
    let kp = momentum_in_region(Complex64::new(energy, 0.0), Complex64::new(0.0, v0), params).value;
    Ok(closed_form_with_momenta(k, kp, a))
}

/// The barrier closed form for explicit exterior `k` and interior `k'`.
pub fn closed_form_with_momenta(k: Complex64, kp: Complex64, a: f64) -> (Complex64, Complex64) {
    let denom = (I * (k + kp) * a).exp() * (k - kp).powi(2) - (I * (k - kp) * a).exp() * (k + kp).powi(2);
    let t = -4.0 * k * kp / denom;
    let r = 2.0 * I * (k * k - kp * kp) * (kp * a).sin() * (I * k * a).exp() / denom;
    (t, r)
}

/// Partial sum of the multiple-reflection series for a one-segment potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub partial_sum: Complex64,
    /// Round-trip factor `r1 r2 e^{2ik'a}`.
    pub ratio: Complex64,
    /// First term, the single-pass (Born-like) amplitude.
    pub single_pass: Complex64,
}

pub fn reflection_series_partial_sum(
    pot: &PiecewisePotential,
    energy: f64,
    params: &PhysicalParams,
    terms: usize,
) -> Result<SeriesSum> {
    if pot.segments().len() != 1 {
        return Err(Error::InvalidParameter(
            "reflection series needs a potential with exactly one segment".into(),
        ));
    }
    if terms == 0 {
        return Err(Error::InvalidParameter("series needs at least one term".into()));
    }
    let seg = pot.segments()[0];
    let ec = Complex64::new(energy, 0.0);
    let k = momentum_in_region(ec, Complex64::new(0.0, 0.0), params);
    let kp = momentum_in_region(ec, seg.potential, params);
    let enter = interface_amplitudes(k, kp)?;
    let exit = interface_amplitudes(kp, k)?;
    let a = seg.width;
    // the inside reflection is the same at both walls
    let ratio = exit.r * exit.r * (2.0 * I * kp.value * a).exp();
    let single_pass = enter.t * exit.t * (I * (kp.value - k.value) * a).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = single_pass;
    for _ in 0..terms {
        sum += term;
        term *= ratio;
    }
    Ok(SeriesSum {
        partial_sum: sum,
        ratio,
        single_pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePeak {
    pub energy: f64,
    pub peak_t2: f64,
    /// Phase thickness Σ w_j Re k_j / π; for one segment this is `2a/λ`.
    pub n_index: f64,
}

/// Σ_j w_j Re k_j(E) / π over the segments.
pub fn phase_thickness(pot: &PiecewisePotential, energy: f64, params: &PhysicalParams) -> f64 {
    pot.segments()
        .iter()
        .map(|s| {
            s.width
                * momentum_in_region(Complex64::new(energy, 0.0), s.potential, params)
                    .value
                    .re
        })
        .sum::<f64>()
        / PI
}

fn transmission_or_nan(pot: &PiecewisePotential, energy: f64, params: &PhysicalParams) -> f64 {
    scattering_amplitudes(pot, energy, params)
        .map(|s| s.transmission())
        .unwrap_or(f64::NAN)
}

/// Rows of `(E, |t|², |r|²)` on a uniform grid.
pub fn transmission_table(
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    e_min: f64,
    e_max: f64,
    points: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    validate_scan(e_min, e_max, points, 2)?;
    linspace(e_min, e_max, points)
        .into_par_iter()
        .map(|e| {
            let s = scattering_amplitudes(pot, e, params)?;
            Ok((e, s.transmission(), s.reflection()))
        })
        .collect()
}

fn validate_scan(e_min: f64, e_max: f64, points: usize, min_points: usize) -> Result<()> {
    if !(e_min > 0.0 && e_max > e_min && e_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "energy window must satisfy 0 < Emin < Emax, got [{e_min}, {e_max}]"
        )));
    }
    if points < min_points {
        return Err(Error::InvalidParameter(format!(
            "scan needs at least {min_points} grid points, got {points}"
        )));
    }
    Ok(())
}

/// Strict local maxima of |t(E)|² on a uniform grid, each refined by
/// golden-section search to relative 1e-8, sorted by energy.
pub fn resonance_scan(
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    e_min: f64,
    e_max: f64,
    grid_points: usize,
) -> Result<Vec<ResonancePeak>> {
    validate_scan(e_min, e_max, grid_points, 100)?;
    let grid = linspace(e_min, e_max, grid_points);
    let values: Vec<f64> = grid.par_iter().map(|&e| transmission_or_nan(pot, e, params)).collect();
    let peaks: Vec<ResonancePeak> = (1..grid_points - 1)
        .into_par_iter()
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .map(|i| {
            let (energy, peak_t2) = golden_max(|e| transmission_or_nan(pot, e, params), grid[i - 1], grid[i + 1], 1e-8);
            ResonancePeak {
                energy,
                peak_t2,
                n_index: phase_thickness(pot, energy, params),
            }
        })
        .collect();
    Ok(peaks)
}

/// How the two evanescent momenta at E → 0⁺ are placed on their branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRule {
    /// Both momenta principal. Below the barrier top they come out as a
    /// conjugate pair, so `k⁺ + k⁻ → 0` and r₂ diverges as V₀ → 0.
    Principal,
    /// `k⁺` principal; `k⁻` is the root nearest `k⁺`, so both layers
    /// coincide when V₀ = 0 and r₂ vanishes there.
    Continuous,
}

/// |r₁ r₂ e^{2ik'a}| for the barrier/well pair of height `U0 ± iV0` at
/// E = 1e-9·U0.
pub fn threshold_common_ratio(v0: f64, u0: f64, a: f64, params: &PhysicalParams, rule: BranchRule) -> f64 {
    let e = Complex64::new(1e-9 * u0.abs().max(f64::MIN_POSITIVE), 0.0);
    let k = momentum_in_region(e, Complex64::new(0.0, 0.0), params).value;
    let k_plus = momentum_in_region(e, Complex64::new(u0, v0), params).value;
    let principal_minus = principal_sqrt(params.two_m() * (e - Complex64::new(u0, -v0)));
    let k_minus = match rule {
        BranchRule::Principal => principal_minus,
        BranchRule::Continuous => {
            if (principal_minus - k_plus).norm() <= (-principal_minus - k_plus).norm() {
                principal_minus
            } else {
                -principal_minus
            }
        }
    };
    let r1 = (k - k_plus) / (k + k_plus);
    let r2 = (k_plus - k_minus) / (k_plus + k_minus);
    (r1 * r2 * (2.0 * I * k_plus * a).exp()).norm()
}

/// V₀ at which the round-trip factor reaches 1, with the continuous branch
/// rule.
pub fn critical_strength(u0: f64, a: f64, params: &PhysicalParams) -> Result<f64> {
    critical_strength_with(u0, a, params, BranchRule::Continuous)
}

pub fn critical_strength_with(u0: f64, a: f64, params: &PhysicalParams, rule: BranchRule) -> Result<f64> {
    if !(u0 > 0.0 && a > 0.0) {
        return Err(Error::InvalidParameter(
            "critical strength needs U0 > 0 and a > 0".into(),
        ));
    }
    let (lo, hi): (f64, f64) = (1e-12, u0);
    let f = |log_v: f64| threshold_common_ratio(log_v.exp(), u0, a, params, rule).ln();
    let (llo, lhi) = (lo.ln(), hi.ln());
    match bisect(f, llo, lhi, 1e-11) {
        Ok(lv) => Ok(lv.exp()),
        Err(Error::NoRoot { .. }) => Err(Error::NoRoot {
            lo,
            hi,
            f_lo: threshold_common_ratio(lo, u0, a, params, rule) - 1.0,
            f_hi: threshold_common_ratio(hi, u0, a, params, rule) - 1.0,
        }),
        Err(e) => Err(e),
    }
}

/// Maximum of |T(E)| over `(0, e_max]`: a uniform grid of `grid_points`
/// nodes, then golden-section refinement of every local maximum.
pub fn max_transmission_amplitude(
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    e_max: f64,
    grid_points: usize,
) -> Result<(f64, f64)> {
    validate_scan(e_max / grid_points as f64, e_max, grid_points, 3)?;
    let grid = linspace(e_max / grid_points as f64, e_max, grid_points);
    let amp = |e: f64| {
        scattering_amplitudes(pot, e, params)
            .map(|s| s.t.norm())
            .unwrap_or(f64::NAN)
    };
    let values: Vec<f64> = grid.par_iter().map(|&e| amp(e)).collect();
    let mut best = values.iter().zip(&grid).fold(
        (f64::NEG_INFINITY, 0.0),
        |acc, (&v, &e)| if v > acc.0 { (v, e) } else { acc },
    );
    let refined: Vec<(f64, f64)> = (1..grid_points - 1)
        .into_par_iter()
        .filter(|&i| values[i] >= values[i - 1] && values[i] >= values[i + 1])
        .map(|i| {
            let (e, v) = golden_max(amp, grid[i - 1], grid[i + 1], 1e-10);
            (v, e)
        })
        .collect();
    for cand in refined {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    Ok((best.0, best.1))
}

/// Smallest V₀ at which the barrier/well pair cell transmits with
/// |T| > 1 + [`TRANSMISSION_EXCESS_TOL`] somewhere in `(0, e_max]`.
pub fn threshold_by_transmission(u0: f64, a: f64, params: &PhysicalParams, e_max: f64) -> Result<f64> {
    threshold_by_transmission_with(u0, a, params, e_max, TRANSMISSION_EXCESS_TOL, 4000)
}

pub fn threshold_by_transmission_with(
    u0: f64,
    a: f64,
    params: &PhysicalParams,
    e_max: f64,
    excess_tol: f64,
    grid_points: usize,
) -> Result<f64> {
    let (lo, hi): (f64, f64) = (1e-12, u0);
    let excess = |v0: f64| -> Result<f64> {
        let cell = build_pt_unit_cell(v0, a, u0)?;
        Ok(max_transmission_amplitude(&cell, params, e_max, grid_points)?.0 - 1.0 - excess_tol)
    };
    if !(hi > lo) {
        return Err(Error::NoRoot {
            lo,
            hi,
            f_lo: f64::NAN,
            f_hi: f64::NAN,
        });
    }
    let (f_lo, f_hi) = (excess(lo)?, excess(hi)?);
    if f_lo > 0.0 || f_hi <= 0.0 {
        return Err(Error::NoRoot { lo, hi, f_lo, f_hi });
    }
    bisect_predicate_log(|v0| Ok(excess(v0)? > 0.0), lo, hi, 1e-6)
}
