//! Localized states of the imaginary square barrier `iV0` on `[0, a]`.
//!
//! States are symmetric or antisymmetric about `a/2`. Outside the barrier
//! they behave as `e^{iκ|x - a/2|}` with `κ = k + iq`, `q > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{principal_sqrt, PhysicalParams, PiecewisePotential};
use crate::numerics::{complex_newton, UniformGrid};
use crate::output::{csv_string, fmt_g12};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Decaying exterior momentum: the root of `κ² = 2mE` analytic on the side
/// of the real axis where the states live (upper half-plane for a barrier,
/// lower for a well).
fn exterior_kappa(energy: Complex64, v0: f64, params: &PhysicalParams) -> Complex64 {
    let k = principal_sqrt(params.two_m() * energy);
    if v0 >= 0.0 {
        k
    } else {
        -k
    }
}

fn interior_p(energy: Complex64, v0: f64, params: &PhysicalParams) -> Complex64 {
    principal_sqrt(params.two_m() * (energy - Complex64::new(0.0, v0)))
}

fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Residual without the normalizability check, analytic in E on the search
/// half-plane. Both forms are even in `p`, so the branch of `p` is irrelevant.
fn raw_residual(energy: Complex64, parity: Parity, v0: f64, a: f64, params: &PhysicalParams) -> Complex64 {
    let kappa = exterior_kappa(energy, v0, params);
    let p = interior_p(energy, v0, params);
    let half = p * (0.5 * a);
    match parity {
        Parity::Even => p * half.sin() + I * kappa * half.cos(),
        // divided by p to drop the spurious p = 0 root
        Parity::Odd => half.cos() - I * kappa * (0.5 * a) * sinc(half),
    }
}

/// Matching residual at the barrier edge; its zeros are the localized states.
pub fn parity_matching_residual(
    energy: Complex64,
    parity: Parity,
    v0: f64,
    a: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("barrier width must be > 0, got {a}")));
    }
    let q = exterior_kappa(energy, v0, params).im;
    if q <= 0.0 {
        return Err(Error::InvalidRegion { energy, q });
    }
    Ok(raw_residual(energy, parity, v0, a, params))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchRect {
    /// `0 < Re E < 20|V0|`, `0 < Im E < V0` (mirrored below the axis for a well).
    pub fn default_for(v0: f64) -> Self {
        let w = v0.abs();
        if v0 >= 0.0 {
            Self {
                re_min: 0.0,
                re_max: 20.0 * w,
                im_min: 0.0,
                im_max: w,
            }
        } else {
            Self {
                re_min: 0.0,
                re_max: 20.0 * w,
                im_min: -w,
                im_max: 0.0,
            }
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    /// Splits across the longer side at `frac` of its length.
    fn split(&self, frac: f64) -> (SearchRect, SearchRect) {
        if self.re_max - self.re_min >= self.im_max - self.im_min {
            let cut = self.re_min + frac * (self.re_max - self.re_min);
            (SearchRect { re_max: cut, ..*self }, SearchRect { re_min: cut, ..*self })
        } else {
            let cut = self.im_min + frac * (self.im_max - self.im_min);
            (SearchRect { im_max: cut, ..*self }, SearchRect { im_min: cut, ..*self })
        }
    }
}

const MAX_PHASE_STEP: f64 = PI / 4.0;

fn phase_between<F: Fn(Complex64) -> Complex64>(
    f: &F,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    fb: Complex64,
    depth: usize,
) -> Result<f64> {
    if fa.norm() == 0.0 || fb.norm() == 0.0 || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NonConvergence {
            context: "residual vanishes or overflows on the contour".into(),
            iterations: depth,
            last: if fa.norm() == 0.0 { za } else { zb },
        });
    }
    let d = (fb / fa).arg();
    let zm = 0.5 * (za + zb);
    let fm = f(zm);
    if !fm.is_finite() || fm.norm() == 0.0 {
        return Err(Error::NonConvergence {
            context: "residual vanishes or overflows on the contour".into(),
            iterations: depth,
            last: zm,
        });
    }
    let (d1, d2) = ((fm / fa).arg(), (fb / fm).arg());
    // accept a step only when both halves are small too and agree with it,
    // so a whole turn cannot hide between two samples
    let small = d.abs() < MAX_PHASE_STEP && d1.abs() < MAX_PHASE_STEP && d2.abs() < MAX_PHASE_STEP;
    if (small && (d1 + d2 - d).abs() < 1e-9) || depth >= 40 {
        return Ok(d);
    }
    Ok(phase_between(f, za, fa, zm, fm, depth + 1)? + phase_between(f, zm, fm, zb, fb, depth + 1)?)
}

fn contour_phase<F: Fn(Complex64) -> Complex64>(f: &F, rect: &SearchRect, per_edge: usize) -> Result<f64> {
    let c = rect.corners();
    let mut total = 0.0;
    for e in 0..4 {
        let (z0, z1) = (c[e], c[(e + 1) % 4]);
        let mut za = z0;
        let mut fa = f(za);
        for j in 1..=per_edge {
            let zb = z0 + (z1 - z0) * (j as f64 / per_edge as f64);
            let fb = f(zb);
            total += phase_between(f, za, fa, zb, fb, 0)?;
            za = zb;
            fa = fb;
        }
    }
    Ok(total)
}

/// Number of zeros of `f` inside `rect` by the argument principle. The edge
/// sampling is refined until the count is unchanged under halving.
pub fn winding_count<F: Fn(Complex64) -> Complex64>(f: &F, rect: &SearchRect) -> Result<usize> {
    let mut n = 64;
    let mut prev = (contour_phase(f, rect, n)? / (2.0 * PI)).round();
    for _ in 0..8 {
        n *= 2;
        let cur = (contour_phase(f, rect, n)? / (2.0 * PI)).round();
        if cur == prev {
            if cur < 0.0 {
                return Err(Error::NonConvergence {
                    context: format!("negative winding {cur} on {rect:?}"),
                    iterations: n,
                    last: rect.center(),
                });
            }
            return Ok(cur as usize);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        context: format!("winding count unstable on {rect:?}"),
        iterations: n,
        last: rect.center(),
    })
}

// off-centre cuts keep symmetric root pairs off the dividing line
const SPLIT_FRACTIONS: [f64; 4] = [0.5137, 0.4719, 0.5573, 0.4382];

fn split_counted<F: Fn(Complex64) -> Complex64>(
    f: &F,
    rect: &SearchRect,
    count: usize,
) -> Result<Vec<(SearchRect, usize)>> {
    let mut last_err = None;
    for frac in SPLIT_FRACTIONS {
        let (r1, r2) = rect.split(frac);
        match (winding_count(f, &r1), winding_count(f, &r2)) {
            (Ok(c1), Ok(c2)) if c1 + c2 == count => return Ok(vec![(r1, c1), (r2, c2)]),
            (Ok(c1), Ok(c2)) => {
                last_err = Some(Error::CountMismatch {
                    expected: count,
                    found: c1 + c2,
                });
            }
            (Err(e), _) | (_, Err(e)) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one split attempted"))
}

fn polish<F: Fn(Complex64) -> Complex64>(f: &F, seed: Complex64, rect: &SearchRect) -> Result<Complex64> {
    complex_newton(
        |z| Ok(f(z)),
        seed,
        1e-12,
        200,
        &format!("localized-state polish in {rect:?}"),
    )
}

fn isolate<F: Fn(Complex64) -> Complex64 + Sync>(
    f: &F,
    rect: SearchRect,
    count: usize,
    depth: usize,
    scale: f64,
) -> Result<Vec<(Complex64, usize)>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let tiny = rect.diameter() < 1e-9 * scale;
    if count == 1 || tiny {
        match polish(f, rect.center(), &rect) {
            Ok(z) if rect.contains(z, 1e-9 * scale) => return Ok(vec![(z, count)]),
            Ok(z) if tiny => {
                return Err(Error::NonConvergence {
                    context: format!("polished root left sub-rectangle {rect:?}"),
                    iterations: 200,
                    last: z,
                })
            }
            Err(e) if tiny || depth >= 60 => return Err(e),
            _ => {}
        }
    }
    if depth >= 60 {
        return Err(Error::NonConvergence {
            context: format!("root isolation depth exceeded in {rect:?}"),
            iterations: depth,
            last: rect.center(),
        });
    }
    let parts = split_counted(f, &rect, count)?;
    let found: Result<Vec<Vec<(Complex64, usize)>>> = parts
        .into_par_iter()
        .map(|(r, c)| isolate(f, r, c, depth + 1, scale))
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

fn merge_roots(mut roots: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for (z, m) in roots {
        match out.iter_mut().find(|(w, _)| (*w - z).norm() < 1e-8) {
            Some(slot) => slot.1 += m,
            None => out.push((z, m)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizedState {
    /// Position in the list ordered by Re E.
    pub index: usize,
    pub energy: Complex64,
    /// Re κ; positive (outgoing) for a barrier, negative for a well.
    pub exterior_k: f64,
    /// Im κ > 0, the exterior decay rate.
    pub exterior_q: f64,
    pub interior_p: Complex64,
    pub parity: Parity,
    /// Interior amplitude `A`: `A(e^{ips} ± e^{-ips})` with `s = x - a/2`,
    /// normalized so that ψ = `e^{iκ(s)}` right of the barrier.
    pub interior_amp: Complex64,
    pub multiplicity: usize,
    pub v0: f64,
    pub width: f64,
}

impl LocalizedState {
    /// Builds the state at a root of the parity residual.
    pub fn from_root(energy: Complex64, parity: Parity, v0: f64, a: f64, params: &PhysicalParams) -> Result<Self> {
        let kappa = exterior_kappa(energy, v0, params);
        if kappa.im <= 0.0 {
            return Err(Error::InvalidRegion { energy, q: kappa.im });
        }
        let p = interior_p(energy, v0, params);
        let edge = (I * kappa * (0.5 * a)).exp();
        let half = p * (0.5 * a);
        let interior_amp = match parity {
            Parity::Even => edge / (2.0 * half.cos()),
            Parity::Odd => edge / (2.0 * I * half.sin()),
        };
        Ok(Self {
            index: 0,
            energy,
            exterior_k: kappa.re,
            exterior_q: kappa.im,
            interior_p: p,
            parity,
            interior_amp,
            multiplicity: 1,
            v0,
            width: a,
        })
    }

    pub fn kappa(&self) -> Complex64 {
        Complex64::new(self.exterior_k, self.exterior_q)
    }

    /// The potential this state belongs to.
    pub fn potential(&self) -> PiecewisePotential {
        PiecewisePotential::single(0.0, self.width, Complex64::new(0.0, self.v0)).expect("validated width")
    }

    fn sign(&self) -> f64 {
        match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// ψ(x) at t = 0.
    pub fn value_at(&self, x: f64) -> Complex64 {
        let s = x - 0.5 * self.width;
        let kappa = self.kappa();
        if s > 0.5 * self.width {
            (I * kappa * s).exp()
        } else if s < -0.5 * self.width {
            self.sign() * (-I * kappa * s).exp()
        } else {
            let ps = self.interior_p * s;
            match self.parity {
                Parity::Even => 2.0 * self.interior_amp * ps.cos(),
                Parity::Odd => 2.0 * I * self.interior_amp * ps.sin(),
            }
        }
    }

    /// ψ'(x) at t = 0.
    pub fn derivative_at(&self, x: f64) -> Complex64 {
        let s = x - 0.5 * self.width;
        let kappa = self.kappa();
        if s > 0.5 * self.width {
            I * kappa * (I * kappa * s).exp()
        } else if s < -0.5 * self.width {
            -self.sign() * I * kappa * (-I * kappa * s).exp()
        } else {
            let p = self.interior_p;
            let ps = p * s;
            match self.parity {
                Parity::Even => -2.0 * self.interior_amp * p * ps.sin(),
                Parity::Odd => 2.0 * I * self.interior_amp * p * ps.cos(),
            }
        }
    }

    /// The matching state of the conjugated potential (barrier ↔ well).
    pub fn conjugate(&self, params: &PhysicalParams) -> Result<Self> {
        let mut s = Self::from_root(self.energy.conj(), self.parity, -self.v0, self.width, params)?;
        s.index = self.index;
        s.multiplicity = self.multiplicity;
        Ok(s)
    }
}

/// All localized states of the barrier `iV0` on `[0, a]` inside `rect`
/// (default [`SearchRect::default_for`]), ordered by Re E then parity.
pub fn find_localized_states(
    v0: f64,
    a: f64,
    params: &PhysicalParams,
    rect: Option<SearchRect>,
) -> Result<Vec<LocalizedState>> {
    if v0 == 0.0 || !v0.is_finite() {
        return Err(Error::InvalidParameter(format!("V0 must be nonzero, got {v0}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("barrier width must be > 0, got {a}")));
    }
    let rect = rect.unwrap_or_else(|| SearchRect::default_for(v0));
    let w = v0.abs();
    let inside_band = if v0 > 0.0 {
        rect.im_min >= 0.0 && rect.im_max <= w
    } else {
        rect.im_max <= 0.0 && rect.im_min >= -w
    };
    if !(rect.re_max > rect.re_min && rect.im_max > rect.im_min) || !inside_band {
        return Err(Error::InvalidParameter(format!(
            "search rectangle {rect:?} must be nonempty and within the band 0 < ±Im E < |V0|"
        )));
    }
    let scale = rect.diameter().max(1.0);
    let mut states = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let f = |z: Complex64| raw_residual(z, parity, v0, a, params);
        let count = winding_count(&f, &rect)?;
        let roots = merge_roots(isolate(&f, rect, count, 0, scale)?);
        let found: usize = roots.iter().map(|r| r.1).sum();
        if found != count {
            return Err(Error::CountMismatch { expected: count, found });
        }
        for (z, mult) in roots {
            let mut s = LocalizedState::from_root(z, parity, v0, a, params)?;
            s.multiplicity = mult;
            states.push(s);
        }
    }
    states.sort_by(|x, y| x.energy.re.total_cmp(&y.energy.re).then(x.parity.cmp(&y.parity)));
    for (i, s) in states.iter_mut().enumerate() {
        s.index = i;
    }
    Ok(states)
}

/// j₀ = Im(ψ* ψ')/m of the time-dependent state `ψ(x) e^{-iEt}`.
pub fn localized_current(state: &LocalizedState, x: f64, t: f64, params: &PhysicalParams) -> f64 {
    let psi = state.value_at(x);
    let dpsi = state.derivative_at(x);
    (psi.conj() * dpsi).im / params.mass * (2.0 * state.energy.im * t).exp()
}

/// Closed-form exterior current magnitude `(k/m) e^{-2q|x - a/2| + 2 Im E t}`.
pub fn quantized_current(state: &LocalizedState, x: f64, t: f64, params: &PhysicalParams) -> f64 {
    let s = (x - 0.5 * state.width).abs();
    state.exterior_k / params.mass * (-2.0 * state.exterior_q * s + 2.0 * state.energy.im * t).exp()
}

/// `|d/dt ∫|ψ|² - 2∫ Im V |ψ|²|` by the trapezoid rule, with V averaged
/// over each grid cell so that segment edges between nodes are handled.
pub fn norm_balance_residual(
    grid: &UniformGrid,
    psi: &[Complex64],
    dpsi_dt: &[Complex64],
    pot: &PiecewisePotential,
) -> Result<f64> {
    if psi.len() != grid.n || dpsi_dt.len() != grid.n {
        return Err(Error::GridMismatch(format!(
            "grid has {} points, psi {}, dpsi/dt {}",
            grid.n,
            psi.len(),
            dpsi_dt.len()
        )));
    }
    let mut rate = 0.0;
    let mut source = 0.0;
    for i in 0..grid.n - 1 {
        let (xa, xb) = (grid.x(i), grid.x(i + 1));
        let ra = 2.0 * (psi[i].conj() * dpsi_dt[i]).re;
        let rb = 2.0 * (psi[i + 1].conj() * dpsi_dt[i + 1]).re;
        rate += 0.5 * grid.dx * (ra + rb);
        let dens = 0.5 * (psi[i].norm_sqr() + psi[i + 1].norm_sqr());
        source += 2.0 * pot.cell_average(xa, xb).im * dens * grid.dx;
    }
    Ok((rate - source).abs())
}

pub fn localized_states_csv(states: &[LocalizedState]) -> String {
    csv_string(
        &["n", "parity", "ReE", "ImE", "k", "q"],
        states.iter().map(|s| {
            vec![
                s.index.to_string(),
                s.parity.label().to_string(),
                fmt_g12(s.energy.re),
                fmt_g12(s.energy.im),
                fmt_g12(s.exterior_k),
                fmt_g12(s.exterior_q),
            ]
        }),
    )
}
