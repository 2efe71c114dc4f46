//! Gaussian wave packets through complex potentials: eigenfunction
//! expansion with left/right eigenstates, and Crank–Nicolson stepping.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound_states::{find_localized_states, LocalizedState};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, PiecewisePotential};
use crate::numerics::{simpson, solve_tridiagonal, trapezoid_real, trapezoid_weights, UniformGrid};
use crate::output::{csv_string, fmt_g12};
use crate::scattering::ScatteringState;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub x0: f64,
    pub p0: f64,
    /// Inverse-width parameter; the mean width is 1/(2√b).
    pub b: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, p0: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite() && x0.is_finite() && p0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "packet needs finite x0, p0 and b > 0, got b = {b}"
            )));
        }
        Ok(Self { x0, p0, b })
    }

    /// (2b/π)^{1/4}, the peak of |Ψ(x, 0)|.
    pub fn peak_amplitude(&self) -> f64 {
        (2.0 * self.b / PI).powf(0.25)
    }

    /// Interval outside which |Ψ| is below e^{-36} of its peak.
    pub fn support(&self) -> (f64, f64) {
        let half = 6.0 / self.b.sqrt();
        (self.x0 - half, self.x0 + half)
    }
}

/// (2b/π)^{1/4} e^{−b(x−x0)² + ip0(x−x0)}.
pub fn gaussian_packet_sample(p: &GaussianPacket, x: f64) -> Complex64 {
    let s = x - p.x0;
    p.peak_amplitude() * Complex64::new(-p.b * s * s, p.p0 * s).exp()
}

/// Free evolution of the packet, the closed-form V ≡ 0 solution.
pub fn free_packet_sample(p: &GaussianPacket, x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
    let m = params.mass;
    let alpha = Complex64::new(1.0, 2.0 * p.b * t / m);
    let centre = x - p.x0 - p.p0 * t / m;
    let arg = -p.b * centre * centre / alpha + I * p.p0 * (x - p.x0) - I * p.p0 * p.p0 * t / (2.0 * m);
    p.peak_amplitude() / alpha.sqrt() * arg.exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    pub grid: UniformGrid,
    pub values: Vec<Complex64>,
    pub time: f64,
    pub norm: f64,
}

impl WaveField {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-point grid",
                values.len(),
                grid.n
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("wave field contains non-finite values".into()));
        }
        let dens: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
        let norm = trapezoid_real(&dens, grid.dx);
        Ok(Self {
            grid,
            values,
            time,
            norm,
        })
    }

    pub fn sample<F: Fn(f64) -> Complex64 + Sync>(grid: UniformGrid, time: f64, f: F) -> Result<Self> {
        let values = (0..grid.n).into_par_iter().map(|i| f(grid.x(i))).collect();
        Self::new(grid, values, time)
    }

    /// L² distance to `other` on the common grid.
    pub fn l2_distance(&self, other: &WaveField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("fields sampled on different grids".into()));
        }
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .collect();
        Ok(trapezoid_real(&diff, self.grid.dx).sqrt())
    }

    /// Interior local maxima of |ψ| with x in `[lo, hi]`.
    pub fn local_maxima_in(&self, lo: f64, hi: f64) -> usize {
        let abs: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        (1..abs.len() - 1)
            .filter(|&i| {
                let x = self.grid.x(i);
                x >= lo && x <= hi && abs[i] > abs[i - 1] && abs[i] > abs[i + 1]
            })
            .count()
    }

    pub fn to_csv(&self) -> String {
        csv_string(
            &["x", "RePsi", "ImPsi", "AbsPsi2"],
            self.values.iter().enumerate().map(|(i, v)| {
                vec![
                    fmt_g12(self.grid.x(i)),
                    fmt_g12(v.re),
                    fmt_g12(v.im),
                    fmt_g12(v.norm_sqr()),
                ]
            }),
        )
    }
}

/// Snapshot manifest `{"times": [...], "norms": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotManifest {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
}

impl SnapshotManifest {
    pub fn from_fields(fields: &[WaveField]) -> Self {
        Self {
            times: fields.iter().map(|f| f.time).collect(),
            norms: fields.iter().map(|f| f.norm).collect(),
        }
    }
}

/// Label of a right eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenlabel {
    /// Scattering state with signed wavenumber (sign = incidence side).
    Continuum(f64),
    Localized(LocalizedState),
}

/// The left eigenstate paired with `label`: the matching eigenstate of the
/// conjugated potential V* at E*, sampled on `grid`.
pub fn left_eigenstate(
    label: &Eigenlabel,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    grid: &UniformGrid,
) -> Result<Vec<Complex64>> {
    match label {
        Eigenlabel::Continuum(k) => {
            let st = ScatteringState::new(&pot.conjugate(), *k, params)?;
            Ok((0..grid.n).map(|i| st.value_at(grid.x(i))).collect())
        }
        Eigenlabel::Localized(s) => {
            let left = s.conjugate(params)?;
            let shift = pot.left_edge();
            Ok((0..grid.n).map(|i| left.value_at(grid.x(i) - shift)).collect())
        }
    }
}

/// k-node layout for the continuum part of an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGridSpec {
    /// Half-width of the k window in units of √b.
    pub half_width: f64,
    pub nodes_per_sign: usize,
    /// Quadrature spacing for the overlap integrals.
    pub dx: f64,
}

impl Default for KGridSpec {
    fn default() -> Self {
        Self {
            half_width: 16.0,
            nodes_per_sign: 1024,
            dx: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralExpansion {
    pub k_nodes: Vec<f64>,
    pub k_weights: Vec<f64>,
    pub c_k: Vec<Complex64>,
    pub localized: Vec<LocalizedState>,
    pub c_n: Vec<Complex64>,
    states: Vec<ScatteringState>,
    shift: f64,
    params: PhysicalParams,
}

/// Localized states available for `pot`: only a single purely imaginary
/// segment has them here.
pub fn localized_states_for(pot: &PiecewisePotential, params: &PhysicalParams) -> Result<Vec<LocalizedState>> {
    match pot.segments() {
        [seg] if seg.potential.re == 0.0 && seg.potential.im != 0.0 => {
            find_localized_states(seg.potential.im, seg.width, params, None)
        }
        _ => Ok(Vec::new()),
    }
}

fn k_nodes(p0: f64, b: f64, spec: &KGridSpec) -> (Vec<f64>, Vec<f64>) {
    let half = spec.half_width * b.sqrt();
    let hi = (p0.abs() + half).max(1e-3);
    let n = spec.nodes_per_sign.max(2);
    if p0.abs() <= half {
        // the two windows meet at k = 0: one midpoint grid straddling it
        let h = 2.0 * hi / (2 * n) as f64;
        let nodes = (0..2 * n).map(|i| -hi + (i as f64 + 0.5) * h).collect();
        return (nodes, vec![h; 2 * n]);
    }
    let lo = p0.abs() - half;
    let h = (hi - lo) / (n - 1) as f64;
    let w = trapezoid_weights(n, h);
    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for i in (0..n).rev() {
        nodes.push(-(lo + h * i as f64));
        weights.push(w[i]);
    }
    for i in 0..n {
        nodes.push(lo + h * i as f64);
        weights.push(w[i]);
    }
    (nodes, weights)
}

/// Expands `psi` (negligible outside `support`) over the right eigenstates
/// of `pot`. Continuum coefficients are `C_k = ∫(φ^L_k)* Ψ dx`, entering the
/// reconstruction with weight `w_k/2π`; localized coefficients are c-product
/// ratios `∫φ_n Ψ / ∫φ_n²`.
pub fn expand_function<F: Fn(f64) -> Complex64 + Sync>(
    psi: F,
    support: (f64, f64),
    centre_k: f64,
    width_b: f64,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    spec: &KGridSpec,
) -> Result<SpectralExpansion> {
    let grid = UniformGrid::spanning(support.0, support.1, spec.dx)?;
    let samples: Vec<Complex64> = (0..grid.n).map(|i| psi(grid.x(i))).collect();
    let (nodes, weights) = k_nodes(centre_k, width_b, spec);
    let left_pot = pot.conjugate();
    let pairs: Result<Vec<(ScatteringState, Complex64)>> = nodes
        .par_iter()
        .map(|&k| {
            let right = ScatteringState::new(pot, k, params)?;
            let left = ScatteringState::new(&left_pot, k, params)?;
            let integrand: Vec<Complex64> = (0..grid.n)
                .map(|i| left.value_at(grid.x(i)).conj() * samples[i])
                .collect();
            Ok((right, simpson(&integrand, grid.dx)))
        })
        .collect();
    let (states, c_k): (Vec<_>, Vec<_>) = pairs?.into_iter().unzip();
    let localized = localized_states_for(pot, params)?;
    let shift = pot.left_edge();
    let mut c_n = Vec::with_capacity(localized.len());
    for s in &localized {
        let num: Vec<Complex64> = (0..grid.n)
            .map(|i| s.value_at(grid.x(i) - shift) * samples[i])
            .collect();
        let reach = 36.0 / s.exterior_q;
        let centre = 0.5 * s.width;
        let dgrid = UniformGrid::spanning(centre - reach, centre + reach, spec.dx)?;
        let den: Vec<Complex64> = (0..dgrid.n).map(|i| s.value_at(dgrid.x(i)).powi(2)).collect();
        let den = simpson(&den, dgrid.dx);
        if den.norm() < 1e-12 {
            return Err(Error::DenominatorUnderflow { magnitude: den.norm() });
        }
        c_n.push(simpson(&num, grid.dx) / den);
    }
    Ok(SpectralExpansion {
        k_nodes: nodes,
        k_weights: weights,
        c_k,
        localized,
        c_n,
        states,
        shift,
        params: *params,
    })
}

pub fn expand_packet(
    p: &GaussianPacket,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    spec: &KGridSpec,
) -> Result<SpectralExpansion> {
    expand_function(
        |x| gaussian_packet_sample(p, x),
        p.support(),
        p.p0,
        p.b,
        pot,
        params,
        spec,
    )
}

impl SpectralExpansion {
    /// Ψ(x, t) from the expansion.
    pub fn value_at(&self, x: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((st, w), c) in self.states.iter().zip(&self.k_weights).zip(&self.c_k) {
            let phase = Complex64::new(0.0, -st.energy * t).exp();
            acc += c * st.value_at(x) * phase * (w / (2.0 * PI));
        }
        for (s, c) in self.localized.iter().zip(&self.c_n) {
            acc += c * s.value_at(x - self.shift) * (-I * s.energy * t).exp();
        }
        acc
    }

    /// ∂Ψ/∂t from the expansion.
    pub fn time_derivative_at(&self, x: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((st, w), c) in self.states.iter().zip(&self.k_weights).zip(&self.c_k) {
            let phase = Complex64::new(0.0, -st.energy * t).exp();
            acc += -I * st.energy * c * st.value_at(x) * phase * (w / (2.0 * PI));
        }
        for (s, c) in self.localized.iter().zip(&self.c_n) {
            acc += -I * s.energy * c * s.value_at(x - self.shift) * (-I * s.energy * t).exp();
        }
        acc
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }
}

pub fn evolve_expansion(exp: &SpectralExpansion, t: f64, grid: UniformGrid) -> Result<WaveField> {
    WaveField::sample(grid, t, |x| exp.value_at(x, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectConfig {
    pub box_lo: f64,
    pub box_hi: f64,
    pub dx: f64,
    pub dt: f64,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            box_lo: -40.0,
            box_hi: 120.0,
            dx: 0.02,
            dt: 5e-4,
        }
    }
}

/// Allowed norm drift per unit time, relative to the norm, beyond the exact
/// discrete balance law.
pub const STABILITY_TOL: f64 = 1e-6;

/// Crank–Nicolson integrator for `i∂ψ/∂t = −ψ″/2m + Vψ` with second-order
/// differences and ψ = 0 just outside the grid.
#[derive(Debug, Clone)]
pub struct DirectEvolver {
    grid: UniformGrid,
    potential: Vec<Complex64>,
    mass: f64,
    dt: f64,
    psi: Vec<Complex64>,
    time: f64,
    /// `(t, d/dt ∫|ψ|², 2∫Im V|ψ|²)` per step, evaluated at the step midpoint.
    pub balance: Vec<(f64, f64, f64)>,
}

impl DirectEvolver {
    pub fn new(
        grid: UniformGrid,
        initial: Vec<Complex64>,
        pot: &PiecewisePotential,
        params: &PhysicalParams,
        dt: f64,
    ) -> Result<Self> {
        if initial.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-point grid",
                initial.len(),
                grid.n
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        // V averaged over each node's dual cell
        let h = 0.5 * grid.dx;
        let potential = (0..grid.n)
            .map(|i| pot.cell_average(grid.x(i) - h, grid.x(i) + h))
            .collect();
        Ok(Self {
            grid,
            potential,
            mass: params.mass,
            dt,
            psi: initial,
            time: 0.0,
            balance: Vec::new(),
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn values(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn field(&self) -> Result<WaveField> {
        WaveField::new(self.grid, self.psi.clone(), self.time)
    }

    fn kinetic(&self) -> f64 {
        1.0 / (2.0 * self.mass * self.grid.dx * self.grid.dx)
    }

    fn discrete_norm(&self, v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    /// Applies the finite-difference Hamiltonian.
    pub fn apply_hamiltonian(&self, v: &[Complex64]) -> Vec<Complex64> {
        let kin = self.kinetic();
        let n = v.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { v[i - 1] } else { Complex64::new(0.0, 0.0) };
                let right = if i + 1 < n { v[i + 1] } else { Complex64::new(0.0, 0.0) };
                (2.0 * kin + self.potential[i]) * v[i] - kin * (left + right)
            })
            .collect()
    }

    fn solve_shifted(&self, diag_shift: Complex64, scale: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        // (diag_shift + scale·H) x = rhs
        let kin = self.kinetic();
        let n = self.grid.n;
        let diag: Vec<Complex64> = self
            .potential
            .iter()
            .map(|v| diag_shift + scale * (2.0 * kin + v))
            .collect();
        let off = vec![-scale * kin; n - 1];
        solve_tridiagonal(&off, &diag, &off, rhs)
    }

    pub fn step(&mut self) -> Result<()> {
        let half = I * (0.5 * self.dt);
        let h_psi = self.apply_hamiltonian(&self.psi);
        let rhs: Vec<Complex64> = self.psi.iter().zip(&h_psi).map(|(p, hp)| p - half * hp).collect();
        let next = self.solve_shifted(Complex64::new(1.0, 0.0), half, &rhs)?;
        let before = self.discrete_norm(&self.psi);
        let after = self.discrete_norm(&next);
        let source: f64 = self
            .psi
            .iter()
            .zip(&next)
            .zip(&self.potential)
            .map(|((a, b), v)| 2.0 * v.im * (0.25 * (a + b).norm_sqr()))
            .sum::<f64>()
            * self.grid.dx;
        let rate = (after - before) / self.dt;
        let drift = (rate - source).abs();
        if !(drift <= STABILITY_TOL * after.max(before).max(f64::MIN_POSITIVE)) {
            return Err(Error::Stability { drift });
        }
        self.balance.push((self.time + 0.5 * self.dt, rate, source));
        self.psi = next;
        self.time += self.dt;
        Ok(())
    }

    /// Steps until `t` (to within half a step).
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        let steps = ((t - self.time) / self.dt).round();
        for _ in 0..(steps.max(0.0) as usize) {
            self.step()?;
        }
        Ok(())
    }

    /// Eigenpair of the discrete Hamiltonian nearest `sigma`, by shifted
    /// inverse iteration from `seed`.
    pub fn discrete_mode(&self, sigma: Complex64, seed: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
        let mut v = seed.to_vec();
        let mut energy = sigma;
        for it in 0..100 {
            let w = self.solve_shifted(-sigma, Complex64::new(1.0, 0.0), &v)?;
            let scale = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let w: Vec<Complex64> = w.iter().map(|z| z / scale).collect();
            let hw = self.apply_hamiltonian(&w);
            let num: Complex64 = w.iter().zip(&hw).map(|(a, b)| a * b).sum();
            let den: Complex64 = w.iter().map(|a| a * a).sum();
            let e_new = num / den;
            let res: f64 = hw
                .iter()
                .zip(&w)
                .map(|(h, x)| (h - e_new * x).norm_sqr())
                .sum::<f64>()
                .sqrt();
            v = w;
            energy = e_new;
            if res < 1e-10 * e_new.norm().max(1.0) {
                return Ok((energy, v));
            }
            if it == 99 {
                break;
            }
        }
        Err(Error::NonConvergence {
            context: "discrete localized mode".into(),
            iterations: 100,
            last: energy,
        })
    }

    /// Removes the components along discrete modes using the bilinear
    /// c-product (the discrete Hamiltonian is complex symmetric). Returns
    /// the removed coefficients.
    pub fn remove_modes(&mut self, modes: &[Vec<Complex64>]) -> Vec<Complex64> {
        let mut coeffs = Vec::with_capacity(modes.len());
        for m in modes {
            let num: Complex64 = m.iter().zip(&self.psi).map(|(a, b)| a * b).sum();
            let den: Complex64 = m.iter().map(|a| a * a).sum();
            let c = num / den;
            for (p, v) in self.psi.iter_mut().zip(m) {
                *p -= c * v;
            }
            coeffs.push(c);
        }
        coeffs
    }
}

fn check_box(p: &GaussianPacket, params: &PhysicalParams, t_final: f64, cfg: &DirectConfig) -> Result<UniformGrid> {
    let (lo, hi) = p.support();
    let travel = p.p0 / params.mass * t_final;
    let need_lo = lo.min(lo + travel);
    let need_hi = hi.max(hi + travel);
    if cfg.box_lo > need_lo || cfg.box_hi < need_hi {
        return Err(Error::InvalidParameter(format!(
            "box [{}, {}] must contain [{need_lo:.3}, {need_hi:.3}]",
            cfg.box_lo, cfg.box_hi
        )));
    }
    UniformGrid::spanning(cfg.box_lo, cfg.box_hi, cfg.dx)
}

/// Direct evolution with snapshots at `times` (ascending, ≥ 0).
pub fn evolve_direct_snapshots(
    p: &GaussianPacket,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    times: &[f64],
    cfg: &DirectConfig,
) -> Result<Vec<WaveField>> {
    Ok(evolve_direct_with(p, pot, params, times, cfg, false)?.0)
}

/// Direct evolution with the packet's components along the discrete
/// localized modes removed first. Returns the snapshots, the removed
/// coefficients and the discrete mode energies.
pub fn evolve_direct_without_localized(
    p: &GaussianPacket,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    times: &[f64],
    cfg: &DirectConfig,
) -> Result<(Vec<WaveField>, Vec<(Complex64, Complex64)>)> {
    evolve_direct_with(p, pot, params, times, cfg, true)
}

fn evolve_direct_with(
    p: &GaussianPacket,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    times: &[f64],
    cfg: &DirectConfig,
    project: bool,
) -> Result<(Vec<WaveField>, Vec<(Complex64, Complex64)>)> {
    if times.is_empty() || times.windows(2).any(|w| w[1] < w[0]) || times[0] < 0.0 {
        return Err(Error::InvalidParameter(
            "snapshot times must be ascending and >= 0".into(),
        ));
    }
    let grid = check_box(p, params, *times.last().expect("nonempty"), cfg)?;
    let initial: Vec<Complex64> = (0..grid.n).map(|i| gaussian_packet_sample(p, grid.x(i))).collect();
    let mut ev = DirectEvolver::new(grid, initial, pot, params, cfg.dt)?;
    let mut removed = Vec::new();
    if project {
        let shift = pot.left_edge();
        let states = localized_states_for(pot, params)?;
        let mut modes = Vec::with_capacity(states.len());
        let mut energies = Vec::with_capacity(states.len());
        for s in &states {
            let seed: Vec<Complex64> = (0..grid.n).map(|i| s.value_at(grid.x(i) - shift)).collect();
            let (e, v) = ev.discrete_mode(s.energy, &seed)?;
            modes.push(v);
            energies.push(e);
        }
        let coeffs = ev.remove_modes(&modes);
        removed = energies.into_iter().zip(coeffs).collect();
    }
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        ev.advance_to(t)?;
        out.push(ev.field()?);
    }
    Ok((out, removed))
}

pub fn evolve_direct(
    p: &GaussianPacket,
    pot: &PiecewisePotential,
    params: &PhysicalParams,
    t_final: f64,
    cfg: &DirectConfig,
) -> Result<WaveField> {
    Ok(evolve_direct_snapshots(p, pot, params, &[t_final], cfg)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationFactors {
    /// Peak |ψ| right of the barrier over the reference amplitude.
    pub transmitted: f64,
    /// Peak |ψ| left of the barrier over the reference amplitude.
    pub reflected: f64,
}

impl AmplificationFactors {
    /// The same ratios for the density |ψ|².
    pub fn density(&self) -> (f64, f64) {
        (self.transmitted.powi(2), self.reflected.powi(2))
    }
}

/// Lump peaks either side of `barrier` relative to `reference` (the initial
/// peak amplitude). Fails if |ψ| at a barrier edge exceeds 10% of that
/// side's peak.
pub fn amplification_factors(field: &WaveField, barrier: (f64, f64), reference: f64) -> Result<AmplificationFactors> {
    let mut right_peak: f64 = 0.0;
    let mut left_peak: f64 = 0.0;
    let mut edge_left: f64 = 0.0;
    let mut edge_right: f64 = 0.0;
    let half = 0.5 * field.grid.dx;
    for (i, v) in field.values.iter().enumerate() {
        let x = field.grid.x(i);
        let a = v.norm();
        if x > barrier.1 {
            right_peak = right_peak.max(a);
        } else if x < barrier.0 {
            left_peak = left_peak.max(a);
        }
        if (x - barrier.0).abs() <= half {
            edge_left = edge_left.max(a);
        }
        if (x - barrier.1).abs() <= half {
            edge_right = edge_right.max(a);
        }
    }
    if edge_right > 0.1 * right_peak {
        return Err(Error::NotSeparated {
            side: "transmitted",
            ratio: edge_right / right_peak,
        });
    }
    if edge_left > 0.1 * left_peak {
        return Err(Error::NotSeparated {
            side: "reflected",
            ratio: edge_left / left_peak,
        });
    }
    Ok(AmplificationFactors {
        transmitted: right_peak / reference,
        reflected: left_peak / reference,
    })
}
