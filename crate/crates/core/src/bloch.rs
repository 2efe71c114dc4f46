//! Bloch bands of periodic repetitions of a unit cell.
//!
//! The dispersion relation is `lhs(E) = cos(Kd)` with `d` the cell width.
//! For PT-symmetric cells at real E, `lhs = F(E) = cos(kd + θ)/|T|`; bands
//! merge into complex-conjugate pairs where a stationary value of F falls
//! inside (−1, 1).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{is_pt_symmetric, momentum_in_region, principal_sqrt, PhysicalParams, PiecewisePotential};
use crate::numerics::{bisect, complex_newton, golden_max, linspace};
use crate::output::{csv_string, fmt_g12};
use crate::scattering::{transfer_matrix, TransferMatrix};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// |T| below which the dispersion relation is not evaluated.
pub const T_VANISH_TOL: f64 = 1e-13;

/// Stationary values with |F| up to 1 + this count as branch points.
pub const BRANCH_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub energy: Complex64,
    pub lhs: Complex64,
    pub k_exterior: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellAmplitudes {
    pub t: Complex64,
    pub r_right: Complex64,
    pub r_left: Complex64,
}

fn cell_width(cell: &PiecewisePotential) -> Result<f64> {
    let d = cell.width();
    if !(d > 0.0) {
        return Err(Error::InvalidParameter("unit cell must have positive width".into()));
    }
    Ok(d)
}

/// `T`, `R_r` (reflection for incidence from the left) and `R_l` (from the
/// right), continued to complex E.
pub fn cell_amplitudes(
    cell: &PiecewisePotential,
    energy: Complex64,
    params: &PhysicalParams,
) -> Result<CellAmplitudes> {
    let m: TransferMatrix = transfer_matrix(cell, energy, params)?;
    // T is the same from both sides; 1/M22 avoids the cancellation in det M
    let t = 1.0 / m.m22;
    if !(t.norm() >= T_VANISH_TOL) {
        return Err(Error::TransmissionVanishes {
            energy,
            magnitude: t.norm(),
        });
    }
    Ok(CellAmplitudes {
        t,
        r_right: -m.m21 / m.m22,
        r_left: m.m12 / m.m22,
    })
}

/// `(T² − R_r R_l) e^{ikd}/(2T) + e^{−ikd}/(2T)`.
pub fn dispersion_lhs(
    cell: &PiecewisePotential,
    energy: Complex64,
    params: &PhysicalParams,
) -> Result<DispersionSample> {
    let d = cell_width(cell)?;
    let m = transfer_matrix(cell, energy, params)?;
    let t = 1.0 / m.m22;
    if !(t.norm() >= T_VANISH_TOL) {
        return Err(Error::TransmissionVanishes {
            energy,
            magnitude: t.norm(),
        });
    }
    let k = momentum_in_region(energy, Complex64::new(0.0, 0.0), params).value;
    let phase = (I * k * d).exp();
    // with det M = 1 the amplitude form reduces to this, without dividing by T
    let lhs = 0.5 * (m.m11 * phase + m.m22 / phase);
    Ok(DispersionSample {
        energy,
        lhs,
        k_exterior: k,
    })
}

/// `F(E) = cos(kd + θ)/|T|` at real E, θ = arg T.
pub fn reduced_dispersion(cell: &PiecewisePotential, energy: f64, params: &PhysicalParams) -> Result<f64> {
    let d = cell_width(cell)?;
    let amp = cell_amplitudes(cell, Complex64::new(energy, 0.0), params)?;
    let k = principal_sqrt(Complex64::new(params.two_m() * energy, 0.0)).re;
    Ok((k * d + amp.t.arg()).cos() / amp.t.norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtConjugationCoefficients {
    pub b: Complex64,
    pub c: Complex64,
}

/// Checks `T* = T/(T² − R_r R_l)` at real E and returns `B = R_r*`, `C = T*`.
pub fn pt_identity_check(
    cell: &PiecewisePotential,
    energy: f64,
    params: &PhysicalParams,
) -> Result<PtConjugationCoefficients> {
    let amp = cell_amplitudes(cell, Complex64::new(energy, 0.0), params)?;
    let denom = amp.t * amp.t - amp.r_right * amp.r_left;
    let residual = (amp.t.conj() - amp.t / denom).norm();
    if !(residual < 1e-10) {
        return Err(Error::IdentityViolation { residual });
    }
    Ok(PtConjugationCoefficients {
        b: amp.r_right.conj(),
        c: amp.t.conj(),
    })
}

/// Closed-form `cos(2Ka)` for the square lattice `[iV0][−iV0]` of cell width 2a.
pub fn square_lattice_dispersion(energy: Complex64, v0: f64, a: f64, params: &PhysicalParams) -> Result<Complex64> {
    let kp = principal_sqrt(params.two_m() * (energy - Complex64::new(0.0, v0)));
    let km = principal_sqrt(params.two_m() * (energy + Complex64::new(0.0, v0)));
    let prod = kp * km;
    if prod.norm() < 1e-14 {
        return Err(Error::ZeroMomentum { magnitude: prod.norm() });
    }
    Ok(((kp + km) * a).cos() - (kp - km).powi(2) / (2.0 * prod) * (kp * a).sin() * (km * a).sin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    /// Bloch wavenumber in [−π/d, π/d].
    pub k: f64,
    pub energy: Complex64,
    pub band_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub energy: f64,
    pub k_star: f64,
    pub abs_t: f64,
    pub theta: f64,
    /// `(d/2)√(2mE)/π`.
    pub n_half: f64,
    /// F″ at the branch point; negative at a maximum of F.
    pub curvature: f64,
}

/// A stationary point of F with |F| > 1: an ordinary gap edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdge {
    pub energy: f64,
    pub f_value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BranchSearch {
    pub branch_points: Vec<BranchPoint>,
    pub band_edges: Vec<BandEdge>,
}

fn validate_window(window: (f64, f64)) -> Result<()> {
    if !(window.0 > 0.0 && window.1 > window.0 && window.1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "energy window must satisfy 0 < Emin < Emax, got {window:?}"
        )));
    }
    Ok(())
}

/// Grid extrema of `values`, as `(index, is_max)`.
fn grid_extrema(values: &[f64]) -> Vec<(usize, bool)> {
    (1..values.len().saturating_sub(1))
        .filter_map(|i| {
            let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
            if b > a && b >= c {
                Some((i, true))
            } else if b < a && b <= c {
                Some((i, false))
            } else {
                None
            }
        })
        .collect()
}

fn f_or_nan(cell: &PiecewisePotential, e: f64, params: &PhysicalParams) -> f64 {
    reduced_dispersion(cell, e, params).unwrap_or(f64::NAN)
}

/// Stationary points of F on `window`: 8000-point scan plus golden-section
/// refinement to relative 1e-9. Real (Hermitian) cells have no branch points;
/// their touching points with |F| = 1 are band edges.
pub fn find_branch_points(
    cell: &PiecewisePotential,
    params: &PhysicalParams,
    window: (f64, f64),
) -> Result<BranchSearch> {
    find_branch_points_with(cell, params, window, 8000)
}

pub fn find_branch_points_with(
    cell: &PiecewisePotential,
    params: &PhysicalParams,
    window: (f64, f64),
    grid_points: usize,
) -> Result<BranchSearch> {
    validate_window(window)?;
    let d = cell_width(cell)?;
    let hermitian = cell.is_real();
    let grid = linspace(window.0, window.1, grid_points);
    let values: Vec<f64> = grid.par_iter().map(|&e| f_or_nan(cell, e, params)).collect();
    let refined: Vec<(f64, f64, bool)> = grid_extrema(&values)
        .into_par_iter()
        .map(|(i, is_max)| {
            let sign = if is_max { 1.0 } else { -1.0 };
            let (e, v) = golden_max(|x| sign * f_or_nan(cell, x, params), grid[i - 1], grid[i + 1], 1e-9);
            (e, sign * v, is_max)
        })
        .collect();
    let mut out = BranchSearch::default();
    for (e, f, _) in refined {
        if !hermitian && f.abs() <= 1.0 + BRANCH_MARGIN {
            let amp = cell_amplitudes(cell, Complex64::new(e, 0.0), params)?;
            let h = 1e-4 * e.max(1e-3);
            let curvature = (f_or_nan(cell, e + h, params) - 2.0 * f + f_or_nan(cell, e - h, params)) / (h * h);
            out.branch_points.push(BranchPoint {
                energy: e,
                k_star: f.clamp(-1.0, 1.0).acos() / d,
                abs_t: amp.t.norm(),
                theta: amp.t.arg(),
                n_half: 0.5 * d * (params.two_m() * e).sqrt() / std::f64::consts::PI,
                curvature,
            });
        } else {
            out.band_edges.push(BandEdge { energy: e, f_value: f });
        }
    }
    Ok(out)
}

/// Real-E band points for each K. Stationary points of F are located on a
/// 4000-point grid and refined; F is monotone between consecutive ones, so
/// each such branch holds at most one root of `F(E) = cos(Kd)`, bracketed by
/// its endpoints and bisected to 1e-10. Band index = branch number, i.e.
/// 1 + the number of stationary points of F below the root.
pub fn band_solve_real(
    cell: &PiecewisePotential,
    params: &PhysicalParams,
    k_grid: &[f64],
    window: (f64, f64),
) -> Result<Vec<BandPoint>> {
    validate_window(window)?;
    let d = cell_width(cell)?;
    let zone = std::f64::consts::PI / d;
    if let Some(&k) = k_grid.iter().find(|k| k.abs() > zone * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "K = {k} outside the first zone ±{zone}"
        )));
    }
    let grid = linspace(window.0, window.1, 4000);
    let f = |e: f64| {
        dispersion_lhs(cell, Complex64::new(e, 0.0), params)
            .map(|s| s.lhs.re)
            .unwrap_or(f64::NAN)
    };
    let values: Vec<f64> = grid.par_iter().map(|&e| f(e)).collect();
    let stationary: Vec<f64> = grid_extrema(&values)
        .into_par_iter()
        .map(|(i, is_max)| {
            let sign = if is_max { 1.0 } else { -1.0 };
            golden_max(|x| sign * f(x), grid[i - 1], grid[i + 1], 1e-12).0
        })
        .collect();
    let mut nodes = Vec::with_capacity(stationary.len() + 2);
    nodes.push(window.0);
    nodes.extend(stationary.iter().copied());
    nodes.push(window.1);
    let node_values: Vec<f64> = nodes.iter().map(|&e| f(e)).collect();
    let per_k: Vec<Result<Vec<BandPoint>>> = k_grid
        .par_iter()
        .map(|&k| {
            let target = (k * d).cos();
            let mut pts = Vec::new();
            for b in 0..nodes.len() - 1 {
                let (ga, gb) = (node_values[b] - target, node_values[b + 1] - target);
                if !(ga.is_finite() && gb.is_finite()) || ga * gb > 0.0 {
                    continue;
                }
                // a root exactly on a shared node belongs to the lower branch
                if ga == 0.0 && b > 0 {
                    continue;
                }
                let e = if ga == 0.0 {
                    nodes[b]
                } else if gb == 0.0 {
                    nodes[b + 1]
                } else {
                    bisect(|e| f(e) - target, nodes[b], nodes[b + 1], 1e-10)?
                };
                pts.push(BandPoint {
                    k,
                    energy: Complex64::new(e, 0.0),
                    band_index: b + 1,
                });
            }
            Ok(pts)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_k {
        out.extend(r?);
    }
    out.sort_by(|a, b| a.band_index.cmp(&b.band_index).then(a.k.total_cmp(&b.k)));
    Ok(out)
}

/// Newton solve of `lhs(E) = cos(Kd)` from `seed`. Returns the root and its
/// conjugate partner.
pub fn band_solve_complex(
    cell: &PiecewisePotential,
    params: &PhysicalParams,
    k: f64,
    seed: Complex64,
    band_index: usize,
) -> Result<(BandPoint, BandPoint)> {
    let d = cell_width(cell)?;
    let target = Complex64::new((k * d).cos(), 0.0);
    let root = complex_newton(
        |e| Ok(dispersion_lhs(cell, e, params)?.lhs - target),
        seed,
        1e-11,
        200,
        &format!("complex band at K = {k}"),
    )?;
    let root = if root.im.abs() < 1e-10 {
        Complex64::new(root.re, 0.0)
    } else {
        root
    };
    Ok((
        BandPoint {
            k,
            energy: root,
            band_index,
        },
        BandPoint {
            k,
            energy: root.conj(),
            band_index: band_index + 1,
        },
    ))
}

/// Follows the complex-conjugate pair born at `bp` over the K values on its
/// complex side, seeding each solve from the previous one. The first seed is
/// `E* ± i√(2(cos Kd − F*)/F″)`.
pub fn complex_band_from_branch_point(
    cell: &PiecewisePotential,
    params: &PhysicalParams,
    bp: &BranchPoint,
    k_values: &[f64],
) -> Result<Vec<(BandPoint, BandPoint)>> {
    let d = cell_width(cell)?;
    let f_star = (bp.k_star * d).cos();
    // at a minimum of F the pair lives at larger K, at a maximum at smaller K
    let toward_larger = bp.curvature > 0.0;
    let mut ks: Vec<f64> = k_values
        .iter()
        .copied()
        .filter(|&k| {
            let k = k.abs();
            if toward_larger {
                k > bp.k_star
            } else {
                k < bp.k_star
            }
        })
        .collect();
    ks.sort_by(|a, b| (a.abs() - bp.k_star).abs().total_cmp(&(b.abs() - bp.k_star).abs()));
    let band_index = 1 + find_branch_index(cell, params, bp)?;
    let mut out = Vec::with_capacity(ks.len());
    let mut prev: Option<Complex64> = None;
    for k in ks {
        let seed = match prev {
            Some(e) => e,
            None => {
                let ratio = 2.0 * ((k * d).cos() - f_star) / bp.curvature;
                Complex64::new(bp.energy, 0.0) + principal_sqrt(Complex64::new(ratio, 0.0))
            }
        };
        let mut pair = band_solve_complex(cell, params, k, seed, band_index)?;
        if pair.0.energy.im < 0.0 {
            std::mem::swap(&mut pair.0.energy, &mut pair.1.energy);
        }
        prev = Some(pair.0.energy);
        out.push(pair);
    }
    out.sort_by(|a, b| a.0.k.total_cmp(&b.0.k));
    Ok(out)
}

/// Number of stationary points of F below the branch point.
fn find_branch_index(cell: &PiecewisePotential, params: &PhysicalParams, bp: &BranchPoint) -> Result<usize> {
    if bp.energy <= 1e-6 {
        return Ok(0);
    }
    let lo = 1e-6 * bp.energy;
    let hi = bp.energy * (1.0 - 1e-6);
    let grid = linspace(lo, hi, 4000);
    let values: Vec<f64> = grid.iter().map(|&e| f_or_nan(cell, e, params)).collect();
    Ok(grid_extrema(&values).len())
}

/// Whether `cell` satisfies the PT precondition of the reduced relation.
pub fn require_pt(cell: &PiecewisePotential) -> Result<()> {
    if !is_pt_symmetric(cell, 1e-12) {
        return Err(Error::InvalidParameter("unit cell is not PT-symmetric".into()));
    }
    Ok(())
}

pub fn bands_csv(points: &[BandPoint]) -> String {
    csv_string(
        &["band", "K", "ReE", "ImE"],
        points.iter().map(|p| {
            vec![
                p.band_index.to_string(),
                fmt_g12(p.k),
                fmt_g12(p.energy.re),
                fmt_g12(p.energy.im),
            ]
        }),
    )
}

pub fn branch_points_csv(points: &[BranchPoint]) -> String {
    csv_string(
        &["E", "absT", "theta", "n_half", "K_star"],
        points.iter().map(|p| {
            vec![
                fmt_g12(p.energy),
                fmt_g12(p.abs_t),
                fmt_g12(p.theta),
                fmt_g12(p.n_half),
                fmt_g12(p.k_star),
            ]
        }),
    )
}
