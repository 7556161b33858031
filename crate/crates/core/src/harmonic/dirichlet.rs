use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::domain::{Arm, Domain2D, GridField};
use crate::error::{Error, Result};
use crate::linalg::BandLu;
use crate::tol;

/// Band storage above this many doubles switches to SOR.
const DIRECT_FOOTPRINT: usize = 8_000_000;

/// SOR stopping residual relative to `max|g|`.
const SOR_TARGET: f64 = 1e-13;

/// One normalized stencil row: `u_P − Σ w·u_nb − Σ w_b·g_b = 0`.
struct Row {
    nodes: [(usize, f64); 4],
    n_nodes: usize,
    bdry: [(usize, f64); 4],
    n_bdry: usize,
}

/// Shortley–Weller rows: along each axis with arms `s₊h`, `s₋h` the second
/// difference is `2/(s₊s₋(s₊+s₋)h²)·(s₋u₊ + s₊u₋ − (s₊+s₋)u_P)`, which is
/// exact on quadratics and keeps nonnegative weights (maximum principle).
fn stencil(dom: &Domain2D) -> Vec<Row> {
    (0..dom.interior().len())
        .map(|k| {
            let arms = dom.arms(k);
            let s = |a: &Arm| match a {
                Arm::Node(_) => 1.0,
                Arm::Boundary { s, .. } => *s,
            };
            let mut w = [0.0; 4];
            let mut diag = 0.0;
            for axis in 0..2 {
                let (sp, sm) = (s(&arms[2 * axis]), s(&arms[2 * axis + 1]));
                w[2 * axis] = 2.0 / (sp * (sp + sm));
                w[2 * axis + 1] = 2.0 / (sm * (sp + sm));
                diag += 2.0 / (sp * sm);
            }
            let mut row = Row { nodes: [(0, 0.0); 4], n_nodes: 0, bdry: [(0, 0.0); 4], n_bdry: 0 };
            for (d, arm) in arms.iter().enumerate() {
                match arm {
                    Arm::Node(nb) => {
                        row.nodes[row.n_nodes] = (dom.slot(*nb).expect("interior"), w[d] / diag);
                        row.n_nodes += 1;
                    }
                    Arm::Boundary { att, .. } => {
                        row.bdry[row.n_bdry] = (*att, w[d] / diag);
                        row.n_bdry += 1;
                    }
                }
            }
            row
        })
        .collect()
}

fn residual(rows: &[Row], u: &[f64], b: &[f64]) -> f64 {
    rows.iter()
        .zip(u)
        .zip(b)
        .map(|((r, &up), &bp)| {
            let s: f64 = r.nodes[..r.n_nodes].iter().map(|&(k, w)| w * u[k]).sum();
            (up - s - bp).abs()
        })
        .fold(0.0, f64::max)
}

fn rhs(rows: &[Row], g: &[f64]) -> Vec<f64> {
    rows.iter().map(|r| r.bdry[..r.n_bdry].iter().map(|&(a, w)| w * g[a]).sum()).collect()
}

fn solve_direct(rows: &[Row], parts: &mut [Vec<f64>]) -> bool {
    let n = rows.len();
    let band = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.nodes[..r.n_nodes].iter().map(move |&(k, _)| k.abs_diff(i)))
        .max()
        .unwrap_or(0);
    if BandLu::footprint(n, band, band) > DIRECT_FOOTPRINT {
        return false;
    }
    let mut lu = BandLu::new(n, band, band);
    for (i, r) in rows.iter().enumerate() {
        lu.add(i, i, 1.0);
        for &(k, w) in &r.nodes[..r.n_nodes] {
            lu.add(i, k, -w);
        }
    }
    if !lu.factorize() {
        return false;
    }
    for b in parts.iter_mut() {
        lu.solve(b);
    }
    true
}

/// Successive over-relaxation from `u = 0`; returns the final residual.
fn solve_sor(rows: &[Row], b: &[f64], u: &mut [f64], target: f64, omega: f64, cap: usize) -> Result<()> {
    let mut last = f64::INFINITY;
    for sweep in 0..cap {
        for (i, r) in rows.iter().enumerate() {
            let s: f64 = r.nodes[..r.n_nodes].iter().map(|&(k, w)| w * u[k]).sum();
            u[i] += omega * (s + b[i] - u[i]);
        }
        if sweep % 10 == 9 {
            last = residual(rows, u, b);
            if last <= target {
                return Ok(());
            }
            if !last.is_finite() {
                break;
            }
        }
    }
    Err(Error::SolverDivergence { iterations: cap, residual: last })
}

/// Discrete harmonic function with boundary data `g` given per attachment
/// (see [`Domain2D::sample_boundary`]). Real and imaginary parts are solved
/// independently to a stencil residual below `1e-10·max|g|`.
pub fn solve_dirichlet(dom: &Domain2D, g: &[Complex64]) -> Result<GridField> {
    if g.len() != dom.attachments().len() {
        return Err(Error::DimensionMismatch { expected: dom.attachments().len(), found: g.len() });
    }
    let components = dom.components();
    if components != 1 {
        return Err(Error::DisconnectedDomain { components });
    }
    let gmax = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // solving for u − mean(g) makes constant data exact
    let mean = if g.is_empty() { Complex64::new(0.0, 0.0) } else { g.iter().sum::<Complex64>() / g.len() as f64 };
    let gre: Vec<f64> = g.iter().map(|v| v.re - mean.re).collect();
    let gim: Vec<f64> = g.iter().map(|v| v.im - mean.im).collect();
    let rows = stencil(dom);
    let b = [rhs(&rows, &gre), rhs(&rows, &gim)];
    let target = tol::DIRICHLET_RESIDUAL * gmax;

    let mut parts = [b[0].clone(), b[1].clone()];
    let direct =
        solve_direct(&rows, &mut parts) && parts.iter().zip(&b).all(|(u, bb)| residual(&rows, u, bb) <= target);
    if !direct {
        let lat = dom.lattice();
        let omega = 2.0 / (1.0 + (PI / lat.nx.max(lat.ny) as f64).sin());
        let cap = 100 * lat.nx.max(lat.ny) + 1000;
        for (u, bb) in parts.iter_mut().zip(&b) {
            u.iter_mut().for_each(|x| *x = 0.0);
            if bb.iter().all(|&x| x == 0.0) {
                continue;
            }
            // the error is about residual/h², so iterate well past the contract
            solve_sor(&rows, bb, u, SOR_TARGET * gmax, omega, cap)?;
        }
    }

    let lat = *dom.lattice();
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); lat.len()];
    let mut defined = alloc::vec![false; lat.len()];
    for (k, &idx) in dom.interior().iter().enumerate() {
        values[idx] = mean + Complex64::new(parts[0][k], parts[1][k]);
        defined[idx] = true;
    }
    for &(idx, att) in dom.boundary_nodes() {
        values[idx] = g[att];
        defined[idx] = true;
    }
    GridField::new(dom.clone(), values, defined)
}

/// Largest normalized stencil residual of the real and imaginary parts of
/// `u` against boundary data `g`.
pub fn dirichlet_residual(u: &GridField, g: &[Complex64]) -> f64 {
    let dom = u.domain();
    let rows = stencil(dom);
    let mut worst: f64 = 0.0;
    for part in 0..2 {
        let pick = |z: Complex64| if part == 0 { z.re } else { z.im };
        let gv: Vec<f64> = g.iter().map(|&z| pick(z)).collect();
        let uv: Vec<f64> = dom.interior().iter().map(|&i| pick(u.values()[i])).collect();
        worst = worst.max(residual(&rows, &uv, &rhs(&rows, &gv)));
    }
    worst
}
