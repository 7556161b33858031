use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::domain::{Arm, Domain2D, GridField};
use crate::error::{Error, Result};
use crate::tol;

/// Discrete harmonic conjugate of `Re u`.
///
/// `v` first lives on lattice cells whose four corners carry `u`: crossing
/// the horizontal edge `P → P+h` upward adds `u(P+h) − u(P)`, crossing the
/// vertical edge `P → P+ih` to the right adds `−(u(P+ih) − u(P))`. The
/// increments are summed along a breadth-first spanning tree of cells; the
/// circulation around a node is its 5-point Laplacian, so the remaining
/// (non-tree) edges measure the periods. Node values average the adjacent
/// cells shifted to the node by a second-order Taylor step (exact on
/// quadratics), and the node nearest the interior centroid is set to zero.
pub fn harmonic_conjugate(u: &GridField, dom: &Domain2D) -> Result<GridField> {
    let lat = *dom.lattice();
    if *u.lattice() != lat {
        return Err(Error::InvalidArgument("field and domain lattices differ".into()));
    }
    let defined = u.defined();
    let uval: Vec<f64> = u.values().iter().map(|z| z.re).collect();
    let scale = u.iter().map(|(_, z)| z.re.abs()).fold(1.0, f64::max);

    // 5-point residual on nodes whose stencil is the plain 5-point one
    let mut lap: f64 = 0.0;
    for (k, &idx) in dom.interior().iter().enumerate() {
        let arms = dom.arms(k);
        if arms.iter().all(|a| matches!(a, Arm::Node(_)))
            && arms.iter().all(|a| matches!(a, Arm::Node(n) if defined[*n]))
        {
            let s: f64 = arms.iter().map(|a| if let Arm::Node(n) = a { uval[*n] } else { 0.0 }).sum();
            lap = lap.max((s - 4.0 * uval[idx]).abs() / 4.0);
        }
    }
    if lap > tol::HARMONIC_RESIDUAL * scale {
        return Err(Error::NotHarmonic { residual: lap });
    }

    let (cx, cy) = (lat.nx.saturating_sub(1), lat.ny.saturating_sub(1));
    let node = |i: usize, j: usize| lat.index(i, j);
    let active: Vec<bool> = (0..cx * cy)
        .map(|c| {
            let (i, j) = (c % cx, c / cx);
            defined[node(i, j)] && defined[node(i + 1, j)] && defined[node(i, j + 1)] && defined[node(i + 1, j + 1)]
        })
        .collect();
    // increment from cell c to its neighbour in direction d (0 right, 1 up)
    let step = |c: usize, d: usize| -> f64 {
        let (i, j) = (c % cx, c / cx);
        if d == 0 {
            -(uval[node(i + 1, j + 1)] - uval[node(i + 1, j)])
        } else {
            uval[node(i + 1, j + 1)] - uval[node(i, j + 1)]
        }
    };

    let mut cell_v = alloc::vec![f64::NAN; cx * cy];
    let mut period: f64 = 0.0;
    for start in 0..cx * cy {
        if !active[start] || !cell_v[start].is_nan() {
            continue;
        }
        cell_v[start] = 0.0;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c % cx, c / cx);
            let mut nbrs: [(Option<usize>, f64); 4] = [(None, 0.0); 4];
            if i + 1 < cx {
                nbrs[0] = (Some(c + 1), step(c, 0));
            }
            if i > 0 {
                nbrs[1] = (Some(c - 1), -step(c - 1, 0));
            }
            if j + 1 < cy {
                nbrs[2] = (Some(c + cx), step(c, 1));
            }
            if j > 0 {
                nbrs[3] = (Some(c - cx), -step(c - cx, 1));
            }
            for (nb, inc) in nbrs {
                let Some(nb) = nb else { continue };
                if !active[nb] {
                    continue;
                }
                let want = cell_v[c] + inc;
                if cell_v[nb].is_nan() {
                    cell_v[nb] = want;
                    queue.push_back(nb);
                } else {
                    period = period.max((cell_v[nb] - want).abs());
                }
            }
        }
    }
    if period > tol::PERIOD * scale {
        return Err(Error::MultiplyConnected { period });
    }

    let h = lat.h;
    let mut values = alloc::vec![Complex64::new(0.0, 0.0); lat.len()];
    let mut vdef = alloc::vec![false; lat.len()];
    for idx in 0..lat.len() {
        if !defined[idx] {
            continue;
        }
        let (i, j) = lat.coords(idx);
        // v_xy = u_xx = −u_yy from whichever 3-point difference is available
        let def = |n: Option<usize>| n.filter(|&n| defined[n]);
        let centered = |d0: usize, d1: usize| {
            let (a, b) = (def(lat.neighbor(idx, d0))?, def(lat.neighbor(idx, d1))?);
            Some((uval[a] + uval[b] - 2.0 * uval[idx]) / (h * h))
        };
        let one_sided = |d: usize| {
            let a = def(lat.neighbor(idx, d))?;
            let b = def(lat.neighbor(a, d))?;
            Some((uval[b] - 2.0 * uval[a] + uval[idx]) / (h * h))
        };
        let vxy = centered(0, 1)
            .or_else(|| centered(2, 3).map(|v| -v))
            .or_else(|| one_sided(0).or_else(|| one_sided(1)))
            .or_else(|| one_sided(2).or_else(|| one_sided(3)).map(|v| -v))
            .unwrap_or(0.0);
        let mut sum = 0.0;
        let mut count = 0;
        for (di, dj) in [(0i64, 0i64), (-1, 0), (0, -1), (-1, -1)] {
            let (ci, cj) = (i as i64 + di, j as i64 + dj);
            if ci < 0 || cj < 0 || ci >= cx as i64 || cj >= cy as i64 {
                continue;
            }
            let c = cj as usize * cx + ci as usize;
            if !active[c] {
                continue;
            }
            let (ci, cj) = (ci as usize, cj as usize);
            let ux = (uval[node(ci + 1, cj)] - uval[node(ci, cj)] + uval[node(ci + 1, cj + 1)]
                - uval[node(ci, cj + 1)])
                / (2.0 * h);
            let uy = (uval[node(ci, cj + 1)] - uval[node(ci, cj)] + uval[node(ci + 1, cj + 1)]
                - uval[node(ci + 1, cj)])
                / (2.0 * h);
            // node minus cell center, in units of h/2
            let (sx, sy) = (if di == 0 { -1.0 } else { 1.0 }, if dj == 0 { -1.0 } else { 1.0 });
            sum += cell_v[c] + 0.5 * h * (sx * -uy + sy * ux) + 0.25 * h * h * sx * sy * vxy;
            count += 1;
        }
        if count > 0 {
            values[idx] = Complex64::new(sum / count as f64, 0.0);
            vdef[idx] = true;
        }
    }

    let centroid = dom.centroid();
    let anchor = (0..lat.len())
        .filter(|&i| vdef[i])
        .min_by(|&a, &b| (lat.point_of(a) - centroid).norm().total_cmp(&(lat.point_of(b) - centroid).norm()))
        .ok_or(Error::GridTooSmall)?;
    let shift = values[anchor];
    for (v, &d) in values.iter_mut().zip(&vdef) {
        if d {
            *v -= shift;
        }
    }
    GridField::new(u.domain().clone(), values, vdef)
}

/// `max(|u_x − v_y| + |u_y + v_x|)` by central differences over nodes whose
/// four neighbours carry both fields.
pub fn cauchy_riemann_residual(u: &GridField, v: &GridField) -> f64 {
    let lat = *u.lattice();
    let h = lat.h;
    let mut worst: f64 = 0.0;
    for idx in 0..lat.len() {
        let nb: Option<Vec<(f64, f64)>> = (0..4)
            .map(|d| {
                let n = lat.neighbor(idx, d)?;
                Some((u.at(n)?.re, v.at(n)?.re))
            })
            .collect();
        let Some(nb) = nb else { continue };
        if u.at(idx).is_none() || v.at(idx).is_none() {
            continue;
        }
        let ux = (nb[0].0 - nb[1].0) / (2.0 * h);
        let uy = (nb[2].0 - nb[3].0) / (2.0 * h);
        let vx = (nb[0].1 - nb[1].1) / (2.0 * h);
        let vy = (nb[2].1 - nb[3].1) / (2.0 * h);
        worst = worst.max((ux - vy).abs() + (uy + vx).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::domain::Lattice;
    use crate::harmonic::solve_dirichlet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc() -> Domain2D {
        Domain2D::disc(c(0.0, 0.0), 1.0, 1.0 / 32.0).unwrap()
    }

    #[test]
    fn conjugate_of_x_is_y() {
        let d = disc();
        let u = GridField::from_fn(&d, |z| c(z.re, 0.0));
        let v = harmonic_conjugate(&u, &d).unwrap();
        for (i, val) in v.iter() {
            assert!((val.re - d.lattice().point_of(i).im).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_of_re_z2() {
        let d = disc();
        let u = GridField::from_fn(&d, |z| c(z.re * z.re - z.im * z.im, 0.0));
        let v = harmonic_conjugate(&u, &d).unwrap();
        let mut worst: f64 = 0.0;
        for (i, val) in v.iter() {
            let p = d.lattice().point_of(i);
            worst = worst.max((val.re - 2.0 * p.re * p.im).abs());
        }
        assert!(worst < 1e-3, "{worst}");
        let h = d.h();
        assert!(cauchy_riemann_residual(&u, &v) < 10.0 * h * h * u.max_abs());
    }

    #[test]
    fn constant_has_zero_conjugate() {
        let d = disc();
        let u = solve_dirichlet(&d, &d.sample_boundary(|_| c(3.0, 0.0))).unwrap();
        let v = harmonic_conjugate(&u, &d).unwrap();
        assert!(v.iter().all(|(_, z)| z.re == 0.0));
    }

    #[test]
    fn rejects_non_harmonic() {
        let d = disc();
        let u = GridField::from_fn(&d, |z| c(z.norm_sqr(), 0.0));
        assert!(matches!(harmonic_conjugate(&u, &d), Err(Error::NotHarmonic { .. })));
    }

    #[test]
    fn annulus_period_detected() {
        // log|z| on an annulus: harmonic, conjugate arg z has period 2π
        let lat = Lattice::centered(c(0.0, 0.0), 0.05, 24);
        let mask: Vec<bool> = (0..lat.len())
            .map(|i| {
                let r = lat.point_of(i).norm();
                r > 0.3 && r < 1.1
            })
            .collect();
        let d = Domain2D::from_mask(lat, &mask).unwrap();
        let g = d.sample_boundary(|z| c(z.norm().ln(), 0.0));
        let u = solve_dirichlet(&d, &g).unwrap();
        assert!(matches!(harmonic_conjugate(&u, &d), Err(Error::MultiplyConnected { .. })));
    }
}
