use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};

/// Rectangular node lattice; node `(i, j)` sits at `(x0 + i·h, y0 + j·h)`
/// and is stored at `j·nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

/// East, west, north, south.
pub const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

impl Lattice {
    pub fn new(x0: f64, y0: f64, h: f64, nx: usize, ny: usize) -> Self {
        Lattice { x0, y0, h, nx, ny }
    }

    /// Square lattice centered at `c` with `m` nodes on each side of it.
    pub fn centered(c: Complex64, h: f64, m: usize) -> Self {
        let x0 = c.re - m as f64 * h;
        let y0 = c.im - m as f64 * h;
        Lattice::new(x0, y0, h, 2 * m + 1, 2 * m + 1)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    pub fn point_of(&self, idx: usize) -> Complex64 {
        let (i, j) = self.coords(idx);
        self.point(i, j)
    }

    pub fn neighbor(&self, idx: usize, dir: usize) -> Option<usize> {
        let (i, j) = self.coords(idx);
        let (di, dj) = DIRS[dir];
        let ni = i as i64 + di;
        let nj = j as i64 + dj;
        if ni < 0 || nj < 0 || ni >= self.nx as i64 || nj >= self.ny as i64 {
            None
        } else {
            Some(self.index(ni as usize, nj as usize))
        }
    }

    /// Nearest node to `z`, if it lies within the lattice.
    pub fn nearest(&self, z: Complex64) -> Option<usize> {
        let i = ((z.re - self.x0) / self.h).round();
        let j = ((z.im - self.y0) / self.h).round();
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            None
        } else {
            Some(self.index(i as usize, j as usize))
        }
    }
}

/// One stencil arm of an interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arm {
    /// Lattice index of an interior neighbour at distance `h`.
    Node(usize),
    /// Boundary reached at distance `s·h`, `0 < s ≤ 1`.
    Boundary { s: f64, att: usize },
}

/// Point where boundary data is attached: on segment `seg` of the boundary
/// at parameter `t ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attachment {
    pub point: Complex64,
    pub seg: usize,
    pub t: f64,
}

const NONE: u32 = u32::MAX;

/// Planar lattice domain with its boundary.
///
/// A polygon domain has a closed Jordan polyline as boundary, and the
/// stencil arms end where lattice lines cross it. A mask domain's boundary
/// consists of the mask nodes that have a neighbour outside the mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain2D {
    lattice: Lattice,
    boundary: Vec<Complex64>,
    polyline: bool,
    slot: Vec<u32>,
    unknowns: Vec<usize>,
    arms: Vec<[Arm; 4]>,
    attachments: Vec<Attachment>,
    /// Lattice nodes that carry boundary data (mask domains).
    boundary_nodes: Vec<(usize, usize)>,
}

struct Crossing {
    at: f64,
    att: usize,
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let cross = |o: Complex64, p: Complex64, q: Complex64| (p - o).re * (q - o).im - (p - o).im * (q - o).re;
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |p: Complex64, q: Complex64, r: Complex64, v: f64| {
        v == 0.0 && r.re >= p.re.min(q.re) && r.re <= p.re.max(q.re) && r.im >= p.im.min(q.im) && r.im <= p.im.max(q.im)
    };
    on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4)
}

/// Whether the closed polyline through `v` is a simple curve.
pub fn is_jordan(v: &[Complex64]) -> bool {
    let n = v.len();
    if n < 3 || v.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
        return false;
    }
    if (0..n).any(|k| v[k] == v[(k + 1) % n]) {
        return false;
    }
    let bbox = |k: usize| {
        let (a, b) = (v[k], v[(k + 1) % n]);
        (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im))
    };
    let boxes: Vec<_> = (0..n).map(bbox).collect();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = (boxes[i], boxes[j]);
            if a.1 < b.0 || b.1 < a.0 || a.3 < b.2 || b.3 < a.2 {
                continue;
            }
            if adjacent {
                // adjacent edges may only share their common vertex
                let (shared, p, q) = if j == i + 1 { (v[j], v[i], v[(j + 1) % n]) } else { (v[0], v[1], v[n - 1]) };
                let cr = (p - shared).re * (q - shared).im - (p - shared).im * (q - shared).re;
                let dot = (p - shared).re * (q - shared).re + (p - shared).im * (q - shared).im;
                if cr == 0.0 && dot > 0.0 {
                    return false;
                }
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

impl Domain2D {
    /// Domain bounded by the closed polygon `vertices`, on the lattice of
    /// multiples of `h` covering it.
    pub fn polygon(vertices: Vec<Complex64>, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument("grid spacing must be positive".into()));
        }
        if vertices.len() < 3 {
            return Err(Error::NotJordan);
        }
        let minx = vertices.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        let maxx = vertices.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let miny = vertices.iter().map(|p| p.im).fold(f64::INFINITY, f64::min);
        let maxy = vertices.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
        let i0 = (minx / h).floor() - 1.0;
        let j0 = (miny / h).floor() - 1.0;
        let nx = ((maxx / h).ceil() + 1.0 - i0) as usize + 1;
        let ny = ((maxy / h).ceil() + 1.0 - j0) as usize + 1;
        Self::polygon_on(Lattice::new(i0 * h, j0 * h, h, nx, ny), vertices)
    }

    /// Disc of radius `r` about `c`, bounded by the inscribed regular polygon
    /// with `4·⌈2πr/(4h)⌉` vertices; the lattice is centered at `c`.
    pub fn disc(c: Complex64, r: f64, h: f64) -> Result<Self> {
        if !(r > 0.0 && h > 0.0) {
            return Err(Error::InvalidArgument("radius and spacing must be positive".into()));
        }
        let n = 4 * ((2.0 * PI * r / (4.0 * h)).ceil() as usize).max(1);
        let vertices = (0..n).map(|k| c + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64)).collect();
        let m = (r / h).ceil() as usize + 1;
        Self::polygon_on(Lattice::centered(c, h, m), vertices)
    }

    /// Polygon domain on a given lattice that must cover the polygon.
    pub fn polygon_on(lattice: Lattice, vertices: Vec<Complex64>) -> Result<Self> {
        if !is_jordan(&vertices) {
            return Err(Error::NotJordan);
        }
        let n = vertices.len();
        let h = lattice.h;
        let mut attachments = Vec::new();
        // crossings of horizontal lattice lines (sorted by x) and vertical ones (sorted by y)
        let mut rows: Vec<Vec<Crossing>> = (0..lattice.ny).map(|_| Vec::new()).collect();
        let mut cols: Vec<Vec<Crossing>> = (0..lattice.nx).map(|_| Vec::new()).collect();
        for k in 0..n {
            let (a, b) = (vertices[k], vertices[(k + 1) % n]);
            let (jlo, jhi) = (((a.im.min(b.im) - lattice.y0) / h).floor(), ((a.im.max(b.im) - lattice.y0) / h).ceil());
            for j in (jlo.max(0.0) as usize)..=(jhi.min(lattice.ny as f64 - 1.0).max(0.0) as usize) {
                let y = lattice.y0 + j as f64 * h;
                if (a.im > y) != (b.im > y) {
                    let t = (y - a.im) / (b.im - a.im);
                    let x = a.re + t * (b.re - a.re);
                    attachments.push(Attachment { point: Complex64::new(x, y), seg: k, t });
                    rows[j].push(Crossing { at: x, att: attachments.len() - 1 });
                }
            }
            let (ilo, ihi) = (((a.re.min(b.re) - lattice.x0) / h).floor(), ((a.re.max(b.re) - lattice.x0) / h).ceil());
            for i in (ilo.max(0.0) as usize)..=(ihi.min(lattice.nx as f64 - 1.0).max(0.0) as usize) {
                let x = lattice.x0 + i as f64 * h;
                if (a.re > x) != (b.re > x) {
                    let t = (x - a.re) / (b.re - a.re);
                    let y = a.im + t * (b.im - a.im);
                    attachments.push(Attachment { point: Complex64::new(x, y), seg: k, t });
                    cols[i].push(Crossing { at: y, att: attachments.len() - 1 });
                }
            }
        }
        for line in rows.iter_mut().chain(cols.iter_mut()) {
            line.sort_by(|p, q| p.at.total_cmp(&q.at));
        }
        let on_boundary = 1e-9 * h;
        let mut slot = alloc::vec![NONE; lattice.len()];
        let mut unknowns = Vec::new();
        for j in 0..lattice.ny {
            for i in 0..lattice.nx {
                let p = lattice.point(i, j);
                let row = &rows[j];
                let left = row.partition_point(|c| c.at < p.re);
                if left % 2 == 0 {
                    continue;
                }
                let near_row = row.iter().any(|c| (c.at - p.re).abs() < on_boundary);
                let near_col = cols[i].iter().any(|c| (c.at - p.im).abs() < on_boundary);
                if near_row || near_col {
                    continue;
                }
                slot[lattice.index(i, j)] = unknowns.len() as u32;
                unknowns.push(lattice.index(i, j));
            }
        }
        let mut arms = Vec::with_capacity(unknowns.len());
        for &idx in &unknowns {
            let (i, j) = lattice.coords(idx);
            let p = lattice.point(i, j);
            let mut a = [Arm::Node(0); 4];
            for (d, arm) in a.iter_mut().enumerate() {
                let (line, at, forward) = match d {
                    0 => (&rows[j], p.re, true),
                    1 => (&rows[j], p.re, false),
                    2 => (&cols[i], p.im, true),
                    _ => (&cols[i], p.im, false),
                };
                let k = line.partition_point(|c| c.at < at);
                let hit = if forward { line.get(k) } else { k.checked_sub(1).map(|k| &line[k]) };
                let dist = hit.map(|c| (c.at - at).abs());
                *arm = match (hit, dist) {
                    (Some(c), Some(dd)) if dd <= h * (1.0 + 1e-12) => {
                        Arm::Boundary { s: (dd / h).min(1.0), att: c.att }
                    }
                    _ => {
                        let nb = lattice.neighbor(idx, d).ok_or(Error::GridTooSmall)?;
                        if slot[nb] == NONE {
                            return Err(Error::GridTooSmall);
                        }
                        Arm::Node(nb)
                    }
                };
            }
            arms.push(a);
        }
        let dom = Domain2D {
            lattice,
            boundary: vertices,
            polyline: true,
            slot,
            unknowns,
            arms,
            attachments,
            boundary_nodes: Vec::new(),
        };
        dom.check_connected()?;
        Ok(dom)
    }

    /// Domain whose interior is the set of mask nodes with all four
    /// neighbours in the mask; the remaining mask nodes carry boundary data.
    pub fn from_mask(lattice: Lattice, mask: &[bool]) -> Result<Self> {
        if mask.len() != lattice.len() {
            return Err(Error::DimensionMismatch { expected: lattice.len(), found: mask.len() });
        }
        let interior = |idx: usize| mask[idx] && (0..4).all(|d| lattice.neighbor(idx, d).is_some_and(|nb| mask[nb]));
        let mut slot = alloc::vec![NONE; lattice.len()];
        let mut unknowns = Vec::new();
        let mut boundary = Vec::new();
        let mut attachments = Vec::new();
        let mut boundary_nodes = Vec::new();
        let mut node_att = alloc::vec![NONE; lattice.len()];
        for idx in 0..lattice.len() {
            if !mask[idx] {
                continue;
            }
            if interior(idx) {
                slot[idx] = unknowns.len() as u32;
                unknowns.push(idx);
            } else {
                let p = lattice.point_of(idx);
                node_att[idx] = attachments.len() as u32;
                boundary_nodes.push((idx, attachments.len()));
                attachments.push(Attachment { point: p, seg: boundary.len(), t: 0.0 });
                boundary.push(p);
            }
        }
        let arms = unknowns
            .iter()
            .map(|&idx| {
                let mut a = [Arm::Node(0); 4];
                for (d, arm) in a.iter_mut().enumerate() {
                    let nb = lattice.neighbor(idx, d).expect("interior nodes have neighbours");
                    *arm = if slot[nb] != NONE {
                        Arm::Node(nb)
                    } else {
                        Arm::Boundary { s: 1.0, att: node_att[nb] as usize }
                    };
                }
                a
            })
            .collect();
        let dom = Domain2D { lattice, boundary, polyline: false, slot, unknowns, arms, attachments, boundary_nodes };
        dom.check_connected()?;
        Ok(dom)
    }

    fn check_connected(&self) -> Result<()> {
        if self.unknowns.is_empty() {
            return Err(Error::GridTooSmall);
        }
        let components = self.components();
        if components > 1 {
            return Err(Error::DisconnectedDomain { components });
        }
        Ok(())
    }

    /// Number of 4-connected components of the interior.
    pub fn components(&self) -> usize {
        let mut seen = alloc::vec![false; self.unknowns.len()];
        let mut count = 0;
        for start in 0..self.unknowns.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                for arm in &self.arms[k] {
                    if let Arm::Node(nb) = arm {
                        let s = self.slot[*nb] as usize;
                        if !seen[s] {
                            seen[s] = true;
                            queue.push_back(s);
                        }
                    }
                }
            }
        }
        count
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn h(&self) -> f64 {
        self.lattice.h
    }

    /// Polyline vertices (polygon domains) or boundary node positions
    /// (mask domains).
    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn has_polyline(&self) -> bool {
        self.polyline
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.slot[idx] != NONE
    }

    /// Unknown number of an interior lattice node.
    pub fn slot(&self, idx: usize) -> Option<usize> {
        let s = self.slot[idx];
        (s != NONE).then_some(s as usize)
    }

    /// Interior lattice indices in row-major order.
    pub fn interior(&self) -> &[usize] {
        &self.unknowns
    }

    pub fn arms(&self, k: usize) -> &[Arm; 4] {
        &self.arms[k]
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.attachments
    }

    /// `(lattice index, attachment)` of boundary nodes of mask domains.
    pub fn boundary_nodes(&self) -> &[(usize, usize)] {
        &self.boundary_nodes
    }

    /// Boundary data from a function of the boundary point.
    pub fn sample_boundary(&self, g: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        self.attachments.iter().map(|a| g(a.point)).collect()
    }

    /// Boundary data from samples at the boundary vertices, linear along
    /// each segment.
    pub fn interpolate_vertices(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        if samples.len() != self.boundary.len() {
            return Err(Error::DimensionMismatch { expected: self.boundary.len(), found: samples.len() });
        }
        let n = samples.len();
        Ok(self.attachments.iter().map(|a| samples[a.seg] * (1.0 - a.t) + samples[(a.seg + 1) % n] * a.t).collect())
    }

    /// Mean position of the interior nodes.
    pub fn centroid(&self) -> Complex64 {
        let sum: Complex64 = self.unknowns.iter().map(|&i| self.lattice.point_of(i)).sum();
        sum / self.unknowns.len() as f64
    }
}

/// Values on the lattice nodes of a domain; `defined` marks the nodes that
/// carry a value.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    domain: Domain2D,
    values: Vec<Complex64>,
    defined: Vec<bool>,
}

impl GridField {
    pub fn new(domain: Domain2D, values: Vec<Complex64>, defined: Vec<bool>) -> Result<Self> {
        let n = domain.lattice().len();
        if values.len() != n || defined.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: values.len().min(defined.len()) });
        }
        if values.iter().zip(&defined).any(|(v, &d)| d && !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("non-finite field value".into()));
        }
        Ok(GridField { domain, values, defined })
    }

    /// Field `f(x + iy)` on the interior nodes and, for mask domains, the
    /// boundary nodes.
    pub fn from_fn(domain: &Domain2D, f: impl Fn(Complex64) -> Complex64) -> Self {
        let lat = *domain.lattice();
        let mut values = alloc::vec![Complex64::new(0.0, 0.0); lat.len()];
        let mut defined = alloc::vec![false; lat.len()];
        for &i in domain.interior().iter().chain(domain.boundary_nodes().iter().map(|(i, _)| i)) {
            values[i] = f(lat.point_of(i));
            defined[i] = true;
        }
        GridField { domain: domain.clone(), values, defined }
    }

    pub fn domain(&self) -> &Domain2D {
        &self.domain
    }

    pub fn lattice(&self) -> &Lattice {
        self.domain.lattice()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn defined(&self) -> &[bool] {
        &self.defined
    }

    pub fn at(&self, idx: usize) -> Option<Complex64> {
        self.defined[idx].then(|| self.values[idx])
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        self.at(self.lattice().index(i, j))
    }

    /// Value at the lattice node nearest to `z`.
    pub fn at_point(&self, z: Complex64) -> Option<Complex64> {
        self.lattice().nearest(z).and_then(|idx| self.at(idx))
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }

    /// `(lattice index, value)` over defined nodes.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values.iter().enumerate().filter(move |(i, _)| self.defined[*i]).map(|(i, v)| (i, *v))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridField {
        GridField {
            domain: self.domain.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            defined: self.defined.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jordan_check() {
        let square = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert!(is_jordan(&square));
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(!is_jordan(&bowtie));
        assert_eq!(Domain2D::polygon(bowtie, 0.1).unwrap_err(), Error::NotJordan);
    }

    #[test]
    fn square_interior_and_arms() {
        // vertices off the lattice lines so arms are fractional
        let sq = vec![c(-0.55, -0.55), c(0.55, -0.55), c(0.55, 0.55), c(-0.55, 0.55)];
        let d = Domain2D::polygon(sq, 0.1).unwrap();
        assert_eq!(d.interior().len(), 11 * 11);
        let lat = d.lattice();
        let corner = lat.nearest(c(0.5, 0.5)).unwrap();
        let k = d.slot(corner).unwrap();
        match d.arms(k)[0] {
            Arm::Boundary { s, att } => {
                assert!((s - 0.5).abs() < 1e-9);
                assert!((d.attachments()[att].point - c(0.55, 0.5)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disc_vertex_count() {
        let d = Domain2D::disc(c(0.0, 0.0), 1.0, 1.0 / 64.0).unwrap();
        assert_eq!(d.boundary().len(), 404);
        let d = Domain2D::disc(c(0.0, 0.0), 1.0, 1.0 / 128.0).unwrap();
        assert_eq!(d.boundary().len(), 808);
        assert!(d.interior().iter().all(|&i| d.lattice().point_of(i).norm() < 1.0));
    }

    #[test]
    fn disconnected_mask_rejected() {
        let lat = Lattice::new(0.0, 0.0, 1.0, 12, 5);
        let mask: Vec<bool> = (0..lat.len()).map(|i| lat.coords(i).0 != 6).collect();
        assert!(matches!(Domain2D::from_mask(lat, &mask), Err(Error::DisconnectedDomain { components: 2 })));
    }
}
