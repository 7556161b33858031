//! File formats: polyanalytic functions, witnesses and hypersurfaces as JSON,
//! grid fields and point sets as CSV.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use polyan_core::harmonic::{Domain2D, GridField, Lattice};
use polyan_core::levi::{GraphHypersurface, HTerm};
use polyan_core::linalg::CMatrix;
use polyan_core::polycore::{CPoly, HoloFn, MWitness, MultiIndex, PolyAnalytic, RationalHolo};
use polyan_core::sampling::PointSet;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub pow: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub beta: Vec<u32>,
    pub num: Vec<TermJson>,
    pub den: Vec<TermJson>,
}

/// `{ "n", "alpha", "terms": [{ "beta", "num", "den" }] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub alpha: Vec<u32>,
    pub terms: Vec<CoeffJson>,
}

pub fn cpoly_to_json(p: &CPoly) -> Vec<TermJson> {
    p.terms().map(|(m, c)| TermJson { pow: m.entries().to_vec(), re: c.re, im: c.im }).collect()
}

pub fn cpoly_from_json(n: usize, terms: &[TermJson]) -> Result<CPoly, CliError> {
    for t in terms {
        if t.pow.len() != n {
            return Err(CliError::Format(format!("monomial {:?} does not have {n} exponents", t.pow)));
        }
    }
    Ok(CPoly::from_terms(n, terms.iter().map(|t| (MultiIndex::new(t.pow.clone()), Complex64::new(t.re, t.im)))))
}

pub fn poly_to_json(f: &PolyAnalytic) -> PolyJson {
    PolyJson {
        n: f.dim(),
        alpha: f.order().entries().to_vec(),
        terms: f
            .coeffs()
            .map(|(b, a)| CoeffJson {
                beta: b.entries().to_vec(),
                num: cpoly_to_json(a.num()),
                den: cpoly_to_json(a.den()),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<PolyAnalytic, CliError> {
    if j.alpha.len() != j.n {
        return Err(CliError::Format(format!("alpha has {} entries, n = {}", j.alpha.len(), j.n)));
    }
    let coeffs = j
        .terms
        .iter()
        .map(|t| {
            let num = cpoly_from_json(j.n, &t.num)?;
            let den = cpoly_from_json(j.n, &t.den)?;
            Ok((MultiIndex::new(t.beta.clone()), RationalHolo::new(num, den)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(PolyAnalytic::new(MultiIndex::new(j.alpha.clone()), coeffs)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoloJson {
    pub num: Vec<TermJson>,
    #[serde(default)]
    pub den: Option<Vec<TermJson>>,
    #[serde(default)]
    pub exponent: Option<Vec<TermJson>>,
}

fn holo_from_json(n: usize, j: &HoloJson) -> Result<HoloFn, CliError> {
    let num = cpoly_from_json(n, &j.num)?;
    let den = match &j.den {
        Some(d) => cpoly_from_json(n, d)?,
        None => CPoly::one(n),
    };
    let exponent = j.exponent.as_ref().map(|e| cpoly_from_json(n, e)).transpose()?;
    Ok(HoloFn { rational: RationalHolo::new(num, den)?, exponent })
}

/// Witness catalog entry, tagged by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Holomorphic { n: usize, g: HoloJson },
    BalkQuotient { n: usize, lambda: [f64; 2], q: Vec<TermJson> },
    SquaredModulus { n: usize, p: Vec<TermJson> },
    HoloAntiholoProduct { n: usize, g: HoloJson, h: Vec<TermJson> },
}

pub fn witness_from_json(j: &WitnessJson) -> Result<MWitness, CliError> {
    Ok(match j {
        WitnessJson::Holomorphic { n, g } => MWitness::Holomorphic(holo_from_json(*n, g)?),
        WitnessJson::BalkQuotient { n, lambda, q } => {
            MWitness::BalkQuotient { lambda: Complex64::new(lambda[0], lambda[1]), q: cpoly_from_json(*n, q)? }
        }
        WitnessJson::SquaredModulus { n, p } => MWitness::SquaredModulus(cpoly_from_json(*n, p)?),
        WitnessJson::HoloAntiholoProduct { n, g, h } => {
            MWitness::HoloAntiholoProduct { g: holo_from_json(*n, g)?, h: cpoly_from_json(*n, h)? }
        }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HTermJson {
    pub re: f64,
    pub im: f64,
    pub w: Vec<u32>,
    pub wbar: Vec<u32>,
    #[serde(default)]
    pub x: u32,
}

/// Either a builtin id or an explicit polynomial graph function, plus the
/// box radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurfaceJson {
    Builtin { builtin: String, radius: f64 },
    Terms { n: usize, terms: Vec<HTermJson>, radius: f64 },
}

pub fn surface_from_json(j: &SurfaceJson) -> Result<GraphHypersurface, CliError> {
    match j {
        SurfaceJson::Builtin { builtin, radius } => GraphHypersurface::builtin(builtin, *radius)
            .ok_or_else(|| CliError::Format(format!("unknown builtin hypersurface '{builtin}'")))?
            .map_err(CliError::from),
        SurfaceJson::Terms { n, terms, radius } => {
            let terms = terms
                .iter()
                .map(|t| HTerm { coeff: Complex64::new(t.re, t.im), w: t.w.clone(), wbar: t.wbar.clone(), x: t.x })
                .collect();
            Ok(GraphHypersurface::new(*n, terms, *radius)?)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscShape {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Planar domain: a closed polyline or a disc, the grid spacing, and
/// optionally boundary data given as a function of one variable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainJson {
    #[serde(default)]
    pub boundary: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub disc: Option<DiscShape>,
    pub h: f64,
    #[serde(default)]
    pub data: Option<PolyJson>,
}

pub fn domain_from_json(j: &DomainJson) -> Result<Domain2D, CliError> {
    match (&j.boundary, &j.disc) {
        (Some(b), None) => Ok(Domain2D::polygon(b.iter().map(|p| Complex64::new(p[0], p[1])).collect(), j.h)?),
        (None, Some(d)) => Ok(Domain2D::disc(Complex64::new(d.center[0], d.center[1]), d.radius, j.h)?),
        _ => Err(CliError::Format("domain needs exactly one of 'boundary' and 'disc'".into())),
    }
}

/// `{ "q", "zero_threshold" }` stored next to a grid field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub q: u32,
    pub zero_threshold: f64,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline. Object keys come out sorted, so
/// equal values give equal bytes.
pub fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRow {
    x: f64,
    y: f64,
    re: f64,
    im: f64,
}

/// Defined nodes as `x,y,re,im` rows in lattice order.
pub fn write_grid_csv(path: &Path, f: &GridField) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Format(e.to_string()))?;
    for (i, v) in f.iter() {
        let p = f.lattice().point_of(i);
        w.serialize(NodeRow { x: p.re, y: p.im, re: v.re, im: v.im }).map_err(|e| CliError::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Smallest positive gap between sorted distinct coordinates.
fn spacing(mut v: Vec<f64>) -> Option<f64> {
    v.sort_by(f64::total_cmp);
    v.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 1e-12).min_by(f64::total_cmp)
}

/// Reads `x,y,re,im` rows back onto the lattice they came from. The domain
/// is the set of listed nodes; nodes with a missing neighbour carry
/// boundary data.
pub fn read_grid_csv(path: &Path) -> Result<GridField, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let rows: Vec<NodeRow> =
        r.deserialize().collect::<Result<_, _>>().map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(CliError::Format(format!("{}: no grid nodes", path.display())));
    }
    let h = spacing(rows.iter().map(|r| r.x).collect())
        .into_iter()
        .chain(spacing(rows.iter().map(|r| r.y).collect()))
        .min_by(f64::total_cmp)
        .ok_or_else(|| CliError::Format(format!("{}: cannot infer grid spacing", path.display())))?;
    let x0 = rows.iter().map(|r| r.x).fold(f64::INFINITY, f64::min);
    let y0 = rows.iter().map(|r| r.y).fold(f64::INFINITY, f64::min);
    let index = |v: f64, o: f64| -> Result<usize, CliError> {
        let k = (v - o) / h;
        if (k - k.round()).abs() > 1e-6 {
            return Err(CliError::Format(format!("{}: node off the lattice of spacing {h}", path.display())));
        }
        Ok(k.round() as usize)
    };
    let mut ij = Vec::with_capacity(rows.len());
    for r in &rows {
        ij.push((index(r.x, x0)?, index(r.y, y0)?));
    }
    let nx = ij.iter().map(|p| p.0).max().unwrap() + 1;
    let ny = ij.iter().map(|p| p.1).max().unwrap() + 1;
    // one layer of padding so every listed node has four lattice neighbours
    let lat = Lattice::new(x0 - h, y0 - h, h, nx + 2, ny + 2);
    let mut values = vec![Complex64::new(0.0, 0.0); lat.len()];
    let mut mask = vec![false; lat.len()];
    for (r, (i, j)) in rows.iter().zip(ij) {
        let idx = lat.index(i + 1, j + 1);
        values[idx] = Complex64::new(r.re, r.im);
        mask[idx] = true;
    }
    let dom = Domain2D::from_mask(lat, &mask)?;
    Ok(GridField::new(dom, values, mask)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct PointRow {
    re: f64,
    im: f64,
    #[serde(default)]
    f_re: Option<f64>,
    #[serde(default)]
    f_im: Option<f64>,
}

/// `re,im[,f_re,f_im]` rows; values are kept only when every row has them.
pub fn read_points_csv(path: &Path, base: Complex64) -> Result<PointSet, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let rows: Vec<PointRow> =
        r.deserialize().collect::<Result<_, _>>().map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    let points = rows.iter().map(|r| Complex64::new(r.re, r.im)).collect();
    let values: Option<Vec<Complex64>> = rows
        .iter()
        .map(|r| match (r.f_re, r.f_im) {
            (Some(a), Some(b)) => Some(Complex64::new(a, b)),
            _ => None,
        })
        .collect();
    Ok(PointSet::new(base, points, values)?)
}

pub fn write_points_csv(path: &Path, e: &PointSet) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Format(e.to_string()))?;
    for (k, z) in e.points().iter().enumerate() {
        let v = e.values().map(|v| v[k]);
        let row = PointRow { re: z.re, im: z.im, f_re: v.map(|v| v.re), f_im: v.map(|v| v.im) };
        w.serialize(row).map_err(|e| CliError::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poly_json_round_trip_is_exact() {
        let den = CPoly::univariate(&[c(0.1, 0.7), c(1.0 / 3.0, 0.0)]);
        let f = PolyAnalytic::new(
            MultiIndex::new(vec![3]),
            vec![
                (
                    MultiIndex::new(vec![0]),
                    RationalHolo::new(CPoly::univariate(&[c(std::f64::consts::PI, -1e-300)]), den).unwrap(),
                ),
                (
                    MultiIndex::new(vec![2]),
                    RationalHolo::from_poly(CPoly::univariate(&[c(0.0, 0.0), c(2.0f64.sqrt(), 1.0)])),
                ),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&poly_to_json(&f)).unwrap();
        let back = poly_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn grid_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let d = Domain2D::disc(c(0.25, -0.5), 1.0, 1.0 / 8.0).unwrap();
        let f = GridField::from_fn(&d, |z| z * z.conj() + c(0.0, 1.0 / 3.0));
        write_grid_csv(&path, &f).unwrap();
        let g = read_grid_csv(&path).unwrap();
        assert_eq!(g.iter().count(), f.iter().count());
        for (i, v) in g.iter() {
            let p = g.lattice().point_of(i);
            assert!((f.at_point(p).unwrap() - v).norm() == 0.0);
        }
    }

    #[test]
    fn points_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        let e =
            PointSet::new(c(0.0, 0.0), vec![c(0.5, 0.1), c(-0.2, 0.3)], Some(vec![c(1.0, 2.0), c(3.0, 4.0)])).unwrap();
        write_points_csv(&path, &e).unwrap();
        assert_eq!(read_points_csv(&path, c(0.0, 0.0)).unwrap(), e);
    }

    #[test]
    fn surfaces_and_witnesses_parse() {
        let s: SurfaceJson = serde_json::from_str(r#"{"builtin": "quadric", "radius": 1.0}"#).unwrap();
        assert!(surface_from_json(&s).unwrap().is_quadric());
        let s: SurfaceJson = serde_json::from_str(
            r#"{"n": 2, "radius": 0.5, "terms": [{"re": 1, "im": 0, "w": [1], "wbar": [1]}, {"re": 1, "im": 0, "w": [0], "wbar": [0], "x": 3}]}"#,
        )
        .unwrap();
        assert!(!surface_from_json(&s).unwrap().is_quadric());
        let bad: SurfaceJson = serde_json::from_str(r#"{"builtin": "torus", "radius": 1.0}"#).unwrap();
        assert!(surface_from_json(&bad).is_err());

        let w: WitnessJson = serde_json::from_str(
            r#"{"kind": "balk_quotient", "n": 2, "lambda": [0, 2], "q": [{"pow": [1, 0], "re": 1, "im": 0}, {"pow": [0, 0], "re": -3, "im": 0}]}"#,
        )
        .unwrap();
        let f = witness_from_json(&w).unwrap();
        assert_eq!(f.kind(), "balk_quotient");
        assert!((f.eval(&[c(0.5, 0.0), c(0.0, 0.0)]).unwrap().norm() - 2.0).abs() < 1e-15);
    }
}
