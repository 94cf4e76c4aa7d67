//! Frequency-tabulated electromagnetic material properties.
//!
//! Relative permittivity and permeability follow the engineering convention
//! `eps_r = eps' - j eps''`, `mu_r = mu' - j mu''`, with `eps'', mu'' >= 0`
//! for passive media. Loss tangents are always derived from the stored parts.

use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaterialKind {
    Conductor,
    Dielectric,
    Absorber,
}

/// One tabulated row: frequency plus real/imaginary parts of eps_r and mu_r.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct MaterialRow {
    #[serde(rename = "f_hz")]
    pub f_hz: f64,
    #[serde(rename = "eps_p")]
    pub eps_p: f64,
    #[serde(rename = "eps_pp")]
    pub eps_pp: f64,
    #[serde(rename = "mu_p")]
    pub mu_p: f64,
    #[serde(rename = "mu_pp")]
    pub mu_pp: f64,
}

impl MaterialRow {
    pub fn eps_r(&self) -> Complex64 {
        Complex64::new(self.eps_p, -self.eps_pp)
    }

    pub fn mu_r(&self) -> Complex64 {
        Complex64::new(self.mu_p, -self.mu_pp)
    }

    pub fn tan_delta(&self) -> f64 {
        self.eps_pp / self.eps_p
    }

    pub fn tan_delta_m(&self) -> f64 {
        self.mu_pp / self.mu_p
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Dispersion {
    /// Frequency-independent values.
    Constant(MaterialRow),
    /// Rows with strictly increasing frequency.
    Tabulated(Vec<MaterialRow>),
}

/// Complex relative constants at a single frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialPoint {
    pub eps_r: Complex64,
    pub mu_r: Complex64,
}

impl MaterialPoint {
    pub fn eps_p(&self) -> f64 {
        self.eps_r.re
    }

    pub fn mu_p(&self) -> f64 {
        self.mu_r.re
    }

    pub fn tan_delta(&self) -> f64 {
        -self.eps_r.im / self.eps_r.re
    }

    pub fn tan_delta_m(&self) -> f64 {
        -self.mu_r.im / self.mu_r.re
    }

    /// Real part of sqrt(eps' mu'), the lossless refractive index.
    pub fn index_real(&self) -> f64 {
        (self.eps_r.re * self.mu_r.re).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpectrum {
    pub name: String,
    pub kind: MaterialKind,
    /// Electrical conductivity [S/m]; required for conductors.
    pub sigma: Option<f64>,
    dispersion: Dispersion,
}

impl MaterialSpectrum {
    /// Frequency-independent dielectric (or absorber) from `eps'`, `tan(delta)`,
    /// `mu'` and `tan(delta_m)`.
    pub fn constant(
        name: impl Into<String>,
        kind: MaterialKind,
        eps_p: f64,
        tan_delta: f64,
        mu_p: f64,
        tan_delta_m: f64,
    ) -> Result<Self> {
        let row = MaterialRow {
            f_hz: 0.0,
            eps_p,
            eps_pp: eps_p * tan_delta,
            mu_p,
            mu_pp: mu_p * tan_delta_m,
        };
        let name = name.into();
        validate_row(&name, kind, &row)?;
        Ok(Self {
            name,
            kind,
            sigma: None,
            dispersion: Dispersion::Constant(row),
        })
    }

    /// Vacuum (eps_r = mu_r = 1).
    pub fn vacuum() -> Self {
        Self::constant("vacuum", MaterialKind::Dielectric, 1.0, 0.0, 1.0, 0.0)
            .expect("vacuum is valid")
    }

    /// Non-magnetic conductor of conductivity `sigma` [S/m].
    pub fn conductor(name: impl Into<String>, sigma: f64) -> Result<Self> {
        let name = name.into();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidMaterial {
                name,
                reason: format!("conductivity must be positive, got {sigma}"),
            });
        }
        let row = MaterialRow {
            f_hz: 0.0,
            eps_p: 1.0,
            eps_pp: 0.0,
            mu_p: 1.0,
            mu_pp: 0.0,
        };
        Ok(Self {
            name,
            kind: MaterialKind::Conductor,
            sigma: Some(sigma),
            dispersion: Dispersion::Constant(row),
        })
    }

    pub fn tabulated(
        name: impl Into<String>,
        kind: MaterialKind,
        rows: Vec<MaterialRow>,
    ) -> Result<Self> {
        let name = name.into();
        if rows.is_empty() {
            return Err(Error::InvalidMaterial {
                name,
                reason: "empty table".into(),
            });
        }
        for w in rows.windows(2) {
            if !(w[1].f_hz > w[0].f_hz) {
                return Err(Error::InvalidMaterial {
                    name,
                    reason: format!(
                        "frequencies not strictly increasing at {} Hz",
                        w[1].f_hz
                    ),
                });
            }
        }
        for r in &rows {
            validate_row(&name, kind, r)?;
        }
        Ok(Self {
            name,
            kind,
            sigma: None,
            dispersion: Dispersion::Tabulated(rows),
        })
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.dispersion, Dispersion::Constant(_))
    }

    pub fn rows(&self) -> &[MaterialRow] {
        match &self.dispersion {
            Dispersion::Constant(r) => std::slice::from_ref(r),
            Dispersion::Tabulated(rows) => rows,
        }
    }

    /// Tabulated frequency range, `None` for constant materials.
    pub fn frequency_range(&self) -> Option<(f64, f64)> {
        match &self.dispersion {
            Dispersion::Constant(_) => None,
            Dispersion::Tabulated(rows) => Some((rows[0].f_hz, rows[rows.len() - 1].f_hz)),
        }
    }

    pub fn covers(&self, f_hz: f64) -> bool {
        match self.frequency_range() {
            None => true,
            Some((lo, hi)) => f_hz >= lo && f_hz <= hi,
        }
    }

    pub fn sigma(&self) -> Result<f64> {
        self.sigma.ok_or_else(|| Error::InvalidMaterial {
            name: self.name.clone(),
            reason: "no conductivity defined".into(),
        })
    }

    /// Linear interpolation in frequency; out-of-range queries are an error.
    pub fn interpolate(&self, f_hz: f64) -> Result<MaterialPoint> {
        self.interpolate_with(f_hz, false)
    }

    /// Like [`interpolate`](Self::interpolate). With `extrapolate`, queries
    /// outside the table hold the nearest end row.
    pub fn interpolate_with(&self, f_hz: f64, extrapolate: bool) -> Result<MaterialPoint> {
        let row = match &self.dispersion {
            Dispersion::Constant(r) => *r,
            Dispersion::Tabulated(rows) => {
                let first = rows[0];
                let last = rows[rows.len() - 1];
                if f_hz < first.f_hz || f_hz > last.f_hz {
                    if !extrapolate {
                        return Err(Error::Range {
                            f_hz,
                            min_hz: first.f_hz,
                            max_hz: last.f_hz,
                        });
                    }
                    if f_hz < first.f_hz {
                        first
                    } else {
                        last
                    }
                } else {
                    lerp_rows(rows, f_hz)
                }
            }
        };
        Ok(MaterialPoint {
            eps_r: row.eps_r(),
            mu_r: row.mu_r(),
        })
    }

    /// Reads a CSV table with header `f_hz,eps_p,eps_pp,mu_p,mu_pp`; extra
    /// columns are ignored.
    pub fn from_csv_reader<R: Read>(
        name: impl Into<String>,
        kind: MaterialKind,
        reader: R,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.deserialize::<MaterialRow>().enumerate() {
            let row = rec.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line() as usize).unwrap_or(i + 2),
                message: e.to_string(),
            })?;
            rows.push(row);
        }
        Self::tabulated(name, kind, rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, kind: MaterialKind) -> Result<Self> {
        let path = path.as_ref();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "material".into());
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(name, kind, file)
    }
}

fn lerp_rows(rows: &[MaterialRow], f_hz: f64) -> MaterialRow {
    // first index with f > f_hz
    let idx = rows.partition_point(|r| r.f_hz <= f_hz);
    if idx == 0 {
        return rows[0];
    }
    if idx >= rows.len() {
        return rows[rows.len() - 1];
    }
    let (lo, hi) = (rows[idx - 1], rows[idx]);
    if f_hz == lo.f_hz {
        return lo;
    }
    let t = (f_hz - lo.f_hz) / (hi.f_hz - lo.f_hz);
    let mix = |a: f64, b: f64| a + t * (b - a);
    MaterialRow {
        f_hz,
        eps_p: mix(lo.eps_p, hi.eps_p),
        eps_pp: mix(lo.eps_pp, hi.eps_pp),
        mu_p: mix(lo.mu_p, hi.mu_p),
        mu_pp: mix(lo.mu_pp, hi.mu_pp),
    }
}

fn validate_row(name: &str, kind: MaterialKind, r: &MaterialRow) -> Result<()> {
    let bad = |reason: String| Error::InvalidMaterial {
        name: name.to_string(),
        reason,
    };
    let vals = [r.f_hz, r.eps_p, r.eps_pp, r.mu_p, r.mu_pp];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(bad(format!("non-finite entry at {} Hz", r.f_hz)));
    }
    if r.eps_pp < 0.0 || r.mu_pp < 0.0 {
        return Err(bad(format!("active (negative-loss) entry at {} Hz", r.f_hz)));
    }
    if r.mu_p <= 0.0 {
        return Err(bad(format!("mu' must be positive at {} Hz", r.f_hz)));
    }
    if kind != MaterialKind::Conductor && r.eps_p < 1.0 {
        return Err(bad(format!("eps' < 1 at {} Hz", r.f_hz)));
    }
    Ok(())
}

/// Parses a conductor definition from `key = value` lines (`#` comments).
/// Recognised keys: `name`, `sigma_s_per_m`.
pub fn parse_conductor_config(text: &str) -> Result<MaterialSpectrum> {
    let mut name = String::from("conductor");
    let mut sigma = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('[') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
        let value = value.trim().trim_matches('"');
        match key.trim() {
            "name" => name = value.to_string(),
            "sigma_s_per_m" => {
                sigma = Some(value.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("sigma_s_per_m: {e}"),
                })?)
            }
            _ => {}
        }
    }
    let sigma = sigma.ok_or_else(|| Error::Input("conductor config lacks sigma_s_per_m".into()))?;
    MaterialSpectrum::conductor(name, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: f64, eps_p: f64, eps_pp: f64, mu_p: f64, mu_pp: f64) -> MaterialRow {
        MaterialRow {
            f_hz: f,
            eps_p,
            eps_pp,
            mu_p,
            mu_pp,
        }
    }

    #[test]
    fn ptfe_constant() {
        let ptfe =
            MaterialSpectrum::constant("ptfe", MaterialKind::Dielectric, 2.08, 4e-4, 1.0, 0.0)
                .unwrap();
        for f in [1e6, 1e9, 5e11] {
            let p = ptfe.interpolate(f).unwrap();
            assert_eq!(p.eps_r, Complex64::new(2.08, -2.08 * 0.0004));
            assert_eq!(p.mu_r, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn single_row_exact() {
        let m = MaterialSpectrum::tabulated(
            "one",
            MaterialKind::Absorber,
            vec![row(9e10, 11.0, 0.5, 1.3, 0.2)],
        )
        .unwrap();
        let p = m.interpolate(9e10).unwrap();
        assert_eq!(p.eps_r, Complex64::new(11.0, -0.5));
        assert_eq!(p.mu_r, Complex64::new(1.3, -0.2));
        assert!(m.interpolate(9.1e10).is_err());
    }

    #[test]
    fn two_row_midpoint() {
        let m = MaterialSpectrum::tabulated(
            "two",
            MaterialKind::Dielectric,
            vec![row(1e9, 4.0, 0.0, 1.0, 0.0), row(3e9, 6.0, 0.0, 1.0, 0.0)],
        )
        .unwrap();
        let p = m.interpolate(2e9).unwrap();
        assert!((p.eps_p() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_and_hold() {
        let m = MaterialSpectrum::tabulated(
            "two",
            MaterialKind::Dielectric,
            vec![row(1e9, 4.0, 0.1, 1.0, 0.0), row(3e9, 6.0, 0.2, 1.0, 0.0)],
        )
        .unwrap();
        match m.interpolate(5e8) {
            Err(Error::Range { .. }) => {}
            other => panic!("expected range error, got {other:?}"),
        }
        let lo = m.interpolate_with(5e8, true).unwrap();
        assert_eq!(lo.eps_p(), 4.0);
        let hi = m.interpolate_with(9e9, true).unwrap();
        assert_eq!(hi.eps_p(), 6.0);
    }

    #[test]
    fn rejects_bad_tables() {
        let r = MaterialSpectrum::tabulated(
            "x",
            MaterialKind::Dielectric,
            vec![row(2e9, 4.0, 0.0, 1.0, 0.0), row(1e9, 4.0, 0.0, 1.0, 0.0)],
        );
        assert!(r.is_err());
        let r = MaterialSpectrum::tabulated(
            "x",
            MaterialKind::Dielectric,
            vec![row(1e9, 4.0, -0.1, 1.0, 0.0)],
        );
        assert!(r.is_err());
        assert!(MaterialSpectrum::conductor("cu", 0.0).is_err());
    }

    #[test]
    fn loss_tangents_recomputed() {
        let p = MaterialPoint {
            eps_r: Complex64::new(10.0, -0.5),
            mu_r: Complex64::new(1.25, -0.25),
        };
        assert!((p.tan_delta() - 0.05).abs() < 1e-15);
        assert!((p.tan_delta_m() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn csv_loader_ignores_extra_columns() {
        let text = "f_hz,eps_p,eps_pp,mu_p,mu_pp,tan_d,tan_dm,branch\n\
                    7.5e10,11.0,0.55,1.3,0.2,0.05,0.15,2+3\n\
                    1.1e11,10.8,0.54,1.3,0.19,0.05,0.146,2+3\n";
        let m = MaterialSpectrum::from_csv_reader("esorb", MaterialKind::Absorber, text.as_bytes())
            .unwrap();
        assert_eq!(m.rows().len(), 2);
        assert_eq!(m.frequency_range(), Some((7.5e10, 1.1e11)));
    }

    #[test]
    fn csv_loader_reports_line() {
        let text = "f_hz,eps_p,eps_pp,mu_p,mu_pp\n1e9,4,0,1,0\n2e9,abc,0,1,0\n";
        match MaterialSpectrum::from_csv_reader("x", MaterialKind::Dielectric, text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conductor_kv() {
        let m = parse_conductor_config("# copper at RT\nname = copper\nsigma_s_per_m = 6.7e7\n")
            .unwrap();
        assert_eq!(m.kind, MaterialKind::Conductor);
        assert_eq!(m.sigma().unwrap(), 6.7e7);
        assert!(parse_conductor_config("name = x\n").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn table() -> impl Strategy<Value = Vec<MaterialRow>> {
            prop::collection::vec((1.0f64..20.0, 0.0f64..3.0, 0.5f64..4.0, 0.0f64..2.0), 2..12)
                .prop_map(|v| {
                    v.into_iter()
                        .enumerate()
                        .map(|(i, (e, epp, m, mpp))| row(1e9 * (i as f64 + 1.0), e, epp, m, mpp))
                        .collect()
                })
        }

        proptest! {
            #[test]
            fn exact_at_nodes_and_passive(rows in table(), t in 0.0f64..1.0) {
                let m = MaterialSpectrum::tabulated("p", MaterialKind::Absorber, rows.clone()).unwrap();
                for r in &rows {
                    let p = m.interpolate(r.f_hz).unwrap();
                    prop_assert_eq!(p.eps_r, r.eps_r());
                    prop_assert_eq!(p.mu_r, r.mu_r());
                }
                let (lo, hi) = m.frequency_range().unwrap();
                let p = m.interpolate(lo + t * (hi - lo)).unwrap();
                prop_assert!(-p.eps_r.im >= 0.0);
                prop_assert!(-p.mu_r.im >= 0.0);
            }

            #[test]
            fn monotone_between_nodes(start in 1.0f64..5.0, steps in prop::collection::vec(0.0f64..1.0, 2..8), t in 0.0f64..1.0) {
                let mut e = start;
                let rows: Vec<_> = steps.iter().enumerate().map(|(i, d)| { e += d; row(1e9 * (i as f64 + 1.0), e, 0.0, 1.0, 0.0) }).collect();
                let m = MaterialSpectrum::tabulated("m", MaterialKind::Dielectric, rows.clone()).unwrap();
                for w in rows.windows(2) {
                    let f = w[0].f_hz + t * (w[1].f_hz - w[0].f_hz);
                    let v = m.interpolate(f).unwrap().eps_p();
                    prop_assert!(v >= w[0].eps_p - 1e-12 && v <= w[1].eps_p + 1e-12);
                }
            }
        }
    }
}
