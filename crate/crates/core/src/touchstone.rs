//! Two-port Touchstone (`.s2p`) reader and writer.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nrw::SParamRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn scale(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn label(self) -> &'static str {
        match self {
            FreqUnit::Hz => "HZ",
            FreqUnit::KHz => "KHZ",
            FreqUnit::MHz => "MHZ",
            FreqUnit::GHz => "GHZ",
        }
    }
}

/// Encoding of each complex value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Real, imaginary.
    Ri,
    /// Magnitude, angle in degrees.
    Ma,
    /// 20 log10 magnitude, angle in degrees.
    Db,
}

impl DataFormat {
    fn decode(self, x: f64, y: f64) -> Complex64 {
        match self {
            DataFormat::Ri => Complex64::new(x, y),
            DataFormat::Ma => Complex64::from_polar(x, y.to_radians()),
            DataFormat::Db => Complex64::from_polar(10f64.powf(x / 20.0), y.to_radians()),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::Ri => (z.re, z.im),
            DataFormat::Ma => (z.norm(), z.arg().to_degrees()),
            DataFormat::Db => (20.0 * z.norm().log10(), z.arg().to_degrees()),
        }
    }

    fn label(self) -> &'static str {
        match self {
            DataFormat::Ri => "RI",
            DataFormat::Ma => "MA",
            DataFormat::Db => "DB",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchstoneOptions {
    pub unit: FreqUnit,
    pub format: DataFormat,
    pub z0: f64,
}

impl Default for TouchstoneOptions {
    fn default() -> Self {
        Self {
            unit: FreqUnit::GHz,
            format: DataFormat::Ma,
            z0: 50.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Touchstone {
    pub options: TouchstoneOptions,
    pub records: Vec<SParamRecord>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_options(body: &str, line: usize) -> Result<TouchstoneOptions> {
    let mut opts = TouchstoneOptions::default();
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opts.unit = FreqUnit::Hz,
            "KHZ" => opts.unit = FreqUnit::KHz,
            "MHZ" => opts.unit = FreqUnit::MHz,
            "GHZ" => opts.unit = FreqUnit::GHz,
            "S" => {}
            "Y" | "Z" | "H" | "G" => {
                return Err(parse_err(line, format!("only S parameters are supported, got '{tok}'")))
            }
            "RI" => opts.format = DataFormat::Ri,
            "MA" => opts.format = DataFormat::Ma,
            "DB" => opts.format = DataFormat::Db,
            "R" => {
                let v = tokens
                    .next()
                    .ok_or_else(|| parse_err(line, "missing reference impedance after 'R'"))?;
                opts.z0 = v
                    .parse::<f64>()
                    .ok()
                    .filter(|z| *z > 0.0)
                    .ok_or_else(|| parse_err(line, format!("invalid reference impedance '{v}'")))?;
            }
            other => return Err(parse_err(line, format!("unknown option '{other}'"))),
        }
    }
    Ok(opts)
}

fn build_record(
    vals: &[f64],
    line: usize,
    opts: &TouchstoneOptions,
    last_f: Option<f64>,
) -> Result<SParamRecord> {
    let f = vals[0] * opts.unit.scale();
    if let Some(prev) = last_f {
        if !(f > prev) {
            return Err(parse_err(line, format!("frequency {f:e} Hz does not increase")));
        }
    }
    let z = |i: usize| opts.format.decode(vals[1 + 2 * i], vals[2 + 2 * i]);
    Ok(SParamRecord {
        f_hz: f,
        s11: z(0),
        s21: z(1),
        s12: Some(z(2)),
        s22: Some(z(3)),
    })
}

/// Parses two-port Touchstone text. Each record starts on a new line and
/// holds `f S11 S21 S12 S22`; it may continue on further lines.
pub fn parse_touchstone_str(text: &str) -> Result<Touchstone> {
    let mut options: Option<TouchstoneOptions> = None;
    let mut records = Vec::new();
    let mut pending: Vec<f64> = Vec::with_capacity(9);
    let mut record_line = 0usize;
    let mut last_f: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            if options.is_some() {
                log::warn!("line {line}: extra option line ignored");
            } else if !pending.is_empty() || !records.is_empty() {
                return Err(parse_err(line, "option line after data"));
            } else {
                options = Some(parse_options(body, line)?);
            }
            continue;
        }
        if content.starts_with('[') {
            return Err(parse_err(line, "Touchstone 2.0 keywords are not supported"));
        }
        let opts = *options.get_or_insert_with(TouchstoneOptions::default);
        let vals = content
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("invalid number '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if pending.is_empty() {
            if vals.len() % 2 == 0 {
                return Err(parse_err(
                    line,
                    format!("{} values cannot start a 2-port record (wrong port count?)", vals.len()),
                ));
            }
            record_line = line;
        } else if vals.len() % 2 != 0 {
            return Err(parse_err(
                line,
                format!(
                    "record from line {record_line} has {} of 9 values (wrong port count?)",
                    pending.len()
                ),
            ));
        }
        pending.extend(vals);
        if pending.len() > 9 {
            return Err(parse_err(
                line,
                format!("{} values in record; a 2-port record has 9 (wrong port count?)", pending.len()),
            ));
        }
        if pending.len() == 9 {
            let rec = build_record(&pending, record_line, &opts, last_f)?;
            last_f = Some(rec.f_hz);
            records.push(rec);
            pending.clear();
        }
    }
    if !pending.is_empty() {
        return Err(parse_err(
            record_line,
            format!("incomplete record: {} of 9 values (wrong port count?)", pending.len()),
        ));
    }
    if records.is_empty() {
        return Err(parse_err(0, "no data records"));
    }
    Ok(Touchstone {
        options: options.unwrap_or_default(),
        records,
    })
}

pub fn parse_touchstone(path: impl AsRef<Path>) -> Result<Vec<SParamRecord>> {
    let path = path.as_ref();
    if let Some(ext) = path.extension().and_then(|e| e.to_str()) {
        let ext = ext.to_ascii_lowercase();
        if ext.starts_with('s') && ext.ends_with('p') && ext != "s2p" {
            return Err(parse_err(0, format!("'.{ext}' is not a 2-port file")));
        }
    }
    let text = std::fs::read_to_string(path)?;
    Ok(parse_touchstone_str(&text)?.records)
}

/// Writes records in the given encoding; S12/S22 default to S21/S11.
pub fn write_touchstone(records: &[SParamRecord], opts: TouchstoneOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} S {} R {}",
        opts.unit.label(),
        opts.format.label(),
        opts.z0
    );
    for r in records {
        let _ = write!(out, "{:e}", r.f_hz / opts.unit.scale());
        for z in [r.s11, r.s21, r.s12.unwrap_or(r.s21), r.s22.unwrap_or(r.s11)] {
            let (x, y) = opts.format.encode(z);
            let _ = write!(out, " {x:e} {y:e}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ri_row() {
        let t = parse_touchstone_str("# GHZ S RI R 50\n75 0.1 0.0 0.5 0.0 0.5 0.0 0.1 0.0\n").unwrap();
        let r = &t.records[0];
        assert_eq!(r.f_hz, 7.5e10);
        assert_eq!(r.s11, Complex64::new(0.1, 0.0));
        assert_eq!(r.s21, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn db_zero_is_unity() {
        let t = parse_touchstone_str("# HZ S DB R 50\n1e9 0 0 0 0 0 0 0 0\n").unwrap();
        assert!((t.records[0].s21 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn defaults_and_comments() {
        let text = "! header\n1 1 90 0.5 0 ! trailing\n 0.5 0 1 -90\n";
        let t = parse_touchstone_str(text).unwrap();
        assert_eq!(t.options, TouchstoneOptions::default());
        assert_eq!(t.records[0].f_hz, 1e9);
        assert!((t.records[0].s11 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("# GHZ S XX R 50\n", 1),
            ("# GHZ S RI R\n", 1),
            ("# GHZ Y RI R 50\n", 1),
            ("# GHZ S RI R 50\n2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n", 3),
            ("# GHZ S RI R 50\n1 0 0\n2 0 0\n", 3),
            ("# GHZ S RI R 50\n1 0 0 0 0 0 0 0 0 0 0\n", 2),
            ("# GHZ S RI R 50\n1 0 0 0 0 0 0 0 x\n", 2),
        ];
        for (text, line) in cases {
            match parse_touchstone_str(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
