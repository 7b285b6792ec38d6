//! CSV and JSON artifacts.
//!
//! CSV rows are `x,re_v,im_v,re_residual,im_residual,masked` in ascending x
//! with LF endings. Floats use the shortest decimal that parses back to the
//! same bits; residual fields are empty on masked rows and non-finite values
//! are written as empty fields.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lax::PiiParams;
use crate::pauli::C64;
use crate::potential::Samples;
use crate::seeds::ResidualReport;

pub const CSV_HEADER: &str = "x,re_v,im_v,re_residual,im_residual,masked";

/// Round-trip decimal text for one float.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return String::new();
    }
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    if field.is_empty() {
        return Ok(f64::NAN);
    }
    field
        .parse()
        .map_err(|e| Error::Parse(format!("line {line}: bad number {field:?}: {e}")))
}

/// One parsed CSV row. Empty residual fields read back as `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsvRow {
    pub x: f64,
    pub v: C64,
    pub residual: Option<C64>,
    pub masked: bool,
}

fn push_row(out: &mut String, x: f64, v: C64, residual: Option<C64>, masked: bool) {
    let (rr, ri) = match residual {
        Some(r) if !masked => (format_f64(r.re), format_f64(r.im)),
        _ => (String::new(), String::new()),
    };
    writeln!(
        out,
        "{},{},{},{rr},{ri},{masked}",
        format_f64(x),
        format_f64(v.re),
        format_f64(v.im)
    )
    .expect("writing to a String cannot fail");
}

/// CSV text for a residual report.
pub fn report_csv(report: &ResidualReport) -> String {
    let mut out = String::with_capacity(64 * report.grid.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, x) in report.grid.points().enumerate() {
        push_row(&mut out, x, report.v[i], Some(report.residual[i]), report.masked[i]);
    }
    out
}

/// CSV text for potential samples with no residual attached.
pub fn samples_csv(samples: &Samples) -> String {
    let mut out = String::with_capacity(48 * samples.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, x) in samples.grid.points().enumerate() {
        push_row(&mut out, x, samples.v[i], None, samples.mask[i]);
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.split('\n');
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let n = k + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Parse(format!("line {n}: expected 6 fields, got {}", f.len())));
        }
        let masked = match f[5] {
            "true" => true,
            "false" => false,
            s => return Err(Error::Parse(format!("line {n}: bad mask {s:?}"))),
        };
        let residual = if f[3].is_empty() && f[4].is_empty() {
            None
        } else {
            Some(C64::new(parse_f64(f[3], n)?, parse_f64(f[4], n)?))
        };
        rows.push(CsvRow {
            x: parse_f64(f[0], n)?,
            v: C64::new(parse_f64(f[1], n)?, parse_f64(f[2], n)?),
            residual,
            masked,
        });
    }
    Ok(rows)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

/// `α` and the cubic coefficient in artifact form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub alpha: [f64; 2],
    pub cubic_coeff: f64,
}

impl From<&PiiParams> for ParamsRecord {
    fn from(p: &PiiParams) -> Self {
        ParamsRecord {
            alpha: [p.alpha.re, p.alpha.im],
            cubic_coeff: p.cubic_coeff,
        }
    }
}

/// Spectral values and initial data of a Darboux chain, as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub lambda: Vec<[f64; 2]>,
    pub ic: Vec<[[f64; 2]; 2]>,
    pub variant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the canonical config JSON, hex encoded.
    pub config_digest: String,
    pub grid: Option<String>,
    pub params: Option<ParamsRecord>,
    pub seed: Option<String>,
    pub chain: Option<ChainRecord>,
    pub version: String,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`, or `None`.
    pub timestamp: Option<u64>,
}

impl RunManifest {
    /// `config` is serialized to JSON and hashed; any `Serialize` value with a
    /// stable field order gives a stable digest.
    pub fn new<C: Serialize>(command: &str, config: &C) -> RunManifest {
        RunManifest {
            command: command.into(),
            config_digest: config_digest(config),
            grid: None,
            params: None,
            seed: None,
            chain: None,
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()),
        }
    }

    pub fn with_grid(mut self, grid: &Grid) -> Self {
        self.grid = Some(grid.spec_string());
        self
    }

    pub fn with_params(mut self, params: &PiiParams) -> Self {
        self.params = Some(params.into());
        self
    }

    pub fn with_seed(mut self, seed: impl Into<String>) -> Self {
        self.seed = Some(seed.into());
        self
    }

    pub fn with_chain(mut self, chain: ChainRecord) -> Self {
        self.chain = Some(chain);
        self
    }
}

pub fn config_digest<C: Serialize>(config: &C) -> String {
    let canonical = serde_json::to_string(config).expect("configs serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Informational,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Informational => "informational",
        }
    }
}

/// How `measured` is compared with `threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Pass when `measured < threshold`.
    Below,
    /// Pass when `measured > threshold`.
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub check: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    pub comparison: Option<Comparison>,
    pub masked_fraction: Option<f64>,
    pub note: Option<String>,
}

impl VerdictRecord {
    /// Status from `measured` vs `threshold`. A non-finite measurement fails.
    pub fn judge(check: impl Into<String>, measured: f64, threshold: f64, comparison: Comparison) -> Self {
        let ok = match comparison {
            Comparison::Below => measured < threshold,
            Comparison::Above => measured > threshold,
        };
        VerdictRecord {
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            threshold: Some(threshold),
            comparison: Some(comparison),
            masked_fraction: None,
            note: None,
        }
    }

    pub fn below(check: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::judge(check, measured, threshold, Comparison::Below)
    }

    pub fn above(check: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::judge(check, measured, threshold, Comparison::Above)
    }

    /// A pass/fail verdict with no single measured quantity.
    pub fn boolean(check: impl Into<String>, ok: bool) -> Self {
        VerdictRecord {
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: None,
            threshold: None,
            comparison: None,
            masked_fraction: None,
            note: None,
        }
    }

    pub fn informational(check: impl Into<String>, measured: Option<f64>) -> Self {
        VerdictRecord {
            check: check.into(),
            status: Status::Informational,
            measured,
            threshold: None,
            comparison: None,
            masked_fraction: None,
            note: None,
        }
    }

    pub fn with_masked_fraction(mut self, f: f64) -> Self {
        self.masked_fraction = Some(f);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// `check: status (measured vs threshold)` for terminal output.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{}: {}", self.check, self.status.as_str());
        match (self.measured, self.threshold, self.comparison) {
            (Some(m), Some(t), Some(c)) => {
                let op = if c == Comparison::Below { "<" } else { ">" };
                let _ = write!(s, " (measured {m:.3e}, need {op} {t:e})");
            }
            (Some(m), _, _) => {
                let _ = write!(s, " (measured {m:.3e})");
            }
            _ => {}
        }
        if let Some(f) = self.masked_fraction {
            let _ = write!(s, " [masked {:.2}%]", 100.0 * f);
        }
        if let Some(n) = &self.note {
            let _ = write!(s, " {n}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub manifest: RunManifest,
    pub verdicts: Vec<VerdictRecord>,
}

pub fn verdicts_json(manifest: &RunManifest, verdicts: &[VerdictRecord]) -> String {
    let doc = VerdictDocument {
        manifest: manifest.clone(),
        verdicts: verdicts.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("verdict documents serialize");
    s.push('\n');
    s
}

pub fn write_verdicts_json(path: &Path, manifest: &RunManifest, verdicts: &[VerdictRecord]) -> Result<()> {
    write_text(path, &verdicts_json(manifest, verdicts))
}

pub fn parse_verdicts_json(text: &str) -> Result<VerdictDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("verdict document: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{Potential, ZeroPotential};
    use crate::seeds::{pii_residual, rational_pii_solution};
    use proptest::prelude::*;

    #[test]
    fn zero_seed_row() {
        let g = Grid::new(-5.0, 5.0, 11).unwrap();
        let r = pii_residual(&ZeroPotential, &PiiParams::real(0.0), &g).unwrap();
        let csv = report_csv(&r);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(csv.contains("\n0,0,0,0,0,false\n"));
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn masked_rows_drop_residuals() {
        let g = Grid::new(-1.0, 1.0, 3).unwrap();
        let r = pii_residual(&rational_pii_solution(1).unwrap(), &PiiParams::real(1.0), &g).unwrap();
        let csv = report_csv(&r);
        let row = csv.lines().nth(2).unwrap();
        assert!(row.ends_with(",,,true"), "{row}");
        assert!(row.starts_with("0,"), "{row}");
    }

    #[test]
    fn report_round_trips_bit_exactly() {
        let g = Grid::new(-5.0, 5.0, 1001).unwrap();
        let r = pii_residual(&rational_pii_solution(3).unwrap(), &PiiParams::real(3.0), &g).unwrap();
        let rows = parse_csv(&report_csv(&r)).unwrap();
        assert_eq!(rows.len(), g.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.x.to_bits(), g.x(i).to_bits());
            assert_eq!(row.v.re.to_bits(), r.v[i].re.to_bits());
            assert_eq!(row.masked, r.masked[i]);
            match row.residual {
                Some(z) => {
                    assert_eq!(z.re.to_bits(), r.residual[i].re.to_bits());
                    assert_eq!(z.im.to_bits(), r.residual[i].im.to_bits());
                }
                None => assert!(r.masked[i]),
            }
        }
    }

    #[test]
    fn samples_have_empty_residuals() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let csv = samples_csv(&ZeroPotential.sample(&g).unwrap());
        assert_eq!(csv.lines().nth(1), Some("0,0,0,,,false"));
        let rows = parse_csv(&csv).unwrap();
        assert!(rows.iter().all(|r| r.residual.is_none()));
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(parse_csv("x,y\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3,,,maybe\n")).is_err());
    }

    proptest! {
        #[test]
        fn floats_round_trip(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let s = format_f64(v);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn verdict_documents() {
        let m = RunManifest::new("selftest", &("a", 1));
        let empty = verdicts_json(&m, &[]);
        let doc = parse_verdicts_json(&empty).unwrap();
        assert!(doc.verdicts.is_empty());
        assert_eq!(config_digest(&("a", 1)), m.config_digest);
        assert_ne!(config_digest(&("a", 2)), m.config_digest);

        let v = VerdictRecord::below("zero-curvature", 0.0, 1e-12);
        assert_eq!(v.status, Status::Pass);
        let text = verdicts_json(&m, &[v.clone()]);
        assert!(text.contains("\"measured\": 0.0"));
        assert!(text.find("\"manifest\"").unwrap() < text.find("\"verdicts\"").unwrap());
        assert_eq!(parse_verdicts_json(&text).unwrap().verdicts, vec![v]);
        assert_eq!(VerdictRecord::below("x", f64::NAN, 1.0).status, Status::Fail);
        assert_eq!(VerdictRecord::above("x", 2.0, 1.0).status, Status::Pass);
    }
}
