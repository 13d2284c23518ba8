//! Input parsing and deterministic serialisation.
//!
//! Operators are read from a small JSON document (`q`, `a`, `b`, optional
//! `label`; unknown fields rejected). Analysis results are rendered to JSON
//! by hand with a fixed field order and fixed float formatting (17
//! significant digits, lossless for 64-bit floats), so identical inputs
//! produce byte-identical output. Files are written atomically
//! (write-then-rename).

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::bounds::{certify, BoundsReport};
use crate::error::{Error, Result};
use crate::jacobi::PeriodicJacobi;
use crate::quasimomentum::{DirichletCheck, MomentCheck, QuasimomentumModel, VerticalCheck};
use crate::spectrum;

/// Input document; mirrors the `PeriodicJacobi` constructor preconditions.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorInputDocument {
    pub q: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

impl OperatorInputDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn operator(&self) -> Result<PeriodicJacobi> {
        PeriodicJacobi::new(self.q, self.a.clone(), self.b.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"q\": {},", self.q);
        let _ = writeln!(s, "  \"a\": {},", fmt_array(&self.a));
        if self.label.is_some() {
            let _ = writeln!(s, "  \"b\": {},", fmt_array(&self.b));
            let _ = writeln!(
                s,
                "  \"label\": \"{}\"",
                self.label.as_deref().unwrap().replace('"', "\\\"")
            );
        } else {
            let _ = writeln!(s, "  \"b\": {}", fmt_array(&self.b));
        }
        s.push_str("}\n");
        s
    }
}

/// 17-significant-digit float formatting: round-trips every finite f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_array(xs: &[f64]) -> String {
    let inner: Vec<String> = xs.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", inner.join(", "))
}

fn fmt_pairs(xs: &[(f64, f64)]) -> String {
    let inner: Vec<String> = xs
        .iter()
        .map(|&(l, r)| format!("[{}, {}]", fmt_f64(l), fmt_f64(r)))
        .collect();
    format!("[{}]", inner.join(", "))
}

/// Knobs for `analyze`.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    /// Truncation height for the Dirichlet-integral quadratures.
    pub ymax: f64,
    /// Maximum allowed `| |D(edge)| - 2 |` over the computed band edges.
    pub tol_edge: f64,
    pub skip_dirichlet: bool,
    pub skip_herglotz: bool,
    /// Include a wall-clock stamp (breaks byte-determinism on purpose).
    pub stamp: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            ymax: 12.0,
            tol_edge: 1e-9,
            skip_dirichlet: false,
            skip_herglotz: false,
            stamp: false,
        }
    }
}

/// Full analysis result: normalised geometry, asymptotic coefficients, the
/// certificate report, and the verification residuals.
#[derive(Debug, Clone)]
pub struct AnalysisDocument {
    pub input: OperatorInputDocument,
    pub shift: f64,
    pub c: f64,
    pub capacity: f64,
    pub edges: Vec<f64>,
    pub bands: Vec<(f64, f64)>,
    pub gaps: Vec<(f64, f64)>,
    pub closed_gaps: Vec<bool>,
    pub z_gaps: Vec<(f64, f64)>,
    pub slit_heights: Vec<f64>,
    pub edge_residual: f64,
    pub q_coeffs: Vec<f64>,
    pub bounds: BoundsReport,
    pub trace_moments: Vec<(usize, MomentCheck)>,
    pub dirichlet1: Option<DirichletCheck>,
    pub dirichlet2: Option<DirichletCheck>,
    pub vertical: VerticalCheck,
    pub herglotz_residual: Option<f64>,
    pub stamp: Option<u64>,
}

/// Runs the full pipeline: normalise, band structure, quasimomentum model,
/// certificate, verifiers.
pub fn analyze(doc: &OperatorInputDocument, opts: &AnalysisOptions) -> Result<AnalysisDocument> {
    let j = doc.operator()?;
    let model = QuasimomentumModel::build(&j)?;
    let band = model.band_structure();
    let disc = model.discriminant();

    let edge_residual = band
        .edges
        .iter()
        .map(|&e| (disc.eval(e).abs() - 2.0).abs())
        .fold(0.0f64, f64::max);
    if edge_residual > opts.tol_edge {
        return Err(Error::Numerical(format!(
            "band-edge residual {edge_residual:e} exceeds --tol-edge {:e}",
            opts.tol_edge
        )));
    }

    let bounds = certify(&j)?;

    let q = j.q();
    let mut trace_moments = Vec::new();
    for n in 0..=4usize.min(2 * q - 1) {
        trace_moments.push((n, model.trace_moment_check(n)?));
    }

    let (dirichlet1, dirichlet2) = if opts.skip_dirichlet {
        (None, None)
    } else {
        (
            Some(model.dirichlet_integral_1(opts.ymax)?),
            Some(model.dirichlet_integral_2(opts.ymax)?),
        )
    };

    let vertical = model.vertical_identity_check()?;

    let herglotz_residual = if opts.skip_herglotz {
        None
    } else {
        let pts = [
            Complex64::new(std::f64::consts::PI / 4.0, 0.5),
            Complex64::new(std::f64::consts::PI / 2.0, 1.0),
            Complex64::new(3.0 * std::f64::consts::PI / 4.0, 0.75),
        ];
        let mut worst = 0.0f64;
        for z in pts {
            let kh = model.herglotz_k(z, 4096)?;
            let kc = model.k_complex(z)?;
            worst = worst.max((kh - kc).norm());
        }
        Some(worst)
    };

    let stamp = if opts.stamp {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    } else {
        None
    };

    Ok(AnalysisDocument {
        input: doc.clone(),
        shift: band.shift,
        c: band.c,
        capacity: band.capacity,
        edges: band.edges.clone(),
        bands: band.bands.clone(),
        gaps: band.gaps.clone(),
        closed_gaps: band.closed_gap_flags.clone(),
        z_gaps: model.z_gaps().gaps.clone(),
        slit_heights: model.slit_heights().to_vec(),
        edge_residual,
        q_coeffs: model.q_coeffs().to_vec(),
        bounds,
        trace_moments,
        dirichlet1,
        dirichlet2,
        vertical,
        herglotz_residual,
        stamp,
    })
}

fn bounds_json(rep: &BoundsReport, indent: &str) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "{indent}  \"q\": {},", rep.q);
    let _ = writeln!(s, "{indent}  \"c\": {},", fmt_f64(rep.c));
    let _ = writeln!(s, "{indent}  \"capacity\": {},", fmt_f64(rep.capacity));
    let _ = writeln!(s, "{indent}  \"hPlus\": {},", fmt_f64(rep.h_plus));
    let _ = writeln!(s, "{indent}  \"traceL\": {},", fmt_f64(rep.trace_l));
    let _ = writeln!(s, "{indent}  \"traceL2\": {},", fmt_f64(rep.trace_l2));
    let _ = writeln!(s, "{indent}  \"records\": [");
    for (i, r) in rep.records.iter().enumerate() {
        let comma = if i + 1 < rep.records.len() { "," } else { "" };
        let _ = writeln!(
            s,
            "{indent}    {{\"name\": \"{}\", \"lhs\": {}, \"rhs\": {}, \"relation\": \"{}\", \"satisfied\": {}, \"margin\": {}, \"degenerate\": {}}}{comma}",
            r.name,
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            r.relation.symbol(),
            r.satisfied,
            fmt_f64(r.margin),
            r.degenerate,
        );
    }
    let _ = writeln!(s, "{indent}  ]");
    let _ = write!(s, "{indent}}}");
    s
}

fn dirichlet_json(d: &Option<DirichletCheck>) -> String {
    match d {
        None => "null".to_string(),
        Some(d) => format!(
            "{{\"integral\": {}, \"rhs\": {}, \"residual\": {}, \"tailBound\": {}}}",
            fmt_f64(d.integral),
            fmt_f64(d.rhs),
            fmt_f64(d.residual),
            fmt_f64(d.tail_bound)
        ),
    }
}

impl AnalysisDocument {
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"input\": {{");
        let _ = writeln!(s, "    \"q\": {},", self.input.q);
        let _ = writeln!(s, "    \"a\": {},", fmt_array(&self.input.a));
        let _ = writeln!(s, "    \"b\": {},", fmt_array(&self.input.b));
        let label = match &self.input.label {
            Some(l) => format!("\"{}\"", l.replace('"', "\\\"")),
            None => "null".to_string(),
        };
        let _ = writeln!(s, "    \"label\": {label}");
        let _ = writeln!(s, "  }},");
        let _ = writeln!(s, "  \"shift\": {},", fmt_f64(self.shift));
        let _ = writeln!(s, "  \"c\": {},", fmt_f64(self.c));
        let _ = writeln!(s, "  \"capacity\": {},", fmt_f64(self.capacity));
        let _ = writeln!(s, "  \"edges\": {},", fmt_array(&self.edges));
        let _ = writeln!(s, "  \"bands\": {},", fmt_pairs(&self.bands));
        let _ = writeln!(s, "  \"gaps\": {},", fmt_pairs(&self.gaps));
        let flags: Vec<String> = self.closed_gaps.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(s, "  \"closedGaps\": [{}],", flags.join(", "));
        let _ = writeln!(s, "  \"zGaps\": {},", fmt_pairs(&self.z_gaps));
        let _ = writeln!(s, "  \"slitHeights\": {},", fmt_array(&self.slit_heights));
        let _ = writeln!(s, "  \"edgeResidual\": {},", fmt_f64(self.edge_residual));
        let _ = writeln!(s, "  \"qCoefficients\": {},", fmt_array(&self.q_coeffs));
        let _ = writeln!(s, "  \"bounds\": {},", bounds_json(&self.bounds, "  "));
        let _ = writeln!(s, "  \"residuals\": {{");
        let _ = writeln!(s, "    \"traceMoments\": [");
        for (i, (n, m)) in self.trace_moments.iter().enumerate() {
            let comma = if i + 1 < self.trace_moments.len() { "," } else { "" };
            let _ = writeln!(
                s,
                "      {{\"n\": {n}, \"lhs\": {}, \"rhs\": {}, \"residual\": {}}}{comma}",
                fmt_f64(m.lhs),
                fmt_f64(m.rhs),
                fmt_f64(m.residual)
            );
        }
        let _ = writeln!(s, "    ],");
        let _ = writeln!(s, "    \"dirichlet1\": {},", dirichlet_json(&self.dirichlet1));
        let _ = writeln!(s, "    \"dirichlet2\": {},", dirichlet_json(&self.dirichlet2));
        let _ = writeln!(
            s,
            "    \"vertical\": {{\"lhs\": {}, \"rhs\": {}, \"residual\": {}}},",
            fmt_f64(self.vertical.lhs),
            fmt_f64(self.vertical.rhs),
            fmt_f64(self.vertical.residual)
        );
        let herglotz = match self.herglotz_residual {
            Some(r) => fmt_f64(r),
            None => "null".to_string(),
        };
        let _ = writeln!(s, "    \"herglotz\": {herglotz}");
        let _ = writeln!(s, "  }},");
        let stamp = match self.stamp {
            Some(t) => t.to_string(),
            None => "null".to_string(),
        };
        let _ = writeln!(s, "  \"stamp\": {stamp}");
        s.push_str("}\n");
        s
    }
}

/// Uniform boundary samples `x, lambda, D, u, v` (normalised coordinates)
/// as CSV with a header line.
pub fn sample_csv(doc: &OperatorInputDocument, n_points: usize) -> Result<String> {
    if n_points < 2 {
        return Err(Error::InvalidArgument("nPoints must be >= 2".into()));
    }
    let j = doc.operator()?;
    let model = QuasimomentumModel::build(&j)?;
    let mut out = String::from("x,lambda,D,u,v\n");
    for i in 0..n_points {
        let x = std::f64::consts::PI * i as f64 / (n_points - 1) as f64;
        let smp = model.boundary_sample(x);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(smp.x),
            fmt_f64(smp.lambda),
            fmt_f64(smp.d),
            fmt_f64(smp.u),
            fmt_f64(smp.v)
        );
    }
    Ok(out)
}

/// Comparison between the bisection band edges and the Bloch theta-sweep.
#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Hausdorff distance per band.
    pub per_band: Vec<f64>,
    pub max_distance: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"perBand\": {},", fmt_array(&self.per_band));
        let _ = writeln!(s, "  \"maxDistance\": {},", fmt_f64(self.max_distance));
        let _ = writeln!(s, "  \"threshold\": {},", fmt_f64(self.threshold));
        let _ = writeln!(s, "  \"pass\": {}", self.pass);
        s.push_str("}\n");
        s
    }
}

pub fn oracle_check(doc: &OperatorInputDocument, n_theta: usize) -> Result<OracleReport> {
    let j = doc.operator()?;
    let band = spectrum::band_edges(&j)?;
    let oracle = spectrum::bloch_oracle(&j, n_theta)?;
    let per_band: Vec<f64> = band
        .bands
        .iter()
        .zip(&oracle)
        .map(|(&(bl, bh), &(ol, oh))| (bl - ol).abs().max((bh - oh).abs()))
        .collect();
    let max_distance = per_band.iter().cloned().fold(0.0, f64::max);
    let threshold = 1e-3 * band.c;
    Ok(OracleReport {
        per_band,
        max_distance,
        threshold,
        pass: max_distance <= threshold,
    })
}

/// Writes `content` to `path` atomically: a sibling temporary file is
/// populated first and renamed into place, so no partial document survives
/// an error.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = dir.to_path_buf();
    let base = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    tmp.push(format!(".{base}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
