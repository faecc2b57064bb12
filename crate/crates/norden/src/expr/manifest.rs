//! Metric manifests: the JSON interchange format for metrics.
//!
//! A manifest describes one metric in one chart. Three kinds exist:
//!
//! * `"real"` — a real metric on `dim` real coordinates; `components` holds
//!   the lower triangle of `g_μν` as expression text (row `i` has `i + 1`
//!   entries). Realified metrics may use `re`/`im` and complex constants.
//! * `"holomorphic"` — a holomorphic metric on `dim` complex coordinates;
//!   `components` holds the lower triangle of `ĝ_ab`. `re`/`im` are
//!   rejected: components must be analytic.
//! * `"frame"` — a holomorphic metric given implicitly by a square matrix of
//!   holomorphic vector fields (`frame[a]` lists the components `e_a^μ` of
//!   the `a`-th field); the metric makes the frame orthonormal, so
//!   `ĝ = Fᵀ F` for `F = E⁻¹` evaluated per point.
//!
//! One special form supports realified frame metrics, which have no
//! closed-form component expressions: kind `"real"` with a `frame` field and
//! a `realify`/`twin` lineage. Its frame entries are written in derived
//! complex coordinate names `z1..zm`, where `z^a = x^a + i y^a` pairs the
//! manifest's real coordinates.
//!
//! `sample_box` has one `[lo, hi]` row per real degree of freedom: `dim`
//! rows for real manifests, `2*dim` rows (real parts first, then imaginary
//! parts) for holomorphic and frame manifests.
//!
//! Saving is deterministic and `save ∘ load ∘ save` is byte-identical,
//! because expression text is canonicalized by the first save.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{parse, Expr};
use crate::error::Error;
use crate::{Result, MAX_REAL_DIM};

/// Manifest kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Real,
    Holomorphic,
    Frame,
}

/// Provenance record: which manifest this one was derived from, and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lineage {
    pub parent: String,
    pub transform: String,
}

/// A parsed, validated metric manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub name: String,
    pub kind: Kind,
    /// Coordinate count: real coordinates for `Real`, complex for the rest.
    pub dim: usize,
    pub coords: Vec<String>,
    /// Lower triangle of the metric components; row `i` has `i + 1` entries.
    /// `None` only for `Frame` manifests and realified frame metrics.
    pub components: Option<Vec<Vec<Expr>>>,
    /// Frame rows `e_a^μ` for `Frame` manifests (and realified frames).
    pub frame: Option<Vec<Vec<Expr>>>,
    /// One `[lo, hi]` row per real degree of freedom.
    pub sample_box: Vec<[f64; 2]>,
    /// Einstein constant this metric is expected to satisfy, if known.
    pub expected_gamma: Option<f64>,
    /// Expected metric signature `(p, q)` of the real metric, if known.
    pub expected_signature: Option<(usize, usize)>,
    pub lineage: Option<Lineage>,
}

/// Raw serde mirror of the JSON schema.
#[derive(Serialize, Deserialize)]
struct RawManifest {
    name: String,
    kind: Kind,
    dim: usize,
    coords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame: Option<Vec<Vec<String>>>,
    sample_box: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_signature: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lineage: Option<Lineage>,
}

/// Identifiers that cannot be coordinate names.
const RESERVED: [&str; 10] = [
    "i", "re", "im", "sqrt", "exp", "log", "sin", "cos", "sinh", "cosh",
];

impl Manifest {
    /// Number of real dimensions of the (possibly realified) metric.
    pub fn real_dim(&self) -> usize {
        match self.kind {
            Kind::Real => self.dim,
            Kind::Holomorphic | Kind::Frame => 2 * self.dim,
        }
    }

    /// Complex dimension `m` of the adapted-coordinate picture.
    ///
    /// Errors with [`Error::OddDimension`] for odd-dimensional real metrics.
    pub fn half_dim(&self) -> Result<usize> {
        match self.kind {
            Kind::Real => {
                if self.dim % 2 != 0 {
                    Err(Error::OddDimension(self.dim))
                } else {
                    Ok(self.dim / 2)
                }
            }
            Kind::Holomorphic | Kind::Frame => Ok(self.dim),
        }
    }

    /// Number of real sampling degrees of freedom (`sample_box` rows).
    pub fn sample_dim(&self) -> usize {
        match self.kind {
            Kind::Real => self.dim,
            Kind::Holomorphic | Kind::Frame => 2 * self.dim,
        }
    }

    /// Symmetric component lookup (indices into the full matrix).
    ///
    /// Panics if the manifest has no components; callers dispatch on
    /// [`Manifest::is_frame_backed`] first.
    pub fn component(&self, i: usize, j: usize) -> &Expr {
        let comps = self
            .components
            .as_ref()
            .expect("component access on a frame-backed manifest");
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        &comps[hi][lo]
    }

    /// True when the metric is defined through a frame matrix (kind `Frame`,
    /// or a realified frame metric of kind `Real`).
    pub fn is_frame_backed(&self) -> bool {
        self.components.is_none()
    }

    /// True when evaluating this real manifest requires complex arithmetic
    /// internally (`re`/`im` projections or complex constants).
    pub fn real_eval_needs_complex(&self) -> bool {
        match &self.components {
            Some(rows) => rows
                .iter()
                .flatten()
                .any(|e| e.contains_re_im() || e.contains_complex_const()),
            None => true,
        }
    }

    /// True when the lineage marks this real metric as a realification (or a
    /// twin or tower level), i.e. structurally anti-Kähler.
    pub fn has_antikahler_lineage(&self) -> bool {
        match &self.lineage {
            Some(l) => {
                l.transform == "realify"
                    || l.transform == "twin"
                    || l.transform.starts_with("tower-level-")
            }
            None => false,
        }
    }

    /// Coordinate names used to parse/print *frame* entries: the manifest's
    /// own coordinates for `Frame` kind, derived `z1..zm` names for
    /// realified frames.
    fn frame_coords(&self) -> Vec<String> {
        match self.kind {
            Kind::Frame => self.coords.clone(),
            _ => (1..=self.dim / 2).map(|a| format!("z{a}")).collect(),
        }
    }

    /// Parse a manifest from JSON text.
    pub fn from_json_str(text: &str) -> Result<Manifest> {
        let raw: RawManifest =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Manifest::from_raw(raw)
    }

    /// Serialize to canonical JSON (pretty, deterministic field and entry
    /// order, trailing newline).
    pub fn to_json_string(&self) -> String {
        let raw = self.to_raw();
        let mut s = serde_json::to_string_pretty(&raw).expect("manifest serialization");
        s.push('\n');
        s
    }

    /// SHA-256 of the canonical serialization, as lowercase hex.
    pub fn content_hash(&self) -> String {
        let bytes = self.to_json_string();
        let digest = Sha256::digest(bytes.as_bytes());
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }

    fn to_raw(&self) -> RawManifest {
        let components = self.components.as_ref().map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|e| e.to_text(&self.coords)).collect())
                .collect()
        });
        let frame_coords = self.frame_coords();
        let frame = self.frame.as_ref().map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|e| e.to_text(&frame_coords)).collect())
                .collect()
        });
        RawManifest {
            name: self.name.clone(),
            kind: self.kind,
            dim: self.dim,
            coords: self.coords.clone(),
            components,
            frame,
            sample_box: self.sample_box.clone(),
            expected_gamma: self.expected_gamma,
            expected_signature: self.expected_signature.map(|(p, q)| [p, q]),
            lineage: self.lineage.clone(),
        }
    }

    fn from_raw(raw: RawManifest) -> Result<Manifest> {
        let mut man = Manifest {
            name: raw.name,
            kind: raw.kind,
            dim: raw.dim,
            coords: raw.coords,
            components: None,
            frame: None,
            sample_box: raw.sample_box,
            expected_gamma: raw.expected_gamma,
            expected_signature: raw.expected_signature.map(|[p, q]| (p, q)),
            lineage: raw.lineage,
        };
        man.validate_shell()?;

        if let Some(rows) = raw.components {
            let mut parsed = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                if row.len() != i + 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "component row {} has {} entries, expected {} (lower triangle)",
                        i,
                        row.len(),
                        i + 1
                    )));
                }
                let mut prow = Vec::with_capacity(row.len());
                for text in row {
                    prow.push(parse(text, &man.coords)?);
                }
                parsed.push(prow);
            }
            if parsed.len() != man.dim {
                return Err(Error::DimensionMismatch(format!(
                    "{} component rows for dimension {}",
                    parsed.len(),
                    man.dim
                )));
            }
            man.components = Some(parsed);
        }

        if let Some(rows) = raw.frame {
            let frame_coords = man.frame_coords();
            let m = frame_coords.len();
            if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                return Err(Error::DimensionMismatch(format!(
                    "frame must be a {m}x{m} matrix"
                )));
            }
            let mut parsed = Vec::with_capacity(m);
            for row in &rows {
                let mut prow = Vec::with_capacity(m);
                for text in row {
                    prow.push(parse(text, &frame_coords)?);
                }
                parsed.push(prow);
            }
            man.frame = Some(parsed);
        }

        man.validate_content()?;
        Ok(man)
    }

    /// Structural checks that do not need parsed expressions.
    fn validate_shell(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Schema("manifest name must be nonempty".into()));
        }
        if self.dim == 0 {
            return Err(Error::Schema("dimension must be at least 1".into()));
        }
        if self.real_dim() > MAX_REAL_DIM {
            return Err(Error::DimensionLimit {
                requested: self.real_dim(),
                limit: MAX_REAL_DIM,
            });
        }
        if self.coords.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinate names for dimension {}",
                self.coords.len(),
                self.dim
            )));
        }
        for name in &self.coords {
            let mut chars = name.chars();
            let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
            let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !(head_ok && tail_ok) {
                return Err(Error::Schema(format!(
                    "invalid coordinate name `{name}`"
                )));
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(Error::Schema(format!(
                    "coordinate name `{name}` is reserved"
                )));
            }
        }
        if self.coords.len()
            != self
                .coords
                .iter()
                .collect::<std::collections::BTreeSet<_>>()
                .len()
        {
            return Err(Error::Schema("coordinate names must be distinct".into()));
        }
        if self.sample_box.len() != self.sample_dim() {
            return Err(Error::DimensionMismatch(format!(
                "sample_box has {} rows, expected {}",
                self.sample_box.len(),
                self.sample_dim()
            )));
        }
        for (i, [lo, hi]) in self.sample_box.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Schema(format!(
                    "sample_box row {i} must be a finite nonempty interval, got [{lo}, {hi}]"
                )));
            }
        }
        if let Some((p, q)) = self.expected_signature {
            if p + q != self.real_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "expected_signature ({p}, {q}) does not sum to the real dimension {}",
                    self.real_dim()
                )));
            }
        }
        Ok(())
    }

    /// Checks on parsed expressions and the components/frame layout.
    fn validate_content(&self) -> Result<()> {
        match self.kind {
            Kind::Real => {
                if self.components.is_none() {
                    let frame_ok = self.frame.is_some()
                        && self.lineage.as_ref().is_some_and(|l| {
                            l.transform == "realify" || l.transform == "twin"
                        });
                    if !frame_ok {
                        return Err(Error::Schema(
                            "real manifests need components (frame-backed form requires \
                             a frame and a realify/twin lineage)"
                                .into(),
                        ));
                    }
                    if self.dim % 2 != 0 {
                        return Err(Error::OddDimension(self.dim));
                    }
                }
            }
            Kind::Holomorphic => {
                if self.components.is_none() {
                    return Err(Error::Schema(
                        "holomorphic manifests need components".into(),
                    ));
                }
                if self.frame.is_some() {
                    return Err(Error::Schema(
                        "holomorphic manifests cannot carry a frame".into(),
                    ));
                }
            }
            Kind::Frame => {
                if self.frame.is_none() {
                    return Err(Error::Schema("frame manifests need a frame".into()));
                }
                if self.components.is_some() {
                    return Err(Error::Schema(
                        "frame manifests define components implicitly; omit `components`"
                            .into(),
                    ));
                }
            }
        }

        // Analyticity: holomorphic data must not project to real/imaginary parts.
        if matches!(self.kind, Kind::Holomorphic | Kind::Frame) {
            if let Some(rows) = &self.components {
                for (i, row) in rows.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        if e.contains_re_im() {
                            return Err(Error::HolomorphyViolation(format!(
                                "component ({i},{j}) uses re/im; holomorphic components \
                                 must be analytic"
                            )));
                        }
                    }
                }
            }
        }
        if let Some(rows) = &self.frame {
            for (a, row) in rows.iter().enumerate() {
                for (mu, e) in row.iter().enumerate() {
                    if e.contains_re_im() {
                        return Err(Error::HolomorphyViolation(format!(
                            "frame entry ({a},{mu}) uses re/im; frames must be holomorphic"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Validate a programmatically constructed manifest.
    pub fn validated(self) -> Result<Manifest> {
        self.validate_shell()?;
        self.validate_content()?;
        Ok(self)
    }
}
