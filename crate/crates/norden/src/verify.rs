//! Check orchestration: sample points, run every applicable residual
//! check, and fold the results into a deterministic report.
//!
//! Which checks run depends on the manifest:
//!
//! * **Real charts** always get the signature check and the curvature
//!   symmetry suite, plus the Einstein check when an expected constant (or
//!   an override) is available.
//! * **Real charts of even dimension with realified lineage** (transform
//!   `realify`, `twin`, or `tower-level-*`) additionally get the full
//!   anti-Kähler suite: anti-Hermitian pairing, vanishing mixed block,
//!   holomorphy, parallel `J`, forbidden complex Christoffel blocks, the
//!   four curvature identities, the Nijenhuis residual, and — when the
//!   underlying holomorphic metric is recoverable (frame-backed manifests,
//!   or lineage parents that resolve in the catalog) — the Ricci block
//!   correspondence and the twin-metric comparisons.
//! * **Holomorphic and frame manifests** get the complex-field symmetry
//!   suite, the complex Einstein check when a constant is available, and
//!   the Christoffel block checks of their numeric realification.
//!
//! Per-point evaluation failures of a *pointwise* nature (branch cuts,
//! near-singular metrics or frames, division blowups) are counted as skips
//! for the affected checks; a check whose skips exceed 20% of the
//! requested points fails the run with a distinct exit code. All sampling
//! is counter-based, so a report is a pure function of
//! `(manifest, options)`.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antikahler::{self, ComplexStructure};
use crate::catalog;
use crate::error::Error;
use crate::expr::manifest::{Kind, Manifest};
use crate::field::Scalar;
use crate::generator;
use crate::geometry::{
    self, complex_metric_jet, complex_point, real_metric_jet, Curvature, MetricJet,
};
use crate::linalg;
use crate::sample;
use crate::Result;

/// Tolerance for structurally exact identities (anti-Hermitian pairing,
/// mixed block, Nijenhuis of the canonical structure).
pub const TOL_STRUCTURAL: f64 = 1e-12;
/// Tolerance for the curvature symmetry suite (relative).
pub const TOL_SYMMETRY: f64 = 1e-10;
/// Tolerance for the holomorphy-class checks (holomorphy, parallel J,
/// Christoffel blocks, twin connection match).
pub const TOL_HOLOMORPHY: f64 = 1e-9;
/// Number of random vector pairs per point for the curvature identities.
pub const LEMMA_TRIALS: usize = 16;
/// Fraction of requested points a check may skip before it fails.
pub const SKIP_BUDGET: f64 = 0.2;

/// Options controlling a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOptions {
    pub points: usize,
    pub seed: u64,
    /// Tolerance for the residual-class checks (Einstein, curvature
    /// identities, Ricci block match); structural checks keep their own
    /// tighter defaults.
    pub tol: f64,
    pub gamma_override: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            points: 64,
            seed: 0,
            tol: 1e-8,
            gamma_override: None,
        }
    }
}

/// How a report is rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRef {
    pub name: String,
    pub hash: String,
}

/// One check's outcome over all sampled points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Points actually evaluated.
    pub points: usize,
    /// Points skipped due to pointwise numerical failures.
    pub skipped: usize,
    /// Mean fitted Einstein constant (Einstein checks only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_hat: Option<f64>,
    /// Observed metric signature (signature check only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
}

/// Deterministic verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub manifest: ManifestRef,
    pub options: RunOptions,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    /// Exit code contract: 0 pass, 1 check failure, 3 numerical failure
    /// (some check exceeded the skip budget). Input/schema errors (2) occur
    /// before a report exists.
    pub fn exit_code(&self) -> i32 {
        let budget = SKIP_BUDGET * self.options.points as f64;
        if self
            .checks
            .iter()
            .any(|c| (c.skipped as f64) > budget)
        {
            3
        } else if !self.pass {
            1
        } else {
            0
        }
    }
}

/// Render a report as pretty JSON (stable field order, trailing newline)
/// or as human-readable text.
pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "manifest: {}  (sha256 {})\n",
                report.manifest.name, report.manifest.hash
            ));
            s.push_str(&format!(
                "options: points={} seed={} tol={:e}{}\n",
                report.options.points,
                report.options.seed,
                report.options.tol,
                match report.options.gamma_override {
                    Some(g) => format!(" gamma={g}"),
                    None => String::new(),
                }
            ));
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let mut extra = String::new();
                if let Some(g) = c.gamma_hat {
                    extra.push_str(&format!("  gamma_hat={g:.10}"));
                }
                if let Some((p, q)) = c.signature {
                    extra.push_str(&format!("  signature=({p},{q})"));
                }
                s.push_str(&format!(
                    "  {:<24} {}  max_residual={:<12.3e} tol={:.0e}  points={} skipped={}{}\n",
                    c.id, status, c.max_residual, c.tol, c.points, c.skipped, extra
                ));
            }
            s.push_str(&format!(
                "overall: {}\n",
                if report.pass { "PASS" } else { "FAIL" }
            ));
            s
        }
    }
}

/// Running accumulator for one check.
struct Acc {
    id: &'static str,
    tol: f64,
    max: f64,
    points: usize,
    skipped: usize,
    gamma_sum: f64,
    gamma_count: usize,
    signature_expected: Option<(usize, usize)>,
    signature_seen: Option<(usize, usize)>,
    signature_mismatches: usize,
}

impl Acc {
    fn new(id: &'static str, tol: f64) -> Self {
        Acc {
            id,
            tol,
            max: 0.0,
            points: 0,
            skipped: 0,
            gamma_sum: 0.0,
            gamma_count: 0,
            signature_expected: None,
            signature_seen: None,
            signature_mismatches: 0,
        }
    }

    fn ok(&mut self, residual: f64) {
        self.points += 1;
        if residual > self.max {
            self.max = residual;
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn gamma(&mut self, g: f64) {
        self.gamma_sum += g;
        self.gamma_count += 1;
    }

    fn into_record(self, requested: usize) -> CheckRecord {
        let budget = SKIP_BUDGET * requested as f64;
        let within_budget = (self.skipped as f64) <= budget;
        let is_signature = self.id == "signature";
        let pass = within_budget
            && if is_signature {
                self.signature_mismatches == 0 && self.points > 0
            } else {
                self.max <= self.tol
            };
        CheckRecord {
            id: self.id.to_string(),
            max_residual: if is_signature {
                self.signature_mismatches as f64
            } else {
                self.max
            },
            tol: if is_signature { 0.0 } else { self.tol },
            pass,
            points: self.points,
            skipped: self.skipped,
            gamma_hat: if self.gamma_count > 0 {
                Some(self.gamma_sum / self.gamma_count as f64)
            } else {
                None
            },
            signature: if is_signature {
                self.signature_seen
            } else {
                None
            },
        }
    }
}

/// Ordered set of accumulators, addressed by id.
struct Accs {
    list: Vec<Acc>,
}

impl Accs {
    fn new() -> Self {
        Accs { list: Vec::new() }
    }
    fn add(&mut self, id: &'static str, tol: f64) {
        self.list.push(Acc::new(id, tol));
    }
    fn get(&mut self, id: &str) -> &mut Acc {
        self.list
            .iter_mut()
            .find(|a| a.id == id)
            .unwrap_or_else(|| panic!("check '{id}' not planned"))
    }
    fn has(&self, id: &str) -> bool {
        self.list.iter().any(|a| a.id == id)
    }
    fn record(&mut self, id: &str, res: f64) {
        self.get(id).ok(res);
    }
    fn skip(&mut self, id: &str) {
        self.get(id).skip();
    }
    fn skip_all(&mut self, ids: &[&str]) {
        for id in ids {
            if self.has(id) {
                self.skip(id);
            }
        }
    }
}

/// Curvature symmetry residuals, relative to the tensor magnitudes:
/// (first/second-pair antisymmetry, pair interchange, first Bianchi,
/// Ricci symmetry).
fn symmetry_residuals<S: Scalar>(curv: &Curvature<S>) -> (f64, f64, f64, f64) {
    let n = curv.dim;
    let lower = curv.riemann_lower();
    let mut scale = 0.0_f64;
    for v in lower.iter() {
        scale = scale.max(v.abs());
    }
    let scale = 1.0 + scale;
    let (mut antisym, mut pair, mut bianchi) = (0.0_f64, 0.0_f64, 0.0_f64);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let r = lower[[a, b, c, d]];
                    antisym = antisym
                        .max((r + lower[[b, a, c, d]]).abs())
                        .max((r + lower[[a, b, d, c]]).abs());
                    pair = pair.max((r - lower[[c, d, a, b]]).abs());
                    bianchi = bianchi
                        .max((r + lower[[a, c, d, b]] + lower[[a, d, b, c]]).abs());
                }
            }
        }
    }
    let mut ricci_scale = 0.0_f64;
    let mut ricci_sym = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            ricci_scale = ricci_scale.max(curv.ricci[[a, b]].abs());
            ricci_sym = ricci_sym.max((curv.ricci[[a, b]] - curv.ricci[[b, a]]).abs());
        }
    }
    (
        antisym / scale,
        pair / scale,
        bianchi / scale,
        ricci_sym / (1.0 + ricci_scale),
    )
}

const SYMMETRY_IDS: [&str; 4] = ["riemann_antisym", "riemann_pair_sym", "bianchi1", "ricci_sym"];

fn record_symmetries<S: Scalar>(accs: &mut Accs, curv: &Curvature<S>) {
    let (a, p, b, r) = symmetry_residuals(curv);
    accs.record("riemann_antisym", a);
    accs.record("riemann_pair_sym", p);
    accs.record("bianchi1", b);
    accs.record("ricci_sym", r);
}

fn record_einstein<S: Scalar>(
    accs: &mut Accs,
    curv: &Curvature<S>,
    gamma_expected: Option<f64>,
) {
    let (gamma_fit, fit_res) = geometry::einstein_fit(&curv.ricci, &curv.g);
    let residual = match gamma_expected {
        Some(g) => geometry::einstein_residual(&curv.ricci, &curv.g, g),
        None => fit_res,
    };
    let acc = accs.get("einstein");
    acc.ok(residual);
    acc.gamma(gamma_fit);
}

/// What the anti-Kähler pairing checks need: the manifest's own holomorphic
/// metric, recovered either from its frame or from a catalog parent.
struct ComplexSide {
    /// Evaluate the manifest's own complex metric jet at `z`.
    source: ComplexSource,
    /// Twin partner for the connection comparison (a realify-flavored
    /// manifest over the same holomorphic metric), present for twins.
    twin_partner: Option<Manifest>,
    /// Einstein constant of the underlying holomorphic metric, for the
    /// twin complex-level check.
    parent_gamma: Option<f64>,
}

enum ComplexSource {
    /// The manifest itself is frame-backed; `complex_metric_jet` on it
    /// already yields its own holomorphic metric (twin scaling included).
    SelfFrame,
    /// A resolved parent manifest; `scale_i` marks a twin (h = i·ĝ).
    Parent { man: Box<Manifest>, scale_i: bool },
}

impl ComplexSide {
    fn metric_jet(&self, man: &Manifest, z: &[Complex64]) -> Result<MetricJet<Complex64>> {
        match &self.source {
            ComplexSource::SelfFrame => complex_metric_jet(man, z),
            ComplexSource::Parent { man: parent, scale_i } => {
                let jet = complex_metric_jet(parent, z)?;
                if *scale_i {
                    let i = Complex64::new(0.0, 1.0);
                    Ok(MetricJet {
                        dim: jet.dim,
                        g: jet.g.mapv(|v| i * v),
                        dg: jet.dg.mapv(|v| i * v),
                        ddg: jet.ddg.mapv(|v| i * v),
                    })
                } else {
                    Ok(jet)
                }
            }
        }
    }
}

fn resolve_complex_side(man: &Manifest) -> Option<ComplexSide> {
    let lineage = man.lineage.as_ref()?;
    let is_twin = lineage.transform == "twin";
    let parent = catalog::get(&lineage.parent)
        .ok()
        .filter(|p| p.kind != Kind::Real);

    let source = if man.is_frame_backed() {
        Some(ComplexSource::SelfFrame)
    } else {
        parent.as_ref().map(|p| ComplexSource::Parent {
            man: Box::new(p.clone()),
            scale_i: is_twin,
        })
    }?;

    let twin_partner = if is_twin {
        if man.is_frame_backed() {
            // Same frame, realify flavor: flip the recorded transform.
            let mut partner = man.clone();
            if let Some(l) = partner.lineage.as_mut() {
                l.transform = "realify".into();
            }
            Some(partner)
        } else {
            parent.as_ref().and_then(|p| generator::realify(p).ok())
        }
    } else {
        None
    };
    let parent_gamma = parent.as_ref().and_then(|p| p.expected_gamma);

    Some(ComplexSide {
        source,
        twin_partner,
        parent_gamma,
    })
}

/// Run every applicable check on `man` and fold the outcome into a report.
pub fn run_verify(man: &Manifest, opts: &RunOptions) -> Result<Report> {
    if opts.points == 0 {
        return Err(Error::Schema("points must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Schema("tol must be positive".into()));
    }
    match man.kind {
        Kind::Real => run_verify_real(man, opts),
        Kind::Holomorphic | Kind::Frame => run_verify_complex(man, opts),
    }
}

fn finish(man: &Manifest, opts: &RunOptions, accs: Accs) -> Result<Report> {
    let checks: Vec<CheckRecord> = accs
        .list
        .into_iter()
        .map(|a| a.into_record(opts.points))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        manifest: ManifestRef {
            name: man.name.clone(),
            hash: man.content_hash(),
        },
        options: opts.clone(),
        checks,
        pass,
    })
}

fn run_verify_real(man: &Manifest, opts: &RunOptions) -> Result<Report> {
    let n = man.real_dim();
    let gamma_expected = opts.gamma_override.or(man.expected_gamma);
    let anti_kahler = n % 2 == 0 && man.has_antikahler_lineage();
    let complex_side = if anti_kahler { resolve_complex_side(man) } else { None };
    let is_twin = man
        .lineage
        .as_ref()
        .map(|l| l.transform == "twin")
        .unwrap_or(false);

    let mut accs = Accs::new();
    accs.add("signature", 0.0);
    accs.get("signature").signature_expected = man.expected_signature;
    for id in SYMMETRY_IDS {
        accs.add(id, TOL_SYMMETRY);
    }
    if gamma_expected.is_some() {
        accs.add("einstein", opts.tol);
    }
    if anti_kahler {
        accs.add("anti_hermitian", TOL_STRUCTURAL);
        accs.add("mixed_block", TOL_STRUCTURAL);
        accs.add("holomorphy", TOL_HOLOMORPHY);
        accs.add("parallel_j", TOL_HOLOMORPHY);
        accs.add("cx_christoffel_forbidden", TOL_HOLOMORPHY);
        accs.add("cx_christoffel_conj", TOL_HOLOMORPHY);
        accs.add("lemma_riem_j_commute", opts.tol);
        accs.add("lemma_riem_j_rotation", opts.tol);
        accs.add("lemma_riem_j_swap", opts.tol);
        accs.add("lemma_ricci_j_invariance", opts.tol);
        accs.add("nijenhuis", TOL_STRUCTURAL);
        if complex_side.is_some() {
            accs.add("ricci_block_match", opts.tol);
            accs.add("ricci_mixed_block", opts.tol);
        }
        if let Some(side) = &complex_side {
            if side.twin_partner.is_some() {
                accs.add("twin_gamma_match", TOL_HOLOMORPHY);
            }
            if is_twin && side.parent_gamma.is_some() {
                accs.add("twin_complex_einstein", opts.tol);
            }
        }
    }

    let all_ids: Vec<&'static str> = accs.list.iter().map(|a| a.id).collect();
    let curvature_ids: Vec<&'static str> = all_ids
        .iter()
        .copied()
        .filter(|id| *id != "signature")
        .collect();

    let m = n / 2; // only used when anti_kahler
    let jmat = if anti_kahler { Some(antikahler::canonical_j(m)) } else { None };
    let jstruct = ComplexStructure::Canonical { m };

    let points_key = sample::stream_key(opts.seed, sample::stream::POINTS);
    let vectors_key = sample::stream_key(opts.seed, sample::stream::VECTORS);

    for idx in 0..opts.points {
        let p = sample::point_in_box(points_key, idx as u64, &man.sample_box);

        let jet = match real_metric_jet(man, &p) {
            Ok(j) => j,
            Err(e) if e.is_pointwise() => {
                accs.skip_all(&all_ids);
                continue;
            }
            Err(e) => return Err(e),
        };

        // Signature needs only the metric value.
        match linalg::signature(&jet.g) {
            Ok(sig) => {
                let acc = accs.get("signature");
                acc.points += 1;
                let expected = acc.signature_expected.or(acc.signature_seen);
                if acc.signature_seen.is_none() {
                    acc.signature_seen = Some(acc.signature_expected.unwrap_or(sig));
                }
                if let Some(exp) = expected {
                    if sig != exp {
                        acc.signature_mismatches += 1;
                    }
                }
            }
            Err(e) if e.is_pointwise() => accs.skip("signature"),
            Err(e) => return Err(e),
        }

        // Jet-level anti-Kähler checks run even if curvature later fails.
        if anti_kahler {
            let j = jmat.as_ref().expect("J exists in anti-Kähler mode");
            accs.record(
                "anti_hermitian",
                antikahler::anti_hermitian_residual(&jet.g, j),
            );
            let cc = antikahler::complex_components(&jet.g)?;
            let mixed_max = cc
                .mixed
                .iter()
                .fold(0.0_f64, |mx, v| mx.max(v.norm()))
                .max(cc.conj_defect);
            accs.record("mixed_block", mixed_max);
            accs.record("holomorphy", antikahler::holomorphy_residual(&jet)?);
            match antikahler::complex_christoffel_blocks(&jet) {
                Ok(blocks) => {
                    accs.record("cx_christoffel_forbidden", blocks.forbidden);
                    accs.record("cx_christoffel_conj", blocks.conj_defect);
                }
                Err(e) if e.is_pointwise() => {
                    accs.skip_all(&["cx_christoffel_forbidden", "cx_christoffel_conj"]);
                }
                Err(e) => return Err(e),
            }
            accs.record("nijenhuis", antikahler::nijenhuis_residual(&jstruct, &p)?);
        }

        let curv = match jet.curvature() {
            Ok(c) => c,
            Err(e) if e.is_pointwise() => {
                let jetless: Vec<&str> = curvature_ids
                    .iter()
                    .copied()
                    .filter(|id| {
                        !matches!(
                            *id,
                            "anti_hermitian"
                                | "mixed_block"
                                | "holomorphy"
                                | "cx_christoffel_forbidden"
                                | "cx_christoffel_conj"
                                | "nijenhuis"
                        )
                    })
                    .collect();
                accs.skip_all(&jetless);
                continue;
            }
            Err(e) => return Err(e),
        };

        record_symmetries(&mut accs, &curv);
        if accs.has("einstein") {
            record_einstein(&mut accs, &curv, gamma_expected);
        }

        if anti_kahler {
            let j = jmat.as_ref().expect("J exists in anti-Kähler mode");
            accs.record(
                "parallel_j",
                antikahler::parallel_j_residual(&curv, &jstruct, &p)?,
            );
            let ids = antikahler::curvature_identity_residuals(
                &curv,
                j,
                LEMMA_TRIALS,
                sample::u64_at(vectors_key, idx as u64),
            );
            accs.record("lemma_riem_j_commute", ids.r15a);
            accs.record("lemma_riem_j_rotation", ids.r15b);
            accs.record("lemma_riem_j_swap", ids.r15c);
            accs.record("lemma_ricci_j_invariance", ids.r16);

            if let Some(side) = &complex_side {
                let z = complex_point(&p)?;
                match side
                    .metric_jet(man, &z)
                    .and_then(|cjet| cjet.curvature())
                {
                    Ok(ccurv) => {
                        let blocks =
                            antikahler::ricci_block_match(&curv.ricci, &ccurv.ricci)?;
                        accs.record("ricci_block_match", blocks.block);
                        accs.record("ricci_mixed_block", blocks.mixed);
                        if accs.has("twin_complex_einstein") {
                            let gamma = side
                                .parent_gamma
                                .expect("planned only with a parent gamma");
                            accs.record(
                                "twin_complex_einstein",
                                antikahler::twin_einstein_residual(
                                    &ccurv.ricci,
                                    &ccurv.g,
                                    gamma,
                                ),
                            );
                        }
                    }
                    Err(e) if e.is_pointwise() => {
                        accs.skip_all(&[
                            "ricci_block_match",
                            "ricci_mixed_block",
                            "twin_complex_einstein",
                        ]);
                    }
                    Err(e) => return Err(e),
                }

                if let Some(partner) = &side.twin_partner {
                    match real_metric_jet(partner, &p).and_then(|pj| pj.curvature()) {
                        Ok(pcurv) => {
                            accs.record(
                                "twin_gamma_match",
                                antikahler::gamma_difference(&curv.gamma, &pcurv.gamma),
                            );
                        }
                        Err(e) if e.is_pointwise() => accs.skip("twin_gamma_match"),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }

    finish(man, opts, accs)
}

fn run_verify_complex(man: &Manifest, opts: &RunOptions) -> Result<Report> {
    let m = man.dim;
    let gamma_expected = opts.gamma_override.or(man.expected_gamma);

    let mut accs = Accs::new();
    for id in SYMMETRY_IDS {
        accs.add(id, TOL_SYMMETRY);
    }
    if gamma_expected.is_some() {
        accs.add("einstein", opts.tol);
    }
    accs.add("cx_christoffel_forbidden", TOL_HOLOMORPHY);
    accs.add("cx_christoffel_conj", TOL_HOLOMORPHY);

    let all_ids: Vec<&'static str> = accs.list.iter().map(|a| a.id).collect();
    let points_key = sample::stream_key(opts.seed, sample::stream::POINTS);

    for idx in 0..opts.points {
        let raw = sample::point_in_box(points_key, idx as u64, &man.sample_box);
        let z: Vec<Complex64> = (0..m)
            .map(|a| Complex64::new(raw[a], raw[m + a]))
            .collect();

        let cjet = match complex_metric_jet(man, &z) {
            Ok(j) => j,
            Err(e) if e.is_pointwise() => {
                accs.skip_all(&all_ids);
                continue;
            }
            Err(e) => return Err(e),
        };

        // Christoffel block checks evaluate the metric's realification.
        let real_jet = geometry::realify_jet(&cjet, false);
        match antikahler::complex_christoffel_blocks(&real_jet) {
            Ok(blocks) => {
                accs.record("cx_christoffel_forbidden", blocks.forbidden);
                accs.record("cx_christoffel_conj", blocks.conj_defect);
            }
            Err(e) if e.is_pointwise() => {
                accs.skip_all(&["cx_christoffel_forbidden", "cx_christoffel_conj"]);
            }
            Err(e) => return Err(e),
        }

        let curv = match cjet.curvature() {
            Ok(c) => c,
            Err(e) if e.is_pointwise() => {
                let mut ids: Vec<&str> = SYMMETRY_IDS.to_vec();
                if accs.has("einstein") {
                    ids.push("einstein");
                }
                accs.skip_all(&ids);
                continue;
            }
            Err(e) => return Err(e),
        };
        record_symmetries(&mut accs, &curv);
        if accs.has("einstein") {
            record_einstein(&mut accs, &curv, gamma_expected);
        }
    }

    finish(man, opts, accs)
}

/// Curvature tensors at one explicit point, for the `curvature` command.
/// Real-chart manifests take `dim` coordinates; holomorphic and frame
/// manifests take `2·dim` values read as `[Re z.., Im z..]` and report
/// complex tensors as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureOutput {
    pub manifest: String,
    pub point: Vec<f64>,
    pub g: serde_json::Value,
    pub gamma: serde_json::Value,
    pub riemann: serde_json::Value,
    pub ricci: serde_json::Value,
    pub scalar: serde_json::Value,
    pub det: serde_json::Value,
}

fn json_scalar<S: Scalar>(v: S) -> serde_json::Value {
    if S::FIELD == crate::field::Field::Real {
        serde_json::json!(v.re())
    } else {
        serde_json::json!([v.re(), v.im()])
    }
}

fn curvature_json<S: Scalar>(man: &Manifest, point: &[f64], curv: &Curvature<S>) -> CurvatureOutput {
    let n = curv.dim;
    let mat = |m: &Array2<S>| -> serde_json::Value {
        serde_json::Value::Array(
            (0..n)
                .map(|i| {
                    serde_json::Value::Array((0..n).map(|j| json_scalar(m[[i, j]])).collect())
                })
                .collect(),
        )
    };
    let gamma = serde_json::Value::Array(
        (0..n)
            .map(|a| {
                serde_json::Value::Array(
                    (0..n)
                        .map(|b| {
                            serde_json::Value::Array(
                                (0..n).map(|c| json_scalar(curv.gamma[[a, b, c]])).collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    );
    let riemann = serde_json::Value::Array(
        (0..n)
            .map(|a| {
                serde_json::Value::Array(
                    (0..n)
                        .map(|b| {
                            serde_json::Value::Array(
                                (0..n)
                                    .map(|c| {
                                        serde_json::Value::Array(
                                            (0..n)
                                                .map(|d| {
                                                    json_scalar(curv.riemann[[a, b, c, d]])
                                                })
                                                .collect(),
                                        )
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect(),
    );
    CurvatureOutput {
        manifest: man.name.clone(),
        point: point.to_vec(),
        g: mat(&curv.g),
        gamma,
        riemann,
        ricci: mat(&curv.ricci),
        scalar: json_scalar(curv.scalar),
        det: json_scalar(curv.det),
    }
}

/// Evaluate curvature at one point for the CLI.
pub fn curvature_at(man: &Manifest, point: &[f64]) -> Result<CurvatureOutput> {
    match man.kind {
        Kind::Real => {
            let curv = real_metric_jet(man, point)?.curvature()?;
            Ok(curvature_json(man, point, &curv))
        }
        Kind::Holomorphic | Kind::Frame => {
            let m = man.dim;
            if point.len() != 2 * m {
                return Err(Error::DimensionMismatch(format!(
                    "manifest '{}' needs {} values (re parts then im parts), got {}",
                    man.name,
                    2 * m,
                    point.len()
                )));
            }
            let z: Vec<Complex64> = (0..m)
                .map(|a| Complex64::new(point[a], point[m + a]))
                .collect();
            let curv = complex_metric_jet(man, &z)?.curvature()?;
            Ok(curvature_json(man, point, &curv))
        }
    }
}
