//! Acceptance suite. Each test exercises one shipped guarantee end to end
//! at full scale (64 sample points, 100 random expressions) and prints a
//! single `criterion N: PASS/FAIL` line; run with `--nocapture` to see
//! them.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::{Command, Output};

use norden::antikahler::{
    canonical_j, complex_christoffel_blocks, curvature_identity_residuals, holomorphy_residual,
    parallel_j_residual, ComplexStructure,
};
use norden::expr::{Expr, Func, Kind};
use norden::geometry::{complex_metric_jet, real_metric_jet};
use norden::jets::{eval_holomorphic, eval_real, Jet2};
use norden::verify::{run_verify, CheckRecord, Report, RunOptions};
use norden::{catalog, generator, sample};
use num_complex::Complex64;

fn criterion<F: FnOnce()>(n: usize, desc: &str, body: F) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {n}: PASS — {desc}"),
        Err(e) => {
            println!("criterion {n}: FAIL — {desc}");
            resume_unwind(e);
        }
    }
}

fn norden_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_norden"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report_from(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report JSON on stdout")
}

fn json_check<'a>(report: &'a serde_json::Value, id: &str) -> &'a serde_json::Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("check '{id}' missing"))
}

fn lib_verify(man: &norden::expr::Manifest, points: usize) -> Report {
    run_verify(
        man,
        &RunOptions {
            points,
            ..RunOptions::default()
        },
    )
    .unwrap()
}

fn lib_check<'a>(report: &'a Report, id: &str) -> &'a CheckRecord {
    report
        .checks
        .iter()
        .find(|c| c.id == id)
        .unwrap_or_else(|| panic!("check '{id}' missing"))
}

#[test]
fn criterion_01_sphere_oracle() {
    criterion(1, "sphere(m) verifies Einstein with γ̂ = m−1 at 64 points", || {
        for m in 2usize..=4 {
            let id = format!("catalog:sphere({m})");
            let out = norden_bin(&["verify", &id, "--points", "64"]);
            assert_eq!(out.status.code(), Some(0), "verify {id} failed");
            let report = report_from(&out);
            let einstein = json_check(&report, "einstein");
            let gamma_hat = einstein["gamma_hat"].as_f64().unwrap();
            let expected = (m - 1) as f64;
            assert!(
                (gamma_hat - expected).abs() / expected < 1e-8,
                "sphere({m}): γ̂ = {gamma_hat}"
            );
            assert!(einstein["max_residual"].as_f64().unwrap() < 1e-8);
            assert_eq!(einstein["points"].as_u64(), Some(64));
        }
    });
}

#[test]
fn criterion_02_realified_complex_sphere() {
    criterion(2, "realify(complex_sphere(2)) has signature (2,2) and is 1-Einstein", || {
        let man = generator::realify(&catalog::get("complex_sphere(2)").unwrap()).unwrap();
        assert_eq!(man.expected_gamma, Some(1.0));
        let report = lib_verify(&man, 64);
        let sig = lib_check(&report, "signature");
        assert!(sig.pass, "signature mismatches: {}", sig.max_residual);
        assert_eq!(sig.signature, Some((2, 2)));
        assert_eq!(sig.points, 64, "signature must hold at every sampled point");
        assert_eq!(sig.skipped, 0);
        let einstein = lib_check(&report, "einstein");
        assert!(einstein.pass && einstein.max_residual < 1e-8);
        assert_eq!(einstein.points, 64);
    });
}

#[test]
fn criterion_03_tower_dimensions_and_constant() {
    criterion(3, "tower sphere(2) ×2 gives dims 4, 8, signatures (2,2), (4,4), γ̂ = 1", || {
        let dir = tempfile::tempdir().unwrap();
        let out_dir = dir.path().join("tower");
        let out = norden_bin(&[
            "tower",
            "catalog:sphere(2)",
            "--levels",
            "2",
            "-o",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));

        for (level, dim, sig) in [(1u32, 4u64, [2u64, 2]), (2, 8, [4, 4])] {
            let path = out_dir.join(format!("level{level}.json"));
            let man: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
            assert_eq!(man["dim"].as_u64(), Some(dim), "level {level} dimension");

            let out = norden_bin(&["verify", path.to_str().unwrap(), "--points", "64"]);
            assert_eq!(out.status.code(), Some(0), "level {level} verify failed");
            let report = report_from(&out);
            let sig_rec = json_check(&report, "signature");
            let pair: Vec<u64> = sig_rec["signature"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect();
            assert_eq!(pair, sig, "level {level} signature");
            let gamma_hat = json_check(&report, "einstein")["gamma_hat"].as_f64().unwrap();
            assert!(
                (gamma_hat - 1.0).abs() < 1e-6,
                "level {level}: γ̂ = {gamma_hat}"
            );
        }
    });
}

#[test]
fn criterion_04_three_way_equivalence() {
    criterion(4, "holomorphy, forbidden blocks, and parallel J co-vanish (and co-fail)", || {
        // Every realification of a holomorphic-kind catalog entry.
        for id in catalog::census() {
            let parent = catalog::get(&id).unwrap();
            if parent.kind == Kind::Real {
                continue;
            }
            let man = generator::realify(&parent).unwrap();
            let report = lib_verify(&man, 64);
            for check_id in ["holomorphy", "cx_christoffel_forbidden", "parallel_j"] {
                let rec = lib_check(&report, check_id);
                assert!(
                    rec.max_residual < 1e-9 && rec.skipped == 0,
                    "realify({id})/{check_id}: {:.3e}",
                    rec.max_residual
                );
            }
        }

        // The corrupted entry fails all three at every point.
        let mutant = catalog::get("mutant_nonholo").unwrap();
        let jstruct = ComplexStructure::Canonical { m: 2 };
        let key = sample::stream_key(0, sample::stream::POINTS);
        for idx in 0..64u64 {
            let p = sample::point_in_box(key, idx, &mutant.sample_box);
            let jet = real_metric_jet(&mutant, &p).unwrap();
            let holo = holomorphy_residual(&jet).unwrap();
            let blocks = complex_christoffel_blocks(&jet).unwrap();
            let pj = parallel_j_residual(&jet.curvature().unwrap(), &jstruct, &p).unwrap();
            assert!(
                holo > 1e-3 && blocks.forbidden > 1e-3 && pj > 1e-3,
                "mutant at point {idx}: {holo:.2e} {:.2e} {pj:.2e}",
                blocks.forbidden
            );
        }
    });
}

#[test]
fn criterion_05_curvature_identities() {
    criterion(5, "the four curvature identities hold at 16 pairs × 64 points; Euclidean control fails", || {
        for parent_id in ["complex_sphere(2)", "heisenberg"] {
            let man = generator::realify(&catalog::get(parent_id).unwrap()).unwrap();
            let report = lib_verify(&man, 64);
            for check_id in [
                "lemma_riem_j_commute",
                "lemma_riem_j_rotation",
                "lemma_riem_j_swap",
                "lemma_ricci_j_invariance",
            ] {
                let rec = lib_check(&report, check_id);
                assert!(
                    rec.max_residual < 1e-8 && rec.points == 64,
                    "realify({parent_id})/{check_id}: {:.3e}",
                    rec.max_residual
                );
            }
        }

        // Euclidean S² with the canonical rotation J violates the rotation
        // identity decisively.
        let sphere = catalog::get("sphere(2)").unwrap();
        let j = canonical_j(1);
        let pkey = sample::stream_key(0, sample::stream::POINTS);
        let vkey = sample::stream_key(0, sample::stream::VECTORS);
        let mut worst = 0.0_f64;
        for idx in 0..64u64 {
            let p = sample::point_in_box(pkey, idx, &sphere.sample_box);
            let curv = real_metric_jet(&sphere, &p).unwrap().curvature().unwrap();
            let ids = curvature_identity_residuals(&curv, &j, 16, sample::u64_at(vkey, idx));
            worst = worst.max(ids.r15b);
        }
        assert!(worst >= 1e-2, "control violation only {worst:.3e}");
    });
}

#[test]
fn criterion_06_ricci_block_correspondence() {
    criterion(6, "real Ricci blocks reproduce the complex Ricci tensor, mixed block vanishes", || {
        for parent_id in ["complex_sphere(2)", "heisenberg"] {
            let man = generator::realify(&catalog::get(parent_id).unwrap()).unwrap();
            let report = lib_verify(&man, 64);
            for check_id in ["ricci_block_match", "ricci_mixed_block"] {
                let rec = lib_check(&report, check_id);
                assert!(
                    rec.max_residual < 1e-8 && rec.points == 64,
                    "realify({parent_id})/{check_id}: {:.3e}",
                    rec.max_residual
                );
            }
        }
    });
}

#[test]
fn criterion_07_twin_metric() {
    criterion(7, "twin shares the Levi-Civita connection; complex equation R̂ = −iγ·h holds", || {
        let twin = generator::twin(&catalog::get("complex_sphere(2)").unwrap()).unwrap();
        let report = lib_verify(&twin, 64);
        let conn = lib_check(&report, "twin_gamma_match");
        assert!(
            conn.max_residual < 1e-9 && conn.points == 64,
            "connection mismatch {:.3e}",
            conn.max_residual
        );
        let einstein = lib_check(&report, "twin_complex_einstein");
        assert!(
            einstein.max_residual < 1e-8 && einstein.points == 64,
            "complex equation residual {:.3e}",
            einstein.max_residual
        );
        assert!(report.pass, "twin verify failed overall");
    });
}

#[test]
fn criterion_08_nilmanifold_suite_and_regression() {
    criterion(8, "the nilmanifold frame metric passes the full suite; z = 0 curvature is locked", || {
        // Complex-side verification of the frame metric itself.
        let out = norden_bin(&["verify", "catalog:heisenberg", "--points", "64"]);
        assert_eq!(out.status.code(), Some(0), "complex-side verify failed");

        // Realified: the full anti-Kähler suite at 64 points.
        let man = generator::realify(&catalog::get("heisenberg").unwrap()).unwrap();
        let report = lib_verify(&man, 64);
        assert!(report.pass, "anti-Kähler suite failed");
        for check_id in [
            "anti_hermitian",
            "mixed_block",
            "holomorphy",
            "parallel_j",
            "cx_christoffel_forbidden",
            "cx_christoffel_conj",
            "nijenhuis",
        ] {
            assert!(lib_check(&report, check_id).pass, "{check_id} failed");
        }

        // Frozen origin fixture (first recorded via the finite-difference
        // oracle; see the curvature oracle tests in the library crate).
        let z0 = [Complex64::new(0.0, 0.0); 3];
        let curv = complex_metric_jet(&catalog::get("heisenberg").unwrap(), &z0)
            .unwrap()
            .curvature()
            .unwrap();
        let close = |v: Complex64, want: f64| (v - Complex64::new(want, 0.0)).norm() < 1e-12;
        assert!(close(curv.scalar, -0.5));
        assert!(close(curv.ricci[[0, 0]], -0.5));
        assert!(close(curv.ricci[[1, 1]], 0.5));
        assert!(close(curv.ricci[[2, 2]], -0.5));
        assert!(close(curv.riemann[[0, 1, 0, 1]], 0.25));
        assert!(close(curv.riemann[[0, 2, 0, 2]], -0.75));
        assert!(close(curv.riemann[[1, 2, 1, 2]], 0.25));
    });
}

// ---------------------------------------------------------------------
// Criterion 9: independent finite-difference re-check of the jets.

const FD_H: f64 = 3e-6;
const FD_TOL: f64 = 1e-6;
const FD_MAG_LIMIT: f64 = 100.0;

fn magnitudes_real(j: &Jet2<f64>) -> f64 {
    let mut m = j.value.abs();
    for v in &j.grad {
        m = m.max(v.abs());
    }
    for a in 0..j.n() {
        for b in 0..j.n() {
            m = m.max(j.hess(a, b).abs());
        }
    }
    m
}

fn fd_check_real(e: &Expr, p: &[f64]) -> Option<(f64, f64)> {
    let jet = eval_real(e, p).ok()?;
    if magnitudes_real(&jet) > FD_MAG_LIMIT {
        return None;
    }
    let n = p.len();
    let mut hess_scale = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            hess_scale = hess_scale.max(jet.hess(a, b).abs());
        }
    }
    let (mut ge, mut he) = (0.0_f64, 0.0_f64);
    for i in 0..n {
        let h = FD_H * (1.0 + p[i].abs());
        let mut pp = p.to_vec();
        let mut pm = p.to_vec();
        pp[i] += h;
        pm[i] -= h;
        let jp = eval_real(e, &pp).ok()?;
        let jm = eval_real(e, &pm).ok()?;
        if magnitudes_real(&jp) > FD_MAG_LIMIT || magnitudes_real(&jm) > FD_MAG_LIMIT {
            return None;
        }
        let fd = (jp.value - jm.value) / (2.0 * h);
        ge = ge.max((fd - jet.grad[i]).abs() / (1.0 + jet.grad[i].abs()));
        for k in 0..n {
            let fdh = (jp.grad[k] - jm.grad[k]) / (2.0 * h);
            he = he.max((fdh - jet.hess(k, i)).abs() / (1.0 + hess_scale));
        }
    }
    Some((ge, he))
}

fn fd_check_complex(e: &Expr, z: &[Complex64]) -> Option<(f64, f64)> {
    let jet = eval_holomorphic(e, z).ok()?;
    let mag = |j: &Jet2<Complex64>| {
        let mut m = j.value.norm();
        for v in &j.grad {
            m = m.max(v.norm());
        }
        for a in 0..j.n() {
            for b in 0..j.n() {
                m = m.max(j.hess(a, b).norm());
            }
        }
        m
    };
    if mag(&jet) > FD_MAG_LIMIT {
        return None;
    }
    let n = z.len();
    let mut hess_scale = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            hess_scale = hess_scale.max(jet.hess(a, b).norm());
        }
    }
    let (mut ge, mut he) = (0.0_f64, 0.0_f64);
    for i in 0..n {
        let h = FD_H * (1.0 + z[i].norm());
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        zp[i] += Complex64::new(h, 0.0);
        zm[i] -= Complex64::new(h, 0.0);
        let jp = eval_holomorphic(e, &zp).ok()?;
        let jm = eval_holomorphic(e, &zm).ok()?;
        if mag(&jp) > FD_MAG_LIMIT || mag(&jm) > FD_MAG_LIMIT {
            return None;
        }
        let fd = (jp.value - jm.value) / (2.0 * h);
        ge = ge.max((fd - jet.grad[i]).norm() / (1.0 + jet.grad[i].norm()));
        for k in 0..n {
            let fdh = (jp.grad[k] - jm.grad[k]) / (2.0 * h);
            he = he.max((fdh - jet.hess(k, i)).norm() / (1.0 + hess_scale));
        }
    }
    Some((ge, he))
}

struct ExprGen {
    key: u64,
    counter: u64,
}

impl ExprGen {
    fn next(&mut self) -> u64 {
        self.counter += 1;
        sample::u64_at(self.key, self.counter)
    }
    fn gen(&mut self, depth: usize, nvars: usize) -> Expr {
        let roll = self.next() % 100;
        if depth == 0 || roll < 28 {
            return if roll % 3 != 0 {
                Expr::var(self.next() as usize % nvars)
            } else {
                let u = (self.next() >> 11) as f64 / (1u64 << 53) as f64;
                Expr::real(-2.0 + 4.0 * u)
            };
        }
        let a = self.gen(depth - 1, nvars);
        match roll {
            28..=45 => Expr::add(a, self.gen(depth - 1, nvars)),
            46..=59 => Expr::sub(a, self.gen(depth - 1, nvars)),
            60..=73 => Expr::mul(a, self.gen(depth - 1, nvars)),
            74..=79 => Expr::div(a, self.gen(depth - 1, nvars)),
            80..=86 => Expr::pow_int(a, (self.next() % 6) as i32 - 2),
            _ => Expr::func(Func::ALL[self.next() as usize % Func::ALL.len()], a),
        }
    }
}

#[test]
fn criterion_09_ad_soundness() {
    criterion(9, "jets match central differences on 100 random expressions and all catalog components", || {
        let mut gen = ExprGen {
            key: sample::stream_key(2024, sample::stream::EXPRS),
            counter: 0,
        };
        let pkey = sample::stream_key(2024, sample::stream::POINTS);
        let sample_box = [[-0.8, 0.8]; 3];
        let mut checked = 0usize;
        let mut attempts = 0u64;
        while checked < 100 {
            attempts += 1;
            assert!(attempts < 3000, "only {checked} checkable expressions");
            let e = gen.gen(4, 3);
            let p = sample::point_in_box(pkey, attempts, &sample_box);
            if let Some((ge, he)) = fd_check_real(&e, &p) {
                assert!(ge <= FD_TOL, "gradient mismatch {ge:.3e}");
                assert!(he <= FD_TOL, "hessian mismatch {he:.3e}");
                checked += 1;
            }
        }

        for id in catalog::census() {
            let man = catalog::get(&id).unwrap();
            let exprs = man.components.as_ref().or(man.frame.as_ref()).unwrap();
            for idx in 0..2u64 {
                let raw = sample::point_in_box(pkey, idx, &man.sample_box);
                for row in exprs {
                    for e in row {
                        let res = match man.kind {
                            Kind::Real => fd_check_real(e, &raw),
                            Kind::Holomorphic | Kind::Frame => {
                                let m = man.dim;
                                let z: Vec<Complex64> = (0..m)
                                    .map(|a| Complex64::new(raw[a], raw[m + a]))
                                    .collect();
                                fd_check_complex(e, &z)
                            }
                        };
                        let (ge, he) = res.unwrap_or_else(|| panic!("{id}: not checkable"));
                        assert!(
                            ge <= FD_TOL && he <= FD_TOL,
                            "{id}: grad {ge:.3e} hess {he:.3e}"
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_10_symmetry_suite() {
    criterion(10, "Riemann/Ricci symmetries < 1e-10 on every entry; flat curvature < 1e-12", || {
        for id in catalog::census() {
            let man = catalog::get(&id).unwrap();
            let report = lib_verify(&man, 64);
            let strict = id.starts_with("flat(");
            for check_id in ["riemann_antisym", "riemann_pair_sym", "bianchi1", "ricci_sym"] {
                let rec = lib_check(&report, check_id);
                let bound = if strict { 1e-12 } else { 1e-10 };
                assert!(
                    rec.max_residual < bound && rec.skipped == 0,
                    "{id}/{check_id}: {:.3e}",
                    rec.max_residual
                );
            }
        }

        // Flat entries: the tensors themselves vanish to 1e-12.
        let key = sample::stream_key(0, sample::stream::POINTS);
        for id in ["flat(2,0)", "flat(1,1)", "flat(2,2)"] {
            let man = catalog::get(id).unwrap();
            for idx in 0..16u64 {
                let p = sample::point_in_box(key, idx, &man.sample_box);
                let curv = real_metric_jet(&man, &p).unwrap().curvature().unwrap();
                let worst = curv
                    .riemann
                    .iter()
                    .chain(curv.ricci.iter())
                    .fold(0.0_f64, |m, v| m.max(v.abs()));
                assert!(worst < 1e-12, "{id}: curvature {worst:.3e}");
            }
        }
    });
}
