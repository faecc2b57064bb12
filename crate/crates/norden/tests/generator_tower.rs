//! End-to-end tests for the constructive pipeline: complexification,
//! realification (plain and twin flavor), the iterated doubling tower, and
//! the guard rails around each.

use norden::error::Error;
use norden::expr::parse;
use norden::geometry::{complex_metric_jet, real_metric_jet};
use norden::jets::{eval_holomorphic, eval_real_view};
use norden::verify::{run_verify, RunOptions};
use norden::{catalog, generator, sample};
use num_complex::Complex64;

#[test]
fn tower_levels_are_einstein_with_doubled_signature() {
    let seed = catalog::get("sphere(2)").unwrap();
    let levels = generator::tower(&seed, 2).unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels[0].manifest.name, "sphere(2)");
    assert_eq!(levels[1].manifest.name, "sphere(2)_level1");
    assert_eq!(levels[2].manifest.name, "sphere(2)_level2");
    assert_eq!(levels[1].manifest.real_dim(), 4);
    assert_eq!(levels[2].manifest.real_dim(), 8);
    assert_eq!(levels[1].manifest.expected_signature, Some((2, 2)));
    assert_eq!(levels[2].manifest.expected_signature, Some((4, 4)));
    assert_eq!(levels[1].manifest.expected_gamma, Some(1.0));
    assert_eq!(levels[2].manifest.expected_gamma, Some(1.0));
    assert_eq!(
        levels[2].manifest.lineage.as_ref().map(|l| l.parent.as_str()),
        Some("sphere(2)_level1")
    );

    let opts = RunOptions {
        points: 12,
        ..RunOptions::default()
    };
    for level in &levels[1..] {
        let report = run_verify(&level.manifest, &opts).unwrap();
        assert!(
            report.pass,
            "{} failed: {}",
            level.manifest.name,
            norden::verify::render(&report, norden::verify::OutputFormat::Text)
        );
        let einstein = report
            .checks
            .iter()
            .find(|c| c.id == "einstein")
            .expect("einstein check planned");
        let gamma_hat = einstein.gamma_hat.expect("fitted constant");
        assert!(
            (gamma_hat - 1.0).abs() < 1e-6,
            "{}: fitted constant {gamma_hat}",
            level.manifest.name
        );
    }
}

#[test]
fn realified_pairing_matches_tangent_contraction() {
    let parent = catalog::get("complex_sphere(2)").unwrap();
    let real = generator::realify(&parent).unwrap();
    let m = parent.dim;
    let pkey = sample::stream_key(71, sample::stream::POINTS);
    let vkey = sample::stream_key(71, sample::stream::VECTORS);

    for idx in 0..6u64 {
        let p = sample::point_in_box(pkey, idx, &real.sample_box);
        let g = real_metric_jet(&real, &p).unwrap().g;
        let z: Vec<Complex64> = (0..m).map(|a| Complex64::new(p[a], p[m + a])).collect();
        let hat = complex_metric_jet(&parent, &z).unwrap().g;

        let u = sample::unit_vector(vkey, 2 * idx, 2 * m);
        let v = sample::unit_vector(vkey, 2 * idx + 1, 2 * m);
        let mut real_side = 0.0;
        for a in 0..2 * m {
            for b in 0..2 * m {
                real_side += g[[a, b]] * u[a] * v[b];
            }
        }
        let mut complex_side = Complex64::new(0.0, 0.0);
        for a in 0..m {
            for b in 0..m {
                let alpha = Complex64::new(u[a], u[m + a]);
                let beta = Complex64::new(v[b], v[m + b]);
                complex_side += hat[[a, b]] * alpha * beta;
            }
        }
        let diff = (real_side - 2.0 * complex_side.re).abs();
        assert!(diff < 1e-12, "pairing mismatch {diff:.3e} at point {idx}");
    }
}

#[test]
fn tower_promotion_removes_projections_without_changing_values() {
    let seed = catalog::get("sphere(2)").unwrap();
    let levels = generator::tower(&seed, 2).unwrap();

    // The stored holomorphic seed of level 2 is the promoted level-1
    // metric: projection-free, with the same values on the real slice.
    let level1 = &levels[1].manifest;
    let holo2 = levels[2].holomorphic.as_ref().expect("level 2 seed");
    let comps1 = level1.components.as_ref().unwrap();
    let comps2 = holo2.components.as_ref().unwrap();
    assert!(comps1.iter().flatten().any(|e| e.contains_re_im()));
    assert!(comps2.iter().flatten().all(|e| !e.contains_re_im()));

    let key = sample::stream_key(81, sample::stream::POINTS);
    for idx in 0..2u64 {
        let p = sample::point_in_box(key, idx, &level1.sample_box);
        let z: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for (row1, row2) in comps1.iter().zip(comps2) {
            for (e1, e2) in row1.iter().zip(row2) {
                let direct = eval_real_view(e1, &p).unwrap().value;
                let promoted = eval_holomorphic(e2, &z).unwrap().value;
                assert!(
                    (promoted - Complex64::new(direct, 0.0)).norm() < 1e-13,
                    "promotion changed a value: {direct} vs {promoted}"
                );
            }
        }
    }
}

#[test]
fn first_tower_level_is_the_direct_realification() {
    let seed = catalog::get("sphere(2)").unwrap();
    let levels = generator::tower(&seed, 1).unwrap();
    let direct = generator::realify(&generator::complexify(&seed).unwrap()).unwrap();

    let lvl = levels[1].manifest.components.as_ref().unwrap();
    let dir = direct.components.as_ref().unwrap();
    let coords = &levels[1].manifest.coords;
    assert_eq!(lvl.len(), dir.len());
    for (lrow, drow) in lvl.iter().zip(dir) {
        for (le, de) in lrow.iter().zip(drow) {
            assert_eq!(le.to_text(coords), de.to_text(coords));
        }
    }
    assert_eq!(levels[1].manifest.sample_box, direct.sample_box);
}

#[test]
fn generator_guard_rails() {
    // Frame manifests cannot be complexified directly (no components).
    let frame = catalog::get("heisenberg").unwrap();
    assert!(matches!(
        generator::complexify(&frame),
        Err(Error::Schema(_))
    ));

    // Components with projections cannot be analytically continued.
    let bad = norden::expr::Manifest::from_json_str(
        r#"{
          "name": "projected",
          "kind": "real",
          "dim": 1,
          "coords": ["x1"],
          "components": [["1 + re(x1)"]],
          "sample_box": [[-0.5, 0.5]]
        }"#,
    )
    .unwrap();
    assert!(matches!(
        generator::complexify(&bad),
        Err(Error::NonAnalyticComponent(_))
    ));

    // Dimension cap: 3 → 6 → 12 → 24 exceeds the limit.
    let odd = catalog::get("sphere(3)").unwrap();
    assert!(matches!(
        generator::tower(&odd, 3),
        Err(Error::DimensionLimit { .. })
    ));

    // Zero levels is a parameter error.
    assert!(matches!(
        generator::tower(&catalog::get("sphere(2)").unwrap(), 0),
        Err(Error::ParamOutOfRange(_))
    ));

    // Twin drops the Einstein constant (its own is purely imaginary) but
    // keeps the neutral signature; plain realification keeps the constant.
    let parent = catalog::get("complex_sphere(2)").unwrap();
    let twin = generator::twin(&parent).unwrap();
    assert_eq!(twin.expected_gamma, None);
    assert_eq!(twin.expected_signature, Some((2, 2)));
    let real = generator::realify(&parent).unwrap();
    assert_eq!(real.expected_gamma, Some(1.0));
    assert_eq!(real.expected_signature, Some((2, 2)));
}

#[test]
fn singular_frames_fail_pointwise() {
    let coords = vec!["z1".to_string()];
    let frame = vec![vec![parse("z1", &coords).unwrap()]];
    let man = generator::frame_manifest(
        "degenerate",
        1,
        frame,
        vec![[-0.5, 0.5], [-0.25, 0.25]],
    )
    .unwrap();

    // At the origin the frame degenerates: pointwise error, not a panic.
    let err = complex_metric_jet(&man, &[Complex64::new(0.0, 0.0)]).unwrap_err();
    assert!(matches!(err, Error::FrameSingular { .. }), "got {err:?}");
    assert!(err.is_pointwise());

    let real = generator::realify(&man).unwrap();
    let err = real_metric_jet(&real, &[0.0, 0.0]).unwrap_err();
    assert!(err.is_pointwise(), "got {err:?}");

    // Away from the degeneracy everything works: the metric making
    // e₁ = z¹∂₁ orthonormal is ĝ₁₁ = 1/(z¹)².
    let jet = complex_metric_jet(&man, &[Complex64::new(0.5, 0.0)]).unwrap();
    assert!((jet.g[[0, 0]] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
}
