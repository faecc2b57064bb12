//! Pointwise metric evaluation and curvature tensors.
//!
//! A metric enters curvature formulas only through its 2-jet at a point:
//! the component matrix `g`, first derivatives `∂g`, and second
//! derivatives `∂∂g`. [`MetricJet`] packages exactly that, generic over
//! the scalar field, and [`MetricJet::curvature`] turns it into
//! Christoffel symbols and the Riemann, Ricci, and scalar curvatures:
//!
//! ```text
//! Γ^a_bc  = ½ g^{ae} (∂_b g_{ec} + ∂_c g_{eb} − ∂_e g_{bc})
//! R^a_bcd = ∂_c Γ^a_bd − ∂_d Γ^a_bc + Γ^a_ec Γ^e_bd − Γ^a_ed Γ^e_bc
//! Ric_ab  = R^c_acb,   Scal = g^{ab} Ric_ab
//! ```
//!
//! Three evaluation paths produce a [`MetricJet`]:
//!
//! * **Real components** at a real point (optionally routed through the
//!   complex carrier when expressions contain complex constants or
//!   `re`/`im`).
//! * **Holomorphic components** at a complex point.
//! * **Frame fields**: the manifest stores an invertible matrix `E` whose
//!   columns are frame vector fields declared orthonormal; the metric is
//!   `g = Fᵀ F` with `F = E⁻¹`, and derivatives of `F` follow from
//!   `∂F = −F (∂E) F`.
//!
//! Realified manifests that carry a frame instead of component expressions
//! are evaluated by computing the complex frame metric at `z = x + i y`
//! and converting value and derivatives to the real chart numerically.

use ndarray::{Array2, Array3, Array4};
use num_complex::Complex64;

use crate::error::Error;
use crate::expr::manifest::{Kind, Manifest};
use crate::field::Scalar;
use crate::jets::{eval_holomorphic, eval_real, eval_real_view, Jet2};
use crate::linalg;
use crate::Result;

/// Value, gradient, and Hessian of every metric component at one point.
///
/// Index conventions: `g[[a, b]] = g_ab`, `dg[[a, b, c]] = ∂_c g_ab`,
/// `ddg[[a, b, c, d]] = ∂_c ∂_d g_ab`.
#[derive(Debug, Clone)]
pub struct MetricJet<S> {
    pub dim: usize,
    pub g: Array2<S>,
    pub dg: Array3<S>,
    pub ddg: Array4<S>,
}

/// Curvature data derived from one [`MetricJet`].
///
/// Index conventions: `gamma[[a, b, c]] = Γ^a_bc`,
/// `dgamma[[a, b, c, d]] = ∂_d Γ^a_bc`, `riemann[[a, b, c, d]] = R^a_bcd`,
/// `ricci[[a, b]] = Ric_ab`.
#[derive(Debug, Clone)]
pub struct Curvature<S> {
    pub dim: usize,
    pub g: Array2<S>,
    pub ginv: Array2<S>,
    pub det: S,
    pub gamma: Array3<S>,
    pub dgamma: Array4<S>,
    pub riemann: Array4<S>,
    pub ricci: Array2<S>,
    pub scalar: S,
}

impl<S: Scalar> MetricJet<S> {
    /// Compute Christoffel symbols and curvature tensors from the jet.
    pub fn curvature(&self) -> Result<Curvature<S>> {
        let n = self.dim;
        let (ginv, det) = linalg::invert(&self.g)?;
        let half = S::from_re(0.5);

        // T_ebc = ∂_b g_ec + ∂_c g_eb − ∂_e g_bc
        let t = Array3::from_shape_fn((n, n, n), |(e, b, c)| {
            self.dg[[e, c, b]] + self.dg[[e, b, c]] - self.dg[[b, c, e]]
        });

        let mut gamma = Array3::from_elem((n, n, n), S::zero());
        for a in 0..n {
            for b in 0..n {
                for c in 0..=b {
                    let mut s = S::zero();
                    for e in 0..n {
                        s = s + ginv[[a, e]] * t[[e, b, c]];
                    }
                    let v = half * s;
                    gamma[[a, b, c]] = v;
                    gamma[[a, c, b]] = v;
                }
            }
        }

        // ∂_d g^{ae} = −g^{af} (∂_d g_{fh}) g^{he}
        let mut dginv = Array3::from_elem((n, n, n), S::zero());
        for d in 0..n {
            for a in 0..n {
                for e in 0..n {
                    let mut s = S::zero();
                    for f in 0..n {
                        let mut inner = S::zero();
                        for h in 0..n {
                            inner = inner + self.dg[[f, h, d]] * ginv[[h, e]];
                        }
                        s = s + ginv[[a, f]] * inner;
                    }
                    dginv[[a, e, d]] = -s;
                }
            }
        }

        // ∂_d T_ebc
        let dt = Array4::from_shape_fn((n, n, n, n), |(e, b, c, d)| {
            self.ddg[[e, c, b, d]] + self.ddg[[e, b, c, d]] - self.ddg[[b, c, e, d]]
        });

        let mut dgamma = Array4::from_elem((n, n, n, n), S::zero());
        for a in 0..n {
            for b in 0..n {
                for c in 0..=b {
                    for d in 0..n {
                        let mut s = S::zero();
                        for e in 0..n {
                            s = s + dginv[[a, e, d]] * t[[e, b, c]]
                                + ginv[[a, e]] * dt[[e, b, c, d]];
                        }
                        let v = half * s;
                        dgamma[[a, b, c, d]] = v;
                        dgamma[[a, c, b, d]] = v;
                    }
                }
            }
        }

        let mut riemann = Array4::from_elem((n, n, n, n), S::zero());
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..c {
                        let mut s = dgamma[[a, b, d, c]] - dgamma[[a, b, c, d]];
                        for e in 0..n {
                            s = s + gamma[[a, e, c]] * gamma[[e, b, d]]
                                - gamma[[a, e, d]] * gamma[[e, b, c]];
                        }
                        riemann[[a, b, c, d]] = s;
                        riemann[[a, b, d, c]] = -s;
                    }
                }
            }
        }

        let mut ricci = Array2::from_elem((n, n), S::zero());
        for a in 0..n {
            for b in 0..n {
                let mut s = S::zero();
                for c in 0..n {
                    s = s + riemann[[c, a, c, b]];
                }
                ricci[[a, b]] = s;
            }
        }

        let mut scalar = S::zero();
        for a in 0..n {
            for b in 0..n {
                scalar = scalar + ginv[[a, b]] * ricci[[a, b]];
            }
        }

        Ok(Curvature {
            dim: n,
            g: self.g.clone(),
            ginv,
            det,
            gamma,
            dgamma,
            riemann,
            ricci,
            scalar,
        })
    }
}

impl<S: Scalar> Curvature<S> {
    /// Fully lowered curvature `R_abcd = g_ae R^e_bcd`.
    pub fn riemann_lower(&self) -> Array4<S> {
        let n = self.dim;
        Array4::from_shape_fn((n, n, n, n), |(a, b, c, d)| {
            let mut s = S::zero();
            for e in 0..n {
                s = s + self.g[[a, e]] * self.riemann[[e, b, c, d]];
            }
            s
        })
    }
}

/// Least-squares Einstein constant: the real `γ` minimizing `‖Ric − γ g‖`
/// in the Frobenius sense, together with the scaled sup-norm residual
/// `max|Ric − γ g| / (1 + max|g|)`.
pub fn einstein_fit<S: Scalar>(ricci: &Array2<S>, g: &Array2<S>) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    for (r, gv) in ricci.iter().zip(g.iter()) {
        num += r.re() * gv.re() + r.im() * gv.im();
        den += gv.re() * gv.re() + gv.im() * gv.im();
    }
    let gamma = if den == 0.0 { 0.0 } else { num / den };
    (gamma, einstein_residual(ricci, g, gamma))
}

/// Scaled sup-norm residual of `Ric = γ g` for a given `γ`.
pub fn einstein_residual<S: Scalar>(ricci: &Array2<S>, g: &Array2<S>, gamma: f64) -> f64 {
    let gs = S::from_re(gamma);
    let mut max_res = 0.0_f64;
    let mut max_g = 0.0_f64;
    for (r, gv) in ricci.iter().zip(g.iter()) {
        max_res = max_res.max((*r - gs * *gv).abs());
        max_g = max_g.max(gv.abs());
    }
    max_res / (1.0 + max_g)
}

/// Pack the `m` complex coordinates `z_a = x_a + i y_a` out of a real
/// point ordered `[x_1.., y_1..]`.
pub fn complex_point(point: &[f64]) -> Result<Vec<Complex64>> {
    if point.len() % 2 != 0 {
        return Err(Error::OddDimension(point.len()));
    }
    let m = point.len() / 2;
    Ok((0..m)
        .map(|a| Complex64::new(point[a], point[m + a]))
        .collect())
}

fn components_jet<S: Scalar>(
    man: &Manifest,
    n: usize,
    eval: impl Fn(&crate::expr::Expr) -> Result<Jet2<S>>,
) -> Result<MetricJet<S>> {
    let mut g = Array2::from_elem((n, n), S::zero());
    let mut dg = Array3::from_elem((n, n, n), S::zero());
    let mut ddg = Array4::from_elem((n, n, n, n), S::zero());
    for i in 0..n {
        for j in 0..=i {
            let jet = eval(man.component(i, j))
                .map_err(|e| e.in_node(&format!("g[{}][{}]", i, j)))?;
            g[[i, j]] = jet.value;
            g[[j, i]] = jet.value;
            for c in 0..n {
                dg[[i, j, c]] = jet.grad[c];
                dg[[j, i, c]] = jet.grad[c];
                for d in 0..n {
                    let h = jet.hess(c, d);
                    ddg[[i, j, c, d]] = h;
                    ddg[[j, i, c, d]] = h;
                }
            }
        }
    }
    Ok(MetricJet { dim: n, g, dg, ddg })
}

/// Evaluate the metric 2-jet of a real-kind manifest at a real point.
pub fn real_metric_jet(man: &Manifest, point: &[f64]) -> Result<MetricJet<f64>> {
    if man.kind != Kind::Real {
        return Err(Error::Schema(format!(
            "manifest '{}' is not a real-chart metric",
            man.name
        )));
    }
    let n = man.real_dim();
    if point.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, manifest '{}' has {}",
            point.len(),
            man.name,
            n
        )));
    }
    if man.is_frame_backed() {
        let twin = man
            .lineage
            .as_ref()
            .map(|l| l.transform == "twin")
            .unwrap_or(false);
        let z = complex_point(point)?;
        let cj = frame_metric_jet_at(man, &z)?;
        return Ok(realify_jet(&cj, twin));
    }
    if man.real_eval_needs_complex() {
        components_jet(man, n, |e| eval_real_view(e, point))
    } else {
        components_jet(man, n, |e| eval_real(e, point))
    }
}

/// Evaluate the holomorphic metric 2-jet of a holomorphic- or frame-kind
/// manifest at a complex point.
pub fn complex_metric_jet(man: &Manifest, z: &[Complex64]) -> Result<MetricJet<Complex64>> {
    let m = match man.kind {
        Kind::Holomorphic => man.dim,
        Kind::Frame => man.dim,
        Kind::Real if man.is_frame_backed() => man.half_dim()?,
        Kind::Real => {
            return Err(Error::Schema(format!(
                "manifest '{}' has no holomorphic components",
                man.name
            )))
        }
    };
    if z.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, manifest '{}' has {} complex",
            z.len(),
            man.name,
            m
        )));
    }
    match man.kind {
        Kind::Holomorphic => components_jet(man, m, |e| eval_holomorphic(e, z)),
        _ => {
            let jet = frame_metric_jet_at(man, z)?;
            // A realified twin manifest represents h = i·ĝ, where ĝ is the
            // metric of the stored frame; scale accordingly so this function
            // always returns the manifest's own holomorphic metric.
            let is_twin = man.kind == Kind::Real
                && man
                    .lineage
                    .as_ref()
                    .map(|l| l.transform == "twin")
                    .unwrap_or(false);
            if is_twin {
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

/// Assemble the frame metric `g = Fᵀ F`, `F = E⁻¹`, with two derivative
/// orders propagated through the inverse.
fn frame_metric_jet_at(man: &Manifest, z: &[Complex64]) -> Result<MetricJet<Complex64>> {
    let m = z.len();
    let frame = man
        .frame
        .as_ref()
        .expect("validated frame manifest has a frame");

    // Jets of every frame entry E[mu][a].
    let mut e = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
    let mut de = Array3::from_elem((m, m, m), Complex64::new(0.0, 0.0));
    let mut dde = Array4::from_elem((m, m, m, m), Complex64::new(0.0, 0.0));
    for mu in 0..m {
        for a in 0..m {
            let jet = eval_holomorphic(&frame[mu][a], z)
                .map_err(|err| err.in_node(&format!("frame[{}][{}]", mu, a)))?;
            e[[mu, a]] = jet.value;
            for c in 0..m {
                de[[mu, a, c]] = jet.grad[c];
                for d in 0..m {
                    dde[[mu, a, c, d]] = jet.hess(c, d);
                }
            }
        }
    }

    let (f, _det) = linalg::invert(&e).map_err(|err| match err {
        Error::SingularMetric { det, threshold } => Error::FrameSingular { det, threshold },
        other => other,
    })?;

    let mm = |x: &Array2<Complex64>, y: &Array2<Complex64>| -> Array2<Complex64> {
        let mut out = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
        for i in 0..m {
            for j in 0..m {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    s += x[[i, k]] * y[[k, j]];
                }
                out[[i, j]] = s;
            }
        }
        out
    };
    let slice3 = |t: &Array3<Complex64>, c: usize| -> Array2<Complex64> {
        Array2::from_shape_fn((m, m), |(i, j)| t[[i, j, c]])
    };

    // ∂_c F = −F (∂_c E) F
    let mut df: Vec<Array2<Complex64>> = Vec::with_capacity(m);
    for c in 0..m {
        let fe = mm(&f, &slice3(&de, c));
        let prod = mm(&fe, &f);
        df.push(prod.mapv(|v| -v));
    }
    // ∂_c ∂_d F = −F (∂²E) F + F(∂_c E)F(∂_d E)F + F(∂_d E)F(∂_c E)F
    let mut ddf: Vec<Vec<Array2<Complex64>>> = vec![vec![Array2::from_elem((m, m), Complex64::new(0.0, 0.0)); m]; m];
    for c in 0..m {
        for d in 0..=c {
            let ddec = Array2::from_shape_fn((m, m), |(i, j)| dde[[i, j, c, d]]);
            let term1 = mm(&mm(&f, &ddec), &f).mapv(|v| -v);
            let fec = mm(&f, &slice3(&de, c));
            let fed = mm(&f, &slice3(&de, d));
            let term2 = mm(&mm(&fec, &fed), &f);
            let term3 = mm(&mm(&fed, &fec), &f);
            let total = Array2::from_shape_fn((m, m), |(i, j)| {
                term1[[i, j]] + term2[[i, j]] + term3[[i, j]]
            });
            ddf[c][d] = total.clone();
            ddf[d][c] = total;
        }
    }

    // g_ab = Σ_mu F[mu,a] F[mu,b] and its derivatives by the product rule.
    let mut g = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
    let mut dg = Array3::from_elem((m, m, m), Complex64::new(0.0, 0.0));
    let mut ddg = Array4::from_elem((m, m, m, m), Complex64::new(0.0, 0.0));
    for a in 0..m {
        for b in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for mu in 0..m {
                s += f[[mu, a]] * f[[mu, b]];
            }
            g[[a, b]] = s;
            for c in 0..m {
                let mut sc = Complex64::new(0.0, 0.0);
                for mu in 0..m {
                    sc += df[c][[mu, a]] * f[[mu, b]] + f[[mu, a]] * df[c][[mu, b]];
                }
                dg[[a, b, c]] = sc;
                for d in 0..m {
                    let mut sd = Complex64::new(0.0, 0.0);
                    for mu in 0..m {
                        sd += ddf[c][d][[mu, a]] * f[[mu, b]]
                            + df[c][[mu, a]] * df[d][[mu, b]]
                            + df[d][[mu, a]] * df[c][[mu, b]]
                            + f[[mu, a]] * ddf[c][d][[mu, b]];
                    }
                    ddg[[a, b, c, d]] = sd;
                }
            }
        }
    }

    Ok(MetricJet {
        dim: m,
        g,
        dg,
        ddg,
    })
}

/// Convert the 2-jet of a holomorphic metric `ĝ` at `z = x + i y` into the
/// 2-jet of its real chart, coordinates ordered `[x_1.., y_1..]`:
///
/// ```text
/// g(x,x) = 2 Re ĝ,  g(y,y) = −2 Re ĝ,  g(x,y) = −2 Im ĝ
/// ```
///
/// With `twin = true` the associated twin metric `h = i·ĝ` is realified
/// instead. Real partials of holomorphic functions follow the chain rule
/// `∂_{x^c} = ∂_{z^c}`, `∂_{y^c} = i ∂_{z^c}`.
pub fn realify_jet(cj: &MetricJet<Complex64>, twin: bool) -> MetricJet<f64> {
    let m = cj.dim;
    let n = 2 * m;
    let i = Complex64::new(0.0, 1.0);
    let two = Complex64::new(2.0, 0.0);

    // Weight so that g_real[A][B] = Re(w_AB · ĝ_ab).
    let weight = |ax: bool, bx: bool| -> Complex64 {
        let w = match (ax, bx) {
            (true, true) => two,
            (false, false) => -two,
            _ => two * i,
        };
        if twin {
            w * i
        } else {
            w
        }
    };
    // Real direction C differentiates the holomorphic jet along z^{c} with
    // factor 1 (an x-direction) or i (a y-direction).
    let dir = |cc: usize| -> (usize, Complex64) {
        if cc < m {
            (cc, Complex64::new(1.0, 0.0))
        } else {
            (cc - m, i)
        }
    };

    let mut g = Array2::zeros((n, n));
    let mut dg = Array3::zeros((n, n, n));
    let mut ddg = Array4::zeros((n, n, n, n));
    for aa in 0..n {
        let (a, ax) = (aa % m, aa < m);
        for bb in 0..n {
            let (b, bx) = (bb % m, bb < m);
            let w = weight(ax, bx);
            g[[aa, bb]] = (w * cj.g[[a, b]]).re;
            for cc in 0..n {
                let (c, fc) = dir(cc);
                dg[[aa, bb, cc]] = (w * fc * cj.dg[[a, b, c]]).re;
                for dd in 0..n {
                    let (d, fd) = dir(dd);
                    ddg[[aa, bb, cc, dd]] = (w * fc * fd * cj.ddg[[a, b, c, d]]).re;
                }
            }
        }
    }
    MetricJet { dim: n, g, dg, ddg }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::manifest::Manifest;

    fn manifest(json: &str) -> Manifest {
        Manifest::from_json_str(json).expect("test manifest parses")
    }

    #[test]
    fn polar_style_metric_is_flat_with_nonzero_christoffels() {
        // g = dr² + r² dθ² written with coords x1, x2: flat but curved-looking.
        let man = manifest(
            r#"{
              "name": "polar",
              "kind": "real",
              "dim": 2,
              "coords": ["x1", "x2"],
              "components": [["1"], ["0", "x1^2"]],
              "sample_box": [[1.0, 2.0], [-3.0, 3.0]]
            }"#,
        );
        let jet = real_metric_jet(&man, &[2.0, 0.7]).unwrap();
        let curv = jet.curvature().unwrap();
        assert!((curv.gamma[[1, 0, 1]] - 0.5).abs() < 1e-12); // Γ^2_12 = 1/r
        assert!((curv.gamma[[0, 1, 1]] + 2.0).abs() < 1e-12); // Γ^1_22 = -r
        for v in curv.riemann.iter() {
            assert!(v.abs() < 1e-12, "flat metric has vanishing curvature");
        }
        for v in curv.ricci.iter() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn frame_metric_matches_hand_computed_values() {
        // E columns are the frame; F = E^{-1} gives g = FᵀF with
        // g_22 = 1, g_23 = -z1, g_33 = 1 + z1².
        let man = manifest(
            r#"{
              "name": "nil-frame",
              "kind": "frame",
              "dim": 3,
              "coords": ["z1", "z2", "z3"],
              "frame": [["1", "0", "0"], ["0", "1", "z1"], ["0", "0", "1"]],
              "sample_box": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.1, 0.1], [-0.1, 0.1], [-0.1, 0.1]]
            }"#,
        );
        let u = 0.3;
        let z = vec![
            Complex64::new(u, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(-0.2, 0.0),
        ];
        let jet = complex_metric_jet(&man, &z).unwrap();
        let close = |a: Complex64, b: f64| (a - Complex64::new(b, 0.0)).norm() < 1e-12;
        assert!(close(jet.g[[0, 0]], 1.0));
        assert!(close(jet.g[[1, 1]], 1.0));
        assert!(close(jet.g[[1, 2]], -u));
        assert!(close(jet.g[[2, 2]], 1.0 + u * u));
        // ∂_1 g_23 = -1, ∂_1 g_33 = 2 z1, ∂_1∂_1 g_33 = 2.
        assert!(close(jet.dg[[1, 2, 0]], -1.0));
        assert!(close(jet.dg[[2, 2, 0]], 2.0 * u));
        assert!(close(jet.ddg[[2, 2, 0, 0]], 2.0));

        let curv = jet.curvature().unwrap();
        assert!(close(curv.gamma[[0, 1, 2]], 0.5));
        assert!(close(curv.gamma[[0, 2, 2]], -u));
        assert!(close(curv.gamma[[1, 0, 2]], (u * u - 1.0) / 2.0));
        assert!(close(curv.gamma[[2, 0, 1]], -0.5));
        assert!(close(curv.gamma[[2, 0, 2]], u / 2.0));
    }

    #[test]
    fn frame_curvature_at_origin_matches_fixtures() {
        let man = manifest(
            r#"{
              "name": "nil-frame",
              "kind": "frame",
              "dim": 3,
              "coords": ["z1", "z2", "z3"],
              "frame": [["1", "0", "0"], ["0", "1", "z1"], ["0", "0", "1"]],
              "sample_box": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.1, 0.1], [-0.1, 0.1], [-0.1, 0.1]]
            }"#,
        );
        let z = vec![Complex64::new(0.0, 0.0); 3];
        let curv = complex_metric_jet(&man, &z).unwrap().curvature().unwrap();
        let close = |a: Complex64, b: f64| (a - Complex64::new(b, 0.0)).norm() < 1e-12;
        assert!(close(curv.ricci[[0, 0]], -0.5));
        assert!(close(curv.ricci[[1, 1]], 0.5));
        assert!(close(curv.ricci[[2, 2]], -0.5));
        assert!(close(curv.riemann[[0, 1, 0, 1]], 0.25));
        assert!(close(curv.riemann[[0, 2, 0, 2]], -0.75));
        assert!(close(curv.riemann[[1, 2, 1, 2]], 0.25));
        assert!(close(curv.scalar, -0.5));
    }

    #[test]
    fn realified_identity_frame_is_flat_neutral() {
        let man = manifest(
            r#"{
              "name": "torus-real",
              "kind": "real",
              "dim": 4,
              "coords": ["x1", "x2", "y1", "y2"],
              "frame": [["1", "0"], ["0", "1"]],
              "sample_box": [[-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5], [-0.5, 0.5]],
              "lineage": {"parent": "complex_torus(2)", "transform": "realify"}
            }"#,
        );
        let jet = real_metric_jet(&man, &[0.1, -0.2, 0.3, 0.4]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = match (a, b) {
                    (0, 0) | (1, 1) => 2.0,
                    (2, 2) | (3, 3) => -2.0,
                    _ => 0.0,
                };
                assert!((jet.g[[a, b]] - want).abs() < 1e-14);
            }
        }
        let curv = jet.curvature().unwrap();
        for v in curv.riemann.iter() {
            assert!(v.abs() < 1e-13);
        }
        assert_eq!(linalg::signature(&jet.g).unwrap(), (2, 2));
    }

    #[test]
    fn einstein_fit_recovers_exact_proportionality() {
        let g = ndarray::array![[2.0, 0.5], [0.5, -1.0]];
        let ricci = g.mapv(|v| 3.0 * v);
        let (gamma, res) = einstein_fit(&ricci, &g);
        assert!((gamma - 3.0).abs() < 1e-12);
        assert!(res < 1e-14);
        let res_wrong = einstein_residual(&ricci, &g, 2.0);
        assert!(res_wrong > 0.3);
    }

    #[test]
    fn complex_point_pairs_coordinates() {
        let z = complex_point(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(z, vec![Complex64::new(1.0, 3.0), Complex64::new(2.0, 4.0)]);
        assert!(matches!(
            complex_point(&[1.0, 2.0, 3.0]),
            Err(Error::OddDimension(3))
        ));
    }
}
