//! Check primitives for metrics compatible with an almost-complex structure
//! `J` by `g(JX, JY) = −g(X, Y)` and `∇J = 0`.
//!
//! Everything here is a pointwise residual: a non-negative number that is
//! zero (up to roundoff) exactly when the property holds at the point.
//! The residuals cover:
//!
//! * the anti-Hermitian pairing itself,
//! * the block structure of the metric in complex coordinates (the mixed
//!   `z z̄` components must vanish),
//! * holomorphy of the complex components (`∂_{z̄} ĝ = 0`),
//! * parallelism of `J` under the Levi-Civita connection,
//! * vanishing of the forbidden complex Christoffel blocks, with the
//!   conjugation pairing between the two surviving blocks,
//! * the curvature identities that follow (commutation of the curvature
//!   operator with `J`, its behavior under `J`-rotated arguments, and the
//!   `J`-invariance of the Ricci tensor up to sign),
//! * the block correspondence between the real Ricci tensor and the Ricci
//!   tensor of the underlying holomorphic metric,
//! * the Nijenhuis tensor of `J` (integrability obstruction).
//!
//! Complex components use the normalization
//!
//! ```text
//! ĝ_ab = ¼ [ g(x_a,x_b) − g(y_a,y_b) − i( g(x_a,y_b) + g(x_b,y_a) ) ]
//! ```
//!
//! which is `¼ g(Z_a, Z_b)` for `Z_a = ∂_{x^a} − i ∂_{y^a}`; with that
//! factor, realification and complexification are mutually inverse and an
//! Einstein constant is the same number on both sides.

use ndarray::{Array2, Array3, Array4};
use num_complex::Complex64;

use crate::error::Error;
use crate::expr::Expr;
use crate::field::Scalar;
use crate::geometry::{Curvature, MetricJet};
use crate::jets::eval_real;
use crate::linalg;
use crate::sample;
use crate::Result;

/// The canonical constant complex structure on `R^{2m}` with coordinates
/// ordered `[x_1.., y_1..]`: `J ∂_{x^a} = ∂_{y^a}`, `J ∂_{y^a} = −∂_{x^a}`.
pub fn canonical_j(m: usize) -> Array2<f64> {
    let n = 2 * m;
    let mut j = Array2::zeros((n, n));
    for a in 0..m {
        j[[m + a, a]] = 1.0;
        j[[a, m + a]] = -1.0;
    }
    j
}

/// An almost-complex structure: the canonical constant one, or a field of
/// matrices given by coordinate expressions `J^μ_ρ`.
#[derive(Debug, Clone)]
pub enum ComplexStructure {
    /// Canonical `J` on `2m` real coordinates.
    Canonical { m: usize },
    /// `entries[mu][rho]` is the expression for `J^μ_ρ` in the real chart.
    Field { entries: Vec<Vec<Expr>> },
}

impl ComplexStructure {
    pub fn dim(&self) -> usize {
        match self {
            ComplexStructure::Canonical { m } => 2 * m,
            ComplexStructure::Field { entries } => entries.len(),
        }
    }

    /// `J` and `∂J` at a point: `j[[mu, rho]] = J^μ_ρ`,
    /// `dj[[mu, rho, nu]] = ∂_ν J^μ_ρ`.
    pub fn jet(&self, point: &[f64]) -> Result<(Array2<f64>, Array3<f64>)> {
        let n = self.dim();
        match self {
            ComplexStructure::Canonical { m } => {
                Ok((canonical_j(*m), Array3::zeros((n, n, n))))
            }
            ComplexStructure::Field { entries } => {
                if point.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "point has {} coordinates, J field has {}",
                        point.len(),
                        n
                    )));
                }
                let mut j = Array2::zeros((n, n));
                let mut dj = Array3::zeros((n, n, n));
                for mu in 0..n {
                    if entries[mu].len() != n {
                        return Err(Error::DimensionMismatch(format!(
                            "J field row {mu} has {} entries, expected {n}",
                            entries[mu].len()
                        )));
                    }
                    for rho in 0..n {
                        let jet = eval_real(&entries[mu][rho], point)
                            .map_err(|e| e.in_node(&format!("J[{}][{}]", mu, rho)))?;
                        j[[mu, rho]] = jet.value;
                        for nu in 0..n {
                            dj[[mu, rho, nu]] = jet.grad[nu];
                        }
                    }
                }
                Ok((j, dj))
            }
        }
    }
}

fn max_abs<'a, S: Scalar + 'a>(iter: impl IntoIterator<Item = &'a S>) -> f64 {
    iter.into_iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Residual of `g(JX, JY) = −g(X, Y)`, i.e. `max|Jᵀ g J + g|`, scaled by
/// `1 + max|g|`.
pub fn anti_hermitian_residual(g: &Array2<f64>, j: &Array2<f64>) -> f64 {
    let n = g.nrows();
    let mut max_res = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let mut s = g[[a, b]];
            for p in 0..n {
                for q in 0..n {
                    s += j[[p, a]] * g[[p, q]] * j[[q, b]];
                }
            }
            max_res = max_res.max(s.abs());
        }
    }
    max_res / (1.0 + max_abs(g.iter()))
}

/// The complex components of a real metric on `[x_1.., y_1..]` coordinates.
#[derive(Debug, Clone)]
pub struct ComplexComponents {
    /// `ĝ_ab`: the holomorphic-type block.
    pub hat: Array2<Complex64>,
    /// `¼ g(Z_a, Z̄_b)`: vanishes iff the metric is anti-Hermitian.
    pub mixed: Array2<Complex64>,
    /// `max|¼ g(Z̄_a, Z̄_b) − conj(ĝ_ab)|`: zero for any real symmetric input,
    /// reported as a consistency guard.
    pub conj_defect: f64,
}

/// Decompose a real metric matrix into complex components.
pub fn complex_components(g: &Array2<f64>) -> Result<ComplexComponents> {
    let n = g.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let m = n / 2;
    let mut hat = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
    let mut mixed = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
    let mut conj_defect = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            let xx = g[[a, b]];
            let yy = g[[m + a, m + b]];
            let xy = g[[a, m + b]];
            let yx = g[[a + m, b]]; // = g(x_b, y_a) by symmetry
            hat[[a, b]] = 0.25 * Complex64::new(xx - yy, -(xy + yx));
            mixed[[a, b]] = 0.25 * Complex64::new(xx + yy, xy - yx);
            let barred = 0.25 * Complex64::new(xx - yy, xy + yx);
            conj_defect = conj_defect.max((barred - hat[[a, b]].conj()).norm());
        }
    }
    Ok(ComplexComponents {
        hat,
        mixed,
        conj_defect,
    })
}

/// Residual of holomorphy of the complex components: the largest Wirtinger
/// anti-holomorphic derivative `|∂_{z̄^c} ĝ_ab| = |½(∂_{x^c} + i ∂_{y^c}) ĝ_ab|`,
/// computed from real-coordinate derivatives of the block combinations.
pub fn holomorphy_residual(jet: &MetricJet<f64>) -> Result<f64> {
    let n = jet.dim;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let m = n / 2;
    // ∂_C ĝ_ab for a real direction C, from the realified derivative array.
    let dhat = |a: usize, b: usize, cc: usize| -> Complex64 {
        let xx = jet.dg[[a, b, cc]];
        let yy = jet.dg[[m + a, m + b, cc]];
        let xy = jet.dg[[a, m + b, cc]];
        let yx = jet.dg[[a + m, b, cc]];
        0.25 * Complex64::new(xx - yy, -(xy + yx))
    };
    let mut res = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let dx = dhat(a, b, c);
                let dy = dhat(a, b, m + c);
                let wirtinger_bar = 0.5 * (dx + Complex64::new(0.0, 1.0) * dy);
                res = res.max(wirtinger_bar.norm());
            }
        }
    }
    Ok(res)
}

/// Residual of `∇J = 0`: `max|∂_ν J^μ_ρ + Γ^μ_{νσ} J^σ_ρ − Γ^σ_{νρ} J^μ_σ|`.
pub fn parallel_j_residual(
    curv: &Curvature<f64>,
    j: &ComplexStructure,
    point: &[f64],
) -> Result<f64> {
    let n = curv.dim;
    if j.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "J has dimension {}, metric has {}",
            j.dim(),
            n
        )));
    }
    let (jm, dj) = j.jet(point)?;
    let mut res = 0.0_f64;
    for mu in 0..n {
        for nu in 0..n {
            for rho in 0..n {
                let mut s = dj[[mu, rho, nu]];
                for sig in 0..n {
                    s += curv.gamma[[mu, nu, sig]] * jm[[sig, rho]]
                        - curv.gamma[[sig, nu, rho]] * jm[[mu, sig]];
                }
                res = res.max(s.abs());
            }
        }
    }
    Ok(res)
}

/// Max-abs of the Nijenhuis tensor
/// `N^μ_{νρ} = J^σ_ν ∂_σ J^μ_ρ − J^σ_ρ ∂_σ J^μ_ν − J^μ_σ(∂_ν J^σ_ρ − ∂_ρ J^σ_ν)`.
pub fn nijenhuis_residual(j: &ComplexStructure, point: &[f64]) -> Result<f64> {
    let n = j.dim();
    let (jm, dj) = j.jet(point)?;
    let mut res = 0.0_f64;
    for mu in 0..n {
        for nu in 0..n {
            for rho in 0..nu {
                let mut s = 0.0;
                for sig in 0..n {
                    s += jm[[sig, nu]] * dj[[mu, rho, sig]]
                        - jm[[sig, rho]] * dj[[mu, nu, sig]]
                        - jm[[mu, sig]] * (dj[[sig, rho, nu]] - dj[[sig, nu, rho]]);
                }
                res = res.max(s.abs());
            }
        }
    }
    Ok(res)
}

/// Complexified metric and first Wirtinger derivatives on doubled indices
/// `A ∈ {a, ā}` (unbarred first), built from a real metric jet.
///
/// `cg[[A, B]] = g(Z_A, Z_B)` with `Z_a = ∂_x − i ∂_y`, `Z_ā = ∂_x + i ∂_y`;
/// `dcg[[A, B, C]] = ∂_C g(Z_A, Z_B)` with `∂_c = ½(∂_x − i ∂_y)`,
/// `∂_c̄ = ½(∂_x + i ∂_y)`.
fn complexified_blocks(jet: &MetricJet<f64>) -> Result<(Array2<Complex64>, Array3<Complex64>)> {
    let n = jet.dim;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let m = n / 2;
    let i = Complex64::new(0.0, 1.0);
    // Weight list of a doubled index: real-slot/factor pairs.
    let vec_w = |aa: usize| -> [(usize, Complex64); 2] {
        let (a, barred) = if aa < m { (aa, false) } else { (aa - m, true) };
        let iy = if barred { i } else { -i };
        [(a, Complex64::new(1.0, 0.0)), (m + a, iy)]
    };
    let der_w = |cc: usize| -> [(usize, Complex64); 2] {
        let (c, barred) = if cc < m { (cc, false) } else { (cc - m, true) };
        let iy = if barred { 0.5 * i } else { -0.5 * i };
        [(c, Complex64::new(0.5, 0.0)), (m + c, iy)]
    };

    let mut cg = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    let mut dcg = Array3::from_elem((n, n, n), Complex64::new(0.0, 0.0));
    for aa in 0..n {
        for bb in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (p, wp) in vec_w(aa) {
                for (q, wq) in vec_w(bb) {
                    s += wp * wq * jet.g[[p, q]];
                }
            }
            cg[[aa, bb]] = s;
            for ccn in 0..n {
                let mut sd = Complex64::new(0.0, 0.0);
                for (r, wr) in der_w(ccn) {
                    for (p, wp) in vec_w(aa) {
                        for (q, wq) in vec_w(bb) {
                            sd += wr * wp * wq * jet.dg[[p, q, r]];
                        }
                    }
                }
                dcg[[aa, bb, ccn]] = sd;
            }
        }
    }
    Ok((cg, dcg))
}

/// Residuals of the complex Christoffel block structure.
#[derive(Debug, Clone, Copy)]
pub struct ChristoffelBlocks {
    /// Largest |Γ^C_AB| over index patterns that must vanish (any mixture
    /// of barred and unbarred indices).
    pub forbidden: f64,
    /// Largest |Γ^c_ab − conj(Γ^c̄_āb̄)| over the two surviving blocks.
    pub conj_defect: f64,
}

/// Build the complexified Christoffel symbols
/// `Γ^C_AB = G^{CD} (∂_A G_BD + ∂_B G_DA − ∂_D G_AB)` from a real metric
/// jet and measure how far they are from the anti-Kähler block pattern
/// (only `Γ^c_ab` and its conjugate `Γ^c̄_āb̄` may survive).
pub fn complex_christoffel_blocks(jet: &MetricJet<f64>) -> Result<ChristoffelBlocks> {
    let n = jet.dim;
    let m = n / 2;
    let (cg, dcg) = complexified_blocks(jet)?;
    let (cginv, _det) = linalg::invert(&cg)?;

    let mut gamma = Array3::from_elem((n, n, n), Complex64::new(0.0, 0.0));
    for cc in 0..n {
        for aa in 0..n {
            for bb in 0..aa + 1 {
                let mut s = Complex64::new(0.0, 0.0);
                for dd in 0..n {
                    s += cginv[[cc, dd]]
                        * (dcg[[bb, dd, aa]] + dcg[[dd, aa, bb]] - dcg[[aa, bb, dd]]);
                }
                gamma[[cc, aa, bb]] = s;
                gamma[[cc, bb, aa]] = s;
            }
        }
    }

    let unbarred = |idx: usize| idx < m;
    let mut forbidden = 0.0_f64;
    for cc in 0..n {
        for aa in 0..n {
            for bb in 0..n {
                let pattern = (unbarred(cc), unbarred(aa), unbarred(bb));
                let allowed = pattern == (true, true, true) || pattern == (false, false, false);
                if !allowed {
                    forbidden = forbidden.max(gamma[[cc, aa, bb]].norm());
                }
            }
        }
    }
    let mut conj_defect = 0.0_f64;
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                let diff = gamma[[c, a, b]] - gamma[[m + c, m + a, m + b]].conj();
                conj_defect = conj_defect.max(diff.norm());
            }
        }
    }
    Ok(ChristoffelBlocks {
        forbidden,
        conj_defect,
    })
}

/// Residuals of the curvature identities tied to a parallel `J`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CurvatureIdentities {
    /// `Riem(X,Y) ∘ J − J ∘ Riem(X,Y)`
    pub r15a: f64,
    /// `Riem(X,Y) + Riem(JX,JY)`
    pub r15b: f64,
    /// `Riem(JX,Y) − J ∘ Riem(X,Y)`
    pub r15c: f64,
    /// `Ric(JX,JY) + Ric(X,Y)`
    pub r16: f64,
}

/// Evaluate the four identities on `trials` random vector pairs with unit
/// max-norm, drawn deterministically from `key`. Matrix residuals are
/// scaled by `1 + max|Riem|`, the Ricci residual by `1 + max|Ric|`.
pub fn curvature_identity_residuals(
    curv: &Curvature<f64>,
    j: &Array2<f64>,
    trials: usize,
    key: u64,
) -> CurvatureIdentities {
    let n = curv.dim;
    let riem_scale = 1.0 + max_abs(curv.riemann.iter());
    let ric_scale = 1.0 + max_abs(curv.ricci.iter());

    // M(X,Y)^a_b = R^a_bcd X^c Y^d
    let op = |x: &[f64], y: &[f64]| -> Array2<f64> {
        let mut mm = Array2::zeros((n, n));
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for c in 0..n {
                    for d in 0..n {
                        s += curv.riemann[[a, b, c, d]] * x[c] * y[d];
                    }
                }
                mm[[a, b]] = s;
            }
        }
        mm
    };
    let apply_j = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|mu| (0..n).map(|rho| j[[mu, rho]] * v[rho]).sum())
            .collect()
    };
    let ric_pair = |x: &[f64], y: &[f64]| -> f64 {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += curv.ricci[[a, b]] * x[a] * y[b];
            }
        }
        s
    };

    let mut out = CurvatureIdentities::default();
    for t in 0..trials {
        let x = sample::unit_vector(key, (2 * t) as u64, n);
        let y = sample::unit_vector(key, (2 * t + 1) as u64, n);
        let jx = apply_j(&x);
        let jy = apply_j(&y);

        let m_xy = op(&x, &y);
        let m_jxjy = op(&jx, &jy);
        let m_jxy = op(&jx, &y);

        for a in 0..n {
            for b in 0..n {
                // (15a): [M, J] = 0
                let mut mj = 0.0;
                let mut jm = 0.0;
                for e in 0..n {
                    mj += m_xy[[a, e]] * j[[e, b]];
                    jm += j[[a, e]] * m_xy[[e, b]];
                }
                out.r15a = out.r15a.max((mj - jm).abs() / riem_scale);
                // (15b): M(X,Y) + M(JX,JY) = 0
                out.r15b = out
                    .r15b
                    .max((m_xy[[a, b]] + m_jxjy[[a, b]]).abs() / riem_scale);
                // (15c): M(JX,Y) = J M(X,Y)
                let mut jmxy = 0.0;
                for e in 0..n {
                    jmxy += j[[a, e]] * m_xy[[e, b]];
                }
                out.r15c = out.r15c.max((m_jxy[[a, b]] - jmxy).abs() / riem_scale);
            }
        }
        out.r16 = out
            .r16
            .max((ric_pair(&jx, &jy) + ric_pair(&x, &y)).abs() / ric_scale);
    }
    out
}

/// Residuals of the block correspondence between a real Ricci tensor and
/// the Ricci tensor of the underlying holomorphic metric.
#[derive(Debug, Clone, Copy)]
pub struct RicciBlocks {
    /// `max|Ric_real − realified(R̂)|` where the realification uses the same
    /// block rule as the metric itself.
    pub block: f64,
    /// Mixed complex component of the real Ricci tensor (must vanish for a
    /// Ricci tensor of pure type).
    pub mixed: f64,
}

/// Compare the real Ricci tensor on `[x.., y..]` coordinates against the
/// realification `(xx: 2 Re R̂, xy: −2 Im R̂, yy: −2 Re R̂)` of the complex
/// Ricci tensor `R̂`.
pub fn ricci_block_match(
    ricci_real: &Array2<f64>,
    ricci_complex: &Array2<Complex64>,
) -> Result<RicciBlocks> {
    let n = ricci_real.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let m = n / 2;
    if ricci_complex.nrows() != m {
        return Err(Error::DimensionMismatch(format!(
            "complex Ricci is {}x{}, expected {}x{}",
            ricci_complex.nrows(),
            ricci_complex.ncols(),
            m,
            m
        )));
    }
    let mut block = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            let r = ricci_complex[[a, b]];
            block = block.max((ricci_real[[a, b]] - 2.0 * r.re).abs());
            block = block.max((ricci_real[[m + a, m + b]] + 2.0 * r.re).abs());
            block = block.max((ricci_real[[a, m + b]] + 2.0 * r.im).abs());
            block = block.max((ricci_real[[m + a, b]] + 2.0 * ricci_complex[[b, a]].im).abs());
        }
    }
    let mixed = complex_components(ricci_real)?;
    let mixed_res = max_abs_c(mixed.mixed.iter());
    Ok(RicciBlocks {
        block,
        mixed: mixed_res,
    })
}

fn max_abs_c<'a>(iter: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    iter.into_iter().fold(0.0_f64, |m, v| m.max(v.norm()))
}

/// Max-abs difference of two Christoffel arrays (used for the twin-metric
/// connection comparison).
pub fn gamma_difference<S: Scalar>(a: &Array3<S>, b: &Array3<S>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((*x - *y).abs()))
}

/// Max-abs residual of `R̂_ab = −i γ ĥ_ab` for the twin metric `ĥ = i ĝ` of
/// an Einstein metric with constant `γ` (used at the complex level).
pub fn twin_einstein_residual(
    ricci: &Array2<Complex64>,
    h: &Array2<Complex64>,
    gamma: f64,
) -> f64 {
    let factor = Complex64::new(0.0, -gamma);
    let mut res = 0.0_f64;
    let mut scale = 0.0_f64;
    for (r, hv) in ricci.iter().zip(h.iter()) {
        res = res.max((r - factor * hv).norm());
        scale = scale.max(hv.norm());
    }
    res / (1.0 + scale)
}

/// Lowered-curvature helper for symmetry checks that need `R_abcd`.
pub fn riemann_lower<S: Scalar>(curv: &Curvature<S>) -> Array4<S> {
    curv.riemann_lower()
}
