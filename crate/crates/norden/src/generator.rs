//! Manifest-to-manifest constructions: analytic continuation
//! (complexification), realification, twin metrics, iterated Einstein
//! towers, and frame-defined metrics.
//!
//! The tower construction is the constructive heart of the crate: starting
//! from a real-analytic Einstein metric of dimension `n`, each level
//! complexifies (same component ASTs over complex coordinates) and then
//! realifies (doubling to `2n` real coordinates with neutral signature),
//! preserving the Einstein constant at every step. Realified components
//! contain `re`/`im` wrappers, which are not holomorphic as written; before
//! the next complexification they are expanded through
//! `re(w) = (w + conj w)/2`, where `conj w` conjugates constants
//! structurally. That identity is exact for real coordinate values and
//! produces a genuinely holomorphic component AST once the coordinates are
//! promoted to complex ones.

use crate::error::Error;
use crate::expr::manifest::{Kind, Lineage, Manifest};
use crate::expr::Expr;
use crate::Result;

fn coord_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn real_pair_names(m: usize) -> Vec<String> {
    let mut v = coord_names("x", m);
    v.extend(coord_names("y", m));
    v
}

/// Analytic continuation: the same component ASTs read over complex
/// coordinates `z^a`. Components must be free of `re`/`im` (those are not
/// complex-analytic); complex constants are fine.
///
/// The sample box keeps the original rows as real parts and adds imaginary
/// rows of half the width, centered at zero — continuation is only locally
/// guaranteed, so the box stays close to the real slice.
pub fn complexify(man: &Manifest) -> Result<Manifest> {
    if man.kind != Kind::Real {
        return Err(Error::Schema(format!(
            "complexify expects a real-chart manifest, got '{}'",
            man.name
        )));
    }
    let components = man.components.as_ref().ok_or_else(|| {
        Error::Schema(format!(
            "complexify requires explicit components; '{}' is frame-backed",
            man.name
        ))
    })?;
    for (i, row) in components.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.contains_re_im() {
                return Err(Error::NonAnalyticComponent(format!(
                    "component g[{}][{}] of '{}' contains re/im and cannot be \
                     analytically continued as written",
                    i, j, man.name
                )));
            }
        }
    }
    let n = man.dim;
    let mut sample_box = man.sample_box.clone();
    for row in man.sample_box.iter() {
        let half_width = (row[1] - row[0]) / 4.0;
        sample_box.push([-half_width, half_width]);
    }
    let out = Manifest {
        name: format!("complexify({})", man.name),
        kind: Kind::Holomorphic,
        dim: n,
        coords: coord_names("z", n),
        components: Some(components.clone()),
        frame: None,
        sample_box,
        expected_gamma: man.expected_gamma,
        expected_signature: None,
        lineage: Some(Lineage {
            parent: man.name.clone(),
            transform: "complexify".into(),
        }),
    };
    out.validated()
}

/// Substitute `z^a → x^a + i y^a` into a holomorphic component, producing
/// an AST over `2m` real coordinates ordered `[x.., y..]`.
fn substitute_real_pair(e: &Expr, m: usize) -> Expr {
    e.subst_vars(&|a| Expr::add(Expr::var(a), Expr::mul(Expr::i(), Expr::var(m + a))))
}

enum RealifyFlavor {
    /// `g = 2 Re[ĝ dz dz]`: xx block `2 re ĝ`, yy block `−2 re ĝ`, xy block `−2 im ĝ`.
    Metric,
    /// `h = −2 Im[ĝ dz dz]`: xx block `−2 im ĝ`, yy block `2 im ĝ`, xy block `−2 re ĝ`.
    Twin,
}

fn realified_components(
    man: &Manifest,
    flavor: &RealifyFlavor,
) -> Result<Vec<Vec<Expr>>> {
    let m = man.dim;
    // W[a][b]: the substituted component ĝ_ab(x + iy), symmetric lookup.
    let w = |a: usize, b: usize| -> Expr {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        substitute_real_pair(man.component(hi, lo), m)
    };
    let two = || Expr::real(2.0);
    let neg_two = || Expr::real(-2.0);
    let mut rows: Vec<Vec<Expr>> = Vec::with_capacity(2 * m);
    for i in 0..2 * m {
        let mut row = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let entry = match flavor {
                RealifyFlavor::Metric => {
                    if i < m && j < m {
                        Expr::mul(two(), Expr::re_of(w(i, j)))
                    } else if i >= m && j >= m {
                        Expr::mul(neg_two(), Expr::re_of(w(i - m, j - m)))
                    } else {
                        // i ≥ m > j: entry g_{y^{i−m} x^j} = −2 im ĝ_{j, i−m}
                        Expr::mul(neg_two(), Expr::im_of(w(j, i - m)))
                    }
                }
                RealifyFlavor::Twin => {
                    if i < m && j < m {
                        Expr::mul(neg_two(), Expr::im_of(w(i, j)))
                    } else if i >= m && j >= m {
                        Expr::mul(two(), Expr::im_of(w(i - m, j - m)))
                    } else {
                        Expr::mul(neg_two(), Expr::re_of(w(j, i - m)))
                    }
                }
            };
            row.push(entry);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn realify_like(man: &Manifest, flavor: RealifyFlavor) -> Result<Manifest> {
    let (m, is_frame) = match man.kind {
        Kind::Holomorphic => (man.dim, false),
        Kind::Frame => (man.dim, true),
        Kind::Real => {
            return Err(Error::Schema(format!(
                "'{}' is already a real-chart manifest",
                man.name
            )))
        }
    };
    if 2 * m > crate::MAX_REAL_DIM {
        return Err(Error::DimensionLimit {
            requested: 2 * m,
            limit: crate::MAX_REAL_DIM,
        });
    }
    let (op, transform, expected_gamma) = match flavor {
        RealifyFlavor::Metric => ("realify", "realify", man.expected_gamma),
        // The real twin is Einstein only with an imaginary constant, which
        // is checked at the complex level; no real γ is recorded.
        RealifyFlavor::Twin => ("twin", "twin", None),
    };
    let (components, frame) = if is_frame {
        (None, man.frame.clone())
    } else {
        (Some(realified_components(man, &flavor)?), None)
    };
    // Box rows of the holomorphic manifest are already [re parts; im parts],
    // which is exactly the [x..; y..] ordering of the real chart.
    let out = Manifest {
        name: format!("{op}({})", man.name),
        kind: Kind::Real,
        dim: 2 * m,
        coords: real_pair_names(m),
        components,
        frame,
        sample_box: man.sample_box.clone(),
        expected_gamma,
        expected_signature: Some((m, m)),
        lineage: Some(Lineage {
            parent: man.name.clone(),
            transform: transform.into(),
        }),
    };
    out.validated()
}

/// Realification `g = 2 Re[ĝ_ab dz^a dz^b]` of a holomorphic or
/// frame-defined metric: a real metric on `2m` coordinates with neutral
/// signature `(m, m)`. The Einstein constant carries over unchanged.
///
/// Frame manifests stay frame-defined: the output keeps the frame and
/// evaluates by realifying the frame metric numerically per point (there
/// is no closed-form component AST for an inverted frame).
pub fn realify(man: &Manifest) -> Result<Manifest> {
    realify_like(man, RealifyFlavor::Metric)
}

/// The twin metric `h = −2 Im[ĝ_ab dz^a dz^b]`, equivalently `h(X,Y) =
/// g(JX,Y)`: shares all Christoffel symbols with the realification of `ĝ`.
pub fn twin(man: &Manifest) -> Result<Manifest> {
    realify_like(man, RealifyFlavor::Twin)
}

/// One level of an iterated doubling tower.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    /// 0 for the seed, then 1, 2, ...
    pub level: usize,
    /// The holomorphic seed this level was realified from (`None` at level 0).
    pub holomorphic: Option<Manifest>,
    /// The level's real metric manifest.
    pub manifest: Manifest,
}

/// Expand `re`/`im` wrappers so a realified metric becomes analytically
/// continuable again, then validate the result is re/im-free.
fn promote_components(man: &Manifest) -> Result<Manifest> {
    let components = man.components.as_ref().ok_or_else(|| {
        Error::Schema(format!(
            "tower promotion requires explicit components; '{}' is frame-backed",
            man.name
        ))
    })?;
    let expanded: Vec<Vec<Expr>> = components
        .iter()
        .map(|row| row.iter().map(|e| e.expand_re_im()).collect())
        .collect();
    let out = Manifest {
        components: Some(expanded),
        ..man.clone()
    };
    Ok(out)
}

/// Iterate `realify ∘ complexify`, doubling the dimension at each level.
/// Returns levels `0..=k`, where level 0 is the input. Every level
/// inherits the expected Einstein constant; levels ≥ 1 are neutral.
pub fn tower(man: &Manifest, k: usize) -> Result<Vec<TowerLevel>> {
    if man.kind != Kind::Real {
        return Err(Error::Schema(format!(
            "tower expects a real-chart seed, got '{}'",
            man.name
        )));
    }
    if k == 0 {
        return Err(Error::ParamOutOfRange(
            "tower needs at least one level".into(),
        ));
    }
    let final_dim = man
        .dim
        .checked_shl(k as u32)
        .unwrap_or(usize::MAX);
    if final_dim > crate::MAX_REAL_DIM {
        return Err(Error::DimensionLimit {
            requested: final_dim,
            limit: crate::MAX_REAL_DIM,
        });
    }
    let base_name = man.name.clone();
    let mut levels = vec![TowerLevel {
        level: 0,
        holomorphic: None,
        manifest: man.clone(),
    }];
    for j in 1..=k {
        let prev = &levels[j - 1].manifest;
        // Levels ≥ 2 carry re/im wrappers from the previous realification;
        // expand them through structural conjugation before continuing.
        let promoted = promote_components(prev)?;
        let holo = complexify(&promoted)?;
        let mut real = realify(&holo)?;
        real.name = format!("{base_name}_level{j}");
        real.lineage = Some(Lineage {
            parent: prev.name.clone(),
            transform: format!("tower-level-{j}"),
        });
        let real = real.validated()?;
        levels.push(TowerLevel {
            level: j,
            holomorphic: Some(holo),
            manifest: real,
        });
    }
    Ok(levels)
}

/// Build a frame-kind manifest from holomorphic frame entries
/// (`frame[mu][a]` = coefficient of `∂_mu` in the `a`-th frame field).
/// The metric is defined by declaring the frame orthonormal and is
/// evaluated by per-point frame inversion.
pub fn frame_manifest(
    name: &str,
    m: usize,
    frame: Vec<Vec<Expr>>,
    sample_box: Vec<[f64; 2]>,
) -> Result<Manifest> {
    if frame.len() != m || frame.iter().any(|row| row.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "frame for '{name}' must be {m}x{m}"
        )));
    }
    for (mu, row) in frame.iter().enumerate() {
        for (a, e) in row.iter().enumerate() {
            if e.contains_re_im() {
                return Err(Error::HolomorphyViolation(format!(
                    "frame entry [{mu}][{a}] of '{name}' contains re/im; frame \
                     fields must be holomorphic"
                )));
            }
        }
    }
    let out = Manifest {
        name: name.to_string(),
        kind: Kind::Frame,
        dim: m,
        coords: coord_names("z", m),
        components: None,
        frame: Some(frame),
        sample_box,
        expected_gamma: None,
        expected_signature: None,
        lineage: None,
    };
    out.validated()
}
