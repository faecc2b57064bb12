//! Built-in parameterized metric families.
//!
//! These serve as the test corpus and as CLI starting points
//! (`catalog:sphere(2)` etc.). Each entry's name doubles as its catalog id,
//! so lineage parents recorded by the generator can be resolved back to
//! manifests. Expected values (Einstein constant, signature) are stored on
//! the manifest and independently confirmed by the oracle test suites.
//!
//! | id                | kind        | description                                        |
//! |-------------------|-------------|----------------------------------------------------|
//! | `flat(p,q)`       | real        | constant diag(+1×p, −1×q); γ = 0                   |
//! | `sphere(m)`       | real        | round S^m chart `δ + x xᵀ/(1−|x|²)`; γ = m−1       |
//! | `hyperbolic(m)`   | real        | H^m chart `δ − x xᵀ/(1+|x|²)`; γ = −(m−1)          |
//! | `complex_sphere(m)` | holomorphic | analytic continuation of `sphere(m)`; γ = m−1    |
//! | `complex_torus(m)`  | frame     | identity holomorphic frame; flat, γ = 0            |
//! | `heisenberg`      | frame       | complex Heisenberg-group frame; not Einstein       |
//! | `mutant_nonholo`  | real        | corrupted realification; fails the holomorphy suite |
//!
//! `mutant_nonholo` is a deliberate negative control: it looks like
//! `realify(complex_torus(2))` with `ĝ₁₁` perturbed by `0.1·re(z1)`, which
//! is real-analytic but not holomorphic, so every check that detects
//! conjugate dependence must fail on it by a visible margin.

use crate::error::Error;
use crate::expr::manifest::{Kind, Lineage, Manifest};
use crate::generator;
use crate::Result;

/// Static description of one catalog family, for `catalog list`.
#[derive(Debug, Clone, Copy)]
pub struct EntryInfo {
    pub pattern: &'static str,
    pub summary: &'static str,
    pub example: &'static str,
}

/// All catalog families.
pub fn entries() -> Vec<EntryInfo> {
    vec![
        EntryInfo {
            pattern: "flat(p,q)",
            summary: "constant diagonal metric with p plus and q minus signs; flat, Einstein with gamma = 0",
            example: "flat(2,2)",
        },
        EntryInfo {
            pattern: "sphere(m)",
            summary: "round m-sphere chart g = delta + x x^T/(1 - |x|^2); Einstein with gamma = m-1, 1 <= m <= 4",
            example: "sphere(2)",
        },
        EntryInfo {
            pattern: "hyperbolic(m)",
            summary: "hyperbolic m-space chart g = delta - x x^T/(1 + |x|^2); Einstein with gamma = -(m-1), 1 <= m <= 4",
            example: "hyperbolic(3)",
        },
        EntryInfo {
            pattern: "complex_sphere(m)",
            summary: "analytic continuation of sphere(m) to complex coordinates; holomorphic Einstein metric with gamma = m-1",
            example: "complex_sphere(2)",
        },
        EntryInfo {
            pattern: "complex_torus(m)",
            summary: "identity holomorphic frame; flat complex metric, Einstein with gamma = 0",
            example: "complex_torus(2)",
        },
        EntryInfo {
            pattern: "heisenberg",
            summary: "complex Heisenberg-group frame metric (parallelisable, non-Einstein)",
            example: "heisenberg",
        },
        EntryInfo {
            pattern: "mutant_nonholo",
            summary: "negative control: anti-Hermitian but non-holomorphic perturbation of a realified flat metric",
            example: "mutant_nonholo",
        },
    ]
}

/// Concrete instantiations exercised by the test suites.
pub fn census() -> Vec<&'static str> {
    vec![
        "flat(2,0)",
        "flat(1,1)",
        "flat(2,2)",
        "sphere(2)",
        "sphere(3)",
        "sphere(4)",
        "hyperbolic(2)",
        "hyperbolic(3)",
        "complex_sphere(2)",
        "complex_sphere(3)",
        "complex_torus(2)",
        "complex_torus(3)",
        "heisenberg",
        "mutant_nonholo",
    ]
}

/// Parse `name` or `name(a)` or `name(a,b)` into the family name and
/// integer parameters.
fn parse_id(id: &str) -> Result<(String, Vec<usize>)> {
    let id = id.trim();
    let (name, args) = match id.find('(') {
        None => (id, Vec::new()),
        Some(open) => {
            if !id.ends_with(')') {
                return Err(Error::UnknownEntry(id.to_string()));
            }
            let inner = &id[open + 1..id.len() - 1];
            let args: std::result::Result<Vec<usize>, _> = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect();
            match args {
                Ok(v) => (&id[..open], v),
                Err(_) => {
                    return Err(Error::ParamOutOfRange(format!(
                        "parameters of '{id}' must be non-negative integers"
                    )))
                }
            }
        }
    };
    Ok((name.trim().to_string(), args))
}

fn expect_params(id: &str, args: &[usize], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::ParamOutOfRange(format!(
            "'{id}' takes {n} parameter(s), got {}",
            args.len()
        )));
    }
    Ok(())
}

fn check_m(id: &str, m: usize) -> Result<()> {
    if !(1..=4).contains(&m) {
        return Err(Error::ParamOutOfRange(format!(
            "'{id}': m must be between 1 and 4, got {m}"
        )));
    }
    Ok(())
}

fn lower_triangle(dim: usize, entry: impl Fn(usize, usize) -> String) -> Vec<Vec<String>> {
    (0..dim)
        .map(|i| (0..=i).map(|j| entry(i, j)).collect())
        .collect()
}

fn build_components_manifest(
    name: &str,
    dim: usize,
    coords: Vec<String>,
    components: Vec<Vec<String>>,
    sample_box: Vec<[f64; 2]>,
    expected_gamma: Option<f64>,
    expected_signature: Option<(usize, usize)>,
    lineage: Option<Lineage>,
) -> Result<Manifest> {
    let parsed: Result<Vec<Vec<crate::expr::Expr>>> = components
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| crate::expr::parse(s, &coords))
                .collect()
        })
        .collect();
    let man = Manifest {
        name: name.to_string(),
        kind: Kind::Real,
        dim,
        coords,
        components: Some(parsed?),
        frame: None,
        sample_box,
        expected_gamma,
        expected_signature,
        lineage,
    };
    man.validated()
}

fn x_coords(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("x{k}")).collect()
}

fn flat(p: usize, q: usize) -> Result<Manifest> {
    let dim = p + q;
    if dim == 0 || dim > crate::MAX_REAL_DIM {
        return Err(Error::ParamOutOfRange(format!(
            "'flat({p},{q})': dimension must be between 1 and {}",
            crate::MAX_REAL_DIM
        )));
    }
    let components = lower_triangle(dim, |i, j| {
        if i != j {
            "0".into()
        } else if i < p {
            "1".into()
        } else {
            "-1".into()
        }
    });
    build_components_manifest(
        &format!("flat({p},{q})"),
        dim,
        x_coords(dim),
        components,
        vec![[-0.5, 0.5]; dim],
        Some(0.0),
        Some((p, q)),
        None,
    )
}

/// Chart components of the round sphere (`sign = −1`) or hyperbolic space
/// (`sign = +1`): `g = δ ∓ x xᵀ/(1 ∓ |x|²)` — both Einstein with constant
/// `±(m−1)`.
fn space_form(name: &str, m: usize, positive_curv: bool) -> Result<Manifest> {
    let dot = (1..=m)
        .map(|k| format!("x{k}*x{k}"))
        .collect::<Vec<_>>()
        .join(" + ");
    let (num_sign, den) = if positive_curv {
        ("", format!("1 - ({dot})"))
    } else {
        ("-", format!("1 + ({dot})"))
    };
    let components = lower_triangle(m, |i, j| {
        let quad = format!("{num_sign}x{}*x{}/({den})", i + 1, j + 1);
        if i == j {
            format!("1 + {quad}")
        } else {
            quad
        }
    });
    let gamma = if positive_curv {
        (m as f64) - 1.0
    } else {
        -((m as f64) - 1.0)
    };
    build_components_manifest(
        name,
        m,
        x_coords(m),
        components,
        vec![[-0.4, 0.4]; m],
        Some(gamma),
        Some((m, 0)),
        None,
    )
}

fn complex_sphere(m: usize) -> Result<Manifest> {
    let base = space_form(&format!("sphere({m})"), m, true)?;
    let mut holo = generator::complexify(&base)?;
    holo.name = format!("complex_sphere({m})");
    // γ = m − 1 carries over from the real sphere: the complexified metric
    // satisfies the same polynomial Einstein identity, which the oracle
    // suite confirms numerically.
    holo.expected_gamma = Some((m as f64) - 1.0);
    holo.validated()
}

fn complex_torus(m: usize) -> Result<Manifest> {
    let coords: Vec<String> = (1..=m).map(|k| format!("z{k}")).collect();
    let frame: Result<Vec<Vec<crate::expr::Expr>>> = (0..m)
        .map(|mu| {
            (0..m)
                .map(|a| crate::expr::parse(if mu == a { "1" } else { "0" }, &coords))
                .collect()
        })
        .collect();
    let mut sample_box = vec![[-0.5, 0.5]; m];
    sample_box.extend(vec![[-0.25, 0.25]; m]);
    let mut man = generator::frame_manifest(&format!("complex_torus({m})"), m, frame?, sample_box)?;
    man.expected_gamma = Some(0.0);
    man.validated()
}

fn heisenberg() -> Result<Manifest> {
    let coords: Vec<String> = vec!["z1".into(), "z2".into(), "z3".into()];
    let rows = [["1", "0", "0"], ["0", "1", "z1"], ["0", "0", "1"]];
    let frame: Result<Vec<Vec<crate::expr::Expr>>> = rows
        .iter()
        .map(|row| row.iter().map(|s| crate::expr::parse(s, &coords)).collect())
        .collect();
    let mut sample_box = vec![[-0.5, 0.5]; 3];
    sample_box.extend(vec![[-0.25, 0.25]; 3]);
    generator::frame_manifest("heisenberg", 3, frame?, sample_box)
}

fn mutant_nonholo() -> Result<Manifest> {
    // realify(complex_torus(2)) would be diag(2, 2, -2, -2); the xx/yy pair
    // is perturbed as if ĝ₁₁ had gained 0.1·re(z1) — real-analytic, so every
    // component is a polynomial, but not holomorphic, so the holomorphy
    // suite must fail with residual ≈ 0.05.
    let coords: Vec<String> = vec!["x1".into(), "x2".into(), "y1".into(), "y2".into()];
    let components = vec![
        vec!["2 + 0.2*x1".to_string()],
        vec!["0".into(), "2".into()],
        vec!["0".into(), "0".into(), "-2 - 0.2*x1".into()],
        vec!["0".into(), "0".into(), "0".into(), "-2".into()],
    ];
    let mut sample_box = vec![[-0.5, 0.5]; 2];
    sample_box.extend(vec![[-0.25, 0.25]; 2]);
    build_components_manifest(
        "mutant_nonholo",
        4,
        coords,
        components,
        sample_box,
        None,
        Some((2, 2)),
        Some(Lineage {
            parent: "complex_torus(2)".into(),
            transform: "realify".into(),
        }),
    )
}

/// Build the manifest for a catalog id such as `sphere(2)` or `heisenberg`.
pub fn get(id: &str) -> Result<Manifest> {
    let (name, args) = parse_id(id)?;
    match name.as_str() {
        "flat" => {
            expect_params(id, &args, 2)?;
            flat(args[0], args[1])
        }
        "sphere" => {
            expect_params(id, &args, 1)?;
            check_m(id, args[0])?;
            space_form(&format!("sphere({})", args[0]), args[0], true)
        }
        "hyperbolic" => {
            expect_params(id, &args, 1)?;
            check_m(id, args[0])?;
            space_form(&format!("hyperbolic({})", args[0]), args[0], false)
        }
        "complex_sphere" => {
            expect_params(id, &args, 1)?;
            check_m(id, args[0])?;
            complex_sphere(args[0])
        }
        "complex_torus" => {
            expect_params(id, &args, 1)?;
            check_m(id, args[0])?;
            complex_torus(args[0])
        }
        "heisenberg" => {
            expect_params(id, &args, 0)?;
            heisenberg()
        }
        "mutant_nonholo" => {
            expect_params(id, &args, 0)?;
            mutant_nonholo()
        }
        _ => Err(Error::UnknownEntry(id.to_string())),
    }
}
