//! Order-2 forward-mode automatic differentiation.
//!
//! A [`Jet2`] carries a value, a dense gradient of length `n`, and a dense
//! symmetric Hessian over `n` variables (stored as a packed lower triangle,
//! so symmetry holds by construction). Arithmetic propagates both
//! derivative orders:
//!
//! ```text
//! (a b)'  = a' b + a b'
//! (a b)'' = a'' b + a' ⊗ b' + b' ⊗ a' + a b''
//! f(a)'   = f'(a) a'
//! f(a)''  = f''(a) a' ⊗ a' + f'(a) a''
//! ```
//!
//! Everything is generic over the scalar field, so holomorphic metrics get
//! their complex derivatives from exactly the same code path that real
//! metrics use.
//!
//! Evaluation of realified metrics needs one extra rule: `re`/`im` nodes
//! take real/imaginary parts of value, gradient, and Hessian componentwise.
//! That is valid only because the differentiation directions are *real*
//! coordinates; over complex directions the projections are not
//! differentiable, so holomorphic evaluation rejects them
//! ([`ReImPolicy::Reject`]).

use num_complex::Complex64;

use crate::error::Error;
use crate::expr::{Expr, Func};
use crate::field::{Scalar, DIV_EPS};
use crate::Result;

/// Tolerance for discarding roundoff imaginary parts when a real-valued
/// expression is evaluated through the complex carrier, relative to
/// `1 + |Re ·|` per slot. Genuine imaginary content is many orders of
/// magnitude above this; conjugation-symmetry roundoff is far below.
pub const REAL_VIEW_IM_TOL: f64 = 1e-10;

/// How `re`/`im` nodes are treated during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReImPolicy {
    /// Error on any `re`/`im` node (holomorphic evaluation).
    Reject,
    /// Project componentwise (real-coordinate evaluation).
    Project,
}

/// Value, gradient, and Hessian of a scalar expression at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<S> {
    n: usize,
    pub value: S,
    pub grad: Vec<S>,
    /// Packed lower triangle, row-major: entry `(i, j)` with `i >= j` lives
    /// at `i (i + 1) / 2 + j`.
    hess: Vec<S>,
}

impl<S: Scalar> Jet2<S> {
    /// Jet of a constant: zero derivatives.
    pub fn constant(n: usize, value: S) -> Self {
        Jet2 {
            n,
            value,
            grad: vec![S::zero(); n],
            hess: vec![S::zero(); n * (n + 1) / 2],
        }
    }

    /// Jet of the `j`-th coordinate at `value`: unit gradient slot, zero Hessian.
    pub fn variable(n: usize, j: usize, value: S) -> Self {
        let mut jet = Jet2::constant(n, value);
        jet.grad[j] = S::one();
        jet
    }

    /// Number of differentiation variables.
    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    /// Symmetric Hessian entry `∂_i ∂_j`.
    pub fn hess(&self, i: usize, j: usize) -> S {
        self.hess[Self::slot(i, j)]
    }

    fn zip(&self, rhs: &Self, f: impl Fn(S, S) -> S) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        Jet2 {
            n: self.n,
            value: f(self.value, rhs.value),
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&rhs.hess)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Jet2 {
            n: self.n,
            value: -self.value,
            grad: self.grad.iter().map(|&a| -a).collect(),
            hess: self.hess.iter().map(|&a| -a).collect(),
        }
    }

    /// Scale by a constant.
    pub fn scale(&self, c: S) -> Self {
        Jet2 {
            n: self.n,
            value: self.value * c,
            grad: self.grad.iter().map(|&a| a * c).collect(),
            hess: self.hess.iter().map(|&a| a * c).collect(),
        }
    }

    /// Product rule at both orders.
    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Jet2::constant(n, self.value * rhs.value);
        for i in 0..n {
            out.grad[i] = self.grad[i] * rhs.value + self.value * rhs.grad[i];
        }
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                out.hess[k] = self.hess[k] * rhs.value
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i]
                    + self.value * rhs.hess[k];
                k += 1;
            }
        }
        out
    }

    /// Reciprocal jet: `(1/b)' = -b'/b²`, `(1/b)'' = -b''/b² + 2 b'⊗b'/b³`.
    pub fn recip(&self) -> Result<Self> {
        let bv = self.value;
        if bv.abs() <= DIV_EPS {
            return Err(Error::DivisionNearZero {
                denominator: bv.abs(),
                path: String::new(),
            });
        }
        let inv = S::one() / bv;
        let inv2 = inv * inv;
        let inv3 = inv2 * inv;
        let two = S::from_re(2.0);
        let n = self.n;
        let mut out = Jet2::constant(n, inv);
        for i in 0..n {
            out.grad[i] = -self.grad[i] * inv2;
        }
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                out.hess[k] =
                    -self.hess[k] * inv2 + two * self.grad[i] * self.grad[j] * inv3;
                k += 1;
            }
        }
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Integer power, exact for negative bases; negative exponent needs a
    /// regular base value.
    pub fn powi(&self, k: i32) -> Result<Self> {
        match k {
            0 => Ok(Jet2::constant(self.n, S::one())),
            1 => Ok(self.clone()),
            _ => {
                let v = self.value;
                if k < 0 && v.abs() <= DIV_EPS {
                    return Err(Error::DivisionNearZero {
                        denominator: v.abs(),
                        path: String::new(),
                    });
                }
                // f = v^k, f' = k v^(k-1), f'' = k (k-1) v^(k-2), sharing v^(k-2).
                let p = v.powi(k - 2);
                let kf = S::from_re(f64::from(k));
                let kf1 = S::from_re(f64::from(k) - 1.0);
                let f = p * v * v;
                let fp = kf * p * v;
                let fpp = kf * kf1 * p;
                Ok(self.chain(f, fp, fpp))
            }
        }
    }

    /// Chain rule for a scalar function with precomputed `f(v), f'(v), f''(v)`.
    fn chain(&self, f: S, fp: S, fpp: S) -> Self {
        let n = self.n;
        let mut out = Jet2::constant(n, f);
        for i in 0..n {
            out.grad[i] = fp * self.grad[i];
        }
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                out.hess[k] = fpp * self.grad[i] * self.grad[j] + fp * self.hess[k];
                k += 1;
            }
        }
        out
    }

    /// Apply one of the named analytic functions (principal branches;
    /// cut/pole arguments are rejected).
    pub fn apply_func(&self, func: Func) -> Result<Self> {
        let v = self.value;
        let cut = match func {
            Func::Sqrt => v.on_sqrt_cut(),
            Func::Log => v.on_log_cut(),
            _ => false,
        };
        if cut {
            return Err(Error::BranchCut {
                func: func.name(),
                value: format!("{:?}", v),
                path: String::new(),
            });
        }
        let (f, fp, fpp) = match func {
            Func::Sqrt => {
                let s = v.sqrt();
                let half = S::from_re(0.5);
                let fp = half / s;
                // f'' = -1/4 v^(-3/2)
                let fpp = -S::from_re(0.25) / (s * s * s);
                (s, fp, fpp)
            }
            Func::Exp => {
                let e = v.exp();
                (e, e, e)
            }
            Func::Log => {
                let inv = S::one() / v;
                (v.ln(), inv, -(inv * inv))
            }
            Func::Sin => (v.sin(), v.cos(), -v.sin()),
            Func::Cos => (v.cos(), -v.sin(), -v.cos()),
            Func::Sinh => (v.sinh(), v.cosh(), v.sinh()),
            Func::Cosh => (v.cosh(), v.sinh(), v.cosh()),
        };
        Ok(self.chain(f, fp, fpp))
    }

    /// Componentwise real-part projection (valid for real directions).
    fn project_re(&self) -> Self {
        self.project(|s| S::from_re(s.re()))
    }

    /// Componentwise imaginary-part projection (valid for real directions).
    fn project_im(&self) -> Self {
        self.project(|s| S::from_re(s.im()))
    }

    fn project(&self, f: impl Fn(S) -> S) -> Self {
        Jet2 {
            n: self.n,
            value: f(self.value),
            grad: self.grad.iter().map(|&a| f(a)).collect(),
            hess: self.hess.iter().map(|&a| f(a)).collect(),
        }
    }

    fn all_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|s| s.is_finite())
            && self.hess.iter().all(|s| s.is_finite())
    }
}

/// Evaluate `e` as an order-2 jet at `point`.
///
/// `point.len()` fixes the number of differentiation variables; every
/// variable index in `e` must be within range. Arithmetic failures carry
/// the path of the offending node (outermost-first).
pub fn eval_jet2<S: Scalar>(e: &Expr, point: &[S], reim: ReImPolicy) -> Result<Jet2<S>> {
    let jet = eval_rec(e, point, reim)?;
    if !jet.all_finite() {
        return Err(Error::NonFinite {
            path: "result".into(),
        });
    }
    Ok(jet)
}

fn eval_rec<S: Scalar>(e: &Expr, point: &[S], reim: ReImPolicy) -> Result<Jet2<S>> {
    let n = point.len();
    match e {
        Expr::Const(c) => match S::from_c64(*c) {
            Some(v) => Ok(Jet2::constant(n, v)),
            None => Err(Error::NonRealResult {
                imag: c.im,
                path: "const".into(),
            }),
        },
        Expr::Var(j) => {
            if *j >= n {
                return Err(Error::DimensionMismatch(format!(
                    "variable index {j} outside point of length {n}"
                )));
            }
            Ok(Jet2::variable(n, *j, point[*j]))
        }
        Expr::Neg(a) => Ok(eval_rec(a, point, reim)
            .map_err(|e| e.in_node("neg"))?
            .neg()),
        Expr::Add(a, b) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node("add.lhs"))?;
            let jb = eval_rec(b, point, reim).map_err(|e| e.in_node("add.rhs"))?;
            Ok(ja.add(&jb))
        }
        Expr::Sub(a, b) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node("sub.lhs"))?;
            let jb = eval_rec(b, point, reim).map_err(|e| e.in_node("sub.rhs"))?;
            Ok(ja.sub(&jb))
        }
        Expr::Mul(a, b) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node("mul.lhs"))?;
            let jb = eval_rec(b, point, reim).map_err(|e| e.in_node("mul.rhs"))?;
            let out = ja.mul(&jb);
            check_value(out, "mul")
        }
        Expr::Div(a, b) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node("div.lhs"))?;
            let jb = eval_rec(b, point, reim).map_err(|e| e.in_node("div.rhs"))?;
            let out = ja.div(&jb).map_err(|e| e.in_node("div"))?;
            check_value(out, "div")
        }
        Expr::PowInt(a, k) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node("pow"))?;
            let out = ja.powi(*k).map_err(|e| e.in_node("pow"))?;
            check_value(out, "pow")
        }
        Expr::Func(f, a) => {
            let ja = eval_rec(a, point, reim).map_err(|e| e.in_node(f.name()))?;
            let out = ja.apply_func(*f).map_err(|e| e.in_node(f.name()))?;
            check_value(out, f.name())
        }
        Expr::Re(a) => match reim {
            ReImPolicy::Reject => Err(Error::HolomorphyViolation(
                "re(...) is not differentiable along complex directions".into(),
            )),
            ReImPolicy::Project => Ok(eval_rec(a, point, reim)
                .map_err(|e| e.in_node("re"))?
                .project_re()),
        },
        Expr::Im(a) => match reim {
            ReImPolicy::Reject => Err(Error::HolomorphyViolation(
                "im(...) is not differentiable along complex directions".into(),
            )),
            ReImPolicy::Project => Ok(eval_rec(a, point, reim)
                .map_err(|e| e.in_node("im"))?
                .project_im()),
        },
    }
}

fn check_value<S: Scalar>(jet: Jet2<S>, label: &str) -> Result<Jet2<S>> {
    if jet.value.is_finite() {
        Ok(jet)
    } else {
        Err(Error::NonFinite { path: label.into() })
    }
}

/// Evaluate over the real field at a real point. `re`/`im` nodes project
/// (they are the identity / zero on real-valued subexpressions; genuinely
/// complex subexpressions are impossible here because complex constants are
/// rejected by the field).
pub fn eval_real(e: &Expr, point: &[f64]) -> Result<Jet2<f64>> {
    eval_jet2(e, point, ReImPolicy::Project)
}

/// Evaluate a holomorphic expression at a complex point (`re`/`im` rejected).
pub fn eval_holomorphic(e: &Expr, point: &[Complex64]) -> Result<Jet2<Complex64>> {
    eval_jet2(e, point, ReImPolicy::Reject)
}

/// Evaluate a real-valued expression with complex constants (a realified
/// metric component) at a real point: arithmetic runs in the complex
/// carrier, `re`/`im` project componentwise, and the final jet must be real
/// up to conjugation-symmetry roundoff, which is discarded.
pub fn eval_real_view(e: &Expr, point: &[f64]) -> Result<Jet2<f64>> {
    let cpoint: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let jet = eval_jet2(e, &cpoint, ReImPolicy::Project)?;
    let n = point.len();
    let mut out = Jet2::constant(n, 0.0_f64);
    out.value = demote(jet.value, "value")?;
    for i in 0..n {
        out.grad[i] = demote(jet.grad[i], "grad")?;
    }
    let mut k = 0;
    for i in 0..n {
        for j in 0..=i {
            out.hess[k] = demote(jet.hess(i, j), "hess")?;
            k += 1;
        }
    }
    Ok(out)
}

fn demote(v: Complex64, slot: &str) -> Result<f64> {
    if v.im.abs() <= REAL_VIEW_IM_TOL * (1.0 + v.re.abs()) {
        Ok(v.re)
    } else {
        Err(Error::NonRealResult {
            imag: v.im,
            path: slot.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn coords(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn polynomial_jet_matches_hand_computation() {
        let cs = coords(&["x1", "x2"]);
        let e = parse("x1^2 + 2*x2", &cs).unwrap();
        let jet = eval_real(&e, &[3.0, 5.0]).unwrap();
        assert_eq!(jet.value, 19.0);
        assert_eq!(jet.grad, vec![6.0, 2.0]);
        assert_eq!(jet.hess(0, 0), 2.0);
        assert_eq!(jet.hess(0, 1), 0.0);
        assert_eq!(jet.hess(1, 1), 0.0);
    }

    #[test]
    fn seed_jets_have_unit_gradient() {
        let v = Jet2::<f64>::variable(3, 1, 4.0);
        assert_eq!(v.value, 4.0);
        assert_eq!(v.grad, vec![0.0, 1.0, 0.0]);
        let c = Jet2::<f64>::constant(3, 7.0);
        assert!(c.grad.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn euler_identity_through_complex_jets() {
        let cs = coords(&["t"]);
        let e = parse("exp(i*t)", &cs).unwrap();
        let jet = eval_holomorphic(&e, &[Complex64::new(std::f64::consts::PI, 0.0)]).unwrap();
        assert!((jet.value - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        // d/dt exp(it) = i exp(it) = -i at t = pi.
        assert!((jet.grad[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_sphere_component_jet_at_origin() {
        let cs = coords(&["z1"]);
        let e = parse("1 + z1^2/(1 - z1*z1)", &cs).unwrap();
        let jet = eval_holomorphic(&e, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(jet.value, Complex64::new(1.0, 0.0));
        assert_eq!(jet.grad[0], Complex64::new(0.0, 0.0));
        assert_eq!(jet.hess(0, 0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn negative_integer_powers() {
        let cs = coords(&["x1"]);
        let e = parse("x1^-2", &cs).unwrap();
        let jet = eval_real(&e, &[2.0]).unwrap();
        assert!((jet.value - 0.25).abs() < 1e-15);
        assert!((jet.grad[0] + 0.25).abs() < 1e-15);
        assert!((jet.hess(0, 0) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn division_near_zero_reports_path() {
        let cs = coords(&["x1"]);
        let e = parse("1/(x1 - 1)", &cs).unwrap();
        match eval_real(&e, &[1.0]) {
            Err(Error::DivisionNearZero { path, .. }) => {
                assert!(path.contains("div"), "path: {path}");
            }
            other => panic!("expected division error, got {other:?}"),
        }
    }

    #[test]
    fn branch_cuts_are_rejected() {
        let cs = coords(&["x1"]);
        let sqrt0 = parse("sqrt(x1)", &cs).unwrap();
        assert!(matches!(
            eval_real(&sqrt0, &[0.0]),
            Err(Error::BranchCut { func: "sqrt", .. })
        ));
        let logneg = parse("log(x1)", &cs).unwrap();
        assert!(matches!(
            eval_real(&logneg, &[-1.0]),
            Err(Error::BranchCut { func: "log", .. })
        ));
        // Complex: the cut is the non-positive real axis.
        let e = parse("log(x1)", &cs).unwrap();
        assert!(matches!(
            eval_holomorphic(&e, &[Complex64::new(-2.0, 0.0)]),
            Err(Error::BranchCut { func: "log", .. })
        ));
        assert!(eval_holomorphic(&e, &[Complex64::new(-2.0, 0.5)]).is_ok());
    }

    #[test]
    fn real_view_projects_re_im() {
        let cs = coords(&["x1", "x2"]);
        // im((x1 + i x2)^2) = 2 x1 x2
        let e = parse("im((x1 + i*x2)^2)", &cs).unwrap();
        let jet = eval_real_view(&e, &[3.0, 0.5]).unwrap();
        assert!((jet.value - 3.0).abs() < 1e-15);
        assert!((jet.grad[0] - 1.0).abs() < 1e-15);
        assert!((jet.grad[1] - 6.0).abs() < 1e-15);
        assert!((jet.hess(0, 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn real_view_rejects_residual_imaginary_parts() {
        let cs = coords(&["x1"]);
        let e = parse("i*x1", &cs).unwrap();
        assert!(matches!(
            eval_real_view(&e, &[1.0]),
            Err(Error::NonRealResult { .. })
        ));
    }

    #[test]
    fn pure_real_field_rejects_complex_constants() {
        let cs = coords(&["x1"]);
        let e = parse("i*x1", &cs).unwrap();
        assert!(matches!(
            eval_real(&e, &[1.0]),
            Err(Error::NonRealResult { .. })
        ));
    }

    #[test]
    fn jet_linearity() {
        let cs = coords(&["x1", "x2"]);
        let e1 = parse("sin(x1)*x2", &cs).unwrap();
        let e2 = parse("x1^3 - x2", &cs).unwrap();
        let combo = parse("2.5*(sin(x1)*x2) + -1.5*(x1^3 - x2)", &cs).unwrap();
        let p = [0.7, -1.2];
        let j1 = eval_real(&e1, &p).unwrap();
        let j2 = eval_real(&e2, &p).unwrap();
        let jc = eval_real(&combo, &p).unwrap();
        let lin = j1.scale(2.5).add(&j2.scale(-1.5));
        assert!((jc.value - lin.value).abs() < 1e-12);
        for i in 0..2 {
            assert!((jc.grad[i] - lin.grad[i]).abs() < 1e-12);
            for j in 0..=i {
                assert!((jc.hess(i, j) - lin.hess(i, j)).abs() < 1e-12);
            }
        }
    }
}
