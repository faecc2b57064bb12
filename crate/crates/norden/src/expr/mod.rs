//! Expression trees for metric components.
//!
//! Components of a metric manifest are closed-form expressions in the chart
//! coordinates: rational arithmetic, integer powers, a fixed set of analytic
//! functions, the imaginary-unit constant, and (for realified metrics only)
//! `re`/`im` projections. The AST is deliberately small; anything fancier
//! belongs upstream of this crate.
//!
//! ASTs are kept in a *folded* normal form: every algebraic operation whose
//! operands are all constants is collapsed into a single constant. The
//! parser and all constructors below maintain this form, which is what makes
//! the printed representation of complex constants (`"(2 + 3*i)"`, `"-i"`,
//! `"0.5*i"`, ...) re-parse to a structurally identical tree.

mod format;
pub mod manifest;
mod parse;

pub use manifest::{Kind, Lineage, Manifest};
pub use parse::parse;

use num_complex::Complex64;

use crate::field::DIV_EPS;

/// Analytic functions available in component expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
    ];

    /// Name as it appears in expression text.
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    /// Look a function up by its textual name.
    pub fn by_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Expression AST.
///
/// Variables are indices into the owning manifest's coordinate list.
/// `PowInt` is a dedicated node (not a function) because integer powers are
/// field operations: they need no branch cuts and stay exact for negative
/// bases.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    PowInt(Box<Expr>, i32),
    Func(Func, Box<Expr>),
    Re(Box<Expr>),
    Im(Box<Expr>),
}

impl Expr {
    /// Real constant.
    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    /// The imaginary unit.
    pub fn i() -> Expr {
        Expr::Const(Complex64::new(0.0, 1.0))
    }

    /// Coordinate variable.
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Negation (folding).
    pub fn neg(a: Expr) -> Expr {
        match a.as_const() {
            Some(c) => Expr::Const(-c),
            None => Expr::Neg(Box::new(a)),
        }
    }

    /// Sum (folding).
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if finite(x + y) => Expr::Const(x + y),
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    /// Difference (folding).
    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if finite(x - y) => Expr::Const(x - y),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    /// Product (folding).
    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if finite(x * y) => Expr::Const(x * y),
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    /// Quotient (folds only clearly regular divisions).
    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y.norm() > DIV_EPS && finite(x / y) => Expr::Const(x / y),
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    /// Integer power (folds regular constant bases).
    pub fn pow_int(a: Expr, k: i32) -> Expr {
        match a.as_const() {
            Some(x) if (k >= 0 || x.norm() > DIV_EPS) && finite(x.powi(k)) => {
                Expr::Const(x.powi(k))
            }
            _ => Expr::PowInt(Box::new(a), k),
        }
    }

    /// Function application (never folded; keeps ASTs predictable).
    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::Func(f, Box::new(a))
    }

    /// Real-part projection.
    pub fn re_of(a: Expr) -> Expr {
        Expr::Re(Box::new(a))
    }

    /// Imaginary-part projection.
    pub fn im_of(a: Expr) -> Expr {
        Expr::Im(Box::new(a))
    }

    /// Serialize to the canonical textual form (see the module docs of
    /// `expr::format` for the precedence rules). `coords` supplies variable
    /// names; it must cover every variable index in the tree.
    pub fn to_text(&self, coords: &[String]) -> String {
        format::format_expr(self, coords)
    }

    /// True if any `re`/`im` node occurs in the tree.
    pub fn contains_re_im(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Func(_, a) => a.contains_re_im(),
            Expr::Re(_) | Expr::Im(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_re_im() || b.contains_re_im()
            }
        }
    }

    /// True if any constant has a nonzero imaginary part.
    pub fn contains_complex_const(&self) -> bool {
        match self {
            Expr::Const(c) => c.im != 0.0,
            Expr::Var(_) => false,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Func(_, a) | Expr::Re(a) | Expr::Im(a) => {
                a.contains_complex_const()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_complex_const() || b.contains_complex_const()
            }
        }
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(j) => Some(*j),
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Func(_, a) | Expr::Re(a) | Expr::Im(a) => {
                a.max_var()
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// Replace every variable `j` by `map(j)` (constructors re-fold).
    pub fn subst_vars(&self, map: &impl Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(j) => map(*j),
            Expr::Neg(a) => Expr::neg(a.subst_vars(map)),
            Expr::Add(a, b) => Expr::add(a.subst_vars(map), b.subst_vars(map)),
            Expr::Sub(a, b) => Expr::sub(a.subst_vars(map), b.subst_vars(map)),
            Expr::Mul(a, b) => Expr::mul(a.subst_vars(map), b.subst_vars(map)),
            Expr::Div(a, b) => Expr::div(a.subst_vars(map), b.subst_vars(map)),
            Expr::PowInt(a, k) => Expr::pow_int(a.subst_vars(map), *k),
            Expr::Func(f, a) => Expr::func(*f, a.subst_vars(map)),
            Expr::Re(a) => Expr::re_of(a.subst_vars(map)),
            Expr::Im(a) => Expr::im_of(a.subst_vars(map)),
        }
    }

    /// Structural complex conjugation, valid when every variable takes *real*
    /// values: constants are conjugated, variables are left alone, and
    /// `re`/`im` nodes (already real-valued) pass through unchanged. All
    /// available functions commute with conjugation on the principal branch,
    /// so `conj(f(w)) = f(conj(w))` holds wherever evaluation is defined.
    pub fn conj_constants(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.conj()),
            Expr::Var(j) => Expr::Var(*j),
            Expr::Neg(a) => Expr::neg(a.conj_constants()),
            Expr::Add(a, b) => Expr::add(a.conj_constants(), b.conj_constants()),
            Expr::Sub(a, b) => Expr::sub(a.conj_constants(), b.conj_constants()),
            Expr::Mul(a, b) => Expr::mul(a.conj_constants(), b.conj_constants()),
            Expr::Div(a, b) => Expr::div(a.conj_constants(), b.conj_constants()),
            Expr::PowInt(a, k) => Expr::pow_int(a.conj_constants(), *k),
            Expr::Func(f, a) => Expr::func(*f, a.conj_constants()),
            Expr::Re(a) => Expr::Re(Box::new(a.as_ref().clone())),
            Expr::Im(a) => Expr::Im(Box::new(a.as_ref().clone())),
        }
    }

    /// Eliminate `re`/`im` nodes using the identities
    /// `re(w) = (w + conj(w)) / 2` and `im(w) = -i/2 * (w - conj(w))`,
    /// with conjugation taken structurally via [`Expr::conj_constants`].
    ///
    /// The result evaluates identically on real coordinate values but is an
    /// analytic expression, i.e. it extends to complex coordinate values.
    /// This is the promotion step that lets realified metrics be
    /// complexified again when building dimension towers.
    pub fn expand_re_im(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(j) => Expr::Var(*j),
            Expr::Neg(a) => Expr::neg(a.expand_re_im()),
            Expr::Add(a, b) => Expr::add(a.expand_re_im(), b.expand_re_im()),
            Expr::Sub(a, b) => Expr::sub(a.expand_re_im(), b.expand_re_im()),
            Expr::Mul(a, b) => Expr::mul(a.expand_re_im(), b.expand_re_im()),
            Expr::Div(a, b) => Expr::div(a.expand_re_im(), b.expand_re_im()),
            Expr::PowInt(a, k) => Expr::pow_int(a.expand_re_im(), *k),
            Expr::Func(f, a) => Expr::func(*f, a.expand_re_im()),
            Expr::Re(a) => {
                let w = a.expand_re_im();
                let wbar = w.conj_constants();
                Expr::mul(Expr::real(0.5), Expr::add(w, wbar))
            }
            Expr::Im(a) => {
                let w = a.expand_re_im();
                let wbar = w.conj_constants();
                Expr::mul(Expr::Const(Complex64::new(0.0, -0.5)), Expr::sub(w, wbar))
            }
        }
    }

    /// Re-apply the folding constructors bottom-up. Identity on trees that
    /// are already folded (everything the parser or the constructors here
    /// produce); used by tests to normalize synthetic trees.
    pub fn folded(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(j) => Expr::Var(*j),
            Expr::Neg(a) => Expr::neg(a.folded()),
            Expr::Add(a, b) => Expr::add(a.folded(), b.folded()),
            Expr::Sub(a, b) => Expr::sub(a.folded(), b.folded()),
            Expr::Mul(a, b) => Expr::mul(a.folded(), b.folded()),
            Expr::Div(a, b) => Expr::div(a.folded(), b.folded()),
            Expr::PowInt(a, k) => Expr::pow_int(a.folded(), *k),
            Expr::Func(f, a) => Expr::func(*f, a.folded()),
            Expr::Re(a) => Expr::re_of(a.folded()),
            Expr::Im(a) => Expr::im_of(a.folded()),
        }
    }
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}
