//! Canonical textual form for expressions.
//!
//! The formatter is the inverse of the parser on folded trees:
//! `parse(format(e)) == e` structurally. Parentheses are inserted from
//! binding strength alone, with extra parentheses on right operands of
//! same-strength operators so that left-associative re-parsing rebuilds the
//! identical tree (`a + (b + c)` keeps its shape; `a + b + c` is the left
//! comb). Binary `+`/`-` carry single spaces, `*`, `/`, `^` are tight.
//!
//! Constants print as plain decimals, `i`-multiples (`"3*i"`, `"-i"`), or a
//! parenthesized sum (`"(2 + 3*i)"`); each of those re-parses (via constant
//! folding) to the one constant node it came from.

use super::Expr;

/// Binding strength used for parenthesization.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 3;
const PREC_NEG: u8 = 4;
const PREC_ATOM: u8 = 5;

/// Format `e` using `coords` for variable names.
pub fn format_expr(e: &Expr, coords: &[String]) -> String {
    let mut out = String::new();
    write_expr(e, coords, &mut out);
    out
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::PowInt(..) => PREC_POW,
        Expr::Neg(..) => PREC_NEG,
        Expr::Var(_) | Expr::Func(..) | Expr::Re(_) | Expr::Im(_) => PREC_ATOM,
        Expr::Const(c) => {
            if c.im == 0.0 {
                if c.re < 0.0 {
                    PREC_NEG // prints as "-2"
                } else {
                    PREC_ATOM
                }
            } else if c.re == 0.0 {
                if c.im == 1.0 {
                    PREC_ATOM // "i"
                } else if c.im == -1.0 {
                    PREC_NEG // "-i"
                } else {
                    PREC_MUL // "3*i"
                }
            } else {
                PREC_ATOM // "(2 + 3*i)" carries its own parentheses
            }
        }
    }
}

fn write_child(e: &Expr, coords: &[String], out: &mut String, min_prec: u8) {
    if prec(e) < min_prec {
        out.push('(');
        write_expr(e, coords, out);
        out.push(')');
    } else {
        write_expr(e, coords, out);
    }
}

fn write_expr(e: &Expr, coords: &[String], out: &mut String) {
    match e {
        Expr::Const(c) => write_const(c, out),
        Expr::Var(j) => match coords.get(*j) {
            Some(name) => out.push_str(name),
            None => out.push_str(&format!("_v{j}")),
        },
        Expr::Neg(a) => {
            out.push('-');
            write_child(a, coords, out, PREC_NEG);
        }
        Expr::Add(a, b) => {
            write_child(a, coords, out, PREC_ADD);
            out.push_str(" + ");
            write_child(b, coords, out, PREC_ADD + 1);
        }
        Expr::Sub(a, b) => {
            write_child(a, coords, out, PREC_ADD);
            out.push_str(" - ");
            write_child(b, coords, out, PREC_ADD + 1);
        }
        Expr::Mul(a, b) => {
            write_child(a, coords, out, PREC_MUL);
            out.push('*');
            write_child(b, coords, out, PREC_MUL + 1);
        }
        Expr::Div(a, b) => {
            write_child(a, coords, out, PREC_MUL);
            out.push('/');
            write_child(b, coords, out, PREC_MUL + 1);
        }
        Expr::PowInt(a, k) => {
            write_child(a, coords, out, PREC_POW);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Func(f, a) => write_call(f.name(), a, coords, out),
        Expr::Re(a) => write_call("re", a, coords, out),
        Expr::Im(a) => write_call("im", a, coords, out),
    }
}

fn write_call(name: &str, arg: &Expr, coords: &[String], out: &mut String) {
    out.push_str(name);
    out.push('(');
    write_expr(arg, coords, out);
    out.push(')');
}

fn write_const(c: &num_complex::Complex64, out: &mut String) {
    if c.im == 0.0 {
        out.push_str(&fmt_f64(c.re));
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            out.push('i');
        } else if c.im == -1.0 {
            out.push_str("-i");
        } else {
            out.push_str(&fmt_f64(c.im));
            out.push_str("*i");
        }
    } else {
        // "(re + im*i)" / "(re - im*i)"; folding re-assembles the constant.
        out.push('(');
        out.push_str(&fmt_f64(c.re));
        if c.im > 0.0 || c.im.is_nan() {
            out.push_str(" + ");
            push_imag_magnitude(c.im, out);
        } else {
            out.push_str(" - ");
            push_imag_magnitude(-c.im, out);
        }
        out.push(')');
    }
}

fn push_imag_magnitude(im: f64, out: &mut String) {
    if im == 1.0 {
        out.push('i');
    } else {
        out.push_str(&fmt_f64(im));
        out.push_str("*i");
    }
}

/// Shortest decimal form that parses back to the identical bits.
fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
