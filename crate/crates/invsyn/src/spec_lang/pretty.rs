//! Precedence-aware printer. Output always re-parses to an alpha-equivalent
//! AST; printed normal forms are used as clause identity keys, so printing is
//! deterministic down to the byte.

use super::ast::{Expr, ExprKind, QuantKind};

/// Binding strengths mirroring the parser's ladder. Quantified expressions are
/// treated as weakest so every operator context parenthesizes them; their
/// bodies extend maximally when printed bare.
const P_QUANT: u8 = 0;
const P_IFF: u8 = 1;
const P_IMPLIES: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_NOT: u8 = 5;
const P_CMP: u8 = 6;
const P_SETOP: u8 = 7;
const P_POSTFIX: u8 = 8;
const P_ATOM: u8 = 9;

pub fn pretty(e: &Expr) -> String {
    let mut s = String::new();
    print_into(e, 0, &mut s);
    s
}

fn prec_of(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Quant { .. } => P_QUANT,
        ExprKind::Iff(..) => P_IFF,
        ExprKind::Implies(..) => P_IMPLIES,
        ExprKind::Or(..) => P_OR,
        ExprKind::And(..) => P_AND,
        ExprKind::Not(inner) => match &inner.kind {
            // `a # b` and `a \notin b` print as comparisons, not negations.
            ExprKind::Eq(..) | ExprKind::In(..) => P_CMP,
            _ => P_NOT,
        },
        ExprKind::Eq(..) | ExprKind::In(..) | ExprKind::Subseteq(..) => P_CMP,
        ExprKind::Union(..) | ExprKind::Inter(..) | ExprKind::Diff(..) => P_SETOP,
        ExprKind::MapApp { .. } => P_POSTFIX,
        _ => P_ATOM,
    }
}

fn print_into(e: &Expr, required: u8, out: &mut String) {
    let prec = prec_of(e);
    let parens = prec < required;
    if parens {
        out.push('(');
    }
    match &e.kind {
        ExprKind::True => out.push_str("TRUE"),
        ExprKind::False => out.push_str("FALSE"),
        ExprKind::Ident(n)
        | ExprKind::Var(_, n)
        | ExprKind::Const(_, n)
        | ExprKind::Bound(_, n)
        | ExprKind::SortSet(_, n) => out.push_str(n),
        ExprKind::ElemLit { name, .. } => out.push_str(name),
        ExprKind::Not(inner) => match &inner.kind {
            ExprKind::Eq(a, b) => {
                print_into(a, P_SETOP, out);
                out.push_str(" # ");
                print_into(b, P_SETOP, out);
            }
            ExprKind::In(a, b) => {
                print_into(a, P_SETOP, out);
                out.push_str(" \\notin ");
                print_into(b, P_SETOP, out);
            }
            _ => {
                out.push('~');
                print_into(inner, P_NOT, out);
            }
        },
        ExprKind::And(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" /\\ ");
                }
                print_into(x, P_AND + 1, out);
            }
        }
        ExprKind::Or(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" \\/ ");
                }
                print_into(x, P_OR + 1, out);
            }
        }
        ExprKind::Implies(a, b) => {
            print_into(a, P_IMPLIES + 1, out);
            out.push_str(" => ");
            print_into(b, P_IMPLIES, out);
        }
        ExprKind::Iff(a, b) => {
            print_into(a, P_IFF + 1, out);
            out.push_str(" <=> ");
            print_into(b, P_IFF, out);
        }
        ExprKind::Quant { kind, var, sort_name, body, .. } => {
            out.push_str(match kind {
                QuantKind::Forall => "\\A ",
                QuantKind::Exists => "\\E ",
            });
            out.push_str(var);
            out.push_str(" \\in ");
            out.push_str(sort_name);
            out.push_str(" : ");
            print_into(body, 0, out);
        }
        ExprKind::Eq(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" = ");
            print_into(b, P_SETOP, out);
        }
        ExprKind::In(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" \\in ");
            print_into(b, P_SETOP, out);
        }
        ExprKind::Subseteq(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" \\subseteq ");
            print_into(b, P_SETOP, out);
        }
        ExprKind::Union(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" \\cup ");
            print_into(b, P_SETOP + 1, out);
        }
        ExprKind::Inter(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" \\cap ");
            print_into(b, P_SETOP + 1, out);
        }
        ExprKind::Diff(a, b) => {
            print_into(a, P_SETOP, out);
            out.push_str(" \\ ");
            print_into(b, P_SETOP + 1, out);
        }
        ExprKind::SetLit { elems, .. } => {
            out.push('{');
            for (i, x) in elems.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_into(x, 0, out);
            }
            out.push('}');
        }
        ExprKind::MapApp { map, key } => {
            print_into(map, P_POSTFIX, out);
            out.push('[');
            print_into(key, 0, out);
            out.push(']');
        }
        ExprKind::MapUpdate { map, key, val } => {
            out.push('[');
            print_into(map, 0, out);
            out.push_str(" EXCEPT ![");
            print_into(key, 0, out);
            out.push_str("] = ");
            print_into(val, 0, out);
            out.push(']');
        }
    }
    if parens {
        out.push(')');
    }
}
