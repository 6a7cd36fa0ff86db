//! Pretty printer producing text that parses back to the same tree.
//!
//! Binding strengths, loosest first: quantifiers, `=>` (right associative),
//! `||`, `&&`, comparisons (non-associative), `<|`, `+`/`-`, prefix `!`/`#`.

use std::fmt::Write;

use crate::formula::{Formula, PropInst};
use crate::pbes::Pbes;
use crate::term::{DataTerm, Op, Var};

const QUANT: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const CMP: u8 = 4;
const SNOC: u8 = 5;
const ADD: u8 = 6;
const PREFIX: u8 = 7;

fn op_prec(op: Op) -> u8 {
    match op {
        Op::Implies => IMPLIES,
        Op::Or => OR,
        Op::And => AND,
        Op::Eq | Op::Neq | Op::Lt | Op::Leq | Op::Gt | Op::Geq => CMP,
        Op::Snoc => SNOC,
        Op::Plus | Op::Minus => ADD,
        Op::Not | Op::Size => PREFIX,
        Op::Head | Op::Tail => PREFIX + 1,
    }
}

/// Prints a data term. Empty lists are left unascribed.
pub fn print_term(t: &DataTerm) -> String {
    let mut out = String::new();
    term(&mut out, t, QUANT, true);
    out
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula(&mut out, f, QUANT);
    out
}

pub fn print_pbes(p: &Pbes) -> String {
    let mut out = String::new();
    for s in &p.sorts {
        let _ = writeln!(out, "sort {} = {};", s.name, s.constructors.join(" | "));
    }
    if !p.sorts.is_empty() {
        out.push('\n');
    }
    out.push_str("pbes\n");
    for eq in &p.equations {
        let _ = write!(out, "  {} {}(", eq.fixpoint, eq.name);
        params(&mut out, &eq.params);
        out.push_str(") =\n");
        rhs(&mut out, &eq.rhs);
        out.push_str(";\n");
    }
    out.push_str("\ninit ");
    prop_inst(&mut out, &p.init);
    out.push_str(";\n");
    out
}

/// A top-level conjunction or disjunction is laid out one operand per line.
fn rhs(out: &mut String, f: &Formula) {
    let (sep, leaves) = match f {
        Formula::And(..) => ("&&", left_spine(f, true)),
        Formula::Or(..) => ("||", left_spine(f, false)),
        _ => {
            out.push_str("       ");
            formula(out, f, QUANT);
            return;
        }
    };
    let prec = if sep == "&&" { AND + 1 } else { OR + 1 };
    for (i, leaf) in leaves.iter().enumerate() {
        if i == 0 {
            out.push_str("       ");
        } else {
            let _ = write!(out, "\n    {sep} ");
        }
        formula(out, leaf, prec);
    }
}

fn left_spine(f: &Formula, conj: bool) -> Vec<&Formula> {
    match (f, conj) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            let mut v = left_spine(a, conj);
            v.push(b);
            v
        }
        _ => vec![f],
    }
}

fn params(out: &mut String, vars: &[Var]) {
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{}: {}", v.name, v.sort);
    }
}

fn prop_inst(out: &mut String, p: &PropInst) {
    out.push_str(&p.name);
    out.push('(');
    for (i, a) in p.args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        term(out, a, QUANT, true);
    }
    out.push(')');
}

fn open(out: &mut String, paren: bool) {
    if paren {
        out.push('(');
    }
}

fn close(out: &mut String, paren: bool) {
    if paren {
        out.push(')');
    }
}

fn formula(out: &mut String, f: &Formula, ctx: u8) {
    match f {
        Formula::Val(t) => match t {
            DataTerm::Apply(op, _) if op.is_logical() => {
                out.push_str("val(");
                term(out, t, QUANT, true);
                out.push(')');
            }
            _ => term(out, t, ctx, true),
        },
        Formula::PredVar(p) => prop_inst(out, p),
        Formula::Neg(a) => {
            out.push('!');
            formula(out, a, PREFIX);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (prec, sym) = if matches!(f, Formula::And(..)) {
                (AND, "&&")
            } else {
                (OR, "||")
            };
            let paren = ctx > prec;
            open(out, paren);
            formula(out, a, prec);
            let _ = write!(out, " {sym} ");
            formula(out, b, prec + 1);
            close(out, paren);
        }
        Formula::Implies(a, b) => {
            let paren = ctx > IMPLIES;
            open(out, paren);
            formula(out, a, IMPLIES + 1);
            out.push_str(" => ");
            formula(out, b, IMPLIES);
            close(out, paren);
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let paren = ctx > QUANT;
            open(out, paren);
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            params(out, vars);
            out.push_str(" . ");
            formula(out, body, QUANT);
            close(out, paren);
        }
    }
}

/// `known` tells whether the reader can infer the sort of the term from its
/// context; if not, empty lists get an explicit ascription.
fn term(out: &mut String, t: &DataTerm, ctx: u8, known: bool) {
    match t {
        DataTerm::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        DataTerm::Nat(n) => {
            let _ = write!(out, "{n}");
        }
        DataTerm::Enum(s, i) => out.push_str(&s.constructors[*i]),
        DataTerm::Var(v) => out.push_str(&v.name),
        DataTerm::List(elem, items) if items.is_empty() => {
            if known {
                out.push_str("[]");
            } else {
                // The ascription extends to the end of the sort, so it is safe
                // in any position.
                let _ = write!(out, "[]: List({elem})");
            }
        }
        DataTerm::List(_, items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term(out, x, QUANT, true);
            }
            out.push(']');
        }
        DataTerm::Apply(op, args) => {
            let prec = op_prec(*op);
            match op {
                Op::Head | Op::Tail => {
                    let _ = write!(out, "{}(", op.symbol());
                    term(out, &args[0], QUANT, known);
                    out.push(')');
                }
                Op::Not | Op::Size => {
                    let paren = ctx > prec;
                    open(out, paren);
                    out.push_str(op.symbol());
                    term(out, &args[0], PREFIX, *op == Op::Not);
                    close(out, paren);
                }
                _ => {
                    let paren = ctx > prec;
                    open(out, paren);
                    let (lp, rp) = match op {
                        Op::Implies => (prec + 1, prec),
                        Op::Eq | Op::Neq | Op::Lt | Op::Leq | Op::Gt | Op::Geq => {
                            (prec + 1, prec + 1)
                        }
                        _ => (prec, prec + 1),
                    };
                    let (lk, rk) = match op {
                        Op::Eq | Op::Neq => (false, true),
                        Op::Snoc => (known, true),
                        _ => (true, true),
                    };
                    term(out, &args[0], lp, lk);
                    let _ = write!(out, " {} ", op.symbol());
                    term(out, &args[1], rp, rk);
                    close(out, paren);
                }
            }
        }
    }
}
