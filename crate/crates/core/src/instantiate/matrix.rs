//! Read/write footprint of every transition group.

use std::collections::BTreeSet;
use std::fmt;

use super::{Group, Layout};
use crate::formula::free_vars;
use crate::normal_form::Part;
use crate::pbes::Pbes;
use crate::term::{term_free_vars, DataTerm, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dep {
    /// `+`: read and written.
    ReadWrite,
    /// `r`
    Read,
    /// `w`
    Write,
    /// `-`
    None,
}

impl Dep {
    fn new(read: bool, write: bool) -> Dep {
        match (read, write) {
            (true, true) => Dep::ReadWrite,
            (true, false) => Dep::Read,
            (false, true) => Dep::Write,
            (false, false) => Dep::None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Dep::ReadWrite => '+',
            Dep::Read => 'r',
            Dep::Write => 'w',
            Dep::None => '-',
        }
    }

    pub fn reads(self) -> bool {
        matches!(self, Dep::ReadWrite | Dep::Read)
    }

    pub fn writes(self) -> bool {
        matches!(self, Dep::ReadWrite | Dep::Write)
    }
}

/// One row per group, one column per state slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyMatrix {
    header: Vec<String>,
    rows: Vec<Vec<Dep>>,
    /// Columns with an entry other than `-`, per row.
    dependent: Vec<Vec<usize>>,
}

impl DependencyMatrix {
    pub(super) fn new(p: &Pbes, layout: &Layout, groups: &[Group]) -> DependencyMatrix {
        let rows: Vec<Vec<Dep>> = groups.iter().map(|g| row(p, layout, g)).collect();
        let dependent = rows
            .iter()
            .map(|r| (0..r.len()).filter(|&i| r[i] != Dep::None).collect())
            .collect();
        DependencyMatrix {
            header: layout.slot_names(),
            rows,
            dependent,
        }
    }

    pub fn num_groups(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, k: usize) -> &[Dep] {
        &self.rows[k]
    }

    pub fn get(&self, k: usize, slot: usize) -> Dep {
        self.rows[k][slot]
    }

    pub fn dependent_columns(&self, k: usize) -> &[usize] {
        &self.dependent[k]
    }

    /// π_k: the dependent columns of `s`, in column order.
    pub fn project(&self, s: &[u32], k: usize) -> Box<[u32]> {
        self.dependent[k].iter().map(|&i| s[i]).collect()
    }

    /// Overwrites the dependent columns of `s` with `t`.
    pub fn next_apply(&self, s: &[u32], t: &[u32], k: usize) -> Box<[u32]> {
        assert_eq!(t.len(), self.dependent[k].len(), "projection arity");
        let mut out: Box<[u32]> = s.into();
        for (&i, &x) in self.dependent[k].iter().zip(t) {
            out[i] = x;
        }
        out
    }
}

/// Header `k X p1 p2 …`, then one line per group with the group number and
/// its entries.
impl fmt::Display for DependencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.header.join(" "))?;
        for (k, row) in self.rows.iter().enumerate() {
            write!(f, "{}", k + 1)?;
            for d in row {
                write!(f, " {}", d.symbol())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An argument is passed on when it is a source parameter, not captured by
/// the quantifier, placed at the position of the identical target parameter.
fn passed_on(arg: &DataTerm, target_param: &Var, params: &[Var], bound: &[Var]) -> bool {
    matches!(arg, DataTerm::Var(v)
        if v == target_param && params.contains(v) && !bound.iter().any(|b| b.name == v.name))
}

fn row(p: &Pbes, layout: &Layout, g: &Group) -> Vec<Dep> {
    let eq = &p.equations[g.var];
    let mut used: BTreeSet<Var> = BTreeSet::new();
    let mut changed: BTreeSet<usize> = BTreeSet::new();
    let write_var = match &g.part {
        Part::Simple(f) => {
            used.extend(free_vars(f));
            true
        }
        Part::Quant(q) => {
            let bound = &q.vars;
            let unbound = |vars: BTreeSet<Var>| {
                vars.into_iter()
                    .filter(|v| !bound.iter().any(|b| b.name == v.name))
                    .collect::<Vec<_>>()
            };
            if let Some(guard) = &q.guard {
                used.extend(unbound(free_vars(guard)));
            }
            let target = p.index_of(&q.target).expect("target is defined");
            let target_params = &p.equations[target].params;
            for (j, arg) in q.args.iter().enumerate() {
                if passed_on(arg, &target_params[j], &eq.params, bound) {
                    continue;
                }
                used.extend(unbound(term_free_vars(arg)));
                changed.insert(layout.param_slots[target][j]);
            }
            target != g.var || q.is_guarded()
        }
    };
    let mut out = vec![Dep::new(true, write_var)];
    for (i, slot) in layout.slots.iter().enumerate() {
        let read = eq.params.contains(slot) && used.contains(slot);
        out.push(Dep::new(read, changed.contains(&(i + 1))));
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::instantiate::Instantiator;
    use crate::syntax::parse_pbes;

    fn dump(text: &str) -> String {
        Instantiator::new(&parse_pbes(text).unwrap()).unwrap().matrix().to_string()
    }

    #[test]
    fn self_loop_only_reads_the_variable() {
        assert_eq!(dump("pbes nu X(a: Bool) = X(a); init X(true);"), "k X a\n1 r -\n");
    }

    #[test]
    fn simple_parts_write_the_variable() {
        assert_eq!(
            dump("pbes nu X(a: Bool, b: Bool) = val(a) && X(b, b); init X(true, true);"),
            "k X a b\n1 + r -\n2 r w r\n"
        );
    }

    #[test]
    fn shadowed_parameter_is_written() {
        // the argument `a` is the bound variable, not the parameter
        assert_eq!(
            dump("pbes nu X(a: Bool) = forall a: Bool . X(a); init X(true);"),
            "k X a\n1 r w\n"
        );
    }

    #[test]
    fn project_and_apply() {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/fixtures/example5.pbes"
        ))
        .unwrap();
        let inst = Instantiator::new(&parse_pbes(&text).unwrap()).unwrap();
        let m = inst.matrix();
        // group 3: + - + -
        assert_eq!(&*m.project(&[0, 1, 2, 0], 2), &[0, 2]);
        assert_eq!(&*m.next_apply(&[0, 1, 2, 0], &[0, 5], 2), &[0, 1, 5, 0]);
    }
}
