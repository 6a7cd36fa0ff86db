//! Generator for the sequential-buffer benchmark family.
//!
//! `n` queues of capacity two over `D = {d1, d2}` are chained: `r1` reads
//! into the first queue, `tau` moves the head of each queue to the end of
//! the next, and `s4` sends from the last. The system is emitted already
//! linearized, as the text of a parameterised Boolean equation system.

use std::fmt::Write;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// Some transition is always enabled.
    NoDeadlock,
    /// Whenever a message is read it is eventually sent.
    EventuallySend,
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nodeadlock" => Ok(Property::NoDeadlock),
            "evt_send" => Ok(Property::EventuallySend),
            _ => Err(format!("unknown property `{s}` (expected nodeadlock or evt_send)")),
        }
    }
}

/// Queue parameter names: `q` for one queue, otherwise `q_in`, `q_2`, …,
/// `q_out`.
pub fn queue_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["q".into()],
        _ => (1..=n)
            .map(|i| match i {
                1 => "q_in".to_string(),
                _ if i == n => "q_out".to_string(),
                _ => format!("q_{i}"),
            })
            .collect(),
    }
}

struct Chain {
    q: Vec<String>,
}

impl Chain {
    fn first(&self) -> &str {
        &self.q[0]
    }

    fn last(&self) -> &str {
        &self.q[self.q.len() - 1]
    }

    /// Arguments for a call where queue `i` is replaced by `with[i]`.
    fn args(&self, with: &[(usize, String)], extra: Option<&str>) -> String {
        let mut out: Vec<String> = self.q.clone();
        for (i, t) in with {
            out[*i] = t.clone();
        }
        out.extend(extra.map(str::to_string));
        out.join(", ")
    }

    fn read_guard(&self) -> String {
        format!("#{} < 2", self.first())
    }

    fn send_guard(&self) -> String {
        format!("{} != []", self.last())
    }

    fn tau_guard(&self, i: usize) -> String {
        format!("{} != [] && #{} < 2", self.q[i], self.q[i + 1])
    }

    fn read(&self, d: &str, extra: Option<&str>) -> String {
        self.args(&[(0, format!("{} <| {d}", self.first()))], extra)
    }

    fn send(&self, extra: Option<&str>) -> String {
        self.args(&[(self.q.len() - 1, format!("tail({})", self.last()))], extra)
    }

    fn tau(&self, i: usize, extra: Option<&str>) -> String {
        let (a, b) = (&self.q[i], &self.q[i + 1]);
        self.args(
            &[(i, format!("tail({a})")), (i + 1, format!("{b} <| head({a})"))],
            extra,
        )
    }

    fn params(&self, extra: Option<&str>) -> String {
        let mut v: Vec<String> = self.q.iter().map(|q| format!("{q}: List(D)")).collect();
        v.extend(extra.map(str::to_string));
        v.join(", ")
    }
}

fn equation(out: &mut String, head: &str, parts: &[String]) {
    let _ = writeln!(out, "  {head} =");
    for (i, p) in parts.iter().enumerate() {
        let sep = if i == 0 { "       " } else { "    && " };
        let _ = write!(out, "{sep}{p}");
        out.push_str(if i + 1 == parts.len() { ";\n" } else { "\n" });
    }
}

/// The system for `n >= 1` chained buffers and the given property.
pub fn generate(n: usize, property: Property) -> String {
    assert!(n >= 1, "at least one buffer");
    let c = Chain { q: queue_names(n) };
    let taus = 0..n - 1;
    let mut out = String::new();
    match property {
        Property::NoDeadlock => {
            let _ = writeln!(out, "-- Absence of deadlock for {n} sequential buffers of capacity 2.");
        }
        Property::EventuallySend => {
            let _ = writeln!(
                out,
                "-- If a message is read through r1 it is eventually sent through s4,\n-- for {n} sequential buffers of capacity 2."
            );
        }
    }
    out.push_str("sort D = d1 | d2;\n\npbes\n");
    match property {
        Property::NoDeadlock => {
            let enabled: Vec<String> = std::iter::once(c.send_guard())
                .chain(taus.clone().map(|i| c.tau_guard(i)))
                .chain(std::iter::once(c.read_guard()))
                .collect();
            let mut parts = vec![format!("({})", enabled.join(" || "))];
            parts.push(format!("({} => X({}))", c.send_guard(), c.send(None)));
            for i in taus {
                parts.push(format!("({} => X({}))", c.tau_guard(i), c.tau(i, None)));
            }
            parts.push(format!(
                "(forall d: D . {} => X({}))",
                c.read_guard(),
                c.read("d", None)
            ));
            equation(&mut out, &format!("nu X({})", c.params(None)), &parts);
        }
        Property::EventuallySend => {
            let mut parts = vec![
                format!(
                    "(forall d: D . {} => X({}))",
                    c.read_guard(),
                    c.read("d", Some("d"))
                ),
                format!(
                    "(forall d0: D . {} => Y({}))",
                    c.read_guard(),
                    c.read("d0", None)
                ),
                format!("({} => Y({}))", c.send_guard(), c.send(None)),
            ];
            for i in taus.clone() {
                parts.push(format!("({} => Y({}))", c.tau_guard(i), c.tau(i, None)));
            }
            equation(&mut out, &format!("nu Y({})", c.params(None)), &parts);
            out.push('\n');

            let enabled: Vec<String> = std::iter::once(c.read_guard())
                .chain(std::iter::once(c.send_guard()))
                .chain(taus.clone().map(|i| c.tau_guard(i)))
                .collect();
            let mut parts = vec![
                format!("({})", enabled.join(" || ")),
                format!(
                    "(forall d0: D . {} => X({}))",
                    c.read_guard(),
                    c.read("d0", Some("d"))
                ),
                format!(
                    "(head({}) != d && {} => X({}))",
                    c.last(),
                    c.send_guard(),
                    c.send(Some("d"))
                ),
            ];
            for i in taus {
                parts.push(format!("({} => X({}))", c.tau_guard(i), c.tau(i, Some("d"))));
            }
            equation(&mut out, &format!("mu X({})", c.params(Some("d: D"))), &parts);
        }
    }
    let empty = vec!["[]"; n].join(", ");
    let init = match property {
        Property::NoDeadlock => "X",
        Property::EventuallySend => "Y",
    };
    let _ = write!(out, "\ninit {init}({empty});\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queue_naming() {
        assert_eq!(queue_names(1), ["q"]);
        assert_eq!(queue_names(2), ["q_in", "q_out"]);
        assert_eq!(queue_names(4), ["q_in", "q_2", "q_3", "q_out"]);
    }

    #[test]
    fn group_counts() {
        for n in 1..6 {
            let p = crate::syntax::parse_pbes(&generate(n, Property::NoDeadlock)).unwrap();
            let shapes = crate::normal_form::is_ppg(&p).unwrap();
            assert_eq!(shapes[0].parts.len(), n + 2);
            let p = crate::syntax::parse_pbes(&generate(n, Property::EventuallySend)).unwrap();
            let shapes = crate::normal_form::is_ppg(&p).unwrap();
            assert_eq!(shapes[0].parts.len(), n + 2);
            assert_eq!(shapes[1].parts.len(), n + 2);
        }
    }
}
