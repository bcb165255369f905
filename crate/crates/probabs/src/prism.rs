//! Explicit-state export readable by PRISM's `-importtrans` and
//! `-importlabels` options.
//!
//! `.tra` starts with `states choices transitions` and lists one
//! `state choice successor probability` line per transition. `.lab`
//! declares `0="init"` followed by the model's own labels, then lists the
//! labels of every state that has any. Probabilities are written as the
//! shortest decimal that round-trips through `f64`, because PRISM does not
//! read fractions there.

use std::fmt::Write as _;

use probabs_core::mdp::Mdp;
use probabs_core::rational::to_f64;

pub fn tra(m: &Mdp) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", m.len(), m.action_count(), m.transition_count()).unwrap();
    for s in 0..m.len() {
        for (c, d) in m.actions(s).iter().enumerate() {
            for (t, p) in d {
                writeln!(out, "{s} {c} {t} {}", to_f64(p)).unwrap();
            }
        }
    }
    out
}

pub fn lab(m: &Mdp) -> String {
    let names: Vec<&String> = m.labels().keys().collect();
    let mut out = String::from("0=\"init\"");
    for (i, n) in names.iter().enumerate() {
        write!(out, " {}=\"{}\"", i + 1, n).unwrap();
    }
    out.push('\n');
    let mut is_init = vec![false; m.len()];
    for &s in m.initial() {
        is_init[s] = true;
    }
    for (s, &init) in is_init.iter().enumerate() {
        let mut ids: Vec<usize> = Vec::new();
        if init {
            ids.push(0);
        }
        for (i, n) in names.iter().enumerate() {
            if m.label(n).unwrap()[s] {
                ids.push(i + 1);
            }
        }
        if !ids.is_empty() {
            let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
            writeln!(out, "{s}: {}", ids.join(" ")).unwrap();
        }
    }
    out
}
