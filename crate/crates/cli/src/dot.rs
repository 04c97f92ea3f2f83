//! Graphviz export. Matching edges are drawn bold; members of a witness
//! cycle take that cycle's color.

use std::collections::HashMap;
use std::fmt::Write;

use difactor::{BipartiteGraph, Digraph, DirectedTwoFactor, Matching, MTwoFactor, Vertex};

const PALETTE: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "deeppink", "cyan4"];

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

pub fn digraph_dot(d: &Digraph, factor: Option<&DirectedTwoFactor>) -> String {
    let mut on_cycle: HashMap<(usize, usize), usize> = HashMap::new();
    let mut member: HashMap<usize, usize> = HashMap::new();
    for (i, c) in factor.map(|f| f.cycles.as_slice()).unwrap_or_default().iter().enumerate() {
        for (j, &v) in c.iter().enumerate() {
            on_cycle.insert((v, c[(j + 1) % c.len()]), i);
            member.insert(v, i);
        }
    }
    let mut out = String::from("digraph G {\n");
    for v in 0..d.order() {
        match member.get(&v) {
            Some(&i) => writeln!(out, "  {v} [color={}];", color(i)).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (u, v) in d.arcs() {
        match on_cycle.get(&(u, v)) {
            Some(&i) => writeln!(out, "  {u} -> {v} [color={}, penwidth=2];", color(i)).unwrap(),
            None => writeln!(out, "  {u} -> {v};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

pub fn bipartite_dot(g: &BipartiteGraph, m: &Matching, factor: Option<&MTwoFactor>) -> String {
    let key = |a: Vertex, b: Vertex| if a < b { (a, b) } else { (b, a) };
    let mut on_cycle: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    let mut member: HashMap<Vertex, usize> = HashMap::new();
    for (i, c) in factor.map(|f| f.cycles.as_slice()).unwrap_or_default().iter().enumerate() {
        for (j, &v) in c.iter().enumerate() {
            on_cycle.insert(key(v, c[(j + 1) % c.len()]), i);
            member.insert(v, i);
        }
    }
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let shape = if v.side() == difactor::Side::X { "box" } else { "ellipse" };
        match member.get(&v) {
            Some(&i) => writeln!(out, "  {v} [shape={shape}, color={}];", color(i)).unwrap(),
            None => writeln!(out, "  {v} [shape={shape}];").unwrap(),
        }
    }
    for (x, y) in g.edges() {
        let (a, b) = (Vertex::x(x), Vertex::y(y));
        let mut attrs = Vec::new();
        if m.contains(a, b) {
            attrs.push("style=bold".to_string());
        }
        if let Some(&i) = on_cycle.get(&key(a, b)) {
            attrs.push(format!("color={}", color(i)));
        }
        if attrs.is_empty() {
            writeln!(out, "  {a} -- {b};").unwrap();
        } else {
            writeln!(out, "  {a} -- {b} [{}];", attrs.join(", ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
