//! Text formats: whitespace-separated edge lists and `u v colour` colouring
//! files. Labels are arbitrary tokens mapped to dense ids at parse time.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph together with the original vertex labels (`labels[id]`).
#[derive(Debug, Clone)]
pub struct LabelledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelledGraph {
    /// Wraps a graph with labels `"0".."n-1"`.
    pub fn from_graph(graph: Graph) -> Self {
        let labels: Vec<String> = (0..graph.n()).map(|i| i.to_string()).collect();
        Self::with_labels(graph, labels)
    }

    fn with_labels(graph: Graph, labels: Vec<String>) -> Self {
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        LabelledGraph { graph, labels, index }
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }
}

fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the edge-list format. When every label is a non-negative integer,
/// ids follow numeric order; otherwise they follow first appearance.
pub fn parse_edge_list(text: &str) -> Result<LabelledGraph> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = content(line).split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            [u, v] => raw.push((lineno, *u, *v)),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected two labels, found {} tokens", toks.len()),
                })
            }
        }
    }

    let mut order: Vec<&str> = Vec::new();
    let mut seen: HashMap<&str, ()> = HashMap::new();
    for &(_, u, v) in &raw {
        for l in [u, v] {
            if seen.insert(l, ()).is_none() {
                order.push(l);
            }
        }
    }
    if order.iter().all(|l| l.parse::<u64>().is_ok()) {
        order.sort_by_key(|l| l.parse::<u64>().unwrap());
    }
    let ids: HashMap<&str, usize> = order.iter().enumerate().map(|(i, l)| (*l, i)).collect();

    let mut edge_seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::with_capacity(raw.len());
    for &(lineno, u, v) in &raw {
        let (a, b) = (ids[u], ids[v]);
        if a == b {
            return Err(Error::Parse { line: lineno, message: format!("self-loop at {u}") });
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = edge_seen.insert(key, lineno) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("duplicate edge {u} {v} (first on line {first})"),
            });
        }
        edges.push((a, b));
    }
    let graph = Graph::from_edges(order.len(), edges)?;
    let labels = order.into_iter().map(str::to_owned).collect();
    Ok(LabelledGraph::with_labels(graph, labels))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<LabelledGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Writes one `u v` line per edge in edge-index order.
pub fn format_edge_list(g: &Graph, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        match labels {
            Some(l) => writeln!(out, "{} {}", l[u], l[v]),
            None => writeln!(out, "{u} {v}"),
        }
        .unwrap();
    }
    out
}

/// Parses a colouring file against a labelled graph. The lines must cover
/// the edge set exactly once; the result is indexed by edge index.
pub fn parse_colouring(text: &str, lg: &LabelledGraph) -> Result<Vec<u64>> {
    let g = &lg.graph;
    let mut colours: Vec<Option<u64>> = vec![None; g.m()];
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = content(line).split_whitespace().collect();
        let (u, v, c) = match toks.as_slice() {
            [] => continue,
            [u, v, c] => (*u, *v, *c),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `u v colour`, found {} tokens", toks.len()),
                })
            }
        };
        let err = |message: String| Error::Parse { line: lineno, message };
        let a = lg.id_of(u).ok_or_else(|| err(format!("unknown vertex {u}")))?;
        let b = lg.id_of(v).ok_or_else(|| err(format!("unknown vertex {v}")))?;
        let e = g.edge_between(a, b).ok_or_else(|| err(format!("{u} {v} is not an edge")))?;
        let colour: u64 = c.parse().map_err(|_| err(format!("bad colour {c:?}")))?;
        if colour == 0 {
            return Err(err("colours must be positive".into()));
        }
        if colours[e].replace(colour).is_some() {
            return Err(err(format!("edge {u} {v} coloured twice")));
        }
    }
    colours
        .into_iter()
        .enumerate()
        .map(|(e, c)| {
            c.ok_or_else(|| {
                let (u, v) = g.edge(e);
                Error::Colouring(format!("edge {} {} has no colour", lg.labels[u], lg.labels[v]))
            })
        })
        .collect()
}

pub fn format_colouring(g: &Graph, labels: Option<&[String]>, colours: &[u64]) -> String {
    let mut out = String::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match labels {
            Some(l) => writeln!(out, "{} {} {}", l[u], l[v], colours[e]),
            None => writeln!(out, "{u} {v} {}", colours[e]),
        }
        .unwrap();
    }
    out
}
