//! Loop-free quivers with named vertices, and their Graphviz export.

use std::fmt::Write;

use crate::error::{DsError, Result};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new() -> Self {
        Quiver::default()
    }

    /// Adds a vertex and returns its index. Ids must be unique.
    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize> {
        let id = id.into();
        if self.index_of(&id).is_some() {
            return Err(DsError::invalid(format!("duplicate vertex {id}")));
        }
        self.vertices.push(id);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, tail: usize, head: usize) -> Result<()> {
        let n = self.vertices.len();
        if tail >= n || head >= n {
            return Err(DsError::invalid(format!(
                "arrow {tail} -> {head} refers to a missing vertex"
            )));
        }
        if tail == head {
            return Err(DsError::QuiverLoop(self.vertices[tail].clone()));
        }
        self.arrows.push((tail, head));
        Ok(())
    }

    pub fn add_arrows(&mut self, tail: usize, head: usize, count: usize) -> Result<()> {
        for _ in 0..count {
            self.add_arrow(tail, head)?;
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    /// Number of arrows `tail -> head`.
    pub fn arrow_count(&self, tail: usize, head: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (tail, head)).count()
    }

    /// Graphviz source; vertices and edges are sorted by id so the output
    /// does not depend on construction order. `labels[i]` is appended to the
    /// id of vertex `i` when given.
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        let mut edges: Vec<(&str, &str)> = self
            .arrows
            .iter()
            .map(|&(t, h)| (self.vertices[t].as_str(), self.vertices[h].as_str()))
            .collect();
        edges.sort();

        let mut out = String::new();
        writeln!(out, "digraph {} {{", quote(name)).unwrap();
        for &v in &order {
            let id = &self.vertices[v];
            match labels.and_then(|l| l.get(v)) {
                Some(extra) => {
                    writeln!(out, "  {} [label={}];", quote(id), quote(&format!("{id}\\n{extra}")))
                        .unwrap()
                }
                None => writeln!(out, "  {};", quote(id)).unwrap(),
            }
        }
        for (t, h) in edges {
            writeln!(out, "  {} -> {};", quote(t), quote(h)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        if ch == '"' {
            q.push('\\');
        }
        q.push(ch);
    }
    q.push('"');
    q
}
