use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

use super::IntersectionLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    /// `None` marks the unframed vertex.
    pub weight: Option<i64>,
}

/// A tree with integer framings on all vertices but one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    unframed: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

impl PlumbingGraph {
    /// Validates and builds a graph. Vertex order is kept as given.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.id.is_empty() || v.id.chars().any(char::is_whitespace) {
                return Err(Error::Validation(format!("invalid vertex id `{}`", v.id)));
            }
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex `{}`", v.id)));
            }
        }
        let unframed: Vec<usize> = (0..vertices.len()).filter(|&i| vertices[i].weight.is_none()).collect();
        let unframed = match unframed.as_slice() {
            [i] => *i,
            [] => return Err(Error::Validation("no unframed vertex".into())),
            _ => return Err(Error::Validation(format!("{} unframed vertices, expected one", unframed.len()))),
        };
        if vertices.len() < 2 {
            return Err(Error::Validation("graph has no framed vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let ia = *index.get(a).ok_or_else(|| Error::Validation(format!("edge endpoint `{a}` is not a vertex")))?;
            let ib = *index.get(b).ok_or_else(|| Error::Validation(format!("edge endpoint `{b}` is not a vertex")))?;
            if ia == ib {
                return Err(Error::Validation(format!("loop at `{a}`")));
            }
            let e = (ia.min(ib), ia.max(ib));
            if !seen.insert(e) {
                return Err(Error::Validation(format!("duplicate edge `{a}`–`{b}`")));
            }
            es.push(e);
        }
        if es.len() + 1 != vertices.len() {
            return Err(Error::Validation(format!(
                "not a tree: {} vertices and {} edges",
                vertices.len(),
                es.len()
            )));
        }
        let g = PlumbingGraph { vertices, edges: es, unframed };
        if !g.is_connected() {
            return Err(Error::Validation("not a tree: graph is disconnected".into()));
        }
        Ok(g)
    }

    /// Parses the text format, or the JSON form when the input starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::from_json(text);
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut in_edges = false;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: n + 1, message };
            if line.eq_ignore_ascii_case("edges:") {
                if in_edges {
                    return Err(perr("second `edges:` section".into()));
                }
                in_edges = true;
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(perr(format!("expected two fields, found {}", fields.len())));
            }
            if in_edges {
                edges.push((fields[0].to_string(), fields[1].to_string()));
            } else {
                let weight = if fields[1] == "*" {
                    None
                } else {
                    Some(fields[1].parse::<i64>().map_err(|_| perr(format!("bad weight `{}`", fields[1])))?)
                };
                vertices.push(Vertex { id: fields[0].to_string(), weight });
            }
        }
        if !in_edges && vertices.len() > 1 {
            return Err(Error::Parse { line: text.lines().count(), message: "missing `edges:` section".into() });
        }
        Self::new(vertices, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        Self::new(g.vertices, g.edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            match v.weight {
                Some(w) => s.push_str(&format!("{} {}\n", v.id, w)),
                None => s.push_str(&format!("{} *\n", v.id)),
            }
        }
        s.push_str("edges:\n");
        for &(a, b) in &self.edges {
            s.push_str(&format!("{} {}\n", self.vertices[a].id, self.vertices[b].id));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let g = GraphJson {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|&(a, b)| (self.vertices[a].id.clone(), self.vertices[b].id.clone())).collect(),
        };
        serde_json::to_string(&g).expect("graph serializes")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|&(a, b)| (self.vertices[a].id.as_str(), self.vertices[b].id.as_str()))
    }

    pub fn unframed_id(&self) -> &str {
        &self.vertices[self.unframed].id
    }

    /// Ids of the framed vertices, in lattice order.
    pub fn framed_ids(&self) -> Vec<String> {
        self.vertices.iter().filter(|v| v.weight.is_some()).map(|v| v.id.clone()).collect()
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in self.neighbours(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Framed vertices whose degree in `Γ − v0` exceeds minus their weight.
    pub fn bad_vertices(&self) -> Vec<String> {
        (0..self.vertices.len())
            .filter_map(|i| {
                let w = self.vertices[i].weight?;
                let deg = self.neighbours(i).filter(|&j| j != self.unframed).count() as i64;
                (deg > -w).then(|| self.vertices[i].id.clone())
            })
            .collect()
    }

    /// The intersection form of `Γ − v0`.
    pub fn lattice(&self) -> Result<IntersectionLattice> {
        let framed: Vec<usize> = (0..self.vertices.len()).filter(|&i| i != self.unframed).collect();
        let pos: BTreeMap<usize, usize> = framed.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let s = framed.len();
        let mut q = IntMatrix::zeros(s);
        let mut u = vec![0i64; s];
        for (p, &i) in framed.iter().enumerate() {
            q.set(p, p, self.vertices[i].weight.expect("framed"));
        }
        for &(a, b) in &self.edges {
            match (pos.get(&a), pos.get(&b)) {
                (Some(&x), Some(&y)) => {
                    q.set(x, y, 1);
                    q.set(y, x, 1);
                }
                (Some(&x), None) | (None, Some(&x)) => u[x] = 1,
                (None, None) => unreachable!("edge between v0 and itself"),
            }
        }
        let ids = framed.iter().map(|&i| self.vertices[i].id.clone()).collect();
        IntersectionLattice::from_form(ids, q, u)
    }

    /// Isomorphism of weighted trees preserving the unframed vertex.
    pub fn is_isomorphic(&self, other: &PlumbingGraph) -> bool {
        self.vertices.len() == other.vertices.len() && self.canonical_code() == other.canonical_code()
    }

    fn canonical_code(&self) -> String {
        fn code(g: &PlumbingGraph, i: usize, parent: Option<usize>) -> String {
            let mut kids: Vec<String> = g.neighbours(i).filter(|&j| Some(j) != parent).map(|j| code(g, j, Some(i))).collect();
            kids.sort();
            let w = g.vertices[i].weight.map_or("*".to_string(), |w| w.to_string());
            format!("({}{})", w, kids.concat())
        }
        code(self, self.unframed, None)
    }
}
