use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};

use super::{PlumbingGraph, Vertex};

/// Negative continued fraction `n/d = a1 − 1/(a2 − …)`, all `a_i >= 2`.
fn hj_fraction(mut n: i64, mut d: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while d > 0 {
        let a = Integer::div_ceil(&n, &d);
        out.push(a);
        let r = a * d - n;
        n = d;
        d = r;
    }
    out
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// Star-shaped plumbing of the torus knot `T(p, q)` in `S³`: a `−1` center
/// carrying the unframed vertex and two legs resolving `p/p'` and `q/q'`.
pub fn torus_knot_graph(p: i64, q: i64) -> Result<PlumbingGraph> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidParams(format!("T({p},{q}): p and q must be at least 2")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidParams(format!("T({p},{q}): p and q are not coprime")));
    }
    let pp = (-mod_inverse(q, p)).rem_euclid(p);
    let qq = (-mod_inverse(p, q)).rem_euclid(q);
    let mut vertices = vec![Vertex { id: "c".into(), weight: Some(-1) }];
    let mut edges = Vec::new();
    for (name, n, d) in [("a", p, pp), ("b", q, qq)] {
        let mut prev = "c".to_string();
        for (i, a) in hj_fraction(n, d).into_iter().enumerate() {
            let id = format!("{name}{}", i + 1);
            vertices.push(Vertex { id: id.clone(), weight: Some(-a) });
            edges.push((prev, id.clone()));
            prev = id;
        }
    }
    vertices.push(Vertex { id: "v0".into(), weight: None });
    edges.push(("c".into(), "v0".into()));
    let g = PlumbingGraph::new(vertices, edges)?;
    let det = g.lattice()?.det().abs();
    if det != 1.into() {
        return Err(Error::InvalidParams(format!("T({p},{q}): graph has |det| = {det}, not 1")));
    }
    Ok(g)
}
