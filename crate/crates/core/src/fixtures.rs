//! The built-in fixture pack.

use crate::error::{Error, Result};
use crate::plumbing::PlumbingGraph;

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "trefoil", description: "right-handed trefoil in S^3", text: include_str!("../../../fixtures/trefoil.plumb") },
    Fixture {
        name: "double_cover",
        description: "branched double cover of the trefoil, a knot in L(3,2)",
        text: include_str!("../../../fixtures/double_cover.plumb"),
    },
    Fixture { name: "unknot", description: "unknot in S^3", text: include_str!("../../../fixtures/unknot.plumb") },
    Fixture { name: "rp3", description: "fiber of the -2 disk bundle in RP^3", text: include_str!("../../../fixtures/rp3.plumb") },
    Fixture { name: "chain22", description: "chain (-2)-(-2), a knot in L(3,2)", text: include_str!("../../../fixtures/chain22.plumb") },
    Fixture { name: "t25", description: "torus knot T(2,5)", text: include_str!("../../../fixtures/t25.plumb") },
    Fixture { name: "t34", description: "torus knot T(3,4)", text: include_str!("../../../fixtures/t34.plumb") },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    let name = name.strip_suffix(".plumb").unwrap_or(name);
    FIXTURES.iter().find(|f| f.name == name)
}

pub fn load(name: &str) -> Result<PlumbingGraph> {
    let f = fixture(name).ok_or_else(|| Error::InvalidParams(format!("unknown fixture `{name}`")))?;
    PlumbingGraph::parse(f.text)
}
