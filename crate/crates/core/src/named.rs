//! Small named structures used throughout the tests and the CLI.

use crate::error::{Error, Result};
use crate::pstss::PartialSts;

pub const EXAMPLE_NAMES: &[&str] = &[
    "triangle",
    "fano",
    "grid9",
    "noamalgam_b1",
    "noamalgam_b2",
    "minpair",
];

/// Base of the minimal pair inside `minpair`.
pub const MINPAIR_BASE: [&str; 3] = ["b", "a2", "a3"];
/// Glued bases of the two non-amalgamable structures, in glue order.
pub const NOAMALGAM_BASE_1: [&str; 2] = ["a", "b"];
pub const NOAMALGAM_BASE_2: [&str; 2] = ["a'", "b'"];

fn build(vertices: &[&str], blocks: &[[&str; 3]]) -> PartialSts {
    PartialSts::build(vertices.iter().copied(), blocks.iter().copied())
        .expect("named examples are valid")
}

pub fn triangle() -> PartialSts {
    build(&["x", "y", "z"], &[["x", "y", "z"]])
}

/// The Fano plane on `p1..p7`.
pub fn fano() -> PartialSts {
    build(
        &["p1", "p2", "p3", "p4", "p5", "p6", "p7"],
        &[
            ["p1", "p2", "p3"],
            ["p1", "p4", "p5"],
            ["p1", "p6", "p7"],
            ["p2", "p4", "p6"],
            ["p2", "p5", "p7"],
            ["p3", "p4", "p7"],
            ["p3", "p5", "p6"],
        ],
    )
}

const GRID_VERTICES: [&str; 9] = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"];

/// 3x3 grid: rows and columns. Confined but orientable.
pub fn grid9() -> PartialSts {
    build(
        &GRID_VERTICES,
        &[
            ["a1", "a2", "a3"],
            ["a4", "a5", "a6"],
            ["a7", "a8", "a9"],
            ["a1", "a4", "a7"],
            ["a2", "a5", "a8"],
            ["a3", "a6", "a9"],
        ],
    )
}

/// The grid with the first column given as {a1,a4,a6}. That block shares
/// the pair {a4,a6} with the middle row, so this always fails with
/// [`Error::PairReuse`].
pub fn grid9_literal() -> Result<PartialSts> {
    PartialSts::build(
        GRID_VERTICES,
        [
            ["a1", "a2", "a3"],
            ["a4", "a5", "a6"],
            ["a7", "a8", "a9"],
            ["a1", "a4", "a6"],
            ["a2", "a5", "a8"],
            ["a3", "a6", "a9"],
        ],
    )
}

pub fn noamalgam_b1() -> PartialSts {
    build(
        &["a", "b", "e", "f", "ab", "ae", "ef", "fae", "bae", "fbae"],
        &[
            ["a", "e", "ae"],
            ["e", "f", "ef"],
            ["f", "ae", "fae"],
            ["a", "b", "ab"],
            ["ae", "b", "bae"],
            ["f", "bae", "fbae"],
            ["ef", "fae", "fbae"],
        ],
    )
}

pub fn noamalgam_b2() -> PartialSts {
    build(
        &["a'", "b'", "c", "d", "a'b'", "a'c", "cd", "cab", "dac", "dcab"],
        &[
            ["a'", "b'", "a'b'"],
            ["a'", "c", "a'c"],
            ["c", "d", "cd"],
            ["c", "a'b'", "cab"],
            ["d", "a'c", "dac"],
            ["d", "cab", "dcab"],
            ["cd", "dac", "dcab"],
        ],
    )
}

/// `b = (a1*a2)*(a1*a3)` with `p12 = a1*a2`, `p13 = a1*a3`.
pub fn minpair() -> PartialSts {
    build(
        &["b", "a1", "a2", "a3", "p12", "p13"],
        &[["a1", "a2", "p12"], ["a1", "a3", "p13"], ["p12", "p13", "b"]],
    )
}

pub fn canonical_example(name: &str) -> Result<PartialSts> {
    Ok(match name {
        "triangle" => triangle(),
        "fano" => fano(),
        "grid9" => grid9(),
        "grid9_literal" => grid9_literal()?,
        "noamalgam_b1" => noamalgam_b1(),
        "noamalgam_b2" => noamalgam_b2(),
        "minpair" => minpair(),
        other => return Err(Error::UnknownExample(other.to_string())),
    })
}
