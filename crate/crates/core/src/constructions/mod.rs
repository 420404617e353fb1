//! Generators for staged systems realizing the line, square and general-shape constructions.

pub mod counter;
pub mod crazy;
pub(crate) mod decompose;
pub mod jigsaw;
pub mod lines;
pub mod monotone;
pub mod scale2;
pub mod simulation;
pub mod spanning;

pub use counter::gen_counter;
pub use crazy::gen_crazy_string;
pub use jigsaw::gen_square_jigsaw;
pub use lines::{gen_line, gen_line_pow2};
pub use monotone::gen_monotone;
pub use scale2::gen_scale2;
pub use simulation::gen_simulation;
pub use spanning::gen_spanning_tree;

/// Which face of a string supertile to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    North,
    South,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("shape is not simply connected")]
    NotSimplyConnected,
    #[error("shape is not x-monotone")]
    NotMonotone,
    #[error("shape is not 4-connected")]
    Disconnected,
    #[error("bit string needs {needed} positions but the bin budget allows {allowed}")]
    BudgetTooSmall { needed: usize, allowed: usize },
    #[error("simulation supports temperature 1 with unit-strength glues only")]
    UnsupportedTemperature,
    #[error("not a string supertile: {0}")]
    NotAStringSupertile(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

/// Bits on `face` of a supertile from one of the string generators: a counter row, a
/// crazy-mixing string (north face) or a free-standing macro glue.
pub fn decode_bits(
    s: &crate::assembly::Supertile,
    tiles: &crate::assembly::TileSet,
    face: Face,
) -> Result<String, ConstructionError> {
    if s.cells().iter().any(|(_, t)| tiles.tile(*t).name.starts_with("bitL_")) {
        return counter::decode_row(s, tiles, face);
    }
    if tiles.glues.id("none").is_some() {
        return match face {
            Face::North => crazy::decode_marks(s, tiles),
            Face::South => Err(ConstructionError::NotAStringSupertile("bits are on the north face".into())),
        };
    }
    simulation::decode_macro_glue(s, tiles, face)
}
