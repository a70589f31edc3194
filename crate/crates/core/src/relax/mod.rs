//! Block (line) relaxation.

pub mod blocks;
pub mod lines;
pub mod relaxer;

pub use blocks::{build_line_blocks, divisions_from_breakpoints, divisions_from_keys, BlockSet, Divisions};
pub use lines::{hemker_key, hemker_line_blocks, square_line_blocks, LineScheme};
pub use relaxer::{blkrelax_apply, blkrelax_setup, BlockRelaxer};
