//! The random coprime colouring on finite windows: coset configurations,
//! evaluation, the gcd oracle, coset inference and file formats.

mod colour;
mod config;
mod io;
mod window;

pub use colour::{
    colour_window, count_white_blocks, infer_cosets, oracle_from_origin, truncation_error_bound, Colouring,
    CosetInference, Layout, Provenance,
};
pub use config::{
    config_from_base_point, load_config, sample_coset_config, save_config, CosetConfig, CONFIG_MAGIC,
};
pub use io::{colouring_stats_csv, load_colouring, save_colouring};
pub use window::Window;

pub(crate) use colour::{in_class, require_full};
pub(crate) use config::sample_with_stream;
