//! Configuration files, built-in sources and the experiment pipelines.

mod config;
mod pipeline;
mod sources;

pub use config::{parse_config, parse_config_str, ExperimentConfig, SourceSpec};
pub use pipeline::{
    reconstruct, relative_l2_error, run_direct, run_fbm_gen, run_r_omega, run_reconstruct,
    Reconstruction,
};
pub use sources::{builtin_source, load_source, read_source_file, SourceSamples};
