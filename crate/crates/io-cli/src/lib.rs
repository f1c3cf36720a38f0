//! File formats and the command-line surface of the pipeline.
//!
//! The library half reads and writes the artifact formats — PLY and OBJ
//! clouds, label CSVs with their proxy JSON sidecars, OBJ meshes with
//! warning reports, and the run manifest serialized beside every output.
//! The binary half (`vsa`) wires them to the segmentation and
//! mesh-extraction crates behind five subcommands: `segment`, `simplify`,
//! `counterexample`, `eta-heuristic` and `bench`.
//!
//! Every command is deterministic: the same manifest reproduces every
//! output byte for byte.

mod cli;
mod error;
mod manifest;
mod obj;
mod ply;
mod segio;

pub use cli::{
    load_point_cloud, parse_seeding, run, BenchArgs, Cli, Command, CounterexampleArgs,
    EtaHeuristicArgs, SegmentArgs, SimplifyArgs,
};
pub use error::{CliError, CliResult, EXIT_DATA, EXIT_NONCONVERGENCE, EXIT_USAGE};
pub use manifest::{
    ModeSetting, PipelineSettings, RunManifest, SeedingSettings, SolverSettings, StrategySetting,
    WeightsSetting, WtildeSettings,
};
pub use obj::{load_obj_cloud, load_obj_mesh, save_mesh_obj, save_mesh_report, MeshReport, ObjMesh, WarningRecord};
pub use ply::{load_ply, palette_color, save_cloud_ply, save_segmentation_ply, write_atomically};
pub use segio::{
    load_labels_csv, load_proxies_json, load_segmentation, save_labels_csv, save_proxies_json,
    ProxyRecord,
};
