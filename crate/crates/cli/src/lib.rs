//! Batch front end for hollowkit: scene files in, result documents and
//! figures out.

pub mod json;
pub mod render;
pub mod run;
pub mod scene;

pub use run::{run, Command, Overrides, RunError, RunOutput, RunResult, Verdict};
pub use scene::{BodySpec, Scene, SceneError, SceneOptions};
