//! Run manifests: one JSON line per run, echoing every resolved parameter,
//! the software version, wall-clock time and the files written.

use std::time::Instant;

use serde_json::{json, Value};

pub struct ManifestTimer {
    command: &'static str,
    started: Instant,
}

impl ManifestTimer {
    pub fn start(command: &'static str) -> Self {
        ManifestTimer {
            command,
            started: Instant::now(),
        }
    }

    /// Prints the manifest line to stdout.
    pub fn emit(self, params: Value, outputs: &[String]) {
        let manifest = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "params": params,
            "outputs": outputs,
            "wall_clock_secs": self.started.elapsed().as_secs_f64(),
        });
        println!("{manifest}");
    }
}
