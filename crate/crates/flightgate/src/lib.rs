//! File formats, the REST service and the command line for the compliance
//! engine in `flightgate-core`.

pub mod load;
pub mod query;
pub mod report;
pub mod schema;
pub mod service;

use std::time::Instant;

use flightgate_core::Clock;

/// Monotonic milliseconds since construction.
#[derive(Clone, Copy, Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock { origin: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now_ms(&self) -> f64 {
        self.origin.elapsed().as_secs_f64() * 1000.0
    }
}
