//! Resident-set sampling.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

pub const SAMPLE_PERIOD: Duration = Duration::from_millis(10);

/// Current resident set size in bytes, if the platform exposes it.
pub fn current_rss() -> Option<u64> {
    let statm = std::fs::read_to_string("/proc/self/statm").ok()?;
    let pages: u64 = statm.split_whitespace().nth(1)?.parse().ok()?;
    // SAFETY: sysconf has no preconditions.
    let page = unsafe { libc::sysconf(libc::_SC_PAGESIZE) };
    (page > 0).then(|| pages * page as u64)
}

/// Background thread recording the highest RSS seen.
pub struct RssSampler {
    stop: Arc<AtomicBool>,
    handle: JoinHandle<u64>,
}

impl RssSampler {
    pub fn start() -> Self {
        let stop = Arc::new(AtomicBool::new(false));
        let flag = Arc::clone(&stop);
        let handle = thread::spawn(move || {
            let mut peak = current_rss().unwrap_or(0);
            while !flag.load(Ordering::Relaxed) {
                thread::sleep(SAMPLE_PERIOD);
                peak = peak.max(current_rss().unwrap_or(0));
            }
            peak
        });
        RssSampler { stop, handle }
    }

    /// Stops sampling and returns the peak, including one final sample.
    pub fn finish(self) -> u64 {
        self.stop.store(true, Ordering::Relaxed);
        let peak = self.handle.join().unwrap_or(0);
        peak.max(current_rss().unwrap_or(0))
    }
}
