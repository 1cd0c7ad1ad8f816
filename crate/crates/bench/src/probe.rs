//! Best-effort platform readings.

use std::collections::HashSet;

/// Peak resident set size of this process in KiB, if the platform exposes it.
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

/// Number of physical cores, falling back to the logical count.
pub fn physical_cores() -> usize {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| count_cores(&s))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
}

fn count_cores(cpuinfo: &str) -> Option<usize> {
    let mut cores = HashSet::new();
    for block in cpuinfo.split("\n\n") {
        let field = |name: &str| {
            block.lines().find_map(|l| {
                let (k, v) = l.split_once(':')?;
                (k.trim() == name).then(|| v.trim().to_string())
            })
        };
        if let (Some(pkg), Some(core)) = (field("physical id"), field("core id")) {
            cores.insert((pkg, core));
        }
    }
    (!cores.is_empty()).then_some(cores.len())
}
