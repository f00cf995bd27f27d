//! Named wall/user/system time sections with CSV export.
//!
//! ```
//! use pdekit::common::timings::Timings;
//!
//! let timings = Timings::new();
//! timings.start("sec").unwrap();
//! {
//!     let _guard = timings.scoped("sec.inner").unwrap();
//! }
//! timings.stop("sec").unwrap();
//! let mut csv = Vec::new();
//! timings.write_csv(&mut csv, 1).unwrap();
//! assert!(String::from_utf8(csv).unwrap().starts_with("threads,ranks,sec_avg_usr"));
//! ```

use std::io::{self, Write};
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use indexmap::IndexMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Stamp {
    wall: Instant,
    user: Duration,
    sys: Duration,
}

fn timeval(tv: libc::timeval) -> Duration {
    Duration::from_secs(tv.tv_sec.max(0) as u64) + Duration::from_micros(tv.tv_usec.max(0) as u64)
}

/// Process user and system CPU time.
fn cpu_times() -> (Duration, Duration) {
    // SAFETY: getrusage only writes into the zeroed struct we pass.
    unsafe {
        let mut usage: libc::rusage = std::mem::zeroed();
        if libc::getrusage(libc::RUSAGE_SELF, &mut usage) == 0 {
            (timeval(usage.ru_utime), timeval(usage.ru_stime))
        } else {
            (Duration::ZERO, Duration::ZERO)
        }
    }
}

impl Stamp {
    fn now() -> Self {
        let (user, sys) = cpu_times();
        Self {
            wall: Instant::now(),
            user,
            sys,
        }
    }
}

/// Accumulated measurements of one section.
#[derive(Debug, Clone, Default)]
pub struct TimingSection {
    pub wall: Duration,
    pub user: Duration,
    pub sys: Duration,
    start: Option<Stamp>,
}

impl TimingSection {
    pub fn is_running(&self) -> bool {
        self.start.is_some()
    }
}

/// Registry of timing sections, ordered by first start.
#[derive(Debug, Default)]
pub struct Timings {
    sections: Mutex<IndexMap<String, TimingSection>>,
}

/// The process-wide registry.
pub fn timings() -> &'static Timings {
    static GLOBAL: OnceLock<Timings> = OnceLock::new();
    GLOBAL.get_or_init(Timings::new)
}

impl Timings {
    pub fn new() -> Self {
        Self::default()
    }

    fn lock(&self) -> MutexGuard<'_, IndexMap<String, TimingSection>> {
        self.sections.lock().unwrap_or_else(|p| p.into_inner())
    }

    pub fn start(&self, name: &str) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Usage("timing section name is empty".into()));
        }
        let mut sections = self.lock();
        let section = sections.entry(name.to_string()).or_default();
        if section.is_running() {
            return Err(Error::Usage(format!("timing section '{name}' is already running")));
        }
        section.start = Some(Stamp::now());
        Ok(())
    }

    pub fn stop(&self, name: &str) -> Result<()> {
        let now = Stamp::now();
        let mut sections = self.lock();
        let section = sections
            .get_mut(name)
            .filter(|s| s.is_running())
            .ok_or_else(|| Error::Usage(format!("timing section '{name}' is not running")))?;
        let start = section.start.take().expect("running");
        section.wall += now.wall.saturating_duration_since(start.wall);
        section.user += now.user.saturating_sub(start.user);
        section.sys += now.sys.saturating_sub(start.sys);
        Ok(())
    }

    /// Starts `name` and stops it when the guard is dropped.
    pub fn scoped(&self, name: &str) -> Result<ScopedTiming<'_>> {
        self.start(name)?;
        Ok(ScopedTiming {
            timings: self,
            name: name.to_string(),
        })
    }

    /// Accumulated measurements of `name`, if it was ever started.
    pub fn section(&self, name: &str) -> Option<TimingSection> {
        self.lock().get(name).cloned()
    }

    pub fn section_names(&self) -> Vec<String> {
        self.lock().keys().cloned().collect()
    }

    pub fn reset(&self) {
        self.lock().clear();
    }

    /// Writes the CSV report with `threads` in the first column.
    ///
    /// Durations are integer milliseconds. With a single rank the average
    /// and maximum columns coincide.
    pub fn write_csv<W: Write>(&self, sink: &mut W, threads: usize) -> io::Result<()> {
        let sections = self.lock();
        let mut header = String::from("threads,ranks,");
        let mut data = format!("{threads},1");
        let mut columns = Vec::new();
        for (name, s) in sections.iter() {
            for (measure, d) in [("usr", s.user), ("wall", s.wall), ("sys", s.sys)] {
                let ms = d.as_millis();
                columns.push(format!("{name}_avg_{measure},{name}_max_{measure}"));
                data.push_str(&format!(",{ms},{ms}"));
            }
        }
        header.push_str(&columns.join(","));
        writeln!(sink, "{header}")?;
        writeln!(sink, "{data}")
    }

    /// Writes the CSV report using the size of the worker thread pool.
    pub fn output_all_measures<W: Write>(&self, sink: &mut W) -> io::Result<()> {
        self.write_csv(sink, rayon::current_num_threads())
    }
}

/// Guard returned by [`Timings::scoped`].
#[must_use = "the section stops when the guard is dropped"]
pub struct ScopedTiming<'a> {
    timings: &'a Timings,
    name: String,
}

impl Drop for ScopedTiming<'_> {
    fn drop(&mut self) {
        let _ = self.timings.stop(&self.name);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(t: &Timings, threads: usize) -> String {
        let mut out = Vec::new();
        t.write_csv(&mut out, threads).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn empty_registry() {
        assert_eq!(csv(&Timings::new(), 4), "threads,ranks,\n4,1\n");
    }

    #[test]
    fn nested_sections_in_first_start_order() {
        let t = Timings::new();
        t.start("sec").unwrap();
        for _ in 0..3 {
            let _g = t.scoped("sec.inner").unwrap();
        }
        t.stop("sec").unwrap();
        let text = csv(&t, 8);
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "threads,ranks,sec_avg_usr,sec_max_usr,sec_avg_wall,sec_max_wall,sec_avg_sys,sec_max_sys,\
             sec.inner_avg_usr,sec.inner_max_usr,sec.inner_avg_wall,sec.inner_max_wall,\
             sec.inner_avg_sys,sec.inner_max_sys"
        );
        let data: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(data.len(), 14);
        assert_eq!(&data[..2], &["8", "1"]);
    }

    #[test]
    fn misuse_is_an_error() {
        let t = Timings::new();
        assert!(matches!(t.stop("x"), Err(Error::Usage(_))));
        t.start("x").unwrap();
        assert!(matches!(t.start("x"), Err(Error::Usage(_))));
        t.stop("x").unwrap();
        assert!(t.stop("x").is_err());
    }

    #[test]
    fn guard_stops_on_unwind() {
        let t = Timings::new();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            let _g = t.scoped("boom").unwrap();
            panic!("unwinding");
        }));
        assert!(result.is_err());
        assert!(!t.section("boom").unwrap().is_running());
    }

    #[test]
    fn sleep_is_measured() {
        let t = Timings::new();
        t.start("sleep").unwrap();
        std::thread::sleep(Duration::from_millis(50));
        t.stop("sleep").unwrap();
        let wall = t.section("sleep").unwrap().wall;
        assert!(wall >= Duration::from_millis(50) && wall <= Duration::from_millis(500));
    }

    #[test]
    fn accumulation_is_monotone() {
        let t = Timings::new();
        let mut last = Duration::ZERO;
        for _ in 0..5 {
            t.start("m").unwrap();
            std::thread::sleep(Duration::from_millis(1));
            t.stop("m").unwrap();
            let s = t.section("m").unwrap();
            assert!(s.wall >= last);
            last = s.wall;
        }
    }
}
