//! Copy-on-write storage shared by all containers.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

/// Operations needed to form linear combinations of containers.
pub trait Container: Sized {
    /// A handle sharing this container's data; the deep copy is deferred to
    /// the first mutation of either handle.
    fn copy(&self) -> Self;

    fn scal(&mut self, alpha: f64);

    fn axpy(&mut self, alpha: f64, other: &Self) -> crate::Result<()>;

    /// Number of handles currently sharing the data.
    fn share_count(&self) -> usize;

    /// Deep copies performed across the copy family this handle belongs to.
    fn deep_copies(&self) -> usize;
}

/// A shared backend that is deep-copied on first mutation while shared.
#[derive(Debug)]
pub(crate) struct Cow<B> {
    backend: Arc<B>,
    copies: Arc<AtomicUsize>,
}

impl<B: Clone> Cow<B> {
    pub fn new(backend: B) -> Self {
        Self {
            backend: Arc::new(backend),
            copies: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn share(&self) -> Self {
        Self {
            backend: Arc::clone(&self.backend),
            copies: Arc::clone(&self.copies),
        }
    }

    pub fn get(&self) -> &B {
        &self.backend
    }

    /// Mutable access, deep-copying first if the backend is shared.
    pub fn get_mut(&mut self) -> &mut B {
        if Arc::get_mut(&mut self.backend).is_none() {
            self.backend = Arc::new((*self.backend).clone());
            self.copies.fetch_add(1, Ordering::Relaxed);
        }
        Arc::get_mut(&mut self.backend).expect("backend is unique after copying")
    }

    pub fn share_count(&self) -> usize {
        Arc::strong_count(&self.backend)
    }

    pub fn deep_copies(&self) -> usize {
        self.copies.load(Ordering::Relaxed)
    }
}
