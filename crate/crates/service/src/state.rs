use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use catalogue_core::review::{FinalizeOutcome, ReviewPolicy, ValidationSession};
use catalogue_core::store::Store;
use parking_lot::Mutex;

/// An open review and, once finalized, its outcome.
#[derive(Debug)]
pub struct Review {
    pub session: ValidationSession,
    pub outcome: Option<FinalizeOutcome>,
}

/// Shared by all handlers. Entry data lives in the store; the only other
/// state is the table of open reviews.
#[derive(Debug)]
pub struct AppState {
    pub store: Arc<Store>,
    pub policy: ReviewPolicy,
    reviews: Mutex<HashMap<u64, Arc<Mutex<Review>>>>,
    next_review: AtomicU64,
}

impl AppState {
    pub fn new(store: Arc<Store>, policy: ReviewPolicy) -> Self {
        Self { store, policy, reviews: Mutex::new(HashMap::new()), next_review: AtomicU64::new(1) }
    }

    pub fn open_review(&self, session: ValidationSession) -> u64 {
        let id = self.next_review.fetch_add(1, Ordering::Relaxed);
        self.reviews.lock().insert(id, Arc::new(Mutex::new(Review { session, outcome: None })));
        id
    }

    /// The review `id`, provided it belongs to `uid`.
    pub fn review(&self, uid: &str, id: u64) -> Option<Arc<Mutex<Review>>> {
        let review = self.reviews.lock().get(&id).cloned()?;
        let matches = review.lock().session.uid == uid;
        matches.then_some(review)
    }
}
