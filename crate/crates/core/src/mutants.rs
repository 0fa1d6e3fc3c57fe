//! Fault-injection switches for the corpus mutation tests. Both default to off.

use std::sync::atomic::{AtomicBool, Ordering};

/// Flips the sign of the `(-1)^n` correction term in the smooth middle Betti number.
pub static FLIP_SMOOTH_BETTI_SIGN: AtomicBool = AtomicBool::new(false);

/// Emits `1 + sum mu` as the top bound even when `n + s` is even.
pub static DROP_STRICTNESS: AtomicBool = AtomicBool::new(false);

pub fn reset() {
    FLIP_SMOOTH_BETTI_SIGN.store(false, Ordering::SeqCst);
    DROP_STRICTNESS.store(false, Ordering::SeqCst);
}

pub(crate) fn flip_smooth_betti_sign() -> bool {
    FLIP_SMOOTH_BETTI_SIGN.load(Ordering::SeqCst)
}

pub(crate) fn drop_strictness() -> bool {
    DROP_STRICTNESS.load(Ordering::SeqCst)
}
