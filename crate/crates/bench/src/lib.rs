//! Intentionally empty: this crate exists to host the criterion benches.
