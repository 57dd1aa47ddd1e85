//! Permutation-group engine: element arithmetic, stabilizer chains, orbits,
//! cosets, double cosets and coset actions.

mod coset;
mod element;
mod group;
mod search;

pub use coset::{coset_action, coset_space, double_cosets, CosetAction, CosetSpace, DoubleCoset};
pub use element::Perm;
pub use group::{GroupJson, PermGroup, MAX_DEGREE};
pub use search::{element_of_order, normalizer_search, RandomElements};
