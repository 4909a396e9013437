//! Inputs shared by the criterion benches.

use plcommute_core::rational::{int, rat};
use plcommute_core::{conjugate_map, tent, PlMap, UnimodalMap};

/// A three-piece increasing homeomorphism with non-dyadic kinks.
pub fn homeomorphism() -> PlMap {
    PlMap::new(vec![
        (int(0), int(0)),
        (rat(2, 7), rat(1, 5)),
        (rat(3, 5), rat(2, 3)),
        (int(1), int(1)),
    ])
    .expect("valid homeomorphism")
}

/// The tent map conjugated by [`homeomorphism`].
pub fn conjugated_tent() -> UnimodalMap {
    conjugate_map(&tent(), &homeomorphism()).expect("conjugate of the tent map")
}
