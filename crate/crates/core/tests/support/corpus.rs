//! The example models shipped in `models/`, embedded at compile time.

pub const LOOP_MODELS: &[(&str, &str)] = &[
    ("inc_loop", include_str!("../../../../models/inc_loop.pgcl")),
    ("two_flip_loop", include_str!("../../../../models/two_flip_loop.pgcl")),
    ("flip_or_reset", include_str!("../../../../models/flip_or_reset.pgcl")),
    ("countdown", include_str!("../../../../models/countdown.pgcl")),
    ("geometric", include_str!("../../../../models/geometric.pgcl")),
    ("demonic_walk", include_str!("../../../../models/demonic_walk.pgcl")),
    ("lossy_counter", include_str!("../../../../models/lossy_counter.pgcl")),
    ("chase", include_str!("../../../../models/chase.pgcl")),
];

/// Candidate predicate sets per loop model; each includes the guard or its
/// negation.
pub const CANDIDATE_PHI: &[(&str, &[&str])] = &[
    ("inc_loop", &["x = 3"]),
    ("inc_loop", &["x = 3", "x = 0 | x = 2"]),
    ("two_flip_loop", &["x = y"]),
    ("flip_or_reset", &["x = y"]),
    ("countdown", &["x > 0"]),
    ("geometric", &["c = 0"]),
    ("geometric", &["c = 0", "n = 0"]),
    ("demonic_walk", &["0 < x & x < 4", "x = 0"]),
    ("chase", &["x = y"]),
];
