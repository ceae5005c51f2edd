//! Bundled data files, for callers that do not supply their own.

/// 53a and its synthetic ordinary-at-5 variant, a_q for q < 1000.
pub const EIGEN_53: &str = include_str!("../data/eigen_53.jsonl");
/// Companions at level 8215 used to separate the 53a-ord5 component.
pub const COMPANIONS_8215: &str = include_str!("../data/companions_8215.jsonl");
/// Arithmetic data for 53a over Q(sqrt -31) at p = 5.
pub const CURVE_53A: &str = include_str!("../data/curve_53a.jsonl");
