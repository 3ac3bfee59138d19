//! Line geometry of the twisted cubic in PG(3,q).
//!
//! The crate builds, from the ground up, the machinery needed to study how the
//! projective group of a twisted cubic acts on the lines of PG(3,q):
//!
//! * [`gfq`] — exact arithmetic in the Galois field GF(q), q = p^n, via
//!   discrete exp/log tables;
//! * [`pg3`] — points, planes and Plücker line coordinates of PG(3,q);
//! * [`cubic`] — the twisted cubic, its osculating planes, chords and axes,
//!   the null polarity, and an exhaustive classifier for every line of the
//!   space;
//! * [`group`] — the 3-dimensional lift of PGL(2,q) that stabilizes the
//!   cubic, with point/line actions and small-group identification;
//! * [`orbits`] — breadth-first orbit closure, stabilizer search, and
//!   deterministic per-class orbit censuses;
//! * [`families`] — two concrete families of external lines (a fixed line
//!   `Λ` and a one-parameter family `ℓ_μ`) together with closed-form
//!   predictions for their orbit lengths and stabilizer groups.
//!
//! Everything is exact: no floating point, no probabilistic identity
//! testing. All searches are exhaustive and schedule-independent, so repeated
//! runs (at any worker count) produce identical results.

pub mod cubic;
pub mod families;
pub mod gfq;
pub mod group;
pub mod orbits;
pub mod pg3;
