//! Invariant laminations of the circle under z ↦ z^d, with exact rational
//! arithmetic on angles.

pub mod chords;
pub mod circle;
pub mod error;
pub mod fixtures;
pub mod gaps;
pub mod geolam;
pub mod io;
pub mod quadratic;
pub mod render;

pub use chords::{
    chord_length, image, is_critical, linked, preimage_matchings, sibling_collections, Chord,
    SiblingCollection,
};
pub use circle::{
    arc_length, circular_order, orbit_info, period_of, sigma, sigma_n, Angle, Arc, Closure,
    OrbitInfo,
};
pub use error::{Error, Result};
pub use gaps::{
    boundary_degree, check_edge_fate, classify_gap, gap_image, gap_period, gaps_of, Gap,
    GapClass, GapKind, GapSet,
};
pub use geolam::{
    analyze_cone, cone_at, from_equivalence, hausdorff_distance, is_sibling_invariant,
    is_thurston_invariant, max_collapsing_polygon, pullback_construct, verify_unlinked,
    ChoicePolicy, CriticalPortrait, GeneratorKind, GeneratorMeta, Geolamination,
    InvarianceReport, PortraitMember, Script, Verdict,
};
pub use quadratic::{
    critical_set, is_fixed_return, is_hyperbolic, is_qml_leaf, lamination_from_minor,
    limit_geolaminations, majors_and_minor, minor_quotient, psi, qml_approx, qml_approx_jobs,
    rigidity_certificate,
    siegel_set, CriticalSet, MajorPair, MinorEquivClass, QmlApprox, RigidityCertificate,
    RigidityTarget, RigidityVerdict, SiegelSample,
};
pub use render::{render_svg, RenderOptions};
