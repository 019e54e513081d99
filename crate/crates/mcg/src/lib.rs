//! Verification engine for generating sets of the mapping class group of a
//! nonorientable genus-`g` surface with `p` punctures.
//!
//! The engine re-derives, by machine, every identity used in the proof that
//! this group is generated by five elements (or by six involutions), checking
//! each one in up to four independent semantic layers:
//!
//! * [`action`] — a symbolic curve-action calculus over the named-curve
//!   catalog, replaying the derivations step by step;
//! * [`homrep`] — the action on first homology, both with exact integer
//!   entries (annotated layer) and over the two-element field (the normative
//!   pass/fail layer);
//! * [`permrep`] — the induced permutation of the punctures;
//! * [`groupcheck`] — finite matrix-group machinery over GF(2)
//!   (Schreier–Sims stabilizer chains) used to compare generated subgroups.
//!
//! The identities themselves live in a line-oriented *ledger* executed by
//! [`verify`]; the surface model, curve catalog, and the geometric
//! conventions live in [`model`]; the word algebra and expression grammar
//! live in [`words`].
//!
//! Matrix arithmetic in [`homrep`] is generic over the scalar type via
//! `num-traits`; the concrete instantiations used throughout are exported
//! here as [`MatZ`] (exact integers) and [`MatF2`] (the two-element field).

pub mod action;
pub mod groupcheck;
pub mod homrep;
pub mod model;
pub mod permrep;
pub mod verify;
pub mod words;

pub use homrep::{F2, Mat};
pub use model::{CurveClass, CurveSymbol, Family, Generator, SurfaceParams};
pub use words::Word;

/// Exact-integer matrix: the annotated homology layer.
pub type MatZ = Mat<num_bigint::BigInt>;

/// Matrix over the two-element field: the normative homology layer.
pub type MatF2 = Mat<F2>;

/// Outcome of a single check in any layer.
///
/// `Undecided` is reserved for the symbolic action layer, whose rewrite
/// system is deliberately partial: failing to derive an image is not evidence
/// that an identity is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Undecided => write!(f, "undecided"),
        }
    }
}
