//! Surface parameters, the named-curve catalog, and the conventions that
//! everything else is built from: homology classes of the catalog curves,
//! twist data, a conservative geometric-intersection table, and the exact
//! column maps of the non-twist generators.
//!
//! # The surface and its chain of crosscaps
//!
//! `N_{g,p}` denotes a closed nonorientable surface of genus `g ≥ 14` with
//! `p ≥ 1` punctures, pictured as a sphere with `g` crosscaps arranged along
//! an equatorial chain and the punctures collected between two of them.
//! Writing `r = ⌊(g-1)/2⌋` (so `g = 2r+1` or `g = 2r+2`), the named curves
//! are:
//!
//! * `alpha_l` (`l ∈ [1,g]`, cyclic) — two-sided curves through crosscaps
//!   `l` and `l+1`;
//! * `a_i` (`i ∈ [1,r]`) — two-sided curves enclosing crosscaps `1..2i`;
//!   `a_1 = alpha_1`, and the aliases `b_i = alpha_{2i}`, `c_j = alpha_{2j+1}`
//!   (with `c_r` existing only for even `g`);
//! * `gamma_j` (`j ∈ [1,g]`, cyclic) — two-sided curves through the four
//!   crosscaps `j..j+3`; `gamma_1 = a_2`;
//! * `delta_i` (`i ∈ [1,g]`) — the one-sided core of crosscap `i`;
//! * `e_k` (`k ∈ [1,p-1]`) and `f_i` (`i ∈ [1,r]`) — puncture-side and
//!   reflected companions of `a_1` and `a_i`, homologous to them up to sign
//!   but distinct curves in the punctured surface;
//! * `d1_i`, `d2_i` (`i ∈ [1,r-2]`) — curves obtained from `a_{i+1}` by an
//!   explicit product of eight twists (see [`d2_defining_letters`]);
//! * boundary curves of small subsurfaces (see [`CurveSymbol::boundary`]).
//!
//! # Homology conventions
//!
//! First homology of the punctured surface is presented on the basis
//! `mu_1..mu_g` (crosscap cores) and `nu_1..nu_{p-1}` (loops around the
//! first `p-1` punctures), with the loop around the last puncture
//! eliminated via `nu_p = -2·(mu_1+..+mu_g) - (nu_1+..+nu_{p-1})`.
//! A matrix column `k` holds the image of basis vector `k`, and a word of
//! generators multiplies with the rightmost letter acting first.
//!
//! A two-sided curve carries transvection data `(v, phi)` with `phi(v) = 0`:
//! the twist about it acts on homology as `x -> x + eps·phi(x)·v`. The sign
//! `eps = +1` denotes the right-handed twist for the curve's standard
//! orientation; the `e`- and `f`-families carry their own `eps` conventions
//! recording how those curves are produced from `a`-curves by reflections
//! (see [`CurveClass::tag`]).

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::fmt;

/// Errors raised by the model layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    /// The surface parameters are outside the supported range.
    #[error("parameters out of range: g={g}, p={p} ({reason})")]
    OutOfRange { g: i64, p: i64, reason: String },
    /// A curve name does not exist in the catalog at these parameters.
    #[error("unknown curve: {name}")]
    UnknownCurve { name: String },
    /// A generator name or index does not exist at these parameters.
    #[error("unknown generator: {name}")]
    UnknownGenerator { name: String },
    /// A twist was requested about a one-sided curve.
    #[error("one-sided curve has no twist: {name}")]
    OneSidedCurve { name: String },
}

/// Validated surface parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceParams {
    /// Nonorientable genus (number of crosscaps), `g ≥ 14`.
    pub g: u32,
    /// Number of punctures, `p ≥ 1`.
    pub p: u32,
    /// `r = ⌊(g-1)/2⌋`, the index range of the `a`-family.
    pub r: u32,
    /// Whether `g` is even (`g = 2r+2`) rather than odd (`g = 2r+1`).
    pub even: bool,
}

impl SurfaceParams {
    /// Validates and builds surface parameters.
    pub fn build(g: i64, p: i64) -> Result<Self, ModelError> {
        if g < 14 {
            return Err(ModelError::OutOfRange {
                g,
                p,
                reason: "genus must be at least 14".into(),
            });
        }
        if p < 1 {
            return Err(ModelError::OutOfRange {
                g,
                p,
                reason: "at least one puncture is required".into(),
            });
        }
        let even = g % 2 == 0;
        let r = if even { (g - 2) / 2 } else { (g - 1) / 2 };
        Ok(SurfaceParams {
            g: g as u32,
            p: p as u32,
            r: r as u32,
            even,
        })
    }

    /// Dimension of the homology representation, `n = g + p - 1`.
    pub fn dim(&self) -> usize {
        (self.g + self.p - 1) as usize
    }

    /// Largest valid `c`-index: `r` for even genus, `r-1` for odd.
    pub fn c_max(&self) -> u32 {
        if self.even {
            self.r
        } else {
            self.r - 1
        }
    }

    /// Canonical crosscap index: wraps `l` into `[1, g]` cyclically.
    pub fn cyc(&self, l: i64) -> u32 {
        ((l - 1).rem_euclid(self.g as i64) + 1) as u32
    }

    /// Cyclic distance between crosscap positions.
    fn cyc_dist(&self, l: u32, m: u32) -> u32 {
        let g = self.g as i64;
        let d = (l as i64 - m as i64).rem_euclid(g);
        d.min(g - d) as u32
    }
}

/// Curve families of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `alpha_l`: two-sided, through crosscaps `l, l+1` (cyclic).
    Alpha,
    /// `a_i`: two-sided, enclosing crosscaps `1..2i`.
    A,
    /// `b_i = alpha_{2i}`.
    B,
    /// `c_j = alpha_{2j+1}`.
    C,
    /// `e_k`: puncture-side companion of `a_1`.
    E,
    /// `f_i`: reflected companion of `a_i`.
    F,
    /// `gamma_j`: two-sided, through crosscaps `j..j+3` (cyclic).
    Gamma,
    /// `delta_i`: one-sided core of crosscap `i`.
    Delta,
    /// `d1_i`: derived curve (second stage of the `d`-ladder).
    D1,
    /// `d2_i`: derived curve (first stage of the `d`-ladder).
    D2,
    /// Boundary of a small subsurface; see [`CurveSymbol::boundary`].
    Boundary,
}

/// A curve name: family plus index (plus a second index for boundaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveSymbol {
    pub family: Family,
    pub i: u32,
    /// Second index; only meaningful for [`Family::Boundary`].
    pub j: u32,
}

impl CurveSymbol {
    fn new(family: Family, i: u32) -> Self {
        CurveSymbol { family, i, j: 0 }
    }
    pub fn alpha(l: u32) -> Self {
        Self::new(Family::Alpha, l)
    }
    pub fn a(i: u32) -> Self {
        Self::new(Family::A, i)
    }
    pub fn b(i: u32) -> Self {
        Self::new(Family::B, i)
    }
    pub fn c(j: u32) -> Self {
        Self::new(Family::C, j)
    }
    pub fn e(k: u32) -> Self {
        Self::new(Family::E, k)
    }
    pub fn f(i: u32) -> Self {
        Self::new(Family::F, i)
    }
    pub fn gamma(j: u32) -> Self {
        Self::new(Family::Gamma, j)
    }
    pub fn delta(i: u32) -> Self {
        Self::new(Family::Delta, i)
    }
    pub fn d1(i: u32) -> Self {
        Self::new(Family::D1, i)
    }
    pub fn d2(i: u32) -> Self {
        Self::new(Family::D2, i)
    }
    /// Boundary curves: `boundary(i, 0)` bounds a neighborhood of crosscaps
    /// `i, i+1` (a Klein bottle with one boundary component);
    /// `boundary(i, j)` with `j ≥ 1` bounds a neighborhood of crosscap `i`
    /// and puncture `j` (a Möbius band with a puncture).
    pub fn boundary(i: u32, j: u32) -> Self {
        CurveSymbol {
            family: Family::Boundary,
            i,
            j,
        }
    }
}

impl fmt::Display for CurveSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Alpha => write!(f, "alpha{}", self.i),
            Family::A => write!(f, "a{}", self.i),
            Family::B => write!(f, "b{}", self.i),
            Family::C => write!(f, "c{}", self.i),
            Family::E => write!(f, "e{}", self.i),
            Family::F => write!(f, "f{}", self.i),
            Family::Gamma => write!(f, "gamma{}", self.i),
            Family::Delta => write!(f, "delta{}", self.i),
            Family::D1 => write!(f, "d1_{}", self.i),
            Family::D2 => write!(f, "d2_{}", self.i),
            Family::Boundary => write!(f, "bd({},{})", self.i, self.j),
        }
    }
}

/// Canonical identity of a catalog curve, with aliases resolved:
/// `a_1 = alpha_1`, `b_i = alpha_{2i}`, `c_j = alpha_{2j+1}`,
/// `gamma_1 = a_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CurveId {
    Alpha(u32),
    A(u32),
    Gamma(u32),
    Delta(u32),
    E(u32),
    F(u32),
    D1(u32),
    D2(u32),
    Boundary(u32, u32),
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CurveId::Alpha(1) => write!(f, "a1"),
            CurveId::Alpha(l) => write!(f, "alpha{l}"),
            CurveId::A(i) => write!(f, "a{i}"),
            CurveId::Gamma(j) => write!(f, "gamma{j}"),
            CurveId::Delta(i) => write!(f, "delta{i}"),
            CurveId::E(k) => write!(f, "e{k}"),
            CurveId::F(i) => write!(f, "f{i}"),
            CurveId::D1(i) => write!(f, "d1_{i}"),
            CurveId::D2(i) => write!(f, "d2_{i}"),
            CurveId::Boundary(i, j) => write!(f, "bd({i},{j})"),
        }
    }
}

impl CurveId {
    /// Conventional display name, preferring the `b`/`c` aliases where they
    /// exist (used in traces and reports).
    pub fn display_name(&self, params: &SurfaceParams) -> String {
        if let CurveId::Alpha(l) = *self {
            if l == 1 {
                return "a1".into();
            }
            if l % 2 == 0 && l / 2 <= params.r {
                return format!("b{}", l / 2);
            }
            if l % 2 == 1 && l >= 3 && (l - 1) / 2 <= params.c_max() {
                return format!("c{}", (l - 1) / 2);
            }
        }
        self.to_string()
    }
}

/// Resolves a curve name to its canonical identity, validating index ranges.
pub fn resolve(params: &SurfaceParams, sym: &CurveSymbol) -> Result<CurveId, ModelError> {
    let g = params.g;
    let r = params.r;
    let p = params.p;
    let unknown = || ModelError::UnknownCurve {
        name: sym.to_string(),
    };
    let id = match sym.family {
        Family::Alpha => {
            if sym.i < 1 || sym.i > g {
                return Err(unknown());
            }
            CurveId::Alpha(sym.i)
        }
        Family::A => {
            if sym.i < 1 || sym.i > r {
                return Err(unknown());
            }
            if sym.i == 1 {
                CurveId::Alpha(1)
            } else {
                CurveId::A(sym.i)
            }
        }
        Family::B => {
            if sym.i < 1 || sym.i > r {
                return Err(unknown());
            }
            CurveId::Alpha(2 * sym.i)
        }
        Family::C => {
            if sym.i < 1 || sym.i > params.c_max() {
                return Err(unknown());
            }
            CurveId::Alpha(2 * sym.i + 1)
        }
        Family::E => {
            if p < 2 || sym.i < 1 || sym.i > p - 1 {
                return Err(unknown());
            }
            CurveId::E(sym.i)
        }
        Family::F => {
            if sym.i < 1 || sym.i > r {
                return Err(unknown());
            }
            CurveId::F(sym.i)
        }
        Family::Gamma => {
            if sym.i < 1 || sym.i > g {
                return Err(unknown());
            }
            if sym.i == 1 {
                CurveId::A(2)
            } else {
                CurveId::Gamma(sym.i)
            }
        }
        Family::Delta => {
            if sym.i < 1 || sym.i > g {
                return Err(unknown());
            }
            CurveId::Delta(sym.i)
        }
        Family::D1 => {
            if r < 3 || sym.i < 1 || sym.i > r - 2 {
                return Err(unknown());
            }
            CurveId::D1(sym.i)
        }
        Family::D2 => {
            if r < 3 || sym.i < 1 || sym.i > r - 2 {
                return Err(unknown());
            }
            CurveId::D2(sym.i)
        }
        Family::Boundary => {
            if sym.j == 0 {
                if sym.i < 1 || sym.i > g - 1 {
                    return Err(unknown());
                }
            } else if sym.i < 1 || sym.i > g || sym.j > p {
                return Err(unknown());
            }
            CurveId::Boundary(sym.i, sym.j)
        }
    };
    Ok(id)
}

/// Parses a curve name in the catalog's display syntax: a family prefix
/// followed by a decimal index (`alpha12`, `a3`, `b2`, `c1`, `e2`, `f1`,
/// `gamma5`, `delta3`, `d1_2`, `d2_5`) or a boundary `bd(i,j)`. Index ranges
/// are not checked here; pass the result through [`resolve`].
pub fn parse_symbol(text: &str) -> Result<CurveSymbol, ModelError> {
    let t = text.trim();
    let unknown = || ModelError::UnknownCurve {
        name: t.to_string(),
    };
    if let Some(rest) = t.strip_prefix("bd") {
        let inner = rest
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let (i, j) = inner.split_once(',').ok_or_else(unknown)?;
        let i: u32 = i.trim().parse().map_err(|_| unknown())?;
        let j: u32 = j.trim().parse().map_err(|_| unknown())?;
        return Ok(CurveSymbol::boundary(i, j));
    }
    type Ctor = fn(u32) -> CurveSymbol;
    const PREFIXES: [(&str, Ctor); 10] = [
        ("alpha", CurveSymbol::alpha),
        ("gamma", CurveSymbol::gamma),
        ("delta", CurveSymbol::delta),
        ("d1_", CurveSymbol::d1),
        ("d2_", CurveSymbol::d2),
        ("a", CurveSymbol::a),
        ("b", CurveSymbol::b),
        ("c", CurveSymbol::c),
        ("e", CurveSymbol::e),
        ("f", CurveSymbol::f),
    ];
    for (prefix, build) in PREFIXES {
        if let Some(digits) = t.strip_prefix(prefix) {
            if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) {
                return Ok(build(digits.parse().map_err(|_| unknown())?));
            }
        }
    }
    Err(unknown())
}

/// Homology data of a catalog curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    /// Coefficients of the curve's homology class on the reduced basis.
    pub coeffs: Vec<i64>,
    /// Transvection functional of the twist about the curve; `None` for
    /// one-sided curves, which admit no twist.
    pub phi: Option<Vec<i64>>,
    /// Sign convention for the letter naming the twist about this curve:
    /// the letter evaluates to `x -> x + eps·phi(x)·coeffs`.
    pub eps: i8,
    /// Orientation/production tag (`standard`, `reflected`,
    /// `zigzag-step-{s}`, `transported`, `separating`).
    pub tag: String,
}

impl CurveClass {
    /// Whether the curve is two-sided (i.e. admits a Dehn twist).
    pub fn two_sided(&self) -> bool {
        self.phi.is_some()
    }

    /// The class reduced mod 2 (the normative layer).
    pub fn coeffs_mod2(&self) -> Vec<u8> {
        self.coeffs.iter().map(|c| (c.rem_euclid(2)) as u8).collect()
    }

    /// Normalizes the sign ambiguity of transvection data: `(v, phi)` and
    /// `(-v, -phi)` define the same twist, so the first nonzero coefficient
    /// of `v` is made positive.
    pub fn canonicalize(&mut self) {
        if let Some(first) = self.coeffs.iter().find(|c| **c != 0) {
            if *first < 0 {
                for c in &mut self.coeffs {
                    *c = -*c;
                }
                if let Some(phi) = &mut self.phi {
                    for c in phi.iter_mut() {
                        *c = -*c;
                    }
                }
            }
        }
    }
}

/// Basis slot of `mu_k` (1-based crosscap index).
fn mu(k: u32) -> usize {
    (k - 1) as usize
}

/// Basis slot of `nu_l` for `l < p`.
fn nu(params: &SurfaceParams, l: u32) -> usize {
    (params.g + l - 1) as usize
}

/// The class of the loop around puncture `j` on the reduced basis
/// (`nu_p` is eliminated).
pub fn puncture_loop(params: &SurfaceParams, j: u32) -> Vec<i64> {
    let n = params.dim();
    let mut v = vec![0i64; n];
    if j < params.p {
        v[nu(params, j)] = 1;
    } else {
        for k in 1..=params.g {
            v[mu(k)] = -2;
        }
        for l in 1..=params.p - 1 {
            v[nu(params, l)] = -1;
        }
    }
    v
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[k] = 1;
    v
}

fn edge_data(params: &SurfaceParams, l: u32) -> (Vec<i64>, Vec<i64>) {
    let n = params.dim();
    let l2 = params.cyc(l as i64 + 1);
    let mut v = vec![0i64; n];
    let mut phi = vec![0i64; n];
    v[mu(l)] = 1;
    v[mu(l2)] = 1;
    phi[mu(l)] = 1;
    phi[mu(l2)] = -1;
    (v, phi)
}

fn prefix_data(params: &SurfaceParams, i: u32) -> (Vec<i64>, Vec<i64>) {
    let n = params.dim();
    let mut v = vec![0i64; n];
    let mut phi = vec![0i64; n];
    for k in 1..=2 * i {
        v[mu(k)] = 1;
        phi[mu(k)] = if k % 2 == 1 { 1 } else { -1 };
    }
    (v, phi)
}

fn window_data(params: &SurfaceParams, j: u32) -> (Vec<i64>, Vec<i64>) {
    let n = params.dim();
    let mut v = vec![0i64; n];
    let mut phi = vec![0i64; n];
    for t in 0..4i64 {
        let k = params.cyc(j as i64 + t);
        v[mu(k)] = 1;
        phi[mu(k)] = if t % 2 == 0 { 1 } else { -1 };
    }
    (v, phi)
}

/// Zigzag step at which `e_k` is produced, and hence its letter sign
/// `eps_k = (-1)^step`. The zigzag alternates from the outermost indices
/// inward: `e_{p-1}` at step 1, `e_1` at step 2, `e_{p-2}` at step 3,
/// `e_2` at step 4, and so on.
pub fn e_step(params: &SurfaceParams, k: u32) -> u32 {
    debug_assert!(params.p >= 2 && k >= 1 && k < params.p);
    if 2 * k < params.p {
        2 * k
    } else {
        2 * (params.p - k) - 1
    }
}

/// Homology data of the canonical curve `id`.
pub fn class_of(params: &SurfaceParams, id: CurveId) -> Result<CurveClass, ModelError> {
    let n = params.dim();
    let class = match id {
        CurveId::Alpha(l) => {
            let (v, phi) = edge_data(params, l);
            CurveClass {
                coeffs: v,
                phi: Some(phi),
                eps: 1,
                tag: "standard".into(),
            }
        }
        CurveId::A(i) => {
            let (v, phi) = prefix_data(params, i);
            CurveClass {
                coeffs: v,
                phi: Some(phi),
                eps: 1,
                tag: "standard".into(),
            }
        }
        CurveId::Gamma(j) => {
            let (v, phi) = window_data(params, j);
            CurveClass {
                coeffs: v,
                phi: Some(phi),
                eps: 1,
                tag: "standard".into(),
            }
        }
        CurveId::Delta(i) => {
            let mut v = vec![0i64; n];
            v[mu(i)] = 1;
            CurveClass {
                coeffs: v,
                phi: None,
                eps: 1,
                tag: "one-sided core".into(),
            }
        }
        CurveId::E(k) => {
            let (v, phi) = prefix_data(params, 1);
            let s = e_step(params, k);
            CurveClass {
                coeffs: v,
                phi: Some(phi),
                eps: if s.is_multiple_of(2) { 1 } else { -1 },
                tag: format!("zigzag-step-{s}"),
            }
        }
        CurveId::F(i) => {
            let (v, phi) = prefix_data(params, i);
            CurveClass {
                coeffs: v,
                phi: Some(phi),
                eps: -1,
                tag: "reflected".into(),
            }
        }
        CurveId::D2(i) => {
            let letters = d2_defining_letters(params, i)?;
            let mut c =
                derived_curve_class(params, &letters, &CurveSymbol::a(i + 1))?;
            c.tag = "transported".into();
            c
        }
        CurveId::D1(i) => {
            let letters = d1_defining_letters(params, i)?;
            let mut c = derived_curve_class(params, &letters, &CurveSymbol::d2(i))?;
            c.tag = "transported".into();
            c
        }
        CurveId::Boundary(i, 0) => {
            let mut v = vec![0i64; n];
            v[mu(i)] = 2;
            v[mu(i + 1)] = 2;
            CurveClass {
                coeffs: v,
                phi: Some(vec![0i64; n]),
                eps: 1,
                tag: "separating".into(),
            }
        }
        CurveId::Boundary(i, j) => {
            let mut v = puncture_loop(params, j);
            v[mu(i)] += 2;
            CurveClass {
                coeffs: v,
                phi: Some(vec![0i64; n]),
                eps: 1,
                tag: "separating".into(),
            }
        }
    };
    Ok(class)
}

/// Homology data of a named curve (resolving aliases first).
pub fn curve(params: &SurfaceParams, sym: &CurveSymbol) -> Result<CurveClass, ModelError> {
    class_of(params, resolve(params, sym)?)
}

/// Geometric intersection number, where the catalog knows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    /// The minimal geometric intersection number.
    Known(u32),
    /// The catalog makes no claim for this pair.
    Unknown,
}

/// Structural positions a curve occupies on the crosscap chain; used by the
/// intersection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    /// `alpha`-type: through crosscaps `l, l+1`.
    Edge(u32),
    /// `gamma`-type: through crosscaps `j..j+3`.
    Window(u32),
    /// `a`-type: enclosing crosscaps `1..2i`.
    Prefix(u32),
    /// `delta`-type: the core of crosscap `i`.
    Core(u32),
}

fn forms(id: CurveId) -> Vec<Form> {
    match id {
        CurveId::Alpha(1) => vec![Form::Edge(1), Form::Prefix(1)],
        CurveId::Alpha(l) => vec![Form::Edge(l)],
        CurveId::A(2) => vec![Form::Prefix(2), Form::Window(1)],
        CurveId::A(i) => vec![Form::Prefix(i)],
        CurveId::Gamma(j) => vec![Form::Window(j)],
        CurveId::Delta(i) => vec![Form::Core(i)],
        _ => vec![],
    }
}

/// Crosscap positions a curve passes through, where the catalog knows them
/// (used for disjointness-by-support reasoning in the action layer).
pub fn curve_support(params: &SurfaceParams, id: CurveId) -> Option<BTreeSet<u32>> {
    let fs = forms(id);
    if fs.is_empty() {
        return None;
    }
    let mut s = BTreeSet::new();
    for f in fs {
        match f {
            Form::Edge(l) => {
                s.insert(l);
                s.insert(params.cyc(l as i64 + 1));
            }
            Form::Window(j) => {
                for t in 0..4 {
                    s.insert(params.cyc(j as i64 + t));
                }
            }
            Form::Prefix(i) => {
                for k in 1..=2 * i {
                    s.insert(k);
                }
            }
            Form::Core(i) => {
                s.insert(i);
            }
        }
    }
    Some(s)
}

fn window_contains(params: &SurfaceParams, j: u32, k: u32) -> bool {
    (0..4).any(|t| params.cyc(j as i64 + t) == k)
}

fn form_pair_intersection(params: &SurfaceParams, f1: Form, f2: Form) -> Option<u32> {
    use Form::*;
    let g = params.g;
    match (f1, f2) {
        (Edge(l), Edge(m)) => Some(u32::from(params.cyc_dist(l, m) == 1)),
        (Edge(l), Window(j)) | (Window(j), Edge(l)) => {
            let hit = l == params.cyc(j as i64 - 1) || l == params.cyc(j as i64 + 3);
            Some(u32::from(hit))
        }
        (Window(j), Window(k)) => {
            let d = params.cyc_dist(j, k);
            Some(u32::from(d == 1 || d == 3))
        }
        (Edge(l), Prefix(i)) | (Prefix(i), Edge(l)) => Some(u32::from(l == 2 * i || l == g)),
        (Prefix(_), Prefix(_)) => Some(0),
        (Core(i), Edge(l)) | (Edge(l), Core(i)) => {
            Some(u32::from(i == l || i == params.cyc(l as i64 + 1)))
        }
        (Core(i), Window(j)) | (Window(j), Core(i)) => {
            Some(u32::from(window_contains(params, j, i)))
        }
        (Core(i), Prefix(a)) | (Prefix(a), Core(i)) => Some(u32::from(i <= 2 * a)),
        (Core(_), Core(_)) => Some(0),
        (Window(_), Prefix(_)) | (Prefix(_), Window(_)) => None,
    }
}

fn is_a_family(id: CurveId) -> bool {
    matches!(id, CurveId::Alpha(1) | CurveId::A(_))
}

/// Minimal geometric intersection number of two catalog curves, per the
/// conservative rule table. Pairs the table does not cover report
/// [`Intersection::Unknown`] rather than a guess.
pub fn intersection(
    params: &SurfaceParams,
    s1: &CurveSymbol,
    s2: &CurveSymbol,
) -> Result<Intersection, ModelError> {
    Ok(intersection_of(
        params,
        resolve(params, s1)?,
        resolve(params, s2)?,
    ))
}

/// [`intersection`] on already-resolved curve identities.
pub fn intersection_of(params: &SurfaceParams, id1: CurveId, id2: CurveId) -> Intersection {
    if id1 == id2 {
        // A two-sided catalog curve has an annular neighborhood, so its
        // self-intersection is 0; a one-sided core has self-intersection 1.
        let one_sided = matches!(id1, CurveId::Delta(_));
        return Intersection::Known(u32::from(one_sided));
    }
    // The a-curves bound a region disjoint from the puncture-side e-curves.
    if (is_a_family(id1) && matches!(id2, CurveId::E(_)))
        || (is_a_family(id2) && matches!(id1, CurveId::E(_)))
    {
        return Intersection::Known(0);
    }
    for f1 in forms(id1) {
        for f2 in forms(id2) {
            if let Some(v) = form_pair_intersection(params, f1, f2) {
                return Intersection::Known(v);
            }
        }
    }
    Intersection::Unknown
}

/// Generators of the mapping class group, as letters of the word algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    /// Right-handed Dehn twist about a two-sided catalog curve.
    Twist(CurveSymbol),
    /// Crosscap slide `y_i` (the letter `y` is `y_1`): slides crosscap
    /// `i+1` through crosscap `i`; equal to `Twist(alpha_i) ∘ u_i`.
    CrosscapSlide(u32),
    /// Crosscap transposition `u_i`: swaps crosscaps `i` and `i+1` inside a
    /// disk around them (`i ∈ [1, g-1]`).
    CrosscapTransposition(u32),
    /// Puncture slide `v_{i,j}`: slides puncture `j` around the core of
    /// crosscap `i` and back.
    PunctureSlide(u32, u32),
    /// Reflections `rho_1..rho_4` of the chain-of-crosscaps picture.
    Reflection(u8),
    /// The chain rotation `T = rho_2 ∘ rho_1`, moving every crosscap one
    /// step along the chain.
    ChainRotation,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Twist(sym) => match sym.family {
                Family::Alpha => write!(f, "alpha{}", sym.i),
                Family::A => write!(f, "A{}", sym.i),
                Family::B => write!(f, "B{}", sym.i),
                Family::C => write!(f, "C{}", sym.i),
                Family::E => write!(f, "E{}", sym.i),
                Family::F => write!(f, "F{}", sym.i),
                Family::Gamma => write!(f, "Gamma{}", sym.i),
                Family::D1 => write!(f, "D1{{{}}}", sym.i),
                Family::D2 => write!(f, "D2{{{}}}", sym.i),
                // No twist letter exists for the remaining families; the
                // rendering below is for traces only.
                _ => write!(f, "tw[{sym}]"),
            },
            Generator::CrosscapSlide(i) => {
                if *i == 1 {
                    write!(f, "y")
                } else {
                    write!(f, "y[{i}]")
                }
            }
            Generator::CrosscapTransposition(i) => write!(f, "u{i}"),
            Generator::PunctureSlide(i, j) => write!(f, "v{{{i},{j}}}"),
            Generator::Reflection(k) => write!(f, "rho{k}"),
            Generator::ChainRotation => write!(f, "T"),
        }
    }
}

/// Validates that a generator exists at these parameters.
pub fn validate_generator(params: &SurfaceParams, gen: &Generator) -> Result<(), ModelError> {
    let bad = || ModelError::UnknownGenerator {
        name: gen.to_string(),
    };
    match *gen {
        Generator::Twist(sym) => {
            resolve(params, &sym).map_err(|_| bad())?;
        }
        Generator::CrosscapSlide(i) | Generator::CrosscapTransposition(i) => {
            if i < 1 || i > params.g - 1 {
                return Err(bad());
            }
        }
        Generator::PunctureSlide(i, j) => {
            if i < 1 || i > params.g || j < 1 || j > params.p {
                return Err(bad());
            }
        }
        Generator::Reflection(k) => {
            if !(1..=4).contains(&k) {
                return Err(bad());
            }
        }
        Generator::ChainRotation => {}
    }
    Ok(())
}

/// Square integer matrix stored as a vector of columns.
pub type Columns = Vec<Vec<i64>>;

/// Identity matrix as columns.
pub fn identity_columns(n: usize) -> Columns {
    (0..n).map(|k| unit(n, k)).collect()
}

/// Matrix product `a·b` in column representation.
pub fn matmul_columns(a: &Columns, b: &Columns) -> Columns {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for bcol in b {
        let mut col = vec![0i64; n];
        for (k, &coef) in bcol.iter().enumerate() {
            if coef != 0 {
                for (i, &e) in a[k].iter().enumerate() {
                    col[i] += coef * e;
                }
            }
        }
        out.push(col);
    }
    out
}

fn matvec_columns(m: &Columns, x: &[i64]) -> Vec<i64> {
    let n = m.len();
    let mut out = vec![0i64; n];
    for (k, &coef) in x.iter().enumerate() {
        if coef != 0 {
            for (i, &e) in m[k].iter().enumerate() {
                out[i] += coef * e;
            }
        }
    }
    out
}

fn vecmat_columns(x: &[i64], m: &Columns) -> Vec<i64> {
    m.iter()
        .map(|col| col.iter().zip(x).map(|(&a, &b)| a * b).sum())
        .collect()
}

fn twist_columns(params: &SurfaceParams, class: &CurveClass, sign: i8) -> Columns {
    let n = params.dim();
    let phi = class.phi.as_ref().expect("twist about a two-sided curve");
    let eff = (class.eps * sign) as i64;
    let mut cols = identity_columns(n);
    for (j, col) in cols.iter_mut().enumerate() {
        let c = phi[j];
        if c != 0 {
            for (i, &vi) in class.coeffs.iter().enumerate() {
                col[i] += eff * c * vi;
            }
        }
    }
    cols
}

fn rotation_columns(params: &SurfaceParams, sign: i8) -> Columns {
    let n = params.dim();
    let g = params.g;
    let p = params.p;
    let mut cols = Vec::with_capacity(n);
    for k in 1..=g {
        let target = params.cyc(k as i64 + sign as i64);
        cols.push(unit(n, mu(target)));
    }
    for l in 1..p {
        // The rotation carries the puncture disk around once, exchanging
        // punctures 1 and 2 (for p >= 2); all loop orientations are kept.
        let target = match l {
            1 => 2,
            2 => 1,
            _ => l,
        };
        cols.push(puncture_loop(params, target));
    }
    cols
}

fn reflection_columns(params: &SurfaceParams, k: u8) -> Columns {
    let n = params.dim();
    let g = params.g;
    let p = params.p;
    match k {
        2 => matmul_columns(
            &rotation_columns(params, 1),
            &reflection_columns(params, 1),
        ),
        _ => {
            let mut cols = Vec::with_capacity(n);
            for i in 1..=g {
                let target = match k {
                    // rho_1 reverses the chain, fixing crosscap r+3.
                    1 => params.cyc(2 * params.r as i64 + 6 - i as i64),
                    // rho_3 and rho_4 are equatorial: each crosscap stays put
                    // with reversed orientation.
                    _ => i,
                };
                let mut col = vec![0i64; n];
                col[mu(target)] = -1;
                cols.push(col);
            }
            for l in 1..p {
                let target = match k {
                    1 => match l {
                        1 => 2,
                        2 => 1,
                        _ => l,
                    },
                    3 => p + 1 - l,
                    4 => p - l,
                    _ => unreachable!(),
                };
                let mut col = puncture_loop(params, target);
                for c in &mut col {
                    *c = -*c;
                }
                cols.push(col);
            }
            cols
        }
    }
}

fn transposition_columns(params: &SurfaceParams, i: u32) -> Columns {
    let n = params.dim();
    let mut cols = identity_columns(n);
    cols.swap(mu(i), mu(i + 1));
    cols
}

fn puncture_slide_columns(params: &SurfaceParams, i: u32, j: u32) -> Columns {
    let n = params.dim();
    let mut cols = identity_columns(n);
    let loop_j = puncture_loop(params, j);
    for (k, &c) in loop_j.iter().enumerate() {
        cols[mu(i)][k] += c;
    }
    if j < params.p {
        for c in &mut cols[nu(params, j)] {
            *c = -*c;
        }
    }
    cols
}

/// Exact integer column map of one generator letter (`sign = ±1` selects the
/// letter or its inverse). All conventions are concentrated here and in
/// [`class_of`]; the representation layers only change the scalar ring.
pub fn generator_columns(
    params: &SurfaceParams,
    gen: &Generator,
    sign: i8,
) -> Result<Columns, ModelError> {
    validate_generator(params, gen)?;
    let cols = match *gen {
        Generator::Twist(sym) => {
            let class = curve(params, &sym)?;
            if !class.two_sided() {
                return Err(ModelError::OneSidedCurve {
                    name: sym.to_string(),
                });
            }
            twist_columns(params, &class, sign)
        }
        Generator::ChainRotation => rotation_columns(params, sign),
        Generator::Reflection(k) => reflection_columns(params, k),
        Generator::CrosscapTransposition(i) => transposition_columns(params, i),
        Generator::PunctureSlide(i, j) => puncture_slide_columns(params, i, j),
        Generator::CrosscapSlide(i) => {
            let alpha = curve(params, &CurveSymbol::alpha(i))?;
            let u = transposition_columns(params, i);
            if sign >= 0 {
                matmul_columns(&twist_columns(params, &alpha, 1), &u)
            } else {
                matmul_columns(&u, &twist_columns(params, &alpha, -1))
            }
        }
    };
    Ok(cols)
}

/// Letters of the word `W_i` defining `d2_i := W_i(a_{i+1})`:
/// `(A_i B_{i+1}^-1)(A_i C_i^-1)(A_i C_{i+1}^-1)(A_i B_{i+1}^-1)`.
pub fn d2_defining_letters(
    params: &SurfaceParams,
    i: u32,
) -> Result<Vec<(Generator, i8)>, ModelError> {
    if params.r < 3 || i < 1 || i > params.r - 2 {
        return Err(ModelError::UnknownCurve {
            name: CurveSymbol::d2(i).to_string(),
        });
    }
    let tw = |s: CurveSymbol, e: i8| (Generator::Twist(s), e);
    Ok(vec![
        tw(CurveSymbol::a(i), 1),
        tw(CurveSymbol::b(i + 1), -1),
        tw(CurveSymbol::a(i), 1),
        tw(CurveSymbol::c(i), -1),
        tw(CurveSymbol::a(i), 1),
        tw(CurveSymbol::c(i + 1), -1),
        tw(CurveSymbol::a(i), 1),
        tw(CurveSymbol::b(i + 1), -1),
    ])
}

/// Letters of the word `W'_i` defining `d1_i := W'_i(d2_i)`:
/// `(C_{i+1} B_i^-1)(C_{i+1} A_i^-1)(C_{i+1} C_i^-1)(C_{i+1} B_i^-1)`.
pub fn d1_defining_letters(
    params: &SurfaceParams,
    i: u32,
) -> Result<Vec<(Generator, i8)>, ModelError> {
    if params.r < 3 || i < 1 || i > params.r - 2 {
        return Err(ModelError::UnknownCurve {
            name: CurveSymbol::d1(i).to_string(),
        });
    }
    let tw = |s: CurveSymbol, e: i8| (Generator::Twist(s), e);
    Ok(vec![
        tw(CurveSymbol::c(i + 1), 1),
        tw(CurveSymbol::b(i), -1),
        tw(CurveSymbol::c(i + 1), 1),
        tw(CurveSymbol::a(i), -1),
        tw(CurveSymbol::c(i + 1), 1),
        tw(CurveSymbol::c(i), -1),
        tw(CurveSymbol::c(i + 1), 1),
        tw(CurveSymbol::b(i), -1),
    ])
}

/// Transports the class data of `base` by a word of generator letters
/// (rightmost letter first): the result is the transvection data of the
/// image curve, `v' = M·v` and `phi' = phi·M^{-1}`, canonicalized. For a
/// one-sided base only the class vector is transported.
pub fn derived_curve_class(
    params: &SurfaceParams,
    letters: &[(Generator, i8)],
    base: &CurveSymbol,
) -> Result<CurveClass, ModelError> {
    let n = params.dim();
    let base_class = curve(params, base)?;
    let mut m = identity_columns(n);
    for (gen, e) in letters {
        m = matmul_columns(&m, &generator_columns(params, gen, *e)?);
    }
    let coeffs = matvec_columns(&m, &base_class.coeffs);
    let phi = match &base_class.phi {
        Some(phi) => {
            let mut minv = identity_columns(n);
            for (gen, e) in letters.iter().rev() {
                minv = matmul_columns(&minv, &generator_columns(params, gen, -*e)?);
            }
            Some(vecmat_columns(phi, &minv))
        }
        None => None,
    };
    let mut class = CurveClass {
        coeffs,
        phi,
        eps: base_class.eps,
        tag: "transported".into(),
    };
    class.canonicalize();
    if let Some(phi) = &class.phi {
        let pairing: i64 = phi
            .iter()
            .zip(&class.coeffs)
            .map(|(&a, &b)| a * b)
            .sum();
        debug_assert_eq!(pairing, 0, "transvection functional must kill its vector");
    }
    Ok(class)
}

/// All curve names valid at these parameters (aliases included).
pub fn catalog_symbols(params: &SurfaceParams) -> Vec<CurveSymbol> {
    let mut out = Vec::new();
    for l in 1..=params.g {
        out.push(CurveSymbol::alpha(l));
        out.push(CurveSymbol::gamma(l));
        out.push(CurveSymbol::delta(l));
    }
    for i in 1..=params.r {
        out.push(CurveSymbol::a(i));
        out.push(CurveSymbol::b(i));
        out.push(CurveSymbol::f(i));
    }
    for j in 1..=params.c_max() {
        out.push(CurveSymbol::c(j));
    }
    for k in 1..params.p {
        out.push(CurveSymbol::e(k));
    }
    if params.r >= 3 {
        for i in 1..=params.r - 2 {
            out.push(CurveSymbol::d1(i));
            out.push(CurveSymbol::d2(i));
        }
    }
    for i in 1..params.g {
        out.push(CurveSymbol::boundary(i, 0));
    }
    for i in 1..=params.g {
        for j in 1..=params.p {
            out.push(CurveSymbol::boundary(i, j));
        }
    }
    out
}

fn render_sparse(prefix_mu: &str, prefix_nu: &str, g: u32, v: &[i64]) -> String {
    let mut parts = Vec::new();
    for (idx, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let name = if (idx as u32) < g {
            format!("{prefix_mu}{}", idx + 1)
        } else {
            format!("{prefix_nu}{}", idx as u32 - g + 1)
        };
        let term = match c {
            1 => format!("+{name}"),
            -1 => format!("-{name}"),
            c if c > 0 => format!("+{c}{name}"),
            c => format!("{c}{name}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.concat()
    }
}

/// Canonical plain-text rendering of every convention the engine relies on:
/// basis, elimination, twist rule, concrete class data of each catalog
/// curve, the intersection rule table, and the non-twist generator maps.
/// Reports carry the SHA-256 of this text so that two runs are comparable
/// only when their conventions agree.
pub fn convention_text(params: &SurfaceParams) -> String {
    let g = params.g;
    let p = params.p;
    let r = params.r;
    let mut s = String::new();
    s.push_str(&format!(
        "homology conventions for a nonorientable surface: g={g}, p={p}, r={r}, type={}\n",
        if params.even { "even" } else { "odd" }
    ));
    s.push_str(&format!(
        "basis: mu_1..mu_{g}, nu_1..nu_{}; n = g+p-1 = {}\n",
        p.saturating_sub(1),
        params.dim()
    ));
    s.push_str("elimination: nu_p = -2*(mu_1+..+mu_g) - (nu_1+..+nu_{p-1})\n");
    s.push_str("columns: column k = image of basis vector k; rightmost letter of a word acts first\n");
    s.push_str("form: Q = diag(1 x g, 0 x (p-1)) over GF(2)\n");
    s.push_str("twist: t_{(v,phi)} x = x + eps*phi(x)*v, eps=+1 right-handed\n");
    s.push_str("curve classes (v ; phi ; eps ; tag):\n");
    for sym in catalog_symbols(params) {
        // Aliases resolve to curves already listed; print primaries only.
        if matches!(sym.family, Family::A | Family::B | Family::C) && sym.family != Family::A {
            continue;
        }
        if sym.family == Family::A && sym.i == 1 {
            continue;
        }
        if sym.family == Family::Gamma && sym.i == 1 {
            continue;
        }
        let class = class_of(params, resolve(params, &sym).expect("catalog symbol"))
            .expect("catalog class");
        let phi_txt = match &class.phi {
            Some(phi) => render_sparse("mu*", "nu*", g, phi),
            None => "-".into(),
        };
        s.push_str(&format!(
            "  {sym}: v={} ; phi={} ; eps={:+} ; {}\n",
            render_sparse("mu", "nu", g, &class.coeffs),
            phi_txt,
            class.eps,
            class.tag
        ));
    }
    s.push_str("intersection rules (first match wins; otherwise unknown):\n");
    s.push_str("  same curve: 0 if two-sided, 1 if one-sided\n");
    s.push_str("  a_i with e_k: 0\n");
    s.push_str("  alpha_l with alpha_m: 1 if cyclic distance 1, else 0\n");
    s.push_str("  alpha_l with gamma_j: 1 if l = j-1 or l = j+3 (cyclic), else 0\n");
    s.push_str("  gamma_j with gamma_k: 1 if cyclic distance 1 or 3, else 0\n");
    s.push_str("  alpha_l with a_i: 1 if l = 2i or l = g, else 0\n");
    s.push_str("  a_i with a_j: 0\n");
    s.push_str("  delta_i with alpha_l: 1 if i = l or i = l+1 (cyclic), else 0\n");
    s.push_str("  delta_i with gamma_j: 1 if i in the window j..j+3, else 0\n");
    s.push_str("  delta_i with a_j: 1 if i <= 2j, else 0\n");
    s.push_str("  delta_i with delta_j: 0\n");
    s.push_str("generator maps on homology:\n");
    s.push_str("  T: mu_k -> mu_{k+1 (cyclic)}; punctures: (1 2), loop signs +\n");
    s.push_str(&format!(
        "  rho1: mu_k -> -mu_{{pi(k)}}, pi(k) = ((2r+5-k) mod g)+1 (fixes crosscap {}); punctures: (1 2), loop signs -\n",
        r + 3
    ));
    s.push_str("  rho2 = T o rho1\n");
    s.push_str("  rho3: mu_k -> -mu_k; punctures: l -> p+1-l, loop signs -\n");
    s.push_str("  rho4: mu_k -> -mu_k; punctures: l -> p-l (0 -> p), loop signs -\n");
    s.push_str("  u_i: mu_i <-> mu_{i+1}\n");
    s.push_str("  v_{i,j}: mu_i -> mu_i + nu_j, nu_j -> -nu_j\n");
    s.push_str("  y_i = Twist(alpha_i) o u_i\n");
    s.push_str(
        "e-letter signs: eps_k = (-1)^step, zigzag order e_{p-1}, e_1, e_{p-2}, e_2, ..\n",
    );
    s
}

/// SHA-256 (hex) of [`convention_text`].
pub fn convention_hash(params: &SurfaceParams) -> String {
    let mut h = Sha256::new();
    h.update(convention_text(params).as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: i64, p: i64) -> SurfaceParams {
        SurfaceParams::build(g, p).unwrap()
    }

    #[test]
    fn symbol_parsing_round_trips_the_catalog() {
        let s = params(15, 3);
        for sym in catalog_symbols(&s) {
            let back = parse_symbol(&sym.to_string()).unwrap();
            assert_eq!(back, sym, "round trip of {sym}");
        }
        assert_eq!(parse_symbol("alpha12").unwrap(), CurveSymbol::alpha(12));
        assert_eq!(parse_symbol(" b2 ").unwrap(), CurveSymbol::b(2));
        assert_eq!(parse_symbol("d2_5").unwrap(), CurveSymbol::d2(5));
        assert_eq!(parse_symbol("bd(3, 1)").unwrap(), CurveSymbol::boundary(3, 1));
        for bad in ["", "q7", "alpha", "a-1", "d3_1", "bd(3)", "b2x"] {
            assert!(parse_symbol(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn build_validates_ranges() {
        let s = params(15, 2);
        assert_eq!((s.g, s.p, s.r, s.even), (15, 2, 7, false));
        let s = params(14, 1);
        assert_eq!((s.g, s.p, s.r, s.even), (14, 1, 6, true));
        let s = params(16, 3);
        assert_eq!((s.g, s.p, s.r, s.even), (16, 3, 7, true));
        assert!(matches!(
            SurfaceParams::build(13, 1),
            Err(ModelError::OutOfRange { .. })
        ));
        assert!(matches!(
            SurfaceParams::build(15, 0),
            Err(ModelError::OutOfRange { .. })
        ));
    }

    #[test]
    fn alpha_class_is_an_edge_transvection() {
        let s = params(15, 2);
        let c = curve(&s, &CurveSymbol::alpha(3)).unwrap();
        let mut v = vec![0i64; 16];
        v[2] = 1;
        v[3] = 1;
        let mut phi = vec![0i64; 16];
        phi[2] = 1;
        phi[3] = -1;
        assert_eq!(c.coeffs, v);
        assert_eq!(c.phi, Some(phi));
        assert_eq!(c.eps, 1);
        assert!(c.two_sided());
    }

    #[test]
    fn alpha_g_wraps_around_the_chain() {
        let s = params(15, 1);
        let c = curve(&s, &CurveSymbol::alpha(15)).unwrap();
        let mut v = vec![0i64; 15];
        v[14] = 1;
        v[0] = 1;
        assert_eq!(c.coeffs, v);
        let phi = c.phi.unwrap();
        assert_eq!(phi[14], 1);
        assert_eq!(phi[0], -1);
    }

    #[test]
    fn c_max_depends_on_parity() {
        let odd = params(15, 2);
        assert!(matches!(
            resolve(&odd, &CurveSymbol::c(7)),
            Err(ModelError::UnknownCurve { .. })
        ));
        assert!(resolve(&odd, &CurveSymbol::c(6)).is_ok());
        let even = params(16, 2);
        assert_eq!(
            resolve(&even, &CurveSymbol::c(7)).unwrap(),
            CurveId::Alpha(15)
        );
    }

    #[test]
    fn delta_is_one_sided() {
        let s = params(14, 1);
        let c = curve(&s, &CurveSymbol::delta(5)).unwrap();
        let mut v = vec![0i64; 14];
        v[4] = 1;
        assert_eq!(c.coeffs, v);
        assert!(!c.two_sided());
    }

    #[test]
    fn aliases_share_identities() {
        let s = params(15, 2);
        assert_eq!(
            resolve(&s, &CurveSymbol::a(1)).unwrap(),
            resolve(&s, &CurveSymbol::alpha(1)).unwrap()
        );
        assert_eq!(
            resolve(&s, &CurveSymbol::b(3)).unwrap(),
            resolve(&s, &CurveSymbol::alpha(6)).unwrap()
        );
        assert_eq!(
            resolve(&s, &CurveSymbol::c(2)).unwrap(),
            resolve(&s, &CurveSymbol::alpha(5)).unwrap()
        );
        assert_eq!(
            resolve(&s, &CurveSymbol::gamma(1)).unwrap(),
            resolve(&s, &CurveSymbol::a(2)).unwrap()
        );
        // The shared identity carries identical class data.
        assert_eq!(
            curve(&s, &CurveSymbol::gamma(1)).unwrap(),
            curve(&s, &CurveSymbol::a(2)).unwrap()
        );
    }

    #[test]
    fn intersection_table_examples() {
        let s = params(15, 2);
        let i = |c1: CurveSymbol, c2: CurveSymbol| intersection(&s, &c1, &c2).unwrap();
        use CurveSymbol as C;
        assert_eq!(i(C::a(1), C::e(1)), Intersection::Known(0));
        assert_eq!(i(C::b(1), C::c(1)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::gamma(5)), Intersection::Known(0));
        assert_eq!(i(C::delta(2), C::delta(2)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::gamma(7)), Intersection::Known(0));
        assert_eq!(i(C::gamma(5), C::gamma(6)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::gamma(8)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::alpha(4)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::alpha(8)), Intersection::Known(1));
        assert_eq!(i(C::gamma(5), C::alpha(9)), Intersection::Known(0));
        assert_eq!(i(C::alpha(12), C::alpha(13)), Intersection::Known(1));
        assert_eq!(i(C::a(2), C::alpha(4)), Intersection::Known(1));
        assert_eq!(i(C::a(2), C::alpha(15)), Intersection::Known(1));
        assert_eq!(i(C::a(2), C::alpha(6)), Intersection::Known(0));
        assert_eq!(i(C::a(3), C::a(2)), Intersection::Known(0));
        assert_eq!(i(C::delta(3), C::a(2)), Intersection::Known(1));
        assert_eq!(i(C::delta(5), C::a(2)), Intersection::Known(0));
        assert_eq!(i(C::e(1), C::gamma(5)), Intersection::Unknown);
    }

    #[test]
    fn intersection_is_symmetric_on_the_catalog() {
        let s = params(15, 2);
        let syms = catalog_symbols(&s);
        for c1 in &syms {
            for c2 in &syms {
                assert_eq!(
                    intersection(&s, c1, c2).unwrap(),
                    intersection(&s, c2, c1).unwrap(),
                    "asymmetric intersection for {c1}, {c2}"
                );
            }
        }
    }

    #[test]
    fn e_letter_signs_follow_the_zigzag() {
        let s = params(15, 2);
        assert_eq!(curve(&s, &CurveSymbol::e(1)).unwrap().eps, -1);
        let s6 = params(15, 6);
        let eps: Vec<i8> = (1..=5)
            .map(|k| curve(&s6, &CurveSymbol::e(k)).unwrap().eps)
            .collect();
        assert_eq!(eps, vec![1, 1, -1, -1, -1]);
        // e-classes all equal the a1 class.
        let a1 = curve(&s6, &CurveSymbol::a(1)).unwrap();
        for k in 1..=5 {
            let e = curve(&s6, &CurveSymbol::e(k)).unwrap();
            assert_eq!(e.coeffs, a1.coeffs);
            assert_eq!(e.phi, a1.phi);
        }
    }

    #[test]
    fn f_letters_are_reflected_a_twists() {
        let s = params(15, 2);
        let a2 = curve(&s, &CurveSymbol::a(2)).unwrap();
        let f2 = curve(&s, &CurveSymbol::f(2)).unwrap();
        assert_eq!(f2.coeffs, a2.coeffs);
        assert_eq!(f2.phi, a2.phi);
        assert_eq!(f2.eps, -1);
        assert_eq!(f2.tag, "reflected");
    }

    #[test]
    fn d_ladder_classes_mod_two() {
        let s = params(15, 2);
        let m2 = |sym: CurveSymbol| curve(&s, &sym).unwrap().coeffs_mod2();
        let sum2 = |a: Vec<u8>, b: Vec<u8>| -> Vec<u8> {
            a.iter().zip(&b).map(|(x, y)| (x + y) % 2).collect()
        };
        assert_eq!(
            m2(CurveSymbol::d2(1)),
            sum2(m2(CurveSymbol::a(1)), m2(CurveSymbol::c(2)))
        );
        assert_eq!(
            m2(CurveSymbol::d1(1)),
            sum2(m2(CurveSymbol::c(1)), m2(CurveSymbol::c(2)))
        );
        for i in 1..=s.r - 2 {
            assert_eq!(
                m2(CurveSymbol::d2(i)),
                sum2(m2(CurveSymbol::a(i)), m2(CurveSymbol::c(i + 1)))
            );
            assert_eq!(
                m2(CurveSymbol::d1(i)),
                sum2(m2(CurveSymbol::c(i)), m2(CurveSymbol::c(i + 1)))
            );
        }
    }

    #[test]
    fn derived_class_of_the_empty_word_is_the_base() {
        let s = params(15, 2);
        let derived = derived_curve_class(&s, &[], &CurveSymbol::a(1)).unwrap();
        let base = curve(&s, &CurveSymbol::a(1)).unwrap();
        assert_eq!(derived.coeffs, base.coeffs);
        assert_eq!(derived.phi, base.phi);
    }

    #[test]
    fn rotation_transports_windows() {
        let s = params(15, 2);
        let letters = vec![
            (Generator::ChainRotation, 1i8),
            (Generator::ChainRotation, 1),
        ];
        let derived = derived_curve_class(&s, &letters, &CurveSymbol::gamma(5)).unwrap();
        let mut target = curve(&s, &CurveSymbol::gamma(7)).unwrap();
        target.canonicalize();
        assert_eq!(derived.coeffs, target.coeffs);
        assert_eq!(derived.phi, target.phi);
    }

    #[test]
    fn rotation_transports_every_catalog_family() {
        for (g, p) in [(15, 2), (14, 1), (16, 3)] {
            let s = params(g, p);
            let t = vec![(Generator::ChainRotation, 1i8)];
            for l in 1..=s.g {
                let derived = derived_curve_class(&s, &t, &CurveSymbol::alpha(l)).unwrap();
                let mut target = curve(&s, &CurveSymbol::alpha(s.cyc(l as i64 + 1))).unwrap();
                target.canonicalize();
                assert_eq!(derived.coeffs, target.coeffs, "alpha{l} at ({g},{p})");
                assert_eq!(derived.phi, target.phi, "alpha{l} at ({g},{p})");
                let derived = derived_curve_class(&s, &t, &CurveSymbol::gamma(l)).unwrap();
                let mut target = curve(&s, &CurveSymbol::gamma(s.cyc(l as i64 + 1))).unwrap();
                target.canonicalize();
                assert_eq!(derived.coeffs, target.coeffs, "gamma{l} at ({g},{p})");
                assert_eq!(derived.phi, target.phi, "gamma{l} at ({g},{p})");
                let derived = derived_curve_class(&s, &t, &CurveSymbol::delta(l)).unwrap();
                let target = curve(&s, &CurveSymbol::delta(s.cyc(l as i64 + 1))).unwrap();
                assert_eq!(derived.coeffs, target.coeffs, "delta{l} at ({g},{p})");
            }
        }
    }

    #[test]
    fn reflections_match_their_axioms_on_classes() {
        // rho4 carries a_i to f_i and rho3 carries a_1 to f_1: on homology
        // the classes must agree up to sign.
        let s = params(15, 2);
        for i in 1..=s.r {
            let derived =
                derived_curve_class(&s, &[(Generator::Reflection(4), 1)], &CurveSymbol::a(i))
                    .unwrap();
            let mut target = curve(&s, &CurveSymbol::f(i)).unwrap();
            target.canonicalize();
            assert_eq!(derived.coeffs, target.coeffs, "a{i}");
            assert_eq!(derived.phi, target.phi, "a{i}");
        }
        let derived =
            derived_curve_class(&s, &[(Generator::Reflection(3), 1)], &CurveSymbol::a(1))
                .unwrap();
        let mut target = curve(&s, &CurveSymbol::f(1)).unwrap();
        target.canonicalize();
        assert_eq!(derived.coeffs, target.coeffs);
        assert_eq!(derived.phi, target.phi);
    }

    #[test]
    fn rho1_fixes_its_axis_crosscap() {
        let s = params(15, 2);
        let cols = generator_columns(&s, &Generator::Reflection(1), 1).unwrap();
        let axis = s.r + 3;
        let mut expected = vec![0i64; s.dim()];
        expected[(axis - 1) as usize] = -1;
        assert_eq!(cols[(axis - 1) as usize], expected);
    }

    #[test]
    fn boundary_classes_are_separating() {
        let s = params(15, 2);
        let k = curve(&s, &CurveSymbol::boundary(1, 0)).unwrap();
        assert_eq!(&k.coeffs[..3], &[2, 2, 0]);
        assert!(k.phi.unwrap().iter().all(|&c| c == 0));
        let m = curve(&s, &CurveSymbol::boundary(3, 2)).unwrap();
        assert_eq!(m.coeffs[2], 0); // nu_2 = nu_p eliminated: -2 everywhere on mu except +2 on mu_3
        let mut expect = puncture_loop(&s, 2);
        expect[2] += 2;
        assert_eq!(m.coeffs, expect);
    }

    #[test]
    fn generator_ranges_are_validated() {
        let s = params(15, 2);
        assert!(validate_generator(&s, &Generator::CrosscapTransposition(14)).is_ok());
        assert!(matches!(
            validate_generator(&s, &Generator::CrosscapTransposition(15)),
            Err(ModelError::UnknownGenerator { .. })
        ));
        assert!(validate_generator(&s, &Generator::PunctureSlide(15, 2)).is_ok());
        assert!(matches!(
            validate_generator(&s, &Generator::PunctureSlide(15, 3)),
            Err(ModelError::UnknownGenerator { .. })
        ));
        assert!(matches!(
            validate_generator(&s, &Generator::Reflection(5)),
            Err(ModelError::UnknownGenerator { .. })
        ));
    }

    #[test]
    fn one_sided_twists_are_rejected() {
        let s = params(15, 2);
        assert!(matches!(
            generator_columns(&s, &Generator::Twist(CurveSymbol::delta(3)), 1),
            Err(ModelError::OneSidedCurve { .. })
        ));
    }

    #[test]
    fn twist_letters_invert_by_sign_flip() {
        let s = params(15, 2);
        let n = s.dim();
        for sym in [CurveSymbol::a(2), CurveSymbol::e(1), CurveSymbol::gamma(4)] {
            let fwd = generator_columns(&s, &Generator::Twist(sym), 1).unwrap();
            let bwd = generator_columns(&s, &Generator::Twist(sym), -1).unwrap();
            assert_eq!(matmul_columns(&fwd, &bwd), identity_columns(n), "{sym}");
        }
    }

    #[test]
    fn non_twist_letters_invert_constructively() {
        let s = params(15, 2);
        let n = s.dim();
        let gens = [
            Generator::ChainRotation,
            Generator::Reflection(1),
            Generator::Reflection(2),
            Generator::Reflection(3),
            Generator::Reflection(4),
            Generator::CrosscapTransposition(3),
            Generator::PunctureSlide(4, 1),
            Generator::PunctureSlide(4, 2),
            Generator::CrosscapSlide(1),
        ];
        for gen in gens {
            let fwd = generator_columns(&s, &gen, 1).unwrap();
            let bwd = generator_columns(&s, &gen, -1).unwrap();
            assert_eq!(matmul_columns(&fwd, &bwd), identity_columns(n), "{gen}");
            assert_eq!(matmul_columns(&bwd, &fwd), identity_columns(n), "{gen}");
        }
    }

    #[test]
    fn catalog_parity_invariant() {
        // c_r exists exactly when the genus is even.
        let odd = params(15, 2);
        assert!(resolve(&odd, &CurveSymbol::c(odd.r)).is_err());
        let even = params(16, 2);
        assert!(resolve(&even, &CurveSymbol::c(even.r)).is_ok());
    }

    #[test]
    fn catalog_classes_all_resolve() {
        for (g, p) in [(15, 2), (14, 1), (16, 3), (17, 2)] {
            let s = params(g, p);
            for sym in catalog_symbols(&s) {
                let class = curve(&s, &sym).unwrap();
                assert_eq!(class.coeffs.len(), s.dim());
                if let Some(phi) = &class.phi {
                    let pairing: i64 =
                        phi.iter().zip(&class.coeffs).map(|(&a, &b)| a * b).sum();
                    assert_eq!(pairing, 0, "phi(v) != 0 for {sym} at ({g},{p})");
                }
            }
        }
    }

    #[test]
    fn convention_hash_is_stable_and_parameter_sensitive() {
        let a = convention_hash(&params(15, 2));
        let b = convention_hash(&params(15, 2));
        let c = convention_hash(&params(14, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }
}
