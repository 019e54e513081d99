//! Ledger execution: parsing claim files, expanding index families, checking
//! every claim in the requested layers, and assembling a deterministic report.
//!
//! A *ledger* is a line-oriented list of claims about the mapping class
//! group. Each non-comment line is either a definition
//!
//! ```text
//! def G1 = Gamma5 B1 u{r+5}
//! ```
//!
//! or an entry of six `|`-separated fields
//!
//! ```text
//! id | layers | lhs | rhs | annotations | anchor
//! ```
//!
//! * `id` — unique name; when a `for:` annotation is present it must mention
//!   the loop variable in braces (`LN.{i}`), which expansion substitutes.
//! * `layers` — comma list drawn from `action`, `homZ`, `homF2`, `perm`.
//!   A layer missing here is *curated out* for that entry (for instance an
//!   identity that only holds in the quotient seen by a given layer); running
//!   a ledger checks each entry in the intersection of its layers and the
//!   requested ones.
//! * `lhs`, `rhs` — word expressions. Alternatively `rhs` may be a curve
//!   tuple claim `(c1, c2) -> (d1, d2)`, read as: the word `lhs` sends each
//!   listed curve to its partner.
//! * `annotations` — `;`-separated `for: i=LO..HI`, `when: COND`, and
//!   `sign: e1,e2,...` clauses. Bounds are integer expressions in `r`, `g`,
//!   `p` and constants; conditions are `even`, `odd`, or comparisons such as
//!   `p!=2`; a sign plan flips the exponents of the rhs twist letters in the
//!   integer layer only (the mod-2 layer determines a twist only up to sign).
//! * `anchor` — a short prose statement of the claim being checked.
//!
//! Every verdict is [`Verdict::Pass`], [`Verdict::Fail`], or — in the
//! symbolic action layer only — [`Verdict::Undecided`]. Whenever the action
//! layer claims a pass, the runner cross-checks the claim against the mod-2
//! homology representation and downgrades the row to a failure on
//! disagreement, so the partial symbolic calculus can never out-claim the
//! normative layer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::groupcheck::{same_subgroup, schreier_sims_seeded, BitMat, GroupError};
use crate::homrep::{check_identity, eval_f2, F2};
use crate::model::{
    class_of, parse_symbol, resolve, CurveId, ModelError, SurfaceParams,
};
use crate::permrep::{generates_sym, perm, PermError};
use crate::words::{parse_with, valid_def_name, Bindings, Defs, Word};
use crate::{action, Verdict};

/// The ledger shipped with the engine: every identity used by the
/// five-element and six-involution generation proofs.
pub const DEFAULT_LEDGER: &str = include_str!("../data/default.ledger");

/// Checking layers, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Layer {
    /// Symbolic curve-action calculus (partial; may stay undecided).
    Action,
    /// Exact integer homology (annotated layer).
    HomZ,
    /// Mod-2 homology (normative layer).
    HomF2,
    /// Induced permutation of the punctures.
    Perm,
}

impl Layer {
    pub const ALL: [Layer; 4] = [Layer::Action, Layer::HomZ, Layer::HomF2, Layer::Perm];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Action => "action",
            Layer::HomZ => "homZ",
            Layer::HomF2 => "homF2",
            Layer::Perm => "perm",
        }
    }

    /// Parses a layer name (case-insensitive).
    pub fn parse(s: &str) -> Option<Layer> {
        match s.trim().to_ascii_lowercase().as_str() {
            "action" => Some(Layer::Action),
            "homz" => Some(Layer::HomZ),
            "homf2" => Some(Layer::HomF2),
            "perm" => Some(Layer::Perm),
            _ => None,
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors from ledger parsing or group comparison.
#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("ledger line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A single expanded (concrete) claim.
#[derive(Debug, Clone)]
pub struct Entry {
    pub id: String,
    pub layers: Vec<Layer>,
    pub claim: Claim,
    /// Integer-layer sign plan for the rhs twist letters, if annotated.
    pub sign_plan: Option<Vec<i8>>,
    pub anchor: String,
}

/// The two claim shapes a ledger entry can make.
#[derive(Debug, Clone)]
pub enum Claim {
    /// The two words are equal in the mapping class group.
    WordEq { lhs: Word, rhs: Word },
    /// The word maps each input curve to the claimed output curve.
    Tuple { word: Word, pairs: Vec<(CurveId, CurveId)> },
}

/// A parsed and fully expanded ledger.
#[derive(Debug, Clone)]
pub struct Ledger {
    /// Named subwords introduced by `def` lines, usable in entry words and
    /// by callers parsing user-supplied expressions.
    pub defs: Defs,
    pub entries: Vec<Entry>,
}

/// Parses and expands the built-in ledger at the given parameters.
pub fn default_ledger(params: &SurfaceParams) -> Result<Ledger, VerifyError> {
    parse_ledger(params, DEFAULT_LEDGER)
}

/// Parses and expands a ledger: resolves `def` lines, evaluates `for:` and
/// `when:` annotations, substitutes loop variables, and validates every word
/// and curve name at the given parameters.
pub fn parse_ledger(params: &SurfaceParams, text: &str) -> Result<Ledger, VerifyError> {
    let mut defs = Defs::new();
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen_ids: BTreeSet<String> = BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| VerifyError::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("def ") {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| err("definition needs 'def NAME = WORD'".into()))?;
            let name = name.trim();
            if !valid_def_name(name) {
                return Err(err(format!("invalid definition name '{name}'")));
            }
            if defs.contains_key(name) {
                return Err(err(format!("duplicate definition '{name}'")));
            }
            let word = parse_with(params, body.trim(), &defs, &Bindings::new())
                .map_err(|e| err(format!("in definition '{name}': {e}")))?;
            defs.insert(name.to_string(), word);
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(err(format!(
                "expected 6 '|'-separated fields, found {}",
                fields.len()
            )));
        }
        let (id_tpl, layers_f, lhs_f, rhs_f, annos_f, anchor) =
            (fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]);
        if anchor.is_empty() {
            return Err(err(format!("entry '{id_tpl}' is missing its anchor text")));
        }
        let mut layers = Vec::new();
        for part in layers_f.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let layer =
                Layer::parse(part).ok_or_else(|| err(format!("unknown layer '{part}'")))?;
            if layers.contains(&layer) {
                return Err(err(format!("duplicate layer '{part}'")));
            }
            layers.push(layer);
        }
        if layers.is_empty() {
            return Err(err(format!("entry '{id_tpl}' lists no layers")));
        }
        layers.sort();
        let annos = parse_annotations(annos_f).map_err(&err)?;
        let binding_sets: Vec<Bindings> = match &annos.for_ {
            None => vec![Bindings::new()],
            Some((var, lo_expr, hi_expr)) => {
                if !id_tpl.contains('{') {
                    return Err(err(format!(
                        "entry '{id_tpl}' has a 'for:' loop but its id never \
                         references the loop variable"
                    )));
                }
                let empty = Bindings::new();
                let lo = eval_index_expr(params, &empty, lo_expr).map_err(&err)?;
                let hi = eval_index_expr(params, &empty, hi_expr).map_err(&err)?;
                (lo..=hi)
                    .map(|v| {
                        let mut b = Bindings::new();
                        b.insert(var.clone(), v);
                        b
                    })
                    .collect()
            }
        };
        for bindings in binding_sets {
            if let Some(cond) = &annos.when {
                if !eval_condition(params, &bindings, cond).map_err(&err)? {
                    continue;
                }
            }
            let id = interpolate(params, &bindings, id_tpl).map_err(&err)?;
            if !seen_ids.insert(id.clone()) {
                return Err(err(format!("duplicate entry id '{id}'")));
            }
            let claim = if rhs_f.contains("->") {
                let word = parse_with(params, lhs_f, &defs, &bindings)
                    .map_err(|e| err(format!("in '{id}' word: {e}")))?;
                let (ins, outs) = rhs_f
                    .split_once("->")
                    .expect("checked for the arrow above");
                let ins = parse_tuple_side(params, &bindings, ins)
                    .map_err(|m| err(format!("in '{id}' inputs: {m}")))?;
                let outs = parse_tuple_side(params, &bindings, outs)
                    .map_err(|m| err(format!("in '{id}' outputs: {m}")))?;
                if ins.len() != outs.len() || ins.is_empty() {
                    return Err(err(format!(
                        "in '{id}': tuple sides must pair up non-empty"
                    )));
                }
                Claim::Tuple {
                    word,
                    pairs: ins.into_iter().zip(outs).collect(),
                }
            } else {
                let lhs = parse_with(params, lhs_f, &defs, &bindings)
                    .map_err(|e| err(format!("in '{id}' lhs: {e}")))?;
                let rhs = parse_with(params, rhs_f, &defs, &bindings)
                    .map_err(|e| err(format!("in '{id}' rhs: {e}")))?;
                Claim::WordEq { lhs, rhs }
            };
            entries.push(Entry {
                id,
                layers: layers.clone(),
                claim,
                sign_plan: annos.sign.clone(),
                anchor: anchor.to_string(),
            });
        }
    }
    Ok(Ledger { defs, entries })
}

#[derive(Default)]
struct Annotations {
    for_: Option<(String, String, String)>,
    when: Option<String>,
    sign: Option<Vec<i8>>,
}

fn parse_annotations(field: &str) -> Result<Annotations, String> {
    let mut out = Annotations::default();
    for part in field.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once(':')
            .ok_or_else(|| format!("annotation '{part}' needs 'key: value'"))?;
        let value = value.trim();
        match key.trim() {
            "for" => {
                if out.for_.is_some() {
                    return Err("only one 'for:' loop is supported".into());
                }
                let (var, range) = value
                    .split_once('=')
                    .ok_or_else(|| format!("'for: {value}' needs 'VAR=LO..HI'"))?;
                let var = var.trim();
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_lowercase()) {
                    return Err(format!("bad loop variable '{var}'"));
                }
                if matches!(var, "r" | "g" | "p") {
                    return Err(format!("loop variable '{var}' shadows a parameter"));
                }
                let (lo, hi) = range
                    .split_once("..")
                    .ok_or_else(|| format!("'for: {value}' needs 'VAR=LO..HI'"))?;
                out.for_ = Some((var.into(), lo.trim().into(), hi.trim().into()));
            }
            "when" => {
                if out.when.is_some() {
                    return Err("only one 'when:' condition is supported".into());
                }
                out.when = Some(value.into());
            }
            "sign" => {
                let plan: Result<Vec<i8>, _> = value
                    .split(',')
                    .map(|t| t.trim().parse::<i8>())
                    .collect();
                let plan = plan.map_err(|_| format!("bad sign plan '{value}'"))?;
                if !plan.iter().all(|&s| s == 1 || s == -1) {
                    return Err("sign plans may only contain 1 and -1".into());
                }
                out.sign = Some(plan);
            }
            other => return Err(format!("unknown annotation '{other}'")),
        }
    }
    Ok(out)
}

/// Evaluates a `when:` condition: `even`, `odd`, or `EXPR OP EXPR` with
/// `OP` one of `==`, `!=`, `>=`, `<=`, `>`, `<` and both sides index
/// expressions over `r`, `g`, `p`, constants, and the loop variable.
fn eval_condition(
    params: &SurfaceParams,
    bindings: &Bindings,
    cond: &str,
) -> Result<bool, String> {
    let c = cond.trim();
    match c {
        "even" => return Ok(params.even),
        "odd" => return Ok(!params.even),
        _ => {}
    }
    for op in ["==", "!=", ">=", "<=", ">", "<"] {
        if let Some((a, b)) = c.split_once(op) {
            let lhs = eval_index_expr(params, bindings, a)?;
            let rhs = eval_index_expr(params, bindings, b)?;
            return Ok(match op {
                "==" => lhs == rhs,
                "!=" => lhs != rhs,
                ">=" => lhs >= rhs,
                "<=" => lhs <= rhs,
                ">" => lhs > rhs,
                _ => lhs < rhs,
            });
        }
    }
    Err(format!("cannot parse condition '{c}'"))
}

/// Evaluates a sum of signed terms, each an integer literal, `r`, `g`, `p`,
/// or a bound loop variable.
fn eval_index_expr(
    params: &SurfaceParams,
    bindings: &Bindings,
    expr: &str,
) -> Result<i64, String> {
    let bytes = expr.as_bytes();
    let mut pos = 0usize;
    let mut total = 0i64;
    let mut sign = 1i64;
    let mut expecting_term = true;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
        } else if c == b'+' || c == b'-' {
            if !expecting_term {
                sign = 1;
                expecting_term = true;
            }
            if c == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if c.is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let n: i64 = expr[start..pos]
                .parse()
                .map_err(|_| format!("integer too large in '{expr}'"))?;
            total += sign * n;
            sign = 1;
            expecting_term = false;
        } else if c.is_ascii_alphabetic() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_alphanumeric() {
                pos += 1;
            }
            let name = &expr[start..pos];
            let v = if let Some(v) = bindings.get(name) {
                *v
            } else {
                match name {
                    "r" => params.r as i64,
                    "g" => params.g as i64,
                    "p" => params.p as i64,
                    _ => return Err(format!("unknown variable '{name}' in '{expr}'")),
                }
            };
            total += sign * v;
            sign = 1;
            expecting_term = false;
        } else {
            return Err(format!("unexpected character in index expression '{expr}'"));
        }
    }
    if expecting_term {
        return Err(format!("empty or dangling index expression '{expr}'"));
    }
    Ok(total)
}

/// Replaces every `{EXPR}` in `tpl` with the evaluated integer.
fn interpolate(
    params: &SurfaceParams,
    bindings: &Bindings,
    tpl: &str,
) -> Result<String, String> {
    let mut out = String::with_capacity(tpl.len());
    let mut rest = tpl;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| format!("unbalanced braces in '{tpl}'"))?;
        let val = eval_index_expr(params, bindings, &after[..close])?;
        out.push_str(&val.to_string());
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn parse_tuple_side(
    params: &SurfaceParams,
    bindings: &Bindings,
    text: &str,
) -> Result<Vec<CurveId>, String> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or("tuple sides need surrounding parentheses")?;
    inner
        .split(',')
        .map(|name| {
            let concrete = interpolate(params, bindings, name.trim())?;
            let sym = parse_symbol(&concrete).map_err(|e| e.to_string())?;
            resolve(params, &sym).map_err(|e| e.to_string())
        })
        .collect()
}

/// Result rows for one entry: verdict per layer actually run, plus notes
/// explaining every non-pass and any soundness cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub anchor: String,
    /// Layer name → verdict, for the layers that were requested and
    /// applicable to this entry.
    pub layers: BTreeMap<&'static str, Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EntryReport {
    /// The entry's aggregate verdict: the worst of its layer verdicts.
    pub fn worst(&self) -> Verdict {
        let mut worst = Verdict::Pass;
        for v in self.layers.values() {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Undecided => worst = Verdict::Undecided,
                Verdict::Pass => {}
            }
        }
        worst
    }
}

/// Checks one entry in the intersection of its layers and `requested`.
/// Returns `None` when the intersection is empty (the entry is skipped).
pub fn check_entry(
    params: &SurfaceParams,
    entry: &Entry,
    requested: &[Layer],
) -> Option<EntryReport> {
    let run: Vec<Layer> = Layer::ALL
        .into_iter()
        .filter(|l| entry.layers.contains(l) && requested.contains(l))
        .collect();
    if run.is_empty() {
        return None;
    }
    let mut layers = BTreeMap::new();
    let mut notes = Vec::new();
    for layer in run {
        let (verdict, note) = check_layer(params, entry, layer);
        layers.insert(layer.name(), verdict);
        if let Some(n) = note {
            notes.push(format!("{layer}: {n}"));
        }
    }
    Some(EntryReport {
        id: entry.id.clone(),
        anchor: entry.anchor.clone(),
        layers,
        notes,
    })
}

fn check_layer(
    params: &SurfaceParams,
    entry: &Entry,
    layer: Layer,
) -> (Verdict, Option<String>) {
    match (&entry.claim, layer) {
        (Claim::WordEq { lhs, rhs }, Layer::Action) => {
            let (v, witness) = action::word_check(params, lhs, rhs);
            match v {
                Verdict::Pass => match f2_words_agree(params, lhs, rhs) {
                    Ok(true) => (Verdict::Pass, None),
                    Ok(false) => (
                        Verdict::Fail,
                        Some(format!(
                            "symbolic pass contradicts the mod-2 representation ({witness})"
                        )),
                    ),
                    Err(e) => (Verdict::Fail, Some(e.to_string())),
                },
                other => (other, Some(witness)),
            }
        }
        (Claim::WordEq { lhs, rhs }, Layer::HomZ) => {
            match check_identity::<BigInt>(params, lhs, rhs, entry.sign_plan.as_deref()) {
                Ok(Verdict::Pass) => (Verdict::Pass, None),
                Ok(_) => (Verdict::Fail, Some("integer matrices differ".into())),
                Err(e) => (Verdict::Fail, Some(e.to_string())),
            }
        }
        (Claim::WordEq { lhs, rhs }, Layer::HomF2) => {
            match check_identity::<F2>(params, lhs, rhs, None) {
                Ok(Verdict::Pass) => (Verdict::Pass, None),
                Ok(_) => (Verdict::Fail, Some("mod-2 matrices differ".into())),
                Err(e) => (Verdict::Fail, Some(e.to_string())),
            }
        }
        (Claim::WordEq { lhs, rhs }, Layer::Perm) => {
            if perm(params, lhs) == perm(params, rhs) {
                (Verdict::Pass, None)
            } else {
                (
                    Verdict::Fail,
                    Some(format!(
                        "puncture permutations differ: {} vs {}",
                        perm(params, lhs),
                        perm(params, rhs)
                    )),
                )
            }
        }
        (Claim::Tuple { word, pairs }, Layer::Action) => {
            let (v, witness) = action::tuple_check(params, word, pairs);
            match v {
                Verdict::Pass => match f2_tuple_agrees(params, word, pairs) {
                    Ok(true) => (Verdict::Pass, None),
                    Ok(false) => (
                        Verdict::Fail,
                        Some(format!(
                            "symbolic pass contradicts the mod-2 representation ({witness})"
                        )),
                    ),
                    Err(e) => (Verdict::Fail, Some(e.to_string())),
                },
                Verdict::Fail => (Verdict::Fail, Some(witness)),
                Verdict::Undecided => (Verdict::Undecided, Some(witness)),
            }
        }
        (Claim::Tuple { word, pairs }, Layer::HomF2) => {
            match f2_tuple_agrees(params, word, pairs) {
                Ok(true) => (Verdict::Pass, None),
                Ok(false) => (
                    Verdict::Fail,
                    Some("mod-2 classes of the claimed images differ".into()),
                ),
                Err(e) => (Verdict::Fail, Some(e.to_string())),
            }
        }
        (Claim::Tuple { .. }, Layer::HomZ) | (Claim::Tuple { .. }, Layer::Perm) => (
            Verdict::Fail,
            Some("tuple claims support only the action and homF2 layers".into()),
        ),
    }
}

/// Whether two words have equal mod-2 homology matrices.
fn f2_words_agree(
    params: &SurfaceParams,
    lhs: &Word,
    rhs: &Word,
) -> Result<bool, ModelError> {
    Ok(eval_f2(params, lhs)? == eval_f2(params, rhs)?)
}

/// Whether the word's mod-2 matrix maps each input curve's class to the
/// claimed output curve's class.
fn f2_tuple_agrees(
    params: &SurfaceParams,
    word: &Word,
    pairs: &[(CurveId, CurveId)],
) -> Result<bool, ModelError> {
    let m = eval_f2(params, word)?;
    for &(input, output) in pairs {
        let vin: Vec<F2> = class_of(params, input)?
            .coeffs_mod2()
            .into_iter()
            .map(F2::new)
            .collect();
        let vout: Vec<F2> = class_of(params, output)?
            .coeffs_mod2()
            .into_iter()
            .map(F2::new)
            .collect();
        if m.apply(&vin) != vout {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Frozen statement of every orientation, ordering, and naming convention
/// the engine is built on. The report carries its SHA-256 so two reports are
/// comparable exactly when they were produced under identical conventions.
pub const CONVENTIONS: &str = "\
mcg engine conventions, version 1

surface: nonorientable genus g >= 14 with p >= 1 punctures, presented as a
cyclic chain of g crosscaps with the punctures grouped on one side.
r = floor((g-1)/2); the surface is 'even' when g = 2r+2.

homology basis: reduced integral first homology on mu_1..mu_g (crosscap
cores, in chain order) followed by nu_1..nu_{p-1} (loops around the first
p-1 punctures); the loop around the last puncture is eliminated by
nu_p = -2(mu_1+...+mu_g) - (nu_1+...+nu_{p-1}).
The mod-2 layer is normative; the integer layer is an annotated lift and is
curated per entry where a lift is sign- or puncture-convention sensitive.

composition: functional order; in any word the rightmost letter acts first.
conjugation: w^f = f w f^{-1}, so the conjugator acts last on the left.

twists: a capital letter is the right-handed Dehn twist about the lowercase
curve of the same name; on homology it acts by x -> x + eps*phi(x)*[c] with
the transvection functional phi and sign eps fixed by the curve catalog.
curve aliases: a1 = alpha_1, b_i = alpha_{2i}, c_j = alpha_{2j+1},
gamma_1 = a_2; c-indices run to r for even g and to r-1 for odd g.

special letters: u_i transposes crosscaps i and i+1 inside a disk around
them; y = A1 u1 is the crosscap slide, and y^2 is the boundary twist of the
enclosing Klein subsurface (trivial on reduced homology and on punctures);
v{i,j} slides puncture j once around the core of crosscap i;
rho_1..rho_4 are the four reflections of the chain picture and T = rho2 rho1
is the chain rotation.

punctures: labeled 1..p; T and rho1 induce the transposition (1 2), rho2
induces the identity, rho3 induces l -> p+1-l, and rho4 induces l -> p-l
while fixing p. The chain rotation moves alpha-, gamma-, and delta-curves
one step along the chain.
";

/// SHA-256 of [`CONVENTIONS`], hex-encoded.
pub fn convention_hash() -> String {
    let digest = Sha256::digest(CONVENTIONS.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Properties deliberately not certified by any check in this engine.
pub const OUT_OF_SCOPE: [&str; 2] = [
    "minimality: no check rules out generating sets smaller than five \
     elements or six involutions",
    "faithfulness: the homology and permutation layers certify necessary \
     conditions only; they are quotient representations of the group",
];

/// Parameter block echoed at the top of every report.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub g: u32,
    pub p: u32,
    pub r: u32,
    pub even: bool,
    /// Homology dimension `g + p - 1`.
    pub dim: usize,
}

/// Generation facts: the cheap symmetric-group surjection check always runs;
/// the matrix-group comparison fields are present when requested.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerationReport {
    /// Whether `{rho3 rho4, rho1}` generate the full symmetric group on the
    /// punctures (decided by exhaustive closure).
    pub sym_p: bool,
    /// Whether the five-element set and the reference set generate the same
    /// subgroup of `GL(n, 2)` in mod-2 homology (mutual sift certificates).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mod2_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub five_order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_order: Option<String>,
}

/// A complete verification report. Serialization is deterministic: map keys
/// are ordered and no timing or host information is included.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub engine: String,
    pub params: ParamsReport,
    pub convention_hash: String,
    pub out_of_scope: [&'static str; 2],
    pub layers_requested: Vec<&'static str>,
    pub entries_checked: usize,
    /// Verdict counts over all (entry, layer) rows.
    pub counts: BTreeMap<&'static str, usize>,
    pub entries: Vec<EntryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenerationReport>,
}

/// Runs every entry of the ledger in the requested layers and assembles the
/// report. `generation` controls whether the (cheap) symmetric-group check
/// is included; the matrix-group comparison is reported separately by
/// [`gen_compare`] because of its cost.
pub fn run_ledger(
    params: &SurfaceParams,
    ledger: &Ledger,
    requested: &[Layer],
    generation: bool,
) -> Result<Report, VerifyError> {
    let mut entries = Vec::new();
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for name in ["pass", "fail", "undecided"] {
        counts.insert(name, 0);
    }
    for entry in &ledger.entries {
        if let Some(report) = check_entry(params, entry, requested) {
            for v in report.layers.values() {
                *counts.entry(verdict_key(*v)).or_default() += 1;
            }
            entries.push(report);
        }
    }
    let generation = if generation {
        Some(GenerationReport {
            sym_p: sym_p_generated(params)?,
            mod2_equal: None,
            five_order: None,
            reference_order: None,
        })
    } else {
        None
    };
    Ok(Report {
        engine: format!("mcg {}", env!("CARGO_PKG_VERSION")),
        params: ParamsReport {
            g: params.g,
            p: params.p,
            r: params.r,
            even: params.even,
            dim: params.dim(),
        },
        convention_hash: convention_hash(),
        out_of_scope: OUT_OF_SCOPE,
        layers_requested: requested.iter().map(|l| l.name()).collect(),
        entries_checked: entries.len(),
        counts,
        entries,
        generation,
    })
}

fn verdict_key(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Undecided => "undecided",
    }
}

/// Process exit code for a report: 0 when every row passed, 1 when any row
/// failed, 2 when rows were undecided but none failed.
pub fn exit_code(report: &Report) -> i32 {
    if report.counts.get("fail").copied().unwrap_or(0) > 0 {
        1
    } else if report.counts.get("undecided").copied().unwrap_or(0) > 0 {
        2
    } else {
        0
    }
}

/// Plain-text rendering: one line per entry (worst verdict first on the
/// line), then the verdict totals.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "mcg verify: g={} p={} (r={}, {} genus, dim {})\n",
        report.params.g,
        report.params.p,
        report.params.r,
        if report.params.even { "even" } else { "odd" },
        report.params.dim,
    ));
    out.push_str(&format!(
        "layers: {}; conventions {}\n",
        report.layers_requested.join(","),
        &report.convention_hash[..12],
    ));
    for line in report.out_of_scope {
        out.push_str(&format!("out of scope: {line}\n"));
    }
    for e in &report.entries {
        let layers: Vec<String> = e
            .layers
            .iter()
            .map(|(name, v)| format!("{name}={v}"))
            .collect();
        out.push_str(&format!(
            "{:9} {} [{}] {}\n",
            e.worst().to_string().to_uppercase(),
            e.id,
            layers.join(" "),
            e.anchor
        ));
        for n in &e.notes {
            out.push_str(&format!("          note: {n}\n"));
        }
    }
    if let Some(g) = &report.generation {
        out.push_str(&format!(
            "generation: rho3*rho4 and rho1 generate Sym_p: {}\n",
            g.sym_p
        ));
    }
    out.push_str(&format!(
        "entries: {}; rows: {} pass, {} fail, {} undecided\n",
        report.entries_checked,
        report.counts.get("pass").copied().unwrap_or(0),
        report.counts.get("fail").copied().unwrap_or(0),
        report.counts.get("undecided").copied().unwrap_or(0),
    ));
    out
}

/// The five-element generating set under test, as named words.
pub fn five_generator_words(params: &SurfaceParams) -> Vec<(String, Word)> {
    ["T", "rho3", "rho4", "Gamma5 B1 u{r+5}", "v{r+3,p}"]
        .into_iter()
        .map(|text| (text.to_string(), parse_fixed(params, text)))
        .collect()
}

/// The reference generating set: the established twist/slide generators of
/// the puncture-fixing subgroup, together with three reflections that cover
/// the puncture permutations.
pub fn reference_generator_words(params: &SurfaceParams) -> Vec<(String, Word)> {
    let mut texts: Vec<String> = Vec::new();
    for i in 1..=params.r {
        texts.push(format!("A{i}"));
        texts.push(format!("B{i}"));
        texts.push(format!("F{i}"));
    }
    for j in 1..=params.c_max() {
        texts.push(format!("C{j}"));
    }
    for k in 1..params.p {
        texts.push(format!("E{k}"));
    }
    texts.push("y".into());
    for i in 1..=params.p {
        texts.push(format!("v{{g,{i}}}"));
    }
    if params.even {
        for i in 1..=params.p {
            texts.push(format!("v{{g-1,{i}}}"));
        }
    }
    for k in [1u8, 3, 4] {
        texts.push(format!("rho{k}"));
    }
    texts
        .into_iter()
        .map(|text| {
            let w = parse_fixed(params, &text);
            (text, w)
        })
        .collect()
}

/// Parses engine-built generator text (never user input).
fn parse_fixed(params: &SurfaceParams, text: &str) -> Word {
    parse_with(params, text, &Defs::new(), &Bindings::new())
        .unwrap_or_else(|e| panic!("engine-built word '{text}' must parse: {e}"))
}

/// Whether `{rho3 rho4, rho1}` generate the full symmetric group on the
/// punctures.
pub fn sym_p_generated(params: &SurfaceParams) -> Result<bool, VerifyError> {
    let gens = vec![
        parse_fixed(params, "rho3 rho4"),
        parse_fixed(params, "rho1"),
    ];
    Ok(generates_sym(params, &gens)?)
}

/// Compares the five-element set against the reference set in mod-2
/// homology: builds both stabilizer chains, sifts each set's generators
/// through the other's chain, and compares group orders.
pub fn gen_compare(params: &SurfaceParams, seed: u64) -> Result<GenerationReport, VerifyError> {
    let to_mats = |words: &[(String, Word)]| -> Result<Vec<BitMat>, VerifyError> {
        words
            .iter()
            .map(|(_, w)| Ok(BitMat::from_f2(&eval_f2(params, w)?)?))
            .collect()
    };
    let five = to_mats(&five_generator_words(params))?;
    let reference = to_mats(&reference_generator_words(params))?;
    let n = params.dim();
    let mut bs_five = schreier_sims_seeded(n, &five, seed)?;
    let mut bs_ref = schreier_sims_seeded(n, &reference, seed.wrapping_add(1))?;
    let equal = same_subgroup(&mut bs_five, &five, &mut bs_ref, &reference)?;
    Ok(GenerationReport {
        sym_p: sym_p_generated(params)?,
        mod2_equal: Some(equal),
        five_order: Some(bs_five.order().to_string()),
        reference_order: Some(bs_ref.order().to_string()),
    })
}
