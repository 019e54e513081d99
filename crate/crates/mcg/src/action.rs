//! Symbolic action of words on catalog curves.
//!
//! This layer reasons about where a word sends a curve **as a curve**, not
//! merely its homology class, using only conservative geometric rules:
//!
//! * a twist fixes its own curve and any curve disjoint from it;
//! * when two curves meet exactly once, the braid retraction
//!   `T_c^e T_d^e (c) = d` resolves one twist applied across the other;
//! * a handful of structural axioms record how the rotation `T`, the
//!   reflections `rho3`/`rho4`, and the transpositions `u_i` permute the
//!   catalog families;
//! * letters supported in a disk away from a curve's crosscap positions fix
//!   that curve;
//! * the ladder words `W_i`, `W'_i` name their derived curves by
//!   definition.
//!
//! Everything else is reported as unknown. Consequently a word equality
//! check here returns [`Verdict::Pass`] or [`Verdict::Undecided`], never a
//! refutation, while a curve-tuple check can also refute (a word that
//! provably sends `b1` to `c1` does not send it to `b2`). Each conclusion
//! carries a replayable [`DerivationTrace`] naming the rule used at every
//! step.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{
    curve_support, d1_defining_letters, d2_defining_letters, intersection_of, resolve, CurveId,
    CurveSymbol, Generator, Intersection, SurfaceParams,
};
use crate::words::Word;
use crate::Verdict;

/// Result of pushing a curve through a word symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applied {
    /// The image is this catalog curve.
    Known(CurveId),
    /// The rules cannot name the image curve.
    Unknown,
}

/// The rule justifying one step of a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// The whole word is a ladder word acting on its defining curve.
    Definition,
    /// A twist fixes its own curve.
    OwnCurve,
    /// A twist fixes a curve disjoint from its own.
    DisjointCurves,
    /// A structural axiom for `T`, `rho3`, `rho4`, or `u_i`.
    Axiom,
    /// The letter is supported in a disk missing the curve.
    DisjointSupport,
    /// The curve meets the twisting curve once; the image is tracked
    /// symbolically until a braid retraction resolves it.
    BraidOpen,
    /// A letter moved both components of a pending braid (or was disjoint
    /// from both).
    BraidPass,
    /// `T_c^e T_d^e (c) = d` closed a pending braid.
    BraidClose,
    /// The inverse of the pending twist undid it.
    BraidCancel,
    /// No rule applies; the derivation stops.
    Blocked,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Definition => "definition",
            Rule::OwnCurve => "own-curve",
            Rule::DisjointCurves => "disjoint-curves",
            Rule::Axiom => "axiom",
            Rule::DisjointSupport => "disjoint-support",
            Rule::BraidOpen => "braid-open",
            Rule::BraidPass => "braid-pass",
            Rule::BraidClose => "braid-close",
            Rule::BraidCancel => "braid-cancel",
            Rule::Blocked => "blocked",
        };
        f.write_str(s)
    }
}

/// One step of a derivation: the letter consumed (letters act right to
/// left), the rule used, and the symbolic state afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// The letter, rendered as in the word grammar.
    pub letter: String,
    /// The rule that consumed it.
    pub rule: Rule,
    /// The symbolic state after the step.
    pub state: String,
}

/// A replayable record of [`apply`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTrace {
    /// The word acting.
    pub word: String,
    /// The starting curve.
    pub start: String,
    /// The steps, in the order the letters acted.
    pub steps: Vec<TraceStep>,
    /// The final answer.
    pub result: Applied,
}

impl DerivationTrace {
    fn result_name(&self, params: &SurfaceParams) -> String {
        match self.result {
            Applied::Known(c) => c.display_name(params),
            Applied::Unknown => "?".into(),
        }
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "({}) applied to {}:", self.word, self.start)?;
        for s in &self.steps {
            writeln!(f, "  {:<12} [{}] -> {}", s.letter, s.rule, s.state)?;
        }
        match self.result {
            Applied::Known(_) => write!(f, "  image known"),
            Applied::Unknown => write!(f, "  image unknown"),
        }
    }
}

/// Symbolic state while scanning letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    /// The image so far is this catalog curve.
    Cur(CurveId),
    /// The image so far is `T_twister^sign (cur)` for curves meeting once.
    Pending {
        cur: CurveId,
        twister: CurveId,
        sign: i8,
    },
}

impl State {
    fn display(&self, params: &SurfaceParams) -> String {
        match self {
            State::Cur(c) => c.display_name(params),
            State::Pending { cur, twister, sign } => format!(
                "tw[{}]^{:+}({})",
                twister.display_name(params),
                sign,
                cur.display_name(params)
            ),
        }
    }
}

fn letter_str(gen: &Generator, exp: i8) -> String {
    match exp {
        1 => gen.to_string(),
        -1 => format!("{gen}^-1"),
        e => format!("{gen}^{e}"),
    }
}

/// Replaces each crosscap-slide letter by its definition
/// `y_i = Twist(alpha_i) ∘ u_i`, so the scan only ever sees twists and the
/// remaining generators.
fn expand_letters(letters: &[(Generator, i8)]) -> Vec<(Generator, i8)> {
    let mut out = Vec::with_capacity(letters.len() + 2);
    for &(gen, exp) in letters {
        if let Generator::CrosscapSlide(i) = gen {
            let tw = Generator::Twist(CurveSymbol::alpha(i));
            let u = Generator::CrosscapTransposition(i);
            if exp >= 0 {
                out.push((tw, 1));
                out.push((u, 1));
            } else {
                out.push((u, -1));
                out.push((tw, -1));
            }
        } else {
            out.push((gen, exp));
        }
    }
    out
}

/// Crosscap positions a generator's support touches, where known. `None`
/// means the catalog makes no disjointness claim for the letter (in
/// particular puncture slides travel across the chain, so they get no
/// support set).
pub fn generator_support(gen: &Generator) -> Option<BTreeSet<u32>> {
    match *gen {
        Generator::CrosscapSlide(i) | Generator::CrosscapTransposition(i) => {
            Some(BTreeSet::from([i, i + 1]))
        }
        _ => None,
    }
}

/// Structural images of catalog curves under non-twist letters. Returns
/// `(image, reversed)` where `reversed` records that conjugating a twist by
/// the letter also inverts it (the letter reverses orientation along the
/// curve).
fn axiom_image(params: &SurfaceParams, gen: &Generator, exp: i8, cur: CurveId) -> Option<(CurveId, bool)> {
    let r = params.r;
    let p = params.p;
    match *gen {
        // T rotates the chain: every edge, window, and core moves one step.
        Generator::ChainRotation => {
            let e = exp as i64;
            match cur {
                CurveId::Alpha(l) => Some((CurveId::Alpha(params.cyc(l as i64 + e)), false)),
                CurveId::Gamma(j) => Some((gamma_id(params, j as i64 + e), false)),
                CurveId::A(2) => Some((gamma_id(params, 1 + e), false)),
                CurveId::Delta(i) => Some((CurveId::Delta(params.cyc(i as i64 + e)), false)),
                _ => None,
            }
        }
        // u_i preserves alpha_i (reversing it) and exchanges the two cores
        // it braids.
        Generator::CrosscapTransposition(i) => match cur {
            CurveId::Alpha(l) if l == i => Some((cur, true)),
            CurveId::Delta(d) if d == i => Some((CurveId::Delta(i + 1), false)),
            CurveId::Delta(d) if d == i + 1 => Some((CurveId::Delta(i), false)),
            _ => None,
        },
        // rho3 is the reflection fixing gamma5, b1, and alpha_{r+5} while
        // exchanging alpha1 with f1 and reversing the e-ladder.
        Generator::Reflection(3) => match cur {
            CurveId::Gamma(5) => Some((cur, true)),
            CurveId::Alpha(2) => Some((cur, true)),
            CurveId::Alpha(l) if l == r + 5 => Some((cur, true)),
            CurveId::Alpha(1) => Some((CurveId::F(1), true)),
            CurveId::F(1) => Some((CurveId::Alpha(1), true)),
            CurveId::E(k) => Some((CurveId::E(p - k), true)),
            _ => None,
        },
        // rho4 exchanges the prefix curves with their reflections and
        // rotates the e-ladder one step against alpha1.
        Generator::Reflection(4) => match cur {
            CurveId::A(i) => Some((CurveId::F(i), true)),
            CurveId::F(i) if i >= 2 => Some((CurveId::A(i), true)),
            CurveId::Alpha(1) if p >= 2 => Some((CurveId::E(p - 1), true)),
            CurveId::E(k) if k == p - 1 => Some((CurveId::Alpha(1), true)),
            CurveId::E(k) => Some((CurveId::E(p - 1 - k), true)),
            _ => None,
        },
        _ => None,
    }
}

/// Normalizes a window index: the first window is the prefix curve `a2`.
fn gamma_id(params: &SurfaceParams, j: i64) -> CurveId {
    let j = params.cyc(j);
    if j == 1 {
        CurveId::A(2)
    } else {
        CurveId::Gamma(j)
    }
}

/// Where one letter provably sends a catalog curve, with the
/// orientation-reversal flag for twist transport. `None` when no rule
/// applies (the image may well exist; the catalog just cannot name it).
pub fn letter_image(
    params: &SurfaceParams,
    gen: &Generator,
    exp: i8,
    cur: CurveId,
) -> Option<(CurveId, bool)> {
    match gen {
        Generator::Twist(sym) => {
            let t = resolve(params, sym).ok()?;
            if t == cur {
                return Some((cur, false));
            }
            match intersection_of(params, t, cur) {
                Intersection::Known(0) => Some((cur, false)),
                _ => None,
            }
        }
        Generator::CrosscapSlide(_) => {
            image_through(params, &expand_letters(&[(*gen, exp)]), cur)
        }
        _ => {
            if let Some(img) = axiom_image(params, gen, exp, cur) {
                return Some(img);
            }
            let gs = generator_support(gen)?;
            let cs = curve_support(params, cur)?;
            if gs.is_disjoint(&cs) {
                Some((cur, false))
            } else {
                None
            }
        }
    }
}

fn image_through(
    params: &SurfaceParams,
    letters: &[(Generator, i8)],
    start: CurveId,
) -> Option<(CurveId, bool)> {
    let mut cur = start;
    let mut rev = false;
    for &(gen, exp) in letters.iter().rev() {
        let (next, flip) = letter_image(params, &gen, exp, cur)?;
        cur = next;
        rev ^= flip;
    }
    Some((cur, rev))
}

/// Maps a curve through a letter sequence (rightmost letter first),
/// reporting the image and whether the transport inverts a twist carried
/// along the curve.
pub fn map_curve_through(
    params: &SurfaceParams,
    letters: &[(Generator, i8)],
    start: CurveId,
) -> Option<(CurveId, bool)> {
    image_through(params, letters, start)
}

fn step(params: &SurfaceParams, state: State, gen: &Generator, exp: i8) -> (Option<State>, Rule) {
    match state {
        State::Cur(c) => match gen {
            Generator::Twist(sym) => {
                let Ok(t) = resolve(params, sym) else {
                    return (None, Rule::Blocked);
                };
                if t == c {
                    return (Some(State::Cur(c)), Rule::OwnCurve);
                }
                match intersection_of(params, t, c) {
                    Intersection::Known(0) => (Some(State::Cur(c)), Rule::DisjointCurves),
                    Intersection::Known(1) => (
                        Some(State::Pending {
                            cur: c,
                            twister: t,
                            sign: exp,
                        }),
                        Rule::BraidOpen,
                    ),
                    _ => (None, Rule::Blocked),
                }
            }
            _ => {
                if let Some((next, _)) = axiom_image(params, gen, exp, c) {
                    return (Some(State::Cur(next)), Rule::Axiom);
                }
                match (generator_support(gen), curve_support(params, c)) {
                    (Some(gs), Some(cs)) if gs.is_disjoint(&cs) => {
                        (Some(State::Cur(c)), Rule::DisjointSupport)
                    }
                    _ => (None, Rule::Blocked),
                }
            }
        },
        State::Pending { cur, twister, sign } => match gen {
            Generator::Twist(sym) => {
                let Ok(t) = resolve(params, sym) else {
                    return (None, Rule::Blocked);
                };
                if t == cur && exp == sign {
                    // T_c^e T_d^e (c) = d for curves meeting once.
                    return (Some(State::Cur(twister)), Rule::BraidClose);
                }
                if t == twister && exp == -sign {
                    return (Some(State::Cur(cur)), Rule::BraidCancel);
                }
                let dis = |a: CurveId| intersection_of(params, t, a) == Intersection::Known(0);
                if t != cur && t != twister && dis(cur) && dis(twister) {
                    return (Some(state), Rule::BraidPass);
                }
                (None, Rule::Blocked)
            }
            _ => {
                let Some((c2, _)) = letter_image(params, gen, exp, cur) else {
                    return (None, Rule::Blocked);
                };
                let Some((t2, rev)) = letter_image(params, gen, exp, twister) else {
                    return (None, Rule::Blocked);
                };
                (
                    Some(State::Pending {
                        cur: c2,
                        twister: t2,
                        sign: if rev { -sign } else { sign },
                    }),
                    Rule::BraidPass,
                )
            }
        },
    }
}

/// Pushes a curve through a word, letter by letter (rightmost first),
/// recording the rule used at each step.
pub fn apply(params: &SurfaceParams, word: &Word, start: CurveId) -> DerivationTrace {
    let mut trace = DerivationTrace {
        word: word.to_string(),
        start: start.display_name(params),
        steps: Vec::new(),
        result: Applied::Unknown,
    };

    // The ladder words name their derived curves by definition.
    if params.r >= 3 {
        for i in 1..=params.r - 2 {
            let d2w = d2_defining_letters(params, i).expect("index in range");
            if word.letters() == d2w.as_slice() && start == CurveId::A(i + 1) {
                trace.result = Applied::Known(CurveId::D2(i));
                trace.steps.push(TraceStep {
                    letter: format!("W[{i}]"),
                    rule: Rule::Definition,
                    state: trace.result_name(params),
                });
                return trace;
            }
            let d1w = d1_defining_letters(params, i).expect("index in range");
            if word.letters() == d1w.as_slice() && start == CurveId::D2(i) {
                trace.result = Applied::Known(CurveId::D1(i));
                trace.steps.push(TraceStep {
                    letter: format!("W'[{i}]"),
                    rule: Rule::Definition,
                    state: trace.result_name(params),
                });
                return trace;
            }
        }
    }

    let letters = expand_letters(word.letters());
    let mut state = State::Cur(start);
    for &(gen, exp) in letters.iter().rev() {
        let (next, rule) = step(params, state, &gen, exp);
        match next {
            Some(s) => {
                trace.steps.push(TraceStep {
                    letter: letter_str(&gen, exp),
                    rule,
                    state: s.display(params),
                });
                state = s;
            }
            None => {
                trace.steps.push(TraceStep {
                    letter: letter_str(&gen, exp),
                    rule: Rule::Blocked,
                    state: "?".into(),
                });
                trace.result = Applied::Unknown;
                return trace;
            }
        }
    }
    trace.result = match state {
        State::Cur(c) => Applied::Known(c),
        State::Pending { .. } => Applied::Unknown,
    };
    trace
}

/// A word split as `(named twists) ∘ (residue)`: the twists are about
/// catalog curves (leftmost acts last), and the residue is the irreducible
/// tail of remaining letters. Two words with equal normal forms are equal
/// as mapping classes; unequal normal forms decide nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Twists moved out front, as `(curve, exponent)` with merged runs.
    pub twists: Vec<(CurveId, i8)>,
    /// Letters the rules could not move or cancel.
    pub residue: Vec<(Generator, i8)>,
}

impl NormalForm {
    /// Whether the normal form is the empty word.
    pub fn is_identity(&self) -> bool {
        self.twists.is_empty() && self.residue.is_empty()
    }

    /// Human-readable rendering, e.g. `tw[gamma7] tw[b2] | u14`.
    pub fn display(&self, params: &SurfaceParams) -> String {
        if self.is_identity() {
            return "1".into();
        }
        let mut parts: Vec<String> = self
            .twists
            .iter()
            .map(|(c, e)| {
                let name = c.display_name(params);
                match e {
                    1 => format!("tw[{name}]"),
                    e => format!("tw[{name}]^{e}"),
                }
            })
            .collect();
        if !self.residue.is_empty() {
            if !parts.is_empty() {
                parts.push("|".into());
            }
            parts.extend(self.residue.iter().map(|(g, e)| letter_str(g, *e)));
        }
        parts.join(" ")
    }
}

fn push_twist(twists: &mut Vec<(CurveId, i8)>, id: CurveId, exp: i8) {
    if let Some(last) = twists.last_mut() {
        if last.0 == id {
            last.1 += exp;
            if last.1 == 0 {
                twists.pop();
            }
            return;
        }
    }
    twists.push((id, exp));
}

fn push_residue(res: &mut Vec<(Generator, i8)>, gen: Generator, mut exp: i8) {
    if matches!(gen, Generator::Reflection(_)) {
        // Reflections are involutions: canonicalize the exponent and square
        // adjacent repeats away.
        if let Some(&(lg, _)) = res.last() {
            if lg == gen {
                res.pop();
                return;
            }
        }
        exp = 1;
    } else if let Some(&(lg, le)) = res.last() {
        if lg == gen && le == -exp {
            res.pop();
            return;
        }
    }
    res.push((gen, exp));
}

/// Rewrites the residue to a fixed point: free cancellation, reflection
/// squares, `rho2 rho1 = T` (and its inverse), and the chain-rotation
/// reorder `u_i T^e = T^e u_{i-e}`.
fn reduce_residue(params: &SurfaceParams, res: &mut Vec<(Generator, i8)>) {
    'scan: loop {
        for k in 0..res.len().saturating_sub(1) {
            let (a, ea) = res[k];
            let (b, eb) = res[k + 1];
            if a == b && ea == -eb {
                res.drain(k..=k + 1);
                continue 'scan;
            }
            if let (Generator::Reflection(x), Generator::Reflection(y)) = (a, b) {
                if x == y {
                    res.drain(k..=k + 1);
                    continue 'scan;
                }
                if x == 2 && y == 1 {
                    res.splice(k..=k + 1, [(Generator::ChainRotation, 1)]);
                    continue 'scan;
                }
                if x == 1 && y == 2 {
                    res.splice(k..=k + 1, [(Generator::ChainRotation, -1)]);
                    continue 'scan;
                }
            }
            if let (Generator::CrosscapTransposition(i), Generator::ChainRotation) = (a, b) {
                let ni = i as i64 - eb as i64;
                if (1..params.g as i64).contains(&ni) {
                    res.splice(
                        k..=k + 1,
                        [
                            (Generator::ChainRotation, eb),
                            (Generator::CrosscapTransposition(ni as u32), ea),
                        ],
                    );
                    continue 'scan;
                }
            }
        }
        break;
    }
}

/// Computes the normal form of a word: twist letters are transported to the
/// front through the accumulated residue (when the rules can name their
/// image curves), then the residue is rewritten to a fixed point.
pub fn normalize(params: &SurfaceParams, word: &Word) -> NormalForm {
    let letters = expand_letters(word.letters());
    let mut twists: Vec<(CurveId, i8)> = Vec::new();
    let mut residue: Vec<(Generator, i8)> = Vec::new();
    for (gen, exp) in letters {
        match gen {
            Generator::Twist(sym) => {
                let moved = resolve(params, &sym)
                    .ok()
                    .and_then(|id| image_through(params, &residue, id));
                match moved {
                    Some((c, rev)) => push_twist(&mut twists, c, if rev { -exp } else { exp }),
                    None => push_residue(&mut residue, gen, exp),
                }
            }
            _ => push_residue(&mut residue, gen, exp),
        }
    }
    reduce_residue(params, &mut residue);
    sort_commuting_twists(params, &mut twists);
    NormalForm { twists, residue }
}

/// Canonicalizes the twist prefix: adjacent twists about provably disjoint
/// curves commute, so they are bubble-sorted into [`CurveId`] order (and
/// same-curve neighbors merged) until no swap applies. Twists about curves
/// whose intersection is unknown or nonzero are never reordered.
fn sort_commuting_twists(params: &SurfaceParams, twists: &mut Vec<(CurveId, i8)>) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < twists.len() {
            let (c, e) = twists[i];
            let (d, f) = twists[i + 1];
            if c == d {
                let sum = e + f;
                twists.remove(i + 1);
                if sum == 0 {
                    twists.remove(i);
                } else {
                    twists[i].1 = sum;
                }
                changed = true;
                i = i.saturating_sub(1);
                continue;
            }
            if d < c && intersection_of(params, c, d) == Intersection::Known(0) {
                twists.swap(i, i + 1);
                changed = true;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
}

/// Checks `lhs = rhs` by comparing normal forms. Equal forms prove the
/// identity; unequal forms decide nothing (the witness shows both).
pub fn word_check(params: &SurfaceParams, lhs: &Word, rhs: &Word) -> (Verdict, String) {
    let nl = normalize(params, lhs);
    let nr = normalize(params, rhs);
    let witness = format!(
        "lhs ~ {}; rhs ~ {}",
        nl.display(params),
        nr.display(params)
    );
    if nl == nr {
        (Verdict::Pass, witness)
    } else {
        (Verdict::Undecided, witness)
    }
}

/// Checks a claimed curve tuple `word: inputs -> expected`. A provable
/// mismatch refutes the claim; an unnameable image leaves it undecided.
pub fn tuple_check(
    params: &SurfaceParams,
    word: &Word,
    pairs: &[(CurveId, CurveId)],
) -> (Verdict, String) {
    let mut undecided = false;
    let mut notes = Vec::new();
    for &(input, expected) in pairs {
        let tr = apply(params, word, input);
        let iname = input.display_name(params);
        let ename = expected.display_name(params);
        match tr.result {
            Applied::Known(c) if c == expected => notes.push(format!("{iname} -> {ename}")),
            Applied::Known(c) => {
                return (
                    Verdict::Fail,
                    format!("{iname} -> {} but {ename} was claimed", c.display_name(params)),
                );
            }
            Applied::Unknown => {
                undecided = true;
                notes.push(format!("{iname} -> ?"));
            }
        }
    }
    let verdict = if undecided {
        Verdict::Undecided
    } else {
        Verdict::Pass
    };
    (verdict, notes.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CurveSymbol;
    use crate::words::parse;

    fn s15() -> SurfaceParams {
        SurfaceParams::build(15, 2).unwrap()
    }

    fn id(params: &SurfaceParams, name: &str) -> CurveId {
        let sym = match name {
            "a1" => CurveSymbol::a(1),
            "a2" => CurveSymbol::a(2),
            "b1" => CurveSymbol::b(1),
            "b2" => CurveSymbol::b(2),
            "b3" => CurveSymbol::b(3),
            "c1" => CurveSymbol::c(1),
            "gamma5" => CurveSymbol::gamma(5),
            "gamma6" => CurveSymbol::gamma(6),
            "gamma7" => CurveSymbol::gamma(7),
            "alpha12" => CurveSymbol::alpha(12),
            "alpha14" => CurveSymbol::alpha(14),
            _ => panic!("unknown test curve {name}"),
        };
        resolve(params, &sym).unwrap()
    }

    fn wd(params: &SurfaceParams, text: &str) -> Word {
        parse(params, text).unwrap()
    }

    #[test]
    fn rotation_moves_the_chain_families() {
        let s = s15();
        let t = wd(&s, "T");
        assert_eq!(
            apply(&s, &t, CurveId::Alpha(2)).result,
            Applied::Known(CurveId::Alpha(3))
        );
        assert_eq!(
            apply(&s, &t, CurveId::Alpha(15)).result,
            Applied::Known(CurveId::Alpha(1))
        );
        assert_eq!(
            apply(&s, &t, CurveId::A(2)).result,
            Applied::Known(CurveId::Gamma(2))
        );
        assert_eq!(
            apply(&s, &t, CurveId::Delta(15)).result,
            Applied::Known(CurveId::Delta(1))
        );
        let tinv = wd(&s, "T^-1");
        assert_eq!(
            apply(&s, &tinv, CurveId::Gamma(2)).result,
            Applied::Known(CurveId::A(2))
        );
        assert_eq!(
            apply(&s, &tinv, CurveId::Gamma(5)).result,
            Applied::Known(CurveId::Gamma(4))
        );
    }

    #[test]
    fn braid_retraction_resolves_a_crossing_twist() {
        let s = s15();
        // gamma5 and b2 meet once: Gamma5 B2 (gamma5) = b2.
        let w = wd(&s, "Gamma5 B2");
        assert_eq!(apply(&s, &w, id(&s, "gamma5")).result, Applied::Known(id(&s, "b2")));
        // Same retraction with both twists inverted.
        let w = wd(&s, "Gamma5^-1 B2^-1");
        assert_eq!(apply(&s, &w, id(&s, "gamma5")).result, Applied::Known(id(&s, "b2")));
        // Mismatched signs stay unknown.
        let w = wd(&s, "Gamma5 B2^-1");
        assert_eq!(apply(&s, &w, id(&s, "gamma5")).result, Applied::Unknown);
        // The inverse twist undoes a pending braid.
        let w = wd(&s, "B2^-1 B2");
        assert_eq!(apply(&s, &w, id(&s, "gamma5")).result, Applied::Known(id(&s, "gamma5")));
        // A lone crossing twist leaves the image unnamed.
        let w = wd(&s, "B2");
        assert_eq!(apply(&s, &w, id(&s, "gamma5")).result, Applied::Unknown);
    }

    #[test]
    fn chain_handoff_tuple_passes() {
        let s = s15();
        // r = 7: the handoff words move gamma5 to b2 while fixing b1 and
        // the far edge alpha12 = alpha_{r+5}.
        let w = wd(&s, "(Gamma5 B1 u{r+5}) (Gamma7 B2 u{r+7})");
        let pairs = [
            (id(&s, "gamma5"), id(&s, "b2")),
            (id(&s, "b1"), id(&s, "b1")),
            (id(&s, "alpha12"), id(&s, "alpha12")),
        ];
        let (v, note) = tuple_check(&s, &w, &pairs);
        assert_eq!(v, Verdict::Pass, "{note}");
    }

    #[test]
    fn lower_handoff_tuple_passes() {
        let s = s15();
        let w = wd(&s, "(B3 B2 u{r+7}) (C1 A1 u{r+4})");
        let pairs = [
            (id(&s, "b3"), id(&s, "b3")),
            (id(&s, "b2"), id(&s, "c1")),
            (id(&s, "alpha14"), id(&s, "alpha14")),
        ];
        let (v, note) = tuple_check(&s, &w, &pairs);
        assert_eq!(v, Verdict::Pass, "{note}");
    }

    #[test]
    fn wrong_tuple_claim_is_refuted() {
        let s = s15();
        let w = wd(&s, "T");
        let pairs = [(id(&s, "b1"), id(&s, "b2"))];
        let (v, note) = tuple_check(&s, &w, &pairs);
        assert_eq!(v, Verdict::Fail);
        assert!(note.contains("c1"), "{note}");
    }

    #[test]
    fn puncture_slides_decide_nothing() {
        let s = s15();
        let w = wd(&s, "v{3,1}");
        let pairs = [(id(&s, "gamma5"), id(&s, "gamma5"))];
        let (v, _) = tuple_check(&s, &w, &pairs);
        assert_eq!(v, Verdict::Undecided);
    }

    #[test]
    fn transported_twists_cancel_against_the_target() {
        let s = s15();
        // T^4 carries a2 to gamma5, so the conjugate cancels Gamma5 and the
        // whole word collapses to u{r+5}.
        let lhs = wd(&s, "B1^-1 (A2^-1)^(T^4) Gamma5 B1 u{r+5}");
        let rhs = wd(&s, "u{r+5}");
        let (v, note) = word_check(&s, &lhs, &rhs);
        assert_eq!(v, Verdict::Pass, "{note}");
    }

    #[test]
    fn handoff_words_are_rotation_conjugate() {
        let s = s15();
        let (v, note) = word_check(
            &s,
            &wd(&s, "(Gamma5 B1 u{r+5})^(T^2)"),
            &wd(&s, "Gamma7 B2 u{r+7}"),
        );
        assert_eq!(v, Verdict::Pass, "{note}");
        let (v, note) = word_check(
            &s,
            &wd(&s, "(B3 B2 u{r+7})^(T^-3)"),
            &wd(&s, "C1 A1 u{r+4}"),
        );
        assert_eq!(v, Verdict::Pass, "{note}");
    }

    #[test]
    fn reflections_transport_twists_with_inversion() {
        let s = s15();
        // rho4 carries alpha1 to e_{p-1} reversing orientation, so the
        // conjugated inverse twist is the plain twist about e_{p-1}.
        let (v, note) = word_check(&s, &wd(&s, "(A1^-1)^(rho4)"), &wd(&s, "E{p-1}"));
        assert_eq!(v, Verdict::Pass, "{note}");
        let s3 = SurfaceParams::build(15, 3).unwrap();
        let (v, note) = word_check(&s3, &wd(&s3, "(E2^-1)^(rho3)"), &wd(&s3, "E1"));
        assert_eq!(v, Verdict::Pass, "{note}");
    }

    #[test]
    fn rotation_is_the_reflection_product() {
        let s = s15();
        let (v, _) = word_check(&s, &wd(&s, "T"), &wd(&s, "rho2 rho1"));
        assert_eq!(v, Verdict::Pass);
        let (v, _) = word_check(&s, &wd(&s, "rho1 rho1"), &wd(&s, "1"));
        assert_eq!(v, Verdict::Pass);
        let (v, _) = word_check(&s, &wd(&s, "rho3 rho3"), &wd(&s, "1"));
        assert_eq!(v, Verdict::Pass);
    }

    #[test]
    fn slide_expands_to_twist_and_transposition() {
        let s = s15();
        let (v, _) = word_check(&s, &wd(&s, "y"), &wd(&s, "alpha1 u1"));
        assert_eq!(v, Verdict::Pass);
        let (v, _) = word_check(&s, &wd(&s, "y^-1"), &wd(&s, "u1^-1 alpha1^-1"));
        assert_eq!(v, Verdict::Pass);
    }

    #[test]
    fn rotation_reorders_transpositions() {
        let s = s15();
        let (v, note) = word_check(&s, &wd(&s, "u5 T"), &wd(&s, "T u4"));
        assert_eq!(v, Verdict::Pass, "{note}");
        let (v, note) = word_check(&s, &wd(&s, "u5 T^-1"), &wd(&s, "T^-1 u6"));
        assert_eq!(v, Verdict::Pass, "{note}");
        // u_0 does not exist, so the reorder stops at the chain end.
        let (v, _) = word_check(&s, &wd(&s, "u1 T"), &wd(&s, "T u14"));
        assert_eq!(v, Verdict::Undecided);
    }

    #[test]
    fn normal_forms_do_not_overclaim() {
        let s = s15();
        // Twists about curves that genuinely intersect never commute, and
        // the normal form must not pretend otherwise.
        let (v, _) = word_check(&s, &wd(&s, "A1 B1"), &wd(&s, "B1 A1"));
        assert_eq!(v, Verdict::Undecided);
        let (v, _) = word_check(&s, &wd(&s, "A1"), &wd(&s, "A1^-1"));
        assert_eq!(v, Verdict::Undecided);
    }

    #[test]
    fn disjoint_twists_commute_in_normal_form() {
        let s = s15();
        // `a1` and `gamma5` are provably disjoint, so both orders reach the
        // same sorted twist prefix.
        let (v, _) = word_check(&s, &wd(&s, "A1 Gamma5"), &wd(&s, "Gamma5 A1"));
        assert_eq!(v, Verdict::Pass);
        // Sorting can also expose a cancellation that letter order hides:
        // transporting the second factor's twists through `u_{r+7}` leaves
        // `B3 B2 B3^-1 C1` up to commuting moves.
        let (v, w) = word_check(
            &s,
            &wd(&s, "(B3 B2 u{r+7}) (B3 C1 u{r+7})^-1"),
            &wd(&s, "B2 C1^-1"),
        );
        assert_eq!(v, Verdict::Pass, "{w}");
    }

    #[test]
    fn repeated_twists_merge() {
        let s = s15();
        let (v, _) = word_check(&s, &wd(&s, "B1^2"), &wd(&s, "B1 B1"));
        assert_eq!(v, Verdict::Pass);
        let nf = normalize(&s, &wd(&s, "B1 B1"));
        assert_eq!(nf.twists, vec![(CurveId::Alpha(2), 2)]);
        assert!(nf.residue.is_empty());
    }

    #[test]
    fn defining_words_name_the_derived_curves() {
        let s = s15();
        let w = Word::from_letters(d2_defining_letters(&s, 1).unwrap());
        let tr = apply(&s, &w, CurveId::A(2));
        assert_eq!(tr.result, Applied::Known(CurveId::D2(1)));
        assert_eq!(tr.steps[0].rule, Rule::Definition);
        let w = Word::from_letters(d1_defining_letters(&s, 1).unwrap());
        assert_eq!(apply(&s, &w, CurveId::D2(1)).result, Applied::Known(CurveId::D1(1)));
        // The same letters parsed from text match the definition, too.
        let w = wd(&s, "A1 B2^-1 A1 C1^-1 A1 C2^-1 A1 B2^-1");
        assert_eq!(apply(&s, &w, CurveId::A(2)).result, Applied::Known(CurveId::D2(1)));
    }

    #[test]
    fn traces_are_deterministic_and_informative() {
        let s = s15();
        let w = wd(&s, "(Gamma5 B1 u{r+5}) (Gamma7 B2 u{r+7})");
        let t1 = apply(&s, &w, id(&s, "gamma5"));
        let t2 = apply(&s, &w, id(&s, "gamma5"));
        assert_eq!(t1, t2);
        assert_eq!(t1.steps.len(), 6);
        assert!(t1.steps.iter().any(|st| st.rule == Rule::BraidOpen));
        assert!(t1.steps.iter().any(|st| st.rule == Rule::BraidClose));
        let rendered = t1.to_string();
        assert!(rendered.contains("braid-close"), "{rendered}");
    }

    #[test]
    fn blocked_steps_end_the_trace() {
        let s = s15();
        let tr = apply(&s, &wd(&s, "v{3,1}"), id(&s, "gamma5"));
        assert_eq!(tr.result, Applied::Unknown);
        assert_eq!(tr.steps.last().unwrap().rule, Rule::Blocked);
    }
}
