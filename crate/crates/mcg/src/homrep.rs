//! The action on first homology, generically over the scalar ring.
//!
//! Every generator letter has an exact integer column map fixed by
//! [`crate::model::generator_columns`]; this module lifts those maps to
//! matrices over any scalar implementing [`Scalar`] and evaluates words.
//! Two instantiations matter:
//!
//! * `Mat<BigInt>` ([`crate::MatZ`]) — the exact integer layer, annotated:
//!   identities that involve puncture slides or reflections may fail over
//!   the integers at special parameters while remaining true in the group
//!   (homology only sees curves up to sign);
//! * `Mat<F2>` ([`crate::MatF2`]) — reduction mod 2, the **normative**
//!   layer: every group identity must hold here, and the engine treats a
//!   mod-2 mismatch as a hard failure.
//!
//! Letter inverses are constructed directly (twists flip their sign,
//! reflections and transpositions are involutions on homology, the chain
//! rotation inverts by rotating the other way), so evaluation never needs
//! general matrix inversion.

use crate::model::{
    generator_columns, Columns, CurveSymbol, Generator, ModelError, SurfaceParams,
};
use crate::words::Word;
use crate::Verdict;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;

/// Scalars a homology matrix can be built over: a commutative ring with
/// identity that integers map into.
pub trait Scalar: Clone + PartialEq + Zero + One + From<i64> {}
impl<T> Scalar for T where T: Clone + PartialEq + Zero + One + From<i64> {}

/// The field with two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F2(pub u8);

impl F2 {
    pub fn new(v: u8) -> Self {
        F2(v & 1)
    }
}

impl From<i64> for F2 {
    fn from(v: i64) -> Self {
        F2(v.rem_euclid(2) as u8)
    }
}

impl std::ops::Add for F2 {
    type Output = F2;
    // Addition in the two-element field is exclusive-or.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: F2) -> F2 {
        F2(self.0 ^ rhs.0)
    }
}

impl std::ops::Mul for F2 {
    type Output = F2;
    // Multiplication in the two-element field is bitwise-and.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: F2) -> F2 {
        F2(self.0 & rhs.0)
    }
}

impl Zero for F2 {
    fn zero() -> Self {
        F2(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for F2 {
    fn one() -> Self {
        F2(1)
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense square matrix over `S`, row-major. A column holds the image of the
/// corresponding basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        Mat { n, data }
    }

    /// Lifts an integer column map to this scalar ring.
    pub fn from_columns(cols: &Columns) -> Self {
        let n = cols.len();
        let mut data = vec![S::zero(); n * n];
        for (j, col) in cols.iter().enumerate() {
            for (i, &e) in col.iter().enumerate() {
                data[i * n + j] = S::from(e);
            }
        }
        Mat { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = data[i * n + j].clone();
                    data[i * n + j] = cur + a.clone() * b.clone();
                }
            }
        }
        Mat { n, data }
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &[S]) -> Vec<S> {
        let n = self.n;
        let mut out = vec![S::zero(); n];
        for (j, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let cur = slot.clone();
                *slot = cur + self.data[i * n + j].clone() * c.clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n)
    }
}

/// Projects an exact integer matrix to the two-element field.
pub fn mat_z_to_f2(m: &Mat<BigInt>) -> Mat<F2> {
    let n = m.dim();
    let mut data = vec![F2(0); n * n];
    for i in 0..n {
        for j in 0..n {
            let e = m.entry(i, j);
            let odd = e.bit(0);
            data[i * n + j] = F2(u8::from(odd));
        }
    }
    Mat { n, data }
}

/// Matrix of the Dehn twist about a two-sided catalog curve.
pub fn twist_matrix<S: Scalar>(
    params: &SurfaceParams,
    sym: &CurveSymbol,
) -> Result<Mat<S>, ModelError> {
    let cols = generator_columns(params, &Generator::Twist(*sym), 1)?;
    Ok(Mat::from_columns(&cols))
}

/// Matrix of one generator letter.
pub fn generator_matrix<S: Scalar>(
    params: &SurfaceParams,
    gen: &Generator,
) -> Result<Mat<S>, ModelError> {
    let cols = generator_columns(params, gen, 1)?;
    Ok(Mat::from_columns(&cols))
}

/// Word evaluator with a per-letter matrix memo; reuse one evaluator across
/// a batch of checks at fixed parameters.
pub struct Evaluator<S: Scalar> {
    params: SurfaceParams,
    memo: HashMap<(Generator, i8), Mat<S>>,
}

impl<S: Scalar> Evaluator<S> {
    pub fn new(params: SurfaceParams) -> Self {
        Evaluator {
            params,
            memo: HashMap::new(),
        }
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    fn letter(&mut self, gen: Generator, e: i8) -> Result<&Mat<S>, ModelError> {
        if !self.memo.contains_key(&(gen, e)) {
            let cols = generator_columns(&self.params, &gen, e)?;
            self.memo.insert((gen, e), Mat::from_columns(&cols));
        }
        Ok(&self.memo[&(gen, e)])
    }

    /// Evaluates a word (rightmost letter acts first).
    pub fn eval(&mut self, w: &Word) -> Result<Mat<S>, ModelError> {
        let mut m = Mat::identity(self.params.dim());
        for &(gen, e) in w.letters() {
            m = m.mul(self.letter(gen, e)?);
        }
        Ok(m)
    }
}

/// Evaluates a word over the exact integers.
pub fn eval_z(params: &SurfaceParams, w: &Word) -> Result<Mat<BigInt>, ModelError> {
    Evaluator::new(*params).eval(w)
}

/// Evaluates a word over the two-element field.
pub fn eval_f2(params: &SurfaceParams, w: &Word) -> Result<Mat<F2>, ModelError> {
    Evaluator::new(*params).eval(w)
}

/// Flips the exponents of the `k`-th, ... twist letters of `w` according to
/// a sign plan: `plan[k]` multiplies the exponent of the `k`-th twist letter
/// (non-twist letters are not counted and not altered). A plan shorter than
/// the number of twist letters leaves the remainder untouched.
pub fn apply_sign_plan(w: &Word, plan: &[i8]) -> Word {
    let mut k = 0usize;
    let letters = w
        .letters()
        .iter()
        .map(|&(g, e)| {
            if matches!(g, Generator::Twist(_)) {
                let s = plan.get(k).copied().unwrap_or(1);
                k += 1;
                (g, e * s)
            } else {
                (g, e)
            }
        })
        .collect();
    Word::from_letters(letters)
}

/// Compares two words in the homology representation over `S`. An optional
/// sign plan is applied to the right-hand side first (used by annotated
/// integer-layer checks where a twist is only determined up to sign by the
/// mod-2 layer).
pub fn check_identity<S: Scalar>(
    params: &SurfaceParams,
    lhs: &Word,
    rhs: &Word,
    plan: Option<&[i8]>,
) -> Result<Verdict, ModelError> {
    let rhs_eff = match plan {
        Some(p) => apply_sign_plan(rhs, p),
        None => rhs.clone(),
    };
    let mut ev = Evaluator::<S>::new(*params);
    let a = ev.eval(lhs)?;
    let b = ev.eval(&rhs_eff)?;
    Ok(if a == b { Verdict::Pass } else { Verdict::Fail })
}

/// Whether `m` preserves the mod-2 intersection form
/// `Q = diag(1 x g, 0 x (p-1))`: checks `mᵀ Q m = Q`.
pub fn preserves_form_f2(params: &SurfaceParams, m: &Mat<F2>) -> bool {
    let n = m.dim();
    let g = params.g as usize;
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u8;
            for k in 0..g {
                acc ^= m.entry(k, i).0 & m.entry(k, j).0;
            }
            let expect = u8::from(i == j && i < g);
            if acc != expect {
                return false;
            }
        }
    }
    true
}

/// Whether `m` is unipotent of degree 2 over the two-element field:
/// `(m + I)^2 = 0`. Every twist matrix must satisfy this.
pub fn unipotent_f2(m: &Mat<F2>) -> bool {
    let n = m.dim();
    let mut s = m.clone();
    for i in 0..n {
        let cur = s.data[i * n + i];
        s.data[i * n + i] = cur + F2(1);
    }
    let sq = s.mul(&s);
    sq.data.iter().all(|e| e.is_zero())
}

/// Hex-packed rows of a mod-2 matrix (bit `j` of row `i` is entry `(i,j)`,
/// least-significant bit first), fixed width per row.
pub fn f2_rows_hex(m: &Mat<F2>) -> Vec<String> {
    let n = m.dim();
    let width = n.div_ceil(4);
    (0..n)
        .map(|i| {
            let mut bits: u32 = 0;
            for j in 0..n {
                if m.entry(i, j).0 == 1 {
                    bits |= 1 << j;
                }
            }
            format!("{bits:0width$x}")
        })
        .collect()
}

/// Decimal rows of an exact integer matrix.
pub fn z_rows_dec(m: &Mat<BigInt>) -> Vec<Vec<String>> {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.entry(i, j).to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, catalog_symbols};
    use crate::words;

    fn params(g: i64, p: i64) -> SurfaceParams {
        SurfaceParams::build(g, p).unwrap()
    }

    fn w(s: &SurfaceParams, text: &str) -> Word {
        words::parse(s, text).unwrap()
    }

    #[test]
    fn alpha_twist_acts_as_a_transvection() {
        let s = params(15, 2);
        let m: Mat<F2> = twist_matrix(&s, &CurveSymbol::alpha(1)).unwrap();
        // Over GF(2): mu_1 -> mu_2, mu_2 -> mu_1, everything else fixed.
        let mut x = vec![F2(0); 16];
        x[0] = F2(1);
        let y = m.apply(&x);
        assert_eq!(y[0], F2(0));
        assert_eq!(y[1], F2(1));
        // Over Z: mu_1 -> 2 mu_1 + mu_2.
        let mz: Mat<BigInt> = twist_matrix(&s, &CurveSymbol::alpha(1)).unwrap();
        assert_eq!(*mz.entry(0, 0), BigInt::from(2));
        assert_eq!(*mz.entry(1, 0), BigInt::from(1));
    }

    #[test]
    fn twists_fix_their_own_class() {
        let s = params(15, 2);
        for sym in [
            CurveSymbol::alpha(4),
            CurveSymbol::a(3),
            CurveSymbol::gamma(6),
            CurveSymbol::e(1),
        ] {
            let class = model::curve(&s, &sym).unwrap();
            let m: Mat<BigInt> = twist_matrix(&s, &sym).unwrap();
            let v: Vec<BigInt> = class.coeffs.iter().map(|&c| BigInt::from(c)).collect();
            assert_eq!(m.apply(&v), v, "{sym}");
        }
    }

    #[test]
    fn crosscap_slide_factors_as_twist_times_transposition() {
        let s = params(15, 2);
        let lhs = eval_z(&s, &w(&s, "alpha1^-1 y")).unwrap();
        let rhs = eval_z(&s, &w(&s, "u1")).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflections_are_involutions_on_homology() {
        for (g, p) in [(15, 2), (14, 1), (16, 3)] {
            let s = params(g, p);
            for k in 1..=4 {
                let m = eval_z(&s, &w(&s, &format!("rho{k} rho{k}"))).unwrap();
                assert!(m.is_identity(), "rho{k} at ({g},{p})");
            }
        }
    }

    #[test]
    fn rotation_factors_through_reflections() {
        for (g, p) in [(15, 2), (14, 1), (16, 3)] {
            let s = params(g, p);
            let lhs = eval_z(&s, &w(&s, "T")).unwrap();
            let rhs = eval_z(&s, &w(&s, "rho2 rho1")).unwrap();
            assert_eq!(lhs, rhs, "({g},{p})");
        }
    }

    #[test]
    fn crosscap_transposition_recovery_holds_exactly() {
        // u_{r+5} = B1^-1 (A2^-1)^(T^4) Gamma5 B1 u_{r+5} would be circular;
        // the derived identity states that the left-hand side built from the
        // five-element set's core word reproduces u_{r+5} on the nose.
        let s = params(15, 2);
        let lhs = eval_z(&s, &w(&s, "B1^-1 (A2^-1)^(T^4) Gamma5 B1 u{r+5}")).unwrap();
        let rhs = eval_z(&s, &w(&s, "u{r+5}")).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn klein_bottle_boundary_absorbs_the_slide_square() {
        let s = params(15, 2);
        let y2 = eval_z(&s, &w(&s, "y y")).unwrap();
        let boundary: Mat<BigInt> =
            twist_matrix(&s, &CurveSymbol::boundary(1, 0)).unwrap();
        assert_eq!(y2, boundary);
        assert!(boundary.is_identity(), "separating boundary twist acts trivially");
    }

    #[test]
    fn puncture_slide_squares_match_boundary_twists() {
        let s = params(15, 2);
        for j in 1..=2 {
            let y2 = eval_z(&s, &w(&s, &format!("v{{3,{j}}} v{{3,{j}}}"))).unwrap();
            let boundary: Mat<BigInt> =
                twist_matrix(&s, &CurveSymbol::boundary(3, j)).unwrap();
            assert_eq!(y2, boundary, "v_(3,{j})^2");
        }
    }

    #[test]
    fn involution_of_the_five_element_core() {
        let s = params(15, 2);
        let m = eval_f2(&s, &w(&s, "(rho3 Gamma5 B1 u{r+5})^2")).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn slide_involution_annotated_layer_depends_on_p() {
        // (rho1 v_{r+3,p})^2 = 1 holds over GF(2) everywhere; over the exact
        // integers it holds unless p = 2, where the reflection exchanges the
        // two punctures and the eliminated class obstructs the signs.
        let s2 = params(15, 2);
        let m2 = eval_f2(&s2, &w(&s2, "(rho1 v{r+3,p})^2")).unwrap();
        assert!(m2.is_identity());
        let mz = eval_z(&s2, &w(&s2, "(rho1 v{r+3,p})^2")).unwrap();
        assert!(!mz.is_identity(), "exact layer obstruction at p=2");
        for p in [1, 3] {
            let s = params(15, p);
            let mz = eval_z(&s, &w(&s, "(rho1 v{r+3,p})^2")).unwrap();
            assert!(mz.is_identity(), "p={p}");
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let s = params(15, 2);
        let w1 = w(&s, "Gamma5 B1 u{r+5}");
        let w2 = w(&s, "rho3 T^2 v{8,2}");
        let prod = &w1 * &w2;
        let a = eval_z(&s, &w1).unwrap();
        let b = eval_z(&s, &w2).unwrap();
        assert_eq!(a.mul(&b), eval_z(&s, &prod).unwrap());
        let a2 = eval_f2(&s, &w1).unwrap();
        let b2 = eval_f2(&s, &w2).unwrap();
        assert_eq!(a2.mul(&b2), eval_f2(&s, &prod).unwrap());
    }

    #[test]
    fn mod2_projection_commutes_with_evaluation() {
        let s = params(16, 3);
        for text in ["T rho1", "y v{8,2}^-1 Gamma7", "A3^-1 E2 rho4"] {
            let word = w(&s, text);
            let z = eval_z(&s, &word).unwrap();
            let f = eval_f2(&s, &word).unwrap();
            assert_eq!(mat_z_to_f2(&z), f, "{text}");
        }
    }

    #[test]
    fn all_letters_preserve_the_form() {
        for (g, p) in [(15, 2), (14, 1), (16, 3)] {
            let s = params(g, p);
            let mut gens: Vec<Generator> = vec![
                Generator::ChainRotation,
                Generator::Reflection(1),
                Generator::Reflection(2),
                Generator::Reflection(3),
                Generator::Reflection(4),
                Generator::CrosscapSlide(1),
            ];
            for i in 1..s.g {
                gens.push(Generator::CrosscapTransposition(i));
            }
            for j in 1..=s.p {
                gens.push(Generator::PunctureSlide(3, j));
            }
            for sym in catalog_symbols(&s) {
                if model::curve(&s, &sym).unwrap().two_sided() {
                    gens.push(Generator::Twist(sym));
                }
            }
            for gen in gens {
                let m: Mat<F2> = generator_matrix(&s, &gen).unwrap();
                assert!(preserves_form_f2(&s, &m), "{gen} at ({g},{p})");
            }
        }
    }

    #[test]
    fn twists_are_unipotent() {
        let s = params(15, 2);
        for sym in catalog_symbols(&s) {
            if model::curve(&s, &sym).unwrap().two_sided() {
                let m: Mat<F2> = twist_matrix(&s, &sym).unwrap();
                assert!(unipotent_f2(&m), "{sym}");
            }
        }
    }

    #[test]
    fn one_sided_twist_is_rejected() {
        let s = params(15, 2);
        let err = twist_matrix::<F2>(&s, &CurveSymbol::delta(2)).unwrap_err();
        assert!(matches!(err, ModelError::OneSidedCurve { .. }));
    }

    #[test]
    fn sign_plans_flip_twist_letters() {
        let s = params(15, 2);
        let lhs = w(&s, "A1");
        let rhs = w(&s, "A1^-1");
        assert_eq!(
            check_identity::<BigInt>(&s, &lhs, &rhs, None).unwrap(),
            Verdict::Fail
        );
        assert_eq!(
            check_identity::<BigInt>(&s, &lhs, &rhs, Some(&[-1])).unwrap(),
            Verdict::Pass
        );
        // Plans skip non-twist letters.
        let lhs = w(&s, "T A1");
        let rhs = w(&s, "T A1^-1");
        assert_eq!(
            check_identity::<BigInt>(&s, &lhs, &rhs, Some(&[-1])).unwrap(),
            Verdict::Pass
        );
    }

    #[test]
    fn serialization_shapes() {
        let s = params(15, 2);
        let m: Mat<F2> = generator_matrix(&s, &Generator::ChainRotation).unwrap();
        let hex = f2_rows_hex(&m);
        assert_eq!(hex.len(), 16);
        assert!(hex.iter().all(|row| row.len() == 4));
        let z: Mat<BigInt> = generator_matrix(&s, &Generator::ChainRotation).unwrap();
        let rows = z_rows_dec(&z);
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0].len(), 16);
    }
}
