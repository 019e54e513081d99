//! The induced permutation of the punctures.
//!
//! Twists, crosscap transpositions, crosscap slides, and puncture slides fix
//! every puncture; the reflections and the chain rotation permute them:
//!
//! * `T` and `rho_1` exchange punctures 1 and 2 (trivial for `p = 1`);
//! * `rho_2 = T ∘ rho_1` therefore fixes every puncture;
//! * `rho_3` maps `l -> p+1-l`;
//! * `rho_4` maps `l -> p-l`, fixing `p`.
//!
//! The composite `rho_3 ∘ rho_4` is the long cycle `(1 2 .. p)`, which
//! together with any transposition generates the full symmetric group; that
//! observation is what [`generates_sym`] checks by exhaustive closure.

use crate::model::{Generator, SurfaceParams};
use crate::words::Word;
use std::collections::HashSet;
use std::collections::VecDeque;
use std::fmt;

/// Errors raised by the permutation layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    /// Exhaustive closure is only attempted for `p ≤ 10`.
    #[error("symmetric-group closure is not attempted for p={p} > 10")]
    TooLarge { p: u32 },
}

/// A permutation of the punctures `1..=p` (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    imgs: Vec<u32>,
}

impl Perm {
    pub fn identity(p: u32) -> Self {
        Perm {
            imgs: (0..p).collect(),
        }
    }

    fn from_fn(p: u32, f: impl Fn(u32) -> u32) -> Self {
        // `f` is 1-based on both sides.
        Perm {
            imgs: (1..=p).map(|l| f(l) - 1).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.imgs.len() as u32
    }

    /// Image of the 1-based point `l`.
    pub fn image(&self, l: u32) -> u32 {
        self.imgs[(l - 1) as usize] + 1
    }

    /// Functional composition: `(self ∘ rhs)(x) = self(rhs(x))`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        Perm {
            imgs: rhs.imgs.iter().map(|&x| self.imgs[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut imgs = vec![0u32; self.imgs.len()];
        for (x, &y) in self.imgs.iter().enumerate() {
            imgs[y as usize] = x as u32;
        }
        Perm { imgs }
    }

    pub fn is_identity(&self) -> bool {
        self.imgs.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn key(&self) -> u64 {
        // Supports degree <= 10: 4 bits per image.
        self.imgs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << (4 * i)))
    }
}

impl fmt::Display for Perm {
    /// Cycle notation; fixed points are omitted and the identity prints as
    /// `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.imgs.len() as u32;
        let mut seen = vec![false; p as usize];
        let mut wrote = false;
        for start in 1..=p {
            if seen[(start - 1) as usize] || self.image(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            loop {
                seen[(x - 1) as usize] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.image(x);
                if x == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Permutation induced by a single generator letter.
pub fn generator_perm(params: &SurfaceParams, gen: &Generator) -> Perm {
    let p = params.p;
    let swap12 = |l: u32| match l {
        1 if p >= 2 => 2,
        2 => 1,
        _ => l,
    };
    match gen {
        Generator::Twist(_)
        | Generator::CrosscapSlide(_)
        | Generator::CrosscapTransposition(_)
        | Generator::PunctureSlide(_, _) => Perm::identity(p),
        Generator::ChainRotation => Perm::from_fn(p, swap12),
        Generator::Reflection(1) => Perm::from_fn(p, swap12),
        Generator::Reflection(2) => {
            Perm::from_fn(p, swap12).compose(&Perm::from_fn(p, swap12))
        }
        Generator::Reflection(3) => Perm::from_fn(p, |l| p + 1 - l),
        Generator::Reflection(4) => Perm::from_fn(p, |l| if l == p { p } else { p - l }),
        Generator::Reflection(_) => unreachable!("validated reflection index"),
    }
}

/// Permutation induced by a word (rightmost letter acts first).
pub fn perm(params: &SurfaceParams, w: &Word) -> Perm {
    let mut total = Perm::identity(params.p);
    for &(gen, e) in w.letters() {
        let s = generator_perm(params, &gen);
        let s = if e < 0 { s.inverse() } else { s };
        total = total.compose(&s);
    }
    total
}

/// Whether the permutations induced by `words` generate the full symmetric
/// group on the punctures, decided by exhaustive closure (feasible for
/// `p ≤ 10`).
pub fn generates_sym(params: &SurfaceParams, words: &[Word]) -> Result<bool, PermError> {
    let p = params.p;
    if p > 10 {
        return Err(PermError::TooLarge { p });
    }
    let target: u64 = (1..=p as u64).product();
    let gens: Vec<Perm> = words.iter().map(|w| perm(params, w)).collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(p);
    seen.insert(id.key());
    queue.push_back(id);
    while let Some(elem) = queue.pop_front() {
        for g in &gens {
            let next = elem.compose(g);
            if seen.insert(next.key()) {
                queue.push_back(next);
            }
        }
        if seen.len() as u64 == target {
            return Ok(true);
        }
    }
    Ok(seen.len() as u64 == target)
}
