//! Finite matrix-group membership over GF(2).
//!
//! The mod-2 homology representation lands in `GL(n, 2)`, a finite group,
//! so claims like "these five classes generate the same mod-2 image as the
//! reference set" reduce to subgroup membership. This module provides a
//! base-and-strong-generating-set (BSGS) engine for subgroups of
//! `GL(n, 2)` acting on the nonzero vectors of `F_2^n`:
//!
//! * matrices are bit-packed (one `u32` per row), so a matrix-vector
//!   product is a handful of word operations;
//! * orbits are stored as flat Schreier vectors indexed by the vector's
//!   bit pattern, packing `(generator, parent)` into a `u32`;
//! * membership is decided by sifting: positive answers come with an
//!   explicit factorization of the element into transversal elements, so
//!   they are certificates regardless of how the BSGS was built;
//! * the BSGS itself is grown by randomized Schreier–Sims (a product
//!   replacement sampler feeding the sifter until 64 consecutive random
//!   elements sift through), then certified by deterministic Schreier
//!   generator closure — eagerly in small dimensions, and lazily before
//!   trusting any negative answer in large ones. Negative answers are
//!   therefore certificates too.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::homrep::{Mat, F2};

/// Largest dimension the orbit tables accept (`2^n` slots per level).
pub const MAX_DIM: usize = 20;

/// Dimension above which the deterministic Schreier closure is run lazily
/// (only before reporting a non-membership) instead of at construction.
const EAGER_VERIFY_DIM: usize = 8;

/// Errors from the group engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    /// Matrices of different dimensions were mixed.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A generator (or a matrix to invert) is singular.
    #[error("singular matrix where an invertible one is required")]
    SingularMatrix,
    /// The dimension exceeds what the orbit tables support.
    #[error("dimension {n} exceeds the supported maximum {MAX_DIM}")]
    TooLarge { n: usize },
}

/// A square matrix over GF(2), one `u32` bitmask per row (bit `j` of row
/// `i` is the entry at `(i, j)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMat {
    n: usize,
    rows: Vec<u32>,
}

impl BitMat {
    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        BitMat {
            n,
            rows: (0..n).map(|i| 1 << i).collect(),
        }
    }

    /// Packs a dense mod-2 matrix.
    pub fn from_f2(m: &Mat<F2>) -> Result<Self, GroupError> {
        let n = m.dim();
        if n > 32 {
            return Err(GroupError::TooLarge { n });
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| m.entry(i, j).0 == 1)
                    .fold(0u32, |acc, j| acc | (1 << j))
            })
            .collect();
        Ok(BitMat { n, rows })
    }

    /// The dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The entry at `(i, j)` as 0/1.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        ((self.rows[i] >> j) & 1) as u8
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &BitMat) -> BitMat {
        debug_assert_eq!(self.n, rhs.n);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u32;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BitMat { n: self.n, rows }
    }

    /// Applies the matrix to a column vector packed as a bitmask
    /// (bit `j` is coordinate `j`).
    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0u32;
        for (i, &r) in self.rows.iter().enumerate() {
            out |= ((r & v).count_ones() & 1) << i;
        }
        out
    }

    /// The inverse, by Gauss–Jordan elimination on `[self | I]`.
    pub fn inverse(&self) -> Result<BitMat, GroupError> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&row| (a[row] >> col) & 1 == 1)
                .ok_or(GroupError::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for row in 0..n {
                if row != col && (a[row] >> col) & 1 == 1 {
                    a[row] ^= a[col];
                    inv[row] ^= inv[col];
                }
            }
        }
        Ok(BitMat { n, rows: inv })
    }
}

impl fmt::Display for BitMat {
    /// Rows as little-endian hex masks, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.n.div_ceil(4);
        let mut first = true;
        for &r in &self.rows {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{r:0width$x}")?;
            first = false;
        }
        Ok(())
    }
}

/// `|GL(n, 2)| = prod_{i<n} (2^n - 2^i)`.
pub fn gl_f2_order(n: usize) -> BigUint {
    let two_n = BigUint::one() << n;
    let mut order = BigUint::one();
    for i in 0..n {
        order *= &two_n - (BigUint::one() << i);
    }
    order
}

const UNSEEN: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;
const PARENT_BITS: u32 = 20;
const PARENT_MASK: u32 = (1 << PARENT_BITS) - 1;

/// One stabilizer level: a base vector with the Schreier vector of its
/// orbit under the generators still applicable at this depth.
struct Level {
    /// The base vector (a nonzero bit pattern).
    base: u32,
    /// Schreier vector: for each vector `v`, either `UNSEEN`, `ROOT`
    /// (`v` is the base), or `(gen_index << PARENT_BITS) | parent`.
    tree: Vec<u32>,
    /// Orbit members in discovery order (doubles as the BFS queue).
    points: Vec<u32>,
}

impl Level {
    fn new(n: usize, base: u32) -> Self {
        let mut tree = vec![UNSEEN; 1usize << n];
        tree[base as usize] = ROOT;
        Level {
            base,
            tree,
            points: vec![base],
        }
    }
}

/// A base and strong generating set for a subgroup of `GL(n, 2)`.
pub struct Bsgs {
    n: usize,
    levels: Vec<Level>,
    /// All strong generators, with inverses; `fix_depth[k]` counts how many
    /// leading base points generator `k` fixes (it participates in the
    /// orbit of every level `<= fix_depth[k]`).
    sgens: Vec<BitMat>,
    sinvs: Vec<BitMat>,
    fix_depth: Vec<usize>,
    /// Whether the deterministic Schreier closure has certified the chain.
    verified: bool,
}

/// Builds a BSGS for the group generated by `gens`, using the default
/// sampler seed. Verdicts do not depend on the seed: memberships carry
/// explicit factorizations and non-memberships are only reported after the
/// deterministic closure has certified the chain.
pub fn schreier_sims(n: usize, gens: &[BitMat]) -> Result<Bsgs, GroupError> {
    schreier_sims_seeded(n, gens, 0)
}

/// [`schreier_sims`] with an explicit sampler seed.
pub fn schreier_sims_seeded(n: usize, gens: &[BitMat], seed: u64) -> Result<Bsgs, GroupError> {
    if n > MAX_DIM {
        return Err(GroupError::TooLarge { n });
    }
    let mut b = Bsgs {
        n,
        levels: Vec::new(),
        sgens: Vec::new(),
        sinvs: Vec::new(),
        fix_depth: Vec::new(),
        verified: false,
    };
    let mut live: Vec<BitMat> = Vec::new();
    for g in gens {
        if g.dim() != n {
            return Err(GroupError::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
        g.inverse()?; // generators must be invertible
        if !g.is_identity() {
            live.push(g.clone());
        }
    }
    for g in &live {
        b.insert_element(g.clone());
    }
    if !live.is_empty() {
        let mut pool = Pool::new(&live, seed);
        let mut consecutive = 0u32;
        while consecutive < 64 {
            let x = pool.sample();
            if b.insert_element(x) {
                consecutive = 0;
            } else {
                consecutive += 1;
            }
        }
    }
    if n <= EAGER_VERIFY_DIM {
        b.verify_complete();
    }
    Ok(b)
}

/// Product-replacement sampler over the generating set.
struct Pool {
    elems: Vec<BitMat>,
    rng: ChaCha8Rng,
}

impl Pool {
    fn new(gens: &[BitMat], seed: u64) -> Self {
        let k = gens.len().max(8) + 2;
        let elems = (0..k).map(|i| gens[i % gens.len()].clone()).collect();
        let mut pool = Pool {
            elems,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..50 {
            pool.sample();
        }
        pool
    }

    fn sample(&mut self) -> BitMat {
        let k = self.elems.len();
        let i = self.rng.gen_range(0..k);
        let mut j = self.rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let rhs = if self.rng.gen_bool(0.5) {
            self.elems[j].clone()
        } else {
            // Inverses exist: pool elements are products of the (checked)
            // generators.
            self.elems[j].inverse().expect("pool element invertible")
        };
        let next = if self.rng.gen_bool(0.5) {
            self.elems[i].mul(&rhs)
        } else {
            rhs.mul(&self.elems[i])
        };
        self.elems[i] = next;
        self.elems[i].clone()
    }
}

impl Bsgs {
    /// The dimension of the matrices.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The base vectors, in chain order.
    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// The group order: the product of the orbit sizes along the chain.
    pub fn order(&self) -> BigUint {
        let mut o = BigUint::one();
        for level in &self.levels {
            o *= BigUint::from(level.points.len());
        }
        o
    }

    /// Decides membership. A `true` is backed by a factorization into
    /// transversal elements; a `false` is only reported after the chain
    /// has been certified complete.
    pub fn contains(&mut self, m: &BitMat) -> Result<bool, GroupError> {
        Ok(self.witness(m)?.is_some())
    }

    /// Membership with certificate: transversal elements whose product is
    /// `m` (empty for the identity), or `None` if `m` is not in the group.
    pub fn witness(&mut self, m: &BitMat) -> Result<Option<Vec<BitMat>>, GroupError> {
        if m.dim() != self.n {
            return Err(GroupError::DimensionMismatch {
                expected: self.n,
                got: m.dim(),
            });
        }
        if let Some(w) = self.try_witness(m) {
            return Ok(Some(w));
        }
        if !self.verified {
            // Certify the chain before trusting the negative.
            self.verify_complete();
            if let Some(w) = self.try_witness(m) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    fn try_witness(&self, m: &BitMat) -> Option<Vec<BitMat>> {
        let (rest, factors) = self.strip(m.clone(), true);
        if rest.is_identity() {
            let mut w = factors.expect("collected");
            w.retain(|u| !u.is_identity());
            Some(w)
        } else {
            None
        }
    }

    /// Sifts `m` down the chain; returns the residue and, on request, the
    /// transversal factors peeled off (so `m = factors_0 ··· factors_k ·
    /// residue`).
    fn strip(&self, mut m: BitMat, collect: bool) -> (BitMat, Option<Vec<BitMat>>) {
        let mut factors = collect.then(Vec::new);
        for level in &self.levels {
            let v = m.apply(level.base);
            if v == level.base && level.tree[v as usize] == ROOT {
                if let Some(f) = factors.as_mut() {
                    f.push(BitMat::identity(self.n));
                }
                continue;
            }
            if level.tree[v as usize] == UNSEEN {
                return (m, factors);
            }
            let mut u = collect.then(|| BitMat::identity(self.n));
            let mut w = v;
            while level.tree[w as usize] != ROOT {
                let packed = level.tree[w as usize];
                let k = (packed >> PARENT_BITS) as usize;
                let parent = packed & PARENT_MASK;
                m = self.sinvs[k].mul(&m);
                if let Some(acc) = u.as_mut() {
                    *acc = acc.mul(&self.sgens[k]);
                }
                w = parent;
            }
            debug_assert_eq!(m.apply(level.base), level.base);
            if let (Some(f), Some(acc)) = (factors.as_mut(), u) {
                f.push(acc);
            }
        }
        (m, factors)
    }

    /// Number of leading base points `m` fixes before first escaping the
    /// current chain (or the chain length if it sifts through).
    fn strip_level(&self, m: BitMat) -> (usize, BitMat) {
        let mut m = m;
        for (idx, level) in self.levels.iter().enumerate() {
            let v = m.apply(level.base);
            if level.tree[v as usize] == UNSEEN {
                return (idx, m);
            }
            let mut w = v;
            while level.tree[w as usize] != ROOT {
                let packed = level.tree[w as usize];
                let k = (packed >> PARENT_BITS) as usize;
                m = self.sinvs[k].mul(&m);
                w = level.tree[w as usize] & PARENT_MASK;
            }
        }
        (self.levels.len(), m)
    }

    /// Sifts an element and, if a nontrivial residue remains, installs it
    /// as a strong generator (creating a new level when it fixes every
    /// existing base point). Returns whether the chain grew.
    fn insert_element(&mut self, m: BitMat) -> bool {
        let (depth, residue) = self.strip_level(m);
        if residue.is_identity() {
            return false;
        }
        if depth == self.levels.len() {
            // The residue fixes all current base points: base on the first
            // standard basis vector it moves.
            let moved = (0..self.n)
                .map(|j| 1u32 << j)
                .find(|&e| residue.apply(e) != e)
                .expect("a non-identity matrix moves a basis vector");
            self.levels.push(Level::new(self.n, moved));
        }
        let inv = residue.inverse().expect("strong generators are invertible");
        let k = self.sgens.len();
        assert!(k < (1 << (32 - PARENT_BITS)) - 1, "generator index overflow");
        self.sgens.push(residue);
        self.sinvs.push(inv);
        self.fix_depth.push(depth);
        for lvl in 0..=depth.min(self.levels.len() - 1) {
            self.extend_orbit(lvl, k);
        }
        true
    }

    /// Grows the orbit at `lvl` after strong generator `new_gen` joined:
    /// old points are expanded with the new generator only, then fresh
    /// points breadth-first with every applicable generator.
    fn extend_orbit(&mut self, lvl: usize, new_gen: usize) {
        let applicable: Vec<usize> = (0..self.sgens.len())
            .filter(|&k| self.fix_depth[k] >= lvl)
            .collect();
        let level = &mut self.levels[lvl];
        let old_len = level.points.len();
        for idx in 0..old_len {
            let v = level.points[idx];
            let nv = self.sgens[new_gen].apply(v);
            if level.tree[nv as usize] == UNSEEN {
                level.tree[nv as usize] = ((new_gen as u32) << PARENT_BITS) | v;
                level.points.push(nv);
            }
        }
        let mut next = old_len;
        while next < level.points.len() {
            let v = level.points[next];
            next += 1;
            for &k in &applicable {
                let nv = self.sgens[k].apply(v);
                if level.tree[nv as usize] == UNSEEN {
                    level.tree[nv as usize] = ((k as u32) << PARENT_BITS) | v;
                    level.points.push(nv);
                }
            }
        }
    }

    /// Transversal element for orbit point `v` at `lvl` (the product of
    /// tree-edge generators mapping the base to `v`).
    fn transversal(&self, lvl: usize, v: u32) -> BitMat {
        let level = &self.levels[lvl];
        let mut path = Vec::new();
        let mut w = v;
        while level.tree[w as usize] != ROOT {
            let packed = level.tree[w as usize];
            path.push((packed >> PARENT_BITS) as usize);
            w = packed & PARENT_MASK;
        }
        let mut u = BitMat::identity(self.n);
        for &k in &path {
            u = u.mul(&self.sgens[k]);
        }
        u
    }

    /// Deterministic Schreier generator closure: processes every Schreier
    /// generator of every level, inserting any that fail to sift, until a
    /// full pass adds nothing. Afterwards the chain provably satisfies the
    /// strong generation property, so sifting decides membership.
    fn verify_complete(&mut self) {
        if self.verified {
            return;
        }
        'restart: loop {
            for lvl in (0..self.levels.len()).rev() {
                let point_count = self.levels[lvl].points.len();
                for pi in 0..point_count {
                    let v = self.levels[lvl].points[pi];
                    let gen_count = self.sgens.len();
                    for k in 0..gen_count {
                        if self.fix_depth[k] < lvl {
                            continue;
                        }
                        let gv = self.sgens[k].apply(v);
                        let packed = self.levels[lvl].tree[gv as usize];
                        if packed != ROOT && packed == ((k as u32) << PARENT_BITS) | v {
                            continue; // tree edge: the Schreier generator is trivial
                        }
                        let u_v = self.transversal(lvl, v);
                        let u_gv = self.transversal(lvl, gv);
                        let s = u_gv
                            .inverse()
                            .expect("transversals are invertible")
                            .mul(&self.sgens[k])
                            .mul(&u_v);
                        if self.insert_element(s) {
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
        self.verified = true;
    }
}

/// Whether two generating sets generate the same subgroup of `GL(n, 2)`.
/// Positive answers rest on mutual sift certificates (every generator of
/// each group factors through the other's chain).
pub fn same_subgroup(
    a: &mut Bsgs,
    a_gens: &[BitMat],
    b: &mut Bsgs,
    b_gens: &[BitMat],
) -> Result<bool, GroupError> {
    for g in b_gens {
        if !a.contains(g)? {
            return Ok(false);
        }
    }
    for g in a_gens {
        if !b.contains(g)? {
            return Ok(false);
        }
    }
    Ok(a.order() == b.order())
}
