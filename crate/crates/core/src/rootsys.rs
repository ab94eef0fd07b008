//! Classical root systems, Weyl groups and Levi subalgebras.
//!
//! Weyl groups are realized as signed permutations of the standard coordinates
//! (plain permutations of `n + 1` coordinates in type A) and enumerated
//! breadth-first from the simple reflections. Normalizer quotients
//! `N_W(W_L)/W_L` are found by brute force over the whole group and recorded by
//! their action on the block coordinates of the center `z(l)`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::OrbitLabel;
use crate::partition::{partitions_of, Partition};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    /// Orthogonal families (B, D) use the orthogonal parity rule on partitions.
    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::B | Family::D)
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        }
    }
}

/// A classical simple type `X_n`.
///
/// Public construction goes through [`ClassicalType::new`], which rejects the
/// low ranks isogenous to other types. Levi tails may be of any rank (including
/// `D_2`, `D_3` and the rank-zero algebras); those are built internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassicalType {
    pub family: Family,
    pub rank: u32,
}

impl ClassicalType {
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        let min = match family {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
        };
        if rank < min {
            return Err(Error::InvalidType(format!(
                "{}{} is excluded (rank must be at least {min})",
                family.letter(),
                rank
            )));
        }
        Ok(ClassicalType { family, rank })
    }

    /// Tail type of a Levi subalgebra; no rank restriction.
    pub(crate) fn tail(family: Family, rank: u32) -> Self {
        ClassicalType { family, rank }
    }

    /// Dimension of the natural module.
    pub fn natural_dim(&self) -> u32 {
        match self.family {
            Family::A => self.rank + 1,
            Family::B => 2 * self.rank + 1,
            Family::C | Family::D => 2 * self.rank,
        }
    }

    /// Number of standard coordinates (`n + 1` in type A).
    pub fn coord_count(&self) -> usize {
        match self.family {
            Family::A => self.rank as usize + 1,
            _ => self.rank as usize,
        }
    }

    pub fn lie_dim(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => (n + 1) * (n + 1) - 1,
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n).saturating_sub(1),
        }
    }

    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => {
                if n == 0 {
                    1
                } else {
                    (1u64 << (n - 1)) * fact(n)
                }
            }
        }
    }
}

impl fmt::Display for ClassicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for ClassicalType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') | Some('F') | Some('G') => {
                return Err(Error::InvalidType(format!("exceptional type {s} is not supported")))
            }
            _ => return Err(Error::InvalidType(format!("unknown family in {s:?}"))),
        };
        let rank: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(format!("bad rank in {s:?}")))?;
        ClassicalType::new(family, rank)
    }
}

/// A root system in the standard coordinate realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub ty: ClassicalType,
    pub roots: Vec<Vec<i32>>,
    pub simple_roots: Vec<Vec<i32>>,
}

fn unit(dim: usize, i: usize, c: i32) -> Vec<i32> {
    let mut v = vec![0; dim];
    v[i] = c;
    v
}

fn pair(dim: usize, i: usize, a: i32, j: usize, b: i32) -> Vec<i32> {
    let mut v = vec![0; dim];
    v[i] += a;
    v[j] += b;
    v
}

/// Roots of the given type on `coords` (a subset of `0..dim`).
fn roots_on(family: Family, coords: &[usize], dim: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for (x, &i) in coords.iter().enumerate() {
        for &j in &coords[x + 1..] {
            out.push(pair(dim, i, 1, j, -1));
            out.push(pair(dim, i, -1, j, 1));
            if family != Family::A {
                out.push(pair(dim, i, 1, j, 1));
                out.push(pair(dim, i, -1, j, -1));
            }
        }
        match family {
            Family::B => {
                out.push(unit(dim, i, 1));
                out.push(unit(dim, i, -1));
            }
            Family::C => {
                out.push(unit(dim, i, 2));
                out.push(unit(dim, i, -2));
            }
            _ => {}
        }
    }
    out
}

pub fn build_root_system(ty: ClassicalType) -> Result<RootSystem> {
    let ty = ClassicalType::new(ty.family, ty.rank)?;
    Ok(root_system_unchecked(ty))
}

pub(crate) fn root_system_unchecked(ty: ClassicalType) -> RootSystem {
    let dim = ty.coord_count();
    let coords: Vec<usize> = (0..dim).collect();
    let mut roots = roots_on(ty.family, &coords, dim);
    roots.sort();
    let n = ty.rank as usize;
    let mut simple: Vec<Vec<i32>> = Vec::new();
    match ty.family {
        Family::A => {
            for i in 0..n {
                simple.push(pair(dim, i, 1, i + 1, -1));
            }
        }
        _ => {
            for i in 0..n.saturating_sub(1) {
                simple.push(pair(dim, i, 1, i + 1, -1));
            }
            match ty.family {
                Family::B if n >= 1 => simple.push(unit(dim, n - 1, 1)),
                Family::C if n >= 1 => simple.push(unit(dim, n - 1, 2)),
                Family::D if n >= 2 => simple.push(pair(dim, n - 2, 1, n - 1, 1)),
                _ => {}
            }
        }
    }
    RootSystem { ty, roots, simple_roots: simple }
}

/// `w(e_p) = sign[p] * e_{perm[p]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    pub perm: Vec<u8>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { perm: (0..n as u8).collect(), sign: vec![1; n] }
    }

    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        let mut out = vec![0; v.len()];
        for (p, &x) in v.iter().enumerate() {
            out[self.perm[p] as usize] = self.sign[p] as i32 * x;
        }
        out
    }

    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0); v.len()];
        for (p, x) in v.iter().enumerate() {
            out[self.perm[p] as usize] = *x * self.sign[p] as i64;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.perm.len();
        let mut perm = vec![0u8; n];
        let mut sign = vec![1i8; n];
        for p in 0..n {
            let q = other.perm[p] as usize;
            perm[p] = self.perm[q];
            sign[p] = other.sign[p] * self.sign[q];
        }
        SignedPerm { perm, sign }
    }

    /// The reflection in the hyperplane orthogonal to `root`.
    pub fn reflection(root: &[i32]) -> SignedPerm {
        let n = root.len();
        let mut w = SignedPerm::identity(n);
        let nz: Vec<usize> = (0..n).filter(|&i| root[i] != 0).collect();
        match nz.as_slice() {
            [i] => w.sign[*i] = -1,
            [i, j] => {
                let same = root[*i].signum() == root[*j].signum();
                w.perm[*i] = *j as u8;
                w.perm[*j] = *i as u8;
                if same {
                    w.sign[*i] = -1;
                    w.sign[*j] = -1;
                }
            }
            _ => {}
        }
        w
    }

    pub fn negative_count_on(&self, coords: &[usize]) -> usize {
        coords.iter().filter(|&&p| self.sign[p] < 0).count()
    }
}

static ENUMERATION_CAP: AtomicU64 = AtomicU64::new(645_120);

/// Sets the largest Weyl group order that may be enumerated.
pub fn set_enumeration_cap(cap: u64) {
    ENUMERATION_CAP.store(cap, Ordering::SeqCst);
}

pub fn enumeration_cap() -> u64 {
    ENUMERATION_CAP.load(Ordering::SeqCst)
}

static WEYL_CACHE: Lazy<Mutex<HashMap<ClassicalType, Arc<Vec<SignedPerm>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// All Weyl group elements, breadth-first from the simple reflections.
pub fn weyl_group(ty: ClassicalType) -> Result<Arc<Vec<SignedPerm>>> {
    let order = ty.weyl_order();
    let cap = enumeration_cap();
    if order > cap {
        return Err(Error::Resource { requested: order, cap });
    }
    if let Some(w) = WEYL_CACHE.lock().unwrap().get(&ty) {
        return Ok(w.clone());
    }
    let rs = root_system_unchecked(ty);
    let gens: Vec<SignedPerm> = rs.simple_roots.iter().map(|r| SignedPerm::reflection(r)).collect();
    let id = SignedPerm::identity(ty.coord_count());
    let mut seen: HashSet<SignedPerm> = HashSet::new();
    let mut out = Vec::with_capacity(order as usize);
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let nw = g.compose(&w);
            if seen.insert(nw.clone()) {
                queue.push_back(nw);
            }
        }
        out.push(w);
    }
    if out.len() as u64 != order {
        return Err(Error::Internal(format!(
            "enumerated {} elements of W({ty}), expected {order}",
            out.len()
        )));
    }
    let arc = Arc::new(out);
    WEYL_CACHE.lock().unwrap().insert(ty, arc.clone());
    Ok(arc)
}

/// Which of the two classes of a type-D Levi with only even gl blocks and no tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DClass {
    /// Root subsystem contains the fork root `e_{n-1} - e_n`.
    Plus,
    /// Root subsystem contains the fork root `e_{n-1} + e_n`.
    Minus,
}

/// A Levi subalgebra up to conjugacy: `gl(a_1) x ... x gl(a_k) x g(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviLabel {
    pub blocks: Vec<u32>,
    pub tail_rank: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_class: Option<DClass>,
}

/// Explicit coordinates of a Levi: blocks as `(coordinate, sign)` lists, then the tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviRealization {
    pub blocks: Vec<Vec<(usize, i8)>>,
    pub tail: Vec<usize>,
}

impl LeviLabel {
    pub fn new(mut blocks: Vec<u32>, tail_rank: u32, d_class: Option<DClass>) -> Self {
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        LeviLabel { blocks, tail_rank, d_class }
    }

    pub fn full(ty: ClassicalType) -> Self {
        match ty.family {
            Family::A => LeviLabel::new(vec![ty.rank + 1], 0, None),
            _ => LeviLabel::new(vec![], ty.rank, None),
        }
    }

    pub fn cartan(ty: ClassicalType) -> Self {
        match ty.family {
            Family::A => LeviLabel::new(vec![1; ty.rank as usize + 1], 0, None),
            Family::D if ty.rank == 1 => LeviLabel::full(ty),
            _ => LeviLabel::new(vec![1; ty.rank as usize], 0, None),
        }
    }

    pub fn validate(&self, ty: ClassicalType) -> Result<()> {
        let total: u32 = self.blocks.iter().sum::<u32>() + self.tail_rank;
        let expect = match ty.family {
            Family::A => ty.rank + 1,
            _ => ty.rank,
        };
        if total != expect {
            return Err(Error::InvalidDatum(format!(
                "levi blocks {:?} + tail {} do not fill {ty}",
                self.blocks, self.tail_rank
            )));
        }
        if self.blocks.iter().any(|&b| b == 0) || self.blocks.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDatum("levi blocks must be positive and decreasing".into()));
        }
        if ty.family == Family::A && self.tail_rank != 0 {
            return Err(Error::InvalidDatum("type A levis have no tail".into()));
        }
        if ty.family == Family::D && self.tail_rank == 1 && ty.rank != 1 {
            return Err(Error::InvalidDatum("type D levi tails of rank 1 are tori; use a gl(1) block".into()));
        }
        let needs_class = ty.family == Family::D
            && self.tail_rank == 0
            && !self.blocks.is_empty()
            && self.blocks.iter().all(|b| b % 2 == 0);
        if needs_class != self.d_class.is_some() {
            return Err(Error::InvalidDatum(if needs_class {
                "type D levi with even blocks and no tail needs a plus/minus class".into()
            } else {
                "plus/minus class only applies to type D levis with even blocks and no tail".into()
            }));
        }
        Ok(())
    }

    pub fn is_full(&self, ty: ClassicalType) -> bool {
        *self == LeviLabel::full(ty)
    }

    /// Dimension of the center `z(l)` (one coordinate per block, minus the trace in type A).
    pub fn center_dim(&self, ty: ClassicalType) -> u32 {
        match ty.family {
            Family::A => self.blocks.len() as u32 - 1,
            _ => self.blocks.len() as u32,
        }
    }

    pub fn tail_type(&self, ty: ClassicalType) -> Option<ClassicalType> {
        match ty.family {
            Family::A => None,
            f => Some(ClassicalType::tail(f, self.tail_rank)),
        }
    }

    pub fn dim(&self, ty: ClassicalType) -> u64 {
        let gl: u64 = self.blocks.iter().map(|&a| (a as u64) * (a as u64)).sum();
        match ty.family {
            Family::A => gl - 1,
            f => gl + ClassicalType::tail(f, self.tail_rank).lie_dim(),
        }
    }

    /// Standard realization: blocks on consecutive coordinates, tail on the last `m`.
    /// The minus class flips the sign of the last coordinate.
    pub fn realization(&self, ty: ClassicalType) -> LeviRealization {
        let mut next = 0usize;
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            blocks.push((next..next + a as usize).map(|p| (p, 1i8)).collect::<Vec<_>>());
            next += a as usize;
        }
        let tail: Vec<usize> = (next..next + self.tail_rank as usize).collect();
        if self.d_class == Some(DClass::Minus) {
            if let Some(last) = blocks.last_mut().and_then(|b| b.last_mut()) {
                last.1 = -1;
            }
        }
        let _ = ty;
        LeviRealization { blocks, tail }
    }

    pub fn root_subsystem(&self, ty: ClassicalType) -> BTreeSet<Vec<i32>> {
        realization_roots(ty, &self.realization(ty))
    }
}

impl fmt::Display for LeviLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ";m={})", self.tail_rank)?;
        match self.d_class {
            Some(DClass::Plus) => write!(f, "+"),
            Some(DClass::Minus) => write!(f, "-"),
            None => Ok(()),
        }
    }
}

impl LeviLabel {
    /// Parses `(2,1;m=1)`, `(2,2;m=0)-` or, in type A, `(2,1)`, and validates it
    /// against `ty`.
    pub fn parse(ty: ClassicalType, text: &str) -> Result<Self> {
        let s = text.trim();
        let syntax = |message: String| Error::Syntax { column: 0, message };
        let (body, class) = match s.strip_suffix('+') {
            Some(b) => (b, Some(DClass::Plus)),
            None => match s.strip_suffix('-') {
                Some(b) => (b, Some(DClass::Minus)),
                None => (s, None),
            },
        };
        let body = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| syntax(format!("expected a Levi like (2,1;m=1), found {s:?}")))?;
        let (blocks, tail) = match body.split_once(';') {
            Some((b, t)) => {
                let t = t.trim();
                let m = t.strip_prefix("m=").unwrap_or(t);
                (b, m.trim().parse::<u32>().map_err(|_| syntax(format!("bad tail rank {t:?}")))?)
            }
            None => (body, 0),
        };
        let blocks = blocks
            .split(',')
            .map(str::trim)
            .filter(|b| !b.is_empty())
            .map(|b| b.parse::<u32>().map_err(|_| syntax(format!("bad block size {b:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let levi = LeviLabel::new(blocks, tail, class);
        levi.validate(ty)?;
        Ok(levi)
    }
}

pub(crate) fn realization_roots(ty: ClassicalType, r: &LeviRealization) -> BTreeSet<Vec<i32>> {
    let dim = ty.coord_count();
    let mut out = BTreeSet::new();
    for block in &r.blocks {
        for (x, &(i, si)) in block.iter().enumerate() {
            for &(j, sj) in &block[x + 1..] {
                out.insert(pair(dim, i, si as i32, j, -(sj as i32)));
                out.insert(pair(dim, i, -(si as i32), j, sj as i32));
            }
        }
    }
    if ty.family != Family::A {
        for root in roots_on(ty.family, &r.tail, dim) {
            out.insert(root);
        }
    }
    out
}

fn levi_sort_key(ty: ClassicalType, l: &LeviLabel) -> (std::cmp::Reverse<u64>, std::cmp::Reverse<u32>, std::cmp::Reverse<Vec<u32>>, Option<DClass>) {
    (
        std::cmp::Reverse(l.dim(ty)),
        std::cmp::Reverse(l.tail_rank),
        std::cmp::Reverse(l.blocks.clone()),
        l.d_class,
    )
}

/// One representative per conjugacy class of Levi subalgebras.
pub fn enumerate_levis(ty: ClassicalType) -> Vec<LeviLabel> {
    let mut out = Vec::new();
    match ty.family {
        Family::A => {
            for p in partitions_of(ty.rank + 1) {
                out.push(LeviLabel::new(p.into_vec(), 0, None));
            }
        }
        Family::B | Family::C => {
            for m in 0..=ty.rank {
                for p in partitions_of(ty.rank - m) {
                    out.push(LeviLabel::new(p.into_vec(), m, None));
                }
            }
        }
        Family::D => {
            if ty.rank == 1 {
                out.push(LeviLabel::full(ty));
            } else {
                for m in 0..=ty.rank {
                    if m == 1 {
                        continue;
                    }
                    for p in partitions_of(ty.rank - m) {
                        let v = p.into_vec();
                        if m == 0 && !v.is_empty() && v.iter().all(|b| b % 2 == 0) {
                            out.push(LeviLabel::new(v.clone(), 0, Some(DClass::Plus)));
                            out.push(LeviLabel::new(v, 0, Some(DClass::Minus)));
                        } else {
                            out.push(LeviLabel::new(v, m, None));
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|l| levi_sort_key(ty, l));
    out
}

/// Proper Levis that are maximal: exactly one gl block in types B/C/D, two in type A.
pub fn maximal_levis(ty: ClassicalType) -> Vec<LeviLabel> {
    let want = if ty.family == Family::A { 2 } else { 1 };
    enumerate_levis(ty).into_iter().filter(|l| l.blocks.len() == want).collect()
}

/// A coset of `W_L` in `N_W(W_L)`, recorded by its action on block coordinates.
///
/// Block `i` goes to block `perm[i]` with sign `sign[i]`. `tail_odd` is set when
/// the coset acts on a type-D tail by an odd number of sign changes, i.e. by the
/// outer automorphism of the tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockAction {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
    pub tail_odd: bool,
}

impl BlockAction {
    pub fn identity(k: usize) -> Self {
        BlockAction { perm: (0..k).collect(), sign: vec![1; k], tail_odd: false }
    }

    pub fn apply(&self, xi: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0); xi.len()];
        for (i, x) in xi.iter().enumerate() {
            out[self.perm[i]] = *x * self.sign[i] as i64;
        }
        out
    }

    pub fn compose(&self, other: &BlockAction) -> BlockAction {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut sign = vec![1; k];
        for i in 0..k {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            sign[i] = other.sign[i] * self.sign[j];
        }
        BlockAction { perm, sign, tail_odd: self.tail_odd ^ other.tail_odd }
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let k = self.perm.len();
        let mut m = vec![vec![Rational::from_integer(0); k]; k];
        for i in 0..k {
            m[self.perm[i]][i] = Rational::from_integer(self.sign[i] as i64);
        }
        m
    }

    /// Dimension of the fixed subspace in `z(l)`. With `trace_zero`, the space is
    /// the hyperplane `sum a_i xi_i = 0` of type A.
    pub fn fixed_dim(&self, trace_zero: bool) -> usize {
        let k = self.perm.len();
        let mut seen = vec![false; k];
        let mut fixed = 0usize;
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut i = start;
            let mut s = 1i8;
            loop {
                seen[i] = true;
                s *= self.sign[i];
                i = self.perm[i];
                if i == start {
                    break;
                }
            }
            if s > 0 {
                fixed += 1;
            }
        }
        if trace_zero {
            fixed.saturating_sub(1)
        } else {
            fixed
        }
    }
}

/// A finite group of signed block permutations acting on `z(l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLinearGroup {
    /// Dimension of the acting space.
    pub degree: usize,
    /// Number of block coordinates (`degree + 1` in type A).
    pub coords: usize,
    pub trace_zero: bool,
    pub elements: Vec<BlockAction>,
    pub generators: Vec<BlockAction>,
}

impl FiniteLinearGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_matrices(&self) -> Vec<Vec<Vec<Rational>>> {
        self.generators.iter().map(|g| g.matrix()).collect()
    }

    pub fn contains(&self, g: &BlockAction) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Elements acting as reflections on `z(l)`.
    pub fn reflection_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|g| self.degree > 0 && g.fixed_dim(self.trace_zero) + 1 == self.degree)
            .count()
    }

    fn from_elements(degree: usize, coords: usize, trace_zero: bool, mut elements: Vec<BlockAction>) -> Self {
        elements.sort();
        elements.dedup();
        let generators = pick_generators(coords, &elements);
        FiniteLinearGroup { degree, coords, trace_zero, elements, generators }
    }

    /// Closure of the generators under composition.
    pub fn closure_order(&self) -> usize {
        closure(self.coords, &self.generators).len()
    }
}

fn closure(k: usize, gens: &[BlockAction]) -> HashSet<BlockAction> {
    let id = BlockAction::identity(k);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn pick_generators(k: usize, elements: &[BlockAction]) -> Vec<BlockAction> {
    let mut gens: Vec<BlockAction> = Vec::new();
    let mut span = closure(k, &gens);
    for e in elements {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(e) {
            gens.push(e.clone());
            span = closure(k, &gens);
        }
    }
    gens
}

static NORMALIZER_CACHE: Lazy<Mutex<HashMap<(ClassicalType, LeviLabel), FiniteLinearGroup>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// `N_W(W_L)/W_L` acting on the block coordinates of `z(l)`.
pub fn normalizer_action(rs: &RootSystem, levi: &LeviLabel) -> Result<FiniteLinearGroup> {
    normalizer_for(rs.ty, levi)
}

pub(crate) fn normalizer_for(ty: ClassicalType, levi: &LeviLabel) -> Result<FiniteLinearGroup> {
    levi.validate(ty)?;
    let key = (ty, levi.clone());
    if let Some(g) = NORMALIZER_CACHE.lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let k = levi.blocks.len();
    let real = levi.realization(ty);
    let roots = realization_roots(ty, &real);
    let weyl = weyl_group(ty)?;
    let dim = ty.coord_count();
    // one vector per block: the block's center direction
    let dirs: Vec<Vec<i32>> = real
        .blocks
        .iter()
        .map(|b| {
            let mut v = vec![0; dim];
            for &(p, s) in b {
                v[p] = s as i32;
            }
            v
        })
        .collect();
    let mut actions: HashSet<BlockAction> = HashSet::new();
    for w in weyl.iter() {
        if !roots.iter().all(|r| roots.contains(&w.apply(r))) {
            continue;
        }
        let mut perm = vec![0; k];
        let mut sign = vec![1i8; k];
        for (i, d) in dirs.iter().enumerate() {
            let img = w.apply(d);
            let mut found = false;
            for (j, e) in dirs.iter().enumerate() {
                if img == *e {
                    perm[i] = j;
                    found = true;
                } else if img.iter().zip(e).all(|(a, b)| *a == -*b) {
                    perm[i] = j;
                    sign[i] = -1;
                    found = true;
                }
                if found {
                    break;
                }
            }
            if !found {
                return Err(Error::Internal(format!("normalizer element does not permute the blocks of {levi}")));
            }
        }
        let tail_odd = ty.family == Family::D && w.negative_count_on(&real.tail) % 2 == 1 && !real.tail.is_empty();
        actions.insert(BlockAction { perm, sign, tail_odd });
    }
    let group = FiniteLinearGroup::from_elements(
        levi.center_dim(ty) as usize,
        k,
        ty.family == Family::A,
        actions.into_iter().collect(),
    );
    // Each z(l)-action must come with a single tail parity.
    let mut by_action: HashMap<(Vec<usize>, Vec<i8>), bool> = HashMap::new();
    for e in &group.elements {
        if let Some(prev) = by_action.insert((e.perm.clone(), e.sign.clone()), e.tail_odd) {
            if prev != e.tail_odd {
                return Err(Error::Internal(format!("tail parity not well defined on N_W(W_L)/W_L for {levi}")));
            }
        }
    }
    NORMALIZER_CACHE.lock().unwrap().insert(key, group.clone());
    Ok(group)
}

/// `W(l, O')`: the cosets that preserve the orbit assignment.
///
/// A block may move to another block only if both carry the same gl orbit; sign
/// changes fix gl orbits. In type D a coset acting by the outer automorphism
/// of the tail is dropped when the tail orbit is very even.
pub fn orbit_stabilizer_group(
    action: &FiniteLinearGroup,
    levi: &LeviLabel,
    gl_orbits: &[Partition],
    tail_orbit: Option<&OrbitLabel>,
) -> Result<FiniteLinearGroup> {
    if gl_orbits.len() != levi.blocks.len() {
        return Err(Error::InvalidDatum(format!(
            "{} gl orbits given for {} blocks",
            gl_orbits.len(),
            levi.blocks.len()
        )));
    }
    for (p, &a) in gl_orbits.iter().zip(&levi.blocks) {
        if p.size() != a {
            return Err(Error::InvalidDatum(format!("gl orbit {p} is not a partition of {a}")));
        }
    }
    let tail_very_even = tail_orbit.map(|t| t.is_very_even()).unwrap_or(false);
    let elements: Vec<BlockAction> = action
        .elements
        .iter()
        .filter(|g| (0..g.perm.len()).all(|i| gl_orbits[g.perm[i]] == gl_orbits[i]))
        .filter(|g| !(tail_very_even && g.tail_odd))
        .cloned()
        .collect();
    Ok(FiniteLinearGroup::from_elements(action.degree, action.coords, action.trace_zero, elements))
}

/// Brute-force conjugacy of two root subsystems under `W`.
pub fn subsystems_conjugate(ty: ClassicalType, a: &BTreeSet<Vec<i32>>, b: &BTreeSet<Vec<i32>>) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let weyl = weyl_group(ty)?;
    Ok(weyl.iter().any(|w| a.iter().all(|r| b.contains(&w.apply(r)))))
}

/// Root subsystem generated by a subset of the simple roots.
pub fn simple_subset_subsystem(rs: &RootSystem, subset: &[usize]) -> BTreeSet<Vec<i32>> {
    let gens: Vec<&Vec<i32>> = subset.iter().map(|&i| &rs.simple_roots[i]).collect();
    let refl: Vec<SignedPerm> = gens.iter().map(|r| SignedPerm::reflection(r)).collect();
    let mut out: BTreeSet<Vec<i32>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i32>> = VecDeque::new();
    for g in &gens {
        out.insert((*g).clone());
        queue.push_back((*g).clone());
    }
    while let Some(r) = queue.pop_front() {
        for s in &refl {
            let img = s.apply(&r);
            if out.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    out
}
