//! Non-degenerate nerves: direct enumeration, counting, and the
//! incidence-matrix oracle.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::fincat::{incidence_matrix, FinCat, MorId, ObjId};

/// A composable chain `x_0 → x_1 → … → x_n`. For `n = 0` it is just `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: ObjId,
    pub steps: Vec<MorId>,
}

impl Chain {
    pub fn object(x: ObjId) -> Self {
        Chain {
            start: x,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self, c: &FinCat) -> ObjId {
        self.steps.last().map_or(self.start, |&f| c.cod(f))
    }

    /// `x_0, …, x_n`.
    pub fn objects(&self, c: &FinCat) -> Vec<ObjId> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start);
        out.extend(self.steps.iter().map(|&f| c.cod(f)));
        out
    }

    pub fn is_nondegenerate(&self, c: &FinCat) -> bool {
        self.steps.iter().all(|&f| !c.is_identity(f))
    }

    /// The composite `x_i → x_j` for `i ≤ j`; the identity when `i = j`.
    pub fn composite(&self, c: &FinCat, i: usize, j: usize) -> MorId {
        assert!(i <= j && j <= self.len());
        let start = if i == 0 {
            self.start
        } else {
            c.cod(self.steps[i - 1])
        };
        self.steps[i..j]
            .iter()
            .fold(c.identity(start), |acc, &f| c.compose_unchecked(f, acc))
    }

    /// The chain through the positions `ps` (strictly increasing, non-empty).
    /// May be degenerate.
    pub fn restrict(&self, c: &FinCat, ps: &[usize]) -> Chain {
        let start = self.objects(c)[ps[0]];
        Chain {
            start,
            steps: ps
                .windows(2)
                .map(|w| self.composite(c, w[0], w[1]))
                .collect(),
        }
    }

    /// `⟨x⟩` for a 0-chain, `⟨f1;f2;…⟩` otherwise; `<…>` when `ascii`.
    pub fn label(&self, c: &FinCat, ascii: bool) -> String {
        let (l, r) = if ascii { ("<", ">") } else { ("⟨", "⟩") };
        let body = if self.steps.is_empty() {
            c.object_label(self.start).to_string()
        } else {
            self.steps
                .iter()
                .map(|&f| c.label(f))
                .collect::<Vec<_>>()
                .join(";")
        };
        format!("{l}{body}{r}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveLevel {
    pub n: usize,
    pub chains: Vec<Chain>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

fn extend(c: &FinCat, n: usize, prefix: &mut Vec<MorId>, start: ObjId, out: &mut Vec<Chain>) {
    if prefix.len() == n {
        out.push(Chain {
            start,
            steps: prefix.clone(),
        });
        return;
    }
    let at = prefix.last().map_or(start, |&f| c.cod(f));
    for &f in c.outgoing(at) {
        if !c.is_identity(f) {
            prefix.push(f);
            extend(c, n, prefix, start, out);
            prefix.pop();
        }
    }
}

/// `N̄_n(C)` in lexicographic order of step indices (objects for `n = 0`).
pub fn nondegenerate_chains(c: &FinCat, n: usize) -> NerveLevel {
    let mut chains = Vec::new();
    if n == 0 {
        chains.extend(c.object_ids().map(Chain::object));
    } else {
        let mut prefix = Vec::with_capacity(n);
        for f in c.morphism_ids().filter(|&f| !c.is_identity(f)) {
            prefix.push(f);
            extend(c, n, &mut prefix, c.dom(f), &mut chains);
            prefix.pop();
        }
    }
    NerveLevel { n, chains }
}

/// `#N̄_n(C)` by walking every chain depth-first without storing it.
pub fn count_nondegenerate_by_enumeration(c: &FinCat, n: usize) -> BigUint {
    fn walk(c: &FinCat, at: ObjId, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        c.outgoing(at)
            .iter()
            .filter(|&&f| !c.is_identity(f))
            .map(|&f| walk(c, c.cod(f), left - 1))
            .sum()
    }
    c.object_ids().map(|x| BigUint::from(walk(c, x, n))).sum()
}

pub fn chains_ending_at(c: &FinCat, n: usize, y: ObjId) -> NerveLevel {
    let mut level = nondegenerate_chains(c, n);
    level.chains.retain(|ch| ch.end(c) == y);
    level
}

/// Sum of the entries of `(Z − E)^n`, by explicit integer matrix powers.
pub fn count_nondegenerate_by_matrix(c: &FinCat, n: usize) -> BigUint {
    let size = c.num_objects();
    let base: Vec<Vec<BigUint>> = incidence_matrix(c)
        .minus_identity()
        .into_iter()
        .map(|row| row.into_iter().map(BigUint::from).collect())
        .collect();
    let mut power: Vec<Vec<BigUint>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        BigUint::one()
                    } else {
                        BigUint::zero()
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..n {
        power = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| (0..size).map(|k| &power[i][k] * &base[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    power.iter().flatten().sum()
}

/// `#N̄_n(C)_y` for every object `y`, by dynamic programming over levels.
pub fn counts_by_end(c: &FinCat, n: usize) -> Vec<BigUint> {
    let mut cnt = vec![BigUint::one(); c.num_objects()];
    for _ in 0..n {
        cnt = step_counts(c, &cnt);
    }
    cnt
}

fn step_counts(c: &FinCat, prev: &[BigUint]) -> Vec<BigUint> {
    let mut next = vec![BigUint::zero(); c.num_objects()];
    for f in c.morphism_ids().filter(|&f| !c.is_identity(f)) {
        if !prev[c.dom(f).0].is_zero() {
            next[c.cod(f).0] += &prev[c.dom(f).0];
        }
    }
    next
}

/// `#N̄_0, …, #N̄_max`.
pub fn level_counts(c: &FinCat, max: usize) -> Vec<BigUint> {
    let mut cnt = vec![BigUint::one(); c.num_objects()];
    let mut out = Vec::with_capacity(max + 1);
    for n in 0..=max {
        if n > 0 {
            cnt = step_counts(c, &cnt);
        }
        out.push(cnt.iter().sum());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxLength {
    Finite(usize),
    Infinite,
}

/// Largest `n` with `N̄_n ≠ ∅`, or `Infinite` when `Z − E` is not nilpotent.
///
/// `(Z − E)^k = 0` iff its entry sum is 0 (entries are non-negative), and a
/// nilpotent matrix of size `d` has `(Z − E)^d = 0`.
pub fn max_nondegenerate_length(c: &FinCat) -> MaxLength {
    let d = c.num_objects();
    if d == 0 {
        return MaxLength::Finite(0);
    }
    let mut cnt = vec![BigUint::one(); d];
    for k in 1..=d {
        cnt = step_counts(c, &cnt);
        if cnt.iter().all(Zero::is_zero) {
            return MaxLength::Finite(k - 1);
        }
    }
    MaxLength::Infinite
}

/// Level counts up to the maximal length, for categories with finite nerve.
pub fn finite_level_counts(c: &FinCat) -> Option<Vec<BigUint>> {
    match max_nondegenerate_length(c) {
        MaxLength::Finite(m) => Some(level_counts(c, m)),
        MaxLength::Infinite => None,
    }
}
