//! Barycentric subdivision.
//!
//! Objects of `Sd(C)` are the non-degenerate chains of `C`; a morphism
//! `f → g` is a class of order-preserving injections `α` with `g∘α = f`,
//! where `α ∼ β` is generated by "the part of `g` between `α(i)` and
//! `β(i)` is an identity for every `i`".

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::euler::NFiltration;
use crate::fincat::{identity_label, is_acyclic, CategoryError, FinCat, MorId, Morphism, ObjId};
use crate::nerve::{max_nondegenerate_length, nondegenerate_chains, Chain, MaxLength};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdError {
    #[error("category is not acyclic, so its subdivision is infinite")]
    NotAcyclic,
    #[error("composition of injection classes is not well defined")]
    IllDefinedComposition,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// One morphism class of `Sd(C)`: the injections are positions in the
/// target chain, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdMorphismClass {
    pub representative: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct SdCategory {
    pub category: FinCat,
    /// The subdivided category.
    pub base: FinCat,
    /// The chain of the base category behind each object.
    pub chains: Vec<Chain>,
    /// Chain length per object (the length filtration).
    pub level: Vec<usize>,
    /// Representative injection per morphism.
    pub injections: Vec<Vec<usize>>,
    /// Every member of each morphism class.
    pub class_members: Vec<Vec<Vec<usize>>>,
    /// `Some(K)` when only chains of length `≤ K` are kept.
    pub truncated: Option<usize>,
    index: HashMap<Chain, ObjId>,
    class_of: HashMap<(ObjId, Vec<usize>), MorId>,
}

impl SdCategory {
    pub fn object_of(&self, chain: &Chain) -> Option<ObjId> {
        self.index.get(chain).copied()
    }

    /// The morphism into `target` whose class contains the injection `positions`.
    pub fn morphism_of(&self, target: ObjId, positions: &[usize]) -> Option<MorId> {
        self.class_of.get(&(target, positions.to_vec())).copied()
    }

    pub fn injection(&self, f: MorId) -> &[usize] {
        &self.injections[f.0]
    }
}

/// Strictly increasing sequences `[p] → [q]`, in lexicographic order.
pub fn injections(p: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, next: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let remaining = len - cur.len();
        for v in next..=q + 1 - remaining {
            cur.push(v);
            go(len, v + 1, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= q {
        go(p + 1, 0, q, &mut Vec::with_capacity(p + 1), &mut out);
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// The generating relation: `g` is an identity between `α(i)` and `β(i)` for all `i`.
fn related(c: &FinCat, g: &Chain, a: &[usize], b: &[usize]) -> bool {
    a.iter()
        .zip(b)
        .all(|(&i, &j)| c.is_identity(g.composite(c, i.min(j), i.max(j))))
}

/// Partitions injections (all into the same chain `g`) by the transitive
/// closure of the generating relation. Classes come out ordered by their
/// least member; members are sorted.
fn quotient(c: &FinCat, g: &Chain, mut maps: Vec<Vec<usize>>) -> Vec<SdMorphismClass> {
    maps.sort();
    let mut parent: Vec<usize> = (0..maps.len()).collect();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if related(c, g, &maps[i], &maps[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for (i, m) in maps.into_iter().enumerate() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(m);
    }
    classes
        .into_values()
        .map(|members| SdMorphismClass {
            representative: members[0].clone(),
            members,
        })
        .collect()
}

/// `Hom_Sd(f, g)` as injection classes with canonical representatives.
pub fn hom_sd(c: &FinCat, f: &Chain, g: &Chain) -> Vec<SdMorphismClass> {
    let valid: Vec<Vec<usize>> = injections(f.len(), g.len())
        .into_iter()
        .filter(|a| g.restrict(c, a) == *f)
        .collect();
    quotient(c, g, valid)
}

pub fn sd(c: &FinCat) -> Result<SdCategory, SdError> {
    sd_with(c, None, false)
}

/// Full subcategory of `Sd(C)` on chains of length `≤ k`.
pub fn sd_truncated(c: &FinCat, k: usize) -> Result<SdCategory, SdError> {
    sd_with(c, Some(k), false)
}

/// General constructor. `max_level = None` requires an acyclic input;
/// `ascii` selects `<…>` instead of `⟨…⟩` in labels.
pub fn sd_with(c: &FinCat, max_level: Option<usize>, ascii: bool) -> Result<SdCategory, SdError> {
    let acyclic = is_acyclic(c);
    let top = match (max_level, max_nondegenerate_length(c)) {
        (None, MaxLength::Finite(m)) if acyclic => m,
        (None, _) => return Err(SdError::NotAcyclic),
        (Some(k), MaxLength::Finite(m)) => k.min(m),
        (Some(k), MaxLength::Infinite) => k,
    };

    let mut chains = Vec::new();
    let mut level = Vec::new();
    for n in 0..=top {
        if c.num_objects() == 0 {
            break;
        }
        for ch in nondegenerate_chains(c, n).chains {
            chains.push(ch);
            level.push(n);
        }
    }
    let index: HashMap<Chain, ObjId> = chains
        .iter()
        .enumerate()
        .map(|(i, ch)| (ch.clone(), ObjId(i)))
        .collect();
    let labels: Vec<String> = chains.iter().map(|ch| ch.label(c, ascii)).collect();

    // (source, target) → injections, then classes
    let mut entries: Vec<(usize, usize, SdMorphismClass)> = Vec::new();
    for (t, g) in chains.iter().enumerate() {
        let q = g.len();
        let mut buckets: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for mask in 1u64..(1u64 << (q + 1)) {
            let ps: Vec<usize> = (0..=q).filter(|&i| mask >> i & 1 == 1).collect();
            let r = g.restrict(c, &ps);
            if r.is_nondegenerate(c) {
                let s = index[&r].0;
                buckets.entry(s).or_default().push(ps);
            }
        }
        for (s, maps) in buckets {
            if acyclic {
                // distinct positions of an acyclic chain carry distinct objects
                debug_assert_eq!(maps.len(), 1, "non-trivial class in an acyclic subdivision");
                entries.push((
                    s,
                    t,
                    SdMorphismClass {
                        representative: maps[0].clone(),
                        members: maps,
                    },
                ));
            } else {
                for class in quotient(c, g, maps) {
                    entries.push((s, t, class));
                }
            }
        }
    }
    entries.sort_by(|a, b| (a.0, a.1, &a.2.representative).cmp(&(b.0, b.1, &b.2.representative)));

    let mut class_of: HashMap<(ObjId, Vec<usize>), MorId> = HashMap::new();
    let mut morphisms = Vec::with_capacity(entries.len());
    let mut injections_out = Vec::with_capacity(entries.len());
    let mut members_out = Vec::with_capacity(entries.len());
    for (i, (s, t, class)) in entries.into_iter().enumerate() {
        let is_identity = s == t;
        let label = if is_identity {
            identity_label(&labels[t])
        } else {
            let ps: Vec<String> = class.representative.iter().map(usize::to_string).collect();
            format!("{}[{}]", labels[t], ps.join(","))
        };
        morphisms.push(Morphism {
            label,
            dom: ObjId(s),
            cod: ObjId(t),
            is_identity,
        });
        for m in &class.members {
            class_of.insert((ObjId(t), m.clone()), MorId(i));
        }
        injections_out.push(class.representative);
        members_out.push(class.members);
    }

    let compose_maps = |outer: &[usize], inner: &[usize]| -> Vec<usize> {
        inner.iter().map(|&i| outer[i]).collect()
    };
    let mut ill_defined = false;
    let category = FinCat::assemble(labels, morphisms.clone(), true, |g, f| {
        let t = morphisms[g.0].cod;
        let h = class_of[&(t, compose_maps(&injections_out[g.0], &injections_out[f.0]))];
        if !acyclic {
            for bm in &members_out[g.0] {
                for am in &members_out[f.0] {
                    if class_of.get(&(t, compose_maps(bm, am))) != Some(&h) {
                        ill_defined = true;
                    }
                }
            }
        }
        Ok(h)
    })?;
    if ill_defined {
        return Err(SdError::IllDefinedComposition);
    }
    Ok(SdCategory {
        category,
        base: c.clone(),
        chains,
        level,
        injections: injections_out,
        class_members: members_out,
        truncated: max_level,
        index,
        class_of,
    })
}

/// `L(f) = n` for `f ∈ N̄_n`.
pub fn length_filtration(s: &SdCategory) -> NFiltration {
    NFiltration(s.level.iter().map(|&l| l as u64).collect())
}
