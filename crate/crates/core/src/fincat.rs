//! Validated finite categories.
//!
//! A [`FinCat`] is immutable once built. Objects and morphisms are addressed
//! by dense indices ([`ObjId`], [`MorId`]) and every enumeration runs in
//! index order, so all downstream output is deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use thiserror::Error;

use crate::exactalg::{rat, Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub label: String,
    pub dom: ObjId,
    pub cod: ObjId,
    pub is_identity: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("missing composite for {outer}∘{inner}")]
    MissingComposite { outer: String, inner: String },
    #[error("composition is not associative: ({h}∘{g})∘{f} ≠ {h}∘({g}∘{f})")]
    NonAssociative { h: String, g: String, f: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("reference to unknown {kind} {name:?}")]
    DanglingReference { kind: &'static str, name: String },
    #[error("composite {outer}∘{inner} = {result} has the wrong domain or codomain")]
    CompositeTypeMismatch {
        outer: String,
        inner: String,
        result: String,
    },
    #[error("{outer} and {inner} are not composable")]
    NotComposable { outer: String, inner: String },
    #[error("conflicting composites given for {outer}∘{inner}")]
    ConflictingComposite { outer: String, inner: String },
    #[error("composite {outer}∘{inner} violates the unit law")]
    UnitLawViolation { outer: String, inner: String },
    #[error("object {0:?} does not have exactly one identity")]
    BadIdentity(String),
    #[error("relation contains a cycle through {0:?}")]
    CyclicRelation(String),
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
}

/// A finite category with a total composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    incoming: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    in_pos: Vec<usize>,
    /// `table[g][in_pos[f]] = g∘f` for every `f` with `cod f = dom g`.
    table: Vec<Vec<MorId>>,
}

impl FinCat {
    /// Assembles and validates a category from indexed parts.
    ///
    /// `morphisms` must contain exactly one identity per object. Unit-law
    /// composites are filled in here; `composite` is asked only for pairs
    /// of non-identity morphisms.
    pub(crate) fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        check_associativity: bool,
        mut composite: impl FnMut(MorId, MorId) -> Result<MorId, CategoryError>,
    ) -> Result<FinCat, CategoryError> {
        let mut seen = HashSet::new();
        for label in objects.iter().chain(morphisms.iter().map(|m| &m.label)) {
            if !seen.insert(label.as_str()) {
                return Err(CategoryError::DuplicateLabel(label.clone()));
            }
        }
        let n = objects.len();
        let mut identities: Vec<Option<MorId>> = vec![None; n];
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        let mut in_pos = Vec::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            if m.dom.0 >= n || m.cod.0 >= n {
                return Err(CategoryError::DanglingReference {
                    kind: "object",
                    name: m.label.clone(),
                });
            }
            if m.is_identity {
                if m.dom != m.cod || identities[m.dom.0].is_some() {
                    return Err(CategoryError::BadIdentity(objects[m.dom.0].clone()));
                }
                identities[m.dom.0] = Some(MorId(i));
            }
            in_pos.push(incoming[m.cod.0].len());
            incoming[m.cod.0].push(MorId(i));
            outgoing[m.dom.0].push(MorId(i));
        }
        let identities = identities
            .into_iter()
            .enumerate()
            .map(|(x, id)| id.ok_or_else(|| CategoryError::BadIdentity(objects[x].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let mut table = Vec::with_capacity(morphisms.len());
        for (gi, g) in morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(incoming[g.dom.0].len());
            for &f in &incoming[g.dom.0] {
                let fm = &morphisms[f.0];
                let h = if g.is_identity {
                    f
                } else if fm.is_identity {
                    MorId(gi)
                } else {
                    let h = composite(MorId(gi), f)?;
                    let hm =
                        morphisms
                            .get(h.0)
                            .ok_or_else(|| CategoryError::DanglingReference {
                                kind: "morphism",
                                name: format!("#{}", h.0),
                            })?;
                    if hm.dom != fm.dom || hm.cod != g.cod {
                        return Err(CategoryError::CompositeTypeMismatch {
                            outer: g.label.clone(),
                            inner: fm.label.clone(),
                            result: hm.label.clone(),
                        });
                    }
                    h
                };
                row.push(h);
            }
            table.push(row);
        }

        let cat = FinCat {
            objects,
            morphisms,
            identities,
            incoming,
            outgoing,
            in_pos,
            table,
        };
        if check_associativity {
            cat.check_associativity()?;
        }
        Ok(cat)
    }

    /// Exhaustive associativity check over all composable triples.
    pub fn check_associativity(&self) -> Result<(), CategoryError> {
        for f in self.morphism_ids() {
            for &g in &self.outgoing[self.cod(f).0] {
                let gf = self.compose_unchecked(g, f);
                for &h in &self.outgoing[self.cod(g).0] {
                    let left = self.compose_unchecked(self.compose_unchecked(h, g), f);
                    let right = self.compose_unchecked(h, gf);
                    if left != right {
                        return Err(CategoryError::NonAssociative {
                            h: self.label(h).to_string(),
                            g: self.label(g).to_string(),
                            f: self.label(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn object_label(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjId> {
        self.objects.iter().position(|l| l == label).map(ObjId)
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MorId> {
        self.morphisms
            .iter()
            .position(|m| m.label == label)
            .map(MorId)
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn label(&self, f: MorId) -> &str {
        &self.morphisms[f.0].label
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].cod
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.morphisms[f.0].is_identity
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    /// Morphisms out of `x`, in index order.
    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.outgoing[x.0]
    }

    /// Morphisms into `x`, in index order.
    pub fn incoming(&self, x: ObjId) -> &[MorId] {
        &self.incoming[x.0]
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.outgoing[x.0]
            .iter()
            .copied()
            .filter(move |&f| self.cod(f) == y)
    }

    /// `g∘f`, or `None` when `cod f ≠ dom g`.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        (self.cod(f) == self.dom(g)).then(|| self.compose_unchecked(g, f))
    }

    pub(crate) fn compose_unchecked(&self, g: MorId, f: MorId) -> MorId {
        self.table[g.0][self.in_pos[f.0]]
    }

    /// Objects in a topological order of the graph of non-identity
    /// morphisms (smallest index first among ready objects), or `None` if
    /// that graph has a cycle through distinct objects.
    pub fn topological_order(&self) -> Option<Vec<ObjId>> {
        let n = self.num_objects();
        let mut indegree = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let mut targets: Vec<usize> = self.outgoing[x]
                .iter()
                .map(|&f| self.cod(f).0)
                .filter(|&y| y != x)
                .collect();
            targets.sort_unstable();
            targets.dedup();
            for &y in &targets {
                indegree[y] += 1;
            }
            succ[x] = targets;
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&x| indegree[x] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(x)) = ready.pop() {
            order.push(ObjId(x));
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(Reverse(y));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Square matrix of hom-set sizes, `entry(i, j) = #Hom(x_i, x_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl NatMatrix {
    pub fn from_rows(rows: &[&[u64]]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "NatMatrix must be square"
        );
        NatMatrix {
            n,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        NatMatrix {
            n,
            entries: (0..n * n).map(|k| self.get(k % n, k / n)).collect(),
        }
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        Matrix::from_fn(self.n, self.n, |i, j| rat(self.get(i, j)))
    }

    /// `Z − E`: counts of non-identity morphisms.
    pub fn minus_identity(&self) -> Vec<Vec<u64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) - u64::from(i == j))
                    .collect()
            })
            .collect()
    }
}

pub fn incidence_matrix(c: &FinCat) -> NatMatrix {
    let n = c.num_objects();
    let mut entries = vec![0u64; n * n];
    for f in c.morphism_ids() {
        entries[c.dom(f).0 * n + c.cod(f).0] += 1;
    }
    NatMatrix { n, entries }
}

/// Every endomorphism is an identity and no two distinct objects have
/// morphisms both ways (directly or through a longer cycle).
pub fn is_acyclic(c: &FinCat) -> bool {
    let only_identity_endos = c
        .morphism_ids()
        .all(|f| c.dom(f) != c.cod(f) || c.is_identity(f));
    only_identity_endos && c.topological_order().is_some()
}

pub fn opposite(c: &FinCat) -> FinCat {
    let morphisms = c
        .morphisms
        .iter()
        .map(|m| Morphism {
            label: m.label.clone(),
            dom: m.cod,
            cod: m.dom,
            is_identity: m.is_identity,
        })
        .collect();
    FinCat::assemble(c.objects.clone(), morphisms, false, |g, f| {
        Ok(c.compose_unchecked(f, g))
    })
    .expect("opposite of a valid category is valid")
}

/// Name of the identity on an object in the text formats.
pub fn identity_label(object: &str) -> String {
    format!("id_{object}")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawMorphism {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// `outer∘inner = result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawComposite {
    pub outer: String,
    pub inner: String,
    pub result: String,
}

/// Unvalidated category description. Identities are implicit and named
/// `id_<object>`; only non-identity products need composites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub composition: Vec<RawComposite>,
}

/// Validates a raw description. Objects and morphisms are indexed in
/// lexicographic label order.
pub fn build_category(raw: &RawCategory) -> Result<FinCat, CategoryError> {
    let mut objects = raw.objects.clone();
    objects.sort();
    if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
        return Err(CategoryError::DuplicateLabel(w[0].clone()));
    }
    let obj_index: HashMap<&str, ObjId> = objects
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), ObjId(i)))
        .collect();
    let lookup_obj = |name: &str| {
        obj_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::DanglingReference {
                kind: "object",
                name: name.to_string(),
            })
    };

    let mut entries: Vec<Morphism> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism {
            label: identity_label(o),
            dom: ObjId(i),
            cod: ObjId(i),
            is_identity: true,
        })
        .collect();
    for m in &raw.morphisms {
        entries.push(Morphism {
            label: m.name.clone(),
            dom: lookup_obj(&m.dom)?,
            cod: lookup_obj(&m.cod)?,
            is_identity: false,
        });
    }
    entries.sort_by(|a, b| a.label.cmp(&b.label));
    if let Some(w) = entries.windows(2).find(|w| w[0].label == w[1].label) {
        return Err(CategoryError::DuplicateLabel(w[0].label.clone()));
    }
    let mor_index: HashMap<&str, MorId> = entries
        .iter()
        .enumerate()
        .map(|(i, m)| (m.label.as_str(), MorId(i)))
        .collect();
    let lookup_mor = |name: &str| {
        mor_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::DanglingReference {
                kind: "morphism",
                name: name.to_string(),
            })
    };

    let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
    for c in &raw.composition {
        let (g, f, h) = (
            lookup_mor(&c.outer)?,
            lookup_mor(&c.inner)?,
            lookup_mor(&c.result)?,
        );
        let (gm, fm) = (&entries[g.0], &entries[f.0]);
        if fm.cod != gm.dom {
            return Err(CategoryError::NotComposable {
                outer: c.outer.clone(),
                inner: c.inner.clone(),
            });
        }
        if (gm.is_identity && h != f) || (fm.is_identity && h != g) {
            return Err(CategoryError::UnitLawViolation {
                outer: c.outer.clone(),
                inner: c.inner.clone(),
            });
        }
        if table.insert((g, f), h).is_some_and(|prev| prev != h) {
            return Err(CategoryError::ConflictingComposite {
                outer: c.outer.clone(),
                inner: c.inner.clone(),
            });
        }
    }
    let labels: Vec<String> = entries.iter().map(|m| m.label.clone()).collect();
    FinCat::assemble(objects, entries, true, |g, f| {
        table
            .get(&(g, f))
            .copied()
            .ok_or_else(|| CategoryError::MissingComposite {
                outer: labels[g.0].clone(),
                inner: labels[f.0].clone(),
            })
    })
}

/// The poset generated by `covers` (pairs `lesser < greater`) as a category
/// with one morphism `x → y` per `x ≤ y`. Objects keep the order of `elements`.
pub fn from_poset(
    elements: &[String],
    covers: &[(String, String)],
) -> Result<FinCat, CategoryError> {
    let n = elements.len();
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(CategoryError::DuplicateLabel(e.clone()));
        }
    }
    let idx = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::DanglingReference {
                kind: "element",
                name: name.to_string(),
            })
    };
    let mut succ = vec![Vec::new(); n];
    for (a, b) in covers {
        let (i, j) = (idx(a)?, idx(b)?);
        if i == j {
            return Err(CategoryError::CyclicRelation(a.clone()));
        }
        succ[i].push(j);
    }
    // reflexive-transitive closure by DFS from every element
    let mut leq = vec![vec![false; n]; n];
    for (s, row) in leq.iter_mut().enumerate() {
        let mut stack = vec![s];
        row[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &succ[x] {
                if y == s {
                    return Err(CategoryError::CyclicRelation(elements[s].clone()));
                }
                if !row[y] {
                    row[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_of = HashMap::new();
    for (i, row) in leq.iter().enumerate() {
        for (j, &le) in row.iter().enumerate() {
            if le {
                mor_of.insert((i, j), MorId(morphisms.len()));
                morphisms.push(Morphism {
                    label: if i == j {
                        identity_label(&elements[i])
                    } else {
                        format!("{}<{}", elements[i], elements[j])
                    },
                    dom: ObjId(i),
                    cod: ObjId(j),
                    is_identity: i == j,
                });
            }
        }
    }
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.dom.0, m.cod.0)).collect();
    FinCat::assemble(elements.to_vec(), morphisms, true, |g, f| {
        Ok(mor_of[&(ends[f.0].0, ends[g.0].1)])
    })
}

/// One-object category whose endomorphisms are the monoid elements;
/// `g∘f` is the product `g·f`. `table` maps `(a, b)` to `a·b`; products
/// involving the unit may be omitted.
pub fn from_monoid(
    elements: &[String],
    unit: &str,
    table: &BTreeMap<(String, String), String>,
) -> Result<FinCat, CategoryError> {
    let not_monoid = |msg: String| CategoryError::NotAMonoid(msg);
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(CategoryError::DuplicateLabel(e.clone()));
        }
    }
    let unit_idx = *index
        .get(unit)
        .ok_or_else(|| not_monoid(format!("unit {unit:?} is not an element")))?;
    let n = elements.len();
    let mut mul = vec![vec![usize::MAX; n]; n];
    for ((a, b), c) in table {
        let (&i, &j, &k) = match (
            index.get(a.as_str()),
            index.get(b.as_str()),
            index.get(c.as_str()),
        ) {
            (Some(i), Some(j), Some(k)) => (i, j, k),
            _ => return Err(not_monoid(format!("unknown element in {a}·{b}={c}"))),
        };
        mul[i][j] = k;
    }
    for i in 0..n {
        for (a, b) in [(unit_idx, i), (i, unit_idx)] {
            match mul[a][b] {
                usize::MAX => mul[a][b] = i,
                k if k != i => {
                    return Err(not_monoid(format!("unit law fails for {}", elements[i])))
                }
                _ => {}
            }
        }
    }
    for (i, row) in mul.iter().enumerate() {
        if let Some(j) = row.iter().position(|&k| k == usize::MAX) {
            return Err(not_monoid(format!(
                "missing product {}·{}",
                elements[i], elements[j]
            )));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    return Err(not_monoid(format!(
                        "({0}·{1})·{2} ≠ {0}·({1}·{2})",
                        elements[a], elements[b], elements[c]
                    )));
                }
            }
        }
    }
    // the unit becomes the identity morphism, index 0
    let mut order = vec![unit_idx];
    order.extend((0..n).filter(|&i| i != unit_idx));
    let mut position = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    let morphisms = order
        .iter()
        .map(|&i| Morphism {
            label: if i == unit_idx {
                identity_label("*")
            } else {
                elements[i].clone()
            },
            dom: ObjId(0),
            cod: ObjId(0),
            is_identity: i == unit_idx,
        })
        .collect();
    FinCat::assemble(vec!["*".to_string()], morphisms, true, |g, f| {
        Ok(MorId(position[mul[order[g.0]][order[f.0]]]))
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// The chain poset `[n]` on elements `0..=n`.
    pub fn chain(n: usize) -> FinCat {
        let el: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> =
            (0..n).map(|i| (el[i].clone(), el[i + 1].clone())).collect();
        from_poset(&el, &covers).unwrap()
    }

    pub fn discrete(k: usize) -> FinCat {
        let el: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        from_poset(&el, &[]).unwrap()
    }

    /// `{0, 1}` under `1 + 1 = 1` with unit 0.
    pub fn monoid_m() -> FinCat {
        let mut t = BTreeMap::new();
        t.insert(("1".to_string(), "1".to_string()), "1".to_string());
        from_monoid(&strings(&["0", "1"]), "0", &t).unwrap()
    }

    pub fn z2() -> FinCat {
        let mut t = BTreeMap::new();
        t.insert(("a".to_string(), "a".to_string()), "e".to_string());
        from_monoid(&strings(&["e", "a"]), "e", &t).unwrap()
    }

    /// Two objects with an isomorphism between them.
    pub fn iso_pair() -> FinCat {
        let raw = RawCategory {
            objects: strings(&["a", "b"]),
            morphisms: vec![
                RawMorphism {
                    name: "f".into(),
                    dom: "a".into(),
                    cod: "b".into(),
                },
                RawMorphism {
                    name: "g".into(),
                    dom: "b".into(),
                    cod: "a".into(),
                },
            ],
            composition: vec![
                RawComposite {
                    outer: "g".into(),
                    inner: "f".into(),
                    result: "id_a".into(),
                },
                RawComposite {
                    outer: "f".into(),
                    inner: "g".into(),
                    result: "id_b".into(),
                },
            ],
        };
        build_category(&raw).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn one_mor(name: &str, dom: &str, cod: &str) -> RawMorphism {
        RawMorphism {
            name: name.into(),
            dom: dom.into(),
            cod: cod.into(),
        }
    }

    fn comp(outer: &str, inner: &str, result: &str) -> RawComposite {
        RawComposite {
            outer: outer.into(),
            inner: inner.into(),
            result: result.into(),
        }
    }

    #[test]
    fn identity_only_category() {
        let raw = RawCategory {
            objects: strings(&["a"]),
            ..Default::default()
        };
        let c = build_category(&raw).unwrap();
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 1);
        assert!(c.is_identity(MorId(0)));
    }

    #[test]
    fn monoid_m_from_raw() {
        let raw = RawCategory {
            objects: strings(&["*"]),
            morphisms: vec![one_mor("m", "*", "*")],
            composition: vec![comp("m", "m", "m")],
        };
        let c = build_category(&raw).unwrap();
        assert_eq!(c.num_morphisms(), 2);
        let m = c.morphism_by_label("m").unwrap();
        assert_eq!(c.compose(m, m), Some(m));
        assert_eq!(incidence_matrix(&c), NatMatrix::from_rows(&[&[2]]));
    }

    #[test]
    fn broken_associativity_is_reported() {
        // (b∘b)∘a = a∘a = b but b∘(b∘a) = b∘b = a
        let raw = RawCategory {
            objects: strings(&["*"]),
            morphisms: vec![one_mor("a", "*", "*"), one_mor("b", "*", "*")],
            composition: vec![
                comp("a", "a", "b"),
                comp("a", "b", "b"),
                comp("b", "a", "b"),
                comp("b", "b", "a"),
            ],
        };
        // brute-force oracle: find a failing triple directly from the table
        let table: HashMap<(&str, &str), &str> = raw
            .composition
            .iter()
            .map(|c| ((c.outer.as_str(), c.inner.as_str()), c.result.as_str()))
            .collect();
        let names = ["a", "b"];
        let failing = names.iter().any(|h| {
            names.iter().any(|g| {
                names
                    .iter()
                    .any(|f| table[&(table[&(*h, *g)], *f)] != table[&(*h, table[&(*g, *f)])])
            })
        });
        assert!(failing);
        match build_category(&raw) {
            Err(CategoryError::NonAssociative { h, g, f }) => {
                let (h, g, f) = (h.as_str(), g.as_str(), f.as_str());
                assert_ne!(table[&(table[&(h, g)], f)], table[&(h, table[&(g, f)])]);
            }
            other => panic!("expected NonAssociative, got {other:?}"),
        }
    }

    #[test]
    fn build_errors() {
        let dup = RawCategory {
            objects: strings(&["a", "a"]),
            ..Default::default()
        };
        assert!(matches!(
            build_category(&dup),
            Err(CategoryError::DuplicateLabel(_))
        ));
        let dangling = RawCategory {
            objects: strings(&["a"]),
            morphisms: vec![one_mor("f", "a", "z")],
            ..Default::default()
        };
        assert!(matches!(
            build_category(&dangling),
            Err(CategoryError::DanglingReference { .. })
        ));
        let missing = RawCategory {
            objects: strings(&["a"]),
            morphisms: vec![one_mor("f", "a", "a")],
            ..Default::default()
        };
        assert!(matches!(
            build_category(&missing),
            Err(CategoryError::MissingComposite { .. })
        ));
        let reserved = RawCategory {
            objects: strings(&["a"]),
            morphisms: vec![one_mor("id_a", "a", "a")],
            ..Default::default()
        };
        assert!(matches!(
            build_category(&reserved),
            Err(CategoryError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn poset_examples() {
        let c1 = chain(1);
        assert_eq!((c1.num_objects(), c1.num_morphisms()), (2, 3));
        let c2 = chain(2);
        // brute force: pairs x <= y in a 3-chain
        let pairs = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .filter(|(x, y)| x <= y)
            .count();
        assert_eq!(c2.num_morphisms(), pairs);
        assert_eq!(pairs, 6);
        let cyc = from_poset(
            &strings(&["0", "1"]),
            &[("0".into(), "1".into()), ("1".into(), "0".into())],
        );
        assert!(matches!(cyc, Err(CategoryError::CyclicRelation(_))));
    }

    #[test]
    fn monoid_examples() {
        let m = monoid_m();
        assert_eq!(incidence_matrix(&m), NatMatrix::from_rows(&[&[2]]));
        let trivial = from_monoid(&strings(&["e"]), "e", &BTreeMap::new()).unwrap();
        assert_eq!(trivial.num_morphisms(), 1);
        let z2 = z2();
        assert_eq!(z2.num_morphisms(), 2);
        // brute-force check of the group axioms on the resulting table
        for f in z2.morphism_ids() {
            for g in z2.morphism_ids() {
                for h in z2.morphism_ids() {
                    let l = z2.compose(z2.compose(h, g).unwrap(), f).unwrap();
                    let r = z2.compose(h, z2.compose(g, f).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
        let a = z2.morphism_by_label("a").unwrap();
        assert!(z2.is_identity(z2.compose(a, a).unwrap()));
        let mut bad = BTreeMap::new();
        bad.insert(("a".to_string(), "a".to_string()), "b".to_string());
        assert!(matches!(
            from_monoid(&strings(&["e", "a"]), "e", &bad),
            Err(CategoryError::NotAMonoid(_))
        ));
    }

    #[test]
    fn opposite_examples() {
        let d = discrete(3);
        assert_eq!(opposite(&d), d);
        let c1 = chain(1);
        let op = opposite(&c1);
        assert_eq!(incidence_matrix(&op), incidence_matrix(&c1).transpose());
        assert_eq!(opposite(&op), c1);
        let m = monoid_m();
        assert_eq!(opposite(&m), m);
    }

    #[test]
    fn acyclicity() {
        assert!(is_acyclic(&chain(2)));
        assert!(!is_acyclic(&monoid_m()));
        assert!(!is_acyclic(&iso_pair()));
        assert_eq!(iso_pair().num_morphisms(), 4);
        assert!(is_acyclic(&discrete(0)));
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(
            incidence_matrix(&chain(1)),
            NatMatrix::from_rows(&[&[1, 1], &[0, 1]])
        );
        assert_eq!(
            incidence_matrix(&discrete(3)),
            NatMatrix::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(incidence_matrix(&discrete(0)).size(), 0);
    }
}
