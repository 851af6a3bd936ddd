//! Deterministic generators of test categories.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fincat::{
    build_category, from_monoid, from_poset, FinCat, MorId, Morphism, ObjId, RawCategory,
    RawComposite, RawMorphism,
};

#[derive(Clone, Debug)]
pub struct NamedCategory {
    pub id: String,
    pub category: FinCat,
}

fn named(id: String, category: FinCat) -> NamedCategory {
    NamedCategory { id, category }
}

/// Strict order relations on `0..k`, as `[lesser, greater]` pairs in
/// lexicographic order. Enumerates every subset of ordered pairs and keeps
/// the irreflexive, antisymmetric, transitive ones.
pub fn labeled_posets(k: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut lt = vec![vec![false; k]; k];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            lt[i][j] = mask >> b & 1 == 1;
        }
        let antisymmetric = (0..k).all(|i| (0..k).all(|j| !(lt[i][j] && lt[j][i])));
        let transitive =
            (0..k).all(|i| (0..k).all(|j| !lt[i][j] || (0..k).all(|l| !lt[j][l] || lt[i][l])));
        if antisymmetric && transitive {
            let mut rel: Vec<(usize, usize)> =
                pairs.iter().copied().filter(|&(i, j)| lt[i][j]).collect();
            rel.sort();
            out.push(rel);
        }
    }
    out
}

/// Drops every relation implied by two others.
pub fn hasse(k: usize, rel: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut lt = vec![vec![false; k]; k];
    for &(i, j) in rel {
        lt[i][j] = true;
    }
    rel.iter()
        .copied()
        .filter(|&(i, j)| !(0..k).any(|m| lt[i][m] && lt[m][j]))
        .collect()
}

pub fn poset_category(k: usize, rel: &[(usize, usize)]) -> FinCat {
    let el: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let covers: Vec<(String, String)> = hasse(k, rel)
        .into_iter()
        .map(|(i, j)| (el[i].clone(), el[j].clone()))
        .collect();
    from_poset(&el, &covers).expect("generated relations are acyclic")
}

/// Every labeled poset with `1..=max_size` elements.
pub fn posets_exhaustive(max_size: usize) -> Vec<NamedCategory> {
    let mut out = Vec::new();
    for k in 1..=max_size {
        for (i, rel) in labeled_posets(k).iter().enumerate() {
            out.push(named(format!("poset-{k}-{i:04}"), poset_category(k, rel)));
        }
    }
    out
}

/// The chain poset `[n]` on elements `0..=n`, as elements and covers.
pub fn chain_poset(n: usize) -> (Vec<String>, Vec<(String, String)>) {
    let el: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let covers = (0..n).map(|i| (el[i].clone(), el[i + 1].clone())).collect();
    (el, covers)
}

/// A random poset on `n` elements: each `i < j` is a cover candidate with
/// probability 2/5, then reduced to its Hasse diagram.
pub fn random_poset(n: usize, seed: u64) -> (Vec<String>, Vec<(String, String)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let el: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            lt[i][j] = rng.gen_bool(0.4);
        }
    }
    // transitive closure in index order
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][m] && lt[m][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let rel: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| lt[i][j])
        .collect();
    let covers = hasse(n, &rel)
        .into_iter()
        .map(|(i, j)| (el[i].clone(), el[j].clone()))
        .collect();
    (el, covers)
}

/// Edges `(from, to)` of a random DAG on `n` vertices, forward in index
/// order, with multiplicity 0, 1 or 2 per pair.
fn random_dag(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mult = match rng.gen_range(0..10) {
                0..=4 => 0,
                5..=8 => 1,
                _ => 2,
            };
            edges.extend(std::iter::repeat_n((i, j), mult));
        }
    }
    edges
}

fn object_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// The free category on a DAG: morphisms are edge paths, composition is
/// concatenation. A path is labelled by its edges in order, `e0+e3`.
pub fn free_category(n: usize, edges: &[(usize, usize)]) -> FinCat {
    let objects = object_names(n);
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..edges.len()).map(|e| vec![e]).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            let end = edges[*p.last().expect("non-empty")].1;
            for (e, &(a, _)) in edges.iter().enumerate() {
                if a == end {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        paths.append(&mut frontier);
        frontier = next;
    }
    let label = |p: &[usize]| {
        p.iter()
            .map(|e| format!("e{e}"))
            .collect::<Vec<_>>()
            .join("+")
    };
    let raw_morphisms = paths
        .iter()
        .map(|p| RawMorphism {
            name: label(p),
            dom: objects[edges[p[0]].0].clone(),
            cod: objects[edges[*p.last().unwrap()].1].clone(),
        })
        .collect();
    let mut composition = Vec::new();
    for f in &paths {
        for g in &paths {
            if edges[*f.last().unwrap()].1 == edges[g[0]].0 {
                let h: Vec<usize> = f.iter().chain(g).copied().collect();
                composition.push(RawComposite {
                    outer: label(g),
                    inner: label(f),
                    result: label(&h),
                });
            }
        }
    }
    build_category(&RawCategory {
        objects,
        morphisms: raw_morphisms,
        composition,
    })
    .expect("free categories on DAGs are valid")
}

/// Keeps the edges as morphisms but identifies all composites of length
/// `≥ 2` between the same endpoints into one morphism `p<x><y>`.
pub fn collapsed_category(n: usize, edges: &[(usize, usize)]) -> FinCat {
    let objects = object_names(n);
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][m] && reach[m][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    // long[i][j]: a path of length ≥ 2 exists
    let mut long = vec![vec![false; n]; n];
    for &(a, b) in edges {
        for j in 0..n {
            if reach[b][j] {
                long[a][j] = true;
            }
        }
    }
    let mut morphisms: Vec<RawMorphism> = edges
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| RawMorphism {
            name: format!("e{e}"),
            dom: objects[a].clone(),
            cod: objects[b].clone(),
        })
        .collect();
    let endpoints = |name: &str, ms: &[RawMorphism]| {
        let m = ms.iter().find(|m| m.name == name).expect("known");
        (m.dom.clone(), m.cod.clone())
    };
    for i in 0..n {
        for j in 0..n {
            if long[i][j] {
                morphisms.push(RawMorphism {
                    name: format!("p{i}{j}"),
                    dom: objects[i].clone(),
                    cod: objects[j].clone(),
                });
            }
        }
    }
    let mut composition = Vec::new();
    for f in &morphisms {
        for g in &morphisms {
            if f.cod == g.dom {
                let (a, _) = endpoints(&f.name, &morphisms);
                let (_, b) = endpoints(&g.name, &morphisms);
                let (ai, bi) = (
                    objects.iter().position(|o| *o == a).unwrap(),
                    objects.iter().position(|o| *o == b).unwrap(),
                );
                composition.push(RawComposite {
                    outer: g.name.clone(),
                    inner: f.name.clone(),
                    result: format!("p{ai}{bi}"),
                });
            }
        }
    }
    build_category(&RawCategory {
        objects,
        morphisms,
        composition,
    })
    .expect("collapsed categories are valid")
}

/// One random acyclic category on `1..=max_objects` objects: a random DAG
/// turned into its free category, its poset, or its collapsed quotient.
pub fn random_acyclic(rng: &mut ChaCha8Rng, max_objects: usize, kind: usize) -> FinCat {
    let n = rng.gen_range(1..=max_objects);
    let edges = random_dag(rng, n);
    match kind % 3 {
        0 => free_category(n, &edges),
        1 => {
            let mut rel: Vec<(usize, usize)> = edges.clone();
            rel.sort();
            rel.dedup();
            // closure so that `hasse` sees the whole order
            let mut lt = vec![vec![false; n]; n];
            for &(a, b) in &rel {
                lt[a][b] = true;
            }
            for m in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if lt[i][m] && lt[m][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
            let full: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| lt[i][j])
                .collect();
            poset_category(n, &full)
        }
        _ => collapsed_category(n, &edges),
    }
}

pub fn acyclic_random(count: usize, max_objects: usize, seed: u64) -> Vec<NamedCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let kind = ["free", "poset", "collapsed"][i % 3];
            named(
                format!("acyclic-{seed}-{i:03}-{kind}"),
                random_acyclic(&mut rng, max_objects, i),
            )
        })
        .collect()
}

/// Every monoid structure on `{e, a, b, …}` (unit `e`) with `1..=max_size`
/// elements. Isomorphic copies are kept.
pub fn monoids_small(max_size: usize) -> Vec<NamedCategory> {
    let names = ["e", "a", "b", "c"];
    let mut out = Vec::new();
    for size in 1..=max_size {
        let el: Vec<String> = names[..size].iter().map(|s| s.to_string()).collect();
        let k = size - 1;
        let cells = k * k;
        let total = size.pow(cells as u32);
        let mut idx = 0;
        for code in 0..total {
            let mut table = BTreeMap::new();
            for cell in 0..cells {
                let v = code / size.pow(cell as u32) % size;
                let (i, j) = (1 + cell / k, 1 + cell % k);
                table.insert((el[i].clone(), el[j].clone()), el[v].clone());
            }
            if let Ok(c) = from_monoid(&el, "e", &table) {
                out.push(named(format!("monoid-{size}-{idx:02}"), c));
                idx += 1;
            }
        }
    }
    out
}

/// The monoid `{0, 1}` with `1 + 1 = 1`, unit 0, as a document-level table.
pub fn monoid_m_table() -> (Vec<String>, String, BTreeMap<(String, String), String>) {
    let mut t = BTreeMap::new();
    t.insert(("1".to_string(), "1".to_string()), "1".to_string());
    (vec!["0".into(), "1".into()], "0".into(), t)
}

pub fn z2_table() -> (Vec<String>, String, BTreeMap<(String, String), String>) {
    let mut t = BTreeMap::new();
    t.insert(("a".to_string(), "a".to_string()), "e".to_string());
    (vec!["e".into(), "a".into()], "e".into(), t)
}

pub fn monoid_m() -> FinCat {
    let (el, unit, t) = monoid_m_table();
    from_monoid(&el, &unit, &t).expect("M is a monoid")
}

/// Two objects and a pair of mutually inverse morphisms.
pub fn iso_pair() -> FinCat {
    let m = |name: &str, dom: &str, cod: &str| RawMorphism {
        name: name.into(),
        dom: dom.into(),
        cod: cod.into(),
    };
    let c = |outer: &str, inner: &str, result: &str| RawComposite {
        outer: outer.into(),
        inner: inner.into(),
        result: result.into(),
    };
    build_category(&RawCategory {
        objects: vec!["a".into(), "b".into()],
        morphisms: vec![m("f", "a", "b"), m("g", "b", "a")],
        composition: vec![c("g", "f", "id_a"), c("f", "g", "id_b")],
    })
    .expect("iso pair is valid")
}

/// The category of maps between finite sets generated by `generators`
/// (`(dom, cod, values)` with `values[i]` the image of `i`), closed under
/// composition. `None` if the closure exceeds `max_morphisms`.
pub fn concrete_category(
    sizes: &[usize],
    generators: &[(usize, usize, Vec<usize>)],
    max_morphisms: usize,
) -> Option<FinCat> {
    let n = sizes.len();
    let mut maps: Vec<(usize, usize, Vec<usize>)> =
        (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
    let mut seen: HashMap<(usize, usize, Vec<usize>), usize> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    for g in generators {
        assert_eq!(g.2.len(), sizes[g.0]);
        assert!(g.2.iter().all(|&v| v < sizes[g.1]));
        if !seen.contains_key(g) {
            seen.insert(g.clone(), maps.len());
            maps.push(g.clone());
        }
    }
    let mut i = 0;
    while i < maps.len() {
        for j in 0..maps.len() {
            for (f, g) in [(i, j), (j, i)] {
                let (fd, fc, fv) = maps[f].clone();
                let (gd, gc, gv) = maps[g].clone();
                if fc == gd {
                    let h = (fd, gc, fv.iter().map(|&v| gv[v]).collect::<Vec<_>>());
                    if !seen.contains_key(&h) {
                        seen.insert(h.clone(), maps.len());
                        maps.push(h);
                        if maps.len() > max_morphisms {
                            return None;
                        }
                    }
                }
            }
        }
        i += 1;
    }
    let objects: Vec<String> = (0..n).map(|x| format!("s{x}")).collect();
    let morphisms: Vec<Morphism> = maps
        .iter()
        .enumerate()
        .map(|(i, (d, c, v))| Morphism {
            label: if i < n {
                crate::fincat::identity_label(&objects[i])
            } else {
                let vals: Vec<String> = v.iter().map(usize::to_string).collect();
                format!("s{d}>s{c}:{}", vals.join(""))
            },
            dom: ObjId(*d),
            cod: ObjId(*c),
            is_identity: i < n,
        })
        .collect();
    FinCat::assemble(objects, morphisms, true, |g, f| {
        let (fd, _, fv) = &maps[f.0];
        let (_, gc, gv) = &maps[g.0];
        Ok(MorId(
            seen[&(*fd, *gc, fv.iter().map(|&v| gv[v]).collect::<Vec<_>>())],
        ))
    })
    .ok()
}

/// Largest closure kept by [`concrete_random`].
pub const CONCRETE_MAX_MORPHISMS: usize = 10;

/// Random concrete categories on 1–3 objects (sets of size 1–3) with 1–3
/// random generating maps; closures above [`CONCRETE_MAX_MORPHISMS`] are discarded.
pub fn concrete_random(count: usize, seed: u64) -> Vec<NamedCategory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 100 * count.max(1),
            "concrete generator keeps overflowing"
        );
        let n = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let gens: Vec<(usize, usize, Vec<usize>)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let (d, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
                (
                    d,
                    c,
                    (0..sizes[d]).map(|_| rng.gen_range(0..sizes[c])).collect(),
                )
            })
            .collect();
        if let Some(c) = concrete_category(&sizes, &gens, CONCRETE_MAX_MORPHISMS) {
            out.push(named(format!("concrete-{seed}-{:03}", out.len()), c));
        }
    }
    out
}

/// A category whose series rational function keeps a pole at `t = −1`
/// after reduction. Sets `x = {0,1}`, `y = {0,1,2,3}` (0 playing the
/// role of a base point); `Z = [[2,4],[1,2]]` and
/// `det(E − (Z−E)t) = (1−3t)(1+t)` while the numerator is `2 + 3t`.
pub fn pole_witness() -> FinCat {
    let gens = vec![
        (0, 1, vec![0, 1]),
        (0, 1, vec![0, 2]),
        (0, 1, vec![0, 3]),
        (1, 0, vec![0, 0, 0, 0]),
    ];
    concrete_category(&[2, 4], &gens, 20).expect("small closure")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{chi_leinster, chi_series, EulerResult, Undefined};
    use crate::exactalg::Poly;
    use crate::fincat::{incidence_matrix, is_acyclic, NatMatrix};

    /// Canonical form of a strict order under relabelling: least bitmask
    /// over all permutations.
    fn canonical(k: usize, rel: &[(usize, usize)]) -> u64 {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(k)
            .into_iter()
            .map(|p| rel.iter().map(|&(i, j)| 1u64 << (p[i] * k + p[j])).sum())
            .min()
            .unwrap()
    }

    #[test]
    fn poset_counts() {
        let labeled: Vec<usize> = (1..=4).map(|k| labeled_posets(k).len()).collect();
        assert_eq!(labeled, [1, 3, 19, 219]);
        let unlabeled: Vec<usize> = (1..=4)
            .map(|k| {
                let mut forms: Vec<u64> =
                    labeled_posets(k).iter().map(|r| canonical(k, r)).collect();
                forms.sort();
                forms.dedup();
                forms.len()
            })
            .collect();
        assert_eq!(unlabeled, [1, 2, 5, 16]);
        assert_eq!(posets_exhaustive(4).len(), 242);
    }

    #[test]
    fn random_families_are_acyclic_and_reproducible() {
        let a = acyclic_random(30, 5, 42);
        let b = acyclic_random(30, 5, 42);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.category, y.category);
            assert!(is_acyclic(&x.category), "{}", x.id);
        }
        assert_ne!(
            acyclic_random(5, 5, 1)
                .iter()
                .map(|c| c.category.num_morphisms())
                .collect::<Vec<_>>(),
            acyclic_random(5, 5, 2)
                .iter()
                .map(|c| c.category.num_morphisms())
                .collect::<Vec<_>>()
        );
        assert_eq!(random_poset(5, 7), random_poset(5, 7));
    }

    #[test]
    fn free_and_collapsed() {
        // x0 ⇉ x1 → x2
        let edges = [(0, 1), (0, 1), (1, 2)];
        let f = free_category(3, &edges);
        assert_eq!(
            incidence_matrix(&f),
            NatMatrix::from_rows(&[&[1, 2, 2], &[0, 1, 1], &[0, 0, 1]])
        );
        let c = collapsed_category(3, &edges);
        assert_eq!(
            incidence_matrix(&c),
            NatMatrix::from_rows(&[&[1, 2, 1], &[0, 1, 1], &[0, 0, 1]])
        );
    }

    #[test]
    fn monoid_counts() {
        // brute-force count of associative tables with a fixed unit:
        // 1 on one element, 2 on two (ℤ/2 and M)
        let by_size = |s: usize| {
            monoids_small(3)
                .iter()
                .filter(|m| m.id.starts_with(&format!("monoid-{s}-")))
                .count()
        };
        assert_eq!(by_size(1), 1);
        assert_eq!(by_size(2), 2);
        assert!(by_size(3) > 0);
        for m in monoids_small(3) {
            assert_eq!(m.category.num_objects(), 1);
        }
    }

    #[test]
    fn pole_witness_has_pole() {
        let c = pole_witness();
        assert_eq!(
            incidence_matrix(&c),
            NatMatrix::from_rows(&[&[2, 4], &[1, 2]])
        );
        let (num, den) = crate::euler::series_num_den(&c);
        assert_eq!(den, Poly::from_ints(&[1, -2, -3]));
        assert_eq!(num, Poly::from_ints(&[2, 3]));
        assert_eq!(
            chi_series(&c),
            EulerResult::Undefined(Undefined::PoleAtMinusOne)
        );
        assert_eq!(
            chi_leinster(&c),
            EulerResult::Undefined(Undefined::NoWeighting)
        );
    }

    #[test]
    fn concrete_closure() {
        // a single idempotent on a 2-element set is the monoid M
        let c = concrete_category(&[2], &[(0, 0, vec![0, 0])], 20).unwrap();
        assert_eq!(incidence_matrix(&c), NatMatrix::from_rows(&[&[2]]));
        assert!(
            concrete_category(&[3], &[(0, 0, vec![1, 2, 0]), (0, 0, vec![1, 0, 2])], 4).is_none()
        );
        assert_eq!(concrete_random(10, 3).len(), 10);
    }
}
