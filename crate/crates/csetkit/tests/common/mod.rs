//! Shared oracles for the integration suites.
//!
//! Everything here recomputes expected values by a route independent of
//! the library path it checks: decomposition is cross-checked by a plain
//! union-find over the element graph, Burnside ranks by brute-force
//! subgroup/conjugacy enumeration on the group table, and the criterion
//! corpora are generated directly rather than through the library's
//! functorial-assignment search.

// Each suite uses its own subset of the oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use csetkit::category::Category;
use csetkit::cset::{for_each_cset, CSet};

/// Union-find over the element graph of a C-set: one node per element,
/// one edge per (element, morphism) pair. Components are returned as
/// sets of `(object index, element index)`, ordered by least element.
pub fn union_find_components(cset: &CSet) -> Vec<BTreeSet<(usize, usize)>> {
    let base = cset.base();
    // Flatten (object, index) into node ids.
    let mut offsets = Vec::with_capacity(base.object_count());
    let mut total = 0;
    for x in base.objects() {
        offsets.push(total);
        total += cset.carrier(x).len();
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for m in base.morphisms() {
        let (s, t) = (base.src(m), base.tgt(m));
        for (e, &img) in cset.action(m).iter().enumerate() {
            let a = offsets[s.index()] + e;
            let b = offsets[t.index()] + img;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut by_root: Vec<(usize, BTreeSet<(usize, usize)>)> = Vec::new();
    for x in base.objects() {
        for e in 0..cset.carrier(x).len() {
            let node = offsets[x.index()] + e;
            let root = find(&mut parent, node);
            match by_root.iter_mut().find(|(r, _)| *r == root) {
                Some((_, set)) => {
                    set.insert((x.index(), e));
                }
                None => {
                    by_root.push((root, BTreeSet::from([(x.index(), e)])));
                }
            }
        }
    }
    let mut components: Vec<BTreeSet<(usize, usize)>> =
        by_root.into_iter().map(|(_, set)| set).collect();
    components.sort_by_key(|set| *set.iter().next().unwrap());
    components
}

/// Maps the components returned by `decompose` back to original element
/// indices via their (unique) tokens.
pub fn component_element_sets(original: &CSet, parts: &[CSet]) -> Vec<BTreeSet<(usize, usize)>> {
    let base = original.base();
    parts
        .iter()
        .map(|part| {
            let mut set = BTreeSet::new();
            for x in base.objects() {
                for token in part.carrier(x) {
                    let index = original
                        .carrier(x)
                        .iter()
                        .position(|t| t == token)
                        .expect("component tokens come from the original");
                    set.insert((x.index(), index));
                }
            }
            set
        })
        .collect()
}

/// Reads the multiplication table of a one-object category back out as a
/// group table: `table[i][j]` is "morphism i then morphism j".
pub fn group_table(delooping: &Category) -> (usize, Vec<Vec<usize>>, usize) {
    assert_eq!(delooping.object_count(), 1);
    let n = delooping.morphism_count();
    let mors: Vec<_> = delooping.morphisms().collect();
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let h = delooping.compose(mors[i], mors[j]);
                    mors.iter().position(|&m| m == h).unwrap()
                })
                .collect()
        })
        .collect();
    let identity = mors
        .iter()
        .position(|&m| m == delooping.identity(delooping.objects().next().unwrap()))
        .unwrap();
    (n, table, identity)
}

/// Brute-force count of conjugacy classes of subgroups: enumerate every
/// subset closed under the product (a subgroup, in a finite group), then
/// group them under conjugation.
pub fn subgroup_conjugacy_class_count(n: usize, table: &[Vec<usize>], identity: usize) -> usize {
    assert!(n <= 16, "subset enumeration is exponential");
    let inverse: Vec<usize> = (0..n)
        .map(|g| (0..n).find(|&h| table[g][h] == identity).unwrap())
        .collect();
    let mut subgroups: Vec<BTreeSet<usize>> = Vec::new();
    'subsets: for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&g| mask & (1 << g) != 0).collect();
        for &g in &members {
            for &h in &members {
                if mask & (1 << table[g][h]) == 0 {
                    continue 'subsets;
                }
            }
        }
        subgroups.push(members.into_iter().collect());
    }
    let conjugate = |h: &BTreeSet<usize>, g: usize| -> BTreeSet<usize> {
        h.iter().map(|&x| table[table[inverse[g]][x]][g]).collect()
    };
    let mut classes: Vec<Vec<BTreeSet<usize>>> = Vec::new();
    for sub in subgroups {
        let found = classes
            .iter_mut()
            .find(|class| (0..n).any(|g| conjugate(&class[0], g) == sub));
        match found {
            Some(class) => class.push(sub),
            None => classes.push(vec![sub]),
        }
    }
    classes.len()
}

/// Every C-set over the arrow category with total size at most
/// `max_total`, generated directly: all functions between index sets.
pub fn all_arrow_csets(arrow: &Arc<Category>, max_total: usize) -> Vec<CSet> {
    let mut out = Vec::new();
    for a in 0..=max_total {
        for b in 0..=(max_total - a) {
            if a > 0 && b == 0 {
                continue; // no function from a nonempty set to an empty one
            }
            let carriers = |a: usize| (1..=a).map(|i| i.to_string()).collect::<Vec<_>>();
            let mut maps = vec![Vec::new()];
            for _ in 0..a {
                maps = maps
                    .into_iter()
                    .flat_map(|m: Vec<usize>| {
                        (0..b).map(move |v| {
                            let mut m = m.clone();
                            m.push(v);
                            m
                        })
                    })
                    .collect();
            }
            for map in maps {
                let cset = CSet::new(
                    arrow.clone(),
                    vec![carriers(a), carriers(b)],
                    vec![(0..a).collect(), (0..b).collect(), map],
                )
                .expect("any function is functorial over the arrow");
                out.push(cset);
            }
        }
    }
    out
}

/// All involutions on `0..n`, generated by recursive pairing.
fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn fill(assigned: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        match assigned.iter().position(|v| v.is_none()) {
            None => out.push(assigned.iter().map(|v| v.unwrap()).collect()),
            Some(i) => {
                assigned[i] = Some(i);
                fill(assigned, out);
                assigned[i] = None;
                for j in i + 1..assigned.len() {
                    if assigned[j].is_none() {
                        assigned[i] = Some(j);
                        assigned[j] = Some(i);
                        fill(assigned, out);
                        assigned[i] = None;
                        assigned[j] = None;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    fill(&mut vec![None; n], &mut out);
    out
}

/// Every C-set over the delooping of C_2 with carrier size at most
/// `max_total`: the generator acts as an involution.
pub fn all_c2_csets(c2: &Arc<Category>, max_total: usize) -> Vec<CSet> {
    let mut out = Vec::new();
    for n in 0..=max_total {
        for inv in involutions(n) {
            let cset = CSet::new(
                c2.clone(),
                vec![(1..=n).map(|i| i.to_string()).collect()],
                vec![(0..n).collect(), inv],
            )
            .expect("an involution is a C_2 action");
            out.push(cset);
        }
    }
    out
}

/// Every C-set over `base` with total size at most `max_total`, via the
/// library's exhaustive search per size tuple.
pub fn all_csets_up_to(base: &Arc<Category>, max_total: usize) -> Vec<CSet> {
    let k = base.object_count();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; k];
    loop {
        if sizes.iter().sum::<usize>() <= max_total {
            for_each_cset(base, &sizes, &mut |cset| {
                out.push(cset);
                true
            });
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if sizes[pos] < max_total {
                sizes[pos] += 1;
                for s in sizes.iter_mut().skip(pos + 1) {
                    *s = 0;
                }
                break;
            }
        }
    }
}
