/*! Built-in example categories and C-sets.

Every object returned here has been through its module's validator. The
library covers the running examples used throughout the crate and the
guide: the arrow category `x -> y` with its `Omega_n` family, a loop
category with its cycle-tailed family, small group deloopings, the path
category `x -> y -> z`, and the one-morphism idempotent loop.
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{Category, CategorySpec, MorId, MorSpec};
use crate::cset::CSet;

fn spec(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identity: &[(&str, &str)],
    compose: &[(&str, &str, &str)],
) -> CategorySpec {
    CategorySpec {
        objects: objects.iter().map(|s| s.to_string()).collect(),
        morphisms: morphisms
            .iter()
            .map(|(id, src, tgt)| MorSpec {
                id: id.to_string(),
                src: src.to_string(),
                tgt: tgt.to_string(),
            })
            .collect(),
        identity: identity
            .iter()
            .map(|(o, m)| (o.to_string(), m.to_string()))
            .collect(),
        compose: compose
            .iter()
            .map(|(f, g, h)| [f.to_string(), g.to_string(), h.to_string()])
            .collect(),
    }
}

/// The arrow category: objects `x`, `y` and one morphism `a: x -> y`.
pub fn arrow() -> Arc<Category> {
    Arc::new(
        spec(
            &["x", "y"],
            &[("1x", "x", "x"), ("1y", "y", "y"), ("a", "x", "y")],
            &[("x", "1x"), ("y", "1y")],
            &[],
        )
        .validate()
        .expect("arrow category"),
    )
}

/// The path category: `x -> y -> z` with the composite `ab` included.
pub fn path() -> Arc<Category> {
    Arc::new(
        spec(
            &["x", "y", "z"],
            &[
                ("1x", "x", "x"),
                ("1y", "y", "y"),
                ("1z", "z", "z"),
                ("a", "x", "y"),
                ("b", "y", "z"),
                ("ab", "x", "z"),
            ],
            &[("x", "1x"), ("y", "1y"), ("z", "1z")],
            &[("a", "b", "ab")],
        )
        .validate()
        .expect("path category"),
    )
}

/// A loop category on one object: morphisms `1, f, f2, f3` with
/// `f4 = f` (so the powers of `f` cycle with period 3 after one step).
pub fn loop_cat() -> Arc<Category> {
    Arc::new(
        spec(
            &["x"],
            &[("1", "x", "x"), ("f", "x", "x"), ("f2", "x", "x"), ("f3", "x", "x")],
            &[("x", "1")],
            &[
                ("f", "f", "f2"),
                ("f", "f2", "f3"),
                ("f2", "f", "f3"),
                ("f", "f3", "f"),
                ("f3", "f", "f"),
                ("f2", "f2", "f"),
                ("f2", "f3", "f2"),
                ("f3", "f2", "f2"),
                ("f3", "f3", "f3"),
            ],
        )
        .validate()
        .expect("loop category"),
    )
}

/// The idempotent loop: one object, one non-identity morphism `f` with
/// `f` then `f` equal to `f`.
pub fn idempotent_loop() -> Arc<Category> {
    Arc::new(
        spec(
            &["x"],
            &[("1", "x", "x"), ("f", "x", "x")],
            &[("x", "1")],
            &[("f", "f", "f")],
        )
        .validate()
        .expect("idempotent loop"),
    )
}

/// The category with one object and one morphism.
pub fn terminal() -> Arc<Category> {
    Arc::new(Category::terminal())
}

/// Delooping of the cyclic group of order `n` (elements `e, g, g2, ...`).
pub fn delooping_cyclic(n: usize) -> Arc<Category> {
    assert!(n >= 1);
    let elements: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "e".to_owned(),
            1 => "g".to_owned(),
            _ => format!("g{i}"),
        })
        .collect();
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    Arc::new(Category::delooping(&elements, 0, &table).expect("cyclic group"))
}

/// Delooping of the Klein four-group.
pub fn delooping_klein() -> Arc<Category> {
    let elements: Vec<String> = ["e", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
    // xor on two bits: a = 01, b = 10, c = 11.
    let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    Arc::new(Category::delooping(&elements, 0, &table).expect("Klein four-group"))
}

/// Delooping of the symmetric group on three letters.
///
/// Elements are named by how they are reached from the generators `r`
/// (3-cycle) and `s` (transposition); the table entry for `(i, j)` is
/// "i then j".
pub fn delooping_s3() -> Arc<Category> {
    type Perm = [usize; 3];
    let compose = |p: Perm, q: Perm| -> Perm { [q[p[0]], q[p[1]], q[p[2]]] };
    let e: Perm = [0, 1, 2];
    let r: Perm = [1, 2, 0];
    let s: Perm = [1, 0, 2];
    let named: Vec<(&str, Perm)> = vec![
        ("e", e),
        ("r", r),
        ("rr", compose(r, r)),
        ("s", s),
        ("rs", compose(r, s)),
        ("rrs", compose(compose(r, r), s)),
    ];
    let elements: Vec<String> = named.iter().map(|(n, _)| n.to_string()).collect();
    let table: Vec<Vec<usize>> = named
        .iter()
        .map(|&(_, p)| {
            named
                .iter()
                .map(|&(_, q)| {
                    let pq = compose(p, q);
                    named.iter().position(|&(_, w)| w == pq).expect("closed")
                })
                .collect()
        })
        .collect();
    Arc::new(Category::delooping(&elements, 0, &table).expect("S3"))
}

/// The regular C-set of a one-object category: the category acting on its
/// own morphisms.
pub fn regular(delooping: &Arc<Category>) -> CSet {
    assert_eq!(delooping.object_count(), 1);
    CSet::representable(delooping.clone(), delooping.objects().next().unwrap())
}

/// `Omega_n` over the arrow category: `n` elements at `x`, one at `y`,
/// with `a` acting as the constant function. `Omega_0` is empty at `x`.
pub fn omega_arrow(n: usize) -> CSet {
    omega_family(&arrow(), arrow().mor("a").unwrap(), n)
}

/// The cycle-tailed family over [`loop_cat`]: the largest divisor of the
/// loop's period that fits in `n` becomes a cycle, and every remaining
/// element feeds into it.
pub fn omega_loop(n: usize) -> CSet {
    let cat = loop_cat();
    let f = cat.mor("f").unwrap();
    omega_family(&cat, f, n)
}

/// Builds the `Omega_n` witness family over a two-object arrow-shaped
/// category or a one-object monogenic loop, with `alpha` the generating
/// morphism.
///
/// For the arrow shape the carrier is `n` elements over the source and a
/// single element over the target, with `alpha` acting constantly. For a
/// loop whose powers have index `a >= 1` and period `p`, the action is a
/// cycle of length (largest divisor of `p` at most `n`) with every other
/// element mapped one step into the cycle; this satisfies every relation
/// `alpha^k = alpha^l` the loop imposes.
pub fn omega_family(d: &Arc<Category>, alpha: MorId, n: usize) -> CSet {
    let (src, tgt) = (d.src(alpha), d.tgt(alpha));
    if src != tgt {
        assert_eq!(d.object_count(), 2, "arrow-shaped subcategory expected");
        assert_eq!(d.morphism_count(), 3, "arrow-shaped subcategory expected");
        let mut carriers = vec![Vec::new(); 2];
        carriers[src.0] = (1..=n).map(|i| i.to_string()).collect();
        carriers[tgt.0] = vec!["1".to_owned()];
        let actions = d
            .morphisms()
            .map(|m| {
                if m == alpha {
                    vec![0; n]
                } else {
                    (0..carriers[d.src(m).0].len()).collect()
                }
            })
            .collect();
        return CSet::new(d.clone(), carriers, actions).expect("arrow omega family");
    }

    assert_eq!(d.object_count(), 1, "monogenic loop expected");
    if n == 0 {
        return CSet::empty(d.clone());
    }
    // Walk the powers of alpha until they repeat to find the period.
    let mut powers = vec![alpha];
    let period = loop {
        let next = d.compose(*powers.last().unwrap(), alpha);
        if let Some(pos) = powers.iter().position(|&m| m == next) {
            break powers.len() - pos;
        }
        powers.push(next);
    };
    // Non-invertibility gives the powers index >= 1, which licenses the
    // depth-one tails below.
    assert!(
        !powers.contains(&d.identity(src)),
        "alpha must not be invertible"
    );
    let cycle_len = (1..=period.min(n)).rev().find(|m| period % m == 0).unwrap();
    // f: cycle on 1..=cycle_len, every tail element feeds element 1.
    let f: Vec<usize> = (0..n)
        .map(|i| if i < cycle_len { (i + 1) % cycle_len } else { 0 })
        .collect();
    let iterate = |k: usize| -> Vec<usize> {
        let mut acc: Vec<usize> = (0..n).collect();
        for _ in 0..k {
            acc = acc.iter().map(|&e| f[e]).collect();
        }
        acc
    };
    let actions = d
        .morphisms()
        .map(|m| {
            if d.is_identity(m) {
                (0..n).collect()
            } else {
                let k = powers.iter().position(|&p| p == m).expect("power of alpha") + 1;
                iterate(k)
            }
        })
        .collect();
    let carriers = vec![(1..=n).map(|i| i.to_string()).collect()];
    CSet::new(d.clone(), carriers, actions).expect("loop omega family")
}

/// Deloopings of every group of order at most six, with names.
pub fn small_group_deloopings() -> Vec<(String, Arc<Category>)> {
    vec![
        ("delooping-c1".into(), delooping_cyclic(1)),
        ("delooping-c2".into(), delooping_cyclic(2)),
        ("delooping-c3".into(), delooping_cyclic(3)),
        ("delooping-c4".into(), delooping_cyclic(4)),
        ("delooping-c2xc2".into(), delooping_klein()),
        ("delooping-c5".into(), delooping_cyclic(5)),
        ("delooping-c6".into(), delooping_cyclic(6)),
        ("delooping-s3".into(), delooping_s3()),
    ]
}

/// All built-in categories, keyed by CLI name.
pub fn categories() -> BTreeMap<&'static str, Arc<Category>> {
    let mut map: BTreeMap<&'static str, Arc<Category>> = BTreeMap::new();
    map.insert("arrow", arrow());
    map.insert("path", path());
    map.insert("loop", loop_cat());
    map.insert("idempotent-loop", idempotent_loop());
    map.insert("terminal", terminal());
    map.insert("delooping-c1", delooping_cyclic(1));
    map.insert("delooping-c2", delooping_cyclic(2));
    map.insert("delooping-c3", delooping_cyclic(3));
    map.insert("delooping-c4", delooping_cyclic(4));
    map.insert("delooping-c5", delooping_cyclic(5));
    map.insert("delooping-c6", delooping_cyclic(6));
    map.insert("delooping-c2xc2", delooping_klein());
    map.insert("delooping-s3", delooping_s3());
    map
}

/// All built-in C-sets, keyed by CLI name.
pub fn csets() -> BTreeMap<&'static str, CSet> {
    let mut map: BTreeMap<&'static str, CSet> = BTreeMap::new();
    map.insert("arrow-omega0", omega_arrow(0));
    map.insert("arrow-omega1", omega_arrow(1));
    map.insert("arrow-omega2", omega_arrow(2));
    map.insert("arrow-omega3", omega_arrow(3));
    map.insert("arrow-omega4", omega_arrow(4));
    map.insert("loop-omega1", omega_loop(1));
    map.insert("loop-omega2", omega_loop(2));
    map.insert("loop-omega3", omega_loop(3));
    map.insert("loop-omega4", omega_loop(4));
    map.insert("c2-regular", regular(&delooping_cyclic(2)));
    map.insert("c2-trivial", CSet::point(delooping_cyclic(2)));
    map.insert("c3-regular", regular(&delooping_cyclic(3)));
    map.insert("s3-regular", regular(&delooping_s3()));
    map
}
