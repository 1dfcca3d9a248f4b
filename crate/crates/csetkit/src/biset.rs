/*! Bisets: C-sets over a product category `C x D^op`.

A [`Biset`] wraps a validated [`CSet`] over `left x opposite(right)`. The
left category acts covariantly on the first fiber coordinate, the right
category contravariantly on the second. Walks act set-valued on either
side: forward steps take images, backward steps full preimages, and a
right walk is processed from its end back to its start (matching the
contravariant single-step case).

[`compose`] implements the class-valued composition over a middle
category: fibers of the composite are connected components of a pair
graph whose edges are given by single middle morphisms, i.e. the
equivalence relation generated by relating `(u, b)` at `y` to `(a, v)` at
`y'` whenever some walk carries one pair to the other. The induced
actions are verified to be representative-independent while the composite
is built; a violation aborts with the witnessing pair.
*/

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{Category, Functor, MorId, ObjId, Walk};
use crate::cset::{CSet, CSetError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BisetError {
    #[error("underlying C-set is not over the product of the stated categories")]
    WrongBase,
    #[error("the functors do not share a codomain")]
    CodomainMismatch,
    #[error("the bisets do not share a middle category")]
    MiddleMismatch,
    #[error("element does not live in the stated fiber")]
    EndpointMismatch,
    #[error(
        "induced action of `{mor}` depends on representatives: \
         ({u1}@{y1}, {b1}) and ({u2}@{y2}, {b2}) map to different classes"
    )]
    IllDefinedAction {
        mor: String,
        y1: String,
        u1: String,
        b1: String,
        y2: String,
        u2: String,
        b2: String,
    },
    #[error(transparent)]
    CSet(#[from] CSetError),
}

/// Which side of a biset a walk acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A (C, D)-biset: a C-set over `C x D^op`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biset {
    left: Arc<Category>,
    right: Arc<Category>,
    cset: CSet,
}

impl Biset {
    /// Wraps a C-set over the product `left x opposite(right)`.
    pub fn new(left: Arc<Category>, right: Arc<Category>, cset: CSet) -> Result<Biset, BisetError> {
        let product = left.product(&right.opposite());
        if cset.base().as_ref() != &product {
            return Err(BisetError::WrongBase);
        }
        Ok(Biset { left, right, cset })
    }

    pub fn left(&self) -> &Arc<Category> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Category> {
        &self.right
    }

    /// The underlying C-set over the product category.
    pub fn cset(&self) -> &CSet {
        &self.cset
    }

    /// Product-category object for the fiber at `(x, y)`.
    pub fn fiber_obj(&self, x: ObjId, y: ObjId) -> ObjId {
        ObjId(x.0 * self.right.object_count() + y.0)
    }

    /// Product-category morphism `(f, g)` with `f` from the left category
    /// and `g` from the right one (read in the opposite category).
    pub fn pair_mor(&self, f: MorId, g: MorId) -> MorId {
        MorId(f.0 * self.right.morphism_count() + g.0)
    }

    pub fn fiber(&self, x: ObjId, y: ObjId) -> &[String] {
        self.cset.carrier(self.fiber_obj(x, y))
    }

    pub fn is_empty(&self) -> bool {
        self.cset.is_empty()
    }

    /// Covariant action of a left morphism `alpha: x -> x1` on an element
    /// of the fiber at `(x, y)`; the result lives at `(x1, y)`.
    pub fn left_action(
        &self,
        alpha: MorId,
        at: (ObjId, ObjId),
        e: usize,
    ) -> Result<usize, BisetError> {
        if self.left.src(alpha) != at.0 || e >= self.fiber(at.0, at.1).len() {
            return Err(BisetError::EndpointMismatch);
        }
        let m = self.pair_mor(alpha, self.right.identity(at.1));
        Ok(self.cset.action(m)[e])
    }

    /// Contravariant action of a right morphism `beta: y1 -> y` on an
    /// element of the fiber at `(x, y)`; the result lives at `(x, y1)`.
    pub fn right_action(
        &self,
        at: (ObjId, ObjId),
        e: usize,
        beta: MorId,
    ) -> Result<usize, BisetError> {
        if self.right.tgt(beta) != at.1 || e >= self.fiber(at.0, at.1).len() {
            return Err(BisetError::EndpointMismatch);
        }
        let m = self.pair_mor(self.left.identity(at.0), beta);
        Ok(self.cset.action(m)[e])
    }

    /// Set-valued action of a walk on elements of one fiber.
    ///
    /// A left walk starts at the fiber's first coordinate and the result
    /// lives at `(walk.end(), y)`. A right walk *ends* at the fiber's
    /// second coordinate and the result lives at `(x, walk.start())`.
    /// The empty set absorbs.
    pub fn walk_action(
        &self,
        side: Side,
        walk: &Walk,
        at: (ObjId, ObjId),
        elems: &BTreeSet<usize>,
    ) -> Result<BTreeSet<usize>, BisetError> {
        if elems.iter().any(|&e| e >= self.fiber(at.0, at.1).len()) {
            return Err(BisetError::EndpointMismatch);
        }
        let product_walk = match side {
            Side::Left => {
                if walk.start() != at.0 {
                    return Err(BisetError::EndpointMismatch);
                }
                let steps = walk
                    .steps()
                    .iter()
                    .map(|&(m, dir)| (self.pair_mor(m, self.right.identity(at.1)), dir))
                    .collect();
                Walk::new(self.cset.base(), self.fiber_obj(at.0, at.1), steps)
                    .expect("left walk lifts to the product")
            }
            Side::Right => {
                if walk.end() != at.1 {
                    return Err(BisetError::EndpointMismatch);
                }
                // Contravariant side: process the steps from the walk's
                // end back to its start, keeping each step's direction.
                let steps = walk
                    .steps()
                    .iter()
                    .rev()
                    .map(|&(m, dir)| (self.pair_mor(self.left.identity(at.0), m), dir))
                    .collect();
                Walk::new(self.cset.base(), self.fiber_obj(at.0, at.1), steps)
                    .expect("right walk lifts to the product")
            }
        };
        Ok(self.cset.walk_image(&product_walk, elems))
    }
}

/// The biset induced by functors `F: C -> E` and `G: D -> E`: the fiber
/// at `(x, y)` is `Hom_E(G(y), F(x))`, with the left category acting by
/// post-composition through `F` and the right by pre-composition through
/// `G`.
pub fn hom_biset(f: &Functor, g: &Functor) -> Result<Biset, BisetError> {
    if f.cod().as_ref() != g.cod().as_ref() {
        return Err(BisetError::CodomainMismatch);
    }
    let (c, d, e) = (f.dom().clone(), g.dom().clone(), f.cod().clone());
    let product = Arc::new(c.product(&d.opposite()));

    // homs[x][y] lists the morphisms G(y) -> F(x) in E.
    let homs: Vec<Vec<Vec<MorId>>> = c
        .objects()
        .map(|x| {
            d.objects()
                .map(|y| e.hom(g.on_obj(y), f.on_obj(x)))
                .collect()
        })
        .collect();
    let carriers: Vec<Vec<String>> = homs
        .iter()
        .flat_map(|row| {
            row.iter()
                .map(|fiber| fiber.iter().map(|&h| e.mor_name(h).to_owned()).collect())
        })
        .collect();
    let mut actions: Vec<Vec<usize>> = Vec::with_capacity(product.morphism_count());
    for mu in c.morphisms() {
        for nu in d.morphisms() {
            // (mu, nu): fiber (src mu, tgt nu) -> (tgt mu, src nu),
            // h |-> G(nu) then h then F(mu).
            let src_fiber = &homs[c.src(mu).0][d.tgt(nu).0];
            let tgt_fiber = &homs[c.tgt(mu).0][d.src(nu).0];
            let act = src_fiber
                .iter()
                .map(|&h| {
                    let out = e.compose(e.compose(g.on_mor(nu), h), f.on_mor(mu));
                    tgt_fiber
                        .iter()
                        .position(|&k| k == out)
                        .expect("composite lands in the target hom-set")
                })
                .collect();
            actions.push(act);
        }
    }
    let cset = CSet::new(product, carriers, actions)?;
    Ok(Biset {
        left: c,
        right: d,
        cset,
    })
}

/// The identity biset of a category: fibers `Hom(y, x)` with both actions
/// by composition.
pub fn identity_biset(c: Arc<Category>) -> Biset {
    let id = Functor::identity(c);
    hom_biset(&id, &id).expect("identity functors share a codomain")
}

/// Regards a C-set as a (C, 1)-biset over `C x 1^op`.
pub fn cset_as_biset(omega: &CSet) -> Biset {
    let left = omega.base().clone();
    let right = Arc::new(Category::terminal());
    let product = Arc::new(left.product(&right.opposite()));
    let carriers = left.objects().map(|x| omega.carrier(x).to_vec()).collect();
    let actions = left.morphisms().map(|m| omega.action(m).to_vec()).collect();
    let cset = CSet::new(product, carriers, actions).expect("same laws over the product");
    Biset { left, right, cset }
}

/// Projects a (C, 1)-biset back to a C-set; `None` if the right category
/// is not the one-morphism category.
pub fn biset_to_cset(biset: &Biset) -> Option<CSet> {
    if biset.right.object_count() != 1 || biset.right.morphism_count() != 1 {
        return None;
    }
    let left = biset.left.clone();
    let carriers = left
        .objects()
        .map(|x| biset.fiber(x, ObjId(0)).to_vec())
        .collect();
    let actions = left
        .morphisms()
        .map(|m| biset.cset.action(biset.pair_mor(m, MorId(0))).to_vec())
        .collect();
    Some(CSet::new(left, carriers, actions).expect("projection keeps the laws"))
}

/// A composed biset together with its class structure, for looking up
/// the class of a representative pair.
#[derive(Clone, Debug)]
pub struct Composition {
    biset: Biset,
    /// `members[fiber][class]` lists `(middle object, u, b)` triples,
    /// sorted; the first entry is the class representative.
    members: Vec<Vec<Vec<(ObjId, usize, usize)>>>,
}

impl Composition {
    pub fn biset(&self) -> &Biset {
        &self.biset
    }

    /// Class index of the pair `(u at middle y, b)` in the fiber at
    /// `(x, z)`.
    pub fn class_of(&self, x: ObjId, z: ObjId, y: ObjId, u: usize, b: usize) -> Option<usize> {
        let fiber = self.biset.fiber_obj(x, z).0;
        self.members[fiber]
            .iter()
            .position(|class| class.binary_search(&(y, u, b)).is_ok())
    }

    pub fn class_members(&self, x: ObjId, z: ObjId, class: usize) -> &[(ObjId, usize, usize)] {
        &self.members[self.biset.fiber_obj(x, z).0][class]
    }
}

/// Composes a (C, D)-biset with a (D, E)-biset over the middle category D.
///
/// Fibers of the result are equivalence classes of pairs; the relation is
/// generated by single middle morphisms `d: y -> y1`, which relate
/// `(u d, b)` at `y` to `(u, d b)` at `y1`. Induced actions are checked
/// for representative-independence on every class.
pub fn compose(omega: &Biset, psi: &Biset) -> Result<Composition, BisetError> {
    if omega.right.as_ref() != psi.left.as_ref() {
        return Err(BisetError::MiddleMismatch);
    }
    let c = omega.left.clone();
    let d = omega.right.clone();
    let e = psi.right.clone();
    let product = Arc::new(c.product(&e.opposite()));

    // Pair nodes per (x, z) fiber, in canonical (y, u, b) order.
    let mut all_members: Vec<Vec<Vec<(ObjId, usize, usize)>>> = Vec::new();
    let mut carriers: Vec<Vec<String>> = Vec::new();
    for x in c.objects() {
        for z in e.objects() {
            let mut nodes: Vec<(ObjId, usize, usize)> = Vec::new();
            for y in d.objects() {
                for u in 0..omega.fiber(x, y).len() {
                    for b in 0..psi.fiber(y, z).len() {
                        nodes.push((y, u, b));
                    }
                }
            }
            let index_of = |node: &(ObjId, usize, usize)| -> usize {
                nodes.binary_search(node).expect("node enumerated")
            };
            let mut uf: Vec<usize> = (0..nodes.len()).collect();
            fn find(uf: &mut Vec<usize>, i: usize) -> usize {
                if uf[i] != i {
                    let r = find(uf, uf[i]);
                    uf[i] = r;
                }
                uf[i]
            }
            for delta in d.morphisms() {
                let (y, y1) = (d.src(delta), d.tgt(delta));
                for a in 0..omega.fiber(x, y1).len() {
                    let u = omega.right_action((x, y1), a, delta)?;
                    for b in 0..psi.fiber(y, z).len() {
                        let v = psi.left_action(delta, (y, z), b)?;
                        let i = index_of(&(y, u, b));
                        let j = index_of(&(y1, a, v));
                        let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                        if ri != rj {
                            uf[ri] = rj;
                        }
                    }
                }
            }
            let mut classes: Vec<Vec<(ObjId, usize, usize)>> = Vec::new();
            let mut class_of_root: Vec<Option<usize>> = vec![None; nodes.len()];
            for (i, &node) in nodes.iter().enumerate() {
                let root = find(&mut uf, i);
                let class = *class_of_root[root].get_or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[class].push(node);
            }
            let tokens = classes
                .iter()
                .map(|class| {
                    let (y, u, b) = class[0];
                    format!(
                        "[{}@{}|{}]",
                        &omega.fiber(x, y)[u],
                        d.obj_name(y),
                        &psi.fiber(y, z)[b]
                    )
                })
                .collect();
            carriers.push(tokens);
            all_members.push(classes);
        }
    }

    let fiber_index = |x: ObjId, z: ObjId| x.0 * e.object_count() + z.0;
    let class_lookup = |fiber: usize, node: (ObjId, usize, usize)| -> usize {
        all_members[fiber]
            .iter()
            .position(|class| class.binary_search(&node).is_ok())
            .expect("every pair belongs to a class")
    };

    // Induced actions, verified class-independent member by member.
    let mut actions: Vec<Vec<usize>> = Vec::with_capacity(product.morphism_count());
    for alpha in c.morphisms() {
        for gamma in e.morphisms() {
            // (alpha, gamma): (src alpha, tgt gamma) -> (tgt alpha, src gamma).
            let src_fiber = fiber_index(c.src(alpha), e.tgt(gamma));
            let tgt_fiber = fiber_index(c.tgt(alpha), e.src(gamma));
            let mut act = Vec::with_capacity(all_members[src_fiber].len());
            for class in &all_members[src_fiber] {
                let mut image: Option<(usize, (ObjId, usize, usize))> = None;
                for &(y, u, b) in class {
                    let u1 = omega.left_action(alpha, (c.src(alpha), y), u)?;
                    let b1 = psi.right_action((y, e.tgt(gamma)), b, gamma)?;
                    let target = class_lookup(tgt_fiber, (y, u1, b1));
                    match image {
                        None => image = Some((target, (y, u, b))),
                        Some((seen, witness)) if seen != target => {
                            let (x, z) = (c.src(alpha), e.tgt(gamma));
                            return Err(BisetError::IllDefinedAction {
                                mor: format!("({},{})", c.mor_name(alpha), e.mor_name(gamma)),
                                y1: d.obj_name(witness.0).to_owned(),
                                u1: omega.fiber(x, witness.0)[witness.1].clone(),
                                b1: psi.fiber(witness.0, z)[witness.2].clone(),
                                y2: d.obj_name(y).to_owned(),
                                u2: omega.fiber(x, y)[u].clone(),
                                b2: psi.fiber(y, z)[b].clone(),
                            });
                        }
                        Some(_) => {}
                    }
                }
                act.push(image.expect("classes are non-empty").0);
            }
            actions.push(act);
        }
    }

    let cset = CSet::new(product, carriers, actions)?;
    let biset = Biset {
        left: c,
        right: e,
        cset,
    };
    Ok(Composition {
        biset,
        members: all_members,
    })
}
