/*! C-sets: validated functors from a finite category to finite sets.

A [`CSet`] assigns a finite carrier to every object and a total function to
every morphism; validation checks that identities act as identities and
that the action of a composite equals the composite of the actions, on
every element.

The module provides the constructions the rest of the crate is built on:
disjoint unions and pointwise products, generated C-subsets (forward images
only), walk-orbits (closure under images *and* full preimages, so backward
traversal is set-valued), decomposition into indecomposable components,
simplicity, subfunctor enumeration, isomorphism search, and restriction
along a subcategory inclusion.

Element bookkeeping is index-based and deterministic: carriers keep their
declaration order, disjoint unions tag tokens `L:`/`R:`, and products pair
them as `(a,b)`.
*/

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::category::{Category, Direction, MorId, ObjId, Subcategory, Walk};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CSetError {
    #[error("the two C-sets live over different base categories")]
    BaseMismatch,
    #[error("carrier list does not match the base category's objects")]
    CarrierCount,
    #[error("duplicate token `{token}` in the carrier of `{obj}`")]
    DuplicateToken { obj: String, token: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{token}` is not in the carrier of `{obj}`")]
    UnknownToken { obj: String, token: String },
    #[error("action of `{mor}` is not a total function into its target carrier")]
    NonTotalFunction { mor: String },
    #[error("action of the identity of `{obj}` is not the identity function")]
    IdentityNotIdentity { obj: String },
    #[error("functoriality fails on `{f}` then `{g}`")]
    CompositionMismatch { f: String, g: String },
    #[error("the C-set is empty")]
    EmptyCSet,
    #[error("total size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("the given subcategory does not include into this C-set's base")]
    NotASubcategory,
    #[error("naturality fails at `{mor}`")]
    NotNatural { mor: String },
    #[error("component list does not match the carriers")]
    ComponentMismatch,
}

/// An element of a C-set: an object together with a carrier index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Elem {
    pub at: ObjId,
    pub index: usize,
}

/// A validated C-set over a fixed base category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSet {
    base: Arc<Category>,
    carriers: Vec<Vec<String>>,
    /// `actions[m][e]` is the index in `carriers[tgt(m)]` of the image of
    /// element `e` of `carriers[src(m)]`.
    actions: Vec<Vec<usize>>,
}

/// A per-object family of carrier subsets, closed under forward images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubCSet {
    sets: Vec<BTreeSet<usize>>,
}

impl SubCSet {
    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.sets[e.at.0].contains(&e.index)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.len()).collect()
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// Objectwise containment.
    pub fn is_contained_in(&self, other: &SubCSet) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.is_subset(b))
    }
}

impl CSet {
    /// Validates carriers and index-based actions against the base.
    pub fn new(
        base: Arc<Category>,
        carriers: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<CSet, CSetError> {
        if carriers.len() != base.object_count() || actions.len() != base.morphism_count() {
            return Err(CSetError::CarrierCount);
        }
        for (x, carrier) in carriers.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for token in carrier {
                if !seen.insert(token) {
                    return Err(CSetError::DuplicateToken {
                        obj: base.obj_name(ObjId(x)).to_owned(),
                        token: token.clone(),
                    });
                }
            }
        }
        let cset = CSet {
            base,
            carriers,
            actions,
        };
        cset.check_laws()?;
        Ok(cset)
    }

    fn check_laws(&self) -> Result<(), CSetError> {
        let base = &self.base;
        for m in base.morphisms() {
            let act = &self.actions[m.0];
            if act.len() != self.carriers[base.src(m).0].len() {
                return Err(CSetError::NonTotalFunction {
                    mor: base.mor_name(m).to_owned(),
                });
            }
            let tgt_len = self.carriers[base.tgt(m).0].len();
            if act.iter().any(|&v| v >= tgt_len) {
                return Err(CSetError::NonTotalFunction {
                    mor: base.mor_name(m).to_owned(),
                });
            }
        }
        for x in base.objects() {
            let id = base.identity(x);
            if self.actions[id.0].iter().enumerate().any(|(e, &v)| e != v) {
                return Err(CSetError::IdentityNotIdentity {
                    obj: base.obj_name(x).to_owned(),
                });
            }
        }
        for f in base.morphisms() {
            for g in base.morphisms() {
                if !base.composable(f, g) {
                    continue;
                }
                let h = base.compose(f, g);
                for e in 0..self.actions[f.0].len() {
                    if self.actions[g.0][self.actions[f.0][e]] != self.actions[h.0][e] {
                        return Err(CSetError::CompositionMismatch {
                            f: base.mor_name(f).to_owned(),
                            g: base.mor_name(g).to_owned(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a C-set from token maps, as found in JSON files.
    ///
    /// Identity actions may be omitted; so may the action of any morphism
    /// whose source carrier is empty (there is only one such function).
    pub fn from_parts(
        base: Arc<Category>,
        carriers: &BTreeMap<String, Vec<String>>,
        actions: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<CSet, CSetError> {
        for obj in carriers.keys() {
            if base.obj(obj).is_none() {
                return Err(CSetError::UnknownObject(obj.clone()));
            }
        }
        for mor in actions.keys() {
            if base.mor(mor).is_none() {
                return Err(CSetError::UnknownMorphism(mor.clone()));
            }
        }
        let carrier_vecs: Vec<Vec<String>> = base
            .objects()
            .map(|x| {
                carriers
                    .get(base.obj_name(x))
                    .cloned()
                    .unwrap_or_default()
            })
            .collect();
        let index_of = |x: ObjId, token: &str| -> Result<usize, CSetError> {
            carrier_vecs[x.0]
                .iter()
                .position(|t| t == token)
                .ok_or_else(|| CSetError::UnknownToken {
                    obj: base.obj_name(x).to_owned(),
                    token: token.to_owned(),
                })
        };
        let mut action_vecs = Vec::with_capacity(base.morphism_count());
        for m in base.morphisms() {
            let (src, tgt) = (base.src(m), base.tgt(m));
            let src_carrier = &carrier_vecs[src.0];
            match actions.get(base.mor_name(m)) {
                Some(map) => {
                    let mut act = Vec::with_capacity(src_carrier.len());
                    for token in src_carrier {
                        let out = map.get(token).ok_or_else(|| CSetError::NonTotalFunction {
                            mor: base.mor_name(m).to_owned(),
                        })?;
                        act.push(index_of(tgt, out)?);
                    }
                    action_vecs.push(act);
                }
                None if base.is_identity(m) => {
                    action_vecs.push((0..src_carrier.len()).collect());
                }
                None if src_carrier.is_empty() => action_vecs.push(Vec::new()),
                None => {
                    return Err(CSetError::NonTotalFunction {
                        mor: base.mor_name(m).to_owned(),
                    })
                }
            }
        }
        CSet::new(base, carrier_vecs, action_vecs)
    }

    /// The empty C-set.
    pub fn empty(base: Arc<Category>) -> CSet {
        let carriers = vec![Vec::new(); base.object_count()];
        let actions = vec![Vec::new(); base.morphism_count()];
        CSet {
            base,
            carriers,
            actions,
        }
    }

    /// The C-set with a singleton carrier `*` at every object.
    pub fn point(base: Arc<Category>) -> CSet {
        let carriers = vec![vec!["*".to_owned()]; base.object_count()];
        let actions = vec![vec![0]; base.morphism_count()];
        CSet {
            base,
            carriers,
            actions,
        }
    }

    /// The representable C-set `Hom(x, -)`: carriers are hom-sets, and a
    /// morphism acts by composing on the right.
    pub fn representable(base: Arc<Category>, x: ObjId) -> CSet {
        let homs: Vec<Vec<MorId>> = base.objects().map(|y| base.hom(x, y)).collect();
        let carriers: Vec<Vec<String>> = homs
            .iter()
            .map(|h| h.iter().map(|&f| base.mor_name(f).to_owned()).collect())
            .collect();
        let actions = base
            .morphisms()
            .map(|g| {
                homs[base.src(g).0]
                    .iter()
                    .map(|&f| {
                        let fg = base.compose(f, g);
                        homs[base.tgt(g).0]
                            .iter()
                            .position(|&h| h == fg)
                            .expect("composite lands in the target hom-set")
                    })
                    .collect()
            })
            .collect();
        CSet {
            base,
            carriers,
            actions,
        }
    }

    pub fn base(&self) -> &Arc<Category> {
        &self.base
    }

    pub fn carrier(&self, x: ObjId) -> &[String] {
        &self.carriers[x.0]
    }

    pub fn action(&self, m: MorId) -> &[usize] {
        &self.actions[m.0]
    }

    pub fn apply(&self, m: MorId, e: Elem) -> Elem {
        debug_assert_eq!(self.base.src(m), e.at);
        Elem {
            at: self.base.tgt(m),
            index: self.actions[m.0][e.index],
        }
    }

    pub fn token(&self, e: Elem) -> &str {
        &self.carriers[e.at.0][e.index]
    }

    pub fn elem(&self, obj: &str, token: &str) -> Option<Elem> {
        let at = self.base.obj(obj)?;
        let index = self.carriers[at.0].iter().position(|t| t == token)?;
        Some(Elem { at, index })
    }

    /// All elements in canonical (object-major) order.
    pub fn elements(&self) -> Vec<Elem> {
        self.base
            .objects()
            .flat_map(|x| (0..self.carriers[x.0].len()).map(move |index| Elem { at: x, index }))
            .collect()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.carriers.iter().map(|c| c.len()).collect()
    }

    fn same_base(&self, other: &CSet) -> Result<(), CSetError> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(CSetError::BaseMismatch)
        }
    }

    /// Disjoint union; tokens are tagged `L:`/`R:` to stay disjoint.
    pub fn disjoint_union(&self, other: &CSet) -> Result<CSet, CSetError> {
        self.same_base(other)?;
        let carriers: Vec<Vec<String>> = self
            .carriers
            .iter()
            .zip(&other.carriers)
            .map(|(a, b)| {
                a.iter()
                    .map(|t| format!("L:{t}"))
                    .chain(b.iter().map(|t| format!("R:{t}")))
                    .collect()
            })
            .collect();
        let actions = self
            .base
            .morphisms()
            .map(|m| {
                let offset = self.carriers[self.base.tgt(m).0].len();
                let left = self.actions[m.0].iter().copied();
                let right = other.actions[m.0].iter().map(|&v| v + offset);
                left.chain(right).collect()
            })
            .collect();
        Ok(CSet {
            base: self.base.clone(),
            carriers,
            actions,
        })
    }

    /// Pointwise product; tokens are paired as `(a,b)`.
    pub fn product(&self, other: &CSet) -> Result<CSet, CSetError> {
        self.same_base(other)?;
        let carriers: Vec<Vec<String>> = self
            .carriers
            .iter()
            .zip(&other.carriers)
            .map(|(a, b)| {
                a.iter()
                    .flat_map(|s| b.iter().map(move |t| format!("({s},{t})")))
                    .collect()
            })
            .collect();
        let actions = self
            .base
            .morphisms()
            .map(|m| {
                let bw_src = other.carriers[self.base.src(m).0].len();
                let bw_tgt = other.carriers[self.base.tgt(m).0].len();
                (0..self.actions[m.0].len() * bw_src)
                    .map(|pair| {
                        let (i, j) = (pair / bw_src, pair % bw_src);
                        self.actions[m.0][i] * bw_tgt + other.actions[m.0][j]
                    })
                    .collect()
            })
            .collect();
        Ok(CSet {
            base: self.base.clone(),
            carriers,
            actions,
        })
    }

    /// The C-subset generated by `u`: at each object `y`, the image of `u`
    /// under every morphism from `u.at` to `y`. Closed by hom-composition.
    pub fn generated_subset(&self, u: Elem) -> SubCSet {
        let mut sets = vec![BTreeSet::new(); self.base.object_count()];
        for m in self.base.morphisms() {
            if self.base.src(m) == u.at {
                sets[self.base.tgt(m).0].insert(self.actions[m.0][u.index]);
            }
        }
        SubCSet { sets }
    }

    /// The walk-orbit of `u`: the smallest per-object family containing
    /// `u` and closed under forward images and full preimages of every
    /// morphism action.
    pub fn walk_orbit(&self, u: Elem) -> SubCSet {
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.base.object_count()];
        sets[u.at.0].insert(u.index);
        loop {
            let mut grew = false;
            for m in self.base.morphisms() {
                let (s, t) = (self.base.src(m).0, self.base.tgt(m).0);
                let forward: Vec<usize> = sets[s]
                    .iter()
                    .map(|&e| self.actions[m.0][e])
                    .collect();
                for v in forward {
                    grew |= sets[t].insert(v);
                }
                let backward: Vec<usize> = (0..self.actions[m.0].len())
                    .filter(|&e| sets[t].contains(&self.actions[m.0][e]))
                    .collect();
                for e in backward {
                    grew |= sets[s].insert(e);
                }
            }
            if !grew {
                return SubCSet { sets };
            }
        }
    }

    /// Does the family satisfy the C-subset condition (forward images stay
    /// inside the family)?
    pub fn is_closed_subset(&self, sub: &SubCSet) -> bool {
        self.base.morphisms().all(|m| {
            let (s, t) = (self.base.src(m).0, self.base.tgt(m).0);
            sub.sets[s]
                .iter()
                .all(|&e| sub.sets[t].contains(&self.actions[m.0][e]))
        })
    }

    pub fn is_whole(&self, sub: &SubCSet) -> bool {
        sub.sets
            .iter()
            .zip(&self.carriers)
            .all(|(s, c)| s.len() == c.len())
    }

    /// Realizes a closed family as a C-set of its own (tokens preserved).
    pub fn realize(&self, sub: &SubCSet) -> CSet {
        debug_assert!(self.is_closed_subset(sub));
        let picked: Vec<Vec<usize>> = sub.sets.iter().map(|s| s.iter().copied().collect()).collect();
        let position: Vec<BTreeMap<usize, usize>> = picked
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &e)| (e, i)).collect())
            .collect();
        let carriers = picked
            .iter()
            .enumerate()
            .map(|(x, p)| p.iter().map(|&e| self.carriers[x][e].clone()).collect())
            .collect();
        let actions = self
            .base
            .morphisms()
            .map(|m| {
                let (s, t) = (self.base.src(m).0, self.base.tgt(m).0);
                picked[s]
                    .iter()
                    .map(|&e| position[t][&self.actions[m.0][e]])
                    .collect()
            })
            .collect();
        CSet {
            base: self.base.clone(),
            carriers,
            actions,
        }
    }

    /// Splits into indecomposable components.
    ///
    /// Components are extracted as walk-orbits of the least unvisited
    /// element, so the list is ordered by the (object, index) of each
    /// component's least element. Empty C-sets decompose into nothing.
    pub fn decompose(&self) -> Vec<CSet> {
        let mut seen: Vec<Vec<bool>> = self.carriers.iter().map(|c| vec![false; c.len()]).collect();
        let mut components = Vec::new();
        for e in self.elements() {
            if seen[e.at.0][e.index] {
                continue;
            }
            let orbit = self.walk_orbit(e);
            for (x, set) in orbit.sets.iter().enumerate() {
                for &i in set {
                    seen[x][i] = true;
                }
            }
            components.push(self.realize(&orbit));
        }
        components
    }

    /// True iff non-empty and a single walk-orbit exhausts the C-set.
    pub fn is_indecomposable(&self) -> bool {
        match self.elements().first() {
            None => false,
            Some(&e) => self.is_whole(&self.walk_orbit(e)),
        }
    }

    /// True iff every element generates the whole C-set.
    ///
    /// Simplicity is only defined for non-empty C-sets.
    pub fn is_simple(&self) -> Result<bool, CSetError> {
        if self.is_empty() {
            return Err(CSetError::EmptyCSet);
        }
        Ok(self
            .elements()
            .into_iter()
            .all(|e| self.is_whole(&self.generated_subset(e))))
    }

    /// Enumerates every subfunctor (closed per-object family), including
    /// the empty one and the whole one, in mask order over the canonical
    /// element enumeration.
    pub fn subfunctors(&self, bound: usize) -> Result<Vec<SubCSet>, CSetError> {
        let total = self.total_size();
        if total > bound {
            return Err(CSetError::TooLarge {
                size: total,
                bound,
            });
        }
        let elems = self.elements();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << total) {
            let mut sets = vec![BTreeSet::new(); self.base.object_count()];
            for (bit, e) in elems.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    sets[e.at.0].insert(e.index);
                }
            }
            let sub = SubCSet { sets };
            if self.is_closed_subset(&sub) {
                out.push(sub);
            }
        }
        Ok(out)
    }

    /// Restriction along a subcategory inclusion: keeps the carriers of
    /// the selected objects and the actions of the selected morphisms.
    pub fn restrict(&self, sub: &Subcategory) -> Result<CSet, CSetError> {
        if sub.parent().as_ref() != self.base.as_ref() {
            return Err(CSetError::NotASubcategory);
        }
        let inc = sub.inclusion();
        let carriers = sub
            .cat()
            .objects()
            .map(|d| self.carriers[inc.on_obj(d).0].clone())
            .collect();
        let actions = sub
            .cat()
            .morphisms()
            .map(|m| self.actions[inc.on_mor(m).0].clone())
            .collect();
        Ok(CSet {
            base: sub.cat().clone(),
            carriers,
            actions,
        })
    }

    /// Set-valued action of a walk on a set of elements at the walk's
    /// start: forward steps take images, backward steps take full
    /// preimages. The empty set absorbs.
    pub fn walk_image(&self, walk: &Walk, start: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut current = start.clone();
        let mut at = walk.start();
        for &(m, dir) in walk.steps() {
            let act = &self.actions[m.0];
            current = match dir {
                Direction::Forward => {
                    debug_assert_eq!(self.base.src(m), at);
                    at = self.base.tgt(m);
                    current.iter().map(|&e| act[e]).collect()
                }
                Direction::Backward => {
                    debug_assert_eq!(self.base.tgt(m), at);
                    at = self.base.src(m);
                    (0..act.len()).filter(|&e| current.contains(&act[e])).collect()
                }
            };
            if current.is_empty() {
                return current;
            }
        }
        current
    }

    /// Searches for a natural isomorphism, using invariant pruning (sizes,
    /// image sizes, in-degree profiles) and backtracking with forward
    /// propagation.
    pub fn isomorphism(&self, other: &CSet) -> Result<Option<NatTrans>, CSetError> {
        self.same_base(other)?;
        if self.sizes() != other.sizes() {
            return Ok(None);
        }
        for m in self.base.morphisms() {
            let image_size = |act: &Vec<usize>| act.iter().collect::<BTreeSet<_>>().len();
            if image_size(&self.actions[m.0]) != image_size(&other.actions[m.0]) {
                return Ok(None);
            }
        }
        let sig_a = self.degree_signatures();
        let sig_b = other.degree_signatures();
        for x in 0..self.carriers.len() {
            let mut ms: Vec<_> = sig_a[x].clone();
            let mut ns: Vec<_> = sig_b[x].clone();
            ms.sort();
            ns.sort();
            if ms != ns {
                return Ok(None);
            }
        }

        let mut map: Vec<Vec<Option<usize>>> =
            self.carriers.iter().map(|c| vec![None; c.len()]).collect();
        let mut used: Vec<Vec<bool>> =
            self.carriers.iter().map(|c| vec![false; c.len()]).collect();
        let elems = self.elements();
        if self.backtrack(other, &sig_a, &sig_b, &elems, 0, &mut map, &mut used) {
            let components = map
                .into_iter()
                .map(|row| row.into_iter().map(|v| v.unwrap()).collect())
                .collect();
            let nt = NatTrans::new(self.clone(), other.clone(), components)?;
            Ok(Some(nt))
        } else {
            Ok(None)
        }
    }

    /// In-degree profile of every element: for each morphism into the
    /// element's object, the size of the element's preimage.
    fn degree_signatures(&self) -> Vec<Vec<Vec<usize>>> {
        self.base
            .objects()
            .map(|x| {
                let incoming: Vec<MorId> = self
                    .base
                    .morphisms()
                    .filter(|&m| self.base.tgt(m) == x)
                    .collect();
                (0..self.carriers[x.0].len())
                    .map(|e| {
                        incoming
                            .iter()
                            .map(|&m| self.actions[m.0].iter().filter(|&&v| v == e).count())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn backtrack(
        &self,
        other: &CSet,
        sig_a: &[Vec<Vec<usize>>],
        sig_b: &[Vec<Vec<usize>>],
        elems: &[Elem],
        pos: usize,
        map: &mut Vec<Vec<Option<usize>>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let next = elems[pos..]
            .iter()
            .position(|e| map[e.at.0][e.index].is_none())
            .map(|off| pos + off);
        let Some(pos) = next else {
            return true;
        };
        let e = elems[pos];
        for v in 0..other.carriers[e.at.0].len() {
            if used[e.at.0][v] || sig_a[e.at.0][e.index] != sig_b[e.at.0][v] {
                continue;
            }
            let mut trail = Vec::new();
            if self.force(other, sig_a, sig_b, e, v, map, used, &mut trail)
                && self.backtrack(other, sig_a, sig_b, elems, pos, map, used)
            {
                return true;
            }
            for (x, i) in trail {
                let w = map[x][i].take().unwrap();
                used[x][w] = false;
            }
        }
        false
    }

    /// Assigns `e -> v` and propagates forced images along every morphism.
    #[allow(clippy::too_many_arguments)]
    fn force(
        &self,
        other: &CSet,
        sig_a: &[Vec<Vec<usize>>],
        sig_b: &[Vec<Vec<usize>>],
        e: Elem,
        v: usize,
        map: &mut [Vec<Option<usize>>],
        used: &mut [Vec<bool>],
        trail: &mut Vec<(usize, usize)>,
    ) -> bool {
        let mut queue = vec![(e, v)];
        while let Some((e, v)) = queue.pop() {
            match map[e.at.0][e.index] {
                Some(w) => {
                    if w != v {
                        return false;
                    }
                    continue;
                }
                None => {
                    if used[e.at.0][v] || sig_a[e.at.0][e.index] != sig_b[e.at.0][v] {
                        return false;
                    }
                    map[e.at.0][e.index] = Some(v);
                    used[e.at.0][v] = true;
                    trail.push((e.at.0, e.index));
                }
            }
            for m in self.base.morphisms() {
                if self.base.src(m) == e.at {
                    let img = Elem {
                        at: self.base.tgt(m),
                        index: self.actions[m.0][e.index],
                    };
                    queue.push((img, other.actions[m.0][v]));
                }
            }
        }
        true
    }
}

/// A natural transformation between two C-sets over the same base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    src: CSet,
    tgt: CSet,
    components: Vec<Vec<usize>>,
}

impl NatTrans {
    /// Validates every naturality square before returning.
    pub fn new(src: CSet, tgt: CSet, components: Vec<Vec<usize>>) -> Result<NatTrans, CSetError> {
        src.same_base(&tgt)?;
        if components.len() != src.carriers.len() {
            return Err(CSetError::ComponentMismatch);
        }
        for (x, comp) in components.iter().enumerate() {
            if comp.len() != src.carriers[x].len()
                || comp.iter().any(|&v| v >= tgt.carriers[x].len())
            {
                return Err(CSetError::ComponentMismatch);
            }
        }
        let base = src.base.clone();
        for m in base.morphisms() {
            let (s, t) = (base.src(m).0, base.tgt(m).0);
            for e in 0..src.carriers[s].len() {
                if components[t][src.actions[m.0][e]] != tgt.actions[m.0][components[s][e]] {
                    return Err(CSetError::NotNatural {
                        mor: base.mor_name(m).to_owned(),
                    });
                }
            }
        }
        Ok(NatTrans {
            src,
            tgt,
            components,
        })
    }

    pub fn src(&self) -> &CSet {
        &self.src
    }

    pub fn tgt(&self) -> &CSet {
        &self.tgt
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, e: Elem) -> Elem {
        Elem {
            at: e.at,
            index: self.components[e.at.0][e.index],
        }
    }

    pub fn is_injective_at(&self, x: ObjId) -> bool {
        let comp = &self.components[x.0];
        comp.iter().collect::<BTreeSet<_>>().len() == comp.len()
    }

    pub fn injective_components(&self) -> Vec<bool> {
        self.src
            .base
            .objects()
            .map(|x| self.is_injective_at(x))
            .collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.src
            .base
            .objects()
            .all(|x| self.is_injective_at(x) && self.src.carriers[x.0].len() == self.tgt.carriers[x.0].len())
    }

    /// Composes two transformations (self first, then `other`).
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans, CSetError> {
        if self.tgt != other.src {
            return Err(CSetError::ComponentMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().map(|&v| b[v]).collect())
            .collect();
        NatTrans::new(self.src.clone(), other.tgt.clone(), components)
    }

    /// Inverts a bijective transformation.
    pub fn inverted(&self) -> Option<NatTrans> {
        if !self.is_bijective() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|comp| {
                let mut inv = vec![0; comp.len()];
                for (e, &v) in comp.iter().enumerate() {
                    inv[v] = e;
                }
                inv
            })
            .collect();
        Some(NatTrans::new(self.tgt.clone(), self.src.clone(), components).expect("inverse is natural"))
    }

    /// The identity transformation on a C-set.
    pub fn identity(cset: &CSet) -> NatTrans {
        let components = cset.carriers.iter().map(|c| (0..c.len()).collect()).collect();
        NatTrans {
            src: cset.clone(),
            tgt: cset.clone(),
            components,
        }
    }
}

/// Enumerates every natural transformation from `src` to `tgt`, in
/// lexicographic component order.
///
/// The raw candidate space (product of function counts) is bounded first;
/// naturality pruning happens per assignment during the search.
pub fn nat_trans_between(
    src: &CSet,
    tgt: &CSet,
    bound: usize,
) -> Result<Vec<NatTrans>, CSetError> {
    src.same_base(tgt)?;
    let mut count: u128 = 1;
    for x in src.base.objects() {
        let (a, b) = (src.carrier(x).len(), tgt.carrier(x).len());
        if a > 0 && b == 0 {
            return Ok(Vec::new());
        }
        if a > 0 {
            count = count.saturating_mul((b as u128).saturating_pow(a as u32));
        }
    }
    if count > bound as u128 {
        return Err(CSetError::TooLarge {
            size: usize::try_from(count.min(usize::MAX as u128)).unwrap_or(usize::MAX),
            bound,
        });
    }

    let elems = src.elements();
    let mut components: Vec<Vec<Option<usize>>> =
        src.carriers.iter().map(|c| vec![None; c.len()]).collect();
    let mut out = Vec::new();
    enumerate_rec(src, tgt, &elems, 0, &mut components, &mut out);
    Ok(out)
}

fn enumerate_rec(
    src: &CSet,
    tgt: &CSet,
    elems: &[Elem],
    pos: usize,
    components: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<NatTrans>,
) {
    if pos == elems.len() {
        let comps = components
            .iter()
            .map(|row| row.iter().map(|v| v.unwrap()).collect())
            .collect();
        out.push(
            NatTrans::new(src.clone(), tgt.clone(), comps)
                .expect("pruned assignment is natural"),
        );
        return;
    }
    let e = elems[pos];
    for v in 0..tgt.carriers[e.at.0].len() {
        // Assign first, so constraints through self-mapping elements see
        // the candidate value.
        components[e.at.0][e.index] = Some(v);
        if naturality_holds_at(src, tgt, components, e) {
            enumerate_rec(src, tgt, elems, pos + 1, components, out);
        }
        components[e.at.0][e.index] = None;
    }
}

/// Checks every naturality constraint touching `e` whose other endpoint
/// is already assigned.
fn naturality_holds_at(
    src: &CSet,
    tgt: &CSet,
    components: &[Vec<Option<usize>>],
    e: Elem,
) -> bool {
    let base = &src.base;
    let v = components[e.at.0][e.index].expect("candidate assigned");
    for m in base.morphisms() {
        if base.src(m) == e.at {
            let j = src.actions[m.0][e.index];
            if let Some(w) = components[base.tgt(m).0][j] {
                if tgt.actions[m.0][v] != w {
                    return false;
                }
            }
        }
        if base.tgt(m) == e.at {
            let s = base.src(m).0;
            for k in 0..src.actions[m.0].len() {
                if src.actions[m.0][k] == e.index {
                    if let Some(w) = components[s][k] {
                        if tgt.actions[m.0][w] != v {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Backtracking search over all functorial action assignments for fixed
/// carrier sizes. Identity actions are pre-assigned; every composable pair
/// propagates forced values in both directions before branching.
///
/// `visit` returns `false` to stop the search early.
pub(crate) fn search_csets(
    base: &Arc<Category>,
    sizes: &[usize],
    shuffle: Option<&mut dyn FnMut(&mut Vec<usize>)>,
    visit: &mut dyn FnMut(CSet) -> bool,
) {
    debug_assert_eq!(sizes.len(), base.object_count());
    let triples: Vec<(MorId, MorId, MorId)> = base
        .morphisms()
        .flat_map(|f| {
            base.morphisms()
                .filter(move |&g| base.composable(f, g))
                .map(move |g| (f, g))
        })
        .filter(|&(f, g)| !base.is_identity(f) && !base.is_identity(g))
        .map(|(f, g)| (f, g, base.compose(f, g)))
        .collect();

    let mut state: Vec<Vec<Option<usize>>> = base
        .morphisms()
        .map(|m| vec![None; sizes[base.src(m).0]])
        .collect();
    for x in base.objects() {
        let id = base.identity(x);
        for e in 0..sizes[x.0] {
            state[id.0][e] = Some(e);
        }
    }

    let vars: Vec<(MorId, usize)> = base
        .morphisms()
        .filter(|&m| !base.is_identity(m))
        .flat_map(|m| (0..sizes[base.src(m).0]).map(move |e| (m, e)))
        .collect();

    let mut orders: Vec<Vec<usize>> = base
        .morphisms()
        .map(|m| (0..sizes[base.tgt(m).0]).collect())
        .collect();
    if let Some(shuffle) = shuffle {
        for order in &mut orders {
            shuffle(order);
        }
    }

    if !propagate(&triples, &mut state) {
        return;
    }
    search_rec(base, sizes, &triples, &vars, &orders, state, visit);
}

fn propagate(triples: &[(MorId, MorId, MorId)], state: &mut [Vec<Option<usize>>]) -> bool {
    loop {
        let mut changed = false;
        for &(f, g, h) in triples {
            for e in 0..state[f.0].len() {
                let Some(a) = state[f.0][e] else { continue };
                match (state[g.0][a], state[h.0][e]) {
                    (Some(b), Some(c)) => {
                        if b != c {
                            return false;
                        }
                    }
                    (Some(b), None) => {
                        state[h.0][e] = Some(b);
                        changed = true;
                    }
                    (None, Some(c)) => {
                        state[g.0][a] = Some(c);
                        changed = true;
                    }
                    (None, None) => {}
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search_rec(
    base: &Arc<Category>,
    sizes: &[usize],
    triples: &[(MorId, MorId, MorId)],
    vars: &[(MorId, usize)],
    orders: &[Vec<usize>],
    state: Vec<Vec<Option<usize>>>,
    visit: &mut dyn FnMut(CSet) -> bool,
) -> bool {
    let next = vars.iter().find(|&&(m, e)| state[m.0][e].is_none());
    let Some(&(m, e)) = next else {
        let carriers = sizes
            .iter()
            .map(|&n| (1..=n).map(|i| i.to_string()).collect())
            .collect();
        let actions = state
            .iter()
            .map(|row| row.iter().map(|v| v.unwrap()).collect())
            .collect();
        let cset = CSet::new(base.clone(), carriers, actions)
            .expect("propagated assignment is functorial");
        return visit(cset);
    };
    for &v in &orders[m.0] {
        let mut next_state = state.clone();
        next_state[m.0][e] = Some(v);
        if propagate(triples, &mut next_state)
            && !search_rec(base, sizes, triples, vars, orders, next_state, visit)
        {
            return false;
        }
    }
    true
}

/// Enumerates every C-set with the given carrier sizes, in canonical
/// order, calling `visit` for each; `visit` returns `false` to stop.
pub fn for_each_cset(base: &Arc<Category>, sizes: &[usize], visit: &mut dyn FnMut(CSet) -> bool) {
    search_csets(base, sizes, None, visit);
}

/// Draws a uniformly-sized random valid C-set with carriers of at most
/// `max_per_object` elements. Deterministic for a fixed RNG state.
pub fn random_cset<R: Rng>(base: &Arc<Category>, max_per_object: usize, rng: &mut R) -> CSet {
    loop {
        let sizes: Vec<usize> = (0..base.object_count())
            .map(|_| rng.gen_range(0..=max_per_object))
            .collect();
        let mut found = None;
        let mut shuffler = |order: &mut Vec<usize>| order.shuffle(rng);
        search_csets(base, &sizes, Some(&mut shuffler), &mut |cset| {
            found = Some(cset);
            false
        });
        if let Some(cset) = found {
            return cset;
        }
        // Unrealizable size tuple (e.g. a nonempty carrier mapping into an
        // empty one); resample.
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn omega_examples_validate() {
        let omega2 = examples::omega_arrow(2);
        assert_eq!(omega2.sizes(), vec![2, 1]);
        let omega0 = examples::omega_arrow(0);
        assert_eq!(omega0.sizes(), vec![0, 1]);
    }

    #[test]
    fn identity_action_must_be_identity() {
        let arrow = examples::arrow();
        // Swap two elements under 1x.
        let err = CSet::new(
            arrow.clone(),
            vec![vec!["1".into(), "2".into()], vec!["1".into()]],
            vec![vec![1, 0], vec![0], vec![0, 0]],
        )
        .unwrap_err();
        assert!(matches!(err, CSetError::IdentityNotIdentity { .. }));
    }

    #[test]
    fn functoriality_checked() {
        let c2 = examples::delooping_cyclic(2);
        // g acts as a transposition: fine. g then g = e must be identity.
        let ok = CSet::new(
            c2.clone(),
            vec![vec!["1".into(), "2".into()]],
            vec![vec![0, 1], vec![1, 0]],
        );
        assert!(ok.is_ok());
        // g acting as a constant map breaks g then g = e.
        let err = CSet::new(
            c2,
            vec![vec!["1".into(), "2".into()]],
            vec![vec![0, 1], vec![0, 0]],
        )
        .unwrap_err();
        assert!(matches!(err, CSetError::CompositionMismatch { .. }));
    }

    #[test]
    fn from_parts_implies_identities_and_empty_functions() {
        let arrow = examples::arrow();
        let carriers = BTreeMap::from([("y".to_owned(), vec!["1".to_owned()])]);
        // Omega_0: empty carrier at x; the action of `a` may be omitted.
        let cset = CSet::from_parts(arrow, &carriers, &BTreeMap::new()).unwrap();
        assert_eq!(cset.sizes(), vec![0, 1]);
    }

    #[test]
    fn disjoint_union_counts_and_unit() {
        let omega1 = examples::omega_arrow(1);
        let u = omega1.disjoint_union(&omega1).unwrap();
        assert_eq!(u.sizes(), vec![2, 2]);
        let empty = CSet::empty(examples::arrow());
        let ue = omega1.disjoint_union(&empty).unwrap();
        assert!(omega1.isomorphism(&ue).unwrap().is_some());
    }

    #[test]
    fn product_unit_and_counts() {
        let c2 = examples::delooping_cyclic(2);
        let regular = CSet::representable(c2.clone(), ObjId(0));
        let point = CSet::point(c2.clone());
        let prod = regular.product(&regular).unwrap();
        assert_eq!(prod.total_size(), 4);
        let unit = point.product(&regular).unwrap();
        assert!(unit.isomorphism(&regular).unwrap().is_some());
    }

    #[test]
    fn base_mismatch_detected() {
        let omega1 = examples::omega_arrow(1);
        let point = CSet::point(examples::delooping_cyclic(2));
        assert_eq!(
            omega1.disjoint_union(&point).unwrap_err(),
            CSetError::BaseMismatch
        );
    }

    #[test]
    fn generated_subset_of_omega_n() {
        let omega3 = examples::omega_arrow(3);
        // The element 1 of Omega_3(y) generates nothing at x.
        let at_y = omega3.elem("y", "1").unwrap();
        let gen = omega3.generated_subset(at_y);
        assert!(gen.sets()[0].is_empty());
        assert_eq!(gen.sets()[1].len(), 1);
        // An element k at x generates {k} at x and {1} at y.
        let at_x = omega3.elem("x", "2").unwrap();
        let gen = omega3.generated_subset(at_x);
        assert_eq!(gen.sizes(), vec![1, 1]);
        assert!(gen.contains(at_x));
    }

    #[test]
    fn walk_orbit_reaches_preimages() {
        let omega3 = examples::omega_arrow(3);
        let at_y = omega3.elem("y", "1").unwrap();
        let orbit = omega3.walk_orbit(at_y);
        assert_eq!(orbit.sizes(), vec![3, 1]);
        assert!(omega3.is_whole(&orbit));
        // generated is always contained in the orbit.
        for e in omega3.elements() {
            assert!(omega3
                .generated_subset(e)
                .is_contained_in(&omega3.walk_orbit(e)));
        }
    }

    #[test]
    fn decompose_unions() {
        let omega2 = examples::omega_arrow(2);
        let omega3 = examples::omega_arrow(3);
        let both = omega2.disjoint_union(&omega3).unwrap();
        let parts = both.decompose();
        assert_eq!(parts.len(), 2);
        let mut sizes: Vec<Vec<usize>> = parts.iter().map(|p| p.sizes()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![vec![2, 1], vec![3, 1]]);
        for p in &parts {
            assert!(p.is_indecomposable());
        }
        assert!(CSet::empty(examples::arrow()).decompose().is_empty());
    }

    #[test]
    fn decompose_reassembles() {
        let omega1 = examples::omega_arrow(1);
        let omega0 = examples::omega_arrow(0);
        let sum = omega1
            .disjoint_union(&omega0)
            .unwrap()
            .disjoint_union(&omega0)
            .unwrap();
        let parts = sum.decompose();
        assert_eq!(parts.len(), 3);
        let mut rebuilt = parts[0].clone();
        for p in &parts[1..] {
            rebuilt = rebuilt.disjoint_union(p).unwrap();
        }
        assert!(rebuilt.isomorphism(&sum).unwrap().is_some());
    }

    #[test]
    fn three_cycle_over_loop_is_indecomposable() {
        let omega = examples::omega_loop(3);
        assert_eq!(omega.sizes(), vec![3]);
        assert!(omega.is_indecomposable());
    }

    #[test]
    fn simplicity_examples() {
        assert!(examples::omega_arrow(0).is_simple().unwrap());
        assert!(!examples::omega_arrow(1).is_simple().unwrap());
        // Indecomposable but not simple.
        let omega2 = examples::omega_arrow(2);
        assert!(omega2.is_indecomposable());
        assert!(!omega2.is_simple().unwrap());
        let c2 = examples::delooping_cyclic(2);
        let regular = CSet::representable(c2.clone(), ObjId(0));
        assert!(regular.is_simple().unwrap());
        assert_eq!(
            CSet::empty(c2).is_simple().unwrap_err(),
            CSetError::EmptyCSet
        );
    }

    #[test]
    fn subfunctor_counts() {
        let omega1 = examples::omega_arrow(1);
        assert_eq!(omega1.subfunctors(12).unwrap().len(), 3);
        let omega0 = examples::omega_arrow(0);
        assert_eq!(omega0.subfunctors(12).unwrap().len(), 2);
        let point = CSet::point(examples::delooping_cyclic(2));
        assert_eq!(point.subfunctors(12).unwrap().len(), 2);
        let big = examples::omega_arrow(20);
        assert!(matches!(
            big.subfunctors(12),
            Err(CSetError::TooLarge { .. })
        ));
    }

    #[test]
    fn isomorphism_respects_relabeling() {
        let omega2 = examples::omega_arrow(2);
        let relabeled = CSet::new(
            examples::arrow(),
            vec![vec!["a".into(), "b".into()], vec!["z".into()]],
            vec![vec![0, 1], vec![0], vec![0, 0]],
        )
        .unwrap();
        let iso = omega2.isomorphism(&relabeled).unwrap().unwrap();
        assert!(iso.is_bijective());
        assert!(omega2
            .isomorphism(&examples::omega_arrow(3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn isomorphism_over_c3_cycles() {
        let c3 = examples::delooping_cyclic(3);
        let cycle = CSet::new(
            c3.clone(),
            vec![vec!["1".into(), "2".into(), "3".into()]],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        )
        .unwrap();
        let inverse_cycle = CSet::new(
            c3,
            vec![vec!["1".into(), "2".into(), "3".into()]],
            vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]],
        )
        .unwrap();
        assert!(cycle.isomorphism(&inverse_cycle).unwrap().is_some());
    }

    #[test]
    fn restrict_to_full_subcategory_is_identity() {
        let path = examples::path();
        let rep = CSet::representable(path.clone(), ObjId(0));
        let full = Subcategory::full(path);
        let restricted = rep.restrict(&full).unwrap();
        assert_eq!(restricted.sizes(), rep.sizes());
        // Restricting over the wrong parent is an error.
        let sub_of_arrow = Subcategory::full(examples::arrow());
        assert_eq!(
            rep.restrict(&sub_of_arrow).unwrap_err(),
            CSetError::NotASubcategory
        );
    }

    #[test]
    fn nat_trans_enumeration_counts() {
        let c2 = examples::delooping_cyclic(2);
        let regular = CSet::representable(c2, ObjId(0));
        // G-set endomorphisms of the regular C_2-set: 2.
        let nts = nat_trans_between(&regular, &regular, 10_000).unwrap();
        assert_eq!(nts.len(), 2);
    }

    #[test]
    fn random_csets_are_valid_and_deterministic() {
        use rand::SeedableRng;
        let base = examples::path();
        let mut rng1 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = random_cset(&base, 3, &mut rng1);
        let b = random_cset(&base, 3, &mut rng2);
        assert_eq!(a, b);
        assert!(a.total_size() <= 9);
    }
}
