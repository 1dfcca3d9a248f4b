/*! Restriction and induction along a subcategory inclusion.

For a subcategory `D` of `C`, restriction and induction are realized by
biset composition: `r(Psi)` composes the `(D, C)` hom-biset with `Psi`,
and `i(Omega)` composes the `(C, D)` hom-biset with `Omega`. Elements of
`i(Omega)(c)` are classes `[f, b]` with `f: (iota z) -> c` in `C` and
an element `b` of `Omega(z)`.

The two functors are adjoint. This module keeps the explicit hom-set
bijections: [`AdjointPair::alpha`] turns a transformation
`i(Omega) -> Psi` into `Omega -> r(Psi)` by evaluating at `[1, a]`, and
[`AdjointPair::beta`] goes back by `[f, b] |-> Psi(f)(theta(b))`. `beta`
evaluates on *every* member of each class and fails loudly if values
disagree rather than trusting well-definedness. [`AdjointPair::verify`]
enumerates both hom-sets exhaustively (up to a candidate bound) and
checks that the bijections are mutually inverse on every element.

The unit `eta: Omega -> r(i(Omega))` sends `a` to the class of
`[1, [1, a]]`; its per-component injectivity is what the infinite-type
witness construction in [`crate::characterize`] relies on.
*/

use std::sync::Arc;

use thiserror::Error;

use crate::biset::{self, Biset, BisetError, Composition};
use crate::category::{Functor, MorId, ObjId, Subcategory};
use crate::cset::{nat_trans_between, CSet, CSetError, NatTrans};

/// Default cap on the raw candidate count when enumerating hom-sets.
pub const DEFAULT_HOM_BOUND: usize = 10_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AdjunctionError {
    #[error("the C-set is not over the expected category")]
    BaseMismatch,
    #[error("the transformation does not connect the expected C-sets")]
    WrongHomSet,
    #[error("value on a class depends on the representative: members ({m1}) and ({m2}) disagree")]
    IllDefinedOnClasses { m1: String, m2: String },
    #[error(transparent)]
    Biset(#[from] BisetError),
    #[error(transparent)]
    CSet(#[from] CSetError),
}

/// A subcategory inclusion with its restriction and induction bisets.
#[derive(Clone, Debug)]
pub struct AdjunctionContext {
    sub: Subcategory,
    restriction: Biset,
    induction: Biset,
}

/// `i(Omega)` together with its class structure.
#[derive(Clone, Debug)]
pub struct Induced {
    cset: CSet,
    comp: Composition,
}

impl Induced {
    /// The induced C-set over the parent category.
    pub fn cset(&self) -> &CSet {
        &self.cset
    }

    /// Class index of `[f, b]` in the fiber at `c`, with `f` a parent
    /// morphism into `c` starting at the image of the middle object `y`.
    pub fn class_of(&self, c: ObjId, y: ObjId, f_index: usize, b: usize) -> Option<usize> {
        self.comp.class_of(c, ObjId(0), y, f_index, b)
    }

    pub fn class_members(&self, c: ObjId, class: usize) -> &[(ObjId, usize, usize)] {
        self.comp.class_members(c, ObjId(0), class)
    }
}

/// `r(Psi)` together with its class structure and the `Psi` it restricts.
#[derive(Clone, Debug)]
pub struct Restricted {
    dset: CSet,
    comp: Composition,
    psi: CSet,
    inclusion: Functor,
}

impl Restricted {
    /// The restricted C-set over the subcategory.
    pub fn dset(&self) -> &CSet {
        &self.dset
    }

    /// Class index of `[g, p]` in the fiber at `d`, with `g` a parent
    /// morphism from the middle object `c` into the image of `d`.
    pub fn class_of(&self, d: ObjId, c: ObjId, g_index: usize, p: usize) -> Option<usize> {
        self.comp.class_of(d, ObjId(0), c, g_index, p)
    }

    /// Identifies a class `[g, p]` of `r(Psi)(d)` with the element
    /// `Psi(g)(p)` of `Psi` at the image of `d`, checking that every
    /// member of the class gives the same value.
    pub fn identify(&self, d: ObjId, class: usize) -> Result<usize, AdjunctionError> {
        let parent = self.psi.base().clone();
        let target = self.inclusion.on_obj(d);
        let mut value: Option<(usize, String)> = None;
        for &(c, g_index, p) in self.comp.class_members(d, ObjId(0), class) {
            let g = parent.hom(c, target)[g_index];
            let out = self.psi.action(g)[p];
            match &value {
                None => {
                    value = Some((
                        out,
                        format!("{}, {}", parent.mor_name(g), self.psi.carrier(c)[p]),
                    ))
                }
                Some((seen, first)) if *seen != out => {
                    return Err(AdjunctionError::IllDefinedOnClasses {
                        m1: first.clone(),
                        m2: format!("{}, {}", parent.mor_name(g), self.psi.carrier(c)[p]),
                    });
                }
                Some(_) => {}
            }
        }
        Ok(value.expect("classes are non-empty").0)
    }

    /// The identification of `r(Psi)` with the plain restriction of
    /// `Psi`, as a natural transformation (an isomorphism whenever the
    /// identification is well-defined).
    pub fn identification(&self, sub: &Subcategory) -> Result<NatTrans, AdjunctionError> {
        let plain = self.psi.restrict(sub)?;
        let components = sub
            .cat()
            .objects()
            .map(|d| {
                (0..self.dset.carrier(d).len())
                    .map(|class| self.identify(d, class))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NatTrans::new(self.dset.clone(), plain, components)?)
    }
}

impl AdjunctionContext {
    /// Builds the restriction biset `(D, C)` and induction biset `(C, D)`
    /// for the given inclusion.
    pub fn new(sub: Subcategory) -> Self {
        let parent_id = Functor::identity(sub.parent().clone());
        let restriction = biset::hom_biset(sub.inclusion(), &parent_id).expect("shared codomain");
        let induction = biset::hom_biset(&parent_id, sub.inclusion()).expect("shared codomain");
        AdjunctionContext {
            sub,
            restriction,
            induction,
        }
    }

    pub fn sub(&self) -> &Subcategory {
        &self.sub
    }

    pub fn parent(&self) -> &Arc<crate::category::Category> {
        self.sub.parent()
    }

    pub fn restriction_biset(&self) -> &Biset {
        &self.restriction
    }

    pub fn induction_biset(&self) -> &Biset {
        &self.induction
    }

    fn induction_index(&self, c: ObjId, y: ObjId, m: MorId) -> Option<usize> {
        let from = self.sub.inclusion().on_obj(y);
        self.parent().hom(from, c).iter().position(|&h| h == m)
    }

    fn restriction_index(&self, d: ObjId, c: ObjId, m: MorId) -> Option<usize> {
        let to = self.sub.inclusion().on_obj(d);
        self.parent().hom(c, to).iter().position(|&h| h == m)
    }

    /// `r(Psi)` by biset composition, for `Psi` over the parent.
    pub fn restrict(&self, psi: &CSet) -> Result<Restricted, AdjunctionError> {
        if psi.base().as_ref() != self.parent().as_ref() {
            return Err(AdjunctionError::BaseMismatch);
        }
        let comp = biset::compose(&self.restriction, &biset::cset_as_biset(psi))?;
        let dset = biset::biset_to_cset(comp.biset()).expect("right category is terminal");
        Ok(Restricted {
            dset,
            comp,
            psi: psi.clone(),
            inclusion: self.sub.inclusion().clone(),
        })
    }

    /// The plain restriction (same carriers and actions on the
    /// subcategory), for comparison with [`AdjunctionContext::restrict`].
    pub fn plain_restrict(&self, psi: &CSet) -> Result<CSet, AdjunctionError> {
        Ok(psi.restrict(&self.sub)?)
    }

    /// `i(Omega)` by biset composition, for `Omega` over the subcategory.
    pub fn induce(&self, omega: &CSet) -> Result<Induced, AdjunctionError> {
        if omega.base().as_ref() != self.sub.cat().as_ref() {
            return Err(AdjunctionError::BaseMismatch);
        }
        let comp = biset::compose(&self.induction, &biset::cset_as_biset(omega))?;
        let cset = biset::biset_to_cset(comp.biset()).expect("right category is terminal");
        Ok(Induced { cset, comp })
    }

    /// The unit `eta: Omega -> r(i(Omega))`, sending `a` at `y` to the
    /// class of `[1, [1, a]]`. Naturality is validated on construction;
    /// query injectivity through [`NatTrans::injective_components`].
    pub fn unit(&self, omega: &CSet) -> Result<NatTrans, AdjunctionError> {
        let induced = self.induce(omega)?;
        let restricted = self.restrict(&induced.cset)?;
        let mut components = Vec::with_capacity(self.sub.cat().object_count());
        for y in self.sub.cat().objects() {
            let iy = self.sub.inclusion().on_obj(y);
            let one = self.parent().identity(iy);
            let f_index = self
                .induction_index(iy, y, one)
                .expect("identity lies in its own hom-set");
            let g_index = self
                .restriction_index(y, iy, one)
                .expect("identity lies in its own hom-set");
            let comp = (0..omega.carrier(y).len())
                .map(|a| {
                    let w = induced
                        .class_of(iy, y, f_index, a)
                        .expect("pair [1, a] is enumerated");
                    restricted
                        .class_of(y, iy, g_index, w)
                        .expect("pair [1, [1, a]] is enumerated")
                })
                .collect();
            components.push(comp);
        }
        Ok(NatTrans::new(
            omega.clone(),
            restricted.dset.clone(),
            components,
        )?)
    }

    /// Fixes a pair `(Omega, Psi)` and computes both adjoint images, so
    /// the transports and the exhaustive verification can run.
    pub fn pair(&self, omega: &CSet, psi: &CSet) -> Result<AdjointPair, AdjunctionError> {
        let induced = self.induce(omega)?;
        let restricted = self.restrict(psi)?;
        Ok(AdjointPair {
            ctx: self.clone(),
            omega: omega.clone(),
            psi: psi.clone(),
            induced,
            restricted,
        })
    }
}

/// A fixed `(Omega, Psi)` with `i(Omega)` and `r(Psi)` computed.
#[derive(Clone, Debug)]
pub struct AdjointPair {
    ctx: AdjunctionContext,
    omega: CSet,
    psi: CSet,
    induced: Induced,
    restricted: Restricted,
}

/// Outcome of the exhaustive adjunction check for one `(Omega, Psi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub hom_induced_psi: usize,
    pub hom_omega_restricted: usize,
    pub mutually_inverse: bool,
}

impl AdjunctionReport {
    pub fn pass(&self) -> bool {
        self.hom_induced_psi == self.hom_omega_restricted && self.mutually_inverse
    }
}

impl AdjointPair {
    pub fn induced(&self) -> &Induced {
        &self.induced
    }

    pub fn restricted(&self) -> &Restricted {
        &self.restricted
    }

    /// Transports `zeta: i(Omega) -> Psi` to `alpha(zeta): Omega -> r(Psi)`
    /// by evaluating at the classes `[1, a]`.
    pub fn alpha(&self, zeta: &NatTrans) -> Result<NatTrans, AdjunctionError> {
        if zeta.src() != &self.induced.cset || zeta.tgt() != &self.psi {
            return Err(AdjunctionError::WrongHomSet);
        }
        let sub = self.ctx.sub();
        let mut components = Vec::with_capacity(sub.cat().object_count());
        for y in sub.cat().objects() {
            let iy = sub.inclusion().on_obj(y);
            let one = self.ctx.parent().identity(iy);
            let f_index = self
                .ctx
                .induction_index(iy, y, one)
                .expect("identity lies in its own hom-set");
            let g_index = self
                .ctx
                .restriction_index(y, iy, one)
                .expect("identity lies in its own hom-set");
            let comp = (0..self.omega.carrier(y).len())
                .map(|a| {
                    let w = self
                        .induced
                        .class_of(iy, y, f_index, a)
                        .expect("pair [1, a] is enumerated");
                    let v = zeta.components()[iy.index()][w];
                    self.restricted
                        .class_of(y, iy, g_index, v)
                        .expect("pair [1, v] is enumerated")
                })
                .collect();
            components.push(comp);
        }
        Ok(NatTrans::new(
            self.omega.clone(),
            self.restricted.dset.clone(),
            components,
        )?)
    }

    /// Transports `theta: Omega -> r(Psi)` to `beta(theta): i(Omega) -> Psi`
    /// by `[f, b] |-> Psi(f)(theta(b))`, evaluated on every class member.
    pub fn beta(&self, theta: &NatTrans) -> Result<NatTrans, AdjunctionError> {
        if theta.src() != &self.omega || theta.tgt() != &self.restricted.dset {
            return Err(AdjunctionError::WrongHomSet);
        }
        let parent = self.ctx.parent().clone();
        let sub = self.ctx.sub();
        let mut components = Vec::with_capacity(parent.object_count());
        for c in parent.objects() {
            let mut comp = Vec::with_capacity(self.induced.cset.carrier(c).len());
            for class in 0..self.induced.cset.carrier(c).len() {
                let mut value: Option<(usize, String)> = None;
                for &(y, f_index, b) in self.induced.class_members(c, class) {
                    let iy = sub.inclusion().on_obj(y);
                    let f = parent.hom(iy, c)[f_index];
                    let theta_b = theta.components()[y.index()][b];
                    let p = self.restricted.identify(y, theta_b)?;
                    let out = self.psi.action(f)[p];
                    let describe =
                        || format!("{}, {}", parent.mor_name(f), self.omega.carrier(y)[b].clone());
                    match &value {
                        None => value = Some((out, describe())),
                        Some((seen, first)) if *seen != out => {
                            return Err(AdjunctionError::IllDefinedOnClasses {
                                m1: first.clone(),
                                m2: describe(),
                            });
                        }
                        Some(_) => {}
                    }
                }
                comp.push(value.expect("classes are non-empty").0);
            }
            components.push(comp);
        }
        Ok(NatTrans::new(
            self.induced.cset.clone(),
            self.psi.clone(),
            components,
        )?)
    }

    /// Enumerates both hom-sets and checks that `alpha` and `beta` are
    /// mutually inverse bijections on every element.
    pub fn verify(&self, bound: usize) -> Result<AdjunctionReport, AdjunctionError> {
        let left = nat_trans_between(&self.induced.cset, &self.psi, bound)?;
        let right = nat_trans_between(&self.omega, &self.restricted.dset, bound)?;
        let mut mutually_inverse = left.len() == right.len();
        if mutually_inverse {
            for zeta in &left {
                let theta = self.alpha(zeta)?;
                if !right.contains(&theta) || &self.beta(&theta)? != zeta {
                    mutually_inverse = false;
                    break;
                }
            }
        }
        if mutually_inverse {
            for theta in &right {
                let zeta = self.beta(theta)?;
                if !left.contains(&zeta) || &self.alpha(&zeta)? != theta {
                    mutually_inverse = false;
                    break;
                }
            }
        }
        Ok(AdjunctionReport {
            hom_induced_psi: left.len(),
            hom_omega_restricted: right.len(),
            mutually_inverse,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Subcategory;
    use crate::cset::CSet;
    use crate::examples;

    /// D = arrow (x -> y) inside C = path (x -> y -> z).
    fn path_arrow_context() -> AdjunctionContext {
        let c = examples::path();
        let objs = vec![c.obj("x").unwrap(), c.obj("y").unwrap()];
        let mors = vec![
            c.mor("1x").unwrap(),
            c.mor("1y").unwrap(),
            c.mor("a").unwrap(),
        ];
        AdjunctionContext::new(Subcategory::new(c, &objs, &mors).unwrap())
    }

    fn omega_over(ctx: &AdjunctionContext, n: usize) -> CSet {
        let d = ctx.sub().cat().clone();
        let alpha = d.mor("a").unwrap();
        examples::omega_family(&d, alpha, n)
    }

    #[test]
    fn restriction_of_point_and_empty() {
        let ctx = path_arrow_context();
        let point = CSet::point(ctx.parent().clone());
        let r = ctx.restrict(&point).unwrap();
        assert!(r
            .dset()
            .isomorphism(&CSet::point(ctx.sub().cat().clone()))
            .unwrap()
            .is_some());
        let empty = CSet::empty(ctx.parent().clone());
        assert!(ctx.restrict(&empty).unwrap().dset().is_empty());
        assert!(ctx
            .induce(&CSet::empty(ctx.sub().cat().clone()))
            .unwrap()
            .cset()
            .is_empty());
    }

    #[test]
    fn restriction_matches_plain_restriction() {
        let ctx = path_arrow_context();
        for psi in [
            CSet::point(ctx.parent().clone()),
            CSet::representable(ctx.parent().clone(), ObjId(0)),
            CSet::representable(ctx.parent().clone(), ObjId(1)),
        ] {
            let r = ctx.restrict(&psi).unwrap();
            let ident = r.identification(ctx.sub()).unwrap();
            assert!(ident.is_bijective());
        }
    }

    #[test]
    fn induction_along_identity_inclusion_is_identity() {
        let c2 = examples::delooping_cyclic(2);
        let ctx = AdjunctionContext::new(Subcategory::full(c2.clone()));
        let regular = examples::regular(&c2);
        let induced = ctx.induce(&regular).unwrap();
        assert!(induced.cset().isomorphism(&regular).unwrap().is_some());
    }

    #[test]
    fn induced_omega_restricts_to_contain_omega() {
        let ctx = path_arrow_context();
        for n in 1..=3 {
            let omega = omega_over(&ctx, n);
            let induced = ctx.induce(&omega).unwrap();
            let restricted = ctx.restrict(induced.cset()).unwrap();
            let found = restricted
                .dset()
                .decompose()
                .into_iter()
                .any(|part| part.isomorphism(&omega).unwrap().is_some());
            assert!(found, "n = {n}");
        }
    }

    #[test]
    fn unit_is_natural_and_injective_for_omega_family() {
        let ctx = path_arrow_context();
        for n in 0..=4 {
            let omega = omega_over(&ctx, n);
            let eta = ctx.unit(&omega).unwrap();
            assert!(
                eta.injective_components().iter().all(|&b| b),
                "unit injective for n = {n}"
            );
        }
    }

    #[test]
    fn alpha_of_identity_is_unit() {
        let ctx = path_arrow_context();
        let omega = omega_over(&ctx, 2);
        let induced = ctx.induce(&omega).unwrap();
        let pair = ctx.pair(&omega, induced.cset()).unwrap();
        let alpha_id = pair.alpha(&NatTrans::identity(induced.cset())).unwrap();
        let eta = ctx.unit(&omega).unwrap();
        assert_eq!(alpha_id.components(), eta.components());
    }

    #[test]
    fn transports_are_mutually_inverse() {
        let ctx = path_arrow_context();
        let omega = omega_over(&ctx, 1);
        let psi = CSet::point(ctx.parent().clone());
        let pair = ctx.pair(&omega, &psi).unwrap();
        let report = pair.verify(DEFAULT_HOM_BOUND).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.hom_induced_psi, report.hom_omega_restricted);
    }

    #[test]
    fn empty_omega_gives_singleton_hom_sets() {
        let ctx = path_arrow_context();
        let omega = CSet::empty(ctx.sub().cat().clone());
        let psi = CSet::point(ctx.parent().clone());
        let report = ctx.pair(&omega, &psi).unwrap().verify(100).unwrap();
        assert_eq!(report.hom_induced_psi, 1);
        assert_eq!(report.hom_omega_restricted, 1);
        assert!(report.pass());
    }

    #[test]
    fn regular_c2_hom_sets_have_two_elements() {
        let c2 = examples::delooping_cyclic(2);
        let ctx = AdjunctionContext::new(Subcategory::full(c2.clone()));
        let regular = examples::regular(&c2);
        let report = ctx
            .pair(&regular, &regular)
            .unwrap()
            .verify(DEFAULT_HOM_BOUND)
            .unwrap();
        assert_eq!(report.hom_induced_psi, 2);
        assert_eq!(report.hom_omega_restricted, 2);
        assert!(report.pass());
    }

    #[test]
    fn induction_preserves_disjoint_unions() {
        let ctx = path_arrow_context();
        let a = omega_over(&ctx, 1);
        let b = omega_over(&ctx, 2);
        let sum = a.disjoint_union(&b).unwrap();
        let i_sum = ctx.induce(&sum).unwrap();
        let i_a = ctx.induce(&a).unwrap();
        let i_b = ctx.induce(&b).unwrap();
        let rebuilt = i_a.cset().disjoint_union(i_b.cset()).unwrap();
        assert!(i_sum.cset().isomorphism(&rebuilt).unwrap().is_some());
    }
}
