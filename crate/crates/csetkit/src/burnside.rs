/*! Burnside rings of finite categories.

The Burnside ring has the isomorphism classes of indecomposable C-sets as
a Z-basis; addition is disjoint union and multiplication is the pointwise
product followed by decomposition. [`IsoClassRegistry`] owns the basis:
representatives are registered in first-seen order, so element coefficients
and multiplication tables are reproducible across runs.

For a connected groupoid the basis is finite and
[`enumerate_indecomposables`] computes it exhaustively: over a groupoid,
walks reduce to morphisms, so an indecomposable C-set is a single
morphism-orbit and its carrier at `y` has at most `|Hom(x0, y)|` elements.
Candidates up to that cap are generated by the functorial-assignment
search, filtered for indecomposability, and deduplicated up to
isomorphism. For anything else the basis is infinite and the function
returns a constructive certificate instead (see [`crate::characterize`]).
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{Category, ObjId};
use crate::characterize::{self, CharacterizeError, InfiniteTypeCertificate};
use crate::cset::{for_each_cset, CSet, CSetError};

#[derive(Clone, Debug, Error)]
pub enum BurnsideError {
    #[error("the category is not connected")]
    NotConnected,
    #[error("the category has no objects")]
    EmptyCategory,
    #[error("the C-set is not over the registry's base category")]
    BaseMismatch,
    #[error("the registry is not complete, so the table cannot be tabulated")]
    IncompleteRegistry,
    #[error(transparent)]
    CSet(#[from] CSetError),
    #[error("building the infinite-type certificate failed: {0}")]
    Witness(Box<CharacterizeError>),
}

impl From<CharacterizeError> for BurnsideError {
    fn from(err: CharacterizeError) -> Self {
        BurnsideError::Witness(Box::new(err))
    }
}

/// An integer combination of registered indecomposable classes, keyed by
/// registry index; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BurnsideElt {
    coeffs: BTreeMap<usize, i64>,
}

impl BurnsideElt {
    pub fn zero() -> Self {
        BurnsideElt::default()
    }

    pub fn basis(class: usize) -> Self {
        BurnsideElt {
            coeffs: BTreeMap::from([(class, 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, class: usize) -> i64 {
        self.coeffs.get(&class).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn add_scaled(&mut self, other: &BurnsideElt, scale: i64) {
        for (class, coeff) in other.coeffs() {
            let entry = self.coeffs.entry(class).or_insert(0);
            *entry += coeff * scale;
            if *entry == 0 {
                self.coeffs.remove(&class);
            }
        }
    }

    pub fn plus(&self, other: &BurnsideElt) -> BurnsideElt {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn minus(&self, other: &BurnsideElt) -> BurnsideElt {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }
}

/// The ordered basis of a Burnside ring: pairwise non-isomorphic
/// indecomposable representatives over a fixed base.
///
/// Extension is the only mutating step; a registry marked complete
/// rejects unseen classes instead of growing.
#[derive(Clone, Debug)]
pub struct IsoClassRegistry {
    base: Arc<Category>,
    reps: Vec<CSet>,
    complete: bool,
}

impl IsoClassRegistry {
    pub fn new(base: Arc<Category>) -> Self {
        IsoClassRegistry {
            base,
            reps: Vec::new(),
            complete: false,
        }
    }

    pub fn base(&self) -> &Arc<Category> {
        &self.base
    }

    pub fn reps(&self) -> &[CSet] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    fn mark_complete(&mut self) {
        self.complete = true;
    }

    /// A short display name for a class: its index and carrier sizes.
    pub fn class_name(&self, class: usize) -> String {
        let sizes: Vec<String> = self.reps[class]
            .sizes()
            .iter()
            .map(|s| s.to_string())
            .collect();
        format!("c{class}[{}]", sizes.join(","))
    }

    pub fn find_class(&self, candidate: &CSet) -> Option<usize> {
        self.reps
            .iter()
            .position(|rep| rep.isomorphism(candidate).map(|o| o.is_some()).unwrap_or(false))
    }

    /// The class index of an indecomposable C-set, registering it if it
    /// is unseen (rejected when the registry is complete).
    pub fn class_of(&mut self, component: &CSet) -> Result<usize, BurnsideError> {
        if component.base().as_ref() != self.base.as_ref() {
            return Err(BurnsideError::BaseMismatch);
        }
        debug_assert!(component.is_indecomposable());
        if let Some(found) = self.find_class(component) {
            return Ok(found);
        }
        if self.complete {
            return Err(BurnsideError::IncompleteRegistry);
        }
        self.reps.push(component.clone());
        Ok(self.reps.len() - 1)
    }

    /// Decomposes a C-set and reads off its coefficients: the multiplicity
    /// of each isomorphism class among the components.
    pub fn decompose_to_element(&mut self, omega: &CSet) -> Result<BurnsideElt, BurnsideError> {
        if omega.base().as_ref() != self.base.as_ref() {
            return Err(BurnsideError::BaseMismatch);
        }
        let mut elt = BurnsideElt::zero();
        for component in omega.decompose() {
            let class = self.class_of(&component)?;
            elt.add_scaled(&BurnsideElt::basis(class), 1);
        }
        Ok(elt)
    }

    /// Bilinear extension of the pointwise product followed by
    /// decomposition.
    pub fn ring_multiply(
        &mut self,
        a: &BurnsideElt,
        b: &BurnsideElt,
    ) -> Result<BurnsideElt, BurnsideError> {
        let mut out = BurnsideElt::zero();
        let pairs: Vec<(usize, i64, usize, i64)> = a
            .coeffs()
            .flat_map(|(i, ai)| b.coeffs().map(move |(j, bj)| (i, ai, j, bj)))
            .collect();
        for (i, ai, j, bj) in pairs {
            let product = self.reps[i].product(&self.reps[j])?;
            let decomposed = self.decompose_to_element(&product)?;
            out.add_scaled(&decomposed, ai * bj);
        }
        Ok(out)
    }

    /// The multiplicative identity: the class decomposition of the point
    /// C-set.
    pub fn ring_identity(&mut self) -> Result<BurnsideElt, BurnsideError> {
        if self.base.object_count() == 0 {
            return Err(BurnsideError::EmptyCategory);
        }
        let point = CSet::point(self.base.clone());
        self.decompose_to_element(&point)
    }

    /// The full table of basis products; requires a complete registry.
    pub fn multiplication_table(&mut self) -> Result<Vec<Vec<BurnsideElt>>, BurnsideError> {
        if !self.complete {
            return Err(BurnsideError::IncompleteRegistry);
        }
        let n = self.reps.len();
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(self.ring_multiply(&BurnsideElt::basis(i), &BurnsideElt::basis(j))?);
            }
            table.push(row);
        }
        Ok(table)
    }

    /// Renders an element against this registry's basis names.
    pub fn render(&self, elt: &BurnsideElt) -> String {
        if elt.is_zero() {
            return "0".to_owned();
        }
        elt.coeffs()
            .map(|(class, coeff)| {
                if coeff == 1 {
                    self.class_name(class)
                } else {
                    format!("{coeff}*{}", self.class_name(class))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Either a complete basis (groupoid case) or a certificate that the
/// basis is infinite.
#[derive(Clone, Debug)]
pub enum Enumeration {
    Registry(IsoClassRegistry),
    Infinite(InfiniteTypeCertificate),
}

/// Exhaustive indecomposable enumeration for a finite connected category.
///
/// `bound` caps carrier sizes per object on top of the hom-set bound that
/// is valid over groupoids; `witness_depth` is how many members the
/// infinite-type certificate exhibits in the non-groupoid case.
pub fn enumerate_indecomposables(
    base: &Arc<Category>,
    bound: usize,
    witness_depth: usize,
) -> Result<Enumeration, BurnsideError> {
    if base.object_count() == 0 {
        return Err(BurnsideError::EmptyCategory);
    }
    if !base.is_connected() {
        return Err(BurnsideError::NotConnected);
    }
    if !base.is_groupoid() {
        let (alpha, _side) =
            characterize::find_noninvertible(base).expect("non-groupoid has a non-isomorphism");
        let certificate = characterize::witness_infinite_type(base, alpha, witness_depth)?;
        return Ok(Enumeration::Infinite(certificate));
    }

    let x0 = ObjId(0);
    let caps: Vec<usize> = base
        .objects()
        .map(|y| bound.min(base.hom(x0, y).len()))
        .collect();
    let mut registry = IsoClassRegistry::new(base.clone());

    // Iterate carrier-size tuples in lexicographic order; over a connected
    // groupoid an indecomposable has every carrier non-empty.
    let mut sizes = vec![1usize; caps.len()];
    loop {
        for_each_cset(base, &sizes, &mut |candidate| {
            if candidate.is_indecomposable() && registry.find_class(&candidate).is_none() {
                registry.reps.push(candidate);
            }
            true
        });
        // Advance the size tuple.
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                registry.mark_complete();
                return Ok(Enumeration::Registry(registry));
            }
            pos -= 1;
            if sizes[pos] < caps[pos] {
                sizes[pos] += 1;
                for s in sizes.iter_mut().skip(pos + 1) {
                    *s = 1;
                }
                break;
            }
        }
    }
}

/// Rank verdict for a Burnside ring.
#[derive(Clone, Debug)]
pub enum Rank {
    Finite(usize),
    Infinite(InfiniteTypeCertificate),
}

/// Number of basis classes if the category is a groupoid, or the
/// infinite-rank certificate otherwise.
pub fn rank(
    base: &Arc<Category>,
    bound: usize,
    witness_depth: usize,
) -> Result<Rank, BurnsideError> {
    Ok(match enumerate_indecomposables(base, bound, witness_depth)? {
        Enumeration::Registry(reg) => Rank::Finite(reg.len()),
        Enumeration::Infinite(cert) => Rank::Infinite(cert),
    })
}
